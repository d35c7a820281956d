#include "chiralpinem/proton.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

#include "chiralpinem/constants.hpp"
#include "chiralpinem/errors.hpp"

namespace chiralpinem::proton {

ProtonModel::Profile profile_from_string(const std::string& name) {
    if (name == "exponential") return ProtonModel::Profile::Exponential;
    if (name == "gaussian") return ProtonModel::Profile::Gaussian;
    throw ConfigError("proton.profile: unknown profile '" + name + "'");
}

std::string to_string(ProtonModel::Profile p) {
    return p == ProtonModel::Profile::Exponential ? "exponential" : "gaussian";
}

namespace {

struct Fftw3dWorkspace {
    int n;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit Fftw3dWorkspace(int n_) : n(n_) {
        const std::size_t n_real = static_cast<std::size_t>(n) * n * n;
        const std::size_t n_spec = static_cast<std::size_t>(n) * n * (n / 2 + 1);
        real = fftw_alloc_real(n_real);
        spec = fftw_alloc_complex(n_spec);
        if (!real || !spec) throw std::bad_alloc();
        fwd = fftw_plan_dft_r2c_3d(n, n, n, real, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_3d(n, n, n, spec, real, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("fftw 3d plan failed");
    }
    ~Fftw3dWorkspace() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }
    Fftw3dWorkspace(const Fftw3dWorkspace&) = delete;
    Fftw3dWorkspace& operator=(const Fftw3dWorkspace&) = delete;
};

// Reduced computation, lengths in units of the waist. Returns mu_z / mu_N.
double reduced_moment(const ProtonModel& model, int l, double kernel_scale, int n,
                      double extent) {
    if (l == 0) return 0.0;  // no probability current
    const int al = std::abs(l);
    const double h = 2.0 * extent / n;

    // Grid coordinate for index i, FFT-aligned (center at index n/2).
    auto coord = [&](int i) { return (static_cast<double>(i) - n / 2) * h; };

    // 2D on-grid norm of |psi|^2 over one transverse slice.
    double norm2d = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const double y = coord(iy);
        for (int ix = 0; ix < n; ++ix) {
            const double x = coord(ix);
            const double r2 = x * x + y * y;
            norm2d += std::pow(r2, al) * std::exp(-2.0 * r2);
        }
    }
    norm2d *= h * h;

    Fftw3dWorkspace ws(n);
    const std::size_t n_slice = static_cast<std::size_t>(n) * n;
    const std::size_t n_spec_cols = static_cast<std::size_t>(n / 2 + 1);

    // Reduced current components; t = |psi|^2 / R^2 is smooth at the origin.
    auto current_factor = [&](double r2) {
        // R^(2|l| - 2) exp(-2 R^2) / norm
        double v = std::exp(-2.0 * r2) / norm2d;
        for (int q = 1; q < al; ++q) v *= r2;
        return v;
    };

    // Form factor of the unit-charge internal density at reduced wavenumber k.
    auto form_factor = [&](double k2) {
        if (model.profile == ProtonModel::Profile::Exponential) {
            const double ka2 = k2 * kernel_scale * kernel_scale / 12.0;  // a = rms/sqrt(12)
            return 1.0 / ((1.0 + ka2) * (1.0 + ka2));
        }
        const double ks2 = k2 * kernel_scale * kernel_scale / 3.0;  // sigma = rms/sqrt(3)
        return std::exp(-0.5 * ks2);
    };

    auto k_of = [&](int i) {
        const int f = (i <= n / 2) ? i : i - n;
        return 2.0 * constants::pi * f / (n * h);
    };

    const double inv_n3 = 1.0 / (static_cast<double>(n) * n * n);
    double moment = 0.0;

    // Component 0: J_x (weighted by -y in the moment); component 1: J_y (+x).
    for (int comp = 0; comp < 2; ++comp) {
        for (int iz = 0; iz < n; ++iz) {
            double* slab = ws.real + static_cast<std::size_t>(iz) * n_slice;
            if (iz == 0) {
                for (int iy = 0; iy < n; ++iy) {
                    const double y = coord(iy);
                    for (int ix = 0; ix < n; ++ix) {
                        const double x = coord(ix);
                        const double r2 = x * x + y * y;
                        const double t = l * current_factor(r2);
                        slab[static_cast<std::size_t>(iy) * n + ix] =
                            (comp == 0) ? -y * t : x * t;
                    }
                }
            } else {
                // z-uniform current: copy the first slice
                double* first = ws.real;
                for (std::size_t q = 0; q < n_slice; ++q) slab[q] = first[q];
            }
        }
        fftw_execute(ws.fwd);
        for (int iz = 0; iz < n; ++iz) {
            const double kz = k_of(iz);
            for (int iy = 0; iy < n; ++iy) {
                const double ky = k_of(iy);
                for (std::size_t ix = 0; ix < n_spec_cols; ++ix) {
                    const double kx = 2.0 * constants::pi * static_cast<double>(ix) / (n * h);
                    const double ff =
                        form_factor(kx * kx + ky * ky + kz * kz) * inv_n3;
                    fftw_complex& c =
                        ws.spec[(static_cast<std::size_t>(iz) * n + iy) * n_spec_cols + ix];
                    c[0] *= ff;
                    c[1] *= ff;
                }
            }
        }
        fftw_execute(ws.bwd);

        double acc = 0.0;
        for (int iz = 0; iz < n; ++iz) {
            const double* slab = ws.real + static_cast<std::size_t>(iz) * n_slice;
            for (int iy = 0; iy < n; ++iy) {
                const double y = coord(iy);
                for (int ix = 0; ix < n; ++ix) {
                    const double x = coord(ix);
                    const double weight = (comp == 0) ? -y : x;
                    acc += weight * slab[static_cast<std::size_t>(iy) * n + ix];
                }
            }
        }
        moment += acc;
    }

    // mu/mu_N = (1/L) sum (x j_y - y j_x) h^3 with slab length L = n h.
    return moment * h * h * h / (n * h);
}

}  // namespace

MomentResult magnetic_moment(const ProtonModel& model, const OAMWavefunction& wf,
                             const QuadratureSpec& quad) {
    if (!(model.rms_charge_radius > 0.0))
        throw std::domain_error("magnetic_moment: rms charge radius must be > 0");
    if (!(wf.waist > 0.0)) throw std::domain_error("magnetic_moment: waist must be > 0");
    if (quad.n < 32 || quad.n % 2 != 0)
        throw std::domain_error("magnetic_moment: quadrature n must be even and >= 32");

    const double kernel_scale = model.rms_charge_radius / wf.waist;

    MomentResult res;
    res.n = quad.n;
    res.mu_over_mu_n = reduced_moment(model, wf.l, kernel_scale, quad.n, quad.extent_waists);
    const double coarse =
        reduced_moment(model, wf.l, kernel_scale, quad.n / 2, quad.extent_waists);
    res.convergence_defect = std::abs(res.mu_over_mu_n - coarse) /
                             std::max(std::abs(res.mu_over_mu_n), 1e-12);
    if (res.convergence_defect > quad.convergence_tol)
        throw ResolutionError("magnetic_moment: quadrature did not converge (defect " +
                              std::to_string(res.convergence_defect) + ")");
    return res;
}

std::vector<SweepPoint> moment_vs_waist_sweep(const ProtonModel& model, int l,
                                              const std::vector<double>& waists,
                                              const QuadratureSpec& quad) {
    for (std::size_t i = 0; i < waists.size(); ++i) {
        if (!(waists[i] > 0.0))
            throw std::domain_error("moment_vs_waist_sweep: waists must be > 0");
        if (i > 0 && !(waists[i] > waists[i - 1]))
            throw std::domain_error("moment_vs_waist_sweep: waists must be ascending");
    }
    std::vector<SweepPoint> out;
    out.reserve(waists.size());
    for (double w : waists) {
        const MomentResult r = magnetic_moment(model, OAMWavefunction{l, w}, quad);
        out.push_back(SweepPoint{w, r.mu_over_mu_n, r.convergence_defect});
    }
    return out;
}

}  // namespace chiralpinem::proton
