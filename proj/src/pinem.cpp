#include "chiralpinem/pinem.hpp"

#include <cmath>
#include <stdexcept>

#include "chiralpinem/bessel.hpp"
#include "chiralpinem/errors.hpp"

namespace chiralpinem::pinem {

IncidentWavefunction make_incident_wavefunction(const Grid2D& grid,
                                                const optics::ElectronBeam& beam,
                                                const HoleGeometry& hole) {
    if (!(beam.transverse_coherence > 0.0))
        throw std::domain_error("make_incident_wavefunction: transverse coherence must be > 0");
    const double w0 = beam.transverse_coherence;

    IncidentWavefunction out;
    out.coherence_radius = w0;
    out.psi = ComplexField(grid);
    double norm = 0.0;
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y(iy) - hole.center_y;
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x(ix) - hole.center_x;
            const double r2 = x * x + y * y;
            const double a = std::exp(-r2 / (w0 * w0));  // intensity ~ exp(-2 r^2 / w0^2)
            out.psi.at(ix, iy) = Complex(a, 0.0);
            norm += a * a;
        }
    }
    norm *= grid.pixel_area();
    const double scale = 1.0 / std::sqrt(norm);
    for (Complex& v : out.psi.values) v *= scale;
    return out;
}

ComplexField SidebandSet::psi_field(int l) const {
    ComplexField f(grid);
    f.values = psi(l);
    return f;
}

double SidebandSet::total_norm() const {
    double total = 0.0;
    for (const auto& f : fields)
        for (const Complex& v : f) total += std::norm(v);
    return total * grid.pixel_area();
}

int default_l_max(const InteractionField& beta, double tail) {
    double u_max = 0.0;
    for (const Complex& v : beta.values) u_max = std::max(u_max, 2.0 * std::abs(v));
    return bessel::truncation_order(u_max, tail);
}

SidebandSet build_sidebands(const IncidentWavefunction& psi_inc,
                            const InteractionField& beta, int l_max) {
    require_same_grid(psi_inc.psi.grid, beta.grid, "build_sidebands");
    if (l_max < 1) throw std::domain_error("build_sidebands: l_max must be >= 1");

    const Grid2D& grid = beta.grid;
    SidebandSet out;
    out.grid = grid;
    out.hole = beta.hole;
    out.l_max = l_max;
    out.fields.assign(2 * l_max + 1, std::vector<Complex>(grid.size(), Complex(0.0, 0.0)));

    std::vector<double> j;  // J_0..J_lmax at this pixel
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const Complex psi0 = psi_inc.psi.values[p];
        const Complex b = beta.values[p];
        const double ab = std::abs(b);
        if (ab == 0.0) {
            out.fields[l_max][p] = psi0;  // J_0(0) = 1, all other orders vanish
            continue;
        }
        bessel::j_array(2.0 * ab, l_max, j);
        const Complex e_theta = -b / ab;  // exp(i arg(-beta))
        out.fields[l_max][p] = psi0 * j[0];
        Complex pw(1.0, 0.0);
        for (int l = 1; l <= l_max; ++l) {
            pw *= e_theta;
            const Complex base = psi0 * j[l];
            out.fields[l_max + l][p] = base * pw;
            // J_{-l} = (-1)^l J_l
            out.fields[l_max - l][p] = (l % 2 != 0) ? -base * std::conj(pw)
                                                    : base * std::conj(pw);
        }
    }
    return out;
}

RealField energy_filtered_map(const SidebandSet& sidebands, const Passband& band) {
    if (band.min_abs_l < 1)
        throw std::domain_error("energy_filtered_map: passband min |l| must be >= 1");
    RealField out{};
    out.grid = sidebands.grid;
    out.values.assign(sidebands.grid.size(), 0.0);
    const int hi = band.max_abs_l > 0 ? std::min(band.max_abs_l, sidebands.l_max)
                                      : sidebands.l_max;
    for (int l = -hi; l <= hi; ++l) {
        if (std::abs(l) < band.min_abs_l) continue;
        const auto& f = sidebands.psi(l);
        for (std::size_t p = 0; p < f.size(); ++p) out.values[p] += std::norm(f[p]);
    }
    return out;
}

RealField energy_filtered_closed_form(const IncidentWavefunction& psi_inc,
                                      const InteractionField& beta) {
    require_same_grid(psi_inc.psi.grid, beta.grid, "energy_filtered_closed_form");
    RealField out{};
    out.grid = beta.grid;
    out.values.resize(beta.grid.size());
    std::vector<double> j;
    for (std::size_t p = 0; p < out.values.size(); ++p) {
        const double u = 2.0 * std::abs(beta.values[p]);
        double depletion = 0.0;
        if (u > 0.0) {
            bessel::j_array(u, 0, j);
            depletion = 1.0 - j[0] * j[0];
        }
        out.values[p] = std::norm(psi_inc.psi.values[p]) * depletion;
    }
    return out;
}

SpaceEnergyMap space_energy_map(const SidebandSet& sidebands, const LineCut& cut) {
    const Grid2D& grid = sidebands.grid;
    const double usable = grid.usable_radius();
    const double half = cut.half_length > 0.0 ? cut.half_length : usable;
    if (half > usable)
        throw std::domain_error("space_energy_map: cut extends outside the grid");
    const double step = std::min(grid.dx(), grid.dy());
    const int n = cut.n_samples > 0 ? cut.n_samples
                                    : 2 * static_cast<int>(std::floor(half / step)) + 1;
    const double cx = sidebands.hole.center_x;
    const double cy = sidebands.hole.center_y;
    const double ux = std::cos(cut.angle);
    const double uy = std::sin(cut.angle);

    SpaceEnergyMap out;
    out.s.resize(n);
    out.l.resize(2 * sidebands.l_max + 1);
    for (int l = -sidebands.l_max; l <= sidebands.l_max; ++l)
        out.l[l + sidebands.l_max] = l;
    out.values.assign(static_cast<std::size_t>(n) * out.l.size(), 0.0);

    for (int i = 0; i < n; ++i)
        out.s[i] = (n == 1) ? 0.0 : -half + 2.0 * half * i / (n - 1);

    for (std::size_t il = 0; il < out.l.size(); ++il) {
        const ComplexField f = sidebands.psi_field(out.l[il]);
        for (int i = 0; i < n; ++i) {
            const double x = cx + out.s[i] * ux;
            const double y = cy + out.s[i] * uy;
            out.values[static_cast<std::size_t>(i) * out.l.size() + il] =
                std::norm(f.sample(x, y));
        }
    }
    return out;
}

}  // namespace chiralpinem::pinem
