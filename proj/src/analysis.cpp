#include "chiralpinem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <limits>

#include "chiralpinem/bessel.hpp"
#include "chiralpinem/constants.hpp"
#include "chiralpinem/errors.hpp"

namespace chiralpinem::analysis {

namespace {

struct WindowBank {
    double sigma = 0.0;
    double r0 = 0.0;       // first window center
    double spacing = 0.0;  // center-to-center
    int n = 0;

    // Index range of windows whose 6-sigma support covers radius R.
    void cover(double R, int& j_lo, int& j_hi) const {
        const double reach = 6.0 * sigma;
        j_lo = std::max(0, static_cast<int>(std::ceil((R - reach - r0) / spacing)));
        j_hi = std::min(n - 1, static_cast<int>(std::floor((R + reach - r0) / spacing)));
    }
    double center(int j) const { return r0 + j * spacing; }
};

WindowBank make_bank(const Grid2D& grid, double r_lo, double r_hi) {
    WindowBank bank;
    bank.sigma = 1.5 * std::min(grid.dx(), grid.dy());
    bank.spacing = 2.0 * bank.sigma;
    bank.r0 = r_lo;
    bank.n = std::max(1, static_cast<int>(std::floor((r_hi - r_lo) / bank.spacing)) + 1);
    return bank;
}

// C_{j,m} accumulation shared by oam_spectrum and helicity_of_field.
// coeff layout: [j][m + m_max].
std::vector<Complex> window_coefficients(const ComplexField& field, const WindowBank& bank,
                                         int m_max, double cx, double cy) {
    const Grid2D& g = field.grid;
    std::vector<Complex> coeff(static_cast<std::size_t>(bank.n) * (2 * m_max + 1),
                               Complex(0.0, 0.0));
    const double reach = 6.0 * bank.sigma;
    const double inv_two_sigma_sq = 1.0 / (2.0 * bank.sigma * bank.sigma);
    const double r_min = bank.r0 - reach;
    const double r_max = bank.center(bank.n - 1) + reach;

    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy) - cy;
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix) - cx;
            const double R = std::hypot(x, y);
            if (R < r_min || R > r_max || R == 0.0) continue;
            const Complex v = field.at(ix, iy);
            if (v == Complex(0.0, 0.0)) continue;
            int j_lo, j_hi;
            bank.cover(R, j_lo, j_hi);
            if (j_lo > j_hi) continue;

            const Complex e_minus = Complex(x, -y) / R;  // exp(-i phi)
            // phases[m + m_max] = v * exp(-i m phi)
            thread_local std::vector<Complex> phases;
            phases.assign(2 * m_max + 1, Complex(0.0, 0.0));
            phases[m_max] = v;
            Complex pw(1.0, 0.0);
            for (int m = 1; m <= m_max; ++m) {
                pw *= e_minus;
                phases[m_max + m] = v * pw;
                phases[m_max - m] = v * std::conj(pw);
            }
            for (int j = j_lo; j <= j_hi; ++j) {
                const double d = R - bank.center(j);
                const double w = std::exp(-d * d * inv_two_sigma_sq);
                Complex* row = coeff.data() + static_cast<std::size_t>(j) * (2 * m_max + 1);
                for (int q = 0; q < 2 * m_max + 1; ++q) row[q] += w * phases[q];
            }
        }
    }
    return coeff;
}

double resolve_r_hi(const Grid2D& grid, double r_hi) {
    return r_hi > 0.0 ? r_hi : grid.usable_radius();
}

}  // namespace

OAMSpectrum oam_spectrum(const ComplexField& field, const RadialRange& range, int m_max,
                         double center_x, double center_y) {
    if (m_max < 1) throw std::domain_error("oam_spectrum: m_max must be >= 1");
    const double r_hi = resolve_r_hi(field.grid, range.r_hi);
    if (!(range.r_lo >= 0.0) || !(r_hi > range.r_lo))
        throw std::domain_error("oam_spectrum: invalid radial range");
    if (r_hi > field.grid.usable_radius())
        throw std::domain_error("oam_spectrum: radial range outside grid");

    const WindowBank bank = make_bank(field.grid, range.r_lo, r_hi);
    const std::vector<Complex> coeff =
        window_coefficients(field, bank, m_max, center_x, center_y);

    OAMSpectrum spec;
    spec.m_max = m_max;
    spec.power.assign(2 * m_max + 1, 0.0);
    spec.r_lo = range.r_lo;
    spec.r_hi = r_hi;
    spec.window_sigma = bank.sigma;
    spec.n_windows = bank.n;

    double total = 0.0;
    for (int j = 0; j < bank.n; ++j)
        for (int q = 0; q < 2 * m_max + 1; ++q) {
            const double p = std::norm(coeff[static_cast<std::size_t>(j) * (2 * m_max + 1) + q]);
            spec.power[q] += p;
            total += p;
        }
    if (total <= 0.0)
        throw std::domain_error("oam_spectrum: field has no power in the radial range");
    for (double& p : spec.power) p /= total;
    return spec;
}

ChargeResult topological_charge(const ComplexField& field, double loop_radius,
                                double noise_floor_rel, double center_x, double center_y) {
    const Grid2D& g = field.grid;
    if (!(loop_radius > 0.0) || loop_radius > g.usable_radius())
        throw std::domain_error("topological_charge: loop radius outside grid");

    const double h = std::min(g.dx(), g.dy());
    int n = static_cast<int>(std::ceil(8.0 * 2.0 * constants::pi * loop_radius / h));
    n = std::clamp(n, 512, 16384);

    const double floor = noise_floor_rel * field.max_abs();
    std::vector<Complex> samples(n);
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * constants::pi * i / n;
        const Complex v = field.sample(center_x + loop_radius * std::cos(th),
                                       center_y + loop_radius * std::sin(th));
        if (std::abs(v) < floor)
            throw UnreliableLoopError(
                "topological_charge: field modulus below noise floor on the loop");
        samples[i] = v;
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        total += std::arg(samples[(i + 1) % n] * std::conj(samples[i]));
    const double turns = total / (2.0 * constants::pi);
    ChargeResult res;
    res.charge = static_cast<int>(std::lround(turns));
    res.residual = turns - res.charge;
    return res;
}

double helicity_of_field(const InteractionField& beta, const RadialRange& annulus) {
    const double r_hi = resolve_r_hi(beta.grid, annulus.r_hi);
    if (!(annulus.r_lo >= 0.0) || !(r_hi > annulus.r_lo) || r_hi > beta.grid.usable_radius())
        throw std::domain_error("helicity_of_field: annulus outside grid");

    const WindowBank bank = make_bank(beta.grid, annulus.r_lo, r_hi);
    const ComplexField f = beta.as_complex_field();
    const std::vector<Complex> coeff =
        window_coefficients(f, bank, 1, beta.hole.center_x, beta.hole.center_y);

    double p_plus = 0.0, p_minus = 0.0;
    for (int j = 0; j < bank.n; ++j) {
        p_minus += std::norm(coeff[static_cast<std::size_t>(j) * 3 + 0]);
        p_plus += std::norm(coeff[static_cast<std::size_t>(j) * 3 + 2]);
    }
    if (p_plus + p_minus <= 0.0)
        throw DegenerateFieldError("helicity_of_field: no power in m = +/-1 channels");
    return (p_plus - p_minus) / (p_plus + p_minus);
}

double fringe_period(const RealField& intensity, double angle, double r_min, double r_max,
                     double center_x, double center_y) {
    const Grid2D& g = intensity.grid;
    const double hi = resolve_r_hi(g, r_max);
    if (!(r_min >= 0.0) || !(hi > r_min) || hi > g.usable_radius())
        throw std::domain_error("fringe_period: cut outside grid");

    const double step = 0.5 * std::min(g.dx(), g.dy());
    const int n = static_cast<int>(std::floor((hi - r_min) / step)) + 1;
    std::vector<double> I(n);
    const double ux = std::cos(angle);
    const double uy = std::sin(angle);
    double peak = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = r_min + i * step;
        I[i] = intensity.sample(center_x + s * ux, center_y + s * uy);
        peak = std::max(peak, I[i]);
    }
    const double floor = 1e-6 * peak;

    std::vector<double> maxima;
    for (int i = 1; i + 1 < n; ++i) {
        if (I[i] > floor && I[i] > I[i - 1] && I[i] > I[i + 1]) {
            const double denom = I[i - 1] - 2.0 * I[i] + I[i + 1];
            double frac = 0.0;
            if (denom < 0.0) frac = 0.5 * (I[i - 1] - I[i + 1]) / denom;
            maxima.push_back(r_min + (i + frac) * step);
        }
    }
    if (maxima.size() < 3)
        throw InsufficientFringesError("fringe_period: fewer than 3 maxima along the cut");

    std::vector<double> spacing(maxima.size() - 1);
    for (std::size_t i = 0; i + 1 < maxima.size(); ++i) spacing[i] = maxima[i + 1] - maxima[i];
    std::sort(spacing.begin(), spacing.end());
    const std::size_t mid = spacing.size() / 2;
    if (spacing.size() % 2 == 1) return spacing[mid];
    return 0.5 * (spacing[mid - 1] + spacing[mid]);
}

RadialProfile ring_average(const RealField& map) {
    const Grid2D& g = map.grid;
    const double bin = std::min(g.dx(), g.dy());
    const int n_bins = static_cast<int>(std::floor(g.usable_radius() / bin));
    std::vector<double> sum(n_bins, 0.0);
    std::vector<long> count(n_bins, 0);
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix);
            const int b = static_cast<int>(std::floor(std::hypot(x, y) / bin));
            if (b < n_bins) {
                sum[b] += map.at(ix, iy);
                ++count[b];
            }
        }
    }
    RadialProfile prof;
    for (int b = 0; b < n_bins; ++b) {
        if (count[b] == 0) continue;
        prof.r.push_back((b + 0.5) * bin);
        prof.mean.push_back(sum[b] / count[b]);
    }
    return prof;
}

double peak_radius(const RadialProfile& profile) {
    if (profile.r.size() < 3) throw std::domain_error("peak_radius: profile too short");
    std::size_t best = 0;
    for (std::size_t i = 1; i < profile.mean.size(); ++i)
        if (profile.mean[i] > profile.mean[best]) best = i;
    if (best == 0 || best + 1 == profile.mean.size()) return profile.r[best];
    const double ym = profile.mean[best - 1], y0 = profile.mean[best], yp = profile.mean[best + 1];
    const double denom = ym - 2.0 * y0 + yp;
    double frac = 0.0;
    if (denom < 0.0) frac = 0.5 * (ym - yp) / denom;
    const double dr = profile.r[1] - profile.r[0];
    return profile.r[best] + frac * dr;
}

double ring_peak_radius(const RealField& map, double r_min) {
    const RadialProfile prof = ring_average(map);
    RadialProfile cut;
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
        if (prof.r[i] < r_min) continue;
        cut.r.push_back(prof.r[i]);
        cut.mean.push_back(prof.mean[i]);
    }
    return peak_radius(cut);
}

SinusoidFit fit_sinusoid(const std::vector<double>& t, const std::vector<double>& y,
                         double period_lo, double period_hi) {
    if (t.size() != y.size() || t.size() < 4)
        throw std::invalid_argument("fit_sinusoid: need >= 4 samples");
    if (!(period_lo > 0.0) || !(period_hi > period_lo))
        throw std::invalid_argument("fit_sinusoid: invalid period bracket");

    const std::size_t n = t.size();
    // For fixed period, the model offset + a cos + b sin is linear; solve the
    // 3x3 normal equations and return the residual sum of squares.
    auto residual = [&](double period, double* coef = nullptr) {
        const double w = 2.0 * constants::pi / period;
        double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        double rhs[3] = {0, 0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            const double c = std::cos(w * t[i]);
            const double s = std::sin(w * t[i]);
            const double base[3] = {1.0, c, s};
            for (int r = 0; r < 3; ++r) {
                for (int q = 0; q < 3; ++q) m[r][q] += base[r] * base[q];
                rhs[r] += base[r] * y[i];
            }
        }
        // Gaussian elimination with partial pivoting.
        int idx[3] = {0, 1, 2};
        double a[3][4];
        for (int r = 0; r < 3; ++r) {
            for (int q = 0; q < 3; ++q) a[r][q] = m[r][q];
            a[r][3] = rhs[r];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            std::swap(a[col], a[piv]);
            std::swap(idx[col], idx[piv]);
            if (a[col][col] == 0.0) return std::numeric_limits<double>::infinity();
            for (int r = col + 1; r < 3; ++r) {
                const double f = a[r][col] / a[col][col];
                for (int q = col; q < 4; ++q) a[r][q] -= f * a[col][q];
            }
        }
        double sol[3];
        for (int r = 2; r >= 0; --r) {
            double s = a[r][3];
            for (int q = r + 1; q < 3; ++q) s -= a[r][q] * sol[q];
            sol[r] = s / a[r][r];
        }
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = std::cos(w * t[i]);
            const double s = std::sin(w * t[i]);
            const double fit = sol[0] + sol[1] * c + sol[2] * s;
            rss += (y[i] - fit) * (y[i] - fit);
        }
        if (coef) {
            coef[0] = sol[0];
            coef[1] = sol[1];
            coef[2] = sol[2];
        }
        return rss;
    };

    const int n_grid = 2000;
    double best_p = period_lo;
    double best_rss = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n_grid; ++i) {
        const double p = period_lo + (period_hi - period_lo) * i / n_grid;
        const double rss = residual(p);
        if (rss < best_rss) {
            best_rss = rss;
            best_p = p;
        }
    }
    // Golden-section refinement around the grid minimum.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    const double half = (period_hi - period_lo) / n_grid;
    double lo = std::max(period_lo, best_p - half);
    double hi = std::min(period_hi, best_p + half);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = residual(x1), f2 = residual(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = residual(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = residual(x2);
        }
    }
    const double p_final = 0.5 * (lo + hi);
    double coef[3] = {0.0, 0.0, 0.0};
    const double rss = residual(p_final, coef);
    if (!std::isfinite(rss))
        throw std::runtime_error("fit_sinusoid: singular normal equations");

    SinusoidFit fit;
    fit.period = p_final;
    fit.offset = coef[0];
    fit.amplitude = std::hypot(coef[1], coef[2]);
    fit.phase = std::atan2(-coef[2], coef[1]);
    fit.rms_residual = std::sqrt(rss / n);
    return fit;
}

int count_sign_changes(const std::vector<double>& y) {
    int changes = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (double v : y) {
        if (v == 0.0) continue;
        if (have_prev && ((v > 0.0) != (prev > 0.0))) ++changes;
        prev = v;
        have_prev = true;
    }
    return changes;
}

DelayScan run_delay_scan(const DelayScanConfig& cfg, const std::vector<double>& delays) {
    for (std::size_t i = 0; i + 1 < delays.size(); ++i)
        if (!(delays[i] < delays[i + 1]))
            throw std::domain_error("run_delay_scan: delays must be strictly increasing");

    optics::IncidentLight light_1 = cfg.light;
    light_1.polarization = cfg.pulse.pol_1;
    optics::IncidentLight light_2 = cfg.light;
    light_2.polarization = cfg.pulse.pol_2;

    const double r2 = cfg.pulse.rel_amplitude_2;
    const InteractionField beta_1 =
        nearfield::synthesize_beta(cfg.hole, cfg.grid, light_1, cfg.stack, cfg.A, cfg.B);
    const InteractionField beta_2 = nearfield::synthesize_beta(
        cfg.hole, cfg.grid, light_2, cfg.stack, cfg.A * r2, cfg.B * r2);

    // Fixed truncation across the scan, from the constructive-superposition bound.
    double u_bound = 0.0;
    for (std::size_t p = 0; p < beta_1.values.size(); ++p)
        u_bound = std::max(u_bound,
                           2.0 * (std::abs(beta_1.values[p]) + std::abs(beta_2.values[p])));
    const int l_max = bessel::truncation_order(u_bound, 2.5e-10);

    const pinem::IncidentWavefunction psi_inc =
        pinem::make_incident_wavefunction(cfg.grid, cfg.beam, cfg.hole);

    DelayScan scan;
    scan.l_max = l_max;
    scan.delays = delays;
    scan.helicity.reserve(delays.size());
    scan.fringe_periods.reserve(delays.size());
    scan.intensity.reserve(delays.size());

    for (double dt : delays) {
        try {
            nearfield::PulsePair pulse = cfg.pulse;
            pulse.delay = dt;
            const InteractionField beta_tot =
                nearfield::superpose_two_pulses(beta_1, beta_2, pulse, cfg.light);
            const pinem::SidebandSet sb = pinem::build_sidebands(psi_inc, beta_tot, l_max);
            const RealField emap = pinem::energy_filtered_map(sb, cfg.passband);

            scan.helicity.push_back(helicity_of_field(beta_tot, cfg.helicity_annulus));
            scan.fringe_periods.push_back(
                fringe_period(emap, cfg.fringe_angle, cfg.fringe_r_min, cfg.fringe_r_max,
                              cfg.hole.center_x, cfg.hole.center_y));
            scan.intensity.push_back(emap.sum() * cfg.grid.pixel_area());
            if (cfg.keep_maps) scan.maps.push_back(emap);
        } catch (const std::exception& e) {
            throw ScanError(dt, e.what());
        }
    }
    return scan;
}

}  // namespace chiralpinem::analysis
