#include <doctest.h>

#include <cmath>
#include <random>

#include "chiralpinem/analysis.hpp"
#include "chiralpinem/constants.hpp"
#include "chiralpinem/errors.hpp"

using namespace chiralpinem;
using Complex = std::complex<double>;

namespace {

const double pi = constants::pi;

Grid2D test_grid() { return Grid2D(256, 256, 2.5e-6, 2.5e-6); }

/// f(R) * exp(i m phi) sampled on pixels; f smooth and vanishing at 0.
ComplexField eigenfield(const Grid2D& g, int m, double scale = 0.6e-6) {
    ComplexField f(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix);
            const double R = std::hypot(x, y);
            if (R == 0.0) continue;
            const double amp = std::pow(R / scale, std::abs(m) + 1) *
                               std::exp(-R * R / (scale * scale));
            f.at(ix, iy) = amp * std::polar(1.0, m * std::atan2(y, x));
        }
    }
    return f;
}

struct BetaSetup {
    nearfield::HoleGeometry hole;
    Grid2D grid = test_grid();
    optics::IncidentLight light;
    optics::MaterialStack stack;

    nearfield::InteractionField beta(int sigma, Complex A = Complex(0, 0),
                                     Complex B = Complex(0.2, 0)) {
        light.polarization = optics::PolarizationState::circular(sigma);
        return nearfield::synthesize_beta(hole, grid, light, stack, A, B);
    }
    nearfield::InteractionField beta_pol(const optics::PolarizationState& pol,
                                         Complex A = Complex(0, 0),
                                         Complex B = Complex(0.2, 0)) {
        light.polarization = pol;
        return nearfield::synthesize_beta(hole, grid, light, stack, A, B);
    }
};

}  // namespace

TEST_CASE("oam_spectrum: pure eigenstates are recovered to machine purity") {
    const Grid2D g = test_grid();
    for (int m : {3, -2, 1}) {
        const ComplexField f = eigenfield(g, m);
        const auto spec = analysis::oam_spectrum(f, {}, 6);
        CHECK(spec.p(m) > 1.0 - 1e-6);
        for (int q = -6; q <= 6; ++q)
            if (q != m) CHECK(spec.p(q) < 1e-6);
        double total = 0.0;
        for (int q = -6; q <= 6; ++q) total += spec.p(q);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("oam_spectrum: charge additivity under pixelwise phase multiplication") {
    const Grid2D g = test_grid();
    // two-component field with support at m = 1 and m = -2
    ComplexField f = eigenfield(g, 1);
    const ComplexField f2 = eigenfield(g, -2, 0.5e-6);
    for (std::size_t p = 0; p < f.values.size(); ++p)
        f.values[p] = 0.8 * f.values[p] + 0.6 * f2.values[p];

    const int q = 2;
    ComplexField shifted = f;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix), y = g.y(iy);
            if (x == 0.0 && y == 0.0) continue;
            shifted.at(ix, iy) *= std::polar(1.0, q * std::atan2(y, x));
        }

    const auto base = analysis::oam_spectrum(f, {}, 6);
    const auto moved = analysis::oam_spectrum(shifted, {}, 6);
    for (int m = -6 + q; m <= 6; ++m)
        CHECK(moved.p(m) == doctest::Approx(base.p(m - q)).epsilon(1e-9).scale(1e-12));
}

TEST_CASE("oam_spectrum rejects empty fields and bad ranges") {
    const Grid2D g = test_grid();
    ComplexField zero(g);
    CHECK_THROWS_AS(analysis::oam_spectrum(zero, {}, 4), std::domain_error);
    const ComplexField f = eigenfield(g, 1);
    CHECK_THROWS_AS(analysis::oam_spectrum(f, {1e-6, 0.5e-6}, 4), std::domain_error);
    CHECK_THROWS_AS(analysis::oam_spectrum(f, {0.0, 1e-3}, 4), std::domain_error);
}

TEST_CASE("topological charge: synthetic vortices and invariances") {
    const Grid2D g = test_grid();
    SUBCASE("exp(i phi) -> +1") {
        const ComplexField f = eigenfield(g, 1);
        const auto r = analysis::topological_charge(f, 0.5e-6);
        CHECK(r.charge == 1);
        CHECK(std::abs(r.residual) < 1e-6);
    }
    SUBCASE("exp(-2 i phi) -> -2") {
        const ComplexField f = eigenfield(g, -2);
        const auto r = analysis::topological_charge(f, 0.5e-6);
        CHECK(r.charge == -2);
        CHECK(std::abs(r.residual) < 1e-6);
    }
    SUBCASE("invariant under global phase and scale") {
        ComplexField f = eigenfield(g, 2);
        const auto base = analysis::topological_charge(f, 0.4e-6);
        for (Complex& v : f.values) v *= 37.0 * std::polar(1.0, 1.234);
        const auto scaled = analysis::topological_charge(f, 0.4e-6);
        CHECK(base.charge == scaled.charge);
        CHECK(std::abs(base.residual - scaled.residual) < 1e-12);
    }
    SUBCASE("dead sector on the loop raises UnreliableLoopError") {
        ComplexField f = eigenfield(g, 1);
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                if (g.x(ix) > 0.2e-6 && std::abs(g.y(iy)) < 0.2e-6) f.at(ix, iy) = 0.0;
        CHECK_THROWS_AS(analysis::topological_charge(f, 0.5e-6), UnreliableLoopError);
    }
}

TEST_CASE("topological charge of the synthesized chiral field at R = 0.3 um") {
    BetaSetup s;
    const auto plus = s.beta(+1);
    const auto res_p = analysis::topological_charge(plus.as_complex_field(), 0.3e-6);
    CHECK(res_p.charge == 1);
    CHECK(std::abs(res_p.residual) < 0.02);

    const auto minus = s.beta(-1);
    const auto res_m = analysis::topological_charge(minus.as_complex_field(), 0.3e-6);
    CHECK(res_m.charge == -1);
    CHECK(std::abs(res_m.residual) < 0.02);
}

TEST_CASE("helicity: pure circular drives saturate, linear is balanced") {
    BetaSetup s;
    const analysis::RadialRange annulus{0.1e-6, 0.35e-6};
    CHECK(analysis::helicity_of_field(s.beta(+1), annulus) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(analysis::helicity_of_field(s.beta(-1), annulus) ==
          doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(analysis::helicity_of_field(
              s.beta_pol(optics::PolarizationState::linear_x()), annulus)) < 1e-9);
}

TEST_CASE("helicity antisymmetry under a_plus <-> a_minus swap") {
    BetaSetup s;
    const analysis::RadialRange annulus{0.1e-6, 0.35e-6};
    const auto pol = optics::jones_to_circular(Complex(0.9, 0.1), Complex(0.2, 0.5));
    optics::PolarizationState swapped;
    swapped.a_plus = pol.a_minus;
    swapped.a_minus = pol.a_plus;
    const double h1 = analysis::helicity_of_field(s.beta_pol(pol, Complex(0.1, 0.0)), annulus);
    const double h2 =
        analysis::helicity_of_field(s.beta_pol(swapped, Complex(0.1, 0.0)), annulus);
    CHECK(h1 == doctest::Approx(-h2).epsilon(1e-9).scale(1e-12));
    CHECK(std::abs(h1) > 0.01);
}

TEST_CASE("helicity: zero field in the annulus is degenerate") {
    BetaSetup s;
    nearfield::InteractionField zero;
    zero.grid = s.grid;
    zero.hole = s.hole;
    zero.values.assign(s.grid.size(), Complex(0.0, 0.0));
    CHECK_THROWS_AS(analysis::helicity_of_field(zero, {0.1e-6, 0.35e-6}),
                    DegenerateFieldError);
}

TEST_CASE("fringe period on a synthetic fringe pattern with k = 10 um^-1") {
    const Grid2D g = test_grid();
    RealField map{};
    map.grid = g;
    map.values.resize(g.size());
    const double k = 10e6;  // fringe wavenumber: intensity ~ cos^2(k s / 2)
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double R = std::hypot(g.x(ix), g.y(iy));
            const double c = std::cos(0.5 * k * R);
            map.at(ix, iy) = c * c;
        }
    const double period = analysis::fringe_period(map, 0.3);
    CHECK(period == doctest::Approx(2.0 * pi / k).epsilon(1e-3));
}

TEST_CASE("fringe period requires at least three maxima") {
    const Grid2D g = test_grid();
    RealField map{};
    map.grid = g;
    map.values.resize(g.size());
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double R = std::hypot(g.x(ix), g.y(iy));
            map.at(ix, iy) = std::exp(-R * R / 1e-12);  // single bump, no fringes
        }
    CHECK_THROWS_AS(analysis::fringe_period(map, 0.0), InsufficientFringesError);
}

TEST_CASE("ring average and peak radius locate an annular ring") {
    const Grid2D g = test_grid();
    RealField map{};
    map.grid = g;
    map.values.resize(g.size());
    const double r0 = 0.9e-6, w = 0.2e-6;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double R = std::hypot(g.x(ix), g.y(iy));
            map.at(ix, iy) = std::exp(-(R - r0) * (R - r0) / (w * w));
        }
    const auto prof = analysis::ring_average(map);
    CHECK(analysis::peak_radius(prof) == doctest::Approx(r0).epsilon(0.01));
}

TEST_CASE("sinusoid fit recovers period, amplitude and offset") {
    std::vector<double> t, y;
    const double T = 2.67e-15, A = 0.4, C = 1.3, phi = 0.9;
    for (int i = 0; i < 24; ++i) {
        const double ti = i * 0.334e-15;
        t.push_back(ti);
        y.push_back(C + A * std::cos(2.0 * pi * ti / T + phi));
    }
    const auto fit = analysis::fit_sinusoid(t, y, 1e-15, 6e-15);
    CHECK(fit.period == doctest::Approx(T).epsilon(1e-4));
    CHECK(fit.amplitude == doctest::Approx(A).epsilon(1e-3));
    CHECK(fit.offset == doctest::Approx(C).epsilon(1e-3));
    CHECK(fit.rms_residual < 1e-6);
}

TEST_CASE("count_sign_changes ignores zeros and counts crossings") {
    CHECK(analysis::count_sign_changes({1.0, 2.0, -1.0, -2.0, 3.0}) == 2);
    CHECK(analysis::count_sign_changes({1.0, 0.0, 1.0, -1.0}) == 1);
    CHECK(analysis::count_sign_changes({}) == 0);
    CHECK(analysis::count_sign_changes({-1.0, -0.5}) == 0);
}

namespace {

analysis::DelayScanConfig scan_config(bool perpendicular) {
    analysis::DelayScanConfig cfg;
    cfg.grid = Grid2D(128, 128, 2.5e-6, 2.5e-6);
    cfg.A = Complex(0.2, 0.0);
    cfg.B = Complex(0.2, 0.0);
    const double chi = constants::pi / 8.0;
    cfg.pulse.pol_1 =
        optics::jones_to_circular(Complex(std::cos(chi), 0.0), Complex(0.0, std::sin(chi)));
    cfg.pulse.pol_2 =
        perpendicular
            ? optics::jones_to_circular(Complex(0.0, std::sin(chi)), Complex(std::cos(chi), 0.0))
            : cfg.pulse.pol_1;
    // keep |1 + r exp(i w dt)| bounded away from zero so the holography
    // fringes never fully collapse at destructive delays
    cfg.pulse.rel_amplitude_2 = 0.7;
    cfg.fringe_r_min = cfg.hole.radius;
    return cfg;
}

}  // namespace

TEST_CASE("delay scan: single pulse gives constant observables") {
    auto cfg = scan_config(false);
    cfg.pulse.rel_amplitude_2 = 0.0;
    std::vector<double> delays;
    for (int i = 0; i < 5; ++i) delays.push_back(80e-15 + i * 0.4e-15);
    const auto scan = analysis::run_delay_scan(cfg, delays);
    for (std::size_t i = 1; i < delays.size(); ++i) {
        CHECK(scan.intensity[i] == doctest::Approx(scan.intensity[0]).epsilon(1e-12));
        CHECK(scan.helicity[i] == doctest::Approx(scan.helicity[0]).epsilon(1e-9));
        CHECK(scan.fringe_periods[i] ==
              doctest::Approx(scan.fringe_periods[0]).epsilon(1e-12));
    }
}

TEST_CASE("delay scan: parallel pulses modulate intensity at the optical period") {
    auto cfg = scan_config(false);
    optics::IncidentLight light;
    const double T = light.optical_period();
    std::vector<double> delays;
    for (int i = 0; i < 16; ++i) delays.push_back(85e-15 + i * 0.334e-15);
    const auto scan = analysis::run_delay_scan(cfg, delays);
    const auto fit = analysis::fit_sinusoid(scan.delays, scan.intensity, 0.5 * T, 2.0 * T);
    CHECK(fit.period == doctest::Approx(T).epsilon(0.01));
    CHECK(fit.amplitude > 0.1 * fit.offset);
}

TEST_CASE("delay scan: observables are T-periodic in the phasor model") {
    auto cfg = scan_config(true);
    optics::IncidentLight light;
    const double T = light.optical_period();
    const std::vector<double> delays{-12e-15, -12e-15 + T, -12e-15 + 2.0 * T};
    const auto scan = analysis::run_delay_scan(cfg, delays);
    CHECK(scan.intensity[1] == doctest::Approx(scan.intensity[0]).epsilon(1e-9));
    CHECK(scan.intensity[2] == doctest::Approx(scan.intensity[0]).epsilon(1e-9));
    CHECK(scan.helicity[1] == doctest::Approx(scan.helicity[0]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("delay scan: perpendicular elliptical pulses flip helicity twice per cycle") {
    auto cfg = scan_config(true);
    optics::IncidentLight light;
    const double T = light.optical_period();
    std::vector<double> delays;
    for (int i = 0; i < 17; ++i) delays.push_back(-12e-15 + i * T / 16.0);
    const auto scan = analysis::run_delay_scan(cfg, delays);
    // one full cycle -> exactly two sign changes
    const std::vector<double> one_cycle(scan.helicity.begin(), scan.helicity.begin() + 16);
    CHECK(analysis::count_sign_changes(one_cycle) == 2);
}

TEST_CASE("delay scan propagates inner failures with the offending delay") {
    auto cfg = scan_config(false);
    cfg.B = Complex(0.0, 0.0);  // no SPP -> no fringes anywhere
    const std::vector<double> delays{0.0, 1e-15};
    CHECK_THROWS_AS(analysis::run_delay_scan(cfg, delays), ScanError);

    CHECK_THROWS_AS(analysis::run_delay_scan(scan_config(false), {1e-15, 1e-15}),
                    std::domain_error);
}
