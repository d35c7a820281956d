#include <doctest.h>

#include <cmath>

#include "chiralpinem/bessel.hpp"
#include "chiralpinem/errors.hpp"
#include "chiralpinem/pinem.hpp"
#include "support/oracles.hpp"

using namespace chiralpinem;
using Complex = std::complex<double>;

namespace {

struct Setup {
    nearfield::HoleGeometry hole;
    Grid2D grid{128, 128, 2.5e-6, 2.5e-6};
    optics::IncidentLight light;
    optics::MaterialStack stack;
    optics::ElectronBeam beam;

    pinem::IncidentWavefunction psi() const {
        return pinem::make_incident_wavefunction(grid, beam, hole);
    }
    nearfield::InteractionField chiral_beta(double b = 0.2) const {
        optics::IncidentLight l = light;
        l.polarization = optics::PolarizationState::circular(+1);
        return nearfield::synthesize_beta(hole, grid, l, stack, Complex(0, 0), Complex(b, 0));
    }
    nearfield::InteractionField uniform_beta(Complex value) const {
        nearfield::InteractionField f;
        f.grid = grid;
        f.hole = hole;
        f.values.assign(grid.size(), value);
        f.B = value;
        return f;
    }
};

}  // namespace

TEST_CASE("incident wavefunction: unit norm and 1/e^2 intensity radius") {
    Setup s;
    const auto psi = s.psi();
    double norm = 0.0;
    for (const Complex& v : psi.psi.values) norm += std::norm(v);
    norm *= s.grid.pixel_area();
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));

    const double w0 = s.beam.transverse_coherence;
    const double center = std::norm(psi.psi.sample(0.0, 0.0));
    const double at_w0 = std::norm(psi.psi.sample(w0, 0.0));
    CHECK(at_w0 / center == doctest::Approx(std::exp(-2.0)).epsilon(1e-3));
}

TEST_CASE("beta = 0: psi_0 = psi_inc, all other sidebands vanish") {
    Setup s;
    const auto psi = s.psi();
    const auto beta = s.uniform_beta(Complex(0.0, 0.0));
    const auto sb = pinem::build_sidebands(psi, beta, 3);
    for (std::size_t p = 0; p < s.grid.size(); ++p) {
        CHECK(sb.psi(0)[p] == psi.psi.values[p]);
        for (int l = 1; l <= 3; ++l) {
            CHECK(sb.psi(l)[p] == Complex(0.0, 0.0));
            CHECK(sb.psi(-l)[p] == Complex(0.0, 0.0));
        }
    }
    const RealField I = pinem::energy_filtered_map(sb);
    CHECK(I.max_value() == 0.0);
}

TEST_CASE("uniform |beta| = 0.5: first sideband carries J1(1)^2 of the intensity") {
    Setup s;
    const auto psi = s.psi();
    const auto beta = s.uniform_beta(std::polar(0.5, 1.1));
    const auto sb = pinem::build_sidebands(psi, beta, 8);
    for (std::size_t p = 0; p < s.grid.size(); p += 41) {
        const double in = std::norm(psi.psi.values[p]);
        if (in == 0.0) continue;
        CHECK(std::norm(sb.psi(1)[p]) / in == doctest::Approx(0.193644518).epsilon(1e-8));
        CHECK(std::norm(sb.psi(-1)[p]) / in == doctest::Approx(0.193644518).epsilon(1e-8));
    }
}

TEST_CASE("truncation rule keeps the total sideband norm within the tail budget") {
    Setup s;
    const auto psi = s.psi();
    const auto beta = s.chiral_beta(0.2);
    const int l_max = pinem::default_l_max(beta);
    const auto sb = pinem::build_sidebands(psi, beta, l_max);
    CHECK(sb.total_norm() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sb.total_norm() <= 1.0 + 1e-12);
}

TEST_CASE("gauge covariance: beta -> e^{i theta} beta multiplies psi_l by e^{i l theta}") {
    Setup s;
    const auto psi = s.psi();
    auto beta = s.chiral_beta(0.15);
    auto rotated = beta;
    const Complex phase = std::polar(1.0, 0.7321);
    for (Complex& v : rotated.values) v *= phase;

    const auto sb = pinem::build_sidebands(psi, beta, 4);
    const auto sb_rot = pinem::build_sidebands(psi, rotated, 4);
    const double scale = psi.psi.max_abs();
    double worst_field = 0.0, worst_intensity = 0.0;
    for (int l = -4; l <= 4; ++l) {
        const Complex lphase = std::polar(1.0, 0.7321 * l);
        for (std::size_t p = 0; p < s.grid.size(); ++p) {
            worst_field = std::max(worst_field,
                                   std::abs(sb_rot.psi(l)[p] - lphase * sb.psi(l)[p]));
            worst_intensity = std::max(worst_intensity, std::abs(std::norm(sb_rot.psi(l)[p]) -
                                                                 std::norm(sb.psi(l)[p])));
        }
    }
    CHECK(worst_field < 1e-12 * scale);
    CHECK(worst_intensity < 1e-12 * scale * scale);
}

TEST_CASE("conjugation symmetry: beta -> conj(beta) swaps sideband orders") {
    // |psi_l(conj beta)| = |psi_-l(beta)| pixelwise (J_-l^2 = J_l^2); the
    // residual phases differ by a position-dependent factor, so intensity
    // maps are the invariant observables.
    Setup s;
    const auto psi = s.psi();
    auto beta = s.chiral_beta(0.15);
    auto conj = beta;
    for (Complex& v : conj.values) v = std::conj(v);

    const auto sb = pinem::build_sidebands(psi, beta, 4);
    const auto sb_c = pinem::build_sidebands(psi, conj, 4);
    const double scale = psi.psi.max_abs();
    double worst = 0.0;
    for (int l = -4; l <= 4; ++l)
        for (std::size_t p = 0; p < s.grid.size(); ++p)
            worst = std::max(worst,
                             std::abs(std::abs(sb_c.psi(l)[p]) - std::abs(sb.psi(-l)[p])));
    CHECK(worst < 1e-14 * scale);

    const RealField a = pinem::energy_filtered_map(sb);
    const RealField b = pinem::energy_filtered_map(sb_c);
    double worst_i = 0.0;
    for (std::size_t p = 0; p < a.values.size(); ++p)
        worst_i = std::max(worst_i, std::abs(a.values[p] - b.values[p]));
    CHECK(worst_i < 1e-14 * scale * scale);
}

TEST_CASE("complete depletion at the first J0 zero") {
    Setup s;
    const auto psi = s.psi();
    const auto beta = s.uniform_beta(Complex(0.5 * bessel::j0_first_zero, 0.0));
    const auto sb = pinem::build_sidebands(psi, beta, pinem::default_l_max(beta));
    const RealField I = pinem::energy_filtered_map(sb);
    for (std::size_t p = 0; p < s.grid.size(); p += 17) {
        const double expect = std::norm(psi.psi.values[p]);
        CHECK(I.values[p] == doctest::Approx(expect).epsilon(1e-9).scale(1e-30));
    }
}

TEST_CASE("sideband sum agrees with the closed form pixelwise to 1e-9 relative") {
    Setup s;
    const auto psi = s.psi();
    const auto beta = s.chiral_beta(0.25);
    const auto sb = pinem::build_sidebands(psi, beta, pinem::default_l_max(beta));
    const RealField by_sum = pinem::energy_filtered_map(sb);
    const RealField closed = pinem::energy_filtered_closed_form(psi, beta);
    for (std::size_t p = 0; p < s.grid.size(); ++p) {
        const double m = std::max(std::abs(by_sum.values[p]), std::abs(closed.values[p]));
        if (m == 0.0) continue;
        CHECK(std::abs(by_sum.values[p] - closed.values[p]) / m < 1e-9);
    }
}

TEST_CASE("passband selects sideband orders") {
    Setup s;
    const auto psi = s.psi();
    const auto beta = s.uniform_beta(Complex(0.4, 0.0));
    const auto sb = pinem::build_sidebands(psi, beta, 6);
    const RealField all = pinem::energy_filtered_map(sb);
    const RealField no_first = pinem::energy_filtered_map(sb, pinem::Passband{2, 0});
    const RealField only_first = pinem::energy_filtered_map(sb, pinem::Passband{1, 1});
    for (std::size_t p = 0; p < s.grid.size(); p += 29) {
        CHECK(all.values[p] == doctest::Approx(no_first.values[p] + only_first.values[p])
                                   .epsilon(1e-12)
                                   .scale(1e-30));
    }
    CHECK_THROWS_AS(pinem::energy_filtered_map(sb, pinem::Passband{0, 0}), std::domain_error);
}

TEST_CASE("space-energy map: center null, +/-l symmetry, dark core widens with |l|") {
    Setup s;
    const auto psi = s.psi();
    const auto beta = s.chiral_beta(0.2);
    const auto sb = pinem::build_sidebands(psi, beta, 5);
    const auto map = pinem::space_energy_map(sb, pinem::LineCut{0.0, 0.0, 0});

    // center sample (s = 0) vanishes for every l != 0
    const std::size_t mid = map.s.size() / 2;
    CHECK(std::abs(map.s[mid]) < 1e-12 * s.grid.dx());
    for (std::size_t il = 0; il < map.l.size(); ++il)
        if (map.l[il] != 0) CHECK(map.at(mid, il) == 0.0);

    // azimuthally uniform |beta|: J_{-l}^2 = J_l^2 pixelwise
    for (std::size_t il = 0; il < map.l.size(); ++il) {
        const int l = map.l[il];
        if (l <= 0) continue;
        const std::size_t il_neg = static_cast<std::size_t>(-l + sb.l_max);
        for (std::size_t is = 0; is < map.s.size(); is += 13)
            CHECK(map.at(is, il) ==
                  doctest::Approx(map.at(is, il_neg)).epsilon(1e-12).scale(1e-30));
    }

    // half-max onset of the central dark region is non-decreasing in |l|
    double prev_width = 0.0;
    for (int l = 1; l <= 5; ++l) {
        const std::size_t il = static_cast<std::size_t>(l + sb.l_max);
        double peak = 0.0;
        for (std::size_t is = 0; is < map.s.size(); ++is)
            peak = std::max(peak, map.at(is, il));
        REQUIRE(peak > 0.0);
        double width = 0.0;
        for (std::size_t is = mid; is < map.s.size(); ++is) {
            if (map.at(is, il) >= 0.5 * peak) {
                width = map.s[is];
                break;
            }
        }
        CHECK(width >= prev_width);
        prev_width = width;
    }
}

TEST_CASE("space-energy map rejects cuts outside the grid") {
    Setup s;
    const auto sb = pinem::build_sidebands(s.psi(), s.chiral_beta(0.1), 2);
    CHECK_THROWS_AS(pinem::space_energy_map(sb, pinem::LineCut{0.0, 5e-6, 0}),
                    std::domain_error);
}

TEST_CASE("build_sidebands preconditions") {
    Setup s;
    const auto psi = s.psi();
    const auto beta = s.chiral_beta(0.1);
    CHECK_THROWS_AS(pinem::build_sidebands(psi, beta, 0), std::domain_error);

    Setup other;
    other.grid = Grid2D(64, 64, 2.5e-6, 2.5e-6);
    const auto psi_small = other.psi();
    CHECK_THROWS_AS(pinem::build_sidebands(psi_small, beta, 3), ShapeError);
}

TEST_CASE("holography with a chiral drive yields single-arm spiral fringes") {
    // For sigma = +1 the fringe condition is k_r (R - a) + phi = 2 pi n, so
    // the first maximum outside the rim shifts by half a fringe period
    // between phi = 0 and phi = pi, and by a full period around the loop.
    Setup s;
    s.grid = Grid2D(512, 512, 5e-6, 5e-6);
    optics::IncidentLight light = s.light;
    light.polarization = optics::PolarizationState::circular(+1);
    const Complex B(0.2, 0.0);
    const auto beta = nearfield::synthesize_beta(s.hole, s.grid, light, s.stack, B, B);
    const auto psi = pinem::make_incident_wavefunction(s.grid, s.beam, s.hole);
    const RealField emap = pinem::energy_filtered_closed_form(psi, beta);

    const double lambda_spp =
        2.0 * 3.14159265358979323846 / beta.k_spp.real();
    const auto first_max = [&](double angle) {
        const double step = 0.25 * s.grid.dx();
        double prev2 = 0.0, prev1 = 0.0;
        for (double r = s.hole.radius + 2.0 * s.grid.dx(); r < 2e-6; r += step) {
            const double v = emap.sample(r * std::cos(angle), r * std::sin(angle));
            if (prev2 > 0.0 && prev1 > prev2 && prev1 > v) return r - step;
            prev2 = prev1;
            prev1 = v;
        }
        return 0.0;
    };
    const double r0 = first_max(0.0);
    const double r_pi = first_max(3.14159265358979323846);
    REQUIRE(r0 > 0.0);
    REQUIRE(r_pi > 0.0);
    // offset between opposite rays is half a period (mod a full period)
    const double offset = std::abs(r0 - r_pi) / lambda_spp;
    const double frac = offset - std::floor(offset);
    CHECK(std::abs(frac - 0.5) < 0.1);

    // the fringe radius advances monotonically with phi over one turn
    double prev = first_max(0.0);
    int advancing = 0;
    for (int k = 1; k <= 8; ++k) {
        const double r = first_max(-k * 3.14159265358979323846 / 4.0);
        const double d = r - prev;
        if (d > 0.0 || d < -0.6 * lambda_spp) ++advancing;  // allow one wrap
        prev = r;
    }
    CHECK(advancing >= 7);
}
