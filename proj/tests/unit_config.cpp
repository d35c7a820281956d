#include <doctest.h>

#include <cmath>

#include "chiralpinem/config.hpp"
#include "chiralpinem/errors.hpp"
#include "chiralpinem/scenario.hpp"

using namespace chiralpinem;

TEST_CASE("parser: sections, scalars, comments") {
    const char* text = R"(
# top comment
[optics]
photon_ev = 1.57        # trailing comment
electron_kev = 200
name = "silver stack"
flag = true
values = [1.0, 2.5, -3e-2]
)";
    const auto doc = config::Document::parse_string(text);
    CHECK(doc.require_number("optics", "photon_ev") == 1.57);
    CHECK(doc.number_or("optics", "electron_kev", 0.0) == 200.0);
    CHECK(doc.string_or("optics", "name", "") == "silver stack");
    CHECK(doc.bool_or("optics", "flag", false));
    const auto arr = doc.number_array_or("optics", "values", {});
    REQUIRE(arr.size() == 3);
    CHECK(arr[2] == doctest::Approx(-3e-2));
    CHECK_FALSE(doc.has("optics", "missing"));
    CHECK(doc.number_or("optics", "missing", 7.0) == 7.0);
}

TEST_CASE("parser: inline tables and dotted keys are equivalent") {
    const auto inline_doc = config::Document::parse_string(
        "[optics]\npolarization = { jones_x_re = 1.0, jones_y_im = 0.5 }\n");
    const auto dotted_doc = config::Document::parse_string(
        "[optics]\npolarization.jones_x_re = 1.0\npolarization.jones_y_im = 0.5\n");
    for (const auto* doc : {&inline_doc, &dotted_doc}) {
        CHECK(doc->table_number_or("optics", "polarization", "jones_x_re", 0.0) == 1.0);
        CHECK(doc->table_number_or("optics", "polarization", "jones_y_im", 0.0) == 0.5);
        CHECK(doc->table_number_or("optics", "polarization", "jones_x_im", 0.25) == 0.25);
    }
}

TEST_CASE("parser: errors carry position and key context") {
    CHECK_THROWS_AS(config::Document::parse_string("[optics]\nphoton_ev 1.57\n"), ConfigError);
    CHECK_THROWS_AS(config::Document::parse_string("[optics\n"), ConfigError);
    CHECK_THROWS_AS(config::Document::parse_string("[s]\nk = 1.2.3\n"), ConfigError);
    CHECK_THROWS_AS(config::Document::parse_string("[s]\nk = \"open\n"), ConfigError);

    const auto doc = config::Document::parse_string("[s]\nk = \"str\"\n");
    try {
        doc.require_number("s", "k");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("s.k") != std::string::npos);
    }
}

TEST_CASE("scenario: defaults resolve and units convert") {
    const auto sc = scenario::resolve(config::Document::parse_string(""));
    CHECK(sc.beam.kinetic_energy_ev == 200e3);
    CHECK(sc.beam.transverse_coherence == doctest::Approx(0.85e-6));
    CHECK(sc.hole.radius == doctest::Approx(0.4e-6));
    CHECK(sc.grid.nx == 512);
    CHECK(sc.grid.extent_x == doctest::Approx(5e-6));
    CHECK(sc.preset == nearfield::Preset::VortexDetection);
    CHECK(sc.detector.film_intensity_transmissivity == doctest::Approx(0.013));
    CHECK(sc.detector.aperture_radius_image_plane == doctest::Approx(7.5e-6));
    CHECK(sc.pulse.envelope_fwhm == doctest::Approx(55e-15));
    CHECK(sc.scan_step == doctest::Approx(334e-18));
    CHECK(sc.proton_model.rms_charge_radius == doctest::Approx(0.84e-15));
    // default polarization is right circular
    CHECK(std::abs(sc.light.polarization.a_plus) == doctest::Approx(1.0));
}

TEST_CASE("scenario: invalid values are reported with key paths") {
    const auto check_message = [](const std::string& toml, const std::string& needle) {
        try {
            scenario::resolve(config::Document::parse_string(toml));
            FAIL("expected ConfigError for ", needle);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    check_message("[hole]\nradius_um = -1\n", "hole.radius_um");
    check_message("[grid]\nextent_um = 0.5\n", "grid.extent_um");
    check_message("[scenario]\npreset = \"bogus\"\n", "scenario.preset");
    check_message("[timescan]\nstep_fs = 0\n", "timescan.step_fs");
    check_message("[proton]\nprofile = \"square\"\n", "proton.profile");
    check_message("[two_pulse]\nenvelope_mode = \"boxcar\"\n", "two_pulse.envelope_mode");
}

TEST_CASE("scenario: explicit reference amplitude overrides the preset") {
    const auto sc = scenario::resolve(config::Document::parse_string(
        "[scenario]\npreset = \"vortex_detection\"\na_re = 0.25\na_im = -0.5\n"));
    CHECK(scenario::resolve_reference_amplitude(sc) == std::complex<double>(0.25, -0.5));

    const auto plain = scenario::resolve(config::Document::parse_string(
        "[scenario]\npreset = \"holography\"\nb_amplitude = 0.4\nb_over_a = 2.0\n"));
    CHECK(std::abs(scenario::resolve_reference_amplitude(plain) -
                   std::complex<double>(0.2, 0.0)) < 1e-15);
}

TEST_CASE("scenario: resolved-config dump round-trips bit-exactly") {
    const char* text = R"(
[optics]
photon_ev = 1.6
eps_metal_re = -28.5
polarization = { jones_x_re = 0.8, jones_y_im = 0.6 }
[scenario]
preset = "holography"
b_amplitude = 0.37
b_over_a = 1.25
[grid]
nx = 64
ny = 64
extent_um = 3.5
[proton]
waist_over_rms = [2, 10, 100]
)";
    const auto sc1 = scenario::resolve(config::Document::parse_string(text));
    const std::string dump1 = scenario::to_toml(sc1);
    const auto sc2 = scenario::resolve(config::Document::parse_string(dump1));
    const std::string dump2 = scenario::to_toml(sc2);
    CHECK(dump1 == dump2);
    CHECK(sc2.B == sc1.B);
    CHECK(sc2.light.polarization.a_plus == sc1.light.polarization.a_plus);
    CHECK(sc2.proton_waists == sc1.proton_waists);
}
