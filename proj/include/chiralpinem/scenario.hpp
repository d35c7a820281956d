#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chiralpinem/analysis.hpp"
#include "chiralpinem/config.hpp"
#include "chiralpinem/farfield.hpp"
#include "chiralpinem/grid.hpp"
#include "chiralpinem/nearfield.hpp"
#include "chiralpinem/optics.hpp"
#include "chiralpinem/pinem.hpp"
#include "chiralpinem/proton.hpp"

namespace chiralpinem::scenario {

/// Fully resolved run description: config values with defaults applied and
/// units converted to SI.
struct Scenario {
    optics::ElectronBeam beam;
    optics::IncidentLight light;
    optics::MaterialStack stack;
    nearfield::HoleGeometry hole;
    Grid2D grid;

    nearfield::Preset preset = nearfield::Preset::VortexDetection;
    Complex B{0.2, 0.0};
    double b_over_a = 1.0;
    std::optional<Complex> a_override;

    farfield::DetectorModel detector;
    int pad_factor = 2;
    pinem::Passband passband;
    int l_max_override = 0;  // 0 = auto truncation

    analysis::RadialRange helicity_annulus{0.1e-6, 0.35e-6};
    double cut_angle = 0.0;
    double fringe_r_min = 0.0;  // 0 = hole radius
    double fringe_r_max = 0.0;  // 0 = usable radius
    int oam_m_max = 8;

    bool two_pulse_enabled = false;
    nearfield::PulsePair pulse;

    double scan_start = 85e-15;   // s
    double scan_step = 334e-18;   // s
    int scan_steps = 24;

    int reference_l = 1;
    bool emit_reference = false;

    proton::ProtonModel proton_model;
    int proton_l = 1;
    proton::QuadratureSpec proton_quad;
    std::vector<double> proton_waists;  // m
};

Scenario resolve(const config::Document& doc);
Scenario default_scenario();

/// Reference amplitude A for the scenario: explicit override if present,
/// otherwise the preset rule.
Complex resolve_reference_amplitude(const Scenario& sc);

/// Deterministic TOML dump of the resolved scenario; feeding it back through
/// resolve() reproduces the run bit-exactly.
std::string to_toml(const Scenario& sc);

}  // namespace chiralpinem::scenario
