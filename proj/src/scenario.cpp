#include "chiralpinem/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "chiralpinem/constants.hpp"
#include "chiralpinem/errors.hpp"

namespace chiralpinem::scenario {

namespace {

constexpr double um = 1e-6;
constexpr double fs = 1e-15;
constexpr double fm = 1e-15;
constexpr double deg = constants::pi / 180.0;

optics::PolarizationState read_polarization(const config::Document& doc,
                                            const std::string& section,
                                            const std::string& key,
                                            const optics::PolarizationState& fallback) {
    if (!doc.has(section, key)) return fallback;
    // Resolved-config dumps store the circular amplitudes verbatim so that a
    // manifest round-trips bit-exactly; user configs use the Jones keys.
    if (doc.table_number_or(section, key, "circular", 0.0) != 0.0) {
        optics::PolarizationState p;
        p.a_plus = Complex(doc.table_number_or(section, key, "a_plus_re", 0.0),
                           doc.table_number_or(section, key, "a_plus_im", 0.0));
        p.a_minus = Complex(doc.table_number_or(section, key, "a_minus_re", 0.0),
                            doc.table_number_or(section, key, "a_minus_im", 0.0));
        if (!p.is_normalized())
            throw ConfigError(section + "." + key + ": circular amplitudes not normalized");
        return p;
    }
    const Complex jx(doc.table_number_or(section, key, "jones_x_re", 0.0),
                     doc.table_number_or(section, key, "jones_x_im", 0.0));
    const Complex jy(doc.table_number_or(section, key, "jones_y_re", 0.0),
                     doc.table_number_or(section, key, "jones_y_im", 0.0));
    if (jx == Complex(0.0, 0.0) && jy == Complex(0.0, 0.0))
        throw ConfigError(section + "." + key + ": Jones vector must be nonzero");
    return optics::jones_to_circular(jx, jy);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Scenario default_scenario() {
    Scenario sc;
    sc.light.polarization = optics::jones_to_circular(Complex(1.0, 0.0), Complex(0.0, 1.0));
    sc.grid = Grid2D(512, 512, 5e-6, 5e-6);
    sc.pulse.pol_1 = sc.light.polarization;
    sc.pulse.pol_2 = sc.light.polarization;
    sc.proton_waists = {2, 3, 5, 8, 12, 20, 35, 60, 100};
    for (double& w : sc.proton_waists) w *= sc.proton_model.rms_charge_radius;
    return sc;
}

Scenario resolve(const config::Document& doc) {
    Scenario sc = default_scenario();

    // [optics]
    sc.beam.kinetic_energy_ev = 1e3 * doc.number_or("optics", "electron_kev", 200.0);
    sc.beam.transverse_coherence = um * doc.number_or("optics", "coherence_um", 0.85);
    sc.light.photon_energy_ev = doc.number_or("optics", "photon_ev", 1.57);
    sc.light.field_amplitude = doc.number_or("optics", "field_vpm", 8e7);
    sc.light.incidence_angle_delta = deg * doc.number_or("optics", "delta_deg", 4.5);
    sc.light.sample_tilt_alpha = deg * doc.number_or("optics", "alpha_deg", 4.5);
    sc.stack.eps_metal = Complex(doc.number_or("optics", "eps_metal_re", -29.0),
                                 doc.number_or("optics", "eps_metal_im", 0.3));
    sc.stack.eps_dielectric = doc.number_or("optics", "eps_diel", 4.0);
    sc.stack.spp_decay_length = um * doc.number_or("optics", "spp_decay_um", 10.0);
    sc.light.polarization =
        read_polarization(doc, "optics", "polarization", sc.light.polarization);

    if (!(sc.beam.kinetic_energy_ev > 0.0))
        throw ConfigError("optics.electron_kev: must be > 0");
    if (!(sc.beam.transverse_coherence > 0.0))
        throw ConfigError("optics.coherence_um: must be > 0");
    if (!(sc.light.photon_energy_ev > 0.0)) throw ConfigError("optics.photon_ev: must be > 0");

    // [hole]
    sc.hole.radius = um * doc.number_or("hole", "radius_um", 0.4);
    sc.hole.center_x = um * doc.number_or("hole", "center_x_um", 0.0);
    sc.hole.center_y = um * doc.number_or("hole", "center_y_um", 0.0);
    if (!(sc.hole.radius > 0.0)) throw ConfigError("hole.radius_um: must be > 0");

    // [grid]
    {
        const int nx = static_cast<int>(doc.number_or("grid", "nx", 512));
        const int ny = static_cast<int>(doc.number_or("grid", "ny", 512));
        const double ex = um * doc.number_or("grid", "extent_um", 5.0);
        try {
            sc.grid = Grid2D(nx, ny, ex, ex);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("grid: ") + e.what());
        }
        if (std::min(sc.grid.extent_x, sc.grid.extent_y) < 2.0 * sc.hole.radius)
            throw ConfigError("grid.extent_um: must be >= 2x hole radius");
    }

    // [scenario]
    sc.preset = nearfield::preset_from_string(
        doc.string_or("scenario", "preset", "vortex_detection"));
    {
        const double amp = doc.number_or("scenario", "b_amplitude", 0.2);
        const double phase = deg * doc.number_or("scenario", "b_phase_deg", 0.0);
        sc.B = std::polar(amp, phase);
        sc.b_over_a = doc.number_or("scenario", "b_over_a", 1.0);
        if (doc.has("scenario", "a_re") || doc.has("scenario", "a_im"))
            sc.a_override = Complex(doc.number_or("scenario", "a_re", 0.0),
                                    doc.number_or("scenario", "a_im", 0.0));
        if (!(sc.b_over_a > 0.0)) throw ConfigError("scenario.b_over_a: must be > 0");
    }

    // [detector]
    sc.detector.aperture_radius_image_plane = um * doc.number_or("detector", "aperture_um", 7.5);
    sc.detector.film_intensity_transmissivity =
        doc.number_or("detector", "transmissivity", 0.013);
    sc.detector.momentum_broadening_sigma =
        1e6 * doc.number_or("detector", "broadening_invum", 0.35);
    sc.pad_factor = static_cast<int>(doc.number_or("detector", "pad_factor", 2));
    if (sc.pad_factor < 1) throw ConfigError("detector.pad_factor: must be >= 1");
    if (sc.detector.aperture_radius_image_plane < 0.0)
        throw ConfigError("detector.aperture_um: must be >= 0");
    if (sc.detector.film_intensity_transmissivity < 0.0)
        throw ConfigError("detector.transmissivity: must be >= 0");
    if (sc.detector.momentum_broadening_sigma < 0.0)
        throw ConfigError("detector.broadening_invum: must be >= 0");

    // [sidebands]
    sc.l_max_override = static_cast<int>(doc.number_or("sidebands", "l_max", 0));
    sc.passband.min_abs_l = static_cast<int>(doc.number_or("sidebands", "passband_min_abs_l", 1));
    sc.passband.max_abs_l = static_cast<int>(doc.number_or("sidebands", "passband_max_abs_l", 0));
    if (sc.passband.min_abs_l < 1)
        throw ConfigError("sidebands.passband_min_abs_l: must be >= 1");

    // [analysis]
    sc.helicity_annulus.r_lo = um * doc.number_or("analysis", "annulus_lo_um", 0.1);
    sc.helicity_annulus.r_hi = um * doc.number_or("analysis", "annulus_hi_um", 0.35);
    sc.cut_angle = deg * doc.number_or("analysis", "cut_angle_deg", 0.0);
    sc.fringe_r_min = um * doc.number_or("analysis", "fringe_r_min_um",
                                         sc.hole.radius / um);
    sc.fringe_r_max = um * doc.number_or("analysis", "fringe_r_max_um", 0.0);
    sc.oam_m_max = static_cast<int>(doc.number_or("analysis", "oam_m_max", 8));
    if (sc.oam_m_max < 1) throw ConfigError("analysis.oam_m_max: must be >= 1");

    // [two_pulse]
    sc.two_pulse_enabled = doc.bool_or("two_pulse", "enabled", false);
    sc.pulse.pol_1 = read_polarization(doc, "two_pulse", "polarization_1",
                                       sc.light.polarization);
    sc.pulse.pol_2 = read_polarization(doc, "two_pulse", "polarization_2", sc.pulse.pol_1);
    sc.pulse.rel_amplitude_2 = doc.number_or("two_pulse", "rel_amplitude_2", 1.0);
    sc.pulse.delay = fs * doc.number_or("two_pulse", "delay_fs", 0.0);
    sc.pulse.envelope_fwhm = fs * doc.number_or("two_pulse", "envelope_fwhm_fs", 55.0);
    if (!(sc.pulse.envelope_fwhm > 0.0))
        throw ConfigError("two_pulse.envelope_fwhm_fs: must be > 0");
    {
        const std::string mode = doc.string_or("two_pulse", "envelope_mode", "none");
        if (mode == "none")
            sc.pulse.envelope = nearfield::PulsePair::Envelope::Phasor;
        else if (mode == "gaussian")
            sc.pulse.envelope = nearfield::PulsePair::Envelope::Gaussian;
        else
            throw ConfigError("two_pulse.envelope_mode: expected 'none' or 'gaussian'");
    }

    // [timescan]
    sc.scan_start = fs * doc.number_or("timescan", "t_start_fs", 85.0);
    sc.scan_step = fs * doc.number_or("timescan", "step_fs", 0.334);
    sc.scan_steps = static_cast<int>(doc.number_or("timescan", "n_steps", 24));
    if (!(sc.scan_step > 0.0)) throw ConfigError("timescan.step_fs: must be > 0");
    if (sc.scan_steps < 1) throw ConfigError("timescan.n_steps: must be >= 1");

    // [farfield]
    sc.reference_l = static_cast<int>(doc.number_or("farfield", "reference_l", 1));
    sc.emit_reference = doc.bool_or("farfield", "emit_reference", false);

    // [proton]
    sc.proton_l = static_cast<int>(doc.number_or("proton", "l", 1));
    sc.proton_model.rms_charge_radius = fm * doc.number_or("proton", "rms_fm", 0.84);
    sc.proton_model.profile =
        proton::profile_from_string(doc.string_or("proton", "profile", "exponential"));
    sc.proton_quad.n = static_cast<int>(doc.number_or("proton", "grid_n", 256));
    sc.proton_quad.extent_waists = doc.number_or("proton", "extent_waists", 4.0);
    sc.proton_quad.convergence_tol = doc.number_or("proton", "convergence_tol", 1e-3);
    if (!(sc.proton_model.rms_charge_radius > 0.0))
        throw ConfigError("proton.rms_fm: must be > 0");
    {
        std::vector<double> ratios =
            doc.number_array_or("proton", "waist_over_rms",
                                {2, 3, 5, 8, 12, 20, 35, 60, 100});
        sc.proton_waists.clear();
        for (double r : ratios) {
            if (!(r > 0.0)) throw ConfigError("proton.waist_over_rms: entries must be > 0");
            sc.proton_waists.push_back(r * sc.proton_model.rms_charge_radius);
        }
    }
    return sc;
}

Complex resolve_reference_amplitude(const Scenario& sc) {
    if (sc.a_override) return *sc.a_override;
    return nearfield::reference_amplitude(sc.preset, sc.B, sc.b_over_a);
}

std::string to_toml(const Scenario& sc) {
    std::ostringstream os;
    const auto pol_toml = [&](const optics::PolarizationState& p) {
        return "{ circular = 1, a_plus_re = " + fmt(p.a_plus.real()) +
               ", a_plus_im = " + fmt(p.a_plus.imag()) +
               ", a_minus_re = " + fmt(p.a_minus.real()) +
               ", a_minus_im = " + fmt(p.a_minus.imag()) + " }";
    };

    os << "[optics]\n";
    os << "electron_kev = " << fmt(sc.beam.kinetic_energy_ev / 1e3) << "\n";
    os << "coherence_um = " << fmt(sc.beam.transverse_coherence / um) << "\n";
    os << "photon_ev = " << fmt(sc.light.photon_energy_ev) << "\n";
    os << "field_vpm = " << fmt(sc.light.field_amplitude) << "\n";
    os << "eps_metal_re = " << fmt(sc.stack.eps_metal.real()) << "\n";
    os << "eps_metal_im = " << fmt(sc.stack.eps_metal.imag()) << "\n";
    os << "eps_diel = " << fmt(sc.stack.eps_dielectric) << "\n";
    os << "spp_decay_um = " << fmt(sc.stack.spp_decay_length / um) << "\n";
    os << "delta_deg = " << fmt(sc.light.incidence_angle_delta / deg) << "\n";
    os << "alpha_deg = " << fmt(sc.light.sample_tilt_alpha / deg) << "\n";
    os << "polarization = " << pol_toml(sc.light.polarization) << "\n";
    os << "\n[hole]\n";
    os << "radius_um = " << fmt(sc.hole.radius / um) << "\n";
    os << "center_x_um = " << fmt(sc.hole.center_x / um) << "\n";
    os << "center_y_um = " << fmt(sc.hole.center_y / um) << "\n";
    os << "\n[grid]\n";
    os << "nx = " << sc.grid.nx << "\n";
    os << "ny = " << sc.grid.ny << "\n";
    os << "extent_um = " << fmt(sc.grid.extent_x / um) << "\n";
    os << "\n[scenario]\n";
    os << "preset = \"" << nearfield::to_string(sc.preset) << "\"\n";
    os << "b_amplitude = " << fmt(std::abs(sc.B)) << "\n";
    os << "b_phase_deg = " << fmt(std::arg(sc.B) / deg) << "\n";
    os << "b_over_a = " << fmt(sc.b_over_a) << "\n";
    if (sc.a_override) {
        os << "a_re = " << fmt(sc.a_override->real()) << "\n";
        os << "a_im = " << fmt(sc.a_override->imag()) << "\n";
    }
    os << "\n[detector]\n";
    os << "aperture_um = " << fmt(sc.detector.aperture_radius_image_plane / um) << "\n";
    os << "transmissivity = " << fmt(sc.detector.film_intensity_transmissivity) << "\n";
    os << "broadening_invum = " << fmt(sc.detector.momentum_broadening_sigma / 1e6) << "\n";
    os << "pad_factor = " << sc.pad_factor << "\n";
    os << "\n[sidebands]\n";
    os << "l_max = " << sc.l_max_override << "\n";
    os << "passband_min_abs_l = " << sc.passband.min_abs_l << "\n";
    os << "passband_max_abs_l = " << sc.passband.max_abs_l << "\n";
    os << "\n[analysis]\n";
    os << "annulus_lo_um = " << fmt(sc.helicity_annulus.r_lo / um) << "\n";
    os << "annulus_hi_um = " << fmt(sc.helicity_annulus.r_hi / um) << "\n";
    os << "cut_angle_deg = " << fmt(sc.cut_angle / deg) << "\n";
    os << "fringe_r_min_um = " << fmt(sc.fringe_r_min / um) << "\n";
    os << "fringe_r_max_um = " << fmt(sc.fringe_r_max / um) << "\n";
    os << "oam_m_max = " << sc.oam_m_max << "\n";
    os << "\n[two_pulse]\n";
    os << "enabled = " << (sc.two_pulse_enabled ? "true" : "false") << "\n";
    os << "polarization_1 = " << pol_toml(sc.pulse.pol_1) << "\n";
    os << "polarization_2 = " << pol_toml(sc.pulse.pol_2) << "\n";
    os << "rel_amplitude_2 = " << fmt(sc.pulse.rel_amplitude_2) << "\n";
    os << "delay_fs = " << fmt(sc.pulse.delay / fs) << "\n";
    os << "envelope_fwhm_fs = " << fmt(sc.pulse.envelope_fwhm / fs) << "\n";
    os << "envelope_mode = \""
       << (sc.pulse.envelope == nearfield::PulsePair::Envelope::Phasor ? "none" : "gaussian")
       << "\"\n";
    os << "\n[timescan]\n";
    os << "t_start_fs = " << fmt(sc.scan_start / fs) << "\n";
    os << "step_fs = " << fmt(sc.scan_step / fs) << "\n";
    os << "n_steps = " << sc.scan_steps << "\n";
    os << "\n[farfield]\n";
    os << "reference_l = " << sc.reference_l << "\n";
    os << "emit_reference = " << (sc.emit_reference ? "true" : "false") << "\n";
    os << "\n[proton]\n";
    os << "l = " << sc.proton_l << "\n";
    os << "rms_fm = " << fmt(sc.proton_model.rms_charge_radius / fm) << "\n";
    os << "profile = \"" << proton::to_string(sc.proton_model.profile) << "\"\n";
    os << "grid_n = " << sc.proton_quad.n << "\n";
    os << "extent_waists = " << fmt(sc.proton_quad.extent_waists) << "\n";
    os << "convergence_tol = " << fmt(sc.proton_quad.convergence_tol) << "\n";
    os << "waist_over_rms = [";
    for (std::size_t i = 0; i < sc.proton_waists.size(); ++i) {
        if (i) os << ", ";
        os << fmt(sc.proton_waists[i] / sc.proton_model.rms_charge_radius);
    }
    os << "]\n";
    return os.str();
}

}  // namespace chiralpinem::scenario
