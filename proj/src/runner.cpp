#include "chiralpinem/runner.hpp"

#include <chrono>
#include <cmath>
#include <json.hpp>

#include "chiralpinem/analysis.hpp"
#include "chiralpinem/bessel.hpp"
#include "chiralpinem/constants.hpp"
#include "chiralpinem/errors.hpp"
#include "chiralpinem/io.hpp"

namespace chiralpinem::runner {

using io::format_double;
using io::Metadata;
using io::OutputRegistry;
using nlohmann::json;
using scenario::Scenario;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

struct PreparedField {
    nearfield::InteractionField beta;
    int l_max = 0;
    Metadata derived;
};

Metadata base_derived(const Scenario& sc) {
    const Complex k = optics::effective_spp_wavevector(sc.light, sc.stack);
    Metadata m;
    m.emplace_back("k_spp_re_per_m", format_double(k.real()));
    m.emplace_back("k_spp_im_per_m", format_double(k.imag()));
    m.emplace_back("lambda_spp_um",
                   format_double(2.0 * constants::pi / k.real() * 1e6));
    m.emplace_back("optical_period_fs", format_double(sc.light.optical_period() * 1e15));
    m.emplace_back("electron_velocity_m_per_s",
                   format_double(optics::derive_electron_velocity(sc.beam)));
    m.emplace_back("note_permittivity",
                   "eps values are tabulated stand-ins; override via [optics]");
    return m;
}

PreparedField prepare_beta(const Scenario& sc, const RunOptions& opt) {
    PreparedField out;
    out.derived = base_derived(sc);

    if (!opt.beta_file.empty()) {
        out.beta = nearfield::read_beta_file(opt.beta_file, sc.hole);
        out.derived.emplace_back("beta_source", opt.beta_file);
    } else {
        const Complex A = scenario::resolve_reference_amplitude(sc);
        if (sc.two_pulse_enabled) {
            optics::IncidentLight light_1 = sc.light;
            light_1.polarization = sc.pulse.pol_1;
            optics::IncidentLight light_2 = sc.light;
            light_2.polarization = sc.pulse.pol_2;
            const double r2 = sc.pulse.rel_amplitude_2;
            const auto beta_1 =
                nearfield::synthesize_beta(sc.hole, sc.grid, light_1, sc.stack, A, sc.B);
            const auto beta_2 = nearfield::synthesize_beta(sc.hole, sc.grid, light_2, sc.stack,
                                                           A * r2, sc.B * r2);
            out.beta = nearfield::superpose_two_pulses(beta_1, beta_2, sc.pulse, sc.light);
            out.derived.emplace_back("two_pulse_delay_fs",
                                     format_double(sc.pulse.delay * 1e15));
        } else {
            out.beta = nearfield::synthesize_beta(sc.hole, sc.grid, sc.light, sc.stack, A, sc.B);
        }
        out.derived.emplace_back("A_re", format_double(out.beta.A.real()));
        out.derived.emplace_back("A_im", format_double(out.beta.A.imag()));
        out.derived.emplace_back("note_inside_profile",
                                 "J1 radial profile inside the hole is a model assumption");
    }
    out.l_max = sc.l_max_override > 0 ? sc.l_max_override : pinem::default_l_max(out.beta);
    out.derived.emplace_back("l_max", std::to_string(out.l_max));
    return out;
}

RealField abs_map(const nearfield::InteractionField& beta) {
    RealField m{};
    m.grid = beta.grid;
    m.values.resize(beta.grid.size());
    for (std::size_t i = 0; i < m.values.size(); ++i) m.values[i] = std::abs(beta.values[i]);
    return m;
}

RealField arg_map(const nearfield::InteractionField& beta) {
    RealField m{};
    m.grid = beta.grid;
    m.values.resize(beta.grid.size());
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        const Complex v = beta.values[i];
        m.values[i] = (v == Complex(0.0, 0.0)) ? 0.0 : std::arg(v);  // core phase fixed to 0
    }
    return m;
}

}  // namespace

void cmd_nearfield(const Scenario& sc, const RunOptions& opt) {
    Timer timer;
    OutputRegistry reg(opt.out_dir);
    PreparedField pf = prepare_beta(sc, opt);

    const auto psi_inc = pinem::make_incident_wavefunction(pf.beta.grid, sc.beam, sc.hole);
    const auto sidebands = pinem::build_sidebands(psi_inc, pf.beta, pf.l_max);
    const RealField energy = pinem::energy_filtered_map(sidebands, sc.passband);

    Metadata meta;
    meta.emplace_back("axis_unit", "m");
    meta.emplace_back("preset", nearfield::to_string(sc.preset));
    meta.emplace_back("sideband_energy_quantum_ev", format_double(sc.light.photon_energy_ev));

    const RealField beta_abs = abs_map(pf.beta);
    const RealField beta_arg = arg_map(pf.beta);
    io::write_csv_field(reg, "beta_abs.csv", beta_abs, meta);
    io::write_png16(reg, "beta_abs.png", beta_abs, meta);
    io::write_csv_field(reg, "beta_arg.csv", beta_arg, meta);
    io::write_png16(reg, "beta_arg.png", beta_arg, meta);
    io::write_csv_field(reg, "energy_filtered.csv", energy, meta);
    io::write_png16(reg, "energy_filtered.png", energy, meta);
    nearfield::write_beta_file(reg.path("beta.bin"), pf.beta);
    reg.record(reg.path("beta.bin"));

    const pinem::SpaceEnergyMap se =
        pinem::space_energy_map(sidebands, pinem::LineCut{sc.cut_angle, 0.0, 0});
    {
        std::vector<std::string> names{"s_um"};
        std::vector<std::vector<double>> cols;
        cols.emplace_back();
        for (double s : se.s) cols.back().push_back(s * 1e6);
        for (std::size_t il = 0; il < se.l.size(); ++il) {
            names.push_back("l" + std::to_string(se.l[il]));
            std::vector<double> col(se.s.size());
            for (std::size_t is = 0; is < se.s.size(); ++is) col[is] = se.at(is, il);
            cols.push_back(std::move(col));
        }
        Metadata se_meta = meta;
        se_meta.emplace_back("cut_angle_deg",
                             format_double(sc.cut_angle * 180.0 / constants::pi));
        se_meta.emplace_back("energy_per_order_ev", format_double(sc.light.photon_energy_ev));
        io::write_csv_columns(reg, "space_energy.csv", se_meta, names, cols);
    }

    if (opt.keep_sidebands) {
        for (int l = -sidebands.l_max; l <= sidebands.l_max; ++l) {
            RealField m{};
            m.grid = sidebands.grid;
            m.values.resize(m.grid.size());
            const auto& f = sidebands.psi(l);
            for (std::size_t i = 0; i < f.size(); ++i) m.values[i] = std::norm(f[i]);
            io::write_png16(reg, "sideband_l" + std::to_string(l) + ".png", m, meta);
        }
    }

    reg.write_manifest("manifest.json", "nearfield", scenario::to_toml(sc), pf.derived,
                       timer.seconds());
}

void cmd_farfield(const Scenario& sc, const RunOptions& opt) {
    Timer timer;
    OutputRegistry reg(opt.out_dir);
    PreparedField pf = prepare_beta(sc, opt);

    const auto psi_inc = pinem::make_incident_wavefunction(pf.beta.grid, sc.beam, sc.hole);
    const auto sidebands = pinem::build_sidebands(psi_inc, pf.beta, pf.l_max);

    farfield::FarFieldOptions ffopt;
    ffopt.pad_factor = sc.pad_factor;
    ffopt.keep_per_l = opt.keep_sidebands;
    const farfield::FarFieldMap map = farfield::far_field(sidebands, sc.detector, ffopt);

    Metadata meta;
    meta.emplace_back("axis_unit", "1/m");
    meta.emplace_back("preset", nearfield::to_string(sc.preset));
    meta.emplace_back("broadening_sigma_per_m",
                      format_double(sc.detector.momentum_broadening_sigma));
    meta.emplace_back("momentum_convention", "k = 2*pi/distance");

    io::write_csv_field(reg, "farfield.csv", map.intensity, meta);
    io::write_png16(reg, "farfield.png", map.intensity, meta);
    io::write_csv_field(reg, "farfield_unbroadened.csv", map.intensity_unbroadened, meta);

    if (opt.keep_sidebands) {
        for (std::size_t i = 0; i < map.l_values.size(); ++i) {
            RealField m{};
            m.grid = map.kgrid;
            m.values.resize(m.grid.size());
            for (std::size_t p = 0; p < m.values.size(); ++p)
                m.values[p] = std::norm(map.per_l[i].values[p]);
            io::write_png16(reg, "farfield_l" + std::to_string(map.l_values[i]) + ".png", m,
                            meta);
        }
    }

    if (opt.profiles) {
        const auto h = farfield::line_profile(map, farfield::ProfileAxis::Horizontal);
        const auto v = farfield::line_profile(map, farfield::ProfileAxis::Vertical);
        io::write_csv_columns(reg, "profiles.csv", meta,
                              {"k_per_m", "intensity_horizontal", "intensity_vertical"},
                              {h.k, h.intensity, v.intensity});
    }

    if (sc.emit_reference) {
        const farfield::FarFieldMap ref = farfield::spiral_phase_plate_reference(
            sc.reference_l, sc.hole, psi_inc, sc.detector, ffopt);
        io::write_csv_field(reg, "reference_farfield.csv", ref.intensity, meta);
        io::write_png16(reg, "reference_farfield.png", ref.intensity, meta);

        // ring radius of the matching sideband order alone, measured outside
        // the central background spot
        const int l_ref = std::min(std::abs(sc.reference_l), sidebands.l_max);
        pinem::SidebandSet single;
        single.grid = sidebands.grid;
        single.hole = sidebands.hole;
        single.l_max = 1;
        single.fields.assign(3, std::vector<Complex>(sidebands.grid.size(), Complex(0, 0)));
        single.psi(1) = sidebands.psi(l_ref);
        const farfield::FarFieldMap chiral_one =
            farfield::far_field(single, sc.detector, ffopt);
        const double k_min = 2.5e6;
        json cmp;
        cmp["reference_l"] = sc.reference_l;
        cmp["chiral_l"] = l_ref;
        cmp["ring_measured_beyond_per_m"] = k_min;
        cmp["chiral_peak_radius_per_m"] =
            analysis::ring_peak_radius(chiral_one.intensity, k_min);
        cmp["reference_peak_radius_per_m"] =
            analysis::ring_peak_radius(ref.intensity, k_min);
        cmp["ratio"] = cmp["chiral_peak_radius_per_m"].get<double>() /
                       cmp["reference_peak_radius_per_m"].get<double>();
        io::write_text(reg, "reference_comparison.json", cmp.dump(2) + "\n");
    }

    reg.write_manifest("manifest.json", "farfield", scenario::to_toml(sc), pf.derived,
                       timer.seconds());
}

void cmd_timescan(const Scenario& sc, const RunOptions& opt) {
    Timer timer;
    OutputRegistry reg(opt.out_dir);

    analysis::DelayScanConfig cfg;
    cfg.hole = sc.hole;
    cfg.grid = sc.grid;
    cfg.light = sc.light;
    cfg.stack = sc.stack;
    cfg.beam = sc.beam;
    cfg.A = scenario::resolve_reference_amplitude(sc);
    cfg.B = sc.B;
    cfg.pulse = sc.pulse;
    cfg.passband = sc.passband;
    cfg.helicity_annulus = sc.helicity_annulus;
    cfg.fringe_angle = sc.cut_angle;
    cfg.fringe_r_min = sc.fringe_r_min > 0.0 ? sc.fringe_r_min : sc.hole.radius;
    cfg.fringe_r_max = sc.fringe_r_max;
    cfg.keep_maps = true;

    std::vector<double> delays(sc.scan_steps);
    for (int i = 0; i < sc.scan_steps; ++i) delays[i] = sc.scan_start + i * sc.scan_step;

    const analysis::DelayScan scan = analysis::run_delay_scan(cfg, delays);

    Metadata meta;
    meta.emplace_back("helicity_definition",
                      "(P+1 - P-1)/(P+1 + P-1) over annulus " +
                          format_double(sc.helicity_annulus.r_lo * 1e6) + "-" +
                          format_double(sc.helicity_annulus.r_hi * 1e6) + " um");
    {
        std::vector<double> delay_fs(scan.delays.size()), period_um(scan.delays.size());
        for (std::size_t i = 0; i < scan.delays.size(); ++i) {
            delay_fs[i] = scan.delays[i] * 1e15;
            period_um[i] = scan.fringe_periods[i] * 1e6;
        }
        io::write_csv_columns(reg, "delay_scan.csv", meta,
                              {"delay_fs", "helicity", "fringe_period_um", "intensity"},
                              {delay_fs, scan.helicity, period_um, scan.intensity});
    }

    // Difference maps relative to the first delay (the experiment plots
    // differences against the reference frame at the scan start).
    for (std::size_t i = 1; i < scan.maps.size(); ++i) {
        RealField diff = scan.maps[i];
        for (std::size_t p = 0; p < diff.values.size(); ++p)
            diff.values[p] -= scan.maps[0].values[p];
        char name[64];
        std::snprintf(name, sizeof(name), "diff_%03zu.png", i);
        Metadata dm = meta;
        dm.emplace_back("delay_fs", format_double(scan.delays[i] * 1e15));
        dm.emplace_back("reference_delay_fs", format_double(scan.delays[0] * 1e15));
        io::write_png16(reg, name, diff, dm);
    }

    const double t_opt = sc.light.optical_period();
    const auto fit = analysis::fit_sinusoid(scan.delays, scan.intensity, 0.5 * t_opt, 2.0 * t_opt);
    json summary;
    summary["fitted_period_fs"] = fit.period * 1e15;
    summary["fitted_amplitude"] = fit.amplitude;
    summary["fitted_offset"] = fit.offset;
    summary["optical_period_fs"] = t_opt * 1e15;
    summary["helicity_sign_changes"] = analysis::count_sign_changes(scan.helicity);
    summary["l_max"] = scan.l_max;
    summary["helicity_definition"] = meta[0].second;
    io::write_text(reg, "scan_summary.json", summary.dump(2) + "\n");

    Metadata derived = base_derived(sc);
    derived.emplace_back("l_max", std::to_string(scan.l_max));
    reg.write_manifest("manifest.json", "timescan", scenario::to_toml(sc), derived,
                       timer.seconds());
}

void cmd_proton(const Scenario& sc, const RunOptions& opt) {
    Timer timer;
    OutputRegistry reg(opt.out_dir);

    const auto sweep = proton::moment_vs_waist_sweep(sc.proton_model, sc.proton_l,
                                                     sc.proton_waists, sc.proton_quad);

    Metadata meta;
    meta.emplace_back("profile", proton::to_string(sc.proton_model.profile));
    meta.emplace_back("l", std::to_string(sc.proton_l));
    meta.emplace_back("rms_fm", format_double(sc.proton_model.rms_charge_radius * 1e15));
    {
        std::vector<double> w_fm(sweep.size()), mu(sweep.size());
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            w_fm[i] = sweep[i].waist * 1e15;
            mu[i] = sweep[i].mu_over_mu_n;
        }
        io::write_csv_columns(reg, "proton_sweep.csv", meta, {"w_fm", "mu_over_muN"},
                              {w_fm, mu});
    }

    json summary;
    summary["profile"] = proton::to_string(sc.proton_model.profile);
    summary["l"] = sc.proton_l;
    summary["grid_n"] = sc.proton_quad.n;
    summary["extent_waists"] = sc.proton_quad.extent_waists;
    json points = json::array();
    double worst_defect = 0.0;
    for (const auto& p : sweep) {
        points.push_back({{"w_fm", p.waist * 1e15},
                          {"mu_over_muN", p.mu_over_mu_n},
                          {"convergence_defect", p.convergence_defect}});
        worst_defect = std::max(worst_defect, p.convergence_defect);
    }
    summary["points"] = points;
    summary["worst_convergence_defect"] = worst_defect;
    if (!sweep.empty()) {
        const auto& last = sweep.back();
        summary["asymptote_check"] = {
            {"w_over_rms", last.waist / sc.proton_model.rms_charge_radius},
            {"mu_over_muN", last.mu_over_mu_n},
            {"abs_deviation_from_l", std::abs(last.mu_over_mu_n - sc.proton_l)}};
    }
    io::write_text(reg, "proton_summary.json", summary.dump(2) + "\n");

    Metadata derived;
    derived.emplace_back("nuclear_magneton_J_per_T",
                         format_double(constants::nuclear_magneton));
    reg.write_manifest("manifest.json", "proton", scenario::to_toml(sc), derived,
                       timer.seconds());
}

}  // namespace chiralpinem::runner
