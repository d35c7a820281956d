#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "chiralpinem/config.hpp"
#include "chiralpinem/errors.hpp"
#include "chiralpinem/runner.hpp"
#include "chiralpinem/scenario.hpp"
#include "chiralpinem/version.hpp"

namespace {

int run(const std::string& subcommand, const std::string& config_path,
        const chiralpinem::runner::RunOptions& opt) {
    using namespace chiralpinem;
    const scenario::Scenario sc =
        config_path.empty() ? scenario::default_scenario()
                            : scenario::resolve(config::Document::parse_file(config_path));
    if (subcommand == "nearfield")
        runner::cmd_nearfield(sc, opt);
    else if (subcommand == "farfield")
        runner::cmd_farfield(sc, opt);
    else if (subcommand == "timescan")
        runner::cmd_timescan(sc, opt);
    else if (subcommand == "proton")
        runner::cmd_proton(sc, opt);
    std::printf("wrote %s/manifest.json\n", opt.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chiral-pinem: electron vortex beams from chiral plasmonic near fields"};
    app.set_version_flag("--version", chiralpinem::version_string());
    app.require_subcommand(1);

    std::string config_path;
    chiralpinem::runner::RunOptions opt;

    const auto add_common = [&](CLI::App* cmd, bool beam_options) {
        cmd->add_option("--config", config_path, "TOML scenario file (defaults used if omitted)");
        cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        if (beam_options)
            cmd->add_option("--beta-file", opt.beta_file,
                            "import beta from a binary grid file instead of synthesizing");
    };

    CLI::App* nearfield = app.add_subcommand("nearfield", "real-space maps of beta and sidebands");
    add_common(nearfield, true);
    nearfield->add_flag("--keep-sidebands", opt.keep_sidebands, "emit per-order sideband maps");

    CLI::App* farfield = app.add_subcommand("farfield", "momentum-space intensity maps");
    add_common(farfield, true);
    farfield->add_flag("--profiles", opt.profiles, "emit line profiles CSV");
    farfield->add_flag("--keep-sidebands", opt.keep_sidebands,
                       "retain per-order momentum fields");

    CLI::App* timescan = app.add_subcommand("timescan", "two-pulse delay scan");
    add_common(timescan, false);

    CLI::App* proton = app.add_subcommand("proton", "OAM proton magnetic moment sweep");
    add_common(proton, false);

    CLI11_PARSE(app, argc, argv);

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return run(sub, config_path, opt);
    } catch (const chiralpinem::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const chiralpinem::ResolutionError& e) {
        std::fprintf(stderr, "convergence error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
