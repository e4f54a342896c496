#include "beamstab/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace beamstab;

namespace {

void add_common(CLI::App& cmd, RunConfig& c, std::string& mode, std::string& problem_file) {
    auto* preset_opt = cmd.add_option("--preset", c.preset, "Preset name")
                           ->check(CLI::IsMember(preset_names()));
    auto* file_opt = cmd.add_option("--problem", problem_file, "Problem JSON file");
    preset_opt->excludes(file_opt);
    cmd.add_option("--nodes", c.nodes, "Mesh node count M (>= 3)")->capture_default_str();
    auto* dt = cmd.add_option("--dt", c.dt, "Time step h_t");
    auto* ratio = cmd.add_option("--ratio", c.ratio, "h_t = h_x / ratio (default 40)");
    dt->excludes(ratio);
    cmd.add_option("--lambda", c.lambda, "Lyapunov penalty (default 0.99 lambda_max)");
    cmd.add_option("--mode", mode, "Curvature recovery: paper or basis")
        ->check(CLI::IsMember({"paper", "basis"}))
        ->capture_default_str();
    cmd.add_option("--out", c.out, "Output directory")->capture_default_str();
    cmd.add_option("--decimate", c.decimation, "Write every k-th level to trace.csv")->capture_default_str();
    cmd.add_flag("--dump-matrices", c.dump_matrices, "Also write M, C, K in MatrixMarket format");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite element simulation and decay bounds for damped Euler-Bernoulli beams"};
    app.require_subcommand(1);

    std::map<std::string, RunConfig> configs;
    std::map<std::string, std::string> modes;
    std::map<std::string, std::string> files;
    const std::map<std::string, std::string> about{
        {"validate", "Check a problem's admissibility conditions"},
        {"simulate", "Run a simulation and write trace, energy and bounds"},
        {"verify", "Error table against the exact solution (test_NE1)"},
        {"convergence", "Refinement study with observed orders"},
        {"sweep", "Vary one damping parameter and summarize each run"},
        {"bounds", "Decay constants and penalty scan"},
    };
    std::map<std::string, CLI::App*> commands;
    for (const auto& [name, text] : about) {
        modes[name] = "paper";
        commands[name] = app.add_subcommand(name, text);
        add_common(*commands[name], configs[name], modes[name], files[name]);
    }

    std::size_t levels = 4;
    std::string study = "temporal";
    commands["convergence"]->add_option("--levels", levels, "Number of refinement levels (>= 3)")
        ->capture_default_str();
    commands["convergence"]->add_option("--study", study, "temporal, spatial or identity")
        ->check(CLI::IsMember({"temporal", "spatial", "identity"}))
        ->capture_default_str();

    std::string parameter;
    std::vector<double> values;
    commands["sweep"]->add_option("--param", parameter, "k_r, k_a, k_d, k_v or mu_scale")
        ->required()
        ->check(CLI::IsMember({"k_r", "k_a", "k_d", "k_v", "mu_scale"}));
    commands["sweep"]->add_option("--values", values, "Parameter values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    for (const auto& [name, cmd] : commands) {
        if (!cmd->parsed()) continue;
        RunConfig& c = configs[name];
        c.mode = curvature_mode_from_string(modes[name]);
        if (!files[name].empty()) c.problem_file = files[name];
        if (!c.preset && !c.problem_file) {
            std::cerr << "error: give --preset or --problem\n";
            return exit_usage;
        }
        if (name == "validate") return cmd_validate(c, std::cout, std::cerr);
        if (name == "simulate") return cmd_simulate(c, std::cout, std::cerr);
        if (name == "verify") return cmd_verify(c, std::cout, std::cerr);
        if (name == "convergence") {
            return cmd_convergence(c, study_from_string(study), levels, std::cout, std::cerr);
        }
        if (name == "sweep") return cmd_sweep(c, parameter, values, std::cout, std::cerr);
        if (name == "bounds") return cmd_bounds(c, std::cout, std::cerr);
    }
    return exit_usage;
}
