#include "beamstab/commands.hpp"

#include "beamstab/bounds.hpp"
#include "beamstab/errors.hpp"
#include "beamstab/parallel.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace beamstab {

namespace {

using nlohmann::json;

std::ofstream open_output(const RunConfig& config, const std::string& name) {
    std::filesystem::create_directories(config.out);
    const std::filesystem::path path = config.out / name;
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
    return file;
}

void print_report(const ValidationReport& report, std::ostream& stream) {
    for (const Violation& v : report.violations) {
        stream << (v.severity == Severity::error ? "ERROR " : "WARNING ") << v.message << '\n';
    }
}

// Loads and validates; returns nullopt (after printing) on clause errors.
std::optional<BeamProblem> admissible_problem(const RunConfig& config, std::ostream& err) {
    check_config(config);
    BeamProblem problem = load_config_problem(config);
    const ValidationReport report = validate(problem);
    print_report(report, err);
    if (report.has_errors()) return std::nullopt;
    return problem;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const NoAdmissiblePenalty& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return exit_numerical;
    }
}

struct Simulation {
    SolutionTrace trace;
    EnergyTrace energy;
    std::optional<DecayBound> bound;
    std::optional<std::string> bound_error;
};

// Runs the problem, computes the energies and, when a penalty is admissible,
// the bound and the L column.
Simulation simulate(const RunConfig& config, const BeamProblem& problem) {
    const Mesh mesh(problem.length, config.nodes);
    SolutionTrace trace = run(problem, mesh, time_grid(config, problem));
    EnergyTrace e = energy(trace, config.mode);
    Simulation sim{std::move(trace), std::move(e), std::nullopt, std::nullopt};
    try {
        sim.bound = decay_bound(problem, &sim.energy, config.lambda);
    } catch (const NoAdmissiblePenalty& ex) {
        sim.bound_error = ex.what();
        return sim;
    }
    sim.energy.lambda = sim.bound->lambda;
    sim.energy.L.resize(sim.energy.E.size());
    for (std::size_t i = 0; i < sim.energy.E.size(); ++i) {
        sim.energy.L[i] = sim.energy.E[i] + sim.bound->lambda * sim.energy.J[i];
    }
    return sim;
}

json bound_json(const BeamProblem& problem, const Simulation& sim) {
    json j;
    if (sim.bound) {
        j = to_json(*sim.bound);
        j["envelope"] = to_json(verify_envelopes(sim.energy, *sim.bound));
    } else {
        const BetaConstants beta = beta_constants(problem);
        j = {{"beta0", beta.beta0}, {"beta1", beta.beta1}, {"regime", nullptr}, {"error", *sim.bound_error}};
    }
    j["E0"] = sim.energy.E0;
    j["forced"] = sim.energy.forced;
    j["mode"] = std::string(to_string(sim.energy.mode));
    j["nodes"] = sim.trace.mesh().node_count();
    j["dt"] = sim.trace.grid.step();
    return j;
}

void write_matrices(const RunConfig& config, const SemiDiscreteSystem& system) {
    auto m = open_output(config, "mass.mtx");
    system.mass().write_matrix_market(m);
    auto c = open_output(config, "damping.mtx");
    system.damping().write_matrix_market(c);
    auto k = open_output(config, "stiffness.mtx");
    system.stiffness().write_matrix_market(k);
}

}  // namespace

void check_config(const RunConfig& c) {
    if (c.preset.has_value() == c.problem_file.has_value()) {
        throw DomainError("give exactly one of --preset and --problem");
    }
    check_resolution(c);
}

void check_resolution(const RunConfig& c) {
    if (c.dt && c.ratio) throw DomainError("give at most one of --dt and --ratio");
    if (c.dt && !(*c.dt > 0.0)) throw DomainError("--dt must be positive");
    if (c.ratio && !(*c.ratio > 0.0)) throw DomainError("--ratio must be positive");
    if (c.nodes < 3) throw DomainError("--nodes must be at least 3");
    if (c.decimation < 1) throw DomainError("--decimate must be at least 1");
}

BeamProblem load_config_problem(const RunConfig& c) {
    if (c.preset) return preset(*c.preset);
    return load_problem(c.problem_file->string());
}

TimeGrid time_grid(const RunConfig& c, const BeamProblem& problem) {
    if (c.dt) return TimeGrid::from_step(problem.final_time, *c.dt);
    const double spacing = problem.length / static_cast<double>(c.nodes - 1);
    return TimeGrid::from_step(problem.final_time, spacing / c.ratio.value_or(default_ratio));
}

BeamProblem with_parameter(const BeamProblem& problem, const std::string& parameter, double value) {
    if (!(value >= 0.0)) throw StructuralError(parameter + " = " + std::to_string(value) + " is negative");
    BeamProblem p = problem;
    if (parameter == "k_r") {
        p.boundary.k_r = value;
    } else if (parameter == "k_a") {
        p.boundary.k_a = value;
    } else if (parameter == "k_d") {
        p.boundary.k_d = value;
    } else if (parameter == "k_v") {
        p.boundary.k_v = value;
    } else if (parameter == "mu_scale") {
        p.mu = problem.mu.scaled(value);
    } else {
        throw DomainError("unknown sweep parameter '" + parameter + "' (k_r|k_a|k_d|k_v|mu_scale)");
    }
    return p;
}

std::vector<SweepRow> sweep(const RunConfig& config, const BeamProblem& problem, const std::string& parameter,
                            const std::vector<double>& values) {
    std::vector<BeamProblem> problems;
    problems.reserve(values.size());
    for (double v : values) {
        BeamProblem p = with_parameter(problem, parameter, v);
        const ValidationReport report = validate(p);
        for (const Violation& violation : report.violations) {
            if (violation.severity == Severity::error) {
                throw StructuralError(parameter + " = " + std::to_string(v) + ": " + violation.message);
            }
        }
        problems.push_back(std::move(p));
    }
    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), [&](std::size_t i) {
        const Simulation sim = simulate(config, problems[i]);
        const BetaConstants beta = beta_constants(problems[i]);
        SweepRow& row = rows[i];
        row.value = values[i];
        row.beta0 = beta.beta0;
        row.beta1 = beta.beta1;
        if (sim.bound) {
            row.regime = std::string(to_string(sim.bound->regime));
            row.lambda_max = sim.bound->lambda_max;
            row.sigma = sim.bound->sigma;
            row.M_d = sim.bound->M_d;
        }
        const EnergyTrace& e = sim.energy;
        row.E0 = e.E0;
        row.E_final_ratio = e.E0 > 0.0 ? e.E.back() / e.E0 : 0.0;
        row.j_mu = e.j_mu.back();
        row.j_a = e.j_a.back();
        row.j_v = e.j_v.back();
    });
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::string& parameter, const std::vector<SweepRow>& rows) {
    out << parameter << ",regime,beta0,beta1,lambda_max,M_d,sigma,E0,E_T_over_E0,j_mu_T,j_a_T,j_v_T\n";
    out << std::setprecision(12);
    const auto optional_cell = [&](const std::optional<double>& v) {
        if (v) out << *v;
        out << ',';
    };
    for (const SweepRow& r : rows) {
        out << r.value << ',' << r.regime.value_or("none") << ',' << r.beta0 << ',' << r.beta1 << ',';
        optional_cell(r.lambda_max);
        optional_cell(r.M_d);
        optional_cell(r.sigma);
        out << r.E0 << ',' << r.E_final_ratio << ',' << r.j_mu << ',' << r.j_a << ',' << r.j_v << '\n';
    }
}

void write_convergence_csv(std::ostream& out, Study study, const std::vector<ConvergenceRow>& rows) {
    out << "study,nodes,levels,dx,dt,error,relative_error,order\n";
    out << std::setprecision(12);
    for (const ConvergenceRow& r : rows) {
        out << to_string(study) << ',' << r.nodes << ',' << r.levels << ',' << r.dx << ',' << r.dt << ',' << r.error
            << ',' << r.relative_error << ',';
        if (r.order) out << *r.order;
        out << '\n';
    }
}

void write_error_csv(std::ostream& out, const ErrorTable& table) {
    out << "field,max_error,l2_error\n";
    out << std::setprecision(12);
    out << "u," << table.u.max << ',' << table.u.l2 << '\n';
    out << "u_x," << table.ux.max << ',' << table.ux.l2 << '\n';
    out << "u_t," << table.ut.max << ',' << table.ut.l2 << '\n';
    out << "u_xx," << table.uxx.max << ',' << table.uxx.l2 << '\n';
    out << "u_nodal," << table.nodal_u << ",\n";
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        check_config(config);
        const ValidationReport report = validate(load_config_problem(config));
        print_report(report, out);
        if (report.has_errors()) return int{exit_validation};
        if (report.empty()) out << "ok\n";
        return int{exit_ok};
    });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto problem = admissible_problem(config, err);
        if (!problem) return int{exit_validation};
        const Simulation sim = simulate(config, *problem);
        {
            auto f = open_output(config, "problem.json");
            f << serialize(*problem);
        }
        {
            auto f = open_output(config, "trace.csv");
            write_trace_csv(f, sim.trace, config.decimation);
        }
        {
            auto f = open_output(config, "energy.csv");
            write_energy_csv(f, sim.energy);
        }
        {
            auto f = open_output(config, "bounds.json");
            f << bound_json(*problem, sim).dump(2) << '\n';
        }
        if (config.dump_matrices) write_matrices(config, *sim.trace.system);
        out << "nodes " << config.nodes << ", levels " << sim.trace.grid.size() << ", dt " << sim.trace.grid.step()
            << '\n';
        out << "E(0) " << sim.energy.E0 << ", E(T) " << sim.energy.E.back() << '\n';
        if (sim.bound) {
            out << "regime " << to_string(sim.bound->regime) << ", lambda " << sim.bound->lambda << ", M_d "
                << sim.bound->M_d << ", sigma " << sim.bound->sigma << '\n';
        } else {
            out << "no decay bound: " << *sim.bound_error << '\n';
        }
        out << "wrote " << config.out.string() << '\n';
        return int{exit_ok};
    });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto problem = admissible_problem(config, err);
        if (!problem) return int{exit_validation};
        const auto exact = exact_solution_for(*problem);
        if (!exact) throw DomainError("verify needs a problem with an exact solution (test_NE1)");
        const Mesh mesh(problem->length, config.nodes);
        const SolutionTrace trace = run(*problem, mesh, time_grid(config, *problem));
        const ErrorTable table = solution_errors(trace, *exact, config.mode);
        auto f = open_output(config, "errors.csv");
        write_error_csv(f, table);
        write_error_csv(out, table);
        return int{exit_ok};
    });
}

int cmd_convergence(const RunConfig& config, Study study, std::size_t levels, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto problem = admissible_problem(config, err);
        if (!problem) return int{exit_validation};
        StudySettings s;
        s.study = study;
        s.nodes = config.nodes;
        s.levels = levels;
        s.mode = config.mode;
        s.ratio = config.ratio.value_or(default_ratio);
        s.dt = config.dt.value_or(problem->length / static_cast<double>(config.nodes - 1) / s.ratio);
        if (study == Study::identity && config.dt) {
            throw DomainError("the identity study refines h_x and h_t together; use --ratio");
        }
        const auto rows = convergence_study(*problem, s);
        auto f = open_output(config, "convergence.csv");
        write_convergence_csv(f, study, rows);
        write_convergence_csv(out, study, rows);
        return int{exit_ok};
    });
}

int cmd_sweep(const RunConfig& config, const std::string& parameter, const std::vector<double>& values,
              std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (values.empty()) throw DomainError("sweep needs at least one value");
        const auto problem = admissible_problem(config, err);
        if (!problem) return int{exit_validation};
        const auto rows = sweep(config, *problem, parameter, values);
        auto f = open_output(config, "sweep.csv");
        write_sweep_csv(f, parameter, rows);
        write_sweep_csv(out, parameter, rows);
        return int{exit_ok};
    });
}

int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto problem = admissible_problem(config, err);
        if (!problem) return int{exit_validation};
        json j;
        const double mu0 = coefficient_bounds(problem->mu, problem->length).first;
        if (mu0 > 0.0) {
            // The constants need no trace here.
            j = to_json(decay_bound(*problem, nullptr, config.lambda));
        } else {
            const Simulation sim = simulate(config, *problem);
            if (!sim.bound) throw NoAdmissiblePenalty(*sim.bound_error);
            j = bound_json(*problem, sim);
        }
        auto f = open_output(config, "bounds.json");
        f << j.dump(2) << '\n';
        out << j.dump(2) << '\n';
        return int{exit_ok};
    });
}

}  // namespace beamstab
