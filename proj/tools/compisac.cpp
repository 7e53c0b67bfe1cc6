// compisac: sweeps, single solves and plots for coordinated ISAC power allocation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "comp_isac/allocator.hpp"
#include "comp_isac/config.hpp"
#include "comp_isac/csv.hpp"
#include "comp_isac/errors.hpp"
#include "comp_isac/harness.hpp"
#include "comp_isac/plot.hpp"

namespace {

using namespace comp_isac;

enum ExitCode { kOk = 0, kConfig = 1, kInfeasible = 2, kNumerical = 3 };

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::uint64_t trials = 10000;
    std::string schemes;
    int threads = 1;
    int snapshots = 1;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<double> step;
    bool timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool sweep)
{
    cmd->add_option("--config", f.config_path, "scenario file (JSON); built-in defaults when omitted");
    cmd->add_option("--seed", f.seed, "channel snapshot seed (overrides the config)");
    cmd->add_option("--schemes", f.schemes, "comma-separated subset of ppa,epa,rpa");
    if (sweep) {
        cmd->add_option("--out", f.out_dir, "output directory");
        cmd->add_option("--trials", f.trials, "Monte Carlo trials per target");
        cmd->add_option("--threads", f.threads, "worker threads");
        cmd->add_option("--snapshots", f.snapshots, "average over this many channel snapshots");
        cmd->add_option("--start", f.start, "first grid value");
        cmd->add_option("--stop", f.stop, "last grid value");
        cmd->add_option("--step", f.step, "grid step");
        cmd->add_flag("--timing", f.timing, "append a wall_time_s column (output no longer reproducible)");
    }
}

ScenarioConfig load(const CommonFlags& f)
{
    ScenarioConfig c = f.config_path.empty() ? ScenarioConfig::defaults() : load_scenario(f.config_path);
    if (f.seed) c.seed = *f.seed;
    c.validate();
    return c;
}

SweepSpec make_spec(const CommonFlags& f, SweepVariable variable, double start, double stop, double step,
                    const std::string& default_schemes)
{
    SweepSpec s;
    s.variable = variable;
    s.start = f.start.value_or(start);
    s.stop = f.stop.value_or(stop);
    s.step = f.step.value_or(step);
    s.schemes = parse_schemes(f.schemes.empty() ? default_schemes : f.schemes);
    s.trials = f.trials;
    s.threads = f.threads;
    s.snapshots = f.snapshots;
    s.validate();
    return s;
}

int write_rows(const std::vector<ResultRow>& rows, const ScenarioConfig& c, const CommonFlags& f,
               const std::string& name)
{
    std::filesystem::create_directories(f.out_dir);
    const auto path = std::filesystem::path(f.out_dir) / name;
    emit_csv(rows, c.cells, path, f.timing);
    std::cout << path.string() << '\n';
    for (const auto& r : rows) {
        if (r.feasible) return kOk;
    }
    std::cerr << "error: kind=infeasible message=\"no feasible grid point\"\n";
    return kInfeasible;
}

nlohmann::json to_json(const AllocationResult& r)
{
    nlohmann::json j;
    j["powers"] = std::vector<double>(r.powers.values().data(), r.powers.values().data() + r.powers.size());
    j["per_user_rate"] = r.per_user_rate;
    j["sum_rate"] = r.sum_rate;
    j["per_target_pod"] = r.per_target_pod;
    j["feasible"] = r.feasible;
    j["outer_iterations"] = r.outer_iterations;
    j["objective_trace"] = r.objective_trace;
    if (std::isfinite(r.kkt_residual)) j["kkt_residual"] = r.kkt_residual;
    return j;
}

std::string quoted(std::string s)
{
    for (char& ch : s) {
        if (ch == '"' || ch == '\n') ch = '\'';
    }
    return "\"" + s + "\"";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coordinated multi-point ISAC detection and power allocation"};
    app.require_subcommand(1);

    CommonFlags pod_flags, budget_flags, xi_flags, solve_flags;
    std::string plot_csv, plot_out, solve_scheme = "ppa";

    auto* validate = app.add_subcommand("validate-pod", "closed-form vs Monte Carlo PoD over a budget grid");
    add_common(validate, pod_flags, true);
    auto* sweep_budget = app.add_subcommand("sweep-budget", "sum rate versus power budget");
    add_common(sweep_budget, budget_flags, true);
    auto* sweep_pod = app.add_subcommand("sweep-pod", "sum rate versus PoD threshold");
    add_common(sweep_pod, xi_flags, true);
    auto* solve = app.add_subcommand("solve", "single allocation, printed as JSON");
    add_common(solve, solve_flags, false);
    solve->add_option("--scheme", solve_scheme, "ppa, epa or rpa");
    auto* plot = app.add_subcommand("plot", "render SVG charts from a sweep CSV");
    plot->add_option("--csv", plot_csv, "CSV produced by a sweep")->required();
    plot->add_option("--out", plot_out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: kind=usage message=" << quoted(e.what()) << '\n';
        return kConfig;
    }

    try {
        if (*validate) {
            const ScenarioConfig c = load(pod_flags);
            const SweepSpec s = make_spec(pod_flags, SweepVariable::power_budget_db, 10.0, 20.0, 2.0, "epa");
            return write_rows(run_pod_validation(c, s), c, pod_flags, "validate_pod.csv");
        }
        if (*sweep_budget) {
            const ScenarioConfig c = load(budget_flags);
            const SweepSpec s = make_spec(budget_flags, SweepVariable::power_budget_db, 5.0, 25.0, 1.0, "ppa,epa,rpa");
            return write_rows(run_rate_sweep(c, s), c, budget_flags, "sweep_budget.csv");
        }
        if (*sweep_pod) {
            const ScenarioConfig c = load(xi_flags);
            const SweepSpec s = make_spec(xi_flags, SweepVariable::pod_threshold, 0.3, 0.95, 0.05, "ppa,epa,rpa");
            return write_rows(run_rate_sweep(c, s), c, xi_flags, "sweep_pod.csv");
        }
        if (*solve) {
            const ScenarioConfig c = load(solve_flags);
            const ChannelRealization realization = snapshot(c, 0);
            const Scheme scheme = parse_scheme(solve_scheme);
            AllocationResult r;
            if (scheme == Scheme::ppa) r = optimize_ppa(c, realization);
            if (scheme == Scheme::epa) r = epa(c, realization);
            if (scheme == Scheme::rpa) r = rpa(c, realization);
            std::cout << to_json(r).dump(2) << '\n';
            return r.feasible ? kOk : kInfeasible;
        }
        if (*plot) {
            for (const auto& p : render_plots(plot_csv, plot_out)) {
                std::cout << p.string() << '\n';
            }
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: kind=config key=" << e.key() << " message=" << quoted(e.what()) << '\n';
        return kConfig;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: kind=infeasible family=" << e.family() << " message=" << quoted(e.what()) << '\n';
        return kInfeasible;
    } catch (const NumericalError& e) {
        std::cerr << "error: kind=numerical message=" << quoted(e.what()) << '\n';
        return kNumerical;
    } catch (const DomainError& e) {
        std::cerr << "error: kind=numerical message=" << quoted(e.what()) << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: kind=io message=" << quoted(e.what()) << '\n';
        return kConfig;
    }
    return kOk;
}
