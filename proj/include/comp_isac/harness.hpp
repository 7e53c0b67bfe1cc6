#pragma once

/**
 * @file harness.hpp
 * @brief Parameter sweeps over a scenario: detection validation and rate sweeps.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "comp_isac/allocator.hpp"
#include "comp_isac/channel.hpp"

namespace comp_isac {

enum class SweepVariable { power_budget_db, pod_threshold };
enum class Scheme { ppa, epa, rpa };

std::string to_string(SweepVariable v);
std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);
/// Comma-separated list such as "ppa,epa".
std::vector<Scheme> parse_schemes(const std::string& list);

struct SweepSpec {
    SweepVariable variable = SweepVariable::power_budget_db;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
    std::vector<Scheme> schemes{Scheme::ppa, Scheme::epa, Scheme::rpa};
    std::uint64_t trials = 10000;  ///< Monte Carlo trials per target (PoD validation)
    int snapshots = 1;             ///< 1: one fixed-seed snapshot; M > 1: average over M
    int threads = 1;

    void validate() const;
    /// start, start + step, ... up to stop (inclusive within 1e-9 step).
    std::vector<double> grid() const;
};

struct ResultRow {
    std::string sweep;
    double sweep_value = 0.0;
    Scheme scheme = Scheme::ppa;
    int snapshots = 1;
    bool feasible = false;
    std::optional<double> sum_rate;
    std::vector<std::optional<double>> per_user_rate;
    std::vector<std::optional<double>> pod_closed_form;
    std::vector<std::optional<double>> pod_empirical;
    std::vector<std::optional<double>> pod_stderr;
    int iterations = 0;
    double wall_time_s = 0.0;
};

/// Scenario with the sweep variable set to value (budget in dB or every PoD threshold).
ScenarioConfig apply_sweep_value(ScenarioConfig config, SweepVariable variable, double value);

/// Snapshot m of the scenario, drawn from substream (config.seed, m).
ChannelRealization snapshot(const ScenarioConfig& config, int index);

/**
 * @brief Closed-form vs Monte Carlo detection probability along a budget grid.
 *
 * Each grid point and scheme yields one row carrying pod_closed_form and the
 * empirical rate from `trials` experiments per target.
 */
std::vector<ResultRow> run_pod_validation(const ScenarioConfig& config, const SweepSpec& spec);

/// Allocation per grid point and scheme; infeasible points have feasible == false and no rates.
std::vector<ResultRow> run_rate_sweep(const ScenarioConfig& config, const SweepSpec& spec);

}  // namespace comp_isac
