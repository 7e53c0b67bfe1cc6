#include "comp_isac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "comp_isac/detection.hpp"
#include "comp_isac/errors.hpp"

namespace comp_isac {

std::string to_string(SweepVariable v)
{
    return v == SweepVariable::power_budget_db ? "power_budget_db" : "pod_threshold";
}

std::string to_string(Scheme s)
{
    switch (s) {
        case Scheme::ppa: return "ppa";
        case Scheme::epa: return "epa";
        case Scheme::rpa: return "rpa";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name)
{
    if (name == "ppa") return Scheme::ppa;
    if (name == "epa") return Scheme::epa;
    if (name == "rpa") return Scheme::rpa;
    throw ConfigError("--schemes", "unknown scheme '" + name + "'");
}

std::vector<Scheme> parse_schemes(const std::string& list)
{
    std::vector<Scheme> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            const Scheme s = parse_scheme(item);
            if (std::find(out.begin(), out.end(), s) == out.end()) {
                out.push_back(s);
            }
        }
    }
    if (out.empty()) {
        throw ConfigError("--schemes", "no schemes given");
    }
    return out;
}

void SweepSpec::validate() const
{
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ConfigError("--step", "must be > 0");
    }
    if (!std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw ConfigError("--stop", "grid is empty (stop < start)");
    }
    if (schemes.empty()) {
        throw ConfigError("--schemes", "no schemes given");
    }
    if (snapshots < 1) {
        throw ConfigError("--snapshots", "must be >= 1");
    }
    if (trials < 1) {
        throw ConfigError("--trials", "must be >= 1");
    }
}

std::vector<double> SweepSpec::grid() const
{
    validate();
    std::vector<double> values;
    for (int k = 0;; ++k) {
        const double v = start + k * step;
        if (v > stop + 1e-9 * step) break;
        values.push_back(v);
    }
    return values;
}

ScenarioConfig apply_sweep_value(ScenarioConfig config, SweepVariable variable, double value)
{
    if (variable == SweepVariable::power_budget_db) {
        config.power_budget_db = value;
    } else {
        config.pod_thresholds.assign(config.cells, value);
    }
    config.validate();
    return config;
}

ChannelRealization snapshot(const ScenarioConfig& config, int index)
{
    RandomStream stream = RandomStream::substream(config.seed, static_cast<std::uint64_t>(index));
    return sample_channels(config, stream);
}

namespace {

std::optional<AllocationResult> allocate(Scheme scheme, const ScenarioConfig& config,
                                         const ChannelRealization& realization)
{
    switch (scheme) {
        case Scheme::epa:
            return epa(config, realization);
        case Scheme::rpa:
            try {
                return rpa(config, realization);
            } catch (const InfeasibleError&) {
                return std::nullopt;
            }
        case Scheme::ppa:
            try {
                return optimize_ppa(config, realization);
            } catch (const InfeasibleError&) {
                return std::nullopt;
            }
    }
    return std::nullopt;
}

std::optional<double> mean_of(const std::vector<double>& v)
{
    if (v.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Run task(k) for k in [0, count) on `threads` workers; result order is by k.
template <class Task>
void parallel_for(std::size_t count, int threads, Task&& task)
{
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || count <= 1) {
        for (std::size_t k = 0; k < count; ++k) task(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    task(k);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct Cell {
    double value;
    Scheme scheme;
};

std::vector<Cell> cells_of(const SweepSpec& spec)
{
    std::vector<Cell> cells;
    for (double v : spec.grid()) {
        for (Scheme s : spec.schemes) {
            cells.push_back({v, s});
        }
    }
    return cells;
}

ResultRow blank_row(const std::string& sweep, const Cell& cell, int cells, int snapshots)
{
    ResultRow row;
    row.sweep = sweep;
    row.sweep_value = cell.value;
    row.scheme = cell.scheme;
    row.snapshots = snapshots;
    row.per_user_rate.assign(cells, std::nullopt);
    row.pod_closed_form.assign(cells, std::nullopt);
    row.pod_empirical.assign(cells, std::nullopt);
    row.pod_stderr.assign(cells, std::nullopt);
    return row;
}

}  // namespace

std::vector<ResultRow> run_rate_sweep(const ScenarioConfig& config, const SweepSpec& spec)
{
    config.validate();
    const std::vector<Cell> cells = cells_of(spec);
    const int n = config.cells;
    const std::string sweep = to_string(spec.variable);

    std::vector<ChannelRealization> snaps;
    for (int m = 0; m < spec.snapshots; ++m) snaps.push_back(snapshot(config, m));

    using Outcome = std::vector<std::optional<AllocationResult>>;  // one entry per snapshot
    std::vector<Outcome> outcomes(cells.size());
    std::vector<double> seconds(cells.size(), 0.0);
    parallel_for(cells.size(), spec.threads, [&](std::size_t k) {
        const auto t0 = std::chrono::steady_clock::now();
        const ScenarioConfig point = apply_sweep_value(config, spec.variable, cells[k].value);
        for (const auto& realization : snaps) {
            outcomes[k].push_back(allocate(cells[k].scheme, point, realization));
        }
        seconds[k] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });

    // Second pass in order of growing feasible set: the neighbour's PPA optimum becomes an extra start.
    std::vector<std::size_t> ppa_cells;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (cells[k].scheme == Scheme::ppa) ppa_cells.push_back(k);
    }
    if (spec.variable == SweepVariable::pod_threshold) {
        std::reverse(ppa_cells.begin(), ppa_cells.end());
    }
    for (std::size_t j = 1; j < ppa_cells.size(); ++j) {
        const std::size_t prev = ppa_cells[j - 1];
        const std::size_t k = ppa_cells[j];
        const auto t0 = std::chrono::steady_clock::now();
        const ScenarioConfig point = apply_sweep_value(config, spec.variable, cells[k].value);
        for (std::size_t m = 0; m < snaps.size(); ++m) {
            const auto& seed = outcomes[prev][m];
            auto& current = outcomes[k][m];
            if (!seed || !seed->feasible || !current) continue;
            PpaOptions options;
            options.random_starts = 0;
            options.extra_starts.push_back(seed->powers);
            AllocationResult alt = optimize_ppa(point, snaps[m], options);
            if (alt.feasible && alt.sum_rate > current->sum_rate) {
                alt.start_index = -1;
                current = std::move(alt);
            }
        }
        seconds[k] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    std::vector<ResultRow> rows;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        ResultRow row = blank_row(sweep, cells[k], n, spec.snapshots);
        const Outcome& results = outcomes[k];
        bool all_allocated = true;
        bool all_feasible = true;
        for (const auto& r : results) {
            all_allocated = all_allocated && r.has_value();
            all_feasible = all_feasible && r && r->feasible;
        }
        row.feasible = all_feasible;
        if (all_feasible) {
            std::vector<double> sums;
            for (const auto& r : results) {
                sums.push_back(r->sum_rate);
                row.iterations += r->outer_iterations;
            }
            row.sum_rate = mean_of(sums);
        }
        if (all_allocated) {
            // Infeasible EPA allocations still report their PoD.
            for (int i = 0; i < n; ++i) {
                std::vector<double> rate;
                std::vector<double> pod;
                for (const auto& r : results) {
                    rate.push_back(r->per_user_rate[i]);
                    pod.push_back(r->per_target_pod[i]);
                }
                if (all_feasible) row.per_user_rate[i] = mean_of(rate);
                row.pod_closed_form[i] = mean_of(pod);
            }
        }
        row.wall_time_s = seconds[k];
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> run_pod_validation(const ScenarioConfig& config, const SweepSpec& spec)
{
    config.validate();
    if (spec.variable != SweepVariable::power_budget_db) {
        throw ConfigError("sweep", "PoD validation sweeps the power budget");
    }
    const std::vector<Cell> cells = cells_of(spec);
    const int n = config.cells;
    const std::string sweep = "pod_validation";

    std::vector<ChannelRealization> snaps;
    for (int m = 0; m < spec.snapshots; ++m) snaps.push_back(snapshot(config, m));

    std::vector<ResultRow> rows(cells.size());
    parallel_for(cells.size(), spec.threads, [&](std::size_t k) {
        const auto t0 = std::chrono::steady_clock::now();
        const ScenarioConfig point = apply_sweep_value(config, spec.variable, cells[k].value);
        ResultRow row = blank_row(sweep, cells[k], n, spec.snapshots);

        std::vector<std::vector<double>> cf(n);
        std::vector<std::vector<double>> mc(n);
        std::vector<std::vector<double>> se(n);
        std::vector<std::vector<double>> rate(n);
        std::vector<double> sums;
        bool all_allocated = true;
        bool all_feasible = true;
        for (std::size_t m = 0; m < snaps.size(); ++m) {
            const auto r = allocate(cells[k].scheme, point, snaps[m]);
            if (!r) {
                all_allocated = false;
                all_feasible = false;
                break;
            }
            all_feasible = all_feasible && r->feasible;
            sums.push_back(r->sum_rate);
            row.iterations += r->outer_iterations;
            for (int i = 0; i < n; ++i) {
                const DetectionSetup setup = make_detection_setup(point, i);
                cf[i].push_back(r->per_target_pod[i]);
                rate[i].push_back(r->per_user_rate[i]);
                // Seed depends on (grid point, scheme, snapshot, target) only.
                const std::uint64_t seed =
                    mix64(config.seed ^ mix64((static_cast<std::uint64_t>(k) << 24) ^ (m << 8) ^
                                              static_cast<std::uint64_t>(i)));
                const DetectionEstimate est =
                    simulate_detection(setup, r->powers, snaps[m], i, spec.trials, seed);
                mc[i].push_back(est.pod_hat);
                se[i].push_back(est.pod_stderr);
            }
        }
        row.feasible = all_allocated && all_feasible;
        if (all_allocated && all_feasible) {
            row.sum_rate = mean_of(sums);
        }
        if (all_allocated) {
            for (int i = 0; i < n; ++i) {
                if (all_feasible) row.per_user_rate[i] = mean_of(rate[i]);
                row.pod_closed_form[i] = mean_of(cf[i]);
                row.pod_empirical[i] = mean_of(mc[i]);
                // Standard error of the snapshot average.
                double var = 0.0;
                for (double s : se[i]) var += s * s;
                row.pod_stderr[i] = std::sqrt(var) / static_cast<double>(se[i].size());
            }
        }
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows[k] = std::move(row);
    });
    return rows;
}

}  // namespace comp_isac
