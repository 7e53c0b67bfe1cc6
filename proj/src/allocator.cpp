#include "comp_isac/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "comp_isac/detection.hpp"
#include "comp_isac/errors.hpp"
#include "comp_isac/specfun.hpp"

namespace comp_isac {

namespace {

constexpr double kSlackTolerance = 1e-9;
constexpr int kRpaAttempts = 100000;

const double kInvLn2 = 1.0 / std::numbers::ln2;

void check_index(int index, int cells, const char* fn)
{
    if (index < 0 || index >= cells) {
        throw DomainError(std::string(fn) + ": index out of range");
    }
}

double interference_plus_noise(const PowerVector& powers, const ChannelRealization& realization, int user)
{
    double sum = realization.sigma_c2(user);
    for (int l = 0; l < powers.size(); ++l) {
        if (l != user) {
            sum += powers[l] * realization.rho(l, user);
        }
    }
    return sum;
}

struct Branch {
    PowerVector powers;
    double sum_rate = -std::numeric_limits<double>::infinity();
    std::vector<double> trace;
    int iterations = 0;
    double kkt_residual = std::numeric_limits<double>::quiet_NaN();
    bool ran = false;
};

Branch run_branch(const PowerVector& start, const LinearConstraintSet& constraints,
                  const ChannelRealization& realization, double tol, int max_outer)
{
    Branch b;
    b.powers = start;
    b.sum_rate = sum_rate(start, realization);
    b.trace.push_back(b.sum_rate);
    b.ran = true;
    for (int it = 0; it < max_outer; ++it) {
        const SurrogateState state = t_update(b.powers, realization);
        const SubproblemSolution sub = solve_subproblem(state, constraints, realization, b.powers);
        ++b.iterations;
        const double next = sum_rate(sub.powers, realization);
        if (it == 0 || next >= b.sum_rate) {
            b.kkt_residual = sub.kkt_residual;
        }
        // Non-improving steps are refused.
        if (next < b.sum_rate) {
            break;
        }
        const double gain = next - b.sum_rate;
        b.powers = sub.powers;
        b.sum_rate = next;
        b.trace.push_back(next);
        if (gain < tol) {
            break;
        }
    }
    return b;
}

}  // namespace

std::string to_string(RowFamily family)
{
    switch (family) {
        case RowFamily::positivity: return "positivity";
        case RowFamily::budget: return "budget";
        case RowFamily::sinr: return "sinr";
        case RowFamily::sensing: return "sensing";
    }
    return "unknown";
}

LinearInequalities LinearConstraintSet::rows(std::vector<RowFamily>* labels, bool with_sinr,
                                             bool with_sensing) const
{
    const int n = cells();
    std::vector<Eigen::RowVectorXd> a;
    std::vector<double> b;
    std::vector<RowFamily> fam;

    for (int l = 0; l < n; ++l) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
        row(l) = -1.0;
        a.push_back(row);
        b.push_back(0.0);
        fam.push_back(RowFamily::positivity);
    }
    a.push_back(Eigen::RowVectorXd::Ones(n));
    b.push_back(budget);
    fam.push_back(RowFamily::budget);

    if (with_sinr) {
        for (int i = 0; i < n; ++i) {
            if (!(zeta_c(i) > 0.0)) continue;
            Eigen::RowVectorXd row(n);
            for (int l = 0; l < n; ++l) {
                row(l) = (l == i) ? -rho(i, i) : zeta_c(i) * rho(l, i);
            }
            a.push_back(row);
            b.push_back(-zeta_c(i) * sigma_c2(i));
            fam.push_back(RowFamily::sinr);
        }
    }
    if (with_sensing) {
        for (int i = 0; i < n; ++i) {
            if (!(zeta_s(i) > 0.0)) continue;
            a.push_back(-g.col(i).transpose());
            b.push_back(-zeta_s(i) * sigma_s2(i));
            fam.push_back(RowFamily::sensing);
        }
    }

    LinearInequalities out;
    out.A.resize(static_cast<Eigen::Index>(a.size()), n);
    out.b.resize(static_cast<Eigen::Index>(b.size()));
    for (std::size_t k = 0; k < a.size(); ++k) {
        out.A.row(static_cast<Eigen::Index>(k)) = a[k];
        out.b(static_cast<Eigen::Index>(k)) = b[k];
    }
    if (labels) {
        *labels = std::move(fam);
    }
    return out;
}

Eigen::VectorXd LinearConstraintSet::slacks(const PowerVector& powers, std::vector<RowFamily>* labels) const
{
    return rows(labels).slacks(powers.values());
}

FeasibilityReport feasibility_check(const LinearConstraintSet& constraints,
                                    const std::optional<PowerVector>& powers)
{
    FeasibilityReport report;
    if (powers) {
        report.slacks = constraints.slacks(*powers, &report.labels);
        report.min_slack = report.slacks.minCoeff();
        report.feasible = report.min_slack >= -kSlackTolerance;
        if (!report.feasible) {
            Eigen::Index worst = 0;
            report.slacks.minCoeff(&worst);
            report.violated = to_string(report.labels[static_cast<std::size_t>(worst)]);
        }
        return report;
    }

    const int n = constraints.cells();
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(n, constraints.budget / (n + 1));
    const MinSlackResult best = maximize_min_slack(constraints.rows(&report.labels), x0);
    report.min_slack = best.min_slack;
    report.feasible = best.min_slack >= -kSlackTolerance;
    report.witness = PowerVector(best.x.cwiseMax(0.0));
    if (!report.feasible) {
        auto nonempty = [&](bool sinr, bool sensing) {
            return maximize_min_slack(constraints.rows(nullptr, sinr, sensing), x0).min_slack >= -kSlackTolerance;
        };
        if (!(constraints.budget > 0.0)) {
            report.violated = "budget";
        } else if (!nonempty(true, false)) {
            report.violated = "sinr";
        } else if (!nonempty(false, true)) {
            report.violated = "sensing";
        } else {
            report.violated = "joint";
        }
    }
    return report;
}

double user_rate(const PowerVector& powers, const ChannelRealization& realization, int user)
{
    check_index(user, realization.cells(), "user_rate");
    const double signal = powers[user] * realization.rho(user, user);
    return std::log2(1.0 + signal / interference_plus_noise(powers, realization, user));
}

double sum_rate(const PowerVector& powers, const ChannelRealization& realization)
{
    double total = 0.0;
    for (int i = 0; i < realization.cells(); ++i) {
        total += user_rate(powers, realization, i);
    }
    return total;
}

double rate_to_sinr_threshold(double rate_threshold)
{
    if (!(rate_threshold >= 0.0)) {
        throw DomainError("rate_to_sinr_threshold: rate must be >= 0");
    }
    return std::exp2(rate_threshold) - 1.0;
}

double pod_to_snr_threshold(double xi, int cells, double delta, int samples)
{
    if (!(xi >= 0.0 && xi < 1.0)) {
        throw DomainError("pod_to_snr_threshold: xi must lie in [0, 1)");
    }
    if (samples < 1) {
        throw DomainError("pod_to_snr_threshold: N must be >= 1");
    }
    const double b = std::sqrt(2.0 * delta);
    if (xi <= specfun::marcum_q(cells, 0.0, b)) {
        return 0.0;
    }
    const double a = specfun::inv_marcum_q_a(cells, b, xi);
    return a * a / (2.0 * samples);
}

double t_update(const PowerVector& powers, const ChannelRealization& realization, int user)
{
    check_index(user, realization.cells(), "t_update");
    return 1.0 / interference_plus_noise(powers, realization, user);
}

SurrogateState t_update(const PowerVector& powers, const ChannelRealization& realization)
{
    SurrogateState s;
    s.t.resize(realization.cells());
    for (int i = 0; i < realization.cells(); ++i) {
        s.t(i) = t_update(powers, realization, i);
    }
    return s;
}

double surrogate_objective(const PowerVector& powers, const SurrogateState& state,
                           const ChannelRealization& realization)
{
    double total = 0.0;
    for (int i = 0; i < realization.cells(); ++i) {
        if (!(state.t(i) > 0.0)) {
            throw DomainError("surrogate_objective: t must be > 0");
        }
        const double interference = interference_plus_noise(powers, realization, i);
        const double received = interference + powers[i] * realization.rho(i, i);
        total += std::log2(received) + (-state.t(i) * interference + std::log(state.t(i)) + 1.0) * kInvLn2;
    }
    return total;
}

ConcaveModel surrogate_model(const SurrogateState& state, const ChannelRealization& realization)
{
    const Eigen::MatrixXd rho = realization.rho;
    const Eigen::VectorXd sigma = realization.sigma_c2;
    const Eigen::VectorXd t = state.t;
    const Eigen::Index n = rho.rows();

    ConcaveModel m;
    m.value = [rho, sigma, t, n](const Eigen::VectorXd& p) {
        const Eigen::VectorXd received = rho.transpose() * p + sigma;
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(received(i) > 0.0)) {
                return -std::numeric_limits<double>::infinity();
            }
            const double interference = received(i) - p(i) * rho(i, i);
            total += std::log2(received(i)) + (-t(i) * interference + std::log(t(i)) + 1.0) * kInvLn2;
        }
        return total;
    };
    m.gradient = [rho, sigma, t, n](const Eigen::VectorXd& p) {
        const Eigen::VectorXd received = rho.transpose() * p + sigma;
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index l = 0; l < n; ++l) {
                grad(l) += rho(l, i) / received(i) * kInvLn2;
                if (l != i) {
                    grad(l) -= t(i) * rho(l, i) * kInvLn2;
                }
            }
        }
        return grad;
    };
    m.hessian = [rho, sigma](const Eigen::VectorXd& p) {
        const Eigen::VectorXd received = rho.transpose() * p + sigma;
        const Eigen::VectorXd weight = received.cwiseAbs2().cwiseInverse() * kInvLn2;
        const Eigen::MatrixXd h = -(rho * weight.asDiagonal() * rho.transpose());
        return h;
    };
    return m;
}

LinearConstraintSet build_constraints(const ScenarioConfig& config, const ChannelRealization& realization)
{
    config.validate();
    realization.validate();
    if (realization.cells() != config.cells) {
        throw DomainError("build_constraints: realization size differs from L");
    }
    const int n = config.cells;
    const double delta = detection_threshold(n, config.pfa_target);

    LinearConstraintSet c;
    c.budget = config.power_budget();
    c.rho = realization.rho;
    c.g = realization.g;
    c.sigma_c2 = realization.sigma_c2;
    c.sigma_s2 = realization.sigma_s2;
    c.zeta_c.resize(n);
    c.zeta_s.resize(n);
    for (int i = 0; i < n; ++i) {
        c.zeta_c(i) = rate_to_sinr_threshold(config.rate_thresholds[i]);
        c.zeta_s(i) = pod_to_snr_threshold(config.pod_thresholds[i], n, delta, config.samples);
    }
    return c;
}

SubproblemSolution solve_subproblem(const SurrogateState& state, const LinearConstraintSet& constraints,
                                    const ChannelRealization& realization,
                                    const std::optional<PowerVector>& warm_start)
{
    const LinearInequalities rows = constraints.rows();
    const ConcaveModel model = surrogate_model(state, realization);

    Eigen::VectorXd x0;
    if (warm_start && warm_start->size() == constraints.cells() &&
        (rows.slacks(warm_start->values()).array() > 0.0).all()) {
        x0 = warm_start->values();
    } else {
        const int n = constraints.cells();
        const MinSlackResult center =
            maximize_min_slack(rows, Eigen::VectorXd::Constant(n, constraints.budget / (n + 1)));
        if (center.min_slack < -kSlackTolerance) {
            throw InfeasibleError("joint", "solve_subproblem: constraint set is empty");
        }
        if (!(center.min_slack > 0.0)) {
            // Feasible set without interior: the max-min-slack point is the only candidate.
            SubproblemSolution degenerate{PowerVector(center.x.cwiseMax(0.0)), 0.0,
                                          std::numeric_limits<double>::infinity(), center.newton_steps};
            degenerate.objective = model.value(degenerate.powers.values());
            return degenerate;
        }
        x0 = center.x;
    }

    const BarrierResult r = maximize_concave(model, rows, x0);
    SubproblemSolution out{PowerVector(r.x.cwiseMax(0.0)), r.objective, r.kkt_residual, r.newton_steps};
    return out;
}

AllocationResult evaluate_allocation(const PowerVector& powers, const ScenarioConfig& config,
                                     const ChannelRealization& realization)
{
    AllocationResult out;
    out.powers = powers;
    for (int i = 0; i < config.cells; ++i) {
        out.per_user_rate.push_back(user_rate(powers, realization, i));
        out.sum_rate += out.per_user_rate.back();
    }
    const double delta = detection_threshold(config.cells, config.pfa_target);
    for (int i = 0; i < config.cells; ++i) {
        const Eigen::VectorXd column = realization.g.col(i);
        out.per_target_pod.push_back(pod_closed_form(powers, std::span<const double>(column.data(), column.size()),
                                                     realization.sigma_s2(i), config.samples, delta));
    }
    out.feasible = feasibility_check(build_constraints(config, realization), powers).feasible;
    return out;
}

std::optional<PowerVector> sample_feasible_point(const LinearConstraintSet& constraints, RandomStream& stream,
                                                 int max_attempts)
{
    const int n = constraints.cells();
    const LinearInequalities rows = constraints.rows();
    Eigen::VectorXd direction(n);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        for (int l = 0; l < n; ++l) {
            direction(l) = stream.exponential(1.0);
        }
        const double scale = stream.uniform_open_closed() * constraints.budget / direction.sum();
        const Eigen::VectorXd p = direction * scale;
        if ((rows.slacks(p).array() >= 0.0).all()) {
            return PowerVector(p);
        }
    }
    return std::nullopt;
}

AllocationResult optimize_ppa(const ScenarioConfig& config, const ChannelRealization& realization,
                              const PpaOptions& options)
{
    const LinearConstraintSet constraints = build_constraints(config, realization);
    const FeasibilityReport region = feasibility_check(constraints);
    if (!region.feasible) {
        throw InfeasibleError(region.violated, "no power allocation satisfies the " + region.violated +
                                                   " constraints");
    }

    const LinearInequalities rows = constraints.rows();
    auto interior = [&](const PowerVector& p) { return (rows.slacks(p.values()).array() > 0.0).all(); };

    std::vector<PowerVector> starts;
    const PowerVector equal = PowerVector::equal(config.cells, constraints.budget);
    if (interior(equal)) {
        starts.push_back(equal);
    }
    const int random_starts = options.random_starts.value_or(config.multistart);
    for (int k = 0; k < random_starts; ++k) {
        RandomStream stream = RandomStream::substream(config.rpa_seed, static_cast<std::uint64_t>(k));
        if (auto p = sample_feasible_point(constraints, stream, kRpaAttempts); p && interior(*p)) {
            starts.push_back(*p);
        }
    }
    for (const auto& p : options.extra_starts) {
        if (p.size() == config.cells && interior(p)) {
            starts.push_back(p);
        }
    }
    if (starts.empty()) {
        starts.push_back(*region.witness);
    }

    std::vector<Branch> branches(starts.size());
    auto run = [&](std::size_t k) {
        branches[k] = run_branch(starts[k], constraints, realization, options.tol, options.max_outer);
    };
    const auto workers = static_cast<std::size_t>(std::max(1, options.threads));
    if (workers == 1 || starts.size() == 1) {
        for (std::size_t k = 0; k < starts.size(); ++k) run(k);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(workers, starts.size()); ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t k = w; k < starts.size(); k += workers) run(k);
            });
        }
        for (auto& th : pool) th.join();
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < branches.size(); ++k) {
        if (branches[k].sum_rate > branches[best].sum_rate) {
            best = k;
        }
    }

    AllocationResult out = evaluate_allocation(branches[best].powers, config, realization);
    out.outer_iterations = branches[best].iterations;
    out.objective_trace = branches[best].trace;
    out.kkt_residual = branches[best].kkt_residual;
    out.start_index = static_cast<int>(best);
    return out;
}

AllocationResult epa(const ScenarioConfig& config, const ChannelRealization& realization)
{
    return evaluate_allocation(PowerVector::equal(config.cells, config.power_budget()), config, realization);
}

AllocationResult rpa(const ScenarioConfig& config, const ChannelRealization& realization, RandomStream& stream)
{
    const LinearConstraintSet constraints = build_constraints(config, realization);
    const auto p = sample_feasible_point(constraints, stream, kRpaAttempts);
    if (!p) {
        throw InfeasibleError("sampling", "rpa: no feasible point found in 100000 draws");
    }
    return evaluate_allocation(*p, config, realization);
}

AllocationResult rpa(const ScenarioConfig& config, const ChannelRealization& realization)
{
    RandomStream stream = RandomStream::substream(config.rpa_seed, 0);
    return rpa(config, realization, stream);
}

}  // namespace comp_isac
