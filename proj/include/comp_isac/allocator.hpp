#pragma once

/**
 * @file allocator.hpp
 * @brief Sum-rate maximizing power allocation under rate, detection and
 *        budget constraints, plus the equal/random baselines.
 *
 * The rate and detection requirements are mapped to linear rows in P (SINR
 * and received sensing SNR thresholds). The objective
 *   sum_i log2(S_i(P)) - log2(I_i(P)),  S_i = sum_l P_l rho_li + sigma_i^2,
 *                                        I_i = S_i - P_i rho_ii,
 * is handled by replacing -ln I_i with max_{t>0} (-t I_i + ln t + 1): for
 * fixed t the surrogate is concave and is maximized over the polytope by a
 * barrier method, then t is refreshed in closed form (t_i = 1 / I_i).
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "comp_isac/barrier_solver.hpp"
#include "comp_isac/channel.hpp"
#include "comp_isac/power.hpp"

namespace comp_isac {

enum class RowFamily { positivity, budget, sinr, sensing };

std::string to_string(RowFamily family);

/**
 * @brief Budget, per-user SINR and per-target sensing-SNR rows.
 *
 * SINR row i:    P_i rho_ii - zeta_c_i sum_{l != i} P_l rho_li >= zeta_c_i sigma_c_i^2
 * Sensing row i: sum_l P_l g_li >= zeta_s_i sigma_s_i^2
 * Rows with a zero threshold are vacuous and left out of the barrier.
 */
struct LinearConstraintSet {
    double budget = 0.0;
    Eigen::VectorXd zeta_c;  ///< per user, linear SINR thresholds
    Eigen::VectorXd zeta_s;  ///< per target, sensing SNR thresholds
    Eigen::MatrixXd rho;
    Eigen::MatrixXd g;
    Eigen::VectorXd sigma_c2;
    Eigen::VectorXd sigma_s2;

    int cells() const { return static_cast<int>(rho.rows()); }

    /// A P <= b form with one label per row. Families can be filtered.
    LinearInequalities rows(std::vector<RowFamily>* labels = nullptr, bool with_sinr = true,
                            bool with_sensing = true) const;

    /// Slacks in natural units (>= 0 means satisfied), same row order as rows().
    Eigen::VectorXd slacks(const PowerVector& powers, std::vector<RowFamily>* labels = nullptr) const;
};

struct FeasibilityReport {
    bool feasible = false;
    double min_slack = 0.0;         ///< natural units with P, normalized without
    Eigen::VectorXd slacks;         ///< only when P was supplied
    std::vector<RowFamily> labels;  ///< row family for each slack
    std::optional<PowerVector> witness;  ///< max-min-slack point when P was not supplied
    std::string violated;           ///< family blamed for infeasibility, empty when feasible
};

/// With P: per-row slacks. Without: decide nonemptiness by a max-min-slack barrier solve.
FeasibilityReport feasibility_check(const LinearConstraintSet& constraints,
                                    const std::optional<PowerVector>& powers = std::nullopt);

struct SurrogateState {
    Eigen::VectorXd t;  ///< t_i > 0
};

struct AllocationResult {
    PowerVector powers;
    std::vector<double> per_user_rate;
    double sum_rate = 0.0;
    std::vector<double> per_target_pod;
    bool feasible = false;
    int outer_iterations = 0;
    std::vector<double> objective_trace;
    double kkt_residual = 0.0;
    int start_index = -1;  ///< winning multi-start branch (PPA only)
};

struct SubproblemSolution {
    PowerVector powers;
    double objective = 0.0;
    double kkt_residual = 0.0;
    int newton_steps = 0;
};

struct PpaOptions {
    double tol = 1e-6;
    int max_outer = 100;
    std::optional<int> random_starts;  ///< defaults to ScenarioConfig::multistart
    int threads = 1;
    std::vector<PowerVector> extra_starts;  ///< tried after EPA and the random starts
};

double user_rate(const PowerVector& powers, const ChannelRealization& realization, int user);
double sum_rate(const PowerVector& powers, const ChannelRealization& realization);

/// zeta_c = 2^R - 1.
double rate_to_sinr_threshold(double rate_threshold);

/**
 * @brief Sensing SNR zeta_s with pod_closed_form >= xi iff sum_l P_l g_li / sigma^2 >= zeta_s.
 *
 * Zero when xi is already met at zero power (xi <= PFA).
 */
double pod_to_snr_threshold(double xi, int cells, double delta, int samples);

/// t_i = 1 / (sum_{l != i} P_l rho_li + sigma_c_i^2).
double t_update(const PowerVector& powers, const ChannelRealization& realization, int user);
SurrogateState t_update(const PowerVector& powers, const ChannelRealization& realization);

/// Concave-in-P lower bound on sum_rate(P), tight at t = t_update(P).
double surrogate_objective(const PowerVector& powers, const SurrogateState& state,
                           const ChannelRealization& realization);

/// Surrogate value, gradient and Hessian as a barrier model.
ConcaveModel surrogate_model(const SurrogateState& state, const ChannelRealization& realization);

/// Thresholds for the scenario mapped onto linear rows for this realization.
LinearConstraintSet build_constraints(const ScenarioConfig& config, const ChannelRealization& realization);

/**
 * @brief Maximize the surrogate over the constraint polytope.
 *
 * Uses warm_start when it is strictly interior, otherwise the max-min-slack
 * point. Throws InfeasibleError if the polytope is empty and NumericalError
 * if the Newton budget is exceeded.
 */
SubproblemSolution solve_subproblem(const SurrogateState& state, const LinearConstraintSet& constraints,
                                    const ChannelRealization& realization,
                                    const std::optional<PowerVector>& warm_start = std::nullopt);

/// Fill rates, PoDs and the feasibility flag for a given allocation.
AllocationResult evaluate_allocation(const PowerVector& powers, const ScenarioConfig& config,
                                     const ChannelRealization& realization);

/**
 * @brief Alternating t-update / subproblem ascent with multi-start.
 *
 * Starts are EPA (if feasible) followed by random feasible points from
 * substreams (rpa_seed, k), so start 1 coincides with the RPA baseline.
 * Iterates until the true sum rate improves by less than tol. The branch
 * with the largest sum rate wins, ties going to the lowest start index.
 * Throws InfeasibleError naming the violated family when no feasible point exists.
 */
AllocationResult optimize_ppa(const ScenarioConfig& config, const ChannelRealization& realization,
                              const PpaOptions& options = {});

/// P_l = P_th / L; infeasibility is flagged, not thrown.
AllocationResult epa(const ScenarioConfig& config, const ChannelRealization& realization);

/// Random feasible point: uniform direction on the simplex scaled by u P_th with u ~ U(0, 1].
std::optional<PowerVector> sample_feasible_point(const LinearConstraintSet& constraints,
                                                 RandomStream& stream, int max_attempts);

/// Random feasible baseline; throws InfeasibleError("sampling") after 1e5 rejections.
AllocationResult rpa(const ScenarioConfig& config, const ChannelRealization& realization,
                     RandomStream& stream);

/// rpa() on substream (config.rpa_seed, 0).
AllocationResult rpa(const ScenarioConfig& config, const ChannelRealization& realization);

}  // namespace comp_isac
