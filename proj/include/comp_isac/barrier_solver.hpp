#pragma once

/**
 * @file barrier_solver.hpp
 * @brief Small dense log-barrier interior-point method for
 *        max f(x) s.t. A x <= b with f smooth and concave.
 */

#include <functional>

#include <Eigen/Dense>

namespace comp_isac {

/// Rows of A x <= b.
struct LinearInequalities {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;

    Eigen::VectorXd slacks(const Eigen::VectorXd& x) const { return b - A * x; }
};

/// Value, gradient and Hessian of a concave objective at x.
struct ConcaveModel {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

struct BarrierOptions {
    double mu_initial = 1.0;
    double mu_final = 1e-9;
    double mu_factor = 10.0;
    int max_newton_steps = 500;  ///< summed over all barrier stages
};

struct BarrierResult {
    Eigen::VectorXd x;
    double objective = 0.0;
    /// max of ||grad f - A^T lambda||_inf and max_k lambda_k s_k with lambda = mu / s
    double kkt_residual = 0.0;
    int newton_steps = 0;
};

/**
 * @brief Follow the central path from a strictly feasible x0.
 *
 * Each stage minimizes -f(x) - mu sum log(b - A x) by damped Newton with
 * backtracking, then mu is divided by mu_factor until it reaches mu_final.
 * Throws DomainError if x0 is not strictly feasible and NumericalError when
 * the Newton budget runs out.
 */
BarrierResult maximize_concave(const ConcaveModel& model, const LinearInequalities& rows,
                               const Eigen::VectorXd& x0, const BarrierOptions& options = {});

struct MinSlackResult {
    Eigen::VectorXd x;
    double min_slack = 0.0;  ///< in units of row-normalized slack
    int newton_steps = 0;
};

/**
 * @brief Maximize the smallest normalized slack min_k (b_k - a_k x) / ||a_k||.
 *
 * Solved as an LP in (x, s) by the same barrier method. The polytope must be
 * bounded. A negative optimum means the rows have no common solution.
 */
MinSlackResult maximize_min_slack(const LinearInequalities& rows, const Eigen::VectorXd& x0,
                                  double mu_final = 1e-13);

}  // namespace comp_isac
