#pragma once

/**
 * @file specfun.hpp
 * @brief Integer-order incomplete gamma and generalized Marcum-Q functions.
 *
 * These are the tails of the central and noncentral chi-squared laws with
 * 2L degrees of freedom, which is all the detector math needs. Only integer
 * order is supported so every quantity reduces to a finite or Poisson-mixed
 * sum of elementary terms.
 */

namespace comp_isac::specfun {

/// ln Gamma(x) for x > 0. Throws DomainError otherwise.
double ln_gamma(double x);

/**
 * @brief Regularized upper incomplete gamma Gamma(order, x) / Gamma(order).
 *
 * For integer order this is exp(-x) * sum_{k<order} x^k / k!, i.e. the
 * probability that a chi-squared variable with 2*order degrees of freedom
 * exceeds 2x.
 */
double upper_gamma_regularized(int order, double x);

/// x >= 0 with upper_gamma_regularized(order, x) == p, for 0 < p < 1.
double inv_upper_gamma_regularized(int order, double p);

/**
 * @brief Generalized Marcum-Q function Q_order(a, b).
 *
 * Evaluated as the Poisson mixture
 *   sum_k e^{-a^2/2} (a^2/2)^k / k! * upper_gamma_regularized(order + k, b^2/2),
 * summed outward from the Poisson mode until the remaining weight on each side
 * is below 1e-14. Throws NumericalError if that needs more than
 * 10 * a^2/2 + 200 terms.
 */
double marcum_q(int order, double a, double b);

/**
 * @brief Noncentrality a >= 0 such that marcum_q(order, a, b) == p.
 *
 * Requires marcum_q(order, 0, b) < p < 1; throws InfeasibleError when the
 * target is already met at a = 0.
 */
double inv_marcum_q_a(int order, double b, double p);

}  // namespace comp_isac::specfun
