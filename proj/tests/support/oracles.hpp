#pragma once

// Reference implementations used only by the tests. They deliberately take
// different numerical routes from the library code.

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

// Q_L(a, b) as the tail integral of the noncentral chi density,
//   int_b^inf x (x/a)^{L-1} exp(-(x^2 + a^2)/2) I_{L-1}(a x) dx,
// with the Bessel factor scaled by exp(-a x) to keep the integrand finite.
inline double marcum_q_quadrature(int order, double a, double b)
{
    auto integrand = [&](double x) -> double {
        if (x <= 0.0 || (x - a) * (x - a) > 1400.0) return 0.0;
        if (a == 0.0) {
            // I_{L-1}(ax) (x/a)^{L-1} -> x^{2(L-1)} / (2^{L-1} (L-1)!)
            return x * std::pow(x * x / 2.0, order - 1) / std::tgamma(order) * std::exp(-x * x / 2.0);
        }
        const double scaled_bessel = std::cyl_bessel_i(static_cast<double>(order - 1), a * x) * std::exp(-a * x);
        return x * std::pow(x / a, order - 1) * std::exp(-(x - a) * (x - a) / 2.0) * scaled_bessel;
    };
    // Split at a generous point past the bulk so both pieces are smooth.
    const double split = std::max(b, a) + 12.0;
    boost::math::quadrature::tanh_sinh<double> finite;
    boost::math::quadrature::exp_sinh<double> tail;
    double head = 0.0;
    if (split > b) head = finite.integrate(integrand, b, split, 1e-13);
    const double rest = tail.integrate([&](double t) { return integrand(split + t); }, 0.0,
                                       std::numeric_limits<double>::infinity(), 1e-13);
    return head + rest;
}

// exp(-x) sum_{k<L} x^k/k!, summed naively from k = 0.
inline double upper_gamma_sum(int order, double x)
{
    double term = 1.0;
    double sum = 0.0;
    for (int k = 0; k < order; ++k) {
        if (k > 0) term *= x / k;
        sum += term;
    }
    return std::exp(-x) * sum;
}

// Plain bisection for the finite-sum inverse on [0, hi].
inline double inv_upper_gamma_bisect(int order, double p)
{
    double lo = 0.0;
    double hi = 1.0;
    while (upper_gamma_sum(order, hi) > p) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (upper_gamma_sum(order, mid) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// y^H X (X^H X)^{-1} X^H y / sigma^2 by explicit 2x2 inversion.
inline double glrt_two_column(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& X, double sigma2)
{
    const std::complex<double> g00 = X.col(0).squaredNorm();
    const std::complex<double> g11 = X.col(1).squaredNorm();
    const std::complex<double> g01 = X.col(0).dot(X.col(1));  // conj(x0) . x1
    const std::complex<double> g10 = std::conj(g01);
    const std::complex<double> det = g00 * g11 - g01 * g10;
    const std::complex<double> u0 = X.col(0).dot(y);
    const std::complex<double> u1 = X.col(1).dot(y);
    // v = G^{-1} u ; result = u^H v
    const std::complex<double> v0 = (g11 * u0 - g01 * u1) / det;
    const std::complex<double> v1 = (-g10 * u0 + g00 * u1) / det;
    return std::real(std::conj(u0) * v0 + std::conj(u1) * v1) / sigma2;
}

// Kolmogorov-Smirnov D statistic of a sample against a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf cdf)
{
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        const double f = cdf(sample[k]);
        d = std::max({d, (k + 1) / n - f, f - k / n});
    }
    return d;
}

// Asymptotic 1% critical value.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace oracle
