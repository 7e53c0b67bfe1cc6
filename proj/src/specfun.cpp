#include "comp_isac/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "comp_isac/errors.hpp"

namespace comp_isac::specfun {

namespace {

constexpr double kTailTolerance = 1e-14;

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

void require_order(int order, const char* fn)
{
    if (order < 1) {
        throw DomainError(std::string(fn) + ": order must be >= 1, got " + std::to_string(order));
    }
}

// log of x^n e^{-x} / n!, the Poisson(x) mass at n.
double log_poisson_term(int n, double x)
{
    return -x + n * std::log(x) - ln_gamma(n + 1.0);
}

}  // namespace

double ln_gamma(double x)
{
    if (!(x > 0.0)) {
        throw DomainError("ln_gamma: argument must be positive");
    }
    if (std::isinf(x)) {
        return x;
    }
    // Lanczos-type series (g = 671/128, 14 terms); relative error near 1e-15.
    static constexpr std::array<double, 14> kCoef = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
        -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
        .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};

    // Below 1/2: Gamma(x) = Gamma(x+1)/x.
    if (x < 0.5) {
        return ln_gamma(x + 1.0) - std::log(x);
    }
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : kCoef) {
        ser += c / ++y;
    }
    return tmp + std::log(2.5066282746310005 * ser / x);
}

double upper_gamma_regularized(int order, double x)
{
    require_order(order, "upper_gamma_regularized");
    if (!(x >= 0.0)) {
        throw DomainError("upper_gamma_regularized: x must be >= 0");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (x < order) {
        // Complement: 1 - sum_{k >= order} of the Poisson(x) masses.
        const double log_first = log_poisson_term(order, x);
        if (log_first < -745.0) {
            return 1.0;
        }
        double term = std::exp(log_first);
        double lower = term;
        for (int k = order + 1; term > lower * eps * 0.1; ++k) {
            term *= x / k;
            lower += term;
        }
        return clamp_probability(1.0 - lower);
    }

    // Direct finite sum, largest term first; ratios k/x < 1 all the way down.
    double term = std::exp(log_poisson_term(order - 1, x));
    double sum = term;
    for (int k = order - 1; k >= 1; --k) {
        term *= k / x;
        sum += term;
        if (term < sum * eps * 0.1) {
            break;
        }
    }
    return clamp_probability(sum);
}

double inv_upper_gamma_regularized(int order, double p)
{
    require_order(order, "inv_upper_gamma_regularized");
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("inv_upper_gamma_regularized: p must lie in (0, 1)");
    }

    // Bracket: Q(lo) > p >= Q(hi).
    double lo = 0.0;
    double hi = static_cast<double>(order);
    while (upper_gamma_regularized(order, hi) > p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) {
            throw NumericalError("inv_upper_gamma_regularized: bracketing failed");
        }
    }

    // Newton on ln Q(x) - ln p, falling back to bisection outside the bracket.
    const double log_p = std::log(p);
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 300; ++iter) {
        const double q = upper_gamma_regularized(order, x);
        if (q > p) {
            lo = x;
        } else {
            hi = x;
        }
        if (q == p) {
            return x;
        }

        double next = 0.5 * (lo + hi);
        if (q > 0.0) {
            const double density = std::exp(log_poisson_term(order - 1, x));
            if (density > 0.0) {
                const double candidate = x + (std::log(q) - log_p) * q / density;
                if (candidate > lo && candidate < hi) {
                    next = candidate;
                }
            }
        }
        if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x) ||
            hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) {
            return next;
        }
        x = next;
    }
    throw NumericalError("inv_upper_gamma_regularized: no convergence");
}

double marcum_q(int order, double a, double b)
{
    require_order(order, "marcum_q");
    if (!(a >= 0.0) || !(b >= 0.0)) {
        throw DomainError("marcum_q: a and b must be >= 0");
    }
    if (b == 0.0) {
        return 1.0;
    }
    const double x = 0.5 * b * b;
    const double lambda = 0.5 * a * a;
    if (lambda == 0.0) {
        return upper_gamma_regularized(order, x);
    }
    if (std::isinf(x)) {
        return 0.0;
    }

    const double max_terms = 10.0 * lambda + 200.0;
    const auto mode = static_cast<int>(std::floor(lambda));
    const double mode_weight = std::exp(log_poisson_term(mode, lambda));

    // Forward from the mode: Q_{n+1}(x) = Q_n(x) + x^n e^{-x} / n!.
    int n = order + mode;
    double q = upper_gamma_regularized(n, x);
    double increment = std::exp(log_poisson_term(n, x));
    double weight = mode_weight;
    double sum = weight * q;
    int terms = 1;
    for (int k = mode;;) {
        q += increment;
        ++n;
        increment *= x / n;
        ++k;
        weight *= lambda / k;
        sum += weight * q;
        ++terms;

        const double ratio = lambda / (k + 1);
        if (ratio < 1.0 && weight * ratio / (1.0 - ratio) < kTailTolerance) {
            break;
        }
        if (terms > max_terms) {
            throw NumericalError("marcum_q: series exceeded term cap");
        }
    }

    // Backward from the mode, each order evaluated directly.
    weight = mode_weight;
    for (int k = mode; k > 0;) {
        weight *= k / lambda;
        --k;
        sum += weight * upper_gamma_regularized(order + k, x);
        ++terms;

        const double ratio = k / lambda;
        if (ratio < 1.0 && weight * ratio / (1.0 - ratio) < kTailTolerance) {
            break;
        }
        if (terms > max_terms) {
            throw NumericalError("marcum_q: series exceeded term cap");
        }
    }
    return clamp_probability(sum);
}

double inv_marcum_q_a(int order, double b, double p)
{
    require_order(order, "inv_marcum_q_a");
    if (!(b >= 0.0)) {
        throw DomainError("inv_marcum_q_a: b must be >= 0");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("inv_marcum_q_a: p must lie in (0, 1)");
    }
    const double at_zero = marcum_q(order, 0.0, b);
    if (p <= at_zero) {
        throw InfeasibleError("sensing", "inv_marcum_q_a: target already met at zero noncentrality");
    }

    double lo = 0.0;
    double hi = std::max(1.0, b);
    while (marcum_q(order, hi, b) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) {
            throw NumericalError("inv_marcum_q_a: bracketing failed");
        }
    }

    // Newton with dQ_L/da = a (Q_{L+1} - Q_L), bisection as safeguard.
    double a = 0.5 * (lo + hi);
    for (int iter = 0; iter < 300; ++iter) {
        const double q = marcum_q(order, a, b);
        const double residual = q - p;
        if (residual < 0.0) {
            lo = a;
        } else {
            hi = a;
        }
        if (residual == 0.0) {
            return a;
        }

        double next = 0.5 * (lo + hi);
        const double slope = a * (marcum_q(order + 1, a, b) - q);
        if (slope > 0.0) {
            const double candidate = a - residual / slope;
            if (candidate > lo && candidate < hi) {
                next = candidate;
            }
        }
        if (std::abs(next - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, a) ||
            hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) {
            return next;
        }
        a = next;
    }
    throw NumericalError("inv_marcum_q_a: no convergence");
}

}  // namespace comp_isac::specfun
