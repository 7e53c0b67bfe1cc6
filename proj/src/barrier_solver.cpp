#include "comp_isac/barrier_solver.hpp"

#include <cmath>
#include <limits>

#include "comp_isac/errors.hpp"

namespace comp_isac {

namespace {

struct Stage {
    double mu;
    bool final;
};

// Barrier merit -f(x) - mu sum log s; +inf outside the domain.
double merit(const ConcaveModel& model, const LinearInequalities& rows, const Eigen::VectorXd& x, double mu)
{
    const Eigen::VectorXd s = rows.slacks(x);
    if ((s.array() <= 0.0).any()) {
        return std::numeric_limits<double>::infinity();
    }
    const double f = model.value(x);
    if (!std::isfinite(f)) {
        return std::numeric_limits<double>::infinity();
    }
    return -f - mu * s.array().log().sum();
}

}  // namespace

BarrierResult maximize_concave(const ConcaveModel& model, const LinearInequalities& rows,
                               const Eigen::VectorXd& x0, const BarrierOptions& options)
{
    if ((rows.slacks(x0).array() <= 0.0).any()) {
        throw DomainError("maximize_concave: starting point is not strictly feasible");
    }

    Eigen::VectorXd x = x0;
    int steps = 0;
    double mu = options.mu_initial;
    double stationarity = 0.0;

    while (true) {
        const bool final_stage = mu <= options.mu_final * (1.0 + 1e-12);
        const double decrement_tol = final_stage ? 1e-22 : 1e-10;
        const double gradient_tol = final_stage ? 1e-10 : 0.0;

        double current = merit(model, rows, x, mu);
        while (true) {
            const Eigen::VectorXd s = rows.slacks(x);
            const Eigen::VectorXd inv_s = s.cwiseInverse();
            const Eigen::VectorXd grad = -model.gradient(x) + mu * rows.A.transpose() * inv_s;
            stationarity = grad.lpNorm<Eigen::Infinity>();
            if (stationarity <= gradient_tol) {
                break;
            }
            const Eigen::MatrixXd hess =
                -model.hessian(x) + mu * rows.A.transpose() * inv_s.cwiseAbs2().asDiagonal() * rows.A;
            const Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
            Eigen::VectorXd step = ldlt.solve(-grad);
            if (!step.allFinite()) {
                throw NumericalError("maximize_concave: singular Newton system");
            }
            const double decrement = -grad.dot(step);
            if (!(decrement > decrement_tol)) {
                break;
            }
            if (++steps > options.max_newton_steps) {
                throw NumericalError("maximize_concave: Newton step budget exhausted");
            }

            // Largest step keeping every slack positive, then Armijo backtracking.
            const Eigen::VectorXd ds = rows.A * step;
            double alpha = 1.0;
            for (Eigen::Index k = 0; k < ds.size(); ++k) {
                if (ds(k) > 0.0) {
                    alpha = std::min(alpha, 0.99 * s(k) / ds(k));
                }
            }
            const double full = alpha;
            double trial = merit(model, rows, x + alpha * step, mu);
            while (trial > current - 0.25 * alpha * decrement && alpha > 1e-20) {
                alpha *= 0.5;
                trial = merit(model, rows, x + alpha * step, mu);
            }
            if (!(trial < current)) {
                // Merit is flat to rounding: accept on residual decrease instead.
                if (decrement > 1e-12 * (1.0 + std::abs(current))) {
                    break;
                }
                const Eigen::VectorXd candidate = x + full * step;
                const Eigen::VectorXd cs = rows.slacks(candidate);
                if ((cs.array() <= 0.0).any()) {
                    break;
                }
                const Eigen::VectorXd cg = -model.gradient(candidate) + mu * rows.A.transpose() * cs.cwiseInverse();
                if (!(cg.lpNorm<Eigen::Infinity>() < 0.5 * stationarity)) {
                    break;
                }
                alpha = full;
                trial = merit(model, rows, candidate, mu);
            }
            const Eigen::VectorXd next = x + alpha * step;
            if ((next - x).lpNorm<Eigen::Infinity>() <= 1e-17 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
                x = next;
                break;
            }
            x = next;
            current = trial;
        }

        if (final_stage) {
            break;
        }
        mu = std::max(mu / options.mu_factor, options.mu_final);
    }

    BarrierResult out;
    out.x = x;
    out.objective = model.value(x);
    out.newton_steps = steps;
    // lambda_k s_k == mu by construction.
    out.kkt_residual = std::max(stationarity, mu);
    return out;
}

MinSlackResult maximize_min_slack(const LinearInequalities& rows, const Eigen::VectorXd& x0, double mu_final)
{
    const Eigen::Index n = rows.A.cols();
    const Eigen::Index m = rows.A.rows();

    // Normalized rows [a_k / |a_k|, 1] (x, s) <= b_k / |a_k|; all-zero rows keep their raw form.
    LinearInequalities lifted;
    lifted.A.resize(m, n + 1);
    lifted.b.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const double norm = rows.A.row(k).norm();
        const double scale = norm > 0.0 ? 1.0 / norm : 1.0;
        lifted.A.row(k).head(n) = rows.A.row(k) * scale;
        lifted.A(k, n) = 1.0;
        lifted.b(k) = rows.b(k) * scale;
    }

    Eigen::VectorXd z(n + 1);
    z.head(n) = x0;
    z(n) = (lifted.b - lifted.A.leftCols(n) * x0).minCoeff() - 1.0;

    ConcaveModel linear;
    linear.value = [n](const Eigen::VectorXd& v) { return v(n); };
    linear.gradient = [n](const Eigen::VectorXd&) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n + 1);
        g(n) = 1.0;
        return g;
    };
    linear.hessian = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n + 1, n + 1); };

    BarrierOptions options;
    options.mu_final = mu_final;
    options.max_newton_steps = 1000;
    const BarrierResult r = maximize_concave(linear, lifted, z, options);

    MinSlackResult out;
    out.x = r.x.head(n);
    // Report the attained minimum slack of x itself, not the auxiliary variable.
    out.min_slack = (lifted.b - lifted.A.leftCols(n) * out.x).minCoeff();
    out.newton_steps = r.newton_steps;
    return out;
}

}  // namespace comp_isac
