#include "comp_isac/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "comp_isac/errors.hpp"
#include "comp_isac/specfun.hpp"

namespace comp_isac {

namespace {

Eigen::MatrixXcd unit_symbols(int cells, int samples, Modulation modulation, RandomStream& stream)
{
    Eigen::MatrixXcd u(samples, cells);
    if (modulation == Modulation::qpsk) {
        constexpr double a = std::numbers::sqrt2 / 2.0;
        std::uint64_t word = 0;
        int left = 0;
        for (int l = 0; l < cells; ++l) {
            for (int n = 0; n < samples; ++n) {
                if (left == 0) {
                    word = stream.bits();
                    left = 32;
                }
                const double re = (word & 1U) ? -a : a;
                const double im = (word & 2U) ? -a : a;
                word >>= 2;
                --left;
                u(n, l) = {re, im};
            }
        }
    } else {
        constexpr double s = std::numbers::sqrt2 / 2.0;
        for (int l = 0; l < cells; ++l) {
            for (int n = 0; n < samples; ++n) {
                const double re = stream.normal();
                const double im = stream.normal();
                u(n, l) = {s * re, s * im};
            }
        }
    }
    return u;
}

Eigen::VectorXcd complex_noise(int samples, double sigma2, RandomStream& stream)
{
    const double s = std::sqrt(0.5 * sigma2);
    Eigen::VectorXcd n(samples);
    for (int k = 0; k < samples; ++k) {
        const double re = stream.normal();
        const double im = stream.normal();
        n(k) = {s * re, s * im};
    }
    return n;
}

Eigen::MatrixXcd scale_columns(Eigen::MatrixXcd u, const PowerVector& powers)
{
    for (int l = 0; l < powers.size(); ++l) {
        u.col(l) *= std::sqrt(powers[l]);
    }
    return u;
}

double binomial_stderr(double p, std::uint64_t trials)
{
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace

SymbolBlock generate_symbols(const PowerVector& powers, int samples, Modulation modulation,
                             RandomStream& stream)
{
    if (samples < powers.size()) {
        throw DomainError("generate_symbols: need N >= L");
    }
    return {scale_columns(unit_symbols(powers.size(), samples, modulation, stream), powers), modulation};
}

ColumnSpaceProjector::ColumnSpaceProjector(const Eigen::MatrixXcd& basis)
    : qr_(basis), rank_(basis.cols())
{
    if (basis.rows() < basis.cols() || basis.cols() == 0) {
        throw NumericalError("ColumnSpaceProjector: need a tall matrix with at least one column");
    }
    const Eigen::MatrixXcd r = qr_.matrixQR().topRows(rank_).triangularView<Eigen::Upper>();
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(r).singularValues();
    const double largest = sv(0);
    const double smallest = sv(sv.size() - 1);
    if (!(smallest >= static_cast<double>(basis.rows()) * std::numeric_limits<double>::epsilon() * largest) ||
        largest == 0.0) {
        throw NumericalError("rank-deficient symbol block (smallest singular value " +
                             std::to_string(smallest) + ")");
    }
}

double ColumnSpaceProjector::projected_energy(const Eigen::VectorXcd& y) const
{
    const Eigen::VectorXcd rotated = qr_.householderQ().adjoint() * y;
    return rotated.head(rank_).squaredNorm();
}

double glrt_statistic(const Eigen::VectorXcd& y, const SymbolBlock& block, double sigma_s2)
{
    if (y.size() != block.X.rows()) {
        throw DomainError("glrt_statistic: observation length differs from N");
    }
    if (!(sigma_s2 > 0.0)) {
        throw DomainError("glrt_statistic: noise power must be > 0");
    }
    return ColumnSpaceProjector(block.X).projected_energy(y) / sigma_s2;
}

double detection_threshold(int cells, double pfa_target)
{
    return specfun::inv_upper_gamma_regularized(cells, pfa_target);
}

DetectionSetup make_detection_setup(const ScenarioConfig& config, int target)
{
    if (target < 0 || target >= config.cells) {
        throw DomainError("make_detection_setup: target index out of range");
    }
    DetectionSetup s;
    s.cells = config.cells;
    s.samples = config.samples;
    s.delta = detection_threshold(config.cells, config.pfa_target);
    s.sigma_s2 = db_to_linear(config.noise_sense_db.at(target));
    return s;
}

double pod_exact(const Eigen::VectorXcd& h_s, const SymbolBlock& block, double sigma_s2, double delta)
{
    if (h_s.size() != block.X.cols()) {
        throw DomainError("pod_exact: h_s length differs from L");
    }
    if (!(sigma_s2 > 0.0) || !(delta >= 0.0)) {
        throw DomainError("pod_exact: need sigma^2 > 0 and delta >= 0");
    }
    // h^H X^H X h = ||X h||^2
    const double energy = (block.X * h_s).squaredNorm();
    return specfun::marcum_q(block.cells(), std::sqrt(2.0 * energy / sigma_s2), std::sqrt(2.0 * delta));
}

double pod_closed_form(const PowerVector& powers, std::span<const double> g_col, double sigma_s2,
                       int samples, double delta)
{
    if (static_cast<int>(g_col.size()) != powers.size()) {
        throw DomainError("pod_closed_form: gain column length differs from L");
    }
    if (!(sigma_s2 > 0.0) || !(delta >= 0.0) || samples < 1) {
        throw DomainError("pod_closed_form: need sigma^2 > 0, delta >= 0, N >= 1");
    }
    double received = 0.0;
    for (int l = 0; l < powers.size(); ++l) {
        if (g_col[l] < 0.0) {
            throw DomainError("pod_closed_form: gains must be >= 0");
        }
        received += powers[l] * g_col[l];
    }
    const double a = std::sqrt(2.0 * samples * received / sigma_s2);
    return specfun::marcum_q(powers.size(), a, std::sqrt(2.0 * delta));
}

double pod_closed_form(const PowerVector& powers, const ChannelRealization& realization, int target,
                       const DetectionSetup& setup)
{
    const Eigen::VectorXd column = realization.g.col(target);
    return pod_closed_form(powers, std::span<const double>(column.data(), column.size()), setup.sigma_s2,
                           setup.samples, setup.delta);
}

HypothesisSample draw_observation(const SymbolBlock& block, const Eigen::VectorXcd& h_s,
                                  double sigma_s2, Hypothesis truth, RandomStream& stream)
{
    HypothesisSample out;
    out.truth = truth;
    out.y = complex_noise(block.samples(), sigma_s2, stream);
    if (truth == Hypothesis::h1) {
        out.y += block.X * h_s;
    }
    return out;
}

DetectionEstimate simulate_detection(const DetectionSetup& setup, const PowerVector& powers,
                                     const ChannelRealization& realization, int target,
                                     std::uint64_t trials, std::uint64_t seed, int threads,
                                     Modulation modulation)
{
    if (trials < 1) {
        throw DomainError("simulate_detection: trials must be >= 1");
    }
    if (powers.size() != setup.cells || realization.cells() != setup.cells) {
        throw DomainError("simulate_detection: L mismatch");
    }
    if (target < 0 || target >= setup.cells) {
        throw DomainError("simulate_detection: target index out of range");
    }
    const Eigen::VectorXcd h_s = realization.g.col(target).cwiseSqrt().cast<std::complex<double>>();

    auto run_range = [&](std::uint64_t begin, std::uint64_t end, std::uint64_t& false_alarms,
                         std::uint64_t& detections) {
        for (std::uint64_t t = begin; t < end; ++t) {
            RandomStream stream = RandomStream::substream(seed, t);
            const Eigen::MatrixXcd unit = unit_symbols(setup.cells, setup.samples, modulation, stream);
            const SymbolBlock block{scale_columns(unit, powers), modulation};
            const ColumnSpaceProjector projector(unit);
            const HypothesisSample absent = draw_observation(block, h_s, setup.sigma_s2, Hypothesis::h0, stream);
            const HypothesisSample present = draw_observation(block, h_s, setup.sigma_s2, Hypothesis::h1, stream);
            if (projector.projected_energy(absent.y) / setup.sigma_s2 >= setup.delta) {
                ++false_alarms;
            }
            if (projector.projected_energy(present.y) / setup.sigma_s2 >= setup.delta) {
                ++detections;
            }
        }
    };

    const auto workers = static_cast<std::uint64_t>(std::max(1, threads));
    std::vector<std::uint64_t> fa(workers, 0);
    std::vector<std::uint64_t> det(workers, 0);
    if (workers == 1) {
        run_range(0, trials, fa[0], det[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t begin = std::min(trials, w * chunk);
            const std::uint64_t end = std::min(trials, begin + chunk);
            pool.emplace_back([&, w, begin, end] { run_range(begin, end, fa[w], det[w]); });
        }
        for (auto& th : pool) th.join();
    }

    std::uint64_t false_alarms = 0;
    std::uint64_t detections = 0;
    for (std::uint64_t w = 0; w < workers; ++w) {
        false_alarms += fa[w];
        detections += det[w];
    }
    DetectionEstimate est;
    est.trials = trials;
    est.pfa_hat = static_cast<double>(false_alarms) / static_cast<double>(trials);
    est.pod_hat = static_cast<double>(detections) / static_cast<double>(trials);
    est.pfa_stderr = binomial_stderr(est.pfa_hat, trials);
    est.pod_stderr = binomial_stderr(est.pod_hat, trials);
    return est;
}

}  // namespace comp_isac
