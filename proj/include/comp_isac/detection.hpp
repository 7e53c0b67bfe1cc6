#pragma once

/**
 * @file detection.hpp
 * @brief GLRT target detection at a BS receiving L coordinated echoes.
 *
 * Observation model over N samples: y = X h_s + n under H1 and y = n under
 * H0, with X = (sqrt(P_1) x_1, ..., sqrt(P_L) x_L). The statistic is the
 * energy of y projected onto the column space of X, normalised by the noise
 * power; under H0 twice the statistic is chi-squared with 2L degrees of
 * freedom and under H1 it is noncentral, giving Marcum-Q detection
 * probabilities.
 */

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "comp_isac/channel.hpp"
#include "comp_isac/power.hpp"
#include "comp_isac/random.hpp"

namespace comp_isac {

enum class Modulation { qpsk, gaussian };

/// N x L block of transmitted samples; column l carries power P_l.
struct SymbolBlock {
    Eigen::MatrixXcd X;
    Modulation modulation = Modulation::qpsk;

    int samples() const { return static_cast<int>(X.rows()); }
    int cells() const { return static_cast<int>(X.cols()); }
};

struct DetectionSetup {
    int cells = 1;          ///< L, detector order
    int samples = 1;        ///< N
    double delta = 0.0;     ///< GLRT threshold
    double sigma_s2 = 1.0;  ///< sensing noise power at this receiver
};

enum class Hypothesis { h0, h1 };

struct HypothesisSample {
    Eigen::VectorXcd y;
    Hypothesis truth = Hypothesis::h0;
};

struct DetectionEstimate {
    double pfa_hat = 0.0;
    double pod_hat = 0.0;
    double pfa_stderr = 0.0;
    double pod_stderr = 0.0;
    std::uint64_t trials = 0;
};

/// Unit-average-power symbols scaled by sqrt(P_l); requires N >= L.
SymbolBlock generate_symbols(const PowerVector& powers, int samples, Modulation modulation,
                             RandomStream& stream);

/**
 * @brief Householder QR of a tall N x L matrix used to project onto its column space.
 *
 * Throws NumericalError when the smallest singular value is below
 * N * eps * largest.
 */
class ColumnSpaceProjector {
public:
    explicit ColumnSpaceProjector(const Eigen::MatrixXcd& basis);

    /// ||Q_1^H y||^2 = y^H X (X^H X)^{-1} X^H y.
    double projected_energy(const Eigen::VectorXcd& y) const;

private:
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr_;
    Eigen::Index rank_;
};

double glrt_statistic(const Eigen::VectorXcd& y, const SymbolBlock& block, double sigma_s2);

/// delta with Gamma(L, delta) / Gamma(L) = pfa_target.
double detection_threshold(int cells, double pfa_target);

/// Threshold, order and noise for the detector at BS `target`.
DetectionSetup make_detection_setup(const ScenarioConfig& config, int target);

/// Detection probability given the realized symbol block (no large-N step).
double pod_exact(const Eigen::VectorXcd& h_s, const SymbolBlock& block, double sigma_s2, double delta);

/**
 * @brief Large-N detection probability, X^H X replaced by N diag(P).
 *
 * Q_L(sqrt(2 N sum_l P_l g_l / sigma^2), sqrt(2 delta)) with L = powers.size().
 */
double pod_closed_form(const PowerVector& powers, std::span<const double> g_col, double sigma_s2,
                       int samples, double delta);

/// Convenience overload reading column `target` of realization.g.
double pod_closed_form(const PowerVector& powers, const ChannelRealization& realization, int target,
                       const DetectionSetup& setup);

/**
 * @brief Draw one observation. h_s holds the (complex) two-round coefficients.
 */
HypothesisSample draw_observation(const SymbolBlock& block, const Eigen::VectorXcd& h_s,
                                  double sigma_s2, Hypothesis truth, RandomStream& stream);

/**
 * @brief Monte Carlo false-alarm and detection rates at BS `target`.
 *
 * Trial t draws symbols and both noise vectors from substream (seed, t) and
 * thresholds the statistic under H0 and H1. The detector projects onto the
 * span of the unit-power symbols, which equals the span of X whenever every
 * P_l > 0 and keeps the H0 law fixed when some BS is silent. Two-round
 * coefficients are sqrt(g(l, target)). Output does not depend on `threads`.
 */
DetectionEstimate simulate_detection(const DetectionSetup& setup, const PowerVector& powers,
                                     const ChannelRealization& realization, int target,
                                     std::uint64_t trials, std::uint64_t seed, int threads = 1,
                                     Modulation modulation = Modulation::qpsk);

}  // namespace comp_isac
