#pragma once

/**
 * @file channel.hpp
 * @brief Scenario description and network snapshots (power gains + noise).
 *
 * Matrices are indexed [transmitting BS l][receiving cell i]: rho(l, i) is the
 * communication power gain from BS l to user i, g(l, i) the two-round sensing
 * gain along B_l -> T_i -> B_i.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "comp_isac/random.hpp"

namespace comp_isac {

/// Checked probability value in [0, 1].
class Probability {
public:
    explicit Probability(double value);
    double value() const noexcept { return value_; }
    operator double() const noexcept { return value_; }

private:
    double value_;
};

enum class ChannelMode { direct, geometry };

struct GeometryParams {
    double cell_radius = 0.0;        ///< r, meters
    double pathloss_exponent = 0.0;  ///< alpha
    double rcs = 1.0;                ///< target radar cross-section factor
    double reference_gain = 1.0;     ///< gain at unit distance
    double min_distance = 1.0;       ///< distances are clamped below this
};

struct ScenarioConfig {
    int cells = 3;      ///< L
    int samples = 100;  ///< N
    double pfa_target = 1e-6;
    std::vector<double> noise_comm_db;   ///< per user
    std::vector<double> noise_sense_db;  ///< per BS
    double power_budget_db = 20.0;
    std::vector<double> rate_thresholds;  ///< bits/s/Hz per user
    std::vector<double> pod_thresholds;   ///< per target
    ChannelMode channel_mode = ChannelMode::direct;
    Eigen::MatrixXd mean_rho;  ///< direct mode mean gains
    Eigen::MatrixXd mean_g;
    bool fading = true;  ///< false: realization equals the mean (direct mode)
    std::optional<GeometryParams> geometry;
    std::uint64_t seed = 5;      ///< channel snapshot seed
    std::uint64_t rpa_seed = 2;  ///< random-allocation baseline seed
    int multistart = 8;          ///< random starts for the optimizer

    /// Throws ConfigError naming the first offending key.
    void validate() const;

    double power_budget() const;  ///< linear P_th
    std::vector<double> sigma_c2() const;
    std::vector<double> sigma_s2() const;

    /**
     * @brief Built-in scenario: N = 100, PFA 1e-6, noise 1 dB / 15 dB, rate 1 bit/s/Hz,
     * PoD 0.7, mean gain 1 on serving links and 0.1 on cross links.
     */
    static ScenarioConfig defaults(int cells = 3);
};

struct ChannelRealization {
    Eigen::MatrixXd rho;       ///< L x L, |h^c_{l,i}|^2
    Eigen::MatrixXd g;         ///< L x L, |h^s_{l,i}|^2
    Eigen::VectorXd sigma_c2;  ///< per user, linear
    Eigen::VectorXd sigma_s2;  ///< per BS, linear

    int cells() const { return static_cast<int>(rho.rows()); }
    /// Throws DomainError when shapes disagree or an entry is negative or non-finite.
    void validate() const;
};

double db_to_linear(double x_db);

/// Node placement drawn in geometry mode; kept for inspection and tests.
struct Placement {
    Eigen::MatrixX2d base_stations;
    Eigen::MatrixX2d users;
    Eigen::MatrixX2d targets;
};

/// BS centers: one cell at the origin, otherwise a regular polygon with
/// neighbouring centers 2r apart so adjacent discs touch.
Eigen::MatrixX2d base_station_layout(int cells, double radius);

ChannelRealization sample_channels(const ScenarioConfig& config, RandomStream& stream,
                                   Placement* placement = nullptr);

}  // namespace comp_isac
