#include "comp_isac/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "comp_isac/errors.hpp"

namespace comp_isac {

Probability::Probability(double value) : value_(value)
{
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError("probability outside [0, 1]");
    }
}

double db_to_linear(double x_db)
{
    return std::pow(10.0, x_db / 10.0);
}

namespace {

void require_per_cell(const std::vector<double>& values, int cells, const char* key)
{
    if (static_cast<int>(values.size()) != cells) {
        throw ConfigError(key, "expected " + std::to_string(cells) + " entries, got " +
                                   std::to_string(values.size()));
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ConfigError(key, "entries must be finite");
        }
    }
}

void require_gain_matrix(const Eigen::MatrixXd& m, int cells, const char* key)
{
    if (m.rows() != cells || m.cols() != cells) {
        throw ConfigError(key, "expected a " + std::to_string(cells) + "x" + std::to_string(cells) +
                                   " matrix");
    }
    if (!m.allFinite() || (m.array() < 0.0).any()) {
        throw ConfigError(key, "entries must be finite and >= 0");
    }
}

Eigen::Vector2d uniform_in_disc(const Eigen::Vector2d& center, double radius, RandomStream& stream)
{
    const double rad = radius * std::sqrt(stream.uniform());
    const double phi = 2.0 * std::numbers::pi * stream.uniform();
    return center + Eigen::Vector2d(rad * std::cos(phi), rad * std::sin(phi));
}

}  // namespace

void ScenarioConfig::validate() const
{
    if (cells < 1) {
        throw ConfigError("L", "must be >= 1");
    }
    if (samples < 1) {
        throw ConfigError("N", "must be >= 1");
    }
    if (samples < cells) {
        throw ConfigError("N", "must be >= L so the symbol block has full column rank");
    }
    if (!(pfa_target > 0.0 && pfa_target < 1.0)) {
        throw ConfigError("pfa_target", "must lie in (0, 1)");
    }
    require_per_cell(noise_comm_db, cells, "noise_comm_db");
    require_per_cell(noise_sense_db, cells, "noise_sense_db");
    if (!std::isfinite(power_budget_db)) {
        throw ConfigError("power_budget_db", "must be finite");
    }
    require_per_cell(rate_thresholds, cells, "rate_thresholds");
    for (double r : rate_thresholds) {
        if (r < 0.0) {
            throw ConfigError("rate_thresholds", "must be >= 0");
        }
    }
    require_per_cell(pod_thresholds, cells, "pod_thresholds");
    for (double p : pod_thresholds) {
        if (!(p >= 0.0 && p < 1.0)) {
            throw ConfigError("pod_thresholds", "must lie in [0, 1)");
        }
    }
    if (multistart < 0) {
        throw ConfigError("multistart", "must be >= 0");
    }
    if (channel_mode == ChannelMode::direct) {
        require_gain_matrix(mean_rho, cells, "mean_rho");
        require_gain_matrix(mean_g, cells, "mean_g");
    } else {
        if (!geometry) {
            throw ConfigError("cell_radius", "geometry mode requires cell_radius and pathloss_exponent");
        }
        if (!(geometry->cell_radius > 0.0)) {
            throw ConfigError("cell_radius", "must be > 0");
        }
        if (!(geometry->pathloss_exponent > 0.0)) {
            throw ConfigError("pathloss_exponent", "must be > 0");
        }
        if (!(geometry->rcs > 0.0)) {
            throw ConfigError("rcs", "must be > 0");
        }
        if (!(geometry->reference_gain > 0.0)) {
            throw ConfigError("reference_gain", "must be > 0");
        }
        if (!(geometry->min_distance > 0.0)) {
            throw ConfigError("min_distance", "must be > 0");
        }
    }
}

double ScenarioConfig::power_budget() const
{
    return db_to_linear(power_budget_db);
}

std::vector<double> ScenarioConfig::sigma_c2() const
{
    std::vector<double> out;
    for (double v : noise_comm_db) out.push_back(db_to_linear(v));
    return out;
}

std::vector<double> ScenarioConfig::sigma_s2() const
{
    std::vector<double> out;
    for (double v : noise_sense_db) out.push_back(db_to_linear(v));
    return out;
}

ScenarioConfig ScenarioConfig::defaults(int cells)
{
    ScenarioConfig c;
    c.cells = cells;
    c.samples = 100;
    c.pfa_target = 1e-6;
    c.noise_comm_db.assign(cells, 1.0);
    c.noise_sense_db.assign(cells, 15.0);
    c.power_budget_db = 20.0;
    c.rate_thresholds.assign(cells, 1.0);
    c.pod_thresholds.assign(cells, 0.7);
    c.channel_mode = ChannelMode::direct;
    c.mean_rho = Eigen::MatrixXd::Constant(cells, cells, 0.1);
    c.mean_rho.diagonal().setOnes();
    c.mean_g = c.mean_rho;
    c.fading = true;
    c.seed = 5;
    c.rpa_seed = 2;
    c.multistart = 8;
    return c;
}

void ChannelRealization::validate() const
{
    const auto n = rho.rows();
    if (rho.cols() != n || g.rows() != n || g.cols() != n || sigma_c2.size() != n ||
        sigma_s2.size() != n) {
        throw DomainError("ChannelRealization: inconsistent shapes");
    }
    if (!rho.allFinite() || !g.allFinite() || (rho.array() < 0.0).any() || (g.array() < 0.0).any()) {
        throw DomainError("ChannelRealization: gains must be finite and >= 0");
    }
    if (!sigma_c2.allFinite() || !sigma_s2.allFinite() || (sigma_c2.array() <= 0.0).any() ||
        (sigma_s2.array() <= 0.0).any()) {
        throw DomainError("ChannelRealization: noise powers must be finite and > 0");
    }
}

Eigen::MatrixX2d base_station_layout(int cells, double radius)
{
    Eigen::MatrixX2d bs = Eigen::MatrixX2d::Zero(cells, 2);
    if (cells == 1) {
        return bs;
    }
    const double circumradius = radius / std::sin(std::numbers::pi / cells);
    for (int l = 0; l < cells; ++l) {
        const double phi = 2.0 * std::numbers::pi * l / cells;
        bs(l, 0) = circumradius * std::cos(phi);
        bs(l, 1) = circumradius * std::sin(phi);
    }
    return bs;
}

ChannelRealization sample_channels(const ScenarioConfig& config, RandomStream& stream,
                                   Placement* placement)
{
    config.validate();
    const int n = config.cells;

    Eigen::MatrixXd mean_rho;
    Eigen::MatrixXd mean_g;
    if (config.channel_mode == ChannelMode::direct) {
        mean_rho = config.mean_rho;
        mean_g = config.mean_g;
    } else {
        const GeometryParams& geo = *config.geometry;
        Placement where;
        where.base_stations = base_station_layout(n, geo.cell_radius);
        where.users.resize(n, 2);
        where.targets.resize(n, 2);
        for (int i = 0; i < n; ++i) {
            const Eigen::Vector2d center = where.base_stations.row(i).transpose();
            where.users.row(i) = uniform_in_disc(center, geo.cell_radius, stream).transpose();
            where.targets.row(i) = uniform_in_disc(center, geo.cell_radius, stream).transpose();
        }
        auto path_gain = [&](const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
            const double d = std::max((to - from).norm(), geo.min_distance);
            return std::pow(d, -geo.pathloss_exponent);
        };
        mean_rho.resize(n, n);
        mean_g.resize(n, n);
        for (int l = 0; l < n; ++l) {
            const Eigen::Vector2d bs = where.base_stations.row(l).transpose();
            for (int i = 0; i < n; ++i) {
                const Eigen::Vector2d user = where.users.row(i).transpose();
                const Eigen::Vector2d target = where.targets.row(i).transpose();
                const Eigen::Vector2d home = where.base_stations.row(i).transpose();
                mean_rho(l, i) = geo.reference_gain * path_gain(bs, user);
                mean_g(l, i) = geo.rcs * geo.reference_gain * geo.reference_gain *
                               path_gain(bs, target) * path_gain(target, home);
            }
        }
        if (placement) {
            *placement = std::move(where);
        }
    }

    ChannelRealization out;
    out.rho.resize(n, n);
    out.g.resize(n, n);
    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            out.rho(l, i) = config.fading ? stream.exponential(mean_rho(l, i)) : mean_rho(l, i);
        }
    }
    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            out.g(l, i) = config.fading ? stream.exponential(mean_g(l, i)) : mean_g(l, i);
        }
    }
    const auto sc = config.sigma_c2();
    const auto ss = config.sigma_s2();
    out.sigma_c2 = Eigen::Map<const Eigen::VectorXd>(sc.data(), n);
    out.sigma_s2 = Eigen::Map<const Eigen::VectorXd>(ss.data(), n);
    return out;
}

}  // namespace comp_isac
