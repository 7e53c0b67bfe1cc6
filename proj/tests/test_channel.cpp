#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>

#include "comp_isac/channel.hpp"
#include "comp_isac/config.hpp"
#include "comp_isac/errors.hpp"
#include "support/oracles.hpp"

using namespace comp_isac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::string config_error_key(const std::string& text)
{
    try {
        parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<none>";
}

}  // namespace

TEST_CASE("dB conversion")
{
    CHECK_THAT(db_to_linear(0.0), WithinRel(1.0, 1e-15));
    CHECK_THAT(db_to_linear(1.0), WithinRel(1.2589254117941673, 1e-14));
    CHECK_THAT(db_to_linear(15.0), WithinRel(31.622776601683793, 1e-14));
    CHECK_THAT(db_to_linear(-10.0), WithinRel(0.1, 1e-14));
}

TEST_CASE("Probability rejects values outside [0, 1]")
{
    CHECK(Probability(0.25).value() == 0.25);
    CHECK_THROWS_AS(Probability(-0.1), DomainError);
    CHECK_THROWS_AS(Probability(1.5), DomainError);
    CHECK_THROWS_AS(Probability(std::nan("")), DomainError);
}

TEST_CASE("default scenario is valid and uses the operating point")
{
    const ScenarioConfig c = ScenarioConfig::defaults();
    REQUIRE_NOTHROW(c.validate());
    CHECK(c.cells == 3);
    CHECK(c.samples == 100);
    CHECK(c.pfa_target == 1e-6);
    CHECK(c.sigma_c2()[0] == db_to_linear(1.0));
    CHECK(c.sigma_s2()[2] == db_to_linear(15.0));
    CHECK(c.mean_rho(0, 0) == 1.0);
    CHECK(c.mean_rho(0, 1) == 0.1);
}

TEST_CASE("scenario validation names the offending key")
{
    auto bad = [](auto mutate) {
        ScenarioConfig c = ScenarioConfig::defaults();
        mutate(c);
        try {
            c.validate();
        } catch (const ConfigError& e) {
            return e.key();
        }
        return std::string("<none>");
    };
    CHECK(bad([](ScenarioConfig& c) { c.cells = 0; }) == "L");
    CHECK(bad([](ScenarioConfig& c) { c.samples = 2; }) == "N");
    CHECK(bad([](ScenarioConfig& c) { c.pfa_target = 1.0; }) == "pfa_target");
    CHECK(bad([](ScenarioConfig& c) { c.rate_thresholds[1] = -1.0; }) == "rate_thresholds");
    CHECK(bad([](ScenarioConfig& c) { c.pod_thresholds[0] = 1.0; }) == "pod_thresholds");
    CHECK(bad([](ScenarioConfig& c) { c.mean_g(1, 2) = -0.5; }) == "mean_g");
    CHECK(bad([](ScenarioConfig& c) {
              c.channel_mode = ChannelMode::geometry;
          }) == "cell_radius");
    CHECK(bad([](ScenarioConfig& c) {
              c.channel_mode = ChannelMode::geometry;
              c.geometry = GeometryParams{100.0, 0.0};
          }) == "pathloss_exponent");
}

TEST_CASE("fading disabled passes the mean gains through")
{
    ScenarioConfig c = ScenarioConfig::defaults();
    c.mean_rho.setOnes();
    c.fading = false;
    RandomStream stream(7);
    const ChannelRealization r = sample_channels(c, stream);
    CHECK(r.rho == Eigen::MatrixXd::Ones(3, 3));
    CHECK(r.g == c.mean_g);
}

TEST_CASE("channel sampling is deterministic per seed")
{
    const ScenarioConfig c = ScenarioConfig::defaults();
    RandomStream a(11);
    RandomStream b(11);
    RandomStream other(12);
    const ChannelRealization ra = sample_channels(c, a);
    const ChannelRealization rb = sample_channels(c, b);
    const ChannelRealization rc = sample_channels(c, other);
    CHECK(ra.rho == rb.rho);
    CHECK(ra.g == rb.g);
    CHECK(ra.rho != rc.rho);
}

TEST_CASE("faded gains are exponential around the configured mean")
{
    ScenarioConfig c = ScenarioConfig::defaults(2);
    c.mean_rho << 2.0, 0.3, 0.05, 1.0;
    RandomStream stream(2024);
    const int draws = 100000;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(2, 2);
    std::vector<double> normalized;
    for (int k = 0; k < draws; ++k) {
        const ChannelRealization r = sample_channels(c, stream);
        sum += r.rho;
        normalized.push_back(r.rho(0, 1) / c.mean_rho(0, 1));
    }
    const Eigen::MatrixXd mean = sum / draws;
    for (int l = 0; l < 2; ++l) {
        for (int i = 0; i < 2; ++i) {
            CHECK(std::abs(mean(l, i) - c.mean_rho(l, i)) <= 3.0 * c.mean_rho(l, i) / std::sqrt(draws));
        }
    }
    const double d = oracle::ks_statistic(normalized, [](double x) { return 1.0 - std::exp(-x); });
    CHECK(d < oracle::ks_critical_1pct(normalized.size()));
}

TEST_CASE("geometry mode keeps nodes inside their cells")
{
    ScenarioConfig c = ScenarioConfig::defaults();
    c.channel_mode = ChannelMode::geometry;
    c.geometry = GeometryParams{50.0, 3.0, 1.0, 1.0, 1.0};
    c.fading = false;
    RandomStream stream(3);
    for (int trial = 0; trial < 200; ++trial) {
        Placement where;
        const ChannelRealization r = sample_channels(c, stream, &where);
        for (int i = 0; i < c.cells; ++i) {
            CHECK((where.users.row(i) - where.base_stations.row(i)).norm() <= 50.0);
            CHECK((where.targets.row(i) - where.base_stations.row(i)).norm() <= 50.0);
        }
        // Without fading the gains equal the pathloss model.
        const double d = std::max(1.0, (where.users.row(1) - where.base_stations.row(0)).norm());
        CHECK_THAT(r.rho(0, 1), WithinRel(std::pow(d, -3.0), 1e-12));
        const double d1 = std::max(1.0, (where.targets.row(2) - where.base_stations.row(1)).norm());
        const double d2 = std::max(1.0, (where.targets.row(2) - where.base_stations.row(2)).norm());
        CHECK_THAT(r.g(1, 2), WithinRel(std::pow(d1 * d2, -3.0), 1e-12));
    }
}

TEST_CASE("base stations of adjacent cells are one diameter apart")
{
    const Eigen::MatrixX2d one = base_station_layout(1, 10.0);
    CHECK(one.row(0).norm() == 0.0);
    for (int cells : {2, 3, 5}) {
        const Eigen::MatrixX2d bs = base_station_layout(cells, 10.0);
        for (int l = 0; l < cells; ++l) {
            CHECK_THAT((bs.row(l) - bs.row((l + 1) % cells)).norm(), WithinRel(20.0, 1e-12));
        }
    }
}

TEST_CASE("config parsing: defaults, broadcasting and matrices")
{
    const ScenarioConfig c = parse_scenario(R"({"L": 2, "power_budget_db": 12.5, "pod_thresholds": 0.8,
        "rate_thresholds": [0.5, 1.5], "mean_rho": [[1, 0.2], [0.3, 1]], "seed": 99})");
    CHECK(c.cells == 2);
    CHECK(c.samples == 100);
    CHECK(c.power_budget_db == 12.5);
    CHECK(c.pod_thresholds == std::vector<double>{0.8, 0.8});
    CHECK(c.rate_thresholds == std::vector<double>{0.5, 1.5});
    CHECK(c.mean_rho(1, 0) == 0.3);
    CHECK(c.mean_g(0, 1) == 0.1);
    CHECK(c.seed == 99u);

    const ScenarioConfig geo = parse_scenario(
        R"({"channel_mode": "geometry", "cell_radius": 200, "pathloss_exponent": 3.5, "rcs": 2})");
    REQUIRE(geo.geometry.has_value());
    CHECK(geo.geometry->cell_radius == 200.0);
    CHECK(geo.geometry->rcs == 2.0);
}

TEST_CASE("config parsing errors carry the key")
{
    CHECK(config_error_key(R"({"L": 0})") == "L");
    CHECK(config_error_key(R"({"N": "many"})") == "N");
    CHECK(config_error_key(R"({"colour": 3})") == "colour");
    CHECK(config_error_key(R"({"rate_thresholds": [1, 2]})") == "rate_thresholds");
    CHECK(config_error_key(R"({"mean_rho": [[1, 0], [0, 1]]})") == "mean_rho");
    CHECK(config_error_key(R"({"channel_mode": "satellite"})") == "channel_mode");
    CHECK(config_error_key(R"({"channel_mode": "geometry"})") == "cell_radius");
    CHECK(config_error_key(R"([1, 2])") != "<none>");
    CHECK(config_error_key("{not json") != "<none>");
}

TEST_CASE("config file round trip through the filesystem")
{
    const auto path = std::filesystem::temp_directory_path() / "compisac_test_config.json";
    {
        std::ofstream out(path);
        out << R"({"L": 3, "power_budget_db": 17})";
    }
    CHECK(load_scenario(path).power_budget_db == 17.0);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_scenario(path), ConfigError);
}
