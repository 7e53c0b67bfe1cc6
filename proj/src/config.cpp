#include "comp_isac/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "comp_isac/errors.hpp"

namespace comp_isac {

namespace {

using nlohmann::json;

double number(const json& v, const std::string& key)
{
    if (!v.is_number()) {
        throw ConfigError(key, "expected a number");
    }
    return v.get<double>();
}

std::vector<double> per_cell(const json& v, int cells, const std::string& key)
{
    if (v.is_number()) {
        return std::vector<double>(cells, v.get<double>());
    }
    if (!v.is_array()) {
        throw ConfigError(key, "expected a number or a list of numbers");
    }
    std::vector<double> out;
    for (const auto& e : v) {
        out.push_back(number(e, key));
    }
    if (static_cast<int>(out.size()) != cells) {
        throw ConfigError(key, "expected " + std::to_string(cells) + " entries");
    }
    return out;
}

Eigen::MatrixXd matrix(const json& v, int cells, const std::string& key)
{
    if (!v.is_array() || static_cast<int>(v.size()) != cells) {
        throw ConfigError(key, "expected " + std::to_string(cells) + " rows");
    }
    Eigen::MatrixXd m(cells, cells);
    for (int r = 0; r < cells; ++r) {
        const json& row = v[r];
        if (!row.is_array() || static_cast<int>(row.size()) != cells) {
            throw ConfigError(key, "row " + std::to_string(r) + " must have " + std::to_string(cells) +
                                       " entries");
        }
        for (int c = 0; c < cells; ++c) {
            m(r, c) = number(row[c], key);
        }
    }
    return m;
}

int integer(const json& v, const std::string& key)
{
    if (!v.is_number_integer()) {
        throw ConfigError(key, "expected an integer");
    }
    return v.get<int>();
}

std::uint64_t seed_value(const json& v, const std::string& key)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError(key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

const std::set<std::string> kKnownKeys = {
    "L",           "N",           "pfa_target",     "noise_comm_db",     "noise_sense_db",
    "power_budget_db", "rate_thresholds", "pod_thresholds", "channel_mode", "mean_rho",
    "mean_g",      "fading",      "cell_radius",    "pathloss_exponent", "rcs",
    "reference_gain", "min_distance", "seed",       "rpa_seed",          "multistart"};

}  // namespace

ScenarioConfig parse_scenario(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("parse error: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("<document>", "top level must be an object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (!kKnownKeys.count(key)) {
            throw ConfigError(key, "unknown key");
        }
    }

    const int cells = doc.contains("L") ? integer(doc["L"], "L") : 3;
    if (cells < 1) {
        throw ConfigError("L", "must be >= 1");
    }
    ScenarioConfig c = ScenarioConfig::defaults(cells);

    if (doc.contains("N")) c.samples = integer(doc["N"], "N");
    if (doc.contains("pfa_target")) c.pfa_target = number(doc["pfa_target"], "pfa_target");
    if (doc.contains("noise_comm_db")) c.noise_comm_db = per_cell(doc["noise_comm_db"], cells, "noise_comm_db");
    if (doc.contains("noise_sense_db")) c.noise_sense_db = per_cell(doc["noise_sense_db"], cells, "noise_sense_db");
    if (doc.contains("power_budget_db")) c.power_budget_db = number(doc["power_budget_db"], "power_budget_db");
    if (doc.contains("rate_thresholds")) c.rate_thresholds = per_cell(doc["rate_thresholds"], cells, "rate_thresholds");
    if (doc.contains("pod_thresholds")) c.pod_thresholds = per_cell(doc["pod_thresholds"], cells, "pod_thresholds");
    if (doc.contains("channel_mode")) {
        const json& m = doc["channel_mode"];
        if (m == "direct") {
            c.channel_mode = ChannelMode::direct;
        } else if (m == "geometry") {
            c.channel_mode = ChannelMode::geometry;
        } else {
            throw ConfigError("channel_mode", "expected \"direct\" or \"geometry\"");
        }
    }
    if (doc.contains("mean_rho")) c.mean_rho = matrix(doc["mean_rho"], cells, "mean_rho");
    if (doc.contains("mean_g")) c.mean_g = matrix(doc["mean_g"], cells, "mean_g");
    if (doc.contains("fading")) {
        if (!doc["fading"].is_boolean()) {
            throw ConfigError("fading", "expected true or false");
        }
        c.fading = doc["fading"].get<bool>();
    }

    const bool any_geometry = doc.contains("cell_radius") || doc.contains("pathloss_exponent") ||
                              doc.contains("rcs") || doc.contains("reference_gain") ||
                              doc.contains("min_distance");
    if (any_geometry || c.channel_mode == ChannelMode::geometry) {
        if (c.channel_mode == ChannelMode::geometry &&
            (!doc.contains("cell_radius") || !doc.contains("pathloss_exponent"))) {
            throw ConfigError(doc.contains("cell_radius") ? "pathloss_exponent" : "cell_radius",
                              "required in geometry mode");
        }
        GeometryParams geo;
        if (doc.contains("cell_radius")) geo.cell_radius = number(doc["cell_radius"], "cell_radius");
        if (doc.contains("pathloss_exponent")) geo.pathloss_exponent = number(doc["pathloss_exponent"], "pathloss_exponent");
        if (doc.contains("rcs")) geo.rcs = number(doc["rcs"], "rcs");
        if (doc.contains("reference_gain")) geo.reference_gain = number(doc["reference_gain"], "reference_gain");
        if (doc.contains("min_distance")) geo.min_distance = number(doc["min_distance"], "min_distance");
        c.geometry = geo;
    }

    if (doc.contains("seed")) c.seed = seed_value(doc["seed"], "seed");
    if (doc.contains("rpa_seed")) c.rpa_seed = seed_value(doc["rpa_seed"], "rpa_seed");
    if (doc.contains("multistart")) c.multistart = integer(doc["multistart"], "multistart");

    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("--config", "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace comp_isac
