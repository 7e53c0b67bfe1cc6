#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "comp_isac/harness.hpp"

namespace comp_isac {

/**
 * Column order (L = number of cells):
 *   sweep, value, scheme, snapshots, feasible, sum_rate,
 *   rate_1..rate_L, pod_cf_1..pod_cf_L, pod_mc_1..pod_mc_L, pod_mc_se_1..pod_mc_se_L,
 *   iterations[, wall_time_s]
 * Reals use 9 significant digits; missing values are empty fields.
 */
std::vector<std::string> csv_header(int cells, bool with_timing = false);

std::string format_csv(const std::vector<ResultRow>& rows, int cells, bool with_timing = false);

/// Throws std::runtime_error with the path on I/O failure.
void emit_csv(const std::vector<ResultRow>& rows, int cells, const std::filesystem::path& path,
              bool with_timing = false);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws std::out_of_range if absent.
    std::size_t column(const std::string& name) const;
};

/// Throws std::runtime_error naming the line on ragged rows.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace comp_isac
