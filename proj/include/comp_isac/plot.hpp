#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "comp_isac/csv.hpp"

namespace comp_isac {

/**
 * @brief SVG line chart of one sweep: x = sweep value, one series per scheme.
 *
 * Rate sweeps plot sum_rate; PoD validation plots the mean closed-form PoD as
 * a line and the mean empirical PoD as markers. Infeasible rows are skipped.
 */
std::string render_svg(const CsvTable& table, const std::string& sweep);

/**
 * @brief One SVG per sweep found in the CSV.
 *
 * A single sweep is written to output; several get "_<sweep>" inserted before
 * the extension. Returns the files written.
 */
std::vector<std::filesystem::path> render_plots(const std::filesystem::path& csv_path,
                                                const std::filesystem::path& output);

}  // namespace comp_isac
