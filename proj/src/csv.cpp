#include "comp_isac/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace comp_isac {

namespace {

std::string real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string optional_real(const std::optional<double>& v)
{
    return v ? real(*v) : std::string();
}

void append_columns(std::vector<std::string>& header, const char* prefix, int cells)
{
    for (int i = 1; i <= cells; ++i) {
        header.push_back(std::string(prefix) + std::to_string(i));
    }
}

}  // namespace

std::vector<std::string> csv_header(int cells, bool with_timing)
{
    std::vector<std::string> h{"sweep", "value", "scheme", "snapshots", "feasible", "sum_rate"};
    append_columns(h, "rate_", cells);
    append_columns(h, "pod_cf_", cells);
    append_columns(h, "pod_mc_", cells);
    append_columns(h, "pod_mc_se_", cells);
    h.push_back("iterations");
    if (with_timing) {
        h.push_back("wall_time_s");
    }
    return h;
}

std::string format_csv(const std::vector<ResultRow>& rows, int cells, bool with_timing)
{
    std::ostringstream out;
    const auto header = csv_header(cells, with_timing);
    for (std::size_t k = 0; k < header.size(); ++k) {
        out << (k ? "," : "") << header[k];
    }
    out << '\n';

    auto put_list = [&](const std::vector<std::optional<double>>& values) {
        for (int i = 0; i < cells; ++i) {
            out << ',' << (i < static_cast<int>(values.size()) ? optional_real(values[i]) : std::string());
        }
    };
    for (const ResultRow& r : rows) {
        out << r.sweep << ',' << real(r.sweep_value) << ',' << to_string(r.scheme) << ',' << r.snapshots << ','
            << (r.feasible ? 1 : 0) << ',' << optional_real(r.sum_rate);
        put_list(r.per_user_rate);
        put_list(r.pod_closed_form);
        put_list(r.pod_empirical);
        put_list(r.pod_stderr);
        out << ',' << r.iterations;
        if (with_timing) {
            out << ',' << real(r.wall_time_s);
        }
        out << '\n';
    }
    return out.str();
}

void emit_csv(const std::vector<ResultRow>& rows, int cells, const std::filesystem::path& path, bool with_timing)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << format_csv(rows, cells, with_timing);
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) return k;
    }
    throw std::out_of_range("CSV has no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text)
{
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(s);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!s.empty() && s.back() == ',') fields.emplace_back();
        return fields;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(table.header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) {
        throw std::runtime_error("line 1: missing header");
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_csv(buf.str());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace comp_isac
