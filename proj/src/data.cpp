#include "lqdepth/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lqdepth::data {

std::pair<double, double> SplitMix64::normal_pair() {
    for (;;) {
        const double u = uniform_symmetric();
        const double v = uniform_symmetric();
        const double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        return {u * m, v * m};
    }
}

Scenario parse_scenario(std::string_view token) {
    std::string t(token);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "s1") return Scenario::S1;
    if (t == "s2") return Scenario::S2;
    if (t == "s3") return Scenario::S3;
    throw std::invalid_argument("unknown scenario '" + std::string(token) + "'");
}

DataCloud generate(const ScenarioSpec& spec) {
    if (spec.n < 3) throw std::invalid_argument("scenario needs n >= 3");
    SplitMix64 rng(spec.seed);
    linalg::Matrix points(spec.n, 2);
    for (std::size_t i = 0; i < spec.n; ++i) {
        switch (spec.kind) {
            case Scenario::S1:
                points(i, 0) = rng.uniform_symmetric();
                points(i, 1) = rng.uniform_symmetric();
                break;
            case Scenario::S2: {
                const auto [a, b] = rng.normal_pair();
                points(i, 0) = a;
                points(i, 1) = b;
                break;
            }
            case Scenario::S3: {
                const auto [y, z] = rng.normal_pair();
                points(i, 0) = y * y + z;
                points(i, 1) = z * z + y;
                break;
            }
        }
    }
    return DataCloud(std::move(points));
}

namespace {

struct ParsedTable {
    std::size_t cols = 0;
    std::vector<double> values;
    std::size_t rows() const { return cols == 0 ? 0 : values.size() / cols; }
};

bool parse_cell(std::string_view cell, double& out) {
    std::size_t lo = 0, hi = cell.size();
    while (lo < hi && (cell[lo] == ' ' || cell[lo] == '\t')) ++lo;
    while (hi > lo && (cell[hi - 1] == ' ' || cell[hi - 1] == '\t')) --hi;
    if (lo == hi) return false;
    const auto [end, ec] = std::from_chars(cell.data() + lo, cell.data() + hi, out);
    return ec == std::errc() && end == cell.data() + hi && std::isfinite(out);
}

bool parse_row(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        const std::string_view cell(line.data() + start,
                                    (comma == std::string::npos ? line.size() : comma) - start);
        double v;
        if (!parse_cell(cell, v)) return false;
        out.push_back(v);
        if (comma == std::string::npos) return true;
        start = comma + 1;
    }
}

[[noreturn]] void fail_row(std::size_t row, const std::string& what) {
    throw std::invalid_argument("csv row " + std::to_string(row) + ": " + what);
}

ParsedTable parse_table(std::istream& in) {
    ParsedTable table;
    std::string line;
    std::size_t row_number = 0;
    bool saw_data = false;
    std::vector<double> row;
    while (std::getline(in, line)) {
        ++row_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!parse_row(line, row)) {
            // A non-numeric first row is a header; anywhere else it is an error.
            if (!saw_data && row_number == 1) continue;
            fail_row(row_number, "cannot parse '" + line + "'");
        }
        if (!saw_data) {
            table.cols = row.size();
            saw_data = true;
        } else if (row.size() != table.cols) {
            fail_row(row_number, "expected " + std::to_string(table.cols) + " fields, got " +
                                     std::to_string(row.size()));
        }
        table.values.insert(table.values.end(), row.begin(), row.end());
    }
    if (!saw_data) throw std::invalid_argument("csv contains no data rows");
    return table;
}

}  // namespace

linalg::Matrix load_points_csv(std::istream& in) {
    ParsedTable table = parse_table(in);
    const std::size_t n = table.rows(), d = table.cols;
    return linalg::Matrix(n, d, std::move(table.values));
}

DataCloud load_csv(std::istream& in, bool log_transform) {
    ParsedTable table = parse_table(in);
    const std::size_t n = table.rows(), d = table.cols;
    if (log_transform) {
        for (std::size_t i = 0; i < table.values.size(); ++i) {
            if (!(table.values[i] > 0.0))
                fail_row(i / d + 1, "log transform requires strictly positive values");
            table.values[i] = std::log(table.values[i]);
        }
    }
    if (n < d + 1)
        throw std::invalid_argument("csv has " + std::to_string(n) + " rows but " +
                                    std::to_string(d + 1) +
                                    " are needed for d = " + std::to_string(d));
    return DataCloud(linalg::Matrix(n, d, std::move(table.values)));
}

}  // namespace lqdepth::data
