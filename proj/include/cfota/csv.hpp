#pragma once

#include "cfota/accounting.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace cfota {

/// One emitted result. `point` is the sweep P_max (dBm) or the training round,
/// as named by `point_kind`. Per-group lists are written ';'-joined; empty
/// lists mean "not applicable".
struct ResultRow {
    std::string scenario;
    std::string architecture;
    std::uint64_t seed = 0;
    std::size_t num_seeds = 1;
    std::string point_kind;
    double point = 0.0;
    std::vector<double> group_mse;
    double weighted_sum_mse = 0.0;
    std::vector<double> group_accuracy;
    std::vector<double> group_error;  // realized aggregation error ||e||^2
    std::vector<double> group_gap;    // convex task: optimality gap
    std::vector<double> group_bound;  // convex task: convergence bound
    FronthaulReport fronthaul;
};

std::string csv_header();
std::string csv_line(const ResultRow& row);
/// Quotes a field when it contains a comma, quote, CR or LF; quotes are doubled.
std::string csv_escape(const std::string& field);
/// "%.9g".
std::string format_real(double value);

/// Stable sort by (scenario, seed, point); rows sharing a key keep their order.
void sort_rows(std::vector<ResultRow>& rows);

void write_csv(std::ostream& out, std::vector<ResultRow> rows);
/// Throws IoError when the file cannot be written.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace cfota
