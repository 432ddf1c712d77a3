#include "cfota/csv.hpp"

#include "cfota/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <tuple>

namespace cfota {

namespace {

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ';';
        out += format_real(values[i]);
    }
    return out;
}

}  // namespace

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_header() {
    return "scenario,architecture,seed,num_seeds,point_kind,point,group_mse,weighted_sum_mse,"
           "group_accuracy,group_error,group_gap,group_bound,fronthaul_pilot_data,"
           "fronthaul_combiners,fronthaul_statistics";
}

std::string csv_line(const ResultRow& r) {
    const std::vector<std::string> fields = {
        csv_escape(r.scenario),
        csv_escape(r.architecture),
        std::to_string(r.seed),
        std::to_string(r.num_seeds),
        csv_escape(r.point_kind),
        format_real(r.point),
        join(r.group_mse),
        format_real(r.weighted_sum_mse),
        join(r.group_accuracy),
        join(r.group_error),
        join(r.group_gap),
        join(r.group_bound),
        std::to_string(r.fronthaul.pilot_data),
        std::to_string(r.fronthaul.combiners),
        format_real(r.fronthaul.statistics()),
    };
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) line += ',';
        line += fields[i];
    }
    return line;
}

void sort_rows(std::vector<ResultRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.scenario, a.seed, a.point) < std::tie(b.scenario, b.seed, b.point);
    });
}

void write_csv(std::ostream& out, std::vector<ResultRow> rows) {
    sort_rows(rows);
    out << csv_header() << '\n';
    for (const auto& r : rows) out << csv_line(r) << '\n';
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_csv(out, rows);
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace cfota
