#pragma once

#include <fstream>
#include <optional>
#include <sstream>

#include "biglide/dataset.hpp"
#include "biglide/sweep.hpp"

namespace biglide {

inline std::optional<ModelKind> model_from_name(const std::string& name) {
    for (const ModelKind m :
         {ModelKind::SimplifiedStiffness, ModelKind::RefinedStiffness,
          ModelKind::SimplifiedModal, ModelKind::RefinedModal})
        if (name == model_name(m)) return m;
    return std::nullopt;
}

inline constexpr char kCsvHeader[] = "model,alpha,x_m,metric,value_si";

// Records sorted by (model, alpha, x, metric) so output is reproducible
// regardless of production order; numbers carry 17 significant digits for
// exact round trips.
inline void emit_csv(std::vector<SweepRecord> records, std::ostream& os) {
    std::stable_sort(records.begin(), records.end(),
                     [](const SweepRecord& a, const SweepRecord& b) {
                         if (a.model != b.model) return a.model < b.model;
                         if (a.alpha != b.alpha) return a.alpha < b.alpha;
                         if (a.x != b.x) return a.x < b.x;
                         return a.metric < b.metric;
                     });
    os << kCsvHeader << '\n';
    for (const auto& r : records)
        os << model_name(r.model) << ',' << format_full(r.alpha) << ','
           << format_full(r.x) << ',' << r.metric << ',' << format_full(r.value)
           << '\n';
}

inline void emit_csv(const std::vector<SweepRecord>& records,
                     const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("emit_csv: cannot open '" + path + "' for writing");
    emit_csv(records, os);
    if (!os) throw IoError("emit_csv: write to '" + path + "' failed");
}

inline std::vector<SweepRecord> parse_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw ParseError("csv: missing or unexpected header");
    std::vector<SweepRecord> records;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string model, alpha, x, metric, value;
        if (!std::getline(ls, model, ',') || !std::getline(ls, alpha, ',') ||
            !std::getline(ls, x, ',') || !std::getline(ls, metric, ',') ||
            !std::getline(ls, value))
            throw ParseError("csv line " + std::to_string(line_no) +
                             ": expected 5 comma-separated fields");
        const std::optional<ModelKind> kind = model_from_name(model);
        if (!kind)
            throw ParseError("csv line " + std::to_string(line_no) +
                             ": unknown model '" + model + "'");
        SweepRecord r;
        r.model = *kind;
        r.alpha = detail::parse_number(alpha, line_no);
        r.x = detail::parse_number(x, line_no);
        r.metric = metric;
        r.value = detail::parse_number(value, line_no);
        records.push_back(std::move(r));
    }
    return records;
}

inline std::vector<SweepRecord> parse_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("parse_csv: cannot open '" + path + "'");
    return parse_csv(is);
}

} // namespace biglide
