#include "odeim/reports.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "odeim/error.hpp"
#include "odeim/text_util.hpp"

namespace odeim {

namespace {

using nlohmann::json;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("report: cannot open " + path + " for writing");
    return out;
}

json cell_to_json(const CellResult& cell) {
    return json{{"method", method_name(cell.method)},
                {"n", cell.n},
                {"m", cell.m},
                {"replicate", cell.replicate},
                {"error", cell.error},
                {"selection_norm", cell.selection_norm},
                {"status", cell.status}};
}

json aggregate_to_json(const CellAggregate& agg) {
    return json{{"method", method_name(agg.method)},
                {"n", agg.n},
                {"m", agg.m},
                {"mean_error", agg.mean_error},
                {"min_error", agg.min_error},
                {"max_error", agg.max_error},
                {"mean_selection_norm", agg.mean_selection_norm},
                {"ok_count", agg.ok_count},
                {"failed_count", agg.failed_count}};
}

}  // namespace

void write_error_csv(const ErrorTable& table, std::ostream& out) {
    out << "method,n,m,replicate,error,selection_norm,status\n";
    for (const CellResult& cell : table.cells) {
        out << method_name(cell.method) << "," << cell.n << "," << cell.m << ","
            << cell.replicate << "," << dtos(cell.error) << ","
            << dtos(cell.selection_norm) << "," << cell.status << "\n";
    }
    if (!out) throw Error("report: csv write failed");
}

void write_error_csv(const ErrorTable& table, const std::string& path) {
    auto out = open_output(path);
    write_error_csv(table, out);
}

void write_error_json(const ErrorTable& table, std::ostream& out) {
    json doc;
    doc["cells"] = json::array();
    for (const CellResult& cell : table.cells) doc["cells"].push_back(cell_to_json(cell));
    doc["aggregates"] = json::array();
    for (const CellAggregate& agg : table.aggregates())
        doc["aggregates"].push_back(aggregate_to_json(agg));
    out << doc.dump(2) << "\n";
    if (!out) throw Error("report: json write failed");
}

void write_error_json(const ErrorTable& table, const std::string& path) {
    auto out = open_output(path);
    write_error_json(table, out);
}

void write_bound_report_json(const BoundReport& report, std::ostream& out) {
    json doc{{"N", report.big_n},
             {"n", report.n},
             {"delta", report.delta},
             {"trials", report.trials},
             {"sigma", report.sigma},
             {"projection_norm", report.projection_norm},
             {"lemma_violation_frequency", report.lemma_violation_frequency},
             {"expected_bound_violation_frequency",
              report.expected_bound_violation_frequency},
             {"mean_error", report.mean_error},
             {"mean_expected_bound", report.mean_expected_bound},
             {"mean_noise_contribution", report.mean_noise_contribution}};
    doc["trial_results"] = json::array();
    for (const BoundTrial& t : report.trial_results) {
        doc["trial_results"].push_back(json{{"mu", t.mu},
                                            {"gamma", t.gamma},
                                            {"m", t.m},
                                            {"inverse_norm", t.inverse_norm},
                                            {"lemma_bound", t.lemma_bound},
                                            {"lemma_violated", t.lemma_violated},
                                            {"error", t.error},
                                            {"noise_free_error", t.noise_free_error},
                                            {"expected_bound", t.expected_bound},
                                            {"expected_bound_violated",
                                             t.expected_bound_violated}});
    }
    out << doc.dump(2) << "\n";
    if (!out) throw Error("report: json write failed");
}

void write_bound_report_json(const BoundReport& report, const std::string& path) {
    auto out = open_output(path);
    write_bound_report_json(report, out);
}

}  // namespace odeim
