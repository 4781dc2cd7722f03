#pragma once

#include <iosfwd>
#include <string>

#include "odeim/experiments.hpp"

namespace odeim {

// Columns: method,n,m,replicate,error,selection_norm,status. Doubles are
// written in shortest round-trip form; failed cells carry nan values and
// their status marker.
void write_error_csv(const ErrorTable& table, std::ostream& out);
void write_error_csv(const ErrorTable& table, const std::string& path);

void write_error_json(const ErrorTable& table, std::ostream& out);
void write_error_json(const ErrorTable& table, const std::string& path);

void write_bound_report_json(const BoundReport& report, std::ostream& out);
void write_bound_report_json(const BoundReport& report, const std::string& path);

}  // namespace odeim
