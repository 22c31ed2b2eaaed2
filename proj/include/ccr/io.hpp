#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccr/events.hpp"
#include "ccr/welfare.hpp"

namespace ccr {

// Event-log files: a "#ccr-eventlog v1" header line, then one event per line
// as seq,agent,paragraph,value with value in {+1,0,-1}.

void write_event_log(std::ostream& out, const EventLog& log);
EventLog read_event_log(std::istream& in);  // SchemaError on malformed input

void save_event_log(const std::filesystem::path& path, const EventLog& log);
EventLog load_event_log(const std::filesystem::path& path);

// Minimal CSV plumbing; fields with commas/quotes/newlines get double-quoted.
std::string csv_field(const std::string& value);
std::vector<std::string> split_csv_line(const std::string& line);  // SchemaError

// Metric rows: rule,repetition,events,satisfaction,stability,solution_size.
void write_points_csv(std::ostream& out, const std::vector<MetricPoint>& points);
std::vector<MetricPoint> read_points_csv(std::istream& in);
std::vector<MetricPoint> load_points_csv(const std::filesystem::path& path);

/// Same schema plus a trailing `dominated` column (0 = on the front).
void write_pareto_csv(std::ostream& out, const std::vector<MetricPoint>& points);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ccr
