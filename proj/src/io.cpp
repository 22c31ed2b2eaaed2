#include "ccr/io.hpp"

#include <fstream>
#include <sstream>

#include "ccr/format.hpp"

namespace ccr {

namespace {

constexpr const char* kEventLogHeader = "#ccr-eventlog v1";

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_event_log(std::ostream& out, const EventLog& log) {
  out << kEventLogHeader << '\n';
  for (const Event& e : log) {
    out << e.seq << ',' << e.agent << ',' << e.paragraph << ',' << vote_token(e.value)
        << '\n';
  }
}

EventLog read_event_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kEventLogHeader) {
    throw SchemaError("event-log file must start with '" + std::string(kEventLogHeader) + "'");
  }
  EventLog log;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw SchemaError("event-log line " + std::to_string(line_no) +
                        ": expected seq,agent,paragraph,value");
    }
    try {
      const auto seq = parse_uint(fields[0]);
      if (seq != log.size() + 1) {
        throw SchemaError("event-log line " + std::to_string(line_no) +
                          ": sequence number out of order");
      }
      log.append(static_cast<AgentId>(parse_uint(fields[1])),
                 static_cast<ParagraphId>(parse_uint(fields[2])),
                 vote_from_token(fields[3]));
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      throw SchemaError("event-log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return log;
}

void save_event_log(const std::filesystem::path& path, const EventLog& log) {
  auto out = open_output(path);
  write_event_log(out, log);
}

EventLog load_event_log(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_event_log(in);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      if (!current.empty()) throw SchemaError("stray quote inside CSV field");
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // tolerate CRLF line endings
    } else {
      current += c;
    }
  }
  if (quoted) throw SchemaError("unterminated quote in CSV line");
  fields.push_back(std::move(current));
  return fields;
}

namespace {

constexpr const char* kPointsHeader = "rule,repetition,events,satisfaction,stability,solution_size";

std::string point_row(const MetricPoint& p) {
  std::ostringstream row;
  row << csv_field(p.rule) << ',' << p.repetition << ',' << format_double(p.events) << ','
      << format_double(p.satisfaction) << ',' << format_double(p.stability) << ','
      << format_double(p.solution_size);
  return row.str();
}

}  // namespace

void write_points_csv(std::ostream& out, const std::vector<MetricPoint>& points) {
  out << kPointsHeader << '\n';
  for (const MetricPoint& p : points) out << point_row(p) << '\n';
}

std::vector<MetricPoint> read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty metrics file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kPointsHeader) {
    throw SchemaError("metrics file must start with '" + std::string(kPointsHeader) + "'");
  }
  std::vector<MetricPoint> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 6) {
      throw SchemaError("metrics line " + std::to_string(line_no) + ": expected 6 fields");
    }
    try {
      MetricPoint p;
      p.rule = fields[0];
      p.repetition = static_cast<std::uint32_t>(parse_uint(fields[1]));
      p.events = parse_double(fields[2]);
      p.satisfaction = parse_double(fields[3]);
      p.stability = parse_double(fields[4]);
      p.solution_size = parse_double(fields[5]);
      points.push_back(std::move(p));
    } catch (const Error& e) {
      throw SchemaError("metrics line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return points;
}

std::vector<MetricPoint> load_points_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_points_csv(in);
}

void write_pareto_csv(std::ostream& out, const std::vector<MetricPoint>& points) {
  out << kPointsHeader << ",dominated\n";
  for (const MetricPoint& p : points) {
    bool dominated = false;
    for (const MetricPoint& other : points) {
      if (other.satisfaction >= p.satisfaction && other.stability >= p.stability &&
          (other.satisfaction > p.satisfaction || other.stability > p.stability)) {
        dominated = true;
        break;
      }
    }
    out << point_row(p) << ',' << (dominated ? 1 : 0) << '\n';
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  auto out = open_output(path);
  out << content;
}

}  // namespace ccr
