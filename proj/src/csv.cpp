#include "rtpzero/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rtpzero {

namespace {

const char* kHeader = "m,law,metric,value,ci_low,ci_high,n_reps,mean_count,se_count,wall_ms";

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const char* field) {
  if (s == "nan" || s == "-nan") return std::nan("");
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("csv: bad numeric field '") + s + "' in column " + field);
  }
}

std::size_t parse_size(const std::string& s, const char* field) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("csv: bad integer field '") + s + "' in column " + field);
  }
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string table_to_csv(const ResultTable& table) {
  std::ostringstream os;
  os << kHeader << '\n';
  for (const ResultRow& r : table.rows) {
    os << r.m << ',' << r.law << ',' << r.metric << ',' << fmt_double(r.value) << ','
       << fmt_double(r.ci_low) << ',' << fmt_double(r.ci_high) << ',' << r.n_reps << ','
       << fmt_double(r.mean_count) << ',' << fmt_double(r.se_count) << ','
       << fmt_double(r.wall_ms) << '\n';
  }
  return os.str();
}

void write_csv(const ResultTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  f << table_to_csv(table);
  if (!f) throw std::runtime_error("csv: write to '" + path + "' failed");
}

ResultTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("csv: cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("csv: '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw std::runtime_error("csv: unexpected header in '" + path + "'");
  ResultTable table;
  while (std::getline(f, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (cells.size() != 10)
      throw std::runtime_error("csv: expected 10 columns, got " + std::to_string(cells.size()));
    ResultRow r;
    r.m = parse_size(cells[0], "m");
    r.law = cells[1];
    r.metric = cells[2];
    r.value = parse_double(cells[3], "value");
    r.ci_low = parse_double(cells[4], "ci_low");
    r.ci_high = parse_double(cells[5], "ci_high");
    r.n_reps = parse_size(cells[6], "n_reps");
    r.mean_count = parse_double(cells[7], "mean_count");
    r.se_count = parse_double(cells[8], "se_count");
    r.wall_ms = parse_double(cells[9], "wall_ms");
    table.rows.push_back(std::move(r));
  }
  return table;
}

}  // namespace rtpzero
