#include "csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

namespace kmg::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::vector<double>> parse_row(const std::string& line) {
  std::vector<double> row;
  for (const std::string& cell : split(line)) {
    const auto v = parse_double(cell);
    if (!v) return std::nullopt;
    row.push_back(*v);
  }
  return row;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);
  return in;
}

}  // namespace

PointCloud read_points(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto row = parse_row(line);
    if (!row) {
      if (first) {
        first = false;
        continue;
      }
      throw CsvError("line " + std::to_string(lineno) + ": malformed row");
    }
    first = false;
    for (double v : *row) {
      if (!std::isfinite(v)) throw CsvError("line " + std::to_string(lineno) + ": non-finite value");
    }
    if (!rows.empty() && row->size() != rows.front().size()) {
      throw CsvError("line " + std::to_string(lineno) + ": expected " + std::to_string(rows.front().size()) +
                     " columns, found " + std::to_string(row->size()));
    }
    rows.push_back(std::move(*row));
  }
  if (rows.empty()) throw CsvError("no data rows");
  return PointCloud::from_rows(rows);
}

PointCloud read_points_file(const std::string& path) {
  auto in = open(path);
  return read_points(in);
}

std::vector<int> read_labels(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string cell = trim(line);
    if (cell.empty()) continue;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      if (first) {
        first = false;
        continue;
      }
      throw CsvError("line " + std::to_string(lineno) + ": malformed label");
    }
    first = false;
    labels.push_back(v);
  }
  return labels;
}

std::vector<int> read_labels_file(const std::string& path) {
  auto in = open(path);
  return read_labels(in);
}

void write_points(std::ostream& out, const PointCloud& cloud) {
  char buf[64];
  for (Index i = 0; i < cloud.n(); ++i) {
    for (Index r = 0; r < cloud.d(); ++r) {
      std::snprintf(buf, sizeof buf, "%.17g", cloud.data()(r, i));
      out << (r ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_labels(std::ostream& out, const std::vector<int>& labels) {
  for (int l : labels) out << l << '\n';
}

std::uint64_t dataset_hash(const PointCloud& cloud) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int64_t n = cloud.n();
  const std::int64_t d = cloud.d();
  mix(&n, sizeof n);
  mix(&d, sizeof d);
  for (Index i = 0; i < cloud.n(); ++i) {
    for (Index r = 0; r < cloud.d(); ++r) {
      const double v = cloud.data()(r, i);
      mix(&v, sizeof v);
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace kmg::cli
