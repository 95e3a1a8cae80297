#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmg/point_cloud.hpp"

namespace kmg::cli {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One point per row, comma separated. A first row that does not parse as
/// numbers is taken as a header. Errors name the offending line.
PointCloud read_points(std::istream& in);
PointCloud read_points_file(const std::string& path);

/// One integer label per row; optional header as above.
std::vector<int> read_labels(std::istream& in);
std::vector<int> read_labels_file(const std::string& path);

void write_points(std::ostream& out, const PointCloud& cloud);
void write_labels(std::ostream& out, const std::vector<int>& labels);

/// 64-bit FNV-1a over (n, d, data in point order) as raw little-endian bytes.
std::uint64_t dataset_hash(const PointCloud& cloud);
std::string hex64(std::uint64_t v);

}  // namespace kmg::cli
