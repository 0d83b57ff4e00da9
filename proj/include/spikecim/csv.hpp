#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spikecim/device.hpp"
#include "spikecim/errors.hpp"

namespace spikecim {

struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<int> values;  // row-major
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline int parse_int_cell(std::string_view cell, const std::string& path,
                          std::size_t line, std::size_t col) {
  const std::string_view t = trim(cell);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw ValidationError(path + ":" + std::to_string(line) + ": column " +
                          std::to_string(col) + ": expected an integer, got \"" +
                          std::string(t) + "\"");
  return value;
}

}  // namespace detail

// Comma-separated integers, one matrix row per line, no header. Blank
// lines are ignored; every data line must have the same width. Diagnostics
// carry path:line so a bad cell is locatable.
inline IntMatrix load_int_csv(const std::string& path, int min_value, int max_value,
                              const std::string& what) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  IntMatrix m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::size_t col_no = 0;
    std::stringstream ss(line);
    std::string cell;
    std::vector<int> row;
    while (std::getline(ss, cell, ',')) {
      ++col_no;
      const int v = detail::parse_int_cell(cell, path, line_no, col_no);
      if (v < min_value || v > max_value)
        throw ValidationError(path + ":" + std::to_string(line_no) + ": column " +
                              std::to_string(col_no) + ": " + what + " " +
                              std::to_string(v) + " outside [" + std::to_string(min_value) +
                              ", " + std::to_string(max_value) + "]");
      row.push_back(v);
    }
    if (m.rows == 0) {
      m.cols = row.size();
    } else if (row.size() != m.cols) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(m.cols) + " columns, got " +
                            std::to_string(row.size()));
    }
    m.values.insert(m.values.end(), row.begin(), row.end());
    ++m.rows;
  }
  if (m.rows == 0) throw ValidationError(path + ": no data rows");
  return m;
}

inline WeightMatrix load_weight_csv(const std::string& path) {
  const IntMatrix m = load_int_csv(path, 0, WeightCode::max_value, "weight");
  WeightMatrix w{m.rows, m.cols, {}};
  w.values.reserve(m.values.size());
  for (int v : m.values) w.values.push_back(static_cast<std::uint8_t>(v));
  return w;
}

// Input vectors may come as one value per line or a single comma-separated
// line; either way the result is a flat list of row values.
inline std::vector<int> load_input_csv(const std::string& path, int max_value) {
  const IntMatrix m = load_int_csv(path, 0, max_value, "input");
  if (m.rows != 1 && m.cols != 1)
    throw ValidationError(path + ": input vector must be a single row or single column, got " +
                          std::to_string(m.rows) + "x" + std::to_string(m.cols));
  return m.values;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write to " + path + " failed");
}

}  // namespace spikecim
