#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace linklogic {

// Row-major dense matrix; enough linear algebra lives in the callers that a
// full library is not warranted.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
};

// Shortest round-trip decimal representation; output is locale-independent
// and identical across platforms for the same bit pattern.
std::string format_double(double value);

std::uint32_t crc32(const void* data, std::size_t size, std::uint32_t seed = 0);

std::uint64_t fnv1a(std::string_view text, std::uint64_t hash = 0xcbf29ce484222325ull);

// Reads a whole file; throws IoError on failure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::string join_csv_row(const std::vector<std::string>& cells);

// Runs fn(0..n-1) on `jobs` threads. Results must be written to preallocated
// slots so output order never depends on scheduling. The first exception is
// rethrown after all threads join.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

// One JSON object per line on stderr; machine-parseable progress logging that
// never mixes with result output on stdout.
void log_event(std::string_view event, nlohmann::json fields = nlohmann::json::object());

}  // namespace linklogic
