#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wpmm/linalg/dense_matrix.hpp"

namespace wpmm::harness {

struct Edge {
  std::size_t u = 0;  // 1-based
  std::size_t v = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct GsetGraph {
  std::size_t n = 0;
  std::vector<Edge> edges;
};

// Parses "n m" followed by m lines "u v w". Self-loops are dropped and
// duplicate edges (in either orientation) summed, each with a warning on
// std::cerr. Errors carry the source name and line number.
GsetGraph parse_gset(std::istream& in, const std::string& source = "<stream>");
// Throws IoError when the file cannot be opened.
GsetGraph load_gset(const std::filesystem::path& path);
void write_gset(std::ostream& out, const GsetGraph& g);
void save_gset(const std::filesystem::path& path, const GsetGraph& g);

// Relative paths are tried as given, then under $WPMM_DATA_DIR.
std::filesystem::path resolve_data_path(const std::filesystem::path& path);

// Erdos-Renyi G(n, p) with unit weights.
GsetGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

// C = D - W
linalg::DenseMatrix laplacian(const GsetGraph& g);

}  // namespace wpmm::harness
