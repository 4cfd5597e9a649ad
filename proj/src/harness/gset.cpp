#include "wpmm/harness/gset.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "wpmm/errors.hpp"
#include "wpmm/rng.hpp"

namespace wpmm::harness {

namespace {

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw IoError(source + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

GsetGraph parse_gset(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t declared = 0;
  GsetGraph g;
  bool header = false;
  while (!header && std::getline(in, line)) {
    ++lineno;
    const auto f = fields(line);
    if (f.empty()) continue;
    if (f.size() != 2 || !parse_number(f[0], g.n) || !parse_number(f[1], declared))
      fail(source, lineno, "expected header 'n m'");
    if (g.n == 0) fail(source, lineno, "graph has no nodes");
    header = true;
  }
  if (!header) fail(source, lineno, "empty file");

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::size_t parsed = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = fields(line);
    if (f.empty()) continue;
    Edge e;
    if (f.size() != 3 || !parse_number(f[0], e.u) || !parse_number(f[1], e.v) || !parse_number(f[2], e.w))
      fail(source, lineno, "expected 'u v w'");
    if (e.u < 1 || e.u > g.n || e.v < 1 || e.v > g.n)
      fail(source, lineno, "vertex out of range 1.." + std::to_string(g.n));
    ++parsed;
    if (e.u == e.v) {
      std::cerr << "warning: " << source << ":" << lineno << ": self-loop on vertex " << e.u << " dropped\n";
      continue;
    }
    const auto key = std::minmax(e.u, e.v);
    auto it = index.find(key);
    if (it != index.end()) {
      std::cerr << "warning: " << source << ":" << lineno << ": duplicate edge (" << e.u << ", " << e.v
                << ") summed\n";
      g.edges[it->second].w += e.w;
      continue;
    }
    index.emplace(key, g.edges.size());
    g.edges.push_back(e);
  }
  if (parsed != declared)
    fail(source, lineno, "header declares " + std::to_string(declared) + " edges, found " + std::to_string(parsed));
  return g;
}

GsetGraph load_gset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file " + path.string());
  return parse_gset(in, path.string());
}

void write_gset(std::ostream& out, const GsetGraph& g) {
  out << g.n << ' ' << g.edges.size() << '\n';
  for (const Edge& e : g.edges) {
    std::ostringstream w;
    w.precision(17);
    w << e.w;
    out << e.u << ' ' << e.v << ' ' << w.str() << '\n';
  }
}

void save_gset(const std::filesystem::path& path, const GsetGraph& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write graph file " + path.string());
  write_gset(out, g);
  if (!out) throw IoError("write failed for " + path.string());
}

std::filesystem::path resolve_data_path(const std::filesystem::path& path) {
  if (std::filesystem::exists(path) || path.is_absolute()) return path;
  if (const char* dir = std::getenv("WPMM_DATA_DIR")) {
    const std::filesystem::path candidate = std::filesystem::path(dir) / path;
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return path;
}

GsetGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("erdos_renyi: n must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("erdos_renyi: p must lie in [0, 1]");
  Rng rng(seed);
  GsetGraph g;
  g.n = n;
  for (std::size_t u = 1; u <= n; ++u)
    for (std::size_t v = u + 1; v <= n; ++v)
      if (rng.uniform() < p) g.edges.push_back({u, v, 1.0});
  return g;
}

linalg::DenseMatrix laplacian(const GsetGraph& g) {
  linalg::DenseMatrix c(g.n, g.n);
  for (const Edge& e : g.edges) {
    if (e.u < 1 || e.u > g.n || e.v < 1 || e.v > g.n) throw InvalidArgument("laplacian: vertex out of range");
    if (e.u == e.v) continue;
    const std::size_t a = e.u - 1, b = e.v - 1;
    c(a, b) -= e.w;
    c(b, a) -= e.w;
    c(a, a) += e.w;
    c(b, b) += e.w;
  }
  return c;
}

}  // namespace wpmm::harness
