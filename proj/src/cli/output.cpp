#include "wpmm/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "wpmm/errors.hpp"

namespace wpmm::cli {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.trial << ',' << r.t << ',' << format_number(r.objective) << ',' << format_number(r.feasibility) << ','
        << format_number(r.al_value) << ',' << format_number(r.eta_used) << ',' << format_number(r.elapsed_seconds)
        << ',' << r.variant << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw IoError("trace: unexpected CSV header");
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw IoError("trace:" + std::to_string(lineno) + ": expected 8 fields");
    ResultRow r;
    try {
      r.trial = std::stoul(f[0]);
      r.t = std::stoul(f[1]);
      r.objective = std::stod(f[2]);
      r.feasibility = std::stod(f[3]);
      r.al_value = std::stod(f[4]);
      r.eta_used = std::stod(f[5]);
      r.elapsed_seconds = std::stod(f[6]);
    } catch (const std::exception&) {
      throw IoError("trace:" + std::to_string(lineno) + ": malformed number");
    }
    r.variant = f[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

json summarize(const std::vector<ResultRow>& rows) {
  struct Acc {
    double objective = 0, feasibility = 0, al_value = 0;
    std::size_t n = 0;
  };
  // variant -> t -> sums; variant -> trial -> last row.
  std::map<std::string, std::map<std::size_t, Acc>> by_t;
  std::map<std::string, std::map<std::size_t, const ResultRow*>> last;
  for (const auto& r : rows) {
    Acc& a = by_t[r.variant][r.t];
    a.objective += r.objective;
    a.feasibility += r.feasibility;
    a.al_value += r.al_value;
    ++a.n;
    const ResultRow*& slot = last[r.variant][r.trial];
    if (!slot || slot->t < r.t) slot = &r;
  }
  json out = json::object();
  for (const auto& [variant, series] : by_t) {
    json curves = {{"t", json::array()}, {"objective", json::array()}, {"feasibility", json::array()},
                   {"al_value", json::array()}, {"trials", json::array()}};
    for (const auto& [t, a] : series) {
      const double n = static_cast<double>(a.n);
      curves["t"].push_back(t);
      curves["objective"].push_back(a.objective / n);
      curves["feasibility"].push_back(a.feasibility / n);
      curves["al_value"].push_back(a.al_value / n);
      curves["trials"].push_back(a.n);
    }
    Acc fin;
    for (const auto& [trial, row] : last.at(variant)) {
      fin.objective += row->objective;
      fin.feasibility += row->feasibility;
      fin.al_value += row->al_value;
      ++fin.n;
    }
    const double n = static_cast<double>(fin.n);
    out[variant] = {{"final",
                     {{"objective", fin.objective / n},
                      {"feasibility", fin.feasibility / n},
                      {"al_value", fin.al_value / n},
                      {"trials", fin.n}}},
                    {"curves", std::move(curves)}};
  }
  return out;
}

std::string plot_script() {
  return R"(# Plots the mean curves of trace.csv (requires pandas and matplotlib).
import sys
import pandas as pd
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "trace.csv"
df = pd.read_csv(path)
mean = df.groupby(["variant", "t"])[["objective", "feasibility"]].mean().reset_index()
fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for variant, part in mean.groupby("variant"):
    axes[0].plot(part["t"], part["objective"], label=variant)
    axes[1].semilogy(part["t"], part["feasibility"], label=variant)
axes[0].set_xlabel("iteration")
axes[0].set_ylabel("objective")
axes[1].set_xlabel("iteration")
axes[1].set_ylabel("feasibility")
axes[0].legend()
fig.tight_layout()
fig.savefig("trace.png", dpi=150)
)";
}

void write_outputs(const std::filesystem::path& dir, const std::vector<ResultRow>& rows, const json& summary) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw IoError("cannot write " + (dir / name).string());
    return f;
  };
  {
    std::ofstream f = open("trace.csv");
    write_csv(f, rows);
    if (!f) throw IoError("write failed for trace.csv");
  }
  {
    std::ofstream f = open("summary.json");
    f << summary.dump(2) << '\n';
    if (!f) throw IoError("write failed for summary.json");
  }
  {
    std::ofstream f = open("plot_trace.py");
    f << plot_script();
  }
}

}  // namespace wpmm::cli
