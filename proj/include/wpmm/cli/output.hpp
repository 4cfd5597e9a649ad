#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace wpmm::cli {

inline constexpr const char* kCsvHeader = "trial,t,objective,feasibility,al_value,eta_used,elapsed_seconds,variant";

struct ResultRow {
  std::size_t trial = 0;
  std::size_t t = 0;
  double objective = 0.0;
  double feasibility = 0.0;
  double al_value = 0.0;
  double eta_used = 0.0;
  double elapsed_seconds = 0.0;
  std::string variant;
};

// %.17g, round-trippable.
std::string format_number(double v);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& in);

// Per variant: arithmetic means over trials of the final row and of every t.
nlohmann::json summarize(const std::vector<ResultRow>& rows);

// Plain-text matplotlib script reading trace.csv next to it.
std::string plot_script();

// Writes trace.csv, summary.json and plot_trace.py into dir. Throws IoError.
void write_outputs(const std::filesystem::path& dir, const std::vector<ResultRow>& rows, const nlohmann::json& summary);

}  // namespace wpmm::cli
