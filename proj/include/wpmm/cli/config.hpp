#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "wpmm/harness/cme.hpp"
#include "wpmm/solver/wpmm.hpp"

namespace wpmm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCertificate = 1,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitIo = 4,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shared by every experiment command.
struct RunSettings {
  solver::SolverConfig solver;
  // Per-variant penalties; a variant without one uses solver.rho.
  std::optional<double> rho_mean;
  std::optional<double> rho_last;
  std::size_t trials = 1;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "wpmm_out";
  // Convergence threshold reported in the summary (generic command).
  double tol = 1e-8;
};

struct CmeCommandConfig {
  harness::CmeConfig cme;
  // 0 means k_hat = r.
  std::size_t rank = 0;
  RunSettings run;
};

struct MaxCutCommandConfig {
  // Gset file; when empty an Erdos-Renyi graph is generated.
  std::filesystem::path graph;
  std::size_t random_n = 40;
  double random_p = 0.2;
  std::size_t rank = 10;
  RunSettings run;
};

struct GenericCommandConfig {
  std::filesystem::path problem;
  RunSettings run;
};

// Configs are assembled as JSON objects (preset, then file, then flags) and
// converted once. Unknown keys and ill-typed values raise ConfigError.
nlohmann::json cme_preset(const std::string& name, std::size_t r);
nlohmann::json maxcut_preset(const std::string& name);

CmeCommandConfig cme_config_from_json(const nlohmann::json& j);
MaxCutCommandConfig maxcut_config_from_json(const nlohmann::json& j);
GenericCommandConfig generic_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CmeCommandConfig& c);
nlohmann::json to_json(const MaxCutCommandConfig& c);
nlohmann::json to_json(const GenericCommandConfig& c);

// Parses a JSON file; syntax errors become ConfigError with line and column.
nlohmann::json read_json_file(const std::filesystem::path& path);
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

// b's keys overwrite a's (shallow).
nlohmann::json merge(nlohmann::json a, const nlohmann::json& b);

}  // namespace wpmm::cli
