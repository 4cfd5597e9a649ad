#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "wpmm/cli/config.hpp"

namespace wpmm::cli {

// Each returns an ExitCode. Progress and errors go to log.
int cmd_cme(const CmeCommandConfig& config, std::ostream& log);
int cmd_maxcut(const MaxCutCommandConfig& config, std::ostream& log);
int cmd_generic(const GenericCommandConfig& config, std::ostream& log);

struct CertifyRow {
  std::string suite;
  std::string check;
  bool passed = false;
  std::string detail;
};

// suite is one of oracles, decay, ergodic, all.
std::vector<CertifyRow> run_certify(const std::string& suite, std::uint64_t seed);
int cmd_certify(const std::string& suite, std::uint64_t seed, std::ostream& out);

// Full command line: wpmm <cme|maxcut|generic|certify> [options].
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wpmm::cli
