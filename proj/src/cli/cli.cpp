#include <CLI11.hpp>

#include "wpmm/cli/commands.hpp"
#include "wpmm/errors.hpp"

namespace wpmm::cli {

using nlohmann::json;

namespace {

// Flags land in a JSON object so that they merge over the file and preset.
struct Layers {
  std::string config_file;
  std::string preset;
  json flags = json::object();
};

template <class T>
void flag(CLI::App* app, json& flags, const std::string& name, const char* key, const std::string& help) {
  app->add_option_function<T>(name, [&flags, key](const T& v) { flags[key] = v; }, help);
}

void run_flags(CLI::App* app, Layers& l) {
  app->add_option("--config", l.config_file, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--preset", l.preset, "named preset");
  flag<std::size_t>(app, l.flags, "--iters,-T", "iters", "iterations per trial");
  flag<double>(app, l.flags, "--rho", "rho", "penalty parameter");
  flag<double>(app, l.flags, "--rho-mean", "rho_mean", "penalty for the mean output");
  flag<double>(app, l.flags, "--rho-last", "rho_last", "penalty for the last output");
  flag<double>(app, l.flags, "--mu", "mu", "dual step");
  flag<double>(app, l.flags, "--eta", "eta", "primal step (fixed) or base step (line search)");
  flag<std::string>(app, l.flags, "--step-policy", "step_policy", "theoretical, line_search or fixed");
  flag<std::string>(app, l.flags, "--variant", "variant", "mean, last or both");
  flag<double>(app, l.flags, "--lambda", "lambda", "override of the oracle lambda");
  flag<double>(app, l.flags, "--c-dual-bound", "c_dual_bound", "c >= 2 ||w*||");
  flag<std::size_t>(app, l.flags, "--trials", "trials", "independent trials");
  flag<std::size_t>(app, l.flags, "--jobs,-j", "jobs", "worker threads");
  flag<std::uint64_t>(app, l.flags, "--seed", "seed", "base seed; trial i uses seed + i");
  flag<std::string>(app, l.flags, "--out,-o", "out", "output directory");
  flag<double>(app, l.flags, "--tol", "tol", "convergence threshold (generic)");
}

json file_layer(const Layers& l) { return l.config_file.empty() ? json::object() : read_json_file(l.config_file); }

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak proximal method of multipliers: experiments and certificates", "wpmm"};
  app.require_subcommand(1);

  Layers cme_l, maxcut_l, generic_l;
  auto* cme = app.add_subcommand("cme", "covariance matrix estimation on synthetic blocks");
  run_flags(cme, cme_l);
  flag<std::size_t>(cme, cme_l.flags, "--d", "d", "matrix dimension");
  flag<std::size_t>(cme, cme_l.flags, "--r", "r", "number of diagonal blocks");
  flag<double>(cme, cme_l.flags, "--noise-sigma", "noise_sigma", "sample noise level");
  flag<double>(cme, cme_l.flags, "--entry-threshold", "entry_threshold", "entry sparsification threshold");
  flag<std::size_t>(cme, cme_l.flags, "--rank", "rank", "oracle rank k_hat (default r)");

  auto* maxcut = app.add_subcommand("maxcut", "Max Cut SDP relaxation");
  run_flags(maxcut, maxcut_l);
  flag<std::string>(maxcut, maxcut_l.flags, "--graph", "graph", "Gset file (relative paths also tried under WPMM_DATA_DIR)");
  flag<std::size_t>(maxcut, maxcut_l.flags, "--random-n", "random_n", "Erdos-Renyi vertex count");
  flag<double>(maxcut, maxcut_l.flags, "--random-p", "random_p", "Erdos-Renyi edge probability");
  flag<std::size_t>(maxcut, maxcut_l.flags, "--rank", "rank", "oracle rank k_hat");

  auto* generic = app.add_subcommand("generic", "problem declared in a JSON file");
  run_flags(generic, generic_l);
  std::string problem;
  generic->add_option("problem", problem, "problem JSON file")->required();

  auto* certify = app.add_subcommand("certify", "runtime certificate suites");
  std::string suite = "all";
  std::uint64_t certify_seed = 0;
  certify->add_option("suite", suite, "oracles, decay, ergodic or all")
      ->check(CLI::IsMember({"oracles", "decay", "ergodic", "all"}));
  certify->add_option("--seed", certify_seed, "seed of the oracle audits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Help of a subcommand arrives as a ParseError with exit code 0.
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
      return kExitOk;
    }
    err << e.what() << '\n';
    return kExitConfig;
  }

  if (cme->parsed()) {
    return guarded(err, [&] {
      json file = file_layer(cme_l);
      json merged = merge(file, cme_l.flags);
      if (const std::string name = !cme_l.preset.empty() ? cme_l.preset : file.value("preset", ""); !name.empty()) {
        const std::size_t r = merged.contains("r") ? merged["r"].get<std::size_t>() : harness::CmeConfig{}.r;
        merged = merge(merge(cme_preset(name, r), file), cme_l.flags);
      }
      return cmd_cme(cme_config_from_json(merged), err);
    });
  }
  if (maxcut->parsed()) {
    return guarded(err, [&] {
      json file = file_layer(maxcut_l);
      json merged = merge(file, maxcut_l.flags);
      if (const std::string name = !maxcut_l.preset.empty() ? maxcut_l.preset : file.value("preset", "");
          !name.empty())
        merged = merge(merge(maxcut_preset(name), file), maxcut_l.flags);
      return cmd_maxcut(maxcut_config_from_json(merged), err);
    });
  }
  if (generic->parsed()) {
    return guarded(err, [&] {
      if (!generic_l.preset.empty()) throw ConfigError("generic has no presets");
      json merged = merge(file_layer(generic_l), generic_l.flags);
      merged["problem"] = problem;
      return cmd_generic(generic_config_from_json(merged), err);
    });
  }
  return guarded(err, [&] { return cmd_certify(suite, certify_seed, out); });
}

}  // namespace wpmm::cli
