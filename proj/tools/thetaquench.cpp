// Command line front end. One subcommand per pipeline; every config key is
// also a flag (underscores become dashes), and flags override --config.

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "thetaquench/errors.hpp"
#include "thetaquench/runner.hpp"

namespace {

struct Sub {
  tq::Mode mode;
  const char* help;
};

constexpr Sub kSubs[] = {
    {tq::Mode::FreePhase, "phase field of g(k,t) = L_k(t) and its vortices (free theory)"},
    {tq::Mode::FreeRate, "rate function, nu(t) and kink slopes (free theory)"},
    {tq::Mode::FreeNu, "nu(t), rate function and vortices (free theory)"},
    {tq::Mode::EdRun, "exact-diagonalization quench at one coupling"},
    {tq::Mode::EdScan, "exact-diagonalization quench over a grid of couplings"},
};

std::string flag_name(std::string key) {
  for (auto& ch : key)
    if (ch == '_') ch = '-';
  return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical topological transitions after theta quenches in the Schwinger model"};
  app.set_version_flag("--version", THETAQUENCH_VERSION);
  app.require_subcommand(1);

  std::map<std::string, std::string> config_path, out_dir;
  std::map<std::string, std::map<std::string, std::string>> flags;
  for (const auto& s : kSubs) {
    const std::string name(tq::mode_name(s.mode));
    auto* sub = app.add_subcommand(name, s.help);
    sub->add_option("--config", config_path[name], "key=value config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir[name], "output directory");
    for (const auto& key : tq::config_keys())
      if (key != "out") sub->add_option(flag_name(key), flags[name][key], "config key " + key);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? tq::kExitOk : tq::kExitValidation;
  }

  for (const auto& s : kSubs) {
    const std::string name(tq::mode_name(s.mode));
    auto* sub = app.get_subcommand(name);
    if (!sub->parsed()) continue;
    try {
      tq::KeyValues kv;
      if (!config_path[name].empty()) kv = tq::read_config_file(config_path[name]);
      for (const auto& key : tq::config_keys())
        if (key != "out" && sub->count(flag_name(key)) > 0) kv.emplace_back(key, flags[name][key]);
      if (!out_dir[name].empty()) kv.emplace_back("out", out_dir[name]);
      const tq::RunConfig cfg = tq::make_config(s.mode, kv);
      const tq::RunResult r = tq::run(cfg, &std::cerr);
      if (r.exit_code != tq::kExitOk) {
        std::cerr << "error: " << r.message << '\n';
        return r.exit_code;
      }
      for (const auto& f : r.files) std::cout << (cfg.out / f).string() << '\n';
      return tq::kExitOk;
    } catch (const tq::ValidationError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return tq::kExitValidation;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return tq::kExitNumerical;
    }
  }
  return tq::kExitValidation;
}
