#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "qlatt/runner.hpp"

namespace {

qlatt::Task parse_task(const std::string& name) {
  if (name == "mgf") return qlatt::Task::Mgf;
  if (name == "rate") return qlatt::Task::Rate;
  if (name == "verify") return qlatt::Task::Verify;
  if (name == "probe") return qlatt::Task::Probe;
  throw qlatt::ConfigError("unknown task '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deviation statistics of quantum lattice chains: moment generating"
               " functions, rate functions, bound verification and decay probes"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::vector<std::string> task_names;
  int threads = 0;
  long long seed = -1;
  bool force = false;
  std::string out_dir;

  app.add_option("--config", config_path, "run configuration (JSON)");
  app.add_option("--task", task_names, "override the configured tasks (mgf|rate|verify|probe)");
  app.add_option("--threads", threads, "worker thread count");
  app.add_option("--seed", seed, "seed for the randomized verification suites");
  app.add_flag("--force", force, "proceed past certificate failures");
  app.add_option("--out", out_dir, "output directory");

  CLI::App* describe = app.add_subcommand("describe", "print a one-model summary");
  std::vector<std::string> spec_words;
  describe->add_option("spec", spec_words, "model spec, e.g. \"hubbard L=2\"")
      ->required()
      ->expected(-1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (*describe) {
    std::string joined;
    for (const std::string& w : spec_words) {
      if (!joined.empty()) joined += ' ';
      joined += w;
    }
    return qlatt::describe_model(joined, std::cout);
  }

  if (config_path.empty()) {
    std::cerr << "error: --config is required\n";
    return 2;
  }

  try {
    qlatt::RunConfig config = qlatt::load_run_config(config_path);
    if (!task_names.empty()) {
      config.tasks.clear();
      for (const std::string& name : task_names) {
        const qlatt::Task t = parse_task(name);
        if (std::find(config.tasks.begin(), config.tasks.end(), t) == config.tasks.end())
          config.tasks.push_back(t);
      }
      const bool wants_rate =
          std::find(config.tasks.begin(), config.tasks.end(), qlatt::Task::Rate) !=
          config.tasks.end();
      const bool wants_probe =
          std::find(config.tasks.begin(), config.tasks.end(), qlatt::Task::Probe) !=
          config.tasks.end();
      if (wants_probe && !config.probe_set)
        throw qlatt::ConfigError("probe task requires a \"probe\" interval in the config");
      if ((wants_rate || wants_probe) && config.lengths.size() < 3)
        throw qlatt::ConfigError("rate and probe tasks need at least three volumes");
    }
    if (threads > 0) config.threads = threads;
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    if (force) config.force = true;
    if (!out_dir.empty()) config.out_dir = out_dir;

    const qlatt::RunOutcome outcome = qlatt::run_tasks(config);
    for (const std::string& note : outcome.notes) std::cerr << "note: " << note << "\n";
    for (const qlatt::SuiteResult& s : outcome.suites)
      std::cout << (s.pass ? "pass" : "FAIL") << "  " << s.name << "  "
                << qlatt::format_real(s.value) << "  " << s.note << "\n";
    for (const qlatt::Artifact& a : outcome.artifacts)
      std::cout << "wrote " << (config.out_dir / a.name).string() << " (" << a.bytes
                << " bytes)\n";
    return outcome.exit_code;
  } catch (const qlatt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
