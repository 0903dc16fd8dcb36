// ardlkit command-line front end.
//
//   ardlkit run <config.json> [--threads N]
//   ardlkit fetch <url> <out.csv>
//   ardlkit plots <bundle-dir> --format svg|csv
//   ardlkit simulate --family F --variant V --k K --n N [--reps R] [--seed S] [--probs p1,p2]
//
// Exit status: 0 success, 1 one or more stages failed, 2 bad invocation or
// configuration, 3 network or schema failure, 4 missing plot data.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ardlkit/critical_values.hpp"
#include "ardlkit/error.hpp"
#include "ardlkit/pipeline.hpp"

using namespace ardlkit;

namespace {

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NetworkError:
    case ErrorCode::SchemaError:
      return 3;
    case ErrorCode::MissingArtifact:
      return 4;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ARDL / VAR cointegration and causality toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Execute a pipeline config and write the report bundle");
  run->add_option("config", config_path, "Pipeline config (JSON) or a bundle manifest.json")->required()->check(CLI::ExistingFile);
  run->add_option("--threads", threads, "Override the config's thread count");

  std::string url, out;
  auto* fetch_cmd = app.add_subcommand("fetch", "Download a CSV data file");
  fetch_cmd->add_option("url", url)->required();
  fetch_cmd->add_option("out", out)->required();

  std::string bundle_dir, format = "svg";
  auto* plots = app.add_subcommand("plots", "Render plot data of a bundle");
  plots->add_option("bundle", bundle_dir)->required()->check(CLI::ExistingDirectory);
  plots->add_option("--format", format)->check(CLI::IsMember({"svg", "csv"}));

  SimulationSpec sim;
  std::string probs;
  auto* simulate = app.add_subcommand("simulate", "Simulate critical values and print table records");
  simulate->add_option("--family", sim.family)->required()->check(CLI::IsMember({"df", "kpss", "johansen", "bounds", "cusumq"}));
  simulate->add_option("--variant", sim.variant)->required();
  simulate->add_option("--k", sim.k);
  simulate->add_option("--n", sim.n)->required();
  simulate->add_option("--reps", sim.replications);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--probs", probs, "Comma-separated CDF probabilities");
  simulate->add_option("--threads", sim.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      PipelineConfig cfg = PipelineConfig::load(config_path);
      if (threads > 0) cfg.threads = threads;
      const ReportBundle b = run_pipeline(cfg);
      std::cout << "bundle: " << b.dir.string() << "\n";
      for (const auto& [name, text] : b.artifacts) std::cout << "  " << name << " (" << text.size() << " bytes)\n";
      if (!b.manifest["warnings"].empty())
        for (const auto& w : b.manifest["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
      if (!b.ok()) {
        std::cerr << "failed stages:";
        for (const auto& s : b.failed_stages()) std::cerr << " " << s;
        std::cerr << "\n";
        for (const auto& s : b.stages)
          if (!s.ok) std::cerr << "  " << s.stage << ": " << s.error << "\n";
        return 1;
      }
    } else if (*fetch_cmd) {
      const FetchResult r = fetch(url, out);
      std::cout << r.sha256 << "  " << r.path.string() << " (" << r.bytes << " bytes)\n";
    } else if (*plots) {
      for (const auto& p : emit_plots(bundle_dir, format == "svg" ? PlotFormat::Svg : PlotFormat::Csv))
        std::cout << p.string() << "\n";
    } else if (*simulate) {
      std::stringstream ss(probs);
      std::string tok;
      while (std::getline(ss, tok, ',')) sim.probs.push_back(std::stod(tok));
      std::cout << simulate_table(sim).records();
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
