#include "commands.hpp"

#include <chaomarket/bimap.hpp>
#include <chaomarket/config.hpp>
#include <chaomarket/error.hpp>
#include <chaomarket/experiment.hpp>
#include <chaomarket/io.hpp>
#include <chaomarket/market.hpp>
#include <chaomarket/statistics.hpp>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <json.hpp>

namespace chaomarket::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kDefaultAttractorSamples = 2000;
constexpr std::size_t kDefaultSpectrumSamples = 4096;
constexpr double kConservationTolerance = 1e-9;

KeyValueDocument load_document(const CliInvocation& inv, KeyValueDocument base = {}) {
  if (inv.config_path) {
    const KeyValueDocument file = KeyValueDocument::load(*inv.config_path);
    for (const auto& [key, setting] : file.entries())
      base.set(key, setting.value, SettingSource::file);
  }
  for (const auto& o : inv.overrides) base.apply_override(o);
  return base;
}

std::filesystem::path resolve_output_dir(const CliInvocation& inv, const RunSettings& settings) {
  if (inv.output_dir) return *inv.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return settings.output_directory;
}

void report_settings(const RunSettings& settings, const std::filesystem::path& output_dir, Verbosity v,
                     std::ostream& err) {
  if (v == Verbosity::quiet) return;
  for (const auto& [key, setting] : settings.provenance) {
    if (key == "output_directory") continue;
    err << "setting " << key << " = " << setting.value;
    if (setting.source == SettingSource::default_value) err << "  (default)";
    err << '\n';
  }
  err << "setting output_directory = " << output_dir.string() << '\n';
}

int fail(std::string_view kind, int code, const std::string& message, std::optional<std::uint64_t> iteration,
         const std::optional<std::filesystem::path>& dir, std::ostream& err) {
  json record{{"status", "error"}, {"kind", kind}, {"exit_code", code}, {"message", message}};
  if (iteration) record["iteration"] = *iteration;
  err << record.dump() << '\n';
  if (dir) {
    try {
      write_text_file(*dir / "error.json", record.dump(2) + "\n");
    } catch (const std::exception&) {
      // The stderr record is authoritative.
    }
  }
  return code;
}

// Runs `body` and maps exceptions onto the exit-code contract.
template <class Body>
int guarded(std::optional<std::filesystem::path>& dir, std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    return fail("validation", kExitValidation, e.what(), std::nullopt, dir, err);
  } catch (const DomainEscapeError& e) {
    return fail("domain_escape", kExitRuntime, e.what(), e.iteration(), dir, err);
  } catch (const AnalysisError& e) {
    return fail("analysis", kExitRuntime, e.what(), std::nullopt, dir, err);
  } catch (const std::exception& e) {
    return fail("runtime", kExitRuntime, e.what(), std::nullopt, dir, err);
  }
}

void print_analysis(const AnalysisResult& a, std::ostream& out) {
  out << "gini " << format_real(a.gini) << '\n';
  out << "passive agents " << a.classes.passive.size() << '\n';
  out << "never-losers " << a.classes.never_losers.size() << '\n';
  if (a.exponential.fit) out << "exponential fit r2 " << format_real(a.exponential.fit->r_squared) << '\n';
  if (a.power_law.fit) {
    out << "power-law fit r2 " << format_real(a.power_law.fit->r_squared) << " alpha "
        << format_real(a.power_law.fit->parameter) << '\n';
  }
}

}  // namespace

int cmd_simulate(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  std::optional<std::filesystem::path> dir = inv.output_dir;
  return guarded(dir, err, [&] {
    const RunSettings settings = resolve_settings(load_document(inv));
    dir = resolve_output_dir(inv, settings);
    report_settings(settings, *dir, inv.verbosity, err);

    const SimulationOutput sim = run_simulation(settings.market);
    const double expected = static_cast<double>(settings.market.n_agents) * settings.market.initial_money;
    const double drift = std::abs(sim.final_ledger.total() - expected) / expected;
    if (drift > kConservationTolerance)
      throw std::runtime_error("money not conserved: relative drift " + format_real(drift));

    const AnalysisResult analysis = analyze(sim.final_ledger.money(), sim.stats, settings.analysis);
    write_simulation_artifacts(*dir, sim, settings.analysis);
    write_analysis_artifacts(*dir, analysis);

    out << "transactions " << sim.elapsed_transactions << " (self-pairs " << sim.stats.self_pairs << ", executed "
        << sim.stats.executed << ")\n";
    out << "total money " << format_real(sim.final_ledger.total()) << " relative drift " << format_real(drift) << '\n';
    print_analysis(analysis, out);
    if (inv.verbosity != Verbosity::quiet) err << "artifacts written to " << dir->string() << '\n';
    return kExitOk;
  });
}

int cmd_sweep(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  std::optional<std::filesystem::path> dir = inv.output_dir;
  return guarded(dir, err, [&] {
    RunSettings settings = resolve_settings(load_document(inv));
    dir = resolve_output_dir(inv, settings);
    settings.output_directory = *dir;
    report_settings(settings, *dir, inv.verbosity, err);

    const SweepSummary summary = run_sweep(make_sweep_spec(settings));
    for (const SweepRow& row : summary.rows) {
      out << "lambda_b " << format_real(row.lambda_b) << ' ';
      if (row.ok) {
        out << "gini " << format_real(row.gini) << " passive " << row.passive << " never-losers " << row.never_losers
            << '\n';
      } else {
        out << "FAILED " << row.error << '\n';
      }
    }
    if (summary.succeeded() == 0) {
      return fail("runtime", kExitRuntime, "every sweep run failed", std::nullopt, dir, err);
    }
    return kExitOk;
  });
}

int cmd_attractor(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  std::optional<std::filesystem::path> dir = inv.output_dir;
  return guarded(dir, err, [&] {
    const RunSettings settings = resolve_settings(load_document(inv));
    dir = resolve_output_dir(inv, settings);
    report_settings(settings, *dir, inv.verbosity, err);

    const std::size_t samples = settings.samples.value_or(kDefaultAttractorSamples);
    const Trajectory t =
        trajectory(settings.market.bimap_initial, settings.market.bimap_params, settings.market.burn_in, samples);
    write_trajectory_csv(*dir / "attractor.csv", t);
    out << "attractor points " << t.points.size() << " after burn-in " << t.burn_in_discarded << '\n';
    return kExitOk;
  });
}

int cmd_spectrum(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  std::optional<std::filesystem::path> dir = inv.output_dir;
  return guarded(dir, err, [&] {
    const RunSettings settings = resolve_settings(load_document(inv));
    dir = resolve_output_dir(inv, settings);
    report_settings(settings, *dir, inv.verbosity, err);

    const std::size_t samples = settings.samples.value_or(kDefaultSpectrumSamples);
    std::vector<double> series;
    if (inv.constant_series) {
      series.assign(samples, *inv.constant_series);
    } else {
      series = x_series(
          trajectory(settings.market.bimap_initial, settings.market.bimap_params, settings.market.burn_in, samples));
    }
    const Spectrum spectrum = power_spectrum(series);
    const SpectralPeak peak = find_spectral_peak(spectrum);
    write_spectrum_csv(*dir / "spectrum.csv", spectrum);
    write_text_file(*dir / "spectrum_peak.json",
                    json{{"frequency", peak.frequency}, {"magnitude", peak.magnitude}, {"samples", samples}}.dump(2) +
                        "\n");
    out << "peak frequency " << format_real(peak.frequency) << " magnitude " << format_real(peak.magnitude) << '\n';
    return kExitOk;
  });
}

int cmd_analyze(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  std::optional<std::filesystem::path> dir = inv.output_dir;
  return guarded(dir, err, [&] {
    std::filesystem::path input;
    if (inv.input_dir) {
      input = *inv.input_dir;
    } else if (inv.output_dir) {
      input = *inv.output_dir;
    } else {
      throw ValidationError("analyze needs --input or --output-dir pointing at simulation artifacts");
    }
    // Settings start from the run's own echo so defaults match the run.
    KeyValueDocument base;
    if (std::filesystem::exists(input / "config.cfg")) base = KeyValueDocument::load(input / "config.cfg");
    const RunSettings settings = resolve_settings(load_document(inv, std::move(base)));
    if (!dir) dir = input;
    report_settings(settings, *dir, inv.verbosity, err);

    const std::vector<double> money = read_final_money_csv(input / "final_money.csv");
    const StoredRun run = read_simulation_json(input / "simulation.json");
    if (run.n_agents != money.size())
      throw ValidationError("final_money.csv has " + std::to_string(money.size()) + " agents but simulation.json has " +
                            std::to_string(run.n_agents));

    const AnalysisResult analysis = analyze(money, run.stats, settings.analysis);
    write_analysis_artifacts(*dir, analysis);
    print_analysis(analysis, out);
    return kExitOk;
  });
}

int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  switch (inv.command) {
    case Command::simulate:
      return cmd_simulate(inv, out, err);
    case Command::sweep:
      return cmd_sweep(inv, out, err);
    case Command::attractor:
      return cmd_attractor(inv, out, err);
    case Command::spectrum:
      return cmd_spectrum(inv, out, err);
    case Command::analyze:
      return cmd_analyze(inv, out, err);
  }
  return kExitValidation;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chaotic gas-like market simulator"};
  app.require_subcommand(1);

  struct Bound {
    std::string config_path, output_dir, input_dir;
    std::vector<std::string> overrides;
    double constant = 0.0;
    bool verbose = false, quiet = false;
    CLI::Option* constant_opt = nullptr;
  };

  struct Entry {
    const char* name;
    const char* help;
    Command command;
  };
  const Entry entries[] = {
      {"simulate", "run one market simulation and its analyses", Command::simulate},
      {"sweep", "run a lambda_b sweep and write sweep_summary.csv", Command::sweep},
      {"attractor", "write bimap trajectory points (attractor.csv)", Command::attractor},
      {"spectrum", "write the x_t magnitude spectrum and its peak", Command::spectrum},
      {"analyze", "recompute analyses from stored simulation artifacts", Command::analyze},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  std::vector<std::unique_ptr<Bound>> bound;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    auto& b = *bound.emplace_back(std::make_unique<Bound>());
    sub->add_option("-c,--config", b.config_path, "key-value config file");
    sub->add_option("-s,--set", b.overrides, "override a config key (key=value), repeatable");
    sub->add_option("-o,--output-dir", b.output_dir,
                    "artifact directory (overrides config and " + std::string(kOutputDirEnv) + ")");
    sub->add_flag("-v,--verbose", b.verbose, "more output");
    sub->add_flag("-q,--quiet", b.quiet, "suppress the settings report");
    if (e.command == Command::analyze) sub->add_option("-i,--input", b.input_dir, "directory with simulation artifacts");
    if (e.command == Command::spectrum)
      b.constant_opt = sub->add_option("--constant-series", b.constant, "analyse a constant series instead (test hook)");
    subs.emplace_back(sub, e.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  CliInvocation inv;
  for (std::size_t k = 0; k < subs.size(); ++k) {
    if (!subs[k].first->parsed()) continue;
    const Bound& b = *bound[k];
    inv.command = subs[k].second;
    inv.overrides = b.overrides;
    if (!b.config_path.empty()) inv.config_path = b.config_path;
    if (!b.output_dir.empty()) inv.output_dir = b.output_dir;
    if (!b.input_dir.empty()) inv.input_dir = b.input_dir;
    if (b.constant_opt != nullptr && b.constant_opt->count() > 0) inv.constant_series = b.constant;
    inv.verbosity = b.quiet ? Verbosity::quiet : (b.verbose ? Verbosity::verbose : Verbosity::normal);
  }
  return dispatch(inv, out, err);
}

}  // namespace chaomarket::cli
