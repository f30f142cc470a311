#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chaomarket/market.hpp"
#include "chaomarket/statistics.hpp"

namespace chaomarket {

/// lambda_b = start + k * step for k = 0 .. count - 1.
struct LambdaRange {
  double start;
  double step;
  std::size_t count;
};

using LambdaSchedule = std::variant<std::vector<double>, LambdaRange>;

std::vector<double> lambda_values(const LambdaSchedule& schedule);

struct SweepSpec {
  MarketConfig base_config;
  LambdaSchedule lambda_b_values;
  std::filesystem::path output_directory;  // empty: no artifacts written
  std::size_t parallel_runs = 1;
  AnalysisOptions analysis;
};

/// One config per lambda_b, otherwise identical to the base (same seed, same
/// initial condition). Throws ValidationError on an empty schedule or a
/// value outside the chaotic interval.
std::vector<MarketConfig> expand_sweep(const SweepSpec& spec);

struct SweepRow {
  double lambda_b = 0.0;
  bool ok = false;
  std::string error;
  std::filesystem::path run_directory;
  double gini = 0.0;
  std::optional<double> exponential_r2;
  std::optional<double> power_law_r2;
  std::optional<double> power_law_alpha;
  std::size_t passive = 0;
  std::size_t never_losers = 0;
  double richest_share = 0.0;
};

struct SweepSummary {
  std::vector<SweepRow> rows;  // ascending lambda_b

  std::size_t succeeded() const noexcept;
};

/// Runs every expanded config on up to `parallel_runs` threads. A failing run
/// marks its row and leaves the others intact. When an output directory is
/// set, each run gets `run_<k>/` artifacts and the summary is written to
/// `sweep_summary.csv`.
SweepSummary run_sweep(const SweepSpec& spec);

void write_sweep_summary(const SweepSummary& summary, const std::filesystem::path& path);

}  // namespace chaomarket
