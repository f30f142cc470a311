#include "chaomarket/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "chaomarket/error.hpp"
#include "chaomarket/io.hpp"

namespace chaomarket {

std::vector<double> lambda_values(const LambdaSchedule& schedule) {
  if (const auto* list = std::get_if<std::vector<double>>(&schedule)) return *list;
  const auto& range = std::get<LambdaRange>(schedule);
  std::vector<double> out;
  out.reserve(range.count);
  for (std::size_t k = 0; k < range.count; ++k) out.push_back(range.start + static_cast<double>(k) * range.step);
  return out;
}

std::vector<MarketConfig> expand_sweep(const SweepSpec& spec) {
  const std::vector<double> values = lambda_values(spec.lambda_b_values);
  if (values.empty()) throw ValidationError("sweep has no lambda_b values");
  std::vector<MarketConfig> configs;
  configs.reserve(values.size());
  for (double lb : values) {
    if (!BimapParams::in_chaotic_interval(lb)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "sweep lambda_b " << lb << " outside [" << kChaoticLambdaMin << ", " << kChaoticLambdaMax << "]";
      throw ValidationError(msg.str());
    }
    MarketConfig c = spec.base_config;
    c.bimap_params = BimapParams(c.bimap_params.lambda_a(), lb);
    configs.push_back(std::move(c));
  }
  return configs;
}

std::size_t SweepSummary::succeeded() const noexcept {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok; }));
}

namespace {

std::string run_directory_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%03zu", k);
  return buf;
}

SweepRow execute(const MarketConfig& config, const SweepSpec& spec, std::size_t k) {
  SweepRow row;
  row.lambda_b = config.bimap_params.lambda_b();
  try {
    const SimulationOutput out = run_simulation(config);
    const AnalysisResult a = analyze(out.final_ledger.money(), out.stats, spec.analysis);
    row.gini = a.gini;
    if (a.exponential.fit) row.exponential_r2 = a.exponential.fit->r_squared;
    if (a.power_law.fit) {
      row.power_law_r2 = a.power_law.fit->r_squared;
      row.power_law_alpha = a.power_law.fit->parameter;
    }
    row.passive = a.classes.passive.size();
    row.never_losers = a.classes.never_losers.size();
    row.richest_share = a.richest_share;
    if (!spec.output_directory.empty()) {
      row.run_directory = spec.output_directory / run_directory_name(k);
      write_simulation_artifacts(row.run_directory, out, spec.analysis);
      write_analysis_artifacts(row.run_directory, a);
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepSummary run_sweep(const SweepSpec& spec) {
  const std::vector<MarketConfig> configs = expand_sweep(spec);
  std::vector<SweepRow> rows(configs.size());

  const std::size_t workers = std::clamp<std::size_t>(spec.parallel_runs, 1, configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next.fetch_add(1); k < configs.size(); k = next.fetch_add(1)) {
      rows[k] = execute(configs[k], spec, k);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  SweepSummary summary;
  summary.rows = std::move(rows);
  std::stable_sort(summary.rows.begin(), summary.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.lambda_b < b.lambda_b; });
  if (!spec.output_directory.empty()) write_sweep_summary(summary, spec.output_directory / "sweep_summary.csv");
  return summary;
}

void write_sweep_summary(const SweepSummary& summary, const std::filesystem::path& path) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  std::string s =
      "lambda_b,status,gini,exponential_r2,power_law_r2,power_law_alpha,passive,never_losers,richest_share,run_directory,"
      "error\n";
  for (const SweepRow& r : summary.rows) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    s += format_real(r.lambda_b) + ',' + (r.ok ? "ok" : "failed") + ',' + (r.ok ? format_real(r.gini) : "") + ',' +
         opt(r.exponential_r2) + ',' + opt(r.power_law_r2) + ',' + opt(r.power_law_alpha) + ',' +
         (r.ok ? std::to_string(r.passive) : "") + ',' + (r.ok ? std::to_string(r.never_losers) : "") + ',' +
         (r.ok ? format_real(r.richest_share) : "") + ',' + r.run_directory.filename().string() + ',' + error + '\n';
  }
  write_text_file(path, s);
}

}  // namespace chaomarket
