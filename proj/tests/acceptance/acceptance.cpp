// Acceptance suite: one pass/fail line per criterion.
//
//   chaomarket_acceptance        run every criterion
//   chaomarket_acceptance 3 7    run only criteria 3 and 7
//
// Exit status is 0 only if every selected criterion passes.

#include <chaomarket/bimap.hpp>
#include <chaomarket/experiment.hpp>
#include <chaomarket/market.hpp>
#include <chaomarket/statistics.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"

using namespace chaomarket;

namespace {

constexpr double kSymmetricLambda = 1.032;
constexpr double kIntermediateLambda = 1.033162;
constexpr double kAsymmetricLambda = 1.08429;

struct Verdict {
  bool pass;
  std::string detail;
};

struct TimedRun {
  SimulationOutput output;
  double seconds;
};

MarketConfig market(std::size_t n, double lambda_b) {
  MarketConfig c;
  c.n_agents = n;
  c.initial_money = 1000.0;
  c.bimap_params = BimapParams(kSymmetricLambda, lambda_b);
  return c;
}

TimedRun timed_run(const MarketConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  SimulationOutput out = run_simulation(c);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return {std::move(out), elapsed.count()};
}

/// Runs shared between criteria are computed once.
const TimedRun& cached_run(std::size_t n, double lambda_b) {
  static std::map<std::pair<std::size_t, double>, TimedRun> cache;
  auto it = cache.find({n, lambda_b});
  if (it == cache.end()) it = cache.emplace(std::make_pair(n, lambda_b), timed_run(market(n, lambda_b))).first;
  return it->second;
}

const AnalysisResult& cached_analysis(std::size_t n, double lambda_b) {
  static std::map<std::pair<std::size_t, double>, AnalysisResult> cache;
  auto it = cache.find({n, lambda_b});
  if (it == cache.end()) {
    const SimulationOutput& out = cached_run(n, lambda_b).output;
    it = cache.emplace(std::make_pair(n, lambda_b), analyze(out.final_ledger.money(), out.stats)).first;
  }
  return it->second;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string r2_of(const FitOutcome& f) { return f.fit ? fmt("%.4f", f.fit->r_squared) : "n/a (" + f.error + ")"; }

Verdict conservation_and_determinism() {
  const MarketConfig c = market(500, kSymmetricLambda);
  const TimedRun first = timed_run(c);
  const TimedRun second = timed_run(c);
  const double expected = 500.0 * 1000.0;
  const double rel = std::abs(first.output.final_ledger.total() - expected) / expected;
  const bool identical = first.output.final_ledger == second.output.final_ledger &&
                         first.output.stats.win_count == second.output.stats.win_count &&
                         first.output.stats.loss_count == second.output.stats.loss_count &&
                         first.output.stats.blocked_count == second.output.stats.blocked_count &&
                         first.output.stats.pair_matrix.nonzero().size() == second.output.stats.pair_matrix.nonzero().size();
  const bool pass = first.output.elapsed_transactions == 500'000 && rel <= 1e-9 && identical && first.seconds < 5.0;
  return {pass, fmt("T=%llu, relative drift %.2e (<= 1e-9), bit-identical repeat: %s, runtime %.2f s (< 5 s)",
                    static_cast<unsigned long long>(first.output.elapsed_transactions), rel, identical ? "yes" : "no",
                    first.seconds)};
}

Verdict exponential_phase() {
  const FitOutcome& f = cached_analysis(500, kSymmetricLambda).exponential;
  const bool pass = f.fit && f.fit->r_squared >= 0.97;
  return {pass, "symmetric N=500 exponential fit r^2 = " + r2_of(f) + " (>= 0.97)"};
}

Verdict power_law_phase() {
  const AnalysisResult& a = cached_analysis(500, kAsymmetricLambda);
  const bool pass = a.power_law.fit && a.tail_exponential.fit && a.power_law.fit->r_squared >= 0.95 &&
                    a.power_law.fit->r_squared > a.tail_exponential.fit->r_squared;
  return {pass, "asymmetric N=500 top-decile power-law r^2 = " + r2_of(a.power_law) + " (>= 0.95), tail exponential r^2 = " +
                    r2_of(a.tail_exponential) + " (must be lower)"};
}

Verdict monotone_transition() {
  SweepSpec spec;
  spec.base_config = market(500, kSymmetricLambda);
  spec.lambda_b_values = std::vector<double>{kSymmetricLambda, kIntermediateLambda, kAsymmetricLambda};
  spec.parallel_runs = 3;
  const SweepSummary s = run_sweep(spec);
  bool pass = s.succeeded() == 3;
  std::string detail = "Gini by lambda_b:";
  for (std::size_t k = 0; k < s.rows.size(); ++k) {
    detail += fmt(" %.6g -> %s", s.rows[k].lambda_b, s.rows[k].ok ? fmt("%.4f", s.rows[k].gini).c_str() : "failed");
    if (k > 0 && !(s.rows[k].gini > s.rows[k - 1].gini)) pass = false;
  }
  return {pass, detail + " (strictly increasing)"};
}

Verdict passive_agents() {
  const std::size_t small = cached_analysis(500, kSymmetricLambda).classes.passive.size();
  const TimedRun& big_run = cached_run(5000, kSymmetricLambda);
  const std::size_t big = classify_agents(big_run.output.stats).passive.size();
  const bool pass = small >= 72 && small <= 152 && big >= 980 && big <= 1290 && big_run.seconds < 120.0;
  return {pass, fmt("N=500: %zu in [72, 152]; N=5000: %zu in [980, 1290], %.1f s for 50M transactions (< 120 s)", small,
                    big, big_run.seconds)};
}

Verdict never_losers() {
  const std::size_t asym = cached_analysis(500, kAsymmetricLambda).classes.never_losers.size();
  const std::size_t sym = cached_analysis(500, kSymmetricLambda).classes.never_losers.size();
  const bool pass = asym >= 1 && asym >= 8 && asym <= 28 && sym == 0;
  return {pass, fmt("asymmetric N=500: %zu (>= 1, in [8, 28]); symmetric N=500: %zu (== 0)", asym, sym)};
}

Verdict poverty_profile() {
  const auto money = cached_run(500, kAsymmetricLambda).output.final_ledger.money();
  std::size_t below_500 = 0, below_50 = 0;
  for (double m : money) {
    below_500 += m < 500.0;
    below_50 += m < 50.0;
  }
  const bool pass = below_500 >= 209 && below_500 <= 329 && below_50 >= 31 && below_50 <= 81;
  return {pass, fmt("asymmetric N=500: %zu agents below $500 (269 +/- 60), %zu below $50 (56 +/- 25)", below_500, below_50)};
}

Verdict spectrum_peak() {
  const Trajectory t = trajectory({0.5, 0.3}, BimapParams(kSymmetricLambda, kSymmetricLambda), 1000, 4096);
  const SpectralPeak peak = find_spectral_peak(power_spectrum(x_series(t)));
  return {peak.frequency == 0.5, fmt("symmetric x_t, 4096 samples: peak at frequency %.6g (== 0.5)", peak.frequency)};
}

Verdict oracle_equivalences() {
  oracle::Uniform u(2024);
  double worst_map = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double x = u(), y = u();
    const double la = kChaoticLambdaMin + u() * (kChaoticLambdaMax - kChaoticLambdaMin);
    const double lb = kChaoticLambdaMin + u() * (kChaoticLambdaMax - kChaoticLambdaMin);
    const BimapState s = bimap_apply({x, y}, BimapParams::unchecked(la, lb));
    const auto [ox, oy] = oracle::bimap(x, y, la, lb);
    worst_map = std::max({worst_map, std::abs(s.x - ox), std::abs(s.y - oy)});
  }

  double worst_gini = 0.0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> m(1 + static_cast<std::size_t>(u() * 50));
    for (double& v : m) v = u() * 1e4;
    worst_gini = std::max(worst_gini, std::abs(gini(m) - oracle::gini_pairwise(m)));
  }

  double worst_fit = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double rate = 1e-4 + u() * 1e-2;
    const double alpha = 0.5 + u() * 3.0;
    Ccdf exp_data, pow_data;
    for (int i = 0; i < 40; ++i) {
      const double m = 10.0 * i;
      exp_data.points.push_back({m, std::exp(-rate * m)});
      const double mp = 1.0 + i;
      pow_data.points.push_back({mp, 0.1 * std::pow(mp, -alpha)});
    }
    exp_data.population = pow_data.population = 40;
    worst_fit = std::max(worst_fit, std::abs(fit_exponential(exp_data, {0.0, 400.0}).parameter - rate));
    worst_fit = std::max(worst_fit, std::abs(fit_power_law(pow_data, 0.5).parameter - alpha));
  }
  const bool pass = worst_map <= 1e-15 && worst_gini <= 1e-12 && worst_fit <= 1e-12;
  return {pass, fmt("max |map - oracle| %.2e (<= 1e-15), max |gini - pairwise| %.2e (<= 1e-12), max fit parameter error "
                    "%.2e (<= 1e-12)",
                    worst_map, worst_gini, worst_fit)};
}

Verdict size_dependence() {
  const double small = cached_analysis(500, kIntermediateLambda).gini;
  const double big = cached_analysis(5000, kIntermediateLambda).gini;
  return {big > small, fmt("lambda_b=1.033162 Gini: N=5000 %.4f > N=500 %.4f", big, small)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "conservation and determinism", conservation_and_determinism},
      {2, "exponential phase", exponential_phase},
      {3, "power-law phase", power_law_phase},
      {4, "monotone transition", monotone_transition},
      {5, "passive agents", passive_agents},
      {6, "never-losers", never_losers},
      {7, "asymmetric poverty profile", poverty_profile},
      {8, "spectrum peak", spectrum_peak},
      {9, "oracle equivalences", oracle_equivalences},
      {10, "size dependence", size_dependence},
  };

  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) {
    char* end = nullptr;
    const long id = std::strtol(argv[k], &end, 10);
    if (*end != '\0' || id < 1 || id > static_cast<long>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s' (expected 1..%zu)\n", argv[k], criteria.size());
      return 2;
    }
    selected.push_back(static_cast<int>(id));
  }

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    std::printf("[%s] AC%d %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
  }
  return failures == 0 ? 0 : 1;
}
