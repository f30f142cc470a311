#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chaomarket/market.hpp"

namespace chaomarket {

struct CcdfPoint {
  double money;
  double probability;  // P(M >= money)
  friend bool operator==(const CcdfPoint&, const CcdfPoint&) = default;
};

/// Empirical complementary CDF evaluated at each distinct money value,
/// ascending. `population` is the number of agents it was built from.
struct Ccdf {
  std::vector<CcdfPoint> points;
  std::size_t population = 0;
};

/// Throws AnalysisError if every agent is excluded.
Ccdf ccdf(std::span<const double> money, std::span<const std::size_t> exclude = {});

enum class FitKind { exponential, power_law };

std::string_view to_string(FitKind kind) noexcept;

struct MoneyRange {
  double low;
  double high;
};

struct FitResult {
  FitKind kind;
  double parameter;  // decay rate for exponential, exponent alpha for power law
  double intercept;  // of the transformed regression line
  double r_squared;
  MoneyRange fit_range;
  std::size_t n_points;
};

/// Least squares on (m, ln P) over CCDF points with money in [low, high] and
/// P > 0. parameter = -slope. Needs at least 3 points.
FitResult fit_exponential(const Ccdf& ccdf, MoneyRange range);

/// Least squares on (ln m, ln P) over the tail: points with P <= tail_fraction
/// (the top tail_fraction of agents by money) and m > 0. parameter = -slope.
FitResult fit_power_law(const Ccdf& ccdf, double tail_fraction);

/// Money interval spanned by the poorest `fraction` of the population, i.e.
/// from the minimum to the largest threshold still reached by at least
/// (1 - fraction) of the agents.
MoneyRange lower_fraction_range(const Ccdf& ccdf, double fraction);

/// G = sum_{a,b} |m_a - m_b| / (2 N^2 mean), via the sorted-vector identity.
/// Throws AnalysisError on empty, negative, or all-zero input.
double gini(std::span<const double> money);

struct RankProfile {
  std::vector<std::size_t> order;  // richest first, ties by ascending index
  std::vector<double> money;
  std::vector<std::int64_t> net_wins;
  std::vector<std::uint64_t> losses;
};

RankProfile rank_profile(std::span<const double> money, const InteractionStats& stats);

struct AnalysisOptions {
  bool exclude_passive = true;
  double exponential_fraction = 0.9;
  double tail_fraction = 0.1;
};

/// A fit that may have failed on degenerate data.
struct FitOutcome {
  std::optional<FitResult> fit;
  std::string error;
};

/// Everything the distribution and win/loss analyses produce for one run.
struct AnalysisResult {
  Ccdf ccdf;
  FitOutcome exponential;       // lowest exponential_fraction of agents
  FitOutcome power_law;         // top tail_fraction of agents
  FitOutcome tail_exponential;  // exponential model over the power-law window
  double gini = 0.0;
  double richest_share = 0.0;  // largest holding / analysed money
  double analysed_money = 0.0;
  std::vector<std::size_t> excluded;
  AgentClassification classes;
  RankProfile ranks;
};

AnalysisResult analyze(std::span<const double> money, const InteractionStats& stats,
                       const AnalysisOptions& options = {});

}  // namespace chaomarket
