#include "chaomarket/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chaomarket/error.hpp"

namespace chaomarket {

std::string_view to_string(FitKind kind) noexcept {
  switch (kind) {
    case FitKind::exponential:
      return "exponential";
    case FitKind::power_law:
      return "power_law";
  }
  return "unknown";
}

Ccdf ccdf(std::span<const double> money, std::span<const std::size_t> exclude) {
  std::vector<bool> skip(money.size(), false);
  for (std::size_t a : exclude) {
    if (a < skip.size()) skip[a] = true;
  }
  std::vector<double> kept;
  kept.reserve(money.size());
  for (std::size_t a = 0; a < money.size(); ++a) {
    if (!skip[a]) kept.push_back(money[a]);
  }
  if (kept.empty()) throw AnalysisError("ccdf: no agents left after exclusion");
  std::sort(kept.begin(), kept.end());

  Ccdf out;
  out.population = kept.size();
  const double n = static_cast<double>(kept.size());
  for (std::size_t k = 0; k < kept.size();) {
    std::size_t next = k + 1;
    while (next < kept.size() && kept[next] == kept[k]) ++next;
    out.points.push_back({kept[k], static_cast<double>(kept.size() - k) / n});
    k = next;
  }
  return out;
}

namespace {

struct LineFit {
  double slope;
  double intercept;
  double r_squared;
};

// Ordinary least squares y = a + b x. Callers guarantee >= 3 points with
// at least two distinct x.
LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double dx = xs[k] - mx;
    const double dy = ys[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (intercept + slope * xs[k]);
    ss_res += r * r;
  }
  double r2;
  if (syy > 0.0) {
    r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  } else {
    r2 = ss_res == 0.0 ? 1.0 : 0.0;
  }
  return {slope, intercept, r2};
}

}  // namespace

FitResult fit_exponential(const Ccdf& c, MoneyRange range) {
  std::vector<double> xs, ys;
  for (const auto& p : c.points) {
    if (p.money < range.low || p.money > range.high || !(p.probability > 0.0)) continue;
    xs.push_back(p.money);
    ys.push_back(std::log(p.probability));
  }
  if (xs.size() < 3) {
    std::ostringstream msg;
    msg << "exponential fit: insufficient points (" << xs.size() << " < 3) in [" << range.low << ", " << range.high
        << "]";
    throw AnalysisError(msg.str());
  }
  const LineFit line = least_squares(xs, ys);
  return {FitKind::exponential, -line.slope, line.intercept, line.r_squared, range, xs.size()};
}

FitResult fit_power_law(const Ccdf& c, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
    throw AnalysisError("power-law fit: tail_fraction must lie in (0, 1)");
  std::vector<double> xs, ys;
  double low = 0.0, high = 0.0;
  for (const auto& p : c.points) {
    if (p.probability > tail_fraction || !(p.money > 0.0) || !(p.probability > 0.0)) continue;
    if (xs.empty()) low = p.money;
    high = p.money;
    xs.push_back(std::log(p.money));
    ys.push_back(std::log(p.probability));
  }
  if (xs.size() < 3) {
    std::ostringstream msg;
    msg << "power-law fit: fewer than 3 distinct positive money values in the top " << tail_fraction
        << " tail (found " << xs.size() << ")";
    throw AnalysisError(msg.str());
  }
  const LineFit line = least_squares(xs, ys);
  return {FitKind::power_law, -line.slope, line.intercept, line.r_squared, {low, high}, xs.size()};
}

MoneyRange lower_fraction_range(const Ccdf& c, double fraction) {
  if (c.points.empty()) throw AnalysisError("lower_fraction_range: empty ccdf");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw AnalysisError("lower_fraction_range: fraction must lie in (0, 1]");
  const double floor_probability = 1.0 - fraction;
  MoneyRange r{c.points.front().money, c.points.front().money};
  for (const auto& p : c.points) {
    if (p.probability >= floor_probability) r.high = p.money;
  }
  return r;
}

double gini(std::span<const double> money) {
  if (money.empty()) throw AnalysisError("gini: empty money vector");
  std::vector<double> sorted(money.begin(), money.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0.0) throw AnalysisError("gini: negative money");
  // sum_{a,b} |m_a - m_b| = 2 sum_k (2k - n - 1) m_(k), k = 1..n over sorted m.
  const double n = static_cast<double>(sorted.size());
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    total += sorted[k];
    weighted += (2.0 * static_cast<double>(k + 1) - n - 1.0) * sorted[k];
  }
  if (!(total > 0.0)) throw AnalysisError("gini: all money is zero");
  return weighted / (n * total);
}

RankProfile rank_profile(std::span<const double> money, const InteractionStats& stats) {
  if (money.size() != stats.n_agents()) throw AnalysisError("rank_profile: money and stats lengths differ");
  RankProfile out;
  out.order.resize(money.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return money[a] > money[b]; });
  out.money.reserve(money.size());
  out.net_wins.reserve(money.size());
  out.losses.reserve(money.size());
  for (std::size_t a : out.order) {
    out.money.push_back(money[a]);
    out.net_wins.push_back(static_cast<std::int64_t>(stats.win_count[a]) -
                           static_cast<std::int64_t>(stats.loss_count[a]));
    out.losses.push_back(stats.loss_count[a]);
  }
  return out;
}

namespace {

template <class F>
FitOutcome try_fit(F&& f) {
  try {
    return {f(), {}};
  } catch (const AnalysisError& e) {
    return {std::nullopt, e.what()};
  }
}

}  // namespace

AnalysisResult analyze(std::span<const double> money, const InteractionStats& stats, const AnalysisOptions& options) {
  if (money.size() != stats.n_agents()) throw AnalysisError("analyze: money and stats lengths differ");
  AnalysisResult out;
  out.classes = classify_agents(stats);
  if (options.exclude_passive) out.excluded = out.classes.passive;

  out.ccdf = ccdf(money, out.excluded);

  std::vector<bool> skip(money.size(), false);
  for (std::size_t a : out.excluded) skip[a] = true;
  std::vector<double> analysed;
  analysed.reserve(money.size());
  for (std::size_t a = 0; a < money.size(); ++a) {
    if (!skip[a]) analysed.push_back(money[a]);
  }
  out.gini = gini(analysed);
  out.analysed_money = std::accumulate(analysed.begin(), analysed.end(), 0.0);
  out.richest_share = *std::max_element(analysed.begin(), analysed.end()) / out.analysed_money;

  out.exponential = try_fit([&] {
    return fit_exponential(out.ccdf, lower_fraction_range(out.ccdf, options.exponential_fraction));
  });
  out.power_law = try_fit([&] { return fit_power_law(out.ccdf, options.tail_fraction); });
  if (out.power_law.fit) {
    const MoneyRange tail = out.power_law.fit->fit_range;
    out.tail_exponential = try_fit([&] { return fit_exponential(out.ccdf, tail); });
  } else {
    out.tail_exponential.error = "no power-law window to compare against";
  }

  out.ranks = rank_profile(money, stats);
  return out;
}

}  // namespace chaomarket
