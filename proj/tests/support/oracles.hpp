#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerical code paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

/// Direct evaluation of the coupled logistic map, written term by term.
inline std::pair<double, double> bimap(double x, double y, double lambda_a, double lambda_b) {
  const double gx = x - x * x;
  const double gy = y - y * y;
  return {lambda_a * gx * (1.0 + 3.0 * y), lambda_b * gy * (1.0 + 3.0 * x)};
}

/// O(N^2) Gini: sum |m_a - m_b| / (2 N^2 mean).
inline double gini_pairwise(const std::vector<double>& m) {
  double diff = 0.0;
  double sum = 0.0;
  for (double a : m) {
    sum += a;
    for (double b : m) diff += std::abs(a - b);
  }
  const double n = static_cast<double>(m.size());
  return diff / (2.0 * n * n * (sum / n));
}

/// Naive DFT magnitudes of the mean-removed series for k = 0..L/2.
inline std::vector<double> dft_magnitudes(const std::vector<double>& s) {
  const std::size_t n = s.size();
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> out;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc{};
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += (s[t] - mean) * std::polar(1.0, angle);
    }
    out.push_back(std::abs(acc));
  }
  return out;
}

/// P(M >= v) by counting, for each distinct v ascending.
inline std::vector<std::pair<double, double>> ccdf_counting(const std::vector<double>& m) {
  std::vector<double> distinct = m;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::pair<double, double>> out;
  for (double v : distinct) {
    std::size_t c = 0;
    for (double x : m) c += x >= v ? 1 : 0;
    out.emplace_back(v, static_cast<double>(c) / static_cast<double>(m.size()));
  }
  return out;
}

/// Seeded uniform in [0,1) for synthetic samples (inverse-transform).
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : g_(seed) {}
  double operator()() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 g_;
};

inline std::vector<double> exponential_samples(std::size_t n, double mean, std::uint64_t seed) {
  Uniform u(seed);
  std::vector<double> out(n);
  for (double& v : out) v = -mean * std::log1p(-u());
  return out;
}

/// Pareto with P(X >= x) = (x / x_min)^(-alpha), x >= x_min.
inline std::vector<double> pareto_samples(std::size_t n, double alpha, double x_min, std::uint64_t seed) {
  Uniform u(seed);
  std::vector<double> out(n);
  for (double& v : out) v = x_min * std::pow(1.0 - u(), -1.0 / alpha);
  return out;
}

struct MarketResult {
  std::vector<double> money;
  std::vector<std::uint64_t> wins;
  std::vector<std::uint64_t> losses;
  std::vector<std::uint64_t> blocked;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> pairs;  // (j, i)
  std::uint64_t self_pairs = 0;
};

/// Straight-line transcription of the trading protocol: burn in, then for
/// each t step the map, pick i = floor(xN), j = floor(yN), skip self-pairs
/// without a draw, otherwise draw nu and trade if m_i >= dm.
inline MarketResult reference_market(std::size_t n, double m0, std::uint64_t transactions, double lambda_a,
                                     double lambda_b, double x, double y, std::uint64_t burn_in,
                                     std::uint64_t seed) {
  // Literal operand order of the map equation; chaotic divergence makes the
  // comparison only meaningful if rounding matches too.
  auto step = [&] {
    const double nx = lambda_a * (3.0 * y + 1.0) * x * (1.0 - x);
    const double ny = lambda_b * (3.0 * x + 1.0) * y * (1.0 - y);
    x = nx;
    y = ny;
  };
  for (std::uint64_t k = 0; k < burn_in; ++k) step();
  MarketResult r;
  r.money.assign(n, m0);
  r.wins.assign(n, 0);
  r.losses.assign(n, 0);
  r.blocked.assign(n, 0);
  Uniform nu(seed);
  for (std::uint64_t t = 0; t < transactions; ++t) {
    step();
    const std::size_t i = std::min(static_cast<std::size_t>(std::floor(x * static_cast<double>(n))), n - 1);
    const std::size_t j = std::min(static_cast<std::size_t>(std::floor(y * static_cast<double>(n))), n - 1);
    if (i == j) {
      ++r.self_pairs;
      continue;
    }
    const double v = nu();
    ++r.wins[j];
    ++r.losses[i];
    ++r.pairs[{j, i}];
    const double dm = v * (r.money[i] + r.money[j]) / 2.0;
    if (r.money[i] >= dm) {
      r.money[i] -= dm;
      r.money[j] += dm;
    } else {
      ++r.blocked[i];
    }
  }
  return r;
}

}  // namespace oracle
