#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "chaomarket/bimap.hpp"

namespace chaomarket {

/// Full definition of one market run. Optional fields resolve to defaults
/// that depend on other fields (see the `resolved_*` accessors).
struct MarketConfig {
  std::size_t n_agents = 500;
  double initial_money = 1000.0;
  std::optional<std::uint64_t> total_transactions;  // 2 N^2 when unset
  BimapParams bimap_params{1.032, 1.032};
  BimapState bimap_initial{0.5, 0.3};
  std::uint64_t burn_in = 1000;
  std::uint64_t rng_seed = 1;
  std::optional<std::uint64_t> history_sample_stride;  // T / 1000 when unset
  std::vector<std::size_t> history_agents;
  std::optional<bool> record_pair_matrix;  // on for N <= kDensePairMatrixLimit when unset

  std::uint64_t resolved_transactions() const noexcept;
  std::uint64_t resolved_history_stride() const noexcept;
  bool resolved_record_pair_matrix() const noexcept;

  /// Throws ValidationError describing the first violated constraint.
  void validate() const;
};

inline constexpr std::size_t kDensePairMatrixLimit = 2000;

/// Uniform reals in [0, 1) from a 64-bit Mersenne Twister: the top 53 bits
/// of each output scaled by 2^-53. Fixed here rather than delegated to
/// std::uniform_real_distribution, whose algorithm differs between
/// standard libraries.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Per-agent money. Entries stay >= 0 under `trade`.
class Ledger {
 public:
  Ledger(std::size_t n_agents, double initial_money) : money_(n_agents, initial_money) {}
  explicit Ledger(std::vector<double> money) : money_(std::move(money)) {}

  std::size_t size() const noexcept { return money_.size(); }
  double operator[](std::size_t agent) const noexcept { return money_[agent]; }
  std::span<const double> money() const noexcept { return money_; }

  /// Compensated (Neumaier) sum of all holdings.
  double total() const noexcept;

  friend bool trade(Ledger& ledger, std::size_t loser, std::size_t winner, double nu);
  friend bool operator==(const Ledger&, const Ledger&) = default;

 private:
  std::vector<double> money_;
};

/// Moves dm = nu (m_loser + m_winner) / 2 from loser to winner when the
/// loser holds at least dm; otherwise leaves the ledger untouched. Returns
/// whether the transfer happened. `loser == winner` throws
/// std::invalid_argument.
bool trade(Ledger& ledger, std::size_t loser, std::size_t winner, double nu);

struct AgentPair {
  std::size_t loser;   // i, from the x coordinate
  std::size_t winner;  // j, from the y coordinate
  friend bool operator==(const AgentPair&, const AgentPair&) = default;
};

/// i = floor(x N), j = floor(y N), clamped to N - 1 at coordinate 1.0.
inline AgentPair select_agents(const BimapState& state, std::size_t n_agents) noexcept {
  const double n = static_cast<double>(n_agents);
  auto index = [&](double c) {
    const auto k = static_cast<std::size_t>(c * n);
    return k < n_agents ? k : n_agents - 1;
  };
  return {index(state.x), index(state.y)};
}

/// Counts of (winner j, loser i) selections. Dense storage up to
/// kDensePairMatrixLimit agents, hashed above that. A default-constructed
/// matrix is disabled and ignores `add`.
class PairMatrix {
 public:
  PairMatrix() = default;
  static PairMatrix for_agents(std::size_t n_agents);

  bool enabled() const noexcept { return n_ > 0; }
  bool is_dense() const noexcept { return !dense_.empty(); }
  std::size_t n_agents() const noexcept { return n_; }

  void add(std::size_t winner, std::size_t loser) {
    if (is_dense()) {
      ++dense_[winner * n_ + loser];
    } else if (n_ > 0) {
      ++sparse_[static_cast<std::uint64_t>(winner) * n_ + loser];
    }
  }

  std::uint64_t count(std::size_t winner, std::size_t loser) const;
  std::uint64_t total() const noexcept;

  struct Entry {
    std::size_t winner;
    std::size_t loser;
    std::uint64_t count;
  };
  /// Nonzero cells ordered by (winner, loser).
  std::vector<Entry> nonzero() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> dense_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

struct HistoryPoint {
  std::uint64_t transaction;
  double money;
  friend bool operator==(const HistoryPoint&, const HistoryPoint&) = default;
};

struct InteractionStats {
  std::vector<std::uint64_t> win_count;      // selections as j
  std::vector<std::uint64_t> loss_count;     // selections as i, executed or blocked
  std::vector<std::uint64_t> blocked_count;  // selections as i with insufficient funds
  PairMatrix pair_matrix;
  std::uint64_t self_pairs = 0;
  std::uint64_t executed = 0;
  std::map<std::size_t, std::vector<HistoryPoint>> histories;

  explicit InteractionStats(std::size_t n_agents = 0)
      : win_count(n_agents), loss_count(n_agents), blocked_count(n_agents) {}

  std::size_t n_agents() const noexcept { return win_count.size(); }
};

struct AgentClassification {
  std::vector<std::size_t> passive;       // never selected
  std::vector<std::size_t> never_losers;  // won at least once, never lost
};

AgentClassification classify_agents(const InteractionStats& stats);

struct SimulationOutput {
  Ledger final_ledger;
  InteractionStats stats;
  MarketConfig config_echo;
  std::vector<std::size_t> passive_agents;
  std::uint64_t elapsed_transactions = 0;
};

/// Called after every transaction with its 1-based index.
using TransactionObserver = std::function<void(std::uint64_t transaction, const Ledger&)>;

/// Burns in the bimap, then performs T selections. Self-pairs advance t but
/// draw no random number; every other selection draws nu and then checks
/// funds. Throws ValidationError on a bad config and DomainEscapeError
/// (carrying the transaction index) if the bimap escapes.
SimulationOutput run_simulation(const MarketConfig& config, const TransactionObserver& observer = {});

}  // namespace chaomarket
