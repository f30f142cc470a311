#include "chaomarket/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "chaomarket/error.hpp"

namespace chaomarket {

std::uint64_t MarketConfig::resolved_transactions() const noexcept {
  if (total_transactions) return *total_transactions;
  const auto n = static_cast<std::uint64_t>(n_agents);
  return 2 * n * n;
}

std::uint64_t MarketConfig::resolved_history_stride() const noexcept {
  if (history_sample_stride) return *history_sample_stride;
  return std::max<std::uint64_t>(1, resolved_transactions() / 1000);
}

bool MarketConfig::resolved_record_pair_matrix() const noexcept {
  return record_pair_matrix.value_or(n_agents <= kDensePairMatrixLimit);
}

void MarketConfig::validate() const {
  if (n_agents < 2) throw ValidationError("n_agents must be at least 2");
  if (!(initial_money > 0.0) || !std::isfinite(initial_money))
    throw ValidationError("initial_money must be a positive finite amount");
  if (total_transactions && *total_transactions < 1) throw ValidationError("total_transactions must be at least 1");
  if (history_sample_stride && *history_sample_stride < 1)
    throw ValidationError("history_sample_stride must be at least 1");
  if (!bimap_initial.in_unit_square()) throw ValidationError("bimap initial state must lie in the unit square");
  if (bimap_params.is_checked() && (!BimapParams::in_chaotic_interval(bimap_params.lambda_a()) ||
                                    !BimapParams::in_chaotic_interval(bimap_params.lambda_b())))
    throw ValidationError("bimap parameters outside the chaotic interval");
  for (std::size_t a : history_agents) {
    if (a >= n_agents) {
      std::ostringstream msg;
      msg << "history agent " << a << " out of range for " << n_agents << " agents";
      throw ValidationError(msg.str());
    }
  }
}

double Ledger::total() const noexcept {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : money_) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

bool trade(Ledger& ledger, std::size_t loser, std::size_t winner, double nu) {
  if (loser == winner) throw std::invalid_argument("trade requires two distinct agents");
  double& m_loser = ledger.money_[loser];
  double& m_winner = ledger.money_[winner];
  const double dm = nu * (m_loser + m_winner) / 2.0;
  if (m_loser < dm) return false;
  m_loser -= dm;
  m_winner += dm;
  return true;
}

PairMatrix PairMatrix::for_agents(std::size_t n_agents) {
  PairMatrix m;
  m.n_ = n_agents;
  if (n_agents <= kDensePairMatrixLimit) m.dense_.assign(n_agents * n_agents, 0);
  return m;
}

std::uint64_t PairMatrix::count(std::size_t winner, std::size_t loser) const {
  if (winner >= n_ || loser >= n_) throw std::out_of_range("pair matrix index out of range");
  if (is_dense()) return dense_[winner * n_ + loser];
  auto it = sparse_.find(static_cast<std::uint64_t>(winner) * n_ + loser);
  return it == sparse_.end() ? 0 : it->second;
}

std::uint64_t PairMatrix::total() const noexcept {
  std::uint64_t sum = 0;
  for (auto c : dense_) sum += c;
  for (const auto& [key, c] : sparse_) sum += c;
  return sum;
}

std::vector<PairMatrix::Entry> PairMatrix::nonzero() const {
  std::vector<Entry> out;
  if (is_dense()) {
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < n_; ++i)
        if (auto c = dense_[j * n_ + i]; c != 0) out.push_back({j, i, c});
    return out;
  }
  out.reserve(sparse_.size());
  for (const auto& [key, c] : sparse_) out.push_back({static_cast<std::size_t>(key / n_), static_cast<std::size_t>(key % n_), c});
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return a.winner != b.winner ? a.winner < b.winner : a.loser < b.loser;
  });
  return out;
}

AgentClassification classify_agents(const InteractionStats& stats) {
  AgentClassification out;
  for (std::size_t a = 0; a < stats.n_agents(); ++a) {
    const auto wins = stats.win_count[a];
    const auto losses = stats.loss_count[a];
    if (wins + losses == 0) {
      out.passive.push_back(a);
    } else if (losses == 0) {
      out.never_losers.push_back(a);
    }
  }
  return out;
}

SimulationOutput run_simulation(const MarketConfig& config, const TransactionObserver& observer) {
  config.validate();

  const std::size_t n = config.n_agents;
  const std::uint64_t total = config.resolved_transactions();
  const std::uint64_t stride = config.resolved_history_stride();
  const BimapParams& params = config.bimap_params;

  BimapState state = config.bimap_initial;
  for (std::uint64_t k = 1; k <= config.burn_in; ++k) {
    state = bimap_apply(state, params);
    if (!state.in_unit_square()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "bimap left the unit square during burn-in at iteration " << k << ": (" << state.x << ", " << state.y
          << ")";
      throw DomainEscapeError(msg.str(), k, state.x, state.y);
    }
  }

  Ledger ledger(n, config.initial_money);
  InteractionStats stats(n);
  if (config.resolved_record_pair_matrix()) stats.pair_matrix = PairMatrix::for_agents(n);

  std::vector<std::size_t> traced = config.history_agents;
  std::sort(traced.begin(), traced.end());
  traced.erase(std::unique(traced.begin(), traced.end()), traced.end());
  for (std::size_t a : traced) stats.histories[a].push_back({0, config.initial_money});
  auto snapshot = [&](std::uint64_t t) {
    for (std::size_t a : traced) stats.histories[a].push_back({t, ledger[a]});
  };

  UniformSource nu_source(config.rng_seed);
  const bool record_pairs = stats.pair_matrix.enabled();
  std::uint64_t next_snapshot = traced.empty() ? 0 : stride;

  for (std::uint64_t t = 1; t <= total; ++t) {
    state = bimap_apply(state, params);
    if (!state.in_unit_square()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "bimap left the unit square at transaction " << t << ": (" << state.x << ", " << state.y << ")";
      throw DomainEscapeError(msg.str(), t, state.x, state.y);
    }

    const AgentPair pair = select_agents(state, n);
    if (pair.loser == pair.winner) {
      ++stats.self_pairs;
    } else {
      const double nu = nu_source.next();
      ++stats.win_count[pair.winner];
      ++stats.loss_count[pair.loser];
      if (record_pairs) stats.pair_matrix.add(pair.winner, pair.loser);
      if (trade(ledger, pair.loser, pair.winner, nu)) {
        ++stats.executed;
      } else {
        ++stats.blocked_count[pair.loser];
      }
    }

    if (t == next_snapshot) {
      snapshot(t);
      next_snapshot += stride;
    }
    if (observer) observer(t, ledger);
  }
  // Always close each history with the final holding.
  if (!traced.empty() && stats.histories.begin()->second.back().transaction != total) snapshot(total);

  AgentClassification classes = classify_agents(stats);
  return SimulationOutput{std::move(ledger), std::move(stats), config, std::move(classes.passive), total};
}

}  // namespace chaomarket
