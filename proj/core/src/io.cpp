#include "chaomarket/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chaomarket/config.hpp"
#include "chaomarket/error.hpp"

namespace chaomarket {

using nlohmann::json;

std::string format_real(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("error writing " + path.string());
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory) {
  std::string s = "index,x,y\n";
  for (std::size_t k = 0; k < trajectory.points.size(); ++k) {
    s += std::to_string(k) + ',' + format_real(trajectory.points[k].x) + ',' + format_real(trajectory.points[k].y) + '\n';
  }
  write_text_file(path, s);
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
  std::string s = "frequency,magnitude\n";
  for (std::size_t k = 0; k < spectrum.frequencies.size(); ++k) {
    s += format_real(spectrum.frequencies[k]) + ',' + format_real(spectrum.magnitudes[k]) + '\n';
  }
  write_text_file(path, s);
}

namespace {

json config_json(const MarketConfig& c) {
  json j;
  j["n_agents"] = c.n_agents;
  j["initial_money"] = c.initial_money;
  j["total_transactions"] = c.resolved_transactions();
  j["lambda_a"] = c.bimap_params.lambda_a();
  j["lambda_b"] = c.bimap_params.lambda_b();
  j["unchecked_params"] = !c.bimap_params.is_checked();
  j["bimap_x0"] = c.bimap_initial.x;
  j["bimap_y0"] = c.bimap_initial.y;
  j["burn_in"] = c.burn_in;
  j["rng_seed"] = c.rng_seed;
  j["history_sample_stride"] = c.resolved_history_stride();
  j["history_agents"] = c.history_agents;
  j["record_pair_matrix"] = c.resolved_record_pair_matrix();
  return j;
}

json fit_json(const FitOutcome& outcome) {
  if (!outcome.fit) return json{{"error", outcome.error}};
  const FitResult& f = *outcome.fit;
  return json{{"kind", std::string(to_string(f.kind))},
              {"parameter", f.parameter},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared},
              {"range", {f.fit_range.low, f.fit_range.high}},
              {"n_points", f.n_points}};
}

}  // namespace

void write_simulation_artifacts(const std::filesystem::path& dir, const SimulationOutput& output,
                                const AnalysisOptions& analysis) {
  std::filesystem::create_directories(dir);
  const auto& stats = output.stats;
  const auto money = output.final_ledger.money();
  const AgentClassification classes = classify_agents(stats);

  json j;
  j["config"] = config_json(output.config_echo);
  j["elapsed_transactions"] = output.elapsed_transactions;
  j["total_money"] = output.final_ledger.total();
  j["self_pairs"] = stats.self_pairs;
  j["executed"] = stats.executed;
  j["passive_agents"] = classes.passive;
  j["never_losers"] = classes.never_losers;
  j["win_count"] = stats.win_count;
  j["loss_count"] = stats.loss_count;
  j["blocked_count"] = stats.blocked_count;
  j["final_money"] = std::vector<double>(money.begin(), money.end());
  j["pair_matrix_recorded"] = stats.pair_matrix.enabled();
  write_text_file(dir / "simulation.json", j.dump(2) + "\n");

  std::string csv = "agent,money\n";
  for (std::size_t a = 0; a < money.size(); ++a) csv += std::to_string(a) + ',' + format_real(money[a]) + '\n';
  write_text_file(dir / "final_money.csv", csv);

  if (stats.pair_matrix.enabled()) {
    std::string pm = "j,i,count\n";
    for (const auto& e : stats.pair_matrix.nonzero())
      pm += std::to_string(e.winner) + ',' + std::to_string(e.loser) + ',' + std::to_string(e.count) + '\n';
    write_text_file(dir / "pair_matrix.csv", pm);
  }

  for (const auto& [agent, points] : stats.histories) {
    std::string h = "transaction,money\n";
    for (const auto& p : points) h += std::to_string(p.transaction) + ',' + format_real(p.money) + '\n';
    write_text_file(dir / ("history_" + std::to_string(agent) + ".csv"), h);
  }

  write_text_file(dir / "config.cfg", to_document(output.config_echo, analysis).serialize());
}

std::string fits_json(const AnalysisResult& a) {
  json j;
  j["exponential"] = fit_json(a.exponential);
  j["power_law"] = fit_json(a.power_law);
  j["tail_exponential"] = fit_json(a.tail_exponential);
  j["gini"] = a.gini;
  j["richest_share"] = a.richest_share;
  j["analysed_money"] = a.analysed_money;
  j["population"] = a.ccdf.population;
  j["excluded_agents"] = a.excluded.size();
  j["passive_count"] = a.classes.passive.size();
  j["never_loser_count"] = a.classes.never_losers.size();
  return j.dump(2) + "\n";
}

void write_analysis_artifacts(const std::filesystem::path& dir, const AnalysisResult& analysis) {
  std::filesystem::create_directories(dir);
  std::string c = "money,probability\n";
  for (const auto& p : analysis.ccdf.points) c += format_real(p.money) + ',' + format_real(p.probability) + '\n';
  write_text_file(dir / "ccdf.csv", c);

  write_text_file(dir / "fits.json", fits_json(analysis));

  const RankProfile& r = analysis.ranks;
  std::string rp = "rank,agent,money,net_wins,losses\n";
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    rp += std::to_string(k) + ',' + std::to_string(r.order[k]) + ',' + format_real(r.money[k]) + ',' +
          std::to_string(r.net_wins[k]) + ',' + std::to_string(r.losses[k]) + '\n';
  }
  write_text_file(dir / "rank_profile.csv", rp);
}

std::vector<double> read_final_money_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::vector<double> money;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "agent,money") fail("expected header 'agent,money'");
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      fail("expected two comma-separated fields");
    std::size_t agent = 0;
    double value = 0.0;
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + comma, agent);
    if (r1.ec != std::errc{} || r1.ptr != b + comma) fail("malformed agent index");
    auto r2 = std::from_chars(b + comma + 1, b + line.size(), value);
    if (r2.ec != std::errc{} || r2.ptr != b + line.size()) fail("malformed money value");
    if (agent != money.size()) fail("agent indices must run 0..N-1 in order");
    if (!(value >= 0.0)) fail("money must be non-negative");
    money.push_back(value);
  }
  if (line_no == 0) throw ValidationError(path.string() + ": empty file");
  if (money.empty()) throw ValidationError(path.string() + ": no agent rows");
  return money;
}

StoredRun read_simulation_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  StoredRun run;
  try {
    const json j = json::parse(in);
    run.n_agents = j.at("config").at("n_agents").get<std::size_t>();
    run.initial_money = j.at("config").at("initial_money").get<double>();
    run.stats = InteractionStats(run.n_agents);
    run.stats.win_count = j.at("win_count").get<std::vector<std::uint64_t>>();
    run.stats.loss_count = j.at("loss_count").get<std::vector<std::uint64_t>>();
    run.stats.blocked_count = j.at("blocked_count").get<std::vector<std::uint64_t>>();
    run.stats.self_pairs = j.at("self_pairs").get<std::uint64_t>();
    run.stats.executed = j.at("executed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (run.stats.win_count.size() != run.n_agents || run.stats.loss_count.size() != run.n_agents ||
      run.stats.blocked_count.size() != run.n_agents)
    throw ValidationError(path.string() + ": per-agent count arrays do not match n_agents");
  return run;
}

}  // namespace chaomarket
