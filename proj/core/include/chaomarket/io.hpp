#pragma once

#include <filesystem>
#include <string>

#include "chaomarket/bimap.hpp"
#include "chaomarket/market.hpp"
#include "chaomarket/statistics.hpp"

namespace chaomarket {

// Artifact files. Reals are written in shortest round-trip form, so reading
// a file back yields bit-identical values.
//
//   attractor.csv       index,x,y
//   spectrum.csv        frequency,magnitude
//   simulation.json     config echo, final money, per-agent counts, classes
//   final_money.csv     agent,money
//   pair_matrix.csv     j,i,count (nonzero cells only)
//   history_<a>.csv     transaction,money
//   config.cfg          resolved key-value config
//   ccdf.csv            money,probability
//   fits.json           exponential / power-law / tail-exponential fits
//   rank_profile.csv    rank,agent,money,net_wins,losses

std::string format_real(double value);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);

/// simulation.json, final_money.csv, pair_matrix.csv (when recorded),
/// history_<a>.csv per traced agent. Creates `dir` if needed.
void write_simulation_artifacts(const std::filesystem::path& dir, const SimulationOutput& output,
                                const AnalysisOptions& analysis = {});

/// ccdf.csv, fits.json, rank_profile.csv.
void write_analysis_artifacts(const std::filesystem::path& dir, const AnalysisResult& analysis);

std::string fits_json(const AnalysisResult& analysis);

/// Reads agent,money rows. Agents must appear as 0..N-1 in order. Errors
/// name the file and line.
std::vector<double> read_final_money_csv(const std::filesystem::path& path);

/// Counts and echo recovered from simulation.json.
struct StoredRun {
  std::size_t n_agents = 0;
  double initial_money = 0.0;
  InteractionStats stats;
};

StoredRun read_simulation_json(const std::filesystem::path& path);

}  // namespace chaomarket
