#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace sapdrl::harness {

struct StepRow {
  std::int64_t step = 0;
  std::int64_t episode = 0;
  double reward = 0.0;        // raw environment reward
  double avgReward100 = 0.0;  // mean return over the trailing 100 completed episodes
  double epsOrNoise = 0.0;    // epsilon for ddqn, 1/0 noise-active flag for ddpg
  double alpha = 0.0;         // consult probability in effect, 0 while guidance is off
  double vacc = 0.0;          // latest validation accuracy (0 until first validation)
  std::size_t kbPos = 0;      // knowledge training tuples, permissible class
  std::size_t kbNeg = 0;      //   "            "        , non-permissible class
  std::size_t virtualStops = 0;  // cumulative virtually-stopped transitions
};

struct EpisodeRow {
  std::int64_t episode = 0;
  std::int64_t length = 0;
  double episodeReturn = 0.0;
};

struct EvalRow {
  std::int64_t step = 0;
  double mean = 0.0;
};

/// Streams one run's rows into {runId}.steps.csv / .episodes.csv /
/// .evals.csv under a directory. Buffers are flushed every 100 step rows
/// so a crash loses little.
class RunLogWriter {
 public:
  RunLogWriter(const std::filesystem::path& dir, const std::string& runId);
  void writeStep(const StepRow& row);
  void writeEpisode(const EpisodeRow& row);
  void writeEval(const EvalRow& row);
  void close();

 private:
  std::ofstream steps_, episodes_, evals_;
  std::filesystem::path evalsPath_;
  bool evalsOpen_ = false;
  int sinceFlush_ = 0;
};

/// A completed run read back from disk, with its config metadata.
struct RunLogData {
  std::vector<StepRow> steps;
  std::vector<EpisodeRow> episodes;
  std::vector<EvalRow> evals;
  nlohmann::json meta;

  static RunLogData load(const std::filesystem::path& dir, const std::string& runId);
  static bool exists(const std::filesystem::path& dir, const std::string& runId);
};

/// Fixed-format float used in all CSVs, so identical runs give identical
/// bytes.
std::string csvDouble(double v);

}  // namespace sapdrl::harness
