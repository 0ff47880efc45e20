#include "sapdrl/harness/run_log.hpp"

#include <cstdio>
#include <sstream>

#include "sapdrl/errors.hpp"

namespace sapdrl::harness {

std::string csvDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

RunLogWriter::RunLogWriter(const std::filesystem::path& dir, const std::string& runId) {
  std::filesystem::create_directories(dir);
  steps_.open(dir / (runId + ".steps.csv"), std::ios::trunc);
  episodes_.open(dir / (runId + ".episodes.csv"), std::ios::trunc);
  evalsPath_ = dir / (runId + ".evals.csv");
  if (!steps_ || !episodes_) throw ConfigError("cannot write run logs under " + dir.string());
  steps_ << "step,episode,reward,avgReward100,epsOrNoise,alpha,vacc,kbPos,kbNeg,virtualStops\n";
  episodes_ << "episode,length,return\n";
}

void RunLogWriter::writeStep(const StepRow& r) {
  steps_ << r.step << ',' << r.episode << ',' << csvDouble(r.reward) << ','
         << csvDouble(r.avgReward100) << ',' << csvDouble(r.epsOrNoise) << ','
         << csvDouble(r.alpha) << ',' << csvDouble(r.vacc) << ',' << r.kbPos << ',' << r.kbNeg
         << ',' << r.virtualStops << '\n';
  if (++sinceFlush_ >= 100) {
    steps_.flush();
    episodes_.flush();
    sinceFlush_ = 0;
  }
}

void RunLogWriter::writeEpisode(const EpisodeRow& r) {
  episodes_ << r.episode << ',' << r.length << ',' << csvDouble(r.episodeReturn) << '\n';
}

void RunLogWriter::writeEval(const EvalRow& r) {
  if (!evalsOpen_) {
    evals_.open(evalsPath_, std::ios::trunc);
    evals_ << "step,mean\n";
    evalsOpen_ = true;
  }
  evals_ << r.step << ',' << csvDouble(r.mean) << '\n';
  evals_.flush();
}

void RunLogWriter::close() {
  steps_.close();
  episodes_.close();
  if (evalsOpen_) evals_.close();
}

namespace {

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

bool RunLogData::exists(const std::filesystem::path& dir, const std::string& runId) {
  return std::filesystem::exists(dir / (runId + ".meta.json"));
}

RunLogData RunLogData::load(const std::filesystem::path& dir, const std::string& runId) {
  RunLogData data;

  {
    std::ifstream meta(dir / (runId + ".meta.json"));
    if (!meta) throw ConfigError("missing meta for run " + runId + " under " + dir.string());
    meta >> data.meta;
  }

  std::ifstream steps(dir / (runId + ".steps.csv"));
  if (!steps) throw ConfigError("missing steps csv for run " + runId);
  std::string line;
  std::getline(steps, line);  // header
  while (std::getline(steps, line)) {
    if (line.empty()) continue;
    const auto f = splitCsvLine(line);
    StepRow r;
    r.step = std::stoll(f[0]);
    r.episode = std::stoll(f[1]);
    r.reward = std::stod(f[2]);
    r.avgReward100 = std::stod(f[3]);
    r.epsOrNoise = std::stod(f[4]);
    r.alpha = std::stod(f[5]);
    r.vacc = std::stod(f[6]);
    r.kbPos = std::stoull(f[7]);
    r.kbNeg = std::stoull(f[8]);
    r.virtualStops = std::stoull(f[9]);
    data.steps.push_back(r);
  }

  std::ifstream episodes(dir / (runId + ".episodes.csv"));
  if (!episodes) throw ConfigError("missing episodes csv for run " + runId);
  std::getline(episodes, line);
  while (std::getline(episodes, line)) {
    if (line.empty()) continue;
    const auto f = splitCsvLine(line);
    data.episodes.push_back({std::stoll(f[0]), std::stoll(f[1]), std::stod(f[2])});
  }

  std::ifstream evals(dir / (runId + ".evals.csv"));
  if (evals) {
    std::getline(evals, line);
    while (std::getline(evals, line)) {
      if (line.empty()) continue;
      const auto f = splitCsvLine(line);
      data.evals.push_back({std::stoll(f[0]), std::stod(f[1])});
    }
  }
  return data;
}

}  // namespace sapdrl::harness
