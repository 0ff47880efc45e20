#include "sapdrl/envs/lane.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sapdrl/errors.hpp"

namespace sapdrl::envs {

namespace {
constexpr double kPi = 3.14159265358979323846;

double wrapAngle(double a) {
  while (a >= kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}
}  // namespace

double TrackSpec::totalLength() const {
  double sum = 0.0;
  for (const auto& seg : segments) sum += seg.length;
  return sum;
}

double TrackSpec::curvatureAt(double s) const {
  double pos = std::fmod(s, totalLength());
  if (pos < 0.0) pos += totalLength();
  for (const auto& seg : segments) {
    if (pos < seg.length) return seg.curvature;
    pos -= seg.length;
  }
  return segments.back().curvature;
}

void TrackSpec::validate() const {
  if (segments.empty()) throw ConfigError("track '" + name + "' has no segments");
  if (!(width > 0.0)) throw ConfigError("track '" + name + "' needs a positive width");
  for (const auto& seg : segments)
    if (!(seg.length > 0.0)) throw ConfigError("track '" + name + "' has a non-positive segment");
}

TrackSpec TrackSpec::fromJsonText(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TrackSpec spec;
  spec.name = j.value("name", "custom");
  spec.width = j.at("width").get<double>();
  for (const auto& seg : j.at("segments")) {
    const std::string kind = seg.at("kind").get<std::string>();
    if (kind == "straight") {
      spec.segments.push_back({seg.at("len").get<double>(), 0.0});
    } else if (kind == "arc") {
      const double r = seg.at("r").get<double>();
      const double sweep = seg.at("sweep").get<double>();
      const std::string dir = seg.at("dir").get<std::string>();
      if (r <= 0.0 || sweep <= 0.0) throw ConfigError("arc needs positive r and sweep");
      if (dir != "L" && dir != "R") throw ConfigError("arc dir must be \"L\" or \"R\"");
      spec.segments.push_back({r * sweep, (dir == "L" ? 1.0 : -1.0) / r});
    } else {
      throw ConfigError("unknown track segment kind '" + kind + "'");
    }
  }
  spec.validate();
  return spec;
}

TrackSpec TrackSpec::fromJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read track file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return fromJsonText(ss.str());
}

namespace {

TrackSpec makeTrack(std::string name, std::vector<TrackSpec::Segment> segs) {
  TrackSpec t;
  t.name = std::move(name);
  t.segments = std::move(segs);
  t.width = 10.0;
  t.validate();
  return t;
}

double arcLen(double r, double sweepDeg) { return r * sweepDeg * kPi / 180.0; }

}  // namespace

TrackSpec defaultTrainingTrack() {
  // a loop mixing straights with gentle (r=80), medium (r=50) and sharp
  // (r=30) arcs in both directions
  return makeTrack("train",
                   {{120.0, 0.0},
                    {arcLen(50.0, 90.0), 1.0 / 50.0},
                    {60.0, 0.0},
                    {arcLen(30.0, 120.0), -1.0 / 30.0},
                    {80.0, 0.0},
                    {arcLen(80.0, 60.0), 1.0 / 80.0},
                    {40.0, 0.0},
                    {arcLen(30.0, 90.0), 1.0 / 30.0},
                    {70.0, 0.0},
                    {arcLen(50.0, 120.0), -1.0 / 50.0}});
}

std::vector<TrackSpec> testTracks() {
  return {
      makeTrack("test1",
                {{90.0, 0.0},
                 {arcLen(30.0, 100.0), 1.0 / 30.0},
                 {50.0, 0.0},
                 {arcLen(80.0, 80.0), -1.0 / 80.0},
                 {110.0, 0.0},
                 {arcLen(50.0, 140.0), 1.0 / 50.0}}),
      makeTrack("test2",
                {{40.0, 0.0},
                 {arcLen(50.0, 70.0), -1.0 / 50.0},
                 {90.0, 0.0},
                 {arcLen(30.0, 130.0), -1.0 / 30.0},
                 {60.0, 0.0},
                 {arcLen(80.0, 90.0), 1.0 / 80.0},
                 {75.0, 0.0}}),
      makeTrack("test3",
                {{150.0, 0.0},
                 {arcLen(80.0, 45.0), 1.0 / 80.0},
                 {arcLen(30.0, 90.0), -1.0 / 30.0},
                 {45.0, 0.0},
                 {arcLen(50.0, 100.0), 1.0 / 50.0},
                 {85.0, 0.0}}),
      makeTrack("test4",
                {{55.0, 0.0},
                 {arcLen(30.0, 75.0), -1.0 / 30.0},
                 {35.0, 0.0},
                 {arcLen(30.0, 75.0), 1.0 / 30.0},
                 {100.0, 0.0},
                 {arcLen(50.0, 60.0), -1.0 / 50.0},
                 {arcLen(80.0, 70.0), 1.0 / 80.0}}),
  };
}

TrackSpec trackByName(const std::string& name) {
  if (name == "train") return defaultTrainingTrack();
  for (auto& t : testTracks())
    if (t.name == name) return t;
  throw ConfigError("unknown track '" + name + "' (expected train or test1..test4)");
}

LaneEnv::LaneEnv(TrackSpec track) : LaneEnv(std::move(track), Params{}) {}

LaneEnv::LaneEnv(TrackSpec track, Params p)
    : track_(std::move(track)), params_(p), halfWidth_(track_.width / 2.0) {
  track_.validate();
}

std::vector<double> LaneEnv::reset(numkit::Rng&) {
  angle_ = 0.0;
  lateral_ = 0.0;
  arc_ = 0.0;
  distance_ = 0.0;
  live_ = true;
  return observation();
}

std::vector<double> LaneEnv::observation() const {
  const double speedX = params_.speedKmh;
  const double speedY = params_.speedKmh * std::sin(angle_);
  return {angle_, lateral_ / halfWidth_, speedX, speedY, 0.0};
}

std::vector<double> LaneEnv::observationScale() const {
  return {1.0 / kPi, 1.0, 1.0 / 300.0, 1.0 / 300.0, 1.0 / 300.0};
}

StepResult LaneEnv::step(const agents::ActionValue& action) {
  if (!live_) throw ContractError("LaneEnv::step on a finished episode");
  if (action.isDiscrete()) throw ContractError("LaneEnv::step: continuous steering expected");
  const double steering = std::clamp(action.value, -1.0, 1.0);

  const double v = params_.speedKmh / 3.6;  // m/s
  const double wheel = steering * params_.maxWheelAngle;
  const double headingRate = (v / params_.wheelbase) * std::tan(wheel);
  const double kappa = track_.curvatureAt(arc_);

  // Frenet kinematics against the centerline, explicit Euler.
  const double arcRate = v * std::cos(angle_) / (1.0 - lateral_ * kappa);
  const double lateralRate = v * std::sin(angle_);
  const double angleRate = headingRate - kappa * arcRate;

  arc_ += arcRate * params_.dt;
  lateral_ += lateralRate * params_.dt;
  angle_ = wrapAngle(angle_ + angleRate * params_.dt);
  distance_ += arcRate * params_.dt;

  const double pos = lateral_ / halfWidth_;
  const double reward =
      params_.speedKmh * (std::cos(angle_) - std::abs(std::sin(angle_)) - std::abs(pos));
  const bool out = std::abs(pos) > 1.0;
  if (out) live_ = false;
  return {observation(), reward, out};
}

int laneAp1(std::span<const double> state, std::span<const double> nextState) {
  return std::abs(nextState[1]) - std::abs(state[1]) > 0.0 ? 0 : 1;
}

}  // namespace sapdrl::envs
