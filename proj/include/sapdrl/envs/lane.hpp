#pragma once

#include <span>

#include <filesystem>
#include <string>
#include <vector>

#include "sapdrl/envs/env.hpp"

namespace sapdrl::envs {

/// A closed course described as a sequence of constant-curvature pieces.
/// Straights have curvature 0; arcs have curvature +-1/radius (positive
/// bends left). The car's travel distance wraps modulo the total length.
struct TrackSpec {
  struct Segment {
    double length;     // meters along the centerline
    double curvature;  // 1/m, signed
  };
  std::string name;
  std::vector<Segment> segments;
  double width = 10.0;  // meters, edge to edge

  double totalLength() const;
  double curvatureAt(double s) const;
  void validate() const;  // throws ConfigError

  static TrackSpec fromJsonFile(const std::filesystem::path& path);
  static TrackSpec fromJsonText(const std::string& text);
};

/// The training course and four held-out test courses. All mix straights
/// with left and right arcs of three curvature grades.
TrackSpec defaultTrainingTrack();
std::vector<TrackSpec> testTracks();
TrackSpec trackByName(const std::string& name);  // "train", "test1".."test4"

/// Kinematic lane keeping at fixed speed. State mirrors the usual driving
/// sensor set: [angle, trackPos, speedX, speedY, speedZ] where angle is
/// the heading error to the track axis in [-pi, pi), trackPos the lateral
/// offset normalized by the half-width (+1 = left edge, -1 = right edge),
/// and speeds are km/h. The action is a steering value in [-1, 1] (+1 =
/// full left) mapped to a wheel angle of up to 0.366519 rad on a bicycle
/// model with a 2.5 m wheelbase, integrated at 0.02 s against the track's
/// curvature. Reward is speedX*(cos(angle) - |sin(angle)| - |trackPos|);
/// the episode ends when |trackPos| > 1.
class LaneEnv final : public Env {
 public:
  struct Params {
    double speedKmh = 100.0;
    double wheelbase = 2.5;
    double maxWheelAngle = 0.366519;
    double dt = 0.02;
  };

  explicit LaneEnv(TrackSpec track);
  LaneEnv(TrackSpec track, Params p);

  std::vector<double> reset(numkit::Rng& rng) override;
  StepResult step(const agents::ActionValue& action) override;
  std::size_t stateDim() const override { return 5; }
  agents::ActionSpace actionSpace() const override {
    return agents::ActionSpace::continuous(-1.0, 1.0);
  }
  std::vector<double> observation() const override;
  bool episodeLive() const override { return live_; }
  std::unique_ptr<Env> clone() const override { return std::make_unique<LaneEnv>(*this); }
  std::vector<double> observationScale() const override;

  double trackPos() const { return lateral_ / halfWidth_; }
  double headingError() const { return angle_; }
  double distanceDriven() const { return distance_; }
  bool lapCompleted() const { return distance_ >= track_.totalLength(); }
  const TrackSpec& track() const { return track_; }
  const Params& params() const { return params_; }

 private:
  TrackSpec track_;
  Params params_;
  double halfWidth_;
  double angle_ = 0.0;    // heading error, rad
  double lateral_ = 0.0;  // meters, positive = left of axis
  double arc_ = 0.0;      // position along the centerline, wraps
  double distance_ = 0.0; // total distance this episode, does not wrap
  bool live_ = false;
};

/// Permissibility of an executed steering action: non-permissible when the
/// car's distance to the track axis grew.
int laneAp1(std::span<const double> state, std::span<const double> nextState);

}  // namespace sapdrl::envs
