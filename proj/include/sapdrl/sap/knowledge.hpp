#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <vector>

#include "sapdrl/agents/action.hpp"
#include "sapdrl/numkit/rng.hpp"
#include "sapdrl/sap/ap_function.hpp"

namespace sapdrl::sap {

/// A labeled (state, action) example produced by an AP function.
struct KnowledgeTuple {
  std::vector<double> state;
  agents::ActionValue action;
  ApLabel label = ApLabel::Permissible;
};

/// Capacity-bounded store of labeled examples. Incoming tuples are routed
/// to a training lane or a holdout lane at 9:1 by a seeded draw; when the
/// buffer is full an incoming tuple evicts the oldest tuple of its own
/// class.
class KnowledgeBuffer {
 public:
  explicit KnowledgeBuffer(std::size_t capacity, double holdoutFraction = 0.1)
      : capacity_(capacity), holdoutFraction_(holdoutFraction) {}

  void insert(KnowledgeTuple tuple, numkit::Rng& rng);

  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  std::size_t trainCount(ApLabel label) const { return train(label).size(); }
  std::size_t holdoutCount() const { return holdout_[0].size() + holdout_[1].size(); }
  std::size_t holdoutCount(ApLabel label) const { return holdoutLane(label).size(); }

  /// Exactly half positive / half negative training tuples, sampled
  /// uniformly without replacement; nullopt when either class holds fewer
  /// than sampleSize/2 training tuples.
  std::optional<std::vector<KnowledgeTuple>> sampleBalanced(std::size_t sampleSize,
                                                            numkit::Rng& rng) const;

  /// The most recent holdout tuples across both classes, newest included,
  /// at most maxCount of them.
  std::vector<const KnowledgeTuple*> holdoutRecent(std::size_t maxCount) const;

  /// CSV dump: state...,action,label,lane
  void dumpCsv(std::ostream& os) const;

 private:
  struct Stamped {
    std::uint64_t seq;
    KnowledgeTuple tuple;
  };

  const std::deque<Stamped>& train(ApLabel l) const { return train_[labelValue(l)]; }
  std::deque<Stamped>& train(ApLabel l) { return train_[labelValue(l)]; }
  const std::deque<Stamped>& holdoutLane(ApLabel l) const { return holdout_[labelValue(l)]; }
  std::deque<Stamped>& holdoutLane(ApLabel l) { return holdout_[labelValue(l)]; }
  void evictOldestOfClass(ApLabel label);

  std::size_t capacity_;
  double holdoutFraction_;
  std::uint64_t nextSeq_ = 0;
  std::deque<Stamped> train_[2], holdout_[2];
};

}  // namespace sapdrl::sap
