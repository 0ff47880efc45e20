#include "sapdrl/sap/knowledge.hpp"

#include <algorithm>

namespace sapdrl::sap {

std::size_t KnowledgeBuffer::size() const {
  return train_[0].size() + train_[1].size() + holdout_[0].size() + holdout_[1].size();
}

void KnowledgeBuffer::evictOldestOfClass(ApLabel label) {
  auto& tr = train(label);
  auto& ho = holdoutLane(label);
  if (tr.empty() && ho.empty()) {
    // buffer saturated entirely by the other class: evict its oldest so
    // the rare class is never dropped
    const ApLabel other = label == ApLabel::Permissible ? ApLabel::NonPermissible
                                                        : ApLabel::Permissible;
    evictOldestOfClass(other);
    return;
  }
  if (ho.empty() || (!tr.empty() && tr.front().seq < ho.front().seq)) {
    tr.pop_front();
  } else {
    ho.pop_front();
  }
}

void KnowledgeBuffer::insert(KnowledgeTuple tuple, numkit::Rng& rng) {
  if (capacity_ == 0) return;
  if (size() >= capacity_) evictOldestOfClass(tuple.label);
  const bool toHoldout = rng.uniform() < holdoutFraction_;
  auto& lane = toHoldout ? holdoutLane(tuple.label) : train(tuple.label);
  lane.push_back({nextSeq_++, std::move(tuple)});
}

std::optional<std::vector<KnowledgeTuple>> KnowledgeBuffer::sampleBalanced(
    std::size_t sampleSize, numkit::Rng& rng) const {
  const std::size_t half = sampleSize / 2;
  if (half == 0) return std::nullopt;
  if (train_[0].size() < half || train_[1].size() < half) return std::nullopt;

  std::vector<KnowledgeTuple> out;
  out.reserve(2 * half);
  for (const auto* lane : {&train_[1], &train_[0]}) {
    // partial Fisher-Yates over an index vector
    std::vector<std::size_t> idx(lane->size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < half; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniformInt(idx.size() - i));
      std::swap(idx[i], idx[j]);
      out.push_back((*lane)[idx[i]].tuple);
    }
  }
  return out;
}

std::vector<const KnowledgeTuple*> KnowledgeBuffer::holdoutRecent(std::size_t maxCount) const {
  // merge the two class lanes by recency (each lane is seq-ordered)
  std::vector<const Stamped*> all;
  all.reserve(holdoutCount());
  for (const auto& lane : holdout_)
    for (const auto& s : lane) all.push_back(&s);
  std::sort(all.begin(), all.end(),
            [](const Stamped* a, const Stamped* b) { return a->seq > b->seq; });
  if (all.size() > maxCount) all.resize(maxCount);
  std::vector<const KnowledgeTuple*> out;
  out.reserve(all.size());
  for (const auto* s : all) out.push_back(&s->tuple);
  return out;
}

void KnowledgeBuffer::dumpCsv(std::ostream& os) const {
  os << "state...,action,label,lane\n";
  auto writeLane = [&os](const std::deque<Stamped>& lane, const char* laneName) {
    for (const auto& s : lane) {
      for (double v : s.tuple.state) os << v << ',';
      os << s.tuple.action.scalar() << ',' << labelValue(s.tuple.label) << ',' << laneName << '\n';
    }
  };
  writeLane(train_[0], "train");
  writeLane(train_[1], "train");
  writeLane(holdout_[0], "holdout");
  writeLane(holdout_[1], "holdout");
}

}  // namespace sapdrl::sap
