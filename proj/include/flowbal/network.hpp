#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowbal/digraph.hpp"

namespace flowbal {

enum class Phase : std::uint8_t { alg1_change, alg2_desired, alg2_new };

/// A protocol payload in transit between neighbours `src` and `dst`.
struct Message {
  NodeId src = 0;
  NodeId dst = 0;
  EdgeId edge = 0;
  Phase phase = Phase::alg1_change;
  Flow payload = 0;
  std::int64_t sent_at = 0;

  friend bool operator==(const Message&, const Message&) = default;
};

/// One direction of a communication link.
struct LinkKey {
  NodeId src = 0;
  NodeId dst = 0;

  friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
};

enum class StreamPurpose : std::uint64_t { delay = 1, drop = 2 };

/// splitmix64 finaliser.
inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the random stream for one (link direction, purpose):
///   mix64(mix64(mix64(mix64(master) ^ src) ^ dst) ^ purpose)
/// Streams of different links never share state, so changing one link's
/// parameters leaves every other link's draws untouched.
inline std::uint64_t derive_stream_seed(std::uint64_t master, LinkKey link, StreamPurpose purpose) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ static_cast<std::uint64_t>(link.src));
  h = mix64(h ^ static_cast<std::uint64_t>(link.dst));
  return mix64(h ^ static_cast<std::uint64_t>(purpose));
}

namespace detail {

// Unbiased integer in [0, bound] from a 64-bit engine. Written out rather than
// using std::uniform_int_distribution, whose output differs between standard
// library implementations.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t range = bound + 1;
  if (range == 0) return rng();
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % range;
}

}  // namespace detail

/// Bounded-delay channel: each message is delayed by an integer in
/// [0, bound], either drawn uniformly from the channel's stream or taken
/// cyclically from a fixed schedule.
class DelayChannel {
 public:
  DelayChannel() = default;
  DelayChannel(int bound, std::uint64_t stream_seed, std::vector<int> schedule = {})
      : bound_(bound), schedule_(std::move(schedule)), rng_(stream_seed) {
    if (bound_ < 0) throw std::invalid_argument("delay bound must be nonnegative");
    for (int d : schedule_) {
      if (d < 0 || d > bound_) throw std::invalid_argument("scheduled delay outside [0, bound]");
    }
  }

  int bound() const noexcept { return bound_; }

  int draw() {
    const auto ordinal = sent_++;
    if (!schedule_.empty()) return schedule_[ordinal % schedule_.size()];
    if (bound_ == 0) return 0;
    return static_cast<int>(detail::bounded_draw(rng_, static_cast<std::uint64_t>(bound_)));
  }

 private:
  int bound_ = 0;
  std::vector<int> schedule_;
  std::mt19937_64 rng_;
  std::uint64_t sent_ = 0;
};

/// Bernoulli loss channel: each transmission is dropped independently with
/// probability q in [0, 1).
class DropChannel {
 public:
  DropChannel() = default;
  DropChannel(double q, std::uint64_t stream_seed) : q_(q), rng_(stream_seed) {
    if (!(q_ >= 0.0 && q_ < 1.0)) throw std::invalid_argument("drop probability must lie in [0, 1)");
    // Drop iff a uniform 64-bit draw falls below q * 2^64.
    const double scaled = std::ldexp(q_, 64);
    threshold_ = scaled >= 0x1p64 ? UINT64_MAX : static_cast<std::uint64_t>(scaled);
  }

  double q() const noexcept { return q_; }

  bool draw_delivered() {
    if (threshold_ == 0) return true;
    return rng_() >= threshold_;
  }

 private:
  double q_ = 0.0;
  std::uint64_t threshold_ = 0;
  std::mt19937_64 rng_;
};

/// Messages awaiting delivery, keyed by delivery step.
class InFlightQueue {
 public:
  void push(const Message& m, std::int64_t deliver_at) {
    pending_[deliver_at].push_back(m);
    ++size_;
    ++total_pushed_;
  }

  const std::vector<Message>& due(std::int64_t k) const {
    static const std::vector<Message> kNone;
    auto it = pending_.find(k);
    return it == pending_.end() ? kNone : it->second;
  }

  /// Removes the messages delivered at step k and returns them.
  std::vector<Message> take_due(std::int64_t k) {
    auto it = pending_.find(k);
    if (it == pending_.end()) return {};
    auto out = std::move(it->second);
    pending_.erase(it);
    size_ -= out.size();
    total_delivered_ += out.size();
    return out;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::uint64_t total_pushed() const noexcept { return total_pushed_; }
  std::uint64_t total_delivered() const noexcept { return total_delivered_; }

  /// Earliest step with a pending message, or -1.
  std::int64_t next_due() const { return pending_.empty() ? -1 : pending_.begin()->first; }

 private:
  std::map<std::int64_t, std::vector<Message>> pending_;
  std::size_t size_ = 0;
  std::uint64_t total_pushed_ = 0;
  std::uint64_t total_delivered_ = 0;
};

struct DeliveryOutcome {
  bool delivered = false;
  std::int64_t deliver_at = -1;  // step of delivery; -1 when dropped
};

/// Schedules `m` for delivery at k + tau.
inline DeliveryOutcome send(const Message& m, DelayChannel& channel, std::int64_t k, InFlightQueue& queue) {
  const std::int64_t at = k + channel.draw();
  queue.push(m, at);
  return {true, at};
}

/// Delivered in the same step with probability 1 - q, otherwise lost.
inline DeliveryOutcome send(const Message&, DropChannel& channel, std::int64_t k) {
  if (channel.draw_delivered()) return {true, k};
  return {false, -1};
}

/// Sum of the payloads that reach `dst` about `edge` at step k; 0 if none.
inline Flow collect_alg1(NodeId dst, EdgeId edge, std::int64_t k, const InFlightQueue& queue) {
  Flow sum = 0;
  for (const auto& m : queue.due(k)) {
    if (m.dst == dst && m.edge == edge && m.phase == Phase::alg1_change) sum += m.payload;
  }
  return sum;
}

enum class ChannelKind : std::uint8_t { delay, drop, delay_drop };

inline const char* to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::delay: return "delay";
    case ChannelKind::drop: return "drop";
    case ChannelKind::delay_drop: return "delay+drop";
  }
  return "?";
}

/// Channel parameters for a whole network: uniform values plus optional
/// per-link-direction overrides.
struct ChannelConfig {
  ChannelKind kind = ChannelKind::delay;
  int max_delay = 0;
  double drop_probability = 0.0;
  std::map<LinkKey, int> delay_bound;
  std::map<LinkKey, double> drop_q;
  std::map<LinkKey, std::vector<int>> delay_schedule;

  bool uses_delay() const noexcept { return kind != ChannelKind::drop; }
  bool uses_drop() const noexcept { return kind != ChannelKind::delay; }

  int bound_for(LinkKey l) const {
    if (!uses_delay()) return 0;
    auto it = delay_bound.find(l);
    return it == delay_bound.end() ? max_delay : it->second;
  }

  double q_for(LinkKey l) const {
    if (!uses_drop()) return 0.0;
    auto it = drop_q.find(l);
    return it == drop_q.end() ? drop_probability : it->second;
  }

  friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

/// All channels of a network plus the shared in-flight queue. Combined
/// delay+drop channels apply the drop draw first, then the delay.
class Network {
 public:
  Network(const Digraph& g, const ChannelConfig& cfg, std::uint64_t seed) {
    for (NodeId v = 0; v < g.size(); ++v) {
      for (NodeId w : g.neighbors(v)) {
        const LinkKey key{v, w};
        Link link;
        link.delay = DelayChannel(cfg.bound_for(key), derive_stream_seed(seed, key, StreamPurpose::delay),
                                  cfg.uses_delay() && cfg.delay_schedule.count(key)
                                      ? cfg.delay_schedule.at(key)
                                      : std::vector<int>{});
        link.drop = DropChannel(cfg.q_for(key), derive_stream_seed(seed, key, StreamPurpose::drop));
        max_delay_ = std::max(max_delay_, link.delay.bound());
        links_.emplace(key, std::move(link));
      }
    }
  }

  /// Sends through the (src, dst) link. Delivered messages are queued for
  /// their delivery step; the caller decides whether to read the queue or use
  /// the outcome directly.
  DeliveryOutcome send(const Message& m, std::int64_t k) {
    auto it = links_.find({m.src, m.dst});
    if (it == links_.end()) {
      throw std::invalid_argument("no communication link " + node_label(m.src) + "-" + node_label(m.dst));
    }
    auto& link = it->second;
    ++sent_;
    if (!flowbal::send(m, link.drop, k).delivered) {
      ++dropped_;
      return {false, -1};
    }
    return flowbal::send(m, link.delay, k, queue_);
  }

  InFlightQueue& queue() noexcept { return queue_; }
  const InFlightQueue& queue() const noexcept { return queue_; }
  int max_delay() const noexcept { return max_delay_; }
  std::uint64_t sent() const noexcept { return sent_; }
  std::uint64_t dropped() const noexcept { return dropped_; }

 private:
  struct Link {
    DelayChannel delay;
    DropChannel drop;
  };
  std::map<LinkKey, Link> links_;
  InFlightQueue queue_;
  int max_delay_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t dropped_ = 0;
};

}  // namespace flowbal
