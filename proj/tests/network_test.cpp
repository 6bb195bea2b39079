#include <gtest/gtest.h>

#include "flowbal/flowbal.hpp"

namespace fb = flowbal;

namespace {

fb::Message change(fb::NodeId src, fb::NodeId dst, fb::EdgeId e, fb::Flow payload, std::int64_t k) {
  return {src, dst, e, fb::Phase::alg1_change, payload, k};
}

}  // namespace

TEST(DelayChannel, ZeroBoundDeliversSameStep) {
  fb::DelayChannel ch(0, 42);
  fb::InFlightQueue q;
  for (std::int64_t k = 0; k < 100; ++k) {
    const auto out = fb::send(change(0, 1, 0, 1, k), ch, k, q);
    EXPECT_TRUE(out.delivered);
    EXPECT_EQ(out.deliver_at, k);
  }
}

TEST(DelayChannel, DrawsStayWithinBoundAndCoverIt) {
  fb::DelayChannel ch(10, 7);
  std::vector<int> seen(11, 0);
  for (int i = 0; i < 20000; ++i) {
    const int d = ch.draw();
    ASSERT_GE(d, 0);
    ASSERT_LE(d, 10);
    ++seen[static_cast<std::size_t>(d)];
  }
  for (int c : seen) EXPECT_GT(c, 1500);
}

TEST(DelayChannel, ScheduleIsCyclicAndValidated) {
  fb::DelayChannel ch(3, 1, {3, 0, 2});
  EXPECT_EQ(ch.draw(), 3);
  EXPECT_EQ(ch.draw(), 0);
  EXPECT_EQ(ch.draw(), 2);
  EXPECT_EQ(ch.draw(), 3);
  EXPECT_THROW(fb::DelayChannel(2, 1, {3}), std::invalid_argument);
  EXPECT_THROW(fb::DelayChannel(-1, 1), std::invalid_argument);
}

TEST(DropChannel, LosslessDeliversEverything) {
  fb::DropChannel ch(0.0, 3);
  for (int i = 0; i < 10000; ++i) ASSERT_TRUE(fb::send(change(0, 1, 0, 1, i), ch, i).delivered);
}

TEST(DropChannel, DeliveredFractionAtPointEight) {
  fb::DropChannel ch(0.8, fb::derive_stream_seed(2018, {0, 1}, fb::StreamPurpose::drop));
  int delivered = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto out = fb::send(change(0, 1, 0, 1, i), ch, i);
    if (out.delivered) {
      ++delivered;
      EXPECT_EQ(out.deliver_at, i);
    } else {
      EXPECT_EQ(out.deliver_at, -1);
    }
  }
  EXPECT_NEAR(delivered / 10000.0, 0.2, 0.02);
}

TEST(DropChannel, RejectsCertainLoss) {
  EXPECT_THROW(fb::DropChannel(1.0, 1), std::invalid_argument);
  EXPECT_THROW(fb::DropChannel(-0.1, 1), std::invalid_argument);
  EXPECT_NO_THROW(fb::DropChannel(0.999999, 1));
}

TEST(CollectAlg1, EmptyQueueGivesZero) {
  fb::InFlightQueue q;
  EXPECT_EQ(fb::collect_alg1(1, 0, 5, q), 0);
}

TEST(CollectAlg1, SumsArrivalsAtStep) {
  // +1 sent at k-3 with delay 3, +1 sent at k-1 with delay 1, both land at k = 10.
  fb::DelayChannel ch(3, 0, {3, 1});
  fb::InFlightQueue q;
  fb::send(change(0, 1, 0, +1, 7), ch, 7, q);
  fb::send(change(0, 1, 0, +1, 9), ch, 9, q);
  EXPECT_EQ(fb::collect_alg1(1, 0, 10, q), 2);
  EXPECT_EQ(fb::collect_alg1(1, 0, 9, q), 0);
  EXPECT_EQ(fb::collect_alg1(0, 0, 10, q), 0);  // other destination
  EXPECT_EQ(fb::collect_alg1(1, 3, 10, q), 0);  // other edge
}

TEST(CollectAlg1, OnlyArrivedChangesCount) {
  fb::DelayChannel ch(5, 0, {0, 5});
  fb::InFlightQueue q;
  fb::send(change(0, 1, 0, -1, 4), ch, 4, q);
  fb::send(change(0, 1, 0, +1, 4), ch, 4, q);
  EXPECT_EQ(fb::collect_alg1(1, 0, 4, q), -1);
  EXPECT_EQ(q.size(), 2u);
  q.take_due(4);
  EXPECT_EQ(q.size(), 1u);
  EXPECT_EQ(fb::collect_alg1(1, 0, 9, q), 1);
}

TEST(InFlightQueue, ConservationUnderRandomDelays) {
  fb::DelayChannel ch(6, 99);
  fb::InFlightQueue q;
  std::int64_t sent_sum = 0, got_sum = 0;
  for (std::int64_t k = 0; k < 500; ++k) {
    const auto out = fb::send(change(0, 1, 0, k, k), ch, k, q);
    ASSERT_GE(out.deliver_at, k);
    ASSERT_LE(out.deliver_at, k + 6);
    sent_sum += k;
    for (const auto& m : q.take_due(k)) {
      ASSERT_LE(m.sent_at, k);
      ASSERT_GE(m.sent_at + 6, k);
      got_sum += m.payload;
    }
  }
  for (std::int64_t k = 500; k <= 506; ++k) {
    for (const auto& m : q.take_due(k)) got_sum += m.payload;
  }
  EXPECT_TRUE(q.empty());
  EXPECT_EQ(q.total_pushed(), q.total_delivered());
  EXPECT_EQ(sent_sum, got_sum);
}

TEST(StreamSeeds, DistinctPerLinkDirectionAndPurpose) {
  const auto a = fb::derive_stream_seed(1, {0, 1}, fb::StreamPurpose::drop);
  EXPECT_NE(a, fb::derive_stream_seed(1, {1, 0}, fb::StreamPurpose::drop));
  EXPECT_NE(a, fb::derive_stream_seed(1, {0, 1}, fb::StreamPurpose::delay));
  EXPECT_NE(a, fb::derive_stream_seed(2, {0, 1}, fb::StreamPurpose::drop));
  EXPECT_EQ(a, fb::derive_stream_seed(1, {0, 1}, fb::StreamPurpose::drop));
}

namespace {

std::vector<bool> drop_pattern(const fb::ChannelConfig& cfg, fb::NodeId src, fb::NodeId dst) {
  fb::Digraph g(3, {{0, 1}, {1, 2}, {2, 0}});
  fb::Network net(g, cfg, 77);
  std::vector<bool> out;
  for (int k = 0; k < 300; ++k) out.push_back(net.send({src, dst, 0, fb::Phase::alg2_desired, 1, k}, k).delivered);
  return out;
}

}  // namespace

TEST(Network, ChangingOneLinkLeavesOthersUntouched) {
  fb::ChannelConfig a;
  a.kind = fb::ChannelKind::drop;
  a.drop_probability = 0.5;
  fb::ChannelConfig b = a;
  b.drop_q[{0, 1}] = 0.9;
  EXPECT_EQ(drop_pattern(a, 1, 2), drop_pattern(b, 1, 2));
  EXPECT_EQ(drop_pattern(a, 1, 0), drop_pattern(b, 1, 0));
  EXPECT_NE(drop_pattern(a, 0, 1), drop_pattern(b, 0, 1));
}

TEST(Network, DeterministicPerSeed) {
  fb::ChannelConfig cfg;
  cfg.kind = fb::ChannelKind::delay_drop;
  cfg.max_delay = 4;
  cfg.drop_probability = 0.3;
  fb::Digraph g(2, {{0, 1}, {1, 0}});
  auto schedule = [&](std::uint64_t seed) {
    fb::Network net(g, cfg, seed);
    std::vector<std::int64_t> at;
    for (int k = 0; k < 200; ++k) at.push_back(net.send({0, 1, 0, fb::Phase::alg1_change, 1, k}, k).deliver_at);
    return at;
  };
  EXPECT_EQ(schedule(5), schedule(5));
  EXPECT_NE(schedule(5), schedule(6));
}

TEST(Network, RejectsNonAdjacentSend) {
  fb::Digraph g(3, {{0, 1}, {1, 2}, {2, 0}});
  fb::Network net(g, {}, 1);
  EXPECT_NO_THROW(net.send({1, 0, 0, fb::Phase::alg1_change, 0, 0}, 0));
  fb::Digraph h(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  fb::Network net2(h, {}, 1);
  EXPECT_THROW(net2.send({0, 2, 0, fb::Phase::alg1_change, 0, 0}, 0), std::invalid_argument);
}
