#include <gtest/gtest.h>

#include "flowbal/flowbal.hpp"
#include "support.hpp"

namespace fb = flowbal;

namespace {

fb::Trace converged_trace() {
  auto sc = fb::make_preset("fig2", fb::kDefaultPresetGraphSeed, 8);
  sc.seed = 5;
  return fb::run(sc);
}

// Re-derives a record's balances after its flows were edited.
void refresh(fb::Trace& t, std::size_t i) {
  auto& r = t.records[i];
  r.balance = fb::node_balances(t.graph, r.flow);
  r.perceived_balance.assign(t.graph.size(), 0);
  for (fb::EdgeId e = 0; e < t.graph.edge_count(); ++e) {
    r.perceived_balance[t.graph.edge(e).to] += r.perceived[e];
    r.perceived_balance[t.graph.edge(e).from] -= r.flow[e];
  }
  r.epsilon = r.epsilon_perceived = 0;
  for (fb::NodeId v = 0; v < t.graph.size(); ++v) {
    r.epsilon += std::llabs(r.balance[v]);
    r.epsilon_perceived += std::llabs(r.perceived_balance[v]);
  }
}

}  // namespace

TEST(Audit, ConvergedTraceIsClean) {
  const auto t = converged_trace();
  ASSERT_TRUE(t.outcome.converged);
  const auto rep = fb::audit(t);
  EXPECT_TRUE(rep.clean()) << rep.to_string();
  EXPECT_EQ(rep.records_checked, t.records.size());
  EXPECT_EQ(rep.subsets_per_record, (1u << 8) - 2);
}

TEST(Audit, SampledSubsetsAboveTenNodes) {
  auto sc = fb::make_preset("sync");
  const auto rep = fb::audit(fb::run(sc));
  EXPECT_EQ(rep.subsets_per_record, 100u);
  EXPECT_TRUE(rep.clean()) << rep.to_string();
}

TEST(Audit, FlowAboveIntervalIsReported) {
  auto t = converged_trace();
  const std::size_t i = t.records.size() / 2;
  t.records[i].flow[0] = t.intervals[0].hi + 1;
  t.records[i].perceived[0] = t.intervals[0].lo;
  refresh(t, i);
  const auto rep = fb::audit(t);
  ASSERT_GE(rep.count(fb::Check::interval), 1u);
  bool at_k = false;
  for (const auto& v : rep.violations) at_k |= v.check == fb::Check::interval && v.k == t.records[i].k;
  EXPECT_TRUE(at_k);
  EXPECT_EQ(rep.count(fb::Check::conservation), 0u);
  EXPECT_EQ(rep.count(fb::Check::record), 0u);
}

TEST(Audit, StaleRecordIsReported) {
  auto t = converged_trace();
  t.records[1].epsilon += 2;
  const auto rep = fb::audit(t);
  EXPECT_GE(rep.count(fb::Check::record), 1u);
  EXPECT_GE(rep.count(fb::Check::twice_negative), 1u);
}

TEST(Audit, PerceivedAboveActualIsReported) {
  auto t = converged_trace();
  auto& r = t.records.back();
  r.perceived[0] = r.flow[0] + 1;
  t.intervals[0].hi += 1;
  refresh(t, t.records.size() - 1);
  const auto rep = fb::audit(t);
  EXPECT_GE(rep.count(fb::Check::perceived_below), 1u);
}

TEST(Audit, EpsilonIncreaseAndNewNegativeNodeAreReported) {
  auto t = converged_trace();
  ASSERT_GE(t.records.size(), 3u);
  // Replace the last record by a copy of the first, which is more imbalanced.
  const auto k = t.records.back().k;
  t.records.back() = t.records.front();
  t.records.back().k = k;
  const auto rep = fb::audit(t);
  EXPECT_GE(rep.count(fb::Check::monotone), 1u);
  EXPECT_GE(rep.count(fb::Check::negative_set), 1u);
}

TEST(Audit, ReportListsCounts) {
  auto t = converged_trace();
  t.records[1].epsilon += 2;
  const auto text = fb::audit(t).to_string();
  EXPECT_NE(text.find("(r) record consistency"), std::string::npos);
}
