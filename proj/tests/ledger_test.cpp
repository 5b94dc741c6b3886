#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dlife/errors.hpp"
#include "dlife/ledger.hpp"

namespace dlife {
namespace {

const SampleConfig kHourly{24, 86400};

// Direct evaluation of the TECD sum with 1-based wrap (k > t refers to k - t).
double tecd_oracle(const std::vector<double>& ad, int i) {
  const int t = static_cast<int>(ad.size());
  double w = 0;
  for (int k = i; k <= i + t - 1; ++k) {
    const int idx = k >= t ? k - t : k;
    w += static_cast<double>(t) / static_cast<double>(t + k - i) * ad[idx];
  }
  return w;
}

// Rolls every slot up to (not including) `until`.
void roll_until(SocialLedger& ledger, SampleSlot until) {
  while (ledger.clock() < until) ledger.roll_sample(ledger.clock());
}

TEST(LedgerTest, FragmentsInOneSlotSum) {
  SocialLedger l(0, kHourly);
  l.record_contact_fragment(1, {0, 0}, 100);
  l.record_contact_fragment(1, {0, 0}, 200);
  EXPECT_DOUBLE_EQ(l.peer_stats(1)->at(0).tct_current_day, 300);
  EXPECT_TRUE(l.current_neighbors().contains(1));
}

TEST(LedgerTest, RejectsEmptyAndFutureFragments) {
  SocialLedger l(0, kHourly);
  EXPECT_THROW(l.record_contact_fragment(1, {0, 0}, 0), RecordError);
  EXPECT_THROW(l.record_contact_fragment(1, {0, 1}, 10), OrderingError);
  EXPECT_THROW(l.roll_sample({0, 1}), OrderingError);
  l.roll_sample({0, 0});
  EXPECT_THROW(l.roll_sample({0, 0}), OrderingError);
}

TEST(LedgerTest, SamplesAccumulateIndependently) {
  SocialLedger l(0, kHourly);
  roll_until(l, {0, 7});
  l.record_contact_fragment(1, {0, 7}, 1800);
  l.roll_sample({0, 7});
  l.record_contact_fragment(1, {0, 8}, 900);
  EXPECT_DOUBLE_EQ(l.peer_stats(1)->at(7).ad, 1800);
  EXPECT_DOUBLE_EQ(l.peer_stats(1)->at(8).tct_current_day, 900);
  EXPECT_DOUBLE_EQ(l.peer_stats(1)->at(8).ad, 0);
}

TEST(LedgerTest, RollComputesCumulativeMovingAverage) {
  SampleConfig daily{1, 86400};
  SocialLedger l(0, daily);
  l.record_contact_fragment(1, {0, 0}, 100);
  l.roll_sample({0, 0});
  EXPECT_DOUBLE_EQ(l.peer_stats(1)->at(0).ad, 100);  // (100 + 0) / 1
  l.record_contact_fragment(1, {1, 0}, 200);
  l.roll_sample({1, 0});
  EXPECT_DOUBLE_EQ(l.peer_stats(1)->at(0).ad, 150);  // (200 + 100) / 2
  EXPECT_EQ(l.peer_stats(1)->at(0).days_counted, 2);
  EXPECT_DOUBLE_EQ(l.peer_stats(1)->at(0).tct_current_day, 0);
}

TEST(LedgerTest, ZeroContactDaysStillCount) {
  SampleConfig daily{1, 86400};
  SocialLedger l(0, daily);
  l.record_contact_fragment(1, {0, 0}, 300);
  l.roll_sample({0, 0});
  l.roll_sample({1, 0});
  l.roll_sample({2, 0});
  EXPECT_DOUBLE_EQ(l.peer_stats(1)->at(0).ad, 100);
  // A peer first met on day 3 averages over all four days.
  l.record_contact_fragment(2, {3, 0}, 400);
  l.roll_sample({3, 0});
  EXPECT_DOUBLE_EQ(l.peer_stats(2)->at(0).ad, 100);
}

TEST(LedgerTest, ZeroTctIsAFixedPoint) {
  SampleConfig daily{1, 86400};
  SocialLedger l(0, daily);
  l.note_encounter(1, 0.2);
  for (int d = 0; d < 20; ++d) l.roll_sample({d, 0});
  EXPECT_EQ(l.peer_stats(1)->at(0).ad, 0.0);
}

TEST(LedgerTest, ConstantDailyTctAveragesToItself) {
  SampleConfig daily{1, 86400};
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const double c = std::uniform_real_distribution<double>(1, 3600)(rng);
    const int days = 1 + static_cast<int>(rng() % 60);
    SocialLedger l(0, daily);
    for (int d = 0; d < days; ++d) {
      l.record_contact_fragment(1, {d, 0}, c);
      l.roll_sample({d, 0});
    }
    ASSERT_NEAR(l.peer_stats(1)->at(0).ad, c, 1e-9 * c);
  }
}

TEST(LedgerTest, LateFragmentFoldsIntoRolledAverage) {
  // Recording a fragment after its slot rolled must match having recorded it
  // on time.
  SampleConfig cfg{4, 86400};
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    SocialLedger on_time(0, cfg);
    SocialLedger late(0, cfg);
    const int days = 1 + static_cast<int>(rng() % 5);
    const SampleSlot frag{static_cast<std::int64_t>(rng() % days), static_cast<int>(rng() % 4)};
    const double secs = std::uniform_real_distribution<double>(1, 5000)(rng);
    const SampleSlot end{days, 0};
    while (on_time.clock() < end) {
      if (on_time.clock() == frag) on_time.record_contact_fragment(1, frag, secs);
      on_time.roll_sample(on_time.clock());
    }
    roll_until(late, end);
    late.record_contact_fragment(1, frag, secs);
    ASSERT_NEAR(late.peer_stats(1)->at(frag.sample).ad, on_time.peer_stats(1)->at(frag.sample).ad,
                1e-9 * secs);
  }
}

TEST(TecdTest, Examples) {
  SocialLedger l(0, kHourly);
  l.note_encounter(1, 0.2);
  EXPECT_EQ(l.tecd_weight(1, 0), 0.0);
  EXPECT_EQ(l.tecd_weight(99, 3), 0.0);  // unknown peer
  l.set_average(1, 5, 3600);
  EXPECT_DOUBLE_EQ(l.tecd_weight(1, 5), 3600);

  SocialLedger four(0, SampleConfig{4, 86400});
  four.set_average(1, 0, 100);
  four.set_average(1, 1, 200);
  four.set_average(1, 2, 0);
  four.set_average(1, 3, 400);
  EXPECT_NEAR(four.tecd_weight(1, 0), 488.57142857142856, 1e-9);
}

TEST(TecdTest, CoefficientsDecreaseFromOne) {
  const int t = 24;
  double previous = 2.0;
  for (int k = 0; k < t; ++k) {
    SocialLedger probe(0, kHourly);
    probe.set_average(1, k, 1.0);
    const double coeff = probe.tecd_weight(1, 0);
    EXPECT_LT(coeff, previous);
    previous = coeff;
    if (k == 0) EXPECT_DOUBLE_EQ(coeff, 1.0);
    if (k == t - 1) EXPECT_DOUBLE_EQ(coeff, 24.0 / 47.0);
  }
}

std::vector<double> random_ad(std::mt19937_64& rng, int t) {
  std::vector<double> ad(t);
  std::uniform_real_distribution<double> dist(0, 3600);
  for (auto& v : ad) v = (rng() % 3 == 0) ? 0.0 : dist(rng);
  return ad;
}

SocialLedger ledger_with(const std::vector<std::vector<double>>& ads, SampleConfig cfg,
                         double d = 0.8) {
  SocialLedger l(0, cfg, d);
  for (std::size_t p = 0; p < ads.size(); ++p) {
    for (int s = 0; s < cfg.samples_per_day; ++s) l.set_average(p + 1, s, ads[p][s]);
  }
  return l;
}

TEST(TecdTest, LinearAndRankInvariantUnderScaling) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int t = 1 + static_cast<int>(rng() % 24);
    SampleConfig real{t, static_cast<std::int64_t>(t) * 3600};
    const auto p = random_ad(rng, t);
    const auto q = random_ad(rng, t);
    const double c = std::uniform_real_distribution<double>(0.01, 100)(rng);
    std::vector<double> pc = p;
    std::vector<double> qc = q;
    for (auto& v : pc) v *= c;
    for (auto& v : qc) v *= c;
    const auto base = ledger_with({p, q}, real);
    const auto scaled = ledger_with({pc, qc}, real);
    const int i = static_cast<int>(rng() % t);
    const double wp = base.tecd_weight(1, i);
    ASSERT_NEAR(scaled.tecd_weight(1, i), c * wp, 1e-9 * std::max(1.0, c * wp));
    const bool before = base.tecd_weight(1, i) > base.tecd_weight(2, i);
    const bool after = scaled.tecd_weight(1, i) > scaled.tecd_weight(2, i);
    if (std::abs(base.tecd_weight(1, i) - base.tecd_weight(2, i)) > 1e-6) {
      ASSERT_EQ(before, after);
    }
  }
}

TEST(TecdTest, DominatingAveragesWeighMore) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const int t = 1 + static_cast<int>(rng() % 24);
    SampleConfig cfg{t, static_cast<std::int64_t>(t) * 3600};
    auto q = random_ad(rng, t);
    auto p = q;
    p[rng() % t] += 1.0;
    for (auto& v : p) v += (rng() % 2) ? 0.5 : 0.0;
    const auto l = ledger_with({p, q}, cfg);
    const int i = static_cast<int>(rng() % t);
    ASSERT_GT(l.tecd_weight(1, i), l.tecd_weight(2, i));
  }
}

TEST(TecdTest, CachedWeightsTrackEveryAverageChange) {
  SampleConfig cfg{4, 86400};
  std::mt19937_64 rng(29);
  SocialLedger l(0, cfg);
  for (int step = 0; step < 400; ++step) {
    const int sample = static_cast<int>(rng() % 4);
    const auto& cached = l.weights_to_all_neighbors(sample);
    for (NodeId p = 1; p <= 5; ++p) {
      const double w = l.tecd_weight(p, sample);
      const auto it = cached.find(p);
      ASSERT_EQ(it == cached.end() ? 0.0 : it->second, w);
    }
    const NodeId peer = 1 + static_cast<NodeId>(rng() % 5);
    const double secs = std::uniform_real_distribution<double>(1, 900)(rng);
    switch (rng() % 4) {
      case 0: l.record_contact_fragment(peer, l.clock(), secs); break;
      case 1: l.roll_sample(l.clock()); break;
      case 2:
        if (l.clock().day > 0) l.record_contact_fragment(peer, {l.clock().day - 1, sample}, secs);
        break;
      default: l.set_average(peer, sample, secs); break;
    }
  }
}

TEST(ImportanceTest, Examples) {
  SocialLedger no_damping(0, kHourly, 0.0);
  no_damping.set_average(1, 0, 5000);
  no_damping.note_encounter(1, 3.0);
  EXPECT_DOUBLE_EQ(no_damping.update_importance(0), 1.0);

  SocialLedger alone(0, kHourly, 0.8);
  EXPECT_DOUBLE_EQ(alone.update_importance(0), 0.2);
  EXPECT_DOUBLE_EQ(alone.importance(3), 0.2);

  // One neighbor with weight 0.5 (ad 0.5 at the current sample only) and
  // importance 1.
  SocialLedger one(0, kHourly, 0.8);
  one.set_average(1, 0, 0.5);
  one.note_encounter(1, 1.0);
  EXPECT_NEAR(one.update_importance(0), 0.6, 1e-12);
}

TEST(ImportanceTest, NeighborSetResetsOnRoll) {
  SocialLedger l(0, kHourly, 0.8);
  l.set_average(1, 1, 10);
  l.note_encounter(1, 1.0);
  EXPECT_EQ(l.current_neighbors().size(), 1u);
  l.roll_sample({0, 0});
  EXPECT_TRUE(l.current_neighbors().empty());
  EXPECT_DOUBLE_EQ(l.update_importance(1), 0.2);
  // The cached importance survives the roll.
  EXPECT_DOUBLE_EQ(l.known_importance(1), 1.0);
  EXPECT_DOUBLE_EQ(l.known_importance(7), 0.2);
}

TEST(ImportanceTest, BoundedAndMatchesFormula) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const int t = 1 + static_cast<int>(rng() % 24);
    SampleConfig cfg{t, static_cast<std::int64_t>(t) * 3600};
    const double d = std::uniform_real_distribution<double>(0, 1)(rng);
    SocialLedger l(0, cfg, d);
    const int peers = static_cast<int>(rng() % 6);
    const int i = static_cast<int>(rng() % t);
    double sum = 0;
    double max_w = 0;
    double max_i = 0;
    for (int p = 1; p <= peers; ++p) {
      const auto ad = random_ad(rng, t);
      for (int s = 0; s < t; ++s) l.set_average(p, s, ad[s]);
      const double iy = std::uniform_real_distribution<double>(1 - d, 5)(rng);
      l.note_encounter(p, iy);
      const double w = tecd_oracle(ad, i);
      sum += w * iy;
      max_w = std::max(max_w, w);
      max_i = std::max(max_i, iy);
    }
    const double expected = (1 - d) + (peers ? d * sum / peers : 0.0);
    const double got = l.update_importance(i);
    ASSERT_NEAR(got, expected, 1e-9 * std::max(1.0, expected));
    ASSERT_GE(got, (1 - d) * (1 - 1e-12));  // log-domain rounding
    ASSERT_LE(got, (1 - d) + d * max_w * max_i + 1e-9 * std::max(1.0, got));
  }
}

TEST(LedgerTest, RejectsBadDamping) {
  EXPECT_THROW(SocialLedger(0, kHourly, 1.5), ConfigError);
  EXPECT_THROW(SocialLedger(0, kHourly, -0.1), ConfigError);
}

}  // namespace
}  // namespace dlife
