#include <gtest/gtest.h>

#include <functional>

#include "typeprior/opponents.hpp"
#include "typeprior/type_pool.hpp"

using namespace typeprior;

namespace {

const Game kPrisonersDilemma(Game::Encoding{3, 3, 1, 4, 4, 1, 2, 2});
// Column is indifferent when row plays action 0 with probability 1/4.
const Game kCrossing(Game::Encoding{4, 1, 1, 4, 2, 3, 3, 2});

// Reference fictitious play from a whole history. `key(t)` names the bucket
// that round t's row action is counted in, or -1 to skip it; `now` is the
// bucket the next action is chosen from.
ActionDist reference_fp(const Game& g, const History& h, const std::function<int(std::size_t)>& key, int now) {
  if (now < 0) return {0.5, 0.5};
  double n0 = 0, n1 = 0;
  for (std::size_t t = 0; t < h.size(); ++t) {
    if (key(t) != now) continue;
    (h[t].row == 0 ? n0 : n1) += 1;
  }
  if (n0 + n1 == 0) return {0.5, 0.5};
  const double q = n0 / (n0 + n1);
  const double v0 = q * g.payoff(Seat::col, 0, 0) + (1 - q) * g.payoff(Seat::col, 1, 0);
  const double v1 = q * g.payoff(Seat::col, 0, 1) + (1 - q) * g.payoff(Seat::col, 1, 1);
  if (std::abs(v0 - v1) <= 1e-12 * std::max(1.0, std::abs(v0))) return {0.5, 0.5};
  return degenerate(v0 > v1 ? 0 : 1);
}

ActionDist reference_plain(const Game& g, const History& h) {
  return reference_fp(g, h, [](std::size_t) { return 0; }, 0);
}

ActionDist reference_conditioned(const Game& g, const History& h) {
  auto key = [&](std::size_t t) { return t == 0 ? -1 : h[t - 1].cell(); };
  return reference_fp(g, h, key, h.size() == 0 ? -1 : h[h.size() - 1].cell());
}

History from_rows(std::initializer_list<int> rows, int col = 0) {
  History h;
  for (int r : rows) h.push({r, col});
  return h;
}

}  // namespace

TEST(Opponent, NamesRoundTrip) {
  for (OpponentKind k : {OpponentKind::rt, OpponentKind::fp, OpponentKind::cfp})
    EXPECT_EQ(parse_opponent(to_string(k)), k);
  EXPECT_THROW(parse_opponent("xyz"), std::invalid_argument);
}

TEST(FictitiousPlay, FirstRoundIsUniform) {
  EXPECT_EQ(fp_act(kCrossing, History{}), (ActionDist{0.5, 0.5}));
  EXPECT_EQ(cfp_act(kCrossing, History{}), (ActionDist{0.5, 0.5}));
}

TEST(FictitiousPlay, BestRespondsToCounts) {
  EXPECT_EQ(fp_act(kCrossing, from_rows({0})), degenerate(1));
  EXPECT_EQ(fp_act(kCrossing, from_rows({1})), degenerate(0));
  EXPECT_EQ(fp_act(kCrossing, from_rows({0, 0, 1})), degenerate(1));
  EXPECT_EQ(fp_act(kCrossing, from_rows({1, 1, 0})), degenerate(1));
  EXPECT_EQ(fp_act(kCrossing, from_rows({1, 1, 1, 1, 1, 0})), degenerate(0));
  // Dominant action regardless of counts.
  EXPECT_EQ(fp_act(kPrisonersDilemma, from_rows({0, 0, 0})), degenerate(1));
  EXPECT_EQ(fp_act(kPrisonersDilemma, from_rows({1})), degenerate(1));
}

TEST(FictitiousPlay, IndifferenceIsUniform) {
  EXPECT_EQ(fp_act(kCrossing, from_rows({0, 1, 1, 1})), (ActionDist{0.5, 0.5}));
  EXPECT_EQ(fp_act(kCrossing, from_rows({1, 0, 1, 1, 1, 1, 1, 0})), (ActionDist{0.5, 0.5}));
}

TEST(ConditionedFictitiousPlay, SkipsTheFirstRound) {
  // Round 0 is not counted, so the (0, 0) bucket is still empty.
  EXPECT_EQ(cfp_act(kCrossing, from_rows({0})), (ActionDist{0.5, 0.5}));
  FictitiousPlayer fp(kCrossing, Conditioning::previous_joint_action);
  fp.observe({0, 0});
  for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(fp.count(b, 0) + fp.count(b, 1), 0.0);
  fp.observe({1, 0});
  EXPECT_EQ(fp.count(0, 1), 1.0);
  fp.observe({1, 0});
  // Last joint action (1, 0) is cell 2: one row-1 count there.
  EXPECT_EQ(fp.count(2, 1), 1.0);
  EXPECT_EQ(fp.act(), degenerate(0));
}

TEST(ConditionedFictitiousPlay, BucketsArePerPreviousJointAction) {
  History h;
  h.push({0, 0});
  h.push({0, 1});  // counted in bucket (0, 0)
  h.push({1, 1});  // counted in bucket (0, 1)
  h.push({0, 0});  // counted in bucket (1, 1)
  // Next bucket (0, 0) has seen row action 0 once.
  EXPECT_EQ(cfp_act(kCrossing, h), degenerate(1));
  h.push({1, 1});  // counted in bucket (0, 0)
  // Next bucket (1, 1) has seen row action 0 once.
  EXPECT_EQ(cfp_act(kCrossing, h), degenerate(1));
}

TEST(FictitiousPlay, MatchesReferenceOnRandomHistories) {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const Game g = game_by_id(1 + static_cast<int>(rng.below(78)));
    History h;
    const std::size_t len = rng.below(30);
    for (std::size_t t = 0; t < len; ++t) h.push({static_cast<int>(rng.below(2)), static_cast<int>(rng.below(2))});
    EXPECT_EQ(fp_act(g, h), reference_plain(g, h));
    EXPECT_EQ(cfp_act(g, h), reference_conditioned(g, h));
  }
}

TEST(FictitiousPlay, PlainEqualsConditionedOnConstantHistory) {
  // With one joint action repeated, every counted round lands in one bucket,
  // so conditioned play is plain play that ignores round 0.
  for (const auto& g : enumerate_games()) {
    for (int cell = 0; cell < 4; ++cell) {
      const JointAction ja{cell / 2, cell % 2};
      History h;
      for (int t = 0; t < 6; ++t) {
        h.push(ja);
        History tail;
        for (std::size_t k = 1; k < h.size(); ++k) tail.push(h[k]);
        if (tail.size() > 0) {
          EXPECT_EQ(cfp_act(g, h), fp_act(g, tail));
        }
      }
    }
  }
}

TEST(Opponent, RtFollowsTheTrueType) {
  const Game g = game_by_id(50);
  TypeSet ts = sample_type_set(TypeKind::cnn, g, 3, 5);
  ts.true_index = 2;
  Opponent opp = Opponent::make(OpponentKind::rt, g, ts);
  Rng rng(4);
  History h;
  for (int t = 0; t < 20; ++t) {
    EXPECT_EQ(opp.act(), ts.true_type().act(h, Seat::col));
    const JointAction ja{static_cast<int>(rng.below(2)), static_cast<int>(rng.below(2))};
    opp.observe(ja);
    h.push(ja);
  }
}

TEST(Opponent, FpAndCfpControllersMatchFreeFunctions) {
  const TypeSet ts = sample_type_set(TypeKind::cnn, kCrossing, 2, 1);
  Opponent fp = Opponent::make(OpponentKind::fp, kCrossing, ts);
  Opponent cfp = Opponent::make(OpponentKind::cfp, kCrossing, ts);
  Rng rng(6);
  History h;
  for (int t = 0; t < 40; ++t) {
    EXPECT_EQ(fp.act(), fp_act(kCrossing, h));
    EXPECT_EQ(cfp.act(), cfp_act(kCrossing, h));
    const JointAction ja{static_cast<int>(rng.below(2)), static_cast<int>(rng.below(2))};
    fp.observe(ja);
    cfp.observe(ja);
    h.push(ja);
  }
}
