#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "typeprior/report.hpp"

using namespace typeprior;

namespace {

ExperimentConfig small_suite() {
  std::istringstream in(R"(
    # small CNN suite
    types = CNN
    opponent = RT
    horizons = 1
    priors = uniform,utility,lp_utility
    games = 10,50
    plays = 3
    rounds = 40
    type_count = 4
    slices = 10
    value_rounds = 5
    value_samples = 2
    evo_pool = 8
    evo_generations = 3
    evo_rounds = 10
    seed = 7
  )");
  return parse_config(in);
}

std::string metrics_text(const std::vector<PlayRecord>& records) {
  std::ostringstream os;
  write_metrics_csv(os, records);
  return os.str();
}

}  // namespace

TEST(Config, ParsesAndRoundTrips) {
  const auto cfg = small_suite();
  EXPECT_EQ(cfg.kind, TypeKind::cnn);
  EXPECT_EQ(cfg.priors.size(), 3u);
  EXPECT_EQ(cfg.filter, GameFilter::ids);
  EXPECT_EQ(cfg.game_ids, (std::vector<int>{10, 50}));
  EXPECT_EQ(cfg.effective_rounds(), 40u);
  EXPECT_EQ(cfg.metrics.slices, 10);
  EXPECT_EQ(cfg.evolution.pool_size, 8u);
  std::istringstream again(config_text(cfg));
  EXPECT_EQ(config_text(parse_config(again)), config_text(cfg));
}

TEST(Config, Defaults) {
  std::istringstream empty("");
  const auto cfg = parse_config(empty);
  EXPECT_EQ(cfg.priors.size(), kAllPriorMethods.size());
  EXPECT_EQ(cfg.horizons, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(cfg.effective_rounds(), 100u);
  ExperimentConfig fp;
  fp.opponent = OpponentKind::fp;
  EXPECT_EQ(fp.effective_rounds(), 1000u);
}

TEST(Config, RejectsBadInput) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_config(in);
  };
  EXPECT_THROW(parse("colour = blue"), std::invalid_argument);
  EXPECT_THROW(parse("plays 3"), std::invalid_argument);
  EXPECT_THROW(parse("plays = 0"), std::invalid_argument);
  EXPECT_THROW(parse("rounds = 5"), std::invalid_argument);
  EXPECT_THROW(parse("horizons = 0"), std::invalid_argument);
  EXPECT_THROW(parse("priors = nope"), std::invalid_argument);
  EXPECT_THROW(load_config("/nonexistent/config.txt"), std::runtime_error);
}

TEST(Seeds, PlaySeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (int g = 1; g <= 78; ++g)
    for (int p = 0; p < 10; ++p) seen.insert(play_seed(1, g, p));
  EXPECT_EQ(seen.size(), 780u);
  EXPECT_EQ(play_seed(3, 5, 2), play_seed(3, 5, 2));
  EXPECT_NE(play_seed(3, 5, 2), play_seed(4, 5, 2));
}

TEST(SelectGames, Counts) {
  ExperimentConfig cfg;
  EXPECT_EQ(select_games(cfg).size(), 78u);
  cfg.filter = GameFilter::no_conflict;
  EXPECT_EQ(select_games(cfg).size(), 21u);
  cfg.filter = GameFilter::conflict;
  EXPECT_EQ(select_games(cfg).size(), 57u);
  cfg.opponent = OpponentKind::fp;
  EXPECT_EQ(select_games(cfg).size(), 33u);
  cfg.filter = GameFilter::no_conflict;
  EXPECT_EQ(select_games(cfg).size(), 15u);
  cfg.opponent = OpponentKind::cfp;
  cfg.filter = GameFilter::all;
  EXPECT_EQ(select_games(cfg).size(), 48u);
  cfg.max_games = 5;
  EXPECT_EQ(select_games(cfg).size(), 5u);
  cfg = {};
  cfg.filter = GameFilter::ids;
  cfg.game_ids = {3, 77};
  const auto g = select_games(cfg);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].id(), 3);
  EXPECT_EQ(g[1].id(), 77);
}

TEST(Workers, CountAndParallelFor) {
  EXPECT_EQ(worker_count(3), 3);
  setenv("TYPEPRIOR_WORKERS", "2", 1);
  EXPECT_EQ(worker_count(0), 2);
  unsetenv("TYPEPRIOR_WORKERS");
  EXPECT_GE(worker_count(0), 1);
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(RunPlay, RecordsAPlay) {
  const Game g = game_by_id(50);
  const TypeSet ts = sample_type_set(TypeKind::cnn, g, 3, 2);
  std::ostringstream trace;
  const auto rec = run_play(g, ts, uniform_prior(3), OpponentKind::rt, 2, 40, 11, MetricsConfig{}, &trace);
  EXPECT_TRUE(rec.ok());
  EXPECT_EQ(rec.rounds.size(), 40u);
  EXPECT_EQ(rec.true_posterior.size(), 40u);
  EXPECT_EQ(rec.slices.size(), 20u);
  EXPECT_EQ(rec.pool_hash, type_set_hash(ts));
  std::size_t lines = 0;
  std::string line;
  std::istringstream tin(trace.str());
  while (std::getline(tin, line)) ++lines;
  EXPECT_EQ(lines, 40u);

  const auto fp = run_play(g, ts, uniform_prior(3), OpponentKind::fp, 1, 40, 11);
  EXPECT_TRUE(fp.true_posterior.empty());
  EXPECT_THROW(run_play(g, ts, uniform_prior(2), OpponentKind::rt, 1, 40, 11), std::invalid_argument);
  EXPECT_THROW(run_play(g, ts, uniform_prior(3), OpponentKind::rt, 1, 10, 11), std::invalid_argument);
}

TEST(RunPlay, SameSeedSameTranscript) {
  const Game g = game_by_id(60);
  const TypeSet ts = sample_type_set(TypeKind::cnn, g, 3, 9);
  const auto a = run_play(g, ts, uniform_prior(3), OpponentKind::rt, 1, 60, 5);
  const auto b = run_play(g, ts, uniform_prior(3), OpponentKind::rt, 1, 60, 5);
  EXPECT_EQ(a.rounds, b.rounds);
  EXPECT_EQ(a.true_posterior, b.true_posterior);
}

TEST(Suite, DeterministicAcrossWorkerCounts) {
  auto cfg = small_suite();
  cfg.workers = 1;
  const auto one = run_suite_records(cfg);
  cfg.workers = 4;
  const auto four = run_suite_records(cfg);
  EXPECT_EQ(metrics_text(one.records), metrics_text(four.records));
  EXPECT_EQ(one.pools, four.pools);
  EXPECT_EQ(one.records.size(), 2u * 3u * 3u);
}

TEST(Suite, PriorsOfAPlayShareThePool) {
  const auto res = run_suite_records(small_suite());
  std::map<std::pair<int, std::uint64_t>, std::set<std::string>> hashes;
  for (const auto& r : res.records) {
    ASSERT_TRUE(r.ok()) << r.error;
    hashes[{r.game_id, r.seed}].insert(r.pool_hash);
  }
  EXPECT_EQ(hashes.size(), 6u);
  for (const auto& [key, h] : hashes) EXPECT_EQ(h.size(), 1u);
  EXPECT_EQ(res.pools.size(), 6u);
}

TEST(Suite, LeaderFollowerGamesWithTooFewTargetsAreReported) {
  ExperimentConfig cfg;
  cfg.filter = GameFilter::ids;
  cfg.game_ids = {40};
  cfg.priors = {PriorMethod::uniform};
  cfg.horizons = {1};
  cfg.plays = 1;
  const auto res = run_suite_records(cfg);
  ASSERT_EQ(res.records.size(), 1u);
  EXPECT_FALSE(res.records[0].ok());
  EXPECT_EQ(metrics_text(res.records), "game_id,seed,opponent,prior,h,slice,criterion,value\n");
}

TEST(Report, WritesFilesThatReadBack) {
  auto cfg = small_suite();
  const auto dir = std::filesystem::temp_directory_path() / "typeprior_report_test";
  std::filesystem::remove_all(dir);
  cfg.output = dir.string();
  const auto res = run_suite(cfg);
  for (const char* f : {"manifest.txt", "plays.csv", "metrics.csv"}) EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  EXPECT_EQ(read_manifest_value(dir / "manifest.txt", "types"), "CNN");
  std::size_t pools = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "pools")) pools += e.is_regular_file() ? 1 : 0;
  EXPECT_EQ(pools, res.pools.size());

  std::ifstream in(dir / "metrics.csv");
  const SliceTable read = read_metrics_csv(in);
  const SliceTable direct = slice_table(res.records);
  ASSERT_EQ(read.by_horizon.size(), direct.by_horizon.size());
  for (const auto& [h, by_prior] : direct.by_horizon) {
    for (const auto& [m, plays] : by_prior) {
      for (const auto& [key, slices] : plays) {
        const auto& other = read.by_horizon.at(h).at(m).at(key);
        ASSERT_EQ(other.size(), slices.size());
        for (std::size_t s = 0; s < slices.size(); ++s)
          for (std::size_t c = 0; c < kAllCriteria.size(); ++c)
            EXPECT_NEAR(other[s][c], slices[s][c], 1e-9 * std::max(1.0, std::abs(slices[s][c])));
      }
    }
  }
  const auto files = write_report(dir);
  EXPECT_FALSE(files.empty());
  for (const auto& f : files) EXPECT_TRUE(std::filesystem::exists(f));
  std::filesystem::remove_all(dir);
}

TEST(Significance, IdenticalResultsAreNeverSignificant) {
  const auto table = slice_table(run_suite_records(small_suite()).records);
  auto by_prior = table.by_horizon.at(1);
  by_prior[PriorMethod::welfare] = by_prior.at(PriorMethod::uniform);
  const auto m = significance_matrix(by_prior);
  for (Criterion c : kAllCriteria) {
    EXPECT_EQ(m.at(m.higher, PriorMethod::welfare, c), 0.0);
    EXPECT_EQ(m.at(m.lower, PriorMethod::welfare, c), 0.0);
    EXPECT_EQ(m.at(m.two_sided, PriorMethod::welfare, c), 0.0);
  }
  EXPECT_THROW(m.at(m.higher, PriorMethod::uniform, Criterion::nash), std::out_of_range);
  by_prior.erase(PriorMethod::uniform);
  EXPECT_THROW(significance_matrix(by_prior), std::invalid_argument);
}
