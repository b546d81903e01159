#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "typeprior/decision_tree.hpp"
#include "typeprior/game.hpp"
#include "typeprior/neural_net.hpp"
#include "typeprior/policy.hpp"
#include "typeprior/rng.hpp"

namespace typeprior {

struct EvoConfig {
  std::size_t pool_size = 20;
  std::size_t generations = 30;
  std::size_t tournament = 3;
  double mutation_rate = 0.1;
  double crossover_rate = 0.9;
  std::size_t eval_rounds = 50;
  std::size_t eval_opponents = 5;
  double dissimilarity_weight = 0.25;
  std::uint64_t seed = 1;

  void validate() const {
    auto rate = [](double r) { return r >= 0.0 && r <= 1.0; };
    if (!rate(mutation_rate) || !rate(crossover_rate)) throw std::invalid_argument("evolution rates must lie in [0,1]");
    if (pool_size < 2 || tournament < 2 || eval_rounds < 2 || eval_opponents < 1)
      throw std::invalid_argument("evolution sizes too small");
    if (dissimilarity_weight < 0.0) throw std::invalid_argument("dissimilarity weight must be non-negative");
  }
};

template <typename G>
struct GenomeOps;

template <>
struct GenomeOps<DecisionTree> {
  static DecisionTree random(Rng& rng) { return DecisionTree::random(rng); }
  static DecisionTree crossover(const DecisionTree& a, const DecisionTree& b, Rng& rng) {
    const std::size_t at = rng.below(a.size());
    const std::size_t from = rng.below(b.size());
    return a.spliced(at, b, from);
  }
  static DecisionTree mutate(const DecisionTree& g, Rng& rng, double rate) { return g.mutated(rng, rate); }
};

template <>
struct GenomeOps<NeuralNet> {
  static NeuralNet random(Rng& rng) { return NeuralNet::random(rng); }
  static NeuralNet crossover(const NeuralNet& a, const NeuralNet& b, Rng& rng) {
    return NeuralNet::crossover(a, b, 1 + rng.below(NeuralNet::kWeights - 1));
  }
  static NeuralNet mutate(const NeuralNet& g, Rng& rng, double rate) { return g.mutated(rng, rate); }
};

struct MatchResult {
  double row_mean = 0;
  double col_mean = 0;
};

// Plays `rounds` rounds between two policy types and reports mean payoffs.
inline MatchResult play_match(const Game& g, const PolicyType& row, const PolicyType& col, std::size_t rounds,
                              std::uint64_t seed) {
  Rng rng(seed);
  TypeState rs = row.start(Seat::row);
  TypeState cs = col.start(Seat::col);
  MatchResult out;
  for (std::size_t t = 0; t < rounds; ++t) {
    const JointAction ja{sample_action(row.act(rs), rng.uniform()), sample_action(col.act(cs), rng.uniform())};
    out.row_mean += g.payoff(Seat::row, ja);
    out.col_mean += g.payoff(Seat::col, ja);
    row.observe(rs, ja);
    col.observe(cs, ja);
  }
  out.row_mean /= static_cast<double>(rounds);
  out.col_mean /= static_cast<double>(rounds);
  return out;
}

template <typename G>
struct EvolvedPools {
  std::vector<G> row;
  std::vector<G> col;
  std::vector<double> best_row_fitness;  // one entry per generation
  std::vector<double> best_col_fitness;
};

namespace detail {

// Mean distance of each member to the rest of its pool.
template <typename G>
std::vector<double> mean_dissimilarity(const std::vector<G>& pool, Seat seat) {
  std::vector<std::vector<double>> sig;
  sig.reserve(pool.size());
  for (const auto& g : pool) sig.push_back(behavior_signature(PolicyType(g), seat));
  std::vector<double> out(pool.size(), 0.0);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      const double d = signature_distance(sig[i], sig[j]);
      out[i] += d;
      out[j] += d;
    }
  }
  for (auto& x : out) x /= static_cast<double>(pool.size() - 1);
  return out;
}

template <typename G>
std::size_t tournament_pick(const std::vector<double>& fitness, std::size_t size, Rng& rng) {
  std::size_t best = rng.below(fitness.size());
  for (std::size_t k = 1; k < size; ++k) {
    const std::size_t c = rng.below(fitness.size());
    if (fitness[c] > fitness[best] || (fitness[c] == fitness[best] && c < best)) best = c;
  }
  return best;
}

inline std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Next generation: one elite plus tournament-selected offspring.
template <typename G>
std::vector<G> breed(const std::vector<G>& pool, const std::vector<double>& fitness, const EvoConfig& cfg, Rng& rng) {
  std::vector<G> next;
  next.reserve(pool.size());
  next.push_back(pool[argmax(fitness)]);
  while (next.size() < pool.size()) {
    const G& a = pool[tournament_pick<G>(fitness, cfg.tournament, rng)];
    G child = a;
    if (rng.bernoulli(cfg.crossover_rate)) {
      const G& b = pool[tournament_pick<G>(fitness, cfg.tournament, rng)];
      child = GenomeOps<G>::crossover(a, b, rng);
    }
    next.push_back(GenomeOps<G>::mutate(child, rng, cfg.mutation_rate));
  }
  return next;
}

template <typename G>
std::vector<double> coevolution_fitness(const Game& game, const std::vector<G>& mine, Seat seat,
                                        const std::vector<G>& theirs, const EvoConfig& cfg, std::size_t generation) {
  const std::uint64_t side_seed = derive_seed(derive_seed(cfg.seed, generation), seat == Seat::row ? "row" : "col");
  std::vector<double> fit(mine.size(), 0.0);
  for (std::size_t i = 0; i < mine.size(); ++i) {
    Rng pick(derive_seed(side_seed, i));
    const PolicyType me(mine[i]);
    for (std::size_t k = 0; k < cfg.eval_opponents; ++k) {
      const std::size_t j = pick.below(theirs.size());
      const PolicyType opp(theirs[j]);
      const std::uint64_t match_seed = derive_seed(derive_seed(side_seed, i), 1000 + k);
      const MatchResult r = seat == Seat::row ? play_match(game, me, opp, cfg.eval_rounds, match_seed)
                                              : play_match(game, opp, me, cfg.eval_rounds, match_seed);
      fit[i] += seat == Seat::row ? r.row_mean : r.col_mean;
    }
    fit[i] /= static_cast<double>(cfg.eval_opponents);
  }
  if (cfg.dissimilarity_weight > 0.0) {
    const auto dis = mean_dissimilarity(mine, seat);
    for (std::size_t i = 0; i < fit.size(); ++i) fit[i] += cfg.dissimilarity_weight * dis[i];
  }
  return fit;
}

}  // namespace detail

// Breeds a pool per player. Each generation every member plays a random
// selection of the other pool; fitness is its mean payoff per round plus the
// weighted mean behavioral distance to its own pool.
template <typename G>
EvolvedPools<G> coevolve(const Game& game, const EvoConfig& cfg) {
  cfg.validate();
  Rng init(derive_seed(cfg.seed, "init"));
  EvolvedPools<G> out;
  for (std::size_t i = 0; i < cfg.pool_size; ++i) out.row.push_back(GenomeOps<G>::random(init));
  for (std::size_t i = 0; i < cfg.pool_size; ++i) out.col.push_back(GenomeOps<G>::random(init));
  for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
    const auto row_fit = detail::coevolution_fitness(game, out.row, Seat::row, out.col, cfg, gen);
    const auto col_fit = detail::coevolution_fitness(game, out.col, Seat::col, out.row, cfg, gen);
    out.best_row_fitness.push_back(*std::max_element(row_fit.begin(), row_fit.end()));
    out.best_col_fitness.push_back(*std::max_element(col_fit.begin(), col_fit.end()));
    Rng breed_rng(derive_seed(derive_seed(cfg.seed, gen), "breed"));
    auto next_row = detail::breed(out.row, row_fit, cfg, breed_rng);
    auto next_col = detail::breed(out.col, col_fit, cfg, breed_rng);
    out.row = std::move(next_row);
    out.col = std::move(next_col);
  }
  return out;
}

inline EvolvedPools<DecisionTree> coevolve_trees(const Game& game, const EvoConfig& cfg) {
  return coevolve<DecisionTree>(game, cfg);
}

inline EvolvedPools<NeuralNet> coevolve_nets(const Game& game, const EvoConfig& cfg) {
  return coevolve<NeuralNet>(game, cfg);
}

template <typename G>
struct FixedOpponentRun {
  std::vector<G> pool;
  std::vector<double> best_fitness;  // one entry per evaluated generation
};

// Evolves one pool against a fixed opponent pool. Every member meets every
// opponent with a seed that depends only on the opponent, so a genome's
// fitness does not change between generations.
template <typename G>
FixedOpponentRun<G> evolve_against(const Game& game, std::vector<G> pool, Seat seat,
                                   const std::vector<PolicyType>& opponents, const EvoConfig& cfg) {
  cfg.validate();
  FixedOpponentRun<G> out;
  auto evaluate = [&](const std::vector<G>& p) {
    std::vector<double> fit(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const PolicyType me(p[i]);
      for (std::size_t j = 0; j < opponents.size(); ++j) {
        const std::uint64_t s = derive_seed(derive_seed(cfg.seed, "fixed"), j);
        const MatchResult r = seat == Seat::row ? play_match(game, me, opponents[j], cfg.eval_rounds, s)
                                                : play_match(game, opponents[j], me, cfg.eval_rounds, s);
        fit[i] += seat == Seat::row ? r.row_mean : r.col_mean;
      }
      fit[i] /= static_cast<double>(opponents.size());
    }
    if (cfg.dissimilarity_weight > 0.0) {
      const auto dis = detail::mean_dissimilarity(p, seat);
      for (std::size_t i = 0; i < fit.size(); ++i) fit[i] += cfg.dissimilarity_weight * dis[i];
    }
    return fit;
  };
  for (std::size_t gen = 0; gen <= cfg.generations; ++gen) {
    const auto fit = evaluate(pool);
    out.best_fitness.push_back(*std::max_element(fit.begin(), fit.end()));
    if (gen == cfg.generations) break;
    Rng breed_rng(derive_seed(derive_seed(cfg.seed, gen), "breed-fixed"));
    pool = detail::breed(pool, fit, cfg, breed_rng);
  }
  out.pool = std::move(pool);
  return out;
}

}  // namespace typeprior
