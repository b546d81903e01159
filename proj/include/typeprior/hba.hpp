#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "typeprior/game.hpp"
#include "typeprior/history.hpp"
#include "typeprior/policy.hpp"
#include "typeprior/rng.hpp"
#include "typeprior/type_pool.hpp"

namespace typeprior {

// Smallest per-step log-likelihood. A zero-probability observation costs
// this much instead of eliminating the type outright.
inline constexpr double kLogFloor = -745.0;

class BeliefCollapse : public std::runtime_error {
 public:
  BeliefCollapse() : std::runtime_error("belief collapse: every type assigns probability 0 to the observed action") {}
};

enum class CollapsePolicy {
  raise,      // throw BeliefCollapse
  floor_all,  // charge every type the floor and carry on
};

// Prior over a type set plus accumulated log-likelihoods of the observed
// actions.
struct BeliefState {
  std::vector<double> prior;
  std::vector<double> log_likelihood;

  static BeliefState from_prior(std::vector<double> p) {
    if (p.empty()) throw std::invalid_argument("prior over an empty type set");
    double sum = 0;
    for (double x : p) {
      if (!(x >= 0.0)) throw std::invalid_argument("prior entries must be non-negative");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("prior must sum to 1");
    BeliefState b;
    b.log_likelihood.assign(p.size(), 0.0);
    b.prior = std::move(p);
    return b;
  }

  std::size_t size() const noexcept { return prior.size(); }

  std::vector<double> posterior() const {
    std::vector<double> logw(prior.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < prior.size(); ++k) {
      logw[k] = prior[k] > 0.0 ? std::log(prior[k]) + log_likelihood[k] : -std::numeric_limits<double>::infinity();
      top = std::max(top, logw[k]);
    }
    std::vector<double> out(prior.size(), 0.0);
    double norm = 0;
    for (std::size_t k = 0; k < prior.size(); ++k) {
      out[k] = prior[k] > 0.0 ? std::exp(logw[k] - top) : 0.0;
      norm += out[k];
    }
    for (auto& x : out) x /= norm;
    return out;
  }
};

// Multiplies each type's likelihood by the probability it gave the observed
// action. predictions[k] is type k's distribution at the history before the
// observation.
inline BeliefState update_posterior(const BeliefState& b, int observed, std::span<const ActionDist> predictions,
                                    CollapsePolicy policy = CollapsePolicy::raise) {
  check_action(observed);
  if (predictions.size() != b.size()) throw std::invalid_argument("one prediction per type required");
  bool any = false;
  for (std::size_t k = 0; k < b.size(); ++k)
    if (b.prior[k] > 0.0 && predictions[k][static_cast<std::size_t>(observed)] > 0.0) any = true;
  if (!any && policy == CollapsePolicy::raise) throw BeliefCollapse();
  BeliefState out = b;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double p = predictions[k][static_cast<std::size_t>(observed)];
    out.log_likelihood[k] += p > 0.0 ? std::max(std::log(p), kLogFloor) : kLogFloor;
  }
  return out;
}

// Same update with the predictions recomputed from the full history.
inline BeliefState update_posterior(const BeliefState& b, int observed, const History& h_before,
                                    const std::vector<PolicyType>& types, Seat their_seat,
                                    CollapsePolicy policy = CollapsePolicy::raise) {
  std::vector<ActionDist> pred;
  pred.reserve(types.size());
  for (const auto& t : types) pred.push_back(t.act(h_before, their_seat));
  return update_posterior(b, observed, pred, policy);
}

enum class TieBreak { lexicographic, seeded_random };

struct PlannerConfig {
  int horizon = 1;
  TieBreak tie_break = TieBreak::lexicographic;
};

// Depth-limited expected-payoff planner over a mixture of types whose
// weights stay fixed at the current posterior.
class Planner {
 public:
  // own[a_i][a_j] is HBA's stage payoff.
  Planner(PayoffMatrix own, const std::vector<PolicyType>& types) : own_(own), types_(&types) {}

  // E values for both own actions at the hypothetical history represented by
  // `states` (one per type).
  std::array<double, 2> expected_payoffs(std::span<const double> posterior, const std::vector<TypeState>& states,
                                         int depth) const {
    if (depth < 1) throw std::invalid_argument("planning depth must be at least 1");
    return evaluate(posterior, states, depth);
  }

  double expected_payoff(std::span<const double> posterior, const std::vector<TypeState>& states, int own_action,
                         int depth) const {
    return expected_payoffs(posterior, states, depth)[static_cast<std::size_t>(own_action)];
  }

 private:
  std::array<double, 2> evaluate(std::span<const double> post, const std::vector<TypeState>& states,
                                 int depth) const {
    const auto& types = *types_;
    ActionDist mix{0.0, 0.0};
    for (std::size_t k = 0; k < types.size(); ++k) {
      if (post[k] == 0.0) continue;
      const ActionDist d = types[k].act(states[k]);
      mix[0] += post[k] * d[0];
      mix[1] += post[k] * d[1];
    }
    std::array<double, 2> e{0.0, 0.0};
    for (int ai = 0; ai < 2; ++ai) {
      for (int aj = 0; aj < 2; ++aj) {
        const double w = mix[static_cast<std::size_t>(aj)];
        if (w == 0.0) continue;
        double q = own_[static_cast<std::size_t>(ai)][static_cast<std::size_t>(aj)];
        if (depth > 1) {
          std::vector<TypeState> next = states;
          const JointAction ja{ai, aj};
          for (std::size_t k = 0; k < types.size(); ++k)
            if (post[k] != 0.0) types[k].observe(next[k], ja);
          const auto child = evaluate(post, next, depth - 1);
          q += std::max(child[0], child[1]);
        }
        e[static_cast<std::size_t>(ai)] += w * q;
      }
    }
    return e;
  }

  PayoffMatrix own_;
  const std::vector<PolicyType>* types_;
};

inline bool is_tie(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Argmax of the two E values; `tie_rng` is only consulted for seeded-random
// tie-breaking.
inline int choose_action(const std::array<double, 2>& e, TieBreak tb, Rng* tie_rng = nullptr) {
  if (is_tie(e[0], e[1])) {
    if (tb == TieBreak::seeded_random && tie_rng != nullptr) return static_cast<int>(tie_rng->below(2));
    return 0;
  }
  return e[0] > e[1] ? 0 : 1;
}

struct Decision {
  int action = 0;
  std::array<double, 2> values{};
};

// HBA in the row seat against a hypothesised column player.
class HbaAgent {
 public:
  HbaAgent(const Game& g, const TypeSet& types, std::vector<double> prior, PlannerConfig cfg, std::uint64_t tie_seed,
           CollapsePolicy collapse = CollapsePolicy::floor_all)
      : HbaAgent(g.matrix(Seat::row), types, std::move(prior), cfg, tie_seed, collapse) {}

  HbaAgent(PayoffMatrix own, const TypeSet& types, std::vector<double> prior, PlannerConfig cfg,
           std::uint64_t tie_seed, CollapsePolicy collapse = CollapsePolicy::floor_all)
      : types_(&types),
        belief_(BeliefState::from_prior(std::move(prior))),
        cfg_(cfg),
        planner_(own, types.members),
        tie_rng_(tie_seed),
        collapse_(collapse) {
    if (belief_.size() != types.size()) throw std::invalid_argument("prior size does not match the type set");
    if (cfg_.horizon < 1) throw std::invalid_argument("planning horizon must be at least 1");
    for (const auto& t : types.members) states_.push_back(t.start(types.seat));
    posterior_ = belief_.posterior();
  }

  Decision decide() {
    Decision d;
    d.values = planner_.expected_payoffs(posterior_, states_, cfg_.horizon);
    d.action = choose_action(d.values, cfg_.tie_break, &tie_rng_);
    return d;
  }

  // Bayesian update on the column player's realized action, then advance
  // every type's state.
  void observe(JointAction ja) {
    std::vector<ActionDist> pred;
    pred.reserve(states_.size());
    for (std::size_t k = 0; k < states_.size(); ++k) pred.push_back(types_->members[k].act(states_[k]));
    belief_ = update_posterior(belief_, ja.of(types_->seat), pred, collapse_);
    posterior_ = belief_.posterior();
    for (std::size_t k = 0; k < states_.size(); ++k) types_->members[k].observe(states_[k], ja);
  }

  const std::vector<double>& posterior() const noexcept { return posterior_; }
  const BeliefState& belief() const noexcept { return belief_; }

 private:
  const TypeSet* types_;
  BeliefState belief_;
  std::vector<double> posterior_;
  PlannerConfig cfg_;
  Planner planner_;
  Rng tie_rng_;
  CollapsePolicy collapse_;
  std::vector<TypeState> states_;
};

}  // namespace typeprior
