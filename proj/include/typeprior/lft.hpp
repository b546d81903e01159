#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "typeprior/game.hpp"
#include "typeprior/history.hpp"
#include "typeprior/rng.hpp"

namespace typeprior {

enum class LftRole : int { leader = 0, follower = 1, trigger = 2 };

inline std::string to_string(LftRole r) {
  switch (r) {
    case LftRole::leader: return "Leader";
    case LftRole::follower: return "Follower";
    case LftRole::trigger: return "Trigger";
  }
  return "?";
}

inline constexpr int kMaxTargetLength = 3;
inline constexpr int kLeaderPunishRounds = 3;

// Leader, follower or trigger agent pursuing a cyclic target solution.
struct LftGenome {
  LftRole role = LftRole::leader;
  std::vector<JointAction> target;
  MixedStrategy punishment;  // holds the other seat to its minimax value
  MixedStrategy fallback;    // own maximin
  int punish_rounds = kLeaderPunishRounds;

  ActionDist act(const TypeState& s) const {
    switch (s.phase) {
      case LftPhase::on_path:
        return degenerate(target[static_cast<std::size_t>(s.position)].of(s.seat));
      case LftPhase::punishing:
        return from_mixed(punishment);
      case LftPhase::triggered:
        return from_mixed(fallback);
      case LftPhase::resetting: {
        // Reset position is uniform, so the action is a uniform mixture over
        // the target actions at every position.
        double zeros = 0;
        for (const auto& ja : target) zeros += ja.of(s.seat) == 0 ? 1.0 : 0.0;
        return from_p0(zeros / static_cast<double>(target.size()));
      }
    }
    return {0.5, 0.5};
  }

  void observe(TypeState& s, JointAction ja) const {
    const Seat them = other(s.seat);
    const int len = static_cast<int>(target.size());
    switch (s.phase) {
      case LftPhase::on_path:
        if (ja.of(them) != target[static_cast<std::size_t>(s.position)].of(them)) {
          on_deviation(s);
        } else {
          s.position = (s.position + 1) % len;
        }
        break;
      case LftPhase::punishing:
        if (--s.timer <= 0) {
          s.phase = LftPhase::on_path;
          s.position = 0;
        }
        break;
      case LftPhase::triggered:
        break;
      case LftPhase::resetting: {
        // The realized own action pins the reset position to the first
        // position carrying it.
        int k = 0;
        while (k < len && target[static_cast<std::size_t>(k)].of(s.seat) != ja.of(s.seat)) ++k;
        if (k == len) k = 0;
        if (ja.of(them) == target[static_cast<std::size_t>(k)].of(them)) {
          s.phase = LftPhase::on_path;
          s.position = (k + 1) % len;
        }
        break;
      }
    }
    s.shift_in(ja);
  }

  friend bool operator==(const LftGenome& a, const LftGenome& b) {
    return a.role == b.role && a.target == b.target && a.punishment.p0 == b.punishment.p0 &&
           a.fallback.p0 == b.fallback.p0 && a.punish_rounds == b.punish_rounds;
  }

 private:
  void on_deviation(TypeState& s) const {
    switch (role) {
      case LftRole::leader:
        s.phase = LftPhase::punishing;
        s.timer = punish_rounds;
        break;
      case LftRole::follower:
        s.phase = LftPhase::resetting;
        break;
      case LftRole::trigger:
        s.phase = LftPhase::triggered;
        break;
    }
  }
};

// Mean payoff of `player` over one pass of the cycle.
inline double cycle_average(const Game& g, const std::vector<JointAction>& seq, Seat player) {
  double sum = 0;
  for (const auto& ja : seq) sum += g.payoff(player, ja);
  return sum / static_cast<double>(seq.size());
}

// Cycles of length 1..max_len whose average payoff is at least each player's
// security value.
inline std::vector<std::vector<JointAction>> valid_targets(const Game& g, int max_len = kMaxTargetLength) {
  const double floor1 = maximin_strategy(g, Seat::row).value;
  const double floor2 = maximin_strategy(g, Seat::col).value;
  std::vector<std::vector<JointAction>> out;
  std::vector<std::vector<JointAction>> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<JointAction>> next;
    for (const auto& seq : layer) {
      for (int cell = 0; cell < 4; ++cell) {
        auto s = seq;
        s.push_back({cell / 2, cell % 2});
        next.push_back(s);
      }
    }
    for (const auto& seq : next) {
      if (cycle_average(g, seq, Seat::row) >= floor1 - 1e-12 && cycle_average(g, seq, Seat::col) >= floor2 - 1e-12)
        out.push_back(seq);
    }
    layer = std::move(next);
  }
  return out;
}

inline LftGenome make_lft(const Game& g, Seat seat, LftRole role, std::vector<JointAction> target) {
  if (target.empty() || static_cast<int>(target.size()) > kMaxTargetLength)
    throw std::invalid_argument("target solution length must be in [1, 3]");
  LftGenome out;
  out.role = role;
  out.target = std::move(target);
  out.punishment = minimax_strategy_against(g, other(seat)).strategy;
  out.fallback = maximin_strategy(g, seat).strategy;
  return out;
}

// n distinct (role, target) genomes for `seat`, drawn uniformly without
// replacement from all valid pairs.
inline std::vector<LftGenome> generate_lft_pool(const Game& g, std::size_t n, std::uint64_t seed,
                                                Seat seat = Seat::col) {
  if (n < 1) throw std::invalid_argument("pool size must be positive");
  const auto targets = valid_targets(g);
  std::vector<std::pair<LftRole, std::size_t>> pairs;
  for (int r = 0; r < 3; ++r)
    for (std::size_t t = 0; t < targets.size(); ++t) pairs.emplace_back(static_cast<LftRole>(r), t);
  if (pairs.size() < n)
    throw std::runtime_error("only " + std::to_string(pairs.size()) + " valid leader/follower/trigger genomes exist");
  Rng rng(seed);
  rng.shuffle(pairs);
  std::vector<LftGenome> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_lft(g, seat, pairs[i].first, targets[pairs[i].second]));
  return out;
}

}  // namespace typeprior
