#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <variant>

#include "typeprior/game.hpp"
#include "typeprior/history.hpp"
#include "typeprior/hba.hpp"
#include "typeprior/policy.hpp"
#include "typeprior/type_pool.hpp"

namespace typeprior {

enum class OpponentKind { rt, fp, cfp };

inline std::string to_string(OpponentKind k) {
  switch (k) {
    case OpponentKind::rt: return "RT";
    case OpponentKind::fp: return "FP";
    case OpponentKind::cfp: return "CFP";
  }
  return "?";
}

inline OpponentKind parse_opponent(const std::string& s) {
  if (s == "RT" || s == "rt") return OpponentKind::rt;
  if (s == "FP" || s == "fp") return OpponentKind::fp;
  if (s == "CFP" || s == "cfp") return OpponentKind::cfp;
  throw std::invalid_argument("unknown opponent '" + s + "'");
}

enum class Conditioning {
  none,                  // one bucket: plain fictitious play
  previous_joint_action  // one bucket per previous joint action
};

// Fictitious player in the column seat: best response to the empirical
// distribution of the row player's actions. Ties and empty buckets give a
// uniform mixture.
class FictitiousPlayer {
 public:
  FictitiousPlayer(const Game& g, Conditioning c = Conditioning::none) : payoff_(g.matrix(Seat::col)), cond_(c) {}

  ActionDist act() const {
    if (cond_ == Conditioning::previous_joint_action && rounds_ == 0) return {0.5, 0.5};
    const auto& n = counts_[bucket()];
    const double total = n[0] + n[1];
    if (total == 0.0) return {0.5, 0.5};
    const double q0 = n[0] / total;
    double value[2];
    for (int b = 0; b < 2; ++b) value[b] = q0 * payoff_[b][0] + (1.0 - q0) * payoff_[b][1];
    if (is_tie(value[0], value[1])) return {0.5, 0.5};
    return degenerate(value[0] > value[1] ? 0 : 1);
  }

  void observe(JointAction ja) {
    // The first round has no previous joint action to condition on.
    if (cond_ == Conditioning::none || rounds_ > 0) counts_[bucket()][static_cast<std::size_t>(ja.row)] += 1.0;
    last_ = ja;
    ++rounds_;
  }

  // Count table entry: times the row player chose `action` in `bucket`.
  double count(std::size_t bucket, int action) const { return counts_[bucket][static_cast<std::size_t>(action)]; }

 private:
  std::size_t bucket() const {
    if (cond_ == Conditioning::none || rounds_ == 0) return 0;
    return static_cast<std::size_t>(last_.cell());
  }

  PayoffMatrix payoff_;  // [own][row player's action]
  Conditioning cond_;
  std::array<std::array<double, 2>, 4> counts_{};
  JointAction last_{};
  long rounds_ = 0;
};

inline ActionDist fp_act(const Game& g, const History& h) {
  FictitiousPlayer fp(g, Conditioning::none);
  for (const auto& ja : h) fp.observe(ja);
  return fp.act();
}

inline ActionDist cfp_act(const Game& g, const History& h) {
  FictitiousPlayer fp(g, Conditioning::previous_joint_action);
  for (const auto& ja : h) fp.observe(ja);
  return fp.act();
}

// Plays one policy type exactly.
class TypeController {
 public:
  explicit TypeController(const PolicyType& t, Seat seat = Seat::col) : type_(&t), state_(t.start(seat)) {}
  ActionDist act() const { return type_->act(state_); }
  void observe(JointAction ja) { type_->observe(state_, ja); }

 private:
  const PolicyType* type_;
  TypeState state_;
};

// Column-player controller for a play.
class Opponent {
 public:
  static Opponent make(OpponentKind k, const Game& g, const TypeSet& ts) {
    switch (k) {
      case OpponentKind::rt: return Opponent(TypeController(ts.true_type(), ts.seat));
      case OpponentKind::fp: return Opponent(FictitiousPlayer(g, Conditioning::none));
      case OpponentKind::cfp: return Opponent(FictitiousPlayer(g, Conditioning::previous_joint_action));
    }
    throw std::invalid_argument("unknown opponent kind");
  }

  ActionDist act() const {
    return std::visit([](const auto& c) { return c.act(); }, impl_);
  }
  void observe(JointAction ja) {
    std::visit([&](auto& c) { c.observe(ja); }, impl_);
  }

 private:
  explicit Opponent(TypeController c) : impl_(c) {}
  explicit Opponent(FictitiousPlayer f) : impl_(f) {}
  std::variant<TypeController, FictitiousPlayer> impl_;
};

inline Opponent rt_controller(const TypeSet& ts, const Game& g) { return Opponent::make(OpponentKind::rt, g, ts); }

}  // namespace typeprior
