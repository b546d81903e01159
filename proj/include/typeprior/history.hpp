#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "typeprior/game.hpp"

namespace typeprior {

// Probabilities of actions 0 and 1.
using ActionDist = std::array<double, 2>;

constexpr ActionDist degenerate(int a) noexcept { return a == 0 ? ActionDist{1.0, 0.0} : ActionDist{0.0, 1.0}; }
constexpr ActionDist from_p0(double p0) noexcept { return {p0, 1.0 - p0}; }
inline ActionDist from_mixed(MixedStrategy s) noexcept { return from_p0(s.p0); }

inline bool is_valid_dist(const ActionDist& d, double tol = 1e-12) {
  return d[0] >= 0.0 && d[1] >= 0.0 && std::abs(d[0] + d[1] - 1.0) <= tol;
}

// Sample with one uniform draw so every controller consumes exactly one
// number per round.
inline int sample_action(const ActionDist& d, double u) noexcept { return u < d[0] ? 0 : 1; }

// Completed rounds of play, oldest first.
class History {
 public:
  History() = default;
  explicit History(std::vector<JointAction> steps) : steps_(std::move(steps)) {
    for (const auto& s : steps_) validate(s);
  }

  std::size_t size() const noexcept { return steps_.size(); }
  bool empty() const noexcept { return steps_.empty(); }
  const JointAction& operator[](std::size_t i) const { return steps_[i]; }
  const JointAction& back() const { return steps_.back(); }
  auto begin() const noexcept { return steps_.begin(); }
  auto end() const noexcept { return steps_.end(); }
  const std::vector<JointAction>& steps() const noexcept { return steps_; }

  void push(JointAction ja) {
    validate(ja);
    steps_.push_back(ja);
  }

  History extended(JointAction ja) const {
    History h = *this;
    h.push(ja);
    return h;
  }

  // First `n` rounds.
  History prefix(std::size_t n) const {
    return History(std::vector<JointAction>(steps_.begin(), steps_.begin() + static_cast<std::ptrdiff_t>(n)));
  }

 private:
  static void validate(const JointAction& ja) {
    if (ja.row < 0 || ja.row > 1 || ja.col < 0 || ja.col > 1)
      throw std::invalid_argument("malformed history: action outside {0,1}");
  }
  std::vector<JointAction> steps_;
};

enum class LftPhase : int { on_path, punishing, triggered, resetting };

// Everything a policy type needs from the history, folded incrementally.
// Each type kind reads a different part of it.
struct TypeState {
  Seat seat = Seat::col;
  int rounds = 0;
  std::array<JointAction, 3> recent{};  // recent[0] is the last round
  LftPhase phase = LftPhase::on_path;
  int position = 0;
  int timer = 0;

  // Action played k+1 rounds ago by `who`, or -1 before the start of play.
  int recent_action(Seat who, int k) const noexcept {
    return k < rounds ? recent[static_cast<std::size_t>(k)].of(who) : -1;
  }

  void shift_in(JointAction ja) noexcept {
    recent[2] = recent[1];
    recent[1] = recent[0];
    recent[0] = ja;
    ++rounds;
  }

  friend bool operator==(const TypeState&, const TypeState&) = default;
};

// Every joint history of length 0..max_len, shortest first.
inline std::vector<History> all_histories(std::size_t max_len) {
  std::vector<History> out{History{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (int cell = 0; cell < 4; ++cell) out.push_back(out[i].extended({cell / 2, cell % 2}));
    }
    begin = end;
  }
  return out;
}

}  // namespace typeprior
