#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace typeprior {

// Player 1 (HBA) picks the row, player 2 picks the column.
enum class Seat : int { row = 0, col = 1 };

constexpr Seat other(Seat s) noexcept { return s == Seat::row ? Seat::col : Seat::row; }
constexpr int index(Seat s) noexcept { return static_cast<int>(s); }

inline void check_action(int a) {
  if (a != 0 && a != 1) throw std::invalid_argument("action index must be 0 or 1");
}

struct JointAction {
  int row = 0;
  int col = 0;

  constexpr int of(Seat s) const noexcept { return s == Seat::row ? row : col; }
  static constexpr JointAction from(Seat s, int own, int theirs) noexcept {
    return s == Seat::row ? JointAction{own, theirs} : JointAction{theirs, own};
  }
  constexpr int cell() const noexcept { return 2 * row + col; }
  friend constexpr auto operator<=>(const JointAction&, const JointAction&) = default;
};

// Payoffs seen from one seat: m[own][other].
using PayoffMatrix = std::array<std::array<double, 2>, 2>;

// Probability assigned to action 0.
struct MixedStrategy {
  double p0 = 1.0;
  double prob(int a) const noexcept { return a == 0 ? p0 : 1.0 - p0; }
};

struct SecurityResult {
  MixedStrategy strategy;
  double value = 0.0;
};

enum class GameClass { no_conflict, conflict };

inline std::string to_string(GameClass c) { return c == GameClass::no_conflict ? "NoConflict" : "Conflict"; }

namespace detail {

// Candidate mixing probabilities for a 2x2 security problem: both pure
// strategies plus the crossing point of the two payoff lines when interior.
inline std::vector<double> crossing_candidates(double a0, double a1, double b0, double b1) {
  // line_k(p) = p * a_k + (1 - p) * b_k
  std::vector<double> c{1.0, 0.0};
  const double denom = (a0 - b0) - (a1 - b1);
  if (denom != 0.0) {
    const double p = (b1 - b0) / denom;
    if (p > 0.0 && p < 1.0) c.push_back(p);
  }
  return c;
}

}  // namespace detail

// Mixed strategy maximizing the worst-case expected payoff for m[own][other].
inline SecurityResult maximin(const PayoffMatrix& m) {
  auto worst = [&](double p) {
    return std::min(p * m[0][0] + (1 - p) * m[1][0], p * m[0][1] + (1 - p) * m[1][1]);
  };
  SecurityResult best{{1.0}, worst(1.0)};
  for (double p : detail::crossing_candidates(m[0][0], m[0][1], m[1][0], m[1][1])) {
    const double v = worst(p);
    if (v > best.value + 1e-12) best = {{p}, v};
  }
  return best;
}

// Strategy for the punisher that minimizes the victim's best-case expected
// payoff. victim[v][p] is the victim's payoff when it plays v and the punisher p.
inline SecurityResult minimax_against(const PayoffMatrix& victim) {
  auto best_case = [&](double q) {
    return std::max(q * victim[0][0] + (1 - q) * victim[0][1], q * victim[1][0] + (1 - q) * victim[1][1]);
  };
  SecurityResult best{{1.0}, best_case(1.0)};
  for (double q : detail::crossing_candidates(victim[0][0], victim[1][0], victim[0][1], victim[1][1])) {
    const double v = best_case(q);
    if (v < best.value - 1e-12) best = {{q}, v};
  }
  return best;
}

// A strictly ordinal 2x2 bimatrix game.
class Game {
 public:
  // Row-major (cell, player) order: u1(0,0), u2(0,0), u1(0,1), u2(0,1), ...
  using Encoding = std::array<int, 8>;

  Game() : Game(Encoding{4, 4, 1, 3, 3, 1, 2, 2}) {}

  explicit Game(const Encoding& e, int id = 0) : enc_(e), id_(id) {
    for (int p = 0; p < 2; ++p) {
      std::array<bool, 5> seen{};
      for (int cell = 0; cell < 4; ++cell) {
        const int v = enc_[2 * cell + p];
        if (v < 1 || v > 4 || seen[v]) throw std::invalid_argument("payoffs must be a permutation of 1..4 per player");
        seen[v] = true;
      }
    }
  }

  int payoff(Seat player, int row, int col) const { return enc_[2 * (2 * row + col) + index(player)]; }
  int payoff(Seat player, JointAction ja) const { return payoff(player, ja.row, ja.col); }

  // Payoff to `seat` when it plays `own` and the other seat plays `theirs`.
  int payoff_as(Seat seat, int own, int theirs) const {
    return payoff(seat, JointAction::from(seat, own, theirs));
  }

  PayoffMatrix matrix(Seat seat) const {
    PayoffMatrix m{};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) m[a][b] = payoff_as(seat, a, b);
    return m;
  }

  const Encoding& encoding() const noexcept { return enc_; }
  int id() const noexcept { return id_; }
  void set_id(int id) noexcept { id_ = id; }

  GameClass game_class() const {
    return top_cell(Seat::row) == top_cell(Seat::col) ? GameClass::no_conflict : GameClass::conflict;
  }

  JointAction top_cell(Seat player) const {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        if (payoff(player, r, c) == 4) return {r, c};
    throw std::logic_error("unreachable: no rank-4 outcome");
  }

  // Image under the symmetry group: optional player interchange first, then
  // row and column relabelling.
  Game transformed(bool swap_players, bool swap_rows, bool swap_cols) const {
    Encoding out{};
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        int sr = r ^ static_cast<int>(swap_rows);
        int sc = c ^ static_cast<int>(swap_cols);
        for (int p = 0; p < 2; ++p) {
          int v = swap_players ? payoff(static_cast<Seat>(1 - p), sc, sr) : payoff(static_cast<Seat>(p), sr, sc);
          out[2 * (2 * r + c) + p] = v;
        }
      }
    }
    return Game(out, id_);
  }

  std::array<Game, 8> images() const {
    std::array<Game, 8> out;
    int k = 0;
    for (int sp = 0; sp < 2; ++sp)
      for (int sr = 0; sr < 2; ++sr)
        for (int sc = 0; sc < 2; ++sc) out[k++] = transformed(sp, sr, sc);
    return out;
  }

  friend bool operator==(const Game& a, const Game& b) { return a.enc_ == b.enc_; }

 private:
  Encoding enc_;
  int id_ = 0;
};

// Action of `player` strictly dominating the other one, or -1.
inline int dominant_action(const Game& g, Seat player) {
  for (int a = 0; a < 2; ++a) {
    if (g.payoff_as(player, a, 0) > g.payoff_as(player, 1 - a, 0) &&
        g.payoff_as(player, a, 1) > g.payoff_as(player, 1 - a, 1))
      return a;
  }
  return -1;
}

inline bool has_dominant_action(const Game& g, Seat player) { return dominant_action(g, player) >= 0; }

inline SecurityResult maximin_strategy(const Game& g, Seat player) { return maximin(g.matrix(player)); }

// Strategy for the seat opposite `victim` that holds the victim to its
// minimax value.
inline SecurityResult minimax_strategy_against(const Game& g, Seat victim) { return minimax_against(g.matrix(victim)); }

namespace detail {

// Player-interchange convention. When exactly one player has a dominant
// action, the player that alone reaches its top outcome at the
// dominance-solvable cell sits in the row; otherwise the dominant player does.
inline bool preferred_orientation(const Game& g) {
  const int d1 = dominant_action(g, Seat::row);
  const int d2 = dominant_action(g, Seat::col);
  if ((d1 >= 0) == (d2 >= 0)) return true;
  JointAction eq{};
  if (d1 >= 0) {
    eq.row = d1;
    eq.col = g.payoff(Seat::col, d1, 0) > g.payoff(Seat::col, d1, 1) ? 0 : 1;
  } else {
    eq.col = d2;
    eq.row = g.payoff(Seat::row, 0, d2) > g.payoff(Seat::row, 1, d2) ? 0 : 1;
  }
  const bool top1 = g.payoff(Seat::row, eq) == 4;
  const bool top2 = g.payoff(Seat::col, eq) == 4;
  if (top1 != top2) return top1;
  return d1 >= 0;
}

}  // namespace detail

// Representative of g's orbit: the lexicographically smallest encoding among
// the symmetry images that satisfy the player-interchange convention.
inline Game canonical(const Game& g) {
  const Game* best = nullptr;
  auto imgs = g.images();
  for (const Game& im : imgs) {
    if (!detail::preferred_orientation(im)) continue;
    if (best == nullptr || im.encoding() < best->encoding()) best = &im;
  }
  return Game(best->encoding(), g.id());
}

// Every strictly ordinal 2x2 bimatrix (4! x 4! assignments).
inline std::vector<Game> all_ordinal_games() {
  std::vector<Game> out;
  std::array<int, 4> p{1, 2, 3, 4};
  do {
    std::array<int, 4> q{1, 2, 3, 4};
    do {
      Game::Encoding e{};
      for (int cell = 0; cell < 4; ++cell) {
        e[2 * cell] = p[cell];
        e[2 * cell + 1] = q[cell];
      }
      out.emplace_back(e);
    } while (std::next_permutation(q.begin(), q.end()));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// The 78 distinct games, no-conflict games first, each group in encoding
// order. Ids run from 1.
inline std::vector<Game> enumerate_games() {
  std::vector<Game> reps;
  for (const Game& g : all_ordinal_games()) {
    Game c = canonical(g);
    if (std::find(reps.begin(), reps.end(), c) == reps.end()) reps.push_back(c);
  }
  std::sort(reps.begin(), reps.end(), [](const Game& a, const Game& b) {
    const int ca = a.game_class() == GameClass::no_conflict ? 0 : 1;
    const int cb = b.game_class() == GameClass::no_conflict ? 0 : 1;
    if (ca != cb) return ca < cb;
    return a.encoding() < b.encoding();
  });
  for (std::size_t i = 0; i < reps.size(); ++i) reps[i].set_id(static_cast<int>(i) + 1);
  return reps;
}

inline Game game_by_id(int id) {
  static const std::vector<Game> games = enumerate_games();
  if (id < 1 || id > static_cast<int>(games.size())) throw std::out_of_range("unknown game id " + std::to_string(id));
  return games[static_cast<std::size_t>(id - 1)];
}

}  // namespace typeprior
