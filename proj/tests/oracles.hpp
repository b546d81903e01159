#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the policy types' full-history act().

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "typeprior/game.hpp"
#include "typeprior/history.hpp"
#include "typeprior/lft.hpp"
#include "typeprior/policy.hpp"
#include "typeprior/rng.hpp"

namespace oracle {

using typeprior::History;
using typeprior::JointAction;
using typeprior::PayoffMatrix;
using typeprior::PolicyType;
using typeprior::Seat;

// Expectimax over every joint trajectory of the given depth. Each type's
// prediction is recomputed from the whole hypothetical history.
inline double expectimax(const PayoffMatrix& u, const std::vector<PolicyType>& types, const std::vector<double>& post,
                         const History& h, int own, int depth) {
  double total = 0;
  for (std::size_t k = 0; k < types.size(); ++k) {
    if (post[k] == 0.0) continue;
    const auto d = types[k].act(h, Seat::col);
    for (int aj = 0; aj < 2; ++aj) {
      const double pj = d[static_cast<std::size_t>(aj)];
      if (pj == 0.0) continue;
      double q = u[static_cast<std::size_t>(own)][static_cast<std::size_t>(aj)];
      if (depth > 1) {
        const History next = h.extended(JointAction{own, aj});
        q += std::max(expectimax(u, types, post, next, 0, depth - 1), expectimax(u, types, post, next, 1, depth - 1));
      }
      total += post[k] * pj * q;
    }
  }
  return total;
}

// A random game, three types of mixed kinds (at least one stochastic), a
// random posterior and a random history to plan from.
struct PlannerInstance {
  typeprior::Game game;
  std::vector<PolicyType> types;
  std::vector<double> posterior;
  History history;
};

inline PlannerInstance random_planner_instance(typeprior::Rng& rng) {
  using namespace typeprior;
  const auto games = enumerate_games();
  PlannerInstance out;
  out.game = games[rng.below(games.size())];
  out.types.emplace_back(NeuralNet::random(rng));
  out.types.emplace_back(DecisionTree::random(rng));
  const auto lft = generate_lft_pool(out.game, 3, rng.next(), Seat::col);
  out.types.emplace_back(lft[rng.below(lft.size())]);
  double sum = 0;
  for (int k = 0; k < 3; ++k) {
    out.posterior.push_back(-std::log(1.0 - rng.uniform()));
    sum += out.posterior.back();
  }
  for (auto& x : out.posterior) x /= sum;
  const std::size_t len = rng.below(5);
  for (std::size_t t = 0; t < len; ++t)
    out.history.push({static_cast<int>(rng.below(2)), static_cast<int>(rng.below(2))});
  return out;
}

// Worst-case expected loss of prior p under loss matrix a.
inline double worst_loss(const std::vector<std::vector<double>>& a, const std::vector<double>& p) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : a) {
    double s = 0;
    for (std::size_t j = 0; j < p.size(); ++j) s += row[j] * p[j];
    worst = std::max(worst, s);
  }
  return worst;
}

// Grid search over the floored simplex at step 1e-3, followed by successive
// local refinements around the incumbent. The objective is convex and
// piecewise linear, so the refinement converges on the global minimum.
struct GridResult {
  double coarse = 0;  // best value on the 1e-3 grid
  double refined = 0;
  std::vector<double> p;
};

inline GridResult lp_grid_search(const std::vector<std::vector<double>>& a, double floor) {
  const std::size_t n = a.size();
  GridResult out;
  out.coarse = std::numeric_limits<double>::infinity();
  auto point = [&](double x, double y) {
    std::vector<double> p(n);
    p[0] = x;
    if (n == 2) {
      p[1] = 1.0 - x;
    } else {
      p[1] = y;
      p[2] = 1.0 - x - y;
    }
    return p;
  };
  auto feasible = [&](const std::vector<double>& p) {
    for (double v : p)
      if (v < floor - 1e-15) return false;
    return true;
  };
  const double step = 1e-3;
  std::vector<double> best;
  const int steps = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= steps; ++i) {
    const double x = std::max(floor, i * step);
    const int jmax = n == 2 ? 0 : steps - i;
    for (int j = 0; j <= jmax; ++j) {
      const double y = n == 2 ? 0.0 : std::max(floor, j * step);
      const auto p = point(x, y);
      if (!feasible(p)) continue;
      const double l = worst_loss(a, p);
      if (l < out.coarse) {
        out.coarse = l;
        best = p;
      }
    }
  }
  out.refined = out.coarse;
  out.p = best;
  for (double s = step / 4; s > 1e-13; s /= 4) {
    bool improved = true;
    while (improved) {
      improved = false;
      const auto centre = out.p;
      for (int i = -8; i <= 8; ++i) {
        for (int j = (n == 2 ? 0 : -8); j <= (n == 2 ? 0 : 8); ++j) {
          const auto p = point(centre[0] + i * s, n == 2 ? 0.0 : centre[1] + j * s);
          if (!feasible(p)) continue;
          const double l = worst_loss(a, p);
          if (l < out.refined - 1e-15) {
            out.refined = l;
            out.p = p;
            improved = true;
          }
        }
      }
    }
  }
  return out;
}

// Paired t-test values computed with scipy.stats.ttest_rel.
struct TTestCase {
  std::vector<double> x, y;
  double t, p_two, p_right;
};

inline const std::vector<TTestCase>& ttest_reference() {
  static const std::vector<TTestCase> cases{
      {{12.1, 14.3, 11.8, 13.5, 15.2, 12.9},
       {11.4, 13.9, 12.0, 12.6, 14.1, 12.2},
       3.222516933177451,
       0.023399942814889583,
       0.011699971407444791},
      {{5, 6, 7, 8, 9}, {5.5, 5.8, 7.9, 8.1, 9.6}, -1.9649332219810713, 0.12086916412229969, 0.9395654179388502},
      {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
       {1.5, 2.1, 2.9, 4.6, 5.2, 6.8, 7.1, 8.9, 9.3, 10.4},
       -3.7262065676254967,
       0.004725079229467851,
       0.997637460385266},
      {{2.5, 3.1, 2.8, 3.6, 2.9, 3.3, 3.0, 2.7},
       {2.1, 2.9, 2.2, 3.0, 2.8, 2.6, 2.5, 2.4},
       5.6666666666666705,
       0.0007611846553941665,
       0.00038059232769708325},
      {{10, 12, 9, 11, 13}, {10.2, 11.7, 9.4, 10.6, 13.1}, 2.3425900273671606e-15, 0.9999999999999982, 0.4999999999999991},
  };
  return cases;
}

}  // namespace oracle
