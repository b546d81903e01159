#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "typeprior/evolution.hpp"
#include "typeprior/lft.hpp"
#include "typeprior/policy.hpp"

namespace typeprior {

// Hypothesised types for one player, one of which is its actual type.
struct TypeSet {
  std::vector<PolicyType> members;
  std::size_t true_index = 0;
  Seat seat = Seat::col;

  std::size_t size() const noexcept { return members.size(); }
  const PolicyType& true_type() const { return members.at(true_index); }
};

inline constexpr std::size_t kTypeSetRetries = 5;
inline constexpr std::size_t kFillAttempts = 1000;
inline constexpr double kFillMutationRate = 0.3;

namespace detail {

template <typename G>
void collect_evolved(const Game& game, const EvoConfig& base, std::uint64_t seed, std::size_t n, bool by_behavior,
                     std::vector<PolicyType>& out) {
  std::vector<std::vector<double>> seen;
  for (const auto& t : out) seen.push_back(behavior_signature(t, Seat::col));
  for (std::size_t attempt = 0; attempt < kTypeSetRetries && out.size() < n; ++attempt) {
    EvoConfig cfg = base;
    cfg.seed = derive_seed(seed, attempt);
    const auto pools = coevolve<G>(game, cfg);
    for (const auto& g : pools.col) {
      PolicyType t(g);
      if (std::find(out.begin(), out.end(), t) != out.end()) continue;
      if (by_behavior) {
        auto sig = behavior_signature(t, Seat::col);
        if (std::find(seen.begin(), seen.end(), sig) != seen.end()) continue;
        seen.push_back(std::move(sig));
      }
      out.push_back(std::move(t));
    }
  }
}

// Tops up a converged pool with mutated copies of its members.
template <typename G>
void fill_by_mutation(std::uint64_t seed, std::size_t n, bool by_behavior, std::vector<PolicyType>& out) {
  if (out.empty()) return;
  std::vector<std::vector<double>> seen;
  for (const auto& t : out) seen.push_back(behavior_signature(t, Seat::col));
  Rng rng(derive_seed(seed, "fill"));
  const std::size_t base = out.size();
  for (std::size_t k = 0; k < kFillAttempts && out.size() < n; ++k) {
    PolicyType t(std::get<G>(out[k % base].genome()).mutated(rng, kFillMutationRate));
    if (std::find(out.begin(), out.end(), t) != out.end()) continue;
    if (by_behavior) {
      auto sig = behavior_signature(t, Seat::col);
      if (std::find(seen.begin(), seen.end(), sig) != seen.end()) continue;
      seen.push_back(std::move(sig));
    }
    out.push_back(std::move(t));
  }
}

}  // namespace detail

// n distinct column-player types of the given kind with a designated true
// type. Evolved pools that converged to fewer than n distinct members are
// topped up with mutated copies; trees must differ in behavior unless even
// that fails, in which case genome-level distinctness is accepted.
inline TypeSet sample_type_set(TypeKind kind, const Game& game, std::size_t n, std::uint64_t seed,
                               const EvoConfig& evo = {}) {
  if (n < 2) throw std::invalid_argument("a type set needs at least two types");
  std::vector<PolicyType> candidates;
  switch (kind) {
    case TypeKind::lft:
      for (auto& g : generate_lft_pool(game, n, derive_seed(seed, "lft"))) candidates.emplace_back(std::move(g));
      break;
    case TypeKind::cdt:
      detail::collect_evolved<DecisionTree>(game, evo, seed, n, true, candidates);
      if (candidates.size() < n) detail::fill_by_mutation<DecisionTree>(seed, n, true, candidates);
      if (candidates.size() < n) detail::fill_by_mutation<DecisionTree>(seed, n, false, candidates);
      break;
    case TypeKind::cnn:
      detail::collect_evolved<NeuralNet>(game, evo, seed, n, false, candidates);
      if (candidates.size() < n) detail::fill_by_mutation<NeuralNet>(seed, n, false, candidates);
      break;
  }
  if (candidates.size() < n)
    throw std::runtime_error("could not generate " + std::to_string(n) + " distinct " + to_string(kind) + " types");
  Rng rng(derive_seed(seed, "select"));
  rng.shuffle(candidates);
  candidates.resize(n);
  TypeSet out;
  out.members = std::move(candidates);
  out.true_index = rng.below(n);
  out.seat = Seat::col;
  return out;
}

// Line-oriented pool file:
//   # comment
//   game <id>
//   true <index>
//   <one serialized type per line>
inline void write_type_set(std::ostream& os, const TypeSet& ts, int game_id) {
  os << "# typeprior type pool\n";
  os << "game " << game_id << "\n";
  os << "true " << ts.true_index << "\n";
  for (const auto& t : ts.members) os << t.serialize() << "\n";
}

struct LoadedTypeSet {
  TypeSet types;
  int game_id = 0;
};

inline LoadedTypeSet read_type_set(std::istream& is) {
  LoadedTypeSet out;
  std::string line;
  bool have_true = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "game") {
      ls >> out.game_id;
    } else if (key == "true") {
      ls >> out.types.true_index;
      have_true = true;
    } else {
      out.types.members.push_back(PolicyType::deserialize(line));
    }
  }
  if (out.types.members.empty()) throw std::invalid_argument("type pool file has no types");
  if (!have_true) out.types.true_index = 0;
  if (out.types.true_index >= out.types.members.size()) throw std::invalid_argument("true type index out of range");
  return out;
}

// Content hash of the serialized members and true index, as 16 hex digits.
inline std::string type_set_hash(const TypeSet& ts) {
  std::uint64_t h = fnv1a("typeset");
  for (const auto& t : ts.members) h = fnv1a(t.serialize() + "\n", h);
  h = fnv1a(std::to_string(ts.true_index), h);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace typeprior
