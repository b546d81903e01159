#pragma once

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "typeprior/decision_tree.hpp"
#include "typeprior/history.hpp"
#include "typeprior/lft.hpp"
#include "typeprior/neural_net.hpp"
#include "typeprior/rng.hpp"

namespace typeprior {

enum class TypeKind { lft, cdt, cnn };

inline std::string to_string(TypeKind k) {
  switch (k) {
    case TypeKind::lft: return "LFT";
    case TypeKind::cdt: return "CDT";
    case TypeKind::cnn: return "CNN";
  }
  return "?";
}

inline TypeKind parse_type_kind(const std::string& s) {
  if (s == "LFT" || s == "lft") return TypeKind::lft;
  if (s == "CDT" || s == "cdt") return TypeKind::cdt;
  if (s == "CNN" || s == "cnn") return TypeKind::cnn;
  throw std::invalid_argument("unknown type kind '" + s + "'");
}

// A hypothesised action policy for one player. Immutable; per-play state
// lives in TypeState.
class PolicyType {
 public:
  using Genome = std::variant<LftGenome, DecisionTree, NeuralNet>;

  PolicyType() : genome_(DecisionTree{}) {}
  PolicyType(LftGenome g) : genome_(std::move(g)) {}
  PolicyType(DecisionTree g) : genome_(std::move(g)) {}
  PolicyType(NeuralNet g) : genome_(std::move(g)) {}

  TypeKind kind() const noexcept { return static_cast<TypeKind>(genome_.index()); }
  const Genome& genome() const noexcept { return genome_; }

  TypeState start(Seat seat) const noexcept {
    TypeState s;
    s.seat = seat;
    return s;
  }

  ActionDist act(const TypeState& s) const {
    return std::visit([&](const auto& g) { return g.act(s); }, genome_);
  }

  void observe(TypeState& s, JointAction ja) const {
    if (const auto* lft = std::get_if<LftGenome>(&genome_)) {
      lft->observe(s, ja);
    } else {
      s.shift_in(ja);
    }
  }

  TypeState state_after(const History& h, Seat seat) const {
    TypeState s = start(seat);
    for (const auto& ja : h) observe(s, ja);
    return s;
  }

  // Action distribution after history h, replaying h from the start.
  ActionDist act(const History& h, Seat seat) const { return act(state_after(h, seat)); }

  std::string serialize() const;
  static PolicyType deserialize(const std::string& line);

  friend bool operator==(const PolicyType& a, const PolicyType& b) { return a.genome_ == b.genome_; }

 private:
  Genome genome_;
};

namespace detail {

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

// One line: kind followed by a flat numeric genome.
//   LFT <role> <len> (<row> <col>)*len <punish_p0> <fallback_p0> <punish_rounds>
//   CDT <count> <code>*count
//   CNN <w>*31
inline std::string PolicyType::serialize() const {
  std::ostringstream os;
  os << to_string(kind());
  if (const auto* l = std::get_if<LftGenome>(&genome_)) {
    os << ' ' << static_cast<int>(l->role) << ' ' << l->target.size();
    for (const auto& ja : l->target) os << ' ' << ja.row << ' ' << ja.col;
    os << ' ' << detail::format_double(l->punishment.p0) << ' ' << detail::format_double(l->fallback.p0) << ' '
       << l->punish_rounds;
  } else if (const auto* t = std::get_if<DecisionTree>(&genome_)) {
    os << ' ' << t->size();
    for (int c : t->genome()) os << ' ' << c;
  } else {
    for (double w : std::get<NeuralNet>(genome_).weights()) os << ' ' << detail::format_double(w);
  }
  return os.str();
}

inline PolicyType PolicyType::deserialize(const std::string& line) {
  std::istringstream is(line);
  std::string tag;
  if (!(is >> tag)) throw std::invalid_argument("empty type record");
  auto fail = [&]() { return std::invalid_argument("malformed " + tag + " type record: " + line); };
  PolicyType out;
  switch (parse_type_kind(tag)) {
    case TypeKind::lft: {
      int role = 0;
      std::size_t len = 0;
      if (!(is >> role >> len) || role < 0 || role > 2 || len < 1 || len > kMaxTargetLength) throw fail();
      LftGenome g;
      g.role = static_cast<LftRole>(role);
      for (std::size_t i = 0; i < len; ++i) {
        JointAction ja;
        if (!(is >> ja.row >> ja.col)) throw fail();
        check_action(ja.row);
        check_action(ja.col);
        g.target.push_back(ja);
      }
      std::string p, f;
      if (!(is >> p >> f >> g.punish_rounds)) throw fail();
      g.punishment.p0 = std::stod(p);
      g.fallback.p0 = std::stod(f);
      out = PolicyType(std::move(g));
      break;
    }
    case TypeKind::cdt: {
      std::size_t n = 0;
      if (!(is >> n)) throw fail();
      std::vector<int> codes(n);
      for (auto& c : codes)
        if (!(is >> c)) throw fail();
      out = PolicyType(DecisionTree(std::move(codes)));
      break;
    }
    case TypeKind::cnn: {
      NeuralNet::Weights w{};
      for (auto& x : w) {
        std::string tok;
        if (!(is >> tok)) throw fail();
        x = std::stod(tok);
      }
      out = PolicyType(NeuralNet(w));
      break;
    }
  }
  std::string extra;
  if (is >> extra) throw fail();
  return out;
}

// Fixed probe set for behavioral comparisons: every joint history of length
// at most three.
inline const std::vector<History>& probe_histories() {
  static const std::vector<History> probes = all_histories(3);
  return probes;
}

// Probability of action 0 on each probe history.
inline std::vector<double> behavior_signature(const PolicyType& t, Seat seat,
                                              const std::vector<History>& probes = probe_histories()) {
  std::vector<double> out;
  out.reserve(probes.size());
  for (const auto& h : probes) out.push_back(t.act(h, seat)[0]);
  return out;
}

inline double signature_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return a.empty() ? 0.0 : sum / static_cast<double>(a.size());
}

// Mean total-variation distance between the action distributions of a and b.
inline double behavioral_distance(const PolicyType& a, const PolicyType& b, Seat seat,
                                  const std::vector<History>& probes = probe_histories()) {
  return signature_distance(behavior_signature(a, seat, probes), behavior_signature(b, seat, probes));
}

}  // namespace typeprior
