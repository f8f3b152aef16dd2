#pragma once

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "bethe/error.hpp"

namespace bethe {

// Every non-leaf node has k children.
struct ConstantChildren {
  int k = 2;
};

// Finite ball of the infinite k-regular tree: the root has k children, every
// other non-leaf has k-1.
struct RegularSubtree {
  int k = 3;
};

// A node of generation g has alphas[g mod alphas.size()] children.
struct Periodic {
  std::vector<int> alphas;
};

// A node of generation g has alphas[g] children; alphas strictly increasing.
struct Sequence {
  std::vector<int> alphas;
};

// Upper-adjacency graph of the k-ary rooted fan of dimension d: every frontier
// node receives k disjoint cliques of d-1 new nodes.
struct Fan {
  int k = 1;
  int d = 2;
};

struct BranchingSpec {
  std::variant<ConstantChildren, RegularSubtree, Periodic, Sequence, Fan> kind;

  static BranchingSpec constant(int k) { return {ConstantChildren{k}}; }
  static BranchingSpec hat(int k) { return {RegularSubtree{k}}; }
  static BranchingSpec periodic(std::vector<int> alphas) { return {Periodic{std::move(alphas)}}; }
  static BranchingSpec sequence(std::vector<int> alphas) { return {Sequence{std::move(alphas)}}; }
  static BranchingSpec fan(int k, int d) { return {Fan{k, d}}; }

  template <typename T>
  [[nodiscard]] bool is() const {
    return std::holds_alternative<T>(kind);
  }
  template <typename T>
  [[nodiscard]] const T& as() const {
    return std::get<T>(kind);
  }

  // True for the kinds whose graph is a rooted tree with a child relation.
  [[nodiscard]] bool is_tree() const { return !is<Fan>() || as<Fan>().d == 2; }

  // Parameter k for constant, hat and fan kinds; 0 otherwise.
  [[nodiscard]] int k() const {
    if (is<ConstantChildren>()) return as<ConstantChildren>().k;
    if (is<RegularSubtree>()) return as<RegularSubtree>().k;
    if (is<Fan>()) return as<Fan>().k;
    return 0;
  }

  [[nodiscard]] std::string family_name() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, ConstantChildren>) return "constant";
          else if constexpr (std::is_same_v<S, RegularSubtree>) return "hat";
          else if constexpr (std::is_same_v<S, Periodic>) return "periodic";
          else if constexpr (std::is_same_v<S, Sequence>) return "sequence";
          else return "fan";
        },
        kind);
  }

  [[nodiscard]] std::string label() const {
    std::ostringstream os;
    os << family_name() << "(";
    std::visit(
        [&os](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Periodic> || std::is_same_v<S, Sequence>) {
            for (std::size_t i = 0; i < s.alphas.size(); ++i) os << (i ? "," : "") << s.alphas[i];
          } else if constexpr (std::is_same_v<S, Fan>) {
            os << "k=" << s.k << ",d=" << s.d;
          } else {
            os << "k=" << s.k;
          }
        },
        kind);
    os << ")";
    return os.str();
  }

  friend bool operator==(const BranchingSpec& a, const BranchingSpec& b) {
    if (a.kind.index() != b.kind.index()) return false;
    return std::visit(
        [&b](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          const auto& t = std::get<S>(b.kind);
          if constexpr (std::is_same_v<S, Periodic> || std::is_same_v<S, Sequence>) return s.alphas == t.alphas;
          else if constexpr (std::is_same_v<S, Fan>) return s.k == t.k && s.d == t.d;
          else return s.k == t.k;
        },
        a.kind);
  }

  // Throws SpecError naming the violated bound.
  void validate() const {
    std::visit(
        [](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, ConstantChildren>) {
            if (s.k < 2) throw SpecError("ConstantChildren requires k >= 2, got k=" + std::to_string(s.k));
          } else if constexpr (std::is_same_v<S, RegularSubtree>) {
            if (s.k < 3) throw SpecError("RegularSubtree requires k >= 3, got k=" + std::to_string(s.k));
          } else if constexpr (std::is_same_v<S, Periodic>) {
            if (s.alphas.size() < 2)
              throw SpecError("Periodic requires a period of length >= 2 (use ConstantChildren for length 1)");
            for (int a : s.alphas)
              if (a < 2) throw SpecError("Periodic requires every alpha >= 2, got " + std::to_string(a));
          } else if constexpr (std::is_same_v<S, Sequence>) {
            if (s.alphas.empty()) throw SpecError("Sequence requires at least one alpha");
            for (std::size_t i = 0; i < s.alphas.size(); ++i) {
              if (s.alphas[i] < 2) throw SpecError("Sequence requires every alpha >= 2, got " + std::to_string(s.alphas[i]));
              if (i > 0 && s.alphas[i] <= s.alphas[i - 1])
                throw SpecError("Sequence requires strictly increasing alphas (alpha[" + std::to_string(i) +
                                "]=" + std::to_string(s.alphas[i]) + " <= alpha[" + std::to_string(i - 1) +
                                "]=" + std::to_string(s.alphas[i - 1]) + ")");
            }
          } else {
            if (s.k < 1) throw SpecError("Fan requires k >= 1, got k=" + std::to_string(s.k));
            if (s.d < 2) throw SpecError("Fan requires d >= 2, got d=" + std::to_string(s.d));
          }
        },
        kind);
  }

  // Validates the spec together with a depth.
  void validate(int depth) const {
    validate();
    if (depth < 0) throw SpecError("depth must be >= 0, got " + std::to_string(depth));
    if (is<Periodic>()) {
      const auto l = static_cast<int>(as<Periodic>().alphas.size());
      if (depth % l != 0)
        throw SpecError("Periodic trees are built at complete periods only: depth " + std::to_string(depth) +
                        " is not a multiple of the period " + std::to_string(l));
    }
    if (is<Sequence>()) {
      const auto l = static_cast<int>(as<Sequence>().alphas.size());
      if (depth > l)
        throw SpecError("Sequence depth " + std::to_string(depth) + " exceeds the number of alphas " +
                        std::to_string(l));
    }
  }

  // Number of children of a node at generation g (k(d-1) for fans).
  [[nodiscard]] int children_at(int g) const {
    return std::visit(
        [g](const auto& s) -> int {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, ConstantChildren>) return s.k;
          else if constexpr (std::is_same_v<S, RegularSubtree>) return g == 0 ? s.k : s.k - 1;
          else if constexpr (std::is_same_v<S, Periodic>) return s.alphas[static_cast<std::size_t>(g) % s.alphas.size()];
          else if constexpr (std::is_same_v<S, Sequence>) return s.alphas.at(static_cast<std::size_t>(g));
          else return s.k * (s.d - 1);
        },
        kind);
  }
};

enum class OperatorKind { Adjacency, Laplacian, RandomWalk };

inline std::string to_string(OperatorKind op) {
  switch (op) {
    case OperatorKind::Adjacency: return "adjacency";
    case OperatorKind::Laplacian: return "laplacian";
    case OperatorKind::RandomWalk: return "randomwalk";
  }
  return "?";
}

inline OperatorKind parse_operator(std::string_view s) {
  if (s == "adjacency") return OperatorKind::Adjacency;
  if (s == "laplacian") return OperatorKind::Laplacian;
  if (s == "randomwalk" || s == "random-walk" || s == "walk") return OperatorKind::RandomWalk;
  throw SpecError("unknown operator '" + std::string(s) + "'");
}

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw SpecError("node count overflows 64 bits");
  return out;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw SpecError("node count overflows 64 bits");
  return out;
}

inline std::uint64_t ipow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace detail

// Per-generation structure of a spherically symmetric rooted tree: every
// node at generation g has children[g] children (children[depth] == 0).
struct LevelModel {
  int depth = 0;
  std::vector<int> children;
  std::vector<std::uint64_t> level_size;

  [[nodiscard]] int degree(int g) const { return children[static_cast<std::size_t>(g)] + (g > 0 ? 1 : 0); }

  [[nodiscard]] std::uint64_t n_nodes() const {
    std::uint64_t n = 0;
    for (auto s : level_size) n = detail::checked_add(n, s);
    return n;
  }
};

inline LevelModel level_model(const BranchingSpec& spec, int depth) {
  spec.validate(depth);
  if (!spec.is_tree()) throw SpecError("level model requires a tree family, got " + spec.label());
  LevelModel m;
  m.depth = depth;
  m.children.resize(static_cast<std::size_t>(depth) + 1, 0);
  m.level_size.resize(static_cast<std::size_t>(depth) + 1, 1);
  for (int g = 0; g < depth; ++g) {
    m.children[static_cast<std::size_t>(g)] = spec.children_at(g);
    m.level_size[static_cast<std::size_t>(g) + 1] =
        detail::checked_mul(m.level_size[static_cast<std::size_t>(g)],
                            static_cast<std::uint64_t>(m.children[static_cast<std::size_t>(g)]));
  }
  return m;
}

// Closed-form node count; must agree with the built graph.
inline std::uint64_t node_count_closed(const BranchingSpec& spec, int depth) {
  spec.validate(depth);
  return std::visit(
      [depth](const auto& s) -> std::uint64_t {
        using S = std::decay_t<decltype(s)>;
        using detail::ipow;
        if constexpr (std::is_same_v<S, ConstantChildren>) {
          const auto k = static_cast<std::uint64_t>(s.k);
          return (ipow(k, depth + 1) - 1) / (k - 1);
        } else if constexpr (std::is_same_v<S, RegularSubtree>) {
          const auto k = static_cast<std::uint64_t>(s.k);
          return detail::checked_mul(k, ipow(k - 1, depth) - 1) / (k - 2) + 1;
        } else if constexpr (std::is_same_v<S, Fan>) {
          const auto q = static_cast<std::uint64_t>(s.k) * static_cast<std::uint64_t>(s.d - 1);
          std::uint64_t n = 1;
          for (int i = 1; i <= depth; ++i) n = detail::checked_add(n, ipow(q, i));
          return n;
        } else {
          // sum over generations of the product of branching numbers above it
          std::uint64_t n = 1, level = 1;
          for (int g = 0; g < depth; ++g) {
            level = detail::checked_mul(level, static_cast<std::uint64_t>(s.alphas[static_cast<std::size_t>(g) % s.alphas.size()]));
            n = detail::checked_add(n, level);
          }
          return n;
        }
      },
      spec.kind);
}

}  // namespace bethe
