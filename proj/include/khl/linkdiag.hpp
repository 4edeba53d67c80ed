#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "khl/laurent.hpp"

namespace khl {

/// Arc labels in PD order: incoming under-strand first, then counterclockwise.
struct Crossing {
  std::array<int, 4> arcs{};
  friend bool operator==(const Crossing&, const Crossing&) = default;
};

/// Oriented planar diagram. Construction validates label arity and orientation.
class LinkDiagram {
 public:
  LinkDiagram() = default;
  LinkDiagram(std::vector<Crossing> crossings, int unknot_components);

  const std::vector<Crossing>& crossings() const { return crossings_; }
  std::size_t crossing_count() const { return crossings_.size(); }
  int unknot_components() const { return unknots_; }

  /// Whether the label in `slot` of crossing `index` points into the crossing.
  bool incoming(std::size_t index, int slot) const { return incoming_[index][slot]; }
  int sign(std::size_t index) const { return signs_[index]; }
  int writhe() const;
  int positive_count() const;
  int negative_count() const;
  /// Closed components, including the crossingless ones.
  int component_count() const { return components_; }
  bool is_knot() const { return components_ == 1; }

  /// Labels renumbered 1..2n in traversal order; crossing order kept.
  LinkDiagram relabeled() const;

  friend bool operator==(const LinkDiagram& a, const LinkDiagram& b) {
    return a.crossings_ == b.crossings_ && a.unknots_ == b.unknots_;
  }

 private:
  std::vector<Crossing> crossings_;
  int unknots_ = 0;
  std::vector<std::array<bool, 4>> incoming_;
  std::vector<int> signs_;
  int components_ = 0;
};

LinkDiagram parse_pd(const std::string& text);
std::string serialize(const LinkDiagram& d);

LinkDiagram unknot_diagram();
LinkDiagram torus_link(int two, int m);
LinkDiagram mirror(const LinkDiagram& d);
LinkDiagram whitehead_double(const LinkDiagram& companion, int twists, int clasp_sign);

/// Kauffman-bracket state sum; the unknot evaluates to q + q^-1.
LaurentPoly jones_kauffman(const LinkDiagram& d);
/// Symmetric, normalized so that the value at 1 is 1.
LaurentPoly alexander_poly(const LinkDiagram& d);

inline constexpr std::size_t kJonesMaxCrossings = 22;

/// Expression tree for the builder grammar.
struct BuilderExpr {
  enum class Kind { Torus, Double, Mirror, Pd };
  Kind kind = Kind::Pd;
  int torus_m = 0;
  int twists = 0;
  int clasp = 1;
  std::string pd_text;
  std::shared_ptr<const BuilderExpr> child;

  std::string canonical() const;
  LinkDiagram build() const;
};

BuilderExpr parse_builder(const std::string& text);

}  // namespace khl
