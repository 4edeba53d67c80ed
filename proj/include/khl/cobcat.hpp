#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "khl/field.hpp"

namespace khl {

/// Frobenius algebra F[X]/(X^2 - t) with counit e(1) = 0, e(X) = 1; t is 0 or 1.
struct FrobeniusSpec {
  int t = 0;
};

/// Bit i set means the disk bounded by boundary cycle i carries a dot.
using Mask = std::uint64_t;

/// Linear combination of dotted-disk cobordisms. The boundary cycles of Hom(a, b)
/// are numbered: point cycles by least frontier point, then circles of a, then of b.
template <class F>
using Morphism = std::map<Mask, F>;

/// Fixed-point-free involution on frontier positions.
using Pairing = std::vector<int>;

struct Shape {
  int matching = 0;
  int circles = 0;
  friend bool operator==(const Shape&, const Shape&) = default;
  friend auto operator<=>(const Shape&, const Shape&) = default;
};

/// Point-cycle index of every frontier position for the union of two pairings.
std::vector<int> point_cycles(const Pairing& a, const Pairing& b, int* count = nullptr);

/// Surface obtained by gluing dotted disks from two families along boundary arcs
/// and circles, evaluated with neck cutting and the handle operator 2X.
class GluingPlan {
 public:
  struct Input {
    int pieces_a = 0;
    int pieces_b = 0;
    std::vector<std::pair<int, int>> arc_glues;     // global piece ids; b offset by pieces_a
    std::vector<std::pair<int, int>> circle_glues;
    std::vector<int> result_owner;                  // owning piece of each result cycle
  };

  struct Component {
    Mask a_bits = 0;
    Mask b_bits = 0;
    int euler = 0;
    int genus = 0;
    std::vector<int> boundary;  // result cycles; empty when closed
    // X_{c1}^k * prod_{i>1} (X_{c1} + X_{ci}), for k = 0, 1, reduced mod X^2 = t.
    std::array<std::vector<std::pair<Mask, long long>>, 2> expansion;
  };

  GluingPlan(const Input& in, const FrobeniusSpec& spec);

  const std::vector<Component>& components() const { return components_; }

  /// out += scale * glue(a, b)
  template <class F>
  void apply(const Morphism<F>& a, const Morphism<F>& b, const F& scale, Morphism<F>& out) const;

 private:
  int t_;
  std::vector<Component> components_;
};

/// Crossingless matchings over a fixed frontier, with cached composition plans.
class CobordismCategory {
 public:
  CobordismCategory(int points, FrobeniusSpec spec);

  int points() const { return points_; }
  const FrobeniusSpec& spec() const { return spec_; }

  int intern(const Pairing& p);
  const Pairing& pairing(int id) const { return pairings_[id]; }
  std::size_t matching_count() const { return pairings_.size(); }

  int cycle_count(Shape a, Shape b) const;
  /// Quantum degree of the dotted-disk basis element `m` of Hom(a{shift_a}, b{shift_b}).
  int degree(Shape a, int shift_a, Shape b, int shift_b, Mask m) const;

  const GluingPlan& compose_plan(Shape a, Shape b, Shape c);
  /// g o f for f: a -> b and g: b -> c.
  template <class F>
  Morphism<F> compose(Shape a, Shape b, Shape c, const Morphism<F>& f, const Morphism<F>& g);
  /// Identity of `a`; each circle contributes a neck-cut cylinder.
  template <class F>
  Morphism<F> identity(Shape a) const;

 private:
  int points_;
  FrobeniusSpec spec_;
  std::vector<Pairing> pairings_;
  std::map<Pairing, int> index_;
  std::map<std::tuple<Shape, Shape, Shape>, std::unique_ptr<GluingPlan>> compose_cache_;
};

struct Crossing;

/// Complex of crossingless matchings with dotted-cobordism differential entries.
/// Objects are never removed from the index space; elimination marks them dead.
template <class F>
class TangleComplex {
 public:
  struct Object {
    Shape shape;
    int q = 0;
    int h = 0;
    bool alive = true;
  };

  TangleComplex(FrobeniusSpec spec, std::vector<int> frontier);

  /// Complex of `circles` disjoint circles on an empty frontier, before delooping.
  static TangleComplex circles_only(FrobeniusSpec spec, int circles);

  const FrobeniusSpec& spec() const { return category_->spec(); }
  const std::vector<int>& frontier() const { return frontier_; }
  CobordismCategory& category() { return *category_; }
  const CobordismCategory& category() const { return *category_; }

  int add_object(Shape shape, int q, int h);
  /// Adds to the (src -> dst) entry; dst must sit one homological degree higher.
  void add_entry(int src, int dst, const Morphism<F>& m);

  const std::vector<Object>& objects() const { return objects_; }
  const std::map<int, Morphism<F>>& out(int obj) const { return out_[obj]; }
  const std::set<int>& in(int obj) const { return in_[obj]; }
  std::size_t alive_count() const;
  std::size_t entry_count() const;

  /// Tensors with the two-term complex of `x` (0-smoothing -> saddle -> 1-smoothing{1}).
  /// Labels of `x` already on the frontier, or repeated within `x`, are closed off.
  void add_crossing(const Crossing& x);

  /// Replaces an object carrying a circle by two objects with one circle fewer,
  /// at q-shifts +1 (inclusion cup) and -1 (inclusion dotted cup).
  std::pair<int, int> deloop(int obj);
  void deloop_all();

  /// Whether the (src -> dst) entry is a*id + b*X_c with a^2 - t b^2 != 0.
  bool invertible(int src, int dst) const;
  /// Gaussian elimination of an invertible entry.
  void eliminate(int src, int dst);
  /// Eliminates scalar multiples of identities between equal shapes and shifts until none remain.
  std::size_t eliminate_all();

  bool d_squared_zero();
  /// Throws unless every entry is homogeneous of degree 0 (t = 0) or of even degree >= 0 (t = 1).
  void check_degrees() const;

 private:
  void erase_entry(int src, int dst);
  void accumulate(int src, int dst, const Morphism<F>& m);
  bool is_scalar_identity(int src, int dst) const;
  void kill(int obj);

  std::vector<int> frontier_;
  std::unique_ptr<CobordismCategory> category_;
  std::vector<Object> objects_;
  std::vector<std::map<int, Morphism<F>>> out_;
  std::vector<std::set<int>> in_;
};

extern template class TangleComplex<F2>;
extern template class TangleComplex<Rational>;

}  // namespace khl
