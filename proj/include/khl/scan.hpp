#pragma once

#include <cstddef>
#include <vector>

#include "khl/cobcat.hpp"
#include "khl/homalg.hpp"
#include "khl/laurent.hpp"
#include "khl/linkdiag.hpp"

namespace khl {

/// Order in which crossings are tensored, with the frontier size after each step.
struct ScanPlan {
  std::vector<int> order;
  std::vector<int> arity;
  int max_arity() const;
};

/// Greedy: take the crossing sharing the most arcs with the frontier, lowest index on ties.
ScanPlan plan_order(const LinkDiagram& d);

/// Closed complex after global shifts. Generators carry (h, q); d raises h by one and,
/// for t = 0, preserves q; for t = 1 it never lowers q.
template <class F>
struct OutputComplex {
  struct Generator {
    int h = 0;
    int q = 0;
  };
  struct Entry {
    int src = 0;
    int dst = 0;
    F coef;
  };
  FrobeniusSpec spec;
  std::vector<Generator> generators;
  std::vector<Entry> entries;

  bool filtered() const { return spec.t != 0; }
  /// Cohomological complex filtered by q, non-decreasing along d.
  FilteredComplex<F> to_filtered() const;
  /// Homology ranks keyed by (q, h); requires t = 0.
  BigradedGroups homology() const;
  /// sum rank * q^j t^h over homology; requires t = 0.
  PoincarePoly poincare() const;
};

inline constexpr std::size_t kDefaultMaxGenerators = 5'000'000;

struct ScanStats {
  ScanPlan plan;
  std::size_t peak_objects = 0;
  std::size_t eliminations = 0;
};

template <class F>
OutputComplex<F> scan(const LinkDiagram& d, FrobeniusSpec spec,
                      std::size_t max_generators = kDefaultMaxGenerators,
                      ScanStats* stats = nullptr);

inline constexpr int kDirectCubeMaxCrossings = 12;

/// Unsimplified cube of resolutions with the same sign and shift conventions.
template <class F>
OutputComplex<F> direct_cube(const LinkDiagram& d, FrobeniusSpec spec);

/// Khovanov homology over F.
template <class F>
PoincarePoly khovanov_poincare(const LinkDiagram& d,
                               std::size_t max_generators = kDefaultMaxGenerators);

/// Rasmussen s of a knot from the Lee complex over Q.
int rasmussen_s(const LinkDiagram& d, std::size_t max_generators = kDefaultMaxGenerators);

/// Survivors of the q-filtered reduction with original q levels; for comparing filtered
/// homotopy types.
template <class F>
std::vector<GradedGenerator> filtered_survivors(const OutputComplex<F>& c);

}  // namespace khl
