#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "khl/field.hpp"
#include "khl/laurent.hpp"

namespace khl {

/// Direction of the differential on the homological grading.
enum class Flavor { Cohomological, Homological };

struct GradedGenerator {
  int degree = 0;       // homological / Maslov
  int filtration = 0;   // quantum / Alexander
  int secondary = 0;
  friend bool operator==(const GradedGenerator&, const GradedGenerator&) = default;
  friend auto operator<=>(const GradedGenerator&, const GradedGenerator&) = default;
};

/// Whether d never increases (engine normal form) or never decreases the filtration.
enum class FiltrationSense { NonIncreasing, NonDecreasing };

/// Sparse complex over F with a filtration respected by d in the given sense.
/// d(x) = sum of column(x)[y] * y; rows(y) indexes the columns with an entry in row y.
template <class F>
class FilteredComplex {
 public:
  explicit FilteredComplex(Flavor flavor = Flavor::Cohomological,
                           FiltrationSense sense = FiltrationSense::NonIncreasing)
      : flavor_(flavor), sense_(sense) {}

  Flavor flavor() const { return flavor_; }
  FiltrationSense sense() const { return sense_; }
  int degree_step() const { return flavor_ == Flavor::Cohomological ? 1 : -1; }

  int add_generator(GradedGenerator g);
  /// Adds coef to the (src -> dst) entry; rejects entries violating the filtration sense
  /// or the degree step.
  void add_term(int src, int dst, const F& coef);

  std::size_t size() const { return gens_.size(); }
  const GradedGenerator& generator(int i) const { return gens_[i]; }
  const std::vector<GradedGenerator>& generators() const { return gens_; }
  const std::map<int, F>& column(int src) const { return cols_[src]; }
  const std::set<int>& row(int dst) const { return rows_[dst]; }
  std::size_t entry_count() const;

  bool d_squared_zero() const;
  /// Negates every filtration level and flips the sense.
  FilteredComplex with_negated_filtration() const;

 private:
  Flavor flavor_;
  FiltrationSense sense_;
  std::vector<GradedGenerator> gens_;
  std::vector<std::map<int, F>> cols_;
  std::vector<std::set<int>> rows_;
};

/// Ranks keyed by (filtration or Alexander, homological or Maslov).
struct BigradedGroups {
  std::map<std::pair<int, int>, long long> ranks;

  void add(int a, int m, long long r);
  long long rank(int a, int m) const;
  long long total() const;
  long long rank_at_filtration(int a) const;
  int max_filtration() const;
  int min_filtration() const;
  friend bool operator==(const BigradedGroups&, const BigradedGroups&) = default;
};

enum class PivotOrder { Markowitz, Natural };

/// Rank of a sparse matrix given as rows of (column -> value).
template <class F>
std::size_t sparse_rank(std::vector<std::map<int, F>> rows, PivotOrder order = PivotOrder::Markowitz);

/// Homology per (filtration, degree); d must preserve filtration exactly.
template <class F>
BigradedGroups homology_ranks(const FilteredComplex<F>& c, PivotOrder order = PivotOrder::Markowitz);

struct Reduction {
  std::vector<GradedGenerator> survivors;  // sorted
  std::vector<int> drops;                  // filtration drop of each cancellation, in order
};

/// Cancels minimal-drop entries until d = 0. With `rng`, picks uniformly among
/// minimal-drop entries instead of the deterministic fill-in/lexicographic rule.
template <class F>
Reduction filtered_reduce(FilteredComplex<F> c, std::mt19937_64* rng = nullptr);

// ---- knot Floer complexes -------------------------------------------------

struct CfkGenerator {
  std::string name;
  int alexander = 0;
  int maslov = 0;
};

struct CfkArrow {
  int src = 0, dst = 0;
  int nw = 0, nz = 0;
};

/// Generators with (A, M) and differential arrows labelled by basepoint multiplicities, over F2.
struct CfkComplex {
  std::vector<CfkGenerator> generators;
  std::vector<CfkArrow> arrows;

  int index_of(const std::string& name) const;
  /// Complex of arrows with nw = 0, filtered by A.
  FilteredComplex<F2> hat_complex() const;
  /// Associated graded: arrows with nw = nz = 0.
  FilteredComplex<F2> graded_complex() const;
  /// Sum over two-step paths grouped by total (nw, nz) vanishes mod 2.
  bool d_squared_zero() const;
  /// Violations of M(x) - M(y) = 1 - 2 nw and A(x) - A(y) = nz - nw.
  std::vector<std::string> grading_violations() const;
};

CfkComplex parse_cfk(const std::string& text);
std::string serialize_cfk(const CfkComplex& c);

BigradedGroups hfk_hat_groups(const CfkComplex& c);
int tau_from_cfk(const CfkComplex& c);
/// Homology of the hat complex ignoring the filtration.
BigradedGroups hat_total_homology(const CfkComplex& c);

/// sum (-1)^M rank x^A
LaurentPoly hfk_euler_characteristic(const BigradedGroups& g);
/// rank(A, M) == rank(-A, M - 2A) for all entries.
bool hfk_symmetric(const BigradedGroups& g);

/// Rank tables in text form: optional `grading-scale <k>`, then `rank A=<a> M=<m> <r>` lines.
struct RankTable {
  int grading_scale = 1;
  BigradedGroups groups;
};
RankTable parse_rank_table(const std::string& text);
std::string serialize_rank_table(const RankTable& t);

/// Lee complex of a knot with d non-decreasing in q: s from the two survivors.
int s_from_lee(const FilteredComplex<Rational>& lee);

extern template class FilteredComplex<F2>;
extern template class FilteredComplex<Rational>;

}  // namespace khl
