#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <gmpxx.h>

#include "khl/error.hpp"
#include "khl/linkdiag.hpp"

namespace khl {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::map<int, std::size_t> dense_labels(const LinkDiagram& d) {
  std::map<int, std::size_t> index;
  for (const auto& c : d.crossings())
    for (int a : c.arcs) index.emplace(a, index.size());
  return index;
}

// Dense polynomial in one variable with nonnegative exponents.
using IntPoly = std::vector<mpz_class>;

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

IntPoly mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

IntPoly sub(IntPoly a, const IntPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// Exact division; the divisor must divide the dividend over Z[x].
IntPoly exact_div(IntPoly num, const IntPoly& den) {
  if (den.empty()) throw AlgebraError("division by zero polynomial");
  if (num.empty()) return {};
  if (num.size() < den.size()) throw AlgebraError("inexact polynomial division");
  IntPoly q(num.size() - den.size() + 1);
  for (std::size_t k = q.size(); k-- > 0;) {
    const mpz_class& lead = num[k + den.size() - 1];
    if (lead % den.back() != 0) throw AlgebraError("inexact polynomial division");
    q[k] = lead / den.back();
    if (q[k] != 0)
      for (std::size_t j = 0; j < den.size(); ++j) num[k + j] -= q[k] * den[j];
  }
  trim(num);
  if (!num.empty()) throw AlgebraError("inexact polynomial division");
  trim(q);
  return q;
}

// Fraction-free Gaussian elimination.
IntPoly bareiss_det(std::vector<std::vector<IntPoly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return {mpz_class(1)};
  IntPoly prev{mpz_class(1)};
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].empty()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].empty()) ++r;
      if (r == n) return {};
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = exact_div(sub(mul(m[k][k], m[i][j]), mul(m[i][k], m[k][j])), prev);
      m[i][k].clear();
    }
    prev = m[k][k];
  }
  IntPoly det = m[n - 1][n - 1];
  if (negate)
    for (auto& c : det) c = -c;
  return det;
}

}  // namespace

LaurentPoly jones_kauffman(const LinkDiagram& d) {
  const std::size_t n = d.crossing_count();
  if (n > kJonesMaxCrossings)
    throw ResourceLimit("jones_kauffman supports at most " + std::to_string(kJonesMaxCrossings) +
                        " crossings");
  auto index = dense_labels(d);
  std::vector<std::array<std::size_t, 4>> arcs(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int s = 0; s < 4; ++s) arcs[i][s] = index.at(d.crossings()[i].arcs[s]);

  // counts[r][loops]: states with r one-smoothings and the given loop count.
  std::vector<std::vector<long long>> counts(n + 1, std::vector<long long>(2 * n + 2, 0));
  for (std::uint64_t state = 0; state < (std::uint64_t{1} << n); ++state) {
    UnionFind uf(index.size());
    std::size_t loops = index.size();
    int ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = arcs[i];
      if (state >> i & 1) {
        ++ones;
        loops -= uf.unite(a[0], a[3]);
        loops -= uf.unite(a[1], a[2]);
      } else {
        loops -= uf.unite(a[0], a[1]);
        loops -= uf.unite(a[2], a[3]);
      }
    }
    ++counts[ones][loops];
  }

  const LaurentPoly circle = LaurentPoly::monomial(1, 1) + LaurentPoly::monomial(1, -1);
  std::vector<LaurentPoly> circle_pow(2 * n + 2 + d.unknot_components());
  circle_pow[0] = LaurentPoly::monomial(1, 0);
  for (std::size_t k = 1; k < circle_pow.size(); ++k) circle_pow[k] = circle_pow[k - 1] * circle;

  LaurentPoly sum;
  for (std::size_t r = 0; r <= n; ++r)
    for (std::size_t loops = 0; loops < counts[r].size(); ++loops)
      if (counts[r][loops] != 0) {
        long long c = counts[r][loops] * (r % 2 ? -1 : 1);
        sum += LaurentPoly::monomial(c, static_cast<int>(r)) *
               circle_pow[loops + d.unknot_components()];
      }
  const int np = d.positive_count(), nm = d.negative_count();
  sum = sum.shifted(np - 2 * nm);
  return nm % 2 ? -sum : sum;
}

LaurentPoly alexander_poly(const LinkDiagram& d) {
  if (!d.is_knot()) throw InvalidInput("alexander_poly needs a knot diagram");
  const std::size_t n = d.crossing_count();
  if (n == 0) return LaurentPoly::monomial(1, 0);

  // Wirtinger generators: over-arcs, i.e. labels joined through over-passes.
  auto index = dense_labels(d);
  UnionFind uf(index.size());
  for (const auto& c : d.crossings()) uf.unite(index.at(c.arcs[1]), index.at(c.arcs[3]));
  std::map<std::size_t, std::size_t> generator;
  for (const auto& [label, i] : index) generator.emplace(uf.find(i), generator.size());
  if (generator.size() != n) throw InvalidInput("over-arc count differs from crossing count");
  auto gen = [&](int label) { return generator.at(uf.find(index.at(label))); };

  std::vector<std::vector<IntPoly>> matrix(n, std::vector<IntPoly>(n));
  auto add = [&](std::size_t row, std::size_t col, IntPoly p) {
    IntPoly& e = matrix[row][col];
    if (e.size() < p.size()) e.resize(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) e[k] += p[k];
    trim(e);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = d.crossings()[i].arcs;
    std::size_t in = gen(a[0]), out = gen(a[2]), over = gen(a[1]);
    if (d.sign(i) > 0) {
      add(i, in, {0, 1});
      add(i, out, {-1});
      add(i, over, {1, -1});
    } else {
      add(i, in, {1});
      add(i, out, {0, -1});
      add(i, over, {-1, 1});
    }
  }
  matrix.pop_back();
  for (auto& row : matrix) row.pop_back();
  IntPoly det = bareiss_det(std::move(matrix));
  if (det.empty()) throw AlgebraError("Alexander matrix minor vanished");

  std::size_t low = 0;
  while (det[low] == 0) ++low;
  std::size_t span = det.size() - 1 - low;
  if (span % 2) throw AlgebraError("Alexander polynomial has odd span");
  LaurentPoly result;
  for (std::size_t k = low; k < det.size(); ++k)
    if (det[k] != 0)
      result.add(static_cast<int>(k - low) - static_cast<int>(span / 2), det[k].get_si());
  long long at_one = result.evaluate_at_one();
  if (at_one == -1) result = -result;
  else if (at_one != 1) throw AlgebraError("Alexander polynomial does not evaluate to +-1 at 1");
  return result;
}

}  // namespace khl
