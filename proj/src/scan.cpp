#include "khl/scan.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "khl/error.hpp"

namespace khl {

int ScanPlan::max_arity() const {
  return arity.empty() ? 0 : *std::max_element(arity.begin(), arity.end());
}

ScanPlan plan_order(const LinkDiagram& d) {
  const auto& xs = d.crossings();
  const int n = static_cast<int>(xs.size());
  ScanPlan plan;
  std::vector<bool> used(n, false);
  std::map<int, int> open;  // label -> occurrences on the frontier
  for (int step = 0; step < n; ++step) {
    int best = -1, best_score = -1;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      int score = 0;
      for (int a : xs[i].arcs) score += open.count(a);
      if (score > best_score) {
        best = i;
        best_score = score;
      }
    }
    used[best] = true;
    plan.order.push_back(best);
    for (int a : xs[best].arcs) {
      auto it = open.find(a);
      if (it != open.end())
        open.erase(it);
      else
        ++open[a];
    }
    // A kink label occurs twice in one crossing and closes itself.
    std::erase_if(open, [](const auto& e) { return e.second == 2; });
    plan.arity.push_back(static_cast<int>(open.size()));
  }
  return plan;
}

template <class F>
FilteredComplex<F> OutputComplex<F>::to_filtered() const {
  FilteredComplex<F> c(Flavor::Cohomological, FiltrationSense::NonDecreasing);
  for (const auto& g : generators) c.add_generator({g.h, g.q, 0});
  for (const auto& e : entries) c.add_term(e.src, e.dst, e.coef);
  return c;
}

template <class F>
BigradedGroups OutputComplex<F>::homology() const {
  if (filtered()) throw InvalidInput("bigraded homology needs the graded theory (t = 0)");
  return homology_ranks(to_filtered());
}

template <class F>
PoincarePoly OutputComplex<F>::poincare() const {
  PoincarePoly p;
  for (const auto& [key, rank] : homology().ranks) p.add(key.first, key.second, rank);
  return p;
}

template <class F>
OutputComplex<F> scan(const LinkDiagram& d, FrobeniusSpec spec, std::size_t max_generators,
                      ScanStats* stats) {
  ScanPlan plan = plan_order(d);
  auto c = TangleComplex<F>::circles_only(spec, d.unknot_components());
  c.deloop_all();
  std::size_t peak = c.alive_count(), eliminated = 0;
  for (int i : plan.order) {
    c.add_crossing(d.crossings()[i]);
    if (c.alive_count() > max_generators)
      throw ResourceLimit("scan exceeded " + std::to_string(max_generators) + " generators");
    c.deloop_all();
    peak = std::max(peak, c.alive_count());
    if (c.alive_count() > max_generators)
      throw ResourceLimit("scan exceeded " + std::to_string(max_generators) + " generators");
    eliminated += c.eliminate_all();
  }
  if (stats) *stats = {plan, peak, eliminated};

  OutputComplex<F> out;
  out.spec = spec;
  const int h_shift = -d.negative_count();
  const int q_shift = d.positive_count() - 2 * d.negative_count();
  std::vector<int> index(c.objects().size(), -1);
  for (std::size_t i = 0; i < c.objects().size(); ++i) {
    const auto& o = c.objects()[i];
    if (!o.alive) continue;
    index[i] = static_cast<int>(out.generators.size());
    out.generators.push_back({o.h + h_shift, o.q + q_shift});
  }
  for (std::size_t i = 0; i < c.objects().size(); ++i) {
    if (index[i] < 0) continue;
    for (const auto& [j, m] : c.out(static_cast<int>(i))) {
      if (m.size() != 1 || m.begin()->first != 0)
        throw AlgebraError("closed morphism has boundary terms");
      out.entries.push_back({index[i], index[j], m.begin()->second});
    }
  }
  return out;
}

namespace {

// Circles of one resolution: circle index per arc label, labels numbered 1..2n.
struct Resolution {
  std::vector<int> circle_of;
  int circles = 0;
};

Resolution resolve(const LinkDiagram& d, unsigned state, int labels) {
  std::vector<int> parent(labels + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const auto& xs = d.crossings();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& a = xs[i].arcs;
    if ((state >> i) & 1) {
      parent[find(a[0])] = find(a[3]);
      parent[find(a[1])] = find(a[2]);
    } else {
      parent[find(a[0])] = find(a[1]);
      parent[find(a[2])] = find(a[3]);
    }
  }
  Resolution r;
  r.circle_of.assign(labels + 1, -1);
  std::map<int, int> id;
  for (int l = 1; l <= labels; ++l) {
    auto [it, fresh] = id.try_emplace(find(l), r.circles);
    if (fresh) ++r.circles;
    r.circle_of[l] = it->second;
  }
  return r;
}

}  // namespace

template <class F>
OutputComplex<F> direct_cube(const LinkDiagram& d, FrobeniusSpec spec) {
  const int n = static_cast<int>(d.crossing_count());
  if (n > kDirectCubeMaxCrossings)
    throw ResourceLimit("direct cube limited to " + std::to_string(kDirectCubeMaxCrossings) +
                        " crossings");
  const int labels = 2 * n;
  const int extra = d.unknot_components();
  const unsigned states = 1u << n;
  std::vector<Resolution> res(states);
  std::vector<long long> offset(states + 1, 0);
  for (unsigned s = 0; s < states; ++s) {
    res[s] = resolve(d, s, labels);
    res[s].circles += extra;
    offset[s + 1] = offset[s] + (1LL << res[s].circles);
  }
  OutputComplex<F> out;
  out.spec = spec;
  const int h_shift = -d.negative_count();
  const int q_shift = d.positive_count() - 2 * d.negative_count();
  for (unsigned s = 0; s < states; ++s) {
    const int h = std::popcount(s);
    for (long long lab = 0; lab < (1LL << res[s].circles); ++lab) {
      // bit set = X (q -1), clear = 1 (q +1)
      const int xs = std::popcount(static_cast<unsigned long long>(lab));
      out.generators.push_back({h + h_shift, res[s].circles - 2 * xs + h + q_shift});
    }
  }
  const F t(spec.t);
  const auto& cr = d.crossings();
  for (unsigned s = 0; s < states; ++s) {
    for (int i = 0; i < n; ++i) {
      if ((s >> i) & 1) continue;
      const unsigned s2 = s | (1u << i);
      const F sign = std::popcount(s & ((1u << i) - 1)) % 2 == 0 ? F(1) : F(-1);
      const auto& src = res[s];
      const auto& dst = res[s2];
      const auto& a = cr[i].arcs;
      // Target circle -> source circle through a shared label, for untouched circles.
      std::vector<int> from(dst.circles, -1);
      for (int l = 1; l <= labels; ++l) from[dst.circle_of[l]] = src.circle_of[l];
      for (int k = 0; k < extra; ++k) from[dst.circles - extra + k] = src.circles - extra + k;
      const bool merge = src.circle_of[a[0]] != src.circle_of[a[2]];
      auto emit = [&](long long lab, long long target, const F& coef) {
        out.entries.push_back({static_cast<int>(offset[s] + lab),
                               static_cast<int>(offset[s2] + target), sign * coef});
      };
      auto bit = [](long long lab, int c) { return static_cast<int>((lab >> c) & 1); };
      if (merge) {
        const int ca = src.circle_of[a[0]], cb = src.circle_of[a[2]];
        const int m = dst.circle_of[a[0]];
        for (long long lab = 0; lab < (1LL << src.circles); ++lab) {
          long long base = 0;
          for (int j = 0; j < dst.circles; ++j)
            if (j != m && bit(lab, from[j])) base |= 1LL << j;
          const int dots = bit(lab, ca) + bit(lab, cb);
          if (dots < 2)
            emit(lab, base | (static_cast<long long>(dots) << m), F(1));
          else if (spec.t != 0)
            emit(lab, base, t);
        }
      } else {
        const int c0 = src.circle_of[a[0]];
        const int p = dst.circle_of[a[0]], q = dst.circle_of[a[1]];
        if (p == q) throw InvalidInput("diagram is not planar: resolution has a one-to-one saddle");
        for (long long lab = 0; lab < (1LL << src.circles); ++lab) {
          long long base = 0;
          for (int j = 0; j < dst.circles; ++j)
            if (j != p && j != q && bit(lab, from[j])) base |= 1LL << j;
          const long long bp = 1LL << p, bq = 1LL << q;
          if (bit(lab, c0) == 0) {
            emit(lab, base | bq, F(1));
            emit(lab, base | bp, F(1));
          } else {
            emit(lab, base | bp | bq, F(1));
            if (spec.t != 0) emit(lab, base, t);
          }
        }
      }
    }
  }
  return out;
}

template <class F>
PoincarePoly khovanov_poincare(const LinkDiagram& d, std::size_t max_generators) {
  return scan<F>(d, {0}, max_generators).poincare();
}

int rasmussen_s(const LinkDiagram& d, std::size_t max_generators) {
  if (!d.is_knot()) throw InvalidInput("s is defined for knots");
  return s_from_lee(scan<Rational>(d, {1}, max_generators).to_filtered());
}

template <class F>
std::vector<GradedGenerator> filtered_survivors(const OutputComplex<F>& c) {
  auto r = filtered_reduce(c.to_filtered().with_negated_filtration());
  for (auto& g : r.survivors) g.filtration = -g.filtration;
  std::sort(r.survivors.begin(), r.survivors.end());
  return r.survivors;
}

#define KHL_SCAN_INSTANTIATE(F)                                                              \
  template struct OutputComplex<F>;                                                          \
  template OutputComplex<F> scan(const LinkDiagram&, FrobeniusSpec, std::size_t, ScanStats*); \
  template OutputComplex<F> direct_cube(const LinkDiagram&, FrobeniusSpec);                  \
  template PoincarePoly khovanov_poincare<F>(const LinkDiagram&, std::size_t);                          \
  template std::vector<GradedGenerator> filtered_survivors(const OutputComplex<F>&);

KHL_SCAN_INSTANTIATE(F2)
KHL_SCAN_INSTANTIATE(Rational)

}  // namespace khl
