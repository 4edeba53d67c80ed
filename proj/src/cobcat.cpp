#include "khl/cobcat.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>

#include "khl/error.hpp"
#include "khl/linkdiag.hpp"

namespace khl {

std::vector<int> point_cycles(const Pairing& a, const Pairing& b, int* count) {
  const int n = static_cast<int>(a.size());
  std::vector<int> cycle(n, -1);
  int next = 0;
  for (int p = 0; p < n; ++p) {
    if (cycle[p] >= 0) continue;
    int cur = p;
    do {
      cycle[cur] = next;
      cycle[a[cur]] = next;
      cur = b[a[cur]];
    } while (cur != p);
    ++next;
  }
  if (count) *count = next;
  return cycle;
}

namespace {

using Poly = std::vector<std::pair<Mask, long long>>;

// Multiplies by X_c in F[X_c]/(X_c^2 - t).
Poly times_dot(const Poly& p, int c, int t) {
  Poly out;
  const Mask bit = Mask{1} << c;
  for (auto [m, k] : p) {
    if (m & bit) {
      if (t != 0) out.emplace_back(m & ~bit, k);
    } else {
      out.emplace_back(m | bit, k);
    }
  }
  return out;
}

Poly normalize(Poly p) {
  std::sort(p.begin(), p.end());
  Poly out;
  for (auto [m, k] : p) {
    if (!out.empty() && out.back().first == m)
      out.back().second += k;
    else
      out.emplace_back(m, k);
  }
  std::erase_if(out, [](const auto& e) { return e.second == 0; });
  return out;
}

Poly sum(Poly a, const Poly& b) {
  a.insert(a.end(), b.begin(), b.end());
  return normalize(std::move(a));
}

}  // namespace

GluingPlan::GluingPlan(const Input& in, const FrobeniusSpec& spec) : t_(spec.t) {
  const int total = in.pieces_a + in.pieces_b;
  if (in.pieces_a > 64 || in.pieces_b > 64 || in.result_owner.size() > 64)
    throw ResourceLimit("cobordism has more than 64 boundary cycles");
  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [p, q] : in.arc_glues) parent[find(p)] = find(q);
  for (auto [p, q] : in.circle_glues) parent[find(p)] = find(q);

  std::vector<int> comp_of_root(total, -1);
  std::vector<int> comp(total);
  for (int p = 0; p < total; ++p) {
    int r = find(p);
    if (comp_of_root[r] < 0) {
      comp_of_root[r] = static_cast<int>(components_.size());
      components_.emplace_back();
    }
    comp[p] = comp_of_root[r];
    auto& c = components_[comp[p]];
    ++c.euler;
    if (p < in.pieces_a)
      c.a_bits |= Mask{1} << p;
    else
      c.b_bits |= Mask{1} << (p - in.pieces_a);
  }
  for (auto [p, q] : in.arc_glues) --components_[comp[p]].euler;
  for (std::size_t r = 0; r < in.result_owner.size(); ++r)
    components_[comp[in.result_owner[r]]].boundary.push_back(static_cast<int>(r));

  for (auto& c : components_) {
    const int twice_genus = 2 - c.euler - static_cast<int>(c.boundary.size());
    if (twice_genus < 0 || twice_genus % 2 != 0)
      throw AlgebraError("glued surface has invalid Euler characteristic");
    c.genus = twice_genus / 2;
    if (c.boundary.empty()) continue;
    Poly e0{{0, 1}};
    const int first = c.boundary.front();
    for (std::size_t i = 1; i < c.boundary.size(); ++i)
      e0 = sum(times_dot(e0, first, t_), times_dot(e0, c.boundary[i], t_));
    c.expansion[0] = e0;
    c.expansion[1] = normalize(times_dot(e0, first, t_));
  }
}

template <class F>
void GluingPlan::apply(const Morphism<F>& a, const Morphism<F>& b, const F& scale,
                       Morphism<F>& out) const {
  Poly terms, next;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      terms.assign(1, {0, 1});
      for (const auto& c : components_) {
        const int dots = std::popcount(ma & c.a_bits) + std::popcount(mb & c.b_bits) + c.genus;
        const long long handles = 1LL << c.genus;
        if (t_ == 0 && dots >= 2) {
          terms.clear();
          break;
        }
        if (c.boundary.empty()) {
          if (dots % 2 == 0) {
            terms.clear();
            break;
          }
          for (auto& [m, k] : terms) k *= handles;
          continue;
        }
        const Poly& e = c.expansion[dots % 2];
        next.clear();
        for (auto [m1, k1] : terms)
          for (auto [m2, k2] : e) next.emplace_back(m1 | m2, k1 * k2 * handles);
        terms.swap(next);
        if (terms.empty()) break;
      }
      if (terms.empty()) continue;
      const F coef = ca * cb * scale;
      for (auto [m, k] : terms) {
        auto it = out.try_emplace(m, F(0)).first;
        it->second += coef * F(static_cast<long>(k));
        if (is_zero(it->second)) out.erase(it);
      }
    }
  }
}

template void GluingPlan::apply(const Morphism<F2>&, const Morphism<F2>&, const F2&,
                                Morphism<F2>&) const;
template void GluingPlan::apply(const Morphism<Rational>&, const Morphism<Rational>&,
                                const Rational&, Morphism<Rational>&) const;

// ---- category -----------------------------------------------------------------

CobordismCategory::CobordismCategory(int points, FrobeniusSpec spec)
    : points_(points), spec_(spec) {
  if (points < 0 || points % 2 != 0) throw InvalidInput("frontier size must be even");
  if (spec.t != 0 && spec.t != 1) throw InvalidInput("Frobenius parameter must be 0 or 1");
}

int CobordismCategory::intern(const Pairing& p) {
  if (static_cast<int>(p.size()) != points_) throw InvalidInput("pairing size mismatch");
  for (int i = 0; i < points_; ++i)
    if (p[i] < 0 || p[i] >= points_ || p[i] == i || p[p[i]] != i)
      throw InvalidInput("not a perfect pairing");
  auto [it, fresh] = index_.try_emplace(p, static_cast<int>(pairings_.size()));
  if (fresh) pairings_.push_back(p);
  return it->second;
}

int CobordismCategory::cycle_count(Shape a, Shape b) const {
  int pts = 0;
  point_cycles(pairings_[a.matching], pairings_[b.matching], &pts);
  return pts + a.circles + b.circles;
}

int CobordismCategory::degree(Shape a, int shift_a, Shape b, int shift_b, Mask m) const {
  return cycle_count(a, b) - points_ / 2 - 2 * std::popcount(m) + shift_b - shift_a;
}

const GluingPlan& CobordismCategory::compose_plan(Shape a, Shape b, Shape c) {
  auto key = std::make_tuple(a, b, c);
  auto it = compose_cache_.find(key);
  if (it != compose_cache_.end()) return *it->second;
  const Pairing& pa = pairings_[a.matching];
  const Pairing& pb = pairings_[b.matching];
  const Pairing& pc = pairings_[c.matching];
  int nf = 0, ng = 0, nr = 0;
  auto cf = point_cycles(pa, pb, &nf);
  auto cg = point_cycles(pb, pc, &ng);
  auto cr = point_cycles(pa, pc, &nr);
  GluingPlan::Input in;
  in.pieces_a = nf + a.circles + b.circles;
  in.pieces_b = ng + b.circles + c.circles;
  const int off = in.pieces_a;
  for (int p = 0; p < points_; ++p)
    if (p < pb[p]) in.arc_glues.emplace_back(cf[p], off + cg[p]);
  for (int i = 0; i < b.circles; ++i)
    in.circle_glues.emplace_back(nf + a.circles + i, off + ng + i);
  in.result_owner.assign(nr, -1);
  for (int p = points_ - 1; p >= 0; --p) in.result_owner[cr[p]] = cf[p];
  for (int i = 0; i < a.circles; ++i) in.result_owner.push_back(nf + i);
  for (int i = 0; i < c.circles; ++i) in.result_owner.push_back(off + ng + b.circles + i);
  auto plan = std::make_unique<GluingPlan>(in, spec_);
  return *compose_cache_.emplace(key, std::move(plan)).first->second;
}

template <class F>
Morphism<F> CobordismCategory::compose(Shape a, Shape b, Shape c, const Morphism<F>& f,
                                       const Morphism<F>& g) {
  Morphism<F> out;
  compose_plan(a, b, c).apply(f, g, F(1), out);
  return out;
}

template <class F>
Morphism<F> CobordismCategory::identity(Shape a) const {
  const int pts = points_ / 2;
  Morphism<F> out{{0, F(1)}};
  for (int i = 0; i < a.circles; ++i) {
    Morphism<F> next;
    for (const auto& [m, k] : out) {
      next[m | Mask{1} << (pts + i)] += k;
      next[m | Mask{1} << (pts + a.circles + i)] += k;
    }
    out.swap(next);
  }
  return out;
}

template Morphism<F2> CobordismCategory::compose(Shape, Shape, Shape, const Morphism<F2>&,
                                                 const Morphism<F2>&);
template Morphism<Rational> CobordismCategory::compose(Shape, Shape, Shape,
                                                       const Morphism<Rational>&,
                                                       const Morphism<Rational>&);
template Morphism<F2> CobordismCategory::identity(Shape) const;
template Morphism<Rational> CobordismCategory::identity(Shape) const;

// ---- tangle complex -----------------------------------------------------------

template <class F>
TangleComplex<F>::TangleComplex(FrobeniusSpec spec, std::vector<int> frontier)
    : frontier_(std::move(frontier)),
      category_(std::make_unique<CobordismCategory>(static_cast<int>(frontier_.size()), spec)) {}

template <class F>
TangleComplex<F> TangleComplex<F>::circles_only(FrobeniusSpec spec, int circles) {
  TangleComplex c(spec, {});
  int empty = c.category_->intern({});
  c.add_object({empty, circles}, 0, 0);
  return c;
}

template <class F>
int TangleComplex<F>::add_object(Shape shape, int q, int h) {
  objects_.push_back({shape, q, h, true});
  out_.emplace_back();
  in_.emplace_back();
  return static_cast<int>(objects_.size()) - 1;
}

template <class F>
void TangleComplex<F>::add_entry(int src, int dst, const Morphism<F>& m) {
  if (objects_.at(dst).h != objects_.at(src).h + 1)
    throw AlgebraError("differential entries must raise the homological degree by one");
  accumulate(src, dst, m);
}

template <class F>
void TangleComplex<F>::accumulate(int src, int dst, const Morphism<F>& m) {
  if (m.empty()) return;
  auto& entry = out_[src][dst];
  for (const auto& [mask, k] : m) {
    auto it = entry.try_emplace(mask, F(0)).first;
    it->second += k;
    if (is_zero(it->second)) entry.erase(it);
  }
  if (entry.empty()) {
    out_[src].erase(dst);
    in_[dst].erase(src);
  } else {
    in_[dst].insert(src);
  }
}

template <class F>
void TangleComplex<F>::erase_entry(int src, int dst) {
  out_[src].erase(dst);
  in_[dst].erase(src);
}

template <class F>
void TangleComplex<F>::kill(int obj) {
  std::vector<int> outs;
  for (const auto& [w, m] : out_[obj]) outs.push_back(w);
  for (int w : outs) erase_entry(obj, w);
  std::vector<int> ins(in_[obj].begin(), in_[obj].end());
  for (int z : ins) erase_entry(z, obj);
  objects_[obj].alive = false;
}

template <class F>
std::size_t TangleComplex<F>::alive_count() const {
  return static_cast<std::size_t>(
      std::count_if(objects_.begin(), objects_.end(), [](const Object& o) { return o.alive; }));
}

template <class F>
std::size_t TangleComplex<F>::entry_count() const {
  std::size_t n = 0;
  for (const auto& o : out_) n += o.size();
  return n;
}

namespace {

Mask remove_bit(Mask m, int bit) {
  const Mask low = (Mask{1} << bit) - 1;
  return (m & low) | ((m >> (bit + 1)) << bit);
}

// Partner slot of each slot in the given smoothing of X(a,b,c,d).
constexpr int kSmoothPartner[2][4] = {{1, 0, 3, 2}, {3, 2, 1, 0}};
// Arc index of each slot within the smoothing.
constexpr int kSmoothArc[2][4] = {{0, 0, 1, 1}, {0, 1, 1, 0}};

}  // namespace

template <class F>
std::pair<int, int> TangleComplex<F>::deloop(int obj) {
  Object o = objects_.at(obj);
  if (!o.alive || o.shape.circles == 0) throw InvalidInput("object has no circle to deloop");
  const Shape child{o.shape.matching, o.shape.circles - 1};
  const int plus = add_object(child, o.q + 1, o.h);
  const int minus = add_object(child, o.q - 1, o.h);
  const auto& cat = *category_;
  const Pairing& mine = cat.pairing(o.shape.matching);

  // Outgoing: the circle is a source circle. Cup keeps dotted terms, dotted cup undotted ones.
  std::vector<std::pair<int, Morphism<F>>> outs(out_[obj].begin(), out_[obj].end());
  for (const auto& [w, m] : outs) {
    int pts = 0;
    point_cycles(mine, cat.pairing(objects_[w].shape.matching), &pts);
    const int bit = pts + o.shape.circles - 1;
    Morphism<F> to_plus, to_minus;
    for (const auto& [mask, k] : m)
      ((mask >> bit) & 1 ? to_plus : to_minus).emplace(remove_bit(mask, bit), k);
    accumulate(plus, w, to_plus);
    accumulate(minus, w, to_minus);
  }
  // Incoming: the circle is a target circle. Dotted cap keeps undotted terms, cap dotted ones.
  std::vector<int> ins(in_[obj].begin(), in_[obj].end());
  for (int z : ins) {
    const Morphism<F> m = out_[z].at(obj);
    int pts = 0;
    point_cycles(cat.pairing(objects_[z].shape.matching), mine, &pts);
    const int bit = pts + objects_[z].shape.circles + o.shape.circles - 1;
    Morphism<F> to_plus, to_minus;
    for (const auto& [mask, k] : m)
      ((mask >> bit) & 1 ? to_minus : to_plus).emplace(remove_bit(mask, bit), k);
    accumulate(z, plus, to_plus);
    accumulate(z, minus, to_minus);
  }
  kill(obj);
  return {plus, minus};
}

template <class F>
void TangleComplex<F>::deloop_all() {
  for (std::size_t i = 0; i < objects_.size(); ++i)
    if (objects_[i].alive && objects_[i].shape.circles > 0) deloop(static_cast<int>(i));
}

template <class F>
bool TangleComplex<F>::is_scalar_identity(int src, int dst) const {
  const auto& a = objects_[src];
  const auto& b = objects_[dst];
  if (a.shape != b.shape || a.shape.circles != 0 || a.q != b.q) return false;
  const auto& m = out_[src].at(dst);
  return m.size() == 1 && m.begin()->first == 0;
}

template <class F>
bool TangleComplex<F>::invertible(int src, int dst) const {
  const auto& a = objects_.at(src);
  const auto& b = objects_.at(dst);
  auto it = out_[src].find(dst);
  if (it == out_[src].end()) return false;
  if (a.shape != b.shape || a.shape.circles != 0 || a.q != b.q) return false;
  F id(0), dotted(0);
  int dotted_terms = 0;
  for (const auto& [mask, k] : it->second) {
    if (mask == 0)
      id = k;
    else if (std::popcount(mask) == 1 && dotted_terms++ == 0)
      dotted = k;
    else
      return false;
  }
  return !is_zero(id * id - F(spec().t) * dotted * dotted);
}

template <class F>
void TangleComplex<F>::eliminate(int x, int y) {
  if (!invertible(x, y)) throw AlgebraError("entry is not invertible");
  // (a + b X_c)^-1 = (a - b X_c) / (a^2 - t b^2)
  const auto& phi = out_[x].at(y);
  F a(0), b(0);
  Mask dot = 0;
  for (const auto& [mask, k] : phi) {
    if (mask == 0) a = k;
    else { b = k; dot = mask; }
  }
  const F det = a * a - F(spec().t) * b * b;
  const bool scalar = is_zero(b);
  Morphism<F> inverse_map;
  inverse_map[0] = a / det;
  if (!scalar) inverse_map[dot] = -b / det;

  const Shape sx = objects_[x].shape;
  std::vector<int> sources, targets;
  for (int z : in_[y])
    if (z != x) sources.push_back(z);
  for (const auto& [w, m] : out_[x])
    if (w != y) targets.push_back(w);
  for (int z : sources) {
    const Shape sz = objects_[z].shape;
    Morphism<F> into;
    if (scalar) {
      into = out_[z].at(y);
    } else {
      category_->compose_plan(sz, sx, sx).apply(out_[z].at(y), inverse_map, F(1), into);
    }
    const F scale = scalar ? F(-1) / a : F(-1);
    for (int w : targets) {
      Morphism<F> update;
      category_->compose_plan(sz, sx, objects_[w].shape).apply(into, out_[x].at(w), scale, update);
      accumulate(z, w, update);
    }
  }
  kill(x);
  kill(y);
}

template <class F>
std::size_t TangleComplex<F>::eliminate_all() {
  std::deque<int> work;
  std::vector<bool> queued(objects_.size(), false);
  for (std::size_t i = 0; i < objects_.size(); ++i)
    if (objects_[i].alive) {
      work.push_back(static_cast<int>(i));
      queued[i] = true;
    }
  std::size_t count = 0;
  while (!work.empty()) {
    int x = work.front();
    work.pop_front();
    queued[x] = false;
    if (!objects_[x].alive) continue;
    int best = -1;
    std::size_t best_fill = 0;
    for (const auto& [y, m] : out_[x]) {
      if (!is_scalar_identity(x, y)) continue;
      std::size_t fill = (in_[y].size() - 1) * (out_[x].size() - 1);
      if (best < 0 || fill < best_fill) {
        best = y;
        best_fill = fill;
      }
    }
    if (best < 0) continue;
    std::vector<int> touched(in_[best].begin(), in_[best].end());
    eliminate(x, best);
    ++count;
    for (int z : touched)
      if (objects_[z].alive && !queued[z]) {
        work.push_back(z);
        queued[z] = true;
      }
  }
  return count;
}

template <class F>
bool TangleComplex<F>::d_squared_zero() {
  for (std::size_t x = 0; x < objects_.size(); ++x) {
    if (!objects_[x].alive) continue;
    std::map<int, Morphism<F>> acc;
    for (const auto& [y, f] : out_[x])
      for (const auto& [w, g] : out_[y])
        category_->compose_plan(objects_[x].shape, objects_[y].shape, objects_[w].shape)
            .apply(f, g, F(1), acc[w]);
    for (const auto& [w, m] : acc)
      if (!m.empty()) return false;
  }
  return true;
}

template <class F>
void TangleComplex<F>::check_degrees() const {
  const int t = spec().t;
  for (std::size_t x = 0; x < objects_.size(); ++x) {
    for (const auto& [y, m] : out_[x]) {
      for (const auto& [mask, k] : m) {
        int deg = category_->degree(objects_[x].shape, objects_[x].q, objects_[y].shape,
                                    objects_[y].q, mask);
        bool ok = t == 0 ? deg == 0 : (deg >= 0 && deg % 4 == 0);
        if (!ok)
          throw AlgebraError("entry " + std::to_string(x) + "->" + std::to_string(y) +
                             " has quantum degree " + std::to_string(deg));
      }
    }
  }
}

template <class F>
void TangleComplex<F>::add_crossing(const Crossing& x) {
  const int n = static_cast<int>(frontier_.size());
  std::map<int, int> old_pos;
  for (int p = 0; p < n; ++p) old_pos[frontier_[p]] = p;

  std::array<int, 4> closes_old{-1, -1, -1, -1}, kink{-1, -1, -1, -1}, new_pos{-1, -1, -1, -1};
  std::vector<int> old_closed_by(n, -1);
  for (int j = 0; j < 4; ++j) {
    auto it = old_pos.find(x.arcs[j]);
    if (it != old_pos.end()) {
      if (old_closed_by[it->second] >= 0) throw InvalidInput("arc label used three times");
      closes_old[j] = it->second;
      old_closed_by[it->second] = j;
    }
    for (int k = 0; k < 4; ++k)
      if (k != j && x.arcs[k] == x.arcs[j]) kink[j] = k;
    if (closes_old[j] >= 0 && kink[j] >= 0) throw InvalidInput("arc label used three times");
  }
  std::vector<int> frontier;
  std::vector<int> kept_pos(n, -1);
  std::vector<int> origin;  // new position -> node (old position, or n + slot)
  for (int p = 0; p < n; ++p)
    if (old_closed_by[p] < 0) {
      kept_pos[p] = static_cast<int>(frontier.size());
      frontier.push_back(frontier_[p]);
      origin.push_back(p);
    }
  for (int j = 0; j < 4; ++j)
    if (closes_old[j] < 0 && kink[j] < 0) {
      new_pos[j] = static_cast<int>(frontier.size());
      frontier.push_back(x.arcs[j]);
      origin.push_back(n + j);
    }
  auto next_category =
      std::make_unique<CobordismCategory>(static_cast<int>(frontier.size()), spec());
  CobordismCategory& fresh_cat = *next_category;

  auto boundary = [&](int node) { return node < n ? kept_pos[node] : new_pos[node - n]; };
  auto ident = [&](int node) {
    if (node < n) return old_closed_by[node] >= 0 ? n + old_closed_by[node] : -1;
    int j = node - n;
    if (closes_old[j] >= 0) return closes_old[j];
    return kink[j] >= 0 ? n + kink[j] : -1;
  };

  struct Traced {
    Shape shape;
    std::vector<int> circle_rep;  // node whose outgoing arc lies on the circle
  };
  std::map<std::pair<int, int>, Traced> traced;
  auto trace = [&](int matching, int s) -> const Traced& {
    auto key = std::make_pair(matching, s);
    auto it = traced.find(key);
    if (it != traced.end()) return it->second;
    const Pairing& old = category_->pairing(matching);
    auto arc = [&](int node) { return node < n ? old[node] : n + kSmoothPartner[s][node - n]; };
    std::vector<bool> seen(n + 4, false);
    Pairing fresh(frontier.size(), -1);
    for (int node = 0; node < n + 4; ++node) {
      if (seen[node] || boundary(node) < 0) continue;
      int cur = node;
      for (;;) {
        seen[cur] = true;
        int nxt = arc(cur);
        seen[nxt] = true;
        if (boundary(nxt) >= 0) {
          fresh[boundary(node)] = boundary(nxt);
          fresh[boundary(nxt)] = boundary(node);
          break;
        }
        cur = ident(nxt);
      }
    }
    Traced t;
    for (int node = 0; node < n + 4; ++node) {
      if (seen[node]) continue;
      t.circle_rep.push_back(node);
      int cur = node;
      do {
        seen[cur] = true;
        int nxt = arc(cur);
        seen[nxt] = true;
        cur = ident(nxt);
      } while (cur != node);
    }
    t.shape = {fresh_cat.intern(fresh), static_cast<int>(t.circle_rep.size())};
    return traced.emplace(key, std::move(t)).first->second;
  };

  std::map<std::tuple<int, int, int, int>, std::unique_ptr<GluingPlan>> plans;
  auto plan = [&](int mx, int s1, int my, int s2) -> const GluingPlan& {
    auto key = std::make_tuple(mx, s1, my, s2);
    auto it = plans.find(key);
    if (it != plans.end()) return *it->second;
    const Traced& tx = trace(mx, s1);
    const Traced& ty = trace(my, s2);
    const bool saddle = s1 != s2;
    auto piece = [&](int slot) { return saddle ? 0 : kSmoothArc[s1][slot]; };
    GluingPlan::Input in;
    int old_cycles = 0;
    auto cyc = point_cycles(category_->pairing(mx), category_->pairing(my), &old_cycles);
    in.pieces_a = old_cycles;
    in.pieces_b = saddle ? 1 : 2;
    auto owner = [&](int node) { return node < n ? cyc[node] : old_cycles + piece(node - n); };
    for (int p = 0; p < n; ++p)
      if (old_closed_by[p] >= 0) in.arc_glues.emplace_back(cyc[p], owner(n + old_closed_by[p]));
    for (int j = 0; j < 4; ++j)
      if (kink[j] > j) in.arc_glues.emplace_back(owner(n + j), owner(n + kink[j]));
    int fresh_cycles = 0;
    auto fc = point_cycles(fresh_cat.pairing(tx.shape.matching),
                           fresh_cat.pairing(ty.shape.matching), &fresh_cycles);
    in.result_owner.assign(fresh_cycles, -1);
    for (int p = static_cast<int>(frontier.size()) - 1; p >= 0; --p)
      in.result_owner[fc[p]] = owner(origin[p]);
    for (int node : tx.circle_rep) in.result_owner.push_back(owner(node));
    for (int node : ty.circle_rep) in.result_owner.push_back(owner(node));
    auto made = std::make_unique<GluingPlan>(in, spec());
    return *plans.emplace(key, std::move(made)).first->second;
  };

  TangleComplex next(spec(), frontier);
  next.category_ = std::move(next_category);
  std::vector<std::array<int, 2>> image(objects_.size(), {-1, -1});
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const Object& o = objects_[i];
    if (!o.alive) continue;
    if (o.shape.circles != 0) throw InvalidInput("objects must be delooped before tensoring");
    for (int s = 0; s < 2; ++s)
      image[i][s] = next.add_object(trace(o.shape.matching, s).shape, o.q + s, o.h + s);
  }
  const Morphism<F> unit{{0, F(1)}};
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const Object& o = objects_[i];
    if (!o.alive) continue;
    for (const auto& [j, m] : out_[i]) {
      for (int s = 0; s < 2; ++s) {
        Morphism<F> entry;
        plan(o.shape.matching, s, objects_[j].shape.matching, s).apply(m, unit, F(1), entry);
        next.accumulate(image[i][s], image[j][s], entry);
      }
    }
    Morphism<F> saddle;
    const F sign = o.h % 2 == 0 ? F(1) : F(-1);
    plan(o.shape.matching, 0, o.shape.matching, 1).apply(unit, unit, sign, saddle);
    next.accumulate(image[i][0], image[i][1], saddle);
  }
  *this = std::move(next);
}

template class TangleComplex<F2>;
template class TangleComplex<Rational>;

}  // namespace khl
