#include "khl/hfk11.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <sstream>

#include "khl/error.hpp"

namespace khl {

namespace {

Rational floor_q(const Rational& v) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return Rational(f);
}

long floor_ll(const Rational& v) { return floor_q(v).get_num().get_si(); }
long ceil_ll(const Rational& v) { return -floor_ll(-v); }
bool is_integer(const Rational& v) { return v.get_den() == 1; }

std::string show(const Rational& v) {
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string show(const Point& p) { return "(" + show(p.x) + ", " + show(p.y) + ")"; }

Rational cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int sgn(const Rational& v) { return mpq_sgn(v.get_mpq_t()); }

bool on_segment(const Point& p, const Point& a, const Point& b) {
  if (sgn(cross(a, b, p)) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_meet(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int d1 = sgn(cross(c, d, a)), d2 = sgn(cross(c, d, b));
  const int d3 = sgn(cross(a, b, c)), d4 = sgn(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  return on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b);
}

// The lift of beta as an infinite polyline.
class Lift {
 public:
  explicit Lift(const OneOneDiagram& d) : d_(d), m_(static_cast<long>(d.beta.size())) {
    if (m_ == 0) throw InvalidInput("beta has no vertices");
  }

  long size() const { return m_; }

  Point vertex(long g) const {
    long j = g >= 0 ? g / m_ : -((-g + m_ - 1) / m_);
    const Point& v = d_.beta[static_cast<std::size_t>(g - j * m_)];
    return {v.x + Rational(j * d_.period), v.y + Rational(j)};
  }

  std::pair<Point, Point> segment(long g) const { return {vertex(g), vertex(g + 1)}; }

  /// Intersections of segment g with integer lines, in travel order.
  std::vector<Intersection> crossings(long g) const {
    auto [a, b] = segment(g);
    std::vector<Intersection> out;
    if (a.y == b.y) return out;
    const bool up = b.y > a.y;
    long lo = floor_ll(std::min(a.y, b.y)) + 1, hi = ceil_ll(std::max(a.y, b.y)) - 1;
    for (long k = lo; k <= hi; ++k) {
      Rational y(k);
      Point p{a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y), y};
      out.push_back({g, static_cast<int>(k), p});
    }
    if (!up) std::reverse(out.begin(), out.end());
    return out;
  }

  Rational min_y() const {
    Rational m = d_.beta[0].y;
    for (const auto& v : d_.beta) m = std::min(m, v.y);
    return m;
  }

 private:
  const OneOneDiagram& d_;
  long m_;
};

// Index of an intersection on period 0 that is a translate of `x`.
struct GeneratorIndex {
  std::map<std::pair<long, int>, int> by_segment_slot;  // (segment mod m, order in segment)
};

}  // namespace

// ---- text format ------------------------------------------------------------

namespace {

Rational parse_rational(const std::string& s, int line) {
  try {
    Rational v(s);
    v.canonicalize();
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("line " + std::to_string(line) + ": bad rational '" + s + "'");
  }
}

}  // namespace

OneOneDiagram parse_diagram(const std::string& text) {
  OneOneDiagram d;
  bool have_period = false, have_z = false, have_w = false;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tok(line);
    std::vector<std::string> t;
    for (std::string s; tok >> s;) t.push_back(s);
    if (t.empty()) continue;
    auto need = [&](std::size_t n) {
      if (t.size() != n)
        throw ParseError("line " + std::to_string(number) + ": expected " + std::to_string(n - 1) +
                         " fields after '" + t[0] + "'");
    };
    if (t[0] == "period") {
      need(3);
      if (t[2] != "1") throw ParseError("line " + std::to_string(number) + ": period must be (p, 1)");
      try {
        d.period = std::stoi(t[1]);
      } catch (const std::logic_error&) {
        throw ParseError("line " + std::to_string(number) + ": bad period");
      }
      have_period = true;
    } else if (t[0] == "v") {
      need(3);
      d.beta.push_back({parse_rational(t[1], number), parse_rational(t[2], number)});
    } else if (t[0] == "z" || t[0] == "w") {
      need(3);
      Point p{parse_rational(t[1], number), parse_rational(t[2], number)};
      (t[0] == "z" ? d.z : d.w) = p;
      (t[0] == "z" ? have_z : have_w) = true;
    } else {
      throw ParseError("line " + std::to_string(number) + ": unknown directive " + t[0]);
    }
  }
  if (!have_period || !have_z || !have_w || d.beta.empty())
    throw ParseError("diagram needs period, z, w and at least one vertex");
  return d;
}

std::string serialize_diagram(const OneOneDiagram& d) {
  std::ostringstream out;
  out << "period " << d.period << " 1\n";
  for (const auto& v : d.beta) out << "v " << show(v.x) << ' ' << show(v.y) << '\n';
  out << "z " << show(d.z.x) << ' ' << show(d.z.y) << '\n';
  out << "w " << show(d.w.x) << ' ' << show(d.w.y) << '\n';
  return out.str();
}

// ---- validation ---------------------------------------------------------------

std::size_t validate_diagram(const OneOneDiagram& d) {
  Lift lift(d);
  const long m = lift.size();
  for (std::size_t i = 0; i < d.beta.size(); ++i)
    if (is_integer(d.beta[i].y))
      throw InvalidInput("vertex " + std::to_string(i) + " " + show(d.beta[i]) +
                         " lies on a lift of alpha");
  for (long g = 0; g < m; ++g) {
    auto [a, b] = lift.segment(g);
    if (a == b) throw InvalidInput("segment " + std::to_string(g) + " is degenerate");
  }

  // Every pair of segments of the full preimage meets only where consecutive.
  for (long r1 = 0; r1 < m; ++r1) {
    auto [a, b] = lift.segment(r1);
    for (long r2 = 0; r2 < m; ++r2) {
      auto [c0, d0] = lift.segment(r2);
      const long j_lo = ceil_ll(std::min(a.y, b.y) - std::max(c0.y, d0.y));
      const long j_hi = floor_ll(std::max(a.y, b.y) - std::min(c0.y, d0.y));
      for (long j = j_lo; j <= j_hi; ++j) {
        const Rational base = Rational(j * d.period);
        const long i_lo = ceil_ll(std::min(a.x, b.x) - std::max(c0.x, d0.x) - base);
        const long i_hi = floor_ll(std::max(a.x, b.x) - std::min(c0.x, d0.x) - base);
        for (long i = i_lo; i <= i_hi; ++i) {
          const Point shift{base + Rational(i), Rational(j)};
          const Point c{c0.x + shift.x, c0.y + shift.y}, e{d0.x + shift.x, d0.y + shift.y};
          const long g2 = i == 0 ? r2 + j * m : 0;  // index on the same lift
          if (i == 0 && g2 == r1) continue;
          if (i == 0 && (g2 == r1 + 1 || g2 == r1 - 1)) {
            // Consecutive segments share one vertex and must not fold back onto each other.
            if (sgn(cross(a, b, c)) == 0 && sgn(cross(a, b, e)) == 0) {
              const Point& shared = g2 == r1 + 1 ? b : a;
              const Point& mine = g2 == r1 + 1 ? a : b;
              const Point& theirs = g2 == r1 + 1 ? e : c;
              Rational dot = (mine.x - shared.x) * (theirs.x - shared.x) +
                             (mine.y - shared.y) * (theirs.y - shared.y);
              if (sgn(dot) > 0)
                throw InvalidInput("segments " + std::to_string(r1) + " and " +
                                   std::to_string(g2) + " fold back at " + show(shared));
            }
            continue;
          }
          if (segments_meet(a, b, c, e))
            throw InvalidInput("beta is not embedded: segment " + std::to_string(r1) +
                               " meets segment " + std::to_string(r2) + " translated by " +
                               show(shift));
        }
      }
    }
  }

  for (const auto& [name, p] : {std::pair{"z", d.z}, std::pair{"w", d.w}}) {
    if (is_integer(p.y)) throw InvalidInput(std::string(name) + " lies on a lift of alpha");
    for (long r = 0; r < m; ++r) {
      auto [a, b] = lift.segment(r);
      const long j_lo = ceil_ll(p.y - std::max(a.y, b.y));
      const long j_hi = floor_ll(p.y - std::min(a.y, b.y));
      for (long j = j_lo; j <= j_hi; ++j) {
        const Rational base = Rational(j * d.period);
        const long i_lo = ceil_ll(p.x - std::max(a.x, b.x) - base);
        const long i_hi = floor_ll(p.x - std::min(a.x, b.x) - base);
        for (long i = i_lo; i <= i_hi; ++i) {
          Point q{p.x - base - Rational(i), p.y - Rational(j)};
          if (on_segment(q, a, b))
            throw InvalidInput(std::string(name) + " " + show(p) + " lies on a lift of beta");
        }
      }
    }
  }
  return generators(d).size();
}

std::vector<Intersection> generators(const OneOneDiagram& d) {
  Lift lift(d);
  std::vector<Intersection> out;
  for (long g = 0; g < lift.size(); ++g)
    for (auto& x : lift.crossings(g)) out.push_back(std::move(x));
  return out;
}

// ---- bigons -----------------------------------------------------------------

namespace {

int count_inside(const std::vector<Point>& poly, const Point& base) {
  Rational min_x = poly[0].x, max_x = poly[0].x, min_y = poly[0].y, max_y = poly[0].y;
  for (const auto& v : poly) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  int count = 0;
  for (long j = ceil_ll(min_y - base.y); j <= floor_ll(max_y - base.y); ++j) {
    for (long i = ceil_ll(min_x - base.x); i <= floor_ll(max_x - base.x); ++i) {
      Point p{base.x + Rational(i), base.y + Rational(j)};
      bool inside = false;
      for (std::size_t k = 0; k < poly.size(); ++k) {
        const Point& a = poly[k];
        const Point& b = poly[(k + 1) % poly.size()];
        if ((a.y > p.y) != (b.y > p.y)) {
          Rational x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
          if (x > p.x) inside = !inside;
        }
      }
      count += inside;
    }
  }
  return count;
}

Rational twice_area(const std::vector<Point>& poly) {
  Rational s = 0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Point& a = poly[k];
    const Point& b = poly[(k + 1) % poly.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return s;
}

}  // namespace

std::vector<BigonRecord> find_bigons(const OneOneDiagram& d) {
  Lift lift(d);
  const long m = lift.size();
  // Generator id of the n-th crossing on segment g, for g in one period.
  std::map<std::pair<long, std::size_t>, int> id;
  {
    int next = 0;
    for (long g = 0; g < m; ++g)
      for (std::size_t k = 0; k < lift.crossings(g).size(); ++k) id[{g, k}] = next++;
  }
  auto id_of = [&](long g, std::size_t k) {
    long r = ((g % m) + m) % m;
    return id.at({r, k});
  };
  const Rational lowest = lift.min_y();

  std::vector<BigonRecord> out;
  for (long g = 0; g < m; ++g) {
    auto start = lift.crossings(g);
    for (std::size_t k = 0; k < start.size(); ++k) {
      const Intersection& p = start[k];
      std::vector<Point> path{p.at};
      std::vector<Rational> on_line;  // earlier returns of the arc to the line
      long h = g;
      std::size_t from = k + 1;
      for (;;) {
        auto here = lift.crossings(h);
        for (std::size_t q = from; q < here.size(); ++q) {
          path.push_back(here[q].at);
          if (here[q].line != p.line) continue;
          const Rational& qx = here[q].at.x;
          const Rational lo = std::min(p.at.x, qx), hi = std::max(p.at.x, qx);
          const bool crosses = std::any_of(on_line.begin(), on_line.end(),
                                           [&](const Rational& x) { return lo < x && x < hi; });
          on_line.push_back(qx);
          if (crosses) continue;
          std::vector<Point> region = path;
          // The polygon closes along the line back to p; both corners must be convex.
          const int orientation = sgn(twice_area(region));
          const std::size_t last = region.size() - 1;
          const int turn_p = sgn(cross(region[last], region[0], region[1]));
          const int turn_q = sgn(cross(region[last - 1], region[last], region[0]));
          if (orientation == 0 || turn_p != orientation || turn_q != orientation) continue;
          BigonRecord b;
          const int first = id_of(g, k), second = id_of(h, q);
          b.source = orientation > 0 ? first : second;
          b.target = orientation > 0 ? second : first;
          b.nw = count_inside(region, d.w);
          b.nz = count_inside(region, d.z);
          b.region = std::move(region);
          out.push_back(std::move(b));
        }
        // Beyond this period the lift stays strictly above the line.
        const long next_period = (h + 1) >= 0 ? (h + 1) / m : -1;
        if (lowest + Rational(next_period) > Rational(p.line)) break;
        path.push_back(lift.vertex(h + 1));
        ++h;
        from = 0;
      }
    }
  }
  return out;
}

Gradings gradings(std::size_t n, const std::vector<BigonRecord>& bigons) {
  if (n == 0) throw InvalidInput("diagram has no generators");
  std::vector<std::vector<std::pair<int, const BigonRecord*>>> adj(n);
  for (const auto& b : bigons) {
    adj[b.source].emplace_back(b.target, &b);
    adj[b.target].emplace_back(b.source, &b);
  }
  std::vector<std::optional<std::pair<int, int>>> rel(n);  // (A, M) relative to generator 0
  rel[0] = {0, 0};
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (auto [y, b] : adj[x]) {
      // A(src) - A(tgt) = nz - nw, M(src) - M(tgt) = 1 - 2 nw
      const int da = b->nz - b->nw, dm = 1 - 2 * b->nw;
      const int sign = b->source == x ? -1 : 1;
      std::pair<int, int> want{rel[x]->first + sign * da, rel[x]->second + sign * dm};
      if (!rel[y]) {
        rel[y] = want;
        queue.push_back(y);
      } else if (*rel[y] != want) {
        throw InvalidInput("bigon gradings are inconsistent around a cycle");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!rel[i])
      throw InvalidInput("bigon graph is disconnected: generator " + std::to_string(i) +
                         " is unreachable from generator 0");

  CfkComplex c;
  for (std::size_t i = 0; i < n; ++i)
    c.generators.push_back({"x" + std::to_string(i), rel[i]->first, rel[i]->second});
  for (const auto& b : bigons) c.arrows.push_back({b.source, b.target, b.nw, b.nz});
  if (!c.d_squared_zero()) throw AlgebraError("bigon differential does not square to zero");

  const auto groups = hfk_hat_groups(c);
  const int top = groups.max_filtration(), bottom = groups.min_filtration();
  if ((top + bottom) % 2 != 0) throw AlgebraError("HFK support cannot be made symmetric");
  const int a_shift = -(top + bottom) / 2;
  auto survivor = filtered_reduce(c.hat_complex());
  if (survivor.survivors.size() != 1)
    throw AlgebraError("hat homology has rank " + std::to_string(survivor.survivors.size()));
  const int m_shift = -survivor.survivors.front().degree;

  Gradings g;
  for (std::size_t i = 0; i < n; ++i) {
    g.alexander.push_back(rel[i]->first + a_shift);
    g.maslov.push_back(rel[i]->second + m_shift);
  }
  return g;
}

CfkComplex build_cfk(const OneOneDiagram& d) {
  const std::size_t n = validate_diagram(d);
  auto bigons = find_bigons(d);
  auto g = gradings(n, bigons);
  CfkComplex c;
  for (std::size_t i = 0; i < n; ++i)
    c.generators.push_back({"x" + std::to_string(i + 1), g.alexander[i], g.maslov[i]});
  for (const auto& b : bigons) c.arrows.push_back({b.source, b.target, b.nw, b.nz});
  if (!hfk_symmetric(hfk_hat_groups(c))) throw AlgebraError("HFK ranks are not symmetric");
  return c;
}

// ---- transformations ------------------------------------------------------------

OneOneDiagram translated(const OneOneDiagram& d, const Point& by) {
  OneOneDiagram out = d;
  for (auto& v : out.beta) v = {v.x + by.x, v.y + by.y};
  out.z = {d.z.x + by.x, d.z.y + by.y};
  out.w = {d.w.x + by.x, d.w.y + by.y};
  return out;
}

OneOneDiagram restarted(const OneOneDiagram& d, std::size_t k) {
  Lift lift(d);
  OneOneDiagram out = d;
  out.beta.clear();
  for (long g = 0; g < lift.size(); ++g) out.beta.push_back(lift.vertex(g + static_cast<long>(k)));
  return out;
}

OneOneDiagram refined(const OneOneDiagram& d) {
  Lift lift(d);
  OneOneDiagram out = d;
  out.beta.clear();
  for (long g = 0; g < lift.size(); ++g) {
    auto [a, b] = lift.segment(g);
    out.beta.push_back(a);
    // Vertices may not sit on alpha: slide off integer heights along the segment.
    for (long den = 2;; ++den) {
      const Rational t(1, den);
      const Point mid{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
      if (mid.y.get_den() != 1) {
        out.beta.push_back(mid);
        break;
      }
    }
  }
  return out;
}

OneOneDiagram reflected(const OneOneDiagram& d) {
  OneOneDiagram out = d;
  out.period = -d.period;
  for (auto& v : out.beta) v.x = -v.x;
  out.z.x = -d.z.x;
  out.w.x = -d.w.x;
  return out;
}

// ---- rainbow builder ----------------------------------------------------------------

OneOneDiagram rainbow_diagram(int points, int arcs, int w_start, int z_start, int shift) {
  const int n = points;
  if (n <= 0 || arcs < 0 || 2 * arcs >= n)
    throw InvalidInput("rainbow needs 0 <= 2*arcs < points");
  const int strands = n - 2 * arcs;
  auto mod = [](long a, long b) { return ((a % b) + b) % b; };
  auto fdiv = [&](long a, long b) { return (a - mod(a, b)) / b; };
  // Cover index J sits at x = (J mod n + 1)/(n + 1) + floor(J / n).
  auto x_of = [&](long J) -> Rational { return Rational(mod(J, n) + 1) / (n + 1) + Rational(fdiv(J, n)); };
  const Rational eps(1, 20), low(9, 20), high(11, 20);
  auto height = [&](int i) -> Rational { return Rational(1) / 10 + Rational(3 * (arcs - i)) / (10 * arcs); };

  // Through strand ends, as increasing cover indices extended periodically.
  auto ext = [&](int start, long q) {
    long k = mod(q, strands);
    return start + 2 * arcs + k + n * fdiv(q, strands);
  };
  auto ext_index = [&](int start, long J) {  // inverse of ext
    long rel = J - start - 2 * arcs;
    long t = fdiv(rel, n);
    long k = rel - t * n;
    return k + t * strands;
  };
  auto in_block = [&](int start, long J) { return mod(J - start, n) < 2 * arcs; };
  auto partner = [&](int start, long J, int* level) {
    long j0 = mod(J - start, n);
    *level = static_cast<int>(std::min(j0, 2 * arcs - 1 - j0));
    return J - j0 + (2 * arcs - 1 - j0);
  };

  std::vector<Point> path;
  auto emit = [&](const Rational& x, const Rational& y) { path.push_back({x, y}); };
  const long start_J = ext(w_start, 0);
  long J = start_J;
  long line = 0;
  bool upward = true;  // entering the strip above `line` at bottom end J
  std::vector<int> visits(n, 0);
  do {
    ++visits[mod(J, n)];
    if (visits[mod(J, n)] > 1) throw InvalidInput("rainbow curve does not close through every point");
    const Rational L(line);
    if (upward) {
      if (in_block(w_start, J)) {
        int lvl;
        long K = partner(w_start, J, &lvl);
        emit(x_of(J), L + eps);
        emit(x_of(J), L + height(lvl));
        emit(x_of(K), L + height(lvl));
        emit(x_of(K), L + eps);
        J = K;
        upward = false;
      } else {
        long K = ext(z_start, ext_index(w_start, J) + shift);
        emit(x_of(J), L + eps);
        emit(x_of(J), L + low);
        emit(x_of(K), L + high);
        emit(x_of(K), L + 1 - eps);
        J = K;
        ++line;
      }
    } else {
      if (in_block(z_start, J)) {
        int lvl;
        long K = partner(z_start, J, &lvl);
        emit(x_of(J), L - eps);
        emit(x_of(J), L - height(lvl));
        emit(x_of(K), L - height(lvl));
        emit(x_of(K), L - eps);
        J = K;
        upward = true;
      } else {
        long K = ext(w_start, ext_index(z_start, J) - shift);
        emit(x_of(J), L - eps);
        emit(x_of(J), L - 1 + high);
        emit(x_of(K), L - 1 + low);
        emit(x_of(K), L - 1 + eps);
        J = K;
        --line;
      }
    }
  } while (!(upward && mod(J, n) == mod(start_J, n)));
  if (std::count(visits.begin(), visits.end(), 1) != n)
    throw InvalidInput("rainbow curve has several components");
  const long dx = fdiv(J - start_J, n);
  if (line != 1 && line != -1)
    throw InvalidInput("rainbow curve meets alpha algebraically " + std::to_string(line) + " times");

  OneOneDiagram d;
  if (line == 1) {
    d.beta = std::move(path);
    d.period = static_cast<int>(dx);
  } else {
    // Reverse the traversal so that the period climbs by one.
    d.beta.push_back({path.front().x + Rational(dx), path.front().y - 1});
    for (std::size_t i = path.size() - 1; i >= 1; --i) d.beta.push_back(path[i]);
    d.period = static_cast<int>(-dx);
  }
  if (arcs > 0) {
    const long wa = w_start + arcs - 1, za = z_start + arcs - 1;
    d.w = {(x_of(wa) + x_of(wa + 1)) / 2, height(arcs - 1) / 2};
    d.z = {(x_of(za) + x_of(za + 1)) / 2, 1 - height(arcs - 1) / 2};
  } else {
    d.w = {Rational(1) / (2 * (n + 1)), Rational(1) / 5};
    d.z = {Rational(1) / (2 * (n + 1)), Rational(4) / 5};
  }
  return d;
}

OneOneDiagram torus_knot_diagram(int n) {
  if (n < 0) throw InvalidInput("torus_knot_diagram needs n >= 0");
  // One arc around each basepoint and 2n - 1 through strands.
  if (n == 0) return rainbow_diagram(1, 0, 0, 0, 0);
  return rainbow_diagram(2 * n + 1, 1, 0, 2 * n - 1, 0);
}

OneOneDiagram figure_eight_diagram() { return rainbow_diagram(5, 2, 0, 1, 0); }

}  // namespace khl
