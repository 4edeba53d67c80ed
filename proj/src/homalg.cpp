#include "khl/homalg.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <tuple>

#include "khl/error.hpp"

namespace khl {

// ---- FilteredComplex --------------------------------------------------------

template <class F>
int FilteredComplex<F>::add_generator(GradedGenerator g) {
  gens_.push_back(g);
  cols_.emplace_back();
  rows_.emplace_back();
  return static_cast<int>(gens_.size()) - 1;
}

template <class F>
void FilteredComplex<F>::add_term(int src, int dst, const F& coef) {
  const auto& s = gens_.at(src);
  const auto& t = gens_.at(dst);
  if (t.degree != s.degree + degree_step())
    throw AlgebraError("differential entry " + std::to_string(src) + "->" + std::to_string(dst) +
                       " has the wrong homological step");
  bool ok = sense_ == FiltrationSense::NonIncreasing ? t.filtration <= s.filtration
                                                     : t.filtration >= s.filtration;
  if (!ok)
    throw AlgebraError("differential entry " + std::to_string(src) + "->" + std::to_string(dst) +
                       " violates the filtration");
  if (is_zero(coef)) return;
  auto& col = cols_[src];
  auto it = col.find(dst);
  if (it == col.end()) {
    col.emplace(dst, coef);
    rows_[dst].insert(src);
    return;
  }
  it->second += coef;
  if (is_zero(it->second)) {
    col.erase(it);
    rows_[dst].erase(src);
  }
}

template <class F>
std::size_t FilteredComplex<F>::entry_count() const {
  std::size_t n = 0;
  for (const auto& c : cols_) n += c.size();
  return n;
}

template <class F>
bool FilteredComplex<F>::d_squared_zero() const {
  for (std::size_t x = 0; x < cols_.size(); ++x) {
    std::map<int, F> acc;
    for (const auto& [y, a] : cols_[x])
      for (const auto& [z, b] : cols_[y]) acc[z] += a * b;
    for (const auto& [z, v] : acc)
      if (!is_zero(v)) return false;
  }
  return true;
}

template <class F>
FilteredComplex<F> FilteredComplex<F>::with_negated_filtration() const {
  FilteredComplex out(flavor_, sense_ == FiltrationSense::NonIncreasing
                                   ? FiltrationSense::NonDecreasing
                                   : FiltrationSense::NonIncreasing);
  for (auto g : gens_) {
    g.filtration = -g.filtration;
    out.add_generator(g);
  }
  out.cols_ = cols_;
  out.rows_ = rows_;
  return out;
}

template class FilteredComplex<F2>;
template class FilteredComplex<Rational>;

// ---- BigradedGroups ---------------------------------------------------------

void BigradedGroups::add(int a, int m, long long r) {
  if (r == 0) return;
  auto& slot = ranks[{a, m}];
  slot += r;
  if (slot < 0) throw AlgebraError("negative rank");
  if (slot == 0) ranks.erase({a, m});
}

long long BigradedGroups::rank(int a, int m) const {
  auto it = ranks.find({a, m});
  return it == ranks.end() ? 0 : it->second;
}

long long BigradedGroups::total() const {
  long long t = 0;
  for (const auto& [k, r] : ranks) t += r;
  return t;
}

long long BigradedGroups::rank_at_filtration(int a) const {
  long long t = 0;
  for (const auto& [k, r] : ranks)
    if (k.first == a) t += r;
  return t;
}

int BigradedGroups::max_filtration() const {
  if (ranks.empty()) throw InvalidInput("empty graded group");
  return ranks.rbegin()->first.first;
}

int BigradedGroups::min_filtration() const {
  if (ranks.empty()) throw InvalidInput("empty graded group");
  return ranks.begin()->first.first;
}

// ---- sparse rank ------------------------------------------------------------

// Markowitz cost is compared only among this many shortest rows.
constexpr std::size_t kMarkowitzWindow = 32;

template <class F>
std::size_t sparse_rank(std::vector<std::map<int, F>> rows, PivotOrder order) {
  std::map<int, std::set<int>> cols;
  std::set<std::pair<std::size_t, int>> by_length;  // (row length, row) of pending rows
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [c, v] : rows[r]) cols[c].insert(static_cast<int>(r));
    if (!rows[r].empty()) by_length.emplace(rows[r].size(), static_cast<int>(r));
  }
  std::size_t rank = 0;
  while (!by_length.empty()) {
    int pr = -1, pc = -1;
    if (order == PivotOrder::Natural) {
      pr = std::min_element(by_length.begin(), by_length.end(),
                            [](const auto& a, const auto& b) { return a.second < b.second; })
               ->second;
      pc = rows[pr].begin()->first;
    } else {
      std::size_t best = std::numeric_limits<std::size_t>::max(), seen = 0;
      for (auto it = by_length.begin(); it != by_length.end() && best > 0 && seen < kMarkowitzWindow;
           ++it, ++seen) {
        const int r = it->second;
        for (const auto& [c, v] : rows[r]) {
          std::size_t cost = (rows[r].size() - 1) * (cols[c].size() - 1);
          if (cost < best) {
            best = cost;
            pr = r;
            pc = c;
            if (best == 0) break;
          }
        }
      }
    }
    ++rank;
    by_length.erase({rows[pr].size(), pr});
    const F inv = inverse(rows[pr].at(pc));
    std::vector<int> targets(cols[pc].begin(), cols[pc].end());
    for (int r : targets) {
      if (r == pr) continue;
      by_length.erase({rows[r].size(), r});
      F factor = rows[r].at(pc) * inv;
      for (const auto& [c, v] : rows[pr]) {
        auto it = rows[r].find(c);
        F updated = (it == rows[r].end() ? F(0) : it->second) - factor * v;
        if (is_zero(updated)) {
          if (it != rows[r].end()) rows[r].erase(it);
          cols[c].erase(r);
        } else if (it == rows[r].end()) {
          rows[r].emplace(c, updated);
          cols[c].insert(r);
        } else {
          it->second = updated;
        }
      }
      if (!rows[r].empty()) by_length.emplace(rows[r].size(), r);
    }
    for (const auto& [c, v] : rows[pr]) cols[c].erase(pr);
    rows[pr].clear();
  }
  return rank;
}

template std::size_t sparse_rank(std::vector<std::map<int, F2>>, PivotOrder);
template std::size_t sparse_rank(std::vector<std::map<int, Rational>>, PivotOrder);

template <class F>
BigradedGroups homology_ranks(const FilteredComplex<F>& c, PivotOrder order) {
  if (!c.d_squared_zero()) throw AlgebraError("d^2 != 0");
  using Key = std::pair<int, int>;  // (filtration, degree)
  std::map<Key, std::vector<int>> blocks;
  std::vector<int> position(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& g = c.generator(static_cast<int>(i));
    auto& b = blocks[{g.filtration, g.degree}];
    position[i] = static_cast<int>(b.size());
    b.push_back(static_cast<int>(i));
  }
  // rank of d leaving each block
  std::map<Key, std::size_t> out_rank;
  for (const auto& [key, members] : blocks) {
    std::vector<std::map<int, F>> rows;
    for (int x : members) {
      std::map<int, F> row;
      for (const auto& [y, v] : c.column(x)) {
        if (c.generator(y).filtration != key.first)
          throw AlgebraError("differential is not homogeneous in the filtration");
        row.emplace(position[y], v);
      }
      if (!row.empty()) rows.push_back(std::move(row));
    }
    out_rank[key] = sparse_rank(std::move(rows), order);
  }
  BigradedGroups g;
  for (const auto& [key, members] : blocks) {
    Key before{key.first, key.second - c.degree_step()};
    auto it = out_rank.find(before);
    long long incoming = it == out_rank.end() ? 0 : static_cast<long long>(it->second);
    long long r = static_cast<long long>(members.size()) -
                  static_cast<long long>(out_rank[key]) - incoming;
    g.add(key.first, key.second, r);
  }
  return g;
}

template BigradedGroups homology_ranks(const FilteredComplex<F2>&, PivotOrder);
template BigradedGroups homology_ranks(const FilteredComplex<Rational>&, PivotOrder);

// ---- filtered reduction -----------------------------------------------------

namespace {

// Fill-in is compared only among this many lexicographically first minimal-drop entries.
constexpr std::size_t kFillWindow = 32;

template <class F>
class ReductionWorkspace {
 public:
  explicit ReductionWorkspace(const FilteredComplex<F>& c) : gens_(c.generators()) {
    cols_.resize(c.size());
    rows_.resize(c.size());
    for (std::size_t x = 0; x < c.size(); ++x)
      for (const auto& [y, v] : c.column(static_cast<int>(x))) insert(static_cast<int>(x), y, v);
    alive_.assign(c.size(), true);
  }

  bool empty() const { return by_drop_.empty(); }

  std::pair<int, int> choose(std::mt19937_64* rng) const {
    const auto& [drop, entries] = *by_drop_.begin();
    if (rng) {
      std::uniform_int_distribution<std::size_t> pick(0, entries.size() - 1);
      return *std::next(entries.begin(), static_cast<long>(pick(*rng)));
    }
    std::pair<int, int> best = *entries.begin();
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    std::size_t seen = 0;
    for (const auto& e : entries) {
      std::size_t fill = (cols_[e.first].size() - 1) * (rows_[e.second].size() - 1);
      if (fill < best_fill) {
        best_fill = fill;
        best = e;
        if (fill == 0) break;
      }
      if (++seen == kFillWindow) break;
    }
    return best;
  }

  int min_drop() const { return by_drop_.begin()->first; }

  void cancel(int x, int y) {
    const F inv = inverse(cols_[x].at(y));
    std::vector<std::pair<int, F>> sources;  // z -> y, z != x
    for (int z : rows_[y])
      if (z != x) sources.emplace_back(z, cols_[z].at(y));
    std::vector<std::pair<int, F>> targets;  // x -> w, w != y
    for (const auto& [w, v] : cols_[x])
      if (w != y) targets.emplace_back(w, v);
    for (const auto& [z, zy] : sources) {
      F scale = zy * inv;
      for (const auto& [w, xw] : targets) {
        if (gens_[w].filtration > gens_[z].filtration)
          throw AlgebraError("cancellation produced a filtration-increasing entry");
        accumulate(z, w, -(scale * xw));
      }
    }
    isolate(x);
    isolate(y);
    alive_[x] = alive_[y] = false;
  }

  std::vector<GradedGenerator> survivors() const {
    std::vector<GradedGenerator> out;
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (alive_[i]) out.push_back(gens_[i]);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int drop(int x, int y) const { return gens_[x].filtration - gens_[y].filtration; }

  void insert(int x, int y, const F& v) {
    cols_[x].emplace(y, v);
    rows_[y].insert(x);
    by_drop_[drop(x, y)].insert({x, y});
  }

  void erase(int x, int y) {
    cols_[x].erase(y);
    rows_[y].erase(x);
    auto it = by_drop_.find(drop(x, y));
    it->second.erase({x, y});
    if (it->second.empty()) by_drop_.erase(it);
  }

  void accumulate(int x, int y, const F& v) {
    auto it = cols_[x].find(y);
    if (it == cols_[x].end()) {
      insert(x, y, v);
      return;
    }
    it->second += v;
    if (is_zero(it->second)) erase(x, y);
  }

  void isolate(int v) {
    std::vector<int> outs;
    for (const auto& [w, c] : cols_[v]) outs.push_back(w);
    for (int w : outs) erase(v, w);
    std::vector<int> ins(rows_[v].begin(), rows_[v].end());
    for (int z : ins) erase(z, v);
  }

  std::vector<GradedGenerator> gens_;
  std::vector<std::map<int, F>> cols_;
  std::vector<std::set<int>> rows_;
  std::vector<bool> alive_;
  std::map<int, std::set<std::pair<int, int>>> by_drop_;
};

}  // namespace

template <class F>
Reduction filtered_reduce(FilteredComplex<F> c, std::mt19937_64* rng) {
  if (c.sense() != FiltrationSense::NonIncreasing)
    throw AlgebraError("filtered_reduce expects d to never increase the filtration");
  ReductionWorkspace<F> work(c);
  Reduction result;
  while (!work.empty()) {
    int d = work.min_drop();
    if (!result.drops.empty() && d < result.drops.back())
      throw AlgebraError("minimal filtration drop decreased during reduction");
    auto [x, y] = work.choose(rng);
    work.cancel(x, y);
    result.drops.push_back(d);
  }
  result.survivors = work.survivors();
  return result;
}

template Reduction filtered_reduce(FilteredComplex<F2>, std::mt19937_64*);
template Reduction filtered_reduce(FilteredComplex<Rational>, std::mt19937_64*);

// ---- CFK --------------------------------------------------------------------

int CfkComplex::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == name) return static_cast<int>(i);
  return -1;
}

namespace {

FilteredComplex<F2> cfk_filtered(const CfkComplex& c, bool graded_only) {
  FilteredComplex<F2> out(Flavor::Homological);
  for (const auto& g : c.generators) out.add_generator({g.maslov, g.alexander, 0});
  for (const auto& a : c.arrows) {
    if (a.nw != 0 || (graded_only && a.nz != 0)) continue;
    out.add_term(a.src, a.dst, F2(1));
  }
  return out;
}

}  // namespace

FilteredComplex<F2> CfkComplex::hat_complex() const { return cfk_filtered(*this, false); }
FilteredComplex<F2> CfkComplex::graded_complex() const { return cfk_filtered(*this, true); }

bool CfkComplex::d_squared_zero() const {
  std::vector<std::vector<const CfkArrow*>> out(generators.size());
  for (const auto& a : arrows) out[a.src].push_back(&a);
  std::map<std::tuple<int, int, int, int>, int> parity;
  for (const auto& first : arrows)
    for (const CfkArrow* second : out[first.dst])
      parity[{first.src, second->dst, first.nw + second->nw, first.nz + second->nz}] ^= 1;
  for (const auto& [k, p] : parity)
    if (p) return false;
  return true;
}

std::vector<std::string> CfkComplex::grading_violations() const {
  std::vector<std::string> v;
  for (const auto& a : arrows) {
    const auto& s = generators[a.src];
    const auto& t = generators[a.dst];
    if (s.maslov - t.maslov != 1 - 2 * a.nw)
      v.push_back("Maslov rule fails on " + s.name + " -> " + t.name);
    if (s.alexander - t.alexander != a.nz - a.nw)
      v.push_back("Alexander rule fails on " + s.name + " -> " + t.name);
  }
  return v;
}

namespace {

// Reads `key=<int>` from a token.
int keyed_int(const std::string& token, const std::string& key, int line) {
  if (token.compare(0, key.size() + 1, key + "=") != 0)
    throw ParseError("line " + std::to_string(line) + ": expected " + key + "=<int>, got '" +
                     token + "'");
  try {
    std::size_t used = 0;
    int v = std::stoi(token.substr(key.size() + 1), &used);
    if (used != token.size() - key.size() - 1) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("line " + std::to_string(line) + ": bad integer in '" + token + "'");
  }
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

}  // namespace

CfkComplex parse_cfk(const std::string& text) {
  CfkComplex c;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok[0] == "gen") {
      if (tok.size() != 4) throw ParseError("line " + std::to_string(number) + ": malformed gen");
      if (c.index_of(tok[1]) >= 0)
        throw ParseError("line " + std::to_string(number) + ": duplicate generator " + tok[1]);
      c.generators.push_back({tok[1], keyed_int(tok[2], "A", number), keyed_int(tok[3], "M", number)});
    } else if (tok[0] == "arrow") {
      if (tok.size() != 6 || tok[2] != "->")
        throw ParseError("line " + std::to_string(number) +
                         ": malformed arrow (multiplicity labels nw= nz= are required)");
      CfkArrow a;
      a.src = c.index_of(tok[1]);
      a.dst = c.index_of(tok[3]);
      if (a.src < 0 || a.dst < 0)
        throw ParseError("line " + std::to_string(number) + ": unknown generator");
      a.nw = keyed_int(tok[4], "nw", number);
      a.nz = keyed_int(tok[5], "nz", number);
      if (a.nw < 0 || a.nz < 0)
        throw ParseError("line " + std::to_string(number) + ": negative multiplicity");
      c.arrows.push_back(a);
    } else {
      throw ParseError("line " + std::to_string(number) + ": unknown directive " + tok[0]);
    }
  }
  return c;
}

std::string serialize_cfk(const CfkComplex& c) {
  std::ostringstream out;
  for (const auto& g : c.generators)
    out << "gen " << g.name << " A=" << g.alexander << " M=" << g.maslov << '\n';
  for (const auto& a : c.arrows)
    out << "arrow " << c.generators[a.src].name << " -> " << c.generators[a.dst].name
        << " nw=" << a.nw << " nz=" << a.nz << '\n';
  return out.str();
}

BigradedGroups hfk_hat_groups(const CfkComplex& c) { return homology_ranks(c.graded_complex()); }

BigradedGroups hat_total_homology(const CfkComplex& c) {
  FilteredComplex<F2> flat(Flavor::Homological);
  for (const auto& g : c.generators) flat.add_generator({g.maslov, 0, 0});
  for (const auto& a : c.arrows)
    if (a.nw == 0) flat.add_term(a.src, a.dst, F2(1));
  return homology_ranks(flat);
}

int tau_from_cfk(const CfkComplex& c) {
  auto reduced = filtered_reduce(c.hat_complex());
  if (reduced.survivors.size() != 1)
    throw AlgebraError("hat homology has rank " + std::to_string(reduced.survivors.size()) +
                       ", expected 1 for a knot");
  return reduced.survivors.front().filtration;
}

LaurentPoly hfk_euler_characteristic(const BigradedGroups& g) {
  LaurentPoly p;
  for (const auto& [k, r] : g.ranks) p.add(k.first, (k.second % 2 == 0) ? r : -r);
  return p;
}

bool hfk_symmetric(const BigradedGroups& g) {
  for (const auto& [k, r] : g.ranks)
    if (g.rank(-k.first, k.second - 2 * k.first) != r) return false;
  return true;
}

RankTable parse_rank_table(const std::string& text) {
  RankTable t;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok[0] == "grading-scale" && tok.size() == 2) {
      t.grading_scale = std::stoi(tok[1]);
      if (t.grading_scale < 1) throw ParseError("grading-scale must be positive");
    } else if (tok[0] == "rank" && tok.size() == 4) {
      long long r = std::stoll(tok[3]);
      if (r < 0) throw ParseError("line " + std::to_string(number) + ": negative rank");
      t.groups.add(keyed_int(tok[1], "A", number), keyed_int(tok[2], "M", number), r);
    } else {
      throw ParseError("line " + std::to_string(number) + ": malformed rank table line");
    }
  }
  return t;
}

std::string serialize_rank_table(const RankTable& t) {
  std::ostringstream out;
  if (t.grading_scale != 1) out << "grading-scale " << t.grading_scale << '\n';
  for (auto it = t.groups.ranks.rbegin(); it != t.groups.ranks.rend(); ++it)
    out << "rank A=" << it->first.first << " M=" << it->first.second << ' ' << it->second << '\n';
  return out.str();
}

int s_from_lee(const FilteredComplex<Rational>& lee) {
  if (lee.sense() != FiltrationSense::NonDecreasing)
    throw AlgebraError("s_from_lee expects a q-filtration that d never decreases");
  auto reduced = filtered_reduce(lee.with_negated_filtration());
  if (reduced.survivors.size() != 2)
    throw AlgebraError("Lee homology has rank " + std::to_string(reduced.survivors.size()) +
                       ", expected 2 for a knot");
  int a = -reduced.survivors[0].filtration;
  int b = -reduced.survivors[1].filtration;
  if (a > b) std::swap(a, b);
  if (b - a != 2) throw AlgebraError("Lee survivors are not two q-levels apart");
  return a + 1;
}

}  // namespace khl
