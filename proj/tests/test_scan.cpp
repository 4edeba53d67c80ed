#include <doctest.h>

#include <numeric>
#include <random>

#include "khl/error.hpp"
#include "khl/scan.hpp"

using namespace khl;

namespace {

// Closure of a braid word on `strands` strands, strands running upward.
// Letter +i / -i crosses positions i-1 and i with the left strand under / over.
LinkDiagram braid_closure(int strands, const std::vector<int>& word) {
  std::vector<int> label(strands);
  std::iota(label.begin(), label.end(), 1);
  int fresh = strands + 1;
  std::vector<Crossing> xs;
  for (int letter : word) {
    const int i = std::abs(letter) - 1;
    const int sw = label[i], se = label[i + 1];
    const int nw = fresh++, ne = fresh++;
    if (letter > 0)
      xs.push_back({{sw, se, ne, nw}});
    else
      xs.push_back({{se, ne, nw, sw}});
    label[i] = nw;
    label[i + 1] = ne;
  }
  std::map<int, int> close;
  for (int p = 0; p < strands; ++p) close[label[p]] = p + 1;
  for (auto& x : xs)
    for (int& a : x.arcs)
      if (close.count(a)) a = close[a];
  return LinkDiagram(xs, 0).relabeled();
}

std::vector<int> random_word(std::mt19937_64& rng, int strands, int length) {
  std::vector<int> w;
  for (int i = 1; i < strands; ++i) w.push_back(i);  // every strand takes part
  while (static_cast<int>(w.size()) < length) w.push_back(1 + static_cast<int>(rng() % (strands - 1)));
  std::shuffle(w.begin(), w.end(), rng);
  for (int& l : w)
    if (rng() % 2) l = -l;
  return w;
}

// Inserts a curl on the arc leaving crossing `at` through its outgoing slot.
LinkDiagram add_kink(const LinkDiagram& d, bool positive) {
  auto xs = d.crossings();
  const int edge = xs[0].arcs[2];  // slot 2 is the outgoing under-strand
  const int loop = 1000, after = 1001;
  // Redirect the far end of the edge to the new label.
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (int s = 0; s < 4; ++s)
      if (xs[i].arcs[s] == edge && !(i == 0 && s == 2)) xs[i].arcs[s] = after;
  if (positive)
    xs.push_back({{edge, after, loop, loop}});
  else
    xs.push_back({{edge, loop, loop, after}});
  return LinkDiagram(xs, d.unknot_components()).relabeled();
}

template <class F>
void compare_with_cube(const LinkDiagram& d) {
  for (int t : {0, 1}) {
    auto fast = scan<F>(d, {t});
    auto cube = direct_cube<F>(d, {t});
    CHECK(fast.to_filtered().d_squared_zero());
    if (t == 0) {
      CHECK(fast.homology() == cube.homology());
    } else {
      auto survivors = filtered_survivors(fast);
      CHECK(survivors == filtered_survivors(cube));
      if (std::is_same_v<F, Rational>)
        CHECK(survivors.size() == (std::size_t{1} << d.component_count()));
    }
  }
}

}  // namespace

TEST_CASE("plan order") {
  auto one = parse_pd("PD[X(1,2,2,1)]");
  CHECK(plan_order(one).max_arity() == 0);
  CHECK(plan_order(one).order == std::vector<int>{0});
  auto open_one = parse_pd("PD[X(1,1,2,2)]");
  CHECK(plan_order(open_one).arity == std::vector<int>{0});
  for (int m = 2; m <= 9; ++m) {
    auto plan = plan_order(torus_link(2, m));
    CHECK(plan.max_arity() == 4);
    CHECK(plan.arity.back() == 0);
    auto sorted = plan.order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < m; ++i) CHECK(sorted[i] == i);
  }
  auto dbl = parse_builder("double(torus(2,3),t=2,clasp=+)").build();
  auto plan = plan_order(dbl);
  CHECK(plan.max_arity() <= 12);
  CHECK(plan.max_arity() == 8);
}

TEST_CASE("small Khovanov polynomials") {
  CHECK(khovanov_poincare<Rational>(unknot_diagram()).to_string() == "q^-1 + q");
  CHECK(khovanov_poincare<F2>(parse_pd("PD[X(1,2,2,1)]")).to_string() == "q^-1 + q");
  CHECK(khovanov_poincare<Rational>(torus_link(2, 3)).to_string() ==
        "q + q^3 + q^5*t^2 + q^9*t^3");
  auto hopf = torus_link(2, 2);
  CHECK(khovanov_poincare<Rational>(hopf).to_string() == "1 + q^2 + q^4*t^2 + q^6*t^2");
  CHECK(direct_cube<Rational>(hopf, {0}).homology().total() == 4);
  // Two disjoint unknots.
  CHECK(khovanov_poincare<Rational>(parse_pd("PD[U(2)]")).to_string() == "q^-2 + 2 + q^2");
}

TEST_CASE("scan matches the direct cube on builder diagrams") {
  std::vector<std::string> exprs;
  for (int m = 1; m <= 10; ++m) {
    exprs.push_back("torus(2," + std::to_string(m) + ")");
    exprs.push_back("mirror(torus(2," + std::to_string(m) + "))");
  }
  for (int t = -2; t <= 3; ++t)
    for (const char* clasp : {"+", "-"})
      exprs.push_back("double(torus(2,1),t=" + std::to_string(t) + ",clasp=" + clasp + ")");
  exprs.push_back("PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]");
  int checked = 0;
  for (const auto& e : exprs) {
    auto d = parse_builder(e).build();
    if (d.crossing_count() > 10) continue;
    CAPTURE(e);
    compare_with_cube<F2>(d);
    compare_with_cube<Rational>(d);
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("scan matches the direct cube on random braid closures") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 50; ++trial) {
    const int strands = 2 + static_cast<int>(rng() % 3);
    const int length = strands - 1 + static_cast<int>(rng() % (11 - strands + 1));
    auto word = random_word(rng, strands, length);
    auto d = braid_closure(strands, word);
    CAPTURE(serialize(d));
    REQUIRE(d.crossing_count() <= 10);
    compare_with_cube<F2>(d);
    compare_with_cube<Rational>(d);
  }
}

TEST_CASE("graded Euler characteristic is the Jones polynomial") {
  std::vector<LinkDiagram> ds = {torus_link(2, 3), torus_link(2, 4), mirror(torus_link(2, 5)),
                                 parse_pd("PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]"),
                                 parse_builder("double(torus(2,3),t=2,clasp=+)").build(),
                                 parse_builder("double(torus(2,3),t=-1,clasp=-)").build()};
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10; ++i) ds.push_back(braid_closure(3, random_word(rng, 3, 9)));
  for (const auto& d : ds) {
    CAPTURE(serialize(d));
    CHECK(khovanov_poincare<Rational>(d).euler_characteristic() == jones_kauffman(d));
    CHECK(khovanov_poincare<F2>(d).euler_characteristic() == jones_kauffman(d));
  }
}

TEST_CASE("Reidemeister I invariance") {
  for (const auto& d : {torus_link(2, 3), torus_link(2, 5),
                        parse_pd("PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]")}) {
    for (bool positive : {true, false}) {
      auto kinked = add_kink(d, positive);
      REQUIRE(kinked.crossing_count() == d.crossing_count() + 1);
      CHECK(kinked.writhe() == d.writhe() + (positive ? 1 : -1));
      CHECK(khovanov_poincare<Rational>(kinked) == khovanov_poincare<Rational>(d));
      CHECK(khovanov_poincare<F2>(kinked) == khovanov_poincare<F2>(d));
    }
  }
}

TEST_CASE("Lee homology of knots has rank two") {
  std::mt19937_64 rng(99);
  int knots = 0;
  for (int trial = 0; knots < 10 && trial < 100; ++trial) {
    auto d = braid_closure(3, random_word(rng, 3, 10));
    if (!d.is_knot()) continue;
    ++knots;
    CHECK(filtered_survivors(scan<Rational>(d, {1})).size() == 2);
  }
  CHECK(knots == 10);
}

TEST_CASE("Rasmussen s") {
  CHECK(rasmussen_s(unknot_diagram()) == 0);
  CHECK(rasmussen_s(torus_link(2, 3)) == 2);
  CHECK(rasmussen_s(torus_link(2, 5)) == 4);
  CHECK(rasmussen_s(mirror(torus_link(2, 3))) == -2);
  CHECK(rasmussen_s(parse_pd("PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]")) == 0);
  CHECK_THROWS_AS(rasmussen_s(torus_link(2, 2)), InvalidInput);
}

TEST_CASE("generator cap") {
  auto d = parse_builder("double(torus(2,3),t=2,clasp=+)").build();
  CHECK_THROWS_AS(scan<F2>(d, {0}, 10), ResourceLimit);
}
