#include <set>
#include <string>

#include "doctest.h"
#include "khl/error.hpp"
#include "khl/laurent.hpp"
#include "khl/linkdiag.hpp"

using namespace khl;

namespace {

// For sequentially labelled knot diagrams the over strand runs from label l to l+1,
// so the sign is read off from whether slot 1 follows slot 3.
int sequential_sign(const Crossing& c, int label_count) {
  auto succ = [label_count](int l) { return l % label_count + 1; };
  return succ(c.arcs[3]) == c.arcs[1] ? 1 : -1;
}

const char* kFigureEight = "PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]";

LaurentPoly poly(std::initializer_list<std::pair<int, long long>> terms) {
  LaurentPoly p;
  for (auto [e, c] : terms) p.add(e, c);
  return p;
}

// Euler characteristic of the unreduced Khovanov polynomial of D+(T23,2).
const char* kDoubleKh =
    "q^-5*t^-4 + q^-1*t^-3 + q^-1*t^-2 + q*t^-1 + q^3*t^-1 + 2*q + q^3 + q^5 + 2*q^5*t + "
    "q^5*t^2 + q^9*t^2 + q^7*t^3 + q^9*t^3 + q^7*t^4 + q^11*t^4 + q^9*t^5 + q^11*t^5 + "
    "q^13*t^6 + q^13*t^7 + q^15*t^8 + q^17*t^8 + q^19*t^9";

}  // namespace

TEST_CASE("parse_pd examples") {
  auto u = parse_pd("PD[U(1)]");
  CHECK(u.crossing_count() == 0);
  CHECK(u.unknot_components() == 1);
  CHECK(u.component_count() == 1);

  // Three 2-arc components, each oriented by its single under-pass.
  auto chain = parse_pd("PD[X(1,4,2,3), X(3,6,4,5), X(5,2,6,1)]");
  CHECK(chain.crossing_count() == 3);
  CHECK(chain.component_count() == 3);
  CHECK(chain.writhe() == -3);

  auto tref = parse_pd("PD[X(3,1,4,6),X(1,5,2,4),X(5,3,6,2)]");
  CHECK(tref.is_knot());
  CHECK(tref.writhe() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(tref.sign(i) == sequential_sign(tref.crossings()[i], 6));
  CHECK(tref == torus_link(2, 3).relabeled());

  try {
    parse_pd("PD[X(1,4,2,3),X(3,6,4,5)]");
    FAIL("expected error");
  } catch (const InvalidInput& e) {
    std::string msg = e.what();
    CHECK(msg.find("1,2,5,6") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_pd("PD[X(1,2,3)]"), ParseError);
  CHECK_THROWS_AS(parse_pd("X(1,2,2,1)"), ParseError);
  CHECK_THROWS_AS(parse_pd("PD[X(1,1,1,2)]"), InvalidInput);
}

TEST_CASE("inconsistent orientation is rejected") {
  // Under strand 1->2 at both crossings forces both ends of arc 1 incoming.
  CHECK_THROWS_AS(parse_pd("PD[X(1,3,2,4),X(1,4,2,3)]"), InvalidInput);
}

TEST_CASE("serialize inverts parse") {
  for (const char* text : {"PD[U(1)]", "PD[X(1,4,2,3),X(3,6,4,5),X(5,2,6,1)]", kFigureEight,
                           "PD[X(2,2,1,1),U(2)]"}) {
    auto d = parse_pd(text);
    CHECK(parse_pd(serialize(d)) == d);
    CHECK(serialize(parse_pd(serialize(d))) == serialize(d));
  }
}

TEST_CASE("torus links") {
  CHECK_THROWS(torus_link(2, 0));
  CHECK_THROWS(torus_link(3, 2));
  for (int m = 1; m <= 9; ++m) {
    auto d = torus_link(2, m);
    CHECK(d.crossing_count() == static_cast<std::size_t>(m));
    CHECK(d.writhe() == m);
    CHECK(d.component_count() == (m % 2 ? 1 : 2));
    CHECK(mirror(d).writhe() == -m);
    CHECK(mirror(mirror(d)) == d);
  }
  auto t3 = torus_link(2, 3).relabeled();
  for (std::size_t i = 0; i < 3; ++i) CHECK(t3.sign(i) == sequential_sign(t3.crossings()[i], 6));
}

TEST_CASE("whitehead double crossing counts and signs") {
  auto t23 = torus_link(2, 3);
  CHECK(whitehead_double(t23, 2, 1).crossing_count() == 16);
  CHECK(whitehead_double(t23, 3, 1).crossing_count() == 14);
  CHECK(whitehead_double(t23, 6, 1).crossing_count() == 20);
  CHECK(whitehead_double(torus_link(2, 5), 5, 1).crossing_count() == 22);
  CHECK(whitehead_double(torus_link(2, 5), 4, 1).crossing_count() == 24);
  auto u = whitehead_double(unknot_diagram(), 0, 1);
  CHECK(u.crossing_count() == 2);
  CHECK(u.is_knot());
  CHECK(alexander_poly(u) == poly({{0, 1}}));
  CHECK_THROWS(whitehead_double(torus_link(2, 2), 0, 1));
  for (int t = -2; t <= 8; ++t) {
    auto d = whitehead_double(t23, t, 1);
    CHECK(d.is_knot());
    const int n = static_cast<int>(d.crossing_count());
    for (int i = 0; i < n; ++i) CHECK(d.sign(i) == sequential_sign(d.crossings()[i], 2 * n));
  }
}

TEST_CASE("jones polynomial") {
  CHECK(jones_kauffman(unknot_diagram()) == poly({{1, 1}, {-1, 1}}));
  CHECK(jones_kauffman(torus_link(2, 1)) == poly({{1, 1}, {-1, 1}}));
  auto tref = torus_link(2, 3);
  CHECK(jones_kauffman(tref) == poly({{1, 1}, {3, 1}, {5, 1}, {9, -1}}));
  CHECK(jones_kauffman(mirror(tref)) == jones_kauffman(tref).inverted());
  auto fig8 = parse_pd(kFigureEight);
  CHECK(jones_kauffman(mirror(fig8)) == jones_kauffman(fig8));

  auto dbl = whitehead_double(tref, 2, 1);
  CHECK(jones_kauffman(dbl) == PoincarePoly::parse(kDoubleKh).euler_characteristic());
  CHECK(jones_kauffman(mirror(dbl)) == jones_kauffman(dbl).inverted());
}

TEST_CASE("alexander polynomial") {
  CHECK(alexander_poly(unknot_diagram()) == poly({{0, 1}}));
  CHECK(alexander_poly(torus_link(2, 1)) == poly({{0, 1}}));
  CHECK(alexander_poly(torus_link(2, 3)) == poly({{-1, 1}, {0, -1}, {1, 1}}));
  CHECK(alexander_poly(torus_link(2, 5)) ==
        poly({{-2, 1}, {-1, -1}, {0, 1}, {1, -1}, {2, 1}}));
  CHECK(alexander_poly(parse_pd(kFigureEight)) == poly({{-1, -1}, {0, 3}, {1, -1}}));
  CHECK_THROWS(alexander_poly(torus_link(2, 2)));
}

TEST_CASE("alexander polynomial of twisted doubles") {
  for (int m : {3, 5}) {
    for (int t = -2; t <= 8; ++t) {
      auto d = whitehead_double(torus_link(2, m), t, 1);
      // t*x - (2t+1) + t/x, normalized to value 1 at x = 1.
      LaurentPoly expected = poly({{-1, -t}, {0, 2 * t + 1}, {1, -t}});
      auto got = alexander_poly(d);
      CHECK_MESSAGE(got == expected, "m=" << m << " t=" << t << " got " << got.to_string("x"));
      CHECK(got == got.inverted());
    }
  }
  CHECK(alexander_poly(whitehead_double(torus_link(2, 3), 6, 1)) ==
        poly({{-1, -6}, {0, 13}, {1, -6}}));
}

TEST_CASE("builder expressions") {
  auto e = parse_builder("double( torus(2,3), t=2, clasp=+ )");
  CHECK(e.canonical() == "double(torus(2,3),t=2,clasp=+)");
  CHECK(e.build().crossing_count() == 16);
  CHECK(parse_builder("mirror(torus(2,3))").build().writhe() == -3);
  CHECK(parse_builder("PD[U(1)]").build().component_count() == 1);
  CHECK(parse_builder("double(PD[U(1)],t=-1,clasp=-)").build().crossing_count() == 4);
  CHECK_THROWS_AS(parse_builder("torus(3,2)"), ParseError);
  CHECK_THROWS_AS(parse_builder("double(torus(2,3))"), ParseError);
  CHECK_THROWS_AS(parse_builder("torus(2,3)x"), ParseError);
}

TEST_CASE("poincare polynomial formatting") {
  auto p = PoincarePoly::parse(kDoubleKh);
  CHECK(p.term_count() == 22);
  CHECK(p.to_string() == kDoubleKh);
  CHECK(PoincarePoly::parse(p.to_string()) == p);
  PoincarePoly one;
  one.add(0, 0, 1);
  CHECK(one.to_string() == "1");
}
