#include <doctest.h>

#include <fstream>
#include <sstream>

#include "khl/error.hpp"
#include "khl/hfk11.hpp"
#include "khl/linkdiag.hpp"

using namespace khl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OneOneDiagram fixture(const std::string& name) {
  return parse_diagram(slurp(std::string(KHL_DATA_DIR) + "/diagrams/" + name + ".diag"));
}

Rational q(long num, long den = 1) { return Rational(num, den); }

// Thin knots: rank |a_k| in Alexander grading k sits at Maslov k - tau.
BigradedGroups thin_oracle(const LaurentPoly& alexander, int tau) {
  BigradedGroups g;
  for (const auto& [k, a] : alexander.terms()) g.add(k, k - tau, a < 0 ? -a : a);
  return g;
}

struct Summary {
  BigradedGroups groups;
  int tau = 0;
};

Summary summarize(const OneOneDiagram& d) {
  const CfkComplex c = build_cfk(d);
  REQUIRE(c.d_squared_zero());
  REQUIRE(c.grading_violations().empty());
  return {hfk_hat_groups(c), tau_from_cfk(c)};
}

}  // namespace

TEST_CASE("diagram text round-trips and fixtures match the builders") {
  for (int n = 0; n <= 3; ++n) {
    const OneOneDiagram d = torus_knot_diagram(n);
    const OneOneDiagram back = parse_diagram(serialize_diagram(d));
    CHECK(back.period == d.period);
    CHECK(back.beta == d.beta);
    CHECK(back.z == d.z);
    CHECK(back.w == d.w);
  }
  const char* names[] = {"unknot", "t23", "t25", "t27"};
  for (int n = 0; n <= 3; ++n) CHECK(fixture(names[n]).beta == torus_knot_diagram(n).beta);
  CHECK(fixture("fig8").beta == figure_eight_diagram().beta);
  CHECK_THROWS_AS(parse_diagram("period 0 2\nv 1/2 -1/3\nz 1/4 1/2\nw 3/4 1/2\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("period 0 1\nv 1/2\n"), ParseError);
}

TEST_CASE("straight unknot: one generator, no bigons") {
  OneOneDiagram d;
  d.period = 0;
  d.beta = {{q(1, 2), q(-1, 3)}};
  d.z = {q(1, 4), q(1, 2)};
  d.w = {q(3, 4), q(1, 2)};
  CHECK(validate_diagram(d) == 1);
  CHECK(generators(d).size() == 1);
  CHECK(find_bigons(d).empty());
  const Summary s = summarize(d);
  CHECK(s.groups.total() == 1);
  CHECK(s.groups.rank(0, 0) == 1);
  CHECK(s.tau == 0);
}

TEST_CASE("validation rejects degenerate diagrams") {
  OneOneDiagram on_alpha;
  on_alpha.period = 0;
  on_alpha.beta = {{q(1, 2), q(-1, 3)}, {q(1, 2), q(0)}, {q(1, 3), q(1, 3)}};
  on_alpha.z = {q(1, 4), q(1, 2)};
  on_alpha.w = {q(3, 4), q(1, 2)};
  CHECK_THROWS_AS(validate_diagram(on_alpha), InvalidInput);

  OneOneDiagram crossing;
  crossing.period = 0;
  crossing.beta = {{q(1, 5), q(1, 10)}, {q(4, 5), q(3, 10)}, {q(4, 5), q(1, 10)}, {q(1, 5), q(3, 10)}};
  crossing.z = {q(1, 2), q(4, 5)};
  crossing.w = {q(1, 10), q(4, 5)};
  CHECK_THROWS_AS(validate_diagram(crossing), InvalidInput);

  OneOneDiagram on_beta;
  on_beta.period = 0;
  on_beta.beta = {{q(1, 2), q(-1, 3)}};
  on_beta.z = {q(1, 2), q(1, 2)};
  on_beta.w = {q(3, 4), q(1, 2)};
  CHECK_THROWS_AS(validate_diagram(on_beta), InvalidInput);

  OneOneDiagram bad_period = on_beta;
  bad_period.z = {q(1, 4), q(1, 2)};
  bad_period.period = 0;
  bad_period.beta = {{q(1, 2), q(1, 3)}, {q(1, 2), q(2, 3)}, {q(1, 2), q(1, 3)}};
  CHECK_THROWS_AS(validate_diagram(bad_period), InvalidInput);
}

TEST_CASE("trefoil: three generators, two bigons, thin staircase") {
  const OneOneDiagram d = fixture("t23");
  CHECK(validate_diagram(d) == 3);
  const auto bigons = find_bigons(d);
  REQUIRE(bigons.size() == 2);
  for (const auto& b : bigons) CHECK(b.nw + b.nz == 1);
  CHECK(bigons[0].nw != bigons[1].nw);
  const Summary s = summarize(d);
  CHECK(s.groups.rank(1, 0) == 1);
  CHECK(s.groups.rank(0, -1) == 1);
  CHECK(s.groups.rank(-1, -2) == 1);
  CHECK(s.groups.total() == 3);
  CHECK(s.tau == 1);
}

TEST_CASE("torus knots T(2,2n+1) match the Alexander oracle") {
  const char* names[] = {"t23", "t25", "t27"};
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const OneOneDiagram d = fixture(names[n - 1]);
    CHECK(validate_diagram(d) == static_cast<std::size_t>(2 * n + 1));
    const Summary s = summarize(d);
    const LaurentPoly delta = alexander_poly(torus_link(2, 2 * n + 1));
    CHECK(s.groups == thin_oracle(delta, n));
    CHECK(hfk_euler_characteristic(s.groups) == delta);
    CHECK(hfk_symmetric(s.groups));
    CHECK(s.tau == n);
  }
}

TEST_CASE("mirror negates tau") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const Summary s = summarize(reflected(torus_knot_diagram(n)));
    CHECK(s.tau == -n);
    CHECK(hfk_symmetric(s.groups));
    CHECK(hfk_euler_characteristic(s.groups) == alexander_poly(torus_link(2, 2 * n + 1)));
  }
}

TEST_CASE("figure-eight: ranks 1, 3, 1") {
  const OneOneDiagram d = fixture("fig8");
  CHECK(validate_diagram(d) == 5);
  const Summary s = summarize(d);
  CHECK(s.groups.rank(1, 1) == 1);
  CHECK(s.groups.rank(0, 0) == 3);
  CHECK(s.groups.rank(-1, -1) == 1);
  CHECK(s.groups.total() == 5);
  CHECK(s.tau == 0);
  const LaurentPoly fig8_delta = LaurentPoly::monomial(-1, -1) + LaurentPoly::monomial(3, 0) +
                                 LaurentPoly::monomial(-1, 1);
  CHECK(hfk_euler_characteristic(s.groups) == fig8_delta);
  CHECK(hfk_symmetric(s.groups));
}

TEST_CASE("complex is invariant under translation, restart and refinement") {
  const std::vector<OneOneDiagram> diagrams = {torus_knot_diagram(1), torus_knot_diagram(2),
                                               figure_eight_diagram()};
  const std::vector<Point> shifts = {{q(3), q(-2)}, {q(1, 7), q(0)}, {q(-5, 3), q(1, 11)}};
  for (const auto& d : diagrams) {
    const Summary base = summarize(d);
    for (const auto& by : shifts) {
      const Summary t = summarize(translated(d, by));
      CHECK(t.groups == base.groups);
      CHECK(t.tau == base.tau);
    }
    for (std::size_t k = 1; k < d.beta.size(); k += 3) {
      const Summary r = summarize(restarted(d, k));
      CHECK(r.groups == base.groups);
      CHECK(r.tau == base.tau);
    }
    const Summary f = summarize(refined(d));
    CHECK(f.groups == base.groups);
    CHECK(f.tau == base.tau);
  }
}

TEST_CASE("bigon graph grading increments close up") {
  for (const auto& d : {torus_knot_diagram(3), figure_eight_diagram()}) {
    const auto bigons = find_bigons(d);
    const Gradings g = gradings(generators(d).size(), bigons);
    for (const auto& b : bigons) {
      CHECK(g.alexander[b.source] - g.alexander[b.target] == b.nz - b.nw);
      CHECK(g.maslov[b.source] - g.maslov[b.target] == 1 - 2 * b.nw);
    }
  }
}
