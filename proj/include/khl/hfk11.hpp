#pragma once

#include <string>
#include <vector>

#include "khl/field.hpp"
#include "khl/homalg.hpp"

namespace khl {

struct Point {
  Rational x, y;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Genus-one doubly pointed diagram lifted to the plane. alpha is the image of y = 0;
/// the lift of beta visits `beta` in order and closes up at beta[0] + (period, 1).
struct OneOneDiagram {
  int period = 0;
  std::vector<Point> beta;
  Point z, w;
};

OneOneDiagram parse_diagram(const std::string& text);
std::string serialize_diagram(const OneOneDiagram& d);

/// Checks transversality, embeddedness of all lifts and basepoint placement exactly.
/// Returns the number of intersection points of alpha and beta.
std::size_t validate_diagram(const OneOneDiagram& d);

/// An intersection of the lifted beta with the line y = line, in beta order.
struct Intersection {
  long long segment = 0;  // segment index on the infinite lift
  int line = 0;
  Point at;
};

/// One period's intersections with alpha; index = generator id.
std::vector<Intersection> generators(const OneOneDiagram& d);

struct BigonRecord {
  int source = 0;
  int target = 0;
  int nw = 0;
  int nz = 0;
  std::vector<Point> region;  // beta corners from one generator to the other; closed along alpha
};

std::vector<BigonRecord> find_bigons(const OneOneDiagram& d);

struct Gradings {
  std::vector<int> alexander;
  std::vector<int> maslov;
};

/// Relative gradings along the bigon graph, normalized by HFK symmetry (A) and by the
/// hat survivor sitting at M = 0.
Gradings gradings(std::size_t generator_count, const std::vector<BigonRecord>& bigons);

CfkComplex build_cfk(const OneOneDiagram& d);

// ---- transformations and builders ----------------------------------------

OneOneDiagram translated(const OneOneDiagram& d, const Point& by);
/// Starts the period at vertex k instead of vertex 0.
OneOneDiagram restarted(const OneOneDiagram& d, std::size_t k);
/// Inserts an interior point on every segment (the midpoint unless it lies on alpha).
OneOneDiagram refined(const OneOneDiagram& d);
/// Reflection x -> -x: the diagram of the mirror knot.
OneOneDiagram reflected(const OneOneDiagram& d);

/// Strip picture: `points` intersections, `arcs` nested arcs around w on the lower line
/// starting at index w_start, `arcs` nested arcs around z hanging from the upper line
/// starting at index z_start, and the remaining through strands shifted by `shift`
/// (k-th bottom end joins the (k + shift)-th top end, counted on the lift).
OneOneDiagram rainbow_diagram(int points, int arcs, int w_start, int z_start, int shift);

/// T(2, 2n+1) with n > 0, or the unknot for n = 0.
OneOneDiagram torus_knot_diagram(int n);

/// The figure-eight knot: two nested arcs around each basepoint, one through strand.
OneOneDiagram figure_eight_diagram();

}  // namespace khl
