#include <cctype>
#include <cstdlib>
#include <map>

#include "khl/error.hpp"
#include "khl/linkdiag.hpp"

namespace khl {

namespace {

struct Dir {
  int x, y;
};

int cross(Dir a, Dir b) { return a.x * b.y - a.y * b.x; }

struct Strand {
  int in, out;
  Dir dir;
};

// PD tuple for `under` passing below `over`; the sign is that of cross(over, under).
Crossing make_crossing(const Strand& under, const Strand& over) {
  bool out_first = cross(under.dir, over.dir) < 0;
  return Crossing{{under.in, out_first ? over.out : over.in, under.out,
                   out_first ? over.in : over.out}};
}

Crossing make_signed(const Strand& a, const Strand& b, int sign) {
  int natural = cross(b.dir, a.dir) > 0 ? 1 : -1;  // a under b
  return natural == sign ? make_crossing(a, b) : make_crossing(b, a);
}

}  // namespace

LinkDiagram unknot_diagram() { return LinkDiagram({}, 1); }

LinkDiagram torus_link(int two, int m) {
  if (two != 2) throw InvalidInput("only 2-strand torus links are supported");
  if (m < 1) throw InvalidInput("torus_link needs m >= 1");
  auto e = [m](int k, int i) { return 2 * (k % m) + i; };
  std::vector<Crossing> xs;
  for (int k = 0; k < m; ++k) xs.push_back(Crossing{{e(k, 2), e(k + 1, 2), e(k + 1, 1), e(k, 1)}});
  return LinkDiagram(std::move(xs), 0);
}

LinkDiagram mirror(const LinkDiagram& d) {
  std::vector<Crossing> xs;
  for (std::size_t i = 0; i < d.crossing_count(); ++i) {
    const auto& a = d.crossings()[i].arcs;
    if (d.incoming(i, 3))
      xs.push_back(Crossing{{a[3], a[0], a[1], a[2]}});
    else
      xs.push_back(Crossing{{a[1], a[2], a[3], a[0]}});
  }
  return LinkDiagram(std::move(xs), d.unknot_components());
}

LinkDiagram whitehead_double(const LinkDiagram& companion, int twists, int clasp_sign) {
  if (!companion.is_knot()) throw InvalidInput("whitehead_double needs a knot companion");
  if (clasp_sign != 1 && clasp_sign != -1) throw InvalidInput("clasp sign must be +1 or -1");
  int next = 1;
  auto fresh = [&next] { return next++; };

  // Left copy follows the companion orientation, right copy runs against it.
  // The minimal arc is cut open to host the twist region and the clasp.
  struct Copies {
    int left, right;
  };
  std::map<int, Copies> copies;
  for (const auto& c : companion.crossings())
    for (int a : c.arcs)
      if (!copies.count(a)) copies[a] = {fresh(), fresh()};

  Copies tail{}, head{};
  const bool crossingless = companion.crossing_count() == 0;
  int cut = 0;
  if (crossingless) {
    tail = head = {fresh(), fresh()};
  } else {
    cut = copies.begin()->first;
    tail = copies[cut];
    head = {fresh(), fresh()};
  }
  auto copy_label = [&](std::size_t i, int slot, bool left) {
    int a = companion.crossings()[i].arcs[slot];
    const Copies& c = a != cut ? copies[a] : (companion.incoming(i, slot) ? head : tail);
    return left ? c.left : c.right;
  };

  std::vector<Crossing> xs;
  for (std::size_t i = 0; i < companion.crossing_count(); ++i) {
    int iw = fresh(), ie = fresh(), js = fresh(), jn = fresh();
    int north_w, north_e, south_e, south_w;
    if (companion.sign(i) > 0) {
      north_w = copy_label(i, 3, true);
      north_e = copy_label(i, 1, true);
      south_e = copy_label(i, 1, false);
      south_w = copy_label(i, 3, false);
    } else {
      south_e = copy_label(i, 1, true);
      south_w = copy_label(i, 3, true);
      north_e = copy_label(i, 1, false);
      north_w = copy_label(i, 3, false);
    }
    const Dir up{0, 1}, down{0, -1}, east{1, 0}, west{-1, 0};
    xs.push_back(make_crossing({copy_label(i, 0, true), iw, up}, {js, south_w, west}));
    xs.push_back(make_crossing({iw, copy_label(i, 2, true), up}, {north_w, jn, east}));
    xs.push_back(make_crossing({ie, copy_label(i, 0, false), down}, {south_e, js, west}));
    xs.push_back(make_crossing({copy_label(i, 2, false), ie, down}, {jn, north_e, east}));
  }

  const int full_twists = std::abs(twists - companion.writhe());
  const int twist_sign = twists > companion.writhe() ? -1 : 1;
  int left = tail.left, right = tail.right;
  for (int k = 1; k <= 2 * full_twists; ++k) {
    int left_next = fresh(), right_next = fresh();
    bool odd = k % 2 == 1;
    Strand l{left, left_next, odd ? Dir{1, 1} : Dir{-1, 1}};
    Strand r{right_next, right, odd ? Dir{1, -1} : Dir{-1, -1}};
    xs.push_back(make_signed(l, r, twist_sign));
    left = left_next;
    right = right_next;
  }

  int hook_top = fresh(), bar_mid = fresh();
  xs.push_back(make_signed({left, hook_top, {0, 1}}, {bar_mid, head.left, {-1, 0}}, clasp_sign));
  xs.push_back(make_signed({hook_top, right, {0, -1}}, {head.right, bar_mid, {-1, 0}}, clasp_sign));
  return LinkDiagram(std::move(xs), 0).relabeled();
}

std::string BuilderExpr::canonical() const {
  switch (kind) {
    case Kind::Torus:
      return "torus(2," + std::to_string(torus_m) + ")";
    case Kind::Double:
      return "double(" + child->canonical() + ",t=" + std::to_string(twists) +
             ",clasp=" + (clasp > 0 ? "+" : "-") + ")";
    case Kind::Mirror:
      return "mirror(" + child->canonical() + ")";
    case Kind::Pd:
      return serialize(parse_pd(pd_text));
  }
  return {};
}

LinkDiagram BuilderExpr::build() const {
  switch (kind) {
    case Kind::Torus:
      return torus_link(2, torus_m);
    case Kind::Double:
      return whitehead_double(child->build(), twists, clasp);
    case Kind::Mirror:
      return mirror(child->build());
    case Kind::Pd:
      return parse_pd(pd_text);
  }
  return {};
}

namespace {

class BuilderParser {
 public:
  explicit BuilderParser(const std::string& text) : original_(text) {
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s_ += ch;
  }

  BuilderExpr parse() {
    BuilderExpr e = expr();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("bad expression '" + original_ + "': " + why + " at offset " +
                     std::to_string(pos_));
  }

  bool accept(const std::string& word) {
    if (s_.compare(pos_, word.size(), word) != 0) return false;
    pos_ += word.size();
    return true;
  }

  void expect(const std::string& word) {
    if (!accept(word)) fail("expected '" + word + "'");
  }

  int integer() {
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits || pos_ - digits > 9) fail("expected integer");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  BuilderExpr expr() {
    BuilderExpr e;
    if (accept("torus(")) {
      e.kind = BuilderExpr::Kind::Torus;
      if (integer() != 2) fail("only torus(2, m) is supported");
      expect(",");
      e.torus_m = integer();
      if (e.torus_m < 1) fail("torus needs m >= 1");
      expect(")");
    } else if (accept("double(")) {
      e.kind = BuilderExpr::Kind::Double;
      e.child = std::make_shared<BuilderExpr>(expr());
      expect(",t=");
      e.twists = integer();
      if (accept(",clasp=")) {
        if (accept("+")) e.clasp = 1;
        else if (accept("-")) e.clasp = -1;
        else fail("clasp must be + or -");
      }
      expect(")");
    } else if (accept("mirror(")) {
      e.kind = BuilderExpr::Kind::Mirror;
      e.child = std::make_shared<BuilderExpr>(expr());
      expect(")");
    } else if (s_.compare(pos_, 3, "PD[") == 0) {
      std::size_t close = s_.find(']', pos_);
      if (close == std::string::npos) fail("unterminated PD code");
      e.kind = BuilderExpr::Kind::Pd;
      e.pd_text = s_.substr(pos_, close + 1 - pos_);
      pos_ = close + 1;
      parse_pd(e.pd_text);
    } else {
      fail("expected torus, double, mirror or PD[");
    }
    return e;
  }

  std::string original_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

BuilderExpr parse_builder(const std::string& text) { return BuilderParser(text).parse(); }

}  // namespace khl
