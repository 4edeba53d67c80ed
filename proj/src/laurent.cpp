#include "khl/laurent.hpp"

#include <cctype>
#include <sstream>

#include "khl/error.hpp"
#include "khl/field.hpp"

namespace khl {

FieldKind parse_field(const std::string& name) {
  if (name == "f2" || name == "F2") return FieldKind::F2;
  if (name == "q" || name == "Q") return FieldKind::Q;
  throw ParseError("unknown field '" + name + "' (expected f2 or q)");
}

namespace {

std::string power(const std::string& var, int e) {
  if (e == 0) return "";
  if (e == 1) return var;
  return var + "^" + std::to_string(e);
}

// Appends one signed term; `body` is the monomial without coefficient ("" for 1).
void append_term(std::string& out, long long coef, const std::string& body) {
  bool negative = coef < 0;
  unsigned long long mag = negative ? -static_cast<unsigned long long>(coef) : coef;
  if (out.empty()) {
    if (negative) out += "-";
  } else {
    out += negative ? " - " : " + ";
  }
  if (body.empty()) {
    out += std::to_string(mag);
  } else {
    if (mag != 1) out += std::to_string(mag) + "*";
    out += body;
  }
}

}  // namespace

LaurentPoly LaurentPoly::monomial(long long coef, int exponent) {
  LaurentPoly p;
  p.add(exponent, coef);
  return p;
}

long long LaurentPoly::coefficient(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? 0 : it->second;
}

int LaurentPoly::min_degree() const {
  if (terms_.empty()) throw InvalidInput("degree of zero polynomial");
  return terms_.begin()->first;
}

int LaurentPoly::max_degree() const {
  if (terms_.empty()) throw InvalidInput("degree of zero polynomial");
  return terms_.rbegin()->first;
}

void LaurentPoly::add(int exponent, long long coef) {
  if (coef == 0) return;
  auto& slot = terms_[exponent];
  slot += coef;
  if (slot == 0) terms_.erase(exponent);
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (auto [e, c] : o.terms_) add(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (auto [e, c] : o.terms_) add(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  for (auto [ea, ca] : a.terms_)
    for (auto [eb, cb] : b.terms_) r.add(ea + eb, ca * cb);
  return r;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r;
  for (auto [e, c] : terms_) r.terms_[e] = -c;
  return r;
}

LaurentPoly LaurentPoly::inverted() const {
  LaurentPoly r;
  for (auto [e, c] : terms_) r.terms_[-e] = c;
  return r;
}

LaurentPoly LaurentPoly::shifted(int by) const {
  LaurentPoly r;
  for (auto [e, c] : terms_) r.terms_[e + by] = c;
  return r;
}

long long LaurentPoly::evaluate_at_one() const {
  long long s = 0;
  for (auto [e, c] : terms_) s += c;
  return s;
}

std::string LaurentPoly::to_string(const std::string& var) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto [e, c] : terms_) append_term(out, c, power(var, e));
  return out;
}

void PoincarePoly::add(int q, int t, long long coef) {
  if (coef == 0) return;
  auto& slot = terms_[{q, t}];
  slot += coef;
  if (slot == 0) terms_.erase({q, t});
}

long long PoincarePoly::coefficient(int q, int t) const {
  auto it = terms_.find({q, t});
  return it == terms_.end() ? 0 : it->second;
}

LaurentPoly PoincarePoly::euler_characteristic() const {
  LaurentPoly r;
  for (auto [key, c] : terms_) r.add(key.first, (key.second % 2 == 0) ? c : -c);
  return r;
}

std::string PoincarePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::map<std::pair<int, int>, long long> by_t;  // (t, q)
  for (auto [key, c] : terms_) by_t[{key.second, key.first}] = c;
  std::string out;
  for (auto [key, c] : by_t) {
    std::string body = power("q", key.second);
    std::string tp = power("t", key.first);
    if (!tp.empty()) body = body.empty() ? tp : body + "*" + tp;
    append_term(out, c, body);
  }
  return out;
}

PoincarePoly PoincarePoly::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  PoincarePoly p;
  if (s == "0") return p;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError("bad polynomial '" + text + "': " + why);
  };
  auto read_int = [&]() {
    std::size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      fail("expected integer");
    return std::stoll(s.substr(start, i - start));
  };
  while (i < s.size()) {
    long long sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      fail("expected sign");
    }
    long long coef = 1;
    bool have_factor = false;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      coef = read_int();
      have_factor = true;
      if (i < s.size() && s[i] == '*') ++i;
    }
    int q = 0, t = 0;
    while (i < s.size() && (s[i] == 'q' || s[i] == 't')) {
      char var = s[i++];
      int e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        e = static_cast<int>(read_int());
      }
      (var == 'q' ? q : t) += e;
      have_factor = true;
      if (i < s.size() && s[i] == '*') ++i;
    }
    if (!have_factor) fail("empty term");
    p.add(q, t, sign * coef);
  }
  return p;
}

}  // namespace khl
