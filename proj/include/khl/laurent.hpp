#pragma once

#include <map>
#include <string>
#include <utility>

namespace khl {

/// Laurent polynomial in one variable with integer coefficients.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  static LaurentPoly monomial(long long coef, int exponent);

  const std::map<int, long long>& terms() const { return terms_; }
  long long coefficient(int exponent) const;
  bool is_zero() const { return terms_.empty(); }
  int min_degree() const;
  int max_degree() const;

  void add(int exponent, long long coef);
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly operator-() const;
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) = default;

  /// p(x) -> p(x^-1)
  LaurentPoly inverted() const;
  LaurentPoly shifted(int by) const;
  long long evaluate_at_one() const;

  /// Renders as e.g. "q^-1 + q - 3*q^5" in the named variable.
  std::string to_string(const std::string& var = "q") const;

 private:
  std::map<int, long long> terms_;
};

/// Two-variable Laurent polynomial in (q, t); used for Poincare polynomials.
class PoincarePoly {
 public:
  using Key = std::pair<int, int>;  // (q, t)

  void add(int q, int t, long long coef);
  const std::map<Key, long long>& terms() const { return terms_; }
  long long coefficient(int q, int t) const;
  std::size_t term_count() const { return terms_.size(); }
  friend bool operator==(const PoincarePoly& a, const PoincarePoly& b) = default;

  /// Substitutes t = -1.
  LaurentPoly euler_characteristic() const;

  /// Terms ordered by t then q, e.g. "q^-5*t^-4 + q^-1*t^-3 + 2*q".
  std::string to_string() const;
  static PoincarePoly parse(const std::string& text);

 private:
  std::map<Key, long long> terms_;
};

}  // namespace khl
