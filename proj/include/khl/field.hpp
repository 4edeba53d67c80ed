#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "khl/error.hpp"

namespace khl {

/// The field with two elements.
class F2 {
 public:
  constexpr F2() = default;
  constexpr F2(long v) : bit_(static_cast<std::uint8_t>(v & 1)) {}  // NOLINT(implicit)

  constexpr bool value() const { return bit_ != 0; }

  friend constexpr F2 operator+(F2 a, F2 b) { return F2(a.bit_ ^ b.bit_); }
  friend constexpr F2 operator-(F2 a, F2 b) { return F2(a.bit_ ^ b.bit_); }
  friend constexpr F2 operator*(F2 a, F2 b) { return F2(a.bit_ & b.bit_); }
  friend F2 operator/(F2 a, F2 b) {
    if (!b.bit_) throw AlgebraError("division by zero in F2");
    return a;
  }
  constexpr F2 operator-() const { return *this; }
  F2& operator+=(F2 o) { bit_ ^= o.bit_; return *this; }
  F2& operator-=(F2 o) { bit_ ^= o.bit_; return *this; }
  F2& operator*=(F2 o) { bit_ &= o.bit_; return *this; }
  friend constexpr bool operator==(F2 a, F2 b) { return a.bit_ == b.bit_; }

  friend std::ostream& operator<<(std::ostream& os, F2 a) { return os << int(a.bit_); }

 private:
  std::uint8_t bit_ = 0;
};

using Rational = mpq_class;

enum class FieldKind { F2, Q };

inline bool is_zero(F2 a) { return !a.value(); }
inline bool is_zero(const Rational& a) { return sgn(a) == 0; }

inline F2 inverse(F2 a) { return F2(1) / a; }
inline Rational inverse(const Rational& a) {
  if (is_zero(a)) throw AlgebraError("division by zero in Q");
  return Rational(1) / a;
}

inline std::string to_string(F2 a) { return a.value() ? "1" : "0"; }
inline std::string to_string(const Rational& a) { return a.get_str(); }

inline std::string field_name(FieldKind k) { return k == FieldKind::F2 ? "f2" : "q"; }

FieldKind parse_field(const std::string& name);

}  // namespace khl
