#pragma once

// Shared vocabulary: exact rationals, error types, tolerances and the
// enumeration cap.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace occucert {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using RealVector = std::vector<double>;

/// Base class for every error raised by the library. `exit_code` follows the
/// CLI contract: 1 verification failure, 2 input error, 3 cap exceeded.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, int exit_code = 2)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what, 2) {}
};

/// A documented precondition of an operation does not hold for its inputs.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what, 2) {}
};

class CapExceeded : public Error {
 public:
  CapExceeded(std::size_t size, std::size_t cap)
      : Error("enumeration cap exceeded: component of size " +
                  std::to_string(size) + " > cap " + std::to_string(cap),
              3),
        size_(size),
        cap_(cap) {}
  std::size_t size() const noexcept { return size_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t size_, cap_;
};

class SingularMatrix : public Error {
 public:
  SingularMatrix(std::size_t rank, std::size_t dim)
      : Error("singular matrix: rank " + std::to_string(rank) + " < " +
              std::to_string(dim)),
        rank_(rank) {}
  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

/// Tolerances attached to every floating verdict.
struct Tolerances {
  double abs = 1e-10;
  double rel = 1e-9;
  /// Margin used for strict inequalities such as rho < 1.
  double strict_margin = 1e-9;
};

inline constexpr std::size_t kDefaultEnumerationCap = 24;
inline constexpr std::size_t kMaxEnumerationCap = 30;

/// Enumeration cap, overridable through OCCUCERT_CAP.
inline std::size_t default_enumeration_cap() {
  if (const char* env = std::getenv("OCCUCERT_CAP")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= kMaxEnumerationCap) return v;
  }
  return kDefaultEnumerationCap;
}

// ---------------------------------------------------------------- rationals

/// p/q in canonical form; the two-argument mpq constructor does not reduce.
inline Rational make_rational(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Parses "p/q", "p" or a plain decimal such as "0.05" or "-1.5e-3" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw InputError("empty rational literal");

  auto is_int = [](std::string_view t) {
    std::size_t i = (t.size() > 0 && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };

  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw InputError("malformed rational: " + s);
    mpz_class p(strip_plus(num), 10), q(strip_plus(den), 10);
    if (q == 0) throw InputError("zero denominator: " + s);
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  if (is_int(s)) return Rational(mpz_class(strip_plus(s), 10));

  // decimal / scientific
  std::string mant = s;
  long exp10 = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    const std::string ex = s.substr(e + 1);
    if (!is_int(ex)) throw InputError("malformed rational: " + s);
    exp10 = std::stol(ex);
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant = mant.substr(1);
  }
  const auto dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty() || !is_int(digits)) throw InputError("malformed rational: " + s);
  if (exp10 > 4000 || exp10 < -4000) throw InputError("exponent out of range: " + s);
  mpz_class p(digits, 10), scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  Rational r = exp10 >= 0 ? Rational(p * scale) : Rational(p, scale);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

inline RealVector to_doubles(const RationalVector& v) {
  RealVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

/// Exact natural logarithm of a positive rational, evaluated in double with
/// full relative accuracy even when numerator and denominator overflow.
inline double log_rational(const Rational& r) {
  if (sgn(r) <= 0) throw PreconditionError("log of nonpositive rational");
  auto log_z = [](const mpz_class& z) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
  };
  // For values close to 1 compute log1p of the exact difference.
  const Rational diff = r - 1;
  if (abs(diff) < Rational(1, 4)) return std::log1p(diff.get_d());
  // Direct when r is a normal double; num/den logs cancel badly otherwise.
  const double d = r.get_d();
  if (std::isnormal(d) && std::isfinite(d)) return std::log(d);
  return log_z(r.get_num()) - log_z(r.get_den());
}

/// Formats a real with 15 significant digits, then reparses it so JSON
/// writers emit the short form.
inline double round15(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace occucert
