#pragma once

#include "kr/rational.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kr {

// Upper bound on the number of variables in one polynomial ring. A web with
// s crossings uses 2s edge variables plus a few marks, so 32 covers every
// diagram the engine is meant for.
constexpr int kMaxVars = 32;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotDivisible : Error {
  using Error::Error;
};

// Exponent vector over the fixed variable slots 0..kMaxVars-1. Each variable
// has internal degree 2. Exponents are stored in one byte each; products that
// would exceed kMaxExponent throw.
constexpr int kMaxExponent = 255;

struct Monomial {
  std::array<uint8_t, kMaxVars> exp{};
  int32_t total = 0;

  static Monomial var(int v, int32_t power = 1);
  int32_t operator[](int v) const { return exp[v]; }
  int internal_degree() const { return 2 * total; }
  bool divides(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  // Caller guarantees divisibility.
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.total == b.total && std::memcmp(a.exp.data(), b.exp.data(), kMaxVars) == 0;
  }
  // Graded lexicographic order: total degree first, then exponents from slot 0.
  friend bool operator<(const Monomial& a, const Monomial& b);
};

struct Term {
  Monomial mono;
  Rational coeff;
};

// Sparse polynomial with exact rational coefficients. Terms are kept sorted in
// increasing graded-lex order with no zero coefficients, so equality is
// structural.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Rational& c);
  explicit Poly(long c) : Poly(Rational(c)) {}
  static Poly var(int v);
  static Poly monomial(const Monomial& m, const Rational& c);
  // Takes arbitrary terms and brings them to canonical form.
  static Poly from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  Rational constant_term() const;
  bool is_constant() const;
  bool is_homogeneous() const;
  // Internal degree (2 per variable) of a homogeneous nonzero polynomial.
  int degree() const;
  int max_exponent(int v) const;
  bool involves(int v) const { return max_exponent(v) > 0; }

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly derivative(int v) const;
  Poly substitute_zero(int v) const;
  Poly substitute(int v, const Poly& value) const;
  // coefficients[k] is the coefficient of v^k, free of v.
  std::vector<Poly> split_by_var(int v) const;
  // Applies fn to every term, keeping the monomial and replacing the coefficient.
  Poly map_coefficients(const std::function<Rational(const Monomial&, const Rational&)>& fn) const;

  std::string to_string(const std::vector<std::string>& names = {}) const;
  // Canonical machine format: "c:e0.e1...;c:..." with sparse exponents "v^k".
  std::string serialize() const;
  static Poly deserialize(const std::string& s);

 private:
  std::vector<Term> terms_;
};

Poly pow(const Poly& p, int k);

// Exact quotient f/g; throws NotDivisible when g does not divide f.
Poly divide_exact(const Poly& f, const Poly& g);

// The operator d/d(x^a): write f in the basis x^beta (beta < a) over k[x^a] and
// differentiate formally with respect to x^a.
Poly div_without_remainder(const Poly& f, int x, int a);

// Sum_{k=0}^{N} y^k x^{N-k}, i.e. (y^{N+1} - x^{N+1}) / (y - x).
Poly geometric_quotient(int y, int x, int N);

// u1, u2 with u1*(y1+y2-x1-x2) + u2*(y1*y2-x1*x2) = y1^{N+1}+y2^{N+1}-x1^{N+1}-x2^{N+1},
// both invariant under swapping the x's with the y's.
std::pair<Poly, Poly> symmetric_decompose(int N, int x1, int x2, int y1, int y2);

std::string rational_to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

}  // namespace kr
