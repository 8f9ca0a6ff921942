#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>

namespace kr {

// Exact rational number. Values whose numerator and denominator fit in 64 bits
// are kept inline and combined with 128-bit intermediates; anything larger is
// promoted to GMP. Results are demoted back whenever they fit, so each value
// has exactly one representation.
class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I v) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_unsigned_v<I> && sizeof(I) >= sizeof(int64_t)) {
      if (v > static_cast<uint64_t>(INT64_MAX)) {
        big_ = std::make_unique<mpq_class>(mpz_class(std::to_string(v)));
        return;
      }
    }
    n_ = static_cast<int64_t>(v);
  }
  Rational(int64_t num, int64_t den);
  explicit Rational(const mpq_class& q) { assign(q); }

  Rational(const Rational& o) : n_(o.n_), d_(o.d_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      n_ = o.n_;
      d_ = o.d_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;

  bool is_zero() const { return !big_ && n_ == 0; }
  int sign() const;
  mpq_class to_mpq() const;
  mpz_class get_num() const;
  mpz_class get_den() const;
  std::string to_string() const;
  static Rational from_string(const std::string& s);

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.to_string(); }

 private:
  void assign(const mpq_class& q);
  void assign128(__int128 num, __int128 den);

  int64_t n_ = 0;
  int64_t d_ = 1;
  std::unique_ptr<mpq_class> big_;
};

}  // namespace kr
