#include "kr/rational.hpp"

#include "kr/poly.hpp"

#include <climits>
#include <numeric>

namespace kr {

namespace {

using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    if ((a >> 64) == 0 && (b >> 64) == 0) return std::gcd(static_cast<uint64_t>(a), static_cast<uint64_t>(b));
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class mpz_from_u128(u128 v) {
  mpz_class hi = static_cast<unsigned long>(v >> 64);
  mpz_class lo = static_cast<unsigned long>(static_cast<uint64_t>(v));
  return (hi << 64) + lo;
}

bool fits64(const mpz_class& z) { return mpz_fits_slong_p(z.get_mpz_t()) && z != LONG_MIN; }

}  // namespace

Rational::Rational(int64_t num, int64_t den) {
  if (den == 0) throw Error("rational with zero denominator");
  assign128(num, den);
}

void Rational::assign(const mpq_class& q) {
  if (fits64(q.get_num()) && fits64(q.get_den())) {
    n_ = q.get_num().get_si();
    d_ = q.get_den().get_si();
    big_.reset();
  } else {
    big_ = std::make_unique<mpq_class>(q);
    n_ = 0;
    d_ = 1;
  }
}

void Rational::assign128(__int128 num, __int128 den) {
  if (num == 0) {
    n_ = 0;
    d_ = 1;
    big_.reset();
    return;
  }
  bool neg = (num < 0) != (den < 0);
  u128 a = num < 0 ? -static_cast<u128>(num) : static_cast<u128>(num);
  u128 b = den < 0 ? -static_cast<u128>(den) : static_cast<u128>(den);
  u128 g = gcd128(a, b);
  if (g > 1) {
    a /= g;
    b /= g;
  }
  constexpr u128 limit = static_cast<u128>(INT64_MAX);
  if (a <= limit && b <= limit) {
    n_ = neg ? -static_cast<int64_t>(a) : static_cast<int64_t>(a);
    d_ = static_cast<int64_t>(b);
    big_.reset();
    return;
  }
  mpz_class za = mpz_from_u128(a);
  if (neg) za = -za;
  big_ = std::make_unique<mpq_class>(za, mpz_from_u128(b));
  n_ = 0;
  d_ = 1;
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (n_ > 0) - (n_ < 0);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(n_)), mpz_class(static_cast<long>(d_)));
}

mpz_class Rational::get_num() const { return big_ ? mpz_class(big_->get_num()) : mpz_class(static_cast<long>(n_)); }
mpz_class Rational::get_den() const { return big_ ? mpz_class(big_->get_den()) : mpz_class(static_cast<long>(d_)); }

std::string Rational::to_string() const {
  if (!big_) return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
  if (big_->get_den() == 1) return big_->get_num().get_str();
  return big_->get_num().get_str() + "/" + big_->get_den().get_str();
}

Rational Rational::from_string(const std::string& s) {
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) throw Error("bad rational '" + s + "'");
  q.canonicalize();
  return Rational(q);
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (d_ == 1 && o.d_ == 1) {
      assign128(static_cast<__int128>(n_) + o.n_, 1);
    } else {
      assign128(static_cast<__int128>(n_) * o.d_ + static_cast<__int128>(o.n_) * d_,
                static_cast<__int128>(d_) * o.d_);
    }
    return *this;
  }
  assign(to_mpq() + o.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  if (!big_ && !o.big_) {
    assign128(static_cast<__int128>(n_) * o.d_ - static_cast<__int128>(o.n_) * d_, static_cast<__int128>(d_) * o.d_);
    return *this;
  }
  assign(to_mpq() - o.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    assign128(static_cast<__int128>(n_) * o.n_, static_cast<__int128>(d_) * o.d_);
    return *this;
  }
  assign(to_mpq() * o.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error("division by zero");
  if (!big_ && !o.big_) {
    assign128(static_cast<__int128>(n_) * o.d_, static_cast<__int128>(d_) * o.n_);
    return *this;
  }
  assign(to_mpq() / o.to_mpq());
  return *this;
}

Rational operator-(const Rational& a) {
  Rational r;
  if (a.big_)
    r.assign(-*a.big_);
  else
    r.n_ = -a.n_, r.d_ = a.d_;
  return r;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
  if (!a.big_ || !b.big_) return false;
  return *a.big_ == *b.big_;
}

bool operator<(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return static_cast<__int128>(a.n_) * b.d_ < static_cast<__int128>(b.n_) * a.d_;
  return a.to_mpq() < b.to_mpq();
}

}  // namespace kr
