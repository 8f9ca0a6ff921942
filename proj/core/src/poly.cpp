#include "kr/poly.hpp"

#include <algorithm>
#include <sstream>

namespace kr {

Monomial Monomial::var(int v, int32_t power) {
  if (v < 0 || v >= kMaxVars) throw Error("variable slot out of range");
  if (power < 0 || power > kMaxExponent) throw Error("exponent out of range");
  Monomial m;
  m.exp[v] = static_cast<uint8_t>(power);
  m.total = power;
  return m;
}

bool Monomial::divides(const Monomial& other) const {
  for (int i = 0; i < kMaxVars; ++i)
    if (exp[i] > other.exp[i]) return false;
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  uint8_t wrapped = 0;
  for (int i = 0; i < kMaxVars; ++i) {
    r.exp[i] = static_cast<uint8_t>(a.exp[i] + b.exp[i]);
    wrapped |= r.exp[i] < a.exp[i];
  }
  if (wrapped) throw Error("exponent overflow");
  r.total = a.total + b.total;
  return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.exp[i] = a.exp[i] - b.exp[i];
  r.total = a.total - b.total;
  return r;
}

bool operator<(const Monomial& a, const Monomial& b) {
  if (a.total != b.total) return a.total < b.total;
  return std::memcmp(a.exp.data(), b.exp.data(), kMaxVars) < 0;
}

namespace {

void canonicalize(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    Rational c = terms[i].coeff;
    while (j < terms.size() && terms[j].mono == terms[i].mono) c += terms[j++].coeff;
    if (c != 0) {
      terms[out].mono = terms[i].mono;
      terms[out].coeff = c;
      ++out;
    }
    i = j;
  }
  terms.resize(out);
}

// Merge two sorted term lists with b scaled by sign.
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, int sign) {
  std::vector<Term> r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono < b[j].mono)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono < a[i].mono) {
      r.push_back(b[j]);
      if (sign < 0) r.back().coeff = -r.back().coeff;
      ++j;
    } else {
      Rational c = sign > 0 ? Rational(a[i].coeff + b[j].coeff) : Rational(a[i].coeff - b[j].coeff);
      if (c != 0) r.push_back(Term{a[i].mono, c});
      ++i;
      ++j;
    }
  }
  return r;
}

}  // namespace

Poly::Poly(const Rational& c) {
  if (c != 0) terms_.push_back(Term{Monomial{}, c});
}

Poly Poly::var(int v) { return monomial(Monomial::var(v), Rational(1)); }

Poly Poly::monomial(const Monomial& m, const Rational& c) {
  Poly p;
  if (c != 0) p.terms_.push_back(Term{m, c});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  canonicalize(terms);
  Poly p;
  p.terms_ = std::move(terms);
  return p;
}

Rational Poly::constant_term() const {
  if (!terms_.empty() && terms_.front().mono.total == 0) return terms_.front().coeff;
  return Rational(0);
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().mono.total == 0);
}

bool Poly::is_homogeneous() const {
  return terms_.empty() || terms_.front().mono.total == terms_.back().mono.total;
}

int Poly::degree() const {
  if (terms_.empty()) throw Error("degree of zero polynomial");
  if (!is_homogeneous()) throw Error("polynomial is not homogeneous");
  return 2 * terms_.front().mono.total;
}

int Poly::max_exponent(int v) const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, int(t.mono.exp[v]));
  return m;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  terms_ = merge(terms_, o.terms_, 1);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge(terms_, o.terms_, -1);
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
  } else if (s != 1) {
    for (auto& t : terms_) t.coeff *= s;
  }
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) out.push_back(Term{s.mono * t.mono, s.coeff * t.coeff});
  if (a.terms_.size() == 1 || b.terms_.size() == 1) {
    // Multiplying by a single term preserves the order.
    Poly p;
    p.terms_ = std::move(out);
    return p;
  }
  return Poly::from_terms(std::move(out));
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff)
      return false;
  return true;
}

Poly Poly::derivative(int v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.mono.exp[v] == 0) continue;
    Term r{t.mono, t.coeff * t.mono.exp[v]};
    r.mono.exp[v] -= 1;
    r.mono.total -= 1;
    out.push_back(std::move(r));
  }
  return from_terms(std::move(out));
}

Poly Poly::substitute_zero(int v) const {
  Poly p;
  for (const auto& t : terms_)
    if (t.mono.exp[v] == 0) p.terms_.push_back(t);
  return p;
}

Poly Poly::substitute(int v, const Poly& value) const {
  auto parts = split_by_var(v);
  Poly result;
  Poly power(1);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!parts[k].is_zero()) result += parts[k] * power;
    if (k + 1 < parts.size()) power = power * value;
  }
  return result;
}

std::vector<Poly> Poly::split_by_var(int v) const {
  std::vector<std::vector<Term>> buckets(max_exponent(v) + 1);
  for (const auto& t : terms_) {
    Term r = t;
    r.mono.total -= r.mono.exp[v];
    r.mono.exp[v] = 0;
    buckets[t.mono.exp[v]].push_back(std::move(r));
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

Poly Poly::map_coefficients(
    const std::function<Rational(const Monomial&, const Rational&)>& fn) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Rational c = fn(t.mono, t.coeff);
    if (c != 0) out.push_back(Term{t.mono, c});
  }
  Poly p;
  p.terms_ = std::move(out);
  return p;
}

std::string rational_to_string(const Rational& q) { return q.to_string(); }

Rational rational_from_string(const std::string& s) {
  return Rational::from_string(s);
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    Rational c = it->coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool unit = c == 1 && it->mono.total > 0;
    if (!unit) os << rational_to_string(c);
    bool need_star = !unit;
    for (int v = 0; v < kMaxVars; ++v) {
      int e = it->mono.exp[v];
      if (e == 0) continue;
      if (need_star) os << "*";
      need_star = true;
      if (v < static_cast<int>(names.size()))
        os << names[v];
      else
        os << "x" << v;
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

std::string Poly::serialize() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << ";";
    os << rational_to_string(terms_[i].coeff) << ":";
    bool first = true;
    for (int v = 0; v < kMaxVars; ++v) {
      int e = terms_[i].mono.exp[v];
      if (!e) continue;
      if (!first) os << ".";
      first = false;
      os << v << "^" << e;
    }
  }
  return os.str();
}

Poly Poly::deserialize(const std::string& s) {
  std::vector<Term> terms;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find(';', pos);
    if (end == std::string::npos) end = s.size();
    std::string item = s.substr(pos, end - pos);
    std::size_t colon = item.find(':');
    if (colon == std::string::npos) throw Error("bad term '" + item + "'");
    Term t{Monomial{}, rational_from_string(item.substr(0, colon))};
    std::string mono = item.substr(colon + 1);
    std::size_t p = 0;
    while (p < mono.size()) {
      std::size_t q = mono.find('.', p);
      if (q == std::string::npos) q = mono.size();
      std::string factor = mono.substr(p, q - p);
      std::size_t caret = factor.find('^');
      if (caret == std::string::npos) throw Error("bad factor '" + factor + "'");
      int v = std::stoi(factor.substr(0, caret));
      int e = std::stoi(factor.substr(caret + 1));
      if (v < 0 || v >= kMaxVars || e < 0 || t.mono.exp[v] + e > kMaxExponent)
        throw Error("bad factor '" + factor + "'");
      t.mono.exp[v] += e;
      t.mono.total += e;
      p = q + 1;
    }
    terms.push_back(std::move(t));
    pos = end + 1;
  }
  return Poly::from_terms(std::move(terms));
}

Poly pow(const Poly& p, int k) {
  Poly r(1);
  Poly base = p;
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

Poly divide_exact(const Poly& f, const Poly& g) {
  if (g.is_zero()) throw Error("division by zero polynomial");
  const Term& lead = g.terms().back();
  std::vector<Term> quotient;
  Poly rem = f;
  while (!rem.is_zero()) {
    const Term& lt = rem.terms().back();
    if (!lead.mono.divides(lt.mono)) throw NotDivisible("polynomial is not divisible");
    Term q{lt.mono / lead.mono, lt.coeff / lead.coeff};
    rem -= Poly::monomial(q.mono, q.coeff) * g;
    quotient.push_back(std::move(q));
  }
  return Poly::from_terms(std::move(quotient));
}

Poly div_without_remainder(const Poly& f, int x, int a) {
  if (a <= 0) throw Error("div_without_remainder needs a positive exponent");
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    int e = t.mono.exp[x];
    int k = e / a;
    if (k == 0) continue;
    Term r{t.mono, t.coeff * k};
    r.mono.exp[x] -= a;
    r.mono.total -= a;
    out.push_back(std::move(r));
  }
  return Poly::from_terms(std::move(out));
}

Poly geometric_quotient(int y, int x, int N) {
  if (N < 1) throw Error("geometric_quotient needs N >= 1");
  std::vector<Term> out;
  for (int k = 0; k <= N; ++k) {
    Monomial m;
    m.exp[y] += k;
    m.exp[x] += N - k;
    m.total = N;
    out.push_back(Term{m, Rational(1)});
  }
  return Poly::from_terms(std::move(out));
}

namespace {

// (A^k - B^k) / (A - B)
Poly difference_quotient(const Poly& A, const Poly& B, int k) {
  Poly r;
  for (int j = 0; j < k; ++j) r += pow(A, j) * pow(B, k - 1 - j);
  return r;
}

}  // namespace

std::pair<Poly, Poly> symmetric_decompose(int N, int x1, int x2, int y1, int y2) {
  if (N < 1) throw Error("symmetric_decompose needs N >= 1");
  // Power sums in the elementary symmetric functions, p_k = e1 p_{k-1} - e2 p_{k-2},
  // stored as maps (i, j) -> coefficient of e1^i e2^j.
  using Coeffs = std::vector<std::pair<std::pair<int, int>, Rational>>;
  auto combine = [](Coeffs c) {
    std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Coeffs out;
    for (auto& kv : c) {
      if (!out.empty() && out.back().first == kv.first)
        out.back().second += kv.second;
      else
        out.push_back(kv);
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
  };
  std::vector<Coeffs> p(N + 2);
  p[0] = {{{0, 0}, Rational(2)}};
  p[1] = {{{1, 0}, Rational(1)}};
  for (int k = 2; k <= N + 1; ++k) {
    Coeffs c;
    for (auto& [ij, v] : p[k - 1]) c.push_back({{ij.first + 1, ij.second}, v});
    for (auto& [ij, v] : p[k - 2]) c.push_back({{ij.first, ij.second + 1}, -v});
    p[k] = combine(std::move(c));
  }
  Poly E1 = Poly::var(y1) + Poly::var(y2);
  Poly E2 = Poly::var(y1) * Poly::var(y2);
  Poly e1 = Poly::var(x1) + Poly::var(x2);
  Poly e2 = Poly::var(x1) * Poly::var(x2);
  // Two evaluation orders of the finite differences, averaged.
  Poly q1, q2, q1b, q2b;
  for (auto& [ij, c] : p[N + 1]) {
    auto [i, j] = ij;
    Poly d1 = difference_quotient(E1, e1, i);
    Poly d2 = difference_quotient(E2, e2, j);
    q1 += c * (d1 * pow(E2, j));
    q2 += c * (pow(e1, i) * d2);
    q1b += c * (d1 * pow(e2, j));
    q2b += c * (pow(E1, i) * d2);
  }
  Rational half(1, 2);
  return {half * (q1 + q1b), half * (q2 + q2b)};
}

}  // namespace kr
