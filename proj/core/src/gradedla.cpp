#include "kr/gradedla.hpp"

#include <algorithm>
#include <numeric>

namespace kr {

std::map<Bidegree, int> dimensions(const BigradedSpace& space) {
  std::map<Bidegree, int> out;
  for (const auto& b : space) ++out[b];
  return out;
}

// ---------------------------------------------------------------------------
// QMatrix

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::select_rows(const std::vector<int>& rows) const {
  QMatrix out(static_cast<int>(rows.size()), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols_; ++j) out(int(i), j) = (*this)(rows[i], j);
  return out;
}

QMatrix QMatrix::select_cols(const std::vector<int>& cols) const {
  QMatrix out(rows_, static_cast<int>(cols.size()));
  for (int i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, int(j)) = (*this)(i, cols[j]);
  return out;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw Error("QMatrix product: shape mismatch");
  QMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int l = 0; l < a.cols_; ++l) {
      const Rational& x = a(i, l);
      if (x == 0) continue;
      for (int j = 0; j < b.cols_; ++j)
        if (b(l, j) != 0) c(i, j) += x * b(l, j);
    }
  return c;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  QMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  QMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

QMatrix operator*(const Rational& s, QMatrix a) {
  for (auto& x : a.data_) x *= s;
  return a;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

namespace {

// Reduced row echelon form in place; returns the pivot columns.
std::vector<int> rref(QMatrix& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (int j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (int j = c; j < m.cols(); ++j)
        if (m(r, j) != 0) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(const QMatrix& m) {
  const int R = m.rows(), C = m.cols();
  if (R == 0 || C == 0) return 0;
  // Clear denominators row by row, then eliminate without fractions.
  std::vector<mpz_class> a(std::size_t(R) * C);
  for (int i = 0; i < R; ++i) {
    mpz_class l = 1;
    for (int j = 0; j < C; ++j) {
      mpz_class den = m(i, j).get_den();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
    }
    for (int j = 0; j < C; ++j) a[std::size_t(i) * C + j] = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  auto at = [&](int i, int j) -> mpz_class& { return a[std::size_t(i) * C + j]; };
  mpz_class prev = 1;
  int r = 0;
  for (int c = 0; c < C && r < R; ++c) {
    int p = -1;
    for (int i = r; i < R; ++i)
      if (at(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < C; ++j) std::swap(at(p, j), at(r, j));
    for (int i = r + 1; i < R; ++i) {
      for (int j = c + 1; j < C; ++j) {
        mpz_class v = at(r, c) * at(i, j) - at(i, c) * at(r, j);
        mpz_divexact(at(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, c) = 0;
    }
    prev = at(r, c);
    ++r;
  }
  return r;
}

std::vector<int> independent_columns(const QMatrix& m) {
  QMatrix w = m;
  return rref(w);
}

QMatrix nullspace(const QMatrix& m) {
  QMatrix w = m;
  auto piv = rref(w);
  std::vector<char> is_pivot(m.cols(), 0);
  for (int p : piv) is_pivot[p] = 1;
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  QMatrix k(m.cols(), static_cast<int>(free_cols.size()));
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    int fc = free_cols[f];
    k(fc, int(f)) = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) k(piv[r], int(f)) = -w(int(r), fc);
  }
  return k;
}

QMatrix inverse(const QMatrix& m) {
  const int n = m.rows();
  if (m.cols() != n) throw Error("inverse of non-square matrix");
  QMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref(aug);
  if (static_cast<int>(piv.size()) < n || (n > 0 && piv[n - 1] != n - 1))
    throw Error("matrix is singular");
  QMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::vector<Rational> minimal_polynomial(const QMatrix& m) {
  const int n = m.rows();
  // Krylov sequence I, m, m^2, ... of flattened matrices; the first linear
  // dependency gives the minimal polynomial.
  struct Reduced {
    int pivot;
    std::vector<Rational> vec;
    std::vector<Rational> combo;
  };
  std::vector<Reduced> basis;
  QMatrix power = QMatrix::identity(n);
  for (int k = 0;; ++k) {
    std::vector<Rational> v(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v[std::size_t(i) * n + j] = power(i, j);
    std::vector<Rational> combo(k + 1);
    combo[k] = 1;
    for (const auto& b : basis) {
      if (v[b.pivot] == 0) continue;
      Rational f = v[b.pivot] / b.vec[b.pivot];
      for (std::size_t t = 0; t < v.size(); ++t)
        if (b.vec[t] != 0) v[t] -= f * b.vec[t];
      for (std::size_t t = 0; t < b.combo.size(); ++t) combo[t] -= f * b.combo[t];
    }
    auto it = std::find_if(v.begin(), v.end(), [](const Rational& q) { return q != 0; });
    if (it == v.end()) return combo;
    basis.push_back(Reduced{static_cast<int>(it - v.begin()), std::move(v), std::move(combo)});
    power = power * m;
  }
}

// ---------------------------------------------------------------------------
// PolyMatrix

PolyMatrix PolyMatrix::identity(int n) { return scalar(n, Poly(1)); }

PolyMatrix PolyMatrix::scalar(int n, const Poly& p) {
  PolyMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = p;
  return m;
}

PolyMatrix PolyMatrix::from_q(const QMatrix& q) {
  PolyMatrix m(q.rows(), q.cols());
  for (int i = 0; i < q.rows(); ++i)
    for (int j = 0; j < q.cols(); ++j)
      if (q(i, j) != 0) m(i, j) = Poly(q(i, j));
  return m;
}

bool PolyMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Poly& p) { return p.is_zero(); });
}

std::size_t PolyMatrix::nonzeros() const {
  return std::count_if(data_.begin(), data_.end(), [](const Poly& p) { return !p.is_zero(); });
}

QMatrix PolyMatrix::constant_part() const {
  QMatrix q(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) q(i, j) = (*this)(i, j).constant_term();
  return q;
}

PolyMatrix PolyMatrix::select_rows(const std::vector<int>& rows) const {
  PolyMatrix out(static_cast<int>(rows.size()), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols_; ++j) out(int(i), j) = (*this)(rows[i], j);
  return out;
}

PolyMatrix PolyMatrix::select_cols(const std::vector<int>& cols) const {
  PolyMatrix out(rows_, static_cast<int>(cols.size()));
  for (int i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, int(j)) = (*this)(i, cols[j]);
  return out;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

PolyMatrix PolyMatrix::map(const std::function<Poly(const Poly&)>& fn) const {
  PolyMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!data_[i].is_zero()) out.data_[i] = fn(data_[i]);
  return out;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("PolyMatrix sum: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("PolyMatrix difference: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

PolyMatrix& PolyMatrix::operator*=(const Rational& s) {
  for (auto& p : data_) p *= s;
  return *this;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_) throw Error("PolyMatrix product: shape mismatch");
  PolyMatrix c(a.rows_, b.cols_);
  // Sparse row structure of b.
  std::vector<std::vector<int>> bcols(b.rows_);
  for (int l = 0; l < b.rows_; ++l)
    for (int j = 0; j < b.cols_; ++j)
      if (!b(l, j).is_zero()) bcols[l].push_back(j);
  std::vector<std::vector<Term>> acc(b.cols_);
  std::vector<int> touched;
  for (int i = 0; i < a.rows_; ++i) {
    touched.clear();
    for (int l = 0; l < a.cols_; ++l) {
      const Poly& x = a(i, l);
      if (x.is_zero()) continue;
      for (int j : bcols[l]) {
        auto& bucket = acc[j];
        if (bucket.empty()) touched.push_back(j);
        for (const auto& s : x.terms())
          for (const auto& t : b(l, j).terms()) bucket.push_back(Term{s.mono * t.mono, s.coeff * t.coeff});
      }
    }
    for (int j : touched) {
      c(i, j) = Poly::from_terms(std::move(acc[j]));
      acc[j].clear();
    }
  }
  return c;
}

bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix out(a.rows_ * b.rows_, a.cols_ * b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const Poly& x = a(i, k);
      if (x.is_zero()) continue;
      for (int r = 0; r < b.rows_; ++r)
        for (int s = 0; s < b.cols_; ++s) {
          const Poly& y = b(r, s);
          if (y.is_zero()) continue;
          out(i * b.rows_ + r, k * b.cols_ + s) = x.is_constant() && x.constant_term() == 1 ? y : x * y;
        }
    }
  return out;
}

bool is_homogeneous_map(const PolyMatrix& m, const BigradedSpace& rows, const BigradedSpace& cols,
                        int map_degree) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const Poly& p = m(i, j);
      if (p.is_zero()) continue;
      if (!p.is_homogeneous() || p.degree() != cols[j].deg + map_degree - rows[i].deg) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Cohomology

Cohomology cohomology_bigraded(const QMatrix& d, const BigradedSpace& gens) {
  const int n = static_cast<int>(gens.size());
  if (d.rows() != n || d.cols() != n) throw Error("cohomology: shape mismatch");
  if (!(d * d).is_zero()) throw NotAComplex("d^2 != 0");
  std::map<Bidegree, std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) blocks[gens[i]].push_back(i);

  std::vector<std::vector<Rational>> sec_cols;  // full-length section vectors
  std::vector<std::pair<std::vector<int>, std::vector<std::vector<Rational>>>> proj_rows;
  BigradedSpace hs;
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (const auto& [bd, idx] : blocks) {
    const int b = static_cast<int>(idx.size());
    QMatrix cycles = nullspace(d.select_cols(idx));  // b x z
    // Boundaries landing in this block: columns of d restricted to these rows.
    QMatrix into = d.select_rows(idx);  // b x n
    auto bcols = independent_columns(into);
    QMatrix bound = into.select_cols(bcols);  // b x r
    const int r = bound.cols();
    const int z = cycles.cols();
    if (z == r) continue;
    // Extend the boundary basis by cycles, then by unit vectors to a basis.
    QMatrix stacked(b, r + z + b);
    for (int i = 0; i < b; ++i) {
      for (int j = 0; j < r; ++j) stacked(i, j) = bound(i, j);
      for (int j = 0; j < z; ++j) stacked(i, r + j) = cycles(i, j);
      stacked(i, r + z + i) = 1;
    }
    auto basis_cols = independent_columns(stacked);
    std::vector<int> section_idx;
    for (int c : basis_cols)
      if (c >= r && c < r + z) section_idx.push_back(c);
    if (static_cast<int>(section_idx.size()) != z - r) throw Error("cohomology: inconsistent ranks");
    QMatrix full = stacked.select_cols(basis_cols);
    QMatrix inv = inverse(full);
    // Position of each section vector inside basis_cols.
    std::vector<std::vector<Rational>> rows_for_block;
    for (int c : section_idx) {
      int pos = static_cast<int>(std::find(basis_cols.begin(), basis_cols.end(), c) - basis_cols.begin());
      std::vector<Rational> row(b);
      for (int j = 0; j < b; ++j) row[j] = inv(pos, j);
      rows_for_block.push_back(std::move(row));
      std::vector<Rational> col(n);
      for (int i = 0; i < b; ++i) col[idx[i]] = stacked(i, c);
      sec_cols.push_back(std::move(col));
      hs.push_back(bd);
    }
    proj_rows.emplace_back(idx, std::move(rows_for_block));
  }
  Cohomology h;
  h.space = hs;
  const int hdim = static_cast<int>(hs.size());
  h.section = QMatrix(n, hdim);
  for (int j = 0; j < hdim; ++j)
    for (int i = 0; i < n; ++i) h.section(i, j) = sec_cols[j][i];
  h.projection = QMatrix(hdim, n);
  int row = 0;
  for (auto& [idx, rows] : proj_rows)
    for (auto& rv : rows) {
      for (std::size_t j = 0; j < idx.size(); ++j) h.projection(row, idx[j]) = rv[j];
      ++row;
    }
  return h;
}

// ---------------------------------------------------------------------------
// Splitting

PolyMatrix graded_inverse(const PolyMatrix& m) {
  const int n = m.rows();
  QMatrix m0 = m.constant_part();
  PolyMatrix m0inv = PolyMatrix::from_q(inverse(m0));
  PolyMatrix plus = m.map([](const Poly& p) {
    std::vector<Term> t;
    for (const auto& term : p.terms())
      if (term.mono.total > 0) t.push_back(term);
    return Poly::from_terms(std::move(t));
  });
  PolyMatrix step = m0inv * plus;
  step *= Rational(-1);
  PolyMatrix term = m0inv;
  PolyMatrix total = m0inv;
  for (int k = 0; k <= n + 1; ++k) {
    term = step * term;
    if (term.is_zero()) return total;
    total += term;
  }
  throw Error("graded_inverse: positive part is not nilpotent");
}

Splitting split_idempotent_graded(const PolyMatrix& e, const BigradedSpace& gens, bool verify) {
  const int n = e.rows();
  if (verify && !(e * e == e)) throw NotIdempotent("e^2 != e");
  Splitting s;
  QMatrix e0 = e.constant_part();
  s.columns = independent_columns(e0);
  const int k = static_cast<int>(s.columns.size());
  for (int c : s.columns) s.gens.push_back(gens[c]);
  if (k == 0) {
    s.f = PolyMatrix(0, n);
    s.g = PolyMatrix(n, 0);
    return s;
  }
  s.g = e.select_cols(s.columns);
  QMatrix g0 = s.g.constant_part();
  auto rows = independent_columns(g0.transpose());
  if (static_cast<int>(rows.size()) != k) throw RankMismatch("graded column selection failed");
  PolyMatrix square = s.g.select_rows(rows);
  s.f = graded_inverse(square) * e.select_rows(rows);
  if (verify) {
    if (!(s.f * s.g == PolyMatrix::identity(k))) throw RankMismatch("f g != 1");
    if (!(s.g * s.f == e)) throw RankMismatch("g f != e");
  }
  return s;
}

BigradedSpace split_idempotent_on_cohomology(const QMatrix& e, const QMatrix& d,
                                             const BigradedSpace& gens) {
  if (!(e * d == d * e)) throw Error("split_idempotent_on_cohomology: e is not a chain map");
  Cohomology h = cohomology_bigraded(d, gens);
  QMatrix he = h.projection * e * h.section;
  if (!(he * he == he)) throw NotIdempotent("H(e) is not idempotent");
  auto cols = independent_columns(he);
  BigradedSpace out;
  for (int c : cols) out.push_back(h.space[c]);
  return out;
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

void monomials_of_degree(int nvars, int total, std::vector<Monomial>& out) {
  if (total < 0) return;
  Monomial m;
  std::function<void(int, int)> rec = [&](int v, int left) {
    if (v == nvars - 1) {
      m.exp[v] = left;
      m.total = total;
      out.push_back(m);
      m.exp[v] = 0;
      return;
    }
    for (int k = left; k >= 0; --k) {
      m.exp[v] = k;
      rec(v + 1, left - k);
    }
    m.exp[v] = 0;
  };
  if (nvars == 0) {
    if (total == 0) out.push_back(Monomial{});
    return;
  }
  rec(0, total);
}

}  // namespace

std::map<Bidegree, int> degreewise_cohomology_oracle(const PolyMatrix& d,
                                                     const BigradedSpace& gens, int c, int nvars,
                                                     int lo, int hi) {
  const int n = static_cast<int>(gens.size());
  // Basis of the slice in internal degree j and parity p: generator times monomial.
  auto slice = [&](int j, int p) {
    std::vector<std::pair<int, Monomial>> basis;
    for (int i = 0; i < n; ++i) {
      if (gens[i].par != p) continue;
      int rest = j - gens[i].deg;
      if (rest < 0 || rest % 2) continue;
      std::vector<Monomial> ms;
      monomials_of_degree(nvars, rest / 2, ms);
      for (auto& m : ms) basis.emplace_back(i, m);
    }
    return basis;
  };
  auto slice_map = [&](int j, int p) {
    auto src = slice(j, p);
    auto tgt = slice(j + c, 1 - p);
    std::map<std::pair<int, std::array<uint8_t, kMaxVars>>, int> index;
    for (std::size_t t = 0; t < tgt.size(); ++t) index[{tgt[t].first, tgt[t].second.exp}] = int(t);
    QMatrix m(static_cast<int>(tgt.size()), static_cast<int>(src.size()));
    for (std::size_t s = 0; s < src.size(); ++s) {
      auto [i, mono] = src[s];
      for (int r = 0; r < n; ++r)
        for (const auto& term : d(r, i).terms()) {
          auto it = index.find({r, (term.mono * mono).exp});
          if (it == index.end()) throw Error("oracle: differential is not homogeneous");
          m(it->second, int(s)) += term.coeff;
        }
    }
    return m;
  };
  std::map<Bidegree, int> out;
  for (int j = lo; j <= hi; ++j)
    for (int p = 0; p < 2; ++p) {
      QMatrix outgoing = slice_map(j, p);
      QMatrix incoming = slice_map(j - c, 1 - p);
      int h = outgoing.cols() - rank(outgoing) - rank(incoming);
      if (h) {
        if (j == lo || j == hi) throw BoundTooSmall("cohomology found at the degree bound");
        out[{j, p}] = h;
      }
    }
  return out;
}

}  // namespace kr
