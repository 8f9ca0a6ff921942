#pragma once

#include "kr/poly.hpp"

#include <functional>
#include <map>
#include <vector>

namespace kr {

// Internal Z-degree and Z2-degree of a generator.
struct Bidegree {
  int deg = 0;
  int par = 0;
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
  friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

using BigradedSpace = std::vector<Bidegree>;

// Dimension of each bidegree.
std::map<Bidegree, int> dimensions(const BigradedSpace& space);

struct NotAComplex : Error {
  using Error::Error;
};
struct NotIdempotent : Error {
  using Error::Error;
};
struct RankMismatch : Error {
  using Error::Error;
};
struct BoundTooSmall : Error {
  using Error::Error;
};

// Dense matrix over Q.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}
  static QMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }

  bool is_zero() const;
  QMatrix transpose() const;
  QMatrix select_rows(const std::vector<int>& rows) const;
  QMatrix select_cols(const std::vector<int>& cols) const;
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator*(const Rational& s, QMatrix a);
  friend bool operator==(const QMatrix& a, const QMatrix& b);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

// Rank by fraction-free (Bareiss) elimination over the integers.
int rank(const QMatrix& m);
// Columns of m, scanned in order, that are independent of the earlier ones.
std::vector<int> independent_columns(const QMatrix& m);
// Basis of the right kernel, as the columns of the returned matrix.
QMatrix nullspace(const QMatrix& m);
QMatrix inverse(const QMatrix& m);
// Minimal polynomial of a square matrix, low degree first and monic.
std::vector<Rational> minimal_polynomial(const QMatrix& m);

// Dense matrix of polynomials.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}
  static PolyMatrix identity(int n);
  static PolyMatrix scalar(int n, const Poly& p);
  static PolyMatrix from_q(const QMatrix& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Poly& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  const Poly& operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }

  bool is_zero() const;
  std::size_t nonzeros() const;
  // Constant terms, i.e. the evaluation at all variables = 0.
  QMatrix constant_part() const;
  PolyMatrix select_rows(const std::vector<int>& rows) const;
  PolyMatrix select_cols(const std::vector<int>& cols) const;
  PolyMatrix transpose() const;
  PolyMatrix map(const std::function<Poly(const Poly&)>& fn) const;

  PolyMatrix& operator+=(const PolyMatrix& o);
  PolyMatrix& operator-=(const PolyMatrix& o);
  PolyMatrix& operator*=(const Rational& s);
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
  friend PolyMatrix operator*(const Rational& s, PolyMatrix a) { return a *= s; }
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b);

  // Kronecker product A (x) B with the row/column index a*|B| + b.
  friend PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Poly> data_;
};

// Checks that entry (i, j) of a map of the given internal degree between free
// graded modules has internal degree col[j] + map_degree - row[i].
bool is_homogeneous_map(const PolyMatrix& m, const BigradedSpace& rows, const BigradedSpace& cols,
                        int map_degree);

// Cohomology of a 2-periodic complex over Q given by a differential d on a
// bigraded space (d maps degree j to j + c and flips the Z2-degree).
struct Cohomology {
  BigradedSpace space;
  // Columns are cycles representing the cohomology basis.
  QMatrix section;
  // Rows map a cycle to its coordinates in the cohomology basis.
  QMatrix projection;
};
Cohomology cohomology_bigraded(const QMatrix& d, const BigradedSpace& gens);

// Inverse of a square polynomial matrix whose constant part is invertible and
// whose positive-degree part is nilpotent (the graded degree-0 case).
PolyMatrix graded_inverse(const PolyMatrix& m);

struct Splitting {
  BigradedSpace gens;  // generators of the image, taken from the source basis
  std::vector<int> columns;
  PolyMatrix f;  // projection onto the image
  PolyMatrix g;  // inclusion of the image
};
// Splits a strict degree-0 idempotent e on a free graded module via graded
// Nakayama column selection.
Splitting split_idempotent_graded(const PolyMatrix& e, const BigradedSpace& gens,
                                  bool verify = true);

// H(e) for a chain endomorphism e of a 2-periodic complex over Q; verifies
// H(e)^2 = H(e) and returns the bidegrees of its image.
BigradedSpace split_idempotent_on_cohomology(const QMatrix& e, const QMatrix& d,
                                             const BigradedSpace& gens);

// Brute-force cohomology of a factorisation of zero over Q[x_0..x_{nvars-1}]
// restricted to internal degrees in [lo, hi]. The differential has degree c.
std::map<Bidegree, int> degreewise_cohomology_oracle(const PolyMatrix& d,
                                                     const BigradedSpace& gens, int c, int nvars,
                                                     int lo, int hi);

}  // namespace kr
