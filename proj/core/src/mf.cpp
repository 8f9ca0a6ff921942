#include "kr/mf.hpp"

#include <bit>
#include <deque>

namespace kr {

bool GradedMF::squares_to_potential() const {
  return d * d == PolyMatrix::scalar(rank(), W);
}

void GradedMF::check() const {
  if (d.rows() != rank() || d.cols() != rank()) throw DegreeMismatch("differential has the wrong shape");
  if (!is_homogeneous()) throw DegreeMismatch("differential is not homogeneous of degree c");
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j)
      if (!d(i, j).is_zero() && gens[i].par == gens[j].par)
        throw DegreeMismatch("differential is not odd");
  if (!squares_to_potential()) throw PotentialMismatch("d^2 != W");
}

GradedMF GradedMF::shifted(int m) const {
  GradedMF out = *this;
  for (auto& g : out.gens) g.deg += m;
  return out;
}

GradedMF GradedMF::suspended() const {
  GradedMF out = *this;
  for (auto& g : out.gens) g.par ^= 1;
  out.d *= Rational(-1);
  return out;
}

GradedMF GradedMF::dual() const {
  GradedMF out;
  out.c = c;
  out.W = -W;
  out.gens = gens;
  for (auto& g : out.gens) g.deg = -g.deg;
  out.d = d.transpose();
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j)
      if (gens[j].par == 0 && !out.d(i, j).is_zero()) out.d(i, j) = -out.d(i, j);
  return out;
}

bool is_chain_map(const GradedMF& source, const GradedMF& target, const MFMorphism& phi) {
  if (phi.matrix.rows() != target.rank() || phi.matrix.cols() != source.rank()) return false;
  if (!is_homogeneous_map(phi.matrix, target.gens, source.gens, phi.degree)) return false;
  for (int i = 0; i < target.rank(); ++i)
    for (int j = 0; j < source.rank(); ++j)
      if (!phi.matrix(i, j).is_zero() && (target.gens[i].par ^ source.gens[j].par) != phi.z2) return false;
  PolyMatrix lhs = target.d * phi.matrix;
  PolyMatrix rhs = phi.matrix * source.d;
  if (phi.z2) rhs *= Rational(-1);
  return lhs == rhs;
}

namespace {

int theta_degree(const KoszulPair& p, int c) {
  auto check = [](const Poly& q) {
    if (!q.is_homogeneous()) throw DegreeMismatch("Koszul entry is not homogeneous");
  };
  check(p.a);
  check(p.b);
  if (!p.a.is_zero() && !p.b.is_zero() && p.a.degree() + p.b.degree() != 2 * c)
    throw DegreeMismatch("deg a + deg b != 2c");
  if (!p.a.is_zero()) return c - p.a.degree();
  if (!p.b.is_zero()) return p.b.degree() - c;
  return 0;
}

GradedMF koszul_impl(const std::vector<KoszulPair>& pairs, int c, bool right) {
  const int n = static_cast<int>(pairs.size());
  const int size = 1 << n;
  std::vector<int> tdeg(n);
  for (int i = 0; i < n; ++i) tdeg[i] = theta_degree(pairs[i], c);
  GradedMF X;
  X.c = c;
  X.gens.resize(size);
  X.d = PolyMatrix(size, size);
  for (int S = 0; S < size; ++S) {
    int deg = 0;
    for (int i = 0; i < n; ++i)
      if (S >> i & 1) deg += tdeg[i];
    X.gens[S] = {deg, std::popcount(unsigned(S)) & 1};
    for (int i = 0; i < n; ++i) {
      unsigned mask = right ? (~0u << (i + 1)) : ((1u << i) - 1);
      int sign = std::popcount(unsigned(S) & mask) & 1 ? -1 : 1;
      const Poly& entry = (S >> i & 1) ? pairs[i].b : pairs[i].a;
      if (entry.is_zero()) continue;
      X.d(S ^ (1 << i), S) += sign < 0 ? -entry : entry;
    }
  }
  for (const auto& p : pairs) X.W += p.a * p.b;
  return X;
}

}  // namespace

GradedMF make_koszul(const std::vector<KoszulPair>& pairs, int c) { return koszul_impl(pairs, c, false); }

GradedMF make_koszul_right(const std::vector<KoszulPair>& pairs, int c) {
  return koszul_impl(pairs, c, true);
}

GradedMF tensor(const GradedMF& X, const GradedMF& Y) {
  const int n = X.rank(), m = Y.rank();
  GradedMF T;
  bool xd = !X.d.is_zero(), yd = !Y.d.is_zero();
  if (xd && yd && X.c != Y.c) throw DegreeMismatch("tensor of factorisations with different c");
  T.c = xd ? X.c : Y.c;
  T.W = X.W + Y.W;
  T.gens.reserve(std::size_t(n) * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      T.gens.push_back({X.gens[i].deg + Y.gens[j].deg, X.gens[i].par ^ Y.gens[j].par});
  T.d = PolyMatrix(n * m, n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const int col = i * m + j;
      for (int k = 0; k < n; ++k)
        if (!X.d(k, i).is_zero()) T.d(k * m + j, col) += X.d(k, i);
      const bool odd = X.gens[i].par;
      for (int l = 0; l < m; ++l)
        if (!Y.d(l, j).is_zero()) T.d(i * m + l, col) += odd ? -Y.d(l, j) : Y.d(l, j);
    }
  return T;
}

PolyMatrix kron_identity_right(const PolyMatrix& a, int m) {
  PolyMatrix out(a.rows() * m, a.cols() * m);
  for (int k = 0; k < a.rows(); ++k)
    for (int i = 0; i < a.cols(); ++i) {
      const Poly& p = a(k, i);
      if (p.is_zero()) continue;
      for (int j = 0; j < m; ++j) out(k * m + j, i * m + j) = p;
    }
  return out;
}

std::optional<PolyMatrix> signed_permutation_iso(const PolyMatrix& d1, const PolyMatrix& d2,
                                                 const std::vector<int>& perm) {
  const int n = d1.rows();
  if (d2.rows() != n || static_cast<int>(perm.size()) != n) return std::nullopt;
  // sigma_T d1(T,S) = sigma_S d2(perm T, perm S) for every entry.
  std::vector<int> sigma(n, 0);
  for (int start = 0; start < n; ++start) {
    if (sigma[start]) continue;
    sigma[start] = 1;
    std::deque<int> queue{start};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w = 0; w < n; ++w) {
        // Entries in column v (w = T, v = S) and in row v (v = T, w = S).
        for (int pass = 0; pass < 2; ++pass) {
          int T = pass ? v : w, S = pass ? w : v;
          const Poly& a = d1(T, S);
          const Poly& b = d2(perm[T], perm[S]);
          if (a.is_zero() != b.is_zero()) return std::nullopt;
          if (a.is_zero()) continue;
          int rel;
          if (a == b)
            rel = 1;
          else if (a == -b)
            rel = -1;
          else
            return std::nullopt;
          // Either way round, sigma_w = rel * sigma_v.
          int want = rel * sigma[v];
          if (!sigma[w]) {
            sigma[w] = want;
            queue.push_back(w);
          } else if (sigma[w] != want) {
            return std::nullopt;
          }
        }
      }
    }
  }
  PolyMatrix P(n, n);
  for (int S = 0; S < n; ++S) P(perm[S], S) = Poly(sigma[S]);
  if (!(P * d1 == d2 * P)) return std::nullopt;
  return P;
}

int folding_sign(int i) {
  long t = static_cast<long>(i) * (i + 1) / 2;
  return (t % 2 == 0) ? 1 : -1;
}

KoszulIsos koszul_isos(const std::vector<KoszulPair>& pairs, int c) {
  const int n = static_cast<int>(pairs.size());
  const int size = 1 << n;
  GradedMF K = make_koszul(pairs, c);
  std::vector<KoszulPair> swapped, flipped;
  for (const auto& p : pairs) {
    swapped.push_back({-p.b, p.a});
    flipped.push_back({-p.a, p.b});
  }
  std::vector<int> ident(size), complement(size);
  for (int S = 0; S < size; ++S) {
    ident[S] = S;
    complement[S] = (size - 1) ^ S;
  }
  KoszulIsos isos;
  GradedMF Kdual = K.dual();
  GradedMF Kswap = make_koszul(swapped, c);
  auto dual = signed_permutation_iso(Kdual.d, Kswap.d, ident);
  if (!dual) throw Error("no sign-twisted dual isomorphism");
  isos.dual_iso = *dual;

  GradedMF target = make_koszul(flipped, c);
  for (int k = 0; k < n; ++k) target = target.suspended();
  auto comp = signed_permutation_iso(Kswap.d, target.d, complement);
  if (!comp) throw Error("no complement isomorphism");
  isos.complement_iso = *comp;
  for (const auto& p : pairs) isos.complement_shift += (p.a.is_zero() ? 2 * c - p.b.degree() : p.a.degree()) - c;

  isos.negation = PolyMatrix(size, size);
  for (int S = 0; S < size; ++S) isos.negation(S, S) = Poly(std::popcount(unsigned(S)) & 1 ? -1 : 1);

  isos.folding = PolyMatrix(size, size);
  for (int S = 0; S < size; ++S) isos.folding(S, S) = Poly(folding_sign(-std::popcount(unsigned(S))));
  return isos;
}

}  // namespace kr
