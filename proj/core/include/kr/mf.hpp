#pragma once

#include "kr/gradedla.hpp"

#include <optional>
#include <vector>

namespace kr {

struct DegreeMismatch : Error {
  using Error::Error;
};
struct PotentialMismatch : Error {
  using Error::Error;
};

// A graded matrix factorisation: a free module with generators in the given
// bidegrees and an odd differential of internal degree c with d^2 = W.
struct GradedMF {
  BigradedSpace gens;
  PolyMatrix d;
  Poly W;
  int c = 0;

  int rank() const { return static_cast<int>(gens.size()); }
  bool squares_to_potential() const;
  bool is_homogeneous() const { return is_homogeneous_map(d, gens, gens, c); }
  // Throws PotentialMismatch or DegreeMismatch.
  void check() const;

  // M{m}: every generator moves up by m.
  GradedMF shifted(int m) const;
  // X<1>: parities swapped and d replaced by -d.
  GradedMF suspended() const;
  // The dual factorisation (-(d^1)^T, (d^0)^T) of -W, degrees negated.
  GradedMF dual() const;
};

// A homogeneous morphism between factorisations. Odd morphisms anticommute
// with the differentials.
struct MFMorphism {
  PolyMatrix matrix;
  int degree = 0;
  int z2 = 0;
};
bool is_chain_map(const GradedMF& source, const GradedMF& target, const MFMorphism& phi);

struct KoszulPair {
  Poly a;
  Poly b;
};

// Koszul factorisation {a, b} = {a_1, b_1} (x) ... (x) {a_n, b_n}. The basis is
// indexed by subsets S of {0..n-1} in bitmask order; theta_i sits in internal
// degree c - deg(a_i) and odd parity.
GradedMF make_koszul(const std::vector<KoszulPair>& pairs, int c);

// X (x) Y with row/column index i*rank(Y) + j; the 1 (x) d_Y part carries the
// sign (-1)^{|x|}.
GradedMF tensor(const GradedMF& X, const GradedMF& Y);

// A (x) 1_m, exploiting the identity factor.
PolyMatrix kron_identity_right(const PolyMatrix& a, int m);

// Explicit isomorphisms between Koszul factorisations.
struct KoszulIsos {
  // dual({a,b}) -> {-b, a}
  PolyMatrix dual_iso;
  // {-b, a} -> {-a, b}<n>{sum deg a_i - n c}, basis element S goes to its complement
  PolyMatrix complement_iso;
  int complement_shift = 0;
  // {a, b} -> {-a, -b}, theta_i -> -theta_i
  PolyMatrix negation;
  // {a, b} -> the same pairs with theta acting from the right, i.e. the
  // folding of the Z-graded Koszul complex; sign (-1)^{i(i+1)/2} on C^i.
  PolyMatrix folding;
};
KoszulIsos koszul_isos(const std::vector<KoszulPair>& pairs, int c);

// Koszul factorisation with right-action signs (-1)^{#{k in S : k > i}}.
GradedMF make_koszul_right(const std::vector<KoszulPair>& pairs, int c);

// Sign of the folding map on the cohomological degree i.
int folding_sign(int i);

// Searches for a signed permutation matrix P with P(e_S) = +-e_{perm[S]} and
// P d1 = d2 P. Returns nothing if the supports or magnitudes disagree.
std::optional<PolyMatrix> signed_permutation_iso(const PolyMatrix& d1, const PolyMatrix& d2,
                                                 const std::vector<int>& perm);

}  // namespace kr
