#pragma once

#include "kr/mf.hpp"

#include <array>
#include <memory>
#include <vector>

namespace kr {

// Variable slots of a four-valent vertex: incoming x1, x2 and outgoing y1, y2.
// The smoothing joins x1 with y1 and x2 with y2.
struct CrossingVars {
  int x1 = 0, x2 = 1, y1 = 2, y2 = 3;
};

struct CrossingData {
  int N = 0;
  CrossingVars vars;
  Poly t1, t2, s1, s2;
  Poly w1, w2, u1, u2;
  Poly a2, gamma;
  GradedMF circ;  // {(w1, w2), (t1, t2)}
  GradedMF bul;   // {(u1, u2), (s1, s2)}
  MFMorphism chi0;  // circ -> bul, degree 2
  MFMorphism chi1;  // bul -> circ, degree 0
};

// Builds the crossing data over the given variable slots. Variables listed in
// `zero` are set to 0 in every matrix (reduced homology freezes one edge).
CrossingData make_crossing_data(int N, CrossingVars vars = {}, const std::vector<int>& zero = {});

// Thread-safe cached variant for the default slots 0..3, without zeroing.
std::shared_ptr<const CrossingData> crossing_data_cached(int N);

// Unique polynomial z with p z + sum_i dz/dy_i (y_i - x_i) = f.
Poly omega_p(int p, const Poly& f, CrossingVars vars = {});

// The identity defect {(y^{N+1} - x^{N+1})/(y - x), y - x}.
GradedMF make_identity_mf(int x, int y, int N, const std::vector<int>& zero = {});

// Over crossings resolve as X∘{1-N} -> X•{-N-1} via chi0 (X∘ in cohomological
// degree 0); under crossings as X•{N-1} -> X∘{N-1} via chi1 (X∘ in degree 0).
enum class CrossingKind { Over, Under };

struct CrossingTerm {
  GradedMF mf;     // with its internal shift applied
  int qshift = 0;  // the shift relative to the bare X∘ / X•
  int t = 0;       // cohomological degree
};

struct CrossingComplex {
  CrossingKind kind = CrossingKind::Over;
  std::array<CrossingTerm, 2> terms;
  MFMorphism map;
};

CrossingComplex make_crossing_complex(CrossingKind kind, int N, CrossingVars vars = {});

// Shift and cohomological degree of resolution `state` (0 or 1) when the
// singular vertex is decorated with X•{-1}, as in state webs.
int resolution_qshift(CrossingKind kind, int state, int N);
int resolution_t(CrossingKind kind, int state);
// The vertex of resolution `state` is the smooth one.
bool resolution_is_smooth(CrossingKind kind, int state);

}  // namespace kr
