#include "kr/krbasic.hpp"

#include <map>
#include <mutex>

namespace kr {

namespace {

Poly zeroed(Poly p, const std::vector<int>& zero) {
  for (int v : zero) p = p.substitute_zero(v);
  return p;
}

}  // namespace

CrossingData make_crossing_data(int N, CrossingVars vars, const std::vector<int>& zero) {
  if (N < 1) throw Error("crossing data needs N >= 1");
  const int c = N + 1;
  CrossingData cd;
  cd.N = N;
  cd.vars = vars;
  const Poly X1 = Poly::var(vars.x1), X2 = Poly::var(vars.x2);
  const Poly Y1 = Poly::var(vars.y1), Y2 = Poly::var(vars.y2);
  const Rational half(1, 2);

  cd.t1 = Y1 - X1;
  cd.t2 = Y2 - X2;
  cd.s1 = Y1 + Y2 - X1 - X2;
  cd.s2 = Y1 * Y2 - X1 * X2;
  cd.w1 = geometric_quotient(vars.y1, vars.x1, N);
  cd.w2 = geometric_quotient(vars.y2, vars.x2, N);
  std::tie(cd.u1, cd.u2) = symmetric_decompose(N, vars.x1, vars.x2, vars.y1, vars.y2);
  cd.a2 = half * cd.u2 + divide_exact(cd.u1 + Y1 * cd.u2 - cd.w2, X1 - Y1);
  cd.gamma = cd.u1.derivative(vars.y1) - cd.u1.derivative(vars.y2) -
             half * (cd.u2.derivative(vars.y2) * (X2 + Y2)) + half * (cd.u2.derivative(vars.y1) * (X1 + Y1));

  auto z = [&](const Poly& p) { return zeroed(p, zero); };
  cd.circ = make_koszul({{z(cd.w1), z(cd.t1)}, {z(cd.w2), z(cd.t2)}}, c);
  cd.bul = make_koszul({{z(cd.u1), z(cd.s1)}, {z(cd.u2), z(cd.s2)}}, c);

  // Basis 1, theta1, theta2, theta1 theta2; columns are images.
  const Poly diff = half * (X1 + Y1 - X2 - Y2);
  PolyMatrix chi1(4, 4);
  chi1(0, 0) = Poly(1);
  chi1(3, 0) = z(-cd.a2);
  chi1(1, 1) = Poly(1);
  chi1(2, 1) = Poly(1);
  chi1(1, 2) = z(half * (X2 + Y2));
  chi1(2, 2) = z(half * (X1 + Y1));
  chi1(3, 3) = z(diff);
  cd.chi1 = MFMorphism{chi1, 0, 0};

  PolyMatrix chi0(4, 4);
  chi0(0, 0) = z(diff);
  chi0(3, 0) = z(cd.a2);
  chi0(1, 1) = z(half * (X1 + Y1));
  chi0(2, 1) = Poly(-1);
  chi0(1, 2) = z(-half * (X2 + Y2));
  chi0(2, 2) = Poly(1);
  chi0(3, 3) = Poly(1);
  cd.chi0 = MFMorphism{chi0, 2, 0};
  return cd;
}

std::shared_ptr<const CrossingData> crossing_data_cached(int N) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const CrossingData>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[N];
  if (!slot) slot = std::make_shared<const CrossingData>(make_crossing_data(N));
  return slot;
}

Poly omega_p(int p, const Poly& f, CrossingVars vars) {
  if (p < 1) throw Error("omega_p needs p >= 1");
  // In the coordinates t_i = y_i - x_i (stored in the y slots) the operator
  // p + sum t_i d/dt_i is diagonal on monomials.
  Poly g = f.substitute(vars.y1, Poly::var(vars.x1) + Poly::var(vars.y1))
               .substitute(vars.y2, Poly::var(vars.x2) + Poly::var(vars.y2));
  g = g.map_coefficients([&](const Monomial& m, const Rational& c) {
    return c / Rational(p + m.exp[vars.y1] + m.exp[vars.y2]);
  });
  return g.substitute(vars.y1, Poly::var(vars.y1) - Poly::var(vars.x1))
      .substitute(vars.y2, Poly::var(vars.y2) - Poly::var(vars.x2));
}

GradedMF make_identity_mf(int x, int y, int N, const std::vector<int>& zero) {
  if (x == y) throw Error("identity defect needs distinct variables");
  return make_koszul({{zeroed(geometric_quotient(y, x, N), zero), zeroed(Poly::var(y) - Poly::var(x), zero)}},
                     N + 1);
}

int resolution_qshift(CrossingKind kind, int state, int N) {
  if (kind == CrossingKind::Over) return state == 0 ? 1 - N : -N;
  return state == 0 ? N : N - 1;
}

int resolution_t(CrossingKind kind, int state) { return kind == CrossingKind::Over ? state : state - 1; }

bool resolution_is_smooth(CrossingKind kind, int state) { return (state == 0) == (kind == CrossingKind::Over); }

CrossingComplex make_crossing_complex(CrossingKind kind, int N, CrossingVars vars) {
  CrossingData cd = make_crossing_data(N, vars);
  CrossingComplex cc;
  cc.kind = kind;
  for (int s = 0; s < 2; ++s) {
    bool smooth = resolution_is_smooth(kind, s);
    // The bare singular factorisation X• carries one more unit of shift than
    // the X•{-1} used in state webs.
    int shift = resolution_qshift(kind, s, N) - (smooth ? 0 : 1);
    cc.terms[s] = CrossingTerm{(smooth ? cd.circ : cd.bul).shifted(shift), shift, resolution_t(kind, s)};
  }
  cc.map = kind == CrossingKind::Over ? cd.chi0 : cd.chi1;
  // Between the shifted terms the map has internal degree 0.
  cc.map.degree = 0;
  return cc;
}

}  // namespace kr
