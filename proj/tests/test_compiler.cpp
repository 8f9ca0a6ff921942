#include "oracles.hpp"
#include "webs.hpp"

#include "kr/compiler.hpp"
#include "kr/krlink.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>

using namespace kr;
using testwebs::Dims;

namespace {

Poly X(int v) { return Poly::var(v); }

PolyMatrix one_entry(const Poly& p) {
  PolyMatrix m(1, 1);
  m(0, 0) = p;
  return m;
}

PolyMatrix q_matrix(std::initializer_list<std::initializer_list<int>> rows) {
  PolyMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows.begin()->size()));
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (int v : r) m(i, j++) = Poly(v);
    ++i;
  }
  return m;
}

// Brute-force cohomology of the uncompiled total factorisation.
Dims oracle_dims(const Web& w, int lo, int hi) {
  GradedMF T = total_mf(w);
  int nvars = 0;
  for (const auto& e : w.edges) nvars = std::max(nvars, e.var + 1);
  return degreewise_cohomology_oracle(T.d, T.gens, T.c, nvars, lo, hi);
}

std::vector<int> states_of(int mask, int n) {
  std::vector<int> s(n);
  for (int k = 0; k < n; ++k) s[k] = mask >> k & 1;
  return s;
}

}  // namespace

TEST_SUITE("compiler") {
  TEST_CASE("inflation examples") {
    CHECK(inflate(one_entry(X(0)), 0, 2) == q_matrix({{0, 0}, {1, 0}}));
    CHECK(inflate(one_entry(Poly(1)), 0, 3) == PolyMatrix::identity(3));
    CHECK(inflate(one_entry(X(0) * X(0)), 0, 2).is_zero());
    // Other variables ride along as coefficients.
    PolyMatrix m = inflate(one_entry(X(1) * X(0)), 0, 2);
    CHECK(m(1, 0) == X(1));
    CHECK(inflate_gens({{0, 1}}, 3) == BigradedSpace{{0, 1}, {2, 1}, {4, 1}});
  }

  TEST_CASE("commutator block examples") {
    CHECK(commutator_block(one_entry(X(0)), 0, 2) == q_matrix({{0, 1}, {0, 0}}));
    CHECK(commutator_block(one_entry(Poly(1)), 0, 2).is_zero());
    // x^3 with a = 2: 1 -> x, x -> 2x^2 = 0 in the quotient.
    CHECK(commutator_block(one_entry(pow(X(0), 3)), 0, 2) == q_matrix({{0, 0}, {1, 0}}));
    // The block agrees with div_without_remainder on every basis vector.
    for (int a = 1; a <= 4; ++a)
      for (int k = 0; k <= 2 * a; ++k) {
        PolyMatrix L = commutator_block(one_entry(pow(X(0), k)), 0, a);
        for (int b = 0; b < a; ++b) {
          Poly expect = div_without_remainder(pow(X(0), k + b), 0, a);
          for (int r = 0; r < a; ++r) {
            Poly coeff;
            for (const auto& t : expect.terms())
              if (t.mono[0] == r) coeff += Poly(t.coeff);
            CHECK(L(r, b) == coeff);
          }
        }
      }
  }

  TEST_CASE("spectral polynomial separates the eigenvalue 1") {
    // mu = z (z - 1/3)(z - 1)
    UPoly mu = {Rational(0), Rational(1, 3), Rational(-4, 3), Rational(1)};
    UPoly p = spectral_polynomial(mu);
    auto at = [&](const Rational& z) {
      Rational acc, pw(1);
      for (const auto& c : p) {
        acc += c * pw;
        pw *= z;
      }
      return acc;
    };
    CHECK(at(Rational(1)) == Rational(1));
    CHECK(at(Rational(0)) == Rational(0));
    CHECK(at(Rational(1, 3)) == Rational(0));
    CHECK(spectral_polynomial({Rational(-2), Rational(1)}).empty());
  }

  TEST_CASE("strictify examples") {
    PolyMatrix id = PolyMatrix::identity(3);
    CHECK(strictify(id) == id);
    PolyMatrix e(2, 2);
    e(0, 0) = Poly(1);
    e(0, 1) = X(0);
    CHECK(strictify(e) == e);

    // Degree-0 map on generators of degree 0, 2, 4 with a nilpotent defect.
    PolyMatrix f(3, 3);
    f(0, 0) = Poly(1);
    f(0, 1) = Poly(2) * X(0);
    f(0, 2) = Poly(5) * X(0) * X(0);
    f(1, 2) = Poly(3) * X(0);
    StrictifyStats st;
    PolyMatrix s = strictify(f, &st);
    CHECK(s * s == s);
    CHECK(st.lambek_iterations == 1);
    CHECK_FALSE(st.preconditioned);
    CHECK(s(0, 2) == Poly(11) * X(0) * X(0));

    // Constant part with eigenvalues 1, 1/3, 0 needs the spectral step.
    PolyMatrix g(3, 3);
    g(0, 0) = Poly(1);
    g(1, 1) = Poly(Rational(1, 3));
    StrictifyStats st2;
    PolyMatrix t = strictify(g, &st2);
    CHECK(st2.preconditioned);
    CHECK(t * t == t);
    CHECK(t(0, 0) == Poly(1));
    CHECK(t(1, 1).is_zero());
  }

  TEST_CASE("evaluate matches Horner on random matrices") {
    std::mt19937 rng(21);
    for (int deg = 0; deg <= 12; ++deg) {
      PolyMatrix m(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = oracle::random_poly(rng, 1, 1, 1, false);
      UPoly p;
      for (int k = 0; k <= deg; ++k) p.push_back(Rational(k % 3 - 1, 1 + k % 2));
      PolyMatrix horner(3, 3);
      for (int k = deg; k >= 0; --k) horner = horner * m + PolyMatrix::scalar(3, Poly(p[k]));
      CHECK(evaluate(p, m) == horner);
    }
  }

  TEST_CASE("compile_step on two glued identity defects") {
    for (int N = 2; N <= 4; ++N) {
      GradedMF I1 = make_identity_mf(0, 1, N), I2 = make_identity_mf(1, 2, N);
      GradedMF XX = tensor(I1, I2);
      PolyMatrix lam = I1.d.map([&](const Poly& p) { return p.derivative(1); });
      lam *= Rational(1, N + 1);
      lam = kron_identity_right(lam, I2.rank());
      // lambda d + d lambda = x^N on the glued factorisation.
      CHECK(lam * XX.d + XX.d * lam == PolyMatrix::scalar(4, pow(X(1), N)));
      StepResult r = compile_step(XX, 1, lam, N);
      CHECK(r.mf.rank() == 2);
      CHECK(r.mf.W == pow(X(2), N + 1) - pow(X(0), N + 1));
      CHECK(r.mf.squares_to_potential());
      CHECK(r.f * r.g == PolyMatrix::identity(2));
      // Shift per eliminated variable is c - 2N = 1 - N, with parity flipped.
      GradedMF I = make_identity_mf(0, 2, N);
      CHECK(dimensions(r.mf.gens) == dimensions(I.gens));
      // Closed up with a defect from x2 back to x0 (after renaming x2 to x1),
      // the result has the cohomology of the circle web.
      GradedMF a = tensor(r.mf, make_identity_mf(2, 0, N));
      a.d = a.d.map([](const Poly& p) { return p.substitute(2, X(1)); });
      GradedMF b = total_mf(testwebs::circle(N));
      CHECK(degreewise_cohomology_oracle(a.d, a.gens, a.c, 2, -4 * N, 4 * N) ==
            degreewise_cohomology_oracle(b.d, b.gens, b.c, 2, -4 * N, 4 * N));
    }
  }

  TEST_CASE("open web compilation keeps the boundary potential") {
    Web w;
    w.N = 3;
    for (int i = 0; i < 3; ++i) w.add_edge(i);
    w.add_vertex(VertexKind::Identity, {0}, {1});
    w.add_vertex(VertexKind::Identity, {1}, {2});
    CompiledObject obj = compile_web(w);
    CHECK(obj.mf.rank() == 2);
    CHECK(obj.mf.W == pow(X(2), 4) - pow(X(0), 4));
    CHECK_NOTHROW(obj.mf.check());
    CHECK_THROWS(closed_cohomology(obj));
  }

  TEST_CASE("circle web gives the quantum integer in odd degree") {
    for (int N = 2; N <= 6; ++N) {
      Dims d = closed_dimensions(compile_web(testwebs::circle(N)));
      Dims expect;
      for (int k = 0; k < N; ++k) expect[{1 - N + 2 * k, 1}] = 1;
      CHECK(d == expect);
    }
  }

  TEST_CASE("compiled closed webs agree with the degreewise oracle") {
    for (int N = 2; N <= 3; ++N) {
      // Ranges are just wide enough to contain the answer; the oracle throws
      // if anything sits on a bound.
      CHECK(closed_dimensions(compile_web(testwebs::circle(N))) == oracle_dims(testwebs::circle(N), -N - 1, N + 1));
      CHECK(closed_dimensions(compile_web(testwebs::theta(N))) == oracle_dims(testwebs::theta(N), -2 * N, 2 * N));
    }
    // Both four-valent resolutions of the Hopf diagram, N = 2.
    LinkDiagram hopf = builtin_diagram("hopf_v1");
    for (int mask = 0; mask < 4; ++mask) {
      Web w = state_web_from_resolution(hopf.pd, states_of(mask, 2), 2);
      CHECK(closed_dimensions(compile_web(w)) == oracle_dims(w, -5, 5));
    }
  }

  TEST_CASE("direct whole-web compilation agrees with the stepwise pipeline") {
    for (int N = 2; N <= 3; ++N) {
      CHECK(compile_closed_web_direct(testwebs::circle(N)) == closed_dimensions(compile_web(testwebs::circle(N))));
      CHECK(compile_closed_web_direct(testwebs::theta(N)) == closed_dimensions(compile_web(testwebs::theta(N))));
    }
  }

  TEST_CASE("path independence on the trefoil state webs") {
    LinkDiagram trefoil = builtin_diagram("trefoil");
    for (int mask = 0; mask < 8; ++mask) {
      Web w = state_web_from_resolution(trefoil.pd, states_of(mask, 3), 2);
      std::vector<int> path(w.vertices.size());
      std::iota(path.begin(), path.end(), 0);
      Dims reference = closed_dimensions(compile_web(w));
      do {
        CompileOptions o;
        o.path = path;
        CHECK(closed_dimensions(compile_web(w, o)) == reference);
      } while (std::next_permutation(path.begin(), path.end()));
    }
    CompileOptions bad;
    bad.path = std::vector<int>{0, 0, 1};
    CHECK_THROWS(compile_web(state_web_from_resolution(trefoil.pd, {0, 0, 0}, 2), bad));
  }

  TEST_CASE("compiled morphisms") {
    // Identity at a vertex compiles to a map inducing the identity on cohomology.
    Web w = testwebs::theta(2);
    CompiledObject obj = compile_web(w);
    PolyMatrix M = compile_morphism(obj, obj, PolyMatrix::identity(w.vertices[0].mf.rank()), 0);
    Cohomology h = closed_cohomology(obj);
    QMatrix induced = h.projection * M.constant_part() * h.section;
    CHECK(induced == QMatrix::identity(static_cast<int>(h.space.size())));

    CompileOptions other;
    other.path = std::vector<int>{1, 0, 2};
    CompiledObject obj2 = compile_web(w, other);
    CHECK_THROWS_AS(compile_morphism(obj, obj2, PolyMatrix::identity(4), 0), PathMismatch);

    // Multiplication by an edge variable is nilpotent of order N on the circle.
    for (int N = 2; N <= 4; ++N) {
      CompiledObject c = compile_web(testwebs::circle(N));
      Cohomology hc = closed_cohomology(c);
      QMatrix x = hc.projection * compile_multiplication(c, 0).constant_part() * hc.section;
      QMatrix p = QMatrix::identity(N);
      for (int k = 0; k < N - 1; ++k) p = p * x;
      CHECK_FALSE(p.is_zero());
      CHECK((p * x).is_zero());
    }
  }

  TEST_CASE("cache round trip") {
    Web w = testwebs::theta(3);
    CompiledObject obj = compile_web(w);
    CompiledObject back = deserialize_compiled(serialize(obj));
    CHECK(back.mf.d == obj.mf.d);
    CHECK(back.mf.gens == obj.mf.gens);
    CHECK(back.path == obj.path);
    CHECK(back.merges.size() == obj.merges.size());
    CHECK(closed_dimensions(back) == closed_dimensions(obj));

    auto dir = std::filesystem::temp_directory_path() / "kr_cache_roundtrip";
    std::filesystem::remove_all(dir);
    CompileCache cache(dir.string());
    std::string key = CompileCache::make_key(w, obj.path);
    CHECK_FALSE(cache.load(key).has_value());
    cache.store(key, obj);
    auto loaded = cache.load(key);
    REQUIRE(loaded.has_value());
    CHECK(loaded->mf.d == obj.mf.d);
    CHECK_FALSE(cache.load(key + "x").has_value());
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("cancellation is honoured") {
    std::atomic<bool> stop{true};
    CompileOptions o;
    o.cancel = &stop;
    CHECK_THROWS_AS(compile_web(testwebs::theta(2), o), Cancelled);
  }
}
