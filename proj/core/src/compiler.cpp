#include "kr/compiler.hpp"

#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace kr {

namespace {

PolyMatrix inflate_impl(const PolyMatrix& Q, int x, int a, bool divide) {
  const int R = Q.rows(), C = Q.cols();
  std::vector<std::vector<Term>> cells(std::size_t(R) * a * C * a);
  const int outC = C * a;
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c)
      for (const auto& t : Q(r, c).terms()) {
        const int k = t.mono.exp[x];
        Monomial rest = t.mono;
        rest.exp[x] = 0;
        rest.total -= k;
        for (int b = 0; b < a; ++b) {
          int g = k + b;
          if (divide) {
            // multiply by x^k, keep the x^a part, divide it out
            if (g < a) continue;
            g -= a;
          }
          if (g >= a) continue;
          cells[std::size_t(r * a + g) * outC + c * a + b].push_back(Term{rest, t.coeff});
        }
      }
  PolyMatrix out(R * a, outC);
  for (int i = 0; i < R * a; ++i)
    for (int j = 0; j < outC; ++j) {
      auto& cell = cells[std::size_t(i) * outC + j];
      if (!cell.empty()) out(i, j) = Poly::from_terms(std::move(cell));
    }
  return out;
}

void check_cancel(const std::atomic<bool>* cancel) {
  if (cancel && cancel->load(std::memory_order_relaxed)) throw Cancelled("computation cancelled");
}

// Univariate helpers over Q.
void trim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

UPoly umul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

UPoly usub(UPoly a, const UPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

std::pair<UPoly, UPoly> udivmod(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  if (b.empty()) throw Error("division by the zero polynomial");
  UPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 1);
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t s = a.size() - b.size();
    Rational f = a.back() / b.back();
    q[s] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[s + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

}  // namespace

PolyMatrix inflate(const PolyMatrix& Q, int x, int a) { return inflate_impl(Q, x, a, false); }

PolyMatrix commutator_block(const PolyMatrix& Q, int x, int a) { return inflate_impl(Q, x, a, true); }

BigradedSpace inflate_gens(const BigradedSpace& gens, int a) {
  BigradedSpace out;
  out.reserve(gens.size() * a);
  for (const auto& g : gens)
    for (int b = 0; b < a; ++b) out.push_back({g.deg + 2 * b, g.par});
  return out;
}

UPoly spectral_polynomial(const UPoly& mu) {
  const UPoly z_minus_1{Rational(-1), Rational(1)};
  UPoly rest = mu;
  trim(rest);
  int m = 0;
  for (;;) {
    auto [q, r] = udivmod(rest, z_minus_1);
    if (!r.empty()) break;
    rest = q;
    ++m;
  }
  if (m == 0) return {};
  if (rest[0] != 0) rest = umul(rest, UPoly{Rational(0), Rational(1)});
  UPoly A{Rational(1)};
  for (int i = 0; i < m; ++i) A = umul(A, z_minus_1);
  // Extended Euclid: s A + t rest = g (a nonzero constant).
  UPoly r0 = A, r1 = rest, s0{Rational(1)}, s1{}, t0{}, t1{Rational(1)};
  while (!r1.empty()) {
    auto [q, r] = udivmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    UPoly s2 = usub(s0, umul(q, s1));
    UPoly t2 = usub(t0, umul(q, t1));
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.size() != 1) throw Error("spectral polynomial: factors are not coprime");
  for (auto& x : t0) x /= r0[0];
  UPoly p = umul(t0, rest);
  return udivmod(p, umul(A, rest)).second;
}

// Paterson-Stockmeyer: about 2 sqrt(deg p) matrix products instead of deg p.
PolyMatrix evaluate(const UPoly& p, const PolyMatrix& e) {
  const int n = e.rows();
  if (p.empty()) return PolyMatrix(n, n);
  const int d = static_cast<int>(p.size()) - 1;
  int s = 1;
  while ((s + 1) * (s + 1) <= d + 1) ++s;
  std::vector<PolyMatrix> powers{PolyMatrix::identity(n), e};
  while (static_cast<int>(powers.size()) <= s) powers.push_back(powers.back() * e);
  // Chunk j is sum_i p[j*s + i] e^i for 0 <= i < s.
  auto chunk = [&](int j) {
    PolyMatrix c(n, n);
    for (int i = 0; i < s && j * s + i <= d; ++i) {
      const Rational& coef = p[std::size_t(j) * s + i];
      if (coef == 0) continue;
      PolyMatrix term = powers[i];
      term *= coef;
      c += term;
    }
    return c;
  };
  const int chunks = d / s;
  PolyMatrix res = chunk(chunks);
  for (int j = chunks - 1; j >= 0; --j) {
    res = res * powers[s];
    res += chunk(j);
  }
  return res;
}

PolyMatrix strictify(PolyMatrix e, StrictifyStats* stats) {
  StrictifyStats local;
  PolyMatrix e2 = e * e;
  if (e2 == e) {
    if (stats) *stats = local;
    return e;
  }
  if (!(e2 - e).constant_part().is_zero()) {
    e = evaluate(spectral_polynomial(minimal_polynomial(e.constant_part())), e);
    local.preconditioned = true;
    e2 = e * e;
  }
  // e^2 - e is homogeneous of degree 0 with zero constant part, hence strictly
  // triangular with respect to generator degree and nilpotent.
  while (!(e2 == e)) {
    if (!(e2 - e).constant_part().is_zero()) throw NotNilpotent("e^2 - e is not nilpotent");
    if (++local.lambek_iterations > 64) throw NotNilpotent("idempotent lift does not converge");
    e = Rational(3) * e2 - Rational(2) * (e2 * e);
    e2 = e * e;
  }
  if (stats) *stats = local;
  return e;
}

StepResult compile_step(const GradedMF& X, int x, const PolyMatrix& lambda, int N, bool verify) {
  const int c = N + 1;
  PolyMatrix Q = inflate(X.d, x, N);
  PolyMatrix Lm = inflate(lambda, x, N);
  PolyMatrix A = commutator_block(X.d, x, N);
  BigradedSpace gens = inflate_gens(X.gens, N);
  PolyMatrix eps = Lm * A;
  if (verify) {
    if (!is_homogeneous_map(eps, gens, gens, 0)) throw Error("epsilon is not of degree 0");
    if (!(eps * Q == Q * eps)) throw Error("epsilon does not commute with the differential");
  }
  StepResult out;
  PolyMatrix e = strictify(std::move(eps), &out.stats);
  Splitting s = split_idempotent_graded(e, gens, verify);
  out.f = std::move(s.f);
  out.g = std::move(s.g);
  out.mf.c = c;
  out.mf.W = X.W;
  for (auto b : s.gens) out.mf.gens.push_back({b.deg + (c - 2 * N), b.par ^ 1});
  if (s.columns.empty()) {
    out.mf.d = PolyMatrix(0, 0);
    return out;
  }
  out.mf.d = out.f * (Q * out.g);
  out.mf.d *= Rational(-1);
  if (verify) out.mf.check();
  return out;
}

PolyMatrix transport_odd(const PolyMatrix& h, const StepResult& step, int x, int N) {
  PolyMatrix r = step.f * (inflate(h, x, N) * step.g);
  r *= Rational(-1);
  return r;
}

PolyMatrix transport_even(const PolyMatrix& h, const PolyMatrix& f_target, const PolyMatrix& g_source, int x,
                          int N) {
  return f_target * (inflate(h, x, N) * g_source);
}

std::vector<int> default_vertex_path(const Web& web) {
  const int n = static_cast<int>(web.vertices.size());
  std::vector<int> path;
  if (n == 0) return path;
  std::vector<char> in(n, 0);
  path.push_back(0);
  in[0] = 1;
  while (static_cast<int>(path.size()) < n) {
    int best = -1, best_shared = -1;
    for (int v = 0; v < n; ++v) {
      if (in[v]) continue;
      int shared = 0;
      for (const auto& list : {web.vertices[v].in, web.vertices[v].out})
        for (int e : list) {
          int other = web.edges[e].source == v ? web.edges[e].target : web.edges[e].source;
          if (other != kBoundary && in[other]) ++shared;
        }
      if (shared > best_shared) {
        best = v;
        best_shared = shared;
      }
    }
    path.push_back(best);
    in[best] = 1;
  }
  return path;
}

CompiledObject compile_web(const Web& web, const CompileOptions& options) {
  const int N = web.N;
  const int n = static_cast<int>(web.vertices.size());
  std::vector<int> path = options.path ? *options.path : default_vertex_path(web);
  {
    std::vector<int> sorted = path;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(n);
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect) throw Error("vertex path must visit every vertex once");
  }
  std::set<int> zero(web.zero_vars.begin(), web.zero_vars.end());
  CompiledObject obj;
  obj.path = path;
  obj.web_key = web.key();
  std::vector<char> merged(n, 0);
  GradedMF blob;
  for (std::size_t step = 0; step < path.size(); ++step) {
    check_cancel(options.cancel);
    const int vi = path[step];
    const Vertex& V = web.vertices[vi];
    MergeRecord rec{vi, V.mf.rank(), {}};
    if (step == 0) {
      blob = V.mf;
      merged[vi] = 1;
      obj.merges.push_back(std::move(rec));
      continue;
    }
    merged[vi] = 1;
    std::set<int> incident(V.in.begin(), V.in.end());
    incident.insert(V.out.begin(), V.out.end());
    std::vector<int> fresh;
    for (int e : incident) {
      const Edge& E = web.edges[e];
      if (zero.count(E.var)) continue;
      if (E.source != kBoundary && E.target != kBoundary && merged[E.source] && merged[E.target]) fresh.push_back(e);
    }
    GradedMF current = tensor(blob, V.mf);
    std::vector<PolyMatrix> lambdas;
    for (int e : fresh) {
      const Edge& E = web.edges[e];
      // The edge variable sits in the blob through its other endpoint; the
      // sign follows the orientation of that endpoint's potential.
      Rational kappa = E.source != vi ? Rational(1, N + 1) : Rational(-1, N + 1);
      PolyMatrix dl = blob.d.map([&](const Poly& p) { return p.derivative(E.var); });
      dl *= kappa;
      lambdas.push_back(kron_identity_right(dl, V.mf.rank()));
    }
    std::vector<StepResult> steps;
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      check_cancel(options.cancel);
      const int var = web.edges[fresh[k]].var;
      PolyMatrix lam = lambdas[k];
      for (std::size_t j = 0; j < steps.size(); ++j)
        lam = transport_odd(lam, steps[j], web.edges[fresh[j]].var, N);
      obj.max_inflated_rank = std::max(obj.max_inflated_rank, current.rank() * N);
      StepResult r = compile_step(current, var, lam, N, options.verify);
      current = r.mf;
      rec.eliminations.push_back(EliminationRecord{var, r.f, r.g, r.mf.gens});
      steps.push_back(std::move(r));
    }
    blob = std::move(current);
    obj.merges.push_back(std::move(rec));
  }
  obj.mf = std::move(blob);
  return obj;
}

Cohomology closed_cohomology(const CompiledObject& obj) {
  for (int i = 0; i < obj.mf.rank(); ++i)
    for (int j = 0; j < obj.mf.rank(); ++j)
      if (!obj.mf.d(i, j).is_constant()) throw Error("compiled web is not closed");
  return cohomology_bigraded(obj.mf.d.constant_part(), obj.mf.gens);
}

std::map<Bidegree, int> closed_dimensions(const CompiledObject& obj) {
  return dimensions(closed_cohomology(obj).space);
}

PolyMatrix compile_morphism(const CompiledObject& source, const CompiledObject& target, const PolyMatrix& phi,
                            int k, const std::atomic<bool>* cancel) {
  if (source.path != target.path || source.merges.size() != target.merges.size())
    throw PathMismatch("source and target were compiled along different paths");
  const int N = source.mf.c - 1;
  PolyMatrix M;
  for (std::size_t s = 0; s < source.merges.size(); ++s) {
    check_cancel(cancel);
    const MergeRecord& ms = source.merges[s];
    const MergeRecord& mt = target.merges[s];
    if (ms.vertex != mt.vertex || ms.vertex_rank != mt.vertex_rank ||
        ms.eliminations.size() != mt.eliminations.size())
      throw PathMismatch("merge records differ");
    const bool here = ms.vertex == k;
    if (s == 0) {
      M = here ? phi : PolyMatrix::identity(ms.vertex_rank);
      continue;
    }
    M = here ? kron(M, phi) : kron_identity_right(M, ms.vertex_rank);
    for (std::size_t j = 0; j < ms.eliminations.size(); ++j) {
      const auto& es = ms.eliminations[j];
      const auto& et = mt.eliminations[j];
      if (es.var != et.var) throw PathMismatch("eliminated variables differ");
      M = transport_even(M, et.f, es.g, es.var, N);
    }
  }
  return M;
}

PolyMatrix compile_multiplication(const CompiledObject& obj, int x) {
  const int N = obj.mf.c - 1;
  PolyMatrix M;
  for (std::size_t s = 0; s < obj.merges.size(); ++s) {
    const MergeRecord& m = obj.merges[s];
    if (s == 0) {
      M = PolyMatrix::scalar(m.vertex_rank, Poly::var(x));
      continue;
    }
    M = kron_identity_right(M, m.vertex_rank);
    for (const auto& e : m.eliminations) M = transport_even(M, e.f, e.g, e.var, N);
  }
  return M;
}

std::map<Bidegree, int> compile_closed_web_direct(const Web& web) {
  if (!web.is_closed()) throw Error("direct compilation needs a closed web");
  const int N = web.N;
  const int c = N + 1;
  std::set<int> zero(web.zero_vars.begin(), web.zero_vars.end());
  std::vector<int> vars, owner;
  for (const auto& e : web.edges)
    if (!zero.count(e.var)) {
      vars.push_back(e.var);
      owner.push_back(e.source);
    }
  const int n = static_cast<int>(vars.size());
  GradedMF X = total_mf(web);
  // Inflate every internal variable, in order.
  auto inflate_all = [&](const PolyMatrix& m, int divided) {
    PolyMatrix r = m;
    for (int i = 0; i < n; ++i) r = i == divided ? commutator_block(r, vars[i], N) : inflate(r, vars[i], N);
    return r.constant_part();
  };
  BigradedSpace gens = X.gens;
  for (int i = 0; i < n; ++i) gens = inflate_gens(gens, N);
  QMatrix Q = inflate_all(X.d, -1);
  // lambda_x uses only the differential of the vertex the edge leaves.
  std::vector<QMatrix> lambdas, blocks;
  for (int i = 0; i < n; ++i) {
    GradedMF part;
    for (std::size_t v = 0; v < web.vertices.size(); ++v) {
      GradedMF f = web.vertices[v].mf;
      if (static_cast<int>(v) != owner[i]) f.d = PolyMatrix(f.rank(), f.rank());
      part = v == 0 ? f : tensor(part, f);
    }
    PolyMatrix dl = part.d.map([&](const Poly& p) { return p.derivative(vars[i]); });
    dl *= Rational(1, N + 1);
    lambdas.push_back(inflate_all(dl, -1));
    blocks.push_back(inflate_all(X.d, i));
  }
  // Antisymmetrised product sum_tau sgn(tau) A_tau(1) ... A_tau(n), by
  // expanding over subsets: G(S) = sum_{j in S} sign * A_j G(S \ j).
  const int R = Q.rows();
  std::vector<QMatrix> G(std::size_t(1) << n);
  G[0] = QMatrix::identity(R);
  for (unsigned S = 1; S < (1u << n); ++S) {
    QMatrix acc(R, R);
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      if (!(S >> j & 1)) continue;
      // A_j first: sign of moving j to the front of S.
      QMatrix term = blocks[j] * G[S & ~(1u << j)];
      acc = (pos % 2 == 0) ? acc + term : acc - term;
      ++pos;
    }
    G[S] = std::move(acc);
  }
  QMatrix eps = G[(1u << n) - 1];
  for (int i = n - 1; i >= 0; --i) eps = lambdas[i] * eps;
  Rational prefactor(1);
  for (int k = 2; k <= n; ++k) prefactor /= k;
  if ((n * (n - 1) / 2) % 2) prefactor = -prefactor;
  eps = prefactor * eps;
  for (auto& g : gens) {
    g.deg += n * (c - 2 * N);
    g.par ^= (n & 1);
  }
  BigradedSpace image = split_idempotent_on_cohomology(eps, Q, gens);
  return dimensions(image);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using nlohmann::json;

json matrix_to_json(const PolyMatrix& m) {
  json entries = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) entries.push_back(json::array({i, j, m(i, j).serialize()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

PolyMatrix matrix_from_json(const json& j) {
  PolyMatrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
  for (const auto& e : j.at("entries")) m(e[0].get<int>(), e[1].get<int>()) = Poly::deserialize(e[2].get<std::string>());
  return m;
}

json gens_to_json(const BigradedSpace& g) {
  json a = json::array();
  for (auto b : g) a.push_back(json::array({b.deg, b.par}));
  return a;
}

BigradedSpace gens_from_json(const json& j) {
  BigradedSpace g;
  for (const auto& b : j) g.push_back({b[0].get<int>(), b[1].get<int>()});
  return g;
}

}  // namespace

std::string serialize(const CompiledObject& obj) {
  json merges = json::array();
  for (const auto& m : obj.merges) {
    json elims = json::array();
    for (const auto& e : m.eliminations)
      elims.push_back(json{{"var", e.var}, {"f", matrix_to_json(e.f)}, {"g", matrix_to_json(e.g)},
                           {"gens", gens_to_json(e.gens)}});
    merges.push_back(json{{"vertex", m.vertex}, {"vertex_rank", m.vertex_rank}, {"eliminations", elims}});
  }
  json j{{"key", obj.web_key},
         {"path", obj.path},
         {"c", obj.mf.c},
         {"W", obj.mf.W.serialize()},
         {"gens", gens_to_json(obj.mf.gens)},
         {"d", matrix_to_json(obj.mf.d)},
         {"max_inflated_rank", obj.max_inflated_rank},
         {"merges", merges}};
  return j.dump();
}

CompiledObject deserialize_compiled(const std::string& text) {
  json j = json::parse(text);
  CompiledObject obj;
  obj.web_key = j.at("key").get<std::string>();
  obj.path = j.at("path").get<std::vector<int>>();
  obj.mf.c = j.at("c").get<int>();
  obj.mf.W = Poly::deserialize(j.at("W").get<std::string>());
  obj.mf.gens = gens_from_json(j.at("gens"));
  obj.mf.d = matrix_from_json(j.at("d"));
  obj.max_inflated_rank = j.at("max_inflated_rank").get<int>();
  for (const auto& m : j.at("merges")) {
    MergeRecord rec{m.at("vertex").get<int>(), m.at("vertex_rank").get<int>(), {}};
    for (const auto& e : m.at("eliminations"))
      rec.eliminations.push_back(EliminationRecord{e.at("var").get<int>(), matrix_from_json(e.at("f")),
                                                   matrix_from_json(e.at("g")), gens_from_json(e.at("gens"))});
    obj.merges.push_back(std::move(rec));
  }
  return obj;
}

CompileCache::CompileCache(std::string directory) : dir_(std::move(directory)) {
  std::filesystem::create_directories(dir_);
}

std::string CompileCache::make_key(const Web& web, const std::vector<int>& path) {
  std::ostringstream os;
  os << web.key() << ";p";
  for (int v : path) os << v << ",";
  return os.str();
}

namespace {

std::string file_for(const std::string& dir, const std::string& key) {
  std::ostringstream os;
  os << std::hex << std::hash<std::string>{}(key);
  return (std::filesystem::path(dir) / ("web_" + os.str() + ".json")).string();
}

}  // namespace

std::optional<CompiledObject> CompileCache::load(const std::string& key) const {
  std::ifstream in(file_for(dir_, key));
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    json j = json::parse(buf.str());
    if (j.at("cache_key").get<std::string>() != key) return std::nullopt;
    return deserialize_compiled(j.at("object").get<std::string>());
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void CompileCache::store(const std::string& key, const CompiledObject& obj) const {
  const std::string target = file_for(dir_, key);
  std::ostringstream tmpname;
  tmpname << target << ".tmp" << std::hash<std::thread::id>{}(std::this_thread::get_id());
  {
    std::ofstream out(tmpname.str());
    out << json{{"cache_key", key}, {"object", serialize(obj)}}.dump();
  }
  std::filesystem::rename(tmpname.str(), target);
}

}  // namespace kr
