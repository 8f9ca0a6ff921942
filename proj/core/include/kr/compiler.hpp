#pragma once

#include "kr/web.hpp"

#include <atomic>
#include <optional>
#include <string>
#include <vector>

namespace kr {

struct NotNilpotent : Error {
  using Error::Error;
};
struct PathMismatch : Error {
  using Error::Error;
};
struct Cancelled : Error {
  using Error::Error;
};

// Replaces every entry sum_k p_k x^k by sum_k p_k M_{x^k}, where M_{x^k} is
// multiplication by x^k on the basis 1, x, ..., x^{a-1} of k[x]/(x^a). The
// new index of (row i, basis power b) is i*a + b.
PolyMatrix inflate(const PolyMatrix& Q, int x, int a);
// Same shape, with L_{x^k}: multiply by x^k, then divide by x^a without
// remainder, on the same quotient basis.
PolyMatrix commutator_block(const PolyMatrix& Q, int x, int a);
BigradedSpace inflate_gens(const BigradedSpace& gens, int a);

// Polynomials in one variable over Q, low degree first.
using UPoly = std::vector<Rational>;
// p with p = 1 mod (z-1)^m and p = 0 mod z*rest, where mu = (z-1)^m * rest.
UPoly spectral_polynomial(const UPoly& mu);
PolyMatrix evaluate(const UPoly& p, const PolyMatrix& e);

struct StrictifyStats {
  bool preconditioned = false;
  int lambek_iterations = 0;
};
// Turns a homotopy idempotent of degree 0 into a strict one: spectral
// preconditioning when e^2 - e has an invertible part, then e <- 3e^2 - 2e^3.
// Throws NotNilpotent if e^2 - e still has a nonzero constant part.
PolyMatrix strictify(PolyMatrix e, StrictifyStats* stats = nullptr);

// One elimination: quotient by x^N, inflate, epsilon = Lambda * A, strictify,
// split, shift by {c - 2N} and suspend.
struct StepResult {
  GradedMF mf;
  PolyMatrix f;  // projection from the inflated quotient
  PolyMatrix g;  // inclusion into the inflated quotient
  StrictifyStats stats;
};
// lambda is an odd null-homotopy of x^N on X.
StepResult compile_step(const GradedMF& X, int x, const PolyMatrix& lambda, int N, bool verify = true);

// Brings an odd endomorphism of the pre-step factorisation to the compiled
// one: h' = -f infl(h) g.
PolyMatrix transport_odd(const PolyMatrix& h, const StepResult& step, int x, int N);
// Even maps: f' infl(h) g.
PolyMatrix transport_even(const PolyMatrix& h, const PolyMatrix& f_target, const PolyMatrix& g_source, int x,
                          int N);

struct EliminationRecord {
  int var = 0;
  PolyMatrix f;
  PolyMatrix g;
  BigradedSpace gens;
};
struct MergeRecord {
  int vertex = 0;
  int vertex_rank = 0;
  std::vector<EliminationRecord> eliminations;
};

struct CompiledObject {
  GradedMF mf;
  std::vector<int> path;
  std::vector<MergeRecord> merges;  // merges[0] is the start vertex
  std::string web_key;
  int max_inflated_rank = 0;
};

struct CompileOptions {
  std::optional<std::vector<int>> path;
  bool verify = true;
  // Cooperative cancellation, checked between eliminations.
  const std::atomic<bool>* cancel = nullptr;
};

// Vertex path used when none is given: start at vertex 0, then repeatedly add
// the vertex sharing most edges with the merged part (lowest index on ties).
std::vector<int> default_vertex_path(const Web& web);

// Folds compile_step along the path, eliminating each edge variable as soon as
// both its ends are merged.
CompiledObject compile_web(const Web& web, const CompileOptions& options = {});

// Bigraded cohomology of a closed compiled web (its differential is over Q).
Cohomology closed_cohomology(const CompiledObject& obj);
std::map<Bidegree, int> closed_dimensions(const CompiledObject& obj);

// Pushes a vertex-local even morphism phi (at vertex k) through the stored
// eliminations. Both objects must come from the same path and edge set.
PolyMatrix compile_morphism(const CompiledObject& source, const CompiledObject& target, const PolyMatrix& phi,
                            int k, const std::atomic<bool>* cancel = nullptr);
// Multiplication by the variable x, pushed through the compilation.
PolyMatrix compile_multiplication(const CompiledObject& obj, int x);

// Whole-web compilation of a closed web in one step: quotient by all x^N,
// epsilon from the permutation-sum formula, image of H(epsilon) on cohomology.
// Exponential in the number of edges; for small webs.
std::map<Bidegree, int> compile_closed_web_direct(const Web& web);

// Cache records.
std::string serialize(const CompiledObject& obj);
CompiledObject deserialize_compiled(const std::string& text);

// File-based cache keyed by web key and path. Reads are shared, writes are
// atomic renames.
class CompileCache {
 public:
  explicit CompileCache(std::string directory);
  std::optional<CompiledObject> load(const std::string& key) const;
  void store(const std::string& key, const CompiledObject& obj) const;
  static std::string make_key(const Web& web, const std::vector<int>& path);

 private:
  std::string dir_;
};

}  // namespace kr
