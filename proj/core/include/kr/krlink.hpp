#pragma once

#include "kr/compiler.hpp"

#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kr {

struct ParseError : Error {
  using Error::Error;
};
struct MarkNotOnComponent : Error {
  using Error::Error;
};

// An oriented diagram with user-facing edge labels. labels[i] names internal
// edge i; free circles are labelled after the crossing edges.
struct LinkDiagram {
  PlanarDiagram pd;
  std::vector<int> labels;
  std::string name;
  std::string braid;  // empty unless built from a braid word
  int strands = 0;
};

// Braid words: tokens s1, s1^-1, S1 (inverse), or signed integers, separated by
// spaces or commas. Edges are labelled 1, 2, ... in order of creation.
LinkDiagram parse_braid(const std::string& word, int strands = 0);
// PD codes: X[a,b,c,d] per crossing, labels counterclockwise from the incoming
// under-strand. Labels increase along each component; an optional
// "orient: +1 -1 ..." suffix reverses components (ordered by smallest label).
LinkDiagram parse_pd(const std::string& text);
// Writes a diagram in the PD format above.
std::string to_pd(const LinkDiagram& diagram);

// Component index of every internal edge (free circles last).
std::vector<int> edge_components(const PlanarDiagram& pd);
int num_components(const PlanarDiagram& pd);
LinkDiagram reverse_component(const LinkDiagram& diagram, int component);
// Internal edge index for a user label.
int edge_for_label(const LinkDiagram& diagram, int label);

// Laurent polynomial in t and q with integer coefficients.
class LaurentPoly2 {
 public:
  using Key = std::pair<int, int>;  // (t power, q power)
  void add(int t, int q, long coeff);
  long coeff(int t, int q) const;
  const std::map<Key, long>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  LaurentPoly2 shifted(int dt, int dq) const;
  friend bool operator==(const LaurentPoly2&, const LaurentPoly2&) = default;
  friend LaurentPoly2 operator+(LaurentPoly2 a, const LaurentPoly2& b);
  friend LaurentPoly2 operator-(LaurentPoly2 a, const LaurentPoly2& b);
  std::string to_string() const;

 private:
  std::map<Key, long> terms_;
};

LaurentPoly2 mirror(const LaurentPoly2& p);
// Substitutes t = -1; keys are q powers.
std::map<int, long> euler_characteristic(const LaurentPoly2& p);

struct ResolutionInfo {
  std::vector<int> state;
  int compiled_rank = 0;
  int qshift = 0;
  int t = 0;
  std::map<Bidegree, int> cohomology;
};

struct KRResult {
  int N = 0;
  bool reduced = false;
  int mark_label = 0;
  int parity = 0;
  // Unreduced: the parity-degree homology. Reduced: q^{N-1} times the
  // parity-degree part of the reduced homology.
  LaurentPoly2 poincare;
  // The raw homology in each Z2-degree, without the reduced normalisation.
  std::array<LaurentPoly2, 2> by_parity;
  std::vector<ResolutionInfo> resolutions;
  double wall_time_ms = 0;
};

struct KROptions {
  int threads = 1;
  std::string cache_dir;
  bool verify = false;
  const std::atomic<bool>* cancel = nullptr;
  // Optional per-resolution path override, for path-independence checks.
  std::function<std::vector<int>(const Web&)> path_rule;
};

KRResult kr_invariant(const LinkDiagram& diagram, int N, bool reduced, std::optional<int> mark_label = {},
                      const KROptions& options = {});

struct AppendixCReport {
  bool parity_concentrated = true;
  bool free_module = true;
  bool sequence_balanced = true;
  bool reduced_shift_relation = true;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
AppendixCReport appendix_c_checks(const LinkDiagram& diagram, int N, std::optional<int> mark_label = {},
                                  const KROptions& options = {});

struct BuiltinLink {
  std::string name;
  std::string display;  // knot-table name
  std::string braid;
  int strands = 0;
  std::vector<int> reversed;  // components to reverse after closing
  // Reduced Poincare polynomial as printed, as a function of N, if known.
  std::function<LaurentPoly2(int)> reduced_row;
};
const std::vector<BuiltinLink>& builtin_links();
LinkDiagram builtin_diagram(const std::string& name);

}  // namespace kr
