#include "selftest.hpp"

#include "kr/compiler.hpp"
#include "kr/krlink.hpp"

#include <chrono>
#include <map>
#include <string>

namespace krtool {

namespace {

using Dims = std::map<kr::Bidegree, int>;

kr::Web theta_web(int N) {
  kr::Web w;
  w.N = N;
  for (int i = 0; i < 4; ++i) w.add_edge(i);
  w.add_vertex(kr::VertexKind::Singular, {0, 1}, {2, 3});
  w.add_vertex(kr::VertexKind::Identity, {2}, {0});
  w.add_vertex(kr::VertexKind::Identity, {3}, {1});
  return w;
}

kr::Web double_web(int N) {
  kr::Web w;
  w.N = N;
  for (int i = 0; i < 6; ++i) w.add_edge(i);
  w.add_vertex(kr::VertexKind::Singular, {0, 1}, {2, 3});
  w.add_vertex(kr::VertexKind::Singular, {2, 3}, {4, 5});
  w.add_vertex(kr::VertexKind::Identity, {4}, {0});
  w.add_vertex(kr::VertexKind::Identity, {5}, {1});
  return w;
}

Dims shifted(const Dims& d, int q, bool suspend = false) {
  Dims out;
  for (auto [b, n] : d) out[{b.deg + q, suspend ? 1 - b.par : b.par}] += n;
  return out;
}

Dims& operator+=(Dims& a, const Dims& b) {
  for (auto [k, n] : b) a[k] += n;
  return a;
}

// Theta web, suspended, against sum_{i=0}^{N-2} circle{2-N+2i}.
bool theta_relation(int N) {
  Dims theta = shifted(kr::closed_dimensions(kr::compile_web(theta_web(N))), 0, true);
  Dims circle = kr::closed_dimensions(kr::compile_web(kr::state_web_from_resolution(
      kr::builtin_diagram("unknot").pd, {}, N)));
  Dims rhs;
  for (int i = 0; i <= N - 2; ++i) rhs += shifted(circle, 2 - N + 2 * i);
  return theta == rhs;
}

bool double_relation(int N) {
  Dims dbl = kr::closed_dimensions(kr::compile_web(double_web(N)));
  Dims th = kr::closed_dimensions(kr::compile_web(theta_web(N)));
  Dims rhs = shifted(th, 1);
  rhs += shifted(th, -1);
  return dbl == rhs;
}

}  // namespace

bool run_selftest(bool full, int threads, std::ostream& out) {
  bool all = true;
  auto report = [&](const std::string& what, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << what << "\n";
    all = all && ok;
  };
  kr::KROptions opts;
  opts.threads = threads;

  auto row = [&](const std::string& name, int N) {
    const kr::BuiltinLink* entry = nullptr;
    for (const auto& b : kr::builtin_links())
      if (b.name == name) entry = &b;
    kr::KRResult r = kr::kr_invariant(kr::builtin_diagram(name), N, true, {}, opts);
    report(name + " reduced N=" + std::to_string(N) + "  " + r.poincare.to_string(),
           entry && entry->reduced_row && r.poincare == entry->reduced_row(N));
    if (full) {
      kr::AppendixCReport c = kr::appendix_c_checks(kr::builtin_diagram(name), N, {}, opts);
      report(name + " structural checks N=" + std::to_string(N), c.ok());
    }
  };

  const int unknot_max = full ? 6 : 3;
  for (int N = 2; N <= unknot_max; ++N) {
    kr::KRResult r = kr::kr_invariant(kr::builtin_diagram("unknot"), N, false, {}, opts);
    kr::LaurentPoly2 expect;
    for (int k = 0; k < N; ++k) expect.add(0, 1 - N + 2 * k, 1);
    report("unknot N=" + std::to_string(N), r.poincare == expect);
  }
  row("hopf_v1", 2);
  report("theta web relation N=2", theta_relation(2));
  if (!full) return all;

  for (int N = 3; N <= 4; ++N) row("hopf_v1", N);
  for (int N = 2; N <= 3; ++N) row("trefoil", N);
  row("figure_eight", 2);
  row("solomon_v1", 2);
  row("solomon_v2", 2);
  for (int N = 3; N <= 4; ++N) report("theta web relation N=" + std::to_string(N), theta_relation(N));
  for (int N = 2; N <= 3; ++N) report("double edge relation N=" + std::to_string(N), double_relation(N));
  return all;
}

}  // namespace krtool
