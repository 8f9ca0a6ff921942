#pragma once

// Small closed webs used by several test binaries.

#include "kr/web.hpp"

#include <map>

namespace testwebs {

// A single oriented circle carrying two identity-defect marks.
inline kr::Web circle(int N) {
  kr::Web w;
  w.N = N;
  int a = w.add_edge(0), b = w.add_edge(1);
  w.add_vertex(kr::VertexKind::Identity, {a}, {b});
  w.add_vertex(kr::VertexKind::Identity, {b}, {a});
  return w;
}

// One singular vertex whose two outgoing edges are fed back into it.
inline kr::Web theta(int N) {
  kr::Web w;
  w.N = N;
  for (int i = 0; i < 4; ++i) w.add_edge(i);
  w.add_vertex(kr::VertexKind::Singular, {0, 1}, {2, 3});
  w.add_vertex(kr::VertexKind::Identity, {2}, {0});
  w.add_vertex(kr::VertexKind::Identity, {3}, {1});
  return w;
}

// Two singular vertices stacked on the same pair of strands, closed up.
inline kr::Web double_edge(int N) {
  kr::Web w;
  w.N = N;
  for (int i = 0; i < 6; ++i) w.add_edge(i);
  w.add_vertex(kr::VertexKind::Singular, {0, 1}, {2, 3});
  w.add_vertex(kr::VertexKind::Singular, {2, 3}, {4, 5});
  w.add_vertex(kr::VertexKind::Identity, {4}, {0});
  w.add_vertex(kr::VertexKind::Identity, {5}, {1});
  return w;
}

using Dims = std::map<kr::Bidegree, int>;

inline Dims shift(const Dims& d, int q) {
  Dims out;
  for (auto [b, n] : d) out[{b.deg + q, b.par}] += n;
  return out;
}

inline Dims suspend(const Dims& d) {
  Dims out;
  for (auto [b, n] : d) out[{b.deg, 1 - b.par}] += n;
  return out;
}

inline Dims sum(const Dims& a, const Dims& b) {
  Dims out = a;
  for (auto [k, n] : b) out[k] += n;
  return out;
}

}  // namespace testwebs
