#pragma once

#include "kr/krbasic.hpp"

#include <string>
#include <vector>

namespace kr {

struct DisjointnessViolation : Error {
  using Error::Error;
};
struct OrientationError : Error {
  using Error::Error;
};

constexpr int kBoundary = -1;

// Each edge carries one variable with potential x^{N+1}.
struct Edge {
  int var = 0;
  int source = kBoundary;  // vertex the edge leaves
  int target = kBoundary;  // vertex the edge enters
};

enum class VertexKind { Smooth, Singular, Identity };

struct Vertex {
  VertexKind kind = VertexKind::Identity;
  // Incoming and outgoing edge indices. For four-valent vertices the smoothing
  // joins in[0] with out[0] and in[1] with out[1].
  std::vector<int> in;
  std::vector<int> out;
  GradedMF mf;
};

// A decorated web with the sl(N) edge potentials. Variables listed in
// `zero_vars` have been frozen to 0 in every vertex factorisation.
struct Web {
  int N = 2;
  std::vector<Edge> edges;
  std::vector<Vertex> vertices;
  std::vector<int> zero_vars;

  // Adds a vertex with its standard decoration (X∘, X•{-1} or the identity
  // defect) and wires the edges to it.
  int add_vertex(VertexKind kind, std::vector<int> in, std::vector<int> out);
  int add_edge(int var);
  bool is_closed() const;
  bool is_internal(int edge) const;
  // Variable slots involved, and a stable text key for caching.
  std::string key() const;
};

GradedMF standard_vertex_mf(VertexKind kind, const std::vector<int>& in_vars,
                            const std::vector<int>& out_vars, int N, const std::vector<int>& zero);

// Throws DisjointnessViolation, PotentialMismatch or DegreeMismatch.
void validate(const Web& web);

// Tensor product of the vertex factorisations in vertex order.
GradedMF total_mf(const Web& web);

// Oriented link diagram: crossings list their four edges. sign > 0 is the
// braid generator whose over-strand runs bottom left to top right; its
// complex uses chi1.
struct Crossing {
  int over_in = 0, over_out = 0, under_in = 0, under_out = 0;
  int sign = 1;
};

CrossingKind crossing_kind(const Crossing& c);

struct PlanarDiagram {
  std::vector<Crossing> crossings;
  int num_edges = 0;
  // Components without crossings.
  int free_circles = 0;
};

// Checks that every edge is entered once and left once.
void check_orientation(const PlanarDiagram& d);

// State web of a resolution: vertex k is crossing k (smooth or singular);
// self-loop edges and free circles receive identity-defect marks.
Web state_web_from_resolution(const PlanarDiagram& diagram, const std::vector<int>& states, int N,
                              const std::vector<int>& zero_vars = {});

// Number of circles of the full smoothing, mod 2.
int parity(const Web& web);

}  // namespace kr
