#include "kr/web.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace kr {

GradedMF standard_vertex_mf(VertexKind kind, const std::vector<int>& in_vars,
                            const std::vector<int>& out_vars, int N, const std::vector<int>& zero) {
  if (kind == VertexKind::Identity) {
    if (in_vars.size() != 1 || out_vars.size() != 1) throw OrientationError("identity defect must be bivalent");
    return make_identity_mf(in_vars[0], out_vars[0], N, zero);
  }
  if (in_vars.size() != 2 || out_vars.size() != 2) throw OrientationError("crossing vertex must be four-valent");
  CrossingData cd = make_crossing_data(N, {in_vars[0], in_vars[1], out_vars[0], out_vars[1]}, zero);
  return kind == VertexKind::Smooth ? cd.circ : cd.bul.shifted(-1);
}

int Web::add_edge(int var) {
  if (var < 0 || var >= kMaxVars) throw Error("web needs more variables than supported");
  edges.push_back(Edge{var, kBoundary, kBoundary});
  return static_cast<int>(edges.size()) - 1;
}

int Web::add_vertex(VertexKind kind, std::vector<int> in, std::vector<int> out) {
  const int v = static_cast<int>(vertices.size());
  std::vector<int> in_vars, out_vars;
  for (int e : in) {
    if (edges.at(e).target != kBoundary) throw OrientationError("edge entered twice");
    edges[e].target = v;
    in_vars.push_back(edges[e].var);
  }
  for (int e : out) {
    if (edges.at(e).source != kBoundary) throw OrientationError("edge left twice");
    edges[e].source = v;
    out_vars.push_back(edges[e].var);
  }
  Vertex vx{kind, std::move(in), std::move(out), standard_vertex_mf(kind, in_vars, out_vars, N, zero_vars)};
  vertices.push_back(std::move(vx));
  return v;
}

bool Web::is_closed() const {
  return std::all_of(edges.begin(), edges.end(),
                     [](const Edge& e) { return e.source != kBoundary && e.target != kBoundary; });
}

bool Web::is_internal(int edge) const {
  return edges[edge].source != kBoundary && edges[edge].target != kBoundary;
}

std::string Web::key() const {
  std::ostringstream os;
  os << "N" << N << ";z";
  for (int v : zero_vars) os << v << ",";
  os << ";e";
  for (const auto& e : edges) os << e.var << ":" << e.source << ">" << e.target << ",";
  os << ";v";
  for (const auto& v : vertices) {
    os << static_cast<int>(v.kind) << "(";
    for (int e : v.in) os << e << ",";
    os << "|";
    for (int e : v.out) os << e << ",";
    os << ")";
  }
  return os.str();
}

void validate(const Web& web) {
  if (web.vertices.empty() || web.edges.empty()) throw Error("web needs vertices and edges");
  std::set<int> vars;
  for (const auto& e : web.edges) {
    if (e.source == kBoundary && e.target == kBoundary) throw OrientationError("edge with both ends on the boundary");
    if (e.var < 0 || e.var >= kMaxVars) throw Error("variable slot out of range");
    if (!vars.insert(e.var).second) throw DisjointnessViolation("two edges share a variable");
  }
  for (std::size_t vi = 0; vi < web.vertices.size(); ++vi) {
    const Vertex& v = web.vertices[vi];
    std::set<int> allowed;
    Poly W;
    auto potential = [&](int e) {
      Poly p = pow(Poly::var(web.edges[e].var), web.N + 1);
      for (int z : web.zero_vars) p = p.substitute_zero(z);
      return p;
    };
    for (int e : v.out) {
      allowed.insert(web.edges[e].var);
      W += potential(e);
    }
    for (int e : v.in) {
      allowed.insert(web.edges[e].var);
      W -= potential(e);
    }
    for (int i = 0; i < v.mf.rank(); ++i)
      for (int j = 0; j < v.mf.rank(); ++j)
        for (const auto& t : v.mf.d(i, j).terms())
          for (int x = 0; x < kMaxVars; ++x)
            if (t.mono.exp[x] && !allowed.count(x))
              throw DisjointnessViolation("vertex factorisation uses a variable of a non-incident edge");
    if (v.mf.c != web.N + 1 && v.mf.rank() > 1) throw DegreeMismatch("vertex factorisation has the wrong c");
    if (!v.mf.is_homogeneous()) throw DegreeMismatch("vertex factorisation is not homogeneous");
    if (!(v.mf.W == W) || !v.mf.squares_to_potential())
      throw PotentialMismatch("vertex factorisation does not factorise the vertex potential");
  }
}

GradedMF total_mf(const Web& web) {
  if (web.vertices.empty()) throw Error("empty web");
  GradedMF X = web.vertices[0].mf;
  for (std::size_t i = 1; i < web.vertices.size(); ++i) X = tensor(X, web.vertices[i].mf);
  return X;
}

CrossingKind crossing_kind(const Crossing& c) { return c.sign > 0 ? CrossingKind::Under : CrossingKind::Over; }

void check_orientation(const PlanarDiagram& d) {
  std::vector<int> in(d.num_edges, 0), out(d.num_edges, 0);
  auto bump = [&](std::vector<int>& v, int e) {
    if (e < 0 || e >= d.num_edges) throw OrientationError("edge label out of range");
    ++v[e];
  };
  for (const auto& c : d.crossings) {
    if (c.sign != 1 && c.sign != -1) throw OrientationError("crossing sign must be +1 or -1");
    bump(in, c.over_in);
    bump(in, c.under_in);
    bump(out, c.over_out);
    bump(out, c.under_out);
  }
  for (int e = 0; e < d.num_edges; ++e)
    if (in[e] != 1 || out[e] != 1) throw OrientationError("edge " + std::to_string(e) + " is not entered and left once");
}

Web state_web_from_resolution(const PlanarDiagram& diagram, const std::vector<int>& states, int N,
                              const std::vector<int>& zero_vars) {
  check_orientation(diagram);
  if (states.size() != diagram.crossings.size()) throw Error("one state per crossing required");
  Web web;
  web.N = N;
  web.zero_vars = zero_vars;
  for (int e = 0; e < diagram.num_edges; ++e) web.add_edge(e);
  // Free circle i owns edges num_edges + 2i and num_edges + 2i + 1.
  std::vector<std::pair<int, int>> circles;
  for (int i = 0; i < diagram.free_circles; ++i) {
    int a = web.add_edge(static_cast<int>(web.edges.size()));
    int b = web.add_edge(static_cast<int>(web.edges.size()));
    circles.emplace_back(a, b);
  }
  std::vector<Crossing> crs = diagram.crossings;
  // Self-loops get a mark so no vertex is glued to itself.
  std::vector<std::pair<int, int>> marks;
  for (auto& c : crs) {
    for (int* in : {&c.over_in, &c.under_in}) {
      int e = *in;
      if (e == c.over_out || e == c.under_out) {
        int fresh = web.add_edge(static_cast<int>(web.edges.size()));
        *in = fresh;
        marks.emplace_back(e, fresh);
      }
    }
  }
  for (std::size_t k = 0; k < crs.size(); ++k) {
    const Crossing& c = crs[k];
    bool smooth = resolution_is_smooth(crossing_kind(c), states[k]);
    web.add_vertex(smooth ? VertexKind::Smooth : VertexKind::Singular, {c.over_in, c.under_in},
                   {c.under_out, c.over_out});
  }
  for (auto [e, fresh] : marks) web.add_vertex(VertexKind::Identity, {e}, {fresh});
  for (auto [a, b] : circles) {
    web.add_vertex(VertexKind::Identity, {a}, {b});
    web.add_vertex(VertexKind::Identity, {b}, {a});
  }
  return web;
}

int parity(const Web& web) {
  if (!web.is_closed()) throw Error("parity needs a closed web");
  // Following an edge into its target vertex, the smoothing continues along
  // the paired outgoing edge.
  const int n = static_cast<int>(web.edges.size());
  std::vector<int> next(n, -1);
  for (const auto& v : web.vertices)
    for (std::size_t i = 0; i < v.in.size(); ++i) next[v.in[i]] = v.out[i];
  std::vector<char> seen(n, 0);
  int circles = 0;
  for (int e = 0; e < n; ++e) {
    if (seen[e]) continue;
    ++circles;
    for (int x = e; !seen[x]; x = next[x]) seen[x] = 1;
  }
  return circles % 2;
}

}  // namespace kr
