#include "kr/krlink.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace kr {

// ---------------------------------------------------------------------------
// Laurent polynomials

void LaurentPoly2::add(int t, int q, long coeff) {
  if (coeff == 0) return;
  long& c = terms_[{t, q}];
  c += coeff;
  if (c == 0) terms_.erase({t, q});
}

long LaurentPoly2::coeff(int t, int q) const {
  auto it = terms_.find({t, q});
  return it == terms_.end() ? 0 : it->second;
}

LaurentPoly2 LaurentPoly2::shifted(int dt, int dq) const {
  LaurentPoly2 out;
  for (auto [k, c] : terms_) out.add(k.first + dt, k.second + dq, c);
  return out;
}

LaurentPoly2 operator+(LaurentPoly2 a, const LaurentPoly2& b) {
  for (auto [k, c] : b.terms_) a.add(k.first, k.second, c);
  return a;
}

LaurentPoly2 operator-(LaurentPoly2 a, const LaurentPoly2& b) {
  for (auto [k, c] : b.terms_) a.add(k.first, k.second, -c);
  return a;
}

std::string LaurentPoly2::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto [k, c] : terms_) {
    auto [t, q] = k;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    long a = c < 0 ? -c : c;
    bool bare = t == 0 && q == 0;
    if (a != 1 || bare) os << a;
    if (q != 0) os << (a != 1 ? "*" : "") << "q^" << q;
    if (t != 0) os << ((a != 1 || q != 0) ? "*" : "") << "t^" << t;
  }
  return os.str();
}

LaurentPoly2 mirror(const LaurentPoly2& p) {
  LaurentPoly2 out;
  for (auto [k, c] : p.terms()) out.add(-k.first, -k.second, c);
  return out;
}

std::map<int, long> euler_characteristic(const LaurentPoly2& p) {
  std::map<int, long> out;
  for (auto [k, c] : p.terms()) {
    long v = (k.first % 2 == 0) ? c : -c;
    out[k.second] += v;
    if (out[k.second] == 0) out.erase(k.second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diagrams

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw ParseError(msg); }

std::vector<int> parse_braid_tokens(const std::string& word) {
  std::vector<int> gens;
  std::size_t i = 0;
  auto read_int = [&](bool allow_sign) {
    std::size_t start = i;
    if (allow_sign && i < word.size() && (word[i] == '-' || word[i] == '+')) ++i;
    while (i < word.size() && std::isdigit(static_cast<unsigned char>(word[i]))) ++i;
    if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(word[start]))))
      parse_fail("expected a number in braid word '" + word + "'");
    return std::stoi(word.substr(start, i - start));
  };
  while (i < word.size()) {
    char ch = word[i];
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '*' || ch == '.') {
      ++i;
      continue;
    }
    if (ch == 's' || ch == 'S' || ch == 'o' || ch == 'O') {
      bool inverse = ch == 'S' || ch == 'O';
      ++i;
      if (i < word.size() && word[i] == '_') ++i;
      int k = read_int(false);
      int power = 1;
      if (i < word.size() && word[i] == '^') {
        ++i;
        bool paren = i < word.size() && word[i] == '{';
        if (paren) ++i;
        power = read_int(true);
        if (paren) {
          if (i >= word.size() || word[i] != '}') parse_fail("unbalanced braces in braid word");
          ++i;
        }
      }
      if (k < 1) parse_fail("braid generators start at 1");
      if (inverse) power = -power;
      for (int r = 0; r < std::abs(power); ++r) gens.push_back(power > 0 ? k : -k);
      continue;
    }
    if (ch == '-' || ch == '+' || std::isdigit(static_cast<unsigned char>(ch))) {
      int k = read_int(true);
      if (k == 0) parse_fail("braid generator 0 is not allowed");
      gens.push_back(k);
      continue;
    }
    parse_fail(std::string("unexpected character '") + ch + "' in braid word");
  }
  return gens;
}

}  // namespace

LinkDiagram parse_braid(const std::string& word, int strands) {
  std::vector<int> gens = parse_braid_tokens(word);
  int need = 1;
  for (int g : gens) need = std::max(need, std::abs(g) + 1);
  if (strands == 0) strands = need;
  if (strands < need) parse_fail("braid word needs more strands");
  std::vector<int> pos(strands), bottom(strands);
  std::iota(pos.begin(), pos.end(), 0);
  bottom = pos;
  int ne = strands;
  std::vector<Crossing> crs;
  for (int g : gens) {
    int i = std::abs(g) - 1;
    int L = pos[i], R = pos[i + 1];
    int TL = ne, TR = ne + 1;
    ne += 2;
    // Positive generator: over strand from bottom left to top right.
    if (g > 0)
      crs.push_back(Crossing{L, TR, R, TL, +1});
    else
      crs.push_back(Crossing{R, TL, L, TR, -1});
    pos[i] = TL;
    pos[i + 1] = TR;
  }
  std::map<int, int> closing;
  for (int p = 0; p < strands; ++p) closing[pos[p]] = bottom[p];
  auto close = [&](int e) {
    auto it = closing.find(e);
    return it == closing.end() ? e : it->second;
  };
  std::set<int> used;
  for (auto& c : crs) {
    for (int* e : {&c.over_in, &c.over_out, &c.under_in, &c.under_out}) {
      *e = close(*e);
      used.insert(*e);
    }
  }
  std::map<int, int> relabel;
  for (int e : used) relabel.emplace(e, static_cast<int>(relabel.size()));
  for (auto& c : crs)
    for (int* e : {&c.over_in, &c.over_out, &c.under_in, &c.under_out}) *e = relabel.at(*e);
  LinkDiagram d;
  d.pd.crossings = std::move(crs);
  d.pd.num_edges = static_cast<int>(used.size());
  for (int p = 0; p < strands; ++p)
    if (pos[p] == bottom[p]) ++d.pd.free_circles;
  for (int i = 0; i < d.pd.num_edges + d.pd.free_circles; ++i) d.labels.push_back(i + 1);
  d.braid = word;
  d.strands = strands;
  d.name = "braid(" + word + ")";
  check_orientation(d.pd);
  return d;
}

std::vector<int> edge_components(const PlanarDiagram& pd) {
  std::vector<int> next(pd.num_edges, -1);
  for (const auto& c : pd.crossings) {
    next.at(c.over_in) = c.over_out;
    next.at(c.under_in) = c.under_out;
  }
  std::vector<int> comp(pd.num_edges, -1);
  int count = 0;
  for (int e = 0; e < pd.num_edges; ++e) {
    if (comp[e] >= 0) continue;
    for (int x = e; comp[x] < 0; x = next[x]) comp[x] = count;
    ++count;
  }
  return comp;
}

int num_components(const PlanarDiagram& pd) {
  auto comp = edge_components(pd);
  int m = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  return m + pd.free_circles;
}

LinkDiagram reverse_component(const LinkDiagram& diagram, int component) {
  auto comp = edge_components(diagram.pd);
  LinkDiagram out = diagram;
  out.braid.clear();
  for (auto& c : out.pd.crossings) {
    bool ro = comp[c.over_in] == component;
    bool ru = comp[c.under_in] == component;
    if (ro) std::swap(c.over_in, c.over_out);
    if (ru) std::swap(c.under_in, c.under_out);
    if (ro != ru) c.sign = -c.sign;
  }
  return out;
}

int edge_for_label(const LinkDiagram& diagram, int label) {
  for (std::size_t i = 0; i < diagram.labels.size(); ++i) {
    if (diagram.labels[i] != label) continue;
    int n = diagram.pd.num_edges;
    return static_cast<int>(i) < n ? static_cast<int>(i) : n + 2 * (static_cast<int>(i) - n);
  }
  throw MarkNotOnComponent("no edge labelled " + std::to_string(label));
}

LinkDiagram parse_pd(const std::string& text) {
  std::string body = text, orient;
  if (auto p = text.find("orient"); p != std::string::npos) {
    body = text.substr(0, p);
    orient = text.substr(p + 6);
  }
  struct Raw {
    int a, b, c, d;
  };
  std::vector<Raw> raw;
  std::size_t i = 0;
  while ((i = body.find('X', i)) != std::string::npos) {
    std::size_t open = body.find('[', i), close = body.find(']', i);
    if (open == std::string::npos || close == std::string::npos || close < open) parse_fail("malformed crossing in PD code");
    std::string inner = body.substr(open + 1, close - open - 1);
    std::replace(inner.begin(), inner.end(), ',', ' ');
    std::istringstream is(inner);
    Raw r{};
    if (!(is >> r.a >> r.b >> r.c >> r.d)) parse_fail("crossing needs four labels");
    std::string extra;
    if (is >> extra) parse_fail("crossing has more than four labels");
    raw.push_back(r);
    i = close + 1;
  }
  LinkDiagram d;
  d.name = "pd";
  if (raw.empty()) {
    d.pd.free_circles = 1;
    d.labels = {1};
    return d;
  }
  std::map<int, int> count;
  for (const auto& r : raw)
    for (int l : {r.a, r.b, r.c, r.d}) ++count[l];
  for (auto [l, n] : count)
    if (n != 2) parse_fail("label " + std::to_string(l) + " must appear exactly twice");
  // Slots: 2k is the under strand a-c of crossing k, 2k+1 the over strand b-d.
  const int ns = 2 * static_cast<int>(raw.size());
  auto ends = [&](int s) -> std::pair<int, int> {
    const Raw& r = raw[s / 2];
    return s % 2 == 0 ? std::make_pair(r.a, r.c) : std::make_pair(r.b, r.d);
  };
  std::map<int, std::vector<int>> slots_of;
  for (int s = 0; s < ns; ++s) {
    auto [p, q] = ends(s);
    slots_of[p].push_back(s);
    slots_of[q].push_back(s);
  }
  std::vector<int> in_label(ns, 0);
  std::vector<char> done(ns, 0);
  std::vector<int> component_min;  // per component, smallest label
  std::vector<int> slot_comp(ns, -1);
  for (int s0 = 0; s0 < ns; ++s0) {
    if (done[s0]) continue;
    // Collect the component's slots.
    std::vector<int> comp_slots;
    std::set<int> comp_labels;
    {
      std::vector<int> stack{s0};
      std::set<int> seen{s0};
      while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        comp_slots.push_back(s);
        auto [p, q] = ends(s);
        comp_labels.insert(p);
        comp_labels.insert(q);
        for (int l : {p, q})
          for (int t : slots_of[l])
            if (seen.insert(t).second) stack.push_back(t);
      }
    }
    std::sort(comp_slots.begin(), comp_slots.end());
    // Direction: an under strand fixes it; otherwise labels increase.
    int start = -1, start_in = 0;
    for (int s : comp_slots)
      if (s % 2 == 0) {
        start = s;
        start_in = ends(s).first;
        break;
      }
    if (start < 0) {
      int m = *comp_labels.begin();
      auto it = std::next(comp_labels.begin());
      int succ = it == comp_labels.end() ? m : *it;
      for (int s : comp_slots) {
        auto [p, q] = ends(s);
        if ((p == m && q == succ) || (q == m && p == succ)) {
          start = s;
          start_in = m;
          break;
        }
      }
      if (start < 0) parse_fail("cannot orient a component of the PD code");
    }
    // Propagate around the cycle.
    int s = start, in = start_in;
    const int cid = static_cast<int>(component_min.size());
    for (;;) {
      if (done[s]) break;
      done[s] = 1;
      in_label[s] = in;
      slot_comp[s] = cid;
      auto [p, q] = ends(s);
      int out = p == in ? q : p;
      if (p != in && q != in) parse_fail("inconsistent strand in PD code");
      const auto& occ = slots_of[out];
      int nxt = occ[0] == s && occ.size() > 1 && !(occ[1] == s) ? occ[1] : occ[0];
      if (occ[0] == s && occ[1] == s) break;
      if (nxt == s) nxt = occ[1];
      s = nxt;
      in = out;
    }
    for (int t : comp_slots) {
      if (!done[t]) parse_fail("PD component is not a single cycle");
      if (t % 2 == 0 && in_label[t] != ends(t).first)
        throw OrientationError("under strands of a component disagree on its orientation");
    }
    component_min.push_back(*comp_labels.begin());
  }
  std::map<int, int> internal;
  for (auto [l, n] : count) internal.emplace(l, static_cast<int>(internal.size()));
  for (auto [l, idx] : internal) d.labels.push_back(l);
  d.pd.num_edges = static_cast<int>(internal.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const Raw& r = raw[k];
    Crossing c;
    c.under_in = internal.at(r.a);
    c.under_out = internal.at(r.c);
    int over_in = in_label[2 * k + 1];
    if (over_in == r.d && r.b != r.d) {
      c.over_in = internal.at(r.d);
      c.over_out = internal.at(r.b);
      c.sign = +1;
    } else {
      c.over_in = internal.at(r.b);
      c.over_out = internal.at(r.d);
      c.sign = -1;
    }
    d.pd.crossings.push_back(c);
  }
  check_orientation(d.pd);
  // Optional component reversal, components ordered by smallest label.
  if (!orient.empty()) {
    std::replace_if(orient.begin(), orient.end(), [](char ch) { return ch == ':' || ch == ',' || ch == '[' || ch == ']'; }, ' ');
    std::istringstream is(orient);
    std::vector<int> flags;
    int f;
    while (is >> f) {
      if (f != 1 && f != -1) parse_fail("orientation flags must be +1 or -1");
      flags.push_back(f);
    }
    std::vector<int> order(component_min.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return component_min[x] < component_min[y]; });
    if (flags.size() != order.size()) parse_fail("one orientation flag per component required");
    auto comp = edge_components(d.pd);
    for (std::size_t j = 0; j < flags.size(); ++j) {
      if (flags[j] > 0) continue;
      int label_edge = internal.at(component_min[order[j]]);
      d = reverse_component(d, comp[label_edge]);
    }
  }
  return d;
}

std::string to_pd(const LinkDiagram& diagram) {
  const PlanarDiagram& pd = diagram.pd;
  std::vector<int> next(pd.num_edges, -1);
  for (const auto& c : pd.crossings) {
    next[c.over_in] = c.over_out;
    next[c.under_in] = c.under_out;
  }
  std::vector<int> label(pd.num_edges, 0);
  int counter = 1;
  for (int e = 0; e < pd.num_edges; ++e) {
    if (label[e]) continue;
    for (int x = e; !label[x]; x = next[x]) label[x] = counter++;
  }
  std::ostringstream os;
  for (const auto& c : pd.crossings) {
    int b, d;
    if (c.sign > 0) {
      d = label[c.over_in];
      b = label[c.over_out];
    } else {
      b = label[c.over_in];
      d = label[c.over_out];
    }
    os << "X[" << label[c.under_in] << "," << b << "," << label[c.under_out] << "," << d << "] ";
  }
  std::string s = os.str();
  if (!s.empty()) s.pop_back();
  return s;
}

// ---------------------------------------------------------------------------
// The cube of resolutions

namespace {

template <class Fn>
void parallel_for(int n, int threads, const std::atomic<bool>* cancel, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      if (failed.load() || (cancel && cancel->load())) return;
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  if (cancel && cancel->load()) throw Cancelled("computation cancelled");
}

struct Resolution {
  Web web;
  CompiledObject obj;
  Cohomology H;
  int qs = 0;
  int t = 0;
};

CompiledObject compile_with_cache(const Web& web, const KROptions& options) {
  CompileOptions co;
  co.verify = options.verify;
  co.cancel = options.cancel;
  std::vector<int> path = options.path_rule ? options.path_rule(web) : default_vertex_path(web);
  co.path = path;
  if (options.cache_dir.empty()) return compile_web(web, co);
  CompileCache cache(options.cache_dir);
  std::string key = CompileCache::make_key(web, path);
  if (auto hit = cache.load(key)) return *hit;
  CompiledObject obj = compile_web(web, co);
  cache.store(key, obj);
  return obj;
}

std::vector<int> mark_vars(const LinkDiagram& diagram, bool reduced, std::optional<int> mark_label) {
  if (!reduced) return {};
  int label = mark_label ? *mark_label : diagram.labels.at(0);
  return {edge_for_label(diagram, label)};
}

std::vector<Resolution> compile_cube(const LinkDiagram& diagram, int N, const std::vector<int>& zero,
                                     const KROptions& options) {
  const int s = static_cast<int>(diagram.pd.crossings.size());
  if (s > 20) throw Error("too many crossings");
  std::vector<Resolution> res(std::size_t(1) << s);
  parallel_for(static_cast<int>(res.size()), options.threads, options.cancel, [&](int m) {
    std::vector<int> states(s);
    int qs = 0, t = 0;
    for (int k = 0; k < s; ++k) {
      states[k] = m >> k & 1;
      CrossingKind kind = crossing_kind(diagram.pd.crossings[k]);
      qs += resolution_qshift(kind, states[k], N);
      t += resolution_t(kind, states[k]);
    }
    Resolution r;
    r.web = state_web_from_resolution(diagram.pd, states, N, zero);
    r.obj = compile_with_cache(r.web, options);
    r.H = closed_cohomology(r.obj);
    r.qs = qs;
    r.t = t;
    res[m] = std::move(r);
  });
  return res;
}

}  // namespace

KRResult kr_invariant(const LinkDiagram& diagram, int N, bool reduced, std::optional<int> mark_label,
                      const KROptions& options) {
  if (N < 1) throw Error("N must be at least 1");
  auto t_start = std::chrono::steady_clock::now();
  const std::vector<int> zero = mark_vars(diagram, reduced, mark_label);
  const int s = static_cast<int>(diagram.pd.crossings.size());
  std::vector<Resolution> res = compile_cube(diagram, N, zero, options);
  const int nres = static_cast<int>(res.size());

  // Induced maps on cohomology along the cube edges.
  struct CubeEdge {
    int from, to;
    QMatrix map;
  };
  std::vector<CubeEdge> cube;
  for (int m = 0; m < nres; ++m)
    for (int k = 0; k < s; ++k)
      if (!(m >> k & 1)) cube.push_back(CubeEdge{m, m | (1 << k), {}});
  parallel_for(static_cast<int>(cube.size()), options.threads, options.cancel, [&](int i) {
    CubeEdge& ce = cube[i];
    int k = std::countr_zero(unsigned(ce.from ^ ce.to));
    const Vertex& vx = res[ce.from].web.vertices[k];
    const Web& w = res[ce.from].web;
    CrossingVars vars{w.edges[vx.in[0]].var, w.edges[vx.in[1]].var, w.edges[vx.out[0]].var,
                      w.edges[vx.out[1]].var};
    CrossingData cd = make_crossing_data(N, vars, zero);
    const MFMorphism& phi = crossing_kind(diagram.pd.crossings[k]) == CrossingKind::Over ? cd.chi0 : cd.chi1;
    PolyMatrix M = compile_morphism(res[ce.from].obj, res[ce.to].obj, phi.matrix, k, options.cancel);
    for (int r = 0; r < M.rows(); ++r)
      for (int c = 0; c < M.cols(); ++c)
        if (!M(r, c).is_constant()) throw Error("compiled crossing map is not over Q");
    QMatrix HM = res[ce.to].H.projection * M.constant_part() * res[ce.from].H.section;
    if (std::popcount(unsigned(ce.from & ((1u << k) - 1))) % 2) HM = Rational(-1) * HM;
    ce.map = std::move(HM);
  });

  // Totalise by cohomological degree.
  std::map<int, std::vector<std::pair<int, int>>> gens;  // t -> (resolution, index)
  for (int m = 0; m < nres; ++m)
    for (int j = 0; j < static_cast<int>(res[m].H.space.size()); ++j) gens[res[m].t].push_back({m, j});
  auto position = [&](int t) {
    std::map<std::pair<int, int>, int> pos;
    auto it = gens.find(t);
    if (it != gens.end())
      for (std::size_t i = 0; i < it->second.size(); ++i) pos[it->second[i]] = static_cast<int>(i);
    return pos;
  };
  auto size_at = [&](int t) {
    auto it = gens.find(t);
    return it == gens.end() ? 0 : static_cast<int>(it->second.size());
  };
  std::map<int, QMatrix> D;  // D[t]: degree t -> t + 1
  int tmin = res.empty() ? 0 : res[0].t, tmax = tmin;
  for (const auto& r : res) {
    tmin = std::min(tmin, r.t);
    tmax = std::max(tmax, r.t);
  }
  for (int t = tmin - 1; t <= tmax; ++t) D[t] = QMatrix(size_at(t + 1), size_at(t));
  {
    std::map<int, std::map<std::pair<int, int>, int>> pos;
    for (int t = tmin; t <= tmax; ++t) pos[t] = position(t);
    for (const auto& ce : cube) {
      int t = res[ce.from].t;
      QMatrix& Dt = D[t];
      for (int r = 0; r < ce.map.rows(); ++r)
        for (int c = 0; c < ce.map.cols(); ++c)
          if (ce.map(r, c) != 0) Dt(pos[t + 1].at({ce.to, r}), pos[t].at({ce.from, c})) += ce.map(r, c);
    }
  }
  for (int t = tmin; t < tmax; ++t)
    if (!(D[t + 1] * D[t]).is_zero()) throw NotAComplex("cube differential does not square to zero");

  KRResult result;
  result.N = N;
  result.reduced = reduced;
  result.mark_label = reduced ? (mark_label ? *mark_label : diagram.labels.at(0)) : 0;
  result.parity = parity(res[0].web);
  for (int t = tmin; t <= tmax; ++t) {
    std::map<std::pair<int, int>, std::vector<int>> blocks;  // (q, par) -> positions
    const auto& g = gens[t];
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Resolution& r = res[g[i].first];
      Bidegree b = r.H.space[g[i].second];
      blocks[{b.deg + r.qs, b.par}].push_back(static_cast<int>(i));
    }
    for (const auto& [key, idx] : blocks) {
      int out_rank = rank(D[t].select_cols(idx));
      int in_rank = rank(D[t - 1].select_rows(idx));
      int h = static_cast<int>(idx.size()) - out_rank - in_rank;
      if (h) result.by_parity[key.second].add(t, key.first, h);
    }
  }
  result.poincare = reduced ? result.by_parity[result.parity].shifted(0, N - 1) : result.by_parity[result.parity];
  for (int m = 0; m < nres; ++m) {
    ResolutionInfo info;
    for (int k = 0; k < s; ++k) info.state.push_back(m >> k & 1);
    info.compiled_rank = res[m].obj.mf.rank();
    info.qshift = res[m].qs;
    info.t = res[m].t;
    info.cohomology = dimensions(res[m].H.space);
    result.resolutions.push_back(std::move(info));
  }
  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

// ---------------------------------------------------------------------------
// Structural checks

namespace {

using QPoly = std::map<int, long>;

QPoly q_poly(const std::map<Bidegree, int>& dims, int par, int shift) {
  QPoly p;
  for (auto [b, n] : dims)
    if (b.par == par) p[b.deg + shift] += n;
  return p;
}

void add_shifted(QPoly& acc, const QPoly& p, long sign, int shift) {
  for (auto [q, c] : p) {
    acc[q + shift] += sign * c;
    if (acc[q + shift] == 0) acc.erase(q + shift);
  }
}

QMatrix matrix_power(const QMatrix& m, int k) {
  QMatrix r = QMatrix::identity(m.rows());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

}  // namespace

AppendixCReport appendix_c_checks(const LinkDiagram& diagram, int N, std::optional<int> mark_label,
                                  const KROptions& options) {
  AppendixCReport rep;
  const std::vector<int> zero = mark_vars(diagram, true, mark_label);
  const int mark_var = zero[0];
  std::vector<Resolution> full = compile_cube(diagram, N, {}, options);
  std::vector<Resolution> red = compile_cube(diagram, N, zero, options);
  auto fail = [&](bool& flag, const std::string& msg) {
    flag = false;
    rep.failures.push_back(msg);
  };
  for (std::size_t m = 0; m < full.size(); ++m) {
    const std::string tag = "resolution " + std::to_string(m);
    const int p = parity(full[m].web);
    auto dims = dimensions(full[m].H.space);
    for (auto [b, n] : dims)
      if (b.par != p) {
        fail(rep.parity_concentrated, tag + ": cohomology outside the parity degree");
        break;
      }
    // x_mark acts on H with Jordan blocks of size exactly N.
    PolyMatrix X = compile_multiplication(full[m].obj, mark_var);
    QMatrix HX = full[m].H.projection * X.constant_part() * full[m].H.section;
    const int dim = static_cast<int>(full[m].H.space.size());
    if (!matrix_power(HX, N).is_zero() || dim % N != 0 || rank(matrix_power(HX, N - 1)) * N != dim)
      fail(rep.free_module, tag + ": H is not free over Q[x]/(x^N)");
    // q^{N-1} Hbar^{p+1} - H + q^{-2} H - q^{-2} Hbar^p = 0
    auto rdims = dimensions(red[m].H.space);
    QPoly acc;
    add_shifted(acc, q_poly(rdims, 1 - p, 0), 1, N - 1);
    add_shifted(acc, q_poly(dims, p, 0), -1, 0);
    add_shifted(acc, q_poly(dims, p, 0), 1, -2);
    add_shifted(acc, q_poly(rdims, p, 0), -1, -2);
    if (!acc.empty()) fail(rep.sequence_balanced, tag + ": exact sequence dimensions do not balance");
  }
  KRResult unreduced = kr_invariant(diagram, N, false, {}, options);
  if (!unreduced.by_parity[1 - unreduced.parity].is_zero())
    fail(rep.parity_concentrated, "link homology outside the parity degree");
  KRResult reduced = kr_invariant(diagram, N, true, mark_label, options);
  const int p = reduced.parity;
  if (!(reduced.by_parity[1 - p] == reduced.by_parity[p].shifted(0, N - 1)))
    fail(rep.reduced_shift_relation, "reduced odd and even parts are not related by {N-1}");
  return rep;
}

// ---------------------------------------------------------------------------
// Built-in diagrams

namespace {

LaurentPoly2 mono(int t, int q, long c = 1) {
  LaurentPoly2 p;
  p.add(t, q, c);
  return p;
}

// (q^A - q^B) / (q^2 - 1) t^t for A >= B of equal parity.
LaurentPoly2 quotient(int A, int B, int t) {
  LaurentPoly2 p;
  for (int j = 0; j < (A - B) / 2; ++j) p.add(t, B + 2 * j, 1);
  return p;
}

}  // namespace

const std::vector<BuiltinLink>& builtin_links() {
  static const std::vector<BuiltinLink> table = [] {
    std::vector<BuiltinLink> v;
    v.push_back({"unknot", "0_1", "", 1, {}, [](int) { return mono(0, 0); }});
    auto hopf = [](int N) { return mono(0, 1 - N) + quotient(-N - 1, 1 - 3 * N, 2); };
    v.push_back({"hopf_v1", "2^2_1 (v1)", "s1^-1 s1^-1", 2, {}, hopf});
    v.push_back({"hopf_v2", "2^2_1 (v2)", "s1 s1", 2, {0}, hopf});
    v.push_back({"trefoil", "3_1", "s1 s1 s1", 2, {}, [](int N) {
                   return mono(-3, 4 * N) + mono(-2, 2 + 2 * N) + mono(0, 2 * N - 2);
                 }});
    v.push_back({"figure_eight", "4_1", "s1 s2^-1 s1 s2^-1", 3, {}, [](int N) {
                   return mono(0, 0) + mono(-2, 2 * N) + mono(-1, 2) + mono(1, -2) + mono(2, -2 * N);
                 }});
    v.push_back({"solomon_v1", "4^2_1 (v1)", "s1 s1 s1 s1", 2, {0}, [](int N) {
                   return mono(0, 1 - N) + mono(1, -N - 1) + mono(2, 1 - 3 * N) + quotient(-3 * N - 1, 1 - 5 * N, 4);
                 }});
    v.push_back({"solomon_v2", "4^2_1 (v2)", "s1 s1 s1 s1", 2, {}, [](int N) {
                   return mono(0, 3 * N - 3) + quotient(5 * N + 3, 3 * N + 5, -4) + mono(-3, 5 * N - 1) +
                          mono(-2, 3 * N + 1);
                 }});
    v.push_back({"5_1", "5_1", "s1^-1 s1^-1 s1^-1 s1^-1 s1^-1", 2, {}, [](int N) {
                   return mono(0, 4 - 4 * N) + mono(2, -4 * N) + mono(3, 2 - 6 * N) + mono(4, -4 - 4 * N) +
                          mono(5, -2 - 6 * N);
                 }});
    v.push_back({"5_2", "5_2", "s1^-1 s1^-1 s1^-1 s2^-1 s1 s2^-1", 3, {}, [](int N) {
                   return mono(0, 2 - 2 * N) + mono(1, -2 * N) + mono(2, 2 - 4 * N) + mono(2, -2 - 2 * N) +
                          mono(3, -4 * N) + mono(4, -2 - 4 * N) + mono(5, -6 * N);
                 }});
    v.push_back({"whitehead", "5^2_1", "s1 s1 s2^-1 s1 s2^-1", 3, {}, [](int N) {
                   return mono(0, 1 - N) + quotient(N - 1, 1 - N, 0) + mono(-2, N + 1) + mono(-1, 3 - N) +
                          mono(1, -N - 1) + mono(2, 1 - 3 * N) + mono(2, -N - 3) + mono(3, -3 * N - 1);
                 }});
    v.push_back({"6_1", "6_1", "s1 s1 s2 s1^-1 s3^-1 s2 s3^-1", 4, {}, [](int N) {
                   return mono(0, 0, 2) + mono(-2, 2 * N) + mono(-1, 2) + mono(1, -2) + mono(1, 2 - 2 * N) +
                          mono(2, -2 * N) + mono(3, -2 * N - 2) + mono(4, -4 * N);
                 }});
    v.push_back({"6_2", "6_2", "s1 s1 s1 s2^-1 s1 s2^-1", 3, {}, [](int N) {
                   return mono(0, -2) + mono(0, 2 - 2 * N) + mono(-2, 2) + mono(-1, 4 - 2 * N) +
                          mono(1, -2 * N, 2) + mono(2, 2 - 4 * N) + mono(2, -N - 2) + mono(3, -4 * N) +
                          mono(3, -2 * N - 4) + mono(4, -4 * N - 2);
                 }});
    v.push_back({"6_3", "6_3", "s1 s1 s2^-1 s1 s2^-1 s2^-1", 3, {}, [](int N) {
                   return mono(0, 0, 3) + mono(-3, 2 * N + 2) + mono(-2, 4) + mono(-2, 2 * N) + mono(-1, 2) +
                          mono(-1, 2 * N - 2) + mono(1, -2) + mono(1, 2 - 2 * N) + mono(2, -4) + mono(2, -2 * N) +
                          mono(3, -2 * N - 2);
                 }});
    return v;
  }();
  return table;
}

LinkDiagram builtin_diagram(const std::string& name) {
  for (const auto& b : builtin_links()) {
    if (b.name != name && b.display != name) continue;
    LinkDiagram d = parse_braid(b.braid, b.strands);
    for (int c : b.reversed) d = reverse_component(d, c);
    d.name = b.name;
    d.braid = b.braid;
    return d;
  }
  throw ParseError("unknown link '" + name + "'");
}

}  // namespace kr
