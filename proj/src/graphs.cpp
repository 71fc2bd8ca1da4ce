#include "logtrop/graphs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "logtrop/error.hpp"

namespace logtrop {

namespace {

bool connected(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
  if (num_vertices == 0) return false;
  std::vector<int> parent(num_vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = num_vertices;
  for (auto [u, v] : edges) {
    int a = find(u), b = find(v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

StableGraph::StableGraph(std::vector<int> vertex_genus, std::vector<std::pair<int, int>> edges,
                         std::vector<int> legs)
    : vertex_genus_(std::move(vertex_genus)), edges_(std::move(edges)), legs_(std::move(legs)) {
  const int V = num_vertices();
  if (V == 0) throw Error("InvalidGraph", "graph has no vertices");
  for (int g : vertex_genus_)
    if (g < 0) throw Error("InvalidGraph", "negative vertex genus");
  for (auto [u, v] : edges_)
    if (u < 0 || u >= V || v < 0 || v >= V) throw Error("InvalidGraph", "edge endpoint out of range");
  for (int v : legs_)
    if (v < 0 || v >= V) throw Error("InvalidGraph", "leg vertex out of range");
  if (!connected(V, edges_)) throw Error("InvalidGraph", "graph is not connected");
  for (int v = 0; v < V; ++v) {
    if (2 * vertex_genus_[v] - 2 + valence(v) <= 0)
      throw Error("InvalidGraph", "vertex " + std::to_string(v) + " is unstable");
  }
}

StableGraph StableGraph::smooth(int g, int n) {
  if (2 * g - 2 + n <= 0) throw Error("UnstableSignature", "2g-2+n must be positive");
  return StableGraph({g}, {}, std::vector<int>(n, 0));
}

int StableGraph::genus() const {
  return std::accumulate(vertex_genus_.begin(), vertex_genus_.end(), 0) + first_betti();
}

int StableGraph::valence(int v) const {
  int n = 0;
  for (auto [a, b] : edges_) n += (a == v) + (b == v);
  for (int w : legs_) n += (w == v);
  return n;
}

std::vector<int> StableGraph::legs_at(int v) const {
  std::vector<int> out;
  for (int i = 0; i < num_legs(); ++i)
    if (legs_[i] == v) out.push_back(i);
  return out;
}

int StableGraph::half_edge_vertex(int h) const {
  const int twoE = 2 * num_edges();
  if (h < twoE) return (h % 2 == 0) ? edges_[h / 2].first : edges_[h / 2].second;
  return legs_[h - twoE];
}

int StableGraph::involution(int h) const {
  if (h < 2 * num_edges()) return h ^ 1;
  return h;
}

std::string to_string(const Coord& c) {
  return c.leg ? "l_" + std::to_string(c.index + 1) : "l_e" + std::to_string(c.index);
}

RawGraph RawGraph::from_edges(int genus, std::vector<std::pair<int, int>> vertices,
                              const std::vector<std::pair<int, int>>& edges,
                              const std::vector<int>& leg_vertices) {
  RawGraph raw;
  raw.genus = genus;
  raw.vertices = std::move(vertices);
  for (auto [u, v] : edges) {
    int h = static_cast<int>(raw.half_edge_vertex.size());
    raw.half_edge_vertex.push_back(u);
    raw.half_edge_vertex.push_back(v);
    raw.involution.push_back(h + 1);
    raw.involution.push_back(h);
  }
  for (int v : leg_vertices) {
    int h = static_cast<int>(raw.half_edge_vertex.size());
    raw.half_edge_vertex.push_back(v);
    raw.involution.push_back(h);
    raw.legs.push_back(h);
  }
  return raw;
}

ValidationResult validate_graph(const RawGraph& raw) {
  ValidationResult result;
  auto issue = [&](std::string code, int vertex, std::string detail) {
    result.issues.push_back({std::move(code), vertex, std::move(detail)});
  };

  std::map<int, int> index_of;
  for (std::size_t i = 0; i < raw.vertices.size(); ++i) {
    if (!index_of.emplace(raw.vertices[i].first, static_cast<int>(i)).second)
      issue("UnknownVertex", raw.vertices[i].first, "duplicate vertex id");
    if (raw.vertices[i].second < 0) issue("GenusMismatch", raw.vertices[i].first, "negative vertex genus");
  }
  const int H = static_cast<int>(raw.half_edge_vertex.size());
  bool structural_ok = raw.involution.size() == raw.half_edge_vertex.size();
  if (!structural_ok) issue("BadInvolution", -1, "involution and incidence have different sizes");

  std::vector<int> vertex_of(H, -1);
  for (int h = 0; h < H; ++h) {
    auto it = index_of.find(raw.half_edge_vertex[h]);
    if (it == index_of.end()) {
      issue("UnknownVertex", raw.half_edge_vertex[h], "half-edge " + std::to_string(h) + " attached to unknown vertex");
      structural_ok = false;
    } else {
      vertex_of[h] = it->second;
    }
  }
  if (structural_ok) {
    for (int h = 0; h < H; ++h) {
      int j = raw.involution[h];
      if (j < 0 || j >= H || raw.involution[j] != h) {
        issue("BadInvolution", -1, "half-edge " + std::to_string(h) + " is not paired consistently");
        structural_ok = false;
      }
    }
  }

  std::set<int> fixed;
  if (structural_ok)
    for (int h = 0; h < H; ++h)
      if (raw.involution[h] == h) fixed.insert(h);
  std::set<int> listed(raw.legs.begin(), raw.legs.end());
  if (listed.size() != raw.legs.size()) issue("LegCountMismatch", -1, "a leg is listed twice");
  for (int h : raw.legs) {
    if (h < 0 || h >= H) {
      issue("LegCountMismatch", -1, "leg " + std::to_string(h) + " is not a half-edge");
      structural_ok = false;
    } else if (structural_ok && raw.involution[h] != h) {
      issue("LegCountMismatch", -1, "leg half-edge " + std::to_string(h) + " is not fixed by the involution");
    }
  }
  if (structural_ok && fixed != listed)
    issue("LegCountMismatch", -1,
          std::to_string(fixed.size()) + " fixed half-edges but " + std::to_string(raw.legs.size()) + " legs");
  if (!structural_ok || raw.vertices.empty()) {
    if (raw.vertices.empty()) issue("NotConnected", -1, "graph has no vertices");
    return result;
  }

  const int V = static_cast<int>(raw.vertices.size());
  std::vector<std::pair<int, int>> edges;
  for (int h = 0; h < H; ++h) {
    int j = raw.involution[h];
    if (j > h) edges.emplace_back(vertex_of[h], vertex_of[j]);
  }
  if (!connected(V, edges)) issue("NotConnected", -1, "underlying graph is not connected");

  std::vector<int> valence(V, 0);
  for (int h = 0; h < H; ++h) ++valence[vertex_of[h]];
  int genus_sum = 0;
  for (int v = 0; v < V; ++v) {
    int g = raw.vertices[v].second;
    genus_sum += g;
    if (2 * g - 2 + valence[v] <= 0)
      issue("UnstableVertex", raw.vertices[v].first,
            "2g(v)-2+n(v) = " + std::to_string(2 * g - 2 + valence[v]) + " is not positive");
  }
  int h1 = static_cast<int>(edges.size()) - V + 1;
  if (connected(V, edges) && genus_sum + h1 != raw.genus)
    issue("GenusMismatch", -1,
          "sum of vertex genera plus h1 is " + std::to_string(genus_sum + h1) + ", declared " +
              std::to_string(raw.genus));
  if (!result.issues.empty()) return result;

  std::vector<int> legs;
  for (int h : raw.legs) legs.push_back(vertex_of[h]);
  std::vector<int> genera;
  for (auto& v : raw.vertices) genera.push_back(v.second);
  result.graph = StableGraph(std::move(genera), std::move(edges), std::move(legs));
  return result;
}

namespace {

std::vector<std::vector<int>> multiplicities(const StableGraph& g) {
  const int V = g.num_vertices();
  std::vector<std::vector<int>> m(V, std::vector<int>(V, 0));
  for (auto [u, v] : g.edges()) {
    ++m[u][v];
    if (u != v) ++m[v][u];
  }
  return m;
}

std::vector<int> refine_colors(const StableGraph& g, const std::vector<std::vector<int>>& mult) {
  const int V = g.num_vertices();
  std::vector<std::vector<int>> keys(V);
  for (int v = 0; v < V; ++v) {
    auto legs = g.legs_at(v);
    keys[v] = {g.vertex_genus(v), static_cast<int>(legs.size())};
    keys[v].insert(keys[v].end(), legs.begin(), legs.end());
    keys[v].push_back(g.valence(v));
    keys[v].push_back(mult[v][v]);
  }
  std::vector<int> color(V);
  int num_colors = 0;
  while (true) {
    std::vector<std::vector<int>> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int v = 0; v < V; ++v)
      color[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[v]) - sorted.begin());
    int count = static_cast<int>(sorted.size());
    if (count == num_colors) break;
    num_colors = count;
    for (int v = 0; v < V; ++v) {
      std::vector<std::pair<int, int>> nbrs;
      for (int w = 0; w < V; ++w)
        if (w != v && mult[v][w] > 0) nbrs.emplace_back(color[w], mult[v][w]);
      std::sort(nbrs.begin(), nbrs.end());
      keys[v] = {color[v]};
      for (auto [c, m] : nbrs) {
        keys[v].push_back(c);
        keys[v].push_back(m);
      }
    }
  }
  return color;
}

std::vector<int> encode(const StableGraph& g, const std::vector<std::vector<int>>& mult,
                        const std::vector<int>& order) {
  const int V = g.num_vertices();
  std::vector<int> pos(V);
  for (int i = 0; i < V; ++i) pos[order[i]] = i;
  std::vector<int> code = {V, g.num_edges(), g.num_legs()};
  std::vector<std::vector<int>> legs(V);
  for (int i = 0; i < g.num_legs(); ++i) legs[pos[g.leg_vertex(i)]].push_back(i);
  for (int i = 0; i < V; ++i) {
    code.push_back(g.vertex_genus(order[i]));
    code.push_back(static_cast<int>(legs[i].size()));
    code.insert(code.end(), legs[i].begin(), legs[i].end());
  }
  for (int i = 0; i < V; ++i)
    for (int j = i; j < V; ++j) code.push_back(mult[order[i]][order[j]]);
  return code;
}

// Calls f(order) for every vertex order that lists color classes in increasing
// color and permutes freely inside each class.
template <typename F>
void for_each_order(const std::vector<int>& color, F&& f, std::uint64_t cap) {
  const int V = static_cast<int>(color.size());
  int num_colors = V ? *std::max_element(color.begin(), color.end()) + 1 : 0;
  std::vector<std::vector<int>> classes(num_colors);
  for (int v = 0; v < V; ++v) classes[color[v]].push_back(v);
  std::uint64_t total = 1;
  for (auto& c : classes) {
    for (std::size_t k = 2; k <= c.size(); ++k) {
      total *= k;
      if (total > cap) throw Error("ResourceBound", "canonical form search exceeds the permutation cap");
    }
  }
  std::vector<int> order;
  order.reserve(V);
  std::function<void(std::size_t)> rec = [&](std::size_t ci) {
    if (ci == classes.size()) {
      f(order);
      return;
    }
    auto members = classes[ci];
    do {
      std::size_t mark = order.size();
      order.insert(order.end(), members.begin(), members.end());
      rec(ci + 1);
      order.resize(mark);
    } while (std::next_permutation(members.begin(), members.end()));
  };
  rec(0);
}

constexpr std::uint64_t kPermutationCap = 2000000;

}  // namespace

CanonicalForm canonical_form(const StableGraph& g, const GraphLimits& limits) {
  if (g.num_vertices() > limits.max_vertices || g.num_edges() > limits.max_edges)
    throw Error("ResourceBound", "graph exceeds the configured vertex/edge cap");
  auto mult = multiplicities(g);
  auto color = refine_colors(g, mult);
  std::vector<int> best_code, best_order;
  std::uint64_t count = 0;
  for_each_order(
      color,
      [&](const std::vector<int>& order) {
        auto code = encode(g, mult, order);
        if (best_code.empty() || code < best_code) {
          best_code = std::move(code);
          best_order = order;
          count = 1;
        } else if (code == best_code) {
          ++count;
        }
      },
      kPermutationCap);

  const int V = g.num_vertices();
  std::vector<int> pos(V);
  for (int i = 0; i < V; ++i) pos[best_order[i]] = i;

  std::vector<int> genera(V);
  for (int i = 0; i < V; ++i) genera[i] = g.vertex_genus(best_order[i]);
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, int> class_start;
  for (int i = 0; i < V; ++i)
    for (int j = i; j < V; ++j) {
      int m = mult[best_order[i]][best_order[j]];
      class_start[{i, j}] = static_cast<int>(edges.size());
      for (int k = 0; k < m; ++k) edges.emplace_back(i, j);
    }
  std::vector<int> edge_map(g.num_edges());
  std::vector<bool> flipped(g.num_edges(), false);
  std::map<std::pair<int, int>, int> used;
  for (int e = 0; e < g.num_edges(); ++e) {
    int a = pos[g.edge(e).first], b = pos[g.edge(e).second];
    std::pair<int, int> key = {std::min(a, b), std::max(a, b)};
    edge_map[e] = class_start[key] + used[key]++;
    flipped[e] = a > b;
  }
  std::vector<int> legs(g.num_legs());
  for (int i = 0; i < g.num_legs(); ++i) legs[i] = pos[g.leg_vertex(i)];

  return CanonicalForm{StableGraph(std::move(genera), std::move(edges), std::move(legs)),
                       std::move(pos),
                       std::move(edge_map),
                       std::move(flipped),
                       std::move(best_code),
                       count};
}

std::string digest_of_code(const std::vector<int>& code) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (int c : code) {
    if (c < 0 || c > 255) throw Error("ResourceBound", "canonical code entry out of byte range");
    out.push_back(hex[c >> 4]);
    out.push_back(hex[c & 15]);
  }
  return out;
}

std::string digest(const StableGraph& g) { return digest_of_code(canonical_form(g).code); }

bool isomorphic(const StableGraph& a, const StableGraph& b) {
  return canonical_form(a).code == canonical_form(b).code;
}

Integer automorphism_count(const StableGraph& g) {
  auto cf = canonical_form(g);
  Integer count = static_cast<unsigned long>(cf.vertex_automorphisms);
  auto mult = multiplicities(cf.graph);
  const int V = cf.graph.num_vertices();
  for (int u = 0; u < V; ++u) {
    count *= factorial(static_cast<unsigned>(mult[u][u]));
    Integer two_power = 1;
    mpz_mul_2exp(two_power.get_mpz_t(), two_power.get_mpz_t(), static_cast<mp_bitcnt_t>(mult[u][u]));
    count *= two_power;
    for (int v = u + 1; v < V; ++v) count *= factorial(static_cast<unsigned>(mult[u][v]));
  }
  return count;
}

std::vector<std::vector<int>> edge_automorphisms(const StableGraph& g, std::size_t cap) {
  const int V = g.num_vertices();
  const int E = g.num_edges();
  auto mult = multiplicities(g);
  auto color = refine_colors(g, mult);
  std::vector<int> identity(V);
  std::iota(identity.begin(), identity.end(), 0);

  // Edge classes: parallel edges between the same unordered vertex pair.
  std::map<std::pair<int, int>, std::vector<int>> classes;
  for (int e = 0; e < E; ++e) {
    auto [a, b] = g.edge(e);
    classes[{std::min(a, b), std::max(a, b)}].push_back(e);
  }

  std::vector<std::vector<int>> generators;
  auto base = encode(g, mult, identity);
  for_each_order(
      color,
      [&](const std::vector<int>& order) {
        if (encode(g, mult, order) != base) return;
        // order[i] plays the role of i, so sigma(order[i]) = i is an automorphism.
        std::vector<int> sigma(V);
        for (int i = 0; i < V; ++i) sigma[order[i]] = i;
        std::vector<int> perm(E);
        for (auto& [key, members] : classes) {
          int a = sigma[key.first], b = sigma[key.second];
          const auto& image = classes.at({std::min(a, b), std::max(a, b)});
          for (std::size_t k = 0; k < members.size(); ++k) perm[members[k]] = image[k];
        }
        generators.push_back(std::move(perm));
      },
      kPermutationCap);
  for (auto& [key, members] : classes) {
    for (std::size_t k = 0; k + 1 < members.size(); ++k) {
      std::vector<int> perm(E);
      std::iota(perm.begin(), perm.end(), 0);
      std::swap(perm[members[k]], perm[members[k + 1]]);
      generators.push_back(std::move(perm));
    }
  }

  std::vector<int> id(E);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> group = {id};
  std::vector<std::vector<int>> frontier = {id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& p : frontier) {
      for (const auto& s : generators) {
        std::vector<int> q(E);
        for (int e = 0; e < E; ++e) q[e] = s[p[e]];
        if (group.insert(q).second) {
          if (group.size() > cap) throw Error("ResourceBound", "automorphism group exceeds cap");
          next.push_back(std::move(q));
        }
      }
    }
    frontier = std::move(next);
  }
  return {group.begin(), group.end()};
}

namespace {

// All graphs obtained from g by splitting one vertex, i.e. every graph with
// one more edge whose contraction of that edge is g.
std::vector<StableGraph> splittings(const StableGraph& g) {
  std::vector<StableGraph> out;
  const int V = g.num_vertices();
  for (int v = 0; v < V; ++v) {
    if (g.vertex_genus(v) >= 1) {
      auto genera = g.vertex_genera();
      --genera[v];
      auto edges = g.edges();
      edges.emplace_back(v, v);
      out.emplace_back(std::move(genera), std::move(edges), g.legs());
    }
    // Slots at v: legs, then edge ends.
    struct Slot {
      bool leg;
      int index;
      int end;
    };
    std::vector<Slot> slots;
    for (int i = 0; i < g.num_legs(); ++i)
      if (g.leg_vertex(i) == v) slots.push_back({true, i, 0});
    for (int e = 0; e < g.num_edges(); ++e) {
      if (g.edge(e).first == v) slots.push_back({false, e, 0});
      if (g.edge(e).second == v) slots.push_back({false, e, 1});
    }
    const int s = static_cast<int>(slots.size());
    const int gv = g.vertex_genus(v);
    for (int mask = 0; mask < (1 << s); ++mask) {
      int moved = __builtin_popcount(static_cast<unsigned>(mask));
      for (int hw = 0; hw <= gv; ++hw) {
        int hv = gv - hw;
        if (2 * hv - 2 + (s - moved) + 1 <= 0) continue;
        if (2 * hw - 2 + moved + 1 <= 0) continue;
        auto genera = g.vertex_genera();
        genera[v] = hv;
        genera.push_back(hw);
        auto edges = g.edges();
        auto legs = g.legs();
        for (int k = 0; k < s; ++k) {
          if (!(mask >> k & 1)) continue;
          const auto& sl = slots[k];
          if (sl.leg) {
            legs[sl.index] = V;
          } else if (sl.end == 0) {
            edges[sl.index].first = V;
          } else {
            edges[sl.index].second = V;
          }
        }
        edges.emplace_back(v, V);
        out.emplace_back(std::move(genera), std::move(edges), std::move(legs));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<EnumeratedGraph> enumerate_stable_graphs(int g, int n, const GraphLimits& limits) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0)
    throw Error("UnstableSignature", "2g-2+n must be positive for (" + std::to_string(g) + "," +
                                         std::to_string(n) + ")");
  if (3 * g - 3 + n > limits.max_edges || 2 * g - 2 + n > limits.max_vertices)
    throw Error("ResourceBound", "G_{" + std::to_string(g) + "," + std::to_string(n) +
                                     "} exceeds the configured vertex/edge cap");
  std::vector<EnumeratedGraph> result;
  std::map<std::vector<int>, StableGraph> level;
  {
    auto cf = canonical_form(StableGraph::smooth(g, n), limits);
    level.emplace(cf.code, cf.graph);
  }
  while (!level.empty()) {
    std::map<std::vector<int>, StableGraph> next;
    for (auto& [code, graph] : level) {
      result.push_back({graph, automorphism_count(graph), digest_of_code(code)});
      for (auto& split : splittings(graph)) {
        auto cf = canonical_form(split, limits);
        next.emplace(std::move(cf.code), std::move(cf.graph));
      }
    }
    level = std::move(next);
  }
  return result;
}

Contraction contract_edges(const StableGraph& g, const std::vector<int>& edges) {
  const int V = g.num_vertices();
  std::vector<bool> contracted(g.num_edges(), false);
  for (int e : edges) {
    if (e < 0 || e >= g.num_edges()) throw Error("NotAnEdge", "edge " + std::to_string(e) + " out of range");
    contracted[e] = true;
  }
  std::vector<int> parent(V);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!contracted[e]) continue;
    int a = find(g.edge(e).first), b = find(g.edge(e).second);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> vertex_map(V, -1);
  std::vector<int> root_index(V, -1);
  int next = 0;
  for (int v = 0; v < V; ++v) {
    int r = find(v);
    if (root_index[r] < 0) root_index[r] = next++;
    vertex_map[v] = root_index[r];
  }
  std::vector<int> genera(next, 0), class_vertices(next, 0), class_edges(next, 0);
  for (int v = 0; v < V; ++v) {
    genera[vertex_map[v]] += g.vertex_genus(v);
    ++class_vertices[vertex_map[v]];
  }
  for (int e = 0; e < g.num_edges(); ++e)
    if (contracted[e]) ++class_edges[vertex_map[g.edge(e).first]];
  for (int c = 0; c < next; ++c) genera[c] += class_edges[c] - class_vertices[c] + 1;

  std::vector<std::pair<int, int>> new_edges;
  std::vector<int> edge_map(g.num_edges(), -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (contracted[e]) continue;
    edge_map[e] = static_cast<int>(new_edges.size());
    new_edges.emplace_back(vertex_map[g.edge(e).first], vertex_map[g.edge(e).second]);
  }
  std::vector<int> legs(g.num_legs());
  for (int i = 0; i < g.num_legs(); ++i) legs[i] = vertex_map[g.leg_vertex(i)];
  return {StableGraph(std::move(genera), std::move(new_edges), std::move(legs)), std::move(vertex_map),
          std::move(edge_map)};
}

Gluing glue_graphs(const StableGraph& g1, int p, const StableGraph& g2, int q) {
  if (p < 0 || p >= g1.num_legs()) throw Error("NotALeg", "leg " + std::to_string(p + 1) + " of the first graph");
  if (q < 0 || q >= g2.num_legs()) throw Error("NotALeg", "leg " + std::to_string(q + 1) + " of the second graph");
  const int V1 = g1.num_vertices();
  auto genera = g1.vertex_genera();
  genera.insert(genera.end(), g2.vertex_genera().begin(), g2.vertex_genera().end());
  auto edges = g1.edges();
  for (auto [u, v] : g2.edges()) edges.emplace_back(u + V1, v + V1);
  Gluing out{StableGraph::smooth(0, 3), 0, {}, {}, V1, g1.num_edges()};
  out.new_edge = static_cast<int>(edges.size());
  edges.emplace_back(g1.leg_vertex(p), g2.leg_vertex(q) + V1);
  std::vector<int> legs;
  for (int i = 0; i < g1.num_legs(); ++i) {
    if (i == p) {
      out.first_leg_map.push_back(-1);
      continue;
    }
    out.first_leg_map.push_back(static_cast<int>(legs.size()));
    legs.push_back(g1.leg_vertex(i));
  }
  for (int i = 0; i < g2.num_legs(); ++i) {
    if (i == q) {
      out.second_leg_map.push_back(-1);
      continue;
    }
    out.second_leg_map.push_back(static_cast<int>(legs.size()));
    legs.push_back(g2.leg_vertex(i) + V1);
  }
  out.graph = StableGraph(std::move(genera), std::move(edges), std::move(legs));
  return out;
}

Gluing glue_loop(const StableGraph& g, int p, int q) {
  if (p < 0 || p >= g.num_legs()) throw Error("NotALeg", "leg " + std::to_string(p + 1));
  if (q < 0 || q >= g.num_legs()) throw Error("NotALeg", "leg " + std::to_string(q + 1));
  if (p == q) throw Error("SameLeg", "cannot glue leg " + std::to_string(p + 1) + " to itself");
  auto edges = g.edges();
  Gluing out{StableGraph::smooth(0, 3), static_cast<int>(edges.size()), {}, {}, 0, 0};
  edges.emplace_back(g.leg_vertex(p), g.leg_vertex(q));
  std::vector<int> legs;
  for (int i = 0; i < g.num_legs(); ++i) {
    if (i == p || i == q) {
      out.first_leg_map.push_back(-1);
      continue;
    }
    out.first_leg_map.push_back(static_cast<int>(legs.size()));
    legs.push_back(g.leg_vertex(i));
  }
  out.graph = StableGraph(g.vertex_genera(), std::move(edges), std::move(legs));
  return out;
}

ForgetResult forget_leg(const StableGraph& g, int k) {
  const int n = g.num_legs();
  if (k < 0 || k >= n) throw Error("NotALeg", "leg " + std::to_string(k + 1));
  if (2 * g.genus() - 2 + (n - 1) <= 0)
    throw Error("ResultUnstable", "forgetting a leg of a (" + std::to_string(g.genus()) + "," +
                                      std::to_string(n) + ") graph leaves an unstable signature");
  const int v = g.leg_vertex(k);
  auto new_leg = [&](int i) { return i < k ? i : i - 1; };

  auto legs = g.legs();
  legs.erase(legs.begin() + k);
  const bool unstable = g.vertex_genus(v) == 0 && g.valence(v) - 1 == 2;

  ForgetResult out{StableGraph::smooth(0, 3), ForgetKind::Identity, {}};
  if (!unstable) {
    out.graph = StableGraph(g.vertex_genera(), g.edges(), legs);
    for (int e = 0; e < g.num_edges(); ++e) out.script.push_back({{false, e}, {{false, e}}});
    for (int i = 0; i < n; ++i)
      if (i != k) out.script.push_back({{true, new_leg(i)}, {{true, i}}});
    return out;
  }

  // v has genus 0 and exactly two remaining half-edges; drop it.
  std::vector<int> incident;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.edge(e).first == v) incident.push_back(e);
    if (g.edge(e).second == v) incident.push_back(e);
  }
  auto other_end = [&](int e) { return g.edge(e).first == v ? g.edge(e).second : g.edge(e).first; };
  auto renumber = [&](int w) { return w < v ? w : w - 1; };
  auto genera = g.vertex_genera();
  genera.erase(genera.begin() + v);

  std::vector<std::pair<int, int>> edges;
  std::vector<int> edge_map(g.num_edges(), -1);
  if (incident.size() == 1) {
    // Rational tail: one edge and one other leg j at v.
    const int e = incident[0];
    const int w = other_end(e);
    int j = -1;
    for (int i = 0; i < n; ++i)
      if (i != k && g.leg_vertex(i) == v) j = i;
    for (int f = 0; f < g.num_edges(); ++f) {
      if (f == e) continue;
      edge_map[f] = static_cast<int>(edges.size());
      edges.emplace_back(renumber(g.edge(f).first), renumber(g.edge(f).second));
    }
    for (auto& x : legs) x = (x == v) ? renumber(w) : renumber(x);
    out.kind = ForgetKind::RationalTail;
    out.graph = StableGraph(std::move(genera), std::move(edges), std::move(legs));
    for (int f = 0; f < g.num_edges(); ++f)
      if (edge_map[f] >= 0) out.script.push_back({{false, edge_map[f]}, {{false, f}}});
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      if (i == j)
        out.script.push_back({{true, new_leg(i)}, {{true, i}, {false, e}}});
      else
        out.script.push_back({{true, new_leg(i)}, {{true, i}}});
    }
    return out;
  }

  // Rational bridge: two distinct edges e1, e2 through v become one edge.
  const int e1 = std::min(incident[0], incident[1]);
  const int e2 = std::max(incident[0], incident[1]);
  const int a = other_end(e1), b = other_end(e2);
  for (int f = 0; f < g.num_edges(); ++f) {
    if (f == e2) continue;
    edge_map[f] = static_cast<int>(edges.size());
    if (f == e1)
      edges.emplace_back(renumber(a), renumber(b));
    else
      edges.emplace_back(renumber(g.edge(f).first), renumber(g.edge(f).second));
  }
  for (auto& x : legs) x = renumber(x);
  out.kind = ForgetKind::RationalBridge;
  out.graph = StableGraph(std::move(genera), std::move(edges), std::move(legs));
  for (int f = 0; f < g.num_edges(); ++f) {
    if (f == e2) continue;
    if (f == e1)
      out.script.push_back({{false, edge_map[f]}, {{false, e1}, {false, e2}}});
    else
      out.script.push_back({{false, edge_map[f]}, {{false, f}}});
  }
  for (int i = 0; i < n; ++i)
    if (i != k) out.script.push_back({{true, new_leg(i)}, {{true, i}}});
  return out;
}

}  // namespace logtrop
