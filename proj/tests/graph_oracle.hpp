#pragma once

// Brute-force reference enumeration of G_{g,n}, independent of the library's
// splitting enumeration and colour-refined canonical forms.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

struct Multigraph {
  std::vector<int> genus;                // per vertex
  std::vector<std::vector<int>> mult;    // symmetric; mult[v][v] = loops at v
  std::vector<int> legs;                 // leg i -> vertex

  int num_edges() const {
    int e = 0;
    for (std::size_t i = 0; i < mult.size(); ++i)
      for (std::size_t j = i; j < mult.size(); ++j) e += mult[i][j];
    return e;
  }

  std::vector<std::pair<int, int>> edge_list() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < mult.size(); ++i)
      for (std::size_t j = i; j < mult.size(); ++j)
        for (int k = 0; k < mult[i][j]; ++k) out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return out;
  }
};

using Key = std::vector<int>;

inline Key key_for(const Multigraph& m, const std::vector<int>& perm) {
  // perm[old] = new
  const int V = static_cast<int>(m.genus.size());
  std::vector<int> inv(V);
  for (int v = 0; v < V; ++v) inv[perm[v]] = v;
  Key k;
  for (int i = 0; i < V; ++i) k.push_back(m.genus[inv[i]]);
  for (int v : m.legs) k.push_back(perm[v]);
  for (int i = 0; i < V; ++i)
    for (int j = 0; j < V; ++j) k.push_back(m.mult[inv[i]][inv[j]]);
  return k;
}

inline Key brute_key(const Multigraph& m) {
  const int V = static_cast<int>(m.genus.size());
  std::vector<int> perm(V);
  std::iota(perm.begin(), perm.end(), 0);
  Key best;
  do {
    Key k = key_for(m, perm);
    if (best.empty() || k < best) best = k;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Automorphisms on half-edges: a vertex bijection preserving genus and legs,
/// together with a bijection of edges and a choice of orientation per edge,
/// such that half-edge incidence is respected.
inline std::uint64_t brute_automorphisms(const Multigraph& m) {
  const int V = static_cast<int>(m.genus.size());
  auto edges = m.edge_list();
  const int E = static_cast<int>(edges.size());
  std::uint64_t count = 0;
  std::vector<int> phi(V);
  std::iota(phi.begin(), phi.end(), 0);
  do {
    bool ok = true;
    for (int v = 0; v < V; ++v)
      if (m.genus[phi[v]] != m.genus[v]) ok = false;
    for (int v : m.legs)
      if (phi[v] != v) ok = false;
    if (!ok) continue;
    std::vector<int> epi(E);
    std::iota(epi.begin(), epi.end(), 0);
    do {
      for (int mask = 0; mask < (1 << E); ++mask) {
        bool good = true;
        for (int e = 0; e < E && good; ++e) {
          auto [a, b] = edges[e];
          auto [c, d] = edges[epi[e]];
          // half-edge 2e (at a) goes to 2epi[e] or 2epi[e]+1 depending on the bit
          bool flip = mask >> e & 1;
          int ia = flip ? d : c, ib = flip ? c : d;
          if (phi[a] != ia || phi[b] != ib) good = false;
        }
        if (good) ++count;
      }
    } while (std::next_permutation(epi.begin(), epi.end()));
  } while (std::next_permutation(phi.begin(), phi.end()));
  return count;
}

inline bool is_connected(const Multigraph& m) {
  const int V = static_cast<int>(m.genus.size());
  std::vector<bool> seen(V, false);
  std::vector<int> stack = {0};
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < V; ++w)
      if (!seen[w] && m.mult[v][w] > 0) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

/// One representative per isomorphism class (keyed by brute_key).
inline std::vector<Multigraph> enumerate(int g, int n) {
  std::vector<Multigraph> out;
  std::set<Key> seen;
  const int max_v = 2 * g - 2 + n;
  const int max_e = 3 * g - 3 + n;
  for (int V = 1; V <= max_v; ++V) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < V; ++i)
      for (int j = i; j < V; ++j) slots.emplace_back(i, j);
    std::vector<int> genus(V, 0);
    std::function<void(int)> over_genus;
    std::function<void(std::size_t, int, Multigraph&)> over_edges;
    std::function<void(int, Multigraph&)> over_legs;

    over_legs = [&](int i, Multigraph& m) {
      if (i == n) {
        for (int v = 0; v < V; ++v) {
          int val = 0;
          for (int w = 0; w < V; ++w) val += (w == v) ? 2 * m.mult[v][v] : m.mult[v][w];
          for (int x : m.legs) val += (x == v);
          if (2 * m.genus[v] - 2 + val <= 0) return;
        }
        Key k = brute_key(m);
        if (seen.insert(k).second) out.push_back(m);
        return;
      }
      for (int v = 0; v < V; ++v) {
        m.legs[i] = v;
        over_legs(i + 1, m);
      }
    };
    over_edges = [&](std::size_t s, int budget, Multigraph& m) {
      if (s == slots.size()) {
        if (!is_connected(m)) return;
        int gsum = std::accumulate(m.genus.begin(), m.genus.end(), 0);
        if (gsum + m.num_edges() - V + 1 != g) return;
        over_legs(0, m);
        return;
      }
      auto [i, j] = slots[s];
      for (int k = 0; k <= budget; ++k) {
        m.mult[i][j] = m.mult[j][i] = k;
        over_edges(s + 1, budget - k, m);
      }
      m.mult[i][j] = m.mult[j][i] = 0;
    };
    over_genus = [&](int v) {
      if (v == V) {
        Multigraph m{genus, std::vector<std::vector<int>>(V, std::vector<int>(V, 0)), std::vector<int>(n, 0)};
        over_edges(0, max_e, m);
        return;
      }
      for (int h = 0; h <= g; ++h) {
        genus[v] = h;
        over_genus(v + 1);
      }
    };
    over_genus(0);
  }
  return out;
}

}  // namespace oracle
