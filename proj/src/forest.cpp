#include "ergoforge/forest.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ergoforge {

namespace {
int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}
}  // namespace

DirectedForest DirectedForest::of(Window vertices, std::vector<std::pair<int, int>> edges) {
  DirectedForest f;
  f.vertices = std::move(vertices);
  std::sort(edges.begin(), edges.end());
  f.edges = std::move(edges);
  f.validate();
  return f;
}

void DirectedForest::validate() const {
  const int n = static_cast<int>(vertices.size());
  if (n == 0) throw std::invalid_argument("forest: empty vertex window");
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::set<std::pair<int, int>> seen;
  for (const auto& [to, from] : edges) {
    if (to < 0 || to >= n || from < 0 || from >= n)
      throw std::invalid_argument("forest: edge endpoint out of range");
    if (to == from) throw std::invalid_argument("forest: self loop");
    auto key = std::minmax(to, from);
    if (!seen.insert({key.first, key.second}).second)
      throw std::invalid_argument("forest: duplicate edge between a vertex pair");
    int a = find_root(parent, to), b = find_root(parent, from);
    if (a == b) throw std::invalid_argument("forest: edges close a cycle");
    parent[a] = b;
  }
}

DirectedForest DirectedForest::translated(const GroupContext& ctx, const Element& gamma) const {
  std::vector<Element> moved;
  moved.reserve(vertices.size());
  for (const Element& v : vertices.elems) moved.push_back(ctx.multiply(gamma, v));
  DirectedForest f;
  f.vertices = Window::of(std::move(moved), false);
  f.edges = edges;  // positional edge indices are translation-invariant
  return f;
}

bool DirectedForest::has_edge(int to, int from) const {
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(to, from));
}

bool DirectedForest::is_spanning_tree() const {
  return edges.size() + 1 == vertices.size() && components(*this).classes.size() == 1;
}

ComponentRelation components(const DirectedForest& f) {
  const int n = static_cast<int>(f.vertices.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& [to, from] : f.edges) {
    int a = find_root(parent, to), b = find_root(parent, from);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  ComponentRelation rel;
  rel.comp_of.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    int r = find_root(parent, v);
    if (rel.comp_of[r] < 0) {
      rel.comp_of[r] = static_cast<int>(rel.classes.size());
      rel.classes.push_back({});
    }
    rel.comp_of[v] = rel.comp_of[r];
    rel.classes[rel.comp_of[v]].push_back(v);
  }
  return rel;
}

std::vector<int> forest_path(const DirectedForest& f, int from, int to) {
  const int n = static_cast<int>(f.vertices.size());
  if (from < 0 || from >= n || to < 0 || to >= n)
    throw std::invalid_argument("forest path: vertex index out of range");
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : f.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  std::vector<int> prev(n, -1);
  std::vector<char> seen(n, 0);
  std::deque<int> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        prev[w] = v;
        queue.push_back(w);
      }
  }
  if (!seen[to])
    throw std::invalid_argument("forest path: vertices lie in different components");
  std::vector<int> path;
  for (int v = to; v != -1; v = prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// edge label g(v, u) = c(u^{-1} v)(u), the matrix entry (u, v); traversing an
// edge against its orientation contributes the inverse label.
int path_product(const DirectedForest& f, const WindowCochain& c,
                 const std::vector<int>& path) {
  const FiniteGroupTable& K = *c.K;
  int acc = K.id;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    int u = path[i], v = path[i + 1];
    int label;
    if (f.has_edge(v, u)) {
      label = c.pair_value(u, v);
    } else if (f.has_edge(u, v)) {
      label = K.inv[c.pair_value(v, u)];
    } else {
      throw std::logic_error("forest path: non-edge step");
    }
    acc = K.mul[label][acc];
  }
  return acc;
}

}  // namespace

int RetractResult::value(int alpha_idx, int v_idx) const {
  return cochain.pair_value(alpha_idx, v_idx);
}

int retract_value(const DirectedForest& f, const WindowCochain& c, int alpha_idx, int v_idx) {
  if (!(f.vertices == c.verts))
    throw std::invalid_argument("retract: forest and cochain windows differ");
  return path_product(f, c, forest_path(f, alpha_idx, v_idx));
}

RetractResult retract(const DirectedForest& f, const WindowCochain& c) {
  if (!(f.vertices == c.verts))
    throw std::invalid_argument("retract: forest and cochain windows differ");
  c.validate();
  const int n = static_cast<int>(c.verts.size());
  ComponentRelation rel = components(f);

  RetractResult out;
  out.cochain.verts = c.verts;
  out.cochain.K = c.K;
  out.cochain.val.assign(n, std::vector<int>(n, -1));

  // one BFS per component root gives h(v) = label product root -> v; then any
  // same-component entry is h(v) h(alpha)^{-1}
  const FiniteGroupTable& K = *c.K;
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : f.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  std::vector<int> h(n, -1);
  for (const auto& cls : rel.classes) {
    int root = cls.front();
    h[root] = K.id;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[u]) {
        if (h[v] >= 0) continue;
        int label = f.has_edge(v, u) ? c.pair_value(u, v) : K.inv[c.pair_value(v, u)];
        h[v] = K.mul[label][h[u]];
        queue.push_back(v);
      }
    }
    for (int a : cls)
      for (int v : cls) out.cochain.val[a][v] = K.mul[h[v]][K.inv[h[a]]];
  }
  return out;
}

TreeSystem TreeSystem::constant_lift(const GroupContext& ctx, const Window& verts,
                                     const DirectedForest& t) {
  TreeSystem y;
  y.trees.reserve(verts.size());
  for (const Element& alpha : verts.elems)
    y.trees.push_back(t.translated(ctx, ctx.inverse(alpha)));
  return y;
}

RetractResult lifted_retraction(const GroupContext& ctx, const TreeSystem& y,
                                const WindowCochain& c) {
  c.validate();
  const int n = static_cast<int>(c.verts.size());
  if (static_cast<int>(y.trees.size()) != n)
    throw std::invalid_argument("lifted retraction: one tree per window element required");

  RetractResult out;
  out.cochain.verts = c.verts;
  out.cochain.K = c.K;
  out.cochain.val.assign(n, std::vector<int>(n, -1));

  for (int ai = 0; ai < n; ++ai) {
    const Element& alpha = c.verts.elems[ai];
    WindowCochain shifted = c.translated(ctx, ctx.inverse(alpha));  // window alpha^{-1} V
    const DirectedForest& tree = y.trees[ai];
    if (!(tree.vertices == shifted.verts))
      throw std::invalid_argument("lifted retraction: tree window must equal the translated window");
    int e_idx = shifted.verts.at(ctx.identity());
    RetractResult local = retract(tree, shifted);
    for (int vi = 0; vi < n; ++vi) {
      // entry (alpha, v): beta = alpha^{-1} v sits at index vi of the shifted window
      if (local.cochain.val[e_idx][vi] >= 0)
        out.cochain.val[ai][vi] = local.cochain.val[e_idx][vi];
    }
  }
  return out;
}

}  // namespace ergoforge
