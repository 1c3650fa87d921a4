#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ergoforge/cocycle.hpp"
#include "ergoforge/group.hpp"

namespace ergoforge {

// Finite directed forest over a window. Edges are stored as ordered vertex
// index pairs (to, from); at most one orientation per vertex pair, no loops,
// and the underlying undirected graph is acyclic.
struct DirectedForest {
  Window vertices;
  std::vector<std::pair<int, int>> edges;  // (head to, tail from), sorted

  void validate() const;
  DirectedForest translated(const GroupContext& ctx, const Element& gamma) const;
  bool is_spanning_tree() const;
  bool has_edge(int to, int from) const;

  static DirectedForest of(Window vertices, std::vector<std::pair<int, int>> edges);
};

// Partition of the vertex index set into connected components, each class
// listed ascending and classes ordered by their minimal vertex.
struct ComponentRelation {
  std::vector<int> comp_of;                // vertex index -> class index
  std::vector<std::vector<int>> classes;

  bool same_class(int a, int b) const { return comp_of[a] == comp_of[b]; }
};

ComponentRelation components(const DirectedForest& f);

// Unique forest path between two vertex indices of one component, as the
// vertex index sequence from `from` to `to` (BFS over neighbors in ascending
// window order). Throws when the vertices lie in different components.
std::vector<int> forest_path(const DirectedForest& f, int from, int to);

// Retraction of a window cochain along a forest: the value at (beta)(alpha)
// with alpha, alpha beta in one component is the edge-label product along the
// forest path from alpha to alpha beta. Entries pairing distinct components
// are undefined (-1 in the matrix; value queries on them throw).
struct RetractResult {
  WindowCochain cochain;

  bool defined(int alpha_idx, int v_idx) const {
    return cochain.val[alpha_idx][v_idx] >= 0;
  }
  int value(int alpha_idx, int v_idx) const;
};

RetractResult retract(const DirectedForest& f, const WindowCochain& c);

// Single retraction query without materializing the full matrix.
int retract_value(const DirectedForest& f, const WindowCochain& c, int alpha_idx, int v_idx);

// Tree system: one forest per window element, vertex windows expressed over
// the translated windows alpha^{-1} V.
struct TreeSystem {
  std::vector<DirectedForest> trees;  // indexed like the cochain window

  // constant system alpha -> (alpha^{-1})^d T
  static TreeSystem constant_lift(const GroupContext& ctx, const Window& verts,
                                  const DirectedForest& t);
};

// r\hat: the lifted retraction. For each alpha the value at (beta)(alpha) is
// the retraction of the alpha-translated cochain along trees[alpha], read at
// (beta)(e). Entries whose query pair is undefined are -1.
RetractResult lifted_retraction(const GroupContext& ctx, const TreeSystem& y,
                                const WindowCochain& c);

}  // namespace ergoforge
