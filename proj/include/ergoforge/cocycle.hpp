#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "ergoforge/action.hpp"
#include "ergoforge/group.hpp"
#include "ergoforge/rational.hpp"

namespace ergoforge {

// Total cochain sigma: S x X -> K on an explicit finite support window S.
struct Cochain {
  std::shared_ptr<const FiniteGroupTable> K;
  Window support;
  std::vector<std::vector<int>> val;  // val[s_idx][x]

  void validate(int points) const;
  int at(int s_idx, int x) const { return val[s_idx][x]; }
  int at(const Element& s, int x) const { return val[support.at(s)][x]; }
  bool defined(const Element& s) const { return support.find(s) >= 0; }
};

// Injective exponent assignments for the two defect series; each series is a
// sum of 2^{-exponent} prefactors, so distinct exponents keep both sums < 1.
struct DefectWeights {
  std::vector<unsigned> e_exp;                            // per support index
  std::map<std::tuple<int, int, int>, unsigned> f_exp;    // (gamma, delta, k) -> exponent

  // e(i) = i + 1; composable triples in lex order get f = 1, 2, ...
  static DefectWeights standard(const GroupContext& ctx, const Cochain& sigma);
  void validate(const GroupContext& ctx, const Cochain& sigma) const;
};

// max(Phi1, Phi2). Phi1 penalizes level sets failing to partition the space;
// it vanishes identically here because a total cochain's level sets always
// partition. Phi2 sums, over composable triples (gamma, delta with
// gamma*delta in the support) and k in K, the weighted measure of
// { sigma(gamma, delta x) sigma(delta, x) = k } symdiff { sigma(gamma delta, x) = k }.
// With require_closed_support, a support that is not product-closed is an
// error instead of being truncated to composable triples.
Rat cocycle_defect(const FiniteAction& a, const Cochain& sigma, const DefectWeights& w,
                   bool require_closed_support = false);

// sigma(s, x) = f(s x) f(x)^{-1}
Cochain coboundary_from(const FiniteAction& a, std::shared_ptr<const FiniteGroupTable> K,
                        const std::vector<int>& f, Window support);

// Extend arbitrary per-generator values to a window cochain by splitting words
// letter by letter; only relation-free kinds (free groups and the integers)
// admit this.
Cochain extend_free_cochain(const FiniteAction& a, std::shared_ptr<const FiniteGroupTable> K,
                            const std::vector<std::vector<int>>& gen_vals, Window support);

// Skew product over sigma: points (x, u), generator action
// (x, u) -> (g x, sigma(g, x) . u). Sym(k) tables act on {0..k-1} through
// their one-line forms, all other tables act on themselves by left
// translation. Fibers carry the uniform measure.
ExtensionTriple skew_product(const FiniteAction& a, const Cochain& sigma);

enum class SearchEngine { exhaustive, local };

struct SearchOptions {
  SearchEngine engine = SearchEngine::exhaustive;
  std::uint64_t cap = 2'000'000;  // exhaustive candidate budget
  std::uint64_t seed = 1;
  int restarts = 8;               // local engine
};

struct DensitySearchResult {
  bool success = false;
  std::vector<int> f;      // best relabeling found
  Rat mass = 0;            // agreement mass of f
  SearchEngine engine = SearchEngine::exhaustive;
  bool certified = false;  // exhaustive sweep completed
  std::uint64_t seed = 0;
};

// Search for f with mu{ x : f(gamma x) f(x)^{-1} = sigma(gamma, x) for all
// gamma in F } > 1 - eps (or == 1 when eps == 0). Exhaustive sweeps run in
// lexicographic order so ties return the lexicographically smallest witness.
DensitySearchResult coboundary_density_search(const FiniteAction& a, const Cochain& sigma,
                                              const std::vector<Element>& F, const Rat& eps,
                                              const SearchOptions& opts = {});

// Cochain over window pairs: val[alpha][v] = c(alpha^{-1} v)(alpha), i.e. the
// value of the outer argument beta = alpha^{-1} v at inner argument alpha.
struct WindowCochain {
  Window verts;
  std::shared_ptr<const FiniteGroupTable> K;
  std::vector<std::vector<int>> val;

  void validate() const;
  int pair_value(int alpha_idx, int v_idx) const;
  int value(const GroupContext& ctx, const Element& beta, const Element& alpha) const;
  // (gamma^t c)(beta)(alpha) = c(beta)(gamma^{-1} alpha), over window gamma V
  WindowCochain translated(const GroupContext& ctx, const Element& gamma) const;
  // val[x][z] = val[y][z] * val[x][y] for all index triples
  bool satisfies_cocycle_identity() const;

  static WindowCochain from_potential(const GroupContext& ctx, Window verts,
                                      std::shared_ptr<const FiniteGroupTable> K,
                                      const std::vector<int>& h);  // val = h(v) h(alpha)^{-1}
};

// Pointwise window cochain map x -> c(x); equivariant by construction when
// produced from a total cochain.
struct EquivariantCochainMap {
  Window verts;
  std::shared_ptr<const FiniteGroupTable> K;
  std::vector<WindowCochain> at_point;

  void validate(int points) const;
};

// c(x)(beta)(alpha) = theta(beta^{-1}, alpha^{-1} x); needs theta defined on
// V^{-1} V.
EquivariantCochainMap cochain_correspondence(const FiniteAction& a, const Cochain& theta,
                                             const Window& verts);

// theta(gamma, x) = c(x)(gamma^{-1})(e) over the support of inverses of verts.
Cochain correspondence_inverse(const FiniteAction& a, const EquivariantCochainMap& c);

// Two-variable cochain values d(x)(alpha, beta)(gamma) stored as
// val[x][a][b][g] over outer window (alpha, beta) and inner window (gamma).
struct TwoVariableCochainMap {
  Window outer;
  Window inner;
  std::shared_ptr<const FiniteGroupTable> K;
  std::vector<std::vector<std::vector<std::vector<int>>>> val;
};

// (d c)(x)(alpha, beta)(gamma) =
//   c(x)(alpha beta)(gamma)^{-1} c(x)(beta)(gamma alpha) c(x)(alpha)(gamma);
// requires gamma, gamma alpha, gamma alpha beta in the cochain window.
TwoVariableCochainMap coboundary_operator(const FiniteAction& a,
                                          const EquivariantCochainMap& c,
                                          const Window& outer, const Window& inner);

}  // namespace ergoforge
