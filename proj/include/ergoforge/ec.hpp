#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ergoforge/action.hpp"
#include "ergoforge/cocycle.hpp"
#include "ergoforge/group.hpp"
#include "ergoforge/window_measure.hpp"

namespace ergoforge {

// Finitary existential-closedness query: approximate the extension-side joint
// statistics of (alpha over S, beta of the factor image) by statistics
// realized downstairs.
struct ECQuery {
  ExtensionTriple ext;
  Labeling alpha;  // on the source, arity p
  Labeling beta;   // on the target, arity q
  std::vector<Element> S;
  Rat eps;

  void validate() const;
};

struct LabelSearchResult {
  bool success = false;
  Labeling witness;
  Rat defect = 0;  // achieved max-discrepancy (exhaustive: certified minimum)
  SearchEngine engine = SearchEngine::exhaustive;
  bool certified = false;
  std::uint64_t seed = 0;
};

LabelSearchResult ec_criterion_search(const ECQuery& query, const SearchOptions& opts = {});

enum class FiniteExtStatus { success, failure, infeasible_pushforward };

struct FiniteExtResult {
  FiniteExtStatus status = FiniteExtStatus::failure;
  Labeling witness;
  Rat independence_defect = 0;  // max_ij |mu(a^-1 i cap b^-1 j) - mu(a^-1 i) mu(b^-1 j)|
  Rat equivariance_gap = 0;     // 1 - mu{ x : alpha(f x) = sigma(f,x)(alpha(x)) for f in F }
  SearchEngine engine = SearchEngine::exhaustive;
  bool certified = false;
  std::uint64_t seed = 0;
};

// Search for alpha: X -> k pushing mu to the exact uniform distribution on k,
// eps-independent of beta (non-strict) and sigma-equivariant off a set of mass
// at most eps (non-strict). sigma must be a zero-defect cocycle into a
// symmetric-group table.
FiniteExtResult finite_ext_ec_search(const FiniteAction& a, int k, const Cochain& sigma,
                                     const std::vector<Element>& F, const Rat& eps,
                                     const Labeling& beta, const SearchOptions& opts = {});

struct ThetaInstance {
  int k = 1;
  int q = 1;
  std::vector<Element> F;
  std::optional<Labeling> A;  // partition into q classes; sampled when absent
  std::optional<Cochain> B;   // zero-defect cocycle into Sym(k); sampled when absent
};

struct ThetaResult {
  Rat value = 0;       // max(phi1, phi2, phi3) minimized over C for the used (A, B)
  Labeling witness_C;
  Labeling used_A;
  Cochain used_B;
  bool exact = false;  // false when the outer sup was sampled (lower bound only)
  SearchEngine engine = SearchEngine::exhaustive;
  std::uint64_t seed = 0;
};

ThetaResult theta_axiom_eval(const FiniteAction& a, const ThetaInstance& inst,
                             const SearchOptions& opts = {});

struct WeakMixResult {
  bool found = false;
  Element witness;
  std::vector<std::pair<Element, Rat>> worst_defects;  // per element of G0, in order
};

WeakMixResult weak_mixing_certificate(
    const FiniteAction& a,
    const std::vector<std::pair<std::vector<bool>, std::vector<bool>>>& pairs, const Rat& eps,
    const std::vector<Element>& G0);

// Product measure over all group coordinates; cylinder masses are exact
// products, so mixing statistics over disjoint coordinate supports vanish
// identically.
struct BernoulliShiftModel {
  std::shared_ptr<const GroupContext> ctx;
  std::vector<Rat> letter_weights;

  void validate() const;
  int alphabet() const { return static_cast<int>(letter_weights.size()); }
};

struct Cylinder {
  std::map<std::vector<int>, int> constraints;  // group element word -> symbol
};

Rat cylinder_mass(const BernoulliShiftModel& m, const Cylinder& c);
Cylinder translate_cylinder(const GroupContext& ctx, const Element& g, const Cylinder& c);
std::optional<Cylinder> intersect_cylinders(const Cylinder& a, const Cylinder& b);

WeakMixResult weak_mixing_certificate(const BernoulliShiftModel& m,
                                      const std::vector<std::pair<Cylinder, Cylinder>>& pairs,
                                      const Rat& eps, const std::vector<Element>& G0);

struct ApproxResult {
  bool success = false;
  ExtensionTriple skew;
  Cochain sigma;
  Labeling alpha_prime;  // on the skew points
  int k = 0;
  Rat discrepancy = 0;
  SearchEngine engine = SearchEngine::exhaustive;
  std::uint64_t seed = 0;
};

// Approximate an extension by a skew product: sweeps fiber sizes k <= k_max,
// zero-defect candidate cocycles, and relabelings alpha' of the skew space,
// minimizing the joint-statistics discrepancy against (alpha, beta over F).
ApproxResult finite_extension_approx(const ExtensionTriple& e, const Labeling& alpha,
                                     const Labeling& beta, const std::vector<Element>& F,
                                     const Rat& eps, int k_max, const SearchOptions& opts = {});

// Open-mapping witness: gamma: X -> p with the (beta x gamma)-coding within
// eps of lambda on all window cylinders. Requires the beta-coding alone to be
// within eps of lambda's first marginal.
LabelSearchResult ec_lemma_search(const FiniteAction& a, const Labeling& beta,
                                  const JointWindowMeasure& lambda, const Rat& eps,
                                  const SearchOptions& opts = {});

}  // namespace ergoforge
