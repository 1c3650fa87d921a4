#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergoforge/group.hpp"
#include "ergoforge/rational.hpp"

namespace ergoforge {

struct FiniteProbSpace {
  std::vector<std::string> point_names;  // defaults to x0, x1, ...
  std::vector<Rat> weights;

  int size() const { return static_cast<int>(weights.size()); }
  void validate() const;  // nonnegative weights with exact sum 1
  static FiniteProbSpace uniform(int n, const std::string& stem = "x");
  static FiniteProbSpace of(std::vector<Rat> weights, const std::string& stem = "x");
  bool same_space(const FiniteProbSpace& o) const {
    return weights == o.weights && point_names == o.point_names;
  }
};

using Perm = std::vector<int>;

Perm compose_perm(const Perm& f, const Perm& g);  // x -> f[g[x]]
Perm inverse_perm(const Perm& p);
bool is_perm(const Perm& p);

// Measure-preserving action given by one permutation per generator. Relations
// of the group kind are verified: abelian generators must commute, table-backed
// groups must extend to a homomorphism on the whole table.
struct FiniteAction {
  std::shared_ptr<const GroupContext> ctx;
  FiniteProbSpace space;
  std::vector<Perm> gen_perms;

  void validate() const;
  Perm perm_of(const Element& g) const;
  int apply(const Element& g, int x) const;
  Rat mass(const std::vector<bool>& set) const;
  std::vector<bool> image(const Element& g, const std::vector<bool>& set) const;
  std::vector<bool> preimage(const Element& g, const std::vector<bool>& set) const;

  static FiniteAction trivial(std::shared_ptr<const GroupContext> ctx, FiniteProbSpace sp);
};

// Left-translation action on the coset space of a validated quotient, with the
// uniform measure.
FiniteAction finite_quotient_action(std::shared_ptr<const GroupContext> ctx,
                                    const QuotientData& q);

struct Labeling {
  std::vector<int> labels;
  int arity = 0;

  void validate(int points) const;
  std::vector<bool> level_set(int value, int points) const;
};

// Factor triple: phi maps source points onto target points, pushes the measure
// forward exactly and intertwines the two actions generator by generator.
struct ExtensionTriple {
  FiniteAction source;
  FiniteAction target;
  std::vector<int> phi;

  void validate() const;
};

double entropy(const FiniteProbSpace& sp, const Labeling& alpha);
double relative_entropy(const FiniteProbSpace& sp, const Labeling& alpha, const Labeling& beta);
Labeling join_labelings(const Labeling& alpha, const Labeling& beta);

Rat freeness_defect(const FiniteAction& a, const Element& gamma, int n,
                    std::uint64_t subset_cap = (1u << 20));

Rat weak_containment_defect(const FiniteAction& a, const std::vector<std::vector<bool>>& A,
                            const FiniteAction& b, const std::vector<std::vector<bool>>& B,
                            const std::vector<Element>& F);

struct WeakContainmentSearchResult {
  Rat defect;
  std::vector<std::vector<bool>> witness;
};

WeakContainmentSearchResult weak_containment_search(
    const FiniteAction& a, const std::vector<std::vector<bool>>& A, const FiniteAction& b,
    const std::vector<Element>& F, std::uint64_t cap = (1u << 20));

Rat extension_neighborhood_defect(const ExtensionTriple& e1, const ExtensionTriple& e2,
                                  const std::vector<std::vector<bool>>& target_sets,
                                  const std::vector<std::vector<bool>>& source_sets,
                                  const std::vector<Element>& F);

// lambda(x, y) = mu(x) nu(y) / eta(phi(x)) on the fibered product over eta.
struct RelativeJoining {
  int nx = 0, ny = 0;
  std::map<std::pair<int, int>, Rat> weights;
  Rat at(int x, int y) const;
};

RelativeJoining relative_independent_joining(const FiniteProbSpace& mu,
                                             const FiniteProbSpace& nu,
                                             const FiniteProbSpace& eta,
                                             const std::vector<int>& phi,
                                             const std::vector<int>& psi);

// Diagonal action on pairs carrying a joining; used to check invariance.
FiniteAction joining_action(const FiniteAction& a, const FiniteAction& b,
                            const RelativeJoining& lam);

}  // namespace ergoforge
