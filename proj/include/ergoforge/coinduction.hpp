#pragma once

#include <map>
#include <memory>
#include <vector>

#include "ergoforge/action.hpp"
#include "ergoforge/group.hpp"

namespace ergoforge {

// Conditional measures of a factor map: fibers[x] lists (source point,
// conditional weight) over the fiber above x, defined when the target point
// has positive mass.
struct Disintegration {
  std::vector<std::vector<std::pair<int, Rat>>> fibers;
};

Disintegration disintegrate(const ExtensionTriple& e);

// Subgroup action: permutations indexed by the table elements of Lambda.
struct SubgroupAction {
  FiniteProbSpace space;
  std::map<int, Perm> perms;  // key: table element index in Lambda

  void validate(const GroupContext& ctx, const QuotientData& q) const;
  int apply(int lambda_elem, int y) const;
};

struct CoinduceResult {
  FiniteAction big;                          // Gamma-action on coset tuples
  std::vector<int> pi;                       // Ybar -> Y, reading the identity coset
  ExtensionTriple to_base;                   // (big, a, phi o pi)
  std::vector<std::vector<int>> atom_tuple;  // point index -> tuple of Y points per coset
};

// Relatively independent lift over a = target of e: Ybar = Y^{Gamma/Lambda}
// with nu-bar(ybar) = sum_x mu(x) prod_j nu_{r_j^{-1} x}(ybar_j), the action
// twisted by the coset cocycle. Requires a table-backed group context and the
// factor data (b on Y) -> (a on X) given by phi; b must be Lambda-equivariant
// for phi.
CoinduceResult coinduce(std::shared_ptr<const GroupContext> ctx, const QuotientData& q,
                        const SubgroupAction& b, const FiniteAction& a,
                        const std::vector<int>& phi, std::uint64_t atom_cap = 1u << 20);

}  // namespace ergoforge
