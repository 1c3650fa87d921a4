#include "ergoforge/coinduction.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ergoforge {

Disintegration disintegrate(const ExtensionTriple& e) {
  e.validate();
  Disintegration d;
  d.fibers.assign(e.target.space.size(), {});
  for (int y = 0; y < e.source.space.size(); ++y) {
    const Rat base = e.target.space.weights[e.phi[y]];
    if (base == 0) continue;  // fiber over a null point stays empty
    d.fibers[e.phi[y]].push_back({y, e.source.space.weights[y] / base});
  }
  return d;
}

void SubgroupAction::validate(const GroupContext& ctx, const QuotientData& q) const {
  space.validate();
  std::vector<int> lambda = q.lambda_elements(ctx);
  if (perms.size() != lambda.size())
    throw std::invalid_argument("subgroup action: one permutation per subgroup element required");
  for (int l : lambda)
    if (!perms.count(l))
      throw std::invalid_argument("subgroup action: missing permutation for " +
                                  ctx.table.names[l]);
  const int n = space.size();
  for (const auto& [l, p] : perms) {
    if (static_cast<int>(p.size()) != n || !is_perm(p))
      throw std::invalid_argument("subgroup action: image is not a permutation");
    for (int y = 0; y < n; ++y)
      if (space.weights[p[y]] != space.weights[y])
        throw std::invalid_argument("subgroup action: measure not preserved");
  }
  for (int l1 : lambda)
    for (int l2 : lambda) {
      int prod = ctx.table.mul[l1][l2];
      if (perms.at(prod) != compose_perm(perms.at(l1), perms.at(l2)))
        throw std::invalid_argument("subgroup action: permutations violate the subgroup law");
    }
}

int SubgroupAction::apply(int lambda_elem, int y) const {
  auto it = perms.find(lambda_elem);
  if (it == perms.end())
    throw std::invalid_argument("subgroup action: element outside the subgroup");
  return it->second[y];
}

CoinduceResult coinduce(std::shared_ptr<const GroupContext> ctx, const QuotientData& q,
                        const SubgroupAction& b, const FiniteAction& a,
                        const std::vector<int>& phi, std::uint64_t atom_cap) {
  if (!ctx->table_backed())
    throw std::invalid_argument("coinduce: needs a table-backed group context");
  QuotientData qv = q;
  qv.validate(*ctx);
  b.validate(*ctx, qv);
  a.validate();
  if (a.ctx.get() != ctx.get() && !(a.ctx->table.mul == ctx->table.mul))
    throw std::invalid_argument("coinduce: base action lives over a different group");

  const int ny = b.space.size();
  const int nx = a.space.size();
  if (phi.size() != static_cast<size_t>(ny))
    throw std::invalid_argument("coinduce: factor map size mismatch");
  std::vector<Rat> push(nx, Rat(0));
  for (int y = 0; y < ny; ++y) {
    if (phi[y] < 0 || phi[y] >= nx)
      throw std::invalid_argument("coinduce: factor map value out of range");
    push[phi[y]] += b.space.weights[y];
  }
  if (push != a.space.weights)
    throw std::invalid_argument("coinduce: factor map is not measure-preserving");
  for (int l : qv.lambda_elements(*ctx)) {
    Perm pa = a.perm_of(Element{{l}});
    for (int y = 0; y < ny; ++y)
      if (phi[b.apply(l, y)] != pa[phi[y]])
        throw std::invalid_argument("coinduce: factor map is not subgroup-equivariant");
  }

  const int n = qv.coset_count();
  double total = std::pow(static_cast<double>(ny), static_cast<double>(n));
  if (total > static_cast<double>(atom_cap))
    throw std::invalid_argument("coinduce: tuple count exceeds cap");

  // conditional weights nu_z(y) and the base points r_j^{-1} x
  std::vector<Perm> rep_inv(n);
  for (int j = 0; j < n; ++j) rep_inv[j] = a.perm_of(ctx->inverse(qv.transversal[j]));

  std::vector<std::vector<int>> tuples;
  std::vector<Rat> masses;
  std::vector<int> cur(n, 0);
  while (true) {
    Rat mass = 0;
    for (int x = 0; x < nx; ++x) {
      if (a.space.weights[x] == 0) continue;
      Rat term = a.space.weights[x];
      for (int j = 0; j < n && term != 0; ++j) {
        int z = rep_inv[j][x];
        // nu_z(y) = nu(y)/mu(z) when phi(y) = z; mu(z) = mu(x) > 0 here
        term = phi[cur[j]] == z ? term * b.space.weights[cur[j]] / a.space.weights[z] : Rat(0);
      }
      mass += term;
    }
    if (mass > 0) {
      tuples.push_back(cur);
      masses.push_back(mass);
    }
    int j = n;
    bool rolled = true;
    while (j-- > 0) {
      if (++cur[j] < ny) {
        rolled = false;
        break;
      }
      cur[j] = 0;
    }
    if (rolled) break;
  }
  if (tuples.empty()) throw std::invalid_argument("coinduce: empty support");

  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < tuples.size(); ++i) index[tuples[i]] = static_cast<int>(i);

  CoinduceResult out;
  out.atom_tuple = tuples;
  out.big.ctx = ctx;
  out.big.space.weights = masses;
  for (const auto& t : tuples) {
    std::string nm = "[";
    for (int j = 0; j < n; ++j) {
      if (j) nm += ",";
      nm += b.space.point_names.empty() ? std::to_string(t[j]) : b.space.point_names[t[j]];
    }
    out.big.space.point_names.push_back(nm + "]");
  }

  // (gamma ybar)(j) = b(rho(gamma^{-1}, j)^{-1}) ybar(coset(gamma^{-1} t_j))
  for (int gi = 0; gi < ctx->generator_count(); ++gi) {
    Element g = ctx->generator(gi);
    Element ginv = ctx->inverse(g);
    std::vector<int> src_coset(n);
    std::vector<int> twist(n);
    for (int j = 0; j < n; ++j) {
      src_coset[j] = qv.coset_of(*ctx, ctx->multiply(ginv, qv.transversal[j]));
      Element rho = coset_cocycle(*ctx, qv, ginv, j);
      twist[j] = ctx->inverse(rho).w[0];
    }
    Perm p(tuples.size());
    std::vector<int> moved(n);
    for (size_t i = 0; i < tuples.size(); ++i) {
      for (int j = 0; j < n; ++j) moved[j] = b.apply(twist[j], tuples[i][src_coset[j]]);
      auto it = index.find(moved);
      if (it == index.end())
        throw std::logic_error("coinduce: the action left the support (inconsistent input)");
      p[i] = it->second;
    }
    out.big.gen_perms.push_back(std::move(p));
  }
  out.big.validate();

  out.pi.reserve(tuples.size());
  for (const auto& t : tuples) out.pi.push_back(t[0]);

  out.to_base.source = out.big;
  out.to_base.target = a;
  out.to_base.phi.reserve(tuples.size());
  for (const auto& t : tuples) out.to_base.phi.push_back(phi[t[0]]);
  out.to_base.validate();
  return out;
}

}  // namespace ergoforge
