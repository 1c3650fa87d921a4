#include "ergoforge/action.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ergoforge {

void FiniteProbSpace::validate() const {
  if (weights.empty()) throw std::invalid_argument("prob space: no points");
  if (!point_names.empty() && point_names.size() != weights.size())
    throw std::invalid_argument("prob space: name count mismatch");
  Rat total = 0;
  for (const Rat& w : weights) {
    if (w < 0) throw std::invalid_argument("prob space: negative weight");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("prob space: weights sum to " + rat_to_string(total));
}

FiniteProbSpace FiniteProbSpace::uniform(int n, const std::string& stem) {
  if (n <= 0) throw std::invalid_argument("prob space: need at least one point");
  FiniteProbSpace sp;
  sp.weights.assign(n, Rat(1, n));
  for (int i = 0; i < n; ++i) sp.point_names.push_back(stem + std::to_string(i));
  return sp;
}

FiniteProbSpace FiniteProbSpace::of(std::vector<Rat> weights, const std::string& stem) {
  FiniteProbSpace sp;
  sp.weights = std::move(weights);
  for (size_t i = 0; i < sp.weights.size(); ++i) sp.point_names.push_back(stem + std::to_string(i));
  sp.validate();
  return sp;
}

bool is_perm(const Perm& p) {
  std::vector<char> hit(p.size(), 0);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

Perm compose_perm(const Perm& f, const Perm& g) {
  if (f.size() != g.size()) throw std::invalid_argument("perm compose: size mismatch");
  Perm out(f.size());
  for (size_t x = 0; x < g.size(); ++x) out[x] = f[g[x]];
  return out;
}

Perm inverse_perm(const Perm& p) {
  Perm out(p.size());
  for (size_t x = 0; x < p.size(); ++x) out[p[x]] = static_cast<int>(x);
  return out;
}

void FiniteAction::validate() const {
  if (!ctx) throw std::invalid_argument("action: missing group context");
  space.validate();
  if (static_cast<int>(gen_perms.size()) != ctx->generator_count())
    throw std::invalid_argument("action: one permutation per generator required");
  const int n = space.size();
  for (const Perm& p : gen_perms) {
    if (static_cast<int>(p.size()) != n || !is_perm(p))
      throw std::invalid_argument("action: generator image is not a permutation");
    for (int x = 0; x < n; ++x)
      if (space.weights[p[x]] != space.weights[x])
        throw std::invalid_argument("action: generator does not preserve the measure");
  }
  if (ctx->kind == GroupKind::free_abelian) {
    for (size_t i = 0; i < gen_perms.size(); ++i)
      for (size_t j = i + 1; j < gen_perms.size(); ++j)
        if (compose_perm(gen_perms[i], gen_perms[j]) != compose_perm(gen_perms[j], gen_perms[i]))
          throw std::invalid_argument("action: abelian generators must commute");
  } else if (ctx->table_backed()) {
    // homomorphism well-definedness: table products must match permutation products
    const int m = ctx->table.size();
    std::vector<Perm> table_perm(m);
    for (int g = 0; g < m; ++g) table_perm[g] = perm_of(Element{{g}});
    for (int g = 0; g < m; ++g)
      for (int i = 0; i < ctx->generator_count(); ++i) {
        int gs = ctx->table.mul[g][ctx->gen_elems[i]];
        if (table_perm[gs] != compose_perm(table_perm[g], gen_perms[i]))
          throw std::invalid_argument("action: permutations violate the group relations");
      }
  }
}

Perm FiniteAction::perm_of(const Element& g) const {
  Perm acc(space.size());
  std::iota(acc.begin(), acc.end(), 0);
  for (int l : ctx->to_letters(g)) {
    const Perm& p = gen_perms[std::abs(l) - 1];
    acc = compose_perm(acc, l > 0 ? p : inverse_perm(p));
  }
  return acc;
}

int FiniteAction::apply(const Element& g, int x) const {
  std::vector<int> letters = ctx->to_letters(g);
  int y = x;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    const Perm& p = gen_perms[std::abs(*it) - 1];
    y = *it > 0 ? p[y] : inverse_perm(p)[y];
  }
  return y;
}

Rat FiniteAction::mass(const std::vector<bool>& set) const {
  if (set.size() != static_cast<size_t>(space.size()))
    throw std::invalid_argument("mass: set size mismatch");
  Rat total = 0;
  for (int x = 0; x < space.size(); ++x)
    if (set[x]) total += space.weights[x];
  return total;
}

std::vector<bool> FiniteAction::image(const Element& g, const std::vector<bool>& set) const {
  Perm p = perm_of(g);
  std::vector<bool> out(set.size(), false);
  for (size_t x = 0; x < set.size(); ++x)
    if (set[x]) out[p[x]] = true;
  return out;
}

std::vector<bool> FiniteAction::preimage(const Element& g, const std::vector<bool>& set) const {
  Perm p = perm_of(g);
  std::vector<bool> out(set.size(), false);
  for (size_t x = 0; x < set.size(); ++x)
    if (set[p[x]]) out[x] = true;
  return out;
}

FiniteAction FiniteAction::trivial(std::shared_ptr<const GroupContext> ctx, FiniteProbSpace sp) {
  FiniteAction a;
  a.ctx = std::move(ctx);
  a.space = std::move(sp);
  Perm id(a.space.size());
  std::iota(id.begin(), id.end(), 0);
  a.gen_perms.assign(a.ctx->generator_count(), id);
  a.validate();
  return a;
}

FiniteAction finite_quotient_action(std::shared_ptr<const GroupContext> ctx,
                                    const QuotientData& q) {
  const int n = q.coset_count();
  FiniteAction a;
  a.ctx = ctx;
  a.space = FiniteProbSpace::uniform(n, "coset");
  for (int i = 0; i < ctx->generator_count(); ++i) {
    Element g = ctx->generator(i);
    Perm p(n);
    for (int c = 0; c < n; ++c) p[c] = q.coset_of(*ctx, ctx->multiply(g, q.transversal[c]));
    a.gen_perms.push_back(std::move(p));
  }
  a.validate();
  return a;
}

void Labeling::validate(int points) const {
  if (arity <= 0) throw std::invalid_argument("labeling: arity must be positive");
  if (static_cast<int>(labels.size()) != points)
    throw std::invalid_argument("labeling: label count mismatch");
  for (int l : labels)
    if (l < 0 || l >= arity) throw std::invalid_argument("labeling: label out of range");
}

std::vector<bool> Labeling::level_set(int value, int points) const {
  std::vector<bool> out(points, false);
  for (int x = 0; x < points; ++x) out[x] = labels[x] == value;
  return out;
}

void ExtensionTriple::validate() const {
  source.validate();
  target.validate();
  if (phi.size() != static_cast<size_t>(source.space.size()))
    throw std::invalid_argument("extension: factor map size mismatch");
  std::vector<Rat> push(target.space.size(), Rat(0));
  for (int y = 0; y < source.space.size(); ++y) {
    if (phi[y] < 0 || phi[y] >= target.space.size())
      throw std::invalid_argument("extension: factor map value out of range");
    push[phi[y]] += source.space.weights[y];
  }
  if (push != target.space.weights)
    throw std::invalid_argument("extension: factor map is not measure-preserving");
  for (int i = 0; i < source.ctx->generator_count(); ++i) {
    for (int y = 0; y < source.space.size(); ++y)
      if (phi[source.gen_perms[i][y]] != target.gen_perms[i][phi[y]])
        throw std::invalid_argument("extension: factor map is not equivariant");
  }
}

double entropy(const FiniteProbSpace& sp, const Labeling& alpha) {
  alpha.validate(sp.size());
  std::vector<Rat> cls(alpha.arity, Rat(0));
  for (int x = 0; x < sp.size(); ++x) cls[alpha.labels[x]] += sp.weights[x];
  double h = 0.0;
  for (const Rat& m : cls) {
    if (m == 0) continue;  // 0 log 0 = 0
    double p = rat_to_double(m);
    h -= p * std::log(p);
  }
  return h;
}

Labeling join_labelings(const Labeling& alpha, const Labeling& beta) {
  if (alpha.labels.size() != beta.labels.size())
    throw std::invalid_argument("labeling join: size mismatch");
  Labeling j;
  j.arity = alpha.arity * beta.arity;
  j.labels.reserve(alpha.labels.size());
  for (size_t x = 0; x < alpha.labels.size(); ++x)
    j.labels.push_back(alpha.labels[x] * beta.arity + beta.labels[x]);
  return j;
}

double relative_entropy(const FiniteProbSpace& sp, const Labeling& alpha, const Labeling& beta) {
  return entropy(sp, join_labelings(alpha, beta)) - entropy(sp, beta);
}

Rat freeness_defect(const FiniteAction& a, const Element& gamma, int n,
                    std::uint64_t subset_cap) {
  if (n < 1) throw std::invalid_argument("freeness defect: need n >= 1");
  const int pts = a.space.size();
  if (pts > 62 || (std::uint64_t{1} << pts) > subset_cap)
    throw std::invalid_argument("freeness defect: subset count exceeds cap");
  const std::uint64_t total = std::uint64_t{1} << pts;

  // point image under gamma^i for i < n
  std::vector<Perm> pow(n);
  pow[0].resize(pts);
  std::iota(pow[0].begin(), pow[0].end(), 0);
  Perm pg = a.perm_of(gamma);
  for (int i = 1; i < n; ++i) pow[i] = compose_perm(pg, pow[i - 1]);

  // cumulative masses for every subset mask
  std::vector<Rat> mass(total, Rat(0));
  for (std::uint64_t m = 1; m < total; ++m) {
    int low = std::countr_zero(m);
    mass[m] = mass[m & (m - 1)] + a.space.weights[low];
  }
  auto image_mask = [&](std::uint64_t m, const Perm& p) {
    std::uint64_t out = 0;
    while (m) {
      int x = std::countr_zero(m);
      m &= m - 1;
      out |= std::uint64_t{1} << p[x];
    }
    return out;
  };

  const Rat inv_n(1, n);
  Rat best = 2;  // above any attainable value
  for (std::uint64_t m = 0; m < total; ++m) {
    Rat score = rat_abs(mass[m] - inv_n);
    if (score >= best) continue;
    std::vector<std::uint64_t> imgs(n);
    for (int i = 0; i < n; ++i) imgs[i] = image_mask(m, pow[i]);
    for (int i = 0; i < n && score < best; ++i)
      for (int j = i + 1; j < n; ++j) {
        Rat overlap = mass[imgs[i] & imgs[j]];
        if (overlap > score) score = overlap;
        if (score >= best) break;
      }
    if (score < best) best = score;
  }
  return best;
}

Rat weak_containment_defect(const FiniteAction& a, const std::vector<std::vector<bool>>& A,
                            const FiniteAction& b, const std::vector<std::vector<bool>>& B,
                            const std::vector<Element>& F) {
  if (A.size() != B.size()) throw std::invalid_argument("weak containment: set count mismatch");
  Rat worst = 0;
  for (const Element& g : F) {
    Perm pa = a.perm_of(g);
    Perm pb = b.perm_of(g);
    for (size_t i = 0; i < A.size(); ++i) {
      std::vector<bool> gA(A[i].size(), false);
      for (size_t x = 0; x < A[i].size(); ++x)
        if (A[i][x]) gA[pa[x]] = true;
      std::vector<bool> gB(B[i].size(), false);
      for (size_t y = 0; y < B[i].size(); ++y)
        if (B[i][y]) gB[pb[y]] = true;
      for (size_t j = 0; j < A.size(); ++j) {
        std::vector<bool> ia(A[j].size());
        for (size_t x = 0; x < A[j].size(); ++x) ia[x] = gA[x] && A[j][x];
        std::vector<bool> ib(B[j].size());
        for (size_t y = 0; y < B[j].size(); ++y) ib[y] = gB[y] && B[j][y];
        Rat d = rat_abs(a.mass(ia) - b.mass(ib));
        if (d > worst) worst = d;
      }
    }
  }
  return worst;
}

WeakContainmentSearchResult weak_containment_search(
    const FiniteAction& a, const std::vector<std::vector<bool>>& A, const FiniteAction& b,
    const std::vector<Element>& F, std::uint64_t cap) {
  const int ny = b.space.size();
  const size_t k = A.size();
  if (ny > 62) throw std::invalid_argument("weak containment search: target space too large");
  const std::uint64_t per = std::uint64_t{1} << ny;
  double total = std::pow(static_cast<double>(per), static_cast<double>(k));
  if (total > static_cast<double>(cap))
    throw std::invalid_argument("weak containment search: candidate count exceeds cap");

  std::vector<std::uint64_t> masks(k, 0);
  auto to_sets = [&](const std::vector<std::uint64_t>& ms) {
    std::vector<std::vector<bool>> sets(k, std::vector<bool>(ny, false));
    for (size_t i = 0; i < k; ++i)
      for (int y = 0; y < ny; ++y) sets[i][y] = (ms[i] >> y) & 1;
    return sets;
  };

  WeakContainmentSearchResult best;
  best.defect = 2;
  bool done = false;
  while (!done) {
    auto sets = to_sets(masks);
    Rat d = weak_containment_defect(a, A, b, sets, F);
    if (d < best.defect) {
      best.defect = d;
      best.witness = std::move(sets);
    }
    // odometer: last set fastest, so candidates run in lex order of the tuple
    done = true;
    for (size_t i = k; i-- > 0;) {
      if (++masks[i] < per) {
        done = false;
        break;
      }
      masks[i] = 0;
    }
  }
  return best;
}

namespace {
Rat symmdiff_mass(const FiniteAction& a, const std::vector<bool>& s, const std::vector<bool>& t) {
  std::vector<bool> d(s.size());
  for (size_t x = 0; x < s.size(); ++x) d[x] = s[x] != t[x];
  return a.mass(d);
}
}  // namespace

Rat extension_neighborhood_defect(const ExtensionTriple& e1, const ExtensionTriple& e2,
                                  const std::vector<std::vector<bool>>& target_sets,
                                  const std::vector<std::vector<bool>>& source_sets,
                                  const std::vector<Element>& F) {
  if (e1.source.space.weights != e2.source.space.weights ||
      e1.target.space.weights != e2.target.space.weights)
    throw std::invalid_argument("extension neighborhood: mismatched spaces");
  const int ny = e1.source.space.size();
  Rat worst = 0;
  for (const auto& A : target_sets) {
    std::vector<bool> p1(ny), p2(ny);
    for (int y = 0; y < ny; ++y) {
      p1[y] = A[e1.phi[y]];
      p2[y] = A[e2.phi[y]];
    }
    worst = std::max(worst, symmdiff_mass(e1.source, p1, p2));
  }
  for (const Element& g : F) {
    for (const auto& B : source_sets) {
      worst = std::max(worst, symmdiff_mass(e1.source, e1.source.image(g, B),
                                            e2.source.image(g, B)));
    }
  }
  return worst;
}

Rat RelativeJoining::at(int x, int y) const {
  auto it = weights.find({x, y});
  return it == weights.end() ? Rat(0) : it->second;
}

RelativeJoining relative_independent_joining(const FiniteProbSpace& mu,
                                             const FiniteProbSpace& nu,
                                             const FiniteProbSpace& eta,
                                             const std::vector<int>& phi,
                                             const std::vector<int>& psi) {
  mu.validate();
  nu.validate();
  eta.validate();
  if (phi.size() != static_cast<size_t>(mu.size()) || psi.size() != static_cast<size_t>(nu.size()))
    throw std::invalid_argument("joining: factor map size mismatch");
  std::vector<Rat> push_mu(eta.size(), Rat(0)), push_nu(eta.size(), Rat(0));
  for (int x = 0; x < mu.size(); ++x) {
    if (phi[x] < 0 || phi[x] >= eta.size())
      throw std::invalid_argument("joining: factor map value out of range");
    push_mu[phi[x]] += mu.weights[x];
  }
  for (int y = 0; y < nu.size(); ++y) {
    if (psi[y] < 0 || psi[y] >= eta.size())
      throw std::invalid_argument("joining: factor map value out of range");
    push_nu[psi[y]] += nu.weights[y];
  }
  if (push_mu != eta.weights || push_nu != eta.weights)
    throw std::invalid_argument("joining: maps are not measure-preserving onto the base");

  RelativeJoining lam;
  lam.nx = mu.size();
  lam.ny = nu.size();
  for (int x = 0; x < mu.size(); ++x) {
    if (mu.weights[x] == 0) continue;
    for (int y = 0; y < nu.size(); ++y) {
      if (nu.weights[y] == 0 || phi[x] != psi[y]) continue;
      // eta(phi(x)) > 0 here since it dominates mu(x) > 0
      lam.weights[{x, y}] = mu.weights[x] * nu.weights[y] / eta.weights[phi[x]];
    }
  }
  return lam;
}

FiniteAction joining_action(const FiniteAction& a, const FiniteAction& b,
                            const RelativeJoining& lam) {
  if (lam.nx != a.space.size() || lam.ny != b.space.size())
    throw std::invalid_argument("joining action: size mismatch");
  FiniteAction j;
  j.ctx = a.ctx;
  j.space.weights.reserve(lam.nx * lam.ny);
  for (int x = 0; x < lam.nx; ++x)
    for (int y = 0; y < lam.ny; ++y) {
      j.space.weights.push_back(lam.at(x, y));
      j.space.point_names.push_back("(" + a.space.point_names[x] + "," +
                                    b.space.point_names[y] + ")");
    }
  for (int i = 0; i < a.ctx->generator_count(); ++i) {
    Perm p(lam.nx * lam.ny);
    for (int x = 0; x < lam.nx; ++x)
      for (int y = 0; y < lam.ny; ++y)
        p[x * lam.ny + y] = a.gen_perms[i][x] * lam.ny + b.gen_perms[i][y];
    j.gen_perms.push_back(std::move(p));
  }
  j.validate();
  return j;
}

}  // namespace ergoforge
