#include "ergoforge/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ergoforge {

void Cochain::validate(int points) const {
  if (!K) throw std::invalid_argument("cochain: missing value group");
  if (support.size() == 0) throw std::invalid_argument("cochain: empty support");
  if (val.size() != support.size()) throw std::invalid_argument("cochain: row count mismatch");
  for (const auto& row : val) {
    if (static_cast<int>(row.size()) != points)
      throw std::invalid_argument("cochain: column count mismatch");
    for (int v : row)
      if (v < 0 || v >= K->size()) throw std::invalid_argument("cochain: value out of range");
  }
}

DefectWeights DefectWeights::standard(const GroupContext& ctx, const Cochain& sigma) {
  DefectWeights w;
  const int m = static_cast<int>(sigma.support.size());
  for (int i = 0; i < m; ++i) w.e_exp.push_back(static_cast<unsigned>(i + 1));
  unsigned next = 1;
  for (int gi = 0; gi < m; ++gi)
    for (int di = 0; di < m; ++di) {
      Element prod = ctx.multiply(sigma.support.elems[gi], sigma.support.elems[di]);
      if (sigma.support.find(prod) < 0) continue;
      for (int k = 0; k < sigma.K->size(); ++k) w.f_exp[{gi, di, k}] = next++;
    }
  return w;
}

void DefectWeights::validate(const GroupContext& ctx, const Cochain& sigma) const {
  if (e_exp.size() != sigma.support.size())
    throw std::invalid_argument("defect weights: one exponent per support element required");
  std::vector<unsigned> es = e_exp;
  std::sort(es.begin(), es.end());
  if (std::adjacent_find(es.begin(), es.end()) != es.end())
    throw std::invalid_argument("defect weights: level-set exponents must be injective");
  std::vector<unsigned> fs;
  for (const auto& [key, e] : f_exp) fs.push_back(e);
  std::sort(fs.begin(), fs.end());
  if (std::adjacent_find(fs.begin(), fs.end()) != fs.end())
    throw std::invalid_argument("defect weights: identity-term exponents must be injective");
  const int m = static_cast<int>(sigma.support.size());
  for (int gi = 0; gi < m; ++gi)
    for (int di = 0; di < m; ++di) {
      Element prod = ctx.multiply(sigma.support.elems[gi], sigma.support.elems[di]);
      if (sigma.support.find(prod) < 0) continue;
      for (int k = 0; k < sigma.K->size(); ++k)
        if (!f_exp.count({gi, di, k}))
          throw std::invalid_argument("defect weights: missing exponent for a composable triple");
    }
}

Rat cocycle_defect(const FiniteAction& a, const Cochain& sigma, const DefectWeights& w,
                   bool require_closed_support) {
  sigma.validate(a.space.size());
  w.validate(*a.ctx, sigma);
  const GroupContext& ctx = *a.ctx;
  const int m = static_cast<int>(sigma.support.size());
  const int n = a.space.size();

  // Phi1: level sets of a total function always partition the space, so the
  // nearest K-indexed partition is the level-set family itself.
  Rat phi1 = 0;

  Rat phi2 = 0;
  for (int gi = 0; gi < m; ++gi) {
    Perm delta_of;  // filled per delta below
    for (int di = 0; di < m; ++di) {
      Element prod = ctx.multiply(sigma.support.elems[gi], sigma.support.elems[di]);
      int pi = sigma.support.find(prod);
      if (pi < 0) {
        if (require_closed_support)
          throw std::invalid_argument("cocycle defect: support not product-closed at " +
                                      ctx.to_string(prod));
        continue;
      }
      delta_of = a.perm_of(sigma.support.elems[di]);
      for (int k = 0; k < sigma.K->size(); ++k) {
        Rat diff = 0;
        for (int x = 0; x < n; ++x) {
          int lhs = sigma.K->mul[sigma.val[gi][delta_of[x]]][sigma.val[di][x]];
          bool in_left = lhs == k;
          bool in_right = sigma.val[pi][x] == k;
          if (in_left != in_right) diff += a.space.weights[x];
        }
        phi2 += pow2_neg(w.f_exp.at({gi, di, k})) * diff;
      }
    }
  }
  return std::max(phi1, phi2);
}

Cochain coboundary_from(const FiniteAction& a, std::shared_ptr<const FiniteGroupTable> K,
                        const std::vector<int>& f, Window support) {
  const int n = a.space.size();
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("coboundary: relabeling size mismatch");
  for (int v : f)
    if (v < 0 || v >= K->size()) throw std::invalid_argument("coboundary: value out of range");
  Cochain sigma;
  sigma.K = std::move(K);
  sigma.support = std::move(support);
  sigma.val.reserve(sigma.support.size());
  for (const Element& s : sigma.support.elems) {
    Perm p = a.perm_of(s);
    std::vector<int> row(n);
    for (int x = 0; x < n; ++x) row[x] = sigma.K->mul[f[p[x]]][sigma.K->inv[f[x]]];
    sigma.val.push_back(std::move(row));
  }
  return sigma;
}

Cochain extend_free_cochain(const FiniteAction& a, std::shared_ptr<const FiniteGroupTable> K,
                            const std::vector<std::vector<int>>& gen_vals, Window support) {
  const GroupContext& ctx = *a.ctx;
  const bool relation_free =
      ctx.kind == GroupKind::free_group ||
      (ctx.kind == GroupKind::free_abelian && ctx.generator_count() == 1);
  if (!relation_free)
    throw std::invalid_argument("free extension: group kind carries relations");
  const int n = a.space.size();
  if (static_cast<int>(gen_vals.size()) != ctx.generator_count())
    throw std::invalid_argument("free extension: one value row per generator required");
  for (const auto& row : gen_vals) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("free extension: value row size mismatch");
    for (int v : row)
      if (v < 0 || v >= K->size())
        throw std::invalid_argument("free extension: value out of range");
  }

  // sigma(l w, x) = sigma_letter(l, w x) sigma(w, x), walking letters right to
  // left; sigma(s^{-1}, y) = sigma(s, s^{-1} y)^{-1}.
  Cochain sigma;
  sigma.K = std::move(K);
  sigma.support = std::move(support);
  for (const Element& s : sigma.support.elems) {
    std::vector<int> letters = ctx.to_letters(s);
    std::vector<int> row(n);
    for (int x = 0; x < n; ++x) {
      int acc = sigma.K->id;
      int y = x;
      for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
        int l = *it;
        int gi = std::abs(l) - 1;
        int value;
        int next_y;
        if (l > 0) {
          value = gen_vals[gi][y];
          next_y = a.gen_perms[gi][y];
        } else {
          next_y = inverse_perm(a.gen_perms[gi])[y];
          value = sigma.K->inv[gen_vals[gi][next_y]];
        }
        acc = sigma.K->mul[value][acc];
        y = next_y;
      }
      row[x] = acc;
    }
    sigma.val.push_back(std::move(row));
  }
  return sigma;
}

ExtensionTriple skew_product(const FiniteAction& a, const Cochain& sigma) {
  sigma.validate(a.space.size());
  DefectWeights w = DefectWeights::standard(*a.ctx, sigma);
  Rat defect = cocycle_defect(a, sigma, w);
  if (defect != 0)
    throw std::invalid_argument("skew product: cochain has nonzero defect " +
                                rat_to_string(defect));
  const GroupContext& ctx = *a.ctx;
  const int g = ctx.generator_count();
  std::vector<int> gen_rows(g);
  for (int i = 0; i < g; ++i) {
    int idx = sigma.support.find(ctx.generator(i));
    if (idx < 0)
      throw std::invalid_argument("skew product: support misses a generator");
    gen_rows[i] = idx;
  }

  const bool sym_fiber = !sigma.K->one_line.empty();
  const int k = sym_fiber ? static_cast<int>(sigma.K->one_line[0].size()) : sigma.K->size();
  auto fiber_apply = [&](int kv, int u) {
    return sym_fiber ? sigma.K->one_line[kv][u] : sigma.K->mul[kv][u];
  };
  auto fiber_name = [&](int u) {
    return sym_fiber ? std::to_string(u) : sigma.K->names[u];
  };

  const int n = a.space.size();
  FiniteAction skew;
  skew.ctx = a.ctx;
  skew.space.weights.reserve(n * k);
  for (int x = 0; x < n; ++x)
    for (int u = 0; u < k; ++u) {
      skew.space.weights.push_back(a.space.weights[x] / k);
      skew.space.point_names.push_back("(" + a.space.point_names[x] + "," + fiber_name(u) + ")");
    }
  for (int i = 0; i < g; ++i) {
    Perm p(n * k);
    for (int x = 0; x < n; ++x)
      for (int u = 0; u < k; ++u)
        p[x * k + u] = a.gen_perms[i][x] * k + fiber_apply(sigma.val[gen_rows[i]][x], u);
    skew.gen_perms.push_back(std::move(p));
  }

  ExtensionTriple ext;
  ext.source = std::move(skew);
  ext.target = a;
  ext.phi.resize(n * k);
  for (int x = 0; x < n; ++x)
    for (int u = 0; u < k; ++u) ext.phi[x * k + u] = x;
  ext.validate();  // rejects relation violations in the skew action
  return ext;
}

namespace {

Rat agreement_mass(const FiniteAction& a, const Cochain& sigma,
                   const std::vector<int>& rows, const std::vector<Perm>& perms,
                   const std::vector<int>& f) {
  Rat total = 0;
  const int n = a.space.size();
  for (int x = 0; x < n; ++x) {
    bool ok = true;
    for (size_t i = 0; i < rows.size() && ok; ++i) {
      int want = sigma.val[rows[i]][x];
      int got = sigma.K->mul[f[perms[i][x]]][sigma.K->inv[f[x]]];
      ok = want == got;
    }
    if (ok) total += a.space.weights[x];
  }
  return total;
}

}  // namespace

DensitySearchResult coboundary_density_search(const FiniteAction& a, const Cochain& sigma,
                                              const std::vector<Element>& F, const Rat& eps,
                                              const SearchOptions& opts) {
  sigma.validate(a.space.size());
  if (eps < 0) throw std::invalid_argument("density search: negative tolerance");
  const int n = a.space.size();
  const int ksize = sigma.K->size();
  std::vector<int> rows;
  std::vector<Perm> perms;
  for (const Element& g : F) {
    int idx = sigma.support.find(g);
    if (idx < 0) throw std::invalid_argument("density search: test element outside support");
    rows.push_back(idx);
    perms.push_back(a.perm_of(g));
  }

  DensitySearchResult res;
  res.engine = opts.engine;
  res.seed = opts.seed;
  auto accept = [&](const Rat& mass) {
    return mass > 1 - eps || mass == 1;
  };

  if (opts.engine == SearchEngine::exhaustive) {
    double candidates = std::pow(static_cast<double>(ksize), static_cast<double>(n));
    if (candidates > static_cast<double>(opts.cap))
      throw std::invalid_argument("density search: exhaustive candidate count exceeds cap");
    std::vector<int> f(n, 0);
    res.f = f;
    res.mass = agreement_mass(a, sigma, rows, perms, f);
    bool done = false;
    while (!done) {
      done = true;
      for (int i = n; i-- > 0;) {
        if (++f[i] < ksize) {
          done = false;
          break;
        }
        f[i] = 0;
      }
      if (done) break;
      Rat mass = agreement_mass(a, sigma, rows, perms, f);
      if (mass > res.mass) {
        res.mass = mass;
        res.f = f;
        if (res.mass == 1) break;
      }
    }
    res.certified = true;
    res.success = accept(res.mass);
    return res;
  }

  std::mt19937_64 rng(opts.seed);
  bool have = false;
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    std::vector<int> f(n);
    for (int x = 0; x < n; ++x) f[x] = static_cast<int>(rng() % ksize);
    Rat mass = agreement_mass(a, sigma, rows, perms, f);
    bool improved = true;
    while (improved) {
      improved = false;
      int bx = -1, bk = -1;
      Rat best = mass;
      for (int x = 0; x < n; ++x) {
        int old = f[x];
        for (int k = 0; k < ksize; ++k) {
          if (k == old) continue;
          f[x] = k;
          Rat m = agreement_mass(a, sigma, rows, perms, f);
          if (m > best) {
            best = m;
            bx = x;
            bk = k;
          }
        }
        f[x] = old;
      }
      if (bx >= 0) {
        f[bx] = bk;
        mass = best;
        improved = true;
      }
    }
    if (!have || mass > res.mass || (mass == res.mass && f < res.f)) {
      have = true;
      res.mass = mass;
      res.f = f;
    }
    if (res.mass == 1) break;
  }
  res.success = accept(res.mass);
  return res;
}

void WindowCochain::validate() const {
  if (!K) throw std::invalid_argument("window cochain: missing value group");
  if (val.size() != verts.size())
    throw std::invalid_argument("window cochain: row count mismatch");
  for (const auto& row : val) {
    if (row.size() != verts.size())
      throw std::invalid_argument("window cochain: column count mismatch");
    for (int v : row)
      if (v < -1 || v >= K->size())
        throw std::invalid_argument("window cochain: value out of range");
  }
}

int WindowCochain::pair_value(int alpha_idx, int v_idx) const {
  int v = val.at(alpha_idx).at(v_idx);
  if (v < 0) throw std::out_of_range("window cochain: entry undefined");
  return v;
}

int WindowCochain::value(const GroupContext& ctx, const Element& beta,
                         const Element& alpha) const {
  return pair_value(verts.at(alpha), verts.at(ctx.multiply(alpha, beta)));
}

WindowCochain WindowCochain::translated(const GroupContext& ctx, const Element& gamma) const {
  WindowCochain out;
  std::vector<Element> moved;
  moved.reserve(verts.size());
  for (const Element& v : verts.elems) moved.push_back(ctx.multiply(gamma, v));
  out.verts = Window::of(std::move(moved), false);
  out.K = K;
  out.val = val;  // positional: c(beta)(gamma^{-1} alpha) sits at the same indices
  return out;
}

bool WindowCochain::satisfies_cocycle_identity() const {
  const size_t n = verts.size();
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      for (size_t z = 0; z < n; ++z) {
        if (val[x][z] < 0 || val[y][z] < 0 || val[x][y] < 0) continue;
        if (val[x][z] != K->mul[val[y][z]][val[x][y]]) return false;
      }
  return true;
}

WindowCochain WindowCochain::from_potential(const GroupContext& ctx, Window verts,
                                            std::shared_ptr<const FiniteGroupTable> K,
                                            const std::vector<int>& h) {
  (void)ctx;
  if (h.size() != verts.size())
    throw std::invalid_argument("window cochain: potential size mismatch");
  WindowCochain c;
  c.K = std::move(K);
  const size_t n = verts.size();
  c.verts = std::move(verts);
  c.val.assign(n, std::vector<int>(n, 0));
  for (size_t a = 0; a < n; ++a)
    for (size_t v = 0; v < n; ++v) c.val[a][v] = c.K->mul[h[v]][c.K->inv[h[a]]];
  return c;
}

void EquivariantCochainMap::validate(int points) const {
  if (static_cast<int>(at_point.size()) != points)
    throw std::invalid_argument("cochain map: one window cochain per point required");
  for (const auto& c : at_point) {
    if (!(c.verts == verts) || c.K.get() != K.get())
      throw std::invalid_argument("cochain map: inconsistent window or value group");
    c.validate();
  }
}

EquivariantCochainMap cochain_correspondence(const FiniteAction& a, const Cochain& theta,
                                             const Window& verts) {
  theta.validate(a.space.size());
  const GroupContext& ctx = *a.ctx;
  EquivariantCochainMap out;
  out.verts = verts;
  out.K = theta.K;
  const size_t n = verts.size();

  // rows of theta and inverse-action permutations for every v^{-1} alpha
  std::vector<std::vector<int>> row_idx(n, std::vector<int>(n));
  for (size_t ai = 0; ai < n; ++ai)
    for (size_t vi = 0; vi < n; ++vi) {
      Element beta_inv = ctx.multiply(ctx.inverse(verts.elems[vi]), verts.elems[ai]);
      int r = theta.support.find(beta_inv);
      if (r < 0)
        throw std::invalid_argument("correspondence: support misses " + ctx.to_string(beta_inv));
      row_idx[ai][vi] = r;
    }
  std::vector<Perm> alpha_inv(n);
  for (size_t ai = 0; ai < n; ++ai)
    alpha_inv[ai] = a.perm_of(ctx.inverse(verts.elems[ai]));

  out.at_point.reserve(a.space.size());
  for (int x = 0; x < a.space.size(); ++x) {
    WindowCochain c;
    c.verts = verts;
    c.K = theta.K;
    c.val.assign(n, std::vector<int>(n, 0));
    for (size_t ai = 0; ai < n; ++ai) {
      int base = alpha_inv[ai][x];
      for (size_t vi = 0; vi < n; ++vi) c.val[ai][vi] = theta.val[row_idx[ai][vi]][base];
    }
    out.at_point.push_back(std::move(c));
  }
  return out;
}

Cochain correspondence_inverse(const FiniteAction& a, const EquivariantCochainMap& c) {
  c.validate(a.space.size());
  const GroupContext& ctx = *a.ctx;
  int e_idx = c.verts.find(ctx.identity());
  if (e_idx < 0) throw std::invalid_argument("correspondence inverse: window misses identity");
  Cochain theta;
  theta.K = c.K;
  std::vector<Element> sup;
  sup.reserve(c.verts.size());
  for (const Element& v : c.verts.elems) sup.push_back(ctx.inverse(v));
  theta.support = Window::of(std::move(sup), false);
  for (size_t vi = 0; vi < c.verts.size(); ++vi) {
    std::vector<int> row(a.space.size());
    for (int x = 0; x < a.space.size(); ++x)
      row[x] = c.at_point[x].val[e_idx][vi];  // theta(gamma, x) = c(x)(gamma^{-1})(e)
    theta.val.push_back(std::move(row));
  }
  return theta;
}

TwoVariableCochainMap coboundary_operator(const FiniteAction& a,
                                          const EquivariantCochainMap& c,
                                          const Window& outer, const Window& inner) {
  c.validate(a.space.size());
  const GroupContext& ctx = *a.ctx;
  TwoVariableCochainMap d;
  d.outer = outer;
  d.inner = inner;
  d.K = c.K;
  const size_t no = outer.size(), ni = inner.size();

  // index triples (gamma, gamma alpha, gamma alpha beta) into the cochain window
  std::vector<std::vector<int>> ga(ni, std::vector<int>(no));
  std::vector<std::vector<std::vector<int>>> gab(
      ni, std::vector<std::vector<int>>(no, std::vector<int>(no)));
  std::vector<int> gidx(ni);
  for (size_t g = 0; g < ni; ++g) {
    gidx[g] = c.verts.at(inner.elems[g]);
    for (size_t al = 0; al < no; ++al) {
      Element gam_al = ctx.multiply(inner.elems[g], outer.elems[al]);
      ga[g][al] = c.verts.at(gam_al);
      for (size_t be = 0; be < no; ++be)
        gab[g][al][be] = c.verts.at(ctx.multiply(gam_al, outer.elems[be]));
    }
  }

  d.val.assign(a.space.size(),
               std::vector<std::vector<std::vector<int>>>(
                   no, std::vector<std::vector<int>>(no, std::vector<int>(ni, 0))));
  for (int x = 0; x < a.space.size(); ++x) {
    const WindowCochain& cx = c.at_point[x];
    for (size_t al = 0; al < no; ++al)
      for (size_t be = 0; be < no; ++be)
        for (size_t g = 0; g < ni; ++g) {
          int t1 = cx.pair_value(gidx[g], gab[g][al][be]);   // c(alpha beta)(gamma)
          int t2 = cx.pair_value(ga[g][al], gab[g][al][be]); // c(beta)(gamma alpha)
          int t3 = cx.pair_value(gidx[g], ga[g][al]);        // c(alpha)(gamma)
          d.val[x][al][be][g] = c.K->mul[c.K->mul[c.K->inv[t1]][t2]][t3];
        }
  }
  return d;
}

}  // namespace ergoforge
