#include "ergoforge/ec.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ergoforge {

namespace {

// defects are bounded by 1; anything above marks an infeasible candidate
const Rat kInfeasible(9);

Rat table_distance(const std::map<std::pair<Config, Config>, Rat>& a,
                   const std::map<std::pair<Config, Config>, Rat>& b) {
  Rat worst = 0;
  for (const auto& [key, w] : a) {
    auto it = b.find(key);
    Rat d = rat_abs(w - (it == b.end() ? Rat(0) : it->second));
    if (d > worst) worst = d;
  }
  for (const auto& [key, w] : b)
    if (!a.count(key) && w > worst) worst = w;
  return worst;
}

bool tolerance_met(const Rat& defect, const Rat& eps) {
  return defect < eps || defect == 0;
}

struct LabelSearchCore {
  std::vector<int> labels;
  Rat score = kInfeasible;
  bool certified = false;
  bool feasible_seen = false;
};

// Minimize score over labelings of n points into `arity` symbols. Exhaustive
// sweeps run in lexicographic order (position 0 most significant) so the
// first optimum is the lexicographically smallest. The local engine restarts
// from seeded random labelings and takes best single-point improvements,
// breaking ties toward the smallest (position, symbol).
template <typename Score>
LabelSearchCore label_search(int n, int arity, const SearchOptions& opts, Score&& score) {
  LabelSearchCore out;
  if (opts.engine == SearchEngine::exhaustive) {
    double total = std::pow(static_cast<double>(arity), static_cast<double>(n));
    if (total > static_cast<double>(opts.cap))
      throw std::invalid_argument("label search: exhaustive candidate count exceeds cap");
    std::vector<int> cur(n, 0);
    while (true) {
      Rat s = score(cur);
      if (s < kInfeasible) out.feasible_seen = true;
      if (s < out.score) {
        out.score = s;
        out.labels = cur;
        if (s == 0) break;
      }
      int i = n;
      bool rolled = true;
      while (i-- > 0) {
        if (++cur[i] < arity) {
          rolled = false;
          break;
        }
        cur[i] = 0;
      }
      if (rolled) break;
    }
    out.certified = true;
    if (out.labels.empty() && n > 0 && !out.feasible_seen) out.labels.assign(n, 0);
    return out;
  }

  std::mt19937_64 rng(opts.seed);
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    std::vector<int> cur(n);
    for (int i = 0; i < n; ++i) cur[i] = static_cast<int>(rng() % arity);
    Rat s = score(cur);
    bool improved = true;
    while (improved) {
      improved = false;
      int bi = -1, bk = -1;
      Rat best = s;
      for (int i = 0; i < n; ++i) {
        int old = cur[i];
        for (int k = 0; k < arity; ++k) {
          if (k == old) continue;
          cur[i] = k;
          Rat t = score(cur);
          if (t < best) {
            best = t;
            bi = i;
            bk = k;
          }
        }
        cur[i] = old;
      }
      if (bi >= 0) {
        cur[bi] = bk;
        s = best;
        improved = true;
      }
    }
    if (s < kInfeasible) out.feasible_seen = true;
    if (s < out.score || (s == out.score && (out.labels.empty() || cur < out.labels))) {
      out.score = s;
      out.labels = cur;
    }
    if (out.score == 0) break;
  }
  if (out.labels.empty() && n > 0) out.labels.assign(n, 0);
  return out;
}

}  // namespace

void ECQuery::validate() const {
  ext.validate();
  alpha.validate(ext.source.space.size());
  beta.validate(ext.target.space.size());
  if (eps < 0 || eps > 1) throw std::invalid_argument("ec query: tolerance outside [0,1]");
  for (const Element& s : S) ext.target.ctx->check_element(s);
  if (S.empty()) throw std::invalid_argument("ec query: empty test set");
}

LabelSearchResult ec_criterion_search(const ECQuery& query, const SearchOptions& opts) {
  query.validate();
  Window Ws = Window::of(query.S);
  Window We = Window::of({query.ext.target.ctx->identity()});

  // beta read through the factor map, as a source labeling
  Labeling beta_up;
  beta_up.arity = query.beta.arity;
  for (int y = 0; y < query.ext.source.space.size(); ++y)
    beta_up.labels.push_back(query.beta.labels[query.ext.phi[y]]);
  const auto target_table =
      joint_pushforward_distribution(query.ext.source, query.alpha, Ws, beta_up, We).weights;

  const FiniteAction& a = query.ext.target;
  auto score = [&](const std::vector<int>& cand) {
    Labeling at{cand, query.alpha.arity};
    return table_distance(
        target_table, joint_pushforward_distribution(a, at, Ws, query.beta, We).weights);
  };
  LabelSearchCore core = label_search(a.space.size(), query.alpha.arity, opts, score);

  LabelSearchResult res;
  res.witness = Labeling{core.labels, query.alpha.arity};
  res.defect = core.score;
  res.engine = opts.engine;
  res.certified = core.certified;
  res.seed = opts.seed;
  res.success = tolerance_met(res.defect, query.eps);
  return res;
}

FiniteExtResult finite_ext_ec_search(const FiniteAction& a, int k, const Cochain& sigma,
                                     const std::vector<Element>& F, const Rat& eps,
                                     const Labeling& beta, const SearchOptions& opts) {
  a.validate();
  sigma.validate(a.space.size());
  beta.validate(a.space.size());
  if (k < 1) throw std::invalid_argument("finite ext search: k must be positive");
  if (eps < 0) throw std::invalid_argument("finite ext search: negative tolerance");
  if (sigma.K->one_line.empty() || static_cast<int>(sigma.K->one_line[0].size()) != k)
    throw std::invalid_argument("finite ext search: cocycle must land in Sym(k)");
  {
    DefectWeights w = DefectWeights::standard(*a.ctx, sigma);
    Rat d = cocycle_defect(a, sigma, w);
    if (d != 0)
      throw std::invalid_argument("finite ext search: cocycle has nonzero defect " +
                                  rat_to_string(d));
  }
  const int n = a.space.size();
  std::vector<int> rows;
  std::vector<Perm> perms;
  for (const Element& f : F) {
    int idx = sigma.support.find(f);
    if (idx < 0)
      throw std::invalid_argument("finite ext search: test element outside the cocycle support");
    rows.push_back(idx);
    perms.push_back(a.perm_of(f));
  }

  const Rat inv_k(1, k);
  std::vector<Rat> beta_mass(beta.arity, Rat(0));
  for (int x = 0; x < n; ++x) beta_mass[beta.labels[x]] += a.space.weights[x];

  auto cond23 = [&](const std::vector<int>& cand, Rat& indep, Rat& gap) {
    std::vector<Rat> cls(k, Rat(0));
    for (int x = 0; x < n; ++x) cls[cand[x]] += a.space.weights[x];
    for (int i = 0; i < k; ++i)
      if (cls[i] != inv_k) return false;  // condition (1) exact
    indep = 0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < beta.arity; ++j) {
        Rat joint = 0;
        for (int x = 0; x < n; ++x)
          if (cand[x] == i && beta.labels[x] == j) joint += a.space.weights[x];
        Rat d = rat_abs(joint - cls[i] * beta_mass[j]);
        if (d > indep) indep = d;
      }
    Rat good = 0;
    for (int x = 0; x < n; ++x) {
      bool ok = true;
      for (size_t fi = 0; fi < rows.size() && ok; ++fi)
        ok = cand[perms[fi][x]] == sigma.K->one_line[sigma.val[rows[fi]][x]][cand[x]];
      if (ok) good += a.space.weights[x];
    }
    gap = 1 - good;
    return true;
  };
  auto score = [&](const std::vector<int>& cand) {
    Rat indep, gap;
    if (!cond23(cand, indep, gap)) return kInfeasible;
    return std::max(indep, gap);
  };

  FiniteExtResult res;
  res.engine = opts.engine;
  res.seed = opts.seed;

  if (opts.engine == SearchEngine::local) {
    // label swaps preserve class masses, so the local engine needs a balanced
    // start: uniform weights with k dividing the point count
    bool uniform = true;
    for (int x = 0; x < n; ++x) uniform = uniform && a.space.weights[x] == Rat(1, n);
    if (!uniform || n % k != 0)
      throw std::invalid_argument(
          "finite ext search: local engine needs uniform weights with k dividing the points");
    std::mt19937_64 rng(opts.seed);
    bool have = false;
    std::vector<int> best;
    Rat best_score = kInfeasible;
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
      std::vector<int> cand(n);
      for (int x = 0; x < n; ++x) cand[x] = x % k;
      std::shuffle(cand.begin(), cand.end(), rng);
      Rat s = score(cand);
      bool improved = true;
      while (improved) {
        improved = false;
        int bx = -1, by = -1;
        Rat bs = s;
        for (int x = 0; x < n; ++x)
          for (int y = x + 1; y < n; ++y) {
            if (cand[x] == cand[y]) continue;
            std::swap(cand[x], cand[y]);
            Rat t = score(cand);
            if (t < bs) {
              bs = t;
              bx = x;
              by = y;
            }
            std::swap(cand[x], cand[y]);
          }
        if (bx >= 0) {
          std::swap(cand[bx], cand[by]);
          s = bs;
          improved = true;
        }
      }
      if (!have || s < best_score || (s == best_score && cand < best)) {
        have = true;
        best_score = s;
        best = cand;
      }
      if (best_score == 0) break;
    }
    res.witness = Labeling{best, k};
    if (best_score >= kInfeasible) {
      res.status = FiniteExtStatus::infeasible_pushforward;  // not certified in local mode
      return res;
    }
    cond23(best, res.independence_defect, res.equivariance_gap);
    res.status = std::max(res.independence_defect, res.equivariance_gap) <= eps
                     ? FiniteExtStatus::success
                     : FiniteExtStatus::failure;
    return res;
  }

  LabelSearchCore core = label_search(n, k, opts, score);
  res.certified = core.certified;
  if (!core.feasible_seen) {
    res.status = FiniteExtStatus::infeasible_pushforward;
    res.witness = Labeling{std::vector<int>(n, 0), k};
    return res;
  }
  res.witness = Labeling{core.labels, k};
  cond23(core.labels, res.independence_defect, res.equivariance_gap);
  res.status = std::max(res.independence_defect, res.equivariance_gap) <= eps
                   ? FiniteExtStatus::success
                   : FiniteExtStatus::failure;
  return res;
}

namespace {

Rat theta_inner_value(const FiniteAction& a, const ThetaInstance& inst, const Labeling& A,
                      const Cochain& B, const std::vector<int>& C) {
  const int n = a.space.size();
  const int k = inst.k;
  const Rat inv_k(1, k);

  std::vector<Rat> cls(k, Rat(0));
  for (int x = 0; x < n; ++x) cls[C[x]] += a.space.weights[x];
  Rat phi1 = 0;
  for (int i = 0; i < k; ++i) phi1 = std::max(phi1, rat_abs(cls[i] - inv_k));

  std::vector<Rat> am(A.arity, Rat(0));
  for (int x = 0; x < n; ++x) am[A.labels[x]] += a.space.weights[x];
  Rat phi2 = 0;
  for (int i = 0; i < A.arity; ++i)
    for (int j = 0; j < k; ++j) {
      Rat joint = 0;
      for (int x = 0; x < n; ++x)
        if (A.labels[x] == i && C[x] == j) joint += a.space.weights[x];
      phi2 = std::max(phi2, rat_abs(joint - am[i] * cls[j]));
    }

  Rat phi3 = 0;
  for (const Element& g : inst.F) {
    int row = B.support.at(g);
    Perm pg = a.perm_of(g);
    for (int rho = 0; rho < B.K->size(); ++rho) {
      const std::vector<int>& ol = B.K->one_line[rho];
      for (int i = 0; i < k; ++i) {
        Rat d = 0;
        for (int x = 0; x < n; ++x) {
          if (B.val[row][x] != rho) continue;  // x outside pi_{g,rho}(B)
          bool in_left = C[x] == i;
          bool in_right = C[pg[x]] == ol[i];  // gamma^{-1} C_{rho(i)}
          if (in_left != in_right) d += a.space.weights[x];
        }
        phi3 = std::max(phi3, d);
      }
    }
  }
  return std::max(phi1, std::max(phi2, phi3));
}

}  // namespace

ThetaResult theta_axiom_eval(const FiniteAction& a, const ThetaInstance& inst,
                             const SearchOptions& opts) {
  a.validate();
  if (inst.k < 1 || inst.q < 1) throw std::invalid_argument("theta: k, q must be positive");
  const int n = a.space.size();

  auto sym = std::make_shared<FiniteGroupTable>(FiniteGroupTable::symmetric(inst.k));
  Window sup = Window::of([&] {
    std::vector<Element> el{a.ctx->identity()};
    for (const Element& g : inst.F)
      if (!(g == a.ctx->identity())) el.push_back(g);
    return el;
  }());

  std::vector<Labeling> As;
  std::vector<Cochain> Bs;
  bool outer_fixed = inst.A.has_value() && inst.B.has_value();
  std::mt19937_64 rng(opts.seed);
  if (inst.A) {
    inst.A->validate(n);
    if (inst.A->arity != inst.q) throw std::invalid_argument("theta: partition arity mismatch");
    As.push_back(*inst.A);
  } else {
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
      Labeling A;
      A.arity = inst.q;
      for (int x = 0; x < n; ++x) A.labels.push_back(static_cast<int>(rng() % inst.q));
      As.push_back(std::move(A));
    }
  }
  if (inst.B) {
    for (const Element& g : inst.F)
      if (inst.B->support.find(g) < 0)
        throw std::invalid_argument("theta: cocycle support misses a test element");
    if (inst.B->K->one_line.empty() ||
        static_cast<int>(inst.B->K->one_line[0].size()) != inst.k)
      throw std::invalid_argument("theta: cocycle must land in Sym(k)");
    DefectWeights w = DefectWeights::standard(*a.ctx, *inst.B);
    if (cocycle_defect(a, *inst.B, w) != 0)
      throw std::invalid_argument("theta: cocycle has nonzero defect");
    Bs.push_back(*inst.B);
  } else {
    // coboundaries are zero-defect elements of the cocycle set for any seed
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
      std::vector<int> f(n);
      for (int x = 0; x < n; ++x) f[x] = static_cast<int>(rng() % sym->size());
      Bs.push_back(coboundary_from(a, sym, f, sup));
    }
  }

  ThetaResult res;
  res.engine = opts.engine;
  res.seed = opts.seed;
  res.exact = outer_fixed && opts.engine == SearchEngine::exhaustive;
  bool first = true;
  for (const Labeling& A : As)
    for (const Cochain& B : Bs) {
      auto score = [&](const std::vector<int>& C) { return theta_inner_value(a, inst, A, B, C); };
      LabelSearchCore core = label_search(n, inst.k, opts, score);
      if (first || core.score > res.value) {
        first = false;
        res.value = core.score;
        res.witness_C = Labeling{core.labels, inst.k};
        res.used_A = A;
        res.used_B = B;
      }
    }
  return res;
}

WeakMixResult weak_mixing_certificate(
    const FiniteAction& a,
    const std::vector<std::pair<std::vector<bool>, std::vector<bool>>>& pairs, const Rat& eps,
    const std::vector<Element>& G0) {
  a.validate();
  if (G0.empty()) throw std::invalid_argument("weak mixing: empty search set");
  WeakMixResult res;
  for (const Element& g : G0) {
    Rat worst = 0;
    bool ok = true;
    for (const auto& [A, B] : pairs) {
      std::vector<bool> gB = a.image(g, B);
      std::vector<bool> inter(A.size());
      for (size_t x = 0; x < A.size(); ++x) inter[x] = A[x] && gB[x];
      Rat d = rat_abs(a.mass(inter) - a.mass(A) * a.mass(B));
      worst = std::max(worst, d);
      if (!tolerance_met(d, eps)) ok = false;
    }
    res.worst_defects.push_back({g, worst});
    if (ok && !res.found) {
      res.found = true;
      res.witness = g;
    }
  }
  return res;
}

void BernoulliShiftModel::validate() const {
  if (!ctx) throw std::invalid_argument("bernoulli model: missing group context");
  Rat total = 0;
  for (const Rat& w : letter_weights) {
    if (w < 0) throw std::invalid_argument("bernoulli model: negative weight");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("bernoulli model: weights sum to " +
                                              rat_to_string(total));
}

Rat cylinder_mass(const BernoulliShiftModel& m, const Cylinder& c) {
  Rat mass = 1;
  for (const auto& [w, sym] : c.constraints) {
    if (sym < 0 || sym >= m.alphabet())
      throw std::invalid_argument("cylinder: symbol out of range");
    mass *= m.letter_weights[sym];
  }
  return mass;
}

Cylinder translate_cylinder(const GroupContext& ctx, const Element& g, const Cylinder& c) {
  // (g omega)(h) = omega(g^{-1} h), so the constraint at h moves to g h
  Cylinder out;
  for (const auto& [w, sym] : c.constraints)
    out.constraints[ctx.multiply(g, Element{w}).w] = sym;
  return out;
}

std::optional<Cylinder> intersect_cylinders(const Cylinder& a, const Cylinder& b) {
  Cylinder out = a;
  for (const auto& [w, sym] : b.constraints) {
    auto [it, fresh] = out.constraints.emplace(w, sym);
    if (!fresh && it->second != sym) return std::nullopt;
  }
  return out;
}

WeakMixResult weak_mixing_certificate(const BernoulliShiftModel& m,
                                      const std::vector<std::pair<Cylinder, Cylinder>>& pairs,
                                      const Rat& eps, const std::vector<Element>& G0) {
  m.validate();
  if (G0.empty()) throw std::invalid_argument("weak mixing: empty search set");
  WeakMixResult res;
  for (const Element& g : G0) {
    Rat worst = 0;
    bool ok = true;
    for (const auto& [A, B] : pairs) {
      Cylinder gB = translate_cylinder(*m.ctx, g, B);
      auto inter = intersect_cylinders(A, gB);
      Rat joint = inter ? cylinder_mass(m, *inter) : Rat(0);
      Rat d = rat_abs(joint - cylinder_mass(m, A) * cylinder_mass(m, B));
      worst = std::max(worst, d);
      if (!tolerance_met(d, eps)) ok = false;
    }
    res.worst_defects.push_back({g, worst});
    if (ok && !res.found) {
      res.found = true;
      res.witness = g;
    }
  }
  return res;
}

ApproxResult finite_extension_approx(const ExtensionTriple& e, const Labeling& alpha,
                                     const Labeling& beta, const std::vector<Element>& F,
                                     const Rat& eps, int k_max, const SearchOptions& opts) {
  e.validate();
  alpha.validate(e.source.space.size());
  beta.validate(e.target.space.size());
  if (k_max < 1) throw std::invalid_argument("extension approx: k_max must be positive");

  const FiniteAction& a = e.target;
  const GroupContext& ctx = *a.ctx;
  Window Wf = Window::of(F);
  Window We = Window::of({ctx.identity()});

  Labeling beta_up;
  beta_up.arity = beta.arity;
  for (int y = 0; y < e.source.space.size(); ++y)
    beta_up.labels.push_back(beta.labels[e.phi[y]]);
  const auto target_table =
      joint_pushforward_distribution(e.source, alpha, Wf, beta_up, We).weights;

  // candidate cocycle supports: a window large enough for the test elements
  std::vector<Element> sup_elems{ctx.identity()};
  for (const Element& g : F)
    if (!(g == ctx.identity())) sup_elems.push_back(g);
  for (int i = 0; i < ctx.generator_count(); ++i) {
    for (const Element& g : {ctx.generator(i), ctx.inverse(ctx.generator(i))})
      if (std::find(sup_elems.begin(), sup_elems.end(), g) == sup_elems.end())
        sup_elems.push_back(g);
  }
  Window sup = Window::of(sup_elems);

  const bool relation_free =
      ctx.kind == GroupKind::free_group ||
      (ctx.kind == GroupKind::free_abelian && ctx.generator_count() == 1);

  ApproxResult best;
  best.engine = opts.engine;
  best.seed = opts.seed;
  best.discrepancy = Rat(9);
  std::mt19937_64 rng(opts.seed);
  const int n = a.space.size();

  for (int k = 1; k <= k_max && !best.success; ++k) {
    auto sym = std::make_shared<FiniteGroupTable>(FiniteGroupTable::symmetric(k));
    std::vector<Cochain> candidates;
    // the trivial cocycle first: it reproduces trivial extensions exactly
    candidates.push_back(
        coboundary_from(a, sym, std::vector<int>(n, sym->id), sup));
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
      if (relation_free) {
        std::vector<std::vector<int>> gv(ctx.generator_count(), std::vector<int>(n));
        for (auto& row : gv)
          for (int x = 0; x < n; ++x) row[x] = static_cast<int>(rng() % sym->size());
        candidates.push_back(extend_free_cochain(a, sym, gv, sup));
      } else {
        std::vector<int> f(n);
        for (int x = 0; x < n; ++x) f[x] = static_cast<int>(rng() % sym->size());
        candidates.push_back(coboundary_from(a, sym, f, sup));
      }
    }

    for (const Cochain& sigma : candidates) {
      ExtensionTriple skew = skew_product(a, sigma);
      auto score = [&](const std::vector<int>& cand) {
        Labeling ap{cand, alpha.arity};
        Labeling beta_skew;
        beta_skew.arity = beta.arity;
        for (int y = 0; y < skew.source.space.size(); ++y)
          beta_skew.labels.push_back(beta.labels[skew.phi[y]]);
        return table_distance(target_table,
                              joint_pushforward_distribution(skew.source, ap, Wf, beta_skew, We)
                                  .weights);
      };
      LabelSearchCore core = label_search(skew.source.space.size(), alpha.arity, opts, score);
      if (core.score < best.discrepancy) {
        best.discrepancy = core.score;
        best.skew = skew;
        best.sigma = sigma;
        best.alpha_prime = Labeling{core.labels, alpha.arity};
        best.k = k;
        best.success = tolerance_met(core.score, eps);
        if (best.success) break;
      }
    }
  }
  return best;
}

LabelSearchResult ec_lemma_search(const FiniteAction& a, const Labeling& beta,
                                  const JointWindowMeasure& lambda, const Rat& eps,
                                  const SearchOptions& opts) {
  a.validate();
  beta.validate(a.space.size());
  lambda.validate();
  if (!(lambda.q_window == lambda.p_window))
    throw std::invalid_argument("open map search: the two coding windows must agree");
  if (beta.arity != lambda.q_arity)
    throw std::invalid_argument("open map search: coding arity mismatch");
  const Window& W = lambda.q_window;

  // precondition: the beta-coding alone matches the first marginal
  {
    WindowMeasure coded = pushforward_distribution(a, beta, W);
    WindowMeasure want = lambda.q_marginal();
    Rat worst = 0;
    for (const auto& [z, w] : coded.weights) worst = std::max(worst, rat_abs(w - want.at(z)));
    for (const auto& [z, w] : want.weights)
      if (coded.at(z) == 0) worst = std::max(worst, w);
    if (!tolerance_met(worst, eps))
      throw std::invalid_argument(
          "open map search: source coding is outside tolerance of the target marginal");
  }

  auto score = [&](const std::vector<int>& cand) {
    Labeling g{cand, lambda.p_arity};
    return table_distance(joint_pushforward_distribution(a, beta, W, g, W).weights,
                          lambda.weights);
  };
  LabelSearchCore core = label_search(a.space.size(), lambda.p_arity, opts, score);

  LabelSearchResult res;
  res.witness = Labeling{core.labels, lambda.p_arity};
  res.defect = core.score;
  res.engine = opts.engine;
  res.certified = core.certified;
  res.seed = opts.seed;
  res.success = tolerance_met(res.defect, eps);
  return res;
}

}  // namespace ergoforge
