// Command-line surface over the ergoforge library. Every command reads
// line-oriented documents, runs one library operation, and prints a
// deterministic report: identical inputs and seed give byte-identical output.
// Exit codes: 0 success / witness found, 1 certified failure, 2 usage or
// validation error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ergoforge/action.hpp"
#include "ergoforge/cocycle.hpp"
#include "ergoforge/coinduction.hpp"
#include "ergoforge/coupling.hpp"
#include "ergoforge/ec.hpp"
#include "ergoforge/forest.hpp"
#include "ergoforge/group.hpp"
#include "ergoforge/io.hpp"
#include "ergoforge/window_measure.hpp"

using namespace ergoforge;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string tol = "0";
  std::uint64_t cap = 2'000'000;
  std::string engine = "exhaustive";
  std::string format = "table";

  Rat tolerance() const { return rat_from_string(tol); }
  SearchOptions search() const {
    SearchOptions o;
    if (engine == "exhaustive")
      o.engine = SearchEngine::exhaustive;
    else if (engine == "local")
      o.engine = SearchEngine::local;
    else
      throw std::invalid_argument("unknown engine '" + engine + "'");
    o.cap = cap;
    o.seed = seed;
    return o;
  }
};

// Ordered key/value report; table mode prints rows in insertion order, json
// mode wraps the same data in a result document.
struct Report {
  std::vector<std::pair<std::string, std::string>> rows;
  Json obj = Json::object();

  void put(const std::string& key, const std::string& v) {
    rows.push_back({key, v});
    obj[key] = v;
  }
  void put(const std::string& key, bool v) {
    rows.push_back({key, v ? "true" : "false"});
    obj[key] = v;
  }
  void put(const std::string& key, long long v) {
    rows.push_back({key, std::to_string(v)});
    obj[key] = v;
  }
  void put_rat(const std::string& key, const Rat& r) {
    rows.push_back({key, rat_display(r)});
    obj[key] = rat_to_json(r);
    obj[key + "_decimal"] = rat_display(r);
  }
  void put_json(const std::string& key, const Json& j) {
    rows.push_back({key, j.dump()});
    obj[key] = j;
  }
  void print(const Globals& g) const {
    if (g.format == "json") {
      std::cout << emit_document(Document::make("result", obj));
    } else if (g.format == "table") {
      for (const auto& [k, v] : rows) std::cout << k << ": " << v << "\n";
    } else {
      throw std::invalid_argument("unknown format '" + g.format + "'");
    }
  }
};

Document load_kind(const std::string& path, const std::string& kind) {
  Document d = load_document(path);
  if (d.kind != kind)
    throw std::invalid_argument(path + ": expected a '" + kind + "' document, found '" +
                                d.kind + "'");
  return d;
}

void require_same_group(const Json& a, const Json& b, const std::string& what) {
  if (a != b)
    throw std::invalid_argument(what + ": group does not match the action's group");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (std::string& t : out) {
    size_t b = t.find_first_not_of(' ');
    size_t e = t.find_last_not_of(' ');
    t = b == std::string::npos ? "" : t.substr(b, e - b + 1);
  }
  return out;
}

std::vector<Element> parse_element_list(const GroupContext& ctx, const std::string& s) {
  std::vector<Element> out;
  for (const std::string& t : split_list(s))
    if (!t.empty()) out.push_back(ctx.parse_element(t));
  return out;
}

FiniteAction load_action(const std::string& path, Json* group_json = nullptr) {
  Document d = load_kind(path, "action");
  if (group_json) *group_json = d.payload.at("group");
  return action_from_json(d.payload);
}

Labeling load_labeling(const std::string& path) {
  Document d = load_kind(path, "labeling");
  return labeling_from_json(d.payload);
}

Cochain load_cochain(const std::string& path, const GroupContext& ctx, const Json& group_json) {
  Document d = load_kind(path, "cochain");
  require_same_group(d.payload.at("group"), group_json, path);
  return cochain_from_json(ctx, d.payload);
}

std::shared_ptr<const GroupContext> load_group(const std::string& path, Json* payload = nullptr) {
  Document d = load_kind(path, "group");
  if (payload) *payload = d.payload;
  return group_from_json(d.payload);
}

ForestDistribution load_forest_distribution(const GroupContext& ctx, const Json& payload) {
  ForestDistribution out;
  if (payload.contains("forests")) {
    for (const auto& row : payload.at("forests")) {
      DirectedForest f = forest_from_json(ctx, row);
      out.push_back({std::move(f), rat_from_json(row.at("weight"))});
    }
  } else {
    out.push_back({forest_from_json(ctx, payload), Rat(1)});
  }
  return out;
}

Json measure_atoms_json(const WindowMeasure& m) {
  Json arr = Json::array();
  for (const auto& [z, w] : m.weights)
    arr.push_back(Json{{"config", z}, {"weight", rat_to_json(w)}});
  return arr;
}

Json joint_atoms_json(const std::map<std::pair<Config, Config>, Rat>& weights) {
  Json arr = Json::array();
  for (const auto& [key, w] : weights)
    arr.push_back(Json{{"q", key.first}, {"p", key.second}, {"weight", rat_to_json(w)}});
  return arr;
}

std::string engine_name(SearchEngine e) {
  return e == SearchEngine::exhaustive ? "exhaustive" : "local";
}

int cycle_count(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  int cycles = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (size_t j = i; !seen[j]; j = p[j]) seen[j] = true;
  }
  return cycles;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int cmd_group(const Globals& g, const std::string& file, int radius) {
  Json payload;
  auto ctx = load_group(file, &payload);
  Report r;
  switch (ctx->kind) {
    case GroupKind::free_group: r.put("kind", std::string("free")); break;
    case GroupKind::free_abelian: r.put("kind", std::string("abelian")); break;
    case GroupKind::finite: r.put("kind", std::string("finite")); break;
    case GroupKind::free_quotient: r.put("kind", std::string("quotient")); break;
  }
  r.put("generators", static_cast<long long>(ctx->generator_count()));
  Json names = Json::array();
  for (int i = 0; i < ctx->generator_count(); ++i) names.push_back(ctx->to_string(ctx->generator(i)));
  r.put_json("generator_names", names);
  if (ctx->table_backed()) r.put("order", static_cast<long long>(ctx->table.size()));
  Json balls = Json::array();
  for (int k = 0; k <= radius; ++k) balls.push_back(cayley_ball(*ctx, k).size());
  r.put_json("ball_sizes", balls);
  if (payload.contains("quotient")) {
    QuotientData q = quotient_from_json(*ctx, payload.at("quotient"));
    r.put("quotient_index", static_cast<long long>(q.coset_count()));
    r.put("quotient_subgroup_order", static_cast<long long>(q.subgroup.size()));
  }
  r.print(g);
  return 0;
}

int cmd_action(const Globals& g, const std::string& file) {
  FiniteAction a = load_action(file);
  Report r;
  r.put("points", static_cast<long long>(a.space.size()));
  Json w = Json::array();
  for (const Rat& x : a.space.weights) w.push_back(rat_to_json(x));
  r.put_json("weights", w);
  Json cycles = Json::array();
  for (const Perm& p : a.gen_perms) cycles.push_back(cycle_count(p));
  r.put_json("generator_cycles", cycles);
  r.put("valid", true);
  r.print(g);
  return 0;
}

int cmd_entropy(const Globals& g, const std::string& action_file, const std::string& alpha_file,
                const std::string& beta_file) {
  FiniteAction a = load_action(action_file);
  Labeling alpha = load_labeling(alpha_file);
  alpha.validate(a.space.size());
  Report r;
  r.put("alpha_entropy", format_double(entropy(a.space, alpha)));
  if (!beta_file.empty()) {
    Labeling beta = load_labeling(beta_file);
    beta.validate(a.space.size());
    Labeling joined = join_labelings(alpha, beta);
    r.put("beta_entropy", format_double(entropy(a.space, beta)));
    r.put("join_entropy", format_double(entropy(a.space, joined)));
    r.put("conditional_entropy", format_double(relative_entropy(a.space, alpha, beta)));
  }
  r.print(g);
  return 0;
}

int cmd_cocycle_defect(const Globals& g, const std::string& action_file,
                       const std::string& cochain_file, bool closed) {
  Json gj;
  FiniteAction a = load_action(action_file, &gj);
  Cochain c = load_cochain(cochain_file, *a.ctx, gj);
  DefectWeights w = DefectWeights::standard(*a.ctx, c);
  Rat d = cocycle_defect(a, c, w, closed);
  Report r;
  r.put_rat("defect", d);
  r.put("is_cocycle", d == 0);
  r.print(g);
  return 0;
}

int cmd_cocycle_density(const Globals& g, const std::string& action_file,
                        const std::string& cochain_file, const std::string& elements) {
  Json gj;
  FiniteAction a = load_action(action_file, &gj);
  Cochain c = load_cochain(cochain_file, *a.ctx, gj);
  std::vector<Element> F =
      elements.empty() ? c.support.elems : parse_element_list(*a.ctx, elements);
  DensitySearchResult res = coboundary_density_search(a, c, F, g.tolerance(), g.search());
  Report r;
  r.put("engine", engine_name(res.engine));
  r.put("seed", static_cast<long long>(res.seed));
  r.put("success", res.success);
  r.put("certified", res.certified);
  r.put_rat("agreement_mass", res.mass);
  r.put_json("witness", Json(res.f));
  r.print(g);
  return res.success ? 0 : 1;
}

int cmd_cocycle_skew(const Globals& g, const std::string& action_file,
                     const std::string& cochain_file, const std::string& out) {
  Json gj;
  FiniteAction a = load_action(action_file, &gj);
  Cochain c = load_cochain(cochain_file, *a.ctx, gj);
  ExtensionTriple ext = skew_product(a, c);
  Report r;
  r.put("base_points", static_cast<long long>(a.space.size()));
  r.put("skew_points", static_cast<long long>(ext.source.space.size()));
  r.put("fiber", static_cast<long long>(ext.source.space.size() / a.space.size()));
  if (!out.empty()) {
    store_document(out, Document::make("factor-map", extension_to_json(ext)));
    r.put("written", out);
  }
  r.print(g);
  return 0;
}

int cmd_cocycle_extend(const Globals& g, const std::string& action_file,
                       const std::string& cochain_file, int radius, const std::string& out) {
  Json gj;
  FiniteAction a = load_action(action_file, &gj);
  Cochain c = load_cochain(cochain_file, *a.ctx, gj);
  const GroupContext& ctx = *a.ctx;
  if (static_cast<int>(c.support.size()) != ctx.generator_count())
    throw std::invalid_argument("extend: the input support must list exactly the generators");
  for (int i = 0; i < ctx.generator_count(); ++i)
    if (!(c.support.elems[i] == ctx.generator(i)))
      throw std::invalid_argument("extend: the input support must list the generators in order");
  Window ball = cayley_ball(ctx, radius);
  Cochain ext = extend_free_cochain(a, c.K, c.val, ball);
  DefectWeights w = DefectWeights::standard(ctx, ext);
  Report r;
  r.put("support", static_cast<long long>(ext.support.size()));
  r.put_rat("defect", cocycle_defect(a, ext, w));
  if (!out.empty()) {
    Json payload = cochain_to_json(ctx, ext);
    payload["group"] = gj;
    store_document(out, Document::make("cochain", payload));
    r.put("written", out);
  }
  r.print(g);
  return 0;
}

int cmd_tree_components(const Globals& g, const std::string& forest_file) {
  Document d = load_kind(forest_file, "forest");
  auto ctx = group_from_json(d.payload.at("group"));
  DirectedForest f = forest_from_json(*ctx, d.payload);
  ComponentRelation comps = components(f);
  Report r;
  r.put("vertices", static_cast<long long>(f.vertices.size()));
  r.put("edges", static_cast<long long>(f.edges.size()));
  r.put("components", static_cast<long long>(comps.classes.size()));
  r.put_json("classes", Json(comps.classes));
  r.put("spanning_tree", f.is_spanning_tree());
  r.print(g);
  return 0;
}

int cmd_tree_retract(const Globals& g, const std::string& forest_file,
                     const std::string& cochain_file, const std::string& out) {
  Document fd = load_kind(forest_file, "forest");
  auto ctx = group_from_json(fd.payload.at("group"));
  DirectedForest f = forest_from_json(*ctx, fd.payload);
  Document cd = load_kind(cochain_file, "cochain");
  require_same_group(cd.payload.at("group"), fd.payload.at("group"), cochain_file);
  WindowCochain c = window_cochain_from_json(*ctx, cd.payload);
  RetractResult res = retract(f, c);
  long long defined = 0;
  for (const auto& row : res.cochain.val)
    for (int v : row)
      if (v >= 0) ++defined;
  Report r;
  r.put("vertices", static_cast<long long>(c.verts.size()));
  r.put("defined_pairs", defined);
  r.put("fixed_point", res.cochain.val == c.val);
  r.put("cocycle_identity", res.cochain.satisfies_cocycle_identity());
  if (!out.empty()) {
    Json payload = window_cochain_to_json(*ctx, res.cochain);
    payload["group"] = fd.payload.at("group");
    store_document(out, Document::make("cochain", payload));
    r.put("written", out);
  }
  r.print(g);
  return 0;
}

std::pair<std::shared_ptr<const GroupContext>, WindowMeasure> load_measure(
    const std::string& path, Json* group_json = nullptr) {
  Document d = load_kind(path, "window-measure");
  auto ctx = group_from_json(d.payload.at("group"));
  if (group_json) *group_json = d.payload.at("group");
  return {ctx, window_measure_from_json(*ctx, d.payload)};
}

int cmd_couple(const Globals& g, const std::string& from_file, const std::string& to_file) {
  Json gj;
  auto [ctx, m0] = load_measure(from_file, &gj);
  Document td = load_kind(to_file, "window-measure");
  require_same_group(td.payload.at("group"), gj, to_file);
  WindowMeasure m1 = window_measure_from_json(*ctx, td.payload);
  MapMeasurePair pair = monotone_coupling(m1, m0);
  Report r;
  r.put("identity_map", pair.t.is_identity());
  r.put("functional", pair.is_functional());
  r.put_json("joint", joint_atoms_json(pair.joint()));
  r.print(g);
  return 0;
}

int cmd_rerandomize(const Globals& g, const std::string& measure_file,
                    const std::string& forest_file, const std::string& out) {
  Json gj;
  auto [ctx, m] = load_measure(measure_file, &gj);
  Document fd = load_kind(forest_file, "forest");
  require_same_group(fd.payload.at("group"), gj, forest_file);
  DirectedForest f = forest_from_json(*ctx, fd.payload);
  if (!(f.vertices == m.window))
    throw std::invalid_argument("rerandomize: forest vertices must equal the measure window");
  WindowMeasure res = rerandomize(m, components(f));
  Report r;
  r.put("support", static_cast<long long>(res.support_size()));
  r.put_json("atoms", measure_atoms_json(res));
  if (!out.empty()) {
    Json payload = window_measure_to_json(*ctx, res);
    payload["group"] = gj;
    store_document(out, Document::make("window-measure", payload));
    r.put("written", out);
  }
  r.print(g);
  return 0;
}

int cmd_forest_measure(const Globals& g, const std::string& measure_file,
                       const std::string& forest_file, const std::string& out) {
  Json gj;
  auto [ctx, m] = load_measure(measure_file, &gj);
  Document fd = load_kind(forest_file, "forest");
  require_same_group(fd.payload.at("group"), gj, forest_file);
  DirectedForest f = forest_from_json(*ctx, fd.payload);
  WindowMeasureFamily fam = WindowMeasureFamily::constant(ctx, m.window, m, f.vertices.elems);
  WindowMeasure res = forest_measure(fam, f);
  Report r;
  r.put("support", static_cast<long long>(res.support_size()));
  r.put_json("atoms", measure_atoms_json(res));
  if (!out.empty()) {
    Json payload = window_measure_to_json(*ctx, res);
    payload["group"] = gj;
    store_document(out, Document::make("window-measure", payload));
    r.put("written", out);
  }
  r.print(g);
  return 0;
}

int cmd_zeta(const Globals& g, const std::string& joint_file, const std::string& forest_file,
             const std::string& out) {
  Document jd = load_kind(joint_file, "window-measure");
  auto ctx = group_from_json(jd.payload.at("group"));
  JointWindowMeasure lambda = joint_measure_from_json(*ctx, jd.payload);
  Document fd = load_kind(forest_file, "forest");
  require_same_group(fd.payload.at("group"), jd.payload.at("group"), forest_file);
  ForestDistribution mu = load_forest_distribution(*ctx, fd.payload);
  JointWindowMeasure res = zeta_construct(lambda, mu);
  Report r;
  r.put("atoms", static_cast<long long>(res.weights.size()));
  r.put_json("joint", joint_atoms_json(res.weights));
  if (!out.empty()) {
    Json payload = joint_measure_to_json(*ctx, res);
    payload["group"] = jd.payload.at("group");
    store_document(out, Document::make("window-measure", payload));
    r.put("written", out);
  }
  r.print(g);
  return 0;
}

int cmd_xi(const Globals& g, const std::string& kernel_file, const std::string& measure_file,
           const std::string& forest_file, const std::string& out) {
  Document kd = load_kind(kernel_file, "kernel");
  auto ctx = group_from_json(kd.payload.at("group"));
  ConfigKernel kern = kernel_from_json(*ctx, kd.payload);
  Document md = load_kind(measure_file, "window-measure");
  require_same_group(md.payload.at("group"), kd.payload.at("group"), measure_file);
  WindowMeasure nu_prime = window_measure_from_json(*ctx, md.payload);
  Document fd = load_kind(forest_file, "forest");
  require_same_group(fd.payload.at("group"), kd.payload.at("group"), forest_file);
  ForestDistribution mu = load_forest_distribution(*ctx, fd.payload);
  JointWindowMeasure res = xi_construct(ctx, kern, nu_prime, mu);
  Report r;
  r.put("atoms", static_cast<long long>(res.weights.size()));
  r.put_json("joint", joint_atoms_json(res.weights));
  if (!out.empty()) {
    Json payload = joint_measure_to_json(*ctx, res);
    payload["group"] = kd.payload.at("group");
    store_document(out, Document::make("window-measure", payload));
    r.put("written", out);
  }
  r.print(g);
  return 0;
}

int cmd_ec_check(const Globals& g, const std::string& factor_file, const std::string& alpha_file,
                 const std::string& beta_file, const std::string& elements) {
  Document d = load_kind(factor_file, "factor-map");
  ECQuery q;
  q.ext = extension_from_json(d.payload);
  q.alpha = load_labeling(alpha_file);
  q.beta = load_labeling(beta_file);
  q.S = parse_element_list(*q.ext.target.ctx, elements);
  q.eps = g.tolerance();
  LabelSearchResult res = ec_criterion_search(q, g.search());
  Report r;
  r.put("engine", engine_name(res.engine));
  r.put("seed", static_cast<long long>(res.seed));
  r.put("success", res.success);
  r.put("certified", res.certified);
  r.put_rat("defect", res.defect);
  r.put_json("witness", Json(res.witness.labels));
  r.print(g);
  return res.success ? 0 : 1;
}

int cmd_ec_finite_ext(const Globals& g, const std::string& action_file,
                      const std::string& cochain_file, const std::string& beta_file, int k,
                      const std::string& elements) {
  Json gj;
  FiniteAction a = load_action(action_file, &gj);
  Cochain sigma = load_cochain(cochain_file, *a.ctx, gj);
  Labeling beta = load_labeling(beta_file);
  std::vector<Element> F =
      elements.empty() ? sigma.support.elems : parse_element_list(*a.ctx, elements);
  FiniteExtResult res = finite_ext_ec_search(a, k, sigma, F, g.tolerance(), beta, g.search());
  Report r;
  r.put("engine", engine_name(res.engine));
  r.put("seed", static_cast<long long>(res.seed));
  switch (res.status) {
    case FiniteExtStatus::success: r.put("status", std::string("success")); break;
    case FiniteExtStatus::failure: r.put("status", std::string("failure")); break;
    case FiniteExtStatus::infeasible_pushforward:
      r.put("status", std::string("infeasible_pushforward"));
      break;
  }
  r.put("certified", res.certified);
  if (res.status != FiniteExtStatus::infeasible_pushforward) {
    r.put_rat("independence_defect", res.independence_defect);
    r.put_rat("equivariance_gap", res.equivariance_gap);
    r.put_json("witness", Json(res.witness.labels));
  }
  r.print(g);
  return res.status == FiniteExtStatus::success ? 0 : 1;
}

int cmd_ec_theta(const Globals& g, const std::string& action_file, int k, int q,
                 const std::string& elements, const std::string& partition_file,
                 const std::string& cocycle_file) {
  Json gj;
  FiniteAction a = load_action(action_file, &gj);
  ThetaInstance inst;
  inst.k = k;
  inst.q = q;
  inst.F = parse_element_list(*a.ctx, elements);
  if (!partition_file.empty()) inst.A = load_labeling(partition_file);
  if (!cocycle_file.empty()) inst.B = load_cochain(cocycle_file, *a.ctx, gj);
  ThetaResult res = theta_axiom_eval(a, inst, g.search());
  Report r;
  r.put("engine", engine_name(res.engine));
  r.put("seed", static_cast<long long>(res.seed));
  r.put_rat("value", res.value);
  r.put("exact", res.exact);
  if (!res.exact) r.put("note", std::string("sampled outer search; value is a lower bound"));
  r.put_json("witness", Json(res.witness_C.labels));
  r.print(g);
  return 0;
}

int cmd_ec_weakmix(const Globals& g, const std::string& action_file,
                   const std::vector<std::string>& pair_files, int radius) {
  FiniteAction a = load_action(action_file);
  if (pair_files.empty() || pair_files.size() % 2 != 0)
    throw std::invalid_argument("weakmix: --pairs needs an even number of labeling documents");
  std::vector<std::pair<std::vector<bool>, std::vector<bool>>> pairs;
  for (size_t i = 0; i + 1 < pair_files.size(); i += 2) {
    Labeling A = load_labeling(pair_files[i]);
    Labeling B = load_labeling(pair_files[i + 1]);
    A.validate(a.space.size());
    B.validate(a.space.size());
    pairs.push_back({A.level_set(1, a.space.size()), B.level_set(1, a.space.size())});
  }
  std::vector<Element> G0;
  for (const Element& e : cayley_ball(*a.ctx, radius).elems)
    if (!a.ctx->is_identity(e)) G0.push_back(e);
  WeakMixResult res = weak_mixing_certificate(a, pairs, g.tolerance(), G0);
  Report r;
  r.put("found", res.found);
  if (res.found) r.put("witness", a.ctx->to_string(res.witness));
  Json defects = Json::array();
  for (const auto& [e, d] : res.worst_defects)
    defects.push_back(Json{{"element", a.ctx->to_string(e)}, {"defect", rat_to_json(d)}});
  r.put_json("worst_defects", defects);
  r.print(g);
  return res.found ? 0 : 1;
}

int cmd_ec_openmap(const Globals& g, const std::string& action_file,
                   const std::string& beta_file, const std::string& joint_file) {
  Json gj;
  FiniteAction a = load_action(action_file, &gj);
  Labeling beta = load_labeling(beta_file);
  Document jd = load_kind(joint_file, "window-measure");
  require_same_group(jd.payload.at("group"), gj, joint_file);
  JointWindowMeasure lambda = joint_measure_from_json(*a.ctx, jd.payload);
  LabelSearchResult res = ec_lemma_search(a, beta, lambda, g.tolerance(), g.search());
  Report r;
  r.put("engine", engine_name(res.engine));
  r.put("seed", static_cast<long long>(res.seed));
  r.put("success", res.success);
  r.put("certified", res.certified);
  r.put_rat("defect", res.defect);
  r.put_json("witness", Json(res.witness.labels));
  r.print(g);
  return res.success ? 0 : 1;
}

int cmd_coinduce(const Globals& g, const std::string& group_file,
                 const std::string& quotient_file, const std::string& action_file,
                 const std::string& sub_action_file, const std::string& factor_file,
                 const std::string& out) {
  Json gj;
  auto ctx = load_group(group_file, &gj);
  Json qpayload;
  load_group(quotient_file, &qpayload);
  if (!qpayload.contains("quotient"))
    throw std::invalid_argument(quotient_file + ": missing 'quotient' payload");
  QuotientData q = quotient_from_json(*ctx, qpayload.at("quotient"));

  Json agj;
  FiniteAction a = load_action(action_file, &agj);
  require_same_group(agj, gj, action_file);

  FiniteAction b_raw = load_action(sub_action_file);
  std::vector<int> lam = q.lambda_elements(*ctx);
  if (!b_raw.ctx->table_backed() ||
      b_raw.ctx->table.size() != static_cast<int>(lam.size()))
    throw std::invalid_argument(
        "coinduce: the subgroup action must live over a table group of the subgroup's order");
  for (size_t i = 0; i < lam.size(); ++i)
    for (size_t j = 0; j < lam.size(); ++j) {
      int prod = b_raw.ctx->table.mul[i][j];
      if (lam[prod] != ctx->table.mul[lam[i]][lam[j]])
        throw std::invalid_argument(
            "coinduce: the subgroup action's table does not match the subgroup");
    }
  SubgroupAction b;
  b.space = b_raw.space;
  for (size_t i = 0; i < lam.size(); ++i)
    b.perms[lam[i]] = b_raw.perm_of(Element{{static_cast<int>(i)}});

  Document fd = load_kind(factor_file, "factor-map");
  std::vector<int> phi = fd.payload.at("map").get<std::vector<int>>();

  CoinduceResult res = coinduce(ctx, q, b, a, phi, g.cap);
  Report r;
  r.put("index", static_cast<long long>(q.coset_count()));
  r.put("atoms", static_cast<long long>(res.big.space.size()));
  Json w = Json::array();
  for (const Rat& x : res.big.space.weights) w.push_back(rat_to_json(x));
  r.put_json("weights", w);
  if (!out.empty()) {
    store_document(out, Document::make("factor-map", extension_to_json(res.to_base)));
    r.put("written", out);
  }
  r.print(g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  if (const char* env = std::getenv("ERGOFORGE_CAP")) g.cap = std::strtoull(env, nullptr, 10);

  CLI::App app{"exact-arithmetic workbench for finite dynamical approximations"};
  app.require_subcommand(1);
  app.add_option("--seed", g.seed, "search seed");
  app.add_option("--tol", g.tol, "tolerance as a rational, e.g. 1/8");
  app.add_option("--cap", g.cap, "exhaustive search budget");
  app.add_option("--engine", g.engine, "search engine: exhaustive|local");
  app.add_option("--format", g.format, "report format: table|json");

  int exit_code = 0;
  auto sub = [&](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* s = parent->add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  // group
  {
    static std::string file;
    static int radius = 2;
    CLI::App* s = sub(&app, "group", "inspect a group document");
    s->add_option("file", file, "group document")->required();
    s->add_option("--radius", radius, "largest ball radius to report");
    s->callback([&] { exit_code = cmd_group(g, file, radius); });
  }
  // action
  {
    static std::string file;
    CLI::App* s = sub(&app, "action", "validate an action document");
    s->add_option("file", file, "action document")->required();
    s->callback([&] { exit_code = cmd_action(g, file); });
  }
  // entropy
  {
    static std::string af, lf, bf;
    CLI::App* s = sub(&app, "entropy", "partition entropy under an action's measure");
    s->add_option("action", af, "action document")->required();
    s->add_option("alpha", lf, "labeling document")->required();
    s->add_option("beta", bf, "optional second labeling for conditional entropy");
    s->callback([&] { exit_code = cmd_entropy(g, af, lf, bf); });
  }
  // cocycle
  {
    CLI::App* c = sub(&app, "cocycle", "cocycle computations");
    c->require_subcommand(1);
    {
      static std::string af, cf;
      static bool closed = false;
      CLI::App* s = sub(c, "defect", "defect functional of a cochain");
      s->add_option("action", af)->required();
      s->add_option("cochain", cf)->required();
      s->add_flag("--closed", closed, "require a product-closed support");
      s->callback([&] { exit_code = cmd_cocycle_defect(g, af, cf, closed); });
    }
    {
      static std::string af, cf, elements;
      CLI::App* s = sub(c, "density", "search for a transfer function");
      s->add_option("action", af)->required();
      s->add_option("cochain", cf)->required();
      s->add_option("--elements", elements, "comma-separated test elements (default: support)");
      s->callback([&] { exit_code = cmd_cocycle_density(g, af, cf, elements); });
    }
    {
      static std::string af, cf, out;
      CLI::App* s = sub(c, "skew", "skew product of an action with a cocycle");
      s->add_option("action", af)->required();
      s->add_option("cochain", cf)->required();
      s->add_option("--out", out, "write the factor-map document here");
      s->callback([&] { exit_code = cmd_cocycle_skew(g, af, cf, out); });
    }
    {
      static std::string af, cf, out;
      static int radius = 2;
      CLI::App* s = sub(c, "extend", "extend generator values to a ball cochain");
      s->add_option("action", af)->required();
      s->add_option("cochain", cf, "cochain with the generators as support")->required();
      s->add_option("--radius", radius, "ball radius of the extension");
      s->add_option("--out", out, "write the extended cochain here");
      s->callback([&] { exit_code = cmd_cocycle_extend(g, af, cf, radius, out); });
    }
  }
  // tree
  {
    CLI::App* c = sub(&app, "tree", "forest computations");
    c->require_subcommand(1);
    {
      static std::string ff;
      CLI::App* s = sub(c, "components", "connected components of a forest");
      s->add_option("forest", ff)->required();
      s->callback([&] { exit_code = cmd_tree_components(g, ff); });
    }
    {
      static std::string ff, cf, out;
      CLI::App* s = sub(c, "retract", "retraction of a vertex-pair cochain onto a forest");
      s->add_option("forest", ff)->required();
      s->add_option("cochain", cf, "vertex-pair cochain document")->required();
      s->add_option("--out", out, "write the retracted cochain here");
      s->callback([&] { exit_code = cmd_tree_retract(g, ff, cf, out); });
    }
  }
  // couple
  {
    static std::string mf0, mf1;
    CLI::App* s = sub(&app, "couple", "monotone coupling of two window measures");
    s->add_option("from", mf0, "source measure document")->required();
    s->add_option("to", mf1, "target measure document")->required();
    s->callback([&] { exit_code = cmd_couple(g, mf0, mf1); });
  }
  // rerandomize
  {
    static std::string mf, ff, out;
    CLI::App* s = sub(&app, "rerandomize", "product of component marginals");
    s->add_option("measure", mf)->required();
    s->add_option("forest", ff)->required();
    s->add_option("--out", out, "write the product measure here");
    s->callback([&] { exit_code = cmd_rerandomize(g, mf, ff, out); });
  }
  // forest-measure
  {
    static std::string mf, ff, out;
    CLI::App* s = sub(&app, "forest-measure", "forest-coupled measure of a constant family");
    s->add_option("measure", mf, "base window measure")->required();
    s->add_option("forest", ff)->required();
    s->add_option("--out", out, "write the coupled measure here");
    s->callback([&] { exit_code = cmd_forest_measure(g, mf, ff, out); });
  }
  // zeta
  {
    static std::string jf, ff, out;
    CLI::App* s = sub(&app, "zeta", "forest-averaged rerandomized joining");
    s->add_option("joint", jf, "joint measure document")->required();
    s->add_option("forest", ff, "forest distribution document")->required();
    s->add_option("--out", out, "write the result here");
    s->callback([&] { exit_code = cmd_zeta(g, jf, ff, out); });
  }
  // xi
  {
    static std::string kf, mf, ff, out;
    CLI::App* s = sub(&app, "xi", "kernel-driven forest-coupled joining");
    s->add_option("kernel", kf)->required();
    s->add_option("measure", mf, "outer measure document")->required();
    s->add_option("forest", ff, "forest distribution document")->required();
    s->add_option("--out", out, "write the result here");
    s->callback([&] { exit_code = cmd_xi(g, kf, mf, ff, out); });
  }
  // ec
  {
    CLI::App* c = sub(&app, "ec", "existential-closedness checkers");
    c->require_subcommand(1);
    {
      static std::string ff, af, bf, elements;
      CLI::App* s = sub(c, "check", "finitary closedness criterion");
      s->add_option("factor", ff, "factor-map document")->required();
      s->add_option("alpha", af, "source labeling")->required();
      s->add_option("beta", bf, "target labeling")->required();
      s->add_option("--elements", elements, "comma-separated test elements")->required();
      s->callback([&] { exit_code = cmd_ec_check(g, ff, af, bf, elements); });
    }
    {
      static std::string af, cf, bf, elements;
      static int k = 2;
      CLI::App* s = sub(c, "finite-ext", "uniform independent cocycle-equivariant labeling");
      s->add_option("action", af)->required();
      s->add_option("cochain", cf)->required();
      s->add_option("beta", bf, "target labeling")->required();
      s->add_option("--k", k, "fiber size");
      s->add_option("--elements", elements, "comma-separated test elements (default: support)");
      s->callback([&] { exit_code = cmd_ec_finite_ext(g, af, cf, bf, k, elements); });
    }
    {
      static std::string af, pf, cf, elements;
      static int k = 2, q = 2;
      CLI::App* s = sub(c, "theta", "independence-axiom value");
      s->add_option("action", af)->required();
      s->add_option("--k", k, "fiber size");
      s->add_option("--q", q, "partition arity");
      s->add_option("--elements", elements, "comma-separated test elements")->required();
      s->add_option("--partition", pf, "labeling document (sampled when absent)");
      s->add_option("--cocycle", cf, "cochain document (sampled when absent)");
      s->callback([&] { exit_code = cmd_ec_theta(g, af, k, q, elements, pf, cf); });
    }
    {
      static std::string af;
      static std::vector<std::string> pair_files;
      static int radius = 2;
      CLI::App* s = sub(c, "weakmix", "mixing witness over a ball");
      s->add_option("action", af)->required();
      s->add_option("--pairs", pair_files, "labeling documents, two per set pair")->required();
      s->add_option("--radius", radius, "search ball radius");
      s->callback([&] { exit_code = cmd_ec_weakmix(g, af, pair_files, radius); });
    }
    {
      static std::string af, bf, jf;
      CLI::App* s = sub(c, "openmap", "joint-coding witness against a joining");
      s->add_option("action", af)->required();
      s->add_option("beta", bf, "source labeling")->required();
      s->add_option("joint", jf, "joint measure document")->required();
      s->callback([&] { exit_code = cmd_ec_openmap(g, af, bf, jf); });
    }
  }
  // coinduce
  {
    static std::string gf, qf, af, bf, ff, out;
    CLI::App* s = sub(&app, "coinduce", "relatively independent lift over a subgroup factor");
    s->add_option("--group", gf, "group document")->required();
    s->add_option("--quotient", qf, "group document carrying quotient data")->required();
    s->add_option("--action", af, "target action document")->required();
    s->add_option("--sub-action", bf, "subgroup action document")->required();
    s->add_option("--factor", ff, "factor-map document with the point map")->required();
    s->add_option("--out", out, "write the lifted factor-map here");
    s->callback([&] { exit_code = cmd_coinduce(g, gf, qf, af, bf, ff, out); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
