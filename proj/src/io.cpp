#include "ergoforge/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ergoforge {

namespace {

[[noreturn]] void fail_line(size_t line, const std::string& what) {
  throw std::invalid_argument("document line " + std::to_string(line) + ": " + what);
}

const char* const kKnownKinds[] = {"group",  "action", "labeling",   "window-measure",
                                   "cochain", "forest", "kernel",     "factor-map",
                                   "result"};

bool known_kind(const std::string& kind) {
  for (const char* k : kKnownKinds)
    if (kind == k) return true;
  return false;
}

std::vector<Element> parse_elements(const GroupContext& ctx, const Json& arr) {
  std::vector<Element> out;
  for (const auto& s : arr) out.push_back(ctx.parse_element(s.get<std::string>()));
  return out;
}

Json render_elements(const GroupContext& ctx, const std::vector<Element>& elems) {
  Json arr = Json::array();
  for (const Element& g : elems) arr.push_back(ctx.to_string(g));
  return arr;
}

std::vector<Rat> rats_from_json(const Json& arr) {
  std::vector<Rat> out;
  for (const auto& v : arr) out.push_back(rat_from_json(v));
  return out;
}

// rethrows rational parse errors naming the field they sat in
Rat field_rat(const Json& j, const std::string& field) {
  try {
    return rat_from_json(j.at(field));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("field '" + field + "': " + e.what());
  }
}

Json rats_to_json(const std::vector<Rat>& rs) {
  Json arr = Json::array();
  for (const Rat& r : rs) arr.push_back(rat_to_json(r));
  return arr;
}

}  // namespace

Document Document::make(std::string kind, Json payload) {
  if (!payload.is_object())
    throw std::invalid_argument("document payload must be a json object");
  return Document{std::move(kind), 1, std::move(payload)};
}

std::string emit_document(const Document& doc) {
  if (!doc.payload.is_object())
    throw std::invalid_argument("document payload must be a json object");
  std::string out = "!ergodoc " + doc.kind + " v" + std::to_string(doc.version) + "\n";
  for (auto it = doc.payload.begin(); it != doc.payload.end(); ++it)
    out += it.key() + ": " + it.value().dump() + "\n";
  return out;
}

Document parse_document(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  Document doc;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      std::istringstream head(line);
      std::string magic, kind, ver;
      head >> magic >> kind >> ver;
      if (magic != "!ergodoc" || kind.empty() || ver.size() < 2 || ver[0] != 'v')
        fail_line(lineno, "expected header '!ergodoc <kind> v<version>'");
      if (!known_kind(kind)) fail_line(lineno, "unknown document kind '" + kind + "'");
      doc.kind = kind;
      try {
        doc.version = std::stoi(ver.substr(1));
      } catch (const std::exception&) {
        fail_line(lineno, "bad version '" + ver + "'");
      }
      doc.payload = Json::object();
      have_header = true;
      continue;
    }
    size_t colon = line.find(": ");
    if (colon == std::string::npos || colon == 0)
      fail_line(lineno, "expected '<key>: <json>'");
    std::string key = line.substr(0, colon);
    Json value = Json::parse(line.substr(colon + 2), nullptr, false);
    if (value.is_discarded()) fail_line(lineno, "invalid json value for key '" + key + "'");
    if (doc.payload.contains(key)) fail_line(lineno, "duplicate key '" + key + "'");
    doc.payload[key] = std::move(value);
  }
  if (!have_header) throw std::invalid_argument("document: missing '!ergodoc' header");
  return doc;
}

Document load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open document '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_document(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void store_document(const std::string& path, const Document& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write document '" + path + "'");
  out << emit_document(doc);
}

Json rat_to_json(const Rat& r) { return Json(rat_to_string(r)); }

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) return rat_from_string(j.get<std::string>());
  throw std::invalid_argument("expected a rational as 'n/d' string, got " + j.dump());
}

std::string rat_display(const Rat& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", rat_to_double(r));
  return rat_to_string(r) + " (" + buf + ")";
}

Json table_to_json(const FiniteGroupTable& t) {
  Json j{{"names", t.names}, {"mul", t.mul}};
  if (!t.one_line.empty()) j["one_line"] = t.one_line;
  return j;
}

FiniteGroupTable table_from_json(const Json& j) {
  FiniteGroupTable t = FiniteGroupTable::from_table(
      j.at("names").get<std::vector<std::string>>(),
      j.at("mul").get<std::vector<std::vector<int>>>());
  if (j.contains("one_line")) {
    t.one_line = j.at("one_line").get<std::vector<std::vector<int>>>();
    if (t.one_line.size() != static_cast<size_t>(t.size()))
      throw std::invalid_argument("table: one_line row count mismatch");
  }
  return t;
}

Json group_to_json(const GroupContext& ctx) {
  switch (ctx.kind) {
    case GroupKind::free_group:
      return Json{{"kind", "free"}, {"rank", ctx.rank}, {"names", ctx.gen_names}};
    case GroupKind::free_abelian:
      return Json{{"kind", "abelian"}, {"rank", ctx.rank}, {"names", ctx.gen_names}};
    case GroupKind::finite:
      return Json{{"kind", "finite"},
                  {"table", table_to_json(ctx.table)},
                  {"generators", ctx.gen_elems},
                  {"names", ctx.gen_names}};
    case GroupKind::free_quotient:
      return Json{{"kind", "quotient"},
                  {"table", table_to_json(ctx.table)},
                  {"images", ctx.gen_elems},
                  {"names", ctx.gen_names}};
  }
  throw std::logic_error("group kind out of range");
}

std::shared_ptr<const GroupContext> group_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  std::vector<std::string> names;
  if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
  GroupContext ctx;
  if (kind == "free") {
    ctx = GroupContext::free_group_ctx(j.at("rank").get<int>(), names);
  } else if (kind == "abelian") {
    ctx = GroupContext::free_abelian_ctx(j.at("rank").get<int>(), names);
  } else if (kind == "finite") {
    ctx = GroupContext::finite_ctx(table_from_json(j.at("table")),
                                   j.at("generators").get<std::vector<int>>(), names);
  } else if (kind == "quotient") {
    ctx = GroupContext::free_quotient_ctx(table_from_json(j.at("table")),
                                          j.at("images").get<std::vector<int>>(), names);
  } else {
    throw std::invalid_argument("unknown group kind '" + kind + "'");
  }
  return std::make_shared<const GroupContext>(std::move(ctx));
}

Json window_to_json(const GroupContext& ctx, const Window& w) {
  return Json{{"elements", render_elements(ctx, w.elems)}, {"ball", w.is_ball}};
}

Window window_from_json(const GroupContext& ctx, const Json& j) {
  return Window::of(parse_elements(ctx, j.at("elements")),
                    j.contains("ball") && j.at("ball").get<bool>());
}

Json action_to_json(const FiniteAction& a) {
  return Json{{"group", group_to_json(*a.ctx)},
              {"points", a.space.point_names},
              {"weights", rats_to_json(a.space.weights)},
              {"generators", a.gen_perms}};
}

FiniteAction action_from_json(const Json& j) {
  FiniteAction a;
  a.ctx = group_from_json(j.at("group"));
  a.space.point_names = j.at("points").get<std::vector<std::string>>();
  try {
    a.space.weights = rats_from_json(j.at("weights"));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("field 'weights': ") + e.what());
  }
  a.gen_perms = j.at("generators").get<std::vector<Perm>>();
  a.validate();
  return a;
}

Json labeling_to_json(const Labeling& l) {
  return Json{{"arity", l.arity}, {"labels", l.labels}};
}

Labeling labeling_from_json(const Json& j) {
  Labeling l;
  l.arity = j.at("arity").get<int>();
  l.labels = j.at("labels").get<std::vector<int>>();
  return l;
}

Json window_measure_to_json(const GroupContext& ctx, const WindowMeasure& m) {
  Json atoms = Json::array();
  for (const auto& [z, w] : m.weights)
    atoms.push_back(Json{{"config", z}, {"weight", rat_to_json(w)}});
  return Json{{"window", window_to_json(ctx, m.window)}, {"arity", m.arity}, {"atoms", atoms}};
}

WindowMeasure window_measure_from_json(const GroupContext& ctx, const Json& j) {
  WindowMeasure m;
  m.window = window_from_json(ctx, j.at("window"));
  m.arity = j.at("arity").get<int>();
  for (const auto& atom : j.at("atoms"))
    m.add(atom.at("config").get<Config>(), field_rat(atom, "weight"));
  m.validate();
  return m;
}

Json joint_measure_to_json(const GroupContext& ctx, const JointWindowMeasure& m) {
  Json atoms = Json::array();
  for (const auto& [key, w] : m.weights)
    atoms.push_back(Json{{"q", key.first}, {"p", key.second}, {"weight", rat_to_json(w)}});
  return Json{{"q_window", window_to_json(ctx, m.q_window)},
              {"q_arity", m.q_arity},
              {"p_window", window_to_json(ctx, m.p_window)},
              {"p_arity", m.p_arity},
              {"atoms", atoms}};
}

JointWindowMeasure joint_measure_from_json(const GroupContext& ctx, const Json& j) {
  JointWindowMeasure m;
  m.q_window = window_from_json(ctx, j.at("q_window"));
  m.q_arity = j.at("q_arity").get<int>();
  m.p_window = window_from_json(ctx, j.at("p_window"));
  m.p_arity = j.at("p_arity").get<int>();
  for (const auto& atom : j.at("atoms"))
    m.add(atom.at("q").get<Config>(), atom.at("p").get<Config>(),
          field_rat(atom, "weight"));
  m.validate();
  return m;
}

Json cochain_to_json(const GroupContext& ctx, const Cochain& c) {
  return Json{{"table", table_to_json(*c.K)},
              {"support", render_elements(ctx, c.support.elems)},
              {"values", c.val}};
}

Cochain cochain_from_json(const GroupContext& ctx, const Json& j) {
  Cochain c;
  c.K = std::make_shared<const FiniteGroupTable>(table_from_json(j.at("table")));
  c.support = Window::of(parse_elements(ctx, j.at("support")));
  c.val = j.at("values").get<std::vector<std::vector<int>>>();
  if (c.val.size() != c.support.size())
    throw std::invalid_argument("cochain: one value row per support element required");
  c.validate(c.val.empty() ? 0 : static_cast<int>(c.val[0].size()));
  return c;
}

Json window_cochain_to_json(const GroupContext& ctx, const WindowCochain& c) {
  return Json{{"table", table_to_json(*c.K)},
              {"vertices", render_elements(ctx, c.verts.elems)},
              {"values", c.val}};
}

WindowCochain window_cochain_from_json(const GroupContext& ctx, const Json& j) {
  WindowCochain c;
  c.K = std::make_shared<const FiniteGroupTable>(table_from_json(j.at("table")));
  c.verts = Window::of(parse_elements(ctx, j.at("vertices")));
  c.val = j.at("values").get<std::vector<std::vector<int>>>();
  c.validate();
  return c;
}

Json quotient_to_json(const GroupContext& ctx, const QuotientData& q) {
  return Json{{"target", table_to_json(q.target)},
              {"images", q.gen_images},
              {"subgroup", q.subgroup},
              {"transversal", render_elements(ctx, q.transversal)}};
}

QuotientData quotient_from_json(const GroupContext& ctx, const Json& j) {
  QuotientData q;
  q.target = table_from_json(j.at("target"));
  q.gen_images = j.at("images").get<std::vector<int>>();
  q.subgroup = j.at("subgroup").get<std::vector<int>>();
  q.transversal = parse_elements(ctx, j.at("transversal"));
  q.validate(ctx);
  return q;
}

Json forest_to_json(const GroupContext& ctx, const DirectedForest& f) {
  Json edges = Json::array();
  for (const auto& [to, from] : f.edges) edges.push_back(Json::array({to, from}));
  return Json{{"vertices", window_to_json(ctx, f.vertices)}, {"edges", edges}};
}

DirectedForest forest_from_json(const GroupContext& ctx, const Json& j) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  return DirectedForest::of(window_from_json(ctx, j.at("vertices")), std::move(edges));
}

Json kernel_to_json(const GroupContext& ctx, const ConfigKernel& k) {
  Json rows = Json::array();
  for (const auto& [z, m] : k.table) {
    Json atoms = Json::array();
    for (const auto& [c, w] : m.weights)
      atoms.push_back(Json{{"config", c}, {"weight", rat_to_json(w)}});
    rows.push_back(Json{{"config", z}, {"atoms", atoms}});
  }
  return Json{{"q_window", window_to_json(ctx, k.q_window)},
              {"q_arity", k.q_arity},
              {"p_base", window_to_json(ctx, k.p_base)},
              {"p_arity", k.p_arity},
              {"table", rows}};
}

ConfigKernel kernel_from_json(const GroupContext& ctx, const Json& j) {
  ConfigKernel k;
  k.q_window = window_from_json(ctx, j.at("q_window"));
  k.q_arity = j.at("q_arity").get<int>();
  k.p_base = window_from_json(ctx, j.at("p_base"));
  k.p_arity = j.at("p_arity").get<int>();
  for (const auto& row : j.at("table")) {
    WindowMeasure m;
    m.window = k.p_base;
    m.arity = k.p_arity;
    for (const auto& atom : row.at("atoms"))
      m.add(atom.at("config").get<Config>(), field_rat(atom, "weight"));
    k.table[row.at("config").get<Config>()] = std::move(m);
  }
  k.validate();
  return k;
}

Json extension_to_json(const ExtensionTriple& e) {
  return Json{{"source", action_to_json(e.source)},
              {"target", action_to_json(e.target)},
              {"map", e.phi}};
}

ExtensionTriple extension_from_json(const Json& j) {
  ExtensionTriple e;
  e.source = action_from_json(j.at("source"));
  e.target = action_from_json(j.at("target"));
  e.phi = j.at("map").get<std::vector<int>>();
  e.validate();
  return e;
}

}  // namespace ergoforge
