#include "ergoforge/coupling.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ergoforge {

void IntervalMap::validate() const {
  if (pieces.empty()) throw std::invalid_argument("interval map: no pieces");
  Rat cursor = 0;
  std::vector<std::pair<Rat, Rat>> dst;
  for (const Piece& p : pieces) {
    if (p.len <= 0) throw std::invalid_argument("interval map: empty piece");
    if (p.src_lo != cursor) throw std::invalid_argument("interval map: source gap");
    if (p.dst_lo < 0) throw std::invalid_argument("interval map: negative destination");
    cursor += p.len;
    dst.push_back({p.dst_lo, p.len});
  }
  if (cursor != 1) throw std::invalid_argument("interval map: source does not cover [0,1)");
  std::sort(dst.begin(), dst.end());
  Rat dcursor = 0;
  for (const auto& [lo, len] : dst) {
    if (lo != dcursor) throw std::invalid_argument("interval map: destination gap or overlap");
    dcursor += len;
  }
  if (dcursor != 1) throw std::invalid_argument("interval map: destination does not cover [0,1)");
}

void IntervalMap::canonicalize() {
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.src_lo < b.src_lo; });
  std::vector<Piece> merged;
  for (const Piece& p : pieces) {
    if (!merged.empty() && merged.back().src_lo + merged.back().len == p.src_lo &&
        merged.back().dst_lo + merged.back().len == p.dst_lo) {
      merged.back().len += p.len;
    } else {
      merged.push_back(p);
    }
  }
  pieces = std::move(merged);
}

Rat IntervalMap::map(const Rat& u) const {
  if (u < 0 || u >= 1) throw std::invalid_argument("interval map: point outside [0,1)");
  for (const Piece& p : pieces)
    if (u >= p.src_lo && u < p.src_lo + p.len) return p.dst_lo + (u - p.src_lo);
  throw std::logic_error("interval map: uncovered point");
}

IntervalMap IntervalMap::then(const IntervalMap& next) const {
  IntervalMap out;
  for (const Piece& p : pieces) {
    Rat hi = p.dst_lo + p.len;
    for (const Piece& q : next.pieces) {
      Rat lo2 = std::max(p.dst_lo, q.src_lo);
      Rat hi2 = std::min(hi, q.src_lo + q.len);
      if (lo2 >= hi2) continue;
      out.pieces.push_back({p.src_lo + (lo2 - p.dst_lo), q.dst_lo + (lo2 - q.src_lo), hi2 - lo2});
    }
  }
  out.canonicalize();
  return out;
}

IntervalMap IntervalMap::inverted() const {
  IntervalMap out;
  for (const Piece& p : pieces) out.pieces.push_back({p.dst_lo, p.src_lo, p.len});
  out.canonicalize();
  return out;
}

bool IntervalMap::is_identity() const {
  return pieces.size() == 1 && pieces[0].src_lo == 0 && pieces[0].dst_lo == 0;
}

IntervalMap IntervalMap::identity() {
  IntervalMap m;
  m.pieces.push_back({0, 0, 1});
  return m;
}

namespace {

struct AtomBounds {
  std::vector<const Config*> config;
  std::vector<Rat> lo;  // lo[i], hi = lo[i+1]; lo.back() == 1
};

AtomBounds atom_bounds(const WindowMeasure& m) {
  AtomBounds b;
  Rat cursor = 0;
  for (const auto& [z, w] : m.weights) {
    if (w == 0) continue;
    b.config.push_back(&z);
    b.lo.push_back(cursor);
    cursor += w;
  }
  b.lo.push_back(cursor);
  if (cursor != 1) throw std::invalid_argument("coupling: measure mass is not 1");
  return b;
}

// index of the atom whose interval [lo, hi) contains u
size_t locate(const AtomBounds& b, const Rat& u) {
  size_t lo = 0, hi = b.config.size();
  while (lo + 1 < hi) {
    size_t mid = (lo + hi) / 2;
    if (b.lo[mid] <= u)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

void MapMeasurePair::validate() const {
  source.validate();
  target.validate();
  t.validate();
}

std::map<std::pair<Config, Config>, Rat> MapMeasurePair::joint() const {
  AtomBounds sb = atom_bounds(source);
  AtomBounds tb = atom_bounds(target);
  // cut the source coordinate at atom boundaries, piece boundaries, and
  // pullbacks of target atom boundaries
  std::set<Rat> cuts(sb.lo.begin(), sb.lo.end());
  for (const auto& p : t.pieces) {
    cuts.insert(p.src_lo);
    for (const Rat& d : tb.lo) {
      if (d >= p.dst_lo && d < p.dst_lo + p.len) cuts.insert(p.src_lo + (d - p.dst_lo));
    }
  }
  cuts.insert(Rat(1));
  std::map<std::pair<Config, Config>, Rat> out;
  auto it = cuts.begin();
  Rat prev = *it;
  for (++it; it != cuts.end(); ++it) {
    Rat a = prev, b = *it;
    prev = *it;
    if (a >= 1) break;
    size_t zi = locate(sb, a);
    size_t wi = locate(tb, t.map(a));
    auto key = std::make_pair(*sb.config[zi], *tb.config[wi]);
    out[key] += b - a;
  }
  return out;
}

Config MapMeasurePair::function_value(const Config& z) const {
  AtomBounds sb = atom_bounds(source);
  AtomBounds tb = atom_bounds(target);
  for (size_t i = 0; i < sb.config.size(); ++i) {
    if (*sb.config[i] != z) continue;
    const Rat top = sb.lo[i + 1];
    // the piece holding the upper sliver of the atom interval
    for (const auto& p : t.pieces) {
      if (top > p.src_lo && top <= p.src_lo + p.len) {
        Rat d = p.dst_lo + (top - p.src_lo);
        // target atom whose interval (lo, hi] catches d
        for (size_t j = 0; j < tb.config.size(); ++j)
          if (tb.lo[j] < d && d <= tb.lo[j + 1]) return *tb.config[j];
      }
    }
    throw std::logic_error("transport pair: unmapped atom top");
  }
  throw std::invalid_argument("transport pair: configuration has zero mass");
}

bool MapMeasurePair::is_functional() const {
  std::map<Config, std::set<Config>> images;
  for (const auto& [key, w] : joint()) images[key.first].insert(key.second);
  for (const auto& [z, img] : images)
    if (img.size() > 1) return false;
  return true;
}

WindowMeasure MapMeasurePair::push(const WindowMeasure& m) const {
  if (!m.same_shape(source))
    throw std::invalid_argument("transport push: measure shape mismatch");
  WindowMeasure out;
  out.window = target.window;
  out.arity = target.arity;
  for (const auto& [key, w] : joint()) {
    Rat base = source.at(key.first);
    out.add(key.second, w * m.at(key.first) / base);
  }
  return out;
}

MapMeasurePair MapMeasurePair::identity_pair(WindowMeasure m) {
  MapMeasurePair p;
  p.source = m;
  p.target = std::move(m);
  p.t = IntervalMap::identity();
  return p;
}

MapMeasurePair MapMeasurePair::from_function(const WindowMeasure& src,
                                             const std::function<Config(const Config&)>& h,
                                             Window target_window, int target_arity) {
  src.validate();
  MapMeasurePair p;
  p.source = src;
  p.target.window = std::move(target_window);
  p.target.arity = target_arity;
  std::map<Config, Config> image;
  for (const auto& [z, w] : src.weights) {
    Config out = h(z);
    if (out.size() != p.target.window.size())
      throw std::invalid_argument("transport from function: image length mismatch");
    for (int v : out)
      if (v < 0 || v >= target_arity)
        throw std::invalid_argument("transport from function: image symbol out of range");
    image.emplace(z, std::move(out));
    p.target.add(image.at(z), w);
  }
  AtomBounds sb = atom_bounds(p.source);
  AtomBounds tb = atom_bounds(p.target);
  std::map<Config, Rat> filled;
  for (size_t i = 0; i < sb.config.size(); ++i) {
    const Config& w = image.at(*sb.config[i]);
    size_t j = 0;
    while (*tb.config[j] != w) ++j;
    Rat& off = filled[w];
    p.t.pieces.push_back({sb.lo[i], tb.lo[j] + off, sb.lo[i + 1] - sb.lo[i]});
    off += sb.lo[i + 1] - sb.lo[i];
  }
  p.t.canonicalize();
  p.t.validate();
  return p;
}

MapMeasurePair monotone_coupling(const WindowMeasure& k1, const WindowMeasure& k0) {
  k0.validate();
  k1.validate();
  if (k0.arity != k1.arity || k0.window.size() != k1.window.size())
    throw std::invalid_argument("monotone coupling: incompatible shapes");
  MapMeasurePair p;
  p.source = k0;
  p.target = k1;
  p.t = IntervalMap::identity();
  return p;
}

MapMeasurePair compose_pairs(const MapMeasurePair& p1, const MapMeasurePair& p0) {
  if (!(p0.target.window == p1.source.window) || p0.target.arity != p1.source.arity ||
      p0.target.weights != p1.source.weights)
    throw std::invalid_argument("compose pairs: middle measures differ");
  MapMeasurePair out;
  out.source = p0.source;
  out.target = p1.target;
  out.t = p0.t.then(p1.t);
  return out;
}

WindowMeasure window_marginal(const WindowMeasure& m, const std::vector<int>& keep,
                              Window out_window) {
  if (keep.size() != out_window.size())
    throw std::invalid_argument("marginal: output window size mismatch");
  for (int i : keep)
    if (i < 0 || i >= static_cast<int>(m.window.size()))
      throw std::invalid_argument("marginal: position out of range");
  WindowMeasure out;
  out.window = std::move(out_window);
  out.arity = m.arity;
  for (const auto& [z, w] : m.weights) {
    Config proj(keep.size());
    for (size_t i = 0; i < keep.size(); ++i) proj[i] = z[keep[i]];
    out.add(proj, w);
  }
  return out;
}

WindowMeasure rerandomize(const WindowMeasure& m, const ComponentRelation& classes) {
  m.validate();
  if (classes.comp_of.size() != m.window.size())
    throw std::invalid_argument("rerandomize: partition size mismatch");
  // marginal per class, then the product across classes
  std::vector<std::vector<std::pair<Config, Rat>>> parts;
  for (const auto& cls : classes.classes) {
    std::map<Config, Rat> marg;
    for (const auto& [z, w] : m.weights) {
      Config proj(cls.size());
      for (size_t i = 0; i < cls.size(); ++i) proj[i] = z[cls[i]];
      marg[proj] += w;
    }
    parts.emplace_back(marg.begin(), marg.end());
  }
  WindowMeasure out;
  out.window = m.window;
  out.arity = m.arity;
  std::vector<size_t> pick(parts.size(), 0);
  while (true) {
    Config z(m.window.size(), 0);
    Rat w = 1;
    for (size_t c = 0; c < parts.size(); ++c) {
      const auto& [proj, mass] = parts[c][pick[c]];
      w *= mass;
      for (size_t i = 0; i < classes.classes[c].size(); ++i) z[classes.classes[c][i]] = proj[i];
    }
    out.add(z, w);
    size_t c = parts.size();
    bool rolled = true;
    while (c-- > 0) {
      if (++pick[c] < parts[c].size()) {
        rolled = false;
        break;
      }
      pick[c] = 0;
    }
    if (rolled) return out;
  }
}

Window translated_window(const GroupContext& ctx, const Element& gamma, const Window& base) {
  Element gi = ctx.inverse(gamma);
  std::vector<Element> elems;
  elems.reserve(base.size());
  for (const Element& w : base.elems) elems.push_back(ctx.multiply(gi, w));
  return Window::of(std::move(elems), false);
}

void WindowMeasureFamily::insert(const Element& gamma, const WindowMeasure& m) {
  m.validate();
  if (!(m.window == translated_window(*ctx, gamma, base)))
    throw std::invalid_argument("measure family: window must be the translated base window");
  entries.insert_or_assign(gamma.w, m);
}

const WindowMeasure& WindowMeasureFamily::at(const Element& gamma) const {
  auto it = entries.find(gamma.w);
  if (it == entries.end())
    throw std::out_of_range("measure family: no entry at " + ctx->to_string(gamma));
  return it->second;
}

bool WindowMeasureFamily::has(const Element& gamma) const { return entries.count(gamma.w) > 0; }

bool WindowMeasureFamily::shift_coherent() const {
  const std::map<Config, Rat>* first = nullptr;
  for (const auto& [key, m] : entries) {
    if (!first)
      first = &m.weights;
    else if (m.weights != *first)
      return false;
  }
  return true;
}

WindowMeasureFamily WindowMeasureFamily::constant(std::shared_ptr<const GroupContext> ctx,
                                                  Window base, const WindowMeasure& m0,
                                                  const std::vector<Element>& domain) {
  WindowMeasureFamily fam;
  fam.ctx = std::move(ctx);
  fam.base = std::move(base);
  for (const Element& g : domain)
    fam.insert(g, m0.with_window(translated_window(*fam.ctx, g, fam.base)));
  return fam;
}

MapMeasurePair edge_transport(const WindowMeasureFamily& fam, const Element& delta,
                              const Element& gamma) {
  // the shift aligning the gamma-window with the delta-window is positional on
  // raw vectors, so the transport is the plain quantile coupling
  return monotone_coupling(fam.at(delta), fam.at(gamma));
}

MapMeasurePair path_transport(const WindowMeasureFamily& fam, const DirectedForest& f,
                              const Element& delta, const Element& gamma) {
  int from = f.vertices.at(gamma);
  int to = f.vertices.at(delta);
  std::vector<int> path = forest_path(f, from, to);
  MapMeasurePair acc = MapMeasurePair::identity_pair(fam.at(gamma));
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const Element& eu = f.vertices.elems[path[i]];
    const Element& ev = f.vertices.elems[path[i + 1]];
    MapMeasurePair step;
    if (f.has_edge(path[i + 1], path[i])) {
      step = edge_transport(fam, ev, eu);
    } else {
      // reversed traversal of edge (u, v): the inverse pair
      MapMeasurePair fwd = edge_transport(fam, eu, ev);
      step.source = fwd.target;
      step.target = fwd.source;
      step.t = fwd.t.inverted();
    }
    acc = compose_pairs(step, acc);
  }
  return acc;
}

WindowMeasure forest_measure(const WindowMeasureFamily& fam, const DirectedForest& f) {
  const GroupContext& ctx = *fam.ctx;
  ComponentRelation rel = components(f);
  const size_t nv = f.vertices.size();

  int arity = -1;
  for (const Element& v : f.vertices.elems) {
    if (fam.base.find(v) < 0)
      throw std::invalid_argument("forest measure: vertex " + ctx.to_string(v) +
                                  " outside the base window");
    if (arity < 0) arity = fam.at(v).arity;
  }

  // per component: distribution of the identity-coordinate readings along the
  // glued transports from the minimal root
  std::vector<std::vector<std::pair<Config, Rat>>> parts;  // partial configs per class
  for (const auto& cls : rel.classes) {
    const Element& root = f.vertices.elems[cls.front()];
    const WindowMeasure& base_m = fam.at(root);
    struct DeltaData {
      IntervalMap t;
      WindowMeasure target;  // keeps the configs alive for `bounds`
      AtomBounds bounds;
      int read_pos;
    };
    std::vector<DeltaData> ds;
    std::set<Rat> cuts;
    AtomBounds rb = atom_bounds(base_m);
    cuts.insert(rb.lo.begin(), rb.lo.end());
    for (int vi : cls) {
      const Element& dv = f.vertices.elems[vi];
      MapMeasurePair tr = path_transport(fam, f, dv, root);
      DeltaData dd;
      dd.target = std::move(tr.target);
      dd.bounds = atom_bounds(dd.target);
      dd.t = tr.t;
      dd.read_pos = fam.base.at(dv);  // position of e in the dv-window
      for (const auto& p : dd.t.pieces) {
        cuts.insert(p.src_lo);
        for (const Rat& b : dd.bounds.lo)
          if (b >= p.dst_lo && b < p.dst_lo + p.len) cuts.insert(p.src_lo + (b - p.dst_lo));
      }
      ds.push_back(std::move(dd));
    }
    cuts.insert(Rat(1));

    std::map<Config, Rat> dist;
    auto it = cuts.begin();
    Rat prev = *it;
    for (++it; it != cuts.end(); ++it) {
      Rat a = prev, b = *it;
      prev = *it;
      if (a >= 1) break;
      Config partial(cls.size());
      for (size_t di = 0; di < ds.size(); ++di) {
        size_t atom = locate(ds[di].bounds, ds[di].t.map(a));
        partial[di] = (*ds[di].bounds.config[atom])[ds[di].read_pos];
      }
      dist[partial] += b - a;
    }
    parts.emplace_back(dist.begin(), dist.end());
  }

  WindowMeasure out;
  out.window = f.vertices;
  out.arity = arity;
  std::vector<size_t> pick(parts.size(), 0);
  while (true) {
    Config z(nv, 0);
    Rat w = 1;
    for (size_t c = 0; c < parts.size(); ++c) {
      const auto& [partial, mass] = parts[c][pick[c]];
      w *= mass;
      for (size_t i = 0; i < rel.classes[c].size(); ++i) z[rel.classes[c][i]] = partial[i];
    }
    out.add(z, w);
    size_t c = parts.size();
    bool rolled = true;
    while (c-- > 0) {
      if (++pick[c] < parts[c].size()) {
        rolled = false;
        break;
      }
      pick[c] = 0;
    }
    if (rolled) break;
  }
  return out;
}

void validate_forest_distribution(const ForestDistribution& mu, const Window& expected) {
  if (mu.empty()) throw std::invalid_argument("forest distribution: empty");
  Rat total = 0;
  for (const auto& [f, w] : mu) {
    f.validate();
    if (!(f.vertices == expected))
      throw std::invalid_argument("forest distribution: vertex window mismatch");
    if (w < 0) throw std::invalid_argument("forest distribution: negative weight");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("forest distribution: weights sum to " +
                                              rat_to_string(total));
}

JointWindowMeasure zeta_construct(const JointWindowMeasure& lambda,
                                  const ForestDistribution& mu) {
  lambda.validate();
  validate_forest_distribution(mu, lambda.p_window);
  auto conditionals = lambda.disintegrate();
  WindowMeasure qm = lambda.q_marginal();

  JointWindowMeasure out;
  out.q_window = lambda.q_window;
  out.q_arity = lambda.q_arity;
  out.p_window = lambda.p_window;
  out.p_arity = lambda.p_arity;
  for (const auto& [f, fw] : mu) {
    ComponentRelation rel = components(f);
    for (const auto& [y, cond] : conditionals) {
      WindowMeasure rr = rerandomize(cond, rel);
      const Rat ym = qm.at(y);
      for (const auto& [z, w] : rr.weights) out.add(y, z, fw * ym * w);
    }
  }
  return out;
}

void ConfigKernel::validate() const {
  if (q_arity <= 0 || p_arity <= 0)
    throw std::invalid_argument("kernel: arities must be positive");
  if (table.empty()) throw std::invalid_argument("kernel: empty table");
  for (const auto& [y, m] : table) {
    if (y.size() != q_window.size())
      throw std::invalid_argument("kernel: key length mismatch");
    for (int v : y)
      if (v < 0 || v >= q_arity) throw std::invalid_argument("kernel: key symbol out of range");
    if (!(m.window == p_base) || m.arity != p_arity)
      throw std::invalid_argument("kernel: value measure shape mismatch");
    m.validate();
  }
}

JointWindowMeasure xi_construct(std::shared_ptr<const GroupContext> ctx,
                                const ConfigKernel& kernel, const WindowMeasure& nu_prime,
                                const ForestDistribution& mu) {
  kernel.validate();
  nu_prime.validate();
  if (nu_prime.arity != kernel.q_arity)
    throw std::invalid_argument("xi: configuration arity mismatch");
  if (mu.empty()) throw std::invalid_argument("xi: empty forest distribution");
  validate_forest_distribution(mu, mu.front().first.vertices);
  const Window& verts = mu.front().first.vertices;

  // shifted kernel keys: s_gamma(y)(i) = y(gamma * q_i)
  std::vector<std::vector<int>> shift_pos(verts.size(),
                                          std::vector<int>(kernel.q_window.size()));
  for (size_t vi = 0; vi < verts.size(); ++vi)
    for (size_t i = 0; i < kernel.q_window.size(); ++i) {
      Element moved = ctx->multiply(verts.elems[vi], kernel.q_window.elems[i]);
      int pos = nu_prime.window.find(moved);
      if (pos < 0)
        throw std::invalid_argument("xi: shifted kernel query leaves the configuration window");
      shift_pos[vi][i] = pos;
    }

  JointWindowMeasure out;
  out.q_window = nu_prime.window;
  out.q_arity = nu_prime.arity;
  out.p_window = verts;
  out.p_arity = kernel.p_arity;
  for (const auto& [y, ym] : nu_prime.weights) {
    if (ym == 0) continue;
    WindowMeasureFamily fam;
    fam.ctx = ctx;
    fam.base = kernel.p_base;
    for (size_t vi = 0; vi < verts.size(); ++vi) {
      Config key(kernel.q_window.size());
      for (size_t i = 0; i < key.size(); ++i) key[i] = y[shift_pos[vi][i]];
      auto it = kernel.table.find(key);
      if (it == kernel.table.end())
        throw std::invalid_argument("xi: kernel undefined at a shifted configuration");
      fam.insert(verts.elems[vi],
                 it->second.with_window(translated_window(*ctx, verts.elems[vi], kernel.p_base)));
    }
    for (const auto& [f, fw] : mu) {
      WindowMeasure theta = forest_measure(fam, f);
      for (const auto& [z, w] : theta.weights) out.add(y, z, ym * fw * w);
    }
  }
  return out;
}

}  // namespace ergoforge
