#include "ergoforge/window_measure.hpp"

#include <stdexcept>

namespace ergoforge {

namespace {
void check_config(const Config& z, size_t positions, int arity) {
  if (z.size() != positions) throw std::invalid_argument("config: wrong length");
  for (int v : z)
    if (v < 0 || v >= arity) throw std::invalid_argument("config: symbol out of range");
}
}  // namespace

void WindowMeasure::validate() const {
  if (arity <= 0) throw std::invalid_argument("window measure: arity must be positive");
  if (window.size() == 0) throw std::invalid_argument("window measure: empty window");
  Rat total = 0;
  for (const auto& [z, w] : weights) {
    check_config(z, window.size(), arity);
    if (w < 0) throw std::invalid_argument("window measure: negative weight");
    total += w;
  }
  if (total != 1)
    throw std::invalid_argument("window measure: weights sum to " + rat_to_string(total));
}

Rat WindowMeasure::at(const Config& z) const {
  auto it = weights.find(z);
  return it == weights.end() ? Rat(0) : it->second;
}

void WindowMeasure::add(const Config& z, const Rat& w) {
  if (w == 0) return;
  auto [it, fresh] = weights.emplace(z, w);
  if (!fresh) {
    it->second += w;
    if (it->second == 0) weights.erase(it);
  }
}

WindowMeasure WindowMeasure::point_mass(Window w, int arity, Config z) {
  WindowMeasure m;
  m.window = std::move(w);
  m.arity = arity;
  check_config(z, m.window.size(), arity);
  m.weights[std::move(z)] = 1;
  return m;
}

WindowMeasure WindowMeasure::with_window(Window w) const {
  if (w.size() != window.size())
    throw std::invalid_argument("window transplant: size mismatch");
  WindowMeasure m;
  m.window = std::move(w);
  m.arity = arity;
  m.weights = weights;
  return m;
}

Rat LexOrder::lower_mass(const WindowMeasure& m, const Config& z) const {
  Rat total = 0;
  for (const auto& [key, w] : m.weights) {
    if (key > z) break;  // map keys ascend lexicographically
    total += w;
  }
  return total;
}

void JointWindowMeasure::validate() const {
  if (q_arity <= 0 || p_arity <= 0)
    throw std::invalid_argument("joint measure: arity must be positive");
  Rat total = 0;
  for (const auto& [key, w] : weights) {
    check_config(key.first, q_window.size(), q_arity);
    check_config(key.second, p_window.size(), p_arity);
    if (w < 0) throw std::invalid_argument("joint measure: negative weight");
    total += w;
  }
  if (total != 1)
    throw std::invalid_argument("joint measure: weights sum to " + rat_to_string(total));
}

void JointWindowMeasure::add(const Config& y, const Config& z, const Rat& w) {
  if (w == 0) return;
  auto [it, fresh] = weights.emplace(std::make_pair(y, z), w);
  if (!fresh) {
    it->second += w;
    if (it->second == 0) weights.erase(it);
  }
}

WindowMeasure JointWindowMeasure::q_marginal() const {
  WindowMeasure m;
  m.window = q_window;
  m.arity = q_arity;
  for (const auto& [key, w] : weights) m.add(key.first, w);
  return m;
}

WindowMeasure JointWindowMeasure::p_marginal() const {
  WindowMeasure m;
  m.window = p_window;
  m.arity = p_arity;
  for (const auto& [key, w] : weights) m.add(key.second, w);
  return m;
}

std::map<Config, WindowMeasure> JointWindowMeasure::disintegrate() const {
  std::map<Config, Rat> q_mass;
  for (const auto& [key, w] : weights) q_mass[key.first] += w;
  std::map<Config, WindowMeasure> out;
  for (const auto& [key, w] : weights) {
    auto [it, fresh] = out.emplace(key.first, WindowMeasure{});
    if (fresh) {
      it->second.window = p_window;
      it->second.arity = p_arity;
    }
    it->second.add(key.second, w / q_mass.at(key.first));
  }
  return out;
}

WindowMeasure pushforward_distribution(const FiniteAction& a, const Labeling& alpha,
                                       const Window& F) {
  alpha.validate(a.space.size());
  if (F.size() == 0) throw std::invalid_argument("pushforward: empty window");
  WindowMeasure m;
  m.window = F;
  m.arity = alpha.arity;
  std::vector<Perm> inv_perms;
  inv_perms.reserve(F.size());
  for (const Element& f : F.elems) inv_perms.push_back(a.perm_of(a.ctx->inverse(f)));
  for (int x = 0; x < a.space.size(); ++x) {
    if (a.space.weights[x] == 0) continue;
    Config z(F.size());
    for (size_t i = 0; i < F.size(); ++i) z[i] = alpha.labels[inv_perms[i][x]];
    m.add(z, a.space.weights[x]);
  }
  return m;
}

JointWindowMeasure joint_pushforward_distribution(const FiniteAction& a,
                                                  const Labeling& alpha, const Window& Fa,
                                                  const Labeling& beta, const Window& Fb) {
  alpha.validate(a.space.size());
  beta.validate(a.space.size());
  JointWindowMeasure m;
  m.q_window = Fa;
  m.q_arity = alpha.arity;
  m.p_window = Fb;
  m.p_arity = beta.arity;
  std::vector<Perm> ia, ib;
  for (const Element& f : Fa.elems) ia.push_back(a.perm_of(a.ctx->inverse(f)));
  for (const Element& f : Fb.elems) ib.push_back(a.perm_of(a.ctx->inverse(f)));
  for (int x = 0; x < a.space.size(); ++x) {
    if (a.space.weights[x] == 0) continue;
    Config y(Fa.size()), z(Fb.size());
    for (size_t i = 0; i < Fa.size(); ++i) y[i] = alpha.labels[ia[i][x]];
    for (size_t i = 0; i < Fb.size(); ++i) z[i] = beta.labels[ib[i][x]];
    m.add(y, z, a.space.weights[x]);
  }
  return m;
}

}  // namespace ergoforge
