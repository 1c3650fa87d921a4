#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ergoforge/action.hpp"
#include "ergoforge/group.hpp"
#include "ergoforge/rational.hpp"

namespace ergoforge {

// Configuration over a window: one symbol in [0, arity) per window position.
using Config = std::vector<int>;

// Exact sparse distribution on arity^|window| configurations. Keys are stored
// in lexicographic order (position 0 most significant), which is the canonical
// enumeration used for cumulative masses and couplings.
struct WindowMeasure {
  Window window;
  int arity = 0;
  std::map<Config, Rat> weights;

  void validate() const;
  Rat at(const Config& z) const;
  void add(const Config& z, const Rat& w);  // accumulates; drops exact zeros
  size_t support_size() const { return weights.size(); }
  bool same_shape(const WindowMeasure& o) const {
    return arity == o.arity && window == o.window;
  }

  static WindowMeasure point_mass(Window w, int arity, Config z);
  // Same weight sequence transplanted onto another window of equal size.
  WindowMeasure with_window(Window w) const;
};

// Lexicographic bookkeeping for one window shape.
struct LexOrder {
  int arity = 0;
  size_t positions = 0;

  static LexOrder of(const WindowMeasure& m) { return {m.arity, m.window.size()}; }
  bool less(const Config& a, const Config& b) const { return a < b; }
  // mass of { z' : z' <= z } (lexicographic lower set, inclusive)
  Rat lower_mass(const WindowMeasure& m, const Config& z) const;
};

// Joint distribution of a q-configuration and a p-configuration over (possibly
// distinct) windows.
struct JointWindowMeasure {
  Window q_window;
  int q_arity = 0;
  Window p_window;
  int p_arity = 0;
  std::map<std::pair<Config, Config>, Rat> weights;

  void validate() const;
  void add(const Config& y, const Config& z, const Rat& w);
  WindowMeasure q_marginal() const;
  WindowMeasure p_marginal() const;
  // conditional p-distribution given each q-configuration with positive mass
  std::map<Config, WindowMeasure> disintegrate() const;
};

// Empirical distribution of the window name map x -> (alpha(f^{-1} x))_{f in F}.
WindowMeasure pushforward_distribution(const FiniteAction& a, const Labeling& alpha,
                                       const Window& F);

// Joint empirical distribution of two name maps over their own windows.
JointWindowMeasure joint_pushforward_distribution(const FiniteAction& a,
                                                  const Labeling& alpha, const Window& Fa,
                                                  const Labeling& beta, const Window& Fb);

}  // namespace ergoforge
