#pragma once

#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "ergoforge/forest.hpp"
#include "ergoforge/group.hpp"
#include "ergoforge/window_measure.hpp"

namespace ergoforge {

// Measure-preserving piecewise translation of [0,1): pieces partition the
// source and destination unit intervals exactly. Canonical form merges
// adjacent pieces with matching destination so equality is structural.
struct IntervalMap {
  struct Piece {
    Rat src_lo, dst_lo, len;
    bool operator==(const Piece&) const = default;
  };
  std::vector<Piece> pieces;  // ascending src_lo, contiguous

  void validate() const;
  void canonicalize();
  Rat map(const Rat& u) const;
  IntervalMap then(const IntervalMap& next) const;  // u -> next(this(u))
  IntervalMap inverted() const;
  bool is_identity() const;
  bool operator==(const IntervalMap&) const = default;

  static IntervalMap identity();
};

// Transport pair: a coupling of source and target window measures realized as
// an interval map between their lexicographic embeddings into [0,1). The
// induced joint distribution gives mass leb(t(I_z) cap J_w) to the
// configuration pair (z, w).
struct MapMeasurePair {
  WindowMeasure source;
  WindowMeasure target;
  IntervalMap t;

  void validate() const;
  std::map<std::pair<Config, Config>, Rat> joint() const;
  // Deterministic reading: the target atom receiving the top of the source
  // atom's interval; equals the functional transport when one exists.
  Config function_value(const Config& z) const;
  bool is_functional() const;  // every source atom lands in a single target atom
  WindowMeasure push(const WindowMeasure& m) const;  // pushforward of a measure
                                                     // carried by the source shape
  static MapMeasurePair identity_pair(WindowMeasure m);
  static MapMeasurePair from_function(const WindowMeasure& src,
                                      const std::function<Config(const Config&)>& h,
                                      Window target_window, int target_arity);
};

// Quantile (comonotone) coupling from k0 to k1 over the lexicographic orders;
// both measures must share the window shape sizes but may differ in window.
MapMeasurePair monotone_coupling(const WindowMeasure& k1, const WindowMeasure& k0);

// p1 after p0; requires p0.target and p1.source to agree exactly.
MapMeasurePair compose_pairs(const MapMeasurePair& p1, const MapMeasurePair& p0);

// Product of class marginals: forgets all dependence across partition classes.
WindowMeasure rerandomize(const WindowMeasure& m, const ComponentRelation& classes);

// Marginal onto a subset of positions (ascending index list).
WindowMeasure window_marginal(const WindowMeasure& m, const std::vector<int>& keep,
                              Window out_window);

// Family gamma -> measure over the translated window gamma^{-1} W0, all
// windows enumerated in base order so shifts act as the identity on raw
// configuration vectors.
struct WindowMeasureFamily {
  std::shared_ptr<const GroupContext> ctx;
  Window base;  // W0
  std::map<std::vector<int>, WindowMeasure> entries;

  void insert(const Element& gamma, const WindowMeasure& m);
  const WindowMeasure& at(const Element& gamma) const;
  bool has(const Element& gamma) const;
  bool shift_coherent() const;  // all raw weight maps equal

  // shift-coherent family placing m0 (over W0) at every element of the domain
  static WindowMeasureFamily constant(std::shared_ptr<const GroupContext> ctx, Window base,
                                      const WindowMeasure& m0,
                                      const std::vector<Element>& domain);
};

Window translated_window(const GroupContext& ctx, const Element& gamma, const Window& base);

// Edge transport from the gamma-side to the delta-side: quantile coupling of
// the shifted gamma-measure with the delta-measure. Raw vectors are already
// aligned, so the shift itself is positional.
MapMeasurePair edge_transport(const WindowMeasureFamily& fam, const Element& delta,
                              const Element& gamma);

// Path composite of edge transports along the forest joining gamma to delta;
// edges traversed against their orientation contribute inverted pairs.
MapMeasurePair path_transport(const WindowMeasureFamily& fam, const DirectedForest& f,
                              const Element& delta, const Element& gamma);

// Coupled measure over the forest's vertex window: components are glued along
// path transports from each component's minimal root and read off at the
// identity coordinate; distinct components multiply independently.
WindowMeasure forest_measure(const WindowMeasureFamily& fam, const DirectedForest& f);

using ForestDistribution = std::vector<std::pair<DirectedForest, Rat>>;

void validate_forest_distribution(const ForestDistribution& mu, const Window& expected);

// Average over forests of (identity on the q-part) x (class-rerandomized
// conditional p-parts).
JointWindowMeasure zeta_construct(const JointWindowMeasure& lambda,
                                  const ForestDistribution& mu);

// Kernel from q-configurations over q_window to p-measures over the base
// window.
struct ConfigKernel {
  Window q_window;
  int q_arity = 0;
  Window p_base;
  int p_arity = 0;
  std::map<Config, WindowMeasure> table;

  void validate() const;
};

// Average over forests of delta_y x theta(omega_y, F) where omega_y(gamma) is
// the kernel value at the gamma-shifted restriction of y.
JointWindowMeasure xi_construct(std::shared_ptr<const GroupContext> ctx,
                                const ConfigKernel& kernel, const WindowMeasure& nu_prime,
                                const ForestDistribution& mu);

}  // namespace ergoforge
