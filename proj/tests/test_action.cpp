#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "ergoforge/action.hpp"
#include "ergoforge/window_measure.hpp"
#include "oracles.hpp"

using namespace ergoforge;

namespace {

std::shared_ptr<const GroupContext> z_ctx() {
  return std::make_shared<const GroupContext>(GroupContext::free_abelian_ctx(1));
}

// uniform two-point space with the generator swapping the points
FiniteAction swap_action() {
  FiniteAction a;
  a.ctx = z_ctx();
  a.space = FiniteProbSpace::uniform(2);
  a.gen_perms = {{1, 0}};
  a.validate();
  return a;
}

FiniteProbSpace random_space(std::mt19937_64& rng, int n) {
  std::vector<Rat> w(n);
  long long total = 0;
  std::vector<long long> raw(n);
  for (int i = 0; i < n; ++i) {
    raw[i] = 1 + static_cast<long long>(rng() % 8);
    total += raw[i];
  }
  for (int i = 0; i < n; ++i) w[i] = Rat(raw[i], total);
  return FiniteProbSpace::of(w);
}

}  // namespace

TEST_CASE("probability space validation") {
  CHECK_NOTHROW(FiniteProbSpace::uniform(3).validate());
  FiniteProbSpace bad;
  bad.point_names = {"x0", "x1"};
  bad.weights = {Rat(1, 2), Rat(1, 3)};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("action validation enforces measure preservation and relations") {
  FiniteAction a = swap_action();
  CHECK(a.perm_of(a.ctx->parse_element("(2)")) == Perm{0, 1});
  CHECK(a.apply(a.ctx->parse_element("(-1)"), 0) == 1);

  SUBCASE("non-preserving permutation rejected") {
    FiniteAction bad;
    bad.ctx = z_ctx();
    bad.space = FiniteProbSpace::of({Rat(1, 4), Rat(3, 4)});
    bad.gen_perms = {{1, 0}};
    CHECK_THROWS(bad.validate());
  }
  SUBCASE("abelian generators must commute") {
    FiniteAction bad;
    bad.ctx = std::make_shared<const GroupContext>(GroupContext::free_abelian_ctx(2));
    bad.space = FiniteProbSpace::uniform(3);
    bad.gen_perms = {{1, 0, 2}, {0, 2, 1}};  // transpositions that do not commute
    CHECK_THROWS(bad.validate());
  }
  SUBCASE("table actions must respect the multiplication table") {
    auto c4 = std::make_shared<const GroupContext>(
        GroupContext::finite_ctx(FiniteGroupTable::cyclic(4), {1}));
    FiniteAction bad;
    bad.ctx = c4;
    bad.space = FiniteProbSpace::uniform(3);
    bad.gen_perms = {{1, 2, 0}};  // order 3 does not divide 4, relations break
    CHECK_THROWS(bad.validate());
    FiniteAction factor;  // non-faithful is fine: order 2 divides 4
    factor.ctx = c4;
    factor.space = FiniteProbSpace::uniform(2);
    factor.gen_perms = {{1, 0}};
    CHECK_NOTHROW(factor.validate());
    FiniteAction ok;
    ok.ctx = c4;
    ok.space = FiniteProbSpace::uniform(4);
    ok.gen_perms = {{1, 2, 3, 0}};
    CHECK_NOTHROW(ok.validate());
  }
}

TEST_CASE("set mass, image and preimage") {
  FiniteAction a = swap_action();
  std::vector<bool> x0 = {true, false};
  CHECK(a.mass(x0) == Rat(1, 2));
  Element g = a.ctx->generator(0);
  CHECK(a.image(g, x0) == std::vector<bool>{false, true});
  CHECK(a.preimage(g, x0) == std::vector<bool>{false, true});
  CHECK(a.mass(a.image(g, x0)) == a.mass(x0));
}

TEST_CASE("pushforward distribution examples") {
  FiniteAction a = swap_action();
  Labeling id{{0, 1}, 2};

  SUBCASE("window {e} gives the bare label distribution") {
    Window we = Window::of({a.ctx->identity()});
    WindowMeasure m = pushforward_distribution(a, id, we);
    CHECK(m.at({0}) == Rat(1, 2));
    CHECK(m.at({1}) == Rat(1, 2));
  }
  SUBCASE("swap action over {e, gen} alternates the pair") {
    Window w = Window::of({a.ctx->identity(), a.ctx->generator(0)});
    WindowMeasure m = pushforward_distribution(a, id, w);
    CHECK(m.at({0, 1}) == Rat(1, 2));
    CHECK(m.at({1, 0}) == Rat(1, 2));
    CHECK(m.support_size() == 2);
  }
  SUBCASE("constant labeling is a point mass") {
    Labeling c{{1, 1}, 2};
    Window w = Window::of({a.ctx->identity(), a.ctx->generator(0)});
    WindowMeasure m = pushforward_distribution(a, c, w);
    CHECK(m.support_size() == 1);
    CHECK(m.at({1, 1}) == 1);
  }
}

TEST_CASE("joint pushforward marginals agree with single pushforwards") {
  FiniteAction a = swap_action();
  Labeling id{{0, 1}, 2};
  Labeling c{{1, 0}, 2};
  Window w = Window::of({a.ctx->identity(), a.ctx->generator(0)});
  Window we = Window::of({a.ctx->identity()});
  JointWindowMeasure j = joint_pushforward_distribution(a, id, w, c, we);
  j.validate();
  CHECK(j.q_marginal().weights == pushforward_distribution(a, id, w).weights);
  CHECK(j.p_marginal().weights == pushforward_distribution(a, c, we).weights);
}

TEST_CASE("entropy formulas") {
  FiniteProbSpace sp = FiniteProbSpace::uniform(2);
  CHECK(entropy(sp, Labeling{{0, 1}, 2}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(entropy(sp, Labeling{{0, 0}, 1}) == doctest::Approx(0.0).epsilon(1e-12));

  FiniteProbSpace quarter = FiniteProbSpace::of({Rat(1, 4), Rat(3, 4)});
  double expected = oracles::entropy(quarter.weights, {0, 1}, 2);
  CHECK(entropy(quarter, Labeling{{0, 1}, 2}) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(entropy(quarter, Labeling{{0, 1}, 2}) == doctest::Approx(0.562335).epsilon(1e-5));
}

TEST_CASE("entropy chain rule against an independent computation") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    int n = 2 + static_cast<int>(rng() % 6);
    FiniteProbSpace sp = random_space(rng, n);
    Labeling alpha, beta;
    alpha.arity = 2 + static_cast<int>(rng() % 2);
    beta.arity = 2 + static_cast<int>(rng() % 2);
    for (int i = 0; i < n; ++i) {
      alpha.labels.push_back(static_cast<int>(rng() % alpha.arity));
      beta.labels.push_back(static_cast<int>(rng() % beta.arity));
    }
    Labeling joined = join_labelings(alpha, beta);
    double lhs = oracles::entropy(sp.weights, joined.labels, joined.arity);
    double rhs = oracles::entropy(sp.weights, beta.labels, beta.arity) +
                 relative_entropy(sp, alpha, beta);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("freeness defect") {
  SUBCASE("cyclic translation is free") {
    auto ctx = z_ctx();
    for (int n : {2, 3, 5}) {
      FiniteAction a;
      a.ctx = ctx;
      a.space = FiniteProbSpace::uniform(n);
      Perm shift(n);
      for (int i = 0; i < n; ++i) shift[i] = (i + 1) % n;
      a.gen_perms = {shift};
      a.validate();
      CHECK(freeness_defect(a, ctx->generator(0), n) == 0);
    }
  }
  SUBCASE("trivial action defect by subset enumeration") {
    FiniteAction t = FiniteAction::trivial(z_ctx(), FiniteProbSpace::uniform(2));
    // gamma acts trivially, so the pair term equals mu(x); enumerate all four
    // subsets of a 2-point space by hand
    Rat best(2);
    for (int mask = 0; mask < 4; ++mask) {
      Rat m = Rat(((mask >> 0) & 1) + ((mask >> 1) & 1), 2);
      Rat half_gap = oracles::abs_rat(m - Rat(1, 2));
      Rat worst = half_gap > m ? half_gap : m;
      if (worst < best) best = worst;
    }
    CHECK(best == Rat(1, 2));
    CHECK(freeness_defect(t, t.ctx->generator(0), 2) == best);
  }
  SUBCASE("identity of order one is free with the full space") {
    FiniteAction t = FiniteAction::trivial(z_ctx(), FiniteProbSpace::uniform(2));
    CHECK(freeness_defect(t, t.ctx->identity(), 1) == 0);
  }
}

TEST_CASE("weak containment defect and search") {
  FiniteAction a = swap_action();
  std::vector<Element> F = {a.ctx->identity(), a.ctx->generator(0)};
  std::vector<std::vector<bool>> A = {{true, false}};

  SUBCASE("an action weakly contains itself") {
    CHECK(weak_containment_defect(a, A, a, A, F) == 0);
  }
  SUBCASE("full sets always match") {
    FiniteAction one = FiniteAction::trivial(z_ctx(), FiniteProbSpace::uniform(1));
    CHECK(weak_containment_defect(one, {{true}}, a, {{true, true}}, F) == 0);
  }
  SUBCASE("swap vs trivial quarter-weights: best defect 1/4") {
    FiniteAction b = FiniteAction::trivial(z_ctx(), FiniteProbSpace::of({Rat(1, 4), Rat(3, 4)}));
    // independent enumeration of the four candidate subsets
    Rat best(2);
    std::vector<bool> arg;
    for (int mask = 0; mask < 4; ++mask) {
      std::vector<bool> B = {(mask & 1) != 0, (mask & 2) != 0};
      Rat m = b.mass(B);
      Rat d_e = oracles::abs_rat(Rat(1, 2) - m);  // gamma = e
      Rat d_g = m;                                 // swap moves A off itself
      Rat worst = d_e > d_g ? d_e : d_g;
      if (worst < best) {
        best = worst;
        arg = B;
      }
    }
    CHECK(best == Rat(1, 4));
    CHECK(weak_containment_defect(a, A, b, {{true, false}}, F) == Rat(1, 4));
    WeakContainmentSearchResult res = weak_containment_search(a, A, b, F);
    CHECK(res.defect == best);
    CHECK(res.witness == std::vector<std::vector<bool>>{arg});
  }
}

TEST_CASE("extension neighborhood defect") {
  auto ctx = z_ctx();
  FiniteAction target = swap_action();

  FiniteAction src1;
  src1.ctx = ctx;
  src1.space = FiniteProbSpace::uniform(4);
  src1.gen_perms = {{1, 0, 3, 2}};
  src1.validate();
  std::vector<int> phi = {0, 1, 0, 1};
  ExtensionTriple e1{src1, target, phi};
  e1.validate();

  SUBCASE("identical triples have defect zero") {
    CHECK(extension_neighborhood_defect(e1, e1, {{true, false}}, {{true, false, false, false}},
                                        {ctx->generator(0)}) == 0);
  }
  SUBCASE("empty families have defect zero") {
    CHECK(extension_neighborhood_defect(e1, e1, {}, {}, {}) == 0);
  }
  SUBCASE("one transposition moves half the mass of a pinned atom") {
    FiniteAction src2;
    src2.ctx = ctx;
    src2.space = FiniteProbSpace::uniform(4);
    src2.gen_perms = {{1, 0, 2, 3}};  // differs from src1 by transposing atoms 2, 3
    src2.validate();
    // src2 maps atoms 2,3 to themselves; phi stays equivariant for the swap
    // target only if those atoms sit over a fixed point, so use the trivial
    // target for this instance
    FiniteAction triv_target = FiniteAction::trivial(ctx, FiniteProbSpace::uniform(2));
    FiniteAction flat1 = FiniteAction::trivial(ctx, FiniteProbSpace::uniform(4));
    FiniteAction flat2;
    flat2.ctx = ctx;
    flat2.space = FiniteProbSpace::uniform(4);
    flat2.gen_perms = {{0, 1, 3, 2}};
    flat2.validate();
    std::vector<int> psi = {0, 0, 1, 1};
    ExtensionTriple t1{flat1, triv_target, psi};
    ExtensionTriple t2{flat2, triv_target, psi};
    t1.validate();
    t2.validate();
    // B = one atom of the transposed pair: gamma moves it to the other atom
    // in t2 and fixes it in t1, symmetric difference {y2, y3} of mass 1/2
    std::vector<bool> B = {false, false, true, false};
    CHECK(extension_neighborhood_defect(t1, t2, {}, {B}, {ctx->generator(0)}) == Rat(1, 2));
  }
}

TEST_CASE("quotient actions") {
  SUBCASE("integers over the even subgroup: generator swaps two cosets") {
    auto ctx = z_ctx();
    QuotientData q;
    q.target = FiniteGroupTable::cyclic(2);
    q.gen_images = {1};
    q.subgroup = {0};
    q.transversal = {ctx->identity(), ctx->generator(0)};
    q.validate(*ctx);
    FiniteAction a = finite_quotient_action(ctx, q);
    CHECK(a.space.size() == 2);
    CHECK(a.gen_perms[0] == Perm{1, 0});
  }
  SUBCASE("kernel of F2 -> Z/2: both generators swap") {
    auto f2 = std::make_shared<const GroupContext>(GroupContext::free_group_ctx(2));
    QuotientData q;
    q.target = FiniteGroupTable::cyclic(2);
    q.gen_images = {1, 1};
    q.subgroup = {0};
    q.transversal = {f2->identity(), f2->generator(0)};
    q.validate(*f2);
    FiniteAction a = finite_quotient_action(f2, q);
    CHECK(a.gen_perms[0] == Perm{1, 0});
    CHECK(a.gen_perms[1] == Perm{1, 0});
  }
  SUBCASE("whole group gives the one-point action") {
    auto f2 = std::make_shared<const GroupContext>(GroupContext::free_group_ctx(2));
    QuotientData q = QuotientData::whole_group(*f2);
    q.validate(*f2);
    FiniteAction a = finite_quotient_action(f2, q);
    CHECK(a.space.size() == 1);
  }
}

TEST_CASE("relative independent joining") {
  SUBCASE("one-point base gives the product") {
    FiniteProbSpace mu = FiniteProbSpace::of({Rat(1, 2), Rat(1, 2)});
    FiniteProbSpace nu = FiniteProbSpace::of({Rat(1, 3), Rat(2, 3)});
    FiniteProbSpace eta = FiniteProbSpace::uniform(1);
    RelativeJoining lam = relative_independent_joining(mu, nu, eta, {0, 0}, {0, 0});
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) CHECK(lam.at(x, y) == mu.weights[x] * nu.weights[y]);
  }
  SUBCASE("identity factor concentrates on the graph") {
    FiniteProbSpace z = FiniteProbSpace::of({Rat(1, 4), Rat(3, 4)});
    FiniteProbSpace y = FiniteProbSpace::of({Rat(1, 8), Rat(1, 8), Rat(3, 4)});
    std::vector<int> psi = {0, 0, 1};
    RelativeJoining lam = relative_independent_joining(z, y, z, {0, 1}, psi);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 3; ++b) {
        if (psi[b] == a)
          CHECK(lam.at(a, b) == y.weights[b]);
        else
          CHECK(lam.at(a, b) == 0);
      }
  }
  SUBCASE("two uniform atoms over themselves: half mass per diagonal pair") {
    FiniteProbSpace u2 = FiniteProbSpace::uniform(2);
    RelativeJoining lam = relative_independent_joining(u2, u2, u2, {0, 1}, {0, 1});
    CHECK(lam.at(0, 0) == Rat(1, 2));
    CHECK(lam.at(1, 1) == Rat(1, 2));
    CHECK(lam.at(0, 1) == 0);
  }
  SUBCASE("joining action is measure preserving for equivariant data") {
    FiniteAction a = swap_action();
    RelativeJoining lam =
        relative_independent_joining(a.space, a.space, a.space, {0, 1}, {0, 1});
    FiniteAction j = joining_action(a, a, lam);
    CHECK(j.space.size() == 4);
    CHECK_NOTHROW(j.validate());
  }
}

TEST_CASE("labeling utilities") {
  Labeling l{{0, 1, 0}, 2};
  CHECK_NOTHROW(l.validate(3));
  CHECK_THROWS(l.validate(2));
  CHECK_THROWS(Labeling{{0, 2}, 2}.validate(2));
  CHECK(l.level_set(0, 3) == std::vector<bool>{true, false, true});
  Labeling j = join_labelings(l, Labeling{{1, 1, 0}, 2});
  CHECK(j.arity == 4);
  CHECK(j.labels == std::vector<int>{1, 3, 0});
}
