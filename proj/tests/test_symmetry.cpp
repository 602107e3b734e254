#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "heavenly/errors.hpp"
#include "heavenly/families.hpp"
#include "heavenly/residuals.hpp"
#include "heavenly/symmetry.hpp"

namespace heavenly {
namespace {

const Point kP0{1.2, 1.3, 0.9, 1.1};

const SolutionBundle& trivial() {
  static const SolutionBundle b = trivial_solution();
  return b;
}
const SolutionBundle& appendix() {
  static const SolutionBundle b = appendix_solution();
  return b;
}

Field constant_pair_field(double c) { return constant_field(c); }

GradientPair bar_pair(Field a, Field b) {
  GradientPair g;
  g.first = std::move(a);
  g.second = std::move(b);
  g.var_first = kYbar;
  g.var_second = kZbar;
  return g;
}

// ---- seeds

TEST(Seeds, TrivialSeedsAreTheConjugateCoordinates) {
  const auto seeds = seed_symmetries(trivial());
  const Point p{1.3, 1.7, 1.1, 1.9};
  // v_y = ybar, v_z = zbar, v_ybar = y, v_zbar = z.
  EXPECT_EQ(seeds[0].theta.value(p), p[kYbar]);
  EXPECT_EQ(seeds[1].theta.value(p), p[kZbar]);
  EXPECT_EQ(seeds[2].theta.value(p), p[kY]);
  EXPECT_EQ(seeds[3].theta.value(p), p[kZ]);
  for (const auto& s : seeds) {
    EXPECT_EQ(s.depth, 0);
    EXPECT_EQ(symmetry_residual(trivial().v, s.theta, p), 0.0);
  }
  EXPECT_EQ(seeds[2].seed, "v_ybar");
}

TEST(Seeds, AppendixSeedsCertify) {
  const auto seeds = seed_symmetries(appendix());
  const auto pts = sample_points(appendix(), 100, 5);
  for (const auto& s : seeds)
    for (const Point& p : pts) EXPECT_LE(std::fabs(symmetry_residual(appendix().v, s.theta, p)), 1e-7) << s.seed;
}

TEST(Seeds, NonSolutionStillCertifiesItsSeeds) {
  // v = 2 y ybar + z zbar + y z has determinant 2, not 1; its derivatives still solve the
  // linearized equation because the determinant is constant.
  SolutionBundle b = trivial();
  b.v = make_field("v", 4, [](const auto& x) { return 2.0 * x[kY] * x[kYbar] + x[kZ] * x[kZbar] + x[kY] * x[kZ]; });
  EXPECT_EQ(plebanski_residual(b.v, kP0), 1.0);
  EXPECT_NO_THROW(seed_symmetries(b));
}

TEST(Seeds, UnknownSeedName) {
  EXPECT_THROW(seed_symmetry(trivial(), "v_w"), std::invalid_argument);
  EXPECT_THROW(parse_recurrence("SE3"), std::invalid_argument);
  EXPECT_EQ(parse_recurrence("se2"), Recurrence::SE2);
}

// ---- recurrence step

TEST(Recurrence, TrivialSE1Anchors) {
  const Point p{1.4, 1.1, 1.6, 1.2};
  const GradientPair a = recurrence_step(trivial(), seed_symmetry(trivial(), "v_y"), Recurrence::SE1);
  EXPECT_EQ(a.first.value(p), 0.0);
  EXPECT_EQ(a.second.value(p), 0.0);
  const GradientPair b = recurrence_step(trivial(), seed_symmetry(trivial(), "v_ybar"), Recurrence::SE1);
  EXPECT_EQ(b.var_first, kYbar);
  EXPECT_EQ(b.var_second, kZbar);
  EXPECT_EQ(b.first.value(p), 0.0);
  EXPECT_EQ(b.second.value(p), -1.0);
}

TEST(Recurrence, TrivialSE2Anchors) {
  // Oracle values (sympy): SE2 pairs of the four trivial seeds.
  const Point p{1.4, 1.1, 1.6, 1.2};
  const double want[4][2] = {{0, -1}, {1, 0}, {0, 0}, {0, 0}};
  const char* names[4] = {"v_y", "v_z", "v_ybar", "v_zbar"};
  for (int i = 0; i < 4; ++i) {
    const GradientPair g = recurrence_step(trivial(), seed_symmetry(trivial(), names[i]), Recurrence::SE2);
    EXPECT_EQ(g.var_first, kY);
    EXPECT_EQ(g.var_second, kZ);
    EXPECT_EQ(g.first.value(p), want[i][0]) << names[i];
    EXPECT_EQ(g.second.value(p), want[i][1]) << names[i];
  }
}

TEST(Recurrence, AppendixPairsAtReferencePoint) {
  const GradientPair a = recurrence_step(appendix(), seed_symmetry(appendix(), "v_y"), Recurrence::SE2);
  EXPECT_NEAR(a.first.value(kP0), 0.0, 1e-12);
  EXPECT_NEAR(a.second.value(kP0), -1.0, 1e-12);
  const GradientPair b = recurrence_step(appendix(), seed_symmetry(appendix(), "v_zbar"), Recurrence::SE1);
  EXPECT_NEAR(b.first.value(kP0), 1.0, 1e-12);
  EXPECT_NEAR(b.second.value(kP0), 0.0, 1e-12);
}

// ---- path reconstruction

TEST(Path, ConstantGradient) {
  const GradientPair g = bar_pair(constant_pair_field(0.0), constant_pair_field(-1.0));
  EXPECT_NEAR(reconstruct_by_path(g, {1, 1, 1, 1}, {1, 1, 1, 3}), -2.0, 1e-14);
  EXPECT_NEAR(reconstruct_by_l_path(g, {1, 1, 1, 1}, {1, 1, 2, 3}), -2.0, 1e-14);
}

TEST(Path, StraightAndLShapedPathsAgree) {
  const GradientPair g = recurrence_step(appendix(), seed_symmetry(appendix(), "v_zbar"), Recurrence::SE1);
  const Point base{1.2, 1.3, 1.0, 1.0};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.6, 1.9);
  for (int i = 0; i < 10; ++i) {
    const Point target{1.2, 1.3, u(rng), u(rng)};
    EXPECT_NEAR(reconstruct_by_path(g, base, target), reconstruct_by_l_path(g, base, target), 1e-8);
  }
}

TEST(Path, NonGradientPairIsRejected) {
  const Field zbar = make_field("zbar", 4, [](const auto& x) { return x[kZbar]; });
  const GradientPair g = bar_pair(zbar, constant_pair_field(0.0));
  EXPECT_THROW(reconstruct_by_path(g, {1, 1, 1, 1}, {1, 1, 2, 2}), IntegrabilityError);
}

TEST(Path, EndpointsMustShareTheOffPlaneCoordinates) {
  const GradientPair g = bar_pair(constant_pair_field(0.0), constant_pair_field(1.0));
  EXPECT_THROW(reconstruct_by_path(g, {1, 1, 1, 1}, {2, 1, 1, 2}), std::invalid_argument);
}

TEST(Path, SegmentLeavingDomain) {
  const DomainFn pos = [](const Point& p) { return p[kYbar] > 0.0; };
  const GradientPair g = bar_pair(make_field("a", 4, [](const auto& x) { return 1.0 / x[kYbar]; }, pos),
                                  make_field("b", 4, [](const auto& x) { return 0.0 * x[kZbar]; }, pos));
  EXPECT_THROW(reconstruct_by_path(g, {0, 0, 1, 0}, {0, 0, -1, 0}), DomainError);
}

// ---- chains

TEST(Chain, TrivialHandChain) {
  const auto seed = seed_symmetry(trivial(), "v_ybar");
  const auto levels = build_chain(trivial(), seed, Recurrence::SE1, 3);
  ASSERT_EQ(levels.size(), 3u);
  const Point p{1.4, 1.1, 1.6, 1.2};
  EXPECT_NEAR(levels[0].theta.value(p), -p[kZbar], 1e-14);
  EXPECT_NEAR(levels[1].theta.value(p), 0.0, 1e-14);
  EXPECT_NEAR(levels[2].theta.value(p), 0.0, 1e-14);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(levels[k].depth, k + 1);
  const auto reports = verify_chain(trivial(), seed, Recurrence::SE1, 3);
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& r : reports) EXPECT_EQ(r.max_abs, 0.0);
  EXPECT_EQ(reports[0].level, 1);
}

TEST(Chain, AppendixChainCertifies) {
  const auto seed = seed_symmetry(appendix(), "v_zbar");
  ChainOptions opt;
  opt.samples = 100;
  const auto reports = verify_chain(appendix(), seed, Recurrence::SE1, 2, opt);
  ASSERT_EQ(reports.size(), 2u);
  for (const auto& r : reports) {
    EXPECT_LE(r.max_abs, 1e-6);
    EXPECT_EQ(r.theta.size(), r.points.size());
    EXPECT_EQ(r.extra["seed"], "v_zbar");
  }
}

TEST(Chain, AppendixFirstLevelValue) {
  // Oracle: level 1 of the SE1 chain from v_zbar, anchored at (1,1,1,1), at P0.
  const auto levels = build_chain(appendix(), seed_symmetry(appendix(), "v_zbar"), Recurrence::SE1, 1);
  EXPECT_NEAR(levels[0].theta.value(kP0), -0.1, 1e-10);
}

TEST(Chain, DepthBounds) {
  const auto seed = seed_symmetry(trivial(), "v_ybar");
  EXPECT_THROW(build_chain(trivial(), seed, Recurrence::SE1, 0), std::invalid_argument);
  EXPECT_EQ(chain_depth_cap(seed), 3);
  EXPECT_THROW(build_chain(trivial(), seed, Recurrence::SE1, 4), CapabilityError);
  EXPECT_THROW(verify_chain(trivial(), seed, Recurrence::SE1, 0), std::invalid_argument);
}

TEST(Chain, LevelsOfAJetFieldSeedAreCapped) {
  SolutionBundle b = trivial();
  b.v = make_jet_field("v", 4, [](const std::array<Jet, 4>& x) { return x[kY] * x[kYbar] + x[kZ] * x[kZbar]; });
  const auto seed = seed_symmetry(b, "v_ybar");
  EXPECT_EQ(chain_depth_cap(seed), 0);
  EXPECT_THROW(build_chain(b, seed, Recurrence::SE1, 1), CapabilityError);
}

TEST(ChainProperty, Linearity) {
  const SolutionBundle& b = appendix();
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  const char* names[4] = {"v_y", "v_z", "v_ybar", "v_zbar"};
  const auto pts = sample_points(b, 6, 31);
  for (int trial = 0; trial < 4; ++trial) {
    const double a = coef(rng), c = coef(rng);
    const auto s1 = seed_symmetry(b, names[trial]);
    const auto s2 = seed_symmetry(b, names[(trial + 1) % 4]);
    SymmetrySolution mix = s1;
    mix.theta = a * s1.theta + c * s2.theta;
    mix.seed = "mix";
    const Recurrence var = trial % 2 ? Recurrence::SE2 : Recurrence::SE1;
    const auto l1 = build_chain(b, s1, var, 2);
    const auto l2 = build_chain(b, s2, var, 2);
    const auto lm = build_chain(b, mix, var, 2);
    for (int k = 0; k < 2; ++k)
      for (const Point& p : pts)
        EXPECT_NEAR(lm[k].theta.value(p), a * l1[k].theta.value(p) + c * l2[k].theta.value(p), 1e-9)
            << "trial " << trial << " level " << k + 1;
  }
}

TEST(ChainProperty, ReconstructedGradientMatchesPair) {
  const SolutionBundle& b = appendix();
  const char* names[4] = {"v_y", "v_z", "v_ybar", "v_zbar"};
  const auto pts = sample_points(b, 5, 41);
  const double h = 1e-5;
  for (const char* name : names) {
    const auto seed = seed_symmetry(b, name);
    const GradientPair g = recurrence_step(b, seed, Recurrence::SE1);
    const Field th = next_symmetry(b, seed, Recurrence::SE1).theta;
    for (const Point& p : pts) {
      for (int which = 0; which < 2; ++which) {
        const int var = which ? g.var_second : g.var_first;
        Point lo = p, hi = p;
        lo[var] -= h;
        hi[var] += h;
        const double fd = (th.value(hi) - th.value(lo)) / (2 * h);
        const double want = which ? g.second.value(p) : g.first.value(p);
        EXPECT_NEAR(fd, want, 1e-6) << name;
      }
    }
  }
}

TEST(ChainProperty, ChainsOnRandomCertifiedBundles) {
  // Every level of depth-2 chains from each seed, both recurrences, on the ME F = 0 bundle.
  const SolutionBundle b = build_family(builtin_descriptor("me-f0"), "canonical", {});
  ChainOptions opt;
  opt.samples = 40;
  for (const char* name : {"v_y", "v_zbar"})
    for (Recurrence var : {Recurrence::SE1, Recurrence::SE2}) {
      const auto reports = verify_chain(b, seed_symmetry(b, name), var, 2, opt);
      for (const auto& r : reports) EXPECT_LE(r.max_abs, 1e-6) << name << " " << to_string(var);
    }
}

}  // namespace
}  // namespace heavenly
