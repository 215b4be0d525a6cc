#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "cfp/operators.hpp"
#include "test_support.hpp"

using namespace cfp;

namespace {

const MetricSpace line = MetricSpace::euclidean(1);

Point sum_over_five(const Point& x, const Point& y) { return {(x[0] + y[0]) / 5.0}; }
Point first_arg(const Point& x, const Point&) { return x; }
Point second_arg(const Point&, const Point& y) { return y; }
Point constant(const Point&, const Point&) { return {3.0}; }

FiniteSet plus_minus(const Point& x, const Point& y) {
  const double s = (x[0] + y[0]) / 5.0;
  return {{-s}, {s}};
}

SampleSpec box(std::size_t count, std::uint64_t seed = 1) {
  SampleSpec s;
  s.count = count;
  s.rng_seed = seed;
  return s;
}

SampleSpec from_points(std::vector<Point> pts, std::size_t count = 400) {
  SampleSpec s;
  s.points = std::move(pts);
  s.count = count;
  s.max_witnesses = 1000;
  return s;
}

bool has_witness(const Certificate& c, const std::vector<Point>& prefix) {
  return std::any_of(c.violations.begin(), c.violations.end(), [&](const Witness& w) {
    return w.points.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), w.points.begin());
  });
}

}  // namespace

TEST(MixedMonotone, SumOverFiveIsNotMonotoneForTheOrderGraph) {
  // Increasing in y, so the reversed second-argument clause fails.
  const auto cert = check_mixed_monotone(sum_over_five, Digraph::order(), box(2000));
  EXPECT_FALSE(cert.passed);
  ASSERT_FALSE(cert.violations.empty());
  EXPECT_NE(cert.violations.front().note.find("second argument"), std::string::npos);

  EXPECT_TRUE(check_mixed_monotone(sum_over_five, Digraph::full(), box(2000)).passed);
}

TEST(MixedMonotone, ConstantMapPasses) {
  const auto cert = check_mixed_monotone(constant, Digraph::order(), box(1000));
  EXPECT_TRUE(cert.passed);
  EXPECT_TRUE(cert.violations.empty());
  EXPECT_EQ(cert.samples_tested, 1000u);
  EXPECT_EQ(cert.rng_seed, std::optional<std::uint64_t>(1));
}

TEST(MixedMonotone, SecondArgumentProjectionFailsWithWitness) {
  const auto cert = check_mixed_monotone(second_arg, Digraph::order(), from_points({{0.0}, {1.0}}));
  EXPECT_FALSE(cert.passed);
  // (y1,y2) = (0,1), x = 0 needs (F(0,1),F(0,0)) = (1,0).
  EXPECT_TRUE(has_witness(cert, {{0.0}, {1.0}, {0.0}}));
}

TEST(MixedMonotone, IncreasingDecreasingLinearMapPasses) {
  auto f = [](const Point& x, const Point& y) { return Point{0.3 * x[0] - 0.1 * y[0]}; };
  EXPECT_TRUE(check_mixed_monotone(f, Digraph::order(), box(5000)).passed);
}

TEST(MixedMonotone, PassingOnTheFullGraphDoesNotTransferToSubgraphs) {
  // Shrinking E(G) also shrinks the set of admissible images.
  EXPECT_TRUE(check_mixed_monotone(second_arg, Digraph::full(), box(500)).passed);
  EXPECT_FALSE(check_mixed_monotone(second_arg, Digraph::order(), box(500)).passed);
}

TEST(MixedMonotone, InsufficientSamples) {
  const auto never = Digraph::from_predicate([](const Point&, const Point&) { return false; });
  try {
    (void)check_mixed_monotone(constant, never, box(100));
    FAIL() << "expected insufficient-samples";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::insufficient_samples);
  }
}

TEST(MixedMonotoneMulti, Examples) {
  EXPECT_TRUE(check_mixed_monotone_multi(plus_minus, Digraph::full(), box(2000)).passed);
  EXPECT_FALSE(check_mixed_monotone_multi(plus_minus, Digraph::order(), box(2000)).passed);
  auto const_set = [](const Point&, const Point&) { return FiniteSet{{2.0}}; };
  EXPECT_TRUE(check_mixed_monotone_multi(const_set, Digraph::order(), box(1000)).passed);
  const auto cert = check_mixed_monotone_multi(as_multi(second_arg), Digraph::order(), from_points({{0.0}, {1.0}}));
  EXPECT_FALSE(cert.passed);
  EXPECT_TRUE(has_witness(cert, {{0.0}, {1.0}, {0.0}}));
}

TEST(MixedMonotoneMulti, ExistentialIsSatisfiedBySomeMember) {
  // {x, x+100} is monotone: the larger member always dominates.
  auto f = [](const Point& x, const Point&) { return FiniteSet{{x[0]}, {x[0] + 100.0}}; };
  EXPECT_TRUE(check_mixed_monotone_multi(f, Digraph::order(), box(2000)).passed);
}

TEST(CheckBL, Examples) {
  const auto ok = check_bl(sum_over_five, line, Digraph::order(), 2.0 / 3.0, box(5000));
  EXPECT_TRUE(ok.passed);
  EXPECT_EQ(ok.declared_k, std::optional<double>(2.0 / 3.0));

  const auto degenerate = check_bl(sum_over_five, line, Digraph::order(), 2.0 / 3.0, from_points({{3.0}}, 10));
  EXPECT_TRUE(degenerate.passed);
  EXPECT_EQ(degenerate.samples_tested, 10u);

  const auto bad = check_bl(first_arg, line, Digraph::order(), 0.9, from_points({{0.0}, {1.0}}));
  EXPECT_FALSE(bad.passed);
  const auto it = std::find_if(bad.violations.begin(), bad.violations.end(), [](const Witness& w) {
    return w.points == std::vector<Point>{{0.0}, {0.0}, {1.0}, {0.0}};
  });
  ASSERT_NE(it, bad.violations.end());
  EXPECT_EQ(it->lhs, 1.0);
  EXPECT_DOUBLE_EQ(it->rhs, 0.45);
}

TEST(CheckBL, InvalidK) {
  for (double k : {0.0, 1.0, -0.5, 1.5}) {
    try {
      (void)check_bl(sum_over_five, line, Digraph::order(), k, box(10));
      FAIL() << "k = " << k;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::invalid_parameter);
    }
  }
}

TEST(EstimateK, SumOverFiveApproachesTwoFifths) {
  const double k = estimate_k(sum_over_five, line, Digraph::order(), box(100000, 12345));
  EXPECT_GE(k, 0.38);
  EXPECT_LE(k, 0.40);
}

TEST(EstimateK, ConstantAndProjection) {
  EXPECT_EQ(estimate_k(constant, line, Digraph::order(), box(1000)), 0.0);
  const double k = estimate_k(first_arg, line, Digraph::full(), box(20000));
  EXPECT_GT(k, 1.9);
  EXPECT_LE(k, 2.0 + 1e-12);
}

TEST(EstimateK, AllDenominatorsZero) {
  try {
    (void)estimate_k(sum_over_five, line, Digraph::order(), from_points({{1.0}}, 50));
    FAIL() << "expected insufficient-samples";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::insufficient_samples);
  }
}

TEST(EstimateK, EstimatedConstantPassesCheckOnSameSamples) {
  test::Gen gen(31);
  for (int trial = 0; trial < 40; ++trial) {
    const double a = gen.real(-0.4, 0.4);
    const double b = gen.real(-0.4, 0.4);
    auto f = [a, b](const Point& x, const Point& y) { return Point{a * x[0] + b * y[0]}; };
    const auto graph = gen.coin() ? Digraph::order() : Digraph::full();
    const auto spec = box(3000, 1000 + trial);
    const double k = estimate_k(f, line, graph, spec);
    if (k + 1e-9 >= 1.0 || k == 0.0) continue;
    EXPECT_TRUE(check_bl(f, line, graph, k + 1e-9, spec).passed) << "a=" << a << " b=" << b;
  }
}

TEST(CheckMBL, Examples) {
  EXPECT_TRUE(check_mbl(plus_minus, line, Digraph::order(), 2.0 / 3.0, box(5000)).passed);
  EXPECT_TRUE(check_mbl(plus_minus, line, Digraph::full(), 2.0 / 3.0, box(5000)).passed);
  EXPECT_TRUE(check_mbl(plus_minus, line, Digraph::order(), 2.0 / 3.0, from_points({{2.0}}, 10)).passed);
  const auto bad = check_mbl(as_multi(first_arg), line, Digraph::order(), 0.9, from_points({{0.0}, {1.0}}));
  EXPECT_FALSE(bad.passed);
  EXPECT_TRUE(has_witness(bad, {{0.0}, {0.0}, {1.0}, {0.0}}));
  EXPECT_THROW(check_mbl(plus_minus, line, Digraph::order(), 1.0, box(10)), Error);
}

TEST(CheckMBL, SingletonAgreesWithBL) {
  const auto spec = box(3000, 8);
  const auto single = check_bl(sum_over_five, line, Digraph::order(), 0.5, spec);
  const auto multi = check_mbl(as_multi(sum_over_five), line, Digraph::order(), 0.5, spec);
  EXPECT_EQ(single.passed, multi.passed);
  EXPECT_EQ(single.samples_tested, multi.samples_tested);
  EXPECT_DOUBLE_EQ(estimate_k(sum_over_five, line, Digraph::order(), spec),
                   estimate_k_multi(as_multi(sum_over_five), line, Digraph::order(), spec));
}

TEST(Sampler, IsDeterministicForAFixedSeed) {
  Sampler a(box(10, 77), 3);
  Sampler b(box(10, 77), 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.draw(), b.draw());
  auto bad = box(10);
  bad.lo = {0.0, 0.0};
  EXPECT_THROW(Sampler(bad, 3), Error);
  bad.lo = {20.0};
  EXPECT_THROW(Sampler(bad, 1), Error);
}
