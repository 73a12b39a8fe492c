#include <gtest/gtest.h>

#include "hhs/generators.hpp"
#include "hhs/hyperbolicity.hpp"
#include "oracle/naive_axioms.hpp"

using namespace hhs;

namespace {

MetricSpace cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n), Rational(1)});
  }
  return build_graph(n, edges, "C" + std::to_string(n));
}

MetricSpace star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.push_back({0, static_cast<Vertex>(i), Rational(1)});
  return build_graph(leaves + 1, edges);
}

/// (M1 - M2) / 2 of the corner quadruple of flat_grid(n).
Rational corner_value(const MetricSpace& grid, std::size_t n) {
  const auto side = static_cast<Vertex>(n + 1);
  Vertex a = 0, b = side - 1, c = side * (side - 1), d = side * side - 1;
  std::vector<Rational> sums{grid.distance(a, b) + grid.distance(c, d), grid.distance(a, c) + grid.distance(b, d),
                             grid.distance(a, d) + grid.distance(b, c)};
  std::sort(sums.begin(), sums.end());
  return (sums[2] - sums[1]) / 2;
}

}  // namespace

TEST(FourPoint, TreesAreZero) {
  EXPECT_EQ(four_point_delta(star(3)).delta, Rational(0));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto t = random_tree(60, seed);
    EXPECT_EQ(four_point_delta(t).delta, Rational(0)) << "seed " << seed;
  }
}

TEST(FourPoint, Triangle) { EXPECT_EQ(four_point_delta(cycle(3)).delta, Rational(0)); }

TEST(FourPoint, TooFewPointsHaveNoWitness) {
  auto v = four_point_delta(path_of_length(2));
  EXPECT_EQ(v.delta, Rational(0));
  EXPECT_TRUE(v.witness.empty());
}

TEST(FourPoint, GridCornerQuadruple) {
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    auto grid = flat_grid(n);
    auto corner = corner_value(grid, n);
    EXPECT_EQ(corner, Rational(static_cast<int>(n)));
    auto swept = four_point_delta(grid);
    EXPECT_GE(swept.delta, corner);
    EXPECT_EQ(swept.delta, Rational(static_cast<int>(n)));
  }
}

TEST(FourPoint, StrictlyIncreasingOnGrids) {
  Limits limits;
  limits.delta_vertices = 100;
  auto d2 = four_point_delta(flat_grid(2), limits).delta;
  auto d4 = four_point_delta(flat_grid(4), limits).delta;
  auto d6 = four_point_delta(flat_grid(6), limits).delta;
  EXPECT_LT(d2, d4);
  EXPECT_LT(d4, d6);
}

TEST(FourPoint, WitnessAttainsValue) {
  auto g = cycle(7);
  auto v = four_point_delta(g);
  ASSERT_EQ(v.witness.size(), 4u);
  auto [a, b, c, d] = std::tuple{v.witness[0], v.witness[1], v.witness[2], v.witness[3]};
  std::vector<Rational> sums{g.distance(a, b) + g.distance(c, d), g.distance(a, c) + g.distance(b, d),
                             g.distance(a, d) + g.distance(b, c)};
  std::sort(sums.begin(), sums.end());
  EXPECT_EQ((sums[2] - sums[1]) / 2, v.delta);
}

TEST(FourPoint, MatchesOracle) {
  for (const auto& g : {cycle(5), cycle(6), cycle(9), flat_grid(2), flat_grid(3), random_tree(25, 3)}) {
    EXPECT_EQ(four_point_delta(g).delta, oracle::four_point(g)) << g.label();
  }
  auto weighted = build_graph(5, {{0, 1, Rational(1, 2)}, {1, 2, Rational(3)}, {2, 3, Rational(1)},
                                  {3, 4, Rational(2, 3)}, {4, 0, Rational(5, 2)}, {1, 3, Rational(2)}});
  EXPECT_EQ(four_point_delta(weighted).delta, oracle::four_point(weighted));
}

TEST(FourPoint, CycleValues) {
  EXPECT_EQ(four_point_delta(cycle(5)).delta, Rational(1, 2));
  EXPECT_EQ(four_point_delta(cycle(6)).delta, Rational(1));
}

TEST(ThinTriangle, TreesAreZero) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    EXPECT_EQ(thin_triangle_delta_canonical(random_tree(50, seed)).delta, Rational(0)) << "seed " << seed;
  }
}

TEST(ThinTriangle, DegenerateTriangle) {
  auto v = thin_triangle_delta_canonical(build_graph(1, {}));
  EXPECT_EQ(v.delta, Rational(0));
  EXPECT_TRUE(v.witness.empty());
  EXPECT_EQ(thin_triangle_delta_canonical(path_of_length(2)).delta, Rational(0));
}

TEST(ThinTriangle, SmallGridIsPositive) {
  auto v = thin_triangle_delta_canonical(flat_grid(2));
  EXPECT_EQ(v.delta, Rational(2));
  EXPECT_EQ(v.witness.size(), 3u);
}

TEST(ThinTriangle, MatchesOracle) {
  for (const auto& g : {cycle(5), cycle(8), flat_grid(3), flat_grid(4), random_tree(30, 9)}) {
    EXPECT_EQ(thin_triangle_delta_canonical(g).delta, oracle::thin_triangle(g)) << g.label();
  }
}

TEST(Delta, CapRefusesLargeSpaces) {
  Limits limits;
  limits.delta_vertices = 8;
  try {
    four_point_delta(flat_grid(2), limits);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeLimitExceeded);
  }
  EXPECT_THROW(thin_triangle_delta_canonical(flat_grid(2), limits), Error);
}

TEST(Delta, ParallelReduceIsDeterministic) {
  auto g = flat_grid(4);
  auto first = delta_report(g);
  for (int i = 0; i < 3; ++i) {
    auto again = delta_report(g);
    EXPECT_EQ(again.four_point.witness, first.four_point.witness);
    EXPECT_EQ(again.thin_triangle.witness, first.thin_triangle.witness);
  }
}

TEST(Delta, OrderedReduceMatchesSerialForAnyWorkerCount) {
  // first index attaining the maximum of a bumpy sequence
  std::vector<int> values;
  for (int i = 0; i < 500; ++i) values.push_back((i * 37) % 101);
  struct Best {
    int value = -1;
    std::size_t index = 0;
  };
  auto sweep = [&](std::size_t begin, std::size_t end) {
    Best best;
    for (std::size_t i = begin; i < end; ++i) {
      if (values[i] > best.value) best = {values[i], i};
    }
    return best;
  };
  auto merge = [](Best& acc, const Best& b) {
    if (b.value > acc.value) acc = b;
  };
  auto serial = detail::ordered_parallel_reduce(values.size(), Best{}, sweep, merge, 1);
  for (std::size_t workers : {2u, 3u, 7u, 16u}) {
    auto parallel = detail::ordered_parallel_reduce(values.size(), Best{}, sweep, merge, workers);
    EXPECT_EQ(parallel.value, serial.value);
    EXPECT_EQ(parallel.index, serial.index);
  }
  EXPECT_EQ(serial.value, 100);
}
