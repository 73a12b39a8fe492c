#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "hhs/distance_formula.hpp"
#include "hhs/generators.hpp"
#include "oracle/naive_axioms.hpp"

using namespace hhs;

namespace {

/// z is kept when each z_U is within slack of a vertex q_U on some
/// geodesic from x_U to y_U, tested via d(x,q) + d(q,y) = d(x,y).
std::vector<Vertex> naive_hull(const HHSStructure& s, const oracle::Metrics& m, Vertex x, Vertex y,
                               const Rational& slack) {
  std::vector<Vertex> out;
  for (Vertex z = 0; z < s.total_space().size(); ++z) {
    bool keep = true;
    for (DomainId u = 0; u < s.domain_count() && keep; ++u) {
      const auto& d = m.domain[u];
      const auto& p = s.projection(u);
      bool near = false;
      for (Vertex q = 0; q < d.n && !near; ++q) {
        near = d.raw(p[x], q) + d.raw(q, p[y]) == d.raw(p[x], p[y]) && d.at(p[z], q) <= slack;
      }
      keep = near;
    }
    if (keep) out.push_back(z);
  }
  return out;
}

}  // namespace

TEST(DistanceSum, ExactOnTreeOfFlats) {
  for (auto [n, depth] : {std::pair{1, 1}, {2, 1}, {1, 2}, {3, 1}}) {
    auto t = tree_of_flats({n, depth});
    const auto& s = t.structure;
    oracle::Metrics m(s);
    for (Vertex x = 0; x < s.total_space().size(); x += 3) {
      for (Vertex y = 0; y < s.total_space().size(); ++y) {
        auto sum = df_sum(s, x, y);
        ASSERT_EQ(sum, s.total_space().distance(x, y)) << n << "," << depth << " " << x << "-" << y;
        ASSERT_EQ(sum, oracle::distance_sum(s, m, x, y));
      }
    }
  }
}

TEST(DistanceSum, SymmetricAndZeroOnDiagonal) {
  auto s = fixtures::perturbed(fixtures::bundled("toy2.json"), 5, 0.5);
  for (Vertex x = 0; x < s.total_space().size(); ++x) {
    EXPECT_EQ(df_sum(s, x, x), Rational(0));
    for (Vertex y = 0; y < x; ++y) EXPECT_EQ(df_sum(s, x, y), df_sum(s, y, x));
  }
}

TEST(DistanceSum, RejectsUnknownVertices) {
  auto s = fixtures::bundled("toy1_small.json");
  EXPECT_THROW(df_sum(s, 0, 45), Error);
  EXPECT_THROW(df_thresholded(s, 0, 1, Rational(-1)), Error);
}

TEST(Thresholded, ZeroThresholdIsPlainSum) {
  auto s = fixtures::bundled("toy2.json");
  for (Vertex x = 0; x < s.total_space().size(); ++x) EXPECT_EQ(df_thresholded(s, 0, x, Rational(0)), df_sum(s, 0, x));
}

TEST(Thresholded, NonincreasingInThreshold) {
  auto s = fixtures::bundled("toy1_medium.json");
  std::mt19937 rng(4);
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(s.total_space().size() - 1));
  for (int i = 0; i < 200; ++i) {
    Vertex x = pick(rng), y = pick(rng);
    Rational previous = df_thresholded(s, x, y, Rational(0));
    for (int k = 1; k <= 6; ++k) {
      auto value = df_thresholded(s, x, y, Rational(k, 2));
      EXPECT_LE(value, previous);
      previous = value;
    }
  }
}

TEST(QIFit, TreeOfFlatsIsIsometric) {
  for (const char* name : {"toy1_small.json", "toy1_medium.json"}) {
    auto fit = fit_qi_constants(fixtures::bundled(name), Rational(0));
    EXPECT_EQ(fit.multiplicative, Rational(1)) << name;
    EXPECT_EQ(fit.additive, Rational(0)) << name;
    EXPECT_EQ(fit.max_lower_violation, Rational(0));
    EXPECT_EQ(fit.max_upper_violation, Rational(0));
  }
  EXPECT_EQ(fit_qi_constants(fixtures::bundled("toy1_small.json"), Rational(1)).pairs, 45u * 44 / 2);
}

TEST(QIFit, BundledIntervalComplexIsIsometric) {
  auto fit = fit_qi_constants(fixtures::bundled("toy2.json"), Rational(0));
  EXPECT_EQ(fit.multiplicative, Rational(1));
  EXPECT_EQ(fit.additive, Rational(0));
}

TEST(QIFit, FitHoldsOnEveryPair) {
  auto s = fixtures::perturbed(fixtures::bundled("toy2.json"), 3, 0.3);
  auto pairs = all_vertex_pairs(s.total_space());
  auto fit = fit_qi_constants(s, pairs, Rational(1));
  EXPECT_GT(fit.multiplicative, Rational(1));
  for (auto [x, y] : pairs) {
    auto d = s.total_space().distance(x, y);
    auto sum = df_thresholded(s, x, y, Rational(1));
    EXPECT_LE(sum / fit.multiplicative - fit.additive, d);
    EXPECT_LE(d, fit.multiplicative * sum + fit.additive);
  }
}

TEST(QIFit, DegeneratePairs) {
  auto s = fixtures::bundled("toy1_small.json");
  auto code = [&](std::vector<VertexPair> pairs, Rational threshold) {
    try {
      fit_qi_constants(s, pairs, threshold);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  EXPECT_EQ(code({}, Rational(0)), ErrorCode::DegeneratePairs);
  EXPECT_EQ(code({{3, 3}, {7, 7}}, Rational(0)), ErrorCode::DegeneratePairs);
  EXPECT_EQ(code({{0, 1}, {2, 5}}, Rational(100)), ErrorCode::DegeneratePairs);
}

TEST(QIFit, PermutationInvariant) {
  auto s = fixtures::perturbed(fixtures::bundled("toy1_small.json"), 2);
  auto pairs = sample_vertex_pairs(s.total_space(), 300, 9);
  auto reference = fit_qi_constants(s, pairs, Rational(1));
  std::mt19937 rng(17);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    EXPECT_EQ(fit_qi_constants(s, pairs, Rational(1)), reference);
  }
}

TEST(QIFit, MultiplicativeConstantGrowsWithPairs) {
  auto s = fixtures::perturbed(fixtures::bundled("toy2.json"), 4, 0.3);
  auto pairs = sample_vertex_pairs(s.total_space(), 600, 1);
  Rational previous(1);
  for (std::size_t k = 50; k <= pairs.size(); k += 50) {
    auto fit = fit_qi_constants(s, std::span<const VertexPair>(pairs.data(), k), Rational(0));
    EXPECT_GE(fit.multiplicative, previous) << k;
    previous = fit.multiplicative;
  }
}

TEST(Sampling, DeterministicDistinctAndSorted) {
  auto space = fixtures::bundled("toy1_medium.json").total_space();
  auto a = sample_vertex_pairs(space, 500, 7);
  EXPECT_EQ(a, sample_vertex_pairs(space, 500, 7));
  EXPECT_NE(a, sample_vertex_pairs(space, 500, 8));
  EXPECT_EQ(a.size(), 500u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::adjacent_find(a.begin(), a.end()), a.end());
  for (auto [x, y] : a) EXPECT_LT(x, y);
  EXPECT_EQ(sample_vertex_pairs(space, 1u << 20, 7).size(), 125u * 124 / 2);
}

TEST(Hull, StaircaseRectangleInsideOneFlat) {
  auto t = tree_of_flats({2, 0});
  auto hull = coarse_hull(t.structure, t.vertex(0, -1, -2), t.vertex(0, 1, 0), Rational(0));
  std::vector<Vertex> box;
  for (int x = -1; x <= 1; ++x)
    for (int y = -2; y <= 0; ++y) box.push_back(t.vertex(0, x, y));
  std::sort(box.begin(), box.end());
  EXPECT_EQ(hull, box);
}

TEST(Hull, EqualsGeodesicIntervalOnTreeOfFlats) {
  auto t = tree_of_flats({1, 1});
  const auto& X = t.space();
  for (Vertex x = 0; x < X.size(); x += 2) {
    for (Vertex y = 0; y < X.size(); y += 3) {
      EXPECT_EQ(coarse_hull(t.structure, x, y, Rational(0)), geodesic_interval(X, x, y)) << x << "-" << y;
    }
  }
}

TEST(Hull, PassesThroughTheGate) {
  auto t = tree_of_flats({1, 1});
  auto x = t.vertex(0, -1, -1);
  auto y = t.vertex(1, 1, 1);
  auto hull = coarse_hull(t.structure, x, y, Rational(0));
  auto gate = *t.flats[1].attached_from;
  EXPECT_TRUE(std::binary_search(hull.begin(), hull.end(), gate));
  EXPECT_TRUE(std::binary_search(hull.begin(), hull.end(), t.vertex(1, 0, 0)));
  for (Vertex z : hull) {
    auto f = t.flat_of(z);
    EXPECT_TRUE(f == 0 || f == 1) << z;
  }
}

TEST(Hull, MonotoneInSlackAndEventuallyEverything) {
  auto s = fixtures::bundled("toy2.json");
  const auto n = s.total_space().size();
  for (Vertex x = 0; x < n; x += 7) {
    for (Vertex y = 1; y < n; y += 11) {
      std::vector<Vertex> previous;
      for (int k = 0; k <= 4; ++k) {
        auto hull = coarse_hull(s, x, y, Rational(k));
        EXPECT_TRUE(std::includes(hull.begin(), hull.end(), previous.begin(), previous.end()));
        EXPECT_TRUE(std::binary_search(hull.begin(), hull.end(), x));
        EXPECT_TRUE(std::binary_search(hull.begin(), hull.end(), y));
        previous = hull;
      }
      Rational widest(0);
      for (DomainId u = 0; u < s.domain_count(); ++u) widest = std::max(widest, s.domain_space(u).diameter());
      EXPECT_EQ(coarse_hull(s, x, y, widest).size(), n);
    }
  }
}

TEST(Hull, MatchesNaiveDefinition) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto s = fixtures::perturbed(fixtures::bundled("toy2.json"), seed, 0.3);
    oracle::Metrics m(s);
    for (Vertex x = 0; x < s.total_space().size(); x += 9) {
      for (Vertex y = 0; y < s.total_space().size(); y += 13) {
        for (int k : {0, 1}) {
          EXPECT_EQ(coarse_hull(s, x, y, Rational(k)), naive_hull(s, m, x, y, Rational(k)));
        }
      }
    }
  }
}

TEST(Hull, RejectsNegativeSlack) {
  EXPECT_THROW(coarse_hull(fixtures::bundled("toy1_small.json"), 0, 1, Rational(-1, 2)), Error);
}
