#include "pbounds/environments.hpp"
#include "pbounds/lp.hpp"
#include "pbounds/point_set.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace pbounds;
using pbounds::testing::Rng;

namespace {

LinearProgram make(std::vector<double> c, Sense sense, std::vector<double> A, std::vector<double> b) {
    LinearProgram lp;
    lp.objective = std::move(c);
    lp.sense = sense;
    lp.constraints = std::move(A);
    lp.rhs = std::move(b);
    return lp;
}

} // namespace

TEST(Simplex, SmallMinimum) {
    // min x0 + 2 x1 + 3 x2, x0 + x1 + x2 = 1, x1 - x2 = 0.2
    auto s = solve(make({1, 2, 3}, Sense::minimize, {1, 1, 1, 0, 1, -1}, {1, 0.2}));
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.objective_value, 0.8 + 0.4, 1e-12);
    EXPECT_NEAR(s.values[0], 0.8, 1e-12);
    EXPECT_NEAR(s.values[1], 0.2, 1e-12);
}

TEST(Simplex, Infeasible) {
    auto s = solve(make({1, 1}, Sense::minimize, {1, 1, 1, 1}, {1, 2}));
    EXPECT_EQ(s.status, LpStatus::infeasible);
    auto neg = solve(make({1, 1}, Sense::minimize, {1, 1}, {-1}));
    EXPECT_EQ(neg.status, LpStatus::infeasible);
}

TEST(Simplex, Unbounded) {
    auto s = solve(make({-1, 0}, Sense::minimize, {1, -1}, {0}));
    EXPECT_EQ(s.status, LpStatus::unbounded);
}

TEST(Simplex, RedundantRows) {
    auto s = solve(make({1, -1, 0}, Sense::maximize, {1, 1, 1, 2, 2, 2, 0, 1, 0}, {1, 2, 0.5}));
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.objective_value, 0.0, 1e-12);
}

TEST(Simplex, MatchesVertexEnumeration) {
    Rng rng(2024);
    int feasible = 0;
    for (int k = 0; k < 300; ++k) {
        auto lp = pbounds::testing::random_lp(rng, k % 4 != 0);
        auto want = pbounds::testing::vertex_enumeration(lp);
        auto got = solve(lp);
        if (!want) {
            EXPECT_EQ(got.status, LpStatus::infeasible) << "instance " << k;
            continue;
        }
        ++feasible;
        ASSERT_EQ(got.status, LpStatus::optimal) << "instance " << k;
        EXPECT_NEAR(got.objective_value, *want, 1e-8) << "instance " << k;
        for (double x : got.values) EXPECT_GE(x, 0.0);
        for (std::size_t r = 0; r < lp.rows(); ++r) {
            double s = 0.0;
            for (std::size_t j = 0; j < lp.variables(); ++j) s += lp.at(r, j) * got.values[j];
            EXPECT_NEAR(s, lp.rhs[r], 1e-8);
        }
    }
    EXPECT_GT(feasible, 200);
}

TEST(WeightLp, ReconstructsTargetAndSumsToOne) {
    std::vector<Belief> pts = {Belief::unit(0), Belief::unit(1), Belief::normalized({{0, 0.5}, {1, 0.5}})};
    std::vector<int> cand = {0, 1, 2};
    auto b = Belief::normalized({{0, 0.9}, {1, 0.1}});
    std::vector<double> obj = {1.0, 1.0, 0.0};
    auto w = weight_lp(pts, cand, b, obj, Sense::minimize);
    ASSERT_TRUE(w);
    EXPECT_NEAR(w->total(), 1.0, 1e-12);
    // Cheapest: as much of the midpoint as possible, 0.2, with 0.8 on unit 0.
    SparseVector expect = {{0, 0.8}, {2, 0.2}};
    ASSERT_EQ(w->weights.size(), expect.size());
    for (std::size_t k = 0; k < expect.size(); ++k) {
        EXPECT_EQ(w->weights[k].index, expect[k].index);
        EXPECT_NEAR(w->weights[k].value, expect[k].value, 1e-12);
    }
}

TEST(WeightLp, RejectsCandidateOutsideSupport) {
    std::vector<Belief> pts = {Belief::unit(0), Belief::unit(1)};
    std::vector<int> cand = {0, 1};
    std::vector<double> obj = {0.0, 0.0};
    EXPECT_THROW(weight_lp(pts, cand, Belief::unit(0), obj, Sense::minimize), UsageError);
    std::vector<double> short_obj = {0.0};
    EXPECT_THROW(weight_lp(pts, cand, Belief::unit(0), short_obj, Sense::minimize), UsageError);
}

TEST(WeightLp, InfeasibleWithoutUnits) {
    std::vector<Belief> pts = {Belief::normalized({{0, 0.5}, {1, 0.5}})};
    std::vector<int> cand = {0};
    std::vector<double> obj = {0.0};
    EXPECT_FALSE(weight_lp(pts, cand, Belief::normalized({{0, 0.7}, {1, 0.3}}), obj, Sense::minimize));
}

// Every feasible weight function over a point set is a convex combination.
TEST(WeightLp, WeightSumLemma) {
    Rng rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        auto m = pbounds::testing::random_model(rng, 4, 3, 3);
        auto set = enumerate_one_step_beliefs(m);
        std::vector<double> obj(set.size());
        for (int t = 0; t < 30; ++t) {
            for (auto& x : obj) x = u(rng);
            auto b = pbounds::testing::random_belief(rng, 4);
            for (auto sense : {Sense::minimize, Sense::maximize}) {
                auto w = weight_lp(set, b, obj, sense);
                ASSERT_TRUE(w);   // unit beliefs make every belief feasible
                EXPECT_NEAR(w->total(), 1.0, 1e-7);
                EXPECT_LT(reconstruction_error(set.beliefs(), *w, b), 1e-9);
            }
        }
    }
}
