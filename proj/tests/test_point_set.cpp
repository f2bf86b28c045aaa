#include "pbounds/environments.hpp"
#include "pbounds/point_set.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace pbounds;
using pbounds::testing::Rng;

TEST(Weights, CanonicalTigerListen) {
    auto m = build_tiger(0.95);
    auto set = enumerate_one_step_beliefs(m);
    auto b = Belief::normalized({{0, 0.9}, {1, 0.1}});
    auto w = canonical_tib_weights(m, set, b, 0, 0);
    const double pr = 0.9 * 0.85 + 0.1 * 0.15;
    ASSERT_EQ(w.weights.size(), 2u);
    EXPECT_EQ(w.weights[0].index, set.unit_index(0));
    EXPECT_NEAR(w.weights[0].value, 0.9 * 0.85 / pr, 1e-12);
    EXPECT_NEAR(w.weights[1].value, 0.1 * 0.15 / pr, 1e-12);
    EXPECT_NEAR(w.total(), 1.0, 1e-12);
    // The weights reproduce the posterior.
    EXPECT_LT(reconstruction_error(set.beliefs(), w, belief_update(m, b, 0, 0)), 1e-12);
}

TEST(Weights, CanonicalUnreachable) {
    auto m = build_k_out_of_n(1, 0.95);
    auto set = enumerate_one_step_beliefs(m);
    EXPECT_THROW(canonical_tib_weights(m, set, m.initial_belief(), 0, 2), UnreachableObservation);
    EXPECT_THROW(canonical_tib_weights(m, set, m.initial_belief(), 7, 0), UsageError);
}

TEST(Weights, ClosestBeliefExample) {
    auto m = build_tiger(0.95);
    auto set = enumerate_one_step_beliefs(m);
    const int mid = set.initial_index();
    auto b = Belief::normalized({{0, 0.9}, {1, 0.1}});
    EXPECT_NEAR(min_ratio(b, set.belief(mid)), 0.2, 1e-12);
    auto w = ctib_weights(set, b);
    EXPECT_NEAR(w.total(), 1.0, 1e-12);
    double on_mid = 0.0, on_unit0 = 0.0;
    for (const auto& e : w.weights) {
        if (e.index == mid) on_mid = e.value;
        if (e.index == set.unit_index(0)) on_unit0 = e.value;
    }
    EXPECT_NEAR(on_mid, 0.2, 1e-12);
    EXPECT_NEAR(on_unit0, 0.8, 1e-12);
    EXPECT_LT(reconstruction_error(set.beliefs(), w, b), 1e-12);
}

TEST(Weights, ClosestBeliefReconstructsRandomBeliefs) {
    Rng rng(21);
    for (int k = 0; k < 10; ++k) {
        auto m = pbounds::testing::random_model(rng, 4, 3, 3);
        auto set = enumerate_one_step_beliefs(m);
        for (int t = 0; t < 50; ++t) {
            auto b = pbounds::testing::random_belief(rng, 4);
            auto w = ctib_weights(set, b);
            EXPECT_NEAR(w.total(), 1.0, 1e-12);
            for (const auto& e : w.weights) EXPECT_GE(e.value, 0.0);
            EXPECT_LT(reconstruction_error(set.beliefs(), w, b), 1e-12);
        }
    }
}

TEST(Weights, MinRatio) {
    auto b = Belief::normalized({{0, 0.6}, {1, 0.4}});
    EXPECT_NEAR(min_ratio(b, Belief::normalized({{0, 0.5}, {1, 0.5}})), 0.8, 1e-12);
    EXPECT_EQ(min_ratio(b, Belief::normalized({{0, 0.5}, {2, 0.5}})), 0.0);
    EXPECT_NEAR(min_ratio(b, Belief::unit(0)), 0.6, 1e-12);
}

TEST(Sawtooth, CornersOnly) {
    UpperBoundSet ub({1.0, 3.0});
    EXPECT_DOUBLE_EQ(ub.value(Belief::unit(1)), 3.0);
    EXPECT_DOUBLE_EQ(ub.value(Belief::normalized({{0, 0.5}, {1, 0.5}})), 2.0);
}

TEST(Sawtooth, InteriorPoint) {
    UpperBoundSet ub({1.0, 3.0});
    auto mid = Belief::normalized({{0, 0.5}, {1, 0.5}});
    EXPECT_TRUE(ub.insert(mid, 1.5));
    EXPECT_DOUBLE_EQ(ub.value(mid), 1.5);
    // b = (0.75, 0.25): ratio 0.5 against the midpoint, corner interpolation 1.5, gap 0.5.
    EXPECT_DOUBLE_EQ(ub.value(Belief::normalized({{0, 0.75}, {1, 0.25}})), 1.25);
    EXPECT_FALSE(ub.insert(mid, 1.7));
    EXPECT_FALSE(ub.insert(Belief::normalized({{0, 0.75}, {1, 0.25}}), 1.3));
    EXPECT_TRUE(ub.insert(Belief::unit(0), 0.5));
    EXPECT_DOUBLE_EQ(ub.corner_values()[0], 0.5);
}

TEST(Sawtooth, PruneDropsDominatedPoints) {
    UpperBoundSet ub({1.0, 3.0});
    auto mid = Belief::normalized({{0, 0.5}, {1, 0.5}});
    ub.insert(mid, 1.5);
    ub.lower_corner(1, 2.0);   // corner interpolation at mid is now 1.5
    EXPECT_EQ(ub.prune(), 1u);
    EXPECT_TRUE(ub.points().empty());
}

// A convex function below the stored values stays below the interpolation everywhere,
// and adding points only lowers it.
TEST(Sawtooth, DominatesConvexFunctionsAndIsMonotone) {
    Rng rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int S = 4;
    for (int k = 0; k < 20; ++k) {
        std::vector<std::vector<double>> planes(5, std::vector<double>(S));
        for (auto& p : planes)
            for (auto& x : p) x = u(rng);
        auto f = [&](const Belief& b) {
            double best = -1e300;
            for (const auto& p : planes) {
                double v = 0.0;
                for (const auto& e : b.entries()) v += e.value * p[static_cast<std::size_t>(e.index)];
                best = std::max(best, v);
            }
            return best;
        };
        std::vector<double> corners;
        for (int s = 0; s < S; ++s) corners.push_back(f(Belief::unit(s)));
        UpperBoundSet ub(corners);
        std::vector<Belief> probes;
        for (int t = 0; t < 50; ++t) probes.push_back(pbounds::testing::random_belief(rng, S));
        for (int t = 0; t < 30; ++t) {
            std::vector<double> before;
            for (const auto& b : probes) before.push_back(ub.value(b));
            auto p = pbounds::testing::random_belief(rng, S);
            ub.insert(p, f(p));
            for (std::size_t i = 0; i < probes.size(); ++i) {
                const double v = ub.value(probes[i]);
                EXPECT_LE(v, before[i] + 1e-12);
                EXPECT_GE(v, f(probes[i]) - 1e-12);
            }
        }
        EXPECT_DOUBLE_EQ(sawtooth_upper(ub, Belief::unit(2)), corners[2]);
    }
}
