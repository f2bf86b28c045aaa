#include "pbounds/belief_set.hpp"
#include "pbounds/environments.hpp"
#include "pbounds/model.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace pbounds;
using pbounds::testing::Rng;

TEST(Belief, NormalizesAndDropsZeros) {
    auto b = Belief::normalized({{2, 3.0}, {0, 1.0}, {1, 0.0}});
    ASSERT_EQ(b.support_size(), 2u);
    EXPECT_DOUBLE_EQ(b[0], 0.25);
    EXPECT_DOUBLE_EQ(b[2], 0.75);
    EXPECT_DOUBLE_EQ(b[1], 0.0);
    EXPECT_FALSE(b.is_unit());
    EXPECT_TRUE(Belief::unit(4).is_unit());
}

TEST(Belief, SupDistanceAndEntropy) {
    auto x = Belief::normalized({{0, 0.5}, {1, 0.5}});
    auto y = Belief::normalized({{0, 0.8}, {2, 0.2}});
    EXPECT_NEAR(sup_distance(x, y), 0.5, 1e-15);
    EXPECT_NEAR(belief_entropy(x), std::log(2.0), 1e-12);
    EXPECT_NEAR(belief_entropy(Belief::unit(1)), 0.0, 1e-15);
}

TEST(Model, RejectsBadRows) {
    std::vector<SparseVector> T = {{{0, 0.9}}};
    std::vector<SparseVector> Z = {{{0, 1.0}}};
    EXPECT_THROW(PomdpModel(1, 1, 1, T, Z, {0.0}, 0.9, Belief::unit(0)), ModelError);
    T = {{{0, 1.0}}};
    EXPECT_THROW(PomdpModel(1, 1, 1, T, Z, {0.0}, 1.0, Belief::unit(0)), ModelError);
    EXPECT_NO_THROW(PomdpModel(1, 1, 1, T, Z, {0.0}, 0.9, Belief::unit(0)));
}

TEST(Model, GuessingGameKernels) {
    auto m = build_guessing_game(0.95);
    EXPECT_EQ(m.num_states(), 3);
    EXPECT_EQ(m.num_actions(), 3);
    EXPECT_EQ(m.num_observations(), 1);
    EXPECT_DOUBLE_EQ(m.transition_probability(0, 2, 1), 0.2);
    EXPECT_DOUBLE_EQ(m.reward(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(m.reward(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(expected_reward(m, m.initial_belief(), 0), 0.5);
    EXPECT_THROW(m.check_action(3), UsageError);
}

TEST(Model, TigerListenPosterior) {
    auto m = build_tiger(0.95);
    auto b = belief_update(m, m.initial_belief(), 0, 0);
    EXPECT_NEAR(b[0], 0.85, 1e-12);
    EXPECT_NEAR(observation_probability(m, m.initial_belief(), 0, 0), 0.5, 1e-12);
    auto b2 = belief_update(m, b, 0, 0);
    EXPECT_NEAR(b2[0], 0.85 * 0.85 / (0.85 * 0.85 + 0.15 * 0.15), 1e-12);
}

TEST(Model, UnreachableObservationThrows) {
    auto m = build_k_out_of_n(1, 0.95);
    // Doing nothing always reports observation 0.
    EXPECT_THROW(belief_update(m, m.initial_belief(), 0, 1), UnreachableObservation);
}

// Bayes' rule on dense arrays against the sparse update.
TEST(Model, BeliefUpdateMatchesDenseBayes) {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto m = pbounds::testing::random_model(rng, 5, 3, 4);
        auto b = pbounds::testing::random_belief(rng, 5);
        for (int a = 0; a < 3; ++a) {
            double total = 0.0;
            for (int o = 0; o < 4; ++o) {
                std::vector<double> next(5, 0.0);
                double pr = 0.0;
                for (int s = 0; s < 5; ++s)
                    for (int sp = 0; sp < 5; ++sp) {
                        const double j = b[s] * joint_probability(m, s, a, sp, o);
                        next[static_cast<std::size_t>(sp)] += j;
                        pr += j;
                    }
                EXPECT_NEAR(observation_probability(m, b, a, o), pr, 1e-12);
                total += pr;
                if (pr <= 0.0) continue;
                auto post = belief_update(m, b, a, o);
                for (int sp = 0; sp < 5; ++sp) EXPECT_NEAR(post[sp], next[static_cast<std::size_t>(sp)] / pr, 1e-12);
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
            double branch_mass = 0.0;
            for (const auto& br : observation_branches(m, b, a)) branch_mass += br.probability;
            EXPECT_NEAR(branch_mass, 1.0, 1e-12);
        }
    }
}

TEST(BeliefSet, OneStepCounts) {
    EXPECT_EQ(enumerate_one_step_beliefs(build_guessing_game(0.95)).size(), 6u);
    EXPECT_EQ(enumerate_one_step_beliefs(build_tiger(0.95)).size(), 3u);
    EXPECT_EQ(enumerate_one_step_beliefs(build_grid(0.95)).size(), 152u);
    EXPECT_EQ(enumerate_one_step_beliefs(build_k_out_of_n(2, 0.95)).size(), 61u);
}

TEST(BeliefSet, LayoutAndDedup) {
    auto m = build_guessing_game(0.95);
    auto set = enumerate_one_step_beliefs(m);
    EXPECT_EQ(sup_distance(set.belief(set.initial_index()), m.initial_belief()), 0.0);
    for (int s = 0; s < 3; ++s) EXPECT_TRUE(set.belief(set.unit_index(s)).is_unit());
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j)
            EXPECT_GE(sup_distance(set.belief(static_cast<int>(i)), set.belief(static_cast<int>(j))), 1e-9);
    // Guesses from either state land in the sink.
    const int sink = set.unit_index(2);
    EXPECT_EQ(set.one_step_indices(0, 0)[0], sink);
    EXPECT_EQ(set.one_step_indices(1, 1)[0], sink);
    bool shared = false;
    for (std::size_t i = 0; i < set.size(); ++i) shared |= set.origins(static_cast<int>(i)).size() > 1;
    EXPECT_TRUE(shared);
}

TEST(BeliefSet, OneStepIndicesAreUpdatesOfUnits) {
    Rng rng(11);
    auto m = pbounds::testing::random_model(rng, 4, 3, 3);
    auto set = enumerate_one_step_beliefs(m);
    for (int s = 0; s < 4; ++s)
        for (int a = 0; a < 3; ++a) {
            auto outs = m.outcomes(s, a);
            auto idx = set.one_step_indices(s, a);
            ASSERT_EQ(outs.size(), idx.size());
            for (std::size_t k = 0; k < outs.size(); ++k) {
                auto b = belief_update(m, Belief::unit(s), a, outs[k].observation);
                EXPECT_LT(sup_distance(b, set.belief(idx[k])), 1e-9);
            }
        }
}

TEST(BeliefSet, CachedBranchesMatchDirectComputation) {
    Rng rng(12);
    auto m = pbounds::testing::random_model(rng, 4, 3, 3);
    auto set = enumerate_one_step_beliefs(m);
    ASSERT_TRUE(set.has_successor_cache());
    for (std::size_t i = 0; i < set.size(); ++i)
        for (int a = 0; a < 3; ++a) {
            const auto& b = set.belief(static_cast<int>(i));
            EXPECT_NEAR(set.expected_reward(static_cast<int>(i), a), expected_reward(m, b, a), 1e-12);
            auto direct = observation_branches(m, b, a);
            auto cached = set.branches(static_cast<int>(i), a);
            ASSERT_EQ(direct.size(), cached.size());
            for (std::size_t k = 0; k < direct.size(); ++k) {
                EXPECT_EQ(direct[k].observation, cached[k].observation);
                EXPECT_NEAR(direct[k].probability, cached[k].probability, 1e-12);
                EXPECT_LT(sup_distance(direct[k].posterior, set.posterior(cached[k].posterior)), 1e-9);
                double total = 0.0;
                for (const auto& w : cached[k].tib_weights) total += w.value;
                EXPECT_NEAR(total, 1.0, 1e-12);
            }
        }
}

TEST(BeliefSet, PosteriorCandidatesStayInsideSupport) {
    auto m = build_k_out_of_n(2, 0.95);
    auto set = enumerate_one_step_beliefs(m);
    for (std::size_t p = 0; p < set.num_posteriors(); ++p) {
        const auto& post = set.posterior(static_cast<int>(p));
        for (int j : set.posterior_candidates(static_cast<int>(p)))
            for (const auto& e : set.belief(j).entries()) EXPECT_GT(post[e.index], 0.0);
    }
}

TEST(Environments, Registry) {
    for (const auto& n : builtin_environment_names()) EXPECT_NO_THROW(build_environment(n));
    EXPECT_EQ(build_environment("KofN(2)").num_states(), 16);
    EXPECT_EQ(build_environment("kofn3").num_states(), 64);
    EXPECT_THROW(build_environment("rocksample"), UsageError);
    EXPECT_THROW(build_tiger(1.0), UsageError);
}

TEST(Environments, GridShape) {
    auto m = build_grid(0.95);
    EXPECT_EQ(m.num_states(), 36);
    EXPECT_EQ(m.num_actions(), 5);
    EXPECT_EQ(m.num_observations(), 6);
    // Moving up from the bottom-left: 0.6 up, 0.1 right, and the rest stays or bumps the walls.
    EXPECT_NEAR(m.transition_probability(0, 1, 6), 0.6, 1e-12);
    EXPECT_NEAR(m.transition_probability(0, 1, 1), 0.1, 1e-12);
    EXPECT_NEAR(m.transition_probability(0, 1, 0), 0.3, 1e-12);
    EXPECT_NEAR(m.reward(34, 4), 0.6, 1e-12);
}
