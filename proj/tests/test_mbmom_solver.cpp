#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace mbmom;
using namespace mbmom::testing;

namespace {

ValidatedModel two_by_two(IntVector N) {
    return make_model({{q("3/2"), 2}, {5, q("1/3")}}, {q("1/2"), q("3/4")}, {1, 1}, std::move(N));
}

std::vector<IntVector> bases(const RecursionTree& t) {
    std::vector<IntVector> out;
    for (const auto& n : t.nodes) out.push_back(n.base);
    return out;
}

}  // namespace

TEST(Tree, SingleBranchIsAPath) {
    auto m = make_model({{1}, {2}, {3}}, {0}, {1, 1, 1}, {1});
    auto t = build_tree(m, 1);
    EXPECT_EQ(bases(t), (std::vector<IntVector>{{1, 1, 1}, {1, 1, 0}, {1, 0, 0}}));
    EXPECT_EQ(t.nodes[0].gce_queues, (std::vector<std::size_t>{2}));
    EXPECT_EQ(t.nodes[1].gce_queues, (std::vector<std::size_t>{1}));
    EXPECT_TRUE(t.nodes[2].leaf);
    EXPECT_EQ(t.order, (std::vector<std::size_t>{1, 0}));
}

TEST(Tree, FullBranchingHasOneNodePerSubset) {
    auto m = make_model({{1, 1}, {2, 1}, {3, 1}}, {0, 0}, {1, 1, 1}, {1, 1});
    auto t = build_tree(m, 3);
    ASSERT_EQ(t.nodes.size(), 7u);
    int by_depth[3] = {0, 0, 0};
    for (const auto& n : t.nodes) {
        ++by_depth[n.depth];
        EXPECT_EQ(n.depth, 3 - total(n.base));
        EXPECT_EQ(n.leaf, n.depth == 2);
        if (!n.leaf) {
            EXPECT_EQ(n.level, std::max(1, 2 - static_cast<int>(n.retained.size())));
        }
    }
    EXPECT_EQ(by_depth[0], 1);
    EXPECT_EQ(by_depth[1], 3);
    EXPECT_EQ(by_depth[2], 3);
    // Children are solved before their parents.
    for (std::size_t i = 0; i < t.order.size(); ++i) {
        for (std::size_t c : t.nodes[t.order[i]].children) {
            auto pos = std::find(t.order.begin(), t.order.end(), c);
            if (pos != t.order.end()) {
                EXPECT_LT(pos - t.order.begin(), static_cast<long>(i));
            }
        }
    }
}

TEST(Tree, LevelsFollowTheSchedule) {
    auto m = make_model({{1, 1, 1, 1, 1}, {2, 1, 1, 1, 1}, {3, 1, 1, 1, 1}}, {0, 0, 0, 0, 0}, {1, 1, 1},
                        {1, 1, 1, 1, 1});
    for (std::size_t B : {1u, 3u}) {
        auto t = build_tree(m, B);
        LevelSchedule schedule{3, 5, static_cast<long>(B)};
        for (const auto& n : t.nodes) {
            if (!n.leaf) {
                EXPECT_EQ(n.level, schedule.level(n.depth));
            }
        }
    }
}

TEST(Tree, SingleQueueAndBadBranching) {
    auto m = make_model({{1, 2}}, {0, 0}, {3}, {1, 1});
    auto t = build_tree(m, 1);
    EXPECT_EQ(t.nodes.size(), 1u);
    EXPECT_TRUE(t.nodes[0].children.empty());
    EXPECT_THROW(build_tree(m, 2), std::invalid_argument);
    EXPECT_THROW(build_tree(m, 0), std::invalid_argument);
}

TEST(Tree, ReplicatedQueuesShareNodesByMultiplicity) {
    auto m = make_model({{1}, {2}}, {0}, {2, 1}, {1});
    auto t = build_tree(m, 2);
    // (2,1) -> (1,1), (2,0); (1,1) -> (0,1), (1,0); (2,0) is a leaf.
    EXPECT_EQ(t.nodes.size(), 5u);
    EXPECT_EQ(t.nodes[0].children.size(), 2u);
}

TEST(MbSystem, ReducedSystemOfTwoQueuesTwoClasses) {
    auto m = two_by_two({3, 2});
    const ExactScalar D11 = m.D(0, 0), D12 = m.D(0, 1), D21 = m.D(1, 0), D22 = m.D(1, 1);
    const ExactScalar Z1 = m.Z(0), Z2 = m.Z(1);
    const ExactScalar N1 = 3, N2 = 2;
    auto d = [&](int z, int k, int s) { return (m.m(k - 1) + z) * m.D(k - 1, s - 1); };

    for (std::size_t B : {1u, 2u}) {
        auto tree = build_tree(m, B);
        auto sys = build_mb_system(m, tree, 0, {3, 2});
        // Columns: G^{+1}, G^{+1}_1, G^{+2}, G^{+2}_1, G, G_1
        ExactMatrix wantA{
            {1, -D11, 0, 0, -1, 0},
            {0, 0, 1, -D21, -1, 0},
            {1, -D21, 0, 0, 0, 0},
            {0, -d(0, 1, 1), 0, -d(0, 2, 1), N1, -Z1},
            {0, 0, 0, 0, N2, 0},
            {0, 0, 0, 0, 0, N2},
        };
        ExactMatrix wantB{
            {D12, 0, 0, 0, 0, 0},
            {0, 0, D22, 0, 0, 0},
            {D22, 0, 0, 0, 0, 0},
            {0, 0, 0, 0, 0, 0},
            {d(0, 1, 2), 0, d(0, 2, 2), 0, Z2, 0},
            {0, d(0, 1, 2), 0, d(0, 2, 2), 0, Z2},
        };
        EXPECT_EQ(sys.A, wantA) << "B=" << B;
        EXPECT_EQ(sys.B, wantB) << "B=" << B;
        ASSERT_EQ(sys.rows.size(), 6u);
        EXPECT_EQ(sys.rows[2].kind, RelationKind::GCE);
        EXPECT_EQ(sys.rows[2].index, 1u);
        EXPECT_EQ(sys.rows[2].anchor, (GIndex{{2, 1}, {3, 2}}));

        ASSERT_EQ(sys.assembly.terms.size(), 1u);
        const auto& ext = sys.assembly.terms[0];
        EXPECT_EQ(ext.row, 2u);
        EXPECT_EQ(ext.coeff, 1);
        // Two copies of queue 1, queue 2 removed.
        EXPECT_EQ(ext.idx, (GIndex{{2, 0}, {3, 2}}));
        ASSERT_NE(ext.child, kNoNode);
        EXPECT_TRUE(tree.nodes[ext.child].leaf);

        ExactVector vminus = assemble_vminus(m, sys, {});
        EXPECT_EQ(vminus, (ExactVector{0, 0, g_convolution(m, ext.idx), 0, 0, 0}));
    }
}

TEST(MbSystem, OracleSubstitutionLeavesNoResidual) {
    std::mt19937 rng(59);
    for (int trial = 0; trial < 25; ++trial) {
        auto m = random_generic_model(rng, 1 + trial % 3, 1 + (trial / 3) % 3, 3);
        IntVector N = m.population();
        for (auto& n : N) n += 1;
        auto model = with_population(m, N);
        for (std::size_t B : {std::size_t{1}, m.M()}) {
            auto tree = build_tree(model, B);
            TreeSolver solver(model, tree);
            for (std::size_t id : tree.order) {
                auto sys = solver.system(id, N);
                const auto& lay = solver.layout(id);
                const auto& node = tree.nodes[id];
                auto value = [&](std::size_t pos, const IntVector& anchor) {
                    const auto e = lay.entry(pos);
                    return g_convolution(model, {node_mult(node, e.delta), lay.population(anchor, e.variant)});
                };
                ExactVector cur, prev;
                for (std::size_t p : sys.unknowns) cur.push_back(value(p, N));
                for (std::size_t p = 0; p < lay.core_size(); ++p) prev.push_back(value(p, N - unit(model.R(), model.R() - 1)));

                std::map<std::size_t, ExactVector> children;
                for (std::size_t c : node.children) {
                    if (tree.nodes[c].leaf) continue;
                    const auto& clay = solver.layout(c);
                    ExactVector v;
                    for (std::size_t p = 0; p < clay.size(); ++p) {
                        const auto e = clay.entry(p);
                        v.push_back(g_convolution(model, {node_mult(tree.nodes[c], e.delta), clay.population(N, e.variant)}));
                    }
                    children[c] = std::move(v);
                }
                ExactVector vminus = assemble_vminus(model, sys, children);
                ExactVector lhs = matvec(sys.A, cur);
                ExactVector rhs = matvec(sys.B, prev);
                for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += vminus[i];
                EXPECT_EQ(lhs, rhs);
            }
        }
    }
}

TEST(MbSystem, RootOrderShrinks) {
    auto m = two_by_two({2, 2});
    EXPECT_EQ(build_mb_system(m, build_tree(m, 2), 0, {2, 2}).A.rows(), 6u);
    EXPECT_EQ(build_mom_system(m, BasisLayout(2, 2, 2), {2, 2}).first.rows(), 10u);
    auto big = make_model({{1, 2, 3}, {2, 3, 5}, {7, 1, 2}}, {0, 0, 0}, {1, 1, 1}, {2, 2, 2});
    EXPECT_EQ(build_mb_system(big, build_tree(big, 3), 0, {2, 2, 2}).A.rows(),
              BasisLayout(3, 3, min_level(3, 3, 3)).core_size());
}

TEST(MbSolve, AgreesWithMomAndConvolution) {
    auto m = two_by_two({2, 2});
    auto a = mbmom_solve(m, 1);
    auto b = mbmom_solve(m, 2);
    auto ref = mom_solve(m);
    EXPECT_EQ(a.current.values, b.current.values);
    for (std::size_t i = 0; i < a.current.values.size(); ++i) {
        const GIndex g = entry_index(a, i);
        EXPECT_EQ(a.current.values[i], g_convolution(m, g)) << g;
        EXPECT_EQ(a.current.values[i], ref.g(g)) << g;
    }
    EXPECT_EQ(a.stats.max_order, 6u);
    EXPECT_EQ(ref.stats.max_order, 10u);
}

TEST(MbSolve, ThreeQueuesThreeClasses) {
    std::mt19937 rng(61);
    auto m = random_generic_model(rng, 3, 3, 0);
    m = with_population(m, {3, 3, 3});
    auto s = mbmom_solve(m, 3);
    for (std::size_t i = 0; i < s.current.values.size(); ++i) {
        EXPECT_EQ(s.current.values[i], g_convolution(m, entry_index(s, i))) << entry_index(s, i);
    }
    EXPECT_EQ(s.stats.fallbacks, 0u);
}

TEST(MbSolve, GenericDemandsNeverFallBack) {
    std::mt19937 rng(67);
    for (int trial = 0; trial < 40; ++trial) {
        auto m = random_generic_model(rng, 1 + trial % 3, 1 + (trial / 3) % 3, 4);
        for (std::size_t B = 1; B <= m.M(); ++B) {
            auto s = mbmom_solve(m, B);
            EXPECT_EQ(s.stats.fallbacks, 0u);
            EXPECT_EQ(s.normalizing_constant(), g_convolution(m, {m.multiplicities(), m.population()}));
        }
        EXPECT_EQ(mom_solve(m).stats.fallbacks, 0u);
    }
}

TEST(MbSolve, SharedDemandValuesUseTheFallback) {
    // Equal class-1 demands make the step systems singular; the convolution
    // fallback keeps the result exact and is reported.
    auto m = make_model({{2, 1}, {2, 3}}, {0, 0}, {1, 1}, {2, 2});
    auto s = mbmom_solve(m, 2);
    EXPECT_GT(s.stats.fallbacks, 0u);
    EXPECT_EQ(s.stats.diagnostics.size(), s.stats.fallbacks);
    for (std::size_t i = 0; i < s.current.values.size(); ++i) {
        EXPECT_EQ(s.current.values[i], g_convolution(m, entry_index(s, i)));
    }
}

TEST(MbSolve, EmptyPopulationAndIntermediateBranching) {
    auto m = make_model({{1, 2}, {2, 3}, {5, 7}}, {1, 0}, {1, 1, 1}, {0, 0});
    EXPECT_EQ(mbmom_solve(m, 3).normalizing_constant(), 1);
    auto n = with_population(m, {2, 3});
    EXPECT_EQ(mbmom_solve(n, 2).normalizing_constant(), g_convolution(n, {{1, 1, 1}, {2, 3}}));
}
