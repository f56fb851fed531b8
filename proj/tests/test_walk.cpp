#include <doctest.h>

#include <cmath>

#include "rwlab/generators.hpp"
#include "rwlab/walk.hpp"
#include "support/oracles.hpp"

using namespace rwlab;

namespace {

RestrictedWalk arc_walk(const Graph& g, Vertex from, Vertex to) {
    std::vector<Vertex> members;
    for (Vertex v = from; v <= to; ++v) members.push_back(v);
    return RestrictedWalk(g, VertexSubset(g, members));
}

} // namespace

TEST_CASE("restricted transition rows") {
    auto path = standard_graph(StandardKind::path, {3});

    RestrictedWalk singleton(path, VertexSubset(path, {1}));
    auto row = singleton.transition(1);
    CHECK(row.at_vertex(1) == doctest::Approx(1.0));

    auto whole = RestrictedWalk::whole_graph(path);
    auto from_mid = whole.transition(1);
    CHECK(from_mid.at_vertex(0) == doctest::Approx(0.5));
    CHECK(from_mid.at_vertex(2) == doctest::Approx(0.5));
    CHECK(from_mid.at_vertex(1) == doctest::Approx(0.0));

    // S = {a, b} on the path a-b-c: from b, hold 1/2 (c excluded), move 1/2.
    RestrictedWalk ab(path, VertexSubset(path, {0, 1}));
    auto from_b = ab.transition(1);
    CHECK(from_b.at_vertex(1) == doctest::Approx(0.5));
    CHECK(from_b.at_vertex(0) == doctest::Approx(0.5));
    CHECK(ab.hold_probability(1) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ab.transition(2), std::invalid_argument);

    from_b.validate();
}

TEST_CASE("stationary measure") {
    auto cyc = standard_graph(StandardKind::cycle, {8});
    auto w = RestrictedWalk::whole_graph(cyc);
    auto pi = w.stationary();
    for (Vertex v = 0; v < 8; ++v) CHECK(pi.at_vertex(v) == doctest::Approx(1.0 / 8).epsilon(1e-12));

    auto path = standard_graph(StandardKind::path, {3});
    auto pw = RestrictedWalk::whole_graph(path);
    auto ppi = pw.stationary();
    CHECK(ppi.at_vertex(0) == doctest::Approx(0.25));
    CHECK(ppi.at_vertex(1) == doctest::Approx(0.5));
    CHECK(ppi.at_vertex(2) == doctest::Approx(0.25));

    // pi P = pi on a cycle arc, against the dense oracle.
    auto arc = arc_walk(cyc, 0, 4);
    auto api = arc.stationary();
    Eigen::VectorXd v(5);
    for (int i = 0; i < 5; ++i) v[i] = api.probabilities()[static_cast<size_t>(i)];
    Eigen::VectorXd after = oracle::dense_pushforward(arc, v, 1);
    for (int i = 0; i < 5; ++i) CHECK(after[i] == doctest::Approx(v[i]).epsilon(1e-12));

    auto evolved = exact_pushforward(arc, api, 7);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(evolved.probabilities()[i] == doctest::Approx(api.probabilities()[i]).epsilon(1e-12));
    }
}

TEST_CASE("detailed balance holds for every restricted walk") {
    auto torus = standard_graph(StandardKind::torus, {5, 5});
    CHECK(verify_detailed_balance(RestrictedWalk::whole_graph(torus)));
    CounterRng rng(4, 0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vertex> members;
        for (Vertex v = 0; v < torus.vertex_count(); ++v) {
            if (rng.next_bit()) members.push_back(v);
        }
        if (members.empty()) continue;
        CHECK(verify_detailed_balance(RestrictedWalk(torus, VertexSubset(torus, members))));
    }
}

TEST_CASE("exact pushforward") {
    auto c4 = standard_graph(StandardKind::cycle, {4});
    auto w = RestrictedWalk::whole_graph(c4);
    auto start = DistributionVector::point_mass(w.subset_ptr(), 0);

    auto same = exact_pushforward(w, start, 0);
    CHECK(same.at_vertex(0) == doctest::Approx(1.0));

    auto two = exact_pushforward(w, start, 2);
    CHECK(two.at_vertex(0) == doctest::Approx(0.5));
    CHECK(two.at_vertex(2) == doctest::Approx(0.5));
    CHECK(two.at_vertex(1) == doctest::Approx(0.0));

    // Against the dense oracle on a random subset of a grid.
    auto grid = standard_graph(StandardKind::grid, {6, 6});
    CounterRng rng(9, 0);
    std::vector<Vertex> members;
    for (Vertex v = 0; v < grid.vertex_count(); ++v) {
        if (rng.next_bit()) members.push_back(v);
    }
    RestrictedWalk rw(grid, VertexSubset(grid, members));
    auto init = DistributionVector::point_mass(rw.subset_ptr(), members[0]);
    Eigen::VectorXd dense = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(members.size()));
    dense[0] = 1.0;
    auto mine = exact_pushforward(rw, init, 5);
    auto theirs = oracle::dense_pushforward(rw, dense, 5);
    for (size_t i = 0; i < members.size(); ++i) {
        CHECK(mine.probabilities()[i] ==
              doctest::Approx(theirs[static_cast<Eigen::Index>(i)]).epsilon(1e-12));
    }

    WalkCaps tiny;
    tiny.pushforward_states = 4;
    CHECK_THROWS_AS(exact_pushforward(rw, init, 1, tiny), cap_exceeded);
}

TEST_CASE("trajectory sampling determinism and law") {
    auto c4 = standard_graph(StandardKind::cycle, {4});
    auto w = RestrictedWalk::whole_graph(c4);

    auto a = sample_trajectories(w, WalkStart::at(0), 16, 3, 123);
    auto b = sample_trajectories(w, WalkStart::at(0), 16, 3, 123);
    REQUIRE(a.size() == 3);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].vertices == b[i].vertices);
        CHECK(a[i].index == i);
    }
    // Adjacent-or-equal steps only.
    for (const auto& traj : a) {
        for (size_t s = 1; s < traj.vertices.size(); ++s) {
            auto d = distance(c4, traj.vertices[s - 1], traj.vertices[s]);
            CHECK(d <= 1);
        }
    }

    RestrictedWalk singleton(c4, VertexSubset(c4, {2}));
    auto consts = sample_trajectories(singleton, WalkStart::stationary(), 5, 2, 7);
    for (const auto& traj : consts) {
        for (Vertex v : traj.vertices) CHECK(v == 2);
    }

    // Empirical two-step return probability matches the exact pushforward.
    int64_t returns = 0;
    const int64_t n = 100'000;
    for_each_trajectory(w, WalkStart::at(0), 2, n, 99, [&](const Trajectory& t) {
        if (t.vertices[2] == 0) ++returns;
    });
    double p = static_cast<double>(returns) / n;
    double sigma = std::sqrt(0.5 * 0.5 / n);
    CHECK(std::abs(p - 0.5) <= 3 * sigma);
}

TEST_CASE("mean-square displacement") {
    auto c4 = standard_graph(StandardKind::cycle, {4});
    auto w = RestrictedWalk::whole_graph(c4);
    CHECK(msd_exact(w, 0, 0).value == doctest::Approx(0.0));
    CHECK(msd_exact(w, 0, 2).value == doctest::Approx(2.0));  // d^2 in {0,4} each w.p. 1/2

    auto torus = standard_graph(StandardKind::torus, {16, 16});
    auto tw = RestrictedWalk::whole_graph(torus);
    auto exact = msd_exact(tw, 0, 32);
    auto mc = msd_monte_carlo(tw, WalkStart::at(0), 32, 20'000, 555);
    CHECK(std::abs(mc.value - exact.value) <= 3 * mc.stderr_);

    // MSD never exceeds t^2.
    for (int64_t t : {1, 2, 4, 8}) {
        CHECK(msd_exact(tw, 5, t).value <= static_cast<double>(t) * static_cast<double>(t) + 1e-9);
    }

    // Odd-time comparison: E d^2(Z_0,Z_n) <= (sqrt(E d^2(Z_0,Z_{n+1})) + 1)^2.
    for (int64_t t : {1, 3, 5, 7}) {
        double odd = msd_exact(tw, 3, t).value;
        double even = msd_exact(tw, 3, t + 1).value;
        CHECK(odd <= (std::sqrt(even) + 1.0) * (std::sqrt(even) + 1.0) + 1e-9);
    }

    // Grid evaluation matches pointwise evaluation.
    auto grid = msd_exact_grid(tw, 0, {1, 4, 32});
    CHECK(grid[2].value == doctest::Approx(exact.value).epsilon(1e-12));
}

TEST_CASE("restricted and simple walks agree before the boundary is felt") {
    auto torus = standard_graph(StandardKind::torus, {16, 16});
    Vertex center = 8 * 16 + 8;
    auto ball = bfs_ball(torus, center, 6);
    RestrictedWalk inside(torus, ball.to_subset(torus));
    auto whole = RestrictedWalk::whole_graph(torus);

    auto a = exact_pushforward(inside, DistributionVector::point_mass(inside.subset_ptr(), center), 3);
    auto b = exact_pushforward(whole, DistributionVector::point_mass(whole.subset_ptr(), center), 3);
    for (Vertex v : inside.subset().members()) {
        CHECK(a.at_vertex(v) == doctest::Approx(b.at_vertex(v)).epsilon(1e-12));
    }
}

TEST_CASE("entropy basics and the stationary chain rule") {
    auto c8 = standard_graph(StandardKind::cycle, {8});
    auto w = RestrictedWalk::whole_graph(c8);
    auto point = DistributionVector::point_mass(w.subset_ptr(), 3);
    CHECK(entropy(point) == doctest::Approx(0.0));
    CHECK(entropy(w.stationary()) == doctest::Approx(std::log(8.0)).epsilon(1e-12));

    // H(Z_1, Z_t) - H(Z_1) = H(Z_{t-1} | Z_0) for the stationary walk.
    for (int64_t t = 2; t <= 6; ++t) {
        double joint = joint_entropy_stationary(w, t);
        double h1 = entropy(w.stationary());
        double cond = conditional_entropy_from_stationary(w, t - 1);
        CHECK(std::abs(joint - h1 - cond) <= 1e-9);
    }

    auto grid = standard_graph(StandardKind::grid, {6, 6});
    auto gw = RestrictedWalk::whole_graph(grid);
    for (int64_t t = 2; t <= 6; ++t) {
        double joint = joint_entropy_stationary(gw, t);
        double h1 = entropy(gw.stationary());
        double cond = conditional_entropy_from_stationary(gw, t - 1);
        CHECK(std::abs(joint - h1 - cond) <= 1e-9);
    }
}

TEST_CASE("hitting times") {
    auto p2 = standard_graph(StandardKind::path, {2});
    CHECK(hitting_time_max(p2) == doctest::Approx(1.0).epsilon(1e-9));

    auto c4 = standard_graph(StandardKind::cycle, {4});
    CHECK(hitting_time_max(c4) == doctest::Approx(4.0).epsilon(1e-9));  // k(n-k) at k=2

    auto k4 = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(hitting_time_max(k4) == doctest::Approx(3.0).epsilon(1e-9));

    auto c12 = standard_graph(StandardKind::cycle, {12});
    double h = hitting_time_max(c12);
    CHECK(h == doctest::Approx(36.0).epsilon(1e-9));  // k(n-k) at k=6
    CHECK(h <= 2.0 * 2 * 12 * 12);

    WalkCaps tiny;
    tiny.linear_solve_states = 3;
    CHECK_THROWS_AS(hitting_time_max(c4, tiny), cap_exceeded);
}

TEST_CASE("mixing times") {
    auto k4 = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(mixing_time_tv(k4, 0.25, false) == 1);

    auto c4 = standard_graph(StandardKind::cycle, {4});
    CHECK_THROWS_AS(mixing_time_tv(c4, 0.25, false), std::domain_error);
    CHECK(mixing_time_tv(c4, 0.25, true) >= 1);

    // Expander mixing grows like log n: the fitted constant is stable
    // across a size doubling.
    std::vector<int64_t> tmix;
    for (Vertex n : {64, 128, 256}) {
        ExpanderSpec spec;
        spec.n = n;
        spec.seed = 1000 + static_cast<uint64_t>(n);
        spec.spectral_gap_threshold = 0.98;
        auto res = random_regular_expander(spec);
        tmix.push_back(mixing_time_tv(res.graph, 0.25, false));
    }
    CHECK(tmix[0] >= 1);
    CHECK(tmix[2] >= tmix[0]);
    double c64 = static_cast<double>(tmix[0]) / std::log(64.0);
    double c256 = static_cast<double>(tmix[2]) / std::log(256.0);
    CHECK(c256 <= 2.0 * c64 + 1.0);
}

TEST_CASE("escape statistics") {
    RootedGraph dot{Graph::from_edges(1, {}), 0, {}, {}};
    auto one = escape_statistics(dot, 4, 100, 1);
    CHECK(one.p_root_visited == doctest::Approx(1.0));
    CHECK(one.msd_root_avoided == doctest::Approx(0.0));

    // Long cycle, short horizon: only starts within distance t of the root
    // can see it, so the visit probability is at most (2t+1)/N plus noise.
    RootedGraph cyc{standard_graph(StandardKind::cycle, {1000}), 0, {}, {}};
    auto far = escape_statistics(cyc, 10, 4000, 2);
    CHECK(far.p_root_visited <= 21.0 / 1000.0 + 3 * far.p_root_visited_stderr + 1e-12);
    CHECK(far.msd_root_avoided > 0.0);
    CHECK(far.n_samples == 4000);
}
