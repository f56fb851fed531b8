#include <doctest.h>

#include <cmath>

#include "rwlab/generators.hpp"
#include "rwlab/scales.hpp"
#include "support/oracles.hpp"

using namespace rwlab;

TEST_CASE("scale window") {
    auto w1 = ScaleWindow::for_time(1);
    CHECK(w1.k_lo == 1);
    CHECK(w1.k_hi == 1);
    for (int64_t n : {1, 2, 7, 32, 100, 5000, 1 << 20}) {
        auto w = ScaleWindow::for_time(n);
        CHECK(w.k_lo <= w.k_hi);
        CHECK(pow8(w.k_lo) * pow8(w.k_lo) >= 2 * n);          // 8^k >= sqrt(2n)
        CHECK(pow8(w.k_hi) >= 2 * n);
        if (w.k_lo > 1) CHECK(pow8(w.k_lo - 1) * pow8(w.k_lo - 1) < 2 * n);
    }
}

TEST_CASE("martingale decomposition: constant map") {
    auto c8 = standard_graph(StandardKind::cycle, {8});
    auto w = RestrictedWalk::whole_graph(c8);
    auto traj = sample_trajectories(w, WalkStart::stationary(), 8, 1, 3)[0];
    PointFn constant = [](Vertex) { return std::vector<double>{2.5}; };
    auto dec = martingale_decompose(traj, constant, w);
    CHECK(dec.max_increment_norm == doctest::Approx(0.0));
    CHECK(dec.identity_residual <= 1e-12);
    CHECK(dec.endpoint_difference[0] == doctest::Approx(0.0));
}

TEST_CASE("martingale decomposition: carved coordinate on the cycle") {
    auto c8 = standard_graph(StandardKind::cycle, {8});
    auto w = RestrictedWalk::whole_graph(c8);
    auto ground = std::make_shared<const VertexSubset>(VertexSubset::all(c8));
    auto f = sample_coordinate_map(c8, *ground, 4.0, 91);
    auto pf = point_fn_of(f, ground);

    for (uint64_t s = 0; s < 50; ++s) {
        auto traj = sample_trajectories(w, WalkStart::stationary(), 8, 1, 100 + s)[0];
        auto dec = martingale_decompose(traj, pf, w);
        CHECK(dec.identity_residual <= 1e-12);
        CHECK(dec.max_increment_norm <= 2.0 + 1e-12);  // Lip <= 1
        REQUIRE(dec.forward_increments.size() == 4);
        REQUIRE(dec.backward_increments.size() == 4);
    }
    CHECK_THROWS_AS(
        martingale_decompose(sample_trajectories(w, WalkStart::at(0), 7, 1, 1)[0], pf, w),
        std::invalid_argument);
}

TEST_CASE("martingale decomposition: planar embedding of the cycle") {
    // Vertices on a circle scaled so adjacent images are at distance 1;
    // chord length never exceeds hop distance.
    const int n = 12;
    auto cyc = standard_graph(StandardKind::cycle, {n});
    auto w = RestrictedWalk::whole_graph(cyc);
    double radius = 0.5 / std::sin(M_PI / n);
    PointFn embed = [radius, n](Vertex v) {
        double a = 2.0 * M_PI * v / n;
        return std::vector<double>{radius * std::cos(a), radius * std::sin(a)};
    };
    for (uint64_t s = 0; s < 30; ++s) {
        auto traj = sample_trajectories(w, WalkStart::stationary(), 10, 1, 500 + s)[0];
        auto dec = martingale_decompose(traj, embed, w);
        CHECK(dec.identity_residual <= 1e-12);
        CHECK(dec.max_increment_norm <= 2.0 + 1e-12);
    }
}

TEST_CASE("azuma tail check") {
    auto torus = standard_graph(StandardKind::torus, {8, 8});
    auto w = RestrictedWalk::whole_graph(torus);
    auto ground = std::make_shared<const VertexSubset>(VertexSubset::all(torus));
    auto f = sample_coordinate_map(torus, *ground, 4.0, 101);
    auto pf = point_fn_of(f, ground);

    int64_t n = 4;
    auto table = azuma_tail_check(w, pf, 1.0, n, {0.0, 2.0, 4.0, 100.0}, 4000, 7);
    REQUIRE(table.size() == 4);
    // lambda = 0: every sample exceeds, and the bound is >= 1 anyway.
    CHECK(table[0].empirical == doctest::Approx(1.0));
    CHECK(table[0].bound >= 1.0);
    // lambda beyond 2 n Lip: unreachable.
    CHECK(table[3].empirical == doctest::Approx(0.0));
    for (const auto& row : table) {
        CHECK(row.empirical <= row.bound + 3 * row.stderr_ + 1e-12);
    }
}

TEST_CASE("speed bound: frozen value at n = 1") {
    // Window k = 1 only: 2 + 256 * 64 * exp(-64 / (32 * 128^2)),
    // recomputed independently in long double.
    long double term = 256.0L * 64.0L * std::exp(-64.0L / (32.0L * 128.0L * 128.0L));
    long double expected = 2.0L + term;
    double got = speed_bound_rhs(1, [](int) { return 128.0; });
    CHECK(got == doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
    CHECK(got == doctest::Approx(16384.0333).epsilon(1e-6));
}

TEST_CASE("speed bound: limits and monotonicity") {
    // Vanishing scale function leaves only the 2n term.
    CHECK(speed_bound_rhs(10, [](int) { return 0.0; }) == doctest::Approx(20.0));
    CHECK(speed_bound_rhs(10, [](int) { return 1e-9; }) == doctest::Approx(20.0).epsilon(1e-9));

    // Monotone nondecreasing in the scale function.
    for (double base : {1.0, 8.0, 64.0, 512.0}) {
        double lo = speed_bound_rhs(100, [base](int) { return base; });
        double hi = speed_bound_rhs(100, [base](int) { return base * 2; });
        CHECK(lo <= hi + 1e-9);
    }
}

TEST_CASE("speed bound: bounded profiles give a linear budget") {
    double lambda = 2.0;
    std::vector<double> flat(30, 3.0);
    auto fn = averaged_profile_scale_fn(lambda, flat, 1);
    double fmax = fn(1);
    double c_fit = 0;
    for (int64_t n = 16; n <= 4096; n *= 2) {
        c_fit = std::max(c_fit, speed_bound_rhs(n, fn) / static_cast<double>(n));
    }
    MESSAGE("fitted linear constant c = ", c_fit);
    // Analytic ceiling: each summand is at most 32 n f^2 / e and the
    // summands decay geometrically around the peak.
    CHECK(c_fit <= 2 + 3200.0 * fmax * fmax);
    CHECK(c_fit > 0);
}

TEST_CASE("growth summary on a cycle is symmetric") {
    auto cyc = standard_graph(StandardKind::cycle, {40});
    GrowthSummary s(cyc, VertexSubset::all(cyc), 1, 2);
    for (size_t i = 1; i < s.subset().size(); ++i) {
        CHECK(s.profile_of(i, 1) == doctest::Approx(s.profile_of(0, 1)).epsilon(1e-12));
    }
    // With identical profiles, everything is controlled at lambda >= 1.
    auto mask = s.controlled(1, 1.0);
    for (uint8_t b : mask) CHECK(b == 1);
}

TEST_CASE("growth summary matches a direct double loop") {
    auto torus = standard_graph(StandardKind::torus, {32, 32});
    auto ball = bfs_ball(torus, 0, 10);
    GrowthSummary s(torus, ball.to_subset(torus), 1, 1);

    auto dm = oracle::all_pairs_distances(torus);
    double mu = 0, acc = 0;
    for (Vertex x : ball.vertices) mu += torus.degree(x);
    for (Vertex x : ball.vertices) {
        int64_t b8 = 0, b1 = 0;
        for (Vertex y = 0; y < torus.vertex_count(); ++y) {
            if (dm[x][y] <= 8) ++b8;
            if (dm[x][y] <= 1) ++b1;
        }
        acc += (torus.degree(x) / mu) * std::log(static_cast<double>(b8) / b1);
    }
    CHECK(s.mean_profile(1) == doctest::Approx(acc).epsilon(1e-12));
}

TEST_CASE("uniformly controlled mass bound") {
    auto torus = standard_graph(StandardKind::torus, {16, 16});
    auto h2 = build_hk({{4, 8}, false, 1, 5'000'000}, ExpanderSpec{0, 3, 0.95, 500, 7});
    for (const Graph* g : {&torus, &h2.graph.graph}) {
        auto ball = bfs_ball(*g, 0, 12);
        GrowthSummary s(*g, ball.to_subset(*g), 1, 3);
        for (double lambda : {2.0, 4.0, 8.0}) {
            auto [mask, mass] = s.uniformly_controlled(1, lambda);
            CHECK(mass >= 1.0 - 2.0 / lambda - 1e-12);
        }
    }
}

TEST_CASE("tail-weighted growth") {
    std::vector<double> zeros(10, 0.0);
    CHECK(tail_weighted_growth(zeros, 2) == doctest::Approx(0.0));

    // Constant profile 1: theta(ell) = 2 - 2^{-2 ell}.
    std::vector<double> ones(40, 1.0);
    for (int ell : {1, 2, 3, 4}) {
        CHECK(tail_weighted_growth(ones, ell) ==
              doctest::Approx(2.0 - std::pow(2.0, -2.0 * ell)).epsilon(1e-12));
    }

    // Window sum bound: sum_{ell=h}^{2h} theta(ell) <= 2 sum_{k=h}^{5h} phi(k),
    // on random nonnegative profiles.
    CounterRng rng(13, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        int h = 1 + static_cast<int>(rng.below(5));
        std::vector<double> prof(static_cast<size_t>(6 * h + 2));
        for (double& p : prof) p = rng.next_double();
        double lhs = 0;
        for (int ell = h; ell <= 2 * h; ++ell) lhs += tail_weighted_growth(prof, ell);
        double rhs = 0;
        for (int k = h; k <= 5 * h; ++k) rhs += 2.0 * prof[static_cast<size_t>(k - 1)];
        CHECK(lhs <= rhs + 1e-9);
    }
}

TEST_CASE("temper and insulate on the cycle: closed forms") {
    const int64_t N = 601;
    auto cyc = standard_graph(StandardKind::cycle, {N});
    int64_t n = 8, r = 200;
    double lambda = 2.0;
    auto rep = temper_insulate_check(cyc, 0, n, lambda, r);
    // Shell ratio 4n / (2r + 1), exactly.
    CHECK(rep.shell_ratio == doctest::Approx(4.0 * n / (2.0 * r + 1)).epsilon(1e-12));
    CHECK(rep.insulated == (4.0 * n / (2.0 * r + 1) <= 1.0 / (4 * lambda)));

    auto close = temper_insulate_check(cyc, 0, n, lambda, 2 * n);
    CHECK_FALSE(close.insulated);
    CHECK(close.note.find("shell") != std::string::npos);
}

TEST_CASE("temper verdicts on the torus") {
    auto torus = standard_graph(StandardKind::torus, {48, 48});
    int64_t n = 4;
    auto win = ScaleWindow::for_time(n);
    auto ball = bfs_ball(torus, 0, 20);
    GrowthSummary s(torus, ball.to_subset(torus), win.k_lo, win.k_hi);
    double top = 0;
    for (int k = win.k_lo; k <= win.k_hi; ++k) top = std::max(top, s.mean_profile(k));

    auto good = temper_insulate_check(torus, 0, n, top + 0.5, 20);
    CHECK(good.tempered);
    // First-scale failure: lambda below the first windowed profile.
    double first = s.mean_profile(win.k_lo);
    if (first > 0) {
        auto bad = temper_insulate_check(torus, 0, n, first / 2, 20);
        CHECK_FALSE(bad.tempered);
        CHECK(bad.margins.front() < 0);
    }
}

TEST_CASE("scale scan: averaging and symmetry") {
    auto torus = standard_graph(StandardKind::torus, {40, 40});
    RootedGraph rg{torus, 0, {}, {}};
    ScanConfig cfg;
    cfg.base_radii = {4, 8, 16};
    cfg.radii_per_base = 2;
    cfg.shell_width = 2;
    cfg.ell_grid = {1};
    cfg.n_grid = {64};
    auto res = scan_good_scales(rg, cfg);
    REQUIRE(!res.rows.empty());
    CHECK(res.best.total <= res.grid_mean + 1e-12);

    // Vertex-transitive base: the doubling term per base index is shared by
    // every row of that base.
    for (const auto& row : res.rows) {
        for (const auto& other : res.rows) {
            if (row.base_index == other.base_index) {
                CHECK(row.doubling_term == doctest::Approx(other.doubling_term));
            }
        }
    }
}

TEST_CASE("mass transport inequality") {
    auto grid = standard_graph(StandardKind::grid, {20, 20});

    auto always = mass_transport_check(grid, 3, [](Vertex) { return true; });
    CHECK(always.lhs <= always.rhs + 1e-12);
    CHECK(always.rhs == doctest::Approx(1.0).epsilon(1e-12));

    auto never = mass_transport_check(grid, 3, [](Vertex) { return false; });
    CHECK(never.lhs == doctest::Approx(0.0));
    CHECK(never.rhs == doctest::Approx(0.0));

    CounterRng rng(6, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<uint8_t> pred(grid.vertex_count());
        for (auto& p : pred) p = rng.next_bit() ? 1 : 0;
        for (int64_t R : {2, 4}) {
            auto res = mass_transport_check(grid, R, [&](Vertex v) { return pred[v] != 0; });
            CHECK(res.lhs <= res.rhs + 1e-12);
        }
    }
}

TEST_CASE("graphic Markov type probe") {
    auto grid = standard_graph(StandardKind::grid, {64, 64});
    std::vector<VertexSubset> subsets;
    subsets.push_back(VertexSubset(grid, {100}));  // singleton: contributes zero
    for (int64_t k : {8, 16}) {
        std::vector<Vertex> box;
        for (int64_t r = 1; r <= k; ++r) {
            for (int64_t c = 1; c <= k; ++c) box.push_back(static_cast<Vertex>(r * 64 + c));
        }
        subsets.push_back(VertexSubset(grid, box));
    }
    auto est = graphic_markov_type_probe(grid, subsets, {1, 4, 16, 64});
    for (const auto& row : est.rows) {
        if (row.subset_index == 0) CHECK(row.msd == doctest::Approx(0.0));
    }
    CHECK(est.M > 0.5);
    CHECK(est.M <= 4.0);
}
