#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "rwlab/embed.hpp"
#include "rwlab/generators.hpp"
#include "support/oracles.hpp"

using namespace rwlab;

TEST_CASE("enumeration oracle on tiny paths") {
    auto path3 = standard_graph(StandardKind::path, {3});
    auto g3 = VertexSubset::all(path3);
    auto v = exact_pair_distance_sq(path3, g3, 2.0, 0, 2);
    CHECK(v.numerator == 1);
    CHECK(v.denominator == 2);

    CHECK(exact_pair_distance_sq(path3, g3, 2.0, 1, 1).value == doctest::Approx(0.0));

    // Frozen by hand: 24 carving orders, R in [1,2) has no breakpoints,
    // endpoint pair of the 4-path averages to 8/3.
    auto path4 = standard_graph(StandardKind::path, {4});
    auto g4 = VertexSubset::all(path4);
    auto w = exact_pair_distance_sq(path4, g4, 4.0, 0, 3);
    CHECK(w.numerator == 8);
    CHECK(w.denominator == 3);

    CHECK_THROWS_AS(
        exact_pair_distance_sq(standard_graph(StandardKind::path, {7}),
                               VertexSubset::all(standard_graph(StandardKind::path, {7})), 2.0, 0, 6),
        std::invalid_argument);
}

TEST_CASE("monte carlo ensembles agree with the oracle") {
    struct Fixture {
        std::vector<int64_t> dims;
        double tau;
        Vertex x, y;
    };
    std::vector<Fixture> fixtures{
        {{3}, 2.0, 0, 2},
        {{4}, 4.0, 0, 3},
        {{5}, 4.0, 0, 4},
        {{5}, 8.0, 1, 3},
    };
    for (const auto& fx : fixtures) {
        auto g = standard_graph(StandardKind::path, fx.dims);
        auto ground = VertexSubset::all(g);
        auto exact = exact_pair_distance_sq(g, ground, fx.tau, fx.x, fx.y);
        auto ensemble = threshold_map(g, ground, fx.tau, 10'000, 17);
        auto [mean, se] = ensemble.distance_sq_with_stderr(fx.x, fx.y);
        INFO("fixture tau=", fx.tau, " pair=", fx.x, ",", fx.y);
        CHECK(std::abs(mean - exact.value) <= 3 * se + 1e-9);
    }
}

TEST_CASE("ensembles are 1-Lipschitz") {
    auto cyc = standard_graph(StandardKind::cycle, {24});
    auto ground = VertexSubset::all(cyc);
    auto ensemble = threshold_map(cyc, ground, 8.0, 300, 23);
    auto dm = oracle::all_pairs_distances(cyc);
    for (Vertex x = 0; x < 24; ++x) {
        for (Vertex y = 0; y < 24; ++y) {
            double d2 = ensemble.distance_sq(x, y);
            CHECK(d2 <= static_cast<double>(dm[x][y] * dm[x][y]) + 1e-9);
        }
    }
}

TEST_CASE("separation at scale on the 64-cycle") {
    auto cyc = standard_graph(StandardKind::cycle, {64});
    auto ground = VertexSubset::all(cyc);
    const double tau = 8.0;
    auto ensemble = threshold_map(cyc, ground, tau, 2000, 29);

    // Half of the guaranteed separation sqrt(delta)/2 * eps * tau with
    // delta = 1/2.
    double eps = padding_epsilon(cyc, ground, tau, 0);
    double target = 0.5 * (std::sqrt(0.5) / 2.0) * eps * tau;

    int64_t pairs = 0, good = 0;
    for (Vertex x = 0; x < 64; ++x) {
        for (Vertex y = static_cast<Vertex>(x + 1); y < 64; ++y) {
            if (distance(cyc, x, y) < tau) continue;
            ++pairs;
            if (std::sqrt(ensemble.distance_sq(x, y)) >= target) ++good;
        }
    }
    REQUIRE(pairs > 0);
    CHECK(static_cast<double>(good) / static_cast<double>(pairs) >= 0.99);
}

TEST_CASE("scale family") {
    auto torus = standard_graph(StandardKind::torus, {12, 12});
    auto ground = VertexSubset::all(torus);
    auto family = scale_family(torus, ground, 2, 40, 31);
    REQUIRE(family.size() == 2);
    CHECK(family[0].tau() == doctest::Approx(8.0));
    CHECK(family[1].tau() == doctest::Approx(64.0));

    // Scale 64 exceeds the diameter (12), so no pair triggers the
    // separation requirement: vacuously fine, and the map stays Lipschitz.
    auto dm = oracle::all_pairs_distances(torus);
    int64_t far_pairs = 0;
    for (Vertex x = 0; x < torus.vertex_count(); ++x) {
        for (Vertex y = 0; y < torus.vertex_count(); ++y) {
            if (dm[x][y] >= 64) ++far_pairs;
            CHECK(family[1].distance_sq(x, y) <= static_cast<double>(dm[x][y] * dm[x][y]) + 1e-9);
        }
    }
    CHECK(far_pairs == 0);

    // Separation target exploits the ball-size bracketing at tau = 8^k.
    double t = colipschitz_target(torus, 0, 1);
    CHECK(t == doctest::Approx(8.0 / (128.0 * (1.0 + growth_profile(torus, 0, 1)))));
}

TEST_CASE("degenerate ground") {
    auto dot = Graph::from_edges(1, {});
    auto ground = VertexSubset::all(dot);
    auto e = threshold_map(dot, ground, 4.0, 1, 3);
    CHECK(e.distance_sq(0, 0) == doctest::Approx(0.0));
    auto c = e.coords_of(0);
    CHECK(c[0] == 0.0f);
}

TEST_CASE("ensemble serialization round trip") {
    auto path = standard_graph(StandardKind::path, {12});
    auto ground = VertexSubset::all(path);
    auto e = threshold_map(path, ground, 4.0, 25, 37);

    auto dir = std::filesystem::temp_directory_path() / "rwlab_test_ensemble";
    std::filesystem::create_directories(dir);
    save_ensemble(dir / "e", e);
    auto back = load_ensemble(dir / "e", path);

    CHECK(back.tau() == e.tau());
    CHECK(back.sample_count() == e.sample_count());
    for (Vertex v = 0; v < 12; ++v) {
        auto a = e.coords_of(v);
        auto b = back.coords_of(v);
        for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
    for (size_t i = 0; i < e.provenance().size(); ++i) {
        CHECK(e.provenance()[i].perm_digest == back.provenance()[i].perm_digest);
        CHECK(e.provenance()[i].bernoulli_digest == back.provenance()[i].bernoulli_digest);
    }
    std::filesystem::remove_all(dir);
}
