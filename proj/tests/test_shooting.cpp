#include <doctest.h>

#include <cmath>

#include "blowlab/cutoff.hpp"
#include "blowlab/errors.hpp"
#include "blowlab/shooting.hpp"

using namespace blowlab;

namespace {
const ModelParams mp5 = ModelParams::derive(5.0, 1.0);

RunConfig fast_config() {
    RunConfig cfg;
    cfg.dy = 0.075;
    cfg.domain_pad = 2.8;
    return cfg;
}
}  // namespace

TEST_CASE("initial data: zero parameters give the zero field") {
    const RunConfig cfg = fast_config();
    const GridField psi = initial_psi(0.0, 0.0, 15.0, 20.0, mp5, cfg);
    CHECK(psi.values.abs().maxCoeff() == 0.0);
}

TEST_CASE("initial data: projections, outer part, gradient bound") {
    const RunConfig cfg = fast_config();
    const double s0 = 15.0, A = 20.0;
    const GridField psi = initial_psi(0.7, -0.4, s0, A, mp5, cfg);
    const ModeDecomposition dec = project_modes(psi, mp5);
    const double amp = A / std::pow(s0, 2.0 * mp5.beta + 1.0);
    // psi_m = d_m amp (1 + O(e^{-s0^{2 beta}}))
    CHECK(dec.v0 == doctest::Approx(0.7 * amp).epsilon(1e-10));
    CHECK(dec.v1 == doctest::Approx(-0.4 * amp).epsilon(1e-10));
    // psi_e == 0: supp chi(2., s0) sits strictly inside {chi = 1}
    CHECK(dec.norm_e == 0.0);
    // gradient bound ||grad psi|| <= C A/s0^{2 beta+1}
    double sup_grad = 0.0;
    for (int j = 1; j + 1 < psi.size(); ++j)
        sup_grad = std::max(sup_grad, std::abs(psi.values[j + 1] - psi.values[j - 1]) /
                                          (2.0 * cfg.dy));
    CHECK(sup_grad <= 5.0 * amp);
    CHECK(sup_grad > 0.0);
}

TEST_CASE("initial data requires room for supp chi(2., s0)") {
    RunConfig cfg = fast_config();
    cfg.domain_pad = 0.4;  // below the K s0^beta support radius
    CHECK_THROWS_AS(initial_psi(1.0, 0.0, 15.0, 20.0, mp5, cfg), DomainError);
}

TEST_CASE("boundary shots exit immediately through the seeded mode") {
    const RunConfig cfg = fast_config();
    const double s0 = 15.0, A = 20.0, window = 2.0;
    SUBCASE("d0 = 2 exits via component 0, positive") {
        const ShotResult r = evaluate_shot(2.0, 0.0, s0, window, A, mp5, cfg, 0.05);
        CHECK(r.exit_component == Component::zero);
        CHECK(r.s_exit == s0);
        CHECK(r.sign_v0 == 1);
        CHECK(r.confined_window == 0.0);
    }
    SUBCASE("d1 = -2 exits via component 1, negative") {
        const ShotResult r = evaluate_shot(0.0, -2.0, s0, window, A, mp5, cfg, 0.05);
        CHECK(r.exit_component == Component::one);
        CHECK(r.s_exit == s0);
        CHECK(r.sign_v1 == -1);
    }
    SUBCASE("slightly outside the diagonal box also exits at s0") {
        const ShotResult r = evaluate_shot(1.001, 0.0, s0, window, A, mp5, cfg, 0.05);
        CHECK(r.s_exit == s0);
        CHECK(r.exit_component == Component::zero);
    }
}

TEST_CASE("transverse crossing holds at recorded exits") {
    const RunConfig cfg = fast_config();
    const double s0 = 15.0, A = 20.0;
    for (auto [d0, d1] : {std::pair{0.0, 0.0}, {0.3, 0.1}, {-0.6, -0.05}, {0.0, 0.8}}) {
        const ShotResult r = evaluate_shot(d0, d1, s0, 3.0, A, mp5, cfg, 0.05);
        if (!r.confined && (r.exit_component == Component::zero ||
                            r.exit_component == Component::one)) {
            const CrossingCheck chk = transverse_crossing(r, mp5);
            CHECK(chk.applicable);
            CHECK(chk.omega_vm_prime > 0.0);
        }
    }
}

TEST_CASE("exits happen through the expanding modes only") {
    const RunConfig cfg = fast_config();
    for (double d0 : {-1.5, -0.5, 0.5, 1.5})
        for (double d1 : {-1.0, 0.5}) {
            const ShotResult r = evaluate_shot(d0, d1, 15.0, 2.0, 20.0, mp5, cfg, 0.05);
            if (!r.confined)
                CHECK((r.exit_component == Component::zero ||
                       r.exit_component == Component::one));
        }
}

TEST_CASE("depth-0 search returns the full rectangle's center") {
    const RunConfig cfg = fast_config();
    const SearchResult res = topological_search(15.0, 1.0, 20.0, mp5, cfg, 0, 0.05, 1);
    CHECK(res.center_d0 == 0.0);
    CHECK(res.center_d1 == 0.0);
    CHECK(res.levels.empty());
    CHECK(!res.degree_lost);
}

TEST_CASE("small search: certificate holds, confinement grows, determinism") {
    const RunConfig cfg = fast_config();
    const SearchResult res = topological_search(15.0, 2.5, 20.0, mp5, cfg, 5, 0.05, 2);
    CHECK(!res.degree_lost);
    REQUIRE(!res.levels.empty());
    // monotone best-confinement log
    for (std::size_t i = 1; i < res.levels.size(); ++i)
        CHECK(res.levels[i].best_confined >= res.levels[i - 1].best_confined - 1e-12);
    // the quadrant choice kept the sign change: best shot outlives the center one
    CHECK(res.best_confined >= res.levels.front().best_confined);
    // rectangle shrinks dyadically
    CHECK(res.levels.back().hi0 - res.levels.back().lo0 ==
          doctest::Approx(4.0 / std::pow(2.0, res.levels.size() - 1)));
    // determinism: identical config reproduces the identical refinement path
    const SearchResult res2 = topological_search(15.0, 2.5, 20.0, mp5, cfg, 5, 0.05, 2);
    CHECK(res2.d0 == res.d0);
    CHECK(res2.d1 == res.d1);
    CHECK(res2.best_confined == res.best_confined);
    for (std::size_t i = 0; i < res.levels.size(); ++i)
        CHECK(res2.levels[i].chosen_quadrant == res.levels[i].chosen_quadrant);
}
