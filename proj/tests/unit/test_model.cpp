#include <doctest.h>

#include "anisoflow/model.hpp"
#include "anisoflow/spectral.hpp"
#include "anisoflow/verify.hpp"
#include "test_support.hpp"

using namespace anisoflow;
using namespace testing;

namespace {

SpectralField sampled(const GridPtr& g, const std::function<double(double, double, double)>& f) {
    return forward_transform(RealField::sample(g, f));
}

}  // namespace

TEST_CASE("leray projection removes the component parallel to k") {
    const auto g = SpectralGrid::cube(8);
    VectorField w = zero_vector(g);
    w[0].set_mode(1, 0, 0, Complex{1.0, 0.0});
    w[1].set_mode(1, 0, 0, Complex{2.0, 0.0});
    w[2].set_mode(1, 0, 0, Complex{3.0, 0.0});
    const VectorField p = leray_project(w);
    CHECK(p[0].at(1, 0, 0) == Complex{0.0, 0.0});
    CHECK(p[1].at(1, 0, 0) == Complex{2.0, 0.0});
    CHECK(p[2].at(1, 0, 0) == Complex{3.0, 0.0});
}

TEST_CASE("leray projection fixes divergence-free fields and kills gradients") {
    const auto g = SpectralGrid::cube(16);
    const FlowState s = random_band_state(g, 7, 0.5);
    const VectorField again = leray_project(s.v);
    for (int i = 0; i < 3; ++i) CHECK(max_abs_diff(again[i], s.v[i]) < 1e-14);

    const SpectralField phi = random_band_state(g, 8, 0.5).psi;
    const VectorField grad{derivative(phi, 1), derivative(phi, 2), derivative(phi, 3)};
    CHECK(max_abs(leray_project(grad)) < 1e-12 * max_abs(grad));

    VectorField mismatched = s.v;
    mismatched[1] = SpectralField(SpectralGrid::cube(8));
    CHECK_THROWS_AS(leray_project(mismatched), std::invalid_argument);
}

TEST_CASE("zero state has zero tendency on both routes") {
    const auto g = SpectralGrid::cube(16);
    const FlowState s = FlowState::zero(g);
    CHECK(max_abs(compute_rhs(s)) == 0.0);
    CHECK(max_abs(compute_rhs_explicit(s)) == 0.0);
    CHECK(max_abs(pressure_solve(s)) == 0.0);
}

TEST_CASE("vertical single mode of psi is projected away") {
    const auto g = SpectralGrid::cube(16);
    FlowState s = FlowState::zero(g);
    s.psi.set_mode(0, 0, 1, Complex{0.3, -0.1});
    const Tendency t = compute_rhs(s);
    CHECK(max_abs(t.dv) < 1e-15);
    CHECK(max_abs(t.dpsi) < 1e-15);
    CHECK(max_abs(compute_rhs_explicit(s).dv) < 1e-15);
}

TEST_CASE("horizontal single mode of psi forces v3 = +psi") {
    const auto g = SpectralGrid::cube(16);
    FlowState s = FlowState::zero(g);
    const Complex c{0.25, 0.1};
    s.psi.set_mode(1, 0, 0, c);
    const Tendency t = compute_rhs(s);
    CHECK(std::abs(t.dv[2].at(1, 0, 0) - c) < 1e-15);
    CHECK(max_abs(t.dv[0]) < 1e-15);
    CHECK(max_abs(t.dv[1]) < 1e-15);
    CHECK(max_abs(t.dpsi) < 1e-15);
    SpectralField rest = t.dv[2];
    rest.set_mode(1, 0, 0, Complex{});
    CHECK(max_abs(rest) < 1e-15);
}

TEST_CASE("explicit route: horizontal psi mode couples through -lap_h psi with zero f^v") {
    const auto g = SpectralGrid::cube(16);
    FlowState s = FlowState::zero(g);
    s.psi = sampled(g, [](double x, double, double) { return 0.2 * std::cos(x); });
    const ExplicitForcing f = explicit_forcing(s);
    CHECK(max_abs(f.f_v) < 1e-15);
    const Tendency t = compute_rhs_explicit(s);
    CHECK(max_abs_diff(t.dv[2], -1.0 * horizontal_laplacian(s.psi)) < 1e-15);
    CHECK(max_abs_diff(t.dv[2], s.psi) < 1e-15);
}

TEST_CASE("pressure of psi = sin(x3) matches the closed form") {
    const auto g = SpectralGrid::cube(16);
    FlowState s = FlowState::zero(g);
    s.psi = sampled(g, [](double, double, double z) { return std::sin(z); });
    const RealField p = inverse_transform(pressure_solve(s));
    const RealField want = RealField::sample(g, [](double, double, double z) {
        return -2.0 * std::cos(z) - 0.5 * std::cos(2.0 * z);
    });
    CHECK(max_abs_diff(p, want) < 1e-12);
}

TEST_CASE("pressure of a velocity field matches the quadratic-term oracle") {
    // v = (sin x2 cos x3, 0, sin x1) is divergence-free; the
    // products d_i v_j d_j v_i are formed from analytic derivatives.
    const auto g = SpectralGrid::cube(16);
    FlowState s = FlowState::zero(g);
    s.v[0] = sampled(g, [](double, double y, double z) { return std::sin(y) * std::cos(z); });
    s.v[2] = sampled(g, [](double x, double, double) { return std::sin(x); });
    const RealField q = RealField::sample(g, [](double x, double y, double z) {
        // Nonzero entries of grad v are d2 v1, d3 v1 and d1 v3, so the
        // contraction keeps only the (1,3) and (3,1) pairs.
        const double d3v1 = -std::sin(y) * std::sin(z);
        const double d1v3 = std::cos(x);
        return 2.0 * d3v1 * d1v3;
    });
    const RealField want = inverse_transform(inverse_neg_laplacian(forward_transform(q)));
    CHECK(max_abs_diff(inverse_transform(pressure_solve(s)), want) < 1e-12);

    FlowState single = FlowState::zero(g);
    single.v[2] = sampled(g, [](double x, double y, double) { return std::cos(x + 2.0 * y); });
    CHECK(max_abs(pressure_solve(single)) < 1e-12);
}

TEST_CASE("projected and explicit routes agree on random states") {
    const auto g = SpectralGrid::cube(16);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const FlowState s = random_band_state(g, seed, 0.3);
        CHECK(tendency_distance(compute_rhs(s), compute_rhs_explicit(s)) < 1e-11);
    }
}

TEST_CASE("tendencies are divergence-free, dealiased and mean-free") {
    const auto g = SpectralGrid::cube(16);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const FlowState s = random_band_state(g, seed, 0.3);
        for (const Tendency& t : {compute_rhs(s), compute_rhs_explicit(s)}) {
            CHECK(max_divergence_defect(t.dv) < 1e-12);
            CHECK(t.dpsi[0] == Complex{});
            for (int i = 0; i < 3; ++i) CHECK(t.dv[i][0] == Complex{});
            for (std::size_t m = 0; m < g->spectral_size(); ++m) {
                if (g->in_dealias_band(m)) continue;
                CHECK(t.dpsi[m] == Complex{});
                for (int i = 0; i < 3; ++i) CHECK(t.dv[i][m] == Complex{});
            }
        }
    }
}

TEST_CASE("projected fields are L2-orthogonal to gradients") {
    const auto g = SpectralGrid::cube(16);
    const VectorField w{random_band_state(g, 3, 1.0).psi, random_band_state(g, 4, 1.0).psi,
                        random_band_state(g, 5, 1.0).psi};
    const VectorField pw = leray_project(w);
    const SpectralField phi = random_band_state(g, 6, 1.0).psi;
    double inner = 0.0, scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        const SpectralField d = derivative(phi, i + 1);
        inner += sobolev_inner(pw[i], d, 0);
        scale += std::sqrt(sobolev_norm_sq(pw[i], 0) * sobolev_norm_sq(d, 0));
    }
    CHECK(std::abs(inner) <= 1e-12 * scale);
}

TEST_CASE("transport conserves L2 for divergence-free velocity") {
    const auto g = SpectralGrid::cube(16);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const FlowState s = random_band_state(g, seed, 0.5);
        const NonlinearTerms nl = nonlinear_terms(s);
        const double inner = sobolev_inner(nl.psi_transport, s.psi, 0);
        const double scale = std::sqrt(sobolev_norm_sq(nl.psi_transport, 0) * sobolev_norm_sq(s.psi, 0));
        CHECK(std::abs(inner) <= 1e-11 * scale);
    }
}

TEST_CASE("compute_rhs adds exactly the viscous term to the non-stiff part") {
    const auto g = SpectralGrid::cube(16);
    const FlowState s = random_band_state(g, 12, 0.3);
    const Tendency full = compute_rhs(s);
    const Tendency part = nonstiff_rhs(s);
    for (int i = 0; i < 3; ++i) {
        CHECK(max_abs_diff(full.dv[i] - part.dv[i], laplacian(s.v[i])) < 1e-15);
    }
    CHECK(max_abs_diff(full.dpsi, part.dpsi) == 0.0);
}
