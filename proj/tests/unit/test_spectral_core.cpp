#include <doctest.h>

#include <random>

#include "anisoflow/grid.hpp"
#include "anisoflow/spectral.hpp"
#include "test_support.hpp"

using namespace anisoflow;
using namespace testing;

namespace {

RealField random_field(const GridPtr& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RealField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = u(rng);
    return f;
}

/// Random coefficients inside the dealias band, Hermitian by construction.
SpectralField random_band(const GridPtr& g, std::uint64_t seed, int limit) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    SpectralField f(g);
    for (int k1 = -limit; k1 <= limit; ++k1) {
        for (int k2 = -limit; k2 <= limit; ++k2) {
            for (int k3 = 0; k3 <= limit; ++k3) {
                if (k3 == 0 && (k2 < 0 || (k2 == 0 && k1 <= 0))) continue;
                const double re = n(rng);
                f.set_mode(k1, k2, k3, Complex{re, n(rng)});
            }
        }
    }
    return f;
}

}  // namespace

TEST_CASE("grid tables follow the scaled integer lattice") {
    const auto g = SpectralGrid::create(8, 12, 16, 4.0 * kPi);
    CHECK(g->dk() == doctest::Approx(0.5));
    CHECK(g->spectral_size() == std::size_t(8 * 12 * 9));
    for (std::size_t m = 0; m < g->spectral_size(); ++m) {
        for (int a = 0; a < 3; ++a) CHECK(g->wavenumber(a, m) == 0.5 * g->mode_k(a, m));
    }
    CHECK(g->integer_wavenumber(0, 4) == 4);
    CHECK(g->integer_wavenumber(0, 5) == -3);
}

TEST_CASE("grid rejects odd or non-positive sizes and bad box lengths") {
    CHECK_THROWS_AS(SpectralGrid::create(7, 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(SpectralGrid::create(0, 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(SpectralGrid::create(8, 8, 8, -1.0), std::invalid_argument);
}

TEST_CASE("dealias mask is symmetric under k -> -k") {
    const auto g = SpectralGrid::create(12, 16, 18);
    for (std::size_t m = 0; m < g->spectral_size(); ++m) {
        const int k1 = g->mode_k(0, m), k2 = g->mode_k(1, m), k3 = g->mode_k(2, m);
        CHECK(g->in_dealias_band(m) == g->band_contains(-k1, -k2, -k3));
    }
}

TEST_CASE("forward transform of a constant has only the zero mode") {
    const auto g = SpectralGrid::cube(8);
    const SpectralField c = forward_transform(RealField::sample(g, [](double, double, double) { return 1.0; }));
    CHECK(c[0] == Complex{1.0, 0.0});
    for (std::size_t m = 1; m < c.size(); ++m) CHECK(std::abs(c[m]) < 1e-15);
}

TEST_CASE("forward transform of sin(x1) on 8^3") {
    const auto g = SpectralGrid::cube(8);
    const SpectralField c = forward_transform(RealField::sample(g, [](double x, double, double) { return std::sin(x); }));
    CHECK(std::abs(c.at(1, 0, 0) - Complex{0.0, -0.5}) < 1e-15);
    CHECK(std::abs(c.at(-1, 0, 0) - Complex{0.0, 0.5}) < 1e-15);
    double rest = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        if (std::abs(g->mode_k(0, m)) == 1 && g->mode_k(1, m) == 0 && g->mode_k(2, m) == 0) continue;
        rest = std::max(rest, std::abs(c[m]));
    }
    CHECK(rest < 1e-15);
}

TEST_CASE("forward transform matches a brute-force DFT on 8^3") {
    const auto g = SpectralGrid::cube(8);
    const RealField f = random_field(g, 11);
    const SpectralField c = forward_transform(f);
    const double h = kTwoPi / 8.0;
    double worst = 0.0;
    for (std::size_t m = 0; m < g->spectral_size(); ++m) {
        const int k1 = g->mode_k(0, m), k2 = g->mode_k(1, m), k3 = g->mode_k(2, m);
        Complex sum{};
        for (int i1 = 0; i1 < 8; ++i1) {
            for (int i2 = 0; i2 < 8; ++i2) {
                for (int i3 = 0; i3 < 8; ++i3) {
                    const double phase = -(k1 * i1 + k2 * i2 + k3 * i3) * h;
                    sum += f[g->physical_index(i1, i2, i3)] * Complex{std::cos(phase), std::sin(phase)};
                }
            }
        }
        worst = std::max(worst, std::abs(sum / 512.0 - c[m]));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("forward transform rejects a sample count mismatch") {
    const auto g = SpectralGrid::cube(8);
    std::vector<double> samples(100, 0.0);
    CHECK_THROWS_AS(forward_transform(g, samples), std::invalid_argument);
    CHECK_THROWS_AS(RealField(g, samples), std::invalid_argument);
}

TEST_CASE("round trip reproduces the samples") {
    for (int n : {8, 16, 32}) {
        const auto g = SpectralGrid::cube(n);
        const RealField f = random_field(g, 3 + n);
        CHECK(max_abs_diff(inverse_transform(forward_transform(f)), f) / max_abs(f) < 1e-12);
    }
}

TEST_CASE("Parseval: physical and spectral L2 agree") {
    for (int n : {8, 16, 32}) {
        const auto g = SpectralGrid::cube(n);
        const RealField f = random_field(g, 5 + n);
        double physical = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) physical += f[i] * f[i];
        physical *= g->volume() / static_cast<double>(g->physical_size());
        const double spectral = sobolev_norm_sq(forward_transform(f), 0);
        CHECK(std::abs(physical - spectral) / physical < 1e-12);
    }
}

TEST_CASE("derivative examples") {
    const auto g = SpectralGrid::cube(16);
    const auto sin3 = forward_transform(RealField::sample(g, [](double, double, double z) { return std::sin(z); }));
    const auto cos3 = RealField::sample(g, [](double, double, double z) { return std::cos(z); });
    CHECK(max_abs_diff(inverse_transform(derivative(sin3, 3)), cos3) < 1e-14);

    const auto one = forward_transform(RealField::sample(g, [](double, double, double) { return 1.0; }));
    CHECK(max_abs(derivative(one, 1)) == 0.0);

    const auto wave =
        forward_transform(RealField::sample(g, [](double x, double y, double) { return std::cos(x + 2.0 * y); }));
    const auto want = RealField::sample(g, [](double x, double y, double) { return -2.0 * std::sin(x + 2.0 * y); });
    CHECK(max_abs_diff(inverse_transform(derivative(wave, 2)), want) < 1e-12);

    CHECK_THROWS_AS(derivative(wave, 0), std::invalid_argument);
    CHECK_THROWS_AS(derivative(wave, 4), std::invalid_argument);
}

TEST_CASE("derivative preserves Hermitian symmetry") {
    const auto g = SpectralGrid::cube(16);
    const SpectralField f = forward_transform(random_field(g, 2));
    for (int axis = 1; axis <= 3; ++axis) CHECK(hermitian_defect(derivative(f, axis)) < 1e-15);
}

TEST_CASE("laplacian examples") {
    const auto g = SpectralGrid::cube(16);
    auto sample = [&](auto fn) { return forward_transform(RealField::sample(g, fn)); };
    const auto s1 = sample([](double x, double, double) { return std::sin(x); });
    const auto s3 = sample([](double, double, double z) { return std::sin(z); });
    const auto s13 = sample([](double x, double, double z) { return std::sin(x + z); });
    CHECK(max_abs_diff(inverse_transform(laplacian(s1)), inverse_transform(-1.0 * s1)) < 1e-12);
    CHECK(max_abs(horizontal_laplacian(s3)) == 0.0);
    const auto want = RealField::sample(g, [](double x, double, double z) { return -std::sin(x + z); });
    CHECK(max_abs_diff(inverse_transform(horizontal_laplacian(s13)), want) < 1e-12);
}

TEST_CASE("laplacian commutes with derivative") {
    const auto g = SpectralGrid::cube(16);
    const SpectralField f = forward_transform(random_field(g, 9));
    for (int axis = 1; axis <= 3; ++axis) {
        CHECK(max_abs_diff(laplacian(derivative(f, axis)), derivative(laplacian(f), axis)) < 1e-12);
    }
}

TEST_CASE("inverse negative laplacian examples") {
    const auto g = SpectralGrid::cube(16);
    auto sample = [&](auto fn) { return RealField::sample(g, fn); };
    const auto c1 = sample([](double x, double, double) { return std::cos(x); });
    CHECK(max_abs_diff(inverse_transform(inverse_neg_laplacian(forward_transform(c1))), c1) < 1e-14);

    const auto c3 = forward_transform(sample([](double, double, double z) { return std::cos(2.0 * z); }));
    const auto quarter = sample([](double, double, double z) { return 0.25 * std::cos(2.0 * z); });
    CHECK(max_abs_diff(inverse_transform(inverse_neg_laplacian(c3)), quarter) < 1e-14);

    const auto one = forward_transform(sample([](double, double, double) { return 3.0; }));
    CHECK(max_abs(inverse_neg_laplacian(one)) == 0.0);

    // lap((-lap)^-1 f) = -(f - mean f)
    SpectralField f = forward_transform(random_field(g, 4));
    SpectralField back = laplacian(inverse_neg_laplacian(f));
    f[0] = Complex{};
    CHECK(max_abs_diff(back, -1.0 * f) < 1e-14);
}

TEST_CASE("dealias examples") {
    const auto g12 = SpectralGrid::cube(12);
    SpectralField nyq(g12);
    nyq.set_mode(6, 0, 0, Complex{1.0, 0.0});
    CHECK(max_abs(dealias(nyq)) == 0.0);

    SpectralField inside(g12);
    inside.set_mode(1, 1, 1, Complex{0.3, -0.2});
    CHECK(max_abs_diff(dealias(inside), inside) == 0.0);

    const auto g = SpectralGrid::cube(16);
    const SpectralField f = forward_transform(random_field(g, 8));
    const SpectralField once = dealias(f);
    CHECK(max_abs_diff(dealias(once), once) == 0.0);
    CHECK(max_abs(once) > 0.0);
}

TEST_CASE("dealias is self-adjoint in L2") {
    const auto g = SpectralGrid::cube(16);
    const SpectralField a = forward_transform(random_field(g, 21));
    const SpectralField b = forward_transform(random_field(g, 22));
    const double lhs = sobolev_inner(dealias(a), b, 0);
    const double rhs = sobolev_inner(a, dealias(b), 0);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * std::abs(lhs));
}

TEST_CASE("strict band keeps products of band-limited fields alias-free") {
    // With 3|k| < n, products of in-band fields alias only onto out-of-band
    // modes, so the spectral Leibniz rule holds to round-off.
    const auto g = SpectralGrid::cube(24);
    const int limit = g->dealias_limit();
    CHECK(limit == 7);
    const SpectralField f = random_band(g, 31, limit);
    const SpectralField h = random_band(g, 32, limit);
    auto product = [&](const SpectralField& a, const SpectralField& b) {
        const RealField x = inverse_transform(a), y = inverse_transform(b);
        RealField p(g);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = x[i] * y[i];
        return dealias(forward_transform(p));
    };
    for (int axis = 1; axis <= 3; ++axis) {
        const SpectralField lhs = derivative(product(f, h), axis);
        const SpectralField rhs = product(derivative(f, axis), h) + product(f, derivative(h, axis));
        CHECK(max_abs_diff(lhs, rhs) / max_abs(lhs) < 1e-10);
    }
}

TEST_CASE("sobolev inner examples") {
    const auto g = SpectralGrid::cube(16);
    const auto s1 = forward_transform(RealField::sample(g, [](double x, double, double) { return std::sin(x); }));
    const auto c2 = forward_transform(RealField::sample(g, [](double, double y, double) { return std::cos(y); }));
    const double half_volume = 0.5 * std::pow(kTwoPi, 3);
    CHECK(sobolev_inner(s1, s1, 0) == doctest::Approx(124.02510672119926).epsilon(1e-14));
    CHECK(sobolev_inner(s1, s1, 0) == doctest::Approx(half_volume).epsilon(1e-14));
    CHECK(sobolev_inner(s1, s1, 2) == doctest::Approx(3.0 * half_volume).epsilon(1e-14));
    CHECK(sobolev_inner(s1, s1, 2) == doctest::Approx(372.07532016359777).epsilon(1e-14));
    for (int s = 0; s <= 3; ++s) CHECK(std::abs(sobolev_inner(s1, c2, s)) < 1e-12);
}

TEST_CASE("sobolev multiplier sums all derivative multi-indices") {
    // m_s(k) = sum_{|alpha| <= s} prod_j k_j^(2 alpha_j), checked by enumerating alpha.
    const auto g = SpectralGrid::cube(8);
    for (std::size_t m = 0; m < g->spectral_size(); ++m) {
        const double k[3] = {g->wavenumber(0, m), g->wavenumber(1, m), g->wavenumber(2, m)};
        for (int s = 0; s <= 3; ++s) {
            double want = 0.0;
            for (int a = 0; a <= s; ++a) {
                for (int b = 0; a + b <= s; ++b) {
                    for (int c = 0; a + b + c <= s; ++c) {
                        want += std::pow(k[0], 2 * a) * std::pow(k[1], 2 * b) * std::pow(k[2], 2 * c);
                    }
                }
            }
            CHECK(g->sobolev_multiplier(s, m) == doctest::Approx(want).epsilon(1e-15));
        }
    }
}

TEST_CASE("sobolev inner is symmetric, non-negative and rejects grid mismatch") {
    const auto g = SpectralGrid::cube(16);
    const SpectralField a = forward_transform(random_field(g, 41));
    const SpectralField b = forward_transform(random_field(g, 42));
    for (int s = 0; s <= 3; ++s) {
        CHECK(sobolev_inner(a, b, s) == sobolev_inner(b, a, s));
        CHECK(sobolev_norm_sq(a, s) >= 0.0);
    }
    const SpectralField other(SpectralGrid::cube(8));
    CHECK_THROWS_AS(sobolev_inner(a, other, 0), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_inner(a, b, 4), std::invalid_argument);
}

TEST_CASE("mixed norm examples") {
    const auto g = SpectralGrid::cube(16);
    const RealField one = RealField::sample(g, [](double, double, double) { return 1.0; });
    for (double q : {2.0, 4.0}) {
        for (double r : {2.0, 4.0}) {
            const double want = std::pow(kTwoPi, 2.0 / q) * std::pow(kTwoPi, 1.0 / r);
            CHECK(mixed_norm(one, q, r) == doctest::Approx(want).epsilon(1e-13));
        }
    }
    CHECK(mixed_norm(one, 2.0, kInfinity) == doctest::Approx(kTwoPi).epsilon(1e-13));

    const auto s3 = forward_transform(RealField::sample(g, [](double, double, double z) { return std::sin(z); }));
    CHECK(mixed_norm(s3, kInfinity, kInfinity) == doctest::Approx(1.0).epsilon(1e-14));

    const auto s1 = forward_transform(RealField::sample(g, [](double x, double, double) { return std::sin(x); }));
    CHECK(std::abs(mixed_norm(s1, 2.0, 2.0) - std::sqrt(sobolev_inner(s1, s1, 0))) < 1e-12);

    CHECK_THROWS_AS(mixed_norm(one, 3.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(mixed_norm(one, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("enforce_hermitian repairs a broken self-conjugate plane") {
    const auto g = SpectralGrid::cube(8);
    SpectralField f(g);
    f[g->spectral_index(1, 0, 0)] = Complex{1.0, 2.0};
    CHECK(hermitian_defect(f) > 0.0);
    enforce_hermitian(f);
    CHECK(hermitian_defect(f) == 0.0);
    CHECK(f.at(-1, 0, 0) == std::conj(f.at(1, 0, 0)));
}
