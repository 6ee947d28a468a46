#include "anisoflow/model.hpp"

#include <algorithm>
#include <cmath>

#include "anisoflow/spectral.hpp"

namespace anisoflow {

namespace {

RealField pointwise_product(const RealField& a, const RealField& b) {
    RealField out(a.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

SpectralField dealiased_transform(const RealField& f) { return dealias(forward_transform(f)); }

std::array<RealField, 3> physical_gradient(const SpectralField& f) {
    return {inverse_transform(derivative(f, 1)), inverse_transform(derivative(f, 2)),
            inverse_transform(derivative(f, 3))};
}

std::array<RealField, 3> physical_vector(const VectorField& v) {
    return {inverse_transform(v[0]), inverse_transform(v[1]), inverse_transform(v[2])};
}

/// Dealiased transforms of the symmetric products a_i a_j.
std::array<std::array<SpectralField, 3>, 3> symmetric_products(const std::array<RealField, 3>& a) {
    std::array<std::array<SpectralField, 3>, 3> out;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            out[i][j] = dealiased_transform(pointwise_product(a[i], a[j]));
            if (j != i) out[j][i] = out[i][j];
        }
    }
    return out;
}

/// Row divergence sum_j d_j T_ij of a spectral tensor.
VectorField row_divergence(const std::array<std::array<SpectralField, 3>, 3>& t) {
    const auto& grid = t[0][0].grid();
    const auto& g = *grid;
    VectorField out = zero_vector(grid);
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        for (int i = 0; i < 3; ++i) {
            Complex acc{};
            for (int j = 0; j < 3; ++j) acc += times_ik(g.derivative_wavenumber(j, m), t[i][j][m]);
            out[i][m] = acc;
        }
    }
    return out;
}

SpectralField transport(const std::array<RealField, 3>& velocity, const std::array<RealField, 3>& gradient) {
    RealField sum(velocity[0].grid());
    for (std::size_t p = 0; p < sum.size(); ++p) {
        sum[p] = velocity[0][p] * gradient[0][p] + velocity[1][p] * gradient[1][p] +
                 velocity[2][p] * gradient[2][p];
    }
    return dealiased_transform(sum);
}

/// Linear coupling (grad_h d3 psi, (lap + d3^2) psi) at one mode.
std::array<Complex, 3> linear_coupling(const SpectralGrid& g, std::size_t m, Complex psi) {
    const double k1 = g.derivative_wavenumber(0, m);
    const double k2 = g.derivative_wavenumber(1, m);
    const double k3 = g.derivative_wavenumber(2, m);
    const double k3sq = g.wavenumber(2, m) * g.wavenumber(2, m);
    return {-k1 * k3 * psi, -k2 * k3 * psi, -(g.k_squared(m) + k3sq) * psi};
}

void zero_mean_and_dealias(Tendency& t) {
    dealias_in_place(t.dpsi);
    t.dpsi[0] = Complex{};
    for (auto& c : t.dv) {
        dealias_in_place(c);
        c[0] = Complex{};
    }
}

}  // namespace

void leray_project_in_place(VectorField& w) {
    require_same_grid(w[0], w[1]);
    require_same_grid(w[0], w[2]);
    const auto& g = *w[0].grid();
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        const double k[3] = {g.derivative_wavenumber(0, m), g.derivative_wavenumber(1, m),
                             g.derivative_wavenumber(2, m)};
        const double ksq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (ksq == 0.0) continue;
        const Complex kw = (k[0] * w[0][m] + k[1] * w[1][m] + k[2] * w[2][m]) / ksq;
        for (int j = 0; j < 3; ++j) w[j][m] -= k[j] * kw;
    }
}

VectorField leray_project(const VectorField& w) {
    VectorField out = w;
    leray_project_in_place(out);
    return out;
}

NonlinearTerms nonlinear_terms(const FlowState& state) {
    const auto grad_psi = physical_gradient(state.psi);
    const auto velocity = physical_vector(state.v);
    NonlinearTerms out;
    out.psi_transport = transport(velocity, grad_psi);
    out.momentum_transport = row_divergence(symmetric_products(velocity));
    out.stress_divergence = row_divergence(symmetric_products(grad_psi));
    return out;
}

Tendency nonstiff_rhs(const FlowState& state) {
    const auto& grid = state.grid();
    const auto& g = *grid;
    const std::size_t np = g.physical_size();
    const std::size_t ns = g.spectral_size();

    // Physical grad psi and v. The c2r transform clobbers its input, so each
    // spectral operand is staged in `scratch` first.
    AlignedVector<Complex> scratch(ns);
    std::array<AlignedVector<double>, 3> grad, vel;
    for (int j = 0; j < 3; ++j) {
        for (std::size_t m = 0; m < ns; ++m) scratch[m] = times_ik(g.derivative_wavenumber(j, m), state.psi[m]);
        grad[j].resize(np);
        g.execute_c2r(scratch.data(), grad[j].data());
        std::copy(state.v[j].coeffs().begin(), state.v[j].coeffs().end(), scratch.begin());
        vel[j].resize(np);
        g.execute_c2r(scratch.data(), vel[j].data());
    }

    // Momentum and stress fluxes enter only through the divergence of
    // v (x) v + grad psi (x) grad psi, so one symmetric tensor carries both.
    constexpr int pair[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
    AlignedVector<double> product(np);
    std::array<AlignedVector<Complex>, 6> flux;
    for (int q = 0; q < 6; ++q) {
        const auto& vi = vel[pair[q][0]];
        const auto& vj = vel[pair[q][1]];
        const auto& gi = grad[pair[q][0]];
        const auto& gj = grad[pair[q][1]];
        for (std::size_t p = 0; p < np; ++p) product[p] = vi[p] * vj[p] + gi[p] * gj[p];
        flux[q].resize(ns);
        g.execute_r2c(product.data(), flux[q].data());
    }
    for (std::size_t p = 0; p < np; ++p) {
        product[p] = vel[0][p] * grad[0][p] + vel[1][p] * grad[1][p] + vel[2][p] * grad[2][p];
    }
    AlignedVector<Complex> transport_hat(ns);
    g.execute_r2c(product.data(), transport_hat.data());

    const double norm = 1.0 / static_cast<double>(np);
    constexpr int index[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
    Tendency out = Tendency::zero(grid);
    for (std::size_t m = 1; m < ns; ++m) {
        if (!g.in_dealias_band(m)) continue;
        const double k[3] = {g.derivative_wavenumber(0, m), g.derivative_wavenumber(1, m),
                             g.derivative_wavenumber(2, m)};
        const auto lin = linear_coupling(g, m, state.psi[m]);
        Complex w[3];
        for (int i = 0; i < 3; ++i) {
            Complex div{};
            for (int j = 0; j < 3; ++j) div += times_ik(k[j], flux[index[i][j]][m]);
            w[i] = -norm * div - lin[i];
        }
        const double ksq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (ksq > 0.0) {
            const Complex kw = (k[0] * w[0] + k[1] * w[1] + k[2] * w[2]) / ksq;
            for (int i = 0; i < 3; ++i) w[i] -= k[i] * kw;
        }
        for (int i = 0; i < 3; ++i) out.dv[i][m] = w[i];
        out.dpsi[m] = -norm * transport_hat[m] - state.v[2][m];
    }
    return out;
}

Tendency compute_rhs(const FlowState& state) {
    Tendency out = nonstiff_rhs(state);
    const auto& g = *state.grid();
    for (int i = 0; i < 3; ++i) {
        for (std::size_t m = 0; m < g.spectral_size(); ++m) out.dv[i][m] -= g.k_squared(m) * state.v[i][m];
    }
    return out;
}

SubstitutedForm substituted_form(const FlowState& state) {
    const auto& grid = state.grid();
    const auto& g = *grid;
    const auto velocity = physical_vector(state.v);
    const auto grad_psi = physical_gradient(state.psi);
    // grad_v[i][j] = d_j v_i
    std::array<std::array<RealField, 3>, 3> grad_v;
    for (int i = 0; i < 3; ++i) grad_v[i] = physical_gradient(state.v[i]);

    SubstitutedForm out;
    for (int i = 0; i < 3; ++i) out.advection[i] = transport(velocity, grad_v[i]);
    out.psi_transport = transport(velocity, grad_psi);

    RealField strain_square(grid);
    for (std::size_t p = 0; p < strain_square.size(); ++p) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) acc += grad_v[j][i][p] * grad_v[i][j][p];
        }
        strain_square[p] = acc;
    }
    const SpectralField q_velocity = dealiased_transform(strain_square);
    const auto stress = symmetric_products(grad_psi);
    out.stress_divergence = row_divergence(stress);
    const VectorField& stress_div = out.stress_divergence;

    SpectralField source(grid);
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        Complex q = q_velocity[m];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                q -= g.derivative_wavenumber(i, m) * g.derivative_wavenumber(j, m) * stress[i][j][m];
            }
        }
        source[m] = q;
    }
    out.forcing.nonlocal_potential = inverse_neg_laplacian(source);
    const auto& pot = out.forcing.nonlocal_potential;
    std::array<SpectralField, 3> f{SpectralField(grid), SpectralField(grid), SpectralField(grid)};
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        for (int i = 0; i < 3; ++i) {
            f[i][m] = -times_ik(g.derivative_wavenumber(i, m), pot[m]) - stress_div[i][m];
        }
    }
    out.forcing.f_h1 = std::move(f[0]);
    out.forcing.f_h2 = std::move(f[1]);
    out.forcing.f_v = std::move(f[2]);
    return out;
}

ExplicitForcing explicit_forcing(const FlowState& state) { return substituted_form(state).forcing; }

Tendency compute_rhs_explicit(const FlowState& state) {
    const auto& grid = state.grid();
    const auto& g = *grid;
    const SubstitutedForm pieces = substituted_form(state);
    const std::array<const SpectralField*, 3> f{&pieces.forcing.f_h1, &pieces.forcing.f_h2,
                                               &pieces.forcing.f_v};
    Tendency out = Tendency::zero(grid);
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        const Complex psi = state.psi[m];
        const double k3 = g.derivative_wavenumber(2, m);
        // grad_h d3 psi on the horizontal rows, -lap_h psi on the vertical row.
        const Complex coupling[3] = {-g.derivative_wavenumber(0, m) * k3 * psi,
                                     -g.derivative_wavenumber(1, m) * k3 * psi, g.kh_squared(m) * psi};
        for (int i = 0; i < 3; ++i) {
            out.dv[i][m] = -g.k_squared(m) * state.v[i][m] - pieces.advection[i][m] + coupling[i] + (*f[i])[m];
        }
        out.dpsi[m] = -pieces.psi_transport[m] - state.v[2][m];
    }
    zero_mean_and_dealias(out);
    return out;
}

SpectralField pressure_solve(const FlowState& state) {
    const ExplicitForcing forcing = explicit_forcing(state);
    SpectralField p = forcing.nonlocal_potential;
    const auto& g = *state.grid();
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        p[m] -= 2.0 * times_ik(g.derivative_wavenumber(2, m), state.psi[m]);
    }
    p[0] = Complex{};
    return p;
}

double tendency_distance(const Tendency& a, const Tendency& b) {
    double diff = 0.0;
    double scale = 0.0;
    auto visit = [&](const SpectralField& x, const SpectralField& y) {
        require_same_grid(x, y);
        for (std::size_t m = 0; m < x.size(); ++m) {
            diff = std::max(diff, std::abs(x[m] - y[m]));
            scale = std::max({scale, std::abs(x[m]), std::abs(y[m])});
        }
    };
    visit(a.dpsi, b.dpsi);
    for (int i = 0; i < 3; ++i) visit(a.dv[i], b.dv[i]);
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace anisoflow
