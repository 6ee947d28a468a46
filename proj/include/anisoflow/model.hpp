#pragma once

#include "anisoflow/state.hpp"

namespace anisoflow {

/// Modewise w - k (k.w) / |k|^2; the k = 0 mode passes through.
VectorField leray_project(const VectorField& w);
void leray_project_in_place(VectorField& w);

/// Dealiased quadratic products of a state, in the forms the momentum
/// equation uses them.
struct NonlinearTerms {
    SpectralField psi_transport;     // v . grad psi
    VectorField momentum_transport;  // div(v (x) v), equal to v . grad v for div-free v
    VectorField stress_divergence;   // div(grad psi (x) grad psi)
};

NonlinearTerms nonlinear_terms(const FlowState& state);

/// Full right-hand side of the perturbation system with the pressure
/// gradient removed by Leray projection:
///   dpsi = -(v.grad psi + v3)
///   dv   = lap v + P[-div(v(x)v) - (grad_h d3 psi, (lap + d3^2) psi) - div(grad psi (x) grad psi)]
Tendency compute_rhs(const FlowState& state);

/// compute_rhs without the viscous lap v term; the part an integrating
/// factor scheme treats explicitly.
Tendency nonstiff_rhs(const FlowState& state);

/// Pressure from the divergence of the momentum equation,
///   p = -2 d3 psi + (-lap)^-1 [ d_i v_j d_j v_i + d_i d_j (d_i psi d_j psi) ].
SpectralField pressure_solve(const FlowState& state);

/// Nonlocal and local forcing of the substituted (pressure-eliminated) form.
struct ExplicitForcing {
    SpectralField f_h1;
    SpectralField f_h2;
    SpectralField f_v;
    /// (-lap)^-1 [ d_i v_j d_j v_i + d_i d_j (d_i psi d_j psi) ]
    SpectralField nonlocal_potential;
};

ExplicitForcing explicit_forcing(const FlowState& state);

/// Everything the substituted form is assembled from, built from
/// advective products independently of nonlinear_terms().
struct SubstitutedForm {
    ExplicitForcing forcing;
    VectorField advection;  // v . grad v
    SpectralField psi_transport;
    VectorField stress_divergence;
};

SubstitutedForm substituted_form(const FlowState& state);

/// Second, independent route: assembles the momentum tendency from the
/// explicit nonlocal forcing instead of a projection,
///   dv_h = lap v_h - v.grad v_h + grad_h d3 psi + f_h
///   dv_3 = lap v_3 - v.grad v_3 - lap_h psi  + f_v
Tendency compute_rhs_explicit(const FlowState& state);

/// Relative max-norm difference between two tendencies.
double tendency_distance(const Tendency& a, const Tendency& b);

}  // namespace anisoflow
