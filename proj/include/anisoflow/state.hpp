#pragma once

#include <array>

#include "anisoflow/field.hpp"

namespace anisoflow {

using VectorField = std::array<SpectralField, 3>;

VectorField zero_vector(const GridPtr& grid);

/// Perturbation unknowns (psi, v) about the equilibrium phi = x3, at time t.
struct FlowState {
    SpectralField psi;
    VectorField v;
    double t = 0.0;

    static FlowState zero(const GridPtr& grid, double t = 0.0);
    const GridPtr& grid() const { return psi.grid(); }
};

/// Time derivatives of (psi, v).
struct Tendency {
    SpectralField dpsi;
    VectorField dv;

    static Tendency zero(const GridPtr& grid);
};

/// Modewise divergence relative to the field scale:
/// max_k |k . v(k)| / |k| over max_k |v(k)|, 0 for a vanishing field.
double max_divergence_defect(const VectorField& v);
/// Absolute max over modes of |k . v(k)|.
double max_divergence(const VectorField& v);
double max_hermitian_defect(const FlowState& s);
/// Largest |c(0)| over the four components.
double max_mean_mode(const FlowState& s);
bool all_finite(const FlowState& s);

/// Zero mean modes, drop out-of-band modes, Leray-project v and restore
/// Hermitian symmetry. A no-op to round-off on a valid state.
void reenforce_invariants(FlowState& s);

}  // namespace anisoflow
