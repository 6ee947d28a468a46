#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anisoflow/grid.hpp"
#include "anisoflow/state.hpp"

namespace anisoflow {

struct CheckResult {
    std::string name;
    double value = 0.0;      // worst observed quantity
    double tolerance = 0.0;  // pass iff value <= tolerance
    bool pass = false;
};

/// Random state filling the whole dealias band, with B0 = amplitude.
FlowState random_band_state(const GridPtr& grid, std::uint64_t seed, double amplitude);

/// Worst invariant defect of a state, compared against its tolerances:
/// divergence 1e-12 (modewise, relative), mean modes exactly 0,
/// Hermitian symmetry 1e-13, and D_v3 <= D_visc.
struct StructureReport {
    double divergence = 0.0;
    double mean = 0.0;
    double hermitian = 0.0;
    double dv3_excess = 0.0;  // max(0, D_v3 - D_visc) / max(D_visc, tiny)
    bool ok() const { return divergence <= 1e-12 && mean == 0.0 && hermitian <= 1e-13 && dv3_excess <= 1e-12; }
    void absorb(const FlowState& s);
};

/// Property battery on one grid: transforms, projection, exact energy
/// identity, route equivalence, pressure oracle, invariants along a short
/// run and checkpoint round trip. `states` random states per check.
std::vector<CheckResult> verify_suite(const GridPtr& grid, std::uint64_t seed, int states,
                                      const std::string& scratch_dir);

}  // namespace anisoflow
