"""Pseudo-spectral solver and diagnostics for the (psi, v) perturbation system
about phi = x3 on a periodic box.

Spectral arrays use the half lattice: shape (n1, n2, n3 // 2 + 1), complex,
with the forward transform normalized by 1 / (n1 n2 n3).
"""

from ._anisoflow import (
    BlowUpError,
    Grid,
    State,
    b0,
    compute_rhs,
    compute_rhs_explicit,
    energy_subidentities,
    forward,
    generate_initial,
    inverse,
    ledger,
    modified_energy,
    pressure,
    pressure_report,
    read_checkpoint,
    run,
    step,
    verify,
    write_checkpoint,
)

__all__ = [
    "BlowUpError",
    "Grid",
    "State",
    "b0",
    "compute_rhs",
    "compute_rhs_explicit",
    "energy_subidentities",
    "forward",
    "generate_initial",
    "inverse",
    "ledger",
    "modified_energy",
    "pressure",
    "pressure_report",
    "read_checkpoint",
    "run",
    "step",
    "verify",
    "write_checkpoint",
]
