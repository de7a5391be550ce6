//! Dynamical Casimir-Polder energy of a ground-state two-level atom near a
//! perfectly conducting wall after a sudden quench of the atomic position.
//!
//! The atom starts in the dressed ground state of the atom-field system at
//! position r0; at t = 0 its position jumps to r, leaving the virtual
//! photon cloud out of equilibrium. The crate evaluates the resulting
//! time-dependent atom-wall interaction energy along two independent
//! routes (a Si/Ci closed form and a dyadic-kernel quadrature oracle),
//! its static limit, the free-space Lamb-shift-like term, and the global
//! atomic/field/total energies of a discrete cavity-mode model with exact
//! conservation checks.
//!
//! Start from the runnable examples (`cargo run --example cp_sweep`) or
//! the `cpq` binary, which exposes the same capabilities as subcommands.

pub mod cli;
pub mod config;
pub mod continuum;
pub mod modesum;
pub mod quadrature;
pub mod specfun;

pub use config::{
    derive_geometry, dipole_to_gaussian, reduce, validity_report, ConfigBuilder, EnergySample,
    GeometryDerived, Lambda, Method, PhysicalConfig, ReducedArgs, Regime, ValidityReport,
};
pub use continuum::{
    boundary_energy_oracle, cp_closed_form, dq_apply, dyadic_kernel, free_space_parts,
    free_space_shift, halfline_sine, static_cp, sweep_cp, CpEnergyCurve, DyadicKernel, QJet,
};
pub use modesum::{
    atomic_energy, coupling, dressed_state, field_energy, interaction_energy, mode_function,
    static_references, total_energy, ModeGrid, ModeSumCtx, QuenchState,
};
pub use quadrature::{extrapolate_to_zero, integrate_halfline, OscIntegralResult, OscIntegralSpec};
pub use specfun::{aux_f, aux_g, ci, g_kernel, si, SpecFunValue};
