//! Discrete cavity-mode backend: mode functions of a perfectly conducting
//! cubic cavity, atom-field couplings, dressed-state amplitudes, and the
//! time-dependent interaction, atomic, field, and total energies after the
//! position quench.
//!
//! The backend is a consistency laboratory. Conservation of the total
//! energy, the RWA and no-quench freeze-outs, and the static/asymptotic
//! identities hold exactly per mode; continuum-level convergence is not
//! attempted. Divergent (Lamb-shift-type) constants are reported at the
//! sharp enumeration cutoff k_max = π n_max √3 / L and labeled
//! cutoff-dependent; an optional soft exponential regulator is available
//! for cutoff-stability checks.

use crate::config::{PhysicalConfig, C_CGS, HBAR_CGS};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModeSumError {
    #[error("invalid mode grid: {0}")]
    Grid(String),
    #[error("position outside the cavity: {0:?}")]
    OutsideCavity([f64; 3]),
    #[error("unsupported dressing order {0}; only 1 and 2 are defined")]
    Order(u8),
}

/// One transverse cavity mode: integer index triple, polarization slot,
/// wavevector (cm⁻¹), and angular frequency (s⁻¹).
#[derive(Debug, Clone)]
pub struct Mode {
    pub n: [u32; 3],
    pub j: u8,
    pub k_vec: [f64; 3],
    pub omega: f64,
}

/// Enumerated modes of a cubic conducting cavity of side `l` (cm) with
/// per-axis indices up to `n_max`. Indices with two or more zero
/// components carry no transverse field and are excluded; a single zero
/// component leaves one polarization, generic indices two.
#[derive(Debug, Clone)]
pub struct ModeGrid {
    pub l: f64,
    pub n_max: u32,
    pub modes: Vec<Mode>,
}

impl ModeGrid {
    /// Cavity side in meters.
    pub fn new(l_si: f64, n_max: u32) -> Result<Self, ModeSumError> {
        if !(l_si > 0.0) || n_max == 0 {
            return Err(ModeSumError::Grid(format!(
                "need positive side and n_max >= 1, got L = {l_si}, n_max = {n_max}"
            )));
        }
        let l = l_si * 1e2;
        let mut modes = Vec::with_capacity(expected_mode_count(n_max));
        for nx in 0..=n_max {
            for ny in 0..=n_max {
                for nz in 0..=n_max {
                    let zeros = [nx, ny, nz].iter().filter(|&&v| v == 0).count();
                    if zeros >= 2 {
                        continue;
                    }
                    let n = [nx, ny, nz];
                    let k_vec = [
                        PI * nx as f64 / l,
                        PI * ny as f64 / l,
                        PI * nz as f64 / l,
                    ];
                    let k = (k_vec[0] * k_vec[0] + k_vec[1] * k_vec[1] + k_vec[2] * k_vec[2])
                        .sqrt();
                    let omega = C_CGS * k;
                    let pol_count = if zeros == 1 { 1 } else { 2 };
                    for j in 1..=pol_count {
                        modes.push(Mode {
                            n,
                            j,
                            k_vec,
                            omega,
                        });
                    }
                }
            }
        }
        // Fixed summation order: |k|, then lexicographic n, then j.
        modes.sort_by(|a, b| {
            a.omega
                .partial_cmp(&b.omega)
                .unwrap()
                .then(a.n.cmp(&b.n))
                .then(a.j.cmp(&b.j))
        });
        Ok(ModeGrid { l, n_max, modes })
    }

    pub fn volume(&self) -> f64 {
        self.l * self.l * self.l
    }

    pub fn k_max(&self) -> f64 {
        PI * self.n_max as f64 * 3f64.sqrt() / self.l
    }
}

/// Closed-form mode count for a full cube of indices: 2 n³ generic modes
/// plus 3 n² single-polarization face modes.
pub fn expected_mode_count(n_max: u32) -> usize {
    let n = n_max as usize;
    2 * n * n * n + 3 * n * n
}

fn polarization(n: [u32; 3], k_vec: [f64; 3], j: u8) -> [f64; 3] {
    let zeros = n.iter().filter(|&&v| v == 0).count();
    if zeros == 1 {
        // The surviving component lies along the zero-index axis.
        let axis = n.iter().position(|&v| v == 0).unwrap();
        let mut e = [0.0; 3];
        e[axis] = 1.0;
        return e;
    }
    let k = (k_vec[0] * k_vec[0] + k_vec[1] * k_vec[1] + k_vec[2] * k_vec[2]).sqrt();
    let khat = [k_vec[0] / k, k_vec[1] / k, k_vec[2] / k];
    // e1 ∝ k̂ × ẑ is well defined because generic modes have k off-axis.
    let norm = (khat[0] * khat[0] + khat[1] * khat[1]).sqrt();
    let e1 = [khat[1] / norm, -khat[0] / norm, 0.0];
    if j == 1 {
        e1
    } else {
        // e2 = k̂ × e1
        [
            khat[1] * e1[2] - khat[2] * e1[1],
            khat[2] * e1[0] - khat[0] * e1[2],
            khat[0] * e1[1] - khat[1] * e1[0],
        ]
    }
}

/// Mode function f_kj(r) of the conducting cavity, dimensionless,
/// normalized so that ∫_V |f|² dV = V. The component along each axis
/// carries cos on that axis and sin on the other two, which makes the
/// tangential components vanish on the walls.
pub fn mode_function(
    n: [u32; 3],
    j: u8,
    l: f64,
    r: [f64; 3],
) -> Result<[f64; 3], ModeSumError> {
    if r.iter().any(|&x| x < 0.0 || x > l) {
        return Err(ModeSumError::OutsideCavity(r));
    }
    let zeros = n.iter().filter(|&&v| v == 0).count();
    if zeros >= 2 {
        return Err(ModeSumError::Grid(format!(
            "mode {n:?} has no transverse field"
        )));
    }
    let k_vec = [
        PI * n[0] as f64 / l,
        PI * n[1] as f64 / l,
        PI * n[2] as f64 / l,
    ];
    let e = polarization(n, k_vec, j);
    let norm = if zeros == 1 { 2.0 } else { 8f64.sqrt() };
    let (sx, cx) = (k_vec[0] * r[0]).sin_cos();
    let (sy, cy) = (k_vec[1] * r[1]).sin_cos();
    let (sz, cz) = (k_vec[2] * r[2]).sin_cos();
    Ok([
        norm * e[0] * cx * sy * sz,
        norm * e[1] * sx * cy * sz,
        norm * e[2] * sx * sy * cz,
    ])
}

/// Atom-field coupling ε_kj(r) = -i √(2πħc/V) √k (μ⃗·f_kj(r)) in erg,
/// Gaussian units.
pub fn coupling(
    mode: &Mode,
    grid: &ModeGrid,
    mu_vec: [f64; 3],
    r: [f64; 3],
) -> Result<Complex64, ModeSumError> {
    let f = mode_function(mode.n, mode.j, grid.l, r)?;
    let dot = mu_vec[0] * f[0] + mu_vec[1] * f[1] + mu_vec[2] * f[2];
    let k = mode.omega / C_CGS;
    let amp = (2.0 * PI * HBAR_CGS * C_CGS / grid.volume()).sqrt() * k.sqrt() * dot;
    Ok(Complex64::new(0.0, -amp))
}

// ---------------------------------------------------------------------------
// Dressed states
// ---------------------------------------------------------------------------

/// Perturbative amplitudes of the (partially) dressed ground state built
/// at the pre-quench position. Double-excitation amplitudes factorize as
/// amp_double(i, k) = -λ d_i d_k and are stored through their base d.
#[derive(Debug, Clone)]
pub struct QuenchState {
    pub order: u8,
    pub amp_ground: f64,
    pub amp_single: Vec<Complex64>,
    pair_base: Vec<Complex64>,
    lambda: f64,
    /// 1 - amp_ground, kept separately so the fourth-order norm deficit
    /// survives floating point.
    ground_deficit: f64,
}

impl QuenchState {
    pub fn amp_double(&self, i: usize, k: usize) -> Complex64 {
        if self.order < 2 {
            return Complex64::new(0.0, 0.0);
        }
        -self.lambda * self.pair_base[i] * self.pair_base[k]
    }

    /// |g|² + Σ|single|² + ΣΣ|double|², the double sum taken analytically.
    pub fn norm_sq(&self) -> f64 {
        1.0 + self.norm_deviation()
    }

    /// norm² - 1, evaluated without the cancellation against 1. The
    /// ground deficit removes the singles at second order exactly, leaving
    /// the fourth-order remainder deficit² + Σ|double|².
    pub fn norm_deviation(&self) -> f64 {
        let singles: f64 = self.amp_single.iter().map(|a| a.norm_sqr()).sum();
        let base: f64 = self.pair_base.iter().map(|a| a.norm_sqr()).sum();
        let doubles = self.lambda * self.lambda * base * base;
        self.ground_deficit * self.ground_deficit - 2.0 * self.ground_deficit + singles + doubles
    }
}

/// Dressed ground state at order 1 or 2 in the coupling, evaluated with
/// the couplings at the pre-quench position r0. The dipole direction is
/// the isotropic representative μ/√3 (1,1,1).
pub fn dressed_state(
    cfg: &PhysicalConfig,
    grid: &ModeGrid,
    order: u8,
) -> Result<QuenchState, ModeSumError> {
    if order != 1 && order != 2 {
        return Err(ModeSumError::Order(order));
    }
    let lambda = cfg.lambda.value();
    let mu_vec = [cfg.mu / 3f64.sqrt(); 3];
    let r0 = cavity_position(cfg.r0, grid)?;
    let omega0 = cfg.omega0();

    let mut amp_single = Vec::with_capacity(grid.modes.len());
    let mut pair_base = Vec::with_capacity(grid.modes.len());
    let mut weight_sum = 0.0;
    for mode in &grid.modes {
        let eps = coupling(mode, grid, mu_vec, r0)?;
        let denom = HBAR_CGS * (mode.omega + omega0);
        let d = eps / denom;
        amp_single.push(-lambda * d);
        weight_sum += d.norm_sqr();
        if order == 2 {
            pair_base.push(d);
        }
    }
    let ground_deficit = if order == 2 {
        0.5 * lambda * lambda * weight_sum
    } else {
        0.0
    };
    Ok(QuenchState {
        order,
        amp_ground: 1.0 - ground_deficit,
        amp_single,
        pair_base,
        lambda,
        ground_deficit,
    })
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

fn cavity_position(r_wall: [f64; 3], grid: &ModeGrid) -> Result<[f64; 3], ModeSumError> {
    // Wall coordinates are centered laterally; the z = 0 wall is shared.
    let p = [grid.l / 2.0 + r_wall[0], grid.l / 2.0 + r_wall[1], r_wall[2]];
    if p.iter().any(|&x| x <= 0.0 || x >= grid.l) {
        return Err(ModeSumError::OutsideCavity(r_wall));
    }
    Ok(p)
}

struct ModeTerm {
    omega: f64,
    /// (μ²/3) f(r)·f(r), erg·cm³
    frr: f64,
    f00: f64,
    fr0: f64,
    /// (μ²/3) |f(r) - f(r0)|², summed directly for the work identities
    fdiff: f64,
}

/// Prepared per-mode products for repeated time evaluation. All energies
/// it produces are in J and carry the global λ² factor, so the RWA
/// switch freezes every observable identically to zero shift.
pub struct ModeSumCtx {
    omega0: f64,
    lambda_sq: f64,
    /// 2π/V (cm⁻³)
    two_pi_over_v: f64,
    terms: Vec<ModeTerm>,
}

const J_PER_ERG: f64 = 1e-7;

impl ModeSumCtx {
    pub fn new(cfg: &PhysicalConfig, grid: &ModeGrid) -> Result<Self, ModeSumError> {
        Self::with_uv_regulator(cfg, grid, None)
    }

    /// `k_reg` (cm⁻¹), when present, multiplies every per-mode product by
    /// e^{-k/k_reg}; used for cutoff-stability checks of the otherwise
    /// sharply truncated sums.
    pub fn with_uv_regulator(
        cfg: &PhysicalConfig,
        grid: &ModeGrid,
        k_reg: Option<f64>,
    ) -> Result<Self, ModeSumError> {
        let r = cavity_position(cfg.r, grid)?;
        let r0 = cavity_position(cfg.r0, grid)?;
        let mu2_third = cfg.mu * cfg.mu / 3.0;
        let mut terms = Vec::with_capacity(grid.modes.len());
        for mode in &grid.modes {
            let fr = mode_function(mode.n, mode.j, grid.l, r)?;
            let f0 = mode_function(mode.n, mode.j, grid.l, r0)?;
            let reg = match k_reg {
                Some(kr) => (-(mode.omega / C_CGS) / kr).exp(),
                None => 1.0,
            };
            let w = mu2_third * reg;
            let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            let df = [fr[0] - f0[0], fr[1] - f0[1], fr[2] - f0[2]];
            terms.push(ModeTerm {
                omega: mode.omega,
                frr: w * dot(fr, fr),
                f00: w * dot(f0, f0),
                fr0: w * dot(fr, f0),
                fdiff: w * dot(df, df),
            });
        }
        Ok(ModeSumCtx {
            omega0: cfg.omega0(),
            lambda_sq: cfg.lambda.squared(),
            two_pi_over_v: 2.0 * PI / grid.volume(),
            terms,
        })
    }

    /// Interaction energy on the partially dressed state, regrouped so
    /// the static part and the r0-memory oscillation are explicit:
    /// E_I = -4π/V Σ g_r² ω/(ω+ω0)
    ///       + 4π/V Σ g_r (g_r - g_0) ω/(ω+ω0) cos((ω0+ω)t).
    pub fn interaction(&self, t: f64) -> f64 {
        if self.lambda_sq == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for term in &self.terms {
            let w = term.omega / (term.omega + self.omega0);
            let osc = ((self.omega0 + term.omega) * t).cos();
            acc += w * (-2.0 * term.frr + 2.0 * (term.frr - term.fr0) * osc);
        }
        self.lambda_sq * self.two_pi_over_v * acc * J_PER_ERG
    }

    /// Same quantity evaluated without the regrouping, as a
    /// (1 - cos)/cos split; kept as an internal consistency route.
    pub fn interaction_direct(&self, t: f64) -> f64 {
        if self.lambda_sq == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for term in &self.terms {
            let w = term.omega / (term.omega + self.omega0);
            let osc = ((self.omega0 + term.omega) * t).cos();
            acc += w * (-2.0 * term.frr * (1.0 - osc) - 2.0 * term.fr0 * osc);
        }
        self.lambda_sq * self.two_pi_over_v * acc * J_PER_ERG
    }

    /// Distance-dependent atomic energy, weight ω0 ω/(ω0+ω)².
    pub fn atomic(&self, t: f64) -> f64 {
        self.global_observable(t, |omega, omega0| omega0 * omega / (omega0 + omega).powi(2))
    }

    /// Distance-dependent field energy, weight ω²/(ω0+ω)².
    pub fn field(&self, t: f64) -> f64 {
        self.global_observable(t, |omega, omega0| omega * omega / (omega0 + omega).powi(2))
    }

    fn global_observable(&self, t: f64, weight: impl Fn(f64, f64) -> f64) -> f64 {
        if self.lambda_sq == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for term in &self.terms {
            let w = weight(term.omega, self.omega0);
            let one_minus = 1.0 - ((self.omega0 + term.omega) * t).cos();
            acc += w * (term.f00 + 2.0 * (term.frr - term.fr0) * one_minus);
        }
        self.lambda_sq * self.two_pi_over_v * acc * J_PER_ERG
    }

    /// E_I + E_A + E_F; conserved in t because the oscillating weights
    /// cancel per mode.
    pub fn total(&self, t: f64) -> f64 {
        self.interaction(t) + self.atomic(t) + self.field(t)
    }

    /// Closed form of the conserved total on the partially dressed state:
    /// 2π/V Σ (g_0² - 2 g_r g_0) ω/(ω0+ω). It exceeds the fully dressed
    /// static total at r by the nonnegative quench work
    /// 2π/V Σ (g_r - g_0)² ω/(ω0+ω).
    pub fn total_closed(&self) -> f64 {
        if self.lambda_sq == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for term in &self.terms {
            let w = term.omega / (term.omega + self.omega0);
            acc += w * (term.f00 - 2.0 * term.fr0);
        }
        self.lambda_sq * self.two_pi_over_v * acc * J_PER_ERG
    }

    /// Static references of the fully dressed state at the post-quench
    /// position.
    pub fn static_refs(&self) -> StaticReferences {
        let mut e_a = 0.0;
        let mut e_f = 0.0;
        let mut e_i = 0.0;
        for term in &self.terms {
            let d = (self.omega0 + term.omega).powi(2);
            e_a += term.frr * self.omega0 * term.omega / d;
            e_f += term.frr * term.omega * term.omega / d;
            e_i += term.frr * term.omega / (self.omega0 + term.omega);
        }
        let scale = self.lambda_sq * self.two_pi_over_v * J_PER_ERG;
        StaticReferences {
            e_atomic: scale * e_a,
            e_field: scale * e_f,
            e_interaction: -2.0 * scale * e_i,
            e_total: -scale * e_i,
        }
    }

    /// Long-time averages of the atomic and field energies together with
    /// the quench-work excesses over the static references, the latter
    /// summed through the independent |f(r) - f(r0)|² route.
    pub fn asymptotic_refs(&self) -> AsymptoticReferences {
        let mut e_a = 0.0;
        let mut e_f = 0.0;
        let mut w_a = 0.0;
        let mut w_f = 0.0;
        for term in &self.terms {
            let d = (self.omega0 + term.omega).powi(2);
            let wa = self.omega0 * term.omega / d;
            let wf = term.omega * term.omega / d;
            e_a += wa * (term.f00 + 2.0 * (term.frr - term.fr0));
            e_f += wf * (term.f00 + 2.0 * (term.frr - term.fr0));
            w_a += wa * term.fdiff;
            w_f += wf * term.fdiff;
        }
        let scale = self.lambda_sq * self.two_pi_over_v * J_PER_ERG;
        AsymptoticReferences {
            e_atomic: scale * e_a,
            e_field: scale * e_f,
            work_atomic: scale * w_a,
            work_field: scale * w_f,
        }
    }
}

/// Static expectation values on the fully dressed state at r (J), all
/// cutoff-dependent at the grid's sharp k_max.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StaticReferences {
    pub e_atomic: f64,
    pub e_field: f64,
    pub e_interaction: f64,
    pub e_total: f64,
}

/// Asymptotic (long-time) averages and their excess over the static
/// references (J).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AsymptoticReferences {
    pub e_atomic: f64,
    pub e_field: f64,
    pub work_atomic: f64,
    pub work_field: f64,
}

/// Interaction energy at time t (J); convenience wrapper building the
/// context per call.
pub fn interaction_energy(
    t: f64,
    cfg: &PhysicalConfig,
    grid: &ModeGrid,
) -> Result<f64, ModeSumError> {
    Ok(ModeSumCtx::new(cfg, grid)?.interaction(t))
}

pub fn atomic_energy(t: f64, cfg: &PhysicalConfig, grid: &ModeGrid) -> Result<f64, ModeSumError> {
    Ok(ModeSumCtx::new(cfg, grid)?.atomic(t))
}

pub fn field_energy(t: f64, cfg: &PhysicalConfig, grid: &ModeGrid) -> Result<f64, ModeSumError> {
    Ok(ModeSumCtx::new(cfg, grid)?.field(t))
}

pub fn total_energy(t: f64, cfg: &PhysicalConfig, grid: &ModeGrid) -> Result<f64, ModeSumError> {
    Ok(ModeSumCtx::new(cfg, grid)?.total(t))
}

pub fn static_references(
    cfg: &PhysicalConfig,
    grid: &ModeGrid,
) -> Result<StaticReferences, ModeSumError> {
    Ok(ModeSumCtx::new(cfg, grid)?.static_refs())
}

pub fn asymptotic_references(
    cfg: &PhysicalConfig,
    grid: &ModeGrid,
) -> Result<AsymptoticReferences, ModeSumError> {
    Ok(ModeSumCtx::new(cfg, grid)?.asymptotic_refs())
}
