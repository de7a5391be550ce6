//! Physical configuration, unit handling, wall geometry, and the
//! reduction to dimensionless integral arguments.
//!
//! The wall occupies the z = 0 plane; the atom sits at r0 before the
//! quench and at r after it, both with positive z. Internally everything
//! is stored in Gaussian-cgs units (statC·cm, cm, s); the public
//! constructors take SI and outputs are reported in J and eV.

use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use thiserror::Error;

/// Speed of light (cm/s).
pub const C_CGS: f64 = 2.997_924_58e10;
/// Speed of light (m/s).
pub const C_SI: f64 = 2.997_924_58e8;
/// Reduced Planck constant (erg·s).
pub const HBAR_CGS: f64 = 1.054_571_817e-27;
/// erg per joule.
pub const ERG_PER_JOULE: f64 = 1e7;
/// Joule per electronvolt.
pub const J_PER_EV: f64 = 1.602_176_634e-19;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("config file: {0}")]
    File(String),
}

/// Counter-rotating switch. `Full` keeps the counter-rotating coupling
/// (λ = -1); `Rwa` drops it (λ = 0), under which the bare ground state is
/// an exact eigenstate and nothing evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lambda {
    Rwa,
    Full,
}

impl Lambda {
    pub fn value(self) -> f64 {
        match self {
            Lambda::Rwa => 0.0,
            Lambda::Full => -1.0,
        }
    }

    pub fn squared(self) -> f64 {
        match self {
            Lambda::Rwa => 0.0,
            Lambda::Full => 1.0,
        }
    }

    /// Accepts exactly 0 or -1; anything else is rejected rather than
    /// guessed at.
    pub fn from_f64(v: f64) -> Result<Self, ConfigError> {
        if v == 0.0 {
            Ok(Lambda::Rwa)
        } else if v == -1.0 {
            Ok(Lambda::Full)
        } else {
            Err(ConfigError::Invalid(format!(
                "lambda must be 0 or -1, got {v}"
            )))
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Exact SI -> Gaussian electric-dipole conversion factor:
/// 1 C·m = 2.99792458e11 statC·cm.
pub const DIPOLE_SI_TO_GAUSSIAN: f64 = 10.0 * C_CGS;

pub fn dipole_to_gaussian(mu_si: f64) -> Result<f64, ConfigError> {
    if !(mu_si > 0.0) || !mu_si.is_finite() {
        return Err(ConfigError::Invalid(format!(
            "dipole moment must be positive and finite, got {mu_si} C·m"
        )));
    }
    Ok(mu_si * DIPOLE_SI_TO_GAUSSIAN)
}

/// Inverse of [`dipole_to_gaussian`].
pub fn gaussian_to_dipole_si(mu_gauss: f64) -> f64 {
    mu_gauss / DIPOLE_SI_TO_GAUSSIAN
}

/// Full physical setup of one quench scenario. Construct through
/// [`PhysicalConfig::new`] or [`PhysicalConfig::builder`]; fields are in
/// Gaussian-cgs units.
#[derive(Debug, Clone, Serialize)]
pub struct PhysicalConfig {
    /// Dipole moment magnitude (statC·cm).
    pub mu: f64,
    /// Transition wavenumber (cm⁻¹); ω0 = c·k0.
    pub k0: f64,
    /// Pre-quench atom position (cm), z > 0.
    pub r0: [f64; 3],
    /// Post-quench atom position (cm), z > 0.
    pub r: [f64; 3],
    pub lambda: Lambda,
    /// Quench duration (s), used only for validity reporting.
    pub quench_duration: Option<f64>,
    /// Light-cone exclusion half-width, relative to R̄.
    pub delta_lc: f64,
    /// Pass threshold for the sudden-approximation ratios.
    pub ratio_threshold: f64,
}

/// SI-facing builder mirroring the flat config-file keys.
#[derive(Debug, Clone)]
pub struct ConfigBuilder {
    pub mu_si: f64,
    pub k0_si: f64,
    pub z0_si: f64,
    pub z_si: f64,
    pub lambda: f64,
    pub quench_duration: Option<f64>,
    pub delta_lc: f64,
    pub ratio_threshold: f64,
}

impl Default for ConfigBuilder {
    fn default() -> Self {
        // Reference scenario: optical-scale transition, ~100 nm from the wall,
        // quenched inward by 1 Å.
        ConfigBuilder {
            mu_si: 6.31e-30,
            k0_si: 5.0e7,
            z0_si: 1.001e-7,
            z_si: 1.0e-7,
            lambda: -1.0,
            quench_duration: None,
            delta_lc: 0.02,
            ratio_threshold: 0.2,
        }
    }
}

impl ConfigBuilder {
    pub fn build(&self) -> Result<PhysicalConfig, ConfigError> {
        PhysicalConfig::new(
            self.mu_si,
            self.k0_si,
            [0.0, 0.0, self.z0_si],
            [0.0, 0.0, self.z_si],
            Lambda::from_f64(self.lambda)?,
            self.quench_duration,
        )
        .map(|mut c| {
            c.delta_lc = self.delta_lc;
            c.ratio_threshold = self.ratio_threshold;
            c
        })
    }

    /// Overlay `key = value` pairs from a flat config file.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::File(format!("{}: {e}", path.display())))?;
        let kv = parse_flat_config(&text)?;
        self.apply_pairs(&kv)
    }

    pub fn apply_pairs(&mut self, kv: &HashMap<String, f64>) -> Result<(), ConfigError> {
        for (k, v) in kv {
            match k.as_str() {
                "mu_si" => self.mu_si = *v,
                "k0" => self.k0_si = *v,
                "z0" => self.z0_si = *v,
                "z" => self.z_si = *v,
                "lambda" => self.lambda = *v,
                "quench_duration" => self.quench_duration = Some(*v),
                "delta_lc" => self.delta_lc = *v,
                "ratio_threshold" => self.ratio_threshold = *v,
                // grid keys are consumed by the mode-sum front end
                "cavity_L" | "n_max" | "k_cutoff" => {}
                other => {
                    return Err(ConfigError::File(format!("unknown config key `{other}`")))
                }
            }
        }
        Ok(())
    }
}

pub fn parse_flat_config(text: &str) -> Result<HashMap<String, f64>, ConfigError> {
    let mut out = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::File(format!("line {}: expected key = value", lineno + 1)))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| ConfigError::File(format!("line {}: bad number `{}`", lineno + 1, v.trim())))?;
        out.insert(k.trim().to_string(), value);
    }
    Ok(out)
}

impl PhysicalConfig {
    /// SI inputs: dipole moment (C·m), wavenumber (m⁻¹), positions (m).
    pub fn new(
        mu_si: f64,
        k0_si: f64,
        r0_si: [f64; 3],
        r_si: [f64; 3],
        lambda: Lambda,
        quench_duration: Option<f64>,
    ) -> Result<Self, ConfigError> {
        let mu = dipole_to_gaussian(mu_si)?;
        if !(k0_si > 0.0) || !k0_si.is_finite() {
            return Err(ConfigError::Invalid(format!("k0 must be > 0, got {k0_si}")));
        }
        if !(r0_si[2] > 0.0) || !(r_si[2] > 0.0) {
            return Err(ConfigError::Invalid(
                "both atom positions must lie above the wall (z > 0)".into(),
            ));
        }
        if let Some(tau) = quench_duration {
            if !(tau >= 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "quench_duration must be >= 0, got {tau}"
                )));
            }
        }
        Ok(PhysicalConfig {
            mu,
            k0: k0_si * 1e-2,
            r0: r0_si.map(|x| x * 1e2),
            r: r_si.map(|x| x * 1e2),
            lambda,
            quench_duration,
            delta_lc: 0.02,
            ratio_threshold: 0.2,
        })
    }

    pub fn builder() -> ConfigBuilder {
        ConfigBuilder::default()
    }

    /// Transition angular frequency ω0 = c·k0 (s⁻¹).
    pub fn omega0(&self) -> f64 {
        C_CGS * self.k0
    }

    pub fn geometry(&self) -> GeometryDerived {
        derive_geometry(self)
    }

    pub fn reduce(&self, t: f64) -> ReducedArgs {
        reduce(self, t)
    }
}

/// Image-reflection matrix across the z = 0 wall.
pub const SIGMA: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];

/// σ v: mirror a point (or vector) through the wall plane.
pub fn reflect(v: [f64; 3]) -> [f64; 3] {
    [v[0], v[1], -v[2]]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Distances derived from the quench geometry (all cm):
/// `rp` = |r - r0|, `rbar` = |r - σr| = 2 r_z, `rbarp` = |r - σr0|.
#[derive(Debug, Clone, Serialize)]
pub struct GeometryDerived {
    pub rp: f64,
    pub rbar: f64,
    pub rbarp: f64,
    pub rp_vec: [f64; 3],
    pub rbar_vec: [f64; 3],
    pub rbarp_vec: [f64; 3],
    pub sigma: [[f64; 3]; 3],
}

pub fn derive_geometry(cfg: &PhysicalConfig) -> GeometryDerived {
    let rp_vec = sub(cfg.r, cfg.r0);
    let rbar_vec = sub(cfg.r, reflect(cfg.r));
    let rbarp_vec = sub(cfg.r, reflect(cfg.r0));
    GeometryDerived {
        rp: norm(rp_vec),
        rbar: norm(rbar_vec),
        rbarp: norm(rbarp_vec),
        rp_vec,
        rbar_vec,
        rbarp_vec,
        sigma: SIGMA,
    }
}

/// Dimensionless integral arguments at time t:
/// χ0 = k0 R̄, χ̄0 = k0 R̄′, a = ct/R̄, ā = ct/R̄′. The auxiliary parameter
/// q enters the reduced closed form through its q → 1 limit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReducedArgs {
    pub chi0: f64,
    pub chibar0: f64,
    pub a: f64,
    pub abar: f64,
    pub q: f64,
}

pub fn reduce(cfg: &PhysicalConfig, t: f64) -> ReducedArgs {
    let geo = derive_geometry(cfg);
    let ct = C_CGS * t;
    ReducedArgs {
        chi0: cfg.k0 * geo.rbar,
        chibar0: cfg.k0 * geo.rbarp,
        a: ct / geo.rbar,
        abar: ct / geo.rbarp,
        q: 1.0,
    }
}

/// Where a sample sits relative to the two light cones at ct = R̄ and
/// ct = R̄′.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    PreLightcone,
    ExcludedWindow,
    BetweenCones,
    PostLightcone,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::PreLightcone => "pre_lightcone",
            Regime::ExcludedWindow => "excluded_window",
            Regime::BetweenCones => "between_cones",
            Regime::PostLightcone => "post_lightcone",
        }
    }
}

/// How a sample was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    QuadratureOracle,
    ModeSum,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::QuadratureOracle => "quadrature_oracle",
            Method::ModeSum => "mode_sum",
        }
    }
}

/// One (time, energy) record of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct EnergySample {
    /// Time (s).
    pub t: f64,
    pub ct_over_rbar: f64,
    /// Energy (J). NaN only if the sample sits exactly on a light cone.
    pub energy: f64,
    pub regime: Regime,
    pub method: Method,
}

/// Classify ct (cm) against the light cones, with the exclusion window
/// (half-width delta_lc·R̄) taking precedence.
pub fn classify_regime(cfg: &PhysicalConfig, ct: f64) -> Regime {
    let geo = derive_geometry(cfg);
    let w = cfg.delta_lc * geo.rbar;
    if (ct - geo.rbar).abs() < w || (ct - geo.rbarp).abs() < w {
        return Regime::ExcludedWindow;
    }
    let lo = geo.rbar.min(geo.rbarp);
    let hi = geo.rbar.max(geo.rbarp);
    if ct < lo {
        Regime::PreLightcone
    } else if ct > hi {
        Regime::PostLightcone
    } else {
        Regime::BetweenCones
    }
}

/// Sudden-approximation validity: the quench must be fast against both the
/// wall round-trip time 2 z0/c and the inverse transition frequency.
#[derive(Debug, Clone, Serialize)]
pub enum ValidityReport {
    NotEvaluated,
    Evaluated {
        /// quench_duration / (2 z0 / c)
        round_trip_ratio: f64,
        /// quench_duration · ω0
        frequency_ratio: f64,
        threshold: f64,
        pass: bool,
    },
}

pub fn validity_report(cfg: &PhysicalConfig) -> ValidityReport {
    let Some(tau) = cfg.quench_duration else {
        return ValidityReport::NotEvaluated;
    };
    let round_trip = 2.0 * cfg.r0[2] / C_CGS;
    let round_trip_ratio = tau / round_trip;
    let frequency_ratio = tau * cfg.omega0();
    let threshold = cfg.ratio_threshold;
    ValidityReport::Evaluated {
        round_trip_ratio,
        frequency_ratio,
        threshold,
        pass: round_trip_ratio < threshold && frequency_ratio < threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_cfg() -> PhysicalConfig {
        ConfigBuilder::default().build().unwrap()
    }

    #[test]
    fn dipole_conversion() {
        let g = dipole_to_gaussian(6.31e-30).unwrap();
        assert!((g - 1.891689e-18).abs() / 1.891689e-18 < 1e-5, "{g:e}");
        assert!(dipole_to_gaussian(0.0).is_err());
        assert!(dipole_to_gaussian(-1.0).is_err());
        let mu = 3.2e-29;
        let back = gaussian_to_dipole_si(dipole_to_gaussian(mu).unwrap());
        assert!(((back - mu) / mu).abs() < 1e-15);
    }

    #[test]
    fn geometry_reference_values() {
        let geo = reference_cfg().geometry();
        // all distances in cm
        assert!((geo.rp - 1.0e-8).abs() / 1.0e-8 < 1e-6, "rp = {}", geo.rp);
        assert!((geo.rbar - 2.0e-5).abs() / 2.0e-5 < 1e-12);
        assert!((geo.rbarp - 2.001e-5).abs() / 2.001e-5 < 1e-12);
    }

    #[test]
    fn geometry_degenerate_quench() {
        let cfg = PhysicalConfig::new(
            6.31e-30,
            5.0e7,
            [0.0, 0.0, 1e-7],
            [0.0, 0.0, 1e-7],
            Lambda::Full,
            None,
        )
        .unwrap();
        let geo = cfg.geometry();
        assert_eq!(geo.rp, 0.0);
        assert_eq!(geo.rbar, geo.rbarp);
        assert!((geo.rbar - 2e-5).abs() < 1e-18);
    }

    #[test]
    fn reflection_is_involution() {
        let v = [0.3, -2.0, 5.5];
        assert_eq!(reflect(reflect(v)), v);
    }

    #[test]
    fn translation_parallel_to_wall_leaves_distances() {
        let cfg = PhysicalConfig::new(
            6.31e-30,
            5.0e7,
            [0.2e-7, -0.7e-7, 1.001e-7],
            [-0.4e-7, 0.1e-7, 1.0e-7],
            Lambda::Full,
            None,
        )
        .unwrap();
        let g1 = cfg.geometry();
        let mut shifted = cfg.clone();
        for p in [&mut shifted.r0, &mut shifted.r] {
            p[0] += 3.3e-5;
            p[1] -= 1.1e-5;
        }
        let g2 = shifted.geometry();
        for (a, b) in [(g1.rp, g2.rp), (g1.rbar, g2.rbar), (g1.rbarp, g2.rbarp)] {
            assert!(((a - b) / b.max(1e-300)).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_args() {
        let cfg = reference_cfg();
        let red = cfg.reduce(0.0);
        assert!((red.chi0 - 10.0).abs() < 1e-12);
        assert!((red.chibar0 - 10.005).abs() < 1e-12);
        assert_eq!(red.a, 0.0);
        assert_eq!(red.abar, 0.0);
        assert_eq!(red.q, 1.0);
        // light-cone marker
        let geo = cfg.geometry();
        let red = cfg.reduce(geo.rbar / C_CGS);
        assert!((red.a - 1.0).abs() < 1e-14);
        // consistency a = ā · (R̄′/R̄)
        let red = cfg.reduce(3.7e-16);
        assert!((red.a - red.abar * geo.rbarp / geo.rbar).abs() < 1e-14);
    }

    #[test]
    fn reduce_monotone_in_time() {
        let cfg = reference_cfg();
        let mut prev = -1.0;
        for i in 0..50 {
            let a = cfg.reduce(i as f64 * 1e-17).a;
            assert!(a > prev);
            prev = a;
        }
    }

    #[test]
    fn lambda_validation() {
        assert_eq!(Lambda::from_f64(0.0).unwrap(), Lambda::Rwa);
        assert_eq!(Lambda::from_f64(-1.0).unwrap(), Lambda::Full);
        assert!(Lambda::from_f64(0.5).is_err());
        assert!(Lambda::from_f64(1.0).is_err());
    }

    #[test]
    fn validity_ratios() {
        let mut b = ConfigBuilder {
            z0_si: 1e-7,
            quench_duration: Some(1e-16),
            ..Default::default()
        };
        let cfg = b.build().unwrap();
        match validity_report(&cfg) {
            ValidityReport::Evaluated {
                round_trip_ratio, ..
            } => {
                assert!((round_trip_ratio - 0.15).abs() < 0.01, "{round_trip_ratio}");
            }
            _ => panic!("expected evaluation"),
        }

        b.quench_duration = Some(0.0);
        match validity_report(&b.build().unwrap()) {
            ValidityReport::Evaluated {
                round_trip_ratio,
                frequency_ratio,
                pass,
                ..
            } => {
                assert_eq!(round_trip_ratio, 0.0);
                assert_eq!(frequency_ratio, 0.0);
                assert!(pass);
            }
            _ => panic!("expected evaluation"),
        }

        b.quench_duration = Some(1e-14);
        match validity_report(&b.build().unwrap()) {
            ValidityReport::Evaluated {
                round_trip_ratio,
                pass,
                ..
            } => {
                assert!((round_trip_ratio - 15.0).abs() < 0.5);
                assert!(!pass);
            }
            _ => panic!("expected evaluation"),
        }

        b.quench_duration = None;
        assert!(matches!(
            validity_report(&b.build().unwrap()),
            ValidityReport::NotEvaluated
        ));
    }

    #[test]
    fn regime_classification() {
        let cfg = reference_cfg();
        let geo = cfg.geometry();
        assert_eq!(classify_regime(&cfg, 0.5 * geo.rbar), Regime::PreLightcone);
        assert_eq!(classify_regime(&cfg, geo.rbar), Regime::ExcludedWindow);
        assert_eq!(classify_regime(&cfg, 2.0 * geo.rbar), Regime::PostLightcone);
        // a geometry with well-separated cones exposes the middle regime
        let wide = PhysicalConfig::new(
            6.31e-30,
            5.0e7,
            [0.0, 0.0, 3.0e-7],
            [0.0, 0.0, 1.0e-7],
            Lambda::Full,
            None,
        )
        .unwrap();
        let g = wide.geometry();
        let mid = 0.5 * (g.rbar + g.rbarp);
        assert_eq!(classify_regime(&wide, mid), Regime::BetweenCones);
    }

    #[test]
    fn flat_config_parsing() {
        let text = "mu_si = 6.31e-30\n# comment\nk0=5.0e7\n\nz0 = 1.001e-7 # inline\n";
        let kv = parse_flat_config(text).unwrap();
        assert_eq!(kv.len(), 3);
        assert_eq!(kv["k0"], 5.0e7);
        assert!(parse_flat_config("nonsense").is_err());
        assert!(parse_flat_config("k0 = abc").is_err());
    }

    #[test]
    fn rejects_bad_positions() {
        assert!(PhysicalConfig::new(
            6.31e-30,
            5.0e7,
            [0.0, 0.0, -1e-7],
            [0.0, 0.0, 1e-7],
            Lambda::Full,
            None
        )
        .is_err());
        assert!(PhysicalConfig::new(
            6.31e-30,
            -5.0e7,
            [0.0, 0.0, 1e-7],
            [0.0, 0.0, 1e-7],
            Lambda::Full,
            None
        )
        .is_err());
    }
}
