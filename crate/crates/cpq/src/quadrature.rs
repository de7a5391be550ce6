//! Independent oracle for semi-infinite oscillatory integrals.
//!
//! Conditionally convergent integrals ∫₀^∞ f(χ) dχ with oscillatory f are
//! given their distributional value by exponential regularization: for each
//! η in a decreasing schedule the absolutely convergent
//! ∫₀^∞ f(χ) e^{-ηχ} dχ is computed by panel integration between zeros of
//! the dominant oscillation, the panel sums are accelerated as an
//! alternating series, and the fixed-η values are extrapolated to η = 0 by
//! polynomial (Richardson/Neville) extrapolation.
//!
//! The integrand must be bounded by a power of χ times an oscillatory
//! factor of the declared dominant frequency; that contract is the
//! caller's responsibility.

use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("extrapolation needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("eta schedule must be strictly decreasing and positive")]
    BadSchedule,
    #[error("dominant frequency must be positive and finite, got {0}")]
    BadFrequency(f64),
}

/// Specification of one half-line oscillatory integral.
pub struct OscIntegralSpec<'a> {
    /// Integrand f(χ), χ ≥ 0, without the regularizer.
    pub integrand: &'a dyn Fn(f64) -> f64,
    /// Frequency of the fastest oscillation; panel boundaries sit at the
    /// zeros of sin(dominant_freq·χ + phase).
    pub dominant_freq: f64,
    /// Phase offset of the dominant oscillation.
    pub phase: f64,
    /// Decreasing regularizer strengths, extrapolated to zero.
    pub eta_schedule: Vec<f64>,
    /// Relative tolerance per fixed-η integral.
    pub panel_tolerance: f64,
    /// Tolerance the extrapolated value must meet to count as converged.
    pub target_tolerance: f64,
    /// Hard cap on panels per fixed-η integral.
    pub max_panels: usize,
}

pub const DEFAULT_ETA_SCHEDULE: [f64; 5] = [0.1, 0.05, 0.025, 0.0125, 0.00625];

impl<'a> OscIntegralSpec<'a> {
    pub fn new(integrand: &'a dyn Fn(f64) -> f64, dominant_freq: f64) -> Self {
        OscIntegralSpec {
            integrand,
            dominant_freq,
            phase: 0.0,
            eta_schedule: DEFAULT_ETA_SCHEDULE.to_vec(),
            panel_tolerance: 1e-10,
            target_tolerance: 1e-6,
            max_panels: 400_000,
        }
    }

    /// Geometric schedule eta0 · 2^{-k}, k = 0..n. Longer schedules buy
    /// extrapolation accuracy at the cost of slower fixed-η integrals.
    pub fn with_geometric_schedule(mut self, eta0: f64, n: usize) -> Self {
        self.eta_schedule = (0..n).map(|k| eta0 / (1u64 << k) as f64).collect();
        self
    }

    /// Geometric schedule with an arbitrary ratio. Milder ratios keep the
    /// smallest η (and with it the integration range and its roundoff)
    /// moderate at the cost of larger extrapolation weights.
    pub fn with_ratio_schedule(mut self, eta0: f64, ratio: f64, n: usize) -> Self {
        self.eta_schedule = (0..n).map(|k| eta0 / ratio.powi(k as i32)).collect();
        self
    }
}

/// Result of [`integrate_halfline`]. `converged == false` flags a best
/// estimate that missed its tolerance, never a silent wrong answer.
#[derive(Debug, Clone, Copy)]
pub struct OscIntegralResult {
    pub value: f64,
    pub err_estimate: f64,
    pub converged: bool,
}

// 15-point Gauss-Legendre nodes/weights on [-1, 1], positive half,
// computed once by Newton iteration on P15.
fn gl15() -> &'static ([f64; 8], [f64; 8]) {
    static TABLE: OnceLock<([f64; 8], [f64; 8])> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 15usize;
        let mut xs = [0.0; 8];
        let mut ws = [0.0; 8];
        for i in 0..8 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            xs[i] = x;
            ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    })
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0f64, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// GL15 value together with the weighted absolute sum (the roundoff
/// scale of the panel, QUADPACK's resabs).
fn gl15_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let (xs, ws) = gl15();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    // nodes are ordered outermost first; the last entry is x = 0
    let fc = f(mid);
    let mut s = ws[7] * fc;
    let mut sabs = ws[7] * fc.abs();
    for i in 0..7 {
        let fp = f(mid + half * xs[i]);
        let fm = f(mid - half * xs[i]);
        s += ws[i] * (fp + fm);
        sabs += ws[i] * (fp.abs() + fm.abs());
    }
    (s * half, sabs * half.abs())
}

/// Adaptive bisection around a GL15 core. Returns (value, error estimate).
///
/// Panels are driven to the roundoff floor rather than to a truncation
/// tolerance: the per-panel truncation error of the Gauss rule is
/// systematically signed across consecutive panels of an oscillatory
/// integrand and would otherwise accumulate coherently over very long
/// ranges. Once a panel is accepted at the floor only random-signed
/// rounding remains, which is what the reported error reflects.
fn integrate_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
    let (whole, _) = gl15_panel(f, a, b);
    let mid = 0.5 * (a + b);
    let (h1, r1) = gl15_panel(f, a, mid);
    let (h2, r2) = gl15_panel(f, mid, b);
    let halves = h1 + h2;
    let err = (whole - halves).abs();
    // The whole-vs-halves comparison carries rounding of order
    // eps · resabs (amplified by interior cancellations of the integrand),
    // so the floor must sit above that noise or smooth panels recurse on
    // it; truncation surviving below the floor is dead after one or two
    // bisections, hence the shallow depth cap.
    let floor = 64.0 * f64::EPSILON * (r1 + r2);
    if err <= floor || depth >= 4 {
        return (halves, err.min(floor) * 0.5);
    }
    if err <= tol {
        return (halves, err);
    }
    let (v1, e1) = integrate_panel(f, a, mid, 0.5 * tol, depth + 1);
    let (v2, e2) = integrate_panel(f, mid, b, 0.5 * tol, depth + 1);
    (v1 + v2, e1 + e2)
}

/// Iterated averaging of the trailing partial sums (Euler-style
/// acceleration for alternating panel series). Returns the apex value and
/// the last averaging increment.
fn accelerate_tail(partials: &[f64]) -> (f64, f64) {
    let m = partials.len().min(24);
    if m < 3 {
        let v = *partials.last().unwrap();
        return (v, f64::INFINITY);
    }
    let mut row: Vec<f64> = partials[partials.len() - m..].to_vec();
    let mut prev_apex = row[row.len() - 1];
    let mut apex = prev_apex;
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
        prev_apex = apex;
        apex = row[row.len() - 1];
    }
    (apex, (apex - prev_apex).abs())
}

struct FixedEta {
    value: f64,
    err: f64,
    converged: bool,
}

/// True when the last `m` panel sums alternate strictly in sign; only
/// then is the averaging acceleration guaranteed to contract toward the
/// series limit.
fn tail_alternates(sums: &[f64], m: usize) -> bool {
    if sums.len() < m {
        return false;
    }
    sums[sums.len() - m..]
        .windows(2)
        .all(|w| w[0] * w[1] < 0.0)
}

/// One absolutely convergent fixed-η integral by half-period panels.
fn integrate_fixed_eta(spec: &OscIntegralSpec<'_>, eta: f64) -> FixedEta {
    let freq = spec.dominant_freq;
    let panel_len = std::f64::consts::PI / freq;
    let f = |chi: f64| (spec.integrand)(chi) * (-eta * chi).exp();

    // First boundary: smallest zero of sin(freq·χ + phase) above zero.
    let n0 = (spec.phase / std::f64::consts::PI).floor() as i64;
    let mut upper = ((-n0) as f64 * std::f64::consts::PI - spec.phase) / freq;
    while upper <= 0.0 {
        upper += panel_len;
    }

    let mut lower = 0.0f64;
    let mut total = 0.0f64;
    let mut comp = 0.0f64; // Kahan compensation
    let mut quad_err = 0.0f64;
    let mut partials: Vec<f64> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    let mut recent: Vec<f64> = Vec::new();

    // Geometric decay per panel of the regularizer alone.
    let rho = (-eta * panel_len).exp();
    // Beyond roughly χ = 3/η any power-law growth in the envelope has been
    // overtaken by the exponential, so the windowed tail bound is valid.
    let chi_decay = 3.0 / eta;

    let mut n = 0usize;
    let mut tail_bound = f64::INFINITY;
    loop {
        // zero truncation budget: every panel refines to the roundoff
        // floor (see integrate_panel)
        let (s, e) = integrate_panel(&f, lower, upper, 0.0, 0);
        let y = s - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
        quad_err += e;
        partials.push(total);
        sums.push(s);
        // the envelope window must span beat patterns between the dominant
        // oscillation and any slower component of the integrand
        recent.push(s.abs());
        if recent.len() > 64 {
            recent.remove(0);
        }

        n += 1;
        lower = upper;
        upper += panel_len;

        if n >= 64 && lower >= chi_decay {
            let env = recent.iter().cloned().fold(0.0f64, f64::max);
            tail_bound = env * (64.0 + rho / (1.0 - rho)) * 1.5;
            // The tolerance is relative to the running value, so heavily
            // cancelling sums keep integrating until the small remainder
            // itself is resolved.
            let tol_abs = spec.panel_tolerance * total.abs().max(f64::MIN_POSITIVE);
            if tail_bound <= tol_abs {
                break;
            }
        }
        if n >= spec.max_panels {
            return FixedEta {
                value: total,
                err: tail_bound.max(quad_err),
                converged: false,
            };
        }
    }

    // Acceleration polish, used only where it is provably contractive:
    // a strictly alternating tail of panel sums.
    let (value, series_err) = if tail_alternates(&sums, 13) {
        let (accel, accel_err) = accelerate_tail(&partials);
        if (accel - total).abs() <= tail_bound.max(1e-300) {
            (accel, accel_err.min(tail_bound))
        } else {
            (total, tail_bound)
        }
    } else {
        (total, tail_bound)
    };

    FixedEta {
        value,
        err: series_err + quad_err,
        converged: true,
    }
}

/// Direct panel summation of an absolutely convergent integrand whose
/// envelope decays like e^{-χ} (unit decay scale in its own variable).
/// No regularizer or extrapolation is involved.
pub fn integrate_decaying(
    integrand: &dyn Fn(f64) -> f64,
    dominant_freq: f64,
    rel_tol: f64,
) -> Result<f64, QuadratureError> {
    if !(dominant_freq > 0.0) || !dominant_freq.is_finite() {
        return Err(QuadratureError::BadFrequency(dominant_freq));
    }
    let panel_len = std::f64::consts::PI / dominant_freq;
    let rho = (-panel_len).exp();
    let mut lower = 0.0f64;
    let mut total = 0.0f64;
    let mut recent: Vec<f64> = Vec::new();
    let mut n = 0usize;
    loop {
        let tol_here = rel_tol * total.abs().max(1e-300) * 0.01;
        let (s, _) = integrate_panel(&integrand, lower, lower + panel_len, tol_here, 0);
        total += s;
        recent.push(s.abs());
        if recent.len() > 8 {
            recent.remove(0);
        }
        n += 1;
        lower += panel_len;
        if n >= 8 && lower >= 3.0 {
            let env = recent.iter().cloned().fold(0.0f64, f64::max);
            let tail = env * (4.0 + rho / (1.0 - rho)) * 1.5;
            if tail <= rel_tol * total.abs().max(f64::MIN_POSITIVE) {
                return Ok(total);
            }
        }
        if n >= 2_000_000 {
            return Ok(total);
        }
    }
}

/// Neville polynomial extrapolation of (η, value) points to η = 0.
/// The error estimate is the difference of the last two diagonal entries.
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> Result<(f64, f64), QuadratureError> {
    let n = points.len();
    if n < 3 {
        return Err(QuadratureError::TooFewPoints(n));
    }
    for w in points.windows(2) {
        if !(w[1].0 < w[0].0) || !(w[1].0 > 0.0) {
            return Err(QuadratureError::BadSchedule);
        }
    }
    let eta: Vec<f64> = points.iter().map(|p| p.0).collect();
    let mut tab: Vec<f64> = points.iter().map(|p| p.1).collect();
    let mut prev_diag = tab[0];
    let mut diag = tab[0];
    for j in 1..n {
        for i in 0..n - j {
            // correction form keeps constants exact
            tab[i] = tab[i + 1] + (tab[i + 1] - tab[i]) * eta[i + j] / (eta[i] - eta[i + j]);
        }
        prev_diag = diag;
        diag = tab[0];
    }
    Ok((diag, (diag - prev_diag).abs()))
}

/// Regularized value of ∫₀^∞ integrand(χ) dχ.
pub fn integrate_halfline(spec: &OscIntegralSpec<'_>) -> Result<OscIntegralResult, QuadratureError> {
    if !(spec.dominant_freq > 0.0) || !spec.dominant_freq.is_finite() {
        return Err(QuadratureError::BadFrequency(spec.dominant_freq));
    }
    if spec.eta_schedule.len() < 3 {
        return Err(QuadratureError::TooFewPoints(spec.eta_schedule.len()));
    }

    let mut points = Vec::with_capacity(spec.eta_schedule.len());
    let mut eta_err = 0.0f64;
    let mut all_converged = true;
    for &eta in &spec.eta_schedule {
        if !(eta > 0.0) {
            return Err(QuadratureError::BadSchedule);
        }
        let fe = integrate_fixed_eta(spec, eta);
        all_converged &= fe.converged;
        eta_err = eta_err.max(fe.err);
        points.push((eta, fe.value));
    }

    let (value, last_gap) = extrapolate_to_zero(&points)?;
    // Convergence of the extrapolation table is judged from the last two
    // diagonal increments; the per-η noise is amplified by the
    // extrapolation weights (bounded for a geometric schedule).
    let prev_gap = extrapolate_to_zero(&points[..points.len() - 1])
        .map(|(_, g)| g)
        .unwrap_or(last_gap);
    let err_estimate =
        2.0 * (last_gap + prev_gap) + 8.0 * eta_err + 8.0 * f64::EPSILON * value.abs();
    let converged = all_converged && err_estimate <= spec.target_tolerance;
    Ok(OscIntegralResult {
        value,
        err_estimate,
        converged,
    })
}
