//! Adaptive quadrature over finite and semi-infinite intervals.
//!
//! The engine pairs two Gauss-Legendre rules (15 and 31 points) per panel and
//! uses their difference as the local error estimate. Panels are kept in a
//! max-heap keyed by error and the worst one is bisected until the error sum
//! meets the tolerance. Semi-infinite integrals are broken into geometrically
//! growing segments scaled by a caller-supplied decay hint; an integrable
//! power singularity at the lower endpoint is removed by the substitution
//! x = a + y^(1/(1+p)).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Outcome of a quadrature call.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Exponential decay scale of the integrand, `f ~ exp(-rate * x)` roughly.
/// Used only to place segment boundaries; adaptivity does the rest.
#[derive(Debug, Clone, Copy)]
pub struct DecayHint {
    pub rate: f64,
}

impl DecayHint {
    pub fn rate(rate: f64) -> Self {
        DecayHint { rate }
    }
}

/// Integrable power singularity at the lower endpoint:
/// `f ~ (x - lower)^power` with `power` in (-1, 0).
#[derive(Debug, Clone, Copy)]
pub struct SingularityHint {
    pub power: f64,
}

/// Absolute/relative tolerance pair.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances { abs: 1e-13, rel: 1e-10 };

    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerances { abs, rel }
    }

    fn goal(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
fn gauss_legendre(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi-style initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussRule { nodes, weights }
}

fn rule_lo() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(15))
}

fn rule_hi() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(31))
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn eval_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, evals: &mut usize) -> Panel {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let lo = rule_lo();
    let hi = rule_hi();
    let mut s_lo = 0.0;
    for (x, w) in lo.nodes.iter().zip(&lo.weights) {
        s_lo += w * f(mid + half * x);
    }
    let mut s_hi = 0.0;
    for (x, w) in hi.nodes.iter().zip(&hi.weights) {
        s_hi += w * f(mid + half * x);
    }
    *evals += lo.nodes.len() + hi.nodes.len();
    let value = s_hi * half;
    let error = (s_hi - s_lo).abs() * half;
    Panel { a, b, value, error }
}

const MAX_PANELS: usize = 4000;

/// Adaptive integration of `f` over the finite interval [a, b].
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerances) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate_finite", "endpoints must be finite"));
    }
    if a == b {
        return Ok(QuadratureResult { value: 0.0, abs_error_estimate: 0.0, evaluations: 1 });
    }
    let mut evals = 0usize;
    let mut heap = BinaryHeap::new();
    let first = eval_panel(&f, a, b, &mut evals);
    let mut total = first.value;
    let mut err = first.error;
    heap.push(first);

    while err > tol.goal(total) && heap.len() < MAX_PANELS {
        let worst = heap.pop().expect("heap nonempty");
        let width = worst.b - worst.a;
        if width.abs() <= f64::EPSILON * (worst.a.abs() + worst.b.abs() + 1.0) {
            // Can no longer refine; push back and accept what we have.
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        total -= worst.value;
        err -= worst.error;
        let left = eval_panel(&f, worst.a, mid, &mut evals);
        let right = eval_panel(&f, mid, worst.b, &mut evals);
        total += left.value + right.value;
        err += left.error + right.error;
        heap.push(left);
        heap.push(right);
    }

    if err > tol.goal(total) * 4.0 {
        return Err(Error::QuadratureNonConvergence {
            op: "integrate_finite",
            partial_value: total,
            error_estimate: err,
            evaluations: evals,
        });
    }
    Ok(QuadratureResult { value: total, abs_error_estimate: err.max(0.0), evaluations: evals.max(1) })
}

/// Adaptive integration of `f` over [lower, ∞) with default tolerances.
pub fn integrate_semiinfinite<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    decay: DecayHint,
    singularity: Option<SingularityHint>,
) -> Result<QuadratureResult> {
    integrate_semiinfinite_with(f, lower, decay, singularity, Tolerances::DEFAULT)
}

/// As [`integrate_semiinfinite`] with explicit tolerances.
pub fn integrate_semiinfinite_with<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    decay: DecayHint,
    singularity: Option<SingularityHint>,
    tol: Tolerances,
) -> Result<QuadratureResult> {
    if !lower.is_finite() || lower < 0.0 {
        return Err(Error::domain("integrate_semiinfinite", "lower endpoint must be finite and >= 0"));
    }
    if !(decay.rate > 0.0) {
        return Err(Error::domain("integrate_semiinfinite", "decay rate must be positive"));
    }
    if let Some(s) = singularity {
        if !(s.power > -1.0 && s.power < 0.0) {
            return Err(Error::domain(
                "integrate_semiinfinite",
                "singularity power must lie in (-1, 0)",
            ));
        }
    }

    // Substitution x = lower + y^q removes an (x - lower)^p endpoint
    // singularity when q = 1/(1 + p).
    let q = singularity.map(|s| 1.0 / (1.0 + s.power)).unwrap_or(1.0);
    let g = |y: f64| -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        let x = lower + y.powf(q);
        let jac = q * y.powf(q - 1.0);
        let v = f(x) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let scale = 1.0 / decay.rate;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut evals = 0usize;
    // Segment ends at x-landmarks scale*(2^k - 1); in y these shrink toward
    // comparable widths so each segment is a well-conditioned panel seed.
    let mut x_prev = 0.0f64;
    let mut negligible_run = 0;
    for k in 1..60 {
        let x_next = scale * ((1u64 << k.min(52)) as f64 - 1.0);
        let y0 = x_prev.powf(1.0 / q);
        let y1 = x_next.powf(1.0 / q);
        let seg_tol = Tolerances::new(tol.abs * 0.25, tol.rel * 0.25);
        let seg = integrate_finite(&g, y0, y1, seg_tol)?;
        total += seg.value;
        err += seg.abs_error_estimate;
        evals += seg.evaluations;
        x_prev = x_next;

        // Stop on two consecutive negligible segments, but never before the
        // landmarks cover 255 decay lengths and something nonzero has been
        // accumulated: integrands peaked away from the origin (Laplace
        // transforms of off-diagonal kernels) would otherwise be truncated.
        let goal = tol.goal(total);
        if k >= 8
            && total != 0.0
            && seg.value.abs() <= 0.25 * goal
            && seg.abs_error_estimate <= 0.25 * goal
        {
            negligible_run += 1;
            if negligible_run >= 2 {
                break;
            }
        } else {
            negligible_run = 0;
        }
    }

    if err > tol.goal(total) * 8.0 {
        return Err(Error::QuadratureNonConvergence {
            op: "integrate_semiinfinite",
            partial_value: total,
            error_estimate: err,
            evaluations: evals,
        });
    }
    Ok(QuadratureResult { value: total, abs_error_estimate: err, evaluations: evals.max(1) })
}
