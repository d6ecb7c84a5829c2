//! Sufficient conditions for the Hamiltonian to carry the maximal number of
//! bound states, evaluated numerically and reported with their raw
//! left/right-hand sides.

use crate::error::{Error, Result};
use crate::geometry::{self, Configuration, Geometry};
use crate::principal::PhiEvaluator;

/// Stable identifiers for the implemented criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionId {
    Gerschgorin,
    H3Explicit,
    H2Explicit,
    FlatTwoCenter,
    Cassini,
    RelFlat2,
    RelH2,
}

impl CriterionId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CriterionId::Gerschgorin => "gerschgorin",
            CriterionId::H3Explicit => "h3_explicit",
            CriterionId::H2Explicit => "h2_explicit",
            CriterionId::FlatTwoCenter => "flat_two_center",
            CriterionId::Cassini => "cassini",
            CriterionId::RelFlat2 => "rel_flat2",
            CriterionId::RelH2 => "rel_h2",
        }
    }
}

impl std::fmt::Display for CriterionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one criterion evaluation. `satisfied` always restates the
/// criterion's defining inequality on the recorded lhs/rhs (strictly).
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub criterion_id: CriterionId,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// The ν* (or E*) the matrix-based criteria were evaluated at.
    pub witness: Option<f64>,
    /// Number of bound states the criterion certifies, when it does.
    pub predicted_count: Option<usize>,
    /// For the oval criterion only: the row-sum verdict at the same witness,
    /// for the strength comparison.
    pub gerschgorin_at_witness: Option<bool>,
}

/// Row condition Φ_ii + Σ_{j≠i} |Φ_ij| < 0 at a given spectral point; if it
/// holds for every row, all N eigenvalue branches are negative there and
/// all N bound states exist.
pub fn gerschgorin_condition(geom: &Geometry, cfg: &Configuration, p_star: f64) -> Result<CriterionReport> {
    let evaluator = PhiEvaluator::new(geom, cfg)?;
    gerschgorin_condition_with(&evaluator, cfg, p_star)
}

pub fn gerschgorin_condition_with(
    evaluator: &PhiEvaluator,
    cfg: &Configuration,
    p_star: f64,
) -> Result<CriterionReport> {
    let phi = evaluator.eval(cfg, p_star)?.entries;
    let n = cfg.n();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        let mut row = phi.get(i, i);
        for j in 0..n {
            if j != i {
                row += phi.get(i, j).abs();
            }
        }
        worst = worst.max(row);
    }
    let satisfied = worst < 0.0;
    Ok(CriterionReport {
        criterion_id: CriterionId::Gerschgorin,
        lhs: worst,
        rhs: 0.0,
        satisfied,
        witness: Some(p_star),
        predicted_count: satisfied.then_some(n),
        gerschgorin_at_witness: None,
    })
}

/// First grid point satisfying the row condition; `None` proves nothing
/// (the condition is sufficient only).
pub fn gerschgorin_scan(geom: &Geometry, cfg: &Configuration, grid: &[f64]) -> Result<Option<f64>> {
    let evaluator = PhiEvaluator::new(geom, cfg)?;
    gerschgorin_scan_with(&evaluator, cfg, grid)
}

pub fn gerschgorin_scan_with(
    evaluator: &PhiEvaluator,
    cfg: &Configuration,
    grid: &[f64],
) -> Result<Option<f64>> {
    for &p in grid {
        if gerschgorin_condition_with(evaluator, cfg, p)?.satisfied {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Default witness grid: 64 logarithmic points in (1e-3 μ, μ) with
/// μ = min μ_i on the non-relativistic kinds; 64 linear points in
/// (max μ_i + δ, m - δ), δ = 1e-6 m, on the relativistic ones.
pub fn default_witness_grid(geom: &Geometry, cfg: &Configuration) -> Vec<f64> {
    const POINTS: usize = 64;
    if geom.is_relativistic() {
        let m = geom.mass().expect("mass");
        let delta = 1e-6 * m;
        let lo = cfg.max_mu() + delta;
        let hi = m - delta;
        if lo >= hi {
            return Vec::new();
        }
        (0..POINTS)
            .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / POINTS as f64)
            .collect()
    } else {
        let mu = cfg.min_mu();
        let lo = (1e-3 * mu).ln();
        let hi = mu.ln();
        (0..POINTS)
            .map(|k| (lo + (hi - lo) * (k as f64 + 0.5) / POINTS as f64).exp())
            .collect()
    }
}

/// Explicit three-dimensional hyperbolic criterion:
/// exp(d √(κ²+μ²) - 1) · sinh(κd)/(κd) > N - 1.
pub fn h3_criterion(kappa: f64, mu_min: f64, d_min: f64, n: usize) -> Result<CriterionReport> {
    if !(kappa > 0.0 && mu_min > 0.0 && d_min > 0.0) || n == 0 {
        return Err(Error::domain("h3_criterion", "need kappa, mu, d > 0 and n >= 1"));
    }
    let kd = kappa * d_min;
    let sinhc = if kd < 1e-6 { 1.0 + kd * kd / 6.0 } else { kd.sinh() / kd };
    let lhs = (d_min * (kappa * kappa + mu_min * mu_min).sqrt() - 1.0).exp() * sinhc;
    let rhs = (n - 1) as f64;
    let satisfied = lhs > rhs;
    Ok(CriterionReport {
        criterion_id: CriterionId::H3Explicit,
        lhs,
        rhs,
        satisfied,
        witness: None,
        predicted_count: satisfied.then_some(n),
        gerschgorin_at_witness: None,
    })
}

/// Explicit two-dimensional hyperbolic criterion with the regime selector
/// t(μ) = 1/2 + √(μ²/κ² + 1/4) against e:
///   t(μ) >= e:  N - 1 < (κd / 2e) t(μ)
///   t(μ) <  e:  N - 1 < (κd / 2) log t(μ).
pub fn h2_criterion(kappa: f64, mu_min: f64, d_min: f64, n: usize) -> Result<CriterionReport> {
    if !(kappa > 0.0 && mu_min > 0.0 && d_min > 0.0) || n == 0 {
        return Err(Error::domain("h2_criterion", "need kappa, mu, d > 0 and n >= 1"));
    }
    let t_mu = 0.5 + (mu_min * mu_min / (kappa * kappa) + 0.25).sqrt();
    let kd = kappa * d_min;
    let rhs = if t_mu >= std::f64::consts::E {
        kd / (2.0 * std::f64::consts::E) * t_mu
    } else {
        kd / 2.0 * t_mu.ln()
    };
    let lhs = (n - 1) as f64;
    let satisfied = lhs < rhs;
    Ok(CriterionReport {
        criterion_id: CriterionId::H2Explicit,
        lhs,
        rhs,
        satisfied,
        witness: None,
        predicted_count: satisfied.then_some(n),
        gerschgorin_at_witness: None,
    })
}

/// Two-center dichotomy on the flat spaces: √(μ1 μ2) d > 2 (plane) or > 1
/// (space) means exactly two bound states, otherwise exactly one.
pub fn flat_two_center_criterion(dimension: u8, mu1: f64, mu2: f64, d: f64) -> Result<CriterionReport> {
    if dimension != 2 && dimension != 3 {
        return Err(Error::domain("flat_two_center_criterion", "dimension must be 2 or 3"));
    }
    if !(mu1 > 0.0 && mu2 > 0.0 && d > 0.0) {
        return Err(Error::domain("flat_two_center_criterion", "need mu1, mu2, d > 0"));
    }
    let lhs = (mu1 * mu2).sqrt() * d;
    let rhs = if dimension == 2 { 2.0 } else { 1.0 };
    let satisfied = lhs > rhs;
    Ok(CriterionReport {
        criterion_id: CriterionId::FlatTwoCenter,
        lhs,
        rhs,
        satisfied,
        witness: None,
        predicted_count: Some(if satisfied { 2 } else { 1 }),
        gerschgorin_at_witness: None,
    })
}

/// Oval (Brauer-Cassini) condition: with rows ordered by ascending μ, every
/// pair (j, k) must put its Cassini oval strictly in the negative half-line,
/// i.e. Φ_jj + Φ_kk < 0 and Φ_jj Φ_kk > R_j R_k with R the off-diagonal row
/// sums. The hypothesis is weaker than the row condition, which implies it;
/// the report carries the row verdict at the same witness for comparison.
pub fn cassini_condition(geom: &Geometry, cfg: &Configuration, p_star: f64) -> Result<CriterionReport> {
    let evaluator = PhiEvaluator::new(geom, cfg)?;
    cassini_condition_with(&evaluator, cfg, p_star)
}

pub fn cassini_condition_with(
    evaluator: &PhiEvaluator,
    cfg: &Configuration,
    p_star: f64,
) -> Result<CriterionReport> {
    let n = cfg.n();
    if n < 2 {
        return Err(Error::domain("cassini_condition", "needs at least two centers"));
    }
    // reorder by ascending μ so the two largest diagonals come first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cfg.mu[a].partial_cmp(&cfg.mu[b]).unwrap());
    let phi = evaluator.eval(cfg, p_star)?.entries;
    let diag: Vec<f64> = order.iter().map(|&i| phi.get(i, i)).collect();
    let radius: Vec<f64> = order
        .iter()
        .map(|&i| (0..n).filter(|&j| j != i).map(|j| phi.get(i, j).abs()).sum())
        .collect();
    // rightmost real point over all ovals: the larger root of
    // (z - Φ_jj)(z - Φ_kk) = R_j R_k, doubled to keep the printed shape
    let mut worst = f64::NEG_INFINITY;
    for j in 0..n {
        for k in (j + 1)..n {
            let sum = diag[j] + diag[k];
            let gap = diag[j] - diag[k];
            let oval = sum + (gap * gap + 4.0 * radius[j] * radius[k]).sqrt();
            worst = worst.max(oval);
        }
    }
    let satisfied = worst < 0.0;
    let gersch = gerschgorin_condition_with(evaluator, cfg, p_star)?.satisfied;
    Ok(CriterionReport {
        criterion_id: CriterionId::Cassini,
        lhs: worst,
        rhs: 0.0,
        satisfied,
        witness: Some(p_star),
        predicted_count: satisfied.then_some(n),
        gerschgorin_at_witness: Some(gersch),
    })
}

/// Relativistic flat criterion: N - 1 < d (m - μ) / e.
pub fn rel_flat2_criterion(m: f64, mu_min: f64, d_min: f64, n: usize) -> Result<CriterionReport> {
    if !(m > 0.0 && d_min > 0.0) || !(mu_min < m) || n == 0 {
        return Err(Error::domain("rel_flat2_criterion", "need m, d > 0, mu < m, n >= 1"));
    }
    let lhs = (n - 1) as f64;
    let rhs = d_min * (m - mu_min) / std::f64::consts::E;
    let satisfied = lhs < rhs;
    Ok(CriterionReport {
        criterion_id: CriterionId::RelFlat2,
        lhs,
        rhs,
        satisfied,
        witness: None,
        predicted_count: satisfied.then_some(n),
        gerschgorin_at_witness: None,
    })
}

/// Relativistic hyperbolic criterion with S = √(m² + κ²/4):
///   S - μ >= e (S - m):  N - 1 < d (S - μ) / (24 (4π)^{3/2} e)
///   otherwise:           N - 1 < d (S - m) log((S-μ)/(S-m)) / (24 (4π)^{3/2}).
pub fn rel_h2_criterion(kappa: f64, m: f64, mu_min: f64, d_min: f64, n: usize) -> Result<CriterionReport> {
    if !(kappa > 0.0 && m > 0.0 && d_min > 0.0) || !(mu_min < m) || n == 0 {
        return Err(Error::domain("rel_h2_criterion", "need kappa, m, d > 0, mu < m, n >= 1"));
    }
    let s = (m * m + kappa * kappa / 4.0).sqrt();
    let c = 24.0 * (4.0 * std::f64::consts::PI).powf(1.5);
    let rhs = if s - mu_min >= std::f64::consts::E * (s - m) {
        d_min * (s - mu_min) / (c * std::f64::consts::E)
    } else {
        d_min * (s - m) * ((s - mu_min) / (s - m)).ln() / c
    };
    let lhs = (n - 1) as f64;
    let satisfied = lhs < rhs;
    Ok(CriterionReport {
        criterion_id: CriterionId::RelH2,
        lhs,
        rhs,
        satisfied,
        witness: None,
        predicted_count: satisfied.then_some(n),
        gerschgorin_at_witness: None,
    })
}

/// All criteria applicable to a geometry, evaluated on one configuration.
/// Matrix-based criteria scan the default witness grid.
pub fn evaluate_applicable(geom: &Geometry, cfg: &Configuration) -> Result<Vec<CriterionReport>> {
    geometry::require_valid(cfg, geom)?;
    let evaluator = PhiEvaluator::new(geom, cfg)?;
    let n = cfg.n();
    let d = cfg.min_distance();
    let mu = cfg.min_mu();
    let grid = default_witness_grid(geom, cfg);
    let mut out = Vec::new();

    match *geom {
        Geometry::Flat2 if n == 2 => {
            out.push(flat_two_center_criterion(2, cfg.mu[0], cfg.mu[1], d)?);
        }
        Geometry::Flat3 if n == 2 => {
            out.push(flat_two_center_criterion(3, cfg.mu[0], cfg.mu[1], d)?);
        }
        Geometry::Hyperbolic3 { kappa } => out.push(h3_criterion(kappa, mu, d, n)?),
        Geometry::Hyperbolic2 { kappa } => out.push(h2_criterion(kappa, mu, d, n)?),
        Geometry::RelFlat2 { m } => out.push(rel_flat2_criterion(m, mu, d, n)?),
        Geometry::RelHyperbolic2 { kappa, m } => out.push(rel_h2_criterion(kappa, m, mu, d, n)?),
        _ => {}
    }

    // matrix-based criteria at the first satisfied grid point, else at the
    // last grid point so the report still carries concrete numbers
    if !grid.is_empty() && n >= 1 {
        let witness = gerschgorin_scan_with(&evaluator, cfg, &grid)?;
        let at = witness.unwrap_or(*grid.last().expect("grid nonempty"));
        out.push(gerschgorin_condition_with(&evaluator, cfg, at)?);
        if n >= 2 {
            out.push(cassini_condition_with(&evaluator, cfg, at)?);
        }
    }
    Ok(out)
}
