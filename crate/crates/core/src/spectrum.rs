//! Eigenvalue branches of Φ, roots of the characteristic equation
//! det Φ = 0, bound-state enumeration with multiplicities, and pointwise
//! eigenfunction evaluation.

use crate::error::{Error, Result};
use crate::geometry::{self, Configuration, Geometry};
use crate::matrix::SquareMatrix;
use crate::principal::{self, PhiEvaluator, SpectralParam};

/// Spectral decomposition of a real symmetric matrix: ascending eigenvalues
/// and the matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenBranches {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: SquareMatrix,
}

/// Hard cap on the Jacobi solver size; the physics never needs more centers.
pub const MAX_CENTERS: usize = 64;

/// Full spectral decomposition by cyclic Jacobi rotations.
pub fn symmetric_eigen(m: &SquareMatrix) -> Result<EigenBranches> {
    let n = m.n();
    if n > MAX_CENTERS {
        return Err(Error::domain("symmetric_eigen", format!("n = {n} exceeds the cap {MAX_CENTERS}")));
    }
    let scale = m.max_norm().max(1e-300);
    let asym = m.max_asymmetry();
    if asym > 1e-12 * scale {
        return Err(Error::Asymmetry { asymmetry: asym, tolerance: 1e-12 * scale });
    }

    let mut a = m.clone();
    // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    let mut v = SquareMatrix::identity(n);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a.get(i, j).abs());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= 1e-18 * scale {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = 0.5 * (aqq - app) / apq;
                // tan of the rotation angle, smaller root for stability
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // apply the rotation G(p,q): A <- G' A G, V <- V G
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    // sort ascending, permuting eigenvector columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).unwrap());
    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = SquareMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        eigenvalues.push(a.get(k, k));
        for r in 0..n {
            vectors.set(r, col, v.get(r, k));
        }
    }
    Ok(EigenBranches { eigenvalues, eigenvectors: vectors })
}

/// A negative-energy eigenstate of the renormalized Hamiltonian.
#[derive(Debug, Clone)]
pub struct BoundState {
    /// ν_k (non-relativistic) or E_k (relativistic).
    pub location: f64,
    /// -ν_k² (non-relativistic) or E_k itself (relativistic).
    pub energy: f64,
    pub multiplicity: usize,
    /// Zero-eigenvector(s) of Φ at the root, one per multiplicity,
    /// normalized to unit Euclidean length with a positive component sum.
    pub amplitudes: Vec<Vec<f64>>,
    /// The A' M A bracket of the eigenfunction formula (first amplitude);
    /// 1.0 for relativistic states where the bracket is not defined here.
    pub normalization: f64,
    /// |det Φ| at the root, for diagnostics.
    pub det_residual: f64,
}

/// Eigenvalue threshold below which Φ's null space is counted:
/// 1e-8 · max(1, ‖Φ‖).
fn null_threshold(norm: f64) -> f64 {
    1e-8 * norm.max(1.0)
}

/// Sorted eigenvalues of Φ along a spectral grid. The grid must be given in
/// the direction of increasing branches: ascending ν on the
/// non-relativistic kinds, descending E on the relativistic ones. Since the
/// analytic branches are strictly monotone, the sorted branches must be
/// monotone along the grid; a violation beyond 1e-9 (relative to the
/// matrix scale) is a numerics bug and is reported as an error.
pub fn eigenvalue_branches(
    geom: &Geometry,
    cfg: &Configuration,
    grid: &[f64],
) -> Result<Vec<EigenBranches>> {
    geometry::require_valid(cfg, geom)?;
    let evaluator = PhiEvaluator::new(geom, cfg)?;
    eigenvalue_branches_with(&evaluator, cfg, grid)
}

pub fn eigenvalue_branches_with(
    evaluator: &PhiEvaluator,
    cfg: &Configuration,
    grid: &[f64],
) -> Result<Vec<EigenBranches>> {
    let geom = evaluator.geometry();
    let relativistic = geom.is_relativistic();
    for w in grid.windows(2) {
        let ok = if relativistic { w[1] < w[0] } else { w[1] > w[0] };
        if !ok {
            return Err(Error::domain(
                "eigenvalue_branches",
                "grid must ascend in nu (non-relativistic) or descend in E (relativistic)",
            ));
        }
    }
    let mut out = Vec::with_capacity(grid.len());
    let mut scale = 0.0f64;
    for &p in grid {
        let phi = evaluator.eval(cfg, p)?;
        scale = scale.max(phi.entries.max_norm());
        out.push(symmetric_eigen(&phi.entries)?);
    }
    let tol = 1e-9 * scale.max(1.0);
    for b in 0..cfg.n() {
        for (k, w) in out.windows(2).enumerate() {
            let delta = w[1].eigenvalues[b] - w[0].eigenvalues[b];
            if delta < -tol {
                return Err(Error::MonotonicityViolation { branch: b, index: k, delta, tolerance: tol });
            }
        }
    }
    Ok(out)
}

/// Search state for one monotone branch.
struct Bracket {
    branch: usize,
    lo: f64,
    hi: f64,
}

/// All bound states of the configuration: one bisection root per sorted
/// eigenvalue branch that changes sign, merged into multiplets by the
/// numerical null-space dimension of Φ at the root.
pub fn find_bound_states(geom: &Geometry, cfg: &Configuration, tol: f64) -> Result<Vec<BoundState>> {
    geometry::require_valid(cfg, geom)?;
    let evaluator = PhiEvaluator::new(geom, cfg)?;
    find_bound_states_with(&evaluator, cfg, tol)
}

pub fn find_bound_states_with(
    evaluator: &PhiEvaluator,
    cfg: &Configuration,
    tol: f64,
) -> Result<Vec<BoundState>> {
    let geom = evaluator.geometry();
    if !(tol > 0.0) {
        return Err(Error::domain("find_bound_states", "tol must be > 0"));
    }
    if geom.is_relativistic() {
        find_bound_states_relativistic(evaluator, cfg, tol)
    } else {
        find_bound_states_nonrel(evaluator, cfg, tol)
    }
}

fn eigvals(evaluator: &PhiEvaluator, cfg: &Configuration, p: f64) -> Result<Vec<f64>> {
    let phi = evaluator.eval(cfg, p)?;
    Ok(symmetric_eigen(&phi.entries)?.eigenvalues)
}

fn find_bound_states_nonrel(
    evaluator: &PhiEvaluator,
    cfg: &Configuration,
    tol: f64,
) -> Result<Vec<BoundState>> {
    let n = cfg.n();
    let geom = evaluator.geometry();
    let scale = cfg.max_mu().max(geom.kappa().unwrap_or(0.0));
    let nu_lo = 1e-8 * scale;
    let lo_vals = eigvals(evaluator, cfg, nu_lo)?;

    // Grow the upper end geometrically until every branch is positive;
    // guaranteed to happen because every branch tends to +∞ with ν.
    let mut nu_hi = 2.0 * scale;
    let mut hi_vals = eigvals(evaluator, cfg, nu_hi)?;
    let mut growth = 0;
    while hi_vals.iter().any(|&w| w <= 0.0) {
        nu_hi *= 2.0;
        growth += 1;
        if growth > 200 {
            return Err(Error::BracketGrowthFailure {
                op: "find_bound_states",
                msg: format!("branches never turned positive up to nu = {nu_hi:e}"),
            });
        }
        hi_vals = eigvals(evaluator, cfg, nu_hi)?;
    }

    let mut brackets = Vec::new();
    for b in 0..n {
        // Branch negative at the bottom and positive at the top crosses
        // exactly once (monotone). Branches nonnegative at nu_lo either have
        // no root or a marginal root at ν = 0, which is not counted.
        if lo_vals[b] < 0.0 && hi_vals[b] > 0.0 {
            brackets.push(Bracket { branch: b, lo: nu_lo, hi: nu_hi });
        }
    }

    let roots = bisect_all(evaluator, cfg, brackets, tol, false)?;
    collect_states(evaluator, cfg, roots, tol, false)
}

fn find_bound_states_relativistic(
    evaluator: &PhiEvaluator,
    cfg: &Configuration,
    tol: f64,
) -> Result<Vec<BoundState>> {
    let n = cfg.n();
    let geom = evaluator.geometry();
    let m = geom.mass().expect("relativistic geometry has a mass");
    // The pair-production window (-m, m) is open; stay tol away from it.
    let e_lo = -m + tol.max(1e-9 * m);
    let e_hi = m - tol.max(1e-9 * m);
    if e_lo >= e_hi {
        return Err(Error::domain("find_bound_states", "tolerance swallows the energy window"));
    }
    let lo_vals = eigvals(evaluator, cfg, e_lo)?;
    let hi_vals = eigvals(evaluator, cfg, e_hi)?;
    let mut brackets = Vec::new();
    for b in 0..n {
        // Branches decrease in E; a root needs ω > 0 at the left window edge
        // and ω < 0 at the right one.
        if lo_vals[b] > 0.0 && hi_vals[b] < 0.0 {
            brackets.push(Bracket { branch: b, lo: e_lo, hi: e_hi });
        }
    }
    let roots = bisect_all(evaluator, cfg, brackets, tol, true)?;
    collect_states(evaluator, cfg, roots, tol, true)
}

fn bisect_all(
    evaluator: &PhiEvaluator,
    cfg: &Configuration,
    brackets: Vec<Bracket>,
    tol: f64,
    relativistic: bool,
) -> Result<Vec<(usize, f64)>> {
    let mut roots = Vec::with_capacity(brackets.len());
    for br in brackets {
        let mut lo = br.lo;
        let mut hi = br.hi;
        for _ in 0..200 {
            if (hi - lo).abs() <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let w = eigvals(evaluator, cfg, mid)?[br.branch];
            // ω rises with ν but falls with E.
            let root_is_right = if relativistic { w > 0.0 } else { w < 0.0 };
            if root_is_right {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push((br.branch, 0.5 * (lo + hi)));
    }
    Ok(roots)
}

/// Merge roots closer than 10·tol, attach multiplicities from the null
/// space, pick amplitude signs, and sort by energy ascending.
fn collect_states(
    evaluator: &PhiEvaluator,
    cfg: &Configuration,
    mut roots: Vec<(usize, f64)>,
    tol: f64,
    relativistic: bool,
) -> Result<Vec<BoundState>> {
    roots.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for (_, r) in roots {
        match groups.last_mut() {
            Some(g) if (r - *g.last().unwrap()).abs() <= 10.0 * tol => g.push(r),
            _ => groups.push(vec![r]),
        }
    }

    let mut states = Vec::with_capacity(groups.len());
    for g in groups {
        let loc = g.iter().sum::<f64>() / g.len() as f64;
        let phi = evaluator.eval(cfg, loc)?;
        let eig = symmetric_eigen(&phi.entries)?;
        let norm = phi.entries.max_norm();
        let thresh = null_threshold(norm);
        let mut null_cols: Vec<usize> = (0..cfg.n())
            .filter(|&k| eig.eigenvalues[k].abs() <= thresh)
            .collect();
        if null_cols.is_empty() {
            // The bisection landed close enough that det ~ 0 but the
            // threshold was conservative; take the closest-to-zero branch.
            let k = (0..cfg.n())
                .min_by(|&a, &b| {
                    eig.eigenvalues[a].abs().partial_cmp(&eig.eigenvalues[b].abs()).unwrap()
                })
                .expect("nonempty spectrum");
            null_cols.push(k);
        }
        let multiplicity = null_cols.len().max(g.len());
        let mut amplitudes = Vec::new();
        for &col in null_cols.iter().take(multiplicity) {
            let mut a: Vec<f64> = (0..cfg.n()).map(|r| eig.eigenvectors.get(r, col)).collect();
            // The overall phase of the zero-eigenvector is free; fix it by a
            // positive component sum.
            if a.iter().sum::<f64>() < 0.0 {
                for x in a.iter_mut() {
                    *x = -*x;
                }
            }
            amplitudes.push(a);
        }
        let det: f64 = eig.eigenvalues.iter().product();
        let normalization = if relativistic {
            1.0
        } else {
            let deriv = principal::principal_matrix_derivative(
                &evaluator.geometry(),
                cfg,
                SpectralParam::Nu(loc),
            )?;
            let bracket = deriv.quadratic_form(&amplitudes[0]);
            if !(bracket > 0.0) {
                return Err(Error::internal(
                    "find_bound_states",
                    format!("normalization bracket {bracket} must be positive"),
                ));
            }
            bracket
        };
        states.push(BoundState {
            location: loc,
            energy: if relativistic { loc } else { -loc * loc },
            multiplicity,
            amplitudes,
            normalization,
            det_residual: det.abs(),
        });
    }
    // energy ascending: deepest state first
    states.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap());
    Ok(states)
}

/// Bound-state count (with multiplicity), computed by two required-to-agree
/// routes: the bisection enumeration and the count of sorted branches
/// negative at the bottom of the spectral window (positive, for the
/// relativistic kinds, at the left edge of the energy window).
pub fn count_bound_states(geom: &Geometry, cfg: &Configuration) -> Result<usize> {
    geometry::require_valid(cfg, geom)?;
    let evaluator = PhiEvaluator::new(geom, cfg)?;
    count_bound_states_with(&evaluator, cfg)
}

pub fn count_bound_states_with(evaluator: &PhiEvaluator, cfg: &Configuration) -> Result<usize> {
    let geom = evaluator.geometry();
    let tol = default_tol(&geom, cfg);
    let states = find_bound_states_with(evaluator, cfg, tol)?;
    let by_roots: usize = states.iter().map(|s| s.multiplicity).sum();

    let by_branches = if geom.is_relativistic() {
        let m = geom.mass().unwrap();
        let e_lo = -m + tol.max(1e-9 * m);
        eigvals(evaluator, cfg, e_lo)?.iter().filter(|&&w| w > 0.0).count()
    } else {
        let scale = cfg.max_mu().max(geom.kappa().unwrap_or(0.0));
        eigvals(evaluator, cfg, 1e-8 * scale)?.iter().filter(|&&w| w < 0.0).count()
    };

    if by_roots != by_branches {
        return Err(Error::internal(
            "count_bound_states",
            format!("bisection found {by_roots} states but {by_branches} branches are negative at the window edge"),
        ));
    }
    Ok(by_roots)
}

/// Default root tolerance used by the counting route.
pub fn default_tol(geom: &Geometry, cfg: &Configuration) -> f64 {
    if geom.is_relativistic() {
        1e-7 * geom.mass().unwrap()
    } else {
        1e-10 * cfg.max_mu().max(geom.kappa().unwrap_or(0.0))
    }
}

/// Eigenfunction value at a point x given its distances to the centers:
/// ψ(x) = [A' M A]^{-1/2} Σ_i A_i R_0(d(x, a_i) | -ν²).
pub fn eigenfunction(
    geom: &Geometry,
    cfg: &Configuration,
    state: &BoundState,
    dists_to_centers: &[f64],
) -> Result<f64> {
    geometry::require_valid(cfg, geom)?;
    if geom.is_relativistic() {
        return Err(Error::domain("eigenfunction", "defined for the non-relativistic kinds"));
    }
    if dists_to_centers.len() != cfg.n() {
        return Err(Error::domain("eigenfunction", "need one distance per center"));
    }
    if dists_to_centers.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::domain("eigenfunction", "distances must be positive"));
    }
    if !(state.normalization > 0.0) {
        return Err(Error::internal("eigenfunction", "state carries a non-positive normalization"));
    }
    let a = &state.amplitudes[0];
    let mut value = 0.0;
    for (&d, &ai) in dists_to_centers.iter().zip(a.iter()) {
        value += ai * principal::resolvent_kernel(geom, d, state.location)?;
    }
    Ok(value / state.normalization.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Geometry;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn jacobi_diagonal() {
        let m = SquareMatrix::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ]);
        let e = symmetric_eigen(&m).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        // permutation vectors
        assert_eq!(e.eigenvectors.get(1, 0).abs(), 1.0);
        assert_eq!(e.eigenvectors.get(2, 1).abs(), 1.0);
        assert_eq!(e.eigenvectors.get(0, 2).abs(), 1.0);
    }

    #[test]
    fn jacobi_two_by_two() {
        let a = 0.25;
        let m = SquareMatrix::from_rows(&[vec![0.0, -a], vec![-a, 0.0]]);
        let e = symmetric_eigen(&m).unwrap();
        assert!((e.eigenvalues[0] + a).abs() < 1e-15);
        assert!((e.eigenvalues[1] - a).abs() < 1e-15);
    }

    #[test]
    fn jacobi_reconstructs_random_matrix() {
        // fixed-seed LCG so the test is deterministic
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rand = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n = 5;
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = rand();
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        let e = symmetric_eigen(&m).unwrap();
        // M = V Ω V' to 1e-12, V orthonormal to 1e-12
        for i in 0..n {
            for j in 0..n {
                let mut rec = 0.0;
                let mut dot = 0.0;
                for k in 0..n {
                    rec += e.eigenvectors.get(i, k) * e.eigenvalues[k] * e.eigenvectors.get(j, k);
                    dot += e.eigenvectors.get(k, i) * e.eigenvectors.get(k, j);
                }
                assert!((rec - m.get(i, j)).abs() < 1e-12);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12);
            }
        }
        // residual ‖Φv - ωv‖ <= 1e-10 ‖Φ‖
        for k in 0..n {
            let v: Vec<f64> = (0..n).map(|r| e.eigenvectors.get(r, k)).collect();
            let mv = m.mul_vec(&v);
            for r in 0..n {
                assert!((mv[r] - e.eigenvalues[k] * v[r]).abs() <= 1e-10 * m.max_norm());
            }
        }
    }

    #[test]
    fn jacobi_rejects_asymmetry() {
        let m = SquareMatrix::from_rows(&[vec![1.0, 0.5], vec![0.4, 1.0]]);
        assert!(matches!(symmetric_eigen(&m), Err(Error::Asymmetry { .. })));
    }

    #[test]
    fn single_center_root_is_mu() {
        for geom in [
            Geometry::Flat2,
            Geometry::Flat3,
            Geometry::Hyperbolic2 { kappa: 1.0 },
            Geometry::Hyperbolic3 { kappa: 1.0 },
        ] {
            let cfg = Configuration::single(1.0);
            let states = find_bound_states(&geom, &cfg, 1e-10).unwrap();
            assert_eq!(states.len(), 1, "{geom:?}");
            assert!(rel_err(states[0].location, 1.0) < 1e-8, "{geom:?}: {}", states[0].location);
            assert_eq!(states[0].multiplicity, 1);
            assert!((states[0].energy + 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn flat2_two_center_counts() {
        // √(μ1 μ2) d = 3 > 2: two states; d = 1 < 2: one state.
        let far = Configuration::collinear(vec![1.0, 1.0], 3.0);
        assert_eq!(count_bound_states(&Geometry::Flat2, &far).unwrap(), 2);
        let near = Configuration::collinear(vec![1.0, 1.0], 1.0);
        assert_eq!(count_bound_states(&Geometry::Flat2, &near).unwrap(), 1);
    }

    #[test]
    fn flat3_two_center_counts() {
        // √(μ1 μ2) d thresholds at 1 in three dimensions.
        let near = Configuration::collinear(vec![1.0, 1.0], 0.5);
        assert_eq!(count_bound_states(&Geometry::Flat3, &near).unwrap(), 1);
        let asym = Configuration::collinear(vec![1.0, 2.0], 1.0); // √2 > 1
        assert_eq!(count_bound_states(&Geometry::Flat3, &asym).unwrap(), 2);
    }

    #[test]
    fn h3_two_center_count() {
        let cfg = Configuration::collinear(vec![1.0, 1.0], 1.0);
        assert_eq!(count_bound_states(&Geometry::Hyperbolic3 { kappa: 1.0 }, &cfg).unwrap(), 2);
    }

    #[test]
    fn branch_monotonicity_flat3_single() {
        // ω(ν) = (ν-1)/4π is linear increasing.
        let cfg = Configuration::single(1.0);
        let grid = [0.5, 1.0, 2.0];
        let b = eigenvalue_branches(&Geometry::Flat3, &cfg, &grid).unwrap();
        for (k, &nu) in grid.iter().enumerate() {
            let expect = (nu - 1.0) / (4.0 * std::f64::consts::PI);
            assert!((b[k].eigenvalues[0] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn branch_monotonicity_flat2_pair() {
        let cfg = Configuration::collinear(vec![1.0, 1.0], 3.0);
        let grid = [0.2, 0.5, 1.0, 2.0];
        let b = eigenvalue_branches(&Geometry::Flat2, &cfg, &grid).unwrap();
        for br in 0..2 {
            for w in b.windows(2) {
                assert!(w[1].eigenvalues[br] > w[0].eigenvalues[br]);
            }
        }
    }

    #[test]
    fn branch_flow_relativistic_decreasing() {
        let cfg = Configuration::single(0.5);
        let geom = Geometry::RelFlat2 { m: 1.0 };
        let grid = [0.9, 0.5, 0.0, -0.9];
        let b = eigenvalue_branches(&geom, &cfg, &grid).unwrap();
        // grid descends in E, so the branch ascends along the grid
        for w in b.windows(2) {
            assert!(w[1].eigenvalues[0] > w[0].eigenvalues[0]);
        }
        // wrong grid direction is a domain error
        assert!(eigenvalue_branches(&geom, &cfg, &[0.0, 0.5]).is_err());
    }

    #[test]
    fn relativistic_flat_single_center() {
        // Φ11(E) = (1/2π) log((m-E)/(m-μ)) has its only root at E = μ.
        let cfg = Configuration::single(0.5);
        let geom = Geometry::RelFlat2 { m: 1.0 };
        let states = find_bound_states(&geom, &cfg, 1e-10).unwrap();
        assert_eq!(states.len(), 1);
        assert!((states[0].location - 0.5).abs() < 1e-8);
        assert_eq!(count_bound_states(&geom, &cfg).unwrap(), 1);
    }

    #[test]
    fn relativistic_flat_pair_two_states() {
        // d(m - μ)/e > 1 guarantees both states; pick a comfortable margin.
        let geom = Geometry::RelFlat2 { m: 1.0 };
        let cfg = Configuration::collinear(vec![0.0, 0.0], 5.0);
        assert_eq!(count_bound_states(&geom, &cfg).unwrap(), 2);
        let states = find_bound_states(&geom, &cfg, 1e-9).unwrap();
        assert_eq!(states.len(), 2);
        assert!(states[0].energy < states[1].energy);
    }

    #[test]
    fn degenerate_equilateral_triple() {
        // Equilateral N = 3 on the flat plane: Φ = a I + b (J - I) has a
        // double eigenvalue; the excited root must be reported with
        // multiplicity 2, not as two nearby simple roots.
        let n = 3;
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    dist[i][j] = 4.0;
                }
            }
        }
        let cfg = Configuration::new(vec![1.0; n], dist);
        let states = find_bound_states(&Geometry::Flat2, &cfg, 1e-10).unwrap();
        let total: usize = states.iter().map(|s| s.multiplicity).sum();
        assert_eq!(total, 3);
        assert_eq!(states.len(), 2, "one simple ground + one double excited");
        assert_eq!(states[0].multiplicity, 1);
        assert_eq!(states[1].multiplicity, 2);
    }

    #[test]
    fn ground_state_amplitudes_one_sign() {
        // Perron-Frobenius: the deepest state's zero-eigenvector has a
        // uniform sign.
        let cfg = Configuration::collinear(vec![1.0, 2.0, 0.7], 1.2);
        let states = find_bound_states(&Geometry::Flat3, &cfg, 1e-10).unwrap();
        let ground = &states[0];
        assert!(ground.amplitudes[0].iter().all(|&x| x > 0.0), "{:?}", ground.amplitudes[0]);
    }

    #[test]
    fn largest_root_exceeds_max_mu() {
        for geom in [Geometry::Flat3, Geometry::Hyperbolic3 { kappa: 0.5 }] {
            let cfg = Configuration::collinear(vec![0.8, 1.3], 1.0);
            let states = find_bound_states(&geom, &cfg, 1e-10).unwrap();
            let nu_max = states.iter().map(|s| s.location).fold(0.0f64, f64::max);
            assert!(nu_max > 1.3, "{geom:?}: {nu_max}");
        }
    }

    #[test]
    fn det_residual_small_at_roots() {
        let cfg = Configuration::collinear(vec![1.0, 1.5], 2.0);
        let states = find_bound_states(&Geometry::Flat3, &cfg, 1e-12).unwrap();
        for s in &states {
            let phi = principal::principal_matrix(
                &Geometry::Flat3,
                &cfg,
                SpectralParam::Nu(s.location),
            )
            .unwrap();
            let norm = phi.entries.max_norm();
            assert!(s.det_residual <= 1e-9 * norm.powi(cfg.n() as i32), "{}", s.det_residual);
        }
    }

    #[test]
    fn eigenfunction_single_center_flat3() {
        // ψ at distance 1 for μ = 1: [1/(8π)]^{-1/2} e^{-1}/(4π).
        let cfg = Configuration::single(1.0);
        let states = find_bound_states(&Geometry::Flat3, &cfg, 1e-12).unwrap();
        let v = eigenfunction(&Geometry::Flat3, &cfg, &states[0], &[1.0]).unwrap();
        let expect = (8.0 * std::f64::consts::PI).sqrt() * (-1.0f64).exp()
            / (4.0 * std::f64::consts::PI);
        assert!(rel_err(v, expect) < 1e-7, "{v} vs {expect}");
        assert!((expect - 0.1467626631737399).abs() < 1e-12);
    }

    #[test]
    fn eigenfunction_symmetry_and_midpoint() {
        // Symmetric pair: equal |amplitudes|; the excited state is odd, so
        // it vanishes at the midpoint while the ground state does not.
        let cfg = Configuration::collinear(vec![1.0, 1.0], 3.0);
        let states = find_bound_states(&Geometry::Flat2, &cfg, 1e-11).unwrap();
        assert_eq!(states.len(), 2);
        let ground = &states[0];
        let excited = &states[1];
        let ga = &ground.amplitudes[0];
        let ea = &excited.amplitudes[0];
        assert!((ga[0].abs() - ga[1].abs()).abs() < 1e-6);
        assert!((ea[0].abs() - ea[1].abs()).abs() < 1e-6);
        assert!((ea[0] + ea[1]).abs() < 1e-6, "excited is antisymmetric");
        let mid = [1.5, 1.5];
        let g_mid = eigenfunction(&Geometry::Flat2, &cfg, ground, &mid).unwrap();
        let e_mid = eigenfunction(&Geometry::Flat2, &cfg, excited, &mid).unwrap();
        assert!(g_mid > e_mid.abs(), "{g_mid} vs {e_mid}");
    }

    #[test]
    fn count_respects_upper_bound_n() {
        for spacing in [0.3, 1.0, 4.0] {
            let cfg = Configuration::collinear(vec![1.0, 0.5, 1.5], spacing);
            let c = count_bound_states(&Geometry::Flat2, &cfg).unwrap();
            assert!(c <= 3, "{c}");
            assert!(c >= 1);
        }
    }
}
