//! Principal matrix on the relativistic two-dimensional hyperbolic space.
//!
//! Φ is the t-integral (after s = t/√u) of
//!   W_d(t) = ∫0^∞ e^{-t²/4u} e^{-u m²} K_u(d) / √u du,
//! where K_u is the ℍ² heat kernel, itself a quadrature. To keep the triple
//! nesting affordable, two profile layers are sampled once per distance and
//! interpolated: the kernel u ↦ K_u(d), and on top of it W_d on a dense
//! log-t grid (the "adaptive grid of t"). The outer t-integral then runs
//! over the cheap interpolant. Profiles depend only on (κ, m, d), so one
//! evaluator serves every spectral point of a configuration. The raw (s, u)
//! double integral stays available as the arbitration oracle.

use crate::error::{Error, Result};
use crate::geometry::{self, Configuration, Geometry};
use crate::matrix::SquareMatrix;
use crate::specfun::{self, DecayHint, SingularityHint, Tolerances};

/// log-log cubic-Hermite profile of a smooth positive function p(t). The
/// dominant factors e^{-shift·t - shift_inv/t} are divided out before
/// taking logs so the interpolated residual stays gentle over the grid.
struct Profile {
    x: Vec<f64>,  // ln t, uniform spacing
    y: Vec<f64>,  // ln p + shift·t + shift_inv/t
    dy: Vec<f64>, // centered slopes
    shift: f64,
    shift_inv: f64,
    lo: usize,
    hi: usize, // inclusive index range where p > 0
}

impl Profile {
    fn build(x: Vec<f64>, p: Vec<f64>, shift: f64, shift_inv: f64) -> Profile {
        let n = x.len();
        let mut lo = 0;
        while lo < n && !(p[lo] > 0.0) {
            lo += 1;
        }
        let mut hi = n.saturating_sub(1);
        while hi > lo && !(p[hi] > 0.0) {
            hi -= 1;
        }
        let y: Vec<f64> = p
            .iter()
            .zip(&x)
            .map(|(&v, &xk)| {
                let t = xk.exp();
                if v > 0.0 {
                    v.ln() + shift * t + shift_inv / t
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        let mut dy = vec![0.0; n];
        for k in lo..=hi {
            let (a, b) = if k == lo {
                (k, (k + 1).min(hi))
            } else if k == hi {
                (k - 1, k)
            } else {
                (k - 1, k + 1)
            };
            if a == b || !y[a].is_finite() || !y[b].is_finite() {
                dy[k] = 0.0;
            } else {
                dy[k] = (y[b] - y[a]) / (x[b] - x[a]);
            }
        }
        Profile { x, y, dy, shift, shift_inv, lo, hi }
    }

    fn restore(&self, y: f64, t: f64) -> f64 {
        (y - self.shift * t - self.shift_inv / t).exp()
    }

    /// Interpolated p(t); 0 outside the support, clamped at the small-t end.
    fn eval(&self, t: f64, clamp_left: bool) -> f64 {
        if self.lo > self.hi || !self.y[self.lo].is_finite() {
            return 0.0;
        }
        let x = t.ln();
        if x <= self.x[self.lo] {
            if !clamp_left {
                return 0.0;
            }
            return self.restore(self.y[self.lo], self.x[self.lo].exp());
        }
        if x >= self.x[self.hi] {
            return 0.0;
        }
        // uniform spacing lookup
        let step = self.x[1] - self.x[0];
        let mut k = ((x - self.x[0]) / step) as usize;
        if k < self.lo {
            k = self.lo;
        }
        if k >= self.hi {
            k = self.hi - 1;
        }
        let x0 = self.x[k];
        let x1 = self.x[k + 1];
        let h = x1 - x0;
        let s = (x - x0) / h;
        let (y0, y1, d0, d1) = (self.y[k], self.y[k + 1], self.dy[k], self.dy[k + 1]);
        if !y0.is_finite() || !y1.is_finite() {
            return 0.0;
        }
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let y = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
        self.restore(y, t)
    }
}

/// Interpolated u ↦ K_u(d) for one distance, storing u·K_u with the
/// e^{-κ²u/4 - d²/4u} envelope divided out.
pub(crate) struct KernelProfile {
    prof: Profile,
    d: f64,
}

const KERNEL_GRID: usize = 320;

impl KernelProfile {
    pub(crate) fn build(kappa: f64, mass: f64, d: f64) -> Result<KernelProfile> {
        let decay = mass * mass + kappa * kappa / 4.0;
        let u_min = if d == 0.0 { 1e-12 / decay } else { (d * d / 2980.0).max(1e-12 / decay) };
        let u_max = 780.0 / decay;
        if u_min >= u_max {
            // the kernel is dead everywhere the relativistic weight lives
            return Ok(KernelProfile {
                prof: Profile::build(vec![0.0, 1.0], vec![0.0, 0.0], 0.0, 0.0),
                d,
            });
        }
        let xs: Vec<f64> = (0..KERNEL_GRID)
            .map(|k| u_min.ln() + (u_max.ln() - u_min.ln()) * k as f64 / (KERNEL_GRID - 1) as f64)
            .collect();
        let tol = Tolerances::new(1e-15, 1e-8);
        let mut p = Vec::with_capacity(KERNEL_GRID);
        for &x in &xs {
            let u = x.exp();
            // (3/u) e^{-d²/4u - κ²u/4} bounds the kernel; skip dead regions
            let expo = d * d / (4.0 * u) + kappa * kappa * u / 4.0;
            if expo > 740.0 {
                p.push(0.0);
                continue;
            }
            p.push(u * geometry::h2_kernel_with_tol(d, u, kappa, tol)?);
        }
        Ok(KernelProfile {
            prof: Profile::build(xs, p, kappa * kappa / 4.0, d * d / 4.0),
            d,
        })
    }

    /// K_u(d) from the profile (u·K stored; diagonal clamps at the flat
    /// 1/(4πu) small-u regime).
    pub(crate) fn eval(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        self.prof.eval(u, self.d == 0.0) / u
    }
}

/// Reusable Φ evaluator for one (κ, m, distance-set).
pub struct RelH2Evaluator {
    kappa: f64,
    mass: f64,
    /// √(m² + κ²/4): the effective exponential scale of W.
    m_eff: f64,
    /// p(t) = t · W_0(t) (diagonal; the 1/t factor is carried analytically).
    diag: Profile,
    /// p(t) = W_d(t) per distinct off-diagonal distance.
    offdiag: Vec<(f64, Profile)>,
}

const GRID_POINTS: usize = 420;

impl RelH2Evaluator {
    pub fn new(kappa: f64, mass: f64, cfg: &Configuration) -> Result<Self> {
        if !(kappa > 0.0) || !(mass > 0.0) {
            return Err(Error::domain("relh2", "kappa and m must be > 0"));
        }
        let m_eff = (mass * mass + kappa * kappa / 4.0).sqrt();
        let t_min = 1e-4 / m_eff;
        let t_max = 720.0 / m_eff;
        let xs: Vec<f64> = (0..GRID_POINTS)
            .map(|k| t_min.ln() + (t_max.ln() - t_min.ln()) * k as f64 / (GRID_POINTS - 1) as f64)
            .collect();

        let sample = |d: f64, diagonal: bool| -> Result<Profile> {
            let kernel = KernelProfile::build(kappa, mass, d)?;
            let mut p = Vec::with_capacity(GRID_POINTS);
            for &x in &xs {
                let t = x.exp();
                let w = w_integral(&kernel, kappa, mass, d, t)?;
                p.push(if diagonal { t * w } else { w });
            }
            Ok(Profile::build(xs.clone(), p, m_eff, 0.0))
        };

        let diag = sample(0.0, true)?;
        let mut dists: Vec<f64> = Vec::new();
        for i in 0..cfg.n() {
            for j in (i + 1)..cfg.n() {
                let d = cfg.distance(i, j);
                if !dists.iter().any(|&x| x == d) {
                    dists.push(d);
                }
            }
        }
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut offdiag = Vec::with_capacity(dists.len());
        for d in dists {
            offdiag.push((d, sample(d, false)?));
        }
        Ok(RelH2Evaluator { kappa, mass, m_eff, diag, offdiag })
    }

    fn w_offdiag(&self, d: f64, t: f64) -> f64 {
        let prof = self
            .offdiag
            .iter()
            .find(|(dd, _)| *dd == d)
            .map(|(_, p)| p)
            .expect("distance sampled at construction");
        prof.eval(t, true)
    }

    /// Φ(E) over the cached profiles.
    pub fn principal_matrix(&self, cfg: &Configuration, e: f64) -> Result<SquareMatrix> {
        let n = cfg.n();
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let mut m = SquareMatrix::zeros(n);
        let t_floor = self.diag.x[0].exp();
        for i in 0..n {
            let mu = cfg.mu[i];
            let rate = (self.m_eff - mu.max(e)).max(1e-3 * self.m_eff);
            let f = |t: f64| {
                if t <= 0.0 {
                    return 0.0;
                }
                let h = self.diag.eval(t, true);
                if h == 0.0 {
                    return 0.0;
                }
                if t < t_floor {
                    // (e^{μt} - e^{Et})/t is smooth; h is constant to O(t) here.
                    (mu - e) * h
                } else {
                    ((mu * t).exp() - (e * t).exp()) * h / t
                }
            };
            let r = specfun::integrate_semiinfinite_with(
                f,
                0.0,
                DecayHint::rate(rate),
                None,
                Tolerances::new(1e-12, 1e-7),
            )?;
            m.set(i, i, r.value / sqrt_pi);
            for j in (i + 1)..n {
                let d = cfg.distance(i, j);
                let rate = (self.m_eff - e).max(1e-3 * self.m_eff);
                let g = |t: f64| {
                    if t <= 0.0 {
                        return 0.0;
                    }
                    (e * t).exp() * self.w_offdiag(d, t)
                };
                let r = specfun::integrate_semiinfinite_with(
                    g,
                    0.0,
                    DecayHint::rate(rate),
                    None,
                    Tolerances::new(1e-12, 1e-7),
                )?;
                let v = -r.value / sqrt_pi;
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        Ok(m)
    }

    pub fn geometry(&self) -> Geometry {
        Geometry::RelHyperbolic2 { kappa: self.kappa, m: self.mass }
    }
}

/// W_d(t) = ∫0^∞ e^{-t²/4u - u m²} K_u(d)/√u du over y = ln u, so both the
/// u ~ t² cutoff and the u ~ 1/m² bulk are resolved by one finite pass.
fn w_integral(kernel: &KernelProfile, kappa: f64, mass: f64, d: f64, t: f64) -> Result<f64> {
    let decay = mass * mass + kappa * kappa / 4.0;
    // e^{-t²/4u} kills everything below u = t²/2960; the kernel bound
    // (3/u) e^{-d²/4u - κ²u/4} with the e^{-um²} weight kills everything
    // once m_eff √(t²+d²) is past the exponent budget.
    if decay.sqrt() * (t * t + d * d).sqrt() > 760.0 {
        return Ok(0.0);
    }
    let u_lo = (t * t / 2960.0).max(1e-290);
    let u_hi = 745.0 / decay;
    if u_lo >= u_hi {
        return Ok(0.0);
    }
    let f = |y: f64| -> f64 {
        let u = y.exp();
        let expo = -t * t / (4.0 * u) - u * mass * mass;
        if expo < -740.0 {
            return 0.0;
        }
        expo.exp() * kernel.eval(u) * u.sqrt()
    };
    let r = specfun::integrate_finite(f, u_lo.ln(), u_hi.ln(), Tolerances::new(1e-14, 1e-7))?;
    Ok(r.value)
}

/// One entry of the relativistic principal matrix in the original (s, u)
/// double-integral form (the arbitration oracle): outer s-Gaussian, inner
/// u-integral over the kernel profile. `diagonal` selects the compensated
/// e^{sμ√u} - e^{sE√u} weight.
pub(crate) fn oracle_entry(
    kappa: f64,
    mass: f64,
    mu: f64,
    e: f64,
    d: f64,
    diagonal: bool,
    tol: Tolerances,
) -> Result<f64> {
    let kernel = KernelProfile::build(kappa, mass, d)?;
    let inner_tol = Tolerances::new(tol.abs * 0.1, tol.rel * 0.1);
    let m_eff = (mass * mass + kappa * kappa / 4.0).sqrt();
    let outer = |s: f64| -> f64 {
        let f = |u: f64| -> f64 {
            let w = if diagonal {
                (s * mu * u.sqrt()).exp() - (s * e * u.sqrt()).exp()
            } else {
                (s * e * u.sqrt()).exp()
            };
            w * (-u * mass * mass).exp() * kernel.eval(u)
        };
        let sing = if diagonal { Some(SingularityHint { power: -0.5 }) } else { None };
        let r = specfun::integrate_semiinfinite_with(
            f,
            0.0,
            DecayHint::rate(mass * mass),
            sing,
            inner_tol,
        )
        .expect("inner u-integral");
        (-s * s / 4.0).exp() * r.value
    };
    let x = mu.abs().max(e.abs()) / m_eff;
    let rate = (0.25 * (1.0 - x * x)).max(0.02);
    let r = specfun::integrate_semiinfinite_with(outer, 0.0, DecayHint::rate(rate), None, tol)?;
    Ok(r.value / std::f64::consts::PI.sqrt())
}
