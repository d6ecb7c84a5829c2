//! Cross-module property tests: eigenvalue-flow monotonicity in the
//! binding parameters, bracketing of counts by extremal couplings, and
//! randomized invariants of the quadrature engine and eigensolver.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectra_core::geometry::{Configuration, Geometry};
use spectra_core::matrix::SquareMatrix;
use spectra_core::principal::{principal_matrix, SpectralParam};
use spectra_core::specfun::{integrate_semiinfinite, DecayHint};
use spectra_core::spectrum::{find_bound_states, symmetric_eigen};

/// Raising one μ_k weakly lowers every sorted eigenvalue at fixed ν
/// (Feynman-Hellmann direction, checked by finite differences).
#[test]
fn eigenvalues_decrease_when_any_mu_grows() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let n = rng.gen_range(2..=4);
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let d = rng.gen_range(0.5..3.0);
        let geom = match rng.gen_range(0..4) {
            0 => Geometry::Flat2,
            1 => Geometry::Flat3,
            2 => Geometry::Hyperbolic2 { kappa: rng.gen_range(0.4..1.2) },
            _ => Geometry::Hyperbolic3 { kappa: rng.gen_range(0.4..1.2) },
        };
        let nu = rng.gen_range(0.3..1.5);
        let cfg = Configuration::collinear(mu.clone(), d);
        let base = symmetric_eigen(
            &principal_matrix(&geom, &cfg, SpectralParam::Nu(nu)).unwrap().entries,
        )
        .unwrap()
        .eigenvalues;
        let k = rng.gen_range(0..n);
        let mut bumped = mu.clone();
        bumped[k] += 1e-4;
        let cfg2 = Configuration::collinear(bumped, d);
        let after = symmetric_eigen(
            &principal_matrix(&geom, &cfg2, SpectralParam::Nu(nu)).unwrap().entries,
        )
        .unwrap()
        .eigenvalues;
        for b in 0..n {
            assert!(
                after[b] <= base[b] + 1e-12,
                "{geom:?} branch {b}: {} -> {} after raising mu_{k}",
                base[b],
                after[b]
            );
        }
    }
}

/// Counts of states at or below a reference energy computed with the
/// all-max-μ and all-min-μ couplings bracket the true count.
#[test]
fn extremal_mu_counts_bracket_true_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for trial in 0..12 {
        let n = rng.gen_range(2..=3);
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.8)).collect();
        let d = rng.gen_range(0.8..3.5);
        let geom = match trial % 3 {
            0 => Geometry::Flat2,
            1 => Geometry::Flat3,
            _ => Geometry::Hyperbolic3 { kappa: 0.8 },
        };
        let mu_max = mu.iter().cloned().fold(f64::MIN, f64::max);
        let mu_min = mu.iter().cloned().fold(f64::MAX, f64::min);
        let count_at_least = |mus: Vec<f64>, nu0: f64| -> usize {
            let cfg = Configuration::collinear(mus, d);
            find_bound_states(&geom, &cfg, 1e-9)
                .unwrap()
                .iter()
                .filter(|s| s.location >= nu0)
                .map(|s| s.multiplicity)
                .sum()
        };
        for nu0 in [0.0, mu_min] {
            let hi = count_at_least(vec![mu_max; n], nu0);
            let mid = count_at_least(mu.clone(), nu0);
            let lo = count_at_least(vec![mu_min; n], nu0);
            assert!(
                lo <= mid && mid <= hi,
                "{geom:?} mu={mu:?} d={d} nu0={nu0}: {lo} <= {mid} <= {hi} violated"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// ∫0^∞ e^{-rt} dt = 1/r with the reported estimate dominating the
    /// true error, across random decay rates.
    #[test]
    fn quadrature_error_estimate_dominates(rate in 0.05f64..20.0) {
        let r = integrate_semiinfinite(|t| (-rate * t).exp(), 0.0, DecayHint::rate(rate), None).unwrap();
        let exact = 1.0 / rate;
        let true_err = (r.value - exact).abs();
        prop_assert!(true_err <= r.abs_error_estimate.max(1e-13 * exact.max(1.0)));
        prop_assert!(r.abs_error_estimate <= 1e-12f64.max(1e-9 * exact));
    }

    /// Spectral decomposition reconstructs random symmetric matrices and
    /// keeps the eigenvector frame orthonormal.
    #[test]
    fn jacobi_reconstruction(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=6);
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-2.0..2.0);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        let e = symmetric_eigen(&m).unwrap();
        for i in 0..n {
            for j in 0..n {
                let mut rec = 0.0;
                let mut dot = 0.0;
                for k in 0..n {
                    rec += e.eigenvectors.get(i, k) * e.eigenvalues[k] * e.eigenvectors.get(j, k);
                    dot += e.eigenvectors.get(k, i) * e.eigenvectors.get(k, j);
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((rec - m.get(i, j)).abs() < 1e-11);
                prop_assert!((dot - expect).abs() < 1e-12);
            }
        }
        for w in e.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    /// Heat-kernel positivity over random admissible inputs.
    #[test]
    fn heat_kernel_positive(d in 0.0f64..4.0, t in 0.01f64..20.0, kappa in 0.1f64..2.0) {
        use spectra_core::geometry::heat_kernel;
        for geom in [
            Geometry::Flat2,
            Geometry::Flat3,
            Geometry::Hyperbolic2 { kappa },
            Geometry::Hyperbolic3 { kappa },
        ] {
            prop_assert!(heat_kernel(&geom, d, t).unwrap().value > 0.0);
        }
    }
}
