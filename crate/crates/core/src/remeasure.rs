//! Change of measure: re-expanding P-representations of test functions and
//! Q-representations of distributions between two measures on the same
//! weighted model.
//!
//! All three maps are finite combinatorial sums in the constant terms `B`
//! of one system and the moments `M` of the other, so on truncated
//! sequences they are exact — the invariant worth checking is not the
//! printed formulas but pairing invariance,
//! `⟨⟨Φ, φ⟩⟩_μ = ⟨⟨Φ̂, φ̂⟩⟩_μ̂`, which validates the combinatorial factors
//! end to end. When source and target coincide the sums collapse through
//! `Σ_{l+m=j} B_l ⊗̂ M_{j−l} / (l! m!) = δ_{j0}` and every map is the
//! identity.

use num_complex::Complex64;

use crate::appell::AppellSystem;
use crate::calculus::{Basis, KernelSequence};
use crate::comb::{factorial, trinomial};
use crate::error::{Error, Result};
use crate::tensor::SymKernel;

fn check_same_dim(a: &AppellSystem, b: &AppellSystem) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// One term of the cross-measure expansion of `P_n^μ`: the identity
/// `P_n^μ(x) = Σ_{k+l+m=n} (n!/(k!l!m!)) · P_k^μ̂(x) ⊗̂ B_l^μ ⊗̂ M_m^μ̂`
/// realized as the x-independent tail kernel per `(k, l, m)`.
#[derive(Clone, Debug)]
pub struct CrossTerm {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    /// The trinomial weight `n!/(k!l!m!)`.
    pub weight: f64,
    /// `B_l^μ ⊗̂ M_m^μ̂`, degree `l + m`.
    pub tail: SymKernel,
}

/// Expand `P_n` of `sys_mu` over the Appell system of `sys_hat`, returning
/// the terms of the identity above. Both systems must be built through `n`.
pub fn p_cross_expand(
    sys_mu: &AppellSystem,
    sys_hat: &AppellSystem,
    n: usize,
) -> Result<Vec<CrossTerm>> {
    check_same_dim(sys_mu, sys_hat)?;
    if n > sys_mu.n_max() || n > sys_hat.n_max() {
        return Err(Error::MissingMoments {
            available: sys_mu.n_max().min(sys_hat.n_max()),
            needed: n,
        });
    }
    let mut terms = Vec::new();
    for k in 0..=n {
        for l in 0..=(n - k) {
            let m = n - k - l;
            let tail = sys_mu
                .b_kernel(l)?
                .sym_product(sys_hat.measure().moment(m)?)?;
            terms.push(CrossTerm {
                k,
                l,
                m,
                weight: trinomial(n, k, l, m),
                tail,
            });
        }
    }
    Ok(terms)
}

/// Residual of the cross-expansion identity at one point: assembles the
/// right-hand side from [`p_cross_expand`] and compares kernels.
pub fn p_cross_residual(
    sys_mu: &AppellSystem,
    sys_hat: &AppellSystem,
    n: usize,
    x: &[Complex64],
) -> Result<f64> {
    let mut acc = sys_mu.p_kernel(n, x)?;
    for term in p_cross_expand(sys_mu, sys_hat, n)? {
        let rhs = sys_hat
            .p_kernel(term.k, x)?
            .sym_product(&term.tail)?
            .scale(Complex64::new(term.weight, 0.0));
        acc = acc.sub(&rhs)?;
    }
    Ok(acc.max_abs())
}

/// Rewrite a test function from the P-basis of `sys_mu` into the P-basis
/// of `sys_hat`:
/// `φ̂^{(n)} = Σ_{l,m} ((l+m+n)!/(l!m!n!)) ·
/// contract(B_l^μ ⊗̂ M_m^μ̂, φ^{(l+m+n)})`.
///
/// The sum is finite at truncation, so the map is exact: evaluating the
/// result under `sys_hat` reproduces the input's values pointwise.
pub fn retarget_test(
    test: &KernelSequence,
    sys_mu: &AppellSystem,
    sys_hat: &AppellSystem,
) -> Result<KernelSequence> {
    check_same_dim(sys_mu, sys_hat)?;
    if test.basis() != Basis::P {
        return Err(Error::BasisMismatch {
            expected: "P".into(),
            got: test.basis().to_string(),
        });
    }
    if let Some(id) = test.measure_id() {
        if id != sys_mu.measure().id() {
            return Err(Error::MeasureMismatch {
                left: id.to_string(),
                right: sys_mu.measure().id().to_string(),
            });
        }
    }
    let n_max = test.n_max();
    if n_max > sys_mu.n_max() || n_max > sys_hat.measure().n_max() {
        return Err(Error::MissingMoments {
            available: sys_mu.n_max().min(sys_hat.measure().n_max()),
            needed: n_max,
        });
    }
    let mut kernels = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut acc = SymKernel::zero(test.dim(), n)?;
        for l in 0..=(n_max - n) {
            for m in 0..=(n_max - n - l) {
                let source = test.kernel(l + m + n);
                if source.is_zero() {
                    continue;
                }
                let mixer = sys_mu
                    .b_kernel(l)?
                    .sym_product(sys_hat.measure().moment(m)?)?;
                if mixer.is_zero() {
                    continue;
                }
                let weight = trinomial(l + m + n, l, m, n);
                acc.add_assign(
                    &mixer
                        .contract(source)?
                        .scale(Complex64::new(weight, 0.0)),
                )?;
            }
        }
        kernels.push(acc);
    }
    KernelSequence::new(
        Basis::P,
        test.dim(),
        kernels,
        Some(sys_hat.measure().id().to_string()),
    )
}

/// Re-decompose a distribution from the Q-basis of `sys_hat` into the
/// Q-basis of `sys_mu`:
/// `Φ^{(n)} = Σ_{k+l+m=n} (1/(l!m!)) · Φ̂^{(k)} ⊗̂ B_l^μ ⊗̂ M_m^μ̂`.
///
/// The output is truncated at the common system degree (the true
/// re-decomposition has slots at every degree once the measures differ);
/// pairings against test functions of degree within the truncation are
/// exact.
pub fn retarget_dist(
    dist: &KernelSequence,
    sys_mu: &AppellSystem,
    sys_hat: &AppellSystem,
) -> Result<KernelSequence> {
    check_same_dim(sys_mu, sys_hat)?;
    if dist.basis() != Basis::Q {
        return Err(Error::BasisMismatch {
            expected: "Q".into(),
            got: dist.basis().to_string(),
        });
    }
    if let Some(id) = dist.measure_id() {
        if id != sys_hat.measure().id() {
            return Err(Error::MeasureMismatch {
                left: id.to_string(),
                right: sys_hat.measure().id().to_string(),
            });
        }
    }
    let n_out = sys_mu.n_max().min(sys_hat.measure().n_max());
    let mut kernels = Vec::with_capacity(n_out + 1);
    for n in 0..=n_out {
        let mut acc = SymKernel::zero(dist.dim(), n)?;
        for k in 0..=n.min(dist.n_max()) {
            for l in 0..=(n - k) {
                let m = n - k - l;
                if dist.kernel(k).is_zero() {
                    continue;
                }
                let tail = sys_mu
                    .b_kernel(l)?
                    .sym_product(sys_hat.measure().moment(m)?)?;
                if tail.is_zero() {
                    continue;
                }
                let weight = 1.0 / (factorial(l) * factorial(m));
                acc.add_assign(
                    &dist
                        .kernel(k)
                        .sym_product(&tail)?
                        .scale(Complex64::new(weight, 0.0)),
                )?;
            }
        }
        kernels.push(acc);
    }
    KernelSequence::new(
        Basis::Q,
        dist.dim(),
        kernels,
        Some(sys_mu.measure().id().to_string()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appell::build_appell;
    use crate::calculus::{eval_test, pair};
    use crate::measure::{density_measure_1d, gaussian_measure, NormalDensity, QuadratureSpec};
    use crate::transforms::delta;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn shifted_normal(n_max: usize) -> crate::measure::MeasureModel {
        density_measure_1d(
            Arc::new(NormalDensity::new(1.0, 1.0).unwrap()),
            (-10.0, 12.0),
            QuadratureSpec::trapezoid(3001),
            n_max,
        )
        .unwrap()
    }

    fn random_test(rng: &mut ChaCha8Rng, id: &str, n_max: usize) -> KernelSequence {
        let kernels = (0..=n_max)
            .map(|n| SymKernel::from_fn(1, n, |_| c(rng.gen_range(-1.0..1.0))).unwrap())
            .collect();
        KernelSequence::new(Basis::P, 1, kernels, Some(id.to_string())).unwrap()
    }

    #[test]
    fn same_measure_maps_are_identities() {
        let mu = gaussian_measure(1, 8).unwrap();
        let sys = build_appell(&mu, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let phi = random_test(&mut rng, mu.id(), 6);
        let back = retarget_test(&phi, &sys, &sys).unwrap();
        assert!(back.sub(&phi).unwrap().max_abs() < 1e-12);

        let dist = delta(&sys, &[c(0.7)]).unwrap();
        let dback = retarget_dist(&dist, &sys, &sys).unwrap();
        assert!(dback.sub(&dist).unwrap().max_abs() < 1e-12);

        for n in 0..=6usize {
            assert!(p_cross_residual(&sys, &sys, n, &[c(0.4)]).unwrap() < 1e-12);
        }
    }

    #[test]
    fn cross_expansion_holds_between_gaussians() {
        let mu = gaussian_measure(1, 8).unwrap();
        let muhat = shifted_normal(8);
        let sys = build_appell(&mu, 8).unwrap();
        let sys_hat = build_appell(&muhat, 8).unwrap();
        for n in 0..=6usize {
            for x in [-1.0, 0.0, 2.0] {
                let r = p_cross_residual(&sys, &sys_hat, n, &[c(x)]).unwrap();
                assert!(r < 1e-11, "n={n}, x={x}: {r}");
            }
        }
        // n = 0 is the trivial identity 1 = 1
        let terms = p_cross_expand(&sys, &sys_hat, 0).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].weight, 1.0);
    }

    #[test]
    fn retargeted_tests_evaluate_identically() {
        let mu = gaussian_measure(1, 8).unwrap();
        let muhat = shifted_normal(8);
        let sys = build_appell(&mu, 8).unwrap();
        let sys_hat = build_appell(&muhat, 8).unwrap();
        // φ = P₂^μ(1), i.e. x² − 1 under the standard Gaussian
        let phi = KernelSequence::from_kernel(
            Basis::P,
            SymKernel::from_fn(1, 2, |_| c(1.0)).unwrap(),
            Some(mu.id().to_string()),
        )
        .unwrap();
        let phihat = retarget_test(&phi, &sys, &sys_hat).unwrap();
        assert_eq!(phihat.measure_id(), Some(muhat.id()));
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let x = [c(rng.gen_range(-2.0..2.0))];
            let lhs = eval_test(&sys, &phi, &x).unwrap();
            let rhs = eval_test(&sys_hat, &phihat, &x).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn retarget_roundtrip_is_identity() {
        let mu = gaussian_measure(1, 10).unwrap();
        let muhat = shifted_normal(10);
        let sys = build_appell(&mu, 10).unwrap();
        let sys_hat = build_appell(&muhat, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let phi = random_test(&mut rng, mu.id(), 8);
        let there = retarget_test(&phi, &sys, &sys_hat).unwrap();
        let back = retarget_test(&there, &sys_hat, &sys).unwrap();
        assert!(back.sub(&phi).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn pairing_invariance_under_change_of_measure() {
        let mu = gaussian_measure(1, 8).unwrap();
        let muhat = shifted_normal(8);
        let sys = build_appell(&mu, 8).unwrap();
        let sys_hat = build_appell(&muhat, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..20 {
            // distribution given under μ̂, test function under μ
            let dist_hat = {
                let kernels = (0..=6)
                    .map(|n| SymKernel::from_fn(1, n, |_| c(rng.gen_range(-1.0..1.0))).unwrap())
                    .collect();
                KernelSequence::new(Basis::Q, 1, kernels, Some(muhat.id().to_string())).unwrap()
            };
            let phi = random_test(&mut rng, mu.id(), 6);
            let lhs = pair(&retarget_dist(&dist_hat, &sys, &sys_hat).unwrap(), &phi).unwrap();
            let rhs = pair(&dist_hat, &retarget_test(&phi, &sys, &sys_hat).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-9, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn delta_retargets_to_point_evaluation() {
        let mu = gaussian_measure(1, 8).unwrap();
        let muhat = shifted_normal(8);
        let sys = build_appell(&mu, 8).unwrap();
        let sys_hat = build_appell(&muhat, 8).unwrap();
        let z = [c(0.6)];
        let dz_hat = delta(&sys_hat, &z).unwrap();
        let dz_mu = retarget_dist(&dz_hat, &sys, &sys_hat).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..10 {
            let phi = random_test(&mut rng, mu.id(), 6);
            let lhs = pair(&dz_mu, &phi).unwrap();
            let rhs = eval_test(&sys, &phi, &z).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn unit_distribution_retargets_to_unit_on_same_measure() {
        let mu = gaussian_measure(1, 6).unwrap();
        let sys = build_appell(&mu, 6).unwrap();
        let unit = crate::wick::wick_unit(1, Some(mu.id().to_string())).unwrap();
        let again = retarget_dist(&unit, &sys, &sys).unwrap();
        assert!((again.kernel(0).coeffs()[0] - Complex64::ONE).norm() < 1e-14);
        for n in 1..=again.n_max() {
            assert!(again.kernel(n).max_abs() < 1e-12, "degree {n}");
        }
    }
}
