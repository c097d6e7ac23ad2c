//! Wick algebra on Q-decompositions.
//!
//! The Wick product is defined by pointwise multiplication of S-transforms;
//! on coefficients that is the Cauchy convolution
//! `Ξ^{(n)} = Σ_k Φ^{(k)} ⊗̂ Ψ^{(n−k)}`, so the algebra here is formal
//! power-series arithmetic with symmetric-tensor coefficients: products,
//! powers, composition with an analytic function of one variable, and
//! reciprocals whenever the expectation (the degree-0 coefficient) does not
//! vanish.

use num_complex::Complex64;

use crate::calculus::{dist_norm, Basis, KernelSequence};
use crate::error::{Error, Result, DEGREE_CAP};
use crate::tensor::{SymKernel, WeightModel};

/// Default truncation cap for Wick products: degrees add under `⋄`, so
/// repeated products would otherwise grow without bound.
pub const WICK_DEFAULT_CAP: usize = 16;

/// The unit of the Wick algebra, `Q_0(1)`.
pub fn wick_unit(dim: usize, measure_id: Option<String>) -> Result<KernelSequence> {
    KernelSequence::from_kernel(
        Basis::Q,
        SymKernel::constant(dim, Complex64::ONE)?,
        measure_id,
    )
}

fn require_q(seq: &KernelSequence) -> Result<()> {
    if seq.basis() != Basis::Q {
        return Err(Error::BasisMismatch {
            expected: "Q".into(),
            got: seq.basis().to_string(),
        });
    }
    Ok(())
}

fn merged_id(a: &KernelSequence, b: &KernelSequence) -> Result<Option<String>> {
    match (a.measure_id(), b.measure_id()) {
        (Some(x), Some(y)) if x != y => Err(Error::MeasureMismatch {
            left: x.to_string(),
            right: y.to_string(),
        }),
        (Some(x), _) => Ok(Some(x.to_string())),
        (_, Some(y)) => Ok(Some(y.to_string())),
        (None, None) => Ok(None),
    }
}

/// Wick product truncated at `min(N_Φ + N_Ψ, cap)`.
pub fn wick_product_capped(
    a: &KernelSequence,
    b: &KernelSequence,
    cap: usize,
) -> Result<KernelSequence> {
    require_q(a)?;
    require_q(b)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let id = merged_id(a, b)?;
    let n_out = (a.n_max() + b.n_max()).min(cap).min(DEGREE_CAP);
    let mut kernels = Vec::with_capacity(n_out + 1);
    for n in 0..=n_out {
        let mut acc = SymKernel::zero(a.dim(), n)?;
        let lo = n.saturating_sub(b.n_max());
        let hi = n.min(a.n_max());
        for k in lo..=hi {
            if a.kernel(k).is_zero() || b.kernel(n - k).is_zero() {
                continue;
            }
            acc.add_assign(&a.kernel(k).sym_product(b.kernel(n - k))?)?;
        }
        kernels.push(acc);
    }
    KernelSequence::new(Basis::Q, a.dim(), kernels, id)
}

/// Wick product at the default cap of [`WICK_DEFAULT_CAP`].
pub fn wick_product(a: &KernelSequence, b: &KernelSequence) -> Result<KernelSequence> {
    wick_product_capped(a, b, WICK_DEFAULT_CAP)
}

/// Iterated Wick power `Φ^{⋄m}`; `m = 0` gives the unit.
pub fn wick_power(phi: &KernelSequence, m: usize) -> Result<KernelSequence> {
    require_q(phi)?;
    let mut acc = wick_unit(phi.dim(), phi.measure_id().map(String::from))?;
    for _ in 0..m {
        acc = wick_product(&acc, phi)?;
    }
    Ok(acc)
}

/// Apply an analytic function given by its power series around `center` in
/// the Wick sense: `F^⋄(Φ) = Σ_k a_k (Φ − center·1)^{⋄k}`.
///
/// The expansion point must be `Φ^{(0)} = E_μ(Φ) = S_μΦ(0)` — then the
/// centered sequence has no degree-0 part, terms `k > N` contribute nothing
/// through degree `N`, and the truncated result is exact. `coeffs[k]` is
/// `a_k`; the series must reach the truncation degree.
pub fn wick_apply_series(
    coeffs: &[Complex64],
    center: Complex64,
    phi: &KernelSequence,
) -> Result<KernelSequence> {
    require_q(phi)?;
    let phi0 = phi.kernel(0).coeffs()[0];
    if (center - phi0).norm() > 1e-12 {
        return Err(Error::ExpansionPoint);
    }
    let n_max = phi.n_max();
    if coeffs.len() <= n_max {
        return Err(Error::InvalidParameter(format!(
            "power series supplies {} coefficients but degree {} needs {}",
            coeffs.len(),
            n_max,
            n_max + 1
        )));
    }
    let id = phi.measure_id().map(String::from);
    let mut centered = phi.clone();
    centered.set_kernel(SymKernel::constant(phi.dim(), phi0 - center)?)?;
    let mut acc = wick_unit(phi.dim(), id.clone())?
        .resized(n_max)?
        .scale(coeffs[0]);
    let mut pow = wick_unit(phi.dim(), id)?;
    for &a_k in coeffs.iter().take(n_max + 1).skip(1) {
        pow = wick_product_capped(&pow, &centered, n_max)?;
        acc = acc.add(&pow.scale(a_k))?;
    }
    Ok(acc)
}

/// Wick reciprocal: the `Ψ` with `Φ ⋄ Ψ = 1` through the truncation.
/// Exists exactly when the expectation `Φ^{(0)}` is nonzero.
pub fn wick_inverse(phi: &KernelSequence) -> Result<KernelSequence> {
    require_q(phi)?;
    let phi0 = phi.kernel(0).coeffs()[0];
    if phi0.norm() <= 1e-12 {
        return Err(Error::ZeroConstantTerm);
    }
    let inv0 = Complex64::ONE / phi0;
    let mut kernels: Vec<SymKernel> = Vec::with_capacity(phi.n_max() + 1);
    kernels.push(SymKernel::constant(phi.dim(), inv0)?);
    for n in 1..=phi.n_max() {
        let mut acc = SymKernel::zero(phi.dim(), n)?;
        for k in 1..=n {
            if phi.kernel(k).is_zero() || kernels[n - k].is_zero() {
                continue;
            }
            acc.add_assign(&phi.kernel(k).sym_product(&kernels[n - k])?)?;
        }
        kernels.push(acc.scale(-inv0));
    }
    KernelSequence::new(
        Basis::Q,
        phi.dim(),
        kernels,
        phi.measure_id().map(String::from),
    )
}

/// Solve `Φ ⋄ X = Ψ` for `X`; requires `Φ^{(0)} ≠ 0`.
pub fn wick_solve(phi: &KernelSequence, psi: &KernelSequence) -> Result<KernelSequence> {
    wick_product(&wick_inverse(phi)?, psi)
}

/// Outcome of [`wick_norm_check`].
#[derive(Clone, Copy, Debug)]
pub struct WickNormReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Continuity estimate for the Wick product:
/// `‖Φ⋄Ψ‖_{−max(p₁,p₂), −(q₁+q₂+1)} ≤ ‖Φ‖_{−p₁,−q₁} ‖Ψ‖_{−p₂,−q₂}`, all
/// at Kondratiev index β = 1. Diagnostic only — the report carries both
/// sides; the product is computed uncapped so the left side sees every
/// degree.
pub fn wick_norm_check(
    phi: &KernelSequence,
    psi: &KernelSequence,
    w: &WeightModel,
    p1: i32,
    q1: i32,
    p2: i32,
    q2: i32,
) -> Result<WickNormReport> {
    let product = wick_product_capped(phi, psi, phi.n_max() + psi.n_max())?;
    let lhs = dist_norm(&product, w, p1.max(p2), q1 + q2 + 1, 1.0)?;
    let rhs = dist_norm(phi, w, p1, q1, 1.0)? * dist_norm(psi, w, p2, q2, 1.0)?;
    Ok(WickNormReport {
        lhs,
        rhs,
        ok: lhs <= rhs * (1.0 + 1e-12),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::MultiIndex;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// d = 1 sequence with the given slot values (degree n ↦ value at (n)).
    fn seq1(vals: &[f64]) -> KernelSequence {
        let kernels = vals
            .iter()
            .enumerate()
            .map(|(n, &v)| SymKernel::from_fn(1, n, |_| c(v)).unwrap())
            .collect();
        KernelSequence::new(Basis::Q, 1, kernels, None).unwrap()
    }

    fn slot_values(seq: &KernelSequence) -> Vec<f64> {
        (0..=seq.n_max()).map(|n| seq.kernel(n).coeffs()[0].re).collect()
    }

    fn random_seq(rng: &mut ChaCha8Rng, dim: usize, n_max: usize) -> KernelSequence {
        let kernels = (0..=n_max)
            .map(|n| SymKernel::from_fn(dim, n, |_| c(rng.gen_range(-1.0..1.0))).unwrap())
            .collect();
        KernelSequence::new(Basis::Q, dim, kernels, None).unwrap()
    }

    #[test]
    fn scalar_and_unit_laws() {
        let psi = seq1(&[0.3, -1.2, 0.8]);
        let unit = wick_unit(1, None).unwrap();
        let prod = wick_product(&unit, &psi).unwrap();
        assert_eq!(slot_values(&prod), slot_values(&psi));
        let two = wick_unit(1, None).unwrap().scale(c(2.0));
        let doubled = wick_product(&two, &psi).unwrap();
        assert_eq!(slot_values(&doubled), vec![0.6, -2.4, 1.6]);
    }

    #[test]
    fn product_is_series_multiplication() {
        // (1 + θ)(2 + 3θ) = 2 + 5θ + 3θ²
        let a = seq1(&[1.0, 1.0]);
        let b = seq1(&[2.0, 3.0]);
        let ab = wick_product(&a, &b).unwrap();
        assert_eq!(slot_values(&ab), vec![2.0, 5.0, 3.0]);
    }

    #[test]
    fn single_slots_concatenate() {
        // Q₁(a) ⋄ Q₁(b) = Q₂(a ⊗̂ b)
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ka = SymKernel::from_fn(2, 1, |_| c(rng.gen_range(-1.0..1.0))).unwrap();
        let kb = SymKernel::from_fn(2, 1, |_| c(rng.gen_range(-1.0..1.0))).unwrap();
        let a = KernelSequence::from_kernel(Basis::Q, ka.clone(), None).unwrap();
        let b = KernelSequence::from_kernel(Basis::Q, kb.clone(), None).unwrap();
        let ab = wick_product(&a, &b).unwrap();
        let expect = ka.sym_product(&kb).unwrap();
        assert!(ab.kernel(2).sub(&expect).unwrap().max_abs() < 1e-15);
        assert!(ab.kernel(0).is_zero() && ab.kernel(1).is_zero());
    }

    #[test]
    fn s_transform_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_seq(&mut rng, 2, 3);
        let b = random_seq(&mut rng, 2, 4);
        let ab = wick_product(&a, &b).unwrap();
        for _ in 0..5 {
            let theta = [
                c(rng.gen_range(-0.8..0.8)),
                c(rng.gen_range(-0.8..0.8)),
            ];
            let lhs = crate::transforms::s_transform(&ab, &theta).unwrap();
            let rhs = crate::transforms::s_transform(&a, &theta).unwrap()
                * crate::transforms::s_transform(&b, &theta).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn algebra_is_commutative_and_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_seq(&mut rng, 2, 3);
        let b = random_seq(&mut rng, 2, 3);
        let d = random_seq(&mut rng, 2, 3);
        let ab = wick_product(&a, &b).unwrap();
        let ba = wick_product(&b, &a).unwrap();
        // the two orders accumulate the same terms in different sequence,
        // so agreement is to rounding, not bitwise
        assert!(ab.sub(&ba).unwrap().max_abs() < 1e-14);
        let ab_d = wick_product(&ab, &d).unwrap();
        let a_bd = wick_product(&a, &wick_product(&b, &d).unwrap()).unwrap();
        assert!(ab_d.sub(&a_bd).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn powers_match_series_and_products() {
        let theta_slot = seq1(&[0.0, 1.0]);
        let cube = wick_power(&theta_slot, 3).unwrap();
        assert_eq!(slot_values(&cube), vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(slot_values(&wick_power(&theta_slot, 0).unwrap()), vec![1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let phi = random_seq(&mut rng, 1, 4);
        let sq = wick_power(&phi, 2).unwrap();
        let prod = wick_product(&phi, &phi).unwrap();
        assert!(sq.sub(&prod).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn apply_series_identity_square_and_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let mut phi = random_seq(&mut rng, 1, 4);
        phi.set_kernel(SymKernel::constant(1, c(0.5)).unwrap()).unwrap();
        let z0 = c(0.5);

        // F(z) = z about z₀: coefficients (z₀, 1, 0, …)
        let ident = wick_apply_series(&[z0, c(1.0), c(0.0), c(0.0), c(0.0)], z0, &phi).unwrap();
        assert!(ident.sub(&phi).unwrap().max_abs() < 1e-14);

        // F(z) = z² about z₀: (z₀², 2z₀, 1, 0, …)
        let sq = wick_apply_series(
            &[z0 * z0, c(1.0) * 2.0 * z0, c(1.0), c(0.0), c(0.0)],
            z0,
            &phi,
        )
        .unwrap();
        let direct = wick_power(&phi, 2).unwrap().resized(4).unwrap();
        assert!(sq.sub(&direct).unwrap().max_abs() < 1e-13);

        // Wick exponential of Q₁(z·e) about 0 reproduces the ρ_μ(−z,·)
        // coefficient pattern z^n/n!
        let z = 0.8;
        let q1 = {
            let mut k = SymKernel::zero(1, 1).unwrap();
            k.set(&MultiIndex::new(vec![1]), c(z)).unwrap();
            KernelSequence::from_kernel(Basis::Q, k, None).unwrap().resized(6).unwrap()
        };
        let exp_coeffs: Vec<Complex64> = (0..=6)
            .map(|k| c(1.0 / crate::comb::factorial(k)))
            .collect();
        let wexp = wick_apply_series(&exp_coeffs, c(0.0), &q1).unwrap();
        let rho = crate::transforms::radon_nikodym(&[c(-z)], 6).unwrap();
        assert!(wexp.sub(&rho.retagged(Basis::Q, None)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn apply_series_guards() {
        let phi = seq1(&[0.5, 1.0]);
        let coeffs = [c(0.0), c(1.0)];
        assert!(matches!(
            wick_apply_series(&coeffs, c(0.0), &phi),
            Err(Error::ExpansionPoint)
        ));
        assert!(matches!(
            wick_apply_series(&[c(0.5)], c(0.5), &phi),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn inverse_is_geometric_series() {
        let phi = seq1(&[2.0, 1.0, 0.0, 0.0]);
        let inv = wick_inverse(&phi).unwrap();
        assert_eq!(slot_values(&inv), vec![0.5, -0.25, 0.125, -0.0625]);
        let prod = wick_product(&phi, &inv).unwrap();
        let mut expect = vec![0.0; prod.n_max() + 1];
        expect[0] = 1.0;
        for (n, v) in slot_values(&prod).into_iter().enumerate() {
            // only degrees within the inverse's truncation cancel
            if n <= 3 {
                assert!((v - expect[n]).abs() < 1e-14, "degree {n}");
            }
        }
        assert!(matches!(
            wick_inverse(&seq1(&[0.0, 1.0])),
            Err(Error::ZeroConstantTerm)
        ));
    }

    #[test]
    fn inverse_roundtrip_on_random_sequences() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let mut phi = random_seq(&mut rng, 2, 5);
            let lead = 0.5 + rng.gen_range(0.0..1.0);
            phi.set_kernel(SymKernel::constant(2, c(lead)).unwrap()).unwrap();
            let back = wick_inverse(&wick_inverse(&phi).unwrap()).unwrap();
            assert!(back.sub(&phi).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn solve_recovers_quotients() {
        let phi = seq1(&[1.0, 1.0, 0.0, 0.0, 0.0]);
        let psi = seq1(&[1.0, 0.0, 0.0, 0.0, 0.0]);
        let x = wick_solve(&phi, &psi).unwrap();
        let vals = slot_values(&x);
        for (n, v) in vals.iter().take(5).enumerate() {
            let expect = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((v - expect).abs() < 1e-14, "degree {n}");
        }
        // residual through the inverse's truncation
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut a = random_seq(&mut rng, 1, 4);
        a.set_kernel(SymKernel::constant(1, c(1.4)).unwrap()).unwrap();
        let b = random_seq(&mut rng, 1, 4);
        let x = wick_solve(&a, &b).unwrap();
        let resid = wick_product(&a, &x).unwrap().sub(&b.resized(8).unwrap()).unwrap();
        for n in 0..=4usize {
            assert!(resid.kernel(n).max_abs() < 1e-13, "degree {n}");
        }
    }

    #[test]
    fn norm_estimate_hand_value_and_trials() {
        let w = WeightModel::new(vec![2.0]).unwrap();
        let q1k = SymKernel::basis_vector(1, 0).unwrap();
        let q1 = KernelSequence::from_kernel(Basis::Q, q1k, None).unwrap();
        let report = wick_norm_check(&q1, &q1, &w, 1, 1, 1, 1).unwrap();
        assert_relative_eq!(report.lhs, 1.0 / 32.0, max_relative = 1e-13);
        assert_relative_eq!(report.rhs, 1.0 / 8.0, max_relative = 1e-13);
        assert!(report.ok);

        let unit = wick_unit(1, None).unwrap();
        let trivial = wick_norm_check(&unit, &unit, &w, 0, 0, 0, 0).unwrap();
        assert_relative_eq!(trivial.lhs, 1.0, max_relative = 1e-14);
        assert_relative_eq!(trivial.rhs, 1.0, max_relative = 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let w2 = WeightModel::new(vec![1.5, 3.0]).unwrap();
        for _ in 0..20 {
            let a = random_seq(&mut rng, 2, 4);
            let b = random_seq(&mut rng, 2, 3);
            let p1 = rng.gen_range(0..3);
            let p2 = rng.gen_range(0..3);
            let q1 = rng.gen_range(0..3);
            let q2 = rng.gen_range(0..3);
            let rep = wick_norm_check(&a, &b, &w2, p1, q1, p2, q2).unwrap();
            assert!(rep.ok, "lhs={} rhs={}", rep.lhs, rep.rhs);
        }
    }

    #[test]
    fn mismatched_measures_are_rejected() {
        let a = KernelSequence::zero(Basis::Q, 1, 1, Some("a".into())).unwrap();
        let b = KernelSequence::zero(Basis::Q, 1, 1, Some("b".into())).unwrap();
        assert!(matches!(
            wick_product(&a, &b),
            Err(Error::MeasureMismatch { .. })
        ));
        let p = KernelSequence::zero(Basis::P, 1, 1, None).unwrap();
        assert!(matches!(
            wick_product(&a.retagged(Basis::Q, None), &p),
            Err(Error::BasisMismatch { .. })
        ));
    }
}
