//! Integral transforms and the two named distributions.
//!
//! Each object kind has one canonical evaluation path: the S-transform of a
//! distribution is always its coefficient series, the C-transform of a test
//! function is its monomial generating series, and the Laplace transform of
//! a test function goes through reordering and moment contractions. The
//! delta distribution `δ_z` and the generalized Radon–Nikodym derivative
//! `ρ_μ(z,·)` are constructed directly in Q-coefficients, where their
//! pairing identities (`pair(δ_z, φ) = φ(z)`,
//! `pair(ρ_μ(z,·), φ) = C_μφ(−z)`) hold exactly at truncation.

use num_complex::Complex64;

use crate::appell::AppellSystem;
use crate::calculus::{reorder_p_to_monomial, Basis, KernelSequence};
use crate::comb::factorial;
use crate::error::{Error, Result};
use crate::measure::LAPLACE_GUARD_TOL;
use crate::tensor::{SymKernel, WeightModel};

/// S-transform of a distribution: `S_μΦ(θ) = Σ_n ⟨Φ^{(n)}, θ^⊗n⟩`.
///
/// At truncation this is a polynomial in `θ` and always evaluable; the
/// classical domain restriction is reported separately by
/// [`s_domain_advisory`] instead of being enforced.
pub fn s_transform(dist: &KernelSequence, theta: &[Complex64]) -> Result<Complex64> {
    if dist.basis() != Basis::Q {
        return Err(Error::BasisMismatch {
            expected: "Q".into(),
            got: dist.basis().to_string(),
        });
    }
    let mut acc = Complex64::ZERO;
    for n in 0..=dist.n_max() {
        acc += dist.kernel(n).apply_to_point(theta)?;
    }
    Ok(acc)
}

/// Advisory report on the S-transform's classical guard region
/// `2^q |θ|_p² < 1`.
///
/// The guard depends on the order `(−p, −q)` at which the distribution is
/// bounded, which a truncated sequence cannot determine — every norm of a
/// finite sequence is finite. The advisory therefore evaluates the region
/// at the lowest nontrivial level `(p, q) = (0, 1)` and reports the data;
/// it never gates evaluation.
#[derive(Clone, Copy, Debug)]
pub struct SAdvisory {
    pub p: i32,
    pub q: i32,
    /// `dist_norm` of the sequence at `(p, q, β = 0)`.
    pub dist_norm: f64,
    /// `|θ|_p` under the weight model.
    pub theta_norm: f64,
    /// Whether `2^q |θ|_p² < 1`.
    pub inside: bool,
}

pub fn s_domain_advisory(
    dist: &KernelSequence,
    w: &WeightModel,
    theta: &[Complex64],
) -> Result<SAdvisory> {
    let (p, q) = (0, 1);
    let norm = crate::calculus::dist_norm(dist, w, p, q, 0.0)?;
    let theta_norm = w.vector_norm(theta, p)?;
    Ok(SAdvisory {
        p,
        q,
        dist_norm: norm,
        theta_norm,
        inside: 2f64.powi(q) * theta_norm * theta_norm < 1.0,
    })
}

/// C-transform (convolution transform) of a test function:
/// `C_μφ(z) = ∫ φ(x+z) dμ(x) = Σ_n ⟨z^⊗n, φ^{(n)}⟩` — the P-coefficients
/// evaluated against plain powers of the argument.
pub fn c_transform(test: &KernelSequence, z: &[Complex64]) -> Result<Complex64> {
    if test.basis() != Basis::P {
        return Err(Error::BasisMismatch {
            expected: "P".into(),
            got: test.basis().to_string(),
        });
    }
    let mut acc = Complex64::ZERO;
    for n in 0..=test.n_max() {
        acc += test.kernel(n).apply_to_point(z)?;
    }
    Ok(acc)
}

/// Laplace transform of a test function,
/// `L_μφ(θ) = ∫ φ(x) e^{⟨x,θ⟩} dμ(x) = S_μφ(θ) · l_μ(θ)`.
///
/// Computed by rewriting `φ` in monomial coefficients and contracting the
/// moment kernels: `E_μ[⟨x^⊗n, f⟩ e^{⟨x,θ⟩}] = ⟨f, Σ_j contract(θ^⊗j,
/// M_{n+j})/j!⟩`, summed over the slots. The measure must carry a
/// closed-form Laplace transform so the guard `|l_μ(θ)| ≥` tolerance — the
/// existence of the normalized exponential behind the `S_μ` factorization —
/// can be checked; outside the guard the call fails rather than returning a
/// value whose `S_μφ` reading is meaningless.
pub fn l_transform(
    sys: &AppellSystem,
    test: &KernelSequence,
    theta: &[Complex64],
) -> Result<Complex64> {
    let measure = sys.measure();
    let closed = measure.closed_laplace(theta).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "measure {:?} has no closed-form Laplace transform to anchor the guard",
            measure.id()
        ))
    })?;
    if closed.norm() < LAPLACE_GUARD_TOL {
        return Err(Error::GuardRadius {
            value: closed.norm(),
            threshold: LAPLACE_GUARD_TOL,
        });
    }
    let mono = reorder_p_to_monomial(sys, test)?;
    let avail = measure.n_max();
    let mut acc = Complex64::ZERO;
    for n in 0..=mono.n_max() {
        if mono.kernel(n).is_zero() {
            continue;
        }
        let mut dn = SymKernel::zero(mono.dim(), n)?;
        for j in 0..=(avail - n) {
            let tj = SymKernel::point_power(theta, j)?;
            dn.add_assign(
                &tj.contract(measure.moment(n + j)?)?
                    .scale(Complex64::new(1.0 / factorial(j), 0.0)),
            )?;
        }
        acc += mono.kernel(n).pairing(&dn)?;
    }
    Ok(acc)
}

/// The delta distribution `δ_z = Σ_n Q_n(P_n(z)/n!)` in Q-coefficients,
/// truncated at the system's degree. Its defining property
/// `pair(δ_z, φ) = eval_test(φ, z)` is a coefficient identity, exact for
/// every test function of degree within the truncation.
pub fn delta(sys: &AppellSystem, z: &[Complex64]) -> Result<KernelSequence> {
    let mut kernels = Vec::with_capacity(sys.n_max() + 1);
    for n in 0..=sys.n_max() {
        kernels.push(
            sys.p_kernel(n, z)?
                .scale(Complex64::new(1.0 / factorial(n), 0.0)),
        );
    }
    KernelSequence::new(
        Basis::Q,
        sys.dim(),
        kernels,
        Some(sys.measure().id().to_string()),
    )
}

/// The generalized Radon–Nikodym derivative `ρ_μ(z,·)` in Q-coefficients:
/// `Φ^{(n)} = (−1)^n z^⊗n / n!`. The coefficients do not involve the
/// measure (only the distribution's *interpretation* does), so the sequence
/// is returned unbound and pairs under any system:
/// `pair(ρ_μ(z,·), φ) = C_μφ(−z)`.
pub fn radon_nikodym(z: &[Complex64], n_max: usize) -> Result<KernelSequence> {
    let minus_z: Vec<Complex64> = z.iter().map(|c| -c).collect();
    let mut kernels = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        kernels.push(
            SymKernel::point_power(&minus_z, n)?
                .scale(Complex64::new(1.0 / factorial(n), 0.0)),
        );
    }
    KernelSequence::new(Basis::Q, z.len(), kernels, None)
}
