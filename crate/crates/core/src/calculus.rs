//! Coefficient sequences and the dual calculus on them.
//!
//! A [`KernelSequence`] is a truncated family `(f^{(0)}, …, f^{(N)})` of
//! symmetric kernels, one per degree, tagged by the basis its coefficients
//! refer to: the monomial powers `x^⊗n`, the Appell system `P_n` of a
//! measure (test side), or its biorthogonal dual `Q_n` (distribution side).
//! The tag is bookkeeping, not arithmetic: mixing bases is a logic error
//! and the operations here reject it instead of producing plausible
//! nonsense.
//!
//! Sequences serialize to a stable JSON wire format
//! `{d, N, basis, measure_id, kernels: [{n, entries: [[α…], re, im]}]}`
//! storing only nonzero entries; absent degrees deserialize to zero
//! kernels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::appell::AppellSystem;
use crate::comb::{binomial, factorial};
use crate::error::{Error, Result, DEGREE_CAP};
use crate::measure::{Density1d, MeasureKind, NormalDensity};
use crate::tensor::{MultiIndex, SymKernel, WeightModel};

/// Which system a sequence's coefficients refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Appell polynomials `P_n` — the test-function side.
    P,
    /// Biorthogonal dual kernels `Q_n` — the distribution side.
    Q,
    /// Plain monomial powers `x^⊗n`.
    Monomial,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::P => "P",
            Basis::Q => "Q",
            Basis::Monomial => "monomial",
        }
    }

    pub fn parse(tag: &str) -> Result<Basis> {
        match tag {
            "P" => Ok(Basis::P),
            "Q" => Ok(Basis::Q),
            "monomial" => Ok(Basis::Monomial),
            other => Err(Error::MalformedSequence(format!(
                "unknown basis tag {other:?} (expected \"P\", \"Q\" or \"monomial\")"
            ))),
        }
    }
}

impl std::fmt::Display for Basis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A degree-indexed family of symmetric kernels under one basis tag.
///
/// Slot `n` always holds a kernel of degree exactly `n`; every degree from
/// 0 through `n_max` is present (zero kernels included), so indexing is
/// positional.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "WireSequence", into = "WireSequence")]
pub struct KernelSequence {
    basis: Basis,
    dim: usize,
    kernels: Vec<SymKernel>,
    measure_id: Option<String>,
}

impl KernelSequence {
    /// Wrap a dense slot vector. `kernels[n]` must have degree `n` and all
    /// slots the common dimension.
    pub fn new(
        basis: Basis,
        dim: usize,
        kernels: Vec<SymKernel>,
        measure_id: Option<String>,
    ) -> Result<Self> {
        if kernels.is_empty() {
            return Err(Error::MalformedSequence(
                "a sequence needs at least the degree-0 slot".into(),
            ));
        }
        for (n, k) in kernels.iter().enumerate() {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: k.dim(),
                    right: dim,
                });
            }
            if k.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: k.degree(),
                    right: n,
                });
            }
        }
        Ok(KernelSequence {
            basis,
            dim,
            kernels,
            measure_id,
        })
    }

    /// The all-zero sequence through degree `n_max`.
    pub fn zero(basis: Basis, dim: usize, n_max: usize, measure_id: Option<String>) -> Result<Self> {
        let kernels = (0..=n_max)
            .map(|n| SymKernel::zero(dim, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(basis, dim, kernels, measure_id)
    }

    /// A sequence that is zero except for one kernel placed at its own
    /// degree.
    pub fn from_kernel(basis: Basis, kernel: SymKernel, measure_id: Option<String>) -> Result<Self> {
        let mut seq = Self::zero(basis, kernel.dim(), kernel.degree(), measure_id)?;
        let n = kernel.degree();
        seq.kernels[n] = kernel;
        Ok(seq)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest degree carried (slots run `0..=n_max`).
    pub fn n_max(&self) -> usize {
        self.kernels.len() - 1
    }

    pub fn measure_id(&self) -> Option<&str> {
        self.measure_id.as_deref()
    }

    pub fn kernels(&self) -> &[SymKernel] {
        &self.kernels
    }

    /// The degree-`n` slot. Panics when `n > n_max`; use [`Self::get`] for
    /// a checked lookup.
    pub fn kernel(&self, n: usize) -> &SymKernel {
        &self.kernels[n]
    }

    pub fn get(&self, n: usize) -> Option<&SymKernel> {
        self.kernels.get(n)
    }

    /// Replace the degree-`n` slot, growing the sequence with zeros if
    /// needed.
    pub fn set_kernel(&mut self, kernel: SymKernel) -> Result<()> {
        if kernel.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: kernel.dim(),
                right: self.dim,
            });
        }
        let n = kernel.degree();
        while self.kernels.len() <= n {
            self.kernels.push(SymKernel::zero(self.dim, self.kernels.len())?);
        }
        self.kernels[n] = kernel;
        Ok(())
    }

    /// Copy with slots above `n_max` dropped (or zeros appended when the
    /// sequence is shorter).
    pub fn resized(&self, n_max: usize) -> Result<Self> {
        let mut kernels: Vec<SymKernel> = self.kernels.iter().take(n_max + 1).cloned().collect();
        while kernels.len() <= n_max {
            kernels.push(SymKernel::zero(self.dim, kernels.len())?);
        }
        Self::new(self.basis, self.dim, kernels, self.measure_id.clone())
    }

    /// Same coefficients under a different tag — for the few places where
    /// a re-interpretation is the mathematical content (e.g. reordering
    /// output assembled slot by slot).
    pub fn retagged(&self, basis: Basis, measure_id: Option<String>) -> Self {
        KernelSequence {
            basis,
            dim: self.dim,
            kernels: self.kernels.clone(),
            measure_id,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.kernels.iter().map(SymKernel::max_abs).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        KernelSequence {
            basis: self.basis,
            dim: self.dim,
            kernels: self.kernels.iter().map(|k| k.scale(s)).collect(),
            measure_id: self.measure_id.clone(),
        }
    }

    /// Slotwise sum, padding the shorter sequence with zeros. Basis tags
    /// must agree.
    pub fn add(&self, other: &KernelSequence) -> Result<KernelSequence> {
        self.combine(other, |a, b| a.add(b), |b| b.clone())
    }

    /// Slotwise difference, padding the shorter sequence with zeros. Basis
    /// tags must agree.
    pub fn sub(&self, other: &KernelSequence) -> Result<KernelSequence> {
        self.combine(
            other,
            |a, b| a.sub(b),
            |b| b.scale(Complex64::new(-1.0, 0.0)),
        )
    }

    fn combine(
        &self,
        other: &KernelSequence,
        both: impl Fn(&SymKernel, &SymKernel) -> Result<SymKernel>,
        only_other: impl Fn(&SymKernel) -> SymKernel,
    ) -> Result<KernelSequence> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                expected: self.basis.to_string(),
                got: other.basis.to_string(),
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n_max = self.n_max().max(other.n_max());
        let mut kernels = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            kernels.push(match (self.get(n), other.get(n)) {
                (Some(a), Some(b)) => both(a, b)?,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => only_other(b),
                (None, None) => unreachable!(),
            });
        }
        KernelSequence::new(self.basis, self.dim, kernels, self.measure_id.clone())
    }
}

// ---------------------------------------------------------------------------
// wire format

#[derive(Serialize, Deserialize)]
struct WireEntry(Vec<u32>, f64, f64);

#[derive(Serialize, Deserialize)]
struct WireKernel {
    n: usize,
    entries: Vec<WireEntry>,
}

#[derive(Serialize, Deserialize)]
struct WireSequence {
    d: usize,
    #[serde(rename = "N")]
    n_max: usize,
    basis: String,
    #[serde(default)]
    measure_id: Option<String>,
    kernels: Vec<WireKernel>,
}

impl TryFrom<WireSequence> for KernelSequence {
    type Error = Error;

    fn try_from(wire: WireSequence) -> Result<Self> {
        if wire.d == 0 {
            return Err(Error::MalformedSequence("dimension must be at least 1".into()));
        }
        if wire.n_max > DEGREE_CAP {
            return Err(Error::DegreeCap(wire.n_max));
        }
        let basis = Basis::parse(&wire.basis)?;
        let mut seq = KernelSequence::zero(basis, wire.d, wire.n_max, wire.measure_id)?;
        let mut seen = vec![false; wire.n_max + 1];
        for wk in wire.kernels {
            if wk.n > wire.n_max {
                return Err(Error::MalformedSequence(format!(
                    "kernel degree {} exceeds the declared truncation {}",
                    wk.n, wire.n_max
                )));
            }
            if std::mem::replace(&mut seen[wk.n], true) {
                return Err(Error::MalformedSequence(format!(
                    "degree {} appears more than once",
                    wk.n
                )));
            }
            let mut kernel = SymKernel::zero(wire.d, wk.n)?;
            let mut filled = std::collections::HashSet::new();
            for WireEntry(exps, re, im) in wk.entries {
                if exps.len() != wire.d {
                    return Err(Error::MalformedSequence(format!(
                        "entry index {exps:?} has dimension {}, expected {}",
                        exps.len(),
                        wire.d
                    )));
                }
                let alpha = MultiIndex::new(exps);
                if alpha.degree() != wk.n {
                    return Err(Error::MalformedSequence(format!(
                        "entry index {alpha} has degree {}, expected {}",
                        alpha.degree(),
                        wk.n
                    )));
                }
                if !filled.insert(alpha.exps().to_vec()) {
                    return Err(Error::MalformedSequence(format!(
                        "duplicate entry for index {alpha}"
                    )));
                }
                kernel.set(&alpha, Complex64::new(re, im))?;
            }
            seq.set_kernel(kernel)?;
        }
        Ok(seq)
    }
}

impl From<KernelSequence> for WireSequence {
    fn from(seq: KernelSequence) -> Self {
        let kernels = seq
            .kernels
            .iter()
            .enumerate()
            .map(|(n, k)| {
                let entries = crate::tensor::multi_indices(seq.dim, n)
                    .into_iter()
                    .zip(k.coeffs())
                    .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
                    .map(|(alpha, c)| WireEntry(alpha.exps().to_vec(), c.re, c.im))
                    .collect();
                WireKernel { n, entries }
            })
            .collect();
        WireSequence {
            d: seq.dim,
            n_max: seq.kernels.len() - 1,
            basis: seq.basis.as_str().to_string(),
            measure_id: seq.measure_id,
            kernels,
        }
    }
}

// ---------------------------------------------------------------------------
// dual pairing

fn check_ids(label: Option<&str>, sys_id: &str) -> Result<()> {
    match label {
        Some(id) if id != sys_id => Err(Error::MeasureMismatch {
            left: id.to_string(),
            right: sys_id.to_string(),
        }),
        _ => Ok(()),
    }
}

/// The dual pairing `⟨⟨Φ, φ⟩⟩ = Σ_n n! ⟨Φ^{(n)}, φ^{(n)}⟩` between a
/// distribution in Q-coefficients and a test function in P-coefficients.
///
/// Because biorthogonality `⟨⟨Q-slot-m, P-slot-n⟩⟩ = n! δ_{nm} ⟨·,·⟩` is an
/// identity of this very expression, the diagonal here is exact by
/// construction rather than approximate.
pub fn pair(dist: &KernelSequence, test: &KernelSequence) -> Result<Complex64> {
    if dist.basis() != Basis::Q {
        return Err(Error::BasisMismatch {
            expected: "Q".into(),
            got: dist.basis().to_string(),
        });
    }
    if test.basis() != Basis::P {
        return Err(Error::BasisMismatch {
            expected: "P".into(),
            got: test.basis().to_string(),
        });
    }
    if dist.dim() != test.dim() {
        return Err(Error::DimensionMismatch {
            left: dist.dim(),
            right: test.dim(),
        });
    }
    if let (Some(a), Some(b)) = (dist.measure_id(), test.measure_id()) {
        if a != b {
            return Err(Error::MeasureMismatch {
                left: a.to_string(),
                right: b.to_string(),
            });
        }
    }
    let mut acc = Complex64::ZERO;
    for n in 0..=dist.n_max().min(test.n_max()) {
        acc += dist.kernel(n).pairing(test.kernel(n))? * factorial(n);
    }
    Ok(acc)
}

/// Independent check of [`pair`] for one-dimensional density measures: the
/// dual kernels are realized as functions through
/// `Q_n(x) = (−1)^n ρ^{(n)}(x) / ρ(x)` and the pairing becomes an actual
/// integral `∫ (Σ_n Φ^{(n)} Q_n)(x) · (Σ_n ⟨P_n(x), φ^{(n)}⟩) dμ(x)`
/// evaluated by the measure's quadrature. Nothing here reuses the
/// coefficient pairing.
pub fn pair_oracle(
    sys: &AppellSystem,
    dist: &KernelSequence,
    test: &KernelSequence,
) -> Result<Complex64> {
    if sys.dim() != 1 || dist.dim() != 1 || test.dim() != 1 {
        return Err(Error::InvalidParameter(
            "the density realization of the dual system is one-dimensional".into(),
        ));
    }
    check_ids(dist.measure_id(), sys.measure().id())?;
    check_ids(test.measure_id(), sys.measure().id())?;
    let density: std::sync::Arc<dyn Density1d> = match sys.measure().kind() {
        MeasureKind::Density1d => sys.measure().density().cloned().ok_or_else(|| {
            Error::MissingQuadrature("density measure lost its density handle".into())
        })?,
        MeasureKind::Gaussian => std::sync::Arc::new(NormalDensity::new(0.0, 1.0)?),
        _ => {
            return Err(Error::MissingQuadrature(
                "the pair oracle needs a measure with a smooth density".into(),
            ))
        }
    };
    let mut failure: Option<Error> = None;
    let value = sys.measure().integrate(&mut |pt: &[f64]| {
        let x = pt[0];
        let rho = density.value(x);
        let mut dist_val = Complex64::ZERO;
        for n in 0..=dist.n_max() {
            let c = dist.kernel(n).coeffs()[0];
            if c == Complex64::ZERO {
                continue;
            }
            match density.derivative(x, n) {
                Ok(dn) => {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    dist_val += c * (sign * dn / rho);
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    return Complex64::ZERO;
                }
            }
        }
        match eval_test(sys, test, &crate::to_complex(pt)) {
            Ok(test_val) => dist_val * test_val,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::ZERO
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

// ---------------------------------------------------------------------------
// evaluation

/// Evaluate a test function from its P-coefficients:
/// `φ(x) = Σ_n ⟨P_n(x), φ^{(n)}⟩`.
pub fn eval_test(sys: &AppellSystem, test: &KernelSequence, x: &[Complex64]) -> Result<Complex64> {
    if test.basis() != Basis::P {
        return Err(Error::BasisMismatch {
            expected: "P".into(),
            got: test.basis().to_string(),
        });
    }
    check_ids(test.measure_id(), sys.measure().id())?;
    let mut acc = Complex64::ZERO;
    for n in 0..=test.n_max() {
        if test.kernel(n).is_zero() {
            continue;
        }
        acc += sys.p_kernel(n, x)?.pairing(test.kernel(n))?;
    }
    Ok(acc)
}

/// Evaluate a monomial-basis sequence: `f(x) = Σ_n ⟨x^⊗n, f^{(n)}⟩`.
pub fn eval_monomial(f: &KernelSequence, x: &[Complex64]) -> Result<Complex64> {
    if f.basis() != Basis::Monomial {
        return Err(Error::BasisMismatch {
            expected: "monomial".into(),
            got: f.basis().to_string(),
        });
    }
    let mut acc = Complex64::ZERO;
    for n in 0..=f.n_max() {
        acc += f.kernel(n).apply_to_point(x)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// norm families

fn check_beta(beta: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&beta) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "the Kondratiev index must lie in [-1, 1], got {beta}"
        )));
    }
    Ok(())
}

/// Test-side Hilbert norm `(Σ_n (n!)² 2^{nq} |φ^{(n)}|_p²)^{1/2}`.
///
/// Defined on coefficient sequences of test type — P or monomial; the
/// distribution side has its own scale ([`dist_norm`]).
pub fn test_norm(seq: &KernelSequence, w: &WeightModel, p: i32, q: i32) -> Result<f64> {
    if seq.basis() == Basis::Q {
        return Err(Error::BasisMismatch {
            expected: "P or monomial".into(),
            got: "Q".into(),
        });
    }
    let mut acc = 0.0;
    for n in 0..=seq.n_max() {
        let norm = seq.kernel(n).weighted_norm(p, w)?;
        acc += factorial(n).powi(2) * 2f64.powi(q * n as i32) * norm * norm;
    }
    Ok(acc.sqrt())
}

/// Distribution-side norm
/// `(Σ_n (n!)^{1−β} 2^{−nq} |Φ^{(n)}|_{−p}²)^{1/2}` at Kondratiev index
/// `β ∈ [−1, 1]`; `p, q ≥ 0` name the dual level `(−p, −q)`.
pub fn dist_norm(
    seq: &KernelSequence,
    w: &WeightModel,
    p: i32,
    q: i32,
    beta: f64,
) -> Result<f64> {
    if seq.basis() != Basis::Q {
        return Err(Error::BasisMismatch {
            expected: "Q".into(),
            got: seq.basis().to_string(),
        });
    }
    check_beta(beta)?;
    let mut acc = 0.0;
    for n in 0..=seq.n_max() {
        let norm = seq.kernel(n).weighted_norm(-p, w)?;
        acc += factorial(n).powf(1.0 - beta) * 2f64.powi(-q * n as i32) * norm * norm;
    }
    Ok(acc.sqrt())
}

/// Test-side Kondratiev norm
/// `(Σ_n (n!)^{1+β} 2^{nq} |φ^{(n)}|_p²)^{1/2}` — the `β = 1` case is
/// [`test_norm`].
pub fn e_norm(seq: &KernelSequence, w: &WeightModel, p: i32, q: i32, beta: f64) -> Result<f64> {
    if seq.basis() == Basis::Q {
        return Err(Error::BasisMismatch {
            expected: "P or monomial".into(),
            got: "Q".into(),
        });
    }
    check_beta(beta)?;
    let mut acc = 0.0;
    for n in 0..=seq.n_max() {
        let norm = seq.kernel(n).weighted_norm(p, w)?;
        acc += factorial(n).powf(1.0 + beta) * 2f64.powi(q * n as i32) * norm * norm;
    }
    Ok(acc.sqrt())
}

// ---------------------------------------------------------------------------
// reordering between the P- and monomial representations

/// Rewrite a P-basis test function in monomial coefficients:
/// `f^{(k)} = Σ_j C(k+j, j) · contract(B_j, φ^{(k+j)})`.
///
/// Exact at the truncation — the change of basis is triangular, so no tail
/// is lost.
pub fn reorder_p_to_monomial(sys: &AppellSystem, test: &KernelSequence) -> Result<KernelSequence> {
    if test.basis() != Basis::P {
        return Err(Error::BasisMismatch {
            expected: "P".into(),
            got: test.basis().to_string(),
        });
    }
    check_ids(test.measure_id(), sys.measure().id())?;
    reorder_with(sys.b_kernels(), test, sys.n_max())
        .map(|seq| seq.retagged(Basis::Monomial, None))
}

/// Rewrite a monomial sequence in the P-coefficients of `sys`:
/// `φ^{(k)} = Σ_j C(k+j, j) · contract(M_j, f^{(k+j)})` — the inverse of
/// [`reorder_p_to_monomial`].
pub fn reorder_monomial_to_p(sys: &AppellSystem, f: &KernelSequence) -> Result<KernelSequence> {
    if f.basis() != Basis::Monomial {
        return Err(Error::BasisMismatch {
            expected: "monomial".into(),
            got: f.basis().to_string(),
        });
    }
    reorder_with(sys.measure().moments(), f, sys.measure().n_max())
        .map(|seq| seq.retagged(Basis::P, Some(sys.measure().id().to_string())))
}

fn reorder_with(
    table: &[SymKernel],
    seq: &KernelSequence,
    table_max: usize,
) -> Result<KernelSequence> {
    let n_max = seq.n_max();
    if n_max > table_max {
        return Err(Error::MissingMoments {
            available: table_max,
            needed: n_max,
        });
    }
    let mut kernels = Vec::with_capacity(n_max + 1);
    for k in 0..=n_max {
        let mut acc = SymKernel::zero(seq.dim(), k)?;
        for j in 0..=(n_max - k) {
            if table[j].is_zero() || seq.kernel(k + j).is_zero() {
                continue;
            }
            let term = table[j].contract(seq.kernel(k + j))?;
            acc.add_assign(&term.scale(Complex64::new(binomial(k + j, j), 0.0)))?;
        }
        kernels.push(acc);
    }
    KernelSequence::new(seq.basis(), seq.dim(), kernels, seq.measure_id().map(String::from))
}
