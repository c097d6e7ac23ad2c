//! Truncated symmetric-tensor coefficient algebra over a weighted model.
//!
//! A degree-`n` symmetric kernel over the `d`-dimensional model space is
//! stored as the dense table of its full-tensor values: the entry at the
//! multi-index `α` (with `|α| = n`) is the value `T_α` the symmetric tensor
//! takes on *any* index tuple of type `α`. No combinatorial multiplicities
//! are folded into the table; they live in the pairing and norm formulas,
//!
//! ```text
//! ⟨x^⊗n, f⟩      = Σ_α (n!/α!) T_α x^α
//! ⟨f, g⟩         = Σ_α (n!/α!) f_α g_α          (bilinear, no conjugation)
//! |f|_p²         = Σ_α (n!/α!) |f_α|² Π_i λ_i^{2 p α_i}
//! ```
//!
//! With this convention the symmetric product is a plain convolution with
//! rational weights and evaluation is multiplicative:
//! `⟨x^⊗(n+m), f ⊗̂ g⟩ = ⟨x^⊗n, f⟩ · ⟨x^⊗m, g⟩`.

use num_complex::Complex64;

use crate::comb::{binomial_u128, factorial_u128};
use crate::error::{Error, Result, DEGREE_CAP};

/// Exponent vector `α ∈ ℕ^d`. The degree is the sum of the entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// `α!` as an exact integer.
    fn factorial_u128(&self) -> u128 {
        self.0.iter().map(|&e| factorial_u128(e as usize)).product()
    }

    /// The multiplicity `n!/α!` of the index type `α`, `n = |α|`: the number
    /// of index tuples a full symmetric tensor takes the value `T_α` on.
    pub fn multiplicity(&self) -> f64 {
        (factorial_u128(self.degree()) / self.factorial_u128()) as f64
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Number of multi-indices of degree `n` over `d` variables.
pub fn table_len(dim: usize, degree: usize) -> usize {
    binomial_u128(degree + dim - 1, dim - 1) as usize
}

/// All multi-indices of the given degree, in graded-lex order: within the
/// (single) grade, indices with a larger leading exponent come first, so for
/// `d = 2, n = 2` the order is `(2,0), (1,1), (0,2)`. The order is total and
/// stable; kernel tables are aligned with it.
pub fn multi_indices(dim: usize, degree: usize) -> Vec<MultiIndex> {
    fn fill(dim: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if dim == 1 {
            prefix.push(degree);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for lead in (0..=degree).rev() {
            prefix.push(lead);
            fill(dim - 1, degree - lead, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(table_len(dim, degree));
    fill(dim, degree as u32, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// Position of `α` in [`multi_indices`]`(α.dim(), α.degree())`.
pub fn rank(alpha: &MultiIndex) -> usize {
    let d = alpha.dim();
    let mut r = 0usize;
    let mut rem = alpha.degree() as u32;
    for j in 0..d - 1 {
        // every index whose j-th exponent is larger comes earlier
        for v in alpha.0[j] + 1..=rem {
            r += table_len(d - j - 1, (rem - v) as usize);
        }
        rem -= alpha.0[j];
    }
    r
}

/// Diagonal weight sequence `λ` of the model space; all `λ_i ≥ 1`. Powers of
/// the weights grade the `|·|_p` norm family and the Hilbert–Schmidt
/// embedding bounds between levels.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightModel {
    lambda: Vec<f64>,
}

impl WeightModel {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidWeight("empty weight vector".into()));
        }
        if let Some(bad) = lambda.iter().find(|&&l| !(l >= 1.0) || !l.is_finite()) {
            return Err(Error::InvalidWeight(format!(
                "weights must satisfy λ_i >= 1, got {bad}"
            )));
        }
        Ok(WeightModel { lambda })
    }

    /// All weights equal to one: the unweighted `ℓ²` model.
    pub fn unit(dim: usize) -> Self {
        WeightModel {
            lambda: vec![1.0; dim.max(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Hilbert–Schmidt norm of the embedding from level `p_hi` down to
    /// `p_lo`: `(Σ_i λ_i^{−2(p_hi − p_lo)})^{1/2}`. Contracts strictly as
    /// the gap grows whenever some `λ_i > 1`.
    pub fn hs_norm(&self, p_hi: i32, p_lo: i32) -> f64 {
        self.lambda
            .iter()
            .map(|l| l.powi(-2 * (p_hi - p_lo)))
            .sum::<f64>()
            .sqrt()
    }

    /// Weighted vector norm `|θ|_p = (Σ_i λ_i^{2p} |θ_i|²)^{1/2}`.
    pub fn vector_norm(&self, theta: &[Complex64], p: i32) -> Result<f64> {
        if theta.len() != self.dim() {
            return Err(Error::PointDimension {
                got: theta.len(),
                want: self.dim(),
            });
        }
        Ok(self
            .lambda
            .iter()
            .zip(theta)
            .map(|(l, t)| l.powi(2 * p) * t.norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `Π_i λ_i^{2 p α_i}` — the diagonal norm weight of one table entry.
    fn entry_weight(&self, alpha: &MultiIndex, p: i32) -> f64 {
        self.lambda
            .iter()
            .zip(alpha.exps())
            .map(|(l, &e)| l.powi(2 * p * e as i32))
            .product()
    }
}

/// Degree-homogeneous symmetric kernel: the coefficient table `α ↦ T_α` over
/// all multi-indices of one degree, aligned with [`multi_indices`].
#[derive(Clone, Debug, PartialEq)]
pub struct SymKernel {
    dim: usize,
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl SymKernel {
    fn check_shape(dim: usize, degree: usize) -> Result<()> {
        if dim == 0 {
            return Err(Error::InvalidParameter("kernel dimension must be >= 1".into()));
        }
        if degree > DEGREE_CAP {
            return Err(Error::DegreeCap(degree));
        }
        Ok(())
    }

    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        Self::check_shape(dim, degree)?;
        Ok(SymKernel {
            dim,
            degree,
            coeffs: vec![Complex64::ZERO; table_len(dim, degree)],
        })
    }

    /// Degree-0 kernel holding a single scalar.
    pub fn constant(dim: usize, value: Complex64) -> Result<Self> {
        let mut k = Self::zero(dim, 0)?;
        k.coeffs[0] = value;
        Ok(k)
    }

    /// Degree-1 kernel representing the basis vector `e_i`.
    pub fn basis_vector(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {i} out of range for dimension {dim}"
            )));
        }
        let mut k = Self::zero(dim, 1)?;
        k.coeffs[i] = Complex64::ONE;
        Ok(k)
    }

    /// The rank-one power `z^⊗n`, whose table is `T_α = z^α`.
    pub fn point_power(z: &[Complex64], degree: usize) -> Result<Self> {
        Self::check_shape(z.len(), degree)?;
        let dim = z.len();
        let idx = multi_indices(dim, degree);
        let coeffs = idx
            .iter()
            .map(|a| {
                a.exps()
                    .iter()
                    .zip(z)
                    .map(|(&e, zi)| zi.powu(e))
                    .product()
            })
            .collect();
        Ok(SymKernel { dim, degree, coeffs })
    }

    /// Build a kernel by evaluating `f` on every multi-index of the degree.
    pub fn from_fn(
        dim: usize,
        degree: usize,
        mut f: impl FnMut(&MultiIndex) -> Complex64,
    ) -> Result<Self> {
        Self::check_shape(dim, degree)?;
        let coeffs = multi_indices(dim, degree).iter().map(|a| f(a)).collect();
        Ok(SymKernel { dim, degree, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Table value at `α`; indices of the wrong shape are an error rather
    /// than zero, since every multi-index of the kernel's degree is stored.
    pub fn get(&self, alpha: &MultiIndex) -> Result<Complex64> {
        self.position(alpha).map(|i| self.coeffs[i])
    }

    pub fn set(&mut self, alpha: &MultiIndex, value: Complex64) -> Result<()> {
        let i = self.position(alpha)?;
        self.coeffs[i] = value;
        Ok(())
    }

    fn position(&self, alpha: &MultiIndex) -> Result<usize> {
        if alpha.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: alpha.dim(),
                right: self.dim,
            });
        }
        if alpha.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: alpha.degree(),
                right: self.degree,
            });
        }
        Ok(rank(alpha))
    }

    /// Largest coefficient magnitude — the residual scale used all over the
    /// test suites.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::ZERO)
    }

    pub fn scale(&self, s: Complex64) -> SymKernel {
        SymKernel {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn conj(&self) -> SymKernel {
        SymKernel {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    fn check_same_shape(&self, other: &SymKernel) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &SymKernel) -> Result<SymKernel> {
        self.check_same_shape(other)?;
        Ok(SymKernel {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &SymKernel) -> Result<SymKernel> {
        self.check_same_shape(other)?;
        Ok(SymKernel {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn add_assign(&mut self, other: &SymKernel) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(())
    }

    /// Symmetric tensor product `f ⊗̂ g` (normalized symmetrization). In
    /// table form it is a convolution,
    ///
    /// ```text
    /// T^{f⊗̂g}_γ = Σ_{α+β=γ} [Π_i C(γ_i, α_i)] / C(n+m, n) · T^f_α T^g_β ,
    /// ```
    ///
    /// which makes evaluation multiplicative:
    /// `⟨x^⊗(n+m), f ⊗̂ g⟩ = ⟨x^⊗n, f⟩⟨x^⊗m, g⟩`.
    pub fn sym_product(&self, other: &SymKernel) -> Result<SymKernel> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let (n, m) = (self.degree, other.degree);
        let mut out = SymKernel::zero(self.dim, n + m)?;
        let idx_a = multi_indices(self.dim, n);
        let idx_b = multi_indices(self.dim, m);
        let denom = binomial_u128(n + m, n) as f64;
        for (ia, a) in idx_a.iter().enumerate() {
            let ca = self.coeffs[ia];
            if ca == Complex64::ZERO {
                continue;
            }
            for (ib, b) in idx_b.iter().enumerate() {
                let cb = other.coeffs[ib];
                if cb == Complex64::ZERO {
                    continue;
                }
                let gamma = a.add(b)?;
                let over: u128 = gamma
                    .exps()
                    .iter()
                    .zip(a.exps())
                    .map(|(&g, &ai)| binomial_u128(g as usize, ai as usize))
                    .product();
                out.coeffs[rank(&gamma)] += ca * cb * (over as f64 / denom);
            }
        }
        Ok(out)
    }

    /// Contract a lower-degree kernel `Φ` (degree `n`, = `self`) against a
    /// higher-degree kernel `φ` (degree `m ≥ n`), producing the degree
    /// `m − n` kernel `r` determined by
    ///
    /// ```text
    /// ⟨x^⊗(m−n) ⊗̂ Φ, φ⟩ = ⟨x^⊗(m−n), r⟩   for all x,
    /// ```
    ///
    /// i.e. `r_α = Σ_{|β|=n} (n!/β!) Φ_β φ_{α+β}`. On rank-one kernels this
    /// is `contract(η^⊗n, ξ^⊗m) = ⟨η,ξ⟩^n ξ^⊗(m−n)`; no combinatorial
    /// factor appears (directional-derivative factors like `m!/(m−n)!`
    /// belong to the operators built on top of the contraction).
    pub fn contract(&self, phi: &SymKernel) -> Result<SymKernel> {
        if self.dim != phi.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: phi.dim,
            });
        }
        if self.degree > phi.degree {
            return Err(Error::ContractionDegree {
                low: self.degree,
                high: phi.degree,
            });
        }
        let n = self.degree;
        let mut out = SymKernel::zero(self.dim, phi.degree - n)?;
        let idx_b = multi_indices(self.dim, n);
        let idx_a = multi_indices(self.dim, out.degree);
        for (ia, a) in idx_a.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for (ib, b) in idx_b.iter().enumerate() {
                let cb = self.coeffs[ib];
                if cb == Complex64::ZERO {
                    continue;
                }
                acc += b.multiplicity() * cb * phi.coeffs[rank(&a.add(b)?)];
            }
            out.coeffs[ia] = acc;
        }
        Ok(out)
    }

    /// Evaluate the induced homogeneous polynomial:
    /// `⟨z^⊗n, f⟩ = Σ_α (n!/α!) T_α z^α`.
    pub fn apply_to_point(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim {
            return Err(Error::PointDimension {
                got: z.len(),
                want: self.dim,
            });
        }
        let idx = multi_indices(self.dim, self.degree);
        Ok(idx
            .iter()
            .zip(&self.coeffs)
            .map(|(a, c)| {
                let z_pow: Complex64 = a
                    .exps()
                    .iter()
                    .zip(z)
                    .map(|(&e, zi)| zi.powu(e))
                    .product();
                a.multiplicity() * c * z_pow
            })
            .sum())
    }

    /// Full-tensor bilinear pairing of two kernels of equal degree:
    /// `⟨f, g⟩ = Σ_α (n!/α!) f_α g_α`. No conjugation — pair `f.conj()`
    /// explicitly for the sesquilinear form.
    pub fn pairing(&self, other: &SymKernel) -> Result<Complex64> {
        self.check_same_shape(other)?;
        let idx = multi_indices(self.dim, self.degree);
        Ok(idx
            .iter()
            .enumerate()
            .map(|(i, a)| a.multiplicity() * self.coeffs[i] * other.coeffs[i])
            .sum())
    }

    /// Weighted Fock-level norm of one kernel:
    /// `|f|_p = (Σ_α (n!/α!) |f_α|² Π_i λ_i^{2pα_i})^{1/2}`.
    pub fn weighted_norm(&self, p: i32, w: &WeightModel) -> Result<f64> {
        if w.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: w.dim(),
                right: self.dim,
            });
        }
        let idx = multi_indices(self.dim, self.degree);
        Ok(idx
            .iter()
            .enumerate()
            .map(|(i, a)| a.multiplicity() * self.coeffs[i].norm_sqr() * w.entry_weight(a, p))
            .sum::<f64>()
            .sqrt())
    }
}
