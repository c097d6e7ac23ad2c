//! The Appell system of a measure: the polynomial family `P_n` determined by
//! `E_μ e^{⟨x,θ⟩} / l_μ(θ) = Σ_n ⟨P_n(x), θ^⊗n⟩ / n!`.
//!
//! Everything is generated from the moment kernels through the constant
//! terms `B_n = P_n(0)`, which are the coefficient kernels of `1/l_μ`:
//! `B_0 = 1` and `Σ_{k≤n} C(n,k) B_k ⊗̂ M_{n−k} = 0` for `n ≥ 1`. The
//! polynomial kernels then assemble as a binomial convolution with the
//! monomial powers, and the classical Appell identities become finite
//! coefficient identities checked by [`AppellSystem::check_monomial`] /
//! [`AppellSystem::check_addition`] and by quadrature.

use num_complex::Complex64;

use crate::calculus::{Basis, KernelSequence};
use crate::comb::{binomial, factorial};
use crate::error::{Error, Result};
use crate::measure::{MeasureModel, LAPLACE_GUARD_TOL};
use crate::tensor::{SymKernel, WeightModel};

/// A measure together with the constant terms `B_n = P_n(0)` of its Appell
/// system, through a fixed truncation degree.
#[derive(Clone, Debug)]
pub struct AppellSystem {
    measure: MeasureModel,
    b: Vec<SymKernel>,
}

/// Build the Appell system of `measure` through degree `n_max` by the
/// reciprocal-series recursion `B_n = −Σ_{k<n} C(n,k) B_k ⊗̂ M_{n−k}`.
pub fn build_appell(measure: &MeasureModel, n_max: usize) -> Result<AppellSystem> {
    if n_max > measure.n_max() {
        return Err(Error::MissingMoments {
            available: measure.n_max(),
            needed: n_max,
        });
    }
    let d = measure.dim();
    let mut b: Vec<SymKernel> = Vec::with_capacity(n_max + 1);
    b.push(SymKernel::constant(d, Complex64::ONE)?);
    for n in 1..=n_max {
        let mut acc = SymKernel::zero(d, n)?;
        for k in 0..n {
            let term = b[k].sym_product(measure.moment(n - k)?)?;
            acc.add_assign(&term.scale(Complex64::new(binomial(n, k), 0.0)))?;
        }
        b.push(acc.scale(Complex64::new(-1.0, 0.0)));
    }
    Ok(AppellSystem {
        measure: measure.clone(),
        b,
    })
}

impl AppellSystem {
    pub fn measure(&self) -> &MeasureModel {
        &self.measure
    }

    pub fn dim(&self) -> usize {
        self.measure.dim()
    }

    /// Highest degree the system carries.
    pub fn n_max(&self) -> usize {
        self.b.len() - 1
    }

    /// All constant terms `B_0 ..= B_N`.
    pub fn b_kernels(&self) -> &[SymKernel] {
        &self.b
    }

    pub fn b_kernel(&self, n: usize) -> Result<&SymKernel> {
        self.b.get(n).ok_or(Error::MissingMoments {
            available: self.n_max(),
            needed: n,
        })
    }

    /// The degree-`n` Appell kernel at the point `x`:
    /// `P_n(x) = Σ_{k≤n} C(n,k) x^⊗k ⊗̂ B_{n−k}`.
    pub fn p_kernel(&self, n: usize, x: &[Complex64]) -> Result<SymKernel> {
        if n > self.n_max() {
            return Err(Error::MissingMoments {
                available: self.n_max(),
                needed: n,
            });
        }
        if x.len() != self.dim() {
            return Err(Error::PointDimension {
                got: x.len(),
                want: self.dim(),
            });
        }
        let mut acc = SymKernel::zero(self.dim(), n)?;
        for k in 0..=n {
            let xk = SymKernel::point_power(x, k)?;
            let term = xk.sym_product(&self.b[n - k])?;
            acc.add_assign(&term.scale(Complex64::new(binomial(n, k), 0.0)))?;
        }
        Ok(acc)
    }

    /// Residual of the defining recursion,
    /// `max_{1≤n≤N} |Σ_k C(n,k) B_k ⊗̂ M_{n−k}|_max` — zero in exact
    /// arithmetic by construction of `B`.
    pub fn recursion_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for n in 1..=self.n_max() {
            let mut acc = SymKernel::zero(self.dim(), n)?;
            for k in 0..=n {
                let term = self.b[k].sym_product(self.measure.moment(n - k)?)?;
                acc.add_assign(&term.scale(Complex64::new(binomial(n, k), 0.0)))?;
            }
            worst = worst.max(acc.max_abs());
        }
        Ok(worst)
    }

    /// Residual of the monomial expansion
    /// `x^⊗n = Σ_{k≤n} C(n,k) P_k(x) ⊗̂ M_{n−k}` at one point.
    pub fn check_monomial(&self, n: usize, x: &[Complex64]) -> Result<f64> {
        let mut acc = SymKernel::point_power(x, n)?;
        for k in 0..=n {
            let term = self.p_kernel(k, x)?.sym_product(self.measure.moment(n - k)?)?;
            acc = acc.sub(&term.scale(Complex64::new(binomial(n, k), 0.0)))?;
        }
        Ok(acc.max_abs())
    }

    /// Residual of the Appell addition formula
    /// `P_n(x+y) = Σ_{k≤n} C(n,k) P_k(x) ⊗̂ y^⊗(n−k)` at one point pair.
    pub fn check_addition(&self, n: usize, x: &[Complex64], y: &[Complex64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        let xy: Vec<Complex64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        let mut acc = self.p_kernel(n, &xy)?;
        for k in 0..=n {
            let term = self
                .p_kernel(k, x)?
                .sym_product(&SymKernel::point_power(y, n - k)?)?;
            acc = acc.sub(&term.scale(Complex64::new(binomial(n, k), 0.0)))?;
        }
        Ok(acc.max_abs())
    }

    /// Truncated μ-exponential `Σ_{n≤trunc} ⟨P_n(x), θ^⊗n⟩ / n!` together
    /// with the closed form `e^{⟨x,θ⟩}/l_μ(θ)` when the measure has one.
    ///
    /// Guarded: `|l_μ(θ)|` (closed form when available, else the moment
    /// partial sum) must stay above [`LAPLACE_GUARD_TOL`].
    pub fn emu_eval(&self, theta: &[Complex64], x: &[Complex64], trunc: usize) -> Result<EmuEval> {
        if trunc > self.n_max() {
            return Err(Error::MissingMoments {
                available: self.n_max(),
                needed: trunc,
            });
        }
        let l_eval = self.measure.laplace_eval(theta, trunc)?;
        let l_value = l_eval.closed.unwrap_or(l_eval.series);
        if l_value.norm() < LAPLACE_GUARD_TOL {
            return Err(Error::GuardRadius {
                value: l_value.norm(),
                threshold: LAPLACE_GUARD_TOL,
            });
        }
        let mut series = Complex64::ZERO;
        for n in 0..=trunc {
            let pn = self.p_kernel(n, x)?;
            series += pn.pairing(&SymKernel::point_power(theta, n)?)? / factorial(n);
        }
        let closed = l_eval.closed.map(|l| {
            let ip: Complex64 = x.iter().zip(theta).map(|(a, b)| a * b).sum();
            ip.exp() / l
        });
        Ok(EmuEval { series, closed })
    }

    /// Empirical witness for the exponential growth bound
    /// `|P_n(z)|_{−p} ≤ C n! ε^{−n} e^{ε |z|_{−p}}`: the smallest admissible
    /// `C` over the sample points, the per-degree ratio trail, and a flag
    /// when the trail is still climbing at the truncation edge.
    pub fn growth_bound_check(
        &self,
        w: &WeightModel,
        p: i32,
        eps: f64,
        samples: &[Vec<Complex64>],
    ) -> Result<GrowthReport> {
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "growth bound needs ε > 0, got {eps}"
            )));
        }
        if samples.is_empty() {
            return Err(Error::InvalidParameter("no sample points given".into()));
        }
        let n_max = self.n_max();
        let mut per_degree = vec![0.0f64; n_max + 1];
        for z in samples {
            let z_norm = w.vector_norm(z, -p)?;
            let envelope_base = (eps * z_norm).exp();
            for (n, slot) in per_degree.iter_mut().enumerate() {
                let pn = self.p_kernel(n, z)?;
                let ratio =
                    pn.weighted_norm(-p, w)? / (factorial(n) * eps.powi(-(n as i32)) * envelope_base);
                *slot = slot.max(ratio);
            }
        }
        let c_emp = per_degree.iter().copied().fold(0.0, f64::max);
        let tail_rising = if n_max >= 6 {
            let tail = &per_degree[n_max - 2..];
            let mid = per_degree[n_max / 2];
            tail.windows(2).all(|w| w[1] > w[0]) && mid > 0.0 && tail[2] > 1.25 * mid
        } else {
            false
        };
        Ok(GrowthReport {
            c_emp,
            per_degree,
            eps,
            level: p,
            tail_rising,
        })
    }
}

/// Truncated and closed-form values of the μ-exponential at one `(θ, x)`.
#[derive(Clone, Copy, Debug)]
pub struct EmuEval {
    pub series: Complex64,
    pub closed: Option<Complex64>,
}

/// Outcome of [`AppellSystem::growth_bound_check`].
#[derive(Clone, Debug)]
pub struct GrowthReport {
    /// Smallest constant making the bound hold on the samples.
    pub c_emp: f64,
    /// Per-degree maxima of the ratio `|P_n(z)|_{−p} / (n! ε^{−n} e^{ε|z|_{−p}})`.
    pub per_degree: Vec<f64>,
    pub eps: f64,
    pub level: i32,
    /// True when the ratio trail still climbs at the truncation edge — the
    /// empirical signature of a violated bound.
    pub tail_rising: bool,
}

/// Directional derivative along a degree-`k` kernel `Φ`, acting slotwise on
/// a monomial- or P-basis sequence: the degree-`m` component contributes
/// `(m!/(m−k)!) · contract(Φ, f^{(m)})` at degree `m − k`. Acting
/// identically in both bases is exactly the shift property of the Appell
/// system; a Q-basis input is rejected.
pub fn derivative_op(phi: &SymKernel, f: &KernelSequence) -> Result<KernelSequence> {
    if f.basis() == Basis::Q {
        return Err(Error::BasisMismatch {
            expected: "monomial or P".into(),
            got: "Q".into(),
        });
    }
    if phi.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            left: phi.dim(),
            right: f.dim(),
        });
    }
    let k = phi.degree();
    let n_max = f.n_max();
    let out_max = n_max.saturating_sub(k);
    let mut kernels = Vec::with_capacity(out_max + 1);
    for m in k..=n_max {
        let factor = factorial(m) / factorial(m - k);
        kernels.push(
            phi.contract(f.kernel(m))?
                .scale(Complex64::new(factor, 0.0)),
        );
    }
    if kernels.is_empty() {
        kernels.push(SymKernel::zero(f.dim(), 0)?);
    }
    KernelSequence::new(f.basis(), f.dim(), kernels, f.measure_id().map(String::from))
}
