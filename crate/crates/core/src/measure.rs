//! Measure models: truncated moment-kernel sequences with analytic Laplace
//! transforms, plus the quadrature backends used as numeric oracles.
//!
//! A [`MeasureModel`] stores the symmetric moment kernels `M_0 ..= M_N`
//! (`⟨M_n, θ^⊗n⟩ = ∫ ⟨x,θ⟩^n dμ`), a kind tag with whatever closed-form
//! structure the kind carries (Laplace transform, density handle, pmf), and
//! an optional quadrature rule. The coefficient algebra only ever consumes
//! the moment kernels; the rest exists so that every identity proved at the
//! coefficient level can be re-checked by an independent `∫ · dμ`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::comb::factorial;
use crate::error::{Error, Result};
use crate::tensor::{MultiIndex, SymKernel, WeightModel};

/// Tolerance for the `∫ρ = 1` check when building a density measure.
pub const DENSITY_NORMALIZATION_TOL: f64 = 1e-8;

/// Threshold below which `|l_μ(θ)|` is treated as outside the guard radius.
pub const LAPLACE_GUARD_TOL: f64 = 1e-6;

// ---------------------------------------------------------------------------
// densities
// ---------------------------------------------------------------------------

/// A 1D probability density with enough analytic structure to serve as an
/// oracle: pointwise values, derivatives (for the dual-system realization
/// `Q_n = (−1)^n ρ^{(n)}/ρ`), and optionally a closed-form Laplace
/// transform.
pub trait Density1d: Send + Sync {
    fn value(&self, x: f64) -> f64;

    /// `ρ^{(n)}(x)`; `n = 0` is the value itself. Implementations without an
    /// analytic route may return [`Error::DensityDerivative`].
    fn derivative(&self, x: f64, n: usize) -> Result<f64>;

    /// Closed-form `∫ e^{θx} ρ(x) dx` when the density has one.
    fn laplace(&self, _theta: Complex64) -> Option<Complex64> {
        None
    }

    /// Short tag used in measure ids and mismatch errors.
    fn label(&self) -> String;
}

/// Probabilists' Hermite polynomial `He_n(x)` by the three-term recurrence.
/// Used for closed-form Gaussian density derivatives and test oracles.
pub fn hermite_he(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normal density with mean `m` and standard deviation `s`. All derivatives
/// are closed-form via `ρ^{(n)}(x) = (−1)^n He_n(u) ρ(x) / s^n`, `u = (x−m)/s`.
#[derive(Clone, Debug)]
pub struct NormalDensity {
    pub mean: f64,
    pub std: f64,
}

impl NormalDensity {
    pub fn new(mean: f64, std: f64) -> Result<Self> {
        if !(std > 0.0) || !std.is_finite() || !mean.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "normal density needs finite mean and std > 0, got mean={mean}, std={std}"
            )));
        }
        Ok(NormalDensity { mean, std })
    }
}

impl Density1d for NormalDensity {
    fn value(&self, x: f64) -> f64 {
        let u = (x - self.mean) / self.std;
        (-0.5 * u * u).exp() / (self.std * (2.0 * std::f64::consts::PI).sqrt())
    }

    fn derivative(&self, x: f64, n: usize) -> Result<f64> {
        let u = (x - self.mean) / self.std;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * hermite_he(n, u) * self.value(x) / self.std.powi(n as i32))
    }

    fn laplace(&self, theta: Complex64) -> Option<Complex64> {
        Some((theta * self.mean + theta * theta * (0.5 * self.std * self.std)).exp())
    }

    fn label(&self) -> String {
        format!("normal(mean={},std={})", self.mean, self.std)
    }
}

/// Finite mixture of normal densities. Weights must be positive and sum to 1.
#[derive(Clone, Debug)]
pub struct MixtureDensity {
    components: Vec<(f64, NormalDensity)>,
}

impl MixtureDensity {
    pub fn new(components: Vec<(f64, NormalDensity)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("empty mixture".into()));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| !(w > &0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "mixture weights must be positive and sum to 1, got total {total}"
            )));
        }
        Ok(MixtureDensity { components })
    }

    pub fn components(&self) -> &[(f64, NormalDensity)] {
        &self.components
    }
}

impl Density1d for MixtureDensity {
    fn value(&self, x: f64) -> f64 {
        self.components.iter().map(|(w, c)| w * c.value(x)).sum()
    }

    fn derivative(&self, x: f64, n: usize) -> Result<f64> {
        let mut acc = 0.0;
        for (w, c) in &self.components {
            acc += w * c.derivative(x, n)?;
        }
        Ok(acc)
    }

    fn laplace(&self, theta: Complex64) -> Option<Complex64> {
        let mut acc = Complex64::ZERO;
        for (w, c) in &self.components {
            acc += c.laplace(theta)? * *w;
        }
        Some(acc)
    }

    fn label(&self) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(w, c)| format!("{w}*{}", c.label()))
            .collect();
        format!("mixture({})", parts.join("+"))
    }
}

/// Tabulated density with linear interpolation between grid points. Only
/// low-order derivatives are available (finite differences on the grid
/// scale), so oracle paths requiring `ρ^{(n)}` should prefer analytic
/// densities.
#[derive(Clone, Debug)]
pub struct GridDensity {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl GridDensity {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidParameter(
                "grid density needs matching xs/ys with at least two points".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "grid density abscissae must be strictly increasing".into(),
            ));
        }
        if ys.iter().any(|y| *y < 0.0 || !y.is_finite()) {
            return Err(Error::InvalidParameter(
                "grid density values must be finite and nonnegative".into(),
            ));
        }
        Ok(GridDensity { xs, ys })
    }
}

impl Density1d for GridDensity {
    fn value(&self, x: f64) -> f64 {
        if x <= self.xs[0] || x >= *self.xs.last().unwrap() {
            return 0.0;
        }
        let j = self.xs.partition_point(|&t| t <= x) - 1;
        let (x0, x1) = (self.xs[j], self.xs[j + 1]);
        let t = (x - x0) / (x1 - x0);
        self.ys[j] * (1.0 - t) + self.ys[j + 1] * t
    }

    fn derivative(&self, x: f64, n: usize) -> Result<f64> {
        match n {
            0 => Ok(self.value(x)),
            1 | 2 => {
                // centered differences at roughly the grid scale
                let h = (self.xs[1] - self.xs[0]).max(1e-6);
                if n == 1 {
                    Ok((self.value(x + h) - self.value(x - h)) / (2.0 * h))
                } else {
                    Ok((self.value(x + h) - 2.0 * self.value(x) + self.value(x - h)) / (h * h))
                }
            }
            _ => Err(Error::DensityDerivative(n)),
        }
    }

    fn label(&self) -> String {
        format!("grid({} points)", self.xs.len())
    }
}

// ---------------------------------------------------------------------------
// quadrature
// ---------------------------------------------------------------------------

/// Quadrature scheme tags. Every scheme realizes `∫ f dμ ≈ Σ_j w_j f(x_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadScheme {
    /// Gauss–Hermite rule mapped to the standard normal weight.
    GaussHermite,
    /// Trapezoid rule over the support, weighted by the density.
    TrapezoidGrid,
    /// Exhaustive pmf summation for lattice measures.
    PmfSum,
}

/// Scheme plus node count. `GaussHermite` with `m` nodes integrates
/// polynomials up to degree `2m − 1` exactly; the defaults leave wide
/// margins over every degree the suites touch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub scheme: QuadScheme,
    pub nodes: usize,
}

impl QuadratureSpec {
    pub fn gauss_hermite(nodes: usize) -> Self {
        QuadratureSpec {
            scheme: QuadScheme::GaussHermite,
            nodes,
        }
    }

    pub fn trapezoid(nodes: usize) -> Self {
        QuadratureSpec {
            scheme: QuadScheme::TrapezoidGrid,
            nodes,
        }
    }

    pub fn pmf_sum(nodes: usize) -> Self {
        QuadratureSpec {
            scheme: QuadScheme::PmfSum,
            nodes,
        }
    }
}

/// Nodes and weights of the `m`-point Gauss rule for the standard normal
/// measure: `Σ w_j f(x_j) ≈ ∫ f dN(0,1)`, exact for polynomials of degree
/// `≤ 2m − 1`. Roots of the orthonormal Hermite polynomial by Newton from
/// the classical initial guesses; weights are Christoffel numbers.
pub fn gauss_hermite_nodes(m: usize) -> Result<Vec<(f64, f64)>> {
    if m == 0 || m > 256 {
        return Err(Error::InvalidParameter(format!(
            "gauss-hermite node count must be in 1..=256, got {m}"
        )));
    }
    // orthonormal probabilists' Hermite: p_{k+1} = (x p_k − √k p_{k−1})/√(k+1)
    let eval = |x: f64| -> (f64, f64) {
        let (mut prev, mut cur) = (0.0f64, 1.0f64);
        for k in 0..m {
            let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
            prev = cur;
            cur = next;
        }
        // p_m and p_m' = √m p_{m−1}
        (cur, (m as f64).sqrt() * prev)
    };
    let christoffel = |x: f64| -> f64 {
        let (mut prev, mut cur) = (0.0f64, 1.0f64);
        let mut sum = cur * cur;
        for k in 0..m - 1 {
            let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
            prev = cur;
            cur = next;
            sum += cur * cur;
        }
        1.0 / sum
    };

    // Refine the positive roots from the outside in; each initial guess is
    // extrapolated from the two previously *refined* roots (the classical
    // Gauss–Hermite bootstrap), which keeps Newton inside its own basin.
    let mut roots: Vec<f64> = Vec::with_capacity(m / 2);
    let nf = m as f64;
    let sqrt2 = std::f64::consts::SQRT_2;
    for i in 0..m / 2 {
        let mut x = match i {
            0 => {
                let z = (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0);
                sqrt2 * z
            }
            1 => roots[0] - 2.0 * 1.14 * nf.powf(0.426) / roots[0],
            2 => 1.86 * roots[1] - 0.86 * roots[0],
            3 => 1.91 * roots[2] - 0.91 * roots[1],
            _ => 2.0 * roots[i - 1] - roots[i - 2],
        };
        for _ in 0..100 {
            let (p, dp) = eval(x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        roots.push(x);
    }
    let mut nodes = Vec::with_capacity(m);
    if m % 2 == 1 {
        nodes.push((0.0, christoffel(0.0)));
    }
    for &r in &roots {
        let w = christoffel(r);
        nodes.push((r, w));
        nodes.push((-r, w));
    }
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(nodes)
}

fn trapezoid_nodes(support: (f64, f64), m: usize, density: &dyn Density1d) -> Result<Vec<(f64, f64)>> {
    if m < 2 {
        return Err(Error::InvalidParameter(
            "trapezoid rule needs at least 2 nodes".into(),
        ));
    }
    let (a, b) = support;
    if !(b > a) {
        return Err(Error::InvalidParameter(format!(
            "support must satisfy a < b, got [{a}, {b}]"
        )));
    }
    let h = (b - a) / (m - 1) as f64;
    Ok((0..m)
        .map(|j| {
            let x = a + h * j as f64;
            let end = j == 0 || j == m - 1;
            let w = if end { 0.5 * h } else { h } * density.value(x);
            (x, w)
        })
        .collect())
}

fn poisson_pmf_nodes(lambda: f64, k_max: usize) -> Vec<(f64, f64)> {
    let mut nodes = Vec::with_capacity(k_max + 1);
    let mut p = (-lambda).exp();
    nodes.push((0.0, p));
    for k in 1..=k_max {
        p *= lambda / k as f64;
        nodes.push((k as f64, p));
    }
    nodes
}

/// Default pmf cutoff: `max(60, λ + 20 √λ)` keeps the discarded tail far
/// below every oracle tolerance for the intensities the suites use.
pub fn poisson_default_kmax(lambda: f64) -> usize {
    60usize.max((lambda + 20.0 * lambda.sqrt()).ceil() as usize)
}

// ---------------------------------------------------------------------------
// measure model
// ---------------------------------------------------------------------------

/// Kind tag of a measure model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    Gaussian,
    Poisson1d,
    Density1d,
    Product,
    Custom,
}

/// Result of a truncated Laplace evaluation: the moment partial sum and,
/// for kinds that have one, the closed-form value.
#[derive(Clone, Copy, Debug)]
pub struct LaplaceEval {
    pub series: Complex64,
    pub closed: Option<Complex64>,
}

/// A measure with analytic Laplace transform, truncated to its first
/// `n_max` moment kernels.
#[derive(Clone)]
pub struct MeasureModel {
    kind: MeasureKind,
    id: String,
    dim: usize,
    moments: Vec<SymKernel>,
    lambda_poisson: Option<f64>,
    density: Option<Arc<dyn Density1d>>,
    support: Option<(f64, f64)>,
    quadrature: Option<QuadratureSpec>,
    marginals: Vec<MeasureModel>,
}

impl fmt::Debug for MeasureModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasureModel")
            .field("id", &self.id)
            .field("dim", &self.dim)
            .field("n_max", &(self.moments.len() - 1))
            .field("quadrature", &self.quadrature)
            .finish()
    }
}

impl MeasureModel {
    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    /// Identity string used for mismatch checks between kernel sequences
    /// and the systems they were built against.
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest stored moment degree.
    pub fn n_max(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn moments(&self) -> &[SymKernel] {
        &self.moments
    }

    pub fn moment(&self, n: usize) -> Result<&SymKernel> {
        self.moments.get(n).ok_or(Error::MissingMoments {
            available: self.n_max(),
            needed: n,
        })
    }

    pub fn density(&self) -> Option<&Arc<dyn Density1d>> {
        self.density.as_ref()
    }

    pub fn poisson_intensity(&self) -> Option<f64> {
        self.lambda_poisson
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    pub fn quadrature(&self) -> Option<QuadratureSpec> {
        self.quadrature
    }

    /// Closed-form Laplace transform at `θ`, when the kind carries one.
    pub fn closed_laplace(&self, theta: &[Complex64]) -> Option<Complex64> {
        if theta.len() != self.dim {
            return None;
        }
        match self.kind {
            MeasureKind::Gaussian => {
                let s: Complex64 = theta.iter().map(|t| t * t).sum();
                Some((0.5 * s).exp())
            }
            MeasureKind::Poisson1d => {
                let lambda = self.lambda_poisson?;
                Some(((theta[0].exp() - 1.0) * lambda).exp())
            }
            MeasureKind::Density1d => self.density.as_ref()?.laplace(theta[0]),
            MeasureKind::Product => {
                let mut acc = Complex64::ONE;
                for (m, t) in self.marginals.iter().zip(theta) {
                    acc *= m.closed_laplace(std::slice::from_ref(t))?;
                }
                Some(acc)
            }
            MeasureKind::Custom => None,
        }
    }

    /// Truncated Laplace transform `Σ_{n≤N} ⟨M_n, θ^⊗n⟩ / n!`, together with
    /// the closed form for tagged kinds.
    pub fn laplace_eval(&self, theta: &[Complex64], trunc: usize) -> Result<LaplaceEval> {
        if trunc > self.n_max() {
            return Err(Error::MissingMoments {
                available: self.n_max(),
                needed: trunc,
            });
        }
        let mut series = Complex64::ZERO;
        for n in 0..=trunc {
            series += self.moments[n].apply_to_point(theta)? / factorial(n);
        }
        Ok(LaplaceEval {
            series,
            closed: self.closed_laplace(theta),
        })
    }

    /// Quadrature nodes `(x_j, w_j)` realizing `∫ f dμ ≈ Σ_j w_j f(x_j)`.
    /// For product measures this is the cartesian product of the marginal
    /// rules.
    pub fn quadrature_nodes(&self) -> Result<Vec<(Vec<f64>, f64)>> {
        match self.kind {
            MeasureKind::Product => {
                let mut nodes: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
                for m in &self.marginals {
                    let axis = m.quadrature_nodes()?;
                    let mut next = Vec::with_capacity(nodes.len() * axis.len());
                    for (xs, w) in &nodes {
                        for (ax, aw) in &axis {
                            let mut xs = xs.clone();
                            xs.push(ax[0]);
                            next.push((xs, w * aw));
                        }
                    }
                    nodes = next;
                }
                Ok(nodes)
            }
            _ => {
                let spec = self
                    .quadrature
                    .ok_or_else(|| Error::MissingQuadrature(self.id.clone()))?;
                match spec.scheme {
                    QuadScheme::GaussHermite => {
                        let axis = gauss_hermite_nodes(spec.nodes)?;
                        if self.dim == 1 {
                            Ok(axis.iter().map(|&(x, w)| (vec![x], w)).collect())
                        } else {
                            let mut nodes: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
                            for _ in 0..self.dim {
                                let mut next = Vec::with_capacity(nodes.len() * axis.len());
                                for (xs, w) in &nodes {
                                    for &(ax, aw) in &axis {
                                        let mut xs = xs.clone();
                                        xs.push(ax);
                                        next.push((xs, w * aw));
                                    }
                                }
                                nodes = next;
                            }
                            Ok(nodes)
                        }
                    }
                    QuadScheme::TrapezoidGrid => {
                        let density = self
                            .density
                            .as_ref()
                            .ok_or_else(|| Error::MissingQuadrature(self.id.clone()))?;
                        let support = self.support.ok_or_else(|| {
                            Error::InvalidParameter("trapezoid rule needs a support".into())
                        })?;
                        Ok(trapezoid_nodes(support, spec.nodes, density.as_ref())?
                            .into_iter()
                            .map(|(x, w)| (vec![x], w))
                            .collect())
                    }
                    QuadScheme::PmfSum => {
                        let lambda = self.lambda_poisson.ok_or_else(|| {
                            Error::InvalidParameter("pmf-sum rule needs an intensity".into())
                        })?;
                        Ok(poisson_pmf_nodes(lambda, spec.nodes)
                            .into_iter()
                            .map(|(x, w)| (vec![x], w))
                            .collect())
                    }
                }
            }
        }
    }

    /// `∫ f dμ` by the attached quadrature rule — the independent oracle
    /// every coefficient-level identity is checked against.
    pub fn integrate(&self, f: &mut dyn FnMut(&[f64]) -> Complex64) -> Result<Complex64> {
        let nodes = self.quadrature_nodes()?;
        Ok(nodes.iter().map(|(x, w)| f(x) * *w).sum())
    }

    /// Growth diagnostics of the moment sequence against `n! C^n |θ|_p^n`:
    /// for each level `p` the smallest admissible constant
    /// `C_p = max_n max_θ (|⟨M_n,θ^⊗n⟩|/n!)^{1/n} / |θ|_p` over the probe
    /// directions, with the per-`n` ratio trail. A super-factorial flag is
    /// raised when the ratio trail is still climbing at the truncation edge
    /// (heuristic — a bounded trail is evidence for analyticity, not proof).
    pub fn analyticity_check(
        &self,
        w: &WeightModel,
        levels: &[i32],
        directions: &[Vec<Complex64>],
        trunc: usize,
    ) -> Result<AnalyticityReport> {
        if trunc > self.n_max() {
            return Err(Error::MissingMoments {
                available: self.n_max(),
                needed: trunc,
            });
        }
        if directions.is_empty() || trunc == 0 {
            return Err(Error::InvalidParameter(
                "analyticity check needs at least one direction and degree".into(),
            ));
        }
        let mut out = Vec::with_capacity(levels.len());
        let mut flag = false;
        for &p in levels {
            let mut ratios = Vec::with_capacity(trunc);
            for n in 1..=trunc {
                let mut best: f64 = 0.0;
                for dir in directions {
                    let norm = w.vector_norm(dir, p)?;
                    if norm == 0.0 {
                        continue;
                    }
                    let val = self.moments[n].apply_to_point(dir)?.norm() / factorial(n);
                    best = best.max(val.powf(1.0 / n as f64) / norm);
                }
                ratios.push(best);
            }
            let constant = ratios.iter().copied().fold(0.0, f64::max);
            // climbing tail: the last few ratios strictly increase and end
            // noticeably above the mid-sequence level
            if trunc >= 6 {
                let tail = &ratios[ratios.len() - 3..];
                let climbing = tail.windows(2).all(|w| w[1] > w[0]);
                let mid = ratios[ratios.len() / 2];
                if climbing && mid > 0.0 && tail[2] > 1.25 * mid {
                    flag = true;
                }
            }
            out.push(AnalyticityLevel { p, constant, ratios });
        }
        Ok(AnalyticityReport {
            levels: out,
            super_factorial: flag,
        })
    }
}

/// Per-level outcome of [`MeasureModel::analyticity_check`].
#[derive(Clone, Debug)]
pub struct AnalyticityLevel {
    pub p: i32,
    /// Smallest `C` with `|⟨M_n, θ^⊗n⟩| ≤ n! C^n |θ|_p^n` over the probes.
    pub constant: f64,
    /// The `n`-th entry is the best `n`-th-root ratio at degree `n ≥ 1`.
    pub ratios: Vec<f64>,
}

/// Outcome of [`MeasureModel::analyticity_check`].
#[derive(Clone, Debug)]
pub struct AnalyticityReport {
    pub levels: Vec<AnalyticityLevel>,
    pub super_factorial: bool,
}

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

fn check_nmax(n_max: usize) -> Result<()> {
    if n_max > crate::error::DEGREE_CAP {
        return Err(Error::DegreeCap(n_max));
    }
    Ok(())
}

/// 1D standard normal raw moments: `0` for odd `n`, `(n−1)!!` for even `n`.
fn gaussian_scalar_moment(n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let mut acc = 1.0;
    let mut k = n as i64 - 1;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

fn product_moment_kernels(marginal_moments: &[Vec<f64>], n_max: usize) -> Result<Vec<SymKernel>> {
    let d = marginal_moments.len();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        out.push(SymKernel::from_fn(d, n, |alpha: &MultiIndex| {
            let v: f64 = alpha
                .exps()
                .iter()
                .enumerate()
                .map(|(i, &e)| marginal_moments[i][e as usize])
                .product();
            Complex64::new(v, 0.0)
        })?);
    }
    Ok(out)
}

/// Standard Gaussian product measure on `ℝ^d` with moments through `n_max`
/// and a Gauss–Hermite rule (64 nodes per axis) attached.
pub fn gaussian_measure(d: usize, n_max: usize) -> Result<MeasureModel> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    check_nmax(n_max)?;
    let marginal: Vec<f64> = (0..=n_max).map(gaussian_scalar_moment).collect();
    let moments = product_moment_kernels(&vec![marginal; d], n_max)?;
    Ok(MeasureModel {
        kind: MeasureKind::Gaussian,
        id: format!("gaussian(d={d})"),
        dim: d,
        moments,
        lambda_poisson: None,
        density: None,
        support: None,
        quadrature: Some(QuadratureSpec::gauss_hermite(64)),
        marginals: Vec::new(),
    })
}

/// 1D Poisson measure with intensity `λ`. Scalar moments are the Touchard
/// values `T_n(λ) = Σ_k S(n,k) λ^k`, generated by the recurrence
/// `T_{n+1} = λ Σ_k C(n,k) T_k`; the pmf-sum quadrature keeps every check
/// independent of that recurrence.
pub fn poisson_measure_1d(lambda: f64, n_max: usize) -> Result<MeasureModel> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "poisson intensity must be positive, got {lambda}"
        )));
    }
    check_nmax(n_max)?;
    let mut touchard = vec![1.0f64];
    for n in 0..n_max {
        let next: f64 = lambda
            * (0..=n)
                .map(|k| crate::comb::binomial(n, k) * touchard[k])
                .sum::<f64>();
        touchard.push(next);
    }
    let moments = product_moment_kernels(&[touchard], n_max)?;
    Ok(MeasureModel {
        kind: MeasureKind::Poisson1d,
        id: format!("poisson1d(lambda={lambda})"),
        dim: 1,
        moments,
        lambda_poisson: Some(lambda),
        density: None,
        support: None,
        quadrature: Some(QuadratureSpec::pmf_sum(poisson_default_kmax(lambda))),
        marginals: Vec::new(),
    })
}

/// 1D measure given by a density on a finite support. The density must be
/// normalized on the support within [`DENSITY_NORMALIZATION_TOL`] (checked
/// with the supplied rule); moments are computed by the same rule.
pub fn density_measure_1d(
    density: Arc<dyn Density1d>,
    support: (f64, f64),
    quadrature: QuadratureSpec,
    n_max: usize,
) -> Result<MeasureModel> {
    check_nmax(n_max)?;
    if quadrature.scheme != QuadScheme::TrapezoidGrid {
        return Err(Error::InvalidParameter(
            "density measures use the trapezoid-grid scheme".into(),
        ));
    }
    let nodes = trapezoid_nodes(support, quadrature.nodes, density.as_ref())?;
    let total: f64 = nodes.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > DENSITY_NORMALIZATION_TOL {
        return Err(Error::DensityNotNormalized {
            integral: total,
            tol: DENSITY_NORMALIZATION_TOL,
        });
    }
    let mut scalar = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        scalar.push(nodes.iter().map(|&(x, w)| w * x.powi(n as i32)).sum::<f64>());
    }
    let moments = product_moment_kernels(&[scalar], n_max)?;
    Ok(MeasureModel {
        kind: MeasureKind::Density1d,
        id: format!("density1d({})", density.label()),
        dim: 1,
        moments,
        lambda_poisson: None,
        density: Some(density),
        support: Some(support),
        quadrature: Some(quadrature),
        marginals: Vec::new(),
    })
}

/// Product of 1D measure models. Moment kernels are assembled from the
/// marginal scalar moments (`T_α = Π_i m^{(i)}_{α_i}`), which is the
/// coefficient form of multiplying the marginal Laplace series; quadrature
/// is the cartesian product of the marginal rules.
pub fn product_measure(marginals: Vec<MeasureModel>, n_max: usize) -> Result<MeasureModel> {
    if marginals.is_empty() {
        return Err(Error::InvalidParameter("empty product".into()));
    }
    if let Some(bad) = marginals.iter().find(|m| m.dim() != 1) {
        return Err(Error::InvalidParameter(format!(
            "product marginals must be 1D, got {} with d={}",
            bad.id(),
            bad.dim()
        )));
    }
    check_nmax(n_max)?;
    let mut scalars = Vec::with_capacity(marginals.len());
    for m in &marginals {
        if m.n_max() < n_max {
            return Err(Error::MissingMoments {
                available: m.n_max(),
                needed: n_max,
            });
        }
        scalars.push(
            (0..=n_max)
                .map(|n| m.moments()[n].coeffs()[0].re)
                .collect::<Vec<f64>>(),
        );
    }
    let moments = product_moment_kernels(&scalars, n_max)?;
    let id = format!(
        "product({})",
        marginals.iter().map(|m| m.id().to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(MeasureModel {
        kind: MeasureKind::Product,
        id,
        dim: marginals.len(),
        moments,
        lambda_poisson: None,
        density: None,
        support: None,
        quadrature: None,
        marginals,
    })
}

/// Measure defined directly by its moment kernels (kind `custom`). `moments`
/// must start with `M_0 = 1` and carry one kernel per degree.
pub fn custom_measure(label: &str, moments: Vec<SymKernel>) -> Result<MeasureModel> {
    if moments.is_empty() {
        return Err(Error::InvalidParameter("no moment kernels given".into()));
    }
    let d = moments[0].dim();
    for (n, m) in moments.iter().enumerate() {
        if m.dim() != d {
            return Err(Error::DimensionMismatch {
                left: m.dim(),
                right: d,
            });
        }
        if m.degree() != n {
            return Err(Error::DegreeMismatch {
                left: m.degree(),
                right: n,
            });
        }
    }
    if (moments[0].coeffs()[0] - Complex64::ONE).norm() > 1e-14 {
        return Err(Error::InvalidParameter("M_0 must equal 1".into()));
    }
    check_nmax(moments.len() - 1)?;
    Ok(MeasureModel {
        kind: MeasureKind::Custom,
        id: format!("custom({label})"),
        dim: d,
        moments,
        lambda_poisson: None,
        density: None,
        support: None,
        quadrature: None,
        marginals: Vec::new(),
    })
}

/// The trace kernel `Tr` over `d` dimensions: `T_{2e_i} = 1`, other entries
/// zero. `⟨Tr, θ ⊗ θ⟩ = Σ θ_i²`.
pub fn trace_kernel(d: usize) -> Result<SymKernel> {
    let mut k = SymKernel::zero(d, 2)?;
    for i in 0..d {
        let mut exps = vec![0u32; d];
        exps[i] = 2;
        k.set(&MultiIndex::new(exps), Complex64::ONE)?;
    }
    Ok(k)
}
