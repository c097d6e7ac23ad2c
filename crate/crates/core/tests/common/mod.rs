//! Shared oracle code for the integration suites.
//!
//! Everything here recomputes results along an independent path: dense
//! full-tensor arithmetic instead of the multi-index table, classical
//! scalar recurrences instead of kernel recursions, plain power-series
//! arithmetic instead of sequence algebra. None of it calls into the
//! operations under test.

#![allow(dead_code)]

use appell_core::{Complex64, MultiIndex, SymKernel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

// ---------------------------------------------------------------------------
// dense full tensors: d^n coefficient arrays indexed by raw index tuples

#[derive(Clone, Debug)]
pub struct DenseTensor {
    pub dim: usize,
    pub degree: usize,
    /// Row-major over index tuples `(i_1, …, i_n)`, each `i_k < dim`.
    pub data: Vec<Complex64>,
}

/// All index tuples of the given shape, row-major.
pub fn tuples(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(dim.pow(degree as u32));
    let mut t = vec![0usize; degree];
    loop {
        out.push(t.clone());
        let mut pos = degree;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            t[pos] += 1;
            if t[pos] < dim {
                break;
            }
            t[pos] = 0;
        }
    }
}

fn flat(dim: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * dim + i)
}

fn type_of(dim: usize, tuple: &[usize]) -> MultiIndex {
    let mut exps = vec![0u32; dim];
    for &i in tuple {
        exps[i] += 1;
    }
    MultiIndex::new(exps)
}

impl DenseTensor {
    pub fn zeros(dim: usize, degree: usize) -> Self {
        DenseTensor {
            dim,
            degree,
            data: vec![Complex64::ZERO; dim.pow(degree as u32)],
        }
    }

    /// Expand a symmetric kernel into its full tensor: the value on every
    /// tuple of a type is that type's table entry.
    pub fn from_kernel(k: &SymKernel) -> Self {
        let mut out = Self::zeros(k.dim(), k.degree());
        for (slot, tuple) in tuples(k.dim(), k.degree()).iter().enumerate() {
            out.data[slot] = k.get(&type_of(k.dim(), tuple)).unwrap();
        }
        out
    }

    /// Read a (symmetric) dense tensor back into table form using one
    /// representative tuple per type.
    pub fn to_kernel(&self) -> SymKernel {
        SymKernel::from_fn(self.dim, self.degree, |alpha| {
            let mut rep = Vec::with_capacity(self.degree);
            for (i, &e) in alpha.exps().iter().enumerate() {
                rep.extend(std::iter::repeat(i).take(e as usize));
            }
            self.data[flat(self.dim, &rep)]
        })
        .unwrap()
    }

    /// Raw (non-symmetrized) tensor product.
    pub fn product(&self, other: &DenseTensor) -> DenseTensor {
        assert_eq!(self.dim, other.dim);
        let mut out = DenseTensor::zeros(self.dim, self.degree + other.degree);
        for (i, a) in self.data.iter().enumerate() {
            for (j, b) in other.data.iter().enumerate() {
                out.data[i * other.data.len() + j] = a * b;
            }
        }
        out
    }

    /// Symmetrization: average over all permutations of the index
    /// positions, computed per index type (every tuple of a type receives
    /// the mean of the tensor over that type's tuples).
    pub fn symmetrized(&self) -> DenseTensor {
        let ts = tuples(self.dim, self.degree);
        let mut sums: std::collections::HashMap<Vec<u32>, (Complex64, f64)> =
            std::collections::HashMap::new();
        for (slot, tuple) in ts.iter().enumerate() {
            let ty = type_of(self.dim, tuple);
            let entry = sums.entry(ty.exps().to_vec()).or_insert((Complex64::ZERO, 0.0));
            entry.0 += self.data[slot];
            entry.1 += 1.0;
        }
        let mut out = DenseTensor::zeros(self.dim, self.degree);
        for (slot, tuple) in ts.iter().enumerate() {
            let ty = type_of(self.dim, tuple);
            let (sum, count) = sums[ty.exps()];
            out.data[slot] = sum / count;
        }
        out
    }

    /// Full bilinear pairing: `Σ_t a[t] b[t]` over all tuples.
    pub fn pairing(&self, other: &DenseTensor) -> Complex64 {
        assert_eq!(self.data.len(), other.data.len());
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Evaluate against a point: `Σ_t a[t] Π_k z_{t_k}`.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (slot, tuple) in tuples(self.dim, self.degree).iter().enumerate() {
            let mut prod = Complex64::ONE;
            for &i in tuple {
                prod *= z[i];
            }
            acc += self.data[slot] * prod;
        }
        acc
    }

    /// Partial pairing of `probe` (lower degree) into the leading slots:
    /// `r[t] = Σ_s probe[s] self[s ++ t]`.
    pub fn contract_with(&self, probe: &DenseTensor) -> DenseTensor {
        assert!(probe.degree <= self.degree);
        let out_degree = self.degree - probe.degree;
        let mut out = DenseTensor::zeros(self.dim, out_degree);
        let tail_len = self.dim.pow(out_degree as u32);
        for (i, p) in probe.data.iter().enumerate() {
            for j in 0..tail_len {
                out.data[j] += p * self.data[i * tail_len + j];
            }
        }
        out
    }

    /// Weighted Hilbert–Schmidt norm at level `p`:
    /// `(Σ_t |a[t]|² Π_k λ_{t_k}^{2p})^{1/2}`.
    pub fn weighted_norm(&self, lambda: &[f64], p: i32) -> f64 {
        let mut acc = 0.0;
        for (slot, tuple) in tuples(self.dim, self.degree).iter().enumerate() {
            let mut w = 1.0;
            for &i in tuple {
                w *= lambda[i].powi(2 * p);
            }
            acc += self.data[slot].norm_sqr() * w;
        }
        acc.sqrt()
    }

    pub fn max_abs_diff(&self, other: &DenseTensor) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// scalar power series in one variable

/// Truncated product, keeping `a.len()` coefficients.
pub fn ps_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        for j in 0..(n - i).min(b.len()) {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// Reciprocal of a series with nonzero constant term.
pub fn ps_recip(a: &[f64], n: usize) -> Vec<f64> {
    assert!(a[0] != 0.0);
    let mut out = vec![0.0; n + 1];
    out[0] = 1.0 / a[0];
    for k in 1..=n {
        let mut acc = 0.0;
        for j in 1..=k.min(a.len() - 1) {
            acc += a[j] * out[k - j];
        }
        out[k] = -acc / a[0];
    }
    out
}

// ---------------------------------------------------------------------------
// classical polynomial families

/// Physicists' Hermite polynomials `H_n` via
/// `H_{n+1} = 2x H_n − 2n H_{n−1}`.
pub fn hermite_phys(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Monic Charlier polynomials via
/// `C_{n+1}(x) = (x − n − λ) C_n(x) − nλ C_{n−1}(x)`.
pub fn charlier(n: usize, lambda: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x - lambda);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = (x - k as f64 - lambda) * cur - k as f64 * lambda * prev;
        prev = cur;
        cur = next;
    }
    cur
}

// ---------------------------------------------------------------------------
// randomized inputs

pub fn random_kernel(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> SymKernel {
    SymKernel::from_fn(dim, degree, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
    .unwrap()
}

pub fn random_real_kernel(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> SymKernel {
    SymKernel::from_fn(dim, degree, |_| c(rng.gen_range(-1.0..1.0))).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<Complex64> {
    (0..dim).map(|_| c(rng.gen_range(-radius..radius))).collect()
}
