//! Shared fixtures for the criterion benchmarks: deterministic kernels and
//! prebuilt systems, so the benches measure the algebra rather than setup.

use appell_core::appell::{build_appell, AppellSystem};
use appell_core::calculus::{Basis, KernelSequence};
use appell_core::measure::gaussian_measure;
use appell_core::{Complex64, SymKernel};

/// Dense degree-`n` kernel with reproducible, non-trivial entries.
pub fn sample_kernel(dim: usize, degree: usize) -> SymKernel {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    SymKernel::from_fn(dim, degree, |_| {
        // xorshift keeps the fixture free of RNG crate dependencies
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let unit = (state >> 11) as f64 / (1u64 << 53) as f64;
        Complex64::new(2.0 * unit - 1.0, 0.0)
    })
    .expect("valid fixture dimensions")
}

/// Q-basis sequence with `1/n!`-scaled random slots through `n_max`.
pub fn sample_sequence(dim: usize, n_max: usize) -> KernelSequence {
    let mut fact = 1.0;
    let kernels = (0..=n_max)
        .map(|n| {
            if n > 0 {
                fact *= n as f64;
            }
            sample_kernel(dim, n).scale(Complex64::new(1.0 / fact, 0.0))
        })
        .collect();
    KernelSequence::new(Basis::Q, dim, kernels, None).expect("valid fixture sequence")
}

pub fn gaussian_system(dim: usize, n_max: usize) -> AppellSystem {
    let mu = gaussian_measure(dim, n_max).expect("gaussian measure");
    build_appell(&mu, n_max).expect("appell system")
}
