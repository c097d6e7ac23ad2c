//! Exact integer combinatorics, converted to `f64` at the last moment.
//!
//! Degrees are capped at [`DEGREE_CAP`](crate::error::DEGREE_CAP) = 32, so
//! every factorial, binomial, and multinomial below is an exact `u128`
//! before conversion. (Beyond 2^53 the conversion itself rounds, which is
//! the same rounding any downstream `f64` arithmetic would introduce.)

pub(crate) fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// n! as a float. Exact for n <= 18, correctly rounded beyond.
pub(crate) fn factorial(n: usize) -> f64 {
    factorial_u128(n) as f64
}

pub(crate) fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// C(n, k) as a float.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    binomial_u128(n, k) as f64
}

/// Trinomial n! / (k! l! m!) with k + l + m = n.
pub(crate) fn trinomial(n: usize, k: usize, l: usize, m: usize) -> f64 {
    debug_assert_eq!(k + l + m, n);
    (binomial_u128(n, k) * binomial_u128(n - k, l)) as f64
}
