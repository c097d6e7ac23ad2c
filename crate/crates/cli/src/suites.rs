//! The verification suites behind `appell run`. Each suite produces a flat
//! list of cases with residuals against pinned tolerance classes:
//! coefficient identities 1e−12, randomized polynomial identities 1e−11,
//! quadrature oracles 1e−7, series against closed forms 1e−8.

use anyhow::{anyhow, bail, Result};
use appell_core::appell::build_appell;
use appell_core::calculus::{
    dist_norm, e_norm, eval_monomial, eval_test, pair, pair_oracle, reorder_monomial_to_p,
    reorder_p_to_monomial, test_norm, Basis, KernelSequence,
};
use appell_core::measure::{MeasureKind, MeasureModel};
use appell_core::remeasure::{p_cross_residual, retarget_dist, retarget_test};
use appell_core::transforms::{delta, l_transform, radon_nikodym, s_domain_advisory, s_transform};
use appell_core::wick::{
    wick_inverse, wick_norm_check, wick_product, wick_product_capped, wick_unit,
};
use appell_core::{Complex64, SymKernel, WeightModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::report::CaseResult;

pub const SUITE_NAMES: &[&str] = &[
    "appell-identities",
    "biorthogonality",
    "transforms",
    "wick",
    "remeasure",
    "norms",
    "charlier",
];

const TOL_COEFF: f64 = 1e-12;
const TOL_IDENTITY: f64 = 1e-11;
const TOL_MEAN_ZERO: f64 = 1e-9;
const TOL_QUAD: f64 = 1e-7;
const TOL_SERIES: f64 = 1e-8;
const TOL_INVARIANCE: f64 = 1e-9;
const TOL_LAPLACE_SUM: f64 = 1e-6;

pub struct SuiteContext<'a> {
    pub config: &'a Config,
    pub seed: u64,
}

impl SuiteContext<'_> {
    /// One independent, reproducible stream per suite.
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

pub fn run_suite(name: &str, ctx: &SuiteContext) -> Result<Vec<CaseResult>> {
    match name {
        "appell-identities" => suite_appell_identities(ctx),
        "biorthogonality" => suite_biorthogonality(ctx),
        "transforms" => suite_transforms(ctx),
        "wick" => suite_wick(ctx),
        "remeasure" => suite_remeasure(ctx),
        "norms" => suite_norms(ctx),
        "charlier" => suite_charlier(ctx),
        other => bail!("unknown suite {other:?} (expected one of {SUITE_NAMES:?})"),
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    fact(n) / (fact(k) * fact(n - k))
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<Complex64> {
    (0..dim).map(|_| c(rng.gen_range(-radius..radius))).collect()
}

/// Random P-sequence with 1/n!-scaled slots (a genuine test function, so
/// triangular changes of basis stay well conditioned).
fn random_test_fn(
    rng: &mut ChaCha8Rng,
    dim: usize,
    n_max: usize,
    id: Option<&str>,
) -> Result<KernelSequence> {
    let kernels = (0..=n_max)
        .map(|n| {
            let s = 1.0 / fact(n);
            SymKernel::from_fn(dim, n, |_| c(rng.gen_range(-1.0..1.0) * s))
        })
        .collect::<appell_core::Result<Vec<_>>>()?;
    Ok(KernelSequence::new(
        Basis::P,
        dim,
        kernels,
        id.map(String::from),
    )?)
}

fn random_dist(
    rng: &mut ChaCha8Rng,
    dim: usize,
    n_max: usize,
    id: Option<&str>,
    amp: f64,
) -> Result<KernelSequence> {
    let kernels = (0..=n_max)
        .map(|n| SymKernel::from_fn(dim, n, |_| c(rng.gen_range(-amp..amp))))
        .collect::<appell_core::Result<Vec<_>>>()?;
    Ok(KernelSequence::new(
        Basis::Q,
        dim,
        kernels,
        id.map(String::from),
    )?)
}

/// Random Q-sequence with 1/n!-decaying slots, the conditioning class under
/// which coefficient identities that mix moment tables stay at machine
/// precision.
fn random_decaying_dist(
    rng: &mut ChaCha8Rng,
    dim: usize,
    n_max: usize,
    id: Option<&str>,
) -> Result<KernelSequence> {
    let kernels = (0..=n_max)
        .map(|n| {
            let s = 1.0 / fact(n);
            SymKernel::from_fn(dim, n, |_| c(rng.gen_range(-1.0..1.0) * s))
        })
        .collect::<appell_core::Result<Vec<_>>>()?;
    Ok(KernelSequence::new(
        Basis::Q,
        dim,
        kernels,
        id.map(String::from),
    )?)
}

/// True when the pairing oracle can realize Q-kernels against this measure
/// (one-dimensional with a density on file).
fn has_density_oracle(mu: &MeasureModel) -> bool {
    mu.dim() == 1
        && matches!(
            mu.kind(),
            MeasureKind::Gaussian | MeasureKind::Density1d { .. }
        )
}

// ---------------------------------------------------------------------------

fn suite_appell_identities(ctx: &SuiteContext) -> Result<Vec<CaseResult>> {
    let mut rng = ctx.rng(1);
    let n_sys = ctx.config.truncation;
    let n_draw_max = n_sys.min(8);
    let mut cases = Vec::new();
    for (name, mu) in ctx.config.build_measures(n_sys)? {
        let sys = build_appell(&mu, n_sys)?;
        let d = mu.dim();
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.config.draws {
            let n = rng.gen_range(0..=n_draw_max);
            let x = random_point(&mut rng, d, 1.0);
            let y = random_point(&mut rng, d, 1.0);
            let theta = random_point(&mut rng, d, 1.0);

            // binomial collapse of P_n(x) evaluated on θ, against scalar
            // arithmetic on the same sum
            let lhs = sys.p_kernel(n, &x)?.apply_to_point(&theta)?;
            let ip: Complex64 = x.iter().zip(&theta).map(|(a, b)| a * b).sum();
            let mut rhs = Complex64::ZERO;
            for k in 0..=n {
                rhs += c(binom(n, k))
                    * ip.powu(k as u32)
                    * sys.b_kernel(n - k)?.apply_to_point(&theta)?;
            }
            worst = worst.max((lhs - rhs).norm());
            worst = worst.max(sys.check_monomial(n, &x)?);
            worst = worst.max(sys.check_addition(n, &x, &y)?);
        }
        cases.push(CaseResult::new(
            format!("{name}/identities"),
            worst,
            TOL_IDENTITY,
        ));

        let mut worst_mz: f64 = 0.0;
        for m in 1..=n_draw_max {
            let phi = SymKernel::from_fn(d, m, |_| c(rng.gen_range(-1.0..1.0)))?;
            let val = mu.integrate(&mut |pt: &[f64]| {
                let z: Vec<Complex64> = pt.iter().map(|&v| c(v)).collect();
                sys.p_kernel(m, &z).unwrap().pairing(&phi).unwrap()
            })?;
            worst_mz = worst_mz.max(val.norm());
        }
        cases.push(CaseResult::new(
            format!("{name}/mean-zero"),
            worst_mz,
            TOL_MEAN_ZERO,
        ));
    }
    Ok(cases)
}

fn suite_biorthogonality(ctx: &SuiteContext) -> Result<Vec<CaseResult>> {
    let mut rng = ctx.rng(2);
    let deg = ctx.config.truncation.min(6);
    let mut cases = Vec::new();
    for (name, mu) in ctx.config.build_measures(deg)? {
        if mu.dim() != 1 {
            continue;
        }
        let sys = build_appell(&mu, deg)?;
        // coefficient level: pair is diagonal with constant n!
        let mut worst: f64 = 0.0;
        for n in 0..=deg {
            for m in 0..=deg {
                let phi = SymKernel::from_fn(1, n, |_| c(rng.gen_range(-1.0..1.0)))?;
                let psi = SymKernel::from_fn(1, m, |_| c(rng.gen_range(-1.0..1.0)))?;
                let got = pair(
                    &KernelSequence::from_kernel(Basis::Q, phi.clone(), None)?,
                    &KernelSequence::from_kernel(Basis::P, psi.clone(), None)?,
                )?;
                let want = if n == m {
                    c(fact(n)) * phi.pairing(&psi)?
                } else {
                    Complex64::ZERO
                };
                worst = worst.max((got - want).norm());
            }
        }
        cases.push(CaseResult::new(
            format!("{name}/coefficient"),
            worst,
            TOL_COEFF,
        ));

        // function level, only where a density realization exists
        if has_density_oracle(&mu) {
            let mut worst_q: f64 = 0.0;
            for n in 0..=deg {
                for m in 0..=deg {
                    let dist = KernelSequence::from_kernel(
                        Basis::Q,
                        SymKernel::from_fn(1, n, |_| c(rng.gen_range(-1.0..1.0)))?,
                        Some(mu.id().to_string()),
                    )?;
                    let test = KernelSequence::from_kernel(
                        Basis::P,
                        SymKernel::from_fn(1, m, |_| c(rng.gen_range(-1.0..1.0)))?,
                        Some(mu.id().to_string()),
                    )?;
                    let exact = pair(&dist, &test)?;
                    let oracle = pair_oracle(&sys, &dist, &test)?;
                    worst_q = worst_q.max((exact - oracle).norm());
                }
            }
            cases.push(CaseResult::new(
                format!("{name}/quadrature"),
                worst_q,
                TOL_QUAD,
            ));
        }
    }
    Ok(cases)
}

fn suite_transforms(ctx: &SuiteContext) -> Result<Vec<CaseResult>> {
    let mut rng = ctx.rng(3);
    let n_sys = ctx.config.truncation;
    let w = ctx.config.weight_model()?;
    let mut cases = Vec::new();
    for (name, mu) in ctx.config.build_measures(n_sys)? {
        let sys = build_appell(&mu, n_sys)?;
        let d = mu.dim();

        // pair(δ_z, φ) = φ(z), a coefficient identity
        let mut worst_delta: f64 = 0.0;
        for _ in 0..10 {
            let phi = random_test_fn(&mut rng, d, n_sys, Some(mu.id()))?;
            let z = random_point(&mut rng, d, 1.5);
            let dz = delta(&sys, &z)?;
            worst_delta =
                worst_delta.max((pair(&dz, &phi)? - eval_test(&sys, &phi, &z)?).norm());
        }
        cases.push(CaseResult::new(
            format!("{name}/delta-eval"),
            worst_delta,
            TOL_COEFF,
        ));

        // S(δ_0)·l_μ = 1 through the truncation degree, plus the domain
        // advisory for S as an informational note
        let d0 = delta(&sys, &vec![c(0.0); d])?;
        let mut worst_unity: f64 = 0.0;
        for n in 0..=n_sys {
            let mut conv = SymKernel::zero(d, n)?;
            for k in 0..=n {
                conv.add_assign(
                    &d0.kernel(k)
                        .sym_product(mu.moment(n - k)?)?
                        .scale(c(1.0 / fact(n - k))),
                )?;
            }
            let expect = if n == 0 { 1.0 } else { 0.0 };
            worst_unity = worst_unity.max((conv.max_abs() - expect).abs());
        }
        let theta_probe = vec![c(0.5); d];
        let adv = if w.dim() == d {
            let a = s_domain_advisory(&d0, &w, &theta_probe)?;
            format!(
                "S-domain advisory at (p,q)=({},{}): |θ|={:.3}, dist_norm={:.3e}, inside={}",
                a.p, a.q, a.theta_norm, a.dist_norm, a.inside
            )
        } else {
            "S-domain advisory skipped: weight dimension differs from measure".to_string()
        };
        cases.push(
            CaseResult::new(format!("{name}/unity"), worst_unity, TOL_COEFF).with_note(adv),
        );

        // Laplace transform of a low-degree test function against the
        // quadrature oracle ∫φ(x)e^{⟨θ,x⟩}dμ; needs a closed-form Laplace
        // anchor and a node table
        if mu.closed_laplace(&vec![c(0.0); d]).is_some() && mu.quadrature().is_some() && d == 1 {
            let deep = ctx.config.measures[&name].build(16)?;
            let sys_deep = build_appell(&deep, 4)?;
            let mut worst_l: f64 = 0.0;
            for _ in 0..5 {
                let phi = random_test_fn(&mut rng, 1, 2, Some(deep.id()))?;
                for t in [-0.3, -0.1, 0.2, 0.3] {
                    let got = l_transform(&sys_deep, &phi, &[c(t)])?;
                    let want = deep.integrate(&mut |pt: &[f64]| {
                        eval_test(&sys_deep, &phi, &[c(pt[0])]).unwrap() * c(t * pt[0]).exp()
                    })?;
                    worst_l = worst_l.max((got - want).norm());
                }
            }
            cases.push(CaseResult::new(
                format!("{name}/laplace-transform"),
                worst_l,
                TOL_QUAD,
            ));
        }

        // Radon–Nikodym pairing against the shift integral
        if mu.quadrature().is_some() && d == 1 {
            let mut worst_s: f64 = 0.0;
            for z in [-1.0, -0.4, 0.3, 1.0] {
                let phi = random_test_fn(&mut rng, 1, n_sys.min(6), Some(mu.id()))?;
                let rho = radon_nikodym(&[c(z)], phi.n_max())?;
                let lhs = pair(&rho, &phi)?;
                let oracle = mu.integrate(&mut |pt: &[f64]| {
                    eval_test(&sys, &phi, &[c(pt[0] - z)]).unwrap()
                })?;
                worst_s = worst_s.max((lhs - oracle).norm());
            }
            cases.push(CaseResult::new(format!("{name}/shift"), worst_s, TOL_QUAD));
        }

        // monomial ↔ P reordering round trip
        let mut worst_r: f64 = 0.0;
        for _ in 0..5 {
            let phi = random_test_fn(&mut rng, d, n_sys, Some(mu.id()))?;
            let back = reorder_monomial_to_p(&sys, &reorder_p_to_monomial(&sys, &phi)?)?;
            worst_r = worst_r.max(back.sub(&phi)?.max_abs());
            let x = random_point(&mut rng, d, 1.5);
            let via_mono =
                eval_monomial(&reorder_p_to_monomial(&sys, &phi)?, &x)?;
            worst_r = worst_r.max((eval_test(&sys, &phi, &x)? - via_mono).norm());
        }
        cases.push(CaseResult::new(
            format!("{name}/reorder"),
            worst_r,
            TOL_IDENTITY,
        ));
    }
    Ok(cases)
}

fn suite_wick(ctx: &SuiteContext) -> Result<Vec<CaseResult>> {
    let mut rng = ctx.rng(4);
    let mut cases = Vec::new();

    // S-multiplicativity, commutativity, associativity
    let mut worst_alg: f64 = 0.0;
    for _ in 0..50 {
        let d = rng.gen_range(1..=2usize);
        let na = rng.gen_range(0..=4);
        let nb = rng.gen_range(0..=4);
        let a = random_dist(&mut rng, d, na, None, 1.0)?;
        let b = random_dist(&mut rng, d, nb, None, 1.0)?;
        let ab = wick_product_capped(&a, &b, na + nb)?;
        let theta = random_point(&mut rng, d, 0.7);
        let s_lhs = s_transform(&ab, &theta)?;
        let s_rhs = s_transform(&a, &theta)? * s_transform(&b, &theta)?;
        worst_alg = worst_alg.max((s_lhs - s_rhs).norm());
        worst_alg = worst_alg.max(ab.sub(&wick_product_capped(&b, &a, na + nb)?)?.max_abs());
    }
    for _ in 0..20 {
        let a = random_dist(&mut rng, 2, 3, None, 1.0)?;
        let b = random_dist(&mut rng, 2, 3, None, 1.0)?;
        let d3 = random_dist(&mut rng, 2, 3, None, 1.0)?;
        let left = wick_product(&wick_product(&a, &b)?, &d3)?;
        let right = wick_product(&a, &wick_product(&b, &d3)?)?;
        worst_alg = worst_alg.max(left.sub(&right)?.max_abs());
    }
    cases.push(CaseResult::new("algebra", worst_alg, TOL_COEFF));

    // inverse round trip with the expectation bounded away from zero
    let mut worst_inv: f64 = 0.0;
    for _ in 0..ctx.config.draws {
        let d = rng.gen_range(1..=2usize);
        let n = rng.gen_range(1..=8usize);
        let mut phi = random_dist(&mut rng, d, n, None, 0.4)?;
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        phi.set_kernel(SymKernel::constant(d, c(sign * rng.gen_range(0.5..1.5)))?)?;
        let prod = wick_product_capped(&phi, &wick_inverse(&phi)?, n)?;
        let unit = wick_unit(d, None)?.resized(n)?;
        worst_inv = worst_inv.max(prod.sub(&unit)?.max_abs());
    }
    cases.push(CaseResult::new("inverse", worst_inv, TOL_COEFF));

    // continuity bound on randomized trials
    let mut worst_excess: f64 = 0.0;
    for _ in 0..ctx.config.draws.max(100) {
        let d = rng.gen_range(1..=2usize);
        let w = if d == 1 {
            WeightModel::new(vec![2.0])?
        } else {
            WeightModel::new(vec![1.5, 3.0])?
        };
        let na = rng.gen_range(0..=8);
        let nb = rng.gen_range(0..=8);
        let a = random_dist(&mut rng, d, na, None, 1.0)?;
        let b = random_dist(&mut rng, d, nb, None, 1.0)?;
        let rep = wick_norm_check(
            &a,
            &b,
            &w,
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
        )?;
        if rep.rhs > 0.0 {
            worst_excess = worst_excess.max(rep.lhs / rep.rhs - 1.0);
        }
    }
    cases.push(CaseResult::new(
        "norm-estimate",
        worst_excess.max(0.0),
        TOL_COEFF,
    ));
    Ok(cases)
}

fn suite_remeasure(ctx: &SuiteContext) -> Result<Vec<CaseResult>> {
    let mut rng = ctx.rng(5);
    let n_sys = ctx.config.truncation;
    let measures = ctx.config.build_measures(n_sys)?;
    let mut cases = Vec::new();

    for (name, mu) in &measures {
        let sys = build_appell(mu, n_sys)?;
        let mut worst: f64 = 0.0;
        let phi = random_test_fn(&mut rng, mu.dim(), n_sys, Some(mu.id()))?;
        worst = worst.max(retarget_test(&phi, &sys, &sys)?.sub(&phi)?.max_abs());
        let dist = random_decaying_dist(&mut rng, mu.dim(), n_sys, Some(mu.id()))?;
        worst = worst.max(retarget_dist(&dist, &sys, &sys)?.sub(&dist)?.max_abs());
        let x = random_point(&mut rng, mu.dim(), 1.0);
        for n in 0..=n_sys.min(6) {
            worst = worst.max(p_cross_residual(&sys, &sys, n, &x)?);
        }
        cases.push(
            CaseResult::new(format!("{name}/identity"), worst, TOL_COEFF)
                .with_note("inputs drawn with 1/n!-decaying slots".to_string()),
        );
    }

    for (i, (name_a, mu_a)) in measures.iter().enumerate() {
        for (name_b, mu_b) in measures.iter().skip(i + 1) {
            if mu_a.dim() != mu_b.dim() {
                continue;
            }
            let sys_a = build_appell(mu_a, n_sys)?;
            let sys_b = build_appell(mu_b, n_sys)?;
            let mut worst: f64 = 0.0;
            for _ in 0..10 {
                let dist_hat = random_dist(&mut rng, mu_b.dim(), n_sys, Some(mu_b.id()), 1.0)?;
                let phi = random_test_fn(&mut rng, mu_a.dim(), n_sys, Some(mu_a.id()))?;
                let lhs = pair(&retarget_dist(&dist_hat, &sys_a, &sys_b)?, &phi)?;
                let rhs = pair(&dist_hat, &retarget_test(&phi, &sys_a, &sys_b)?)?;
                worst = worst.max((lhs - rhs).norm());
            }
            cases.push(
                CaseResult::new(
                    format!("{name_a}<->{name_b}/invariance"),
                    worst,
                    TOL_INVARIANCE,
                )
                .with_note(format!(
                    "maps are exact through degree {n_sys}; no source padding required"
                )),
            );

            // mixed-system expansion of P_n, both directions
            let mut worst_cross: f64 = 0.0;
            for _ in 0..3 {
                let x = random_point(&mut rng, mu_a.dim(), 0.8);
                for n in 0..=n_sys.min(6) {
                    worst_cross = worst_cross.max(p_cross_residual(&sys_a, &sys_b, n, &x)?);
                    worst_cross = worst_cross.max(p_cross_residual(&sys_b, &sys_a, n, &x)?);
                }
            }
            cases.push(CaseResult::new(
                format!("{name_a}<->{name_b}/cross-expansion"),
                worst_cross,
                TOL_IDENTITY,
            ));
        }
    }
    Ok(cases)
}

fn suite_norms(ctx: &SuiteContext) -> Result<Vec<CaseResult>> {
    let mut rng = ctx.rng(6);
    let w = ctx.config.weight_model()?;
    let dim = w.dim();
    let n_max = ctx.config.truncation;
    let mut cases = Vec::new();

    // exactness of the μ-exponential test norm: Σ_n 2^{nq} |θ|_p^{2n}
    let theta: Vec<Complex64> = (0..dim).map(|i| c(0.5 - 0.1 * i as f64)).collect();
    let mut seq = KernelSequence::zero(Basis::P, dim, n_max, None)?;
    for n in 0..=n_max {
        seq.set_kernel(SymKernel::point_power(&theta, n)?.scale(c(1.0 / fact(n))))?;
    }
    let mut worst: f64 = 0.0;
    for (p, q) in [(0, 0), (1, 1), (2, 1), (1, 3)] {
        let got = test_norm(&seq, &w, p, q)?;
        let t = w.vector_norm(&theta, p)?;
        let expect: f64 = (0..=n_max)
            .map(|n| 2f64.powi(q * n as i32) * t.powi(2 * n as i32))
            .sum::<f64>()
            .sqrt();
        worst = worst.max((got - expect).abs() / expect);
    }
    cases.push(CaseResult::new("mu-exponential", worst, TOL_COEFF));

    // monotonicity in p, q, β
    let slack = 1.0 + 1e-12;
    let mut violation: f64 = 0.0;
    for _ in 0..ctx.config.draws {
        let test = random_test_fn(&mut rng, dim, n_max.min(6), None)?;
        let dist = random_dist(&mut rng, dim, n_max.min(6), None, 1.0)?;
        let (p, q) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let beta = rng.gen_range(-1.0..0.9);
        let tn = test_norm(&test, &w, p, q)?;
        violation = violation.max(tn / (test_norm(&test, &w, p + 1, q)? * slack) - 1.0);
        violation = violation.max(tn / (test_norm(&test, &w, p, q + 1)? * slack) - 1.0);
        let en = e_norm(&test, &w, p, q, beta)?;
        violation = violation.max(en / (e_norm(&test, &w, p, q, beta + 0.1)? * slack) - 1.0);
        let dn = dist_norm(&dist, &w, p, q, beta)?;
        violation = violation.max(dist_norm(&dist, &w, p + 1, q, beta)? / (dn * slack) - 1.0);
        violation = violation.max(dist_norm(&dist, &w, p, q + 1, beta)? / (dn * slack) - 1.0);
        violation = violation.max(dist_norm(&dist, &w, p, q, beta + 0.1)? / (dn * slack) - 1.0);
    }
    cases.push(CaseResult::new(
        "monotonicity",
        violation.max(0.0),
        TOL_COEFF,
    ));
    Ok(cases)
}

// --- Charlier: tiny dense-polynomial helpers for the Gram–Schmidt oracle ---

fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn poly_axpy(p: &mut [f64], s: f64, q: &[f64]) {
    for (a, b) in p.iter_mut().zip(q) {
        *a += s * b;
    }
}

/// Monic Charlier via the classical three-term recurrence,
/// C_{n+1} = (x − n − λ)C_n − nλC_{n−1}, as dense coefficient vectors.
fn charlier_recurrence(deg: usize, lambda: f64) -> Vec<Vec<f64>> {
    let mut fam: Vec<Vec<f64>> = Vec::with_capacity(deg + 1);
    for n in 0..=deg {
        let mut next = vec![0.0; deg + 1];
        if n == 0 {
            next[0] = 1.0;
        } else {
            let prev = &fam[n - 1];
            for k in 0..n {
                next[k + 1] += prev[k];
            }
            poly_axpy(&mut next, -((n - 1) as f64 + lambda), prev);
            if n >= 2 {
                let s = -((n - 1) as f64) * lambda;
                poly_axpy(&mut next, s, &fam[n - 2]);
            }
        }
        fam.push(next);
    }
    fam
}

fn suite_charlier(ctx: &SuiteContext) -> Result<Vec<CaseResult>> {
    let deg = 6usize;
    let mut cases = Vec::new();
    let mut found = false;
    for (name, spec) in &ctx.config.measures {
        if !spec.is_poisson() {
            continue;
        }
        found = true;
        let lambda = spec.intensity().expect("poisson spec has an intensity");
        let mu = spec.build(2 * deg)?;
        let inner = |f: &[f64], g: &[f64]| -> Result<f64> {
            Ok(mu
                .integrate(&mut |pt: &[f64]| c(poly_eval(f, pt[0]) * poly_eval(g, pt[0])))?
                .re)
        };

        // Gram–Schmidt on monomials under the pmf, kept monic
        let mut gs: Vec<Vec<f64>> = Vec::with_capacity(deg + 1);
        for n in 0..=deg {
            let mut next = vec![0.0; deg + 1];
            next[n] = 1.0;
            for j in 0..n {
                let prev = gs[j].clone();
                let s = inner(&next, &prev)? / inner(&prev, &prev)?;
                poly_axpy(&mut next, -s, &prev);
            }
            gs.push(next);
        }

        // the orthogonal family must be the monic Charlier recurrence
        let fam = charlier_recurrence(deg, lambda);
        let mut worst_gs: f64 = 0.0;
        for n in 0..=deg {
            for k in 0..=deg {
                worst_gs = worst_gs.max((gs[n][k] - fam[n][k]).abs());
            }
        }
        cases.push(CaseResult::new(
            format!("{name}/gram-schmidt"),
            worst_gs,
            TOL_QUAD,
        ));

        // pmf-oracle orthogonality with diagonal n!·λ^n
        let mut worst_diag: f64 = 0.0;
        for n in 0..=deg {
            for m in 0..=deg {
                let val = inner(&fam[n], &fam[m])?;
                let scale = (fact(n) * lambda.powi(n as i32) * fact(m) * lambda.powi(m as i32))
                    .sqrt();
                if n == m {
                    worst_diag = worst_diag.max((val - scale).abs() / scale);
                } else {
                    worst_diag = worst_diag.max(val.abs() / scale);
                }
            }
        }
        cases.push(CaseResult::new(
            format!("{name}/diagonal"),
            worst_diag,
            TOL_QUAD,
        ));

        // generating function: Σ_n C_n(x)θ^n/n! = e^{x·log(1+θ) − λθ};
        // |C_n(x)|θ^n/n! decays only like n²θ^n here, so the partial sum
        // needs degree ~24 to clear the series tolerance at |θ| = 0.25
        let deep = charlier_recurrence(24, lambda);
        let mut worst_egf: f64 = 0.0;
        let xs: [f64; 5] = [-2.0, -0.5, 0.0, 1.0, 3.0];
        let ts: [f64; 5] = [-0.25, -0.1, 0.05, 0.2, 0.25];
        for &x in &xs {
            for &t in &ts {
                let series: f64 = (0..=24)
                    .map(|n| poly_eval(&deep[n], x) * t.powi(n as i32) / fact(n))
                    .sum();
                let closed = (x * (1.0 + t).ln() - lambda * t).exp();
                worst_egf = worst_egf.max((series - closed).abs());
            }
        }
        cases.push(CaseResult::new(format!("{name}/egf"), worst_egf, TOL_SERIES));

        // cross-check against the P-system: the μ-exponential composed with
        // α(θ) = log(1+θ) reproduces the same generating function because
        // l_μ(log(1+θ)) = e^{λθ}
        let mu_deep = spec.build(14)?;
        let sys = build_appell(&mu_deep, 14)?;
        let mut worst_ps: f64 = 0.0;
        for &x in &xs {
            for &t in &ts {
                let alpha = [c((1.0 + t).ln())];
                let ev = sys.emu_eval(&alpha, &[c(x)], 14)?;
                let closed = c(x * (1.0 + t).ln() - lambda * t).exp();
                worst_ps = worst_ps.max((ev.series - closed).norm());
            }
        }
        cases.push(CaseResult::new(
            format!("{name}/p-system"),
            worst_ps,
            TOL_SERIES,
        ));

        // Laplace partial sums against exp(λ(e^θ − 1)) on |θ| ≤ 0.4
        let mu_lap = spec.build(12)?;
        let mut worst_lap: f64 = 0.0;
        for i in 0..=16 {
            let t = -0.4 + 0.05 * i as f64;
            let ev = mu_lap.laplace_eval(&[c(t)], 12)?;
            let closed = (lambda * (t.exp() - 1.0)).exp();
            worst_lap = worst_lap.max((ev.series - c(closed)).norm());
        }
        cases.push(CaseResult::new(
            format!("{name}/laplace"),
            worst_lap,
            TOL_LAPLACE_SUM,
        ));
    }
    if !found {
        return Err(anyhow!(
            "charlier suite requires at least one poisson measure in the config"
        ));
    }
    Ok(cases)
}
