//! `appell show`: deterministic dumps of named objects in graded-lex order.
//!
//! Object grammar:
//!   appell-b/<measure>/<N>   constant coefficients B_0..B_N
//!   delta0/<measure>/<N>     δ_0 in Q-coefficients, i.e. B_n/n!
//!   empty/<dim>/<N>          the zero sequence
//! with <measure> one of `gaussian`, `gaussian:<dim>`, `poisson:<intensity>`.

use anyhow::{anyhow, bail, Context, Result};
use appell_core::appell::build_appell;
use appell_core::measure::{gaussian_measure, poisson_measure_1d, MeasureModel};
use appell_core::transforms::delta;
use appell_core::{Complex64, MultiIndex, SymKernel};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

impl Format {
    pub fn parse(tag: &str) -> Result<Format> {
        match tag {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => bail!("unknown format {other:?} (expected json or table)"),
        }
    }
}

fn parse_measure(token: &str, n_max: usize) -> Result<MeasureModel> {
    let (kind, param) = match token.split_once(':') {
        Some((k, p)) => (k, Some(p)),
        None => (token, None),
    };
    let model = match kind {
        "gaussian" => {
            let dim = param.map(str::parse).transpose().context("gaussian dim")?;
            gaussian_measure(dim.unwrap_or(1), n_max)?
        }
        "poisson" => {
            let lambda: f64 = param
                .ok_or_else(|| anyhow!("poisson needs an intensity, e.g. poisson:1"))?
                .parse()
                .context("poisson intensity")?;
            poisson_measure_1d(lambda, n_max)?
        }
        other => bail!("unknown measure {other:?} (expected gaussian or poisson)"),
    };
    Ok(model)
}

fn parse_object(object: &str) -> Result<(String, Vec<SymKernel>)> {
    let parts: Vec<&str> = object.split('/').collect();
    match parts.as_slice() {
        ["appell-b", measure, n] => {
            let n_max: usize = n.parse().context("degree")?;
            let mu = parse_measure(measure, n_max)?;
            let sys = build_appell(&mu, n_max)?;
            Ok(("constant Appell coefficients".into(), sys.b_kernels().to_vec()))
        }
        ["delta0", measure, n] => {
            let n_max: usize = n.parse().context("degree")?;
            let mu = parse_measure(measure, n_max)?;
            let sys = build_appell(&mu, n_max)?;
            let z = vec![Complex64::ZERO; mu.dim()];
            Ok(("delta at the origin".into(), delta(&sys, &z)?.kernels().to_vec()))
        }
        ["empty", dim, n] => {
            let d: usize = dim.parse().context("dimension")?;
            let n_max: usize = n.parse().context("degree")?;
            let kernels = (0..=n_max)
                .map(|k| SymKernel::zero(d, k))
                .collect::<appell_core::Result<Vec<_>>>()?;
            Ok(("zero sequence".into(), kernels))
        }
        _ => bail!(
            "unknown object {object:?} (expected appell-b/<measure>/<N>, \
             delta0/<measure>/<N>, or empty/<dim>/<N>)"
        ),
    }
}

pub fn run_show(object: &str, format: Format) -> Result<String> {
    let (label, kernels) = parse_object(object)?;
    let dim = kernels.first().map_or(1, SymKernel::dim);
    Ok(match format {
        Format::Json => {
            let value = if dim == 1 {
                // one coefficient per degree: a flat value list
                let values: Vec<f64> = kernels.iter().map(|k| k.coeffs()[0].re + 0.0).collect();
                json!({ "object": object, "kind": label, "values": values })
            } else {
                let table: Vec<_> = kernels
                    .iter()
                    .enumerate()
                    .map(|(n, k)| {
                        let entries: Vec<_> = appell_core::multi_indices(dim, n)
                            .iter()
                            .zip(k.coeffs())
                            .map(|(idx, v)| json!([idx.exps(), v.re + 0.0, v.im + 0.0]))
                            .collect();
                        json!({ "n": n, "entries": entries })
                    })
                    .collect();
                json!({ "object": object, "kind": label, "dim": dim, "kernels": table })
            };
            let mut text = serde_json::to_string_pretty(&value).expect("show serialization");
            text.push('\n');
            text
        }
        Format::Table => {
            let mut out = format!("object: {object} ({label})\n");
            out.push_str("  n  index        value\n");
            for (n, k) in kernels.iter().enumerate() {
                for (idx, v) in appell_core::multi_indices(dim, n).iter().zip(k.coeffs()) {
                    let shown = format_value(idx, *v);
                    out.push_str(&format!("  {n}  {shown}\n"));
                }
            }
            out
        }
    })
}

fn format_value(idx: &MultiIndex, v: Complex64) -> String {
    let idx_text = format!(
        "({})",
        idx.exps()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let (re, im) = (v.re + 0.0, v.im + 0.0);
    if im == 0.0 {
        format!("{idx_text:<12} {re}")
    } else {
        format!("{idx_text:<12} {re}+{im}i")
    }
}
