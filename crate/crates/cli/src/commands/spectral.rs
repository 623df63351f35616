//! `zeta-det`, `index`, `fspecial` and `dict`.

use std::f64::consts::PI;
use std::path::Path;

use serde_json::{json, Value};

use indexforms::algebra::rational::{q, to_f64};
use indexforms::spectral::{
    coefficient_dictionary, f_special, f_special_contour, f_special_derivative, f_special_integer,
    gamma, index_via_heat, index_via_zeta, model_zeta, zeta_determinant, SpectrumModel,
};
use indexforms::symbolcalc::{resolvent_trace_coefficients, SymbolExpansion, SymbolSpace};

use super::Context;
use crate::error::{schema, CliError};
use crate::input::{InstanceFile, Kind};
use crate::report::{Check, Report};

/// `s1-laplacian`, `linear`, `twisted-dirac:<a>`, an inline JSON descriptor,
/// or a `model-spectrum` instance file.
pub fn model_from_flag(spec: &str) -> Result<(Value, SpectrumModel), CliError> {
    let descriptor = match spec {
        "s1-laplacian" | "circle-laplacian" => json!({ "rule": "circle-laplacian" }),
        "linear" => json!({ "rule": "linear" }),
        _ if spec.starts_with("twisted-dirac:") => {
            json!({ "rule": "twisted-dirac", "a": &spec["twisted-dirac:".len()..] })
        }
        _ if spec.trim_start().starts_with('{') => {
            serde_json::from_str(spec).map_err(|e| CliError::Schema(format!("--model: {e}")))?
        }
        _ => InstanceFile::load(Path::new(spec), Kind::ModelSpectrum)?.payload,
    };
    let model = SpectrumModel::from_json(&descriptor).map_err(schema)?;
    Ok((descriptor, model))
}

pub fn zeta_det(spec: &str, ctx: &Context) -> Result<Report, CliError> {
    let (descriptor, model) = model_from_flag(spec)?;
    let mut report = Report::new("zeta-det", json!({ "model": descriptor }));
    let det = zeta_determinant(&model)?;
    let mut recomposed = to_f64(&det.log_two_pi) * (2.0 * PI).ln();
    for (c, beta) in &det.log_scale {
        recomposed += to_f64(beta) * to_f64(c).ln();
    }
    for (a, g) in &det.log_gamma {
        recomposed += to_f64(g) * gamma(to_f64(a))?.ln();
    }
    report.push(Check::new(
        "closed form reproduces the value",
        (recomposed - det.value).abs() <= ctx.tol() * det.value.abs().max(1.0),
        "log det = α log 2π + Σ β log c + Σ γ log Γ(a)",
        json!({ "recomposed": recomposed, "value": det.value }),
    ));
    let known = match descriptor.get("rule").and_then(Value::as_str) {
        Some("circle-laplacian") => {
            Some(("det of the circle Laplacian is (2π)²", (2.0 * PI).powi(2)))
        }
        Some("linear") => Some(("det of k ↦ k is (2π)^(1/2)", (2.0 * PI).sqrt())),
        _ => None,
    };
    if let Some((name, expect)) = known {
        let got = det.determinant();
        report.push(Check::new(
            name,
            (got - expect).abs() <= ctx.asymptotic_tol() * expect,
            "det_ζ = exp(−ζ'(0))",
            json!({ "determinant": got, "expected": expect }),
        ));
    }
    if model.is_matched() {
        report.push(Check::new(
            "matched spectrum has unit superdeterminant",
            det.value.abs() <= ctx.tol(),
            "log sdet_ζ = 0 when both sides share the non-zero spectrum",
            json!({ "log_sdet": det.value }),
        ));
    }
    report.results = det.to_json();
    Ok(report)
}

pub fn index(spec: &str, times: &[f64], ctx: &Context) -> Result<Report, CliError> {
    let (descriptor, model) = model_from_flag(spec)?;
    let mut report = Report::new(
        "index",
        json!({ "model": descriptor, "t": times, "seed": ctx.config.seed }),
    );
    let idx = match index_via_zeta(&model) {
        Ok(idx) => idx,
        // not the square of an odd operator: no integer index to compare with
        Err(e @ indexforms::Error::Precondition(_)) => {
            report.push(Check::new(
                "integer index",
                false,
                "ζ(P², 0) + Str Π₀ ∈ ℤ",
                json!({ "error": e.to_string() }),
            ));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    let index = to_f64(&idx.index);
    if model.is_matched() {
        report.push(Check::new(
            "index = dim Ker⁺ − dim Ker⁻",
            idx.index == q(idx.kernel_supertrace),
            "ζ(P², 0) + Str Π₀ = ind P",
            idx.to_json(),
        ));
        let points = sample_points(ctx.config.seed, 25);
        let worst = points
            .iter()
            .map(|&s| model_zeta(&model, s).map(|z| z.value.abs()))
            .collect::<Result<Vec<f64>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        report.push(Check::new(
            "super-zeta vanishes",
            worst <= ctx.tol(),
            "Str((P²)^{−s}) = 0 on a matched spectrum",
            json!({ "points": points.len(), "max_abs": worst }),
        ));
    } else {
        report.push(Check::info(
            "index from the zeta side",
            "ζ(P², 0) + Str Π₀",
            idx.to_json(),
        ));
    }
    for &t in times {
        match index_via_heat(&model, t) {
            Ok(h) if model.is_matched() => report.push(Check::new(
                format!("Str e^(−tP²) at t = {t}"),
                (h - index).abs() <= ctx.asymptotic_tol(),
                "Str(e^{−tP²}) = ind P for every t > 0",
                json!({ "t": t, "heat": h, "index": index }),
            )),
            Ok(h) => report.push(Check::info(
                format!("Str e^(−tP²) at t = {t}"),
                "heat supertrace",
                json!({ "t": t, "heat": h }),
            )),
            Err(e) => report.push(Check::new(
                format!("Str e^(−tP²) at t = {t}"),
                false,
                "heat supertrace by summation",
                json!({ "error": e.to_string() }),
            )),
        }
    }
    report.results = idx.to_json();
    Ok(report)
}

/// Deterministic points in `[−5, 5]` away from the poles at `½` and `1`.
fn sample_points(seed: u64, count: usize) -> Vec<f64> {
    // golden-ratio sequence shifted by the seed
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let offset = (seed % 1000) as f64 / 1000.0;
    (0..count)
        .map(|i| -5.0 + 10.0 * (offset + phi * (i + 1) as f64).fract())
        .map(|s| {
            if (s - 0.5).abs() < 1e-3 || (s - 1.0).abs() < 1e-3 {
                s + 0.01
            } else {
                s
            }
        })
        .collect()
}

pub struct FSpecialArgs {
    pub t: Option<f64>,
    pub s: Vec<f64>,
    pub check: bool,
}

pub fn fspecial(args: &FSpecialArgs, ctx: &Context) -> Result<Report, CliError> {
    let mut report = Report::new(
        "fspecial",
        json!({ "t": args.t, "s": args.s, "check": args.check }),
    );
    let integer_t = args
        .t
        .filter(|t| t.fract() == 0.0 && *t >= 1.0)
        .map(|t| t as u32);
    let mut values = Vec::new();
    if let Some(t) = args.t {
        for &s in &args.s {
            let v = f_special(t, s).map_err(|e| CliError::Schema(e.to_string()))?;
            values.push(json!({ "s": s, "value": v, "derivative": f_special_derivative(t, s)? }));
        }
    }
    if args.check {
        let ks: Vec<u32> = match (args.t, integer_t) {
            (None, _) => (1..=10).collect(),
            (Some(_), Some(k)) => vec![k],
            (Some(_), None) => Vec::new(),
        };
        for k in ks {
            let f = f_special_integer(k)?;
            let g = f_special_integer(k + 1)?;
            let at_zero = f.eval(&q(0));
            let slope = g.derivative().eval(&q(-1));
            report.push(Check::new(
                format!("k = {k}: F_k(0) = 1 and ∂F_(k+1)(−1) = 1/k"),
                at_zero == q(1) && slope == indexforms::algebra::rational::qr(1, k as i64),
                "F_k(s) = (s+1)⋯(s+k−1)/(k−1)! from Γ(s+k)/(Γ(k)Γ(s+1))",
                json!({ "F_k(0)": at_zero.to_string(), "dF_(k+1)(-1)": slope.to_string() }),
            ));
        }
        if let (Some(t), None) = (args.t, integer_t) {
            fractional_checks(&mut report, t, ctx)?;
        }
    }
    report.results = json!({ "values": values });
    Ok(report)
}

/// Contour against the Γ quotient, and the shift identity with `α = t`.
fn fractional_checks(report: &mut Report, t: f64, ctx: &Context) -> Result<(), CliError> {
    if t <= 0.0 {
        return Err(CliError::Schema(format!(
            "--t {t}: the contour check needs t > 0"
        )));
    }
    let strip: Vec<f64> = (1..=5).map(|i| -t.min(1.0) * i as f64 / 6.0).collect();
    let mut worst: f64 = 0.0;
    for &s in &strip {
        worst = worst.max((f_special_contour(t, s)? - f_special(t, s)?).abs());
    }
    report.push(Check::new(
        format!("contour integral matches Γ quotient at t = {t}"),
        worst <= ctx.tol(),
        "(i/2π)∮ μ^{−s−1}(1−μ)^{−t} dμ = Γ(s+t)/(Γ(t)Γ(s+1)) for −t < s < 0",
        json!({ "points": strip, "max_abs": worst }),
    ));
    let alpha = t;
    let (mut plus, mut minus): (f64, f64) = (0.0, 0.0);
    for &s in &strip {
        let lhs = f_special_derivative(1.0 + alpha, s - 1.0)?;
        let f = f_special(alpha, s)?;
        let df = f_special_derivative(alpha, s)?;
        plus = plus.max((lhs - (f + s * df) / alpha).abs());
        minus = minus.max((lhs - (f - s * df) / alpha).abs());
    }
    report.push(Check::new(
        format!("shift identity at α = {alpha}"),
        plus <= ctx.tol(),
        "∂_s F_{1+α}(s−1) = (1/α) F_α(s) + (s/α) ∂_s F_α(s)",
        json!({ "max_abs": plus }),
    ));
    report.push(Check::info(
        format!("shift identity with −s/α at α = {alpha}"),
        "∂_s F_{1+α}(s−1) = (1/α) F_α(s) − (s/α) ∂_s F_α(s); fails off s = 0",
        json!({ "max_abs": minus }),
    ));
    Ok(())
}

pub struct DictArgs {
    pub j: i64,
    pub n: i64,
    pub w: i64,
    pub r: i64,
    pub m: u32,
    pub check: bool,
}

pub fn dict(args: &DictArgs, ctx: &Context) -> Result<Report, CliError> {
    let d = coefficient_dictionary(args.j, args.n, args.w, args.r, args.m).map_err(schema)?;
    let mut report = Report::new(
        "dict",
        json!({ "j": args.j, "n": args.n, "w": args.w, "r": args.r, "m": args.m, "check": args.check }),
    );
    report.results = d.to_json();
    if args.check {
        m_independence(&mut report, args.m, ctx)?;
    }
    Ok(report)
}

/// `Γ(x)/Γ(x+m) β(m)` at `m` and `m+1` on the resolvent trace of
/// `ξ² + x² + x dz` in one dimension, where `x = (j−1)/2` avoids the poles.
fn m_independence(report: &mut Report, m: u32, ctx: &Context) -> Result<(), CliError> {
    let m = m.max(2);
    let s = SymbolSpace::new(1, 1)?;
    let f = SymbolExpansion::from_symbol_with_order(&s, &s.parse("xi1^2 + x1^2 + dz1*x1")?, 2);
    let domain = [(q(0), q(1))];
    let steps = ctx.config.steps.clamp(1, 8);
    let lo = resolvent_trace_coefficients(&f, m, steps, &domain)?;
    let hi = resolvent_trace_coefficients(&f, m + 1, steps, &domain)?;
    let mut compared = Vec::new();
    let mut independent = true;
    let mut round_trip: f64 = 0.0;
    for c in &lo.coefficients {
        let d_lo = coefficient_dictionary(c.step as i64, 1, 0, 2, m)?;
        let d_hi = coefficient_dictionary(c.step as i64, 1, 0, 2, m + 1)?;
        let (Some(z_lo), Some(z_hi)) = (&d_lo.zeta_factor, &d_hi.zeta_factor) else {
            continue;
        };
        let Some(other) = hi.get(c.step, c.degree) else {
            independent = false;
            continue;
        };
        let same = c.value.scale(z_lo) == other.value.scale(z_hi);
        independent &= same;
        compared.push(json!({ "j": c.step, "d": c.degree, "equal": same }));
        if let Some(beta) = c.numeric() {
            let back = d_lo.resolvent_from_zeta(
                d_lo.zeta_from_heat(d_lo.heat_from_zeta(d_lo.zeta_from_resolvent(beta)?)?)?,
            )?;
            round_trip = round_trip.max((back - beta).abs() / beta.abs().max(1.0));
        }
    }
    report.push(Check::new(
        format!("b_(j,d) agree at m = {m} and {}", m + 1),
        independent && !compared.is_empty(),
        "b_{j,d} = Γ(x)/Γ(x+m) β_{j,d}(m) does not depend on m",
        json!({ "coefficients": compared }),
    ));
    report.push(Check::new(
        "resolvent → zeta → heat → back",
        round_trip <= 1e-12,
        "the Gamma factors invert each other",
        json!({ "max_relative": round_trip }),
    ));
    report.push(Check::info(
        "w versus w_k in the heat factor",
        "Γ((j−n−w)/r) and Γ((j−n−w_k)/r) coincide when w = w_k = 0",
        json!({ "w": 0, "w_k": 0 }),
    ));
    Ok(())
}
