//! `familyzeta` and `chern`: finite-rank superconnection suites.

use std::path::PathBuf;

use serde_json::{json, Value};

use indexforms::algebra::rational::parse_rational;
use indexforms::algebra::{SuperMatrix, Q};
use indexforms::chernweil::{
    chern_form, chern_transgression, index_limit_check, random_batch, zeta_chern,
    zeta_chern_transgression, zeta_index_sum, Instance, Superconnection, Weights,
};
use indexforms::json::form_to_json;
use indexforms::par::{map, Execution};

use super::Context;
use crate::error::{schema, CliError};
use crate::input::{InstanceFile, Kind};
use crate::report::{Check, Report};

pub struct BatchArgs {
    pub instance: Option<PathBuf>,
    pub count: Option<usize>,
}

/// The instance file, or the seeded random batch.
fn instances(args: &BatchArgs, ctx: &Context) -> Result<(Value, Vec<Instance>), CliError> {
    if let Some(path) = &args.instance {
        let file = InstanceFile::load(path, Kind::Superconnection)?;
        // `{"count": N}` without components asks for the seeded batch
        if file.payload.get("components").is_none() {
            if let Some(count) = file.payload.get("count").and_then(Value::as_u64) {
                let seed = file.seed.unwrap_or(ctx.config.seed);
                return Ok((
                    json!({ "seed": seed, "count": count }),
                    random_batch(seed, count as usize)?,
                ));
            }
        }
        let inst = Instance::from_json(&file.payload).map_err(schema)?;
        return Ok((json!({ "instance": inst.to_json() }), vec![inst]));
    }
    let (seed, count) = (ctx.config.seed, args.count.unwrap_or(ctx.config.count));
    Ok((
        json!({ "seed": seed, "count": count }),
        random_batch(seed, count)?,
    ))
}

fn label(i: usize, total: usize, name: &str) -> String {
    if total == 1 {
        name.to_string()
    } else {
        format!("instance {i}: {name}")
    }
}

pub fn family_zeta(args: &BatchArgs, ctx: &Context) -> Result<Report, CliError> {
    let (input, batch) = instances(args, ctx)?;
    let mut report = Report::new("familyzeta", input);
    let outcomes = map(Execution::Auto, &batch, |inst| {
        let a = &inst.superconnection;
        Ok::<_, indexforms::Error>((
            zeta_index_sum(a, Weights::Factorial)?,
            index_limit_check(a)?,
            a.dims(),
            a.base_dim(),
        ))
    });
    let mut dropped = 0;
    for (i, out) in outcomes.into_iter().enumerate() {
        let (sum, lim, dims, base) = out?;
        let total = batch.len();
        dropped += sum.lhs.dropped() + lim.rhs.dropped();
        report.push(Check::new(
            label(i, total, "Σ_k ζ(F,−k)/k! = dτ"),
            sum.exact && sum.residues_closed,
            "Σ_k (1/k!) ζ(A², −k) = d τ with τ the transgression primitive",
            json!({ "dims": [dims.0, dims.1], "base": base, "lhs": form_to_json(&sum.lhs), "termwise": sum.termwise }),
        ));
        report.push(Check::new(
            label(i, total, "t⁰ limit with (−1)^k/k! weights"),
            lim.alternating_holds,
            "LIM Σ_k ((−1)^k/k!) ζ(F_t, −k) = −ch(Ker P, ∇₀) + LIM ch(A_t)",
            json!({ "lhs": form_to_json(&lim.lhs_alternating), "rhs": form_to_json(&lim.rhs) }),
        ));
        report.push(Check::info(
            label(i, total, "t⁰ limit with 1/k! weights"),
            "LIM Σ_k (1/k!) ζ(F_t, −k) = −ch(Ker P, ∇₀) + LIM ch(A_t); not an identity in general",
            json!({ "holds": lim.factorial_holds, "lhs": form_to_json(&lim.lhs_factorial) }),
        ));
    }
    report.dropped.insert("forms".into(), dropped);
    Ok(report)
}

pub struct ChernArgs {
    pub batch: BatchArgs,
    pub t: String,
    pub big_t: String,
}

fn rational_flag(name: &str, text: &str) -> Result<Q, CliError> {
    parse_rational(text).ok_or_else(|| {
        CliError::Schema(format!(
            "--{name} expects a rational such as 1/4, got `{text}`"
        ))
    })
}

/// The connection part alone, so that `c_ζ` must reduce to the Chern form.
fn plain_connection(a: &Superconnection) -> indexforms::Result<Superconnection> {
    let (p, m) = a.dims();
    let u = a.universe();
    Superconnection::new(u, (p, m), vec![SuperMatrix::zero(u, p, m), a.component(1)])
}

pub fn chern(args: &ChernArgs, ctx: &Context) -> Result<Report, CliError> {
    let t = rational_flag("t", &args.t)?;
    let big_t = rational_flag("big-t", &args.big_t)?;
    if t <= Q::from_integer(0.into()) || big_t <= t {
        return Err(CliError::Schema("need 0 < t < T".into()));
    }
    let (mut input, batch) = instances(&args.batch, ctx)?;
    input["t"] = json!(t.to_string());
    input["big_t"] = json!(big_t.to_string());
    let mut report = Report::new("chern", input);
    let outcomes = map(Execution::Auto, &batch, |inst| {
        let a = &inst.superconnection;
        let z = zeta_chern_transgression(a, &t, &big_t)?;
        let conn = plain_connection(a)?;
        let classical =
            zeta_chern(&conn, &Q::from_integer(1.into()))? == chern_form(&conn.curvature())?;
        let ch = inst
            .endpoint
            .as_ref()
            .map(|e| chern_transgression(a, e))
            .transpose()?;
        Ok::<_, indexforms::Error>((z, classical, ch))
    });
    let total = batch.len();
    for (i, out) in outcomes.into_iter().enumerate() {
        let (z, classical, ch) = out?;
        report.push(Check::new(
            label(i, total, "c_ζ closed with degree-0 part 1"),
            z.closed,
            "d c_ζ(A_t) = 0 and c_ζ(A_t)_[0] = 1",
            json!({ "c_t": form_to_json(&z.c_t) }),
        ));
        report.push(Check::new(
            label(i, total, "log c_ζ transgression"),
            z.log_identity,
            "log c_ζ(A_T) − log c_ζ(A_t) = d τ_{t,T}",
            json!({ "tau": form_to_json(&z.tau) }),
        ));
        report.push(Check::new(
            label(i, total, "c_ζ transgression"),
            z.exact,
            "c_ζ(A_T) − c_ζ(A_t) = d ω_{t,T}",
            json!({ "omega": form_to_json(&z.omega) }),
        ));
        report.push(Check::new(
            label(i, total, "P = 0 gives the Chern form"),
            classical,
            "c_ζ of a connection = det(I + ∇²)",
            Value::Null,
        ));
        if let Some(ch) = ch {
            report.push(Check::new(
                label(i, total, "Chern character transgression"),
                ch.holds,
                "ch(A¹) − ch(A⁰) = −d ∫ Str(Ȧ_σ e^{−F_σ}) dσ",
                json!({ "primitive": form_to_json(&ch.primitive) }),
            ));
        }
    }
    Ok(report)
}
