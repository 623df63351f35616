//! `ahat`: heat coefficients of the Getzler model against the Â-genus.

use std::path::PathBuf;

use serde_json::{json, Map, Value};

use indexforms::getzler::{
    check_level_recursion, full_level, generating_function_check, local_index_density_check,
    q_table, GeneratingConvention, ModelGeometry,
};
use indexforms::json::form_to_json;

use super::Context;
use crate::error::{schema, CliError};
use crate::input::{InstanceFile, Kind};
use crate::report::{Check, Report};

pub struct AhatArgs {
    pub n: Option<usize>,
    pub degree: Option<u32>,
    pub instance: Option<PathBuf>,
    pub check_recursion: bool,
}

fn geometry(args: &AhatArgs, ctx: &Context) -> Result<ModelGeometry, CliError> {
    if let Some(path) = &args.instance {
        let file = InstanceFile::load(path, Kind::GetzlerGeometry)?;
        return ModelGeometry::from_json(&file.payload).map_err(schema);
    }
    let n = args
        .n
        .ok_or_else(|| CliError::Schema("ahat needs --n or --instance".into()))?;
    if n % 2 == 1 {
        return ModelGeometry::flat(n).map_err(schema);
    }
    let k = match (args.degree, ctx.config.truncation) {
        (Some(d), _) if d % 2 == 1 => {
            return Err(CliError::Schema(format!(
                "--degree {d} is odd; Â has even degrees"
            )))
        }
        (Some(d), _) => d / 2,
        (None, Some(k)) => k,
        (None, None) => (n / 2 + 1) as u32,
    };
    ModelGeometry::new(n, k).map_err(schema)
}

pub fn run(args: &AhatArgs, ctx: &Context) -> Result<Report, CliError> {
    let g = geometry(args, ctx)?;
    let mut report = Report::new(
        "ahat",
        json!({ "geometry": g.to_json(), "check_recursion": args.check_recursion }),
    );
    let table = q_table(&g, full_level(&g));
    let density = local_index_density_check(&g, &table)?;

    report.push(Check::new(
        "flat normalization",
        density.anchor_holds,
        "degree-0 heat density = (4π)^(-n/2)",
        json!({ "anchor": density.anchor.to_json() }),
    ));
    report.push(Check::new(
        "density independent of x",
        density.x_independent,
        "heat density at x equals its value at x = 0",
        Value::Null,
    ));
    let mut roots = Map::new();
    for e in &density.entries {
        let degree = 2 * e.k;
        report.push(Check::new(
            format!("degree {degree}: heat density matches det^1/2((R/2)/sinh(R/2))"),
            e.matches_curvature && e.real,
            "heat coefficient / flat anchor = det^1/2((R/2)/sinh(R/2)) of the curvature block",
            json!({
                "heat_over_anchor": form_to_json(&e.heat_over_anchor),
                "ahat_curvature": form_to_json(&e.ahat_curvature),
            }),
        ));
        report.push(Check::new(
            format!("degree {degree}: root series after r -> i r"),
            e.matches_rotated_roots,
            "heat coefficient / flat anchor = Π (r/2)/sinh(r/2) with r_j replaced by i r_j",
            json!({ "ahat_roots": form_to_json(&e.ahat_roots) }),
        ));
        roots.insert(degree.to_string(), form_to_json(&e.ahat_roots));
    }
    for (name, ratio, consistent) in &density.constants {
        report.push(Check::info(
            format!("prefactor {name}"),
            "candidate prefactor divided by the flat anchor",
            json!({ "ratio_to_anchor": ratio.to_json(), "consistent": consistent }),
        ));
    }
    if args.check_recursion {
        report.push(Check::new(
            "q recursion by levels",
            check_level_recursion(&g, &table).is_none(),
            "q_{μ,ν} = −a₁ q_{μ−1,ν} + (Δ − a₂) q_{μ,ν−1}",
            json!({ "max_level": table.max_level }),
        ));
        if !density.entries.is_empty() && g.pairs() > 0 {
            let partner =
                generating_function_check(&g, &table, GeneratingConvention::PartnerPaired)?;
            report.push(Check::new(
                "generating function (partner-paired)",
                partner.holds,
                "Σ q_{μ,ν}/(μ+ν)! = closed Mehler-type form",
                partner.to_json(),
            ));
            let literal = generating_function_check(&g, &table, GeneratingConvention::IndexPaired)?;
            report.push(Check::info(
                "generating function (index-paired)",
                "same identity with each x_i paired to ξ_i",
                literal.to_json(),
            ));
        }
    }
    report.results = json!({ "ahat_roots": roots, "density": density.to_json() });
    report.dropped.insert("q_table".into(), table.dropped());
    Ok(report)
}
