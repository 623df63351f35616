//! `symbols`: parametrix, Neumann resolvent and composition dumps.

use std::path::PathBuf;

use serde_json::{json, Value};

use indexforms::algebra::Form;
use indexforms::symbolcalc::{
    compose, neumann_resolvent, parametrix, parametrix_residual, SymbolExpansion, SymbolSpace,
};

use super::Context;
use crate::error::{schema, CliError};
use crate::input::{InstanceFile, Kind};
use crate::report::{Check, Report};

pub struct SymbolArgs {
    pub n: usize,
    pub base: usize,
    pub symbol: Option<String>,
    pub perturbation: Option<String>,
    pub with: Option<String>,
    pub steps: Option<usize>,
    pub instance: Option<PathBuf>,
}

struct Model {
    n: usize,
    base: usize,
    symbol: String,
    perturbation: Option<String>,
    with: Option<String>,
}

fn model(args: &SymbolArgs) -> Result<Model, CliError> {
    let Some(path) = &args.instance else {
        let symbol = args.symbol.clone().unwrap_or_else(|| {
            (1..=args.n)
                .map(|j| format!("xi{j}^2"))
                .collect::<Vec<_>>()
                .join(" + ")
        });
        return Ok(Model {
            n: args.n,
            base: args.base,
            symbol,
            perturbation: args.perturbation.clone(),
            with: args.with.clone(),
        });
    };
    let p = InstanceFile::load(path, Kind::SymbolModel)?.payload;
    let text = |key: &str| p.get(key).and_then(Value::as_str).map(str::to_string);
    let n = p
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::Schema("symbol model needs `n`".into()))? as usize;
    Ok(Model {
        n,
        base: p.get("base").and_then(Value::as_u64).unwrap_or(0) as usize,
        symbol: text("symbol")
            .ok_or_else(|| CliError::Schema("symbol model needs a `symbol` string".into()))?,
        perturbation: text("perturbation"),
        with: text("compose_with"),
    })
}

/// `Π (1 + x_j + x_j²)`, a polynomial test function for the operator oracle.
fn test_function(s: &SymbolSpace) -> Form {
    let mut u = Form::one(s.universe());
    for j in 0..s.n() {
        let x = s.x(j);
        u = &u * &(&(&Form::one(s.universe()) + &x) + &(&x * &x));
    }
    u
}

pub fn run(args: &SymbolArgs, ctx: &Context) -> Result<Report, CliError> {
    let m = model(args)?;
    let steps = args.steps.unwrap_or(ctx.config.steps);
    let space = SymbolSpace::new(m.n, m.base).map_err(schema)?;
    let p = space.parse(&m.symbol).map_err(schema)?;
    let mut report = Report::new(
        "symbols",
        json!({ "n": m.n, "base": m.base, "symbol": m.symbol, "perturbation": m.perturbation, "compose_with": m.with, "steps": steps }),
    );
    let pe = SymbolExpansion::from_symbol_with_order(
        &space,
        &p,
        2.max(
            space
                .homogeneous_parts(&p)
                .keys()
                .next_back()
                .copied()
                .unwrap_or(0),
        ),
    );
    let b = parametrix(&pe, steps).map_err(schema)?;
    let res = parametrix_residual(&pe, &b, steps)?;
    let identity =
        res.step(0) == Form::one(space.universe()) && (1..steps).all(|j| res.step(j).is_zero());
    report.push(Check::new(
        format!("parametrix identity through {steps} steps"),
        identity,
        "(p − λ) ∘ b = 1 step by step, b_0 = (|ξ|² − λ)^{−1}",
        json!({ "residual": res.to_json() }),
    ));
    let mut results = json!({ "parametrix": b.to_json() });
    if let Some(w) = &m.perturbation {
        let w = space.parse(w).map_err(schema)?;
        let f = SymbolExpansion::from_symbol_with_order(&space, &(&p + &w), pe.order());
        let r = neumann_resolvent(&f, &b, steps)?;
        report.push(Check::new(
            "Neumann series stops by nilpotence",
            r.terms <= m.base + 1,
            "(F − λ)^{−1} = Σ_{k ≤ dim B} (−1)^k b (W b)^k",
            json!({ "terms": r.terms, "dim_B": m.base }),
        ));
        results["resolvent"] = r.expansion.to_json();
    }
    if let Some(other) = &m.with {
        let q = space.parse(other).map_err(schema)?;
        let (a, bb) = (
            SymbolExpansion::from_symbol(&space, &p),
            SymbolExpansion::from_symbol(&space, &q),
        );
        let spread = |e: &SymbolExpansion| e.steps().len();
        let full = spread(&a) + spread(&bb) + a.order().max(0) as usize + 1;
        let c = compose(&a, &bb, full)?;
        let u = test_function(&space);
        let direct = space.apply_operator(&p, &space.apply_operator(&q, &u)?)?;
        let via = space.apply_operator(&c.total(), &u)?;
        report.push(Check::new(
            "composition matches the operator product",
            direct == via,
            "Op(a ∘ b) u = Op(a) Op(b) u on a polynomial u",
            json!({ "u": indexforms::json::form_to_json(&u) }),
        ));
        results["composition"] = c.to_json();
    }
    report.results = results;
    Ok(report)
}
