//! Acceptance suite: one line per criterion, run with `cargo test --test acceptance`.
//!
//! Two criteria state an identity whose literal form is false; for those the
//! line reads FAIL and carries the corrected identity's result. The binary
//! exits non-zero only when a verdict differs from the recorded one or a
//! corrected form stops holding.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use indexforms::algebra::random::{
    random_form, random_nilpotent_supermatrix, random_supermatrix, small_rational,
};
use indexforms::algebra::rational::{pow_i, q, qr, to_f64};
use indexforms::algebra::{Form, SuperMatrix, Universe};
use indexforms::chernweil::{
    chern_form, index_limit_check, random_batch, zeta_chern, zeta_chern_transgression,
    zeta_index_sum, Superconnection, Weights,
};
use indexforms::getzler::{
    full_level, generating_function_check, heat_coefficient, local_index_density_check, q_table,
    GeneratingConvention, ModelGeometry,
};
use indexforms::spectral::{
    coefficient_dictionary, f_special, f_special_contour, f_special_derivative, f_special_integer,
    index_via_heat, index_via_zeta, model_zeta, zeta_determinant, Family, SpectrumModel,
};
use indexforms::symbolcalc::{
    compose, neumann_resolvent, parametrix, parametrix_residual, resolvent_trace_coefficients,
    SymbolExpansion, SymbolSpace,
};

struct Outcome {
    passed: bool,
    detail: String,
    /// A literal identity is known to be false; `passed` must then be false.
    known_false: Option<&'static str>,
    /// The corrected identity, when there is one, holds.
    corrected_ok: bool,
}

impl Outcome {
    fn plain(passed: bool, detail: String) -> Outcome {
        Outcome {
            passed,
            detail,
            known_false: None,
            corrected_ok: true,
        }
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn ahat_via_recursion() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, k) in [(2usize, 2u32), (4, 4)] {
        let g = ModelGeometry::new(n, k).unwrap();
        let table = q_table(&g, full_level(&g));
        let rep = local_index_density_check(&g, &table).unwrap();
        let max_degree = 2 * rep.entries.last().map_or(0, |e| e.k);
        ok &= rep.holds() && rep.x_independent && max_degree == 2 * k;
        notes.push(format!(
            "n={n}: degrees 0..={max_degree} match det^1/2 form, dropped {}",
            rep.dropped
        ));
    }
    let elapsed = start.elapsed();
    ok &= within(elapsed, 60);
    Outcome::plain(
        ok,
        format!("{} ({:.2} s)", notes.join("; "), elapsed.as_secs_f64()),
    )
}

fn generating_function() -> Outcome {
    let start = Instant::now();
    let g = ModelGeometry::new(2, 6).unwrap();
    let table = q_table(&g, full_level(&g));
    let rep = generating_function_check(&g, &table, GeneratingConvention::PartnerPaired).unwrap();
    let elapsed = start.elapsed();
    let ok = rep.holds && rep.total_degree_verified >= 6 && within(elapsed, 30);
    Outcome::plain(
        ok,
        format!(
            "all monomials through total degree {} agree, {} terms ({:.2} s)",
            rep.total_degree_verified,
            rep.lhs_terms,
            elapsed.as_secs_f64()
        ),
    )
}

fn flat_normalization() -> Outcome {
    let mut ok = true;
    for n in [1usize, 2, 4] {
        let g = ModelGeometry::flat(n).unwrap();
        let table = q_table(&g, 0);
        let h = heat_coefficient(&g, &table, 0, true).unwrap();
        // (4π)^{−n/2} = 2^{−n} · π^{−n/2}
        let expect = Form::constant(g.universe(), pow_i(&q(2), -(n as i64)));
        ok &= h.value == expect && h.pi_half_power == -(n as i64);
    }
    Outcome::plain(ok, "density 2^-n · π^-n/2 exactly for n = 1, 2, 4".into())
}

fn f_special_suite() -> Outcome {
    let mut exact = true;
    for k in 1..=10u32 {
        let f = f_special_integer(k).unwrap();
        let g = f_special_integer(k + 1).unwrap();
        exact &= f.eval(&q(0)) == q(1) && g.derivative().eval(&q(-1)) == qr(1, k as i64);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut contour_err: f64 = 0.0;
    for _ in 0..20 {
        let t: f64 = rng.gen_range(0.3..4.0);
        let s = -rng.gen_range(0.05..0.95) * t.min(3.5);
        let c = f_special_contour(t, s).unwrap();
        let g = f_special(t, s).unwrap();
        contour_err = contour_err.max((c - g).abs());
    }
    let (mut plus, mut minus): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let alpha: f64 = rng.gen_range(0.2..3.0);
        let s: f64 = rng.gen_range(-0.9..-0.05) * alpha.min(1.0);
        let lhs = f_special_derivative(1.0 + alpha, s - 1.0).unwrap();
        let f = f_special(alpha, s).unwrap();
        let df = f_special_derivative(alpha, s).unwrap();
        plus = plus.max((lhs - (f / alpha + s / alpha * df)).abs());
        minus = minus.max((lhs - (f / alpha - s / alpha * df)).abs());
    }
    let corrected_ok = exact && contour_err <= 1e-9 && plus <= 1e-10;
    Outcome {
        passed: corrected_ok && minus <= 1e-10,
        detail: format!(
            "integer values exact: {exact}; contour vs Γ max {contour_err:.1e}; \
             ∂F_(1+α)(s−1) − (F_α − s∂F_α)/α max {minus:.2e}, with +s∂F_α instead max {plus:.1e}"
        ),
        known_false: Some("the s∂F_α term enters with a + sign (integration by parts)"),
        corrected_ok,
    }
}

fn theorem_one() -> Outcome {
    let start = Instant::now();
    let batch = random_batch(1000, 25).unwrap();
    let (mut sum_exact, mut alt_limit, mut fac_limit) = (0, 0, 0);
    for inst in &batch {
        let a = &inst.superconnection;
        let s = zeta_index_sum(a, Weights::Factorial).unwrap();
        sum_exact += usize::from(s.exact && s.residues_closed);
        let lim = index_limit_check(a).unwrap();
        alt_limit += usize::from(lim.alternating_holds);
        fac_limit += usize::from(lim.factorial_holds);
    }
    let elapsed = start.elapsed();
    let n = batch.len();
    let corrected_ok = sum_exact == n && alt_limit == n && within(elapsed, 120);
    Outcome {
        passed: corrected_ok && fac_limit == n,
        detail: format!(
            "Σ ζ(−k)/k! = dτ on {sum_exact}/{n}; t⁰ limit with 1/k! weights on {fac_limit}/{n}, \
             with (−1)^k/k! weights on {alt_limit}/{n} ({:.2} s)",
            elapsed.as_secs_f64()
        ),
        known_false: Some("Str e^{−F} pairs ζ(F,−k) with (−1)^k/k!, not 1/k!"),
        corrected_ok,
    }
}

fn theorem_two() -> Outcome {
    let batch = random_batch(1000, 25).unwrap();
    let (mut closed, mut transgression, mut classical) = (0, 0, 0);
    for inst in &batch {
        let a = &inst.superconnection;
        let z = zeta_chern_transgression(a, &qr(1, 4), &q(4)).unwrap();
        closed += usize::from(z.closed);
        transgression += usize::from(z.log_identity && z.exact);
        // drop P and the higher components: a plain connection
        let u = a.universe();
        let (p, m) = a.dims();
        let conn =
            Superconnection::new(u, (p, m), vec![SuperMatrix::zero(u, p, m), a.component(1)])
                .unwrap();
        classical += usize::from(
            zeta_chern(&conn, &q(1)).unwrap() == chern_form(&conn.curvature()).unwrap(),
        );
    }
    let n = batch.len();
    Outcome::plain(
        closed == n && transgression == n && classical == n,
        format!("closed with unit degree 0 on {closed}/{n}; transgression on {transgression}/{n}; P = 0 gives the Chern form on {classical}/{n}"),
    )
}

fn single_operator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let models = [
        SpectrumModel::twisted_circle_dirac(&qr(1, 3)),
        SpectrumModel::from_odd_operator(
            &[
                Family::new(qr(1, 2), q(2), q(3), 2, false).unwrap(),
                Family::new(q(1), q(1), qr(1, 2), 1, false).unwrap(),
            ],
            2,
            1,
        ),
    ];
    let mut zeta_max: f64 = 0.0;
    let mut points = 0;
    while points < 25 {
        let s: f64 = rng.gen_range(-5.0..5.0);
        // poles sit at s = 1/r
        if (s - 0.5).abs() < 1e-3 || (s - 1.0).abs() < 1e-3 {
            continue;
        }
        for m in &models {
            zeta_max = zeta_max.max(model_zeta(m, s).unwrap().value.abs());
        }
        points += 1;
    }
    let det = zeta_determinant(&SpectrumModel::circle_laplacian())
        .unwrap()
        .determinant();
    let det_err = (det - (2.0 * std::f64::consts::PI).powi(2)).abs();
    let mut heat_err: f64 = 0.0;
    for m in &models {
        let index = to_f64(&index_via_zeta(m).unwrap().index);
        for t in [0.1, 0.3, 1.0, 3.0, 10.0] {
            heat_err = heat_err.max((index_via_heat(m, t).unwrap() - index).abs());
        }
    }
    Outcome::plain(
        zeta_max <= 1e-10 && det_err <= 1e-8 && heat_err <= 1e-8,
        format!("super-zeta max {zeta_max:.1e} at 25 points; det (2π)² error {det_err:.1e}; heat vs index max {heat_err:.1e}"),
    )
}

fn random_symbol(rng: &mut ChaCha8Rng, s: &SymbolSpace) -> Form {
    let mut f = Form::zero(s.universe());
    for _ in 0..rng.gen_range(1..=4) {
        let mut term = Form::constant(s.universe(), small_rational(rng));
        let mut budget = 4u32;
        for j in 0..s.n() {
            let e = rng.gen_range(0..=budget.min(2));
            budget -= e;
            term = &term * &s.x(j).pow(e);
            let e = rng.gen_range(0..=budget);
            budget -= e;
            term = &term * &s.xi(j).pow(e);
        }
        f += &term;
    }
    f
}

fn symbol_calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut oracle = 0;
    let cases = 40;
    for i in 0..cases {
        let s = SymbolSpace::new(1 + i % 2, 0).unwrap();
        let (a, b) = (random_symbol(&mut rng, &s), random_symbol(&mut rng, &s));
        let u = random_symbol(&mut rng, &s)
            .filter(|_, m| (0..s.n()).all(|j| m.exponent(s.xi_index(j)) == 0));
        let ab = compose(
            &SymbolExpansion::from_symbol(&s, &a),
            &SymbolExpansion::from_symbol(&s, &b),
            9,
        )
        .unwrap();
        let direct = s
            .apply_operator(&a, &s.apply_operator(&b, &u).unwrap())
            .unwrap();
        oracle += usize::from(s.apply_operator(&ab.total(), &u).unwrap() == direct);
    }

    let s = SymbolSpace::new(2, 0).unwrap();
    let p = s
        .parse("xi1^2 + xi2^2 + x1*x2*xi1 - 2*x2^2 + 3*x1")
        .unwrap();
    let p = SymbolExpansion::from_symbol_with_order(&s, &p, 2);
    let b = parametrix(&p, 6).unwrap();
    let res = parametrix_residual(&p, &b, 6).unwrap();
    let parametrix_ok =
        res.step(0) == Form::one(s.universe()) && (1..6).all(|j| res.step(j).is_zero());

    let mut neumann_ok = true;
    for (base, w) in [
        (1usize, "dz1*x1"),
        (2, "dz1*x1 + dz2*x1^2"),
        (3, "dz1*x1 + dz2*xi1 + dz3*x1^2"),
    ] {
        let s = SymbolSpace::new(1, base).unwrap();
        let f = SymbolExpansion::from_symbol_with_order(
            &s,
            &(&s.xi_squared() + &s.parse(w).unwrap()),
            2,
        );
        let steps = 8;
        let b = parametrix(&f.map(|x| x.degree_part(0)), steps).unwrap();
        let w = f.map(Form::positive_part);
        // b (W b)^{dim B + 1} has dim B + 1 factors of positive degree
        let mut chain = b.clone();
        for _ in 0..=base {
            chain = compose(&compose(&chain, &w, steps).unwrap(), &b, steps).unwrap();
        }
        neumann_ok &=
            neumann_resolvent(&f, &b, steps).unwrap().terms == base + 1 && chain.is_zero();
    }
    Outcome::plain(
        oracle == cases && parametrix_ok && neumann_ok,
        format!(
            "composition = operator product on {oracle}/{cases}; parametrix residual exact through 6 steps: {parametrix_ok}; \
             Neumann stops at dim B + 1 for dim B = 1..3: {neumann_ok}"
        ),
    )
}

fn dictionary() -> Outcome {
    // n = 1 keeps x = (j − 1)/2 off the Gamma poles for even j
    let s = SymbolSpace::new(1, 1).unwrap();
    let f = s.parse("xi1^2 + x1^2 + dz1*x1").unwrap();
    let f = SymbolExpansion::from_symbol_with_order(&s, &f, 2);
    let box1 = [(q(0), q(1))];
    let (m1, m2) = (2u32, 3u32);
    let t1 = resolvent_trace_coefficients(&f, m1, 4, &box1).unwrap();
    let t2 = resolvent_trace_coefficients(&f, m2, 4, &box1).unwrap();
    let mut independent = true;
    let mut round_trip: f64 = 0.0;
    let mut compared = 0;
    for c1 in &t1.coefficients {
        let Some(c2) = t2.get(c1.step, c1.degree) else {
            independent = false;
            continue;
        };
        let d1 = coefficient_dictionary(c1.step as i64, 1, 0, 2, m1).unwrap();
        let d2 = coefficient_dictionary(c1.step as i64, 1, 0, 2, m2).unwrap();
        if d1.exceptional {
            continue;
        }
        let (z1, z2) = (
            d1.zeta_factor.clone().unwrap(),
            d2.zeta_factor.clone().unwrap(),
        );
        independent &=
            c1.value.scale(&z1) == c2.value.scale(&z2) && c1.pi_half_power == c2.pi_half_power;
        compared += 1;
        if let Some(beta) = c1.numeric() {
            let b = d1.zeta_from_resolvent(beta).unwrap();
            let heat = d1.heat_from_zeta(b).unwrap();
            let back = d1
                .resolvent_from_zeta(d1.zeta_from_heat(heat).unwrap())
                .unwrap();
            round_trip = round_trip.max((back - beta).abs() / beta.abs().max(1.0));
        }
    }
    Outcome::plain(
        independent && compared > 0 && round_trip <= 1e-12,
        format!("b_(j,d) equal at m = {m1}, {m2} on {compared} coefficients: {independent}; round trip max {round_trip:.1e}"),
    )
}

fn algebra_substrate() -> Outcome {
    let start = Instant::now();
    let u = Universe::base(3);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cases = 10_000;
    let mut failures = 0;
    for _ in 0..cases {
        let (p, m) = (rng.gen_range(1..=2), rng.gen_range(0..=2));
        let (pa, pb) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        let a = random_supermatrix(&mut rng, &u, p, m, 2, 2, pa);
        let b = random_supermatrix(&mut rng, &u, p, m, 2, 2, pb);
        let str_ok = a.supercommutator(&b).unwrap().supertrace().is_zero();
        let f = random_form(&mut rng, &u, 4, 3);
        let d_ok = f.d().d().is_zero();
        let n = random_nilpotent_supermatrix(&mut rng, &u, p, m, 2, 2);
        let exp_ok = n.exp_nilpotent().unwrap().log_unipotent().unwrap() == n
            && n.log_one_plus().unwrap().exp_nilpotent().unwrap()
                == &SuperMatrix::identity(&u, p, m) + &n;
        let g = random_form(&mut rng, &u, 3, 2).positive_part();
        let form_ok = (&g.exp_nilpotent().unwrap() - &Form::one(&u))
            .log_one_plus()
            .unwrap()
            == g;
        failures += usize::from(!(str_ok && d_ok && exp_ok && form_ok));
    }
    let elapsed = start.elapsed();
    Outcome::plain(
        failures == 0 && within(elapsed, 30),
        format!(
            "{} / {cases} cases exact ({:.2} s)",
            cases - failures,
            elapsed.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "Â-genus via the q recursion, n = 2 and 4",
            ahat_via_recursion,
        ),
        ("generating function, n = 2", generating_function),
        ("flat normalization (4π)^-n/2", flat_normalization),
        ("F_t(s) suite", f_special_suite),
        ("finite-rank zeta index sum and t⁰ limit", theorem_one),
        ("zeta-Chern form: closed, unit, transgression", theorem_two),
        ("single-operator zeta, determinant, index", single_operator),
        ("symbol calculus", symbol_calculus),
        ("coefficient dictionary", dictionary),
        ("algebra substrate, 10,000 cases", algebra_substrate),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("[{status}] {:>2} {name}: {}", i + 1, o.detail);
        if let Some(why) = o.known_false {
            println!(
                "            literal identity does not hold: {why}; corrected form holds: {}",
                o.corrected_ok
            );
        }
        let expected = o.known_false.is_none();
        if o.passed != expected || !o.corrected_ok {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria deviate from the recorded verdicts");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
