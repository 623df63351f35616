#![allow(clippy::excessive_precision)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use indexforms::spectral::{gamma, hurwitz_zeta, hurwitz_zeta_derivative_at_zero};

/// `(s, a, ζ(s, a))`, computed independently at 40 significant digits.
const HURWITZ_REFERENCE: [(f64, f64, f64); 9] = [
    (-19.5, 0.3, 21.29533042520120936464),
    (-12.25, 1.7, -0.04912024650337729367953),
    (-5.5, 0.05, -0.003370451319396017894083),
    (-0.5, 0.9, -0.138222524176082309065),
    (0.5, 0.25, 0.2399635244956309553376),
    (3.3, 0.1, 1996.125102957497035738),
    (7.75, 2.9, 0.0002931693161176385804824),
    (19.9, 0.6, 25989.03289484773549515),
    (-17.0, 0.4, 2.470687919471839674631),
];

#[test]
fn hurwitz_matches_reference_values() {
    for (s, a, expect) in HURWITZ_REFERENCE {
        let got = hurwitz_zeta(s, a).unwrap();
        let rel = ((got - expect) / expect).abs();
        assert!(
            rel <= 1e-12,
            "ζ({s}, {a}) = {got}, reference {expect}, relative error {rel:.2e}"
        );
    }
}

#[test]
fn hurwitz_shift_recurrence() {
    // ζ(s, a) − ζ(s, a+1) = a^{−s}
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let s: f64 = rng.gen_range(-20.0..20.0);
        if (s - 1.0).abs() < 1e-6 {
            continue;
        }
        let a: f64 = rng.gen_range(0.05..3.0);
        let lhs = hurwitz_zeta(s, a).unwrap() - hurwitz_zeta(s, a + 1.0).unwrap();
        let rhs = a.powf(-s);
        let scale = hurwitz_zeta(s, a).unwrap().abs().max(rhs.abs()).max(1.0);
        assert!(
            (lhs - rhs).abs() <= 1e-11 * scale,
            "s = {s}, a = {a}: {lhs} vs {rhs}"
        );
    }
}

#[test]
fn lerch_formula_at_half() {
    // ζ'(0, ½) = −½ log 2
    let d = hurwitz_zeta_derivative_at_zero(0.5).unwrap();
    assert!((d + 0.5 * 2f64.ln()).abs() < 1e-14);
}

#[test]
fn gamma_recurrence_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..500 {
        let s: f64 = rng.gen_range(-6.0..8.0);
        if (s - s.round()).abs() < 1e-3 && s.round() <= 0.0 {
            continue;
        }
        let lhs = gamma(s + 1.0).unwrap();
        let rhs = s * gamma(s).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "s = {s}");
    }
    assert!(gamma(-2.0).is_err());
}
