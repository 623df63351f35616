use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use indexforms::algebra::random::{
    random_form, random_homogeneous, random_nilpotent_supermatrix, random_supermatrix,
};
use indexforms::algebra::{Form, SuperMatrix, Universe};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exterior_derivative_squares_to_zero(seed in any::<u64>()) {
        let u = Universe::base(4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_form(&mut rng, &u, 6, 3);
        prop_assert!(f.d().d().is_zero());
    }

    #[test]
    fn graded_leibniz_rule(seed in any::<u64>(), k in 0u32..3) {
        let u = Universe::base(4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_homogeneous(&mut rng, &u, k, 3, 2);
        let g = random_form(&mut rng, &u, 4, 2);
        let sign = if k % 2 == 0 { f.clone() } else { -&f };
        prop_assert_eq!((&f * &g).d(), &(&f.d() * &g) + &(&sign * &g.d()));
    }

    #[test]
    fn supertrace_kills_supercommutators(seed in any::<u64>(), plus in 1usize..3, minus in 0usize..3, pa in 0u32..2, pb in 0u32..2) {
        let u = Universe::base(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_supermatrix(&mut rng, &u, plus, minus, 3, 2, pa);
        let b = random_supermatrix(&mut rng, &u, plus, minus, 3, 2, pb);
        prop_assert!(a.supercommutator(&b).unwrap().supertrace().is_zero());
    }

    #[test]
    fn exp_and_log_are_inverse(seed in any::<u64>(), plus in 1usize..3, minus in 0usize..2) {
        let u = Universe::base(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_nilpotent_supermatrix(&mut rng, &u, plus, minus, 2, 2);
        prop_assert_eq!(n.exp_nilpotent().unwrap().log_unipotent().unwrap(), n.clone());
        let id = SuperMatrix::identity(&u, plus, minus);
        prop_assert_eq!(n.log_one_plus().unwrap().exp_nilpotent().unwrap(), &id + &n);
        let f = random_form(&mut rng, &u, 4, 2).positive_part();
        prop_assert_eq!((&f.exp_nilpotent().unwrap() - &Form::one(&u)).log_one_plus().unwrap(), f);
    }
}
