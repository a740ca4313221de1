mod common;

use std::collections::BTreeMap;

use common::*;
use num::{BigInt, Zero};
use proptest::prelude::*;
use qmap_core::jk_residue::{jk_homogeneous, partial_fraction_split, JkDirection};
use qmap_core::ratfun::{AffineForm, ArrangementFraction, Polynomial, ScalarZ};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kernel_near_x(f: &Raw2) -> Q {
    let (eta, v) = near_x_axis(f);
    as_constant(&jk_homogeneous(&f.to_fraction(), &JkDirection::new(eta).oriented(v)).unwrap())
}

fn kernel_near_y(f: &Raw2) -> Q {
    let (eta, v) = near_x_axis(&f.swapped());
    let eta = vec![eta[1].clone(), eta[0].clone()];
    let v = vec![v[1], v[0]];
    as_constant(&jk_homogeneous(&f.to_fraction(), &JkDirection::new(eta).oriented(v)).unwrap())
}

#[test]
fn oracle_sanity() {
    // 1/(xy): JK = 1 near either axis
    let f = Raw2 { numerator: [((0, 0), qi(1))].into(), forms: vec![((1, 0), 1), ((0, 1), 1)] };
    assert_eq!(oracle_rank2(&f), qi(1));
    // 1/(y(x+y)): cone of y and x+y misses (1, ε)
    let g = Raw2 { numerator: [((0, 0), qi(1))].into(), forms: vec![((0, 1), 1), ((1, 1), 1)] };
    assert_eq!(oracle_rank2(&g), qi(0));
    assert_eq!(oracle_rank2(&g.swapped()), qi(1));
    // (2x+y)/(xy(x+y)) near (2,1), which lies in the chamber below the diagonal
    let h = Raw2 {
        numerator: [((1, 0), qi(2)), ((0, 1), qi(1))].into(),
        forms: vec![((1, 0), 1), ((0, 1), 1), ((1, 1), 1)],
    };
    assert_eq!(oracle_rank2(&h), qi(1));
}

#[test]
fn fixed_arrangement_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pool = vec![(1, 0), (0, 1), (1, 1)];
    for _ in 0..60 {
        let f = random_raw2(&mut rng, &pool, 3, 0, true);
        assert_eq!(kernel_near_x(&f), oracle_rank2(&f), "{f:?}");
        assert_eq!(kernel_near_y(&f), oracle_rank2(&f.swapped()), "{f:?}");
    }
}

#[test]
fn random_arrangements_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pool = form_pool();
    for _ in 0..80 {
        let f = random_raw2(&mut rng, &pool, 2, 0, false);
        assert_eq!(kernel_near_x(&f), oracle_rank2(&f), "{f:?}");
        assert_eq!(kernel_near_y(&f), oracle_rank2(&f.swapped()), "{f:?}");
    }
}

#[test]
fn partial_fractions_sum_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let pool = form_pool();
    let u = [Q::new(BigInt::from(37), BigInt::from(100)), Q::new(BigInt::from(-83), BigInt::from(71))];
    for _ in 0..30 {
        let f = random_raw2(&mut rng, &pool, 2, 0, false).to_fraction();
        let direct = eval_fraction_q(&f, &u);
        let (basic, rest) = partial_fraction_split(&f, None).unwrap();
        let sum = basic
            .iter()
            .map(|t| t.to_fraction())
            .chain(rest)
            .fold(Q::zero(), |acc, t| acc + eval_fraction_q(&t, &u));
        assert_eq!(direct, sum);
    }
}

fn rank1(numerator: &BTreeMap<u32, i64>, m: u32) -> ArrangementFraction {
    let mut p = Polynomial::zero(1);
    for (&e, &c) in numerator {
        p.add_term(vec![e], ScalarZ::from_int(c));
    }
    ArrangementFraction::new(p, [(AffineForm::homogeneous(vec![1]), m)]).unwrap()
}

proptest! {
    #[test]
    fn rank_one_coefficient_extraction(
        coeffs in proptest::collection::btree_map(0u32..12, -20i64..20, 0..6),
        m in 1u32..=8,
    ) {
        let f = rank1(&coeffs, m);
        let got = jk_homogeneous(&f, &JkDirection::from_ints(&[1])).unwrap();
        let want: BTreeMap<u32, Q> = coeffs.iter().map(|(&e, &c)| (e, qi(c))).collect();
        prop_assert_eq!(as_constant(&got), oracle_rank1(&want, m));
        let neg = jk_homogeneous(&f, &JkDirection::from_ints(&[-1])).unwrap();
        prop_assert!(neg.is_zero());
    }

    #[test]
    fn linearity(seed in any::<u64>(), a in -5i64..5, b in -5i64..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_raw2(&mut rng, &form_pool(), 2, 0, true);
        let mut g = random_raw2(&mut rng, &form_pool(), 2, 0, true);
        g.forms = f.forms.clone();
        let mut combo = f.clone();
        combo.numerator.clear();
        for (k, c) in &f.numerator {
            *combo.numerator.entry(*k).or_insert_with(Q::zero) += qi(a) * c;
        }
        for (k, c) in &g.numerator {
            *combo.numerator.entry(*k).or_insert_with(Q::zero) += qi(b) * c;
        }
        combo.numerator.retain(|_, c| !c.is_zero());
        let lhs = kernel_near_x(&combo);
        let rhs = qi(a) * kernel_near_x(&f) + qi(b) * kernel_near_x(&g);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn off_degree_vanishes(seed in any::<u64>(), offset in prop_oneof![-2i64..0, 1i64..3]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_raw2(&mut rng, &form_pool(), 3, offset, false);
        prop_assert!(kernel_near_x(&f).is_zero());
        prop_assert!(kernel_near_y(&f).is_zero());
    }

    #[test]
    fn chamber_independence(seed in any::<u64>(), e1 in (-6i64..6, 1i64..6), e2 in (-6i64..6, 1i64..6)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_raw2(&mut rng, &form_pool(), 2, 0, false);
        let eta1 = vec![qi(e1.0), qi(e1.1)];
        let eta2 = vec![qi(e2.0), qi(e2.1)];
        prop_assume!(same_chamber(&f, &eta1, &eta2));
        let v = vec![1, 3 * f.max_abs_entry()];
        let frac = f.to_fraction();
        let j1 = jk_homogeneous(&frac, &JkDirection::new(eta1).oriented(v.clone())).unwrap();
        let j2 = jk_homogeneous(&frac, &JkDirection::new(eta2).oriented(v)).unwrap();
        prop_assert_eq!(j1, j2);
    }
}

#[test]
fn rank_two_with_z_coefficients_is_linear_in_z() {
    // numerator z*(2x+y) over {x, y, x+y}: residue is z times the z-free one
    let mut n = Polynomial::zero(2);
    n.add_term(vec![1, 0], ScalarZ::z_monomial(qi(2), 1));
    n.add_term(vec![0, 1], ScalarZ::z());
    let forms = [vec![1, 0], vec![0, 1], vec![1, 1]].map(AffineForm::homogeneous).map(|f| (f, 1));
    let f = ArrangementFraction::new(n, forms).unwrap();
    let v = jk_homogeneous(&f, &JkDirection::new(vec![qi(2), qi(1)])).unwrap();
    assert_eq!(v, ScalarZ::z());
}
