use itertools::Itertools;
use proptest::prelude::*;
use qmap_core::git_model::GitPresentation;
use qmap_core::invariants::{
    equivariant_invariant, nonequivariant_invariant, virtual_dimension, InvariantRequest, Mode,
};
use qmap_core::presets::PresetId;
use qmap_core::ratfun::{parse_polynomial, Polynomial, ScalarZ};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn preset(s: &str) -> GitPresentation {
    s.parse::<PresetId>().unwrap().build().unwrap()
}

fn f1() -> GitPresentation {
    GitPresentation::load(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/f1.json")).unwrap()
}

/// Random homogeneous polynomial of degree `deg`, symmetrized over all
/// variable permutations when `symmetric`.
fn random_insertion(rng: &mut ChaCha8Rng, r: usize, deg: u32, symmetric: bool) -> Polynomial {
    loop {
        let mut base = Polynomial::zero(r);
        for _ in 0..rng.gen_range(1..=3) {
            let mut e = vec![0u32; r];
            for _ in 0..deg {
                e[rng.gen_range(0..r)] += 1;
            }
            base.add_term(e, ScalarZ::from_int(rng.gen_range(-3..=3)));
        }
        let p = if symmetric {
            (0..r).permutations(r).fold(Polynomial::zero(r), |acc, perm| {
                let images: Vec<Polynomial> = perm.iter().map(|&i| Polynomial::var(r, i)).collect();
                &acc + &base.substitute(&images)
            })
        } else {
            base
        };
        if !p.is_zero() {
            return p;
        }
    }
}

fn non_eq(p: &GitPresentation, delta: Vec<i64>, ins: &Polynomial) -> ScalarZ {
    nonequivariant_invariant(&InvariantRequest::new(p, delta, ins.clone(), Mode::Nonequivariant)).unwrap().value
}

const PRESETS: [&str; 6] = ["p:1", "p:2", "pp:1,1", "gr:2,3", "gr:2,4", "f1"];

fn by_name(name: &str) -> GitPresentation {
    if name == "f1" {
        f1()
    } else {
        preset(name)
    }
}

fn small_degrees(p: &GitPresentation) -> Vec<Vec<i64>> {
    (0..p.degree_basis().len()).map(|_| 0..=2i64).multi_cartesian_product().filter(|d| d.iter().sum::<i64>() <= 2).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn degree_filter(seed in any::<u64>(), which in 0usize..PRESETS.len(), pick in any::<prop::sample::Index>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = by_name(PRESETS[which]);
        let degrees = small_degrees(&p);
        let delta = pick.get(&degrees).clone();
        let vdim = virtual_dimension(&delta, &p).unwrap();
        let e = loop {
            let e = rng.gen_range(0..=vdim + 2);
            if e != vdim {
                break e;
            }
        };
        let ins = random_insertion(&mut rng, p.rank(), e as u32, !p.positive_roots().is_empty());
        prop_assert!(non_eq(&p, delta, &ins).is_zero());
    }
}

#[test]
fn equivariant_is_polynomial_with_nonequivariant_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for name in ["p:1", "p:2", "pp:1,1", "gr:2,3", "f1"] {
        let p = by_name(name);
        for delta in small_degrees(&p) {
            let vdim = virtual_dimension(&delta, &p).unwrap();
            for e in [vdim - 1, vdim, vdim + 1, vdim + 2] {
                if e < 0 {
                    continue;
                }
                let ins = random_insertion(&mut rng, p.rank(), e as u32, !p.positive_roots().is_empty());
                let eq = equivariant_invariant(&InvariantRequest::new(&p, delta.clone(), ins.clone(), Mode::Equivariant))
                    .unwrap_or_else(|err| panic!("{name} {delta:?} e={e}: {err}"));
                assert!(eq.value.is_polynomial());
                let at_zero = eq.value.eval_q(&num::BigRational::from_integer(0.into())).unwrap();
                let ne = non_eq(&p, delta.clone(), &ins).as_constant().unwrap();
                assert_eq!(at_zero, ne, "{name} {delta:?} e={e}");
                // the z-degree is the excess degree of the insertion
                let nz = eq.value.numerator().iter().rposition(|c| !num::Zero::is_zero(c));
                if let Some(k) = nz {
                    assert_eq!(k as i64, e - vdim, "{name} {delta:?}");
                }
            }
        }
    }
}

/// Exchanging `δ̃₁ ↔ δ̃₂` with `z → -z` is the translation `u → u + zδ̃`,
/// which also moves the insertion to `P(u + zδ̃)`.
#[test]
fn splitting_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for name in ["p:1", "p:2", "pp:1,1", "gr:2,3"] {
        let p = by_name(name);
        for delta in small_degrees(&p) {
            let vdim = virtual_dimension(&delta, &p).unwrap();
            let ins = random_insertion(&mut rng, p.rank(), (vdim + 1) as u32, !p.positive_roots().is_empty());
            let r = equivariant_invariant(&InvariantRequest::new(&p, delta.clone(), ins.clone(), Mode::Equivariant)).unwrap();
            for lift in p.enumerate_lifts(&delta).unwrap() {
                let shift: Vec<ScalarZ> = lift.iter().map(|&c| ScalarZ::int_z(c)).collect();
                let mut req = InvariantRequest::new(&p, delta.clone(), ins.shift(&shift), Mode::Equivariant);
                req.allow_non_invariant = true;
                let shifted = equivariant_invariant(&req).unwrap_or_else(|e| panic!("{name} {lift:?}: {e}"));
                for t in r.breakdown.iter().filter(|t| t.lift == lift) {
                    let (a, b) = t.split.clone().unwrap();
                    let mirror = shifted.breakdown.iter().find(|s| s.lift == lift && s.split == Some((b.clone(), a.clone()))).unwrap();
                    assert_eq!(t.value.negate_z(), mirror.value, "{name} lift {lift:?} split {a:?}|{b:?}");
                }
            }
        }
    }
}

#[test]
fn breakdown_is_lexicographic() {
    let p = preset("gr:2,3");
    let ins = parse_polynomial("(u1+u2)^5", 2).unwrap();
    let r = equivariant_invariant(&InvariantRequest::new(&p, vec![1], ins, Mode::Equivariant)).unwrap();
    let keys: Vec<_> = r.breakdown.iter().map(|t| (t.lift.clone(), t.split.clone().unwrap().1)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn rank_one_grassmannian_is_projective_space() {
    for n in 2..=4usize {
        let gr = PresetId::Grassmannian(1, n).build().unwrap();
        let pr = PresetId::Projective(n).build().unwrap();
        for d in 0..=2i64 {
            for e in 0..=(n as u32) * 3 {
                let ins = parse_polynomial(&format!("u1^{e}"), 1).unwrap();
                assert_eq!(non_eq(&gr, vec![d], &ins), non_eq(&pr, vec![d], &ins));
                let eq = |p: &GitPresentation| {
                    equivariant_invariant(&InvariantRequest::new(p, vec![d], ins.clone(), Mode::Equivariant)).unwrap().value
                };
                assert_eq!(eq(&gr), eq(&pr));
            }
        }
    }
}

#[test]
fn torus_presentations_have_single_lifts() {
    for name in ["p:2", "pp:1,1", "pp:1,2"] {
        let p = preset(name);
        for delta in small_degrees(&p) {
            let vdim = virtual_dimension(&delta, &p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            let ins = random_insertion(&mut rng, p.rank(), vdim as u32, false);
            let r = nonequivariant_invariant(&InvariantRequest::new(&p, delta.clone(), ins, Mode::Nonequivariant)).unwrap();
            assert_eq!(r.breakdown.len(), 1);
            assert_eq!(r.breakdown[0].lift, delta);
            assert_eq!(r.breakdown[0].value, r.value);
        }
    }
}

#[test]
fn hirzebruch_surface_intersections() {
    // u1 is the fiber class, u2 the (-1)-curve
    let p = f1();
    let v = |s: &str| non_eq(&p, vec![0, 0], &parse_polynomial(s, 2).unwrap());
    assert_eq!(v("u1^2"), ScalarZ::zero());
    assert_eq!(v("u1*u2"), ScalarZ::one());
    assert_eq!(v("u2^2"), ScalarZ::from_int(-1));
    assert_eq!(v("(u1+u2)^2"), ScalarZ::one());
}

#[test]
fn dualize_flips_odd_insertions() {
    let p = preset("p:1");
    let ins = parse_polynomial("u1^3", 1).unwrap();
    let mut req = InvariantRequest::new(&p, vec![1], ins, Mode::Nonequivariant);
    req.dualize = true;
    assert_eq!(nonequivariant_invariant(&req).unwrap().value, ScalarZ::from_int(-1));
}
