use std::time::Instant;

use binvar::algebra::{rational, BigRational, Fp, PrimeField, Rationals};
use binvar::forms::{catalog_for, unimodular, BinaryForm, Evaluator};
use binvar::nullcone::{
    is_nullform, pair_nullcone_test, random_nullform, root_multiplicity_max, verify_lemma_expansions, weyman_check,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(v: i64) -> BigRational {
    rational(v, 1)
}

fn random_sl2(rng: &mut ChaCha8Rng) -> [[BigRational; 2]; 2] {
    let mut r = || rational(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    unimodular(&r(), &r(), &r())
}

/// Product of `(b x - a y)^m` over the given roots `(a : b)` with multiplicities.
fn from_roots(roots: &[((i64, i64), u32)]) -> BinaryForm<BigRational> {
    let mut f = BinaryForm::constant(q(1));
    for &((a, b), m) in roots {
        let lin = BinaryForm::new(vec![q(b), q(-a)]);
        f = f.mul(&lin.pow(m));
    }
    f
}

#[test]
fn moved_nullform_stays_a_nullform() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x6y3 = BinaryForm::monomial(9, 3, &q(1));
    for _ in 0..10 {
        let g = random_sl2(&mut rng);
        let moved = x6y3.act(&g).unwrap();
        assert!(is_nullform(&moved));
        assert_eq!(root_multiplicity_max(&moved).max_multiplicity, 6);
    }
}

#[test]
fn random_nullforms_are_deterministic_nullforms() {
    for seed in 0..30 {
        let f = random_nullform(9, &Rationals::default(), seed);
        assert_eq!(f, random_nullform(9, &Rationals::default(), seed));
        assert!(is_nullform(&f), "seed {seed}");
    }
    let a = random_nullform(9, &PrimeField::default(), 5);
    assert_eq!(a, random_nullform(9, &PrimeField::default(), 5));
}

#[test]
fn low_degree_invariants_vanish_on_nullforms_mod_p() {
    let cat = catalog_for(9).unwrap();
    let invs: Vec<_> = cat.invariants().filter(|e| e.degree <= 12).collect();
    assert_eq!(invs.len(), 17);
    let exprs: Vec<_> = invs.iter().map(|e| cat.reference(&e.name).unwrap()).collect();
    let field = PrimeField::default();
    let mut ev = Evaluator::new(&cat);
    for seed in 0..50 {
        let f: BinaryForm<Fp> = random_nullform(9, &field, seed);
        for (v, e) in ev.eval_point(&exprs, &f).unwrap().iter().zip(&invs) {
            assert!(v.is_zero(), "{} at seed {seed}", e.name);
        }
    }
}

#[test]
fn every_catalog_invariant_vanishes_on_rational_nullforms() {
    let start = Instant::now();
    for n in [6, 9] {
        let cat = catalog_for(n).unwrap();
        let invs: Vec<_> = cat.invariants().collect();
        let exprs: Vec<_> = invs.iter().map(|e| cat.reference(&e.name).unwrap()).collect();
        let ring = Rationals { bound: 2 };
        for seed in 0..25 {
            let f = random_nullform(n, &ring, seed);
            assert!(is_nullform(&f));
            let mut ev = Evaluator::new(&cat);
            for (v, e) in ev.eval_point(&exprs, &f).unwrap().iter().zip(&invs) {
                assert!(v.is_zero(), "n={n} {} at seed {seed}", e.name);
            }
        }
    }
    eprintln!("rational nullform sweep took {:?}", start.elapsed());
}

#[test]
fn generic_forms_are_not_nullforms() {
    let cat = catalog_for(9).unwrap();
    let j4 = cat.reference("j_4").unwrap();
    let f = from_roots(&[((1, 1), 1), ((2, 1), 1), ((3, 1), 1), ((-1, 2), 1), ((5, 3), 1), ((0, 1), 1), ((1, 0), 1), ((7, 2), 1), ((-4, 1), 1)]);
    assert!(!is_nullform(&f));
    assert!(!binvar::forms::evaluate_expr(&j4, &f, &cat).unwrap().is_zero());
}

#[test]
fn lemma_expansions() {
    let report = verify_lemma_expansions();
    assert!(report.all_passed(), "{:#?}", report.failures().collect::<Vec<_>>());
    let find = |item: &str| report.checks.iter().find(|c| c.item == item).unwrap_or_else(|| panic!("{item}"));
    assert_eq!(find("(h^2,g^7)_14").expected, "b4^2");
    let c = report.checks.iter().find(|c| c.lemma.ends_with("h = x*y^2") && c.item == "(g,(h,h)_2^3)_6").unwrap();
    assert!(c.passed && c.expected.contains("8/729"));
    let y2 = find("l = (f,f)_8 with a7 = a8 = 0: coefficient of y^2");
    assert!(y2.passed);
}

fn structured_form() -> impl Strategy<Value = Vec<((i64, i64), u32)>> {
    prop::collection::vec(((-3i64..=3, 0i64..=2), 1u32..=6), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multiplicity_is_sl2_invariant(roots in structured_form(), seed in any::<u64>()) {
        let f = from_roots(&roots);
        prop_assume!(!f.is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_sl2(&mut rng);
        let moved = f.act(&g).unwrap();
        prop_assert_eq!(root_multiplicity_max(&f).max_multiplicity, root_multiplicity_max(&moved).max_multiplicity);
    }

    #[test]
    fn pair_test_is_symmetric(a in structured_form(), b in structured_form()) {
        let (g, h) = (from_roots(&a), from_roots(&b));
        prop_assert_eq!(pair_nullcone_test(&g, &h), pair_nullcone_test(&h, &g));
    }

    #[test]
    fn weyman_implication_holds(roots in structured_form(), seed in any::<u64>()) {
        let f = from_roots(&roots);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = f.act(&random_sl2(&mut rng)).unwrap();
        let d = f.order();
        for k in 1..=(d + 4) / 4 {
            let v = weyman_check(&f, k).unwrap();
            prop_assert!(v.passes(), "d={} k={} {:?}", d, k, v);
        }
    }
}
