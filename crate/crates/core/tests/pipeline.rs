use binvar::algebra::{Fp, PrimeField, RingContext, Scalar};
use binvar::forms::{catalog_for, evaluate_expr, BinaryForm, Catalog, CovariantExpr};
use binvar::modlinalg::{EchelonBasis, ModMatrix};
use binvar::pipeline::{
    certify_hsop, compute_dm, evaluation_matrix, find_basic_invariants, generate_candidate, ideal_membership_dim,
    jacobian_rank, krull_dimension, product_monomials, spanning_products, vanish_on_nullcone_sample, BasisRecord,
    CandidateGenerator, PipelineConfig, Session, Verdict,
};
use binvar::series::invariant_dimension;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn refs(cat: &Catalog, names: &[&str]) -> Vec<CovariantExpr> {
    names.iter().map(|n| cat.reference(n).unwrap()).collect()
}

fn named(cat: &Catalog, set: &str) -> Vec<(String, CovariantExpr)> {
    cat.set(set).unwrap().iter().map(|e| (e.name.clone(), cat.reference(&e.name).unwrap())).collect()
}

fn dim(n: u32, d: u32) -> usize {
    invariant_dimension(n, d).to_usize().unwrap()
}

const NONIC_DM: [(u32, usize); 9] = [(4, 2), (8, 5), (10, 5), (12, 14), (14, 17), (16, 21), (18, 25), (20, 2), (22, 1)];

#[test]
fn products_of_two_quartics() {
    let cat = catalog_for(9).unwrap();
    let basis: Vec<BasisRecord> = refs(&cat, &["j_4", "A_4"])
        .into_iter()
        .map(|expr| BasisRecord { degree: 4, expr, fingerprint: vec![] })
        .collect();
    let prods = spanning_products(&basis, 8);
    assert_eq!(prods.len(), 3);
    assert!(prods.iter().all(|e| e.degree() == 8 && e.is_invariant()));
    assert!(spanning_products(&basis, 6).is_empty());
}

#[test]
fn degree_twenty_monomial_count() {
    // coefficient of t^20 in the product of 1/(1 - t^d) over basis degrees below 20
    let mut degrees = Vec::new();
    for &(d, k) in NONIC_DM.iter().filter(|(d, _)| *d < 20) {
        degrees.extend(std::iter::repeat(d).take(k));
    }
    let mut series = vec![0usize; 21];
    series[0] = 1;
    for &d in &degrees {
        for i in d as usize..=20 {
            series[i] += series[i - d as usize];
        }
    }
    assert_eq!(series[20], 225);
    assert_eq!(product_monomials(&degrees, 20).len(), 225);
}

#[test]
fn evaluation_matrix_rows_are_invariant_values() {
    let cat = catalog_for(9).unwrap();
    let mut s = Session::new(&cat, PipelineConfig::with_seed(9)).unwrap();
    let pts = s.points(3).to_vec();
    let j4 = cat.reference("j_4").unwrap();
    let m = evaluation_matrix(std::slice::from_ref(&j4), &pts, &cat).unwrap();
    assert_eq!((m.n_rows(), m.n_cols()), (1, 3));
    for (c, f) in pts.iter().enumerate() {
        assert_eq!(m.get(0, c), evaluate_expr(&j4, f, &cat).unwrap().coeffs()[0].value());
    }
    // the same function written twice
    let sq = CovariantExpr::power(&j4, 2).unwrap();
    let prod = CovariantExpr::transvect(&j4, &j4, 0).unwrap();
    let pts = s.points(10).to_vec();
    assert_eq!(evaluation_matrix(&[sq, prod], &pts, &cat).unwrap().rank(), 1);
    assert!(evaluation_matrix(&[CovariantExpr::base(9)], &pts, &cat).is_err());
}

#[test]
fn catalog_spans_degrees_eight_and_ten() {
    let cat = catalog_for(9).unwrap();
    let mut s = Session::new(&cat, PipelineConfig::with_seed(4)).unwrap();
    let j4 = cat.reference("j_4").unwrap();
    let a4 = cat.reference("A_4").unwrap();
    let mut deg8 = refs(&cat, &["j_8", "A_8", "B_8", "C_8", "D_8"]);
    deg8.push(CovariantExpr::power(&j4, 2).unwrap());
    deg8.push(CovariantExpr::power(&a4, 2).unwrap());
    deg8.push(CovariantExpr::transvect(&a4, &j4, 0).unwrap());
    assert_eq!(s.matrix(&deg8, 18).unwrap().rank(), 8);
    assert_eq!(dim(9, 8), 8);
    let deg10 = refs(&cat, &["j_10", "A_10", "B_10", "C_10", "D_10"]);
    assert_eq!(s.matrix(&deg10, 15).unwrap().rank(), 5);
    assert_eq!(dim(9, 10), 5);
}

#[test]
fn candidates_saturate_degree_twelve() {
    let cat = catalog_for(9).unwrap();
    let mut s = Session::new(&cat, PipelineConfig::with_seed(21)).unwrap();
    let mut g = CandidateGenerator::new(&mut s).unwrap();
    let cands = g.candidates(&mut s, 12, 300, 38).unwrap();
    assert_eq!(cands.len(), 300);
    assert!(cands.iter().all(|(e, _)| e.degree() == 12 && e.is_invariant()));
    let rows: Vec<Vec<u32>> = cands.into_iter().map(|(_, v)| v).collect();
    let mut ech = EchelonBasis::new(32003, 38).unwrap();
    ech.extend_batch(&rows, None).unwrap();
    assert_eq!(ech.rank(), dim(9, 12));
}

#[test]
fn generated_candidates_are_reproducible() {
    for d in [4, 8, 12] {
        let e = generate_candidate(9, d, 5).unwrap();
        assert_eq!((e.degree(), e.order()), (d, 0));
        assert_eq!(e, generate_candidate(9, d, 5).unwrap());
    }
}

#[test]
fn nonic_quick_table() {
    let cat = catalog_for(9).unwrap();
    let mut s = Session::new(&cat, PipelineConfig::default()).unwrap();
    let (table, basis) = find_basic_invariants(&mut s, 14).unwrap();
    let expected: Vec<_> = NONIC_DM.iter().copied().filter(|(d, _)| *d <= 14).collect();
    assert_eq!(table.nonzero(), expected);
    assert_eq!(table.d(6), Some(0));
    assert_eq!(table.d(2), Some(0));
    assert_eq!(basis.len(), 43);
    for e in &table.entries {
        assert_eq!(e.dim, dim(9, e.degree));
        assert!(e.product_rank <= e.dim);
        assert_eq!(e.adjoined, e.d_m);
    }
}

#[test]
fn nonic_full_table_has_ninety_two_generators() {
    let cat = catalog_for(9).unwrap();
    let mut s = Session::new(&cat, PipelineConfig::default()).unwrap();
    let (table, basis) = find_basic_invariants(&mut s, 22).unwrap();
    assert_eq!(table.nonzero(), NONIC_DM.to_vec());
    assert_eq!(table.total(), 92);
    assert_eq!(basis.len(), 92);
    let e20 = table.entries.iter().find(|e| e.degree == 20).unwrap();
    assert_eq!((e20.dim, e20.product_rank), (217, 215));
}

#[test]
fn fingerprints_are_nonzero_and_independent_per_degree() {
    let cat = catalog_for(9).unwrap();
    let mut s = Session::new(&cat, PipelineConfig::with_seed(3)).unwrap();
    let (_, basis) = find_basic_invariants(&mut s, 12).unwrap();
    for d in [4, 8, 10, 12] {
        let rows: Vec<&BasisRecord> = basis.iter().filter(|r| r.degree == d).collect();
        assert!(rows.iter().all(|r| r.fingerprint.len() == 16 && r.fingerprint.iter().any(|&v| v != 0)));
        let ints: Vec<Vec<i64>> = rows.iter().map(|r| r.fingerprint.iter().map(|&v| v as i64).collect()).collect();
        assert_eq!(ModMatrix::from_rows(32003, 16, &ints).unwrap().rank(), rows.len(), "degree {d}");
    }
}

#[test]
fn table_is_stable_across_seeds_and_primes() {
    let cat = catalog_for(9).unwrap();
    let mut tables = Vec::new();
    for prime in [32003, 65521] {
        for seed in [11, 12, 13] {
            let cfg = PipelineConfig { prime, ..PipelineConfig::with_seed(seed) };
            let mut s = Session::new(&cat, cfg).unwrap();
            tables.push(find_basic_invariants(&mut s, 16).unwrap().0.nonzero());
        }
    }
    assert!(tables.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(tables[0].last(), Some(&(16, 21)));
}

#[test]
fn classical_sextic_generators() {
    let cat = catalog_for(6).unwrap();
    let mut s = Session::new(&cat, PipelineConfig::with_seed(2)).unwrap();
    let (table, _) = find_basic_invariants(&mut s, 15).unwrap();
    let degrees: Vec<u32> = table.nonzero().iter().map(|(d, _)| *d).collect();
    assert_eq!(degrees, vec![2, 4, 6, 10, 15]);
    assert!(table.nonzero().iter().all(|(_, k)| *k == 1));
    // dimension counting alone forces the low degrees
    assert_eq!(dim(6, 2), 1);
    assert_eq!(table.d(2), Some(dim(6, 2)));
    assert_eq!(table.d(15), Some(dim(6, 15)));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cat = catalog_for(9).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let mut s = Session::new(&cat, PipelineConfig::with_seed(8)).unwrap();
            let (table, basis) = find_basic_invariants(&mut s, 14).unwrap();
            (table.entries, basis.iter().map(|r| (r.expr.to_string(), r.fingerprint.clone())).collect::<Vec<_>>())
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn compute_dm_single_degree() {
    let cat = catalog_for(9).unwrap();
    let mut s = Session::new(&cat, PipelineConfig::default()).unwrap();
    let mut g = CandidateGenerator::new(&mut s).unwrap();
    let out4 = compute_dm(&mut s, &mut g, 4, &[]).unwrap();
    assert_eq!(out4.entry.d_m, 2);
    let out6 = compute_dm(&mut s, &mut g, 6, &out4.records).unwrap();
    assert_eq!((out6.entry.dim, out6.entry.d_m), (0, 0));
    let out8 = compute_dm(&mut s, &mut g, 8, &out4.records).unwrap();
    assert_eq!((out8.entry.dim, out8.entry.product_rank, out8.entry.d_m), (8, 3, 5));
    assert_eq!(out8.entry.points, 18);
}

/// `g'(0)` from the values `g(0), ..., g(d)` of a polynomial of degree `≤ d`.
fn derivative_at_zero(vals: &[Fp], field: &PrimeField) -> Fp {
    let d = vals.len() as i64 - 1;
    let inv = |x: i64| field.elem(x).inverse().unwrap();
    let mut acc = field.elem(0);
    for (k, v) in vals.iter().enumerate() {
        let k = k as i64;
        let w = if k == 0 {
            (1..=d).fold(field.elem(0), |s, m| s - inv(m))
        } else {
            let num = (1..=d).filter(|&j| j != k).fold(field.elem(1), |s, j| s * field.elem(-j));
            let den = (0..=d).filter(|&j| j != k).fold(field.elem(1), |s, j| s * field.elem(k - j));
            num * den.inverse().unwrap()
        };
        acc = acc + *v * w;
    }
    acc
}

#[test]
fn jacobian_matches_interpolated_gradients() {
    let cat = catalog_for(9).unwrap();
    let thm = refs(&cat, &["j_4", "B_8", "D_10", "j_12", "B_12", "j_14", "j_16"]);
    let field = PrimeField::new(10007).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = BinaryForm::new((0..10).map(|_| field.random(&mut rng)).collect::<Vec<_>>());
    let mut grad = Vec::new();
    for inv in &thm {
        let mut row = Vec::new();
        for i in 0..10 {
            let vals: Vec<Fp> = (0..=inv.degree() as i64)
                .map(|t| {
                    let mut c = f.coeffs().to_vec();
                    c[i] = c[i] + field.elem(t);
                    evaluate_expr(inv, &BinaryForm::new(c), &cat).unwrap().coeffs()[0]
                })
                .collect();
            row.push(derivative_at_zero(&vals, &field).value() as i64);
        }
        grad.push(row);
    }
    let oracle = ModMatrix::from_rows(10007, 10, &grad).unwrap().rank();
    assert_eq!(jacobian_rank(&thm, &f, &cat).unwrap(), oracle);
    assert_eq!(oracle, 7);
    // Euler: sum c_i dI/dc_i = deg(I) I
    let j4 = &thm[0];
    let value = evaluate_expr(j4, &f, &cat).unwrap().coeffs()[0];
    let euler = grad[0].iter().zip(f.coeffs()).fold(field.elem(0), |s, (g, c)| s + field.elem(*g) * *c);
    assert_eq!(euler, value * field.elem(4));
}

#[test]
fn jacobian_rank_of_the_theorem_set() {
    let cat = catalog_for(9).unwrap();
    let thm = refs(&cat, &["j_4", "B_8", "D_10", "j_12", "B_12", "j_14", "j_16"]);
    let mut s = Session::new(&cat, PipelineConfig::default()).unwrap();
    let ranks: Vec<usize> =
        s.points(5).to_vec().iter().map(|f| jacobian_rank(&thm, f, &cat).unwrap()).collect();
    assert!(ranks.iter().filter(|&&r| r == 7).count() >= 3);
    assert!(ranks.iter().all(|&r| r <= 7));
    let zero = BinaryForm::new(vec![Fp::new(0, 32003); 10]);
    assert_eq!(jacobian_rank(&thm[..1], &zero, &cat).unwrap(), 0);
}

#[test]
fn theorem_set_vanishes_exactly_on_sampled_nullforms() {
    let cat = catalog_for(9).unwrap();
    let thm = refs(&cat, &["j_4", "B_8", "D_10", "j_12", "B_12", "j_14", "j_16"]);
    let sample = vanish_on_nullcone_sample(&thm, &cat, 100, 7, 32003).unwrap();
    assert_eq!(sample.nullform_all_vanish, 100);
    assert!(sample.nonzero_on_nullform.is_empty());
    assert_eq!(sample.generic_all_vanish, 0);
    let alone = vanish_on_nullcone_sample(&thm[..1], &cat, 100, 7, 32003).unwrap();
    assert!(alone.generic_all_vanish <= 2);
}

#[test]
fn membership_dimensions_match_the_numerator() {
    let cat = catalog_for(9).unwrap();
    let thm = refs(&cat, &["j_4", "B_8", "D_10", "j_12", "B_12", "j_14", "j_16"]);
    let mut s = Session::new(&cat, PipelineConfig::default()).unwrap();
    let (_, basis) = find_basic_invariants(&mut s, 8).unwrap();
    let r4 = ideal_membership_dim(&mut s, &thm, &basis, 4).unwrap();
    assert_eq!((r4.dim_cap_h, r4.a_i_expected, r4.dim), (1, Some(1), 2));
    let r8 = ideal_membership_dim(&mut s, &thm, &basis, 8).unwrap();
    assert_eq!((r8.dim_cap_h, r8.a_i_expected, r8.dim), (3, Some(5), 8));
    let r12 = ideal_membership_dim(&mut s, &thm, &basis, 12).unwrap();
    assert_eq!(r12.a_i_expected, Some(17));
    assert_eq!(r12.dim_cap_h + 17, r12.dim);
    assert!([r4, r8, r12].iter().all(|r| r.consistent()));
}

#[test]
fn membership_needs_a_complete_basis() {
    let cat = catalog_for(9).unwrap();
    let thm = refs(&cat, &["j_4", "B_8", "D_10", "j_12", "B_12", "j_14", "j_16"]);
    let mut s = Session::new(&cat, PipelineConfig::default()).unwrap();
    let (_, basis) = find_basic_invariants(&mut s, 4).unwrap();
    assert!(ideal_membership_dim(&mut s, &thm, &basis, 12).is_err());
}

#[test]
fn theorem_set_is_certified() {
    let cat = catalog_for(9).unwrap();
    let mut s = Session::new(&cat, PipelineConfig::default()).unwrap();
    let report = certify_hsop(&mut s, &named(&cat, "thm"), &[4, 8, 12], 100).unwrap();
    assert_eq!(report.verdict, Verdict::CertifiedAtSamplingLevel, "{:?}", report.reasons);
    assert!(report.jacobian_ranks.contains(&7));
    assert_eq!(report.nullcone.as_ref().unwrap().nullform_all_vanish, 100);
    assert_eq!(report.membership.len(), 3);
}

#[test]
fn broken_candidate_sets_are_refuted() {
    let cat = catalog_for(9).unwrap();
    let mut s = Session::new(&cat, PipelineConfig::default()).unwrap();
    let mut six = named(&cat, "thm");
    six.pop();
    let report = certify_hsop(&mut s, &six, &[], 10).unwrap();
    assert_eq!(report.verdict, Verdict::Refuted);

    let mut swapped = named(&cat, "thm");
    let j4 = cat.reference("j_4").unwrap();
    *swapped.last_mut().unwrap() = ("j_4^4".into(), CovariantExpr::power(&j4, 4).unwrap());
    let report = certify_hsop(&mut s, &swapped, &[], 10).unwrap();
    assert_eq!(report.verdict, Verdict::Refuted);
    assert!(report.jacobian_ranks.iter().all(|&r| r <= 6));
}

#[test]
fn small_order_parameter_systems() {
    for n in [2, 3, 6, 7] {
        let cat = catalog_for(n).unwrap();
        let hsop: Vec<CovariantExpr> = cat.hsop().iter().map(|e| cat.reference(&e.name).unwrap()).collect();
        assert_eq!(hsop.len(), krull_dimension(n));
        let sample = vanish_on_nullcone_sample(&hsop, &cat, 50, n as u64, 32003).unwrap();
        assert_eq!(sample.nullform_all_vanish, 50, "n = {n}");
        let mut s = Session::new(&cat, PipelineConfig::default()).unwrap();
        let f = s.points(1)[0].clone();
        assert_eq!(jacobian_rank(&hsop, &f, &cat).unwrap(), krull_dimension(n), "n = {n}");
        assert!(f.coeffs()[0].same_ring(&f.coeffs()[1]));
    }
}

#[test]
#[ignore = "extended: about a minute in release builds"]
fn degree_thirty_six_lies_in_the_enlarged_ideal() {
    let cat = catalog_for(9).unwrap();
    let hp = refs(&cat, &["j_4", "A_4", "B_8", "D_10", "j_12", "B_12", "j_14", "j_16"]);
    let mut s = Session::new(&cat, PipelineConfig::default()).unwrap();
    let (table, basis) = find_basic_invariants(&mut s, 32).unwrap();
    assert_eq!(table.total(), 92);
    let r = ideal_membership_dim(&mut s, &hp, &basis, 36).unwrap();
    assert_eq!((r.dim_cap_h, r.dim), (3811, 3811));
}
