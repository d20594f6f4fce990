use serde::Serialize;

use crate::algebra::{rational, MultiPoly, Vars};
use crate::forms::{binomial, transvectant, BinaryForm};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub lemma: String,
    pub item: String,
    pub passed: bool,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LemmaCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn compare(&mut self, lemma: &str, item: impl Into<String>, expected: &MultiPoly, found: &MultiPoly) {
        self.checks.push(LemmaCheck {
            lemma: lemma.to_string(),
            item: item.into(),
            passed: expected == found,
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
}

type Form = BinaryForm<MultiPoly>;

struct Ctx {
    vars: Vars,
}

impl Ctx {
    fn new<I: IntoIterator<Item = String>>(names: I) -> Self {
        Ctx { vars: Vars::new(names) }
    }

    fn poly(&self, text: &str) -> MultiPoly {
        MultiPoly::parse(&self.vars, text).unwrap_or_else(|e| panic!("bad transcription `{text}`: {e}"))
    }

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero(&self.vars)
    }

    /// A form given by raw coefficients: `(k, text)` is the coefficient of `x^{n-k} y^k`.
    fn raw(&self, order: u32, entries: &[(usize, &str)]) -> Form {
        let mut c = vec![self.zero(); order as usize + 1];
        for &(k, text) in entries {
            c[k] = self.poly(text);
        }
        BinaryForm::new(c)
    }

    /// `Σ binom(n,i) a_i x^{n-i} y^i` with `a_i` overridden where listed.
    fn generic(&self, n: u32, overrides: &[(usize, &str)]) -> Form {
        let a = (0..=n as usize)
            .map(|i| match overrides.iter().find(|o| o.0 == i) {
                Some(&(_, text)) => self.poly(text),
                None => self.poly(&format!("a{i}")),
            })
            .collect();
        BinaryForm::from_a_convention(a)
    }
}

fn tr(g: &Form, h: &Form, p: u32) -> Form {
    transvectant(g, h, p).expect("index within range")
}

fn monomial_name(order: u32, k: usize) -> String {
    let (ex, ey) = (order as usize - k, k);
    let part = |v: &str, e: usize| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    };
    match (ex, ey) {
        (0, 0) => "1".into(),
        (_, 0) => part("x", ex),
        (0, _) => part("y", ey),
        _ => format!("{}*{}", part("x", ex), part("y", ey)),
    }
}

fn check_coeffs(report: &mut LemmaReport, lemma: &str, name: &str, ctx: &Ctx, form: &Form, expected: &[(usize, &str)]) {
    for &(k, text) in expected {
        report.compare(
            lemma,
            format!("{name}: coefficient of {}", monomial_name(form.order(), k)),
            &ctx.poly(text),
            form.coeff(k),
        );
    }
}

fn check_scalar(report: &mut LemmaReport, lemma: &str, name: &str, ctx: &Ctx, form: &Form, expected: &str) {
    assert_eq!(form.order(), 0, "{name} is not an invariant");
    report.compare(lemma, name, &ctx.poly(expected), form.coeff(0));
}

fn nonic_vars() -> Ctx {
    Ctx::new((0..=9).map(|i| format!("a{i}")))
}

fn nullform_case_i(report: &mut LemmaReport) {
    const L: &str = "nullform (i)";
    let ctx = nonic_vars();
    let f = ctx.generic(9, &[]);
    let x2 = ctx.raw(2, &[(0, "1")]);
    let p = tr(&f, &x2, 2);
    for i in 2..=9usize {
        let c = rational(binomial(9, i as u32) as i64 * (i * (i - 1)) as i64, 72);
        let expected = ctx.poly(&format!("a{i}")).scale(&c);
        report.compare(L, format!("p = (f,x^2)_2: coefficient of {}", monomial_name(7, i - 2)), &expected, p.coeff(i - 2));
    }
    let zeroed: Vec<(usize, &str)> = (6..=9).map(|i| (i, "0")).collect();
    let f = ctx.generic(9, &zeroed);
    let l = tr(&f, &f, 8);
    check_coeffs(report, L, "l = (f,f)_8 with a6..a9 = 0", &ctx, &l, &[
        (2, "70*a5^2"),
        (1, "28*a4*a5"),
        (0, "70*a4^2 - 112*a3*a5"),
    ]);
}

fn nullform_case_ii_1(report: &mut LemmaReport) {
    const L: &str = "nullform (ii) case 1";
    let ctx = nonic_vars();
    let f = ctx.generic(9, &[]);
    let x6 = ctx.raw(6, &[(0, "1")]);
    let r = tr(&f, &x6, 6);
    check_coeffs(report, L, "r = (f,x^6)_6", &ctx, &r, &[(3, "a9"), (2, "3*a8"), (1, "3*a7"), (0, "a6")]);

    let f = ctx.generic(9, &[(8, "0"), (9, "0")]);
    let q = tr(&f, &f, 6);
    check_coeffs(report, L, "q = (f,f)_6 with a8 = a9 = 0", &ctx, &q, &[
        (6, "-20*a6^2 + 30*a5*a7"),
        (5, "-30*a5*a6 + 54*a4*a7"),
        (4, "-90*a5^2 + 114*a4*a6 - 12*a3*a7"),
        (3, "-72*a4*a5 + 124*a3*a6 - 60*a2*a7"),
        (2, "-90*a4^2 + 114*a3*a5 - 12*a2*a6 - 18*a1*a7"),
        (1, "-30*a3*a4 + 54*a2*a5 - 30*a1*a6 + 6*a0*a7"),
        (0, "-20*a3^2 + 30*a2*a4 - 12*a1*a5 + 2*a0*a6"),
    ]);
    let l = tr(&f, &f, 8);
    check_coeffs(report, L, "l = (f,f)_8 with a8 = a9 = 0", &ctx, &l, &[
        (2, "70*a5^2 - 112*a4*a6 + 56*a3*a7"),
        (1, "28*a4*a5 - 56*a3*a6 + 40*a2*a7"),
        (0, "70*a4^2 - 112*a3*a5 + 56*a2*a6 - 16*a1*a7"),
    ]);

    // The solution with a7 != 0, scaled to a7 = 1 (every a_i is homogeneous
    // of degree 1 in a6, a7), makes q vanish identically.
    let f = ctx.generic(9, &[
        (9, "0"),
        (8, "0"),
        (7, "1"),
        (5, "2/3*a6^2"),
        (4, "10/27*a6^3"),
        (3, "5/27*a6^4"),
        (2, "7/81*a6^5"),
        (1, "28/729*a6^6"),
        (0, "4/243*a6^7"),
    ]);
    let q = tr(&f, &f, 6);
    let l = tr(&f, &f, 8);
    for (name, form) in [("q at the a7 != 0 solution", &q), ("l at the a7 != 0 solution", &l)] {
        for k in 0..=form.order() as usize {
            report.compare(L, format!("{name}: coefficient of {}", monomial_name(form.order(), k)), &ctx.zero(), form.coeff(k));
        }
    }
}

fn nullform_case_ii_2(report: &mut LemmaReport) {
    const L: &str = "nullform (ii) case 2";
    let ctx = nonic_vars();
    let f = ctx.generic(9, &[]);
    let x5y = ctx.raw(6, &[(1, "1")]);
    let r = tr(&f, &x5y, 6);
    check_coeffs(report, L, "r = (f,x^5*y)_6", &ctx, &r, &[(3, "-a8"), (2, "-3*a7"), (1, "-3*a6"), (0, "-a5")]);

    let f = ctx.generic(9, &[(7, "0"), (8, "0")]);
    let q = tr(&f, &f, 6);
    check_coeffs(report, L, "q = (f,f)_6 with a7 = a8 = 0", &ctx, &q, &[
        (6, "-20*a6^2 + 2*a3*a9"),
        (5, "-30*a5*a6 + 6*a2*a9"),
        (4, "-90*a5^2 + 114*a4*a6 + 6*a1*a9"),
        (2, "-90*a4^2 + 114*a3*a5 - 12*a2*a6"),
        (1, "-30*a3*a4 + 54*a2*a5 - 30*a1*a6"),
    ]);
    let l = tr(&f, &f, 8);
    check_coeffs(report, L, "l = (f,f)_8 with a7 = a8 = 0", &ctx, &l, &[(2, "70*a5^2 - 112*a4*a6 + 2*a1*a9")]);

    // d_i is the coefficient of x^i y^{6-i} in q, c that of y^2 in l
    let d = |i: usize| q.coeff(6 - i).clone();
    let c = l.coeff(2).clone();
    let v = |name: &str| ctx.poly(name);
    let lhs = d(5).scale(&rational(5, 1)) * v("a9");
    let rhs = d(0).scale(&rational(-75, 1)) * v("a4") + d(1).scale(&rational(45, 1)) * v("a5")
        - v("a6") * (c.scale(&rational(9, 1)) + d(2).scale(&rational(22, 1)));
    report.compare(L, "5*d5*a9 = -75*a4*d0 + 45*a5*d1 - a6*(9*c + 22*d2)", &lhs, &rhs);
}

fn nullform_case_ii_3(report: &mut LemmaReport) {
    const L: &str = "nullform (ii) case 3";
    let ctx = nonic_vars();
    let f = ctx.generic(9, &[]);
    let g = ctx.raw(6, &[(1, "1"), (2, "1")]);
    let r = tr(&f, &g, 6);
    check_coeffs(report, L, "r = (f,x^4*y*(x+y))_6", &ctx, &r, &[
        (3, "a7 - a8"),
        (2, "3*(a6 - a7)"),
        (1, "3*(a5 - a6)"),
        (0, "a4 - a5"),
    ]);

    let f = ctx.generic(9, &[(7, "a6"), (8, "a6")]);
    let q = tr(&f, &f, 6);
    check_coeffs(report, L, "q = (f,f)_6 with a8 = a7 = a6", &ctx, &q, &[
        (6, "-2*(6*a4*a6 - 15*a5*a6 + 10*a6^2 - a3*a9)"),
        (5, "-6*(5*a3*a6 - 9*a4*a6 + 5*a5*a6 - a2*a9)"),
        (4, "-6*(15*a5^2 + 3*a2*a6 + 2*a3*a6 - 19*a4*a6 - a1*a9)"),
        (3, "-2*(36*a4*a5 - 3*a1*a6 + 30*a2*a6 - 62*a3*a6 - a0*a9)"),
        (2, "-6*(15*a4^2 - 19*a3*a5 - a0*a6 + 3*a1*a6 + 2*a2*a6)"),
        (1, "-6*(5*a3*a4 - 9*a2*a5 - a0*a6 + 5*a1*a6)"),
        (0, "-2*(10*a3^2 - 15*a2*a4 + 6*a1*a5 - a0*a6)"),
    ]);
    let l = tr(&f, &f, 8);
    check_coeffs(report, L, "l = (f,f)_8 with a8 = a7 = a6", &ctx, &l, &[
        (2, "2*(35*a5^2 - 8*a2*a6 + 28*a3*a6 - 56*a4*a6 + a1*a9)"),
        (1, "2*(14*a4*a5 - 7*a1*a6 + 20*a2*a6 - 28*a3*a6 + a0*a9)"),
        (0, "2*(35*a4^2 - 56*a3*a5 + a0*a6 - 8*a1*a6 + 28*a2*a6)"),
    ]);
    let p1 = ctx.poly("15*a4^2 - 19*a3*a5 - a0*a6 + 3*a1*a6 + 2*a2*a6");
    let p2 = ctx.poly("5*a3*a4 - 9*a2*a5 - a0*a6 + 5*a1*a6");
    let sixth = rational(-1, 6);
    report.compare(L, "p1 = -(coefficient of x^4*y^2 in q)/6", &p1, &q.coeff(2).scale(&sixth));
    report.compare(L, "p2 = -(coefficient of x^5*y in q)/6", &p2, &q.coeff(1).scale(&sixth));
}

fn nullsmall_case_2(report: &mut LemmaReport) {
    const L: &str = "nullcone generators, case l = x^2";
    let ctx = nonic_vars();
    let f = ctx.generic(9, &[]);
    let l = ctx.raw(2, &[(0, "1")]);
    let p = tr(&f, &l, 2);
    let a20 = tr(&p.pow(2), &l.pow(7), 14);
    check_scalar(report, L, "A_20 = (p^2,l^7)_14", &ctx, &a20, "a9^2");
    let j16 = tr(&tr(&p, &p, 2), &l.pow(5), 10);
    check_scalar(report, L, "j_16 = ((p,p)_2,l^5)_10", &ctx, &j16, "-2*(a8^2 - a7*a9)");
    let b12 = tr(&tr(&p, &p, 4), &l.pow(3), 6);
    check_scalar(report, L, "B_12 = ((p,p)_4,l^3)_6", &ctx, &b12, "2*(3*a7^2 - 4*a6*a8 + a5*a9)");
    let a8 = tr(&tr(&p, &p, 6), &l, 2);
    check_scalar(report, L, "A_8 = ((p,p)_6,l)_2", &ctx, &a8, "-2*(10*a6^2 - 15*a5*a7 + 6*a4*a8 - a3*a9)");
}

fn pair_quadratic_septic(report: &mut LemmaReport) {
    const L: &str = "V_2 + V_7 pairs";
    let ctx = Ctx::new((1..=4).map(|i| format!("b{i}")));
    let g = ctx.raw(2, &[(0, "1")]);
    let h = ctx.raw(7, &[(4, "b1"), (5, "b2"), (6, "b3"), (7, "b4")]);
    check_scalar(report, L, "((h,h)_6,g)_2", &ctx, &tr(&tr(&h, &h, 6), &g, 2), "-4/245*b1^2");
    check_scalar(report, L, "((h,h)_4,g^3)_6", &ctx, &tr(&tr(&h, &h, 4), &g.pow(3), 6), "2/735*(5*b2^2 - 12*b1*b3)");
    check_scalar(report, L, "((h,h)_2,g^5)_10", &ctx, &tr(&tr(&h, &h, 2), &g.pow(5), 10), "-2/147*(3*b3^2 - 7*b2*b4)");
    check_scalar(report, L, "(h^2,g^7)_14", &ctx, &tr(&h.pow(2), &g.pow(7), 14), "b4^2");
}

fn pair_sextic_cubic(report: &mut LemmaReport) {
    const L: &str = "V_6 + V_3 pairs";
    let ctx = Ctx::new((1..=3).map(|i| format!("b{i}")));
    let g = ctx.raw(6, &[(0, "b1"), (1, "b2"), (2, "b3")]);

    let h = ctx.raw(3, &[(3, "1")]);
    let lemma = format!("{L}, h = y^3");
    check_scalar(report, &lemma, "((g^2,g)_6,h^2)_6", &ctx, &tr(&tr(&g.pow(2), &g, 6), &h.pow(2), 6), "1/495*b3^3");
    let inner = tr(&tr(&g, &g, 2), &g, 1);
    check_scalar(report, &lemma, "(((g,g)_2,g)_1,h^4)_12", &ctx, &tr(&inner, &h.pow(4), 12), "-1/540*b2*(5*b2^2 - 18*b1*b3)");
    check_scalar(report, &lemma, "(g,h^2)_6", &ctx, &tr(&g, &h.pow(2), 6), "b1");

    let h = ctx.raw(3, &[(2, "1")]);
    let lemma = format!("{L}, h = x*y^2");
    check_scalar(report, &lemma, "(g,h^2)_6", &ctx, &tr(&g, &h.pow(2), 6), "1/15*b3");
    check_scalar(report, &lemma, "(g,(h,h)_2^3)_6", &ctx, &tr(&g, &tr(&h, &h, 2).pow(3), 6), "-8/729*b1");
    check_scalar(report, &lemma, "(g,(h^3,h)_3)_6", &ctx, &tr(&g, &tr(&h.pow(3), &h, 3), 6), "1/84*b2");
}

/// Recomputes every displayed expansion in the nullcone lemmas over symbolic
/// coefficients and compares it with its transcription.
pub fn verify_lemma_expansions() -> LemmaReport {
    let mut report = LemmaReport::default();
    nullform_case_i(&mut report);
    nullform_case_ii_1(&mut report);
    nullform_case_ii_2(&mut report);
    nullform_case_ii_3(&mut report);
    nullsmall_case_2(&mut report);
    pair_quadratic_septic(&mut report);
    pair_sextic_cubic(&mut report);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_expansion_matches() {
        let report = verify_lemma_expansions();
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(report.checks.len() > 60);
    }

    #[test]
    fn a_corrupted_transcription_is_reported() {
        let mut report = LemmaReport::default();
        let ctx = Ctx::new(["b1".to_string()]);
        let g = ctx.raw(0, &[(0, "b1^2")]);
        check_scalar(&mut report, "test", "wrong", &ctx, &g, "2*b1^2");
        assert!(!report.all_passed());
        assert_eq!(report.failures().count(), 1);
    }
}
