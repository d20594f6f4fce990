use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Scalar, UniPoly};

/// An ordered list of variable names shared by a family of polynomials.
#[derive(Clone, Debug)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

/// Exponent vector, ordered graded-lexicographically (earlier variables
/// dominate within a degree).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial with rational coefficients over a declared variable
/// list. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !Zero::is_zero(&c) {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self, AlgebraError> {
        let i = vars.index(name).ok_or_else(|| AlgebraError::UnknownVariable(name.into()))?;
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        let mut p = MultiPoly::zero(vars);
        p.terms.insert(Monomial(exps), BigRational::one());
        Ok(p)
    }

    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = MultiPoly::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if Zero::is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if Zero::is_zero(e.get()) {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Indices of variables that occur with positive exponent.
    pub fn variables_used(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if Zero::is_zero(c) {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::RingMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::RingMismatch);
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, var: &str) -> Result<MultiPoly, AlgebraError> {
        let i = self.vars.index(var).ok_or_else(|| AlgebraError::UnknownVariable(var.into()))?;
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c * BigRational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// Replaces `var` by `value` everywhere.
    pub fn substitute(&self, var: &str, value: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        let i = self.vars.index(var).ok_or_else(|| AlgebraError::UnknownVariable(var.into()))?;
        if value.vars != self.vars {
            return Err(AlgebraError::RingMismatch);
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut exps = m.0.clone();
            exps[i] = 0;
            let rest = MultiPoly::from_terms(&self.vars, [(Monomial(exps), c.clone())]);
            out = out + rest * value.pow(e);
        }
        Ok(out)
    }

    /// Parses the text produced by `Display`, plus parentheses and `^` on
    /// parenthesized groups, e.g. `-2/735*(5*b2^2 - 12*b1*b3)`.
    pub fn parse(vars: &Vars, text: &str) -> Result<MultiPoly, AlgebraError> {
        let mut parser = PolyParser { vars, src: text.as_bytes(), pos: 0 };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(p)
    }

    pub(crate) fn to_unipoly(&self, var: usize) -> UniPoly {
        let mut coeffs = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigRational::zero());
            }
            coeffs[e] = c.clone();
        }
        UniPoly::new(coeffs)
    }

    pub(crate) fn from_unipoly(vars: &Vars, var: usize, u: &UniPoly) -> MultiPoly {
        MultiPoly::from_terms(
            vars,
            u.coeffs().iter().enumerate().map(|(e, c)| {
                let mut exps = vec![0; vars.len()];
                exps[var] = e as u32;
                (Monomial(exps), c.clone())
            }),
        )
    }
}

/// Monic gcd of two univariate polynomials over the rationals.
///
/// Both inputs must involve at most one variable, and the same one.
pub fn gcd_univariate(p: &MultiPoly, q: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
    if p.vars != q.vars {
        return Err(AlgebraError::RingMismatch);
    }
    let mut used = p.variables_used();
    for v in q.variables_used() {
        if !used.contains(&v) {
            used.push(v);
        }
    }
    if used.len() > 1 {
        return Err(AlgebraError::NotUnivariate(used.len()));
    }
    let var = used.first().copied().unwrap_or(0);
    if p.vars.is_empty() {
        // Constants only.
        let g = if p.is_zero() && q.is_zero() { BigRational::zero() } else { BigRational::one() };
        return Ok(MultiPoly::constant(&p.vars, g));
    }
    let g = p.to_unipoly(var).gcd(&q.to_unipoly(var));
    Ok(MultiPoly::from_unipoly(&p.vars, var, &g))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            let is_const = m.degree() == 0;
            if !a.is_one() || is_const {
                factors.push(a.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

struct PolyParser<'a> {
    vars: &'a Vars,
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn exponent(&mut self) -> Result<u32, AlgebraError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            u32::try_from(e).map_err(|_| self.error("exponent too large"))
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, AlgebraError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.integer()?
                } else {
                    BigInt::one()
                };
                if den.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                Ok(MultiPoly::constant(self.vars, BigRational::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let v = MultiPoly::var(self.vars, name)?;
                let e = self.exponent()?;
                Ok(v.pow(e))
            }
            _ => Err(self.error("unexpected token")),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        self.try_add(&rhs).expect("polynomials over different variable sets")
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self.try_add(&-rhs).expect("polynomials over different variable sets")
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        self.try_mul(&rhs).expect("polynomials over different variable sets")
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(mut self) -> MultiPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Scalar for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(&self.vars)
    }

    fn from_i64_like(&self, v: i64) -> Self {
        MultiPoly::constant(&self.vars, BigRational::from_integer(BigInt::from(v)))
    }

    fn from_ratio_like(&self, num: &BigInt, den: &BigInt) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::NotInvertible("0".into()));
        }
        Ok(MultiPoly::constant(&self.vars, BigRational::new(num.clone(), den.clone())))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ring(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;
    use proptest::prelude::*;

    fn xy() -> Vars {
        Vars::new(["a4", "a5", "x", "y"])
    }

    fn p(vars: &Vars, s: &str) -> MultiPoly {
        MultiPoly::parse(vars, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let v = xy();
        let prod = p(&v, "x + y").try_mul(&p(&v, "x - y")).unwrap();
        assert_eq!(prod, p(&v, "x^2 - y^2"));
        assert_eq!(prod.to_string(), "x^2 - y^2");
    }

    #[test]
    fn additive_inverse_is_empty() {
        let v = xy();
        let a = p(&v, "3*a4*x - 1/2*y^3 + 7");
        let z = a.try_add(&-a.clone()).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn binomial_square() {
        let v = xy();
        let s = p(&v, "a4*x + a5*y");
        assert_eq!(s.clone() * s, p(&v, "a4^2*x^2 + 2*a4*a5*x*y + a5^2*y^2"));
    }

    #[test]
    fn ring_mismatch() {
        let a = MultiPoly::var(&xy(), "x").unwrap();
        let b = MultiPoly::var(&Vars::new(["x"]), "x").unwrap();
        assert_eq!(a.try_add(&b), Err(AlgebraError::RingMismatch));
        assert_eq!(a.try_mul(&b), Err(AlgebraError::RingMismatch));
    }

    #[test]
    fn derivatives() {
        let v = Vars::new(["a3", "x", "y"]);
        assert_eq!(p(&v, "x^9").partial_derivative("x").unwrap(), p(&v, "9*x^8"));
        assert!(p(&v, "x^2").partial_derivative("y").unwrap().is_zero());
        assert_eq!(p(&v, "a3*x^2*y").partial_derivative("x").unwrap(), p(&v, "2*a3*x*y"));
        assert_eq!(
            p(&v, "x").partial_derivative("z"),
            Err(AlgebraError::UnknownVariable("z".into()))
        );
    }

    #[test]
    fn gcd_examples() {
        let v = Vars::new(["x"]);
        let a = p(&v, "(x - 1)^2*(x + 2)");
        let b = p(&v, "(x - 1)*(x + 3)");
        assert_eq!(gcd_univariate(&a, &b).unwrap(), p(&v, "x - 1"));
        let c = p(&v, "3*x^2 + 6");
        assert_eq!(gcd_univariate(&c, &MultiPoly::zero(&v)).unwrap(), p(&v, "x^2 + 2"));
        let w = Vars::new(["x", "y"]);
        assert_eq!(
            gcd_univariate(&p(&w, "x*y"), &p(&w, "x")),
            Err(AlgebraError::NotUnivariate(2))
        );
    }

    #[test]
    fn gcd_of_coprime_cubics_from_distinct_roots() {
        use rand::{Rng, SeedableRng};
        let v = Vars::new(["x"]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let from_roots = |lead: i64, rs: &[i64]| {
            rs.iter().fold(MultiPoly::constant(&v, rational(lead, 1)), |acc, r| {
                acc * p(&v, &format!("x - {r}"))
            })
        };
        for _ in 0..20 {
            let mut roots: Vec<i64> = Vec::new();
            while roots.len() < 6 {
                let r = rng.gen_range(-50..50);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            let a = from_roots(2, &roots[..3]);
            let b = from_roots(5, &roots[3..]);
            assert_eq!(gcd_univariate(&a, &b).unwrap(), MultiPoly::constant(&v, rational(1, 1)));
        }
    }

    #[test]
    fn substitution() {
        let v = Vars::new(["a6", "a7", "x"]);
        let q = p(&v, "a7^2*x + a6");
        assert_eq!(q.substitute("a7", &p(&v, "a6")).unwrap(), p(&v, "a6^2*x + a6"));
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        let v = Vars::new(["a", "b", "x"]);
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..4), -20i64..20, 1i64..5), 0..6).prop_map(
            move |ts| {
                MultiPoly::from_terms(
                    &v,
                    ts.into_iter().map(|((i, j, k), n, d)| {
                        (Monomial::from_exponents(vec![i, j, k]), rational(n, d))
                    }),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(a in arb_poly()) {
            let back = MultiPoly::parse(a.vars(), &a.to_string()).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn gcd_divides_both(a in arb_poly(), b in arb_poly()) {
            let v = Vars::new(["x"]);
            let ua = MultiPoly::from_terms(&v, a.terms().map(|(m, c)| (Monomial::from_exponents(vec![m.exponents()[2]]), c.clone())));
            let ub = MultiPoly::from_terms(&v, b.terms().map(|(m, c)| (Monomial::from_exponents(vec![m.exponents()[0] + m.exponents()[2]]), c.clone())));
            let g = gcd_univariate(&ua, &ub).unwrap();
            let (ga, gb, gg) = (ua.to_unipoly(0), ub.to_unipoly(0), g.to_unipoly(0));
            if !gg.is_zero() {
                let (qa, ra) = ga.div_rem(&gg);
                let (qb, rb) = gb.div_rem(&gg);
                prop_assert!(ra.is_zero());
                prop_assert!(rb.is_zero());
                prop_assert_eq!(qa.gcd(&qb).degree(), Some(0));
            }
        }
    }
}
