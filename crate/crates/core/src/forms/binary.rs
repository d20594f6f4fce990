use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::FormError;
use crate::algebra::{AlgebraError, Scalar};

/// A binary form `Σ c_i x^(n-i) y^i` stored with raw coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm<S> {
    coeffs: Vec<S>,
}

pub fn binomial(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// `a (a-1) ... (a-b+1)`.
pub(crate) fn falling(a: u32, b: u32) -> i128 {
    if b > a {
        return 0;
    }
    (0..b).fold(1i128, |acc, j| acc.checked_mul((a - j) as i128).expect("falling factorial overflow"))
}

impl<S: Scalar> BinaryForm<S> {
    /// Raw coefficients; `coeffs[i]` multiplies `x^(n-i) y^i`.
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a form of order n has n+1 coefficients");
        BinaryForm { coeffs }
    }

    /// `f = Σ C(n,i) a_i x^(n-i) y^i`.
    pub fn from_a_convention(a: Vec<S>) -> Self {
        let n = a.len() as u32 - 1;
        let coeffs = a
            .into_iter()
            .enumerate()
            .map(|(i, ai)| ai.from_i128_like(binomial(n, i as u32)) * ai)
            .collect();
        BinaryForm::new(coeffs)
    }

    /// An order-0 form holding one scalar.
    pub fn constant(c: S) -> Self {
        BinaryForm { coeffs: vec![c] }
    }

    pub fn zero_like(order: u32, sample: &S) -> Self {
        BinaryForm { coeffs: vec![sample.zero_like(); order as usize + 1] }
    }

    /// `x^(n-k) y^k`.
    pub fn monomial(order: u32, k: u32, sample: &S) -> Self {
        let mut f = Self::zero_like(order, sample);
        f.coeffs[k as usize] = sample.one_like();
        f
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// The value of an order-0 form.
    pub fn scalar(&self) -> Option<&S> {
        (self.coeffs.len() == 1).then(|| &self.coeffs[0])
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        self.coeffs[0].same_ring(&other.coeffs[0])
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BinaryForm<T> {
        BinaryForm { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        BinaryForm { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormError> {
        if self.order() != other.order() {
            return Err(FormError::OrderMismatch { expected: self.order(), found: other.order() });
        }
        if !self.same_ring(other) {
            return Err(AlgebraError::RingMismatch.into());
        }
        Ok(BinaryForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![self.coeffs[0].zero_like(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = BinaryForm::constant(self.coeffs[0].one_like());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates the form at `(x, y)`.
    pub fn eval(&self, x: &S, y: &S) -> S {
        let n = self.order();
        self.coeffs
            .iter()
            .enumerate()
            .fold(x.zero_like(), |acc, (i, c)| acc + c.clone() * x.pow(n - i as u32) * y.pow(i as u32))
    }

    /// The SL2 action `(g·f)(v) = f(g⁻¹ v)` for `g = [[a, b], [c, d]]`.
    pub fn act(&self, g: &[[S; 2]; 2]) -> Result<Self, FormError> {
        let [[a, b], [c, d]] = g;
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if det != a.one_like() {
            return Err(FormError::NotUnimodular);
        }
        // g⁻¹ (x, y) = (d x - b y, -c x + a y)
        let l1 = BinaryForm { coeffs: vec![d.clone(), -b.clone()] };
        let l2 = BinaryForm { coeffs: vec![-c.clone(), a.clone()] };
        let n = self.order();
        let p1: Vec<_> = (0..=n).map(|k| l1.pow(k)).collect();
        let p2: Vec<_> = (0..=n).map(|k| l2.pow(k)).collect();
        let mut out = BinaryForm::zero_like(n, a);
        for (i, ci) in self.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let term = p1[n as usize - i].mul(&p2[i]).scale(ci);
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

/// Precomputed integer constants of the `p`-th transvectant of forms of
/// orders `m` and `n`, embedded in the target ring.
#[derive(Clone, Debug)]
pub struct TransvectantPlan<S> {
    m: u32,
    n: u32,
    p: u32,
    /// `left[i][k']`: factor turning `g_{k'+i}` into the coefficient of
    /// `∂^p g / ∂x^{p-i} ∂y^i`.
    left: Vec<Vec<S>>,
    right: Vec<Vec<S>>,
    sign_binom: Vec<S>,
    prefactor: S,
}

impl<S: Scalar> TransvectantPlan<S> {
    pub fn new(m: u32, n: u32, p: u32, sample: &S) -> Result<Self, FormError> {
        if p > m.min(n) {
            return Err(FormError::IndexTooLarge { index: p, left: m, right: n });
        }
        let left = (0..=p)
            .map(|i| {
                (0..=m - p)
                    .map(|kk| {
                        let k = kk + i;
                        sample.from_i128_like(falling(m - k, p - i) * falling(k, i))
                    })
                    .collect()
            })
            .collect();
        let right = (0..=p)
            .map(|i| {
                (0..=n - p)
                    .map(|kk| {
                        let k = kk + p - i;
                        sample.from_i128_like(falling(n - k, i) * falling(k, p - i))
                    })
                    .collect()
            })
            .collect();
        let sign_binom = (0..=p)
            .map(|i| {
                let b = binomial(p, i);
                sample.from_i128_like(if i % 2 == 0 { b } else { -b })
            })
            .collect();
        let den = BigInt::from(falling(m, p)) * BigInt::from(falling(n, p));
        let prefactor = sample.from_ratio_like(&BigInt::from(1), &den)?;
        Ok(TransvectantPlan { m, n, p, left, right, sign_binom, prefactor })
    }

    pub fn apply(&self, g: &BinaryForm<S>, h: &BinaryForm<S>) -> BinaryForm<S> {
        debug_assert_eq!((g.order(), h.order()), (self.m, self.n));
        let (m, n, p) = (self.m as usize, self.n as usize, self.p as usize);
        let zero = g.coeffs[0].zero_like();
        let mut out = vec![zero.clone(); m + n - 2 * p + 1];
        let mut dg = vec![zero.clone(); m - p + 1];
        let mut dh = vec![zero.clone(); n - p + 1];
        for i in 0..=p {
            let mut any_g = false;
            for (kk, slot) in dg.iter_mut().enumerate() {
                *slot = g.coeffs[kk + i].clone() * self.left[i][kk].clone();
                any_g |= !slot.is_zero();
            }
            if !any_g {
                continue;
            }
            let mut any_h = false;
            for (kk, slot) in dh.iter_mut().enumerate() {
                *slot = h.coeffs[kk + p - i].clone() * self.right[i][kk].clone();
                any_h |= !slot.is_zero();
            }
            if !any_h {
                continue;
            }
            let sb = &self.sign_binom[i];
            for (a, ga) in dg.iter().enumerate() {
                if ga.is_zero() {
                    continue;
                }
                let ga = ga.clone() * sb.clone();
                for (b, hb) in dh.iter().enumerate() {
                    out[a + b] = out[a + b].clone() + ga.clone() * hb.clone();
                }
            }
        }
        for c in out.iter_mut() {
            *c = c.clone() * self.prefactor.clone();
        }
        BinaryForm { coeffs: out }
    }
}

/// The `p`-th transvectant `(g, h)_p`.
pub fn transvectant<S: Scalar>(
    g: &BinaryForm<S>,
    h: &BinaryForm<S>,
    p: u32,
) -> Result<BinaryForm<S>, FormError> {
    if !g.same_ring(h) {
        return Err(AlgebraError::RingMismatch.into());
    }
    let plan = TransvectantPlan::new(g.order(), h.order(), p, &g.coeffs[0])?;
    Ok(plan.apply(g, h))
}

impl<S: Scalar + fmt::Display> fmt::Display for BinaryForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.order())?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl<S: Scalar + fmt::Display> BinaryForm<S> {
    /// The form written out in `x` and `y`, highest power of `x` first.
    pub fn to_polynomial_string(&self) -> String {
        let n = self.order();
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            let power = |v: &str, e: u32| if e == 1 { v.to_string() } else { format!("{v}^{e}") };
            if n - i as u32 > 0 {
                factors.push(power("x", n - i as u32));
            }
            if i > 0 {
                factors.push(power("y", i as u32));
            }
            if mag != "1" || factors.is_empty() {
                let mag = if mag.contains('/') && !factors.is_empty() { format!("({mag})") } else { mag };
                factors.insert(0, mag);
            }
            out.push_str(&factors.join("*"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Parses `order: c0,c1,...,cn` with integer or `p/q` entries.
pub fn parse_form_literal(text: &str, a_convention: bool) -> Result<BinaryForm<BigRational>, FormError> {
    let bad = |msg: &str| FormError::Parse(format!("{msg} in `{text}`"));
    let (order, rest) = text.split_once(':').ok_or_else(|| bad("missing `:`"))?;
    let order: u32 = order.trim().parse().map_err(|_| bad("bad order"))?;
    let coeffs = rest
        .split(',')
        .map(|c| {
            let c = c.trim();
            let (num, den) = c.split_once('/').unwrap_or((c, "1"));
            let num: BigInt = num.trim().parse().map_err(|_| bad("bad coefficient"))?;
            let den: BigInt = den.trim().parse().map_err(|_| bad("bad coefficient"))?;
            if den == BigInt::from(0) {
                return Err(bad("zero denominator"));
            }
            Ok(BigRational::new(num, den))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.len() != order as usize + 1 {
        return Err(bad(&format!("expected {} coefficients, found {}", order + 1, coeffs.len())));
    }
    Ok(if a_convention { BinaryForm::from_a_convention(coeffs) } else { BinaryForm::new(coeffs) })
}
