//! Nullforms of binary forms and pairs of forms, via exact root multiplicities.

mod lemmas;

use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{BigRational, RingContext, UniPoly};
use crate::forms::{transvectant, unimodular, BinaryForm, FormError};

pub use lemmas::{verify_lemma_expansions, LemmaCheck, LemmaReport};

#[derive(Debug, Error)]
pub enum NullconeError {
    #[error("Weyman's lemma needs d >= 4k - 4, got d = {d}, k = {k}")]
    WeymanBranch { d: u32, k: u32 },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Where a root of maximal multiplicity sits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The root `y = 0`.
    Infinity,
    /// The squarefree factor, in `x` with `y = 1`, whose roots all reach the maximum.
    Factor(UniPoly),
    /// No roots at all (a nonzero constant form).
    None,
    ZeroForm,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Infinity => write!(f, "point at infinity"),
            Witness::None => write!(f, "none"),
            Witness::ZeroForm => write!(f, "zero form"),
            Witness::Factor(p) => {
                let deg = p.degree().unwrap_or(0);
                let mut coeffs: Vec<BigRational> = p.coeffs().iter().rev().cloned().collect();
                coeffs.resize(deg + 1, BigRational::zero());
                write!(f, "{}", BinaryForm::new(coeffs).to_polynomial_string())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityReport {
    /// For the zero form this is `order + 1`.
    pub max_multiplicity: u32,
    pub witness: Witness,
    pub zero_form: bool,
}

/// A form split as `y^k · u(x, y)` with `u` dehomogenized at `y = 1`.
struct Split {
    y_power: u32,
    finite: UniPoly,
}

fn split(f: &BinaryForm<BigRational>) -> Option<Split> {
    let c = f.coeffs();
    let k = c.iter().position(|v| !v.is_zero())?;
    let n = c.len() - 1;
    // coefficient of x^j in u is c[n - j]
    let finite = UniPoly::new((0..=n - k).map(|j| c[n - j].clone()).collect());
    Some(Split { y_power: k as u32, finite })
}

/// `g_0 = u`, `g_{i+1} = gcd(g_i, g_i')`, stopping before the first constant.
/// The roots of `g_i` are exactly the roots of `u` of multiplicity `> i`.
fn gcd_chain(u: &UniPoly) -> Vec<UniPoly> {
    let mut out = Vec::new();
    let mut g = u.clone();
    while g.degree().is_some_and(|d| d > 0) {
        let next = g.gcd(&g.derivative());
        out.push(g);
        g = next;
    }
    out
}

/// The largest multiplicity of a projective root of `f`, by exact gcd chains.
pub fn root_multiplicity_max(f: &BinaryForm<BigRational>) -> MultiplicityReport {
    let Some(s) = split(f) else {
        return MultiplicityReport { max_multiplicity: f.order() + 1, witness: Witness::ZeroForm, zero_form: true };
    };
    let chain = gcd_chain(&s.finite);
    let finite = chain.len() as u32;
    let (max_multiplicity, witness) = if s.y_power == 0 && finite == 0 {
        (0, Witness::None)
    } else if s.y_power >= finite {
        (s.y_power, Witness::Infinity)
    } else {
        (finite, Witness::Factor(chain.last().expect("nonempty").squarefree_part().monic()))
    };
    MultiplicityReport { max_multiplicity, witness, zero_form: false }
}

/// True iff `f` has a root of multiplicity greater than half its order.
/// The zero form counts as a nullform.
pub fn is_nullform(f: &BinaryForm<BigRational>) -> bool {
    2 * root_multiplicity_max(f).max_multiplicity > f.order()
}

/// Roots of multiplicity at least `m`: whether infinity is one, and the
/// squarefree polynomial of the finite ones.
fn roots_at_least(s: &Split, m: u32) -> (bool, UniPoly) {
    let chain = gcd_chain(&s.finite);
    let finite = if m == 0 {
        UniPoly::one()
    } else {
        chain.get(m as usize - 1).map_or_else(UniPoly::one, |g| g.squarefree_part())
    };
    (s.y_power >= m, finite)
}

/// True iff `g ∈ V_n` and `h ∈ V_m` share a projective root of multiplicity
/// `> n/2` in `g` and `> m/2` in `h`. A zero form has every point as such a root.
pub fn pair_nullcone_test(g: &BinaryForm<BigRational>, h: &BinaryForm<BigRational>) -> bool {
    match (split(g), split(h)) {
        (None, None) => true,
        (None, Some(_)) => is_nullform(h),
        (Some(_), None) => is_nullform(g),
        (Some(sg), Some(sh)) => {
            let (ig, fg) = roots_at_least(&sg, g.order() / 2 + 1);
            let (ih, fh) = roots_at_least(&sh, h.order() / 2 + 1);
            (ig && ih) || fg.gcd(&fh).degree().is_some_and(|d| d > 0)
        }
    }
}

/// `g · (x^{⌊n/2⌋+1} r)` for a random cofactor `r` and random `g ∈ SL_2`,
/// drawn from a generator seeded with `seed`.
pub fn random_nullform<R: RingContext>(n: u32, ring: &R, seed: u64) -> BinaryForm<R::Elem> {
    random_nullform_with(n, ring, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_nullform_with<R: RingContext>(n: u32, ring: &R, rng: &mut dyn rand::RngCore) -> BinaryForm<R::Elem> {
    let m = n / 2 + 1;
    let one = ring.one();
    let head = BinaryForm::monomial(m, 0, &one);
    let cofactor = BinaryForm::new((0..=n - m).map(|_| ring.random(rng)).collect());
    let base = head.mul(&cofactor);
    let (s, t, u) = (ring.random(rng), ring.random(rng), ring.random(rng));
    base.act(&unimodular(&s, &t, &u)).expect("unimodular by construction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeymanVerdict {
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
}

impl WeymanVerdict {
    /// The implication holds (vacuously when the hypothesis fails).
    pub fn passes(&self) -> bool {
        !self.hypothesis_holds || self.conclusion_holds
    }
}

/// Checks Weyman's criterion for `f ∈ V_d`: if `(f,f)_{2k}, (f,f)_{2k+2}, …`
/// vanish (and for `d = 4k - 4` also `((f,f)_{2k-2}, f)_d`), then `f` has a
/// root of multiplicity `d - k + 1`.
pub fn weyman_check(f: &BinaryForm<BigRational>, k: u32) -> Result<WeymanVerdict, NullconeError> {
    let d = f.order();
    if k == 0 || d + 4 < 4 * k {
        return Err(NullconeError::WeymanBranch { d, k });
    }
    let mut hypothesis = true;
    let mut idx = 2 * k;
    while hypothesis && idx <= d {
        hypothesis = transvectant(f, f, idx)?.is_zero();
        idx += 2;
    }
    if hypothesis && d + 4 == 4 * k {
        let inner = transvectant(f, f, 2 * k - 2)?;
        hypothesis = transvectant(&inner, f, d)?.is_zero();
    }
    let conclusion = root_multiplicity_max(f).max_multiplicity >= d + 1 - k;
    Ok(WeymanVerdict { hypothesis_holds: hypothesis, conclusion_holds: conclusion })
}
