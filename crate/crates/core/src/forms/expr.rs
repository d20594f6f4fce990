use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{Catalog, FormError};

/// A covariant of the generic form `f`, written as a tree of transvectants
/// and powers. Nodes are shared through `Arc`, and every node carries its
/// order, its degree in the coefficients of `f`, and a structural hash.
#[derive(Clone)]
pub struct CovariantExpr(Arc<Node>);

struct Node {
    kind: ExprKind,
    base_order: u32,
    order: u32,
    degree: u32,
    hash: u64,
}

#[derive(Clone, PartialEq, Eq)]
pub enum ExprKind {
    Base,
    Transvect(CovariantExpr, CovariantExpr, u32),
    Power(CovariantExpr, u32),
    Named(String),
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn combine(h: u64, v: u64) -> u64 {
    splitmix(h.rotate_left(17) ^ v)
}

fn name_hash(name: &str) -> u64 {
    // FNV-1a
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

impl CovariantExpr {
    fn make(kind: ExprKind, base_order: u32, order: u32, degree: u32) -> Self {
        let hash = match &kind {
            ExprKind::Base => combine(1, base_order as u64),
            ExprKind::Transvect(a, b, p) => combine(combine(combine(2, a.hash()), b.hash()), *p as u64),
            ExprKind::Power(a, k) => combine(combine(3, a.hash()), *k as u64),
            ExprKind::Named(name) => combine(combine(4, name_hash(name)), base_order as u64),
        };
        CovariantExpr(Arc::new(Node { kind, base_order, order, degree, hash }))
    }

    /// The generic form `f` of order `n`.
    pub fn base(n: u32) -> Self {
        Self::make(ExprKind::Base, n, n, 1)
    }

    pub fn transvect(a: &CovariantExpr, b: &CovariantExpr, p: u32) -> Result<Self, FormError> {
        if a.base_order() != b.base_order() {
            return Err(FormError::OrderMismatch { expected: a.base_order(), found: b.base_order() });
        }
        if p > a.order().min(b.order()) {
            return Err(FormError::IndexTooLarge { index: p, left: a.order(), right: b.order() });
        }
        Ok(Self::make(
            ExprKind::Transvect(a.clone(), b.clone(), p),
            a.base_order(),
            a.order() + b.order() - 2 * p,
            a.degree() + b.degree(),
        ))
    }

    pub fn power(a: &CovariantExpr, k: u32) -> Result<Self, FormError> {
        if k == 0 {
            return Err(FormError::Parse("power exponent must be at least 1".into()));
        }
        Ok(Self::make(ExprKind::Power(a.clone(), k), a.base_order(), a.order() * k, a.degree() * k))
    }

    /// A reference to a catalog entry with its declared metadata.
    pub fn named(name: &str, base_order: u32, order: u32, degree: u32) -> Self {
        Self::make(ExprKind::Named(name.to_string()), base_order, order, degree)
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0.kind
    }

    pub fn base_order(&self) -> u32 {
        self.0.base_order
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn is_invariant(&self) -> bool {
        self.0.order == 0
    }

    /// Stable structural hash; identical trees hash identically across runs.
    pub fn hash(&self) -> u64 {
        self.0.hash
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        fn walk(e: &CovariantExpr, seen: &mut std::collections::HashSet<u64>) {
            if !seen.insert(e.hash()) {
                return;
            }
            match e.kind() {
                ExprKind::Transvect(a, b, _) => {
                    walk(a, seen);
                    walk(b, seen);
                }
                ExprKind::Power(a, _) => walk(a, seen),
                ExprKind::Base | ExprKind::Named(_) => {}
            }
        }
        let mut seen = std::collections::HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    /// Parses `f`, `(tr E E p)`, `(pow E k)` and `@name`; names are resolved
    /// against `catalog`, which also fixes the base order.
    pub fn parse(text: &str, catalog: &Catalog) -> Result<Self, FormError> {
        let mut p = ExprParser { src: text.as_bytes(), pos: 0, catalog };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

impl PartialEq for CovariantExpr {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.0.hash == other.0.hash
                && self.0.base_order == other.0.base_order
                && self.0.order == other.0.order
                && self.0.degree == other.0.degree
                && self.0.kind == other.0.kind)
    }
}

impl Eq for CovariantExpr {}

impl Hash for CovariantExpr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Display for CovariantExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            ExprKind::Base => write!(f, "f"),
            ExprKind::Transvect(a, b, p) => write!(f, "(tr {a} {b} {p})"),
            ExprKind::Power(a, k) => write!(f, "(pow {a} {k})"),
            ExprKind::Named(name) => write!(f, "@{name}"),
        }
    }
}

impl fmt::Debug for CovariantExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [order {}, degree {}]", self, self.order(), self.degree())
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    catalog: &'a Catalog,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> FormError {
        FormError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn number(&mut self) -> Result<u32, FormError> {
        let w = self.word().to_string();
        w.parse().map_err(|_| self.error(&format!("expected integer, found `{w}`")))
    }

    fn expect(&mut self, c: u8) -> Result<(), FormError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<CovariantExpr, FormError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let head = self.word().to_string();
                let e = match head.as_str() {
                    "tr" => {
                        let a = self.expr()?;
                        let b = self.expr()?;
                        let p = self.number()?;
                        CovariantExpr::transvect(&a, &b, p)?
                    }
                    "pow" => {
                        let a = self.expr()?;
                        let k = self.number()?;
                        CovariantExpr::power(&a, k)?
                    }
                    other => return Err(self.error(&format!("unknown operator `{other}`"))),
                };
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'@') => {
                self.pos += 1;
                let name = self.word().to_string();
                self.catalog.reference(&name)
            }
            Some(b'f') => {
                let w = self.word();
                if w != "f" {
                    let w = w.to_string();
                    return Err(self.error(&format!("unknown atom `{w}`")));
                }
                Ok(CovariantExpr::base(self.catalog.base_order()))
            }
            _ => Err(self.error("unexpected token")),
        }
    }
}
