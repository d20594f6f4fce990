use std::collections::HashMap;

use rayon::prelude::*;

use super::{BinaryForm, Catalog, CovariantExpr, ExprKind, FormError, TransvectantPlan};
use crate::algebra::Scalar;

/// Evaluates covariant expressions at one point at a time.
///
/// Within a point, every distinct subtree (including named references) is
/// computed once and shared by all expressions evaluated at that point.
/// Transvectant plans are kept across points.
pub struct Evaluator<'c, S> {
    catalog: &'c Catalog,
    plans: HashMap<(u32, u32, u32), TransvectantPlan<S>>,
    memo: HashMap<CovariantExpr, BinaryForm<S>>,
}

impl<'c, S: Scalar> Evaluator<'c, S> {
    pub fn new(catalog: &'c Catalog) -> Self {
        Evaluator { catalog, plans: HashMap::new(), memo: HashMap::new() }
    }

    /// Evaluates `exprs` at `f`, sharing subtrees across them.
    pub fn eval_point(
        &mut self,
        exprs: &[CovariantExpr],
        f: &BinaryForm<S>,
    ) -> Result<Vec<BinaryForm<S>>, FormError> {
        if f.order() != self.catalog.base_order() {
            return Err(FormError::OrderMismatch { expected: self.catalog.base_order(), found: f.order() });
        }
        self.memo.clear();
        let out = exprs.iter().map(|e| self.eval_node(e, f)).collect();
        self.memo.clear();
        out
    }

    pub fn eval(&mut self, e: &CovariantExpr, f: &BinaryForm<S>) -> Result<BinaryForm<S>, FormError> {
        Ok(self.eval_point(std::slice::from_ref(e), f)?.pop().expect("one value"))
    }

    fn eval_node(&mut self, e: &CovariantExpr, f: &BinaryForm<S>) -> Result<BinaryForm<S>, FormError> {
        if e.base_order() != f.order() {
            return Err(FormError::OrderMismatch { expected: e.base_order(), found: f.order() });
        }
        if let Some(v) = self.memo.get(e) {
            return Ok(v.clone());
        }
        let value = match e.kind() {
            ExprKind::Base => f.clone(),
            ExprKind::Transvect(a, b, p) => {
                let va = self.eval_node(a, f)?;
                let vb = self.eval_node(b, f)?;
                let key = (va.order(), vb.order(), *p);
                if !self.plans.contains_key(&key) {
                    let plan = TransvectantPlan::new(key.0, key.1, key.2, &f.coeffs()[0])?;
                    self.plans.insert(key, plan);
                }
                self.plans[&key].apply(&va, &vb)
            }
            ExprKind::Power(a, k) => self.eval_node(a, f)?.pow(*k),
            ExprKind::Named(name) => {
                let entry = self.catalog.get(name).ok_or_else(|| FormError::UnknownName(name.clone()))?;
                let def = entry.expr.clone();
                self.eval_node(&def, f)?
            }
        };
        self.memo.insert(e.clone(), value.clone());
        Ok(value)
    }
}

/// The covariant `e` evaluated at the form `f`; invariants come back as
/// order-0 forms.
pub fn evaluate_expr<S: Scalar>(
    e: &CovariantExpr,
    f: &BinaryForm<S>,
    catalog: &Catalog,
) -> Result<BinaryForm<S>, FormError> {
    Evaluator::new(catalog).eval(e, f)
}

/// Values of every expression at every point, indexed `[point][expr]`.
///
/// Points are processed in parallel; the output order is fixed.
pub fn evaluate_at_points<S: Scalar>(
    exprs: &[CovariantExpr],
    points: &[BinaryForm<S>],
    catalog: &Catalog,
) -> Result<Vec<Vec<BinaryForm<S>>>, FormError> {
    points
        .par_iter()
        .map_init(|| Evaluator::new(catalog), |ev, f| ev.eval_point(exprs, f))
        .collect()
}
