use super::BasisRecord;
use crate::forms::CovariantExpr;

/// All multisets of indices into `degrees` whose degrees sum to `m`, as
/// nondecreasing index lists in lexicographic order. `m = 0` yields the
/// empty product.
pub fn product_monomials(degrees: &[u32], m: u32) -> Vec<Vec<usize>> {
    fn walk(degrees: &[u32], from: usize, left: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..degrees.len() {
            let d = degrees[i];
            if d == 0 || d > left {
                continue;
            }
            cur.push(i);
            walk(degrees, i, left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    walk(degrees, 0, m, &mut Vec::new(), &mut out);
    out
}

/// The product expression of the given factors, with repeated factors
/// written as powers.
pub(crate) fn product_expr(factors: &[&CovariantExpr]) -> Option<CovariantExpr> {
    let mut groups: Vec<(&CovariantExpr, u32)> = Vec::new();
    for f in factors {
        match groups.last_mut() {
            Some((g, k)) if *g == *f => *k += 1,
            _ => groups.push((f, 1)),
        }
    }
    let mut acc: Option<CovariantExpr> = None;
    for (g, k) in groups {
        let term = if k == 1 { g.clone() } else { CovariantExpr::power(g, k).expect("k >= 2") };
        acc = Some(match acc {
            None => term,
            Some(a) => CovariantExpr::transvect(&a, &term, 0).expect("index 0 always valid"),
        });
    }
    acc
}

/// Every monomial of total degree `m` in the basis invariants, as product
/// expressions in the order of [`product_monomials`].
pub fn spanning_products(basis: &[BasisRecord], m: u32) -> Vec<CovariantExpr> {
    let degrees: Vec<u32> = basis.iter().map(|r| r.degree).collect();
    product_monomials(&degrees, m)
        .into_iter()
        .filter_map(|mono| product_expr(&mono.iter().map(|&i| &basis[i].expr).collect::<Vec<_>>()))
        .collect()
}
