use std::collections::HashMap;

use super::{CovariantExpr, ExprKind, FormError};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub expr: CovariantExpr,
    pub order: u32,
    pub degree: u32,
}

/// Named covariants and invariants of the generic form of one order.
///
/// Definitions may refer to earlier entries by name. Entries flagged as the
/// catalog's system of parameters are listed in [`Catalog::hsop`].
#[derive(Clone, Debug)]
pub struct Catalog {
    n: u32,
    entries: Vec<CatalogEntry>,
    index: HashMap<String, usize>,
    hsop: Vec<String>,
    sets: Vec<(String, Vec<String>)>,
}

impl Catalog {
    pub fn empty(n: u32) -> Self {
        Catalog { n, entries: Vec::new(), index: HashMap::new(), hsop: Vec::new(), sets: Vec::new() }
    }

    pub fn base_order(&self) -> u32 {
        self.n
    }

    /// Adds `name := text`; the parsed metadata must match the declaration.
    pub fn define(&mut self, name: &str, text: &str, order: u32, degree: u32) -> Result<(), FormError> {
        let expr = CovariantExpr::parse(text, self)?;
        if (expr.order(), expr.degree()) != (order, degree) {
            return Err(FormError::Metadata {
                name: name.to_string(),
                declared_order: order,
                declared_degree: degree,
                order: expr.order(),
                degree: expr.degree(),
            });
        }
        self.index.insert(name.to_string(), self.entries.len());
        self.entries.push(CatalogEntry { name: name.to_string(), expr, order, degree });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    pub fn reference(&self, name: &str) -> Result<CovariantExpr, FormError> {
        let e = self.get(name).ok_or_else(|| FormError::UnknownName(name.to_string()))?;
        Ok(CovariantExpr::named(name, self.n, e.order, e.degree))
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn invariants(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| e.order == 0)
    }

    pub fn hsop(&self) -> Vec<&CatalogEntry> {
        self.hsop.iter().map(|n| self.get(n).expect("hsop names are defined")).collect()
    }

    /// Named lists of catalog entries, e.g. `thm` for the flagged system
    /// of parameters.
    pub fn set(&self, name: &str) -> Option<Vec<&CatalogEntry>> {
        if name == "thm" || name == "hsop" {
            return Some(self.hsop());
        }
        self.sets
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, names)| names.iter().map(|n| self.get(n).expect("set members are defined")).collect())
    }

    pub fn set_names(&self) -> Vec<&str> {
        let mut out = vec!["thm"];
        out.extend(self.sets.iter().map(|(n, _)| n.as_str()));
        out
    }

    /// Replaces every named reference by its definition, recursively.
    pub fn expand(&self, e: &CovariantExpr) -> Result<CovariantExpr, FormError> {
        match e.kind() {
            ExprKind::Base => Ok(e.clone()),
            ExprKind::Transvect(a, b, p) => CovariantExpr::transvect(&self.expand(a)?, &self.expand(b)?, *p),
            ExprKind::Power(a, k) => CovariantExpr::power(&self.expand(a)?, *k),
            ExprKind::Named(name) => {
                let entry = self.get(name).ok_or_else(|| FormError::UnknownName(name.clone()))?;
                self.expand(&entry.expr)
            }
        }
    }

    fn flag_hsop(&mut self, names: &[&str]) {
        self.hsop = names.iter().map(|s| s.to_string()).collect();
    }

    fn add_set(&mut self, name: &str, members: &[&str]) {
        self.sets.push((name.to_string(), members.iter().map(|s| s.to_string()).collect()));
    }
}

type Def = (&'static str, &'static str, u32, u32);

const NONIC: &[Def] = &[
    ("l", "(tr f f 8)", 2, 2),
    ("q", "(tr f f 6)", 6, 2),
    ("r", "(tr @q f 6)", 3, 3),
    ("p", "(tr f @l 2)", 7, 3),
    ("u", "(tr f f 2)", 14, 2),
    ("s", "(tr f f 4)", 10, 2),
    ("k_q", "(tr @q @q 4)", 4, 4),
    ("m_q", "(tr @q @k_q 4)", 2, 6),
    ("l_p", "(tr @p @p 6)", 2, 6),
    ("q_p", "(tr @p @p 4)", 6, 6),
    ("p_p", "(tr @p @l_p 2)", 5, 9),
    ("k_qp", "(tr @q_p @q_p 4)", 4, 12),
    ("m_qp", "(tr @q_p @k_qp 4)", 2, 18),
    ("j_4", "(tr @l @l 2)", 0, 4),
    ("A_4", "(tr @q @q 6)", 0, 4),
    ("j_8", "(tr @k_q @k_q 4)", 0, 8),
    ("A_8", "(tr (tr @p @p 6) @l 2)", 0, 8),
    ("B_8", "(tr @q (pow @r 2) 6)", 0, 8),
    ("C_8", "(tr (tr @q @q 4) (pow @l 2) 4)", 0, 8),
    ("D_8", "(tr (tr @q @q 4) (tr @q @s 6) 4)", 0, 8),
    ("j_10", "(tr (tr @p (tr f @q 6) 3) (tr @q @q 4) 4)", 0, 10),
    ("A_10", "(tr (tr @p (tr f @q 6) 3) (pow @l 2) 4)", 0, 10),
    ("B_10", "(tr (tr (tr f @q 6) (tr f @s 6) 3) (tr @s @s 8) 4)", 0, 10),
    ("C_10", "(tr (tr (tr (tr @s @s 6) f 6) (tr @l f 2) 3) @q 6)", 0, 10),
    ("D_10", "(tr (tr (tr (tr @u @u 10) f 6) (tr @q f 2) 5) @q 6)", 0, 10),
    ("j_12", "(tr (tr @k_q @k_q 2) @k_q 4)", 0, 12),
    ("A_12", "(tr @l_p @l_p 2)", 0, 12),
    ("B_12", "(tr (tr @p @p 4) (pow @l 3) 6)", 0, 12),
    ("C_12", "(tr (tr @r @r 2) (tr @r @r 2) 2)", 0, 12),
    ("D_12", "(tr (tr (pow @q 2) @q 6) (pow @r 2) 6)", 0, 12),
    ("j_14", "(tr @q (tr (pow @r 3) @r 3) 6)", 0, 14),
    ("j_16", "(tr (tr @p @p 2) (pow @l 5) 10)", 0, 16),
    ("j_18", "(tr (tr (tr @q @q 2) @q 1) (pow @r 4) 12)", 0, 18),
    ("j_20", "(tr (pow @m_q 2) (tr @k_q @k_q 2) 4)", 0, 20),
    ("A_20", "(tr (pow @p 2) (pow @l 7) 14)", 0, 20),
    ("B_20", "(tr @q (pow (tr @r @r 2) 3) 6)", 0, 20),
    ("C_20", "(tr (tr (tr (pow @r 3) @r 3) @q 4) (tr (tr f @u 8) (tr f @s 8) 3) 4)", 0, 20),
    ("j_24", "(tr (tr @p_p @p_p 4) @l_p 2)", 0, 24),
    ("j_36", "(tr (tr @k_qp @k_qp 2) @k_qp 4)", 0, 36),
    ("A_36", "(tr (tr @p_p @p_p 2) (pow @l_p 3) 6)", 0, 36),
    ("j_60", "(tr (pow @m_qp 2) (tr @k_qp @k_qp 2) 4)", 0, 60),
];

const QUADRATIC: &[Def] = &[("i_2", "(tr f f 2)", 0, 2)];

const CUBIC: &[Def] = &[("h", "(tr f f 2)", 2, 2), ("i_4", "(tr @h @h 2)", 0, 4)];

const SEXTIC: &[Def] = &[
    ("k", "(tr f f 4)", 4, 2),
    ("m", "(tr f @k 4)", 2, 3),
    ("i_2", "(tr f f 6)", 0, 2),
    ("i_4", "(tr @k @k 4)", 0, 4),
    ("i_6", "(tr (tr @k @k 2) @k 4)", 0, 6),
    ("i_10", "(tr (pow @m 2) (tr @k @k 2) 4)", 0, 10),
];

const SEPTIC: &[Def] = &[
    ("l", "(tr f f 6)", 2, 2),
    ("p", "(tr f @l 2)", 5, 3),
    ("q", "(tr f f 4)", 6, 2),
    ("k_q", "(tr @q @q 4)", 4, 4),
    ("m_q", "(tr @q @k_q 4)", 2, 6),
    ("j_4", "(tr @l @l 2)", 0, 4),
    ("j_8", "(tr (tr @p @p 4) @l 2)", 0, 8),
    ("j_12", "(tr (tr @k_q @k_q 2) @k_q 4)", 0, 12),
    ("B_12", "(tr (tr @p @p 2) (pow @l 3) 6)", 0, 12),
    ("j_20", "(tr (pow @m_q 2) (tr @k_q @k_q 2) 4)", 0, 20),
];

fn build(n: u32, defs: &[Def]) -> Result<Catalog, FormError> {
    let mut c = Catalog::empty(n);
    for (name, text, order, degree) in defs {
        c.define(name, text, *order, *degree)?;
    }
    Ok(c)
}

/// The named catalog for binary forms of order `n ∈ {2, 3, 6, 7, 9}`.
pub fn catalog_for(n: u32) -> Result<Catalog, FormError> {
    let mut c = match n {
        2 => build(2, QUADRATIC)?,
        3 => build(3, CUBIC)?,
        6 => build(6, SEXTIC)?,
        7 => build(7, SEPTIC)?,
        9 => build(9, NONIC)?,
        _ => return Err(FormError::UnsupportedOrder(n)),
    };
    match n {
        2 => c.flag_hsop(&["i_2"]),
        3 => c.flag_hsop(&["i_4"]),
        6 => c.flag_hsop(&["i_2", "i_4", "i_6", "i_10"]),
        7 => c.flag_hsop(&["j_4", "j_8", "j_12", "B_12", "j_20"]),
        9 => {
            c.flag_hsop(&["j_4", "B_8", "D_10", "j_12", "B_12", "j_14", "j_16"]);
            c.add_set("hprime", &["j_4", "A_4", "B_8", "D_10", "j_12", "B_12", "j_14", "j_16"]);
            c.add_set("deg8", &["j_8", "A_8", "B_8", "C_8", "D_8"]);
            c.add_set("deg10", &["j_10", "A_10", "B_10", "C_10", "D_10"]);
            c.add_set(
                "nullcone10",
                &["j_4", "A_4", "j_8", "A_8", "j_12", "B_12", "j_14", "j_16", "j_20", "A_20"],
            );
            c.add_set("nullcone9", &["j_4", "B_8", "D_8", "C_10", "D_10", "j_12", "B_12", "j_14", "j_16"]);
        }
        _ => {}
    }
    Ok(c)
}
