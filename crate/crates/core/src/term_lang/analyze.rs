//! Syntax-directed bounds. For T the transitive closure of the set of
//! values of the free variables, a term t with bound k satisfies
//! t ∈ P^k(T) for every environment.

use super::{FormulaAst, TermAst};

fn bound_in(t: &TermAst, levels: &mut Vec<(String, u32)>) -> u32 {
    match t {
        TermAst::Var(v) => levels.iter().rev().find(|(n, _)| n == v).map_or(0, |&(_, l)| l),
        TermAst::Empty => 1,
        TermAst::Pair(a, b) => bound_in(a, levels).max(bound_in(b, levels)) + 1,
        TermAst::Power(a) => bound_in(a, levels) + 2,
        TermAst::Union(a) => bound_in(a, levels) + 1,
        TermAst::Epsilon(a) => bound_in(a, levels) + 3,
        TermAst::Comprehension { source, .. } => bound_in(source, levels) + 1,
        TermAst::Replacement { var, body, source } => {
            // Members of something in P^k(T) lie in P^(k-1)(T), or in T when k = 0.
            let k1 = bound_in(source, levels);
            levels.push((var.clone(), k1.saturating_sub(1)));
            let kb = bound_in(body, levels);
            levels.pop();
            kb + 1
        }
    }
}

/// A k with t ∈ P^k(T). For replacement this is max(k₁, 1) + k₂ where k₁
/// bounds the source and k₂ the body with the bound variable at level 0.
pub fn bound_of(t: &TermAst) -> u32 {
    bound_in(t, &mut Vec::new())
}

/// An r with rank(t) < r + the largest rank among the values of the free
/// variables (0 when there are none).
pub fn rank_bound_of(t: &TermAst) -> u32 {
    bound_of(t) + 1
}

/// Formulas have no value; this is the largest bound of a term inside.
pub fn formula_bound(f: &FormulaAst) -> u32 {
    match f {
        FormulaAst::In(a, b) | FormulaAst::Eq(a, b) | FormulaAst::Sub(a, b) => bound_of(a).max(bound_of(b)),
        FormulaAst::Not(g) => formula_bound(g),
        FormulaAst::And(g, h) | FormulaAst::Or(g, h) | FormulaAst::Implies(g, h) => formula_bound(g).max(formula_bound(h)),
        FormulaAst::All { source, body, .. } | FormulaAst::Some { source, body, .. } => bound_of(source).max(formula_bound(body)),
    }
}
