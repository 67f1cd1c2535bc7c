//! The bounded term language: parser, evaluator and syntax-directed bounds.
//!
//! Grammar (ASCII, whitespace insignificant):
//!
//! ```text
//! term    := O | P(term) | U(term) | E(term) | ident
//!          | {term, term} | {ident in term : formula} | {term : ident in term}
//! formula := term in term | term = term | term sub term | ~formula
//!          | formula & formula | formula | formula | formula -> formula
//!          | (all ident in term) formula | (some ident in term) formula
//! ```
//!
//! `~` and the quantifier prefixes bind tightest, then `&`, `|`, and `->`
//! (right associative).

mod analyze;
mod eval;
mod parser;

pub use analyze::{bound_of, formula_bound, rank_bound_of};
pub use eval::{eval_formula, eval_formula_expanded, eval_term, expand_bounded, Env};
pub use parser::{parse_formula, parse_term};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::hf::HFSet;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermAst {
    Var(String),
    Empty,
    Pair(Box<TermAst>, Box<TermAst>),
    Power(Box<TermAst>),
    Union(Box<TermAst>),
    Epsilon(Box<TermAst>),
    /// {var in source : body}
    Comprehension { var: String, source: Box<TermAst>, body: Box<FormulaAst> },
    /// {body : var in source}
    Replacement { var: String, body: Box<TermAst>, source: Box<TermAst> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FormulaAst {
    In(TermAst, TermAst),
    Eq(TermAst, TermAst),
    Sub(TermAst, TermAst),
    Not(Box<FormulaAst>),
    And(Box<FormulaAst>, Box<FormulaAst>),
    Or(Box<FormulaAst>, Box<FormulaAst>),
    Implies(Box<FormulaAst>, Box<FormulaAst>),
    All { var: String, source: TermAst, body: Box<FormulaAst> },
    Some { var: String, source: TermAst, body: Box<FormulaAst> },
}

impl TermAst {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            TermAst::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            TermAst::Empty => {}
            TermAst::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            TermAst::Power(t) | TermAst::Union(t) | TermAst::Epsilon(t) => t.collect_free(bound, out),
            TermAst::Comprehension { var, source, body } => {
                source.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            TermAst::Replacement { var, body, source } => {
                source.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Number of constructor nodes, formulas included.
    pub fn size(&self) -> usize {
        match self {
            TermAst::Var(_) | TermAst::Empty => 1,
            TermAst::Pair(a, b) => 1 + a.size() + b.size(),
            TermAst::Power(t) | TermAst::Union(t) | TermAst::Epsilon(t) => 1 + t.size(),
            TermAst::Comprehension { source, body, .. } => 1 + source.size() + body.size(),
            TermAst::Replacement { body, source, .. } => 1 + source.size() + body.size(),
        }
    }
}

impl FormulaAst {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            FormulaAst::In(a, b) | FormulaAst::Eq(a, b) | FormulaAst::Sub(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FormulaAst::Not(f) => f.collect_free(bound, out),
            FormulaAst::And(f, g) | FormulaAst::Or(f, g) | FormulaAst::Implies(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            FormulaAst::All { var, source, body } | FormulaAst::Some { var, source, body } => {
                source.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn size(&self) -> usize {
        match self {
            FormulaAst::In(a, b) | FormulaAst::Eq(a, b) | FormulaAst::Sub(a, b) => 1 + a.size() + b.size(),
            FormulaAst::Not(f) => 1 + f.size(),
            FormulaAst::And(f, g) | FormulaAst::Or(f, g) | FormulaAst::Implies(f, g) => 1 + f.size() + g.size(),
            FormulaAst::All { source, body, .. } | FormulaAst::Some { source, body, .. } => {
                1 + source.size() + body.size()
            }
        }
    }
}

/// Binders may not shadow an enclosing binder nor reuse the name of a free
/// variable of the whole expression.
fn check_binder(var: &str, scope: &mut Vec<String>, free: &BTreeSet<String>) -> Result<()> {
    if scope.iter().any(|v| v == var) || free.contains(var) {
        return Err(Error::Hygiene(var.to_string()));
    }
    Ok(())
}

fn hygiene_term(t: &TermAst, scope: &mut Vec<String>, free: &BTreeSet<String>) -> Result<()> {
    match t {
        TermAst::Var(_) | TermAst::Empty => Ok(()),
        TermAst::Pair(a, b) => {
            hygiene_term(a, scope, free)?;
            hygiene_term(b, scope, free)
        }
        TermAst::Power(x) | TermAst::Union(x) | TermAst::Epsilon(x) => hygiene_term(x, scope, free),
        TermAst::Comprehension { var, source, body } => {
            hygiene_term(source, scope, free)?;
            check_binder(var, scope, free)?;
            scope.push(var.clone());
            let r = hygiene_formula(body, scope, free);
            scope.pop();
            r
        }
        TermAst::Replacement { var, body, source } => {
            hygiene_term(source, scope, free)?;
            check_binder(var, scope, free)?;
            scope.push(var.clone());
            let r = hygiene_term(body, scope, free);
            scope.pop();
            r
        }
    }
}

fn hygiene_formula(f: &FormulaAst, scope: &mut Vec<String>, free: &BTreeSet<String>) -> Result<()> {
    match f {
        FormulaAst::In(a, b) | FormulaAst::Eq(a, b) | FormulaAst::Sub(a, b) => {
            hygiene_term(a, scope, free)?;
            hygiene_term(b, scope, free)
        }
        FormulaAst::Not(g) => hygiene_formula(g, scope, free),
        FormulaAst::And(g, h) | FormulaAst::Or(g, h) | FormulaAst::Implies(g, h) => {
            hygiene_formula(g, scope, free)?;
            hygiene_formula(h, scope, free)
        }
        FormulaAst::All { var, source, body } | FormulaAst::Some { var, source, body } => {
            hygiene_term(source, scope, free)?;
            check_binder(var, scope, free)?;
            scope.push(var.clone());
            let r = hygiene_formula(body, scope, free);
            scope.pop();
            r
        }
    }
}

pub fn check_hygiene_term(t: &TermAst) -> Result<()> {
    hygiene_term(t, &mut Vec::new(), &t.free_vars())
}

pub fn check_hygiene_formula(f: &FormulaAst) -> Result<()> {
    hygiene_formula(f, &mut Vec::new(), &f.free_vars())
}

impl fmt::Display for TermAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermAst::Var(v) => f.write_str(v),
            TermAst::Empty => f.write_str("O"),
            TermAst::Pair(a, b) => write!(f, "{{{a}, {b}}}"),
            TermAst::Power(t) => write!(f, "P({t})"),
            TermAst::Union(t) => write!(f, "U({t})"),
            TermAst::Epsilon(t) => write!(f, "E({t})"),
            TermAst::Comprehension { var, source, body } => write!(f, "{{{var} in {source} : {body}}}"),
            TermAst::Replacement { var, body, source } => write!(f, "{{{body} : {var} in {source}}}"),
        }
    }
}

/// Binary connectives are always parenthesized, so rendering then parsing
/// gives back the same tree.
impl fmt::Display for FormulaAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaAst::In(a, b) => write!(f, "{a} in {b}"),
            FormulaAst::Eq(a, b) => write!(f, "{a} = {b}"),
            FormulaAst::Sub(a, b) => write!(f, "{a} sub {b}"),
            FormulaAst::Not(g) => write!(f, "~{g}"),
            FormulaAst::And(g, h) => write!(f, "({g} & {h})"),
            FormulaAst::Or(g, h) => write!(f, "({g} | {h})"),
            FormulaAst::Implies(g, h) => write!(f, "({g} -> {h})"),
            FormulaAst::All { var, source, body } => write!(f, "(all {var} in {source}) {body}"),
            FormulaAst::Some { var, source, body } => write!(f, "(some {var} in {source}) {body}"),
        }
    }
}

/// Canonical text of a term.
pub fn normalize(text: &str) -> Result<String> {
    Ok(parse_term(text)?.to_string())
}

/// A one-variable term, λx.t, usable as a successor rule or a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub var: String,
    pub body: TermAst,
}

impl Closure {
    pub fn new(var: &str, body: &str) -> Result<Closure> {
        let body = parse_term(body)?;
        if let Some(extra) = body.free_vars().into_iter().find(|v| v != var) {
            return Err(Error::Unbound(extra));
        }
        Ok(Closure { var: var.to_string(), body })
    }

    pub fn apply(&self, x: &HFSet, budget: &Budget) -> Result<HFSet> {
        let env = Env::from([(self.var.clone(), x.clone())]);
        eval_term(&self.body, &env, budget)
    }
}

/// A one-variable formula, λx.A, usable as a comprehension predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    pub var: String,
    pub body: FormulaAst,
}

impl Predicate {
    pub fn new(var: &str, body: &str) -> Result<Predicate> {
        let body = parse_formula(body)?;
        if let Some(extra) = body.free_vars().into_iter().find(|v| v != var) {
            return Err(Error::Unbound(extra));
        }
        Ok(Predicate { var: var.to_string(), body })
    }

    pub fn holds(&self, x: &HFSet, budget: &Budget) -> Result<bool> {
        let env = Env::from([(self.var.clone(), x.clone())]);
        eval_formula(&self.body, &env, budget)
    }
}

/// Named closures and predicates. They stand outside the formal language,
/// like the metavariables they model.
#[derive(Debug, Clone, Default)]
pub struct Definitions {
    pub maps: std::collections::BTreeMap<String, Closure>,
    pub predicates: std::collections::BTreeMap<String, Predicate>,
}

impl Definitions {
    pub fn define_map(&mut self, name: &str, var: &str, body: &str) -> Result<()> {
        self.maps.insert(name.to_string(), Closure::new(var, body)?);
        Ok(())
    }

    pub fn define_predicate(&mut self, name: &str, var: &str, body: &str) -> Result<()> {
        self.predicates.insert(name.to_string(), Predicate::new(var, body)?);
        Ok(())
    }

    pub fn map(&self, name: &str) -> Result<&Closure> {
        self.maps.get(name).ok_or_else(|| Error::Unbound(name.to_string()))
    }

    pub fn predicate(&self, name: &str) -> Result<&Predicate> {
        self.predicates.get(name).ok_or_else(|| Error::Unbound(name.to_string()))
    }
}

/// Terms over the variables `a` and `b` covering every constructor. Each
/// stays within the default budget for values with codes below 2^12.
pub const CORPUS: &[&str] = &[
    "a",
    "O",
    "{a, b}",
    "{a, O}",
    "P(a)",
    "U(a)",
    "E(a)",
    "{x in a : x sub a}",
    "{x in P(a) : O in x}",
    "{ {x, x} : x in a }",
    "{P(x) : x in a}",
    "U(P(a))",
    "P(U(a))",
    "{U(a), P(b)}",
    "E(U(b))",
    "{{x, b} : x in a}",
    "{x in a : (some y in b) x = y}",
    "{x in U(a) : ~x in b}",
    "{U(x) : x in P(b)}",
    "{x in P(b) : (all y in x) y in a}",
    "U({a, b})",
    "{{a, a}, O}",
    "{E(x) : x in a}",
    "{x in E(a) : O in U(x)}",
    "P({O, {O, O}})",
    "{x in a : (x in b -> x sub b) & ~x = O}",
    "{{x, b} : x in {a, O}}",
];
