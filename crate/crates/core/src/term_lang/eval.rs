use super::{FormulaAst, TermAst};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::hf::HFSet;
use std::collections::BTreeMap;

/// Values of the free variables.
pub type Env = BTreeMap<String, HFSet>;

/// Free variables from `env`, binders pushed on `locals` (innermost last).
struct Scope<'a> {
    env: &'a Env,
    locals: Vec<(String, HFSet)>,
    budget: &'a Budget,
}

impl Scope<'_> {
    fn lookup(&self, v: &str) -> Result<HFSet> {
        if let Some((_, x)) = self.locals.iter().rev().find(|(n, _)| n == v) {
            return Ok(x.clone());
        }
        self.env.get(v).cloned().ok_or_else(|| Error::Unbound(v.to_string()))
    }

    fn with<T>(&mut self, var: &str, x: &HFSet, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.locals.push((var.to_string(), x.clone()));
        let r = f(self);
        self.locals.pop();
        r
    }

    fn term(&mut self, t: &TermAst) -> Result<HFSet> {
        match t {
            TermAst::Var(v) => self.lookup(v),
            TermAst::Empty => Ok(HFSet::empty()),
            TermAst::Pair(a, b) => Ok(HFSet::pair(self.term(a)?, self.term(b)?)),
            TermAst::Power(a) => self.term(a)?.power_set(self.budget),
            TermAst::Union(a) => Ok(self.term(a)?.union_all()),
            TermAst::Epsilon(a) => self.term(a)?.epsilon_fan(self.budget),
            TermAst::Comprehension { var, source, body } => {
                let s = self.term(source)?;
                s.try_comprehension(|x| self.with(var, x, |sc| sc.formula(body)))
            }
            TermAst::Replacement { var, body, source } => {
                let s = self.term(source)?;
                s.try_replacement(|x| self.with(var, x, |sc| sc.term(body)))
            }
        }
    }

    fn formula(&mut self, f: &FormulaAst) -> Result<bool> {
        Ok(match f {
            FormulaAst::In(a, b) => self.term(b)?.contains(&self.term(a)?),
            FormulaAst::Eq(a, b) => self.term(a)? == self.term(b)?,
            FormulaAst::Sub(a, b) => self.term(a)?.is_subset(&self.term(b)?),
            FormulaAst::Not(g) => !self.formula(g)?,
            FormulaAst::And(g, h) => self.formula(g)? && self.formula(h)?,
            FormulaAst::Or(g, h) => self.formula(g)? || self.formula(h)?,
            FormulaAst::Implies(g, h) => !self.formula(g)? || self.formula(h)?,
            FormulaAst::All { var, source, body } => {
                let s = self.term(source)?;
                for x in s.members() {
                    if !self.with(var, x, |sc| sc.formula(body))? {
                        return Ok(false);
                    }
                }
                true
            }
            FormulaAst::Some { var, source, body } => {
                let s = self.term(source)?;
                for x in s.members() {
                    if self.with(var, x, |sc| sc.formula(body))? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }
}

pub fn eval_term(t: &TermAst, env: &Env, budget: &Budget) -> Result<HFSet> {
    Scope { env, locals: Vec::new(), budget }.term(t)
}

pub fn eval_formula(f: &FormulaAst, env: &Env, budget: &Budget) -> Result<bool> {
    Scope { env, locals: Vec::new(), budget }.formula(f)
}

fn expand_term(t: &TermAst) -> TermAst {
    match t {
        TermAst::Var(_) | TermAst::Empty => t.clone(),
        TermAst::Pair(a, b) => TermAst::Pair(Box::new(expand_term(a)), Box::new(expand_term(b))),
        TermAst::Power(a) => TermAst::Power(Box::new(expand_term(a))),
        TermAst::Union(a) => TermAst::Union(Box::new(expand_term(a))),
        TermAst::Epsilon(a) => TermAst::Epsilon(Box::new(expand_term(a))),
        TermAst::Comprehension { var, source, body } => TermAst::Comprehension {
            var: var.clone(),
            source: Box::new(expand_term(source)),
            body: Box::new(expand_bounded(body)),
        },
        TermAst::Replacement { var, body, source } => TermAst::Replacement {
            var: var.clone(),
            body: Box::new(expand_term(body)),
            source: Box::new(expand_term(source)),
        },
    }
}

/// Rewrites bounded quantifiers into comprehension:
/// `(all x in S) A` becomes `S sub {x in S : A}` and
/// `(some x in S) A` becomes `~S sub {x in S : ~A}`.
pub fn expand_bounded(f: &FormulaAst) -> FormulaAst {
    match f {
        FormulaAst::In(a, b) => FormulaAst::In(expand_term(a), expand_term(b)),
        FormulaAst::Eq(a, b) => FormulaAst::Eq(expand_term(a), expand_term(b)),
        FormulaAst::Sub(a, b) => FormulaAst::Sub(expand_term(a), expand_term(b)),
        FormulaAst::Not(g) => FormulaAst::Not(Box::new(expand_bounded(g))),
        FormulaAst::And(g, h) => FormulaAst::And(Box::new(expand_bounded(g)), Box::new(expand_bounded(h))),
        FormulaAst::Or(g, h) => FormulaAst::Or(Box::new(expand_bounded(g)), Box::new(expand_bounded(h))),
        FormulaAst::Implies(g, h) => FormulaAst::Implies(Box::new(expand_bounded(g)), Box::new(expand_bounded(h))),
        FormulaAst::All { var, source, body } => {
            let s = expand_term(source);
            let comp = TermAst::Comprehension { var: var.clone(), source: Box::new(s.clone()), body: Box::new(expand_bounded(body)) };
            FormulaAst::Sub(s, comp)
        }
        FormulaAst::Some { var, source, body } => {
            let s = expand_term(source);
            let neg = FormulaAst::Not(Box::new(expand_bounded(body)));
            let comp = TermAst::Comprehension { var: var.clone(), source: Box::new(s.clone()), body: Box::new(neg) };
            FormulaAst::Not(Box::new(FormulaAst::Sub(s, comp)))
        }
    }
}

/// Evaluates after removing every quantifier.
pub fn eval_formula_expanded(f: &FormulaAst, env: &Env, budget: &Budget) -> Result<bool> {
    eval_formula(&expand_bounded(f), env, budget)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_formula, parse_term, CORPUS};
    use super::*;

    fn c(n: u64) -> HFSet {
        HFSet::from_code(n)
    }

    fn env(a: u64, b: u64) -> Env {
        Env::from([("a".to_string(), c(a)), ("b".to_string(), c(b))])
    }

    fn ev(src: &str, a: u64, b: u64) -> HFSet {
        eval_term(&parse_term(src).unwrap(), &env(a, b), &Budget::default()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(ev("O", 0, 0), c(0));
        assert_eq!(ev("{a, a}", 0, 0), c(1));
        assert_eq!(ev("{x in P(a) : O in x}", 1, 0), c(2));
        let transitive = parse_formula("(all x in a) x sub a").unwrap();
        assert!(eval_formula(&transitive, &env(11, 0), &Budget::default()).unwrap());
        assert!(!eval_formula(&transitive, &env(2, 0), &Budget::default()).unwrap());
        assert_eq!(ev("{a, b}", 1, 2), c(0b110));
        assert_eq!(ev("P(a)", 1, 0), c(3));
        assert_eq!(ev("U(a)", 3, 0), c(1));
        assert_eq!(ev("{x in a : O in x}", 7, 0), c(2));
        assert_eq!(ev("{ {x, x} : x in a }", 3, 0), c(0b110));
        assert_eq!(ev("{x in a : (some y in b) x = y}", 7, 5), c(5));
    }

    #[test]
    fn epsilon() {
        // E(2_vn) lists the ε-descending chains from 2 = {0, 1}.
        let two = c(3);
        let v = eval_term(&parse_term("E(a)").unwrap(), &Env::from([("a".into(), two.clone())]), &Budget::default()).unwrap();
        assert_eq!(v, two.epsilon_fan(&Budget::default()).unwrap());
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn unbound_and_budget() {
        let b = Budget::default();
        assert_eq!(eval_term(&parse_term("c").unwrap(), &Env::new(), &b).unwrap_err(), Error::Unbound("c".into()));
        let tiny = Budget { power: 4, ..Budget::default() };
        assert!(matches!(eval_term(&parse_term("P(a)").unwrap(), &env(7, 0), &tiny), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn expansion_agrees() {
        let b = Budget::default();
        let formulas = [
            "(all x in a) x in b",
            "(some x in a) x = O",
            "(all x in a)(some y in b) x sub y",
            "~(some x in U(a)) (all y in x) y in b -> a = b",
            "{x in a : (all y in x) y in b} = a",
        ];
        for src in formulas {
            let f = parse_formula(src).unwrap();
            let e = expand_bounded(&f);
            assert!(!e.to_string().contains("all") && !e.to_string().contains("some"));
            for a in 0..64 {
                for bb in [0u64, 1, 3, 7, 11, 12] {
                    let en = env(a, bb);
                    assert_eq!(eval_formula(&f, &en, &b).unwrap(), eval_formula_expanded(&f, &en, &b).unwrap(), "{src} {a} {bb}");
                }
            }
        }
    }

    #[test]
    fn corpus_evaluates_within_budget() {
        let b = Budget::default();
        for src in CORPUS {
            let t = parse_term(src).unwrap();
            for a in (0..4096).step_by(97) {
                for bb in [0u64, 5, 300, 4095] {
                    eval_term(&t, &env(a, bb), &b).unwrap_or_else(|e| panic!("{src} a={a} b={bb}: {e}"));
                }
            }
        }
    }
}
