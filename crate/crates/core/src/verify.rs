//! Named, budgeted checks of the claims that can be decided by brute force
//! at small scale. Each suite reports per-group case counts and the
//! failing inputs it found, rendered so they parse back as sets.
//!
//! Randomized groups draw from a ChaCha stream seeded with `budget.seed`
//! and the group name, so a report is a function of the budget alone.

use crate::budget::Budget;
use crate::cardarith::{rank_exact, rank_fast, two_tower, vn};
use crate::error::{Error, Result};
use crate::hf::{HFSet, IteratedPower};
use crate::linord::{validate, validate_clauses, InductionOutcome, LinearOrdering};
use crate::numerals::{num_enumeration, numeral_from_value, NumerationBase};
use crate::systems::{
    ack0_successor, ack0_theorem_check, ack_closure_witness, ack_successor, ack_term_set, ack_to_ch_suplog, base_down,
    base_up, ch_lex, ch_to_vn, ch_to_z, is_regular, len_down, len_up, lex_anchor, lex_anchor_index, lex_ch, lex_index,
    lex_step, lex_term, Phi, StagePlan, Step, System, Term,
};
use crate::term_lang::{bound_of, eval_term, parse_term, rank_bound_of, Env, CORPUS};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::HashSet;
use std::time::{Duration, Instant};

pub const SUITES: &[&str] = &[
    "kuratowski",
    "induction-recursion",
    "splitting",
    "bounding",
    "rank",
    "numeral-base",
    "numeral-length",
    "lex-ack",
    "ch-lex-measures",
    "ack-closure",
    "ack-phi",
    "one-point-induction",
];

/// Counterexamples kept per group. The failure count is always exact.
pub const KEPT_FAILURES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// The failing inputs, as `name=value` pairs in brace or code notation.
    pub input: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub group: String,
    pub cases: u64,
    pub failed: u64,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl GroupReport {
    fn new(group: &str) -> GroupReport {
        GroupReport { group: group.to_string(), cases: 0, failed: 0, failures: Vec::new(), note: None }
    }

    fn check(&mut self, ok: bool, input: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(input(), detail());
        }
    }

    fn fail(&mut self, input: String, detail: String) {
        self.failed += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(Failure { input, detail });
        }
    }

    /// Counts an operation that should have succeeded; errors are failures.
    fn ok<T>(&mut self, r: Result<T>, input: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.fail(input(), e.to_string());
                None
            }
        }
    }

    fn merge(&mut self, other: GroupReport) {
        self.cases += other.cases;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(f);
            }
        }
    }

    fn noted(mut self, note: impl Into<String>) -> GroupReport {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: u64,
    pub failed: u64,
    pub groups: Vec<GroupReport>,
    pub budget: Budget,
    #[serde(serialize_with = "millis")]
    pub wall: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &Failure)> {
        self.groups.iter().flat_map(|g| g.failures.iter().map(move |f| (g.group.as_str(), f)))
    }

    /// One record per group, then the summary.
    pub fn json_lines(&self) -> Vec<Value> {
        let mut out: Vec<Value> = self
            .groups
            .iter()
            .map(|g| {
                let mut v = serde_json::to_value(g).expect("plain data");
                v["suite"] = json!(self.suite);
                v
            })
            .collect();
        out.push(json!({
            "suite": self.suite,
            "summary": true,
            "passed": self.passed(),
            "cases": self.cases,
            "failed": self.failed,
            "budget": self.budget,
            "wall_ms": self.wall.as_secs_f64() * 1000.0,
        }));
        out
    }
}

pub fn run_suite(name: &str, budget: &Budget) -> Result<SuiteReport> {
    let start = Instant::now();
    let groups = match name {
        "kuratowski" => kuratowski(budget),
        "induction-recursion" => induction_recursion(budget),
        "splitting" => splitting(budget),
        "bounding" => bounding(budget),
        "rank" => rank(budget),
        "numeral-base" => numeral_base(budget),
        "numeral-length" => numeral_length(budget),
        "lex-ack" => lex_ack(budget),
        "ch-lex-measures" => ch_lex_measures(budget),
        "ack-closure" => ack_closure(budget),
        "ack-phi" => ack_phi(budget),
        "one-point-induction" => one_point_induction(budget),
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        cases: groups.iter().map(|g| g.cases).sum(),
        failed: groups.iter().map(|g| g.failed).sum(),
        groups,
        budget: budget.clone(),
        wall: start.elapsed(),
    })
}

fn rng_for(budget: &Budget, group: &str, part: u64) -> ChaCha8Rng {
    // FNV-1a over the group name keeps streams independent per group.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in group.bytes().chain(part.to_le_bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(budget.seed ^ h)
}

fn random_set(rng: &mut ChaCha8Rng, bits: u32) -> HFSet {
    HFSet::from_code(rng.gen_range(0..1u64 << bits))
}

fn show(s: &HFSet) -> String {
    s.braces_limited(256).unwrap_or_else(|| match s.code_u64() {
        Some(c) => format!("#{c}"),
        None => "<large>".into(),
    })
}

fn show_terms(ts: &[HFSet]) -> String {
    format!("[{}]", ts.iter().map(show).collect::<Vec<_>>().join(", "))
}

/// Shrinks a failing set: retries its members and its one-point
/// reductions, largest code first, while the failure persists.
fn minimize(mut x: HFSet, fails: impl Fn(&HFSet) -> bool) -> HFSet {
    loop {
        let mut candidates: Vec<HFSet> = x.members().to_vec();
        candidates.extend(x.members().iter().map(|m| x.without(m)));
        candidates.sort();
        candidates.dedup();
        match candidates.into_iter().rev().find(|c| fails(c)) {
            Some(c) => x = c,
            None => return x,
        }
    }
}

/// Runs `f` over `0..n` in parallel chunks and merges in index order.
fn par_range(group: &str, n: u64, f: impl Fn(u64, &mut GroupReport) + Sync) -> GroupReport {
    const CHUNK: u64 = 1024;
    let parts: Vec<GroupReport> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut g = GroupReport::new(group);
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                f(i, &mut g);
            }
            g
        })
        .collect();
    let mut out = GroupReport::new(group);
    for p in parts {
        out.merge(p);
    }
    out
}

fn vn_ordering(n: usize) -> LinearOrdering {
    LinearOrdering::from_terms((0..n).map(vn).collect()).expect("VN terms are distinct")
}

// ---------------------------------------------------------------- kuratowski

fn check_ordering(l: &LinearOrdering, g: &mut GroupReport) {
    let input = || format!("L={}", show(l.carrier()));
    g.check(l.field().len() == l.len(), input, || "|Field(L)| differs from |L|".into());
    let carrier = l.carrier().clone();
    g.check(validate(&carrier) && validate_clauses(&carrier), input, || "clauses (i)-(iv) fail".into());
    match LinearOrdering::from_terms(l.terms().to_vec()) {
        Ok(back) => g.check(back.carrier() == l.carrier(), input, || "from_terms(terms(L)) differs".into()),
        Err(e) => g.fail(input(), e.to_string()),
    }
    if !l.is_empty() {
        g.check(l.carrier().contains(&l.field()), input, || "the field is not the largest segment".into());
    }
    for k in 0..=l.len() {
        let p = l.prefix(k);
        g.check(p.is_initial_segment(l) && p.is_prefix_of(l), input, || format!("prefix {k} is not an initial segment"));
    }
}

fn kuratowski(budget: &Budget) -> Vec<GroupReport> {
    let n = 1u64 << budget.codes;
    let valid: Vec<u64> = (0..n).into_par_iter().filter(|&c| validate(&HFSet::from_code(c))).collect();
    let clauses = par_range("clause-agreement", n, |c, g| {
        let s = HFSet::from_code(c);
        let fast = validate(&s);
        g.check(fast == validate_clauses(&s), || format!("S=#{c}"), || format!("validate says {fast}"));
    });
    let carriers = par_range("carriers", valid.len() as u64, |i, g| {
        let s = HFSet::from_code(valid[i as usize]);
        if let Some(l) = g.ok(LinearOrdering::from_carrier(s.clone()), || format!("L={}", show(&s))) {
            check_ordering(&l, g);
        }
    })
    .noted(format!("{} valid carriers below 2^{}", valid.len(), budget.codes));
    let orderings: Vec<LinearOrdering> =
        valid.iter().map(|&c| LinearOrdering::from_carrier(HFSet::from_code(c)).expect("valid")).collect();
    let pairs = par_range("segment-order", orderings.len() as u64, |i, g| {
        let a = &orderings[i as usize];
        for b in &orderings {
            g.check(
                a.is_initial_segment(b) == a.is_prefix_of(b),
                || format!("L={} L'={}", show(a.carrier()), show(b.carrier())),
                || "carrier inclusion disagrees with the term prefix relation".into(),
            );
        }
    });
    let random = par_range("from-terms", budget.samples as u64, |i, g| {
        let mut rng = rng_for(budget, "from-terms", i);
        let len = rng.gen_range(0..=7usize);
        let mut seen = HashSet::new();
        let mut ts = Vec::new();
        while ts.len() < len {
            let t = random_set(&mut rng, budget.env_bits);
            if seen.insert(t.id()) {
                ts.push(t);
            }
        }
        let input = || format!("terms={}", show_terms(&ts));
        let Some(l) = g.ok(LinearOrdering::from_terms(ts.clone()), input) else { return };
        g.check(l.terms() == &ts[..], input, || "terms(from_terms(ts)) differs".into());
        check_ordering(&l, g);
        let cut = rng.gen_range(0..=len);
        let parts = [
            LinearOrdering::from_terms(ts[..cut].to_vec()).expect("distinct"),
            LinearOrdering::from_terms(ts[cut..].to_vec()).expect("distinct"),
        ];
        match LinearOrdering::concat(&parts) {
            Ok(c) => g.check(c == l && c.len() == parts[0].len() + parts[1].len(), input, || {
                format!("concat at {cut} is not additive")
            }),
            Err(e) => g.fail(input(), e.to_string()),
        }
    });
    vec![clauses, carriers, pairs, random]
}

// ------------------------------------------------------- induction-recursion

/// A small family of decidable predicates, indexed by `(kind, p)`.
fn predicate(kind: u8, p: u64) -> impl Fn(&HFSet) -> bool {
    move |x: &HFSet| match kind {
        0 => x.code_u64().map_or(true, |c| c % (p + 2) != 0),
        1 => x.rank() as u64 <= p % 6,
        2 => x.len() as u64 != p % 5,
        _ => !x.contains(&HFSet::from_code(p % 8)),
    }
}

fn step_fn(kind: u8, c: HFSet) -> impl Fn(&HFSet) -> HFSet {
    move |x: &HFSet| match kind {
        0 => HFSet::singleton(x.clone()),
        1 => x.with(c.clone()),
        2 => HFSet::pair(x.clone(), c.clone()),
        _ => x.symmetric_difference(&HFSet::singleton(c.clone())),
    }
}

fn induction_recursion(budget: &Budget) -> Vec<GroupReport> {
    let random_ordering = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(1..=8usize);
        let mut seen = HashSet::new();
        let mut ts = Vec::new();
        while ts.len() < len {
            let t = random_set(rng, 8);
            if seen.insert(t.id()) {
                ts.push(t);
            }
        }
        LinearOrdering::from_terms(ts).expect("distinct")
    };
    let induction = par_range("induction", budget.samples as u64, |i, g| {
        let mut rng = rng_for(budget, "induction", i);
        let l = random_ordering(&mut rng);
        let (kind, p) = (rng.gen_range(0..4u8), rng.gen_range(0..64u64));
        let phi = predicate(kind, p);
        let ts = l.terms();
        let base = phi(&ts[0]);
        let first_bad_step = ts.windows(2).position(|w| phi(&w[0]) && !phi(&w[1]));
        let expected = match (base, first_bad_step) {
            (false, _) => InductionOutcome::BaseFails,
            (true, Some(i)) => InductionOutcome::StepFails(i),
            (true, None) => InductionOutcome::Holds,
        };
        let got = l.induction(&phi);
        let conclusion = ts.iter().all(&phi);
        g.check(
            got == expected && (expected != InductionOutcome::Holds || conclusion),
            || format!("L={} phi=({kind},{p})", show(l.carrier())),
            || format!("outcome {got:?}, expected {expected:?}, conclusion {conclusion}"),
        );
    });
    let recursion = par_range("recursion", budget.samples as u64, |i, g| {
        let mut rng = rng_for(budget, "recursion", i);
        let l = random_ordering(&mut rng);
        let a = random_set(&mut rng, 8);
        let c = random_set(&mut rng, 4);
        let kind = rng.gen_range(0..4u8);
        let gf = step_fn(kind, c.clone());
        let input = || format!("L={} a={} g=({kind},{})", show(l.carrier()), show(&a), show(&c));
        let (Some(v1), Some(v2)) = (g.ok(l.recursion_along(a.clone(), &gf), input), g.ok(l.recursion_along(a.clone(), &gf), input))
        else {
            return;
        };
        // Independent fold over the terms.
        let mut folded = Vec::new();
        let mut cur = a.clone();
        for (j, _) in l.terms().iter().enumerate() {
            if j > 0 {
                cur = gf(&cur);
            }
            folded.push(cur.clone());
        }
        g.check(v1 == v2 && v1 == folded, input, || "recursion is not unique".into());
        // The graph satisfies both clauses and is a function on Field(L).
        let Some(graph) = g.ok(l.recursion_graph(a.clone(), &gf), input) else { return };
        let ts = l.terms();
        let mut ok = graph.len() == ts.len() && graph.contains(&HFSet::ordered_pair(ts[0].clone(), a.clone()));
        for j in 1..ts.len() {
            ok &= graph.contains(&HFSet::ordered_pair(ts[j].clone(), gf(&v1[j - 1])));
        }
        g.check(ok, input, || "graph violates the recursion clauses".into());
    });
    vec![induction, recursion]
}

// ----------------------------------------------------------------- splitting

fn splitting(budget: &Budget) -> Vec<GroupReport> {
    const DEPTHS: u32 = 3;
    const TERMS: usize = 6;
    let n = 1usize << budget.codes;
    let z = |i: usize| (0..i).fold(HFSet::empty(), |x, _| HFSet::singleton(x));
    // Membership tables: bit a of table[d] says a ∈ P^d(T).
    let table = |t: HFSet, depths: std::ops::Range<u32>| -> Vec<Vec<bool>> {
        let mut ip = IteratedPower::new(t);
        depths.map(|d| (0..n as u64).map(|a| ip.contains(&HFSet::from_code(a), d)).collect()).collect()
    };
    let mut sources: Vec<HFSet> = (0..TERMS).map(|i| HFSet::singleton(vn(i)).transitive_closure()).collect();
    sources.extend((0..TERMS).map(|i| HFSet::singleton(z(i)).transitive_closure()));
    let mut tables: Vec<Vec<Vec<bool>>> = sources.into_par_iter().map(|t| table(t, 0..DEPTHS)).collect();
    let target = table(HFSet::empty(), 2..DEPTHS + 2);
    let zs = tables.split_off(TERMS);
    let vs = tables;
    let mut group = GroupReport::new("vn-z");
    let mut antecedent = 0u64;
    for d in 0..DEPTHS as usize {
        for (vi, v) in vs.iter().enumerate() {
            for (zi, zt) in zs.iter().enumerate() {
                for a in 0..n {
                    let premise = v[d][a] && zt[d][a];
                    antecedent += premise as u64;
                    group.check(
                        !premise || target[d][a],
                        || format!("n={d} v={vi}_VN z={zi}_Z a=#{a}"),
                        || format!("a lies in both P^{d} closures but not in P^{}(empty)", d + 2),
                    );
                }
            }
        }
    }
    vec![group.noted(format!(
        "n<{DEPTHS}, v,z<={}, a<2^{}; {antecedent} implications had a true premise",
        TERMS - 1,
        budget.codes
    ))]
}

// ------------------------------------------------------- bounding and rank

fn corpus_envs(budget: &Budget, group: &str, check: impl Fn(&str, &HFSet, &HFSet, &mut GroupReport) + Sync) -> GroupReport {
    let parts: Vec<GroupReport> = CORPUS
        .par_iter()
        .enumerate()
        .map(|(i, src)| {
            let mut g = GroupReport::new(group);
            let mut rng = rng_for(budget, group, i as u64);
            for _ in 0..budget.envs {
                let a = random_set(&mut rng, budget.env_bits);
                let b = random_set(&mut rng, budget.env_bits);
                check(src, &a, &b, &mut g);
            }
            g
        })
        .collect();
    let mut out = GroupReport::new(group);
    for p in parts {
        out.merge(p);
    }
    out.noted(format!("{} terms x {} environments below 2^{}", CORPUS.len(), budget.envs, budget.env_bits))
}

fn env(a: &HFSet, b: &HFSet) -> Env {
    Env::from([("a".to_string(), a.clone()), ("b".to_string(), b.clone())])
}

/// Some(true) when the value lies in P^bound(TC(env)), None on error.
fn within_bound(src: &str, a: &HFSet, b: &HFSet, budget: &Budget) -> Result<bool> {
    let t = parse_term(src)?;
    let v = eval_term(&t, &env(a, b), budget)?;
    let tc = HFSet::pair(a.clone(), b.clone()).transitive_closure();
    Ok(IteratedPower::new(tc).contains(&v, bound_of(&t)))
}

fn within_rank(src: &str, a: &HFSet, b: &HFSet, budget: &Budget) -> Result<bool> {
    let t = parse_term(src)?;
    let v = eval_term(&t, &env(a, b), budget)?;
    Ok(v.rank() < a.rank().max(b.rank()) + rank_bound_of(&t))
}

/// Shrinks `a` then `b` while `holds` keeps reporting a failure.
fn shrink_env(a: &HFSet, b: &HFSet, holds: impl Fn(&HFSet, &HFSet) -> bool) -> (HFSet, HFSet) {
    let a = minimize(a.clone(), |x| !holds(x, b));
    let b = minimize(b.clone(), |y| !holds(&a, y));
    (a, b)
}

fn env_check(
    g: &mut GroupReport,
    src: &str,
    a: &HFSet,
    b: &HFSet,
    budget: &Budget,
    f: impl Fn(&str, &HFSet, &HFSet, &Budget) -> Result<bool>,
    what: &str,
) {
    match f(src, a, b, budget) {
        Ok(true) => g.cases += 1,
        Ok(false) => {
            let (a, b) = shrink_env(a, b, |x, y| f(src, x, y, budget).unwrap_or(true));
            g.cases += 1;
            g.fail(format!("t={src} a={} b={}", show(&a), show(&b)), format!("{what} exceeded"));
        }
        Err(e) => {
            g.cases += 1;
            g.fail(format!("t={src} a={} b={}", show(a), show(b)), e.to_string());
        }
    }
}

fn bounding(budget: &Budget) -> Vec<GroupReport> {
    vec![corpus_envs(budget, "membership", |src, a, b, g| {
        env_check(g, src, a, b, budget, within_bound, "membership bound")
    })]
}

fn rank(budget: &Budget) -> Vec<GroupReport> {
    let power = par_range("power", 1 << budget.env_bits, |c, g| {
        let a = HFSet::from_code(c);
        if let Some(p) = g.ok(a.power_set(budget), || format!("a=#{c}")) {
            g.check(rank_fast(&p) == rank_fast(&a) + 1, || format!("a=#{c}"), || "rank(P(a)) != rank(a)+1".into());
        }
    });
    let members = par_range("members", 1 << budget.codes, |c, g| {
        let s = HFSet::from_code(c);
        let r = rank_fast(&s);
        let bad = |s: &HFSet| s.members().iter().any(|a| rank_fast(a) + 1 > rank_fast(s));
        g.check(!bad(&s) && (c != 0 || r == 0), || format!("S={}", show(&minimize(s.clone(), bad))), || {
            "a member's rank is not below rank(S)".into()
        });
    });
    let mut skipped = 0u64;
    let mut exact = GroupReport::new("exact");
    for c in 0..1u64 << budget.codes.min(12) {
        let s = HFSet::from_code(c);
        if s.transitive_closure().len() > budget.fan {
            skipped += 1;
            continue;
        }
        if let Some(l) = exact.ok(rank_exact(&s, budget), || format!("S=#{c}")) {
            exact.check(l.len() as u32 == rank_fast(&s), || format!("S=#{c}"), || {
                format!("exact rank {} vs fast {}", l.len(), rank_fast(&s))
            });
        }
    }
    let exact = exact.noted(format!(
        "S below 2^{}; {skipped} skipped with |TC(S)| above the fan bound {}",
        budget.codes.min(12),
        budget.fan
    ));
    let terms = corpus_envs(budget, "term-rank", |src, a, b, g| env_check(g, src, a, b, budget, within_rank, "rank bound"));
    vec![power, members, exact, terms]
}

// ----------------------------------------------------------------- numerals

const INNER: &[&str] = &["vn", "z", "ch"];

fn value_of_term(t: &Term) -> Option<BigUint> {
    t.as_numeral().map(|n| n.value())
}

/// Terms 0, 1, 2, … of `sys` until `want` or the first error.
fn walk(sys: &System, want: u64, budget: &Budget) -> (Vec<Term>, Option<Error>) {
    let mut out: Vec<Term> = Vec::new();
    while (out.len() as u64) < want {
        let next = match out.last() {
            None => Ok(sys.initial()),
            Some(t) => sys.successor(t, budget),
        };
        match next {
            Ok(t) => out.push(t),
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}

fn numeral_base(budget: &Budget) -> Vec<GroupReport> {
    let mut round = GroupReport::new("round-trip");
    let mut count = GroupReport::new("count");
    for s in 2..=4usize {
        let base = NumerationBase::vn(s).expect("VN bases");
        for len in 0..=4usize {
            let l = vn_ordering(len);
            let total = s.pow(len as u32) as u64;
            for v in 0..total {
                let v = BigUint::from(v);
                let got = numeral_from_value(&base, &v, &l).map(|n| n.coded_value());
                round.check(got.as_ref() == Ok(&v), || format!("S={s}_VN L={len}_VN v={v}"), || format!("{got:?}"));
            }
            if let Some(all) = count.ok(num_enumeration(&base, &l, budget), || format!("S={s}_VN L={len}_VN")) {
                let steps = all.windows(2).all(|w| w[1].coded_value() == w[0].coded_value() + 1u8);
                let starts = all.first().map_or(true, |n| n.coded_value().is_zero());
                count.check(all.len() as u64 == total && steps && starts, || format!("S={s}_VN L={len}_VN"), || {
                    format!("{} numerals, expected {total}", all.len())
                });
            }
        }
    }
    let mut positional = GroupReport::new("positional");
    let mut measure = GroupReport::new("measure");
    let mut recovery = GroupReport::new("recovery");
    for inner in INNER {
        for s in 2..=4usize {
            let spec = format!("base:{inner}:{s}");
            let Some(sys) = positional.ok(System::parse(&spec, budget), || spec.clone()) else { continue };
            let want = (s.pow(4) as u64).min(budget.numerals);
            let (terms, err) = walk(&sys, want, budget);
            if let Some(e) = err {
                positional.fail(format!("{spec} term {}", terms.len()), e.to_string());
            }
            for (k, t) in terms.iter().enumerate() {
                positional.check(value_of_term(t) == Some(BigUint::from(k)), || format!("{spec} term {k}"), || {
                    format!("codes {:?}", value_of_term(t))
                });
            }
            for k in [0, 1, terms.len() / 2, terms.len().saturating_sub(1)] {
                let Some(t) = terms.get(k) else { continue };
                if let Some(n) = recovery.ok(sys.recover(t, budget), || format!("{spec} term {k}")) {
                    recovery.check(n.terms == terms[..=k], || format!("{spec} term {k}"), || "recovered a different number".into());
                }
            }
            let inner_sys = System::parse(inner, budget).expect("built-in");
            for len in 0..=4u64 {
                let input = || format!("{spec} |L|={len}");
                let l = match len {
                    0 => Ok(crate::systems::SystemNumber { system: inner_sys.clone(), terms: vec![] }),
                    _ => inner_sys.nth_number(len - 1, budget),
                };
                let Some(l) = measure.ok(l, input) else { continue };
                let Some(up) = measure.ok(base_up(&sys, &l, budget), input) else { continue };
                let size_ok = up.size() == BigUint::from(s).pow(len as u32);
                let valid = up.is_valid(budget).unwrap_or(false);
                measure.check(size_ok && valid, input, || format!("|eta(L)| = {}", up.size()));
                if let Some(down) = measure.ok(base_down(&sys, &up, budget), input) {
                    measure.check(down.len() as u64 == len, input, || format!("log gives {} terms", down.len()));
                }
            }
        }
    }
    vec![round, count, positional, measure, recovery]
}

fn numeral_length(budget: &Budget) -> Vec<GroupReport> {
    const WANT: u64 = 64;
    let mut positional = GroupReport::new("positional");
    let mut transitions = GroupReport::new("transitions");
    let mut measure = GroupReport::new("measure");
    let mut recovery = GroupReport::new("recovery");
    let mut notes = Vec::new();
    for inner in INNER {
        for len in [2usize, 3] {
            let spec = format!("len:{inner}:{len}");
            let Some(sys) = positional.ok(System::parse(&spec, budget), || spec.clone()) else { continue };
            let (terms, err) = walk(&sys, WANT, budget);
            if let Some(e) = &err {
                // Running out of materializable bases is expected for CH,
                // whose seventh term has 2^65536 members. Report it.
                notes.push(format!("{spec} stops after {} terms: {e}", terms.len()));
                if !matches!(e, Error::TooLarge { .. }) {
                    positional.fail(format!("{spec} term {}", terms.len()), e.to_string());
                }
            }
            let mut seen = 0;
            for (k, t) in terms.iter().enumerate() {
                positional.check(value_of_term(t) == Some(BigUint::from(k)), || format!("{spec} term {k}"), || {
                    format!("codes {:?}", value_of_term(t))
                });
                if k == 0 {
                    continue;
                }
                let (Some(prev), Some(cur)) = (terms[k - 1].as_numeral(), t.as_numeral()) else { continue };
                let cap = BigUint::from(prev.base_size).pow(len as u32);
                let ok = if cur.base_size == prev.base_size {
                    cur.value() < cap && cur.digits.len() == len
                } else {
                    seen += 1;
                    cur.base_size == prev.base_size + 1 && cur.value() == cap
                };
                transitions.check(ok, || format!("{spec} term {k}"), || {
                    format!("base {} -> {} at value {}", prev.base_size, cur.base_size, cur.value())
                });
            }
            notes.push(format!("{spec}: {} terms, {seen} base transitions", terms.len()));
            for k in [0, 1, terms.len().saturating_sub(1)] {
                let Some(t) = terms.get(k) else { continue };
                if let Some(n) = recovery.ok(sys.recover(t, budget), || format!("{spec} term {k}")) {
                    recovery.check(n.terms == terms[..=k], || format!("{spec} term {k}"), || "recovered a different number".into());
                }
            }
            let inner_sys = System::parse(inner, budget).expect("built-in");
            for size in 2..=4u64 {
                let input = || format!("{spec} |L'|={size}");
                let want = size.pow(len as u32);
                if want > terms.len() as u64 {
                    continue;
                }
                let Some(l) = measure.ok(inner_sys.nth_number(size - 1, budget), input) else { continue };
                let Some(up) = measure.ok(len_up(&sys, &l, budget), input) else { continue };
                measure.check(up.size() == BigUint::from(want), input, || format!("{} terms", up.size()));
                if let Some(down) = measure.ok(len_down(&sys, &up, budget), input) {
                    measure.check(down.terms == l.terms, input, || format!("root gives {} terms", down.len()));
                }
            }
        }
    }
    vec![positional.noted(notes.join("; ")), transitions, measure, recovery]
}

// ------------------------------------------------------------------ lex-ack

fn lex_ack(budget: &Budget) -> Vec<GroupReport> {
    let mut order = GroupReport::new("ack0-code-order");
    let mut s = HFSet::empty();
    for k in 1..=budget.ack0 {
        s = ack0_successor(&s);
        order.check(s == HFSet::from_code(k), || format!("k={k}"), || format!("got {}", show(&s)));
    }
    let mut theorem = GroupReport::new("ack0-successor");
    if let Some(cases) = theorem.ok(ack0_theorem_check(4, budget), || "|Field| <= 4".into()) {
        let subsets: usize = cases.iter().map(|c| c.subsets).sum();
        for c in &cases {
            theorem.check(c.holds(), || format!("l_{} anchored at L_{}", c.term_len, c.anchor), || {
                format!("clause (i) {} clause (ii) {}", c.clause_i, c.clause_ii)
            });
        }
        theorem = theorem.noted(format!("{} ACK terms, {subsets} subsets compared", cases.len()));
    }
    // Lex(L) ⊊* Lex(L') for every proper prefix L of an L' with at most
    // four terms drawn from the first six sets.
    let mut seqs: Vec<Vec<u64>> = vec![vec![]];
    let mut frontier = seqs.clone();
    for _ in 0..4 {
        let mut next = Vec::new();
        for s in &frontier {
            for c in 0..6u64 {
                if !s.contains(&c) {
                    let mut t = s.clone();
                    t.push(c);
                    next.push(t);
                }
            }
        }
        seqs.extend(next.iter().cloned());
        frontier = next;
    }
    let monotone = par_range("lex-monotone", seqs.len() as u64, |i, g| {
        let seq = &seqs[i as usize];
        let long = LinearOrdering::from_terms(seq.iter().map(|&c| HFSet::from_code(c)).collect()).expect("distinct");
        let Some(big) = g.ok(lex_step(&long, budget), || format!("L'={}", show(long.carrier()))) else { return };
        for k in 0..seq.len() {
            let short = long.prefix(k);
            let input = || format!("L={} L'={}", show(short.carrier()), show(long.carrier()));
            let Some(small) = g.ok(lex_step(&short, budget), input) else { continue };
            g.check(small.is_initial_segment(&big) && small.len() < big.len(), input, || "Lex is not strictly monotone".into());
        }
    });
    let mut lex_in_ack = GroupReport::new("lex-in-ack");
    for j in 0..=4u32 {
        let input = || format!("L_{j}");
        let Some(idx) = lex_in_ack.ok(lex_index(j, budget.bits), input) else { continue };
        let Some(lj) = lex_in_ack.ok(lex_term(j, budget), input) else { continue };
        let k = idx.to_u64().expect("small");
        let same_set = lj.carrier() == &ack_term_set(k);
        let listed = System::Lex.nth_term(j as u64, budget).ok() == Some(Term::ack(idx.clone()))
            && System::Ack.nth_term(k, budget).ok() == Some(Term::ack(idx.clone()));
        lex_in_ack.check(same_set && listed, input, || format!("L_{j} is not l_{idx}"));
    }
    let transitive = par_range("transitive-fields", 257, |k, g| {
        let l = LinearOrdering::from_carrier(ack_term_set(k)).expect("ACK terms are orderings");
        g.check(l.field().is_transitive(), || format!("l_{k}"), || "field is not transitive".into());
    });
    let successor = par_range("ack-successor", 257, |k, g| {
        let l = LinearOrdering::from_carrier(ack_term_set(k)).expect("ACK terms are orderings");
        let want = LinearOrdering::from_carrier(ack_term_set(k + 1)).expect("ACK terms are orderings");
        let got = ack_successor(&l, budget);
        let anchored = lex_anchor(&l, budget).ok().flatten().map(|(j, _)| j) == Some(lex_anchor_index(&BigUint::from(k)));
        g.check(matches!(&got, Ok(Step::Value(n)) if *n == want) && anchored, || format!("l_{k}"), || {
            "successor is not l_(k+1)".into()
        });
    });
    vec![order, theorem, monotone, lex_in_ack, transitive, successor]
}

// ---------------------------------------------------------- ch-lex-measures

fn ch_lex_measures(budget: &Budget) -> Vec<GroupReport> {
    let mut iso = GroupReport::new("ch-lex");
    let mut vnz = GroupReport::new("ch-vn-z");
    for k in 0..=5u64 {
        let input = || format!("[V_0..V_{k}]");
        let Some(l) = iso.ok(System::Ch.nth_number(k, budget), input) else { continue };
        if let Some(lx) = iso.ok(ch_lex(&l, budget), input) {
            let valid = lx.is_valid(budget).unwrap_or(false);
            iso.check(valid && lx.len() == l.len(), input, || "not a LEX number of the same length".into());
            if let Some(back) = iso.ok(lex_ch(&lx, budget), input) {
                iso.check(back == l, input, || "LEX -> CH does not invert CH -> LEX".into());
            }
        }
        for (name, r) in [("VN", ch_to_vn(&l, budget)), ("Z", ch_to_z(&l, budget))] {
            if let Some(m) = vnz.ok(r, input) {
                let valid = m.is_valid(budget).unwrap_or(false);
                vnz.check(valid && m.len() == l.len(), input, || format!("{name} image has {} terms", m.len()));
            }
        }
    }
    let suplog = par_range("ack-suplog", 1 << 10, |n, g| {
        let input = || format!("[l_0..l_{n}]");
        let Some(l) = g.ok(System::Ack.nth_number(n, budget), input) else { return };
        let Some((c, anchor)) = g.ok(ack_to_ch_suplog(&l, budget), input) else { return };
        let k = anchor - 1;
        // |V_(k+2)| = |L_(k+2)| > |L_(k+1)| >= n + 1.
        let chain = (|| -> Result<bool> {
            let lk1 = lex_index(k + 1, budget.bits)?;
            let lk2 = lex_index(k + 2, budget.bits)?;
            Ok(lk2 > lk1 && lk1 >= BigUint::from(n + 1) && two_tower(k + 1, budget.bits)? == lk2)
        })();
        let valid = c.is_valid(budget).unwrap_or(false);
        g.check(valid && c.len() as u32 <= anchor && chain == Ok(true), input, || {
            format!("suplog image has {} terms, anchor has {anchor}", c.len())
        });
    });
    vec![iso, vnz, suplog]
}

// -------------------------------------------------------------- ack-closure

fn ack_closure(budget: &Budget) -> Vec<GroupReport> {
    const K_MAX: u32 = 2;
    let mut g = GroupReport::new("witness");
    for k in 0..=K_MAX {
        let (Ok(lo), Ok(hi)) = (lex_index(k, budget.bits), lex_index(k + 1, budget.bits)) else { continue };
        let (lo, hi) = (lo.to_u64().expect("small"), hi.to_u64().expect("small"));
        for n in lo..hi {
            let input = || format!("[l_0..l_{n}] at L_{k}");
            let Some(l) = g.ok(System::Ack.nth_number(n, budget), input) else { continue };
            let last = LinearOrdering::from_carrier(ack_term_set(n)).expect("ordering");
            let anchored = lex_anchor(&last, budget).ok().flatten().map(|(j, _)| j) == Some(k);
            let Some((kk, size)) = g.ok(ack_closure_witness(&BigUint::from(n), budget.bits), input) else { continue };
            let bound = BigUint::one() << l.len();
            g.check(anchored && kk == k && size > bound, input, || format!("witness size {size} vs 2^{}", l.len()));
        }
    }
    vec![g.noted(format!("anchors L_0..L_{K_MAX}"))]
}

// ------------------------------------------------------------------ ack-phi

fn ack_phi(budget: &Budget) -> Vec<GroupReport> {
    const STAGES: u32 = 3;
    let mut out = Vec::new();
    for (phi, k) in [(Phi::Double, 1u64), (Phi::Square, 4)] {
        let tag = format!("{}:{k}", phi.name());
        let mut plan_g = GroupReport::new(&format!("{tag}/plan"));
        let Some(plan) = plan_g.ok(StagePlan::new(phi, k, budget), || tag.clone()) else {
            out.push(plan_g);
            continue;
        };
        let f = |x: &BigUint| phi.apply(x, budget.bits);
        // Least N with φ(x) < 2_N for all x ≤ K, by scanning.
        let top = (0..=k).map(|x| f(&BigUint::from(x)).expect("small")).max().expect("nonempty");
        let n = (0..).find(|&n| two_tower(n, budget.bits).map_or(true, |t| top < t)).expect("exists");
        plan_g.check(plan.n == n, || tag.clone(), || format!("N = {}, scan gives {n}", plan.n));
        plan_g.check(is_regular(|x| f(x).expect("small"), k, 64), || tag.clone(), || "not regular".into());
        let mut h = vec![two_tower(n, budget.bits).expect("small")];
        for m in 1..=STAGES as usize {
            let next = f(&h[m - 1]).expect("within bits");
            h.push(next);
        }
        let mut stages = GroupReport::new(&format!("{tag}/stages"));
        let mut unreachable_starts = Vec::new();
        for m in 0..=STAGES {
            let input = || format!("{tag} stage {m}");
            let mu = m as usize;
            stages.check(plan.h(m).ok().as_ref() == Some(&h[mu]), input, || "h_m differs from iterating phi".into());
            if m < STAGES {
                stages.check(plan.regularity_holds(m).unwrap_or(false), input, || "k_(m+1) < 2^e - e fails".into());
            }
            let st = match plan.stage(m) {
                Ok(st) => st,
                Err(Error::TooLarge { .. }) => {
                    unreachable_starts.push(format!("stage {m} starts at 2_{}", n + m - 1));
                    continue;
                }
                Err(e) => {
                    stages.ok::<()>(Err(e), input);
                    continue;
                }
            };
            let start = if m == 0 { BigUint::zero() } else { two_tower(n + m - 1, budget.bits).expect("small") };
            let count = if m == 0 { h[0].clone() } else { &h[mu] - &h[mu - 1] };
            stages.check(st.h == h[mu] && st.start == start && st.count == count, input, || {
                format!("h={} start={} count={}", st.h, st.start, st.count)
            });
            if m < STAGES {
                if let Ok(next) = plan.stage(m + 1) {
                    stages.check(next.start >= &st.start + &st.count, input, || "stages overlap".into());
                    let last = &st.start + &st.count - 1u8;
                    stages.check(plan.successor(&last).ok() == Some(next.start.clone()), input, || "no jump at stage end".into());
                    let pos = plan.position_of(&next.start).ok().flatten();
                    stages.check(pos == Some(h[mu].clone()), input, || format!("next stage starts at position {pos:?}"));
                }
            }
        }
        if !unreachable_starts.is_empty() {
            stages = stages.noted(format!("past the bit cap: {}", unreachable_starts.join(", ")));
        }
        // Enumerate through stage 2 where that is small; otherwise sample.
        let mut walk_g = GroupReport::new(&format!("{tag}/terms"));
        let sys = System::AckPhi(std::sync::Arc::new(plan.clone()));
        let through = h[2].to_u64().filter(|&t| t <= budget.terms.min(1 << 16));
        if let Some(total) = through {
            if let Some(ts) = walk_g.ok(sys.enumerate(total, budget), || tag.clone()) {
                for (i, t) in ts.iter().enumerate() {
                    let pos = t.ack_index().and_then(|x| plan.position_of(x).ok().flatten());
                    walk_g.check(pos == Some(BigUint::from(i)), || format!("{tag} term {i}"), || format!("position {pos:?}"));
                }
            }
        } else {
            walk_g = walk_g.noted("h_2 too large to enumerate; stage boundaries checked instead");
        }
        let mut gamma = GroupReport::new(&format!("{tag}/gamma"));
        let mut sizes: Vec<BigUint> = (1..=16u64).map(BigUint::from).collect();
        if let Some(total) = through {
            sizes.extend((17..=total).map(BigUint::from));
        }
        for hj in &h[..3] {
            sizes.extend([hj - 1u8, hj.clone(), hj + 1u8]);
        }
        sizes.retain(|m| m <= &h[2] && !m.is_zero());
        sizes.sort();
        sizes.dedup();
        for m in &sizes {
            let input = || format!("{tag} |L|={m}");
            let Some(g) = gamma.ok(plan.gamma_size(m), input) else { continue };
            let Some(fm) = gamma.ok(f(m), input) else { continue };
            gamma.check(fm <= g && h.contains(&g), input, || format!("phi(|L|) = {fm}, gamma = {g}"));
        }
        out.extend([plan_g, stages, walk_g, gamma]);
    }
    out
}

// ------------------------------------------------------- one-point-induction

fn one_point_induction(budget: &Budget) -> Vec<GroupReport> {
    let g = par_range("schema", budget.samples as u64, |i, g| {
        let mut rng = rng_for(budget, "one-point", i);
        let s = random_set(&mut rng, 7);
        let subsets: Vec<HFSet> = (0..1u64 << s.len())
            .map(|mask| HFSet::from_members((0..s.len()).filter(|b| mask >> b & 1 == 1).map(|b| s.members()[b].clone())))
            .collect();
        let mut t: HashSet<HFSet> = HashSet::new();
        match rng.gen_range(0..3) {
            // Random families, where the hypotheses rarely hold.
            0 => t.extend(subsets.iter().filter(|_| rng.gen_bool(0.5)).cloned()),
            // The closure of ∅ under extension, possibly with a hole.
            1 | _ => {
                let cap = if rng.gen_bool(0.5) { s.len() } else { rng.gen_range(0..=s.len()) };
                t.extend(subsets.iter().filter(|x| x.len() <= cap).cloned());
                if rng.gen_bool(0.3) && !subsets.is_empty() {
                    let hole = &subsets[rng.gen_range(0..subsets.len())];
                    t.remove(hole);
                }
            }
        }
        let base = t.contains(&HFSet::empty());
        let step = t.iter().all(|x| s.members().iter().all(|y| t.contains(&x.with(y.clone()))));
        let family = HFSet::from_members(t.iter().cloned());
        g.check(!(base && step) || t.contains(&s), || format!("S={} T={}", show(&s), show(&family)), || {
            "hypotheses hold but S is not in T".into()
        });
    });
    vec![g]
}
