//! Hereditarily finite pure sets, hash-consed and ordered by Ackermann code.
//!
//! Every distinct set is built exactly once; equality is pointer identity.
//! Codes are computed lazily because a set like 6_VN has a code with about
//! 2^(2^2059) bits. Ordering never needs codes: `a < b` in code order iff
//! the greatest element of the symmetric difference (itself in code order)
//! belongs to `b`.

use crate::budget::Budget;
use crate::error::{too_large, Error, Result};
use dashmap::mapref::entry::Entry;
use dashmap::DashMap;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use once_cell::sync::{Lazy, OnceCell};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering as AtOrd};
use std::sync::{Arc, Weak};

/// Codes longer than this many bits are never materialized.
pub const CODE_BITS_MAX: u64 = 1 << 24;

const SMALL: usize = 1 << 16;

struct Node {
    id: u64,
    children: Box<[HFSet]>,
    rank: u32,
    code: OnceCell<Option<BigUint>>,
}

/// A hereditarily finite pure set.
#[derive(Clone)]
pub struct HFSet(Arc<Node>);

static NEXT_ID: AtomicU64 = AtomicU64::new(1);
static INSERTS: AtomicUsize = AtomicUsize::new(0);
static PURGE_AT: AtomicUsize = AtomicUsize::new(1 << 18);
static TABLE: Lazy<DashMap<Box<[u64]>, Weak<Node>>> = Lazy::new(DashMap::new);
static EMPTY: Lazy<HFSet> = Lazy::new(|| intern(Vec::new()));
static SMALL_TABLE: OnceCell<Vec<HFSet>> = OnceCell::new();

fn make_node(children: Vec<HFSet>) -> Arc<Node> {
    let rank = children.iter().map(|c| c.rank() + 1).max().unwrap_or(0);
    Arc::new(Node {
        id: NEXT_ID.fetch_add(1, AtOrd::Relaxed),
        children: children.into_boxed_slice(),
        rank,
        code: OnceCell::new(),
    })
}

/// `children` must be strictly increasing in code order.
fn intern(children: Vec<HFSet>) -> HFSet {
    let key: Box<[u64]> = children.iter().map(HFSet::id).collect();
    // Anything dropped while a shard is locked must not be an HFSet, so the
    // unused children are carried out of the locked region.
    let mut spare = None;
    let node = match TABLE.entry(key) {
        Entry::Occupied(mut e) => match e.get().upgrade() {
            Some(n) => {
                spare = Some(children);
                n
            }
            None => {
                let n = make_node(children);
                e.insert(Arc::downgrade(&n));
                n
            }
        },
        Entry::Vacant(e) => {
            let n = make_node(children);
            e.insert(Arc::downgrade(&n));
            INSERTS.fetch_add(1, AtOrd::Relaxed);
            n
        }
    };
    drop(spare);
    if INSERTS.load(AtOrd::Relaxed) > PURGE_AT.load(AtOrd::Relaxed) {
        purge();
    }
    HFSet(node)
}

fn purge() {
    INSERTS.store(0, AtOrd::Relaxed);
    TABLE.retain(|_, w| w.strong_count() > 0);
    PURGE_AT.store(TABLE.len().max(1 << 18), AtOrd::Relaxed);
}

/// Number of live interned sets (approximate under concurrency).
pub fn interned_count() -> usize {
    TABLE.iter().filter(|e| e.value().strong_count() > 0).count()
}

fn cmp_sets(a: &HFSet, b: &HFSet) -> Ordering {
    if Arc::ptr_eq(&a.0, &b.0) {
        return Ordering::Equal;
    }
    let (ca, cb) = (&a.0.children, &b.0.children);
    let (mut i, mut j) = (ca.len(), cb.len());
    loop {
        match (i, j) {
            (0, 0) => return Ordering::Equal,
            (0, _) => return Ordering::Less,
            (_, 0) => return Ordering::Greater,
            _ => {
                let (x, y) = (&ca[i - 1], &cb[j - 1]);
                if Arc::ptr_eq(&x.0, &y.0) {
                    i -= 1;
                    j -= 1;
                } else {
                    return cmp_sets(x, y);
                }
            }
        }
    }
}

fn set_bits(n: &BigUint) -> Vec<u64> {
    let mut out = Vec::new();
    for (w, word) in n.iter_u64_digits().enumerate() {
        let mut word = word;
        while word != 0 {
            let b = word.trailing_zeros() as u64;
            out.push(w as u64 * 64 + b);
            word &= word - 1;
        }
    }
    out
}

fn small_table() -> &'static [HFSet] {
    SMALL_TABLE.get_or_init(|| {
        let mut t: Vec<HFSet> = Vec::with_capacity(SMALL);
        for n in 0..SMALL {
            let mut kids = Vec::new();
            let mut w = n;
            while w != 0 {
                kids.push(t[w.trailing_zeros() as usize].clone());
                w &= w - 1;
            }
            let s = intern(kids);
            let _ = s.0.code.set(Some(BigUint::from(n)));
            t.push(s);
        }
        t
    })
}

impl HFSet {
    pub fn empty() -> HFSet {
        EMPTY.clone()
    }

    /// Build from members in any order, with repetitions allowed.
    pub fn from_members<I: IntoIterator<Item = HFSet>>(members: I) -> HFSet {
        let mut v: Vec<HFSet> = members.into_iter().collect();
        v.sort_by(cmp_sets);
        v.dedup();
        intern(v)
    }

    /// Build from members already strictly increasing in code order.
    pub(crate) fn from_sorted(v: Vec<HFSet>) -> HFSet {
        debug_assert!(v.windows(2).all(|w| cmp_sets(&w[0], &w[1]) == Ordering::Less));
        intern(v)
    }

    pub fn singleton(a: HFSet) -> HFSet {
        intern(vec![a])
    }

    pub fn pair(a: HFSet, b: HFSet) -> HFSet {
        match cmp_sets(&a, &b) {
            Ordering::Equal => intern(vec![a]),
            Ordering::Less => intern(vec![a, b]),
            Ordering::Greater => intern(vec![b, a]),
        }
    }

    /// Kuratowski ordered pair {{a},{a,b}}.
    pub fn ordered_pair(a: HFSet, b: HFSet) -> HFSet {
        HFSet::pair(HFSet::singleton(a.clone()), HFSet::pair(a, b))
    }

    /// Carrier {{t₁},{t₁,t₂},…} of the ordering listing `terms`.
    /// Terms are assumed pairwise distinct.
    pub(crate) fn kuratowski(terms: &[HFSet]) -> HFSet {
        let mut acc = HFSet::empty();
        let mut segs = Vec::with_capacity(terms.len());
        for t in terms {
            acc = acc.with(t.clone());
            segs.push(acc.clone());
        }
        HFSet::from_members(segs)
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    /// Members in increasing code order.
    pub fn members(&self) -> &[HFSet] {
        &self.0.children
    }

    pub fn len(&self) -> usize {
        self.0.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.children.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.children.binary_search_by(|c| cmp_sets(c, x)).is_ok()
    }

    pub fn is_subset(&self, other: &HFSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.members().iter();
        'outer: for a in self.members() {
            for b in it.by_ref() {
                match cmp_sets(a, b) {
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => continue,
                    Ordering::Less => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn is_proper_subset(&self, other: &HFSet) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    fn merge(&self, other: &HFSet, keep_a: bool, keep_b: bool, keep_both: bool) -> HFSet {
        let (a, b) = (self.members(), other.members());
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Greater
            } else if j == b.len() {
                Ordering::Less
            } else {
                cmp_sets(&a[i], &b[j])
            };
            match ord {
                Ordering::Less => {
                    if keep_a {
                        out.push(a[i].clone());
                    }
                    i += 1;
                }
                Ordering::Greater => {
                    if keep_b {
                        out.push(b[j].clone());
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    if keep_both {
                        out.push(a[i].clone());
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        intern(out)
    }

    pub fn union(&self, other: &HFSet) -> HFSet {
        self.merge(other, true, true, true)
    }

    pub fn intersection(&self, other: &HFSet) -> HFSet {
        self.merge(other, false, false, true)
    }

    pub fn difference(&self, other: &HFSet) -> HFSet {
        self.merge(other, true, false, false)
    }

    pub fn symmetric_difference(&self, other: &HFSet) -> HFSet {
        self.merge(other, true, true, false)
    }

    /// self ∪ {x}
    pub fn with(&self, x: HFSet) -> HFSet {
        match self.0.children.binary_search_by(|c| cmp_sets(c, &x)) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.children.to_vec();
                v.insert(pos, x);
                intern(v)
            }
        }
    }

    /// self − {x}
    pub fn without(&self, x: &HFSet) -> HFSet {
        match self.0.children.binary_search_by(|c| cmp_sets(c, x)) {
            Ok(pos) => {
                let mut v = self.0.children.to_vec();
                v.remove(pos);
                intern(v)
            }
            Err(_) => self.clone(),
        }
    }

    pub fn union_all(&self) -> HFSet {
        HFSet::from_members(self.members().iter().flat_map(|x| x.members().iter().cloned()))
    }

    /// P(S). Subset masks in numeric order are already in code order.
    pub fn power_set(&self, budget: &Budget) -> Result<HFSet> {
        let n = self.len();
        if n >= 64 || (1u64 << n) > budget.power {
            return Err(too_large(format!("power set of a {n}-element set"), budget.power));
        }
        let kids = self.members();
        let subsets = (0u64..1 << n)
            .map(|mask| {
                let v = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| kids[i].clone()).collect();
                intern(v)
            })
            .collect();
        Ok(intern(subsets))
    }

    pub fn comprehension(&self, mut pred: impl FnMut(&HFSet) -> bool) -> HFSet {
        intern(self.members().iter().filter(|x| pred(x)).cloned().collect())
    }

    pub fn replacement(&self, f: impl FnMut(&HFSet) -> HFSet) -> HFSet {
        HFSet::from_members(self.members().iter().map(f))
    }

    pub fn try_comprehension(&self, mut pred: impl FnMut(&HFSet) -> Result<bool>) -> Result<HFSet> {
        let mut out = Vec::new();
        for x in self.members() {
            if pred(x)? {
                out.push(x.clone());
            }
        }
        Ok(intern(out))
    }

    pub fn try_replacement(&self, f: impl FnMut(&HFSet) -> Result<HFSet>) -> Result<HFSet> {
        let v = self.members().iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(HFSet::from_members(v))
    }

    /// Everything membership-reachable from the members of S.
    pub fn transitive_closure(&self) -> HFSet {
        let mut seen: HashSet<u64> = HashSet::new();
        let mut out = Vec::new();
        let mut stack: Vec<HFSet> = self.members().to_vec();
        while let Some(x) = stack.pop() {
            if seen.insert(x.id()) {
                stack.extend(x.members().iter().cloned());
                out.push(x);
            }
        }
        HFSet::from_members(out)
    }

    pub fn is_transitive(&self) -> bool {
        self.members().iter().all(|x| x.is_subset(self))
    }

    /// All ε-chains for S as Kuratowski orderings: first term in S, each
    /// later term a member of its predecessor.
    pub fn epsilon_fan(&self, budget: &Budget) -> Result<HFSet> {
        let tc = self.transitive_closure();
        if tc.len() > budget.fan {
            return Err(too_large(format!("ε-fan with |TC| = {}", tc.len()), budget.fan));
        }
        fn walk(chain: &mut Vec<HFSet>, out: &mut Vec<HFSet>) {
            out.push(HFSet::kuratowski(chain));
            let last = chain.last().unwrap().clone();
            for y in last.members() {
                chain.push(y.clone());
                walk(chain, out);
                chain.pop();
            }
        }
        let mut out = Vec::new();
        for x in self.members() {
            walk(&mut vec![x.clone()], &mut out);
        }
        Ok(HFSet::from_members(out))
    }

    /// The member with least code.
    pub fn choose(&self) -> Result<HFSet> {
        self.members().first().cloned().ok_or(Error::Empty("choose from ∅"))
    }

    /// Ackermann code, or `None` when it exceeds `CODE_BITS_MAX` bits.
    pub fn code(&self) -> Option<&BigUint> {
        self.0
            .code
            .get_or_init(|| {
                let Some(top) = self.members().last() else {
                    return Some(BigUint::zero());
                };
                let top = top.code()?.to_u64()?;
                if top >= CODE_BITS_MAX {
                    return None;
                }
                let mut v = BigUint::zero();
                for c in self.members() {
                    v.set_bit(c.code()?.to_u64()?, true);
                }
                Some(v)
            })
            .as_ref()
    }

    pub fn code_u64(&self) -> Option<u64> {
        self.code().and_then(|c| c.to_u64())
    }

    pub fn encode(&self) -> Result<BigUint> {
        self.code().cloned().ok_or_else(|| too_large("Ackermann code", format!("{CODE_BITS_MAX} bits")))
    }

    pub fn from_code(n: u64) -> HFSet {
        if n < SMALL as u64 {
            return small_table()[n as usize].clone();
        }
        let mut kids = Vec::new();
        let mut w = n;
        while w != 0 {
            kids.push(HFSet::from_code(w.trailing_zeros() as u64));
            w &= w - 1;
        }
        let s = intern(kids);
        let _ = s.0.code.set(Some(BigUint::from(n)));
        s
    }

    pub fn decode(n: &BigUint) -> HFSet {
        if let Some(small) = n.to_u64() {
            return HFSet::from_code(small);
        }
        let kids = set_bits(n).into_iter().map(HFSet::from_code).collect();
        let s = intern(kids);
        let _ = s.0.code.set(Some(n.clone()));
        s
    }

    /// Compact brace notation, e.g. `{{},{{}}}`.
    pub fn braces(&self) -> String {
        let mut s = String::new();
        self.write_braces(&mut s);
        s
    }

    fn write_braces(&self, out: &mut String) {
        out.push('{');
        for (i, m) in self.members().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            m.write_braces(out);
        }
        out.push('}');
    }

    /// Brace notation, or `None` if it would exceed `max` characters.
    pub fn braces_limited(&self, max: usize) -> Option<String> {
        let mut memo = HashMap::new();
        if self.brace_len(&mut memo, max) > max {
            None
        } else {
            Some(self.to_string())
        }
    }

    fn brace_len(&self, memo: &mut HashMap<u64, usize>, cap: usize) -> usize {
        if let Some(&n) = memo.get(&self.id()) {
            return n;
        }
        let mut n = 2 + 2 * self.len();
        for m in self.members() {
            n = n.saturating_add(m.brace_len(memo, cap));
            if n > cap {
                break;
            }
        }
        memo.insert(self.id(), n);
        n
    }

    /// `{"code": "<decimal>", "children": [...]}`; code is null when too large.
    pub fn to_json(&self) -> Value {
        json!({
            "code": self.code().map(|c| c.to_string()),
            "children": self.members().iter().map(HFSet::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<HFSet> {
        let bad = |m: &str| Error::Invalid(format!("set JSON: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let code = match obj.get("code") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.parse::<BigUint>().map_err(|_| bad("code is not a natural"))?),
            Some(_) => return Err(bad("code must be a decimal string")),
        };
        let set = match obj.get("children") {
            Some(Value::Array(kids)) => {
                HFSet::from_members(kids.iter().map(HFSet::from_json).collect::<Result<Vec<_>>>()?)
            }
            Some(_) => return Err(bad("children must be an array")),
            None => HFSet::decode(code.as_ref().ok_or_else(|| bad("need code or children"))?),
        };
        if let (Some(c), Some(actual)) = (&code, set.code()) {
            if c != actual {
                return Err(bad("code disagrees with children"));
            }
        }
        Ok(set)
    }
}

/// Decides a ∈ P^n(T) for transitive T without building P^n(T).
///
/// Since T is transitive, T ⊆ P(T), so the iterated powers increase and
/// a ∈ P^n(T) iff a ∈ T or (n > 0 and every member of a is in P^(n-1)(T)).
pub struct IteratedPower {
    t: HFSet,
    memo: HashMap<(u64, u32), bool>,
}

impl IteratedPower {
    pub fn new(t: HFSet) -> IteratedPower {
        IteratedPower { t, memo: HashMap::new() }
    }

    pub fn contains(&mut self, a: &HFSet, n: u32) -> bool {
        if self.t.contains(a) {
            return true;
        }
        if n == 0 {
            return false;
        }
        if let Some(&r) = self.memo.get(&(a.id(), n)) {
            return r;
        }
        let r = a.members().iter().all(|m| self.contains(m, n - 1));
        self.memo.insert((a.id(), n), r);
        r
    }
}

pub fn member_of_iterated_power(a: &HFSet, n: u32, t: &HFSet) -> bool {
    IteratedPower::new(t.clone()).contains(a, n)
}

impl PartialEq for HFSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for HFSet {}

impl Hash for HFSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl Ord for HFSet {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_sets(self, other)
    }
}

impl PartialOrd for HFSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for HFSet {
    fn default() -> Self {
        HFSet::empty()
    }
}

/// Top level members are spaced when there are at least two of them:
/// `{ {}, {{}} }`, but `{{}}`.
impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() < 2 {
            return f.write_str(&self.braces());
        }
        f.write_str("{ ")?;
        for (i, m) in self.members().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&m.braces())?;
        }
        f.write_str(" }")
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.code() {
            Some(c) if c.bits() <= 64 => write!(f, "#{c}"),
            _ => match self.braces_limited(200) {
                Some(s) => f.write_str(&s),
                None => write!(f, "<set rank {} size {}>", self.rank(), self.len()),
            },
        }
    }
}

struct TextParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl TextParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { col: self.pos + 1, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn set(&mut self) -> Result<HFSet> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'#') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.err("expected digits after `#`"));
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(HFSet::decode(&digits.parse::<BigUint>().unwrap()))
            }
            Some(b'{') => {
                self.pos += 1;
                let mut kids = Vec::new();
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b'}') {
                    self.pos += 1;
                    return Ok(HFSet::empty());
                }
                loop {
                    kids.push(self.set()?);
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b',') => self.pos += 1,
                        Some(b'}') => {
                            self.pos += 1;
                            return Ok(HFSet::from_members(kids));
                        }
                        _ => return Err(self.err("expected `,` or `}`")),
                    }
                }
            }
            _ => Err(self.err("expected `{` or `#`")),
        }
    }
}

/// Parses brace notation, `#n` code notation, or a mixture such as `{#3, {}}`.
impl FromStr for HFSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<HFSet> {
        let mut p = TextParser { src: s.as_bytes(), pos: 0 };
        let set = p.set()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(set)
    }
}

impl serde::Serialize for HFSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
