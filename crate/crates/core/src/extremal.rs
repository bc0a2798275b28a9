//! Exact values of `ex_P(n)`, `f_P(t, s)` and `g_P(t, s)` for a permutation
//! matrix `P`, and checkers that compare them against the row-count bounds.
//!
//! Both searches add host rows top to bottom and keep a *profile*: for every
//! `i < k`, the set of column tuples that can host the top `i` rows of `P`
//! using the rows placed so far. A column of a new row is forbidden exactly
//! when it completes some tuple at level `k - 1`, so containment is never
//! re-checked from scratch.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize, Serializer};

use crate::bounds::{lemma21_bound, lemma22_terms, Lemma22Terms};
use crate::error::{Error, Result};
use crate::matrix::{from_matrix, BinaryMatrix, PermutationMatrix};
use crate::perm::blockable_decompositions;
use crate::serde_big;

/// Widest host accepted by the profile searches.
pub const MAX_WIDTH: usize = 20;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Bitset over the column tuples of every level below `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
struct State(Vec<u64>);

impl State {
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
}

struct Profile {
    width: usize,
    /// Tuples of level `k - 1` occupy `last_level..total`.
    last_level: usize,
    total: usize,
    /// For tuples below level `k - 1`: `(column, index of extended tuple)`.
    children: Vec<Vec<(usize, usize)>>,
    /// For tuples at level `k - 1`: columns that complete an occurrence.
    completes: Vec<u64>,
}

impl Profile {
    fn new(pattern: &PermutationMatrix, width: usize) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::PreconditionViolated(format!(
                "width {width} exceeds {MAX_WIDTH}"
            )));
        }
        let pcols: Vec<usize> = pattern.row_columns();
        let k = pcols.len();
        if k == 0 {
            return Err(Error::EmptyPattern);
        }
        // fits[i][j]: column j may host pattern row i given tuple t
        let fits = |tuple: &[usize], j: usize| {
            let i = tuple.len();
            !tuple.contains(&j) && tuple.iter().zip(&pcols).all(|(&h, &p)| (h < j) == (p < pcols[i]))
        };
        let mut levels: Vec<Vec<Vec<usize>>> = vec![vec![vec![]]];
        for _ in 1..k {
            let prev = levels.last().unwrap();
            let next = prev
                .iter()
                .flat_map(|t| {
                    (0..width).filter(|&j| fits(t, j)).map(move |j| {
                        let mut u = t.clone();
                        u.push(j);
                        u
                    })
                })
                .collect();
            levels.push(next);
        }
        let mut offsets = vec![0];
        for level in &levels {
            offsets.push(offsets.last().unwrap() + level.len());
        }
        let index: HashMap<&[usize], usize> = levels
            .iter()
            .zip(&offsets)
            .flat_map(|(level, &off)| level.iter().enumerate().map(move |(i, t)| (t.as_slice(), off + i)))
            .collect();
        let mut children = Vec::new();
        let mut completes = Vec::new();
        for (depth, level) in levels.iter().enumerate() {
            for t in level {
                if depth + 1 < k {
                    let mut kids = Vec::new();
                    for j in (0..width).filter(|&j| fits(t, j)) {
                        let mut u = t.clone();
                        u.push(j);
                        kids.push((j, index[u.as_slice()]));
                    }
                    children.push(kids);
                } else {
                    let mask = (0..width).filter(|&j| fits(t, j)).fold(0u64, |m, j| m | 1 << j);
                    completes.push(mask);
                }
            }
        }
        Ok(Profile {
            width,
            last_level: offsets[k - 1],
            total: offsets[k],
            children,
            completes,
        })
    }

    fn root(&self) -> State {
        let mut s = State(vec![0; self.total.div_ceil(64)]);
        s.set(0);
        s
    }

    fn forbidden(&self, state: &State) -> u64 {
        (self.last_level..self.total)
            .filter(|&i| state.get(i))
            .fold(0, |m, i| m | self.completes[i - self.last_level])
    }

    /// The profile after appending a row that avoids completing the pattern.
    fn append(&self, state: &State, row: u64) -> State {
        let mut next = state.clone();
        for i in (0..self.last_level).filter(|&i| state.get(i)) {
            for &(j, child) in &self.children[i] {
                if row >> j & 1 == 1 {
                    next.set(child);
                }
            }
        }
        next
    }

    fn full_row(&self) -> u64 {
        (1u64 << self.width) - 1
    }
}

struct NodeCounter {
    used: u64,
    budget: u64,
}

impl NodeCounter {
    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.budget
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub value: usize,
    pub witness: BinaryMatrix,
    pub nodes_explored: u64,
    pub proven_optimal: bool,
}

/// `ex_P(n)`: the most ones in an `n x n` 0-1 matrix avoiding `P`.
///
/// Branch and bound over cells in row-major order. The bound at a cell is
/// the ones placed so far, plus the still-allowed cells of the current row,
/// plus the exact optimum for the rows below (computed first, for every
/// smaller row count). If the budget runs out the best matrix found is
/// returned with `proven_optimal = false`.
pub fn exfn_exact(pattern: &PermutationMatrix, n: usize, budget: u64) -> Result<ExtremalResult> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be at least 1".into()));
    }
    let profile = Profile::new(pattern, n)?;
    let mut counter = NodeCounter { used: 0, budget };
    let mut rect = vec![0usize];
    let mut last = None;
    for rows in 1..=n {
        let mut search = RowMajor {
            profile: &profile,
            rect: &rect,
            rows,
            masks: vec![0; rows],
            best: None,
            counter: &mut counter,
            exhausted: false,
        };
        search.row(0, 0, profile.root());
        let exhausted = search.exhausted;
        let found = search.best.take();
        if exhausted {
            // the zero matrix is the fallback witness
            let (value, masks) = found
                .filter(|_| rows == n)
                .unwrap_or_else(|| (0, vec![0; n]));
            return Ok(ExtremalResult {
                value,
                witness: BinaryMatrix::from_row_masks(n, &masks),
                nodes_explored: counter.used,
                proven_optimal: false,
            });
        }
        let (value, masks) = found.expect("a complete search reaches a leaf");
        rect.push(value);
        last = Some((value, masks));
    }
    let (value, masks) = last.unwrap();
    Ok(ExtremalResult {
        value,
        witness: BinaryMatrix::from_row_masks(n, &masks),
        nodes_explored: counter.used,
        proven_optimal: true,
    })
}

struct RowMajor<'a> {
    profile: &'a Profile,
    /// `rect[m]`: optimum for `m` rows of the same width.
    rect: &'a [usize],
    rows: usize,
    masks: Vec<u64>,
    best: Option<(usize, Vec<u64>)>,
    counter: &'a mut NodeCounter,
    exhausted: bool,
}

impl RowMajor<'_> {
    fn beats(&self, bound: usize) -> bool {
        self.best.as_ref().is_none_or(|(b, _)| bound > *b)
    }

    fn row(&mut self, r: usize, ones: usize, state: State) {
        if r == self.rows {
            if self.beats(ones) {
                self.best = Some((ones, self.masks.clone()));
            }
            return;
        }
        let allowed = self.profile.full_row() & !self.profile.forbidden(&state);
        self.cell(r, 0, ones, allowed, 0, &state);
    }

    fn cell(&mut self, r: usize, c: usize, ones: usize, allowed: u64, row: u64, state: &State) {
        if self.exhausted {
            return;
        }
        if !self.counter.tick() {
            self.exhausted = true;
            return;
        }
        let rest = (allowed >> c).count_ones() as usize;
        let bound = ones + rest + self.rect[self.rows - r - 1];
        if !self.beats(bound) {
            return;
        }
        if c == self.profile.width || rest == 0 {
            self.masks[r] = row;
            let next = self.profile.append(state, row);
            self.row(r + 1, ones, next);
            return;
        }
        if allowed >> c & 1 == 1 {
            self.cell(r, c + 1, ones + 1, allowed, row | 1 << c, state);
        }
        self.cell(r, c + 1, ones, allowed, row, state);
    }
}

/// `f_P(t, s)`, which is infinite when rows of weight `s` fit in `k - 1`
/// columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FptsValue {
    Finite(usize),
    Unbounded,
}

impl FptsValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            FptsValue::Finite(v) => Some(v),
            FptsValue::Unbounded => None,
        }
    }
}

impl fmt::Display for FptsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FptsValue::Finite(v) => write!(f, "{v}"),
            FptsValue::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for FptsValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FptsValue::Finite(v) => s.serialize_u64(*v as u64),
            FptsValue::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for FptsValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            N(u64),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::N(v) => Ok(FptsValue::Finite(v as usize)),
            Repr::S(s) if s == "unbounded" => Ok(FptsValue::Unbounded),
            Repr::S(s) => Err(serde::de::Error::custom(format!("bad value {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FptsResult {
    pub value: FptsValue,
    /// `value` rows of width `t` (capped at `n_cap` rows); empty when
    /// unbounded.
    pub witness: BinaryMatrix,
    pub nodes_explored: u64,
    /// False when the true value exceeds `n_cap`; `value` is then `n_cap`.
    pub complete: bool,
}

/// `f_P(t, s)`: the most rows in a `t`-column 0-1 matrix avoiding `P` whose
/// rows each hold at least `s` ones. Duplicate rows are allowed.
///
/// Memoized search over profiles. A row that leaves the profile unchanged
/// can be repeated forever, which is how unbounded cases are detected; any
/// other row strictly grows the profile, so the search terminates.
pub fn fpts_exact(
    pattern: &PermutationMatrix,
    t: usize,
    s: usize,
    n_cap: usize,
    budget: u64,
) -> Result<FptsResult> {
    if t == 0 {
        return Err(Error::PreconditionViolated("t must be at least 1".into()));
    }
    if s == 0 {
        return Err(Error::ZeroRowWeight);
    }
    if s > t {
        return Ok(FptsResult {
            value: FptsValue::Finite(0),
            witness: BinaryMatrix::zeros(0, t),
            nodes_explored: 0,
            complete: true,
        });
    }
    let profile = Profile::new(pattern, t)?;
    let mut rows: Vec<u64> = (0..=profile.full_row())
        .filter(|m| m.count_ones() as usize >= s)
        .collect();
    rows.reverse();
    let mut search = RowSearch {
        profile: &profile,
        rows: &rows,
        memo: HashMap::new(),
        counter: NodeCounter { used: 0, budget },
    };
    let root = profile.root();
    let value = search.best(&root)?;
    let nodes = search.counter.used;
    let Some(value) = value else {
        return Ok(FptsResult {
            value: FptsValue::Unbounded,
            witness: BinaryMatrix::zeros(0, t),
            nodes_explored: nodes,
            complete: true,
        });
    };
    let mut masks = Vec::new();
    let mut state = root;
    while masks.len() < value.min(n_cap) {
        let row = search.memo[&state].1;
        masks.push(row);
        state = profile.append(&state, row);
    }
    Ok(FptsResult {
        value: FptsValue::Finite(value.min(n_cap)),
        witness: BinaryMatrix::from_row_masks(t, &masks),
        nodes_explored: nodes,
        complete: value <= n_cap,
    })
}

struct RowSearch<'a> {
    profile: &'a Profile,
    /// Candidate rows, largest mask first.
    rows: &'a [u64],
    /// Rows still appendable from a profile (`None` = unbounded), with the
    /// first row of an optimal continuation.
    memo: HashMap<State, (Option<usize>, u64)>,
    counter: NodeCounter,
}

impl RowSearch<'_> {
    fn best(&mut self, state: &State) -> Result<Option<usize>> {
        if let Some(&(v, _)) = self.memo.get(state) {
            return Ok(v);
        }
        if !self.counter.tick() {
            return Err(Error::ResourceLimit(format!(
                "node budget of {} exhausted",
                self.counter.budget
            )));
        }
        let forbidden = self.profile.forbidden(state);
        let mut best: (Option<usize>, u64) = (Some(0), 0);
        for &row in self.rows {
            if row & forbidden != 0 {
                continue;
            }
            let next = self.profile.append(state, row);
            if next == *state {
                best = (None, row);
                break;
            }
            match self.best(&next)? {
                None => {
                    best = (None, row);
                    break;
                }
                Some(v) if Some(v + 1) > best.0 => best = (Some(v + 1), row),
                Some(_) => {}
            }
        }
        self.memo.insert(state.clone(), best);
        Ok(best.0)
    }
}

/// `g_P(t, s)`, the column analogue of `f_P`, as `f` of the rotated pattern.
pub fn gpts_exact(
    pattern: &PermutationMatrix,
    t: usize,
    s: usize,
    n_cap: usize,
    budget: u64,
) -> Result<FptsResult> {
    fpts_exact(&pattern.rotate90(), t, s, n_cap, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma21Report {
    pub k: usize,
    pub a: u32,
    pub t: usize,
    pub s: usize,
    /// Largest `n` for which `ex_P(n) <= k^a n` was verified.
    pub hypothesis_checked_to: usize,
    pub lhs: usize,
    #[serde(with = "serde_big::rational")]
    pub rhs: BigRational,
    pub pass: bool,
    pub nodes: u64,
}

/// Compares `f_P(t, s)` with `k^a t / (s - k^a)` after checking the linear
/// hypothesis `ex_P(n) <= k^a n` for `n <= hyp_n`.
pub fn check_lemma21(
    pattern: &PermutationMatrix,
    a: u32,
    t: usize,
    s: usize,
    hyp_n: usize,
    budget: u64,
) -> Result<Lemma21Report> {
    let k = pattern.size();
    let rhs = lemma21_bound(k as u64, a, t as u64, s as u64)?;
    let ka = (k as u64).checked_pow(a).ok_or_else(|| {
        Error::PreconditionViolated(format!("k^a overflows for k = {k}, a = {a}"))
    })?;
    let mut nodes = 0;
    for n in 1..=hyp_n {
        let ex = exfn_exact(pattern, n, budget)?;
        nodes += ex.nodes_explored;
        if !ex.proven_optimal {
            return Err(Error::ResourceLimit(format!("ex_P({n}) not settled within budget")));
        }
        if ex.value as u64 > ka * n as u64 {
            return Err(Error::HypothesisUnverified(format!(
                "ex_P({n}) = {} exceeds k^a n = {}",
                ex.value,
                ka * n as u64
            )));
        }
    }
    let f = fpts_exact(pattern, t, s, usize::MAX, budget)?;
    nodes += f.nodes_explored;
    let lhs = f.value.finite().expect("s > k^a >= k makes f finite");
    Ok(Lemma21Report {
        k,
        a,
        t,
        s,
        hypothesis_checked_to: hyp_n,
        lhs,
        pass: BigRational::from_integer(BigInt::from(lhs)) <= rhs,
        rhs,
        nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma22Report {
    pub k: usize,
    pub a: u32,
    pub c: usize,
    pub t: usize,
    pub s: usize,
    #[serde(with = "serde_big::rational")]
    pub x: BigRational,
    #[serde(with = "serde_big::rational")]
    pub y: BigRational,
    pub terms: Lemma22Terms,
    pub lhs: FptsValue,
    pub f_sub: FptsValue,
    /// `None` when `f_sub` is unbounded.
    #[serde(with = "serde_big::rational::option")]
    pub rhs: Option<BigRational>,
    /// The right side is infinite, so the inequality says nothing.
    pub vacuous: bool,
    pub pass: bool,
    pub nodes: u64,
}

/// Compares `f_P(t, s)` with the recursive bound for a `c`-blockable `P`,
/// evaluating the recursive term exactly.
#[allow(clippy::too_many_arguments)]
pub fn check_lemma22(
    pattern: &PermutationMatrix,
    a: u32,
    c: usize,
    t: usize,
    s: usize,
    x: &BigRational,
    y: &BigRational,
    budget: u64,
) -> Result<Lemma22Report> {
    let k = pattern.size();
    let perm = from_matrix(pattern);
    if c == 0 || c > k || blockable_decompositions(&perm, c)?.is_empty() {
        return Err(Error::NotBlockable(c));
    }
    let terms = lemma22_terms(k as u64, a, c as u64, t as u64, s as u64, x, y)?;
    let (t_sub, s_sub) = (terms.t_sub as usize, terms.s_sub as usize);
    let lhs = fpts_exact(pattern, t, s, usize::MAX, budget)?;
    let mut nodes = lhs.nodes_explored;
    let (f_sub, rhs) = if t_sub == 0 || s_sub == 0 {
        // zero weight rows are unconstrained; otherwise no row fits in zero columns
        let v = if s_sub == 0 { FptsValue::Unbounded } else { FptsValue::Finite(0) };
        (v, v.finite().map(|_| terms.second_term.clone()))
    } else {
        let sub = fpts_exact(pattern, t_sub, s_sub, usize::MAX, budget)?;
        nodes += sub.nodes_explored;
        let rhs = sub.value.finite().map(|v| {
            BigRational::from_integer(BigInt::from(terms.binomial.clone()) * BigInt::from(v))
                + &terms.second_term
        });
        (sub.value, rhs)
    };
    let vacuous = rhs.is_none();
    let pass = match (&lhs.value, &rhs) {
        (_, None) => true,
        (FptsValue::Finite(l), Some(r)) => BigRational::from_integer(BigInt::from(*l)) <= *r,
        (FptsValue::Unbounded, Some(_)) => false,
    };
    Ok(Lemma22Report {
        k,
        a,
        c,
        t,
        s,
        x: x.clone(),
        y: y.clone(),
        terms,
        lhs: lhs.value,
        f_sub,
        rhs,
        vacuous,
        pass,
        nodes,
    })
}

/// `ex_P(m)` for `m = 1..=n`, as needed by the tiling inequality.
pub fn exfn_table(pattern: &PermutationMatrix, n: usize, budget: u64) -> Result<Vec<(u64, u64)>> {
    (1..=n)
        .map(|m| {
            let r = exfn_exact(pattern, m, budget)?;
            if !r.proven_optimal {
                return Err(Error::ResourceLimit(format!("ex_P({m}) not settled within budget")));
            }
            Ok((m as u64, r.value as u64))
        })
        .collect()
}
