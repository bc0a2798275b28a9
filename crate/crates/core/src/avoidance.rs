//! Exact enumeration of principal avoidance classes `Av_n(π)`, finite-n
//! growth estimates, membership in merges `Av(α) ⊙ Av(β)`, and the
//! inclusion `Av(A ⊕ B ⊕ C) ⊆ Av(A ⊕ B) ⊙ Av(B ⊕ C)` checked length by
//! length.
//!
//! Avoiders are generated by inserting the maximum value: every permutation
//! in `Av_n(π)` arises from exactly one permutation in `Av_{n-1}(π)` by
//! inserting `n` into one of its `n` slots, and a new occurrence must map the
//! largest pattern entry onto the inserted `n`. That pinned test is the only
//! containment check per tree node.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::containment::Matcher;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::serde_big;

/// Size caps and node budget shared by the searches in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub node_budget: u64,
    /// Largest `n` accepted for counting and enumeration.
    pub max_count_n: usize,
    /// Largest host length accepted for merge membership.
    pub max_merge_n: usize,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 100_000_000,
            max_count_n: 12,
            max_merge_n: 14,
            parallel: true,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(node_budget: u64) -> Self {
        SearchConfig {
            node_budget,
            ..Self::default()
        }
    }
}

struct Budget<'a> {
    used: AtomicU64,
    config: &'a SearchConfig,
}

impl<'a> Budget<'a> {
    fn new(config: &'a SearchConfig) -> Self {
        Budget {
            used: AtomicU64::new(0),
            config,
        }
    }

    fn spend(&self, nodes: u64) -> Result<()> {
        let used = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if used > self.config.node_budget {
            Err(Error::ResourceLimit(format!(
                "node budget of {} exhausted",
                self.config.node_budget
            )))
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceCount {
    pub pattern: Permutation,
    pub n: usize,
    #[serde(with = "serde_big::biguint")]
    pub count: BigUint,
}

/// Depth below which subtrees are farmed out to worker threads.
const SPLIT_DEPTH: usize = 6;

struct Generator<'a> {
    matcher: Matcher,
    top: usize,
    n: usize,
    budget: Budget<'a>,
}

impl Generator<'_> {
    fn children(&self, parent: &[usize]) -> Result<Vec<Vec<usize>>> {
        let len = parent.len() + 1;
        self.budget.spend(len as u64)?;
        let mut out = Vec::new();
        for slot in 0..len {
            let mut child = Vec::with_capacity(len);
            child.extend_from_slice(&parent[..slot]);
            child.push(len);
            child.extend_from_slice(&parent[slot..]);
            if !self.matcher.occurs(&child, Some((self.top, slot))) {
                out.push(child);
            }
        }
        Ok(out)
    }

    fn count_below(&self, node: &[usize]) -> Result<u64> {
        if node.len() == self.n {
            return Ok(1);
        }
        let mut total = 0;
        for child in self.children(node)? {
            total += self.count_below(&child)?;
        }
        Ok(total)
    }

    fn visit_below(&self, node: Vec<usize>, out: &mut Vec<Permutation>) -> Result<()> {
        if node.len() == self.n {
            out.push(Permutation::from_entries_unchecked(node));
            return Ok(());
        }
        for child in self.children(&node)? {
            self.visit_below(child, out)?;
        }
        Ok(())
    }

    /// All tree nodes at the split depth (or the leaves, for small `n`).
    fn frontier(&self) -> Result<Vec<Vec<usize>>> {
        let depth = self.n.min(SPLIT_DEPTH);
        let mut level = vec![Vec::new()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for node in &level {
                next.extend(self.children(node)?);
            }
            level = next;
        }
        Ok(level)
    }
}

fn generator<'a>(pattern: &Permutation, n: usize, config: &'a SearchConfig) -> Result<Generator<'a>> {
    let matcher = Matcher::new(pattern)?;
    if n > config.max_count_n {
        return Err(Error::ResourceLimit(format!(
            "n = {n} exceeds the configured counting limit {}",
            config.max_count_n
        )));
    }
    Ok(Generator {
        top: matcher.argmax(),
        matcher,
        n,
        budget: Budget::new(config),
    })
}

/// `|Av_n(pattern)|` exactly.
pub fn count_avoiders(pattern: &Permutation, n: usize, config: &SearchConfig) -> Result<BigUint> {
    let gen = generator(pattern, n, config)?;
    let frontier = gen.frontier()?;
    let count_one = |node: Vec<usize>| gen.count_below(&node);
    let total: u64 = if config.parallel {
        frontier
            .into_par_iter()
            .map(count_one)
            .collect::<Result<Vec<u64>>>()?
            .into_iter()
            .sum()
    } else {
        frontier
            .into_iter()
            .map(count_one)
            .collect::<Result<Vec<u64>>>()?
            .into_iter()
            .sum()
    };
    Ok(BigUint::from(total))
}

/// Every permutation in `Av_n(pattern)`, in generation-tree order.
pub fn avoiders(pattern: &Permutation, n: usize, config: &SearchConfig) -> Result<Vec<Permutation>> {
    let gen = generator(pattern, n, config)?;
    let frontier = gen.frontier()?;
    let expand = |node: Vec<usize>| {
        let mut out = Vec::new();
        gen.visit_below(node, &mut out).map(|_| out)
    };
    let parts: Vec<Vec<Permutation>> = if config.parallel {
        frontier.into_par_iter().map(expand).collect::<Result<_>>()?
    } else {
        frontier.into_iter().map(expand).collect::<Result<_>>()?
    };
    Ok(parts.into_iter().flatten().collect())
}

/// `|Av_n|^(1/n)` at one length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwEstimate {
    pub n: usize,
    #[serde(with = "serde_big::biguint")]
    pub count: BigUint,
    pub value: f64,
}

pub fn sw_estimate_sequence(
    pattern: &Permutation,
    n_max: usize,
    config: &SearchConfig,
) -> Result<Vec<SwEstimate>> {
    if n_max == 0 {
        return Err(Error::PreconditionViolated("n_max must be at least 1".into()));
    }
    (1..=n_max)
        .map(|n| {
            let count = count_avoiders(pattern, n, config)?;
            let value = count.to_f64().unwrap_or(f64::INFINITY).powf(1.0 / n as f64);
            Ok(SwEstimate { n, count, value })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeQuery {
    pub host: Permutation,
    pub red_pattern: Permutation,
    pub blue_pattern: Permutation,
}

impl MergeQuery {
    pub fn new(host: Permutation, red_pattern: Permutation, blue_pattern: Permutation) -> Result<Self> {
        if red_pattern.is_empty() || blue_pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(MergeQuery {
            host,
            red_pattern,
            blue_pattern,
        })
    }
}

struct Colorer<'a> {
    host: &'a [usize],
    red: Matcher,
    blue: Matcher,
    budget: &'a Budget<'a>,
}

impl Colorer<'_> {
    /// Appending `value` to `seq` creates an occurrence only if the pattern's
    /// last entry lands on it.
    fn creates_occurrence(matcher: &Matcher, seq: &[usize]) -> bool {
        matcher.occurs(seq, Some((matcher.len() - 1, seq.len() - 1)))
    }

    fn search(
        &self,
        i: usize,
        red_seq: &mut Vec<usize>,
        blue_seq: &mut Vec<usize>,
        colors: &mut Vec<Color>,
    ) -> Result<bool> {
        if i == self.host.len() {
            return Ok(true);
        }
        self.budget.spend(1)?;
        let value = self.host[i];

        red_seq.push(value);
        if !Self::creates_occurrence(&self.red, red_seq) {
            colors.push(Color::Red);
            if self.search(i + 1, red_seq, blue_seq, colors)? {
                return Ok(true);
            }
            colors.pop();
        }
        red_seq.pop();

        blue_seq.push(value);
        if !Self::creates_occurrence(&self.blue, blue_seq) {
            colors.push(Color::Blue);
            if self.search(i + 1, red_seq, blue_seq, colors)? {
                return Ok(true);
            }
            colors.pop();
        }
        blue_seq.pop();
        Ok(false)
    }
}

/// Whether the host 2-colours into a red part avoiding `red_pattern` and a
/// blue part avoiding `blue_pattern`; returns one such colouring.
pub fn merge_member(query: &MergeQuery, config: &SearchConfig) -> Result<Option<Vec<Color>>> {
    let budget = Budget::new(config);
    merge_member_with(query, config, &budget)
}

fn merge_member_with(
    query: &MergeQuery,
    config: &SearchConfig,
    budget: &Budget<'_>,
) -> Result<Option<Vec<Color>>> {
    if query.host.len() > config.max_merge_n {
        return Err(Error::ResourceLimit(format!(
            "host length {} exceeds the configured merge limit {}",
            query.host.len(),
            config.max_merge_n
        )));
    }
    let colorer = Colorer {
        host: query.host.entries(),
        red: Matcher::new(&query.red_pattern)?,
        blue: Matcher::new(&query.blue_pattern)?,
        budget,
    };
    let mut colors = Vec::with_capacity(query.host.len());
    let found = colorer.search(0, &mut Vec::new(), &mut Vec::new(), &mut colors)?;
    Ok(found.then_some(colors))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JvReport {
    pub a: Permutation,
    pub b: Permutation,
    pub c: Permutation,
    pub n: usize,
    /// `A ⊕ B ⊕ C`, the pattern whose avoiders are checked.
    pub avoided: Permutation,
    pub red_pattern: Permutation,
    pub blue_pattern: Permutation,
    pub checked: u64,
    pub pass: bool,
    pub counterexample: Option<Permutation>,
}

/// Checks every `σ ∈ Av_n(A ⊕ B ⊕ C)` for membership in
/// `Av(A ⊕ B) ⊙ Av(B ⊕ C)`.
pub fn verify_jv_inclusion(
    a: &Permutation,
    b: &Permutation,
    c: &Permutation,
    n: usize,
    config: &SearchConfig,
) -> Result<JvReport> {
    let avoided = a.direct_sum(b)?.direct_sum(c)?;
    let red_pattern = a.direct_sum(b)?;
    let blue_pattern = b.direct_sum(c)?;
    if n > config.max_merge_n {
        return Err(Error::ResourceLimit(format!(
            "n = {n} exceeds the configured merge limit {}",
            config.max_merge_n
        )));
    }
    let members = avoiders(&avoided, n, config)?;
    let budget = Budget::new(config);
    let is_member = |sigma: &Permutation| -> Result<bool> {
        let q = MergeQuery {
            host: sigma.clone(),
            red_pattern: red_pattern.clone(),
            blue_pattern: blue_pattern.clone(),
        };
        Ok(merge_member_with(&q, config, &budget)?.is_some())
    };
    let verdicts: Vec<bool> = if config.parallel {
        members.par_iter().map(is_member).collect::<Result<_>>()?
    } else {
        members.iter().map(is_member).collect::<Result<_>>()?
    };
    let counterexample = verdicts
        .iter()
        .position(|ok| !ok)
        .map(|i| members[i].clone());
    Ok(JvReport {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        n,
        avoided,
        red_pattern,
        blue_pattern,
        checked: members.len() as u64,
        pass: counterexample.is_none(),
        counterexample,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeCountReport {
    pub red_pattern: Permutation,
    pub blue_pattern: Permutation,
    pub n: usize,
    /// Number of `n`-permutations in `Av(red) ⊙ Av(blue)`.
    #[serde(with = "serde_big::biguint")]
    pub lhs: BigUint,
    /// `Σ_i C(n,i)^2 |Av_i(red)| |Av_{n-i}(blue)|`: choose the red positions,
    /// the red values, and the two order types.
    #[serde(with = "serde_big::biguint")]
    pub rhs: BigUint,
    pub pass: bool,
    /// `Σ_i C(n,i) |Av_i(red)| |Av_{n-i}(blue)|`, which only counts position
    /// sets and is not an upper bound in general.
    #[serde(with = "serde_big::biguint")]
    pub rhs_positions_only: BigUint,
    pub positions_only_holds: bool,
}

/// Largest `n` for which the left side is computed by scanning `S_n`.
pub const MERGE_COUNT_MAX_N: usize = 10;

pub fn merge_count_upper_check(
    red_pattern: &Permutation,
    blue_pattern: &Permutation,
    n: usize,
    config: &SearchConfig,
) -> Result<MergeCountReport> {
    if red_pattern.is_empty() || blue_pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if n > MERGE_COUNT_MAX_N.min(config.max_merge_n) {
        return Err(Error::ResourceLimit(format!(
            "n = {n} exceeds the merge counting limit {}",
            MERGE_COUNT_MAX_N.min(config.max_merge_n)
        )));
    }
    let budget = Budget::new(config);
    let hosts: Vec<Permutation> = Permutation::all(n).collect();
    let member = |host: &Permutation| -> Result<bool> {
        let q = MergeQuery {
            host: host.clone(),
            red_pattern: red_pattern.clone(),
            blue_pattern: blue_pattern.clone(),
        };
        Ok(merge_member_with(&q, config, &budget)?.is_some())
    };
    let verdicts: Vec<bool> = if config.parallel {
        hosts.par_iter().map(member).collect::<Result<_>>()?
    } else {
        hosts.iter().map(member).collect::<Result<_>>()?
    };
    let lhs = BigUint::from(verdicts.iter().filter(|&&v| v).count());

    let mut rhs = BigUint::from(0u32);
    let mut rhs_positions_only = BigUint::from(0u32);
    for i in 0..=n {
        let binom = crate::bounds::binomial(n as u64, i as u64);
        let classes =
            count_avoiders(red_pattern, i, config)? * count_avoiders(blue_pattern, n - i, config)?;
        rhs += &binom * &binom * &classes;
        rhs_positions_only += &binom * &classes;
    }
    Ok(MergeCountReport {
        red_pattern: red_pattern.clone(),
        blue_pattern: blue_pattern.clone(),
        n,
        pass: lhs <= rhs,
        positions_only_holds: lhs <= rhs_positions_only,
        lhs,
        rhs,
        rhs_positions_only,
    })
}
