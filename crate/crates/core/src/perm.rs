//! Permutations in one-line notation and the structural operations on them:
//! parsing, the dihedral/inverse symmetries, direct and skew sums, inflation
//! and enumeration of block decompositions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection on `{1..n}` written in one-line notation.
///
/// The empty permutation is a valid value; operations that need a nonempty
/// argument reject it themselves.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from one-line entries, checking the bijection.
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            if v == 0 || v > n {
                return Err(Error::NotABijection {
                    n,
                    detail: format!("value {v} out of range"),
                });
            }
            if seen[v] {
                return Err(Error::NotABijection {
                    n,
                    detail: format!("value {v} repeated"),
                });
            }
            seen[v] = true;
        }
        Ok(Permutation { entries })
    }

    /// Internal constructor for entries already known to be a bijection.
    pub(crate) fn from_entries_unchecked(entries: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation { entries }
    }

    pub fn empty() -> Self {
        Permutation {
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            entries: (1..=n).collect(),
        }
    }

    pub fn decreasing(n: usize) -> Self {
        Permutation {
            entries: (1..=n).rev().collect(),
        }
    }

    /// The permutation order-isomorphic to `values` (which must be distinct).
    pub fn standardize(values: &[usize]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&i| values[i]);
        let mut entries = vec![0; values.len()];
        for (rank, &i) in order.iter().enumerate() {
            entries[i] = rank + 1;
        }
        Permutation { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<usize> {
        self.entries
    }

    /// Value at 1-indexed position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.entries[i - 1]
    }

    pub fn reverse(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.reverse();
        Permutation { entries }
    }

    pub fn complement(&self) -> Self {
        let n = self.len();
        Permutation {
            entries: self.entries.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut entries = vec![0; self.len()];
        for (i, &v) in self.entries.iter().enumerate() {
            entries[v - 1] = i + 1;
        }
        Permutation { entries }
    }

    /// Subsequence at the given 0-indexed positions, standardized.
    pub fn pattern_at(&self, positions: &[usize]) -> Self {
        let values: Vec<usize> = positions.iter().map(|&p| self.entries[p]).collect();
        Permutation::standardize(&values)
    }

    /// Removes the entry at 0-indexed position `pos` and standardizes.
    pub fn delete_position(&self, pos: usize) -> Self {
        let removed = self.entries[pos];
        let entries = self
            .entries
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, &v)| if v > removed { v - 1 } else { v })
            .collect();
        Permutation { entries }
    }

    /// `p ⊕ q`: `q` placed after `p` with its values shifted above all of `p`'s.
    pub fn direct_sum(&self, other: &Permutation) -> Result<Self> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptyOperand);
        }
        let shift = self.len();
        let entries = self
            .entries
            .iter()
            .copied()
            .chain(other.entries.iter().map(|&v| v + shift))
            .collect();
        Ok(Permutation { entries })
    }

    /// `p ⊖ q`: `q` placed after `p` with `p`'s values shifted above all of `q`'s.
    pub fn skew_sum(&self, other: &Permutation) -> Result<Self> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptyOperand);
        }
        let shift = other.len();
        let entries = self
            .entries
            .iter()
            .map(|&v| v + shift)
            .chain(other.entries.iter().copied())
            .collect();
        Ok(Permutation { entries })
    }

    /// Iterates over all permutations of length `n` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=n).collect()),
        }
    }
}

/// Lexicographic enumeration of `S_n`, see [`Permutation::all`].
pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_lexicographic(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { entries: current })
    }
}

fn next_lexicographic(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Parses either whitespace/comma separated integers (`"4 2 1 5 3"`) or a
/// compact digit string (`"42153"`, only for values up to 9).
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let trimmed = text.trim();
    let separated = trimmed.contains(|c: char| c.is_whitespace() || c == ',');
    let entries: Vec<usize> = if separated {
        trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::MalformedInput(format!("not an integer: {tok:?}")))
            })
            .collect::<Result<_>>()?
    } else {
        trimmed
            .chars()
            .map(|ch| {
                ch.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::MalformedInput(format!("not a digit: {ch:?}")))
            })
            .collect::<Result<_>>()?
    };
    Permutation::new(entries)
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_permutation(s)
    }
}

impl fmt::Display for Permutation {
    /// Compact digits when every value fits in one digit, otherwise
    /// space-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.entries {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.entries.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(" "))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_permutation(&text).map_err(serde::de::Error::custom)
    }
}

/// An inflation `skeleton[blocks[0], …, blocks[c-1]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub skeleton: Permutation,
    pub blocks: Vec<Permutation>,
}

impl BlockDecomposition {
    pub fn new(skeleton: Permutation, blocks: Vec<Permutation>) -> Result<Self> {
        check_inflation_args(&skeleton, &blocks)?;
        if skeleton.is_empty() {
            return Err(Error::PreconditionViolated(
                "a block decomposition needs at least one block".into(),
            ));
        }
        Ok(BlockDecomposition { skeleton, blocks })
    }

    pub fn block_count(&self) -> usize {
        self.skeleton.len()
    }

    pub fn inflate(&self) -> Permutation {
        inflate(&self.skeleton, &self.blocks).expect("validated on construction")
    }
}

fn check_inflation_args(skeleton: &Permutation, blocks: &[Permutation]) -> Result<()> {
    if blocks.len() != skeleton.len() {
        return Err(Error::ArityMismatch {
            skeleton: skeleton.len(),
            blocks: blocks.len(),
        });
    }
    if let Some(i) = blocks.iter().position(Permutation::is_empty) {
        return Err(Error::EmptyBlock(i + 1));
    }
    Ok(())
}

/// Replaces entry `i` of `skeleton` by an interval order-isomorphic to
/// `blocks[i]`; the intervals are stacked in the value order given by the
/// skeleton.
pub fn inflate(skeleton: &Permutation, blocks: &[Permutation]) -> Result<Permutation> {
    check_inflation_args(skeleton, blocks)?;
    // offset[r] = number of values below the block of skeleton rank r+1
    let c = skeleton.len();
    let mut size_by_rank = vec![0; c];
    for (i, block) in blocks.iter().enumerate() {
        size_by_rank[skeleton.entries[i] - 1] = block.len();
    }
    let mut offset = vec![0; c];
    for r in 1..c {
        offset[r] = offset[r - 1] + size_by_rank[r - 1];
    }
    let entries = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, block)| {
            let base = offset[skeleton.entries[i] - 1];
            block.entries.iter().map(move |&v| base + v)
        })
        .collect();
    Ok(Permutation { entries })
}

/// Every way to write `perm` as an inflation with exactly `c` blocks, in
/// lexicographic order of the cut positions.
pub fn blockable_decompositions(perm: &Permutation, c: usize) -> Result<Vec<BlockDecomposition>> {
    let n = perm.len();
    if c == 0 || c > n {
        return Err(Error::PreconditionViolated(format!(
            "block count must satisfy 1 <= c <= n (c = {c}, n = {n})"
        )));
    }
    let mut found = Vec::new();
    let mut cuts = Vec::with_capacity(c + 1);
    cuts.push(0);
    collect_cuts(perm, c, &mut cuts, &mut found);
    Ok(found)
}

fn collect_cuts(
    perm: &Permutation,
    c: usize,
    cuts: &mut Vec<usize>,
    found: &mut Vec<BlockDecomposition>,
) {
    let n = perm.len();
    let start = *cuts.last().unwrap();
    let remaining_blocks = c + 1 - cuts.len();
    if remaining_blocks == 1 {
        if is_interval(&perm.entries[start..n]) {
            cuts.push(n);
            found.push(decomposition_from_cuts(perm, cuts));
            cuts.pop();
        }
        return;
    }
    // leave at least one position for each later block
    for end in start + 1..=n - (remaining_blocks - 1) {
        if is_interval(&perm.entries[start..end]) {
            cuts.push(end);
            collect_cuts(perm, c, cuts, found);
            cuts.pop();
        }
    }
}

fn is_interval(values: &[usize]) -> bool {
    let min = values.iter().min().copied().unwrap_or(0);
    let max = values.iter().max().copied().unwrap_or(0);
    max - min + 1 == values.len()
}

fn decomposition_from_cuts(perm: &Permutation, cuts: &[usize]) -> BlockDecomposition {
    let segments: Vec<&[usize]> = cuts.windows(2).map(|w| &perm.entries[w[0]..w[1]]).collect();
    let mins: Vec<usize> = segments.iter().map(|s| *s.iter().min().unwrap()).collect();
    BlockDecomposition {
        skeleton: Permutation::standardize(&mins),
        blocks: segments.iter().map(|s| Permutation::standardize(s)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parses_compact_and_separated_forms() {
        assert_eq!(p("42153").entries(), &[4, 2, 1, 5, 3]);
        assert_eq!(p("1").entries(), &[1]);
        assert_eq!(p("10 2 3 4 5 6 7 8 9 1").at(1), 10);
        assert_eq!(p("3,1,2"), p("312"));
        assert!(p("").is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_permutation("4 2 2 1"),
            Err(Error::NotABijection { .. })
        ));
        assert!(matches!(
            parse_permutation("1 x 2"),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(parse_permutation("120"), Err(Error::NotABijection { .. })));
        assert!(matches!(parse_permutation("1a"), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn display_round_trips() {
        for s in ["42153", "1", "10 9 8 7 6 5 4 3 2 1 11"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn symmetries() {
        assert_eq!(p("123").reverse(), p("321"));
        assert_eq!(p("42153").inverse(), p("32514"));
        assert_eq!(p("42153").complement(), p("24513"));
        let q = p("42153");
        assert_eq!(q.reverse().reverse(), q);
        assert_eq!(q.complement().complement(), q);
        assert_eq!(q.inverse().inverse(), q);
    }

    #[test]
    fn sums() {
        assert_eq!(p("12").direct_sum(&p("21")).unwrap(), p("1243"));
        assert_eq!(p("12").skew_sum(&p("21")).unwrap(), p("3421"));
        assert_eq!(p("1").direct_sum(&p("1")).unwrap(), p("12"));
        assert_eq!(
            p("12").direct_sum(&Permutation::empty()),
            Err(Error::EmptyOperand)
        );
        assert_eq!(Permutation::empty().skew_sum(&p("1")), Err(Error::EmptyOperand));
    }

    #[test]
    fn inflation_matches_hand_computation() {
        let blocks = vec![p("1"), p("132"), p("321"), p("12")];
        assert_eq!(inflate(&p("2413"), &blocks).unwrap(), p("479832156"));
        assert_eq!(inflate(&p("1"), &[p("3142")]).unwrap(), p("3142"));
        assert_eq!(inflate(&p("21"), &[p("1"), p("1")]).unwrap(), p("21"));
    }

    #[test]
    fn inflation_errors() {
        assert_eq!(
            inflate(&p("12"), &[p("1")]),
            Err(Error::ArityMismatch {
                skeleton: 2,
                blocks: 1
            })
        );
        assert_eq!(
            inflate(&p("12"), &[p("1"), Permutation::empty()]),
            Err(Error::EmptyBlock(2))
        );
    }

    #[test]
    fn decompositions_recover_figure_inflation() {
        let target = p("479832156");
        let decs = blockable_decompositions(&target, 4).unwrap();
        let expected = BlockDecomposition::new(
            p("2413"),
            vec![p("1"), p("132"), p("321"), p("12")],
        )
        .unwrap();
        assert!(decs.contains(&expected));
        for d in &decs {
            assert_eq!(d.inflate(), target);
        }
    }

    #[test]
    fn singleton_blocks_and_simple_permutations() {
        let q = p("42153");
        let decs = blockable_decompositions(&q, 5).unwrap();
        assert_eq!(decs.len(), 1);
        assert_eq!(decs[0].skeleton, q);
        assert!(decs[0].blocks.iter().all(|b| *b == p("1")));
        assert!(blockable_decompositions(&p("2413"), 2).unwrap().is_empty());
        assert!(blockable_decompositions(&p("2413"), 0).is_err());
        assert!(blockable_decompositions(&p("2413"), 5).is_err());
    }

    #[test]
    fn lexicographic_enumeration_counts() {
        assert_eq!(Permutation::all(0).count(), 1);
        assert_eq!(Permutation::all(4).count(), 24);
        let first: Vec<_> = Permutation::all(3).map(|q| q.to_string()).collect();
        assert_eq!(first, ["123", "132", "213", "231", "312", "321"]);
    }

    #[test]
    fn delete_position_standardizes() {
        assert_eq!(p("42153").delete_position(0), p("2143"));
        assert_eq!(p("42153").delete_position(4), p("3214"));
    }
}
