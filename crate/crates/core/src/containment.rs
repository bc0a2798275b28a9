//! Classical pattern containment by backtracking over pattern positions.
//!
//! Pattern entry `j` may only be matched to a host value lying strictly
//! between the host values already matched to the pattern entries that are
//! its nearest smaller and nearest larger neighbours among entries `0..j`.
//! Those two neighbour indices are precomputed once per pattern, so each
//! extension is an O(1) value test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Strictly increasing 1-indexed host positions of one pattern occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub positions: Vec<usize>,
}

impl Occurrence {
    /// Whether the positions really carve `pattern` out of `host`.
    pub fn is_valid_for(&self, host: &Permutation, pattern: &Permutation) -> bool {
        self.positions.len() == pattern.len()
            && self.positions.windows(2).all(|w| w[0] < w[1])
            && self.positions.iter().all(|&p| p >= 1 && p <= host.len())
            && host.pattern_at(&self.positions.iter().map(|p| p - 1).collect::<Vec<_>>())
                == *pattern
    }
}

/// Order-isomorphism constraints of a pattern, prepared for matching.
#[derive(Debug, Clone)]
pub struct Matcher {
    values: Vec<usize>,
    below: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
}

impl Matcher {
    pub fn new(pattern: &Permutation) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(Self::from_values(pattern.entries()))
    }

    /// Builds neighbour tables for any sequence of distinct values.
    pub(crate) fn from_values(values: &[usize]) -> Self {
        let k = values.len();
        let mut below = vec![None; k];
        let mut above = vec![None; k];
        for j in 0..k {
            for i in 0..j {
                if values[i] < values[j] && below[j].is_none_or(|b: usize| values[i] > values[b]) {
                    below[j] = Some(i);
                }
                if values[i] > values[j] && above[j].is_none_or(|a: usize| values[i] < values[a]) {
                    above[j] = Some(i);
                }
            }
        }
        Matcher {
            values: values.to_vec(),
            below,
            above,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pattern index holding the largest value.
    pub fn argmax(&self) -> usize {
        (0..self.len()).max_by_key(|&j| self.values[j]).unwrap()
    }

    /// First occurrence in the host (0-indexed positions), optionally forcing
    /// pattern index `pin.0` onto host position `pin.1`.
    pub fn find(&self, host: &[usize], pin: Option<(usize, usize)>) -> Option<Vec<usize>> {
        let k = self.len();
        if k > host.len() {
            return None;
        }
        let mut chosen = vec![0usize; k];
        if self.extend(host, pin, 0, 0, &mut chosen) {
            Some(chosen)
        } else {
            None
        }
    }

    pub fn occurs(&self, host: &[usize], pin: Option<(usize, usize)>) -> bool {
        self.find(host, pin).is_some()
    }

    fn fits(&self, host: &[usize], chosen: &[usize], j: usize, value: usize) -> bool {
        if let Some(b) = self.below[j] {
            if value <= host[chosen[b]] {
                return false;
            }
        }
        if let Some(a) = self.above[j] {
            if value >= host[chosen[a]] {
                return false;
            }
        }
        true
    }

    fn extend(
        &self,
        host: &[usize],
        pin: Option<(usize, usize)>,
        j: usize,
        start: usize,
        chosen: &mut [usize],
    ) -> bool {
        let k = self.len();
        if j == k {
            return true;
        }
        let n = host.len();
        // the remaining k - j - 1 entries need room to the right
        let mut lo = start;
        let mut hi = n - (k - j);
        if let Some((pj, ph)) = pin {
            if j == pj {
                if ph < lo || ph > hi {
                    return false;
                }
                lo = ph;
                hi = ph;
            } else if j < pj {
                if ph < pj - j {
                    return false;
                }
                hi = hi.min(ph - (pj - j));
            } else {
                lo = lo.max(ph + 1);
            }
        }
        for pos in lo..=hi {
            if self.fits(host, chosen, j, host[pos]) {
                chosen[j] = pos;
                if self.extend(host, pin, j + 1, pos + 1, chosen) {
                    return true;
                }
            }
        }
        false
    }
}

/// Whether `host` contains `pattern`.
pub fn contains(host: &Permutation, pattern: &Permutation) -> Result<bool> {
    Ok(find_occurrence(host, pattern)?.is_some())
}

/// The first occurrence of `pattern` in `host` in lexicographic order of
/// positions, if any.
pub fn find_occurrence(host: &Permutation, pattern: &Permutation) -> Result<Option<Occurrence>> {
    let matcher = Matcher::new(pattern)?;
    Ok(matcher.find(host.entries(), None).map(|pos| Occurrence {
        positions: pos.into_iter().map(|p| p + 1).collect(),
    }))
}
