//! Brute-force reference implementations.
//!
//! Every function here takes the most direct route to its answer (subset
//! enumeration, filtering all of `S_n`, enumerating all `2^(n^2)` matrices)
//! and shares no search code with the optimized modules it is used to check.

use num_bigint::BigUint;

use crate::matrix::{matrix_contains, BinaryMatrix, PermutationMatrix};
use crate::perm::Permutation;

/// Containment by trying every `k`-subset of host positions.
pub fn contains_by_subsets(host: &Permutation, pattern: &Permutation) -> bool {
    let (n, k) = (host.len(), pattern.len());
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if host.pattern_at(&idx) == *pattern {
            return true;
        }
        // next k-combination of 0..n
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `|Av_n(pattern)|` by filtering all `n!` permutations.
pub fn count_avoiders_naive(pattern: &Permutation, n: usize) -> u64 {
    Permutation::all(n)
        .filter(|host| !contains_by_subsets(host, pattern))
        .count() as u64
}

/// Whether some 2-colouring of the host has a red part avoiding `red` and a
/// blue part avoiding `blue`, by trying all `2^n` colourings.
pub fn merge_member_naive(host: &Permutation, red: &Permutation, blue: &Permutation) -> bool {
    let n = host.len();
    (0u32..1 << n).any(|mask| {
        let red_pos: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let blue_pos: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
        !contains_by_subsets(&host.pattern_at(&red_pos), red)
            && !contains_by_subsets(&host.pattern_at(&blue_pos), blue)
    })
}

/// `ex_P(n)` by enumerating every `n x n` 0-1 matrix (feasible for `n <= 4`).
pub fn exfn_enumerate(pattern: &PermutationMatrix, n: usize) -> usize {
    assert!(n * n <= 24, "full enumeration is limited to 24 cells");
    let cells = n * n;
    let mut best = 0;
    for bits in 0u32..1 << cells {
        let ones = bits.count_ones() as usize;
        if ones <= best {
            continue;
        }
        let m = BinaryMatrix::from_cells(
            n,
            n,
            (0..cells)
                .filter(|&b| bits >> b & 1 == 1)
                .map(|b| (b / n + 1, b % n + 1)),
        )
        .unwrap();
        if !matrix_contains(&m, pattern.matrix()).unwrap() {
            best = ones;
        }
    }
    best
}

/// `f_P(t, s)` by extending matrices one row at a time and re-checking the
/// whole matrix with the generic submatrix test. Returns `None` if the cap
/// on rows is reached.
pub fn fpts_rowwise(pattern: &PermutationMatrix, t: usize, s: usize, cap: usize) -> Option<usize> {
    let rows: Vec<u64> = (0u64..1 << t)
        .filter(|m| m.count_ones() as usize >= s)
        .collect();
    let mut current = Vec::new();
    deepest(&mut current, &rows, cap, &|masks: &[u64]| {
        let m = BinaryMatrix::from_row_masks(t, masks);
        !matrix_contains(&m, pattern.matrix()).unwrap()
    })
}

/// `g_P(t, s)` directly: `t x N` matrices grown one column at a time, each
/// column holding at least `s` ones.
pub fn gpts_columnwise(pattern: &PermutationMatrix, t: usize, s: usize, cap: usize) -> Option<usize> {
    let columns: Vec<u64> = (0u64..1 << t)
        .filter(|m| m.count_ones() as usize >= s)
        .collect();
    let mut current = Vec::new();
    deepest(&mut current, &columns, cap, &|cols: &[u64]| {
        let cells = cols.iter().enumerate().flat_map(|(j, &mask)| {
            (0..t).filter(move |&i| mask >> i & 1 == 1).map(move |i| (i + 1, j + 1))
        });
        let m = BinaryMatrix::from_cells(t, cols.len(), cells).unwrap();
        !matrix_contains(&m, pattern.matrix()).unwrap()
    })
}

fn deepest(
    current: &mut Vec<u64>,
    choices: &[u64],
    cap: usize,
    avoids: &dyn Fn(&[u64]) -> bool,
) -> Option<usize> {
    if current.len() >= cap {
        return None;
    }
    let mut best = current.len();
    for &c in choices {
        current.push(c);
        if avoids(current) {
            best = best.max(deepest(current, choices, cap, avoids)?);
        }
        current.pop();
    }
    Some(best)
}

/// Row `n` of Pascal's triangle, as big integers.
pub fn pascal_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::from(1u32));
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::from(1u32));
        row = next;
    }
    row
}
