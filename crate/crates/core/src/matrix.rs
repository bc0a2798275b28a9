//! 0-1 matrices stored as sets of one-cells, permutation matrices, and
//! submatrix containment.
//!
//! Cells are 1-indexed `(row, col)` with row 1 at the top. A permutation
//! `π` of length `k` corresponds to the matrix with ones at
//! `(k + 1 - π(j), j)`, so an increasing permutation is drawn as ones rising
//! from bottom-left to top-right.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    ones: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    ones: Vec<[usize; 2]>,
}

impl TryFrom<MatrixRepr> for BinaryMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        let cells = repr.ones.iter().map(|&[r, c]| (r, c));
        let m = BinaryMatrix::from_cells(repr.rows, repr.cols, cells)?;
        if m.ones.len() != repr.ones.len() {
            return Err(Error::MalformedInput("duplicate cell in matrix".into()));
        }
        Ok(m)
    }
}

impl From<BinaryMatrix> for MatrixRepr {
    fn from(m: BinaryMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            ones: m.ones.iter().map(|&(r, c)| [r, c]).collect(),
        }
    }
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            rows,
            cols,
            ones: BTreeSet::new(),
        }
    }

    pub fn from_cells(
        rows: usize,
        cols: usize,
        cells: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut m = BinaryMatrix::zeros(rows, cols);
        for (r, c) in cells {
            m.set(r, c)?;
        }
        Ok(m)
    }

    /// Row `i` (0-indexed) given as a bitmask over columns, bit `j` = column `j+1`.
    pub fn from_row_masks(cols: usize, masks: &[u64]) -> Self {
        let mut m = BinaryMatrix::zeros(masks.len(), cols);
        for (i, &mask) in masks.iter().enumerate() {
            for j in 0..cols {
                if mask >> j & 1 == 1 {
                    m.ones.insert((i + 1, j + 1));
                }
            }
        }
        m
    }

    pub fn all_ones(rows: usize, cols: usize) -> Self {
        let cells = (1..=rows).flat_map(|r| (1..=cols).map(move |c| (r, c)));
        BinaryMatrix {
            rows,
            cols,
            ones: cells.collect(),
        }
    }

    pub fn set(&mut self, row: usize, col: usize) -> Result<()> {
        if row == 0 || col == 0 || row > self.rows || col > self.cols {
            return Err(Error::CellOutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        self.ones.insert((row, col));
        Ok(())
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.ones.contains(&(row, col))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ones.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.ones.len()
    }

    pub fn row_weight(&self, row: usize) -> usize {
        self.ones.range((row, 0)..(row + 1, 0)).count()
    }

    pub fn col_weight(&self, col: usize) -> usize {
        self.ones.iter().filter(|&&(_, c)| c == col).count()
    }

    /// Row masks (bit `j` = column `j+1`); requires `cols <= 64`.
    pub fn row_masks(&self) -> Vec<u64> {
        assert!(self.cols <= 64, "row masks need at most 64 columns");
        let mut masks = vec![0u64; self.rows];
        for &(r, c) in &self.ones {
            masks[r - 1] |= 1 << (c - 1);
        }
        masks
    }

    /// Quarter turn: cell `(i, j)` of an `m x n` matrix goes to `(j, m + 1 - i)`
    /// of the `n x m` result.
    pub fn rotate90(&self) -> Self {
        BinaryMatrix {
            rows: self.cols,
            cols: self.rows,
            ones: self
                .ones
                .iter()
                .map(|&(i, j)| (j, self.rows + 1 - i))
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        BinaryMatrix {
            rows: self.cols,
            cols: self.rows,
            ones: self.ones.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// Row order reversed (top row becomes bottom row).
    pub fn flip_rows(&self) -> Self {
        BinaryMatrix {
            rows: self.rows,
            cols: self.cols,
            ones: self
                .ones
                .iter()
                .map(|&(i, j)| (self.rows + 1 - i, j))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 1..=self.rows {
            let line: String = (1..=self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// A `k x k` 0-1 matrix with exactly one 1 in every row and column.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BinaryMatrix", into = "BinaryMatrix")]
pub struct PermutationMatrix(BinaryMatrix);

impl TryFrom<BinaryMatrix> for PermutationMatrix {
    type Error = Error;

    fn try_from(m: BinaryMatrix) -> Result<Self> {
        PermutationMatrix::new(m)
    }
}

impl From<PermutationMatrix> for BinaryMatrix {
    fn from(p: PermutationMatrix) -> Self {
        p.0
    }
}

impl PermutationMatrix {
    pub fn new(m: BinaryMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::NotPermutationMatrix(format!(
                "shape {}x{} is not square",
                m.rows, m.cols
            )));
        }
        for r in 1..=m.rows {
            if m.row_weight(r) != 1 {
                return Err(Error::NotPermutationMatrix(format!(
                    "row {r} has {} ones",
                    m.row_weight(r)
                )));
            }
        }
        for c in 1..=m.cols {
            if m.col_weight(c) != 1 {
                return Err(Error::NotPermutationMatrix(format!(
                    "column {c} has {} ones",
                    m.col_weight(c)
                )));
            }
        }
        Ok(PermutationMatrix(m))
    }

    /// The identity matrix `I_k` (ones on the main diagonal).
    pub fn identity(k: usize) -> Self {
        PermutationMatrix(BinaryMatrix {
            rows: k,
            cols: k,
            ones: (1..=k).map(|i| (i, i)).collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.0
    }

    /// Column (1-indexed) of the single one in each row, top to bottom.
    pub fn row_columns(&self) -> Vec<usize> {
        let mut cols = vec![0; self.size()];
        for (r, c) in self.0.ones() {
            cols[r - 1] = c;
        }
        cols
    }

    pub fn rotate90(&self) -> Self {
        PermutationMatrix(self.0.rotate90())
    }
}

impl fmt::Debug for PermutationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn to_matrix(perm: &Permutation) -> PermutationMatrix {
    let k = perm.len();
    PermutationMatrix(BinaryMatrix {
        rows: k,
        cols: k,
        ones: perm
            .entries()
            .iter()
            .enumerate()
            .map(|(j, &v)| (k + 1 - v, j + 1))
            .collect(),
    })
}

pub fn from_matrix(matrix: &PermutationMatrix) -> Permutation {
    let k = matrix.size();
    let mut entries = vec![0; k];
    for (r, c) in matrix.0.ones() {
        entries[c - 1] = k + 1 - r;
    }
    Permutation::from_entries_unchecked(entries)
}

/// Selected host rows and columns (1-indexed, increasing) realizing a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixOccurrence {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Whether some order-preserving choice of rows and columns of `host` has a
/// one wherever `pattern` does; extra ones in the host are allowed.
pub fn matrix_contains(host: &BinaryMatrix, pattern: &BinaryMatrix) -> Result<bool> {
    Ok(find_matrix_occurrence(host, pattern)?.is_some())
}

/// Rows are chosen by backtracking; for a fixed row choice, columns are
/// assigned greedily left to right, which is exact because each pattern
/// column's requirement is independent of the others.
pub fn find_matrix_occurrence(
    host: &BinaryMatrix,
    pattern: &BinaryMatrix,
) -> Result<Option<MatrixOccurrence>> {
    if pattern.count_ones() == 0 {
        return Err(Error::EmptyPattern);
    }
    if pattern.rows > host.rows || pattern.cols > host.cols {
        return Ok(None);
    }
    let mut rows = Vec::with_capacity(pattern.rows);
    Ok(choose_rows(host, pattern, &mut rows, 1))
}

fn choose_rows(
    host: &BinaryMatrix,
    pattern: &BinaryMatrix,
    rows: &mut Vec<usize>,
    start: usize,
) -> Option<MatrixOccurrence> {
    if rows.len() == pattern.rows {
        return assign_columns(host, pattern, rows).map(|cols| MatrixOccurrence {
            rows: rows.clone(),
            cols,
        });
    }
    let pr = rows.len() + 1;
    let last = host.rows - (pattern.rows - pr);
    for hr in start..=last {
        // the host row must cover this pattern row's weight
        if host.row_weight(hr) < pattern.row_weight(pr) {
            continue;
        }
        rows.push(hr);
        if let Some(found) = choose_rows(host, pattern, rows, hr + 1) {
            return Some(found);
        }
        rows.pop();
    }
    None
}

fn assign_columns(host: &BinaryMatrix, pattern: &BinaryMatrix, rows: &[usize]) -> Option<Vec<usize>> {
    let mut cols = Vec::with_capacity(pattern.cols);
    let mut next = 1;
    for pc in 1..=pattern.cols {
        let needed: Vec<usize> = (1..=pattern.rows)
            .filter(|&pr| pattern.get(pr, pc))
            .map(|pr| rows[pr - 1])
            .collect();
        // leave room for the remaining pattern columns
        let last = host.cols - (pattern.cols - pc);
        let hc = (next..=last).find(|&hc| needed.iter().all(|&hr| host.get(hr, hc)))?;
        cols.push(hc);
        next = hc + 1;
    }
    Some(cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::containment::contains;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn i2() -> BinaryMatrix {
        BinaryMatrix::from_cells(2, 2, [(1, 1), (2, 2)]).unwrap()
    }

    #[test]
    fn containment_examples() {
        assert!(matrix_contains(&BinaryMatrix::all_ones(2, 2), &i2()).unwrap());
        let one_row = BinaryMatrix::from_cells(1, 2, [(1, 1), (1, 2)]).unwrap();
        assert!(!matrix_contains(&one_row, &i2()).unwrap());
        let staircase = BinaryMatrix::from_cells(2, 3, [(1, 2), (1, 3), (2, 1), (2, 2)]).unwrap();
        assert!(!matrix_contains(&staircase, &i2()).unwrap());
        assert_eq!(
            matrix_contains(&staircase, &BinaryMatrix::zeros(2, 2)),
            Err(Error::EmptyPattern)
        );
    }

    #[test]
    fn witness_is_consistent() {
        let host = BinaryMatrix::from_cells(3, 3, [(1, 3), (2, 1), (3, 2)]).unwrap();
        let occ = find_matrix_occurrence(&host, &i2()).unwrap().unwrap();
        assert_eq!(occ.rows, vec![2, 3]);
        assert_eq!(occ.cols, vec![1, 2]);
    }

    #[test]
    fn permutation_correspondence() {
        let m = to_matrix(&p("12"));
        assert_eq!(m.matrix().ones().collect::<Vec<_>>(), vec![(1, 2), (2, 1)]);
        assert_eq!(to_matrix(&p("1")).matrix().count_ones(), 1);
        assert_eq!(from_matrix(&to_matrix(&p("42153"))), p("42153"));
        assert_eq!(from_matrix(&PermutationMatrix::identity(3)), p("321"));
    }

    #[test]
    fn permutation_matrix_validation() {
        let bad = BinaryMatrix::from_cells(2, 2, [(1, 1), (2, 1)]).unwrap();
        assert!(matches!(
            PermutationMatrix::new(bad),
            Err(Error::NotPermutationMatrix(_))
        ));
        assert!(PermutationMatrix::new(BinaryMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn rotation_has_order_four() {
        let m = BinaryMatrix::from_cells(2, 3, [(1, 1), (1, 3), (2, 2)]).unwrap();
        let r = m.rotate90();
        assert_eq!((r.rows(), r.cols()), (3, 2));
        assert_eq!(r.rotate90().rotate90().rotate90(), m);
        assert_ne!(r, m.transpose());
    }

    #[test]
    fn json_format() {
        let m = BinaryMatrix::from_cells(2, 3, [(2, 1), (1, 3)]).unwrap();
        assert_eq!(m.to_json(), r#"{"rows":2,"cols":3,"ones":[[1,3],[2,1]]}"#);
        assert_eq!(BinaryMatrix::from_json(&m.to_json()).unwrap(), m);
        assert!(BinaryMatrix::from_json(r#"{"rows":1,"cols":1,"ones":[[2,1]]}"#).is_err());
        assert!(BinaryMatrix::from_json(r#"{"rows":1,"cols":1,"ones":[[1,1],[1,1]]}"#).is_err());
        let pm: PermutationMatrix =
            serde_json::from_str(r#"{"rows":2,"cols":2,"ones":[[1,1],[2,2]]}"#).unwrap();
        assert_eq!(pm, PermutationMatrix::identity(2));
    }

    #[test]
    fn matrix_and_permutation_containment_agree() {
        for n in 1..=6 {
            for host in Permutation::all(n) {
                let hm = to_matrix(&host);
                for k in 1..=n {
                    for pat in Permutation::all(k) {
                        assert_eq!(
                            matrix_contains(hm.matrix(), to_matrix(&pat).matrix()).unwrap(),
                            contains(&host, &pat).unwrap(),
                            "{host} {pat}"
                        );
                    }
                }
            }
        }
    }
}
