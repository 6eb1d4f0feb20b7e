//! Exact dense linear algebra over Q.
//!
//! [`ExactMatrix`] is a row-major dense matrix of [`Rat`]. Elimination uses
//! first-nonzero pivoting in column order so results are reproducible, and
//! all inner loops skip zero entries: the operator matrices produced by the
//! modular-symbols code are dense in storage but sparse in content.

mod rational;

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

pub use rational::{ParseRatError, Rat};

/// Header line of the text serialization.
pub const MATRIX_FORMAT_HEADER: &str = "exactmatrix v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("operator does not preserve the subspace")]
    NonInvariantSubspace,
    #[error("basis columns are linearly dependent")]
    DependentBasis,
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self[(r, c)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.entries[r * self.cols + c]
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![Rat::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::ONE;
        }
        m
    }

    pub fn diag(values: &[Rat]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().map(|&v| Rat::from_int(v)));
        }
        ExactMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m[(i, j)] = v.clone();
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = &self[(r, c)];
                if !v.is_zero() {
                    t[(c, r)] = v.clone();
                }
            }
        }
        t
    }

    pub fn scale(&self, s: &Rat) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        // nonzero pattern of each row of `other`, computed once
        let other_nz: Vec<Vec<usize>> = (0..other.rows)
            .map(|l| (0..other.cols).filter(|&j| !other[(l, j)].is_zero()).collect())
            .collect();
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for &j in &other_nz[l] {
                    let prod = a * &other[(l, j)];
                    out[(i, j)] += &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn square(&self) -> Result<Self, LinalgError> {
        self.require_square()?;
        self.multiply(self)
    }

    pub fn trace(&self) -> Result<Rat, LinalgError> {
        self.require_square()?;
        let mut t = Rat::ZERO;
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        Ok(t)
    }

    /// trace(self²) without forming the square.
    pub fn trace_of_square(&self) -> Result<Rat, LinalgError> {
        self.require_square()?;
        let mut t = Rat::ZERO;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                let b = &self[(j, i)];
                if !b.is_zero() {
                    t += &(a * b);
                }
            }
        }
        Ok(t)
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vstack of widths {} and {}",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(ExactMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out[(r, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            entries.extend_from_slice(self.row(r));
        }
        ExactMatrix {
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Reduced row-echelon form and the (strictly increasing) pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut next = 0usize;
        for col in 0..cols {
            if next == rows {
                break;
            }
            let Some(pr) = (next..rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(pr, next);
            let inv = self[(next, col)].recip();
            if !inv.is_one() {
                for c in col..cols {
                    let v = &self[(next, c)];
                    if !v.is_zero() {
                        self[(next, c)] = v * &inv;
                    }
                }
            }
            let nz: Vec<usize> = (col..cols).filter(|&c| !self[(next, c)].is_zero()).collect();
            let pivot_row: Vec<Rat> = nz.iter().map(|&c| self[(next, c)].clone()).collect();
            for r in 0..rows {
                if r == next {
                    continue;
                }
                let f = self[(r, col)].clone();
                if f.is_zero() {
                    continue;
                }
                for (&c, pv) in nz.iter().zip(&pivot_row) {
                    let delta = &f * pv;
                    self[(r, c)] -= &delta;
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols = self.cols;
        for c in 0..cols {
            self.entries.swap(a * cols + c, b * cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {v : Mv = 0}, one basis vector per column.
    ///
    /// The basis is the standard one read off the echelon form: for each free
    /// column f the vector has a 1 in row f and zeros in the other free rows.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Coordinates X with `basis · X = target`, for a basis of independent columns.
    ///
    /// Fails with [`LinalgError::NonInvariantSubspace`] when some column of
    /// `target` is outside the column span of `basis`.
    pub fn solve_in_span(basis: &ExactMatrix, target: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if basis.rows != target.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "basis has {} rows, target has {}",
                basis.rows, target.rows
            )));
        }
        let k = basis.cols;
        let coords = match identity_rows(basis) {
            Some(rows) => target.select_rows(&rows),
            None => {
                // pick k rows of the basis forming an invertible block
                let (_, rows) = basis.transpose().rref();
                if rows.len() != k {
                    return Err(LinalgError::DependentBasis);
                }
                let block = basis.select_rows(&rows);
                let inv = block.inverse()?;
                inv.multiply(&target.select_rows(&rows))?
            }
        };
        if basis.multiply(&coords)? != *target {
            return Err(LinalgError::NonInvariantSubspace);
        }
        Ok(coords)
    }

    /// Matrix of `op` on the column span of `basis`, in basis coordinates.
    pub fn restrict(op: &ExactMatrix, basis: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        op.require_square()?;
        if op.cols != basis.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "operator is {}x{}, basis has {} rows",
                op.rows, op.cols, basis.rows
            )));
        }
        if basis.cols == 0 {
            return Ok(ExactMatrix::zeros(0, 0));
        }
        Self::solve_in_span(basis, &op.multiply(basis)?)
    }

    pub fn inverse(&self) -> Result<ExactMatrix, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        let mut aug = ExactMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Rat::ONE;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::DependentBasis);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(aug.select_columns(&cols))
    }

    /// Text form: header, dimensions, then one row per line of
    /// space-separated `num/den` (or `num`) entries.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{MATRIX_FORMAT_HEADER}").unwrap();
        writeln!(s, "{} {}", self.rows, self.cols).unwrap();
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<ExactMatrix, LinalgError> {
        let bad = |m: &str| LinalgError::Parse(m.to_string());
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(MATRIX_FORMAT_HEADER) {
            return Err(bad("missing or unknown format header"));
        }
        let dims = lines.next().ok_or_else(|| bad("missing dimensions"))?;
        let dims: Vec<usize> = dims
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad dimension")))
            .collect::<Result<_, _>>()?;
        let [rows, cols] = dims[..] else {
            return Err(bad("expected two dimensions"));
        };
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let line = lines.next().ok_or_else(|| bad("missing row"))?;
            let row: Vec<Rat> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|e: ParseRatError| LinalgError::Parse(e.to_string())))
                .collect::<Result<_, _>>()?;
            if row.len() != cols {
                return Err(bad("row has the wrong length"));
            }
            entries.extend(row);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(bad("trailing data"));
        }
        ExactMatrix::from_entries(rows, cols, entries)
    }
}

/// Kernel basis from an echelon form and its pivots.
pub(crate) fn kernel_from_rref(r: &ExactMatrix, pivots: &[usize]) -> ExactMatrix {
    let cols = r.cols;
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut k = ExactMatrix::zeros(cols, free.len());
    for (j, &f) in free.iter().enumerate() {
        k[(f, j)] = Rat::ONE;
        for (i, &p) in pivots.iter().enumerate() {
            let v = &r[(i, f)];
            if !v.is_zero() {
                k[(p, j)] = -v;
            }
        }
    }
    k
}

/// For each column j, a row that is the j-th unit vector, if every column has one.
fn identity_rows(basis: &ExactMatrix) -> Option<Vec<usize>> {
    let mut found = vec![None; basis.cols];
    for r in 0..basis.rows {
        let row = basis.row(r);
        let mut nz = row.iter().enumerate().filter(|(_, v)| !v.is_zero());
        if let (Some((j, v)), None) = (nz.next(), nz.next()) {
            if v.is_one() && found[j].is_none() {
                found[j] = Some(r);
            }
        }
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(rows)
    }

    #[test]
    fn rref_examples() {
        let id = ExactMatrix::identity(3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));
        let z = ExactMatrix::zeros(2, 2);
        assert_eq!(z.rref(), (z.clone(), vec![]));
        let r = m(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(r.rref(), (m(&[vec![1, 2], vec![0, 0]]), vec![0]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(ExactMatrix::identity(4).kernel_basis().cols(), 0);
        assert_eq!(ExactMatrix::zeros(2, 2).kernel_basis().cols(), 2);
        let k = m(&[vec![1, 1]]).kernel_basis();
        assert_eq!(k, m(&[vec![-1], vec![1]]));
    }

    #[test]
    fn restrict_examples() {
        let two = ExactMatrix::identity(3).scale(&Rat::from_int(2));
        let basis = m(&[vec![1, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(
            ExactMatrix::restrict(&two, &basis).unwrap(),
            ExactMatrix::identity(2).scale(&Rat::from_int(2))
        );
        assert_eq!(
            ExactMatrix::restrict(&two, &ExactMatrix::zeros(3, 0)).unwrap(),
            ExactMatrix::zeros(0, 0)
        );
        let d = m(&[vec![1, 0], vec![0, -1]]);
        let axis = m(&[vec![1], vec![0]]);
        assert_eq!(ExactMatrix::restrict(&d, &axis).unwrap(), m(&[vec![1]]));
        let swap = m(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(
            ExactMatrix::restrict(&swap, &axis),
            Err(LinalgError::NonInvariantSubspace)
        );
    }

    #[test]
    fn trace_and_square() {
        assert_eq!(ExactMatrix::identity(5).trace().unwrap(), Rat::from_int(5));
        assert_eq!(ExactMatrix::zeros(3, 3).trace().unwrap(), Rat::ZERO);
        let d = ExactMatrix::diag(&[Rat::from_int(2), Rat::from_int(3)]);
        assert_eq!(
            d.square().unwrap(),
            ExactMatrix::diag(&[Rat::from_int(4), Rat::from_int(9)])
        );
        assert!(matches!(m(&[vec![1, 2]]).trace(), Err(LinalgError::NotSquare { .. })));
        assert!(m(&[vec![1, 2]]).multiply(&m(&[vec![1, 2]])).is_err());
    }

    #[test]
    fn inverse_of_small_matrix() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.multiply(&inv).unwrap(), ExactMatrix::identity(2));
        assert!(m(&[vec![1, 2], vec![2, 4]]).inverse().is_err());
    }

    #[test]
    fn text_format() {
        let a = ExactMatrix::from_entries(
            2,
            2,
            vec![Rat::new(1, 2), Rat::from_int(-3), Rat::ZERO, Rat::new(-7, 9)],
        )
        .unwrap();
        let text = a.to_text();
        assert_eq!(text, "exactmatrix v1\n2 2\n1/2 -3\n0 -7/9\n");
        assert_eq!(ExactMatrix::from_text(&text).unwrap(), a);
        assert!(ExactMatrix::from_text("exactmatrix v0\n1 1\n1\n").is_err());
        assert!(ExactMatrix::from_text("exactmatrix v1\n1 2\n1\n").is_err());
        let empty = ExactMatrix::zeros(0, 0);
        assert_eq!(ExactMatrix::from_text(&empty.to_text()).unwrap(), empty);
    }
}
