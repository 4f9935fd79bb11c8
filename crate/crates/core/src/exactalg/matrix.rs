use num_traits::Zero;

use super::poly::{Poly, Rational};
use crate::error::{Error, Result};

/// Dense matrix of polynomials, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, nvars: usize, entries: Vec<Poly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|p| p.nvars() != nvars) {
            return Err(Error::RingMismatch("matrix entries over different rings".into()));
        }
        Ok(PolyMatrix { rows, cols, nvars, entries })
    }

    pub fn zero(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix { rows, cols, nvars, entries: vec![Poly::zero(nvars); rows * cols] }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zero(n, n, nvars);
        for i in 0..n {
            m.set(i, i, Poly::one(nvars));
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, nvars: usize, columns: &[Vec<Poly>]) -> Result<Self> {
        let cols = columns.len();
        let mut m = Self::zero(rows, cols, nvars);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension(format!(
                    "column {j} has {} entries, expected {rows}",
                    col.len()
                )));
            }
            for (i, p) in col.iter().enumerate() {
                if p.nvars() != nvars {
                    return Err(Error::RingMismatch("column entry over a different ring".into()));
                }
                m.set(i, j, p.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        PolyMatrix { rows: rows.len(), cols: cols.len(), nvars: self.nvars, entries }
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly, nvars: usize) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.eval(point)).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one(self.nvars));
        }
        let mut a: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign_flip = false;
        let mut prev = Poly::one(self.nvars);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(Poly::zero(self.nvars)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).ok_or_else(|| {
                        Error::Internal("Bareiss step produced an inexact division".into())
                    })?;
                }
                a[i][k] = Poly::zero(self.nvars);
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if sign_flip { -det } else { det })
    }

    /// Determinant by Laplace expansion along the first row; exponential,
    /// kept as an independent reference for small matrices.
    pub fn cofactor_determinant(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::Dimension("non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one(self.nvars));
        }
        if n == 1 {
            return Ok(self.get(0, 0).clone());
        }
        let mut acc = Poly::zero(self.nvars);
        let rows: Vec<usize> = (1..n).collect();
        for j in 0..n {
            if self.get(0, j).is_zero() {
                continue;
            }
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = self.submatrix(&rows, &cols).cofactor_determinant()?;
            let term = self.get(0, j) * &minor;
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        Ok(acc)
    }

    /// All `k x k` minors, each tagged with its row and column selections.
    pub fn minors(&self, k: usize) -> Result<Vec<(Vec<usize>, Vec<usize>, Poly)>> {
        if k == 0 || k > self.rows.min(self.cols) {
            return Err(Error::InvalidArgument(format!(
                "minor size {k} out of range for a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut out = Vec::new();
        for rs in combinations(self.rows, k) {
            for cs in combinations(self.cols, k) {
                let d = self.submatrix(&rs, &cs).determinant()?;
                out.push((rs.clone(), cs, d));
            }
        }
        Ok(out)
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Dense rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Rational>,
}

impl QMatrix {
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Rational>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let piv = a[rank][c].clone();
            for r in rank + 1..self.rows {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &piv;
                for cc in c..self.cols {
                    let d = &f * &a[rank][cc];
                    a[r][cc] -= d;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}
