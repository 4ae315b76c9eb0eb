//! Exact linear algebra over the coefficient field `K`.
//!
//! Everything here is plumbing for the modules that need kernels, ranks and
//! linear-dependence certificates: minimal-polynomial discovery, symmetric
//! bases, and the truncated de Rham machinery. Elimination works over `K`
//! with exact division; scalars self-normalize by integer content and
//! equality is decided by cross-multiplication, so no precision is lost.

use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// Dense matrix over `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarMat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(rows * cols, data.len());
        ScalarMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ScalarMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ScalarMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &ScalarMat) -> ScalarMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in ScalarMat::mul");
        let mut out = ScalarMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c) + &(a * b);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> ScalarMat {
        ScalarMat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, s: &Scalar) -> ScalarMat {
        ScalarMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &ScalarMat) -> ScalarMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ScalarMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &ScalarMat) -> ScalarMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ScalarMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut span = RowSpan::new(self.cols);
        for r in 0..self.rows {
            span.insert(self.row(r).to_vec());
        }
        span.rank()
    }

    /// Kernel basis (right null space): vectors v with `self * v = 0`.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        // Reduce rows to echelon form, then read off free columns.
        let mut span = RowSpan::new(self.cols);
        for r in 0..self.rows {
            span.insert(self.row(r).to_vec());
        }
        span.full_reduce();
        let pivot_cols: Vec<usize> = span.pivots.clone();
        let is_pivot = |c: usize| pivot_cols.contains(&c);
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot(free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                // row: e_pc + sum_{c free} coeff * e_c  => v[pc] = -coeff(free)
                v[pc] = -&span.rows[ri][free];
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `self * x = b` exactly; `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        // Row-reduce the augmented transpose: operate on columns of self.
        let mut span = RowSpan::new(self.cols + 1);
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            row.push(b[r].clone());
            span.insert(row);
        }
        span.full_reduce();
        // Inconsistent iff some pivot sits in the augmented column.
        if span.pivots.iter().any(|&p| p == self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (ri, &pc) in span.pivots.iter().enumerate() {
            x[pc] = span.rows[ri][self.cols].clone();
        }
        Some(x)
    }

    /// Exact inverse of a square matrix.
    pub fn inverse(&self) -> Result<ScalarMat> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut span = RowSpan::new(2 * n);
        for r in 0..n {
            let mut row = self.row(r).to_vec();
            for c in 0..n {
                row.push(if c == r { Scalar::one() } else { Scalar::zero() });
            }
            span.insert(row);
        }
        span.full_reduce();
        if span.rank() < n || span.pivots.iter().any(|&p| p >= n) {
            return Err(Error::Singular("matrix has no inverse over K".into()));
        }
        let mut out = ScalarMat::zeros(n, n);
        for (ri, &pc) in span.pivots.iter().enumerate() {
            for c in 0..n {
                out.set(pc, c, span.rows[ri][n + c].clone());
            }
        }
        Ok(out)
    }
}

/// Incremental echelon span of row vectors over `K`, with optional
/// dependence certificates against the inserted generators.
pub struct RowSpan {
    cols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    /// For each echelon row, its expression over the inserted vectors.
    expr: Vec<Vec<Scalar>>,
    inserted: usize,
    track_expr: bool,
}

/// Result of [`RowSpan::insert_with_expr`].
pub enum InsertOutcome {
    Independent,
    /// Coefficients `c_i` with `v = sum c_i * inserted_i` over the
    /// previously inserted vectors.
    Dependent(Vec<Scalar>),
}

impl RowSpan {
    pub fn new(cols: usize) -> Self {
        RowSpan { cols, rows: Vec::new(), pivots: Vec::new(), expr: Vec::new(), inserted: 0, track_expr: false }
    }

    pub fn with_expressions(cols: usize) -> Self {
        RowSpan { track_expr: true, ..RowSpan::new(cols) }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    fn reduce_tracking(&self, mut v: Vec<Scalar>) -> (Vec<Scalar>, Vec<Scalar>) {
        let mut combo = vec![Scalar::zero(); self.rows.len()];
        for (ri, row) in self.rows.iter().enumerate() {
            let p = self.pivots[ri];
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for c in 0..self.cols {
                if !row[c].is_zero() {
                    let nv = &v[c] - &(&f * &row[c]);
                    v[c] = nv;
                }
            }
            combo[ri] = f;
        }
        (v, combo)
    }

    /// Residual of `v` modulo the span.
    pub fn reduce(&self, v: Vec<Scalar>) -> Vec<Scalar> {
        self.reduce_tracking(v).0
    }

    pub fn contains(&self, v: Vec<Scalar>) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Insert a vector; returns true when the rank grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        !matches!(self.insert_with_expr(v), InsertOutcome::Dependent(_))
    }

    pub fn insert_with_expr(&mut self, v: Vec<Scalar>) -> InsertOutcome {
        assert_eq!(v.len(), self.cols);
        let (mut v, combo) = self.reduce_tracking(v);
        let pivot = v.iter().position(|x| !x.is_zero());
        match pivot {
            None => {
                self.inserted += 1;
                if self.track_expr {
                    // v = sum combo_ri * row_ri, rows expressed over inserted
                    let mut coeffs = vec![Scalar::zero(); self.inserted - 1];
                    for (ri, f) in combo.iter().enumerate() {
                        if f.is_zero() {
                            continue;
                        }
                        for (j, e) in self.expr[ri].iter().enumerate() {
                            if !e.is_zero() {
                                coeffs[j] = &coeffs[j] + &(f * e);
                            }
                        }
                    }
                    InsertOutcome::Dependent(coeffs)
                } else {
                    InsertOutcome::Dependent(Vec::new())
                }
            }
            Some(p) => {
                let inv = v[p].inv().expect("pivot is nonzero");
                for c in 0..self.cols {
                    if !v[c].is_zero() {
                        v[c] = &v[c] * &inv;
                    }
                }
                let mut e = Vec::new();
                if self.track_expr {
                    // new row = inv * (v_inserted - sum combo_ri row_ri)
                    e = vec![Scalar::zero(); self.inserted + 1];
                    e[self.inserted] = inv.clone();
                    for (ri, f) in combo.iter().enumerate() {
                        if f.is_zero() {
                            continue;
                        }
                        let fi = &inv * f;
                        for (j, prev) in self.expr[ri].iter().enumerate() {
                            if !prev.is_zero() {
                                e[j] = &e[j] - &(&fi * prev);
                            }
                        }
                    }
                }
                self.inserted += 1;
                // keep rows sorted by pivot column
                let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
                self.rows.insert(at, v);
                self.pivots.insert(at, p);
                if self.track_expr {
                    self.expr.insert(at, e);
                }
                InsertOutcome::Independent
            }
        }
    }

    /// Back-eliminate so every pivot column is zero off its own row (RREF).
    pub fn full_reduce(&mut self) {
        for i in (0..self.rows.len()).rev() {
            let p = self.pivots[i];
            let (upper, lower) = self.rows.split_at_mut(i);
            let row = &lower[0];
            for up in upper.iter_mut() {
                if up[p].is_zero() {
                    continue;
                }
                let f = up[p].clone();
                for c in 0..self.cols {
                    if !row[c].is_zero() {
                        up[c] = &up[c] - &(&f * &row[c]);
                    }
                }
            }
        }
    }
}
