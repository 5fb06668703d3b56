//! Exact integer linear algebra.
//!
//! Matrices hold arbitrary-precision entries and act on column vectors by
//! left multiplication. Lattices are stored by a row-style Hermite normal
//! form basis, so two sublattices of `Z^n` are equal exactly when their
//! bases compare equal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer column vector.
pub type IntVector = Vec<BigInt>;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the length is wrong.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(rows * cols, entries.len(), "entry count does not match shape");
        IntegerMatrix { rows, cols, entries }
    }

    /// Builds a matrix from nested rows of machine integers.
    ///
    /// All rows must have the same length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntegerMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// Builds a matrix whose rows are the given vectors.
    pub fn from_row_vectors(cols: usize, vectors: &[IntVector]) -> Self {
        let mut entries = Vec::with_capacity(vectors.len() * cols);
        for v in vectors {
            assert_eq!(v.len(), cols, "vector length does not match column count");
            entries.extend(v.iter().cloned());
        }
        IntegerMatrix {
            rows: vectors.len(),
            cols,
            entries,
        }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(cols: usize, blocks: &[IntegerMatrix]) -> Self {
        let mut entries = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "column mismatch in vstack");
            rows += b.rows;
            entries.extend(b.entries.iter().cloned());
        }
        IntegerMatrix { rows, cols, entries }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> IntVector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn sub(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let i = r * self.cols + c;
            self.entries[i] = -std::mem::take(&mut self.entries[i]);
        }
    }

    /// row[target] -= factor * row[source]
    fn row_axpy(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.entries[source * self.cols + c];
            if !s.is_zero() {
                let d = s * factor;
                self.entries[target * self.cols + c] -= d;
            }
        }
    }

    /// col[target] -= factor * col[source]
    fn col_axpy(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self.entries[r * self.cols + source];
            if !s.is_zero() {
                let d = s * factor;
                self.entries[r * self.cols + target] -= d;
            }
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// Row-style Hermite normal form together with the unimodular transform.
///
/// Returns `(h, u)` with `u * m == h`. Nonzero rows of `h` come first, pivots
/// are positive, and entries above each pivot lie in `[0, pivot)`. Also
/// returns the number of nonzero rows.
pub fn hermite_with_transform(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix, usize) {
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..h.cols {
        if pivot_row == h.rows {
            break;
        }
        let mut found = false;
        loop {
            let best = (pivot_row..h.rows)
                .filter(|&r| !h.get(r, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(best) = best else { break };
            found = true;
            h.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            let pivot = h.get(pivot_row, col).clone();
            let mut clean = true;
            for r in pivot_row + 1..h.rows {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let q = h.get(r, col).div_floor(&pivot);
                h.row_axpy(r, pivot_row, &q);
                u.row_axpy(r, pivot_row, &q);
                if !h.get(r, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h.get(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let pivot = h.get(pivot_row, col).clone();
        for r in 0..pivot_row {
            let q = h.get(r, col).div_floor(&pivot);
            h.row_axpy(r, pivot_row, &q);
            u.row_axpy(r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u, pivot_row)
}

/// Row-style Hermite normal form with zero rows removed.
pub fn hermite_normal_form(m: &IntegerMatrix) -> IntegerMatrix {
    let (h, _, rank) = hermite_with_transform(m);
    IntegerMatrix::from_entries(rank, h.cols, h.entries[..rank * h.cols].to_vec())
}

/// Result of a Smith normal form computation: `u * m * v == d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    /// Inverse of `u`, maintained alongside it.
    pub u_inv: IntegerMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_i`, including trailing zeros, up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by minimal-absolute-value pivoting.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut u_inv = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let x = d.get(r, c);
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(br, bc)| x.abs() < d.get(br, bc).abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                return SmithForm { d, u, v, u_inv };
            };
            d.swap_rows(t, br);
            u.swap_rows(t, br);
            u_inv.swap_cols(t, br);
            d.swap_cols(t, bc);
            v.swap_cols(t, bc);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for r in t + 1..rows {
                if d.get(r, t).is_zero() {
                    continue;
                }
                let q = d.get(r, t).div_floor(&pivot);
                d.row_axpy(r, t, &q);
                u.row_axpy(r, t, &q);
                // inverse of (row r -= q row t) is (col t += q col r)
                u_inv.col_axpy(t, r, &-&q);
                clean &= d.get(r, t).is_zero();
            }
            for c in t + 1..cols {
                if d.get(t, c).is_zero() {
                    continue;
                }
                let q = d.get(t, c).div_floor(&pivot);
                d.col_axpy(c, t, &q);
                v.col_axpy(c, t, &q);
                clean &= d.get(t, c).is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the remaining block
            let bad = (t + 1..rows).find(|&r| {
                (t + 1..cols).any(|c| !d.get(r, c).is_multiple_of(&pivot))
            });
            match bad {
                Some(r) => {
                    // row t += row r
                    let minus_one = -BigInt::one();
                    d.row_axpy(t, r, &minus_one);
                    u.row_axpy(t, r, &minus_one);
                    u_inv.col_axpy(r, t, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            let n = u_inv.rows;
            for r in 0..n {
                let i = r * u_inv.cols + t;
                u_inv.entries[i] = -std::mem::take(&mut u_inv.entries[i]);
            }
        }
    }
    SmithForm { d, u, v, u_inv }
}

/// Sublattice of `Z^n` given by a canonical Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    ambient_rank: usize,
    basis: IntegerMatrix,
}

impl LatticeBasis {
    /// Lattice spanned by the rows of `generators`.
    pub fn from_generators(generators: &IntegerMatrix) -> Self {
        LatticeBasis {
            ambient_rank: generators.cols,
            basis: hermite_normal_form(generators),
        }
    }

    pub fn full(n: usize) -> Self {
        LatticeBasis {
            ambient_rank: n,
            basis: IntegerMatrix::identity(n),
        }
    }

    pub fn zero(n: usize) -> Self {
        LatticeBasis {
            ambient_rank: n,
            basis: IntegerMatrix::zeros(0, n),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Reduces `v` modulo the lattice: pivot coordinates end up in `[0, pivot)`.
    ///
    /// Two vectors reduce to the same result iff their difference lies in the
    /// lattice.
    pub fn reduce(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(v.len(), self.ambient_rank);
        let mut out = v.to_vec();
        for r in 0..self.basis.rows {
            let row = self.basis.row(r);
            let p = row.iter().position(|x| !x.is_zero()).expect("zero row in HNF basis");
            let q = out[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (o, b) in out.iter_mut().zip(row) {
                    *o -= b * &q;
                }
            }
        }
        out
    }
}

/// Torsion and free parts of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub torsion_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants {
            torsion_factors: Vec::new(),
            free_rank: 0,
        }
    }

    /// Cokernel `Z^rows / M Z^cols` of a relation matrix.
    pub fn of_cokernel(relations: &IntegerMatrix) -> Self {
        let snf = smith_normal_form(relations);
        let diag = snf.diagonal();
        let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
        AbelianInvariants {
            torsion_factors: diag.into_iter().filter(|d| *d > BigInt::one()).collect(),
            free_rank: relations.rows - nonzero,
        }
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion_factors.iter().product()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .torsion_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Integer kernel `{x : m x = 0}` as a canonical lattice.
pub fn kernel_lattice(m: &IntegerMatrix) -> LatticeBasis {
    let (_, u, rank) = hermite_with_transform(&m.transpose());
    let kernel_rows: Vec<IntVector> = (rank..u.rows).map(|r| u.row(r).to_vec()).collect();
    LatticeBasis::from_generators(&IntegerMatrix::from_row_vectors(m.cols, &kernel_rows))
}

/// Finds some integer `x` with `m x = b`, or `None` when no integer solution exists.
///
/// Works from the column echelon form of `m`, independently of the Smith form.
pub fn solve_linear(m: &IntegerMatrix, b: &[BigInt]) -> Option<IntVector> {
    assert_eq!(b.len(), m.rows, "right-hand side length does not match row count");
    // u * m^T = h, so m * u^T = h^T: the columns of h^T are the rows of h.
    let (h, u, rank) = hermite_with_transform(&m.transpose());
    let mut residual = b.to_vec();
    let mut y = Vec::with_capacity(rank);
    let mut col = 0;
    for i in 0..rank {
        let row = h.row(i);
        while row[col].is_zero() {
            if !residual[col].is_zero() {
                return None;
            }
            col += 1;
        }
        let (q, r) = residual[col].div_rem(&row[col]);
        if !r.is_zero() {
            return None;
        }
        for (res, hv) in residual.iter_mut().zip(row) {
            if !hv.is_zero() {
                *res -= hv * &q;
            }
        }
        y.push(q);
        col += 1;
    }
    if residual.iter().any(|r| !r.is_zero()) {
        return None;
    }
    let mut x = vec![BigInt::zero(); m.cols];
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        for (xj, uj) in x.iter_mut().zip(u.row(i)) {
            *xj += uj * yi;
        }
    }
    Some(x)
}

/// Converts machine integers into an [`IntVector`].
pub fn int_vector(values: &[i64]) -> IntVector {
    values.iter().map(|&v| BigInt::from(v)).collect()
}
