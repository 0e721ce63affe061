//! Dense integer matrices over arbitrary-precision integers, with the Smith
//! normal form and the lattice computations the abelian backend is built on.
//!
//! Row-vector convention throughout: an element of `Z^n` is a row, and a
//! matrix `M: Z^n -> Z^m` acts on the right, `x |-> x * M`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect())
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn neg(&self) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = -a.clone();
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    /// Vertical stacking: rows of `self` over rows of `other`.
    pub fn stack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "stack shape mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hcat shape mismatch");
        let mut out = Mat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut out = Mat::zero(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn row_vec(v: Vec<Int>) -> Mat {
        Mat::from_rows(vec![v])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let c = self.cols;
            self.data.swap(a * c + j, b * c + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let c = self.cols;
            self.data.swap(i * c + a, i * c + b);
        }
    }

    /// row[a] += k * row[b]
    fn add_row(&mut self, a: usize, b: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = k * &self[(b, j)];
            self[(a, j)] += t;
        }
    }

    /// col[a] += k * col[b]
    fn add_col(&mut self, a: usize, b: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = k * &self[(i, b)];
            self[(i, a)] += t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let t = -self[(a, j)].clone();
            self[(a, j)] = t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `U * M * V = D`, with `U`, `V` unimodular and the
/// diagonal of `D` nonnegative in divisibility order.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: Mat,
    pub d: Mat,
    pub v: Mat,
    /// Inverses of the transforms, accumulated alongside them.
    pub u_inv: Mat,
    pub v_inv: Mat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Nontrivial invariant factors (entries > 1 first, then the zeros that
    /// mark free rank are excluded here).
    pub fn invariant_factors(&self) -> Vec<Int> {
        self.diagonal().into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Pivot selection: smallest nonzero absolute value in the trailing block,
/// ties broken by lowest row then lowest column.
fn find_pivot(m: &Mat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(Int, usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let a = m[(i, j)].abs();
            if a.is_zero() {
                continue;
            }
            match &best {
                Some((b, _, _)) if *b <= a => {}
                _ => best = Some((a, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn snf(m: &Mat) -> Snf {
    let mut d = m.clone();
    let mut u = Mat::identity(m.rows);
    let mut u_inv = Mat::identity(m.rows);
    let mut v = Mat::identity(m.cols);
    let mut v_inv = Mat::identity(m.cols);

    // Row op on d is mirrored on u (and inversely on u_inv columns);
    // column op on d is mirrored on v (inversely on v_inv rows).
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = find_pivot(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        // Clear column and row `t` below/right of the pivot. Remainders may
        // reappear; loop until the cross is clean.
        loop {
            let mut dirty = false;
            for i in (t + 1)..d.rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = div_floor_nearest(&d[(i, t)], &d[(t, t)]);
                d.add_row(i, t, &(-q.clone()));
                u.add_row(i, t, &(-q.clone()));
                u_inv.add_col(t, i, &q);
                if !d[(i, t)].is_zero() {
                    // Remainder is strictly smaller; make it the pivot.
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    u_inv.swap_cols(t, i);
                    dirty = true;
                }
            }
            for j in (t + 1)..d.cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = div_floor_nearest(&d[(t, j)], &d[(t, t)]);
                d.add_col(j, t, &(-q.clone()));
                v.add_col(j, t, &(-q.clone()));
                v_inv.add_row(t, j, &q);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    v_inv.swap_rows(t, j);
                    dirty = true;
                }
            }
            if !dirty
                && ((t + 1)..d.rows).all(|i| d[(i, t)].is_zero())
                && ((t + 1)..d.cols).all(|j| d[(t, j)].is_zero())
            {
                break;
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            // Negating a row of u negates the matching column of u_inv.
            for i in 0..u_inv.rows {
                let x = -u_inv[(i, t)].clone();
                u_inv[(i, t)] = x;
            }
        }

        // Enforce divisibility: the pivot must divide every trailing entry.
        let mut offender = None;
        'scan: for i in (t + 1)..d.rows {
            for j in (t + 1)..d.cols {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            d.add_row(t, i, &Int::one());
            u.add_row(t, i, &Int::one());
            u_inv.add_col(i, t, &(-Int::one()));
            continue; // redo this pivot position
        }
        t += 1;
    }
    Snf { u, d, v, u_inv, v_inv }
}

/// Quotient rounding toward the nearest integer keeps the remainders small,
/// which keeps coefficient growth in check.
fn div_floor_nearest(a: &Int, b: &Int) -> Int {
    let (q, r) = num_integer::Integer::div_rem(a, b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Solve `X * A = B` over the integers (row convention), if a solution
/// exists. `A: k x n`, `B: m x n`, result `X: m x k`.
pub fn solve_left(a: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(a.cols, b.cols);
    // X A = B  <=>  A^T X^T = B^T. With U A^T V = D: D (V^-1 X^T) = U B^T.
    let at = a.transpose();
    let s = snf(&at);
    let rhs = s.u.mul(&b.transpose()); // (n x k-ish) actually n x m
    let mut y = Mat::zero(at.cols, b.rows);
    let rank = at.rows.min(at.cols);
    for i in 0..rhs.rows {
        for j in 0..rhs.cols {
            let d = if i < rank { s.d[(i, i)].clone() } else { Int::zero() };
            if d.is_zero() {
                if !rhs[(i, j)].is_zero() {
                    return None;
                }
            } else if i < y.rows {
                let (q, r) = num_integer::Integer::div_rem(&rhs[(i, j)], &d);
                if !r.is_zero() {
                    return None;
                }
                y[(i, j)] = q;
            } else if !rhs[(i, j)].is_zero() {
                return None;
            }
        }
    }
    // Rows of rhs beyond y.rows must be zero (checked above via d = 0 path).
    let xt = s.v.mul(&y);
    Some(xt.transpose())
}

/// Does the row vector `v` lie in the row span (over Z) of `m`?
pub fn in_row_span(m: &Mat, v: &[Int]) -> bool {
    solve_left(m, &Mat::row_vec(v.to_vec())).is_some()
}

/// A basis (as rows) of the lattice `{ x in Z^rows(a) : x * a = 0 }`.
pub fn left_kernel_basis(a: &Mat) -> Mat {
    // x a = 0 <=> a^T x^T = 0. With U a^T V = D: columns of V beyond the
    // rank span the kernel of a^T as column vectors; transpose to rows.
    let s = snf(&a.transpose());
    let rank = s.rank();
    let v = &s.v;
    let mut rows = Vec::new();
    for j in rank..v.cols {
        rows.push((0..v.rows).map(|i| v[(i, j)].clone()).collect());
    }
    if rows.is_empty() {
        Mat::zero(0, a.rows)
    } else {
        Mat::from_rows(rows)
    }
}

/// Is `m` unimodular (square with determinant +-1)? Verified via SNF.
pub fn is_unimodular(m: &Mat) -> bool {
    if m.rows != m.cols {
        return false;
    }
    let s = snf(m);
    s.diagonal().iter().all(|d| d.is_one())
}
