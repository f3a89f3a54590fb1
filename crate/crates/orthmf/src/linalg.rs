//! Dense linear algebra generic over a scalar: exact rationals for the
//! lattice/representation layers, complex floats for the automorphy and
//! metric engines. Row reduction always scans columns left to right so
//! that exact bases come out in a reproducible (lexicographic-pivot) form.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar usable in Gaussian elimination. `pivot_size` drives pivot choice:
/// exact scalars report 1.0 for any nonzero entry (first-nonzero pivoting,
/// deterministic), floats report magnitude (partial pivoting).
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn pivot_size(&self) -> f64;
    /// Whether `self` should count as zero relative to entries of size `scale`.
    fn negligible(&self, scale: f64) -> bool;
}

impl Scalar for BigRational {
    fn pivot_size(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for Complex64 {
    fn pivot_size(&self) -> f64 {
        self.norm()
    }
    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= 1e-12 * scale.max(1.0)
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn filled(rows: usize, cols: usize, v: T) -> Self {
        Mat {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)].clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data: out,
        }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut r = self.row(i).to_vec();
            r.extend_from_slice(other.row(i));
            rows.push(r);
        }
        Mat::from_rows(rows)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::filled(rows, cols, T::zero())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out: Mat<T> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a = a.clone() - b.clone();
        }
        m
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    fn max_size(&self) -> f64 {
        self.data.iter().map(|x| x.pivot_size()).fold(0.0, f64::max)
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let scale = self.max_size();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            // pick the pivot row: largest pivot_size (= first nonzero for exact scalars)
            let mut best = None;
            let mut best_sz = 0.0;
            for i in r..m.rows {
                let sz = m[(i, col)].pivot_size();
                if sz > best_sz && !m[(i, col)].negligible(scale) {
                    best = Some(i);
                    best_sz = sz;
                }
            }
            let Some(p) = best else { continue };
            m.swap_rows(r, p);
            let inv = T::one() / m[(r, col)].clone();
            for j in col..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i != r && !m[(i, col)].is_zero() {
                    let f = m[(i, col)].clone();
                    for j in col..m.cols {
                        let t = f.clone() * m[(r, j)].clone();
                        m[(i, j)] = m[(i, j)].clone() - t;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {x : A x = 0}, rows of the result.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::new();
        for &f in &free {
            let mut v = vec![T::zero(); self.cols];
            v[f] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = T::zero() - r[(i, f)].clone();
            }
            rows.push(v);
        }
        if rows.is_empty() {
            Mat::zeros(0, self.cols)
        } else {
            Mat::from_rows(rows)
        }
    }

    /// Solve A x = b; None when inconsistent (to scalar tolerance).
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.rows, b.len());
        let aug = self.hstack(&Mat::from_rows(vec![b.to_vec()]).transpose());
        let scale = aug.max_size();
        let (r, pivots) = aug.rref();
        // a pivot in the last column means inconsistency
        if pivots.contains(&self.cols) {
            return None;
        }
        // verify residual rows
        for i in pivots.len()..r.rows {
            if !r[(i, self.cols)].negligible(scale) {
                return None;
            }
        }
        let mut x = vec![T::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Solve A X = B columnwise; None if any column is inconsistent.
    pub fn solve_many(&self, b: &Mat<T>) -> Option<Mat<T>> {
        assert_eq!(self.rows, b.rows);
        let aug = self.hstack(b);
        let scale = aug.max_size();
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        for i in pivots.len()..r.rows {
            for j in 0..b.cols {
                if !r[(i, self.cols + j)].negligible(scale) {
                    return None;
                }
            }
        }
        let mut x = Mat::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = r[(i, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        self.solve_many(&Mat::identity(self.rows))
    }

    /// Is v in the row space of self?
    pub fn row_space_contains(&self, v: &[T]) -> bool {
        self.transpose().solve(v).is_some()
    }

    /// Basis (rows) of rowspace(self) ∩ rowspace(other), Zassenhaus style.
    pub fn intersect_rows(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let n = self.cols;
        let mut rows = Vec::new();
        for i in 0..self.rows {
            let mut r = self.row(i).to_vec();
            r.extend(self.row(i).to_vec());
            rows.push(r);
        }
        for i in 0..other.rows {
            let mut r = other.row(i).to_vec();
            r.extend(vec![T::zero(); n]);
            rows.push(r);
        }
        if rows.is_empty() {
            return Mat::zeros(0, n);
        }
        let (r, pivots) = Mat::from_rows(rows).rref();
        let mut out = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            if p >= n {
                out.push(r.row(i)[n..].to_vec());
            }
        }
        if out.is_empty() {
            Mat::zeros(0, n)
        } else {
            Mat::from_rows(out).rref().0
        }
    }

    /// Canonical (rref) basis of the row space, zero rows dropped.
    pub fn row_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let rows: Vec<Vec<T>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        if rows.is_empty() {
            Mat::zeros(0, self.cols)
        } else {
            Mat::from_rows(rows)
        }
    }
}

// ---------------------------------------------------------------------------
// Integer lattice normal forms
// ---------------------------------------------------------------------------

pub type ZMat = Mat<BigInt>;

/// Row Hermite normal form: returns (H, U) with U·A = H, U unimodular.
pub fn hermite_normal_form(a: &ZMat) -> (ZMat, ZMat) {
    let mut h = a.clone();
    let mut u = ZMat::from_rows(
        (0..a.rows)
            .map(|i| {
                (0..a.rows)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect(),
    );
    let (rows, cols) = (h.rows, h.cols);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // euclid out column c below row r
        loop {
            let mut min_i = None;
            for i in r..rows {
                if !h[(i, c)].is_zero() {
                    min_i = match min_i {
                        None => Some(i),
                        Some(m) if h[(i, c)].abs() < h[(m, c)].abs() => Some(i),
                        keep => keep,
                    };
                }
            }
            let Some(p) = min_i else { break };
            swap_rows_pair(&mut h, &mut u, r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !h[(i, c)].is_zero() {
                    let q = div_floor_bi(&h[(i, c)], &h[(r, c)]);
                    row_op_pair(&mut h, &mut u, i, r, &q);
                    if !h[(i, c)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row_pair(&mut h, &mut u, r);
        }
        // reduce entries above the pivot
        for i in 0..r {
            let q = div_floor_bi(&h[(i, c)], &h[(r, c)]);
            if !q.is_zero() {
                row_op_pair(&mut h, &mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

fn div_floor_bi(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.div_floor(b)
}

fn swap_rows_pair(h: &mut ZMat, u: &mut ZMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..h.cols {
        let t = h[(a, j)].clone();
        h[(a, j)] = h[(b, j)].clone();
        h[(b, j)] = t;
    }
    for j in 0..u.cols {
        let t = u[(a, j)].clone();
        u[(a, j)] = u[(b, j)].clone();
        u[(b, j)] = t;
    }
}

fn row_op_pair(h: &mut ZMat, u: &mut ZMat, i: usize, r: usize, q: &BigInt) {
    for j in 0..h.cols {
        let t = q.clone() * h[(r, j)].clone();
        h[(i, j)] = h[(i, j)].clone() - t;
    }
    for j in 0..u.cols {
        let t = q.clone() * u[(r, j)].clone();
        u[(i, j)] = u[(i, j)].clone() - t;
    }
}

fn negate_row_pair(h: &mut ZMat, u: &mut ZMat, r: usize) {
    for j in 0..h.cols {
        h[(r, j)] = -h[(r, j)].clone();
    }
    for j in 0..u.cols {
        u[(r, j)] = -u[(r, j)].clone();
    }
}

/// Smith normal form: returns (d, u, v) with u·A·v diagonal = d (elementary
/// divisors, each dividing the next).
pub fn smith_normal_form(a: &ZMat) -> (ZMat, ZMat, ZMat) {
    let mut d = a.clone();
    let mut u = identity_z(a.rows);
    let mut v = identity_z(a.cols);
    let k = a.rows.min(a.cols);
    for t in 0..k {
        loop {
            // find minimal nonzero entry in the remaining block
            let mut min = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if !d[(i, j)].is_zero() {
                        min = match min {
                            None => Some((i, j)),
                            Some((mi, mj)) if d[(i, j)].abs() < d[(mi, mj)].abs() => Some((i, j)),
                            keep => keep,
                        };
                    }
                }
            }
            let Some((pi, pj)) = min else { break };
            swap_rows_pair(&mut d, &mut u, t, pi);
            swap_cols_pair(&mut d, &mut v, t, pj);
            let mut clean = true;
            for i in t + 1..d.rows {
                if !d[(i, t)].is_zero() {
                    let q = div_floor_bi(&d[(i, t)], &d[(t, t)]);
                    row_op_pair(&mut d, &mut u, i, t, &q);
                    if !d[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..d.cols {
                if !d[(t, j)].is_zero() {
                    let q = div_floor_bi(&d[(t, j)], &d[(t, t)]);
                    col_op_pair(&mut d, &mut v, j, t, &q);
                    if !d[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility d[t,t] | d[i,j]
            let mut fixed = true;
            'outer: for i in t + 1..d.rows {
                for j in t + 1..d.cols {
                    if !(d[(i, j)].clone() % d[(t, t)].clone()).is_zero() {
                        // add row i to row t and restart
                        for c in 0..d.cols {
                            let x = d[(i, c)].clone();
                            d[(t, c)] += x;
                        }
                        for c in 0..u.cols {
                            let x = u[(i, c)].clone();
                            u[(t, c)] += x;
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d.rows > t && d.cols > t && d[(t, t)].is_negative() {
            negate_row_pair(&mut d, &mut u, t);
        }
    }
    (d, u, v)
}

fn swap_cols_pair(d: &mut ZMat, v: &mut ZMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows {
        let t = d[(i, a)].clone();
        d[(i, a)] = d[(i, b)].clone();
        d[(i, b)] = t;
    }
    for i in 0..v.rows {
        let t = v[(i, a)].clone();
        v[(i, a)] = v[(i, b)].clone();
        v[(i, b)] = t;
    }
}

fn col_op_pair(d: &mut ZMat, v: &mut ZMat, j: usize, t: usize, q: &BigInt) {
    for i in 0..d.rows {
        let x = q.clone() * d[(i, t)].clone();
        d[(i, j)] = d[(i, j)].clone() - x;
    }
    for i in 0..v.rows {
        let x = q.clone() * v[(i, t)].clone();
        v[(i, j)] = v[(i, j)].clone() - x;
    }
}

pub fn identity_z(n: usize) -> ZMat {
    let mut m = Mat::filled(n, n, BigInt::zero());
    for i in 0..n {
        m[(i, i)] = BigInt::one();
    }
    m
}

/// Scale a rational vector to a primitive integer vector.
pub fn clear_denominators_vec(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x.clone() * BigRational::from(lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / g.clone()).collect()
    }
}

/// Elementary divisors of an integer matrix.
pub fn elementary_divisors(a: &ZMat) -> Vec<BigInt> {
    let (d, _, _) = smith_normal_form(a);
    (0..a.rows.min(a.cols))
        .map(|i| d[(i, i)].clone())
        .filter(|x| !x.is_zero())
        .collect()
}

/// Basis of the saturation of the row lattice of `a` inside Z^cols.
/// If U·A·V = D with D = (diag | 0), the saturation is spanned by the first
/// rank rows of V^{-1} read off over the rationals and cleared back to Z.
pub fn saturate_rows(a: &ZMat) -> ZMat {
    let (d, _, v) = smith_normal_form(a);
    let rank = (0..a.rows.min(a.cols))
        .filter(|&i| !d[(i, i)].is_zero())
        .count();
    let vq = v.map(|x| BigRational::from(x.clone()));
    let vinv = vq.inverse().expect("unimodular");
    let mut rows = Vec::new();
    for i in 0..rank {
        let r: Vec<BigInt> = (0..a.cols)
            .map(|j| {
                let x = &vinv[(i, j)];
                assert!(x.is_integer(), "V^-1 of a unimodular matrix is integral");
                x.to_integer()
            })
            .collect();
        rows.push(r);
    }
    if rows.is_empty() {
        Mat::filled(0, a.cols, BigInt::zero())
    } else {
        Mat::from_rows(rows)
    }
}

// ---------------------------------------------------------------------------
// Conversions and bilinear helpers
// ---------------------------------------------------------------------------

pub fn z_to_q(a: &ZMat) -> Mat<BigRational> {
    a.map(|x| BigRational::from(x.clone()))
}

pub fn q_to_c(a: &Mat<BigRational>) -> Mat<Complex64> {
    a.map(|x| Complex64::new(q_to_f64(x), 0.0))
}

pub fn q_to_f64(x: &BigRational) -> f64 {
    let n = x.numer();
    let d = x.denom();
    bigint_to_f64(n) / bigint_to_f64(d)
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// v^T · G · w for a symmetric Gram matrix over any scalar.
pub fn form<T: Scalar>(g: &Mat<T>, v: &[T], w: &[T]) -> T {
    let gw = g.mul_vec(w);
    v.iter()
        .zip(&gw)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}
