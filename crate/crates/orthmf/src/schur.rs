//! Orthogonal Schur functors: V_λ realized as Young-symmetrized traceless
//! tensors inside V^{⊗d}, with exact group actions, invariant subspaces,
//! SO-restriction data and an independent Weyl dimension oracle.

use crate::linalg::{Mat, Scalar};
use crate::{Config, Error, QMat, Result, Q};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// A partition λ admissible for O(n): ᵗλ₁ + ᵗλ₂ ≤ n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub parts: Vec<usize>,
    pub n: usize,
}

impl Partition {
    pub fn new(parts: Vec<usize>, n: usize) -> Result<Self> {
        let mut p = parts;
        while p.last() == Some(&0) {
            p.pop();
        }
        for w in p.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Invalid("parts not weakly decreasing".into()));
            }
        }
        let t = transpose_parts(&p);
        let c1 = t.first().copied().unwrap_or(0);
        let c2 = t.get(1).copied().unwrap_or(0);
        if c1 + c2 > n {
            return Err(Error::Invalid(format!(
                "column lengths {c1}+{c2} exceed n={n}"
            )));
        }
        Ok(Partition { parts: p, n })
    }

    /// |λ| = tensor degree d.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn lambda1(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Vec<usize> {
        transpose_parts(&self.parts)
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.is_empty()
    }

    /// λ = det means a single column of length n.
    pub fn is_det(&self) -> bool {
        self.transpose() == vec![self.n]
    }

    /// λ̄ᵢ = λᵢ − λ_{n+1−i}, i = 1..⌊n/2⌋ (SO(n) highest weight).
    pub fn lambda_bar(&self) -> Vec<i64> {
        let m = self.n / 2;
        (0..m)
            .map(|i| self.part(i) as i64 - self.part(self.n - 1 - i) as i64)
            .collect()
    }

    /// λ′ = (λ₂, …, λ_{n−1}): the O(n−2) weight of the Siegel target.
    pub fn lambda_prime(&self) -> Result<Partition> {
        if self.n < 2 {
            return Err(Error::Dimension("lambda_prime needs n >= 2".into()));
        }
        let p: Vec<usize> = (1..self.n - 1).map(|i| self.part(i)).collect();
        Partition::new(p, self.n - 2)
    }

    /// Maximal i with λ₁ = … = λᵢ and λ_n = … = λ_{n+1−i} = 0.
    pub fn corank(&self) -> usize {
        let mut c = 0;
        for i in 1..=self.n / 2 {
            let head = (0..i).all(|j| self.part(j) == self.part(0));
            let tail = (0..i).all(|j| self.part(self.n - 1 - j) == 0);
            if head && tail {
                c = i;
            } else {
                break;
            }
        }
        c
    }
}

fn transpose_parts(parts: &[usize]) -> Vec<usize> {
    let Some(&max) = parts.first() else {
        return vec![];
    };
    (1..=max)
        .map(|j| parts.iter().filter(|&&p| p >= j).count())
        .collect()
}

/// SO-restriction data: λ̄ and whether V_λ splits as W_λ̄ ⊕ W_λ̄†.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoRestriction {
    pub lambda_bar: Vec<i64>,
    pub splits: bool,
}

pub fn so_restriction(lambda: &Partition) -> SoRestriction {
    let t1 = lambda.transpose().first().copied().unwrap_or(0);
    SoRestriction {
        lambda_bar: lambda.lambda_bar(),
        splits: lambda.n % 2 == 0 && t1 == lambda.n / 2,
    }
}

/// The split form: (e_i, e_j) = 1 iff i + j = n + 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitQuadraticSpace {
    pub n: usize,
    pub gram: QMat,
}

pub fn split_space(n: usize) -> SplitQuadraticSpace {
    let mut g = Mat::zeros(n, n);
    for i in 0..n {
        g[(i, n - 1 - i)] = Q::one();
    }
    SplitQuadraticSpace { n, gram: g }
}

/// V_λ ⊂ V^{⊗d} over an arbitrary rational symmetric nondegenerate Gram
/// matrix. Rows of `basis` are the reduced-echelon basis in the monomial
/// tensor basis with lexicographic index order.
#[derive(Clone, Debug)]
pub struct SchurSpace {
    pub gram: QMat,
    pub lambda: Partition,
    pub basis: QMat,
    pub dim: usize,
}

fn check_cap(n: usize, d: usize, cfg: &Config) -> Result<usize> {
    let mut size = 1usize;
    for _ in 0..d {
        size = size
            .checked_mul(n)
            .ok_or(Error::SizeCapExceeded(usize::MAX, cfg.size_cap))?;
    }
    if size > cfg.size_cap {
        return Err(Error::SizeCapExceeded(size, cfg.size_cap));
    }
    Ok(size)
}

/// Basis of V^[d]: simultaneous kernel of all d(d−1)/2 contractions
/// V^{⊗d} → V^{⊗d−2} taken with the given Gram form.
pub fn traceless_subspace(gram: &QMat, d: usize, cfg: &Config) -> Result<QMat> {
    let n = gram.rows;
    let size = check_cap(n, d, cfg)?;
    if d < 2 {
        return Ok(Mat::identity(size));
    }
    let small = size / (n * n);
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for p in 0..d {
        for q in (p + 1)..d {
            // contraction at slots (p, q): row per target multi-index
            for t in 0..small {
                let mut row = vec![Q::zero(); size];
                // re-insert indices (a, b) at positions p and q
                for a in 0..n {
                    for b in 0..n {
                        if gram[(a, b)].is_zero() {
                            continue;
                        }
                        let idx = insert_two(t, a, b, p, q, n, d);
                        row[idx] = row[idx].clone() + gram[(a, b)].clone();
                    }
                }
                rows.push(row);
            }
        }
    }
    Ok(Mat::from_rows(rows).kernel())
}

/// Full multi-index with values a at slot p and b at slot q (p < q), the
/// remaining slots filled from `t` in order.
fn insert_two(t: usize, a: usize, b: usize, p: usize, q: usize, n: usize, d: usize) -> usize {
    let mut rest = Vec::with_capacity(d - 2);
    let mut tt = t;
    for _ in 0..d - 2 {
        rest.push(tt % n);
        tt /= n;
    }
    rest.reverse();
    let mut full = Vec::with_capacity(d);
    let mut r = rest.into_iter();
    for s in 0..d {
        if s == p {
            full.push(a);
        } else if s == q {
            full.push(b);
        } else {
            full.push(r.next().unwrap());
        }
    }
    full.iter().fold(0, |acc, &i| acc * n + i)
}

/// A group-algebra element Σ coeff·σ of S_d acting by place permutation.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    pub d: usize,
    pub terms: Vec<(Vec<usize>, Q)>,
}

impl GroupAlgebra {
    /// Apply to a coordinate vector in V^{⊗d}: σ sends the tensor factor at
    /// slot s to slot σ(s).
    pub fn apply<T: Scalar>(&self, x: &[T], n: usize) -> Vec<T> {
        let d = self.d;
        let mut out = vec![T::zero(); x.len()];
        let mut idx = vec![0usize; d];
        for (perm, coeff) in &self.terms {
            let cq = coeff.clone();
            for (i_src, xv) in x.iter().enumerate() {
                if xv == &T::zero() {
                    continue;
                }
                // decode multi-index of i_src
                let mut tt = i_src;
                for s in (0..d).rev() {
                    idx[s] = tt % n;
                    tt /= n;
                }
                let mut tgt = vec![0usize; d];
                for s in 0..d {
                    tgt[perm[s]] = idx[s];
                }
                let i_tgt = tgt.iter().fold(0, |acc, &i| acc * n + i);
                out[i_tgt] = out[i_tgt].clone() + scale_by_q(xv, &cq);
            }
        }
        out
    }
}

fn scale_by_q<T: Scalar>(x: &T, q: &Q) -> T {
    // q is ±1 or a small rational; express as x * (num/den) through repeated
    // scalar embedding: T supports division, and Q embeds via its f64-free
    // exact route only for T = Q. For generic T we multiply by the rational
    // as a ratio of integer sums of ones.
    let embed = |k: &BigInt| -> T {
        let mut acc = T::zero();
        let one = T::one();
        let mag: u64 = k.magnitude().try_into().expect("small integer");
        for _ in 0..mag {
            acc = acc + one.clone();
        }
        if k.is_negative() {
            T::zero() - acc
        } else {
            acc
        }
    };
    x.clone() * embed(q.numer()) / embed(q.denom())
}

fn all_perms(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in all_perms(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Permutations of {0..d−1} moving only the given blocks, as products of
/// permutations inside each block; returns (perm, sign) pairs.
fn block_permutations(d: usize, blocks: &[Vec<usize>]) -> Vec<(Vec<usize>, i32)> {
    let mut result: Vec<(Vec<usize>, i32)> = vec![((0..d).collect(), 1)];
    for block in blocks {
        let mut next = Vec::new();
        for arrangement in all_perms(block) {
            // permutation sending block[i] → arrangement[i]
            let mut perm: Vec<usize> = (0..d).collect();
            for (i, &pos) in block.iter().enumerate() {
                perm[pos] = arrangement[i];
            }
            let sign = perm_sign(&perm);
            for (base, bs) in &result {
                let composed: Vec<usize> = (0..d).map(|s| perm[base[s]]).collect();
                next.push((composed, bs * sign));
            }
        }
        result = next;
    }
    result
}

fn perm_sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Young symmetrizer c_λ = b_λ·a_λ for the column-canonical tableau
/// (boxes numbered down successive columns), together with the scalar m
/// satisfying c_λ² = m·c_λ.
pub fn young_symmetrizer(lambda: &Partition) -> (GroupAlgebra, Q) {
    let d = lambda.size();
    let cols = lambda.transpose();
    // position of box (row r, col c): columns filled first
    let pos = |r: usize, c: usize| -> usize {
        cols.iter().take(c).sum::<usize>() + r
    };
    let mut row_blocks = Vec::new();
    for r in 0..lambda.parts.len() {
        let width = lambda.parts[r];
        row_blocks.push((0..width).map(|c| pos(r, c)).collect::<Vec<_>>());
    }
    let mut col_blocks = Vec::new();
    for (c, &h) in cols.iter().enumerate() {
        col_blocks.push((0..h).map(|r| pos(r, c)).collect::<Vec<_>>());
    }
    let a: Vec<(Vec<usize>, Q)> = block_permutations(d, &row_blocks)
        .into_iter()
        .map(|(p, _)| (p, Q::one()))
        .collect();
    let b: Vec<(Vec<usize>, Q)> = block_permutations(d, &col_blocks)
        .into_iter()
        .map(|(p, s)| (p, Q::from(BigInt::from(s))))
        .collect();
    // c = b·a, collected
    let mut map: HashMap<Vec<usize>, Q> = HashMap::new();
    for (pb, cb) in &b {
        for (pa, ca) in &a {
            let comp: Vec<usize> = (0..d).map(|s| pb[pa[s]]).collect();
            let e = map.entry(comp).or_insert_with(Q::zero);
            *e = e.clone() + cb.clone() * ca.clone();
        }
    }
    map.retain(|_, v| !v.is_zero());
    let c_terms: Vec<(Vec<usize>, Q)> = map.iter().map(|(p, q)| (p.clone(), q.clone())).collect();
    // m = coefficient of the identity in c², since c has identity-coefficient 1
    let id: Vec<usize> = (0..d).collect();
    let mut m = Q::zero();
    for (p1, c1) in &c_terms {
        // find p2 with p1∘p2 = id, i.e. p2 = p1^{-1}
        let mut inv = vec![0usize; d];
        for (s, &t) in p1.iter().enumerate() {
            inv[t] = s;
        }
        if let Some(c2) = map.get(&inv) {
            m = m + c1.clone() * c2.clone();
        }
    }
    let _ = id;
    (GroupAlgebra { d, terms: c_terms }, m)
}

/// Dense matrix of c_λ on V^{⊗d} plus the scalar m with c² = m·c.
pub fn young_symmetrizer_matrix(lambda: &Partition, n: usize, cfg: &Config) -> Result<(QMat, Q)> {
    let d = lambda.size();
    let size = check_cap(n, d, cfg)?;
    let (c, m) = young_symmetrizer(lambda);
    let mut cols = Vec::with_capacity(size);
    for j in 0..size {
        let mut e = vec![Q::zero(); size];
        e[j] = Q::one();
        cols.push(c.apply(&e, n));
    }
    Ok((Mat::from_rows(cols).transpose(), m))
}

/// V_λ = c_λ·V^[d] over the given Gram form, with reduced-echelon basis.
pub fn schur_space_over(gram: &QMat, lambda: &Partition, cfg: &Config) -> Result<SchurSpace> {
    let n = gram.rows;
    let d = lambda.size();
    check_cap(n, d, cfg)?;
    if d == 0 {
        return Ok(SchurSpace {
            gram: gram.clone(),
            lambda: lambda.clone(),
            basis: Mat::identity(1),
            dim: 1,
        });
    }
    let harmonic = traceless_subspace(gram, d, cfg)?;
    let (c, _) = young_symmetrizer(lambda);
    let mut rows = Vec::with_capacity(harmonic.rows);
    for i in 0..harmonic.rows {
        rows.push(c.apply(harmonic.row(i), n));
    }
    let basis = Mat::from_rows(rows).row_basis();
    let dim = basis.rows;
    Ok(SchurSpace {
        gram: gram.clone(),
        lambda: lambda.clone(),
        basis,
        dim,
    })
}

/// V_λ over the split anti-diagonal form.
pub fn schur_space(space: &SplitQuadraticSpace, lambda: &Partition, cfg: &Config) -> Result<SchurSpace> {
    schur_space_over(&space.gram, lambda, cfg)
}

/// The canonical highest-weight tensor: the product over columns of the
/// antisymmetrized e_1⊗…⊗e_h, laid out in column-canonical slot order.
pub fn highest_weight_vector(lambda: &Partition, n: usize) -> Vec<Q> {
    let d = lambda.size();
    let size = n.pow(d as u32);
    let cols = lambda.transpose();
    let mut out = vec![Q::zero(); size];
    // iterate over choices of a permutation per column
    fn rec(
        cols: &[usize],
        c: usize,
        prefix: &mut Vec<usize>,
        sign: i32,
        out: &mut Vec<Q>,
        n: usize,
    ) {
        if c == cols.len() {
            let idx = prefix.iter().fold(0, |acc, &i| acc * n + i);
            out[idx] = out[idx].clone() + Q::from(BigInt::from(sign));
            return;
        }
        let h = cols[c];
        for p in all_perms(&(0..h).collect::<Vec<_>>()) {
            let s = perm_sign(&p);
            let len0 = prefix.len();
            prefix.extend(p.iter().copied());
            rec(cols, c + 1, prefix, sign * s, out, n);
            prefix.truncate(len0);
        }
    }
    rec(&cols, 0, &mut Vec::new(), 1, &mut out, n);
    out
}

/// Apply g^{⊗d} to each row of a coordinate matrix (mode products).
pub fn act_tensor_rows<T: Scalar>(g: &Mat<T>, rows: &Mat<T>, d: usize) -> Mat<T> {
    let n = g.rows;
    let size = rows.cols;
    let mut out = rows.clone();
    for mode in 0..d {
        let stride = n.pow((d - 1 - mode) as u32);
        let mut next: Mat<T> = Mat::filled(out.rows, size, T::zero());
        for r in 0..out.rows {
            for idx in 0..size {
                let v = &out[(r, idx)];
                if v == &T::zero() {
                    continue;
                }
                let i_old = (idx / stride) % n;
                let base = idx - i_old * stride;
                for i_new in 0..n {
                    let gval = g[(i_new, i_old)].clone();
                    if gval == T::zero() {
                        continue;
                    }
                    let tgt = base + i_new * stride;
                    next[(r, tgt)] = next[(r, tgt)].clone() + gval * v.clone();
                }
            }
        }
        out = next;
    }
    out
}

/// Matrix of an exactly-orthogonal g on the SchurSpace basis.
pub fn act_on_schur(g: &QMat, s: &SchurSpace) -> Result<QMat> {
    if g.transpose().mul(&s.gram).mul(g) != s.gram {
        return Err(Error::NotOrthogonal);
    }
    let d = s.lambda.size();
    let images = act_tensor_rows(g, &s.basis, d);
    let x = s
        .basis
        .transpose()
        .solve_many(&images.transpose())
        .ok_or(Error::NotInvariant)?;
    // x satisfies basisᵀ·x = imagesᵀ; column j of x holds the coordinates
    // of g(b_j), so x itself is the matrix in the column convention and
    // act_on_schur(gh) = act_on_schur(g)·act_on_schur(h)
    Ok(x)
}

/// Complex-float variant used by the automorphy engine: g need only be
/// orthogonal to tolerance for the same Gram form.
pub fn act_on_schur_c(g: &crate::CMat, s: &SchurSpace, tol: f64) -> Result<crate::CMat> {
    use crate::linalg::q_to_c;
    let gram_c = q_to_c(&s.gram);
    let defect = matrix_norm(&g.transpose().mul(&gram_c).mul(g).sub(&gram_c));
    if defect > tol * (1.0 + matrix_norm(&gram_c)) {
        return Err(Error::NotOrthogonalMatrix);
    }
    let basis_c = q_to_c(&s.basis);
    let d = s.lambda.size();
    let images = act_tensor_rows(g, &basis_c, d);
    let x = basis_c
        .transpose()
        .solve_many(&images.transpose())
        .ok_or(Error::NotInvariant)?;
    Ok(x)
}

pub fn matrix_norm(m: &crate::CMat) -> f64 {
    let mut s = 0.0f64;
    for i in 0..m.rows {
        for j in 0..m.cols {
            s = s.max(m[(i, j)].norm());
        }
    }
    s
}

/// Simultaneous fixed space of a list of matrices acting on a space of the
/// given dimension: exact kernel of the stacked (g − Id).
pub fn invariant_subspace(generators: &[QMat], dim: usize) -> QMat {
    if generators.is_empty() {
        return Mat::identity(dim);
    }
    let id: QMat = Mat::identity(dim);
    let mut stacked = generators[0].sub(&id);
    for g in &generators[1..] {
        stacked = stacked.vstack(&g.sub(&id));
    }
    stacked.kernel()
}

/// Weyl dimension formula for so(n), n = 2m or 2m+1, at highest weight λ̄
/// (entries half-ordered, last entry may be negative for D-type).
pub fn weyl_dimension_oracle(lambda_bar: &[i64], n: usize) -> Result<BigInt> {
    let m = n / 2;
    if lambda_bar.len() != m {
        return Err(Error::Dimension(format!(
            "highest weight length {} != {}",
            lambda_bar.len(),
            m
        )));
    }
    if m == 0 {
        return Ok(BigInt::one());
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let rho: Vec<Q> = if n % 2 == 1 {
        (0..m)
            .map(|i| BigRational::from(BigInt::from((m - i) as i64)) - half.clone())
            .collect()
    } else {
        (0..m)
            .map(|i| BigRational::from(BigInt::from((m - 1 - i) as i64)))
            .collect()
    };
    let l: Vec<Q> = (0..m)
        .map(|i| BigRational::from(BigInt::from(lambda_bar[i])) + rho[i].clone())
        .collect();
    let mut dim = Q::one();
    for i in 0..m {
        for j in (i + 1)..m {
            let num = l[i].clone() * l[i].clone() - l[j].clone() * l[j].clone();
            let den = rho[i].clone() * rho[i].clone() - rho[j].clone() * rho[j].clone();
            dim = dim * num / den;
        }
    }
    if n % 2 == 1 {
        for i in 0..m {
            dim = dim * l[i].clone() / rho[i].clone();
        }
    }
    if !dim.is_integer() {
        return Err(Error::Invalid("non-integral Weyl dimension".into()));
    }
    Ok(dim.to_integer())
}

/// Predicted dim V_λ for O(n): the SO dimension, doubled in the split case.
pub fn o_dimension_oracle(lambda: &Partition) -> Result<BigInt> {
    let r = so_restriction(lambda);
    let d = weyl_dimension_oracle(&r.lambda_bar, lambda.n)?;
    Ok(if r.splits { d * BigInt::from(2) } else { d })
}
