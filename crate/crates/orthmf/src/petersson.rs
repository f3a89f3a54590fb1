//! Petersson metrics on the tube domain, the invariant volume factor, and
//! the weight-bound predicates and multiplicity tables.

use crate::domain::TubePoint;
use crate::lattice::IsotropicFlag;
use crate::linalg::q_to_f64;
use crate::schur::{Partition, SchurSpace};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

fn vi_gram_f(flag: &IsotropicFlag) -> Vec<Vec<f64>> {
    let g = flag.vi_gram();
    (0..g.rows)
        .map(|i| (0..g.cols).map(|j| q_to_f64(&g[(i, j)])).collect())
        .collect()
}

fn pair_f(g: &[Vec<f64>], a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            s += ai * g[i][j] * bj;
        }
    }
    s
}

/// 2(Im Z, Im Z) in the V(I)_R form.
pub fn metric_l(zp: &TubePoint) -> f64 {
    let g = vi_gram_f(&zp.flag);
    let y = zp.im_vi();
    2.0 * pair_f(&g, &y, &y)
}

/// −(v₁, v₂) + 2(v₁, ImZ)(v₂, ImZ)/(ImZ, ImZ) on real V(I) vectors.
pub fn metric_e(zp: &TubePoint, v1: &[f64], v2: &[f64]) -> f64 {
    let g = vi_gram_f(&zp.flag);
    let y = zp.im_vi();
    let yy = pair_f(&g, &y, &y);
    -pair_f(&g, v1, v2) + 2.0 * pair_f(&g, v1, &y) * pair_f(&g, v2, &y) / yy
}

/// metric_e on the vi coordinate basis, as a symmetric matrix.
pub fn gram_e(zp: &TubePoint) -> Vec<Vec<f64>> {
    let n = zp.flag.n();
    let mut out = vec![vec![0.0; n]; n];
    let units: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for i in 0..n {
        for j in 0..=i {
            let v = metric_e(zp, &units[i], &units[j]);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// Contract the d-fold tensor power of `ge` against a tensor given by
/// coefficients over the n^d monomial basis.
fn tensor_apply(ge: &[Vec<f64>], row: &[f64], d: usize, n: usize) -> Vec<f64> {
    let mut cur = row.to_vec();
    for mode in 0..d {
        let stride = n.pow((d - 1 - mode) as u32);
        let mut next = vec![0.0; cur.len()];
        for (idx, val) in cur.iter().enumerate() {
            if *val == 0.0 {
                continue;
            }
            let i = (idx / stride) % n;
            let base = idx - i * stride;
            for j in 0..n {
                next[base + j * stride] += ge[j][i] * val;
            }
        }
        cur = next;
    }
    cur
}

/// The tensor-power metric of gram_e restricted to the SchurSpace basis,
/// scaled by metric_l^k. Positive definite; with the automorphy factor
/// J = factor_elk(g, Z) it satisfies gram(Z) = J^† · gram(gZ) · J.
pub fn gram_elk(zp: &TubePoint, space: &SchurSpace, k: i64) -> Vec<Vec<f64>> {
    let n = zp.flag.n();
    let d = space.lambda.size();
    let ge = gram_e(zp);
    let lk = metric_l(zp).powi(k as i32);
    let rows: Vec<Vec<f64>> = (0..space.dim)
        .map(|i| {
            (0..space.basis.cols)
                .map(|j| q_to_f64(&space.basis[(i, j)]))
                .collect()
        })
        .collect();
    let applied: Vec<Vec<f64>> = rows.iter().map(|r| tensor_apply(&ge, r, d, n)).collect();
    let mut out = vec![vec![0.0; space.dim]; space.dim];
    for i in 0..space.dim {
        for j in 0..space.dim {
            out[i][j] = lk * rows[i].iter().zip(&applied[j]).map(|(a, b)| a * b).sum::<f64>();
        }
    }
    out
}

/// (ImZ, ImZ)^{−n}, the invariant volume density up to a global constant.
pub fn volume_factor(zp: &TubePoint) -> f64 {
    let g = vi_gram_f(&zp.flag);
    let y = zp.im_vi();
    pair_f(&g, &y, &y).powi(-(zp.flag.n() as i32))
}

#[derive(Clone, Debug)]
pub struct MetricReport {
    pub gram_l: f64,
    pub gram_e: Vec<Vec<f64>>,
    pub gram_elk: Vec<Vec<f64>>,
    pub volume_factor: f64,
}

pub fn metric_report(zp: &TubePoint, space: &SchurSpace, k: i64) -> MetricReport {
    MetricReport {
        gram_l: metric_l(zp),
        gram_e: gram_e(zp),
        gram_elk: gram_elk(zp, space, k),
        volume_factor: volume_factor(zp),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L2Class {
    CuspIffL2,
    AlwaysL2,
    Indeterminate,
}

/// Vanishing and square-integrability verdicts for M_{λ,k} on an
/// n-dimensional domain. Bounds are evaluated in exact rational arithmetic;
/// the first vanishing bound assumes the lattice has Witt index 2.
#[derive(Clone, Debug)]
pub struct WeightVerdict {
    pub lambda: Partition,
    pub k: i64,
    pub n: usize,
    /// k < λ₁ + n/2 − 1 (Witt index 2 assumed)
    pub vt1: bool,
    /// k < n − |λ̄| − 1
    pub vt2_sq: bool,
    /// cusp forms vanish: k < n + λ₁ − corank(λ) − 1
    pub cusp_vanish: bool,
    /// all modular forms vanish
    pub m_vanish: bool,
    pub l2_class: L2Class,
    pub witt2_assumed: bool,
}

fn q_int(x: i64) -> BigRational {
    BigRational::from(BigInt::from(x))
}

pub fn weight_verdict(lambda: &Partition, k: i64, n: usize) -> WeightVerdict {
    let ni = n as i64;
    let l1 = lambda.lambda1() as i64;
    let lbar: i64 = lambda.lambda_bar().iter().map(|x| x.abs()).sum();
    let corank = lambda.corank() as i64;
    let kq = q_int(k);
    // k < λ₁ + n/2 − 1, exact with the half-integer
    let vt1 = kq < q_int(l1) + q_int(ni) / q_int(2) - BigRational::one();
    let vt2_sq = k < ni - lbar - 1;
    let cusp_vanish = k < ni + l1 - corank - 1;
    let m_vanish = k < 0 || k == 0 || vt1 || vt2_sq;
    let l2_class = if k >= ni + lbar - 1 {
        L2Class::CuspIffL2
    } else if k <= ni - lbar - 2 {
        L2Class::AlwaysL2
    } else {
        L2Class::Indeterminate
    };
    WeightVerdict {
        lambda: lambda.clone(),
        k,
        n,
        vt1,
        vt2_sq,
        cusp_vanish,
        m_vanish,
        l2_class,
        witt2_assumed: true,
    }
}

/// One summand M_{λ,k}^{⊕ mult} surviving in the holomorphic tensor table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSummand {
    /// empty = scalar weight, [1;k] = ∧^k
    pub lambda_parts: Vec<usize>,
    pub multiplicity: u64,
}

/// N(k) = k!/(2^{k/2}·(k/2)!) for even k.
pub fn n_of_k(k: u64) -> Result<u64> {
    if k % 2 != 0 {
        return Err(Error::OutOfTableRange(format!("N({k}) needs even k")));
    }
    let mut num: u64 = 1;
    for i in 1..=k {
        num *= i;
    }
    let mut den: u64 = 1u64 << (k / 2);
    for i in 1..=(k / 2) {
        den *= i;
    }
    Ok(num / den)
}

/// Possible types of holomorphic tensors of degree k: empty list means
/// the embedding target vanishes.
pub fn holomorphic_tensor_table(n: usize, k: i64) -> Result<Vec<TensorSummand>> {
    let ni = n as i64;
    if k <= 0 || 2 * k > ni {
        return Err(Error::OutOfTableRange(format!(
            "need 0 < k <= n/2, got n={n}, k={k}"
        )));
    }
    // k < n/2 − 1
    if 2 * k < ni - 2 {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    if k == (ni - 1) / 2 {
        match n % 4 {
            1 | 2 => out.push(TensorSummand {
                lambda_parts: vec![],
                multiplicity: n_of_k(k as u64)?,
            }),
            _ => {}
        }
    }
    if ni % 2 == 0 && 2 * k == ni {
        out.push(TensorSummand {
            lambda_parts: vec![1; k as usize],
            multiplicity: 1,
        });
        if n % 4 == 0 {
            out.push(TensorSummand {
                lambda_parts: vec![],
                multiplicity: n_of_k(k as u64)?,
            });
        }
    }
    Ok(out)
}
