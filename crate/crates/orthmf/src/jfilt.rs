//! The J-filtration on V(I)_λ in split coordinates: nested subspace bases,
//! graded ranks α(r), U-invariants, and the Jacobi-form decomposition shape.

use crate::linalg::Mat;
use crate::schur::{
    act_on_schur, invariant_subspace, schur_space, split_space, Partition, SchurSpace,
};
use crate::{Config, Error, QMat, Result, Q};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// The base flag 0 ⊂ J/I ⊂ J^⊥/I ⊂ I^⊥/I in split coordinates:
/// ⟨e₁⟩ ⊂ ⟨e₁,…,e_{n−1}⟩ ⊂ V.
pub fn base_flag_filtration(n: usize) -> Vec<QMat> {
    let unit = |rows: usize| -> QMat {
        let mut m = Mat::zeros(rows, n);
        for i in 0..rows {
            m[(i, i)] = Q::one();
        }
        m
    };
    vec![unit(1), unit(n - 1), unit(n)]
}

#[derive(Clone, Debug)]
pub struct FiltrationTable {
    pub lambda: Partition,
    pub n: usize,
    /// r ↦ basis of F^r V_λ (rows in V^{⊗d} coordinates), r ∈ [−λ₁, λ₁].
    pub levels: BTreeMap<i64, QMat>,
    /// r ↦ rank of Gr^r.
    pub alpha: BTreeMap<i64, usize>,
}

/// Torus weight of a monomial index: #(e₁ factors) − #(e_n factors).
fn monomial_weight(mut idx: usize, n: usize, d: usize) -> i64 {
    let mut w = 0i64;
    for _ in 0..d {
        let i = idx % n;
        idx /= n;
        if i == 0 {
            w += 1;
        } else if i == n - 1 {
            w -= 1;
        }
    }
    w
}

/// Vectors of the row space supported on the given coordinate set.
fn supported_subspace(basis: &QMat, keep: &[bool]) -> QMat {
    let comp: Vec<usize> = (0..basis.cols).filter(|&j| !keep[j]).collect();
    if comp.is_empty() {
        return basis.row_basis();
    }
    let restricted = Mat::from_rows(
        (0..basis.rows)
            .map(|i| comp.iter().map(|&j| basis[(i, j)].clone()).collect())
            .collect(),
    );
    let coeffs = restricted.transpose().kernel();
    if coeffs.rows == 0 {
        return Mat::filled(0, basis.cols, Q::zero());
    }
    coeffs.mul(basis).row_basis()
}

/// Compute the filtration by the flag-sum description (monomial supports)
/// and cross-check it against the torus weight decomposition.
pub fn filtration_table(s: &SchurSpace) -> Result<FiltrationTable> {
    let n = s.gram.rows;
    let d = s.lambda.size();
    let l1 = s.lambda.lambda1() as i64;
    let weights: Vec<i64> = (0..s.basis.cols).map(|j| monomial_weight(j, n, d)).collect();

    // torus action matrix for t = diag(2, 1, …, 1, 1/2)
    let mut t: QMat = Mat::identity(n);
    t[(0, 0)] = BigRational::from(BigInt::from(2));
    t[(n - 1, n - 1)] = BigRational::new(BigInt::one(), BigInt::from(2));
    let at = act_on_schur(&t, s)?;

    let mut levels = BTreeMap::new();
    let mut alpha = BTreeMap::new();
    let mut prev_rank = 0usize;
    let mut prev: Option<QMat> = None;
    for r in -l1..=l1 {
        // flag-sum: F^r = V_λ ∩ span{monomials of weight ≥ −r}
        let keep: Vec<bool> = weights.iter().map(|&w| w >= -r).collect();
        let fr = supported_subspace(&s.basis, &keep);
        // torus: sum of weight-w eigenspaces over w ≥ −r, in ambient coords
        let mut eig_rows: Vec<Vec<Q>> = Vec::new();
        for w in -r..=l1 {
            let pow = rational_pow2(w);
            let shifted = at.sub(&Mat::identity(s.dim).map(|x: &Q| x.clone() * pow.clone()));
            let ker = shifted.kernel();
            for i in 0..ker.rows {
                eig_rows.push(ker.row(i).to_vec());
            }
        }
        let torus_fr = if eig_rows.is_empty() {
            Mat::filled(0, s.basis.cols, Q::zero())
        } else {
            Mat::from_rows(eig_rows).mul(&s.basis).row_basis()
        };
        if fr.rows != torus_fr.rows || fr.row_basis() != torus_fr {
            return Err(Error::Invalid(
                "flag-sum and torus-weight filtrations disagree".into(),
            ));
        }
        // containment F^{r−1} ⊆ F^r
        if let Some(p) = &prev {
            for i in 0..p.rows {
                if !fr.row_space_contains(p.row(i)) {
                    return Err(Error::Invalid("filtration not nested".into()));
                }
            }
        }
        alpha.insert(r, fr.rows - prev_rank);
        prev_rank = fr.rows;
        prev = Some(fr.clone());
        levels.insert(r, fr);
    }
    if prev_rank != s.dim {
        return Err(Error::Invalid("filtration does not exhaust V_lambda".into()));
    }
    Ok(FiltrationTable {
        lambda: s.lambda.clone(),
        n,
        levels,
        alpha,
    })
}

fn rational_pow2(w: i64) -> Q {
    if w >= 0 {
        BigRational::from(BigInt::from(2).pow(w as u32))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(2).pow((-w) as u32))
    }
}

/// Eichler generators E_{e_j⊗e_1}, j = 2..n−1, of U(J/I) in split
/// coordinates, acting on the SchurSpace.
pub fn unipotent_generators(s: &SchurSpace) -> Result<Vec<QMat>> {
    let n = s.gram.rows;
    let lat = crate::lattice::new_lattice(s.gram.map(|x| x.numer().clone()))?;
    let mut e1 = vec![Q::zero(); n];
    e1[0] = Q::one();
    let mut gens = Vec::new();
    for j in 1..n - 1 {
        let mut m = vec![Q::zero(); n];
        m[j] = Q::one();
        let g = crate::lattice::eichler_transvection(&lat, &m, &e1)?;
        gens.push(act_on_schur(&g, s)?);
    }
    Ok(gens)
}

#[derive(Clone, Debug)]
pub struct UInvariantReport {
    pub dim_invariants: usize,
    pub dim_bottom: usize,
    pub equal: bool,
    /// Weyl-predicted dim of V(J)_{λ′}, the Siegel-operator target size.
    pub predicted: BigInt,
}

/// Check F^{−λ₁} V_λ = V_λ^{U(J/I)} exactly.
pub fn u_invariants_equal_bottom(s: &SchurSpace) -> Result<UInvariantReport> {
    let table = filtration_table(s)?;
    let l1 = s.lambda.lambda1() as i64;
    let bottom = &table.levels[&(-l1)];
    let gens = unipotent_generators(s)?;
    let inv_coords = invariant_subspace(&gens, s.dim);
    let inv = if inv_coords.rows == 0 {
        Mat::filled(0, s.basis.cols, Q::zero())
    } else {
        inv_coords.mul(&s.basis).row_basis()
    };
    let equal = inv.rows == bottom.rows
        && (0..inv.rows).all(|i| bottom.row_space_contains(inv.row(i)));
    let lp = s.lambda.lambda_prime()?;
    let predicted = crate::schur::o_dimension_oracle(&lp)?;
    Ok(UInvariantReport {
        dim_invariants: inv.rows,
        dim_bottom: bottom.rows,
        equal,
        predicted,
    })
}

#[derive(Clone, Debug)]
pub struct JacobiDecomposition {
    pub lambda: Partition,
    pub k: i64,
    /// (scalar weight k−r, multiplicity α(r)) for r with α(r) > 0.
    pub components: Vec<(i64, usize)>,
    /// k + λ₁ < n/2 − 1 forces the whole space to vanish.
    pub vanishes_all: bool,
}

/// Shape of the injection of vector-valued Jacobi forms of weight (λ, k)
/// into sums of scalar Jacobi forms of weights k−r.
pub fn jacobi_decomposition(lambda: &Partition, k: i64, cfg: &Config) -> Result<JacobiDecomposition> {
    if lambda.is_det() {
        return Err(Error::Invalid("decomposition undefined for det".into()));
    }
    let v = split_space(lambda.n);
    let s = schur_space(&v, lambda, cfg)?;
    let table = filtration_table(&s)?;
    let components: Vec<(i64, usize)> = table
        .alpha
        .iter()
        .rev()
        .filter(|(_, &a)| a > 0)
        .map(|(&r, &a)| (k - r, a))
        .collect();
    // 2(k + λ₁) < n − 2, exact in integers
    let vanishes_all = 2 * (k + lambda.lambda1() as i64) < lambda.n as i64 - 2;
    Ok(JacobiDecomposition {
        lambda: lambda.clone(),
        k,
        components,
        vanishes_all,
    })
}
