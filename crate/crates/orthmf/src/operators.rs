//! Coefficient-level operators on Fourier expansions: Siegel operator,
//! Fourier–Jacobi slicing, Witt restriction, quasi-pullback, Rankin–Cohen.

use crate::cyclo::Cyc;
use crate::domain::beta0;
use crate::fourier::FourierExpansion;
use crate::lattice::{build_flag, IsotropicFlag, Sublattice};
use crate::linalg::{form, Mat};
use crate::schur::{act_on_schur, invariant_subspace, schur_space_over, Partition};
use crate::{Config, Error, QMat, Result, Q};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Eichler transvection E_{m⊗l} for an isotropic l ⊥ m, over an arbitrary
/// rational Gram matrix.
fn transvection_q(gram: &QMat, m: &[Q], l: &[Q]) -> QMat {
    let n = gram.rows;
    let half_mm = form(gram, m, m) / BigRational::from(BigInt::from(2));
    let mut out: QMat = Mat::zeros(n, n);
    for j in 0..n {
        let mut v = vec![Q::zero(); n];
        v[j] = Q::one();
        let mv = form(gram, m, &v);
        let lv = form(gram, l, &v);
        for i in 0..n {
            out[(i, j)] = v[i].clone() - mv.clone() * l[i].clone() + lv.clone() * m[i].clone()
                - half_mm.clone() * lv.clone() * l[i].clone();
        }
    }
    out
}

/// Generators of U(J/I) acting on the expansion's Schur space: Eichler
/// transvections E_{v_j ⊗ ē₂} of V(I), one per definite basis vector.
pub fn boundary_unipotent_action(exp: &FourierExpansion) -> Result<Vec<QMat>> {
    let gv = exp.flag.vi_gram();
    let n = gv.rows;
    let mut e2 = vec![Q::zero(); n];
    e2[n - 1] = Q::one();
    let mut gens = Vec::new();
    for j in 1..n - 1 {
        let mut m = vec![Q::zero(); n];
        m[j] = Q::one();
        gens.push(act_on_schur(&transvection_q(&gv, &m, &e2), &exp.space)?);
    }
    Ok(gens)
}

/// The Siegel-operator image Φ_J f: coefficients along the ray σ_J = R≥0·ē₂,
/// each checked to lie in V(I)^{U(J/I)}_{λ,k}.
#[derive(Clone, Debug)]
pub struct RayExpansion {
    pub flag: IsotropicFlag,
    pub reduced_weight: i64,
    /// dim V(J)_{λ′}, the size of the boundary target space.
    pub target_dim: usize,
    /// Basis of V(I)^U in Schur-space coordinates (rows).
    pub invariant_basis: QMat,
    /// Key t ≥ 0 parametrizes the index t·ē₂.
    pub coeffs: BTreeMap<Q, Vec<Cyc>>,
}

pub fn siegel_operator(exp: &FourierExpansion, cfg: &Config) -> Result<RayExpansion> {
    if exp.lambda.is_trivial() || exp.lambda.is_det() {
        return Err(Error::Invalid(
            "Siegel operator needs a non-scalar weight".into(),
        ));
    }
    let n = exp.flag.n();
    let gens = boundary_unipotent_action(exp)?;
    let inv = invariant_subspace(&gens, exp.space.dim);
    // exact projector P = Bᵀ(BBᵀ)⁻¹B onto the invariant subspace
    let bbt = inv.mul(&inv.transpose());
    let proj = inv
        .transpose()
        .mul(&bbt.inverse().ok_or(Error::DegenerateForm)?)
        .mul(&inv);
    let mut coeffs = BTreeMap::new();
    let mut max_defect = 0.0f64;
    for (l, a) in &exp.coeffs {
        let lv = exp.index_to_vi(l);
        let on_ray = lv[..n - 1].iter().all(|x| x.is_zero()) && !lv[n - 1].is_negative();
        if !on_ray {
            continue;
        }
        // residual (Id − P)·a is exact; it must vanish
        let mut defect = 0.0f64;
        let mut exact = true;
        for i in 0..exp.space.dim {
            let mut pa = Cyc::zero();
            for j in 0..exp.space.dim {
                if !proj[(i, j)].is_zero() {
                    pa = pa.add(&a[j].scale(&proj[(i, j)]));
                }
            }
            let r = a[i].sub(&pa);
            if !r.is_zero() {
                exact = false;
                defect = defect.max(r.eval().norm());
            }
        }
        if !exact {
            max_defect = max_defect.max(defect);
            continue;
        }
        coeffs.insert(lv[n - 1].clone(), a.clone());
    }
    if max_defect > 0.0 {
        return Err(Error::NotUInvariant(max_defect));
    }
    let lam_prime = exp.lambda.lambda_prime()?;
    let target_dim = if n <= 2 || lam_prime.size() == 0 {
        1
    } else {
        // V(J) carries the definite (n−2)-block of the V(I) form
        let gv = exp.flag.vi_gram();
        let mut sub: QMat = Mat::zeros(n - 2, n - 2);
        for i in 0..n - 2 {
            for j in 0..n - 2 {
                sub[(i, j)] = gv[(i + 1, j + 1)].clone();
            }
        }
        let lp = Partition::new(lam_prime.parts.clone(), n - 2)?;
        schur_space_over(&sub, &lp, cfg)?.dim
    };
    Ok(RayExpansion {
        flag: exp.flag.clone(),
        reduced_weight: exp.k + exp.lambda.lambda1() as i64,
        target_dim,
        invariant_basis: inv,
        coeffs,
    })
}

/// The m-th Fourier–Jacobi coefficient φ_m: b(l′) = a(l′ + m·l_{J,Γ}) for
/// indices l′ with vanishing f̄₂-component.
#[derive(Clone, Debug)]
pub struct JacobiSlice {
    pub m: Q,
    pub beta0: Q,
    pub expansion: FourierExpansion,
}

impl JacobiSlice {
    /// 2nm ≥ |(l,l)| in split coordinates, phrased as the exact statement
    /// (m·l_{J,Γ} + l′, m·l_{J,Γ} + l′) ≥ 0 for every support index.
    pub fn holomorphy_ok(&self) -> bool {
        let flag = &self.expansion.flag;
        let g = flag.vi_gram();
        let mb0 = self.m.clone() * self.beta0.clone();
        for l in self.expansion.coeffs.keys() {
            let mut lv = self.expansion.index_to_vi(l);
            lv[0] = lv[0].clone() + mb0.clone();
            if form(&g, &lv, &lv).is_negative() {
                return false;
            }
        }
        true
    }
}

/// All Fourier–Jacobi slice indices occurring in the support.
pub fn fourier_jacobi_indices(exp: &FourierExpansion) -> Result<Vec<Q>> {
    let b0 = beta0(&exp.flag)?;
    let mut out: Vec<Q> = Vec::new();
    for l in exp.coeffs.keys() {
        let m = exp.index_to_vi(l)[0].clone() / b0.clone();
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out.sort();
    Ok(out)
}

pub fn fourier_jacobi_slice(exp: &FourierExpansion, m: &Q) -> Result<JacobiSlice> {
    let b0 = beta0(&exp.flag)?;
    let mb0 = m.clone() * b0.clone();
    let mut out = exp.clone();
    out.coeffs = BTreeMap::new();
    for (l, a) in &exp.coeffs {
        let mut lv = exp.index_to_vi(l);
        if lv[0] != mb0 {
            continue;
        }
        lv[0] = Q::zero();
        out.set_coeff(exp.vi_to_index(&lv), a.clone())?;
    }
    Ok(JacobiSlice {
        m: m.clone(),
        beta0: b0,
        expansion: out,
    })
}

/// Shared setup for Witt restriction: the sub-flag of L′ and the orthogonal
/// splitting V(I) = V(I′) ⊕ K̄ in big vi coordinates.
struct WittData {
    sub_flag: IsotropicFlag,
    /// rows: basis of V(I′) in big vi coords
    vi_sub: QMat,
    /// rows: basis of K̄ in big vi coords
    k_bar: QMat,
}

fn witt_setup(exp: &FourierExpansion, lprime: &Sublattice) -> Result<WittData> {
    let flag = &exp.flag;
    let comp = crate::lattice::orthogonal_complement(lprime)?;
    let amb_gram = lprime.ambient.gram_q();
    let sub_gram = |b: &crate::linalg::Mat<BigInt>| {
        let bq = crate::linalg::z_to_q(b);
        crate::lattice::clear_denominators(&bq.mul(&amb_gram).mul(&bq.transpose()))
    };
    // K = L′^⊥ must be negative definite
    let klat = crate::lattice::new_lattice(sub_gram(&comp.basis))?;
    if klat.signature.0 != 0 {
        return Err(Error::ComplementNotDefinite);
    }
    // I (and J) must sit inside L′
    let lp_basis = crate::linalg::z_to_q(&lprime.basis);
    let in_lp = |v: &[Q]| -> Option<Vec<Q>> { lp_basis.transpose().solve(v) };
    let e1p = in_lp(&flag.e1).ok_or_else(|| Error::Invalid("I not contained in L'".into()))?;
    let e2 = flag
        .e2
        .clone()
        .ok_or_else(|| Error::Invalid("flag lacks J".into()))?;
    let e2p = in_lp(&e2).ok_or_else(|| Error::Invalid("J not contained in L'".into()))?;
    let to_z = |v: &[Q]| -> Result<Vec<BigInt>> {
        v.iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(Error::Invalid("I, J not integral in L'".into()))
                }
            })
            .collect()
    };
    let lplat = crate::lattice::new_lattice(sub_gram(&lprime.basis))?;
    let sub_flag = build_flag(&lplat, &to_z(&e1p)?, &to_z(&e2p)?)?;
    // K̄: image of K in V(I), big vi coords
    let mut k_rows = Vec::new();
    for i in 0..comp.basis.rows {
        let v: Vec<Q> = comp
            .basis
            .row(i)
            .iter()
            .map(|x| BigRational::from(x.clone()))
            .collect();
        k_rows.push(flag.vi_coords(&v)?);
    }
    let k_bar = Mat::from_rows(k_rows);
    // V(I′): sub-flag vi basis expressed in big vi coords
    let mut s_rows = Vec::new();
    for b in sub_flag.vi_basis() {
        let amb = lp_basis.transpose().mul_vec(&b);
        s_rows.push(flag.vi_coords(&amb)?);
    }
    let vi_sub = Mat::from_rows(s_rows);
    Ok(WittData {
        sub_flag,
        vi_sub,
        k_bar,

    })
}

/// Split a big vi vector as (V(I′)-part in sub coords, K̄-part in K̄ coords).
fn witt_split(w: &WittData, lv: &[Q]) -> Result<(Vec<Q>, Vec<Q>)> {
    let r = w.k_bar.rows;
    let np = w.vi_sub.rows;
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(np + r);
    for i in 0..np {
        rows.push(w.vi_sub.row(i).to_vec());
    }
    for i in 0..r {
        rows.push(w.k_bar.row(i).to_vec());
    }
    let coords = Mat::from_rows(rows)
        .transpose()
        .solve(lv)
        .ok_or_else(|| Error::Invalid("index outside V(I') + K".into()))?;
    Ok((coords[..np].to_vec(), coords[np..].to_vec()))
}

fn witt_expansion_shell(exp: &FourierExpansion, w: &WittData) -> Result<FourierExpansion> {
    let mut out = FourierExpansion::new(
        w.sub_flag.clone(),
        Partition::new(vec![1], w.sub_flag.n()).unwrap_or_else(|_| exp.lambda.clone()),
        exp.k,
        &Config::default(),
    )?;
    // values stay in the big V(I)_{λ,k}
    out.lambda = exp.lambda.clone();
    out.space = exp.space.clone();
    out.denom = exp.denom.clone();
    out.coeffs = BTreeMap::new();
    Ok(out)
}

/// Witt restriction: b(l′) = Σ_{l″∈K_Q} a(l′+l″), output on the sub-flag,
/// values kept in the big V(I)_{λ,k}.
pub fn restrict(exp: &FourierExpansion, lprime: &Sublattice) -> Result<FourierExpansion> {
    let w = witt_setup(exp, lprime)?;
    let mut out = witt_expansion_shell(exp, &w)?;
    for (l, a) in &exp.coeffs {
        let lv = exp.index_to_vi(l);
        let (sub, _) = witt_split(&w, &lv)?;
        let key = out.vi_to_index(&sub);
        let acc = out.coeff(&key);
        let summed: Vec<Cyc> = acc.iter().zip(a).map(|(x, y)| x.add(y)).collect();
        out.set_coeff(key, summed)?;
    }
    Ok(out)
}

/// One Taylor slice of the quasi-pullback: multi-degree ν and the expansion
/// with b(l′) = Σ n₁^{ν₁}···n_r^{ν_r}·a(l′+(n₁..n_r)), 0⁰ = 1.
#[derive(Clone, Debug)]
pub struct TaylorSlice {
    pub degrees: Vec<u32>,
    pub expansion: FourierExpansion,
}

fn q_pow(x: &Q, e: u32) -> Q {
    if e == 0 {
        Q::one() // 0⁰ = 1 by convention
    } else {
        let mut r = Q::one();
        for _ in 0..e {
            r *= x.clone();
        }
        r
    }
}

fn multi_degrees(r: usize, total: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in multi_degrees(r - 1, total - first) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

pub fn quasi_pullback(
    exp: &FourierExpansion,
    lprime: &Sublattice,
    cfg: &Config,
) -> Result<(u32, Vec<TaylorSlice>)> {
    let w = witt_setup(exp, lprime)?;
    let r = w.k_bar.rows;
    // split every support index once
    let mut split: Vec<(Vec<Q>, Vec<Q>, Vec<Cyc>)> = Vec::new();
    for (l, a) in &exp.coeffs {
        let lv = exp.index_to_vi(l);
        let (sub, kc) = witt_split(&w, &lv)?;
        split.push((sub, kc, a.clone()));
    }
    for nu in 0..=cfg.max_taylor_degree {
        let mut slices = Vec::new();
        let mut nonzero = false;
        for degrees in multi_degrees(r, nu) {
            let mut out = witt_expansion_shell(exp, &w)?;
            for (sub, kc, a) in &split {
                let mut c = Q::one();
                for (n_i, d_i) in kc.iter().zip(&degrees) {
                    c *= q_pow(n_i, *d_i);
                }
                if c.is_zero() {
                    continue;
                }
                let key = out.vi_to_index(sub);
                let acc = out.coeff(&key);
                let summed: Vec<Cyc> = acc
                    .iter()
                    .zip(a)
                    .map(|(x, y)| x.add(&y.scale(&c)))
                    .collect();
                out.set_coeff(key, summed)?;
            }
            if !out.coeffs.is_empty() {
                nonzero = true;
            }
            slices.push(TaylorSlice {
                degrees,
                expansion: out,
            });
        }
        if nonzero {
            return Ok((nu, slices));
        }
    }
    Err(Error::IdenticallyZero(cfg.max_taylor_degree))
}

/// Rankin–Cohen bracket of two scalar expansions of weights k and l:
/// c(m) = Σ_{l₁+l₂=m} a(l₁)b(l₂)·(l·l₁ − k·l₂) ∈ V(I), weight (St, k+l+1).
/// Normalized up to one global scalar (the 2πi constant is dropped).
pub fn rankin_cohen(
    f: &FourierExpansion,
    g: &FourierExpansion,
    cfg: &Config,
) -> Result<FourierExpansion> {
    if !f.lambda.is_trivial() || !g.lambda.is_trivial() {
        return Err(Error::WeightMismatch);
    }
    if f.flag.vi_gram() != g.flag.vi_gram() {
        return Err(Error::Invalid("expansions at different flags".into()));
    }
    let n = f.flag.n();
    let st = Partition::new(vec![1], n)?;
    let mut out = FourierExpansion::new(f.flag.clone(), st, f.k + g.k + 1, cfg)?;
    out.denom = f.denom.clone();
    let kf = BigRational::from(BigInt::from(f.k));
    let kg = BigRational::from(BigInt::from(g.k));
    let mut acc: BTreeMap<Vec<Q>, Vec<Cyc>> = BTreeMap::new();
    for (l1, a) in &f.coeffs {
        for (l2, b) in &g.coeffs {
            let m: Vec<Q> = l1.iter().zip(l2).map(|(x, y)| x.clone() + y.clone()).collect();
            let v1 = f.index_to_vi(l1);
            let v2 = g.index_to_vi(l2);
            let dir: Vec<Q> = v1
                .iter()
                .zip(&v2)
                .map(|(x, y)| kg.clone() * x.clone() - kf.clone() * y.clone())
                .collect();
            let coords = out
                .space
                .basis
                .transpose()
                .solve(&dir)
                .ok_or(Error::DegenerateForm)?;
            let scalar = a[0].mul(&b[0]);
            let e = acc
                .entry(m)
                .or_insert_with(|| vec![Cyc::zero(); out.space.dim]);
            for (x, c) in e.iter_mut().zip(&coords) {
                if !c.is_zero() {
                    *x = x.add(&scalar.scale(c));
                }
            }
        }
    }
    for (m, c) in acc {
        out.set_coeff(m, c)?;
    }
    Ok(out)
}
