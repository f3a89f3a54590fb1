//! Formal Fourier expansions at a 0-dimensional cusp: exact coefficient
//! storage in cyclotomic arithmetic, cone predicates, the Γ(I) coefficient
//! symmetry, averaging, evaluation and re-basing.

use crate::cyclo::Cyc;
use crate::domain::{vi_pair_c, TubePoint};
use crate::lattice::{integral_unipotent_lattice, IsotropicFlag};
use crate::linalg::{form, Mat};
use crate::schur::{act_on_schur, schur_space_over, Partition, SchurSpace};
use crate::{Config, Error, QMat, Result, C, Q};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Position of an index vector relative to the closed positive cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConePosition {
    Interior,
    BoundaryRay,
    Outside,
}

/// The reference interior direction f̄₂ + ē₂ in vi coordinates.
pub fn reference_interior(n: usize) -> Vec<Q> {
    let mut r = vec![Q::zero(); n];
    r[0] = Q::one();
    r[n - 1] = Q::one();
    r
}

/// Classify a vi-coordinate vector by the sign of (l,l) and its pairing
/// with the reference interior vector.
pub fn cone_position(flag: &IsotropicFlag, l_vi: &[Q]) -> ConePosition {
    let g = flag.vi_gram();
    let ll = form(&g, l_vi, l_vi);
    let r = reference_interior(l_vi.len());
    let lr = form(&g, l_vi, &r);
    if ll.is_positive() && lr.is_positive() {
        ConePosition::Interior
    } else if ll.is_zero() && !lr.is_negative() {
        ConePosition::BoundaryRay
    } else {
        ConePosition::Outside
    }
}

/// A formal Fourier expansion Σ a(l)·q^l with a(l) ∈ V(I)_{λ,k}.
/// Indices are stored in the dual basis of U(I)_Z (entries rational with
/// denominator dividing `denom`); coefficients are exact cyclotomic vectors
/// in the SchurSpace basis over the V(I) Gram form.
#[derive(Clone, Debug)]
pub struct FourierExpansion {
    pub flag: IsotropicFlag,
    pub lambda: Partition,
    pub k: i64,
    pub space: SchurSpace,
    /// Basis of U(I)_Z, rows in vi coordinates.
    pub ui_basis: QMat,
    /// Dual basis of U(I)_Z for the V(I) form, rows in vi coordinates.
    pub ui_dual: QMat,
    /// Allowed index denominator (1 = plain U(I)_Z^∨ support).
    pub denom: BigInt,
    pub coeffs: BTreeMap<Vec<Q>, Vec<Cyc>>,
}

impl FourierExpansion {
    pub fn new(flag: IsotropicFlag, lambda: Partition, k: i64, cfg: &Config) -> Result<Self> {
        let gv = flag.vi_gram();
        let space = schur_space_over(&gv, &lambda, cfg)?;
        let ui_basis = integral_unipotent_lattice(&flag)?;
        let gram_u = ui_basis.mul(&gv).mul(&ui_basis.transpose());
        let ui_dual = gram_u.inverse().ok_or(Error::DegenerateForm)?.mul(&ui_basis);
        Ok(FourierExpansion {
            flag,
            lambda,
            k,
            space,
            ui_basis,
            ui_dual,
            denom: BigInt::one(),
            coeffs: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    /// vi coordinates of an index given in dual-basis coordinates.
    pub fn index_to_vi(&self, l: &[Q]) -> Vec<Q> {
        let n = self.ui_dual.cols;
        let mut v = vec![Q::zero(); n];
        for (i, c) in l.iter().enumerate() {
            for j in 0..n {
                v[j] = v[j].clone() + c.clone() * self.ui_dual[(i, j)].clone();
            }
        }
        v
    }

    /// Dual-basis coordinates of a vi vector: pairings with the U(I)_Z basis.
    pub fn vi_to_index(&self, v: &[Q]) -> Vec<Q> {
        let g = self.flag.vi_gram();
        (0..self.ui_basis.rows)
            .map(|i| form(&g, v, self.ui_basis.row(i)))
            .collect()
    }

    pub fn set_coeff(&mut self, l: Vec<Q>, a: Vec<Cyc>) -> Result<()> {
        if l.len() != self.ui_basis.rows || a.len() != self.space.dim {
            return Err(Error::Dimension("coefficient shape".into()));
        }
        if a.iter().all(|x| x.is_zero()) {
            self.coeffs.remove(&l);
        } else {
            self.coeffs.insert(l, a);
        }
        Ok(())
    }

    pub fn set_coeff_q(&mut self, l: Vec<Q>, a: Vec<Q>) -> Result<()> {
        self.set_coeff(l, a.into_iter().map(Cyc::from_q).collect())
    }

    pub fn coeff(&self, l: &[Q]) -> Vec<Cyc> {
        self.coeffs
            .get(l)
            .cloned()
            .unwrap_or_else(|| vec![Cyc::zero(); self.space.dim])
    }

    /// e((l, v₀))·a(l): the base-point change by v₀ ∈ U(I)_Q (vi coords).
    pub fn rebase(&self, v0: &[Q]) -> FourierExpansion {
        let g = self.flag.vi_gram();
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(l, a)| {
                let lv = self.index_to_vi(l);
                let phase = Cyc::root(&form(&g, &lv, v0));
                (l.clone(), a.iter().map(|x| x.mul(&phase)).collect())
            })
            .collect();
        out
    }

    /// Σ a(l)·e((l, Z)) as a complex vector in the SchurSpace basis.
    pub fn evaluate(&self, zp: &TubePoint) -> Vec<C> {
        let zc = zp.vi_coords_c();
        let mut out = vec![C::new(0.0, 0.0); self.space.dim];
        for (l, a) in &self.coeffs {
            let lv = self.index_to_vi(l);
            let lc: Vec<C> = lv
                .iter()
                .map(|q| C::new(crate::linalg::q_to_f64(q), 0.0))
                .collect();
            let phase = crate::domain::e_of(vi_pair_c(&self.flag, &lc, &zc));
            for (o, x) in out.iter_mut().zip(a) {
                *o += x.eval() * phase;
            }
        }
        out
    }
}

/// Validation report for holomorphy/cusp support and the a(0) lint.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub holomorphic: bool,
    pub cusp: bool,
    pub integral: bool,
    pub lints: Vec<String>,
}

pub fn validate(exp: &FourierExpansion) -> ValidationReport {
    let mut holomorphic = true;
    let mut cusp = true;
    let mut integral = true;
    let mut lints = Vec::new();
    let dq = BigRational::from(exp.denom.clone());
    for l in exp.coeffs.keys() {
        let lv = exp.index_to_vi(l);
        match cone_position(&exp.flag, &lv) {
            ConePosition::Interior => {}
            ConePosition::BoundaryRay => cusp = false,
            ConePosition::Outside => {
                holomorphic = false;
                cusp = false;
            }
        }
        if !l.iter().all(|c| (c.clone() * dq.clone()).is_integer()) {
            integral = false;
        }
    }
    if !integral {
        lints.push("support leaves the declared fractional lattice".into());
    }
    let zero_idx = vec![Q::zero(); exp.ui_basis.rows];
    if exp.coeffs.contains_key(&zero_idx)
        && !exp.lambda.is_trivial()
        && !exp.lambda.is_det()
    {
        lints.push("constant term must vanish for this weight".into());
    }
    ValidationReport {
        holomorphic,
        cusp,
        integral,
        lints,
    }
}

/// An element of Γ(I) as it acts on Fourier data: γ₁ on U(I) (vi-coordinate
/// matrix), the sign ε on I, and the translation α ∈ U(I)_Q.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaI {
    pub gamma1: QMat,
    pub epsilon: i64,
    pub alpha: Vec<Q>,
}

impl GammaI {
    pub fn identity(n: usize) -> Self {
        GammaI {
            gamma1: Mat::identity(n),
            epsilon: 1,
            alpha: vec![Q::zero(); n],
        }
    }

    pub fn minus_id(n: usize) -> Self {
        GammaI {
            gamma1: Mat::identity(n),
            epsilon: -1,
            alpha: vec![Q::zero(); n],
        }
    }

    /// (γ∘δ): apply δ first. Tube action Z ↦ γ₁Z + α composes to
    /// (γ₁δ₁, εε′, α_γ + γ₁α_δ).
    pub fn compose(&self, other: &GammaI) -> GammaI {
        let alpha: Vec<Q> = {
            let ga = self.gamma1.mul_vec(&other.alpha);
            ga.iter()
                .zip(&self.alpha)
                .map(|(x, y)| x.clone() + y.clone())
                .collect()
        };
        GammaI {
            gamma1: self.gamma1.mul(&other.gamma1),
            epsilon: self.epsilon * other.epsilon,
            alpha,
        }
    }
}

/// Extract (γ₁, ε, α) from an ambient isometry stabilizing I.
pub fn gamma_from_ambient(flag: &IsotropicFlag, g: &QMat) -> Result<GammaI> {
    let ge1 = g.mul_vec(&flag.e1);
    let eps = if ge1 == flag.e1 {
        1i64
    } else if ge1.iter().zip(&flag.e1).all(|(a, b)| *a == -b.clone()) {
        -1
    } else {
        return Err(Error::Invalid("isometry does not stabilize I".into()));
    };
    let epsq = BigRational::from(BigInt::from(eps));
    // V(I) action, column per vi basis vector
    let vi = flag.vi_basis();
    let mut cols = Vec::with_capacity(vi.len());
    for b in &vi {
        cols.push(flag.vi_coords(&g.mul_vec(b))?);
    }
    let v_g = Mat::from_rows(cols).transpose();
    let gamma1 = v_g.map(|x| x.clone() * epsq.clone());
    // α from ε·g(f₁) − f₁ (vi class)
    let gf1 = g.mul_vec(&flag.f1);
    let diff: Vec<Q> = gf1
        .iter()
        .zip(&flag.f1)
        .map(|(x, y)| epsq.clone() * x.clone() - y.clone())
        .collect();
    let alpha = flag.vi_coords(&diff)?;
    Ok(GammaI {
        gamma1,
        epsilon: eps,
        alpha,
    })
}

/// Representation matrix of γ on V(I)_{λ,k}: act_on_schur(ε·γ₁)·ε^k.
pub fn rep_matrix(exp: &FourierExpansion, g: &GammaI) -> Result<QMat> {
    let epsq = BigRational::from(BigInt::from(g.epsilon));
    let v = g.gamma1.map(|x| x.clone() * epsq.clone());
    let mut m = act_on_schur(&v, &exp.space)?;
    if g.epsilon == -1 && exp.k % 2 != 0 {
        m = m.map(|x| -x.clone());
    }
    Ok(m)
}

fn check_gamma(exp: &FourierExpansion, g: &GammaI) -> Result<()> {
    let gv = exp.flag.vi_gram();
    if g.gamma1.transpose().mul(&gv).mul(&g.gamma1) != gv {
        return Err(Error::NotOrthogonalMatrix);
    }
    // γ₁ preserves U(I)_Z: images of basis vectors have integral coordinates
    for i in 0..exp.ui_basis.rows {
        let img = g.gamma1.mul_vec(exp.ui_basis.row(i));
        let coords = exp
            .ui_basis
            .transpose()
            .solve(&img)
            .ok_or(Error::NotLatticePreserving)?;
        if !coords.iter().all(|c| c.is_integer()) {
            return Err(Error::NotLatticePreserving);
        }
    }
    // cone preservation
    let r = reference_interior(gv.rows);
    let gr = g.gamma1.mul_vec(&r);
    if !form(&gv, &gr, &r).is_positive() {
        return Err(Error::NotLatticePreserving);
    }
    Ok(())
}

/// γ⋆a with (γ⋆a)(γ₁l) = e(−(γ₁l, α))·γ(a(l)): the translate whose fixed
/// points are the Prop-symmetric expansions.
fn translate(exp: &FourierExpansion, g: &GammaI) -> Result<FourierExpansion> {
    check_gamma(exp, g)?;
    let rep = rep_matrix(exp, g)?;
    let gv = exp.flag.vi_gram();
    let mut out = exp.clone();
    out.coeffs = BTreeMap::new();
    for (l, a) in &exp.coeffs {
        let lv = exp.index_to_vi(l);
        let glv = g.gamma1.mul_vec(&lv);
        let gl = exp.vi_to_index(&glv);
        let phase = Cyc::root(&-form(&gv, &glv, &g.alpha));
        let mut b = vec![Cyc::zero(); exp.space.dim];
        for (i, bi) in b.iter_mut().enumerate() {
            for (j, aj) in a.iter().enumerate() {
                if !rep[(i, j)].is_zero() {
                    *bi = bi.add(&aj.scale(&rep[(i, j)]));
                }
            }
            *bi = bi.mul(&phase);
        }
        let existing = out.coeff(&gl);
        let summed: Vec<Cyc> = existing.iter().zip(&b).map(|(x, y)| x.add(y)).collect();
        out.set_coeff(gl, summed)?;
    }
    Ok(out)
}

/// Max coefficient discrepancy ‖a(γ₁l) − e(−(γ₁l,α))γ(a(l))‖ over the
/// support; exactly 0.0 when the identity holds formally.
pub fn symmetry_defect(exp: &FourierExpansion, g: &GammaI) -> Result<f64> {
    let t = translate(exp, g)?;
    let mut keys: Vec<Vec<Q>> = exp.coeffs.keys().cloned().collect();
    for k in t.coeffs.keys() {
        if !exp.coeffs.contains_key(k) {
            keys.push(k.clone());
        }
    }
    let mut defect = 0.0f64;
    for l in &keys {
        let a = exp.coeff(l);
        let b = t.coeff(l);
        for (x, y) in a.iter().zip(&b) {
            let d = x.sub(y);
            if !d.is_zero() {
                defect = defect.max(d.eval().norm());
            }
        }
    }
    Ok(defect)
}

/// Average the γ-translates over a finite group (checked for closure).
pub fn symmetrize(exp: &FourierExpansion, group: &[GammaI]) -> Result<FourierExpansion> {
    if group.is_empty() {
        return Err(Error::NotAGroup);
    }
    for g in group {
        for h in group {
            let gh = g.compose(h);
            if !group.iter().any(|x| *x == gh) {
                return Err(Error::NotAGroup);
            }
        }
    }
    let n = group.len();
    let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
    let mut acc: BTreeMap<Vec<Q>, Vec<Cyc>> = BTreeMap::new();
    for g in group {
        let t = translate(exp, g)?;
        for (l, a) in &t.coeffs {
            let e = acc
                .entry(l.clone())
                .or_insert_with(|| vec![Cyc::zero(); exp.space.dim]);
            for (x, y) in e.iter_mut().zip(a) {
                *x = x.add(y);
            }
        }
    }
    let mut out = exp.clone();
    out.coeffs = BTreeMap::new();
    for (l, a) in acc {
        out.set_coeff(l, a.iter().map(|x| x.scale(&inv_n)).collect())?;
    }
    Ok(out)
}
