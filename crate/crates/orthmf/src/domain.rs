//! Tube-domain points, the Jacobi group and its ambient realization, and
//! the numeric factor-of-automorphy engine for the Hodge bundles in their
//! I-trivializations.

use crate::lattice::{eichler_transvection, integral_unipotent_lattice, IsotropicFlag};
use crate::linalg::{clear_denominators_vec, q_to_c, Mat};
use crate::schur::{act_on_schur_c, SchurSpace};
use crate::{CMat, Error, QMat, Result, C, Q};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::f64::consts::TAU;

/// e(x) = exp(2πi·x) for complex x.
pub fn e_of(x: C) -> C {
    let modulus = (-TAU * x.im).exp();
    let arg = TAU * x.re;
    C::new(modulus * arg.cos(), modulus * arg.sin())
}

/// A point Z = (τ, z, w) of the tube domain: Z = τ·l_J + z + w·v_J in
/// V(I)_C, with z in vj_complement coordinates.
#[derive(Clone, Debug)]
pub struct TubePoint {
    pub flag: IsotropicFlag,
    pub tau: C,
    pub z: Vec<C>,
    pub w: C,
}

/// Gram matrix of the vj_complement (negative definite), as floats.
pub fn vj_gram_f(flag: &IsotropicFlag) -> Vec<Vec<f64>> {
    let m = flag.vj_complement.len();
    let mut g = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let vi: Vec<Q> = flag.vj_complement[i]
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            let vj: Vec<Q> = flag.vj_complement[j]
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            g[i][j] = flag.lattice.bilin(&vi, &vj).to_f64().unwrap();
        }
    }
    g
}

fn vj_pair_c(g: &[Vec<f64>], a: &[C], b: &[C]) -> C {
    let mut s = C::new(0.0, 0.0);
    for i in 0..a.len() {
        for j in 0..b.len() {
            s += a[i] * b[j] * g[i][j];
        }
    }
    s
}

impl TubePoint {
    pub fn new(flag: IsotropicFlag, tau: C, z: Vec<C>, w: C) -> Result<Self> {
        if z.len() != flag.vj_complement.len() {
            return Err(Error::Dimension("z length != n-2".into()));
        }
        let p = TubePoint { flag, tau, z, w };
        if !p.in_domain() {
            return Err(Error::Invalid("point outside the tube domain".into()));
        }
        Ok(p)
    }

    /// Im(τ) > 0 and 2·Im(τ)·Im(w) > −(Im z, Im z).
    pub fn in_domain(&self) -> bool {
        if self.tau.im <= 0.0 {
            return false;
        }
        let g = vj_gram_f(&self.flag);
        let imz: Vec<C> = self.z.iter().map(|c| C::new(c.im, 0.0)).collect();
        let zz = vj_pair_c(&g, &imz, &imz).re;
        2.0 * self.tau.im * self.w.im > -zz
    }

    /// V(I) coordinates of Z in the flag's `vi_basis` order [f2, vj…, e2].
    pub fn vi_coords_c(&self) -> Vec<C> {
        let mut v = Vec::with_capacity(self.z.len() + 2);
        v.push(self.tau);
        v.extend(self.z.iter().copied());
        v.push(self.w);
        v
    }

    /// Im(Z) as a real vector in vi coordinates.
    pub fn im_vi(&self) -> Vec<f64> {
        self.vi_coords_c().iter().map(|c| c.im).collect()
    }
}

/// (v₁, v₂) for complex vectors in vi coordinates.
pub fn vi_pair_c(flag: &IsotropicFlag, a: &[C], b: &[C]) -> C {
    let g = q_to_c(&flag.vi_gram());
    let mut s = C::new(0.0, 0.0);
    for i in 0..a.len() {
        for j in 0..b.len() {
            s += a[i] * b[j] * g[(i, j)];
        }
    }
    s
}

/// ω(Z) = f₁ + τf₂ + z + we₂ − ((z,z)/2 + τw)e₁ in ambient complex
/// coordinates; normalized so (ω, e₁) = 1, and (ω, ω) = 0.
pub fn omega_of(zp: &TubePoint) -> Vec<C> {
    let flag = &zp.flag;
    let n_amb = flag.lattice.rank;
    let g = vj_gram_f(flag);
    let zz = vj_pair_c(&g, &zp.z, &zp.z);
    let a = -(zz / 2.0 + zp.tau * zp.w);
    let to_c = |v: &[Q]| -> Vec<C> {
        v.iter()
            .map(|q| C::new(q.to_f64().unwrap(), 0.0))
            .collect()
    };
    let f1 = to_c(&flag.f1);
    let f2 = to_c(flag.f2.as_ref().expect("flag has J"));
    let e1 = to_c(&flag.e1);
    let e2 = to_c(flag.e2.as_ref().expect("flag has J"));
    let mut out = vec![C::new(0.0, 0.0); n_amb];
    for i in 0..n_amb {
        out[i] = f1[i] + zp.tau * f2[i] + zp.w * e2[i] + a * e1[i];
        for (k, zk) in zp.z.iter().enumerate() {
            out[i] += *zk * flag.vj_complement[k][i].to_f64().unwrap();
        }
    }
    out
}

/// Ambient complex pairing with the lattice Gram.
pub fn amb_pair_c(flag: &IsotropicFlag, a: &[C], b: &[C]) -> C {
    let g = flag.lattice.gram_q();
    let mut s = C::new(0.0, 0.0);
    for i in 0..a.len() {
        for j in 0..b.len() {
            let gij = g[(i, j)].to_f64().unwrap();
            if gij != 0.0 {
                s += a[i] * b[j] * gij;
            }
        }
    }
    s
}

/// An element of the Jacobi group Γ(J), in the Heisenberg ⋊ SL₂ splitting.
#[derive(Clone, Debug)]
pub enum JacobiElement {
    /// (α, 0, 0): the center.
    Center { alpha: Q },
    /// (0, v₁, 0): translation along V(J)⊗e₁ (vj_complement coordinates).
    E1Translate { v1: Vec<Q> },
    /// (0, 0, v₂): translation along V(J)⊗e₂.
    E2Translate { v2: Vec<Q> },
    /// An SL(2, Z) element on J ⊕ J^∨.
    Sl2 { a: BigInt, b: BigInt, c: BigInt, d: BigInt },
}

impl JacobiElement {
    pub fn validate(&self, flag: &IsotropicFlag) -> Result<()> {
        match self {
            JacobiElement::E1Translate { v1 } | JacobiElement::E2Translate { v2: v1 } => {
                if v1.len() != flag.vj_complement.len() {
                    return Err(Error::Dimension("translation vector length".into()));
                }
            }
            JacobiElement::Sl2 { a, b, c, d } => {
                if a.clone() * d.clone() - b.clone() * c.clone() != BigInt::one() {
                    return Err(Error::Invalid("sl2 determinant != 1".into()));
                }
            }
            JacobiElement::Center { .. } => {}
        }
        Ok(())
    }
}

fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap()
}

/// The explicit action of Γ(J) on (τ, z, w).
pub fn jacobi_action(g: &JacobiElement, zp: &TubePoint) -> Result<TubePoint> {
    g.validate(&zp.flag)?;
    let gram = vj_gram_f(&zp.flag);
    let (tau, z, w) = (zp.tau, zp.z.clone(), zp.w);
    let (tau2, z2, w2) = match g {
        JacobiElement::Center { alpha } => (tau, z, w + q_to_f64(alpha)),
        JacobiElement::E1Translate { v1 } => {
            let z2: Vec<C> = z
                .iter()
                .zip(v1)
                .map(|(zi, vi)| zi + q_to_f64(vi))
                .collect();
            (tau, z2, w)
        }
        JacobiElement::E2Translate { v2 } => {
            let v2c: Vec<C> = v2.iter().map(|x| C::new(q_to_f64(x), 0.0)).collect();
            let z2: Vec<C> = z.iter().zip(&v2c).map(|(zi, vi)| zi + tau * vi).collect();
            let w2 = w - vj_pair_c(&gram, &v2c, &z) - vj_pair_c(&gram, &v2c, &v2c) * tau / 2.0;
            (tau, z2, w2)
        }
        JacobiElement::Sl2 { a, b, c, d } => {
            let (af, bf, cf, df) = (
                a.to_f64().unwrap(),
                b.to_f64().unwrap(),
                c.to_f64().unwrap(),
                d.to_f64().unwrap(),
            );
            let den = tau * cf + df;
            let tau2 = (tau * af + bf) / den;
            let z2: Vec<C> = z.iter().map(|zi| zi / den).collect();
            let w2 = w + vj_pair_c(&gram, &z, &z) * cf / (den * 2.0);
            (tau2, z2, w2)
        }
    };
    TubePoint::new(zp.flag.clone(), tau2, z2, w2)
}

/// An isometry of L ⊗ R given by a rational matrix, with the O⁺ flag.
#[derive(Clone, Debug)]
pub struct AmbientIsometry {
    pub matrix: QMat,
    pub preserves_component: bool,
}

/// Wrap a rational matrix after checking MᵀGM = G exactly and computing the
/// O⁺ flag at a reference domain point.
pub fn ambient_isometry(flag: &IsotropicFlag, matrix: QMat) -> Result<AmbientIsometry> {
    let g = flag.lattice.gram_q();
    if matrix.transpose().mul(&g).mul(&matrix) != g {
        return Err(Error::NotOrthogonalMatrix);
    }
    let preserves = preserves_positive_component(flag, &matrix)?;
    Ok(AmbientIsometry {
        matrix,
        preserves_component: preserves,
    })
}

fn reference_point(flag: &IsotropicFlag, t: f64) -> TubePoint {
    let m = flag.vj_complement.len();
    TubePoint {
        flag: flag.clone(),
        tau: C::new(0.3 * t, t),
        z: vec![C::new(0.0, 0.0); m],
        w: C::new(-0.1, 1.3 * t),
    }
}

fn preserves_positive_component(flag: &IsotropicFlag, m: &QMat) -> Result<bool> {
    let mc = q_to_c(m);
    for t in [1.0f64, 2.0, 0.5] {
        let zp = reference_point(flag, t);
        let om = omega_of(&zp);
        let gom = mc.mul_vec(&om);
        let pair_e1 = {
            let e1c: Vec<C> = flag
                .e1
                .iter()
                .map(|q| C::new(q.to_f64().unwrap(), 0.0))
                .collect();
            amb_pair_c(flag, &gom, &e1c)
        };
        if pair_e1.norm() < 1e-9 {
            continue;
        }
        // normalize and read off the V(I)-part imaginary vector
        let u: Vec<C> = gom.iter().map(|x| x / pair_e1).collect();
        let coords = decompose_f1_vi_e1(flag, &u)?;
        let imv: Vec<f64> = coords.iter().map(|c| c.im).collect();
        // positive pairing with the reference interior direction f̄2 + ē2
        let gv = q_to_c(&flag.vi_gram());
        let nvi = imv.len();
        let mut refpair = 0.0;
        for j in 0..nvi {
            refpair += imv[j] * (gv[(j, 0)].re + gv[(j, nvi - 1)].re);
        }
        return Ok(refpair > 0.0);
    }
    Err(Error::ChartBoundary)
}

/// Write u = c₀·f₁ + Σ cᵢ·vi_basis + c_last·e₁ and return the middle block.
fn decompose_f1_vi_e1(flag: &IsotropicFlag, u: &[C]) -> Result<Vec<C>> {
    let mut cols: Vec<Vec<Q>> = vec![flag.f1.clone()];
    cols.extend(flag.vi_basis());
    cols.push(flag.e1.clone());
    let a = q_to_c(&Mat::from_rows(cols).transpose());
    let x = a.solve(u).ok_or(Error::ChartBoundary)?;
    Ok(x[1..x.len() - 1].to_vec())
}

/// Realize a Jacobi element as a rational isometry of L through the fixed
/// frame splitting.
pub fn to_ambient(g: &JacobiElement, flag: &IsotropicFlag) -> Result<AmbientIsometry> {
    g.validate(flag)?;
    let lat = &flag.lattice;
    let e1 = flag.e1.clone();
    let e2 = flag.e2.clone().ok_or(Error::Invalid("flag has no J".into()))?;
    let f1 = flag.f1.clone();
    let f2 = flag.f2.clone().ok_or(Error::Invalid("flag has no J".into()))?;
    let vj_lift = |v: &[Q]| -> Vec<Q> {
        let n_amb = lat.rank;
        let mut out = vec![Q::zero(); n_amb];
        for (k, c) in v.iter().enumerate() {
            for i in 0..n_amb {
                out[i] = out[i].clone()
                    + c.clone() * BigRational::from(flag.vj_complement[k][i].clone());
            }
        }
        out
    };
    let matrix = match g {
        JacobiElement::Center { alpha } => {
            let m: Vec<Q> = e2.iter().map(|x| x.clone() * alpha.clone()).collect();
            eichler_transvection(lat, &m, &e1)?
        }
        JacobiElement::E1Translate { v1 } => eichler_transvection(lat, &vj_lift(v1), &e1)?,
        JacobiElement::E2Translate { v2 } => eichler_transvection(lat, &vj_lift(v2), &e2)?,
        JacobiElement::Sl2 { a, b, c, d } => {
            let q = |x: &BigInt| BigRational::from(x.clone());
            let comb = |c1: &Q, v1: &[Q], c2: &Q, v2: &[Q]| -> Vec<Q> {
                v1.iter()
                    .zip(v2)
                    .map(|(x, y)| c1.clone() * x.clone() + c2.clone() * y.clone())
                    .collect()
            };
            let mut cols: Vec<Vec<Q>> = vec![
                comb(&q(a), &e1, &-q(c), &e2),
                comb(&-q(b), &e1, &q(d), &e2),
                comb(&q(d), &f1, &q(b), &f2),
                comb(&q(c), &f1, &q(a), &f2),
            ];
            let mut base: Vec<Vec<Q>> = vec![e1.clone(), e2.clone(), f1.clone(), f2.clone()];
            for v in &flag.vj_complement {
                let vq: Vec<Q> = v.iter().map(|x| BigRational::from(x.clone())).collect();
                base.push(vq.clone());
                cols.push(vq);
            }
            let b_mat = Mat::from_rows(base).transpose();
            let img = Mat::from_rows(cols).transpose();
            img.mul(&b_mat.inverse().ok_or(Error::DegenerateForm)?)
        }
    };
    ambient_isometry(flag, matrix)
}

/// j(g, Z) = (g·ω(Z), e₁), the L-factor in the I-trivialization.
pub fn factor_l(g: &AmbientIsometry, zp: &TubePoint) -> Result<C> {
    let flag = &zp.flag;
    let om = omega_of(zp);
    let gom = q_to_c(&g.matrix).mul_vec(&om);
    let e1c: Vec<C> = flag
        .e1
        .iter()
        .map(|q| C::new(q.to_f64().unwrap(), 0.0))
        .collect();
    let val = amb_pair_c(flag, &gom, &e1c);
    if val.norm() < 1e-12 {
        return Err(Error::ChartBoundary);
    }
    Ok(val)
}

/// Apply g to Z through the ambient action: extract (τ, z, w) of [g·ω(Z)].
pub fn ambient_act_on_point(g: &AmbientIsometry, zp: &TubePoint) -> Result<TubePoint> {
    let flag = &zp.flag;
    let om = omega_of(zp);
    let gom = q_to_c(&g.matrix).mul_vec(&om);
    let e1c: Vec<C> = flag
        .e1
        .iter()
        .map(|q| C::new(q.to_f64().unwrap(), 0.0))
        .collect();
    let pair = amb_pair_c(flag, &gom, &e1c);
    if pair.norm() < 1e-12 {
        return Err(Error::ChartBoundary);
    }
    let u: Vec<C> = gom.iter().map(|x| x / pair).collect();
    let v = decompose_f1_vi_e1(flag, &u)?;
    let m = v.len();
    TubePoint::new(flag.clone(), v[0], v[1..m - 1].to_vec(), v[m - 1])
}

/// The section s_v(Z) = ṽ − (ṽ, ω(Z))·e₁ for a vi-basis vector ṽ.
fn section(flag: &IsotropicFlag, idx: usize, om: &[C]) -> Vec<C> {
    let lift = flag.vi_basis()[idx].clone();
    let liftc: Vec<C> = lift.iter().map(|q| C::new(q.to_f64().unwrap(), 0.0)).collect();
    let pair = amb_pair_c(flag, &liftc, om);
    let e1c: Vec<C> = flag
        .e1
        .iter()
        .map(|q| C::new(q.to_f64().unwrap(), 0.0))
        .collect();
    liftc
        .iter()
        .zip(&e1c)
        .map(|(v, e)| v - pair * e)
        .collect()
}

/// The E-factor: the n×n matrix of ι⁻¹_{gZ} ∘ g ∘ ι_Z on V(I) coordinates.
/// Orthogonal for the V(I) form.
pub fn factor_e(g: &AmbientIsometry, zp: &TubePoint) -> Result<CMat> {
    let flag = &zp.flag;
    let n = flag.n();
    let om = omega_of(zp);
    let gzp = ambient_act_on_point(g, zp)?;
    let om_g = omega_of(&gzp);
    let gc = q_to_c(&g.matrix);
    // target basis: s_b(gZ) for each vi vector, plus ω(gZ) and e₁
    let mut cols: Vec<Vec<C>> = (0..n).map(|j| section(flag, j, &om_g)).collect();
    cols.push(om_g.clone());
    cols.push(
        flag.e1
            .iter()
            .map(|q| C::new(q.to_f64().unwrap(), 0.0))
            .collect(),
    );
    let a = Mat::from_rows(cols).transpose();
    let mut out: CMat = Mat::filled(n, n, C::new(0.0, 0.0));
    for i in 0..n {
        let sv = section(flag, i, &om);
        let gsv = gc.mul_vec(&sv);
        let x = a.solve(&gsv).ok_or(Error::ChartBoundary)?;
        // the e₁ coordinate must vanish: g·s_v lies in ω(gZ)^⊥
        if x[n + 1].norm() > 1e-7 * (1.0 + gsv.iter().map(|c| c.norm()).fold(0.0, f64::max)) {
            return Err(Error::Invalid(format!(
                "factor_E decomposition leaked onto e1: {:.3e}",
                x[n + 1].norm()
            )));
        }
        for j in 0..n {
            out[(j, i)] = x[j];
        }
    }
    Ok(out)
}

/// The E_{λ,k}-factor: act_on_schur(factor_E)·factor_L^k on the SchurSpace
/// over the V(I) Gram form.
pub fn factor_elk(
    g: &AmbientIsometry,
    zp: &TubePoint,
    s: &SchurSpace,
    k: i64,
) -> Result<CMat> {
    let je = factor_e(g, zp)?;
    let jl = factor_l(g, zp)?;
    let mut a = act_on_schur_c(&je, s, 1e-6)?;
    let scale = jl.powi(k as i32);
    for i in 0..a.rows {
        for j in 0..a.cols {
            a[(i, j)] *= scale;
        }
    }
    Ok(a)
}

/// β₀ > 0 with v_J = β₀·v_{J,Γ}: v_J = ē₂ in vi coordinates and v_{J,Γ}
/// is the positive generator of U(J)_Z = U(I)_Z ∩ Q·ē₂.
pub fn beta0(flag: &IsotropicFlag) -> Result<Q> {
    let u = integral_unipotent_lattice(flag)?;
    let n = u.cols;
    // integer combinations of the rows proportional to the last unit vector
    let head = Mat::from_rows(
        (0..u.rows)
            .map(|i| u.row(i)[..n - 1].to_vec())
            .collect(),
    );
    let ker = head.transpose().kernel();
    if ker.rows != 1 {
        return Err(Error::Invalid("U(J)_Z is not a line".into()));
    }
    let c = clear_denominators_vec(ker.row(0));
    let mut gen = Q::zero();
    for (i, ci) in c.iter().enumerate() {
        gen = gen + BigRational::from(ci.clone()) * u[(i, n - 1)].clone();
    }
    let gen = gen.abs();
    if gen.is_zero() {
        return Err(Error::Invalid("degenerate U(J)_Z generator".into()));
    }
    Ok(gen.recip())
}

/// (γ*ω_J)/ω_J = e(β₀(γ*w − w)).
pub fn omega_j_multiplier(g: &JacobiElement, zp: &TubePoint) -> Result<C> {
    let b0 = beta0(&zp.flag)?;
    let gz = jacobi_action(g, zp)?;
    Ok(e_of((gz.w - zp.w) * b0.to_f64().unwrap()))
}

/// The closed forms of the ω_J multiplier, for cross-checking.
pub fn omega_j_closed_form(g: &JacobiElement, zp: &TubePoint) -> Result<C> {
    let b0 = beta0(&zp.flag)?.to_f64().unwrap();
    let gram = vj_gram_f(&zp.flag);
    Ok(match g {
        JacobiElement::Center { alpha } => e_of(C::new(b0 * q_to_f64(alpha), 0.0)),
        JacobiElement::E1Translate { .. } => C::new(1.0, 0.0),
        JacobiElement::E2Translate { v2 } => {
            let v2c: Vec<C> = v2.iter().map(|x| C::new(q_to_f64(x), 0.0)).collect();
            let vz = vj_pair_c(&gram, &v2c, &zp.z);
            let vv = vj_pair_c(&gram, &v2c, &v2c);
            e_of(-(vz + vv * zp.tau / 2.0) * b0)
        }
        JacobiElement::Sl2 { c, d, .. } => {
            let (cf, df) = (c.to_f64().unwrap(), d.to_f64().unwrap());
            let zz = vj_pair_c(&gram, &zp.z, &zp.z);
            e_of(zz * (b0 * cf) / ((zp.tau * cf + df) * 2.0))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::matrix_norm;
    use crate::lattice::{example_2u_minus2, find_isotropic_flag};
    use crate::schur::{schur_space_over, Partition};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn flag5() -> IsotropicFlag {
        find_isotropic_flag(&example_2u_minus2(), 10).unwrap()
    }

    fn rand_point(flag: &IsotropicFlag, rng: &mut StdRng) -> TubePoint {
        let m = flag.vj_complement.len();
        let tau = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0));
        let z: Vec<C> = (0..m)
            .map(|_| C::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.3..0.3)))
            .collect();
        // force the cone condition with margin
        let g = vj_gram_f(flag);
        let imz: Vec<C> = z.iter().map(|c| C::new(c.im, 0.0)).collect();
        let zz = vj_pair_c(&g, &imz, &imz).re; // ≤ 0
        let wmin = -zz / (2.0 * tau.im);
        let w = C::new(rng.gen_range(-1.0..1.0), wmin + rng.gen_range(0.2..1.5));
        TubePoint::new(flag.clone(), tau, z, w).unwrap()
    }

    fn rand_q(rng: &mut StdRng) -> Q {
        BigRational::new(BigInt::from(rng.gen_range(-4i64..=4)), BigInt::from(2))
    }

    fn rand_jacobi(flag: &IsotropicFlag, rng: &mut StdRng) -> JacobiElement {
        let m = flag.vj_complement.len();
        match rng.gen_range(0..4) {
            0 => JacobiElement::Center { alpha: rand_q(rng) },
            1 => JacobiElement::E1Translate {
                v1: (0..m).map(|_| rand_q(rng)).collect(),
            },
            2 => JacobiElement::E2Translate {
                v2: (0..m).map(|_| rand_q(rng)).collect(),
            },
            _ => {
                // random SL2(Z) word in the standard generators
                let (mut a, mut b, mut c, mut d) =
                    (BigInt::from(1), BigInt::from(0), BigInt::from(0), BigInt::from(1));
                for _ in 0..rng.gen_range(1..4) {
                    if rng.gen_bool(0.5) {
                        // right-multiply by T = [[1,1],[0,1]]
                        b = a.clone() + b;
                        d = c.clone() + d;
                    } else {
                        // right-multiply by S = [[0,-1],[1,0]]
                        let (na, nb) = (b.clone(), -a.clone());
                        let (nc, nd) = (d.clone(), -c.clone());
                        a = na;
                        b = nb;
                        c = nc;
                        d = nd;
                    }
                }
                JacobiElement::Sl2 { a, b, c, d }
            }
        }
    }

    #[test]
    fn omega_identities() {
        let flag = flag5();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let zp = rand_point(&flag, &mut rng);
            let om = omega_of(&zp);
            let e1c: Vec<C> = flag
                .e1
                .iter()
                .map(|q| C::new(q.to_f64().unwrap(), 0.0))
                .collect();
            assert!((amb_pair_c(&flag, &om, &e1c) - C::new(1.0, 0.0)).norm() < 1e-12);
            assert!(amb_pair_c(&flag, &om, &om).norm() < 1e-10);
            let omb: Vec<C> = om.iter().map(|c| c.conj()).collect();
            assert!(amb_pair_c(&flag, &om, &omb).re > 0.0);
        }
    }

    #[test]
    fn jacobi_vs_ambient() {
        let flag = flag5();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let zp = rand_point(&flag, &mut rng);
            let g = rand_jacobi(&flag, &mut rng);
            let gz = jacobi_action(&g, &zp).unwrap();
            let m = to_ambient(&g, &flag).unwrap();
            assert!(m.preserves_component);
            // ω(gZ) collinear with M_g·ω(Z)
            let lhs = omega_of(&gz);
            let rhs = q_to_c(&m.matrix).mul_vec(&omega_of(&zp));
            // normalize rhs by its e₁-pairing (= factor_L)
            let e1c: Vec<C> = flag
                .e1
                .iter()
                .map(|q| C::new(q.to_f64().unwrap(), 0.0))
                .collect();
            let scale = amb_pair_c(&flag, &rhs, &e1c);
            let defect: f64 = lhs
                .iter()
                .zip(&rhs)
                .map(|(a, b)| (a - b / scale).norm())
                .fold(0.0, f64::max);
            assert!(defect < 1e-9, "collinearity defect {defect}");
        }
    }

    #[test]
    fn jacobi_action_closed_forms() {
        let flag = flag5();
        let mut rng = StdRng::seed_from_u64(3);
        let zp = rand_point(&flag, &mut rng);
        let alpha = rand_q(&mut rng);
        let gz = jacobi_action(&JacobiElement::Center { alpha: alpha.clone() }, &zp).unwrap();
        assert!((gz.w - zp.w - q_to_f64(&alpha)).norm() < 1e-12);
        assert!((gz.tau - zp.tau).norm() < 1e-12);
        // sl2(1,1,0,1): τ → τ+1
        let t = JacobiElement::Sl2 {
            a: BigInt::from(1),
            b: BigInt::from(1),
            c: BigInt::from(0),
            d: BigInt::from(1),
        };
        let gz = jacobi_action(&t, &zp).unwrap();
        assert!((gz.tau - zp.tau - 1.0).norm() < 1e-12);
        assert!((gz.w - zp.w).norm() < 1e-12);
    }

    #[test]
    fn factor_l_values() {
        let flag = flag5();
        let mut rng = StdRng::seed_from_u64(23);
        // g fixing I pointwise (Eichler w.r.t. e1) → factor 1
        for _ in 0..10 {
            let zp = rand_point(&flag, &mut rng);
            let g = to_ambient(
                &JacobiElement::E1Translate {
                    v1: vec![rand_q(&mut rng); flag.vj_complement.len()],
                },
                &flag,
            )
            .unwrap();
            assert!((factor_l(&g, &zp).unwrap() - C::new(1.0, 0.0)).norm() < 1e-9);
        }
        // Γ(J) element over (a b; c d) → cτ+d
        for _ in 0..20 {
            let zp = rand_point(&flag, &mut rng);
            let g = rand_jacobi(&flag, &mut rng);
            let m = to_ambient(&g, &flag).unwrap();
            let expected = match &g {
                JacobiElement::Sl2 { c, d, .. } => {
                    zp.tau * c.to_f64().unwrap() + d.to_f64().unwrap()
                }
                _ => C::new(1.0, 0.0),
            };
            assert!((factor_l(&m, &zp).unwrap() - expected).norm() < 1e-9);
        }
    }

    #[test]
    fn cocycles_and_orthogonality() {
        let flag = flag5();
        let vi_g = flag.vi_gram();
        let s = schur_space_over(&vi_g, &Partition::new(vec![1], 3).unwrap(), &Default::default())
            .unwrap();
        let mut rng = StdRng::seed_from_u64(37);
        for _ in 0..100 {
            let zp = rand_point(&flag, &mut rng);
            let g1 = to_ambient(&rand_jacobi(&flag, &mut rng), &flag).unwrap();
            let g2 = to_ambient(&rand_jacobi(&flag, &mut rng), &flag).unwrap();
            let g12 = ambient_isometry(&flag, g1.matrix.mul(&g2.matrix)).unwrap();
            let hz = ambient_act_on_point(&g2, &zp).unwrap();
            // L cocycle
            let lhs = factor_l(&g12, &zp).unwrap();
            let rhs = factor_l(&g1, &hz).unwrap() * factor_l(&g2, &zp).unwrap();
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
            // E cocycle and orthogonality
            let je = factor_e(&g2, &zp).unwrap();
            let q = q_to_c(&vi_g);
            let defect = matrix_norm(&je.transpose().mul(&q).mul(&je).sub(&q));
            assert!(defect < 1e-9, "orthogonality defect {defect}");
            let lhs = factor_e(&g12, &zp).unwrap();
            let rhs = factor_e(&g1, &hz).unwrap().mul(&je);
            assert!(matrix_norm(&lhs.sub(&rhs)) < 1e-9 * (1.0 + matrix_norm(&lhs)));
            // Elk cocycle (λ = St, k = 2)
            let lhs = factor_elk(&g12, &zp, &s, 2).unwrap();
            let rhs = factor_elk(&g1, &hz, &s, 2)
                .unwrap()
                .mul(&factor_elk(&g2, &zp, &s, 2).unwrap());
            assert!(matrix_norm(&lhs.sub(&rhs)) < 1e-8 * (1.0 + matrix_norm(&lhs)));
        }
    }

    #[test]
    fn factor_e_identity_and_stabilizer() {
        let flag = flag5();
        let mut rng = StdRng::seed_from_u64(41);
        let zp = rand_point(&flag, &mut rng);
        let id = ambient_isometry(&flag, Mat::identity(flag.lattice.rank)).unwrap();
        let je = factor_e(&id, &zp).unwrap();
        let n = flag.n();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((je[(i, j)] - want).norm() < 1e-9);
            }
        }
        // an I-stabilizing element acts by a constant matrix independent of Z
        let g = to_ambient(
            &JacobiElement::E2Translate {
                v2: vec![rand_q(&mut rng); flag.vj_complement.len()],
            },
            &flag,
        )
        .unwrap();
        let j1 = factor_e(&g, &rand_point(&flag, &mut rng)).unwrap();
        let j2 = factor_e(&g, &rand_point(&flag, &mut rng)).unwrap();
        assert!(matrix_norm(&j1.sub(&j2)) < 1e-8);
    }

    #[test]
    fn minus_id_scalar() {
        let flag = flag5();
        let mut rng = StdRng::seed_from_u64(43);
        let zp = rand_point(&flag, &mut rng);
        let minus: QMat = Mat::identity(flag.lattice.rank).map(|x: &Q| -x.clone());
        let g = ambient_isometry(&flag, minus).unwrap();
        let s = schur_space_over(
            &flag.vi_gram(),
            &Partition::new(vec![1], 3).unwrap(),
            &Default::default(),
        )
        .unwrap();
        for k in [0i64, 1, 2] {
            let a = factor_elk(&g, &zp, &s, k).unwrap();
            let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..a.rows {
                for j in 0..a.cols {
                    let want = if i == j { sign } else { 0.0 };
                    assert!((a[(i, j)] - want).norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn omega_j_multiplier_table() {
        let flag = flag5();
        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..40 {
            let zp = rand_point(&flag, &mut rng);
            let g = rand_jacobi(&flag, &mut rng);
            let direct = omega_j_multiplier(&g, &zp).unwrap();
            let closed = omega_j_closed_form(&g, &zp).unwrap();
            assert!((direct - closed).norm() < 1e-9, "{g:?}");
        }
        // w-independence
        let zp = rand_point(&flag, &mut rng);
        for _ in 0..10 {
            let g = rand_jacobi(&flag, &mut rng);
            let mut zp2 = zp.clone();
            zp2.w += C::new(0.37, 0.9);
            let a = omega_j_multiplier(&g, &zp).unwrap();
            let b = omega_j_multiplier(&g, &zp2).unwrap();
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn beta0_value() {
        // for 2U ⊕ ⟨−2⟩ with the standard flag, U(J)_Z = Z·ē₂ so β₀ = 1
        let flag = flag5();
        let b = beta0(&flag).unwrap();
        assert!(b.is_positive());
        // the generator must be integral in vi coordinates: β₀ = 1/positive integer
        assert!(b.recip().is_integer());
    }
}
