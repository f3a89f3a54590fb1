//! Exact arithmetic of integral quadratic lattices: signatures, orthogonal
//! complements, saturation, isotropic flags with hyperbolic frames, Eichler
//! transvections and the integral unipotent lattice U(I)_Z.

use crate::linalg::{
    elementary_divisors, form, hermite_normal_form, saturate_rows, z_to_q, Mat, ZMat,
};
use crate::{Error, QMat, Result, Q, Z};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An integral nondegenerate symmetric bilinear form with basis bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadLattice {
    pub gram: ZMat,
    pub rank: usize,
    /// Inertia (p, q) of the Gram matrix.
    pub signature: (usize, usize),
}

impl QuadLattice {
    pub fn gram_q(&self) -> QMat {
        z_to_q(&self.gram)
    }

    /// Bilinear pairing of two rational coordinate vectors.
    pub fn bilin(&self, v: &[Q], w: &[Q]) -> Q {
        form(&self.gram_q(), v, w)
    }

    pub fn bilin_z(&self, v: &[Z], w: &[Z]) -> Z {
        let gq = self.gram_q();
        let vq: Vec<Q> = v.iter().map(|x| BigRational::from(x.clone())).collect();
        let wq: Vec<Q> = w.iter().map(|x| BigRational::from(x.clone())).collect();
        form(&gq, &vq, &wq).to_integer()
    }
}

/// Build a lattice from an integer Gram matrix, computing its signature.
pub fn new_lattice(gram: ZMat) -> Result<QuadLattice> {
    if gram.rows != gram.cols {
        return Err(Error::NotSymmetric);
    }
    for i in 0..gram.rows {
        for j in 0..i {
            if gram[(i, j)] != gram[(j, i)] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let (p, q, zeros) = inertia(&z_to_q(&gram));
    if zeros > 0 {
        return Err(Error::DegenerateForm);
    }
    Ok(QuadLattice {
        rank: gram.rows,
        signature: (p, q),
        gram,
    })
}

/// Inertia (positive, negative, zero counts) of a rational symmetric matrix,
/// by symmetric congruence reduction.
pub fn inertia(g: &QMat) -> (usize, usize, usize) {
    let n = g.rows;
    let mut m = g.clone();
    let mut used = vec![false; n];
    let (mut pos, mut neg) = (0usize, 0usize);
    for _ in 0..n {
        // prefer a nonzero diagonal pivot
        let mut piv = (0..n).find(|&i| !used[i] && !m[(i, i)].is_zero());
        if piv.is_none() {
            // all remaining diagonal entries vanish; symmetrize an off-diagonal pair
            'search: for i in 0..n {
                if used[i] {
                    continue;
                }
                for j in 0..n {
                    if used[j] || j == i || m[(i, j)].is_zero() {
                        continue;
                    }
                    for c in 0..n {
                        let t = m[(j, c)].clone();
                        m[(i, c)] = m[(i, c)].clone() + t;
                    }
                    for r in 0..n {
                        let t = m[(r, j)].clone();
                        m[(r, i)] = m[(r, i)].clone() + t;
                    }
                    piv = Some(i);
                    break 'search;
                }
            }
        }
        let Some(p) = piv else { break };
        used[p] = true;
        let d = m[(p, p)].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        // clear row/column p on the not-yet-used block
        for r in 0..n {
            if used[r] || m[(r, p)].is_zero() {
                continue;
            }
            let f = m[(r, p)].clone() / d.clone();
            for c in 0..n {
                let t = f.clone() * m[(p, c)].clone();
                m[(r, c)] = m[(r, c)].clone() - t;
            }
            for r2 in 0..n {
                let t = f.clone() * m[(r2, p)].clone();
                m[(r2, r)] = m[(r2, r)].clone() - t;
            }
        }
    }
    (pos, neg, n - pos - neg)
}

/// Direct sum of Gram matrices.
pub fn direct_sum(blocks: &[ZMat]) -> ZMat {
    let n: usize = blocks.iter().map(|b| b.rows).sum();
    let mut g = Mat::filled(n, n, BigInt::zero());
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                g[(off + i, off + j)] = b[(i, j)].clone();
            }
        }
        off += b.rows;
    }
    g
}

/// Gram matrix of the hyperbolic plane U.
pub fn hyperbolic_plane() -> ZMat {
    Mat::from_rows(vec![
        vec![BigInt::zero(), BigInt::one()],
        vec![BigInt::one(), BigInt::zero()],
    ])
}

/// Rank-1 Gram ⟨a⟩.
pub fn gram1(a: i64) -> ZMat {
    Mat::from_rows(vec![vec![BigInt::from(a)]])
}

/// A sublattice given by integral basis rows in ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Sublattice {
    pub ambient: QuadLattice,
    pub basis: ZMat,
}

impl Sublattice {
    pub fn new(ambient: QuadLattice, basis: ZMat) -> Result<Self> {
        if basis.cols != ambient.rank {
            return Err(Error::Dimension("sublattice basis width".into()));
        }
        if z_to_q(&basis).rank() < basis.rows {
            return Err(Error::DependentRows);
        }
        Ok(Sublattice { ambient, basis })
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    /// Torsion-free quotient test via elementary divisors.
    pub fn is_primitive(&self) -> bool {
        elementary_divisors(&self.basis).iter().all(|d| d.is_one())
    }
}

/// Primitive closure: rational row span intersected with the ambient lattice.
pub fn saturate(sub: &Sublattice) -> Result<Sublattice> {
    if z_to_q(&sub.basis).rank() < sub.basis.rows {
        return Err(Error::DependentRows);
    }
    let sat = saturate_rows(&sub.basis);
    Sublattice::new(sub.ambient.clone(), sat)
}

/// The primitive sublattice M^⊥ = {v ∈ L : (v, M) = 0}.
pub fn orthogonal_complement(sub: &Sublattice) -> Result<Sublattice> {
    // kernel of (basis · G) over Q, cleared to a saturated integral basis
    let pairing = z_to_q(&sub.basis).mul(&sub.ambient.gram_q());
    let ker = pairing.kernel();
    let ker_z = clear_denominators(&ker);
    let sat = saturate_rows(&ker_z);
    Sublattice::new(sub.ambient.clone(), sat)
}

/// Scale each row to an integer vector with content 1.
pub fn clear_denominators(m: &QMat) -> ZMat {
    let rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let mut lcm = BigInt::one();
            for x in m.row(i) {
                lcm = lcm.lcm(x.denom());
            }
            let ints: Vec<BigInt> = m
                .row(i)
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
        })
        .collect();
    if rows.is_empty() {
        Mat::filled(0, m.cols, BigInt::zero())
    } else {
        Mat::from_rows(rows)
    }
}

/// Matrix of the Eichler transvection
/// E_{m⊗l}: v ↦ v − (m,v)l + (l,v)m − ½(m,m)(l,v)l
/// acting on ambient coordinates (columns are images of basis vectors).
pub fn eichler_transvection(lat: &QuadLattice, m: &[Q], l: &[Q]) -> Result<QMat> {
    if !lat.bilin(l, l).is_zero() {
        return Err(Error::NotIsotropic);
    }
    if !lat.bilin(m, l).is_zero() {
        return Err(Error::NotOrthogonal);
    }
    let n = lat.rank;
    let half_mm = lat.bilin(m, m) / BigRational::from(BigInt::from(2));
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = vec![Q::zero(); n];
        v[j] = Q::one();
        let mv = lat.bilin(m, &v);
        let lv = lat.bilin(l, &v);
        for i in 0..n {
            v[i] = v[i].clone() - mv.clone() * l[i].clone() + lv.clone() * m[i].clone()
                - half_mm.clone() * lv.clone() * l[i].clone();
        }
        cols.push(v);
    }
    Ok(Mat::from_rows(cols).transpose())
}

/// A chain I ⊂ J of primitive isotropic sublattices with a compatible
/// hyperbolic frame and the negative-definite complement V(J).
#[derive(Clone, Debug)]
pub struct IsotropicFlag {
    pub lattice: QuadLattice,
    pub i: Sublattice,
    pub j: Option<Sublattice>,
    pub e1: Vec<Q>,
    pub f1: Vec<Q>,
    pub e2: Option<Vec<Q>>,
    pub f2: Option<Vec<Q>>,
    /// Integral basis of (e1,f1,e2,f2)^⊥, negative definite of rank n−2.
    pub vj_complement: Vec<Vec<Z>>,
}

impl IsotropicFlag {
    /// n in signature (2, n).
    pub fn n(&self) -> usize {
        self.lattice.rank - 2
    }

    /// Lift basis of V(I) = (I^⊥/I): [f2, vj_1.., e2], all ⊥ {e1, f1}.
    /// The induced form is hyperbolic ⊕ negative definite of signature (1, n−1).
    pub fn vi_basis(&self) -> Vec<Vec<Q>> {
        let f2 = self.f2.as_ref().expect("flag has no J");
        let e2 = self.e2.as_ref().expect("flag has no J");
        let mut b = vec![f2.clone()];
        for v in &self.vj_complement {
            b.push(v.iter().map(|x| BigRational::from(x.clone())).collect());
        }
        b.push(e2.clone());
        b
    }

    /// Gram matrix of `vi_basis` — the quadratic form on U(I) ≅ V(I).
    pub fn vi_gram(&self) -> QMat {
        let b = self.vi_basis();
        let n = b.len();
        let mut g = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.lattice.bilin(&b[i], &b[j]);
            }
        }
        g
    }

    /// Pairing of two V(I)-coordinate vectors (coordinates in `vi_basis`).
    pub fn vi_form(&self, v: &[Q], w: &[Q]) -> Q {
        form(&self.vi_gram(), v, w)
    }

    /// Ambient lift of a V(I)-coordinate vector.
    pub fn vi_lift(&self, v: &[Q]) -> Vec<Q> {
        let b = self.vi_basis();
        let n = self.lattice.rank;
        let mut out = vec![Q::zero(); n];
        for (c, bv) in v.iter().zip(&b) {
            for i in 0..n {
                out[i] = out[i].clone() + c.clone() * bv[i].clone();
            }
        }
        out
    }

    /// V(I)-coordinates of an ambient vector in I^⊥ (defined mod e1).
    pub fn vi_coords(&self, v: &[Q]) -> Result<Vec<Q>> {
        let mut cols = self.vi_basis();
        cols.push(self.e1.clone());
        let a = Mat::from_rows(cols).transpose();
        let x = a.solve(v).ok_or(Error::Dimension("not in I^perp + e1 span".into()))?;
        Ok(x[..x.len() - 1].to_vec())
    }

    /// Check the defining pairings of the hyperbolic frame and the complement.
    pub fn validate(&self) -> Result<()> {
        let lat = &self.lattice;
        let one = Q::one();
        let pairs_zero: &mut dyn FnMut(&[Q], &[Q]) -> bool = &mut |a, b| lat.bilin(a, b).is_zero();
        if !pairs_zero(&self.e1, &self.e1) || !pairs_zero(&self.f1, &self.f1) {
            return Err(Error::Invalid("e1/f1 not isotropic".into()));
        }
        if lat.bilin(&self.e1, &self.f1) != one {
            return Err(Error::Invalid("(e1,f1) != 1".into()));
        }
        if let (Some(e2), Some(f2)) = (&self.e2, &self.f2) {
            for (a, b, name) in [
                (e2, e2, "(e2,e2)"),
                (f2, f2, "(f2,f2)"),
                (&self.e1, e2, "(e1,e2)"),
                (&self.f1, f2, "(f1,f2)"),
                (&self.e1, f2, "(e1,f2)"),
                (e2, &self.f1, "(e2,f1)"),
            ] {
                if !lat.bilin(a, b).is_zero() {
                    return Err(Error::Invalid(format!("{name} != 0")));
                }
            }
            if lat.bilin(e2, f2) != one {
                return Err(Error::Invalid("(e2,f2) != 1".into()));
            }
        }
        let frame: Vec<&Vec<Q>> = [
            Some(&self.e1),
            Some(&self.f1),
            self.e2.as_ref(),
            self.f2.as_ref(),
        ]
        .into_iter()
        .flatten()
        .collect();
        let mut comp_q = Vec::new();
        for v in &self.vj_complement {
            let vq: Vec<Q> = v.iter().map(|x| BigRational::from(x.clone())).collect();
            for f in &frame {
                if !lat.bilin(&vq, f).is_zero() {
                    return Err(Error::Invalid("complement not orthogonal to frame".into()));
                }
            }
            comp_q.push(vq);
        }
        if !comp_q.is_empty() {
            let m = comp_q.len();
            let mut g = Mat::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    g[(i, j)] = lat.bilin(&comp_q[i], &comp_q[j]);
                }
            }
            let (p, q, z) = inertia(&g);
            if p != 0 || z != 0 || q != m {
                return Err(Error::Invalid("complement not negative definite".into()));
            }
        }
        if !self.i.is_primitive() {
            return Err(Error::Invalid("I not primitive".into()));
        }
        if let Some(j) = &self.j {
            if !j.is_primitive() {
                return Err(Error::Invalid("J not primitive".into()));
            }
        }
        Ok(())
    }
}

/// Lazily enumerate primitive integer vectors of coordinate height ≤ bound,
/// in increasing height and, within a height shell, lexicographic coordinate
/// order; only one representative of ±v (first nonzero coordinate positive).
fn primitive_vectors(rank: usize, bound: i64) -> impl Iterator<Item = Vec<BigInt>> {
    let mut h = 1i64;
    let mut v: Option<Vec<i64>> = if bound >= 1 { Some(vec![-1; rank]) } else { None };
    std::iter::from_fn(move || loop {
        let cur = v.as_mut()?;
        let hit = cur.iter().map(|x| x.abs()).max() == Some(h)
            && cur.iter().find(|&&x| x != 0).map(|&x| x > 0) == Some(true)
            && cur.iter().fold(0i64, |acc, &x| acc.gcd(&x)) == 1;
        let out = if hit {
            Some(cur.iter().map(|&x| BigInt::from(x)).collect())
        } else {
            None
        };
        // lexicographic odometer over [-h, h]^rank, then the next shell
        let mut i = rank;
        loop {
            if i == 0 {
                if h < bound {
                    h += 1;
                    *cur = vec![-h; rank];
                } else {
                    v = None;
                }
                break;
            }
            i -= 1;
            if cur[i] < h {
                cur[i] += 1;
                for x in cur.iter_mut().skip(i + 1) {
                    *x = -h;
                }
                break;
            }
        }
        if out.is_some() {
            return out;
        }
    })
}

/// Search for I ⊂ J and complete a hyperbolic frame.
pub fn find_isotropic_flag(lat: &QuadLattice, height_bound: i64) -> Result<IsotropicFlag> {
    let is_iso = |v: &[BigInt]| lat.bilin_z(v, v).is_zero();
    let Some(v) = primitive_vectors(lat.rank, height_bound).find(|v| is_iso(v)) else {
        return Err(Error::NoIsotropicVectorFound(height_bound));
    };
    let Some(w) = primitive_vectors(lat.rank, height_bound).find(|w| {
        is_iso(w)
            && lat.bilin_z(&v, w).is_zero()
            && z_to_q(&Mat::from_rows(vec![v.clone(), w.clone()])).rank() == 2
    }) else {
        return Err(Error::WittRankOne(height_bound));
    };
    build_flag(lat, &v, &w)
}

pub fn build_flag(lat: &QuadLattice, v: &[BigInt], w: &[BigInt]) -> Result<IsotropicFlag> {
    let i_sub = saturate(&Sublattice::new(
        lat.clone(),
        Mat::from_rows(vec![v.to_vec()]),
    )?)?;
    let j_sub = saturate(&Sublattice::new(
        lat.clone(),
        Mat::from_rows(vec![v.to_vec(), w.to_vec()]),
    )?)?;
    let e1_z: Vec<BigInt> = i_sub.basis.row(0).to_vec();
    // complete e1 to a basis (e1, e2) of J: coordinates of e1 in the J basis
    // are coprime; extend to a unimodular 2×2 matrix
    let jb = &j_sub.basis;
    let jq = z_to_q(jb).transpose();
    let e1q: Vec<Q> = e1_z.iter().map(|x| BigRational::from(x.clone())).collect();
    let coords = jq.solve(&e1q).expect("e1 in J");
    let (a, b) = (coords[0].to_integer(), coords[1].to_integer());
    let egcd = a.extended_gcd(&b);
    // a*x + b*y = 1  ⇒  take e2 = -y·b1 + x·b2 so det [[a,b],[-y,x]] = 1
    let (x, y) = (egcd.x, egcd.y);
    let e2_z: Vec<BigInt> = (0..lat.rank)
        .map(|c| -y.clone() * jb[(0, c)].clone() + x.clone() * jb[(1, c)].clone())
        .collect();
    let e1: Vec<Q> = e1q;
    let e2: Vec<Q> = e2_z.iter().map(|x| BigRational::from(x.clone())).collect();

    // f1: solve (e1,x)=1, (e2,x)=0; then subtract ((x,x)/2)·e1
    let g = lat.gram_q();
    let rows = Mat::from_rows(vec![g.mul_vec(&e1), g.mul_vec(&e2)]);
    let x1 = rows
        .solve(&[Q::one(), Q::zero()])
        .ok_or(Error::DegenerateForm)?;
    let f1 = make_isotropic_partner(lat, &x1, &e1);
    // f2: solve (e2,y)=1, (e1,y)=0, (f1,y)=0; then subtract ((y,y)/2)·e2
    let rows = Mat::from_rows(vec![g.mul_vec(&e2), g.mul_vec(&e1), g.mul_vec(&f1)]);
    let y2 = rows
        .solve(&[Q::one(), Q::zero(), Q::zero()])
        .ok_or(Error::DegenerateForm)?;
    let f2 = make_isotropic_partner(lat, &y2, &e2);

    // complement of the frame, cleared to integers
    let rows = Mat::from_rows(vec![
        g.mul_vec(&e1),
        g.mul_vec(&e2),
        g.mul_vec(&f1),
        g.mul_vec(&f2),
    ]);
    let ker = rows.kernel();
    let comp = saturate_rows(&clear_denominators(&ker));
    let flag = IsotropicFlag {
        lattice: lat.clone(),
        i: i_sub,
        j: Some(j_sub),
        e1,
        f1,
        e2: Some(e2),
        f2: Some(f2),
        vj_complement: comp.to_rows(),
    };
    flag.validate()?;
    Ok(flag)
}

fn make_isotropic_partner(lat: &QuadLattice, x: &[Q], e: &[Q]) -> Vec<Q> {
    let half = lat.bilin(x, x) / BigRational::from(BigInt::from(2));
    x.iter()
        .zip(e)
        .map(|(xi, ei)| xi.clone() - half.clone() * ei.clone())
        .collect()
}

/// Basis of U(I)_Z = {m ∈ U(I)_Q : E_{m⊗e1} preserves L}, rows in
/// `vi_basis` coordinates. Γ is the full integral group O^+(L), so the
/// condition is pure integrality of the transvection matrix.
pub fn integral_unipotent_lattice(flag: &IsotropicFlag) -> Result<QMat> {
    let lat = &flag.lattice;
    let n = flag.lattice.rank - 2;

    // Λ0 = image of I^⊥ ∩ L in V(I), in vi_basis coordinates
    let iperp = orthogonal_complement(&flag.i)?;
    let mut lam0_rows = Vec::new();
    for r in 0..iperp.basis.rows {
        let amb: Vec<Q> = iperp
            .basis
            .row(r)
            .iter()
            .map(|x| BigRational::from(x.clone()))
            .collect();
        lam0_rows.push(flag.vi_coords(&amb)?);
    }
    let lam0 = lattice_basis_q(&Mat::from_rows(lam0_rows));

    // W = dual lattice of Λ0 for the V(I) form: candidates for m (condition A)
    let gv = flag.vi_gram();
    let gram_lam0 = lam0.mul(&gv).mul(&lam0.transpose());
    let w_basis = gram_lam0
        .inverse()
        .ok_or(Error::DegenerateForm)?
        .mul(&lam0);

    // v0 with (e1, v0) = d_I, the positive generator of (e1, L)
    let ge1 = lat.gram_q().mul_vec(&flag.e1); // pairings of e1 with basis vectors
    let ge1_z: Vec<BigInt> = ge1.iter().map(|x| x.to_integer()).collect();
    let (d_i, combo) = gcd_combination(&ge1_z);
    let v0: Vec<Q> = (0..lat.rank)
        .map(|c| BigRational::from(combo[c].clone()))
        .collect();
    let d_i_q = BigRational::from(d_i.clone());

    // condition (B): F(x) = d_I·m̃ − ((m̃,v0) + ½(m,m)d_I)·e1 ∈ L
    let lifts: Vec<Vec<Q>> = (0..n).map(|r| flag.vi_lift(w_basis.row(r))).collect();
    let two = BigRational::from(BigInt::from(2));
    let f_of = |x: &[BigInt]| -> Vec<Q> {
        let mut m_coords = vec![Q::zero(); n];
        let mut m_tilde = vec![Q::zero(); lat.rank];
        for (k, xi) in x.iter().enumerate() {
            let xq = BigRational::from(xi.clone());
            for c in 0..n {
                m_coords[c] = m_coords[c].clone() + xq.clone() * w_basis[(k, c)].clone();
            }
            for c in 0..lat.rank {
                m_tilde[c] = m_tilde[c].clone() + xq.clone() * lifts[k][c].clone();
            }
        }
        let beta = lat.bilin(&m_tilde, &v0)
            + flag.vi_form(&m_coords, &m_coords) * d_i_q.clone() / two.clone();
        (0..lat.rank)
            .map(|c| d_i_q.clone() * m_tilde[c].clone() - beta.clone() * flag.e1[c].clone())
            .collect()
    };

    // modulus D: all F-values on D·Z^n and their differences are integral
    let mut den = BigInt::one();
    for lift in &lifts {
        for c in lift {
            den = den.lcm((d_i_q.clone() * c.clone()).denom());
        }
        den = den.lcm(lat.bilin(lift, &v0).denom());
    }
    for a in 0..n {
        for b in 0..n {
            let q = d_i_q.clone() * form(&gram_dual(&w_basis, &gv), &unit(n, a), &unit(n, b))
                / two.clone();
            den = den.lcm(q.denom());
        }
    }
    let d_mod = den;
    let d_u64: u64 = (&d_mod)
        .try_into()
        .map_err(|_| Error::Invalid("unipotent modulus too large".into()))?;
    let total = (d_u64 as f64).powi(n as i32);
    if total > 2e6 {
        return Err(Error::Invalid(
            "unipotent lattice enumeration too large".into(),
        ));
    }

    // enumerate residues mod D and collect the solution subgroup
    let mut sol_rows: Vec<Vec<BigInt>> = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    loop {
        let fv = f_of(&x);
        if fv.iter().all(|q| q.is_integer()) {
            sol_rows.push(x.clone());
        }
        // odometer over 0..D
        let mut i = n;
        let mut carried = true;
        while i > 0 {
            i -= 1;
            x[i] += 1;
            if x[i] < d_mod.clone().into() {
                carried = false;
                break;
            }
            x[i] = BigInt::zero();
        }
        if carried {
            break;
        }
    }
    for i in 0..n {
        let mut r = vec![BigInt::zero(); n];
        r[i] = d_mod.clone();
        sol_rows.push(r);
    }
    let (h, _) = hermite_normal_form(&Mat::from_rows(sol_rows));
    let xb: Vec<Vec<BigInt>> = (0..n).map(|i| h.row(i).to_vec()).collect();
    // U(I)_Z basis in vi coords = x-basis · W-basis
    let xq = Mat::from_rows(
        xb.iter()
            .map(|r| r.iter().map(|v| BigRational::from(v.clone())).collect())
            .collect(),
    );
    Ok(xq.mul(&w_basis))
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

fn gram_dual(w: &QMat, g: &QMat) -> QMat {
    w.mul(g).mul(&w.transpose())
}

/// Z-basis of the lattice generated by rational rows (HNF after clearing a
/// common denominator).
pub fn lattice_basis_q(m: &QMat) -> QMat {
    let mut den = BigInt::one();
    for i in 0..m.rows {
        for x in m.row(i) {
            den = den.lcm(x.denom());
        }
    }
    let dq = BigRational::from(den.clone());
    let mz = m.map(|x| (x.clone() * dq.clone()).to_integer());
    let (h, _) = hermite_normal_form(&mz);
    let rank = z_to_q(&h).rank();
    let rows: Vec<Vec<Q>> = (0..rank)
        .map(|i| {
            h.row(i)
                .iter()
                .map(|x| BigRational::from(x.clone()) / dq.clone())
                .collect()
        })
        .collect();
    Mat::from_rows(rows)
}

/// Extended gcd over a vector: returns (g, x) with Σ x_i a_i = g ≥ 0.
fn gcd_combination(a: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut combo = vec![BigInt::zero(); a.len()];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = ai.abs();
            combo = vec![BigInt::zero(); a.len()];
            combo[i] = if ai.is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            continue;
        }
        let e = g.extended_gcd(ai);
        for c in combo.iter_mut() {
            *c = c.clone() * e.x.clone();
        }
        combo[i] = e.y.clone();
        g = e.gcd;
    }
    (g, combo)
}

/// 2U ⊕ ⟨−2⟩, the running example lattice.
pub fn example_2u_minus2() -> QuadLattice {
    new_lattice(direct_sum(&[hyperbolic_plane(), hyperbolic_plane(), gram1(-2)])).unwrap()
}
