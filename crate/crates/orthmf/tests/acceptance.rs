//! Acceptance suite: one test per criterion, each printing a pass line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};
use orthmf::domain::{
    amb_pair_c, ambient_act_on_point, ambient_isometry, factor_e, factor_elk, factor_l,
    jacobi_action, omega_j_closed_form, omega_j_multiplier, omega_of, to_ambient, vj_gram_f,
    JacobiElement, TubePoint,
};
use orthmf::fourier::{
    cone_position, gamma_from_ambient, reference_interior, symmetrize, symmetry_defect,
    ConePosition, FourierExpansion, GammaI,
};
use orthmf::jfilt::{filtration_table, u_invariants_equal_bottom, unipotent_generators};
use orthmf::lattice::{
    direct_sum, eichler_transvection, example_2u_minus2, find_isotropic_flag, gram1,
    hyperbolic_plane, new_lattice, IsotropicFlag, QuadLattice, Sublattice,
};
use orthmf::linalg::{form, q_to_c, Mat};
use orthmf::operators::{
    fourier_jacobi_indices, fourier_jacobi_slice, quasi_pullback, rankin_cohen, restrict,
};
use orthmf::petersson::{
    gram_e, gram_elk, holomorphic_tensor_table, metric_l, weight_verdict, L2Class,
};
use orthmf::schur::{
    act_on_schur, invariant_subspace, o_dimension_oracle, schur_space, split_space, Partition,
};
use orthmf::{Config, C, Q, QMat};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn cfg() -> Config {
    Config::default()
}

fn q(x: i64) -> Q {
    BigRational::from_i64(x).unwrap()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn flag5() -> IsotropicFlag {
    find_isotropic_flag(&example_2u_minus2(), 10).unwrap()
}

fn partitions_up_to_4() -> Vec<Vec<usize>> {
    vec![
        vec![1],
        vec![2],
        vec![1, 1],
        vec![3],
        vec![2, 1],
        vec![1, 1, 1],
        vec![4],
        vec![3, 1],
        vec![2, 2],
        vec![2, 1, 1],
        vec![1, 1, 1, 1],
    ]
}

/// The frame swap e₂ ↔ f₂: an order-2 rotation of the ambient lattice
/// fixing I and the definite complement.
fn frame_swap(flag: &IsotropicFlag) -> QMat {
    let mut base: Vec<Vec<Q>> = vec![
        flag.e1.clone(),
        flag.f1.clone(),
        flag.e2.clone().unwrap(),
        flag.f2.clone().unwrap(),
    ];
    let mut img = vec![
        flag.e1.clone(),
        flag.f1.clone(),
        flag.f2.clone().unwrap(),
        flag.e2.clone().unwrap(),
    ];
    for v in &flag.vj_complement {
        let vq: Vec<Q> = v.iter().map(|x| BigRational::from(x.clone())).collect();
        base.push(vq.clone());
        img.push(vq);
    }
    let b = Mat::from_rows(base).transpose();
    Mat::from_rows(img).transpose().mul(&b.inverse().unwrap())
}

fn rand_point(flag: &IsotropicFlag, rng: &mut StdRng) -> TubePoint {
    let m = flag.vj_complement.len();
    let tau = C::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.6));
    let z: Vec<C> = (0..m)
        .map(|_| C::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.2..0.2)))
        .collect();
    // force the cone condition with margin
    let g = vj_gram_f(flag);
    let imz: Vec<f64> = z.iter().map(|c| c.im).collect();
    let mut zz = 0.0;
    for i in 0..m {
        for j in 0..m {
            zz += imz[i] * g[i][j] * imz[j];
        }
    }
    let wmin = -zz / (2.0 * tau.im);
    let w = C::new(rng.gen_range(-0.5..0.5), wmin + rng.gen_range(0.3..1.5));
    TubePoint::new(flag.clone(), tau, z, w).unwrap()
}

fn rand_halfint(rng: &mut StdRng) -> Q {
    BigRational::new(BigInt::from(rng.gen_range(-4i64..=4)), BigInt::from(2))
}

fn jacobi_of_kind(flag: &IsotropicFlag, kind: usize, rng: &mut StdRng) -> JacobiElement {
    let m = flag.vj_complement.len();
    match kind {
        0 => JacobiElement::Center {
            alpha: rand_halfint(rng),
        },
        1 => JacobiElement::E1Translate {
            v1: (0..m).map(|_| rand_halfint(rng)).collect(),
        },
        2 => JacobiElement::E2Translate {
            v2: (0..m).map(|_| rand_halfint(rng)).collect(),
        },
        _ => {
            // random SL2(Z) word in S and T
            let (mut a, mut b, mut c, mut d) = (
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(1),
            );
            for _ in 0..rng.gen_range(1..4) {
                if rng.gen_bool(0.5) {
                    b = a.clone() + b;
                    d = c.clone() + d;
                } else {
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
fn criterion_01_schur_dimensions() {
    for n in 3..=6usize {
        for parts in partitions_up_to_4() {
            let Ok(p) = Partition::new(parts.clone(), n) else {
                continue;
            };
            let s = schur_space(&split_space(n), &p, &cfg()).unwrap();
            let predicted = o_dimension_oracle(&p).unwrap();
            assert_eq!(BigInt::from(s.dim), predicted, "n={n} lambda={parts:?}");
            // wedge powers have the elementary dimension
            if parts.iter().all(|&x| x == 1) {
                assert_eq!(s.dim, binom(n, parts.len()), "wedge n={n} d={}", parts.len());
            }
        }
    }
    let s = schur_space(&split_space(3), &Partition::new(vec![2], 3).unwrap(), &cfg()).unwrap();
    assert_eq!(s.dim, 5);
    println!("criterion 1 (Schur dimensions vs Weyl oracle): pass");
}

#[test]
fn criterion_02_u_invariants() {
    for n in 3..=6usize {
        for d in 1..=n / 2 {
            // wedge^d: dim of the unipotent invariants is C(n-2, d-1)
            let p = Partition::new(vec![1; d], n).unwrap();
            let s = schur_space(&split_space(n), &p, &cfg()).unwrap();
            let rep = u_invariants_equal_bottom(&s).unwrap();
            assert_eq!(rep.dim_invariants, binom(n - 2, d - 1), "wedge n={n} d={d}");
        }
        for d in 1..=3usize {
            // Sym^(d): one-dimensional invariants
            let p = Partition::new(vec![d], n).unwrap();
            let s = schur_space(&split_space(n), &p, &cfg()).unwrap();
            let rep = u_invariants_equal_bottom(&s).unwrap();
            assert_eq!(rep.dim_invariants, 1, "sym n={n} d={d}");
            // torus t = diag(2, 1, …, 1, 1/2) scales V^U by 2^{λ₁}
            let gens = unipotent_generators(&s).unwrap();
            let inv = invariant_subspace(&gens, s.dim);
            let mut t = Mat::identity(n);
            t[(0, 0)] = q(2);
            t[(n - 1, n - 1)] = BigRational::new(BigInt::from(1), BigInt::from(2));
            let rho = act_on_schur(&t, &s).unwrap();
            let scale = q(1 << d);
            for i in 0..inv.rows {
                let r = inv.row(i);
                let img = rho.mul_vec(r);
                for (x, y) in img.iter().zip(r) {
                    assert_eq!(x.clone(), y.clone() * scale.clone(), "torus weight n={n} d={d}");
                }
            }
        }
    }
    println!("criterion 2 (U-invariant dimensions and torus weight): pass");
}

#[test]
fn criterion_03_j_filtration() {
    // λ = (d): α(r) = dim Sym^{d−|r|}(C^{n−2}) = C(n−3+d−|r|, d−|r|)
    for n in 3..=5usize {
        for d in 1..=3usize {
            let p = Partition::new(vec![d], n).unwrap();
            let s = schur_space(&split_space(n), &p, &cfg()).unwrap();
            let t = filtration_table(&s).unwrap();
            for r in -(d as i64)..=(d as i64) {
                let e = d - r.unsigned_abs() as usize;
                assert_eq!(t.alpha[&r], binom(n - 3 + e, e), "n={n} d={d} r={r}");
            }
        }
        // λ = (1^d): three levels with ranks C(n−2,d−1), rest, C(n−2,d−1)
        for d in 2..=n / 2 {
            let p = Partition::new(vec![1; d], n).unwrap();
            let s = schur_space(&split_space(n), &p, &cfg()).unwrap();
            let t = filtration_table(&s).unwrap();
            let edge = binom(n - 2, d - 1);
            assert_eq!(t.alpha[&1], edge);
            assert_eq!(t.alpha[&-1], edge);
            assert_eq!(t.alpha[&0], binom(n, d) - 2 * edge);
        }
        // general λ: symmetry, total mass, bottom = V^U; filtration_table
        // itself cross-checks the flag-sum ranks against torus weights
        for parts in [vec![1], vec![2], vec![1, 1], vec![2, 1], vec![3]] {
            let Ok(p) = Partition::new(parts, n) else {
                continue;
            };
            let s = schur_space(&split_space(n), &p, &cfg()).unwrap();
            let t = filtration_table(&s).unwrap();
            let total: usize = t.alpha.values().sum();
            assert_eq!(total, s.dim);
            for (r, a) in &t.alpha {
                assert_eq!(*a, t.alpha[&-r]);
            }
            let rep = u_invariants_equal_bottom(&s).unwrap();
            assert!(rep.equal);
        }
    }
    println!("criterion 3 (J-filtration ranks, symmetry, bottom = invariants): pass");
}

#[test]
fn criterion_04_automorphy_engine() {
    let flag = flag5();
    let mut rng = StdRng::seed_from_u64(41);
    let p = Partition::new(vec![1], flag.n()).unwrap();
    let space = orthmf::schur::schur_space_over(&flag.vi_gram(), &p, &cfg()).unwrap();
    // factor_L of an SL2 Jacobi element is cτ + d
    for _ in 0..25 {
        let zp = rand_point(&flag, &mut rng);
        let g = jacobi_of_kind(&flag, 3, &mut rng);
        let JacobiElement::Sl2 { c, d, .. } = &g else {
            unreachable!()
        };
        let amb = to_ambient(&g, &flag).unwrap();
        let jl = factor_l(&amb, &zp).unwrap();
        let cf = C::new(c.to_string().parse().unwrap(), 0.0);
        let df = C::new(d.to_string().parse().unwrap(), 0.0);
        let expect = cf * zp.tau + df;
        assert!((jl - expect).norm() < 1e-9 * (1.0 + expect.norm()));
    }
    // cocycles for factor_L / factor_E / factor_Elk on 100 composable pairs
    for i in 0..100 {
        let zp = rand_point(&flag, &mut rng);
        let g = jacobi_of_kind(&flag, i % 4, &mut rng);
        let h = jacobi_of_kind(&flag, (i + 1) % 4, &mut rng);
        let ga = to_ambient(&g, &flag).unwrap();
        let ha = to_ambient(&h, &flag).unwrap();
        let gh = ambient_isometry(&flag, ga.matrix.mul(&ha.matrix)).unwrap();
        let hz = ambient_act_on_point(&ha, &zp).unwrap();
        let lhs = factor_l(&gh, &zp).unwrap();
        let rhs = factor_l(&ga, &hz).unwrap() * factor_l(&ha, &zp).unwrap();
        assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()), "L cocycle");
        let le = factor_e(&gh, &zp).unwrap();
        let re = factor_e(&ga, &hz).unwrap().mul(&factor_e(&ha, &zp).unwrap());
        let de = le.sub(&re);
        let scale = (0..re.rows)
            .flat_map(|r| (0..re.cols).map(move |c| (r, c)))
            .map(|(r, c)| re[(r, c)].norm())
            .fold(1.0, f64::max);
        for r in 0..de.rows {
            for c in 0..de.cols {
                assert!(de[(r, c)].norm() < 1e-9 * scale, "E cocycle");
            }
        }
        let lk = factor_elk(&gh, &zp, &space, 3).unwrap();
        let rk = factor_elk(&ga, &hz, &space, 3)
            .unwrap()
            .mul(&factor_elk(&ha, &zp, &space, 3).unwrap());
        for r in 0..lk.rows {
            for c in 0..lk.cols {
                assert!((lk[(r, c)] - rk[(r, c)]).norm() < 1e-8 * scale, "Elk cocycle");
            }
        }
        // factor_E orthogonality: JᵀGJ = G on V(I)
        let gv = q_to_c(&flag.vi_gram());
        let je = factor_e(&ga, &zp).unwrap();
        let back = je.transpose().mul(&gv).mul(&je);
        for r in 0..back.rows {
            for c in 0..back.cols {
                assert!((back[(r, c)] - gv[(r, c)]).norm() < 1e-9, "E orthogonality");
            }
        }
    }
    // ω_J multiplier matches the closed form per element kind, w-independent
    for kind in 0..4usize {
        for _ in 0..10 {
            let zp = rand_point(&flag, &mut rng);
            let g = jacobi_of_kind(&flag, kind, &mut rng);
            let m = omega_j_multiplier(&g, &zp).unwrap();
            let c = omega_j_closed_form(&g, &zp).unwrap();
            assert!((m - c).norm() < 1e-9 * (1.0 + c.norm()), "omega_J kind {kind}");
            let mut z2 = zp.clone();
            z2.w += C::new(0.37, 0.41);
            let m2 = omega_j_multiplier(&g, &z2).unwrap();
            assert!((m - m2).norm() < 1e-10 * (1.0 + m.norm()), "w-independence");
        }
    }
    println!("criterion 4 (automorphy factors: cτ+d, cocycles, ω_J forms): pass");
}

#[test]
fn criterion_05_jacobi_action() {
    let flag = flag5();
    let mut rng = StdRng::seed_from_u64(51);
    let e1c: Vec<C> = flag
        .e1
        .iter()
        .map(|x| C::new(orthmf::linalg::q_to_f64(x), 0.0))
        .collect();
    for i in 0..100 {
        let zp = rand_point(&flag, &mut rng);
        let g = jacobi_of_kind(&flag, i % 4, &mut rng);
        let gz = jacobi_action(&g, &zp).unwrap();
        let m = to_ambient(&g, &flag).unwrap();
        let lhs = omega_of(&gz);
        let rhs = q_to_c(&m.matrix).mul_vec(&omega_of(&zp));
        let scale = amb_pair_c(&flag, &rhs, &e1c);
        let defect: f64 = lhs
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b / scale).norm())
            .fold(0.0, f64::max);
        assert!(defect < 1e-9, "collinearity defect {defect} kind {}", i % 4);
    }
    println!("criterion 5 (ω(gZ) collinear with M_g·ω(Z), all kinds): pass");
}

#[test]
fn criterion_06_fourier_machinery() {
    let flag = flag5();
    let n = flag.n();
    let p = Partition::new(vec![1], n).unwrap();
    let mut exp = FourierExpansion::new(flag.clone(), p, 3, &cfg()).unwrap();
    let mut lv = reference_interior(n);
    lv[0] = q(2);
    exp.set_coeff_q(exp.vi_to_index(&lv), vec![q(1), q(-2), q(3)]).unwrap();
    let mut lv2 = reference_interior(n);
    lv2[1] = q(1);
    exp.set_coeff_q(exp.vi_to_index(&lv2), vec![q(0), q(1), q(1)]).unwrap();
    let swap = frame_swap(&flag);
    let gamma = gamma_from_ambient(&flag, &swap).unwrap();
    let amb = ambient_isometry(&flag, swap).unwrap();
    let group = vec![GammaI::identity(n), gamma.clone()];
    let sym = symmetrize(&exp, &group).unwrap();
    // exact-zero symmetry defect after averaging
    assert_eq!(symmetry_defect(&sym, &gamma).unwrap(), 0.0);
    // evaluate-vs-automorphy identity
    let mut rng = StdRng::seed_from_u64(61);
    for _ in 0..10 {
        let zp = rand_point(&flag, &mut rng);
        let gz = ambient_act_on_point(&amb, &zp).unwrap();
        let lhs = sym.evaluate(&gz);
        let j = factor_elk(&amb, &zp, &sym.space, sym.k).unwrap();
        let rhs = j.mul_vec(&sym.evaluate(&zp));
        let scale = lhs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let defect: f64 = lhs
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(defect / scale < 1e-8, "automorphy defect {defect}");
    }
    // a(0) ≠ 0 with λ = St raises a lint
    let mut bad = sym.clone();
    bad.set_coeff_q(vec![Q::zero(); bad.ui_basis.rows], vec![q(1), q(0), q(0)])
        .unwrap();
    let rep = orthmf::fourier::validate(&bad);
    assert!(!rep.lints.is_empty());
    println!("criterion 6 (symmetrize, automorphy identity, a(0) lint): pass");
}

#[test]
fn criterion_07_operators() {
    let flag = flag5();
    let n = flag.n();
    let p = Partition::new(vec![1], n).unwrap();
    let b0 = orthmf::domain::beta0(&flag).unwrap();
    // Fourier–Jacobi slices partition the support
    let mut exp = FourierExpansion::new(flag.clone(), p, 3, &cfg()).unwrap();
    for (a, b, c) in [(1i64, 0i64, 1i64), (1, 1, 2), (2, 0, 1), (2, 1, 3), (0, 0, 1)] {
        let mut v = vec![Q::zero(); n];
        v[0] = q(a) * b0.clone();
        v[1] = q(b);
        v[n - 1] = q(c);
        if cone_position(&flag, &v) == ConePosition::Outside {
            continue;
        }
        exp.set_coeff_q(exp.vi_to_index(&v), vec![q(a + 1), q(b), q(c)]).unwrap();
    }
    let ms = fourier_jacobi_indices(&exp).unwrap();
    let mut total = 0usize;
    for m in &ms {
        let slice = fourier_jacobi_slice(&exp, m).unwrap();
        assert!(slice.holomorphy_ok());
        total += slice.expansion.coeffs.len();
        for (lp, a) in &slice.expansion.coeffs {
            let mut lv = slice.expansion.index_to_vi(lp);
            lv[0] = m.clone() * slice.beta0.clone();
            let orig = exp.coeff(&exp.vi_to_index(&lv));
            for (x, y) in a.iter().zip(&orig) {
                assert!(x.sub(y).is_zero());
            }
        }
    }
    assert_eq!(total, exp.coeffs.len());

    // Witt restriction: cusp in, cusp out; quasi-pullback kills isotropics
    let lat = new_lattice(direct_sum(&[
        hyperbolic_plane(),
        hyperbolic_plane(),
        gram1(-2),
        gram1(-2),
    ]))
    .unwrap();
    let flag6 = find_isotropic_flag(&lat, 2).unwrap();
    let sub = {
        let mut rows = Vec::new();
        for i in 0..5 {
            let mut r = vec![BigInt::from(0); 6];
            r[i] = BigInt::from(1);
            rows.push(r);
        }
        Sublattice::new(lat.clone(), Mat::from_rows(rows)).unwrap()
    };
    let p6 = Partition::new(vec![1], flag6.n()).unwrap();
    let mut exp6 = FourierExpansion::new(flag6.clone(), p6.clone(), 3, &cfg()).unwrap();
    for (s, t) in [(3i64, 0i64), (4, 1), (5, -1)] {
        let mut v = reference_interior(flag6.n());
        v[0] = q(s);
        v[2] = q(t);
        assert_eq!(cone_position(&flag6, &v), ConePosition::Interior);
        exp6.set_coeff_q(exp6.vi_to_index(&v), vec![q(1); exp6.space.dim]).unwrap();
    }
    let r = restrict(&exp6, &sub).unwrap();
    assert!(!r.coeffs.is_empty());
    let g = r.flag.vi_gram();
    for l in r.coeffs.keys() {
        let lv = r.index_to_vi(l);
        assert!(form(&g, &lv, &lv).is_positive(), "restriction left the open cone");
    }
    let mut anti = FourierExpansion::new(flag6.clone(), p6, 3, &cfg()).unwrap();
    let kdir = {
        let mut ambv = vec![Q::zero(); 6];
        ambv[5] = Q::one();
        flag6.vi_coords(&ambv).unwrap()
    };
    let mut base = reference_interior(flag6.n());
    base[0] = q(8);
    let plus: Vec<Q> = base.iter().zip(&kdir).map(|(x, y)| x.clone() + y.clone()).collect();
    let minus: Vec<Q> = base.iter().zip(&kdir).map(|(x, y)| x.clone() - y.clone()).collect();
    anti.set_coeff_q(anti.vi_to_index(&plus), vec![q(3); anti.space.dim]).unwrap();
    anti.set_coeff_q(anti.vi_to_index(&minus), vec![q(-3); anti.space.dim]).unwrap();
    let (nu, slices) = quasi_pullback(&anti, &sub, &cfg()).unwrap();
    assert!(nu > 0);
    for s in &slices {
        let sg = s.expansion.flag.vi_gram();
        for (l, _) in &s.expansion.coeffs {
            let lv = s.expansion.index_to_vi(l);
            assert!(!form(&sg, &lv, &lv).is_zero(), "isotropic index survived");
        }
    }

    // Rankin–Cohen: antisymmetry, {f,f} = 0, symmetry transport
    let swap = frame_swap(&flag);
    let gamma = gamma_from_ambient(&flag, &swap).unwrap();
    let group = vec![GammaI::identity(n), gamma.clone()];
    let kf = 4i64;
    let kg = 6i64;
    let mut f = FourierExpansion::new(flag.clone(), Partition::new(vec![], n).unwrap(), kf, &cfg()).unwrap();
    let mut gexp = FourierExpansion::new(flag.clone(), Partition::new(vec![], n).unwrap(), kg, &cfg()).unwrap();
    let l1 = reference_interior(n);
    let mut l2 = reference_interior(n);
    l2[0] = q(2);
    f.set_coeff_q(f.vi_to_index(&l1), vec![q(1)]).unwrap();
    gexp.set_coeff_q(gexp.vi_to_index(&l2), vec![q(1)]).unwrap();
    let fs = symmetrize(&f, &group).unwrap();
    let gs = symmetrize(&gexp, &group).unwrap();
    let fg = rankin_cohen(&fs, &gs, &cfg()).unwrap();
    let gf = rankin_cohen(&gs, &fs, &cfg()).unwrap();
    assert_eq!(fg.k, kf + kg + 1);
    for (m, c) in &fg.coeffs {
        let d = gf.coeff(m);
        for (x, y) in c.iter().zip(&d) {
            assert!(x.add(y).is_zero(), "bracket not antisymmetric");
        }
    }
    let ff = rankin_cohen(&fs, &fs, &cfg()).unwrap();
    assert!(ff.coeffs.is_empty());
    // G-symmetric inputs give a (St, k+l+1)-symmetric bracket, exactly
    assert_eq!(symmetry_defect(&fg, &gamma).unwrap(), 0.0);
    println!("criterion 7 (slices, restriction, quasi-pullback, bracket): pass");
}

fn positive_definite(m: &[Vec<f64>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for i in 0..n {
        for j in 0..i {
            let f = a[i][j] / a[j][j];
            for k in 0..n {
                a[i][k] -= f * a[j][k];
            }
        }
        if a[i][i] <= 0.0 {
            return false;
        }
    }
    true
}

#[test]
fn criterion_08_petersson() {
    let flag = flag5();
    let mut rng = StdRng::seed_from_u64(81);
    for _ in 0..100 {
        let zp = rand_point(&flag, &mut rng);
        assert!(positive_definite(&gram_e(&zp)));
        // metric_L agrees with the ambient pairing (ω, ω̄)
        let om = omega_of(&zp);
        let omc: Vec<C> = om.iter().map(|x| x.conj()).collect();
        let amb = amb_pair_c(&flag, &om, &omc);
        let ml = metric_l(&zp);
        assert!((amb.re - ml).abs() < 1e-10 * (1.0 + ml.abs()));
    }
    // invariance: metric_L(Z) = |factor_L(g,Z)|²·metric_L(gZ), and the
    // matching congruence for gram_Elk through factor_Elk
    let p = Partition::new(vec![1], flag.n()).unwrap();
    let space = orthmf::schur::schur_space_over(&flag.vi_gram(), &p, &cfg()).unwrap();
    let k = 3i64;
    for i in 0..30 {
        let zp = rand_point(&flag, &mut rng);
        let g = jacobi_of_kind(&flag, i % 4, &mut rng);
        let amb = to_ambient(&g, &flag).unwrap();
        let gz = ambient_act_on_point(&amb, &zp).unwrap();
        let fl = factor_l(&amb, &zp).unwrap();
        let lhs = metric_l(&zp);
        let rhs = fl.norm_sqr() * metric_l(&gz);
        assert!((lhs - rhs).abs() < 1e-8 * (1.0 + lhs.abs()), "metric_L invariance");
        let j = factor_elk(&amb, &zp, &space, k).unwrap();
        let hg = gram_elk(&gz, &space, k);
        let hz = gram_elk(&zp, &space, k);
        let m = space.dim;
        let mut pulled = vec![vec![C::new(0.0, 0.0); m]; m];
        for a in 0..m {
            for b in 0..m {
                let mut s = C::new(0.0, 0.0);
                for r in 0..m {
                    for c in 0..m {
                        s += j[(r, a)].conj() * hg[r][c] * j[(c, b)];
                    }
                }
                pulled[a][b] = s;
            }
        }
        let scale = hz.iter().flatten().map(|x| x.abs()).fold(1.0, f64::max);
        for a in 0..m {
            for b in 0..m {
                assert!(
                    (pulled[a][b] - C::new(hz[a][b], 0.0)).norm() < 1e-8 * scale,
                    "gram_Elk invariance"
                );
            }
        }
    }
    println!("criterion 8 (gram_E > 0, metric invariances, ambient match): pass");
}

#[test]
fn criterion_09_predicates() {
    // n = 3, λ = (d): forms vanish exactly when k ≤ d
    for d in 1..=4usize {
        for k in 0..=(d as i64 + 4) {
            let p = Partition::new(vec![d], 3).unwrap();
            let v = weight_verdict(&p, k, 3);
            assert_eq!(v.m_vanish, k <= d as i64, "n=3 d={d} k={k}");
        }
    }
    // n = 4 dictionary in r = k − d: cusp forms vanish exactly when r ≤ 1
    for d in 1..=4usize {
        for k in 0..=(d as i64 + 5) {
            let p = Partition::new(vec![d], 4).unwrap();
            let v = weight_verdict(&p, k, 4);
            assert_eq!(v.cusp_vanish, k - (d as i64) <= 1, "n=4 d={d} k={k}");
        }
    }
    // smallest-weight holomorphic tensor tables, with N(k) = k!/(2^{k/2}(k/2)!)
    let t = holomorphic_tensor_table(10, 5).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].lambda_parts, vec![1; 5]);
    assert_eq!(t[0].multiplicity, 1);
    let t = holomorphic_tensor_table(9, 4).unwrap();
    assert_eq!(t.len(), 1);
    assert!(t[0].lambda_parts.is_empty());
    assert_eq!(t[0].multiplicity, 3); // N(4)
    let t = holomorphic_tensor_table(8, 4).unwrap();
    assert_eq!(t.len(), 2); // wedge^4 once and scalar N(4) = 3 times
    let t = holomorphic_tensor_table(11, 4).unwrap();
    assert!(t.is_empty()); // 2k < n − 2
    assert!(holomorphic_tensor_table(12, 6).unwrap().iter().any(|s| s.multiplicity == 15)); // N(6)
    // always_L2 ∧ cusp_vanish ⇒ m_vanish across the sweep
    for n in 3..=12usize {
        for parts in partitions_up_to_4() {
            let Ok(p) = Partition::new(parts, n) else {
                continue;
            };
            for k in -2..=(n as i64 + 6) {
                let v = weight_verdict(&p, k, n);
                if v.l2_class == L2Class::AlwaysL2 && v.cusp_vanish {
                    assert!(v.m_vanish, "L2 sweep n={n} k={k}");
                }
            }
        }
    }
    println!("criterion 9 (weight verdict tables, tensor table, L2 sweep): pass");
}

#[test]
fn criterion_10_lattice_layer() {
    let lat = example_2u_minus2();
    let g = lat.gram_q();
    let mut rng = StdRng::seed_from_u64(101);
    // E_{m⊗l} preserves the form; additivity in m
    let l: Vec<Q> = vec![q(1), q(0), q(0), q(0), q(0)];
    for _ in 0..25 {
        let rand_perp = |rng: &mut StdRng| -> Vec<Q> {
            // (m, l) = 0 means the second coordinate vanishes
            vec![
                q(rng.gen_range(-3..=3)),
                q(0),
                q(rng.gen_range(-3..=3)),
                q(rng.gen_range(-3..=3)),
                q(rng.gen_range(-3..=3)),
            ]
        };
        let m1 = rand_perp(&mut rng);
        let m2 = rand_perp(&mut rng);
        let e1 = eichler_transvection(&lat, &m1, &l).unwrap();
        let e2 = eichler_transvection(&lat, &m2, &l).unwrap();
        assert_eq!(e1.transpose().mul(&g).mul(&e1), g, "Gram not preserved");
        let m12: Vec<Q> = m1.iter().zip(&m2).map(|(a, b)| a.clone() + b.clone()).collect();
        let e12 = eichler_transvection(&lat, &m12, &l).unwrap();
        assert_eq!(e1.mul(&e2), e12, "transvections not additive");
    }
    // flags within height bound 10 for 2U ⊕ (definite A-type blocks)
    let a2 = Mat::from_rows(vec![
        vec![BigInt::from(-2), BigInt::from(1)],
        vec![BigInt::from(1), BigInt::from(-2)],
    ]);
    let cases: Vec<QuadLattice> = vec![
        example_2u_minus2(),
        new_lattice(direct_sum(&[hyperbolic_plane(), hyperbolic_plane(), a2.clone()])).unwrap(),
        new_lattice(direct_sum(&[
            hyperbolic_plane(),
            hyperbolic_plane(),
            gram1(-2),
            gram1(-2),
        ]))
        .unwrap(),
    ];
    for lat in &cases {
        let flag = find_isotropic_flag(lat, 10).unwrap();
        flag.validate().unwrap();
    }
    println!("criterion 10 (Eichler transvections, flag search): pass");
}
