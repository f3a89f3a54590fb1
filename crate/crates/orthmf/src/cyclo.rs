//! Exact arithmetic in cyclotomic fields: Q-linear combinations of roots of
//! unity e(j/m), with a sound zero test via reduction modulo the cyclotomic
//! polynomial. Used to keep symmetry checks of Fourier data exact.

use crate::{Q, C};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;
use std::f64::consts::TAU;

/// Σ_j c[j]·e(j/m), stored on a fixed denominator m.
#[derive(Clone, Debug)]
pub struct Cyc {
    pub m: u64,
    pub c: Vec<Q>,
}

impl Cyc {
    pub fn zero() -> Self {
        Cyc {
            m: 1,
            c: vec![Q::zero()],
        }
    }

    pub fn one() -> Self {
        Cyc {
            m: 1,
            c: vec![Q::one()],
        }
    }

    pub fn from_q(q: Q) -> Self {
        Cyc { m: 1, c: vec![q] }
    }

    /// e(p/q) = exp(2πi·p/q) for a rational exponent.
    pub fn root(exponent: &Q) -> Self {
        let q: u64 = exponent.denom().to_u64().expect("root denominator fits u64");
        let p = exponent.numer().mod_floor(&BigInt::from(q)).to_u64().unwrap();
        let mut c = vec![Q::zero(); q as usize];
        c[p as usize] = Q::one();
        Cyc { m: q, c }
    }

    fn rescale(&self, m: u64) -> Vec<Q> {
        debug_assert!(m % self.m == 0);
        let k = (m / self.m) as usize;
        let mut c = vec![Q::zero(); m as usize];
        for (j, x) in self.c.iter().enumerate() {
            if !x.is_zero() {
                c[j * k] = x.clone();
            }
        }
        c
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let m = self.m.lcm(&other.m);
        let mut c = self.rescale(m);
        for (j, x) in other.rescale(m).into_iter().enumerate() {
            if !x.is_zero() {
                c[j] = c[j].clone() + x;
            }
        }
        Cyc { m, c }
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            m: self.m,
            c: self.c.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        let m = self.m.lcm(&other.m);
        let (a, b) = (self.rescale(m), other.rescale(m));
        let mut c = vec![Q::zero(); m as usize];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = (i + j) % m as usize;
                c[k] = c[k].clone() + x.clone() * y.clone();
            }
        }
        Cyc { m, c }
    }

    pub fn scale(&self, q: &Q) -> Cyc {
        Cyc {
            m: self.m,
            c: self.c.iter().map(|x| x.clone() * q.clone()).collect(),
        }
    }

    /// Exact zero test: reduce the representing polynomial modulo x^m − 1 is
    /// implicit; the element vanishes iff the polynomial is divisible by the
    /// m-th cyclotomic polynomial after reduction mod x^m − 1 on each
    /// residue class — equivalently iff polynomial reduction mod Φ_m of the
    /// full representative is 0.
    pub fn is_zero(&self) -> bool {
        if self.c.iter().all(|x| x.is_zero()) {
            return true;
        }
        // remainder of Σ c_j x^j modulo Φ_m(x)
        let phi = cyclotomic_poly(self.m);
        let rem = poly_rem(&self.c, &phi);
        rem.iter().all(|x| x.is_zero())
    }

    pub fn eval(&self) -> C {
        let mut s = C::new(0.0, 0.0);
        for (j, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let t = TAU * j as f64 / self.m as f64;
            let v = x.to_f64().unwrap_or(f64::NAN);
            s += C::new(v * t.cos(), v * t.sin());
        }
        s
    }
}

/// Coefficients of Φ_m, low degree first, computed by the recursion
/// x^m − 1 = ∏_{d|m} Φ_d with exact polynomial division.
pub fn cyclotomic_poly(m: u64) -> Vec<Q> {
    fn inner(m: u64, memo: &mut HashMap<u64, Vec<Q>>) -> Vec<Q> {
        if let Some(p) = memo.get(&m) {
            return p.clone();
        }
        // x^m − 1
        let mut num = vec![Q::zero(); m as usize + 1];
        num[0] = -Q::one();
        num[m as usize] = Q::one();
        for d in 1..m {
            if m % d == 0 {
                let phi_d = inner(d, memo);
                num = poly_div_exact(&num, &phi_d);
            }
        }
        memo.insert(m, num.clone());
        num
    }
    let mut memo = HashMap::new();
    inner(m, &mut memo)
}

fn trim(p: &mut Vec<Q>) {
    while p.len() > 1 && p.last().map(|x| x.is_zero()) == Some(true) {
        p.pop();
    }
}

fn poly_div_exact(num: &[Q], den: &[Q]) -> Vec<Q> {
    let (q, r) = poly_divmod(num, den);
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

fn poly_rem(num: &[Q], den: &[Q]) -> Vec<Q> {
    poly_divmod(num, den).1
}

fn poly_divmod(num: &[Q], den: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = num.to_vec();
    trim(&mut r);
    let mut d = den.to_vec();
    trim(&mut d);
    let dn = d.len() - 1;
    let lead = d[dn].clone();
    if r.len() <= dn {
        return (vec![Q::zero()], r);
    }
    let mut q = vec![Q::zero(); r.len() - dn];
    for k in (0..q.len()).rev() {
        let coef = r[k + dn].clone() / lead.clone();
        if coef.is_zero() {
            continue;
        }
        q[k] = coef.clone();
        for (i, di) in d.iter().enumerate() {
            r[k + i] = r[k + i].clone() - coef.clone() * di.clone();
        }
    }
    r.truncate(dn.max(1));
    (q, r)
}
