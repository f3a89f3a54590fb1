//! JSON file formats: lattices {"gram": [[..]], "name": ..}, sublattices
//! {"basis": [[..]]}, expansions {"flag": {gram,e1,e2}, "lambda", "k",
//! "coeffs": [{"l": ["p/q",..], "a": [..]}]}. Rationals are "p/q" strings;
//! a cyclotomic coefficient that is not rational is {"m": m, "c": ["p/q",..]}.

use num_bigint::BigInt;
use num_traits::One;
use orthmf::cyclo::Cyc;
use orthmf::fourier::FourierExpansion;
use orthmf::lattice::{build_flag, new_lattice, IsotropicFlag, QuadLattice, Sublattice};
use orthmf::linalg::Mat;
use orthmf::schur::Partition;
use orthmf::{Config, Error, Q, Result};
use serde_json::{json, Value};
use std::str::FromStr;

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad(format!("bad numerator {s:?}")))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad(format!("bad denominator {s:?}")))?;
            if q == BigInt::from(0) {
                return Err(bad(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(p, q))
        }
        None => Ok(Q::from(
            BigInt::from_str(s).map_err(|_| bad(format!("bad integer {s:?}")))?,
        )),
    }
}

pub fn fmt_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn fmt_qvec(v: &[Q]) -> String {
    let cells: Vec<String> = v.iter().map(fmt_q).collect();
    format!("[{}]", cells.join(", "))
}

fn read_json(path: &str) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("bad JSON in {path}: {e}")))
}

fn int_rows(v: &Value, key: &str) -> Result<Vec<Vec<BigInt>>> {
    let rows = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| bad(format!("missing array {key:?}")))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad(format!("{key:?} rows must be arrays")))?
                .iter()
                .map(|x| {
                    x.as_i64()
                        .map(BigInt::from)
                        .ok_or_else(|| bad(format!("{key:?} entries must be integers")))
                })
                .collect()
        })
        .collect()
}

fn int_vec(v: &Value, key: &str) -> Result<Vec<BigInt>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| bad(format!("missing array {key:?}")))?
        .iter()
        .map(|x| {
            x.as_i64()
                .map(BigInt::from)
                .ok_or_else(|| bad(format!("{key:?} entries must be integers")))
        })
        .collect()
}

fn lattice_from_value(v: &Value) -> Result<QuadLattice> {
    new_lattice(Mat::from_rows(int_rows(v, "gram")?))
}

pub fn load_lattice(path: &str) -> Result<QuadLattice> {
    lattice_from_value(&read_json(path)?)
}

pub fn load_sublattice(path: &str, ambient: QuadLattice) -> Result<Sublattice> {
    let v = read_json(path)?;
    Sublattice::new(ambient, Mat::from_rows(int_rows(&v, "basis")?))
}

pub fn lattice_info_json(lat: &QuadLattice, flag: &IsotropicFlag) -> String {
    let gram: Vec<Vec<i64>> = (0..lat.rank)
        .map(|i| {
            (0..lat.rank)
                .map(|j| i64::try_from(&lat.gram[(i, j)]).unwrap_or(0))
                .collect()
        })
        .collect();
    let qv = |v: &[Q]| -> Vec<String> { v.iter().map(fmt_q).collect() };
    json!({
        "gram": gram,
        "signature": [lat.signature.0, lat.signature.1],
        "e1": qv(&flag.e1),
        "e2": qv(flag.e2.as_ref().unwrap()),
    })
    .to_string()
}

fn flag_from_value(v: &Value) -> Result<IsotropicFlag> {
    let lat = lattice_from_value(v)?;
    build_flag(&lat, &int_vec(v, "e1")?, &int_vec(v, "e2")?)
}

fn q_integral(v: &[Q]) -> Result<Vec<BigInt>> {
    v.iter()
        .map(|x| {
            if x.denom().is_one() {
                Ok(x.numer().clone())
            } else {
                Err(bad("flag vector is not integral"))
            }
        })
        .collect()
}

fn cyc_from_value(v: &Value) -> Result<Cyc> {
    match v {
        Value::String(s) => Ok(Cyc::from_q(parse_rational(s)?)),
        Value::Object(_) => {
            let m = v
                .get("m")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("cyclotomic coefficient needs integer \"m\""))?;
            let c: Vec<Q> = v
                .get("c")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("cyclotomic coefficient needs array \"c\""))?
                .iter()
                .map(|x| {
                    parse_rational(x.as_str().ok_or_else(|| bad("\"c\" entries must be strings"))?)
                })
                .collect::<Result<_>>()?;
            if c.len() != m as usize {
                return Err(bad("cyclotomic coefficient has wrong length"));
            }
            Ok(Cyc { m, c })
        }
        _ => Err(bad("coefficient must be a \"p/q\" string or {m, c} object")),
    }
}

fn cyc_to_value(x: &Cyc) -> Value {
    if x.m == 1 {
        Value::String(fmt_q(&x.c[0]))
    } else {
        let c: Vec<String> = x.c.iter().map(fmt_q).collect();
        json!({"m": x.m, "c": c})
    }
}

pub fn cyc_vec_json(a: &[Cyc]) -> String {
    Value::Array(a.iter().map(cyc_to_value).collect()).to_string()
}

pub fn fmt_cyc_vec(a: &[Cyc]) -> String {
    let cells: Vec<String> = a
        .iter()
        .map(|x| {
            if x.m == 1 {
                fmt_q(&x.c[0])
            } else {
                let v = x.eval();
                format!("{:+.9}{:+.9}i", v.re, v.im)
            }
        })
        .collect();
    format!("[{}]", cells.join(", "))
}

pub fn load_expansion(path: &str, cfg: &Config) -> Result<FourierExpansion> {
    let v = read_json(path)?;
    let flag = flag_from_value(
        v.get("flag").ok_or_else(|| bad("missing \"flag\""))?,
    )?;
    let n = flag.n();
    let parts: Vec<usize> = v
        .get("lambda")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing array \"lambda\""))?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| bad("\"lambda\" entries must be integers"))
        })
        .collect::<Result<_>>()?;
    let lambda = Partition::new(parts, n)?;
    let k = v
        .get("k")
        .and_then(Value::as_i64)
        .ok_or_else(|| bad("missing integer \"k\""))?;
    let mut exp = FourierExpansion::new(flag, lambda, k, cfg)?;
    for entry in v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing array \"coeffs\""))?
    {
        let l: Vec<Q> = entry
            .get("l")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("coefficient needs array \"l\""))?
            .iter()
            .map(|x| {
                parse_rational(x.as_str().ok_or_else(|| bad("\"l\" entries must be strings"))?)
            })
            .collect::<Result<_>>()?;
        let a: Vec<Cyc> = entry
            .get("a")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("coefficient needs array \"a\""))?
            .iter()
            .map(cyc_from_value)
            .collect::<Result<_>>()?;
        exp.set_coeff(l, a)?;
    }
    Ok(exp)
}

pub fn expansion_to_json(exp: &FourierExpansion) -> Result<String> {
    let lat = &exp.flag.lattice;
    let gram: Vec<Vec<i64>> = (0..lat.rank)
        .map(|i| {
            (0..lat.rank)
                .map(|j| i64::try_from(&lat.gram[(i, j)]).unwrap_or(0))
                .collect()
        })
        .collect();
    let to_i64 = |v: Vec<BigInt>| -> Result<Vec<i64>> {
        v.iter()
            .map(|x| i64::try_from(x).map_err(|_| bad("flag vector entry out of range")))
            .collect()
    };
    let e1 = to_i64(q_integral(&exp.flag.e1)?)?;
    let e2 = to_i64(q_integral(exp.flag.e2.as_ref().ok_or_else(|| bad("flag has no J"))?)?)?;
    let coeffs: Vec<Value> = exp
        .coeffs
        .iter()
        .map(|(l, a)| {
            let lv: Vec<String> = l.iter().map(fmt_q).collect();
            json!({"l": lv, "a": a.iter().map(cyc_to_value).collect::<Vec<_>>()})
        })
        .collect();
    Ok(json!({
        "flag": {"gram": gram, "e1": e1, "e2": e2},
        "lambda": exp.lambda.parts,
        "k": exp.k,
        "coeffs": coeffs,
    })
    .to_string())
}

pub fn save_expansion(path: &str, exp: &FourierExpansion) -> Result<()> {
    let text = expansion_to_json(exp)?;
    std::fs::write(path, text).map_err(|e| bad(format!("cannot write {path}: {e}")))
}
