//! Command-line front end: JSON I/O around the orthmf library.

mod io;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use orthmf::lattice::find_isotropic_flag;
use orthmf::schur::{schur_space, split_space, Partition};
use orthmf::{Config, C, Q};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "orthmf", version, about = "vector-valued orthogonal modular form toolkit")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lattice inspection and flag search
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Schur functor spaces
    Rep {
        #[command(subcommand)]
        cmd: RepCmd,
    },
    /// J-filtration tables and Jacobi decompositions
    Jfilt {
        #[command(subcommand)]
        cmd: JfiltCmd,
    },
    /// Tube-domain points and automorphy factors
    Domain {
        #[command(subcommand)]
        cmd: DomainCmd,
    },
    /// Fourier expansion operations
    Fourier {
        #[command(subcommand)]
        cmd: FourierCmd,
    },
    /// Expansion-level operators
    Op {
        #[command(subcommand)]
        cmd: OpCmd,
    },
    /// Petersson metric evaluation
    Metric {
        #[command(subcommand)]
        cmd: MetricCmd,
    },
    /// Vanishing predicates and multiplicity tables
    Check {
        #[command(subcommand)]
        cmd: CheckCmd,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Signature and isotropic flag of a lattice file
    Info {
        #[arg(long)]
        file: String,
        /// height bound for the isotropic vector search
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// dim V(I)_λ for the split form of rank n
    Dim {
        #[command(flatten)]
        lam: LambdaArgs,
    },
    /// SO-restriction data λ̄ and corank
    Restrict {
        #[command(flatten)]
        lam: LambdaArgs,
    },
}

#[derive(Args)]
struct LambdaArgs {
    #[arg(long)]
    n: usize,
    /// partition, comma-separated (empty = trivial)
    #[arg(long, default_value = "")]
    lambda: String,
}

impl LambdaArgs {
    fn partition(&self) -> orthmf::Result<Partition> {
        let parts: Vec<usize> = if self.lambda.trim().is_empty() {
            vec![]
        } else {
            self.lambda
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| orthmf::Error::Invalid(format!("bad part {s:?}")))
                })
                .collect::<orthmf::Result<_>>()?
        };
        Partition::new(parts, self.n)
    }
}

#[derive(Subcommand)]
enum JfiltCmd {
    /// α-table of the J-filtration
    Table {
        #[command(flatten)]
        lam: LambdaArgs,
    },
    /// Scalar Jacobi decomposition target weights
    Decompose {
        #[command(flatten)]
        lam: LambdaArgs,
        #[arg(long)]
        k: i64,
    },
}

#[derive(Args)]
struct PointArgs {
    /// lattice file
    #[arg(long)]
    file: String,
    #[arg(long, default_value_t = 3)]
    bound: i64,
    /// τ as re,im
    #[arg(long)]
    tau: String,
    /// z coordinates re,im (repeat n−2 times)
    #[arg(long)]
    z: Vec<String>,
    /// w as re,im
    #[arg(long)]
    w: String,
}

#[derive(Subcommand)]
enum DomainCmd {
    /// evaluate the period vector ω(Z)
    Omega {
        #[command(flatten)]
        point: PointArgs,
    },
    /// apply an SL2 Jacobi element, print gZ and factor_L
    Sl2 {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
    },
}

#[derive(Subcommand)]
enum FourierCmd {
    /// cone support, integrality, lints
    Validate {
        #[arg(long)]
        file: String,
    },
    /// numeric evaluation at a tube point
    Eval {
        #[arg(long)]
        file: String,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        z: Vec<String>,
        #[arg(long)]
        w: String,
    },
    /// average over the built-in group {id, −id}
    Symmetrize {
        #[arg(long)]
        file: String,
        #[arg(long)]
        out: String,
    },
}

#[derive(Subcommand)]
enum OpCmd {
    Siegel {
        #[arg(long)]
        file: String,
    },
    FjSlice {
        #[arg(long)]
        file: String,
        /// slice index m as p/q
        #[arg(long)]
        m: String,
        #[arg(long)]
        out: Option<String>,
    },
    Restrict {
        #[arg(long)]
        file: String,
        /// sublattice file {"basis": [[...]]}
        #[arg(long)]
        sub: String,
        #[arg(long)]
        out: Option<String>,
    },
    QuasiPullback {
        #[arg(long)]
        file: String,
        #[arg(long)]
        sub: String,
    },
    RankinCohen {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum MetricCmd {
    Eval {
        #[command(flatten)]
        point: PointArgs,
        /// partition, comma-separated (empty = trivial)
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long)]
        k: i64,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    Weights {
        #[command(flatten)]
        lam: LambdaArgs,
        #[arg(long)]
        k: i64,
        /// print verdicts for 0..=k instead of a single k
        #[arg(long)]
        sweep: bool,
    },
    Tensor {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: i64,
    },
}

fn parse_c(s: &str) -> orthmf::Result<C> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(orthmf::Error::Invalid(format!("complex {s:?} is not re,im")));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| orthmf::Error::Invalid(format!("bad real part {s:?}")))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| orthmf::Error::Invalid(format!("bad imaginary part {s:?}")))?;
    Ok(C::new(re, im))
}

fn point_from_args(p: &PointArgs) -> orthmf::Result<orthmf::domain::TubePoint> {
    let lat = io::load_lattice(&p.file)?;
    let flag = find_isotropic_flag(&lat, p.bound)?;
    let tau = parse_c(&p.tau)?;
    let z: Vec<C> = p.z.iter().map(|s| parse_c(s)).collect::<orthmf::Result<_>>()?;
    let w = parse_c(&p.w)?;
    orthmf::domain::TubePoint::new(flag, tau, z, w)
}

fn fmt_c(c: C) -> String {
    format!("{:+.12}{:+.12}i", c.re, c.im)
}

fn run(cli: Cli) -> orthmf::Result<i32> {
    let cfg = Config::from_env();
    let json = cli.format == Format::Json;
    match cli.cmd {
        Cmd::Lattice { cmd: LatticeCmd::Info { file, bound } } => {
            let lat = io::load_lattice(&file)?;
            let flag = find_isotropic_flag(&lat, bound)?;
            flag.validate()?;
            if json {
                println!("{}", io::lattice_info_json(&lat, &flag));
            } else {
                println!("rank      {}", lat.rank);
                println!("signature ({}, {})", lat.signature.0, lat.signature.1);
                println!("e1        {}", io::fmt_qvec(&flag.e1));
                println!("e2        {}", io::fmt_qvec(flag.e2.as_ref().unwrap()));
            }
        }
        Cmd::Rep { cmd } => match cmd {
            RepCmd::Dim { lam } => {
                let p = lam.partition()?;
                let s = schur_space(&split_space(lam.n), &p, &cfg)?;
                if json {
                    println!("{{\"n\": {}, \"lambda\": {:?}, \"dim\": {}}}", lam.n, p.parts, s.dim);
                } else {
                    println!("{}", s.dim);
                }
            }
            RepCmd::Restrict { lam } => {
                let p = lam.partition()?;
                let r = orthmf::schur::so_restriction(&p);
                if json {
                    println!(
                        "{{\"lambda_bar\": {:?}, \"splits\": {}, \"corank\": {}}}",
                        r.lambda_bar,
                        r.splits,
                        p.corank()
                    );
                } else {
                    println!("lambda_bar {:?}", r.lambda_bar);
                    println!("splits     {}", r.splits);
                    println!("corank     {}", p.corank());
                }
            }
        },
        Cmd::Jfilt { cmd } => match cmd {
            JfiltCmd::Table { lam } => {
                let p = lam.partition()?;
                let s = schur_space(&split_space(lam.n), &p, &cfg)?;
                let t = orthmf::jfilt::filtration_table(&s)?;
                if json {
                    let rows: Vec<String> = t
                        .alpha
                        .iter()
                        .map(|(r, a)| format!("{{\"r\": {r}, \"alpha\": {a}}}"))
                        .collect();
                    println!("[{}]", rows.join(", "));
                } else {
                    println!("r     alpha(r)");
                    for (r, a) in &t.alpha {
                        println!("{r:<5} {a}");
                    }
                }
            }
            JfiltCmd::Decompose { lam, k } => {
                let p = lam.partition()?;
                let d = orthmf::jfilt::jacobi_decomposition(&p, k, &cfg)?;
                if json {
                    let rows: Vec<String> = d
                        .components
                        .iter()
                        .map(|(w, m)| format!("{{\"weight\": {w}, \"mult\": {m}}}"))
                        .collect();
                    println!(
                        "{{\"vanishes\": {}, \"components\": [{}]}}",
                        d.vanishes_all,
                        rows.join(", ")
                    );
                } else {
                    for (w, m) in &d.components {
                        println!("weight {w:<4} multiplicity {m}");
                    }
                    if d.vanishes_all {
                        println!("all components vanish: k + lambda_1 < n/2 - 1");
                    }
                }
            }
        },
        Cmd::Domain { cmd } => match cmd {
            DomainCmd::Omega { point } => {
                let zp = point_from_args(&point)?;
                let om = orthmf::domain::omega_of(&zp);
                if json {
                    let v: Vec<String> =
                        om.iter().map(|c| format!("[{}, {}]", c.re, c.im)).collect();
                    println!("[{}]", v.join(", "));
                } else {
                    for c in om {
                        println!("{}", fmt_c(c));
                    }
                }
            }
            DomainCmd::Sl2 { point, a, b, c, d } => {
                let zp = point_from_args(&point)?;
                let el = orthmf::domain::JacobiElement::Sl2 {
                    a: a.into(),
                    b: b.into(),
                    c: c.into(),
                    d: d.into(),
                };
                el.validate(&zp.flag)?;
                let amb = orthmf::domain::to_ambient(&el, &zp.flag)?;
                let gz = orthmf::domain::jacobi_action(&el, &zp)?;
                let fl = orthmf::domain::factor_l(&amb, &zp)?;
                if json {
                    println!(
                        "{{\"tau\": [{}, {}], \"w\": [{}, {}], \"factor_l\": [{}, {}]}}",
                        gz.tau.re, gz.tau.im, gz.w.re, gz.w.im, fl.re, fl.im
                    );
                } else {
                    println!("tau'     {}", fmt_c(gz.tau));
                    for zc in &gz.z {
                        println!("z'       {}", fmt_c(*zc));
                    }
                    println!("w'       {}", fmt_c(gz.w));
                    println!("factor_L {}", fmt_c(fl));
                }
            }
        },
        Cmd::Fourier { cmd } => match cmd {
            FourierCmd::Validate { file } => {
                let exp = io::load_expansion(&file, &cfg)?;
                let rep = orthmf::fourier::validate(&exp);
                if json {
                    let lints: Vec<String> = rep.lints.iter().map(|l| format!("{l:?}")).collect();
                    println!(
                        "{{\"holomorphic\": {}, \"cusp\": {}, \"integral\": {}, \"lints\": [{}]}}",
                        rep.holomorphic,
                        rep.cusp,
                        rep.integral,
                        lints.join(", ")
                    );
                } else {
                    println!("holomorphic {}", rep.holomorphic);
                    println!("cusp        {}", rep.cusp);
                    println!("integral    {}", rep.integral);
                    for l in &rep.lints {
                        println!("lint: {l}");
                    }
                }
                if !rep.lints.is_empty() {
                    return Ok(1);
                }
            }
            FourierCmd::Eval { file, tau, z, w } => {
                let exp = io::load_expansion(&file, &cfg)?;
                let tau = parse_c(&tau)?;
                let zc: Vec<C> = z.iter().map(|s| parse_c(s)).collect::<orthmf::Result<_>>()?;
                let w = parse_c(&w)?;
                let zp = orthmf::domain::TubePoint::new(exp.flag.clone(), tau, zc, w)?;
                let v = exp.evaluate(&zp);
                if json {
                    let out: Vec<String> =
                        v.iter().map(|c| format!("[{}, {}]", c.re, c.im)).collect();
                    println!("[{}]", out.join(", "));
                } else {
                    for c in v {
                        println!("{}", fmt_c(c));
                    }
                }
            }
            FourierCmd::Symmetrize { file, out } => {
                let exp = io::load_expansion(&file, &cfg)?;
                let n = exp.flag.n();
                let group = vec![
                    orthmf::fourier::GammaI::identity(n),
                    orthmf::fourier::GammaI::minus_id(n),
                ];
                let sym = orthmf::fourier::symmetrize(&exp, &group)?;
                io::save_expansion(&out, &sym)?;
                println!("wrote {} coefficients to {}", sym.coeffs.len(), out);
            }
        },
        Cmd::Op { cmd } => match cmd {
            OpCmd::Siegel { file } => {
                let exp = io::load_expansion(&file, &cfg)?;
                let ray = orthmf::operators::siegel_operator(&exp, &cfg)?;
                if json {
                    let rows: Vec<String> = ray
                        .coeffs
                        .iter()
                        .map(|(t, a)| {
                            format!("{{\"t\": \"{}\", \"a\": {}}}", t, io::cyc_vec_json(a))
                        })
                        .collect();
                    println!(
                        "{{\"reduced_weight\": {}, \"target_dim\": {}, \"coeffs\": [{}]}}",
                        ray.reduced_weight,
                        ray.target_dim,
                        rows.join(", ")
                    );
                } else {
                    println!("reduced weight {}", ray.reduced_weight);
                    println!("target dim     {}", ray.target_dim);
                    for (t, a) in &ray.coeffs {
                        println!("t = {t}: {}", io::fmt_cyc_vec(a));
                    }
                }
            }
            OpCmd::FjSlice { file, m, out } => {
                let exp = io::load_expansion(&file, &cfg)?;
                let mq: Q = io::parse_rational(&m)?;
                let slice = orthmf::operators::fourier_jacobi_slice(&exp, &mq)?;
                println!("m = {m}: {} coefficients, holomorphy {}", slice.expansion.coeffs.len(), slice.holomorphy_ok());
                if let Some(out) = out {
                    io::save_expansion(&out, &slice.expansion)?;
                    println!("wrote {out}");
                }
            }
            OpCmd::Restrict { file, sub, out } => {
                let exp = io::load_expansion(&file, &cfg)?;
                let sublat = io::load_sublattice(&sub, exp.flag.lattice.clone())?;
                let r = orthmf::operators::restrict(&exp, &sublat)?;
                println!("restricted support {}", r.coeffs.len());
                if let Some(out) = out {
                    io::save_expansion(&out, &r)?;
                    println!("wrote {out}");
                }
            }
            OpCmd::QuasiPullback { file, sub } => {
                let exp = io::load_expansion(&file, &cfg)?;
                let sublat = io::load_sublattice(&sub, exp.flag.lattice.clone())?;
                let (nu, slices) = orthmf::operators::quasi_pullback(&exp, &sublat, &cfg)?;
                println!("vanishing order {nu}");
                for s in &slices {
                    println!("degrees {:?}: {} coefficients", s.degrees, s.expansion.coeffs.len());
                }
            }
            OpCmd::RankinCohen { f, g, out } => {
                let fe = io::load_expansion(&f, &cfg)?;
                let ge = io::load_expansion(&g, &cfg)?;
                let br = orthmf::operators::rankin_cohen(&fe, &ge, &cfg)?;
                println!("bracket weight (St, {}), support {}", br.k, br.coeffs.len());
                if let Some(out) = out {
                    io::save_expansion(&out, &br)?;
                    println!("wrote {out}");
                }
            }
        },
        Cmd::Metric { cmd: MetricCmd::Eval { point, lambda, k } } => {
            let zp = point_from_args(&point)?;
            let lam = LambdaArgs { n: zp.flag.n(), lambda };
            let p = lam.partition()?;
            let space = orthmf::schur::schur_space_over(&zp.flag.vi_gram(), &p, &cfg)?;
            let rep = orthmf::petersson::metric_report(&zp, &space, k);
            if json {
                println!(
                    "{{\"gram_l\": {}, \"volume_factor\": {}, \"gram_elk_dim\": {}}}",
                    rep.gram_l,
                    rep.volume_factor,
                    rep.gram_elk.len()
                );
            } else {
                println!("gram_L        {:.12}", rep.gram_l);
                println!("volume factor {:.12e}", rep.volume_factor);
                println!("gram_Elk ({0}x{0}):", rep.gram_elk.len());
                for row in &rep.gram_elk {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x:>14.6}")).collect();
                    println!("  {}", cells.join(" "));
                }
            }
        }
        Cmd::Check { cmd } => match cmd {
            CheckCmd::Weights { lam, k, sweep } => {
                let p = lam.partition()?;
                let ks: Vec<i64> = if sweep { (0..=k).collect() } else { vec![k] };
                if !json {
                    println!("k     m_vanish cusp_vanish l2");
                }
                let mut rows = Vec::new();
                for kk in ks {
                    let v = orthmf::petersson::weight_verdict(&p, kk, lam.n);
                    let l2 = match v.l2_class {
                        orthmf::petersson::L2Class::CuspIffL2 => "cusp_iff_L2",
                        orthmf::petersson::L2Class::AlwaysL2 => "always_L2",
                        orthmf::petersson::L2Class::Indeterminate => "indeterminate",
                    };
                    if json {
                        rows.push(format!(
                            "{{\"k\": {kk}, \"m_vanish\": {}, \"cusp_vanish\": {}, \"l2\": \"{l2}\"}}",
                            v.m_vanish, v.cusp_vanish
                        ));
                    } else {
                        println!("{kk:<5} {:<8} {:<11} {l2}", v.m_vanish, v.cusp_vanish);
                    }
                }
                if json {
                    println!("[{}]", rows.join(", "));
                }
            }
            CheckCmd::Tensor { n, k } => {
                let t = orthmf::petersson::holomorphic_tensor_table(n, k)?;
                if t.is_empty() {
                    println!("vanishes");
                } else {
                    for s in &t {
                        let name = if s.lambda_parts.is_empty() {
                            format!("M_{k}")
                        } else {
                            format!("M_(wedge^{}, {k})", s.lambda_parts.len())
                        };
                        println!("{name} multiplicity {}", s.multiplicity);
                    }
                }
            }
        },
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code.to_u8().unwrap_or(0)),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
