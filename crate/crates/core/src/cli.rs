//! Command-line front end.
//!
//! Every subcommand builds one JSON value. `--output json` prints it as is and
//! `--output text` prints the same value flattened into aligned
//! `path value` lines, so the two renderings carry identical numbers.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bounds::{self, CurveClassP1n};
use crate::certificate::{FeasibilityCertificate, Verdict};
use crate::error::{Error, Result};
use crate::k3::{self, HKDescriptor, K3Descriptor, MapHypothesis, WindowKind};
use crate::lattice::{self, IntegralLattice, SublatticeEmbedding};
use crate::matrix::IntMatrix;
use crate::report::{self, Dichotomy, InvariantTriple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "irrlat", version, about = "Certified bounds on birational invariants of K3 and hyper-Kähler manifolds")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "IRRLAT_OUTPUT", default_value_t = OutputFormat::Text)]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower and upper bounds on fibering genus.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Integral lattice operations on JSON input.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Obstructions to dominant rational maps between K3 surfaces.
    #[command(subcommand)]
    K3(K3Cmd),
    /// Relations among Irr, Fibgon and Fibgen.
    #[command(subcommand)]
    Report(ReportCmd),
    /// Randomized consistency sweep.
    #[command(hide = true)]
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: u32,
    },
}

#[derive(Debug, Subcommand)]
enum BoundCmd {
    /// Lower bound on Fibgen of a hyper-Kähler 2n-fold.
    FibgenHk {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        b2tr: u64,
        #[arg(long)]
        compare_voisin: bool,
    },
    /// Least genus of a curve whose Jacobian carries the required Hodge structure.
    GenusMin {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        brute: bool,
    },
    /// Genus bound for curves of class (d, ..., d) in (P^1)^n.
    GenusP1n {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        recursive: bool,
    },
}

#[derive(Debug, Subcommand)]
enum LatticeCmd {
    /// Discriminant of a lattice `{"rank", "gram"}`.
    Disc {
        #[arg(long)]
        input: PathBuf,
    },
    /// Index of a sublattice `{"ambient", "coords"}`.
    Index {
        #[arg(long)]
        input: PathBuf,
    },
    /// Saturated orthogonal complement of a sublattice.
    Complement {
        #[arg(long)]
        input: PathBuf,
    },
    /// Discriminant/index identity for `{"ambient", "e", "k"?}`.
    Glue {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum K3Cmd {
    /// Necessary conditions for a map S_D -> S_D' of degree deg.
    Feasible {
        #[arg(long)]
        src_d: BigUint,
        #[arg(long)]
        tgt_d: BigUint,
        #[arg(long)]
        deg: BigUint,
    },
    /// Targets D' in [2, max] not ruled out for a given source and degree.
    Sweep {
        #[arg(long)]
        src_d: BigUint,
        #[arg(long)]
        deg: BigUint,
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Window for |disc Pic(X) / disc Pic(X')|.
    Window {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        b2tr: u32,
        #[arg(long)]
        deg: BigUint,
        #[arg(long)]
        k3: bool,
        #[arg(long, default_value_t = 1)]
        rho: u32,
        #[arg(long, requires = "disc_tgt", allow_hyphen_values = true)]
        disc_src: Option<BigInt>,
        #[arg(long, requires = "disc_src", allow_hyphen_values = true)]
        disc_tgt: Option<BigInt>,
    },
}

#[derive(Debug, Subcommand)]
enum ReportCmd {
    /// Integer window for Fibgen from the Picard generator.
    ElWindow {
        #[arg(long)]
        d: BigUint,
    },
    /// Which alternative of the Irr/Fibgon/Fibgen dichotomy holds.
    Dichotomy {
        #[arg(long)]
        irr: u64,
        #[arg(long)]
        fibgon: u64,
        #[arg(long)]
        fibgen: u64,
    },
    /// Link-by-link check of the inequality chain.
    Chain {
        #[arg(long)]
        fibgon: u64,
        #[arg(long)]
        deg: u64,
        #[arg(long)]
        d_src: BigUint,
        #[arg(long)]
        d_tgt: BigUint,
        #[arg(long)]
        fibgen: u64,
    },
    /// Lower bound on Fibgon from Irr and the Picard generator.
    FibgonFloor {
        #[arg(long)]
        d: BigUint,
        #[arg(long)]
        irr: u64,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

struct Reply {
    body: Value,
    code: i32,
    diagnostic: Option<String>,
}

impl Reply {
    fn holds(body: Value) -> Self {
        Reply {
            body,
            code: EXIT_HOLDS,
            diagnostic: None,
        }
    }

    fn with_verdict(body: Value, ok: bool) -> Self {
        Reply {
            body,
            code: if ok { EXIT_HOLDS } else { EXIT_FAILS },
            diagnostic: None,
        }
    }

    fn certificate(mut body: Map<String, Value>, cert: &FeasibilityCertificate) -> Result<Self> {
        body.insert("certificate".into(), to_value(cert)?);
        let body = Value::Object(body);
        Ok(match cert.verdict {
            Verdict::Feasible => Reply::holds(body),
            Verdict::Infeasible => Reply::with_verdict(body, false),
            Verdict::HypothesisError => Reply {
                body,
                code: EXIT_ERROR,
                diagnostic: Some(
                    Error::Hypothesis(cert.note.clone().unwrap_or_default()).to_string(),
                ),
            },
        })
    }
}

/// Parses `argv` (including the program name) and executes it.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: EXIT_HOLDS,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(reply) => Outcome {
            code: reply.code,
            stdout: render(&reply.body, cli.output),
            stderr: reply.diagnostic.map(|d| d + "\n").unwrap_or_default(),
        },
        Err(e) => Outcome {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("{e}\n"),
        },
    }
}

pub fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => render_text(v),
    }
}

/// Flattens `v` into `(path, value)` rows. Object keys and array positions
/// are joined with `.`; arrays of scalars stay on one row as `[a, b]`.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut rows = Vec::new();
    flatten_into(v, String::new(), &mut rows);
    rows
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(_) | Value::Object(_) => None,
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn flatten_into(v: &Value, path: String, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten_into(child, join(&path, k), rows);
            }
        }
        Value::Array(items) => {
            let flat: Option<Vec<String>> = items.iter().map(scalar).collect();
            match flat {
                Some(parts) => rows.push((path, format!("[{}]", parts.join(", ")))),
                None => {
                    for (i, child) in items.iter().enumerate() {
                        flatten_into(child, join(&path, &i.to_string()), rows);
                    }
                }
            }
        }
        _ => rows.push((path, scalar(v).expect("scalar"))),
    }
}

fn render_text(v: &Value) -> String {
    let rows = flatten(v);
    let width = rows.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (p, val) in rows {
        let _ = writeln!(out, "{p:<width$}  {val}");
    }
    out
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn to_map<T: Serialize>(x: &T) -> Result<Map<String, Value>> {
    match to_value(x)? {
        Value::Object(m) => Ok(m),
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            Ok(m)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn dispatch(cmd: Command) -> Result<Reply> {
    match cmd {
        Command::Bound(b) => bound(b),
        Command::Lattice(l) => lattice_cmd(l),
        Command::K3(k) => k3_cmd(k),
        Command::Report(r) => report_cmd(r),
        Command::Selftest { seed, cases } => Ok(selftest(seed, cases)),
    }
}

fn bound(cmd: BoundCmd) -> Result<Reply> {
    match cmd {
        BoundCmd::FibgenHk {
            n,
            b2tr,
            compare_voisin,
        } => {
            let r = bounds::fibgen_report(n, b2tr, compare_voisin)?;
            Ok(Reply::holds(to_value(&r)?))
        }
        BoundCmd::GenusMin { n, brute } => {
            let closed = bounds::min_genus_closed_form(n)?;
            let mut body = Map::new();
            body.insert("n".into(), json!(n.to_string()));
            body.insert("value".into(), json!(closed.to_string()));
            let mut agrees = true;
            if brute {
                let r = bounds::min_genus_bruteforce(n)?;
                agrees = r.value == BigInt::from(closed);
                body.insert("bruteforce".into(), to_value(&r)?);
                body.insert("agrees".into(), json!(agrees));
            }
            Ok(Reply::with_verdict(Value::Object(body), agrees))
        }
        BoundCmd::GenusP1n { n, d, recursive } => {
            let c = CurveClassP1n::new(n, d)?;
            let direct = bounds::max_genus_p1n_bound(c);
            let mut body = Map::new();
            body.insert("n".into(), json!(n.to_string()));
            body.insert("d".into(), json!(d.to_string()));
            body.insert("value".into(), json!(direct.to_string()));
            let mut agrees = true;
            if recursive {
                let r = bounds::max_genus_p1n_recursive(c);
                agrees = r.value == BigInt::from(direct);
                body.insert("recursive".into(), to_value(&r)?);
                body.insert("agrees".into(), json!(agrees));
            }
            Ok(Reply::with_verdict(Value::Object(body), agrees))
        }
    }
}

#[derive(serde::Deserialize)]
struct GlueInput {
    ambient: IntegralLattice,
    #[serde(with = "crate::wire::dec_matrix")]
    e: Vec<Vec<BigInt>>,
    #[serde(default, deserialize_with = "crate::wire::dec_opt_matrix::deserialize")]
    k: Option<Vec<Vec<BigInt>>>,
}

fn embed(ambient: &IntegralLattice, rows: Vec<Vec<BigInt>>) -> Result<SublatticeEmbedding> {
    let coords = IntMatrix::from_rows_with_cols(rows, ambient.rank())?;
    SublatticeEmbedding::new(ambient.clone(), coords)
}

fn lattice_cmd(cmd: LatticeCmd) -> Result<Reply> {
    match cmd {
        LatticeCmd::Disc { input } => {
            let l: IntegralLattice = read_json(&input)?;
            Ok(Reply::holds(json!({
                "rank": l.rank(),
                "discriminant": lattice::discriminant(&l).to_string(),
                "nondegenerate": l.is_nondegenerate(),
            })))
        }
        LatticeCmd::Index { input } => {
            let emb: SublatticeEmbedding = read_json(&input)?;
            Ok(Reply::holds(json!({
                "rank": emb.rank(),
                "ambient_rank": emb.ambient().rank(),
                "index": to_value(&lattice::sublattice_index(&emb))?,
                "primitive": emb.is_primitive(),
            })))
        }
        LatticeCmd::Complement { input } => {
            let emb: SublatticeEmbedding = read_json(&input)?;
            let k = lattice::orthogonal_complement(emb.ambient(), &emb)?;
            let induced = lattice::induced_gram(&k);
            Ok(Reply::holds(json!({
                "rank": k.rank(),
                "coords": to_value(&k)?["coords"].clone(),
                "induced": to_value(&induced)?,
                "discriminant": lattice::discriminant(&induced).to_string(),
            })))
        }
        LatticeCmd::Glue { input } => {
            let g: GlueInput = read_json(&input)?;
            let e = embed(&g.ambient, g.e)?;
            let k = match g.k {
                Some(rows) => embed(&g.ambient, rows)?,
                None => lattice::orthogonal_complement(&g.ambient, &e)?,
            };
            let cert = lattice::glue_index_identity(&g.ambient, &k, &e)?;
            let mut body = Map::new();
            body.insert("k".into(), to_value(&k)?["coords"].clone());
            body.insert("e".into(), to_value(&e)?["coords"].clone());
            body.insert(
                "disc_l".into(),
                json!(lattice::discriminant(&g.ambient).to_string()),
            );
            body.insert(
                "disc_k".into(),
                json!(lattice::discriminant(&lattice::induced_gram(&k)).to_string()),
            );
            body.insert(
                "disc_e".into(),
                json!(lattice::discriminant(&lattice::induced_gram(&e)).to_string()),
            );
            Reply::certificate(body, &cert)
        }
    }
}

fn k3_cmd(cmd: K3Cmd) -> Result<Reply> {
    match cmd {
        K3Cmd::Feasible { src_d, tgt_d, deg } => {
            let src = K3Descriptor::new(src_d.clone())?;
            let tgt = K3Descriptor::new(tgt_d.clone())?;
            let h = MapHypothesis::new(deg.clone())?;
            let cert = k3::k3_map_feasible(&src, &tgt, &h);
            let mut body = Map::new();
            body.insert("src_d".into(), json!(src_d.to_string()));
            body.insert("tgt_d".into(), json!(tgt_d.to_string()));
            body.insert("deg".into(), json!(deg.to_string()));
            body.insert(
                "index_squared".into(),
                json!(k3::k3_index_squared(&src, &tgt, &h).to_string()),
            );
            body.insert(
                "index".into(),
                match k3::k3_index(&src, &tgt, &h) {
                    Some(i) => json!(i.to_string()),
                    None => Value::Null,
                },
            );
            Reply::certificate(body, &cert)
        }
        K3Cmd::Sweep {
            src_d,
            deg,
            max,
            jobs,
        } => {
            let src = K3Descriptor::new(src_d.clone())?;
            let h = MapHypothesis::new(deg.clone())?;
            let hits = k3::enumerate_feasible_targets(&src, &h, max, jobs)?;
            let targets: Vec<Value> = hits
                .iter()
                .map(|t| {
                    json!({
                        "d": t.target.d_param().to_string(),
                        "index": t.index.to_string(),
                    })
                })
                .collect();
            Ok(Reply::holds(json!({
                "src_d": src_d.to_string(),
                "deg": deg.to_string(),
                "max": max.to_string(),
                "count": hits.len().to_string(),
                "targets": targets,
            })))
        }
        K3Cmd::Window {
            n,
            b2tr,
            deg,
            k3,
            rho,
            disc_src,
            disc_tgt,
        } => {
            let h = MapHypothesis::new(deg.clone())?;
            let kind = if k3 { WindowKind::K3 } else { WindowKind::Hk };
            let window = if k3 {
                if n != 1 {
                    return Err(Error::Hypothesis(format!(
                        "the surface window needs n = 1, got n = {n}"
                    )));
                }
                k3::k3_window(rho, b2tr, &h)
            } else {
                k3::hk_window(n, b2tr, &h)?
            };
            let mut body = Map::new();
            body.insert("kind".into(), to_value(&kind)?);
            body.insert("n".into(), json!(n.to_string()));
            body.insert("b2tr".into(), json!(b2tr.to_string()));
            if k3 {
                body.insert("rho".into(), json!(rho.to_string()));
            }
            body.insert("deg".into(), json!(deg.to_string()));
            body.insert("lower".into(), to_value(&window.lower)?);
            body.insert("upper".into(), to_value(&window.upper)?);
            body.insert(
                "rescale".into(),
                to_value(&k3::bbf_pullback_rescale(n, &h)?)?,
            );
            match (disc_src, disc_tgt) {
                (Some(a), Some(b)) => {
                    let src = HKDescriptor::new(n, b2tr, rho, a)?;
                    let tgt = HKDescriptor::new(n, b2tr, rho, b)?;
                    let cert = k3::check_disc_ratio(&src, &tgt, &h, kind);
                    Reply::certificate(body, &cert)
                }
                _ => Ok(Reply::holds(Value::Object(body))),
            }
        }
    }
}

fn report_cmd(cmd: ReportCmd) -> Result<Reply> {
    match cmd {
        ReportCmd::ElWindow { d } => {
            let w = report::ein_lazarsfeld_window(&d)?;
            let mut body = Map::new();
            body.insert(
                "window".into(),
                json!([w.lo.to_string(), w.hi.to_string()]),
            );
            body.extend(to_map(&w)?);
            Ok(Reply::holds(Value::Object(body)))
        }
        ReportCmd::Dichotomy {
            irr,
            fibgon,
            fibgen,
        } => {
            let t = InvariantTriple::new(irr, fibgon, fibgen, None)?;
            let r = report::dichotomy_report(&t);
            Ok(Reply::with_verdict(
                to_value(&r)?,
                r.outcome != Dichotomy::Violation,
            ))
        }
        ReportCmd::Chain {
            fibgon,
            deg,
            d_src,
            d_tgt,
            fibgen,
        } => {
            let cert = report::chain_check(fibgon, deg, &d_src, &d_tgt, fibgen);
            let mut body = Map::new();
            body.insert("fibgon".into(), json!(fibgon.to_string()));
            body.insert("deg".into(), json!(deg.to_string()));
            body.insert("d_src".into(), json!(d_src.to_string()));
            body.insert("d_tgt".into(), json!(d_tgt.to_string()));
            body.insert("fibgen".into(), json!(fibgen.to_string()));
            Reply::certificate(body, &cert)
        }
        ReportCmd::FibgonFloor { d, irr } => {
            let r = report::fibgon_floor_report(&d, irr)?;
            Ok(Reply::holds(to_value(&r)?))
        }
    }
}

fn random_lattice(rng: &mut StdRng, rank: usize) -> IntegralLattice {
    loop {
        let mut g = IntMatrix::zeros(rank, rank);
        for i in 0..rank {
            for j in i..rank {
                let x = BigInt::from(rng.gen_range(-4i64..=4));
                g[(i, j)] = x.clone();
                g[(j, i)] = x;
            }
        }
        let l = IntegralLattice::new(g).expect("symmetric by construction");
        if l.is_nondegenerate() {
            return l;
        }
    }
}

fn random_embedding(rng: &mut StdRng, ambient: &IntegralLattice, rows: usize) -> SublatticeEmbedding {
    loop {
        let data: Vec<Vec<BigInt>> = (0..rows)
            .map(|_| {
                (0..ambient.rank())
                    .map(|_| BigInt::from(rng.gen_range(-3i64..=3)))
                    .collect()
            })
            .collect();
        if let Ok(e) = embed(ambient, data) {
            return e;
        }
    }
}

fn selftest(seed: u64, cases: u32) -> Reply {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures: Vec<String> = Vec::new();
    for _ in 0..cases {
        let n = rng.gen_range(1u64..=5000);
        let closed = bounds::min_genus_closed_form(n).expect("n >= 1");
        let brute = bounds::min_genus_bruteforce(n).expect("n >= 1");
        if brute.value != BigInt::from(closed) {
            failures.push(format!("genus n = {n}"));
        }

        let rank = rng.gen_range(2usize..=4);
        let l = random_lattice(&mut rng, rank);
        let rows = rng.gen_range(1..rank);
        let e = random_embedding(&mut rng, &l, rows);
        let glue_ok = lattice::orthogonal_complement(&l, &e)
            .and_then(|k| lattice::glue_index_identity(&l, &k, &e))
            .map(|c| c.is_feasible())
            .unwrap_or(false);
        if !glue_ok {
            failures.push(format!("glue {l} / {}", e.coords()));
        }

        let a = rng.gen_range(2u64..=400);
        let b = rng.gen_range(2u64..=400);
        let h = MapHypothesis::new(rng.gen_range(1u64..=4)).expect("deg >= 1");
        let (sa, sb) = (
            K3Descriptor::new(a).expect("a >= 2"),
            K3Descriptor::new(b).expect("b >= 2"),
        );
        let ratio_ok = |c: FeasibilityCertificate| c.checks[0].pass && c.checks[1].pass;
        if ratio_ok(k3::k3_map_feasible(&sa, &sb, &h)) != ratio_ok(k3::k3_map_feasible(&sb, &sa, &h)) {
            failures.push(format!("ratio window symmetry D = {a}, D' = {b}"));
        }

        let irr = rng.gen_range(2u64..=50);
        let fibgon = rng.gen_range(2..=irr);
        let fibgen = rng.gen_range(0u64..=1 << 40);
        let t = InvariantTriple::new(irr, fibgon, fibgen, None).expect("valid triple");
        let outcome = report::dichotomy_certificate(&t);
        let g2 = BigUint::from(fibgen).pow(2u32);
        let f21 = BigUint::from(fibgon).pow(21u32);
        let expect = match (irr == fibgon, g2 <= f21) {
            (true, true) => Dichotomy::Both,
            (true, false) => Dichotomy::CaseA,
            (false, true) => Dichotomy::CaseB,
            (false, false) => Dichotomy::Violation,
        };
        if outcome != expect {
            failures.push(format!("dichotomy ({irr}, {fibgon}, {fibgen})"));
        }
    }
    let ok = failures.is_empty();
    Reply::with_verdict(
        json!({
            "seed": seed.to_string(),
            "cases": cases.to_string(),
            "failures": failures,
            "passed": ok,
        }),
        ok,
    )
}
