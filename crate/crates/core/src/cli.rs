//! The `fockc` command line.
//!
//! Symbols come from a JSON file or a built-in constructor:
//! `moebius(l1,l2,...)`, `moebius(0.5;n=3)`, `unitary([[0,1],[1,0]])`,
//! `scale(c;n=2)`, `swap`, `lft(a,b,c,d)` and `auto(l1,...;[[..]])`.
//! Complex entries are written `0.5`, `-0.2i`, `0.1+0.2i`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::{json, Value};

use crate::compop::{self, build_matrix, BuildOptions};
use crate::drury;
use crate::dynamics::{self, ClassifyOptions, Kind, LinearFractional, ScalarSelfMap};
use crate::error::{Error, Result};
use crate::fock::{self, Side};
use crate::formats;
use crate::moebius::{AutomorphismSpec, MoebiusParams};
use crate::sampling::rng;
use crate::selftest;
use crate::series::{default_outer_cap, SymbolTuple};
use crate::spectra;
use crate::C64;

#[derive(Clone, Debug, Parser, Serialize)]
#[command(name = "fockc", version, about = "Composition operators on the full Fock space")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Symbol file (JSON) or built-in constructor.
    #[arg(long, global = true)]
    pub symbol: Option<String>,

    /// Truncation degree D.
    #[arg(long, global = true)]
    pub degree: Option<usize>,

    /// Number of outer terms kept when composing series.
    #[arg(long, global = true)]
    pub outer_cap: Option<usize>,

    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Sample points (norm, drury) or randomized cases (selftest).
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Report path; stdout when absent. A `.jsonl` suffix selects JSON Lines.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub mode: Option<SpectrumMode>,

    /// Product cap (spectrum) or largest k (essnorm).
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    /// Iterates for `radius`.
    #[arg(long, global = true)]
    pub steps: Option<usize>,

    /// Binary matrix dump (FOCKMAT1, or SYMFMAT1 for drury).
    #[arg(long, global = true)]
    pub matrix_out: Option<PathBuf>,

    /// Dense column-major text dump of the truncated left shifts.
    #[arg(long, global = true)]
    pub dump_shifts: Option<PathBuf>,

    /// Skip the self-map plausibility check.
    #[arg(long, global = true, default_value_t = false)]
    pub unchecked: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Largest singular value of the truncated operator with its bounds.
    Norm,
    /// Spectra: compact, filtration, schroeder or automorphism.
    Spectrum,
    /// Elliptic, parabolic or hyperbolic.
    Classify,
    /// Spectral radius from the orbit of 0.
    Radius,
    /// `||C P_k||` for k up to the cap.
    Essnorm,
    /// Hilbert-Schmidt sum of the coefficients of all `phi_alpha`.
    Hs,
    /// Emit the series of a Möbius automorphism.
    Moebius,
    /// Compression to the symmetric Fock space.
    Drury,
    /// Randomized invariant suite.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMode {
    Compact,
    Filtration,
    Schroeder,
    Automorphism,
}

/// A parsed `--symbol`.
#[derive(Clone, Debug)]
pub enum SymbolSource {
    Series(SymbolTuple),
    Moebius(MoebiusParams),
    Automorphism(AutomorphismSpec),
    Lft(LinearFractional),
}

impl SymbolSource {
    pub fn n(&self) -> usize {
        match self {
            SymbolSource::Series(s) => s.n(),
            SymbolSource::Moebius(m) => m.n(),
            SymbolSource::Automorphism(a) => a.n(),
            SymbolSource::Lft(_) => 1,
        }
    }

    /// Series form, materialized up to `degree` where it is not already a series.
    pub fn to_symbol(&self, degree: usize) -> Result<SymbolTuple> {
        match self {
            SymbolSource::Series(s) => Ok(if s.degree() > degree { s.truncate(degree) } else { s.clone() }),
            SymbolSource::Moebius(m) => m.symbol(degree),
            SymbolSource::Automorphism(a) => a.symbol(degree),
            SymbolSource::Lft(l) => l.to_symbol(degree),
        }
    }

    pub fn scalar_map(&self) -> &dyn ScalarSelfMap {
        match self {
            SymbolSource::Series(s) => s,
            SymbolSource::Moebius(m) => m,
            SymbolSource::Automorphism(a) => a,
            SymbolSource::Lft(l) => l,
        }
    }

    pub fn automorphism(&self) -> Result<AutomorphismSpec> {
        match self {
            SymbolSource::Automorphism(a) => Ok(a.clone()),
            SymbolSource::Moebius(m) => AutomorphismSpec::new(m.lambda().to_vec(), DMatrix::identity(m.n(), m.n())),
            _ => Err(Error::Precondition(
                "an automorphism is given by moebius(..), unitary(..), auto(..) or an automorphism JSON file".into(),
            )),
        }
    }
}

/// Parses `0.5`, `-2i`, `i`, `0.1-0.2i`, `1e-3+4i`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot read {s:?} as a complex number"));
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => num(x),
    };
    match split {
        Some(k) => Ok(C64::new(num(&body[..k])?, imag(&body[k..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

fn parse_list(s: &str) -> Result<Vec<C64>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(parse_complex).collect()
}

fn parse_matrix(s: &str) -> Result<DMatrix<C64>> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix("[[")
        .and_then(|x| x.strip_suffix("]]"))
        .ok_or_else(|| Error::Parse(format!("expected [[..],..] in {s:?}")))?;
    let rows = inner.split("],[").map(parse_list).collect::<Result<Vec<_>>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("matrix {s:?} is not square")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Splits `args;n=3` into the argument text and an optional `n`.
fn split_n(args: &str) -> Result<(&str, Option<usize>)> {
    match args.rsplit_once(';') {
        Some((head, tail)) if tail.trim().starts_with("n=") => {
            let n = tail.trim()[2..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator count in {tail:?}")))?;
            Ok((head, Some(n)))
        }
        _ => Ok((args, None)),
    }
}

fn broadcast(vals: Vec<C64>, n: Option<usize>, what: &str) -> Result<Vec<C64>> {
    match n {
        None => Ok(vals),
        Some(n) if vals.len() == n => Ok(vals),
        Some(n) if vals.len() == 1 => {
            // a single value fills the first coordinate
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[0] = vals[0];
            Ok(v)
        }
        Some(n) => Err(Error::Parse(format!("{what} has {} entries but n = {n}", vals.len()))),
    }
}

/// Default degree of materialized built-in symbols.
pub const BUILTIN_DEGREE: usize = 8;

pub fn parse_symbol_source(spec: &str, degree: usize) -> Result<SymbolSource> {
    let t = spec.trim();
    let call = |name: &str| -> Option<&str> { t.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')') };
    if t == "swap" {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|x| C64::new(x, 0.0)));
        return Ok(SymbolSource::Series(SymbolTuple::linear(&m, degree)?));
    }
    if let Some(a) = call("moebius") {
        let (head, n) = split_n(a)?;
        let lambda = broadcast(parse_list(head)?, n, "lambda")?;
        return Ok(SymbolSource::Moebius(MoebiusParams::new(&lambda)?));
    }
    if let Some(a) = call("unitary") {
        let u = parse_matrix(a)?;
        let n = u.nrows();
        return Ok(SymbolSource::Automorphism(AutomorphismSpec::new(vec![C64::new(0.0, 0.0); n], u)?));
    }
    if let Some(a) = call("auto") {
        let (head, u) = a
            .split_once(';')
            .ok_or_else(|| Error::Parse("auto(l1,..;[[..]]) needs a unitary".into()))?;
        return Ok(SymbolSource::Automorphism(AutomorphismSpec::new(parse_list(head)?, parse_matrix(u)?)?));
    }
    if let Some(a) = call("scale") {
        let (head, n) = split_n(a)?;
        let c = parse_complex(head)?;
        let m = DMatrix::from_diagonal_element(n.unwrap_or(1), n.unwrap_or(1), c);
        return Ok(SymbolSource::Series(SymbolTuple::linear(&m, degree)?));
    }
    if let Some(a) = call("lft") {
        let v = parse_list(a)?;
        if v.len() != 4 {
            return Err(Error::Parse("lft(a,b,c,d) takes four entries".into()));
        }
        return Ok(SymbolSource::Lft(LinearFractional::new(v[0], v[1], v[2], v[3])?));
    }
    let text = fs::read_to_string(t)?;
    let v: Value = formats::parse(&text)?;
    if v.get("lambda").is_some() {
        Ok(SymbolSource::Automorphism(formats::automorphism_from_json(&serde_json::from_value(v)?)?))
    } else {
        Ok(SymbolSource::Series(formats::parse_symbol(&text)?))
    }
}

/// A finished run: the JSON report and the exit status.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    /// Extra records for JSON Lines output.
    pub records: Vec<Value>,
    pub exit: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome {
            report,
            records: Vec::new(),
            exit: 0,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.degree == Some(0) {
            return Err(Error::Precondition("degree must be at least 1".into()));
        }
        if let Some(t) = self.tol {
            if t.is_nan() || t <= 0.0 {
                return Err(Error::Precondition("tolerances must be positive".into()));
            }
        }
        Ok(())
    }

    fn source(&self) -> Result<SymbolSource> {
        let spec = self
            .symbol
            .as_deref()
            .ok_or_else(|| Error::Precondition("--symbol is required".into()))?;
        parse_symbol_source(spec, self.degree.unwrap_or(BUILTIN_DEGREE))
    }

    fn degree_or(&self, d: usize) -> usize {
        self.degree.unwrap_or(d)
    }

    fn opts(&self) -> BuildOptions {
        BuildOptions {
            skip_self_map_check: self.unchecked,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn c_json(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes)?;
    Ok(())
}

/// Runs one subcommand.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let header = json!({ "command": cfg.command, "config": cfg });
    let mut out = match cfg.command {
        Command::Norm => run_norm(cfg)?,
        Command::Spectrum => run_spectrum(cfg)?,
        Command::Classify => run_classify(cfg)?,
        Command::Radius => run_radius(cfg)?,
        Command::Essnorm => run_essnorm(cfg)?,
        Command::Hs => run_hs(cfg)?,
        Command::Moebius => run_moebius(cfg)?,
        Command::Drury => run_drury(cfg)?,
        Command::Selftest => run_selftest(cfg)?,
    };
    let mut report = header;
    report["result"] = out.report.take();
    out.report = report;
    Ok(out)
}

fn run_norm(cfg: &RunConfig) -> Result<Outcome> {
    let d = cfg.degree_or(6);
    let src = cfg.source()?;
    let phi = src.to_symbol(d)?;
    if let Some(p) = &cfg.dump_shifts {
        let shifts = fock::shift_matrices(phi.n(), d, Side::Left)?;
        let text: String = shifts.iter().map(|s| fock::dense_text_dump(&s.matrix)).collect::<Vec<_>>().join("\n");
        write_file(p, text.as_bytes())?;
    }
    let m = build_matrix(&phi, d, &cfg.opts())?;
    if let Some(p) = &cfg.matrix_out {
        let mut buf = Vec::new();
        formats::write_fockmat(&mut buf, phi.n(), d, m.matrix())?;
        write_file(p, &buf)?;
    }
    let r = compop::operator_norm_estimate(&m, cfg.samples.unwrap_or(compop::NORM_SAMPLES))?;
    Ok(Outcome::ok(to_value(&r)?))
}

fn find_fixed_point(src: &SymbolSource, cfg: &RunConfig) -> Result<Vec<C64>> {
    match dynamics::find_interior_fixed_point(src.scalar_map(), 5000, cfg.tol.unwrap_or(1e-13))? {
        dynamics::FixedPointOutcome::Interior { point, .. } => Ok(point),
        other => Err(Error::Precondition(format!(
            "no interior fixed point: {}",
            serde_json::to_string(&other)?
        ))),
    }
}

fn spectrum_points(r: &spectra::SpectrumReport) -> Vec<Value> {
    r.points.iter().map(|p| serde_json::to_value(p).expect("plain struct")).collect()
}

fn run_spectrum(cfg: &RunConfig) -> Result<Outcome> {
    let src = cfg.source()?;
    let mode = cfg.mode.unwrap_or(SpectrumMode::Compact);
    let cap = cfg.cap.unwrap_or(3);
    match mode {
        SpectrumMode::Compact | SpectrumMode::Schroeder => {
            let d = cfg.degree_or(4);
            let phi = src.to_symbol(d)?;
            let xi = find_fixed_point(&src, cfg)?;
            let outer = cfg.outer_cap.unwrap_or_else(|| default_outer_cap(&phi, d));
            let data = spectra::schroeder_linear_data(&phi, &xi, d, outer)?;
            let a: Vec<Vec<Value>> = (0..data.a.nrows())
                .map(|i| (0..data.a.ncols()).map(|j| c_json(data.a[(i, j)])).collect())
                .collect();
            let mut report = json!({
                "fixed_point": data.xi.iter().map(|&z| c_json(z)).collect::<Vec<_>>(),
                "linear_part": a,
                "eigenvalues": data.eigenvalues.iter().map(|&z| c_json(z)).collect::<Vec<_>>(),
                "psi_constant": data.psi_constant,
                "tail_bound": data.tail_bound,
            });
            let mut records = Vec::new();
            if mode == SpectrumMode::Compact {
                let s = spectra::compact_spectrum(&data, cap);
                records = spectrum_points(&s);
                report["spectrum"] = to_value(&s)?;
                report["product_cap"] = json!(cap);
            }
            Ok(Outcome { report, records, exit: 0 })
        }
        SpectrumMode::Filtration => {
            let d = cfg.degree_or(4);
            let m = build_matrix(&src.to_symbol(d)?, d, &cfg.opts())?;
            let level = cfg.cap.unwrap_or(d).min(d);
            let f = spectra::filtration_eigenvalues(&m, level)?;
            let cj = |v: &[C64]| v.iter().map(|&z| c_json(z)).collect::<Vec<_>>();
            Ok(Outcome::ok(json!({
                "level": level,
                "computed": cj(&f.computed),
                "predicted": cj(&f.predicted),
                "distance": f.distance,
                "convention": "forward matrix",
            })))
        }
        SpectrumMode::Automorphism => {
            let s = spectra::automorphism_spectrum(&src.automorphism()?)?;
            let exit = if s.classification == spectra::SpectrumClass::Inconclusive { 3 } else { 0 };
            Ok(Outcome {
                records: spectrum_points(&s.report),
                report: to_value(&s)?,
                exit,
            })
        }
    }
}

fn run_classify(cfg: &RunConfig) -> Result<Outcome> {
    let src = cfg.source()?;
    let mut opts = ClassifyOptions {
        seed: cfg.seed,
        ..ClassifyOptions::default()
    };
    if let Some(t) = cfg.tol {
        opts.tol = t;
    }
    let r = dynamics::classify_symbol(src.scalar_map(), &opts)?;
    let exit = if r.kind == Kind::Inconclusive { 3 } else { 0 };
    Ok(Outcome {
        report: to_value(&r)?,
        records: Vec::new(),
        exit,
    })
}

fn run_radius(cfg: &RunConfig) -> Result<Outcome> {
    let src = cfg.source()?;
    let k = cfg.steps.unwrap_or(40);
    match &src {
        SymbolSource::Series(phi) => {
            let outer = cfg.outer_cap.unwrap_or_else(|| default_outer_cap(phi, phi.degree()));
            let seq = spectra::iterate_symbol(phi, k, outer)?;
            let r = spectra::spectral_radius_estimate(&seq)?;
            let mut v = to_value(&r)?;
            v["orbit_defect"] = json!(seq.orbit_defect);
            v["escaped_at"] = json!(seq.escaped_at);
            Ok(Outcome::ok(v))
        }
        _ => Ok(Outcome::ok(to_value(&spectra::spectral_radius_of(src.scalar_map(), k)?)?)),
    }
}

fn run_essnorm(cfg: &RunConfig) -> Result<Outcome> {
    let d = cfg.degree_or(8);
    let phi = cfg.source()?.to_symbol(d)?;
    let m = build_matrix(&phi, d, &cfg.opts())?;
    let ks: Vec<usize> = (0..=cfg.cap.unwrap_or(d).min(d)).collect();
    let vals = compop::essential_norm_proxy(&m, &ks);
    Ok(Outcome::ok(json!({ "k": ks, "proxy": vals, "exact": m.is_exact() })))
}

fn run_hs(cfg: &RunConfig) -> Result<Outcome> {
    let d = cfg.degree_or(30);
    let phi = cfg.source()?.to_symbol(d)?;
    Ok(Outcome::ok(to_value(&compop::hilbert_schmidt_sum(&phi, d, &cfg.opts())?)?))
}

fn run_moebius(cfg: &RunConfig) -> Result<Outcome> {
    let d = cfg.degree_or(BUILTIN_DEGREE);
    let src = cfg.source()?;
    let SymbolSource::Moebius(m) = &src else {
        return Err(Error::Precondition("moebius needs --symbol moebius(..)".into()));
    };
    let phi = m.symbol(d)?;
    Ok(Outcome::ok(json!({
        "delta_lambda": m.delta_lambda(),
        "symbol": to_value(&formats::symbol_to_json(&phi))?,
    })))
}

fn run_drury(cfg: &RunConfig) -> Result<Outcome> {
    let d = cfg.degree_or(3);
    let psi = cfg.source()?.to_symbol(d)?;
    let comp = drury::compress_composition(&psi, d, &cfg.opts())?;
    if let Some(p) = &cfg.matrix_out {
        let mut buf = Vec::new();
        formats::write_symfmat(&mut buf, psi.n(), d, &comp.multidegrees, &comp.matrix)?;
        write_file(p, &buf)?;
    }
    let pts = drury::sample_points(psi.n(), cfg.samples.unwrap_or(64), 0.8, cfg.seed);
    // random symmetric test polynomial of degree d
    let mut r = rng(cfg.seed);
    let v = selftest::random_vector(&mut r, psi.n(), d)?;
    let f = drury::symmetrize(&v)?.to_series()?;
    let defect = drury::functional_identity_defect(&psi, &f, d, &pts)?;
    let jury = drury::jury_bounds(&psi, &comp, &pts)?;
    Ok(Outcome::ok(json!({
        "compression": to_value(&comp)?,
        "functional_identity": to_value(&defect)?,
        "jury": to_value(&jury)?,
    })))
}

fn run_selftest(cfg: &RunConfig) -> Result<Outcome> {
    let results = selftest::run_all(cfg.samples.unwrap_or(1000), cfg.seed)?;
    let passed = results.iter().all(|r| r.passed);
    Ok(Outcome {
        records: results.iter().map(|r| serde_json::to_value(r).expect("plain struct")).collect(),
        report: json!({ "passed": passed, "properties": to_value(&results)? }),
        exit: if passed { 0 } else { 2 },
    })
}

fn render(cfg: &RunConfig, out: &Outcome) -> Result<String> {
    let jsonl = cfg
        .out
        .as_ref()
        .is_some_and(|p| p.extension().is_some_and(|e| e == "jsonl"));
    if jsonl {
        let mut s = serde_json::to_string(&out.report)?;
        s.push('\n');
        for r in &out.records {
            s.push_str(&serde_json::to_string(r)?);
            s.push('\n');
        }
        Ok(s)
    } else {
        let mut s = serde_json::to_string_pretty(&out.report)?;
        s.push('\n');
        Ok(s)
    }
}

fn configure_threads() {
    if let Some(k) = std::env::var("FOCKC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
}

/// Parses `args`, runs, writes the report, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let out = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("fockc: {e}");
            return e.exit_code();
        }
    };
    let text = match render(&cfg, &out) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("fockc: {e}");
            return e.exit_code();
        }
    };
    let written = match &cfg.out {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("fockc: {e}");
        return 1;
    }
    out.exit
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("-0.2i").unwrap(), c(0.0, -0.2));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("0.1-0.2i").unwrap(), c(0.1, -0.2));
        assert_eq!(parse_complex("1e-3+4i").unwrap(), c(1e-3, 4.0));
        assert_eq!(parse_complex("-1e-3-i").unwrap(), c(-1e-3, -1.0));
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn builtins() {
        match parse_symbol_source("moebius(0.5;n=3)", 4).unwrap() {
            SymbolSource::Moebius(m) => assert_eq!(m.lambda(), &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            other => panic!("{other:?}"),
        }
        match parse_symbol_source("unitary([[0,1],[1,0]])", 4).unwrap() {
            SymbolSource::Automorphism(a) => assert_eq!(a.unitary()[(0, 1)], c(1.0, 0.0)),
            other => panic!("{other:?}"),
        }
        let s = parse_symbol_source("scale(0.5;n=2)", 3).unwrap().to_symbol(3).unwrap();
        assert_eq!(s.linear_matrix()[(1, 1)], c(0.5, 0.0));
        assert!(parse_symbol_source("unitary([[1,1],[0,1]])", 2).is_err());
        assert!(parse_symbol_source("lft(1,0.5,0.5)", 2).is_err());
        assert!(parse_symbol_source("/nonexistent/file.json", 2).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["fockc", "norm", "--symbol", "scale(2;n=1)", "--degree", "2", "--out", "/dev/null"]), 2);
        assert_eq!(main_with_args(["fockc", "norm", "--degree", "0", "--symbol", "swap"]), 2);
        assert_eq!(main_with_args(["fockc", "bogus"]), 1);
        assert_eq!(main_with_args(["fockc", "classify", "--symbol", "scale(0.5;n=2)", "--out", "/dev/null"]), 0);
    }
}
