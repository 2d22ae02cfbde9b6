//! JSON term formats for series, symbols, Fock vectors and automorphisms,
//! and the binary matrix dumps.
//!
//! Binary layout, all little-endian: 8-byte magic, `u32 n`, `u32 degree`.
//! `FOCKMAT1` is followed by the `dim x dim` matrix as row-major `(re, im)`
//! `f64` pairs. `SYMFMAT1` first stores `u32 count` and the `count x n`
//! multidegree table, then the `count x count` matrix the same way.

use std::io::{Read, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::drury::{multidegrees, Multidegree};
use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::moebius::AutomorphismSpec;
use crate::series::{NcSeries, SymbolTuple};
use crate::words::{GradedEnumeration, Word};
use crate::C64;

pub const FOCKMAT_MAGIC: &[u8; 8] = b"FOCKMAT1";
pub const SYMFMAT_MAGIC: &[u8; 8] = b"SYMFMAT1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub word: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub n: usize,
    pub degree: usize,
    #[serde(default)]
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SymbolJson {
    pub n: usize,
    pub degree: usize,
    pub components: Vec<SeriesJson>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for C64 {
    fn from(z: ComplexJson) -> Self {
        C64::new(z.re, z.im)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AutomorphismJson {
    pub lambda: Vec<ComplexJson>,
    pub unitary: Vec<Vec<ComplexJson>>,
}

fn terms_json(terms: Vec<(Word, C64)>) -> Vec<TermJson> {
    terms
        .into_iter()
        .map(|(w, c)| TermJson {
            word: w.to_one_based(),
            re: c.re,
            im: c.im,
        })
        .collect()
}

pub fn series_to_json(f: &NcSeries) -> SeriesJson {
    SeriesJson {
        n: f.n(),
        degree: f.degree(),
        terms: terms_json(f.word_terms()),
    }
}

pub fn series_from_json(s: &SeriesJson) -> Result<NcSeries> {
    let terms = s
        .terms
        .iter()
        .map(|t| Ok((Word::from_one_based(&t.word, s.n)?, C64::new(t.re, t.im))))
        .collect::<Result<Vec<_>>>()?;
    NcSeries::from_terms(s.n, s.degree, terms)
}

pub fn symbol_to_json(phi: &SymbolTuple) -> SymbolJson {
    SymbolJson {
        n: phi.n(),
        degree: phi.degree(),
        components: phi.components().iter().map(series_to_json).collect(),
    }
}

pub fn symbol_from_json(s: &SymbolJson) -> Result<SymbolTuple> {
    if s.components.len() != s.n {
        return Err(Error::Parse(format!(
            "symbol has n = {} but {} components",
            s.n,
            s.components.len()
        )));
    }
    let comps = s
        .components
        .iter()
        .map(|c| {
            if c.n != s.n || c.degree != s.degree {
                return Err(Error::Parse(format!(
                    "component (n, degree) = ({}, {}) differs from the symbol's ({}, {})",
                    c.n, c.degree, s.n, s.degree
                )));
            }
            series_from_json(c)
        })
        .collect::<Result<Vec<_>>>()?;
    SymbolTuple::new(comps)
}

pub fn fock_to_json(v: &FockVector) -> Result<SeriesJson> {
    Ok(series_to_json(&v.to_series()?))
}

pub fn fock_from_json(s: &SeriesJson) -> Result<FockVector> {
    FockVector::from_series(&series_from_json(s)?, s.degree)
}

pub fn automorphism_to_json(a: &AutomorphismSpec) -> AutomorphismJson {
    let u = a.unitary();
    AutomorphismJson {
        lambda: a.lambda().iter().map(|&z| z.into()).collect(),
        unitary: (0..u.nrows())
            .map(|i| (0..u.ncols()).map(|j| u[(i, j)].into()).collect())
            .collect(),
    }
}

pub fn automorphism_from_json(a: &AutomorphismJson) -> Result<AutomorphismSpec> {
    let n = a.lambda.len();
    if a.unitary.len() != n || a.unitary.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("unitary must be {n} x {n}")));
    }
    let u = DMatrix::from_fn(n, n, |i, j| a.unitary[i][j].into());
    AutomorphismSpec::new(a.lambda.iter().map(|&z| z.into()).collect(), u)
}

/// Parses JSON text, reporting line and column on failure.
pub fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_series(text: &str) -> Result<NcSeries> {
    series_from_json(&parse(text)?)
}

/// Accepts either the symbol format or a bare series (taken as `n = 1`).
pub fn parse_symbol(text: &str) -> Result<SymbolTuple> {
    let v: serde_json::Value = parse(text)?;
    if v.get("components").is_some() {
        symbol_from_json(&serde_json::from_value(v)?)
    } else if v.get("terms").is_some() {
        let s = series_from_json(&serde_json::from_value(v)?)?;
        if s.n() != 1 {
            return Err(Error::Parse(
                "a bare series is only a symbol when n = 1".into(),
            ));
        }
        SymbolTuple::new(vec![s])
    } else {
        Err(Error::Parse("expected a symbol with \"components\"".into()))
    }
}

pub fn parse_automorphism(text: &str) -> Result<AutomorphismSpec> {
    automorphism_from_json(&parse(text)?)
}

pub fn to_json_string<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn header(w: &mut impl Write, magic: &[u8; 8], n: usize, degree: usize) -> Result<()> {
    w.write_all(magic)?;
    w.write_all(&u32::try_from(n).map_err(|_| Error::Parse("n exceeds u32".into()))?.to_le_bytes())?;
    w.write_all(&u32::try_from(degree).map_err(|_| Error::Parse("degree exceeds u32".into()))?.to_le_bytes())?;
    Ok(())
}

fn write_rows(w: &mut impl Write, m: &DMatrix<C64>) -> Result<()> {
    let mut buf = Vec::with_capacity(16 * m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            buf.extend_from_slice(&m[(i, j)].re.to_le_bytes());
            buf.extend_from_slice(&m[(i, j)].im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_header(r: &mut impl Read, magic: &[u8; 8]) -> Result<(usize, usize)> {
    let mut m = [0u8; 8];
    r.read_exact(&mut m)?;
    if &m != magic {
        return Err(Error::Parse(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&m),
            String::from_utf8_lossy(magic)
        )));
    }
    Ok((read_u32(r)? as usize, read_u32(r)? as usize))
}

fn read_rows(r: &mut impl Read, dim: usize) -> Result<DMatrix<C64>> {
    let mut buf = vec![0u8; 16 * dim * dim];
    r.read_exact(&mut buf)?;
    let f = |k: usize| f64::from_le_bytes(buf[8 * k..8 * k + 8].try_into().expect("8 bytes"));
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        let k = 2 * (i * dim + j);
        C64::new(f(k), f(k + 1))
    }))
}

pub fn write_fockmat(w: &mut impl Write, n: usize, degree: usize, m: &DMatrix<C64>) -> Result<()> {
    let dim = GradedEnumeration::new(n, degree)?.total_dim();
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DegreeMismatch(format!(
            "matrix is {} x {}, expected {dim} x {dim}",
            m.nrows(),
            m.ncols()
        )));
    }
    header(w, FOCKMAT_MAGIC, n, degree)?;
    write_rows(w, m)
}

pub fn read_fockmat(r: &mut impl Read) -> Result<(usize, usize, DMatrix<C64>)> {
    let (n, degree) = read_header(r, FOCKMAT_MAGIC)?;
    let dim = GradedEnumeration::new(n, degree)?.total_dim();
    Ok((n, degree, read_rows(r, dim)?))
}

pub fn write_symfmat(
    w: &mut impl Write,
    n: usize,
    degree: usize,
    table: &[Multidegree],
    m: &DMatrix<C64>,
) -> Result<()> {
    let count = table.len();
    if m.nrows() != count || m.ncols() != count || table.iter().any(|k| k.len() != n) {
        return Err(Error::DegreeMismatch("multidegree table does not match the matrix".into()));
    }
    header(w, SYMFMAT_MAGIC, n, degree)?;
    w.write_all(&(count as u32).to_le_bytes())?;
    for k in table {
        for &ki in k {
            w.write_all(&(ki as u32).to_le_bytes())?;
        }
    }
    write_rows(w, m)
}

pub fn read_symfmat(r: &mut impl Read) -> Result<(usize, usize, Vec<Multidegree>, DMatrix<C64>)> {
    let (n, degree) = read_header(r, SYMFMAT_MAGIC)?;
    let count = read_u32(r)? as usize;
    if n == 0 || count != multidegrees(n, degree)?.len() {
        return Err(Error::Parse(format!("multidegree count {count} inconsistent with n = {n}, degree = {degree}")));
    }
    let mut table = Vec::with_capacity(count);
    for _ in 0..count {
        table.push((0..n).map(|_| read_u32(r).map(|x| x as usize)).collect::<Result<Vec<_>>>()?);
    }
    Ok((n, degree, table, read_rows(r, count)?))
}
