//! Points on `y² = f(x)` with both coordinates primitive.
//!
//! `(x, y)` is such a point iff `x` is primitive and `f(x)` has order
//! `(q-1)/2`: a 2-primitive `β = g^e` has `gcd(e, q-1) = 2`, its square
//! roots are `g^{e/2}` and `g^{e/2 + (q-1)/2}`, and of `e/2` and
//! `e/2 + (q-1)/2` at least one is odd and both are coprime to every odd
//! prime of `q - 1`, so at least one root is primitive.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field, PrimePower, DEFAULT_TABLE_LIMIT};
use crate::poly::Poly;
use crate::sweep::{evaluate_prime_power, run_sweep, Criterion, SweepConfig, SweepRecord};

/// Fields up to this size get discrete-log tables in bulk searches.
pub const TABLE_THRESHOLD: u64 = 1 << 16;

/// The prime powers `q` conjectured to be the only ones admitting some
/// `a ∈ F_q^*` for which `y² = x³ - ax` has no primitive point.
pub const CONJECTURED_EXCEPTIONS: [u64; 16] = [3, 5, 7, 9, 13, 17, 25, 29, 31, 41, 49, 61, 73, 81, 121, 337];

/// A square-free cubic `f` defining `y² = f(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    f: Poly,
}

impl CurveSpec {
    pub fn new(field: &Field, f: Poly) -> Result<Self> {
        if f.degree() != Some(3) {
            return Err(Error::Hypothesis("curve polynomial must be cubic".into()));
        }
        if !f.is_squarefree(field) {
            return Err(Error::Hypothesis("curve polynomial must be square-free".into()));
        }
        Ok(CurveSpec { f })
    }

    /// `f_a = x³ - a x`.
    pub fn fa(field: &Field, a: Elem) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let f = Poly::new(vec![Elem::ZERO, field.neg(a), Elem::ZERO, Elem::ONE]);
        Self::new(field, f)
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimitivePoint {
    pub x: Elem,
    pub y: Elem,
}

/// `y` for a primitive `x` with `f(x)` 2-primitive; otherwise `None`.
fn primitive_root_of(field: &Field, beta: Elem) -> Option<Elem> {
    if !field.is_n_primitive(beta, 2).ok()? {
        return None;
    }
    let (a, b) = field.sqrt(beta).expect("2-primitive elements are squares");
    [a, b].into_iter().find(|&y| field.is_primitive(y))
}

/// The point with the smallest primitive `x` (by canonical index); for that
/// `x`, the primitive square root with the smaller index.
pub fn find_primitive_point(field: &Field, spec: &CurveSpec) -> Option<PrimitivePoint> {
    field
        .nonzero()
        .filter(|&x| field.is_primitive(x))
        .find_map(|x| primitive_root_of(field, spec.f.eval(field, x)).map(|y| PrimitivePoint { x, y }))
}

/// Checks a point by order computation alone.
pub fn verify_point(field: &Field, spec: &CurveSpec, pt: PrimitivePoint) -> bool {
    let qm1 = field.order_of_group();
    field.mul(pt.y, pt.y) == spec.f.eval(field, pt.x)
        && field.order(pt.x).is_ok_and(|o| o == qm1)
        && field.order(pt.y).is_ok_and(|o| o == qm1)
}

/// All `a ∈ F_q^*`, by canonical index, for which `y² = x³ - ax` has no
/// primitive point.
pub fn exceptional_a(field: &Field) -> Vec<u32> {
    let primitive: Vec<Elem> = field.nonzero().filter(|&x| field.is_primitive(x)).collect();
    let cubes: Vec<Elem> = primitive.iter().map(|&x| field.mul(field.mul(x, x), x)).collect();
    let has_point = |a: Elem| {
        primitive
            .iter()
            .zip(&cubes)
            .any(|(&x, &x3)| field.is_n_primitive(field.sub(x3, field.mul(a, x)), 2).unwrap_or(false))
    };
    field
        .nonzero()
        .filter(|&a| !has_point(a))
        .map(|a| a.index())
        .collect()
}

pub fn count_exceptional_curves(field: &Field) -> u64 {
    exceptional_a(field).len() as u64
}

pub fn field_for(q: u64) -> Result<Field> {
    let pp = PrimePower::from_q(q).ok_or_else(|| Error::InvalidArgument(format!("{q} is not an odd prime power")))?;
    Field::from_prime_power(pp, q <= TABLE_THRESHOLD)
}

/// One line of a curve results file. Field elements are canonical indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveResult {
    pub q: u64,
    pub a: u32,
    pub found: bool,
    pub x: Option<u32>,
    pub y: Option<u32>,
}

/// Searches `y² = x³ - ax` over `F_q`, with `a` given as an integer.
pub fn curve_result(q: u64, a: i64) -> Result<CurveResult> {
    let field = field_for(q)?;
    let a = field.from_int(a);
    let spec = CurveSpec::fa(&field, a)?;
    let pt = find_primitive_point(&field, &spec);
    if let Some(pt) = pt {
        if !verify_point(&field, &spec, pt) {
            return Err(Error::Inconsistent(format!("bad point over F_{q}")));
        }
    }
    Ok(CurveResult {
        q,
        a: a.index(),
        found: pt.is_some(),
        x: pt.map(|p| p.x.index()),
        y: pt.map(|p| p.y.index()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Outcome {
    /// Prime powers left open by the coefficient-4 sieve.
    pub survivors: Vec<u64>,
    /// Search results, one per survivor.
    pub results: Vec<CurveResult>,
}

impl Theorem1Outcome {
    pub fn exceptions(&self) -> Vec<u64> {
        self.results.iter().filter(|r| !r.found).map(|r| r.q).collect()
    }
}

/// Sweeps `[3, q_max]` with coefficient 4 and searches `y² = x³ - sign·x`
/// over every prime power the sieve leaves open.
pub fn reproduce_theorem1(sign: i64, q_max: u64, parallelism: usize) -> Result<Theorem1Outcome> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be ±1, got {sign}")));
    }
    if q_max < 3 {
        return Err(Error::InvalidArgument(format!("q_max = {q_max} below 3")));
    }
    let cfg = SweepConfig {
        parallelism,
        ..SweepConfig::new(2, q_max, 4)
    };
    let survivors: Vec<u64> = run_sweep(&cfg)?
        .records
        .into_iter()
        .filter(|r| !r.sieve)
        .map(|r| r.q)
        .collect();
    info!("{} prime powers left open up to {q_max}", survivors.len());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let results = pool.install(|| {
        survivors
            .par_iter()
            .map(|&q| curve_result(q, sign))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(Theorem1Outcome { survivors, results })
}

/// One line of a scan file: the coefficient-4 sweep record for `q` and the
/// exceptional `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    #[serde(flatten)]
    pub record: SweepRecord,
    pub a_exceptions: Vec<u32>,
}

/// Scans touch every `a`, so the table cost is always repaid.
pub fn scan_one(q: u64) -> Result<ScanRecord> {
    let pp = PrimePower::from_q(q).ok_or_else(|| Error::InvalidArgument(format!("{q} is not an odd prime power")))?;
    let field = Field::from_prime_power(pp, q <= DEFAULT_TABLE_LIMIT)?;
    let record = evaluate_prime_power(field.prime_power(), &Criterion::new(4))?;
    Ok(ScanRecord {
        record,
        a_exceptions: exceptional_a(&field),
    })
}

#[derive(Debug, Clone)]
pub struct ScanConfig<'a> {
    pub qs: &'a [u64],
    /// JSON-lines output; also serves as the checkpoint.
    pub out: Option<&'a Path>,
    pub resume: bool,
    pub parallelism: usize,
    /// Stop after this many new prime powers; used to simulate interruption.
    pub limit: Option<usize>,
}

/// Reads the complete lines of an earlier scan, checks they are a prefix
/// of `qs`, and cuts off anything after them.
fn resume_scan(path: &Path, qs: &[u64]) -> Result<Vec<ScanRecord>> {
    let mut file = match OpenOptions::new().read(true).write(true).open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut text = String::new();
    file.read_to_string(&mut text).map_err(|e| Error::io(path, e))?;
    let mut done = Vec::new();
    let mut keep = 0usize;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        if !line.ends_with('\n') {
            break;
        }
        let corrupt = |reason: String| Error::CorruptCheckpoint {
            path: path.to_path_buf(),
            line: i + 1,
            reason,
        };
        let rec: ScanRecord = serde_json::from_str(line.trim_end()).map_err(|e| corrupt(e.to_string()))?;
        if qs.get(i) != Some(&rec.record.q) {
            return Err(corrupt(format!("q = {} out of sequence", rec.record.q)));
        }
        keep += line.len();
        done.push(rec);
    }
    file.set_len(keep as u64).map_err(|e| Error::io(path, e))?;
    file.seek(SeekFrom::End(0)).map_err(|e| Error::io(path, e))?;
    Ok(done)
}

/// Exceptional `a` for each `q`, in input order, with optional
/// checkpointed output.
pub fn conjecture_scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    let mut out = match (cfg.out, cfg.resume) {
        (Some(p), true) => resume_scan(p, cfg.qs)?,
        _ => Vec::new(),
    };
    let mut sink = match cfg.out {
        Some(p) => {
            let mut opts = OpenOptions::new();
            opts.create(true);
            if cfg.resume {
                opts.append(true);
            } else {
                opts.write(true).truncate(true);
            }
            Some(BufWriter::new(opts.open(p).map_err(|e| Error::io(p, e))?))
        }
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let start = out.len();
    let end = cfg.limit.map_or(cfg.qs.len(), |l| (start + l).min(cfg.qs.len()));
    let batch = pool.current_num_threads().max(1) * 4;
    for chunk in cfg.qs[start..end].chunks(batch) {
        let recs = pool.install(|| chunk.par_iter().map(|&q| scan_one(q)).collect::<Result<Vec<_>>>())?;
        if let (Some(w), Some(p)) = (sink.as_mut(), cfg.out) {
            for r in &recs {
                let line = serde_json::to_string(r).map_err(|e| Error::Inconsistent(e.to_string()))?;
                writeln!(w, "{line}").map_err(|e| Error::io(p, e))?;
            }
            w.flush().map_err(|e| Error::io(p, e))?;
        }
        out.extend(recs);
    }
    Ok(out)
}

/// Reads a scan file.
pub fn read_scan(path: &Path) -> Result<Vec<ScanRecord>> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::CorruptCheckpoint {
                path: path.to_path_buf(),
                line: i + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}
