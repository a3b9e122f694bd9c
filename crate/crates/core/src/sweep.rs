//! Sweeps over ranges of odd prime powers.
//!
//! A range `(lo, hi]` is cut into segments of fixed length. Each segment is
//! sieved for primes, merged with the proper prime powers it contains, and
//! the values `q - 1` are factored in one batch. Only prime powers failing
//! the plain bound are kept as records. Completed segments are appended to
//! a checkpoint file so an interrupted sweep can resume.

use std::collections::VecDeque;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factor_window, isqrt, primes_up_to};
use crate::bounds::{choose_sieving_primes_with, ConditionInput, SieveStrategy};
use crate::error::{Error, Result};
use crate::gf::PrimePower;

pub const DEFAULT_SEGMENT_LENGTH: u64 = 1 << 22;

/// Largest supported upper end of a sweep.
pub const MAX_HI: u64 = 1 << 34;

/// Odd prime powers in `(lo, hi]`, ascending, each with `q - 1` factored.
pub struct OddPrimePowers {
    hi: u64,
    next_lo: u64,
    segment_length: u64,
    base: Vec<u64>,
    powers: Vec<(u64, u64, u32)>,
    buffer: VecDeque<PrimePower>,
}

pub fn enumerate_odd_prime_powers(lo: u64, hi: u64) -> OddPrimePowers {
    OddPrimePowers::new(lo, hi, DEFAULT_SEGMENT_LENGTH)
}

impl OddPrimePowers {
    pub fn new(lo: u64, hi: u64, segment_length: u64) -> Self {
        assert!(hi <= MAX_HI, "upper end {hi} above 2^34");
        assert!(segment_length >= 2);
        let base = primes_up_to(isqrt(hi.max(4)));
        let powers = proper_powers(lo, hi, &base);
        OddPrimePowers {
            hi,
            next_lo: lo.min(hi),
            segment_length,
            base,
            powers,
            buffer: VecDeque::new(),
        }
    }
}

impl Iterator for OddPrimePowers {
    type Item = PrimePower;

    fn next(&mut self) -> Option<PrimePower> {
        while self.buffer.is_empty() && self.next_lo < self.hi {
            let seg_hi = self.next_lo.saturating_add(self.segment_length).min(self.hi);
            self.buffer = segment_prime_powers(self.next_lo, seg_hi, &self.base, &self.powers).into();
            self.next_lo = seg_hi;
        }
        self.buffer.pop_front()
    }
}

/// `p^k` with `k ≥ 2`, `p` odd, in `(lo, hi]`, sorted by value.
fn proper_powers(lo: u64, hi: u64, base: &[u64]) -> Vec<(u64, u64, u32)> {
    let mut out = Vec::new();
    for &p in base.iter().filter(|&&p| p > 2) {
        let mut pk = p * p;
        let mut k = 2;
        while pk <= hi {
            if pk > lo {
                out.push((pk, p, k));
            }
            match pk.checked_mul(p) {
                Some(v) => pk = v,
                None => break,
            }
            k += 1;
        }
    }
    out.sort_unstable();
    out
}

/// Odd prime powers in `(lo, hi]`. `base` holds every prime up to
/// `isqrt(hi)`; `powers` every proper odd prime power of the whole sweep.
fn segment_prime_powers(lo: u64, hi: u64, base: &[u64], powers: &[(u64, u64, u32)]) -> Vec<PrimePower> {
    let mut found: Vec<(u64, u64, u32)> = Vec::new();
    let width = (hi - lo) as usize;
    let mut composite = vec![false; width];
    for &p in base.iter().filter(|&&p| p > 2) {
        if p * p > hi {
            break;
        }
        let first = (p * p).max((lo / p + 1) * p);
        let mut m = first;
        while m <= hi {
            composite[(m - lo - 1) as usize] = true;
            m += p;
        }
    }
    for (i, &c) in composite.iter().enumerate() {
        let n = lo + 1 + i as u64;
        if !c && n >= 3 && n % 2 == 1 {
            found.push((n, n, 1));
        }
    }
    let start = powers.partition_point(|&(q, _, _)| q <= lo);
    let end = powers.partition_point(|&(q, _, _)| q <= hi);
    found.extend_from_slice(&powers[start..end]);
    found.sort_unstable();

    let qm1: Vec<u64> = found.iter().map(|&(q, _, _)| q - 1).collect();
    factor_window(&qm1, base)
        .into_iter()
        .zip(&found)
        .map(|(f, &(_, p, k))| PrimePower::with_qm1(p, k, f))
        .collect()
}

/// Number of prime powers in `(lo, hi]`, powers of two included.
pub fn count_prime_powers(lo: u64, hi: u64) -> u64 {
    let odd = OddPrimePowers::new(lo, hi, DEFAULT_SEGMENT_LENGTH).count() as u64;
    let even = (1..64).map(|k| 1u64 << k).filter(|&t| t > lo && t <= hi).count() as u64;
    odd + even
}

/// One prime power's verdicts. `w_half` is always the true `W((q-1)/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    pub omega: u32,
    pub w_qm1: u64,
    pub w_half: u64,
    pub cor42: bool,
    pub sieve: bool,
    pub sieving_primes: Vec<u64>,
}

/// How `W((q-1)/2)` enters the bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfWeight {
    /// `W((q-1)/2)` from the factorization of `(q-1)/2`.
    #[default]
    Exact,
    /// `W(q-1)` in its place for every `q`, i.e. the `q ≡ 1 (mod 4)` form of
    /// the bound applied throughout. Weaker but still sufficient; the sieve
    /// then draws the second family of sieving primes from `q - 1` as well.
    Doubled,
}

/// The test applied to each prime power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    /// `D·n·N`; even, 4 for `x³ - ax` and 6 for a general cubic.
    pub coefficient: u64,
    pub strategy: SieveStrategy,
    pub half_weight: HalfWeight,
}

impl Criterion {
    pub fn new(coefficient: u64) -> Self {
        Criterion {
            coefficient,
            strategy: SieveStrategy::default(),
            half_weight: HalfWeight::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.coefficient < 2 || !self.coefficient.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "coefficient {} must be even and at least 2",
                self.coefficient
            )));
        }
        Ok(())
    }

    /// The sieve input matching this criterion.
    pub fn condition_input(&self, pp: &PrimePower) -> Result<ConditionInput> {
        match self.half_weight {
            HalfWeight::Exact => ConditionInput::elliptic(pp, self.coefficient),
            // r = R = q-1 with n = N = 1 and D = coefficient gives the same
            // constant D·n·N and W(R) = W(q-1).
            HalfWeight::Doubled => {
                let qm1 = pp.qm1().clone();
                ConditionInput::from_factorizations(pp.q(), self.coefficient, 1, 1, qm1.clone(), qm1)
            }
        }
    }
}

/// Evaluates the plain bound and, if it fails, searches for sieving primes.
pub fn evaluate_prime_power(pp: &PrimePower, criterion: &Criterion) -> Result<SweepRecord> {
    let q = pp.q();
    let qm1 = pp.qm1();
    let omega = qm1.omega();
    let w_qm1 = qm1.w();
    let two_adic = qm1.factors().first().map_or(0, |&(p, e)| if p == 2 { e } else { 0 });
    let omega_half = if two_adic == 1 { omega - 1 } else { omega };
    let w_half = 1u64 << omega_half;
    let parity_rule = if ((q - 1) / 2).is_multiple_of(2) { w_qm1 } else { w_qm1 / 2 };
    if w_half != parity_rule {
        return Err(Error::Inconsistent(format!("W((q-1)/2) parity rule broken at q = {q}")));
    }
    let w_second = match criterion.half_weight {
        HalfWeight::Exact => w_half,
        HalfWeight::Doubled => w_qm1,
    };
    let bound = criterion.coefficient as u128 * w_qm1 as u128 * w_second as u128;
    let cor42 = q as u128 > bound * bound;
    let mut record = SweepRecord {
        q,
        p: pp.p(),
        k: pp.k(),
        omega,
        w_qm1,
        w_half,
        cor42,
        sieve: cor42,
        sieving_primes: Vec::new(),
    };
    if !cor42 {
        let inp = criterion.condition_input(pp)?;
        if inp.big_r().w() != w_second {
            return Err(Error::Inconsistent(format!("W((q-1)/2) mismatch at q = {q}")));
        }
        if let Some(dec) = choose_sieving_primes_with(&inp, criterion.strategy) {
            record.sieve = true;
            record.sieving_primes = dec.all_primes();
        }
    }
    Ok(record)
}

/// Tallies over a range. A maximum of 0 means no failure was seen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub total_pp: u64,
    pub fail_cor42: u64,
    pub max_fail_cor42: u64,
    pub fail_sieve: u64,
    pub max_fail_sieve: u64,
}

impl SweepSummary {
    pub fn add(&mut self, r: &SweepRecord) {
        self.total_pp += 1;
        if !r.cor42 {
            self.fail_cor42 += 1;
            self.max_fail_cor42 = self.max_fail_cor42.max(r.q);
        }
        if !r.sieve {
            self.fail_sieve += 1;
            self.max_fail_sieve = self.max_fail_sieve.max(r.q);
        }
    }

    pub fn merge(&mut self, other: &SweepSummary) {
        self.total_pp += other.total_pp;
        self.fail_cor42 += other.fail_cor42;
        self.max_fail_cor42 = self.max_fail_cor42.max(other.max_fail_cor42);
        self.fail_sieve += other.fail_sieve;
        self.max_fail_sieve = self.max_fail_sieve.max(other.max_fail_sieve);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckpointEntry {
    segment_lo: u64,
    segment_hi: u64,
    summary_partial: SweepSummary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    /// Exclusive lower end.
    pub lo: u64,
    /// Inclusive upper end.
    pub hi: u64,
    pub criterion: Criterion,
    pub segment_length: u64,
    /// JSON-lines file receiving the records of failing `q`. Without it the
    /// records are returned in memory.
    pub out: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    /// Worker threads; 0 uses every available core.
    pub parallelism: usize,
}

impl SweepConfig {
    pub fn new(lo: u64, hi: u64, coefficient: u64) -> Self {
        SweepConfig {
            lo,
            hi,
            criterion: Criterion::new(coefficient),
            segment_length: DEFAULT_SEGMENT_LENGTH,
            out: None,
            checkpoint: None,
            resume: false,
            parallelism: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo > self.hi {
            return Err(Error::InvalidArgument(format!("empty range ({}, {}]", self.lo, self.hi)));
        }
        if self.hi > MAX_HI {
            return Err(Error::InvalidArgument(format!("upper end {} above 2^34", self.hi)));
        }
        if self.segment_length < 2 {
            return Err(Error::InvalidArgument("segment length must be at least 2".into()));
        }
        self.criterion.validate()?;
        if self.resume && self.checkpoint.is_none() {
            return Err(Error::InvalidArgument("resume requires a checkpoint path".into()));
        }
        Ok(())
    }

    fn segment(&self, i: u64) -> (u64, u64) {
        let lo = self.lo + i * self.segment_length;
        (lo, (lo + self.segment_length).min(self.hi))
    }

    fn segment_count(&self) -> u64 {
        (self.hi - self.lo).div_ceil(self.segment_length)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutcome {
    pub summary: SweepSummary,
    /// Failing records produced by this call, when no output file is set.
    pub records: Vec<SweepRecord>,
    /// Segments taken from the checkpoint rather than recomputed.
    pub resumed_segments: u64,
}

struct SegmentResult {
    lo: u64,
    hi: u64,
    summary: SweepSummary,
    failures: Vec<SweepRecord>,
}

fn process_segment(
    cfg: &SweepConfig,
    lo: u64,
    hi: u64,
    base: &[u64],
    powers: &[(u64, u64, u32)],
) -> Result<SegmentResult> {
    let mut summary = SweepSummary::default();
    let mut failures = Vec::new();
    for pp in segment_prime_powers(lo, hi, base, powers) {
        let rec = evaluate_prime_power(&pp, &cfg.criterion)?;
        summary.add(&rec);
        if !rec.cor42 {
            failures.push(rec);
        }
    }
    debug!("segment ({lo}, {hi}]: {summary:?}");
    Ok(SegmentResult {
        lo,
        hi,
        summary,
        failures,
    })
}

fn corrupt(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::CorruptCheckpoint {
        path: path.to_path_buf(),
        line,
        reason: reason.into(),
    }
}

/// Reads a checkpoint written for `cfg`: the entries must tile the expected
/// segment grid from its start.
fn read_checkpoint(cfg: &SweepConfig, path: &Path) -> Result<(u64, SweepSummary)> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((0, SweepSummary::default())),
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut summary = SweepSummary::default();
    let mut done = 0u64;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let entry: CheckpointEntry =
            serde_json::from_str(&line).map_err(|e| corrupt(path, i + 1, e.to_string()))?;
        if done >= cfg.segment_count() {
            return Err(corrupt(path, i + 1, "entry beyond the end of the range"));
        }
        let expected = cfg.segment(done);
        if (entry.segment_lo, entry.segment_hi) != expected {
            return Err(corrupt(
                path,
                i + 1,
                format!(
                    "segment ({}, {}] where ({}, {}] was expected",
                    entry.segment_lo, entry.segment_hi, expected.0, expected.1
                ),
            ));
        }
        summary.merge(&entry.summary_partial);
        done += 1;
    }
    Ok((done, summary))
}

/// Cuts the record file back to the records with `q ≤ upto` and checks that
/// their number matches the checkpoint.
fn truncate_records(path: &Path, upto: u64, expected: u64) -> Result<()> {
    let mut file = match OpenOptions::new().read(true).write(true).open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound && expected == 0 => return Ok(()),
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut text = String::new();
    file.read_to_string(&mut text).map_err(|e| Error::io(path, e))?;
    let mut keep = 0usize;
    let mut count = 0u64;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        if !line.ends_with('\n') {
            break;
        }
        let rec: SweepRecord =
            serde_json::from_str(line.trim_end()).map_err(|e| corrupt(path, i + 1, e.to_string()))?;
        if rec.q > upto {
            break;
        }
        keep += line.len();
        count += 1;
    }
    if count != expected {
        return Err(Error::Inconsistent(format!(
            "{} holds {count} records up to {upto}, checkpoint expects {expected}",
            path.display()
        )));
    }
    file.set_len(keep as u64).map_err(|e| Error::io(path, e))?;
    file.seek(SeekFrom::End(0)).map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn open_sink(path: &Path, append: bool) -> Result<BufWriter<File>> {
    let mut opts = OpenOptions::new();
    opts.create(true);
    if append {
        opts.append(true);
    } else {
        opts.write(true).truncate(true);
    }
    opts.open(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_line<T: Serialize>(sink: &mut BufWriter<File>, path: &Path, value: &T) -> Result<()> {
    let line = serde_json::to_string(value).map_err(|e| Error::Inconsistent(e.to_string()))?;
    sink.write_all(line.as_bytes())
        .and_then(|_| sink.write_all(b"\n"))
        .map_err(|e| Error::io(path, e))
}

/// Runs a sweep, resuming from the checkpoint when asked.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let mut summary = SweepSummary::default();
    let mut start = 0u64;
    if cfg.resume {
        let ck = cfg.checkpoint.as_deref().expect("validated");
        let (done, partial) = read_checkpoint(cfg, ck)?;
        start = done;
        summary = partial;
        if let Some(out) = &cfg.out {
            let upto = if done == 0 { cfg.lo } else { cfg.segment(done - 1).1 };
            truncate_records(out, upto, partial.fail_cor42)?;
        }
        info!("resuming after {done} of {} segments", cfg.segment_count());
    }
    let mut ck_sink = match &cfg.checkpoint {
        Some(p) => Some(open_sink(p, cfg.resume)?),
        None => None,
    };
    let mut out_sink = match &cfg.out {
        Some(p) => Some(open_sink(p, cfg.resume)?),
        None => None,
    };

    let base = primes_up_to(isqrt(cfg.hi.max(4)));
    let powers = proper_powers(cfg.lo, cfg.hi, &base);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let batch = (pool.current_num_threads() * 2) as u64;
    let total = cfg.segment_count();
    let mut records = Vec::new();
    let mut next = start;
    while next < total {
        let upto = (next + batch).min(total);
        let results: Vec<Result<SegmentResult>> = pool.install(|| {
            (next..upto)
                .into_par_iter()
                .map(|i| {
                    let (lo, hi) = cfg.segment(i);
                    process_segment(cfg, lo, hi, &base, &powers)
                })
                .collect()
        });
        for res in results {
            let seg = res?;
            summary.merge(&seg.summary);
            if let (Some(sink), Some(path)) = (out_sink.as_mut(), cfg.out.as_deref()) {
                for r in &seg.failures {
                    write_line(sink, path, r)?;
                }
                sink.flush().map_err(|e| Error::io(path, e))?;
            } else {
                records.extend(seg.failures);
            }
            if let (Some(sink), Some(path)) = (ck_sink.as_mut(), cfg.checkpoint.as_deref()) {
                let entry = CheckpointEntry {
                    segment_lo: seg.lo,
                    segment_hi: seg.hi,
                    summary_partial: seg.summary,
                };
                write_line(sink, path, &entry)?;
                sink.flush().map_err(|e| Error::io(path, e))?;
            }
        }
        info!("segments {upto}/{total}: {summary:?}");
        next = upto;
    }
    Ok(SweepOutcome {
        summary,
        records,
        resumed_segments: start,
    })
}

/// Reads a record file written by [`run_sweep`].
pub fn read_records(path: &Path) -> Result<Vec<SweepRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    BufReader::new(file)
        .lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line.map_err(|e| Error::io(path, e))?;
            serde_json::from_str(&line).map_err(|e| corrupt(path, i + 1, e.to_string()))
        })
        .collect()
}
