//! Seeded random search over admissible weight vectors.
//!
//! Each candidate index `c` gets its own seed `derive_seed(seed, c)`, so the
//! output does not depend on the worker count or on completion order.
//! Candidates are evaluated in parallel batches and accepted strictly in
//! index order until `count` records have been written.
//!
//! CSV columns, in order:
//! `dim,q_red,lambda,vertices,hstar,reflexive,idp,unimodal,wl,type_decomposable,seed,elapsed_ms`.
//! Vector-valued cells hold the same JSON text as the JSONL form.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ehrhart::hstar_from_points;
use crate::error::Error;
use crate::idp::closure_from_points;
use crate::json::{ints, Int};
use crate::lefschetz::{graded_basis, verdict_for_basis};
use crate::simplex::{build_delta_q, is_reflexive, SimplexType, WeightVector};
use crate::weights::{is_type_decomposable, sample_one};

pub const DEFAULT_WL_TRIALS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Jsonl,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "jsonl" => Ok(OutputFormat::Jsonl),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Precondition(format!(
                "unknown output format `{other}` (expected jsonl or csv)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub require_idp: bool,
    pub skip_decomposable: bool,
    pub skip_wl: bool,
    pub format: OutputFormat,
    /// 0 uses every available core.
    pub workers: usize,
    pub wl_trials: usize,
    /// Reject sampled weights whose sum (the normalized volume) exceeds this.
    pub max_volume: Option<BigInt>,
    /// Fill `elapsed_ms`; off by default so output is byte-reproducible.
    pub record_timing: bool,
    /// Give up after this many candidates; defaults to `1000 * count`.
    pub max_candidates: Option<usize>,
}

impl SearchConfig {
    pub fn new(dim: usize, count: usize, seed: u64) -> Self {
        SearchConfig {
            dim,
            count,
            seed,
            require_idp: false,
            skip_decomposable: false,
            skip_wl: false,
            format: OutputFormat::Jsonl,
            workers: 0,
            wl_trials: DEFAULT_WL_TRIALS,
            max_volume: None,
            record_timing: false,
            max_candidates: None,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.dim < 1 {
            return Err(Error::Precondition("search dimension must be at least 1".into()));
        }
        if self.count < 1 {
            return Err(Error::Precondition("search count must be at least 1".into()));
        }
        if self.max_volume.as_ref().is_some_and(|m| m < &BigInt::from(self.dim + 1)) {
            return Err(Error::Precondition(format!(
                "max volume below the smallest possible volume {}",
                self.dim + 1
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub dim: usize,
    pub q_red: Vec<Int>,
    pub lambda: Int,
    pub vertices: Vec<Vec<Int>>,
    pub hstar: Vec<u64>,
    pub reflexive: bool,
    pub idp: bool,
    pub unimodal: bool,
    /// `exists`, `not_exists`, `undetermined`, or `skipped`.
    pub wl: String,
    pub type_decomposable: bool,
    /// Candidate seed: `sample_one(dim, ChaCha8Rng::seed_from_u64(seed), ..)`
    /// reproduces the weight vector.
    pub seed: Int,
    pub elapsed_ms: Option<u64>,
}

impl SearchRecord {
    /// Cross-field consistency: reflexive implies palindromic h*, and a weak
    /// Lefschetz element implies unimodal h*.
    pub fn check(&self) -> Result<(), String> {
        let h = &self.hstar;
        let palindromic = h.iter().eq(h.iter().rev());
        if self.reflexive && !palindromic {
            return Err(format!("reflexive but h* {h:?} is not palindromic"));
        }
        if self.wl == "exists" && !self.unimodal {
            return Err(format!("weak Lefschetz element exists but h* {h:?} is not unimodal"));
        }
        if self.q_red.len() != self.dim + 1 || self.hstar.len() != self.dim + 1 {
            return Err("record lengths disagree with its dimension".into());
        }
        Ok(())
    }

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.dim.to_string(),
            json_cell(&self.q_red),
            json_cell(&self.lambda),
            json_cell(&self.vertices),
            json_cell(&self.hstar),
            self.reflexive.to_string(),
            self.idp.to_string(),
            self.unimodal.to_string(),
            self.wl.clone(),
            self.type_decomposable.to_string(),
            self.seed.0.to_string(),
            self.elapsed_ms.map(|t| t.to_string()).unwrap_or_default(),
        ]
    }
}

fn json_cell<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

pub const CSV_COLUMNS: [&str; 12] = [
    "dim",
    "q_red",
    "lambda",
    "vertices",
    "hstar",
    "reflexive",
    "idp",
    "unimodal",
    "wl",
    "type_decomposable",
    "seed",
    "elapsed_ms",
];

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("{0}")]
    Core(#[from] Error),

    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),

    #[error("cannot write output: {0}")]
    Csv(#[from] csv::Error),

    #[error("invariant violated for weights {weights}: {message}")]
    Invariant { weights: String, message: String },

    #[error("only {accepted} of {wanted} records accepted after {candidates} candidates")]
    Exhausted {
        accepted: usize,
        wanted: usize,
        candidates: usize,
    },
}

/// splitmix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

pub fn derive_seed(seed: u64, candidate: u64) -> u64 {
    splitmix64(seed ^ splitmix64(candidate))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Skip {
    Decomposable,
    NotIdp,
    TooLarge,
}

enum Outcome {
    Record(Box<SearchRecord>),
    Skipped(Skip),
}

fn evaluate(config: &SearchConfig, candidate: u64) -> Result<Outcome, SearchError> {
    let start = Instant::now();
    let seed = derive_seed(config.seed, candidate);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = sample_one(config.dim, &mut rng, config.max_volume.as_ref());
    let invariant = |message: String| SearchError::Invariant {
        weights: q.to_string(),
        message,
    };

    let t = SimplexType::new(q.clone(), BigInt::one()).map_err(|e| invariant(e.to_string()))?;
    let decomposable = is_type_decomposable(&t);
    if config.skip_decomposable && decomposable {
        return Ok(Outcome::Skipped(Skip::Decomposable));
    }

    let s = build_delta_q(&q).map_err(|e| invariant(e.to_string()))?;
    if !is_reflexive(&s).0 {
        return Err(invariant("constructed simplex is not reflexive".into()));
    }
    let basis = match graded_basis(&s) {
        Ok(b) => b,
        Err(Error::Overflow(_)) => return Ok(Outcome::Skipped(Skip::TooLarge)),
        Err(e) => return Err(e.into()),
    };
    let points: Vec<_> = basis.levels().iter().flatten().cloned().collect();
    let h = hstar_from_points(config.dim, &points);
    let idp = closure_from_points(points);
    if config.require_idp && !idp.closed {
        return Ok(Outcome::Skipped(Skip::NotIdp));
    }
    let wl = if config.skip_wl {
        "skipped".to_string()
    } else {
        verdict_for_basis(&basis, seed, config.wl_trials).verdict.tag().to_string()
    };

    let record = SearchRecord {
        dim: config.dim,
        q_red: ints(q.entries()),
        lambda: Int(BigInt::one()),
        vertices: s.vertices().iter().map(|v| ints(v)).collect(),
        hstar: h.coeffs().to_vec(),
        reflexive: true,
        idp: idp.closed,
        unimodal: h.is_unimodal(),
        wl,
        type_decomposable: decomposable,
        seed: Int(BigInt::from(seed)),
        elapsed_ms: config.record_timing.then(|| start.elapsed().as_millis() as u64),
    };
    record.check().map_err(invariant)?;
    Ok(Outcome::Record(Box::new(record)))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchSummary {
    pub dim: usize,
    pub seed: u64,
    pub accepted: usize,
    pub candidates: usize,
    pub skipped_decomposable: usize,
    pub skipped_not_idp: usize,
    /// Volume beyond `ehrhart::MAX_ENUMERABLE_VOLUME`.
    pub skipped_too_large: usize,
    pub unimodal: usize,
    pub idp: usize,
    pub type_decomposable: usize,
    pub wl: BTreeMap<String, usize>,
    /// Records with non-unimodal h*, in candidate order.
    pub non_unimodal: Vec<SearchRecord>,
}

impl SearchSummary {
    pub fn unimodality_fraction(&self) -> f64 {
        if self.accepted == 0 {
            return 0.0;
        }
        self.unimodal as f64 / self.accepted as f64
    }

    fn add(&mut self, r: &SearchRecord) {
        self.accepted += 1;
        self.unimodal += r.unimodal as usize;
        self.idp += r.idp as usize;
        self.type_decomposable += r.type_decomposable as usize;
        *self.wl.entry(r.wl.clone()).or_default() += 1;
        if !r.unimodal {
            self.non_unimodal.push(r.clone());
        }
    }
}

impl fmt::Display for SearchSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.non_unimodal.is_empty() {
            writeln!(f, "non-unimodal h*: none")?;
        } else {
            writeln!(f, "non-unimodal h*: {}", self.non_unimodal.len())?;
            for r in &self.non_unimodal {
                let q: Vec<String> = r.q_red.iter().map(|x| x.0.to_string()).collect();
                writeln!(f, "  q=({}) h*={:?} seed={}", q.join(","), r.hstar, r.seed.0)?;
            }
        }
        writeln!(
            f,
            "dim {} seed {}: {} records from {} candidates",
            self.dim, self.seed, self.accepted, self.candidates
        )?;
        writeln!(
            f,
            "skipped: {} type-decomposable, {} not integrally closed, {} too large to enumerate",
            self.skipped_decomposable, self.skipped_not_idp, self.skipped_too_large
        )?;
        writeln!(
            f,
            "unimodal: {}/{} ({:.2}%)",
            self.unimodal,
            self.accepted,
            100.0 * self.unimodality_fraction()
        )?;
        writeln!(f, "integrally closed: {}/{}", self.idp, self.accepted)?;
        writeln!(f, "type-decomposable: {}/{}", self.type_decomposable, self.accepted)?;
        let wl: Vec<String> = self.wl.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "weak Lefschetz: {}", wl.join(" "))
    }
}

enum Sink<W: Write> {
    Jsonl(W),
    Csv(Box<csv::Writer<W>>),
}

impl<W: Write> Sink<W> {
    fn new(out: W, format: OutputFormat) -> Result<Self, SearchError> {
        Ok(match format {
            OutputFormat::Jsonl => Sink::Jsonl(out),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(CSV_COLUMNS)?;
                Sink::Csv(Box::new(w))
            }
        })
    }

    fn write(&mut self, r: &SearchRecord) -> Result<(), SearchError> {
        match self {
            Sink::Jsonl(w) => {
                serde_json::to_writer(&mut *w, r).map_err(io::Error::from)?;
                w.write_all(b"\n")?;
            }
            Sink::Csv(w) => w.write_record(r.csv_row())?,
        }
        Ok(())
    }

    fn finish(self) -> Result<(), SearchError> {
        match self {
            Sink::Jsonl(mut w) => w.flush()?,
            Sink::Csv(mut w) => w.flush()?,
        }
        Ok(())
    }
}

/// Runs the pipeline and streams accepted records to `out`.
///
/// Per candidate: sample a reduced weight vector, optionally drop it when its
/// type splits, build `Delta_Q` and require reflexivity, test integral
/// closure (optionally dropping non-closed ones), then record h*,
/// unimodality and the weak Lefschetz verdict.
pub fn run_search<W: Write>(config: &SearchConfig, out: W) -> Result<SearchSummary, SearchError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    let limit = config.max_candidates.unwrap_or(config.count.saturating_mul(1000));
    let batch = (pool.current_num_threads() * 8).max(32);

    let mut sink = Sink::new(out, config.format)?;
    let mut summary = SearchSummary {
        dim: config.dim,
        seed: config.seed,
        ..Default::default()
    };
    let mut next = 0usize;
    while summary.accepted < config.count {
        if next >= limit {
            return Err(SearchError::Exhausted {
                accepted: summary.accepted,
                wanted: config.count,
                candidates: next,
            });
        }
        let end = (next + batch).min(limit);
        let outcomes: Vec<Result<Outcome, SearchError>> =
            pool.install(|| (next..end).into_par_iter().map(|c| evaluate(config, c as u64)).collect());
        for outcome in outcomes {
            if summary.accepted == config.count {
                break;
            }
            summary.candidates += 1;
            match outcome? {
                Outcome::Skipped(Skip::Decomposable) => summary.skipped_decomposable += 1,
                Outcome::Skipped(Skip::NotIdp) => summary.skipped_not_idp += 1,
                Outcome::Skipped(Skip::TooLarge) => summary.skipped_too_large += 1,
                Outcome::Record(r) => {
                    sink.write(&r)?;
                    summary.add(&r);
                }
            }
        }
        next = end;
    }
    sink.finish()?;
    Ok(summary)
}

pub fn run_search_to_path(config: &SearchConfig, path: &Path) -> Result<SearchSummary, SearchError> {
    let file = File::create(path)?;
    run_search(config, BufWriter::new(file))
}

/// Samples a weight vector from a record's candidate seed.
pub fn replay_weights(dim: usize, seed: u64, max_volume: Option<&BigInt>) -> WeightVector {
    sample_one(dim, &mut ChaCha8Rng::seed_from_u64(seed), max_volume)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::enumerate_reduced_weights;

    fn run(config: &SearchConfig) -> (SearchSummary, String) {
        let mut buf = Vec::new();
        let summary = run_search(config, &mut buf).unwrap();
        (summary, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn dim2_records_are_unimodal_reflexive() {
        let mut config = SearchConfig::new(2, 50, 7);
        config.require_idp = true;
        let (summary, text) = run(&config);
        assert_eq!(summary.accepted, 50);
        assert_eq!(summary.unimodal, 50);
        let all = enumerate_reduced_weights(2);
        for line in text.lines() {
            let r: SearchRecord = serde_json::from_str(line).unwrap();
            assert!(r.reflexive && r.idp && r.unimodal);
            let q = WeightVector::new(r.q_red.iter().map(|x| x.0.clone()).collect()).unwrap();
            assert!(all.contains(&q));
            r.check().unwrap();
        }
    }

    #[test]
    fn output_independent_of_worker_count() {
        let mut a = SearchConfig::new(4, 30, 11);
        a.workers = 1;
        let mut b = a.clone();
        b.workers = 3;
        assert_eq!(run(&a).1, run(&b).1);
    }

    #[test]
    fn record_seed_replays_weights() {
        let config = SearchConfig::new(3, 5, 3);
        let (_, text) = run(&config);
        for line in text.lines() {
            let r: SearchRecord = serde_json::from_str(line).unwrap();
            let seed: u64 = r.seed.0.to_string().parse().unwrap();
            let q = replay_weights(3, seed, None);
            assert_eq!(ints(q.entries()), r.q_red);
        }
    }

    #[test]
    fn csv_has_fixed_header() {
        let mut config = SearchConfig::new(2, 3, 1);
        config.format = OutputFormat::Csv;
        config.skip_wl = true;
        let (_, text) = run(&config);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(lines.count(), 3);
        assert!(text.contains(",skipped,"));
    }

    #[test]
    fn skip_decomposable_filters() {
        let mut config = SearchConfig::new(3, 20, 5);
        config.skip_decomposable = true;
        let (summary, _) = run(&config);
        assert_eq!(summary.type_decomposable, 0);
        assert_eq!(summary.candidates, 20 + summary.skipped_decomposable);
    }

    #[test]
    fn bad_configs_rejected() {
        let config = SearchConfig::new(2, 0, 1);
        assert!(matches!(run_search(&config, Vec::new()), Err(SearchError::Core(_))));
        let mut config = SearchConfig::new(2, 1, 1);
        config.max_volume = Some(BigInt::from(2));
        assert!(matches!(run_search(&config, Vec::new()), Err(SearchError::Core(_))));
    }

    #[test]
    fn check_catches_inconsistent_records() {
        let mut config = SearchConfig::new(2, 1, 1);
        config.skip_wl = true;
        let (_, text) = run(&config);
        let mut r: SearchRecord = serde_json::from_str(text.trim()).unwrap();
        r.hstar = vec![1, 2, 3];
        assert!(r.check().is_err());
        r.hstar = vec![1, 0, 1];
        r.unimodal = false;
        r.wl = "exists".into();
        assert!(r.check().is_err());
    }
}
