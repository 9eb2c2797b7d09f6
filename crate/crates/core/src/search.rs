//! Exhaustive and sampled scans over all additive endomaps of a ring,
//! looking for maps that pass a predicate chain without being weighted
//! Jordan homomorphisms.
//!
//! Work is split into fixed-size chunks of the map index space. Each chunk is
//! scanned independently (sampled chunks have their own RNG stream) and the
//! per-chunk tallies are folded in chunk order, so the result does not depend
//! on the thread count.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::addmap::{AdditiveMap, CompanionSolver};
use crate::checks::{is_weighted_jordan_hom, zero_jordan_pairs, PairScan, Witness, DEFAULT_PAIR_CAP};
use crate::error::{Error, Result};
use crate::linalg::{smith, ModMatrix};
use crate::report::{Report, ReportWitness};
use crate::ring::Ring;

/// Largest map space an exhaustive scan accepts.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 36;
pub const DEFAULT_QUICK_REJECT: usize = 32;
const EXHAUSTIVE_CHUNK: u64 = 1 << 16;
const SAMPLE_CHUNK: u64 = 1 << 12;
/// Zero-Jordan pairs drawn when the full pair list is too large to enumerate.
const SAMPLED_PAIRS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Surjective,
    Bijective,
    ZeroJordanPreserving,
    CompanionS,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Predicate::Surjective => "surjective",
            Predicate::Bijective => "bijective",
            Predicate::ZeroJordanPreserving => "zero_jordan_preserving",
            Predicate::CompanionS => "companion_s",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Sample { count: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub ring: Arc<Ring>,
    pub predicates: Vec<Predicate>,
    pub mode: SearchMode,
    pub seed: Option<u64>,
    pub threads: usize,
    /// Number of zero-Jordan pairs tried before anything else; 0 disables.
    pub quick_reject: usize,
    pub max_witnesses: usize,
    /// How many survivors to keep in the outcome.
    pub keep_survivors: usize,
}

impl SearchConfig {
    pub fn new(ring: Arc<Ring>, predicates: Vec<Predicate>, mode: SearchMode) -> Self {
        SearchConfig {
            ring,
            predicates,
            mode,
            seed: None,
            threads: default_threads(),
            quick_reject: DEFAULT_QUICK_REJECT,
            max_witnesses: 16,
            keep_survivors: 1024,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn quick_reject(mut self, pairs: usize) -> Self {
        self.quick_reject = pairs;
        self
    }

    pub fn keep_survivors(mut self, n: usize) -> Self {
        self.keep_survivors = n;
        self
    }

    /// `m^(d²)`, saturating.
    pub fn map_space(&self) -> u128 {
        let m = self.ring.modulus() as u128;
        let mut size: u128 = 1;
        for _ in 0..self.ring.rank() * self.ring.rank() {
            size = size.saturating_mul(m);
        }
        size
    }

    fn validate(&self) -> Result<u64> {
        if self.threads == 0 {
            return Err(Error::InvalidConfig("thread count must be positive".into()));
        }
        match self.mode {
            SearchMode::Exhaustive => {
                let size = self.map_space();
                if size > EXHAUSTIVE_LIMIT {
                    return Err(Error::TooLarge {
                        size,
                        cap: EXHAUSTIVE_LIMIT,
                    });
                }
                Ok(size as u64)
            }
            SearchMode::Sample { count } => {
                if self.seed.is_none() {
                    return Err(Error::InvalidConfig("sample mode needs a seed".into()));
                }
                Ok(count)
            }
        }
    }
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub report: Report,
    /// The first survivors in scan order, up to `keep_survivors`.
    pub survivors: Vec<AdditiveMap>,
    /// Every recorded counterexample, up to `max_witnesses`.
    pub counterexamples: Vec<AdditiveMap>,
}

pub fn search_counterexamples(config: &SearchConfig) -> Result<Report> {
    run_search(config).map(|o| o.report)
}

struct Scanner<'a> {
    ring: &'a Arc<Ring>,
    predicates: &'a [Predicate],
    // Zero-Jordan pairs with both entries nonzero, in canonical order.
    pairs: &'a [(Vec<u64>, Vec<u64>)],
    quick: usize,
    companion: Option<&'a CompanionSolver>,
}

#[derive(Default)]
struct Tally {
    scanned: u64,
    quick_rejected: u64,
    passed: Vec<u64>,
    survivors: u64,
    counterexamples: u64,
    kept_survivors: Vec<Vec<u64>>,
    kept_counterexamples: Vec<(u64, Vec<u64>, Option<Witness>)>,
}

struct Buffers {
    tx: Vec<u64>,
    ty: Vec<u64>,
    out: Vec<u64>,
}

impl Scanner<'_> {
    fn matvec(&self, data: &[u64], x: &[u64], out: &mut [u64]) {
        let d = self.ring.rank();
        let m = self.ring.modulus();
        for (r, o) in out.iter_mut().enumerate() {
            let row = &data[r * d..(r + 1) * d];
            *o = row.iter().zip(x).map(|(a, b)| a * b % m).sum::<u64>() % m;
        }
    }

    fn violates(&self, data: &[u64], pairs: &[(Vec<u64>, Vec<u64>)], buf: &mut Buffers) -> bool {
        pairs.iter().any(|(x, y)| {
            self.matvec(data, x, &mut buf.tx);
            self.matvec(data, y, &mut buf.ty);
            self.ring.jordan_into(&buf.tx, &buf.ty, &mut buf.out);
            buf.out.iter().any(|&c| c != 0)
        })
    }

    fn scan(&self, index: u64, data: &[u64], tally: &mut Tally, keep_survivors: usize, max_witnesses: usize, buf: &mut Buffers) {
        tally.scanned += 1;
        let quick = self.quick.min(self.pairs.len());
        let wants_zjp = self.predicates.contains(&Predicate::ZeroJordanPreserving);
        if wants_zjp && quick > 0 && self.violates(data, &self.pairs[..quick], buf) {
            tally.quick_rejected += 1;
            return;
        }
        let d = self.ring.rank();
        let m = self.ring.modulus();
        let mut map: Option<AdditiveMap> = None;
        for (k, p) in self.predicates.iter().enumerate() {
            let ok = match p {
                Predicate::Surjective => smith(&ModMatrix::from_raw(m, d, d, data.to_vec())).is_surjective(),
                Predicate::Bijective => smith(&ModMatrix::from_raw(m, d, d, data.to_vec())).is_unimodular(),
                Predicate::ZeroJordanPreserving => !self.violates(data, &self.pairs[quick..], buf),
                Predicate::CompanionS => {
                    let t = map.get_or_insert_with(|| self.to_map(data));
                    self.companion.expect("solver built for companion predicate").solve(t).is_some()
                }
            };
            if !ok {
                return;
            }
            tally.passed[k] += 1;
        }
        tally.survivors += 1;
        if tally.kept_survivors.len() < keep_survivors {
            tally.kept_survivors.push(data.to_vec());
        }
        let t = map.unwrap_or_else(|| self.to_map(data));
        let verdict = is_weighted_jordan_hom(&t);
        if !verdict.passed {
            tally.counterexamples += 1;
            if tally.kept_counterexamples.len() < max_witnesses {
                tally.kept_counterexamples.push((index, data.to_vec(), verdict.witness));
            }
        }
    }

    fn to_map(&self, data: &[u64]) -> AdditiveMap {
        let ring = self.ring.clone();
        AdditiveMap::new(ring.clone(), ring, ModMatrix::from_raw(self.ring.modulus(), self.ring.rank(), self.ring.rank(), data.to_vec()))
            .expect("square matrix of reduced entries")
    }
}

pub fn run_search(config: &SearchConfig) -> Result<SearchOutcome> {
    let total = config.validate()?;
    let start = std::time::Instant::now();
    let ring = &*config.ring;
    let d = ring.rank();
    let m = ring.modulus();
    let mut report = Report::new("search");
    report.seed = config.seed;

    let wants_zjp = config.predicates.contains(&Predicate::ZeroJordanPreserving);
    let pairs: Vec<(Vec<u64>, Vec<u64>)> = if wants_zjp {
        let scan = match zero_jordan_pairs(ring, PairScan::Exhaustive { cap: DEFAULT_PAIR_CAP }) {
            Ok(p) => p,
            Err(Error::TooLarge { .. }) => {
                report.note(format!(
                    "zero-Jordan pair list too large to enumerate; {SAMPLED_PAIRS} annihilator samples used, so zero_jordan_preserving is a sampled test"
                ));
                zero_jordan_pairs(
                    ring,
                    PairScan::Sampled {
                        seed: config.seed.unwrap_or(0),
                        samples: SAMPLED_PAIRS,
                    },
                )?
            }
            Err(e) => return Err(e),
        };
        // Pairs containing 0 are preserved by every additive map.
        scan.into_iter()
            .filter(|(x, y)| !x.is_zero() && !y.is_zero())
            .map(|(x, y)| (x.0, y.0))
            .collect()
    } else {
        Vec::new()
    };
    let companion = config
        .predicates
        .contains(&Predicate::CompanionS)
        .then(|| CompanionSolver::new(config.ring.clone()));
    let scanner = Scanner {
        ring: &config.ring,
        predicates: &config.predicates,
        pairs: &pairs,
        quick: config.quick_reject,
        companion: companion.as_ref(),
    };

    let chunk = match config.mode {
        SearchMode::Exhaustive => EXHAUSTIVE_CHUNK,
        SearchMode::Sample { .. } => SAMPLE_CHUNK,
    };
    let chunks = total.div_ceil(chunk);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let n_pred = config.predicates.len();
    let keep = config.keep_survivors;
    let max_w = config.max_witnesses;
    let tallies: Vec<Tally> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * chunk;
                let hi = (lo + chunk).min(total);
                let mut tally = Tally {
                    passed: vec![0; n_pred],
                    ..Default::default()
                };
                let mut buf = Buffers {
                    tx: vec![0; d],
                    ty: vec![0; d],
                    out: vec![0; d],
                };
                let mut data = vec![0u64; d * d];
                match config.mode {
                    SearchMode::Exhaustive => {
                        // Row-major mixed radix, entry 0 most significant.
                        let mut rest = lo;
                        for e in data.iter_mut().rev() {
                            *e = rest % m;
                            rest /= m;
                        }
                        for index in lo..hi {
                            scanner.scan(index, &data, &mut tally, keep, max_w, &mut buf);
                            for e in data.iter_mut().rev() {
                                *e += 1;
                                if *e < m {
                                    break;
                                }
                                *e = 0;
                            }
                        }
                    }
                    SearchMode::Sample { .. } => {
                        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.expect("validated"));
                        rng.set_stream(c);
                        for index in lo..hi {
                            data.iter_mut().for_each(|e| *e = rng.gen_range(0..m));
                            scanner.scan(index, &data, &mut tally, keep, max_w, &mut buf);
                        }
                    }
                }
                tally
            })
            .collect()
    });

    let mut total_tally = Tally {
        passed: vec![0; n_pred],
        ..Default::default()
    };
    for t in tallies {
        total_tally.scanned += t.scanned;
        total_tally.quick_rejected += t.quick_rejected;
        total_tally.survivors += t.survivors;
        total_tally.counterexamples += t.counterexamples;
        for (a, b) in total_tally.passed.iter_mut().zip(&t.passed) {
            *a += b;
        }
        let room = keep - total_tally.kept_survivors.len();
        total_tally.kept_survivors.extend(t.kept_survivors.into_iter().take(room));
        let room = max_w - total_tally.kept_counterexamples.len();
        total_tally.kept_counterexamples.extend(t.kept_counterexamples.into_iter().take(room));
    }

    report.set("maps_scanned", total_tally.scanned);
    report.set("quick_rejected", total_tally.quick_rejected);
    for (p, n) in config.predicates.iter().zip(&total_tally.passed) {
        report.set(format!("passed.{}", p.name()), *n);
    }
    report.set("survivors", total_tally.survivors);
    report.set("counterexamples", total_tally.counterexamples);
    report.set("weighted_jordan_homs", total_tally.survivors - total_tally.counterexamples);
    if wants_zjp {
        report.set("zero_jordan_pairs_checked", pairs.len() as u64);
    }
    report.passed = total_tally.counterexamples == 0;

    let to_map = |data: &[u64]| scanner.to_map(data);
    let mut counterexamples = Vec::new();
    for (index, data, witness) in &total_tally.kept_counterexamples {
        let map = to_map(data);
        let mut elements = Vec::new();
        match witness {
            Some(Witness::Element { x }) => elements.push(x.clone()),
            Some(Witness::Pair { x, y }) => elements.extend([x.clone(), y.clone()]),
            None => {}
        }
        report.witnesses.push(ReportWitness {
            label: format!("map #{index} passes the predicate chain but is not a weighted Jordan homomorphism"),
            ring: ring.recipe().cloned(),
            map: Some(map.matrix().to_rows()),
            elements,
        });
        counterexamples.push(map);
    }
    let survivors = total_tally.kept_survivors.iter().map(|d| to_map(d)).collect();
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(SearchOutcome {
        report,
        survivors,
        counterexamples,
    })
}
