//! The fourth Capelli polynomial, iterated Jordan chains in `M_3(F_p)`, and
//! an exhaustive verifier for the chain-independence lemma over prime fields.
//!
//! The lemma is stated over an algebraically closed field. Here it is
//! instantiated over `F_p` by running through every admissible parameter
//! tuple of each Jordan-form case, which is evidence at desk scale and not a
//! proof; reports say so in their notes.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::addmap::random_element;
use crate::error::{Error, Result};
use crate::linalg::rank_mod_prime;
use crate::modular::is_prime;
use crate::report::{Report, ReportWitness};
use crate::ring::{Element, Ring, RingRecipe};

/// `(n, p)` for a ring built as `matrix(zm(p), n)` with `p` prime.
fn matrix_over_prime(ring: &Ring) -> Result<(usize, u64)> {
    match ring.matrix_shape() {
        Some((n, RingRecipe::Zm { m })) if is_prime(*m) => Ok((n, *m)),
        Some((_, RingRecipe::Zm { m })) => Err(Error::CharUnsupported(format!("modulus {m} is not prime"))),
        _ => Err(Error::CharUnsupported("expected a matrix ring over a prime field".into())),
    }
}

/// `Σ_{σ ∈ S_4} sgn(σ) x_{σ1} y_1 x_{σ2} y_2 x_{σ3} y_3 x_{σ4}`.
pub fn capelli4(ring: &Ring, xs: &[Element; 4], ys: &[Element; 3]) -> Result<Element> {
    matrix_over_prime(ring)?;
    for e in xs.iter().chain(ys) {
        if e.len() != ring.rank() {
            return Err(Error::DimensionMismatch {
                expected: ring.rank(),
                got: e.len(),
            });
        }
    }
    let mut acc = ring.zero();
    for (i, x) in xs.iter().enumerate() {
        capelli_step(ring, xs, ys, x.clone(), 1 << i, false, &mut acc);
    }
    Ok(acc)
}

// `prefix` is x_{σ1} y_1 ... x_{σk} with `used` the chosen indices; prefixes are shared.
fn capelli_step(ring: &Ring, xs: &[Element; 4], ys: &[Element; 3], prefix: Element, used: u8, odd: bool, acc: &mut Element) {
    let k = used.count_ones() as usize;
    if k == 4 {
        *acc = if odd { ring.sub_(acc, &prefix) } else { ring.add_(acc, &prefix) };
        return;
    }
    let with_y = ring.mul_(&prefix, &ys[k - 1]);
    for (i, x) in xs.iter().enumerate() {
        if used & (1 << i) != 0 {
            continue;
        }
        // Inversions added by placing i after every already-used larger index.
        let larger = (used >> (i + 1)).count_ones();
        capelli_step(ring, xs, ys, ring.mul_(&with_y, x), used | (1 << i), odd ^ (larger % 2 == 1), acc);
    }
}

/// `[t, t∘y, (t∘y)∘y, ((t∘y)∘y)∘y]`.
pub fn s_y_chain(ring: &Ring, t: &Element, y: &Element) -> Result<[Element; 4]> {
    let c1 = ring.jordan(t, y)?;
    let c2 = ring.jordan_(&c1, y);
    let c3 = ring.jordan_(&c2, y);
    Ok([t.clone(), c1, c2, c3])
}

/// Linear dependence over `F_p` by elimination.
pub fn dependent_rank(ring: &Ring, elements: &[Element]) -> Result<bool> {
    let p = ring.modulus();
    if !is_prime(p) {
        return Err(Error::CharUnsupported(format!("modulus {p} is not prime")));
    }
    let vectors: Vec<Vec<u64>> = elements.iter().map(|e| e.0.clone()).collect();
    Ok(rank_mod_prime(&vectors, p) < elements.len())
}

/// Reports dependence iff `capelli4(xs, ys)` vanishes on `trials` random
/// `y`-triples. One-sided: a nonzero value proves independence.
pub fn dependent_capelli(ring: &Ring, elements: &[Element; 4], trials: usize, seed: u64) -> Result<bool> {
    matrix_over_prime(ring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let ys = [
            random_element(ring, &mut rng),
            random_element(ring, &mut rng),
            random_element(ring, &mut rng),
        ];
        if !capelli4(ring, elements, &ys)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A Jordan-form case of the lemma: the matrix `t`, the probe `y`, and the parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainWitness {
    pub case: u8,
    pub lambdas: Vec<u64>,
    pub t: Element,
    pub y: Element,
}

/// `M_3(F_p)` with basis `e11, e12, ..., e33`.
pub fn m3(p: u64) -> Result<Ring> {
    RingRecipe::matrix_over_zm(p, 3).build()
}

fn mat3(p: u64, rows: [[i64; 3]; 3]) -> Element {
    let m = p as i64;
    Element(rows.iter().flatten().map(|v| v.rem_euclid(m) as u64).collect())
}

fn check_char(p: u64) -> Result<()> {
    if !is_prime(p) || p == 2 || p == 3 {
        return Err(Error::CharUnsupported(format!("need a prime p other than 2 and 3, got {p}")));
    }
    Ok(())
}

fn expect_params(case: u8, lambdas: &[u64], n: usize) -> Result<()> {
    if lambdas.len() != n {
        return Err(Error::SideConditionViolated(format!(
            "case {case} takes {n} parameter(s), got {}",
            lambdas.len()
        )));
    }
    Ok(())
}

pub fn lemma_m1_witness(case: u8, lambdas: &[u64], p: u64) -> Result<ChainWitness> {
    check_char(p)?;
    let l: Vec<i64> = lambdas.iter().map(|&v| (v % p) as i64).collect();
    const LOWER_SHIFT: [[i64; 3]; 3] = [[0, 0, 0], [1, 0, 0], [0, 1, 0]];
    let (t, y) = match case {
        1 => {
            expect_params(case, lambdas, 1)?;
            let a = l[0];
            ([[a, 1, 0], [0, a, 1], [0, 0, a]], LOWER_SHIFT)
        }
        2 => {
            expect_params(case, lambdas, 2)?;
            let (a, b) = (l[0], l[1]);
            ([[a, 1, 0], [0, a, 0], [0, 0, b]], LOWER_SHIFT)
        }
        3 => {
            expect_params(case, lambdas, 3)?;
            let (a, b, c) = (l[0], l[1], l[2]);
            if a == b && b == c {
                return Err(Error::SideConditionViolated("case 3 needs λ1, λ2, λ3 not all equal".into()));
            }
            if (a + b + c) % p as i64 == 0 {
                return Err(Error::SideConditionViolated("case 3 needs λ1 + λ2 + λ3 != 0".into()));
            }
            ([[a, 0, 0], [0, b, 0], [0, 0, c]], [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
        }
        4 => {
            expect_params(case, lambdas, 2)?;
            let (a, b) = (l[0], l[1]);
            if a == 0 {
                return Err(Error::SideConditionViolated("case 4 needs λ1 != 0".into()));
            }
            ([[a, 0, 0], [0, b, 0], [0, 0, -a - b]], [[1, 0, 0], [1, 0, 0], [0, 1, 0]])
        }
        _ => return Err(Error::SideConditionViolated(format!("no case {case}; cases are 1 to 4"))),
    };
    Ok(ChainWitness {
        case,
        lambdas: l.iter().map(|&v| v as u64).collect(),
        t: mat3(p, t),
        y: mat3(p, y),
    })
}

/// The closed-form values of `t∘y`, `(t∘y)∘y`, `((t∘y)∘y)∘y` for each case,
/// tabulated independently of the ring multiplication.
pub fn tabulated_chain(case: u8, lambdas: &[u64], p: u64) -> Result<[Element; 3]> {
    let l: Vec<i64> = lambdas.iter().map(|&v| (v % p) as i64).collect();
    let tab = match case {
        1 => {
            expect_params(case, lambdas, 1)?;
            let a = l[0];
            [
                [[1, 0, 0], [2 * a, 2, 0], [0, 2 * a, 1]],
                [[0, 0, 0], [3, 0, 0], [4 * a, 3, 0]],
                [[0, 0, 0], [0, 0, 0], [6, 0, 0]],
            ]
        }
        2 => {
            expect_params(case, lambdas, 2)?;
            let (a, b) = (l[0], l[1]);
            [
                [[1, 0, 0], [2 * a, 1, 0], [0, a + b, 0]],
                [[0, 0, 0], [2, 0, 0], [3 * a + b, 1, 0]],
                [[0, 0, 0], [0, 0, 0], [3, 0, 0]],
            ]
        }
        3 => {
            expect_params(case, lambdas, 3)?;
            let (a, b, c) = (l[0], l[1], l[2]);
            [
                [[0, 0, a + c], [a + b, 0, 0], [0, b + c, 0]],
                [[0, a + b + 2 * c, 0], [0, 0, 2 * a + b + c], [a + 2 * b + c, 0, 0]],
                [
                    [2 * a + 3 * b + 3 * c, 0, 0],
                    [0, 3 * a + 2 * b + 3 * c, 0],
                    [0, 0, 3 * a + 3 * b + 2 * c],
                ],
            ]
        }
        4 => {
            expect_params(case, lambdas, 2)?;
            let (a, b) = (l[0], l[1]);
            [
                [[2 * a, 0, 0], [a + b, 0, 0], [0, -a, 0]],
                [[4 * a, 0, 0], [3 * a + b, 0, 0], [b, 0, 0]],
                [[8 * a, 0, 0], [7 * a + b, 0, 0], [3 * a + 2 * b, 0, 0]],
            ]
        }
        _ => return Err(Error::SideConditionViolated(format!("no case {case}; cases are 1 to 4"))),
    };
    Ok(tab.map(|m| mat3(p, m)))
}

/// Every parameter tuple satisfying the case's side conditions, in lexicographic order.
pub fn admissible_lambdas(case: u8, p: u64) -> Vec<Vec<u64>> {
    let all = |n: usize| -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..p).map(move |v| {
                        let mut t = prefix.clone();
                        t.push(v);
                        t
                    })
                })
                .collect();
        }
        out
    };
    match case {
        1 => all(1),
        2 => all(2),
        3 => all(3)
            .into_iter()
            .filter(|l| !(l[0] == l[1] && l[1] == l[2]) && (l[0] + l[1] + l[2]) % p != 0)
            .collect(),
        4 => all(2).into_iter().filter(|l| l[0] != 0).collect(),
        _ => Vec::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaMode {
    All,
    Sampled { samples: usize },
}

/// Forward direction: every admissible (or sampled) tuple of each case gives
/// an independent chain that matches the tabulated matrices. Converse: for
/// scalar `t` and `scalar_trials` random `y` the chain is dependent.
pub fn verify_lemma_m1(p: u64, mode: LambdaMode, seed: u64, scalar_trials: usize) -> Result<Report> {
    check_char(p)?;
    let start = std::time::Instant::now();
    let ring = Arc::new(m3(p)?);
    let mut report = Report::new(format!("lemma-m1(p={p})"));
    report.seed = Some(seed);
    report.note("finite prime-field instance: evidence for the lemma, not a proof over algebraically closed fields");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for case in 1..=4u8 {
        let mut tuples = admissible_lambdas(case, p);
        if let LambdaMode::Sampled { samples } = mode {
            tuples = (0..samples.min(tuples.len()))
                .map(|_| tuples[rng.gen_range(0..tuples.len())].clone())
                .collect();
        }
        let outcomes: Vec<(Vec<u64>, bool, bool)> = tuples
            .par_iter()
            .map(|l| {
                let w = lemma_m1_witness(case, l, p).expect("admissible tuple");
                let chain = s_y_chain(&ring, &w.t, &w.y).expect("matching dimensions");
                let tab = tabulated_chain(case, l, p).expect("admissible tuple");
                let matches = chain[1..] == tab[..];
                let independent = !dependent_rank(&ring, &chain).expect("prime modulus");
                (l.clone(), matches, independent)
            })
            .collect();
        for (l, matches, independent) in outcomes {
            report.count(format!("case{case}.tuples"), 1);
            report.count(format!("case{case}.independent"), independent as u64);
            report.count(format!("case{case}.matches_table"), matches as u64);
            if !(matches && independent) {
                report.fail(ReportWitness {
                    label: format!("case {case} λ={l:?} matches_table={matches} independent={independent}"),
                    ..Default::default()
                });
            }
        }
    }

    for _ in 0..scalar_trials {
        let a = rng.gen_range(0..p);
        let t = ring.scale(a, &ring.one());
        let y = random_element(&ring, &mut rng);
        let chain = s_y_chain(&ring, &t, &y)?;
        let dep = dependent_rank(&ring, &chain)?;
        report.count("scalar.trials", 1);
        report.count("scalar.dependent", dep as u64);
        if !dep {
            report.fail(ReportWitness {
                label: "scalar t with independent chain".into(),
                elements: vec![t, y],
                ..Default::default()
            });
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
