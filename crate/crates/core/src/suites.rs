//! Named verification suites. Each runs one group of checks end to end and
//! returns a single report.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::addmap::{exists_companion_s, is_companion, random_element, AdditiveMap, CompanionSolver};
use crate::capelli::{dependent_capelli, dependent_rank, m3, verify_lemma_m1, LambdaMode};
use crate::checks::{
    check_prop_pz, is_jordan_hom, is_weighted_jordan_hom, jordan_idempotent_span, lemma_l0_equivalences,
    preserves_zero_jordan_pairs, satisfies_txy, zero_jordan_pairs, BiadditiveTable, PairScan, PzVariant,
};
use crate::error::{Error, Result};
use crate::gallery::{
    char2_example, corollary_c1_certificate, grassmann_example, jordan_kind, make_weighted_jh, weighted_jh_catalogue,
    JordanKind,
};
use crate::report::{Report, ReportWitness};
use crate::ring::{Element, Ring, RingRecipe};
use crate::search::{default_threads, run_search, Predicate, SearchConfig, SearchMode};

pub const SUITES: [&str; 10] = [
    "ring-axioms",
    "lemma-l0",
    "thm-tidem-m2f3",
    "cor-c1-certificates",
    "prop-pz",
    "lemma-m1",
    "grassmann",
    "char2",
    "mt3-sampled",
    "capelli-agreement",
];

pub const DEFAULT_SEED: u64 = 1;
/// `M_3(F_5)` has 5⁹ elements, above the ring module's default enumeration cap.
pub const SPAN_CAP: u128 = 4_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuiteOverrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    /// Restricts suites that range over several primes to this one.
    pub p: Option<u64>,
    /// Replaces the suite's default sample count.
    pub samples: Option<u64>,
}

pub fn run_suite(name: &str, overrides: &SuiteOverrides) -> Result<Report> {
    let start = std::time::Instant::now();
    let seed = overrides.seed.unwrap_or(DEFAULT_SEED);
    let threads = overrides.threads.unwrap_or_else(default_threads);
    let samples = |default: u64| overrides.samples.unwrap_or(default);
    let mut report = match name {
        "ring-axioms" => ring_axioms(seed, samples(10_000))?,
        "lemma-l0" => lemma_l0(seed, samples(1_000))?,
        "thm-tidem-m2f3" => thm_tidem_m2f3(threads)?,
        "cor-c1-certificates" => certificates()?,
        "prop-pz" => prop_pz()?,
        "lemma-m1" => lemma_m1(overrides.p, seed, samples(1_000))?,
        "grassmann" => grassmann(overrides.p)?,
        "char2" => char2(threads)?,
        "mt3-sampled" => mt3_sampled(seed, threads, samples(1_000_000))?,
        "capelli-agreement" => capelli_agreement(seed, samples(10_000))?,
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    report.name = name.to_string();
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn arc(recipe: RingRecipe) -> Result<Arc<Ring>> {
    Ok(Arc::new(recipe.build()?))
}

fn random_unit(ring: &Ring, rng: &mut impl Rng) -> Element {
    loop {
        let u = random_element(ring, rng);
        if ring.try_inverse(&u).is_some() {
            return u;
        }
    }
}

fn map_witness(label: impl Into<String>, t: &AdditiveMap, elements: Vec<Element>) -> ReportWitness {
    ReportWitness {
        label: label.into(),
        ring: t.domain().recipe().cloned(),
        map: Some(t.matrix().to_rows()),
        elements,
    }
}

fn ring_axioms(seed: u64, samples: u64) -> Result<Report> {
    let mut report = Report::new("ring-axioms");
    report.seed = Some(seed);
    let recipes = [
        ("z7", RingRecipe::zm(7)),
        ("z12", RingRecipe::zm(12)),
        ("m2f3", RingRecipe::matrix_over_zm(3, 2)),
        ("m2z9", RingRecipe::matrix_over_zm(9, 2)),
        ("m3f5", RingRecipe::matrix_over_zm(5, 3)),
        ("ut2f3", RingRecipe::upper_triangular(RingRecipe::zm(3), 2)),
        ("grassmann2f3", RingRecipe::grassmann2(RingRecipe::zm(3))),
        ("m2_grassmann2f3", RingRecipe::matrix(RingRecipe::grassmann2(RingRecipe::zm(3)), 2)),
        ("z3_x_m2f3", RingRecipe::product(RingRecipe::zm(3), RingRecipe::matrix_over_zm(3, 2))),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (tag, recipe) in recipes {
        let r = recipe.build()?;
        let one = r.one();
        for _ in 0..samples {
            let (x, y, z) = (random_element(&r, &mut rng), random_element(&r, &mut rng), random_element(&r, &mut rng));
            let checks = [
                ("associative", r.mul_(&r.mul_(&x, &y), &z) == r.mul_(&x, &r.mul_(&y, &z))),
                ("left_distributive", r.mul_(&x, &r.add_(&y, &z)) == r.add_(&r.mul_(&x, &y), &r.mul_(&x, &z))),
                ("right_distributive", r.mul_(&r.add_(&x, &y), &z) == r.add_(&r.mul_(&x, &z), &r.mul_(&y, &z))),
                ("unit", r.mul_(&one, &x) == x && r.mul_(&x, &one) == x),
                ("jordan_symmetric", r.jordan_(&x, &y) == r.jordan_(&y, &x)),
                ("jordan_square", r.jordan_(&x, &x) == r.scale(2, &r.mul_(&x, &x))),
            ];
            for (law, ok) in checks {
                if !ok {
                    report.fail(ReportWitness {
                        label: format!("{tag}: {law}"),
                        ring: Some(recipe.clone()),
                        map: None,
                        elements: vec![x.clone(), y.clone(), z.clone()],
                    });
                }
            }
            report.count(format!("{tag}.triples"), 1);
        }
    }
    Ok(report)
}

fn lemma_l0(seed: u64, samples: u64) -> Result<Report> {
    let mut report = Report::new("lemma-l0");
    report.seed = Some(seed);
    let ring = arc(RingRecipe::matrix_over_zm(7, 2))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let c = ring.scale(rng.gen_range(1..7), &ring.one());
        let u = random_unit(&ring, &mut rng);
        let t = make_weighted_jh(ring.clone(), &c, Some(&u), rng.gen_bool(0.5))?;
        let verdict = lemma_l0_equivalences(&t)?;
        let all_true = verdict.detail.iter().all(|(_, v)| *v);
        report.count("constructed.maps", 1);
        report.count("constructed.all_true", all_true as u64);
        if !(verdict.passed && all_true) {
            report.fail(map_witness("constructed map without three true conditions", &t, vec![]));
        }
    }
    for p in [3, 7] {
        let g = grassmann_example(p)?;
        let verdict = lemma_l0_equivalences(&g.t)?;
        let all_false = verdict.detail.iter().all(|(_, v)| !*v);
        report.count(format!("grassmann{p}.all_false"), all_false as u64);
        if !(verdict.passed && all_false) {
            report.fail(map_witness(format!("grassmann p={p}: conditions not all false"), &g.t, vec![]));
        }
    }
    Ok(report)
}

fn thm_tidem_m2f3(threads: usize) -> Result<Report> {
    let ring = arc(RingRecipe::matrix_over_zm(3, 2))?;
    let cfg = SearchConfig::new(
        ring.clone(),
        vec![Predicate::Surjective, Predicate::ZeroJordanPreserving],
        SearchMode::Exhaustive,
    )
    .threads(threads)
    .keep_survivors(usize::MAX);
    let outcome = run_search(&cfg)?;
    let mut report = outcome.report;
    let catalogue = weighted_jh_catalogue(ring, 1 << 20)?;
    report.set("catalogue", catalogue.len() as u64);
    report.expect("every map scanned", report.counter("maps_scanned") == 3u64.pow(16));
    let mut found: Vec<&[u64]> = outcome.survivors.iter().map(|t| t.matrix().data()).collect();
    let mut expected: Vec<&[u64]> = catalogue.iter().map(|t| t.matrix().data()).collect();
    found.sort();
    expected.sort();
    report.expect("survivors coincide with the constructed catalogue", found == expected);
    Ok(report)
}

fn certificates() -> Result<Report> {
    let mut report = Report::new("cor-c1-certificates");
    let spans = [
        ("m2f3", RingRecipe::matrix_over_zm(3, 2), true),
        ("m3f5", RingRecipe::matrix_over_zm(5, 3), true),
        ("m2z9", RingRecipe::matrix_over_zm(9, 2), true),
        ("ut2f3", RingRecipe::upper_triangular(RingRecipe::zm(3), 2), true),
        ("grassmann2f3", RingRecipe::grassmann2(RingRecipe::zm(3)), false),
    ];
    for (tag, recipe, full) in spans {
        let r = recipe.build()?;
        let span = jordan_idempotent_span(&r, SPAN_CAP)?;
        report.set(format!("{tag}.idempotents_seen"), span.idempotents as u64);
        report.set(format!("{tag}.span_full"), span.is_full as u64);
        report.expect(format!("{tag}: span fullness is {}", span.is_full), span.is_full == full);
    }
    for (tag, recipe) in [("m2f3", RingRecipe::matrix_over_zm(3, 2)), ("m3f5", RingRecipe::matrix_over_zm(5, 3))] {
        let r = recipe.build()?;
        let certs = corollary_c1_certificate(&r)?;
        let ok = certs.iter().filter(|c| c.verify(&r)).count();
        report.set(format!("{tag}.certificates"), certs.len() as u64);
        report.set(format!("{tag}.verified"), ok as u64);
        report.expect(format!("{tag}: one certificate per basis element"), certs.len() == r.rank());
        report.expect(format!("{tag}: every certificate verifies"), ok == certs.len());
    }
    let f2 = RingRecipe::matrix_over_zm(2, 2).build()?;
    report.expect("m2f2: certificate refused for lack of 1/2", matches!(corollary_c1_certificate(&f2), Err(Error::NoHalf)));
    Ok(report)
}

fn prop_pz() -> Result<Report> {
    let mut report = Report::new("prop-pz");
    let a = arc(RingRecipe::matrix_over_zm(3, 2))?;
    let f3 = arc(RingRecipe::zm(3))?;
    let trace = |x: &Element| Element(vec![(x.0[0] + x.0[3]) % 3]);
    let cap = 1 << 20;
    let (ra, rb) = (a.clone(), a.clone());
    let passing = [
        ("product", PzVariant::A, BiadditiveTable::from_fn(a.clone(), a.clone(), move |x, y| ra.mul_(x, y))?),
        ("trace_of_product", PzVariant::A, {
            let r = a.clone();
            BiadditiveTable::from_fn(a.clone(), f3.clone(), move |x, y| trace(&r.mul_(x, y)))?
        }),
        ("jordan", PzVariant::B, BiadditiveTable::from_fn(a.clone(), a.clone(), move |x, y| rb.jordan_(x, y))?),
        ("trace_of_jordan", PzVariant::B, {
            let r = a.clone();
            BiadditiveTable::from_fn(a.clone(), f3.clone(), move |x, y| trace(&r.jordan_(x, y)))?
        }),
    ];
    for (tag, variant, phi) in passing {
        let v = check_prop_pz(&phi, variant, cap)?;
        report.count("instances", 1);
        report.expect(format!("{tag}: conclusion fails"), v.passed);
    }
    let e11 = a.basis(0);
    let constant = BiadditiveTable::from_fn(a.clone(), a.clone(), move |_, _| e11.clone())?;
    let rc = a.clone();
    let product = BiadditiveTable::from_fn(a.clone(), a.clone(), move |x, y| rc.mul_(x, y))?;
    let violations = [
        ("constant_a", check_prop_pz(&constant, PzVariant::A, cap)),
        ("constant_b", check_prop_pz(&constant, PzVariant::B, cap)),
        ("asymmetric_b", check_prop_pz(&product, PzVariant::B, cap)),
    ];
    for (tag, outcome) in violations {
        let detected = matches!(outcome, Err(Error::PreconditionFailed { witness: Some(_), .. }));
        report.count("violations_detected", detected as u64);
        report.expect(format!("{tag}: precondition violation not reported with a witness"), detected);
    }
    Ok(report)
}

fn lemma_m1(p: Option<u64>, seed: u64, scalar_trials: u64) -> Result<Report> {
    let mut report = Report::new("lemma-m1");
    report.seed = Some(seed);
    let primes = p.map_or(vec![5, 7, 11], |p| vec![p]);
    for p in primes {
        let sub = verify_lemma_m1(p, LambdaMode::All, seed, scalar_trials as usize)?;
        report.absorb(&format!("p{p}"), sub);
    }
    report.notes.dedup();
    Ok(report)
}

fn grassmann(p: Option<u64>) -> Result<Report> {
    let mut report = Report::new("grassmann");
    for p in p.map_or(vec![3, 5, 7], |p| vec![p]) {
        let g = grassmann_example(p)?;
        let r = &g.ring;
        let mut squares = 0;
        for x in r.elements(u128::MAX)? {
            let x = Element(x);
            let lhs = g.s.apply_(&r.mul_(&x, &x));
            let tx = g.t.apply_(&x);
            if lhs == r.mul_(&tx, &tx) {
                squares += 1;
            } else {
                report.fail(map_witness(format!("p={p}: S(x²) != T(x)²"), &g.t, vec![x]));
            }
        }
        let c = g.t.weight();
        let u = r.basis(r.basis_index("u").expect("grassmann basis"));
        let companion = exists_companion_s(&g.t);
        let l0 = lemma_l0_equivalences(&g.t)?;
        let key = |k: &str| format!("p{p}.{k}");
        report.set(key("elements"), r.order() as u64);
        report.set(key("squares_ok"), squares);
        report.expect(key("T bijective"), g.t.is_bijective());
        report.expect(key("T(1) = 1 + u"), c == r.add_(&r.one(), &u));
        report.expect(key("T(1) not central"), !r.is_central(&c));
        report.expect(key("T is not a weighted Jordan homomorphism"), !is_weighted_jordan_hom(&g.t).passed);
        report.expect(key("S is a companion of T"), is_companion(&g.t, &g.s));
        report.expect(key("solver finds a companion"), companion.is_some_and(|s| is_companion(&g.t, &s)));
        report.expect(key("three conditions all false"), l0.passed && l0.detail.iter().all(|(_, v)| !*v));
    }
    Ok(report)
}

fn char2(threads: usize) -> Result<Report> {
    let mut report = Report::new("char2");
    let ex = char2_example()?;
    let pairs = zero_jordan_pairs(&ex.ring, PairScan::default())?;
    report.set("zero_jordan_pairs", pairs.len() as u64);
    report.expect("T bijective", ex.t.is_bijective());
    report.expect("T preserves zero-Jordan pairs", preserves_zero_jordan_pairs(&ex.t, &pairs).passed);
    let v = is_weighted_jordan_hom(&ex.t);
    let (a, b) = (ex.ring.basis(0), ex.ring.basis(1));
    report.expect("fails weighted Jordan identity at (e11, e12)", !v.passed && v.witness == Some(crate::checks::Witness::Pair { x: a, y: b }));

    let mut cfg = SearchConfig::new(
        ex.ring.clone(),
        vec![Predicate::Surjective, Predicate::ZeroJordanPreserving],
        SearchMode::Exhaustive,
    )
    .threads(threads);
    cfg.max_witnesses = usize::MAX;
    let outcome = run_search(&cfg)?;
    let contains = outcome.counterexamples.iter().any(|t| t.matrix() == ex.t.matrix());
    let mut sub = outcome.report;
    sub.passed = true;
    sub.witnesses.truncate(4);
    report.absorb("search", sub);
    report.expect("exhaustive search finds the pinned map among its counterexamples", contains);
    Ok(report)
}

fn mt3_sampled(seed: u64, threads: usize, samples: u64) -> Result<Report> {
    let ring = arc(RingRecipe::matrix_over_zm(7, 2))?;
    let cfg = SearchConfig::new(
        ring.clone(),
        vec![Predicate::Bijective, Predicate::CompanionS],
        SearchMode::Sample { count: samples },
    )
    .seed(seed)
    .threads(threads);
    let mut report = run_search(&cfg)?.report;
    let solver = CompanionSolver::new(ring.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..200 {
        let c = ring.scale(rng.gen_range(1..7), &ring.one());
        let u = random_unit(&ring, &mut rng);
        let t = make_weighted_jh(ring.clone(), &c, Some(&u), rng.gen_bool(0.5))?;
        let kept = t.is_bijective() && solver.solve(&t).is_some_and(|s| is_companion(&t, &s));
        report.count("constructed.survive_filter", kept as u64);
        report.count("constructed.maps", 1);
        if !kept {
            report.fail(map_witness("constructed weighted Jordan homomorphism rejected by the filter", &t, vec![]));
        }
    }
    Ok(report)
}

fn capelli_agreement(seed: u64, samples: u64) -> Result<Report> {
    let mut report = Report::new("capelli-agreement");
    report.seed = Some(seed);
    let ring = m3(7)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..samples {
        let mut xs: [Element; 4] = std::array::from_fn(|_| random_element(&ring, &mut rng));
        // Every fourth set is made dependent on purpose.
        if k % 4 == 0 {
            let (a, b, c) = (rng.gen_range(0..7), rng.gen_range(0..7), rng.gen_range(0..7));
            let combo = ring.add_(&ring.add_(&ring.scale(a, &xs[0]), &ring.scale(b, &xs[1])), &ring.scale(c, &xs[2]));
            xs[3] = combo;
            xs.swap(3, rng.gen_range(0..4));
        }
        let by_rank = dependent_rank(&ring, &xs)?;
        let by_capelli = dependent_capelli(&ring, &xs, 64, rng.gen())?;
        report.count("sets", 1);
        report.count("dependent", by_rank as u64);
        report.count("agree", (by_rank == by_capelli) as u64);
        if by_rank != by_capelli {
            report.fail(ReportWitness {
                label: format!("rank says dependent={by_rank}, capelli says {by_capelli}"),
                ring: Some(RingRecipe::matrix_over_zm(7, 3)),
                map: None,
                elements: xs.to_vec(),
            });
        }
    }
    Ok(report)
}

/// The constructed maps of the classification remark: inner automorphisms
/// and their transpose-composites are Jordan homomorphisms that are
/// multiplicative or anti-multiplicative.
pub fn classify_constructed(ring: Arc<Ring>, seed: u64, count: usize) -> Result<Report> {
    let mut report = Report::new("classify-constructed");
    report.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let u = random_unit(&ring, &mut rng);
        let tr = rng.gen_bool(0.5);
        let phi = make_weighted_jh(ring.clone(), &ring.one(), Some(&u), tr)?;
        let kind = jordan_kind(&phi);
        let expected = if tr { JordanKind::Antihomomorphism } else { JordanKind::Homomorphism };
        report.count("maps", 1);
        if !is_jordan_hom(&phi).passed || !satisfies_txy(&phi).passed || kind != expected {
            report.fail(map_witness(format!("classified as {kind:?}"), &phi, vec![u]));
        }
    }
    Ok(report)
}
