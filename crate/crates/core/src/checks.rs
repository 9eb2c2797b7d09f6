//! Predicates on maps and rings with machine-checkable verdicts.
//!
//! Two kinds of condition appear here and they are checked differently.
//! Identities that are biadditive in `(x, y)` (Jordan homomorphism, the
//! weighted identity, `2T(x)∘T(y) = T(x∘y)∘c`) hold everywhere as soon as
//! they hold on basis pairs, so only basis pairs are evaluated. Conditions
//! guarded by a zero-product hypothesis are not linear in the pair and are
//! checked against an explicit list of pairs.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::addmap::{random_element, AdditiveMap};
use crate::error::{Error, Result};
use crate::linalg::{smith, ModMatrix, Submodule};
use crate::ring::{Element, Ring};

/// Default cap on the number of `(x, y)` pairs an exhaustive scan may visit.
pub const DEFAULT_PAIR_CAP: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Element { x: Element },
    Pair { x: Element, y: Element },
}

impl Witness {
    fn pair(x: Element, y: Element) -> Self {
        Witness::Pair { x, y }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub check: String,
    pub passed: bool,
    pub witness: Option<Witness>,
    pub detail: Vec<(String, bool)>,
}

impl CheckVerdict {
    fn pass(check: &str) -> Self {
        CheckVerdict {
            check: check.to_string(),
            passed: true,
            witness: None,
            detail: Vec::new(),
        }
    }

    fn fail(check: &str, witness: Witness) -> Self {
        CheckVerdict {
            check: check.to_string(),
            passed: false,
            witness: Some(witness),
            detail: Vec::new(),
        }
    }

    fn from_witness(check: &str, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => Self::fail(check, w),
            None => Self::pass(check),
        }
    }

    fn with_detail(mut self, detail: Vec<(&str, bool)>) -> Self {
        self.detail = detail.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        self
    }

    pub fn detail(&self, name: &str) -> Option<bool> {
        self.detail.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

/// How to produce zero-Jordan pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairScan {
    /// Every pair in `A × A`, provided `|A|² <= cap`.
    Exhaustive { cap: u128 },
    /// `samples` random `x`, each paired with a random element of its
    /// two-sided annihilator.
    Sampled { seed: u64, samples: usize },
}

impl Default for PairScan {
    fn default() -> Self {
        PairScan::Exhaustive { cap: DEFAULT_PAIR_CAP }
    }
}

fn scan_pairs(ring: &Ring, cap: u128, keep: impl Fn(&[u64], &[u64], &[u64]) -> bool + Sync) -> Result<Vec<(Element, Element)>> {
    let n = ring.order();
    let size = n.saturating_mul(n);
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    let elements: Vec<Vec<u64>> = ring.elements(u128::MAX)?.collect();
    let d = ring.rank();
    let per_x: Vec<Vec<(Element, Element)>> = elements
        .par_iter()
        .map(|x| {
            let mut xy = vec![0; d];
            let mut out = Vec::new();
            for y in &elements {
                ring.mul_into(x, y, &mut xy);
                if keep(x, y, &xy) {
                    out.push((Element(x.clone()), Element(y.clone())));
                }
            }
            out
        })
        .collect();
    Ok(per_x.into_iter().flatten().collect())
}

/// Pairs with `xy = yx = 0`, in lexicographic order.
pub fn zero_jordan_pairs(ring: &Ring, scan: PairScan) -> Result<Vec<(Element, Element)>> {
    match scan {
        PairScan::Exhaustive { cap } => {
            let d = ring.rank();
            scan_pairs(ring, cap, |x, y, xy| {
                if xy.iter().any(|&c| c != 0) {
                    return false;
                }
                let mut yx = vec![0; d];
                ring.mul_into(y, x, &mut yx);
                yx.iter().all(|&c| c == 0)
            })
        }
        PairScan::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(samples);
            for _ in 0..samples {
                let x = random_element(ring, &mut rng);
                let ann = annihilator(ring, &x);
                let mut y = vec![0u64; ring.rank()];
                for g in &ann {
                    let k = rng.gen_range(0..ring.modulus());
                    for (yi, gi) in y.iter_mut().zip(g) {
                        *yi = (*yi + k * gi) % ring.modulus();
                    }
                }
                out.push((x, Element(y)));
            }
            out.sort();
            out.dedup();
            Ok(out)
        }
    }
}

/// Pairs with `xy = 0`, in lexicographic order.
pub fn zero_product_pairs(ring: &Ring, cap: u128) -> Result<Vec<(Element, Element)>> {
    scan_pairs(ring, cap, |_, _, xy| xy.iter().all(|&c| c == 0))
}

/// Generators of `{y : xy = yx = 0}`.
pub fn annihilator(ring: &Ring, x: &Element) -> Vec<Vec<u64>> {
    let mut rows = ring.left_mul_matrix(x).to_rows();
    rows.extend(ring.right_mul_matrix(x).to_rows());
    let a = ModMatrix::from_rows(ring.modulus(), &rows).expect("reduced rows");
    smith(&a).kernel()
}

/// Index of the first pair `(x, y)` in `pairs` with `T(x) ∘ T(y) != 0`.
pub fn first_zjp_violation(t: &AdditiveMap, pairs: &[(Element, Element)]) -> Option<usize> {
    let ring = t.codomain();
    let d = ring.rank();
    pairs.par_iter().position_first(|(x, y)| {
        let tx = t.matrix().mul_vec(&x.0);
        let ty = t.matrix().mul_vec(&y.0);
        let mut out = vec![0; d];
        ring.jordan_into(&tx, &ty, &mut out);
        out.iter().any(|&c| c != 0)
    })
}

pub fn preserves_zero_jordan_pairs(t: &AdditiveMap, pairs: &[(Element, Element)]) -> CheckVerdict {
    let witness = first_zjp_violation(t, pairs).map(|i| Witness::pair(pairs[i].0.clone(), pairs[i].1.clone()));
    CheckVerdict::from_witness("zero_jordan_preserving", witness)
}

fn basis_pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |i| (i..d).map(move |j| (i, j)))
}

/// First basis pair `(i, j)`, `i <= j`, where `holds` fails.
fn first_basis_failure(ring: &Ring, mut holds: impl FnMut(&Element, &Element) -> bool) -> Option<Witness> {
    basis_pairs(ring.rank()).find_map(|(i, j)| {
        let (bi, bj) = (ring.basis(i), ring.basis(j));
        (!holds(&bi, &bj)).then(|| Witness::pair(bi, bj))
    })
}

/// `Φ(x ∘ y) = Φ(x) ∘ Φ(y)`.
pub fn is_jordan_hom(phi: &AdditiveMap) -> CheckVerdict {
    let (a, b) = (phi.domain(), phi.codomain());
    let witness = first_basis_failure(a, |x, y| phi.apply_(&a.jordan_(x, y)) == b.jordan_(&phi.apply_(x), &phi.apply_(y)));
    CheckVerdict::from_witness("jordan_hom", witness)
}

/// `c = T(1)` invertible and central, and `c·T(x ∘ y) = T(x) ∘ T(y)`.
pub fn is_weighted_jordan_hom(t: &AdditiveMap) -> CheckVerdict {
    let (a, b) = (t.domain(), t.codomain());
    let c = t.weight();
    let invertible = b.try_inverse(&c).is_some();
    let noncommuting = b.noncommuting_basis(&c);
    let identity_failure = first_basis_failure(a, |x, y| {
        b.mul_(&c, &t.apply_(&a.jordan_(x, y))) == b.jordan_(&t.apply_(x), &t.apply_(y))
    });
    let detail = vec![
        ("invertible", invertible),
        ("central", noncommuting.is_none()),
        ("identity", identity_failure.is_none()),
    ];
    let witness = if !invertible {
        Some(Witness::Element { x: c })
    } else if let Some(i) = noncommuting {
        Some(Witness::pair(c, b.basis(i)))
    } else {
        identity_failure
    };
    CheckVerdict::from_witness("weighted_jordan_hom", witness).with_detail(detail)
}

/// `2 T(x) ∘ T(y) = T(x ∘ y) ∘ c` with `c = T(1)`.
pub fn satisfies_txy(t: &AdditiveMap) -> CheckVerdict {
    let (a, b) = (t.domain(), t.codomain());
    let c = t.weight();
    let witness = first_basis_failure(a, |x, y| {
        b.scale(2, &b.jordan_(&t.apply_(x), &t.apply_(y))) == b.jordan_(&t.apply_(&a.jordan_(x, y)), &c)
    });
    CheckVerdict::from_witness("txy", witness)
}

/// For surjective `T` satisfying `2T(x)∘T(y) = T(x∘y)∘c` into a 2-torsion-free
/// ring, evaluates (i) weighted Jordan homomorphism, (ii) `c²` central,
/// (iii) `c` central, and passes iff the three agree.
pub fn lemma_l0_equivalences(t: &AdditiveMap) -> Result<CheckVerdict> {
    if !t.rank_profile().surjective {
        return Err(Error::precondition("T is not surjective", None));
    }
    let txy = satisfies_txy(t);
    if !txy.passed {
        return Err(Error::precondition("2T(x)∘T(y) = T(x∘y)∘T(1) fails", txy.witness));
    }
    let b = t.codomain();
    if !b.flags().two_torsion_free {
        return Err(Error::precondition(
            format!("codomain is not 2-torsion free (modulus {})", b.modulus()),
            None,
        ));
    }
    let c = t.weight();
    let whom = is_weighted_jordan_hom(t).passed;
    let c2_central = b.is_central(&b.mul_(&c, &c));
    let c_central = b.is_central(&c);
    let agree = whom == c2_central && c2_central == c_central;
    let verdict = if agree {
        CheckVerdict::pass("lemma_l0")
    } else {
        CheckVerdict::fail("lemma_l0", Witness::Element { x: c })
    };
    Ok(verdict.with_detail(vec![
        ("weighted_jordan_hom", whom),
        ("weight_squared_central", c2_central),
        ("weight_central", c_central),
    ]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanSpan {
    pub basis: Vec<Element>,
    pub is_full: bool,
    pub idempotents: usize,
}

/// Additive span of `{e ∘ f : e, f idempotent}`.
pub fn jordan_idempotent_span(ring: &Ring, cap: u128) -> Result<JordanSpan> {
    let idem = ring.enumerate_idempotents(cap)?;
    let mut span = Submodule::zero(ring.modulus(), ring.rank());
    'outer: for (i, e) in idem.iter().enumerate() {
        for f in &idem[i..] {
            span.insert(ring.jordan_(e, f).0);
            if span.is_full() {
                break 'outer;
            }
        }
    }
    Ok(JordanSpan {
        basis: span.basis().into_iter().map(Element).collect(),
        is_full: span.is_full(),
        idempotents: idem.len(),
    })
}

/// Additive closure of the idempotents under multiplication, as a submodule.
pub fn idempotent_closure(ring: &Ring, cap: u128) -> Result<Submodule> {
    let idem = ring.enumerate_idempotents(cap)?;
    let mut span = Submodule::span(ring.modulus(), ring.rank(), idem.into_iter().map(|e| e.0));
    loop {
        let gens = span.basis();
        let mut grew = false;
        for g in &gens {
            for h in &gens {
                grew |= span.insert(ring.mul_raw(g, h));
            }
        }
        if !grew {
            return Ok(span);
        }
    }
}

/// Whether the ring is generated as a ring by its idempotents.
pub fn idempotent_generated(ring: &Ring, cap: u128) -> Result<CheckVerdict> {
    let closure = idempotent_closure(ring, cap)?;
    let missing = ring.basis_elements().into_iter().find(|b| !closure.contains(&b.0));
    Ok(CheckVerdict::from_witness(
        "idempotent_generated",
        missing.map(|x| Witness::Element { x }),
    ))
}

/// A biadditive map `φ: A × A → B` given by its values on basis pairs.
#[derive(Clone, Debug)]
pub struct BiadditiveTable {
    domain: Arc<Ring>,
    target: Arc<Ring>,
    table: Vec<Vec<Element>>,
}

impl BiadditiveTable {
    pub fn new(domain: Arc<Ring>, target: Arc<Ring>, table: Vec<Vec<Element>>) -> Result<Self> {
        let d = domain.rank();
        if table.len() != d || table.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: table.len(),
            });
        }
        if let Some(bad) = table.iter().flatten().find(|e| e.len() != target.rank()) {
            return Err(Error::DimensionMismatch {
                expected: target.rank(),
                got: bad.len(),
            });
        }
        if domain.modulus() != target.modulus() {
            return Err(Error::ModulusMismatch(domain.modulus(), target.modulus()));
        }
        Ok(BiadditiveTable { domain, target, table })
    }

    /// Tabulates `f` on basis pairs.
    pub fn from_fn(domain: Arc<Ring>, target: Arc<Ring>, f: impl Fn(&Element, &Element) -> Element) -> Result<Self> {
        let basis = domain.basis_elements();
        let table = basis.iter().map(|x| basis.iter().map(|y| f(x, y)).collect()).collect();
        Self::new(domain, target, table)
    }

    pub fn domain(&self) -> &Arc<Ring> {
        &self.domain
    }

    pub fn target(&self) -> &Arc<Ring> {
        &self.target
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element {
        &self.table[i][j]
    }

    pub fn eval(&self, x: &Element, y: &Element) -> Element {
        let m = self.target.modulus();
        let mut out = vec![0u64; self.target.rank()];
        for (i, &xi) in x.0.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.0.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let k = xi * yj % m;
                for (o, &v) in out.iter_mut().zip(&self.table[i][j].0) {
                    *o = (*o + k * v) % m;
                }
            }
        }
        Element(out)
    }

    /// First basis pair with `φ(b_i, b_j) != φ(b_j, b_i)`.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        let d = self.domain.rank();
        basis_pairs(d).find(|&(i, j)| self.table[i][j] != self.table[j][i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PzVariant {
    /// `φ` vanishing on `xy = 0` gives `φ(x, y) = φ(xy, 1)`.
    A,
    /// Symmetric `φ` vanishing on `xy = yx = 0` gives `2φ(x, y) = φ(x ∘ y, 1)`.
    B,
}

/// Verifies the hypotheses on `φ` by exhaustive pair scan, then the
/// conclusion identity on basis pairs.
pub fn check_prop_pz(phi: &BiadditiveTable, variant: PzVariant, cap: u128) -> Result<CheckVerdict> {
    let a = phi.domain();
    let gen = idempotent_generated(a, cap)?;
    if !gen.passed {
        return Err(Error::precondition("domain is not generated by idempotents", gen.witness));
    }
    let pairs = match variant {
        PzVariant::A => zero_product_pairs(a, cap)?,
        PzVariant::B => {
            if let Some((i, j)) = phi.asymmetry() {
                return Err(Error::precondition(
                    "φ is not symmetric",
                    Some(Witness::pair(a.basis(i), a.basis(j))),
                ));
            }
            zero_jordan_pairs(a, PairScan::Exhaustive { cap })?
        }
    };
    if let Some((x, y)) = pairs.iter().find(|(x, y)| !phi.eval(x, y).is_zero()) {
        return Err(Error::precondition(
            "φ does not vanish on a zero-product pair",
            Some(Witness::pair(x.clone(), y.clone())),
        ));
    }
    let one = a.one();
    let b = phi.target();
    let d = a.rank();
    let failure = match variant {
        PzVariant::A => (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).find_map(|(i, j)| {
            let (bi, bj) = (a.basis(i), a.basis(j));
            (phi.eval(&bi, &bj) != phi.eval(&a.mul_(&bi, &bj), &one)).then(|| Witness::pair(bi, bj))
        }),
        PzVariant::B => first_basis_failure(a, |x, y| b.scale(2, &phi.eval(x, y)) == phi.eval(&a.jordan_(x, y), &one)),
    };
    let name = match variant {
        PzVariant::A => "prop_pz_a",
        PzVariant::B => "prop_pz_b",
    };
    Ok(CheckVerdict::from_witness(name, failure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{RingRecipe, DEFAULT_ENUM_CAP};

    fn ring(recipe: RingRecipe) -> Arc<Ring> {
        Arc::new(recipe.build().unwrap())
    }

    fn el(r: &Ring, label: &str) -> Element {
        r.basis(r.basis_index(label).unwrap())
    }

    #[test]
    fn zero_pairs_in_a_field_are_trivial() {
        let z7 = ring(RingRecipe::zm(7));
        let pairs = zero_jordan_pairs(&z7, PairScan::default()).unwrap();
        assert_eq!(pairs.len(), 13);
        assert!(pairs.iter().all(|(x, y)| x.is_zero() || y.is_zero()));
    }

    #[test]
    fn zero_pairs_of_m2f3() {
        let r = ring(RingRecipe::matrix_over_zm(3, 2));
        let pairs = zero_jordan_pairs(&r, PairScan::default()).unwrap();
        assert!(pairs.contains(&(el(&r, "e11"), el(&r, "e22"))));
        assert_eq!(pairs.len(), 225);
        assert!(pairs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn exhaustive_scan_respects_cap() {
        let r = ring(RingRecipe::matrix_over_zm(3, 2));
        assert!(matches!(
            zero_jordan_pairs(&r, PairScan::Exhaustive { cap: 1000 }),
            Err(Error::TooLarge { size: 6561, cap: 1000 })
        ));
    }

    #[test]
    fn sampled_pairs_are_zero_pairs() {
        let r = ring(RingRecipe::matrix_over_zm(7, 2));
        let pairs = zero_jordan_pairs(&r, PairScan::Sampled { seed: 5, samples: 200 }).unwrap();
        assert!(!pairs.is_empty());
        for (x, y) in &pairs {
            assert!(r.mul(x, y).unwrap().is_zero() && r.mul(y, x).unwrap().is_zero());
        }
        let again = zero_jordan_pairs(&r, PairScan::Sampled { seed: 5, samples: 200 }).unwrap();
        assert_eq!(pairs, again);
    }

    #[test]
    fn scaling_is_not_a_jordan_hom() {
        let r = ring(RingRecipe::matrix_over_zm(3, 2));
        let v = is_jordan_hom(&AdditiveMap::scalar(r.clone(), 2));
        assert!(!v.passed);
        assert_eq!(v.witness, Some(Witness::pair(el(&r, "e11"), el(&r, "e11"))));
        assert!(is_weighted_jordan_hom(&AdditiveMap::scalar(r, 2)).passed);
    }

    #[test]
    fn l0_rejects_even_modulus() {
        let r = ring(RingRecipe::matrix_over_zm(6, 2));
        let err = lemma_l0_equivalences(&AdditiveMap::identity(r)).unwrap_err();
        match err {
            Error::PreconditionFailed { reason, .. } => assert!(reason.contains("2-torsion")),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn l0_on_scaling() {
        let r = ring(RingRecipe::matrix_over_zm(3, 2));
        let v = lemma_l0_equivalences(&AdditiveMap::scalar(r, 2)).unwrap();
        assert!(v.passed);
        assert_eq!(v.detail, vec![
            ("weighted_jordan_hom".to_string(), true),
            ("weight_squared_central".to_string(), true),
            ("weight_central".to_string(), true),
        ]);
    }

    #[test]
    fn spans_and_generation() {
        let g = ring(RingRecipe::grassmann2(RingRecipe::zm(3)));
        let span = jordan_idempotent_span(&g, DEFAULT_ENUM_CAP).unwrap();
        assert!(!span.is_full);
        assert_eq!(span.basis, vec![g.one()]);
        assert_eq!(span.idempotents, 2);
        let gen = idempotent_generated(&g, DEFAULT_ENUM_CAP).unwrap();
        assert!(!gen.passed);
        assert_eq!(gen.witness, Some(Witness::Element { x: el(&g, "u") }));

        let z7 = ring(RingRecipe::zm(7));
        assert!(idempotent_generated(&z7, DEFAULT_ENUM_CAP).unwrap().passed);
        let m = ring(RingRecipe::matrix_over_zm(3, 2));
        assert!(idempotent_generated(&m, DEFAULT_ENUM_CAP).unwrap().passed);
        assert!(jordan_idempotent_span(&m, DEFAULT_ENUM_CAP).unwrap().is_full);
    }

    #[test]
    fn span_respects_cap() {
        let m = ring(RingRecipe::matrix_over_zm(5, 3));
        assert!(matches!(jordan_idempotent_span(&m, DEFAULT_ENUM_CAP), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn prop_pz_rejects_asymmetric_phi_for_b() {
        let r = ring(RingRecipe::matrix_over_zm(3, 2));
        let phi = BiadditiveTable::from_fn(r.clone(), r.clone(), |x, y| r.mul(x, y).unwrap()).unwrap();
        let err = check_prop_pz(&phi, PzVariant::B, DEFAULT_PAIR_CAP).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed { witness: Some(_), .. }));
        assert!(check_prop_pz(&phi, PzVariant::A, DEFAULT_PAIR_CAP).unwrap().passed);
    }
}
