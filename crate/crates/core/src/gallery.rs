//! Worked examples and counterexamples, generators of known weighted Jordan
//! homomorphisms, and explicit spanning certificates for matrix rings.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::addmap::AdditiveMap;
use crate::error::{Error, Result};
use crate::modular::{inverse, is_prime, reduce};
use crate::ring::{Element, Ring, RingRecipe};

/// The two-generator Grassmann algebra over `F_p` with
/// `T(x) = x + λ(x)u` and `S(x) = x + 2λ(x)u`, `λ` the coefficient of 1.
#[derive(Clone, Debug)]
pub struct GrassmannExample {
    pub ring: Arc<Ring>,
    pub t: AdditiveMap,
    pub s: AdditiveMap,
}

pub fn grassmann_example(p: u64) -> Result<GrassmannExample> {
    if !is_prime(p) {
        return Err(Error::CharUnsupported(format!("need an odd prime, got {p}")));
    }
    // Rejects p = 2 itself.
    let ring = Arc::new(RingRecipe::grassmann2(RingRecipe::zm(p)).build()?);
    let u = ring.basis(ring.basis_index("u").expect("grassmann basis"));
    let shift = |k: u64| {
        let (r, u) = (ring.clone(), u.clone());
        move |x: &Element| r.add_(x, &r.scale(k * x.0[0] % p, &u))
    };
    let t = AdditiveMap::from_fn(ring.clone(), shift(1))?;
    let s = AdditiveMap::from_fn(ring.clone(), shift(2))?;
    Ok(GrassmannExample { ring, t, s })
}

/// `M_2(F_2)` with `T(x) = x + x₁₂·1`.
#[derive(Clone, Debug)]
pub struct Char2Example {
    pub ring: Arc<Ring>,
    pub t: AdditiveMap,
}

/// Basis labels of the pair on which the char-2 map visibly fails.
pub const CHAR2_WITNESS: (&str, &str) = ("e11", "e12");

pub fn char2_example() -> Result<Char2Example> {
    let ring = Arc::new(RingRecipe::matrix_over_zm(2, 2).build()?);
    let one = ring.one();
    let e12 = ring.basis_index("e12").expect("matrix basis");
    let r = ring.clone();
    let t = AdditiveMap::from_fn(ring.clone(), move |x| r.add_(x, &r.scale(x.0[e12], &one)))?;
    Ok(Char2Example { ring, t })
}

fn transpose_element(ring: &Ring, n: usize, x: &Element) -> Element {
    let db = ring.rank() / (n * n);
    let mut out = vec![0; ring.rank()];
    for i in 0..n {
        for j in 0..n {
            for k in 0..db {
                out[(j * n + i) * db + k] = x.0[(i * n + j) * db + k];
            }
        }
    }
    Element(out)
}

/// `T(x) = c·Φ(x)` with `Φ` conjugation by `u` (if given) followed by transposition (if requested).
pub fn make_weighted_jh(ring: Arc<Ring>, c: &Element, u: Option<&Element>, transpose: bool) -> Result<AdditiveMap> {
    ring.element(c.0.clone())?;
    if !ring.is_central(c) {
        return Err(Error::NotCentral);
    }
    if ring.try_inverse(c).is_none() {
        return Err(Error::NotInvertible);
    }
    let conj = match u {
        Some(u) => {
            ring.element(u.0.clone())?;
            let inv = ring.try_inverse(u).ok_or(Error::NotInvertible)?;
            Some((u.clone(), inv))
        }
        None => None,
    };
    let n = if transpose {
        let (n, base) = ring.matrix_shape().ok_or(Error::TransposeUnsupported)?;
        if !base.build()?.is_commutative() {
            return Err(Error::TransposeUnsupported);
        }
        Some(n)
    } else {
        None
    };
    let r = ring.clone();
    let c = c.clone();
    AdditiveMap::from_fn(ring, move |x| {
        let mut y = match &conj {
            Some((u, inv)) => r.mul_(&r.mul_(u, x), inv),
            None => x.clone(),
        };
        if let Some(n) = n {
            y = transpose_element(&r, n, &y);
        }
        r.mul_(&c, &y)
    })
}

/// Every distinct `c·Φ` with `c` a central unit and `Φ` conjugation by a unit,
/// optionally followed by transposition, sorted by matrix. Enumerates the
/// whole ring, so `cap` bounds its order.
pub fn weighted_jh_catalogue(ring: Arc<Ring>, cap: u128) -> Result<Vec<AdditiveMap>> {
    let elements: Vec<Element> = ring.elements(cap)?.map(Element).collect();
    let units: Vec<Element> = elements.iter().filter(|x| ring.try_inverse(x).is_some()).cloned().collect();
    let central: Vec<&Element> = units.iter().filter(|x| ring.is_central(x)).collect();
    let transposes: &[bool] = if ring.matrix_shape().is_some() { &[false, true] } else { &[false] };
    let mut seen = std::collections::BTreeMap::new();
    for c in central {
        for u in &units {
            for &tr in transposes {
                let t = match make_weighted_jh(ring.clone(), c, Some(u), tr) {
                    Err(Error::TransposeUnsupported) => continue,
                    other => other?,
                };
                seen.entry(t.matrix().data().to_vec()).or_insert(t);
            }
        }
    }
    Ok(seen.into_values().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JordanKind {
    Homomorphism,
    Antihomomorphism,
    Both,
    Neither,
}

/// Whether `φ` is multiplicative or anti-multiplicative, checked on basis pairs.
pub fn jordan_kind(phi: &AdditiveMap) -> JordanKind {
    let (a, b) = (phi.domain(), phi.codomain());
    let d = a.rank();
    let images: Vec<Element> = (0..d).map(|j| phi.image_of_basis(j)).collect();
    let mut hom = true;
    let mut anti = true;
    for i in 0..d {
        for j in 0..d {
            let lhs = phi.apply_(&a.mul_(&a.basis(i), &a.basis(j)));
            hom &= lhs == b.mul_(&images[i], &images[j]);
            anti &= lhs == b.mul_(&images[j], &images[i]);
        }
    }
    match (hom, anti) {
        (true, true) => JordanKind::Both,
        (true, false) => JordanKind::Homomorphism,
        (false, true) => JordanKind::Antihomomorphism,
        (false, false) => JordanKind::Neither,
    }
}

/// One summand `numerator / 2^half_power · (e ∘ f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanTerm {
    pub numerator: i64,
    pub half_power: u32,
    pub e: Element,
    pub f: Element,
}

/// `target = Σ terms`, with every `e`, `f` idempotent. Coefficients are kept
/// as integers over powers of two so the certificate is modulus-agnostic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanCertificate {
    pub target_label: String,
    pub target: Element,
    pub terms: Vec<SpanTerm>,
}

impl SpanCertificate {
    pub fn evaluate(&self, ring: &Ring) -> Result<Element> {
        let m = ring.modulus();
        let half = inverse(2 % m, m).ok_or(Error::NoHalf)?;
        let mut acc = ring.zero();
        for term in &self.terms {
            let mut k = reduce(term.numerator as i128, m);
            for _ in 0..term.half_power {
                k = k * half % m;
            }
            let prod = ring.jordan(&term.e, &term.f)?;
            acc = ring.add_(&acc, &ring.scale(k, &prod));
        }
        Ok(acc)
    }

    /// Every factor is idempotent and the sum reproduces the target exactly.
    pub fn verify(&self, ring: &Ring) -> bool {
        self.terms
            .iter()
            .all(|t| t.e.len() == ring.rank() && t.f.len() == ring.rank() && ring.is_idempotent(&t.e) && ring.is_idempotent(&t.f))
            && self.evaluate(ring).is_ok_and(|v| v == self.target)
    }
}

/// A certificate for every module basis element `x·e_ij` of `M_n(B)`.
pub fn corollary_c1_certificate(ring: &Ring) -> Result<Vec<SpanCertificate>> {
    let (n, base) = ring.matrix_shape().ok_or(Error::NotMatrixRing)?;
    if !ring.flags().has_half {
        return Err(Error::NoHalf);
    }
    if n < 2 {
        return Err(Error::RankTooSmall);
    }
    let base = base.build()?;
    let db = base.rank();
    let embed = |x: &Element, i: usize, j: usize| {
        let mut out = vec![0; ring.rank()];
        out[(i * n + j) * db..(i * n + j + 1) * db].copy_from_slice(&x.0);
        Element(out)
    };
    let unit = |i: usize| embed(&base.one(), i, i);
    let term = |numerator: i64, half_power: u32, e: &Element, f: &Element| SpanTerm {
        numerator,
        half_power,
        e: e.clone(),
        f: f.clone(),
    };

    let mut certs = Vec::with_capacity(ring.rank());
    for i in 0..n {
        for j in 0..n {
            for k in 0..db {
                let x = base.basis(k);
                let target = embed(&x, i, j);
                let e_ii = unit(i);
                let terms = if i != j {
                    // f = x e_ij + e_ii
                    let f = ring.add_(&target, &e_ii);
                    vec![term(1, 1, &f, &f), term(-1, 1, &e_ii, &e_ii)]
                } else {
                    let l = (i + 1) % n;
                    let e_ll = unit(l);
                    let one_minus_x = base.sub_(&base.one(), &x);
                    let g = [
                        embed(&x, i, i),
                        embed(&x, l, i),
                        embed(&one_minus_x, i, l),
                        embed(&one_minus_x, l, l),
                    ]
                    .iter()
                    .fold(ring.zero(), |acc, v| ring.add_(&acc, v));
                    let h1 = ring.add_(&embed(&x, l, i), &e_ll);
                    let h2 = ring.add_(&embed(&one_minus_x, i, l), &e_ii);
                    vec![
                        term(1, 1, &g, &e_ii),
                        term(-1, 2, &h1, &h1),
                        term(1, 2, &e_ll, &e_ll),
                        term(-1, 2, &h2, &h2),
                        term(1, 2, &e_ii, &e_ii),
                    ]
                };
                certs.push(SpanCertificate {
                    target_label: ring.labels()[(i * n + j) * db + k].clone(),
                    target,
                    terms,
                });
            }
        }
    }
    Ok(certs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::{is_weighted_jordan_hom, jordan_idempotent_span, satisfies_txy};

    #[test]
    fn grassmann_maps() {
        let g = grassmann_example(3).unwrap();
        let r = &g.ring;
        let u = r.basis(1);
        assert_eq!(g.t.weight(), r.add_(&r.one(), &u));
        assert!(g.t.is_bijective());
        assert!(!r.is_central(&g.t.weight()));
        let x = r.element(vec![2, 1, 0, 1]).unwrap();
        assert_eq!(g.s.apply(&x).unwrap().coords(), &[2, 2, 0, 1]);
        assert!(!is_weighted_jordan_hom(&g.t).passed);
        assert!(matches!(grassmann_example(2), Err(Error::CharUnsupported(_))));
        assert!(matches!(grassmann_example(9), Err(Error::CharUnsupported(_))));
    }

    #[test]
    fn char2_map_fails_at_recorded_pair() {
        let ex = char2_example().unwrap();
        let r = &ex.ring;
        let a = r.basis(r.basis_index(CHAR2_WITNESS.0).unwrap());
        let b = r.basis(r.basis_index(CHAR2_WITNESS.1).unwrap());
        let lhs = ex.t.apply(&r.jordan(&a, &b).unwrap()).unwrap();
        let rhs = r.jordan(&ex.t.apply(&a).unwrap(), &ex.t.apply(&b).unwrap()).unwrap();
        assert_eq!(lhs, r.add_(&b, &r.one()));
        assert_eq!(rhs, b);
        assert!(ex.t.is_bijective());
        assert!(!is_weighted_jordan_hom(&ex.t).passed);
    }

    #[test]
    fn constructed_maps() {
        let r = Arc::new(RingRecipe::matrix_over_zm(3, 2).build().unwrap());
        let u = r.element(vec![0, 1, 1, 0]).unwrap();
        let t = make_weighted_jh(r.clone(), &r.scale(2, &r.one()), Some(&u), false).unwrap();
        assert!(is_weighted_jordan_hom(&t).passed);
        assert!(satisfies_txy(&t).passed);
        let e11 = r.basis(0);
        assert!(matches!(make_weighted_jh(r.clone(), &e11, None, false), Err(Error::NotCentral)));
        assert!(matches!(make_weighted_jh(r.clone(), &r.zero(), None, false), Err(Error::NotCentral) | Err(Error::NotInvertible)));
        assert!(matches!(make_weighted_jh(r.clone(), &r.one(), Some(&e11), false), Err(Error::NotInvertible)));

        let r7 = Arc::new(RingRecipe::matrix_over_zm(7, 2).build().unwrap());
        let tr = make_weighted_jh(r7.clone(), &r7.one(), None, true).unwrap();
        assert_eq!(tr.apply(&r7.basis(1)).unwrap(), r7.basis(2));
        assert!(is_weighted_jordan_hom(&tr).passed);
        assert_eq!(jordan_kind(&tr), JordanKind::Antihomomorphism);

        let g = Arc::new(RingRecipe::grassmann2(RingRecipe::zm(3)).build().unwrap());
        assert!(matches!(make_weighted_jh(g.clone(), &g.one(), None, true), Err(Error::TransposeUnsupported)));
    }

    #[test]
    fn certificates() {
        let r = RingRecipe::matrix_over_zm(3, 2).build().unwrap();
        let certs = corollary_c1_certificate(&r).unwrap();
        assert_eq!(certs.len(), 4);
        assert!(certs.iter().all(|c| c.verify(&r)));
        assert!(jordan_idempotent_span(&r, 1 << 20).unwrap().is_full);

        let m2z9 = RingRecipe::matrix_over_zm(9, 2).build().unwrap();
        assert!(corollary_c1_certificate(&m2z9).unwrap().iter().all(|c| c.verify(&m2z9)));

        let over_grassmann = RingRecipe::matrix(RingRecipe::grassmann2(RingRecipe::zm(3)), 2).build().unwrap();
        let certs = corollary_c1_certificate(&over_grassmann).unwrap();
        assert_eq!(certs.len(), 16);
        assert!(certs.iter().all(|c| c.verify(&over_grassmann)));

        let f2 = RingRecipe::matrix_over_zm(2, 2).build().unwrap();
        assert!(matches!(corollary_c1_certificate(&f2), Err(Error::NoHalf)));
        let n1 = RingRecipe::matrix_over_zm(3, 1).build().unwrap();
        assert!(matches!(corollary_c1_certificate(&n1), Err(Error::RankTooSmall)));
        let z3 = RingRecipe::zm(3).build().unwrap();
        assert!(matches!(corollary_c1_certificate(&z3), Err(Error::NotMatrixRing)));
    }

    #[test]
    fn tampered_certificate_fails() {
        let r = RingRecipe::matrix_over_zm(5, 2).build().unwrap();
        let mut cert = corollary_c1_certificate(&r).unwrap().remove(1);
        cert.terms[0].numerator += 1;
        assert!(!cert.verify(&r));
    }
}
