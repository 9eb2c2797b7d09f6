//! Additive maps between rings of a common modulus.
//!
//! Every additive endomap of `(Z/m)^d` is Z/m-linear, so a map is just its
//! matrix in the two bases: column `j` holds the coordinates of `T(b_j)`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{smith, ModMatrix, Smith};
use crate::ring::{Element, Ring, RingRecipe};

#[derive(Clone, Debug)]
pub struct AdditiveMap {
    domain: Arc<Ring>,
    codomain: Arc<Ring>,
    matrix: ModMatrix,
}

impl PartialEq for AdditiveMap {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && same_ring(&self.domain, &other.domain) && same_ring(&self.codomain, &other.codomain)
    }
}

impl Eq for AdditiveMap {}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Clone, Debug)]
pub struct RankProfile {
    pub surjective: bool,
    pub injective: bool,
    pub inverse: Option<AdditiveMap>,
}

impl AdditiveMap {
    pub fn new(domain: Arc<Ring>, codomain: Arc<Ring>, matrix: ModMatrix) -> Result<Self> {
        if domain.modulus() != codomain.modulus() {
            return Err(Error::ModulusMismatch(domain.modulus(), codomain.modulus()));
        }
        if matrix.modulus() != domain.modulus() {
            return Err(Error::ModulusMismatch(domain.modulus(), matrix.modulus()));
        }
        if matrix.cols() != domain.rank() {
            return Err(Error::DimensionMismatch {
                expected: domain.rank(),
                got: matrix.cols(),
            });
        }
        if matrix.rows() != codomain.rank() {
            return Err(Error::DimensionMismatch {
                expected: codomain.rank(),
                got: matrix.rows(),
            });
        }
        Ok(AdditiveMap {
            domain,
            codomain,
            matrix,
        })
    }

    /// Endomap from a row-major matrix.
    pub fn from_rows(ring: Arc<Ring>, rows: &[Vec<u64>]) -> Result<Self> {
        let matrix = ModMatrix::from_rows(ring.modulus(), rows)?;
        Self::new(ring.clone(), ring, matrix)
    }

    /// Map determined by its values on the domain basis.
    pub fn from_images(domain: Arc<Ring>, codomain: Arc<Ring>, images: &[Element]) -> Result<Self> {
        if images.len() != domain.rank() {
            return Err(Error::DimensionMismatch {
                expected: domain.rank(),
                got: images.len(),
            });
        }
        let cols: Vec<Vec<u64>> = images.iter().map(|e| e.0.clone()).collect();
        if let Some(bad) = cols.iter().find(|c| c.len() != codomain.rank()) {
            return Err(Error::DimensionMismatch {
                expected: codomain.rank(),
                got: bad.len(),
            });
        }
        let matrix = ModMatrix::from_columns(domain.modulus(), codomain.rank(), &cols);
        Self::new(domain, codomain, matrix)
    }

    /// Endomap `x ↦ f(x)` tabulated on the basis.
    pub fn from_fn(ring: Arc<Ring>, f: impl Fn(&Element) -> Element) -> Result<Self> {
        let images: Vec<Element> = ring.basis_elements().iter().map(f).collect();
        Self::from_images(ring.clone(), ring, &images)
    }

    pub fn identity(ring: Arc<Ring>) -> Self {
        let matrix = ModMatrix::identity(ring.modulus(), ring.rank());
        AdditiveMap {
            domain: ring.clone(),
            codomain: ring,
            matrix,
        }
    }

    pub fn zero(domain: Arc<Ring>, codomain: Arc<Ring>) -> Result<Self> {
        let matrix = ModMatrix::zeros(domain.modulus(), codomain.rank(), domain.rank());
        Self::new(domain, codomain, matrix)
    }

    pub fn scalar(ring: Arc<Ring>, k: u64) -> Self {
        let m = ring.modulus();
        let mut matrix = ModMatrix::zeros(m, ring.rank(), ring.rank());
        for i in 0..ring.rank() {
            matrix.set(i, i, k % m);
        }
        AdditiveMap {
            domain: ring.clone(),
            codomain: ring,
            matrix,
        }
    }

    pub fn domain(&self) -> &Arc<Ring> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Ring> {
        &self.codomain
    }

    pub fn matrix(&self) -> &ModMatrix {
        &self.matrix
    }

    pub fn is_endomap(&self) -> bool {
        same_ring(&self.domain, &self.codomain)
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.len() != self.domain.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.domain.rank(),
                got: x.len(),
            });
        }
        Ok(self.apply_(x))
    }

    pub(crate) fn apply_(&self, x: &Element) -> Element {
        Element(self.matrix.mul_vec(&x.0))
    }

    /// `T(b_j)`.
    pub fn image_of_basis(&self, j: usize) -> Element {
        Element(self.matrix.column(j))
    }

    /// `c = T(1)`.
    pub fn weight(&self) -> Element {
        self.apply_(&self.domain.one())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AdditiveMap) -> Result<AdditiveMap> {
        if !same_ring(&first.codomain, &self.domain) {
            return Err(Error::DimensionMismatch {
                expected: self.domain.rank(),
                got: first.codomain.rank(),
            });
        }
        let matrix = self.matrix.mul(&first.matrix)?;
        Ok(AdditiveMap {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            matrix,
        })
    }

    /// Surjectivity, injectivity and inverse from the Smith form of the matrix.
    pub fn rank_profile(&self) -> RankProfile {
        let s = smith(&self.matrix);
        let inverse = s.inverse().map(|matrix| AdditiveMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix,
        });
        RankProfile {
            surjective: s.is_surjective(),
            injective: s.is_injective(),
            inverse,
        }
    }

    pub fn is_bijective(&self) -> bool {
        smith(&self.matrix).is_unimodular()
    }

    /// Map-file form: the domain recipe and the row-major matrix.
    pub fn to_file(&self) -> Result<MapFile> {
        if !self.is_endomap() {
            return Err(Error::InvalidConfig("map files hold endomaps only".into()));
        }
        let ring = self
            .domain
            .recipe()
            .cloned()
            .ok_or_else(|| Error::InvalidConfig("ring has no recipe".into()))?;
        Ok(MapFile {
            ring,
            matrix: self.matrix.to_rows(),
        })
    }

    pub fn from_file(file: &MapFile) -> Result<Self> {
        let ring = Arc::new(file.ring.build()?);
        Self::from_rows(ring, &file.matrix)
    }
}

/// On-disk map: `{"ring": <descriptor>, "matrix": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub ring: RingRecipe,
    pub matrix: Vec<Vec<u64>>,
}

/// Uniform random endomap drawn from ChaCha8 seeded with `seed`; entries are
/// generated row-major.
pub fn random_map(ring: Arc<Ring>, seed: u64) -> AdditiveMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_map_with(ring, &mut rng)
}

pub(crate) fn random_map_with(ring: Arc<Ring>, rng: &mut impl Rng) -> AdditiveMap {
    let m = ring.modulus();
    let d = ring.rank();
    let data = (0..d * d).map(|_| rng.gen_range(0..m)).collect();
    AdditiveMap {
        domain: ring.clone(),
        codomain: ring,
        matrix: ModMatrix::from_raw(m, d, d, data),
    }
}

pub fn random_element(ring: &Ring, rng: &mut impl Rng) -> Element {
    let m = ring.modulus();
    Element((0..ring.rank()).map(|_| rng.gen_range(0..m)).collect())
}

/// Solver for `S(b_i ∘ b_j) = T(b_i) ∘ T(b_j)` over all basis pairs `i <= j`.
///
/// The `d²` unknowns of `S` split into `d` independent blocks (one per row
/// of `S`) sharing the coefficient matrix `P[(i,j)][l] = (b_i ∘ b_j)_l`, so
/// the Smith form of `P` is computed once per ring and reused for every `T`.
#[derive(Clone, Debug)]
pub struct CompanionSolver {
    ring: Arc<Ring>,
    pairs: Vec<(usize, usize)>,
    smith: Smith,
}

impl CompanionSolver {
    pub fn new(ring: Arc<Ring>) -> Self {
        let d = ring.rank();
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
        let rows: Vec<Vec<u64>> = pairs
            .iter()
            .map(|&(i, j)| ring.jordan_(&ring.basis(i), &ring.basis(j)).0)
            .collect();
        let p = ModMatrix::from_rows(ring.modulus(), &rows).expect("reduced products");
        CompanionSolver {
            smith: smith(&p),
            pairs,
            ring,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// The canonical `S`, or `None` when no additive `S` exists.
    pub fn solve(&self, t: &AdditiveMap) -> Option<AdditiveMap> {
        if !same_ring(t.domain(), &self.ring) || !t.is_endomap() {
            return None;
        }
        let ring = &self.ring;
        let d = ring.rank();
        let images: Vec<Element> = (0..d).map(|j| t.image_of_basis(j)).collect();
        let mut rhs = vec![vec![0u64; self.pairs.len()]; d];
        let mut buf = vec![0u64; d];
        for (row, &(i, j)) in self.pairs.iter().enumerate() {
            ring.jordan_into(&images[i].0, &images[j].0, &mut buf);
            for k in 0..d {
                rhs[k][row] = buf[k];
            }
        }
        let mut data = Vec::with_capacity(d * d);
        for b in &rhs {
            data.extend(self.smith.particular(b)?);
        }
        Some(AdditiveMap {
            domain: ring.clone(),
            codomain: ring.clone(),
            matrix: ModMatrix::from_raw(ring.modulus(), d, d, data),
        })
    }
}

/// An additive `S` with `S(x ∘ y) = T(x) ∘ T(y)`, if one exists.
pub fn exists_companion_s(t: &AdditiveMap) -> Option<AdditiveMap> {
    if !t.is_endomap() {
        return None;
    }
    CompanionSolver::new(t.domain().clone()).solve(t)
}

/// Whether `S(b_i ∘ b_j) = T(b_i) ∘ T(b_j)` on every basis pair.
pub fn is_companion(t: &AdditiveMap, s: &AdditiveMap) -> bool {
    let ring = t.domain();
    let d = ring.rank();
    (0..d).all(|i| {
        (i..d).all(|j| {
            let (bi, bj) = (ring.basis(i), ring.basis(j));
            s.apply_(&ring.jordan_(&bi, &bj)) == ring.jordan_(&t.apply_(&bi), &t.apply_(&bj))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(p: u64) -> Arc<Ring> {
        Arc::new(RingRecipe::matrix_over_zm(p, 2).build().unwrap())
    }

    fn transpose(ring: Arc<Ring>) -> AdditiveMap {
        // e11 e12 e21 e22 -> e11 e21 e12 e22
        let rows = vec![
            vec![1, 0, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 0, 1],
        ];
        AdditiveMap::from_rows(ring, &rows).unwrap()
    }

    #[test]
    fn identity_and_zero_profiles() {
        let r = m2(3);
        let id = AdditiveMap::identity(r.clone());
        let p = id.rank_profile();
        assert!(p.surjective && p.injective);
        assert_eq!(p.inverse.unwrap(), id);
        let z = AdditiveMap::zero(r.clone(), r).unwrap().rank_profile();
        assert!(!z.surjective && !z.injective && z.inverse.is_none());
    }

    #[test]
    fn compositions() {
        let r = m2(3);
        let two = AdditiveMap::scalar(r.clone(), 2);
        assert_eq!(two.compose(&two).unwrap(), AdditiveMap::identity(r.clone()));
        let t = transpose(r.clone());
        assert_eq!(t.compose(&t).unwrap(), AdditiveMap::identity(r.clone()));
        let m = random_map(r.clone(), 3);
        if let Some(inv) = m.rank_profile().inverse {
            assert_eq!(m.compose(&inv).unwrap(), AdditiveMap::identity(r));
        }
    }

    #[test]
    fn random_map_is_deterministic() {
        let r = m2(3);
        assert_eq!(random_map(r.clone(), 0), random_map(r.clone(), 0));
        assert_ne!(random_map(r.clone(), 0), random_map(r, 1));
        let z7 = Arc::new(RingRecipe::zm(7).build().unwrap());
        let m = random_map(z7, 1);
        assert_eq!((m.matrix().rows(), m.matrix().cols()), (1, 1));
        assert!(m.matrix().get(0, 0) < 7);
    }

    #[test]
    fn random_entries_are_uniform() {
        let r = Arc::new(RingRecipe::zm(3).build().unwrap());
        let n = 10_000u64;
        let mut counts = [0u64; 3];
        for seed in 0..n {
            counts[random_map(r.clone(), seed).matrix().get(0, 0) as usize] += 1;
        }
        let expect = n as f64 / 3.0;
        let sigma = (n as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for c in counts {
            assert!((c as f64 - expect).abs() < 5.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn apply_checks_dimensions() {
        let r = m2(3);
        let id = AdditiveMap::identity(r);
        assert!(matches!(
            id.apply(&Element(vec![1, 2])),
            Err(Error::DimensionMismatch { expected: 4, got: 2 })
        ));
    }

    #[test]
    fn companion_of_identity() {
        let r = m2(3);
        let id = AdditiveMap::identity(r);
        let s = exists_companion_s(&id).unwrap();
        assert!(is_companion(&id, &s));
        assert_eq!(s, id);
    }

    #[test]
    fn companion_of_scaling_satisfies_weight_identity() {
        let r = m2(7);
        let t = AdditiveMap::scalar(r.clone(), 2);
        let s = exists_companion_s(&t).unwrap();
        let c = t.weight();
        for b in r.basis_elements() {
            let lhs = r.scale(2, &s.apply(&b).unwrap());
            let rhs = r.jordan(&t.apply(&b).unwrap(), &c).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
