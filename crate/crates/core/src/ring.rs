//! Finite unital rings presented by structure constants over Z/m.
//!
//! A ring is a free Z/m-module with basis `b_0 .. b_{d-1}` and a table
//! giving the coordinates of every product `b_i b_j`. All recipes build the
//! table by tensoring a small integer "shape" algebra (matrix units,
//! triangular units, Grassmann monomials) with a base ring, so rings like
//! `M_2(Z/9)` or the Grassmann algebra over `M_2(F_3)` come out of the same
//! code path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{smith, ModMatrix, Submodule};
use crate::modular::gcd;

/// Largest supported modulus. Keeps every unreduced accumulation inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 16;
/// Largest supported rank.
pub const MAX_RANK: usize = 64;
/// Default cap on `m^d` for element enumerations.
pub const DEFAULT_ENUM_CAP: u128 = 1_000_000;

/// Serializable construction recipe; this is the on-disk ring descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingRecipe {
    Zm { m: u64 },
    Matrix { base: Box<RingRecipe>, n: usize },
    Grassmann2 { base: Box<RingRecipe> },
    UpperTriangular { base: Box<RingRecipe>, n: usize },
    Product { left: Box<RingRecipe>, right: Box<RingRecipe> },
}

impl RingRecipe {
    pub fn zm(m: u64) -> Self {
        RingRecipe::Zm { m }
    }

    pub fn matrix(base: RingRecipe, n: usize) -> Self {
        RingRecipe::Matrix {
            base: Box::new(base),
            n,
        }
    }

    pub fn grassmann2(base: RingRecipe) -> Self {
        RingRecipe::Grassmann2 { base: Box::new(base) }
    }

    pub fn upper_triangular(base: RingRecipe, n: usize) -> Self {
        RingRecipe::UpperTriangular {
            base: Box::new(base),
            n,
        }
    }

    pub fn product(left: RingRecipe, right: RingRecipe) -> Self {
        RingRecipe::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// `M_n(Z/m)`.
    pub fn matrix_over_zm(m: u64, n: usize) -> Self {
        Self::matrix(Self::zm(m), n)
    }

    pub fn build(&self) -> Result<Ring> {
        build_ring(self)
    }
}

/// A ring element: coordinates in the ring's basis, each in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<u64>);

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl From<Element> for Vec<u64> {
    fn from(e: Element) -> Self {
        e.0
    }
}

/// Where a ring came from; matrix-specific operations (transpose, Capelli
/// evaluation, spanning certificates) consult it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Recipe(RingRecipe),
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    modulus: u64,
    rank: usize,
    /// `table[i * d + j]` holds the coordinates of `b_i b_j`.
    table: Vec<Vec<u64>>,
    /// Nonzero entries of each table row, for sparse products.
    sparse: Vec<Vec<(usize, u64)>>,
    unit: Element,
    labels: Vec<String>,
    kind: RingKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFlags {
    pub has_half: bool,
    pub two_torsion_free: bool,
    pub characteristic: u64,
}

impl Ring {
    /// Builds a ring from raw structure constants, validating associativity and the unit.
    pub fn from_table(
        modulus: u64,
        table: Vec<Vec<Vec<u64>>>,
        unit: Vec<u64>,
        labels: Vec<String>,
    ) -> Result<Ring> {
        let d = table.len();
        let mut flat = Vec::with_capacity(d * d);
        for row in table {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            flat.extend(row);
        }
        Self::assemble(modulus, d, flat, unit, labels, RingKind::Custom)
    }

    fn assemble(
        modulus: u64,
        rank: usize,
        table: Vec<Vec<u64>>,
        unit: Vec<u64>,
        labels: Vec<String>,
        kind: RingKind,
    ) -> Result<Ring> {
        if !(2..=MAX_MODULUS).contains(&modulus) {
            return Err(Error::InvalidRecipe(format!(
                "modulus {modulus} outside [2, {MAX_MODULUS}]"
            )));
        }
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::InvalidRecipe(format!("rank {rank} outside [1, {MAX_RANK}]")));
        }
        if labels.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                got: labels.len(),
            });
        }
        if unit.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                got: unit.len(),
            });
        }
        for v in table.iter().chain(std::iter::once(&unit)) {
            if v.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: v.len(),
                });
            }
            if let Some(&bad) = v.iter().find(|&&c| c >= modulus) {
                return Err(Error::OutOfRange {
                    value: bad,
                    modulus,
                });
            }
        }
        let sparse = table
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(k, &c)| (k, c))
                    .collect()
            })
            .collect();
        let ring = Ring {
            modulus,
            rank,
            table,
            sparse,
            unit: Element(unit),
            labels,
            kind,
        };
        ring.validate()?;
        Ok(ring)
    }

    fn validate(&self) -> Result<()> {
        let d = self.rank;
        for i in 0..d {
            for j in 0..d {
                let bij = &self.table[i * d + j];
                for k in 0..d {
                    let left = self.right_mul_basis(bij, k);
                    let bjk = &self.table[j * d + k];
                    let right = self.left_mul_basis(i, bjk);
                    if left != right {
                        return Err(Error::AssocViolation(i, j, k));
                    }
                }
            }
        }
        for i in 0..d {
            let b = self.basis(i);
            if self.mul_raw(&self.unit.0, &b.0) != b.0 || self.mul_raw(&b.0, &self.unit.0) != b.0 {
                return Err(Error::UnitViolation(i));
            }
        }
        Ok(())
    }

    fn right_mul_basis(&self, x: &[u64], k: usize) -> Vec<u64> {
        let mut e = vec![0; self.rank];
        e[k] = 1;
        self.mul_raw(x, &e)
    }

    fn left_mul_basis(&self, i: usize, y: &[u64]) -> Vec<u64> {
        let mut e = vec![0; self.rank];
        e[i] = 1;
        self.mul_raw(&e, y)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn recipe(&self) -> Option<&RingRecipe> {
        match &self.kind {
            RingKind::Recipe(r) => Some(r),
            RingKind::Custom => None,
        }
    }

    /// `(n, base)` when the ring was built as `matrix(base, n)`.
    pub fn matrix_shape(&self) -> Option<(usize, &RingRecipe)> {
        match self.recipe()? {
            RingRecipe::Matrix { base, n } => Some((*n, base)),
            _ => None,
        }
    }

    /// Coordinates of `b_i b_j`.
    pub fn structure_constants(&self, i: usize, j: usize) -> &[u64] {
        &self.table[i * self.rank + j]
    }

    /// Number of elements, `m^d`, saturating.
    pub fn order(&self) -> u128 {
        (self.modulus as u128)
            .checked_pow(self.rank as u32)
            .unwrap_or(u128::MAX)
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<Element> {
        self.check_len(coords.len())?;
        if let Some(&bad) = coords.iter().find(|&&c| c >= self.modulus) {
            return Err(Error::OutOfRange {
                value: bad,
                modulus: self.modulus,
            });
        }
        Ok(Element(coords))
    }

    /// Reduces arbitrary integer coordinates into an element.
    pub fn element_from_ints(&self, coords: &[i64]) -> Result<Element> {
        self.check_len(coords.len())?;
        let m = self.modulus as i64;
        Ok(Element(coords.iter().map(|c| c.rem_euclid(m) as u64).collect()))
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank])
    }

    pub fn one(&self) -> Element {
        self.unit.clone()
    }

    pub fn basis(&self, i: usize) -> Element {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        Element(v)
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        (0..self.rank).map(|i| self.basis(i)).collect()
    }

    pub fn basis_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The `idx`-th element in lexicographic coordinate order.
    pub fn element_at(&self, mut idx: u128) -> Element {
        let m = self.modulus as u128;
        let mut v = vec![0; self.rank];
        for k in (0..self.rank).rev() {
            v[k] = (idx % m) as u64;
            idx /= m;
        }
        Element(v)
    }

    /// Every element in lexicographic order, provided `m^d <= cap`.
    pub fn elements(&self, cap: u128) -> Result<ElementIter> {
        let size = self.order();
        if size > cap {
            return Err(Error::TooLarge { size, cap });
        }
        Ok(ElementIter {
            modulus: self.modulus,
            next: Some(vec![0; self.rank]),
        })
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got,
            });
        }
        Ok(())
    }

    fn check(&self, x: &Element) -> Result<()> {
        self.check_len(x.len())
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_(x, y))
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.sub_(x, y))
    }

    pub fn neg(&self, x: &Element) -> Element {
        let m = self.modulus;
        Element(x.0.iter().map(|&a| (m - a) % m).collect())
    }

    pub fn scale(&self, k: u64, x: &Element) -> Element {
        let m = self.modulus;
        let k = k % m;
        Element(x.0.iter().map(|&a| a * k % m).collect())
    }

    pub fn scale_int(&self, k: i64, x: &Element) -> Element {
        self.scale(k.rem_euclid(self.modulus as i64) as u64, x)
    }

    pub(crate) fn add_(&self, x: &Element, y: &Element) -> Element {
        let m = self.modulus;
        Element(x.0.iter().zip(&y.0).map(|(a, b)| (a + b) % m).collect())
    }

    pub(crate) fn sub_(&self, x: &Element, y: &Element) -> Element {
        let m = self.modulus;
        Element(x.0.iter().zip(&y.0).map(|(a, b)| (a + m - b) % m).collect())
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_(x, y))
    }

    /// The Jordan product `xy + yx`.
    pub fn jordan(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.jordan_(x, y))
    }

    /// The commutator `xy - yx`.
    pub fn commutator(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.sub_(&self.mul_(x, y), &self.mul_(y, x)))
    }

    pub(crate) fn mul_(&self, x: &Element, y: &Element) -> Element {
        Element(self.mul_raw(&x.0, &y.0))
    }

    pub(crate) fn jordan_(&self, x: &Element, y: &Element) -> Element {
        let mut out = vec![0; self.rank];
        self.jordan_into(&x.0, &y.0, &mut out);
        Element(out)
    }

    pub(crate) fn mul_raw(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.rank];
        self.mul_into(x, y, &mut out);
        out
    }

    /// `out = x·y` on raw coordinate slices.
    pub fn mul_into(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        out.iter_mut().for_each(|o| *o = 0);
        self.accumulate(x, y, out);
        out.iter_mut().for_each(|o| *o %= self.modulus);
    }

    /// `out = x·y + y·x` on raw coordinate slices.
    pub fn jordan_into(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        out.iter_mut().for_each(|o| *o = 0);
        self.accumulate(x, y, out);
        self.accumulate(y, x, out);
        out.iter_mut().for_each(|o| *o %= self.modulus);
    }

    // Terms are below m^3 <= 2^48 and there are at most 2·d^2 <= 2^13 of them.
    fn accumulate(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        let d = self.rank;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let row = &self.sparse[i * d..(i + 1) * d];
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let xy = xi * yj;
                for &(k, c) in &row[j] {
                    out[k] += xy * c;
                }
            }
        }
    }

    pub fn is_idempotent(&self, x: &Element) -> bool {
        self.mul_(x, x) == *x
    }

    pub fn is_central(&self, x: &Element) -> bool {
        self.noncommuting_basis(x).is_none()
    }

    /// First basis element failing to commute with `x`.
    pub fn noncommuting_basis(&self, x: &Element) -> Option<usize> {
        (0..self.rank).find(|&i| {
            let b = self.basis(i);
            self.mul_(x, &b) != self.mul_(&b, x)
        })
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mul_matrix(&self, x: &Element) -> ModMatrix {
        let cols: Vec<Vec<u64>> = (0..self.rank).map(|j| self.mul_(x, &self.basis(j)).0).collect();
        ModMatrix::from_columns(self.modulus, self.rank, &cols)
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_mul_matrix(&self, x: &Element) -> ModMatrix {
        let cols: Vec<Vec<u64>> = (0..self.rank).map(|j| self.mul_(&self.basis(j), x).0).collect();
        ModMatrix::from_columns(self.modulus, self.rank, &cols)
    }

    /// Elements with `x² = x`, in lexicographic order.
    pub fn enumerate_idempotents(&self, cap: u128) -> Result<Vec<Element>> {
        let mut out = Vec::new();
        let mut sq = vec![0; self.rank];
        for x in self.elements(cap)? {
            self.mul_into(&x, &x, &mut sq);
            if sq == x {
                out.push(Element(x));
            }
        }
        Ok(out)
    }

    /// Howell-form basis of the center, from the commutator system `[x, b_i] = 0`.
    pub fn center_basis(&self) -> Vec<Element> {
        let d = self.rank;
        let m = self.modulus;
        let mut rows = Vec::with_capacity(d * d);
        for i in 0..d {
            for k in 0..d {
                rows.push(
                    (0..d)
                        .map(|j| {
                            let ji = self.table[j * d + i][k];
                            let ij = self.table[i * d + j][k];
                            (ji + m - ij) % m
                        })
                        .collect::<Vec<u64>>(),
                );
            }
        }
        let a = ModMatrix::from_rows(m, &rows).expect("reduced commutator rows");
        let kernel = smith(&a).kernel();
        Submodule::span(m, d, kernel)
            .basis()
            .into_iter()
            .map(Element)
            .collect()
    }

    /// Two-sided inverse, if any.
    pub fn try_inverse(&self, x: &Element) -> Option<Element> {
        if x.len() != self.rank {
            return None;
        }
        let left = self.left_mul_matrix(x);
        let y = smith(&left).particular(&self.unit.0)?;
        let y = Element(y);
        (self.mul_(x, &y) == self.unit && self.mul_(&y, x) == self.unit).then_some(y)
    }

    pub fn flags(&self) -> RingFlags {
        let m = self.modulus;
        let content = self.unit.0.iter().fold(0, |g, &c| gcd(g, c));
        RingFlags {
            has_half: m % 2 == 1,
            two_torsion_free: m % 2 == 1,
            characteristic: m / gcd(m, content),
        }
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.rank;
        (0..d).all(|i| (0..d).all(|j| self.table[i * d + j] == self.table[j * d + i]))
    }

    pub fn format_element(&self, x: &Element) -> String {
        let terms: Vec<String> = x
            .0
            .iter()
            .zip(&self.labels)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, l)| if c == 1 { l.clone() } else { format!("{c}·{l}") })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// Odometer over `(Z/m)^d` in lexicographic order.
pub struct ElementIter {
    modulus: u64,
    next: Option<Vec<u64>>,
}

impl Iterator for ElementIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for k in (0..succ.len()).rev() {
            succ[k] += 1;
            if succ[k] < self.modulus {
                self.next = Some(succ);
                return Some(current);
            }
            succ[k] = 0;
        }
        Some(current)
    }
}

/// Integer structure constants of a small "shape" algebra that gets tensored with a base ring.
struct Shape {
    labels: Vec<String>,
    /// `products[i][j] = Some((k, sign))` when `s_i s_j = sign · s_k`.
    products: Vec<Vec<Option<(usize, i64)>>>,
    unit: Vec<i64>,
}

impl Shape {
    fn matrix_units(n: usize, upper_only: bool) -> Shape {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !upper_only || i <= j)
            .collect();
        let index = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j));
        let products = pairs
            .iter()
            .map(|&(i, j)| {
                pairs
                    .iter()
                    .map(|&(k, l)| if j == k { index(i, l).map(|s| (s, 1)) } else { None })
                    .collect()
            })
            .collect();
        let unit = pairs.iter().map(|&(i, j)| i64::from(i == j)).collect();
        let labels = pairs.iter().map(|&(i, j)| format!("e{}{}", i + 1, j + 1)).collect();
        Shape {
            labels,
            products,
            unit,
        }
    }

    /// Basis `1, u, v, uv` with `u² = v² = 0`, `vu = -uv`.
    fn grassmann2() -> Shape {
        const ONE: usize = 0;
        const U: usize = 1;
        const V: usize = 2;
        const UV: usize = 3;
        let mut products = vec![vec![None; 4]; 4];
        for (s, row) in products.iter_mut().enumerate() {
            row[ONE] = Some((s, 1));
        }
        products[ONE] = (0..4).map(|s| Some((s, 1))).collect();
        products[U][V] = Some((UV, 1));
        products[V][U] = Some((UV, -1));
        Shape {
            labels: ["1", "u", "v", "uv"].map(String::from).to_vec(),
            products,
            unit: vec![1, 0, 0, 0],
        }
    }
}

fn tensor(shape: &Shape, base: &Ring, recipe: RingRecipe) -> Result<Ring> {
    let m = base.modulus;
    let db = base.rank;
    let ds = shape.labels.len();
    let d = ds * db;
    let mut table = vec![vec![0u64; d]; d * d];
    for s1 in 0..ds {
        for s2 in 0..ds {
            let Some((s3, sign)) = shape.products[s1][s2] else {
                continue;
            };
            let sign = sign.rem_euclid(m as i64) as u64;
            for k1 in 0..db {
                for k2 in 0..db {
                    let bk = base.structure_constants(k1, k2);
                    let entry = &mut table[(s1 * db + k1) * d + (s2 * db + k2)];
                    for (k3, &c) in bk.iter().enumerate() {
                        entry[s3 * db + k3] = c * sign % m;
                    }
                }
            }
        }
    }
    let mut unit = vec![0u64; d];
    for (s, &u) in shape.unit.iter().enumerate() {
        for k in 0..db {
            unit[s * db + k] = (u.rem_euclid(m as i64) as u64) * base.unit.0[k] % m;
        }
    }
    let trivial_base = db == 1 && base.labels[0] == "1";
    let labels = shape
        .labels
        .iter()
        .flat_map(|s| {
            base.labels.iter().map(move |b| {
                if trivial_base {
                    s.clone()
                } else if s == "1" {
                    b.clone()
                } else {
                    format!("{s}*{b}")
                }
            })
        })
        .collect();
    Ring::assemble(m, d, table, unit, labels, RingKind::Recipe(recipe))
}

/// Realizes a recipe as a validated ring.
pub fn build_ring(recipe: &RingRecipe) -> Result<Ring> {
    match recipe {
        RingRecipe::Zm { m } => Ring::assemble(
            *m,
            1,
            vec![vec![1]],
            vec![1],
            vec!["1".into()],
            RingKind::Recipe(recipe.clone()),
        ),
        RingRecipe::Matrix { base, n } => {
            if *n == 0 {
                return Err(Error::InvalidRecipe("matrix size must be positive".into()));
            }
            let base = build_ring(base)?;
            tensor(&Shape::matrix_units(*n, false), &base, recipe.clone())
        }
        RingRecipe::UpperTriangular { base, n } => {
            if *n == 0 {
                return Err(Error::InvalidRecipe("matrix size must be positive".into()));
            }
            let base = build_ring(base)?;
            tensor(&Shape::matrix_units(*n, true), &base, recipe.clone())
        }
        RingRecipe::Grassmann2 { base } => {
            let base = build_ring(base)?;
            if base.modulus % 2 == 0 {
                return Err(Error::CharUnsupported(format!(
                    "grassmann2 needs an odd modulus, got {}",
                    base.modulus
                )));
            }
            tensor(&Shape::grassmann2(), &base, recipe.clone())
        }
        RingRecipe::Product { left, right } => {
            let l = build_ring(left)?;
            let r = build_ring(right)?;
            if l.modulus != r.modulus {
                return Err(Error::ModulusMismatch(l.modulus, r.modulus));
            }
            let (dl, dr) = (l.rank, r.rank);
            let d = dl + dr;
            let mut table = vec![vec![0u64; d]; d * d];
            for i in 0..dl {
                for j in 0..dl {
                    table[i * d + j][..dl].copy_from_slice(l.structure_constants(i, j));
                }
            }
            for i in 0..dr {
                for j in 0..dr {
                    table[(dl + i) * d + dl + j][dl..].copy_from_slice(r.structure_constants(i, j));
                }
            }
            let unit = l.unit.0.iter().chain(&r.unit.0).copied().collect();
            let labels = l
                .labels
                .iter()
                .map(|s| format!("L:{s}"))
                .chain(r.labels.iter().map(|s| format!("R:{s}")))
                .collect();
            Ring::assemble(l.modulus, d, table, unit, labels, RingKind::Recipe(recipe.clone()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2f3() -> Ring {
        RingRecipe::matrix_over_zm(3, 2).build().unwrap()
    }

    fn el(ring: &Ring, label: &str) -> Element {
        ring.basis(ring.basis_index(label).unwrap())
    }

    #[test]
    fn zm_basics() {
        let z7 = RingRecipe::zm(7).build().unwrap();
        assert_eq!((z7.rank(), z7.modulus()), (1, 7));
        assert_eq!(z7.one().coords(), &[1]);
        let p = z7.mul(&Element(vec![3]), &Element(vec![5])).unwrap();
        assert_eq!(p.coords(), &[1]);
        assert_eq!(z7.enumerate_idempotents(DEFAULT_ENUM_CAP).unwrap(), vec![Element(vec![0]), Element(vec![1])]);
    }

    #[test]
    fn matrix_ring_shape() {
        let r = m2f3();
        assert_eq!(r.rank(), 4);
        assert_eq!(r.order(), 81);
        assert_eq!(r.labels(), &["e11", "e12", "e21", "e22"]);
        assert_eq!(r.mul(&el(&r, "e11"), &el(&r, "e12")).unwrap(), el(&r, "e12"));
        assert_eq!(r.jordan(&el(&r, "e11"), &el(&r, "e12")).unwrap(), el(&r, "e12"));
    }

    #[test]
    fn grassmann_relations() {
        let g = RingRecipe::grassmann2(RingRecipe::zm(3)).build().unwrap();
        let (u, v, uv) = (el(&g, "u"), el(&g, "v"), el(&g, "uv"));
        assert_eq!(g.mul(&v, &u).unwrap(), g.scale(2, &uv));
        assert!(g.jordan(&u, &v).unwrap().is_zero());
        assert!(g.mul(&u, &u).unwrap().is_zero());
        assert_eq!(
            RingRecipe::grassmann2(RingRecipe::zm(2)).build().unwrap_err().to_string(),
            Error::CharUnsupported("grassmann2 needs an odd modulus, got 2".into()).to_string()
        );
    }

    #[test]
    fn product_rejects_mixed_moduli() {
        let err = RingRecipe::product(RingRecipe::zm(3), RingRecipe::zm(5)).build().unwrap_err();
        assert!(matches!(err, Error::ModulusMismatch(3, 5)));
        let ok = RingRecipe::product(RingRecipe::zm(3), RingRecipe::matrix_over_zm(3, 2)).build().unwrap();
        assert_eq!(ok.rank(), 5);
        assert_eq!(ok.one().coords(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn bad_table_is_rejected() {
        let labels = || vec!["1".to_string(), "a".to_string(), "b".to_string()];
        // a·a = b, a·b = 0, b·a = a: (aa)a = a but a(aa) = 0.
        let nonassoc = vec![
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 0, 0]],
        ];
        let err = Ring::from_table(5, nonassoc, vec![1, 0, 0], labels()).unwrap_err();
        assert!(matches!(err, Error::AssocViolation(..)), "{err}");

        // Truncated polynomials k[a]/(a^3) pass.
        let trunc = vec![
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
            vec![vec![0, 0, 1], vec![0, 0, 0], vec![0, 0, 0]],
        ];
        assert!(Ring::from_table(5, trunc.clone(), vec![1, 0, 0], labels()).is_ok());
        let err = Ring::from_table(5, trunc, vec![0, 1, 0], labels()).unwrap_err();
        assert!(matches!(err, Error::UnitViolation(0)), "{err}");
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let r = m2f3();
        let err = r.mul(&Element(vec![1, 0]), &r.one()).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 4, got: 2 }));
    }

    #[test]
    fn center_of_matrix_and_grassmann() {
        let r = m2f3();
        assert_eq!(r.center_basis(), vec![r.one()]);
        let g = RingRecipe::grassmann2(RingRecipe::zm(3)).build().unwrap();
        assert_eq!(g.center_basis(), vec![g.one(), el(&g, "uv")]);
        let z = RingRecipe::zm(6).build().unwrap();
        assert_eq!(z.center_basis(), vec![z.one()]);
    }

    #[test]
    fn inverses() {
        let g = RingRecipe::grassmann2(RingRecipe::zm(3)).build().unwrap();
        let x = g.add(&g.one(), &el(&g, "u")).unwrap();
        let expect = g.add(&g.one(), &g.scale(2, &el(&g, "u"))).unwrap();
        assert_eq!(g.try_inverse(&x), Some(expect));

        let r = m2f3();
        assert_eq!(r.try_inverse(&el(&r, "e11")), None);
        let two = r.scale(2, &r.one());
        assert_eq!(r.try_inverse(&two), Some(two.clone()));
    }

    #[test]
    fn flags() {
        let z6 = RingRecipe::zm(6).build().unwrap().flags();
        assert!(!z6.has_half && !z6.two_torsion_free);
        let z9 = RingRecipe::zm(9).build().unwrap().flags();
        assert!(z9.has_half && z9.two_torsion_free);
        let m2f2 = RingRecipe::matrix_over_zm(2, 2).build().unwrap().flags();
        assert_eq!(m2f2.characteristic, 2);
        assert!(!m2f2.has_half);
    }

    #[test]
    fn recipe_json_round_trip() {
        let recipe = RingRecipe::upper_triangular(RingRecipe::zm(3), 2);
        let json = serde_json::to_string(&recipe).unwrap();
        assert_eq!(json, r#"{"kind":"upper_triangular","base":{"kind":"zm","m":3},"n":2}"#);
        let back: RingRecipe = serde_json::from_str(&json).unwrap();
        assert_eq!(back, recipe);
        let r = back.build().unwrap();
        assert_eq!(r.labels(), &["e11", "e12", "e22"]);
    }
}
