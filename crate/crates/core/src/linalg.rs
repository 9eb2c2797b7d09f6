//! Exact linear algebra over Z/m: Smith normal form, solving `Ax = b`,
//! submodule spans in Howell form, and rank over prime fields.

use std::fmt;

use crate::error::{Error, Result};
use crate::modular::{ext_gcd, gcd, normalizing_unit, reduce};

/// Dense row-major matrix with entries in Z/m.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Self {
        ModMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let mut id = Self::zeros(modulus, n, n);
        for i in 0..n {
            id.data[i * n + i] = 1 % modulus;
        }
        id
    }

    /// Builds a matrix from rows; every entry must already lie in `[0, modulus)`.
    pub fn from_rows(modulus: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            for &v in row {
                if v >= modulus {
                    return Err(Error::OutOfRange { value: v, modulus });
                }
                data.push(v);
            }
        }
        Ok(ModMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub(crate) fn from_columns(modulus: u64, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut out = Self::zeros(modulus, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                out.data[i * columns.len() + j] = v % modulus;
            }
        }
        out
    }

    pub(crate) fn from_raw(modulus: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ModMatrix {
            modulus,
            rows,
            cols,
            data,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.rows];
        self.mul_vec_into(v, &mut out);
        out
    }

    pub(crate) fn mul_vec_into(&self, v: &[u64], out: &mut [u64]) {
        debug_assert_eq!(v.len(), self.cols);
        for (r, o) in out.iter_mut().enumerate() {
            let row = self.row(r);
            let mut acc = 0u64;
            for (a, b) in row.iter().zip(v) {
                acc = (acc + a * b) % self.modulus;
            }
            *o = acc;
        }
    }

    pub fn mul(&self, other: &ModMatrix) -> Result<ModMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        let m = self.modulus;
        let mut out = Self::zeros(m, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % m;
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// Replaces rows `(p, q)` by `(s·p + t·q, u·p + v·q)`.
    fn mix_rows(&mut self, p: usize, q: usize, [s, t, u, v]: [u64; 4]) {
        let m = self.modulus;
        for c in 0..self.cols {
            let a = self.data[p * self.cols + c];
            let b = self.data[q * self.cols + c];
            self.data[p * self.cols + c] = (s * a + t * b) % m;
            self.data[q * self.cols + c] = (u * a + v * b) % m;
        }
    }

    /// Replaces columns `(p, q)` by `(s·p + t·q, u·p + v·q)`.
    fn mix_cols(&mut self, p: usize, q: usize, [s, t, u, v]: [u64; 4]) {
        let m = self.modulus;
        for r in 0..self.rows {
            let a = self.data[r * self.cols + p];
            let b = self.data[r * self.cols + q];
            self.data[r * self.cols + p] = (s * a + t * b) % m;
            self.data[r * self.cols + q] = (u * a + v * b) % m;
        }
    }

    fn scale_row(&mut self, r: usize, k: u64) {
        let m = self.modulus;
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = self.data[idx] * k % m;
        }
    }
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModMatrix(mod {}) ", self.modulus)?;
        f.debug_list().entries((0..self.rows).map(|r| self.row(r))).finish()
    }
}

/// Unimodular 2x2 transform sending `(a, b)` to `(gcd(a, b), 0)`, reduced mod `m`.
fn gcd_transform(a: u64, b: u64, m: u64) -> [u64; 4] {
    // Plain elimination when `a | b`, so a cleared line is never refilled
    // without the pivot strictly decreasing.
    if a != 0 && b.is_multiple_of(a) {
        return [1, 0, (m - (b / a) % m) % m, 1];
    }
    let (g, s, t) = ext_gcd(a, b);
    let u = -((b / g) as i128);
    let v = (a / g) as i128;
    [reduce(s, m), reduce(t, m), reduce(u, m), reduce(v, m)]
}

/// `left · A · right = diag`, with `diag[i]` dividing `diag[i+1]` and every
/// nonzero diagonal entry normalized to a divisor of the modulus.
#[derive(Clone, Debug)]
pub struct Smith {
    modulus: u64,
    rows: usize,
    cols: usize,
    pub diag: Vec<u64>,
    pub left: ModMatrix,
    pub right: ModMatrix,
}

/// One solution of `Ax = b` together with generators of the solution module of `Ax = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

pub fn smith(a: &ModMatrix) -> Smith {
    let m = a.modulus;
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut left = ModMatrix::identity(m, rows);
    let mut right = ModMatrix::identity(m, cols);
    let k = rows.min(cols);

    'outer: for t in 0..k {
        loop {
            // Pivot: entry generating the largest ideal, ties broken by value.
            let mut best: Option<(u64, u64, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = d.get(i, j);
                    if v == 0 {
                        continue;
                    }
                    let key = (gcd(v, m), v, i, j);
                    if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                        best = Some(key);
                    }
                }
            }
            let Some((_, _, pi, pj)) = best else {
                break 'outer;
            };
            d.swap_rows(t, pi);
            left.swap_rows(t, pi);
            d.swap_cols(t, pj);
            right.swap_cols(t, pj);

            // Column ops can refill column t; alternate until both are clear.
            loop {
                for i in t + 1..rows {
                    let b = d.get(i, t);
                    if b != 0 {
                        let tr = gcd_transform(d.get(t, t), b, m);
                        d.mix_rows(t, i, tr);
                        left.mix_rows(t, i, tr);
                    }
                }
                for j in t + 1..cols {
                    let b = d.get(t, j);
                    if b != 0 {
                        let tr = gcd_transform(d.get(t, t), b, m);
                        d.mix_cols(t, j, tr);
                        right.mix_cols(t, j, tr);
                    }
                }
                if (t + 1..rows).all(|i| d.get(i, t) == 0) {
                    break;
                }
            }

            let unit = normalizing_unit(d.get(t, t), m);
            d.scale_row(t, unit);
            left.scale_row(t, unit);
            let pivot = d.get(t, t);

            // Divisibility: fold any offending row into the pivot row and retry.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(pivot)));
            match offender {
                Some(i) => {
                    d.mix_rows(t, i, [1, 1, 0, 1]);
                    left.mix_rows(t, i, [1, 1, 0, 1]);
                }
                None => break,
            }
        }
    }

    let diag = (0..k).map(|i| d.get(i, i)).collect();
    Smith {
        modulus: m,
        rows,
        cols,
        diag,
        left,
        right,
    }
}

impl Smith {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|&&v| v != 0).count()
    }

    /// Every invariant factor is a unit and the matrix is square.
    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.diag.iter().all(|&v| gcd(v, self.modulus) == 1)
    }

    pub fn is_surjective(&self) -> bool {
        self.rows <= self.cols && self.diag.iter().all(|&v| gcd(v, self.modulus) == 1)
    }

    pub fn is_injective(&self) -> bool {
        self.cols <= self.rows && self.diag.iter().all(|&v| gcd(v, self.modulus) == 1)
    }

    /// Generators of `{x : Ax = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let m = self.modulus;
        let mut gens = Vec::new();
        for i in 0..self.cols {
            let scale = match self.diag.get(i) {
                Some(&dv) => {
                    let g = gcd(dv, m);
                    if g == 1 {
                        continue;
                    }
                    m / g
                }
                None => 1,
            };
            let v: Vec<u64> = self.right.column(i).iter().map(|x| x * scale % m).collect();
            if v.iter().any(|&x| x != 0) {
                gens.push(v);
            }
        }
        gens
    }

    /// Canonical solution: constrained coordinates take their least residue,
    /// free coordinates are zero.
    pub fn particular(&self, b: &[u64]) -> Option<Vec<u64>> {
        let m = self.modulus;
        debug_assert_eq!(b.len(), self.rows);
        let c = self.left.mul_vec(b);
        let mut y = vec![0u64; self.cols];
        for (i, &ci) in c.iter().enumerate() {
            match self.diag.get(i) {
                Some(&dv) => {
                    let g = gcd(dv, m);
                    if ci % g != 0 {
                        return None;
                    }
                    let m_g = m / g;
                    if m_g > 1 {
                        let inv = crate::modular::inverse((dv / g) % m_g, m_g)?;
                        y[i] = (ci / g) % m_g * inv % m_g;
                    }
                }
                None => {
                    if ci != 0 {
                        return None;
                    }
                }
            }
        }
        Some(self.right.mul_vec(&y))
    }

    pub fn solve(&self, b: &[u64]) -> Option<Solution> {
        self.particular(b).map(|particular| Solution {
            particular,
            kernel: self.kernel(),
        })
    }

    /// `A⁻¹ = right · diag⁻¹ · left` when `A` is unimodular.
    pub fn inverse(&self) -> Option<ModMatrix> {
        if !self.is_unimodular() {
            return None;
        }
        let m = self.modulus;
        let n = self.rows;
        let mut scaled = self.left.clone();
        for i in 0..n {
            let inv = crate::modular::inverse(self.diag[i], m)?;
            scaled.scale_row(i, inv);
        }
        self.right.mul(&scaled).ok()
    }
}

/// Solves `Ax = b` over Z/m; `None` when the system is inconsistent.
pub fn solve_module_system(a: &ModMatrix, b: &[u64]) -> Result<Option<Solution>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            got: b.len(),
        });
    }
    let b: Vec<u64> = b.iter().map(|v| v % a.modulus).collect();
    Ok(smith(a).solve(&b))
}

/// A submodule of (Z/m)^n held in Howell form: echelon rows with pivots
/// dividing `m`, closed so that membership is decided by straight reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    modulus: u64,
    dim: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Submodule {
    pub fn zero(modulus: u64, dim: usize) -> Self {
        Submodule {
            modulus,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn span<I>(modulus: u64, dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let rows = howell(modulus, dim, gens.into_iter().collect());
        Submodule { modulus, dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Vec<Vec<u64>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    pub fn pivots(&self) -> Vec<(usize, u64)> {
        self.rows.iter().map(|(c, r)| (*c, r[*c])).collect()
    }

    /// Number of generators in the Howell basis.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Cardinality of the submodule, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        self.rows.iter().fold(1u128, |acc, (c, r)| {
            acc.saturating_mul((self.modulus / r[*c]) as u128)
        })
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim && self.rows.iter().all(|(c, r)| r[*c] == 1)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let m = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|x| x % m).collect();
        for (c, row) in &self.rows {
            let p = row[*c];
            if !v[*c].is_multiple_of(p) {
                return false;
            }
            let q = v[*c] / p;
            if q != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + (m - q) * r) % m;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the generating set; returns whether the submodule grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        if self.contains(&v) {
            return false;
        }
        let mut gens = self.basis();
        gens.push(v);
        self.rows = howell(self.modulus, self.dim, gens);
        true
    }
}

fn howell(m: u64, dim: usize, gens: Vec<Vec<u64>>) -> Vec<(usize, Vec<u64>)> {
    let nonzero = |r: &Vec<u64>| r.iter().any(|&x| x != 0);
    let mut pending: Vec<Vec<u64>> = gens
        .into_iter()
        .map(|r| r.into_iter().map(|x| x % m).collect())
        .filter(nonzero)
        .collect();
    let mut out: Vec<(usize, Vec<u64>)> = Vec::new();

    for col in 0..dim {
        let mut pivot: Option<Vec<u64>> = None;
        let mut rest = Vec::with_capacity(pending.len());
        for r in pending.drain(..) {
            if r[col] == 0 {
                rest.push(r);
                continue;
            }
            match pivot.as_mut() {
                None => pivot = Some(r),
                Some(p) => {
                    let [s, t, u, v] = gcd_transform(p[col], r[col], m);
                    let new_p: Vec<u64> = p.iter().zip(&r).map(|(a, b)| (s * a + t * b) % m).collect();
                    let new_r: Vec<u64> = p.iter().zip(&r).map(|(a, b)| (u * a + v * b) % m).collect();
                    *p = new_p;
                    if nonzero(&new_r) {
                        rest.push(new_r);
                    }
                }
            }
        }
        if let Some(mut p) = pivot {
            let unit = normalizing_unit(p[col], m);
            p.iter_mut().for_each(|x| *x = *x * unit % m);
            let ann = m / p[col];
            let shadow: Vec<u64> = p.iter().map(|x| x * ann % m).collect();
            if nonzero(&shadow) {
                rest.push(shadow);
            }
            out.push((col, p));
        }
        pending = rest;
    }

    for i in 0..out.len() {
        let (ci, pivot_row) = out[i].clone();
        let pv = pivot_row[ci];
        for (_, row) in out.iter_mut().take(i) {
            let q = row[ci] / pv;
            if q != 0 {
                for (x, r) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (m - q) * r) % m;
                }
            }
        }
    }
    out
}

/// Rank of a list of vectors over the prime field F_p, by Gaussian elimination.
pub fn rank_mod_prime(vectors: &[Vec<u64>], p: u64) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| x % p).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = crate::modular::inverse(rows[rank][c], p).expect("prime modulus");
        rows[rank].iter_mut().for_each(|x| *x = *x * inv % p);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = row[c];
                for (x, r) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * r) % p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
