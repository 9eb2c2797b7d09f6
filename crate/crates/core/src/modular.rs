//! Scalar arithmetic in Z/m on `u64` residues.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended Euclid on non-negative integers: returns `(g, s, t)` with `s*a + t*b = g`.
pub fn ext_gcd(a: u64, b: u64) -> (u64, i128, i128) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 as u64, s0, t0)
}

pub fn reduce(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

pub fn inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = ext_gcd(a % m, m);
    (g == 1).then(|| reduce(s, m))
}

/// A unit `u` of Z/m with `u * a ≡ gcd(a, m) (mod m)`.
///
/// Every residue is associate to its gcd with the modulus; this picks the
/// normalizing unit explicitly.
pub fn normalizing_unit(a: u64, m: u64) -> u64 {
    let a = a % m;
    if a == 0 {
        return 1;
    }
    let g = gcd(a, m);
    let m_g = m / g;
    let base = inverse((a / g) % m_g, m_g).unwrap_or(0);
    let mut u = base;
    while gcd(u, m) != 1 {
        u += m_g;
    }
    u % m
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
