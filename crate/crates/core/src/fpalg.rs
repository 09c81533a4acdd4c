//! Exact arithmetic over `F_p` and the linear algebra of the defining space.
//!
//! Everything here works with a runtime odd-prime modulus `p < 2^15`, so all
//! products fit comfortably in 64 bits. Vectors of length `p - 1` carry the
//! index-permutation action of `F_p^×`: the unit `u` sends a vector `v` to
//! the vector `w` with `w_i = v_{u·i mod p}` (1-indexed).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Upper bound on supported moduli; keeps every product inside a `u64`.
pub const MAX_MODULUS: u64 = 1 << 15;

/// Returns true if `p` is an odd prime.
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Validates a modulus for use in this crate.
pub fn check_modulus(p: u64) -> Result<()> {
    if !is_odd_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if p >= MAX_MODULUS {
        return Err(Error::ModulusTooLarge(p));
    }
    Ok(())
}

/// A residue in `[0, p)` for an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u64,
    p: u64,
}

impl FpScalar {
    pub fn new(value: i64, p: u64) -> Self {
        debug_assert!(is_odd_prime(p) && p < MAX_MODULUS);
        Self {
            value: value.rem_euclid(p as i64) as u64,
            p,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        inv_mod(self.value, self.p).map(|v| Self {
            value: v,
            p: self.p,
        })
    }
}

impl std::ops::Add for FpScalar {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Self {
            value: (self.value + other.value) % self.p,
            p: self.p,
        }
    }
}

impl std::ops::Sub for FpScalar {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Self {
            value: (self.value + self.p - other.value) % self.p,
            p: self.p,
        }
    }
}

impl std::ops::Mul for FpScalar {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Self {
            value: mul_mod(self.value, other.value, self.p),
            p: self.p,
        }
    }
}

impl std::ops::Neg for FpScalar {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            value: neg_mod(self.value, self.p),
            p: self.p,
        }
    }
}

impl std::fmt::Display for FpScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `(a·b) mod p`.
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `(a+b) mod p`.
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

/// `(-a) mod p`.
pub fn neg_mod(a: u64, p: u64) -> u64 {
    if a.is_multiple_of(p) {
        0
    } else {
        p - a % p
    }
}

/// Inverse mod the prime `p`; `None` for multiples of p.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    // Fermat; p is prime and small.
    Some(pow_mod(a % p, p - 2, p))
}

/// `a^e mod p` by binary exponentiation.
pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// A unit of `F_p`, i.e. a nonzero residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Unit {
    value: u64,
    p: u64,
}

impl Unit {
    pub fn new(value: i64, p: u64) -> Result<Self> {
        let v = value.rem_euclid(p as i64) as u64;
        if v == 0 {
            return Err(Error::ZeroUnit);
        }
        Ok(Self { value: v, p })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn inv(self) -> Self {
        Self {
            value: inv_mod(self.value, self.p).expect("unit is invertible"),
            p: self.p,
        }
    }
}

impl std::ops::Mul for Unit {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Self {
            value: mul_mod(self.value, other.value, self.p),
            p: self.p,
        }
    }
}

/// A vector with entries in `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpVec {
    p: u64,
    entries: Vec<u64>,
}

impl FpVec {
    pub fn new(p: u64, entries: impl IntoIterator<Item = i64>) -> Self {
        Self {
            p,
            entries: entries
                .into_iter()
                .map(|e| e.rem_euclid(p as i64) as u64)
                .collect(),
        }
    }

    pub fn from_raw(p: u64, entries: Vec<u64>) -> Self {
        Self {
            p,
            entries: entries.into_iter().map(|e| e % p).collect(),
        }
    }

    pub fn zero(p: u64, len: usize) -> Self {
        Self {
            p,
            entries: vec![0; len],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn get(&self, i: usize) -> u64 {
        self.entries[i]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        debug_assert_eq!(self.len(), other.len());
        Self {
            p: self.p,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| add_mod(a, b, self.p))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            p: self.p,
            entries: self.entries.iter().map(|&a| neg_mod(a, self.p)).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        Self {
            p: self.p,
            entries: self
                .entries
                .iter()
                .map(|&a| mul_mod(a, c, self.p))
                .collect(),
        }
    }

    /// Dot product of two vectors of equal length.
    pub fn dot(&self, other: &Self) -> Result<u64> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0, |acc, (&a, &b)| {
                add_mod(acc, mul_mod(a, b, self.p), self.p)
            }))
    }
}

/// Applies the index permutation induced by the unit `u` to a vector of
/// length `p - 1`: the result `w` satisfies `w_i = v_{u·i mod p}` with
/// 1-based indices.
pub fn perm_apply(v: &FpVec, u: Unit) -> Result<FpVec> {
    let p = v.modulus();
    if u.modulus() != p {
        return Err(Error::ModulusMismatch(p, u.modulus()));
    }
    if v.len() != (p - 1) as usize {
        return Err(Error::Dimension {
            expected: (p - 1) as usize,
            got: v.len(),
        });
    }
    let mut out = vec![0; v.len()];
    for i in 1..p {
        let src = mul_mod(u.value(), i, p);
        // u and i are units, so u*i mod p is never 0.
        out[(i - 1) as usize] = v.get((src - 1) as usize);
    }
    Ok(FpVec::from_raw(p, out))
}

/// A matrix over `F_p`, stored as rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpMat {
    p: u64,
    rows: Vec<FpVec>,
}

impl FpMat {
    pub fn new(p: u64, rows: Vec<FpVec>) -> Result<Self> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        for r in &rows {
            if r.modulus() != p {
                return Err(Error::ModulusMismatch(p, r.modulus()));
            }
            if r.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Ok(Self { p, rows })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.rows.first().map(|r| r.len()).unwrap_or(0)
    }

    pub fn row(&self, i: usize) -> &FpVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[FpVec] {
        &self.rows
    }

    /// Canonical reduced row-echelon form; zero rows are dropped.
    pub fn rref(&self) -> FpMat {
        let p = self.p;
        let mut m: Vec<Vec<u64>> = self.rows.iter().map(|r| r.entries().to_vec()).collect();
        let (nr, nc) = (m.len(), self.num_cols());
        let mut pivot_row = 0;
        for col in 0..nc {
            let Some(src) = (pivot_row..nr).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(pivot_row, src);
            let inv = inv_mod(m[pivot_row][col], p).expect("pivot is nonzero");
            for entry in m[pivot_row].iter_mut() {
                *entry = mul_mod(*entry, inv, p);
            }
            for r in 0..nr {
                if r != pivot_row && m[r][col] != 0 {
                    let f = m[r][col];
                    let pivot = m[pivot_row].clone();
                    for (entry, &pe) in m[r].iter_mut().zip(&pivot) {
                        let sub = mul_mod(f, pe, p);
                        *entry = (*entry + p - sub) % p;
                    }
                }
            }
            pivot_row += 1;
            if pivot_row == nr {
                break;
            }
        }
        m.truncate(pivot_row);
        FpMat {
            p,
            rows: m.into_iter().map(|r| FpVec::from_raw(p, r)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().num_rows()
    }

    /// True if `v` lies in the row space of the matrix.
    pub fn contains_in_row_space(&self, v: &FpVec) -> Result<bool> {
        if v.len() != self.num_cols() {
            return Err(Error::Dimension {
                expected: self.num_cols(),
                got: v.len(),
            });
        }
        let r = self.rref();
        let mut w = v.clone();
        for row in r.rows() {
            let pivot_col = row
                .entries()
                .iter()
                .position(|&e| e != 0)
                .expect("rref rows are nonzero");
            let c = w.get(pivot_col);
            if c != 0 {
                w = w.add(&row.scale(neg_mod(c, self.p)));
            }
        }
        Ok(w.is_zero())
    }

    /// Applies [`perm_apply`] to every row.
    pub fn perm_apply_rows(&self, u: Unit) -> Result<FpMat> {
        let rows = self
            .rows
            .iter()
            .map(|r| perm_apply(r, u))
            .collect::<Result<Vec<_>>>()?;
        FpMat::new(self.p, rows)
    }
}

/// True iff the two matrices have equal row spaces.
pub fn row_space_equal(a: &FpMat, b: &FpMat) -> Result<bool> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch(a.modulus(), b.modulus()));
    }
    if a.num_cols() != b.num_cols() {
        return Err(Error::Dimension {
            expected: a.num_cols(),
            got: b.num_cols(),
        });
    }
    Ok(a.rref() == b.rref())
}

/// If the permutation action of `u` multiplies every row of `e` by one common
/// scalar, returns that scalar.
pub fn scalar_action(e: &FpMat, u: Unit) -> Result<Option<FpScalar>> {
    let p = e.modulus();
    let mut lambda: Option<u64> = None;
    for row in e.rows() {
        let image = perm_apply(row, u)?;
        // Determine the candidate scalar from the first nonzero entry.
        let Some(i) = row.entries().iter().position(|&x| x != 0) else {
            continue;
        };
        let cand = mul_mod(image.get(i), inv_mod(row.get(i), p).expect("nonzero"), p);
        if image != row.scale(cand) {
            return Ok(None);
        }
        match lambda {
            None => lambda = Some(cand),
            Some(l) if l != cand => return Ok(None),
            _ => {}
        }
    }
    Ok(lambda.map(|l| FpScalar::new(l as i64, p)))
}

/// Closure of a set of units under multiplication mod p; always contains 1.
/// The result is sorted.
pub fn unit_subgroup_generated(p: u64, gens: &[u64]) -> Vec<u64> {
    let mut set = std::collections::BTreeSet::new();
    set.insert(1u64);
    let mut frontier = vec![1u64];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            debug_assert!(g % p != 0, "generators must be units");
            let y = mul_mod(x, g % p, p);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}
