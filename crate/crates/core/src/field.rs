//! Finite fields GF(p^m) with elements stored as packed base-p digit codes.
//!
//! An element `a_0 + a_1 g + ... + a_{m-1} g^{m-1}` (with `g` a root of the
//! modulus) is stored as the integer `a_0 + a_1 p + ... + a_{m-1} p^{m-1}`.
//! Code 0 is zero and code 1 is one, so enumeration order starts `0, 1`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 8;
const TABLE_LIMIT: u32 = 256;

/// Shared handle to a field context.
pub type Field = Arc<FieldCtx>;

/// An element of a finite field, meaningful only together with its [`FieldCtx`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Scalar(pub u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Exact arithmetic context for GF(p^m).
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, constant term first, length `m + 1`.
    modulus: Vec<u32>,
    add_table: Vec<u16>,
    mul_table: Vec<u16>,
    neg_table: Vec<u32>,
    inv_table: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// Builds GF(p^m) using the smallest monic irreducible modulus, where
    /// candidates are ordered by the code of their lower coefficients.
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::UnsupportedField(format!("extension degree {m} outside 1..={MAX_DEGREE}")));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::UnsupportedField(format!("order {p}^{m} exceeds {MAX_ORDER}"))
        })? as u32;
        let modulus = (0..q)
            .map(|code| {
                let mut poly = digits(code, p, m as usize);
                poly.push(1);
                poly
            })
            .find(|poly| is_irreducible(poly, p))
            .ok_or_else(|| Error::Internal(format!("no irreducible of degree {m} over F_{p}")))?;
        Ok(Arc::new(Self::with_modulus(p, m, q, modulus)))
    }

    /// Prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1)
    }

    /// GF(q) for a prime power q.
    pub fn of_order(q: u32) -> Result<Field> {
        let (p, m) = prime_power(q)
            .ok_or_else(|| Error::UnsupportedField(format!("{q} is not a prime power")))?;
        Self::new(p, m)
    }

    /// Builds a context for an explicit monic modulus (constant term first).
    pub fn with_explicit_modulus(p: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let m = modulus.len().saturating_sub(1) as u32;
        if m == 0 || m > MAX_DEGREE || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(Error::UnsupportedField(format!("bad modulus {modulus:?} over F_{p}")));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::UnsupportedField(format!("order {p}^{m} exceeds {MAX_ORDER}"))
        })? as u32;
        if !is_irreducible(&modulus, p) {
            return Err(Error::UnsupportedField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        Ok(Arc::new(Self::with_modulus(p, m, q, modulus)))
    }

    fn with_modulus(p: u32, m: u32, q: u32, modulus: Vec<u32>) -> Self {
        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            add_table: Vec::new(),
            mul_table: Vec::new(),
            neg_table: Vec::new(),
            inv_table: Vec::new(),
        };
        ctx.neg_table = (0..q).map(|a| ctx.slow_neg(a)).collect();
        if q <= TABLE_LIMIT {
            let mut add = Vec::with_capacity((q * q) as usize);
            let mut mul = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(ctx.slow_add(a, b) as u16);
                    mul.push(ctx.slow_mul(a, b) as u16);
                }
            }
            ctx.add_table = add;
            ctx.mul_table = mul;
        }
        // a^(q-2) is the inverse for a != 0
        let mut inv = vec![0u32; q as usize];
        for a in 1..q {
            if inv[a as usize] != 0 {
                continue;
            }
            let b = ctx.pow(Scalar(a), (q - 2) as u64).0;
            inv[a as usize] = b;
            inv[b as usize] = a;
        }
        ctx.inv_table = inv;
        ctx
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    /// Base-p digits of `a`, constant term first, length m.
    pub fn coeffs(&self, a: Scalar) -> Vec<u32> {
        digits(a.0, self.p, self.m as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Scalar> {
        if coeffs.len() > self.m as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Precondition(format!(
                "coefficient vector {coeffs:?} is not an element of GF({}^{})",
                self.p, self.m
            )));
        }
        Ok(Scalar(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)))
    }

    /// Image of an integer under Z -> F_p -> GF(q).
    #[inline]
    pub fn from_int(&self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn contains(&self, a: Scalar) -> bool {
        a.0 < self.q
    }

    /// All q elements in code order: 0, 1, ...
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        (0..self.q).map(Scalar)
    }

    /// The nonzero elements in code order.
    pub fn units(&self) -> impl Iterator<Item = Scalar> + '_ {
        (1..self.q).map(Scalar)
    }

    /// Root of the modulus (the generator `g` of the polynomial basis).
    pub fn generator(&self) -> Scalar {
        if self.m == 1 {
            // x - c has root c
            Scalar((self.p - self.modulus[0]) % self.p)
        } else {
            Scalar(self.p)
        }
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        if !self.add_table.is_empty() {
            Scalar(self.add_table[(a.0 * self.q + b.0) as usize] as u32)
        } else {
            Scalar(self.slow_add(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.neg_table[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if !self.mul_table.is_empty() {
            Scalar(self.mul_table[(a.0 * self.q + b.0) as usize] as u32)
        } else {
            Scalar(self.slow_mul(a.0, b.0))
        }
    }

    /// `acc + a * b`
    #[inline]
    pub fn mul_add(&self, acc: Scalar, a: Scalar, b: Scalar) -> Scalar {
        self.add(acc, self.mul(a, b))
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Scalar(self.inv_table[a.0 as usize]))
        }
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Scalar, mut e: u64) -> Scalar {
        let mut base = a;
        let mut acc = Scalar::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// a -> a^p
    pub fn frobenius(&self, a: Scalar) -> Scalar {
        self.pow(a, self.p as u64)
    }

    /// Embeds an element of a subfield given by code. Valid for prime-subfield
    /// elements, whose code is the same in every extension.
    pub fn embed_prime(&self, a: Scalar, from: &FieldCtx) -> Result<Scalar> {
        if from.p != self.p || a.0 >= self.p {
            return Err(Error::FieldMismatch);
        }
        Ok(a)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn slow_neg(&self, a: u32) -> u32 {
        let p = self.p;
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.m == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let m = self.m as usize;
        let da = digits(a, self.p, m);
        let db = digits(b, self.p, m);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce by the monic modulus from the top
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &mc) in self.modulus[..m].iter().enumerate() {
                let idx = k - m + i;
                prod[idx] = (prod[idx] + (p - c) * mc as u64) % p;
            }
        }
        prod[..m].iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
    }
}

/// Returns (p, m) with q = p^m, if q is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn digits(mut code: u32, p: u32, m: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(code % p);
        code /= p;
    }
    out
}

/// Remainder of `a` modulo monic `b` over F_p; coefficient lists constant term first.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    let p = p as u64;
    while r.len() > db {
        let lead = r.pop().unwrap_or(0);
        if lead == 0 {
            continue;
        }
        let shift = r.len() - db;
        for (i, &bc) in b[..db].iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - lead) * bc as u64 % p) % p;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor = digits(code as u32, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_fields() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(f2.order(), 2);
        assert_eq!(f2.add(Scalar::ONE, Scalar::ONE), Scalar::ZERO);
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.inv(Scalar(2)).unwrap(), Scalar(2));
        assert_eq!(f3.elements().collect::<Vec<_>>(), vec![Scalar(0), Scalar(1), Scalar(2)]);
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![Scalar(0), Scalar(1)]);
    }

    #[test]
    fn gf4_modulus_and_generator() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let g = f4.generator();
        // g^2 = g + 1
        assert_eq!(f4.mul(g, g), f4.add(g, Scalar::ONE));
        assert_eq!(f4.coeffs(f4.mul(g, g)), vec![1, 1]);
    }

    #[test]
    fn gf8_and_gf9_moduli() {
        assert_eq!(FieldCtx::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        // x^2 + 1 is irreducible over F_3 and has the smallest code
        assert_eq!(FieldCtx::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FieldCtx::new(2, 9), Err(Error::UnsupportedField(_))));
        assert!(matches!(FieldCtx::new(257, 3), Err(Error::UnsupportedField(_))));
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f5.inv(Scalar::ZERO), Err(Error::DivisionByZero));
        assert!(FieldCtx::with_explicit_modulus(2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn large_untabled_field() {
        let f = FieldCtx::new(3, 6).unwrap();
        assert_eq!(f.order(), 729);
        for a in f.units().step_by(37) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE);
            assert_eq!(f.pow(a, (f.order() - 1) as u64), Scalar::ONE);
        }
    }

    #[test]
    fn enumeration_distinct() {
        for (p, m) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (2, 4)] {
            let f = FieldCtx::new(p, m).unwrap();
            let all: std::collections::BTreeSet<_> = f.elements().collect();
            assert_eq!(all.len() as u32, p.pow(m));
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    fn fields() -> Vec<Field> {
        [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (2, 4), (3, 6)]
            .iter()
            .map(|&(p, m)| FieldCtx::new(p, m).unwrap())
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn field_axioms(idx in 0usize..8, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let fields = fields();
            let f = &fields[idx];
            let (a, b, c) = (Scalar(a % f.order()), Scalar(b % f.order()), Scalar(c % f.order()));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE);
                prop_assert_eq!(f.pow(a, (f.order() - 1) as u64), Scalar::ONE);
            }
            prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
            let mut x = a;
            for _ in 0..f.degree() {
                x = f.frobenius(x);
            }
            prop_assert_eq!(x, a);
        }
    }
}
