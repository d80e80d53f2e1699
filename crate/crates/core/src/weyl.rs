//! The first Weyl algebra `W = k<x, y>/(xy - yx - 1)` over a field of
//! characteristic p, in the PBW normal form `sum c_ij x^i y^j`, together with
//! its truncated quotients by `x^{p^a}, y^{p^a}` and the checks relating them
//! to matrix algebras.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{commutator, Echelon, MatrixF};
use crate::subalgebra::algebra_dim;

/// Element of W in normal form; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylElt {
    terms: BTreeMap<(u32, u32), Scalar>,
    field: Field,
}

impl fmt::Debug for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(&(i, j), c)| format!("{c}*x^{i}y^{j}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl WeylElt {
    pub fn zero(field: &Field) -> Self {
        WeylElt { terms: BTreeMap::new(), field: field.clone() }
    }

    pub fn one(field: &Field) -> Self {
        Self::monomial(field, 0, 0, Scalar::ONE)
    }

    pub fn x(field: &Field) -> Self {
        Self::monomial(field, 1, 0, Scalar::ONE)
    }

    pub fn y(field: &Field) -> Self {
        Self::monomial(field, 0, 1, Scalar::ONE)
    }

    pub fn scalar(field: &Field, c: Scalar) -> Self {
        Self::monomial(field, 0, 0, c)
    }

    /// `c x^i y^j`
    pub fn monomial(field: &Field, i: u32, j: u32, c: Scalar) -> Self {
        let mut e = Self::zero(field);
        e.accumulate((i, j), c);
        e
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Scalar {
        self.terms.get(&(i, j)).copied().unwrap_or(Scalar::ZERO)
    }

    fn accumulate(&mut self, key: (u32, u32), c: Scalar) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        let entry = self.terms.entry(key).or_insert(Scalar::ZERO);
        *entry = f.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &WeylElt) -> WeylElt {
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            out.accumulate(k, c);
        }
        out
    }

    pub fn sub(&self, other: &WeylElt) -> WeylElt {
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            out.accumulate(k, self.field.neg(c));
        }
        out
    }

    pub fn scale(&self, s: Scalar) -> WeylElt {
        let mut out = WeylElt::zero(&self.field);
        for (&k, &c) in &self.terms {
            out.accumulate(k, self.field.mul(s, c));
        }
        out
    }

    /// Right multiplication by `x`, using `y^j x = x y^j - j y^{j-1}`.
    fn times_x(&self) -> WeylElt {
        let f = &self.field;
        let mut out = WeylElt::zero(f);
        for (&(i, j), &c) in &self.terms {
            out.accumulate((i + 1, j), c);
            if j > 0 {
                out.accumulate((i, j - 1), f.neg(f.mul(f.from_int(j as i64), c)));
            }
        }
        out
    }

    fn times_y(&self) -> WeylElt {
        let terms = self.terms.iter().map(|(&(i, j), &c)| ((i, j + 1), c)).collect();
        WeylElt { terms, field: self.field.clone() }
    }

    /// Product in normal form: `u * (c x^i y^j)` is `u` right-multiplied by
    /// `x` i times, then by `y` j times.
    pub fn mul(&self, other: &WeylElt) -> WeylElt {
        let f = &self.field;
        let mut out = WeylElt::zero(f);
        // cache u * x^i across terms of `other`, which are sorted by i
        let mut ux = self.clone();
        let mut ux_power = 0;
        for (&(i, j), &c) in &other.terms {
            while ux_power < i {
                ux = ux.times_x();
                ux_power += 1;
            }
            let mut term = ux.clone();
            for _ in 0..j {
                term = term.times_y();
            }
            for (&k, &tc) in &term.terms {
                out.accumulate(k, f.mul(tc, c));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> WeylElt {
        let mut acc = WeylElt::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn commutator(&self, other: &WeylElt) -> WeylElt {
        self.mul(other).sub(&other.mul(self))
    }

    /// `[u, x] = 0` and `[u, y] = 0`; equivalent to centrality since x, y generate W.
    pub fn is_central_against_generators(&self) -> bool {
        self.commutator(&WeylElt::x(&self.field)).is_zero()
            && self.commutator(&WeylElt::y(&self.field)).is_zero()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i.max(j)).max().unwrap_or(0)
    }
}

/// `x -> A`, `y -> B` on `k[t]/(t^p)` with `A` raising `t^i -> t^{i+1}` and
/// `B = -lambda d/dt`, so that `[A, B] = lambda I` and `A^p = B^p = 0`.
pub fn standard_representation(field: &Field, lambda: Scalar) -> (MatrixF, MatrixF) {
    let p = field.characteristic() as usize;
    let a = MatrixF::jordan_block(field, p);
    let mut b = MatrixF::zeros(field, p, p);
    for i in 1..p {
        // B e_i = -lambda * i * e_{i-1} (zero-based: t^i -> -lambda i t^{i-1})
        b.set(i - 1, i, field.neg(field.mul(lambda, field.from_int(i as i64))));
    }
    (a, b)
}

/// Image of a Weyl element under `x -> a`, `y -> b`.
pub fn evaluate(u: &WeylElt, a: &MatrixF, b: &MatrixF) -> MatrixF {
    let f = u.field();
    let n = a.rows();
    let mut out = MatrixF::zeros(f, n, n);
    for (&(i, j), &c) in u.terms() {
        let m = &a.pow(i as u64) * &b.pow(j as u64);
        out = out.add_scaled(c, &m);
    }
    out
}

/// `W / (x^{p^a}, y^{p^a}) W`, with basis `x^i y^j`, `0 <= i, j < p^a`.
#[derive(Clone, Debug)]
pub struct TruncatedWeyl {
    field: Field,
    pub p: u32,
    pub level: u32,
    /// `p^a`
    pub side: u32,
    pub basis: Vec<(u32, u32)>,
    /// Structure constants: `table[s * dim + t]` lists `(index, coefficient)` of `b_s b_t`.
    table: Vec<Vec<(usize, Scalar)>>,
}

impl TruncatedWeyl {
    pub fn new(field: &Field, level: u32) -> Result<Self> {
        if !field.is_prime_field() {
            return Err(Error::Precondition("truncated quotients are built over prime fields".into()));
        }
        let p = field.characteristic();
        if level == 0 || level > 2 || (level == 2 && p > 3) {
            return Err(Error::Guard(format!("truncation level {level} at p = {p}; need a = 1, or a = 2 with p <= 3")));
        }
        let side = p.pow(level);
        let basis: Vec<(u32, u32)> = (0..side).flat_map(|i| (0..side).map(move |j| (i, j))).collect();
        let index = |(i, j): (u32, u32)| (i * side + j) as usize;
        let mut table = Vec::with_capacity(basis.len() * basis.len());
        for &(i1, j1) in &basis {
            let u = WeylElt::monomial(field, i1, j1, Scalar::ONE);
            for &(i2, j2) in &basis {
                let prod = u.mul(&WeylElt::monomial(field, i2, j2, Scalar::ONE));
                table.push(
                    prod.terms()
                        .iter()
                        .filter(|(&(i, j), _)| i < side && j < side)
                        .map(|(&k, &c)| (index(k), c))
                        .collect(),
                );
            }
        }
        Ok(TruncatedWeyl { field: field.clone(), p, level, side, basis, table })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn index_of(&self, i: u32, j: u32) -> Option<usize> {
        (i < self.side && j < self.side).then_some((i * self.side + j) as usize)
    }

    /// Coordinate vector of a Weyl element after truncation.
    pub fn project(&self, u: &WeylElt) -> Vec<Scalar> {
        let mut v = vec![Scalar::ZERO; self.dim()];
        for (&(i, j), &c) in u.terms() {
            if let Some(k) = self.index_of(i, j) {
                v[k] = c;
            }
        }
        v
    }

    pub fn basis_vector(&self, i: u32, j: u32) -> Vec<Scalar> {
        let mut v = vec![Scalar::ZERO; self.dim()];
        v[self.index_of(i, j).expect("monomial inside the truncation")] = Scalar::ONE;
        v
    }

    pub fn mul(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let d = self.dim();
        let mut out = vec![Scalar::ZERO; d];
        for (s, &cu) in u.iter().enumerate() {
            if cu.is_zero() {
                continue;
            }
            for (t, &cv) in v.iter().enumerate() {
                if cv.is_zero() {
                    continue;
                }
                let c = f.mul(cu, cv);
                for &(k, sc) in &self.table[s * d + t] {
                    out[k] = f.mul_add(out[k], c, sc);
                }
            }
        }
        out
    }

    pub fn commutator(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        self.mul(u, v).iter().zip(self.mul(v, u)).map(|(&a, b)| f.sub(a, b)).collect()
    }
}

/// Outcome of a single structural check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Table of checks with an overall verdict.
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub p: u32,
    pub level: u32,
    pub checks: Vec<Check>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `x^p` and `y^p` commute with both generators of W.
pub fn center_generator_checks(field: &Field) -> Vec<Check> {
    let p = field.characteristic();
    let x = WeylElt::x(field);
    let y = WeylElt::y(field);
    let xp = x.pow(p);
    let yp = y.pow(p);
    let mut checks = vec![
        Check::new("[x^p, y] = 0", xp.commutator(&y).is_zero(), format!("{:?}", xp.commutator(&y))),
        Check::new("[y^p, x] = 0", yp.commutator(&x).is_zero(), format!("{:?}", yp.commutator(&x))),
        Check::new("x^p central", xp.is_central_against_generators(), ""),
        Check::new("y^p central", yp.is_central_against_generators(), ""),
    ];
    let below = (1..p).all(|k| !x.pow(k).is_central_against_generators());
    checks.push(Check::new("x^k not central for 0 < k < p", below, ""));
    checks
}

/// Verifies the matrix-algebra structure of a truncated quotient.
///
/// Level 1: the standard p-dimensional representation satisfies the defining
/// relation, kills `x^p, y^p`, is a homomorphism on the quotient, and maps it
/// bijectively onto `M_p(k)`. Level 2: the images of the central monomials
/// `x^{pα} y^{pβ}` span a central subalgebra of dimension `p^{2(a-1)}` over
/// which the `p^2` monomials `x^i y^j` (`i, j < p`) form a free basis.
pub fn verify_matrix_structure(t: &TruncatedWeyl) -> Result<StructureReport> {
    let f = t.field().clone();
    let p = t.p;
    let d = t.dim();
    let mut checks = Vec::new();
    let expected_dim = (p as usize).pow(2 * t.level);
    checks.push(Check::new("dim T = p^(2a)", d == expected_dim, format!("dim {d}, expected {expected_dim}")));

    let x = t.basis_vector(1, 0);
    let y = t.basis_vector(0, 1);
    let one = t.basis_vector(0, 0);
    let rel = t.commutator(&x, &y);
    checks.push(Check::new("[x, y] = 1 in T", rel == one, ""));

    // associativity on seeded random triples of basis elements
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let assoc = (0..2000).all(|_| {
        let [ea, eb, ec] = [0; 3].map(|_| unit(d, rng.gen_range(0..d)));
        t.mul(&t.mul(&ea, &eb), &ec) == t.mul(&ea, &t.mul(&eb, &ec))
    });
    checks.push(Check::new("multiplication associative", assoc, ""));

    if t.level == 1 {
        let (ra, rb) = standard_representation(&f, Scalar::ONE);
        let pu = p as usize;
        checks.push(Check::new(
            "[rho(x), rho(y)] = I",
            commutator(&ra, &rb)?.is_identity(),
            "",
        ));
        checks.push(Check::new(
            "rho(x)^p = rho(y)^p = 0",
            ra.pow(p as u64).is_zero() && rb.pow(p as u64).is_zero(),
            "",
        ));
        let span = algebra_dim(&f, pu, &[ra.clone(), rb.clone()])?;
        checks.push(Check::new(
            "rho(T) spans M_p(k)",
            span == pu * pu,
            format!("span dimension {span}, expected {}", pu * pu),
        ));
        let images: Vec<MatrixF> = t
            .basis
            .iter()
            .map(|&(i, j)| &ra.pow(i as u64) * &rb.pow(j as u64))
            .collect();
        let mut ech = Echelon::new(&f, pu * pu);
        for m in &images {
            ech.insert(m.data());
        }
        checks.push(Check::new(
            "rho: T -> M_p(k) bijective",
            ech.dim() == d && d == pu * pu,
            format!("rank of images {}", ech.dim()),
        ));
        let mut hom = true;
        for s in 0..d {
            for u in 0..d {
                let prod = t.mul(&unit(d, s), &unit(d, u));
                let lhs = combine(&f, &images, &prod, pu);
                if lhs != &images[s] * &images[u] {
                    hom = false;
                }
            }
        }
        checks.push(Check::new("rho multiplicative on T", hom, ""));
        let mut ech = Echelon::new(&f, d);
        for i in 0..p {
            for j in 0..p {
                ech.insert(&t.basis_vector(i, j));
            }
        }
        checks.push(Check::new(
            "monomials x^i y^j (i, j < p) independent",
            ech.dim() == pu * pu,
            format!("rank {}", ech.dim()),
        ));
    } else {
        let reduced_side = t.side / p;
        let centre_dim = (reduced_side * reduced_side) as usize;
        let central: Vec<Vec<Scalar>> = (0..reduced_side)
            .flat_map(|a| (0..reduced_side).map(move |b| (a, b)))
            .map(|(a, b)| t.basis_vector(a * p, b * p))
            .collect();
        let all_central = central
            .iter()
            .all(|z| t.commutator(z, &x).iter().all(|c| c.is_zero()) && t.commutator(z, &y).iter().all(|c| c.is_zero()));
        checks.push(Check::new("x^p, y^p central in T", all_central, ""));
        let mut zech = Echelon::new(&f, d);
        for z in &central {
            zech.insert(z);
        }
        checks.push(Check::new(
            "dim image of centre = p^(2(a-1))",
            zech.dim() == centre_dim,
            format!("dimension {}, expected {centre_dim}", zech.dim()),
        ));
        checks.push(Check::new(
            "dim T = p^2 dim(Z/I)",
            d == (p * p) as usize * zech.dim(),
            format!("{d} vs {} * {}", p * p, zech.dim()),
        ));
        let mut free = Echelon::new(&f, d);
        for z in &central {
            for i in 0..p {
                for j in 0..p {
                    free.insert(&t.mul(z, &t.basis_vector(i, j)));
                }
            }
        }
        checks.push(Check::new(
            "p^2 monomials free over centre",
            free.dim() == d && central.len() * (p * p) as usize == d,
            format!("rank {} of {} products", free.dim(), central.len() * (p * p) as usize),
        ));
    }
    Ok(StructureReport { p, level: t.level, checks })
}

fn unit(d: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::ZERO; d];
    v[k] = Scalar::ONE;
    v
}

fn combine(f: &Field, images: &[MatrixF], coeffs: &[Scalar], n: usize) -> MatrixF {
    coeffs
        .iter()
        .zip(images)
        .fold(MatrixF::zeros(f, n, n), |acc, (&c, m)| acc.add_scaled(c, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    fn binom_mod(n: u32, k: u32, p: u32) -> u32 {
        // Lucas
        let (mut n, mut k) = (n, k);
        let mut acc = 1u64;
        while n > 0 || k > 0 {
            let (a, b) = (n % p, k % p);
            if b > a {
                return 0;
            }
            let mut c = 1u64;
            for t in 0..b {
                c = c * (a - t) as u64 / (t + 1) as u64;
            }
            acc = acc * (c % p as u64) % p as u64;
            n /= p;
            k /= p;
        }
        acc as u32
    }

    /// Closed form `y^b x^c = sum_k (-1)^k k! C(b,k) C(c,k) x^{c-k} y^{b-k}`,
    /// with `k! C(b,k) = b (b-1) ... (b-k+1)`.
    fn closed_form_product(f: &Field, (a1, b1): (u32, u32), (c1, d1): (u32, u32)) -> WeylElt {
        let p = f.characteristic();
        let mut out = WeylElt::zero(f);
        for k in 0..=b1.min(c1) {
            let mut falling = 1u64;
            for t in 0..k {
                falling = falling * ((b1 - t) % p) as u64 % p as u64;
            }
            let c = falling * binom_mod(c1, k, p) as u64 % p as u64;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let coeff = f.from_int(sign * c as i64);
            out = out.add(&WeylElt::monomial(f, a1 + c1 - k, b1 - k + d1, coeff));
        }
        out
    }

    #[test]
    fn defining_relation() {
        let f5 = FieldCtx::prime(5).unwrap();
        let (x, y) = (WeylElt::x(&f5), WeylElt::y(&f5));
        // y x = x y - 1
        let expected = WeylElt::monomial(&f5, 1, 1, Scalar::ONE).sub(&WeylElt::one(&f5));
        assert_eq!(y.mul(&x), expected);
        assert_eq!(x.commutator(&y), WeylElt::scalar(&f5, f5.from_int(1)));
        assert_eq!(y.commutator(&x), WeylElt::scalar(&f5, f5.from_int(-1)));
        // y^2 x = x y^2 - 2 y
        let y2x = y.pow(2).mul(&x);
        let expected = WeylElt::monomial(&f5, 1, 2, Scalar::ONE)
            .sub(&WeylElt::monomial(&f5, 0, 1, f5.from_int(2)));
        assert_eq!(y2x, expected);
        let f2 = FieldCtx::prime(2).unwrap();
        let y = WeylElt::y(&f2);
        assert_eq!(y.pow(2).mul(&WeylElt::x(&f2)), WeylElt::monomial(&f2, 1, 2, Scalar::ONE));
        let u = WeylElt::monomial(&f5, 3, 2, Scalar(4));
        assert_eq!(WeylElt::one(&f5).mul(&u), u);
        assert_eq!(u.mul(&WeylElt::one(&f5)), u);
    }

    #[test]
    fn matches_closed_form() {
        for p in [2, 3, 5, 7] {
            let f = FieldCtx::prime(p).unwrap();
            for a in 0..5 {
                for b in 0..5 {
                    for c in 0..5 {
                        for d in 0..3 {
                            let lhs = WeylElt::monomial(&f, a, b, Scalar::ONE)
                                .mul(&WeylElt::monomial(&f, c, d, Scalar::ONE));
                            assert_eq!(lhs, closed_form_product(&f, (a, b), (c, d)), "p={p} {a} {b} {c} {d}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn centrality() {
        for p in [2, 3, 5] {
            let f = FieldCtx::prime(p).unwrap();
            let (x, y) = (WeylElt::x(&f), WeylElt::y(&f));
            assert!(x.pow(p).is_central_against_generators());
            assert!(y.pow(p).is_central_against_generators());
            for u in [x.clone(), y.clone(), x.mul(&y), x.pow(2).mul(&y)] {
                assert!(x.pow(p).commutator(&u).is_zero());
                assert!(y.pow(p).commutator(&u).is_zero());
            }
            assert!(center_generator_checks(&f).iter().all(|c| c.passed));
        }
        let f2 = FieldCtx::prime(2).unwrap();
        assert!(!WeylElt::x(&f2).is_central_against_generators());
    }

    #[test]
    fn associativity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..500 {
            let p = [2, 3, 5][trial % 3];
            let f = FieldCtx::prime(p).unwrap();
            let random_elt = |rng: &mut ChaCha8Rng| {
                let mut e = WeylElt::zero(&f);
                for _ in 0..rng.gen_range(1..4) {
                    let (i, j) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
                    e = e.add(&WeylElt::monomial(&f, i, j, Scalar(rng.gen_range(0..p))));
                }
                e
            };
            let (u, v, w) = (random_elt(&mut rng), random_elt(&mut rng), random_elt(&mut rng));
            assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        }
    }

    #[test]
    fn truncated_dims() {
        let f2 = FieldCtx::prime(2).unwrap();
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(TruncatedWeyl::new(&f2, 1).unwrap().dim(), 4);
        assert_eq!(TruncatedWeyl::new(&f3, 1).unwrap().dim(), 9);
        assert_eq!(TruncatedWeyl::new(&f2, 2).unwrap().dim(), 16);
        let f5 = FieldCtx::prime(5).unwrap();
        assert!(matches!(TruncatedWeyl::new(&f5, 2), Err(Error::Guard(_))));
        assert!(matches!(TruncatedWeyl::new(&f2, 3), Err(Error::Guard(_))));
        let f4 = FieldCtx::of_order(4).unwrap();
        assert!(TruncatedWeyl::new(&f4, 1).is_err());
        // x^{p^a} vanishes in the quotient
        let t = TruncatedWeyl::new(&f2, 1).unwrap();
        let x = t.basis_vector(1, 0);
        assert!(t.mul(&x, &x).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn structure_reports_pass() {
        for (p, a) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)] {
            let f = FieldCtx::prime(p).unwrap();
            let t = TruncatedWeyl::new(&f, a).unwrap();
            let report = verify_matrix_structure(&t).unwrap();
            assert!(report.passed(), "p={p} a={a}: {:?}", report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn standard_representation_relation() {
        for p in [2, 3, 5, 7] {
            let f = FieldCtx::prime(p).unwrap();
            let (a, b) = standard_representation(&f, Scalar::ONE);
            assert!(commutator(&a, &b).unwrap().is_identity());
            assert!(a.pow(p as u64).is_zero() && b.pow(p as u64).is_zero());
            // evaluation respects products
            let u = WeylElt::monomial(&f, 1, 2, Scalar::ONE);
            let v = WeylElt::monomial(&f, 2, 1, Scalar::ONE);
            assert_eq!(evaluate(&u.mul(&v), &a, &b), &evaluate(&u, &a, &b) * &evaluate(&v, &a, &b));
        }
    }
}
