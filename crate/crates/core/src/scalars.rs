//! Exact scalars: the rationals and finite fields GF(p^k).
//!
//! A [`Field`] is a cheap, validated handle. Elements of a finite field are
//! packed as base-`p` digit strings (`c0 + c1*p + ...`), which also fixes the
//! enumeration order used by the exhaustive oracles.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is infinite and cannot be enumerated")]
    InfiniteField(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("frob^{exponent} is not an automorphism of {field}")]
    InvalidAutomorphism { field: String, exponent: usize },
}

/// Description of a coefficient field, as supplied by callers.
///
/// `modulus` lists coefficients from the constant term upwards and must be
/// monic of degree `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldDesc {
    Rationals,
    FinitePrime(u64),
    FiniteExt { p: u64, k: usize, modulus: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Scalar {
    Rat(BigRational),
    Fin(u64),
}

#[derive(Debug)]
struct FiniteData {
    p: u64,
    k: usize,
    q: u64,
    /// Monic, low to high, length k + 1.
    modulus: Vec<u64>,
}

#[derive(Debug)]
enum Inner {
    Rationals,
    Finite(FiniteData),
}

/// A validated field handle. Clones share the same description.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

/// Largest supported field order; keeps every intermediate product in `u128`.
const MAX_ORDER: u64 = 1 << 32;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over GF(p), low to high, without trailing zeros.
fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo `b` over GF(p); `b` must be nonzero.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = poly_trim(a.to_vec());
    let b = poly_trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = ((*r.last().unwrap() as u128 * lead_inv as u128) % p as u128) as u64;
        for (i, &bi) in b.iter().enumerate() {
            let sub = ((c as u128 * bi as u128) % p as u128) as u64;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = poly_trim(r);
    }
    r
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut v = low;
            for _ in 0..d {
                cand.push(v % p);
                v /= p;
            }
            cand.push(1);
            if poly_rem(modulus, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(Inner::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field, ScalarError> {
        Field::new(FieldDesc::FinitePrime(p))
    }

    /// GF(p^k) with the given monic irreducible modulus (low to high).
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Field, ScalarError> {
        let k = modulus.len().saturating_sub(1);
        Field::new(FieldDesc::FiniteExt { p, k, modulus })
    }

    /// GF(q) for a prime power `q`, using the first monic irreducible modulus
    /// in packed order. For q = 4 and q = 9 this is w^2+w+1 and w^2+1.
    pub fn gf(q: u64) -> Result<Field, ScalarError> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| ScalarError::InvalidField(format!("{q} is not a prime power")))?;
        if k == 1 {
            return Field::prime(p);
        }
        for low in 0..p.pow(k as u32) {
            let mut m = Vec::with_capacity(k + 1);
            let mut v = low;
            for _ in 0..k {
                m.push(v % p);
                v /= p;
            }
            m.push(1);
            if is_irreducible(&m, p) {
                return Field::extension(p, m);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn new(desc: FieldDesc) -> Result<Field, ScalarError> {
        let (p, modulus) = match desc {
            FieldDesc::Rationals => return Ok(Field::rationals()),
            FieldDesc::FinitePrime(p) => (p, vec![0, 1]),
            FieldDesc::FiniteExt { p, k, modulus } => {
                if modulus.len() != k + 1 || k == 0 {
                    return Err(ScalarError::InvalidField(format!(
                        "modulus must have degree k = {k} >= 1"
                    )));
                }
                (p, modulus)
            }
        };
        if !is_prime(p) {
            return Err(ScalarError::InvalidField(format!("{p} is not prime")));
        }
        let k = modulus.len() - 1;
        if modulus.iter().any(|&c| c >= p) {
            return Err(ScalarError::InvalidField(
                "modulus coefficients must be reduced mod p".into(),
            ));
        }
        if modulus[k] != 1 {
            return Err(ScalarError::InvalidField("modulus must be monic".into()));
        }
        let q = (p as u128).checked_pow(k as u32).filter(|&q| q <= MAX_ORDER as u128);
        let q = q.ok_or_else(|| ScalarError::InvalidField("field order exceeds 2^32".into()))? as u64;
        // GF(p) is the same field whatever degree-1 modulus was given.
        let modulus = if k == 1 { vec![0, 1] } else { modulus };
        if k > 1 && !is_irreducible(&modulus, p) {
            return Err(ScalarError::InvalidField(format!(
                "modulus {} is reducible over GF({p})",
                format_wpoly(&modulus, p)
            )));
        }
        Ok(Field(Arc::new(Inner::Finite(FiniteData { p, k, q, modulus }))))
    }

    pub fn desc(&self) -> FieldDesc {
        match &*self.0 {
            Inner::Rationals => FieldDesc::Rationals,
            Inner::Finite(f) if f.k == 1 => FieldDesc::FinitePrime(f.p),
            Inner::Finite(f) => FieldDesc::FiniteExt { p: f.p, k: f.k, modulus: f.modulus.clone() },
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(&*self.0, Inner::Finite(_))
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Inner::Rationals => 0,
            Inner::Finite(f) => f.p,
        }
    }

    /// Degree over the prime field (1 for the rationals).
    pub fn degree(&self) -> usize {
        match &*self.0 {
            Inner::Rationals => 1,
            Inner::Finite(f) => f.k,
        }
    }

    pub fn order(&self) -> Option<u64> {
        match &*self.0 {
            Inner::Rationals => None,
            Inner::Finite(f) => Some(f.q),
        }
    }

    /// Modulus coefficients (low to high) for proper extensions.
    pub fn modulus(&self) -> Option<&[u64]> {
        match &*self.0 {
            Inner::Finite(f) if f.k > 1 => Some(&f.modulus),
            _ => None,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(self.zero_s())
    }

    pub fn one(&self) -> FieldElem {
        self.elem(self.one_s())
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        self.elem(self.int_s(&BigInt::from(n)))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        self.elem(self.int_s(n))
    }

    /// The residue class of `w` in GF(p^k), k > 1.
    pub fn generator(&self) -> Option<FieldElem> {
        match &*self.0 {
            Inner::Finite(f) if f.k > 1 => Some(self.elem(Scalar::Fin(f.p))),
            _ => None,
        }
    }

    /// Element from coefficients of `w` (low to high), reduced mod p and the modulus.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FieldElem {
        let mut acc = self.zero_s();
        let mut pw = self.one_s();
        let g = self.generator().map(|g| g.value);
        for &c in coeffs {
            let term = self.mul_s(&self.int_s(&BigInt::from(c)), &pw);
            acc = self.add_s(&acc, &term);
            if let Some(g) = &g {
                pw = self.mul_s(&pw, g);
            }
        }
        self.elem(acc)
    }

    /// All elements in packed order: `[0, 1, ..., p-1, w, w+1, ...]`.
    pub fn elements(&self) -> Result<Vec<FieldElem>, ScalarError> {
        match &*self.0 {
            Inner::Rationals => Err(ScalarError::InfiniteField(self.to_string())),
            Inner::Finite(f) => Ok((0..f.q).map(|i| self.elem(Scalar::Fin(i))).collect()),
        }
    }

    pub(crate) fn elem(&self, value: Scalar) -> FieldElem {
        FieldElem { field: self.clone(), value }
    }

    fn check(&self, other: &Field) -> Result<(), ScalarError> {
        if self == other {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(self.to_string(), other.to_string()))
        }
    }

    fn finite(&self) -> Option<&FiniteData> {
        match &*self.0 {
            Inner::Finite(f) => Some(f),
            Inner::Rationals => None,
        }
    }

    // Raw scalar arithmetic. Callers guarantee that the scalars belong to self.

    pub(crate) fn zero_s(&self) -> Scalar {
        match &*self.0 {
            Inner::Rationals => Scalar::Rat(BigRational::zero()),
            Inner::Finite(_) => Scalar::Fin(0),
        }
    }

    pub(crate) fn one_s(&self) -> Scalar {
        match &*self.0 {
            Inner::Rationals => Scalar::Rat(BigRational::one()),
            Inner::Finite(_) => Scalar::Fin(1),
        }
    }

    pub(crate) fn int_s(&self, n: &BigInt) -> Scalar {
        match &*self.0 {
            Inner::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            Inner::Finite(f) => {
                let p = BigInt::from(f.p);
                let r = ((n % &p) + &p) % &p;
                Scalar::Fin(u64::try_from(r).expect("residue fits"))
            }
        }
    }

    pub(crate) fn is_zero_s(s: &Scalar) -> bool {
        match s {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fin(v) => *v == 0,
        }
    }

    pub(crate) fn is_one_s(s: &Scalar) -> bool {
        match s {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fin(v) => *v == 1,
        }
    }

    fn unpack(f: &FiniteData, mut v: u64) -> Vec<u64> {
        let mut d = Vec::with_capacity(f.k);
        for _ in 0..f.k {
            d.push(v % f.p);
            v /= f.p;
        }
        d
    }

    fn pack(f: &FiniteData, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * f.p + d)
    }

    pub(crate) fn add_s(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Fin(x), Scalar::Fin(y)) => {
                let f = self.finite().expect("finite scalar");
                if f.k == 1 {
                    Scalar::Fin((x + y) % f.p)
                } else if f.p == 2 {
                    Scalar::Fin(x ^ y)
                } else {
                    let (dx, dy) = (Self::unpack(f, *x), Self::unpack(f, *y));
                    let s: Vec<u64> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % f.p).collect();
                    Scalar::Fin(Self::pack(f, &s))
                }
            }
            _ => panic!("scalar kinds disagree"),
        }
    }

    pub(crate) fn neg_s(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Fin(x) => {
                let f = self.finite().expect("finite scalar");
                if f.p == 2 {
                    Scalar::Fin(*x)
                } else {
                    let d: Vec<u64> = Self::unpack(f, *x).iter().map(|&c| (f.p - c) % f.p).collect();
                    Scalar::Fin(Self::pack(f, &d))
                }
            }
        }
    }

    pub(crate) fn sub_s(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add_s(a, &self.neg_s(b))
    }

    pub(crate) fn mul_s(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Fin(x), Scalar::Fin(y)) => {
                let f = self.finite().expect("finite scalar");
                if f.k == 1 {
                    return Scalar::Fin(((*x as u128 * *y as u128) % f.p as u128) as u64);
                }
                if *x == 0 || *y == 0 {
                    return Scalar::Fin(0);
                }
                let (dx, dy) = (Self::unpack(f, *x), Self::unpack(f, *y));
                let mut prod = vec![0u64; 2 * f.k - 1];
                for (i, &a) in dx.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    for (j, &b) in dy.iter().enumerate() {
                        prod[i + j] = ((prod[i + j] as u128 + a as u128 * b as u128) % f.p as u128) as u64;
                    }
                }
                let mut r = poly_rem(&prod, &f.modulus, f.p);
                r.resize(f.k, 0);
                Scalar::Fin(Self::pack(f, &r))
            }
            _ => panic!("scalar kinds disagree"),
        }
    }

    pub(crate) fn pow_s(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one_s();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_s(&acc, &base);
            }
            base = self.mul_s(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv_s(&self, a: &Scalar) -> Option<Scalar> {
        if Self::is_zero_s(a) {
            return None;
        }
        Some(match a {
            Scalar::Rat(x) => Scalar::Rat(x.recip()),
            Scalar::Fin(_) => {
                let f = self.finite().expect("finite scalar");
                self.pow_s(a, f.q - 2)
            }
        })
    }

    /// x -> x^(p^e); identity on the rationals.
    pub(crate) fn frob_s(&self, a: &Scalar, e: usize) -> Scalar {
        match self.finite() {
            Some(f) if !e.is_multiple_of(f.k) => self.pow_s(a, f.p.pow((e % f.k) as u32)),
            _ => a.clone(),
        }
    }

    /// Number of `w`-terms in the canonical form of `a` (1 for rationals).
    pub(crate) fn term_count_s(&self, a: &Scalar) -> usize {
        match (a, self.finite()) {
            (Scalar::Fin(v), Some(f)) => Self::unpack(f, *v).iter().filter(|&&c| c != 0).count(),
            _ => 1,
        }
    }

    /// True when the canonical text of `a` starts with a minus sign.
    pub(crate) fn is_negative_s(a: &Scalar) -> bool {
        matches!(a, Scalar::Rat(r) if r.is_negative())
    }

    pub(crate) fn format_s(&self, a: &Scalar) -> String {
        match (a, self.finite()) {
            (Scalar::Rat(r), _) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (Scalar::Fin(v), Some(f)) => {
                if f.k == 1 {
                    v.to_string()
                } else {
                    format_wpoly(&Self::unpack(f, *v), f.p)
                }
            }
            (Scalar::Fin(_), None) => unreachable!(),
        }
    }
}

/// Descending, compact: `2*w^2+w+1`.
fn format_wpoly(coeffs: &[u64], _p: u64) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "w".to_string(),
            _ => format!("w^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (Inner::Rationals, Inner::Rationals) => true,
            (Inner::Finite(a), Inner::Finite(b)) => a.p == b.p && a.modulus == b.modulus,
            _ => false,
        }
    }
}

impl Eq for Field {}

impl fmt::Display for Field {
    /// Same syntax as the `field` header line of map files.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Inner::Rationals => write!(f, "Q"),
            Inner::Finite(d) if d.k == 1 => write!(f, "gf {}", d.p),
            Inner::Finite(d) => write!(f, "gf {} modulus {}", d.p, format_wpoly(&d.modulus, d.p)),
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

/// An element of a [`Field`], always in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    pub(crate) value: Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(a: &FieldElem, b: &FieldElem, op: ArithOp) -> Result<FieldElem, ScalarError> {
    a.field.check(&b.field)?;
    let f = &a.field;
    let v = match op {
        ArithOp::Add => f.add_s(&a.value, &b.value),
        ArithOp::Sub => f.sub_s(&a.value, &b.value),
        ArithOp::Mul => f.mul_s(&a.value, &b.value),
        ArithOp::Div => {
            let inv = f.inv_s(&b.value).ok_or(ScalarError::DivisionByZero)?;
            f.mul_s(&a.value, &inv)
        }
    };
    Ok(f.elem(v))
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        Field::is_zero_s(&self.value)
    }

    pub fn is_one(&self) -> bool {
        Field::is_one_s(&self.value)
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem, ScalarError> {
        field_arith(self, other, ArithOp::Add)
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem, ScalarError> {
        field_arith(self, other, ArithOp::Sub)
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem, ScalarError> {
        field_arith(self, other, ArithOp::Mul)
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem, ScalarError> {
        field_arith(self, other, ArithOp::Div)
    }

    pub fn inv(&self) -> Result<FieldElem, ScalarError> {
        self.field
            .inv_s(&self.value)
            .map(|v| self.field.elem(v))
            .ok_or(ScalarError::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.field.elem(self.field.pow_s(&self.value, e))
    }

    /// Rational value, for elements of Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Scalar::Rat(r) => Some(r),
            Scalar::Fin(_) => None,
        }
    }

    /// Packed index in [`Field::elements`] order, for finite fields.
    pub fn index(&self) -> Option<u64> {
        match &self.value {
            Scalar::Fin(v) => Some(*v),
            Scalar::Rat(_) => None,
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_s(&self.value))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! impl_elem_op {
    ($tr:ident, $m:ident, $op:expr) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            /// Panics on field mismatch (or division by zero); see [`field_arith`].
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                field_arith(self, rhs, $op).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
    };
}

impl_elem_op!(Add, add, ArithOp::Add);
impl_elem_op!(Sub, sub, ArithOp::Sub);
impl_elem_op!(Mul, mul, ArithOp::Mul);
impl_elem_op!(Div, div, ArithOp::Div);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.field.elem(self.field.neg_s(&self.value))
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

/// A field automorphism `x -> x^(p^e)`. Over the rationals only `e = 0` exists.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldAut {
    field: Field,
    exponent: usize,
}

impl FieldAut {
    pub fn new(field: &Field, exponent: usize) -> Result<FieldAut, ScalarError> {
        if exponent >= field.degree() {
            return Err(ScalarError::InvalidAutomorphism { field: field.to_string(), exponent });
        }
        Ok(FieldAut { field: field.clone(), exponent })
    }

    pub fn identity(field: &Field) -> FieldAut {
        FieldAut { field: field.clone(), exponent: 0 }
    }

    /// x -> x^p (the identity on prime fields and on Q).
    pub fn frobenius(field: &Field) -> FieldAut {
        FieldAut { field: field.clone(), exponent: 1 % field.degree() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn is_identity(&self) -> bool {
        self.exponent == 0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FieldAut) -> Result<FieldAut, ScalarError> {
        self.field.check(&other.field)?;
        let k = self.field.degree();
        Ok(FieldAut { field: self.field.clone(), exponent: (self.exponent + other.exponent) % k })
    }

    pub fn inverse(&self) -> FieldAut {
        let k = self.field.degree();
        FieldAut { field: self.field.clone(), exponent: (k - self.exponent) % k }
    }

    pub fn apply(&self, a: &FieldElem) -> Result<FieldElem, ScalarError> {
        self.field.check(&a.field)?;
        Ok(self.field.elem(self.apply_s(&a.value)))
    }

    pub(crate) fn apply_s(&self, a: &Scalar) -> Scalar {
        self.field.frob_s(a, self.exponent)
    }
}

impl fmt::Display for FieldAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frob^{}", self.exponent)
    }
}

impl fmt::Debug for FieldAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} on {}", self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> FieldElem {
        let f = Field::rationals();
        f.from_i64(n).try_div(&f.from_i64(d)).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q(1, 2).try_add(&q(1, 3)).unwrap(), q(5, 6));
        assert_eq!(q(5, 6).to_string(), "5/6");
        assert_eq!(q(-4, 6).to_string(), "-2/3");
    }

    #[test]
    fn gf4_square_of_generator() {
        let f = Field::gf(4).unwrap();
        assert_eq!(f.modulus(), Some(&[1, 1, 1][..]));
        let w = f.generator().unwrap();
        assert_eq!((&w * &w).to_string(), "w+1");
    }

    #[test]
    fn gf5_division_matches_brute_force() {
        let f = Field::prime(5).unwrap();
        let (three, four) = (f.from_i64(3), f.from_i64(4));
        let brute: Vec<_> = f.elements().unwrap().into_iter().filter(|c| &four * c == three).collect();
        assert_eq!(brute.len(), 1);
        assert_eq!(three.try_div(&four).unwrap(), brute[0]);
        assert_eq!(brute[0], f.from_i64(2));
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.one().try_div(&f.zero()), Err(ScalarError::DivisionByZero));
        let g = Field::prime(7).unwrap();
        assert!(matches!(f.one().try_add(&g.one()), Err(ScalarError::FieldMismatch(..))));
        assert!(matches!(q(1, 1).try_mul(&f.one()), Err(ScalarError::FieldMismatch(..))));
    }

    #[test]
    fn frobenius_examples() {
        let f4 = Field::gf(4).unwrap();
        let w = f4.generator().unwrap();
        let frob = FieldAut::frobenius(&f4);
        assert_eq!(frob.apply(&w).unwrap().to_string(), "w+1");

        let rat = FieldAut::identity(&Field::rationals());
        assert_eq!(rat.apply(&q(7, 3)).unwrap(), q(7, 3));

        // w^3 mod w^2+1 over GF(3), by hand: w^3 = w*w^2 = -w = 2w.
        let f9 = Field::gf(9).unwrap();
        assert_eq!(f9.modulus(), Some(&[1, 0, 1][..]));
        let w9 = f9.generator().unwrap();
        let brute = &(&w9 * &w9) * &w9;
        assert_eq!(brute.to_string(), "2*w");
        assert_eq!(FieldAut::frobenius(&f9).apply(&w9).unwrap(), brute);
    }

    #[test]
    fn enumeration_order() {
        let names = |q: u64| -> Vec<String> {
            Field::gf(q).unwrap().elements().unwrap().iter().map(|e| e.to_string()).collect()
        };
        assert_eq!(names(2), ["0", "1"]);
        assert_eq!(names(3), ["0", "1", "2"]);
        assert_eq!(names(4), ["0", "1", "w", "w+1"]);
        assert!(matches!(Field::rationals().elements(), Err(ScalarError::InfiniteField(_))));
    }

    #[test]
    fn construction_rejects_bad_moduli() {
        assert!(Field::prime(6).is_err());
        // w^2+1 = (w+1)^2 over GF(2)
        assert!(Field::extension(2, vec![1, 0, 1]).is_err());
        // not monic
        assert!(Field::extension(3, vec![1, 0, 2]).is_err());
        assert!(Field::extension(2, vec![1, 1, 0, 1]).is_ok());
        // degree-1 extension is GF(p)
        assert_eq!(Field::extension(5, vec![3, 1]).unwrap(), Field::prime(5).unwrap());
    }

    #[test]
    fn automorphism_group_structure() {
        let f = Field::gf(8).unwrap();
        let frob = FieldAut::frobenius(&f);
        let e2 = frob.compose(&frob).unwrap();
        assert_eq!(e2.exponent(), 2);
        assert!(e2.compose(&frob).unwrap().is_identity());
        assert_eq!(e2.inverse(), frob);
        assert!(FieldAut::new(&f, 3).is_err());
        assert!(FieldAut::new(&Field::rationals(), 1).is_err());
    }

    fn fields() -> Vec<Field> {
        vec![
            Field::prime(2).unwrap(),
            Field::prime(5).unwrap(),
            Field::gf(4).unwrap(),
            Field::gf(9).unwrap(),
            Field::gf(27).unwrap(),
            Field::gf(16).unwrap(),
        ]
    }

    #[test]
    fn frobenius_is_bijective_with_order_k() {
        for f in fields() {
            let elems = f.elements().unwrap();
            let frob = FieldAut::frobenius(&f);
            let mut images: Vec<u64> = elems.iter().map(|a| frob.apply(a).unwrap().index().unwrap()).collect();
            images.sort();
            assert_eq!(images, (0..f.order().unwrap()).collect::<Vec<_>>());
            for a in &elems {
                let mut b = a.clone();
                for _ in 0..f.degree() {
                    b = frob.apply(&b).unwrap();
                }
                assert_eq!(&b, a);
            }
        }
    }

    #[test]
    fn frobenius_fixed_field_is_prime_field() {
        for qq in [4u64, 8, 9, 16, 25, 27, 49, 81] {
            let f = Field::gf(qq).unwrap();
            let frob = FieldAut::frobenius(&f);
            let fixed: Vec<u64> = f
                .elements()
                .unwrap()
                .iter()
                .filter(|a| &frob.apply(a).unwrap() == *a)
                .map(|a| a.index().unwrap())
                .collect();
            assert_eq!(fixed, (0..f.characteristic()).collect::<Vec<_>>(), "GF({qq})");
        }
    }

    #[test]
    fn frobenius_preserves_operations() {
        for f in fields() {
            let frob = FieldAut::frobenius(&f);
            let elems = f.elements().unwrap();
            for a in &elems {
                for b in &elems {
                    let fa = frob.apply(a).unwrap();
                    let fb = frob.apply(b).unwrap();
                    assert_eq!(frob.apply(&(a + b)).unwrap(), &fa + &fb);
                    assert_eq!(frob.apply(&(a * b)).unwrap(), &fa * &fb);
                }
            }
            assert!(frob.apply(&f.one()).unwrap().is_one());
            assert!(frob.apply(&f.zero()).unwrap().is_zero());
        }
    }
}
