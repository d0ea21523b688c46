//! Sparse noncommutative polynomials over a [`Field`].
//!
//! Terms are kept in a `BTreeMap` keyed by [`Word`], whose order is deglex
//! (degree first, then lexicographic with x1 < x2 < ...). Iteration order is
//! therefore the canonical printing order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalars::{Field, FieldAut, FieldElem, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(String, String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("bad field literal at position {pos}: {msg}")]
    FieldLiteral { pos: usize, msg: String },
}

/// A monomial: a finite sequence of 1-based variable indices.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Word {
        assert!(i >= 1, "variables are 1-based");
        Word(vec![i as u32])
    }

    pub fn from_letters<I: IntoIterator<Item = usize>>(letters: I) -> Word {
        Word(letters.into_iter().map(|i| {
            assert!(i >= 1, "variables are 1-based");
            i as u32
        }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn max_letter(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn mirror(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Letter multiplicities, one entry per variable.
    pub fn multidegree(&self, arity: usize) -> Vec<usize> {
        let mut m = vec![0; arity];
        for i in self.letters() {
            m[i - 1] += 1;
        }
        m
    }

    /// `(prefix, last letter)`, or `None` for the empty word.
    pub fn split_last(&self) -> Option<(Word, usize)> {
        let (&last, rest) = self.0.split_last()?;
        Some((Word(rest.to_vec()), last as usize))
    }

    /// All words of degree at most `max_degree` in deglex order, starting with the empty word.
    pub fn all_up_to(arity: usize, max_degree: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_degree {
            let mut next = Vec::with_capacity(layer.len() * arity);
            for w in &layer {
                for i in 1..=arity {
                    let mut v = w.0.clone();
                    v.push(i as u32);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn format_with(&self, names: &VarNames) -> String {
        if self.is_empty() {
            return "1".into();
        }
        self.letters().map(|i| names.name(i)).collect::<Vec<_>>().join("*")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arity = self.max_letter().max(1);
        write!(f, "{}", self.format_with(&VarNames::canonical(arity)))
    }
}

/// Variable names used for printing and accepted when parsing.
///
/// Arity 1 prints `x` (and also accepts `t`); arities 2..=4 print the aliases
/// `x, y, z, t`; larger arities print `x1..xn`. `x<i>` is always accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
}

impl VarNames {
    pub fn canonical(arity: usize) -> VarNames {
        let names = match arity {
            1 => vec!["x".to_string()],
            2..=4 => ["x", "y", "z", "t"][..arity].iter().map(|s| s.to_string()).collect(),
            _ => (1..=arity).map(|i| format!("x{i}")).collect(),
        };
        VarNames { names }
    }

    /// Custom names, e.g. `t` for univariate forms.
    pub fn custom<S: Into<String>>(names: impl IntoIterator<Item = S>) -> VarNames {
        VarNames { names: names.into_iter().map(Into::into).collect() }
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i - 1]
    }

    /// Resolve a variable name to its 1-based index.
    pub fn lookup(&self, name: &str) -> Option<usize> {
        let n = self.names.len();
        if let Some(pos) = self.names.iter().position(|s| s == name) {
            return Some(pos + 1);
        }
        if let Some(rest) = name.strip_prefix('x') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                return rest.parse::<usize>().ok().filter(|&i| (1..=n).contains(&i));
            }
        }
        match (n, name) {
            (1, "t") => Some(1),
            (2..=4, _) => ["x", "y", "z", "t"][..n].iter().position(|&s| s == name).map(|i| i + 1),
            _ => None,
        }
    }
}

/// Total degree, with a distinguished value for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Element of the free associative algebra W(x1..xn) over a field.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPoly {
    field: Field,
    arity: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero(field: &Field, arity: usize) -> NcPoly {
        assert!(arity >= 1, "arity must be at least 1");
        NcPoly { field: field.clone(), arity, terms: BTreeMap::new() }
    }

    pub fn one(field: &Field, arity: usize) -> NcPoly {
        NcPoly::constant(&field.one(), arity)
    }

    pub fn constant(c: &FieldElem, arity: usize) -> NcPoly {
        let mut p = NcPoly::zero(c.field(), arity);
        p.add_term(Word::empty(), c.value.clone());
        p
    }

    /// The generator `x_i` (1-based).
    pub fn var(field: &Field, arity: usize, i: usize) -> NcPoly {
        assert!((1..=arity).contains(&i), "variable x{i} outside arity {arity}");
        NcPoly::word(field, arity, Word::letter(i))
    }

    pub fn word(field: &Field, arity: usize, w: Word) -> NcPoly {
        assert!(w.max_letter() <= arity, "word uses variables outside arity {arity}");
        let mut p = NcPoly::zero(field, arity);
        p.terms.insert(w, field.one_s());
        p
    }

    pub fn monomial(c: &FieldElem, arity: usize, w: Word) -> NcPoly {
        assert!(w.max_letter() <= arity, "word uses variables outside arity {arity}");
        let mut p = NcPoly::zero(c.field(), arity);
        p.add_term(w, c.value.clone());
        p
    }

    /// Build from `(word, coefficient)` pairs; repeated words accumulate.
    pub fn from_terms<I>(field: &Field, arity: usize, terms: I) -> NcPoly
    where
        I: IntoIterator<Item = (Word, FieldElem)>,
    {
        let mut p = NcPoly::zero(field, arity);
        for (w, c) in terms {
            assert!(c.field() == field, "coefficient from another field");
            assert!(w.max_letter() <= arity, "word uses variables outside arity {arity}");
            p.add_term(w, c.value);
        }
        p
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Scalar) {
        if Field::is_zero_s(&c) {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add_s(e.get(), &c);
                if Field::is_zero_s(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&Word::empty()).is_some_and(Field::is_one_s)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Word::is_empty)
    }

    pub fn coefficient(&self, w: &Word) -> FieldElem {
        self.field.elem(self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero_s()))
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coefficient(&Word::empty())
    }

    /// Terms in deglex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, FieldElem)> + '_ {
        self.terms.iter().map(|(w, c)| (w, self.field.elem(c.clone())))
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> + '_ {
        self.terms.keys()
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn is_compatible(&self, other: &NcPoly) -> bool {
        self.arity == other.arity && self.field == other.field
    }

    pub(crate) fn check(&self, other: &NcPoly) -> Result<(), AlgebraError> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch(self.describe(), other.describe()))
        }
    }

    pub(crate) fn describe(&self) -> String {
        format!("W_{} over {}", self.arity, self.field)
    }

    pub fn try_add(&self, other: &NcPoly) -> Result<NcPoly, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &NcPoly) -> Result<NcPoly, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), self.field.neg_s(c));
        }
        Ok(out)
    }

    /// Bilinear extension of word concatenation.
    pub fn try_mul(&self, other: &NcPoly) -> Result<NcPoly, AlgebraError> {
        self.check(other)?;
        let mut out = NcPoly::zero(&self.field, self.arity);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), self.field.mul_s(a, b));
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &FieldElem) -> Result<NcPoly, AlgebraError> {
        if c.field() != &self.field {
            return Err(AlgebraError::AlgebraMismatch(self.describe(), c.field().to_string()));
        }
        Ok(self.scale_s(&c.value))
    }

    pub(crate) fn scale_s(&self, c: &Scalar) -> NcPoly {
        if Field::is_zero_s(c) {
            return NcPoly::zero(&self.field, self.arity);
        }
        let terms = self.terms.iter().map(|(w, a)| (w.clone(), self.field.mul_s(a, c))).collect();
        NcPoly { field: self.field.clone(), arity: self.arity, terms }
    }

    pub fn pow(&self, k: usize) -> NcPoly {
        let mut acc = NcPoly::one(&self.field, self.arity);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Mirror antiautomorphism: reverse every word, keep coefficients.
    pub fn mirror(&self) -> NcPoly {
        let terms = self.terms.iter().map(|(w, c)| (w.mirror(), c.clone())).collect();
        NcPoly { field: self.field.clone(), arity: self.arity, terms }
    }

    /// Apply a field automorphism to every coefficient.
    pub fn map_coefficients(&self, alpha: &FieldAut) -> NcPoly {
        assert!(alpha.field() == &self.field, "automorphism of another field");
        if alpha.is_identity() {
            return self.clone();
        }
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), alpha.apply_s(c))).collect();
        NcPoly { field: self.field.clone(), arity: self.arity, terms }
    }

    /// Image in the commutative polynomial ring (quotient by the commutator ideal).
    pub fn abelianize(&self) -> CommPoly {
        let mut out = CommPoly::zero(&self.field, self.arity);
        for (w, c) in &self.terms {
            out.add_term(Exponent(w.multidegree(self.arity)), c.clone());
        }
        out
    }

    pub fn degree(&self) -> Degree {
        self.terms.keys().next_back().map_or(Degree::NegInfinity, |w| Degree::Finite(w.len()))
    }

    /// Per-variable maximal degree; all zeros for constants and for 0.
    pub fn multidegree(&self) -> Vec<usize> {
        let mut m = vec![0; self.arity];
        for w in self.terms.keys() {
            for (mi, d) in m.iter_mut().zip(w.multidegree(self.arity)) {
                *mi = (*mi).max(d);
            }
        }
        m
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut lens = self.terms.keys().map(Word::len);
        match lens.next() {
            None => true,
            Some(d) => lens.all(|l| l == d),
        }
    }

    pub fn homogeneous_component(&self, degree: usize) -> NcPoly {
        self.filter_words(|w| w.len() == degree)
    }

    pub fn multihomogeneous_component(&self, multidegree: &[usize]) -> NcPoly {
        assert_eq!(multidegree.len(), self.arity, "multidegree length must equal arity");
        self.filter_words(|w| w.multidegree(self.arity) == multidegree)
    }

    /// Nonzero homogeneous components keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<usize, NcPoly> {
        let mut out: BTreeMap<usize, NcPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len())
                .or_insert_with(|| NcPoly::zero(&self.field, self.arity))
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }

    fn filter_words(&self, keep: impl Fn(&Word) -> bool) -> NcPoly {
        let terms = self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect();
        NcPoly { field: self.field.clone(), arity: self.arity, terms }
    }

    /// Same polynomial viewed in a larger algebra.
    pub fn widen(&self, arity: usize) -> NcPoly {
        assert!(arity >= self.arity, "widen cannot drop variables");
        NcPoly { field: self.field.clone(), arity, terms: self.terms.clone() }
    }

    pub fn format_with(&self, names: &VarNames) -> String {
        format_terms(&self.field, self.terms.iter().map(|(w, c)| (w.format_with(names), w.is_empty(), c)))
    }

    pub fn parse(text: &str, field: &Field, arity: usize) -> Result<NcPoly, AlgebraError> {
        crate::parse::parse_poly(text, field, &VarNames::canonical(arity))
    }

    pub fn parse_with(text: &str, field: &Field, names: &VarNames) -> Result<NcPoly, AlgebraError> {
        crate::parse::parse_poly(text, field, names)
    }
}

/// Shared printer for noncommutative and commutative polynomials.
fn format_terms<'a>(field: &Field, terms: impl Iterator<Item = (String, bool, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (mono, is_unit, c) in terms {
        let negative = Field::is_negative_s(c);
        let mag = if negative { field.neg_s(c) } else { c.clone() };
        let body = if is_unit {
            let s = field.format_s(&mag);
            if field.term_count_s(&mag) > 1 { format!("({s})") } else { s }
        } else if Field::is_one_s(&mag) {
            mono
        } else if field.term_count_s(&mag) > 1 {
            format!("({})*{mono}", field.format_s(&mag))
        } else {
            format!("{}*{mono}", field.format_s(&mag))
        };
        match (out.is_empty(), negative) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&VarNames::canonical(self.arity)))
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly[{}]({self})", self.arity)
    }
}

macro_rules! impl_poly_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&NcPoly> for &NcPoly {
            type Output = NcPoly;
            /// Panics on algebra mismatch; use the `try_` form for checked arithmetic.
            fn $m(self, rhs: &NcPoly) -> NcPoly {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr for NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: NcPoly) -> NcPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

impl_poly_op!(Add, add, try_add);
impl_poly_op!(Sub, sub, try_sub);
impl_poly_op!(Mul, mul, try_mul);

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), self.field.neg_s(c))).collect();
        NcPoly { field: self.field.clone(), arity: self.arity, terms }
    }
}

/// Exponent vector of a commutative monomial.
///
/// Ordered by total degree, then as sorted words (so x^2*y < x*y^2).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(pub Vec<usize>);

impl Exponent {
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0) {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Commutative polynomial: the abelianized image of an [`NcPoly`].
#[derive(Clone, PartialEq, Eq)]
pub struct CommPoly {
    field: Field,
    arity: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl CommPoly {
    pub fn zero(field: &Field, arity: usize) -> CommPoly {
        CommPoly { field: field.clone(), arity, terms: BTreeMap::new() }
    }

    fn add_term(&mut self, e: Exponent, c: Scalar) {
        if Field::is_zero_s(&c) {
            return;
        }
        let s = match self.terms.remove(&e) {
            Some(old) => self.field.add_s(&old, &c),
            None => c,
        };
        if !Field::is_zero_s(&s) {
            self.terms.insert(e, s);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[usize]) -> FieldElem {
        self.field.elem(self.terms.get(&Exponent(e.to_vec())).cloned().unwrap_or_else(|| self.field.zero_s()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, FieldElem)> + '_ {
        self.terms.iter().map(|(e, c)| (e, self.field.elem(c.clone())))
    }

    pub fn try_add(&self, other: &CommPoly) -> Result<CommPoly, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &CommPoly) -> Result<CommPoly, AlgebraError> {
        self.check(other)?;
        let mut out = CommPoly::zero(&self.field, self.arity);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = Exponent(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
                out.add_term(e, self.field.mul_s(ca, cb));
            }
        }
        Ok(out)
    }

    fn check(&self, other: &CommPoly) -> Result<(), AlgebraError> {
        if self.arity == other.arity && self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch(
                format!("P_{} over {}", self.arity, self.field),
                format!("P_{} over {}", other.arity, other.field),
            ))
        }
    }

    pub fn format_with(&self, names: &VarNames) -> String {
        let mono = |e: &Exponent| -> String {
            e.0.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let n = names.name(i + 1);
                    if k == 1 { n.to_string() } else { format!("{n}^{k}") }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        format_terms(&self.field, self.terms.iter().map(|(e, c)| (mono(e), e.degree() == 0, c)))
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&VarNames::canonical(self.arity)))
    }
}

impl fmt::Debug for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CommPoly[{}]({self})", self.arity)
    }
}
