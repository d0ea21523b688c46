//! Classification of tabulated candidate maps as homomorphisms or
//! antihomomorphisms, and semi-inner factorization of families of maps.
//!
//! A candidate μ on W_n is given by a [`WordMap`]: its value on every word of
//! degree at most `D`, extended additively and α-semilinearly. Classification
//! runs in stages:
//!
//! 1. unitality (`μ(1) = 1`);
//! 2. both defects `μ(xy) - μ(x)μ(y)` and `μ(xy) - μ(y)μ(x)` lie in the
//!    commutator ideal;
//! 3. solve `μ(xy) = a·μ(x)μ(y) + b·μ(y)μ(x)` for `(a, b)`;
//! 4. `(a, b)` must satisfy `a² = a, ab = 0, b² = b, (a, b) ≠ (0, 0)`;
//! 5. `μ(uv) = a·μ(u)μ(v) + b·μ(v)μ(u)` for every word pair with `deg(uv) ≤ D`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::freealg::{NcPoly, VarNames, Word};
use crate::morphisms::{
    commutator_ideal_member, compose, conjugate_morphism, Morphism, MorphismError, SemiLinearMap, TwistedMorphism,
};
use crate::random;
use crate::scalars::{Field, FieldAut, FieldElem, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("map is not unital: μ(1) = {0}")]
    NotUnital(String),
    #[error("μ(x)μ(y) and μ(y)μ(x) are linearly dependent")]
    DegenerateImages,
    #[error("no (a, b) solves μ(xy) = a·μ(x)μ(y) + b·μ(y)μ(x)")]
    Inconsistent,
    #[error("μ(x) has degree {0}, expected an affine image")]
    NotAffine(String),
    #[error("μ(x^{0}) differs from μ(x)^{0}")]
    NotMultiplicative(usize),
    #[error("objects W{0} and W{1} classify differently")]
    MixedVerdicts(usize, usize),
    #[error("map on W{arity} is neither a homomorphism nor an antihomomorphism (pair {pair})")]
    Unclassifiable { arity: usize, pair: String },
    #[error("degree cap {have} is below the required {need}")]
    DegreeCap { need: usize, have: usize },
    #[error("arity: {0}")]
    Arity(String),
    #[error("invalid table: {0}")]
    Table(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// Tabulated candidate map: `table[u]` for every word `u` of degree ≤ `deg_cap`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordMap {
    field: Field,
    arity: usize,
    alpha: FieldAut,
    deg_cap: usize,
    table: BTreeMap<Word, NcPoly>,
}

impl WordMap {
    /// Checks that the table covers exactly the words of degree ≤ `deg_cap`.
    pub fn new(alpha: FieldAut, arity: usize, deg_cap: usize, table: BTreeMap<Word, NcPoly>) -> Result<WordMap, ClassifyError> {
        if arity == 0 {
            return Err(ClassifyError::Arity("arity must be at least 1".into()));
        }
        let field = alpha.field().clone();
        let names = VarNames::canonical(arity);
        let expected = Word::all_up_to(arity, deg_cap);
        for w in &expected {
            if !table.contains_key(w) {
                return Err(ClassifyError::Table(format!("missing word {}", w.format_with(&names))));
            }
        }
        if table.len() != expected.len() {
            let extra = table.keys().find(|w| w.len() > deg_cap || w.max_letter() > arity).expect("extra key");
            return Err(ClassifyError::Table(format!("word {extra:?} outside the table range")));
        }
        let zero = NcPoly::zero(&field, arity);
        for (w, p) in &table {
            if !zero.is_compatible(p) {
                return Err(ClassifyError::Table(format!(
                    "entry for {} lives in {}",
                    w.format_with(&names),
                    p.describe()
                )));
            }
        }
        Ok(WordMap { field, arity, alpha, deg_cap, table })
    }

    pub fn from_fn(alpha: FieldAut, arity: usize, deg_cap: usize, f: impl Fn(&Word) -> NcPoly) -> Result<WordMap, ClassifyError> {
        let table = Word::all_up_to(arity, deg_cap).into_iter().map(|w| {
            let p = f(&w);
            (w, p)
        }).collect();
        WordMap::new(alpha, arity, deg_cap, table)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn alpha(&self) -> &FieldAut {
        &self.alpha
    }

    pub fn deg_cap(&self) -> usize {
        self.deg_cap
    }

    pub fn table(&self) -> &BTreeMap<Word, NcPoly> {
        &self.table
    }

    /// Table entry; panics for words beyond the cap.
    pub fn get(&self, w: &Word) -> &NcPoly {
        &self.table[w]
    }

    fn gen(&self, i: usize) -> &NcPoly {
        &self.table[&Word::letter(i)]
    }

    pub fn is_unital(&self) -> bool {
        self.table[&Word::empty()].is_one()
    }

    /// `μ(Σ a_u u) = Σ α(a_u)·table[u]` for polynomials within the cap.
    pub fn extend(&self, p: &NcPoly) -> Result<NcPoly, ClassifyError> {
        NcPoly::zero(&self.field, self.arity).check(p).map_err(MorphismError::from)?;
        let mut out = NcPoly::zero(&self.field, self.arity);
        for (w, c) in p.raw_terms() {
            let entry = self.table.get(w).ok_or(ClassifyError::DegreeCap { need: w.len(), have: self.deg_cap })?;
            out = &out + &entry.scale_s(&self.alpha.apply_s(c));
        }
        Ok(out)
    }

    /// `σ̄ ∘ μ`: apply `sigma` to every table entry; the declared action becomes `σ ∘ α`.
    pub fn twist(&self, sigma: &FieldAut) -> Result<WordMap, ClassifyError> {
        let table = self.table.iter().map(|(w, p)| (w.clone(), p.map_coefficients(sigma))).collect();
        Ok(WordMap { table, alpha: sigma.compose(&self.alpha)?, ..self.clone() })
    }

    fn require_cap(&self, need: usize) -> Result<(), ClassifyError> {
        if self.deg_cap < need {
            Err(ClassifyError::DegreeCap { need, have: self.deg_cap })
        } else {
            Ok(())
        }
    }

    fn require_pair(&self) -> Result<(), ClassifyError> {
        if self.arity < 2 {
            return Err(ClassifyError::Arity(format!("need at least two generators, W{} has {}", self.arity, self.arity)));
        }
        Ok(())
    }

    fn require_unital(&self) -> Result<(), ClassifyError> {
        if self.is_unital() {
            Ok(())
        } else {
            Err(ClassifyError::NotUnital(self.table[&Word::empty()].to_string()))
        }
    }
}

/// `table[u] = μ(u)` for every word of degree ≤ `deg_cap`.
pub fn tabulate(mu: &SemiLinearMap, deg_cap: usize) -> WordMap {
    let field = mu.field().clone();
    let n = mu.arity();
    let eta = mu.eta().fwd();
    let mut table: BTreeMap<Word, NcPoly> = BTreeMap::new();
    for w in Word::all_up_to(n, deg_cap) {
        let value = match w.split_last() {
            None => NcPoly::one(&field, n),
            // μ(u'x_k) = μ(u')η(x_k), or η(x_k)μ(u') under the mirror.
            Some((prefix, k)) => {
                let prev = &table[&prefix];
                if mu.is_mirror() { eta.image(k) * prev } else { prev * eta.image(k) }
            }
        };
        table.insert(w, value);
    }
    WordMap { field, arity: n, alpha: mu.alpha().clone(), deg_cap, table }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectReport {
    /// `μ(xy) - μ(x)μ(y)`
    pub hom_defect: NcPoly,
    /// `μ(xy) - μ(y)μ(x)`
    pub anti_defect: NcPoly,
    pub hom_member: bool,
    pub anti_member: bool,
}

impl DefectReport {
    pub fn passed(&self) -> bool {
        self.hom_member && self.anti_member
    }
}

pub fn check_commutator_defects(mu: &WordMap) -> Result<DefectReport, ClassifyError> {
    mu.require_pair()?;
    mu.require_cap(2)?;
    mu.require_unital()?;
    let (x, y) = (mu.gen(1), mu.gen(2));
    let xy = mu.get(&Word::from_letters([1, 2]));
    let hom_defect = xy - &(x * y);
    let anti_defect = xy - &(y * x);
    Ok(DefectReport {
        hom_member: commutator_ideal_member(&hom_defect),
        anti_member: commutator_ideal_member(&anti_defect),
        hom_defect,
        anti_defect,
    })
}

/// Scalar pair `(a, b)` with `μ(uv) = a·μ(u)μ(v) + b·μ(v)μ(u)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MulCoeffs {
    pub a: FieldElem,
    pub b: FieldElem,
}

impl MulCoeffs {
    pub fn new(a: FieldElem, b: FieldElem) -> MulCoeffs {
        MulCoeffs { a, b }
    }

    pub fn hom(field: &Field) -> MulCoeffs {
        MulCoeffs { a: field.one(), b: field.zero() }
    }

    pub fn anti(field: &Field) -> MulCoeffs {
        MulCoeffs { a: field.zero(), b: field.one() }
    }

    /// `a·p·q + b·q·p`
    fn combine(&self, p: &NcPoly, q: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero(p.field(), p.arity());
        if !self.a.is_zero() {
            out = &out + &(p * q).scale_s(&self.a.value);
        }
        if !self.b.is_zero() {
            out = &out + &(q * p).scale_s(&self.b.value);
        }
        out
    }
}

impl fmt::Display for MulCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

pub fn solve_mul_coeffs(mu: &WordMap) -> Result<MulCoeffs, ClassifyError> {
    mu.require_pair()?;
    mu.require_cap(2)?;
    let field = mu.field();
    let (x, y) = (mu.gen(1), mu.gen(2));
    let target = mu.get(&Word::from_letters([1, 2]));
    let (p, q) = (x * y, y * x);
    let words: Vec<&Word> = {
        let mut ws: Vec<&Word> = p.words().chain(q.words()).collect();
        ws.sort();
        ws.dedup();
        ws
    };
    let row = |w: &Word| (p.coefficient(w), q.coefficient(w), target.coefficient(w));
    let first = words.iter().find(|w| !p.coefficient(w).is_zero() || !q.coefficient(w).is_zero());
    let Some(first) = first else {
        return Err(ClassifyError::DegenerateImages);
    };
    let (p1, q1, t1) = row(first);
    let second = words.iter().map(|w| row(w)).find_map(|(p2, q2, t2)| {
        let det = &(&p1 * &q2) - &(&p2 * &q1);
        (!det.is_zero()).then_some((p2, q2, t2, det))
    });
    let Some((p2, q2, t2, det)) = second else {
        return Err(ClassifyError::DegenerateImages);
    };
    // Cramer's rule on the 2x2 minor.
    let a = &(&(&t1 * &q2) - &(&t2 * &q1)) / &det;
    let b = &(&(&p1 * &t2) - &(&p2 * &t1)) / &det;
    let coeffs = MulCoeffs { a, b };
    if &coeffs.combine(x, y) != target {
        return Err(ClassifyError::Inconsistent);
    }
    debug_assert_eq!(coeffs.a.field(), field);
    Ok(coeffs)
}

/// `a² = a, ab = 0, b² = b` and `(a, b) ≠ (0, 0)`.
pub fn check_idempotent_system(c: &MulCoeffs) -> bool {
    let (a, b) = (&c.a, &c.b);
    &(a * a) == a && (a * b).is_zero() && &(b * b) == b && !(a.is_zero() && b.is_zero())
}

/// Compares `μ(xxy)` with `a·μ(xx)μ(y) + b·μ(y)μ(xx)` and with the nested
/// expansion `a·μ(x)μ(xy) + b·μ(xy)μ(x)`.
pub fn verify_uuv(mu: &WordMap, c: &MulCoeffs) -> Result<bool, ClassifyError> {
    mu.require_pair()?;
    mu.require_cap(3)?;
    let direct = mu.get(&Word::from_letters([1, 1, 2]));
    let bracketed = c.combine(mu.get(&Word::from_letters([1, 1])), mu.gen(2));
    let nested = c.combine(mu.gen(1), mu.get(&Word::from_letters([1, 2])));
    Ok(direct == &bracketed && direct == &nested)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Hom,
    AntiHom,
    Neither,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Hom => "HOM",
            Verdict::AntiHom => "ANTIHOM",
            Verdict::Neither => "NEITHER",
        })
    }
}

/// Failing word pair and its defect `μ(uv) - (a·μ(u)μ(v) + b·μ(v)μ(u))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub u: Word,
    pub v: Word,
    pub defect: NcPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub coeffs: Option<MulCoeffs>,
    pub certificate: Option<Certificate>,
}

impl ClassificationResult {
    fn neither(coeffs: Option<MulCoeffs>, certificate: Certificate) -> ClassificationResult {
        ClassificationResult { verdict: Verdict::Neither, coeffs, certificate: Some(certificate) }
    }
}

/// All `(u, v)` with both nonempty and `deg(uv) ≤ cap`, ordered by `u` then `v` (deglex).
fn word_pairs(arity: usize, cap: usize) -> Vec<(Word, Word)> {
    let words = Word::all_up_to(arity, cap.saturating_sub(1));
    let mut pairs = Vec::new();
    for u in words.iter().filter(|u| !u.is_empty()) {
        for v in words.iter().filter(|v| !v.is_empty() && u.len() + v.len() <= cap) {
            pairs.push((u.clone(), v.clone()));
        }
    }
    pairs
}

fn first_failure(mu: &WordMap, c: &MulCoeffs) -> Option<Certificate> {
    word_pairs(mu.arity, mu.deg_cap).into_par_iter().find_map_first(|(u, v)| {
        let expected = c.combine(mu.get(&u), mu.get(&v));
        let defect = mu.get(&u.concat(&v)) - &expected;
        (!defect.is_zero()).then_some(Certificate { u, v, defect })
    })
}

pub fn classify_map(mu: &WordMap) -> Result<ClassificationResult, ClassifyError> {
    let defects = check_commutator_defects(mu)?;
    let (x, y) = (Word::letter(1), Word::letter(2));
    if !defects.hom_member {
        return Ok(ClassificationResult::neither(None, Certificate { u: x, v: y, defect: defects.hom_defect }));
    }
    if !defects.anti_member {
        return Ok(ClassificationResult::neither(None, Certificate { u: x, v: y, defect: defects.anti_defect }));
    }
    let coeffs = match solve_mul_coeffs(mu) {
        Ok(c) => c,
        Err(ClassifyError::Inconsistent) => {
            return Ok(ClassificationResult::neither(None, Certificate { u: x, v: y, defect: defects.hom_defect }));
        }
        Err(e) => return Err(e),
    };
    let admissible = check_idempotent_system(&coeffs);
    let failure = first_failure(mu, &coeffs);
    match (admissible, failure) {
        (true, None) => {
            let verdict = if coeffs.a.is_one() { Verdict::Hom } else { Verdict::AntiHom };
            Ok(ClassificationResult { verdict, coeffs: Some(coeffs), certificate: None })
        }
        (true, Some(cert)) => Ok(ClassificationResult::neither(None, cert)),
        (false, Some(cert)) => Ok(ClassificationResult::neither(Some(coeffs), cert)),
        (false, None) => {
            // Only reachable when the cap is too low to expose the failure.
            Ok(ClassificationResult::neither(Some(coeffs), Certificate { u: x, v: y, defect: defects.hom_defect }))
        }
    }
}

/// For a map on W_1: `table[x] = a·x + b` with `a ≠ 0` and `table[x^k] = (a·x + b)^k`.
pub fn extract_polyaut(mu: &WordMap) -> Result<(FieldElem, FieldElem), ClassifyError> {
    if mu.arity != 1 {
        return Err(ClassifyError::Arity(format!("expected a map on W1, got W{}", mu.arity)));
    }
    mu.require_unital()?;
    let image = mu.gen(1);
    if image.degree().finite() != Some(1) {
        return Err(ClassifyError::NotAffine(image.degree().to_string()));
    }
    let a = image.coefficient(&Word::letter(1));
    let b = image.constant_term();
    let mut power = NcPoly::one(&mu.field, 1);
    for k in 1..=mu.deg_cap {
        power = &power * image;
        let w = Word::from_letters(std::iter::repeat_n(1, k));
        if mu.get(&w) != &power {
            return Err(ClassifyError::NotMultiplicative(k));
        }
    }
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiInnerFactorization {
    pub alpha: FieldAut,
    pub mirror: bool,
    /// Generator images of η_i, one entry per object W_1..W_N.
    pub eta_images: Vec<Vec<NcPoly>>,
    pub verified: bool,
}

/// Decompose a family `μ_1..μ_N` (arity `i` at index `i-1`) as
/// `μ_i = η_i ∘ β^ε ∘ ᾱ` with one α and one ε for the whole family.
pub fn factor_semi_inner(family: &[WordMap]) -> Result<SemiInnerFactorization, ClassifyError> {
    let Some(first) = family.first() else {
        return Err(ClassifyError::Arity("empty family".into()));
    };
    for (i, mu) in family.iter().enumerate() {
        if mu.arity != i + 1 {
            return Err(ClassifyError::Arity(format!("family entry {} has arity {}, expected {}", i + 1, mu.arity, i + 1)));
        }
        if mu.alpha != first.alpha {
            return Err(ClassifyError::Table(format!(
                "W{} declares {} but W1 declares {}",
                i + 1,
                mu.alpha,
                first.alpha
            )));
        }
        if i > 0 {
            mu.require_cap(3)?;
        }
    }
    let alpha = first.alpha.clone();
    extract_polyaut(first)?;
    let untwist = alpha.inverse();
    let mut verdict: Option<Verdict> = None;
    for mu in &family[1..] {
        let reduced = mu.twist(&untwist)?;
        let result = classify_map(&reduced)?;
        match result.verdict {
            Verdict::Neither => {
                let cert = result.certificate.expect("Neither carries a certificate");
                let names = VarNames::canonical(mu.arity);
                return Err(ClassifyError::Unclassifiable {
                    arity: mu.arity,
                    pair: format!("{}, {}", cert.u.format_with(&names), cert.v.format_with(&names)),
                });
            }
            v => match verdict {
                None => verdict = Some(v),
                Some(prev) if prev != v => return Err(ClassifyError::MixedVerdicts(2, mu.arity)),
                Some(_) => {}
            },
        }
    }
    let mirror = verdict == Some(Verdict::AntiHom);
    let eta_images: Vec<Vec<NcPoly>> = family
        .iter()
        .map(|mu| (1..=mu.arity).map(|k| mu.gen(k).clone()).collect())
        .collect();
    let verified = family.iter().zip(&eta_images).all(|(mu, images)| {
        let eta = Morphism::new(&mu.field, mu.arity, mu.arity, images.clone()).expect("table rows live in W_i");
        mu.table.iter().all(|(w, value)| {
            let reflected = if mirror { w.mirror() } else { w.clone() };
            &eta.apply_word(&reflected) == value
        })
    });
    Ok(SemiInnerFactorization { alpha, mirror, eta_images, verified })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// `id^τ` differs from the identity.
    IdentityMoved,
    /// `s^τ` is not an algebra homomorphism.
    NotAMorphism,
    /// `(t∘s)^τ ≠ t^τ ∘ s^τ`.
    NotFunctorial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Offending morphism (for compositions, `t∘s`).
    pub morphism: Morphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CategoryReport {
    pub identity_checks: usize,
    pub morphism_checks: usize,
    pub composition_checks: usize,
    pub violations: Vec<Violation>,
}

impl CategoryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Randomized check that conjugation by the family is an automorphism of the
/// category: identities are fixed, every `s^τ` is again a morphism and
/// conjugation respects composition.
pub fn verify_category_automorphism(
    family: &[SemiLinearMap],
    samples: usize,
    deg_cap: usize,
    seed: u64,
) -> Result<CategoryReport, ClassifyError> {
    let Some(first) = family.first() else {
        return Err(ClassifyError::Arity("empty family".into()));
    };
    let field = first.field().clone();
    let mut by_arity: BTreeMap<usize, &SemiLinearMap> = BTreeMap::new();
    for mu in family {
        if mu.field() != &field {
            return Err(ScalarError::FieldMismatch(field.to_string(), mu.field().to_string()).into());
        }
        if by_arity.insert(mu.arity(), mu).is_some() {
            return Err(ClassifyError::Arity(format!("two maps given for W{}", mu.arity())));
        }
    }
    let arities: Vec<usize> = by_arity.keys().copied().collect();
    let mut report = CategoryReport::default();

    for (&n, mu) in &by_arity {
        let id = Morphism::identity(&field, n);
        let conj = conjugate_morphism(&id, mu, mu)?;
        report.identity_checks += 1;
        if !conj.same_map(&TwistedMorphism::from_morphism(&id)) {
            report.violations.push(Violation { kind: ViolationKind::IdentityMoved, morphism: id });
        }
    }

    let mut rng = random::rng(seed);
    for _ in 0..samples {
        let pick = |rng: &mut random::TestRng| arities[rng.gen_range(0..arities.len())];
        let (i, j, k) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let s = random::morphism(&mut rng, &field, i, j, deg_cap, 2);
        let t = random::morphism(&mut rng, &field, j, k, deg_cap, 2);
        let s_tau = conjugate_morphism(&s, by_arity[&i], by_arity[&j])?;
        let t_tau = conjugate_morphism(&t, by_arity[&j], by_arity[&k])?;
        let ts = compose(&t, &s)?;
        let ts_tau = conjugate_morphism(&ts, by_arity[&i], by_arity[&k])?;
        for (m, conj) in [(&s, &s_tau), (&t, &t_tau)] {
            report.morphism_checks += 1;
            if !conj.is_homomorphism() {
                report.violations.push(Violation { kind: ViolationKind::NotAMorphism, morphism: m.clone() });
            }
        }
        report.composition_checks += 1;
        if !ts_tau.same_map(&t_tau.compose(&s_tau)?) {
            report.violations.push(Violation { kind: ViolationKind::NotFunctorial, morphism: ts });
        }
    }
    Ok(report)
}
