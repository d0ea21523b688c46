//! Central bijections of W_n: maps that commute with every endomorphism.
//!
//! A candidate is described by its generator images `r_i = μ(x_i)`. Commuting
//! with the endomorphism that fixes one generator and kills the rest forces
//! each `r_i` to be one univariate polynomial `r` evaluated at `x_i`, and then
//! `μ(u) = r(u)` for every `u`. Bijectivity leaves only the affine `r`.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::freealg::{NcPoly, VarNames, Word};
use crate::morphisms::{Morphism, MorphismError, SemiLinearMap};
use crate::random;
use crate::scalars::{Field, FieldElem, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotBijectiveReason {
    ConstantMap,
    /// `r(u)` has degree `k·deg u`, so no `u` maps to a generator.
    DegreeObstruction(usize),
}

impl fmt::Display for NotBijectiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotBijectiveReason::ConstantMap => f.write_str("constant map"),
            NotBijectiveReason::DegreeObstruction(k) => write!(f, "degree obstruction (degree {k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CentralityError {
    #[error("μ does not commute with {endomorphism:?} at x{generator}: defect {defect}")]
    NotCentralWitness { endomorphism: Morphism, generator: usize, defect: NcPoly },
    #[error("not bijective: {0}")]
    NotBijective(NotBijectiveReason),
    #[error("arity: {0}")]
    Arity(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralCandidate {
    field: Field,
    arity: usize,
    images: Vec<NcPoly>,
}

impl CentralCandidate {
    pub fn new(field: &Field, images: Vec<NcPoly>) -> Result<CentralCandidate, CentralityError> {
        let arity = images.len();
        if arity < 2 {
            return Err(CentralityError::Arity(format!("need at least two generators, got {arity}")));
        }
        // Morphism::new performs the field and arity checks.
        let m = Morphism::new(field, arity, arity, images)?;
        Ok(CentralCandidate { field: field.clone(), arity, images: m.images().to_vec() })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn images(&self) -> &[NcPoly] {
        &self.images
    }
}

/// Univariate polynomial `r(t)`, stored with arity 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateForm {
    r: NcPoly,
}

impl UnivariateForm {
    pub fn new(r: NcPoly) -> Result<UnivariateForm, CentralityError> {
        if r.arity() != 1 {
            return Err(CentralityError::Arity(format!("univariate form needs arity 1, got {}", r.arity())));
        }
        Ok(UnivariateForm { r })
    }

    /// `a_0 + a_1 t + ... + a_k t^k`
    pub fn from_coeffs(field: &Field, coeffs: &[FieldElem]) -> UnivariateForm {
        let r = coeffs.iter().enumerate().fold(NcPoly::zero(field, 1), |acc, (d, c)| {
            &acc + &NcPoly::monomial(c, 1, Word::from_letters(std::iter::repeat_n(1, d)))
        });
        UnivariateForm { r }
    }

    pub fn parse(text: &str, field: &Field) -> Result<UnivariateForm, CentralityError> {
        let r = NcPoly::parse_with(text, field, &Self::names()).map_err(MorphismError::from)?;
        Ok(UnivariateForm { r })
    }

    fn names() -> VarNames {
        VarNames::custom(["t"])
    }

    pub fn poly(&self) -> &NcPoly {
        &self.r
    }

    pub fn field(&self) -> &Field {
        self.r.field()
    }

    pub fn degree(&self) -> Option<usize> {
        self.r.degree().finite()
    }

    /// `a_0..a_k`, empty for the zero polynomial.
    pub fn coeffs(&self) -> Vec<FieldElem> {
        let k = self.degree().map_or(0, |k| k + 1);
        (0..k).map(|d| self.r.coefficient(&Word::from_letters(std::iter::repeat_n(1, d)))).collect()
    }

    pub fn is_linear(&self) -> bool {
        self.degree() == Some(1)
    }
}

impl fmt::Display for UnivariateForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.r.format_with(&Self::names()))
    }
}

fn slot_restriction(field: &Field, n: usize, keep: usize) -> Morphism {
    let images = (1..=n)
        .map(|j| if j == keep { NcPoly::var(field, n, j) } else { NcPoly::zero(field, n) })
        .collect();
    Morphism::new(field, n, n, images).expect("valid images")
}

/// Recover `r` from the generator images, or report the endomorphism that
/// fails to commute with μ.
pub fn derive_univariate(c: &CentralCandidate) -> Result<UnivariateForm, CentralityError> {
    let (field, n) = (&c.field, c.arity);
    for i in 1..=n {
        // s fixes x_i and kills the other generators; μs(x_i) = r_i, sμ(x_i) = s(r_i).
        let s = slot_restriction(field, n, i);
        let r_i = &c.images[i - 1];
        let defect = r_i - &s.apply(r_i)?;
        if !defect.is_zero() {
            return Err(CentralityError::NotCentralWitness { endomorphism: s, generator: i, defect });
        }
    }
    let to_t = Morphism::new(
        field,
        n,
        1,
        (1..=n).map(|j| if j == 1 { NcPoly::var(field, 1, 1) } else { NcPoly::zero(field, 1) }).collect(),
    )?;
    let r = UnivariateForm { r: to_t.apply(&c.images[0])? };
    for i in 2..=n {
        // s: x_1 -> x_i, other generators fixed; μs(x_1) = r_i, sμ(x_1) = r(x_i).
        let images = (1..=n).map(|j| NcPoly::var(field, n, if j == 1 { i } else { j })).collect();
        let s = Morphism::new(field, n, n, images)?;
        let defect = &c.images[i - 1] - &s.apply(&c.images[0])?;
        if !defect.is_zero() {
            return Err(CentralityError::NotCentralWitness { endomorphism: s, generator: 1, defect });
        }
    }
    Ok(r)
}

/// `r(u)`, evaluated by Horner's rule.
pub fn propagate_value(r: &UnivariateForm, u: &NcPoly) -> NcPoly {
    let coeffs = r.coeffs();
    let mut acc = NcPoly::zero(u.field(), u.arity());
    for c in coeffs.iter().rev() {
        acc = &(&acc * u) + &NcPoly::constant(c, u.arity());
    }
    acc
}

/// `r = a·t + b` with `a ≠ 0`.
pub fn assert_linear_bijection(r: &UnivariateForm) -> Result<(FieldElem, FieldElem), CentralityError> {
    match r.degree() {
        None | Some(0) => Err(CentralityError::NotBijective(NotBijectiveReason::ConstantMap)),
        Some(1) => {
            let c = r.coeffs();
            Ok((c[1].clone(), c[0].clone()))
        }
        Some(k) => Err(CentralityError::NotBijective(NotBijectiveReason::DegreeObstruction(k))),
    }
}

/// Exhaustive search for `u ∈ W(x, y)` with `deg u ≤ d` and `r(u) = x`.
pub fn surjectivity_probe(r: &UnivariateForm, field: &Field, d: usize) -> Result<bool, CentralityError> {
    let q = field.order().ok_or_else(|| ScalarError::InfiniteField(field.to_string()))?;
    if r.field() != field {
        return Err(ScalarError::FieldMismatch(r.field().to_string(), field.to_string()).into());
    }
    let words = Word::all_up_to(2, d);
    let elems = field.elements()?;
    let target = NcPoly::var(field, 2, 1);
    let mut digits = vec![0usize; words.len()];
    loop {
        let u = NcPoly::from_terms(
            field,
            2,
            words.iter().zip(&digits).filter(|(_, &i)| i != 0).map(|(w, &i)| (w.clone(), elems[i].clone())),
        );
        if propagate_value(r, &u) == target {
            return Ok(true);
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(false);
            }
            digits[pos] += 1;
            if digits[pos] as u64 == q {
                digits[pos] = 0;
                pos += 1;
            } else {
                break;
            }
        }
    }
}

/// All univariate forms of degree ≤ k over a finite field, in coefficient-digit order.
pub fn all_univariate(field: &Field, k: usize) -> Result<Vec<UnivariateForm>, CentralityError> {
    let elems = field.elements()?;
    let mut out = vec![Vec::new()];
    for _ in 0..=k {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<FieldElem>| {
                elems.iter().map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect();
    }
    Ok(out.iter().map(|c| UnivariateForm::from_coeffs(field, c)).collect())
}

/// The restriction x -> x, y -> 0 on W(x, y) followed by 20
/// random endomorphisms of image degree ≤ 2.
pub fn scan_endomorphisms(field: &Field, seed: u64) -> Vec<Morphism> {
    let mut rng = random::rng(seed);
    let mut out = vec![slot_restriction(field, 2, 1)];
    out.extend((0..20).map(|_| random::morphism(&mut rng, field, 2, 2, 2, 3)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub field: Field,
    pub max_degree: usize,
    pub probe_degree: usize,
    pub candidates: usize,
    pub endomorphisms: usize,
    /// Candidates failing the substitution-commutation sanity check.
    pub non_commuting: Vec<UnivariateForm>,
    pub survivors: Vec<UnivariateForm>,
    /// Survivors are exactly the affine forms with nonzero leading coefficient.
    pub linearity_holds: bool,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.non_commuting.is_empty() && self.linearity_holds
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field: {}", self.field)?;
        writeln!(f, "max degree: {}", self.max_degree)?;
        writeln!(f, "probe degree: {}", self.probe_degree)?;
        writeln!(f, "candidates: {}", self.candidates)?;
        writeln!(f, "endomorphisms: {}", self.endomorphisms)?;
        writeln!(f, "non-commuting: {}", self.non_commuting.len())?;
        writeln!(f, "survivors: {}", self.survivors.len())?;
        for r in &self.survivors {
            writeln!(f, "  {r}")?;
        }
        write!(f, "linear: {}", if self.linearity_holds { "pass" } else { "fail" })
    }
}

/// Exhaustive scan over univariate `r` of degree ≤ `k` acting on W(x, y).
pub fn centrality_scan(
    field: &Field,
    k: usize,
    probe_degree: usize,
    endomorphisms: &[Morphism],
) -> Result<ScanReport, CentralityError> {
    if field.order().is_none() {
        return Err(ScalarError::InfiniteField(field.to_string()).into());
    }
    for s in endomorphisms {
        if s.dom() != 2 || s.cod() != 2 || s.field() != field {
            return Err(CentralityError::Arity(format!("scan endomorphisms must act on W(x, y) over {field}")));
        }
    }
    let candidates = all_univariate(field, k)?;
    let probes: Vec<NcPoly> = ["x", "y", "x*y + 1", "y*x*y - x"]
        .iter()
        .map(|s| NcPoly::parse(s, field, 2).expect("fixed probe text"))
        .collect();
    let verdicts: Vec<(bool, bool)> = candidates
        .par_iter()
        .map(|r| -> Result<(bool, bool), CentralityError> {
            let mut commutes = true;
            for s in endomorphisms {
                for u in &probes {
                    if propagate_value(r, &s.apply(u)?) != s.apply(&propagate_value(r, u))? {
                        commutes = false;
                    }
                }
            }
            Ok((commutes, surjectivity_probe(r, field, probe_degree)?))
        })
        .collect::<Result<_, _>>()?;
    let mut non_commuting = Vec::new();
    let mut survivors = Vec::new();
    let mut linearity_holds = true;
    for (r, (commutes, surjective)) in candidates.iter().zip(verdicts) {
        if !commutes {
            non_commuting.push(r.clone());
        }
        let survives = commutes && surjective;
        if survives {
            survivors.push(r.clone());
        }
        if survives != assert_linear_bijection(r).is_ok() {
            linearity_holds = false;
        }
    }
    Ok(ScanReport {
        field: field.clone(),
        max_degree: k,
        probe_degree,
        candidates: candidates.len(),
        endomorphisms: endomorphisms.len(),
        non_commuting,
        survivors,
        linearity_holds,
    })
}

/// The inverse witness recovers every generator from the images.
pub fn base_image_check(mu: &SemiLinearMap) -> bool {
    let eta = mu.eta();
    let n = mu.arity();
    (1..=n).all(|i| {
        eta.inv().apply(eta.fwd().image(i)).is_ok_and(|p| p == NcPoly::var(mu.field(), n, i))
    })
}
