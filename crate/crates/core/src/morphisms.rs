//! Algebra homomorphisms W_n -> W_m given by generator images, automorphisms
//! carrying inverse witnesses, and semilinear candidate maps.
//!
//! A [`SemiLinearMap`] is stored in the factored form `η ∘ β^ε ∘ ᾱ`: first the
//! field automorphism acts on coefficients, then the mirror (if ε = 1), then
//! the automorphism η.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use thiserror::Error;

use crate::freealg::{AlgebraError, NcPoly, VarNames, Word};
use crate::linalg::{self, SpanBasis};
use crate::scalars::{Field, FieldAut, FieldElem, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("not an inverse pair: {0}")]
    NotInverse(String),
    #[error("matrix is singular")]
    Singular,
    #[error("tail for x{0} may not involve x{0}")]
    TailInvolvesVariable(usize),
    #[error("kernel probe needs at least {needed} field elements, {field} has {have}")]
    FieldTooSmall { field: String, needed: u64, have: u64 },
}

/// Unital algebra homomorphism `x_i -> images[i-1]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    field: Field,
    dom: usize,
    cod: usize,
    images: Vec<NcPoly>,
}

impl Morphism {
    pub fn new(field: &Field, dom: usize, cod: usize, images: Vec<NcPoly>) -> Result<Morphism, MorphismError> {
        if dom == 0 || cod == 0 {
            return Err(MorphismError::ArityMismatch("arities must be at least 1".into()));
        }
        if images.len() != dom {
            return Err(MorphismError::ArityMismatch(format!(
                "{} images given for {dom} generators",
                images.len()
            )));
        }
        let target = NcPoly::zero(field, cod);
        for img in &images {
            target.check(img)?;
        }
        Ok(Morphism { field: field.clone(), dom, cod, images })
    }

    /// Parse images written in the codomain's variables.
    pub fn parse(field: &Field, cod: usize, images: &[&str]) -> Result<Morphism, MorphismError> {
        let imgs = images.iter().map(|s| NcPoly::parse(s, field, cod)).collect::<Result<Vec<_>, _>>()?;
        Morphism::new(field, images.len(), cod, imgs)
    }

    pub fn identity(field: &Field, n: usize) -> Morphism {
        let images = (1..=n).map(|i| NcPoly::var(field, n, i)).collect();
        Morphism { field: field.clone(), dom: n, cod: n, images }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn images(&self) -> &[NcPoly] {
        &self.images
    }

    /// Image of `x_i`, 1-based.
    pub fn image(&self, i: usize) -> &NcPoly {
        &self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod
            && self.images.iter().enumerate().all(|(i, p)| *p == NcPoly::var(&self.field, self.cod, i + 1))
    }

    pub fn apply_word(&self, w: &Word) -> NcPoly {
        let mut acc = NcPoly::one(&self.field, self.cod);
        for i in w.letters() {
            acc = &acc * &self.images[i - 1];
        }
        acc
    }

    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly, MorphismError> {
        NcPoly::zero(&self.field, self.dom).check(p)?;
        let mut out = NcPoly::zero(&self.field, self.cod);
        for (w, c) in p.raw_terms() {
            out = &out + &self.apply_word(w).scale_s(c);
        }
        Ok(out)
    }

    /// Coefficient twist: images with `alpha` applied to their coefficients.
    pub fn map_coefficients(&self, alpha: &FieldAut) -> Morphism {
        let images = self.images.iter().map(|p| p.map_coefficients(alpha)).collect();
        Morphism { images, ..self.clone() }
    }

    /// β ∘ self ∘ β, which is again a homomorphism.
    pub fn mirror_conjugate(&self) -> Morphism {
        let images = self.images.iter().map(NcPoly::mirror).collect();
        Morphism { images, ..self.clone() }
    }

    pub fn format_images(&self) -> Vec<String> {
        let names = VarNames::canonical(self.dom);
        self.images
            .iter()
            .enumerate()
            .map(|(i, p)| format!("{} -> {}", names.name(i + 1), p))
            .collect()
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism[W{} -> W{}]({})", self.dom, self.cod, self.format_images().join(", "))
    }
}

/// `t ∘ s`: first `s`, then `t`.
pub fn compose(t: &Morphism, s: &Morphism) -> Result<Morphism, MorphismError> {
    if s.cod != t.dom {
        return Err(MorphismError::ArityMismatch(format!(
            "cannot compose W{} -> W{} after W{} -> W{}",
            t.dom, t.cod, s.dom, s.cod
        )));
    }
    if s.field != t.field {
        return Err(ScalarError::FieldMismatch(t.field.to_string(), s.field.to_string()).into());
    }
    let images = s.images.iter().map(|p| t.apply(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(Morphism { field: s.field.clone(), dom: s.dom, cod: t.cod, images })
}

/// An automorphism of W_n together with its inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct AutWitness {
    fwd: Morphism,
    inv: Morphism,
}

impl AutWitness {
    /// Checks that both compositions are the identity.
    pub fn new(fwd: Morphism, inv: Morphism) -> Result<AutWitness, MorphismError> {
        if fwd.dom != fwd.cod || inv.dom != inv.cod || fwd.dom != inv.dom {
            return Err(MorphismError::ArityMismatch("witness maps must be endomorphisms of one W_n".into()));
        }
        if !compose(&inv, &fwd)?.is_identity() {
            return Err(MorphismError::NotInverse("inv ∘ fwd is not the identity".into()));
        }
        if !compose(&fwd, &inv)?.is_identity() {
            return Err(MorphismError::NotInverse("fwd ∘ inv is not the identity".into()));
        }
        Ok(AutWitness { fwd, inv })
    }

    pub fn identity(field: &Field, n: usize) -> AutWitness {
        let id = Morphism::identity(field, n);
        AutWitness { fwd: id.clone(), inv: id }
    }

    /// `x_i -> Σ_j m[i][j] x_j + shift[i]` with `m` invertible.
    pub fn affine(field: &Field, matrix: &[Vec<FieldElem>], shift: &[FieldElem]) -> Result<AutWitness, MorphismError> {
        let n = matrix.len();
        if n == 0 || shift.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(MorphismError::ArityMismatch("affine data must be n x n plus n shifts".into()));
        }
        for c in matrix.iter().flatten().chain(shift) {
            if c.field() != field {
                return Err(ScalarError::FieldMismatch(field.to_string(), c.field().to_string()).into());
            }
        }
        let raw: Vec<Vec<_>> = matrix.iter().map(|r| r.iter().map(|c| c.value.clone()).collect()).collect();
        let inv_m = linalg::invert(field, &raw).ok_or(MorphismError::Singular)?;
        let affine_images = |m: &[Vec<Scalar>], b: &[Scalar]| -> Vec<NcPoly> {
            (0..n)
                .map(|i| {
                    let mut p = NcPoly::zero(field, n);
                    p.add_term(Word::empty(), b[i].clone());
                    for (j, c) in m[i].iter().enumerate() {
                        p.add_term(Word::letter(j + 1), c.clone());
                    }
                    p
                })
                .collect()
        };
        let b: Vec<_> = shift.iter().map(|c| c.value.clone()).collect();
        // inverse: x -> M^{-1} x - M^{-1} b
        let inv_b: Vec<_> = (0..n)
            .map(|i| {
                let s = (0..n).fold(field.zero_s(), |acc, j| field.add_s(&acc, &field.mul_s(&inv_m[i][j], &b[j])));
                field.neg_s(&s)
            })
            .collect();
        let fwd = Morphism { field: field.clone(), dom: n, cod: n, images: affine_images(&raw, &b) };
        let inv = Morphism { field: field.clone(), dom: n, cod: n, images: affine_images(&inv_m, &inv_b) };
        AutWitness::new(fwd, inv)
    }

    /// Triangular map `x_i -> a_i x_i + f_i(x_{i+1}, ..., x_n)` with every `a_i != 0`.
    pub fn triangular(field: &Field, scales: &[FieldElem], tails: &[NcPoly]) -> Result<AutWitness, MorphismError> {
        let n = scales.len();
        if n == 0 || tails.len() != n {
            return Err(MorphismError::ArityMismatch("need one scale and one tail per generator".into()));
        }
        let zero = NcPoly::zero(field, n);
        for (i, f) in tails.iter().enumerate() {
            zero.check(f)?;
            if f.words().any(|w| w.letters().any(|l| l <= i + 1)) {
                return Err(MorphismError::TailInvolvesVariable(i + 1));
            }
        }
        let fwd_images: Vec<NcPoly> = (0..n)
            .map(|i| {
                let xi = NcPoly::var(field, n, i + 1).scale_s(&scales[i].value);
                &xi + &tails[i]
            })
            .collect();
        // Solve from the last generator up: ψ(x_i) = a_i^{-1}(x_i - f_i(ψ(x_{i+1}), ...)).
        let mut inv_images = vec![NcPoly::zero(field, n); n];
        for i in (0..n).rev() {
            let partial: Vec<NcPoly> = (0..n)
                .map(|j| if j > i { inv_images[j].clone() } else { NcPoly::var(field, n, j + 1) })
                .collect();
            let sub = Morphism { field: field.clone(), dom: n, cod: n, images: partial };
            let f_sub = sub.apply(&tails[i])?;
            let a_inv = scales[i].inv()?;
            inv_images[i] = (&NcPoly::var(field, n, i + 1) - &f_sub).scale_s(&a_inv.value);
        }
        let fwd = Morphism { field: field.clone(), dom: n, cod: n, images: fwd_images };
        let inv = Morphism { field: field.clone(), dom: n, cod: n, images: inv_images };
        AutWitness::new(fwd, inv)
    }

    /// Elementary map `x_i -> x_i + f` with `f` free of `x_i`, other generators fixed.
    pub fn elementary(field: &Field, n: usize, i: usize, f: &NcPoly) -> Result<AutWitness, MorphismError> {
        NcPoly::zero(field, n).check(f)?;
        if !(1..=n).contains(&i) {
            return Err(MorphismError::ArityMismatch(format!("x{i} is not a generator of W{n}")));
        }
        if f.words().any(|w| w.letters().any(|l| l == i)) {
            return Err(MorphismError::TailInvolvesVariable(i));
        }
        let mut fwd = Morphism::identity(field, n);
        let mut inv = Morphism::identity(field, n);
        fwd.images[i - 1] = &fwd.images[i - 1] + f;
        inv.images[i - 1] = &inv.images[i - 1] - f;
        AutWitness::new(fwd, inv)
    }

    pub fn fwd(&self) -> &Morphism {
        &self.fwd
    }

    pub fn inv(&self) -> &Morphism {
        &self.inv
    }

    pub fn arity(&self) -> usize {
        self.fwd.dom
    }

    pub fn field(&self) -> &Field {
        &self.fwd.field
    }

    pub fn inverse(&self) -> AutWitness {
        AutWitness { fwd: self.inv.clone(), inv: self.fwd.clone() }
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &AutWitness) -> Result<AutWitness, MorphismError> {
        Ok(AutWitness { fwd: compose(&next.fwd, &self.fwd)?, inv: compose(&self.inv, &next.inv)? })
    }

    /// Conjugation by a coefficient twist and optional mirror: `c ∘ η ∘ c⁻¹`
    /// with `c = ᾱ ∘ β^ε`. The result is again an automorphism.
    pub fn conjugate(&self, alpha: &FieldAut, mirror: bool) -> AutWitness {
        let twist = |m: &Morphism| {
            let m = if mirror { m.mirror_conjugate() } else { m.clone() };
            m.map_coefficients(alpha)
        };
        AutWitness { fwd: twist(&self.fwd), inv: twist(&self.inv) }
    }
}

impl fmt::Debug for AutWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AutWitness {{ fwd: {:?}, inv: {:?} }}", self.fwd, self.inv)
    }
}

/// Candidate bijection `μ = η ∘ β^ε ∘ ᾱ` of W_n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemiLinearMap {
    alpha: FieldAut,
    mirror: bool,
    eta: AutWitness,
}

impl SemiLinearMap {
    pub fn new(alpha: FieldAut, mirror: bool, eta: AutWitness) -> Result<SemiLinearMap, MorphismError> {
        if alpha.field() != eta.field() {
            return Err(ScalarError::FieldMismatch(alpha.field().to_string(), eta.field().to_string()).into());
        }
        Ok(SemiLinearMap { alpha, mirror, eta })
    }

    pub fn identity(field: &Field, n: usize) -> SemiLinearMap {
        SemiLinearMap { alpha: FieldAut::identity(field), mirror: false, eta: AutWitness::identity(field, n) }
    }

    pub fn pure_mirror(field: &Field, n: usize) -> SemiLinearMap {
        SemiLinearMap { mirror: true, ..SemiLinearMap::identity(field, n) }
    }

    pub fn inner(eta: AutWitness) -> SemiLinearMap {
        SemiLinearMap { alpha: FieldAut::identity(eta.field()), mirror: false, eta }
    }

    pub fn field(&self) -> &Field {
        self.eta.field()
    }

    pub fn arity(&self) -> usize {
        self.eta.arity()
    }

    pub fn alpha(&self) -> &FieldAut {
        &self.alpha
    }

    pub fn is_mirror(&self) -> bool {
        self.mirror
    }

    pub fn eta(&self) -> &AutWitness {
        &self.eta
    }

    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly, MorphismError> {
        NcPoly::zero(self.field(), self.arity()).check(p)?;
        let twisted = p.map_coefficients(&self.alpha);
        let reflected = if self.mirror { twisted.mirror() } else { twisted };
        self.eta.fwd.apply(&reflected)
    }

    /// `μ⁻¹ = ᾱ⁻¹ ∘ β^ε ∘ η⁻¹`, rewritten into the factored order.
    pub fn inverse(&self) -> SemiLinearMap {
        let alpha_inv = self.alpha.inverse();
        SemiLinearMap {
            eta: self.eta.inverse().conjugate(&alpha_inv, self.mirror),
            mirror: self.mirror,
            alpha: alpha_inv,
        }
    }

    /// The same map in twisted-morphism form.
    pub fn as_twisted(&self) -> TwistedMorphism {
        TwistedMorphism::new(self.alpha.clone(), self.mirror, self.eta.fwd.clone())
    }
}

pub fn apply_semilinear(mu: &SemiLinearMap, p: &NcPoly) -> Result<NcPoly, MorphismError> {
    mu.apply(p)
}

pub fn invert_semilinear(mu: &SemiLinearMap) -> SemiLinearMap {
    mu.inverse()
}

/// The map `p -> φ(β^ε(ᾱ(p)))` for a homomorphism φ: W_n -> W_m.
///
/// Conjugates `μ_j s μ_i⁻¹` land in this form. It is an algebra homomorphism
/// exactly when [`TwistedMorphism::is_homomorphism`] holds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistedMorphism {
    alpha: FieldAut,
    mirror: bool,
    morphism: Morphism,
}

impl TwistedMorphism {
    pub fn new(alpha: FieldAut, mirror: bool, morphism: Morphism) -> TwistedMorphism {
        // The mirror of W_1 is the identity.
        let mirror = mirror && morphism.dom > 1;
        TwistedMorphism { alpha, mirror, morphism }
    }

    pub fn from_morphism(s: &Morphism) -> TwistedMorphism {
        TwistedMorphism::new(FieldAut::identity(s.field()), false, s.clone())
    }

    pub fn alpha(&self) -> &FieldAut {
        &self.alpha
    }

    pub fn is_mirror(&self) -> bool {
        self.mirror
    }

    /// Generator images.
    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly, MorphismError> {
        NcPoly::zero(self.morphism.field(), self.morphism.dom).check(p)?;
        let twisted = p.map_coefficients(&self.alpha);
        let reflected = if self.mirror { twisted.mirror() } else { twisted };
        self.morphism.apply(&reflected)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TwistedMorphism) -> Result<TwistedMorphism, MorphismError> {
        if other.morphism.cod != self.morphism.dom {
            return Err(MorphismError::ArityMismatch(format!(
                "cannot compose W{} -> W{} after W{} -> W{}",
                self.morphism.dom, self.morphism.cod, other.morphism.dom, other.morphism.cod
            )));
        }
        let images = other.morphism.images.iter().map(|p| self.apply(p)).collect::<Result<Vec<_>, _>>()?;
        let morphism = Morphism::new(self.morphism.field(), other.morphism.dom, self.morphism.cod, images)?;
        Ok(TwistedMorphism::new(self.alpha.compose(&other.alpha)?, self.mirror != other.mirror, morphism))
    }

    /// Linear and multiplicative: no coefficient twist, and either no mirror
    /// or pairwise commuting generator images.
    pub fn is_homomorphism(&self) -> bool {
        if !self.alpha.is_identity() {
            return false;
        }
        !self.mirror || self.images_commute()
    }

    fn images_commute(&self) -> bool {
        let imgs = &self.morphism.images;
        (0..imgs.len()).all(|i| (i + 1..imgs.len()).all(|j| &imgs[i] * &imgs[j] == &imgs[j] * &imgs[i]))
    }

    pub fn as_morphism(&self) -> Option<&Morphism> {
        self.is_homomorphism().then_some(&self.morphism)
    }

    /// Equality as maps: both are semilinear and (anti)multiplicative, so
    /// they agree everywhere iff they agree on scalars and on words of
    /// degree at most 2.
    pub fn same_map(&self, other: &TwistedMorphism) -> bool {
        let (a, b) = (&self.morphism, &other.morphism);
        if a.dom != b.dom || a.cod != b.cod || a.field != b.field || self.alpha != other.alpha {
            return false;
        }
        if a.images != b.images {
            return false;
        }
        if self.mirror == other.mirror {
            return true;
        }
        Word::all_up_to(a.dom, 2).iter().all(|w| {
            let p = NcPoly::word(&a.field, a.dom, w.clone());
            self.apply(&p).ok() == other.apply(&p).ok()
        })
    }
}

/// `s^τ = μ_j ∘ s ∘ μ_i⁻¹` for `s: W_i -> W_j`, materialized on generators.
pub fn conjugate_morphism(
    s: &Morphism,
    mu_i: &SemiLinearMap,
    mu_j: &SemiLinearMap,
) -> Result<TwistedMorphism, MorphismError> {
    if mu_i.arity() != s.dom || mu_j.arity() != s.cod {
        return Err(MorphismError::ArityMismatch(format!(
            "s: W{} -> W{} conjugated by maps of arity {} and {}",
            s.dom,
            s.cod,
            mu_i.arity(),
            mu_j.arity()
        )));
    }
    let mu_i_inv = mu_i.inverse();
    let images = (1..=s.dom)
        .map(|k| {
            let back = mu_i_inv.apply(&NcPoly::var(s.field(), s.dom, k))?;
            mu_j.apply(&s.apply(&back)?)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let morphism = Morphism::new(s.field(), s.dom, s.cod, images)?;
    let alpha = mu_j.alpha().compose(&mu_i.alpha().inverse())?;
    let out = TwistedMorphism::new(alpha, mu_i.is_mirror() != mu_j.is_mirror(), morphism);
    if mu_i.alpha() == mu_j.alpha() && mu_i.is_mirror() == mu_j.is_mirror() {
        assert!(out.is_homomorphism(), "conjugate by a uniform family must be a homomorphism");
    }
    Ok(out)
}

/// Membership in the two-sided ideal generated by all `x_i x_j - x_j x_i`.
pub fn commutator_ideal_member(p: &NcPoly) -> bool {
    p.abelianize().is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome {
    AllKilled,
    /// A morphism `W_2 -> W_1` with `s(p) != 0`.
    Witness(Morphism),
}

fn univariate_from_digits(field: &Field, elems: &[FieldElem], mut index: u64, deg: usize) -> NcPoly {
    let q = elems.len() as u64;
    let mut p = NcPoly::zero(field, 1);
    for d in 0..=deg {
        let c = &elems[(index % q) as usize];
        index /= q;
        p.add_term(Word::from_letters(std::iter::repeat_n(1, d)), c.value.clone());
    }
    p
}

/// Randomized search for `s: W_2 -> W_1` with `s(p) != 0`, images of degree
/// at most `deg_cap`. Deterministic for a given seed.
pub fn kernel_intersection_probe(
    p: &NcPoly,
    trials: usize,
    deg_cap: usize,
    seed: u64,
) -> Result<ProbeOutcome, MorphismError> {
    if p.arity() != 2 {
        return Err(MorphismError::ArityMismatch(format!("kernel probe needs arity 2, got {}", p.arity())));
    }
    let field = p.field();
    if let Some(have) = field.order() {
        let deg = p.degree().finite().unwrap_or(0) as u64;
        let needed = (deg_cap as u64 * deg + 1).max(8);
        if have < needed {
            return Err(MorphismError::FieldTooSmall { field: field.to_string(), needed, have });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let images = (0..2).map(|_| random_univariate(&mut rng, field, deg_cap)).collect();
        let s = Morphism { field: field.clone(), dom: 2, cod: 1, images };
        if !s.apply(p)?.is_zero() {
            return Ok(ProbeOutcome::Witness(s));
        }
    }
    Ok(ProbeOutcome::AllKilled)
}

/// Dense random univariate polynomial of degree at most `deg`. Rational
/// coefficients are small integers in -4..=4.
pub(crate) fn random_univariate(rng: &mut ChaCha8Rng, field: &Field, deg: usize) -> NcPoly {
    let mut p = NcPoly::zero(field, 1);
    for d in 0..=deg {
        let c = match field.order() {
            Some(q) => Scalar::Fin(rng.gen_range(0..q)),
            None => field.from_i64(rng.gen_range(-4..=4)).value,
        };
        p.add_term(Word::from_letters(std::iter::repeat_n(1, d)), c);
    }
    p
}

/// All morphisms `W_2 -> W_1` over a finite field with image degree at most
/// `deg_cap`, with word images cached for repeated probing.
pub struct KernelProbeBank {
    field: Field,
    morphisms: Vec<Morphism>,
    cache: Vec<HashMap<Word, NcPoly>>,
}

impl KernelProbeBank {
    pub fn exhaustive(field: &Field, deg_cap: usize) -> Result<KernelProbeBank, MorphismError> {
        let elems = field.elements()?;
        let per_image = (elems.len() as u64).pow(deg_cap as u32 + 1);
        let mut morphisms = Vec::with_capacity((per_image * per_image) as usize);
        for i in 0..per_image {
            for j in 0..per_image {
                let images = vec![
                    univariate_from_digits(field, &elems, i, deg_cap),
                    univariate_from_digits(field, &elems, j, deg_cap),
                ];
                morphisms.push(Morphism { field: field.clone(), dom: 2, cod: 1, images });
            }
        }
        let cache = vec![HashMap::new(); morphisms.len()];
        Ok(KernelProbeBank { field: field.clone(), morphisms, cache })
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    pub fn probe(&mut self, p: &NcPoly) -> Result<ProbeOutcome, MorphismError> {
        NcPoly::zero(&self.field, 2).check(p)?;
        for (m, cache) in self.morphisms.iter().zip(self.cache.iter_mut()) {
            let mut out = NcPoly::zero(&self.field, 1);
            for (w, c) in p.raw_terms() {
                let img = cache.entry(w.clone()).or_insert_with(|| m.apply_word(w));
                out = &out + &img.scale_s(c);
            }
            if !out.is_zero() {
                return Ok(ProbeOutcome::Witness(m.clone()));
            }
        }
        Ok(ProbeOutcome::AllKilled)
    }
}

/// Exhaustive probe over every morphism with image degree at most `deg_cap`.
pub fn kernel_intersection_probe_exhaustive(p: &NcPoly, deg_cap: usize) -> Result<ProbeOutcome, MorphismError> {
    KernelProbeBank::exhaustive(p.field(), deg_cap)?.probe(p)
}

/// Whether `target` lies in the span of all products of `generators` of
/// degree at most `max_degree` (including the unit). Generators must be
/// nonconstant; the check is exact up to the degree bound.
pub fn subalgebra_contains(generators: &[NcPoly], target: &NcPoly, max_degree: usize) -> Result<bool, MorphismError> {
    let unit = NcPoly::one(target.field(), target.arity());
    for g in generators {
        unit.check(g)?;
        if g.degree().finite().unwrap_or(0) == 0 {
            return Err(MorphismError::ArityMismatch("generators must be nonconstant".into()));
        }
    }
    let mut basis = SpanBasis::new();
    basis.insert(&unit);
    let mut layer = vec![unit];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for p in &layer {
            for g in generators {
                let prod = p * g;
                if prod.degree().finite().unwrap_or(0) <= max_degree {
                    basis.insert(&prod);
                    next.push(prod);
                }
            }
        }
        layer = next;
    }
    debug_assert!(basis.len() > 0);
    Ok(basis.contains(target))
}
