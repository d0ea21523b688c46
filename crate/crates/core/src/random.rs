//! Seed-deterministic generators for test data: scalars, polynomials,
//! morphisms and automorphisms with inverse witnesses.
//!
//! Rational coefficients are kept small so that substitution stays cheap.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::freealg::{NcPoly, Word};
use crate::morphisms::{AutWitness, Morphism, SemiLinearMap};
use crate::scalars::{Field, FieldAut, FieldElem, Scalar};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over a finite field; over Q an integer in -3..=3 or a half-integer.
pub fn scalar(rng: &mut TestRng, field: &Field) -> FieldElem {
    match field.order() {
        Some(q) => field.elem(Scalar::Fin(rng.gen_range(0..q))),
        None => {
            let n = field.from_i64(rng.gen_range(-3..=3));
            if rng.gen_bool(0.2) {
                n.try_div(&field.from_i64(2)).expect("2 is invertible in Q")
            } else {
                n
            }
        }
    }
}

pub fn nonzero_scalar(rng: &mut TestRng, field: &Field) -> FieldElem {
    loop {
        let c = scalar(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn word(rng: &mut TestRng, arity: usize, max_degree: usize) -> Word {
    let len = rng.gen_range(0..=max_degree);
    Word::from_letters((0..len).map(|_| rng.gen_range(1..=arity)))
}

/// Up to `max_terms` random terms of degree at most `max_degree`.
pub fn poly(rng: &mut TestRng, field: &Field, arity: usize, max_degree: usize, max_terms: usize) -> NcPoly {
    let n = rng.gen_range(0..=max_terms);
    let mut p = NcPoly::zero(field, arity);
    for _ in 0..n {
        let w = word(rng, arity, max_degree);
        p = &p + &NcPoly::monomial(&nonzero_scalar(rng, field), arity, w);
    }
    p
}

/// Random univariate polynomial (arity 1) of degree at most `degree`.
pub fn univariate(rng: &mut TestRng, field: &Field, degree: usize) -> NcPoly {
    let mut p = NcPoly::zero(field, 1);
    for d in 0..=degree {
        let c = scalar(rng, field);
        p = &p + &NcPoly::monomial(&c, 1, Word::from_letters(std::iter::repeat_n(1, d)));
    }
    p
}

pub fn morphism(rng: &mut TestRng, field: &Field, dom: usize, cod: usize, max_degree: usize, max_terms: usize) -> Morphism {
    let images = (0..dom).map(|_| poly(rng, field, cod, max_degree, max_terms)).collect();
    Morphism::new(field, dom, cod, images).expect("images live in the codomain")
}

pub fn field_aut(rng: &mut TestRng, field: &Field) -> FieldAut {
    FieldAut::new(field, rng.gen_range(0..field.degree())).expect("exponent below degree")
}

/// Random invertible affine map `x -> Mx + b`.
pub fn affine_automorphism(rng: &mut TestRng, field: &Field, n: usize) -> AutWitness {
    loop {
        let m: Vec<Vec<FieldElem>> = (0..n).map(|_| (0..n).map(|_| scalar(rng, field)).collect()).collect();
        let b: Vec<FieldElem> = (0..n).map(|_| scalar(rng, field)).collect();
        if let Ok(w) = AutWitness::affine(field, &m, &b) {
            return w;
        }
    }
}

/// Triangular map with one or two terms per tail, tail degree at most `tail_degree`.
pub fn triangular_automorphism(rng: &mut TestRng, field: &Field, n: usize, tail_degree: usize) -> AutWitness {
    let scales: Vec<FieldElem> = (0..n).map(|_| nonzero_scalar(rng, field)).collect();
    let tails: Vec<NcPoly> = (0..n)
        .map(|i| {
            let later = n - i - 1;
            let mut f = NcPoly::zero(field, n);
            if later == 0 {
                return f;
            }
            for _ in 0..rng.gen_range(1..=2) {
                let len = rng.gen_range(0..=tail_degree);
                let w = Word::from_letters((0..len).map(|_| rng.gen_range(i + 2..=n)));
                f = &f + &NcPoly::monomial(&scalar(rng, field), n, w);
            }
            f
        })
        .collect();
    AutWitness::triangular(field, &scales, &tails).expect("triangular data is valid")
}

/// Generator permutation.
pub fn permutation_automorphism(rng: &mut TestRng, field: &Field, n: usize) -> AutWitness {
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(rng);
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p - 1] = i + 1;
    }
    let images = |perm: &[usize]| perm.iter().map(|&j| NcPoly::var(field, n, j)).collect::<Vec<_>>();
    let fwd = Morphism::new(field, n, n, images(&perm)).expect("valid images");
    let back = Morphism::new(field, n, n, images(&inv)).expect("valid images");
    AutWitness::new(fwd, back).expect("permutations are invertible")
}

/// A short product of elementary, triangular, affine and permutation
/// automorphisms, with generator images of degree at most 2.
pub fn automorphism(rng: &mut TestRng, field: &Field, n: usize) -> AutWitness {
    if n == 1 {
        return affine_automorphism(rng, field, 1);
    }
    let pick = rng.gen_range(0..5);
    let tri = triangular_automorphism(rng, field, n, 2);
    match pick {
        0 => affine_automorphism(rng, field, n),
        1 => tri,
        2 => permutation_automorphism(rng, field, n).then(&tri).expect("same arity"),
        3 => tri.then(&affine_automorphism(rng, field, n)).expect("same arity"),
        _ => affine_automorphism(rng, field, n).then(&tri).expect("same arity"),
    }
}

/// An affine automorphism, or an elementary one `x_i -> x_i + f` with `f`
/// of degree ≤ 2 in the other generators.
pub fn elementary_or_affine(rng: &mut TestRng, field: &Field, n: usize) -> AutWitness {
    if n == 1 || rng.gen_bool(0.5) {
        return affine_automorphism(rng, field, n);
    }
    let i = rng.gen_range(1..=n);
    let others: Vec<usize> = (1..=n).filter(|&j| j != i).collect();
    let mut f = NcPoly::zero(field, n);
    for _ in 0..rng.gen_range(1..=2) {
        let len = rng.gen_range(0..=2);
        let w = Word::from_letters((0..len).map(|_| others[rng.gen_range(0..others.len())]));
        f = &f + &NcPoly::monomial(&nonzero_scalar(rng, field), n, w);
    }
    AutWitness::elementary(field, n, i, &f).expect("tail avoids x_i")
}

/// `η ∘ β^ε ∘ ᾱ` with `η` from [`elementary_or_affine`].
pub fn semilinear(rng: &mut TestRng, field: &Field, n: usize, alpha: FieldAut, mirror: bool) -> SemiLinearMap {
    SemiLinearMap::new(alpha, mirror, elementary_or_affine(rng, field, n)).expect("same field")
}

/// Like [`semilinear`], with `η` from the wider mix of [`automorphism`].
pub fn semilinear_mixed(rng: &mut TestRng, field: &Field, n: usize, alpha: FieldAut, mirror: bool) -> SemiLinearMap {
    SemiLinearMap::new(alpha, mirror, automorphism(rng, field, n)).expect("same field")
}
