#![allow(dead_code)]

use ncalg::{Field, FieldElem, NcPoly, Word};
use proptest::prelude::*;

pub fn fields() -> Vec<Field> {
    vec![
        Field::rationals(),
        Field::prime(2).unwrap(),
        Field::prime(5).unwrap(),
        Field::gf(4).unwrap(),
        Field::gf(8).unwrap(),
        Field::gf(9).unwrap(),
    ]
}

pub fn field_strategy() -> impl Strategy<Value = Field> {
    prop::sample::select(fields())
}

/// Rationals as small fractions, finite fields uniformly.
pub fn elem(field: &Field) -> BoxedStrategy<FieldElem> {
    match field.order() {
        Some(q) => {
            let f = field.clone();
            (0..q).prop_map(move |i| f.elements().unwrap()[i as usize].clone()).boxed()
        }
        None => {
            let f = field.clone();
            (-9i64..=9, 1i64..=4).prop_map(move |(n, d)| f.from_i64(n).try_div(&f.from_i64(d)).unwrap()).boxed()
        }
    }
}

pub fn poly(field: &Field, arity: usize, max_degree: usize, max_terms: usize) -> BoxedStrategy<NcPoly> {
    let f = field.clone();
    let term = (prop::collection::vec(1..=arity, 0..=max_degree), elem(field));
    prop::collection::vec(term, 0..=max_terms)
        .prop_map(move |terms| NcPoly::from_terms(&f, arity, terms.into_iter().map(|(w, c)| (Word::from_letters(w), c))))
        .boxed()
}

/// A field together with polynomials over it.
pub fn field_and_polys(n: usize, arity: usize, max_degree: usize, max_terms: usize) -> BoxedStrategy<(Field, Vec<NcPoly>)> {
    field_strategy()
        .prop_flat_map(move |f| {
            let ps = prop::collection::vec(poly(&f, arity, max_degree, max_terms), n);
            (Just(f), ps)
        })
        .boxed()
}
