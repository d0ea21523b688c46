// Exact linear algebra over a Field: dense matrix inversion and an
// incremental echelon basis for span membership of polynomials.

use std::collections::BTreeMap;

use crate::freealg::{NcPoly, Word};
use crate::scalars::{Field, Scalar};

/// Gauss-Jordan inverse; `None` if singular.
pub(crate) fn invert(field: &Field, m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one_s() } else { field.zero_s() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !Field::is_zero_s(&a[r][col]))?;
        a.swap(col, piv);
        let inv = field.inv_s(&a[col][col]).expect("pivot is nonzero");
        for v in a[col].iter_mut() {
            *v = field.mul_s(v, &inv);
        }
        for r in 0..n {
            if r == col || Field::is_zero_s(&a[r][col]) {
                continue;
            }
            let factor = a[r][col].clone();
            let pivot_row = a[col].clone();
            for (v, p) in a[r].iter_mut().zip(&pivot_row) {
                *v = field.sub_s(v, &field.mul_s(&factor, p));
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Echelon basis keyed by leading (largest) word.
pub(crate) struct SpanBasis {
    rows: BTreeMap<Word, NcPoly>,
}

impl SpanBasis {
    pub(crate) fn new() -> SpanBasis {
        SpanBasis { rows: BTreeMap::new() }
    }

    pub(crate) fn len(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn reduce(&self, p: &NcPoly) -> NcPoly {
        let mut r = p.clone();
        loop {
            let hit = r
                .raw_terms()
                .iter()
                .rev()
                .find(|(w, _)| self.rows.contains_key(*w))
                .map(|(w, c)| (w.clone(), c.clone()));
            match hit {
                None => return r,
                Some((w, c)) => r = &r - &self.rows[&w].scale_s(&c),
            }
        }
    }

    /// Adds `p` to the span; returns false if it was already in it.
    pub(crate) fn insert(&mut self, p: &NcPoly) -> bool {
        let r = self.reduce(p);
        let Some((lead, c)) = r.raw_terms().iter().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
            return false;
        };
        let inv = r.field().inv_s(&c).expect("nonzero leading coefficient");
        self.rows.insert(lead, r.scale_s(&inv));
        true
    }

    pub(crate) fn contains(&self, p: &NcPoly) -> bool {
        self.reduce(p).is_zero()
    }
}
