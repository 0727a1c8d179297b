use std::collections::BTreeMap;

use super::monomial::Monomial;
use super::scalar::{Scalar, ScalarField};

/// A canonical linear combination of admissible monomials, sorted by monomial
/// with no zero coefficients. Arithmetic lives on the presentation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraElement {
    pub(crate) terms: Vec<(Monomial, Scalar)>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of an exact monomial (zero if absent).
    pub fn coefficient_of(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms
            .binary_search_by(|(t, _)| t.cmp(m))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    pub(crate) fn from_sorted(terms: Vec<(Monomial, Scalar)>) -> Self {
        Self { terms }
    }
}

/// Accumulator for building canonical elements.
pub(crate) struct Acc<'a> {
    field: &'a ScalarField,
    map: BTreeMap<Monomial, Scalar>,
}

impl<'a> Acc<'a> {
    pub fn new(field: &'a ScalarField) -> Self {
        Self { field, map: BTreeMap::new() }
    }

    pub fn add(&mut self, m: Monomial, c: Scalar) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.map.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &c);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn finish(self) -> AlgebraElement {
        AlgebraElement { terms: self.map.into_iter().collect() }
    }
}
