use std::collections::HashMap;
use std::sync::Arc;

use super::element::{Acc, AlgebraElement};
use super::monomial::Monomial;
use super::presentation::AlgebraPresentation;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A `K(n)_*`-algebra map given by generator images.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    source: Arc<AlgebraPresentation>,
    target: Arc<AlgebraPresentation>,
    images: Vec<AlgebraElement>,
}

impl AlgebraHom {
    /// Checks degrees and that every relation of the source maps to zero.
    pub fn new(
        source: Arc<AlgebraPresentation>,
        target: Arc<AlgebraPresentation>,
        images: Vec<AlgebraElement>,
    ) -> Result<Self> {
        let h = Self::new_unchecked(source, target, images)?;
        for (i, g) in h.source.generators().iter().enumerate() {
            if !h.target.is_homogeneous_of(&h.images[i], g.degree) {
                return Err(Error::DegreeMismatch {
                    expected: g.degree,
                    found: h.target.degree_of(&h.images[i])?.unwrap_or(g.degree),
                });
            }
        }
        if let Some(w) = h.relation_failure() {
            return Err(Error::RelationNotPreserved(w));
        }
        Ok(h)
    }

    /// Skips the relation check (used for maps known to be well defined, and
    /// for negative controls).
    pub fn new_unchecked(
        source: Arc<AlgebraPresentation>,
        target: Arc<AlgebraPresentation>,
        images: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::ContextMismatch(format!(
                "{} images for {} generators",
                images.len(),
                source.ngens()
            )));
        }
        if source.field() != target.field() || source.height() != target.height() {
            return Err(Error::ContextMismatch("source and target over different rings".into()));
        }
        Ok(Self { source, target, images })
    }

    pub fn source(&self) -> &Arc<AlgebraPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraPresentation> {
        &self.target
    }

    pub fn images(&self) -> &[AlgebraElement] {
        &self.images
    }

    pub fn image(&self, g: usize) -> &AlgebraElement {
        &self.images[g]
    }

    /// First relation (rendered) that does not map to zero.
    pub fn relation_failure(&self) -> Option<String> {
        let t = &self.target;
        for r in self.source.rules() {
            let lhs = t.pow(&self.images[r.gen], r.threshold as u64);
            let rhs = self.apply(&r.rhs);
            if lhs != rhs {
                return Some(format!(
                    "{}^{} -> {}: {} != {}",
                    self.source.generators()[r.gen].name,
                    r.threshold,
                    self.source.render(&r.rhs),
                    t.render(&lhs),
                    t.render(&rhs)
                ));
            }
        }
        for (i, o) in self.source.odd_mask().iter().enumerate() {
            if *o && !t.mul(&self.images[i], &self.images[i]).is_zero() {
                return Some(format!("odd square of {}", self.source.generators()[i].name));
            }
        }
        None
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let t = &self.target;
        let mut powers: HashMap<(usize, u32), AlgebraElement> = HashMap::new();
        let mut acc = Acc::new(t.field());
        for (m, c) in a.terms() {
            let img = self.apply_monomial_cached(m, &mut powers);
            for (mm, cc) in img.terms() {
                acc.add(mm.clone(), t.field().mul(c, cc));
            }
        }
        acc.finish()
    }

    pub fn apply_monomial(&self, m: &Monomial) -> AlgebraElement {
        self.apply_monomial_cached(m, &mut HashMap::new())
    }

    fn apply_monomial_cached(&self, m: &Monomial, cache: &mut HashMap<(usize, u32), AlgebraElement>) -> AlgebraElement {
        let t = &self.target;
        let mut out = t.v_pow(m.v);
        for (i, &e) in m.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = cache.entry((i, e)).or_insert_with(|| t.pow(&self.images[i], e as u64));
            out = t.mul(&out, p);
            if out.is_zero() {
                break;
            }
        }
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AlgebraHom) -> Result<AlgebraHom> {
        if !self.target.same_context(&other.source) {
            return Err(Error::ContextMismatch("composable maps required".into()));
        }
        let images = self.images.iter().map(|e| other.apply(e)).collect();
        Ok(AlgebraHom { source: self.source.clone(), target: other.target.clone(), images })
    }
}

/// Admissible monomials of `r` of degree `d`. `bound` caps the exponent of
/// generators without a rewriting rule.
pub fn basis_in_degree(r: &AlgebraPresentation, d: i64, bound: u32) -> Result<Vec<Monomial>> {
    let n = r.ngens();
    let vd = r.v_degree();
    let kn = r.ring().allows_negative_v();
    let mut ranges = Vec::with_capacity(n);
    let mut free_even = Vec::new();
    for i in 0..n {
        let top = if r.odd_mask()[i] {
            1
        } else if let Some(rule) = r.rule_for(i) {
            rule.threshold - 1
        } else {
            free_even.push(i);
            bound
        };
        ranges.push(top);
    }
    let mut out = Vec::new();
    let mut exps = Monomial::one(n).exps;
    enumerate(r, &ranges, 0, &mut exps, 0, &mut |exps, gdeg| {
        let rest = d - gdeg;
        if rest % vd != 0 {
            return;
        }
        let k = rest / vd;
        if k < 0 && !kn {
            return;
        }
        out.push(Monomial { exps: exps.clone(), v: k });
    });
    // With v invertible a free even generator makes every nonzero component
    // infinite; otherwise only solutions reaching the cap are suspicious.
    let unbounded = !free_even.is_empty()
        && out.iter().any(|m| kn || free_even.iter().any(|&i| m.exps[i] == bound));
    if unbounded {
        return Err(Error::NotFinite { degree: d, bound });
    }
    Ok(out)
}

fn enumerate(
    r: &AlgebraPresentation,
    ranges: &[u32],
    i: usize,
    exps: &mut super::monomial::Exps,
    deg: i64,
    f: &mut dyn FnMut(&super::monomial::Exps, i64),
) {
    if i == ranges.len() {
        f(exps, deg);
        return;
    }
    let gd = r.generators()[i].degree;
    for e in 0..=ranges[i] {
        exps[i] = e;
        enumerate(r, ranges, i + 1, exps, deg + e as i64 * gd, f);
    }
    exps[i] = 0;
}

/// Every element of the degree-`d` component of `r` (as `F_p`-combinations
/// of the monomial basis), in a fixed order starting with zero.
pub fn component_elements(r: &AlgebraPresentation, d: i64, bound: u32) -> Result<Vec<AlgebraElement>> {
    let basis = basis_in_degree(r, d, bound)?;
    let p = r.p() as u64;
    let count = p.checked_pow(basis.len() as u32).filter(|c| *c <= 1 << 20).ok_or_else(|| {
        Error::Infeasible(format!("degree {d} component of dimension {}", basis.len()))
    })?;
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut rem = idx;
        let mut terms = Vec::new();
        for m in &basis {
            let c = (rem % p) as u32;
            rem /= p;
            if c != 0 {
                terms.push((m.clone(), Scalar::Fp(c)));
            }
        }
        out.push(r.from_terms(terms)?);
    }
    Ok(out)
}

/// All algebra maps `a → r`, enumerated degreewise and filtered by the
/// relations of `a`. Deterministic order; no duplicates.
pub fn enumerate_homs(
    a: &Arc<AlgebraPresentation>,
    r: &Arc<AlgebraPresentation>,
    bound: u32,
) -> Result<Vec<AlgebraHom>> {
    if a.field() != r.field() || a.height() != r.height() {
        return Err(Error::ContextMismatch("source and target over different rings".into()));
    }
    if !r.ring().is_char_p() {
        return Err(Error::Config("hom enumeration needs an F_p-based target".into()));
    }
    let mut candidates: Vec<Vec<AlgebraElement>> = Vec::with_capacity(a.ngens());
    for (i, g) in a.generators().iter().enumerate() {
        let mut c = component_elements(r, g.degree, bound)?;
        // rules mentioning only this generator can be checked one at a time
        if let Some(rule) = a.rule_for(i) {
            if rule.rhs.terms().iter().all(|(m, _)| m.exps.iter().enumerate().all(|(j, &e)| j == i || e == 0)) {
                c.retain(|x| {
                    let mut imgs = vec![r.zero(); a.ngens()];
                    imgs[i] = x.clone();
                    let h = AlgebraHom { source: a.clone(), target: r.clone(), images: imgs };
                    r.pow(x, rule.threshold as u64) == h.apply(&rule.rhs)
                });
            }
        }
        candidates.push(c);
    }
    let total: u128 = candidates.iter().map(|c| c.len() as u128).product();
    if total > 1 << 22 {
        return Err(Error::Infeasible(format!("{total} candidate maps")));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; a.ngens()];
    if candidates.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        let images: Vec<_> = idx.iter().zip(&candidates).map(|(&j, c)| c[j].clone()).collect();
        let h = AlgebraHom { source: a.clone(), target: r.clone(), images };
        if h.relation_failure().is_none() {
            out.push(h);
        }
        // odometer, last generator fastest
        let mut k = a.ngens();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galgebra::{CoeffRing, GeneratorSpec};

    #[test]
    fn basis_of_base_ring() {
        let k = AlgebraPresentation::base(3, 2, CoeffRing::Kn).unwrap();
        assert_eq!(basis_in_degree(&k, -16, 4).unwrap().len(), 1);
        assert_eq!(basis_in_degree(&k, -4, 4).unwrap().len(), 0);
        assert_eq!(basis_in_degree(&k, 32, 4).unwrap()[0].v, -2);
    }

    #[test]
    fn free_generator_is_not_finite() {
        let r = AlgebraPresentation::new(3, 1, CoeffRing::Kn, vec![GeneratorSpec::new("y", -2)]).unwrap();
        assert!(matches!(basis_in_degree(&r, -4, 8), Err(Error::NotFinite { .. })));
    }

    #[test]
    fn exterior_into_dual_numbers() {
        let e = Arc::new(AlgebraPresentation::new(3, 2, CoeffRing::Kn, vec![GeneratorSpec::new("tau0", -1)]).unwrap());
        let r = Arc::new(AlgebraPresentation::new(3, 2, CoeffRing::Kn, vec![GeneratorSpec::new("eps", -1)]).unwrap());
        let homs = enumerate_homs(&e, &r, 4).unwrap();
        assert_eq!(homs.len(), 3);
        assert!(homs[0].image(0).is_zero());
    }
}
