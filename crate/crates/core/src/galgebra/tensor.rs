use std::collections::HashSet;
use std::sync::Arc;

use super::element::AlgebraElement;
use super::monomial::{Exps, Monomial};
use super::presentation::{AlgebraPresentation, GeneratorSpec};
use crate::error::{Error, Result};

/// A tensor product of presentations together with the slot layout, so that
/// factors can be embedded and (for homogeneous pieces) read back.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub alg: Arc<AlgebraPresentation>,
    offsets: Vec<usize>,
    sizes: Vec<usize>,
}

impl TensorProduct {
    pub fn slots(&self) -> usize {
        self.offsets.len()
    }

    pub fn offset(&self, slot: usize) -> usize {
        self.offsets[slot]
    }

    /// Embed an element of the slot's factor as `1 ⊗ ⋯ ⊗ a ⊗ ⋯ ⊗ 1`.
    pub fn embed(&self, slot: usize, a: &AlgebraElement) -> AlgebraElement {
        let (off, size, total) = (self.offsets[slot], self.sizes[slot], self.alg.ngens());
        let terms = a.terms.iter().map(|(m, c)| {
            debug_assert_eq!(m.exps.len(), size);
            let mut exps: Exps = smallvec::SmallVec::from_elem(0, total);
            exps[off..off + size].copy_from_slice(&m.exps);
            (Monomial { exps, v: m.v }, c.clone())
        });
        // embedding preserves the order of monomials with fixed other slots
        let mut v: Vec<_> = terms.collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        AlgebraElement::from_sorted(v)
    }

    /// Generator index in the product of generator `g` of the given slot.
    pub fn gen_index(&self, slot: usize, g: usize) -> usize {
        self.offsets[slot] + g
    }

    /// Split a monomial of the product into its slot pieces; `v` stays with
    /// the first piece.
    pub fn split(&self, m: &Monomial) -> Vec<Monomial> {
        self.offsets
            .iter()
            .zip(&self.sizes)
            .enumerate()
            .map(|(i, (&o, &s))| Monomial {
                exps: m.exps[o..o + s].iter().copied().collect(),
                v: if i == 0 { m.v } else { 0 },
            })
            .collect()
    }
}

/// `A ⊗ B` over the common coefficient ring. Generator names are kept when
/// disjoint, otherwise suffixed `_1` / `_2`.
pub fn tensor(a: &AlgebraPresentation, b: &AlgebraPresentation) -> Result<TensorProduct> {
    let an: HashSet<&str> = a.generators().iter().map(|g| g.name.as_str()).collect();
    let clash = b.generators().iter().any(|g| an.contains(g.name.as_str()));
    let suffixes = if clash { vec!["_1", "_2"] } else { vec!["", ""] };
    build(&[a, b], &suffixes)
}

/// `H^{⊗k}` with generators suffixed `_1 .. _k`.
pub fn tensor_power(h: &AlgebraPresentation, k: usize) -> Result<TensorProduct> {
    let parts = vec![h; k];
    let suffixes: Vec<String> = (1..=k).map(|i| format!("_{i}")).collect();
    let s: Vec<&str> = suffixes.iter().map(String::as_str).collect();
    build(&parts, &s)
}

fn build(parts: &[&AlgebraPresentation], suffixes: &[&str]) -> Result<TensorProduct> {
    let first = parts[0];
    for p in parts {
        if p.field() != first.field() || p.height() != first.height() {
            return Err(Error::ContextMismatch("tensor factors over different coefficient rings".into()));
        }
    }
    let mut gens = Vec::new();
    let mut offsets = Vec::new();
    let mut sizes = Vec::new();
    for (p, s) in parts.iter().zip(suffixes) {
        offsets.push(gens.len());
        sizes.push(p.ngens());
        gens.extend(p.generators().iter().map(|g| GeneratorSpec::new(format!("{}{}", g.name, s), g.degree)));
    }
    let label = parts.iter().map(|p| p.label()).collect::<Vec<_>>().join("⊗");
    let mut alg = AlgebraPresentation::new(first.p(), first.height(), first.ring(), gens)?.with_label(label);
    let tp = TensorProduct { alg: Arc::new(alg.clone()), offsets: offsets.clone(), sizes: sizes.clone() };
    for (slot, p) in parts.iter().enumerate() {
        for r in p.rules() {
            alg.add_rule(offsets[slot] + r.gen, r.threshold, tp.embed(slot, &r.rhs))?;
        }
    }
    Ok(TensorProduct { alg: Arc::new(alg), offsets, sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galgebra::CoeffRing;

    fn ext(name: &str) -> AlgebraPresentation {
        AlgebraPresentation::new(3, 1, CoeffRing::Kn, vec![GeneratorSpec::new(name, -1)]).unwrap()
    }

    #[test]
    fn koszul_sign_across_the_seam() {
        let t = tensor(&ext("tau0"), &ext("tau0p")).unwrap();
        let a = &t.alg;
        let l = t.embed(0, &ext("tau0").gen(0));
        let r = t.embed(1, &ext("tau0p").gen(0));
        let lr = a.mul(&l, &r);
        assert_eq!(a.render(&lr), "tau0*tau0p");
        assert_eq!(a.mul(&r, &l), a.neg(&lr));
    }

    #[test]
    fn colliding_names_get_suffixes() {
        let t = tensor(&ext("tau0"), &ext("tau0")).unwrap();
        let names: Vec<_> = t.alg.generators().iter().map(|g| g.name.clone()).collect();
        assert_eq!(names, ["tau0_1", "tau0_2"]);
        let tp = tensor_power(&ext("e"), 3).unwrap();
        assert_eq!(tp.alg.ngens(), 3);
        assert_eq!(tp.alg.generators()[2].name, "e_3");
    }

    #[test]
    fn rules_carry_over() {
        let mut a = AlgebraPresentation::new(3, 1, CoeffRing::Kn, vec![GeneratorSpec::new("t", -4)]).unwrap();
        let rhs = a.shift_v(&a.gen(0), 2);
        a.add_rule(0, 3, rhs).unwrap();
        let t = tensor_power(&a, 2).unwrap();
        let x = t.embed(1, &a.gen(0));
        assert_eq!(t.alg.pow(&x, 3), t.alg.shift_v(&x, 2));
        let xi = t.alg.mul(&t.embed(0, &a.gen(0)), &x);
        assert_eq!(t.alg.degree_of(&xi).unwrap(), Some(-8));
    }
}
