//! The group of points `hom(H, R)` under convolution.

use std::collections::HashMap;
use std::sync::Arc;

use super::HopfPresentation;
use crate::error::{Error, Result};
use crate::fgl::embed_base;
use crate::galgebra::{enumerate_homs, AlgebraElement, AlgebraHom, AlgebraPresentation, CoeffRing};
use crate::report::Check;

/// Every algebra map `H → R`, with its full multiplication table.
#[derive(Clone, Debug)]
pub struct PointGroup {
    pub homs: Vec<AlgebraHom>,
    /// `table[i][j]` is the index of `θ_i·θ_j`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverses: Vec<usize>,
}

impl PointGroup {
    pub fn order(&self) -> usize {
        self.homs.len()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != self.identity {
            x = self.table[x][i];
            k += 1;
        }
        k
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|i| self.element_order(i) == self.order())
    }

    /// Sorted multiset of element orders (an isomorphism invariant).
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<_> = (0..self.order()).map(|i| self.element_order(i)).collect();
        v.sort_unstable();
        v
    }

    pub fn index_of(&self, images: &[AlgebraElement]) -> Option<usize> {
        self.homs.iter().position(|h| h.images() == images)
    }
}

/// `θ·θ' = μ∘(θ⊗θ')∘Δ`.
pub fn convolve(h: &HopfPresentation, a: &AlgebraHom, b: &AlgebraHom) -> Result<AlgebraHom> {
    let r = a.target().clone();
    let images = a.images().iter().chain(b.images()).cloned().collect();
    let ab = AlgebraHom::new_unchecked(h.hh().alg.clone(), r.clone(), images)?;
    let out = h.coproduct_table().iter().map(|d| ab.apply(d)).collect();
    AlgebraHom::new_unchecked(h.alg().clone(), r, out)
}

/// `η∘ε` into `R`.
pub fn counit_point(h: &HopfPresentation, r: &Arc<AlgebraPresentation>) -> Result<AlgebraHom> {
    let k = AlgebraPresentation::base(r.p(), r.height(), CoeffRing::Kn)?;
    let images = h.counit_table().iter().map(|c| embed_base(&k, r, c)).collect::<Result<Vec<_>>>()?;
    AlgebraHom::new_unchecked(h.alg().clone(), r.clone(), images)
}

/// Enumerate `hom(H, R)` and tabulate convolution. Inverses are `θ∘c`.
pub fn convolution_points(h: &HopfPresentation, r: &Arc<AlgebraPresentation>, bound: u32) -> Result<(PointGroup, Vec<Check>)> {
    let homs = enumerate_homs(h.alg(), r, bound)?;
    let index: HashMap<Vec<AlgebraElement>, usize> = homs.iter().enumerate().map(|(i, x)| (x.images().to_vec(), i)).collect();
    let n = homs.len();
    let mut checks = Vec::new();
    let unit = counit_point(h, r)?;
    let identity = *index
        .get(unit.images())
        .ok_or_else(|| Error::Infeasible("the counit is not among the enumerated maps".into()))?;
    let mut table = vec![vec![0; n]; n];
    let mut closure = None;
    for i in 0..n {
        for j in 0..n {
            let c = convolve(h, &homs[i], &homs[j])?;
            match index.get(c.images()) {
                Some(&k) => table[i][j] = k,
                None => {
                    closure.get_or_insert_with(|| format!("θ{i}·θ{j} is not an enumerated map"));
                }
            }
        }
    }
    checks.push(Check::from_witness(format!("closure of {n} points under convolution"), closure.clone()));
    if closure.is_some() {
        return Err(Error::Infeasible(closure.unwrap()));
    }
    let idw = (0..n).find(|&i| table[i][identity] != i || table[identity][i] != i).map(|i| format!("θ{i}"));
    checks.push(Check::from_witness("η∘ε is a two-sided identity", idw));
    let assoc = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        .find(|&(i, j, k)| table[table[i][j]][k] != table[i][table[j][k]])
        .map(|(i, j, k)| format!("(θ{i}θ{j})θ{k}"));
    checks.push(Check::from_witness("convolution is associative", assoc));
    let cmap = h.antipode_map()?;
    let mut inverses = vec![0; n];
    let mut invw = None;
    for (i, x) in homs.iter().enumerate() {
        let inv = cmap.then(x)?;
        match index.get(inv.images()) {
            Some(&k) if table[i][k] == identity && table[k][i] == identity => inverses[i] = k,
            _ => {
                invw.get_or_insert_with(|| format!("θ{i}∘c is not an inverse"));
            }
        }
    }
    checks.push(Check::from_witness("θ∘c is the convolution inverse", invw));
    Ok((PointGroup { homs, table, identity, inverses }, checks))
}
