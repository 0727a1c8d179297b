//! The fiber product `C(R) = Aut_{H_n}(R) ×_{Aut_{g_a}(R)} Aut_{G_a}(R)`, the
//! pushout `Σ̄(n) ⊗_{A_*} B_*` corepresenting it, windowed corepresentability
//! certificates, and the comparison map `κ_*: C_* → KK`.
//!
//! Note on windows: the subalgebra of `Σ̄(n)` generated by `t_1..t_m` is a
//! sub-Hopf-algebra because `Δ(t_k)` only involves `t_{≤k}`; its points are the
//! automorphisms modulo `x^{p^m+1}`. That triangularity is asserted, not assumed.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::autgroups::{alpha, beta, even_coeff_degree, odd_coeff_degree, GroupElement, QuasiStrictAutGA, StrictAutGa, StrictAutHn};
use crate::error::{Error, Result};
use crate::fgl::{honda, Fgl};
use crate::galgebra::{basis_in_degree, component_elements, enumerate_homs, AlgebraElement, AlgebraHom, AlgebraPresentation, CoeffRing, Scalar, TensorProduct};
use crate::hopf::{convolution_points, convolve, Builder, HopfPresentation, PointGroup, Role};
use crate::report::Check;

#[cfg(test)]
mod tests;

// ---- the fiber product group --------------------------------------------

/// A pair `(f, g)` with `α(f) = β(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberElement {
    f: StrictAutHn,
    g: QuasiStrictAutGA,
}

impl FiberElement {
    pub fn new(f: StrictAutHn, g: QuasiStrictAutGA) -> Result<Self> {
        if !f.alg().same_context(g.alg()) {
            return Err(Error::ContextMismatch("components over different algebras".into()));
        }
        let (a, b) = (alpha(&f)?, beta(&g)?);
        if a != b {
            let r = f.alg();
            let show = |x: &StrictAutGa| x.coeffs().iter().map(|c| r.render(c)).collect::<Vec<_>>().join(", ");
            return Err(Error::Incompatible(format!("α(f) = [{}] but β(g) = [{}]", show(&a), show(&b))));
        }
        Ok(Self { f, g })
    }

    pub fn identity(law: Arc<Fgl>, window: u32) -> Result<Self> {
        let g = QuasiStrictAutGA::identity(law.alg().clone());
        Self::new(StrictAutHn::identity(law, window)?, g)
    }

    pub fn hn(&self) -> &StrictAutHn {
        &self.f
    }

    pub fn ga(&self) -> &QuasiStrictAutGA {
        &self.g
    }

    pub fn to_json(&self) -> Value {
        json!({ "group": "C", "f": self.f.to_json(), "g": self.g.to_json() })
    }
}

impl GroupElement for FiberElement {
    fn compose(&self, other: &Self) -> Result<Self> {
        Self::new(self.f.compose(&other.f)?, self.g.compose(&other.g)?)
    }

    fn invert(&self) -> Result<Self> {
        Self::new(self.f.invert()?, self.g.invert()?)
    }

    fn identity_like(&self) -> Self {
        Self { f: self.f.identity_like(), g: self.g.identity_like() }
    }

    /// `a_1..a_m` of `f`, then the odd coefficients of `g`.
    fn coefficients(&self) -> Vec<AlgebraElement> {
        let mut c = self.f.coefficients();
        c.extend(self.g.odd().iter().cloned());
        c
    }
}

// ---- helpers ------------------------------------------------------------

/// `f⊗f: H⊗H → H'⊗H'`.
fn tensor_map(src: &TensorProduct, tgt: &TensorProduct, f: &AlgebraHom) -> Result<AlgebraHom> {
    let ng = f.images().len();
    let images = (0..2 * ng).map(|i| tgt.embed(i / ng, f.image(i % ng))).collect();
    AlgebraHom::new_unchecked(src.alg.clone(), tgt.alg.clone(), images)
}

/// First generator `g` with `Δ_tgt(f(g)) ≠ (f⊗f)(Δ_src(g))`.
fn coalgebra_failure(src: &HopfPresentation, tgt: &HopfPresentation, f: &AlgebraHom) -> Result<Option<String>> {
    let ff = tensor_map(src.hh(), tgt.hh(), f)?;
    for (i, d) in src.coproduct_table().iter().enumerate() {
        let lhs = tgt.coproduct(f.image(i))?;
        let rhs = ff.apply(d);
        if lhs != rhs {
            let name = &src.alg().generators()[i].name;
            return Ok(Some(format!("Δ({name}): {} vs {}", tgt.render_tensor(&lhs), tgt.render_tensor(&rhs))));
        }
    }
    Ok(None)
}

// ---- pushout ------------------------------------------------------------

/// `Σ̄(n) ⊗_{A_*} B_*` along `α_*(ξ_i) = t_i` and `β_*(ξ_i) = ξ_i`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub hopf: HopfPresentation,
    pub sigma: HopfPresentation,
    pub a: HopfPresentation,
    pub b: HopfPresentation,
    pub alpha_star: AlgebraHom,
    pub beta_star: AlgebraHom,
    /// `Σ̄ → P` and `B → P`.
    pub iota_sigma: AlgebraHom,
    pub iota_b: AlgebraHom,
    pub checks: Vec<Check>,
}

pub fn pushout(p: u32, n: u32, m: u32) -> Result<Pushout> {
    if m + 1 < n {
        return Err(Error::WindowTooSmall(format!("the pushout needs t_1..t_{} (window {m})", n - 1)));
    }
    let sigma = HopfPresentation::sigma_bar(p, n, m)?;
    let a = HopfPresentation::a_star(p, n)?;
    let b = HopfPresentation::b_star(p, n)?;
    let mut checks = Vec::new();

    let s_alg = sigma.alg().clone();
    let alpha_star = AlgebraHom::new(a.alg().clone(), s_alg.clone(), (1..n).map(|i| s_alg.gen(i as usize - 1)).collect())?;
    let beta_star = AlgebraHom::new(a.alg().clone(), b.alg().clone(), (1..n).map(|i| b.alg().gen(i as usize - 1)).collect())?;
    checks.push(Check::from_witness("α_* is a coalgebra map", coalgebra_failure(&a, &sigma, &alpha_star)?));
    checks.push(Check::from_witness("β_* is a coalgebra map", coalgebra_failure(&a, &b, &beta_star)?));

    // adjoin the τ's to Σ̄ and copy its relations
    let taus: Vec<usize> = (0..b.roles().len()).filter(|&i| matches!(b.roles()[i], Role::Tau(_))).collect();
    let mut gens = s_alg.generators().to_vec();
    gens.extend(taus.iter().map(|&i| b.alg().generators()[i].clone()));
    let free = Arc::new(AlgebraPresentation::new(p, n, CoeffRing::Kn, gens.clone())?);
    let into_free = AlgebraHom::new_unchecked(s_alg.clone(), free.clone(), (0..s_alg.ngens()).map(|i| free.gen(i)).collect())?;
    let mut pa = AlgebraPresentation::new(p, n, CoeffRing::Kn, gens)?.with_label("C");
    for r in s_alg.rules() {
        pa.add_rule(r.gen, r.threshold, into_free.apply(&r.rhs))?;
    }
    let pa = Arc::new(pa);
    let ms = s_alg.ngens();
    let iota_sigma = AlgebraHom::new(s_alg.clone(), pa.clone(), (0..ms).map(|i| pa.gen(i)).collect())?;
    let b_images = b
        .roles()
        .iter()
        .map(|r| match *r {
            Role::Xi(i) => pa.gen(i as usize - 1),
            Role::Tau(i) => pa.gen(ms + i as usize),
            Role::T(_) => unreachable!("B_* has no t generators"),
        })
        .collect();
    let iota_b = AlgebraHom::new(b.alg().clone(), pa.clone(), b_images)?;
    let square = alpha_star.then(&iota_sigma)?.images() == beta_star.then(&iota_b)?.images();
    checks.push(Check::from_witness("ι_Σ∘α_* = ι_B∘β_*", (!square).then(|| "the pushout square does not commute".to_string())));

    let roles: Vec<Role> = sigma.roles().iter().copied().chain(taus.iter().map(|&i| b.roles()[i])).collect();
    let pp = crate::galgebra::tensor_power(&pa, 2)?;
    let ss = tensor_map(sigma.hh(), &pp, &iota_sigma)?;
    let bb = tensor_map(b.hh(), &pp, &iota_b)?;
    let mut delta: Vec<AlgebraElement> = sigma.coproduct_table().iter().map(|d| ss.apply(d)).collect();
    delta.extend(taus.iter().map(|&i| bb.apply(&b.coproduct_table()[i])));
    // Δ on the identified generators must agree from both sides
    let clash = b.roles().iter().enumerate().find_map(|(i, r)| match *r {
        Role::Xi(k) if bb.apply(&b.coproduct_table()[i]) != delta[k as usize - 1] => Some(format!("Δ(ξ_{k}) ≠ Δ(t_{k})")),
        _ => None,
    });
    checks.push(Check::from_witness("Δ agrees on ξ_i = t_i", clash));
    let hopf = HopfPresentation::from_parts(Builder::C, m, pa, roles, delta)?;

    let c = HopfPresentation::c_star(p, n, m)?;
    checks.push(Check::from_witness("pushout equals C_* structurally", structural_difference(&hopf, &c)));
    Ok(Pushout { hopf, sigma, a, b, alpha_star, beta_star, iota_sigma, iota_b, checks })
}

/// Generators, relations and coproduct table compared by name and value.
pub fn structural_difference(x: &HopfPresentation, y: &HopfPresentation) -> Option<String> {
    let (a, b) = (x.alg(), y.alg());
    if a.generators() != b.generators() {
        return Some("generator lists differ".into());
    }
    let ra: Vec<_> = a.rules().map(|r| (r.gen, r.threshold, a.render(&r.rhs))).collect();
    let rb: Vec<_> = b.rules().map(|r| (r.gen, r.threshold, b.render(&r.rhs))).collect();
    if ra != rb {
        return Some("relations differ".into());
    }
    if x.roles() != y.roles() {
        return Some("generator roles differ".into());
    }
    for (i, (d, e)) in x.coproduct_table().iter().zip(y.coproduct_table()).enumerate() {
        if d != e {
            return Some(format!("Δ({}): {} vs {}", a.generators()[i].name, x.render_tensor(d), y.render_tensor(e)));
        }
    }
    None
}

/// For every pair of maps from `Σ̄` and `B_*` agreeing on `A_*`, exactly one
/// map from the pushout restricts to both.
pub fn pushout_universal_property(po: &Pushout, r: &Arc<AlgebraPresentation>, bound: u32) -> Result<Check> {
    let hs = enumerate_homs(po.sigma.alg(), r, bound)?;
    let hb = enumerate_homs(po.b.alg(), r, bound)?;
    let hp = enumerate_homs(po.hopf.alg(), r, bound)?;
    let mut restrict: HashMap<(Vec<AlgebraElement>, Vec<AlgebraElement>), usize> = HashMap::new();
    for phi in &hp {
        let s = po.iota_sigma.then(phi)?.images().to_vec();
        let b = po.iota_b.then(phi)?.images().to_vec();
        *restrict.entry((s, b)).or_default() += 1;
    }
    let mut pairs = 0;
    for x in &hs {
        let xa = po.alpha_star.then(x)?;
        for y in &hb {
            if xa.images() != po.beta_star.then(y)?.images() {
                continue;
            }
            pairs += 1;
            let k = restrict.get(&(x.images().to_vec(), y.images().to_vec())).copied().unwrap_or(0);
            if k != 1 {
                return Ok(Check::fail("pushout universal property", format!("a compatible pair has {k} extensions")));
            }
        }
    }
    let name = format!("pushout universal property ({pairs} compatible pairs, {} maps from the pushout)", hp.len());
    if pairs != hp.len() {
        return Ok(Check::fail(name, "some map from the pushout restricts to an incompatible pair"));
    }
    Ok(Check::pass(name))
}

// ---- corepresentability -------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    Hn,
    Ga,
    GA,
    C,
}

impl Functor {
    pub fn name(self) -> &'static str {
        match self {
            Self::Hn => "hn",
            Self::Ga => "ga",
            Self::GA => "GA",
            Self::C => "C",
        }
    }

    pub fn all() -> [Functor; 4] {
        [Self::Hn, Self::Ga, Self::GA, Self::C]
    }

    /// The Hopf algebra claimed to corepresent the functor.
    pub fn hopf(self, p: u32, n: u32, window: u32) -> Result<HopfPresentation> {
        match self {
            Self::Hn => HopfPresentation::sigma_bar(p, n, window),
            Self::Ga => HopfPresentation::a_star(p, n),
            Self::GA => HopfPresentation::b_star(p, n),
            Self::C => HopfPresentation::c_star(p, n, window),
        }
    }
}

impl std::str::FromStr for Functor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hn" | "Hn" => Ok(Self::Hn),
            "ga" | "g_a" => Ok(Self::Ga),
            "GA" | "G_a" => Ok(Self::GA),
            "C" | "c" => Ok(Self::C),
            _ => Err(Error::Config(format!("unknown functor '{s}' (hn, ga, GA, C)"))),
        }
    }
}

/// A value of one of the four group functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorValue {
    Hn(StrictAutHn),
    Ga(StrictAutGa),
    GA(QuasiStrictAutGA),
    C(FiberElement),
}

impl FunctorValue {
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(match (self, other) {
            (Self::Hn(a), Self::Hn(b)) => Self::Hn(a.compose(b)?),
            (Self::Ga(a), Self::Ga(b)) => Self::Ga(a.compose(b)?),
            (Self::GA(a), Self::GA(b)) => Self::GA(a.compose(b)?),
            (Self::C(a), Self::C(b)) => Self::C(a.compose(b)?),
            _ => return Err(Error::ContextMismatch("values of different functors".into())),
        })
    }

    /// The coefficient a generator of the given role stands for.
    pub fn coefficient(&self, role: Role) -> Option<AlgebraElement> {
        let at = |v: &[AlgebraElement], i: u32| v.get(i as usize).cloned();
        match (self, role) {
            (Self::Hn(f), Role::T(i)) => at(f.coeffs(), i),
            (Self::Ga(f), Role::Xi(i)) => at(f.coeffs(), i),
            (Self::GA(g), Role::Xi(i)) => at(g.even(), i),
            (Self::GA(g), Role::Tau(i)) => at(g.odd(), i),
            (Self::C(e), Role::T(i)) => at(e.hn().coeffs(), i),
            (Self::C(e), Role::Tau(i)) => at(e.ga().odd(), i),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Hn(f) => f.to_json(),
            Self::Ga(f) => f.to_json(),
            Self::GA(f) => f.to_json(),
            Self::C(f) => f.to_json(),
        }
    }
}

/// Truncation order at which every relation of `Σ̄(n)` up to `t_m` is visible
/// in the homomorphism condition: `t_m^{p^n}` sits at `x^{p^{n+m}-p^n+1}`.
pub fn corep_order(p: u32, n: u32, m: u32) -> u32 {
    p.pow(n + m) + 1
}

fn law_over(p: u32, n: u32, m: u32, r: &Arc<AlgebraPresentation>) -> Result<Arc<Fgl>> {
    Ok(Arc::new(honda(p, n, corep_order(p, n, m))?.fgl.base_change(r.clone())?))
}

/// The functor's value at `R` within the window, found by enumerating
/// coefficient vectors of the right degrees and testing each candidate with
/// the group's own membership test (homomorphism/additivity of the realized
/// series), independent of any Hopf algebra.
pub fn functor_values(functor: Functor, p: u32, n: u32, window: u32, r: &Arc<AlgebraPresentation>, bound: u32) -> Result<Vec<FunctorValue>> {
    let comp = |d: i64| component_elements(r, d, bound);
    let grid = |slots: &[Vec<AlgebraElement>]| -> Result<Vec<Vec<AlgebraElement>>> {
        let total: u128 = slots.iter().map(|s| s.len() as u128).product();
        if total > 1 << 16 {
            return Err(Error::Infeasible(format!("{total} candidate coefficient vectors")));
        }
        let mut out = vec![Vec::new()];
        for s in slots {
            out = out.into_iter().flat_map(|v| s.iter().map(move |x| {
                let mut w = v.clone();
                w.push(x.clone());
                w
            })).collect();
        }
        Ok(out)
    };
    // Window by window: the restriction of a window-k element to window k-1
    // is an element, so survivors at k-1 times the t_k slot cover window k.
    let hn_values = |m: u32| -> Result<Vec<StrictAutHn>> {
        let mut prefixes: Vec<Vec<AlgebraElement>> = vec![Vec::new()];
        for k in 1..=m {
            let law = law_over(p, n, k, r)?;
            let slot = comp(even_coeff_degree(p, k))?;
            if (prefixes.len() * slot.len()) as u128 > 1 << 16 {
                return Err(Error::Infeasible(format!("{} candidate coefficient vectors", prefixes.len() * slot.len())));
            }
            let cands = prefixes
                .iter()
                .flat_map(|v| slot.iter().map(move |x| v.iter().chain(std::iter::once(x)).cloned().collect::<Vec<_>>()))
                .map(|c| StrictAutHn::from_coeffs_unchecked(law.clone(), std::iter::once(r.one()).chain(c).collect()))
                .collect::<Result<Vec<_>>>()?;
            let ok = parallel_filter(&cands, |f| Ok(f.homomorphism_failure()?.is_none()))?;
            let kept: Vec<_> = cands.into_iter().zip(ok).filter(|(_, k)| *k).map(|(f, _)| f).collect();
            if k == m {
                return Ok(kept);
            }
            prefixes = kept.iter().map(|f| f.coeffs()[1..].to_vec()).collect();
        }
        // m = 0: only the identity
        Ok(vec![StrictAutHn::from_coeffs_unchecked(law_over(p, n, 0, r)?, vec![r.one()])?])
    };
    let ga_values = || -> Result<Vec<QuasiStrictAutGA>> {
        let mut slots = (0..n).map(|i| comp(odd_coeff_degree(p, i))).collect::<Result<Vec<_>>>()?;
        slots.extend((1..n).map(|i| comp(even_coeff_degree(p, i))).collect::<Result<Vec<_>>>()?);
        let mut out = Vec::new();
        for c in grid(&slots)? {
            let (odd, even) = c.split_at(n as usize);
            let even = std::iter::once(r.one()).chain(even.iter().cloned()).collect();
            let g = QuasiStrictAutGA::new(r.clone(), odd.to_vec(), even)?;
            if QuasiStrictAutGA::validate(r.clone(), &g.realize()?, false).as_ref() == Ok(&g) {
                out.push(g);
            }
        }
        Ok(out)
    };
    Ok(match functor {
        Functor::Hn => hn_values(window)?.into_iter().map(FunctorValue::Hn).collect(),
        Functor::Ga => {
            let slots = (1..n).map(|i| comp(even_coeff_degree(p, i))).collect::<Result<Vec<_>>>()?;
            let mut out = Vec::new();
            for c in grid(&slots)? {
                let f = StrictAutGa::new(r.clone(), std::iter::once(r.one()).chain(c).collect())?;
                if StrictAutGa::validate(r.clone(), &f.realize()?).as_ref() == Ok(&f) {
                    out.push(FunctorValue::Ga(f));
                }
            }
            out
        }
        Functor::GA => ga_values()?.into_iter().map(FunctorValue::GA).collect(),
        Functor::C => {
            let fs = hn_values(window)?;
            let gs = ga_values()?;
            let mut out = Vec::new();
            for f in &fs {
                let a = alpha(f)?;
                for g in &gs {
                    if beta(g)? == a {
                        out.push(FunctorValue::C(FiberElement::new(f.clone(), g.clone())?));
                    }
                }
            }
            out
        }
    })
}

/// Evaluate `pred` on every item, spreading the work over the available cores.
fn parallel_filter<T: Sync>(items: &[T], pred: impl Fn(&T) -> Result<bool> + Sync) -> Result<Vec<bool>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&pred).collect::<Result<Vec<_>>>())).collect();
        let mut out = Vec::with_capacity(items.len());
        for h in handles {
            out.extend(h.join().expect("worker panicked")?);
        }
        Ok(out)
    })
}

/// Outcome of a corepresentability check.
#[derive(Clone, Debug)]
pub struct Corepresentability {
    pub functor: Functor,
    pub hopf: HopfPresentation,
    pub points: PointGroup,
    pub values: Vec<FunctorValue>,
    /// `dictionary[i]` is the index in `values` of the image of hom `i`.
    pub dictionary: Vec<usize>,
    pub checks: Vec<Check>,
}

impl Corepresentability {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "functor": self.functor.name(),
            "hopf": self.hopf.builder().name(),
            "points": self.points.order(),
            "values": self.values.len(),
            "order_profile": self.points.order_profile(),
            "abelian": self.points.is_abelian(),
        })
    }
}

/// Yoneda dictionary `θ ↦ (θ(generators))` between `hom(H, R)` and the functor's
/// value at `R`, checked to be a bijection carrying convolution to the group
/// product, both ways.
pub fn corepresentability_check(functor: Functor, p: u32, n: u32, window: u32, r: &Arc<AlgebraPresentation>, bound: u32) -> Result<Corepresentability> {
    let h = functor.hopf(p, n, window)?;
    let mut checks = Vec::new();
    checks.push(Check::from_witness("window generators span a sub-coalgebra", triangularity_failure(&h)));

    let (points, pc) = convolution_points(&h, r, bound)?;
    checks.extend(pc);
    let values = functor_values(functor, p, n, window, r, bound)?;

    // coefficient vector of a value, in the generator order of H
    let coeffs_of = |v: &FunctorValue| -> Result<Vec<AlgebraElement>> {
        h.roles()
            .iter()
            .map(|&role| v.coefficient(role).ok_or_else(|| Error::Construction(format!("no coefficient for {role:?}"))))
            .collect()
    };
    let mut index: HashMap<Vec<AlgebraElement>, usize> = HashMap::new();
    for (i, v) in values.iter().enumerate() {
        index.insert(coeffs_of(v)?, i);
    }
    checks.push(Check::from_witness(
        format!("functor value: {} distinct elements", values.len()),
        (index.len() != values.len()).then(|| "two values share a coefficient vector".to_string()),
    ));

    // hom → value
    let mut dictionary = Vec::with_capacity(points.order());
    let mut missing = None;
    for (i, th) in points.homs.iter().enumerate() {
        match index.get(th.images()) {
            Some(&k) => dictionary.push(k),
            None => {
                missing.get_or_insert_with(|| format!("θ{i} = ({}) is not a group element", render_images(r, th.images())));
                dictionary.push(usize::MAX);
            }
        }
    }
    checks.push(Check::from_witness("every algebra map gives a group element", missing.clone()));
    let hit: HashSet<usize> = dictionary.iter().copied().collect();
    checks.push(Check::from_witness("the dictionary is injective", (hit.len() != dictionary.len()).then(|| "two maps give the same element".to_string())));

    // value → hom
    let mut not_alg = None;
    for (k, v) in values.iter().enumerate() {
        let c = coeffs_of(v)?;
        let ok = AlgebraHom::new(h.alg().clone(), r.clone(), c.clone()).is_ok() && points.index_of(&c).is_some();
        if !ok {
            not_alg.get_or_insert_with(|| format!("element {k} = ({}) is not an algebra map", render_images(r, &c)));
        }
    }
    checks.push(Check::from_witness("every group element gives an algebra map", not_alg));
    checks.push(Check::from_witness(
        format!("|hom(H, R)| = {} = |F(R)| = {}", points.order(), values.len()),
        (points.order() != values.len()).then(|| "cardinalities differ".to_string()),
    ));

    // products
    let mut product = None;
    if missing.is_none() {
        'outer: for i in 0..points.order() {
            for j in 0..points.order() {
                let conv = convolve(&h, &points.homs[i], &points.homs[j])?;
                let prod = values[dictionary[i]].compose(&values[dictionary[j]])?;
                if coeffs_of(&prod)? != conv.images() {
                    product = Some(format!("θ{i}·θ{j}: ({}) vs ({})", render_images(r, conv.images()), render_images(r, &coeffs_of(&prod)?)));
                    break 'outer;
                }
            }
        }
        checks.push(Check::from_witness("convolution matches the group product", product));
    } else {
        checks.push(Check::skipped("convolution matches the group product", "dictionary incomplete"));
    }
    Ok(Corepresentability { functor, hopf: h, points, values, dictionary, checks })
}

fn render_images(r: &AlgebraPresentation, xs: &[AlgebraElement]) -> String {
    xs.iter().map(|x| r.render(x)).collect::<Vec<_>>().join(", ")
}

fn role_index(r: Role) -> u32 {
    match r {
        Role::T(i) | Role::Xi(i) | Role::Tau(i) => i,
    }
}

/// `Δ(g)` may only involve generators whose index is at most that of `g`.
pub fn triangularity_failure(h: &HopfPresentation) -> Option<String> {
    let ng = h.alg().ngens();
    for (g, d) in h.coproduct_table().iter().enumerate() {
        let top = role_index(h.roles()[g]);
        for (m, _) in d.terms() {
            for (j, &e) in m.exps.iter().enumerate() {
                if e > 0 && role_index(h.roles()[j % ng]) > top {
                    return Some(format!("Δ({}) involves {}", h.alg().generators()[g].name, h.alg().generators()[j % ng].name));
                }
            }
        }
    }
    None
}

// ---- κ_* ----------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Kappa {
    pub c: HopfPresentation,
    pub kk: HopfPresentation,
    /// `t_i ↦ c(t_i)`, `τ_i ↦ c(τ_i)` with `c` the antipode of `KK`.
    pub map: AlgebraHom,
    /// `t_i ↦ c(t_i)`, `τ_i ↦ c(τ_i)` with `c` the antipode of `C_*`.
    pub inverse: AlgebraHom,
    pub checks: Vec<Check>,
    /// The same two checks for the map built from `C_*`'s antipode instead;
    /// informational.
    pub source_side: Vec<Check>,
    /// `(degree, dim C_*, dim KK)` over the band.
    pub dims: Vec<(i64, usize, usize)>,
}

impl Kappa {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_json(&self) -> Value {
        let (a, b) = (self.map.source(), self.map.target());
        json!({
            "map": a.generators().iter().zip(self.map.images()).map(|(g, x)| json!({"generator": g.name, "image": b.render(x)})).collect::<Vec<_>>(),
            "source_side": self.source_side,
        })
    }
}

pub fn kappa_star(p: u32, n: u32, m: u32, band: (i64, i64)) -> Result<Kappa> {
    kappa_between(HopfPresentation::c_star(p, n, m)?, HopfPresentation::kk(p, n, m)?, band)
}

/// `KK` with its relations replaced by `t_i^{p^n} = v^{p^i+1} t_i`.
pub fn mutated_kk(p: u32, n: u32, m: u32) -> Result<HopfPresentation> {
    let kk = HopfPresentation::kk(p, n, m)?;
    let gens = kk.alg().generators().to_vec();
    let mut a = AlgebraPresentation::new(p, n, CoeffRing::Kn, gens)?.with_label("KK (mutated)");
    for i in 1..=m {
        let g = i as usize - 1;
        let rhs = a.shift_v(&a.gen(g), p.pow(i) as i64 + 1);
        a.add_rule(g, p.pow(n), rhs)?;
    }
    let a = Arc::new(a);
    let hh = crate::galgebra::tensor_power(&a, 2)?;
    let delta = kk.coproduct_table().iter().map(|d| hh.alg.convert_from(&kk.hh().alg, d)).collect::<Result<Vec<_>>>()?;
    HopfPresentation::from_parts(Builder::KK, m, a, kk.roles().to_vec(), delta)
}

/// The linear part of `h` as a matrix over `K(n)_*`; its entries are
/// homogeneous, `c v^k`, so the determinant is too and the matrix is
/// invertible iff it is after `v ↦ 1`. Returns a witness when singular.
fn indecomposable_failure(h: &AlgebraHom) -> Option<String> {
    let (src, tgt) = (h.source(), h.target());
    let k = src.generators().len();
    let p = src.p() as u64;
    let mut rows: Vec<Vec<u64>> = h
        .images()
        .iter()
        .map(|x| {
            let mut row = vec![0u64; k];
            for (m, c) in x.terms() {
                if m.total_exponent() == 1 {
                    let j = m.exps.iter().position(|&e| e == 1).expect("linear monomial");
                    row[j] = (row[j] + scalar_mod_p(c, p)) % p;
                }
            }
            row
        })
        .collect();
    let rank = rank_mod_p(&mut rows, p);
    (rank < k).then(|| {
        let shown: Vec<_> = src.generators().iter().zip(h.images()).map(|(g, x)| format!("κ({}) = {}", g.name, tgt.render(x))).collect();
        format!("rank {rank} < {k} on indecomposables: {}", shown.join(", "))
    })
}

fn scalar_mod_p(c: &Scalar, p: u64) -> u64 {
    match c {
        Scalar::Fp(x) => *x as u64 % p,
        _ => unreachable!("K(n)_* coefficients are in F_p"),
    }
}

fn rank_mod_p(rows: &mut [Vec<u64>], p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = (1..p).find(|&i| rows[rank][c] * i % p == 1).expect("p is prime");
        let pivot: Vec<u64> = rows[rank].iter().map(|&x| x * inv % p).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// κ between two presentations on the same generator names.
pub fn kappa_between(c: HopfPresentation, kk: HopfPresentation, band: (i64, i64)) -> Result<Kappa> {
    if c.window() != kk.window() || c.alg().generators() != kk.alg().generators() {
        return Err(Error::ContextMismatch("C_* and KK differ in window or generators".into()));
    }
    let (ca, ka) = (c.alg().clone(), kk.alg().clone());
    let kk_c = kk.antipode_images()?;
    let c_c = c.antipode_images()?;
    let map = AlgebraHom::new_unchecked(ca.clone(), ka.clone(), kk_c)?;
    let inverse = AlgebraHom::new_unchecked(ka.clone(), ca.clone(), c_c.clone())?;
    let mut checks = kappa_checks(&c, &kk, &map)?;

    checks.push(Check::from_witness("κ_* is invertible on indecomposables", indecomposable_failure(&map)));

    checks.push(Check::from_witness("inverse t_i ↦ c_C(t_i) is an algebra map", inverse.relation_failure()));
    let round = |f: &AlgebraHom, g: &AlgebraHom, what: &str| -> Result<Option<String>> {
        let h = f.then(g)?;
        let s = h.source();
        Ok((0..s.ngens()).find(|&i| h.image(i) != &s.gen(i)).map(|i| format!("{what}({}) = {}", s.generators()[i].name, h.target().render(h.image(i)))))
    };
    let w = round(&map, &inverse, "inverse∘κ")?.or(round(&inverse, &map, "κ∘inverse")?);
    checks.push(Check::from_witness("two-sided inverse within the window", w));

    let mut dims = Vec::new();
    let mut dim_w = None;
    for d in band.0..=band.1 {
        let x = basis_in_degree(&ca, d, 1)?.len();
        let y = basis_in_degree(&ka, d, 1)?.len();
        if x != y {
            dim_w.get_or_insert_with(|| format!("degree {d}: {x} vs {y}"));
        }
        dims.push((d, x, y));
    }
    checks.push(Check::from_witness(format!("dim C_* = dim KK in degrees {}..={}", band.0, band.1), dim_w));

    let src = c_c.iter().map(|x| ka.convert_from(&ca, x)).collect::<Result<Vec<_>>>()?;
    let source_map = AlgebraHom::new_unchecked(ca.clone(), ka.clone(), src)?;
    let source_side = kappa_checks(&c, &kk, &source_map)?
        .into_iter()
        .map(|ch| Check { name: format!("antipode taken in C_*: {}", ch.name), ..ch })
        .collect();
    Ok(Kappa { c, kk, map, inverse, checks, source_side, dims })
}

fn kappa_checks(c: &HopfPresentation, kk: &HopfPresentation, map: &AlgebraHom) -> Result<Vec<Check>> {
    Ok(vec![
        Check::from_witness("κ_* is an algebra map (relations of C_* vanish in KK)", map.relation_failure()),
        Check::from_witness("κ_* is a coalgebra map", coalgebra_failure(c, kk, map)?),
    ])
}
