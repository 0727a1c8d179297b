//! Hopf algebras over `K(n)_*` given by generators, relations and a
//! coproduct table, with the five builders used here:
//!
//! * `sigma_bar(n, m)`: `K(n)_*[t_1..t_m]/(t_i^{p^n} = v^{p^i-1} t_i)`, the
//!   coproduct read off the formal sum `Σ^{H_n}_{i,j} (t_i^{p^j}⊗t_j) x^{p^{i+j}}`.
//!   Below `k = n` this is `Δ(t_k) = Σ_i t_{k-i}^{p^i}⊗t_i`; from `k > n` on the
//!   law contributes correction terms.
//! * `a_star(n)`: `K(n)_*[ξ_1..ξ_{n-1}]`, `Δ(ξ_k) = Σ_i ξ_{k-i}^{p^i}⊗ξ_i`.
//! * `b_star(n)`: `a_star ⊗ E(τ_0..τ_{n-1})`, `Δ(τ_k) = τ_k⊗1 + Σ_i ξ_{k-i}^{p^i}⊗τ_i`.
//! * `c_star(n, m)`: `sigma_bar ⊗ E(τ)`, `Δ(τ_i) = τ_i⊗1 + Σ_j t_{i-j}^{p^j}⊗τ_j`.
//! * `kk(n, m)`: the conjugate convention: `Δ(t_k)` is the twist of the
//!   `sigma_bar` table and `Δ(τ_i) = 1⊗τ_i + Σ_j τ_j⊗t_{i-j}^{p^j}`.

mod derive;
mod points;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fgl::{embed_base, honda, hn_adic_expand, Fgl};
use crate::galgebra::{tensor_power, AlgebraElement, AlgebraHom, AlgebraPresentation, CoeffRing, GeneratorSpec, Monomial, TensorProduct};
use crate::report::Check;
use crate::series::{even_vars, TruncatedSeries};

pub use derive::{derive_coproduct, derive_sigma_relations, ProductOrder, RelationDerivation};
pub use points::{convolution_points, convolve, counit_point, PointGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builder {
    SigmaBar,
    A,
    B,
    C,
    KK,
}

impl Builder {
    pub fn name(self) -> &'static str {
        match self {
            Self::SigmaBar => "sigma",
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::KK => "KK",
        }
    }

    pub fn all() -> [Builder; 5] {
        [Self::SigmaBar, Self::A, Self::B, Self::C, Self::KK]
    }
}

impl std::str::FromStr for Builder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma" | "sigma_bar" => Ok(Self::SigmaBar),
            "A" | "a" => Ok(Self::A),
            "B" | "b" => Ok(Self::B),
            "C" | "c" => Ok(Self::C),
            "KK" | "kk" => Ok(Self::KK),
            _ => Err(Error::Config(format!("unknown Hopf algebra '{s}' (sigma, A, B, C, KK)"))),
        }
    }
}

/// Which coefficient of the universal automorphism a generator stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    T(u32),
    Xi(u32),
    Tau(u32),
}

#[derive(Clone, Debug)]
pub struct HopfPresentation {
    builder: Builder,
    window: u32,
    alg: Arc<AlgebraPresentation>,
    roles: Vec<Role>,
    hh: TensorProduct,
    coproduct: Vec<AlgebraElement>,
    counit: Vec<AlgebraElement>,
    antipode: Vec<OnceLock<AlgebraElement>>,
}

fn base(p: u32, n: u32) -> Result<Arc<AlgebraPresentation>> {
    Ok(Arc::new(AlgebraPresentation::base(p, n, CoeffRing::Kn)?))
}

/// Order of the Honda law needed to read off window `m`.
pub fn law_order(p: u32, m: u32) -> u32 {
    p.pow(m) + 1
}

fn sigma_gens(p: u32, m: u32) -> Vec<GeneratorSpec> {
    (1..=m).map(|i| GeneratorSpec::new(format!("t{i}"), 2 - 2 * (p as i64).pow(i))).collect()
}

fn tau_gens(p: u32, n: u32) -> Vec<GeneratorSpec> {
    (0..n).map(|i| GeneratorSpec::new(format!("tau{i}"), 1 - 2 * (p as i64).pow(i))).collect()
}

fn xi_gens(p: u32, n: u32) -> Vec<GeneratorSpec> {
    (1..n).map(|i| GeneratorSpec::new(format!("xi{i}"), 2 - 2 * (p as i64).pow(i))).collect()
}

/// Add `t_i^{p^n} = v^{p^i-1} t_i` for the first `m` generators.
fn add_sigma_rules(a: &mut AlgebraPresentation, m: u32) -> Result<()> {
    let (p, n) = (a.p(), a.height());
    for i in 1..=m {
        let g = i as usize - 1;
        let rhs = a.shift_v(&a.gen(g), p.pow(i) as i64 - 1);
        a.add_rule(g, p.pow(n), rhs)?;
    }
    Ok(())
}

/// Algebra maps `H⊗H → H^{⊗3}` putting the pair into slots `(s, s+1)`.
fn shift_map(hh: &TensorProduct, h3: &TensorProduct, s: usize) -> Result<AlgebraHom> {
    let ng = hh.alg.ngens() / 2;
    let images = (0..2 * ng).map(|i| h3.alg.gen(h3.gen_index(s + i / ng, i % ng))).collect();
    AlgebraHom::new_unchecked(hh.alg.clone(), h3.alg.clone(), images)
}

impl HopfPresentation {
    /// Assemble from a coproduct table; Δ values are in `tensor_power(alg, 2)`.
    pub fn from_parts(
        builder: Builder,
        window: u32,
        alg: Arc<AlgebraPresentation>,
        roles: Vec<Role>,
        coproduct: Vec<AlgebraElement>,
    ) -> Result<Self> {
        let hh = tensor_power(&alg, 2)?;
        if roles.len() != alg.ngens() || coproduct.len() != alg.ngens() {
            return Err(Error::Construction("one role and one coproduct value per generator".into()));
        }
        let k = base(alg.p(), alg.height())?;
        let counit = vec![k.zero(); alg.ngens()];
        let antipode = vec![OnceLock::new(); alg.ngens()];
        Ok(Self { builder, window, alg, roles, hh, coproduct, counit, antipode })
    }

    pub fn sigma_bar(p: u32, n: u32, m: u32) -> Result<Self> {
        let mut a = AlgebraPresentation::new(p, n, CoeffRing::Kn, sigma_gens(p, m))?.with_label("sigma_bar");
        add_sigma_rules(&mut a, m)?;
        let alg = Arc::new(a);
        let hh = tensor_power(&alg, 2)?;
        let delta = sigma_bar_table(&alg, &hh, m)?;
        Self::from_parts(Builder::SigmaBar, m, alg, (1..=m).map(Role::T).collect(), delta)
    }

    pub fn a_star(p: u32, n: u32) -> Result<Self> {
        let alg = Arc::new(AlgebraPresentation::new(p, n, CoeffRing::Kn, xi_gens(p, n))?.with_label("A"));
        let hh = tensor_power(&alg, 2)?;
        let t = |slot: usize, i: u32| -> AlgebraElement {
            if i == 0 {
                hh.alg.one()
            } else {
                hh.alg.gen(hh.gen_index(slot, i as usize - 1))
            }
        };
        let delta = (1..n).map(|k| witt_sum(&hh.alg, k, |i| t(0, i), |i| t(1, i))).collect();
        Self::from_parts(Builder::A, n.saturating_sub(1), alg, (1..n).map(Role::Xi).collect(), delta)
    }

    pub fn b_star(p: u32, n: u32) -> Result<Self> {
        let mut gens = xi_gens(p, n);
        gens.extend(tau_gens(p, n));
        let alg = Arc::new(AlgebraPresentation::new(p, n, CoeffRing::Kn, gens)?.with_label("B"));
        let roles: Vec<Role> = (1..n).map(Role::Xi).chain((0..n).map(Role::Tau)).collect();
        let hh = tensor_power(&alg, 2)?;
        let delta = odd_even_table(&alg, &hh, &roles, n - 1, false)?;
        Self::from_parts(Builder::B, n - 1, alg, roles, delta)
    }

    pub fn c_star(p: u32, n: u32, m: u32) -> Result<Self> {
        Self::with_tau(p, n, m, false)
    }

    pub fn kk(p: u32, n: u32, m: u32) -> Result<Self> {
        Self::with_tau(p, n, m, true)
    }

    fn with_tau(p: u32, n: u32, m: u32, conjugate: bool) -> Result<Self> {
        if m + 1 < n {
            return Err(Error::WindowTooSmall(format!("Δ(τ_{}) needs window ≥ {}", n - 1, n - 1)));
        }
        let mut gens = sigma_gens(p, m);
        gens.extend(tau_gens(p, n));
        let label = if conjugate { "KK" } else { "C" };
        let mut a = AlgebraPresentation::new(p, n, CoeffRing::Kn, gens)?.with_label(label);
        add_sigma_rules(&mut a, m)?;
        let alg = Arc::new(a);
        let roles: Vec<Role> = (1..=m).map(Role::T).chain((0..n).map(Role::Tau)).collect();
        let hh = tensor_power(&alg, 2)?;
        let mut delta = sigma_bar_table(&alg, &hh, m)?;
        if conjugate {
            let tw = twist_map(&hh)?;
            delta = delta.iter().map(|d| tw.apply(d)).collect();
        }
        let tau = odd_even_table(&alg, &hh, &roles, m, conjugate)?;
        delta.extend(tau.into_iter().skip(m as usize));
        Self::from_parts(if conjugate { Builder::KK } else { Builder::C }, m, alg, roles, delta)
    }

    pub fn build(which: Builder, p: u32, n: u32, m: u32) -> Result<Self> {
        match which {
            Builder::SigmaBar => Self::sigma_bar(p, n, m),
            Builder::A => Self::a_star(p, n),
            Builder::B => Self::b_star(p, n),
            Builder::C => Self::c_star(p, n, m),
            Builder::KK => Self::kk(p, n, m),
        }
    }

    pub fn builder(&self) -> Builder {
        self.builder
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn alg(&self) -> &Arc<AlgebraPresentation> {
        &self.alg
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role_index(&self, r: Role) -> Option<usize> {
        self.roles.iter().position(|&x| x == r)
    }

    /// `H ⊗ H` with generators suffixed `_1`, `_2`.
    pub fn hh(&self) -> &TensorProduct {
        &self.hh
    }

    pub fn coproduct_table(&self) -> &[AlgebraElement] {
        &self.coproduct
    }

    pub fn counit_table(&self) -> &[AlgebraElement] {
        &self.counit
    }

    /// Copy with one coproduct value replaced (for negative controls).
    pub fn with_coproduct(&self, g: usize, value: AlgebraElement) -> Self {
        let mut h = self.clone();
        h.coproduct[g] = value;
        h.antipode = vec![OnceLock::new(); self.alg.ngens()];
        h
    }

    pub fn coproduct_map(&self) -> Result<AlgebraHom> {
        AlgebraHom::new_unchecked(self.alg.clone(), self.hh.alg.clone(), self.coproduct.clone())
    }

    /// Multiplicative extension of the table.
    pub fn coproduct(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        Ok(self.coproduct_map()?.apply(a))
    }

    fn counit_in_h(&self) -> Result<Vec<AlgebraElement>> {
        let k = base(self.alg.p(), self.alg.height())?;
        self.counit.iter().map(|c| embed_base(&k, &self.alg, c)).collect()
    }

    /// `H⊗H → H`, `a⊗b ↦ l(a) r(b)` for algebra maps `l`, `r` given on generators.
    fn fold(&self, left: &[AlgebraElement], right: &[AlgebraElement]) -> Result<AlgebraHom> {
        let images = left.iter().chain(right).cloned().collect();
        AlgebraHom::new_unchecked(self.hh.alg.clone(), self.alg.clone(), images)
    }

    /// Conjugation on a generator, by recursion on the coproduct: `c(g)` solves
    /// `Σ c(g') g'' = ε(g)`. Requires every term of `Δ(g)` other than `g⊗1` to
    /// have a left factor free of `g`.
    pub fn antipode(&self, g: usize) -> Result<AlgebraElement> {
        self.antipode_rec(g, &mut vec![false; self.alg.ngens()])
    }

    fn antipode_rec(&self, g: usize, visiting: &mut Vec<bool>) -> Result<AlgebraElement> {
        if let Some(c) = self.antipode[g].get() {
            return Ok(c.clone());
        }
        if visiting[g] {
            return Err(Error::NotRecursive(format!("Δ({}) refers back to itself", self.alg.generators()[g].name)));
        }
        visiting[g] = true;
        let a = &self.alg;
        let ng = a.ngens();
        let mut g_left = Monomial::one(2 * ng);
        g_left.exps[g] = 1;
        let mut sum = self.counit_in_h()?[g].clone();
        sum = a.neg(&sum);
        for (m, c) in self.coproduct[g].terms() {
            if *m == g_left {
                continue;
            }
            let parts = self.hh.split(m);
            let (l, r) = (&parts[0], &parts[1]);
            if l.exps[g] > 0 {
                return Err(Error::NotRecursive(format!(
                    "Δ({}) has the term {} with {} on the left",
                    a.generators()[g].name,
                    self.hh.alg.render_monomial(m),
                    a.generators()[g].name
                )));
            }
            let mut cl = a.v_pow(l.v);
            for (i, &e) in l.exps.iter().enumerate() {
                if e > 0 {
                    let ci = self.antipode_rec(i, visiting)?;
                    cl = a.mul(&cl, &a.pow(&ci, e as u64));
                }
            }
            let rr = a.term(r.clone(), c.clone());
            sum = a.add(&sum, &a.mul(&cl, &rr));
        }
        visiting[g] = false;
        let c = a.neg(&sum);
        Ok(self.antipode[g].get_or_init(|| c).clone())
    }

    pub fn antipode_images(&self) -> Result<Vec<AlgebraElement>> {
        (0..self.alg.ngens()).map(|g| self.antipode(g)).collect()
    }

    /// The conjugation extended as an algebra map (graded-commutative, so
    /// the anti-homomorphism is a homomorphism).
    pub fn antipode_map(&self) -> Result<AlgebraHom> {
        AlgebraHom::new_unchecked(self.alg.clone(), self.alg.clone(), self.antipode_images()?)
    }

    /// Default degree bound for axiom checks: `3·max |deg g|`.
    pub fn default_degree_bound(&self) -> i64 {
        3 * self.alg.generators().iter().map(|g| g.degree.abs()).max().unwrap_or(0)
    }

    /// Monomials that are products of 1 to 3 generators with `|deg| ≤ bound`.
    pub fn sample_monomials(&self, bound: i64) -> Vec<(String, AlgebraElement)> {
        let a = &self.alg;
        let ng = a.ngens();
        let mut out = Vec::new();
        let mut push = |idx: &[usize]| {
            let deg: i64 = idx.iter().map(|&i| a.generators()[i].degree).sum();
            if deg.abs() > bound {
                return;
            }
            let mut e = a.one();
            for &i in idx {
                e = a.mul(&e, &a.gen(i));
            }
            if !e.is_zero() {
                let name = idx.iter().map(|&i| a.generators()[i].name.as_str()).collect::<Vec<_>>().join("*");
                out.push((name, e));
            }
        };
        for i in 0..ng {
            push(&[i]);
            for j in i..ng {
                push(&[i, j]);
                for k in j..ng {
                    push(&[i, j, k]);
                }
            }
        }
        out
    }

    pub fn render_tensor(&self, t: &AlgebraElement) -> String {
        render_tensor(&self.alg, &self.hh, t)
    }

    pub fn to_json(&self) -> Value {
        let a = &self.alg;
        json!({
            "builder": self.builder.name(),
            "p": a.p(),
            "n": a.height(),
            "window": self.window,
            "generators": a.generators().iter().map(|g| json!({"name": g.name, "degree": g.degree})).collect::<Vec<_>>(),
            "relations": a.rules().map(|r| format!("{}^{} = {}", a.generators()[r.gen].name, r.threshold, a.render(&r.rhs))).collect::<Vec<_>>(),
            "coproduct": a.generators().iter().zip(&self.coproduct)
                .map(|(g, d)| json!({"generator": g.name, "value": self.render_tensor(d)})).collect::<Vec<_>>(),
        })
    }
}

/// `Σ_{i=0}^k l(k-i)^{p^i} r(i)` with `l(0) = r(0) = 1`.
fn witt_sum(a: &AlgebraPresentation, k: u32, l: impl Fn(u32) -> AlgebraElement, r: impl Fn(u32) -> AlgebraElement) -> AlgebraElement {
    let p = a.p();
    let mut s = a.zero();
    for i in 0..=k {
        let li = a.pow(&l(k - i), p.pow(i) as u64);
        s = a.add(&s, &a.mul(&li, &r(i)));
    }
    s
}

/// `a⊗b ↦ ±b⊗a` as an algebra map of `H⊗H`.
fn twist_map(hh: &TensorProduct) -> Result<AlgebraHom> {
    let ng = hh.alg.ngens() / 2;
    let images = (0..2 * ng).map(|i| hh.alg.gen((i + ng) % (2 * ng))).collect();
    AlgebraHom::new_unchecked(hh.alg.clone(), hh.alg.clone(), images)
}

/// Even generator with role `T(i)`/`Xi(i)` at slot, or 1 for `i = 0`.
fn even_coeff(hh: &TensorProduct, roles: &[Role], slot: usize, i: u32) -> AlgebraElement {
    if i == 0 {
        return hh.alg.one();
    }
    let g = roles.iter().position(|r| matches!(r, Role::T(j) | Role::Xi(j) if *j == i)).expect("generator in window");
    hh.alg.gen(hh.gen_index(slot, g))
}

/// Coproduct table with `Δ(τ_k) = τ_k⊗1 + Σ_i ξ_{k-i}^{p^i}⊗τ_i` (or, when
/// `conjugate`, `1⊗τ_k + Σ_i τ_i⊗ξ_{k-i}^{p^i}`) and the Witt-type formula for
/// the even generators up to index `even_top`.
fn odd_even_table(a: &AlgebraPresentation, hh: &TensorProduct, roles: &[Role], even_top: u32, conjugate: bool) -> Result<Vec<AlgebraElement>> {
    let h = &hh.alg;
    let p = a.p();
    let tau = |slot: usize, i: u32| -> AlgebraElement {
        let g = roles.iter().position(|r| *r == Role::Tau(i)).expect("tau in table");
        h.gen(hh.gen_index(slot, g))
    };
    let mut out = Vec::new();
    for r in roles {
        out.push(match *r {
            Role::T(k) | Role::Xi(k) => {
                if k > even_top {
                    return Err(Error::Construction(format!("generator index {k} beyond window {even_top}")));
                }
                witt_sum(h, k, |i| even_coeff(hh, roles, 0, i), |i| even_coeff(hh, roles, 1, i))
            }
            Role::Tau(k) => {
                let (ls, rs) = if conjugate { (1, 0) } else { (0, 1) };
                let mut s = tau(ls, k);
                for i in 0..=k {
                    let xi = h.pow(&even_coeff(hh, roles, ls, k - i), p.pow(i) as u64);
                    let term = if conjugate { h.mul(&tau(rs, i), &xi) } else { h.mul(&xi, &tau(rs, i)) };
                    s = h.add(&s, &term);
                }
                s
            }
        });
    }
    Ok(out)
}

/// `Δ(t_1..t_m)` from `Σ^{H_n}_{i+j≤m} (t_i^{p^j}⊗t_j) x^{p^{i+j}}`.
fn sigma_bar_table(alg: &AlgebraPresentation, hh: &TensorProduct, m: u32) -> Result<Vec<AlgebraElement>> {
    if m == 0 {
        return Ok(Vec::new());
    }
    let (p, n) = (alg.p(), alg.height());
    let order = law_order(p, m);
    let law = honda(p, n, order)?.fgl.base_change(hh.alg.clone())?;
    let h = &hh.alg;
    let roles: Vec<Role> = (1..=m).map(Role::T).collect();
    let mut items = Vec::new();
    for i in 0..=m {
        for j in 0..=(m - i) {
            let c = h.mul(&h.pow(&even_coeff(hh, &roles, 0, i), p.pow(j) as u64), &even_coeff(hh, &roles, 1, j));
            let e = smallvec::smallvec![p.pow(i + j)];
            items.push(TruncatedSeries::from_terms(even_vars(&["x"]), order, h.clone(), 2, [(e, c)])?);
        }
    }
    let s = law.formal_sum(&items)?;
    let coeffs = hn_adic_expand(&law, &s, m)?;
    Ok(coeffs[1..].to_vec())
}

/// The law needed by `derive_coproduct` for a window, over `H⊗H`.
pub(crate) fn law_over(p: u32, n: u32, m: u32, over: &Arc<AlgebraPresentation>) -> Result<Arc<Fgl>> {
    Ok(Arc::new(honda(p, n, law_order(p, m))?.fgl.base_change(over.clone())?))
}


pub fn render_tensor(a: &AlgebraPresentation, hh: &TensorProduct, t: &AlgebraElement) -> String {
    if t.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in t.terms().iter().enumerate() {
        let parts = hh.split(m);
        let l = a.render(&a.term(parts[0].clone(), c.clone()));
        let r = a.render(&a.term(parts[1].clone(), a.field().one()));
        let s = format!("{l}⊗{r}");
        match s.strip_prefix('-') {
            Some(rest) if k > 0 => out.push_str(&format!(" - {rest}")),
            _ if k > 0 => out.push_str(&format!(" + {s}")),
            _ => out.push_str(&s),
        }
    }
    out
}

/// Coassociativity, counit, algebra-map and antipode checks on generators
/// and on products of up to three generators within `|deg| ≤ bound`.
pub fn verify_hopf_axioms(h: &HopfPresentation, bound: i64) -> Result<Vec<Check>> {
    let a = &h.alg;
    let ng = a.ngens();
    let names: Vec<&str> = a.generators().iter().map(|g| g.name.as_str()).collect();
    let mut out = Vec::new();

    let mut deg_fail = None;
    for (i, d) in h.coproduct.iter().enumerate() {
        if !h.hh.alg.is_homogeneous_of(d, a.generators()[i].degree) {
            deg_fail = Some(format!("Δ({}) = {}", names[i], h.render_tensor(d)));
            break;
        }
    }
    out.push(Check::from_witness("Δ preserves degree", deg_fail));
    let delta = h.coproduct_map()?;
    out.push(Check::from_witness("Δ respects the relations", delta.relation_failure()));

    let h3 = tensor_power(a, 3)?;
    let e01 = shift_map(&h.hh, &h3, 0)?;
    let e12 = shift_map(&h.hh, &h3, 1)?;
    let left_imgs: Vec<_> = h.coproduct.iter().map(|d| e01.apply(d)).chain((0..ng).map(|g| h3.alg.gen(h3.gen_index(2, g)))).collect();
    let right_imgs: Vec<_> = (0..ng).map(|g| h3.alg.gen(h3.gen_index(0, g))).chain(h.coproduct.iter().map(|d| e12.apply(d))).collect();
    let d1 = AlgebraHom::new_unchecked(h.hh.alg.clone(), h3.alg.clone(), left_imgs)?;
    let d2 = AlgebraHom::new_unchecked(h.hh.alg.clone(), h3.alg.clone(), right_imgs)?;

    let eps = h.counit_in_h()?;
    let ids: Vec<_> = (0..ng).map(|g| a.gen(g)).collect();
    let eps_l = h.fold(&eps, &ids)?;
    let eps_r = h.fold(&ids, &eps)?;

    let sample = h.sample_monomials(bound);
    let mut coassoc = None;
    let mut counit = None;
    for (name, x) in &sample {
        let dx = delta.apply(x);
        if coassoc.is_none() {
            let (l, r) = (d1.apply(&dx), d2.apply(&dx));
            if l != r {
                coassoc = Some(format!("on {name}: {} vs {}", h3.alg.render(&l), h3.alg.render(&r)));
            }
        }
        if counit.is_none() {
            let (l, r) = (eps_l.apply(&dx), eps_r.apply(&dx));
            if l != *x || r != *x {
                counit = Some(format!("on {name}: {} / {}", a.render(&l), a.render(&r)));
            }
        }
    }
    out.push(Check::from_witness(format!("coassociativity ({} monomials, |deg| ≤ {bound})", sample.len()), coassoc));
    out.push(Check::from_witness(format!("counit ({} monomials)", sample.len()), counit));

    match h.antipode_images() {
        Err(e) => out.push(Check::fail("antipode by recursion", e.to_string())),
        Ok(c) => {
            let lc = h.fold(&c, &ids)?;
            let rc = h.fold(&ids, &c)?;
            let cm = h.antipode_map()?;
            let mut w = None;
            let mut ww = None;
            for g in 0..ng {
                let dg = &h.coproduct[g];
                let (l, r) = (lc.apply(dg), rc.apply(dg));
                if w.is_none() && (l != eps[g] || r != eps[g]) {
                    w = Some(format!("on {}: μ(c⊗1)Δ = {}, μ(1⊗c)Δ = {}", names[g], a.render(&l), a.render(&r)));
                }
                if ww.is_none() && cm.apply(&c[g]) != a.gen(g) {
                    ww = Some(format!("c(c({})) = {}", names[g], a.render(&cm.apply(&c[g]))));
                }
            }
            out.push(Check::from_witness("antipode: μ(c⊗1)Δ = ηε = μ(1⊗c)Δ", w));
            out.push(Check::from_witness("antipode: c∘c = id", ww));
        }
    }
    Ok(out)
}

/// Table of `Δ` values keyed by generator name, for comparisons.
pub fn coproduct_by_name(h: &HopfPresentation) -> HashMap<String, String> {
    h.alg
        .generators()
        .iter()
        .zip(&h.coproduct)
        .map(|(g, d)| (g.name.clone(), h.render_tensor(d)))
        .collect()
}

#[cfg(test)]
mod tests;
