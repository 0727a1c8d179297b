//! The verification matrix: each criterion as a function returning checks,
//! shared by the `suite` command and the acceptance tests.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autgroups::{alpha, beta, even_coeff_degree, odd_coeff_degree, GroupElement, QuasiStrictAutGA, StrictAutGa, StrictAutHn};
use crate::error::{Error, Result};
use crate::fgl::{build_honda, honda, verify_honda, Fgl};
use crate::fiberprod::{corep_order, corepresentability_check, kappa_between, kappa_star, mutated_kk, pushout, FiberElement, Functor};
use crate::galgebra::{basis_in_degree, parse_presentation, AlgebraElement, AlgebraPresentation, RawTerm, Scalar};
use crate::hopf::{derive_coproduct, derive_sigma_relations, verify_hopf_axioms, Builder, HopfPresentation, ProductOrder};
use crate::report::{Check, Status};
use crate::series::{even_vars, TruncatedSeries};

/// Turn an error into a failing check so one broken item does not hide the rest.
fn guard(name: &str, r: Result<Vec<Check>>) -> Vec<Check> {
    r.unwrap_or_else(|e| vec![Check::fail(name, e.to_string())])
}

fn prefixed(tag: &str, cs: Vec<Check>) -> Vec<Check> {
    cs.into_iter().map(|c| Check { name: format!("{tag} {}", c.name), ..c }).collect()
}

// ---- test algebras ------------------------------------------------------

/// The shipped coefficient algebras for `(p, n)`: `K(n)_*`, dual numbers with
/// `ε` in degree −1 and `2−2p`, and `K(n)_*[u]/(u^3)` with `deg u = 2−2p`.
pub fn test_algebra_texts(p: u32, n: u32) -> Vec<(String, String)> {
    let e = 2 - 2 * p as i64;
    let head = format!("prime {p}\nheight {n}\n");
    vec![
        (format!("K({n})_*"), format!("{head}name K({n})_*\n")),
        ("dual(-1)".into(), format!("{head}name dual(-1)\ngen eps deg -1\n")),
        (format!("dual({e})"), format!("{head}name dual({e})\ngen eps deg {e}\nrel eps^2 -> 0\n")),
        (format!("trunc({e},3)"), format!("{head}name trunc({e},3)\ngen u deg {e}\nrel u^3 -> 0\n")),
    ]
}

pub fn test_algebras(p: u32, n: u32) -> Result<Vec<(String, Arc<AlgebraPresentation>)>> {
    test_algebra_texts(p, n).into_iter().map(|(name, t)| Ok((name, Arc::new(parse_presentation(&t)?)))).collect()
}

/// The algebras corepresentability is certified on: the first three.
pub fn corep_algebras(p: u32, n: u32) -> Result<Vec<(String, Arc<AlgebraPresentation>)>> {
    Ok(test_algebras(p, n)?.into_iter().take(3).collect())
}

// ---- 1, 2: Honda ---------------------------------------------------------

pub fn honda_order(p: u32, n: u32) -> u32 {
    p.pow(n) + p + 1
}

pub fn honda_criterion(p: u32, n: u32) -> Vec<Check> {
    let order = honda_order(p, n);
    let tag = format!("[honda p={p} n={n} N={order}]");
    guard(&tag, (|| {
        let h = build_honda(p, n, order)?;
        let mut cs = h.lift_checks.clone();
        cs.extend(verify_honda(&h));
        Ok(prefixed(&tag, cs))
    })())
}

pub fn chunk_criterion(p: u32, n: u32) -> Vec<Check> {
    let tag = format!("[chunk p={p} n={n}]");
    guard(&tag, (|| {
        let pn = p.pow(n);
        let h = honda(p, n, honda_order(p, n))?;
        let c = h.fgl.chunk(pn - 1);
        let add = Fgl::additive(c.alg().clone(), c.order());
        let w = c.series().first_difference(add.series()).map(|(e, a, b)| format!("at {e:?}: {} vs {}", c.alg().render(&a), c.alg().render(&b)));
        let mut cs = vec![Check::from_witness(format!("size-{} chunk is x + y", pn - 1), w)];
        let ps = c.p_series()?;
        cs.push(Check::from_witness(format!("[p](x) ≡ 0 mod x^{pn}"), (!ps.is_zero()).then(|| ps.render())));
        // the next size is not additive any more
        let next = h.fgl.chunk(pn);
        cs.push(Check::from_witness(format!("size-{pn} chunk is not additive"), next.is_additive().then(|| "still additive".to_string())));
        Ok(prefixed(&tag, cs))
    })())
}

// ---- 3: coproduct derivation --------------------------------------------

fn derived(h: &HopfPresentation) -> Result<Vec<Check>> {
    Ok(derive_coproduct(h, ProductOrder::default_for(h.builder()))?.1)
}

/// `A_*`, `B_*`, `Σ̄(n)` at windows `1..=m`, and `C_*` via the pushout at
/// window `max(n-1, 1)`.
pub fn derivation_criterion(p: u32, n: u32, m: u32) -> Vec<Check> {
    let mut out = Vec::new();
    let tag = format!("[derive p={p} n={n}]");
    out.extend(guard(&format!("{tag} A_*"), HopfPresentation::a_star(p, n).and_then(|h| derived(&h)).map(|c| prefixed(&format!("{tag} A_*"), c))));
    out.extend(guard(&format!("{tag} B_*"), HopfPresentation::b_star(p, n).and_then(|h| derived(&h)).map(|c| prefixed(&format!("{tag} B_*"), c))));
    for w in 1..=m {
        let t = format!("{tag} sigma m={w}");
        out.extend(guard(&t, HopfPresentation::sigma_bar(p, n, w).and_then(|h| derived(&h)).map(|c| prefixed(&t, c))));
    }
    let wc = n.saturating_sub(1).max(1);
    let t = format!("{tag} C_* m={wc}");
    out.extend(guard(&t, (|| {
        let po = pushout(p, n, wc)?;
        let mut cs = po.checks.clone();
        cs.extend(derived(&po.hopf)?);
        Ok(prefixed(&t, cs))
    })()));
    out
}

// ---- 4: Hopf axioms -----------------------------------------------------

pub fn axioms_criterion(p: u32, n: u32, m: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for which in Builder::all() {
        let w = if matches!(which, Builder::C | Builder::KK) { m.max(n.saturating_sub(1)) } else { m };
        let t = format!("[axioms {} p={p} n={n} m={w}]", which.name());
        out.extend(guard(&t, (|| {
            let h = HopfPresentation::build(which, p, n, w)?;
            Ok(prefixed(&t, verify_hopf_axioms(&h, h.default_degree_bound())?))
        })()));
    }
    out
}

/// Dropping `t1⊗τ0` from `Δ(τ1)` in `C_*(3, 3, 2)` must break coassociativity.
pub fn axioms_negative_control() -> Check {
    let name = "[axioms control] mutated Δ(τ1) fails coassociativity";
    let r = (|| -> Result<bool> {
        let h = HopfPresentation::c_star(3, 3, 2)?;
        let hh = h.hh();
        let g = h.alg().gen_index("tau1")?;
        let drop = hh.alg.mul(&hh.alg.gen(hh.gen_index(0, h.alg().gen_index("t1")?)), &hh.alg.gen(hh.gen_index(1, h.alg().gen_index("tau0")?)));
        let bad = h.with_coproduct(g, hh.alg.sub(&h.coproduct_table()[g], &drop));
        let cs = verify_hopf_axioms(&bad, bad.default_degree_bound())?;
        Ok(cs.iter().any(|c| c.name.starts_with("coassociativity") && c.status == Status::Fail))
    })();
    match r {
        Ok(true) => Check::pass(name),
        Ok(false) => Check::fail(name, "the mutation went unnoticed"),
        Err(e) => Check::fail(name, e.to_string()),
    }
}

// ---- 5: relations -------------------------------------------------------

pub fn relations_criterion() -> Vec<Check> {
    let t = "[relations p=3 n=1 m=1 N=28]";
    guard(t, derive_sigma_relations(3, 1, 1, 28, 1).map(|d| prefixed(t, d.checks)))
}

// ---- 6: corepresentability ----------------------------------------------

/// Closed-form size of the functor's value at `K(n)_*[ε]/(ε²)` (no `ε` when
/// `eps` is `None`), window `m`. A generator with relation
/// `x^{p^n} = v^{p^i-1} x` only admits `λ v^k` (nilpotents die), so `p` choices
/// when `deg v` divides its degree and 1 otherwise; an unconstrained generator
/// takes any value in a component of dimension `[deg v | d] + [deg v | d - deg ε]`.
pub fn degree_count(functor: Functor, p: u32, n: u32, m: u32, eps: Option<i64>) -> u64 {
    let vd = -2 * ((p as i64).pow(n) - 1);
    let p64 = p as u64;
    let dim = |d: i64| component_dim(p, n, d, eps);
    let rel = |i: u32| if even_coeff_degree(p, i) % vd == 0 { p64 } else { 1 };
    let free = |d: i64| p64.pow(dim(d));
    let ts: u64 = (1..=m).map(rel).product();
    let xis: u64 = (1..n).map(|i| free(even_coeff_degree(p, i))).product();
    let taus: u64 = (0..n).map(|i| free(odd_coeff_degree(p, i))).product();
    match functor {
        Functor::Hn => ts,
        Functor::Ga => xis,
        Functor::GA => xis * taus,
        Functor::C => ts * taus,
    }
}

/// `dim_{F_p}` of the degree-`d` part of `K(n)_*[ε]/(ε²)`.
pub fn component_dim(p: u32, n: u32, d: i64, eps: Option<i64>) -> u32 {
    let vd = -2 * ((p as i64).pow(n) - 1);
    (d % vd == 0) as u32 + eps.map_or(0, |e| ((d - e) % vd == 0) as u32)
}

pub fn corep_criterion(p: u32, n: u32, m: u32, bound: u32) -> Vec<Check> {
    let mut out = Vec::new();
    let algs = match corep_algebras(p, n) {
        Ok(a) => a,
        Err(e) => return vec![Check::fail("[corep] test algebras", e.to_string())],
    };
    let eps = [None, Some(-1), Some(2 - 2 * p as i64)];
    for ((name, r), e) in algs.iter().zip(eps) {
        for f in Functor::all() {
            let t = format!("[corep {} over {name} p={p} n={n} m={m}]", f.name());
            out.extend(guard(&t, (|| {
                let c = corepresentability_check(f, p, n, m, r, bound)?;
                let mut cs = c.checks.clone();
                let k = degree_count(f, p, n, m, e);
                cs.push(Check::from_witness(
                    format!("degree-arithmetic count {k}"),
                    (k != c.values.len() as u64).then(|| format!("enumerated {}", c.values.len())),
                ));
                Ok(prefixed(&t, cs))
            })()));
        }
    }
    out
}

// ---- 7: κ_* -------------------------------------------------------------

pub fn kappa_criterion(p: u32, n: u32, m: u32, band: (i64, i64)) -> Vec<Check> {
    let t = format!("[kappa p={p} n={n} m={m}]");
    let mut out = guard(&t, kappa_star(p, n, m, band).map(|k| prefixed(&t, k.checks)));
    let name = format!("{t} control: relation mutation v t^{{p^n}} = v^{{p^i+1}} t fails the algebra-map check");
    let r = (|| -> Result<bool> {
        let k = kappa_between(HopfPresentation::c_star(p, n, m)?, mutated_kk(p, n, m)?, (0, 0))?;
        Ok(k.checks.first().is_some_and(|c| c.status == Status::Fail))
    })();
    out.push(match r {
        Ok(true) => Check::pass(name),
        Ok(false) => Check::fail(name, "the mutation went unnoticed"),
        Err(e) => Check::fail(name, e.to_string()),
    });
    out
}

// ---- 8: seeded property suites ------------------------------------------

/// `K(n)_*[u, eps]/(u^{2p})`, `deg u = 2-2p`, `eps` odd of degree −1: big enough
/// for random group elements, small enough to stay finite degreewise.
pub fn property_ring(p: u32, n: u32) -> Result<Arc<AlgebraPresentation>> {
    let text = format!("prime {p}\nheight {n}\nname prop\ngen u deg {}\ngen eps deg -1\nrel u^{} -> 0\n", 2 - 2 * p as i64, 2 * p);
    Ok(Arc::new(parse_presentation(&text)?))
}

/// Truncation for random `H_n`-automorphisms: below `p^{n+1} - p^n + 1` no
/// relation of `Σ̄(n)` is visible, so every coefficient choice is allowed.
pub fn property_order(p: u32, n: u32) -> u32 {
    p.pow(n + 1) - p.pow(n) + 1
}

struct Gen {
    r: Arc<AlgebraPresentation>,
    rng: ChaCha8Rng,
    law: Arc<Fgl>,
    window: u32,
}

impl Gen {
    fn new(p: u32, n: u32, seed: u64) -> Result<Self> {
        let r = property_ring(p, n)?;
        let order = property_order(p, n);
        let law = Arc::new(honda(p, n, order)?.fgl.base_change(r.clone())?);
        let window = StrictAutHn::max_window(&law);
        Ok(Self { r, rng: ChaCha8Rng::seed_from_u64(seed), law, window })
    }

    fn element(&mut self, d: i64) -> Result<AlgebraElement> {
        let basis = basis_in_degree(&self.r, d, 1)?;
        let p = self.r.p();
        let terms: Vec<_> = basis.into_iter().map(|m| (m, Scalar::Fp(self.rng.gen_range(0..p)))).filter(|(_, c)| *c != Scalar::Fp(0)).collect();
        self.r.from_terms(terms)
    }

    fn hn(&mut self) -> Result<StrictAutHn> {
        let p = self.r.p();
        let mut c = vec![self.r.one()];
        for i in 1..=self.window {
            c.push(self.element(even_coeff_degree(p, i))?);
        }
        StrictAutHn::new(self.law.clone(), c)
    }

    fn ga(&mut self) -> Result<StrictAutGa> {
        let p = self.r.p();
        let mut c = vec![self.r.one()];
        for i in 1..self.r.height() {
            c.push(self.element(even_coeff_degree(p, i))?);
        }
        StrictAutGa::new(self.r.clone(), c)
    }

    fn quasi(&mut self, even: Option<Vec<AlgebraElement>>) -> Result<QuasiStrictAutGA> {
        let p = self.r.p();
        let n = self.r.height();
        let odd = (0..n).map(|i| self.element(odd_coeff_degree(p, i))).collect::<Result<Vec<_>>>()?;
        let even = match even {
            Some(e) => e,
            None => std::iter::once(Ok(self.r.one())).chain((1..n).map(|i| self.element(even_coeff_degree(p, i)))).collect::<Result<Vec<_>>>()?,
        };
        QuasiStrictAutGA::new(self.r.clone(), odd, even)
    }

    fn fiber(&mut self) -> Result<FiberElement> {
        let f = self.hn()?;
        let g = self.quasi(Some(alpha(&f)?.coeffs().to_vec()))?;
        FiberElement::new(f, g)
    }

    fn series(&mut self) -> Result<TruncatedSeries> {
        let order = 2 * self.r.p() + 3;
        let mut terms = Vec::new();
        for k in 1..order {
            let c = self.element(2 - 2 * k as i64)?;
            terms.push((smallvec::smallvec![k], c));
        }
        TruncatedSeries::from_terms(even_vars(&["x"]), order, self.r.clone(), 2, terms)
    }

    fn raw_terms(&mut self) -> Vec<RawTerm> {
        let ng = self.r.ngens();
        let p = self.r.p();
        (0..self.rng.gen_range(1..5))
            .map(|_| RawTerm {
                coef: Scalar::Fp(self.rng.gen_range(0..p)),
                v: self.rng.gen_range(-2..3),
                factors: (0..self.rng.gen_range(0..4)).map(|_| (self.rng.gen_range(0..ng), self.rng.gen_range(0..12))).collect(),
            })
            .collect()
    }
}

/// Run `cases` instances of `prop`; fail with the seed and case number.
fn property(name: &str, seed: u64, cases: usize, mut prop: impl FnMut(usize) -> Result<Option<String>>) -> Check {
    for k in 0..cases {
        match prop(k) {
            Ok(None) => {}
            Ok(Some(w)) => return Check::fail(name, format!("seed {seed} case {k}: {w}")),
            Err(e) => return Check::fail(name, format!("seed {seed} case {k}: {e}")),
        }
    }
    Check::pass(name)
}

fn group_laws<T: GroupElement>(tag: &str, seed: u64, cases: usize, mut gen: impl FnMut() -> Result<T>) -> Vec<Check> {
    let assoc = property(&format!("{tag} associativity ({cases} cases)"), seed, cases, |_| {
        let (a, b, c) = (gen()?, gen()?, gen()?);
        let l = a.compose(&b)?.compose(&c)?;
        let r = a.compose(&b.compose(&c)?)?;
        Ok((l != r).then(|| format!("{a:?} {b:?} {c:?}")))
    });
    let inv = property(&format!("{tag} inverses ({cases} cases)"), seed, cases, |_| {
        let a = gen()?;
        let i = a.invert()?;
        let id = a.identity_like();
        Ok((a.compose(&i)? != id || i.compose(&a)? != id).then(|| format!("{a:?}")))
    });
    vec![assoc, inv]
}

pub fn property_criterion(p: u32, n: u32, cases: usize, seed: u64) -> Vec<Check> {
    let tag = format!("[properties p={p} n={n} seed={seed}]");
    let mut g = match Gen::new(p, n, seed) {
        Ok(g) => g,
        Err(e) => return vec![Check::fail(tag, e.to_string())],
    };
    let mut out = Vec::new();
    out.extend(group_laws(&format!("{tag} Aut_Hn"), seed, cases, || g.hn()));
    out.extend(group_laws(&format!("{tag} Aut_ga"), seed, cases, || g.ga()));
    out.extend(group_laws(&format!("{tag} Aut_GA"), seed, cases, || g.quasi(None)));
    out.extend(group_laws(&format!("{tag} C"), seed, cases, || g.fiber()));
    out.push(property(&format!("{tag} alpha is a homomorphism ({cases} cases)"), seed, cases, |_| {
        let (a, b) = (g.hn()?, g.hn()?);
        Ok((alpha(&a.compose(&b)?)? != alpha(&a)?.compose(&alpha(&b)?)?).then(|| format!("{a:?} {b:?}")))
    }));
    out.push(property(&format!("{tag} beta is a homomorphism ({cases} cases)"), seed, cases, |_| {
        let (a, b) = (g.quasi(None)?, g.quasi(None)?);
        Ok((beta(&a.compose(&b)?)? != beta(&a)?.compose(&beta(&b)?)?).then(|| format!("{a:?} {b:?}")))
    }));
    out.push(property(&format!("{tag} projections of C commute with α, β ({cases} cases)"), seed, cases, |_| {
        let (a, b) = (g.fiber()?, g.fiber()?);
        let ab = a.compose(&b)?;
        let ok = ab.hn() == &a.hn().compose(b.hn())? && ab.ga() == &a.ga().compose(b.ga())? && alpha(ab.hn())? == beta(ab.ga())?;
        Ok((!ok).then(|| format!("{a:?} {b:?}")))
    }));
    out.push(property(&format!("{tag} Frobenius-twist law f^p = f^(p) ({cases} cases)"), seed, cases, |_| {
        let s = g.series()?;
        Ok((s.pow(p)? != s.frobenius()).then(|| s.render()))
    }));
    out.push(property(&format!("{tag} normalize is idempotent ({cases} cases)"), seed, cases, |_| {
        let raw = g.raw_terms();
        let a = g.r.normalize(&raw)?;
        let again: Vec<RawTerm> = a
            .terms()
            .iter()
            .map(|(m, c)| RawTerm { coef: c.clone(), v: m.v, factors: m.exps.iter().enumerate().map(|(i, &e)| (i, e)).collect() })
            .collect();
        Ok((g.r.normalize(&again)? != a).then(|| g.r.render(&a)))
    }));
    out
}

// ---- the whole suite ----------------------------------------------------

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub p: u32,
    pub n: u32,
    pub seed: u64,
    pub cases: usize,
    pub bound: u32,
}

/// Every criterion that applies at `(p, n)`; the relation-derivation and
/// control checks run at their fixed configurations.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (p, n) = (cfg.p, cfg.n);
    if p < 3 || !(2..p).all(|d| p % d != 0) || n == 0 {
        return Err(Error::Config(format!("need an odd prime p and n ≥ 1 (got p={p}, n={n})")));
    }
    let mut out = Vec::new();
    out.extend(honda_criterion(p, n));
    out.extend(chunk_criterion(p, n));
    out.extend(derivation_criterion(p, n, derivation_window(p)));
    out.extend(axioms_criterion(p, n, 2));
    out.push(axioms_negative_control());
    out.extend(relations_criterion());
    match corep_window(p, n) {
        Some(m) => out.extend(corep_criterion(p, n, m, cfg.bound)),
        None => out.push(Check::skipped(
            format!("[corep p={p} n={n}]"),
            format!("even window {} needs the law modulo x^{}", 1.max(n - 1), corep_order(p, n, 1.max(n - 1))),
        )),
    }
    out.extend(kappa_criterion(p, n, kappa_window(p, n), (-100, 0)));
    out.extend(property_criterion(p, n, cfg.cases, cfg.seed));
    Ok(out)
}

/// Largest `Σ̄` window derived (the universal elements need the law modulo
/// `x^{p^m+1}` over `Σ̄⊗Σ̄`).
pub fn derivation_window(_p: u32) -> u32 {
    3
}

/// Window for κ_*: 4 where the coproduct table is cheap (it needs the law
/// modulo `x^{p^m+1}` over `H⊗H`), i.e. the largest `m ≤ 4` with `p^m ≤ 125`,
/// but never below `max(n-1, 1)`.
pub fn kappa_window(p: u32, n: u32) -> u32 {
    (1..=4).rev().find(|&m| p.pow(m) <= 125).unwrap_or(1).max(n.saturating_sub(1)).max(1)
}

/// Window for corepresentability: the largest `m ≤ 3` (and at least
/// `max(n-1, 1)`, which `C` needs) whose homomorphism checks run at order
/// `N = p^{n+m}+1 ≤ 244`. Height 1 laws are dense and every `t_i` is free, so
/// there `N ≤ 30`.
pub fn corep_window(p: u32, n: u32) -> Option<u32> {
    let cap = if n == 1 { 30 } else { 244 };
    (1.max(n - 1)..=3).rev().find(|&m| corep_order(p, n, m) <= cap)
}
