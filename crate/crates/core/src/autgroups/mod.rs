//! Strict automorphisms of the Honda law `H_n`, of the additive chunk `g_a`
//! (size `p^n - 1`), and quasi-strict automorphisms of the 2-dimensional
//! additive law `G_a = (ε_1 + ε_2, x_1 + x_2)`, as concrete groups over a
//! coefficient algebra `R`.
//!
//! The product is reversed: `f·g` realizes `g∘f`.

use std::sync::Arc;

use serde_json::{json, Value};
use smallvec::smallvec;

use crate::error::{Error, Result};
use crate::fgl::{formal_sum_p_powers, hn_adic_expand, Fgl};
use crate::galgebra::{AlgebraElement, AlgebraPresentation};
use crate::series::{even_vars, SeriesTuple, TruncatedSeries, VarExps, VariableSpec};

/// Degree of the coefficient of `x^{p^i}` in an even automorphism.
pub fn even_coeff_degree(p: u32, i: u32) -> i64 {
    2 - 2 * (p as i64).pow(i)
}

/// Degree of `a_i` in `f(1) = ε + Σ a_i x^{p^i}`.
pub fn odd_coeff_degree(p: u32, i: u32) -> i64 {
    1 - 2 * (p as i64).pow(i)
}

/// What the property suites need from a group element.
pub trait GroupElement: Clone + PartialEq + std::fmt::Debug {
    /// `self·other = other∘self`.
    fn compose(&self, other: &Self) -> Result<Self>;
    fn invert(&self) -> Result<Self>;
    fn identity_like(&self) -> Self;
    /// Flat coefficient list (the Yoneda images).
    fn coefficients(&self) -> Vec<AlgebraElement>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// `Aut_{H_n}`.
    Hn,
    /// `Aut_{g_a}`.
    Ga,
    /// `Aut_{G_a}` (quasi-strict).
    GA,
}

impl std::str::FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hn" | "Hn" | "H" => Ok(Self::Hn),
            "ga" | "g_a" => Ok(Self::Ga),
            "GA" | "G_a" => Ok(Self::GA),
            _ => Err(Error::Config(format!("unknown group '{s}' (hn, ga, GA)"))),
        }
    }
}

fn x_var(alg: &Arc<AlgebraPresentation>, order: u32) -> TruncatedSeries {
    TruncatedSeries::variable(even_vars(&["x"]), order, alg.clone(), 0)
}

fn monomial_series(alg: &Arc<AlgebraPresentation>, vars: Arc<[VariableSpec]>, order: u32, degree: i64, e: VarExps, c: AlgebraElement) -> Result<TruncatedSeries> {
    TruncatedSeries::from_terms(vars, order, alg.clone(), degree, [(e, c)])
}

fn check_degrees(alg: &AlgebraPresentation, coeffs: &[AlgebraElement], deg: impl Fn(u32) -> i64, what: &str) -> Result<()> {
    for (i, c) in coeffs.iter().enumerate() {
        let d = deg(i as u32);
        if !alg.is_homogeneous_of(c, d) {
            return Err(Error::Construction(format!("{what}_{i} = {} is not of degree {d}", alg.render(c))));
        }
    }
    Ok(())
}

fn witness(a: &TruncatedSeries, b: &TruncatedSeries) -> Option<String> {
    a.first_difference(b).map(|(e, x, y)| format!("coefficient of {}: {} vs {}", a.render_exps(&e), a.alg().render(&x), a.alg().render(&y)))
}

fn check_strict(f: &TruncatedSeries) -> Result<()> {
    f.check_homogeneous()?;
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: f.degree() });
    }
    if !f.constant_term().is_zero() || f.coeff1(1) != f.alg().one() {
        return Err(Error::NotStrict(f.render()));
    }
    Ok(())
}

// ---- Aut_{H_n} ----------------------------------------------------------

/// `f(x) = Σ^{H_n} a_i x^{p^i}`, `a_0 = 1`, `i ≤ m`, truncated at the law's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictAutHn {
    law: Arc<Fgl>,
    coeffs: Vec<AlgebraElement>,
}

impl StrictAutHn {
    /// The largest window visible at the law's order.
    pub fn max_window(law: &Fgl) -> u32 {
        let p = law.alg().p();
        let mut m = 0;
        while p.pow(m + 1) < law.order() {
            m += 1;
        }
        m
    }

    pub fn identity(law: Arc<Fgl>, window: u32) -> Result<Self> {
        if window > Self::max_window(&law) {
            return Err(Error::WindowTooSmall(format!("window {window} needs order > {}", law.alg().p().pow(window))));
        }
        let alg = law.alg().clone();
        let mut coeffs = vec![alg.zero(); window as usize + 1];
        coeffs[0] = alg.one();
        Ok(Self { law, coeffs })
    }

    /// Coefficients are checked for degree and strictness only; see
    /// [`StrictAutHn::homomorphism_failure`] for the automorphism condition.
    pub fn from_coeffs_unchecked(law: Arc<Fgl>, coeffs: Vec<AlgebraElement>) -> Result<Self> {
        let alg = law.alg().clone();
        let m = coeffs.len().checked_sub(1).ok_or_else(|| Error::Construction("empty coefficient list".into()))? as u32;
        if m > Self::max_window(&law) {
            return Err(Error::WindowTooSmall(format!("window {m} needs order > {}", alg.p().pow(m))));
        }
        if coeffs[0] != alg.one() {
            return Err(Error::NotStrict(format!("a_0 = {}", alg.render(&coeffs[0]))));
        }
        check_degrees(&alg, &coeffs, |i| even_coeff_degree(alg.p(), i), "a")?;
        Ok(Self { law, coeffs })
    }

    /// Checked construction from a coefficient vector.
    pub fn new(law: Arc<Fgl>, coeffs: Vec<AlgebraElement>) -> Result<Self> {
        let f = Self::from_coeffs_unchecked(law, coeffs)?;
        match f.homomorphism_failure()? {
            None => Ok(f),
            Some(w) => Err(Error::NotHomomorphism(w)),
        }
    }

    /// Accept a univariate series as an automorphism with window `m`.
    pub fn validate(law: Arc<Fgl>, f: &TruncatedSeries, window: u32) -> Result<Self> {
        check_strict(f)?;
        if !f.alg().same_context(law.alg()) {
            return Err(Error::ContextMismatch("series and law live over different algebras".into()));
        }
        let f = f.with_order(law.order());
        if let Some(w) = hom_witness(&law, &f)? {
            return Err(Error::NotHomomorphism(w));
        }
        let coeffs = hn_adic_expand(&law, &f, window)?;
        Ok(Self { law, coeffs })
    }

    pub fn law(&self) -> &Arc<Fgl> {
        &self.law
    }

    pub fn alg(&self) -> &Arc<AlgebraPresentation> {
        self.law.alg()
    }

    pub fn window(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[AlgebraElement] {
        &self.coeffs
    }

    pub fn realize(&self) -> Result<TruncatedSeries> {
        formal_sum_p_powers(&self.law, &self.coeffs, self.law.order())
    }

    /// First coefficient where `f(H(x,y))` and `H(f(x),f(y))` differ.
    pub fn homomorphism_failure(&self) -> Result<Option<String>> {
        hom_witness(&self.law, &self.realize()?)
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.law, &other.law) && self.law != other.law {
            return Err(Error::ContextMismatch("automorphisms of different laws".into()));
        }
        Ok(())
    }

    fn from_series(&self, s: &TruncatedSeries, window: u32) -> Result<Self> {
        Ok(Self { law: self.law.clone(), coeffs: hn_adic_expand(&self.law, s, window)? })
    }

    pub fn to_json(&self) -> Value {
        let alg = self.alg();
        json!({ "group": "hn", "a": self.coeffs.iter().map(|c| alg.render(c)).collect::<Vec<_>>() })
    }
}

fn hom_witness(law: &Fgl, f: &TruncatedSeries) -> Result<Option<String>> {
    let xy = even_vars(&["x", "y"]);
    let n = law.order();
    let alg = law.alg().clone();
    let x = TruncatedSeries::variable(xy.clone(), n, alg.clone(), 0);
    let y = TruncatedSeries::variable(xy, n, alg, 1);
    let lhs = f.compose(&[law.series().clone()])?;
    let rhs = law.apply(&f.compose(&[x])?, &f.compose(&[y])?)?;
    Ok(witness(&lhs, &rhs))
}

impl GroupElement for StrictAutHn {
    fn compose(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let s = other.realize()?.compose(&[self.realize()?])?;
        self.from_series(&s, self.window().min(other.window()))
    }

    fn invert(&self) -> Result<Self> {
        let s = self.realize()?.inverse()?;
        self.from_series(&s, self.window())
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.law.clone(), self.window()).expect("window already valid")
    }

    fn coefficients(&self) -> Vec<AlgebraElement> {
        self.coeffs[1..].to_vec()
    }
}

// ---- Aut_{g_a} ----------------------------------------------------------

/// `f(x) = Σ_{k<n} a_k x^{p^k}` modulo `x^{p^n}`, `a_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictAutGa {
    alg: Arc<AlgebraPresentation>,
    coeffs: Vec<AlgebraElement>,
}

/// Truncation order of the additive chunk: `p^n`.
pub fn chunk_order(alg: &AlgebraPresentation) -> u32 {
    alg.p().pow(alg.height())
}

impl StrictAutGa {
    pub fn identity(alg: Arc<AlgebraPresentation>) -> Self {
        let mut coeffs = vec![alg.zero(); alg.height() as usize];
        coeffs[0] = alg.one();
        Self { alg, coeffs }
    }

    pub fn new(alg: Arc<AlgebraPresentation>, coeffs: Vec<AlgebraElement>) -> Result<Self> {
        if coeffs.len() != alg.height() as usize {
            return Err(Error::Construction(format!("{} coefficients, expected n = {}", coeffs.len(), alg.height())));
        }
        if coeffs[0] != alg.one() {
            return Err(Error::NotStrict(format!("a_0 = {}", alg.render(&coeffs[0]))));
        }
        check_degrees(&alg, &coeffs, |i| even_coeff_degree(alg.p(), i), "a")?;
        Ok(Self { alg, coeffs })
    }

    /// Accept `f` if strict and additive modulo `x^{p^n}`.
    pub fn validate(alg: Arc<AlgebraPresentation>, f: &TruncatedSeries) -> Result<Self> {
        check_strict(f)?;
        let n = chunk_order(&alg);
        if f.order() < n {
            return Err(Error::WindowTooSmall(format!("series order {} below chunk order {n}", f.order())));
        }
        let f = f.truncate(n);
        let xy = even_vars(&["x", "y"]);
        let x = TruncatedSeries::variable(xy.clone(), n, alg.clone(), 0);
        let y = TruncatedSeries::variable(xy, n, alg.clone(), 1);
        let lhs = f.compose(&[x.add(&y)?])?;
        let rhs = f.compose(&[x])?.add(&f.compose(&[y])?)?;
        if let Some(w) = witness(&lhs, &rhs) {
            return Err(Error::NotHomomorphism(w));
        }
        let p = alg.p();
        let coeffs: Vec<_> = (0..alg.height()).map(|k| f.coeff1(p.pow(k))).collect();
        let g = Self::new(alg, coeffs)?;
        if g.realize()? != f {
            return Err(Error::Extraction(format!("{} is not a sum of p-power monomials", f.render())));
        }
        Ok(g)
    }

    pub fn alg(&self) -> &Arc<AlgebraPresentation> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[AlgebraElement] {
        &self.coeffs
    }

    pub fn realize(&self) -> Result<TruncatedSeries> {
        let p = self.alg.p();
        let terms = self.coeffs.iter().enumerate().map(|(k, c)| (smallvec![p.pow(k as u32)], c.clone()));
        TruncatedSeries::from_terms(even_vars(&["x"]), chunk_order(&self.alg), self.alg.clone(), 2, terms)
    }

    pub fn to_json(&self) -> Value {
        json!({ "group": "ga", "a": self.coeffs.iter().map(|c| self.alg.render(c)).collect::<Vec<_>>() })
    }
}

impl GroupElement for StrictAutGa {
    fn compose(&self, other: &Self) -> Result<Self> {
        if !self.alg.same_context(&other.alg) {
            return Err(Error::ContextMismatch("automorphisms over different algebras".into()));
        }
        let s = other.realize()?.compose(&[self.realize()?])?;
        let p = self.alg.p();
        Self::new(self.alg.clone(), (0..self.alg.height()).map(|k| s.coeff1(p.pow(k))).collect())
    }

    fn invert(&self) -> Result<Self> {
        let s = self.realize()?.inverse()?;
        let p = self.alg.p();
        Self::new(self.alg.clone(), (0..self.alg.height()).map(|k| s.coeff1(p.pow(k))).collect())
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.alg.clone())
    }

    fn coefficients(&self) -> Vec<AlgebraElement> {
        self.coeffs[1..].to_vec()
    }
}

// ---- Aut_{G_a} ----------------------------------------------------------

/// `(f(1), f(2)) = (ε + Σ a_i x^{p^i}, x + Σ_{i≥1} b_i x^{p^i})`, `i < n`,
/// modulo `x^{p^n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiStrictAutGA {
    alg: Arc<AlgebraPresentation>,
    odd: Vec<AlgebraElement>,
    even: Vec<AlgebraElement>,
}

/// Variables `(ε, x)` of degrees 1 and 2.
pub fn ga2_vars() -> Arc<[VariableSpec]> {
    vec![VariableSpec::odd("e"), VariableSpec::even("x")].into()
}

impl QuasiStrictAutGA {
    pub fn identity(alg: Arc<AlgebraPresentation>) -> Self {
        let n = alg.height() as usize;
        let odd = vec![alg.zero(); n];
        let mut even = vec![alg.zero(); n];
        even[0] = alg.one();
        Self { alg, odd, even }
    }

    pub fn new(alg: Arc<AlgebraPresentation>, odd: Vec<AlgebraElement>, even: Vec<AlgebraElement>) -> Result<Self> {
        let n = alg.height() as usize;
        if odd.len() != n || even.len() != n {
            return Err(Error::Construction(format!("need {n} odd and {n} even coefficients")));
        }
        if even[0] != alg.one() {
            return Err(Error::NotStrict(format!("b_0 = {}", alg.render(&even[0]))));
        }
        let p = alg.p();
        check_degrees(&alg, &odd, |i| odd_coeff_degree(p, i), "a")?;
        check_degrees(&alg, &even, |i| even_coeff_degree(p, i), "b")?;
        Ok(Self { alg, odd, even })
    }

    /// Accept a pair of series in `(e, x)` if quasi-strict and additive
    /// modulo `x^{p^n}`. With `strict`, additionally `a_0 = 0`.
    pub fn validate(alg: Arc<AlgebraPresentation>, pair: &SeriesTuple, strict: bool) -> Result<Self> {
        let (f1, f2) = (&pair.s1, &pair.s2);
        let vars = ga2_vars();
        if f1.vars().len() != 2 || !f1.vars()[0].is_odd() || f1.vars()[1].is_odd() {
            return Err(Error::ContextMismatch("expected series in (e, x) with e odd".into()));
        }
        f1.check_homogeneous()?;
        f2.check_homogeneous()?;
        let n = chunk_order(&alg);
        if f1.order() < n {
            return Err(Error::WindowTooSmall(format!("series order {} below chunk order {n}", f1.order())));
        }
        let (f1, f2) = (f1.truncate(n).with_vars(vars.clone())?, f2.truncate(n).with_vars(vars.clone())?);
        let e_coef = |s: &TruncatedSeries| s.coefficient(&[1, 0]);
        if e_coef(&f1)? != alg.one() || !f2.coefficient(&[0, 1])?.eq(&alg.one()) || !e_coef(&f2)?.is_zero() {
            return Err(Error::NotStrict(format!("({}, {})", f1.render(), f2.render())));
        }
        // additivity in (e1, x1, e2, x2)
        let v4: Arc<[VariableSpec]> =
            vec![VariableSpec::odd("e1"), VariableSpec::even("x1"), VariableSpec::odd("e2"), VariableSpec::even("x2")].into();
        let var = |i| TruncatedSeries::variable(v4.clone(), n, alg.clone(), i);
        let sum = [var(0).add(&var(2))?, var(1).add(&var(3))?];
        for (name, f) in [("f(1)", &f1), ("f(2)", &f2)] {
            let lhs = f.compose(&sum)?;
            let rhs = f.compose(&[var(0), var(1)])?.add(&f.compose(&[var(2), var(3)])?)?;
            if let Some(w) = witness(&lhs, &rhs) {
                return Err(Error::NotHomomorphism(format!("{name}: {w}")));
            }
        }
        let p = alg.p();
        let xs = |s: &TruncatedSeries| -> Result<Vec<AlgebraElement>> { (0..alg.height()).map(|k| s.coefficient(&[0, p.pow(k)])).collect() };
        let g = Self::new(alg.clone(), xs(&f1)?, xs(&f2)?)?;
        let r = g.realize()?;
        if r.s1 != f1 || r.s2 != f2 {
            return Err(Error::Extraction("pair is not of the form (e + Σ a_i x^(p^i), x + Σ b_i x^(p^i))".into()));
        }
        if strict && !g.odd[0].is_zero() {
            return Err(Error::NotStrict(format!("a_0 = {} in the strict sub-case", alg.render(&g.odd[0]))));
        }
        Ok(g)
    }

    pub fn alg(&self) -> &Arc<AlgebraPresentation> {
        &self.alg
    }

    pub fn odd(&self) -> &[AlgebraElement] {
        &self.odd
    }

    pub fn even(&self) -> &[AlgebraElement] {
        &self.even
    }

    pub fn realize(&self) -> Result<SeriesTuple> {
        let vars = ga2_vars();
        let n = chunk_order(&self.alg);
        let p = self.alg.p();
        let e = TruncatedSeries::variable(vars.clone(), n, self.alg.clone(), 0);
        let odd = self.odd.iter().enumerate().map(|(k, c)| (smallvec![0, p.pow(k as u32)], c.clone()));
        let s1 = e.add(&TruncatedSeries::from_terms(vars.clone(), n, self.alg.clone(), 1, odd)?)?;
        let even = self.even.iter().enumerate().map(|(k, c)| (smallvec![0, p.pow(k as u32)], c.clone()));
        let s2 = TruncatedSeries::from_terms(vars, n, self.alg.clone(), 2, even)?;
        SeriesTuple::new(s1, s2)
    }

    fn from_tuple(&self, t: &SeriesTuple) -> Result<Self> {
        let p = self.alg.p();
        let xs = |s: &TruncatedSeries| -> Result<Vec<AlgebraElement>> { (0..self.alg.height()).map(|k| s.coefficient(&[0, p.pow(k)])).collect() };
        Self::new(self.alg.clone(), xs(&t.s1)?, xs(&t.s2)?)
    }

    pub fn to_json(&self) -> Value {
        let r = |v: &[AlgebraElement]| v.iter().map(|c| self.alg.render(c)).collect::<Vec<_>>();
        json!({ "group": "GA", "a": r(&self.odd), "b": r(&self.even) })
    }
}

impl GroupElement for QuasiStrictAutGA {
    fn compose(&self, other: &Self) -> Result<Self> {
        if !self.alg.same_context(&other.alg) {
            return Err(Error::ContextMismatch("automorphisms over different algebras".into()));
        }
        let f = self.realize()?;
        let t = other.realize()?.compose(&[f.s1, f.s2])?;
        self.from_tuple(&t)
    }

    fn invert(&self) -> Result<Self> {
        // f(2) is a series in x alone; invert it, then solve f(1)(h) = e.
        let n = chunk_order(&self.alg);
        let p = self.alg.p();
        let x = x_var(&self.alg, n);
        let even = self.even.iter().enumerate().map(|(k, c)| (smallvec![p.pow(k as u32)], c.clone()));
        let f2 = TruncatedSeries::from_terms(x.vars().clone(), n, self.alg.clone(), 2, even)?;
        let h2 = f2.inverse()?;
        let mut odd = Vec::new();
        let vars = ga2_vars();
        let h2v = h2.compose(&[TruncatedSeries::variable(vars.clone(), n, self.alg.clone(), 1)])?;
        let mut tail = TruncatedSeries::zero(vars.clone(), n, self.alg.clone(), 1);
        for (k, a) in self.odd.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let m = monomial_series(&self.alg, vars.clone(), n, 1, smallvec![0, p.pow(k as u32)], a.clone())?;
            let sub = [TruncatedSeries::variable(vars.clone(), n, self.alg.clone(), 0), h2v.clone()];
            tail = tail.add(&m.compose(&sub)?)?;
        }
        for k in 0..self.alg.height() {
            odd.push(self.alg.neg(&tail.coefficient(&[0, p.pow(k)])?));
        }
        let even = (0..self.alg.height()).map(|k| h2.coeff1(p.pow(k))).collect();
        Self::new(self.alg.clone(), odd, even)
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.alg.clone())
    }

    fn coefficients(&self) -> Vec<AlgebraElement> {
        self.odd.iter().chain(&self.even[1..]).cloned().collect()
    }
}

// ---- α and β ------------------------------------------------------------

/// `Σ^{H_n} a_i x^{p^i} ↦ Σ_{i<n} a_i x^{p^i}`.
pub fn alpha(f: &StrictAutHn) -> Result<StrictAutGa> {
    let n = f.alg().height();
    if f.window() + 1 < n {
        return Err(Error::WindowTooSmall(format!("alpha needs window ≥ {} (have {})", n - 1, f.window())));
    }
    StrictAutGa::new(f.alg().clone(), f.coeffs()[..n as usize].to_vec())
}

/// `(f(1), f(2)) ↦ f(2)`.
pub fn beta(g: &QuasiStrictAutGA) -> Result<StrictAutGa> {
    StrictAutGa::new(g.alg().clone(), g.even().to_vec())
}

#[cfg(test)]
mod tests;
