//! Truncated homogeneous power series over a presented algebra.
//!
//! Terms are written coefficient-left, `c · x^a ε^b`; passing an odd
//! coefficient across an odd variable costs a sign. Even variables have
//! degree 2, odd ones degree 1, and only even exponents count toward the
//! truncation order `N`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{Map, Value};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::galgebra::{product_sign, Acc, AlgebraElement, AlgebraPresentation};

pub type VarExps = SmallVec<[u32; 4]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableSpec {
    pub name: String,
    pub degree: i64,
}

impl VariableSpec {
    pub fn even(name: impl Into<String>) -> Self {
        Self { name: name.into(), degree: 2 }
    }

    pub fn odd(name: impl Into<String>) -> Self {
        Self { name: name.into(), degree: 1 }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 != 0
    }
}

/// Shorthand for a list of even variables.
pub fn even_vars(names: &[&str]) -> Arc<[VariableSpec]> {
    names.iter().map(|n| VariableSpec::even(*n)).collect()
}

type Raw = BTreeMap<VarExps, AlgebraElement>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: Arc<[VariableSpec]>,
    order: u32,
    alg: Arc<AlgebraPresentation>,
    degree: i64,
    terms: Raw,
}

/// Shared context for raw series arithmetic.
struct Ctx<'a> {
    odd: Vec<bool>,
    order: u32,
    alg: &'a AlgebraPresentation,
}

impl Ctx<'_> {
    fn even_total(&self, e: &[u32]) -> u32 {
        e.iter().zip(&self.odd).filter(|(_, o)| !**o).map(|(x, _)| *x).sum()
    }

    fn odd_parity(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.odd).filter(|(x, o)| **o && **x == 1).count() % 2 == 1
    }

    fn mul(&self, a: &Raw, b: &Raw) -> Raw {
        let alg = self.alg;
        let f = alg.field();
        let mut bs: Vec<_> = b
            .iter()
            .map(|(e, c)| {
                let (ev, od) = alg.split_parity(c);
                (e, self.even_total(e), ev, od)
            })
            .collect();
        bs.sort_by_key(|x| x.1);
        let mut out: BTreeMap<VarExps, Acc<'_>> = BTreeMap::new();
        for (ea, ca) in a {
            let ta = self.even_total(ea);
            if ta >= self.order {
                continue;
            }
            let a_odd = self.odd_parity(ea);
            for (eb, tb, ev, od) in &bs {
                if ta + tb >= self.order {
                    break;
                }
                let Some(neg) = product_sign(ea, eb, &self.odd) else { continue };
                let e: VarExps = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let acc = out.entry(e).or_insert_with(|| Acc::new(f));
                let s = f.from_i64(if neg { -1 } else { 1 });
                if !ev.is_empty() {
                    alg.mul_into(ca, ev, &s, acc);
                }
                if !od.is_empty() {
                    let s = if a_odd { f.neg(&s) } else { s };
                    alg.mul_into(ca, od, &s, acc);
                }
            }
        }
        out.into_iter()
            .map(|(e, acc)| (e, acc.finish()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    fn add_into(&self, a: &mut Raw, b: &Raw) {
        for (e, c) in b {
            match a.get_mut(e) {
                Some(x) => {
                    *x = self.alg.add(x, c);
                    if x.is_zero() {
                        a.remove(e);
                    }
                }
                None => {
                    a.insert(e.clone(), c.clone());
                }
            }
        }
    }

    /// Left multiplication by a coefficient (no sign: it already sits left).
    fn scale(&self, c: &AlgebraElement, a: &Raw) -> Raw {
        a.iter()
            .map(|(e, x)| (e.clone(), self.alg.mul(c, x)))
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }
}

impl TruncatedSeries {
    pub fn zero(vars: Arc<[VariableSpec]>, order: u32, alg: Arc<AlgebraPresentation>, degree: i64) -> Self {
        Self { vars, order, alg, degree, terms: Raw::new() }
    }

    /// The variable `vars[i]` itself.
    pub fn variable(vars: Arc<[VariableSpec]>, order: u32, alg: Arc<AlgebraPresentation>, i: usize) -> Self {
        let degree = vars[i].degree;
        let mut e: VarExps = SmallVec::from_elem(0, vars.len());
        e[i] = 1;
        let mut s = Self::zero(vars, order, alg, degree);
        if s.even_total(&e) < order {
            let one = s.alg.one();
            s.terms.insert(e, one);
        }
        s
    }

    /// Build from terms; checks homogeneity, drops terms beyond the order and
    /// terms with a repeated odd variable.
    pub fn from_terms(
        vars: Arc<[VariableSpec]>,
        order: u32,
        alg: Arc<AlgebraPresentation>,
        degree: i64,
        terms: impl IntoIterator<Item = (VarExps, AlgebraElement)>,
    ) -> Result<Self> {
        let mut s = Self::zero(vars, order, alg, degree);
        let ctx = s.ctx();
        let mut raw = Raw::new();
        for (e, c) in terms {
            if e.len() != s.vars.len() {
                return Err(Error::ContextMismatch("exponent tuple length".into()));
            }
            if c.is_zero() || s.even_total(&e) >= order || e.iter().zip(&ctx.odd).any(|(x, o)| *o && *x > 1) {
                continue;
            }
            let vd: i64 = e.iter().zip(s.vars.iter()).map(|(x, v)| *x as i64 * v.degree).sum();
            if !s.alg.is_homogeneous_of(&c, degree - vd) {
                return Err(Error::Inhomogeneous(format!(
                    "coefficient {} of {} in a series of degree {degree}",
                    s.alg.render(&c),
                    s.render_exps(&e)
                )));
            }
            let mut one = Raw::new();
            one.insert(e, c);
            ctx.add_into(&mut raw, &one);
        }
        drop(ctx);
        s.terms = raw;
        Ok(s)
    }

    fn ctx(&self) -> Ctx<'_> {
        Ctx { odd: self.vars.iter().map(VariableSpec::is_odd).collect(), order: self.order, alg: &self.alg }
    }

    fn with_terms(&self, degree: i64, terms: Raw) -> Self {
        Self { vars: self.vars.clone(), order: self.order, alg: self.alg.clone(), degree, terms }
    }

    pub fn vars(&self) -> &Arc<[VariableSpec]> {
        &self.vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn alg(&self) -> &Arc<AlgebraPresentation> {
        &self.alg
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<VarExps, AlgebraElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn even_total(&self, e: &[u32]) -> u32 {
        e.iter().zip(self.vars.iter()).filter(|(_, v)| !v.is_odd()).map(|(x, _)| *x).sum()
    }

    /// Lowest even total order among the terms (`None` for zero).
    pub fn min_order(&self) -> Option<u32> {
        self.terms.keys().map(|e| self.even_total(e)).min()
    }

    pub fn coefficient(&self, e: &[u32]) -> Result<AlgebraElement> {
        if e.len() != self.vars.len()
            || self.even_total(e) >= self.order
            || e.iter().zip(self.vars.iter()).any(|(x, v)| v.is_odd() && *x > 1)
        {
            return Err(Error::OutOfWindow(e.to_vec()));
        }
        Ok(self.terms.get(e).cloned().unwrap_or_default())
    }

    /// Coefficient of `x^k` in a univariate series (zero outside the window).
    pub fn coeff1(&self, k: u32) -> AlgebraElement {
        self.terms.get(&SmallVec::from_slice(&[k])).cloned().unwrap_or_default()
    }

    pub fn same_context(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.order == other.order
            && (Arc::ptr_eq(&self.alg, &other.alg) || self.alg.same_context(&other.alg))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "series over ({}; N={}) and ({}; N={})",
                self.var_names(),
                self.order,
                other.var_names(),
                other.order
            )))
        }
    }

    fn var_names(&self) -> String {
        self.vars.iter().map(|v| v.name.as_str()).collect::<Vec<_>>().join(",")
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.check_degree(other)?;
        let mut t = self.terms.clone();
        self.ctx().add_into(&mut t, &other.terms);
        let d = if self.is_zero() { other.degree } else { self.degree };
        Ok(self.with_terms(d, t))
    }

    pub fn neg(&self) -> Self {
        let t = self.terms.iter().map(|(e, c)| (e.clone(), self.alg.neg(c))).collect();
        self.with_terms(self.degree, t)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `c · self` for a homogeneous coefficient `c`.
    pub fn scale(&self, c: &AlgebraElement) -> Result<Self> {
        let dc = self.alg.degree_of(c)?.unwrap_or(0);
        Ok(self.with_terms(self.degree + dc, self.ctx().scale(c, &self.terms)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_terms(self.degree + other.degree, self.ctx().mul(&self.terms, &other.terms)))
    }

    pub fn pow(&self, mut k: u32) -> Result<Self> {
        let mut out = self.one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(out)
    }

    pub fn one(&self) -> Self {
        let e: VarExps = SmallVec::from_elem(0, self.vars.len());
        let mut t = Raw::new();
        t.insert(e, self.alg.one());
        self.with_terms(0, t)
    }

    /// `self^p` in characteristic p: `Σ c^p m^p` over the terms without odd
    /// variables; an odd series has square zero.
    pub fn frobenius(&self) -> Self {
        let p = self.alg.p();
        let deg = self.degree * p as i64;
        if self.degree % 2 != 0 {
            return self.with_terms(deg, Raw::new());
        }
        let mut t = Raw::new();
        for (e, c) in &self.terms {
            if e.iter().zip(self.vars.iter()).any(|(x, v)| v.is_odd() && *x > 0) {
                continue;
            }
            let pe: VarExps = e.iter().map(|x| x * p).collect();
            if self.even_total(&pe) >= self.order {
                continue;
            }
            let pc = self.alg.frobenius(c);
            if !pc.is_zero() {
                t.insert(pe, pc);
            }
        }
        self.with_terms(deg, t)
    }

    /// Raise every coefficient to the p-th power, leaving variables alone.
    pub fn twist(&self) -> Self {
        let t = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), self.alg.frobenius(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        // coefficient degrees scale by p; the series degree follows suit only
        // for homogeneous input, which is all we ever twist
        let vd = |e: &VarExps| -> i64 { e.iter().zip(self.vars.iter()).map(|(x, v)| *x as i64 * v.degree).sum() };
        let degree = self
            .terms
            .iter()
            .next()
            .map(|(e, _)| (self.degree - vd(e)) * self.alg.p() as i64 + vd(e))
            .unwrap_or(self.degree);
        self.with_terms(degree, t)
    }

    /// Drop all terms of even total order `>= order`.
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        let t = self.terms.iter().filter(|(e, _)| self.even_total(e) < order).map(|(e, c)| (e.clone(), c.clone())).collect();
        Self { vars: self.vars.clone(), order, alg: self.alg.clone(), degree: self.degree, terms: t }
    }

    /// Same terms viewed at a different truncation order. Raising the order is
    /// only sound when the caller knows the higher terms vanish.
    pub fn with_order(&self, order: u32) -> Self {
        if order <= self.order {
            self.truncate(order)
        } else {
            Self { vars: self.vars.clone(), order, alg: self.alg.clone(), degree: self.degree, terms: self.terms.clone() }
        }
    }

    pub fn check_homogeneous(&self) -> Result<()> {
        for (e, c) in &self.terms {
            let vd: i64 = e.iter().zip(self.vars.iter()).map(|(x, v)| *x as i64 * v.degree).sum();
            if !self.alg.is_homogeneous_of(c, self.degree - vd) {
                return Err(Error::Inhomogeneous(format!("{} at {}", self.alg.render(c), self.render_exps(e))));
            }
        }
        Ok(())
    }

    pub fn constant_term(&self) -> AlgebraElement {
        let e: VarExps = SmallVec::from_elem(0, self.vars.len());
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// `outer(subs_0, subs_1, …)`: substitute `subs[i]` for variable `i`.
    /// The substituted series share variables, order and algebra; the result
    /// lives in their variables at the smaller of the two orders.
    pub fn compose(&self, subs: &[TruncatedSeries]) -> Result<TruncatedSeries> {
        if subs.len() != self.vars.len() {
            return Err(Error::ContextMismatch(format!("{} substitutions for {} variables", subs.len(), self.vars.len())));
        }
        let Some(first) = subs.first() else {
            return Err(Error::ContextMismatch("no variables".into()));
        };
        for (s, v) in subs.iter().zip(self.vars.iter()) {
            if s.vars != first.vars || s.order != first.order || !s.alg.same_context(&self.alg) {
                return Err(Error::ContextMismatch("substituted series differ in context".into()));
            }
            if !s.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
            if s.degree != v.degree && !s.is_zero() {
                return Err(Error::DegreeMismatch { expected: v.degree, found: s.degree });
            }
        }
        let order = first.order.min(self.order);
        let target = Self::zero(first.vars.clone(), order, self.alg.clone(), self.degree);
        let ctx = target.ctx();
        let subs_t: Vec<Raw> = subs.iter().map(|s| s.truncate(order).terms).collect();
        let mut powers: Vec<Vec<Raw>> = vec![Vec::new(); subs.len()];
        let items: Vec<(VarExps, AlgebraElement)> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        let zero_e: VarExps = SmallVec::from_elem(0, first.vars.len());
        let t = compose_rec(&ctx, &items, self.vars.len(), &subs_t, &mut powers, &zero_e);
        Ok(target.with_terms(self.degree, t))
    }

    /// Compositional inverse of a strict series in one even variable.
    pub fn inverse(&self) -> Result<TruncatedSeries> {
        if self.vars.len() != 1 || self.vars[0].is_odd() {
            return Err(Error::NotStrict("inverse needs one even variable".into()));
        }
        if !self.constant_term().is_zero() || self.coeff1(1) != self.alg.one() {
            return Err(Error::NotStrict(self.render()));
        }
        let x = Self::variable(self.vars.clone(), self.order, self.alg.clone(), 0);
        let mut g = x.clone();
        loop {
            let err = self.compose(&[g.clone()])?.sub(&x)?;
            if err.is_zero() {
                return Ok(g);
            }
            g = g.sub(&err)?;
        }
    }

    /// Replace the coefficient algebra, mapping each coefficient.
    pub fn map_coefficients(
        &self,
        alg: Arc<AlgebraPresentation>,
        mut f: impl FnMut(&AlgebraElement) -> Result<AlgebraElement>,
    ) -> Result<TruncatedSeries> {
        let mut t = Raw::new();
        for (e, c) in &self.terms {
            let fc = f(c)?;
            if !fc.is_zero() {
                t.insert(e.clone(), fc);
            }
        }
        Ok(Self { vars: self.vars.clone(), order: self.order, alg, degree: self.degree, terms: t })
    }

    /// Rename into a different variable list of the same shape.
    pub fn with_vars(&self, vars: Arc<[VariableSpec]>) -> Result<TruncatedSeries> {
        if vars.len() != self.vars.len() || vars.iter().zip(self.vars.iter()).any(|(a, b)| a.degree != b.degree) {
            return Err(Error::ContextMismatch("variable lists differ in shape".into()));
        }
        Ok(Self { vars, ..self.clone() })
    }

    /// The first term (in exponent order) where two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(VarExps, AlgebraElement, AlgebraElement)> {
        let keys: std::collections::BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        let mut keys: Vec<_> = keys.into_iter().collect();
        keys.sort_by_key(|e| (self.even_total(e), (*e).clone()));
        for e in keys {
            let a = self.terms.get(e).cloned().unwrap_or_default();
            let b = other.terms.get(e).cloned().unwrap_or_default();
            if a != b {
                return Some((e.clone(), a, b));
            }
        }
        None
    }

    pub fn render_exps(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .zip(self.vars.iter())
            .filter(|(x, _)| **x > 0)
            .map(|(x, v)| if *x == 1 { v.name.clone() } else { format!("{}^{}", v.name, x) })
            .collect();
        parts.join("*")
    }

    fn sorted_terms(&self) -> Vec<(&VarExps, &AlgebraElement)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(e, _)| (self.even_total(e), std::cmp::Reverse((*e).clone())));
        v
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mut cs = self.alg.render(c);
            let vs = self.render_exps(e);
            let multi = c.len() > 1;
            let neg = !multi && cs.starts_with('-');
            if neg {
                cs.remove(0);
            }
            let body = match (cs.as_str(), vs.is_empty()) {
                (_, true) if multi => format!("({cs})"),
                (_, true) => cs,
                ("1", false) => vs,
                (_, false) if multi => format!("({cs})*{vs}"),
                (_, false) => format!("{cs}*{vs}"),
            };
            if i > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            out.push_str(&body);
        }
        out
    }

    /// `{ "a,b": "coefficient" }` keyed by exponent tuple.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (e, c) in self.sorted_terms() {
            let k = e.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            m.insert(k, Value::String(self.alg.render(c)));
        }
        Value::Object(m)
    }

    /// Parse an ASCII series; names matching a variable are variables, the
    /// rest resolve in the coefficient algebra. Factor order is respected:
    /// moving an odd coefficient left past an odd variable flips the sign.
    pub fn parse(
        text: &str,
        vars: Arc<[VariableSpec]>,
        order: u32,
        alg: Arc<AlgebraPresentation>,
        degree: Option<i64>,
    ) -> Result<TruncatedSeries> {
        use crate::galgebra::parse::{parse_polynomial, resolve, NamedTerm};
        if let Some(v) = vars.iter().find(|v| v.name == "v" || alg.gen_index(&v.name).is_ok()) {
            return Err(Error::NameCollision(format!("variable `{}` is also a name in {}", v.name, alg.label())));
        }
        let terms = parse_polynomial(text)?;
        let mut items = Vec::new();
        for t in terms {
            let mut e: VarExps = SmallVec::from_elem(0, vars.len());
            let mut coeff_factors = Vec::new();
            let mut neg = false;
            let mut seen_odd_vars = 0usize;
            let mut var_seq = Vec::new();
            for (name, x, col) in &t.factors {
                if let Some(i) = vars.iter().position(|v| &v.name == name) {
                    if *x < 0 {
                        return Err(Error::Parse { line: 1, col: *col, msg: format!("negative power of `{name}`") });
                    }
                    if vars[i].is_odd() {
                        if *x > 1 || e[i] > 0 {
                            return Err(Error::Parse { line: 1, col: *col, msg: format!("odd variable `{name}` repeated") });
                        }
                        if *x == 1 {
                            seen_odd_vars += 1;
                            var_seq.push(i);
                        }
                    }
                    e[i] += *x as u32;
                } else {
                    let odd_factor = alg.gen_index(name).map(|g| alg.odd_mask()[g] && x % 2 == 1).unwrap_or(false);
                    if odd_factor && seen_odd_vars % 2 == 1 {
                        neg = !neg;
                    }
                    coeff_factors.push((name.clone(), *x, *col));
                }
            }
            // sort the odd variables into declaration order
            for i in 0..var_seq.len() {
                for j in i + 1..var_seq.len() {
                    if var_seq[i] > var_seq[j] {
                        neg = !neg;
                    }
                }
            }
            let coef = if neg { -t.coef.clone() } else { t.coef.clone() };
            let c = resolve(&alg, &[NamedTerm { coef, factors: coeff_factors }], 1)?;
            items.push((e, c));
        }
        let degree = match degree {
            Some(d) => d,
            None => items
                .iter()
                .find(|(_, c)| !c.is_zero())
                .map(|(e, c)| -> Result<i64> {
                    let vd: i64 = e.iter().zip(vars.iter()).map(|(x, v)| *x as i64 * v.degree).sum();
                    Ok(alg.degree_of(c)?.unwrap_or(0) + vd)
                })
                .transpose()?
                .unwrap_or(2),
        };
        Self::from_terms(vars, order, alg, degree, items)
    }
}

fn compose_rec(
    ctx: &Ctx<'_>,
    items: &[(VarExps, AlgebraElement)],
    k: usize,
    subs: &[Raw],
    powers: &mut Vec<Vec<Raw>>,
    zero_e: &VarExps,
) -> Raw {
    if k == 0 {
        let c = ctx.alg.sum(items.iter().map(|(_, c)| c));
        let mut r = Raw::new();
        if !c.is_zero() {
            r.insert(zero_e.clone(), c);
        }
        return r;
    }
    let var = k - 1;
    let mut groups: BTreeMap<u32, Vec<(VarExps, AlgebraElement)>> = BTreeMap::new();
    for (e, c) in items {
        let mut rest = e.clone();
        rest[var] = 0;
        groups.entry(e[var]).or_default().push((rest, c.clone()));
    }
    let mut out = Raw::new();
    for (pow, group) in groups {
        let inner = compose_rec(ctx, &group, k - 1, subs, powers, zero_e);
        if inner.is_empty() {
            continue;
        }
        if pow == 0 {
            ctx.add_into(&mut out, &inner);
            continue;
        }
        while powers[var].len() < pow as usize {
            let next = match powers[var].last() {
                None => subs[var].clone(),
                Some(last) => ctx.mul(last, &subs[var]),
            };
            powers[var].push(next);
        }
        let term = ctx.mul(&inner, &powers[var][pow as usize - 1]);
        ctx.add_into(&mut out, &term);
    }
    out
}

/// The 2-dimensional case: `(f(1), f(2))` of degrees 1 and 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTuple {
    pub s1: TruncatedSeries,
    pub s2: TruncatedSeries,
}

impl SeriesTuple {
    pub fn new(s1: TruncatedSeries, s2: TruncatedSeries) -> Result<Self> {
        if !s1.same_context(&s2) {
            return Err(Error::ContextMismatch("tuple components differ in context".into()));
        }
        if (!s1.is_zero() && s1.degree != 1) || (!s2.is_zero() && s2.degree != 2) {
            return Err(Error::DegreeMismatch { expected: 1, found: s1.degree });
        }
        Ok(Self { s1, s2 })
    }

    /// Substitute into both components.
    pub fn compose(&self, subs: &[TruncatedSeries]) -> Result<Self> {
        Ok(Self { s1: self.s1.compose(subs)?, s2: self.s2.compose(subs)? })
    }
}

#[cfg(test)]
mod tests;
