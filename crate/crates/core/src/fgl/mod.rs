//! Formal group laws and chunks, and the Honda law over `K(n)_*`.
//!
//! The Honda law is built as `F = exp(ℓ(x) + ℓ(y))` over `Q[v]` from the
//! logarithm `ℓ(x) = Σ_i v^{(p^{ni}-1)/(p^n-1)} x^{p^{ni}} / p^i`, checked to be
//! p-integral, and reduced mod p. Modulo p its p-series is exactly `v x^{p^n}`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use smallvec::smallvec;

use crate::error::{Error, Result};
use crate::galgebra::{AlgebraElement, AlgebraPresentation, CoeffRing, Monomial, Scalar};
use crate::report::Check;
use crate::series::{even_vars, TruncatedSeries, VarExps};

/// Bivariate orders above this skip the trivariate associativity check at
/// full order and run it on the truncation instead.
pub const ASSOCIATIVITY_ORDER_CAP: u32 = 64;
/// Bivariate log check order cap over `Q`; above it the equivalent
/// univariate identity `ℓ(exp(x)) = x` is checked instead.
pub const BIVARIATE_LOG_CAP: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fgl {
    series: TruncatedSeries,
    model: String,
}

impl Fgl {
    /// Wrap a bivariate series in `(x, y)` of degree 2.
    pub fn new(series: TruncatedSeries, model: impl Into<String>) -> Result<Self> {
        if series.vars().len() != 2 || series.vars().iter().any(|v| v.is_odd()) {
            return Err(Error::ContextMismatch("a group law is a series in two even variables".into()));
        }
        if series.degree() != 2 && !series.is_zero() {
            return Err(Error::DegreeMismatch { expected: 2, found: series.degree() });
        }
        Ok(Self { series, model: model.into() })
    }

    /// `x + y` over `alg`, truncated at `order`.
    pub fn additive(alg: Arc<AlgebraPresentation>, order: u32) -> Self {
        let vars = even_vars(&["x", "y"]);
        let x = TruncatedSeries::variable(vars.clone(), order, alg.clone(), 0);
        let y = TruncatedSeries::variable(vars, order, alg, 1);
        Self { series: x.add(&y).expect("same context"), model: "additive".into() }
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn model(&self) -> &str {
        &self.model
    }

    pub fn order(&self) -> u32 {
        self.series.order()
    }

    pub fn alg(&self) -> &Arc<AlgebraPresentation> {
        self.series.alg()
    }

    pub fn is_additive(&self) -> bool {
        self.series == Self::additive(self.alg().clone(), self.order()).series
    }

    /// The chunk of the given size: truncation modulo `(x, y)^{size+1}`.
    pub fn chunk(&self, size: u32) -> Fgl {
        Fgl { series: self.series.truncate(size + 1), model: self.model.clone() }
    }

    /// `F(a, b)`.
    pub fn apply(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.series.compose(&[a.clone(), b.clone()])
    }

    /// Left-associated formal sum of at least one series.
    pub fn formal_sum(&self, items: &[TruncatedSeries]) -> Result<TruncatedSeries> {
        let Some(first) = items.first() else {
            return Err(Error::ContextMismatch("formal sum of nothing needs a context".into()));
        };
        let mut acc = first.clone();
        for s in &items[1..] {
            acc = self.apply(&acc, s)?;
        }
        Ok(acc)
    }

    /// `[k](x)` in the variable `x` at the law's order.
    pub fn multiple(&self, k: u32) -> Result<TruncatedSeries> {
        let x = self.univariate_x();
        let mut acc = TruncatedSeries::zero(x.vars().clone(), self.order(), self.alg().clone(), 2);
        for _ in 0..k {
            acc = if acc.is_zero() { x.clone() } else { self.apply(&acc, &x)? };
        }
        Ok(acc)
    }

    pub fn p_series(&self) -> Result<TruncatedSeries> {
        self.multiple(self.alg().p())
    }

    /// `ι(x)` with `F(x, ι(x)) = 0`.
    pub fn formal_inverse(&self) -> Result<TruncatedSeries> {
        let x = self.univariate_x();
        let mut i = x.neg();
        loop {
            let r = self.apply(&x, &i)?;
            if r.is_zero() {
                return Ok(i);
            }
            i = i.sub(&r)?;
        }
    }

    fn univariate_x(&self) -> TruncatedSeries {
        TruncatedSeries::variable(even_vars(&["x"]), self.order(), self.alg().clone(), 0)
    }

    /// The same law over `target`, which must extend the coefficient ring
    /// of this law's (generator-free) algebra.
    pub fn base_change(&self, target: Arc<AlgebraPresentation>) -> Result<Fgl> {
        let src = self.alg().clone();
        let t2 = target.clone();
        let s = self.series.map_coefficients(target, move |c| embed_base(&src, &t2, c))?;
        Ok(Fgl { series: s, model: self.model.clone() })
    }

    /// Same law at a smaller order.
    pub fn truncate(&self, order: u32) -> Fgl {
        Fgl { series: self.series.truncate(order), model: self.model.clone() }
    }
}

/// Map an element of a generator-free algebra into `target` (same p, n).
pub fn embed_base(src: &AlgebraPresentation, target: &AlgebraPresentation, c: &AlgebraElement) -> Result<AlgebraElement> {
    if src.ngens() != 0 || src.p() != target.p() || src.height() != target.height() {
        return Err(Error::ContextMismatch("base change needs the coefficient ring itself as source".into()));
    }
    let terms = c
        .terms()
        .iter()
        .map(|(m, s)| -> Result<(Monomial, Scalar)> {
            let s = match target.ring() {
                CoeffRing::Kn => target.field().reduce_mod_p(s)?,
                _ => s.clone(),
            };
            Ok((Monomial::v_pow(target.ngens(), m.v), s))
        })
        .collect::<Result<Vec<_>>>()?;
    target.from_terms(terms)
}

fn diff_witness(a: &TruncatedSeries, b: &TruncatedSeries) -> Option<String> {
    a.first_difference(b).map(|(e, x, y)| {
        format!(
            "coefficient of {}: {} vs {}",
            if e.iter().all(|&k| k == 0) { "1".to_string() } else { a.render_exps(&e) },
            a.alg().render(&x),
            a.alg().render(&y)
        )
    })
}

/// Unit, commutativity and associativity modulo the law's order. The
/// trivariate associativity check runs at `min(N, cap)`.
pub fn verify_fgl_axioms(f: &Fgl) -> Vec<Check> {
    verify_fgl_axioms_capped(f, u32::MAX)
}

pub fn verify_fgl_axioms_capped(f: &Fgl, cap: u32) -> Vec<Check> {
    let mut out = Vec::new();
    let n = f.order();
    let alg = f.alg().clone();
    let xy = even_vars(&["x", "y"]);
    let x = TruncatedSeries::variable(xy.clone(), n, alg.clone(), 0);
    let y = TruncatedSeries::variable(xy.clone(), n, alg.clone(), 1);
    let zero = TruncatedSeries::zero(xy.clone(), n, alg.clone(), 2);
    let run = |name: &str, lhs: Result<TruncatedSeries>, rhs: &TruncatedSeries| match lhs {
        Ok(l) => Check::from_witness(name, diff_witness(&l, rhs)),
        Err(e) => Check::fail(name, e.to_string()),
    };
    out.push(run("unit: F(x,0) = x", f.apply(&x, &zero), &x));
    out.push(run("unit: F(0,y) = y", f.apply(&zero, &y), &y));
    out.push(run("commutativity: F(y,x) = F(x,y)", f.apply(&y, &x), f.series()));
    let m = n.min(cap);
    let name = if m < n {
        format!("associativity mod (x,y,z)^{m}")
    } else {
        "associativity: F(x,F(y,z)) = F(F(x,y),z)".to_string()
    };
    let g = f.truncate(m);
    let xyz = even_vars(&["x", "y", "z"]);
    let v: Vec<_> = (0..3).map(|i| TruncatedSeries::variable(xyz.clone(), m, alg.clone(), i)).collect();
    let res = (|| -> Result<Option<String>> {
        let l = g.apply(&v[0], &g.apply(&v[1], &v[2])?)?;
        let r = g.apply(&g.apply(&v[0], &v[1])?, &v[2])?;
        Ok(diff_witness(&l, &r))
    })();
    out.push(match res {
        Ok(w) => Check::from_witness(name, w),
        Err(e) => Check::fail(name, e.to_string()),
    });
    out
}

/// Greedy `H_n`-adic expansion: `h = d_0 x +_F d_1 x^p +_F ⋯ +_F d_m x^{p^m} +_F (order > p^m)`.
/// `F` must already be over `h`'s algebra.
pub fn hn_adic_expand(f: &Fgl, h: &TruncatedSeries, m: u32) -> Result<Vec<AlgebraElement>> {
    let p = f.alg().p();
    let n = h.order();
    if p.checked_pow(m).map_or(true, |t| t >= n) {
        return Err(Error::WindowTooSmall(format!("order {n} cannot see x^(p^{m})")));
    }
    let iota = f.formal_inverse()?;
    let mut r = h.clone();
    let mut out = Vec::with_capacity(m as usize + 1);
    for k in 0..=m {
        let pk = p.pow(k);
        let d = r.coeff1(pk);
        if !d.is_zero() {
            let e: VarExps = smallvec![pk];
            let term = TruncatedSeries::from_terms(h.vars().clone(), n, h.alg().clone(), 2, [(e, d.clone())])?;
            let neg = iota.compose(&[term])?;
            r = f.apply(&r, &neg)?;
        }
        out.push(d);
        // anything left below the next p-power (within the window) is illegal
        let limit = p.saturating_pow(k + 1).min(p.pow(m) + 1);
        if let Some(j) = r.terms().keys().map(|e| e[0]).filter(|&j| j < limit).min() {
            return Err(Error::NotHnAdic(j));
        }
    }
    Ok(out)
}

/// `Σ^F d_i x^{p^i}` in one variable `x` at order `n` over `F`'s algebra.
pub fn formal_sum_p_powers(f: &Fgl, coeffs: &[AlgebraElement], n: u32) -> Result<TruncatedSeries> {
    let p = f.alg().p();
    let vars = even_vars(&["x"]);
    let mut items = Vec::new();
    for (i, d) in coeffs.iter().enumerate() {
        let e: VarExps = smallvec![p.pow(i as u32)];
        items.push(TruncatedSeries::from_terms(vars.clone(), n, f.alg().clone(), 2, [(e, d.clone())])?);
    }
    if items.is_empty() {
        return Ok(TruncatedSeries::zero(vars, n, f.alg().clone(), 2));
    }
    f.formal_sum(&items)
}

// ---- the Honda law ------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Honda {
    pub p: u32,
    pub n: u32,
    pub order: u32,
    pub fgl: Fgl,
    /// Checks made while constructing (before reduction mod p).
    pub lift_checks: Vec<Check>,
}

pub const HONDA_MODEL: &str = "hazewinkel-log";

/// `ℓ(x)` over `Q[v]` modulo `x^order`.
pub fn honda_log(q: &Arc<AlgebraPresentation>, order: u32) -> Result<TruncatedSeries> {
    let (p, n) = (q.p() as u64, q.height());
    let pn = p.pow(n);
    let mut terms = Vec::new();
    let mut i = 0u32;
    loop {
        let e = pn.pow(i);
        if e >= order as u64 {
            break;
        }
        let vexp = ((e - 1) / (pn - 1)) as i64;
        let c = BigRational::new(BigInt::from(1), BigInt::from(p).pow(i));
        let el = q.term(Monomial::v_pow(0, vexp), Scalar::Rational(c));
        terms.push((smallvec![e as u32], el));
        i += 1;
    }
    TruncatedSeries::from_terms(even_vars(&["x"]), order, q.clone(), 2, terms)
}

fn cache() -> &'static Mutex<HashMap<(u32, u32, u32), Arc<Honda>>> {
    static C: OnceLock<Mutex<HashMap<(u32, u32, u32), Arc<Honda>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn disk_dir() -> &'static Mutex<Option<PathBuf>> {
    static D: OnceLock<Mutex<Option<PathBuf>>> = OnceLock::new();
    D.get_or_init(|| Mutex::new(None))
}

/// Let [`honda`] read and write cache files in `dir` (or stop, with `None`).
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *disk_dir().lock().unwrap() = dir;
}

pub fn cache_dir() -> Option<PathBuf> {
    disk_dir().lock().unwrap().clone()
}

/// The Honda law of height `n` at prime `p` modulo `(x, y)^order`,
/// memoized per process and, after [`set_cache_dir`], on disk.
pub fn honda(p: u32, n: u32, order: u32) -> Result<Arc<Honda>> {
    Ok(honda_cached(p, n, order, cache_dir().as_deref())?.0)
}

/// Build without consulting any cache; keeps the construction checks.
pub fn build_honda(p: u32, n: u32, order: u32) -> Result<Honda> {
    if order < 2 {
        return Err(Error::Config("truncation order must be at least 2".into()));
    }
    let q = Arc::new(AlgebraPresentation::base(p, n, CoeffRing::Q)?.with_label("Q[v]"));
    let kn = Arc::new(AlgebraPresentation::base(p, n, CoeffRing::Kn)?.with_label("K(n)_*"));
    let log = honda_log(&q, order)?;
    let exp = log.inverse()?;
    let xy = even_vars(&["x", "y"]);
    let x = TruncatedSeries::variable(xy.clone(), order, q.clone(), 0);
    let y = TruncatedSeries::variable(xy.clone(), order, q.clone(), 1);
    let lx = log.compose(&[x.clone()])?;
    let ly = log.compose(&[y.clone()])?;
    let sum = lx.add(&ly)?;
    let fq = exp.compose(&[sum.clone()])?;

    let mut lift_checks = Vec::new();
    if order <= BIVARIATE_LOG_CAP {
        let lf = log.compose(&[fq.clone()])?;
        lift_checks.push(Check::from_witness("log: l(F(x,y)) = l(x) + l(y) over Q[v]", diff_witness(&lf, &sum)));
    } else {
        let xs = TruncatedSeries::variable(even_vars(&["x"]), order, q.clone(), 0);
        let w = diff_witness(&log.compose(&[exp.clone()])?, &xs).or(diff_witness(&exp.compose(&[log.clone()])?, &xs));
        lift_checks.push(Check::from_witness("log (univariate form): l(exp(x)) = x = exp(l(x)) over Q[v]", w));
    }

    for (e, c) in fq.terms() {
        for (_, s) in c.terms() {
            if !q.field().is_p_integral(s) {
                return Err(Error::NotPIntegral(format!("{} at {}", q.render(c), fq.render_exps(e))));
            }
        }
    }
    lift_checks.push(Check::pass("p-integrality of the lift"));
    let kq = kn.clone();
    let fk = fq.map_coefficients(kn.clone(), move |c| embed_base(&q, &kq, c))?;
    Ok(Honda { p, n, order, fgl: Fgl::new(fk, HONDA_MODEL)?, lift_checks })
}

/// Axioms, p-series and degree checks for a reduced Honda law.
pub fn verify_honda(h: &Honda) -> Vec<Check> {
    let mut out = verify_fgl_axioms_capped(&h.fgl, ASSOCIATIVITY_ORDER_CAP);
    let pn = h.p.pow(h.n);
    let alg = h.fgl.alg().clone();
    let expect = TruncatedSeries::from_terms(
        even_vars(&["x"]),
        h.order,
        alg.clone(),
        2,
        [(smallvec![pn], alg.v_pow(1))],
    );
    let ps = h.fgl.p_series();
    out.push(match (ps, expect) {
        (Ok(ps), Ok(e)) => Check::from_witness(format!("p-series: [p](x) = v x^{pn} mod x^{}", h.order), diff_witness(&ps, &e)),
        (Err(e), _) | (_, Err(e)) => Check::fail("p-series", e.to_string()),
    });
    if h.order <= pn {
        out.push(Check::skipped("p-series leading term visible", format!("order {} <= p^n = {pn}", h.order)));
    }
    out.push(Check::from_result("homogeneous of degree 2", &h.fgl.series().check_homogeneous()));
    out
}

// ---- cache files ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CacheFile {
    p: u32,
    n: u32,
    order: u32,
    model: String,
    /// `[a, b, residue]`; the v-power is fixed by degree.
    terms: Vec<[u32; 3]>,
}

pub fn cache_path(dir: &Path, p: u32, n: u32, order: u32) -> PathBuf {
    dir.join(format!("honda-p{p}-n{n}-N{order}.json"))
}

pub fn save_honda(h: &Honda, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let terms = h
        .fgl
        .series()
        .terms()
        .iter()
        .flat_map(|(e, c)| {
            c.terms().iter().map(move |(_, s)| match s {
                Scalar::Fp(r) => [e[0], e[1], *r],
                Scalar::Rational(_) => unreachable!("reduced law"),
            })
        })
        .collect();
    let file = CacheFile { p: h.p, n: h.n, order: h.order, model: h.fgl.model().to_string(), terms };
    let path = cache_path(dir, h.p, h.n, h.order);
    std::fs::write(&path, serde_json::to_string(&file)?)?;
    Ok(path)
}

/// Load a cached law if present. The caller re-verifies it.
pub fn load_honda(dir: &Path, p: u32, n: u32, order: u32) -> Result<Option<Honda>> {
    let path = cache_path(dir, p, n, order);
    if !path.exists() {
        return Ok(None);
    }
    let file: CacheFile = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    if (file.p, file.n, file.order) != (p, n, order) {
        return Err(Error::Io(format!("{} holds a different law", path.display())));
    }
    let kn = Arc::new(AlgebraPresentation::base(p, n, CoeffRing::Kn)?.with_label("K(n)_*"));
    let gap = p.pow(n) as i64 - 1;
    let mut terms = Vec::new();
    for [a, b, r] in file.terms {
        let t = a as i64 + b as i64 - 1;
        if t % gap != 0 {
            return Err(Error::Io(format!("term x^{a} y^{b} cannot have degree 2")));
        }
        terms.push((smallvec![a, b], kn.term(Monomial::v_pow(0, t / gap), Scalar::Fp(r % p))));
    }
    let s = TruncatedSeries::from_terms(even_vars(&["x", "y"]), order, kn, 2, terms)?;
    Ok(Some(Honda { p, n, order, fgl: Fgl::new(s, file.model)?, lift_checks: Vec::new() }))
}

/// Memory first, then `dir`, otherwise build (and save to `dir`). The flag
/// says whether the law came from disk.
pub fn honda_cached(p: u32, n: u32, order: u32, dir: Option<&Path>) -> Result<(Arc<Honda>, bool)> {
    if let Some(h) = cache().lock().unwrap().get(&(p, n, order)) {
        return Ok((h.clone(), false));
    }
    let mut from_disk = false;
    let h = match dir.map(|d| load_honda(d, p, n, order)).transpose()?.flatten() {
        Some(h) => {
            from_disk = true;
            Arc::new(h)
        }
        None => {
            let h = Arc::new(build_honda(p, n, order)?);
            if let Some(d) = dir {
                save_honda(&h, d)?;
            }
            h
        }
    };
    cache().lock().unwrap().insert((p, n, order), h.clone());
    Ok((h, from_disk))
}

#[cfg(test)]
mod tests;
