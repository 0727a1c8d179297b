use std::fmt::Write as _;

use super::element::{Acc, AlgebraElement};
use super::monomial::{product_sign, Exps, Monomial};
use super::scalar::{CoeffRing, Scalar, ScalarField};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i64,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Self { name: name.into(), degree }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// `g^threshold -> rhs`. Every term of `rhs` has `g`-exponent below the
/// threshold, so rewriting terminates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub gen: usize,
    pub threshold: u32,
    pub rhs: AlgebraElement,
    /// `rhs = c · v^k · g^j` touching only `g`: reduced in closed form.
    fast: Option<(Scalar, i64, u32)>,
}

/// A finitely presented graded-commutative algebra over `K(n)_*` (or over
/// `Z_(p)[v]`, `Q[v]` for the integral lift).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraPresentation {
    label: String,
    field: ScalarField,
    height: u32,
    gens: Vec<GeneratorSpec>,
    odd: Vec<bool>,
    rules: Vec<Option<Rule>>,
}

impl AlgebraPresentation {
    pub fn new(p: u32, height: u32, ring: CoeffRing, gens: Vec<GeneratorSpec>) -> Result<Self> {
        if p < 3 || !super::scalar::is_prime(p) {
            return Err(Error::Config(format!("p = {p} must be an odd prime")));
        }
        if height == 0 {
            return Err(Error::Config("height must be at least 1".into()));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.name == "v" || g.name.is_empty() {
                return Err(Error::InvalidPresentation(format!("reserved generator name `{}`", g.name)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::NameCollision(g.name.clone()));
            }
        }
        let odd = gens.iter().map(GeneratorSpec::is_odd).collect();
        let rules = vec![None; gens.len()];
        Ok(Self {
            label: String::new(),
            field: ScalarField::new(p, ring),
            height,
            gens,
            odd,
            rules,
        })
    }

    /// `K(n)_*` itself (or `Q[v]` etc.): no generators.
    pub fn base(p: u32, height: u32, ring: CoeffRing) -> Result<Self> {
        Self::new(p, height, ring, Vec::new())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Add the rewriting rule `g^threshold -> rhs`.
    pub fn add_rule(&mut self, gen: usize, threshold: u32, rhs: AlgebraElement) -> Result<()> {
        let name = self.gens.get(gen).map(|g| g.name.clone()).ok_or_else(|| {
            Error::InvalidPresentation(format!("rule on missing generator #{gen}"))
        })?;
        if self.odd[gen] {
            // odd squares are already zero; only the trivial rule is accepted
            if threshold == 2 && rhs.is_zero() {
                return Ok(());
            }
            return Err(Error::InvalidPresentation(format!("rule on odd generator `{name}`")));
        }
        if threshold == 0 {
            return Err(Error::InvalidPresentation(format!("zero threshold for `{name}`")));
        }
        if self.rules[gen].is_some() {
            return Err(Error::InvalidPresentation(format!("second rule for `{name}`")));
        }
        for (m, _) in &rhs.terms {
            if m.exps.len() != self.gens.len() {
                return Err(Error::ContextMismatch("rule rhs over a different algebra".into()));
            }
            if m.exps[gen] >= threshold {
                return Err(Error::InvalidPresentation(format!(
                    "rule for `{name}` does not decrease its exponent"
                )));
            }
        }
        let fast = match rhs.terms.as_slice() {
            [(m, c)] if m.exps.iter().enumerate().all(|(i, &e)| i == gen || e == 0) => {
                Some((c.clone(), m.v, m.exps[gen]))
            }
            _ => None,
        };
        self.rules[gen] = Some(Rule { gen, threshold, rhs, fast });
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn ring(&self) -> CoeffRing {
        self.field.ring()
    }

    /// `deg v_n = -2(p^n - 1)`.
    pub fn v_degree(&self) -> i64 {
        -2 * ((self.p() as i64).pow(self.height) - 1)
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn odd_mask(&self) -> &[bool] {
        &self.odd
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().flatten()
    }

    pub fn rule_for(&self, gen: usize) -> Option<&Rule> {
        self.rules[gen].as_ref()
    }

    pub fn gen_index(&self, name: &str) -> Result<usize> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// True when every rule is homogeneous.
    pub fn is_graded(&self) -> bool {
        self.rules().all(|r| {
            let d = self.gens[r.gen].degree * r.threshold as i64;
            r.rhs.terms.iter().all(|(m, _)| self.monomial_degree(m) == d)
        })
    }

    pub fn same_context(&self, other: &Self) -> bool {
        self.field == other.field && self.height == other.height && self.gens == other.gens && self.rules == other.rules
    }

    // ---- constructors -------------------------------------------------

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero()
    }

    pub fn one(&self) -> AlgebraElement {
        self.scalar(self.field.one())
    }

    pub fn scalar(&self, c: Scalar) -> AlgebraElement {
        self.term(Monomial::one(self.ngens()), c)
    }

    pub fn int(&self, n: i64) -> AlgebraElement {
        self.scalar(self.field.from_i64(n))
    }

    pub fn v_pow(&self, k: i64) -> AlgebraElement {
        self.term(Monomial::v_pow(self.ngens(), k), self.field.one())
    }

    pub fn gen(&self, i: usize) -> AlgebraElement {
        self.term(Monomial::generator(self.ngens(), i), self.field.one())
    }

    pub fn gen_named(&self, name: &str) -> Result<AlgebraElement> {
        Ok(self.gen(self.gen_index(name)?))
    }

    /// `c · m`, reduced.
    pub fn term(&self, m: Monomial, c: Scalar) -> AlgebraElement {
        let mut acc = Acc::new(&self.field);
        self.reduce_into(m, c, &mut acc);
        acc.finish()
    }

    /// Build an element from (monomial, coefficient) pairs whose monomials use
    /// this algebra's generator order. Monomials are reduced; odd exponents
    /// above one vanish.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Result<AlgebraElement> {
        let mut acc = Acc::new(&self.field);
        for (m, c) in terms {
            self.check_monomial(&m)?;
            if m.exps.iter().zip(&self.odd).any(|(e, o)| *o && *e > 1) {
                continue;
            }
            self.reduce_into(m, c, &mut acc);
        }
        Ok(acc.finish())
    }

    /// Normalize raw terms `c · v^k · f_1^{e_1} f_2^{e_2} ⋯` whose factors are
    /// given in arbitrary order (Koszul signs applied while sorting).
    pub fn normalize(&self, raw: &[RawTerm]) -> Result<AlgebraElement> {
        let mut acc = Acc::new(&self.field);
        for t in raw {
            if t.v < 0 && !self.ring().allows_negative_v() {
                return Err(Error::NegativeVPower(self.ring().name().into()));
            }
            let mut cur = Monomial::v_pow(self.ngens(), t.v);
            let mut neg = false;
            let mut dead = false;
            for &(g, e) in &t.factors {
                if g >= self.ngens() {
                    return Err(Error::UnknownGenerator(format!("#{g}")));
                }
                if e == 0 {
                    continue;
                }
                if self.odd[g] && e > 1 {
                    dead = true;
                    break;
                }
                let mut f = Monomial::one(self.ngens());
                f.exps[g] = e;
                match product_sign(&cur.exps, &f.exps, &self.odd) {
                    None => {
                        dead = true;
                        break;
                    }
                    Some(s) => neg ^= s,
                }
                cur.exps[g] += e;
            }
            if dead {
                continue;
            }
            let c = if neg { self.field.neg(&t.coef) } else { t.coef.clone() };
            self.reduce_into(cur, c, &mut acc);
        }
        Ok(acc.finish())
    }

    fn check_monomial(&self, m: &Monomial) -> Result<()> {
        if m.exps.len() != self.ngens() {
            return Err(Error::ContextMismatch(format!(
                "monomial with {} exponents in an algebra with {} generators",
                m.exps.len(),
                self.ngens()
            )));
        }
        if m.v < 0 && !self.ring().allows_negative_v() {
            return Err(Error::NegativeVPower(self.ring().name().into()));
        }
        Ok(())
    }

    /// Apply rewriting rules to `c · m` and add the result to `acc`.
    pub(crate) fn reduce_into(&self, mut m: Monomial, mut c: Scalar, acc: &mut Acc<'_>) {
        if self.field.is_zero(&c) {
            return;
        }
        for i in 0..self.ngens() {
            let Some(rule) = &self.rules[i] else { continue };
            let e = m.exps[i];
            if e < rule.threshold {
                continue;
            }
            match &rule.fast {
                Some((rc, k, j)) => {
                    let step = (rule.threshold - j) as u64;
                    let s = (e - rule.threshold) as u64 / step + 1;
                    m.exps[i] = (e as u64 - s * step) as u32;
                    m.v += k * s as i64;
                    c = self.field.mul(&c, &self.field.pow(rc, s));
                }
                None => {
                    if rule.rhs.is_zero() {
                        return;
                    }
                    m.exps[i] -= rule.threshold;
                    for (rm, rc) in &rule.rhs.terms {
                        if let Some((pm, neg)) = self.mul_monomials(&m, rm) {
                            let mut cc = self.field.mul(&c, rc);
                            if neg {
                                cc = self.field.neg(&cc);
                            }
                            self.reduce_into(pm, cc, acc);
                        }
                    }
                    return;
                }
            }
        }
        acc.add(m, c);
    }

    /// Raw product of monomials (no rewriting). `None` if an odd generator
    /// repeats; otherwise the product and whether it is negated.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let neg = product_sign(&a.exps, &b.exps, &self.odd)?;
        let exps: Exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        Some((Monomial { exps, v: a.v + b.v }, neg))
    }

    // ---- arithmetic ---------------------------------------------------

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.add_scaled(a, b, &self.field.one())
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.add_scaled(a, b, &self.field.from_i64(-1))
    }

    /// `a + s·b` by a sorted merge.
    pub fn add_scaled(&self, a: &AlgebraElement, b: &AlgebraElement, s: &Scalar) -> AlgebraElement {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() || j < b.terms.len() {
            let ord = match (a.terms.get(i), b.terms.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = f.mul(&b.terms[j].1, s);
                    if !f.is_zero(&c) {
                        out.push((b.terms[j].0.clone(), c));
                    }
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.add(&a.terms[i].1, &f.mul(&b.terms[j].1, s));
                    if !f.is_zero(&c) {
                        out.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        AlgebraElement::from_sorted(out)
    }

    pub fn neg(&self, a: &AlgebraElement) -> AlgebraElement {
        let terms = a.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect();
        AlgebraElement::from_sorted(terms)
    }

    pub fn scale(&self, s: &Scalar, a: &AlgebraElement) -> AlgebraElement {
        if self.field.is_zero(s) {
            return AlgebraElement::zero();
        }
        let terms = a.terms.iter().map(|(m, c)| (m.clone(), self.field.mul(s, c))).collect();
        AlgebraElement::from_sorted(terms)
    }

    /// Multiply by `v^k` (exact in `K(n)_*`; no rule involves `v`).
    pub fn shift_v(&self, a: &AlgebraElement, k: i64) -> AlgebraElement {
        let terms = a
            .terms
            .iter()
            .map(|(m, c)| (Monomial { exps: m.exps.clone(), v: m.v + k }, c.clone()))
            .collect();
        AlgebraElement::from_sorted(terms)
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a AlgebraElement>) -> AlgebraElement {
        let mut acc = Acc::new(&self.field);
        for e in items {
            for (m, c) in &e.terms {
                acc.add(m.clone(), c.clone());
            }
        }
        acc.finish()
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        if a.is_zero() || b.is_zero() {
            return AlgebraElement::zero();
        }
        let mut acc = Acc::new(&self.field);
        self.mul_into(a, b, &self.field.one(), &mut acc);
        acc.finish()
    }

    pub(crate) fn mul_into(&self, a: &AlgebraElement, b: &AlgebraElement, s: &Scalar, acc: &mut Acc<'_>) {
        for (ma, ca) in &a.terms {
            let cas = self.field.mul(ca, s);
            for (mb, cb) in &b.terms {
                if let Some((m, neg)) = self.mul_monomials(ma, mb) {
                    let mut c = self.field.mul(&cas, cb);
                    if neg {
                        c = self.field.neg(&c);
                    }
                    self.reduce_into(m, c, acc);
                }
            }
        }
    }

    pub fn pow(&self, a: &AlgebraElement, mut k: u64) -> AlgebraElement {
        let mut base = a.clone();
        let mut out = self.one();
        while k > 0 {
            if k & 1 == 1 {
                out = self.mul(&out, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        out
    }

    /// `a^p` via the Frobenius: only valid in characteristic p.
    pub fn frobenius(&self, a: &AlgebraElement) -> AlgebraElement {
        assert!(self.ring().is_char_p(), "Frobenius shortcut needs characteristic p");
        let p = self.p();
        let mut acc = Acc::new(&self.field);
        for (m, c) in &a.terms {
            if m.exps.iter().zip(&self.odd).any(|(e, o)| *o && *e > 0) {
                continue;
            }
            let pm = Monomial { exps: m.exps.iter().map(|e| e * p).collect(), v: m.v * p as i64 };
            self.reduce_into(pm, self.field.pow(c, p as u64), &mut acc);
        }
        acc.finish()
    }

    /// `a^{p^k}` by iterated Frobenius.
    pub fn frobenius_pow(&self, a: &AlgebraElement, k: u32) -> AlgebraElement {
        (0..k).fold(a.clone(), |x, _| self.frobenius(&x))
    }

    // ---- degrees ------------------------------------------------------

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.v * self.v_degree() + m.exps.iter().zip(&self.gens).map(|(&e, g)| e as i64 * g.degree).sum::<i64>()
    }

    pub fn monomial_is_odd(&self, m: &Monomial) -> bool {
        m.exps.iter().zip(&self.odd).filter(|(e, o)| **o && **e == 1).count() % 2 == 1
    }

    /// Split into (even part, odd part) by total degree parity.
    pub fn split_parity(&self, a: &AlgebraElement) -> (AlgebraElement, AlgebraElement) {
        let (odd, even): (Vec<_>, Vec<_>) = a.terms.iter().cloned().partition(|(m, _)| self.monomial_is_odd(m));
        (AlgebraElement::from_sorted(even), AlgebraElement::from_sorted(odd))
    }

    /// Degree of a homogeneous element; `None` for zero.
    pub fn degree_of(&self, a: &AlgebraElement) -> Result<Option<i64>> {
        let mut it = a.terms.iter().map(|(m, _)| self.monomial_degree(m));
        let Some(d) = it.next() else { return Ok(None) };
        if it.any(|e| e != d) {
            return Err(Error::Inhomogeneous(self.render(a)));
        }
        Ok(Some(d))
    }

    /// True iff `a` is zero or homogeneous of degree `d`.
    pub fn is_homogeneous_of(&self, a: &AlgebraElement, d: i64) -> bool {
        a.terms.iter().all(|(m, _)| self.monomial_degree(m) == d)
    }

    /// Highest exponent of generator `g` appearing in `a`.
    pub fn max_exponent(&self, a: &AlgebraElement, g: usize) -> u32 {
        a.terms.iter().map(|(m, _)| m.exps[g]).max().unwrap_or(0)
    }

    /// Re-express an element of a presentation with the same generators in
    /// this one, mapping coefficients (e.g. reduction mod p).
    pub fn convert_from(&self, src: &AlgebraPresentation, a: &AlgebraElement) -> Result<AlgebraElement> {
        if src.gens != self.gens {
            return Err(Error::ContextMismatch("generator lists differ".into()));
        }
        let mut acc = Acc::new(&self.field);
        for (m, c) in &a.terms {
            self.check_monomial(m)?;
            let c = match (self.ring(), c) {
                (CoeffRing::Kn, c) => self.field.reduce_mod_p(c)?,
                (_, Scalar::Rational(q)) => Scalar::Rational(q.clone()),
                (_, Scalar::Fp(x)) => self.field.from_i64(*x as i64),
            };
            self.reduce_into(m.clone(), c, &mut acc);
        }
        Ok(acc.finish())
    }

    // ---- rendering ----------------------------------------------------

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        if m.v != 0 {
            parts.push(if m.v == 1 { "v".to_string() } else { format!("v^{}", m.v) });
        }
        for (e, g) in m.exps.iter().zip(&self.gens) {
            match e {
                0 => {}
                1 => parts.push(g.name.clone()),
                e => parts.push(format!("{}^{}", g.name, e)),
            }
        }
        parts.join("*")
    }

    pub fn render(&self, a: &AlgebraElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in a.terms.iter().enumerate() {
            let mut cs = self.field.render(c);
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let ms = self.render_monomial(m);
            match (cs.as_str(), ms.is_empty()) {
                (_, true) => s.push_str(&cs),
                ("1", false) => s.push_str(&ms),
                (_, false) => {
                    let _ = write!(s, "{cs}*{ms}");
                }
            }
        }
        s
    }
}

/// An unnormalized term for [`AlgebraPresentation::normalize`].
#[derive(Clone, Debug)]
pub struct RawTerm {
    pub coef: Scalar,
    pub v: i64,
    pub factors: Vec<(usize, u32)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma1() -> AlgebraPresentation {
        // F_3[v^±][t1]/(t1^3 = v^2 t1)
        let mut a = AlgebraPresentation::new(3, 1, CoeffRing::Kn, vec![GeneratorSpec::new("t1", -4)]).unwrap();
        let rhs = a.shift_v(&a.gen(0), 2);
        a.add_rule(0, 3, rhs).unwrap();
        a
    }

    fn ext() -> AlgebraPresentation {
        AlgebraPresentation::new(
            3,
            2,
            CoeffRing::Kn,
            vec![GeneratorSpec::new("tau0", -1), GeneratorSpec::new("tau1", -5)],
        )
        .unwrap()
    }

    #[test]
    fn relation_reduces_power() {
        let a = sigma1();
        let t = a.gen(0);
        assert_eq!(a.pow(&t, 3), a.shift_v(&t, 2));
        // t^4 = v^2 t^2, t^5 = v^2 t^3 = v^4 t
        assert_eq!(a.pow(&t, 5), a.shift_v(&t, 4));
        assert_eq!(a.frobenius(&t), a.pow(&t, 3));
    }

    #[test]
    fn product_example() {
        // (t + v t^2) t^2 = t^3 + v t^4 = v^2 t + v^3 t^2
        let a = sigma1();
        let t = a.gen(0);
        let lhs = a.add(&t, &a.shift_v(&a.pow(&t, 2), 1));
        let prod = a.mul(&lhs, &a.pow(&t, 2));
        let expect = a.add(&a.shift_v(&t, 2), &a.shift_v(&a.pow(&t, 2), 3));
        assert_eq!(prod, expect);
        // the factor t + v t^2 mixes degrees -4 and -12, so the product does too
        assert!(a.degree_of(&prod).is_err());
    }

    #[test]
    fn odd_generators_anticommute() {
        let a = ext();
        let (t0, t1) = (a.gen(0), a.gen(1));
        assert!(a.mul(&t0, &t0).is_zero());
        assert_eq!(a.mul(&t1, &t0), a.neg(&a.mul(&t0, &t1)));
        let raw = [RawTerm { coef: a.field().one(), v: 0, factors: vec![(1, 1), (0, 1)] }];
        assert_eq!(a.normalize(&raw).unwrap(), a.neg(&a.mul(&t0, &t1)));
    }

    #[test]
    fn v_is_a_unit() {
        let a = sigma1();
        assert_eq!(a.mul(&a.v_pow(1), &a.v_pow(-1)), a.one());
        let q = AlgebraPresentation::base(3, 1, CoeffRing::Q).unwrap();
        let raw = [RawTerm { coef: q.field().one(), v: -1, factors: vec![] }];
        assert!(matches!(q.normalize(&raw), Err(Error::NegativeVPower(_))));
    }

    #[test]
    fn render_uses_signed_residues() {
        let a = sigma1();
        let e = a.sub(&a.shift_v(&a.gen(0), 2), &a.pow(&a.gen(0), 2));
        assert_eq!(a.render(&e), "v^2*t1 - t1^2");
    }
}
