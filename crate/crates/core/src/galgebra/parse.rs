//! Text formats: ASCII polynomials and presentation files.
//!
//! ```text
//! # comment
//! prime 3
//! height 2
//! coeff Kn            # Kn | Zp | Q
//! name dual(-4)       # optional label
//! gen eps deg -4
//! rel eps^2 -> 0
//! rel t1^9 -> v^2*t1
//! rel v*t1^9 -> v^3*t1   # a v-power on the left is divided out (Kn only)
//! ```
//!
//! Polynomials are sums of terms `c*f1^e1*f2^e2*…`; `c` is an integer or a
//! fraction `a/b`; `v` may carry a negative exponent; an odd generator may
//! appear at most once per term.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::element::AlgebraElement;
use super::presentation::{AlgebraPresentation, GeneratorSpec, RawTerm};
use super::scalar::CoeffRing;
use crate::error::{Error, Result};

/// A parsed but unresolved term.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedTerm {
    pub coef: BigRational,
    /// `(name, exponent, column)`
    pub factors: Vec<(String, i64, usize)>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> Lexer<'a> {
    fn col(&self) -> usize {
        self.col0 + self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(perr(self.line, self.col(), "expected a number"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let col = self.col();
        let n = self.number()?;
        let n: i64 = n.try_into().map_err(|_| perr(self.line, col, "exponent too large"))?;
        Ok(if neg { -n } else { n })
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphabetic() || self.s[self.pos] == b'_') {
            self.pos += 1;
            while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                self.pos += 1;
            }
            Some(std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string())
        } else {
            None
        }
    }
}

/// Parse a polynomial into unresolved terms. `line`/`col0` locate the text
/// inside a larger file for error messages.
pub fn parse_polynomial_at(text: &str, line: usize, col0: usize) -> Result<Vec<NamedTerm>> {
    let mut lx = Lexer { s: text.as_bytes(), pos: 0, line, col0 };
    let mut terms = Vec::new();
    let mut sign_neg = false;
    if lx.eat(b'-') {
        sign_neg = true;
    } else {
        lx.eat(b'+');
    }
    loop {
        let mut t = parse_term(&mut lx)?;
        if sign_neg {
            t.coef = -t.coef;
        }
        terms.push(t);
        match lx.peek() {
            None => break,
            Some(b'+') => {
                lx.pos += 1;
                sign_neg = false;
            }
            Some(b'-') => {
                lx.pos += 1;
                sign_neg = true;
            }
            Some(c) => return Err(perr(line, lx.col(), format!("unexpected `{}`", c as char))),
        }
    }
    Ok(terms)
}

pub fn parse_polynomial(text: &str) -> Result<Vec<NamedTerm>> {
    parse_polynomial_at(text, 1, 0)
}

fn parse_term(lx: &mut Lexer<'_>) -> Result<NamedTerm> {
    let mut coef = BigRational::one();
    let mut factors = Vec::new();
    loop {
        let col = lx.col();
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = lx.number()?;
                let den = if lx.eat(b'/') { lx.number()? } else { BigInt::one() };
                if den.is_zero() {
                    return Err(perr(lx.line, col, "zero denominator"));
                }
                coef *= BigRational::new(num, den);
            }
            Some(_) => {
                let fcol = lx.col();
                let Some(name) = lx.ident() else {
                    return Err(perr(lx.line, fcol, "expected a factor"));
                };
                let e = if lx.eat(b'^') { lx.int()? } else { 1 };
                factors.push((name, e, fcol));
            }
            None => return Err(perr(lx.line, col, "unexpected end of input")),
        }
        if !lx.eat(b'*') {
            break;
        }
    }
    Ok(NamedTerm { coef, factors })
}

/// Resolve parsed terms against an algebra. Unknown names are errors; odd
/// generators repeated in one term are rejected.
pub fn resolve(alg: &AlgebraPresentation, terms: &[NamedTerm], line: usize) -> Result<AlgebraElement> {
    let mut raw = Vec::new();
    for t in terms {
        let coef = alg.field().from_rational(t.coef.clone()).map_err(|e| perr(line, 1, e.to_string()))?;
        let mut v = 0i64;
        let mut factors = Vec::new();
        for (name, e, col) in &t.factors {
            if name == "v" {
                v += e;
                continue;
            }
            let g = alg.gen_index(name).map_err(|_| perr(line, *col, format!("unknown generator `{name}`")))?;
            if *e < 0 {
                return Err(perr(line, *col, format!("negative exponent on `{name}`")));
            }
            if alg.odd_mask()[g] && (*e > 1 || factors.iter().any(|&(h, _)| h == g)) {
                return Err(perr(line, *col, format!("odd generator `{name}` repeated")));
            }
            factors.push((g, *e as u32));
        }
        if v < 0 && !alg.ring().allows_negative_v() {
            return Err(perr(line, 1, "negative power of v over a non-Laurent ring"));
        }
        raw.push(RawTerm { coef, v, factors });
    }
    alg.normalize(&raw)
}

/// Parse an ASCII polynomial as an element of `alg`.
pub fn parse_element(alg: &AlgebraPresentation, text: &str) -> Result<AlgebraElement> {
    resolve(alg, &parse_polynomial(text)?, 1)
}

/// Parse a presentation file.
pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation> {
    let mut p = None;
    let mut n = None;
    let mut ring = CoeffRing::Kn;
    let mut label = String::new();
    let mut gens: Vec<GeneratorSpec> = Vec::new();
    let mut rels: Vec<(usize, usize, &str)> = Vec::new();
    for (lno, raw) in text.lines().enumerate() {
        let line = lno + 1;
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed.trim(), ""));
        let rest_col = indent + kw.len() + 1;
        let arg = rest.trim();
        match kw {
            "prime" => p = Some(parse_u32(arg, line, rest_col)?),
            "height" => n = Some(parse_u32(arg, line, rest_col)?),
            "coeff" => ring = arg.parse().map_err(|_| perr(line, rest_col + 1, format!("unknown ring `{arg}`")))?,
            "name" => label = arg.to_string(),
            "gen" => {
                let words: Vec<&str> = arg.split_whitespace().collect();
                if words.len() != 3 || words[1] != "deg" {
                    return Err(perr(line, rest_col + 1, "expected `gen <name> deg <int>`"));
                }
                let ok = words[0].chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    && words[0].chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if !ok || words[0] == "v" {
                    return Err(perr(line, rest_col + 1, format!("bad generator name `{}`", words[0])));
                }
                if gens.iter().any(|g| g.name == words[0]) {
                    return Err(perr(line, rest_col + 1, format!("duplicate generator `{}`", words[0])));
                }
                let d: i64 = words[2]
                    .parse()
                    .map_err(|_| perr(line, rest_col + 1, format!("bad degree `{}`", words[2])))?;
                gens.push(GeneratorSpec::new(words[0], d));
            }
            "rel" => rels.push((line, rest_col, rest)),
            other => return Err(perr(line, indent + 1, format!("unknown directive `{other}`"))),
        }
    }
    let p = p.ok_or_else(|| perr(1, 1, "missing `prime`"))?;
    let n = n.ok_or_else(|| perr(1, 1, "missing `height`"))?;
    let mut alg = AlgebraPresentation::new(p, n, ring, gens)
        .map_err(|e| perr(1, 1, e.to_string()))?
        .with_label(label);
    for (line, col, rest) in rels {
        let Some(arrow) = rest.find("->") else {
            return Err(perr(line, col + 1, "expected `lhs -> rhs`"));
        };
        let lhs = parse_polynomial_at(&rest[..arrow], line, col)?;
        let rhs_terms = parse_polynomial_at(&rest[arrow + 2..], line, col + arrow + 2)?;
        let [term] = lhs.as_slice() else {
            return Err(perr(line, col + 1, "left side must be a single monomial"));
        };
        if !term.coef.is_one() {
            return Err(perr(line, col + 1, "left side must have coefficient 1"));
        }
        let mut vshift = 0i64;
        let mut target = None;
        for (name, e, fcol) in &term.factors {
            if name == "v" {
                vshift += e;
            } else if target.is_some() {
                return Err(perr(line, *fcol, "left side must be a power of one generator"));
            } else {
                let g = alg.gen_index(name).map_err(|_| perr(line, *fcol, format!("unknown generator `{name}`")))?;
                if *e <= 0 {
                    return Err(perr(line, *fcol, "exponent must be positive"));
                }
                target = Some((g, *e as u32, *fcol));
            }
        }
        let Some((g, thr, gcol)) = target else {
            return Err(perr(line, col + 1, "left side names no generator"));
        };
        if vshift != 0 && !alg.ring().allows_negative_v() {
            return Err(perr(line, col + 1, "v on the left side needs an invertible v"));
        }
        let rhs = resolve(&alg, &rhs_terms, line)?;
        let rhs = alg.shift_v(&rhs, -vshift);
        alg.add_rule(g, thr, rhs).map_err(|e| perr(line, gcol, e.to_string()))?;
    }
    Ok(alg)
}

fn parse_u32(s: &str, line: usize, col: usize) -> Result<u32> {
    s.parse().map_err(|_| perr(line, col + 1, format!("expected an integer, found `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUAL: &str = "# dual numbers\nprime 3\nheight 2\ncoeff Kn\ngen eps deg -4\nrel eps^2 -> 0\n";

    #[test]
    fn parses_dual_numbers() {
        let a = parse_presentation(DUAL).unwrap();
        let e = a.gen(0);
        assert!(a.mul(&e, &e).is_zero());
        assert_eq!(a.render(&parse_element(&a, "2*v^-1*eps + eps*v").unwrap()), "-v^-1*eps + v*eps");
    }

    #[test]
    fn v_on_the_left_is_divided_out() {
        let txt = "prime 3\nheight 1\ngen t1 deg -4\nrel v*t1^3 -> v^3*t1\n";
        let a = parse_presentation(txt).unwrap();
        assert_eq!(a.pow(&a.gen(0), 3), a.shift_v(&a.gen(0), 2));
    }

    #[test]
    fn errors_carry_positions() {
        let txt = "prime 3\nheight 1\ngen t1 deg -4\nrel t1^3 -> v^2*t2\n";
        match parse_presentation(txt) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (4, 17)),
            other => panic!("{other:?}"),
        }
        let txt = "prime 3\nheight 1\ngen e deg -1\ngen f deg -1\nrel f^2 -> 0\n";
        assert!(parse_presentation(txt).is_ok());
        let a = parse_presentation(txt).unwrap();
        assert!(matches!(parse_element(&a, "e*f*e"), Err(Error::Parse { col: 5, .. })));
        assert!(matches!(parse_presentation("prime 3\nhieght 1\n"), Err(Error::Parse { line: 2, col: 1, .. })));
    }

    #[test]
    fn fractions_need_q() {
        let q = parse_presentation("prime 3\nheight 1\ncoeff Q\n").unwrap();
        assert_eq!(q.render(&parse_element(&q, "1/3*v + 2/6*v").unwrap()), "2/3*v");
        let k = parse_presentation("prime 3\nheight 1\n").unwrap();
        assert!(parse_element(&k, "1/3").is_err());
        assert_eq!(k.render(&parse_element(&k, "1/2").unwrap()), "-1");
    }
}
