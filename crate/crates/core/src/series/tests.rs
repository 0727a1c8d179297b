use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use smallvec::smallvec;

use super::*;
use crate::galgebra::{parse_element, AlgebraPresentation, CoeffRing, GeneratorSpec};

fn alg(gens: &[(&str, i64)], ring: CoeffRing) -> Arc<AlgebraPresentation> {
    let g = gens.iter().map(|(n, d)| GeneratorSpec::new(*n, *d)).collect();
    Arc::new(AlgebraPresentation::new(3, 1, ring, g).unwrap())
}

fn x_only() -> Arc<[VariableSpec]> {
    even_vars(&["x"])
}

fn ser(text: &str, vars: &Arc<[VariableSpec]>, n: u32, a: &Arc<AlgebraPresentation>) -> TruncatedSeries {
    TruncatedSeries::parse(text, vars.clone(), n, a.clone(), None).unwrap()
}

#[test]
fn addition_cancels() {
    let a = alg(&[], CoeffRing::Kn);
    let v = even_vars(&["x", "y"]);
    let s = ser("x + y", &v, 5, &a).add(&ser("-x - y", &v, 5, &a)).unwrap();
    assert!(s.is_zero());
}

#[test]
fn odd_variable_squares_to_zero_and_koszul_sign() {
    let a = alg(&[("tau0", -1)], CoeffRing::Kn);
    let v: Arc<[VariableSpec]> = vec![VariableSpec::odd("e"), VariableSpec::even("x")].into();
    let e = ser("e", &v, 5, &a);
    assert!(e.mul(&e).unwrap().is_zero());
    let tx = ser("tau0*x", &v, 5, &a);
    let l = tx.mul(&e).unwrap();
    let r = e.mul(&tx).unwrap();
    assert!(!l.is_zero());
    assert_eq!(l, r.neg());
    // parsing respects factor order the same way
    assert_eq!(ser("e*tau0*x", &v, 5, &a), ser("-tau0*e*x", &v, 5, &a));
}

#[test]
fn compose_with_identity() {
    let a = alg(&[("a", -4)], CoeffRing::Kn);
    let v = x_only();
    let f = ser("x + a*x^3", &v, 9, &a);
    let x = TruncatedSeries::variable(v.clone(), 9, a.clone(), 0);
    assert_eq!(f.compose(&[x]).unwrap(), f);
}

/// Dense expansion over F_3[a] with `a` formal: key (x-exponent, a-exponent).
fn oracle_compose_cubic(n: u32) -> BTreeMap<(u32, u32), u32> {
    // g = x + a x^3; result = g + a g^3
    let g: BTreeMap<(u32, u32), u32> = [((1, 0), 1), ((3, 1), 1)].into();
    let mul = |p: &BTreeMap<(u32, u32), u32>, q: &BTreeMap<(u32, u32), u32>| {
        let mut r = BTreeMap::new();
        for ((i, j), c) in p {
            for ((k, l), d) in q {
                if i + k < n {
                    *r.entry((i + k, j + l)).or_insert(0) += c * d;
                }
            }
        }
        r
    };
    let g3 = mul(&mul(&g, &g), &g);
    let mut r = g.clone();
    for ((i, j), c) in g3 {
        *r.entry((i, j + 1)).or_insert(0) += c;
    }
    r.into_iter().map(|(k, c)| (k, c % 3)).filter(|(_, c)| *c != 0).collect()
}

#[test]
fn compose_against_dense_expansion() {
    let a = alg(&[("a", -4)], CoeffRing::Kn);
    let v = x_only();
    let f = ser("x + a*x^3", &v, 9, &a);
    let got = f.compose(&[f.clone()]).unwrap();
    let oracle = oracle_compose_cubic(9);
    let mut seen = 0;
    for ((i, j), c) in &oracle {
        let coeff = got.coefficient(&[*i]).unwrap();
        assert_eq!(coeff, a.scale(&crate::galgebra::Scalar::Fp(*c), &a.pow(&a.gen(0), *j as u64)));
        seen += 1;
    }
    assert_eq!(got.terms().len(), seen);
    assert_eq!(got.render(), "x - a*x^3");
}

#[test]
fn compose_mixed_parity() {
    let a = alg(&[("a0", -1), ("b", -4)], CoeffRing::Kn);
    let v: Arc<[VariableSpec]> = vec![VariableSpec::odd("e"), VariableSpec::even("x")].into();
    let f = ser("e + a0*x", &v, 5, &a);
    let subs = [ser("e", &v, 5, &a), ser("x + b*x^3", &v, 5, &a)];
    assert_eq!(f.compose(&subs).unwrap(), ser("e + a0*x + a0*b*x^3", &v, 5, &a));
}

#[test]
fn inverse_examples() {
    let a = alg(&[("a", -4)], CoeffRing::Kn);
    let v = x_only();
    let x = TruncatedSeries::variable(v.clone(), 9, a.clone(), 0);
    assert_eq!(x.inverse().unwrap(), x);
    let f = ser("x + a*x^3", &v, 9, &a);
    assert_eq!(f.inverse().unwrap(), ser("x - a*x^3", &v, 9, &a));

    // over Q: x + x^2 (with a degree -2 marker) inverts with Catalan numbers
    let q = alg(&[("c", -2)], CoeffRing::Q);
    let f = ser("x + c*x^2", &v, 7, &q);
    let g = f.inverse().unwrap();
    let catalan = [1i64, 1, 2, 5, 14, 42];
    for k in 1..7u32 {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let expect = q.scale(&q.field().from_i64(sign * catalan[k as usize - 1]), &q.pow(&q.gen(0), k as u64 - 1));
        assert_eq!(g.coeff1(k), expect, "x^{k}");
    }
    assert!(ser("2*x", &v, 7, &q).inverse().is_err());
}

#[test]
fn coefficient_window() {
    let a = alg(&[], CoeffRing::Kn);
    let v = even_vars(&["x", "y"]);
    let s = ser("x + y", &v, 4, &a);
    assert_eq!(s.coefficient(&[1, 0]).unwrap(), a.one());
    assert!(s.coefficient(&[3, 0]).unwrap().is_zero());
    assert!(matches!(s.coefficient(&[2, 2]), Err(Error::OutOfWindow(_))));
}

#[test]
fn nonzero_constant_term_rejected() {
    let a = alg(&[], CoeffRing::Kn);
    let v = x_only();
    let f = ser("x", &v, 4, &a);
    let mut bad = f.clone();
    bad.terms.insert(smallvec![0], a.one());
    assert!(matches!(f.compose(&[bad]), Err(Error::NonzeroConstantTerm)));
}

#[test]
fn inhomogeneous_terms_rejected() {
    let a = alg(&[("a", -4)], CoeffRing::Kn);
    let v = x_only();
    let r = TruncatedSeries::parse("x + a*x^2", v, 5, a, None);
    assert!(matches!(r, Err(Error::Inhomogeneous(_))));
}

#[test]
fn frobenius_matches_repeated_product() {
    let a = alg(&[("a", -2), ("b", -4)], CoeffRing::Kn);
    let v = even_vars(&["x", "y"]);
    let f = ser("x + y + a*x*y + b*x^2*y + a^2*x*y^2", &v, 20, &a);
    assert_eq!(f.frobenius(), f.pow(3).unwrap());
}

// ---- properties ---------------------------------------------------------

fn prop_alg() -> Arc<AlgebraPresentation> {
    alg(&[("a", -2), ("b", -4)], CoeffRing::Kn)
}

/// Random strict series `x + Σ c_k x^k`, coefficient of degree 2 - 2k built
/// from `a^i b^j v^l` with `i + 2j + 2l = k - 1`.
fn strict_series(n: u32) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(0u32..3, 64).prop_map(move |digits| {
        let a = prop_alg();
        let mut it = digits.into_iter().cycle();
        let mut terms = vec![(smallvec![1], a.one())];
        for k in 2..n {
            let mut c = a.zero();
            let d = k - 1;
            for l in 0..=d / 2 {
                for j in 0..=(d - 2 * l) / 2 {
                    let i = d - 2 * l - 2 * j;
                    let s = it.next().unwrap();
                    if s != 0 {
                        let m = parse_element(&a, &format!("{s}*a^{i}*b^{j}*v^{l}")).unwrap();
                        c = a.add(&c, &m);
                    }
                }
            }
            terms.push((smallvec![k], c));
        }
        TruncatedSeries::from_terms(x_only(), n, a, 2, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn composition_is_associative(f in strict_series(7), g in strict_series(7), h in strict_series(7)) {
        let l = f.compose(&[g.clone()]).unwrap().compose(&[h.clone()]).unwrap();
        let r = f.compose(&[g.compose(&[h]).unwrap()]).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn inverse_is_an_involution(f in strict_series(8)) {
        let g = f.inverse().unwrap();
        prop_assert!(g.check_homogeneous().is_ok());
        let x = TruncatedSeries::variable(x_only(), 8, prop_alg(), 0);
        prop_assert_eq!(f.compose(&[g.clone()]).unwrap(), x.clone());
        prop_assert_eq!(g.compose(&[f.clone()]).unwrap(), x);
        prop_assert_eq!(g.inverse().unwrap(), f);
    }

    #[test]
    fn products_stay_homogeneous(f in strict_series(8), g in strict_series(8)) {
        let p = f.mul(&g).unwrap();
        prop_assert!(p.check_homogeneous().is_ok());
        prop_assert_eq!(p.degree(), 4);
    }
}
