use std::sync::Arc;

use super::*;
use crate::fgl::honda;
use crate::galgebra::{parse_element, parse_presentation, tensor};

fn pres(text: &str) -> Arc<AlgebraPresentation> {
    Arc::new(parse_presentation(text).unwrap())
}

fn el(a: &AlgebraPresentation, s: &str) -> AlgebraElement {
    parse_element(a, s).unwrap()
}

fn law(p: u32, n: u32, order: u32, r: &Arc<AlgebraPresentation>) -> Arc<Fgl> {
    Arc::new(honda(p, n, order).unwrap().fgl.base_change(r.clone()).unwrap())
}

fn sigma_bar_1_2() -> Arc<AlgebraPresentation> {
    pres("prime 3\nheight 1\ngen t1 deg -4\ngen t2 deg -16\nrel t1^3 -> v^2*t1\nrel t2^3 -> v^8*t2\n")
}

#[test]
fn identity_validates_everywhere() {
    let k = pres("prime 3\nheight 2\n");
    let l = law(3, 2, 13, &k);
    let x = TruncatedSeries::variable(even_vars(&["x"]), 13, k.clone(), 0);
    let f = StrictAutHn::validate(l.clone(), &x, 1).unwrap();
    assert_eq!(f, StrictAutHn::identity(l, 1).unwrap());
    let g = StrictAutGa::validate(k.clone(), &x.truncate(9)).unwrap();
    assert_eq!(g, StrictAutGa::identity(k.clone()));
    let id = QuasiStrictAutGA::identity(k.clone());
    assert_eq!(QuasiStrictAutGA::validate(k, &id.realize().unwrap(), true).unwrap(), id);
}

#[test]
fn quasi_strict_with_odd_a0() {
    let r = pres("prime 3\nheight 2\ngen a0 deg -1\n");
    let vars = ga2_vars();
    let s1 = TruncatedSeries::parse("e + a0*x", vars.clone(), 9, r.clone(), None).unwrap();
    let s2 = TruncatedSeries::parse("x", vars, 9, r.clone(), None).unwrap();
    let pair = SeriesTuple::new(s1, s2).unwrap();
    let g = QuasiStrictAutGA::validate(r.clone(), &pair, false).unwrap();
    assert_eq!(g.odd()[0], r.gen(0));
    assert!(matches!(QuasiStrictAutGA::validate(r, &pair, true), Err(Error::NotStrict(_))));
}

#[test]
fn quadratic_term_is_not_additive() {
    let r = pres("prime 3\nheight 2\ngen c deg -2\n");
    let f = TruncatedSeries::parse("x + c*x^2", even_vars(&["x"]), 9, r.clone(), None).unwrap();
    match StrictAutGa::validate(r, &f) {
        Err(Error::NotHomomorphism(w)) => assert!(w.contains("x*y"), "{w}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn ga_cross_term_is_not_additive() {
    let r = pres("prime 3\nheight 2\ngen c deg -2\n");
    let vars = ga2_vars();
    let s1 = TruncatedSeries::parse("e + c*e*x", vars.clone(), 9, r.clone(), None).unwrap();
    let s2 = TruncatedSeries::parse("x", vars, 9, r.clone(), None).unwrap();
    let pair = SeriesTuple::new(s1, s2).unwrap();
    assert!(matches!(QuasiStrictAutGA::validate(r, &pair, false), Err(Error::NotHomomorphism(_))));
}

#[test]
fn ga_composition_example() {
    // p = 3, n = 3: (x + a x^3)·(x + b x^3) = x + (a+b) x^3 + b a^3 x^9
    let r = pres("prime 3\nheight 3\ngen a deg -4\ngen b deg -4\n");
    let z = r.zero();
    let f = StrictAutGa::new(r.clone(), vec![r.one(), r.gen(0), z.clone()]).unwrap();
    let g = StrictAutGa::new(r.clone(), vec![r.one(), r.gen(1), z]).unwrap();
    let fg = f.compose(&g).unwrap();
    assert_eq!(fg.coeffs(), &[r.one(), el(&r, "a + b"), el(&r, "b*a^3")]);
    let gf = g.compose(&f).unwrap();
    assert_eq!(gf.coeffs()[2], el(&r, "a*b^3"));
}

#[test]
fn ga_inverse_example() {
    let r = pres("prime 3\nheight 2\ngen a deg -4\n");
    let f = StrictAutGa::new(r.clone(), vec![r.one(), r.gen(0)]).unwrap();
    let i = f.invert().unwrap();
    assert_eq!(i.coeffs()[1], el(&r, "-a"));
    assert_eq!(f.compose(&i).unwrap(), f.identity_like());
}

#[test]
fn quasi_strict_composition_and_inverse() {
    let r = pres("prime 3\nheight 2\ngen a deg -1\ngen c deg -1\n");
    let z = r.zero();
    let mk = |a: AlgebraElement| QuasiStrictAutGA::new(r.clone(), vec![a, z.clone()], vec![r.one(), z.clone()]).unwrap();
    let (f, g) = (mk(r.gen(0)), mk(r.gen(1)));
    assert_eq!(f.compose(&g).unwrap(), mk(el(&r, "a + c")));
    assert_eq!(f.invert().unwrap(), mk(el(&r, "-a")));
}

/// Direct oracle: `a''_k = a_k + Σ_i a'_i b_{k-i}^{p^i}`, `b''_k = Σ_i b'_i b_{k-i}^{p^i}`.
#[test]
fn quasi_strict_product_formula() {
    let r = pres("prime 3\nheight 2\ngen a0 deg -1\ngen a1 deg -5\ngen b1 deg -4\ngen c0 deg -1\ngen c1 deg -5\ngen d1 deg -4\n");
    let g = |i| r.gen(i);
    let f = QuasiStrictAutGA::new(r.clone(), vec![g(0), g(1)], vec![r.one(), g(2)]).unwrap();
    let h = QuasiStrictAutGA::new(r.clone(), vec![g(3), g(4)], vec![r.one(), g(5)]).unwrap();
    let fh = f.compose(&h).unwrap();
    assert_eq!(fh.odd()[0], el(&r, "a0 + c0"));
    assert_eq!(fh.odd()[1], el(&r, "a1 + c0*b1 + c1"));
    assert_eq!(fh.even()[1], el(&r, "b1 + d1"));
    let back = fh.compose(&h.invert().unwrap()).unwrap();
    assert_eq!(back, f);
}

#[test]
fn hn_group_over_k1() {
    // p = 3, n = 1, window 2: a_i = λ_i v^{(3^i - 1)/2}, all 9 choices are automorphisms.
    let k = pres("prime 3\nheight 1\n");
    let l = law(3, 1, 28, &k);
    let mut all = Vec::new();
    for l1 in 0..3 {
        for l2 in 0..3 {
            let c = vec![k.one(), el(&k, &format!("{l1}*v")), el(&k, &format!("{l2}*v^4"))];
            all.push(StrictAutHn::new(l.clone(), c).unwrap());
        }
    }
    let id = StrictAutHn::identity(l, 2).unwrap();
    for f in &all {
        let i = f.invert().unwrap();
        assert_eq!(f.compose(&i).unwrap(), id);
        assert_eq!(i.compose(f).unwrap(), id);
        for g in &all {
            let fg = f.compose(g).unwrap();
            assert!(all.contains(&fg));
        }
    }
    let (f, g, h) = (&all[4], &all[5], &all[7]);
    let l = f.compose(g).unwrap().compose(h).unwrap();
    let r = f.compose(&g.compose(h).unwrap()).unwrap();
    assert_eq!(l, r);
}

#[test]
fn hn_validate_rejects_non_automorphism() {
    // homogeneous and strict, but not of the form Σ^H a_i x^{p^i}
    let k = pres("prime 3\nheight 1\n");
    let l = law(3, 1, 12, &k);
    let f = TruncatedSeries::parse("x + v^2*x^5", even_vars(&["x"]), 12, k, None).unwrap();
    assert!(matches!(StrictAutHn::validate(l, &f, 2), Err(Error::NotHomomorphism(_))));
}

#[test]
fn universal_element_over_sigma_bar() {
    let r = sigma_bar_1_2();
    let l = law(3, 1, 28, &r);
    let f = StrictAutHn::new(l.clone(), vec![r.one(), r.gen(0), r.gen(1)]).unwrap();
    // f(v x^3) = v f(x)^3
    let x = TruncatedSeries::variable(even_vars(&["x"]), 28, r.clone(), 0);
    let vx3 = TruncatedSeries::parse("v*x^3", x.vars().clone(), 28, r.clone(), None).unwrap();
    let s = f.realize().unwrap();
    let lhs = s.compose(&[vx3]).unwrap();
    let rhs = s.frobenius().scale(&r.v_pow(1)).unwrap();
    assert_eq!(lhs, rhs);
    // validate round-trips the realized series
    assert_eq!(StrictAutHn::validate(l, &s, 2).unwrap(), f);

    // without the relations the universal element is not an automorphism
    let free = pres("prime 3\nheight 1\ngen t1 deg -4\ngen t2 deg -16\n");
    let lf = law(3, 1, 28, &free);
    let g = StrictAutHn::from_coeffs_unchecked(lf, vec![free.one(), free.gen(0), free.gen(1)]).unwrap();
    assert!(g.homomorphism_failure().unwrap().is_some());
}

#[test]
fn alpha_and_beta_basics() {
    let k = pres("prime 3\nheight 1\n");
    let l = law(3, 1, 28, &k);
    let f = StrictAutHn::new(l, vec![k.one(), el(&k, "v"), k.zero()]).unwrap();
    assert_eq!(alpha(&f).unwrap(), StrictAutGa::identity(k.clone()));

    let r = pres("prime 3\nheight 2\ngen a0 deg -1\ngen b deg -4\n");
    let g = QuasiStrictAutGA::new(r.clone(), vec![r.gen(0), r.zero()], vec![r.one(), r.zero()]).unwrap();
    assert_eq!(beta(&g).unwrap(), StrictAutGa::identity(r.clone()));
    let h = QuasiStrictAutGA::new(r.clone(), vec![r.zero(), r.zero()], vec![r.one(), r.gen(1)]).unwrap();
    assert_eq!(beta(&h).unwrap().realize().unwrap().render(), "x + b*x^3");
}

#[test]
fn alpha_is_a_homomorphism_on_universal_pair() {
    // Σ̄(2) window 2 over both tensor factors; f, g the two universal elements.
    let s = pres("prime 3\nheight 2\ngen t1 deg -4\ngen t2 deg -16\nrel t1^9 -> v^2*t1\nrel t2^9 -> v^8*t2\n");
    let tp = tensor(&s, &s).unwrap();
    let r = tp.alg.clone();
    let l = law(3, 2, 82, &r);
    let left = vec![r.one(), tp.embed(0, &s.gen(0)), tp.embed(0, &s.gen(1))];
    let right = vec![r.one(), tp.embed(1, &s.gen(0)), tp.embed(1, &s.gen(1))];
    let f = StrictAutHn::from_coeffs_unchecked(l.clone(), left).unwrap();
    let g = StrictAutHn::from_coeffs_unchecked(l, right).unwrap();
    let fg = f.compose(&g).unwrap();
    assert_eq!(alpha(&fg).unwrap(), alpha(&f).unwrap().compose(&alpha(&g).unwrap()).unwrap());
}
