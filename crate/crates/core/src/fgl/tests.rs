use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use smallvec::smallvec;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::galgebra::{parse_element, parse_presentation, GeneratorSpec};
use crate::report::Status;

fn kn(p: u32, n: u32) -> Arc<AlgebraPresentation> {
    Arc::new(AlgebraPresentation::base(p, n, CoeffRing::Kn).unwrap())
}

fn all_pass(cs: &[Check]) -> bool {
    cs.iter().all(|c| c.status == Status::Pass)
}

fn x1(alg: &Arc<AlgebraPresentation>, n: u32) -> TruncatedSeries {
    TruncatedSeries::variable(even_vars(&["x"]), n, alg.clone(), 0)
}

#[test]
fn additive_law_passes_and_unit_failure_is_caught() {
    assert!(all_pass(&verify_fgl_axioms(&Fgl::additive(kn(3, 1), 9))));
    let a = Arc::new(AlgebraPresentation::new(3, 1, CoeffRing::Kn, vec![GeneratorSpec::new("c", -2)]).unwrap());
    let s = TruncatedSeries::parse("x + y + c*x^2", even_vars(&["x", "y"]), 6, a, None).unwrap();
    let checks = verify_fgl_axioms(&Fgl::new(s, "test").unwrap());
    let by = |k: &str| checks.iter().find(|c| c.name.starts_with(k)).unwrap().status;
    assert_eq!(by("unit: F(x,0)"), Status::Fail);
    assert_eq!(by("unit: F(0,y)"), Status::Pass);
    assert_eq!(by("commutativity"), Status::Fail);
}

#[test]
fn honda_height_one() {
    let h = honda(3, 1, 12).unwrap();
    assert!(all_pass(&h.lift_checks));
    assert!(all_pass(&verify_honda(&h)));
    let ps = h.fgl.p_series().unwrap();
    assert_eq!(ps.render(), "v*x^3");
}

#[test]
fn honda_log_coefficients() {
    let q = Arc::new(AlgebraPresentation::base(3, 1, CoeffRing::Q).unwrap());
    let l = honda_log(&q, 12).unwrap();
    let r = |n: i64, d: i64| Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)));
    assert_eq!(l.coeff1(1), q.one());
    assert_eq!(l.coeff1(3), q.term(Monomial::v_pow(0, 1), r(1, 3)));
    assert_eq!(l.coeff1(9), q.term(Monomial::v_pow(0, 4), r(1, 9)));
    assert_eq!(l.terms().len(), 3);
}

#[test]
fn honda_below_p_to_the_n_is_additive() {
    for (p, n) in [(3u32, 1u32), (3, 2), (5, 1)] {
        let pn = p.pow(n);
        assert!(honda(p, n, pn).unwrap().fgl.is_additive(), "p={p} n={n}");
        // chunk of size p^n - 1 of a bigger law
        let h = honda(p, n, pn + p + 1).unwrap();
        assert!(h.fgl.chunk(pn - 1).is_additive());
        assert!(!h.fgl.is_additive());
    }
}

#[test]
fn additive_inverse_and_p_series() {
    let g = Fgl::additive(kn(3, 2), 8);
    assert_eq!(g.formal_inverse().unwrap(), x1(&kn(3, 2), 8).neg());
    assert!(g.p_series().unwrap().is_zero());
}

#[test]
fn formal_sum_matches_direct_substitution() {
    let r = Arc::new(parse_presentation("prime 3\nheight 1\ngen t1 deg -4\nrel t1^3 -> v^2*t1\n").unwrap());
    let h = honda(3, 1, 12).unwrap();
    let f = h.fgl.base_change(r.clone()).unwrap();
    let t1 = r.gen(0);
    let x = x1(&r, 12);
    let tx3 = TruncatedSeries::from_terms(even_vars(&["x"]), 12, r.clone(), 2, [(smallvec![3], t1.clone())]).unwrap();
    let got = f.formal_sum(&[x, tx3]).unwrap();
    // oracle: Σ h_ab x^a (t1 x^3)^b collected by hand
    let mut expect = vec![r.zero(); 12];
    for (e, c) in f.series().terms() {
        let k = e[0] + 3 * e[1];
        if k < 12 {
            let tb = r.pow(&t1, e[1] as u64);
            expect[k as usize] = r.add(&expect[k as usize], &r.mul(c, &tb));
        }
    }
    for k in 0..12 {
        assert_eq!(got.coeff1(k as u32), expect[k], "x^{k}");
    }
    assert_eq!(got.coeff1(1), r.one());
    assert_eq!(got.coeff1(3), t1);
}

#[test]
fn hn_adic_expansion_examples() {
    let h = honda(3, 1, 28).unwrap();
    let k = h.fgl.alg().clone();
    let x = x1(&k, 28);
    assert_eq!(hn_adic_expand(&h.fgl, &x, 2).unwrap(), vec![k.one(), k.zero(), k.zero()]);

    let r = Arc::new(parse_presentation("prime 3\nheight 1\ngen a deg -4\ngen b deg -16\n").unwrap());
    let f = h.fgl.base_change(r.clone()).unwrap();
    let (a, b) = (r.gen(0), r.gen(1));
    let s = formal_sum_p_powers(&f, &[r.one(), a.clone()], 28).unwrap();
    assert_eq!(hn_adic_expand(&f, &s, 2).unwrap(), vec![r.one(), a.clone(), r.zero()]);

    // additive: expansion is the plain coefficient list
    let g = Fgl::additive(r.clone(), 28);
    let plain = TruncatedSeries::parse("x + a*x^3 + b*x^9", even_vars(&["x"]), 28, r.clone(), None).unwrap();
    assert_eq!(hn_adic_expand(&g, &plain, 2).unwrap(), vec![r.one(), a, b]);

    let c = Arc::new(parse_presentation("prime 3\nheight 1\ngen c deg -2\n").unwrap());
    let bad = TruncatedSeries::parse("x + c*x^2", even_vars(&["x"]), 10, c.clone(), None).unwrap();
    assert_eq!(hn_adic_expand(&Fgl::additive(c, 10), &bad, 2), Err(Error::NotHnAdic(2)));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let h = honda(3, 2, 13).unwrap();
    save_honda(&h, dir.path()).unwrap();
    let back = load_honda(dir.path(), 3, 2, 13).unwrap().unwrap();
    assert_eq!(back.fgl, h.fgl);
    assert_eq!(verify_honda(&back), verify_honda(&h));
    assert!(load_honda(dir.path(), 3, 2, 14).unwrap().is_none());
}

/// Random element of degree `d` in F_3[v^±][a, b] (deg a = -4, deg b = -16).
fn random_elem(r: &AlgebraPresentation, d: i64, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let mut out = r.zero();
    for i in 0..4 {
        for j in 0..2 {
            let rest = d + 4 * i + 16 * j;
            if rest % -4 == 0 && rng.gen_bool(0.5) {
                let c = rng.gen_range(1..3);
                let e = parse_element(r, &format!("{c}*a^{i}*b^{j}*v^{}", rest / -4)).unwrap();
                out = r.add(&out, &e);
            }
        }
    }
    out
}

#[test]
fn expansion_inverts_formal_sum_on_random_lists() {
    let seed = 0x5eed_0001u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = honda(3, 1, 28).unwrap();
    let r = Arc::new(parse_presentation("prime 3\nheight 1\ngen a deg -4\ngen b deg -16\n").unwrap());
    let f = h.fgl.base_change(r.clone()).unwrap();
    for case in 0..10 {
        let ds: Vec<_> = (0..3).map(|i| if i == 0 { r.one() } else { random_elem(&r, 2 - 2 * 3i64.pow(i), &mut rng) }).collect();
        let s = formal_sum_p_powers(&f, &ds, 28).unwrap();
        assert_eq!(hn_adic_expand(&f, &s, 2).unwrap(), ds, "seed {seed} case {case}");
    }
}

#[test]
fn formal_sum_bracketing_is_irrelevant() {
    let seed = 0x5eed_0002u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = honda(3, 1, 20).unwrap();
    let r = Arc::new(parse_presentation("prime 3\nheight 1\ngen a deg -4\ngen b deg -16\n").unwrap());
    let f = h.fgl.base_change(r.clone()).unwrap();
    let rand_series = |rng: &mut ChaCha8Rng| {
        let terms = (1..20u32).map(|k| (smallvec![k], random_elem(&r, 2 - 2 * k as i64, rng)));
        TruncatedSeries::from_terms(even_vars(&["x"]), 20, r.clone(), 2, terms).unwrap()
    };
    for case in 0..5 {
        let (a, b, c) = (rand_series(&mut rng), rand_series(&mut rng), rand_series(&mut rng));
        let l = f.apply(&f.apply(&a, &b).unwrap(), &c).unwrap();
        let rr = f.apply(&a, &f.apply(&b, &c).unwrap()).unwrap();
        assert_eq!(l, rr, "seed {seed} case {case}");
    }
}
