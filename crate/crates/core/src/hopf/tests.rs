use std::sync::Arc;

use super::*;
use crate::galgebra::{parse_element, parse_presentation};
use crate::report::Status;

fn all_pass(cs: &[Check]) -> bool {
    cs.iter().all(|c| c.status == Status::Pass)
}

fn failing(cs: &[Check]) -> Vec<String> {
    cs.iter().filter(|c| c.status == Status::Fail).map(|c| format!("{}: {:?}", c.name, c.witness)).collect()
}

fn delta_str(h: &HopfPresentation, name: &str) -> String {
    let g = h.alg().gen_index(name).unwrap();
    h.render_tensor(&h.coproduct_table()[g])
}

#[test]
fn small_coproduct_values() {
    let a = HopfPresentation::a_star(3, 2).unwrap();
    assert_eq!(delta_str(&a, "xi1"), "1⊗xi1 + xi1⊗1");
    let c = HopfPresentation::c_star(3, 2, 2).unwrap();
    assert_eq!(delta_str(&c, "tau0"), "1⊗tau0 + tau0⊗1");
    let b = HopfPresentation::b_star(3, 3).unwrap();
    assert_eq!(delta_str(&b, "xi2"), "1⊗xi2 + xi2⊗1 + xi1^3⊗xi1");
}

/// For `m ≤ n` the law adds nothing: `Δ(t_k) = Σ_i t_{k-i}^{p^i}⊗t_i`.
#[test]
fn sigma_bar_below_height_is_witt_formula() {
    for (p, n, m) in [(3, 2, 2), (3, 3, 3), (5, 2, 2)] {
        let h = HopfPresentation::sigma_bar(p, n, m).unwrap();
        let hh = h.hh();
        let t = |slot: usize, i: u32| if i == 0 { hh.alg.one() } else { hh.alg.gen(hh.gen_index(slot, i as usize - 1)) };
        for k in 1..=m {
            let mut expect = hh.alg.zero();
            for i in 0..=k {
                expect = hh.alg.add(&expect, &hh.alg.mul(&hh.alg.pow(&t(0, k - i), (p as u64).pow(i)), &t(1, i)));
            }
            assert_eq!(h.coproduct_table()[k as usize - 1], expect, "p={p} n={n} t{k}");
        }
    }
}

/// Above the height the law contributes: at `p = 3, n = 1`,
/// `H_1(x, y) = x + y - v(x^2 y + x y^2) + ⋯` adds `-v(t1^2⊗t1 + t1⊗t1^2)` to `Δ(t2)`
/// (and `t1^3 = v^2 t1`).
#[test]
fn sigma_bar_corrections_above_height() {
    let h = HopfPresentation::sigma_bar(3, 1, 2).unwrap();
    assert_eq!(delta_str(&h, "t2"), "1⊗t2 + t2⊗1 + v^2*t1⊗t1 - v*t1⊗t1^2 - v*t1^2⊗t1");
}

#[test]
fn coproduct_of_a_product_matches_direct_expansion() {
    let h = HopfPresentation::c_star(3, 2, 2).unwrap();
    let a = h.alg();
    let hh = h.hh();
    let (t0, t1) = (a.gen_index("tau0").unwrap(), a.gen_index("tau1").unwrap());
    let x = a.mul(&a.gen(t0), &a.gen(t1));
    let got = h.coproduct(&x).unwrap();
    // oracle: (L1⊗R1)(L2⊗R2) = (-1)^{|R1||L2|} L1L2⊗R1R2 on split terms
    let mut expect = hh.alg.zero();
    let d0 = &h.coproduct_table()[t0];
    let d1 = &h.coproduct_table()[t1];
    for (m1, c1) in d0.terms() {
        let s1 = hh.split(m1);
        for (m2, c2) in d1.terms() {
            let s2 = hh.split(m2);
            let odd = |m: &Monomial| a.monomial_is_odd(m);
            let sign = if odd(&s1[1]) && odd(&s2[0]) { -1 } else { 1 };
            let l = a.mul(&a.term(s1[0].clone(), c1.clone()), &a.term(s2[0].clone(), c2.clone()));
            let r = a.mul(&a.term(s1[1].clone(), a.field().one()), &a.term(s2[1].clone(), a.field().one()));
            let lr = hh.alg.mul(&hh.embed(0, &l), &hh.embed(1, &r));
            expect = hh.alg.add(&expect, &hh.alg.scale(&a.field().from_i64(sign), &lr));
        }
    }
    assert_eq!(got, expect);
    assert!(!got.is_zero());
}

#[test]
fn axioms_hold_for_all_builders() {
    for which in Builder::all() {
        for (p, n, m) in [(3, 1, 2), (3, 2, 2), (5, 1, 1)] {
            let h = HopfPresentation::build(which, p, n, m).unwrap();
            let checks = verify_hopf_axioms(&h, h.default_degree_bound()).unwrap();
            assert!(all_pass(&checks), "{which:?} p={p} n={n} m={m}: {:?}", failing(&checks));
        }
    }
}

#[test]
fn kk_window_four_at_bound_sixty() {
    let h = HopfPresentation::kk(3, 2, 4).unwrap();
    let checks = verify_hopf_axioms(&h, 60).unwrap();
    assert!(all_pass(&checks), "{:?}", failing(&checks));
}

/// Dropping `t1⊗τ0` from `Δ(τ1)` leaves `τ1` primitive, which is still
/// coassociative on its own; the damage shows on `Δ(τ2)`, so `n = 3`.
#[test]
fn mutated_coproduct_fails_coassociativity() {
    let h = HopfPresentation::c_star(3, 3, 2).unwrap();
    let hh = h.hh();
    let g = h.alg().gen_index("tau1").unwrap();
    let t1 = h.alg().gen_index("t1").unwrap();
    let tau0 = h.alg().gen_index("tau0").unwrap();
    let drop = hh.alg.mul(&hh.alg.gen(hh.gen_index(0, t1)), &hh.alg.gen(hh.gen_index(1, tau0)));
    let bad = h.with_coproduct(g, hh.alg.sub(&h.coproduct_table()[g], &drop));
    let checks = verify_hopf_axioms(&bad, bad.default_degree_bound()).unwrap();
    let co = checks.iter().find(|c| c.name.starts_with("coassociativity")).unwrap();
    assert_eq!(co.status, Status::Fail);
    assert!(all_pass(&verify_hopf_axioms(&h, h.default_degree_bound()).unwrap()));
}

#[test]
fn antipode_examples() {
    let h = HopfPresentation::sigma_bar(3, 2, 2).unwrap();
    let a = h.alg();
    assert_eq!(a.render(&h.antipode(0).unwrap()), "-t1");
    assert_eq!(h.antipode(1).unwrap(), parse_element(a, "-t2 + t1^4").unwrap());
    let kk = HopfPresentation::kk(3, 2, 2).unwrap();
    assert_eq!(kk.antipode(kk.alg().gen_index("tau0").unwrap()).unwrap(), kk.alg().neg(&kk.alg().gen_named("tau0").unwrap()));
}

#[test]
fn derived_coproducts_match_tables() {
    for (which, p, n, m) in [
        (Builder::A, 3, 3, 0),
        (Builder::B, 3, 2, 0),
        (Builder::B, 5, 3, 0),
        (Builder::SigmaBar, 3, 1, 2),
        (Builder::SigmaBar, 3, 2, 3),
        (Builder::C, 3, 2, 2),
        (Builder::KK, 3, 2, 2),
    ] {
        let h = HopfPresentation::build(which, p, n, m).unwrap();
        let (_, checks) = derive_coproduct(&h, ProductOrder::default_for(which)).unwrap();
        assert!(all_pass(&checks), "{which:?} p={p} n={n}: {:?}", failing(&checks));
    }
}

#[test]
fn wrong_product_order_is_detected() {
    let h = HopfPresentation::b_star(3, 2).unwrap();
    let (_, checks) = derive_coproduct(&h, ProductOrder::Standard).unwrap();
    assert!(!all_pass(&checks));
}

#[test]
fn sigma_relations_from_p_series() {
    let d = derive_sigma_relations(3, 1, 1, 28, 1).unwrap();
    assert!(!d.equations.is_empty());
    assert!(all_pass(&d.checks), "{:?}", failing(&d.checks));
    // the x^9 equation is a unit multiple of t1^3 - v^2 t1
    let (_, e9) = d.equations.iter().find(|(k, _)| *k == 9).unwrap();
    let rel = parse_element(&d.free, "t1^3 - v^2*t1").unwrap();
    let sv = d.free.shift_v(&rel, 1);
    assert!(*e9 == sv || *e9 == d.free.neg(&sv), "{}", d.free.render(e9));
    assert!(derive_sigma_relations(3, 1, 1, 9, 1).is_err());
}

#[test]
fn exterior_points_form_cyclic_group() {
    let h = HopfPresentation::b_star(3, 1).unwrap();
    let r = Arc::new(parse_presentation("prime 3\nheight 1\ngen eps deg -1\n").unwrap());
    let (g, checks) = convolution_points(&h, &r, 4).unwrap();
    assert!(all_pass(&checks));
    assert_eq!(g.order(), 3);
    assert!(g.is_cyclic());
    assert!(g.homs[g.identity].images().iter().all(|x| x.is_zero()));
}

#[test]
fn sigma_bar_points_in_k2() {
    let h = HopfPresentation::sigma_bar(3, 2, 3).unwrap();
    let k = Arc::new(parse_presentation("prime 3\nheight 2\n").unwrap());
    let (g, checks) = convolution_points(&h, &k, 4).unwrap();
    assert!(all_pass(&checks));
    assert_eq!(g.order(), 3);
    assert!(g.is_abelian() && g.is_cyclic());
}
