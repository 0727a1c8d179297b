use std::sync::Arc;

use super::*;
use crate::galgebra::parse_presentation;
use crate::hopf::verify_hopf_axioms;
use crate::report::Status;

fn pres(text: &str) -> Arc<AlgebraPresentation> {
    Arc::new(parse_presentation(text).unwrap())
}

fn failing(cs: &[Check]) -> Vec<String> {
    cs.iter().filter(|c| c.status == Status::Fail).map(|c| format!("{}: {:?}", c.name, c.witness)).collect()
}

fn k2() -> Arc<AlgebraPresentation> {
    pres("prime 3\nheight 2\n")
}

fn dual(deg: i64) -> Arc<AlgebraPresentation> {
    let rel = if deg % 2 == 0 { "rel e^2 -> 0\n" } else { "" };
    pres(&format!("prime 3\nheight 2\ngen e deg {deg}\n{rel}"))
}

#[test]
fn pushout_is_c_star() {
    for (p, n, m) in [(3, 1, 1), (3, 2, 1), (3, 2, 2), (3, 3, 2), (5, 2, 1)] {
        let po = pushout(p, n, m).unwrap();
        assert!(po.checks.iter().all(Check::passed), "p={p} n={n} m={m}: {:?}", failing(&po.checks));
        let ax = verify_hopf_axioms(&po.hopf, po.hopf.default_degree_bound()).unwrap();
        assert!(ax.iter().all(Check::passed), "{:?}", failing(&ax));
    }
    assert!(pushout(3, 3, 1).is_err());
}

#[test]
fn pushout_tau_coproduct() {
    let po = pushout(3, 2, 2).unwrap();
    let h = &po.hopf;
    let g = h.alg().gen_index("tau1").unwrap();
    assert_eq!(h.render_tensor(&h.coproduct_table()[g]), "1⊗tau1 + tau1⊗1 + t1⊗tau0");
    // n = 1: no ξ's, τ_0 primitive
    let po = pushout(3, 1, 2).unwrap();
    let g = po.hopf.alg().gen_index("tau0").unwrap();
    assert_eq!(po.hopf.render_tensor(&po.hopf.coproduct_table()[g]), "1⊗tau0 + tau0⊗1");
}

#[test]
fn structural_difference_sees_a_changed_coproduct() {
    let po = pushout(3, 2, 1).unwrap();
    let c = HopfPresentation::c_star(3, 2, 1).unwrap();
    let g = c.alg().gen_index("tau1").unwrap();
    let bad = c.with_coproduct(g, c.hh().alg.zero());
    assert!(structural_difference(&po.hopf, &bad).unwrap().contains("tau1"));
}

#[test]
fn universal_property_by_enumeration() {
    let po = pushout(3, 2, 1).unwrap();
    for r in [k2(), dual(-1), dual(-4)] {
        let c = pushout_universal_property(&po, &r, 4).unwrap();
        assert_eq!(c.status, Status::Pass, "{c:?}");
    }
}

#[test]
fn fiber_element_requires_compatibility() {
    let r = dual(-4);
    let law = Arc::new(honda(3, 2, 10).unwrap().fgl.base_change(r.clone()).unwrap());
    let id = FiberElement::identity(law.clone(), 1).unwrap();
    assert_eq!(id.compose(&id).unwrap(), id);
    let f = StrictAutHn::new(law, vec![r.one(), r.gen(0)]).unwrap();
    let g = QuasiStrictAutGA::identity(r.clone());
    assert!(matches!(FiberElement::new(f.clone(), g), Err(Error::Incompatible(_))));
    let g = QuasiStrictAutGA::new(r.clone(), vec![r.zero(), r.zero()], vec![r.one(), r.gen(0)]).unwrap();
    let e = FiberElement::new(f, g).unwrap();
    let i = e.invert().unwrap();
    assert_eq!(e.compose(&i).unwrap(), id);
    assert_eq!(alpha(i.hn()).unwrap(), beta(i.ga()).unwrap());
}

#[test]
fn ga_functor_over_dual_numbers() {
    // deg ε = 2 - 2p: ξ_1 ↦ λε, p elements, cyclic
    let c = corepresentability_check(Functor::Ga, 3, 2, 0, &dual(-4), 4).unwrap();
    assert!(c.passed(), "{:?}", failing(&c.checks));
    assert_eq!(c.points.order(), 3);
    assert!(c.points.is_cyclic());
}

#[test]
fn hn_functor_over_k2() {
    // only t_2 ↦ λv is free
    let c = corepresentability_check(Functor::Hn, 3, 2, 2, &k2(), 4).unwrap();
    assert!(c.passed(), "{:?}", failing(&c.checks));
    assert_eq!(c.values.len(), 3);
}

#[test]
fn fiber_functor_over_odd_dual_numbers() {
    // a_0 ↦ λε; for C also t_2 ↦ μv
    for (functor, count) in [(Functor::GA, 3), (Functor::C, 9)] {
        let c = corepresentability_check(functor, 3, 2, 2, &dual(-1), 4).unwrap();
        assert!(c.passed(), "{functor:?}: {:?}", failing(&c.checks));
        assert_eq!(c.values.len(), count, "{functor:?}");
    }
}

#[test]
fn kappa_star_small_window() {
    let k = kappa_star(3, 2, 2, (-60, 0)).unwrap();
    assert!(k.passed(), "{:?}", failing(&k.checks));
    let tau0 = k.c.alg().gen_index("tau0").unwrap();
    assert_eq!(k.kk.alg().render(k.map.image(tau0)), "-tau0");
}

#[test]
fn kappa_star_relation_mutation_fails() {
    let c = HopfPresentation::c_star(3, 2, 2).unwrap();
    let k = kappa_between(c, mutated_kk(3, 2, 2).unwrap(), (-20, 0)).unwrap();
    assert_eq!(k.checks[0].status, Status::Fail, "{:?}", k.checks[0]);
}

#[test]
fn kappa_at_height_one_mixes_in_v_multiples() {
    // deg v = deg t_1: κ(t_i) picks up v^k t_1 terms yet stays invertible
    let k = kappa_star(3, 1, 3, (-60, 0)).unwrap();
    assert!(k.passed(), "{:?}", failing(&k.checks));
}

#[test]
fn singular_linear_part_is_caught() {
    let c = HopfPresentation::c_star(3, 2, 2).unwrap();
    let a = c.alg().clone();
    let t1 = a.gen_index("t1").unwrap();
    let mut imgs: Vec<_> = (0..a.generators().len()).map(|i| a.gen(i)).collect();
    imgs[t1] = a.mul(&a.gen(t1), &a.gen(t1));
    let h = AlgebraHom::new_unchecked(a.clone(), a.clone(), imgs).unwrap();
    assert!(indecomposable_failure(&h).unwrap().contains("rank"));
    let id = AlgebraHom::new_unchecked(a.clone(), a.clone(), (0..a.generators().len()).map(|i| a.gen(i)).collect()).unwrap();
    assert!(indecomposable_failure(&id).is_none());
}
