use super::*;
use crate::chow::{chow_form, chow_hypersurface, ChowOptions};
use crate::diffring::RingContext;

const F1: &str = "u01^2*u00'^2 - 2*u01*u01'*u00*u00' + u01'^2*u00^2 + 4*u01^3*u00";

fn p(r: &Ring, s: &str) -> DiffPoly {
    DiffPoly::parse(r, s).unwrap()
}

fn chain(names: &[&str], els: &[&str]) -> DiffChain {
    let r = RingContext::main_q(names);
    let ps: Vec<DiffPoly> = els.iter().map(|s| p(&r, s)).collect();
    charset(&ps, &Ranking::orderly(&r)).unwrap()
}

fn f1() -> (ChowForm, DiffChain) {
    let a = chain(&["y1"], &["y1'^2 - 4*y1"]);
    let c = chow_form(&a, &ChowOptions::default()).unwrap();
    assert_eq!(c.poly, p(c.poly.ring(), F1).normalize_unit());
    (c, a)
}

fn linear_pair() -> (ChowForm, DiffChain) {
    let a = chain(&["y1", "y2"], &["y1'+1", "y2'"]);
    (chow_form(&a, &ChowOptions::default()).unwrap(), a)
}

#[test]
fn homogeneity_of_f1() {
    let (c, _) = f1();
    let u0 = c.block_vars(0);
    assert_eq!(check_delta_homogeneous(&c.poly, &u0).unwrap(), Some(4));
    assert!(euler_operator(&c.poly, &u0, 1).is_zero());
}

#[test]
fn homogeneity_of_monomial_and_failure() {
    let r = RingContext::main_q(&["u00", "u01"]);
    assert_eq!(
        check_delta_homogeneous(&p(&r, "u00^2"), &[0]).unwrap(),
        Some(2)
    );
    assert_eq!(
        check_delta_homogeneous(&p(&r, "u00^2 + u00"), &[0]).unwrap(),
        None
    );
    // degree-homogeneous but not δ-homogeneous
    assert_eq!(
        check_delta_homogeneous(&p(&r, "u00*u00''"), &[0]).unwrap(),
        None
    );
    assert_eq!(
        check_delta_homogeneous(&p(&r, "u00*u00'' - u00'^2"), &[0]).unwrap(),
        None
    );
    assert_eq!(
        check_delta_homogeneous(&p(&r, "u00*u01' - u00'*u01"), &[0, 1]).unwrap(),
        Some(2)
    );
    assert!(check_delta_homogeneous(&p(&r, "u00"), &[]).is_err());
}

#[test]
fn delta_degree_of_second_order_hypersurfaces() {
    let r = RingContext::main_q(&["y"]);
    let c = chow_hypersurface(&p(&r, "2*y'^2 - y*y''")).unwrap();
    assert_eq!(
        check_delta_homogeneous(&c.poly, &c.block_vars(0)).unwrap(),
        Some(3)
    );
    let c = chow_hypersurface(&p(&r, "y'^2 - y*y''")).unwrap();
    assert_eq!(
        check_delta_homogeneous(&c.poly, &c.block_vars(0)).unwrap(),
        Some(4)
    );
}

#[test]
fn invariants_of_f1() {
    let (c, a) = f1();
    let rep = verify_against_ideal(&c, &a);
    assert!(rep.passed(), "{:?}", rep.failures());
    assert_eq!(rep.get("block_swap").unwrap().status, CheckStatus::Skipped);
    assert_eq!(rep.get("generic_point").unwrap().status, CheckStatus::Pass);
    assert_eq!(
        rep.get("defining_identity").unwrap().status,
        CheckStatus::Pass
    );
}

#[test]
fn invariants_of_linear_pair() {
    let (c, a) = linear_pair();
    let rep = verify_against_ideal(&c, &a);
    assert!(rep.passed(), "{:?}", rep.failures());
    assert_eq!(rep.checks.len(), 8);
}

#[test]
fn block_swap_in_two_blocks() {
    let r = RingContext::main_q(&["y1", "y2"]);
    let c = chow_hypersurface(&p(&r, "y1'^2 - 4*y1")).unwrap();
    let a = chain(&["y1", "y2"], &["y1'^2 - 4*y1"]);
    let rep = verify_against_ideal(&c, &a);
    assert!(rep.passed(), "{:?}", rep.failures());
    assert_eq!(rep.get("block_swap").unwrap().status, CheckStatus::Pass);
}

#[test]
fn corrupted_f1_fails() {
    let (mut c, a) = f1();
    let r = c.poly.ring().clone();
    c.poly = p(
        &r,
        "u01^2*u00'^2 + 2*u01*u01'*u00*u00' + u01'^2*u00^2 + 4*u01^3*u00",
    );
    let rep = verify_against_ideal(&c, &a);
    assert_eq!(
        rep.get("defining_identity").unwrap().status,
        CheckStatus::Fail
    );
    assert_eq!(rep.get("generic_point").unwrap().status, CheckStatus::Fail);
}

#[test]
fn mutations_are_caught() {
    let (c, a) = linear_pair();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let support = c.poly.support();
    let mut caught = 0;
    for _ in 0..100 {
        let m = &support[rng.gen_range(0..support.len())];
        let mut delta = 0i64;
        while delta == 0 {
            delta = rng.gen_range(-3..=3);
        }
        let bump = DiffPoly::term(c.poly.ring(), m.clone(), Coeff::from_int(delta));
        let mutated = ChowForm {
            poly: &c.poly + &bump,
            ..c.clone()
        };
        if !verify_against_ideal(&mutated, &a).passed() {
            caught += 1;
        }
    }
    assert!(caught >= 95, "caught {caught}");
}

#[test]
fn recovered_point_of_f1() {
    let (c, _) = f1();
    let (s, nums) = point_numerators(&c, 0).unwrap();
    // ξ = N/S must equal −u00/u01 modulo F; check u01·N + u00·S ∈ (F)
    let r = c.poly.ring();
    let lhs = &(&p(r, "u01") * &nums[0][0]) + &(&p(r, "u00") * &s);
    assert!(lhs.is_zero() || algelim::divide_exact(&lhs, &c.poly).is_ok());
}

#[test]
fn intersections() {
    let empty = DiffChain::empty(&Ranking::orderly(&RingContext::main_q(&["y1", "y2"])));
    let s11 = GenericShape::new(1, 1).unwrap();
    let one = generic_intersection(&empty, &[s11]).unwrap();
    assert_eq!(one.dim_order(), Some((1, 1)));
    let two = generic_intersection(&empty, &[s11, s11]).unwrap();
    assert_eq!(two.dim_order(), Some((0, 2)));

    let a = chain(&["y1", "y2"], &["y1'^2 - 4*y1"]);
    let chk = generic_intersection_check(&a, 0, true).unwrap();
    assert_eq!(chk.observed.dim_order(), Some((0, 1)));
    assert!(chk.passed());

    let (_, a0) = linear_pair();
    let chk = generic_intersection_check(&a0, 0, true).unwrap();
    assert_eq!(chk.observed, Intersection::UnitIdeal);
    assert_eq!(chk.expected, None);
    assert!(chk.passed());
}

#[test]
fn fiber_check_f1() {
    let (c, a) = f1();
    let ok = numeric_fiber_check(&c, &a, &FiberOptions::default()).unwrap();
    assert_eq!(ok.samples, 5);
    assert_eq!(ok.roots, 10);
    assert!(ok.max_residual < 1e-9, "{}", ok.max_residual);
    let probe = FiberOptions {
        perturbation: 1e-3,
        ..FiberOptions::default()
    };
    let bad = numeric_fiber_check(&c, &a, &probe).unwrap();
    assert!(bad.max_residual > 1e-4, "{}", bad.max_residual);
}

#[test]
fn f1_roots_match_closed_form() {
    // u00 = 2, u01 = 3, u01' = 5: γ = 10/3 ∓ 2i·√6
    let coeffs = [25.0 * 4.0 + 4.0 * 27.0 * 2.0, -2.0 * 3.0 * 5.0 * 2.0, 9.0];
    let mut roots = poly_roots(&coeffs);
    roots.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
    let s6 = 6f64.sqrt();
    assert!((roots[0] - Complex64::new(10.0 / 3.0, -2.0 * s6)).norm() < 1e-12);
    assert!((roots[1] - Complex64::new(10.0 / 3.0, 2.0 * s6)).norm() < 1e-12);
}

#[test]
fn fiber_check_linear_pair() {
    let (c, a) = linear_pair();
    let ok = numeric_fiber_check(
        &c,
        &a,
        &FiberOptions {
            seed: 3,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(ok.max_residual < 1e-9, "{}", ok.max_residual);
    let bad = numeric_fiber_check(
        &c,
        &a,
        &FiberOptions {
            seed: 3,
            perturbation: 1e-3,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(bad.max_residual > 1e-4, "{}", bad.max_residual);
}

#[test]
fn fiber_check_rejects_positive_dimension() {
    let r = RingContext::main_q(&["y1", "y2"]);
    let c = chow_hypersurface(&p(&r, "y1'^2 - 4*y1")).unwrap();
    let a = chain(&["y1", "y2"], &["y1'^2 - 4*y1"]);
    assert!(numeric_fiber_check(&c, &a, &FiberOptions::default()).is_err());
}

#[test]
fn transform_identity_and_scaling() {
    let (c, _) = f1();
    let id = linear_transform_chowform(&c, &[vec![Coeff::one()]]).unwrap();
    assert_eq!(id.poly, c.poly);
    let t = linear_transform_chowform(&c, &[vec![Coeff::from_int(2)]]).unwrap();
    assert_eq!((t.g, t.block_degrees.clone()), (2, vec![Some(4)]));
    // image of sat(y'^2 - 4y) under y ↦ 2y is sat(y'^2 - 8y)
    let a = chain(&["y1"], &["y1'^2 - 8*y1"]);
    let direct = chow_form(&a, &ChowOptions::default()).unwrap();
    assert_eq!(t.poly, direct.poly);
    assert!(
        linear_transform_chowform(&c, &[vec![Coeff::zero()]]).unwrap_err() == Error::SingularMatrix
    );
}

#[test]
fn transform_swap_linear_pair() {
    let (c, _) = linear_pair();
    let m = vec![
        vec![Coeff::zero(), Coeff::one()],
        vec![Coeff::one(), Coeff::zero()],
    ];
    let t = linear_transform_chowform(&c, &m).unwrap();
    let a = chain(&["y1", "y2"], &["y2'+1", "y1'"]);
    let direct = chow_form(&a, &ChowOptions::default()).unwrap();
    assert_eq!(t.poly, direct.poly);
    assert!(verify_against_ideal(&t, &a).passed());
}

#[test]
fn report_json_lists_every_check() {
    let (c, a) = f1();
    let v = verify_against_ideal(&c, &a).to_json();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 8);
}
