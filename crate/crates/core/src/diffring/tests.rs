use super::*;
use proptest::prelude::*;

fn q(names: &[&str]) -> Ring {
    RingContext::main_q(names)
}

fn qt(names: &[&str]) -> Ring {
    RingContext::with_params(BaseField::RationalFunctionsQt, names, &[]).unwrap()
}

fn p(r: &Ring, s: &str) -> DiffPoly {
    DiffPoly::parse(r, s).unwrap()
}

#[test]
fn difference_of_squares() {
    let r = q(&["y1"]);
    let a = p(&r, "y1 + 1");
    let b = p(&r, "y1 - 1");
    assert_eq!(&a * &b, p(&r, "y1^2 - 1"));
}

#[test]
fn square_of_hyperplane() {
    let r = q(&["y1", "u00", "u01"]);
    let a = p(&r, "u01*y1 + u00").pow(2);
    assert_eq!(a, p(&r, "u01^2*y1^2 + 2*u00*u01*y1 + u00^2"));
    assert_eq!(a.nterms(), 3);
}

#[test]
fn self_difference_is_empty() {
    let r = q(&["y1", "y2"]);
    let a = p(&r, "y1'^3*y2 - 7/3*y2''");
    assert!((&a - &a).terms().is_empty());
}

#[test]
fn pow_rejects_negative() {
    let r = q(&["y1"]);
    assert_eq!(p(&r, "y1").try_pow(-1), Err(Error::NegativeExponent(-1)));
    assert_eq!(
        DiffPoly::parse(&r, "y1^-2"),
        Err(Error::NegativeExponent(-2))
    );
}

#[test]
fn ring_mismatch() {
    let a = p(&q(&["y1"]), "y1");
    let b = p(&q(&["y2"]), "y2");
    assert_eq!(a.try_add(&b), Err(Error::RingMismatch));
}

#[test]
fn derivative_of_hyperplane() {
    let r = q(&["y1", "u00", "u01"]);
    let d = p(&r, "u00 + u01*y1").derivative();
    assert_eq!(d, p(&r, "u00' + u01'*y1 + u01*y1'"));
}

#[test]
fn derivative_over_qt() {
    let r = qt(&["y1"]);
    let d = p(&r, "t*y1^2").derivative();
    assert_eq!(d, p(&r, "y1^2 + 2*t*y1*y1'"));
    assert!(p(&r, "5/7").derivative().is_zero());
}

#[test]
fn orders_and_degrees() {
    let r = q(&["y1", "y2"]);
    let f = p(&r, "y1'^2 - 4*y1");
    assert_eq!(f.order_wrt(0), Order::Finite(1));
    assert_eq!(f.order_wrt(1), Order::NegInfinity);
    assert_eq!(f.total_order(), Order::Finite(1));
    assert_eq!(f.degree(DerVar::new(0, 1)), 2);
    assert_eq!(f.total_degree(), 2);
    assert_eq!(f.support().len(), 2);
}

#[test]
fn explicit_derivative_syntax() {
    let r = q(&["u00", "u01"]);
    assert_eq!(p(&r, "d(u00,2)*u01"), p(&r, "u00''*u01"));
    assert_eq!(p(&r, "d(u00,5)").to_text(), "d(u00,5)");
}

#[test]
fn substitution_is_algebraic() {
    let r = q(&["y1", "u00", "u01"]);
    let f = p(&r, "y1'^2 - 4*y1");
    let mut m = HashMap::new();
    m.insert(DerVar::new(0, 0), DiffPoly::zero(&r));
    assert_eq!(f.substitute(&m).unwrap(), p(&r, "y1'^2"));

    // y1 -> -u00/u01, cleared by u01^2
    let g = p(&r, "y1^2");
    let mut m = HashMap::new();
    m.insert(DerVar::new(0, 0), p(&r, "-u00"));
    let num = g.substitute(&m).unwrap();
    assert_eq!(num, p(&r, "u00^2"));
}

#[test]
fn substitution_into_unknown_ring_variable_fails() {
    let r = q(&["y1", "u00"]);
    let s = q(&["u00"]);
    let f = p(&r, "y1*u00 + y1'");
    let mut m = HashMap::new();
    m.insert(DerVar::new(0, 0), p(&s, "u00"));
    assert_eq!(f.substitute(&m), Err(Error::UnknownVariable("y1".into())));
}

#[test]
fn syntax_errors_carry_position() {
    let r = q(&["y1"]);
    match DiffPoly::parse(&r, "y1 + * 2") {
        Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
        other => panic!("{other:?}"),
    }
    assert_eq!(
        DiffPoly::parse(&r, "z1"),
        Err(Error::UnknownVariable("z1".into()))
    );
}

const LINEAR_PAIR: &str = "u02*u01'*u00'' + u01''*u01*u02 - 2*u02*u01'^2 - u02*u01''*u00' \
    - u02'*u01*u00'' - u02''*u01^2 - u01'*u02''*u00 + 2*u02'*u01*u01' \
    + u02''*u01*u00' + u01''*u02'*u00";

#[test]
fn golden_round_trip() {
    let r = q(&["u00", "u01", "u02"]);
    let f = p(&r, LINEAR_PAIR);
    assert_eq!(f.nterms(), 10);
    let text = f.to_text();
    assert_eq!(p(&r, &text), f);
    assert_eq!(p(&r, &text).to_text(), text);
    let back = DiffPoly::from_json(&f.to_json()).unwrap();
    assert_eq!(back.to_text(), text);
}

#[test]
fn qt_coefficients_round_trip() {
    let r = qt(&["y1"]);
    let f = p(&r, "(3*t^2 + 3)/(2*t - 2)*y1' - 1/(t)*y1 + t");
    let text = f.to_text();
    assert_eq!(p(&r, &text), f);
}

#[test]
fn latex_output() {
    let r = q(&["u00", "u01"]);
    let f = p(&r, "u01^2*u00'^2 - 3/2*u00");
    let tex = f.format(FormatStyle::Latex);
    assert!(tex.contains("(u_{00}')^{2}"));
    assert!(tex.contains("\\frac{3}{2}"));
}

#[test]
fn normalization_fixes_sign_and_content() {
    let r = q(&["y1"]);
    let f = p(&r, "-6*y1' + 4/3*y1");
    let n = f.normalize_unit();
    assert!(!n.leading_sign_negative());
    assert!(n.equal_up_to_unit(&f));
    assert_eq!(n, n.normalize_unit());
}

#[test]
fn binomials() {
    assert_eq!(binomial(5, 2), BigInt::from(10));
    assert_eq!(binomial(3, 4), BigInt::zero());
}

fn arb_poly(r: Ring) -> impl Strategy<Value = DiffPoly> {
    let term = (
        -5i64..=5,
        prop::collection::vec((0u32..2, 0u32..3, 1u32..3), 0..3),
    );
    prop::collection::vec(term, 0..5).prop_map(move |ts| {
        DiffPoly::from_terms(
            &r,
            ts.into_iter().map(|(c, f)| {
                let m = Monomial::from_factors(
                    f.into_iter()
                        .map(|(v, o, e)| (DerVar::new(v as usize, o), e))
                        .collect(),
                );
                (m, Coeff::from_int(c))
            }),
        )
    })
}

fn arb_qt_poly(r: Ring) -> impl Strategy<Value = DiffPoly> {
    (arb_poly(r.clone()), -3i64..=3, 1i64..=3).prop_map(move |(p, a, b)| {
        let c = Coeff::t()
            .add(&Coeff::from_int(a))
            .div(&Coeff::t().mul(&Coeff::t()).add(&Coeff::from_int(b)))
            .unwrap();
        &p.scale(&c) + &DiffPoly::dervar(&r, DerVar::new(0, 0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn leibniz_rule(a in arb_poly(q(&["y1", "y2"])), b in arb_poly(q(&["y1", "y2"]))) {
        let lhs = (&a * &b).derivative();
        let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule_qt(a in arb_qt_poly(qt(&["y1", "y2"])), b in arb_qt_poly(qt(&["y1", "y2"]))) {
        let lhs = (&a * &b).derivative();
        let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_is_linear(a in arb_poly(q(&["y1", "y2"])), b in arb_poly(q(&["y1", "y2"])), c in -9i64..9) {
        let lhs = (&a + &b.scale_int(c)).derivative();
        let rhs = &a.derivative() + &b.derivative().scale_int(c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_identity(a in arb_poly(q(&["y1", "y2"]))) {
        let z = DiffPoly::zero(a.ring());
        prop_assert_eq!(&a + &z, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn parse_format_round_trip(a in arb_qt_poly(qt(&["y1", "y2"]))) {
        let text = a.to_text();
        let back = DiffPoly::parse(a.ring(), &text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back, a);
    }
}
