use super::*;
use crate::chow::chow_hypersurface;

const QV_SUPPORT: [&str; 16] = [
    "u12^2*u01*u00'",
    "u11*u12*u02*u00'",
    "u01*u02*u12*u10'",
    "u02^2*u11*u10'",
    "u12^2*u00*u01'",
    "u10*u12*u02*u01'",
    "u00*u02*u12*u11'",
    "u02^2*u10*u11'",
    "u10*u01*u12*u02'",
    "u00*u02*u11*u12'",
    "u11*u12*u00*u02'",
    "u01*u02*u10*u12'",
    "u00*u11^2*u02",
    "u00*u01*u11*u12",
    "u01*u10*u02*u11",
    "u10*u01^2*u12",
];

/// A hand-simplified presentation of the same set, as
/// `(unknown, value)` pairs over the free unknowns `a1`, `a13`.
const QV_LISTED: [(&str, &str); 14] = [
    ("a2", "-a1"),
    ("a3", "-a1"),
    ("a4", "a1"),
    ("a5", "-a1"),
    ("a6", "a1"),
    ("a7", "a1"),
    ("a8", "-a1"),
    ("a9", "-a1"),
    ("a10", "-a1"),
    ("a11", "a1"),
    ("a12", "a1"),
    ("a14", "-a13"),
    ("a15", "-a13"),
    ("a16", "a13"),
];

fn index(s: &str) -> ChowIndex {
    s.parse().unwrap()
}

fn support(idx: ChowIndex, monos: &[&str]) -> Vec<DiffPoly> {
    let r = support_ring(idx).unwrap();
    monos
        .iter()
        .map(|m| DiffPoly::parse(&r, m).unwrap())
        .collect()
}

fn qv_template() -> ChowTemplate {
    let idx = index("2,1,1,1,2");
    build_template(idx, &support(idx, &QV_SUPPORT)).unwrap()
}

#[test]
fn parse_index() {
    let i = index("2,1,1,1,2");
    assert_eq!((i.n, i.d, i.h, i.g, i.m), (2, 1, 1, 1, 2));
    assert_eq!(i.to_string(), "2,1,1,1,2");
    assert!("2,1,1".parse::<ChowIndex>().is_err());
    assert!("1,1,1,1,1".parse::<ChowIndex>().is_err());
}

#[test]
fn template_of_sixteen_monomials() {
    let t = qv_template();
    assert_eq!(t.coeffs.len(), 16);
    assert_eq!(t.poly.nterms(), 16);
}

#[test]
fn single_monomial_template() {
    let idx = index("1,0,1,1,1");
    let t = build_template(idx, &support(idx, &["u00'"])).unwrap();
    assert_eq!(t.coeffs, vec!["a1".to_string()]);
}

#[test]
fn template_rejections() {
    let idx = index("1,0,1,1,2");
    let e = build_template(idx, &support(idx, &["u00'^2"])).unwrap_err();
    assert!(matches!(e, Error::InvalidInput(_)));
    let idx = index("1,0,1,1,1");
    assert!(build_template(idx, &support(idx, &["u00'*u01"])).is_err());
    assert!(build_template(idx, &support(idx, &["u01'"])).is_err());
    let idx = index("1,0,1,2,2");
    assert!(build_template(idx, &support(idx, &["u00'^2"])).is_err());
}

#[test]
fn linear_stages() {
    let q = cv1_generate(&qv_template()).unwrap();
    let r = &q.template.ring;
    let p = |s: &str| DiffPoly::parse(r, s).unwrap().normalize_unit();
    let homog = &q.relations[..q.homogeneity_count];
    for s in ["a5+a1", "a8+a4", "a9+a6", "a10+a7", "a11+a2", "a12+a3"] {
        assert!(homog.contains(&p(s)), "{s} missing from {homog:?}");
    }
    assert_eq!(q.homogeneity_count, 6);
    let hyper = &q.relations[q.homogeneity_count..q.homogeneity_count + q.hyperplane_count];
    assert!(hyper.contains(&p("a6-a1")), "{hyper:?}");
    assert_eq!(q.excluded, vec![p("a1"), p("a2")]);
}

#[test]
fn matches_listed_presentation() {
    let q = cv1_generate(&qv_template()).unwrap();
    let r = &q.template.ring;
    let a1 = DiffPoly::parse(r, "a1").unwrap();
    let mut param = HashMap::new();
    let mut listed = Vec::new();
    for (a, v) in QV_LISTED {
        let val = DiffPoly::parse(r, v).unwrap();
        listed.push(&DiffPoly::var(r, a, 0).unwrap() - &val);
        param.insert(r.var(a).unwrap(), val);
    }
    // generated relations vanish on the listed variety
    for rel in &q.relations {
        assert!(rel.substitute_diff(&param).unwrap().is_zero(), "{rel}");
    }
    // and the listed relations vanish on the generated set off V(a1)
    let ok = vanishes_off(&q.relations, &a1, &listed, 1).unwrap();
    assert!(ok.iter().all(|&b| b), "{ok:?}");
}

#[test]
fn genuine_chow_form_lies_in_the_quasi_variety() {
    let q = cv1_generate(&qv_template()).unwrap();
    let yr = RingContext::main_q(&["y1", "y2"]);
    for s in ["y1' + y2", "3*y1' - 2*y2", "y1'"] {
        let c = chow_hypersurface(&DiffPoly::parse(&yr, s).unwrap()).unwrap();
        let pt = q.template.coordinates(&c.poly).unwrap();
        assert!(q.contains_point(&pt).unwrap(), "{s}");
    }
    let zero = vec![Coeff::zero(); 16];
    assert!(q.relation_values(&zero).unwrap().iter().all(Coeff::is_zero));
    assert!(!q.contains_point(&zero).unwrap());
    let mut bad = vec![Coeff::one(); 16];
    bad[1] = Coeff::from_int(-1);
    assert!(!q.contains_point(&bad).unwrap());
}

#[test]
fn relations_are_delta_homogeneous() {
    let q = cv1_generate(&qv_template()).unwrap();
    let a = q.template.coeff_vars();
    for r in &q.relations {
        assert!(
            crate::verify::check_delta_homogeneous(r, &a)
                .unwrap()
                .is_some(),
            "{r}"
        );
    }
}
