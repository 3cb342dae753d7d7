use super::*;
use crate::diffring::RingContext;
use std::collections::HashMap;
use std::time::Instant;

const F1: &str = "u01^2*u00'^2 - 2*u01*u01'*u00*u00' + u01'^2*u00^2 + 4*u01^3*u00";
const LINEAR_PAIR: &str = "u02*u01'*u00'' + u01''*u01*u02 - 2*u02*u01'^2 - u02*u01''*u00' - u02'*u01*u00'' - u02''*u01^2 - u01'*u02''*u00 + 2*u02'*u01*u01' + u02''*u01*u00' + u01''*u02'*u00";

fn p(r: &Ring, s: &str) -> DiffPoly {
    DiffPoly::parse(r, s).unwrap()
}

fn golden(c: &ChowForm, s: &str) -> DiffPoly {
    p(c.poly.ring(), s).normalize_unit()
}

#[test]
fn shape_monomials() {
    let s = GenericShape::new(1, 2).unwrap();
    let r = RingContext::main_q(&["y"]);
    let names: Vec<String> = s
        .monomials(1)
        .into_iter()
        .map(|m| DiffPoly::term(&r, m, crate::field::Coeff::one()).to_text())
        .collect();
    assert_eq!(names, ["y", "y'", "y^2", "y*y'", "y'^2"]);
    assert_eq!(GenericShape::LINEAR.ncoeffs(3), 4);
    assert_eq!(coeff_name(1, 12), "u1_12");
}

#[test]
fn hypersurface_f1() {
    let r = RingContext::main_q(&["y1"]);
    let c = chow_hypersurface(&p(&r, "y1'^2 - 4*y1")).unwrap();
    assert_eq!(c.poly, golden(&c, F1));
    assert_eq!((c.d, c.h, c.g), (0, 1, 2));
    assert_eq!(c.block_degrees, vec![Some(4)]);
}

#[test]
fn hypersurface_delta_degrees() {
    let r = RingContext::main_q(&["y"]);
    let c = chow_hypersurface(&p(&r, "2*y'^2 - y*y''")).unwrap();
    assert_eq!(
        c.poly,
        golden(
            &c,
            "u00*u01*u00'' - u00^2*u01'' - 2*u00'^2*u01 + 2*u00*u00'*u01'"
        )
    );
    assert_eq!(c.block_degrees, vec![Some(3)]);
    let c = chow_hypersurface(&p(&r, "y'^2 - y*y''")).unwrap();
    assert_eq!(
        c.poly,
        golden(
            &c,
            "u00*u01^2*u00'' - u00^2*u01*u01'' - u00'^2*u01^2 + u00^2*u01'^2"
        )
    );
    assert_eq!(c.block_degrees, vec![Some(4)]);
}

#[test]
fn pipeline_f1() {
    let r = RingContext::main_q(&["y1"]);
    let a = charset(&[p(&r, "y1'^2 - 4*y1")], &Ranking::orderly(&r)).unwrap();
    let c = chow_form(&a, &ChowOptions::default()).unwrap();
    assert_eq!(c.poly, golden(&c, F1));
    assert!(c.warnings.is_empty());
}

#[test]
fn pipeline_linear_pair() {
    let t = Instant::now();
    let r = RingContext::main_q(&["y1", "y2"]);
    let a = charset(&[p(&r, "y1'+1"), p(&r, "y2'")], &Ranking::orderly(&r)).unwrap();
    let c = chow_form(&a, &ChowOptions::default()).unwrap();
    assert_eq!(c.poly, golden(&c, LINEAR_PAIR));
    assert_eq!(c.poly.nterms(), 10);
    assert_eq!((c.d, c.h, c.g), (0, 2, 1));
    assert!(t.elapsed().as_secs() < 30);
}

#[test]
fn hypersurface_matches_pipeline_codim_one() {
    let r = RingContext::main_q(&["y1", "y2"]);
    let f = p(&r, "y1'^2 - 4*y1");
    let a = charset(std::slice::from_ref(&f), &Ranking::orderly(&r)).unwrap();
    let c1 = chow_form(&a, &ChowOptions::default()).unwrap();
    let c2 = chow_hypersurface(&f).unwrap();
    assert_eq!(c1.poly, c2.poly);
    assert_eq!((c1.d, c1.h), (1, 1));
}

#[test]
fn generalized_linear_is_chow_form() {
    let r = RingContext::main_q(&["y1"]);
    let a = charset(&[p(&r, "y1'^2 - 4*y1")], &Ranking::orderly(&r)).unwrap();
    let c = generalized_chow_form(&a, &[GenericShape::LINEAR], &ChowOptions::default()).unwrap();
    assert_eq!(c.poly, golden(&c, F1));
}

#[test]
fn linear_resultant() {
    let c = differential_resultant(1, &[GenericShape::LINEAR; 2], &ChowOptions::default()).unwrap();
    assert_eq!(c.poly, golden(&c, "u00*u11 - u01*u10"));
}

#[test]
fn rejects_wrong_block_count() {
    let r = RingContext::main_q(&["y1"]);
    let a = charset(&[p(&r, "y1'^2 - 4*y1")], &Ranking::orderly(&r)).unwrap();
    assert!(
        generalized_chow_form(&a, &[GenericShape::LINEAR; 2], &ChowOptions::default()).is_err()
    );
    assert!(chow_form(
        &DiffChain::empty(&Ranking::orderly(&r)),
        &ChowOptions::default()
    )
    .is_err());
}

#[test]
fn evaluation_detects_common_root() {
    let c = differential_resultant(1, &[GenericShape::LINEAR; 2], &ChowOptions::default()).unwrap();
    let mut a = HashMap::new();
    for (k, v) in [("u00", -3), ("u01", 3), ("u10", -5), ("u11", 5)] {
        a.insert(k.to_string(), crate::field::Coeff::from_int(v));
    }
    assert!(dres_evaluate(&c.poly, &a).unwrap().value.is_zero());
    a.insert("u10".into(), crate::field::Coeff::from_int(2));
    assert!(!dres_evaluate(&c.poly, &a).unwrap().value.is_zero());
    a.remove("u11");
    assert!(matches!(
        dres_evaluate(&c.poly, &a),
        Err(Error::IncompleteAssignment(_))
    ));
}

#[test]
fn matrix_shape() {
    let m = resultant_matrix_1var().unwrap();
    assert_eq!(m.matrix.len(), 14);
    assert!(m.matrix.iter().all(|r| r.len() == 14));
    assert!(!m.determinant.is_zero());
}
