//! Acceptance harness: one PASS/FAIL line per criterion.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use delta_chow::algelim::{
    divide_exact, groebner_eliminate, squarefree_part, AlgSystem, ElimOptions, GroebnerBasis,
    Limits, TermOrder,
};
use delta_chow::chow::{
    chow_form, chow_hypersurface, differential_resultant, resultant_matrix_1var, ChowOptions,
};
use delta_chow::quasivariety::{
    build_template, cv1_generate, support_ring, vanishes_off, ChowIndex,
};
use delta_chow::verify::{
    check_delta_homogeneous, defining_identity, generic_intersection, generic_intersection_check,
    numeric_fiber_check, verify_against_ideal, verify_chow_invariants, FiberOptions,
};
use delta_chow::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const F1: &str = "u01^2*u00'^2 - 2*u01*u01'*u00*u00' + u01'^2*u00^2 + 4*u01^3*u00";
const SECOND_ORDER_A: &str = "u00*u01*u00'' - u00^2*u01'' - 2*u00'^2*u01 + 2*u00*u00'*u01'";
const SECOND_ORDER_B: &str = "u00*u01^2*u00'' - u00^2*u01*u01'' - u00'^2*u01^2 + u00^2*u01'^2";
const LINEAR_PAIR: &str =
    "u02*u01'*u00'' + u01''*u01*u02 - 2*u02*u01'^2 - u02*u01''*u00' - u02'*u01*u00'' \
    - u02''*u01^2 - u01'*u02''*u00 + 2*u02'*u01*u01' + u02''*u01*u00' + u01''*u02'*u00";

const GOLDEN_LIMIT: Duration = Duration::from_secs(5);
const DRES_LIMIT: Duration = Duration::from_secs(120);
const INTERSECTION_LIMIT: Duration = Duration::from_secs(60);
const QUASI_LIMIT: Duration = Duration::from_secs(60);
const FIBER_LIMIT: Duration = Duration::from_secs(5);
const FIBER_TOL: f64 = 1e-9;
const FIBER_POWER: f64 = 1e-4;
const TRIALS: u32 = 100;

type Outcome = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(r: &Ring, s: &str) -> DiffPoly {
    DiffPoly::parse(r, s).unwrap()
}

fn chain(names: &[&str], els: &[&str]) -> DiffChain {
    let r = RingContext::main_q(names);
    let ps: Vec<DiffPoly> = els.iter().map(|s| p(&r, s)).collect();
    charset(&ps, &Ranking::orderly(&r)).unwrap()
}

fn timed<T>(
    limit: Duration,
    what: &str,
    f: impl FnOnce() -> T,
) -> std::result::Result<(T, Duration), String> {
    let t = Instant::now();
    let v = f();
    let e = t.elapsed();
    ensure(e < limit, || {
        format!("{what} took {e:.2?}, limit {limit:?}")
    })?;
    Ok((v, e))
}

/// Golden inputs: name, expected form, chain, and whether to use the
/// hypersurface route.
fn golden_inputs() -> Vec<(&'static str, &'static str, DiffChain, bool)> {
    vec![
        ("F1", F1, chain(&["y1"], &["y1'^2 - 4*y1"]), false),
        (
            "2y'^2-yy''",
            SECOND_ORDER_A,
            chain(&["y"], &["2*y'^2 - y*y''"]),
            true,
        ),
        (
            "y'^2-yy''",
            SECOND_ORDER_B,
            chain(&["y"], &["y'^2 - y*y''"]),
            true,
        ),
        (
            "[y1'+1, y2']",
            LINEAR_PAIR,
            chain(&["y1", "y2"], &["y1'+1", "y2'"]),
            false,
        ),
    ]
}

fn compute(a: &DiffChain, hypersurface: bool) -> ChowForm {
    if hypersurface {
        chow_hypersurface(&a.elements()[0]).unwrap()
    } else {
        chow_form(a, &ChowOptions::default()).unwrap()
    }
}

fn golden_forms() -> Vec<(&'static str, ChowForm, DiffChain)> {
    golden_inputs()
        .into_iter()
        .map(|(name, _, a, hyp)| (name, compute(&a, hyp), a))
        .collect()
}

fn criterion_1() -> Outcome {
    let mut out = Vec::new();
    for (name, golden, a, hyp) in golden_inputs() {
        let (c, e) = timed(GOLDEN_LIMIT, name, || compute(&a, hyp))?;
        let g = p(c.poly.ring(), golden).normalize_unit();
        ensure(c.poly.to_text() == g.to_text(), || {
            format!("{name}: got {}", c.poly)
        })?;
        out.push(format!("{name} {} terms {e:.2?}", c.poly.nterms()));
    }
    Ok(out.join(", "))
}

fn criterion_2() -> Outcome {
    let forms = golden_forms();
    let f1 = &forms[0].1;
    ensure((f1.d, f1.h, f1.g) == (0, 1, 2), || {
        format!("F1 (d,h,g) = {:?}", (f1.d, f1.h, f1.g))
    })?;
    let deg = |c: &ChowForm| check_delta_homogeneous(&c.poly, &c.block_vars(0)).unwrap();
    let (a, b) = (deg(&forms[1].1), deg(&forms[2].1));
    ensure((a, b) == (Some(3), Some(4)), || {
        format!("δ-degrees {a:?} vs {b:?}")
    })?;
    Ok("F1 (d,h,g)=(0,1,2); δ-degrees 3 vs 4".into())
}

fn dres() -> ChowForm {
    let shapes = [
        GenericShape::new(0, 2).unwrap(),
        GenericShape::new(1, 2).unwrap(),
    ];
    differential_resultant(1, &shapes, &ChowOptions::default()).unwrap()
}

fn criterion_3(r: &ChowForm, e: Duration) -> Outcome {
    ensure(e < DRES_LIMIT, || format!("resultant took {e:.2?}"))?;
    ensure(r.poly.nterms() == 206, || {
        format!("{} terms", r.poly.nterms())
    })?;
    let h0 = check_delta_homogeneous(&r.poly, &r.block_vars(0)).map_err(|e| e.to_string())?;
    let h1 = check_delta_homogeneous(&r.poly, &r.block_vars(1)).map_err(|e| e.to_string())?;
    ensure((h0, h1) == (Some(8), Some(2)), || {
        format!("δ-degrees {h0:?}, {h1:?}")
    })?;
    ensure(r.block_orders == [1, 0], || {
        format!("orders {:?}", r.block_orders)
    })?;
    let m = resultant_matrix_1var().map_err(|e| e.to_string())?;
    ensure(
        m.matrix.len() == 14 && m.matrix.iter().all(|row| row.len() == 14),
        || "matrix is not 14×14".into(),
    )?;
    let q = m
        .quotient(&r.poly)
        .map_err(|e| format!("determinant not divisible: {e}"))?;
    let back = &q * &r.poly.embed(m.determinant.ring()).unwrap();
    ensure(back == m.determinant, || {
        "quotient times resultant differs from determinant".into()
    })?;
    Ok(format!(
        "206 terms, degrees 8/2, orders 1/0, det = ({} terms)·R, {e:.2?}",
        q.nterms()
    ))
}

fn criterion_4(r: &ChowForm) -> Outcome {
    let mut n = 0;
    for (name, c, a) in golden_forms() {
        let rep = verify_against_ideal(&c, &a);
        ensure(rep.passed(), || format!("{name}: {:?}", rep.failures()))?;
        n += rep.checks.len();
    }
    let rep = verify_chow_invariants(r);
    ensure(rep.passed(), || format!("resultant: {:?}", rep.failures()))?;
    n += rep.checks.len();
    let empty = DiffChain::empty(&Ranking::orderly(&RingContext::main_q(&["y1"])));
    let rem = defining_identity(r, &empty).map_err(|e| e.to_string())?;
    ensure(rem.is_zero(), || {
        "resultant defining identity is nonzero".into()
    })?;
    Ok(format!("{} checks over 5 forms", n + 1))
}

fn criterion_5() -> Outcome {
    let mut cases = 0;
    for els in [["y1'^2 - 4*y1"], ["2*y1'^2 - y1*y1''"], ["y1'+1"]] {
        let a = chain(&["y1", "y2"], &els);
        for s in 0..=2 {
            for linear in [true, false] {
                let (chk, _) = timed(INTERSECTION_LIMIT, els[0], || {
                    generic_intersection_check(&a, s, linear)
                })?;
                let chk = chk.map_err(|e| e.to_string())?;
                ensure(chk.passed(), || {
                    format!(
                        "{} with s={s}: {:?} vs {:?}",
                        els[0], chk.observed, chk.expected
                    )
                })?;
                cases += 1;
            }
        }
    }
    for n in 1..=2usize {
        let names: Vec<&str> = ["y1", "y2"][..n].to_vec();
        let zero = DiffChain::empty(&Ranking::orderly(&RingContext::main_q(&names)));
        for r in 1..=n {
            for mask in 0..(1u32 << r) {
                let orders: Vec<u32> = (0..r).map(|i| (mask >> i) & 1).collect();
                for deg in [1, 2] {
                    let shapes: Vec<GenericShape> = orders
                        .iter()
                        .map(|&s| GenericShape::new(s, deg).unwrap())
                        .collect();
                    let (obs, _) = timed(INTERSECTION_LIMIT, "zero ideal", || {
                        generic_intersection(&zero, &shapes)
                    })?;
                    let obs = obs.map_err(|e| e.to_string())?;
                    let want = (n - r, orders.iter().sum::<u32>());
                    ensure(obs.dim_order() == Some(want), || {
                        format!("n={n} orders {orders:?} degree {deg}: {obs:?}, expected {want:?}")
                    })?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases"))
}

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

fn criterion_6() -> Outcome {
    let (res, e) = timed(
        QUASI_LIMIT,
        "quasi-variety",
        || -> std::result::Result<String, String> {
            let idx: ChowIndex = "2,1,1,1,2".parse().map_err(|e: Error| e.to_string())?;
            let sr = support_ring(idx).map_err(|e| e.to_string())?;
            let sup: Vec<DiffPoly> = QV_SUPPORT.iter().map(|m| p(&sr, m)).collect();
            let t = build_template(idx, &sup).map_err(|e| e.to_string())?;
            let q = cv1_generate(&t).map_err(|e| e.to_string())?;
            let r = &q.template.ring;
            let mut param = HashMap::new();
            let mut listed = Vec::new();
            for (a, v) in QV_LISTED {
                let val = p(r, v);
                listed.push(&DiffPoly::var(r, a, 0).unwrap() - &val);
                param.insert(r.var(a).unwrap(), val);
            }
            for rel in &q.relations {
                let z = rel.substitute_diff(&param).map_err(|e| e.to_string())?;
                ensure(z.is_zero(), || {
                    format!("generated relation {rel} is not in the listed ideal")
                })?;
            }
            let ok =
                vanishes_off(&q.relations, &p(r, "a1"), &listed, 1).map_err(|e| e.to_string())?;
            ensure(ok.iter().all(|&b| b), || {
                format!("listed relations off V(a1): {ok:?}")
            })?;
            let yr = RingContext::main_q(&["y1", "y2"]);
            for s in ["y1' + y2", "3*y1' - 2*y2"] {
                let c = chow_hypersurface(&p(&yr, s)).map_err(|e| e.to_string())?;
                ensure(c.g == 1, || format!("{s}: g = {}", c.g))?;
                let pt = q.template.coordinates(&c.poly).map_err(|e| e.to_string())?;
                ensure(q.contains_point(&pt).map_err(|e| e.to_string())?, || {
                    format!("{s} is not in the quasi-variety")
                })?;
            }
            Ok(format!("{} relations", q.relations.len()))
        },
    )?;
    res.map(|s| format!("{s}, mutual membership off V(a1), {e:.2?}"))
}

fn criterion_7() -> Outcome {
    let forms = golden_forms();
    let mut out = Vec::new();
    for (name, seed, (c, a)) in [
        ("F1", 0, (&forms[0].1, &forms[0].2)),
        ("[y1'+1, y2']", 3, (&forms[3].1, &forms[3].2)),
    ] {
        let (res, e) = timed(FIBER_LIMIT, name, || {
            let good = FiberOptions {
                seed,
                ..Default::default()
            };
            let bad = FiberOptions {
                seed,
                perturbation: 1e-3,
                ..Default::default()
            };
            (
                numeric_fiber_check(c, a, &good),
                numeric_fiber_check(c, a, &bad),
            )
        })?;
        let good = res.0.map_err(|e| e.to_string())?;
        let bad = res.1.map_err(|e| e.to_string())?;
        ensure(good.samples >= 5, || {
            format!("{name}: {} samples", good.samples)
        })?;
        ensure(good.max_residual < FIBER_TOL, || {
            format!("{name}: residual {:e}", good.max_residual)
        })?;
        ensure(bad.max_residual > FIBER_POWER, || {
            format!("{name}: perturbed residual {:e}", bad.max_residual)
        })?;
        out.push(format!(
            "{name} {:.1e}/{:.1e} {e:.2?}",
            good.max_residual, bad.max_residual
        ));
    }
    Ok(out.join(", "))
}

// Kernel properties on the public API.

fn runner(seed: u8) -> TestRunner {
    let cfg = Config {
        cases: TRIALS,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(
        cfg,
        proptest::test_runner::TestRng::from_seed(
            proptest::test_runner::RngAlgorithm::ChaCha,
            &[seed; 32],
        ),
    )
}

fn arb_terms() -> impl Strategy<Value = Vec<(i64, Vec<(usize, u32, u32)>)>> {
    prop::collection::vec(
        (
            -5i64..=5,
            prop::collection::vec((0usize..2, 0u32..3, 1u32..3), 0..3),
        ),
        0..5,
    )
}

fn build_poly(r: &Ring, ts: &[(i64, Vec<(usize, u32, u32)>)], c: &Coeff) -> DiffPoly {
    DiffPoly::from_terms(
        r,
        ts.iter().map(|(k, f)| {
            let m =
                Monomial::from_factors(f.iter().map(|&(v, o, e)| (DerVar::new(v, o), e)).collect());
            (m, Coeff::from_int(*k).mul(c))
        }),
    )
}

fn kernel_leibniz() -> std::result::Result<(), String> {
    let rq = RingContext::main_q(&["y1", "y2"]);
    let rt = RingContext::with_params(BaseField::RationalFunctionsQt, &["y1", "y2"], &[]).unwrap();
    let ct = Coeff::t()
        .add(&Coeff::one())
        .div(&Coeff::t().mul(&Coeff::t()).add(&Coeff::from_int(2)))
        .unwrap();
    runner(1)
        .run(
            &(arb_terms(), arb_terms(), any::<bool>()),
            |(a, b, over_qt)| {
                let (r, c) = if over_qt {
                    (&rt, ct.clone())
                } else {
                    (&rq, Coeff::one())
                };
                let (f, g) = (build_poly(r, &a, &c), build_poly(r, &b, &Coeff::one()));
                let lhs = (&f * &g).derivative();
                let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
                prop_assert_eq!(lhs, rhs);
                Ok(())
            },
        )
        .map_err(|e| format!("Leibniz: {e}"))
}

fn kernel_ranking() -> std::result::Result<(), String> {
    let r = RingContext::main_q(&["y1", "y2", "y3"]);
    let rankings = [
        Ranking::orderly(&r),
        Ranking::elimination(&r, &[2, 0, 1]).unwrap(),
        Ranking::block(&r, &[vec![0], vec![1, 2]]).unwrap(),
    ];
    let dv = || (0usize..3, 0u32..5).prop_map(|(v, o)| DerVar::new(v, o));
    runner(2)
        .run(
            &(0usize..3, dv(), dv(), dv(), 1u32..3),
            |(k, a, b, c, s)| {
                let rk = &rankings[k];
                let ab = rk.compare_dervar(a, b);
                prop_assert_eq!(ab, rk.compare_dervar(b, a).reverse());
                prop_assert_eq!(ab == Ordering::Equal, a == b);
                if ab == Ordering::Less && rk.compare_dervar(b, c) == Ordering::Less {
                    prop_assert_eq!(rk.compare_dervar(a, c), Ordering::Less);
                }
                prop_assert_eq!(rk.compare_dervar(a, a.diff(s)), Ordering::Less);
                prop_assert_eq!(rk.compare_dervar(a.diff(s), b.diff(s)), ab);
                Ok(())
            },
        )
        .map_err(|e| format!("ranking: {e}"))
}

const CHAINS: [&str; 4] = [
    "y1'^2 - 4*y1",
    "y1' - y1^2",
    "y1*y1'' - 2*y1'^2",
    "y1'^3 + y1*y1' - 1",
];

fn kernel_reduction() -> std::result::Result<(), String> {
    let r = RingContext::main_q(&["y1"]);
    let chains: Vec<DiffChain> = CHAINS
        .iter()
        .map(|s| DiffChain::new(vec![p(&r, s)], &Ranking::orderly(&r)).unwrap())
        .collect();
    let strat = prop::collection::vec((-5i64..=5, [0u32..3, 0u32..3, 0u32..2, 0u32..2]), 1..6);
    runner(3)
        .run(&(0usize..4, strat), |(w, ts)| {
            let a = &chains[w];
            let mut f = DiffPoly::zero(&r);
            for (c, e) in &ts {
                let mut m = DiffPoly::from_int(&r, *c);
                for (k, &x) in e.iter().enumerate() {
                    m = &m * &DiffPoly::dervar(&r, DerVar::new(0, k as u32)).pow(x);
                }
                f = &f + &m;
            }
            let cert = a.ritt_reduce(&f).unwrap();
            prop_assert!(a.is_reduced(&cert.remainder));
            let lhs = &(&cert.multiplier(a) * &f) - &cert.remainder;
            prop_assert!(a.ritt_reduce(&lhs).unwrap().remainder.is_zero());
            Ok(())
        })
        .map_err(|e| format!("reduction certificate: {e}"))
}

fn monomial_poly(r: &Ring, c: i64, e: &[u32]) -> DiffPoly {
    let mut m = DiffPoly::from_int(r, c);
    for (i, &x) in e.iter().enumerate() {
        m = &m * &DiffPoly::dervar(r, DerVar::new(i, 0)).pow(x);
    }
    m
}

fn build_free(r: &Ring, ts: &[(i64, Vec<u32>)]) -> DiffPoly {
    ts.iter()
        .filter(|(_, e)| e.iter().sum::<u32>() <= 3)
        .fold(DiffPoly::zero(r), |f, (c, e)| &f + &monomial_poly(r, *c, e))
}

fn build_monic(r: &Ring, lead: u32, ts: &[(i64, Vec<u32>)]) -> DiffPoly {
    ts.iter()
        .filter(|(_, e)| e[0] < lead && e.iter().sum::<u32>() <= 3)
        .fold(
            DiffPoly::dervar(r, DerVar::new(0, 0)).pow(lead),
            |f, (c, e)| &f + &monomial_poly(r, *c, e),
        )
}

fn arb_free(nv: usize) -> impl Strategy<Value = Vec<(i64, Vec<u32>)>> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0u32..=3, nv)), 1..5)
}

fn kernel_buchberger() -> std::result::Result<(), String> {
    let r = RingContext::main_q(&["x", "y", "z"]);
    let vars: Vec<DerVar> = (0..3).map(|i| DerVar::new(i, 0)).collect();
    runner(4)
        .run(
            &(prop::collection::vec(arb_free(3), 2..4), any::<bool>()),
            |(sets, lex)| {
                let polys: Vec<DiffPoly> = sets
                    .iter()
                    .map(|t| build_free(&r, t))
                    .filter(|f| !f.is_zero())
                    .collect();
                if polys.is_empty() {
                    return Ok(());
                }
                let order = if lex {
                    TermOrder::Lex
                } else {
                    TermOrder::GrevLex
                };
                let gb = GroebnerBasis::compute(&polys, &vars, order, Limits::default()).unwrap();
                prop_assert!(gb.satisfies_buchberger().unwrap());
                for f in &polys {
                    prop_assert!(gb.contains(f).unwrap());
                }
                Ok(())
            },
        )
        .map_err(|e| format!("Buchberger closure: {e}"))
}

/// Determinant by cofactor expansion along the first row.
fn laplace(m: &[Vec<DiffPoly>], ring: &Ring) -> DiffPoly {
    if m.is_empty() {
        return DiffPoly::one(ring);
    }
    let mut acc = DiffPoly::zero(ring);
    for j in 0..m.len() {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<DiffPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let t = &m[0][j] * &laplace(&minor, ring);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

fn sylvester(f: &DiffPoly, g: &DiffPoly, x: DerVar) -> DiffPoly {
    let (m, n) = (f.degree(x) as usize, g.degree(x) as usize);
    let zero = DiffPoly::zero(f.ring());
    let mut rows = Vec::new();
    for (count, shift_deg, p) in [(n, m, f), (m, n, g)] {
        for i in 0..count {
            let mut row = vec![zero.clone(); m + n];
            for k in 0..=shift_deg {
                row[i + shift_deg - k] = p.coeff_in(x, k as u32);
            }
            rows.push(row);
        }
    }
    laplace(&rows, f.ring())
}

fn kernel_resultant_oracle() -> std::result::Result<(), String> {
    let monic = |nv: usize| (1u32..=3, arb_free(nv));
    let r2 = RingContext::main_q(&["x", "y"]);
    runner(5)
        .run(&(monic(2), monic(2)), |((la, ta), (lb, tb))| {
            let (f, g) = (build_monic(&r2, la, &ta), build_monic(&r2, lb, &tb));
            let (x, y) = (DerVar::new(0, 0), DerVar::new(1, 0));
            let res = sylvester(&f, &g, x);
            let s = AlgSystem::new(vec![f, g], vec![x], vec![y]).unwrap();
            let e = groebner_eliminate(&s, &[], &ElimOptions::default()).unwrap();
            if res.is_zero() {
                prop_assert!(e.generators.is_empty());
            } else if res.is_constant() {
                prop_assert!(e.inconsistent);
            } else {
                prop_assert_eq!(e.generators.len(), 1);
                let h = &e.generators[0];
                prop_assert!(divide_exact(&res, h).is_ok());
                let k = res.degree(y);
                prop_assert!(divide_exact(&h.pow(k), &squarefree_part(&res, y).unwrap()).is_ok());
            }
            Ok(())
        })
        .map_err(|e| format!("bivariate resultant oracle: {e}"))?;
    let r3 = RingContext::main_q(&["x", "y", "u"]);
    let vars: Vec<DerVar> = (0..3).map(|i| DerVar::new(i, 0)).collect();
    runner(6)
        .run(&(monic(3), monic(3)), |((la, ta), (lb, tb))| {
            let (f, g) = (build_monic(&r3, la, &ta), build_monic(&r3, lb, &tb));
            let res = sylvester(&f, &g, vars[0]);
            let s = AlgSystem::new(
                vec![f.clone(), g.clone()],
                vec![vars[0]],
                vars[1..].to_vec(),
            )
            .unwrap();
            let e = groebner_eliminate(&s, &[], &ElimOptions::default()).unwrap();
            if res.is_zero() {
                prop_assert!(e.generators.is_empty());
                return Ok(());
            }
            if e.inconsistent {
                prop_assert!(res.is_constant());
                return Ok(());
            }
            let elim = GroebnerBasis::compute(
                &e.generators,
                &vars[1..],
                TermOrder::Lex,
                Limits::default(),
            )
            .unwrap();
            prop_assert!(elim.contains(&res).unwrap());
            let full =
                GroebnerBasis::compute(&[f, g], &vars, TermOrder::GrevLex, Limits::default())
                    .unwrap();
            for h in &e.generators {
                prop_assert!(full.contains(h).unwrap());
            }
            Ok(())
        })
        .map_err(|e| format!("trivariate resultant oracle: {e}"))
}

fn criterion_8() -> Outcome {
    kernel_leibniz()?;
    kernel_ranking()?;
    kernel_reduction()?;
    kernel_buchberger()?;
    kernel_resultant_oracle()?;
    Ok(format!(
        "{TRIALS} trials each: Leibniz, ranking, reduction, Buchberger, resultant (2 and 3 vars)"
    ))
}

fn main() -> ExitCode {
    let t = Instant::now();
    let r = dres();
    let dres_time = t.elapsed();
    let results: Vec<(u32, &str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, "golden Chow forms", Box::new(criterion_1)),
        (2, "metadata", Box::new(criterion_2)),
        (
            3,
            "differential resultant",
            Box::new(|| criterion_3(&r, dres_time)),
        ),
        (4, "property suite", Box::new(|| criterion_4(&r))),
        (5, "generic intersection laws", Box::new(criterion_5)),
        (6, "quasi-variety", Box::new(criterion_6)),
        (7, "numeric fiber check", Box::new(criterion_7)),
        (8, "kernel properties", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (n, name, f) in results {
        let t = Instant::now();
        let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".into()));
        match out {
            Ok(s) => println!("criterion {n} {name}: PASS ({s}) [{:.2?}]", t.elapsed()),
            Err(s) => {
                failed += 1;
                println!("criterion {n} {name}: FAIL ({s}) [{:.2?}]", t.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
