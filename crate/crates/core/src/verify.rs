//! Independent checks of computed Chow forms: homogeneity, order and
//! symmetry laws, the defining identity, generic-point recovery, generic
//! intersections and a numeric check of the factorization over `u00^{(h)}`.

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algelim;
use crate::chow::{coeff_name, generic_polynomial, joint_ring, ChowForm, GenericShape};
use crate::diffring::{binomial, DerVar, DiffPoly, Monomial, Ring, VarKind};
use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::ranking::Ranking;
use crate::reduction::{charset, DiffChain, DimOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        })
    }
}

/// One named check with its outcome and, on failure, a witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    fn record(&mut self, name: &str, status: CheckStatus, detail: String, witness: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            status,
            detail,
            witness,
        });
    }

    fn pass(&mut self, name: &str, detail: impl Into<String>) {
        self.record(name, CheckStatus::Pass, detail.into(), None);
    }

    fn fail(&mut self, name: &str, detail: impl Into<String>, witness: Option<String>) {
        self.record(name, CheckStatus::Fail, detail.into(), witness);
    }

    fn skip(&mut self, name: &str, reason: impl Into<String>) {
        self.record(name, CheckStatus::Skipped, reason.into(), None);
    }

    /// No check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "status": c.status.to_string(),
                "detail": c.detail,
                "witness": c.witness,
            })).collect::<Vec<_>>(),
        })
    }
}

fn fresh_name(ring: &Ring, stem: &str) -> String {
    let mut name = stem.to_string();
    let mut k = 0;
    while ring.var(&name).is_some() {
        k += 1;
        name = format!("{stem}_{k}");
    }
    name
}

/// Degree `m` with `F(λv) = λ^m F(v)` for the variables `block`, or `None`
/// when `F` is not δ-homogeneous in them.
///
/// Both the λ-scaling and the Euler identities are evaluated; an error is
/// returned if they disagree.
pub fn check_delta_homogeneous(f: &DiffPoly, block: &[usize]) -> Result<Option<u32>> {
    if block.is_empty() {
        return Err(Error::InvalidInput("empty variable block".into()));
    }
    let a = homogeneity_by_scaling(f, block)?;
    let b = homogeneity_by_euler(f, block);
    if a != b {
        return Err(Error::Internal(format!(
            "λ-scaling gives {a:?}, Euler identities give {b:?}"
        )));
    }
    Ok(a)
}

/// `F(λv) = λ^m F(v)` with a fresh differential indeterminate `λ`.
pub fn homogeneity_by_scaling(f: &DiffPoly, block: &[usize]) -> Result<Option<u32>> {
    let ring = f.ring();
    let lam_name = fresh_name(ring, "lambda");
    let ext = ring.extend(vec![(lam_name.clone(), VarKind::Parameter)])?;
    let lam = DiffPoly::var(&ext, &lam_name, 0)?;
    let fe = f.embed(&ext)?;
    let mut assign = HashMap::new();
    for &v in block {
        let x = DiffPoly::var(&ext, ring.name(v), 0)?;
        assign.insert(ext.var_or_err(ring.name(v))?, &lam * &x);
    }
    let scaled = fe.substitute_diff(&assign)?;
    let l0 = DerVar::new(ext.var_or_err(&lam_name)?, 0);
    let m = scaled.degree(l0);
    Ok((scaled == &lam.pow(m) * &fe).then_some(m))
}

/// `Σ_j Σ_k C(k+r, r)·v_j^{(k)}·∂F/∂v_j^{(k+r)}` for the block variables.
pub fn euler_operator(f: &DiffPoly, block: &[usize], r: u32) -> DiffPoly {
    let mut out = DiffPoly::zero(f.ring());
    for d in f.dervars() {
        if !block.contains(&(d.var as usize)) || d.order < r {
            continue;
        }
        let k = d.order - r;
        let c = Coeff::from_bigint(binomial(k + r, r));
        let v = DiffPoly::dervar(f.ring(), DerVar::new(d.var as usize, k));
        out = &out + &(&v * &f.partial(d)).scale(&c);
    }
    out
}

/// `m` when `E_0 F = m F` and `E_r F = 0` for `r = 1..ord(F, block)`.
pub fn homogeneity_by_euler(f: &DiffPoly, block: &[usize]) -> Option<u32> {
    let e0 = euler_operator(f, block, 0);
    let m = f
        .terms()
        .keys()
        .next()
        .map(|mo| {
            mo.factors()
                .iter()
                .filter(|(d, _)| block.contains(&(d.var as usize)))
                .map(|(_, e)| e)
                .sum::<u32>()
        })
        .unwrap_or(0);
    if e0 != f.scale_int(m as i64) {
        return None;
    }
    let ord = f.order_wrt_set(block).finite().unwrap_or(0);
    (1..=ord)
        .all(|r| euler_operator(f, block, r).is_zero())
        .then_some(m)
}

fn swap_blocks(c: &ChowForm, a: usize, b: usize) -> Result<DiffPoly> {
    let ring = c.poly.ring();
    let (va, vb) = (c.block_vars(a), c.block_vars(b));
    let mut assign = HashMap::new();
    for (&x, &y) in va.iter().zip(&vb) {
        assign.insert(x, DiffPoly::dervar(ring, DerVar::new(y, 0)));
        assign.insert(y, DiffPoly::dervar(ring, DerVar::new(x, 0)));
    }
    c.poly.substitute_diff(&assign)
}

/// Expected order of `F` in block `i`: `h` for linear blocks, `h + s − s_i`
/// in general.
fn expected_block_order(c: &ChowForm, i: usize) -> u32 {
    let s: u32 = c.shapes.iter().map(|s| s.order).sum();
    c.h + s - c.shapes[i].order
}

/// Structural checks that need only the Chow form: orders, presence of
/// `u_{i0}`, block symmetry, `g`, Euler identities and block degrees.
pub fn verify_chow_invariants(c: &ChowForm) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let f = &c.poly;
    let ring = f.ring();

    // (i) orders
    let mut bad = Vec::new();
    for i in 0..c.nblocks() {
        let want = expected_block_order(c, i);
        for v in c.block_vars(i) {
            if let Some(o) = f.order_wrt(v).finite() {
                if o != want {
                    bad.push(format!("ord({}) = {o}, expected {want}", ring.name(v)));
                }
            }
        }
    }
    if bad.is_empty() {
        rep.pass("order", "every present coefficient has the block order");
    } else {
        rep.fail(
            "order",
            "coefficient order differs from the block order",
            Some(bad.join("; ")),
        );
    }

    // (ii) u_{i0} present
    let missing: Vec<String> = (0..c.nblocks())
        .map(|i| c.block_vars(i)[0])
        .filter(|&v| f.order_wrt(v).finite().is_none())
        .map(|v| ring.name(v).to_string())
        .collect();
    if missing.is_empty() {
        rep.pass("constant_coefficients_present", "every u_{i0} occurs");
    } else {
        rep.fail(
            "constant_coefficients_present",
            "some u_{i0} does not occur",
            Some(missing.join(", ")),
        );
    }

    // (iii) block swap
    let mut pairs = Vec::new();
    for a in 0..c.nblocks() {
        for b in a + 1..c.nblocks() {
            if c.shapes[a] == c.shapes[b] {
                pairs.push((a, b));
            }
        }
    }
    if pairs.is_empty() {
        rep.skip("block_swap", "no two blocks of equal shape");
    } else {
        let mut bad = None;
        for (a, b) in pairs {
            match swap_blocks(c, a, b) {
                Ok(s) if s == *f || s == f.neg_poly() => {}
                Ok(_) => {
                    bad = Some(format!("blocks {a} and {b}"));
                    break;
                }
                Err(e) => {
                    bad = Some(e.to_string());
                    break;
                }
            }
        }
        match bad {
            None => rep.pass("block_swap", "exchanging blocks maps F to ±F"),
            Some(w) => rep.fail("block_swap", "exchanging blocks changes F", Some(w)),
        }
    }

    // (iv) g
    let u00 = c.block_vars(0)[0];
    let top = DerVar::new(u00, expected_block_order(c, 0));
    let g = f.degree(top);
    if g == c.g && g > 0 {
        rep.pass("leading_degree", format!("g = {g}"));
    } else {
        rep.fail(
            "leading_degree",
            format!("metadata says g = {}", c.g),
            Some(format!("deg(F, {}) = {g}", ring.dervar_name(top))),
        );
    }

    // Euler identities and per-block degrees
    let mut degrees = Vec::new();
    let mut euler_bad = None;
    for i in 0..c.nblocks() {
        match check_delta_homogeneous(f, &c.block_vars(i)) {
            Ok(m) => {
                if m.is_none() && euler_bad.is_none() {
                    euler_bad = Some(format!("block {i} is not δ-homogeneous"));
                }
                degrees.push(m);
            }
            Err(e) => {
                euler_bad = Some(format!("block {i}: {e}"));
                degrees.push(None);
            }
        }
    }
    match euler_bad {
        None => rep.pass("euler_identities", format!("block degrees {degrees:?}")),
        Some(w) => rep.fail("euler_identities", "Euler identities do not hold", Some(w)),
    }

    // (v) equal degrees for hyperplanes
    if c.is_linear() {
        match degrees[0] {
            Some(m) if degrees.iter().all(|d| *d == Some(m)) => {
                rep.pass("equal_block_degrees", format!("every block has degree {m}"))
            }
            _ => rep.fail(
                "equal_block_degrees",
                "block degrees differ",
                Some(format!("{degrees:?}")),
            ),
        }
    } else if degrees.iter().all(Option::is_some) {
        rep.pass(
            "equal_block_degrees",
            format!("generalized form, degrees {degrees:?}"),
        );
    } else {
        rep.fail(
            "equal_block_degrees",
            "some block is not homogeneous",
            Some(format!("{degrees:?}")),
        );
    }
    rep
}

/// The chain's polynomials in a ring with the `y`'s main and every
/// coefficient variable of `c` a parameter.
fn joint_setting(c: &ChowForm, a: &DiffChain) -> Result<(Ring, DiffChain)> {
    let input = a.ranking().ring();
    if input.n_main() != c.n {
        return Err(Error::InvalidInput(format!(
            "chain has {} main variables, Chow form has n = {}",
            input.n_main(),
            c.n
        )));
    }
    let ring = joint_ring(input, c.n, &c.shapes, &[])?;
    let els = a
        .elements()
        .iter()
        .map(|e| e.embed(&ring))
        .collect::<Result<Vec<_>>>()?;
    let rk = Ranking::orderly(&ring);
    let chain = if els.is_empty() {
        DiffChain::empty(&rk)
    } else {
        DiffChain::new(els, &rk)?
    };
    Ok((ring, chain))
}

/// Remainder of `F(u; −(P_0 − u_{00}), …)` modulo `A`; zero when `F`
/// vanishes on the generic point.
pub fn defining_identity(c: &ChowForm, a: &DiffChain) -> Result<DiffPoly> {
    let (ring, chain) = joint_setting(c, a)?;
    let mut assign = HashMap::new();
    for (i, s) in c.shapes.iter().enumerate() {
        let ui0 = DiffPoly::var(&ring, &coeff_name(i, 0), 0)?;
        let rest = &generic_polynomial(&ring, c.n, i, *s)? - &ui0;
        assign.insert(ring.var_or_err(&coeff_name(i, 0))?, rest.neg_poly());
    }
    let sub = c.poly.embed(&ring)?.substitute_diff(&assign)?;
    if chain.is_empty() {
        return Ok(sub);
    }
    Ok(chain.ritt_reduce(&sub)?.remainder)
}

/// Numerators `N_{ρ,k}` with `ξ_ρ^{(k)} = N_{ρ,k} / S^{k+1}` where
/// `ξ_ρ = (∂F/∂u_{0ρ}^{(h)}) / S` and `S = ∂F/∂u00^{(h)}`.
fn point_numerators(c: &ChowForm, kmax: u32) -> Result<(DiffPoly, Vec<Vec<DiffPoly>>)> {
    let f = &c.poly;
    let ring = f.ring();
    let h = c.lead_order();
    let s = f.partial(DerVar::new(ring.var_or_err(&coeff_name(0, 0))?, h));
    let ds = s.derivative();
    let mut nums = Vec::with_capacity(c.n);
    for rho in 1..=c.n {
        let v = ring.var_or_err(&coeff_name(0, rho))?;
        let mut ks = vec![f.partial(DerVar::new(v, h))];
        for k in 0..kmax as usize {
            let nk = &ks[k];
            ks.push(&(&nk.derivative() * &s) - &(nk * &ds).scale_int(k as i64 + 1));
        }
        nums.push(ks);
    }
    Ok((s, nums))
}

fn weight(ring: &Ring, m: &Monomial) -> u32 {
    m.factors()
        .iter()
        .filter(|(d, _)| ring.is_main(*d))
        .map(|(d, e)| (d.order + 1) * e)
        .sum()
}

/// `S^W · p(ξ)` for each generator `p` of `A`, reduced modulo `{F}` with
/// `u00` the only leading variable. All remainders vanish exactly when
/// the recovered point satisfies `A`.
pub fn generic_point_remainders(c: &ChowForm, a: &DiffChain) -> Result<Vec<DiffPoly>> {
    if !c.is_linear() {
        return Err(Error::InvalidInput(
            "generic point recovery needs a Chow form of hyperplanes".into(),
        ));
    }
    let input = a.ranking().ring();
    if input.n_main() != c.n {
        return Err(Error::InvalidInput(
            "chain and Chow form disagree on n".into(),
        ));
    }
    let ys: Vec<usize> = input.main_vars().collect();
    let kmax = a
        .elements()
        .iter()
        .map(|p| p.order_wrt_set(&ys).finite().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let (s, nums) = point_numerators(c, kmax)?;
    let uring = c.poly.ring().retag(&[&coeff_name(0, 0)])?;
    let fchain = DiffChain::new(vec![c.poly.embed(&uring)?], &Ranking::orderly(&uring))?;
    let s = s.embed(&uring)?;
    let mut out = Vec::new();
    for p in a.elements() {
        let wmax = p
            .terms()
            .keys()
            .map(|m| weight(input, m))
            .max()
            .unwrap_or(0);
        let mut g = DiffPoly::zero(&uring);
        for (m, co) in p.terms() {
            let mut t = DiffPoly::constant(&uring, co.clone());
            for &(d, e) in m.factors() {
                if input.is_main(d) {
                    let rho = ys.iter().position(|&y| y == d.var as usize).expect("main");
                    t = &t * &nums[rho][d.order as usize].embed(&uring)?.pow(e);
                } else {
                    let v = DiffPoly::var(&uring, input.name(d.var as usize), d.order)?;
                    t = &t * &v.pow(e);
                }
            }
            g = &g + &(&t * &s.pow(wmax - weight(input, m)));
        }
        out.push(fchain.ritt_reduce(&g)?.remainder);
    }
    Ok(out)
}

/// Every invariant plus the defining identity and generic point recovery.
pub fn verify_against_ideal(c: &ChowForm, a: &DiffChain) -> VerificationReport {
    let mut rep = verify_chow_invariants(c);
    match defining_identity(c, a) {
        Ok(r) if r.is_zero() => rep.pass("defining_identity", "F vanishes on the generic point"),
        Ok(r) => rep.fail(
            "defining_identity",
            "nonzero remainder modulo the chain",
            Some(abbreviate(&r)),
        ),
        Err(e) => rep.fail(
            "defining_identity",
            "could not evaluate",
            Some(e.to_string()),
        ),
    }
    if !c.is_linear() || a.is_empty() {
        rep.skip("generic_point", "no hyperplane Chow form of a proper ideal");
    } else {
        match generic_point_remainders(c, a) {
            Ok(rs) => match rs.iter().find(|r| !r.is_zero()) {
                None => rep.pass("generic_point", "recovered point satisfies every generator"),
                Some(r) => rep.fail(
                    "generic_point",
                    "a generator does not vanish at the recovered point",
                    Some(abbreviate(r)),
                ),
            },
            Err(e) => rep.fail("generic_point", "could not evaluate", Some(e.to_string())),
        }
    }
    rep
}

fn abbreviate(p: &DiffPoly) -> String {
    let s = p.to_text();
    if s.len() <= 400 {
        s
    } else {
        format!(
            "{}… ({} terms)",
            &s[..s.char_indices().nth(400).map_or(s.len(), |x| x.0)],
            p.nterms()
        )
    }
}

/// Outcome of intersecting with generic polynomials.
#[derive(Clone, Debug, PartialEq)]
pub enum Intersection {
    UnitIdeal,
    Proper(DimOrder),
}

impl Intersection {
    pub fn dim_order(&self) -> Option<(usize, u32)> {
        match self {
            Intersection::UnitIdeal => None,
            Intersection::Proper(d) => Some((d.dimension, d.order)),
        }
    }
}

/// Orderly charset of `[A, P_1, …, P_r]` for generic polynomials of the
/// given shapes, whose coefficients are adjoined as parameters, and its
/// dimension and order.
pub fn generic_intersection(a: &DiffChain, shapes: &[GenericShape]) -> Result<Intersection> {
    let input = a.ranking().ring();
    let n = input.n_main();
    let mut all = vec![GenericShape::LINEAR];
    all.extend_from_slice(shapes);
    let ring = joint_ring(input, n, &all, &[])?;
    let mut set = a
        .elements()
        .iter()
        .map(|e| e.embed(&ring))
        .collect::<Result<Vec<_>>>()?;
    for (i, s) in shapes.iter().enumerate() {
        set.push(generic_polynomial(&ring, n, i + 1, *s)?);
    }
    if set.is_empty() {
        return Ok(Intersection::Proper(
            DiffChain::empty(&Ranking::orderly(&ring)).dim_order()?,
        ));
    }
    match charset(&set, &Ranking::orderly(&ring)) {
        Ok(ch) => Ok(Intersection::Proper(ch.dim_order()?)),
        Err(Error::UnitIdeal) => Ok(Intersection::UnitIdeal),
        Err(e) => Err(e),
    }
}

/// `(d − 1, h + s)` check for one generic polynomial of order `s`, linear
/// or of degree 2.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionCheck {
    pub observed: Intersection,
    pub expected: Option<(usize, u32)>,
}

impl IntersectionCheck {
    pub fn passed(&self) -> bool {
        self.observed.dim_order() == self.expected
    }
}

pub fn generic_intersection_check(
    a: &DiffChain,
    s: u32,
    linear_only: bool,
) -> Result<IntersectionCheck> {
    let dims = a.dim_order()?;
    let shape = GenericShape::new(s, if linear_only { 1 } else { 2 })?;
    let observed = generic_intersection(a, &[shape])?;
    let expected = (dims.dimension > 0).then(|| (dims.dimension - 1, dims.order + s));
    Ok(IntersectionCheck { observed, expected })
}

/// Options for [`numeric_fiber_check`].
#[derive(Clone, Debug)]
pub struct FiberOptions {
    pub samples: usize,
    pub seed: u64,
    /// Added to each root before extending; nonzero only for power probes.
    pub perturbation: f64,
    pub max_retries: usize,
}

impl Default for FiberOptions {
    fn default() -> Self {
        FiberOptions {
            samples: 5,
            seed: 0,
            perturbation: 0.0,
            max_retries: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberCheck {
    pub max_residual: f64,
    pub samples: usize,
    pub roots: usize,
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let mut num = 0i64;
    while num == 0 {
        num = rng.gen_range(-9..=9);
    }
    BigRational::new(BigInt::from(num), BigInt::from(rng.gen_range(1..=5i64)))
}

fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    // coeffs[k] multiplies x^k; the leading one is nonzero
    let g = coeffs.len() - 1;
    let lc = coeffs[g];
    let mut m = DMatrix::<f64>::zeros(g, g);
    for i in 1..g {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..g {
        m[(i, g - 1)] = -coeffs[i] / lc;
    }
    let eval = |z: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    m.complex_eigenvalues()
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..8 {
                let (p, dp) = eval(z);
                if dp.norm() == 0.0 {
                    break;
                }
                z -= p / dp;
            }
            z
        })
        .collect()
}

/// For a zero-dimensional ideal: solves `F = 0` for `u00^{(h)}` at random
/// rational points, extends each root by `δ^{h+i}u00 = −T_i/S` where
/// `F^{(i)} = S·u00^{(h+i)} + T_i`, and evaluates the generators of `A` at
/// `ξ_ρ = (∂F/∂u_{0ρ}^{(h)}) / S` and its derivatives. Returns the largest
/// absolute residual.
pub fn numeric_fiber_check(c: &ChowForm, a: &DiffChain, opts: &FiberOptions) -> Result<FiberCheck> {
    if c.d != 0 || !c.is_linear() {
        return Err(Error::InvalidInput(
            "the fiber check needs d = 0 and a hyperplane Chow form".into(),
        ));
    }
    let input = a.ranking().ring();
    if input.n_main() != c.n || input.n_main() != input.nvars() {
        return Err(Error::InvalidInput(
            "the fiber check needs a chain over the y's without parameters".into(),
        ));
    }
    let f = &c.poly;
    let ring = f.ring();
    if ring.nvars() != ring.n_main() || f.terms().values().any(|x| !x.is_rational()) {
        return Err(Error::InvalidInput(
            "the fiber check needs rational coefficients".into(),
        ));
    }
    let ys: Vec<usize> = input.main_vars().collect();
    let q = a
        .elements()
        .iter()
        .map(|p| p.order_wrt_set(&ys).finite().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let h = c.lead_order();
    let u00 = ring.var_or_err(&coeff_name(0, 0))?;
    let top = DerVar::new(u00, h);
    let (s, nums) = point_numerators(c, q)?;
    let derivs: Vec<DiffPoly> = (0..=q).map(|i| f.differentiate(i)).collect();
    let parts = f.coeffs_in(top);
    let cf = |x: &Coeff| Complex64::new(x.to_f64(0.0), 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst: f64 = 0.0;
    let mut roots_seen = 0;
    let mut done = 0;
    let mut retries = 0;
    while done < opts.samples {
        if retries > opts.max_retries {
            return Err(Error::Sampling(format!(
                "no admissible sample after {retries} attempts"
            )));
        }
        let mut exact: HashMap<DerVar, Coeff> = HashMap::new();
        for v in 0..ring.nvars() {
            let upto = if v == u00 { h } else { h + q + 1 };
            for k in 0..upto {
                exact.insert(
                    DerVar::new(v, k),
                    Coeff::from_rational(random_rational(&mut rng)),
                );
            }
        }
        let coeffs: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.eval_exact(|d| exact.get(&d).cloned())
                    .map(|x| x.to_f64(0.0))
            })
            .collect::<Result<_>>()?;
        if coeffs.last().is_none_or(|x| x.abs() < 1e-12) {
            retries += 1;
            continue;
        }
        let mut sample_worst: f64 = 0.0;
        let mut ok = true;
        let roots = poly_roots(&coeffs);
        for gamma in &roots {
            let mut vals: HashMap<DerVar, Complex64> =
                exact.iter().map(|(d, x)| (*d, cf(x))).collect();
            vals.insert(top, *gamma + opts.perturbation);
            let sv = s.eval(|d| vals.get(&d).copied(), cf)?;
            if sv.norm() < 1e-8 {
                ok = false;
                break;
            }
            for (i, fi) in derivs.iter().enumerate().skip(1) {
                let next = DerVar::new(u00, h + i as u32);
                vals.insert(next, Complex64::new(0.0, 0.0));
                let t = fi.eval(|d| vals.get(&d).copied(), cf)?;
                vals.insert(next, -t / sv);
            }
            let mut point: HashMap<DerVar, Complex64> = HashMap::new();
            for (rho, ks) in nums.iter().enumerate() {
                for (k, nk) in ks.iter().enumerate() {
                    let x = nk.eval(|d| vals.get(&d).copied(), cf)? / sv.powu(k as u32 + 1);
                    point.insert(DerVar::new(ys[rho], k as u32), x);
                }
            }
            for p in a.elements() {
                let r = p.eval(|d| point.get(&d).copied(), cf)?;
                sample_worst = sample_worst.max(r.norm());
            }
        }
        if !ok {
            retries += 1;
            continue;
        }
        worst = worst.max(sample_worst);
        roots_seen += roots.len();
        done += 1;
    }
    Ok(FiberCheck {
        max_residual: worst,
        samples: done,
        roots: roots_seen,
    })
}

/// Chow form of the image of the variety under `Y = M X`:
/// `F(v_0 B, …, v_d B)` with `B = diag(1, M)`.
pub fn linear_transform_chowform(c: &ChowForm, m: &[Vec<Coeff>]) -> Result<ChowForm> {
    let n = c.n;
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!("matrix must be {n}×{n}")));
    }
    if !c.is_linear() {
        return Err(Error::InvalidInput(
            "only hyperplane Chow forms transform linearly".into(),
        ));
    }
    let ring = c.poly.ring();
    let consts: Vec<Vec<DiffPoly>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| DiffPoly::constant(ring, x.clone()))
                .collect()
        })
        .collect();
    if algelim::det(&consts)?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut assign = HashMap::new();
    for i in 0..c.nblocks() {
        for j in 1..=n {
            let mut e = DiffPoly::zero(ring);
            for k in 1..=n {
                let v = DiffPoly::var(ring, &coeff_name(i, k), 0)?;
                e = &e + &v.scale(&m[k - 1][j - 1]);
            }
            assign.insert(ring.var_or_err(&coeff_name(i, j))?, e);
        }
    }
    let poly = c.poly.substitute_diff(&assign)?.normalize_unit();
    let out = ChowForm {
        poly,
        warnings: Vec::new(),
        ..c.clone()
    }
    .with_measured_metadata();
    if out.g != c.g || out.block_degrees != c.block_degrees {
        return Err(Error::Internal(format!(
            "transform changed g or degrees: g {} → {}, degrees {:?} → {:?}",
            c.g, out.g, c.block_degrees, out.block_degrees
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
