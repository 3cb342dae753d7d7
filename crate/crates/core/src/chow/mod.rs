//! Differential Chow forms and their generalization to generic polynomials
//! of arbitrary order and degree, which includes differential resultants.

mod resultant;

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::algelim::{self, ElimOptions};
use crate::diffring::{DerVar, DiffPoly, Monomial, Ring, RingContext, VarKind};
use crate::error::{Error, Result};
use crate::ranking::Ranking;
use crate::reduction::{charset, DiffChain};

pub use resultant::{dres_evaluate, resultant_matrix_1var, DresValue, ResultantMatrix};

/// Name of the coefficient variable `u_{ij}`.
pub fn coeff_name(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("u{i}{j}")
    } else {
        format!("u{i}_{j}")
    }
}

/// Order `s` and degree `m` of a generic differential polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenericShape {
    pub order: u32,
    pub degree: u32,
}

impl GenericShape {
    /// The generic hyperplane `u_{i0} + Σ u_{ij} y_j`.
    pub const LINEAR: GenericShape = GenericShape {
        order: 0,
        degree: 1,
    };

    pub fn new(order: u32, degree: u32) -> Result<GenericShape> {
        if degree == 0 {
            return Err(Error::InvalidInput(
                "generic degree must be at least 1".into(),
            ));
        }
        Ok(GenericShape { order, degree })
    }

    /// Nonconstant monomials in `y_1..y_n` of order at most `s` and degree
    /// at most `m`, listed by degree, then by combination of the variables
    /// `y_1, …, y_n, y_1', …` with repetition. Variables index `0..n`.
    pub fn monomials(&self, n: usize) -> Vec<Monomial> {
        let vars: Vec<DerVar> = (0..=self.order)
            .flat_map(|k| (0..n).map(move |j| DerVar::new(j, k)))
            .collect();
        let mut out = Vec::new();
        for deg in 1..=self.degree as usize {
            let mut idx = vec![0usize; deg];
            loop {
                let mut f: Vec<(DerVar, u32)> = Vec::new();
                for &i in &idx {
                    match f.iter_mut().find(|(d, _)| *d == vars[i]) {
                        Some(e) => e.1 += 1,
                        None => f.push((vars[i], 1)),
                    }
                }
                out.push(Monomial::from_factors(f));
                // next nondecreasing index tuple
                let mut p = deg;
                while p > 0 && idx[p - 1] == vars.len() - 1 {
                    p -= 1;
                }
                if p == 0 {
                    break;
                }
                let v = idx[p - 1] + 1;
                for x in &mut idx[p - 1..] {
                    *x = v;
                }
            }
        }
        out
    }

    /// Number of coefficients including `u_{i0}`.
    pub fn ncoeffs(&self, n: usize) -> usize {
        1 + self.monomials(n).len()
    }
}

/// A (generalized) differential Chow form with its metadata.
#[derive(Clone, Debug)]
pub struct ChowForm {
    pub poly: DiffPoly,
    pub n: usize,
    pub d: usize,
    /// Order of the ideal.
    pub h: u32,
    /// Degree in `u00^{(ord)}`.
    pub g: u32,
    /// Shapes of the generic polynomials, one per block.
    pub shapes: Vec<GenericShape>,
    /// Homogeneity degree per block (common total degree of the terms).
    pub block_degrees: Vec<Option<u32>>,
    /// Order per block.
    pub block_orders: Vec<u32>,
    pub warnings: Vec<String>,
}

impl ChowForm {
    /// Coefficient variable names of block `i`, `u_{i0}` first.
    pub fn block_names(&self, i: usize) -> Vec<String> {
        (0..self.shapes[i].ncoeffs(self.n))
            .map(|j| coeff_name(i, j))
            .collect()
    }

    /// Ring variable indices of block `i`.
    pub fn block_vars(&self, i: usize) -> Vec<usize> {
        self.block_names(i)
            .iter()
            .map(|s| self.poly.ring().var(s).expect("block variable in ring"))
            .collect()
    }

    pub fn nblocks(&self) -> usize {
        self.shapes.len()
    }

    /// True for the ordinary Chow form (all blocks linear).
    pub fn is_linear(&self) -> bool {
        self.shapes.iter().all(|s| *s == GenericShape::LINEAR)
    }

    /// The order of `F` in `u00`.
    pub fn lead_order(&self) -> u32 {
        self.block_orders[0]
    }

    /// Recomputes `g` and the per-block degrees and orders from the polynomial.
    pub fn with_measured_metadata(mut self) -> ChowForm {
        let blocks: Vec<Vec<usize>> = (0..self.nblocks()).map(|i| self.block_vars(i)).collect();
        self.block_orders = blocks
            .iter()
            .map(|b| self.poly.order_wrt_set(b).finite().unwrap_or(0))
            .collect();
        self.block_degrees = blocks
            .iter()
            .map(|b| common_degree(&self.poly, b))
            .collect();
        let u00 = DerVar::new(blocks[0][0], self.block_orders[0]);
        self.g = self.poly.degree(u00);
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "poly": self.poly.to_text(),
            "terms": self.poly.to_json(),
            "n": self.n,
            "d": self.d,
            "h": self.h,
            "g": self.g,
            "shapes": self.shapes.iter().map(|s| json!([s.order, s.degree])).collect::<Vec<_>>(),
            "block_degrees": self.block_degrees,
            "block_orders": self.block_orders,
            "nterms": self.poly.nterms(),
            "warnings": self.warnings,
        })
    }

    pub fn from_json(v: &Value) -> Result<ChowForm> {
        let bad =
            |what: &str| Error::InvalidInput(format!("chow form JSON: missing or bad `{what}`"));
        let poly = DiffPoly::from_json(v.get("terms").ok_or_else(|| bad("terms"))?)?;
        let int = |k: &str| v.get(k).and_then(Value::as_u64).ok_or_else(|| bad(k));
        let n = int("n")? as usize;
        let d = int("d")? as usize;
        let h = int("h")? as u32;
        let shapes = match v.get("shapes") {
            Some(Value::Array(a)) => a
                .iter()
                .map(|s| {
                    let o = s
                        .get(0)
                        .and_then(Value::as_u64)
                        .ok_or_else(|| bad("shapes"))?;
                    let m = s
                        .get(1)
                        .and_then(Value::as_u64)
                        .ok_or_else(|| bad("shapes"))?;
                    GenericShape::new(o as u32, m as u32)
                })
                .collect::<Result<Vec<_>>>()?,
            None => vec![GenericShape::LINEAR; d + 1],
            _ => return Err(bad("shapes")),
        };
        if shapes.len() != d + 1 {
            return Err(bad("shapes"));
        }
        let c = ChowForm {
            poly,
            n,
            d,
            h,
            g: 0,
            shapes,
            block_degrees: Vec::new(),
            block_orders: Vec::new(),
            warnings: Vec::new(),
        };
        for i in 0..c.nblocks() {
            for name in c.block_names(i) {
                if c.poly.ring().var(&name).is_none() {
                    return Err(Error::UnknownVariable(name));
                }
            }
        }
        Ok(c.with_measured_metadata())
    }
}

/// Common total degree of every term in the given variables.
pub(crate) fn common_degree(p: &DiffPoly, vars: &[usize]) -> Option<u32> {
    let mut deg = None;
    for m in p.terms().keys() {
        let k: u32 = m
            .factors()
            .iter()
            .filter(|(d, _)| vars.contains(&(d.var as usize)))
            .map(|(_, e)| e)
            .sum();
        match deg {
            None => deg = Some(k),
            Some(x) if x != k => return None,
            _ => {}
        }
    }
    deg
}

/// Ring of coefficient variables for the given blocks, main variables
/// first, followed by the parameters of `input`.
pub fn coefficient_ring(input: &Ring, n: usize, shapes: &[GenericShape]) -> Result<Ring> {
    let mut vars: Vec<(String, VarKind)> = Vec::new();
    for (i, s) in shapes.iter().enumerate() {
        for j in 0..s.ncoeffs(n) {
            vars.push((coeff_name(i, j), VarKind::Main));
        }
    }
    for v in input.vars() {
        if v.kind == VarKind::Parameter {
            vars.push((v.name.clone(), VarKind::Parameter));
        }
    }
    RingContext::new(input.base(), vars)
}

/// Ring holding `y`'s and coefficient variables; the listed coefficient
/// names become main variables, the others parameters.
pub(crate) fn joint_ring(
    input: &Ring,
    n: usize,
    shapes: &[GenericShape],
    main_coeffs: &[String],
) -> Result<Ring> {
    let mut vars: Vec<(String, VarKind)> = input
        .main_vars()
        .map(|i| (input.name(i).to_string(), VarKind::Main))
        .collect();
    let mut params = Vec::new();
    for (i, s) in shapes.iter().enumerate() {
        for j in 0..s.ncoeffs(n) {
            let name = coeff_name(i, j);
            if main_coeffs.contains(&name) {
                vars.push((name, VarKind::Main));
            } else {
                params.push((name, VarKind::Parameter));
            }
        }
    }
    vars.extend(params);
    for v in input.vars() {
        if v.kind == VarKind::Parameter {
            vars.push((v.name.clone(), VarKind::Parameter));
        }
    }
    RingContext::new(input.base(), vars)
}

/// The generic polynomial `u_{i0} + Σ_k u_{ik} M_k` of block `i` in `ring`,
/// whose first `n` main variables are `y_1..y_n`.
pub fn generic_polynomial(
    ring: &Ring,
    n: usize,
    i: usize,
    shape: GenericShape,
) -> Result<DiffPoly> {
    let ys: Vec<usize> = ring.main_vars().take(n).collect();
    let mut p = DiffPoly::var(ring, &coeff_name(i, 0), 0)?;
    for (k, m) in shape.monomials(n).into_iter().enumerate() {
        let f = m
            .factors()
            .iter()
            .map(|&(d, e)| (DerVar::new(ys[d.var as usize], d.order), e))
            .collect();
        let u = DiffPoly::var(ring, &coeff_name(i, k + 1), 0)?;
        p = &p + &u.mul_monomial(&Monomial::from_factors(f));
    }
    Ok(p)
}

/// Closed-form Chow form of the hypersurface `V(p)` in `n` variables.
///
/// `y_ρ ↦ D_ρ / D` with `D = det(u_{ij})_{0≤i<n, 1≤j≤n}` and `D_ρ` the
/// determinant with column `ρ` replaced by `−u_{i0}`; denominators are
/// cleared by the least power of `D`.
pub fn chow_hypersurface(p: &DiffPoly) -> Result<ChowForm> {
    let ring = p.ring();
    let ys: Vec<usize> = ring.main_vars().collect();
    let n = ys.len();
    if n == 0 {
        return Err(Error::InvalidInput("ring has no main variables".into()));
    }
    if p.dervars().iter().all(|d| !ring.is_main(*d)) {
        return Err(Error::InvalidInput(
            "polynomial is constant in the main variables".into(),
        ));
    }
    let shapes = vec![GenericShape::LINEAR; n];
    let out = coefficient_ring(ring, n, &shapes)?;
    let u = |i: usize, j: usize| DiffPoly::var(&out, &coeff_name(i, j), 0).expect("coefficient");
    let matrix = |col: Option<usize>| -> Vec<Vec<DiffPoly>> {
        (0..n)
            .map(|i| {
                (1..=n)
                    .map(|j| if Some(j) == col { -&u(i, 0) } else { u(i, j) })
                    .collect()
            })
            .collect()
    };
    let det = algelim::det(&matrix(None))?;
    let ddet = det.derivative();
    let h = p.total_order().finite().unwrap_or(0);
    // numerators of y_ρ^{(k)} = N_{ρ,k} / D^{k+1}
    let mut nums: Vec<Vec<DiffPoly>> = Vec::with_capacity(n);
    for rho in 1..=n {
        let mut v = vec![algelim::det(&matrix(Some(rho)))?];
        for k in 0..h as usize {
            let nk = &v[k];
            let next = &(&nk.derivative() * &det) - &(nk * &ddet).scale_int(k as i64 + 1);
            v.push(next);
        }
        nums.push(v);
    }
    let weight = |m: &Monomial| -> u32 {
        m.factors()
            .iter()
            .filter(|(d, _)| ring.is_main(*d))
            .map(|(d, e)| (d.order + 1) * e)
            .sum()
    };
    let wmax = p.terms().keys().map(weight).max().unwrap_or(0);
    let mut f = DiffPoly::zero(&out);
    for (m, c) in p.terms() {
        let mut t = DiffPoly::constant(&out, c.clone());
        for &(d, e) in m.factors() {
            if ring.is_main(d) {
                let rho = ys.iter().position(|&y| y == d.var as usize).expect("main");
                t = &t * &nums[rho][d.order as usize].pow(e);
            } else {
                let name = ring.name(d.var as usize);
                let v = DiffPoly::var(&out, name, d.order)?;
                t = &t * &v.pow(e);
            }
        }
        f = &f + &(&t * &det.pow(wmax - weight(m)));
    }
    if f.is_zero() {
        return Err(Error::Internal("substituted polynomial vanished".into()));
    }
    while let Ok(q) = algelim::divide_exact(&f, &det) {
        if q.is_constant() {
            break;
        }
        f = q;
    }
    let poly = algelim::strip_parameter_content(&f)?;
    Ok(ChowForm {
        poly,
        n,
        d: n - 1,
        h,
        g: 0,
        shapes,
        block_degrees: Vec::new(),
        block_orders: Vec::new(),
        warnings: Vec::new(),
    }
    .with_measured_metadata())
}

/// Options for the elimination pipeline.
#[derive(Clone, Debug, Default)]
pub struct ChowOptions {
    pub elim: ElimOptions,
}

/// Differential Chow form of `sat(A)` for an orderly characteristic set
/// `A` of a prime ideal of dimension `d < n`.
pub fn chow_form(a: &DiffChain, opts: &ChowOptions) -> Result<ChowForm> {
    let dim = a.dim_order()?.dimension;
    if a.is_empty() || dim == a.ranking().ring().n_main() {
        return Err(Error::InvalidInput(
            "the chain must present a proper ideal of dimension below n".into(),
        ));
    }
    generalized_chow_form(a, &vec![GenericShape::LINEAR; dim + 1], opts)
}

/// Generalized Chow form of `sat(A)` for generic polynomials of the given
/// shapes, one per block `0..=d`. With the empty chain this is the
/// differential resultant of `n + 1` generic polynomials.
pub fn generalized_chow_form(
    a: &DiffChain,
    shapes: &[GenericShape],
    opts: &ChowOptions,
) -> Result<ChowForm> {
    let input = a.ranking().ring().clone();
    let dims = a.dim_order()?;
    let n = input.n_main();
    let d = dims.dimension;
    let h = dims.order;
    if shapes.len() != d + 1 {
        return Err(Error::InvalidInput(format!(
            "dimension {d} needs {} generic polynomials, got {}",
            d + 1,
            shapes.len()
        )));
    }
    let s_total: u32 = shapes.iter().map(|s| s.order).sum();
    let lead = h + s_total - shapes[0].order;
    let frozen = h + s_total;
    let u00 = coeff_name(0, 0);
    let ring = joint_ring(&input, n, shapes, std::slice::from_ref(&u00))?;
    let ys: Vec<usize> = ring.main_vars().take(n).collect();
    let rk = Ranking::orderly(&ring);

    // [I, P_1..P_d] over the coefficient field extended by the u's
    let mut set = a
        .elements()
        .iter()
        .map(|e| e.embed(&ring))
        .collect::<Result<Vec<_>>>()?;
    for (i, s) in shapes.iter().enumerate().skip(1) {
        set.push(generic_polynomial(&ring, n, i, *s)?);
    }
    let chain = if set.is_empty() {
        DiffChain::empty(&rk)
    } else {
        charset(&set, &rk)?
    };
    let order: u32 = chain.leaders().iter().map(|l| l.order).sum();
    if chain.len() != n || order != lead {
        return Err(Error::Elimination(format!(
            "intersection with generic polynomials has {} leaders and order {order}, expected {n} and {lead}",
            chain.len()
        )));
    }

    // prolong to the frozen order, then adjoin derivatives of P_0
    let mut polys = Vec::new();
    let mut bounds = Vec::new();
    for (e, dec) in chain.elements().iter().zip(chain.decompositions()) {
        polys.push(e.clone());
        bounds.push(frozen - dec.leader.order);
    }
    let p0 = generic_polynomial(&ring, n, 0, shapes[0])?;
    polys.push(p0.clone());
    bounds.push(lead);
    let mut sys = algelim::prolong(&polys, &bounds)?;
    let u00v = ring.var_or_err(&u00)?;
    let keep: Vec<DerVar> = (0..=lead).map(|k| DerVar::new(u00v, k)).collect();
    let elim: Vec<DerVar> = sys
        .elim_vars
        .iter()
        .copied()
        .filter(|v| v.var as usize != u00v)
        .collect();
    if elim.iter().any(|v| v.order > frozen) {
        return Err(Error::Internal(
            "prolongation exceeded the frozen order".into(),
        ));
    }
    sys.set_split(elim, keep)?;

    // saturate by initials and separants that involve the y's, and by the
    // separant of P_0
    let mut sat: Vec<DiffPoly> = Vec::new();
    let mut push = |f: DiffPoly| {
        if f.dervars().iter().any(|v| ys.contains(&(v.var as usize))) {
            let f = crate::reduction::simplify(&f);
            if !sat.contains(&f) {
                sat.push(f);
            }
        }
    };
    for dec in chain.decompositions() {
        push(dec.initial.clone());
        push(dec.separant.clone());
    }
    if let Some(l) = rk.leader(&p0) {
        push(p0.partial(l));
    }
    let e = algelim::groebner_eliminate(&sys, &sat, &opts.elim)?;
    if e.inconsistent {
        return Err(Error::Elimination(
            "the presentation is inconsistent".into(),
        ));
    }
    let mut warnings = Vec::new();
    let mut gens = e.generators;
    if gens.is_empty() {
        return Err(Error::Elimination(
            "empty elimination ideal; the prolongation bound is too small".into(),
        ));
    }
    let mut g = gens.remove(0);
    if !gens.is_empty() {
        warnings.push(format!(
            "elimination ideal has {} generators; using their gcd",
            gens.len() + 1
        ));
        for x in &gens {
            g = algelim::alg_gcd(&g, x)?;
        }
    }
    let top = DerVar::new(u00v, lead);
    if !g.contains(top) {
        return Err(Error::Elimination(format!(
            "eliminant is free of {}",
            ring.dervar_name(top)
        )));
    }
    let (_, prim) = algelim::content_primitive(&g, top)?;
    let sq = algelim::squarefree_part(&prim, top)?;
    if sq != prim {
        warnings.push("eliminant was not squarefree".into());
    }
    let out = coefficient_ring(&input, n, shapes)?;
    let poly = algelim::strip_parameter_content(&sq.embed(&out)?)?;
    Ok(ChowForm {
        poly,
        n,
        d,
        h,
        g: 0,
        shapes: shapes.to_vec(),
        block_degrees: Vec::new(),
        block_orders: Vec::new(),
        warnings,
    }
    .with_measured_metadata())
}

/// Ring `y_1..y_n` over `Q`.
pub fn y_ring(n: usize) -> Ring {
    let names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    RingContext::main_q(&refs)
}

/// Differential resultant of `n + 1` generic polynomials of the given
/// shapes in `n` variables.
pub fn differential_resultant(
    n: usize,
    shapes: &[GenericShape],
    opts: &ChowOptions,
) -> Result<ChowForm> {
    if shapes.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "{} shapes given, {} needed",
            shapes.len(),
            n + 1
        )));
    }
    let ring = y_ring(n);
    generalized_chow_form(&DiffChain::empty(&Ranking::orderly(&ring)), shapes, opts)
}

/// Variables of `p` grouped by block index, for reporting.
pub fn present_blocks(c: &ChowForm) -> BTreeSet<usize> {
    let mut s = BTreeSet::new();
    for d in c.poly.dervars() {
        for i in 0..c.nblocks() {
            if c.block_vars(i).contains(&(d.var as usize)) {
                s.insert(i);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests;
