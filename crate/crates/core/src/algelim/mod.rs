//! Prolongation of differential systems and exact algebraic elimination.
//!
//! Derivatives are frozen into independent algebraic variables. Variables
//! are either eliminated or kept. Coefficient parameters live in the
//! coefficient field `Q(params)` and never receive leading monomials.

pub mod gcd;
pub mod groebner;
pub mod ipoly;

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::diffring::{DerVar, DiffPoly, Monomial, Ring, VarKind};
use crate::error::{Error, Result};
use crate::field::{BaseField, Coeff, ZPoly};

pub use groebner::{GPoly, Limits, TermOrder};
pub use ipoly::IPoly;

/// A prolonged system with every derivative frozen as an algebraic variable.
#[derive(Clone, Debug)]
pub struct AlgSystem {
    pub ring: Ring,
    pub polys: Vec<DiffPoly>,
    /// Variables to eliminate, highest first.
    pub elim_vars: Vec<DerVar>,
    /// Variables kept in the eliminant, highest first.
    pub keep_vars: Vec<DerVar>,
    /// Highest frozen order per ring variable.
    pub max_order: BTreeMap<String, u32>,
}

/// Sorts derivatives by `(order, var_index)` descending.
fn sort_block(v: &mut Vec<DerVar>) {
    v.sort_by(|a, b| (b.order, b.var).cmp(&(a.order, a.var)));
    v.dedup();
}

/// `δ^j p` for `0 ≤ j ≤ bound(p)`; every main derivative becomes an
/// elimination variable.
pub fn prolong(system: &[DiffPoly], bounds: &[u32]) -> Result<AlgSystem> {
    if system.len() != bounds.len() {
        return Err(Error::InvalidInput(
            "one prolongation bound per polynomial is required".into(),
        ));
    }
    let ring = match system.first() {
        Some(p) => p.ring().clone(),
        None => return Err(Error::InvalidInput("empty system".into())),
    };
    let mut polys = Vec::new();
    for (p, &b) in system.iter().zip(bounds) {
        let mut q = p.clone();
        for j in 0..=b {
            if j > 0 {
                q = q.derivative();
            }
            if !q.is_zero() && !polys.contains(&q) {
                polys.push(q.clone());
            }
        }
    }
    let mut elim: Vec<DerVar> = Vec::new();
    let mut max_order: BTreeMap<String, u32> = BTreeMap::new();
    for p in &polys {
        for d in p.dervars() {
            let name = ring.name(d.var as usize).to_string();
            let e = max_order.entry(name).or_insert(0);
            *e = (*e).max(d.order);
            if ring.is_main(d) {
                elim.push(d);
            }
        }
    }
    sort_block(&mut elim);
    Ok(AlgSystem {
        ring,
        polys,
        elim_vars: elim,
        keep_vars: Vec::new(),
        max_order,
    })
}

impl AlgSystem {
    pub fn new(polys: Vec<DiffPoly>, elim: Vec<DerVar>, keep: Vec<DerVar>) -> Result<AlgSystem> {
        let ring = polys
            .first()
            .map(|p| p.ring().clone())
            .ok_or_else(|| Error::InvalidInput("empty system".into()))?;
        let mut s = AlgSystem {
            ring,
            polys,
            elim_vars: Vec::new(),
            keep_vars: Vec::new(),
            max_order: BTreeMap::new(),
        };
        for p in &s.polys {
            for d in p.dervars() {
                let e = s
                    .max_order
                    .entry(s.ring.name(d.var as usize).to_string())
                    .or_insert(0);
                *e = (*e).max(d.order);
            }
        }
        s.set_split(elim, keep)?;
        Ok(s)
    }

    /// Declares the split; each block is ordered by `(order, var)`
    /// descending.
    pub fn set_split(&mut self, mut elim: Vec<DerVar>, mut keep: Vec<DerVar>) -> Result<()> {
        sort_block(&mut elim);
        sort_block(&mut keep);
        if elim.iter().any(|d| keep.contains(d)) {
            return Err(Error::InvalidInput(
                "elimination and kept variables overlap".into(),
            ));
        }
        for p in &self.polys {
            for d in p.dervars() {
                if self.ring.is_main(d) && !elim.contains(&d) && !keep.contains(&d) {
                    return Err(Error::InvalidInput(format!(
                        "`{}` is neither eliminated nor kept",
                        self.ring.dervar_name(d)
                    )));
                }
            }
        }
        self.elim_vars = elim;
        self.keep_vars = keep;
        Ok(())
    }
}

/// Conversion between differential polynomials and the Gröbner engine's
/// representation.
#[derive(Clone, Debug)]
pub(crate) struct VarMap {
    ring: Ring,
    /// Main variables: an optional saturation variable first, then the
    /// given derivatives.
    main: Vec<Option<DerVar>>,
    main_index: HashMap<DerVar, usize>,
    params: Vec<DerVar>,
    param_index: HashMap<DerVar, usize>,
    /// Whether `t` is the last parameter.
    has_t: bool,
}

impl VarMap {
    pub(crate) fn new(ring: &Ring, main: Vec<Option<DerVar>>, polys: &[&DiffPoly]) -> VarMap {
        let main_index: HashMap<DerVar, usize> = main
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|d| (d, i)))
            .collect();
        let mut params: Vec<DerVar> = Vec::new();
        for p in polys {
            for d in p.dervars() {
                if !main_index.contains_key(&d) {
                    params.push(d);
                }
            }
        }
        params.sort_by(|a, b| (b.order, b.var).cmp(&(a.order, a.var)));
        params.dedup();
        let param_index = params.iter().enumerate().map(|(i, d)| (*d, i)).collect();
        VarMap {
            ring: ring.clone(),
            main,
            main_index,
            params,
            param_index,
            has_t: ring.base() == BaseField::RationalFunctionsQt,
        }
    }

    pub(crate) fn nparams(&self) -> usize {
        self.params.len() + usize::from(self.has_t)
    }

    pub(crate) fn nmain(&self) -> usize {
        self.main.len()
    }

    pub(crate) fn params(&self) -> &[DerVar] {
        &self.params
    }

    /// Clears denominators: returns integer coefficients for `c·p` with
    /// `c` a nonzero base-field constant.
    fn integer_terms(p: &DiffPoly) -> Vec<(Monomial, ZPoly)> {
        let (den_l, den_t) = denominators(p);
        p.terms()
            .iter()
            .map(|(m, c)| {
                let s = c.scalar();
                let k = s.numer() * (&den_l / s.denom());
                let z = c
                    .numerator_poly()
                    .mul(&den_t.div_exact(c.denominator_poly()).expect("lcm divides"))
                    .scale(&k);
                (m.clone(), z)
            })
            .collect()
    }

    pub(crate) fn to_gpoly(&self, p: &DiffPoly, order: TermOrder) -> Result<GPoly> {
        let np = self.nparams();
        let nm = self.main.len();
        let mut terms: Vec<(Vec<u16>, IPoly)> = Vec::new();
        for (m, z) in Self::integer_terms(p) {
            let mut me = vec![0u16; nm];
            let mut pe = vec![0u16; np];
            for &(d, e) in m.factors() {
                if let Some(&i) = self.main_index.get(&d) {
                    me[i] += e as u16;
                } else if let Some(&i) = self.param_index.get(&d) {
                    pe[i] += e as u16;
                } else {
                    return Err(Error::Internal(format!(
                        "`{}` missing from variable map",
                        self.ring.dervar_name(d)
                    )));
                }
            }
            let coeff = IPoly::from_terms(
                np,
                z.0.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| {
                        let mut e = pe.clone();
                        if self.has_t {
                            e[np - 1] += k as u16;
                        }
                        (e, c.clone())
                    }),
            );
            terms.push((me, coeff));
        }
        Ok(GPoly::from_terms(order, terms))
    }

    fn coeff_of_t_power(&self, k: u16, c: &BigInt) -> Coeff {
        if k == 0 {
            return Coeff::from_bigint(c.clone());
        }
        let mut v = vec![BigInt::zero(); k as usize + 1];
        v[k as usize] = c.clone();
        Coeff::from_zpolys(&ZPoly(v), &ZPoly::one())
    }

    /// Converts back; `None` variables (the saturation variable) must not
    /// occur.
    pub(crate) fn from_gpoly(&self, g: &GPoly) -> Result<DiffPoly> {
        let np = self.nparams();
        let mut out = Vec::new();
        for (me, c) in &g.terms {
            let mut f = Vec::new();
            for (i, &e) in me.iter().enumerate() {
                if e > 0 {
                    match self.main[i] {
                        Some(d) => f.push((d, e as u32)),
                        None => {
                            return Err(Error::Internal(
                                "saturation variable survived elimination".into(),
                            ))
                        }
                    }
                }
            }
            for (pe, x) in c.terms() {
                let mut f2 = f.clone();
                for (i, &e) in pe.iter().enumerate().take(self.params.len()) {
                    if e > 0 {
                        f2.push((self.params[i], e as u32));
                    }
                }
                let tk = if self.has_t { pe[np - 1] } else { 0 };
                out.push((Monomial::from_factors(f2), self.coeff_of_t_power(tk, x)));
            }
        }
        Ok(DiffPoly::from_terms(&self.ring, out))
    }

    pub(crate) fn ipoly_to_diff(&self, c: &IPoly) -> DiffPoly {
        self.from_gpoly(&GPoly {
            terms: vec![(vec![0; self.main.len()], c.clone())],
        })
        .expect("parameters only")
    }
}

/// Options for [`groebner_eliminate`].
#[derive(Clone, Debug)]
pub struct ElimOptions {
    pub order: ElimOrder,
    pub limits: Limits,
    pub trace: bool,
}

/// Term order used for elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElimOrder {
    /// Pure lexicographic order, elimination block above kept block.
    Lex,
    /// Graded reverse lexicographic inside each of the two blocks.
    Block,
}

impl Default for ElimOptions {
    fn default() -> Self {
        ElimOptions {
            order: ElimOrder::Lex,
            limits: Limits::default(),
            trace: false,
        }
    }
}

impl ElimOptions {
    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.limits.deadline = deadline;
        self
    }
}

/// Generators of an elimination ideal.
#[derive(Clone, Debug)]
pub struct Elimination {
    /// Reduced basis of `(sys) : h^∞ ∩ K[keep]`, or `[1]` when the
    /// system is inconsistent.
    pub generators: Vec<DiffPoly>,
    pub inconsistent: bool,
    pub basis_size: usize,
    pub pairs_reduced: usize,
    pub trace: Vec<Value>,
}

/// Eliminates `sys.elim_vars`, optionally saturating by the product of
/// `saturate_by` through an adjoined inverse `z·h − 1`.
pub fn groebner_eliminate(
    sys: &AlgSystem,
    saturate_by: &[DiffPoly],
    opts: &ElimOptions,
) -> Result<Elimination> {
    let mut sat: Vec<DiffPoly> = saturate_by
        .iter()
        .filter(|h| {
            h.dervars()
                .iter()
                .any(|d| sys.elim_vars.contains(d) || sys.keep_vars.contains(d))
        })
        .cloned()
        .collect();
    sat.dedup();
    let use_z = !sat.is_empty();
    let mut main: Vec<Option<DerVar>> = Vec::new();
    if use_z {
        main.push(None);
    }
    main.extend(sys.elim_vars.iter().map(|d| Some(*d)));
    let n_elim = main.len();
    main.extend(sys.keep_vars.iter().map(|d| Some(*d)));
    let mut all: Vec<&DiffPoly> = sys.polys.iter().collect();
    all.extend(sat.iter());
    let map = VarMap::new(&sys.ring, main, &all);
    for d in map.params() {
        if sys.ring.kind(d.var as usize) == VarKind::Main {
            return Err(Error::InvalidInput(format!(
                "`{}` is neither eliminated nor kept",
                sys.ring.dervar_name(*d)
            )));
        }
    }
    let order = match opts.order {
        ElimOrder::Lex => TermOrder::Lex,
        ElimOrder::Block => TermOrder::BlockGrevLex(n_elim),
    };
    let mut input = Vec::new();
    for p in &sys.polys {
        input.push(map.to_gpoly(p, order)?);
    }
    if use_z {
        let mut h = DiffPoly::one(&sys.ring);
        for s in &sat {
            h = &h * s;
        }
        let hg = map.to_gpoly(&h, order)?;
        let mut terms: Vec<(Vec<u16>, IPoly)> = hg
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[0] += 1;
                (e2, c.clone())
            })
            .collect();
        terms.push((vec![0; map.nmain()], IPoly::one(map.nparams()).neg()));
        input.push(GPoly::from_terms(order, terms));
    }
    let mut engine = groebner::Engine::new(order, opts.limits.clone(), opts.trace);
    let basis = engine.run(input)?;
    let inconsistent = basis.len() == 1 && basis[0].lm().iter().all(|&e| e == 0);
    let generators = if inconsistent {
        vec![DiffPoly::one(&sys.ring)]
    } else {
        basis
            .iter()
            .filter(|g| !g.involves_any(0..n_elim))
            .map(|g| map.from_gpoly(g).map(|p| p.normalize_unit()))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(Elimination {
        generators,
        inconsistent,
        basis_size: basis.len(),
        pairs_reduced: engine.stats.pairs_reduced,
        trace: std::mem::take(&mut engine.stats.trace),
    })
}

/// A reduced Gröbner basis over `K = Q(params)` in the listed variables,
/// usable for ideal membership.
pub struct GroebnerBasis {
    map: VarMap,
    engine: groebner::Engine,
    basis: Vec<GPoly>,
}

impl GroebnerBasis {
    /// Computes a basis in `vars` (highest first); every other derivative
    /// occurring in `polys` is a coefficient parameter.
    pub fn compute(
        polys: &[DiffPoly],
        vars: &[DerVar],
        order: TermOrder,
        limits: Limits,
    ) -> Result<GroebnerBasis> {
        let ring = polys
            .first()
            .map(|p| p.ring().clone())
            .ok_or_else(|| Error::InvalidInput("empty system".into()))?;
        let refs: Vec<&DiffPoly> = polys.iter().collect();
        let map = VarMap::new(&ring, vars.iter().map(|d| Some(*d)).collect(), &refs);
        let input = polys
            .iter()
            .map(|p| map.to_gpoly(p, order))
            .collect::<Result<Vec<_>>>()?;
        let mut engine = groebner::Engine::new(order, limits, false);
        let basis = engine.run(input)?;
        let mut e2 = groebner::Engine::new(order, Limits::default(), false);
        e2.load(basis.clone());
        Ok(GroebnerBasis {
            map,
            engine: e2,
            basis,
        })
    }

    pub fn generators(&self) -> Result<Vec<DiffPoly>> {
        self.basis.iter().map(|g| self.map.from_gpoly(g)).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].lm().iter().all(|&e| e == 0)
    }

    /// Normal form up to a nonzero factor in `K`. Every derivative of `p`
    /// outside the basis variables must already be a parameter of the basis.
    pub fn normal_form(&self, p: &DiffPoly) -> Result<DiffPoly> {
        for d in p.dervars() {
            if !self.map.main_index.contains_key(&d) && !self.map.param_index.contains_key(&d) {
                return Err(Error::InvalidInput(format!(
                    "`{}` is not a variable of the basis",
                    self.map.ring.dervar_name(d)
                )));
            }
        }
        let g = self.map.to_gpoly(p, self.engine.order())?;
        let r = self.engine.normal_form(&g)?;
        self.map.from_gpoly(&r)
    }

    pub fn contains(&self, p: &DiffPoly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn satisfies_buchberger(&self) -> Result<bool> {
        groebner::is_groebner(&self.basis, self.engine.order())
    }
}

fn all_vars_map(polys: &[&DiffPoly]) -> VarMap {
    let ring = polys[0].ring().clone();
    VarMap::new(&ring, Vec::new(), polys)
}

/// Polynomial gcd over the base field, all derivatives treated as
/// independent variables. Normalized with [`DiffPoly::normalize_unit`].
pub fn alg_gcd(p: &DiffPoly, q: &DiffPoly) -> Result<DiffPoly> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let map = all_vars_map(&[p, q]);
    let a = map.to_gpoly(p, TermOrder::Lex)?;
    let b = map.to_gpoly(q, TermOrder::Lex)?;
    let ia = a
        .terms
        .first()
        .map(|t| t.1.clone())
        .unwrap_or_else(|| IPoly::zero(map.nparams()));
    let ib = b
        .terms
        .first()
        .map(|t| t.1.clone())
        .unwrap_or_else(|| IPoly::zero(map.nparams()));
    let g = gcd::gcd(&ia, &ib);
    Ok(map.ipoly_to_diff(&g).normalize_unit())
}

/// Content and primitive part with respect to the derivative `d`:
/// `content · primitive = p`, the primitive part having no nonconstant
/// factor free of `d` and positive leading coefficient in the canonical
/// order.
pub fn content_primitive(p: &DiffPoly, d: DerVar) -> Result<(DiffPoly, DiffPoly)> {
    if p.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let map = all_vars_map(&[p]);
    let ip = map.to_gpoly(p, TermOrder::Lex)?.terms[0].1.clone();
    let prim = match map.param_index.get(&d) {
        Some(&x) => gcd::primitive_in(&ip, x),
        None => ip.clone().with_positive_lc(),
    };
    let mut prim = map.ipoly_to_diff(&prim).normalize_unit();
    if !p.contains(d) {
        prim = DiffPoly::one(p.ring());
    }
    let content = divide_exact(p, &prim)?;
    Ok((content, prim))
}

/// Exact quotient `p / q` over the base field.
pub fn divide_exact(p: &DiffPoly, q: &DiffPoly) -> Result<DiffPoly> {
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if p.is_zero() {
        return Ok(p.clone());
    }
    let map = all_vars_map(&[p, q]);
    let a = map.to_gpoly(p, TermOrder::Lex)?.terms[0].1.clone();
    let b = map.to_gpoly(q, TermOrder::Lex)?.terms[0].1.clone();
    let quo = a.exact_div(&b).ok_or(Error::InexactDivision)?;
    let quo = map.ipoly_to_diff(&quo);
    // fix the base-field scalar lost when clearing denominators
    let back = &quo * q;
    let (m, c) = p.canonical_leading().expect("nonzero");
    let c2 = back.coeff_of(m);
    let s = c.div(&c2).ok_or(Error::InexactDivision)?;
    let quo = quo.scale(&s);
    if &(&quo * q) != p {
        return Err(Error::InexactDivision);
    }
    Ok(quo)
}

/// Squarefree part in the derivative `d` (primitive part divided by its gcd
/// with the partial derivative).
pub fn squarefree_part(p: &DiffPoly, d: DerVar) -> Result<DiffPoly> {
    let (_, prim) = content_primitive(p, d)?;
    let dp = prim.partial(d);
    if dp.is_zero() {
        return Ok(prim);
    }
    let g = alg_gcd(&prim, &dp)?;
    Ok(divide_exact(&prim, &g)?.normalize_unit())
}

/// Removes every factor that involves only parameters (and `t`), then the
/// rational content.
pub fn strip_parameter_content(p: &DiffPoly) -> Result<DiffPoly> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    let ring = p.ring();
    let main: Vec<Option<DerVar>> = p
        .dervars()
        .into_iter()
        .filter(|d| ring.is_main(*d))
        .map(Some)
        .collect();
    if main.is_empty() {
        return Ok(DiffPoly::one(ring));
    }
    let map = VarMap::new(ring, main, &[p]);
    let g = map.to_gpoly(p, TermOrder::Lex)?;
    let content = gcd::gcd_many(g.terms.iter().map(|(_, c)| c.clone()).collect());
    if content.is_constant() {
        return Ok(p.normalize_unit());
    }
    let prim = GPoly {
        terms: g
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.exact_div(&content).expect("content divides")))
            .collect(),
    };
    Ok(map.from_gpoly(&prim)?.normalize_unit())
}

/// Fraction-free Bareiss determinant.
pub fn det_bareiss(mut m: Vec<Vec<IPoly>>) -> IPoly {
    let n = m.len();
    let nv = m.iter().flatten().map(|p| p.nvars()).max().unwrap_or(0);
    if n == 0 {
        return IPoly::one(nv);
    }
    let mut sign = false;
    let mut prev = IPoly::one(nv);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return IPoly::zero(nv);
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = IPoly::zero(nv);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// Least common integer and `Z[t]` denominators of the coefficients.
fn denominators(p: &DiffPoly) -> (BigInt, ZPoly) {
    let mut den_l = BigInt::one();
    let mut den_t = ZPoly::one();
    for c in p.terms().values() {
        den_l = den_l.lcm(c.scalar().denom());
        let d = c.denominator_poly();
        if !d.is_one() {
            let g = den_t.gcd(d);
            den_t = den_t.mul(&d.div_exact(&g).expect("gcd divides"));
        }
    }
    (den_l, den_t)
}

/// Determinant of a matrix of differential polynomials, all derivatives
/// treated as independent variables.
pub fn det(m: &[Vec<DiffPoly>]) -> Result<DiffPoly> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    let refs: Vec<&DiffPoly> = m.iter().flatten().collect();
    let map = all_vars_map(&refs);
    let mut scale = Coeff::one();
    let mut rows = Vec::with_capacity(n);
    for r in m {
        let mut l = BigInt::one();
        let mut t = ZPoly::one();
        for p in r {
            let (dl, dt) = denominators(p);
            l = l.lcm(&dl);
            if !dt.is_one() {
                let g = t.gcd(&dt);
                t = t.mul(&dt.div_exact(&g).expect("gcd divides"));
            }
        }
        let f = Coeff::from_zpolys(&t.scale(&l), &ZPoly::one());
        scale = scale.mul(&f);
        let mut row = Vec::with_capacity(n);
        for p in r {
            let g = map.to_gpoly(&p.scale(&f), TermOrder::Lex)?;
            row.push(
                g.terms
                    .first()
                    .map(|t| t.1.clone())
                    .unwrap_or_else(|| IPoly::zero(map.nparams())),
            );
        }
        rows.push(row);
    }
    let d = map.ipoly_to_diff(&det_bareiss(rows));
    Ok(d.scale(&scale.inv().expect("nonzero")))
}
