//! Defining relations of the differential Chow quasi-variety for leading
//! differential degree one.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::algelim::{GroebnerBasis, Limits, TermOrder};
use crate::chow::coeff_name;
use crate::diffring::{DerVar, DiffPoly, Monomial, Ring, RingContext, VarKind};
use crate::error::{Error, Result};
use crate::field::{BaseField, Coeff};
use crate::ranking::Ranking;

/// Index `(n, d, h, g, m)` of a δ-cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChowIndex {
    pub n: usize,
    pub d: usize,
    pub h: u32,
    pub g: u32,
    pub m: u32,
}

impl FromStr for ChowIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<ChowIndex> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| {
                Error::InvalidInput(format!("index `{s}` must be five integers n,d,h,g,m"))
            })?;
        let [n, d, h, g, m] = parts[..] else {
            return Err(Error::InvalidInput(format!(
                "index `{s}` must have five entries"
            )));
        };
        if d as usize >= n as usize || n == 0 || m == 0 {
            return Err(Error::InvalidInput(format!(
                "index `{s}` needs 0 ≤ d < n and m ≥ 1"
            )));
        }
        Ok(ChowIndex {
            n: n as usize,
            d: d as usize,
            h,
            g,
            m,
        })
    }
}

impl fmt::Display for ChowIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.n, self.d, self.h, self.g, self.m)
    }
}

/// A δ-polynomial with one unknown coefficient per support monomial.
#[derive(Clone, Debug)]
pub struct ChowTemplate {
    pub index: ChowIndex,
    /// Holds `u_{ij}`, the unknowns `a_k`, the skew entries `s{i}_{jk}`
    /// and `y_1..y_n`, all as main variables.
    pub ring: Ring,
    pub support: Vec<Monomial>,
    pub coeffs: Vec<String>,
    pub poly: DiffPoly,
}

fn skew_name(i: usize, j: usize, k: usize) -> String {
    format!("s{i}_{j}_{k}")
}

/// Ring of the `u`'s of an index, optionally followed by the unknowns,
/// skew entries and `y`'s.
fn template_ring(index: ChowIndex, nunknowns: usize) -> Result<Ring> {
    let mut vars: Vec<(String, VarKind)> = Vec::new();
    for i in 0..=index.d {
        for j in 0..=index.n {
            vars.push((coeff_name(i, j), VarKind::Main));
        }
    }
    for k in 1..=nunknowns {
        vars.push((format!("a{k}"), VarKind::Main));
    }
    if nunknowns > 0 {
        for i in 0..=index.d {
            for j in 0..=index.n {
                for k in j + 1..=index.n {
                    vars.push((skew_name(i, j, k), VarKind::Main));
                }
            }
        }
        for j in 1..=index.n {
            vars.push((format!("y{j}"), VarKind::Main));
        }
    }
    RingContext::new(BaseField::RationalsQ, vars)
}

/// Ring of the `u`'s for an index; support monomials are parsed here.
pub fn support_ring(index: ChowIndex) -> Result<Ring> {
    template_ring(index, 0)
}

/// Builds the template `Σ a_k M_k` after checking each support monomial:
/// degree `m` in every block, orders at most `h`, degree at most `g` in
/// the order-`h` derivatives of `u_0`; `u00^{(h)}` must occur.
pub fn build_template(index: ChowIndex, support: &[DiffPoly]) -> Result<ChowTemplate> {
    if index.g != 1 {
        return Err(Error::InvalidInput(
            "only leading differential degree g = 1 is supported".into(),
        ));
    }
    if support.is_empty() {
        return Err(Error::InvalidInput("empty support".into()));
    }
    let ring = template_ring(index, support.len())?;
    let blocks: Vec<Vec<usize>> = (0..=index.d)
        .map(|i| (0..=index.n).map(|j| i * (index.n + 1) + j).collect())
        .collect();
    let mut monos = Vec::with_capacity(support.len());
    let mut seen = BTreeSet::new();
    let mut max_order: HashMap<usize, u32> = HashMap::new();
    for s in support {
        if s.nterms() != 1 {
            return Err(Error::InvalidInput(format!(
                "support entry `{s}` is not a monomial"
            )));
        }
        let m = s
            .embed(&ring)?
            .terms()
            .keys()
            .next()
            .cloned()
            .expect("one term");
        for &(dv, _) in m.factors() {
            let v = dv.var as usize;
            if v >= blocks.len() * (index.n + 1) {
                return Err(Error::InvalidInput(format!(
                    "`{}` is not a coefficient variable",
                    ring.name(v)
                )));
            }
            if dv.order > index.h {
                return Err(Error::InvalidInput(format!(
                    "`{}` exceeds order {}",
                    ring.dervar_name(dv),
                    index.h
                )));
            }
            let e = max_order.entry(v).or_insert(0);
            *e = (*e).max(dv.order);
        }
        for (i, b) in blocks.iter().enumerate() {
            let deg: u32 = m
                .factors()
                .iter()
                .filter(|(dv, _)| b.contains(&(dv.var as usize)))
                .map(|(_, e)| e)
                .sum();
            if deg != index.m {
                return Err(Error::InvalidInput(format!(
                    "`{s}` has degree {deg} in block {i}, expected {}",
                    index.m
                )));
            }
        }
        let lead: u32 = m
            .factors()
            .iter()
            .filter(|(dv, _)| blocks[0].contains(&(dv.var as usize)) && dv.order == index.h)
            .map(|(_, e)| e)
            .sum();
        if lead > index.g {
            return Err(Error::InvalidInput(format!(
                "`{s}` has degree {lead} in the order-{} derivatives of u_0, above g = {}",
                index.h, index.g
            )));
        }
        if !seen.insert(m.clone()) {
            return Err(Error::InvalidInput(format!("`{s}` listed twice")));
        }
        monos.push(m);
    }
    for (&v, &o) in &max_order {
        if o != index.h {
            return Err(Error::InvalidInput(format!(
                "`{}` occurs only up to order {o}, not {}",
                ring.name(v),
                index.h
            )));
        }
    }
    let top = DerVar::new(0, index.h);
    if !monos.iter().any(|m| m.degree_in(top) == index.g) {
        return Err(Error::DegenerateTemplate(format!(
            "no support monomial carries {}",
            ring.dervar_name(top)
        )));
    }
    let coeffs: Vec<String> = (1..=monos.len()).map(|k| format!("a{k}")).collect();
    let mut poly = DiffPoly::zero(&ring);
    for (k, m) in monos.iter().enumerate() {
        let a = DiffPoly::var(&ring, &coeffs[k], 0)?;
        poly = &poly + &a.mul_monomial(m);
    }
    Ok(ChowTemplate {
        index,
        ring,
        support: monos,
        coeffs,
        poly,
    })
}

impl ChowTemplate {
    pub fn coeff_vars(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .map(|a| self.ring.var(a).expect("unknown"))
            .collect()
    }

    fn u_vars(&self) -> Vec<usize> {
        (0..(self.index.d + 1) * (self.index.n + 1)).collect()
    }

    fn block(&self, i: usize) -> Vec<usize> {
        let w = self.index.n + 1;
        (i * w..(i + 1) * w).collect()
    }

    /// Substitutes a point `a_k ↦ values[k]`; the result lives in the ring
    /// of the `u`'s.
    pub fn instantiate(&self, values: &[Coeff]) -> Result<DiffPoly> {
        if values.len() != self.coeffs.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} unknowns",
                values.len(),
                self.coeffs.len()
            )));
        }
        let out = support_ring(self.index)?;
        let mut p = DiffPoly::zero(&out);
        for (m, c) in self.support.iter().zip(values) {
            p = &p + &DiffPoly::term(&self.ring, m.clone(), c.clone()).embed(&out)?;
        }
        Ok(p)
    }

    /// Coefficients of `f` on the template support, when `f` is supported
    /// there.
    pub fn coordinates(&self, f: &DiffPoly) -> Result<Vec<Coeff>> {
        let f = f.embed(&self.ring)?;
        for m in f.terms().keys() {
            if !self.support.contains(m) {
                return Err(Error::InvalidInput(format!(
                    "term {} lies outside the support",
                    DiffPoly::term(&self.ring, m.clone(), Coeff::one())
                )));
            }
        }
        Ok(self.support.iter().map(|m| f.coeff_of(m)).collect())
    }
}

/// Relations in the unknowns with the stages they come from.
#[derive(Clone, Debug)]
pub struct QuasiVarietyPresentation {
    pub template: ChowTemplate,
    /// `R_1..R_υ`, unreduced.
    pub relations: Vec<DiffPoly>,
    /// Number of homogeneity relations; they come first.
    pub homogeneity_count: usize,
    /// Number of relations from the hyperplanes `P_σ`; they follow.
    pub hyperplane_count: usize,
    /// Solved linear relations `a_k = …` from the first two stages.
    pub linear_solution: Vec<(String, DiffPoly)>,
    /// Remaining relations after substituting the linear solution,
    /// normalized and deduplicated.
    pub reduced: Vec<DiffPoly>,
    /// Coefficients of the initial of the template w.r.t. `u00` highest.
    pub excluded: Vec<DiffPoly>,
}

impl QuasiVarietyPresentation {
    /// True when every relation vanishes at `values` and some excluded
    /// coordinate does not.
    pub fn contains_point(&self, values: &[Coeff]) -> Result<bool> {
        let assign = point_assignment(&self.template, values)?;
        for r in &self.relations {
            if !r.eval_exact(&assign).map(|x| x.is_zero())? {
                return Ok(false);
            }
        }
        let mut excluded = true;
        for e in &self.excluded {
            if !e.eval_exact(&assign)?.is_zero() {
                excluded = false;
            }
        }
        Ok(!excluded)
    }

    /// Values of every relation at a point.
    pub fn relation_values(&self, values: &[Coeff]) -> Result<Vec<Coeff>> {
        let assign = point_assignment(&self.template, values)?;
        self.relations
            .iter()
            .map(|r| r.eval_exact(&assign))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "index": self.template.index.to_string(),
            "template": self.template.poly.to_text(),
            "relations": self.relations.iter().map(DiffPoly::to_text).collect::<Vec<_>>(),
            "stages": {
                "homogeneity": self.homogeneity_count,
                "hyperplanes": self.hyperplane_count,
                "skew": self.relations.len() - self.homogeneity_count - self.hyperplane_count,
            },
            "linear_solution": self.linear_solution.iter()
                .map(|(a, e)| json!([a, e.to_text()])).collect::<Vec<_>>(),
            "reduced": self.reduced.iter().map(DiffPoly::to_text).collect::<Vec<_>>(),
            "excluded": self.excluded.iter().map(DiffPoly::to_text).collect::<Vec<_>>(),
        })
    }
}

/// Constant values for the unknowns; their derivatives vanish.
fn point_assignment<'a>(
    t: &'a ChowTemplate,
    values: &'a [Coeff],
) -> Result<impl Fn(DerVar) -> Option<Coeff> + 'a> {
    if values.len() != t.coeffs.len() {
        return Err(Error::InvalidInput(format!(
            "{} values for {} unknowns",
            values.len(),
            t.coeffs.len()
        )));
    }
    let vars = t.coeff_vars();
    Ok(move |d: DerVar| {
        let k = vars.iter().position(|&v| v == d.var as usize)?;
        Some(if d.order == 0 {
            values[k].clone()
        } else {
            Coeff::zero()
        })
    })
}

/// Coefficients of `p` regarded as a polynomial in the derivatives of
/// `vars`, keyed by monomial.
fn coefficients_in(p: &DiffPoly, vars: &[usize]) -> BTreeMap<Monomial, DiffPoly> {
    let mut out: BTreeMap<Monomial, DiffPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let inside = m.filter(|d| vars.contains(&(d.var as usize)));
        let rest = m.filter(|d| !vars.contains(&(d.var as usize)));
        let t = DiffPoly::term(p.ring(), rest, c.clone());
        let e = out
            .entry(inside)
            .or_insert_with(|| DiffPoly::zero(p.ring()));
        *e = &*e + &t;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn push_relations(out: &mut Vec<DiffPoly>, rels: impl IntoIterator<Item = DiffPoly>) {
    for r in rels {
        let r = r.normalize_unit();
        if !r.is_zero() && !out.contains(&r) {
            out.push(r);
        }
    }
}

/// Solves linear forms in the unknowns (no derivatives), pivoting on the
/// highest-numbered unknown; returns `a_pivot ↦ expression`.
fn solve_linear(t: &ChowTemplate, rels: &[DiffPoly]) -> Result<Vec<(usize, DiffPoly)>> {
    let vars = t.coeff_vars();
    let ncols = vars.len();
    let mut rows: Vec<Vec<Coeff>> = Vec::new();
    for r in rels {
        let mut row = vec![Coeff::zero(); ncols];
        for (m, c) in r.terms() {
            let [(d, 1)] = m.factors() else {
                return Err(Error::Internal(format!("relation {r} is not linear")));
            };
            let k = vars
                .iter()
                .position(|&v| v == d.var as usize)
                .filter(|_| d.order == 0)
                .ok_or_else(|| Error::Internal(format!("relation {r} is not linear")))?;
            row[k] = c.clone();
        }
        rows.push(row);
    }
    let mut pivots: Vec<(usize, Vec<Coeff>)> = Vec::new();
    for mut row in rows {
        for (p, prow) in &pivots {
            if !row[*p].is_zero() {
                let f = row[*p].clone();
                for k in 0..ncols {
                    row[k] = row[k].sub(&f.mul(&prow[k]));
                }
            }
        }
        let Some(p) = (0..ncols).rev().find(|&k| !row[k].is_zero()) else {
            continue;
        };
        let inv = row[p].inv().expect("nonzero pivot");
        for x in row.iter_mut() {
            *x = x.mul(&inv);
        }
        for (_, prow) in pivots.iter_mut() {
            if !prow[p].is_zero() {
                let f = prow[p].clone();
                for k in 0..ncols {
                    prow[k] = prow[k].sub(&f.mul(&row[k]));
                }
            }
        }
        pivots.push((p, row));
    }
    pivots.sort_by_key(|(p, _)| *p);
    let mut out = Vec::new();
    for (p, row) in pivots {
        let mut e = DiffPoly::zero(&t.ring);
        for (k, c) in row.iter().enumerate() {
            if k != p && !c.is_zero() {
                e = &e - &DiffPoly::dervar(&t.ring, DerVar::new(vars[k], 0)).scale(c);
            }
        }
        out.push((vars[p], e));
    }
    Ok(out)
}

fn substitute_solution(p: &DiffPoly, sol: &[(usize, DiffPoly)]) -> Result<DiffPoly> {
    let assign: HashMap<usize, DiffPoly> = sol.iter().cloned().collect();
    p.substitute_diff(&assign)
}

/// `num / A0^exp`.
#[derive(Clone)]
struct Frac {
    num: DiffPoly,
    exp: u32,
}

/// Generates the relations of the quasi-variety for a `g = 1` template.
pub fn cv1_generate(t: &ChowTemplate) -> Result<QuasiVarietyPresentation> {
    let ring = &t.ring;
    let idx = t.index;
    let (n, d, h) = (idx.n, idx.d, idx.h);
    let uvars = t.u_vars();
    let u = |i: usize, j: usize, k: u32| DerVar::new(i * (n + 1) + j, k);

    // stage 1: δ-homogeneity of degree m in each block
    let lam_name = "lambda";
    let ext = ring.extend(vec![(lam_name, VarKind::Main)])?;
    let lam = DiffPoly::var(&ext, lam_name, 0)?;
    let lam_v = ext.var_or_err(lam_name)?;
    let fe = t.poly.embed(&ext)?;
    let mut homog = Vec::new();
    for i in 0..=d {
        let mut assign = HashMap::new();
        for v in t.block(i) {
            assign.insert(v, &lam * &DiffPoly::dervar(&ext, DerVar::new(v, 0)));
        }
        let diff = &fe.substitute_diff(&assign)? - &(&lam.pow(idx.m) * &fe);
        let mut keys = uvars.clone();
        keys.push(lam_v);
        let rels: Vec<DiffPoly> = coefficients_in(&diff, &keys)
            .into_values()
            .map(|c| c.embed(ring))
            .collect::<Result<_>>()?;
        push_relations(&mut homog, rels);
    }
    let sol1 = solve_linear(t, &homog)?;
    let f1 = substitute_solution(&t.poly, &sol1)?;

    // stage 2: F_1 = A_0 u00^{(h)} + Σ A_j u0j^{(h)} + B
    let a_of = |j: usize| f1.coeff_in(u(0, j, h), 1);
    let a0 = a_of(0);
    if a0.is_zero() {
        return Err(Error::DegenerateTemplate(
            "the homogeneous part has no u00^{(h)} term".into(),
        ));
    }
    let aj: Vec<DiffPoly> = (0..=n).map(a_of).collect();
    for j in 0..=n {
        if f1.degree(u(0, j, h)) > 1 {
            return Err(Error::InvalidInput(
                "template is not linear in u_0^{(h)}".into(),
            ));
        }
    }

    // stage 3: u_{σ0} A_0 + Σ u_{σj} A_j = 0
    let mut hyper = Vec::new();
    for sigma in 1..=d {
        let mut e = DiffPoly::zero(ring);
        for (j, a) in aj.iter().enumerate() {
            e = &e + &(&DiffPoly::dervar(ring, u(sigma, j, 0)) * a);
        }
        push_relations(&mut hyper, coefficients_in(&e, &uvars).into_values());
    }
    let mut linear = homog.clone();
    linear.extend(hyper.iter().cloned());
    let sol = solve_linear(t, &linear)?;

    // stage 4: F_1(S^0 Y, …, S^d Y) at y_j^{(k)} = ξ_j^{(k)}
    let top = u(0, 0, h);
    // γ = Γ / A_0
    let mut gamma = DiffPoly::zero(ring);
    for j in 1..=n {
        gamma = &gamma - &(&aj[j] * &DiffPoly::dervar(ring, u(0, j, h)));
    }
    let b = &f1
        - &{
            let mut s = DiffPoly::zero(ring);
            for (j, a) in aj.iter().enumerate() {
                s = &s + &(a * &DiffPoly::dervar(ring, u(0, j, h)));
            }
            s
        };
    gamma = &gamma - &b;
    let da0 = a0.derivative();
    let at_gamma = |p: &DiffPoly, exp: u32| -> Frac {
        let cs = p.coeffs_in(top);
        let deg = cs.len().saturating_sub(1) as u32;
        let mut num = DiffPoly::zero(ring);
        for (k, c) in cs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            num = &num + &(&(c * &gamma.pow(k as u32)) * &a0.pow(deg - k as u32));
        }
        Frac {
            num,
            exp: exp + deg,
        }
    };
    let ys: Vec<usize> = (1..=n)
        .map(|j| ring.var(&format!("y{j}")).expect("y"))
        .collect();
    let svars: Vec<usize> = (0..=d)
        .flat_map(|i| (0..=n).flat_map(move |j| (j + 1..=n).map(move |k| (i, j, k))))
        .map(|(i, j, k)| ring.var(&skew_name(i, j, k)).expect("skew"))
        .collect();
    let mut assign = HashMap::new();
    for i in 0..=d {
        for j in 0..=n {
            let mut e = DiffPoly::zero(ring);
            for k in 0..=n {
                let entry = match j.cmp(&k) {
                    std::cmp::Ordering::Less => DiffPoly::var(ring, &skew_name(i, j, k), 0)?,
                    std::cmp::Ordering::Greater => {
                        DiffPoly::var(ring, &skew_name(i, k, j), 0)?.neg_poly()
                    }
                    std::cmp::Ordering::Equal => continue,
                };
                let yk = if k == 0 {
                    DiffPoly::one(ring)
                } else {
                    DiffPoly::dervar(ring, DerVar::new(ys[k - 1], 0))
                };
                e = &e + &(&entry * &yk);
            }
            assign.insert(i * (n + 1) + j, e);
        }
    }
    let skewed = f1.substitute_diff(&assign)?;
    let chis = coefficients_in(&skewed, &svars);
    let kmax = chis
        .values()
        .map(|c| c.order_wrt_set(&ys).finite().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let mut xi: Vec<Vec<Frac>> = Vec::with_capacity(n);
    for j in 1..=n {
        let mut ks = vec![at_gamma(&aj[j], 1)];
        for k in 1..=kmax as usize {
            let prev = &ks[k - 1];
            let next =
                &(&prev.num.derivative() * &a0) - &(&prev.num * &da0).scale_int(prev.exp as i64);
            ks.push(at_gamma(&next, prev.exp + 1));
        }
        xi.push(ks);
    }
    let mut skew_rels = Vec::new();
    for chi in chis.values() {
        let mut terms: Vec<(Monomial, DiffPoly, u32)> = Vec::new();
        let mut emax = 0;
        for (mono, c) in chi.terms() {
            let mut num = DiffPoly::constant(ring, c.clone());
            let mut exp = 0;
            let mut rest = Vec::new();
            for &(dv, e) in mono.factors() {
                if let Some(j) = ys.iter().position(|&y| y == dv.var as usize) {
                    let fr = &xi[j][dv.order as usize];
                    num = &num * &fr.num.pow(e);
                    exp += fr.exp * e;
                } else {
                    rest.push((dv, e));
                }
            }
            emax = emax.max(exp);
            terms.push((Monomial::from_factors(rest), num, exp));
        }
        let mut p = DiffPoly::zero(ring);
        for (rest, num, exp) in terms {
            p = &p + &(&num * &a0.pow(emax - exp)).mul_monomial(&rest);
        }
        push_relations(&mut skew_rels, coefficients_in(&p, &uvars).into_values());
    }

    let mut relations = homog.clone();
    relations.extend(hyper.iter().cloned());
    let homogeneity_count = homog.len();
    let hyperplane_count = hyper.len();
    let mut reduced = Vec::new();
    for r in &skew_rels {
        relations.push(r.clone());
        push_relations(&mut reduced, [substitute_solution(r, &sol)?]);
    }

    // excluded locus: coefficients of the initial under u00 highest
    let mut order: Vec<usize> = ring.main_vars().filter(|v| !uvars.contains(v)).collect();
    order.extend(uvars.iter().rev());
    let rk = Ranking::elimination(ring, &order)?;
    let init = rk.decompose(&t.poly)?.initial;
    let mut excluded = Vec::new();
    push_relations(&mut excluded, coefficients_in(&init, &uvars).into_values());

    Ok(QuasiVarietyPresentation {
        template: t.clone(),
        relations,
        homogeneity_count,
        hyperplane_count,
        linear_solution: sol
            .into_iter()
            .map(|(v, e)| (ring.name(v).to_string(), e))
            .collect(),
        reduced,
        excluded,
    })
}

fn prolonged_system(rels: &[DiffPoly], ext: &Ring, prolong: u32) -> Result<Vec<DiffPoly>> {
    let mut sys = Vec::new();
    for r in rels {
        for k in 0..=prolong {
            let x = r.differentiate(k).embed(ext)?;
            if !x.is_zero() && !sys.contains(&x) {
                sys.push(x);
            }
        }
    }
    Ok(sys)
}

fn basis_of(sys: &[DiffPoly]) -> Result<GroebnerBasis> {
    let mut vars: Vec<DerVar> = sys
        .iter()
        .flat_map(|s| s.dervars())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    vars.reverse();
    GroebnerBasis::compute(sys, &vars, TermOrder::GrevLex, Limits::default())
}

/// For each `p`, whether it vanishes on `V(rels) \ V(f)`, decided
/// algebraically with the relations and their first `prolong` derivatives:
/// first by membership in `(rels, z·f − 1)`, then by the radical test with
/// an extra `w·p − 1`. A `true` answer is a proof; `false` may be
/// inconclusive when higher derivatives are needed.
pub fn vanishes_off(
    rels: &[DiffPoly],
    f: &DiffPoly,
    ps: &[DiffPoly],
    prolong: u32,
) -> Result<Vec<bool>> {
    let ring = f.ring();
    let ext = ring.extend(vec![("z_sat", VarKind::Main), ("w_rad", VarKind::Main)])?;
    let z = DiffPoly::var(&ext, "z_sat", 0)?;
    let w = DiffPoly::var(&ext, "w_rad", 0)?;
    let one = DiffPoly::one(&ext);
    let mut sys = prolonged_system(rels, &ext, prolong)?;
    sys.push(&(&z * &f.embed(&ext)?) - &one);
    let gb = basis_of(&sys)?;
    let mut out = Vec::with_capacity(ps.len());
    for p in ps {
        let pe = p.embed(&ext)?;
        let member = pe
            .dervars()
            .iter()
            .all(|d| sys.iter().any(|s| s.contains(*d)))
            && gb.contains(&pe)?;
        if member {
            out.push(true);
            continue;
        }
        let mut with = sys.clone();
        with.push(&(&w * &pe) - &one);
        out.push(basis_of(&with)?.is_unit());
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
