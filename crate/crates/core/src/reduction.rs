//! Ritt reduction and δ-chains. Ritt–Wu characteristic sets give the
//! dimension and order of an ideal.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::diffring::{same_ring, DerVar, DiffPoly, Monomial};
use crate::error::{Error, Result};
use crate::ranking::{RankDecomposition, Ranking};

/// A δ-chain: leaders of distinct variables, each element partially reduced
/// with respect to the others, and no initial reducing to zero. Elements are
/// kept in nondecreasing rank.
#[derive(Clone, Debug)]
pub struct DiffChain {
    elements: Vec<DiffPoly>,
    decs: Vec<RankDecomposition>,
    ranking: Ranking,
}

/// Remainder of Ritt reduction together with the separant and initial
/// exponents `(d_i, e_i)` of `∏ S_i^{d_i} I_i^{e_i} · f ≡ r mod [A]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionCertificate {
    pub remainder: DiffPoly,
    pub multiplier_exponents: Vec<(u32, u32)>,
}

impl ReductionCertificate {
    /// The multiplier `∏ S_i^{d_i} I_i^{e_i}`.
    pub fn multiplier(&self, chain: &DiffChain) -> DiffPoly {
        let mut m = DiffPoly::one(chain.ranking.ring());
        for (i, &(d, e)) in self.multiplier_exponents.iter().enumerate() {
            m = &m * &chain.decs[i].separant.pow(d);
            m = &m * &chain.decs[i].initial.pow(e);
        }
        m
    }
}

/// Pseudo-remainder of `p` by `b` in the variable `v`. Returns the number of
/// multiplications by the leading coefficient; divisions by constant leading
/// coefficients are exact and not counted.
pub fn prem(p: &DiffPoly, b: &DiffPoly, v: DerVar) -> (DiffPoly, u32) {
    let db = b.degree(v);
    let lc = b.coeff_in(v, db);
    let inv = lc.constant_value().and_then(|c| c.inv());
    let mut r = p.clone();
    let mut steps = 0;
    while !r.is_zero() {
        let dr = r.degree(v);
        if dr < db {
            break;
        }
        let lr = r.coeff_in(v, dr);
        let shift = lr.mul_monomial(&Monomial::var(v, dr - db));
        match &inv {
            Some(c) => {
                r = &r - &(&shift * b).scale(c);
            }
            None => {
                r = &(&r * &lc) - &(&shift * b);
                steps += 1;
            }
        }
    }
    (r, steps)
}

impl DiffChain {
    /// Builds a chain after sorting by rank and checking the δ-chain
    /// conditions.
    pub fn new(elements: Vec<DiffPoly>, ranking: &Ranking) -> Result<DiffChain> {
        let chain = Self::build(elements, ranking)?;
        chain.validate()?;
        Ok(chain)
    }

    /// The empty chain, presenting the zero ideal.
    pub fn empty(ranking: &Ranking) -> DiffChain {
        DiffChain {
            elements: Vec::new(),
            decs: Vec::new(),
            ranking: ranking.clone(),
        }
    }

    fn build(mut elements: Vec<DiffPoly>, ranking: &Ranking) -> Result<DiffChain> {
        for e in &elements {
            if !same_ring(e.ring(), ranking.ring()) {
                return Err(Error::RingMismatch);
            }
        }
        elements.sort_by(|a, b| ranking.compare_rank(a, b));
        let decs = elements
            .iter()
            .map(|e| ranking.decompose(e))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::NoLeader => {
                    Error::InvalidChain("an element lies in the coefficient field".into())
                }
                other => other,
            })?;
        Ok(DiffChain {
            elements,
            decs,
            ranking: ranking.clone(),
        })
    }

    fn validate(&self) -> Result<()> {
        let ring = self.ranking.ring();
        for (i, a) in self.decs.iter().enumerate() {
            for (j, b) in self.decs.iter().enumerate() {
                if i != j && a.leader.var == b.leader.var {
                    return Err(Error::InvalidChain(format!(
                        "leaders {} and {} are derivatives of one variable",
                        ring.dervar_name(a.leader),
                        ring.dervar_name(b.leader)
                    )));
                }
            }
        }
        for (i, e) in self.elements.iter().enumerate() {
            for (j, b) in self.decs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let l = b.leader;
                if e.dervars()
                    .iter()
                    .any(|d| d.var == l.var && d.order > l.order)
                {
                    return Err(Error::InvalidChain(format!(
                        "`{}` is not partially reduced",
                        e
                    )));
                }
            }
        }
        for d in &self.decs {
            if self.reduce(&d.initial, true).remainder.is_zero() {
                return Err(Error::InvalidChain(format!(
                    "initial `{}` reduces to zero",
                    d.initial
                )));
            }
        }
        Ok(())
    }

    pub fn elements(&self) -> &[DiffPoly] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn decompositions(&self) -> &[RankDecomposition] {
        &self.decs
    }

    pub fn leaders(&self) -> Vec<DerVar> {
        self.decs.iter().map(|d| d.leader).collect()
    }

    pub fn initials(&self) -> Vec<DiffPoly> {
        self.decs.iter().map(|d| d.initial.clone()).collect()
    }

    pub fn separants(&self) -> Vec<DiffPoly> {
        self.decs.iter().map(|d| d.separant.clone()).collect()
    }

    /// True when `f` is reduced: it has no proper derivative of a leader
    /// and lower degree than the chain element in every leader.
    pub fn is_reduced(&self, f: &DiffPoly) -> bool {
        self.offending(f, true).is_empty()
    }

    fn offending(&self, f: &DiffPoly, full: bool) -> Vec<(DerVar, usize)> {
        let by_var: HashMap<u32, usize> = self
            .decs
            .iter()
            .enumerate()
            .map(|(i, d)| (d.leader.var, i))
            .collect();
        f.dervars()
            .into_iter()
            .filter_map(|v| {
                let &i = by_var.get(&v.var)?;
                let l = self.decs[i].leader;
                let bad = v.order > l.order
                    || (full && v.order == l.order && f.degree(v) >= self.decs[i].rank_degree);
                bad.then_some((v, i))
            })
            .collect()
    }

    fn reduce(&self, f: &DiffPoly, full: bool) -> ReductionCertificate {
        let mut exps = vec![(0u32, 0u32); self.len()];
        let mut r = f.clone();
        let mut prolonged: HashMap<(usize, u32), DiffPoly> = HashMap::new();
        loop {
            let off = self.offending(&r, full);
            let Some(&(v, i)) = off
                .iter()
                .max_by(|a, b| self.ranking.compare_dervar(a.0, b.0))
            else {
                break;
            };
            let l = self.decs[i].leader;
            if v.order > l.order {
                let k = v.order - l.order;
                let b = prolonged
                    .entry((i, k))
                    .or_insert_with(|| self.elements[i].differentiate(k));
                let (nr, steps) = prem(&r, b, v);
                exps[i].0 += steps;
                r = nr;
            } else {
                let (nr, steps) = prem(&r, &self.elements[i], v);
                exps[i].1 += steps;
                r = nr;
            }
        }
        ReductionCertificate {
            remainder: r,
            multiplier_exponents: exps,
        }
    }

    /// Ritt reduction, eliminating the highest offending derivative first.
    pub fn ritt_reduce(&self, f: &DiffPoly) -> Result<ReductionCertificate> {
        if !same_ring(f.ring(), self.ranking.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(self.reduce(f, true))
    }

    /// Partial reduction: only proper derivatives of leaders are removed.
    pub fn partial_reduce(&self, f: &DiffPoly) -> Result<ReductionCertificate> {
        if !same_ring(f.ring(), self.ranking.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(self.reduce(f, false))
    }

    /// Membership in `sat(A)`. Exact when the caller knows `A` to be the
    /// characteristic set of a prime ideal; otherwise a `true` answer is
    /// still sound and `false` may be spurious.
    pub fn sat_membership(&self, f: &DiffPoly) -> Result<bool> {
        Ok(self.ritt_reduce(f)?.remainder.is_zero())
    }

    /// Dimension and order with the parametric set. The order needs an orderly
    /// ranking.
    pub fn dim_order(&self) -> Result<DimOrder> {
        if !self.ranking.is_orderly() {
            return Err(Error::NotOrderly);
        }
        let ring = self.ranking.ring();
        let leader_vars: Vec<u32> = self.decs.iter().map(|d| d.leader.var).collect();
        let parametric_set = ring
            .main_vars()
            .filter(|v| !leader_vars.contains(&(*v as u32)))
            .map(|v| ring.name(v).to_string())
            .collect();
        Ok(DimOrder {
            dimension: ring.n_main() - self.len(),
            order: self.decs.iter().map(|d| d.leader.order).sum(),
            parametric_set,
        })
    }

    /// Order relative to the parametric set `u`: a characteristic set of
    /// the chain's elements under the block ranking `u ≺ rest`.
    pub fn relative_order(&self, u: &[&str]) -> Result<u32> {
        let ring = self.ranking.ring();
        let low: Vec<usize> = u
            .iter()
            .map(|n| ring.var_or_err(n))
            .collect::<Result<_>>()?;
        let high: Vec<usize> = ring.main_vars().filter(|v| !low.contains(v)).collect();
        let mut blocks = Vec::new();
        if !low.is_empty() {
            blocks.push(low.clone());
        }
        if !high.is_empty() {
            blocks.push(high);
        }
        let rk = Ranking::block(ring, &blocks)?;
        let c = charset(&self.elements, &rk)?;
        if c.decs
            .iter()
            .any(|d| low.contains(&(d.leader.var as usize)))
        {
            return Err(Error::InvalidInput(
                "given set is not a parametric set of the ideal".into(),
            ));
        }
        Ok(c.decs.iter().map(|d| d.leader.order).sum())
    }

    /// The chain with its elements moved to another ring by variable name.
    pub fn rebind(&self, ranking: &Ranking) -> Result<DiffChain> {
        let els = self
            .elements
            .iter()
            .map(|e| e.embed(ranking.ring()))
            .collect::<Result<Vec<_>>>()?;
        Self::build(els, ranking)
    }
}

/// Result of [`DiffChain::dim_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimOrder {
    pub dimension: usize,
    pub order: u32,
    pub parametric_set: Vec<String>,
}

/// Removes the rational content and, when parameters occur, any factor that
/// involves only parameters.
pub fn simplify(p: &DiffPoly) -> DiffPoly {
    let p = p.normalize_unit();
    if p.is_zero() || p.ring().n_main() == p.ring().nvars() {
        return p;
    }
    crate::algelim::strip_parameter_content(&p).unwrap_or(p)
}

fn canonical_cmp(r: &Ranking, a: &DiffPoly, b: &DiffPoly) -> Ordering {
    r.compare_rank(a, b)
        .then_with(|| a.nterms().cmp(&b.nterms()))
        .then_with(|| a.to_text().cmp(&b.to_text()))
}

/// Minimal-rank autoreduced subset, ties broken by term count then by
/// canonical print.
fn basic_set(work: &[DiffPoly], r: &Ranking) -> Vec<DiffPoly> {
    let mut sorted: Vec<&DiffPoly> = work.iter().collect();
    sorted.sort_by(|a, b| canonical_cmp(r, a, b));
    let mut chosen: Vec<DiffPoly> = Vec::new();
    for f in sorted {
        let ok = chosen.iter().all(|b| {
            let dec = r.decompose(b).expect("chain elements have leaders");
            let l = dec.leader;
            f.dervars()
                .iter()
                .all(|v| v.var != l.var || v.order <= l.order)
                && f.degree(l) < dec.rank_degree
        });
        if ok {
            chosen.push(f.clone());
        }
    }
    chosen
}

/// Ritt–Wu characteristic set of `set` under `r`.
pub fn charset(set: &[DiffPoly], r: &Ranking) -> Result<DiffChain> {
    let mut work: Vec<DiffPoly> = Vec::new();
    for f in set {
        if !same_ring(f.ring(), r.ring()) {
            return Err(Error::RingMismatch);
        }
        let s = simplify(f);
        if s.is_zero() {
            continue;
        }
        if r.leader(&s).is_none() {
            return Err(Error::UnitIdeal);
        }
        if !work.contains(&s) {
            work.push(s);
        }
    }
    if work.is_empty() {
        return Err(Error::InvalidInput("every input polynomial is zero".into()));
    }
    loop {
        let basic = basic_set(&work, r);
        let chain = DiffChain::build(basic.clone(), r)?;
        let mut added = false;
        let mut fresh = Vec::new();
        for f in &work {
            if basic.contains(f) {
                continue;
            }
            let rem = simplify(&chain.reduce(f, true).remainder);
            if rem.is_zero() {
                continue;
            }
            if r.leader(&rem).is_none() {
                return Err(Error::UnitIdeal);
            }
            if !work.contains(&rem) && !fresh.contains(&rem) {
                fresh.push(rem);
                added = true;
            }
        }
        if !added {
            return Ok(chain);
        }
        work.extend(fresh);
    }
}
