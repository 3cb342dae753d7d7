//! Buchberger's algorithm over `K[x]` with `K = Q(params)`, run fraction
//! free: coefficients are integer polynomials in the parameters and every
//! basis element is kept primitive.

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::gcd::{gcd, gcd_many};
use super::ipoly::{exps_divide, Exps, IPoly};
use crate::error::{Error, Result};

/// Monomial orders on the main variables; variable 0 is the largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermOrder {
    Lex,
    GrevLex,
    /// Graded reverse lexicographic on the first `k` variables, then on the
    /// rest; an elimination order for the first block.
    BlockGrevLex(usize),
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&x| x as u32).sum();
    let db: u32 = b.iter().map(|&x| x as u32).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl TermOrder {
    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        match *self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::GrevLex => grevlex(a, b),
            TermOrder::BlockGrevLex(k) => {
                grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..]))
            }
        }
    }
}

/// Polynomial in the main variables with coefficients in `Z[params]`,
/// terms sorted descending in the engine's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPoly {
    pub terms: Vec<(Exps, IPoly)>,
}

fn lcm(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn deg(a: &[u16]) -> u32 {
    a.iter().map(|&x| x as u32).sum()
}

fn disjoint(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl GPoly {
    pub fn from_terms(order: TermOrder, mut terms: Vec<(Exps, IPoly)>) -> GPoly {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Exps, IPoly)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => {
                    *lc = lc.add(&c);
                }
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        GPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Exps {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &IPoly {
        &self.terms[0].1
    }

    pub fn nterms_total(&self) -> usize {
        self.terms.iter().map(|(_, c)| c.nterms()).sum()
    }

    fn scale(&self, c: &IPoly) -> GPoly {
        if c.is_one() {
            return self.clone();
        }
        GPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x.mul(c)))
                .collect(),
        }
    }

    fn mul_term(&self, m: &[u16], c: &IPoly) -> GPoly {
        GPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), x.mul(c)))
                .collect(),
        }
    }

    fn sub(&self, o: &GPoly, order: TermOrder) -> GPoly {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), b[j].1.neg()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1.sub(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(e, c)| (e.clone(), c.neg())));
        GPoly { terms: out }
    }

    /// Divides out the gcd of all coefficients and makes the leading
    /// coefficient's leading integer positive.
    pub fn primitive(&self) -> GPoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = gcd_many(self.terms.iter().map(|(_, c)| c.clone()).collect());
        let mut p = if g.is_one() {
            self.clone()
        } else {
            GPoly {
                terms: self
                    .terms
                    .iter()
                    .map(|(e, c)| (e.clone(), c.exact_div(&g).expect("content divides")))
                    .collect(),
            }
        };
        if p.lc().lc_int().is_negative() {
            p = GPoly {
                terms: p.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            };
        }
        p
    }

    pub fn involves_any(&self, vars: std::ops::Range<usize>) -> bool {
        self.terms
            .iter()
            .any(|(e, _)| vars.clone().any(|v| e[v] > 0))
    }
}

/// Resource ceilings and a cooperative deadline.
#[derive(Clone, Debug)]
pub struct Limits {
    pub max_basis: usize,
    pub max_poly_terms: usize,
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_basis: 5_000,
            max_poly_terms: 2_000_000,
            deadline: None,
        }
    }
}

impl Limits {
    fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::Deadline),
            _ => Ok(()),
        }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exps,
    sugar: u32,
}

/// Statistics and optional trace of a run.
#[derive(Clone, Debug, Default)]
pub struct GbStats {
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub trace: Vec<Value>,
}

pub struct Engine {
    order: TermOrder,
    limits: Limits,
    trace: bool,
    basis: Vec<GPoly>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    pub stats: GbStats,
}

impl Engine {
    pub fn new(order: TermOrder, limits: Limits, trace: bool) -> Self {
        Engine {
            order,
            limits,
            trace,
            basis: Vec::new(),
            sugar: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            stats: GbStats::default(),
        }
    }

    fn active_indices(&self) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.active[i]).collect()
    }

    /// Full fraction-free reduction of `p` by the active basis.
    fn reduce(&self, p: &GPoly, skip: Option<usize>) -> Result<GPoly> {
        let order = self.order;
        let mut p = p.clone();
        let mut done: Vec<(Exps, IPoly)> = Vec::new();
        let mut done_scale = IPoly::one(p.terms.first().map_or(0, |t| t.1.nvars()));
        let active = self.active_indices();
        let mut steps = 0usize;
        while !p.is_zero() {
            let (m, c) = p.terms[0].clone();
            let divisor = active
                .iter()
                .filter(|&&k| Some(k) != skip)
                .find(|&&k| divides(self.basis[k].lm(), &m));
            match divisor {
                Some(&k) => {
                    let g = &self.basis[k];
                    let q = exps_divide(&m, g.lm()).expect("divides");
                    let a = g.lc();
                    let h = gcd(a, &c);
                    let a1 = a.exact_div(&h).expect("gcd divides");
                    let c1 = c.exact_div(&h).expect("gcd divides");
                    let tail = GPoly {
                        terms: p.terms[1..].to_vec(),
                    };
                    let gt = GPoly {
                        terms: g.terms[1..].to_vec(),
                    };
                    p = tail.scale(&a1).sub(&gt.mul_term(&q, &c1), order);
                    if !a1.is_one() {
                        done_scale = done_scale.mul(&a1);
                    }
                    steps += 1;
                    if steps.is_multiple_of(16) {
                        self.limits.check_time()?;
                        if p.nterms_total() > self.limits.max_poly_terms {
                            return Err(Error::ResourceLimit(format!(
                                "intermediate polynomial exceeds {} coefficient terms",
                                self.limits.max_poly_terms
                            )));
                        }
                    }
                    if steps.is_multiple_of(8) && p.nterms_total() > 64 {
                        // keep coefficients small: divide p and the finished
                        // part by their common content
                        let (np, nd, ns) = self.shrink(p, done, done_scale);
                        p = np;
                        done = nd;
                        done_scale = ns;
                    }
                }
                None => {
                    if !done_scale.is_one() {
                        for t in done.iter_mut() {
                            t.1 = t.1.mul(&done_scale);
                        }
                        done_scale = IPoly::one(c.nvars());
                    }
                    done.push((m, c));
                    p.terms.remove(0);
                }
            }
        }
        if !done_scale.is_one() {
            for t in done.iter_mut() {
                t.1 = t.1.mul(&done_scale);
            }
        }
        Ok(GPoly { terms: done }.primitive())
    }

    fn shrink(
        &self,
        p: GPoly,
        done: Vec<(Exps, IPoly)>,
        scale: IPoly,
    ) -> (GPoly, Vec<(Exps, IPoly)>, IPoly) {
        let mut cs: Vec<IPoly> = p.terms.iter().map(|(_, c)| c.clone()).collect();
        if !done.is_empty() {
            let g_done = gcd_many(done.iter().map(|(_, c)| c.clone()).collect());
            cs.push(g_done.mul(&scale));
        }
        let g = gcd_many(cs);
        if g.is_constant() && g.constant_value().is_some_and(|v| v.abs().is_one()) {
            return (p, done, scale);
        }
        let p = GPoly {
            terms: p
                .terms
                .into_iter()
                .map(|(e, c)| (e, c.exact_div(&g).expect("content divides")))
                .collect(),
        };
        // fold the pending scale into the finished terms before dividing
        let done: Vec<(Exps, IPoly)> = done
            .into_iter()
            .map(|(e, c)| (e, c.mul(&scale).exact_div(&g).expect("content divides")))
            .collect();
        let n = g.nvars();
        (p, done, IPoly::one(n))
    }

    fn spoly(&self, i: usize, j: usize, l: &[u16]) -> GPoly {
        let (f, g) = (&self.basis[i], &self.basis[j]);
        let h = gcd(f.lc(), g.lc());
        let a = g.lc().exact_div(&h).expect("gcd divides");
        let b = f.lc().exact_div(&h).expect("gcd divides");
        let mf = exps_divide(l, f.lm()).expect("lcm");
        let mg = exps_divide(l, g.lm()).expect("lcm");
        let ft = GPoly {
            terms: f.terms[1..].to_vec(),
        };
        let gt = GPoly {
            terms: g.terms[1..].to_vec(),
        };
        ft.mul_term(&mf, &a).sub(&gt.mul_term(&mg, &b), self.order)
    }

    /// Gebauer–Möller installation of a new basis element.
    fn insert(&mut self, h: GPoly, sugar: u32) {
        let k = self.basis.len();
        let lh = h.lm().clone();
        self.basis.push(h);
        self.sugar.push(sugar);
        self.active.push(true);
        let old: Vec<usize> = (0..k).filter(|&i| self.active[i]).collect();
        // candidate pairs (i, k)
        let cands: Vec<(usize, Exps)> = old
            .iter()
            .map(|&i| (i, lcm(self.basis[i].lm(), &lh)))
            .collect();
        let mut keep: Vec<(usize, Exps)> = Vec::new();
        for (idx, (i, l)) in cands.iter().enumerate() {
            let li = self.basis[*i].lm();
            if disjoint(li, &lh) {
                keep.push((*i, l.clone()));
                continue;
            }
            let dominated = cands
                .iter()
                .enumerate()
                .any(|(jdx, (_, l2))| jdx != idx && divides(l2, l) && (l2 != l || jdx < idx))
                || keep.iter().any(|(_, l2)| divides(l2, l) && l2 != l);
            if !dominated {
                keep.push((*i, l.clone()));
            }
        }
        // product criterion
        keep.retain(|(i, _)| !disjoint(self.basis[*i].lm(), &lh));
        // old pairs made redundant by the new leading monomial
        let basis = &self.basis;
        self.pairs.retain(|p| {
            !(divides(&lh, &p.lcm)
                && lcm(basis[p.i].lm(), &lh) != p.lcm
                && lcm(basis[p.j].lm(), &lh) != p.lcm)
        });
        for (i, l) in keep {
            let si = self.sugar[i] + deg(&l) - deg(self.basis[i].lm());
            let sk = sugar + deg(&l) - deg(&lh);
            self.pairs.push(Pair {
                i,
                j: k,
                lcm: l,
                sugar: si.max(sk),
            });
        }
        for i in old {
            if divides(&lh, self.basis[i].lm()) {
                self.active[i] = false;
            }
        }
    }

    fn pop_pair(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| order.cmp(&a.lcm, &b.lcm))
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    /// Computes a reduced Gröbner basis of the input.
    pub fn run(&mut self, input: Vec<GPoly>) -> Result<Vec<GPoly>> {
        let mut input: Vec<GPoly> = input
            .into_iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.primitive())
            .collect();
        input.sort_by(|a, b| self.order.cmp(a.lm(), b.lm()));
        for p in input {
            let r = self.reduce(&p, None)?;
            if r.is_zero() {
                continue;
            }
            if deg(r.lm()) == 0 {
                return Ok(vec![r]);
            }
            let s = r.terms.iter().map(|(e, _)| deg(e)).max().unwrap_or(0);
            self.insert(r, s);
        }
        while let Some(pair) = self.pop_pair() {
            self.limits.check_time()?;
            let s = self.spoly(pair.i, pair.j, &pair.lcm);
            self.stats.pairs_reduced += 1;
            let r = self.reduce(&s, None)?;
            if r.is_zero() {
                self.stats.zero_reductions += 1;
                continue;
            }
            if deg(r.lm()) == 0 {
                return Ok(vec![r]);
            }
            if self.trace {
                self.stats.trace.push(json!({
                    "pair": [pair.i, pair.j],
                    "sugar": pair.sugar,
                    "new_lm": r.lm(),
                    "coefficient_terms": r.nterms_total(),
                }));
            }
            if self.active.iter().filter(|&&a| a).count() >= self.limits.max_basis {
                return Err(Error::ResourceLimit(format!(
                    "Gröbner basis exceeds {} elements",
                    self.limits.max_basis
                )));
            }
            self.insert(r, pair.sugar);
        }
        self.interreduce()
    }

    fn interreduce(&mut self) -> Result<Vec<GPoly>> {
        let mut idx = self.active_indices();
        idx.sort_by(|&a, &b| self.order.cmp(self.basis[a].lm(), self.basis[b].lm()));
        let mut minimal: Vec<usize> = Vec::new();
        for &i in &idx {
            if !minimal
                .iter()
                .any(|&j| divides(self.basis[j].lm(), self.basis[i].lm()))
            {
                minimal.push(i);
            }
        }
        for k in 0..self.active.len() {
            self.active[k] = minimal.contains(&k);
        }
        let mut out = Vec::with_capacity(minimal.len());
        for &i in &minimal {
            let r = self.reduce_keep_head(&self.basis[i], i)?;
            out.push(r);
        }
        out.sort_by(|a, b| self.order.cmp(a.lm(), b.lm()));
        Ok(out)
    }

    /// Reduces every non-leading term of `g` by the other active elements.
    fn reduce_keep_head(&self, g: &GPoly, skip: usize) -> Result<GPoly> {
        let order = self.order;
        let mut head: Vec<(Exps, IPoly)> = vec![g.terms[0].clone()];
        let mut p = GPoly {
            terms: g.terms[1..].to_vec(),
        };
        let active = self.active_indices();
        while !p.is_zero() {
            self.limits.check_time()?;
            let (m, c) = p.terms[0].clone();
            let divisor = active
                .iter()
                .filter(|&&k| k != skip)
                .find(|&&k| divides(self.basis[k].lm(), &m));
            match divisor {
                Some(&k) => {
                    let b = &self.basis[k];
                    let q = exps_divide(&m, b.lm()).expect("divides");
                    let a = b.lc();
                    let h = gcd(a, &c);
                    let a1 = a.exact_div(&h).expect("gcd divides");
                    let c1 = c.exact_div(&h).expect("gcd divides");
                    let tail = GPoly {
                        terms: p.terms[1..].to_vec(),
                    };
                    let bt = GPoly {
                        terms: b.terms[1..].to_vec(),
                    };
                    p = tail.scale(&a1).sub(&bt.mul_term(&q, &c1), order);
                    for t in head.iter_mut() {
                        t.1 = t.1.mul(&a1);
                    }
                }
                None => {
                    head.push((m, c));
                    p.terms.remove(0);
                }
            }
        }
        Ok(GPoly { terms: head }.primitive())
    }

    /// Reduces `p` by a finished basis.
    pub fn normal_form(&self, p: &GPoly) -> Result<GPoly> {
        self.reduce(p, None)
    }

    /// Loads a finished basis (for normal forms only).
    pub fn load(&mut self, basis: Vec<GPoly>) {
        self.sugar = vec![0; basis.len()];
        self.active = vec![true; basis.len()];
        self.basis = basis;
        self.pairs.clear();
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }
}

/// True when every S-polynomial of `basis` reduces to zero.
pub fn is_groebner(basis: &[GPoly], order: TermOrder) -> Result<bool> {
    let mut e = Engine::new(order, Limits::default(), false);
    e.load(basis.to_vec());
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let l = lcm(basis[i].lm(), basis[j].lm());
            let s = e.spoly(i, j, &l);
            if !e.reduce(&s, None)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Unit constant for `nparams` parameters.
pub fn one_coeff(nparams: usize) -> IPoly {
    IPoly::constant(nparams, BigInt::one())
}
