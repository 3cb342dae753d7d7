//! Sparse multivariate polynomials over `Z`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Exps = Vec<u16>;

/// Sparse polynomial in `nvars` variables with integer coefficients. Terms
/// are sorted by exponent vector in descending lexicographic order and no
/// coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IPoly {
    nvars: usize,
    terms: Vec<(Exps, BigInt)>,
}

fn add_exps(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn exps_divide(a: &[u16], b: &[u16]) -> Option<Exps> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

impl IPoly {
    pub fn zero(nvars: usize) -> Self {
        IPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        IPoly {
            nvars,
            terms: vec![(vec![0; nvars], c)],
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        IPoly {
            nvars,
            terms: vec![(e, BigInt::one())],
        }
    }

    pub fn monomial(exps: Exps, c: BigInt) -> Self {
        let nvars = exps.len();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        IPoly {
            nvars,
            terms: vec![(exps, c)],
        }
    }

    /// Builds from unsorted terms, merging duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, BigInt)>) -> Self {
        let mut acc: HashMap<Exps, BigInt> = HashMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            *acc.entry(e).or_default() += c;
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Exps, BigInt>) -> Self {
        let mut terms: Vec<(Exps, BigInt)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        IPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Exps, BigInt)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        self.is_constant().then(|| self.terms[0].1.clone())
    }

    /// Leading term in lexicographic order.
    pub fn lt(&self) -> Option<&(Exps, BigInt)> {
        self.terms.first()
    }

    pub fn lc_int(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn merge(&self, o: &IPoly, negate: bool) -> IPoly {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        IPoly {
            nvars: self.nvars.max(o.nvars),
            terms: out,
        }
    }

    pub fn add(&self, o: &IPoly) -> IPoly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &IPoly) -> IPoly {
        self.merge(o, true)
    }

    pub fn neg(&self) -> IPoly {
        IPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, o: &IPoly) -> IPoly {
        if self.is_zero() || o.is_zero() {
            return IPoly::zero(self.nvars);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Exps, BigInt> =
            HashMap::with_capacity(self.terms.len() * o.terms.len() / 2 + 1);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = add_exps(e1, e2);
                let p = c1 * c2;
                match acc.get_mut(&e) {
                    Some(x) => *x += p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        Self::from_map(self.nvars, acc)
    }

    /// Multiplication by a single term keeps the term order.
    pub fn mul_term(&self, e: &[u16], c: &BigInt) -> IPoly {
        if c.is_zero() {
            return IPoly::zero(self.nvars);
        }
        IPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(x, y)| (add_exps(x, e), y * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IPoly {
        if c.is_zero() {
            return IPoly::zero(self.nvars);
        }
        IPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> IPoly {
        let mut r = IPoly::one(self.nvars);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_int(&self, c: &BigInt) -> IPoly {
        IPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x / c)).collect(),
        }
    }

    /// Componentwise minimum of the exponent vectors.
    pub fn monomial_content(&self) -> Exps {
        let mut m = match self.terms.first() {
            Some((e, _)) => e.clone(),
            None => return vec![0; self.nvars],
        };
        for (e, _) in &self.terms[1..] {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    pub fn div_monomial(&self, m: &[u16]) -> IPoly {
        IPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (exps_divide(e, m).expect("monomial divides"), c.clone()))
                .collect(),
        }
    }

    /// Exact division; `None` when `d` does not divide `self` in `Z[x]`.
    pub fn exact_div(&self, d: &IPoly) -> Option<IPoly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            if self.terms.iter().all(|(_, x)| x.is_multiple_of(&c)) {
                return Some(self.div_int(&c));
            }
            return None;
        }
        if d.terms.len() == 1 {
            let (de, dc) = &d.terms[0];
            let mut terms = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                terms.push((exps_divide(e, de)?, q));
            }
            return Some(IPoly {
                nvars: self.nvars,
                terms,
            });
        }
        let (de, dc) = d.lt().expect("nonzero");
        let mut q: Vec<(Exps, BigInt)> = Vec::new();
        let mut r = self.clone();
        while let Some((re, rc)) = r.lt() {
            let e = exps_divide(re, de)?;
            let (c, rem) = rc.div_rem(dc);
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&d.mul_term(&e, &c));
            q.push((e, c));
        }
        Some(IPoly {
            nvars: self.nvars,
            terms: q,
        })
    }

    pub fn degree(&self, i: usize) -> u16 {
        self.terms.iter().map(|(e, _)| e[i]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[i] > 0)
    }

    /// Coefficients in variable `i`, indexed by degree; each coefficient has
    /// exponent zero in `i`.
    pub fn coeffs_in(&self, i: usize) -> Vec<IPoly> {
        let deg = self.degree(i) as usize;
        let mut buckets: Vec<Vec<(Exps, BigInt)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i] as usize;
            e2[i] = 0;
            buckets[k].push((e2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                IPoly {
                    nvars: self.nvars,
                    terms: t,
                }
            })
            .collect()
    }

    /// Inverse of [`IPoly::coeffs_in`].
    pub fn from_coeffs_in(nvars: usize, i: usize, coeffs: &[IPoly]) -> IPoly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut e2 = e.clone();
                e2[i] += k as u16;
                terms.push((e2, x.clone()));
            }
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        IPoly { nvars, terms }
    }

    /// Sign normalization: leading integer coefficient positive.
    pub fn with_positive_lc(self) -> IPoly {
        if self.terms.first().is_some_and(|(_, c)| c.is_negative()) {
            self.neg()
        } else {
            self
        }
    }

    /// Evaluation modulo a prime at a point given as residues.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> u64 {
        let mut total: u128 = 0;
        let pp = p as u128;
        for (e, c) in &self.terms {
            let mut t = big_mod(c, p) as u128;
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    t = t * pow_mod(point[k], x as u64, p) as u128 % pp;
                }
            }
            total = (total + t) % pp;
        }
        total as u64
    }

    /// Image in `F_p[x_i]` after evaluating every other variable at `point`.
    pub fn univariate_mod(&self, i: usize, point: &[u64], p: u64) -> Vec<u64> {
        let coeffs = self.coeffs_in(i);
        coeffs.iter().map(|c| c.eval_mod(point, p)).collect()
    }

    /// Substitutes `x_i = v`.
    pub fn eval_var(&self, i: usize, v: &BigInt) -> IPoly {
        let mut acc: HashMap<Exps, BigInt> = HashMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i];
            e2[i] = 0;
            *acc.entry(e2).or_default() += c * v.pow(k as u32);
        }
        Self::from_map(self.nvars, acc)
    }

    /// Renames variables: variable `k` becomes `map[k]` in a ring with
    /// `nvars` variables.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> IPoly {
        Self::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = vec![0u16; nvars];
                for (k, &x) in e.iter().enumerate() {
                    e2[map[k]] += x;
                }
                (e2, c.clone())
            }),
        )
    }
}

impl fmt::Display for IPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(k, &x)| {
                    if x == 1 {
                        format!("x{k}")
                    } else {
                        format!("x{k}^{x}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

pub(crate) fn big_mod(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r: u128 = 1;
    let pp = p as u128;
    let mut bb = b as u128 % pp;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % pp;
        }
        bb = bb * bb % pp;
        e >>= 1;
    }
    b = r as u64;
    b
}
