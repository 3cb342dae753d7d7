//! Differential polynomial rings over `Q` or `Q(t)`.
//!
//! A [`RingContext`] names the differential indeterminates and tags each one
//! as a main variable or a parameter (an indeterminate adjoined to the base
//! field). [`DiffPoly`] is a sparse polynomial in the derivatives of those
//! indeterminates, kept in a canonical form that does not depend on any
//! ranking.

mod format;
mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
pub use crate::field::{BaseField, Coeff, ZPoly};

pub use format::FormatStyle;

/// Whether an indeterminate may be chosen as a leader.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Main,
    Parameter,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub name: String,
    pub kind: VarKind,
}

/// Named differential indeterminates over a base field.
#[derive(Clone, Debug)]
pub struct RingContext {
    base: BaseField,
    vars: Vec<VarDecl>,
    index: HashMap<String, usize>,
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.vars == other.vars
    }
}

impl Eq for RingContext {}

pub type Ring = Arc<RingContext>;

fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingContext {
    pub fn new<S: Into<String>>(base: BaseField, vars: Vec<(S, VarKind)>) -> Result<Ring> {
        let mut index = HashMap::new();
        let mut decls = Vec::with_capacity(vars.len());
        for (i, (name, kind)) in vars.into_iter().enumerate() {
            let name = name.into();
            if !valid_ident(&name) {
                return Err(Error::InvalidInput(format!("bad variable name `{name}`")));
            }
            if base == BaseField::RationalFunctionsQt && name == "t" {
                return Err(Error::InvalidInput(
                    "`t` is the base-field element over Qt".into(),
                ));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(name));
            }
            decls.push(VarDecl { name, kind });
        }
        Ok(Arc::new(RingContext {
            base,
            vars: decls,
            index,
        }))
    }

    /// A ring over `Q` whose variables are all main variables.
    pub fn main_q(names: &[&str]) -> Ring {
        Self::new(
            BaseField::RationalsQ,
            names.iter().map(|n| (*n, VarKind::Main)).collect(),
        )
        .expect("valid variable names")
    }

    /// Main variables followed by parameters, over the given base field.
    pub fn with_params(base: BaseField, main: &[&str], params: &[&str]) -> Result<Ring> {
        let mut v: Vec<(String, VarKind)> = main
            .iter()
            .map(|n| (n.to_string(), VarKind::Main))
            .collect();
        v.extend(params.iter().map(|n| (n.to_string(), VarKind::Parameter)));
        Self::new(base, v)
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn kind(&self, i: usize) -> VarKind {
        self.vars[i].kind
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn var_or_err(&self, name: &str) -> Result<usize> {
        self.var(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn main_vars(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vars.len()).filter(|&i| self.vars[i].kind == VarKind::Main)
    }

    pub fn n_main(&self) -> usize {
        self.main_vars().count()
    }

    pub fn is_main(&self, d: DerVar) -> bool {
        self.kind(d.var as usize) == VarKind::Main
    }

    /// A new ring with `extra` appended. Existing variables keep their indices.
    pub fn extend<S: Into<String>>(&self, extra: Vec<(S, VarKind)>) -> Result<Ring> {
        let mut v: Vec<(String, VarKind)> =
            self.vars.iter().map(|d| (d.name.clone(), d.kind)).collect();
        v.extend(extra.into_iter().map(|(n, k)| (n.into(), k)));
        Self::new(self.base, v)
    }

    /// Same variables with kinds reassigned: names in `main` become main
    /// variables, all others parameters.
    pub fn retag(&self, main: &[&str]) -> Result<Ring> {
        for m in main {
            self.var_or_err(m)?;
        }
        let v = self
            .vars
            .iter()
            .map(|d| {
                let kind = if main.contains(&d.name.as_str()) {
                    VarKind::Main
                } else {
                    VarKind::Parameter
                };
                (d.name.clone(), kind)
            })
            .collect();
        Self::new(self.base, v)
    }

    /// Printable name of a derivative: ticks up to third order, `d(v,k)` beyond.
    pub fn dervar_name(&self, d: DerVar) -> String {
        let n = self.name(d.var as usize);
        match d.order {
            0..=3 => format!("{n}{}", "'".repeat(d.order as usize)),
            k => format!("d({n},{k})"),
        }
    }
}

pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// The derivative `δ^order` of indeterminate `var`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerVar {
    pub var: u32,
    pub order: u32,
}

impl DerVar {
    pub fn new(var: usize, order: u32) -> Self {
        DerVar {
            var: var as u32,
            order,
        }
    }

    pub fn diff(self, k: u32) -> Self {
        DerVar {
            var: self.var,
            order: self.order + k,
        }
    }
}

/// Order of a polynomial in a variable; absent variables have order `−∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    NegInfinity,
    Finite(u32),
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(k) => Some(k),
            Order::NegInfinity => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::NegInfinity => f.write_str("-inf"),
            Order::Finite(k) => write!(f, "{k}"),
        }
    }
}

/// Power product of derivatives, sorted by `(var, order)` with no zero
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(DerVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(d: DerVar, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(d, e)])
        }
    }

    /// Builds a monomial from unsorted factors; repeated factors are merged.
    pub fn from_factors(mut f: Vec<(DerVar, u32)>) -> Self {
        f.retain(|&(_, e)| e > 0);
        f.sort();
        let mut out: Vec<(DerVar, u32)> = Vec::with_capacity(f.len());
        for (d, e) in f {
            match out.last_mut() {
                Some((ld, le)) if *ld == d => *le += e,
                _ => out.push((d, e)),
            }
        }
        Monomial(out)
    }

    pub fn factors(&self) -> &[(DerVar, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_in(&self, d: DerVar) -> u32 {
        self.0
            .binary_search_by(|(x, _)| x.cmp(&d))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Multiplies by `d^e` (e may be zero).
    pub fn times_var(&self, d: DerVar, e: u32) -> Monomial {
        self.mul(&Monomial::var(d, e))
    }

    /// Removes `d^e`; panics if the exponent is too small.
    pub fn div_var(&self, d: DerVar, e: u32) -> Monomial {
        let mut v = self.0.clone();
        let i = v
            .binary_search_by(|(x, _)| x.cmp(&d))
            .expect("variable present");
        assert!(v[i].1 >= e);
        v[i].1 -= e;
        if v[i].1 == 0 {
            v.remove(i);
        }
        Monomial(v)
    }

    /// Splits off the power of `d`: returns `(exponent, rest)`.
    pub fn split(&self, d: DerVar) -> (u32, Monomial) {
        match self.0.binary_search_by(|(x, _)| x.cmp(&d)) {
            Ok(i) => {
                let mut v = self.0.clone();
                let (_, e) = v.remove(i);
                (e, Monomial(v))
            }
            Err(_) => (0, self.clone()),
        }
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().all(|&(d, e)| o.degree_in(d) >= e)
    }

    pub fn dervars(&self) -> impl Iterator<Item = DerVar> + '_ {
        self.0.iter().map(|(d, _)| *d)
    }

    /// Keeps only the factors accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(DerVar) -> bool) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(d, _)| keep(*d)).collect())
    }
}

/// A differential polynomial.
#[derive(Clone, Debug)]
pub struct DiffPoly {
    ring: Ring,
    terms: BTreeMap<Monomial, Coeff>,
}

impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for DiffPoly {}

impl std::hash::Hash for DiffPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, Coeff>, m: Monomial, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl DiffPoly {
    pub fn zero(ring: &Ring) -> Self {
        DiffPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring, c: Coeff) -> Self {
        let mut p = Self::zero(ring);
        add_term(&mut p.terms, Monomial::one(), c);
        p
    }

    pub fn from_int(ring: &Ring, i: i64) -> Self {
        Self::constant(ring, Coeff::from_int(i))
    }

    pub fn one(ring: &Ring) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn dervar(ring: &Ring, d: DerVar) -> Self {
        Self::term(ring, Monomial::var(d, 1), Coeff::one())
    }

    /// The derivative `δ^order` of the named indeterminate.
    pub fn var(ring: &Ring, name: &str, order: u32) -> Result<Self> {
        let i = ring.var_or_err(name)?;
        Ok(Self::dervar(ring, DerVar::new(i, order)))
    }

    pub fn term(ring: &Ring, m: Monomial, c: Coeff) -> Self {
        let mut p = Self::zero(ring);
        add_term(&mut p.terms, m, c);
        p
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            add_term(&mut p.terms, m, c);
        }
        p
    }

    pub fn parse(ring: &Ring, text: &str) -> Result<Self> {
        parse::parse(ring, text)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// True when the polynomial is a base-field element.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        if self.is_zero() {
            return Some(Coeff::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// True when no main variable occurs: the polynomial lies in the base
    /// field extended by the parameters.
    pub fn is_parametric(&self) -> bool {
        self.dervars().iter().all(|d| !self.ring.is_main(*d))
    }

    fn check(&self, o: &DiffPoly) -> Result<()> {
        if same_ring(&self.ring, &o.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, o: &DiffPoly) -> Result<DiffPoly> {
        self.check(o)?;
        let (big, small) = if self.terms.len() >= o.terms.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(DiffPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, o: &DiffPoly) -> Result<DiffPoly> {
        self.check(o)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut terms, m.clone(), c.neg());
        }
        Ok(DiffPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_mul(&self, o: &DiffPoly) -> Result<DiffPoly> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let mut acc: HashMap<Monomial, Coeff> = HashMap::with_capacity(self.nterms() * o.nterms());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1.mul(c2);
                match acc.get_mut(&m) {
                    Some(x) => *x = x.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(DiffPoly {
            ring: self.ring.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// Power with a signed exponent; negative exponents are rejected.
    pub fn try_pow(&self, k: i64) -> Result<DiffPoly> {
        if k < 0 {
            return Err(Error::NegativeExponent(k));
        }
        Ok(self.pow(k as u32))
    }

    pub fn pow(&self, k: u32) -> DiffPoly {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &Coeff) -> DiffPoly {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        DiffPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul(c)))
                .collect(),
        }
    }

    pub fn scale_int(&self, i: i64) -> DiffPoly {
        self.scale(&Coeff::from_int(i))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> DiffPoly {
        DiffPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(x, c)| (x.mul(m), c.clone()))
                .collect(),
        }
    }

    /// All derivatives occurring in the polynomial.
    pub fn dervars(&self) -> BTreeSet<DerVar> {
        self.terms.keys().flat_map(|m| m.dervars()).collect()
    }

    pub fn contains(&self, d: DerVar) -> bool {
        self.terms.keys().any(|m| m.degree_in(d) > 0)
    }

    /// `ord(p, y_var)`.
    pub fn order_wrt(&self, var: usize) -> Order {
        self.dervars()
            .iter()
            .filter(|d| d.var as usize == var)
            .map(|d| d.order)
            .max()
            .map_or(Order::NegInfinity, Order::Finite)
    }

    /// `max_i ord(p, y_i)` over the main variables.
    pub fn total_order(&self) -> Order {
        self.dervars()
            .iter()
            .filter(|d| self.ring.is_main(**d))
            .map(|d| d.order)
            .max()
            .map_or(Order::NegInfinity, Order::Finite)
    }

    /// Order with respect to a set of indeterminates.
    pub fn order_wrt_set(&self, vars: &[usize]) -> Order {
        vars.iter()
            .map(|&v| self.order_wrt(v))
            .max()
            .unwrap_or(Order::NegInfinity)
    }

    pub fn degree(&self, d: DerVar) -> u32 {
        self.terms.keys().map(|m| m.degree_in(d)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Total degree counted only over derivatives of the listed indeterminates.
    pub fn degree_in_vars(&self, vars: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|m| {
                m.factors()
                    .iter()
                    .filter(|(d, _)| vars.contains(&(d.var as usize)))
                    .map(|(_, e)| e)
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }

    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Coefficients of `p` viewed as a univariate polynomial in `d`,
    /// indexed by degree.
    pub fn coeffs_in(&self, d: DerVar) -> Vec<DiffPoly> {
        let deg = self.degree(d) as usize;
        let mut out = vec![Self::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(d);
            add_term(&mut out[e as usize].terms, rest, c.clone());
        }
        out
    }

    /// Coefficient of `d^k`.
    pub fn coeff_in(&self, d: DerVar, k: u32) -> DiffPoly {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let (e, rest) = m.split(d);
            if e == k {
                add_term(&mut out.terms, rest, c.clone());
            }
        }
        out
    }

    /// `∂p/∂d`, the algebraic partial derivative.
    pub fn partial(&self, d: DerVar) -> DiffPoly {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.degree_in(d);
            if e > 0 {
                add_term(
                    &mut out.terms,
                    m.div_var(d, 1),
                    c.mul(&Coeff::from_int(e as i64)),
                );
            }
        }
        out
    }

    /// `δp`, applying the Leibniz rule termwise and `δt = 1` on `Q(t)`.
    pub fn derivative(&self) -> DiffPoly {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let dc = c.derivative();
            if !dc.is_zero() {
                add_term(&mut out.terms, m.clone(), dc);
            }
            for &(d, e) in m.factors() {
                let nm = m.div_var(d, 1).times_var(d.diff(1), 1);
                add_term(&mut out.terms, nm, c.mul(&Coeff::from_int(e as i64)));
            }
        }
        out
    }

    /// `δ^k p`.
    pub fn differentiate(&self, k: u32) -> DiffPoly {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p
    }

    /// Algebraic substitution of derivatives by polynomials. Derivatives
    /// that are not keys of `assign` are left alone; no differentiation of
    /// the assigned values is implied.
    pub fn substitute(&self, assign: &HashMap<DerVar, DiffPoly>) -> Result<DiffPoly> {
        let target = match assign.values().next() {
            Some(v) => v.ring.clone(),
            None => return Ok(self.clone()),
        };
        for v in assign.values() {
            if !same_ring(&v.ring, &target) {
                return Err(Error::RingMismatch);
            }
        }
        let mut cache: HashMap<(DerVar, u32), DiffPoly> = HashMap::new();
        let mut out = DiffPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut prod = DiffPoly::constant(&target, c.clone());
            for &(d, e) in m.factors() {
                match assign.get(&d) {
                    Some(v) => {
                        let pw = cache.entry((d, e)).or_insert_with(|| v.pow(e)).clone();
                        prod = &prod * &pw;
                    }
                    None => kept.push((d, e)),
                }
            }
            if !kept.is_empty() {
                let mut mapped = Vec::with_capacity(kept.len());
                for (d, e) in kept {
                    let name = self.ring.name(d.var as usize);
                    let ti = target.var_or_err(name)?;
                    mapped.push((DerVar::new(ti, d.order), e));
                }
                prod = prod.mul_monomial(&Monomial::from_factors(mapped));
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// Differential substitution: each indeterminate `v` in `assign` is
    /// replaced by the given polynomial and every derivative `δ^k v` by the
    /// `k`-th derivative of it.
    pub fn substitute_diff(&self, assign: &HashMap<usize, DiffPoly>) -> Result<DiffPoly> {
        let mut by_dervar = HashMap::new();
        for d in self.dervars() {
            if let Some(v) = assign.get(&(d.var as usize)) {
                by_dervar.insert(d, v.differentiate(d.order));
            }
        }
        if by_dervar.is_empty() {
            // nothing to replace, but still move into the target ring
            if let Some(v) = assign.values().next() {
                return self.embed(v.ring());
            }
            return Ok(self.clone());
        }
        self.substitute(&by_dervar)
    }

    /// Re-expresses the polynomial in another ring, matching variables by name.
    pub fn embed(&self, target: &Ring) -> Result<DiffPoly> {
        if same_ring(&self.ring, target) {
            return Ok(DiffPoly {
                ring: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let mut map = HashMap::new();
        for d in self.dervars() {
            if let std::collections::hash_map::Entry::Vacant(e) = map.entry(d.var) {
                let name = self.ring.name(d.var as usize);
                e.insert(target.var_or_err(name)? as u32);
            }
        }
        if self.ring.base() == BaseField::RationalFunctionsQt
            && target.base() == BaseField::RationalsQ
            && self.terms.values().any(|c| !c.is_rational())
        {
            return Err(Error::InvalidInput(
                "coefficients involve t but target ring is over Q".into(),
            ));
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let f = m
                .factors()
                .iter()
                .map(|&(d, e)| {
                    (
                        DerVar {
                            var: map[&d.var],
                            order: d.order,
                        },
                        e,
                    )
                })
                .collect();
            (Monomial::from_factors(f), c.clone())
        });
        Ok(DiffPoly::from_terms(target, terms))
    }

    /// Leading term in the canonical (ranking-independent) monomial order.
    pub fn canonical_leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    /// Scales to the canonical representative of `p·Q*`: integer
    /// coefficients with gcd 1 and a positive leading coefficient in the
    /// canonical order. Over `Q(t)` the rational factors are normalized the
    /// same way and denominators in `t` are cleared.
    pub fn normalize_unit(&self) -> DiffPoly {
        if self.is_zero() {
            return self.clone();
        }
        // clear t-denominators first
        let mut den = ZPoly::one();
        for c in self.terms.values() {
            if !c.denominator_poly().is_one() {
                let d = c.denominator_poly();
                let g = den.gcd(d);
                den = den.mul(&d.div_exact(&g).expect("gcd divides"));
            }
        }
        let p = if den.is_one() {
            self.clone()
        } else {
            self.scale(&Coeff::from_zpolys(&den, &ZPoly::one()))
        };
        let mut lcm_den = BigInt::one();
        let mut gcd_num = BigInt::zero();
        for c in p.terms.values() {
            let s = c.scalar();
            lcm_den = lcm_den.lcm(s.denom());
            gcd_num = gcd_num.gcd(s.numer());
        }
        let mut factor = BigRational::new(lcm_den, gcd_num);
        if let Some((_, c)) = p.canonical_leading() {
            if c.is_negative() {
                factor = -factor;
            }
        }
        p.scale(&Coeff::from_rational(factor))
    }

    /// True when `self = c·other` for a nonzero `c` in `Q`.
    pub fn equal_up_to_unit(&self, other: &DiffPoly) -> bool {
        self.normalize_unit() == other.normalize_unit()
    }

    /// Evaluates with a value for every occurring derivative.
    pub fn eval<T, F>(&self, value: F, coeff: impl Fn(&Coeff) -> T) -> Result<T>
    where
        T: Clone + Add<Output = T> + Mul<Output = T> + num_traits::Zero + num_traits::One,
        F: Fn(DerVar) -> Option<T>,
    {
        let mut cache: HashMap<DerVar, T> = HashMap::new();
        let mut total = T::zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for &(d, e) in m.factors() {
                let v = match cache.get(&d) {
                    Some(v) => v.clone(),
                    None => {
                        let v = value(d)
                            .ok_or_else(|| Error::IncompleteAssignment(self.ring.dervar_name(d)))?;
                        cache.insert(d, v.clone());
                        v
                    }
                };
                for _ in 0..e {
                    t = t * v.clone();
                }
            }
            total = total + t;
        }
        Ok(total)
    }

    /// Exact evaluation to a base-field element.
    pub fn eval_exact(&self, value: impl Fn(DerVar) -> Option<Coeff>) -> Result<Coeff> {
        let mut total = Coeff::zero();
        let mut cache: HashMap<DerVar, Coeff> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(d, e) in m.factors() {
                let v = match cache.get(&d) {
                    Some(v) => v.clone(),
                    None => {
                        let v = value(d)
                            .ok_or_else(|| Error::IncompleteAssignment(self.ring.dervar_name(d)))?;
                        cache.insert(d, v.clone());
                        v
                    }
                };
                t = t.mul(&v.pow(e));
            }
            total = total.add(&t);
        }
        Ok(total)
    }

    /// Weighted degree `Σ (k+1)·e` over derivatives of main variables,
    /// maximized over terms.
    pub fn weighted_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| {
                m.factors()
                    .iter()
                    .filter(|(d, _)| self.ring.is_main(*d))
                    .map(|(d, e)| (d.order + 1) * e)
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }

    pub fn format(&self, style: FormatStyle) -> String {
        format::format(self, style)
    }

    pub fn to_json(&self) -> serde_json::Value {
        format::to_json(self)
    }

    pub fn to_text(&self) -> String {
        self.format(FormatStyle::Text)
    }

    /// Sign of the leading coefficient in the canonical order.
    pub fn leading_sign_negative(&self) -> bool {
        self.canonical_leading()
            .is_some_and(|(_, c)| c.is_negative())
    }

    /// Rational content removed, sign kept.
    pub fn rational_primitive(&self) -> DiffPoly {
        let n = self.normalize_unit();
        if self.leading_sign_negative() != n.leading_sign_negative() {
            n.neg_poly()
        } else {
            n
        }
    }

    pub fn neg_poly(&self) -> DiffPoly {
        DiffPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    /// Coefficients as rationals, if all are rational.
    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.terms
            .values()
            .map(|c| c.as_rational().cloned())
            .collect()
    }

    pub fn max_abs_coeff_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.scalar().numer().abs().bits())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, o: &DiffPoly) -> DiffPoly {
        self.try_add(o).expect("ring mismatch in +")
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: &DiffPoly) -> DiffPoly {
        self.try_sub(o).expect("ring mismatch in -")
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: &DiffPoly) -> DiffPoly {
        self.try_mul(o).expect("ring mismatch in *")
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.neg_poly()
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(self, o: DiffPoly) -> DiffPoly {
        &self + &o
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: DiffPoly) -> DiffPoly {
        &self - &o
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: DiffPoly) -> DiffPoly {
        &self * &o
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.neg_poly()
    }
}

/// Binomial coefficient as a base-field element.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

#[cfg(test)]
mod tests;
