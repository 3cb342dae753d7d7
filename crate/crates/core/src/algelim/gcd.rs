//! Multivariate gcd over `Z`: modular degree bounds to detect trivial gcds
//! cheaply, then a recursive primitive polynomial remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ipoly::IPoly;

const PRIME: u64 = (1u64 << 61) - 1;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn subm(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

fn invm(a: u64) -> u64 {
    super::ipoly::pow_mod(a, PRIME - 2, PRIME)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of the gcd of two polynomials over `F_p` (lowest degree first).
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // a <- a mod b
        let inv = invm(*b.last().expect("nonzero"));
        while a.len() >= b.len() {
            let q = mulm(*a.last().expect("nonzero"), inv);
            let shift = a.len() - b.len();
            for (k, &bk) in b.iter().enumerate() {
                a[shift + k] = subm(a[shift + k], mulm(q, bk));
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn rng_for(a: &IPoly, b: &IPoly) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64((a.nterms() as u64) << 32 ^ b.nterms() as u64 ^ 0x9e37_79b9)
}

/// Upper bound for the degree of `gcd(a, b)` in variable `x`. The bound is
/// rigorous whenever the evaluation keeps the degree of `a` or `b`, which is
/// checked.
fn degree_bound(a: &IPoly, b: &IPoly, x: usize, rng: &mut ChaCha8Rng) -> u16 {
    let da = a.degree(x);
    let db = b.degree(x);
    for _ in 0..6 {
        let point: Vec<u64> = (0..a.nvars()).map(|_| rng.gen_range(1..PRIME)).collect();
        let ua = a.univariate_mod(x, &point, PRIME);
        let ub = b.univariate_mod(x, &point, PRIME);
        let keeps = ua.last().is_some_and(|&c| c != 0) || ub.last().is_some_and(|&c| c != 0);
        if !keeps {
            continue;
        }
        return gcd_degree_mod(ua, ub) as u16;
    }
    da.min(db)
}

fn int_gcd_poly(a: &IPoly, b: &IPoly) -> BigInt {
    a.int_content().gcd(&b.int_content())
}

fn monomial_gcd(a: &IPoly, b: &IPoly) -> Vec<u16> {
    a.monomial_content()
        .iter()
        .zip(b.monomial_content())
        .map(|(x, y)| (*x).min(y))
        .collect()
}

/// Greatest common divisor with positive leading coefficient. `gcd(0, 0)`
/// is zero.
pub fn gcd(a: &IPoly, b: &IPoly) -> IPoly {
    if a.is_zero() {
        return b.clone().with_positive_lc();
    }
    if b.is_zero() {
        return a.clone().with_positive_lc();
    }
    let ic = int_gcd_poly(a, b);
    let mg = monomial_gcd(a, b);
    let unit_part = IPoly::monomial(mg, ic);
    if a.nterms() == 1 || b.nterms() == 1 {
        return unit_part;
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let a1 = a.div_monomial(&ma).div_int(&a.int_content());
    let b1 = b.div_monomial(&mb).div_int(&b.int_content());
    let g = gcd_rec(&a1, &b1);
    unit_part.mul(&g).with_positive_lc()
}

/// Gcd of integer-primitive inputs with trivial monomial content.
fn gcd_rec(a: &IPoly, b: &IPoly) -> IPoly {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return IPoly::one(n);
    }
    if a == b {
        return a.clone().with_positive_lc();
    }
    let mut rng = rng_for(a, b);
    let mut best: Option<(usize, u16)> = None;
    for x in 0..n {
        if !(a.involves(x) && b.involves(x)) {
            continue;
        }
        let bound = degree_bound(a, b, x, &mut rng);
        if bound == 0 {
            continue;
        }
        let size = a.degree(x).max(b.degree(x));
        if best.is_none_or(|(_, s)| size < s) {
            best = Some((x, size));
        }
    }
    let Some((x, _)) = best else {
        // the gcd has degree zero in every shared variable; a variable
        // present in only one input cannot occur in the gcd either
        return IPoly::one(n);
    };
    let ca = content_in(a, x);
    let cb = content_in(b, x);
    let c = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let g = prs(&pa, &pb, x);
    c.mul(&g).with_positive_lc()
}

/// Gcd of the coefficients of `a` viewed as a polynomial in `x`.
pub fn content_in(a: &IPoly, x: usize) -> IPoly {
    let mut cs = a.coeffs_in(x);
    cs.retain(|c| !c.is_zero());
    gcd_many(cs)
}

pub fn gcd_many(mut cs: Vec<IPoly>) -> IPoly {
    cs.sort_by_key(|c| c.nterms());
    let mut g = match cs.first() {
        Some(c) => c.clone().with_positive_lc(),
        None => return IPoly::zero(0),
    };
    for c in &cs[1..] {
        if g.is_constant() && g.constant_value().is_some_and(|v| v.abs().is_one()) {
            break;
        }
        g = gcd(&g, c);
    }
    g
}

/// Primitive part of `a` in `x` with positive leading coefficient.
pub fn primitive_in(a: &IPoly, x: usize) -> IPoly {
    if a.is_zero() {
        return a.clone();
    }
    let c = content_in(a, x);
    a.exact_div(&c).expect("content divides").with_positive_lc()
}

fn prem_in(f: &IPoly, g: &IPoly, x: usize) -> IPoly {
    let n = f.nvars();
    let gc = g.coeffs_in(x);
    let lg = gc.last().expect("nonzero divisor").clone();
    let mut r = f.coeffs_in(x);
    while r.len() >= gc.len() && !r.is_empty() {
        let lr = r.last().expect("nonempty").clone();
        let shift = r.len() - gc.len();
        for k in 0..r.len() {
            let mut v = r[k].mul(&lg);
            if k >= shift {
                v = v.sub(&lr.mul(&gc[k - shift]));
            }
            r[k] = v;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    IPoly::from_coeffs_in(n, x, &r)
}

/// Primitive remainder sequence in `x` on primitive inputs.
fn prs(a: &IPoly, b: &IPoly, x: usize) -> IPoly {
    let (mut f, mut g) = if a.degree(x) >= b.degree(x) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    while !g.is_zero() {
        if g.degree(x) == 0 {
            return IPoly::one(a.nvars());
        }
        let r = prem_in(&f, &g, x);
        f = g;
        g = primitive_in(&r, x);
    }
    primitive_in(&f, x)
}

/// `∂a/∂x_i`.
pub fn derivative(a: &IPoly, i: usize) -> IPoly {
    IPoly::from_terms(
        a.nvars(),
        a.terms().iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[i] -= 1;
            (e2, c * BigInt::from(e[i]))
        }),
    )
}

/// Squarefree part in `x`: `a / gcd(a, ∂a/∂x)`, primitive in `x`.
pub fn squarefree_in(a: &IPoly, x: usize) -> IPoly {
    let p = primitive_in(a, x);
    let d = derivative(&p, x);
    if d.is_zero() {
        return p;
    }
    let g = gcd(&p, &d);
    p.exact_div(&g).expect("gcd divides").with_positive_lc()
}
