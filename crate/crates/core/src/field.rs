//! Base differential fields: the rationals with the zero derivation and the
//! rational functions `Q(t)` with `d/dt`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Which base field a ring is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseField {
    #[serde(rename = "Q")]
    RationalsQ,
    #[serde(rename = "Qt")]
    RationalFunctionsQt,
}

/// Dense univariate polynomial over `Z` in `t`, lowest degree first.
/// The zero polynomial is the empty vector; no trailing zeros are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZPoly(pub Vec<BigInt>);

impl ZPoly {
    pub fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    pub fn t() -> Self {
        ZPoly(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = ZPoly(vec![c]);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.0
            .last()
            .expect("leading coefficient of zero polynomial")
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_default();
            let b = o.0.get(i).cloned().unwrap_or_default();
            v.push(a + b);
        }
        let mut p = ZPoly(v);
        p.trim();
        p
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::default();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        let mut p = ZPoly(v);
        p.trim();
        p
    }

    pub fn scale(&self, c: &BigInt) -> ZPoly {
        let mut p = ZPoly(self.0.iter().map(|x| x * c).collect());
        p.trim();
        p
    }

    pub fn derivative(&self) -> ZPoly {
        let mut p = ZPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        );
        p.trim();
        p
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Exact division by an integer that divides every coefficient.
    pub fn div_int(&self, c: &BigInt) -> ZPoly {
        ZPoly(self.0.iter().map(|x| x / c).collect())
    }

    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        self.div_int(&c)
    }

    /// Pseudo-remainder of `self` by `d`.
    fn prem(&self, d: &ZPoly) -> ZPoly {
        let dd = d.degree().expect("prem by zero");
        let lc = d.lc().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.lc().clone();
            let shift = dr - dd;
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(d.0.iter().map(|c| c * &lr));
            r = r.scale(&lc).sub(&ZPoly(sub));
        }
        r
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &ZPoly) -> ZPoly {
        let mut a = self.primitive();
        let mut b = o.primitive();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// Exact division; returns `None` when `d` does not divide `self` over `Z`.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        let dd = d.degree()?;
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.0.len().saturating_sub(dd)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return None;
            }
            let (qc, rem) = r.lc().div_rem(d.lc());
            if !rem.is_zero() {
                return None;
            }
            let shift = dr - dd;
            q[shift] = qc.clone();
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(d.0.iter().map(|c| c * &qc));
            r = r.sub(&ZPoly(sub));
        }
        let mut p = ZPoly(q);
        p.trim();
        Some(p)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + big_to_f64(c))
    }

    fn fmt_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                k => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

pub(crate) fn big_to_f64(b: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    b.to_f64().unwrap_or(f64::NAN)
}

/// An element of the base field. Elements of `Q` are stored with
/// `num = den = 1`. A genuine rational function keeps `num`/`den` coprime
/// and primitive over `Z[t]` with positive leading coefficients; its
/// rational factor sits in `scalar`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coeff {
    scalar: BigRational,
    num: ZPoly,
    den: ZPoly,
}

impl Coeff {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(i: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(i)))
    }

    pub fn from_bigint(i: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(i))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Coeff {
            scalar: q,
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    /// The element `t` of `Q(t)`.
    pub fn t() -> Self {
        Coeff {
            scalar: BigRational::one(),
            num: ZPoly::t(),
            den: ZPoly::one(),
        }
    }

    /// Builds `num/den` from integer polynomials in `t`.
    pub fn from_zpolys(num: &ZPoly, den: &ZPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::normalized(BigRational::one(), num.clone(), den.clone())
    }

    fn normalized(scalar: BigRational, num: ZPoly, den: ZPoly) -> Self {
        if scalar.is_zero() || num.is_zero() {
            return Self::zero();
        }
        let mut s = scalar;
        let nc = num.content();
        let dc = den.content();
        let mut n = num.div_int(&nc);
        let mut d = den.div_int(&dc);
        s *= BigRational::new(nc, dc);
        if n.degree() > Some(0) && d.degree() > Some(0) {
            let g = n.gcd(&d);
            if !g.is_one() {
                n = n.div_exact(&g).expect("gcd divides numerator");
                d = d.div_exact(&g).expect("gcd divides denominator");
            }
        }
        if n.lc().is_negative() {
            n = n.neg();
            s = -s;
        }
        if d.lc().is_negative() {
            d = d.neg();
            s = -s;
        }
        // constant polynomials collapse into the scalar
        if n.degree() == Some(0) {
            s *= BigRational::from_integer(n.0[0].clone());
            n = ZPoly::one();
        }
        if d.degree() == Some(0) {
            s /= BigRational::from_integer(d.0[0].clone());
            d = ZPoly::one();
        }
        Coeff {
            scalar: s,
            num: n,
            den: d,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.scalar.is_one()
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.scalar)
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn numerator_poly(&self) -> &ZPoly {
        &self.num
    }

    pub fn denominator_poly(&self) -> &ZPoly {
        &self.den
    }

    /// Sign of the rational factor; the polynomial parts are normalized to a
    /// positive leading coefficient.
    pub fn is_negative(&self) -> bool {
        self.scalar.is_negative()
    }

    pub fn neg(&self) -> Self {
        Coeff {
            scalar: -self.scalar.clone(),
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.is_rational() && o.is_rational() {
            return Coeff::from_rational(&self.scalar + &o.scalar);
        }
        let (p1, q1) = (self.scalar.numer(), self.scalar.denom());
        let (p2, q2) = (o.scalar.numer(), o.scalar.denom());
        let left = self.num.mul(&o.den).scale(&(p1 * q2));
        let right = o.num.mul(&self.den).scale(&(p2 * q1));
        let num = left.add(&right);
        let den = self.den.mul(&o.den);
        Self::normalized(BigRational::new(BigInt::one(), q1 * q2), num, den)
    }

    pub fn sub(&self, o: &Coeff) -> Coeff {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        if self.is_zero() || o.is_zero() {
            return Coeff::zero();
        }
        if self.is_rational() && o.is_rational() {
            return Coeff::from_rational(&self.scalar * &o.scalar);
        }
        if o.is_rational() {
            return Coeff {
                scalar: &self.scalar * &o.scalar,
                num: self.num.clone(),
                den: self.den.clone(),
            };
        }
        if self.is_rational() {
            return o.mul(self);
        }
        Self::normalized(
            &self.scalar * &o.scalar,
            self.num.mul(&o.num),
            self.den.mul(&o.den),
        )
    }

    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(Coeff {
            scalar: self.scalar.recip(),
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn div(&self, o: &Coeff) -> Option<Coeff> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: u32) -> Coeff {
        let mut r = Coeff::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// `d/dt`; zero on `Q`.
    pub fn derivative(&self) -> Coeff {
        if self.is_rational() {
            return Coeff::zero();
        }
        let n1 = self.num.derivative().mul(&self.den);
        let n2 = self.num.mul(&self.den.derivative());
        Self::normalized(self.scalar.clone(), n1.sub(&n2), self.den.mul(&self.den))
    }

    pub fn to_f64(&self, t: f64) -> f64 {
        use num_traits::ToPrimitive;
        let s = self.scalar.to_f64().unwrap_or(f64::NAN);
        s * self.num.eval_f64(t) / self.den.eval_f64(t)
    }

    /// Text form: `3/2` for rationals and `(3*t^2 + 3)/(2*t - 2)` for
    /// rational functions. Both parse back to the same element.
    pub fn to_text(&self) -> String {
        if self.is_rational() {
            return self.scalar.to_string();
        }
        let n = self.num.scale(self.scalar.numer());
        let d = self.den.scale(self.scalar.denom());
        let ns = n.fmt_with("t");
        if d.is_one() {
            format!("({ns})")
        } else {
            format!("({ns})/({})", d.fmt_with("t"))
        }
    }

    pub fn to_latex(&self) -> String {
        if self.is_rational() {
            if self.scalar.denom().is_one() {
                return self.scalar.numer().to_string();
            }
            let sign = if self.scalar.is_negative() { "-" } else { "" };
            return format!(
                "{sign}\\frac{{{}}}{{{}}}",
                self.scalar.numer().abs(),
                self.scalar.denom()
            );
        }
        let n = self.num.scale(self.scalar.numer());
        let d = self.den.scale(self.scalar.denom());
        if d.is_one() {
            format!("({})", n.fmt_with("t"))
        } else {
            format!("\\frac{{{}}}{{{}}}", n.fmt_with("t"), d.fmt_with("t"))
        }
    }

    /// Total order used only for deterministic tie-breaking.
    pub fn cmp_canonical(&self, o: &Coeff) -> Ordering {
        self.to_text().cmp(&o.to_text())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
