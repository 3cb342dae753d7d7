//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! poly   := ('+'|'-')? term (('+'|'-') term)*
//! term   := item ('*'? item)*
//! item   := atom ('^' uint)? ('/' atom)?
//! atom   := uint | var tick* | 'd(' var ',' uint ')' | '(' poly ')'
//! ```
//!
//! Division is accepted only by nonzero base-field constants, which covers
//! fractions `a/b` and printed rational functions of `t`.

use num_bigint::BigInt;

use super::{DerVar, DiffPoly, Ring};
use crate::error::{Error, Result};
use crate::field::{BaseField, Coeff};

pub(super) fn parse(ring: &Ring, text: &str) -> Result<DiffPoly> {
    let mut p = Parser {
        ring,
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty input"));
    }
    let poly = p.poly()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn poly(&mut self) -> Result<DiffPoly> {
        self.skip_ws();
        let mut neg = false;
        if self.eat(b'-') {
            neg = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'(')
    }

    fn term(&mut self) -> Result<DiffPoly> {
        if !self.starts_atom() {
            return Err(self.err("expected a term"));
        }
        let mut acc = self.item()?;
        loop {
            // juxtaposition multiplies like `*`
            if self.eat(b'*') || self.starts_atom() {
                let it = self.item()?;
                acc = &acc * &it;
            } else {
                return Ok(acc);
            }
        }
    }

    fn item(&mut self) -> Result<DiffPoly> {
        let mut base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            if self.peek() == Some(b'-') {
                let start = self.pos;
                self.pos += 1;
                let k = self.uint()?;
                let k = i64::try_from(k).map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "exponent too large".into(),
                })?;
                return Err(Error::NegativeExponent(-k));
            }
            let k = self.uint()?;
            let k = u32::try_from(k).map_err(|_| self.err("exponent too large"))?;
            base = base.pow(k);
        }
        while self.eat(b'/') {
            let at = self.pos;
            let mut d = self.atom()?;
            if self.eat(b'^') {
                let k = self.uint()?;
                d = d.pow(u32::try_from(k).map_err(|_| self.err("exponent too large"))?);
            }
            let c = d
                .constant_value()
                .filter(|c| !c.is_zero())
                .ok_or(Error::Syntax {
                    pos: at,
                    msg: "division only by nonzero constants".into(),
                })?;
            base = base.scale(&c.inv().expect("nonzero"));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: "integer too large".into(),
            })
    }

    fn bigint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse().map_err(|_| Error::Syntax {
            pos: start,
            msg: "bad integer".into(),
        })
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8(self.src[start..self.pos].to_vec()).expect("ascii")
    }

    fn ticks(&mut self) -> u32 {
        let mut k = 0;
        while self.peek() == Some(b'\'') {
            self.pos += 1;
            k += 1;
        }
        k
    }

    fn variable(&mut self, name: &str, order: u32, at: usize) -> Result<DiffPoly> {
        if let Some(i) = self.ring.var(name) {
            return Ok(DiffPoly::dervar(self.ring, DerVar::new(i, order)));
        }
        if name == "t" && self.ring.base() == BaseField::RationalFunctionsQt {
            let mut c = Coeff::t();
            for _ in 0..order {
                c = c.derivative();
            }
            return Ok(DiffPoly::constant(self.ring, c));
        }
        let _ = at;
        Err(Error::UnknownVariable(name.to_string()))
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.bigint()?;
                Ok(DiffPoly::constant(self.ring, Coeff::from_bigint(n)))
            }
            Some(b'(') => {
                self.pos += 1;
                let p = self.poly()?;
                self.expect(b')')?;
                Ok(p)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                if name == "d" && self.peek() == Some(b'(') {
                    self.pos += 1;
                    self.skip_ws();
                    let at_var = self.pos;
                    let var = self.ident();
                    if var.is_empty() {
                        return Err(self.err("expected a variable name"));
                    }
                    let extra = self.ticks();
                    self.expect(b',')?;
                    let k = self.uint()?;
                    let k = u32::try_from(k).map_err(|_| self.err("order too large"))?;
                    self.expect(b')')?;
                    let more = self.ticks();
                    return self.variable(&var, k + extra + more, at_var);
                }
                let k = self.ticks();
                self.variable(&name, k, at)
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}
