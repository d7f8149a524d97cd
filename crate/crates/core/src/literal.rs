//! Set literal syntax.
//!
//! ```text
//! literal := "{}" | part (("," | "+") part)*
//! part    := INT | INT ".." INT | FAMILY "(" INT ")"
//! FAMILY  := "O" | "I0" | "I1" | "I2" | "I3" | "full"
//! ```
//!
//! The ambient size is the explicit `n` when given, otherwise the largest of
//! the family arguments and the largest listed element.

use crate::error::{Error, Result};
use crate::set::IntegerSet;

#[derive(Debug)]
enum Part {
    Single(usize),
    Range(usize, usize),
    Family(Family, usize),
}

#[derive(Debug, Clone, Copy)]
enum Family {
    Odds,
    UpperHalf,
    I1,
    I2,
    I3,
    Full,
}

impl Family {
    fn build(self, n: usize) -> Result<IntegerSet> {
        match self {
            Family::Odds => IntegerSet::odds(n),
            Family::UpperHalf => IntegerSet::upper_half(n),
            Family::I1 => IntegerSet::i1(n),
            Family::I2 => IntegerSet::i2(n),
            Family::I3 => IntegerSet::i3(n),
            Family::Full => Ok(IntegerSet::full(n)),
        }
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("number out of range")
        })
    }

    fn part(&mut self) -> Result<Part> {
        self.skip_ws();
        let families = [
            ("full", Family::Full),
            ("I0", Family::UpperHalf),
            ("I1", Family::I1),
            ("I2", Family::I2),
            ("I3", Family::I3),
            ("O", Family::Odds),
        ];
        for (name, fam) in families {
            if self.eat(name) {
                self.skip_ws();
                if !self.eat("(") {
                    return self.err(format!("expected '(' after {name}"));
                }
                self.skip_ws();
                let n = self.number()?;
                self.skip_ws();
                if !self.eat(")") {
                    return self.err("expected ')'");
                }
                return Ok(Part::Family(fam, n));
            }
        }
        let start = self.pos;
        let lo = self.number()?;
        if lo == 0 {
            self.pos = start;
            return self.err("elements start at 1");
        }
        self.skip_ws();
        if self.eat("..") {
            self.skip_ws();
            let hi = self.number()?;
            if hi < lo {
                self.pos = start;
                return self.err(format!("empty interval {lo}..{hi}"));
            }
            return Ok(Part::Range(lo, hi));
        }
        Ok(Part::Single(lo))
    }
}

/// Parses a set literal. `n` fixes the ambient interval when given.
pub fn parse_set(literal: &str, n: Option<usize>) -> Result<IntegerSet> {
    let mut cur = Cursor {
        src: literal.as_bytes(),
        pos: 0,
    };
    cur.skip_ws();
    let mut parts = Vec::new();
    if cur.eat("{}") {
        cur.skip_ws();
        if cur.peek().is_some() {
            return cur.err("unexpected input after {}");
        }
    } else {
        loop {
            let start = cur.pos;
            parts.push((start, cur.part()?));
            cur.skip_ws();
            match cur.peek() {
                None => break,
                Some(b',') | Some(b'+') => cur.pos += 1,
                Some(c) => return cur.err(format!("unexpected character {:?}", c as char)),
            }
        }
    }

    let inferred = parts
        .iter()
        .map(|(_, p)| match *p {
            Part::Single(x) => x,
            Part::Range(_, hi) => hi,
            Part::Family(_, m) => m,
        })
        .max()
        .unwrap_or(0);
    let ambient = match n {
        Some(n) => {
            if inferred > n {
                return Err(Error::domain(format!(
                    "literal {literal:?} reaches {inferred}, beyond n = {n}"
                )));
            }
            n
        }
        None => inferred,
    };

    let mut out = IntegerSet::empty(ambient);
    for (pos, part) in parts {
        let piece = match part {
            Part::Single(x) => IntegerSet::from_members(ambient, [x])?,
            Part::Range(lo, hi) => IntegerSet::interval(ambient, lo, hi)?,
            Part::Family(f, m) => f.build(m).map_err(|e| match e {
                Error::Domain(msg) => Error::Parse { position: pos, message: msg },
                other => other,
            })?,
        };
        out = out.union(&piece);
    }
    Ok(out)
}
