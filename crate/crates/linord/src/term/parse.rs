//! Parser for the ASCII term grammar and the CLI class syntax.
//!
//! ```text
//! term := sum ; sum := prod ("+" prod)* ; prod := atom ("*" atom)*
//! atom := NAT | "w" ["^" ordexp] | "w*" | "z" | "q"
//!       | "shuffle(" labels ")" | "ishuffle(" RAT "," RAT ")"
//!       | "zpow(" ordinal ")" | "ord(" ordinal ")" | "rev(" term ")"
//!       | "tsum(" ordinal ";" term ")" | "zsum(" term ")"
//!       | "e1(" RAT,... ";" RAT ")" | "(" term ")"
//! ```
//!
//! `a*b` is the `b`-indexed sum of copies of `a`. A `*` directly after `w`
//! is read as the reverse order `w*` unless an atom follows, so `w*3` is
//! `w` repeated three times while `w*+1` is the reverse of `w` plus a point.
//! Runs of pure ordinal syntax fold into a single ordinal term, so
//! `w^2+w*3+1` denotes the ordinal `w^2+w*3+1`.

use super::{E1Seq, LabelSet, PeriodicSet, Term};
use crate::lclass::ClassId;
use crate::ordinal::Ordinal;
use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at column {col}: {msg}")]
pub struct ParseError {
    pub col: usize,
    pub msg: String,
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = P::new(text);
    p.skip_ws();
    if p.rest().is_empty() {
        return Err(p.err("empty input"));
    }
    let t = p.sum()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(t)
}

struct P<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> P<'a> {
    fn new(s: &'a str) -> P<'a> {
        P { s: s.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError { col: self.pos + 1, msg: msg.to_string() }
    }

    fn rest(&self) -> &[u8] {
        &self.s[self.pos.min(self.s.len())..]
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn rational(&mut self) -> Result<Rational64, ParseError> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let num = self.nat()? as i64;
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.nat()? as i64;
            if d == 0 {
                return Err(self.err("zero denominator"));
            }
            d
        } else {
            1
        };
        let r = Rational64::new(num, den);
        Ok(if neg { -r } else { r })
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut parts = vec![self.prod()?];
        while self.peek() == Some(b'+') {
            self.pos += 1;
            parts.push(self.prod()?);
        }
        Ok(fold_ordinal_sum(parts))
    }

    fn prod(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        loop {
            self.skip_ws();
            // A '*' continues the product only if an atom follows; this is
            // what keeps "w*" unambiguous.
            if self.peek() == Some(b'*') && self.atom_follows(self.pos + 1) {
                self.pos += 1;
                let rhs = self.atom()?;
                acc = fold_ordinal_prod(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn atom_follows(&self, mut at: usize) -> bool {
        while at < self.s.len() && self.s[at].is_ascii_whitespace() {
            at += 1;
        }
        matches!(self.s.get(at), Some(c) if c.is_ascii_digit() || matches!(c, b'w' | b'z' | b'q' | b's' | b'i' | b'r' | b'o' | b'e' | b't' | b'('))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                if n == 0 {
                    return Err(self.err("orders are nonempty: finite chains need n >= 1"));
                }
                Ok(Term::FiniteChain(n))
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.sum()?;
                self.expect(b')')?;
                Ok(t)
            }
            Some(b'w') => {
                self.pos += 1;
                if self.s.get(self.pos) == Some(&b'^') {
                    self.pos += 1;
                    let e = self.ord_exponent()?;
                    return Ok(Term::OrdTerm(Ordinal::omega_pow(&e)));
                }
                // "w*" is omega-star unless an atom follows the star.
                if self.s.get(self.pos) == Some(&b'*') && !self.atom_follows(self.pos + 1) {
                    self.pos += 1;
                    return Ok(Term::OmegaStar);
                }
                Ok(Term::Omega)
            }
            Some(b'z') => {
                if self.eat_word("zpow(") {
                    let g = self.ordinal_arg()?;
                    self.expect(b')')?;
                    return Ok(Term::ZPow(g));
                }
                if self.eat_word("zsum(") {
                    let t = self.sum()?;
                    self.expect(b')')?;
                    return Ok(Term::ZetaSum { payload: Box::new(t) });
                }
                self.pos += 1;
                Ok(Term::Zeta)
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(Term::eta())
            }
            Some(b's') => {
                if self.eat_word("shuffle(") {
                    let s = self.labels()?;
                    self.expect(b')')?;
                    return Ok(Term::Shuffle(s));
                }
                Err(self.err("expected a term atom"))
            }
            Some(b'i') => {
                if self.eat_word("ishuffle(") {
                    let lo = self.rational()?;
                    self.expect(b',')?;
                    let hi = self.rational()?;
                    self.expect(b')')?;
                    if lo >= hi {
                        return Err(self.err("ishuffle needs lo < hi"));
                    }
                    return Ok(Term::IntervalShuffle(lo, hi));
                }
                Err(self.err("expected a term atom"))
            }
            Some(b'r') => {
                if self.eat_word("rev(") {
                    let t = self.sum()?;
                    self.expect(b')')?;
                    return Ok(Term::Rev(Box::new(t)));
                }
                Err(self.err("expected a term atom"))
            }
            Some(b'o') => {
                if self.eat_word("ord(") {
                    let o = self.ordinal_arg()?;
                    self.expect(b')')?;
                    if o.is_zero() {
                        return Err(self.err("ordinal terms denote nonempty orders"));
                    }
                    return Ok(Term::OrdTerm(o));
                }
                Err(self.err("expected a term atom"))
            }
            Some(b't') => {
                if self.eat_word("tsum(") {
                    let g = self.ordinal_arg()?;
                    self.expect(b';')?;
                    let t = self.sum()?;
                    self.expect(b')')?;
                    return Ok(Term::ThresholdSum { gamma: g, payload: Box::new(t) });
                }
                Err(self.err("expected a term atom"))
            }
            Some(b'e') => {
                if self.eat_word("e1(") {
                    let mut prefix = vec![];
                    if self.peek() != Some(b';') {
                        prefix.push(self.rational()?);
                        while self.eat(b',') {
                            prefix.push(self.rational()?);
                        }
                    }
                    self.expect(b';')?;
                    let tail = self.rational()?;
                    self.expect(b')')?;
                    if prefix.iter().chain([&tail]).any(|r| *r <= Rational64::new(0, 1)) {
                        return Err(self.err("e1 sequences have positive entries"));
                    }
                    return Ok(Term::E1Image(E1Seq { prefix, tail }));
                }
                Err(self.err("expected a term atom"))
            }
            _ => Err(self.err("expected a term atom")),
        }
    }

    /// Exponent after `w^`: a number, `w`, `w^...`, or a parenthesized
    /// ordinal expression.
    fn ord_exponent(&mut self) -> Result<Ordinal, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            Some(b'w') => {
                self.pos += 1;
                if self.s.get(self.pos) == Some(&b'^') {
                    self.pos += 1;
                    let e = self.ord_exponent()?;
                    Ok(Ordinal::omega_pow(&e))
                } else {
                    Ok(Ordinal::omega())
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let o = self.ordinal_arg()?;
                self.expect(b')')?;
                Ok(o)
            }
            _ => Err(self.err("expected an ordinal exponent")),
        }
    }

    /// A full ordinal in `w^E*C+...+C0` syntax.
    fn ordinal_arg(&mut self) -> Result<Ordinal, ParseError> {
        let start = self.pos;
        let mut depth = 0usize;
        while self.pos < self.s.len() {
            match self.s[self.pos] {
                b'(' => depth += 1,
                b')' | b';' | b',' if depth == 0 => break,
                b')' => depth -= 1,
                _ => {}
            }
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ordinal::parse(text).map_err(|e| ParseError {
            col: start + 1,
            msg: format!("bad ordinal: {e}"),
        })
    }

    fn labels(&mut self) -> Result<LabelSet, ParseError> {
        if self.peek() == Some(b'@') {
            self.pos += 1;
            if self.eat_word("evens") {
                return Ok(LabelSet::Periodic(PeriodicSet::evens()));
            }
            if self.eat_word("odds") {
                return Ok(LabelSet::Periodic(PeriodicSet::odds()));
            }
            if self.eat_word("all") {
                return Ok(LabelSet::Periodic(PeriodicSet::all()));
            }
            if self.eat_word("bits:") {
                let bits = |p: &mut Self| -> Result<Vec<bool>, ParseError> {
                    let mut v = vec![];
                    while let Some(c) = p.s.get(p.pos) {
                        match c {
                            b'0' => v.push(false),
                            b'1' => v.push(true),
                            _ => break,
                        }
                        p.pos += 1;
                    }
                    Ok(v)
                };
                let prefix = bits(self)?;
                self.expect(b':')?;
                let period = bits(self)?;
                return PeriodicSet::new(prefix, period)
                    .map(LabelSet::Periodic)
                    .ok_or_else(|| self.err("periodic label set must be infinite"));
            }
            return Err(self.err("unknown symbolic label set"));
        }
        let mut labels = vec![self.sum()?];
        while self.eat(b',') {
            labels.push(self.sum()?);
        }
        LabelSet::finite(labels).map_err(|e| self.err(&e.to_string()))
    }
}

fn ordinal_atom_value(t: &Term) -> Option<Ordinal> {
    match t {
        Term::FiniteChain(n) => Some(Ordinal::from_nat(*n)),
        Term::Omega => Some(Ordinal::omega()),
        Term::OrdTerm(a) => Some(a.clone()),
        _ => None,
    }
}

/// `w^E * c` and friends fold to a single ordinal at parse time.
fn fold_ordinal_prod(l: Term, r: Term) -> Term {
    if let (Some(a), Term::FiniteChain(n)) = (ordinal_atom_value(&l), &r) {
        if matches!(l, Term::Omega | Term::OrdTerm(_)) {
            return Term::OrdTerm(a.mul(&Ordinal::from_nat(*n)));
        }
    }
    Term::prod(l, r)
}

/// Sums of pure ordinal syntax fold; anything else is kept verbatim.
fn fold_ordinal_sum(parts: Vec<Term>) -> Term {
    if parts.len() == 1 {
        return parts.into_iter().next().unwrap();
    }
    let mut out: Vec<Term> = vec![];
    let mut run: Vec<Term> = vec![];
    let flush = |run: &mut Vec<Term>, out: &mut Vec<Term>| {
        if run.iter().any(|t| matches!(t, Term::OrdTerm(_))) {
            let mut acc = Ordinal::zero();
            for t in run.iter() {
                acc = acc.add(&ordinal_atom_value(t).unwrap());
            }
            out.push(Term::OrdTerm(acc));
        } else {
            out.append(run);
        }
        run.clear();
    };
    for p in parts {
        if ordinal_atom_value(&p).is_some() {
            run.push(p);
        } else {
            flush(&mut run, &mut out);
            out.push(p);
        }
    }
    flush(&mut run, &mut out);
    Term::sum(out)
}

/// CLI class syntax: `one`, `fin`, `wo`, `scat`, `lin`, `le:n:3`,
/// `lt:ord:w*2`, `le:zpow:2`, `le:term:<term>`, `custom:noztail`.
pub fn parse_class(text: &str) -> Result<ClassId, ParseError> {
    let t = text.trim();
    match t {
        "one" => return Ok(ClassId::One),
        "fin" => return Ok(ClassId::FinCls),
        "wo" => return Ok(ClassId::WOCls),
        "scat" => return Ok(ClassId::ScatCls),
        "lin" => return Ok(ClassId::LinCls),
        _ => {}
    }
    let bad = |msg: &str| ParseError { col: 1, msg: msg.to_string() };
    if let Some(rest) = t.strip_prefix("le:n:") {
        let n: u64 = rest.parse().map_err(|_| bad("le:n: needs a positive integer"))?;
        if n == 0 {
            return Err(bad("le:n: needs a positive integer"));
        }
        return Ok(ClassId::LeN(n));
    }
    if let Some(rest) = t.strip_prefix("lt:ord:") {
        let o = Ordinal::parse(rest).map_err(|e| bad(&e.to_string()))?;
        if o.is_zero() || o.as_finite() == Some(1) {
            return Err(bad("lt:ord: needs an ordinal >= 2"));
        }
        return Ok(ClassId::LtOrd(o));
    }
    if let Some(rest) = t.strip_prefix("le:zpow:") {
        let o = Ordinal::parse(rest).map_err(|e| bad(&e.to_string()))?;
        return Ok(ClassId::LeZpow(o));
    }
    if let Some(rest) = t.strip_prefix("le:term:") {
        let term = parse_term(rest)?;
        return Ok(ClassId::le_term(term));
    }
    if let Some(rest) = t.strip_prefix("custom:") {
        return ClassId::custom(rest).ok_or_else(|| bad("unknown custom class"));
    }
    Err(bad("unknown class"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_cases() {
        let t = parse_term("(z+1)*3").unwrap();
        assert_eq!(
            t,
            Term::prod(Term::Sum(vec![Term::Zeta, Term::FiniteChain(1)]), Term::FiniteChain(3))
        );
        let t = parse_term("w^2+w*3+1").unwrap();
        assert_eq!(t, Term::OrdTerm(Ordinal::parse("w^2+w*3+1").unwrap()));
    }

    #[test]
    fn malformed_input_positions() {
        let e = parse_term("z++").unwrap_err();
        assert_eq!(e.col, 3);
        assert!(parse_term("").is_err());
        assert!(parse_term("shuffle()").is_err());
        assert!(parse_term("ishuffle(1,1)").is_err());
        assert!(parse_term("0").is_err());
    }

    #[test]
    fn omega_star_disambiguation() {
        assert_eq!(parse_term("w*").unwrap(), Term::OmegaStar);
        assert_eq!(parse_term("w*+1").unwrap(), Term::Sum(vec![Term::OmegaStar, Term::FiniteChain(1)]));
        // a star followed by an atom multiplies
        assert_eq!(parse_term("w*3").unwrap(), Term::OrdTerm(Ordinal::parse("w*3").unwrap()));
        assert_eq!(
            parse_term("z*w").unwrap(),
            Term::prod(Term::Zeta, Term::Omega)
        );
    }

    #[test]
    fn display_roundtrip() {
        for s in [
            "z*3+1",
            "shuffle(1,2)",
            "shuffle(@bits::01)",
            "ishuffle(0,1/2)",
            "zpow(2)",
            "rev(ord(w^2))",
            "w*+w",
            "tsum(w;2)",
            "zsum(1)",
            "e1(5;1)",
        ] {
            let t = parse_term(s).unwrap();
            let back = parse_term(&t.to_string()).unwrap();
            assert_eq!(t, back, "{s}");
        }
    }
}
