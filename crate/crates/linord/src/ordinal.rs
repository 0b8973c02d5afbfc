//! Exact ordinal arithmetic in Cantor normal form below epsilon_0.
//!
//! An [`Ordinal`] is a finite sum `w^e1*c1 + ... + w^ek*ck` with strictly
//! decreasing exponents (themselves ordinals) and positive integer
//! coefficients; the empty sum is `0`. All operations are exact.

use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("left subtraction underflow: minuend is smaller than subtrahend")]
    Underflow,
    #[error("threshold is only defined for ordinals >= w")]
    TooSmall,
    #[error("support position {0} is not below the sum length")]
    PositionOutOfRange(String),
    #[error("ordinal syntax error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}

/// Cantor normal form. `terms` holds `(exponent, coefficient)` pairs with
/// strictly decreasing exponents and coefficients >= 1.
///
/// The derived lexicographic order on the term list coincides with the
/// ordinal order, so `Ord` can be derived.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: vec![] }
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(Self::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(&Self::from_nat(1))
    }

    /// `w^e`.
    pub fn omega_pow(e: &Ordinal) -> Self {
        Ordinal { terms: vec![(e.clone(), 1)] }
    }

    /// `w^e * c`; `c = 0` yields `0`.
    pub fn monomial(e: Ordinal, c: u64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(e, c)] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.len() <= 1 && self.terms.first().map_or(true, |(e, _)| e.is_zero())
    }

    pub fn as_finite(&self) -> Option<u64> {
        if self.is_zero() {
            Some(0)
        } else if self.is_finite() {
            Some(self.terms[0].1)
        } else {
            None
        }
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.terms.last().map_or(false, |(e, _)| !e.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().map_or(false, |(e, _)| e.is_zero())
    }

    /// Leading exponent; `None` for 0.
    pub fn leading_exp(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut t = self.terms.clone();
        let last = t.last_mut().unwrap();
        if last.1 > 1 {
            last.1 -= 1;
        } else {
            t.pop();
        }
        Some(Ordinal { terms: t })
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::from_nat(1))
    }

    /// Ordinal sum `self + rhs`.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.leading_exp() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> = self
            .terms
            .iter()
            .filter(|(e, _)| e > lead)
            .cloned()
            .collect();
        let mut rest = rhs.terms.clone();
        if let Some((e, c)) = self.terms.iter().find(|(e, _)| e == lead) {
            let _ = e;
            rest[0].1 += c;
        }
        terms.extend(rest);
        Ordinal { terms }
    }

    /// Ordinal product `self * rhs`.
    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        if self.is_zero() || rhs.is_zero() {
            return Ordinal::zero();
        }
        let lead_e = self.terms[0].0.clone();
        let lead_c = self.terms[0].1;
        let mut acc = Ordinal::zero();
        for (f, d) in &rhs.terms {
            if f.is_zero() {
                // Right factor finite: multiply the leading coefficient, keep the tail.
                let mut terms = vec![(lead_e.clone(), lead_c * d)];
                terms.extend(self.terms.iter().skip(1).cloned());
                acc = acc.add(&Ordinal { terms });
            } else {
                acc = acc.add(&Ordinal::monomial(lead_e.add(f), *d));
            }
        }
        acc
    }

    /// Unique `c` with `self + c = rhs`; errors if `self > rhs`.
    pub fn left_sub(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if self > rhs {
            return Err(OrdinalError::Underflow);
        }
        let mut i = 0;
        while i < self.terms.len() && i < rhs.terms.len() && self.terms[i] == rhs.terms[i] {
            i += 1;
        }
        if i == self.terms.len() {
            return Ok(Ordinal { terms: rhs.terms[i..].to_vec() });
        }
        // First differing position: rhs must dominate from here.
        let (e, c) = &self.terms[i];
        let (f, d) = &rhs.terms[i];
        if e < f {
            Ok(Ordinal { terms: rhs.terms[i..].to_vec() })
        } else {
            // e == f and c < d (e > f would contradict self <= rhs).
            debug_assert!(e == f && c < d);
            let mut terms = vec![(f.clone(), d - c)];
            terms.extend(rhs.terms[i + 1..].iter().cloned());
            Ok(Ordinal { terms })
        }
    }

    /// Hessenberg (natural) sum: coefficient-wise CNF addition.
    pub fn hessenberg(&self, rhs: &Ordinal) -> Ordinal {
        let mut terms: Vec<(Ordinal, u64)> = vec![];
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            if i == self.terms.len() {
                terms.push(rhs.terms[j].clone());
                j += 1;
            } else if j == rhs.terms.len() {
                terms.push(self.terms[i].clone());
                i += 1;
            } else {
                let (e, c) = &self.terms[i];
                let (f, d) = &rhs.terms[j];
                match e.cmp(f) {
                    Ordering::Greater => {
                        terms.push((e.clone(), *c));
                        i += 1;
                    }
                    Ordering::Less => {
                        terms.push((f.clone(), *d));
                        j += 1;
                    }
                    Ordering::Equal => {
                        terms.push((e.clone(), c + d));
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        Ordinal { terms }
    }

    /// Additively indecomposable: `w^d` for some `d`, i.e. a single CNF term
    /// with coefficient 1 (this includes 1 = w^0).
    pub fn is_additively_indecomposable(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1 == 1
    }

    /// Multiplicatively indecomposable: `2` or `w^(w^xi)`.
    pub fn is_multiplicatively_indecomposable(&self) -> bool {
        if self.as_finite() == Some(2) {
            return true;
        }
        self.terms.len() == 1
            && self.terms[0].1 == 1
            && self.terms[0].0.is_additively_indecomposable()
    }

    /// Largest multiplicatively indecomposable ordinal `<= self`;
    /// requires `self >= w`.
    pub fn threshold(&self) -> Result<Ordinal, OrdinalError> {
        if self < &Ordinal::omega() {
            return Err(OrdinalError::TooSmall);
        }
        // self = w^e * c + ...; the answer is w^(w^x) with x the leading
        // exponent of e: w^(w^x) <= w^e <= self, and the next candidate
        // w^(w^(x+1)) has exponent w^(x+1) > e.
        let e = self.leading_exp().unwrap();
        let x = e.leading_exp().expect("e >= 1 since self >= w");
        Ok(Ordinal::omega_pow(&Ordinal::omega_pow(x)))
    }

    /// Exact value of `sum_{k < alpha} (1 + b_k)` where `b_k` is given by
    /// `mods` on finitely many positions `k < alpha` and is 0 elsewhere.
    ///
    /// The sum is computed by splitting `alpha` at the support positions:
    /// a gap of length `g` contributes `g`, a supported position contributes
    /// `1 + b_k`.
    pub fn sum_with_finite_support(
        alpha: &Ordinal,
        mods: &[(Ordinal, Ordinal)],
    ) -> Result<Ordinal, OrdinalError> {
        let mut support: Vec<(Ordinal, Ordinal)> = mods.to_vec();
        support.sort_by(|a, b| a.0.cmp(&b.0));
        support.dedup_by(|a, b| a.0 == b.0);
        for (k, _) in &support {
            if k >= alpha {
                return Err(OrdinalError::PositionOutOfRange(k.to_string()));
            }
        }
        let mut acc = Ordinal::zero();
        let mut consumed = Ordinal::zero(); // positions handled so far
        for (k, beta) in &support {
            let gap = consumed.left_sub(k).expect("support is sorted");
            acc = acc.add(&gap);
            acc = acc.add(&Ordinal::from_nat(1)).add(beta);
            consumed = k.succ();
        }
        if consumed <= *alpha {
            let tail = consumed.left_sub(alpha).expect("consumed <= alpha");
            acc = acc.add(&tail);
        }
        Ok(acc)
    }

    /// Parse the `w^E*C + ... + C0` syntax, e.g. `w^2+w*3+1`.
    pub fn parse(s: &str) -> Result<Ordinal, OrdinalError> {
        let mut p = OrdParser { s: s.as_bytes(), pos: 0 };
        let o = p.sum()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(o)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{c}")?;
            } else {
                if e.as_finite() == Some(1) {
                    write!(f, "w")?;
                } else if e.is_finite() || (e.terms.len() == 1 && e.terms[0].1 == 1 && e.terms[0].0.is_finite()) {
                    // simple enough to print without parentheses
                    write!(f, "w^{e}")?;
                } else {
                    write!(f, "w^({e})")?;
                }
                if *c > 1 {
                    write!(f, "*{c}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct OrdParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> OrdParser<'a> {
    fn err(&self, msg: &str) -> OrdinalError {
        OrdinalError::Parse { col: self.pos + 1, msg: msg.to_string() }
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

    fn nat(&mut self) -> Result<u64, OrdinalError> {
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
            .map_err(|_| self.err("number too large"))
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.monomial()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let m = self.monomial()?;
            acc = acc.add(&m);
        }
        Ok(acc)
    }

    fn monomial(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    match self.peek() {
                        Some(b'(') => {
                            self.pos += 1;
                            let e = self.sum()?;
                            if self.peek() != Some(b')') {
                                return Err(self.err("expected ')'"));
                            }
                            self.pos += 1;
                            e
                        }
                        Some(b'w') => {
                            self.pos += 1;
                            Ordinal::omega()
                        }
                        Some(c) if c.is_ascii_digit() => Ordinal::from_nat(self.nat()?),
                        _ => return Err(self.err("expected an exponent")),
                    }
                } else {
                    Ordinal::from_nat(1)
                };
                let coeff = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.nat()?
                } else {
                    1
                };
                if coeff == 0 {
                    return Ok(Ordinal::zero());
                }
                Ok(Ordinal::monomial(exp, coeff))
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            _ => Err(self.err("expected 'w' or a number")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "1", "w", "w+1", "w^2+w*3+1", "w^w", "w^(w+1)*2+w^2*5+3", "w^3*2"] {
            let o = ord(s);
            assert_eq!(Ordinal::parse(&o.to_string()).unwrap(), o, "{s}");
        }
    }

    #[test]
    fn add_absorbs_finite_left() {
        assert_eq!(ord("1").add(&ord("w")), ord("w"));
        assert_eq!(ord("w").add(&ord("1")), ord("w+1"));
    }

    #[test]
    fn add_hand_computed() {
        // (w^2+w) + w*2 = w^2 + w*3
        assert_eq!(ord("w^2+w").add(&ord("w*2")), ord("w^2+w*3"));
    }

    #[test]
    fn mul_hand_computed() {
        assert_eq!(ord("w").mul(&ord("2")), ord("w*2"));
        assert_eq!(ord("w+1").mul(&ord("w")), ord("w^2"));
        assert_eq!(ord("2").mul(&ord("w")), ord("w"));
        assert_eq!(ord("w+2").mul(&ord("w^2+3")), ord("w^3+w*3+2"));
    }

    #[test]
    fn left_sub_hand_computed() {
        assert_eq!(ord("w").left_sub(&ord("w*2")).unwrap(), ord("w"));
        assert_eq!(ord("3").left_sub(&ord("w+5")).unwrap(), ord("w+5"));
        assert_eq!(ord("w+1").left_sub(&ord("w")), Err(OrdinalError::Underflow));
        assert_eq!(ord("w+1").left_sub(&ord("w+4")).unwrap(), ord("3"));
    }

    #[test]
    fn hessenberg_examples() {
        assert_eq!(ord("w").hessenberg(&ord("1")), ord("w+1"));
        assert_eq!(ord("1").hessenberg(&ord("w")), ord("w+1"));
        assert_eq!(ord("w^2+w").hessenberg(&ord("w*2+1")), ord("w^2+w*3+1"));
    }

    #[test]
    fn indecomposability_table() {
        let cases = [
            ("w^2", true, false),
            ("w*2", false, false),
            ("w^w", true, true),
            ("w", true, true),
            ("2", false, true),
            ("1", true, false),
        ];
        for (s, add, mult) in cases {
            let g = ord(s);
            assert_eq!(g.is_additively_indecomposable(), add, "{s} additive");
            assert_eq!(g.is_multiplicatively_indecomposable(), mult, "{s} multiplicative");
        }
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(ord("w").threshold().unwrap(), ord("w"));
        assert_eq!(ord("w^3+w").threshold().unwrap(), ord("w"));
        assert_eq!(ord("w^w*3").threshold().unwrap(), ord("w^w"));
        assert_eq!(ord("w^(w^2)+w^w").threshold().unwrap(), ord("w^(w^2)"));
        assert_eq!(ord("5").threshold(), Err(OrdinalError::TooSmall));
    }

    #[test]
    fn sum_with_finite_support_examples() {
        // alpha = w, mods {0 -> w}: (1+w) then w-many 1s = w*2
        let s = Ordinal::sum_with_finite_support(&ord("w"), &[(ord("0"), ord("w"))]).unwrap();
        assert_eq!(s, ord("w*2"));
        // alpha = 3, no mods: 3
        let s = Ordinal::sum_with_finite_support(&ord("3"), &[]).unwrap();
        assert_eq!(s, ord("3"));
        // alpha = w^2, mods {w -> w}: w + (1+w) + tail = w^2
        let s = Ordinal::sum_with_finite_support(&ord("w^2"), &[(ord("w"), ord("w"))]).unwrap();
        assert_eq!(s, ord("w^2"));
        // out of range
        assert!(Ordinal::sum_with_finite_support(&ord("3"), &[(ord("5"), ord("1"))]).is_err());
    }

    #[test]
    fn order_is_cnf_order() {
        assert!(ord("w") < ord("w+1"));
        assert!(ord("w+3") < ord("w*2"));
        assert!(ord("w^2") > ord("w*99+7"));
        assert!(ord("w^w") > ord("w^5*9"));
    }
}
