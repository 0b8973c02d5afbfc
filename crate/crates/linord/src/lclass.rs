//! Downward-closed classes of countable linear orders: membership,
//! closure under convex sums, and bounded counterexample search.
//!
//! A class is closed under convex sums (ccs) when gluing convex subsets of
//! one member along another member stays in the class; this is exactly
//! what makes the class-indexed convex embeddability relation transitive.
//! `ccs_check` answers from the classified table and attaches a verified
//! witness to every failure; `ccs_witness_search` is the independent
//! falsifier that hunts for witnesses without consulting the table.

use crate::engine;
use crate::ordinal::Ordinal;
use crate::term::{
    finite_size, is_scattered, is_scattered_word, normalize, normalize_word, ordinal_value,
    Term, Word,
};
use crate::zcalc::{word_embeds_zpow, B3};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClassId {
    /// `{1}`
    One,
    /// all finite linear orders
    FinCls,
    /// finite chains of size at most `n`
    LeN(u64),
    /// well-orders strictly below `gamma`
    LtOrd(Ordinal),
    /// orders embeddable into `Z^gamma`
    LeZpow(Ordinal),
    /// well-orders
    WOCls,
    /// scattered orders
    ScatCls,
    /// all countable linear orders
    LinCls,
    /// orders embeddable into a fixed term
    LeTerm(Box<Term>),
    /// a named predicate, asserted downward-closed
    Custom(CustomClass),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CustomClass {
    /// Orders into which neither `z*w` nor `z*w*` embeds.
    NoZetaTail,
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassId::One => write!(f, "one"),
            ClassId::FinCls => write!(f, "fin"),
            ClassId::LeN(n) => write!(f, "le:n:{n}"),
            ClassId::LtOrd(g) => write!(f, "lt:ord:{g}"),
            ClassId::LeZpow(g) => write!(f, "le:zpow:{g}"),
            ClassId::WOCls => write!(f, "wo"),
            ClassId::ScatCls => write!(f, "scat"),
            ClassId::LinCls => write!(f, "lin"),
            ClassId::LeTerm(t) => write!(f, "le:term:{t}"),
            ClassId::Custom(CustomClass::NoZetaTail) => write!(f, "custom:noztail"),
        }
    }
}

impl ClassId {
    pub fn le_term(t: Term) -> ClassId {
        ClassId::LeTerm(Box::new(normalize(&t)))
    }

    pub fn custom(name: &str) -> Option<ClassId> {
        match name {
            "noztail" => Some(ClassId::Custom(CustomClass::NoZetaTail)),
            _ => None,
        }
    }

    /// Three-valued membership.
    pub fn member_term(&self, t: &Term) -> B3 {
        let w = normalize_word(t);
        self.member_word(&w)
    }

    pub(crate) fn member_word(&self, w: &Word) -> B3 {
        match self {
            ClassId::One => B3::from_bool(w.letters() == [Term::FiniteChain(1)]),
            ClassId::FinCls => B3::from_bool(finite_size(w).is_some()),
            ClassId::LeN(n) => B3::from_bool(finite_size(w).map_or(false, |s| s <= *n)),
            ClassId::WOCls => B3::from_bool(ordinal_value(w).is_some()),
            ClassId::LtOrd(g) => match ordinal_value(w) {
                Some(v) => B3::from_bool(v < *g),
                None => B3::No,
            },
            ClassId::ScatCls => B3::from_bool(is_scattered_word(w)),
            ClassId::LinCls => B3::Yes,
            ClassId::LeZpow(g) => {
                if !is_scattered_word(w) {
                    B3::No
                } else {
                    word_embeds_zpow(w, g)
                }
            }
            ClassId::LeTerm(t0) => engine::embeds(&w.to_term(), t0).as_b3(),
            ClassId::Custom(CustomClass::NoZetaTail) => {
                let zw = Term::prod(Term::Zeta, Term::Omega);
                let zws = Term::prod(Term::Zeta, Term::OmegaStar);
                let a = engine::embeds(&zw, &w.to_term()).as_b3();
                let b = engine::embeds(&zws, &w.to_term()).as_b3();
                not3(a).and(|| not3(b))
            }
        }
    }

    /// Membership as a verdict.
    pub fn member(&self, t: &Term) -> engine::Verdict {
        engine::Verdict::from_b3(
            self.member_term(t),
            "membership",
            &format!("membership in {self}"),
        )
    }

    /// Sizes of the finite chains of size at most `n` in the class.
    pub fn finite_members(&self, n: u64) -> Vec<u64> {
        (1..=n)
            .filter(|k| self.member_term(&Term::FiniteChain(*k)) == B3::Yes)
            .collect()
    }

    /// Largest finite chain in the class; `None` when unbounded.
    pub fn max_finite_chain(&self) -> Option<u64> {
        match self {
            ClassId::One => Some(1),
            ClassId::LeN(n) => Some(*n),
            ClassId::LtOrd(g) => g.as_finite().map(|n| n - 1),
            ClassId::LeZpow(g) => {
                if g.is_zero() {
                    Some(1)
                } else {
                    None
                }
            }
            ClassId::LeTerm(t0) => {
                let w = normalize_word(t0);
                finite_size(&w)
            }
            _ => None,
        }
    }

    /// Does the class consist of finite orders only?
    pub fn all_members_finite(&self) -> bool {
        match self {
            ClassId::One | ClassId::FinCls | ClassId::LeN(_) => true,
            ClassId::LtOrd(g) => *g <= Ordinal::omega(),
            ClassId::LeZpow(g) => g.is_zero(),
            ClassId::LeTerm(t0) => finite_size(&normalize_word(t0)).is_some(),
            _ => false,
        }
    }

    /// Is the class contained in the scattered orders?
    pub fn is_scattered_class(&self) -> bool {
        match self {
            ClassId::LinCls => false,
            ClassId::LeTerm(t0) => is_scattered(t0),
            // every non-scattered order swallows z*w, so the custom class
            // is scattered too
            _ => true,
        }
    }

    /// Partial subset knowledge for comparable registry pairs.
    pub fn subset_hint(&self, other: &ClassId) -> Option<bool> {
        use ClassId::*;
        if self == other {
            return Some(true);
        }
        let rank = |c: &ClassId| match c {
            One => Some(0u8),
            FinCls => Some(1),
            WOCls => Some(2),
            ScatCls => Some(3),
            LinCls => Some(4),
            _ => None,
        };
        match (self, other) {
            (One, _) => Some(true),
            (_, One) => Some(false),
            (LeN(a), LeN(b)) => Some(a <= b),
            (LeN(_), FinCls | WOCls | ScatCls | LinCls) => Some(true),
            (LeN(a), LtOrd(g)) => Some(Ordinal::from_nat(*a) < *g),
            (LeN(_), LeZpow(g)) => Some(!g.is_zero()),
            (FinCls, LtOrd(g)) => Some(!g.is_finite()),
            (FinCls, LeZpow(g)) => Some(!g.is_zero()),
            (LtOrd(a), LtOrd(b)) => Some(a <= b),
            (LtOrd(_), WOCls | ScatCls | LinCls) => Some(true),
            (LeZpow(a), LeZpow(b)) => Some(a <= b),
            (LeZpow(_), ScatCls | LinCls) => Some(true),
            (LeZpow(g), WOCls) => Some(g.is_zero()),
            (WOCls, LtOrd(_) | LeZpow(_)) => Some(false),
            (ScatCls, LtOrd(_) | LeZpow(_) | WOCls) => Some(false),
            (a, b) => match (rank(a), rank(b)) {
                (Some(x), Some(y)) => Some(x <= y),
                _ => None,
            },
        }
    }
}

fn not3(b: B3) -> B3 {
    match b {
        B3::Yes => B3::No,
        B3::No => B3::Yes,
        B3::Maybe => B3::Maybe,
    }
}

/// A certified violation of closure under convex sums: convex subsets of
/// `target`, indexed by `index`, summing to an order outside the class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CcsWitness {
    pub index: Term,
    pub target: Term,
    pub family: ConvexFamily,
    pub sum: Term,
}

/// The convex-piece family, in the finite-support shapes the proofs use.
/// Pieces may share an endpoint; that is what lets a point of the target
/// appear twice in the sum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConvexFamily {
    /// On a finite chain: inclusive intervals `[lo, hi]`, weakly
    /// increasing, adjacent intervals may share an endpoint.
    FiniteIntervals(Vec<(u64, u64)>),
    /// Index `reps + 1`: the singleton `{min target}` repeated `reps`
    /// times, then the whole target.
    SingletonsThenWhole { reps: Ordinal },
    /// Index a limit ordinal: the whole target first, then the singleton
    /// `{max target}` at every later position.
    WholeThenSingletons { index: Ordinal },
    /// Index `w^2`, target `w* * w`: per block, one whole copy of `w*`
    /// followed by its top point repeated `w` times; each block sums to
    /// `z`, and the blocks stack to `z*w`.
    ZetaOmegaBlocks,
}

impl ConvexFamily {
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            ConvexFamily::FiniteIntervals(v) => json!({
                "kind": "finite-intervals",
                "pieces": v.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            }),
            ConvexFamily::SingletonsThenWhole { reps } => json!({
                "kind": "singletons-then-whole",
                "reps": reps.to_string(),
            }),
            ConvexFamily::WholeThenSingletons { index } => json!({
                "kind": "whole-then-singletons",
                "index": index.to_string(),
            }),
            ConvexFamily::ZetaOmegaBlocks => json!({"kind": "zeta-omega-blocks"}),
        }
    }
}

impl CcsWitness {
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        json!({
            "indexOrder": self.index.to_string(),
            "target": self.target.to_string(),
            "family": self.family.to_json(),
            "sum": self.sum.to_string(),
        })
    }
}

/// Recomputes the sum of a witness family and checks every side condition,
/// independently of how the witness was found.
pub fn verify_ccs_witness(class: &ClassId, w: &CcsWitness) -> Result<(), String> {
    if class.member_term(&w.index) != B3::Yes {
        return Err(format!("index order {} is not in {class}", w.index));
    }
    if class.member_term(&w.target) != B3::Yes {
        return Err(format!("target {} is not in {class}", w.target));
    }
    let sum = match &w.family {
        ConvexFamily::FiniteIntervals(v) => {
            let n = finite_size(&normalize_word(&w.target))
                .ok_or("finite-interval family needs a finite target")?;
            let k = finite_size(&normalize_word(&w.index))
                .ok_or("finite-interval family needs a finite index")?;
            if v.len() as u64 != k {
                return Err("family length does not match the index order".into());
            }
            let mut total = 0;
            let mut prev_hi: Option<u64> = None;
            for (lo, hi) in v {
                if lo > hi || *hi >= n {
                    return Err("piece is empty or out of range".into());
                }
                if let Some(p) = prev_hi {
                    if *lo < p {
                        return Err("pieces are not weakly increasing".into());
                    }
                }
                prev_hi = Some(*hi);
                total += hi - lo + 1;
            }
            Term::FiniteChain(total)
        }
        ConvexFamily::SingletonsThenWhole { reps } => {
            let alpha = ordinal_value(&normalize_word(&w.target))
                .ok_or("ordinal family needs a well-ordered target")?;
            let idx = ordinal_value(&normalize_word(&w.index))
                .ok_or("ordinal family needs a well-ordered index")?;
            if idx != reps.succ() {
                return Err("index order must be reps + 1".into());
            }
            // sum_{k < reps+1} (1 + b_k) with b_reps = alpha - 1
            let b = pred_or_self(&alpha);
            let total = Ordinal::sum_with_finite_support(&idx, &[(reps.clone(), b)])
                .map_err(|e| e.to_string())?;
            Term::ord(total)
        }
        ConvexFamily::WholeThenSingletons { index } => {
            let alpha1 = ordinal_value(&normalize_word(&w.target))
                .ok_or("ordinal family needs a well-ordered target")?;
            if !alpha1.is_successor() {
                return Err("whole-then-singletons needs a target with a maximum".into());
            }
            let idx = ordinal_value(&normalize_word(&w.index))
                .ok_or("ordinal family needs a well-ordered index")?;
            if idx != *index {
                return Err("index mismatch".into());
            }
            let b = pred_or_self(&alpha1);
            let total = Ordinal::sum_with_finite_support(&idx, &[(Ordinal::zero(), b)])
                .map_err(|e| e.to_string())?;
            Term::ord(total)
        }
        ConvexFamily::ZetaOmegaBlocks => {
            let want_index = Term::OrdTerm(Ordinal::parse("w^2").unwrap());
            let want_target = Term::prod(Term::OmegaStar, Term::Omega);
            if normalize(&w.index) != normalize(&want_index) || normalize(&w.target) != normalize(&want_target) {
                return Err("zeta-omega-blocks is pinned to index w^2 and target w**w".into());
            }
            // Per omega-block: the whole j-th copy of w* (an initial piece)
            // then w repetitions of its top point; the pieces are weakly
            // increasing because the top point closes its own copy and
            // precedes the next copy. Each block sums to w* + w = z.
            Term::prod(Term::Zeta, Term::Omega)
        }
    };
    match crate::term::iso_classify(&sum, &w.sum) {
        crate::term::IsoOutcome::Iso => {}
        _ => return Err(format!("recomputed sum {sum} does not match the stated sum {}", w.sum)),
    }
    if class.member_term(&w.sum) != B3::No {
        return Err(format!("stated sum {} is not outside {class}", w.sum));
    }
    Ok(())
}

fn pred_or_self(a: &Ordinal) -> Ordinal {
    // b with 1 + b = a
    a.pred()
        .filter(|_| a.is_finite())
        .unwrap_or_else(|| a.clone())
}

/// Certified classification of closure under convex sums.
pub fn ccs_check(class: &ClassId) -> (engine::Verdict, Option<CcsWitness>) {
    use engine::Verdict;
    let holds = |rule: &str| (Verdict::holds(rule), None);
    match class {
        ClassId::One => holds("ccs-singleton"),
        ClassId::FinCls => holds("ccs-finite-sums"),
        ClassId::WOCls => holds("ccs-well-orders"),
        ClassId::ScatCls => holds("ccs-scattered-sums"),
        ClassId::LinCls => holds("ccs-everything"),
        ClassId::LeN(1) => holds("ccs-singleton"),
        ClassId::LeN(n) => {
            let w = le_n_witness(*n);
            fails_with(class, w)
        }
        ClassId::LeZpow(_) => holds("ccs-rank-classes"),
        ClassId::LtOrd(g) => ccs_check_lt_ord(class, g),
        ClassId::LeTerm(t0) => {
            let w = normalize_word(t0);
            if !is_scattered_word(&w) {
                return holds("ccs-everything");
            }
            if let Some(n) = finite_size(&w) {
                return if n == 1 {
                    holds("ccs-singleton")
                } else {
                    fails_with(class, le_n_witness(n))
                };
            }
            if let Some(a) = ordinal_value(&w) {
                return ccs_check_lt_ord(class, &a.succ());
            }
            // orders isomorphic to a power of the integers give rank classes
            for g in 0..=crate::term::ZPOW_EXPANSION_BOUND {
                let zp = normalize_word(&Term::ZPow(Ordinal::from_nat(g)));
                if crate::term::word_iso(&w, &zp) == crate::term::IsoOutcome::Iso {
                    return holds("ccs-rank-classes");
                }
            }
            (Verdict::unknown("class is not in the classified table"), None)
        }
        ClassId::Custom(CustomClass::NoZetaTail) => {
            let w = CcsWitness {
                index: Term::OrdTerm(Ordinal::parse("w^2").unwrap()),
                target: Term::prod(Term::OmegaStar, Term::Omega),
                family: ConvexFamily::ZetaOmegaBlocks,
                sum: Term::prod(Term::Zeta, Term::Omega),
            };
            fails_with(class, w)
        }
    }
}

fn fails_with(class: &ClassId, w: CcsWitness) -> (engine::Verdict, Option<CcsWitness>) {
    match verify_ccs_witness(class, &w) {
        Ok(()) => (
            engine::Verdict::fails(
                "ccs-witness",
                format!(
                    "convex subsets of {} indexed by {} sum to {}, which leaves the class",
                    w.target, w.index, w.sum
                ),
            ),
            Some(w),
        ),
        Err(e) => (
            engine::Verdict::unknown(format!("table says non-ccs but the witness failed to verify: {e}")),
            None,
        ),
    }
}

fn le_n_witness(n: u64) -> CcsWitness {
    // index 2, target n: the whole chain, then its top point again
    CcsWitness {
        index: Term::FiniteChain(2),
        target: Term::FiniteChain(n),
        family: ConvexFamily::FiniteIntervals(vec![(0, n - 1), (n - 1, n - 1)]),
        sum: Term::FiniteChain(n + 1),
    }
}

fn ccs_check_lt_ord(class: &ClassId, g: &Ordinal) -> (engine::Verdict, Option<CcsWitness>) {
    use engine::Verdict;
    if let Some(n) = g.as_finite() {
        // finite chains below n
        return if n <= 2 {
            (Verdict::holds("ccs-singleton"), None)
        } else {
            fails_with(class, le_n_witness(n - 1))
        };
    }
    let indec = g.is_additively_indecomposable();
    let succ_of_indec = g
        .pred()
        .map(|p| p.is_additively_indecomposable())
        .unwrap_or(false);
    if indec || succ_of_indec {
        return (Verdict::holds("ccs-indecomposable-bound"), None);
    }
    // Build the classified counterexample.
    let w = if let Some(alpha) = g.pred() {
        // g = alpha + 1 with alpha decomposable: repeat the minimum of
        // alpha along the leading monomial, then take alpha whole.
        let (e, _) = &alpha.terms()[0];
        let beta = Ordinal::omega_pow(e);
        CcsWitness {
            index: Term::ord(beta.succ()),
            target: Term::ord(alpha.clone()),
            family: ConvexFamily::SingletonsThenWhole { reps: beta.clone() },
            sum: Term::ord(beta.add(&alpha)),
        }
    } else {
        // g limit and decomposable: g = alpha + beta with beta limit.
        let (e, c) = &g.terms()[0];
        let (alpha, beta) = if g.terms().len() == 1 {
            // w^e * c with c >= 2
            (
                Ordinal::monomial(e.clone(), c - 1),
                Ordinal::omega_pow(e),
            )
        } else {
            let alpha = Ordinal::monomial(e.clone(), *c);
            let beta = alpha.left_sub(g).expect("alpha is a prefix of g");
            (alpha, beta)
        };
        CcsWitness {
            index: Term::ord(beta.clone()),
            target: Term::ord(alpha.succ()),
            family: ConvexFamily::WholeThenSingletons { index: beta.clone() },
            sum: Term::ord(g.clone()),
        }
    };
    fails_with(class, w)
}

/// Searches for a ccs violation without consulting the classification:
/// finite chains exhaustively, then the two finite-support ordinal shapes
/// over a ladder of class members. Returns the first verified witness.
pub fn ccs_witness_search(class: &ClassId, budget: u64) -> (Option<CcsWitness>, u64) {
    let mut used = 0u64;
    // Finite instances.
    'outer: for n in 1..=6u64 {
        if class.member_term(&Term::FiniteChain(n)) != B3::Yes {
            break;
        }
        for k in 2..=4u64 {
            if class.member_term(&Term::FiniteChain(k)) != B3::Yes {
                break;
            }
            for fam in interval_families(k, n) {
                used += 1;
                if used > budget {
                    break 'outer;
                }
                let total: u64 = fam.iter().map(|(a, b)| b - a + 1).sum();
                if class.member_term(&Term::FiniteChain(total)) == B3::No {
                    let w = CcsWitness {
                        index: Term::FiniteChain(k),
                        target: Term::FiniteChain(n),
                        family: ConvexFamily::FiniteIntervals(fam),
                        sum: Term::FiniteChain(total),
                    };
                    if verify_ccs_witness(class, &w).is_ok() {
                        return (Some(w), used);
                    }
                }
            }
        }
    }
    // Ordinal shapes over a ladder.
    let ladder = ordinal_ladder(class);
    for beta in &ladder {
        for alpha in &ladder {
            if used > budget {
                return (None, used);
            }
            // singletons then whole: index beta + 1, target alpha
            used += 1;
            let idx = beta.succ();
            if class.member_term(&Term::ord(idx.clone())) == B3::Yes
                && class.member_term(&Term::ord(alpha.clone())) == B3::Yes
            {
                let sum = beta.add(alpha);
                if class.member_term(&Term::ord(sum.clone())) == B3::No {
                    let w = CcsWitness {
                        index: Term::ord(idx),
                        target: Term::ord(alpha.clone()),
                        family: ConvexFamily::SingletonsThenWhole { reps: beta.clone() },
                        sum: Term::ord(sum),
                    };
                    if verify_ccs_witness(class, &w).is_ok() {
                        return (Some(w), used);
                    }
                }
            }
            // whole then singletons: index beta (limit), target alpha + 1
            used += 1;
            if beta.is_limit()
                && class.member_term(&Term::ord(beta.clone())) == B3::Yes
                && class.member_term(&Term::ord(alpha.succ())) == B3::Yes
            {
                let sum = alpha.succ().add(&pred_or_self(beta).clone());
                let sum = if beta.is_limit() { alpha.add(beta) } else { sum };
                if class.member_term(&Term::ord(sum.clone())) == B3::No {
                    let w = CcsWitness {
                        index: Term::ord(beta.clone()),
                        target: Term::ord(alpha.succ()),
                        family: ConvexFamily::WholeThenSingletons { index: beta.clone() },
                        sum: Term::ord(sum),
                    };
                    if verify_ccs_witness(class, &w).is_ok() {
                        return (Some(w), used);
                    }
                }
            }
        }
    }
    (None, used)
}

/// Weakly increasing nonempty interval families on the chain `n`, indexed
/// by the chain `k`; adjacent intervals may share an endpoint.
fn interval_families(k: u64, n: u64) -> Vec<Vec<(u64, u64)>> {
    fn rec(k: u64, n: u64, min_lo: u64, acc: &mut Vec<(u64, u64)>, out: &mut Vec<Vec<(u64, u64)>>) {
        if k == 0 {
            out.push(acc.clone());
            return;
        }
        for lo in min_lo..n {
            for hi in lo..n {
                acc.push((lo, hi));
                rec(k - 1, n, hi, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = vec![];
    rec(k, n, 0, &mut vec![], &mut out);
    out
}

fn ordinal_ladder(class: &ClassId) -> Vec<Ordinal> {
    let mut out: Vec<Ordinal> = (1..=4).map(Ordinal::from_nat).collect();
    for s in ["w", "w+1", "w*2", "w*2+1", "w^2", "w^2+1", "w^2+w", "w^3", "w^3+1", "w^w"] {
        out.push(Ordinal::parse(s).unwrap());
    }
    // class-derived cut points
    let extra: Vec<Ordinal> = match class {
        ClassId::LtOrd(g) | ClassId::LeZpow(g) => {
            let mut v = vec![];
            let mut acc = Ordinal::zero();
            for (e, c) in g.terms() {
                for k in 1..=*c {
                    v.push(acc.add(&Ordinal::monomial(e.clone(), k)));
                    v.push(acc.add(&Ordinal::monomial(e.clone(), k)).succ());
                }
                acc = acc.add(&Ordinal::monomial(e.clone(), *c));
                v.push(Ordinal::omega_pow(e));
            }
            v
        }
        _ => vec![],
    };
    out.extend(extra);
    out.sort();
    out.dedup();
    out.retain(|o| !o.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn ord(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert_eq!(ClassId::ScatCls.member_term(&Term::eta()), B3::No);
        assert_eq!(
            ClassId::LtOrd(ord("w^2")).member_term(&parse_term("w*5+3").unwrap()),
            B3::Yes
        );
        assert_eq!(ClassId::LeZpow(ord("1")).member_term(&Term::Zeta), B3::Yes);
        assert_eq!(ClassId::LeZpow(ord("1")).member_term(&parse_term("w+1").unwrap()), B3::No);
    }

    #[test]
    fn finite_members_examples() {
        assert_eq!(ClassId::One.finite_members(5), vec![1]);
        assert_eq!(ClassId::LeN(3).finite_members(5), vec![1, 2, 3]);
        assert_eq!(ClassId::FinCls.finite_members(2), vec![1, 2]);
    }

    #[test]
    fn ccs_table_small() {
        assert!(ccs_check(&ClassId::One).0.is_holds());
        assert!(ccs_check(&ClassId::FinCls).0.is_holds());
        assert!(ccs_check(&ClassId::WOCls).0.is_holds());
        assert!(ccs_check(&ClassId::ScatCls).0.is_holds());
        assert!(ccs_check(&ClassId::LinCls).0.is_holds());
        let (v, w) = ccs_check(&ClassId::LeN(3));
        assert!(v.is_fails());
        let w = w.unwrap();
        assert_eq!(w.sum, Term::FiniteChain(4));
        assert_eq!(w.index, Term::FiniteChain(2));
    }

    #[test]
    fn ccs_lt_ord_table() {
        let expect = [
            ("w", true),
            ("w+1", true),
            ("w*2", false),
            ("w*2+1", false),
            ("w^2", true),
            ("w^2+1", true),
            ("w^2+w", false),
            ("w^3", true),
            ("w^3+1", true),
        ];
        for (g, want) in expect {
            let (v, w) = ccs_check(&ClassId::LtOrd(ord(g)));
            assert_eq!(v.is_holds(), want, "{g}");
            if !want {
                let w = w.expect("failure carries a witness");
                let sum = ordinal_value(&normalize_word(&w.sum)).unwrap();
                assert!(sum >= ord(g), "{g}: sum {sum}");
            }
        }
    }

    #[test]
    fn ccs_witness_example_lt_w2() {
        // the classified witness at w*2: index w, target w+1, sum w*2
        let (_, w) = ccs_check(&ClassId::LtOrd(ord("w*2")));
        let w = w.unwrap();
        assert_eq!(ordinal_value(&normalize_word(&w.index)), Some(ord("w")));
        assert_eq!(ordinal_value(&normalize_word(&w.target)), Some(ord("w+1")));
        assert_eq!(ordinal_value(&normalize_word(&w.sum)), Some(ord("w*2")));
    }

    #[test]
    fn search_agrees_with_table_on_len() {
        let (w, _) = ccs_witness_search(&ClassId::LeN(2), 10_000);
        let w = w.unwrap();
        assert_eq!(w.sum, Term::FiniteChain(3));
        let (none, used) = ccs_witness_search(&ClassId::FinCls, 10_000);
        assert!(none.is_none());
        assert!(used > 0);
    }

    #[test]
    fn search_finds_nothing_for_rank_classes() {
        for g in ["0", "1", "2"] {
            let (w, _) = ccs_witness_search(&ClassId::LeZpow(ord(g)), 10_000);
            assert!(w.is_none(), "Z^{g}");
        }
    }

    #[test]
    fn noztail_regression() {
        let class = ClassId::Custom(CustomClass::NoZetaTail);
        assert_eq!(class.member_term(&parse_term("ord(w^2)").unwrap()), B3::Yes);
        assert_eq!(class.member_term(&parse_term("w**w").unwrap_or(Term::prod(Term::OmegaStar, Term::Omega))), B3::Yes);
        let (v, w) = ccs_check(&class);
        assert!(v.is_fails());
        assert!(verify_ccs_witness(&class, &w.unwrap()).is_ok());
    }
}
