//! Powers of the integers and the rank of scattered terms.
//!
//! `Z^0` is the one-point order, `Z^(g+1) = (Z^g w)* + Z^g + Z^g w`, and
//! `Z^g` for limit `g` sums the smaller powers. The rank of a scattered
//! order is the least `g` such that it embeds into `Z^g`.
//!
//! The decider works on the split `Z^g = R* + R` with `R = sum_{b<g} Z^b w`:
//! a word embeds iff it cuts into a bounded-above part fitting `R*` and a
//! bounded-below part fitting `R`. Fitting `R` for successor `g` means
//! fitting `Z^b * w`, which in turn means cutting into finitely many
//! `Z^b`-pieces plus at most one trailing letter that fans over the omega
//! index on its own. Refutations are only final on letters whose convex
//! cuts are fully enumerated; anything else degrades to "maybe".

use crate::ordinal::Ordinal;
use crate::term::{
    is_scattered, normalize_word, ordinal_value, zpow_raw, Term, Word, ZPOW_EXPANSION_BOUND,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZcalcError {
    #[error("expansion bound exceeded: Z^{0} is kept symbolic (bound {1})")]
    BoundExceeded(Ordinal, u64),
    #[error("term is not scattered: {0}")]
    NotScattered(String),
    #[error("rank is undecided within the probe bound: {0}")]
    Undecided(String),
}

/// Three-valued internal answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum B3 {
    Yes,
    No,
    Maybe,
}

impl B3 {
    pub fn from_bool(b: bool) -> B3 {
        if b {
            B3::Yes
        } else {
            B3::No
        }
    }

    pub fn and(self, other: impl FnOnce() -> B3) -> B3 {
        match self {
            B3::No => B3::No,
            B3::Yes => other(),
            B3::Maybe => match other() {
                B3::No => B3::No,
                _ => B3::Maybe,
            },
        }
    }

    pub fn or(self, other: impl FnOnce() -> B3) -> B3 {
        match self {
            B3::Yes => B3::Yes,
            B3::No => other(),
            B3::Maybe => match other() {
                B3::Yes => B3::Yes,
                _ => B3::Maybe,
            },
        }
    }
}

/// The recursive expansion of `Z^g` as a term.
pub fn z_expand(g: &Ordinal) -> Result<Term, ZcalcError> {
    match g.as_finite() {
        Some(n) if n <= ZPOW_EXPANSION_BOUND => Ok(zpow_raw(g)),
        _ => Err(ZcalcError::BoundExceeded(g.clone(), ZPOW_EXPANSION_BOUND)),
    }
}

/// Decides whether the scattered term `t` embeds into `Z^g`.
pub fn embeds_zpow(t: &Term, g: &Ordinal) -> Result<B3, ZcalcError> {
    if !is_scattered(t) {
        return Err(ZcalcError::NotScattered(t.to_string()));
    }
    let w = normalize_word(t);
    Ok(word_embeds_zpow(&w, g))
}

thread_local! {
    static MEMO: std::cell::RefCell<std::collections::HashMap<(u8, Word, Ordinal), B3>> =
        std::cell::RefCell::new(std::collections::HashMap::new());
}

fn memoized(tag: u8, w: &Word, g: &Ordinal, f: impl FnOnce() -> B3) -> B3 {
    let key = (tag, w.clone(), g.clone());
    if let Some(r) = MEMO.with(|m| m.borrow().get(&key).copied()) {
        return r;
    }
    let r = f();
    MEMO.with(|m| m.borrow_mut().insert(key, r));
    r
}

pub(crate) fn word_embeds_zpow(w: &Word, g: &Ordinal) -> B3 {
    if g.is_zero() {
        return B3::from_bool(w.letters() == [Term::FiniteChain(1)]);
    }
    // Letters with a closed-form rank decide immediately.
    if let Some(r) = word_rank_exact(w) {
        return B3::from_bool(r <= *g);
    }
    memoized(0, w, g, || {
        let mut best = B3::No;
        for (left, right) in splits(w) {
            let r = fits_bounded_above(&left, g).and(|| fits_bounded_below(&right, g));
            best = best.or(|| r);
            if best == B3::Yes {
                return B3::Yes;
            }
        }
        finalize_refutation(best, w, g)
    })
}

/// An exhausted search is a refutation only on fully-enumerable letters,
/// unless a rank bound already settles it.
fn finalize_refutation(best: B3, w: &Word, g: &Ordinal) -> B3 {
    if best != B3::No {
        return best;
    }
    if rank_lower_bound(w) > *g {
        return B3::No;
    }
    if w.letters().iter().all(cuts_complete) {
        B3::No
    } else {
        B3::Maybe
    }
}

/// All ways to cut a word in two, including cuts inside a letter.
fn splits(w: &Word) -> Vec<(Word, Word)> {
    let mut out = vec![];
    let letters = w.letters();
    for i in 0..=letters.len() {
        out.push((Word(letters[..i].to_vec()), Word(letters[i..].to_vec())));
        if i < letters.len() {
            for (a, b) in letter_two_cuts(&letters[i]) {
                let mut l = letters[..i].to_vec();
                l.extend(a);
                let mut r = b;
                r.extend(letters[i + 1..].iter().cloned());
                out.push((Word(l), Word(r)));
            }
        }
    }
    out
}

/// Proper two-way cuts of one letter into (initial, final) parts. A single
/// representative finite size is enough on this side: smaller initial
/// parts embed into larger ones, and the rank targets never distinguish
/// finite sizes.
fn letter_two_cuts(t: &Term) -> Vec<(Vec<Term>, Vec<Term>)> {
    match t {
        Term::Zeta => vec![(vec![Term::OmegaStar], vec![Term::Omega])],
        Term::Omega => vec![(vec![Term::FiniteChain(1)], vec![Term::Omega])],
        Term::OmegaStar => vec![(vec![Term::OmegaStar], vec![Term::FiniteChain(1)])],
        Term::FiniteChain(n) if *n > 1 => {
            vec![(vec![Term::FiniteChain(1)], vec![Term::FiniteChain(n - 1)])]
        }
        Term::OrdTerm(a) => {
            let mut out = vec![];
            for cut in ordinal_cut_points(a) {
                let tail = cut.left_sub(a).expect("cut <= a");
                if !cut.is_zero() && !tail.is_zero() {
                    out.push((expand_vec(&cut), expand_vec(&tail)));
                }
            }
            out
        }
        Term::Rev(inner) => {
            if let Term::OrdTerm(a) = &**inner {
                let mut out = vec![];
                for cut in ordinal_cut_points(a) {
                    let tail = cut.left_sub(a).expect("cut <= a");
                    if !cut.is_zero() && !tail.is_zero() {
                        out.push((rev_expand_vec(&tail), rev_expand_vec(&cut)));
                    }
                }
                out
            } else {
                vec![]
            }
        }
        Term::Product(l, r) => {
            let lw = normalize_word(l);
            match &**r {
                // L*z = L*w* + L*w
                Term::Zeta => vec![(
                    prod_vec(&lw, Term::OmegaStar),
                    prod_vec(&lw, Term::Omega),
                )],
                // cut after the first copy; deeper cuts compose recursively
                Term::Omega => vec![(lw.0.clone(), prod_vec(&lw, Term::Omega))],
                // cut before the last copy
                Term::OmegaStar => vec![(prod_vec(&lw, Term::OmegaStar), lw.0.clone())],
                _ => vec![],
            }
        }
        _ => vec![],
    }
}

fn prod_vec(l: &Word, idx: Term) -> Vec<Term> {
    normalize_word(&Term::prod(l.to_term(), idx)).0
}

fn expand_vec(a: &Ordinal) -> Vec<Term> {
    normalize_word(&Term::OrdTerm(a.clone())).0
}

fn rev_expand_vec(a: &Ordinal) -> Vec<Term> {
    normalize_word(&Term::Rev(Box::new(Term::OrdTerm(a.clone())))).0
}

/// Are all convex two-way cuts of this letter enumerated by
/// [`letter_two_cuts`] (up to the dominance argument there)?
fn cuts_complete(t: &Term) -> bool {
    match t {
        Term::FiniteChain(_) | Term::Omega | Term::OmegaStar | Term::Zeta | Term::OrdTerm(_) => true,
        Term::Rev(inner) => matches!(&**inner, Term::OrdTerm(_)),
        Term::Product(l, r) => {
            matches!(&**r, Term::Omega | Term::OmegaStar | Term::Zeta)
                && normalize_word(l).letters().iter().all(cuts_complete)
        }
        _ => false,
    }
}

/// CNF partial sums, used as candidate cut points.
fn ordinal_cut_points(a: &Ordinal) -> Vec<Ordinal> {
    let mut out = vec![];
    let mut acc = Ordinal::zero();
    for (e, c) in a.terms() {
        for k in 1..=*c {
            out.push(acc.add(&Ordinal::monomial(e.clone(), k)));
        }
        acc = acc.add(&Ordinal::monomial(e.clone(), *c));
    }
    out
}

/// Does `w` embed into `sum_{b<g} Z^b w` (the part of `Z^g` above a point)?
fn fits_bounded_below(w: &Word, g: &Ordinal) -> B3 {
    if w.is_empty() {
        return B3::Yes;
    }
    if g.is_zero() {
        return B3::No;
    }
    memoized(1, w, g, || fits_bounded_below_inner(w, g))
}

fn fits_bounded_below_inner(w: &Word, g: &Ordinal) -> B3 {
    if let Some(b) = g.pred() {
        return fits_zpow_omega(w, &b);
    }
    // Limit g: the half-sum absorbs exactly the ordinals up to w^g, and is
    // monotone in b, so a finite rank bound picks the probe.
    if let Some(v) = ordinal_value(w) {
        return B3::from_bool(v <= Ordinal::omega_pow(g));
    }
    let ub = rank_upper_bound(w);
    if let Some(ub) = ub {
        if ub < *g {
            return fits_zpow_omega(w, &ub);
        }
    }
    if rank_lower_bound(w) > *g {
        return B3::No;
    }
    B3::Maybe
}

fn fits_bounded_above(w: &Word, g: &Ordinal) -> B3 {
    if w.is_empty() {
        return B3::Yes;
    }
    let rev = normalize_word(&crate::term::reverse(&w.to_term()));
    fits_bounded_below(&rev, g)
}

/// `w <= Z^b * w`: finitely many `Z^b`-chunks plus at most one trailing
/// letter fanning over the omega index.
fn fits_zpow_omega(w: &Word, b: &Ordinal) -> B3 {
    memoized(2, w, b, || {
        let mut best = chunkable(w, b);
        if best == B3::Yes {
            return B3::Yes;
        }
        if let Some((last, init)) = w.letters().split_last() {
            let fan = native_omega_fan(last, b).and(|| chunkable(&Word(init.to_vec()), b));
            best = best.or(|| fan);
        }
        best
    })
}

/// Can the word be cut into finitely many pieces, each embedding into
/// `Z^b`? Cuts that leave the word unchanged are skipped: a finite
/// chunking never needs them.
fn chunkable(w: &Word, b: &Ordinal) -> B3 {
    if w.is_empty() {
        return B3::Yes;
    }
    memoized(3, w, b, || {
        let mut best = B3::No;
        for (first, rest) in splits(w) {
            if first.is_empty() || rest.letters() == w.letters() {
                continue;
            }
            let r = word_embeds_zpow(&first, b).and(|| chunkable(&rest, b));
            best = best.or(|| r);
            if best == B3::Yes {
                return B3::Yes;
            }
        }
        if best == B3::No && !w.letters().iter().all(cuts_complete) {
            return B3::Maybe;
        }
        best
    })
}

/// Does the letter embed into `Z^b * w` by fanning over the omega index?
/// Descending letters never do; finite letters are covered by chunking.
fn native_omega_fan(t: &Term, b: &Ordinal) -> B3 {
    match t {
        Term::Omega => B3::Yes,
        Term::Zeta => B3::from_bool(!b.is_zero()),
        Term::FiniteChain(_) | Term::OmegaStar => B3::No,
        Term::OrdTerm(a) => B3::from_bool(*a <= Ordinal::omega_pow(&b.succ())),
        Term::Rev(inner) => match &**inner {
            Term::OrdTerm(_) => B3::No,
            _ => B3::Maybe,
        },
        Term::ZPow(d) => B3::from_bool(d <= b),
        Term::Product(l, r) => {
            let lw = normalize_word(l);
            match &**r {
                Term::Omega => word_embeds_zpow(&lw, b),
                Term::Zeta => {
                    // L*z = L*w* + L*w: the descending half must fit one Z^b.
                    let low = Word(prod_vec(&lw, Term::OmegaStar));
                    word_embeds_zpow(&low, b).and(|| word_embeds_zpow(&lw, b))
                }
                Term::OmegaStar => B3::No,
                _ => B3::Maybe,
            }
        }
        _ => B3::Maybe,
    }
}

/// Sound upper bound for the least `g` with `w <= Z^g`; `None` when a
/// letter is opaque.
fn rank_upper_bound(w: &Word) -> Option<Ordinal> {
    let mut best = Ordinal::zero();
    for l in w.letters() {
        let r = letter_rank_upper(l)?;
        if r > best {
            best = r;
        }
    }
    Some(if w.len() > 1 { best.succ() } else { best })
}

fn letter_rank_upper(t: &Term) -> Option<Ordinal> {
    match t {
        Term::FiniteChain(1) => Some(Ordinal::zero()),
        Term::FiniteChain(_) | Term::Omega | Term::OmegaStar | Term::Zeta => Some(Ordinal::from_nat(1)),
        Term::OrdTerm(a) => Some(ordinal_rank(a)),
        Term::ZPow(d) => Some(d.clone()),
        Term::Rev(inner) => letter_rank_upper(inner),
        Term::Product(l, r) => {
            // L*K embeds into Z^(rank K + rank L) via Z^a Z^b = Z^(b+a).
            let a = rank_upper_bound(&normalize_word(l))?;
            let b = rank_upper_bound(&normalize_word(r))?;
            Some(a.add(&b))
        }
        _ => None,
    }
}

fn rank_lower_bound(w: &Word) -> Ordinal {
    let mut best = Ordinal::zero();
    for l in w.letters() {
        let r = letter_rank_lower(l);
        if r > best {
            best = r;
        }
    }
    best
}

fn letter_rank_lower(t: &Term) -> Ordinal {
    match t {
        Term::FiniteChain(1) => Ordinal::zero(),
        Term::FiniteChain(_) | Term::Omega | Term::OmegaStar | Term::Zeta => Ordinal::from_nat(1),
        Term::OrdTerm(a) => ordinal_rank(a),
        Term::ZPow(d) => d.clone(),
        Term::Rev(inner) => letter_rank_lower(inner),
        Term::Product(l, r) => {
            let a = rank_lower_bound(&normalize_word(l));
            let b = rank_lower_bound(&normalize_word(r));
            if a > b {
                a
            } else {
                b
            }
        }
        _ => Ordinal::zero(),
    }
}

/// Exact rank for a word when fully computable without the decider. The
/// rank is invariant under reversal because every power of the integers is
/// isomorphic to its own reverse.
fn word_rank_exact(w: &Word) -> Option<Ordinal> {
    if w.len() != 1 {
        return None;
    }
    match &w.letters()[0] {
        Term::FiniteChain(1) => Some(Ordinal::zero()),
        Term::FiniteChain(_) | Term::Omega | Term::OmegaStar | Term::Zeta => Some(Ordinal::from_nat(1)),
        Term::OrdTerm(a) => Some(ordinal_rank(a)),
        Term::ZPow(d) => Some(d.clone()),
        Term::Rev(inner) => match &**inner {
            Term::OrdTerm(a) => Some(ordinal_rank(a)),
            _ => None,
        },
        _ => None,
    }
}

/// Exact rank of an ordinal: the largest ordinal embedding into `Z^d` is
/// `w^d`, so the rank of `a` is the least `d` with `a <= w^d`.
pub fn ordinal_rank(a: &Ordinal) -> Ordinal {
    assert!(!a.is_zero());
    let e = a.leading_exp().unwrap().clone();
    if a.is_additively_indecomposable() {
        e
    } else {
        e.succ()
    }
}

const RANK_PROBE_MAX: u64 = 8;

/// Least `g` with `t <= Z^g`, probing `g = 0, 1, 2, ...` up to the bound.
pub fn hausdorff_rank(t: &Term) -> Result<Ordinal, ZcalcError> {
    if !is_scattered(t) {
        return Err(ZcalcError::NotScattered(t.to_string()));
    }
    let w = normalize_word(t);
    for g in 0..=RANK_PROBE_MAX {
        if word_embeds_zpow(&w, &Ordinal::from_nat(g)) == B3::Yes {
            return Ok(Ordinal::from_nat(g));
        }
    }
    Err(ZcalcError::Undecided(t.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn ord(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn z_expand_base_cases() {
        assert_eq!(crate::term::normalize(&z_expand(&ord("0")).unwrap()), Term::one());
        assert_eq!(crate::term::normalize(&z_expand(&ord("1")).unwrap()), Term::Zeta);
        let z2 = crate::term::normalize(&z_expand(&ord("2")).unwrap());
        assert_eq!(
            z2,
            Term::Sum(vec![
                Term::prod(Term::Zeta, Term::OmegaStar),
                Term::Zeta,
                Term::prod(Term::Zeta, Term::Omega),
            ])
        );
        assert!(matches!(z_expand(&ord("5")), Err(ZcalcError::BoundExceeded(..))));
    }

    #[test]
    fn embeds_zpow_ordinals() {
        let t = parse_term("w*2").unwrap();
        assert_eq!(embeds_zpow(&t, &ord("1")).unwrap(), B3::No);
        assert_eq!(embeds_zpow(&t, &ord("2")).unwrap(), B3::Yes);
        assert_eq!(embeds_zpow(&Term::Zeta, &ord("1")).unwrap(), B3::Yes);
        assert!(matches!(
            embeds_zpow(&Term::eta(), &ord("1")),
            Err(ZcalcError::NotScattered(_))
        ));
    }

    #[test]
    fn embeds_zpow_limit_targets() {
        let a = parse_term("ord(w^w)").unwrap();
        assert_eq!(embeds_zpow(&a, &ord("w")).unwrap(), B3::Yes);
        let b = parse_term("ord(w^w*2)").unwrap();
        assert_eq!(embeds_zpow(&b, &ord("w")).unwrap(), B3::No);
        assert_eq!(embeds_zpow(&b, &ord("w+1")).unwrap(), B3::Yes);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(hausdorff_rank(&Term::one()).unwrap(), ord("0"));
        assert_eq!(hausdorff_rank(&Term::Zeta).unwrap(), ord("1"));
        assert_eq!(hausdorff_rank(&parse_term("w^2").unwrap()).unwrap(), ord("2"));
        assert_eq!(hausdorff_rank(&parse_term("w+1").unwrap()).unwrap(), ord("2"));
        assert_eq!(hausdorff_rank(&parse_term("w").unwrap()).unwrap(), ord("1"));
        assert_eq!(hausdorff_rank(&parse_term("z*w").unwrap()).unwrap(), ord("2"));
        assert_eq!(hausdorff_rank(&parse_term("w+w*").unwrap()).unwrap(), ord("2"));
    }

    #[test]
    fn rank_of_expansions() {
        for g in 0..=4u64 {
            let t = z_expand(&Ordinal::from_nat(g)).unwrap();
            assert_eq!(hausdorff_rank(&t).unwrap(), Ordinal::from_nat(g), "Z^{g}");
        }
    }

    #[test]
    fn ordinal_rank_formula() {
        assert_eq!(ordinal_rank(&ord("1")), ord("0"));
        assert_eq!(ordinal_rank(&ord("5")), ord("1"));
        assert_eq!(ordinal_rank(&ord("w")), ord("1"));
        assert_eq!(ordinal_rank(&ord("w+1")), ord("2"));
        assert_eq!(ordinal_rank(&ord("w^2")), ord("2"));
        assert_eq!(ordinal_rank(&ord("w^2*2")), ord("3"));
        assert_eq!(ordinal_rank(&ord("w^w")), ord("w"));
    }
}
