//! Plain embeddability on block words.
//!
//! A dense letter in the target absorbs any countable source. Otherwise
//! both sides are scattered and the decision runs letter by letter: the
//! source is cut into consecutive convex pieces, one per target letter,
//! and each piece must embed into its letter.

use super::words::{word_cuts, word_cuts_complete, Budget};
use crate::ordinal::Ordinal;
use crate::term::{is_scattered, is_scattered_word, normalize_word, ordinal_value, reverse, Term, Word};
use crate::zcalc::{word_embeds_zpow, B3};
use std::collections::HashMap;

pub struct EmbedCtx {
    budget: Budget,
    memo: HashMap<(Word, Vec<Term>), B3>,
}

impl EmbedCtx {
    pub fn new(src: &Word, tgt: &Word) -> EmbedCtx {
        EmbedCtx { budget: Budget::for_words(&[src, tgt]), memo: HashMap::new() }
    }
}

pub fn embeds_words(src: &Word, tgt: &Word) -> B3 {
    if src.is_empty() {
        return B3::Yes;
    }
    // Universal dense rule: eta embeds every countable order, so a single
    // dense letter in the target settles the question.
    if tgt.letters().iter().any(|l| !is_scattered(l)) {
        return B3::Yes;
    }
    if !is_scattered_word(src) {
        return B3::No;
    }
    let mut ctx = EmbedCtx::new(src, tgt);
    let r = embeds_rec(&mut ctx, src, tgt.letters());
    match r {
        B3::No if !(word_cuts_complete(src) && tgt.letters().iter().all(letter_target_complete)) => B3::Maybe,
        other => other,
    }
}

fn embeds_rec(ctx: &mut EmbedCtx, src: &Word, tgt: &[Term]) -> B3 {
    if src.is_empty() {
        return B3::Yes;
    }
    if tgt.is_empty() {
        return B3::No;
    }
    let key = (src.clone(), tgt.to_vec());
    if let Some(&r) = ctx.memo.get(&key) {
        return r;
    }
    ctx.memo.insert(key.clone(), B3::No); // cycle guard
    let mut best = B3::No;
    // Nothing goes into the first letter.
    best = best.or(|| embeds_rec(ctx, src, &tgt[1..]));
    if best != B3::Yes {
        // The whole remaining source goes into the first letter.
        let whole = word_into_letter(ctx, src, &tgt[0]);
        best = best.or(|| whole);
    }
    if best != B3::Yes {
        for (piece, rest) in word_cuts(src, &ctx.budget.clone()) {
            let piece = Word(piece);
            let rest = Word(rest);
            if rest.letters() == src.letters() {
                continue;
            }
            let r = word_into_letter(ctx, &piece, &tgt[0]).and(|| embeds_rec(ctx, &rest, &tgt[1..]));
            best = best.or(|| r);
            if best == B3::Yes {
                break;
            }
        }
    }
    ctx.memo.insert(key, best);
    best
}

fn letter_target_complete(t: &Term) -> bool {
    matches!(
        t,
        Term::FiniteChain(_) | Term::Omega | Term::OmegaStar | Term::Zeta | Term::OrdTerm(_) | Term::ZPow(_)
    ) || matches!(t, Term::Rev(inner) if matches!(&**inner, Term::OrdTerm(_)))
}

/// Does the word embed into a single letter?
fn word_into_letter(ctx: &mut EmbedCtx, w: &Word, letter: &Term) -> B3 {
    if w.is_empty() {
        return B3::Yes;
    }
    match letter {
        Term::FiniteChain(m) => match crate::term::finite_size(w) {
            Some(n) => B3::from_bool(n <= *m),
            None => B3::No,
        },
        Term::Omega => match ordinal_value(w) {
            Some(v) => B3::from_bool(v <= Ordinal::omega()),
            None => B3::No,
        },
        Term::OmegaStar => {
            let rev = normalize_word(&reverse(&w.to_term()));
            match ordinal_value(&rev) {
                Some(v) => B3::from_bool(v <= Ordinal::omega()),
                None => B3::No,
            }
        }
        Term::Zeta => {
            if w.letters() == [Term::Zeta] {
                return B3::Yes;
            }
            if w.letters().iter().any(|l| *l == Term::Zeta) {
                // a copy of z inside z leaves no room on either side
                return B3::No;
            }
            let mut best = word_into_letter(ctx, w, &Term::OmegaStar)
                .or(|| word_into_letter(ctx, w, &Term::Omega));
            if best != B3::Yes {
                for (a, b) in word_cuts(w, &ctx.budget.clone()) {
                    let r = word_into_letter(ctx, &Word(a), &Term::OmegaStar)
                        .and(|| word_into_letter(ctx, &Word(b), &Term::Omega));
                    best = best.or(|| r);
                    if best == B3::Yes {
                        break;
                    }
                }
            }
            best
        }
        Term::OrdTerm(a) => match ordinal_value(w) {
            Some(v) => B3::from_bool(v <= *a),
            None => B3::No,
        },
        Term::Rev(inner) => {
            if let Term::OrdTerm(a) = &**inner {
                let rev = normalize_word(&reverse(&w.to_term()));
                match ordinal_value(&rev) {
                    Some(v) => B3::from_bool(v <= *a),
                    None => B3::No,
                }
            } else {
                B3::Maybe
            }
        }
        Term::ZPow(d) => word_embeds_zpow(w, d),
        Term::Shuffle(_) | Term::IntervalShuffle(..) => B3::Yes,
        Term::Product(l, r) => {
            // Sound partial rules: the first copy, or finitely many chunks
            // spread over the infinite index.
            let lw = normalize_word(l);
            let whole = embeds_rec(ctx, w, lw.letters());
            if whole == B3::Yes {
                return B3::Yes;
            }
            if w.letters() == [letter.clone()] {
                return B3::Yes;
            }
            let chunks = chunk_into(ctx, w, &lw, 5);
            if chunks == B3::Yes {
                return B3::Yes;
            }
            let _ = r;
            B3::Maybe
        }
        _ => B3::Maybe,
    }
}

fn chunk_into(ctx: &mut EmbedCtx, w: &Word, unit: &Word, fuel: u32) -> B3 {
    if w.is_empty() {
        return B3::Yes;
    }
    if fuel == 0 {
        return B3::Maybe;
    }
    let mut best = embeds_rec(ctx, w, unit.letters());
    if best == B3::Yes {
        return B3::Yes;
    }
    for (a, b) in word_cuts(w, &ctx.budget.clone()) {
        if b == w.0 {
            continue;
        }
        let r = embeds_rec(ctx, &Word(a), unit.letters()).and(|| chunk_into(ctx, &Word(b), unit, fuel - 1));
        best = best.or(|| r);
        if best == B3::Yes {
            return B3::Yes;
        }
    }
    if best == B3::No {
        B3::Maybe // the index could still spread pieces further
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn w(s: &str) -> Word {
        normalize_word(&parse_term(s).unwrap())
    }

    fn emb(a: &str, b: &str) -> B3 {
        embeds_words(&w(a), &w(b))
    }

    #[test]
    fn basic_letters() {
        assert_eq!(emb("w", "z"), B3::Yes);
        assert_eq!(emb("w*", "w"), B3::No);
        assert_eq!(emb("z*3", "q"), B3::Yes);
        assert_eq!(emb("q", "z"), B3::No);
        assert_eq!(emb("5", "w"), B3::Yes);
        assert_eq!(emb("w+1", "w"), B3::No);
        assert_eq!(emb("z", "w*+w"), B3::Yes);
        assert_eq!(emb("w+w*", "z"), B3::No);
        assert_eq!(emb("z+z", "z"), B3::No);
        assert_eq!(emb("1+z+1", "z"), B3::No);
        assert_eq!(emb("w*+5+w", "z"), B3::Yes);
    }

    #[test]
    fn ordinal_letters() {
        assert_eq!(emb("w*3", "ord(w^2)"), B3::Yes);
        assert_eq!(emb("ord(w^2+1)", "ord(w^2)"), B3::No);
        assert_eq!(emb("w", "zpow(2)"), B3::Yes);
        assert_eq!(emb("ord(w^2)", "zpow(1)"), B3::No);
        assert_eq!(emb("ord(w^2)", "zpow(2)"), B3::Yes);
    }

    #[test]
    fn words_into_words() {
        assert_eq!(emb("z+z", "z+1+z"), B3::Yes);
        assert_eq!(emb("z+1+z", "z+z"), B3::Yes); // the point lands inside the second z
        assert_eq!(emb("w+w*", "w+1+w*"), B3::Yes);
        assert_eq!(emb("w*+w", "w+w*"), B3::No);
        assert_eq!(emb("z*3", "z*2"), B3::No);
        assert_eq!(emb("z*2", "z*3"), B3::Yes);
    }
}
