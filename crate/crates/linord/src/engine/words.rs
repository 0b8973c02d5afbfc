//! Convex-cut machinery on normalized words.
//!
//! Everything here enumerates how a letter or word can be split into an
//! initial and a final convex part. Finite parts carry explicit sizes up to
//! a query-derived budget; a letter whose cuts cannot be fully enumerated
//! (opaque residues) is flagged so refutations can degrade to "unknown".

use crate::ordinal::Ordinal;
use crate::term::{normalize_word, LabelSet, Term, Word};

/// Per-query limits derived from the two terms of a query.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Largest finite chain size worth materializing in a cut.
    pub fin: u64,
    /// Extra ordinal cut candidates harvested from the query.
    pub ordinals: Vec<Ordinal>,
}

impl Budget {
    pub fn for_words(words: &[&Word]) -> Budget {
        let mut fin = 4;
        let mut ordinals = vec![];
        for w in words {
            for l in w.letters() {
                collect_letter(l, &mut fin, &mut ordinals);
            }
        }
        // Closure under partial sums of what was seen keeps the candidate
        // set stable under the cuts the matcher will actually request.
        let mut extra = vec![];
        for o in &ordinals {
            let mut acc = Ordinal::zero();
            for (e, c) in o.terms() {
                for k in 1..=*c {
                    extra.push(acc.add(&Ordinal::monomial(e.clone(), k)));
                }
                acc = acc.add(&Ordinal::monomial(e.clone(), *c));
            }
        }
        ordinals.extend(extra);
        ordinals.sort();
        ordinals.dedup();
        Budget { fin: fin + 4, ordinals }
    }
}

fn collect_letter(l: &Term, fin: &mut u64, ordinals: &mut Vec<Ordinal>) {
    match l {
        Term::FiniteChain(n) => *fin = (*fin).max(*n),
        Term::OrdTerm(a) => ordinals.push(a.clone()),
        Term::Rev(inner) => collect_letter(inner, fin, ordinals),
        Term::Product(a, b) => {
            for w in [normalize_word(a), normalize_word(b)] {
                for l in w.letters() {
                    collect_letter(l, fin, ordinals);
                }
            }
        }
        Term::Shuffle(LabelSet::Finite(labs)) => {
            for lab in labs {
                for l in normalize_word(lab).letters() {
                    collect_letter(l, fin, ordinals);
                }
            }
        }
        _ => {}
    }
}

/// All two-way convex cuts `(initial, final)` of a letter, both parts
/// nonempty, with finite sizes materialized up to the budget.
pub fn letter_cuts(t: &Term, b: &Budget) -> Vec<(Vec<Term>, Vec<Term>)> {
    match t {
        Term::FiniteChain(n) => (1..*n)
            .map(|k| (vec![Term::FiniteChain(k)], vec![Term::FiniteChain(n - k)]))
            .collect(),
        Term::Omega => (1..=b.fin)
            .map(|k| (vec![Term::FiniteChain(k)], vec![Term::Omega]))
            .collect(),
        Term::OmegaStar => (1..=b.fin)
            .map(|k| (vec![Term::OmegaStar], vec![Term::FiniteChain(k)]))
            .collect(),
        Term::Zeta => vec![(vec![Term::OmegaStar], vec![Term::Omega])],
        Term::OrdTerm(a) => {
            let mut out = vec![];
            for d in ordinal_cut_candidates(a, b) {
                if d.is_zero() || d >= *a {
                    continue;
                }
                let tail = d.left_sub(a).expect("d < a");
                out.push((expand(&d), expand(&tail)));
            }
            out
        }
        Term::Rev(inner) => {
            if let Term::OrdTerm(a) = &**inner {
                let mut out = vec![];
                for d in ordinal_cut_candidates(a, b) {
                    if d.is_zero() || d >= *a {
                        continue;
                    }
                    let tail = d.left_sub(a).expect("d < a");
                    out.push((rev_expand(&tail), rev_expand(&d)));
                }
                out
            } else {
                vec![]
            }
        }
        Term::Shuffle(s) => {
            let mut out = vec![];
            let sh = Term::Shuffle(s.clone());
            for lab in s.sample_labels(16) {
                let lw = normalize_word(&lab);
                // cut right before / right after a whole block
                out.push((vec![sh.clone()], {
                    let mut v = lw.0.clone();
                    v.push(sh.clone());
                    v
                }));
                out.push((
                    {
                        let mut v = vec![sh.clone()];
                        v.extend(lw.0.clone());
                        v
                    },
                    vec![sh.clone()],
                ));
                // cut inside a block
                for (p, q) in word_cuts(&lw, b) {
                    let mut init = vec![sh.clone()];
                    init.extend(p);
                    let mut fin = q;
                    fin.push(sh.clone());
                    out.push((init, fin));
                }
            }
            out
        }
        Term::Product(l, r) => {
            let lw = normalize_word(l);
            match &**r {
                Term::Zeta => vec![(prod(&lw, Term::OmegaStar), prod(&lw, Term::Omega))],
                Term::Omega => vec![(lw.0.clone(), prod(&lw, Term::Omega))],
                Term::OmegaStar => vec![(prod(&lw, Term::OmegaStar), lw.0.clone())],
                _ => vec![],
            }
        }
        _ => vec![],
    }
}

/// Are all convex cuts of this letter enumerated by [`letter_cuts`]?
pub fn letter_cuts_complete(t: &Term) -> bool {
    match t {
        Term::FiniteChain(_) | Term::Omega | Term::OmegaStar | Term::Zeta => true,
        Term::Shuffle(LabelSet::Finite(labs)) => labs
            .iter()
            .all(|l| normalize_word(l).letters().iter().all(letter_cuts_complete)),
        // Periodic labels are all finite chains.
        Term::Shuffle(LabelSet::Periodic(_)) => true,
        _ => false,
    }
}

pub fn word_cuts_complete(w: &Word) -> bool {
    w.letters().iter().all(letter_cuts_complete)
}

/// Two-way cuts of a word: at letter boundaries (both parts nonempty when
/// `proper`) and inside letters.
pub fn word_cuts(w: &Word, b: &Budget) -> Vec<(Vec<Term>, Vec<Term>)> {
    let letters = w.letters();
    let mut out = vec![];
    for i in 0..=letters.len() {
        if i > 0 && i < letters.len() {
            out.push((letters[..i].to_vec(), letters[i..].to_vec()));
        }
        if i < letters.len() {
            for (a, c) in letter_cuts(&letters[i], b) {
                let mut l = letters[..i].to_vec();
                l.extend(a);
                let mut r = c;
                r.extend(letters[i + 1..].iter().cloned());
                out.push((l, r));
            }
        }
    }
    out
}

fn prod(l: &Word, idx: Term) -> Vec<Term> {
    normalize_word(&Term::prod(l.to_term(), idx)).0
}

fn expand(a: &Ordinal) -> Vec<Term> {
    normalize_word(&Term::OrdTerm(a.clone())).0
}

fn rev_expand(a: &Ordinal) -> Vec<Term> {
    normalize_word(&Term::Rev(Box::new(Term::OrdTerm(a.clone())))).0
}

fn ordinal_cut_candidates(a: &Ordinal, b: &Budget) -> Vec<Ordinal> {
    let mut out = vec![];
    let mut acc = Ordinal::zero();
    for (e, c) in a.terms() {
        for k in 1..=*c {
            let ps = acc.add(&Ordinal::monomial(e.clone(), k));
            for off in 0..=b.fin {
                out.push(ps.add(&Ordinal::from_nat(off)));
            }
            out.push(ps);
        }
        acc = acc.add(&Ordinal::monomial(e.clone(), *c));
    }
    for extra in &b.ordinals {
        if extra < a {
            out.push(extra.clone());
        }
    }
    for k in 1..=b.fin {
        out.push(Ordinal::from_nat(k));
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn w(s: &str) -> Word {
        normalize_word(&parse_term(s).unwrap())
    }

    #[test]
    fn zeta_cut_is_unique() {
        let b = Budget::for_words(&[&w("z")]);
        let cuts = letter_cuts(&Term::Zeta, &b);
        assert_eq!(cuts, vec![(vec![Term::OmegaStar], vec![Term::Omega])]);
    }

    #[test]
    fn word_cut_composition() {
        let word = w("z+1");
        let b = Budget::for_words(&[&word]);
        let cuts = word_cuts(&word, &b);
        // boundary cut between z and 1 exists
        assert!(cuts.iter().any(|(l, r)| l == &vec![Term::Zeta] && r == &vec![Term::FiniteChain(1)]));
        // cut inside the zeta letter exists
        assert!(cuts
            .iter()
            .any(|(l, r)| l == &vec![Term::OmegaStar] && r == &vec![Term::Omega, Term::FiniteChain(1)]));
    }
}
