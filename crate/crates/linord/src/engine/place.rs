//! Piece placement: the bounded search behind convex and class-indexed
//! convex embeddability on words.
//!
//! The source is cut into consecutive convex pieces; each piece must match
//! (up to isomorphism) a convex chunk of the target, with chunks in
//! increasing position. A piece can also be an omega-indexed fan of finite
//! chunks over an `w` or `w*` letter, which is what infinite index orders
//! contribute on scattered words. The index order assembled from the piece
//! shapes must belong to the class.
//!
//! The search is exhaustive up to a piece cap. Within a single dense
//! letter, partitions wider than roughly the target length are dominated:
//! finite pieces whose chunks land in the same target letter can be merged
//! with their gap. The `complete` flag reports when exhaustion is a proof.

use super::words::{letter_cuts, word_cuts, word_cuts_complete, Budget};
use crate::lclass::ClassId;
use crate::ordinal::Ordinal;
use crate::term::{normalize_word, word_iso, IsoOutcome, LabelSet, Term, Word};
use crate::zcalc::B3;
use std::collections::{HashMap, HashSet};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum KPart {
    Fin(u64),
    Om,
    OmStar,
}

pub fn k_term(ksum: &[KPart]) -> Term {
    if ksum.is_empty() {
        return Term::one();
    }
    let parts: Vec<Term> = ksum
        .iter()
        .map(|p| match p {
            KPart::Fin(n) => Term::FiniteChain(*n),
            KPart::Om => Term::Omega,
            KPart::OmStar => Term::OmegaStar,
        })
        .collect();
    Term::sum(parts)
}

#[derive(Clone, Debug)]
pub struct Placed {
    pub piece: Term,
    pub chunk: Term,
}

pub struct PlaceResult {
    pub found: Option<(Vec<Placed>, Term)>,
    pub maybe: bool,
    pub complete: bool,
}

pub struct Searcher<'a> {
    class: &'a ClassId,
    budget: Budget,
    kcap: usize,
    fan_w: bool,
    fan_ws: bool,
    maybe: bool,
    /// states already explored without success
    dead: HashSet<(Word, Word, Vec<KPart>)>,
    iso_cache: HashMap<(Word, Word), IsoOutcome>,
    fuel: u64,
}

const HARD_PIECE_CAP: usize = 24;
const FUEL: u64 = 600_000;

fn norm_vec(v: Vec<Term>) -> Word {
    if v.is_empty() {
        Word(vec![])
    } else {
        normalize_word(&Term::sum(v))
    }
}

pub fn l_convex_place(class: &ClassId, src: &Word, tgt: &Word) -> PlaceResult {
    let budget = Budget::for_words(&[src, tgt]);
    let fan_w = class.member_term(&Term::Omega) == B3::Yes;
    let fan_ws = class.member_term(&Term::OmegaStar) == B3::Yes;
    let class_kmax = class.max_finite_chain();
    let intrinsic = intrinsic_piece_bound(src, tgt, &budget);
    let kcap = match class_kmax {
        Some(k) => (k as usize).min(HARD_PIECE_CAP),
        None => intrinsic.min(HARD_PIECE_CAP),
    };
    let mut s = Searcher {
        class,
        budget,
        kcap,
        fan_w,
        fan_ws,
        maybe: false,
        dead: HashSet::new(),
        iso_cache: HashMap::new(),
        fuel: FUEL,
    };
    let mut acc = vec![];
    let found = s.search(src.clone(), tgt.clone(), vec![], &mut acc);
    let complete = placement_complete(class, src, tgt, kcap, intrinsic, fan_w, fan_ws) && s.fuel > 0;
    PlaceResult {
        found: found.map(|k| (acc, k)),
        maybe: s.maybe,
        complete,
    }
}

/// Upper bound on the pieces a successful partition can need: finite
/// letters contribute their size, infinite scattered letters a handful of
/// structural parts plus one finite piece per target letter (wider
/// partitions merge), dense letters an alternation bounded by the target.
fn intrinsic_piece_bound(src: &Word, tgt: &Word, _b: &Budget) -> usize {
    let per = |l: &Term| -> usize {
        match l {
            Term::FiniteChain(n) => *n as usize,
            Term::Omega | Term::OmegaStar => tgt.len() + 2,
            Term::Zeta => tgt.len() + 3,
            Term::Shuffle(_) => 2 * tgt.len() + 3,
            _ => tgt.len() + 3,
        }
    };
    src.letters().iter().map(per).sum::<usize>().max(2)
}

fn placement_complete(
    class: &ClassId,
    src: &Word,
    tgt: &Word,
    kcap: usize,
    intrinsic: usize,
    fan_w: bool,
    fan_ws: bool,
) -> bool {
    if !word_cuts_complete(src) || !word_cuts_complete(tgt) {
        return false;
    }
    if tgt.letters().iter().any(|l| matches!(l, Term::IntervalShuffle(..))) {
        return false;
    }
    match class.max_finite_chain() {
        Some(k) => (k as usize) <= kcap || intrinsic <= kcap,
        None => {
            // Infinite index orders: fans model them only on scattered
            // sources, and only for the letters the class contains.
            crate::term::is_scattered_word(src)
                && intrinsic <= kcap
                && (fan_w || !src.letters().iter().any(|l| matches!(l, Term::Omega | Term::Zeta)))
                && (fan_ws || !src.letters().iter().any(|l| matches!(l, Term::OmegaStar | Term::Zeta)))
        }
    }
}

impl<'a> Searcher<'a> {
    fn search(
        &mut self,
        src: Word,
        tgt: Word,
        ksum: Vec<KPart>,
        acc: &mut Vec<Placed>,
    ) -> Option<Term> {
        if self.fuel == 0 {
            self.maybe = true;
            return None;
        }
        self.fuel -= 1;
        if src.is_empty() {
            let k = crate::term::normalize(&k_term(&ksum));
            return match self.class.member_term(&k) {
                B3::Yes => Some(k),
                B3::Maybe => {
                    self.maybe = true;
                    None
                }
                B3::No => None,
            };
        }
        if piece_count(&ksum) >= self.kcap {
            return None;
        }
        let key = (src.clone(), tgt.clone(), ksum.clone());
        if self.dead.contains(&key) {
            return None;
        }

        // Fan pieces on the leading letter.
        let head = src.letters()[0].clone();
        if self.fan_w && head == Term::Omega {
            let rest = Word(src.letters()[1..].to_vec());
            for tgt2 in self.fan_targets(&tgt, false) {
                let mut k2 = ksum.clone();
                k2.push(KPart::Om);
                if let Some(k) = self.search(rest.clone(), tgt2, k2, acc) {
                    return Some(k);
                }
            }
        }
        if self.fan_ws && head == Term::OmegaStar {
            let rest = Word(src.letters()[1..].to_vec());
            for tgt2 in self.fan_targets(&tgt, true) {
                let mut k2 = ksum.clone();
                k2.push(KPart::OmStar);
                if let Some(k) = self.search(rest.clone(), tgt2, k2, acc) {
                    return Some(k);
                }
            }
        }

        // Real pieces: every prefix-with-cut of the source.
        for (piece_raw, rest_raw) in prefix_options(&src, &self.budget) {
            let piece = norm_vec(piece_raw);
            let rest = Word(rest_raw);
            for (chunk, tgt2) in self.chunk_options(&tgt, &piece) {
                let mut k2 = ksum.clone();
                push_fin(&mut k2);
                acc.push(Placed { piece: piece.to_term(), chunk: chunk.to_term() });
                if let Some(k) = self.search(rest.clone(), tgt2, k2, acc) {
                    return Some(k);
                }
                acc.pop();
            }
        }
        self.dead.insert(key);
        None
    }

    /// All `(chunk, remainder)` pairs where `chunk` is a convex chunk of
    /// the target isomorphic to `piece`, positioned after anything already
    /// placed. Skipping happens through drop moves.
    fn chunk_options(&mut self, tgt: &Word, piece: &Word) -> Vec<(Word, Word)> {
        let mut out = vec![];
        let mut seen_rest: HashSet<Word> = HashSet::new();
        let mut visited: HashSet<Word> = HashSet::new();
        let mut queue = vec![tgt.clone()];
        visited.insert(tgt.clone());
        while let Some(state) = queue.pop() {
            if visited.len() > 300 {
                self.maybe = true;
                break;
            }
            // extract a chunk at this position
            for (chunk_raw, rest_raw) in prefix_options(&state, &self.budget) {
                let chunk = normalize_word(&Word(chunk_raw).to_term());
                match self.iso(&chunk, piece) {
                    IsoOutcome::Iso => {
                        let rest = normalize_word(&Word(rest_raw).to_term());
                        if seen_rest.insert(rest.clone()) {
                            out.push((chunk, rest));
                        }
                    }
                    IsoOutcome::Unknown(_) => self.maybe = true,
                    IsoOutcome::NotIso(_) => {}
                }
            }
            // drop moves
            if !state.is_empty() {
                let next = Word(state.letters()[1..].to_vec());
                if visited.insert(next.clone()) {
                    queue.push(next);
                }
                for (_init, rest) in letter_cuts(&state.letters()[0], &self.budget) {
                    let mut v = rest;
                    v.extend(state.letters()[1..].iter().cloned());
                    let w = normalize_word(&Word(v).to_term());
                    if w.letters() != state.letters() && visited.insert(w.clone()) {
                        queue.push(w);
                    }
                }
            }
        }
        out
    }

    fn iso(&mut self, a: &Word, b: &Word) -> IsoOutcome {
        let key = (a.clone(), b.clone());
        if let Some(r) = self.iso_cache.get(&key) {
            return r.clone();
        }
        let r = word_iso(a, b);
        self.iso_cache.insert(key, r);
        self.iso_cache[&(a.clone(), b.clone())].clone()
    }

    /// Remainders after placing an omega fan (`star = false`) or an
    /// omega-star fan (`star = true`) of finite chunks.
    fn fan_targets(&mut self, tgt: &Word, star: bool) -> Vec<Word> {
        let mut out = vec![];
        for j in 0..tgt.len() {
            let rest = |from: usize| tgt.letters()[from..].to_vec();
            match &tgt.letters()[j] {
                Term::Omega if !star => out.push(Word(rest(j + 1))),
                Term::OmegaStar if star => {
                    let mut v = vec![Term::FiniteChain(self.budget.fin)];
                    v.extend(rest(j + 1));
                    out.push(normalize_word(&Word(v).to_term()));
                }
                Term::Zeta => {
                    if star {
                        let mut v = vec![Term::Omega];
                        v.extend(rest(j + 1));
                        out.push(Word(v));
                    } else {
                        out.push(Word(rest(j + 1)));
                    }
                }
                Term::Shuffle(_) | Term::IntervalShuffle(..) => {
                    out.push(Word(rest(j))); // dense letters are self-similar past the fan
                }
                Term::OrdTerm(a) if !star => {
                    if let Ok(tail) = Ordinal::omega().left_sub(a) {
                        if !tail.is_zero() {
                            let mut v = normalize_word(&Term::OrdTerm(tail)).0;
                            v.extend(rest(j + 1));
                            out.push(normalize_word(&Word(v).to_term()));
                        } else {
                            out.push(Word(rest(j + 1)));
                        }
                    }
                }
                Term::Rev(inner) if star => {
                    if matches!(&**inner, Term::OrdTerm(_)) {
                        out.push(Word(rest(j + 1)));
                    }
                }
                Term::ZPow(d) => {
                    if !d.is_zero() {
                        out.push(Word(rest(j + 1)));
                    }
                }
                Term::Product(_, r) => {
                    let ok = match &**r {
                        Term::Omega => !star,
                        Term::OmegaStar => star,
                        Term::Zeta => true,
                        _ => false,
                    };
                    if ok {
                        out.push(Word(rest(j + 1)));
                    }
                }
                _ => {}
            }
        }
        out
    }
}

fn piece_count(ksum: &[KPart]) -> usize {
    ksum.iter()
        .map(|p| match p {
            KPart::Fin(n) => *n as usize,
            _ => 1,
        })
        .sum()
}

fn push_fin(ksum: &mut Vec<KPart>) {
    if let Some(KPart::Fin(n)) = ksum.last_mut() {
        *n += 1;
    } else {
        ksum.push(KPart::Fin(1));
    }
}

/// `(piece, rest)` options: the whole word, or any two-way cut.
fn prefix_options(w: &Word, b: &Budget) -> Vec<(Vec<Term>, Vec<Term>)> {
    let mut out = vec![(w.0.clone(), vec![])];
    out.extend(word_cuts(w, b));
    out
}

/// Decode a word of singleton-chain shuffles back into a coloured finite
/// chain: `shuffle(c1) + shuffle(c2) + ...` maps to colours `(c1, c2, ...)`.
/// Adjacent equal shuffles have merged during normalization, so the decoded
/// colouring is never constant on a nontrivial interval.
pub fn decode_dense_word(w: &Word) -> Option<Vec<u32>> {
    let mut out = vec![];
    for l in w.letters() {
        match l {
            Term::Shuffle(LabelSet::Finite(labs)) if labs.len() == 1 => match &labs[0] {
                Term::FiniteChain(n) if *n <= u32::MAX as u64 => out.push(*n as u32),
                _ => return None,
            },
            _ => return None,
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

