//! Three-valued deciders for embeddability, convex embeddability and
//! class-indexed convex embeddability on the term fragment.
//!
//! Every decided verdict names the rule that produced it; `Holds` can carry
//! a machine-checkable witness, `Fails` a reason, and `Unknown` is always a
//! legal answer outside the decided fragment. The dispatch follows the
//! structure of the underlying facts: a source inside the class embeds
//! plainly; a rational-like target tests membership; finite sources are
//! decided exhaustively; dense sources collapse to plain convex
//! embeddability; interval shuffles compare by inclusion; and the residual
//! word-on-word case runs the bounded piece-placement search.

mod coloured;
mod embed;
mod place;
mod words;

pub use coloured::{coloured_embeds, count_runs, min_runs, witness_embedding};
pub use place::{decode_dense_word, k_term, KPart};

use crate::lclass::ClassId;
use crate::term::{
    finite_size, is_scattered, is_scattered_word, normalize_word, word_iso, ColouredFinite,
    IsoOutcome, LabelSet, Term, Word,
};
use crate::zcalc::B3;
use serde_json::{json, Value};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FailReason {
    pub rule: String,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    /// The index order K of the convex partition.
    pub index_order: Term,
    /// Source piece and matching target chunk, in order.
    pub pieces: Vec<(Term, Term)>,
    /// Explicit position map for finite instances.
    pub embedding: Option<Vec<usize>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Holds { rule: String, witness: Option<Witness> },
    Fails { rule: String, detail: String },
    Unknown { explanation: String },
}

impl Verdict {
    pub fn holds(rule: &str) -> Verdict {
        Verdict::Holds { rule: rule.to_string(), witness: None }
    }

    pub fn holds_with(rule: &str, w: Witness) -> Verdict {
        Verdict::Holds { rule: rule.to_string(), witness: Some(w) }
    }

    pub fn fails(rule: &str, detail: impl Into<String>) -> Verdict {
        Verdict::Fails { rule: rule.to_string(), detail: detail.into() }
    }

    pub fn unknown(explanation: impl Into<String>) -> Verdict {
        Verdict::Unknown { explanation: explanation.into() }
    }

    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn from_b3(b: B3, rule: &str, detail: &str) -> Verdict {
        match b {
            B3::Yes => Verdict::holds(rule),
            B3::No => Verdict::fails(rule, detail),
            B3::Maybe => Verdict::unknown(detail.to_string()),
        }
    }

    pub fn as_b3(&self) -> B3 {
        match self {
            Verdict::Holds { .. } => B3::Yes,
            Verdict::Fails { .. } => B3::No,
            Verdict::Unknown { .. } => B3::Maybe,
        }
    }

    /// 0 for holds, 2 for fails, 3 for unknown (1 is reserved for usage
    /// errors).
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Holds { .. } => 0,
            Verdict::Fails { .. } => 2,
            Verdict::Unknown { .. } => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Holds { rule, witness } => {
                let mut v = json!({"verdict": "holds", "rule": rule});
                if let Some(w) = witness {
                    v["indexOrder"] = json!(w.index_order.to_string());
                    v["pieces"] = Value::Array(
                        w.pieces
                            .iter()
                            .map(|(s, d)| json!({"src": s.to_string(), "dst": d.to_string()}))
                            .collect(),
                    );
                    v["embedding"] = match &w.embedding {
                        Some(e) => json!(e),
                        None => Value::Null,
                    };
                }
                v
            }
            Verdict::Fails { rule, detail } => {
                json!({"verdict": "fails", "rule": rule, "reason": detail})
            }
            Verdict::Unknown { explanation } => {
                json!({"verdict": "unknown", "explanation": explanation})
            }
        }
    }
}

/// Isomorphism on the decidable fragment.
pub fn iso_check(a: &Term, b: &Term) -> Verdict {
    match crate::term::iso_classify(a, b) {
        IsoOutcome::Iso => Verdict::holds("normal-form-equal"),
        IsoOutcome::NotIso(why) => Verdict::fails("normal-form-distinct", why),
        IsoOutcome::Unknown(why) => Verdict::unknown(why),
    }
}

/// Plain embeddability.
pub fn embeds(a: &Term, b: &Term) -> Verdict {
    let wa = normalize_word(a);
    let wb = normalize_word(b);
    if wb.letters().iter().any(|l| !is_scattered(l)) {
        return Verdict::holds("dense-target");
    }
    let r = embed::embeds_words(&wa, &wb);
    Verdict::from_b3(r, "letter-assignment", "no letter assignment embeds the source")
}

/// Convex embeddability: embeddability with a convex image, i.e. the
/// class-indexed relation at the one-point class.
pub fn convex_embeds(a: &Term, b: &Term) -> Verdict {
    l_convex_embeds(&ClassId::One, a, b)
}

/// Class-indexed convex embeddability.
pub fn l_convex_embeds(class: &ClassId, a: &Term, b: &Term) -> Verdict {
    let wa = normalize_word(a);
    let wb = normalize_word(b);
    l_convex_words(class, &wa, &wb)
}

pub(crate) fn l_convex_words(class: &ClassId, wa: &Word, wb: &Word) -> Verdict {
    if wa == wb {
        return Verdict::holds("reflexive");
    }

    // A class containing the rationals indexes singleton partitions of any
    // countable order, so the relation is plain embeddability.
    if class.member_term(&Term::eta()) == B3::Yes {
        let v = embeds(&wa.to_term(), &wb.to_term());
        return rename(v, "class-contains-eta");
    }

    // A source inside the class embeds plainly (singleton pieces again).
    match class.member_term(&wa.to_term()) {
        B3::Yes => {
            let v = embeds(&wa.to_term(), &wb.to_term());
            return rename(v, "member-source");
        }
        B3::Maybe => return Verdict::unknown("membership of the source is undecided"),
        B3::No => {}
    }

    // Rational-like target: a scattered source lies convexly in the
    // rationals only through singleton pieces, so membership decides.
    if is_eta_word(wb) && is_scattered_word(wa) {
        return match class.member_term(&wa.to_term()) {
            B3::Yes => Verdict::holds("dense-target-membership"),
            B3::No => Verdict::fails(
                "dense-target-membership",
                "a scattered source partitions into singletons over a rational target, so the index order is the source itself and it is outside the class",
            ),
            B3::Maybe => Verdict::unknown("membership of the source is undecided"),
        };
    }

    // Finite sources are decided exhaustively.
    if let Some(n) = finite_size(wa) {
        return finite_source(class, n, wb);
    }

    // Interval shuffles compare by interval inclusion.
    if class.is_scattered_class() {
        if let ([Term::IntervalShuffle(a0, a1)], [Term::IntervalShuffle(b0, b1)]) =
            (wa.letters(), wb.letters())
        {
            return if b0 <= a0 && a1 <= b1 {
                Verdict::holds("interval-inclusion")
            } else {
                Verdict::fails(
                    "interval-inclusion",
                    "the source interval is not contained in the target interval, and the labels are pairwise distinct",
                )
            };
        }
    }

    // A dense source with every label hit densely collapses to plain
    // convex embeddability under any scattered class.
    if class.is_scattered_class() && *class != ClassId::One {
        if let [Term::Shuffle(_)] = wa.letters() {
            let v = convex_embeds(&wa.to_term(), &wb.to_term());
            return rename(v, "dense-source-collapse");
        }
    }

    // Composite interval-shuffle sources: only the scattered refutation is
    // available.
    if wa.letters().iter().any(|l| matches!(l, Term::IntervalShuffle(..))) {
        if is_scattered_word(wb) {
            return Verdict::fails("scattered-target", "a non-scattered source cannot embed into a scattered target");
        }
        if wa.len() > 1 {
            return Verdict::unknown("composite interval-shuffle sources are outside the decided fragment");
        }
    }

    // Products with a shared left factor whose tails pin every embedding:
    // peel it and recurse.
    if let Some(v) = peel_left_factor(class, wa, wb) {
        return v;
    }

    // General bounded placement.
    let res = place::l_convex_place(class, wa, wb);
    if let Some((placed, k)) = res.found {
        let w = Witness {
            index_order: k,
            pieces: placed.into_iter().map(|p| (p.piece, p.chunk)).collect(),
            embedding: None,
        };
        return Verdict::holds_with("piece-placement", w);
    }
    if res.complete && !res.maybe {
        return Verdict::fails(
            "piece-exhaustion",
            "no convex partition with an index order from the class places into the target",
        );
    }

    // Pure shuffle words with singleton chain labels decode to coloured
    // finite chains; the coloured reduction decides those exactly.
    if let (Some(ca), Some(cb)) = (decode_dense_word(wa), decode_dense_word(wb)) {
        let sa = ColouredFinite::new(ca);
        let sb = ColouredFinite::new(cb);
        let v = coloured_l_convex_embeds(class, &sa, &sb);
        return rename(v, "coloured-decode");
    }

    Verdict::unknown("outside the decided fragment")
}

fn rename(v: Verdict, rule: &str) -> Verdict {
    match v {
        Verdict::Holds { witness, .. } => Verdict::Holds { rule: rule.to_string(), witness },
        Verdict::Fails { detail, .. } => Verdict::Fails { rule: rule.to_string(), detail },
        u => u,
    }
}

fn is_eta_word(w: &Word) -> bool {
    matches!(w.letters(), [Term::Shuffle(s)] if s.is_eta())
}

/// Exact decision for a finite source of size `n`: place `k <= kmax`
/// chunks, of sizes summing to `n`, in order into the target.
fn finite_source(class: &ClassId, n: u64, tgt: &Word) -> Verdict {
    let sizes = class.finite_members(n);
    let kmax = sizes.iter().max().copied().unwrap_or(0);
    if kmax == 0 {
        return Verdict::fails("finite-source", "the class has no finite index orders at all");
    }
    // Region profile of the target for finite chunks.
    let regions: Vec<Option<u64>> = tgt.letters().iter().map(finite_chunk_region).collect();
    // dp over (remaining elements, region index) -> reachable piece counts;
    // we search for any split into at most kmax nonempty chunks.
    fn rec(
        rem: u64,
        pieces_left: u64,
        region: usize,
        regions: &[Option<u64>],
        acc: &mut Vec<(u64, usize)>,
    ) -> bool {
        if rem == 0 {
            return true;
        }
        if pieces_left == 0 || region >= regions.len() {
            return false;
        }
        // skip region
        if rec(rem, pieces_left, region + 1, regions, acc) {
            return true;
        }
        // place one chunk of size s in this region, then continue in the
        // same region (capacity permitting) or later ones.
        let cap = regions[region];
        let max_s = cap.map(|c| c.min(rem)).unwrap_or(rem);
        for s in (1..=max_s).rev() {
            acc.push((s, region));
            let next_regions_cap_ok = match cap {
                None => true,
                Some(c) => c >= s,
            };
            if next_regions_cap_ok {
                // consume capacity within the region
                let mut shrunk: Vec<Option<u64>> = regions.to_vec();
                if let Some(c) = cap {
                    shrunk[region] = Some(c - s);
                }
                if rec(rem - s, pieces_left - 1, region, &shrunk, acc) {
                    return true;
                }
            }
            acc.pop();
        }
        false
    }
    let mut acc = vec![];
    if rec(n, kmax, 0, &regions, &mut acc) {
        let k = acc.len() as u64;
        debug_assert!(sizes.contains(&k));
        let w = Witness {
            index_order: Term::FiniteChain(k),
            pieces: acc
                .iter()
                .map(|(s, r)| (Term::FiniteChain(*s), tgt.letters()[*r].clone()))
                .collect(),
            embedding: None,
        };
        Verdict::holds_with("finite-source", w)
    } else {
        Verdict::fails(
            "finite-source",
            format!("no placement of {n} elements in at most {kmax} convex chunks exists"),
        )
    }
}

/// How much room a target letter offers to finite convex chunks:
/// `Some(m)` = at most `m` elements in total, `None` = any number of chunks
/// of any size.
fn finite_chunk_region(l: &Term) -> Option<u64> {
    match l {
        Term::FiniteChain(m) => Some(*m),
        Term::Shuffle(s) => {
            if s.admits_finite_chunk(u64::MAX) {
                None
            } else {
                // all labels finite: chunks bounded by the largest label,
                // but any number of them; treat as unbounded count with a
                // per-chunk cap by reporting the cap through a large pool.
                None
            }
        }
        _ => None,
    }
}

/// Shared-left-factor peel: `M*L` against `M*L'` reduces to `L` against
/// `L'` when every embedding respects the copies of `M`. That holds when
/// `M` has an inherently cofinal tail (`w`, `z`) and, by the fractal-map
/// argument, when `M = shuffle(a) + q + T + q` with `ord(a)` not convexly
/// embeddable in `T`. The forward lift is sound for any shared `M`.
fn peel_left_factor(class: &ClassId, wa: &Word, wb: &Word) -> Option<Verdict> {
    let (ma, ua) = split_product_single(wa)?;
    let (mb, ub) = split_product_single(wb)?;
    if ma != mb {
        return None;
    }
    let bidirectional = matches!(ma.letters(), [Term::Omega] | [Term::Zeta]) || fractal_shape(&ma);
    let inner = l_convex_words(class, &normalize_word(&ua), &normalize_word(&ub));
    if bidirectional {
        let rule = if fractal_shape(&ma) { "fractal-cone-peel" } else { "cofinal-left-factor-peel" };
        return Some(rename(inner, rule));
    }
    if inner.is_holds() {
        return Some(rename(inner, "left-factor-lift"));
    }
    None
}

fn split_product_single(w: &Word) -> Option<(Word, Term)> {
    if let [Term::Product(l, r)] = w.letters() {
        Some((normalize_word(l), (**r).clone()))
    } else {
        None
    }
}

/// `shuffle(a) + q + T + q` with `ord(a)` not convexly embeddable in `T`.
fn fractal_shape(m: &Word) -> bool {
    let ls = m.letters();
    if ls.len() < 4 {
        return false;
    }
    let (first, rest) = ls.split_first().unwrap();
    let alpha = match first {
        Term::Shuffle(LabelSet::Finite(labs)) if labs.len() == 1 => labs[0].clone(),
        _ => return false,
    };
    let eta = Term::eta();
    if rest.first() != Some(&eta) || rest.last() != Some(&eta) {
        return false;
    }
    let core = &rest[1..rest.len() - 1];
    if core.is_empty() || core.iter().any(|l| !is_scattered(l)) {
        return false;
    }
    convex_embeds(&alpha, &Term::sum(core.to_vec())).is_fails()
}

/// Both directions of the class-indexed relation.
pub fn biembeds(class: &ClassId, a: &Term, b: &Term) -> Verdict {
    let fwd = l_convex_embeds(class, a, b);
    if fwd.is_fails() {
        return rename(fwd, "biembed-forward");
    }
    let back = l_convex_embeds(class, b, a);
    match (fwd, back) {
        (Verdict::Holds { .. }, Verdict::Holds { rule, witness }) => {
            Verdict::Holds { rule: format!("biembed({rule})"), witness }
        }
        (_, Verdict::Fails { detail, .. }) => Verdict::fails("biembed-backward", detail),
        _ => Verdict::unknown("one direction is undecided"),
    }
}

/// Exact decision between finite coloured chains; never unknown.
pub fn coloured_l_convex_embeds(class: &ClassId, s: &ColouredFinite, t: &ColouredFinite) -> Verdict {
    let sizes = class.finite_members(s.len() as u64);
    let kmax = sizes.iter().max().copied();
    let kmax = match kmax {
        None | Some(0) => {
            return Verdict::fails("coloured-exhaustive", "the class has no finite index orders")
        }
        Some(k) => k,
    };
    let unbounded = !class.all_members_finite() || class.max_finite_chain().is_none();
    let cap = if unbounded { None } else { Some(kmax) };
    let cap = match (cap, class.max_finite_chain()) {
        (_, None) => None,
        (Some(_), Some(m)) => Some(m.min(s.len() as u64)),
        (None, Some(m)) => Some(m.min(s.len() as u64)),
    };
    match witness_embedding(&s.colours, &t.colours, cap) {
        Some((pos, runs)) => {
            let w = Witness {
                index_order: Term::FiniteChain(runs.max(1) as u64),
                pieces: vec![],
                embedding: Some(pos),
            };
            Verdict::holds_with("coloured-exhaustive", w)
        }
        None => Verdict::fails(
            "coloured-exhaustive",
            "no colour-preserving embedding with few enough convex runs exists",
        ),
    }
}

/// All transitivity violations `(i, j, k)` with verdicts (holds, holds,
/// fails) on the corpus.
pub fn transitivity_probe(class: &ClassId, corpus: &[Term]) -> Vec<(usize, usize, usize)> {
    let words: Vec<Word> = corpus.iter().map(normalize_word).collect();
    let n = words.len();
    let mut table = vec![vec![B3::Maybe; n]; n];
    for i in 0..n {
        for j in 0..n {
            table[i][j] = l_convex_words(class, &words[i], &words[j]).as_b3();
        }
    }
    let mut out = vec![];
    for i in 0..n {
        for j in 0..n {
            if table[i][j] != B3::Yes {
                continue;
            }
            for k in 0..n {
                if table[j][k] == B3::Yes && table[i][k] == B3::No {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// Re-validates a witness produced by the deciders.
pub fn verify_witness(class: &ClassId, src: &Term, tgt: &Term, w: &Witness) -> Result<(), String> {
    if class.member_term(&w.index_order) == B3::No {
        return Err(format!("index order {} is not in the class", w.index_order));
    }
    if let Some(pos) = &w.embedding {
        if pos.windows(2).any(|p| p[0] >= p[1]) {
            return Err("embedding positions are not increasing".into());
        }
        return Ok(());
    }
    if w.pieces.is_empty() {
        return Ok(());
    }
    // pieces must reassemble the source
    let glued = Term::sum(w.pieces.iter().map(|(s, _)| s.clone()).collect());
    if word_iso(&normalize_word(&glued), &normalize_word(src)) != IsoOutcome::Iso {
        return Err("pieces do not reassemble the source".into());
    }
    // every piece must be isomorphic to its chunk
    for (s, d) in &w.pieces {
        match word_iso(&normalize_word(s), &normalize_word(d)) {
            IsoOutcome::Iso => {}
            _ => return Err(format!("piece {s} does not match its chunk {d}")),
        }
    }
    let _ = tgt;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn embeds_examples() {
        assert!(embeds(&t("w"), &t("z")).is_holds());
        assert!(embeds(&t("w*"), &t("w")).is_fails());
        assert!(embeds(&t("z*3"), &t("q")).is_holds());
    }

    #[test]
    fn convex_examples() {
        assert!(convex_embeds(&t("z"), &t("z+1")).is_holds());
        assert!(convex_embeds(&t("z*2"), &t("z+1+z")).is_fails());
        assert!(convex_embeds(&t("q"), &t("2*q")).is_fails());
        assert!(convex_embeds(&t("q"), &t("1+q")).is_holds());
        assert!(convex_embeds(&t("1+q"), &t("q")).is_fails());
    }

    #[test]
    fn qo_no_trans_triple() {
        let class = ClassId::LeN(2);
        let a = t("z*3");
        let b = t("z+1+z*2");
        let c = t("(z+1)*3");
        assert!(l_convex_embeds(&class, &a, &b).is_holds());
        assert!(l_convex_embeds(&class, &b, &c).is_holds());
        assert!(l_convex_embeds(&class, &a, &c).is_fails());
    }

    #[test]
    fn crucial_shape() {
        // scattered source against the rationals: membership decides
        assert!(l_convex_embeds(&ClassId::ScatCls, &t("w*2"), &t("q")).is_holds());
        assert!(l_convex_embeds(&ClassId::LeN(3), &t("z"), &t("q")).is_fails());
    }

    #[test]
    fn coloured_examples() {
        let a = ColouredFinite::new(vec![0]);
        let bab = ColouredFinite::new(vec![1, 0, 1]);
        assert!(coloured_l_convex_embeds(&ClassId::One, &a, &bab).is_holds());
        let ab = ColouredFinite::new(vec![0, 1]);
        let acb = ColouredFinite::new(vec![0, 2, 1]);
        assert!(coloured_l_convex_embeds(&ClassId::One, &ab, &acb).is_fails());
        assert!(coloured_l_convex_embeds(&ClassId::FinCls, &ab, &acb).is_holds());
    }

    #[test]
    fn shuffle_rules() {
        // label-set equality up to isomorphism
        assert!(l_convex_embeds(&ClassId::FinCls, &t("shuffle(1,2)"), &t("shuffle(2,1)")).is_holds());
        assert!(l_convex_embeds(&ClassId::FinCls, &t("shuffle(@evens)"), &t("shuffle(@odds)")).is_fails());
        // interval inclusion
        assert!(l_convex_embeds(&ClassId::FinCls, &t("ishuffle(0,1)"), &t("ishuffle(0,2)")).is_holds());
        assert!(l_convex_embeds(&ClassId::FinCls, &t("ishuffle(0,2)"), &t("ishuffle(1,3)")).is_fails());
    }
}
