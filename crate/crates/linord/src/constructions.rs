//! The explicit order maps, each shipped with the equivalence it is known
//! to satisfy, plus the generator families used to exhibit chains and
//! antichains.

use crate::engine::{self, Verdict, Witness};
use crate::ordinal::Ordinal;
use crate::term::{ColouredFinite, E1Seq, LabelSet, PeriodicSet, Term};
use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("alpha must not convexly embed into the cone base")]
    FractalPrecondition,
    #[error("gamma must be additively indecomposable and at most w^3")]
    BadGamma,
    #[error("sequence entries must be positive rationals")]
    NonPositiveEntry,
    #[error("the label set must be infinite")]
    FiniteSet,
    #[error("interval needs lo < hi")]
    EmptyInterval,
}

/// `L -> (1 + z*L + 1) * M`: isomorphism of inputs is equivalent to
/// class-indexed convex (bi)embeddability of the images whenever `M` is
/// outside the class.
pub fn phi_cong(t: &Term, m: &Term) -> Term {
    Term::prod(
        Term::sum(vec![Term::one(), Term::prod(Term::Zeta, t.clone()), Term::one()]),
        m.clone(),
    )
}

/// `L -> L + 1`: transfers the relation at an indecomposable bound to its
/// successor bound.
pub fn phi_succ(t: &Term) -> Term {
    Term::sum(vec![t.clone(), Term::one()])
}

/// `L -> (shuffle(a) + q + T + q) * L`: embeds the whole order landscape
/// into the upper cone of `T`, provided `ord(a)` does not convexly embed
/// into `T`.
pub fn phi_fractal(t: &Term, base: &Term, alpha: &Ordinal) -> Result<Term, ConstructError> {
    if !engine::convex_embeds(&Term::ord(alpha.clone()), base).is_fails() {
        return Err(ConstructError::FractalPrecondition);
    }
    let cone = Term::sum(vec![
        Term::Shuffle(LabelSet::singleton(Term::ord(alpha.clone())).expect("ordinal labels are scattered")),
        Term::eta(),
        base.clone(),
        Term::eta(),
    ]);
    Ok(Term::prod(cone, t.clone()))
}

/// `L -> sum_{a < gamma} (shuffle(a) + z*L)`, kept symbolic.
pub fn phi_threshold(t: &Term, gamma: &Ordinal) -> Result<Term, ConstructError> {
    let bound = Ordinal::omega_pow(&Ordinal::from_nat(3));
    if !gamma.is_additively_indecomposable() || *gamma > bound || gamma.is_finite() {
        return Err(ConstructError::BadGamma);
    }
    Ok(Term::ThresholdSum { gamma: gamma.clone(), payload: Box::new(t.clone()) })
}

/// The summand of the threshold sum at position `a`; position 0 uses a
/// plain copy of the rationals, since an empty block would vanish anyway.
pub fn threshold_summand(payload: &Term, a: &Ordinal) -> Term {
    let head = if a.is_zero() {
        Term::eta()
    } else {
        Term::Shuffle(LabelSet::singleton(Term::ord(a.clone())).expect("ordinal labels are scattered"))
    };
    Term::sum(vec![head, Term::prod(Term::Zeta, payload.clone())])
}

/// `L -> sum_{k in z} (shuffle(h(k)) + z*L)` for the fixed bijection `h`
/// from the integers onto the positive naturals.
pub fn phi_fin_zeta(t: &Term) -> Term {
    Term::ZetaSum { payload: Box::new(t.clone()) }
}

/// The fixed bijection behind the zeta-indexed sum.
pub fn zeta_label(z: i64) -> u64 {
    if z >= 0 {
        (2 * z + 1) as u64
    } else {
        (-2 * z) as u64
    }
}

pub fn zeta_summand(payload: &Term, z: i64) -> Term {
    Term::sum(vec![
        Term::Shuffle(LabelSet::singleton(Term::FiniteChain(zeta_label(z))).unwrap()),
        Term::prod(Term::Zeta, payload.clone()),
    ])
}

/// Coloured chain to a word of singleton shuffles. The chain is first
/// doubled with a separator colour so that no two adjacent positions share
/// a colour and all colours are positive, which is the shape the
/// shuffle-word decoding needs.
pub fn phi_coloured(s: &ColouredFinite) -> Term {
    let mut letters = vec![];
    for &c in &s.colours {
        letters.push(shuffle_of(c as u64 + 2));
        letters.push(shuffle_of(1));
    }
    Term::sum(letters)
}

fn shuffle_of(n: u64) -> Term {
    Term::Shuffle(LabelSet::singleton(Term::FiniteChain(n)).unwrap())
}

/// The tail-equality reduction image.
pub fn phi_e1(x: &E1Seq) -> Result<Term, ConstructError> {
    let zero = Rational64::new(0, 1);
    if x.prefix.iter().chain([&x.tail]).any(|r| *r <= zero) {
        return Err(ConstructError::NonPositiveEntry);
    }
    Ok(Term::E1Image(x.clone()))
}

/// Decides tail equality through the structure of the images: agreeing
/// tails yield an explicit partition into `2*n0 + 2` convex pieces, while
/// a disagreement at arbitrarily late positions contradicts the
/// disjointness of the rational intervals under the fixed injective
/// labelling.
pub fn e1_decide(x: &E1Seq, y: &E1Seq) -> Verdict {
    let at = |s: &E1Seq, i: usize| s.prefix.get(i).copied().unwrap_or(s.tail);
    let horizon = x.prefix.len().max(y.prefix.len());
    if x.tail != y.tail {
        return Verdict::fails(
            "e1-interval-disjointness",
            "the sequences differ at every sufficiently late position, and distinct unit intervals carry disjoint label sets",
        );
    }
    let mut n0 = horizon;
    while n0 > 0 && at(x, n0 - 1) == at(y, n0 - 1) {
        n0 -= 1;
    }
    Verdict::holds_with(
        "e1-tail-agreement",
        Witness {
            index_order: Term::FiniteChain(2 * n0 as u64 + 2),
            pieces: vec![],
            embedding: None,
        },
    )
}

/// Shuffle over a symbolic infinite set of finite chains; distinct sets
/// give incomparable orders.
pub fn gen_shuffle_family(s: PeriodicSet) -> Term {
    Term::Shuffle(LabelSet::Periodic(s))
}

/// Restriction of the fixed injective-label shuffle to `(lo, hi)`;
/// comparability is exactly interval inclusion.
pub fn gen_interval_shuffle(lo: Rational64, hi: Rational64) -> Result<Term, ConstructError> {
    if lo >= hi {
        return Err(ConstructError::EmptyInterval);
    }
    Ok(Term::IntervalShuffle(lo, hi))
}

/// Pairwise incomparable constant-label shuffles.
pub fn antichain_family(k: u64) -> Vec<Term> {
    (1..=k).map(shuffle_of).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lclass::ClassId;
    use crate::term::{normalize, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn phi_cong_shape() {
        let img = phi_cong(&t("w"), &Term::eta());
        // (1 + z*w + 1) * q normalizes to a single shuffle whose label is
        // the scattered word 1 + z*w + 1
        let n = normalize(&img);
        match n {
            Term::Shuffle(LabelSet::Finite(labs)) => {
                assert_eq!(labs.len(), 1);
                assert_eq!(labs[0], normalize(&t("1+z*w+1")));
            }
            other => panic!("expected a shuffle, got {other}"),
        }
    }

    #[test]
    fn phi_cong_equivalence_examples() {
        let c = ClassId::FinCls;
        let a = phi_cong(&t("w"), &Term::eta());
        let b = phi_cong(&t("w+1"), &Term::eta());
        assert!(engine::biembeds(&c, &a, &a).is_holds());
        assert!(engine::l_convex_embeds(&c, &a, &b).is_fails());
    }

    #[test]
    fn phi_fractal_precondition() {
        assert!(phi_fractal(&t("w"), &Term::Zeta, &Ordinal::parse("w^2").unwrap()).is_ok());
        // w embeds convexly into z, so it is not a valid cone parameter
        assert!(phi_fractal(&t("w"), &Term::Zeta, &Ordinal::omega()).is_err());
    }

    #[test]
    fn threshold_summand_at_zero() {
        let s = threshold_summand(&t("w"), &Ordinal::zero());
        assert_eq!(normalize(&s), normalize(&t("q+z*w")));
        assert!(phi_threshold(&t("w"), &Ordinal::omega()).is_ok());
        assert!(phi_threshold(&t("w"), &Ordinal::parse("w*2").unwrap()).is_err());
    }

    #[test]
    fn zeta_label_bijection() {
        let mut seen = std::collections::HashSet::new();
        for z in -10..=10i64 {
            assert!(seen.insert(zeta_label(z)));
            assert!(zeta_label(z) >= 1);
        }
    }

    #[test]
    fn phi_coloured_shape() {
        // [a, b] with a -> 1, b -> 2 after shifting
        let s = ColouredFinite::new(vec![1, 2]);
        let img = normalize(&phi_coloured(&s));
        let want = Term::sum(vec![shuffle_of(3), shuffle_of(1), shuffle_of(4), shuffle_of(1)]);
        assert_eq!(img, normalize(&want));
    }

    #[test]
    fn e1_examples() {
        let seq = |p: &[i64], t: i64| E1Seq {
            prefix: p.iter().map(|&x| Rational64::from_integer(x)).collect(),
            tail: Rational64::from_integer(t),
        };
        assert!(e1_decide(&seq(&[5], 1), &seq(&[7], 1)).is_holds());
        assert!(e1_decide(&seq(&[1], 2), &seq(&[1], 3)).is_fails());
        assert!(e1_decide(&seq(&[], 1), &seq(&[], 1)).is_holds());
    }

    #[test]
    fn interval_shuffle_generators() {
        let r = |n: i64, d: i64| Rational64::new(n, d);
        assert!(gen_interval_shuffle(r(0, 1), r(1, 1)).is_ok());
        assert!(gen_interval_shuffle(r(1, 1), r(1, 1)).is_err());
        let a = gen_interval_shuffle(r(0, 1), r(1, 1)).unwrap();
        let b = gen_interval_shuffle(r(0, 1), r(2, 1)).unwrap();
        let c = gen_interval_shuffle(r(1, 1), r(3, 1)).unwrap();
        let cls = ClassId::FinCls;
        assert!(engine::l_convex_embeds(&cls, &a, &b).is_holds());
        assert!(engine::l_convex_embeds(&cls, &b, &c).is_fails());
    }
}
