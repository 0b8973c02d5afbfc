//! Seeded random generators for words and ordinals, used by the
//! randomized suites and the corpus subcommand.

use crate::ordinal::Ordinal;
use crate::term::{LabelSet, Term};
use rand::Rng;

#[derive(Clone, Copy, Debug)]
pub struct GenCfg {
    pub max_letters: usize,
    pub max_fin: u64,
    pub with_shuffles: bool,
}

impl Default for GenCfg {
    fn default() -> Self {
        GenCfg { max_letters: 5, max_fin: 3, with_shuffles: true }
    }
}

/// A random block word over the core alphabet.
pub fn random_term(rng: &mut impl Rng, cfg: &GenCfg) -> Term {
    let n = rng.gen_range(1..=cfg.max_letters);
    let letters: Vec<Term> = (0..n).map(|_| random_letter(rng, cfg)).collect();
    Term::sum(letters)
}

fn random_letter(rng: &mut impl Rng, cfg: &GenCfg) -> Term {
    let top = if cfg.with_shuffles { 5 } else { 4 };
    match rng.gen_range(0..=top) {
        0 => Term::FiniteChain(rng.gen_range(1..=cfg.max_fin)),
        1 => Term::Omega,
        2 => Term::OmegaStar,
        3 | 4 => Term::Zeta,
        _ => {
            let lab = match rng.gen_range(0..3) {
                0 => Term::FiniteChain(rng.gen_range(1..=cfg.max_fin)),
                1 => Term::Zeta,
                _ => Term::Omega,
            };
            Term::Shuffle(LabelSet::singleton(lab).unwrap())
        }
    }
}

/// A random scattered block word (no dense letters).
pub fn random_scattered_term(rng: &mut impl Rng, cfg: &GenCfg) -> Term {
    let cfg = GenCfg { with_shuffles: false, ..*cfg };
    random_term(rng, &cfg)
}

/// A random ordinal in Cantor normal form with exponents below `max_exp`.
pub fn random_ordinal(rng: &mut impl Rng, max_exp: u64, max_coeff: u64) -> Ordinal {
    let k = rng.gen_range(1..=3usize);
    let mut exps: Vec<u64> = (0..k).map(|_| rng.gen_range(0..max_exp)).collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps.dedup();
    let mut o = Ordinal::zero();
    for e in exps {
        o = o.add(&Ordinal::monomial(
            Ordinal::from_nat(e),
            rng.gen_range(1..=max_coeff),
        ));
    }
    if o.is_zero() {
        Ordinal::from_nat(1)
    } else {
        o
    }
}
