//! Exponent pairs `(k, l)` and the van der Corput A- and B-processes, in exact
//! rational arithmetic.
//!
//! A word such as `"ABAAB"` is read as a composition: the rightmost letter is
//! applied first, so `ABAAB(0, 1) = A(B(A(A(B(0, 1)))))`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};

/// Longest word accepted by [`search_words`].
pub const MAX_SEARCH_LEN: usize = 20;

/// An exponent pair together with the word and seed it was derived from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentPair {
    pub k: Rational,
    pub l: Rational,
    /// Derivation over `{A, B}`; empty for a seed.
    pub word: String,
    pub seed: (Rational, Rational),
}

impl ExponentPair {
    /// A seed pair with an empty derivation. Fails outside the admissible region.
    pub fn new(k: Rational, l: Rational) -> Result<Self> {
        let p = Self {
            seed: (k.clone(), l.clone()),
            k,
            l,
            word: String::new(),
        };
        if !p.in_region() {
            return Err(Error::invalid(format!(
                "({}, {}) is outside 0 ≤ k ≤ 1/2 ≤ l ≤ 1, 1/2 ≤ k+l ≤ 1",
                p.k, p.l
            )));
        }
        Ok(p)
    }

    /// The trivial pair `(0, 1)`.
    pub fn trivial() -> Self {
        Self::new(int(0), int(1)).expect("(0,1) is admissible")
    }

    /// The pair `(13/84, 55/84)` (up to ε), taken as an axiom.
    pub fn new_pair() -> Self {
        Self::new(rat(13, 84), rat(55, 84)).expect("(13/84, 55/84) is admissible")
    }

    /// `0 ≤ k ≤ 1/2 ≤ l ≤ 1` and `1/2 ≤ k + l ≤ 1`.
    pub fn in_region(&self) -> bool {
        let half = rat(1, 2);
        let sum = &self.k + &self.l;
        !self.k.is_negative()
            && self.k <= half
            && self.l >= half
            && self.l <= Rational::one()
            && sum >= half
            && sum <= Rational::one()
    }

    fn derived(&self, letter: char, k: Rational, l: Rational) -> Self {
        let mut word = String::with_capacity(self.word.len() + 1);
        word.push(letter);
        word.push_str(&self.word);
        let p = Self {
            k,
            l,
            word,
            seed: self.seed.clone(),
        };
        debug_assert!(p.in_region());
        p
    }

    pub fn is_axiom(&self) -> bool {
        self.seed == (rat(13, 84), rat(55, 84))
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k, self.l)
    }
}

/// `B(k, l) = (l − 1/2, k + 1/2)`.
pub fn apply_b(p: &ExponentPair) -> ExponentPair {
    let half = rat(1, 2);
    p.derived('B', &p.l - &half, &p.k + &half)
}

/// `A(k, l) = (k / (2k + 2), (k + l + 1) / (2k + 2))`.
pub fn apply_a(p: &ExponentPair) -> ExponentPair {
    let denom = &p.k * int(2) + int(2);
    let k = &p.k / &denom;
    let l = (&p.k + &p.l + int(1)) / &denom;
    p.derived('A', k, l)
}

/// Applies `word` to `seed`, rightmost letter first.
pub fn apply_word(word: &str, seed: &ExponentPair) -> Result<ExponentPair> {
    if let Some(bad) = word.chars().find(|c| !matches!(c, 'A' | 'B')) {
        return Err(Error::invalid(format!(
            "word {word:?} contains {bad:?}; only 'A' and 'B' are allowed"
        )));
    }
    Ok(word.chars().rev().fold(seed.clone(), |p, c| match c {
        'A' => apply_a(&p),
        _ => apply_b(&p),
    }))
}

/// `θ(k, l) = (k + l)/2 − 1/4`, the critical-line exponent delivered by the pair.
/// `monotone` reports whether `l − k ≥ 1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaExponent {
    pub theta: Rational,
    pub monotone: bool,
}

pub fn zeta_exponent(p: &ExponentPair) -> ZetaExponent {
    let theta = (&p.k + &p.l) / int(2) - rat(1, 4);
    ZetaExponent {
        theta,
        monotone: &p.l - &p.k >= rat(1, 2),
    }
}

/// Quantity minimized by [`search_words`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    ZetaExponent,
    KPlusL,
    /// `c₁·k + c₂·l`.
    Affine(Rational, Rational),
}

impl Objective {
    pub fn evaluate(&self, p: &ExponentPair) -> Rational {
        match self {
            Objective::ZetaExponent => zeta_exponent(p).theta,
            Objective::KPlusL => &p.k + &p.l,
            Objective::Affine(c1, c2) => c1 * &p.k + c2 * &p.l,
        }
    }
}

/// Exact minimum of `objective` over every word of length `≤ max_len` applied
/// to every seed (and to the axiom pair when `include_axiom`). Ties go to the
/// shorter word, then the lexicographically smaller word, then the earlier seed.
///
/// Words containing `BB` are skipped: `B` is an involution, so each equals a
/// strictly shorter word that wins the tie-break.
pub fn search_words(
    max_len: usize,
    seeds: &[ExponentPair],
    include_axiom: bool,
    objective: &Objective,
) -> Result<(ExponentPair, Rational)> {
    if max_len > MAX_SEARCH_LEN {
        return Err(Error::guard(
            "pairs.max_len",
            format!("max_len = {max_len} exceeds {MAX_SEARCH_LEN}"),
        ));
    }
    let mut all_seeds: Vec<ExponentPair> = seeds.iter().map(reseed).collect();
    if include_axiom {
        all_seeds.push(ExponentPair::new_pair());
    }
    if all_seeds.is_empty() {
        return Err(Error::invalid("no seeds to search from"));
    }

    struct Best {
        pair: ExponentPair,
        value: Rational,
        seed_index: usize,
    }
    fn better(cand: &ExponentPair, value: &Rational, seed_index: usize, best: &Best) -> bool {
        value
            .cmp(&best.value)
            .then(cand.word.len().cmp(&best.pair.word.len()))
            .then(cand.word.cmp(&best.pair.word))
            .then(seed_index.cmp(&best.seed_index))
            .is_lt()
    }
    fn walk(
        p: &ExponentPair,
        depth_left: usize,
        seed_index: usize,
        objective: &Objective,
        best: &mut Option<Best>,
    ) {
        let value = objective.evaluate(p);
        let replace = match best {
            None => true,
            Some(b) => better(p, &value, seed_index, b),
        };
        if replace {
            *best = Some(Best {
                pair: p.clone(),
                value,
                seed_index,
            });
        }
        if depth_left == 0 {
            return;
        }
        walk(&apply_a(p), depth_left - 1, seed_index, objective, best);
        if !p.word.starts_with('B') {
            walk(&apply_b(p), depth_left - 1, seed_index, objective, best);
        }
    }

    let mut best = None;
    for (i, seed) in all_seeds.iter().enumerate() {
        walk(seed, max_len, i, objective, &mut best);
    }
    let best = best.expect("at least one seed");
    Ok((best.pair, best.value))
}

fn reseed(p: &ExponentPair) -> ExponentPair {
    ExponentPair {
        k: p.k.clone(),
        l: p.l.clone(),
        word: String::new(),
        seed: (p.k.clone(), p.l.clone()),
    }
}

/// `true` if the pair is `(k, k + 1/2)`, the fixed-point family of `B`.
pub fn is_b_fixed(p: &ExponentPair) -> bool {
    (&p.l - &p.k - rat(1, 2)).is_zero()
}
