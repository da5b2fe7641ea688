//! Exponent bounds for `S = Σ_{m∼M} e(T F(m/M))` as exact piecewise-affine
//! functions of `α = log M / log T`: `|S| ≪ T^{p(α)+ε}`.
//!
//! Constants and ε are dropped throughout; only exponents are tracked.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::rational::{int, limit_denominator, rat, to_f64, Rational};

/// Denominator bound used when a float `α` is turned into a rational.
pub const ALPHA_DENOMINATOR: u64 = 10_000;

/// Where a piece of the bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PieceTag {
    /// `|S|⁶ ≪ M³ T^{53/57}` for `T^{49/114} < M ≤ √T`.
    SixthPowerUpper,
    /// `|S|⁶ ≪ M⁴ T^{1/2}` for `T^{5/12} ≤ M ≤ T^{49/114}`.
    SixthPowerMiddle,
    /// `|S|⁶ ≪ M² T^{4/3}` for `(cT)^{1/3} ≤ M < T^{5/12}`.
    SixthPowerLower,
    /// `|S| ≪ M^{1/2} T^{13/84}` for `17/42 ≤ α ≤ 1/2`.
    MainBound,
    /// `|S| ≪ T^{(4 + 103α)/128}` for `12/31 < α ≤ 1`.
    Huxley,
    /// `|S| ≪ M^{11/18} T^{1/9}` from the pair `(1/9, 13/18)`.
    ExponentPair,
    /// `|S| ≤ M`.
    Trivial,
}

impl PieceTag {
    pub fn label(&self) -> &'static str {
        match self {
            PieceTag::SixthPowerUpper => "sixth-power-upper",
            PieceTag::SixthPowerMiddle => "sixth-power-middle",
            PieceTag::SixthPowerLower => "sixth-power-lower",
            PieceTag::MainBound => "main-bound",
            PieceTag::Huxley => "huxley",
            PieceTag::ExponentPair => "exponent-pair",
            PieceTag::Trivial => "trivial",
        }
    }
}

impl fmt::Display for PieceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Interval of `α` with rational endpoints and explicit closedness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Rational,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Self {
            lo,
            lo_closed: true,
            hi,
            hi_closed: true,
        }
    }

    pub fn new(lo: Rational, lo_closed: bool, hi: Rational, hi_closed: bool) -> Self {
        Self {
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }

    pub fn contains(&self, a: &Rational) -> bool {
        let above = if self.lo_closed {
            a >= &self.lo
        } else {
            a > &self.lo
        };
        let below = if self.hi_closed {
            a <= &self.hi
        } else {
            a < &self.hi
        };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// `p(α) = constant + slope·α` on `domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub domain: Interval,
    pub constant: Rational,
    pub slope: Rational,
    pub tag: PieceTag,
}

impl Piece {
    /// The affine formula at `α`, regardless of the domain.
    pub fn formula(&self, alpha: &Rational) -> Rational {
        &self.constant + &self.slope * alpha
    }

    pub fn eval(&self, alpha: &Rational) -> Option<Rational> {
        self.domain.contains(alpha).then(|| self.formula(alpha))
    }

    /// The `α` where this formula meets `other`'s, if the slopes differ.
    pub fn crossover(&self, other: &Piece) -> Option<Rational> {
        let ds = &self.slope - &other.slope;
        (!ds.is_zero()).then(|| (&other.constant - &self.constant) / ds)
    }

    /// Part of the domain (clipped to `clip`) where this piece is `≤ target`.
    pub fn admissible_against(&self, target: &Piece, clip: &Interval) -> Interval {
        let dom = self.domain.intersect(clip);
        // (c − c_t) + (s − s_t)·α ≤ 0
        let dc = &self.constant - &target.constant;
        let ds = &self.slope - &target.slope;
        let half_line = if ds.is_zero() {
            if dc.is_positive() {
                return Interval::new(int(1), false, int(0), false);
            }
            dom.clone()
        } else {
            let root = -&dc / &ds;
            if ds.is_positive() {
                Interval::new(dom.lo.clone().min(root.clone()), true, root, true)
            } else {
                Interval::new(root.clone(), true, dom.hi.clone().max(root), true)
            }
        };
        dom.intersect(&half_line)
    }
}

/// A list of pieces; evaluated pointwise by [`PiecewiseBound::envelope`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseBound {
    pub pieces: Vec<Piece>,
}

impl PiecewiseBound {
    pub fn piece(&self, tag: PieceTag) -> &Piece {
        self.pieces
            .iter()
            .find(|p| p.tag == tag)
            .expect("tag present")
    }

    /// Pointwise minimum of the pieces whose domain contains `α`; ties go to the
    /// earlier piece.
    pub fn envelope(&self, alpha: &Rational) -> Option<(Rational, PieceTag)> {
        let mut best: Option<(Rational, PieceTag)> = None;
        for piece in &self.pieces {
            if let Some(v) = piece.eval(alpha) {
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, piece.tag));
                }
            }
        }
        best
    }
}

/// The seven bounds, in tie-break order.
pub fn s_bound_pieces() -> PiecewiseBound {
    let p = |domain, constant, slope, tag| Piece {
        domain,
        constant,
        slope,
        tag,
    };
    PiecewiseBound {
        pieces: vec![
            // (3α + 53/57)/6
            p(
                Interval::new(rat(49, 114), false, rat(1, 2), true),
                rat(53, 342),
                rat(1, 2),
                PieceTag::SixthPowerUpper,
            ),
            // (4α + 1/2)/6
            p(
                Interval::closed(rat(5, 12), rat(49, 114)),
                rat(1, 12),
                rat(2, 3),
                PieceTag::SixthPowerMiddle,
            ),
            // (2α + 4/3)/6
            p(
                Interval::new(rat(1, 3), true, rat(5, 12), false),
                rat(2, 9),
                rat(1, 3),
                PieceTag::SixthPowerLower,
            ),
            p(
                Interval::closed(rat(17, 42), rat(1, 2)),
                rat(13, 84),
                rat(1, 2),
                PieceTag::MainBound,
            ),
            // (4 + 103α)/128
            p(
                Interval::new(rat(12, 31), false, int(1), true),
                rat(1, 32),
                rat(103, 128),
                PieceTag::Huxley,
            ),
            p(
                Interval::closed(int(0), int(1)),
                rat(1, 9),
                rat(11, 18),
                PieceTag::ExponentPair,
            ),
            p(
                Interval::closed(int(0), int(1)),
                int(0),
                int(1),
                PieceTag::Trivial,
            ),
        ],
    }
}

/// The target `α/2 + 13/84` on `[0, 1/2]`.
pub fn target_piece() -> Piece {
    Piece {
        domain: Interval::closed(int(0), rat(1, 2)),
        constant: rat(13, 84),
        slope: rat(1, 2),
        tag: PieceTag::MainBound,
    }
}

pub fn target(alpha: &Rational) -> Rational {
    target_piece().formula(alpha)
}

/// Pointwise minimum of [`s_bound_pieces`] at `α ∈ [0, 1]`.
pub fn envelope(alpha: &Rational) -> Result<(Rational, PieceTag)> {
    if alpha.is_negative() || alpha > &int(1) {
        return Err(Error::invalid(format!("alpha = {alpha} outside [0, 1]")));
    }
    Ok(s_bound_pieces()
        .envelope(alpha)
        .expect("the trivial piece covers [0, 1]"))
}

/// `α` where `M T^{-17/57} = M^{1/2} T^{-1/12}`.
pub fn resonance_crossover() -> Rational {
    // α − 17/57 = α/2 − 1/12
    (rat(17, 57) - rat(1, 12)) * int(2)
}

/// One exact crossover with the target line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossover {
    pub tag: PieceTag,
    pub alpha: Rational,
}

/// Exact verification that the envelope stays below `α/2 + 13/84` on `[0, 1/2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    /// Exponent-pair, Huxley, trivial and lower-edge crossovers, in that order.
    pub crossovers: Vec<Crossover>,
    /// Per piece: the part of `[0, 1/2]` where it alone meets the target.
    pub admissible: Vec<(PieceTag, Interval)>,
    /// The middle sixth-power formula evaluated at the lower edge `17/42`.
    pub middle_at_edge: Rational,
    pub target_at_edge: Rational,
    /// Whether the admissible sets cover `[0, 1/2]`.
    pub union_covers: bool,
    pub grid_points: usize,
    /// Grid points where the envelope exceeded the target (empty on success).
    pub failures: Vec<Rational>,
    /// Crossovers whose substitution did not give equal values (empty on success).
    pub inexact: Vec<PieceTag>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.union_covers && self.failures.is_empty() && self.inexact.is_empty()
    }

    pub fn crossover(&self, tag: PieceTag) -> Option<&Rational> {
        self.crossovers
            .iter()
            .find(|c| c.tag == tag)
            .map(|c| &c.alpha)
    }
}

/// Solves every crossover exactly, checks that the admissible sets cover
/// `[0, 1/2]`, and checks `envelope(α) ≤ α/2 + 13/84` at every rational in
/// `[0, 1/2]` with denominator `≤ denominator_bound` and at every crossover.
pub fn verify_envelope_coverage(denominator_bound: u64) -> CoverageReport {
    let bound = s_bound_pieces();
    let tgt = target_piece();
    let half = Interval::closed(int(0), rat(1, 2));

    let mut crossovers = Vec::new();
    let mut inexact = Vec::new();
    for tag in [
        PieceTag::ExponentPair,
        PieceTag::Huxley,
        PieceTag::Trivial,
        PieceTag::SixthPowerLower,
    ] {
        let piece = bound.piece(tag);
        let alpha = piece.crossover(&tgt).expect("slopes differ from 1/2");
        if piece.formula(&alpha) != tgt.formula(&alpha) {
            inexact.push(tag);
        }
        crossovers.push(Crossover { tag, alpha });
    }

    let admissible: Vec<(PieceTag, Interval)> = bound
        .pieces
        .iter()
        .map(|p| (p.tag, p.admissible_against(&tgt, &half)))
        .filter(|(_, i)| !i.is_empty())
        .collect();
    let union_covers = covers(
        &admissible
            .iter()
            .map(|(_, i)| i.clone())
            .collect::<Vec<_>>(),
        &half,
    );

    let mut failures = Vec::new();
    let mut grid_points = 0usize;
    let mut check = |a: &Rational| {
        grid_points += 1;
        let (p, _) = bound.envelope(a).expect("trivial piece applies");
        if p > tgt.formula(a) {
            failures.push(a.clone());
        }
    };
    for q in 1..=denominator_bound.max(1) {
        for p in 0..=q / 2 {
            if p.gcd(&q) == 1 || (p == 0 && q == 1) {
                check(&Rational::new((p as i64).into(), (q as i64).into()));
            }
        }
    }
    let mut specials: Vec<Rational> = crossovers.iter().map(|c| c.alpha.clone()).collect();
    for piece in &bound.pieces {
        specials.push(piece.domain.lo.clone());
        specials.push(piece.domain.hi.clone());
    }
    for a in specials.iter().filter(|a| half.contains(a)) {
        check(a);
    }

    let edge = rat(17, 42);
    CoverageReport {
        crossovers,
        admissible,
        middle_at_edge: bound.piece(PieceTag::SixthPowerMiddle).formula(&edge),
        target_at_edge: tgt.formula(&edge),
        union_covers,
        grid_points,
        failures,
        inexact,
    }
}

/// Whether the union of `parts` covers `whole` (exact, closedness-aware sweep).
fn covers(parts: &[Interval], whole: &Interval) -> bool {
    let mut parts: Vec<Interval> = parts
        .iter()
        .map(|p| p.intersect(whole))
        .filter(|p| !p.is_empty())
        .collect();
    parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
    // Covered so far: [whole.lo, reach] (closed iff reach_closed), or nothing yet.
    let mut reach: Option<(Rational, bool)> = None;
    for p in &parts {
        let joins = match &reach {
            None => p.lo == whole.lo && (p.lo_closed || !whole.lo_closed),
            Some((r, rc)) => p.lo < *r || (p.lo == *r && (*rc || p.lo_closed)),
        };
        if !joins {
            return false;
        }
        reach = match reach {
            Some((r, rc)) if r > p.hi || (r == p.hi && rc) => Some((r, rc)),
            _ => Some((p.hi.clone(), p.hi_closed)),
        };
    }
    match reach {
        Some((r, rc)) => r > whole.hi || (r == whole.hi && (rc || !whole.hi_closed)),
        None => false,
    }
}

/// Which parameter choice (or outside bound) a plan relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `N = M T^{-2/7}`.
    MainTheorem,
    /// `N = max(M T^{-17/57}, M^{1/2} T^{-1/12})`.
    ResonanceOptimized,
    /// `N = (2M³/(cT))^{1/2}`.
    AlternateN,
    ExponentPair,
    Huxley,
    Trivial,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::MainTheorem => "main-theorem",
            Regime::ResonanceOptimized => "resonance-optimized",
            Regime::AlternateN => "alternate-n",
            Regime::ExponentPair => "exponent-pair",
            Regime::Huxley => "huxley",
            Regime::Trivial => "trivial",
        }
    }

    fn splits_sum(&self) -> bool {
        matches!(
            self,
            Regime::MainTheorem | Regime::ResonanceOptimized | Regime::AlternateN
        )
    }
}

/// `(T, M, c)` with `α = log M / log T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub t: f64,
    pub m: u64,
    pub c: f64,
}

impl Scenario {
    pub fn new(t: f64, m: u64, c: f64) -> Result<Self> {
        ensure_finite("T", t)?;
        ensure_finite("c", c)?;
        if !(t > 1.0) {
            return Err(Error::invalid(format!("T must be > 1, got {t}")));
        }
        if m < 2 {
            return Err(Error::invalid(format!("M must be >= 2, got {m}")));
        }
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::invalid(format!("c must lie in (0, 1], got {c}")));
        }
        let s = Self { t, m, c };
        if s.alpha() > 1.0 {
            return Err(Error::invalid(format!(
                "alpha = log M / log T = {} exceeds 1",
                s.alpha()
            )));
        }
        Ok(s)
    }

    pub fn alpha(&self) -> f64 {
        (self.m as f64).ln() / self.t.ln()
    }
}

/// `R = ⌈(2M³/(cNT))^{1/2}⌉`: the least integer whose square is `≥ 2M³/(cNT)`.
pub fn compute_r(t: f64, m: f64, n: f64, c: f64) -> Result<u64> {
    for (name, v) in [("T", t), ("M", m), ("N", n), ("c", c)] {
        ensure_finite(name, v)?;
        if !(v > 0.0) {
            return Err(Error::invalid(format!("{name} must be > 0, got {v}")));
        }
    }
    let x = 2.0 * m.powi(3) / (c * n * t);
    let mut r = x.sqrt().ceil().max(1.0);
    while r > 1.0 && (r - 1.0) * (r - 1.0) >= x {
        r -= 1.0;
    }
    while r * r < x {
        r += 1.0;
    }
    Ok(r as u64)
}

/// The splitting length `N` prescribed by `regime`.
pub fn choose_n(s: &Scenario, regime: Regime) -> Result<f64> {
    let (t, m) = (s.t, s.m as f64);
    match regime {
        Regime::MainTheorem => Ok(m * t.powf(-2.0 / 7.0)),
        Regime::ResonanceOptimized => {
            Ok((m * t.powf(-17.0 / 57.0)).max(m.sqrt() * t.powf(-1.0 / 12.0)))
        }
        Regime::AlternateN => Ok((2.0 * m.powi(3) / (s.c * t)).sqrt()),
        other => Err(Error::Unsupported(format!(
            "regime {} has no splitting length",
            other.label()
        ))),
    }
}

/// Tunables for [`make_plan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanConfig {
    /// `T` below which the asymptotic side conditions are not expected to hold.
    pub t0: f64,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self { t0: 1e6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub scenario: Scenario,
    pub alpha: String,
    pub regime: Regime,
    pub witness: PieceTag,
    pub n: Option<f64>,
    pub r: Option<u64>,
    /// `p` with `|S| ≪ T^{p+ε}`, as an exact fraction string.
    pub predicted_exponent: String,
    pub valid: bool,
    /// `N ≤ R² ≤ 4N`.
    pub n_comparable_r2: bool,
    pub reasons: Vec<String>,
}

/// Picks the regime from the envelope witness at `α` and checks the side
/// conditions `1 < N < M`, `R ≤ N ≤ R²` for the sum-splitting regimes.
pub fn make_plan(s: &Scenario, config: &PlanConfig) -> Result<Plan> {
    let s = Scenario::new(s.t, s.m, s.c)?;
    let alpha = limit_denominator(s.alpha(), ALPHA_DENOMINATOR)?;
    let (p, witness) = envelope(&alpha)?;
    let regime = match witness {
        PieceTag::MainBound if alpha >= rat(3, 7) => Regime::MainTheorem,
        PieceTag::MainBound if alpha >= rat(5, 12) => Regime::ResonanceOptimized,
        PieceTag::MainBound => Regime::AlternateN,
        PieceTag::SixthPowerUpper | PieceTag::SixthPowerMiddle => Regime::ResonanceOptimized,
        PieceTag::SixthPowerLower => Regime::AlternateN,
        PieceTag::Huxley => Regime::Huxley,
        PieceTag::ExponentPair => Regime::ExponentPair,
        PieceTag::Trivial => Regime::Trivial,
    };
    let mut reasons = Vec::new();
    let (mut n, mut r, mut valid, mut comparable) = (None, None, true, false);
    if regime.splits_sum() {
        let nv = choose_n(&s, regime)?;
        let rv = compute_r(s.t, s.m as f64, nv, s.c)?;
        let rf = rv as f64;
        if !(nv > 1.0 && nv < s.m as f64) {
            valid = false;
            reasons.push(format!("N = {nv:.6} not in (1, M)"));
        }
        if rf > nv {
            valid = false;
            reasons.push(format!("R = {rv} exceeds N = {nv:.6}"));
        }
        if nv > rf * rf {
            valid = false;
            reasons.push(format!("N = {nv:.6} exceeds R^2 = {}", rv * rv));
        }
        comparable = nv <= rf * rf && rf * rf <= 4.0 * nv;
        n = Some(nv);
        r = Some(rv);
    }
    if s.t < config.t0 {
        reasons.push(format!("T = {} below T0 = {}", s.t, config.t0));
    }
    Ok(Plan {
        scenario: s,
        alpha: alpha.to_string(),
        regime,
        witness,
        n,
        r,
        predicted_exponent: p.to_string(),
        valid,
        n_comparable_r2: comparable,
        reasons,
    })
}

/// CSV row `alpha_num,alpha_den,p_num,p_den,witness`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRow {
    pub alpha_num: i64,
    pub alpha_den: i64,
    pub p_num: String,
    pub p_den: String,
    pub witness: String,
}

/// Envelope at every reduced `α = a/q ∈ [0, 1]` with `q ≤ denominator_bound`,
/// in increasing order of `α`.
pub fn envelope_table(denominator_bound: u64) -> Result<Vec<EnvelopeRow>> {
    if denominator_bound == 0 {
        return Err(Error::invalid("denominator bound must be >= 1"));
    }
    if denominator_bound > 5000 {
        return Err(Error::guard(
            "planner.denominator_bound",
            format!("{denominator_bound} exceeds 5000"),
        ));
    }
    let q_max = denominator_bound as i64;
    let mut alphas: Vec<(i64, i64)> = Vec::new();
    for q in 1..=q_max {
        for a in 0..=q {
            if a.gcd(&q) == 1 {
                alphas.push((a, q));
            }
        }
    }
    alphas.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    let bound = s_bound_pieces();
    Ok(alphas
        .into_iter()
        .map(|(a, q)| {
            let (p, tag) = bound.envelope(&rat(a, q)).expect("trivial piece applies");
            EnvelopeRow {
                alpha_num: a,
                alpha_den: q,
                p_num: p.numer().to_string(),
                p_den: p.denom().to_string(),
                witness: tag.label().to_string(),
            }
        })
        .collect())
}

/// Decimal rendering helper for reports.
pub fn decimal(r: &Rational) -> f64 {
    to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seven_pieces_with_distinct_tags() {
        let b = s_bound_pieces();
        assert_eq!(b.pieces.len(), 7);
        let mut tags: Vec<_> = b.pieces.iter().map(|p| p.tag.label()).collect();
        tags.dedup();
        assert_eq!(tags.len(), 7);
    }

    #[test]
    fn piece_values() {
        let b = s_bound_pieces();
        assert_eq!(
            b.piece(PieceTag::SixthPowerMiddle).eval(&rat(5, 12)),
            Some(rat(13, 36))
        );
        assert_eq!(
            b.piece(PieceTag::SixthPowerMiddle).formula(&rat(17, 42)),
            rat(89, 252)
        );
        assert_eq!(target(&rat(17, 42)), rat(90, 252));
        assert_eq!(
            b.piece(PieceTag::SixthPowerLower).eval(&rat(17, 42)),
            Some(rat(90, 252))
        );
        assert_eq!(b.piece(PieceTag::SixthPowerLower).eval(&rat(5, 12)), None);
    }

    #[test]
    fn envelope_examples() {
        assert_eq!(envelope(&int(0)).unwrap(), (int(0), PieceTag::Trivial));
        assert_eq!(
            envelope(&rat(1, 2)).unwrap(),
            (rat(17, 42), PieceTag::MainBound)
        );
        let (p, w) = envelope(&rat(2, 5)).unwrap();
        assert!(matches!(w, PieceTag::Huxley | PieceTag::ExponentPair));
        assert!(p <= rat(1, 5) + rat(13, 84));
        assert!(envelope(&rat(11, 10)).is_err());
    }

    #[test]
    fn resonance_crossover_is_49_over_114() {
        let a = resonance_crossover();
        assert_eq!(a, rat(49, 114));
        assert_eq!(&a - rat(17, 57), &a / int(2) - rat(1, 12));
    }

    #[test]
    fn coverage_report() {
        let rep = verify_envelope_coverage(200);
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.crossover(PieceTag::Huxley), Some(&rat(332, 819)));
        assert_eq!(rep.crossover(PieceTag::ExponentPair), Some(&rat(11, 28)));
        assert_eq!(rep.crossover(PieceTag::Trivial), Some(&rat(13, 42)));
        assert_eq!(rep.crossover(PieceTag::SixthPowerLower), Some(&rat(17, 42)));
        assert_eq!(rep.middle_at_edge, rat(89, 252));
    }

    #[test]
    fn covers_detects_gaps() {
        let whole = Interval::closed(int(0), int(1));
        let a = Interval::closed(int(0), rat(1, 2));
        let b_open = Interval::new(rat(1, 2), false, int(1), true);
        let c = Interval::new(rat(3, 5), true, int(1), true);
        assert!(covers(&[a.clone(), b_open.clone()], &whole));
        assert!(!covers(
            &[Interval::new(int(0), true, rat(1, 2), false), b_open],
            &whole
        ));
        assert!(!covers(&[a, c], &whole));
    }

    #[test]
    fn compute_r_examples() {
        // 2M³ = cNT exactly
        assert_eq!(compute_r(100.0, 10.0, 20.0, 1.0).unwrap(), 1);
        let t: f64 = 1e6;
        let m: f64 = 1e3;
        let n = m * t.powf(-2.0 / 7.0);
        let r = compute_r(t, m, n, 1.0).unwrap() as f64;
        assert!(r <= n && n <= r * r);
        let exact = (2.0 * m.powi(3) / (n * t)).sqrt();
        let halved = compute_r(t, m, n, 0.5).unwrap() as f64;
        let centre = (2f64.sqrt() * exact).ceil();
        assert!((centre - 1.0..=centre + 1.0).contains(&halved));
        assert!(compute_r(f64::NAN, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn choose_n_examples() {
        let t: f64 = 1e12;
        let s = Scenario::new(t, 1_000_000, 1.0).unwrap();
        let n = choose_n(&s, Regime::MainTheorem).unwrap();
        assert!((n.ln() / t.ln() - 3.0 / 14.0).abs() < 1e-9);
        assert!(choose_n(&s, Regime::Trivial).is_err());

        let s = Scenario::new(1e12, 10_000, 1.0).unwrap(); // α = 1/3 < 5/12
        let n = choose_n(&s, Regime::AlternateN).unwrap();
        let r = compute_r(s.t, s.m as f64, n, s.c).unwrap() as f64;
        assert!(n <= r * r && r * r <= 4.0 * n);
    }

    #[test]
    fn plan_examples() {
        let cfg = PlanConfig::default();
        let p = make_plan(&Scenario::new(1e6, 1000, 1.0).unwrap(), &cfg).unwrap();
        assert_eq!(p.regime, Regime::MainTheorem);
        assert_eq!(p.predicted_exponent, (rat(13, 84) + rat(1, 4)).to_string());
        assert!(p.valid, "{:?}", p.reasons);

        // α ≈ 0.35
        let t: f64 = 1e20;
        let m = t.powf(0.35).round() as u64;
        let p = make_plan(&Scenario::new(t, m, 1.0).unwrap(), &cfg).unwrap();
        assert!(matches!(p.regime, Regime::ExponentPair | Regime::Huxley));

        let m = t.powf(0.1).round() as u64;
        let p = make_plan(&Scenario::new(t, m, 1.0).unwrap(), &cfg).unwrap();
        assert_eq!(p.regime, Regime::Trivial);
        assert_eq!(p.predicted_exponent, "1/10");

        assert!(Scenario::new(100.0, 1000, 1.0).is_err());
    }

    #[test]
    fn envelope_table_is_sorted() {
        let rows = envelope_table(6).unwrap();
        assert_eq!(rows.first().unwrap().alpha_num, 0);
        assert_eq!(
            (
                rows.last().unwrap().alpha_num,
                rows.last().unwrap().alpha_den
            ),
            (1, 1)
        );
        for w in rows.windows(2) {
            assert!(w[0].alpha_num * w[1].alpha_den < w[1].alpha_num * w[0].alpha_den);
        }
    }

    proptest! {
        #[test]
        fn envelope_is_the_pointwise_minimum(q in 1i64..400, a in 0i64..400) {
            let alpha = rat(a % (q + 1), q);
            let (p, _) = envelope(&alpha).unwrap();
            for piece in &s_bound_pieces().pieces {
                if let Some(v) = piece.eval(&alpha) {
                    prop_assert!(p <= v);
                }
            }
            prop_assert!(p <= alpha);
        }

        #[test]
        fn main_theorem_plans_are_valid_for_large_t(log_t in 6.0f64..12.0, frac in 0.0f64..1.0) {
            let t = 10f64.powf(log_t);
            let alpha = 3.0 / 7.0 + frac * (0.5 - 3.0 / 7.0);
            let m = t.powf(alpha).floor().max(2.0) as u64;
            let s = Scenario::new(t, m, 1.0).unwrap();
            let plan = make_plan(&s, &PlanConfig::default()).unwrap();
            if plan.regime == Regime::MainTheorem {
                prop_assert!(plan.valid, "{:?}", plan.reasons);
            }
        }
    }
}
