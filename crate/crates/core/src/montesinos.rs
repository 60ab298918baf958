//! Montesinos link specifications: ordered cyclic lists of tangle slopes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rational::{slope_to_canonical_cf, ContinuedFraction, ExtendedSlope, RationalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MontesinosError {
    #[error("IntegerSlope at position {0}")]
    IntegerSlope(usize),
    #[error("InfiniteSlope at position {0}")]
    InfiniteSlope(usize),
    #[error("malformed slope token `{token}` at position {position}")]
    Malformed { position: usize, token: String },
    #[error("empty slope list")]
    Empty,
    #[error("at least 3 tangles are required, got {0}")]
    TooFewTangles(usize),
    #[error("no integer-transfer schedule avoids an integer slope")]
    Unnormalizable,
    #[error("spec is not reduced")]
    NotReduced,
    #[error("expected class {expected}, got {actual}")]
    WrongClass { expected: LinkClass, actual: LinkClass },
    #[error(transparent)]
    Arithmetic(#[from] RationalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkClass {
    AllPositive,
    AllNegative,
    PPM,
    PMM,
    PMPM,
    PPMM,
    AtLeast3Pos,
    AtLeast3Neg,
    TwoTangle,
    OneTangle,
}

impl LinkClass {
    /// Classifies a cyclic sign pattern. With three or more tangles of both
    /// signs the positive side wins the `AtLeast3*` tie.
    pub fn from_signs(signs: &[Sign]) -> LinkClass {
        let n = signs.len();
        let pos = signs.iter().filter(|&&s| s == Sign::Positive).count();
        let neg = n - pos;
        match n {
            0 | 1 => LinkClass::OneTangle,
            2 => LinkClass::TwoTangle,
            _ if neg == 0 => LinkClass::AllPositive,
            _ if pos == 0 => LinkClass::AllNegative,
            3 if pos == 2 => LinkClass::PPM,
            3 => LinkClass::PMM,
            4 if pos == 2 => {
                let alternating = (0..4).all(|i| signs[i] != signs[(i + 1) % 4]);
                if alternating {
                    LinkClass::PMPM
                } else {
                    LinkClass::PPMM
                }
            }
            _ if pos >= 3 => LinkClass::AtLeast3Pos,
            _ => LinkClass::AtLeast3Neg,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LinkClass::AllPositive => "AllPositive",
            LinkClass::AllNegative => "AllNegative",
            LinkClass::PPM => "PPM",
            LinkClass::PMM => "PMM",
            LinkClass::PMPM => "PMPM",
            LinkClass::PPMM => "PPMM",
            LinkClass::AtLeast3Pos => "AtLeast3Pos",
            LinkClass::AtLeast3Neg => "AtLeast3Neg",
            LinkClass::TwoTangle => "TwoTangle",
            LinkClass::OneTangle => "OneTangle",
        }
    }

    pub fn is_alternating(self) -> bool {
        matches!(self, LinkClass::AllPositive | LinkClass::AllNegative)
    }
}

impl fmt::Display for LinkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered (cyclic) list of tangle slopes, as typed by the user.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MontesinosSpec {
    slopes: Vec<ExtendedSlope>,
}

impl MontesinosSpec {
    pub fn new(slopes: Vec<ExtendedSlope>) -> Self {
        Self { slopes }
    }

    pub fn slopes(&self) -> &[ExtendedSlope] {
        &self.slopes
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }
}

impl FromStr for MontesinosSpec {
    type Err = MontesinosError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(MontesinosError::Empty);
        }
        let slopes = s
            .split(',')
            .enumerate()
            .map(|(position, tok)| {
                tok.parse::<ExtendedSlope>().map_err(|_| MontesinosError::Malformed {
                    position,
                    token: tok.trim().to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { slopes })
    }
}

impl fmt::Display for MontesinosSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_slopes(f, &self.slopes)
    }
}

fn write_slopes(f: &mut fmt::Formatter<'_>, slopes: &[ExtendedSlope]) -> fmt::Result {
    for (i, q) in slopes.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{q}")?;
    }
    Ok(())
}

/// Result of [`validate`]: every slope finite and non-integer, with the
/// sign pattern and canonical expansions computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidSpec {
    pub slopes: Vec<ExtendedSlope>,
    pub signs: Vec<Sign>,
    pub cfs: Vec<ContinuedFraction>,
}

impl ValidSpec {
    /// Either all slopes share a sign, or every `|q_i| < 1`.
    pub fn is_reduced(&self) -> bool {
        is_reduced_slopes(&self.slopes)
    }
}

fn is_reduced_slopes(slopes: &[ExtendedSlope]) -> bool {
    let all_pos = slopes.iter().all(|q| q.is_positive());
    let all_neg = slopes.iter().all(|q| q.is_negative());
    let all_small = slopes.iter().all(|q| q.abs().numerator() < q.denominator());
    all_pos || all_neg || all_small
}

pub fn validate(spec: &MontesinosSpec) -> Result<ValidSpec, MontesinosError> {
    if spec.is_empty() {
        return Err(MontesinosError::Empty);
    }
    for (i, q) in spec.slopes().iter().enumerate() {
        if q.is_infinite() {
            return Err(MontesinosError::InfiniteSlope(i));
        }
        if q.is_integer() {
            return Err(MontesinosError::IntegerSlope(i));
        }
    }
    let slopes = spec.slopes().to_vec();
    let signs = slopes
        .iter()
        .map(|q| if q.is_positive() { Sign::Positive } else { Sign::Negative })
        .collect();
    let cfs = slopes
        .iter()
        .map(|&q| slope_to_canonical_cf(q))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ValidSpec { slopes, signs, cfs })
}

/// A spec whose diagram is reduced: sign-uniform tangles, and either one
/// global sign or every `0 < |q_i| < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedSpec {
    slopes: Vec<ExtendedSlope>,
    cfs: Vec<ContinuedFraction>,
    signs: Vec<Sign>,
    class: LinkClass,
    rewritten_from_ppmm: bool,
}

impl ReducedSpec {
    /// Validates `slopes` and checks the reduced-diagram condition without
    /// moving any integer parts.
    pub fn new(slopes: Vec<ExtendedSlope>) -> Result<Self, MontesinosError> {
        let valid = validate(&MontesinosSpec::new(slopes))?;
        if !valid.is_reduced() {
            return Err(MontesinosError::NotReduced);
        }
        let class = LinkClass::from_signs(&valid.signs);
        Ok(Self {
            slopes: valid.slopes,
            cfs: valid.cfs,
            signs: valid.signs,
            class,
            rewritten_from_ppmm: false,
        })
    }

    pub fn slopes(&self) -> &[ExtendedSlope] {
        &self.slopes
    }

    pub fn cfs(&self) -> &[ContinuedFraction] {
        &self.cfs
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn class(&self) -> LinkClass {
        self.class
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s == Sign::Positive).count()
    }

    pub fn negative_count(&self) -> usize {
        self.signs.len() - self.positive_count()
    }

    /// Whether [`normalize`] applied the `++--` to `+-+-` rewrite.
    pub fn rewritten_from_ppmm(&self) -> bool {
        self.rewritten_from_ppmm
    }

    pub fn to_spec(&self) -> MontesinosSpec {
        MontesinosSpec::new(self.slopes.clone())
    }

    pub fn mirror(&self) -> ReducedSpec {
        let mut m = ReducedSpec::new(self.slopes.iter().map(|q| q.neg()).collect())
            .expect("mirror of a reduced spec is reduced");
        m.rewritten_from_ppmm = self.rewritten_from_ppmm;
        m
    }
}

impl fmt::Display for ReducedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_slopes(f, &self.slopes)
    }
}

/// Moves integer parts between tangles until the diagram is reduced, then
/// rewrites a `++--` arrangement into `+-+-`.
///
/// Each step moves `+1` from the largest slope to the smallest one, where
/// the donor is above 1 (or positive while some slope is below -1). Both
/// `Σ q_i` and the multiset of `q_i mod 1` are preserved.
pub fn normalize(spec: &MontesinosSpec) -> Result<ReducedSpec, MontesinosError> {
    let valid = validate(spec)?;
    if valid.slopes.len() < 3 {
        return Err(MontesinosError::TooFewTangles(valid.slopes.len()));
    }
    let mut slopes = valid.slopes;
    let one = ExtendedSlope::integer(1);
    let minus_one = ExtendedSlope::integer(-1);
    // Each move strictly lowers Σ max(0, ceil|q| - 1); the bound is a guard.
    let budget: i64 = slopes
        .iter()
        .map(|q| q.abs().floor().unwrap_or(0) + 1)
        .sum::<i64>()
        + 1;
    let mut moves = 0;
    while !is_reduced_slopes(&slopes) {
        if moves > budget {
            return Err(MontesinosError::Unnormalizable);
        }
        moves += 1;
        let donor = argmax(&slopes);
        let recipient = argmin(&slopes);
        let big = slopes[donor].cmp_value(&one).is_gt();
        let low = slopes[recipient].cmp_value(&minus_one).is_lt();
        let donor_ok = big || (slopes[donor].is_positive() && low);
        if !donor_ok || donor == recipient {
            return Err(MontesinosError::Unnormalizable);
        }
        let d = slopes[donor].checked_add_integer(-1)?;
        let r = slopes[recipient].checked_add_integer(1)?;
        if d.is_integer() || r.is_integer() {
            return Err(MontesinosError::Unnormalizable);
        }
        slopes[donor] = d;
        slopes[recipient] = r;
    }
    let reduced = ReducedSpec::new(slopes)?;
    if reduced.class == LinkClass::PPMM {
        rewrite_ppmm_to_pmpm(&reduced)
    } else {
        Ok(reduced)
    }
}

fn argmax(slopes: &[ExtendedSlope]) -> usize {
    let mut best = 0;
    for i in 1..slopes.len() {
        if slopes[i].cmp_value(&slopes[best]).is_gt() {
            best = i;
        }
    }
    best
}

fn argmin(slopes: &[ExtendedSlope]) -> usize {
    let mut best = 0;
    for i in 1..slopes.len() {
        if slopes[i].cmp_value(&slopes[best]).is_lt() {
            best = i;
        }
    }
    best
}

/// `(+, +, -, -)` up to rotation becomes `(+, -, +, -)`: subtract 1 from the
/// second positive slope and add 1 to the first negative one after it.
pub fn rewrite_ppmm_to_pmpm(spec: &ReducedSpec) -> Result<ReducedSpec, MontesinosError> {
    if spec.class != LinkClass::PPMM {
        return Err(MontesinosError::WrongClass {
            expected: LinkClass::PPMM,
            actual: spec.class,
        });
    }
    let one = ExtendedSlope::integer(1);
    if spec.slopes.iter().any(|q| !q.abs().cmp_value(&one).is_lt()) {
        return Err(MontesinosError::NotReduced);
    }
    let s = &spec.signs;
    let k = (0..4)
        .find(|&k| s[k] == Sign::Positive && s[(k + 1) % 4] == Sign::Positive)
        .expect("PPMM has two adjacent positive tangles");
    let mut slopes = spec.slopes.clone();
    let second = (k + 1) % 4;
    let third = (k + 2) % 4;
    slopes[second] = slopes[second].checked_add_integer(-1)?;
    slopes[third] = slopes[third].checked_add_integer(1)?;
    let mut out = ReducedSpec::new(slopes)?;
    out.rewritten_from_ppmm = true;
    Ok(out)
}

pub fn mirror(spec: &MontesinosSpec) -> MontesinosSpec {
    MontesinosSpec::new(spec.slopes().iter().map(|q| q.neg()).collect())
}

/// Complete isotopy invariant for `r >= 3` tangles: the slope sum and the
/// dihedral class of the residues mod 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalInvariant {
    pub sum: ExtendedSlope,
    pub residues: Vec<ExtendedSlope>,
}

pub fn canonical_invariant(spec: &MontesinosSpec) -> Result<CanonicalInvariant, MontesinosError> {
    let valid = validate(spec)?;
    if valid.slopes.len() < 3 {
        return Err(MontesinosError::TooFewTangles(valid.slopes.len()));
    }
    let mut sum = ExtendedSlope::ZERO;
    for q in &valid.slopes {
        sum = sum.checked_add(q)?;
    }
    let residues = valid
        .slopes
        .iter()
        .map(|q| q.frac())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CanonicalInvariant { sum, residues: dihedral_min(&residues) })
}

/// Lexicographically least sequence over all rotations and reflections.
pub fn dihedral_min<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    let n = seq.len();
    let mut best: Option<Vec<T>> = None;
    let mut consider = |cand: Vec<T>| {
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    };
    for k in 0..n {
        consider((0..n).map(|i| seq[(k + i) % n].clone()).collect());
        consider((0..n).map(|i| seq[(k + n - i) % n].clone()).collect());
    }
    best.unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hyperbolicity {
    Hyperbolic,
    ExcludedPretzel,
    Assumed,
}

impl Hyperbolicity {
    pub fn name(self) -> &'static str {
        match self {
            Hyperbolicity::Hyperbolic => "Hyperbolic",
            Hyperbolicity::ExcludedPretzel => "ExcludedPretzel",
            Hyperbolicity::Assumed => "Assumed",
        }
    }
}

/// With at least two tangles of each sign the link is hyperbolic unless it
/// is the `(2, -2, 2, -2)` pretzel link; otherwise hyperbolicity is assumed.
pub fn hyperbolicity_gate(spec: &ReducedSpec) -> Hyperbolicity {
    if spec.positive_count() < 2 || spec.negative_count() < 2 {
        return Hyperbolicity::Assumed;
    }
    let half = ExtendedSlope::new(1, 2).unwrap();
    let pretzel = MontesinosSpec::new(vec![half, half.neg(), half, half.neg()]);
    let excluded = canonical_invariant(&pretzel).ok();
    if excluded.is_some() && canonical_invariant(&spec.to_spec()).ok() == excluded {
        Hyperbolicity::ExcludedPretzel
    } else {
        Hyperbolicity::Hyperbolic
    }
}
