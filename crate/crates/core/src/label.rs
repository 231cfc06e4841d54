//! Composite order labels and the regions between them.
//!
//! An [`EcnTag`] is a finitely supported sequence of signed integer
//! coefficients. Depth 0 is the coarsest einheit and every deeper level is
//! strictly lesser than the one above it, so tags compare lexicographically
//! after padding the shorter sequence with zeros. The text form joins the
//! coefficients with `.`, e.g. `2.1.3` or `-1.4`.
//!
//! Coefficients are stored sparsely: only the nonzero terms are kept. Dense
//! insertion tends to produce long runs of interior zeros (`1.0.0.0.1`), and
//! a sparse layout keeps both memory and comparison cost proportional to the
//! number of nonzero terms rather than the depth.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// A composite order label.
///
/// Equality is sequence equality of the canonical form, and [`Ord`] is the
/// total lexicographic order over padded coefficient sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EcnTag {
    // (depth, coefficient) with strictly increasing depth and nonzero
    // coefficient. The zero tag has no terms.
    terms: Vec<(usize, BigInt)>,
}

impl EcnTag {
    /// The zero tag, `0`.
    pub fn zero() -> Self {
        EcnTag { terms: Vec::new() }
    }

    /// Builds a tag from a dense coefficient sequence, dropping zero
    /// coefficients so the result is canonical.
    pub fn from_coefficients<I, T>(coefficients: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        EcnTag::from_terms(
            coefficients
                .into_iter()
                .enumerate()
                .map(|(depth, c)| (depth, c.into())),
        )
    }

    /// Builds a tag from `(depth, coefficient)` pairs given in strictly
    /// increasing depth order. Zero coefficients are skipped.
    pub(crate) fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        EcnTag { terms }
    }

    /// A tag with a single coefficient `value` at `depth`.
    pub fn unit(depth: usize, value: impl Into<BigInt>) -> Self {
        EcnTag::from_terms([(depth, value.into())])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of einheit levels the canonical form spans: `2.0.1` has
    /// depth 3 and `0` has depth 1.
    pub fn depth(&self) -> usize {
        self.terms.last().map_or(1, |(d, _)| d + 1)
    }

    /// Coefficient at `depth`; zero beyond the canonical length.
    pub fn coefficient(&self, depth: usize) -> BigInt {
        self.coefficient_ref(depth).cloned().unwrap_or_default()
    }

    pub(crate) fn coefficient_ref(&self, depth: usize) -> Option<&BigInt> {
        self.terms
            .binary_search_by_key(&depth, |(d, _)| *d)
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// Dense coefficient sequence of the canonical form.
    pub fn coefficients(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.depth()];
        for (d, c) in &self.terms {
            out[*d] = c.clone();
        }
        out
    }

    /// Nonzero `(depth, coefficient)` terms in increasing depth order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    /// Depths carrying a nonzero coefficient: the tag's composite einheit.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|(d, _)| *d)
    }

    /// The coefficients above `depth`, with everything at or below it
    /// dropped.
    pub fn truncated(&self, depth: usize) -> EcnTag {
        let end = self.terms.partition_point(|(d, _)| *d < depth);
        EcnTag {
            terms: self.terms[..end].to_vec(),
        }
    }

    /// This tag's coefficients above `depth`, followed by `value` at `depth`.
    pub fn with_coefficient(&self, depth: usize, value: BigInt) -> EcnTag {
        let mut out = self.truncated(depth);
        if !value.is_zero() {
            out.terms.push((depth, value));
        }
        out
    }

    /// First depth at which the padded coefficient sequences differ, or
    /// `None` when the tags are equal.
    pub fn first_difference(&self, other: &EcnTag) -> Option<usize> {
        self.terms
            .iter()
            .zip(&other.terms)
            .find(|(a, b)| a != b)
            .map(|(a, b)| a.0.min(b.0))
            .or_else(|| {
                let n = self.terms.len().min(other.terms.len());
                match (self.terms.get(n), other.terms.get(n)) {
                    (Some((d, _)), _) | (None, Some((d, _))) => Some(*d),
                    (None, None) => None,
                }
            })
    }

    /// Position of the tag relative to zero: the sign of its first nonzero
    /// coefficient.
    pub fn signum(&self) -> Ordering {
        match self.terms.first() {
            None => Ordering::Equal,
            Some((_, c)) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }
}

impl Ord for EcnTag {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                // The other side is zero at this depth.
                (Some((_, x)), None) => return x.sign().cmp(&num_bigint::Sign::NoSign),
                (None, Some((_, y))) => return num_bigint::Sign::NoSign.cmp(&y.sign()),
                (Some((da, x)), Some((db, y))) => match da.cmp(db) {
                    Ordering::Less => return x.sign().cmp(&num_bigint::Sign::NoSign),
                    Ordering::Greater => return num_bigint::Sign::NoSign.cmp(&y.sign()),
                    Ordering::Equal => match x.cmp(y) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        unequal => return unequal,
                    },
                },
            }
        }
    }
}

impl PartialOrd for EcnTag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EcnTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut next = 0;
        for (d, c) in &self.terms {
            for zero_at in next..*d {
                f.write_str(if zero_at == 0 { "0" } else { ".0" })?;
            }
            if *d > 0 {
                f.write_str(".")?;
            }
            write!(f, "{c}")?;
            next = d + 1;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseTagError {
    #[error("malformed tag {0:?}")]
    Syntax(String),
    #[error("tag {0:?} is not canonical: trailing zero coefficient")]
    NonCanonical(String),
}

fn valid_coefficient(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    match digits.as_bytes() {
        [b'0'] => digits.len() == s.len(),
        [first, rest @ ..] => {
            (b'1'..=b'9').contains(first) && rest.iter().all(u8::is_ascii_digit)
        }
        [] => false,
    }
}

impl FromStr for EcnTag {
    type Err = ParseTagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('.').collect();
        if !parts.iter().all(|p| valid_coefficient(p)) {
            return Err(ParseTagError::Syntax(s.to_owned()));
        }
        if parts.len() > 1 && parts.last() == Some(&"0") {
            return Err(ParseTagError::NonCanonical(s.to_owned()));
        }
        Ok(EcnTag::from_coefficients(parts.iter().map(|p| {
            p.parse::<BigInt>()
                .expect("grammar-checked coefficient parses")
        })))
    }
}

/// One end of a [`Region`]: a finite tag or an infinity sentinel.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Min,
    Tag(EcnTag),
    Max,
}

impl Bound {
    pub fn as_tag(&self) -> Option<&EcnTag> {
        match self {
            Bound::Tag(t) => Some(t),
            _ => None,
        }
    }
}

impl From<EcnTag> for Bound {
    fn from(t: EcnTag) -> Self {
        Bound::Tag(t)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Min => f.write_str("MIN"),
            Bound::Tag(t) => t.fmt(f),
            Bound::Max => f.write_str("MAX"),
        }
    }
}

impl FromStr for Bound {
    type Err = ParseTagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "MIN" => Ok(Bound::Min),
            "MAX" => Ok(Bound::Max),
            _ => s.parse().map(Bound::Tag),
        }
    }
}

/// The open interval strictly between two bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    lower: Bound,
    upper: Bound,
}

impl Region {
    pub fn new(lower: impl Into<Bound>, upper: impl Into<Bound>) -> Result<Self, LabelError> {
        let (lower, upper) = (lower.into(), upper.into());
        if lower >= upper || lower == Bound::Max || upper == Bound::Min {
            return Err(LabelError::EmptyRegion { lower, upper });
        }
        Ok(Region { lower, upper })
    }

    /// The whole tag line, `(MIN, MAX)`.
    pub fn unbounded() -> Self {
        Region {
            lower: Bound::Min,
            upper: Bound::Max,
        }
    }

    pub fn lower(&self) -> &Bound {
        &self.lower
    }

    pub fn upper(&self) -> &Bound {
        &self.upper
    }

    pub fn contains(&self, t: &EcnTag) -> bool {
        let t = Bound::Tag(t.clone());
        self.lower < t && t < self.upper
    }

    /// True when `inner` lies strictly inside this region: both of its
    /// bounds are finite tags contained here.
    pub fn strictly_contains(&self, inner: &Region) -> bool {
        match (inner.lower.as_tag(), inner.upper.as_tag()) {
            (Some(lo), Some(hi)) => self.contains(lo) && self.contains(hi),
            _ => false,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("boundary tag {0} is not in the sequence")]
    BoundaryNotFound(EcnTag),
    #[error("empty region: {lower} is not below {upper}")]
    EmptyRegion { lower: Bound, upper: Bound },
}

/// Elements of the strictly ascending `seq` lying strictly between `a` and
/// `c`, both of which must be members of `seq`.
pub fn zwischenraum<'a>(
    seq: &'a [EcnTag],
    a: &EcnTag,
    c: &EcnTag,
) -> Result<&'a [EcnTag], LabelError> {
    let find = |t: &EcnTag| {
        seq.binary_search(t)
            .map_err(|_| LabelError::BoundaryNotFound(t.clone()))
    };
    let (ia, ic) = (find(a)?, find(c)?);
    if ia >= ic {
        return Err(LabelError::EmptyRegion {
            lower: Bound::Tag(a.clone()),
            upper: Bound::Tag(c.clone()),
        });
    }
    Ok(&seq[ia + 1..ic])
}
