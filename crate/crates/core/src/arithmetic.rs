//! Tag arithmetic: coefficient-wise addition and negation, subtraction,
//! segment length, scaling by a natural count, and checks of the additive
//! group and quotient structure.

use std::collections::BTreeSet;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::label::EcnTag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{minuend} - {subtrahend} is undefined: cannot take away a larger tag")]
    Domain { minuend: EcnTag, subtrahend: EcnTag },
    #[error("{tag} is not divisible by {divisor}")]
    Indivisible { tag: EcnTag, divisor: BigInt },
    #[error("division by zero")]
    DivisionByZero,
}

pub fn add(a: &EcnTag, b: &EcnTag) -> EcnTag {
    let (mut x, mut y) = (a.terms().peekable(), b.terms().peekable());
    let mut out = Vec::new();
    loop {
        let term = match (x.peek(), y.peek()) {
            (None, None) => break,
            (Some(_), None) => x.next().map(|(d, c)| (d, c.clone())),
            (None, Some(_)) => y.next().map(|(d, c)| (d, c.clone())),
            (Some((da, _)), Some((db, _))) => match da.cmp(db) {
                std::cmp::Ordering::Less => x.next().map(|(d, c)| (d, c.clone())),
                std::cmp::Ordering::Greater => y.next().map(|(d, c)| (d, c.clone())),
                std::cmp::Ordering::Equal => {
                    let (d, p) = x.next().unwrap();
                    let (_, q) = y.next().unwrap();
                    Some((d, p + q))
                }
            },
        };
        out.extend(term);
    }
    EcnTag::from_terms(out)
}

pub fn neg(a: &EcnTag) -> EcnTag {
    EcnTag::from_terms(a.terms().map(|(d, c)| (d, -c)))
}

/// `a + (-b)`, defined for every pair.
pub fn sub_group(a: &EcnTag, b: &EcnTag) -> EcnTag {
    add(a, &neg(b))
}

/// Subtraction as taking away: only defined when `b <= a`.
pub fn sub_euclidean(a: &EcnTag, b: &EcnTag) -> Result<EcnTag, ArithError> {
    if b > a {
        return Err(ArithError::Domain {
            minuend: a.clone(),
            subtrahend: b.clone(),
        });
    }
    Ok(sub_group(a, b))
}

/// Length of the segment between two tags: the larger minus the smaller.
pub fn length(a: &EcnTag, b: &EcnTag) -> EcnTag {
    if a >= b {
        sub_group(a, b)
    } else {
        sub_group(b, a)
    }
}

/// Scales every coefficient by the count `p`.
pub fn mul_count(a: &EcnTag, p: &BigInt) -> EcnTag {
    EcnTag::from_terms(a.terms().map(|(d, c)| (d, c * p)))
}

/// Splits `a` into `p` equal parts. Exact only: every coefficient must be a
/// multiple of `p`.
pub fn div_count(a: &EcnTag, p: &BigInt) -> Result<EcnTag, ArithError> {
    if p.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    let mut out = Vec::new();
    for (d, c) in a.terms() {
        let (q, r) = c.div_rem(p);
        if !r.is_zero() {
            return Err(ArithError::Indivisible {
                tag: a.clone(),
                divisor: p.clone(),
            });
        }
        out.push((d, q));
    }
    Ok(EcnTag::from_terms(out))
}

impl Add for &EcnTag {
    type Output = EcnTag;

    fn add(self, rhs: &EcnTag) -> EcnTag {
        add(self, rhs)
    }
}

impl Sub for &EcnTag {
    type Output = EcnTag;

    fn sub(self, rhs: &EcnTag) -> EcnTag {
        sub_group(self, rhs)
    }
}

impl Neg for &EcnTag {
    type Output = EcnTag;

    fn neg(self) -> EcnTag {
        neg(self)
    }
}

/// A set of tags checked for group structure under addition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Universe {
    /// No elements at all.
    Empty,
    /// Every tag whose nonzero coefficients sit only at the given depths,
    /// i.e. all numbers of one (possibly composite) einheit, with their
    /// inverses and zero.
    Einheit(BTreeSet<usize>),
    /// The members of `Einheit(depths)` that are `>= 0`: natural counts,
    /// including the empty count, without their negatives.
    Positives(BTreeSet<usize>),
}

impl Universe {
    pub fn einheit(depths: impl IntoIterator<Item = usize>) -> Self {
        Universe::Einheit(depths.into_iter().collect())
    }

    pub fn positives(depths: impl IntoIterator<Item = usize>) -> Self {
        Universe::Positives(depths.into_iter().collect())
    }

    pub fn contains(&self, t: &EcnTag) -> bool {
        match self {
            Universe::Empty => false,
            Universe::Einheit(depths) => t.support().all(|d| depths.contains(&d)),
            Universe::Positives(depths) => {
                t.support().all(|d| depths.contains(&d)) && t.signum().is_ge()
            }
        }
    }

    /// All members whose coefficients are bounded by `bound` in magnitude.
    pub fn window(&self, bound: i64) -> Vec<EcnTag> {
        let depths = match self {
            Universe::Empty => return Vec::new(),
            Universe::Einheit(d) | Universe::Positives(d) => d,
        };
        let mut out = vec![EcnTag::zero()];
        for &depth in depths {
            out = out
                .iter()
                .flat_map(|t| {
                    (-bound..=bound).map(move |c| crate::arithmetic::add(t, &EcnTag::unit(depth, c)))
                })
                .collect();
        }
        out.retain(|t| self.contains(t));
        out
    }

    /// A random member with coefficients bounded by `bound`, or `None` for
    /// the empty universe.
    pub fn sample<R: Rng>(&self, rng: &mut R, bound: i64) -> Option<EcnTag> {
        let depths = match self {
            Universe::Empty => return None,
            Universe::Einheit(d) | Universe::Positives(d) => d,
        };
        loop {
            let t = EcnTag::from_terms(depths.iter().map(|&d| (d, BigInt::from(rng.gen_range(-bound..=bound)))));
            if self.contains(&t) {
                return Some(t);
            }
            if let Universe::Positives(_) = self {
                return Some(neg(&t));
            }
        }
    }
}

/// Result of one group law check. A failed check carries the tags that
/// witness the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub passed: bool,
    pub cases: usize,
    pub witness: Vec<EcnTag>,
}

impl Check {
    fn pass(cases: usize) -> Self {
        Check {
            passed: true,
            cases,
            witness: Vec::new(),
        }
    }

    fn fail(cases: usize, witness: Vec<EcnTag>) -> Self {
        Check {
            passed: false,
            cases,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupReport {
    pub closure: Check,
    pub associativity: Check,
    pub identity: Check,
    pub inverse: Check,
}

impl GroupReport {
    pub fn is_group(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed)
    }

    pub fn checks(&self) -> [(&'static str, &Check); 4] {
        [
            ("closure", &self.closure),
            ("associativity", &self.associativity),
            ("identity", &self.identity),
            ("inverse", &self.inverse),
        ]
    }
}

/// Settings for [`check_group`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupCheckConfig {
    /// Sampled cases for closure and associativity.
    pub samples: usize,
    /// Coefficient bound for the exhaustive identity and inverse window.
    pub window: i64,
    /// Coefficient bound for sampled elements.
    pub sample_bound: i64,
    pub seed: u64,
}

impl Default for GroupCheckConfig {
    fn default() -> Self {
        GroupCheckConfig {
            samples: 10_000,
            window: 20,
            sample_bound: 1_000_000,
            seed: 0,
        }
    }
}

/// Checks the group laws of `universe` under addition. Closure and
/// associativity are sampled; identity and inverses are checked
/// exhaustively on the finite window.
pub fn check_group(universe: &Universe, config: &GroupCheckConfig) -> GroupReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let zero = EcnTag::zero();

    let mut closure = Check::pass(0);
    let mut associativity = Check::pass(0);
    for _ in 0..config.samples {
        let Some(a) = universe.sample(&mut rng, config.sample_bound) else {
            break;
        };
        let b = universe.sample(&mut rng, config.sample_bound).unwrap();
        let c = universe.sample(&mut rng, config.sample_bound).unwrap();
        let ab = add(&a, &b);
        closure.cases += 1;
        if closure.passed && !universe.contains(&ab) {
            closure = Check::fail(closure.cases, vec![a.clone(), b.clone()]);
        }
        associativity.cases += 1;
        if associativity.passed && add(&ab, &c) != add(&a, &add(&b, &c)) {
            associativity = Check::fail(associativity.cases, vec![a, b, c]);
        }
    }

    let window = universe.window(config.window);
    let identity = if !universe.contains(&zero) {
        Check::fail(window.len(), Vec::new())
    } else {
        match window.iter().find(|a| add(a, &zero) != **a || add(&zero, a) != **a) {
            Some(a) => Check::fail(window.len(), vec![a.clone()]),
            None => Check::pass(window.len()),
        }
    };
    let inverse = match window
        .iter()
        .find(|a| !universe.contains(&neg(a)) || !add(a, &neg(a)).is_zero())
    {
        Some(a) => Check::fail(window.len(), vec![a.clone(), neg(a)]),
        None => Check::pass(window.len()),
    };

    GroupReport {
        closure,
        associativity,
        identity,
        inverse,
    }
}

/// The quotient of the integers at one depth by the subgroup of multiples
/// of `factor`, as a coset addition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientTable {
    pub depth: usize,
    pub factor: u64,
    /// Coset representatives `0..factor` placed at `depth`.
    pub representatives: Vec<EcnTag>,
    /// `table[i][j]` is the index of the coset of `rep[i] + rep[j]`.
    pub table: Vec<Vec<usize>>,
}

impl QuotientTable {
    /// Index of the coset containing `t`, reduced on its coefficient at
    /// `self.depth`; `None` if `t` has support elsewhere.
    pub fn coset_of(&self, t: &EcnTag) -> Option<usize> {
        if t.support().any(|d| d != self.depth) {
            return None;
        }
        let r = t.coefficient(self.depth).mod_floor(&BigInt::from(self.factor));
        Some(usize::try_from(r).expect("residue below factor"))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.table.len();
        (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.table.len();
        let t = &self.table;
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| t[t[i][j]][k] == t[i][t[j][k]])))
    }

    /// Coset addition does not depend on the chosen representatives: for
    /// every pair of cosets and every pair of subgroup offsets `factor * k`
    /// with `|k| <= window`, the sum lands in the tabulated coset.
    pub fn is_well_defined(&self, window: i64) -> bool {
        let f = BigInt::from(self.factor);
        let offsets: Vec<EcnTag> = (-window..=window)
            .map(|k| EcnTag::unit(self.depth, &f * k))
            .collect();
        let n = self.table.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                offsets.iter().all(|p| {
                    offsets.iter().all(|q| {
                        let a = add(&self.representatives[i], p);
                        let b = add(&self.representatives[j], q);
                        self.coset_of(&add(&a, &b)) == Some(self.table[i][j])
                    })
                })
            })
        })
    }
}

/// Builds the coset addition table of the integers at `depth` modulo the
/// subgroup generated by `factor`. The table is computed by adding tags and
/// reducing, not by modular arithmetic on indices.
pub fn build_quotient(depth: usize, factor: u64) -> QuotientTable {
    assert!(factor >= 2, "quotient factor must be at least 2");
    let representatives: Vec<EcnTag> = (0..factor).map(|r| EcnTag::unit(depth, r)).collect();
    let mut q = QuotientTable {
        depth,
        factor,
        representatives,
        table: Vec::new(),
    };
    q.table = q
        .representatives
        .iter()
        .map(|a| {
            q.representatives
                .iter()
                .map(|b| q.coset_of(&add(a, b)).expect("sum stays at one depth"))
                .collect()
        })
        .collect();
    q
}

/// True when scaling by `p` maps the ascending `chain` to a strictly
/// ascending (p > 0) or strictly descending (p < 0) sequence.
pub fn is_order_similar(chain: &[EcnTag], p: &BigInt) -> bool {
    let image: Vec<EcnTag> = chain.iter().map(|t| mul_count(t, p)).collect();
    if p.is_positive() {
        image.windows(2).all(|w| w[0] < w[1])
    } else if p.is_negative() {
        image.windows(2).all(|w| w[0] > w[1])
    } else {
        false
    }
}
