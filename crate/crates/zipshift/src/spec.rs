//! Zip shift specifications: two finite alphabets, a surjective transition
//! map between them, and an exact rational weight distribution.
//!
//! A spec is the single source of truth for everything downstream: cylinder
//! measures, partition entropies, fiber distributions, and the baker-map
//! geometry are all derived from it. Validation happens once, in
//! [`validate_spec`]; a [`ZipShiftSpec`] is immutable afterwards and safe to
//! share across threads.
//!
//! All weights are `BigRational`. Floating point enters only inside
//! logarithms, never in measure bookkeeping, so set identities downstream can
//! be checked with exact equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

/// Which of the two alphabets a symbol belongs to.
///
/// Sequence indices `< 0` carry [`Side::Negative`] symbols, indices `>= 0`
/// carry [`Side::Positive`] ones.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Negative,
    Positive,
}

impl Side {
    /// The alphabet side required at sequence index `i`.
    pub fn of_index(i: i64) -> Side {
        if i < 0 {
            Side::Negative
        } else {
            Side::Positive
        }
    }
}

/// An interned symbol: its alphabet side plus its position in that alphabet.
///
/// Symbols are cheap copyable handles; the owning [`ZipShiftSpec`] maps them
/// back to names. Carrying the side in the type makes alphabet mix-ups a
/// comparison failure instead of a silent index confusion.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    side: Side,
    index: usize,
}

impl Symbol {
    /// Symbol `index` of the positive alphabet.
    pub fn positive(index: usize) -> Symbol {
        Symbol {
            side: Side::Positive,
            index,
        }
    }

    /// Symbol `index` of the negative alphabet.
    pub fn negative(index: usize) -> Symbol {
        Symbol {
            side: Side::Negative,
            index,
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.side {
            Side::Positive => '+',
            Side::Negative => '-',
        };
        write!(f, "{}{}", sign, self.index)
    }
}

/// Shorthand for an exact rational from small integers.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// An unvalidated spec, as it arrives from a config file or is assembled in
/// test code. [`validate_spec`] turns it into a [`ZipShiftSpec`].
#[derive(Clone, Debug, Default)]
pub struct RawSpec {
    pub label: Option<String>,
    /// Positive alphabet, in declaration order.
    pub s_plus: Vec<String>,
    /// Negative alphabet, in declaration order.
    pub s_minus: Vec<String>,
    /// Transition map by name: positive symbol -> negative symbol.
    pub phi: BTreeMap<String, String>,
    /// Weight of each positive symbol, aligned with `s_plus`.
    pub p_plus: Vec<BigRational>,
}

/// Everything that can be wrong with a [`RawSpec`].
#[derive(Clone, Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("the {0:?} alphabet is empty")]
    EmptyAlphabet(Side),

    #[error("duplicate symbol name {name:?}")]
    DuplicateSymbol { name: String },

    #[error("transition map has no entry for positive symbol {name:?}")]
    MissingTransition { name: String },

    #[error("transition map sends {from:?} to unknown negative symbol {to:?}")]
    UnknownTransitionTarget { from: String, to: String },

    #[error("transition map is not surjective: negative symbol {name:?} has no preimage")]
    NonSurjectivePhi { name: String },

    #[error("expected {expected} weights, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },

    #[error("weight of symbol {name:?} is negative ({weight})")]
    NegativeWeight { name: String, weight: BigRational },

    #[error("weight of symbol {name:?} is zero; strictly positive weights are required")]
    ZeroWeight { name: String },

    #[error("weights sum to {sum}, expected exactly 1")]
    WeightsNotNormalized { sum: BigRational },
}

/// Distributions derived from a spec: the pushforward weights `p_minus` on
/// the negative alphabet and, for every negative symbol, the conditional
/// weights `q` on its preimage fiber.
///
/// The defining identities hold exactly, in rational arithmetic:
///
/// * `p_minus(t) = sum of p_plus(s) over the fiber of t`
/// * `q(t) sums to 1 on every fiber`
/// * `p_plus(s) = p_minus(phi(s)) * q(phi(s))(s)`
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedMeasures {
    p_minus: Vec<BigRational>,
    fibers: Vec<Vec<usize>>,
    q: Vec<Vec<BigRational>>,
}

impl DerivedMeasures {
    fn from_parts(minus_len: usize, phi: &[usize], p_plus: &[BigRational]) -> DerivedMeasures {
        let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); minus_len];
        for (s, &t) in phi.iter().enumerate() {
            fibers[t].push(s);
        }
        let p_minus: Vec<BigRational> = fibers
            .iter()
            .map(|fiber| fiber.iter().map(|&s| p_plus[s].clone()).sum())
            .collect();
        let q: Vec<Vec<BigRational>> = fibers
            .iter()
            .zip(&p_minus)
            .map(|(fiber, total)| fiber.iter().map(|&s| &p_plus[s] / total).collect())
            .collect();
        DerivedMeasures { p_minus, fibers, q }
    }

    /// Pushforward weight of negative symbol `t` (by alphabet index).
    pub fn p_minus(&self, t: usize) -> &BigRational {
        &self.p_minus[t]
    }

    /// Positive alphabet indices in the fiber over negative symbol `t`,
    /// in alphabet order.
    pub fn fiber(&self, t: usize) -> &[usize] {
        &self.fibers[t]
    }

    /// Conditional weights on the fiber over `t`, aligned with [`Self::fiber`].
    pub fn q(&self, t: usize) -> &[BigRational] {
        &self.q[t]
    }
}

/// A validated zip shift system.
///
/// Holds the two alphabets, the surjective transition map, the positive
/// weights, and the measures derived from them. All invariants are
/// established by [`validate_spec`]; the value never mutates afterwards.
#[derive(Clone, Debug, PartialEq)]
pub struct ZipShiftSpec {
    label: Option<String>,
    s_plus: Vec<String>,
    s_minus: Vec<String>,
    phi: Vec<usize>,
    p_plus: Vec<BigRational>,
    derived: DerivedMeasures,
}

impl ZipShiftSpec {
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Number of positive symbols.
    pub fn plus_len(&self) -> usize {
        self.s_plus.len()
    }

    /// Number of negative symbols.
    pub fn minus_len(&self) -> usize {
        self.s_minus.len()
    }

    /// Alphabet size on the given side.
    pub fn alphabet_len(&self, side: Side) -> usize {
        match side {
            Side::Positive => self.plus_len(),
            Side::Negative => self.minus_len(),
        }
    }

    /// All symbols of one side, in alphabet order.
    pub fn symbols(&self, side: Side) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.alphabet_len(side)).map(move |i| Symbol { side, index: i })
    }

    /// The declared name of a symbol.
    pub fn symbol_name(&self, sym: Symbol) -> &str {
        match sym.side {
            Side::Positive => &self.s_plus[sym.index],
            Side::Negative => &self.s_minus[sym.index],
        }
    }

    /// Look a symbol up by name on one side.
    pub fn symbol_by_name(&self, side: Side, name: &str) -> Option<Symbol> {
        let names = match side {
            Side::Positive => &self.s_plus,
            Side::Negative => &self.s_minus,
        };
        names
            .iter()
            .position(|n| n == name)
            .map(|index| Symbol { side, index })
    }

    /// Apply the transition map to a positive symbol.
    pub fn phi(&self, sym: Symbol) -> Symbol {
        assert_eq!(sym.side, Side::Positive, "phi acts on positive symbols");
        Symbol::negative(self.phi[sym.index])
    }

    /// The fiber of the transition map over a negative symbol, in alphabet
    /// order.
    pub fn fiber(&self, t: Symbol) -> Vec<Symbol> {
        assert_eq!(t.side, Side::Negative, "fibers sit over negative symbols");
        self.derived.fiber(t.index)
            .iter()
            .map(|&s| Symbol::positive(s))
            .collect()
    }

    /// Exact weight of a symbol: `p_plus` on the positive side, the derived
    /// `p_minus` on the negative side.
    pub fn weight(&self, sym: Symbol) -> &BigRational {
        match sym.side {
            Side::Positive => &self.p_plus[sym.index],
            Side::Negative => self.derived.p_minus(sym.index),
        }
    }

    /// Conditional weight of positive symbol `s` within its fiber.
    pub fn fiber_weight(&self, s: Symbol) -> &BigRational {
        assert_eq!(s.side, Side::Positive);
        let t = self.phi[s.index];
        let pos = self
            .derived
            .fiber(t)
            .iter()
            .position(|&x| x == s.index)
            .expect("symbol sits in the fiber of its own image");
        &self.derived.q(t)[pos]
    }

    /// The measures derived at validation time.
    pub fn derived(&self) -> &DerivedMeasures {
        &self.derived
    }

    /// Whether the transition map is a bijection (the system degenerates to
    /// an ordinary bilateral Bernoulli shift).
    pub fn is_bijective(&self) -> bool {
        self.plus_len() == self.minus_len()
    }
}

/// Check every spec invariant and intern the result.
///
/// Verifies, in order: nonempty alphabets, unique names, a total transition
/// map into known targets, a full set of strictly positive weights summing to
/// exactly 1, and surjectivity of the transition map. Zero weights are
/// rejected outright: a symbol of weight zero would make the conditional
/// fiber weights ill-defined whenever its whole fiber has weight zero.
pub fn validate_spec(raw: &RawSpec) -> Result<ZipShiftSpec, SpecError> {
    if raw.s_plus.is_empty() {
        return Err(SpecError::EmptyAlphabet(Side::Positive));
    }
    if raw.s_minus.is_empty() {
        return Err(SpecError::EmptyAlphabet(Side::Negative));
    }
    for names in [&raw.s_plus, &raw.s_minus] {
        let mut seen = BTreeSet::new();
        for name in names {
            if !seen.insert(name) {
                return Err(SpecError::DuplicateSymbol { name: name.clone() });
            }
        }
    }

    let minus_index: BTreeMap<&str, usize> = raw
        .s_minus
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut phi = Vec::with_capacity(raw.s_plus.len());
    for name in &raw.s_plus {
        let target = raw
            .phi
            .get(name)
            .ok_or_else(|| SpecError::MissingTransition { name: name.clone() })?;
        let t = minus_index
            .get(target.as_str())
            .ok_or_else(|| SpecError::UnknownTransitionTarget {
                from: name.clone(),
                to: target.clone(),
            })?;
        phi.push(*t);
    }

    if raw.p_plus.len() != raw.s_plus.len() {
        return Err(SpecError::WeightCountMismatch {
            expected: raw.s_plus.len(),
            got: raw.p_plus.len(),
        });
    }
    for (name, weight) in raw.s_plus.iter().zip(&raw.p_plus) {
        if weight.is_negative() {
            return Err(SpecError::NegativeWeight {
                name: name.clone(),
                weight: weight.clone(),
            });
        }
        if weight.is_zero() {
            return Err(SpecError::ZeroWeight { name: name.clone() });
        }
    }
    let sum: BigRational = raw.p_plus.iter().sum();
    if !sum.is_one() {
        return Err(SpecError::WeightsNotNormalized { sum });
    }

    let mut covered = vec![false; raw.s_minus.len()];
    for &t in &phi {
        covered[t] = true;
    }
    if let Some(t) = covered.iter().position(|&c| !c) {
        return Err(SpecError::NonSurjectivePhi {
            name: raw.s_minus[t].clone(),
        });
    }

    let derived = DerivedMeasures::from_parts(raw.s_minus.len(), &phi, &raw.p_plus);
    Ok(ZipShiftSpec {
        label: raw.label.clone(),
        s_plus: raw.s_plus.clone(),
        s_minus: raw.s_minus.clone(),
        phi,
        p_plus: raw.p_plus.clone(),
        derived,
    })
}

/// Recompute the derived measures of a validated spec from scratch.
///
/// Identical to [`ZipShiftSpec::derived`]; kept as a standalone entry point
/// so tests can cross-check the cached values against a fresh derivation.
pub fn derive_measures(spec: &ZipShiftSpec) -> DerivedMeasures {
    DerivedMeasures::from_parts(spec.minus_len(), &spec.phi, &spec.p_plus)
}

/// Draw a random valid spec: up to `max_plus` positive symbols, a random
/// surjective transition map, and strictly positive rational weights with a
/// common denominator.
pub fn random_spec(rng: &mut impl Rng, max_plus: usize) -> ZipShiftSpec {
    assert!(max_plus >= 1);
    let l = rng.gen_range(1..=max_plus);
    let m = rng.gen_range(1..=l);

    let s_plus: Vec<String> = (0..l).map(|i| i.to_string()).collect();
    let s_minus: Vec<String> = (0..m)
        .map(|i| char::from(b'a' + i as u8).to_string())
        .collect();

    // A random surjection: a shuffled set of representatives covers every
    // negative symbol, the rest map freely.
    let mut reps: Vec<usize> = (0..l).collect();
    for i in (1..l).rev() {
        let j = rng.gen_range(0..=i);
        reps.swap(i, j);
    }
    let mut targets = vec![0usize; l];
    for (t, &s) in reps.iter().take(m).enumerate() {
        targets[s] = t;
    }
    for &s in reps.iter().skip(m) {
        targets[s] = rng.gen_range(0..m);
    }
    let phi: BTreeMap<String, String> = s_plus
        .iter()
        .enumerate()
        .map(|(s, name)| (name.clone(), s_minus[targets[s]].clone()))
        .collect();

    let parts: Vec<i64> = (0..l).map(|_| rng.gen_range(1..=12)).collect();
    let total: i64 = parts.iter().sum();
    let p_plus: Vec<BigRational> = parts.iter().map(|&a| ratio(a, total)).collect();

    let raw = RawSpec {
        label: None,
        s_plus,
        s_minus,
        phi,
        p_plus,
    };
    validate_spec(&raw).expect("randomly generated specs satisfy every invariant")
}

/// Ready-made systems used throughout the examples and tests.
pub mod samples {
    use super::*;

    fn build(
        label: &str,
        s_plus: &[&str],
        s_minus: &[&str],
        phi: &[(&str, &str)],
        p_plus: &[(i64, i64)],
    ) -> ZipShiftSpec {
        let raw = RawSpec {
            label: Some(label.to_string()),
            s_plus: s_plus.iter().map(|s| s.to_string()).collect(),
            s_minus: s_minus.iter().map(|s| s.to_string()).collect(),
            phi: phi
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            p_plus: p_plus.iter().map(|&(n, d)| ratio(n, d)).collect(),
        };
        validate_spec(&raw).expect("sample specs are valid")
    }

    /// Four uniform positive symbols folding two-to-one onto two negative
    /// symbols. This is the symbolic encoding of the 2-to-1 baker map with
    /// four vertical strips and two horizontal bands.
    pub fn uniform_4_to_2() -> ZipShiftSpec {
        build(
            "uniform-4-to-2",
            &["0", "1", "2", "3"],
            &["a", "b"],
            &[("0", "a"), ("1", "a"), ("2", "b"), ("3", "b")],
            &[(1, 4), (1, 4), (1, 4), (1, 4)],
        )
    }

    /// Three weighted positive symbols with fibers of size two and one.
    pub fn weighted_3_to_2() -> ZipShiftSpec {
        build(
            "weighted-3-to-2",
            &["0", "1", "2"],
            &["a", "b"],
            &[("0", "a"), ("1", "a"), ("2", "b")],
            &[(1, 2), (1, 4), (1, 4)],
        )
    }

    /// A bijective transition map: the ordinary bilateral Bernoulli shift on
    /// three symbols, weights (1/2, 1/3, 1/6).
    pub fn bernoulli_3() -> ZipShiftSpec {
        build(
            "bernoulli-3",
            &["0", "1", "2"],
            &["a", "b", "c"],
            &[("0", "a"), ("1", "b"), ("2", "c")],
            &[(1, 2), (1, 3), (1, 6)],
        )
    }

    /// One symbol on each side: the dynamics is deterministic and every
    /// entropy vanishes.
    pub fn single_symbol() -> ZipShiftSpec {
        build("single-symbol", &["0"], &["a"], &[("0", "a")], &[(1, 1)])
    }
}
