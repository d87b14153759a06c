//! Cylinder sets, finite itinerary words, and the action of the zip shift on
//! both.
//!
//! The shift moves every constraint one index to the left. The only subtle
//! rule is the sign boundary: pulling a constraint back across index 0 turns
//! a negative symbol into the set of its transition-map preimages, and
//! pushing one forward across it applies the transition map. That boundary
//! rule lives here, in [`shift_pullback`] and [`shift_pushforward`] (and the
//! itinerary analogue [`Word::advance`]); nothing outside this module reasons
//! about it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num::{BigRational, One, Zero};
use thiserror::Error;

use crate::check::CheckReport;
use crate::spec::{Side, Symbol, ZipShiftSpec};

/// Errors from constructing or measuring cylinders.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum SymbolicError {
    #[error("constraint at index {index} allows no symbols")]
    EmptyConstraint { index: i64 },

    #[error("constraint at index {index} requires {expected:?} symbols, found a {found:?} one")]
    AlphabetMismatch {
        index: i64,
        expected: Side,
        found: Side,
    },

    #[error("symbol {symbol:?} at index {index} is outside the alphabet")]
    UnknownSymbol { index: i64, symbol: Symbol },

    #[error("two constraints target index {index}")]
    DuplicateIndex { index: i64 },
}

/// A half-open index range `lo..hi` of a bilateral sequence.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    lo: i64,
    hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Window {
        assert!(lo <= hi, "window bounds out of order: [{lo}, {hi})");
        Window { lo, hi }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, i: i64) -> bool {
        self.lo <= i && i < self.hi
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.lo..self.hi
    }

    /// Smallest window containing both operands.
    pub fn union(&self, other: Window) -> Window {
        Window::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// The window moved right by `delta` (left when negative).
    pub fn shifted(&self, delta: i64) -> Window {
        Window::new(self.lo + delta, self.hi + delta)
    }
}

/// A concrete assignment of one symbol to every index of a window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    window: Window,
    symbols: Vec<Symbol>,
}

impl Word {
    /// Build a word, checking that every symbol sits on the alphabet side its
    /// index demands.
    pub fn new(window: Window, symbols: Vec<Symbol>) -> Result<Word, SymbolicError> {
        assert_eq!(symbols.len(), window.len(), "one symbol per window index");
        for (i, sym) in window.indices().zip(&symbols) {
            let expected = Side::of_index(i);
            if sym.side() != expected {
                return Err(SymbolicError::AlphabetMismatch {
                    index: i,
                    expected,
                    found: sym.side(),
                });
            }
        }
        Ok(Word { window, symbols })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Symbol at sequence index `i`.
    pub fn at(&self, i: i64) -> Symbol {
        assert!(self.window.contains(i), "index {i} outside {:?}", self.window);
        self.symbols[(i - self.window.lo) as usize]
    }

    /// The itinerary of the shift image: every symbol moves one index to the
    /// left, the symbol at index 0 crosses the boundary through the
    /// transition map, and the rightmost symbol leaves the window.
    ///
    /// Requires index 0 inside the window, so the boundary crossing is
    /// observable.
    pub fn advance(&self, spec: &ZipShiftSpec) -> Word {
        assert!(
            self.window.contains(0),
            "advancing a word needs index 0 in its window"
        );
        let window = self.window.shifted(-1);
        let symbols = window
            .indices()
            .map(|i| {
                if i == -1 {
                    spec.phi(self.at(0))
                } else {
                    self.at(i + 1)
                }
            })
            .collect();
        Word { window, symbols }
    }

    /// Render with symbol names, marking the sign boundary with a semicolon.
    pub fn display_with(&self, spec: &ZipShiftSpec) -> String {
        let mut out = String::new();
        for (pos, i) in self.window.indices().enumerate() {
            if pos > 0 {
                out.push(' ');
            }
            if i == 0 && pos > 0 {
                out.push_str("; ");
            }
            out.push_str(spec.symbol_name(self.symbols[pos]));
        }
        out
    }
}

/// A finite set of per-index symbol constraints; the empty constraint map is
/// the whole sequence space.
///
/// Each constrained index carries a nonempty set of allowed symbols from the
/// alphabet matching the index sign, so a `GeneralizedCylinder` is a product
/// set: basic cylinders constrain single symbols, extended ones allow several
/// at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedCylinder {
    constraints: BTreeMap<i64, BTreeSet<Symbol>>,
}

impl GeneralizedCylinder {
    /// The whole space: no constraints.
    pub fn full() -> GeneralizedCylinder {
        GeneralizedCylinder {
            constraints: BTreeMap::new(),
        }
    }

    /// Single symbol `s` required at index `i`.
    pub fn basic(i: i64, s: Symbol) -> Result<GeneralizedCylinder, SymbolicError> {
        Self::extended(i, [s])
    }

    /// Any of `allowed` accepted at index `i`.
    pub fn extended(
        i: i64,
        allowed: impl IntoIterator<Item = Symbol>,
    ) -> Result<GeneralizedCylinder, SymbolicError> {
        let mut cyl = GeneralizedCylinder::full();
        cyl.constrain(i, allowed)?;
        Ok(cyl)
    }

    /// Build from several per-index constraints; each index may appear once.
    pub fn from_constraints(
        constraints: impl IntoIterator<Item = (i64, Vec<Symbol>)>,
    ) -> Result<GeneralizedCylinder, SymbolicError> {
        let mut cyl = GeneralizedCylinder::full();
        for (i, allowed) in constraints {
            if cyl.constraints.contains_key(&i) {
                return Err(SymbolicError::DuplicateIndex { index: i });
            }
            cyl.constrain(i, allowed)?;
        }
        Ok(cyl)
    }

    /// Every index of a word pinned to its symbol.
    pub fn from_word(word: &Word) -> GeneralizedCylinder {
        let constraints = word
            .window()
            .indices()
            .map(|i| (i, BTreeSet::from([word.at(i)])))
            .collect();
        GeneralizedCylinder { constraints }
    }

    fn constrain(
        &mut self,
        i: i64,
        allowed: impl IntoIterator<Item = Symbol>,
    ) -> Result<(), SymbolicError> {
        let expected = Side::of_index(i);
        let mut set = BTreeSet::new();
        for sym in allowed {
            if sym.side() != expected {
                return Err(SymbolicError::AlphabetMismatch {
                    index: i,
                    expected,
                    found: sym.side(),
                });
            }
            set.insert(sym);
        }
        if set.is_empty() {
            return Err(SymbolicError::EmptyConstraint { index: i });
        }
        self.constraints.insert(i, set);
        Ok(())
    }

    pub fn is_full(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Constrained indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        self.constraints.keys().copied()
    }

    /// The allowed set at index `i`, if constrained.
    pub fn allowed(&self, i: i64) -> Option<&BTreeSet<Symbol>> {
        self.constraints.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BTreeSet<Symbol>)> {
        self.constraints.iter().map(|(&i, set)| (i, set))
    }

    /// Render with symbol names, e.g. `{x[-1] in {a}, x[0] in {0,1}}`.
    pub fn display_with(&self, spec: &ZipShiftSpec) -> String {
        if self.is_full() {
            return "{whole space}".to_string();
        }
        let mut out = String::from("{");
        for (pos, (i, set)) in self.iter().enumerate() {
            if pos > 0 {
                out.push_str(", ");
            }
            let names: Vec<&str> = set.iter().map(|&s| spec.symbol_name(s)).collect();
            let _ = write!(out, "x[{i}] in {{{}}}", names.join(","));
        }
        out.push('}');
        out
    }
}

/// Exact measure of a cylinder: the product over constrained indices of the
/// total weight of the allowed set, using `p_minus` at negative indices and
/// `p_plus` at nonnegative ones. The empty product (whole space) is 1.
pub fn cylinder_measure(
    spec: &ZipShiftSpec,
    cyl: &GeneralizedCylinder,
) -> Result<BigRational, SymbolicError> {
    let mut measure = BigRational::one();
    for (i, allowed) in cyl.iter() {
        let mut factor = BigRational::zero();
        for &sym in allowed {
            if sym.index() >= spec.alphabet_len(sym.side()) {
                return Err(SymbolicError::UnknownSymbol { index: i, symbol: sym });
            }
            factor += spec.weight(sym);
        }
        measure *= factor;
    }
    Ok(measure)
}

/// Preimage of a cylinder under `k` applications of the shift.
///
/// Each constraint moves from index `i` to `i + k`. Constraints that start at
/// a negative index and land at a nonnegative one (`i` in `[-k, -1]`) cross
/// the sign boundary: their allowed set becomes the union of transition-map
/// preimages. All other allowed sets are untouched.
pub fn shift_pullback(
    spec: &ZipShiftSpec,
    cyl: &GeneralizedCylinder,
    k: u32,
) -> GeneralizedCylinder {
    let k = i64::from(k);
    let constraints = cyl
        .iter()
        .map(|(i, allowed)| {
            let set = if -k <= i && i <= -1 {
                allowed
                    .iter()
                    .flat_map(|&s| spec.fiber(s))
                    .collect::<BTreeSet<Symbol>>()
            } else {
                allowed.clone()
            };
            (i + k, set)
        })
        .collect();
    GeneralizedCylinder { constraints }
}

/// Image of a cylinder under `k` applications of the shift.
///
/// Each constraint moves from index `i` to `i - k`; constraints at
/// nonnegative indices that land below zero (`i` in `[0, k-1]`) cross the
/// boundary and their allowed sets map through the transition function.
/// Exact on single cylinders, hence on disjoint unions of them.
pub fn shift_pushforward(
    spec: &ZipShiftSpec,
    cyl: &GeneralizedCylinder,
    k: u32,
) -> GeneralizedCylinder {
    let k = i64::from(k);
    let constraints = cyl
        .iter()
        .map(|(i, allowed)| {
            let set = if 0 <= i && i <= k - 1 {
                allowed
                    .iter()
                    .map(|&s| spec.phi(s))
                    .collect::<BTreeSet<Symbol>>()
            } else {
                allowed.clone()
            };
            (i - k, set)
        })
        .collect();
    GeneralizedCylinder { constraints }
}

/// Brute-force check that one shift step preserves cylinder measure.
///
/// Runs over every basic cylinder with `|i| <= depth` and every two-index
/// cylinder inside that range, comparing the exact measure of the pullback
/// with the exact measure of the original. Zero tolerance: any mismatch is a
/// failure.
pub fn measure_preservation_check(spec: &ZipShiftSpec, depth: u32) -> CheckReport {
    assert!(depth >= 1, "depth must be at least 1");
    const NAME: &str = "measure-preservation";
    let depth = i64::from(depth);
    let mut cases = 0u64;

    let mut cylinders: Vec<GeneralizedCylinder> = Vec::new();
    for i in -depth..=depth {
        for s in spec.symbols(Side::of_index(i)) {
            cylinders.push(GeneralizedCylinder::basic(i, s).expect("sides match by construction"));
        }
    }
    for i in -depth..=depth {
        for j in (i + 1)..=depth {
            for s in spec.symbols(Side::of_index(i)) {
                for s2 in spec.symbols(Side::of_index(j)) {
                    cylinders.push(
                        GeneralizedCylinder::from_constraints([(i, vec![s]), (j, vec![s2])])
                            .expect("indices are distinct"),
                    );
                }
            }
        }
    }

    for cyl in &cylinders {
        cases += 1;
        let direct = cylinder_measure(spec, cyl).expect("cylinders built from the spec alphabets");
        let pulled = shift_pullback(spec, cyl, 1);
        let via_pullback =
            cylinder_measure(spec, &pulled).expect("pullback preserves alphabet validity");
        if direct != via_pullback {
            return CheckReport::fail(
                NAME,
                cases,
                format!(
                    "measure of {} is {}, but its one-step preimage {} has measure {}",
                    cyl.display_with(spec),
                    direct,
                    pulled.display_with(spec),
                    via_pullback
                ),
            );
        }
    }
    CheckReport::pass(NAME, cases)
}
