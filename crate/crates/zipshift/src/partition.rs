//! Finite-window partitions of the sequence space and their entropies.
//!
//! A partition is stored over an explicit window of indices; every class is a
//! set of words over that window, encoded as mixed-radix ranks. Class
//! measures are exact rationals (floating point only enters inside the
//! logarithms of entropy sums), so partition identities can be decided by
//! literal set equality after canonicalization: classes are sorted word
//! lists, and the classes themselves are ordered by their smallest word.
//!
//! The centerpiece is [`verify_correfinement_lemma`]: it computes the k-step
//! dynamical correfinement of the centered cylinder partition by explicit
//! enumeration and checks that it collapses to a plain cylinder partition
//! over the widened window — the combinatorial identity behind the
//! closed-form entropy of the system.

use std::collections::HashMap;

use num::{BigRational, One, ToPrimitive, Zero};
use thiserror::Error;

use crate::check::CheckReport;
use crate::spec::{Side, Symbol, ZipShiftSpec};
use crate::symbolic::{shift_pullback, GeneralizedCylinder, Window, Word};

/// Default cap on brute-force enumeration, in words.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 2_000_000;

/// Errors from the partition operations that take user-facing parameters.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("n must be at least 1 (got {n})")]
    NTooSmall { n: u32 },

    #[error("the correfinement identity requires k >= 2n (got n={n}, k={k})")]
    KTooSmall { n: u32, k: u32 },

    #[error("enumeration needs {required} words, over the budget of {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
}

/// Number of words over a window, saturating at `u64::MAX` on overflow.
fn words_in(spec: &ZipShiftSpec, window: Window) -> u64 {
    window.indices().fold(1u64, |acc, i| {
        acc.saturating_mul(spec.alphabet_len(Side::of_index(i)) as u64)
    })
}

/// Mixed-radix codec for words over a window: the first index is the most
/// significant digit, and the digit base at each index is the size of the
/// alphabet that index draws from.
struct WordCodec<'a> {
    spec: &'a ZipShiftSpec,
    window: Window,
    total: u64,
}

impl<'a> WordCodec<'a> {
    fn new(spec: &'a ZipShiftSpec, window: Window) -> WordCodec<'a> {
        let total = words_in(spec, window);
        assert!(total < u64::MAX, "window too large to enumerate");
        WordCodec { spec, window, total }
    }

    fn decode(&self, mut rank: u64) -> Word {
        let mut symbols = vec![Symbol::positive(0); self.window.len()];
        for (pos, i) in self.window.indices().enumerate().collect::<Vec<_>>().into_iter().rev() {
            let side = Side::of_index(i);
            let base = self.spec.alphabet_len(side) as u64;
            let digit = (rank % base) as usize;
            rank /= base;
            symbols[pos] = match side {
                Side::Positive => Symbol::positive(digit),
                Side::Negative => Symbol::negative(digit),
            };
        }
        Word::new(self.window, symbols).expect("decoded digits are side-correct")
    }

    /// Exact measure of every word over the window, indexed by rank.
    fn measure_vector(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::one()];
        for i in self.window.indices() {
            let side = Side::of_index(i);
            let weights: Vec<BigRational> = self
                .spec
                .symbols(side)
                .map(|s| self.spec.weight(s).clone())
                .collect();
            let mut next = Vec::with_capacity(v.len() * weights.len());
            for m in &v {
                for w in &weights {
                    next.push(m * w);
                }
            }
            v = next;
        }
        v
    }

    /// Ranks of all words compatible with a cylinder's constraints over this
    /// window; unconstrained indices range over their whole alphabet.
    fn expand_cylinder(&self, cyl: &GeneralizedCylinder) -> Vec<u64> {
        let mut ranks = vec![0u64];
        for i in self.window.indices() {
            let base = self.spec.alphabet_len(Side::of_index(i)) as u64;
            let mut next;
            match cyl.allowed(i) {
                Some(set) => {
                    next = Vec::with_capacity(ranks.len() * set.len());
                    for r in &ranks {
                        for &s in set {
                            next.push(r * base + s.index() as u64);
                        }
                    }
                }
                None => {
                    next = Vec::with_capacity(ranks.len() * base as usize);
                    for r in &ranks {
                        for d in 0..base {
                            next.push(r * base + d);
                        }
                    }
                }
            }
            ranks = next;
        }
        ranks
    }
}

/// Restriction of big-window ranks onto a contained sub-window: a division
/// drops the indices to the right of the sub-window, a modulus drops those to
/// its left.
struct Restrictor {
    divisor: u64,
    modulus: u64,
}

impl Restrictor {
    fn new(spec: &ZipShiftSpec, outer: Window, inner: Window) -> Restrictor {
        assert!(outer.lo() <= inner.lo() && inner.hi() <= outer.hi());
        Restrictor {
            divisor: words_in(spec, Window::new(inner.hi(), outer.hi())),
            modulus: words_in(spec, inner),
        }
    }

    fn restrict(&self, rank: u64) -> u64 {
        (rank / self.divisor) % self.modulus
    }
}

/// A partition of the sequence space into word sets over a fixed window.
///
/// Canonical form: every class is a strictly increasing rank list and the
/// classes are ordered by their smallest rank, so `==` decides partition
/// equality over equal windows. For differing windows, align with
/// [`WindowPartition::expand_to`] first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowPartition {
    window: Window,
    classes: Vec<Vec<u64>>,
}

impl WindowPartition {
    fn from_classes(window: Window, mut classes: Vec<Vec<u64>>) -> WindowPartition {
        for class in &mut classes {
            class.sort_unstable();
            class.dedup();
        }
        classes.retain(|c| !c.is_empty());
        classes.sort_unstable_by_key(|c| c[0]);
        WindowPartition { window, classes }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Number of words in class `idx`.
    pub fn class_size(&self, idx: usize) -> usize {
        self.classes[idx].len()
    }

    /// The words of class `idx`, decoded.
    pub fn class_words(&self, spec: &ZipShiftSpec, idx: usize) -> Vec<Word> {
        let codec = WordCodec::new(spec, self.window);
        self.classes[idx].iter().map(|&r| codec.decode(r)).collect()
    }

    /// Exact measure of class `idx`.
    pub fn class_measure(&self, spec: &ZipShiftSpec, idx: usize) -> BigRational {
        let measures = WordCodec::new(spec, self.window).measure_vector();
        self.classes[idx]
            .iter()
            .map(|&r| measures[r as usize].clone())
            .sum()
    }

    /// Exact measures of all classes, in class order.
    pub fn class_measures(&self, spec: &ZipShiftSpec) -> Vec<BigRational> {
        let measures = WordCodec::new(spec, self.window).measure_vector();
        self.classes
            .iter()
            .map(|class| class.iter().map(|&r| measures[r as usize].clone()).sum())
            .collect()
    }

    /// Re-express the partition over a containing window by materializing the
    /// free indices of every class.
    pub fn expand_to(&self, spec: &ZipShiftSpec, window: Window) -> WindowPartition {
        assert!(
            window.lo() <= self.window.lo() && self.window.hi() <= window.hi(),
            "target window must contain the partition window"
        );
        if window == self.window {
            return self.clone();
        }
        let small = WordCodec::new(spec, self.window);
        let big = WordCodec::new(spec, window);
        let classes = self
            .classes
            .iter()
            .map(|class| {
                let mut out = Vec::new();
                for &r in class {
                    let cyl = GeneralizedCylinder::from_word(&small.decode(r));
                    out.extend(big.expand_cylinder(&cyl));
                }
                out
            })
            .collect();
        WindowPartition::from_classes(window, classes)
    }

    /// Check the partition axioms by enumeration: no empty class, classes
    /// pairwise disjoint, and the class measures summing to exactly 1
    /// (equivalently, the classes cover every word of the window).
    pub fn validate(&self, spec: &ZipShiftSpec) -> Result<(), String> {
        let total = words_in(spec, self.window);
        let mut seen = vec![false; total as usize];
        let mut count = 0u64;
        for (idx, class) in self.classes.iter().enumerate() {
            if class.is_empty() {
                return Err(format!("class {idx} is empty"));
            }
            for &r in class {
                if r >= total {
                    return Err(format!("class {idx} holds out-of-range word {r}"));
                }
                if seen[r as usize] {
                    return Err(format!("word {r} appears in two classes"));
                }
                seen[r as usize] = true;
                count += 1;
            }
        }
        if count != total {
            return Err(format!("classes cover {count} of {total} words"));
        }
        let sum: BigRational = self.class_measures(spec).into_iter().sum();
        if !sum.is_one() {
            return Err(format!("class measures sum to {sum}, expected 1"));
        }
        Ok(())
    }
}

/// The partition of the space by the symbol at one index: one class per
/// symbol of the alphabet that index draws from.
pub fn cylinder_partition(spec: &ZipShiftSpec, i: i64) -> WindowPartition {
    let window = Window::new(i, i + 1);
    let classes = (0..spec.alphabet_len(Side::of_index(i)) as u64)
        .map(|r| vec![r])
        .collect();
    WindowPartition::from_classes(window, classes)
}

/// The partition by full words over a window: every word is its own class.
pub fn cylinder_range_partition(spec: &ZipShiftSpec, window: Window) -> WindowPartition {
    let total = words_in(spec, window);
    assert!(total < u64::MAX, "window too large to enumerate");
    let classes = (0..total).map(|r| vec![r]).collect();
    WindowPartition::from_classes(window, classes)
}

fn class_id_map(total: u64, classes: &[Vec<u64>]) -> Vec<u32> {
    let mut map = vec![u32::MAX; total as usize];
    for (cid, class) in classes.iter().enumerate() {
        for &r in class {
            map[r as usize] = cid as u32;
        }
    }
    map
}

fn correfine2(
    spec: &ZipShiftSpec,
    a: &WindowPartition,
    b: &WindowPartition,
) -> WindowPartition {
    let window = a.window.union(b.window);
    let total = words_in(spec, window);
    assert!(total < u64::MAX, "window too large to enumerate");
    let ra = Restrictor::new(spec, window, a.window);
    let rb = Restrictor::new(spec, window, b.window);
    let map_a = class_id_map(words_in(spec, a.window), &a.classes);
    let map_b = class_id_map(words_in(spec, b.window), &b.classes);

    let mut groups: HashMap<(u32, u32), u32> = HashMap::new();
    let mut classes: Vec<Vec<u64>> = Vec::new();
    for r in 0..total {
        let key = (
            map_a[ra.restrict(r) as usize],
            map_b[rb.restrict(r) as usize],
        );
        let idx = *groups.entry(key).or_insert_with(|| {
            classes.push(Vec::new());
            (classes.len() - 1) as u32
        });
        classes[idx as usize].push(r);
    }
    WindowPartition::from_classes(window, classes)
}

/// Common refinement of a family of partitions: classes are the nonempty
/// intersections of one class from each operand, over the union window.
pub fn correfine(spec: &ZipShiftSpec, parts: &[WindowPartition]) -> WindowPartition {
    assert!(!parts.is_empty(), "correfine needs at least one partition");
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = correfine2(spec, &acc, p);
    }
    acc
}

/// Preimage of a partition under `j` applications of the shift.
///
/// Every class maps to the union of the preimages of its words; each word
/// pulls back through [`shift_pullback`], so constraints crossing the sign
/// boundary expand to transition-map fibers. The result lives on the window
/// shifted right by `j`.
pub fn pullback_partition(spec: &ZipShiftSpec, p: &WindowPartition, j: u32) -> WindowPartition {
    let window = p.window.shifted(i64::from(j));
    let small = WordCodec::new(spec, p.window);
    let big = WordCodec::new(spec, window);
    let classes = p
        .classes
        .iter()
        .map(|class| {
            let mut out = Vec::new();
            for &r in class {
                let cyl = GeneralizedCylinder::from_word(&small.decode(r));
                out.extend(big.expand_cylinder(&shift_pullback(spec, &cyl, j)));
            }
            out
        })
        .collect();
    WindowPartition::from_classes(window, classes)
}

/// The `k`-step dynamical correfinement: the common refinement of the
/// partition with its first `k - 1` shift preimages. Classes group points
/// whose coarse itineraries agree for `k` steps.
pub fn dynamical_correfinement(
    spec: &ZipShiftSpec,
    p: &WindowPartition,
    k: u32,
) -> WindowPartition {
    assert!(k >= 1, "dynamical correfinement needs k >= 1");
    let mut acc = p.clone();
    for j in 1..k {
        let pulled = pullback_partition(spec, p, j);
        acc = correfine2(spec, &acc, &pulled);
    }
    acc
}

/// Entropy of one alphabet's weight distribution, in nats. This equals the
/// entropy of every single-index cylinder partition on that side.
pub fn symbol_entropy(spec: &ZipShiftSpec, side: Side) -> f64 {
    spec.symbols(side)
        .map(|s| {
            let w = spec.weight(s).to_f64().expect("weights are finite");
            -w * w.ln()
        })
        .sum()
}

/// Shannon entropy of a partition in nats: the exact class measures feed the
/// logarithms, floating point appears nowhere else.
pub fn partition_entropy(spec: &ZipShiftSpec, p: &WindowPartition) -> f64 {
    p.class_measures(spec)
        .into_iter()
        .map(|m| {
            if m.is_zero() {
                0.0
            } else {
                let x = m.to_f64().expect("measures are finite");
                -x * x.ln()
            }
        })
        .sum()
}

/// Closed-form entropy of the cylinder partition spanning `n` negative and
/// `n_prime` nonnegative indices: independence across indices makes it
/// `n * H(negative) + n_prime * H(positive)`.
pub fn range_partition_entropy(spec: &ZipShiftSpec, n: u32, n_prime: u32) -> f64 {
    assert!(n + n_prime >= 1, "the window must contain an index");
    f64::from(n) * symbol_entropy(spec, Side::Negative)
        + f64::from(n_prime) * symbol_entropy(spec, Side::Positive)
}

/// Metric entropy of the zip shift, in nats: the entropy of the positive
/// weight distribution. The partition identities that reduce the defining
/// supremum to this single number are exactly what
/// [`verify_correfinement_lemma`] and the convergence table exercise.
pub fn ks_entropy(spec: &ZipShiftSpec) -> f64 {
    symbol_entropy(spec, Side::Positive)
}

/// Brute-force proof of the correfinement identity at one `(n, k)`.
///
/// Builds the centered cylinder partition over `[-n, n)`, takes its `k`-step
/// dynamical correfinement by explicit enumeration, and compares it — as a
/// literal set of word classes — with the cylinder partition over
/// `[-n, n+k-1)`. Requires `k >= 2n`; smaller `k` leave symbol relations
/// undetermined and are refused rather than guessed.
pub fn verify_correfinement_lemma(
    spec: &ZipShiftSpec,
    n: u32,
    k: u32,
    budget: u64,
) -> Result<CheckReport, PartitionError> {
    const NAME: &str = "correfinement-identity";
    if n < 1 {
        return Err(PartitionError::NTooSmall { n });
    }
    if k < 2 * n {
        return Err(PartitionError::KTooSmall { n, k });
    }
    let n_i = i64::from(n);
    let k_i = i64::from(k);
    let full_window = Window::new(-n_i, n_i + k_i - 1);
    let required = words_in(spec, full_window);
    if required > budget {
        return Err(PartitionError::BudgetExceeded { required, budget });
    }

    let base = cylinder_range_partition(spec, Window::new(-n_i, n_i));
    let refined = dynamical_correfinement(spec, &base, k);
    let direct = cylinder_range_partition(spec, full_window);

    if refined == direct {
        return Ok(CheckReport::pass(NAME, direct.num_classes() as u64));
    }

    // Locate the first class of the correfinement that the direct partition
    // does not contain.
    let offending = refined
        .classes
        .iter()
        .find(|c| !direct.classes.contains(c))
        .or_else(|| direct.classes.iter().find(|c| !refined.classes.contains(c)))
        .expect("unequal partitions differ in some class");
    let codec = WordCodec::new(spec, full_window);
    let preview: Vec<String> = offending
        .iter()
        .take(4)
        .map(|&r| codec.decode(r).display_with(spec))
        .collect();
    let suffix = if offending.len() > 4 { ", ..." } else { "" };
    Ok(CheckReport::fail(
        NAME,
        refined.num_classes() as u64,
        format!(
            "n={n}, k={k}: class {{{}{}}} appears on one side only",
            preview.join(" | "),
            suffix
        ),
    ))
}

/// One row of the entropy convergence table.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub n: u32,
    pub k: u32,
    /// Enumeration size of the underlying window.
    pub words: u64,
    /// `H(P_n^k) / k` computed by explicit enumeration, when `words` fits the
    /// budget.
    pub enumerated: Option<f64>,
    /// `(n*H(neg) + (n+k-1)*H(pos)) / k`, the closed form.
    pub closed_form: f64,
    /// Exact distance of the closed form from its limit `H(pos)`.
    pub gap: f64,
}

/// Default `(n, k)` pairs for the convergence table.
pub fn default_convergence_pairs() -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for n in 1..=2 {
        for k in (2 * n)..=(2 * n + 3) {
            pairs.push((n, k));
        }
    }
    pairs
}

/// Finite entropy approximants `h_{n,k} = H(P_n^k) / k` for the given pairs.
///
/// Each row carries the closed form; rows whose enumeration fits
/// `word_budget` also carry the explicitly enumerated value, which tests pin
/// against the closed form to 1e-12. All pairs must satisfy `k >= 2n`.
pub fn ks_convergence_table(
    spec: &ZipShiftSpec,
    pairs: &[(u32, u32)],
    word_budget: u64,
) -> Vec<ConvergenceRow> {
    let h_pos = symbol_entropy(spec, Side::Positive);
    let h_neg = symbol_entropy(spec, Side::Negative);
    pairs
        .iter()
        .map(|&(n, k)| {
            assert!(n >= 1 && k >= 2 * n, "table rows need n >= 1 and k >= 2n");
            let n_i = i64::from(n);
            let k_i = i64::from(k);
            let words = words_in(spec, Window::new(-n_i, n_i + k_i - 1));
            let enumerated = if words <= word_budget {
                let base = cylinder_range_partition(spec, Window::new(-n_i, n_i));
                let refined = dynamical_correfinement(spec, &base, k);
                Some(partition_entropy(spec, &refined) / f64::from(k))
            } else {
                None
            };
            let closed_form =
                (f64::from(n) * h_neg + f64::from(n + k - 1) * h_pos) / f64::from(k);
            let gap = (f64::from(n) * h_neg + f64::from(n - 1) * h_pos) / f64::from(k);
            ConvergenceRow {
                n,
                k,
                words,
                enumerated,
                closed_form,
                gap,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{random_spec, ratio, samples};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-12;

    #[test]
    fn single_index_partitions() {
        let spec = samples::uniform_4_to_2();
        let c0 = cylinder_partition(&spec, 0);
        assert_eq!(c0.num_classes(), 4);
        for m in c0.class_measures(&spec) {
            assert_eq!(m, ratio(1, 4));
        }
        c0.validate(&spec).unwrap();

        let cm1 = cylinder_partition(&spec, -1);
        assert_eq!(cm1.num_classes(), 2);
        for m in cm1.class_measures(&spec) {
            assert_eq!(m, ratio(1, 2));
        }

        let spec2 = samples::weighted_3_to_2();
        let cm1 = cylinder_partition(&spec2, -1);
        assert_eq!(cm1.class_measures(&spec2), vec![ratio(3, 4), ratio(1, 4)]);
    }

    #[test]
    fn correfine_of_one_is_identity() {
        let spec = samples::uniform_4_to_2();
        let p = cylinder_partition(&spec, 0);
        assert_eq!(correfine(&spec, &[p.clone()]), p);
    }

    #[test]
    fn correfine_is_idempotent() {
        let spec = samples::weighted_3_to_2();
        for i in [-2, 0, 3] {
            let p = cylinder_partition(&spec, i);
            assert_eq!(correfine(&spec, &[p.clone(), p.clone()]), p);
        }
    }

    #[test]
    fn correfine_of_independent_indices_is_a_product() {
        let spec = samples::uniform_4_to_2();
        let joined = correfine(
            &spec,
            &[cylinder_partition(&spec, -1), cylinder_partition(&spec, 0)],
        );
        assert_eq!(joined.num_classes(), 8);
        for m in joined.class_measures(&spec) {
            assert_eq!(m, ratio(1, 8));
        }
        joined.validate(&spec).unwrap();
    }

    #[test]
    fn pullback_moves_cylinder_partitions() {
        let spec = samples::uniform_4_to_2();
        let c0 = cylinder_partition(&spec, 0);
        assert_eq!(pullback_partition(&spec, &c0, 0), c0);
        assert_eq!(pullback_partition(&spec, &c0, 1), cylinder_partition(&spec, 1));

        let cm2 = cylinder_partition(&spec, -2);
        assert_eq!(
            pullback_partition(&spec, &cm2, 1),
            cylinder_partition(&spec, -1)
        );
    }

    #[test]
    fn pullback_across_boundary_stays_a_partition() {
        let spec = samples::weighted_3_to_2();
        let cm1 = cylinder_partition(&spec, -1);
        let pulled = pullback_partition(&spec, &cm1, 1);
        // Classes are fibers of the transition map over index 0.
        assert_eq!(pulled.window(), Window::new(0, 1));
        assert_eq!(pulled.num_classes(), 2);
        assert_eq!(pulled.class_measures(&spec), vec![ratio(3, 4), ratio(1, 4)]);
        pulled.validate(&spec).unwrap();
    }

    #[test]
    fn dynamical_correfinement_of_forward_cylinders() {
        let spec = samples::uniform_4_to_2();
        let c0 = cylinder_partition(&spec, 0);
        assert_eq!(dynamical_correfinement(&spec, &c0, 1), c0);

        let cube = dynamical_correfinement(&spec, &c0, 3);
        assert_eq!(cube.window(), Window::new(0, 3));
        assert_eq!(cube.num_classes(), 64);
        for m in cube.class_measures(&spec) {
            assert_eq!(m, ratio(1, 64));
        }
        assert_eq!(cube, cylinder_range_partition(&spec, Window::new(0, 3)));
    }

    #[test]
    fn correfinement_identity_on_samples() {
        for spec in [samples::uniform_4_to_2(), samples::weighted_3_to_2()] {
            for (n, k) in [(1, 2), (1, 3)] {
                let report =
                    verify_correfinement_lemma(&spec, n, k, DEFAULT_ENUMERATION_BUDGET).unwrap();
                assert!(report.passed(), "{:?}", report.counterexample);
            }
        }
        // Bijective transition: pullbacks stay basic cylinders.
        let report =
            verify_correfinement_lemma(&samples::bernoulli_3(), 2, 4, DEFAULT_ENUMERATION_BUDGET)
                .unwrap();
        assert!(report.passed());
    }

    #[test]
    fn correfinement_guards() {
        let spec = samples::uniform_4_to_2();
        assert_eq!(
            verify_correfinement_lemma(&spec, 2, 3, DEFAULT_ENUMERATION_BUDGET),
            Err(PartitionError::KTooSmall { n: 2, k: 3 })
        );
        assert_eq!(
            verify_correfinement_lemma(&spec, 0, 2, DEFAULT_ENUMERATION_BUDGET),
            Err(PartitionError::NTooSmall { n: 0 })
        );
        assert!(matches!(
            verify_correfinement_lemma(&spec, 1, 2, 10),
            Err(PartitionError::BudgetExceeded { required: 128, budget: 10 })
        ));
    }

    #[test]
    fn entropy_of_single_class_partition_is_zero() {
        let spec = samples::uniform_4_to_2();
        let whole = cylinder_range_partition(&spec, Window::new(5, 5));
        assert_eq!(whole.num_classes(), 1);
        assert_eq!(partition_entropy(&spec, &whole), 0.0);
    }

    #[test]
    fn entropy_values_on_samples() {
        let spec = samples::uniform_4_to_2();
        let c0 = cylinder_partition(&spec, 0);
        assert!((partition_entropy(&spec, &c0) - 4.0f64.ln()).abs() < TOL);

        let spec2 = samples::weighted_3_to_2();
        let cm1 = cylinder_partition(&spec2, -1);
        let expected = -(0.75 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        assert!((partition_entropy(&spec2, &cm1) - expected).abs() < TOL);
        assert!((partition_entropy(&spec2, &cm1) - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn range_entropy_matches_enumeration() {
        let spec = samples::uniform_4_to_2();
        assert!((range_partition_entropy(&spec, 0, 1) - ks_entropy(&spec)).abs() < TOL);

        // Two negative and three nonnegative indices.
        let direct = partition_entropy(
            &spec,
            &cylinder_range_partition(&spec, Window::new(-2, 3)),
        );
        let closed = range_partition_entropy(&spec, 2, 3);
        assert!((direct - closed).abs() < TOL);
        assert!((closed - (2.0 * 2.0f64.ln() + 3.0 * 4.0f64.ln())).abs() < TOL);
        assert!((closed - 5.545177).abs() < 1e-6);

        let spec2 = samples::weighted_3_to_2();
        let direct = partition_entropy(
            &spec2,
            &cylinder_range_partition(&spec2, Window::new(-1, 1)),
        );
        let closed = range_partition_entropy(&spec2, 1, 1);
        assert!((direct - closed).abs() < TOL);
        assert!((closed - 1.602056).abs() < 1e-6);
    }

    #[test]
    fn ks_entropy_values() {
        assert!((ks_entropy(&samples::uniform_4_to_2()) - 4.0f64.ln()).abs() < TOL);
        let h = ks_entropy(&samples::weighted_3_to_2());
        assert!((h - 1.039721).abs() < 1e-6);
        assert!((h / std::f64::consts::LN_2 - 1.5).abs() < TOL);
        assert_eq!(ks_entropy(&samples::single_symbol()), 0.0);
    }

    #[test]
    fn convergence_table_matches_closed_form() {
        for spec in [samples::uniform_4_to_2(), samples::weighted_3_to_2()] {
            let rows = ks_convergence_table(&spec, &default_convergence_pairs(), 100_000);
            let target = ks_entropy(&spec);
            for row in rows {
                let h = row.enumerated.expect("sample specs fit the table budget");
                assert!(
                    (h - row.closed_form).abs() < TOL,
                    "n={}, k={}: {} vs {}",
                    row.n,
                    row.k,
                    h,
                    row.closed_form
                );
                assert!(((row.closed_form - target) - row.gap).abs() < TOL);
            }
        }
    }

    #[test]
    fn refinement_monotonicity() {
        let spec = samples::weighted_3_to_2();
        let parts = [
            cylinder_partition(&spec, -1),
            cylinder_partition(&spec, 0),
            cylinder_partition(&spec, 1),
        ];
        let joined = correfine(&spec, &parts);
        let h = partition_entropy(&spec, &joined);
        for p in &parts {
            assert!(h >= partition_entropy(&spec, p) - TOL);
        }
    }

    #[test]
    fn expand_to_preserves_the_partition() {
        let spec = samples::weighted_3_to_2();
        let p = cylinder_partition(&spec, 0);
        let expanded = p.expand_to(&spec, Window::new(-1, 2));
        expanded.validate(&spec).unwrap();
        assert_eq!(expanded.num_classes(), p.num_classes());
        let measures: Vec<BigRational> = expanded.class_measures(&spec);
        // Free indices contribute factor one to every class measure.
        assert_eq!(measures, p.class_measures(&spec));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// The correfinement identity holds on random specs at in-budget
        /// sizes, and every operation output is a genuine partition.
        #[test]
        fn correfinement_identity_random(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = random_spec(&mut rng, 4);
            for (n, k) in [(1u32, 2u32), (1, 3), (2, 4)] {
                let report = verify_correfinement_lemma(&spec, n, k, DEFAULT_ENUMERATION_BUDGET)
                    .expect("within budget for l <= 4");
                prop_assert!(report.passed(), "{:?}", report.counterexample);
            }
        }

        /// Independence factorization: enumerated window entropy equals the
        /// closed form.
        #[test]
        fn factorization_random(seed in any::<u64>(), n in 0u32..3, n_prime in 0u32..3) {
            prop_assume!(n + n_prime >= 1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = random_spec(&mut rng, 5);
            let window = Window::new(-i64::from(n), i64::from(n_prime));
            let direct = partition_entropy(&spec, &cylinder_range_partition(&spec, window));
            let closed = range_partition_entropy(&spec, n, n_prime);
            prop_assert!((direct - closed).abs() < TOL);
        }

        /// Refinement can only gain entropy.
        #[test]
        fn correfine_entropy_monotone(seed in any::<u64>(), i in -3i64..3, j in -3i64..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = random_spec(&mut rng, 5);
            let p = cylinder_partition(&spec, i);
            let q = cylinder_partition(&spec, j);
            let joined = correfine(&spec, &[p.clone(), q.clone()]);
            joined.validate(&spec).unwrap();
            let h = partition_entropy(&spec, &joined);
            prop_assert!(h >= partition_entropy(&spec, &p) - TOL);
            prop_assert!(h >= partition_entropy(&spec, &q) - TOL);
        }
    }
}
