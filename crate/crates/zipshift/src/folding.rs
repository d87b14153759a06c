//! Preimage fibers, the quotient of the space by them, and folding entropy.
//!
//! A point's preimage set is finite: one branch per transition-map preimage
//! of its symbol at index -1. The conditional weights on those branches are
//! the fiber distributions `q` derived in [`crate::spec`], so every integral
//! over the fiber space collapses to a finite sum over the negative alphabet.
//! Folding entropy comes out two ways — as the `p_minus`-average of fiber
//! entropies and as the difference of the two alphabet entropies — and the
//! two routes must agree; disagreement signals an arithmetic bug, not a
//! property of the input.

use num::{BigRational, One, ToPrimitive};
use thiserror::Error;

use crate::check::CheckReport;
use crate::partition::symbol_entropy;
use crate::spec::{Side, Symbol, ZipShiftSpec};
use crate::symbolic::{cylinder_measure, shift_pullback, GeneralizedCylinder};

/// Tolerance for the agreement of the two folding-entropy routes. They are
/// algebraically equal; only float rounding separates them.
pub const FORMULA_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FoldingError {
    #[error("symbol {symbol:?} is not a negative symbol of this system")]
    UnknownSymbol { symbol: Symbol },

    #[error(
        "folding entropy routes disagree: fiber average {fiber_average} vs cylinder difference {cylinder_difference}"
    )]
    FormulaMismatch {
        fiber_average: f64,
        cylinder_difference: f64,
    },
}

/// The branch structure of the preimage fibers anchored at one negative
/// symbol: the branches are the transition-map preimages of the anchor, and
/// the branch weights are the conditional distribution on them.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberClass {
    anchor: Symbol,
    branches: Vec<Symbol>,
    branch_weights: Vec<BigRational>,
}

impl FiberClass {
    pub fn new(spec: &ZipShiftSpec, anchor: Symbol) -> Result<FiberClass, FoldingError> {
        if anchor.side() != Side::Negative || anchor.index() >= spec.minus_len() {
            return Err(FoldingError::UnknownSymbol { symbol: anchor });
        }
        let branches = spec.fiber(anchor);
        let branch_weights: Vec<BigRational> =
            spec.derived().q(anchor.index()).to_vec();
        debug_assert!(branch_weights.iter().sum::<BigRational>().is_one());
        Ok(FiberClass {
            anchor,
            branches,
            branch_weights,
        })
    }

    pub fn anchor(&self) -> Symbol {
        self.anchor
    }

    pub fn branches(&self) -> &[Symbol] {
        &self.branches
    }

    pub fn branch_weights(&self) -> &[BigRational] {
        &self.branch_weights
    }

    /// Shannon entropy of the branch distribution, in nats.
    pub fn entropy(&self) -> f64 {
        self.branch_weights
            .iter()
            .map(|q| {
                let x = q.to_f64().expect("weights are finite");
                -x * x.ln()
            })
            .sum()
    }
}

/// Entropy of the conditional distribution on the fibers anchored at
/// `s_minus`, in nats. Zero exactly when the fiber is a single branch.
pub fn fiber_entropy(spec: &ZipShiftSpec, s_minus: Symbol) -> Result<f64, FoldingError> {
    Ok(FiberClass::new(spec, s_minus)?.entropy())
}

/// Folding entropy computed along both of its routes.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FoldingEntropy {
    /// `p_minus`-weighted average of the fiber entropies.
    pub fiber_average: f64,
    /// Difference of the positive and negative alphabet entropies.
    pub cylinder_difference: f64,
}

impl FoldingEntropy {
    /// The folding entropy in nats (the fiber-average route).
    pub fn nats(&self) -> f64 {
        self.fiber_average
    }

    /// Absolute disagreement between the two routes.
    pub fn residual(&self) -> f64 {
        (self.fiber_average - self.cylinder_difference).abs()
    }
}

/// Folding entropy of the system, by both routes, with the agreement of the
/// routes enforced to [`FORMULA_TOLERANCE`].
pub fn folding_entropy(spec: &ZipShiftSpec) -> Result<FoldingEntropy, FoldingError> {
    let fiber_average = spec
        .symbols(Side::Negative)
        .map(|t| {
            let weight = spec.weight(t).to_f64().expect("weights are finite");
            let h = FiberClass::new(spec, t)
                .expect("alphabet symbols are valid anchors")
                .entropy();
            weight * h
        })
        .sum();
    let cylinder_difference =
        symbol_entropy(spec, Side::Positive) - symbol_entropy(spec, Side::Negative);
    let result = FoldingEntropy {
        fiber_average,
        cylinder_difference,
    };
    if result.residual() > FORMULA_TOLERANCE {
        return Err(FoldingError::FormulaMismatch {
            fiber_average,
            cylinder_difference,
        });
    }
    Ok(result)
}

/// The expected one-step preimage of a cylinder, built directly from the
/// boundary case analysis: every constraint moves from `i` to `i + 1`, and a
/// constraint leaving index -1 expands to the transition-map fiber of its
/// symbols. Written out independently of [`shift_pullback`] so the two can
/// cross-check each other.
fn expected_one_step_preimage(
    spec: &ZipShiftSpec,
    cyl: &GeneralizedCylinder,
) -> GeneralizedCylinder {
    let constraints = cyl.iter().map(|(i, allowed)| {
        let symbols: Vec<Symbol> = if i == -1 {
            allowed.iter().flat_map(|&s| spec.fiber(s)).collect()
        } else {
            allowed.iter().copied().collect()
        };
        (i + 1, symbols)
    });
    GeneralizedCylinder::from_constraints(constraints.collect::<Vec<_>>())
        .expect("shifted constraints stay side-correct and distinct")
}

/// All basic and two-index cylinders with constrained indices in
/// `[-depth, depth)`, plus the whole space.
fn cylinder_family(spec: &ZipShiftSpec, depth: i64) -> Vec<GeneralizedCylinder> {
    let mut family = vec![GeneralizedCylinder::full()];
    for i in -depth..depth {
        for s in spec.symbols(Side::of_index(i)) {
            family.push(GeneralizedCylinder::basic(i, s).expect("side matches index"));
        }
    }
    for i in -depth..depth {
        for j in (i + 1)..depth {
            for s in spec.symbols(Side::of_index(i)) {
                for s2 in spec.symbols(Side::of_index(j)) {
                    family.push(
                        GeneralizedCylinder::from_constraints([(i, vec![s]), (j, vec![s2])])
                            .expect("indices are distinct"),
                    );
                }
            }
        }
    }
    family
}

/// Check that the quotient measure of a projected set equals the measure of
/// the set itself, exactly.
///
/// For every basic and two-index cylinder `M` with indices in
/// `[-depth, depth)`, the projection's preimage is the shift preimage of `M`,
/// so the check compares three exact rationals: the measure of the expected
/// preimage shape (from the boundary case analysis), the measure of
/// `shift_pullback(M, 1)`, and the measure of `M`. The two preimage
/// constructions must also agree as constraint sets.
pub fn quotient_measure_check(spec: &ZipShiftSpec, depth: u32) -> CheckReport {
    assert!(depth >= 1, "depth must be at least 1");
    const NAME: &str = "quotient-measure";
    let mut cases = 0u64;
    for cyl in cylinder_family(spec, i64::from(depth)) {
        cases += 1;
        let expected = expected_one_step_preimage(spec, &cyl);
        let pulled = shift_pullback(spec, &cyl, 1);
        if expected != pulled {
            return CheckReport::fail(
                NAME,
                cases,
                format!(
                    "preimage of {} is {}, case analysis expected {}",
                    cyl.display_with(spec),
                    pulled.display_with(spec),
                    expected.display_with(spec)
                ),
            );
        }
        let direct = cylinder_measure(spec, &cyl).expect("family is alphabet-valid");
        let quotient = cylinder_measure(spec, &pulled).expect("pullbacks stay valid");
        if direct != quotient {
            return CheckReport::fail(
                NAME,
                cases,
                format!(
                    "quotient measure of {} is {}, original measure is {}",
                    cyl.display_with(spec),
                    quotient,
                    direct
                ),
            );
        }
    }
    CheckReport::pass(NAME, cases)
}

/// Replay the disintegration identity on every basic cylinder with
/// `|i| <= depth`, in exact arithmetic.
///
/// Away from index 0, conditional measures are 0/1 on whole fibers and the
/// identity reduces to the quotient-measure equality between index `i` and
/// `i - 1`. At index 0 the fiber weights enter: the measure of a positive
/// basic cylinder must factor exactly as its branch weight times the measure
/// of the negative cylinder of its transition image.
pub fn disintegration_check(spec: &ZipShiftSpec, depth: u32) -> CheckReport {
    assert!(depth >= 1, "depth must be at least 1");
    const NAME: &str = "disintegration";
    let depth = i64::from(depth);
    let mut cases = 0u64;

    for i in -depth..=depth {
        for s in spec.symbols(Side::of_index(i)) {
            cases += 1;
            let cyl = GeneralizedCylinder::basic(i, s).expect("side matches index");
            let measure = cylinder_measure(spec, &cyl).expect("alphabet-valid");
            if i == 0 {
                let anchor = spec.phi(s);
                let branch = spec.fiber_weight(s);
                let negative = GeneralizedCylinder::basic(-1, anchor).expect("negative side");
                let factored =
                    branch * cylinder_measure(spec, &negative).expect("alphabet-valid");
                if measure != factored {
                    return CheckReport::fail(
                        NAME,
                        cases,
                        format!(
                            "measure of {} is {}, but branch weight times anchor measure is {}",
                            cyl.display_with(spec),
                            measure,
                            factored
                        ),
                    );
                }
            } else {
                let image = GeneralizedCylinder::basic(i - 1, s)
                    .expect("index i-1 keeps the sign of i when i != 0");
                let via_quotient = cylinder_measure(spec, &shift_pullback(spec, &image, 1))
                    .expect("pullbacks stay valid");
                let image_measure = cylinder_measure(spec, &image).expect("alphabet-valid");
                if measure != via_quotient || measure != image_measure {
                    return CheckReport::fail(
                        NAME,
                        cases,
                        format!(
                            "measures disagree for {}: direct {}, quotient route {}, image {}",
                            cyl.display_with(spec),
                            measure,
                            via_quotient,
                            image_measure
                        ),
                    );
                }
            }
        }
    }
    CheckReport::pass(NAME, cases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::ks_entropy;
    use crate::spec::{random_spec, ratio, samples, validate_spec, RawSpec};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-12;

    #[test]
    fn singleton_fibers_have_zero_entropy() {
        let spec = samples::bernoulli_3();
        for t in spec.symbols(Side::Negative) {
            assert_eq!(fiber_entropy(&spec, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn fiber_entropy_values() {
        let spec = samples::uniform_4_to_2();
        let h = fiber_entropy(&spec, Symbol::negative(0)).unwrap();
        assert!((h - 2.0f64.ln()).abs() < TOL);

        let spec2 = samples::weighted_3_to_2();
        let h = fiber_entropy(&spec2, Symbol::negative(0)).unwrap();
        let expected = 3.0f64.ln() - (2.0 / 3.0) * 2.0f64.ln();
        assert!((h - expected).abs() < TOL);
        assert!((h - 0.636514).abs() < 1e-6);
    }

    #[test]
    fn unknown_anchor_is_rejected() {
        let spec = samples::uniform_4_to_2();
        assert!(matches!(
            fiber_entropy(&spec, Symbol::positive(0)),
            Err(FoldingError::UnknownSymbol { .. })
        ));
        assert!(matches!(
            fiber_entropy(&spec, Symbol::negative(9)),
            Err(FoldingError::UnknownSymbol { .. })
        ));
    }

    #[test]
    fn folding_entropy_on_samples() {
        let f = folding_entropy(&samples::uniform_4_to_2()).unwrap();
        assert!((f.nats() - 2.0f64.ln()).abs() < TOL);
        assert!(f.residual() <= FORMULA_TOLERANCE);

        let f = folding_entropy(&samples::weighted_3_to_2()).unwrap();
        assert!((f.nats() - 0.477386).abs() < 1e-6);

        let f = folding_entropy(&samples::bernoulli_3()).unwrap();
        assert_eq!(f.fiber_average, 0.0);
        assert!(f.cylinder_difference.abs() < TOL);
    }

    #[test]
    fn fiber_entropies_ignore_relabeling_within_a_fiber() {
        let build = |weights: [(i64, i64); 4]| {
            let raw = RawSpec {
                label: None,
                s_plus: vec!["0".into(), "1".into(), "2".into(), "3".into()],
                s_minus: vec!["a".into(), "b".into()],
                phi: [("0", "a"), ("1", "a"), ("2", "b"), ("3", "b")]
                    .iter()
                    .map(|(x, y)| (x.to_string(), y.to_string()))
                    .collect(),
                p_plus: weights.iter().map(|&(n, d)| ratio(n, d)).collect(),
            };
            validate_spec(&raw).unwrap()
        };
        // Swap the weights of the two symbols inside each fiber.
        let original = build([(1, 2), (1, 4), (1, 8), (1, 8)]);
        let relabeled = build([(1, 4), (1, 2), (1, 8), (1, 8)]);
        for t in original.symbols(Side::Negative) {
            let a = fiber_entropy(&original, t).unwrap();
            let b = fiber_entropy(&relabeled, t).unwrap();
            assert!((a - b).abs() < TOL);
        }
    }

    #[test]
    fn quotient_and_disintegration_pass_on_samples() {
        for spec in [
            samples::uniform_4_to_2(),
            samples::weighted_3_to_2(),
            samples::bernoulli_3(),
            samples::single_symbol(),
        ] {
            let q = quotient_measure_check(&spec, 3);
            assert!(q.passed(), "{:?}", q.counterexample);
            let d = disintegration_check(&spec, 3);
            assert!(d.passed(), "{:?}", d.counterexample);
        }
    }

    #[test]
    fn disintegration_factorization_at_index_zero() {
        // Weighted sample: mu(C^1_0) = 1/4 = (1/3) * (3/4).
        let spec = samples::weighted_3_to_2();
        assert_eq!(spec.fiber_weight(Symbol::positive(1)), &ratio(1, 3));
        assert_eq!(spec.weight(Symbol::negative(0)), &ratio(3, 4));
        assert_eq!(spec.weight(Symbol::positive(1)), &ratio(1, 4));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Both folding routes agree and the entropy bookkeeping identity
        /// holds: ks = folding + negative-alphabet entropy.
        #[test]
        fn folding_identities_random(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = random_spec(&mut rng, 6);
            let f = folding_entropy(&spec).unwrap();
            prop_assert!(f.residual() <= FORMULA_TOLERANCE);

            let ks = ks_entropy(&spec);
            let h_neg = symbol_entropy(&spec, Side::Negative);
            prop_assert!((ks - (f.nats() + h_neg)).abs() < TOL);

            // 0 <= F <= H(C_0), zero exactly when the transition is injective.
            prop_assert!(f.nats() >= -TOL);
            prop_assert!(f.nats() <= ks + TOL);
            if spec.is_bijective() {
                prop_assert!(f.nats().abs() < TOL);
            } else {
                prop_assert!(f.nats() > 0.0);
            }
        }

        /// The exact-measure checks pass on random specs.
        #[test]
        fn exact_checks_random(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = random_spec(&mut rng, 6);
            prop_assert!(quotient_measure_check(&spec, 3).passed());
            prop_assert!(disintegration_check(&spec, 3).passed());
        }
    }
}
