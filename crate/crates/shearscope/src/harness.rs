//! Generators and exhaustive search over small coefficient spaces.
//!
//! The enumeration sweeps candidate nonlinear parts `(p, q)` with monomial
//! degrees in `[2, max_degree]`. The pruned scheme exploits the divergence
//! constraint: once `p` is chosen, `q_y = -p_x` determines `q` up to an
//! arbitrary polynomial in `x` alone, so only that free part is enumerated.
//! Forced coefficients of `q` may fall outside the coefficient set; such
//! candidates are kept (nothing about the shear structure confines
//! coefficients to the alphabet) and counted in `out_of_set_candidates`, with the
//! `in_set_*` fields restricted to fully in-set candidates so that results
//! stay comparable with the naive full enumeration.
//!
//! Randomness is deterministic per seed: all sampling runs on ChaCha8,
//! whose seed-to-stream mapping is stable across platforms.

use crate::conditions::{c1_conditions, c2_conditions};
use crate::jacobian::{self, normalize};
use crate::poly::{Monomial, Poly, PolyMap, Rational};
use crate::shear::{decompose_map, DecomposeOutcome, Direction, ShearDecomposition};
use num::{BigInt, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// The deterministic generator used throughout the harness.
pub type HarnessRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> HarnessRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Default cap on the number of candidates an enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

/// What to sweep: degree bound, coefficient alphabet, and mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub max_degree: u32,
    pub coefficient_set: Vec<Rational>,
    pub mode: EnumerationMode,
}

impl EnumerationSpec {
    /// Build a validated spec; the coefficient set is sorted and
    /// deduplicated.
    pub fn new(
        max_degree: u32,
        coefficient_set: Vec<Rational>,
        mode: EnumerationMode,
    ) -> Result<Self, HarnessError> {
        let coefficient_set: Vec<Rational> = coefficient_set
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let spec = EnumerationSpec {
            max_degree,
            coefficient_set,
            mode,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.max_degree < 2 {
            return Err(HarnessError::InvalidSpec(format!(
                "max_degree must be at least 2, got {}",
                self.max_degree
            )));
        }
        if self.coefficient_set.is_empty() {
            return Err(HarnessError::InvalidSpec(
                "coefficient set must not be empty".into(),
            ));
        }
        if !self.coefficient_set.iter().any(Zero::is_zero) {
            return Err(HarnessError::InvalidSpec(
                "coefficient set must contain 0".into(),
            ));
        }
        if let EnumerationMode::Random { count: 0, .. } = self.mode {
            return Err(HarnessError::InvalidSpec(
                "random mode needs a positive count".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("invalid enumeration spec: {0}")]
    InvalidSpec(String),
    /// The sweep would visit more candidates than the configured cap.
    #[error("enumeration needs {candidates} candidates, over the budget of {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },
}

/// A map the sweep failed to decompose, kept in canonical rendered form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub p: String,
    pub q: String,
}

/// Aggregated counts of one sweep.
///
/// For divergence-free enumeration the counts are per candidate map
/// `(x + p, y + q)`. For condition cross-checks, `jacobian_count` counts
/// maps satisfying the full hypothesis (condition flags plus jacobian
/// test), and the divergence-free and shear counts are taken inside that
/// hypothesis class after normalization.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationResult {
    pub total_candidates: u64,
    pub divergence_free_count: u64,
    pub jacobian_count: u64,
    pub divfree_jacobian_count: u64,
    pub shear_decomposed_count: u64,
    /// Candidates with some forced coefficient outside the coefficient set
    /// (only the pruned scheme can produce these).
    pub out_of_set_candidates: u64,
    /// `divfree_jacobian_count` restricted to fully in-set candidates.
    pub in_set_divfree_jacobian_count: u64,
    /// `shear_decomposed_count` restricted to fully in-set candidates.
    pub in_set_shear_decomposed_count: u64,
    /// Maps that are divergence-free jacobian but failed to decompose.
    /// Sorted canonically; expected empty.
    pub counterexamples: Vec<Counterexample>,
}

impl EnumerationResult {
    /// Combine two partial results; counts add and counterexamples are
    /// re-sorted, so merging is associative and order-independent.
    pub fn merge(mut self, other: EnumerationResult) -> EnumerationResult {
        self.total_candidates += other.total_candidates;
        self.divergence_free_count += other.divergence_free_count;
        self.jacobian_count += other.jacobian_count;
        self.divfree_jacobian_count += other.divfree_jacobian_count;
        self.shear_decomposed_count += other.shear_decomposed_count;
        self.out_of_set_candidates += other.out_of_set_candidates;
        self.in_set_divfree_jacobian_count += other.in_set_divfree_jacobian_count;
        self.in_set_shear_decomposed_count += other.in_set_shear_decomposed_count;
        self.counterexamples.extend(other.counterexamples);
        self.counterexamples.sort();
        self.counterexamples.dedup();
        self
    }

    /// Every divergence-free jacobian map decomposed.
    pub fn all_divergence_free_jacobians_decomposed(&self) -> bool {
        self.shear_decomposed_count == self.divfree_jacobian_count
            && self.counterexamples.is_empty()
    }

    /// Every map satisfying the condition hypothesis decomposed (meaningful
    /// on cross-check results, where `jacobian_count` is the hypothesis
    /// count).
    pub fn all_hypothesis_maps_decomposed(&self) -> bool {
        self.shear_decomposed_count == self.jacobian_count && self.counterexamples.is_empty()
    }
}

/// Deterministic-per-seed random shear decomposition: canonical direction
/// with entries bounded by `coeff_bound`, coefficients with numerator and
/// denominator bounded by `coeff_bound`, and the top coefficient forced
/// nonzero so the result has degree exactly `max_degree`.
pub fn random_shear(max_degree: u32, coeff_bound: i64, seed: u64) -> ShearDecomposition {
    assert!(max_degree >= 2, "max_degree must be at least 2");
    assert!(coeff_bound >= 1, "coeff_bound must be at least 1");
    let mut rng = seeded_rng(seed);
    let direction = loop {
        let alpha = rng.gen_range(-coeff_bound..=coeff_bound);
        let beta = rng.gen_range(-coeff_bound..=coeff_bound);
        if let Some((dir, _)) = Direction::canonicalize(BigInt::from(alpha), BigInt::from(beta)) {
            break dir;
        }
    };
    let mut epsilons = BTreeMap::new();
    for degree in 2..=max_degree {
        let numerator = if degree == max_degree {
            loop {
                let n = rng.gen_range(-coeff_bound..=coeff_bound);
                if n != 0 {
                    break n;
                }
            }
        } else {
            rng.gen_range(-coeff_bound..=coeff_bound)
        };
        let denominator = rng.gen_range(1..=coeff_bound);
        epsilons.insert(
            degree,
            Rational::new(BigInt::from(numerator), BigInt::from(denominator)),
        );
    }
    ShearDecomposition::new(direction, epsilons)
}

/// Random polynomial over the monomials with total degree in
/// `[min_order, max_degree]`, each coefficient uniform in
/// `[-coeff_bound, coeff_bound]`.
pub fn random_poly(
    rng: &mut HarnessRng,
    min_order: u32,
    max_degree: u32,
    coeff_bound: i64,
) -> Poly {
    let mut terms = Vec::new();
    for degree in min_order..=max_degree {
        for exp_y in 0..=degree {
            let c = rng.gen_range(-coeff_bound..=coeff_bound);
            terms.push((Monomial::new(degree - exp_y, exp_y), crate::poly::rat(c)));
        }
    }
    Poly::from_terms(terms)
}

/// All monomials of total degree in `[2, max_degree]`, canonical order.
fn nonlinear_monomials(max_degree: u32) -> Vec<Monomial> {
    let mut basis = Vec::new();
    for degree in 2..=max_degree {
        for exp_y in 0..=degree {
            basis.push(Monomial::new(degree - exp_y, exp_y));
        }
    }
    basis
}

/// The monomials of the divergence kernel's free part: powers of `x` with
/// degree in `[2, max_degree]`.
fn pure_x_monomials(max_degree: u32) -> Vec<Monomial> {
    (2..=max_degree).map(|d| Monomial::new(d, 0)).collect()
}

/// Integrate `-p_x` in `y`: the forced part of `q` under `p_x + q_y = 0`.
/// Every monomial `c x^i y^j` of `p` with `i >= 1` contributes
/// `-(i / (j+1)) c x^(i-1) y^(j+1)`, staying in the same total degree.
fn forced_divergence_partner(p: &Poly) -> Poly {
    Poly::from_terms(p.terms().filter(|(m, _)| m.exp_x >= 1).map(|(m, c)| {
        (
            Monomial::new(m.exp_x - 1, m.exp_y + 1),
            -(c * Rational::new(BigInt::from(m.exp_x), BigInt::from(m.exp_y + 1))),
        )
    }))
}

fn poly_from_assignment(basis: &[Monomial], set: &[Rational], mut index: u64) -> Poly {
    let len = set.len() as u64;
    Poly::from_terms(basis.iter().map(|m| {
        let c = set[(index % len) as usize].clone();
        index /= len;
        (*m, c)
    }))
}

fn random_poly_from_set(basis: &[Monomial], set: &[Rational], rng: &mut HarnessRng) -> Poly {
    Poly::from_terms(
        basis
            .iter()
            .map(|m| (*m, set[rng.gen_range(0..set.len())].clone())),
    )
}

fn count_assignments(set_len: usize, positions: usize) -> Option<u128> {
    (set_len as u128).checked_pow(u32::try_from(positions).ok()?)
}

fn check_budget(candidates: Option<u128>, budget: u64) -> Result<u128, HarnessError> {
    match candidates {
        Some(n) if n <= u128::from(budget) => Ok(n),
        Some(n) => Err(HarnessError::BudgetExceeded {
            candidates: n,
            budget,
        }),
        None => Err(HarnessError::BudgetExceeded {
            candidates: u128::MAX,
            budget,
        }),
    }
}

/// Classify one candidate nonlinear pair and fold it into the result.
fn record_candidate(p: &Poly, q: &Poly, in_set: bool, result: &mut EnumerationResult) {
    result.total_candidates += 1;
    if !in_set {
        result.out_of_set_candidates += 1;
    }
    let divergence_free = jacobian::divergence(p, q).is_zero();
    if divergence_free {
        result.divergence_free_count += 1;
    }
    let map = PolyMap::new(&Poly::x() + p, &Poly::y() + q);
    let witness = jacobian::is_jacobian_map(&map);
    if witness.is_jacobian {
        result.jacobian_count += 1;
    }
    if !(divergence_free && witness.is_jacobian) {
        return;
    }
    // With zero divergence and orders >= 2 the determinant-like part has
    // no constant term, so the constant determinant can only be 1.
    assert_eq!(
        witness.determinant,
        Poly::one(),
        "divergence-free jacobian map must have det J = 1"
    );
    result.divfree_jacobian_count += 1;
    if in_set {
        result.in_set_divfree_jacobian_count += 1;
    }
    let normalized = normalize(&map).expect("candidate maps have identity linear part");
    match decompose_map(&normalized) {
        DecomposeOutcome::Shear(_) | DecomposeOutcome::Linear => {
            result.shear_decomposed_count += 1;
            if in_set {
                result.in_set_shear_decomposed_count += 1;
            }
        }
        DecomposeOutcome::NotShear { .. } => {
            result.counterexamples.push(Counterexample {
                p: crate::expr::format_poly(&map.p),
                q: crate::expr::format_poly(&map.q),
            });
        }
    }
}

/// Divergence-constrained sweep: `p` ranges over the full nonlinear basis,
/// `q` over its forced partner plus a free polynomial in `x`.
pub fn enumerate_divergence_free(
    spec: &EnumerationSpec,
    budget: u64,
) -> Result<EnumerationResult, HarnessError> {
    spec.validate()?;
    let p_basis = nonlinear_monomials(spec.max_degree);
    let c_basis = pure_x_monomials(spec.max_degree);
    let set = &spec.coefficient_set;
    match &spec.mode {
        EnumerationMode::Exhaustive => {
            let total = check_budget(
                count_assignments(set.len(), p_basis.len() + c_basis.len()),
                budget,
            )?;
            debug_assert!(total <= u128::from(u64::MAX));
            let p_total = count_assignments(set.len(), p_basis.len()).expect("within budget");
            Ok(enumerate_pruned_range(
                spec,
                &p_basis,
                &c_basis,
                0,
                p_total as u64,
            ))
        }
        EnumerationMode::Random { count, seed } => {
            check_budget(Some(u128::from(*count)), budget)?;
            let mut rng = seeded_rng(*seed);
            let in_set: BTreeSet<Rational> = set.iter().cloned().collect();
            let mut result = EnumerationResult::default();
            for _ in 0..*count {
                let p = random_poly_from_set(&p_basis, set, &mut rng);
                let free = random_poly_from_set(&c_basis, set, &mut rng);
                let forced = forced_divergence_partner(&p);
                let forced_in_set = forced.terms().all(|(_, c)| in_set.contains(c));
                let q = &forced + &free;
                record_candidate(&p, &q, forced_in_set, &mut result);
            }
            result.counterexamples.sort();
            result.counterexamples.dedup();
            Ok(result)
        }
    }
}

/// Sweep a contiguous range of `p`-assignments; the full enumeration is the
/// merge of disjoint ranges, which is what makes chunked (and potentially
/// concurrent) processing sound.
fn enumerate_pruned_range(
    spec: &EnumerationSpec,
    p_basis: &[Monomial],
    c_basis: &[Monomial],
    p_start: u64,
    p_end: u64,
) -> EnumerationResult {
    let set = &spec.coefficient_set;
    let in_set: BTreeSet<Rational> = set.iter().cloned().collect();
    let c_total = count_assignments(set.len(), c_basis.len()).expect("checked by caller") as u64;
    let mut result = EnumerationResult::default();
    for p_index in p_start..p_end {
        let p = poly_from_assignment(p_basis, set, p_index);
        let forced = forced_divergence_partner(&p);
        let forced_in_set = forced.terms().all(|(_, c)| in_set.contains(c));
        for c_index in 0..c_total {
            let free = poly_from_assignment(c_basis, set, c_index);
            let q = &forced + &free;
            record_candidate(&p, &q, forced_in_set, &mut result);
        }
    }
    result.counterexamples.sort();
    result.counterexamples.dedup();
    result
}

/// Full enumeration of both components over the coefficient set, with no
/// divergence pruning. Feasible only for tiny specs; serves as the oracle
/// the pruned scheme is checked against.
pub fn enumerate_divergence_free_naive(
    spec: &EnumerationSpec,
    budget: u64,
) -> Result<EnumerationResult, HarnessError> {
    spec.validate()?;
    let basis = nonlinear_monomials(spec.max_degree);
    let set = &spec.coefficient_set;
    let mut result = EnumerationResult::default();
    match &spec.mode {
        EnumerationMode::Exhaustive => {
            check_budget(count_assignments(set.len(), 2 * basis.len()), budget)?;
            let per_side = count_assignments(set.len(), basis.len()).expect("within budget") as u64;
            for p_index in 0..per_side {
                let p = poly_from_assignment(&basis, set, p_index);
                for q_index in 0..per_side {
                    let q = poly_from_assignment(&basis, set, q_index);
                    record_candidate(&p, &q, true, &mut result);
                }
            }
        }
        EnumerationMode::Random { count, seed } => {
            check_budget(Some(u128::from(*count)), budget)?;
            let mut rng = seeded_rng(*seed);
            for _ in 0..*count {
                let p = random_poly_from_set(&basis, set, &mut rng);
                let q = random_poly_from_set(&basis, set, &mut rng);
                record_candidate(&p, &q, true, &mut result);
            }
        }
    }
    result.counterexamples.sort();
    result.counterexamples.dedup();
    Ok(result)
}

/// Which sufficient-condition hypothesis a cross-check sweep filters on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionSlice {
    /// `max(d(p), d(q)) < o(p) + o(q) - 1`.
    C1I,
    /// Both nonlinear parts even.
    C1II,
    /// `p` odd, `q` even, gap condition on `(p, q)`.
    C1III,
    /// Symmetric gap condition.
    C1IV,
    /// `p` x-even, `q` x-odd.
    C2I,
    /// `p` y-odd, `q` y-even.
    C2II,
}

impl ConditionSlice {
    pub fn name(&self) -> &'static str {
        match self {
            ConditionSlice::C1I => "c1_i",
            ConditionSlice::C1II => "c1_ii",
            ConditionSlice::C1III => "c1_iii",
            ConditionSlice::C1IV => "c1_iv",
            ConditionSlice::C2I => "c2_i",
            ConditionSlice::C2II => "c2_ii",
        }
    }

    pub fn parse(name: &str) -> Option<ConditionSlice> {
        match name {
            "c1_i" => Some(ConditionSlice::C1I),
            "c1_ii" => Some(ConditionSlice::C1II),
            "c1_iii" => Some(ConditionSlice::C1III),
            "c1_iv" => Some(ConditionSlice::C1IV),
            "c2_i" => Some(ConditionSlice::C2I),
            "c2_ii" => Some(ConditionSlice::C2II),
        _ => None,
        }
    }

    /// Monomial-level prefilter for each component. Parity conditions
    /// quantify over all monomials, so restricting the basis is exact
    /// pruning; gap and degree conditions are decided per pair instead.
    fn bases(&self, max_degree: u32) -> (Vec<Monomial>, Vec<Monomial>) {
        let all = nonlinear_monomials(max_degree);
        let filter = |keep: fn(&Monomial) -> bool| -> Vec<Monomial> {
            all.iter().copied().filter(keep).collect()
        };
        match self {
            ConditionSlice::C1I | ConditionSlice::C1IV => (all.clone(), all),
            ConditionSlice::C1II => (
                filter(|m| m.degree() % 2 == 0),
                filter(|m| m.degree() % 2 == 0),
            ),
            ConditionSlice::C1III => (
                filter(|m| m.degree() % 2 == 1),
                filter(|m| m.degree() % 2 == 0),
            ),
            ConditionSlice::C2I => (
                filter(|m| m.exp_x % 2 == 0),
                filter(|m| m.exp_x % 2 == 1),
            ),
            ConditionSlice::C2II => (
                filter(|m| m.exp_y % 2 == 1),
                filter(|m| m.exp_y % 2 == 0),
            ),
        }
    }

    /// Authoritative condition test on a candidate pair.
    fn holds(&self, p: &Poly, q: &Poly) -> bool {
        match self {
            ConditionSlice::C1I | ConditionSlice::C1II | ConditionSlice::C1III
            | ConditionSlice::C1IV => {
                let c = c1_conditions(p, q).expect("nonlinear basis");
                match self {
                    ConditionSlice::C1I => c.i == Some(true),
                    ConditionSlice::C1II => c.ii,
                    ConditionSlice::C1III => c.iii,
                    ConditionSlice::C1IV => c.iv,
                    _ => unreachable!(),
                }
            }
            ConditionSlice::C2I | ConditionSlice::C2II => {
                let c = c2_conditions(p, q).expect("nonlinear basis");
                match self {
                    ConditionSlice::C2I => c.i,
                    ConditionSlice::C2II => c.ii,
                    _ => unreachable!(),
                }
            }
        }
    }
}

/// Linear parts composed with the nonlinear pair during a cross-check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LinearPartRange {
    /// Identity only (the hypothesis shape of the c2 conditions).
    #[default]
    Identity,
    /// Every `(a, b, c, d)` over the coefficient set; singular ones are
    /// weeded out by the jacobian test.
    FromCoefficientSet,
}

/// Enumerate maps satisfying a condition hypothesis and check that every
/// one of them decomposes as a shear after normalization.
///
/// In the returned result, `jacobian_count` is the number of maps
/// satisfying the full hypothesis; `divergence_free_count` and
/// `divfree_jacobian_count` count how many of those are divergence-free
/// after normalization; `shear_decomposed_count` and `counterexamples`
/// record the decomposition verdicts.
pub fn cross_check_conditions(
    spec: &EnumerationSpec,
    slice: ConditionSlice,
    linear_parts: LinearPartRange,
    budget: u64,
) -> Result<EnumerationResult, HarnessError> {
    spec.validate()?;
    let (p_basis, q_basis) = slice.bases(spec.max_degree);
    let set = &spec.coefficient_set;
    let linear_count: u128 = match linear_parts {
        LinearPartRange::Identity => 1,
        LinearPartRange::FromCoefficientSet => (set.len() as u128).pow(4),
    };
    let pair_count = count_assignments(set.len(), p_basis.len() + q_basis.len());
    match &spec.mode {
        EnumerationMode::Exhaustive => {
            check_budget(pair_count.and_then(|n| n.checked_mul(linear_count)), budget)?;
            let p_total = count_assignments(set.len(), p_basis.len()).expect("checked") as u64;
            let q_total = count_assignments(set.len(), q_basis.len()).expect("checked") as u64;
            let mut result = EnumerationResult::default();
            for p_index in 0..p_total {
                let p = poly_from_assignment(&p_basis, set, p_index);
                for q_index in 0..q_total {
                    let q = poly_from_assignment(&q_basis, set, q_index);
                    let condition = slice.holds(&p, &q);
                    for_each_linear_part(linear_parts, set, |linear| {
                        record_cross_check(&p, &q, linear, condition, &mut result);
                    });
                }
            }
            result.counterexamples.sort();
            result.counterexamples.dedup();
            Ok(result)
        }
        EnumerationMode::Random { count, seed } => {
            check_budget(Some(u128::from(*count)), budget)?;
            let mut rng = seeded_rng(*seed);
            let mut result = EnumerationResult::default();
            for _ in 0..*count {
                let p = random_poly_from_set(&p_basis, set, &mut rng);
                let q = random_poly_from_set(&q_basis, set, &mut rng);
                let condition = slice.holds(&p, &q);
                let linear = match linear_parts {
                    LinearPartRange::Identity => jacobian::LinearPart::identity(),
                    LinearPartRange::FromCoefficientSet => jacobian::LinearPart::new(
                        set[rng.gen_range(0..set.len())].clone(),
                        set[rng.gen_range(0..set.len())].clone(),
                        set[rng.gen_range(0..set.len())].clone(),
                        set[rng.gen_range(0..set.len())].clone(),
                    ),
                };
                record_cross_check(&p, &q, &linear, condition, &mut result);
            }
            result.counterexamples.sort();
            result.counterexamples.dedup();
            Ok(result)
        }
    }
}

fn for_each_linear_part(
    range: LinearPartRange,
    set: &[Rational],
    mut visit: impl FnMut(&jacobian::LinearPart),
) {
    match range {
        LinearPartRange::Identity => visit(&jacobian::LinearPart::identity()),
        LinearPartRange::FromCoefficientSet => {
            for a in set {
                for b in set {
                    for c in set {
                        for d in set {
                            visit(&jacobian::LinearPart::new(
                                a.clone(),
                                b.clone(),
                                c.clone(),
                                d.clone(),
                            ));
                        }
                    }
                }
            }
        }
    }
}

fn record_cross_check(
    p: &Poly,
    q: &Poly,
    linear: &jacobian::LinearPart,
    condition: bool,
    result: &mut EnumerationResult,
) {
    result.total_candidates += 1;
    if !condition {
        return;
    }
    let linear_map = linear.as_map();
    let map = PolyMap::new(&linear_map.p + p, &linear_map.q + q);
    if !jacobian::is_jacobian_map(&map).is_jacobian {
        return;
    }
    // Full hypothesis satisfied.
    result.jacobian_count += 1;
    let normalized = normalize(&map).expect("jacobian maps have invertible linear part");
    if jacobian::is_divergence_free_jacobian(&normalized).is_divergence_free_jacobian {
        result.divergence_free_count += 1;
        result.divfree_jacobian_count += 1;
        result.in_set_divfree_jacobian_count += 1;
    }
    match decompose_map(&normalized) {
        DecomposeOutcome::Shear(_) | DecomposeOutcome::Linear => {
            result.shear_decomposed_count += 1;
            result.in_set_shear_decomposed_count += 1;
        }
        DecomposeOutcome::NotShear { .. } => result.counterexamples.push(Counterexample {
            p: crate::expr::format_poly(&map.p),
            q: crate::expr::format_poly(&map.q),
        }),
    }
}
