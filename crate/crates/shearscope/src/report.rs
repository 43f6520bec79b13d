//! The classification pipeline and its report documents.
//!
//! [`classify`] runs the whole analysis on a parsed map: translation and
//! linear part, jacobian and divergence-free tests, shear decomposition,
//! inverse, normal form, and the algebraic sufficient conditions. The
//! report types serialize to a schema-stable JSON document (struct field
//! order is fixed, rationals are rendered as `"num/den"` strings, maps as
//! ordered arrays), so identical inputs produce byte-identical output.

use crate::conditions::{
    c1_conditions, c2_conditions, gap_set, C1Conditions,
    C2Conditions, GapSet,
};
use crate::expr::format_poly;
use crate::harness::{EnumerationResult, EnumerationSpec};
use crate::jacobian::{
    is_divergence_free_jacobian, is_jacobian_map, jacobian_determinant, normalize, LinearPart,
    NormalizedMap,
};
use crate::poly::{Monomial, Poly, PolyMap, Rational};
use crate::shear::{
    conjugate_to_normal_form, decompose_map, reconstruct, shear_inverse, DecomposeOutcome,
    ShearDecomposition, ShearNormalForm,
};
use serde::Serialize;
use thiserror::Error;

/// Final classification of a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Jacobian, divergence-free, with a nontrivial shear decomposition.
    Shear,
    /// The nonlinear part is identically zero.
    Linear,
    /// Jacobian map whose nonlinear part has nonzero divergence.
    JacobianNotDivergenceFree,
    /// The jacobian determinant is not a nonzero constant.
    NotJacobian,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Shear => "shear",
            Verdict::Linear => "linear",
            Verdict::JacobianNotDivergenceFree => "jacobian_not_divergence_free",
            Verdict::NotJacobian => "not_jacobian",
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    /// An exact self-check failed; indicates an arithmetic bug.
    #[error("internal verification failed: {0}")]
    Internal(String),
}

/// Conditions evaluated on both sides of the normalization: the c1
/// flags on the map as given (minus translation and linear part), the c2
/// flags on the normalized map, whose shape they require.
#[derive(Clone, Debug)]
pub struct ConditionsSummary {
    pub nonlinear_p: Poly,
    pub nonlinear_q: Poly,
    pub c1: C1Conditions,
    pub c2: Option<C2Conditions>,
    pub gap_p: GapSet,
    pub gap_q: GapSet,
}

/// Everything the pipeline established about one map.
#[derive(Clone, Debug)]
pub struct Classification {
    pub map: PolyMap,
    pub translation: (Rational, Rational),
    pub linear: LinearPart,
    pub determinant: Poly,
    pub is_jacobian: bool,
    /// `None` exactly when the linear part is singular.
    pub normalized: Option<NormalizedMap>,
    /// Divergence of the normalized nonlinear part.
    pub divergence: Option<Poly>,
    pub decomposition: Option<ShearDecomposition>,
    /// Inverse of the full input map, present for shear and linear verdicts.
    pub inverse: Option<PolyMap>,
    pub normal_form: Option<ShearNormalForm>,
    pub conditions: ConditionsSummary,
    pub verdict: Verdict,
}

impl Classification {
    pub fn is_singular(&self) -> bool {
        self.normalized.is_none()
    }
}

fn conditions_summary(
    map: &PolyMap,
    linear: &LinearPart,
    normalized: Option<&NormalizedMap>,
) -> ConditionsSummary {
    // Strip translation and the degree-1 part exactly; what is left has
    // order at least 2 by construction.
    let linear_map = linear.as_map();
    let nonlinear_p = &(&map.p - &Poly::constant(map.p.coefficient(&Monomial::ONE))) - &linear_map.p;
    let nonlinear_q = &(&map.q - &Poly::constant(map.q.coefficient(&Monomial::ONE))) - &linear_map.q;
    let c1 = c1_conditions(&nonlinear_p, &nonlinear_q)
        .expect("stripped parts have order at least 2");
    let c2 = normalized.map(|n| {
        let (p_star, q_star) = n.nonlinear_part();
        c2_conditions(&p_star, &q_star).expect("normalized parts have order at least 2")
    });
    let gap_p = gap_set(&nonlinear_p);
    let gap_q = gap_set(&nonlinear_q);
    ConditionsSummary {
        nonlinear_p,
        nonlinear_q,
        c1,
        c2,
        gap_p,
        gap_q,
    }
}

/// Invert the full map `translation + psi(linear)` given the verified
/// inverse of `psi`, then check the composition identity on both sides.
fn full_inverse(
    map: &PolyMap,
    n: &NormalizedMap,
    psi_inverse: PolyMap,
) -> Result<PolyMap, ClassifyError> {
    let untranslate = PolyMap::identity().translate(&-n.translation().0.clone(), &-n.translation().1.clone());
    let linear_inverse = n
        .linear()
        .inverse_map()
        .expect("normalized maps have invertible linear part");
    let inverse = linear_inverse.compose(&psi_inverse.compose(&untranslate));
    if map.compose(&inverse) != PolyMap::identity() || inverse.compose(map) != PolyMap::identity()
    {
        return Err(ClassifyError::Internal(
            "map inverse does not compose to the identity".into(),
        ));
    }
    Ok(inverse)
}

/// Run the full pipeline: translate, normalize, test, decompose, invert,
/// conjugate, and evaluate the sufficient conditions.
pub fn classify(map: &PolyMap) -> Result<Classification, ClassifyError> {
    let translation = (
        map.p.coefficient(&Monomial::ONE),
        map.q.coefficient(&Monomial::ONE),
    );
    let linear = LinearPart::of_map_at_origin(map);
    let determinant = jacobian_determinant(map);
    let is_jacobian = is_jacobian_map(map).is_jacobian;

    let normalized = normalize(map).ok();
    let conditions = conditions_summary(map, &linear, normalized.as_ref());

    let Some(n) = normalized else {
        // Singular linear part: det J vanishes at the origin, so the map
        // cannot be a jacobian map.
        debug_assert!(!is_jacobian);
        return Ok(Classification {
            map: map.clone(),
            translation,
            linear,
            determinant,
            is_jacobian,
            normalized: None,
            divergence: None,
            decomposition: None,
            inverse: None,
            normal_form: None,
            conditions,
            verdict: Verdict::NotJacobian,
        });
    };

    let witness = is_divergence_free_jacobian(&n);
    let outcome = decompose_map(&n);

    let (verdict, decomposition, inverse, normal_form) = match outcome {
        DecomposeOutcome::Shear(d) => {
            if &reconstruct(&d) != n.psi() {
                return Err(ClassifyError::Internal(
                    "decomposition does not reproduce the normalized map".into(),
                ));
            }
            let psi_inverse = shear_inverse(&d)
                .map_err(|e| ClassifyError::Internal(e.to_string()))?;
            let inverse = full_inverse(map, &n, psi_inverse)?;
            let normal_form =
                conjugate_to_normal_form(&d).map_err(|e| ClassifyError::Internal(e.to_string()))?;
            (Verdict::Shear, Some(d), Some(inverse), Some(normal_form))
        }
        DecomposeOutcome::Linear => {
            let inverse = full_inverse(map, &n, PolyMap::identity())?;
            (Verdict::Linear, None, Some(inverse), None)
        }
        DecomposeOutcome::NotShear { degree } => {
            if !is_jacobian {
                (Verdict::NotJacobian, None, None, None)
            } else if witness.divergence.is_zero() {
                // A divergence-free jacobian map must decompose; reaching
                // this branch means the arithmetic is broken.
                return Err(ClassifyError::Internal(format!(
                    "divergence-free jacobian map failed decomposition at degree {degree}"
                )));
            } else {
                (Verdict::JacobianNotDivergenceFree, None, None, None)
            }
        }
    };

    Ok(Classification {
        map: map.clone(),
        translation,
        linear,
        determinant,
        is_jacobian,
        normalized: Some(n),
        divergence: Some(witness.divergence),
        decomposition,
        inverse,
        normal_form,
        conditions,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// JSON documents
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct MapDocument {
    pub p: String,
    pub q: String,
}

impl MapDocument {
    fn of(map: &PolyMap) -> Self {
        MapDocument {
            p: format_poly(&map.p),
            q: format_poly(&map.q),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearPartDocument {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub determinant: String,
}

impl LinearPartDocument {
    fn of(linear: &LinearPart) -> Self {
        LinearPartDocument {
            a: linear.a.to_string(),
            b: linear.b.to_string(),
            c: linear.c.to_string(),
            d: linear.d.to_string(),
            determinant: linear.determinant().to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientEntry {
    pub degree: u32,
    pub value: String,
}

/// The `shear` field: a decomposition, or the marker for maps with no
/// nonlinear part (trivially shear, direction undefined).
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ShearDocument {
    Decomposition {
        alpha: String,
        beta: String,
        epsilons: Vec<CoefficientEntry>,
    },
    Marker(&'static str),
}

pub const LINEAR_MAP_NO_DIRECTION: &str = "linear_map_no_direction";

#[derive(Clone, Debug, Serialize)]
pub struct NormalFormDocument {
    #[serde(rename = "T")]
    pub t: LinearPartDocument,
    pub g: Vec<CoefficientEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreesAndOrdersDocument {
    pub d_p: Option<u32>,
    pub o_p: Option<u32>,
    pub d_q: Option<u32>,
    pub o_q: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapSetsDocument {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionsDocument {
    pub degrees_and_orders: DegreesAndOrdersDocument,
    pub c1_i: Option<bool>,
    pub c1_ii: bool,
    pub c1_iii: bool,
    pub c1_iv: bool,
    pub c2_i: Option<bool>,
    pub c2_ii: Option<bool>,
    pub gap_sets: GapSetsDocument,
}

impl ConditionsDocument {
    fn of(summary: &ConditionsSummary) -> Self {
        ConditionsDocument {
            degrees_and_orders: DegreesAndOrdersDocument {
                d_p: summary.nonlinear_p.degree(),
                o_p: summary.nonlinear_p.order(),
                d_q: summary.nonlinear_q.degree(),
                o_q: summary.nonlinear_q.order(),
            },
            c1_i: summary.c1.i,
            c1_ii: summary.c1.ii,
            c1_iii: summary.c1.iii,
            c1_iv: summary.c1.iv,
            c2_i: summary.c2.map(|c| c.i),
            c2_ii: summary.c2.map(|c| c.ii),
            gap_sets: GapSetsDocument {
                p: summary.gap_p.iter().collect(),
                q: summary.gap_q.iter().collect(),
            },
        }
    }
}

/// The full `classify` document.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationDocument {
    pub input: MapDocument,
    pub translation: (String, String),
    pub linear_part: LinearPartDocument,
    pub determinant: String,
    pub divergence: Option<String>,
    pub verdict: Verdict,
    pub shear: Option<ShearDocument>,
    pub inverse: Option<MapDocument>,
    pub normal_form: Option<NormalFormDocument>,
    pub conditions: ConditionsDocument,
}

fn shear_document(c: &Classification) -> Option<ShearDocument> {
    match (&c.decomposition, c.verdict) {
        (Some(d), _) => Some(ShearDocument::Decomposition {
            alpha: d.direction().alpha().to_string(),
            beta: d.direction().beta().to_string(),
            epsilons: d
                .epsilons()
                .iter()
                .map(|(&degree, value)| CoefficientEntry {
                    degree,
                    value: value.to_string(),
                })
                .collect(),
        }),
        (None, Verdict::Linear) => Some(ShearDocument::Marker(LINEAR_MAP_NO_DIRECTION)),
        _ => None,
    }
}

fn normal_form_document(nf: &ShearNormalForm) -> NormalFormDocument {
    NormalFormDocument {
        t: LinearPartDocument::of(&nf.change_of_variables),
        g: nf
            .g
            .iter()
            .map(|(&degree, value)| CoefficientEntry {
                degree,
                value: value.to_string(),
            })
            .collect(),
    }
}

impl ClassificationDocument {
    pub fn of(c: &Classification) -> Self {
        ClassificationDocument {
            input: MapDocument::of(&c.map),
            translation: (c.translation.0.to_string(), c.translation.1.to_string()),
            linear_part: LinearPartDocument::of(&c.linear),
            determinant: format_poly(&c.determinant),
            divergence: c.divergence.as_ref().map(format_poly),
            verdict: c.verdict,
            shear: shear_document(c),
            inverse: c.inverse.as_ref().map(MapDocument::of),
            normal_form: c.normal_form.as_ref().map(normal_form_document),
            conditions: ConditionsDocument::of(&c.conditions),
        }
    }
}

/// Partial document for `decompose`.
#[derive(Clone, Debug, Serialize)]
pub struct DecomposeDocument {
    pub input: MapDocument,
    pub translation: (String, String),
    pub linear_part: LinearPartDocument,
    pub verdict: Verdict,
    pub shear: Option<ShearDocument>,
}

impl DecomposeDocument {
    pub fn of(c: &Classification) -> Self {
        DecomposeDocument {
            input: MapDocument::of(&c.map),
            translation: (c.translation.0.to_string(), c.translation.1.to_string()),
            linear_part: LinearPartDocument::of(&c.linear),
            verdict: c.verdict,
            shear: shear_document(c),
        }
    }
}

/// Partial document for `invert`.
#[derive(Clone, Debug, Serialize)]
pub struct InvertDocument {
    pub input: MapDocument,
    pub verdict: Verdict,
    pub inverse: Option<MapDocument>,
}

impl InvertDocument {
    pub fn of(c: &Classification) -> Self {
        InvertDocument {
            input: MapDocument::of(&c.map),
            verdict: c.verdict,
            inverse: c.inverse.as_ref().map(MapDocument::of),
        }
    }
}

/// Partial document for `normal-form`.
#[derive(Clone, Debug, Serialize)]
pub struct NormalFormCommandDocument {
    pub input: MapDocument,
    pub verdict: Verdict,
    pub normal_form: Option<NormalFormDocument>,
}

impl NormalFormCommandDocument {
    pub fn of(c: &Classification) -> Self {
        NormalFormCommandDocument {
            input: MapDocument::of(&c.map),
            verdict: c.verdict,
            normal_form: c.normal_form.as_ref().map(normal_form_document),
        }
    }
}

/// Partial document for `check-conditions`.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionsCommandDocument {
    pub input: MapDocument,
    pub translation: (String, String),
    pub linear_part: LinearPartDocument,
    pub conditions: ConditionsDocument,
}

impl ConditionsCommandDocument {
    pub fn of(c: &Classification) -> Self {
        ConditionsCommandDocument {
            input: MapDocument::of(&c.map),
            translation: (c.translation.0.to_string(), c.translation.1.to_string()),
            linear_part: LinearPartDocument::of(&c.linear),
            conditions: ConditionsDocument::of(&c.conditions),
        }
    }
}

/// Self-describing enumeration output.
#[derive(Clone, Debug, Serialize)]
pub struct EnumerationDocument {
    pub command: String,
    pub max_degree: u32,
    pub coefficient_set: Vec<String>,
    pub mode: EnumerationModeDocument,
    pub scheme: Option<String>,
    pub slice: Option<String>,
    pub linear_parts: Option<String>,
    pub result: EnumerationResult,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationModeDocument {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

impl EnumerationDocument {
    pub fn new(
        command: &str,
        spec: &EnumerationSpec,
        scheme: Option<&str>,
        slice: Option<&str>,
        linear_parts: Option<&str>,
        result: EnumerationResult,
    ) -> Self {
        EnumerationDocument {
            command: command.to_string(),
            max_degree: spec.max_degree,
            coefficient_set: spec.coefficient_set.iter().map(|c| c.to_string()).collect(),
            mode: match spec.mode {
                crate::harness::EnumerationMode::Exhaustive => {
                    EnumerationModeDocument::Exhaustive
                }
                crate::harness::EnumerationMode::Random { count, seed } => {
                    EnumerationModeDocument::Random { count, seed }
                }
            },
            scheme: scheme.map(str::to_string),
            slice: slice.map(str::to_string),
            linear_parts: linear_parts.map(str::to_string),
            result,
        }
    }
}

/// Pretty JSON with a trailing newline; byte-identical for equal reports.
pub fn to_json_string<T: Serialize>(document: &T) -> String {
    let mut out = serde_json::to_string_pretty(document).expect("report types serialize");
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// Human-readable rendering
// ---------------------------------------------------------------------------

fn opt_bool(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

fn yesno(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

pub fn render_conditions(summary: &ConditionsSummary) -> String {
    let gaps = |g: &GapSet| {
        let entries: Vec<String> = g.iter().map(|v| v.to_string()).collect();
        format!("{{{}}}", entries.join(", "))
    };
    let mut out = String::new();
    out.push_str(&format!(
        "nonlinear parts: p = {}, q = {}\n",
        format_poly(&summary.nonlinear_p),
        format_poly(&summary.nonlinear_q)
    ));
    out.push_str(&format!(
        "gap sets: G(p) = {}, G(q) = {}\n",
        gaps(&summary.gap_p),
        gaps(&summary.gap_q)
    ));
    out.push_str(&format!(
        "c1: i = {}, ii = {}, iii = {}, iv = {}\n",
        opt_bool(summary.c1.i),
        yesno(summary.c1.ii),
        yesno(summary.c1.iii),
        yesno(summary.c1.iv)
    ));
    out.push_str(&format!(
        "c2 (on normalized map): i = {}, ii = {}\n",
        opt_bool(summary.c2.map(|c| c.i)),
        opt_bool(summary.c2.map(|c| c.ii))
    ));
    out
}

pub fn render_classification(c: &Classification) -> String {
    let mut out = String::new();
    out.push_str(&format!("map: {}\n", c.map));
    out.push_str(&format!(
        "translation: ({}, {})\n",
        c.translation.0, c.translation.1
    ));
    out.push_str(&format!(
        "linear part: [{}, {}; {}, {}], determinant {}\n",
        c.linear.a,
        c.linear.b,
        c.linear.c,
        c.linear.d,
        c.linear.determinant()
    ));
    out.push_str(&format!(
        "det J = {} ({})\n",
        format_poly(&c.determinant),
        if c.is_jacobian {
            "jacobian map"
        } else {
            "not a jacobian map"
        }
    ));
    match &c.divergence {
        Some(div) => out.push_str(&format!(
            "divergence of normalized nonlinear part: {}\n",
            format_poly(div)
        )),
        None => out.push_str("normalization impossible: singular linear part\n"),
    }
    out.push_str(&format!("verdict: {}\n", c.verdict.as_str()));
    if let Some(d) = &c.decomposition {
        out.push_str(&format!(
            "direction: (alpha, beta) = ({}, {})\n",
            d.direction().alpha(),
            d.direction().beta()
        ));
        let eps: Vec<String> = d
            .epsilons()
            .iter()
            .map(|(i, e)| format!("eps_{i} = {e}"))
            .collect();
        out.push_str(&format!("epsilons: {}\n", eps.join(", ")));
    }
    if let Some(inv) = &c.inverse {
        out.push_str(&format!("inverse: {inv}\n"));
    }
    if let Some(nf) = &c.normal_form {
        let t = &nf.change_of_variables;
        out.push_str(&format!(
            "normal form: T = ({}, {}), g(u) = {}\n",
            format_poly(&t.as_map().p),
            format_poly(&t.as_map().q),
            crate::expr::format_univariate(nf.g.iter(), "u")
        ));
    }
    out.push_str(&render_conditions(&c.conditions));
    out
}
