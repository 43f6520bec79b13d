//! Symbolic jacobian machinery: determinant, divergence, determinant-like
//! part, and normalization to a map that fixes the origin with identity
//! linear part.
//!
//! For a map `(x + p, y + q)` the determinant expands exactly as
//! `det J = 1 + (p_x + q_y) + (p_x q_y - p_y q_x)`; the two summands are
//! exposed separately as [`divergence`] and [`determinant_like_part`].

use crate::poly::{Monomial, Poly, PolyMap, Rational, Var};
use num::{One, Zero};
use thiserror::Error;

/// The 2x2 matrix of a map's degree-1 part, acting as
/// `(x, y) -> (a*x + b*y, c*x + d*y)`, with its determinant kept alongside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearPart {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    determinant: Rational,
}

impl LinearPart {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        let determinant = &a * &d - &b * &c;
        LinearPart {
            a,
            b,
            c,
            d,
            determinant,
        }
    }

    pub fn identity() -> Self {
        LinearPart::new(
            Rational::one(),
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
        )
    }

    /// Reads the jacobian matrix at the origin off the degree-1
    /// coefficients of the map.
    pub fn of_map_at_origin(m: &PolyMap) -> Self {
        let x = Monomial::new(1, 0);
        let y = Monomial::new(0, 1);
        LinearPart::new(
            m.p.coefficient(&x),
            m.p.coefficient(&y),
            m.q.coefficient(&x),
            m.q.coefficient(&y),
        )
    }

    pub fn determinant(&self) -> &Rational {
        &self.determinant
    }

    pub fn is_invertible(&self) -> bool {
        !self.determinant.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn as_map(&self) -> PolyMap {
        PolyMap::new(
            &Poly::x().scale(&self.a) + &Poly::y().scale(&self.b),
            &Poly::x().scale(&self.c) + &Poly::y().scale(&self.d),
        )
    }

    /// The inverse matrix as a map; `None` when singular.
    pub fn inverse_map(&self) -> Option<PolyMap> {
        if !self.is_invertible() {
            return None;
        }
        let det = &self.determinant;
        Some(PolyMap::new(
            &Poly::x().scale(&(&self.d / det)) + &Poly::y().scale(&(-&self.b / det)),
            &Poly::x().scale(&(-&self.c / det)) + &Poly::y().scale(&(&self.a / det)),
        ))
    }
}

/// Exact `P_x * Q_y - P_y * Q_x`.
pub fn jacobian_determinant(m: &PolyMap) -> Poly {
    let px = m.p.partial(Var::X);
    let py = m.p.partial(Var::Y);
    let qx = m.q.partial(Var::X);
    let qy = m.q.partial(Var::Y);
    &(&px * &qy) - &(&py * &qx)
}

/// Exact `p_x + q_y`.
pub fn divergence(p: &Poly, q: &Poly) -> Poly {
    &p.partial(Var::X) + &q.partial(Var::Y)
}

/// Exact `p_x * q_y - p_y * q_x`.
pub fn determinant_like_part(p: &Poly, q: &Poly) -> Poly {
    &(&p.partial(Var::X) * &q.partial(Var::Y)) - &(&p.partial(Var::Y) * &q.partial(Var::X))
}

/// Outcome of the jacobian-map test, carrying the determinant either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianWitness {
    pub is_jacobian: bool,
    pub determinant: Poly,
}

/// A map is a jacobian map when its jacobian determinant is a nonzero
/// constant. Constancy is decided syntactically on the canonical form.
pub fn is_jacobian_map(m: &PolyMap) -> JacobianWitness {
    let determinant = jacobian_determinant(m);
    let is_jacobian = determinant.is_constant() && !determinant.is_zero();
    JacobianWitness {
        is_jacobian,
        determinant,
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NormalizeError {
    /// The jacobian matrix at the origin is singular, so the map cannot be
    /// brought to identity linear part (and is not a jacobian map either).
    #[error("the linear part at the origin is singular")]
    SingularLinearPart,
}

/// Which side the inverse linear part is composed on. The default is the
/// right composition `psi = (m - m(0,0)) o linear^(-1)`; the left variant
/// `psi = linear^(-1) o (m - m(0,0))` is exposed for experimentation and
/// produces an equally valid normalized map.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NormalizationSide {
    #[default]
    Right,
    Left,
}

/// A map rewritten through `psi`, a map that fixes the origin and has
/// identity linear part: `m = psi(linear) + translation` for the right
/// composition, `m = linear(psi) + translation` for the left one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedMap {
    psi: PolyMap,
    linear: LinearPart,
    translation: (Rational, Rational),
    side: NormalizationSide,
}

impl NormalizedMap {
    pub fn psi(&self) -> &PolyMap {
        &self.psi
    }

    pub fn linear(&self) -> &LinearPart {
        &self.linear
    }

    pub fn translation(&self) -> &(Rational, Rational) {
        &self.translation
    }

    pub fn side(&self) -> NormalizationSide {
        self.side
    }

    /// The nonlinear remainder `(psi_p - x, psi_q - y)`; both components
    /// have order at least 2 or are zero.
    pub fn nonlinear_part(&self) -> (Poly, Poly) {
        (&self.psi.p - &Poly::x(), &self.psi.q - &Poly::y())
    }

    /// Recombine into the original map.
    pub fn reconstruct(&self) -> PolyMap {
        let composed = match self.side {
            NormalizationSide::Right => self.psi.compose(&self.linear.as_map()),
            NormalizationSide::Left => self.linear.as_map().compose(&self.psi),
        };
        composed.translate(&self.translation.0, &self.translation.1)
    }
}

/// Normalize `m` with the default right composition
/// `psi = (m - m(0,0)) o linear^(-1)`.
pub fn normalize(m: &PolyMap) -> Result<NormalizedMap, NormalizeError> {
    normalize_with(m, NormalizationSide::Right)
}

pub fn normalize_with(
    m: &PolyMap,
    side: NormalizationSide,
) -> Result<NormalizedMap, NormalizeError> {
    let linear = LinearPart::of_map_at_origin(m);
    let inverse = linear
        .inverse_map()
        .ok_or(NormalizeError::SingularLinearPart)?;
    let translation = (
        m.p.coefficient(&Monomial::ONE),
        m.q.coefficient(&Monomial::ONE),
    );
    let shifted = m.translate(&-translation.0.clone(), &-translation.1.clone());
    let psi = match side {
        NormalizationSide::Right => shifted.compose(&inverse),
        NormalizationSide::Left => inverse.compose(&shifted),
    };

    // Exact arithmetic guarantees these; a violation is an algebra bug.
    assert!(
        psi.p.coefficient(&Monomial::ONE).is_zero() && psi.q.coefficient(&Monomial::ONE).is_zero(),
        "normalized map must fix the origin"
    );
    assert!(
        LinearPart::of_map_at_origin(&psi).is_identity(),
        "normalized map must have identity linear part"
    );
    Ok(NormalizedMap {
        psi,
        linear,
        translation,
        side,
    })
}

/// Witness for the divergence-free jacobian test on a normalized map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceFreeWitness {
    pub is_divergence_free_jacobian: bool,
    pub determinant: Poly,
    pub divergence: Poly,
}

/// A normalized map is a divergence-free jacobian map when it is a
/// jacobian map and the divergence of its nonlinear part vanishes
/// identically.
pub fn is_divergence_free_jacobian(n: &NormalizedMap) -> DivergenceFreeWitness {
    let witness = is_jacobian_map(n.psi());
    let (p_star, q_star) = n.nonlinear_part();
    let div = divergence(&p_star, &q_star);
    DivergenceFreeWitness {
        is_divergence_free_jacobian: witness.is_jacobian && div.is_zero(),
        determinant: witness.determinant,
        divergence: div,
    }
}
