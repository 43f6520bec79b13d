//! Degree, order, gap-set and parity machinery, and the algebraic
//! sufficient conditions under which a jacobian map is guaranteed to be a
//! shear after normalization.

use crate::poly::Poly;
use std::collections::BTreeSet;
use thiserror::Error;

/// The set of non-negative differences of total degrees over distinct
/// monomial pairs of a polynomial. Empty for polynomials with fewer than
/// two monomials; contains 0 exactly when two distinct monomials share a
/// degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GapSet {
    gaps: BTreeSet<u32>,
}

impl GapSet {
    pub fn contains(&self, gap: u32) -> bool {
        self.gaps.contains(&gap)
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.gaps.iter().copied()
    }
}

impl FromIterator<u32> for GapSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        GapSet {
            gaps: iter.into_iter().collect(),
        }
    }
}

/// Gap set of `p`, computed from the distinct degrees present and their
/// multiplicities rather than a pairwise sweep.
pub fn gap_set(p: &Poly) -> GapSet {
    let degrees: Vec<u32> = p.terms().map(|(m, _)| m.degree()).collect();
    let distinct: BTreeSet<u32> = degrees.iter().copied().collect();
    let mut gaps = BTreeSet::new();
    if degrees.len() > distinct.len() {
        // Some degree carries at least two monomials.
        gaps.insert(0);
    }
    let distinct: Vec<u32> = distinct.into_iter().collect();
    for (i, &d1) in distinct.iter().enumerate() {
        for &d2 in &distinct[i + 1..] {
            gaps.insert(d2 - d1);
        }
    }
    GapSet { gaps }
}

/// The ordered gap condition for `(p, q)`: no monomial of `p` has
/// `degree - 1` inside the gap set of `q`.
pub fn gap_condition(p: &Poly, q: &Poly) -> bool {
    let gaps = gap_set(q);
    p.terms().all(|(m, _)| match m.degree() {
        0 => true,
        d => !gaps.contains(d - 1),
    })
}

/// Both `(p, q)` and `(q, p)` satisfy the gap condition.
pub fn symmetric_gap_condition(p: &Poly, q: &Poly) -> bool {
    gap_condition(p, q) && gap_condition(q, p)
}

/// Monomial parity flags, each quantified over every monomial present.
/// The zero polynomial carries every flag vacuously.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParityFlags {
    /// All total degrees even.
    pub even: bool,
    /// All total degrees odd.
    pub odd: bool,
    /// All powers of `x` even.
    pub x_even: bool,
    /// All powers of `x` odd.
    pub x_odd: bool,
    /// All powers of `y` even.
    pub y_even: bool,
    /// All powers of `y` odd.
    pub y_odd: bool,
}

pub fn parity_class(p: &Poly) -> ParityFlags {
    let mut flags = ParityFlags {
        even: true,
        odd: true,
        x_even: true,
        x_odd: true,
        y_even: true,
        y_odd: true,
    };
    for (m, _) in p.terms() {
        flags.even &= m.degree() % 2 == 0;
        flags.odd &= m.degree() % 2 == 1;
        flags.x_even &= m.exp_x % 2 == 0;
        flags.x_odd &= m.exp_x % 2 == 1;
        flags.y_even &= m.exp_y % 2 == 0;
        flags.y_odd &= m.exp_y % 2 == 1;
    }
    flags
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ConditionsError {
    /// A nonzero component has order 0 or 1: the caller passed something
    /// other than the nonlinear part of a map.
    #[error("nonlinear component has order {order}, expected at least 2")]
    OrderTooLow { order: u32 },
}

fn require_nonlinear(p: &Poly) -> Result<(), ConditionsError> {
    match p.order() {
        Some(order) if order < 2 => Err(ConditionsError::OrderTooLow { order }),
        _ => Ok(()),
    }
}

/// The four alternative hypotheses on nonlinear parts `(p, q)` that force
/// the normalized map to be a shear. Condition `i` compares degrees and
/// orders, so it is `None` ("not applicable") when either component is
/// zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct C1Conditions {
    /// `max(d(p), d(q)) < o(p) + o(q) - 1`.
    pub i: Option<bool>,
    /// Both components even.
    pub ii: bool,
    /// `p` odd, `q` even, and `(p, q)` satisfies the gap condition.
    pub iii: bool,
    /// `(p, q)` satisfies the symmetric gap condition.
    pub iv: bool,
}

pub fn c1_conditions(p: &Poly, q: &Poly) -> Result<C1Conditions, ConditionsError> {
    require_nonlinear(p)?;
    require_nonlinear(q)?;
    let parity_p = parity_class(p);
    let parity_q = parity_class(q);
    let i = match (p.degree(), q.degree(), p.order(), q.order()) {
        (Some(dp), Some(dq), Some(op), Some(oq)) => Some(dp.max(dq) < op + oq - 1),
        _ => None,
    };
    Ok(C1Conditions {
        i,
        ii: parity_p.even && parity_q.even,
        iii: parity_p.odd && parity_q.even && gap_condition(p, q),
        iv: symmetric_gap_condition(p, q),
    })
}

/// The two parity hypotheses that force an already-normalized map to be a
/// shear. These are meaningful only on maps of the form `(x + p, y + q)`:
/// the symmetry is not preserved by composition with linear maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct C2Conditions {
    /// `p` x-even and `q` x-odd.
    pub i: bool,
    /// `p` y-odd and `q` y-even.
    pub ii: bool,
}

pub fn c2_conditions(p: &Poly, q: &Poly) -> Result<C2Conditions, ConditionsError> {
    require_nonlinear(p)?;
    require_nonlinear(q)?;
    let parity_p = parity_class(p);
    let parity_q = parity_class(q);
    Ok(C2Conditions {
        i: parity_p.x_even && parity_q.x_odd,
        ii: parity_p.y_odd && parity_q.y_even,
    })
}
