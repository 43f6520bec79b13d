//! Sparse bivariate polynomials over arbitrary-precision rationals.
//!
//! A [`Poly`] is a finite map from monomials `x^i y^j` to nonzero rational
//! coefficients, kept in a canonical graded order: ascending total degree,
//! and inside a degree the power of `x` descending (`x^2` before `x*y`
//! before `y^2`). Because coefficients are always stored fully reduced and
//! zero terms are dropped on every operation, structural equality of two
//! polynomials coincides with mathematical equality, and "is a constant" is
//! a plain syntactic check on the term map.

use num::{BigInt, BigRational, Integer, One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact scalar type used for every coefficient in the crate.
pub type Rational = BigRational;

/// Integer as a `Rational`.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Fraction as a `Rational`, reduced on construction.
///
/// Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A power product `x^exp_x * y^exp_y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exp_x: u32,
    pub exp_y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exp_x: 0, exp_y: 0 };

    pub fn new(exp_x: u32, exp_y: u32) -> Self {
        Monomial { exp_x, exp_y }
    }

    pub fn degree(&self) -> u32 {
        self.exp_x + self.exp_y
    }

    pub fn is_constant(&self) -> bool {
        self.exp_x == 0 && self.exp_y == 0
    }
}

/// Graded order: total degree first, then descending power of `x`. The
/// constant monomial sorts first; within a degree `x^d` comes before
/// `x^(d-1)*y` and so on down to `y^d`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.exp_y).cmp(&(other.degree(), other.exp_y))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which variable a formal operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Sparse bivariate polynomial with rational coefficients.
///
/// Invariant: no stored coefficient is zero, so derived equality is
/// canonical.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::ONE, c);
        p
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::term(Monomial::new(1, 0), Rational::one())
    }

    /// The polynomial `y`.
    pub fn y() -> Self {
        Poly::term(Monomial::new(0, 1), Rational::one())
    }

    /// Single-term polynomial `c * m` (zero coefficient gives zero).
    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    /// Build a polynomial from arbitrary terms, merging duplicates and
    /// dropping cancellations.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial and for a lone constant term.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_constant)
    }

    /// The value of a constant polynomial, `None` if any variable occurs.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.coefficient(&Monomial::ONE))
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of `m`, zero if absent.
    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest total degree, `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Binary exponentiation; `p^0 = 1`.
    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact formal partial derivative.
    pub fn partial(&self, var: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            match var {
                Var::X if m.exp_x > 0 => out.add_term(
                    Monomial::new(m.exp_x - 1, m.exp_y),
                    c * Rational::from_integer(BigInt::from(m.exp_x)),
                ),
                Var::Y if m.exp_y > 0 => out.add_term(
                    Monomial::new(m.exp_x, m.exp_y - 1),
                    c * Rational::from_integer(BigInt::from(m.exp_y)),
                ),
                _ => {}
            }
        }
        out
    }

    /// Exact value at a rational point, evaluated by nested Horner.
    pub fn evaluate(&self, at_x: &Rational, at_y: &Rational) -> Rational {
        // Group by exp_x; Horner in x over inner Horner evaluations in y.
        let mut by_x: BTreeMap<u32, Vec<(u32, &Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_x.entry(m.exp_x).or_default().push((m.exp_y, c));
        }
        let mut acc = Rational::zero();
        let mut prev: Option<u32> = None;
        for (&ex, group) in by_x.iter().rev() {
            let inner = horner_scalar(group, at_y);
            match prev {
                None => acc = inner,
                Some(pe) => acc = acc * pow_rational(at_x, pe - ex) + inner,
            }
            prev = Some(ex);
        }
        match prev {
            Some(e) if e > 0 => acc * pow_rational(at_x, e),
            _ => acc,
        }
    }

    /// Split into nonzero homogeneous pieces, sorted by ascending degree.
    /// The pieces sum back to `self`.
    pub fn homogeneous_components(&self) -> Vec<(u32, Poly)> {
        let mut by_degree: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_degree
                .entry(m.degree())
                .or_insert_with(Poly::zero)
                .add_term(*m, c.clone());
        }
        by_degree.into_iter().collect()
    }

    /// The homogeneous piece of the given degree (possibly zero).
    pub fn homogeneous_component(&self, degree: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// True if every monomial has the given total degree (zero qualifies).
    pub fn is_homogeneous_of_degree(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    /// Exact substitution `self(at_x, at_y)` by nested Horner, which keeps
    /// intermediate expression swell bounded. The chains run on the
    /// integer-scaled representation so denominators are cleared once per
    /// operand rather than reduced on every partial product.
    pub fn substitute(&self, at_x: &Poly, at_y: &Poly) -> Poly {
        let base_x = ScaledTerms::from_poly(at_x);
        let base_y = ScaledTerms::from_poly(at_y);
        let mut by_x: BTreeMap<u32, Vec<(u32, &Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_x.entry(m.exp_x).or_default().push((m.exp_y, c));
        }
        let mut acc = ScaledTerms::zero();
        let mut prev: Option<u32> = None;
        for (&ex, group) in by_x.iter().rev() {
            let inner = horner_scaled(group, &base_y);
            match prev {
                None => acc = inner,
                Some(pe) => acc = acc.mul(&base_x.pow(pe - ex)).add(&inner),
            }
            prev = Some(ex);
        }
        match prev {
            Some(e) if e > 0 => acc.mul(&base_x.pow(e)).into_poly(),
            _ => acc.into_poly(),
        }
    }
}

/// A polynomial with integer coefficients over a common positive
/// denominator, kept sorted in the canonical monomial order. The workhorse
/// of multiplication and substitution: all inner arithmetic is `BigInt`,
/// and the single gcd reduction per term happens on conversion back.
#[derive(Clone, Debug)]
struct ScaledTerms {
    terms: Vec<(Monomial, BigInt)>,
    den: BigInt,
}

impl ScaledTerms {
    fn zero() -> Self {
        ScaledTerms {
            terms: Vec::new(),
            den: BigInt::one(),
        }
    }

    fn constant(c: &Rational) -> Self {
        if c.is_zero() {
            return ScaledTerms::zero();
        }
        ScaledTerms {
            terms: vec![(Monomial::ONE, c.numer().clone())],
            den: c.denom().clone(),
        }
    }

    fn from_poly(p: &Poly) -> Self {
        let den = p
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = p
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&den / c.denom())))
            .collect();
        ScaledTerms { terms, den }
    }

    fn into_poly(self) -> Poly {
        Poly {
            terms: self
                .terms
                .into_iter()
                .map(|(m, n)| (m, Rational::new(n, self.den.clone())))
                .collect(),
        }
    }

    fn mul(&self, other: &ScaledTerms) -> ScaledTerms {
        if self.terms.is_empty() || other.terms.is_empty() {
            return ScaledTerms::zero();
        }
        let mut partials = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                partials.push((
                    Monomial::new(ma.exp_x + mb.exp_x, ma.exp_y + mb.exp_y),
                    ca * cb,
                ));
            }
        }
        partials.sort_unstable_by_key(|(m, _)| *m);
        let mut terms: Vec<(Monomial, BigInt)> = Vec::with_capacity(partials.len());
        for (m, c) in partials {
            match terms.last_mut() {
                Some((last, sum)) if *last == m => *sum += c,
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        ScaledTerms {
            terms,
            den: &self.den * &other.den,
        }
    }

    fn add(&self, other: &ScaledTerms) -> ScaledTerms {
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let scale = |terms: &[(Monomial, BigInt)], f: &BigInt| -> Vec<(Monomial, BigInt)> {
            if f.is_one() {
                terms.to_vec()
            } else {
                terms.iter().map(|(m, c)| (*m, c * f)).collect()
            }
        };
        let a = scale(&self.terms, &fa);
        let b = scale(&other.terms, &fb);
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let sum = &a[i].1 + &b[j].1;
                    if !sum.is_zero() {
                        terms.push((a[i].0, sum));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&a[i..]);
        terms.extend_from_slice(&b[j..]);
        ScaledTerms { terms, den }
    }

    fn pow(&self, n: u32) -> ScaledTerms {
        match n {
            0 => ScaledTerms {
                terms: vec![(Monomial::ONE, BigInt::one())],
                den: BigInt::one(),
            },
            1 => self.clone(),
            _ => {
                let mut result: Option<ScaledTerms> = None;
                let mut base = self.clone();
                let mut e = n;
                while e > 0 {
                    if e & 1 == 1 {
                        result = Some(match result {
                            None => base.clone(),
                            Some(r) => r.mul(&base),
                        });
                    }
                    e >>= 1;
                    if e > 0 {
                        base = base.mul(&base);
                    }
                }
                result.expect("n > 0")
            }
        }
    }
}

/// Sparse Horner chain over `(exponent, coefficient)` pairs sorted
/// ascending, on the scaled representation.
fn horner_scaled(group: &[(u32, &Rational)], base: &ScaledTerms) -> ScaledTerms {
    let mut acc = ScaledTerms::zero();
    let mut prev: Option<u32> = None;
    for &(e, c) in group.iter().rev() {
        let coeff = ScaledTerms::constant(c);
        match prev {
            None => acc = coeff,
            Some(pe) => acc = acc.mul(&base.pow(pe - e)).add(&coeff),
        }
        prev = Some(e);
    }
    match prev {
        Some(e) if e > 0 => acc.mul(&base.pow(e)),
        _ => acc,
    }
}

/// `base^n` by binary exponentiation.
pub fn pow_rational(base: &Rational, n: u32) -> Rational {
    let mut result = Rational::one();
    let mut b = base.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

/// Sparse Horner over a group of `(exponent, coefficient)` pairs sorted
/// ascending; evaluates `sum c_e * base^e` exactly.
fn horner_scalar(group: &[(u32, &Rational)], base: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut prev: Option<u32> = None;
    for &(e, c) in group.iter().rev() {
        match prev {
            None => acc = c.clone(),
            Some(pe) => acc = acc * pow_rational(base, pe - e) + c,
        }
        prev = Some(e);
    }
    match prev {
        Some(e) if e > 0 => acc * pow_rational(base, e),
        _ => acc,
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        ScaledTerms::from_poly(self)
            .mul(&ScaledTerms::from_poly(rhs))
            .into_poly()
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// A pair `(P, Q)` of polynomials, read as the map `(x, y) -> (P, Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMap {
    pub p: Poly,
    pub q: Poly,
}

impl PolyMap {
    pub fn new(p: Poly, q: Poly) -> Self {
        PolyMap { p, q }
    }

    /// The map `(x, y) -> (x, y)`.
    pub fn identity() -> Self {
        PolyMap::new(Poly::x(), Poly::y())
    }

    pub fn is_identity(&self) -> bool {
        self.p == Poly::x() && self.q == Poly::y()
    }

    /// Exact composition `outer(inner)`: substitutes `inner`'s components
    /// for the variables of `outer`.
    pub fn compose(&self, inner: &PolyMap) -> PolyMap {
        PolyMap::new(
            self.p.substitute(&inner.p, &inner.q),
            self.q.substitute(&inner.p, &inner.q),
        )
    }

    pub fn evaluate(&self, at_x: &Rational, at_y: &Rational) -> (Rational, Rational) {
        (self.p.evaluate(at_x, at_y), self.q.evaluate(at_x, at_y))
    }

    /// Component-wise shift by constants.
    pub fn translate(&self, dx: &Rational, dy: &Rational) -> PolyMap {
        PolyMap::new(
            &self.p + &Poly::constant(dx.clone()),
            &self.q + &Poly::constant(dy.clone()),
        )
    }

    /// Largest component degree, `None` for the zero map.
    pub fn degree(&self) -> Option<u32> {
        self.p.degree().max(self.q.degree())
    }
}
