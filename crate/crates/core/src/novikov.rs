//! Truncated formal series over the rationals in lattice monomials `z^v`
//! with Novikov exponents `T^a`.
//!
//! Two truncation modes are supported: the energy filtration (drop terms
//! with `texp ≥ λ`) and the classical degree filtration (drop terms with
//! total z-degree `> k`). All coefficients and exponents stay rational.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::BoundaryVector;
use crate::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("cutoff mismatch between operands")]
    CutoffMismatch,
    #[error("series is not 1 + (positive order): {0}")]
    NotOneModPositive(String),
    #[error("series has a constant term; exp requires none")]
    ConstantTerm,
    #[error("iteration guard tripped; series does not vanish under powers")]
    NonNilpotent,
}

/// Truncation mode and level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cutoff {
    /// Keep terms with `texp < λ`.
    Energy(Rat),
    /// Keep terms with total z-degree `≤ k`.
    Degree(u64),
}

impl Cutoff {
    fn keeps(&self, zvec: BoundaryVector, texp: &Rat) -> bool {
        match self {
            Cutoff::Energy(lambda) => texp < lambda,
            Cutoff::Degree(k) => zvec.degree() <= *k,
        }
    }
}

/// A single normalized term `coeff · z^zvec · T^texp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Rat,
    pub zvec: BoundaryVector,
    pub texp: Rat,
}

type TermKey = (Rat, (i64, i64));

/// A truncated series. Terms are keyed by `(texp, zvec)` so equality and
/// rendering are canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    cutoff: Cutoff,
    terms: BTreeMap<TermKey, Rat>,
}

impl TruncatedSeries {
    pub fn zero(cutoff: Cutoff) -> Self {
        TruncatedSeries { cutoff, terms: BTreeMap::new() }
    }

    pub fn one(cutoff: Cutoff) -> Self {
        Self::monomial(cutoff, Rat::one(), BoundaryVector::ZERO, Rat::zero())
    }

    pub fn monomial(cutoff: Cutoff, coeff: Rat, zvec: BoundaryVector, texp: Rat) -> Self {
        let mut s = Self::zero(cutoff);
        s.push(coeff, zvec, texp);
        s
    }

    pub fn cutoff(&self) -> &Cutoff {
        &self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff_at(BoundaryVector::ZERO, &Rat::zero()) == Rat::one()
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|((texp, (a, b)), c)| Monomial {
            coeff: c.clone(),
            zvec: BoundaryVector { a: *a, b: *b },
            texp: texp.clone(),
        })
    }

    pub fn coeff_at(&self, zvec: BoundaryVector, texp: &Rat) -> Rat {
        self.terms
            .get(&(texp.clone(), (zvec.a, zvec.b)))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Add `coeff·z^zvec·T^texp`, normalizing and truncating.
    pub fn push(&mut self, coeff: Rat, zvec: BoundaryVector, texp: Rat) {
        if coeff.is_zero() || !self.cutoff.keeps(zvec, &texp) {
            return;
        }
        let key = (texp, (zvec.a, zvec.b));
        let entry = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn check_cutoff(&self, other: &Self) -> Result<(), SeriesError> {
        if self.cutoff == other.cutoff {
            Ok(())
        } else {
            Err(SeriesError::CutoffMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_cutoff(other)?;
        let mut out = self.clone();
        for m in other.terms() {
            out.push(m.coeff, m.zvec, m.texp);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.cutoff.clone());
        }
        let mut out = Self::zero(self.cutoff.clone());
        for m in self.terms() {
            out.push(m.coeff * c, m.zvec, m.texp);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_cutoff(other)?;
        let mut out = Self::zero(self.cutoff.clone());
        for m in self.terms() {
            for n in other.terms() {
                out.push(&m.coeff * &n.coeff, m.zvec + n.zvec, &m.texp + &n.texp);
            }
        }
        Ok(out)
    }

    /// Multiply by a single monomial (shift).
    pub fn mul_monomial(&self, coeff: &Rat, zvec: BoundaryVector, texp: &Rat) -> Self {
        let mut out = Self::zero(self.cutoff.clone());
        for m in self.terms() {
            out.push(&m.coeff * coeff, m.zvec + zvec, &m.texp + texp);
        }
        out
    }

    /// Positive-order part check: every term must sit strictly above the
    /// zeroth filtration level of the active mode.
    fn check_positive_order(&self) -> Result<(), SeriesError> {
        for m in self.terms() {
            let ok = match &self.cutoff {
                Cutoff::Energy(_) => m.texp.is_positive(),
                Cutoff::Degree(_) => m.zvec.degree() >= 1,
            };
            if !ok {
                return Err(SeriesError::ConstantTerm);
            }
        }
        Ok(())
    }

    /// Hard bound on the number of power iterations before `g^n` must
    /// truncate to zero.
    fn iteration_bound(&self) -> Result<usize, SeriesError> {
        match &self.cutoff {
            Cutoff::Degree(k) => Ok(*k as usize + 1),
            Cutoff::Energy(lambda) => {
                let min_texp = self
                    .terms()
                    .map(|m| m.texp)
                    .min()
                    .unwrap_or_else(Rat::one);
                if !min_texp.is_positive() {
                    return Err(SeriesError::ConstantTerm);
                }
                let bound = (lambda / min_texp).ceil();
                Ok(bound.to_integer().try_into().unwrap_or(usize::MAX))
            }
        }
    }

    /// `exp(g)` for `g` with no constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        self.check_positive_order()?;
        if self.is_zero() {
            return Ok(Self::one(self.cutoff.clone()));
        }
        let bound = self.iteration_bound()?;
        let mut acc = Self::one(self.cutoff.clone());
        let mut term = self.clone(); // g^n / n!
        let mut n = 1u64;
        while !term.is_zero() {
            acc = acc.add(&term)?;
            if n as usize > bound + 1 {
                return Err(SeriesError::NonNilpotent);
            }
            n += 1;
            term = term.mul(self)?.scale(&Rat::new(1.into(), n.into()));
        }
        Ok(acc)
    }

    /// `log(f)` for `f = 1 + g` with `g` of positive order.
    pub fn log1(&self) -> Result<Self, SeriesError> {
        let mut g = self.clone();
        let one_key = (Rat::zero(), (0i64, 0i64));
        match g.terms.remove(&one_key) {
            Some(c) if c.is_one() => {}
            _ => {
                return Err(SeriesError::NotOneModPositive(format!("{self}")));
            }
        }
        g.check_positive_order()?;
        if g.is_zero() {
            return Ok(Self::zero(self.cutoff.clone()));
        }
        let bound = g.iteration_bound()?;
        let mut acc = Self::zero(self.cutoff.clone());
        let mut power = g.clone(); // g^n
        let mut n = 1u64;
        while !power.is_zero() {
            let sign = if n % 2 == 1 { Rat::one() } else { -Rat::one() };
            acc = acc.add(&power.scale(&(sign / Rat::from_integer(n.into()))))?;
            if n as usize > bound + 1 {
                return Err(SeriesError::NonNilpotent);
            }
            n += 1;
            power = power.mul(&g)?;
        }
        Ok(acc)
    }

    /// `f^r = exp(r·log f)` for `f = 1 + (positive order)` and rational `r`.
    pub fn pow_rational(&self, r: &Rat) -> Result<Self, SeriesError> {
        self.log1()?.scale(r).exp()
    }

    /// Integer power, valid for any unit of the form `1 + (positive order)`.
    pub fn powi(&self, n: i64) -> Result<Self, SeriesError> {
        if n == 0 {
            return Ok(Self::one(self.cutoff.clone()));
        }
        let base = if n < 0 {
            self.pow_rational(&-Rat::one())?
        } else {
            self.clone()
        };
        let mut out = Self::one(self.cutoff.clone());
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    /// Euler operator `x ∂/∂x` (multiply each term by its first z-exponent).
    pub fn euler_x(&self) -> Self {
        let mut out = Self::zero(self.cutoff.clone());
        for m in self.terms() {
            out.push(m.coeff * Rat::from_integer(m.zvec.a.into()), m.zvec, m.texp);
        }
        out
    }

    /// Euler operator `y ∂/∂y`.
    pub fn euler_y(&self) -> Self {
        let mut out = Self::zero(self.cutoff.clone());
        for m in self.terms() {
            out.push(m.coeff * Rat::from_integer(m.zvec.b.into()), m.zvec, m.texp);
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    /// Canonical rendering: terms sorted by `(texp, zvec)`, coefficients as
    /// reduced fractions, e.g. `1 + 1·z^(1,1)·T^{3/2}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for m in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.zvec.is_zero() && m.texp.is_zero() {
                write!(f, "{}", m.coeff)?;
                continue;
            }
            write!(f, "{}", m.coeff)?;
            if !m.zvec.is_zero() {
                write!(f, "·z^{}", m.zvec)?;
            }
            if !m.texp.is_zero() {
                if m.texp.is_integer() {
                    write!(f, "·T^{}", m.texp)?;
                } else {
                    write!(f, "·T^{{{}}}", m.texp)?;
                }
            }
        }
        Ok(())
    }
}
