//! The rank-2 boundary lattice: symplectic pairing, primitive decomposition,
//! quadratic refinement and Picard-Lefschetz monodromy.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("flavor direction has no primitive decomposition")]
    ZeroVector,
    #[error("monodromy direction {0} is not primitive")]
    NonPrimitive(BoundaryVector),
    #[error("charge energy must be nonnegative")]
    NegativeEnergy,
}

/// A boundary class in the fixed basis of the lattice. `(0,0)` is allowed
/// and designates a pure flavor direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoundaryVector {
    pub a: i64,
    pub b: i64,
}

pub const fn bv(a: i64, b: i64) -> BoundaryVector {
    BoundaryVector { a, b }
}

impl BoundaryVector {
    pub const ZERO: BoundaryVector = bv(0, 0);

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_primitive(&self) -> bool {
        self.a.unsigned_abs().gcd(&self.b.unsigned_abs()) == 1
    }

    /// Total z-degree of the monomial `z^v`, used by the degree filtration.
    pub fn degree(&self) -> u64 {
        self.a.unsigned_abs() + self.b.unsigned_abs()
    }

    /// Squared euclidean length; the energy growth rate of `z^v` along a
    /// unit lattice step in direction `v/|v|` under the toy central charge.
    pub fn norm_sq(&self) -> i64 {
        self.a * self.a + self.b * self.b
    }
}

impl Add for BoundaryVector {
    type Output = BoundaryVector;
    fn add(self, rhs: Self) -> Self {
        bv(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for BoundaryVector {
    type Output = BoundaryVector;
    fn sub(self, rhs: Self) -> Self {
        bv(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for BoundaryVector {
    type Output = BoundaryVector;
    fn neg(self) -> Self {
        bv(-self.a, -self.b)
    }
}

impl Mul<BoundaryVector> for i64 {
    type Output = BoundaryVector;
    fn mul(self, v: BoundaryVector) -> BoundaryVector {
        bv(self * v.a, self * v.b)
    }
}

impl fmt::Display for BoundaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// The standard symplectic pairing `⟨v,w⟩ = v.a·w.b − v.b·w.a`.
pub fn sympl_pairing(v: BoundaryVector, w: BoundaryVector) -> i64 {
    v.a * w.b - v.b * w.a
}

/// Write `v = l·v_prim` with `v_prim` primitive and `l = gcd(|a|,|b|) ≥ 1`.
pub fn primitive_decompose(v: BoundaryVector) -> Result<(i64, BoundaryVector), LatticeError> {
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    let l = v.a.unsigned_abs().gcd(&v.b.unsigned_abs()) as i64;
    Ok((l, bv(v.a / l, v.b / l)))
}

/// Choice of quadratic refinement for the elementary transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Refinement {
    /// `σ(a,b) = (−1)^{ab}`, the simplest solution of the refinement
    /// relation `σ(v)σ(w) = (−1)^{⟨v,w⟩}σ(v+w)`.
    Default,
    /// `σ ≡ +1`. Does not satisfy the refinement relation in general; kept
    /// for the classical untwisted convention.
    Trivial,
}

impl Refinement {
    pub fn sign(&self, v: BoundaryVector) -> i64 {
        match self {
            Refinement::Default => {
                if (v.a & 1) == 1 && (v.b & 1) == 1 {
                    -1
                } else {
                    1
                }
            }
            Refinement::Trivial => 1,
        }
    }
}

/// The symplectic transvection `v ↦ v + ⟨v,m⟩·m` around a focus-focus
/// singularity with invariant direction `m`.
pub fn picard_lefschetz(
    v: BoundaryVector,
    m: BoundaryVector,
) -> Result<BoundaryVector, LatticeError> {
    if !m.is_primitive() {
        return Err(LatticeError::NonPrimitive(m));
    }
    Ok(v + sympl_pairing(v, m) * m)
}

/// A boundary class together with its T-exponent at a point of the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Charge {
    pub boundary: BoundaryVector,
    pub energy: Rat,
}

impl Charge {
    pub fn new(boundary: BoundaryVector, energy: Rat) -> Result<Self, LatticeError> {
        if energy < Rat::zero() {
            return Err(LatticeError::NegativeEnergy);
        }
        Ok(Charge { boundary, energy })
    }
}
