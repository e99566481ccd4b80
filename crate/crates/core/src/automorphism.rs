//! Wall-crossing automorphisms of the twisted torus ring and the
//! factorization machinery that extracts the invariants `Ω` / `Ω̃`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{primitive_decompose, sympl_pairing, BoundaryVector, Charge, Refinement};
use crate::novikov::{Cutoff, SeriesError, TruncatedSeries};
use crate::{rint, Rat};

#[derive(Debug, Error)]
pub enum AutomorphismError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("normal {0:?} does not annihilate wall direction {1}")]
    NormalNotAnnihilating((i64, i64), BoundaryVector),
    #[error("normal {0:?} is not primitive")]
    NormalNotPrimitive((i64, i64)),
    #[error("wall function supported outside powers of the wall direction")]
    BadSupport,
    #[error("series has a term off the ray direction {0}")]
    OffDirection(BoundaryVector),
    #[error("incoherent energies at query point")]
    IncoherentEnergies,
    #[error("factorization input must have constant term 1")]
    BadConstantTerm,
}

// ---------------------------------------------------------------------------
// Univariate truncated series, used by wall-product factorization and as the
// independent expansion oracle in tests.
// ---------------------------------------------------------------------------

/// Dense univariate power series over the rationals, truncated at a fixed
/// order `N` (coefficients of `x^0 ... x^N`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniSeries {
    coeffs: Vec<Rat>,
}

impl UniSeries {
    pub fn zero(order: usize) -> Self {
        UniSeries { coeffs: vec![Rat::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rat::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        UniSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set_coeff(&mut self, k: usize, c: Rat) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// `1 - s·x^k` with `s = (−1)^{k·ε}`, the elementary factor of the
    /// wall-product factorization.
    pub fn elementary_factor(order: usize, k: usize, epsilon: u8) -> Self {
        let mut s = Self::one(order);
        let sign = if epsilon == 1 && k % 2 == 1 { rint(1) } else { rint(-1) };
        if k <= order {
            s.coeffs[k] = sign;
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > n {
                    break;
                }
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        UniSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, b) in other.coeffs.iter().enumerate() {
            if i < out.coeffs.len() {
                out.coeffs[i] += b;
            }
        }
        out
    }

    /// `log(f)` for `f = 1 + positive order`.
    pub fn log1(&self) -> Result<Self, AutomorphismError> {
        if !self.coeffs[0].is_one() {
            return Err(AutomorphismError::BadConstantTerm);
        }
        let n = self.order();
        let mut g = self.clone();
        g.coeffs[0] = Rat::zero();
        let mut acc = Self::zero(n);
        let mut power = g.clone();
        for m in 1..=n {
            let sign = if m % 2 == 1 { Rat::one() } else { -Rat::one() };
            acc = acc.add(&power.scale(&(sign / rint(m as i64))));
            power = power.mul(&g);
        }
        Ok(acc)
    }

    /// `exp(g)` for `g` with zero constant term.
    pub fn exp(&self) -> Result<Self, AutomorphismError> {
        if !self.coeffs[0].is_zero() {
            return Err(AutomorphismError::BadConstantTerm);
        }
        let n = self.order();
        let mut acc = Self::one(n);
        let mut term = self.clone();
        for m in 1..=n {
            acc = acc.add(&term);
            term = term.mul(self).scale(&Rat::new(1.into(), (m as u64 + 1).into()));
        }
        Ok(acc)
    }

    pub fn pow_rational(&self, r: &Rat) -> Result<Self, AutomorphismError> {
        self.log1()?.scale(r).exp()
    }
}

impl fmt::Display for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}·x^{k}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Unique factorization `f = ∏_k (1 − (−1)^{kε} x^k)^{k·d_k}` up to the
/// truncation order: peel the lowest order, divide, recurse.
pub fn factorize_wall_product(
    f: &UniSeries,
    epsilon: u8,
    max_order: usize,
) -> Result<BTreeMap<usize, Rat>, AutomorphismError> {
    if !f.coeff(0).is_one() {
        return Err(AutomorphismError::BadConstantTerm);
    }
    let mut g = f.clone();
    let mut d = BTreeMap::new();
    for k in 1..=max_order.min(f.order()) {
        let a = g.coeff(k);
        if a.is_zero() {
            continue;
        }
        // (1 − s x^k)^{k d_k} = 1 − k d_k s x^k + O(x^{2k})
        let s = if epsilon == 1 && k % 2 == 1 { rint(-1) } else { rint(1) };
        let dk = -a * s / rint(k as i64);
        let factor = UniSeries::elementary_factor(f.order(), k, epsilon);
        g = g.mul(&factor.pow_rational(&(-rint(k as i64) * &dk))?);
        d.insert(k, dk);
    }
    Ok(d)
}

/// The Möbius-type divisor transform `c(n) = Σ_{k|n} d_{n/k} / k²`.
pub fn multiple_cover_transform(d: &BTreeMap<usize, Rat>, max_order: usize) -> BTreeMap<usize, Rat> {
    let mut c = BTreeMap::new();
    for n in 1..=max_order {
        let mut acc = Rat::zero();
        for k in 1..=n {
            if n % k == 0 {
                if let Some(dk) = d.get(&(n / k)) {
                    acc += dk / rint((k * k) as i64);
                }
            }
        }
        if !acc.is_zero() {
            c.insert(n, acc);
        }
    }
    c
}

// ---------------------------------------------------------------------------
// Wall-crossing maps and their composites.
// ---------------------------------------------------------------------------

/// An automorphism `z^v ↦ z^v · f^{n(v)}` of the twisted torus ring, where
/// `f` is supported on powers of `z^direction` and the primitive covector
/// `n` annihilates `direction`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCrossingMap {
    direction: BoundaryVector,
    normal: (i64, i64),
    func: TruncatedSeries,
}

impl WallCrossingMap {
    pub fn new(
        direction: BoundaryVector,
        normal: (i64, i64),
        func: TruncatedSeries,
    ) -> Result<Self, AutomorphismError> {
        let (na, nb) = normal;
        if na * direction.a + nb * direction.b != 0 {
            return Err(AutomorphismError::NormalNotAnnihilating(normal, direction));
        }
        if num_integer::gcd(na.unsigned_abs(), nb.unsigned_abs()) != 1 {
            return Err(AutomorphismError::NormalNotPrimitive(normal));
        }
        for m in func.terms() {
            let on_axis = if m.zvec.is_zero() {
                m.texp.is_zero() && m.coeff.is_one()
            } else {
                // z^v with v a positive multiple of direction
                sympl_pairing(m.zvec, direction) == 0
                    && (m.zvec.a * direction.a + m.zvec.b * direction.b) > 0
            };
            if !on_axis {
                return Err(AutomorphismError::BadSupport);
            }
        }
        Ok(WallCrossingMap { direction, normal, func })
    }

    /// Identity map; the direction is a dummy.
    pub fn identity(cutoff: Cutoff) -> Self {
        WallCrossingMap {
            direction: BoundaryVector { a: 1, b: 0 },
            normal: (0, 1),
            func: TruncatedSeries::one(cutoff),
        }
    }

    pub fn direction(&self) -> BoundaryVector {
        self.direction
    }

    pub fn normal(&self) -> (i64, i64) {
        self.normal
    }

    pub fn func(&self) -> &TruncatedSeries {
        &self.func
    }

    pub fn is_identity(&self) -> bool {
        self.func.is_one()
    }

    fn normal_value(&self, v: BoundaryVector) -> i64 {
        self.normal.0 * v.a + self.normal.1 * v.b
    }

    /// Apply the map to a series; a ring homomorphism up to truncation.
    pub fn apply(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let mut powers: HashMap<i64, TruncatedSeries> = HashMap::new();
        let mut out = TruncatedSeries::zero(f.cutoff().clone());
        for m in f.terms() {
            let p = self.normal_value(m.zvec);
            let factor = powers
                .entry(p)
                .or_insert_with(|| self.func.powi(p).expect("unit power"));
            let shifted = factor.mul_monomial(&m.coeff, m.zvec, &m.texp);
            out = out.add(&shifted).expect("same cutoff");
        }
        out
    }

    /// The elementary transform `K_γ^Ω`:
    /// `z^v ↦ z^v · (1 − σ(∂γ)·z^{∂γ}·T^E)^{Ω·⟨v,∂γ⟩}`.
    ///
    /// A pure flavor charge gives the identity map.
    pub fn elementary_k(
        charge: &Charge,
        omega: &Rat,
        sigma: Refinement,
        cutoff: Cutoff,
    ) -> Result<Self, AutomorphismError> {
        if charge.boundary.is_zero() || omega.is_zero() {
            return Ok(Self::identity(cutoff));
        }
        let (l, prim) = primitive_decompose(charge.boundary).expect("nonzero");
        let mut base = TruncatedSeries::one(cutoff);
        base.push(
            rint(-sigma.sign(charge.boundary)),
            charge.boundary,
            charge.energy.clone(),
        );
        // ⟨v, ∂γ⟩ = l·⟨v, prim⟩ and ⟨v, prim⟩ = n(v) for n = (prim.b, −prim.a):
        // fold the extra factors into the wall function exponent.
        let func = base.pow_rational(&(omega * rint(l)))?;
        WallCrossingMap::new(prim, (prim.b, -prim.a), func)
    }
}

/// A monomial-substitution ring endomorphism, represented by the images of
/// the two coordinate monomials `x = z^{(1,0)}` and `y = z^{(0,1)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    cutoff: Cutoff,
    image_x: TruncatedSeries,
    image_y: TruncatedSeries,
}

impl Endomorphism {
    pub fn identity(cutoff: Cutoff) -> Self {
        let x = TruncatedSeries::monomial(
            cutoff.clone(),
            Rat::one(),
            BoundaryVector { a: 1, b: 0 },
            Rat::zero(),
        );
        let y = TruncatedSeries::monomial(
            cutoff.clone(),
            Rat::one(),
            BoundaryVector { a: 0, b: 1 },
            Rat::zero(),
        );
        Endomorphism { cutoff, image_x: x, image_y: y }
    }

    pub fn image_x(&self) -> &TruncatedSeries {
        &self.image_x
    }

    pub fn image_y(&self) -> &TruncatedSeries {
        &self.image_y
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.cutoff.clone())
    }

    /// Post-compose with a wall map (the wall map acts on the images).
    pub fn then_wall(&self, map: &WallCrossingMap) -> Self {
        Endomorphism {
            cutoff: self.cutoff.clone(),
            image_x: map.apply(&self.image_x),
            image_y: map.apply(&self.image_y),
        }
    }

    /// The deviation from the identity on each coordinate,
    /// `(log(E(x)/x), log(E(y)/y))`.
    pub fn log_defect(&self) -> Result<(TruncatedSeries, TruncatedSeries), AutomorphismError> {
        let xinv = BoundaryVector { a: -1, b: 0 };
        let yinv = BoundaryVector { a: 0, b: -1 };
        let ax = self.image_x.mul_monomial(&Rat::one(), xinv, &Rat::zero()).log1()?;
        let ay = self.image_y.mul_monomial(&Rat::one(), yinv, &Rat::zero()).log1()?;
        Ok((ax, ay))
    }
}

/// Left-to-right composition: `maps[0]` is applied first.
pub fn compose(maps: &[WallCrossingMap], cutoff: Cutoff) -> Endomorphism {
    let mut endo = Endomorphism::identity(cutoff);
    for m in maps {
        endo = endo.then_wall(m);
    }
    endo
}

/// Whether the map preserves the holomorphic symplectic form
/// `dlog x ∧ dlog y`, checked by formal logarithmic derivatives of the
/// coordinate images.
pub fn check_symplectic(map: &WallCrossingMap, cutoff: Cutoff) -> bool {
    let endo = Endomorphism::identity(cutoff.clone()).then_wall(map);
    endo_preserves_symplectic(&endo)
}

/// Same check for a full composite.
pub fn endo_preserves_symplectic(endo: &Endomorphism) -> bool {
    // Jacobian determinant of (log X, log Y) with respect to (log x, log y):
    // (DxX/X)(DyY/Y) − (DyX/X)(DxY/Y) ≡ 1.
    let inv = |s: &TruncatedSeries, v: BoundaryVector| -> Option<TruncatedSeries> {
        // s = z^v · u with u a unit; return s^{-1}
        let u = s.mul_monomial(&Rat::one(), -v, &Rat::zero());
        let uinv = u.pow_rational(&-Rat::one()).ok()?;
        Some(uinv.mul_monomial(&Rat::one(), -v, &Rat::zero()))
    };
    let ex = BoundaryVector { a: 1, b: 0 };
    let ey = BoundaryVector { a: 0, b: 1 };
    let (xinv, yinv) = match (inv(endo.image_x(), ex), inv(endo.image_y(), ey)) {
        (Some(a), Some(b)) => (a, b),
        _ => return false,
    };
    let m = |a: &TruncatedSeries, b: &TruncatedSeries| a.mul(b).expect("same cutoff");
    let dxx = m(&endo.image_x().euler_x(), &xinv);
    let dyx = m(&endo.image_x().euler_y(), &xinv);
    let dxy = m(&endo.image_y().euler_x(), &yinv);
    let dyy = m(&endo.image_y().euler_y(), &yinv);
    let det = m(&dxx, &dyy).sub(&m(&dyx, &dxy)).expect("same cutoff");
    det.is_one()
}

// ---------------------------------------------------------------------------
// Invariant extraction.
// ---------------------------------------------------------------------------

/// The invariants read off a grouped wall product in one direction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InvariantTable {
    /// `l → (Ω_l, Ω̃_l)`; absent entries are zero.
    pub entries: BTreeMap<usize, (Rat, Rat)>,
}

impl InvariantTable {
    pub fn omega(&self, l: usize) -> Rat {
        self.entries.get(&l).map(|(o, _)| o.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn omega_tilde(&self, l: usize) -> Rat {
        self.entries.get(&l).map(|(_, t)| t.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|(o, t)| o.is_zero() && t.is_zero())
    }
}

/// Read `Ω_l` and `Ω̃_l` off the grouped product `F` of slab functions in
/// one primitive direction.
///
/// `F` must be supported on positive powers `z^{l·direction}` with a single
/// T-exponent per power, proportional to `l`. `Ω_l` is the exponent `d_l`
/// of wall-product factorization applied to `F` in the variable
/// `x = z^{direction}`; `Ω̃_l` carries the sign bookkeeping that anchors
/// `F = 1 + x·T` to `Ω̃_l = (−1)^{l−1}/l²`.
pub fn extract_invariants(
    f: &TruncatedSeries,
    direction: BoundaryVector,
    epsilon: u8,
    _sigma: Refinement,
    max_order: usize,
) -> Result<InvariantTable, AutomorphismError> {
    // Collapse to a univariate series in x = z^{direction}.
    let mut uni = UniSeries::zero(max_order);
    let mut unit_energy: Option<Rat> = None;
    for m in f.terms() {
        if m.zvec.is_zero() {
            if !m.texp.is_zero() || !m.coeff.is_one() {
                return Err(AutomorphismError::BadConstantTerm);
            }
            uni.set_coeff(0, m.coeff);
            continue;
        }
        let (l, prim) = primitive_decompose(m.zvec).expect("nonzero");
        if prim != direction {
            return Err(AutomorphismError::OffDirection(m.zvec));
        }
        let per_unit = &m.texp / rint(l);
        match &unit_energy {
            None => unit_energy = Some(per_unit),
            Some(e) if *e == per_unit => {}
            Some(_) => return Err(AutomorphismError::IncoherentEnergies),
        }
        let l = l as usize;
        if l <= max_order {
            let prev = uni.coeff(l);
            if !prev.is_zero() {
                // two distinct T-exponents for one z-power would have
                // tripped the unit-energy check above; merge is safe
                uni.set_coeff(l, prev + m.coeff);
            } else {
                uni.set_coeff(l, m.coeff);
            }
        }
    }
    if !uni.coeff(0).is_one() {
        return Err(AutomorphismError::BadConstantTerm);
    }
    let d = factorize_wall_product(&uni, epsilon, max_order)?;
    let c = multiple_cover_transform(&d, max_order);
    let mut entries = BTreeMap::new();
    for l in 1..=max_order {
        let omega = d.get(&l).cloned().unwrap_or_else(Rat::zero);
        // sign bookkeeping: Ω̃_l = −(−1)^{εl}·c(l), which for ε = 1 is
        // (−1)^{l−1}·c(l) and anchors the multiple-cover normalization
        let sign = if epsilon == 1 && l % 2 == 1 { Rat::one() } else { -Rat::one() };
        let tilde = c.get(&l).cloned().unwrap_or_else(Rat::zero) * sign;
        if !omega.is_zero() || !tilde.is_zero() {
            entries.insert(l, (omega, tilde));
        }
    }
    Ok(InvariantTable { entries })
}

/// Canonical rendering of a K-factor list for goldens, e.g.
/// `K[(0,1),E=1]^1 · K[(1,1),E=2]^1`.
pub fn render_k_factors(factors: &[(Charge, Rat)]) -> String {
    if factors.is_empty() {
        return "1".to_string();
    }
    factors
        .iter()
        .map(|(c, omega)| format!("K[{},E={}]^{}", c.boundary, c.energy, omega))
        .collect::<Vec<_>>()
        .join(" · ")
}
