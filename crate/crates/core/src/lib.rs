//! Scattering diagrams on a planar affine base with focus-focus singularities.
//!
//! The crate builds Kontsevich-Soibelman style scattering diagrams from a
//! configured set of singularities, completes them order by order over a
//! truncated Novikov ring, factorizes wall automorphisms into elementary
//! transforms to read off the invariants `Ω` / `Ω̃`, and cross-checks
//! wall-crossing jumps against a brute-force tropical disc enumerator.
//!
//! All arithmetic is exact: coefficients, energies and positions are
//! rationals throughout.

pub mod automorphism;
pub mod engine;
pub mod geom;
pub mod lattice;
pub mod novikov;
pub mod render;
pub mod scene;
pub mod tropical;

pub use num_rational::BigRational as Rat;

/// Shorthand for an exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Shorthand for an exact rational from an integer.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(n.into())
}
