//! Exact algebra for alpha-invariants of smooth projective surfaces.

pub mod alpha;
pub mod elimination;
pub mod germ;
pub mod groebner;
pub mod polycore;
pub mod surface;
