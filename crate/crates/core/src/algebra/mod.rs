//! Finite Fourier polynomials in the semicrossed product `C(X) x_phi Z+`
//! and in the crossed product `C(X~) x_phi~ Z`.

mod crossed;
mod semicrossed;

pub use crossed::CrossedPoly;
pub use semicrossed::SemicrossedPoly;
