//! Ball arithmetic, exact polynomials and matrices, root isolation and
//! rational reconstruction.

pub mod ball;
pub mod bmat;
pub mod cmat;
pub mod complex;
pub mod poly;
pub mod qmat;
pub mod ratrec;
pub mod roots;

pub use ball::BigReal;
pub use complex::{BigComplex, MpComplex};
pub use poly::RationalPoly;
pub use ratrec::rational_reconstruct;
pub use roots::{poly_roots, RootBall};
