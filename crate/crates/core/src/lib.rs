//! Exact algebra over finite chain rings.
//!
//! The crate covers arithmetic in chain rings `GR(p^n, r)[X]/<g, p^(n-1) X^t>`,
//! polynomial factorization and Hensel lifting, linear and cyclic codes with
//! their standard forms and duals, lifts of codes along the precision tower,
//! and Construction A lattices with trace-form Gram matrices.

pub mod code;
mod fq;
pub mod lattice;
pub mod lifting;
pub mod poly;
pub mod ring;
pub mod wire;

pub use code::{CodeError, CodeType, LinearCode, StandardForm};
pub use fq::is_prime;
pub use lattice::{LatticeError, LatticeModel, OKModel, ZpScalar};
pub use lifting::{LiftError, PrecisionTower};
pub use poly::{HenselWitness, Poly, PolyError};
pub use ring::{ChainRing, ChainRingSpec, ResidueElem, RingElem, RingError};
