//! Exact symbolic computation in Iwahori-Hecke algebras of split reductive
//! root data, in the Bernstein presentation.
//!
//! The crate provides root-datum and Weyl group combinatorics
//! ([`rootdata`]), the Hecke algebra with exact Laurent coefficients
//! ([`hecke`]), parabolic subalgebras and transport between conjugate Levis
//! ([`parabolic`]), finite-dimensional modules with principal series,
//! induction and Jacquet restriction ([`modules`]), JSON serialization
//! ([`json`]) and seeded verification suites ([`suites`]).

pub mod coeff;
pub mod error;
pub mod field;
pub mod hecke;
pub mod json;
pub mod matrix;
pub mod modules;
pub mod parabolic;
pub mod rootdata;
pub mod suites;

pub use coeff::LaurentV;
pub use error::{CoreError, Result};
pub use field::RatFunc;
pub use hecke::HeckeElt;
pub use matrix::KMat;
pub use rootdata::{ExtElt, LeviSet, RootDatum, WeylId};
