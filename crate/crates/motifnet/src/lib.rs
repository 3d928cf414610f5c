//! Motif sampling on weighted networks.
//!
//! Random homomorphisms from a small motif `F` into a network `G` are
//! sampled with a Glauber chain or a pivot chain, and their time averages
//! estimate conditional homomorphism densities, CHD profiles, MACC
//! matrices and motif transforms. Small instances can be solved exactly by
//! enumeration.
//!
//! All numerical types are generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`.

pub mod clustering;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graphon;
pub mod io;
pub mod linalg;
pub mod mcmc;
pub mod motif;
pub mod network;
pub mod observables;
pub mod pipeline;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use motif::{Motif, MotifKind};
pub use network::{Network, Skeleton, StructuralPredicates};
pub use scalar::Real;

pub type Network64 = network::Network<f64>;
pub type Network32 = network::Network<f32>;
pub type Motif64 = motif::Motif<f64>;
pub type Motif32 = motif::Motif<f32>;
