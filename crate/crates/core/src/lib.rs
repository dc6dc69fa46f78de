//! Probability that a random geodesic triangle on a flat torus is
//! contractible.
//!
//! The probability for the torus `R² / ⟨1, τ⟩` equals
//! `F(D, D, D) / area(D)²`, where `D` is the Dirichlet domain of the
//! lattice and `F` is the triple-overlap invariant of [`overlap`]. Every
//! Dirichlet domain is carried onto a hexagon `H(s,t)` by a linear map, and
//! `F` has closed forms on that family. The crate computes the probability
//! through each of these routes and checks them against Monte Carlo
//! simulation of the triangles themselves.
//!
//! - [`geom2d`]: convex polygons, clipping, affine maps, Minkowski differences
//! - [`torus`]: modular domain, Dirichlet domains, homotopy classes
//! - [`overlap`]: `F(A, B, C)` closed forms and numeric evaluators
//! - [`probability`]: `P(τ)`, its moduli-space average and extremes
//! - [`verify`]: the invariant suite behind `torus-triangles verify`

pub mod cubature;
pub mod geom2d;
pub mod overlap;
pub mod probability;
pub mod rng;
pub mod shapes;
pub mod torus;
pub mod verify;

pub use geom2d::{AffineMap, ConvexPolygon, GeomError, HalfPlane, Vec2};
pub use overlap::{Estimate, OverlapKind, OverlapMethod};
pub use probability::{p_closed_form, p_from_hex, p_monte_carlo, ModuliAverageConfig};
pub use torus::{DirichletDomain, HexParams, HomotopyClass, TauParam, TorusPoint};
