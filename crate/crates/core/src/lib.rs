//! Numerical differential geometry of tube surfaces.
//!
//! The crate evaluates fundamental forms, curvatures and Beltrami operators
//! with respect to the first, second and third fundamental forms on
//! parametric surfaces, with jet arithmetic supplying exact derivatives. On
//! tubes around space curves it provides every closed-form invariant as an
//! independent formula, and it tests whether the Gauss map satisfies
//! `Δᴶ N = A N` for a constant matrix `A` by least-squares fitting.
//!
//! ```
//! use tubular::{finitetype, frenet::CurveSpec, tubes::TubeSpec};
//!
//! let torus = TubeSpec { curve: CurveSpec::Circle { kappa: 1.0 }, radius: 0.5 };
//! let surface = tubular::tubes::tube_surface(&torus).unwrap();
//! let grid = finitetype::default_grid(&surface, 16, 16);
//! let report = finitetype::theorem_check_tube(&torus, &grid).unwrap();
//! assert_eq!(report.verdict, finitetype::Verdict::InfiniteType);
//! ```

pub mod beltrami;
pub mod error;
pub mod finitetype;
pub mod frenet;
pub mod geom;
pub mod jet;
pub mod cli;
pub mod tolerance;
pub mod tubes;

pub use error::{Error, Result};
