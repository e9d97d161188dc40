//! Geodesics, half-period functions, conjugate points and cut loci on
//! surfaces of revolution `dr² + m(r)² dθ²`.

pub mod constructors;
pub mod cutlocus;
pub mod geodesic;
pub mod jet;
pub mod ode;
pub mod profile;
pub mod quadrature;
pub mod roots;

pub use profile::{Branch, Domain, ProfileError, ProfileFunction, SurfaceKind, SurfaceOfRevolution};
