//! Small numerical kernels shared by the physics modules.

pub mod quadrature;
pub mod roots;

pub use quadrature::{integrate, integrate_real, QuadSettings};
pub use roots::{brent, RootSettings};
