//! Exact computer algebra for Lie superalgebras and Harish-Chandra pairs:
//! Grassmann points, super PBW normal forms with involution, skeleton
//! superfunctions, GNS models from positive definite superfunctions and
//! truncated moment positivity.

pub mod kernel;
pub mod grassmann;
pub mod superalgebra;
pub mod hcpair;
pub mod uea;
pub mod superfunctions;
pub mod gns;
pub mod moment;
pub mod io;
