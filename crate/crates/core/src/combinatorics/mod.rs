//! Exact big-integer triangles, their identities, and the intrinsic-volume
//! rows built from them.

pub mod identities;
pub mod polynomial;
pub mod rational;
pub mod triangle;
pub mod volumes;

pub use identities::{verify_identity, verify_identity_by_name, Identity, IdentityReport};
pub use polynomial::{IntegerPolynomial, Polynomial, RationalPolynomial};
pub use rational::ExactRational;
pub use triangle::{expand_defining_polynomial, triangle, IntegerTriangle, TriangleKind};
pub use volumes::{intrinsic_volume_row, intrinsic_volume_rows, VolumeRow};
