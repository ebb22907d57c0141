//! Exact computational engine for the Weil representation of finite
//! symplectic groups and the category of perfect Lagrangian linear
//! relations over odd prime fields F_p (p > 2).
//!
//! The crate builds everything from desk-scale exact primitives:
//!
//! - [`field`]: arithmetic in F_p and the additive character.
//! - [`linalg`]: dense matrices, canonical (RREF) subspaces, annihilators
//!   and quadratic forms over F_p.
//! - [`symplectic`]: the space V_2n with its symplectic form, the group
//!   Sp(2n, F_p), its generators and the constructive decomposition.
//! - [`operator`]: dense complex operators on l^2(F_p^n) with a Jacobi
//!   SVD used as the nullspace oracle.
//! - [`heisenberg`]: the projective Heisenberg representation a(v) and
//!   Weil operators W(g) for group elements.
//! - [`relations`]: linear relations between symplectic spaces and the
//!   perfect Lagrangian calculus.
//! - [`gauss`]: Gaussian operators G(H; Q), closed-form Gauss sums, the
//!   intertwining solver realizing W(T), and the relation <-> Gaussian
//!   dictionary.
//!
//! Everything is immutable and pure; trial loops are safe to parallelize.

pub mod error;
pub mod field;
pub mod linalg;
pub mod operator;
pub mod relations;
pub mod gauss;
pub mod heisenberg;
pub mod json;
pub mod symplectic;
pub mod verify;

pub use error::{Error, Result};
pub use field::PrimeField;
