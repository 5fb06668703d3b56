//! Equivariant Euler classes of `E̲Γ` for split crystallographic groups
//! `Γ = K ⋉ Z^n`.
//!
//! Given a finite group `K ≤ GL_n(Z)` by generators, the crate enumerates the
//! conjugacy classes of finite subgroups of `Γ`, computes the Euler class
//! `χ^Γ(E̲Γ)` in the Burnside group of proper `Γ`-sets, and evaluates its
//! orbifold, quotient and string-theoretic specializations.
//!
//! Conventions: matrices act on column vectors from the left and
//! `(k1, a1)(k2, a2) = (k1 k2, a1 + k1 a2)`.

pub mod assemble;
pub mod classify;
pub mod cli;
pub mod cohom1;
pub mod crystal;
pub mod error;
pub mod linalg;
pub mod matgroup;
pub mod orderposet;

pub use error::{Error, Result};
