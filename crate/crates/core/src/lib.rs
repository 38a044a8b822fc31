//! Exact machinery for relative Schur multipliers `H2(G, Γ)` of a
//! homomorphism `f: Γ → G` of finite groups, the classification and
//! arithmetic of central f-extensions, and the universal central
//! f-extension together with its hypercentral tower.
//!
//! Module layout:
//! - [`zmat`]: exact sparse integer linear algebra (Smith normal form,
//!   kernels, mixed congruence solving) underlying all homology.
//! - [`grp`]: finite groups as multiplication tables, subgroups,
//!   quotients, series, homomorphisms.
//! - [`abgrp`]: finite abelian groups in invariant-factor form.
//! - [`bar`]: normalized bar complexes, the relative mapping cone and
//!   its (co)homology in degrees ≤ 2.
//! - [`ext`]: the calculus of central f-extensions (cocycle dictionary,
//!   Baer sum, pullback/pushout, classification).
//! - [`universal`]: the universal central f-extension, the tower, the
//!   five-term sequence and lifting obstructions.

pub mod abgrp;
pub mod bar;
pub mod config;
pub mod error;
pub mod ext;
pub mod grp;
pub mod universal;
pub mod zmat;

pub use config::Config;
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
