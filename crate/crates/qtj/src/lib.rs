//! Finite-stage invariants of quantum tori and Kronecker foliations.
//!
//! A quantum torus `T_theta = R / <1, theta>` has no useful classical
//! geometry, but its Diophantine approximation group does: pairs `(m, n)`
//! with `n*theta - m` small play the role the lattice plays for an elliptic
//! curve. This crate computes, at explicit finite stages, the invariants
//! that arise from that viewpoint:
//!
//! - continued fractions, convergents, and approximation pairs with exact
//!   quadratic-field error terms ([`dioph`]);
//! - moduli data for generalized Kronecker foliations: a modulus `mu` in the
//!   upper or lower half plane, a slope `theta`, and the `GL(2, Z)` action
//!   ([`foliation`]);
//! - finite index-set descriptors and summation schemes: nested boxes for
//!   the classical limit, windows of convergent pairs for the quantum one
//!   ([`schemes`]);
//! - partially summed Eisenstein series with exact automorphy checks,
//!   extrapolated classical limits, and quantum decay sequences
//!   ([`eisenstein`]);
//! - the correction-free Weierstrass sum and the residual of its cubic
//!   equation ([`weierstrass`]);
//! - normal forms, `c4`/`c6`, and the classical/quantum modular invariant
//!   `j` ([`modular`]).
//!
//! Everything runs either in exact mode (components in a real quadratic
//! field) or in arbitrary-precision floating mode with a strict
//! reproducibility contract ([`numerics`]). The `qtj` binary exposes the
//! pipelines as subcommands; `examples/` exercises each capability.

pub mod cli;
pub mod dioph;
pub mod eisenstein;
pub mod foliation;
pub mod modular;
pub mod numerics;
pub mod report;
pub mod schemes;
pub mod weierstrass;
