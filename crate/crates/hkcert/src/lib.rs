//! Exact lattice certificates for the Kodaira dimension of moduli spaces of
//! polarized hyperkähler manifolds of K3^[n] and OG10 type.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice_core`] — Gram matrices, Smith normal form, discriminant groups.
//! * [`e8_roots`] — the E8 lattice, its 240 roots, primitivity and the
//!   brute-force root-counting oracle.
//! * [`squares`] — constrained sums of three and four squares.
//! * [`diophantine`] — the parity-constrained minimal-norm linear solver.
//! * [`embeddings`] — the embedding recipes into E8.
//! * [`certify`] — dispatch, reductions, certificates and their verification.
//! * [`tables`] — reproduction of the low-t embedding tables.

pub mod lattice_core;
pub mod e8_roots;
pub mod squares;
pub mod diophantine;
pub mod embeddings;
pub mod certify;
pub mod tables;
