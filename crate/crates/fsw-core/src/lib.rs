//! Exact symbolic calculator for families Seiberg-Witten invariants of
//! Kahler families of 4-manifolds with vanishing first Betti number.
//!
//! The crate is organised bottom-up:
//!
//! * [`ring`]: truncated graded-commutative cohomology rings of base spaces,
//!   with exact integer coefficients.
//! * [`charclass`]: total Chern and Segre classes of formal bundles, tensor
//!   and symmetric-power expansions, and jet bundles.
//! * [`fsw`]: the invariant engine: the fibre integrals over the projective
//!   bundle of sections, computed by three independent routes, their
//!   assembly into the invariants, and the rank-zero degeneration.
//! * [`families`]: closed forms for three worked families (projectivised
//!   bundles, fibre products, universal blowups) and cross-checks of those
//!   closed forms against the general engine.
//!
//! All arithmetic is exact; there are no floating-point values anywhere.

pub mod charclass;
pub mod families;
pub mod fsw;
pub mod ring;
