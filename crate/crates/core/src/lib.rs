//! Maximal UHF subalgebras of unital AF algebras, computed exactly from
//! Bratteli diagrams.
//!
//! * [`supernatural`]: supernatural numbers and the rational groups `Q(N)`.
//! * [`ordered_group`]: divisibility of order units, Property (D), `N(G, u)`,
//!   rational subgroups and `θ` for cyclic and quadratic-irrational groups.
//! * [`bratteli`]: diagrams, tower heights, the odometer, the canonical
//!   premorphism and stage-level `K_0` queries.
//! * [`format`], [`dot`], [`catalog`]: JSON and DOT text forms and the
//!   built-in examples.
//!
//! All arithmetic is exact.

pub mod bratteli;
pub mod catalog;
pub mod dot;
pub mod format;
pub mod ordered_group;
pub mod primes;
pub mod supernatural;

pub use bratteli::{BratteliDiagram, Tail};
pub use ordered_group::{GroupElement, OrderedGroup, PropertyD};
pub use supernatural::{Exponent, SupernaturalNumber};
