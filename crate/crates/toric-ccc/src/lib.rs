//! Exact combinatorics of the coherent-constructible correspondence for
//! toric Deligne-Mumford stacks.
//!
//! A toric DM stack is encoded by a *stacky fan* `(N, Sigma, beta)`: a
//! finitely generated abelian group `N`, a simplicial fan in `N_R`, and ray
//! elements `b_i` in `N`. This crate implements the combinatorial shadow of
//! the correspondence between equivariant coherent sheaves on the stack and
//! constructible sheaves on the dual vector space `M_R`:
//!
//! - [`zlat`] — exact integer/rational linear algebra (Smith normal form,
//!   finitely generated abelian groups, rational cones);
//! - [`stackyfan`] — the stacky fan data model, rigidification, the lifted
//!   fan, and morphisms of stacky fans;
//! - [`gale`] — Gale duality and Cox construction data: `DG(beta)`, the dual
//!   map, the generic stabilizer and the irrelevant ideal;
//! - [`linebundle`] — equivariant line bundles as twisted polytopes,
//!   Q-ampleness, section weights, and Taylor resolutions of monomial ideals;
//! - [`ccc`] — the Gamma-poset of shifted dual cones, Theta complexes, the
//!   Cech image of a line bundle, Ext computation, convolution and pullback;
//! - [`microlocal`] — the conical Lagrangian, singular supports of Theta
//!   objects, shard arrangements and SVG rendering;
//! - [`fanfile`] — the plain-text `.fan` / `.fanmap` formats;
//! - [`fans`] — the bundled example fans used throughout the guide and tests.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals
//! everywhere. Every type is an immutable value, so the whole API is safe to
//! use from multiple threads without coordination.

pub mod ccc;
pub mod fanfile;
pub mod fans;
pub mod gale;
pub mod linebundle;
pub mod microlocal;
pub mod stackyfan;
pub mod zlat;

mod book;
