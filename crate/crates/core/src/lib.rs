//! Exact computations around representation homology `HR_*(X, G)`.
//!
//! - [`exact`]: fields (`Q`, `F_p`, `Q(ζ_N)`), sparse elimination, chain
//!   complexes, Smith normal form.
//! - [`liegroups`]: `GL_n`, `SL_n`, tori and products, with adjoint actions.
//! - [`fox`]: free groups, presentations and Fox Jacobians.
//! - [`spaces`]: the supported spaces and their fundamental groups.
//! - [`cotangent`]: cotangent complexes at a representation, samplers and
//!   vanishing certificates.
//! - [`specseq`]: `E²` pages of derived symmetric powers.
//! - [`koszul`]: truncated Koszul homology of commuting-variety models.
//! - [`catalog`]: closed-form results.
//!
//! Field operations live on a context value (`f.add(&a, &b)`), which is why
//! some `from_*` methods take `&self`.
#![allow(clippy::wrong_self_convention, clippy::needless_range_loop)]

pub mod catalog;
pub mod cotangent;
pub mod exact;
pub mod fox;
pub mod koszul;
pub mod liegroups;
pub mod spaces;
pub mod specseq;
