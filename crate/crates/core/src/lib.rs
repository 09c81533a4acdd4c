//! Multi-GGS groups acting on the p-regular rooted tree.
//!
//! The crate builds the groups `G_E` generated by the rooted cycle `a` and
//! directed generators `b^n` attached to a subspace `E` of `F_p^(p-1)`,
//! works with depth-truncated tree automorphisms (portraits) and symbolic
//! generator words, decomposes first-level stabiliser elements into
//! coordinates, and computes the subgroups `U`, `V`, `W` of `F_p^×` that
//! control the automorphism group of `G_E`.
//!
//! The main entry points are:
//!
//! * [`MggsGroup::new`] to construct and classify a group from its defining
//!   matrix,
//! * [`Portrait`] and [`Word`] for exact computation with truncated tree
//!   automorphisms and generator expressions,
//! * [`autgrp::aut_structure`] for the `U`/`V`/`W` report,
//! * [`oracle`] for the brute-force verification harness.
//!
//! A narrative guide with runnable snippets lives in the `book/` directory of
//! the repository; its code blocks are compiled as doc-tests via the
//! [`guide`] module.

pub mod autgrp;
mod error;
pub mod fpalg;
pub mod group;
pub mod guide;
pub mod oracle;
pub mod tree;
pub mod words;

pub use autgrp::{
    aut_structure, compute_u, compute_v, compute_w, normalizer_conjugation_check,
    normalizer_sequence, AutReport, NormalizerCheck, NormalizerSequence,
};
pub use error::{Error, Result};
pub use fpalg::{
    perm_apply, row_space_equal, scalar_action, unit_subgroup_generated, FpMat, FpScalar, FpVec,
    Unit,
};
pub use group::{
    b_coordinates, enumerate_quotient, forced_a_coords, member_at_depth, order_p_conjugator,
    Classification, Conjugator, MggsGroup, QuotientGroup, StabCoordinates,
};
pub use tree::{kappa, rooted, AffineLabel, Portrait};
pub use words::{parse_word, Gen, Word};
