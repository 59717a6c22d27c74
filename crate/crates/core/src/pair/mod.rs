//! Pairs of ternary forms: the determinant cubic, the quartic ring and its
//! resolvent, canonical pairs, cubic automorphisms and Hilbert symbols.

pub mod automorph;
pub mod cubic;
pub mod hilbert;
pub mod quartic;

pub use automorph::{
    cubic_automorphism_order2, cubic_automorphism_order3, pair_fixing_witness_check, power_is_scalar,
    satisfies_scaling_identity,
};
pub use cubic::{det_binary_cubic, det_cubic_ratio_check, disc_pair, BinaryCubic};
pub use hilbert::{hilbert_product, hilbert_symbol, Place};
pub use quartic::{
    anisotropic_over_q, canonical_cubic, canonical_pair, char_poly_alpha, fmt_matrix, pencil_determinant, power_matrix, quartic_structure,
    resolvent_of_alpha_closed_form, transition_matrices, CharPoly, QuarticPoly, QuarticStructure, Transition,
};
