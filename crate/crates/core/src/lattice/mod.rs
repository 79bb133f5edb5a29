pub mod canonical;
pub mod enumerate;
pub mod gram;
pub mod halfint;
pub mod intmat;

pub use canonical::{canonical_form, find_isometry, is_isometric, minkowski_reduce};
pub use enumerate::{short_vectors, Ellipsoid, ShortVector};
pub use gram::{GramMatrix, UnimodularMap};
pub use halfint::{
    achievable_even_counts, detect_half_integer_type, detect_with_even_count, extend_basis_odd_index,
    half_integer_gram, lift_gl_mod2, mod4_congruence_holds, normalize_mod2_block, promote_half_integer, ExtendedBasis,
    HalfIntBasis, Parity,
};
