//! Side constructions around the subword order: Chebyshev polynomials and the
//! `Λ*` conjecture, permutation patterns and layered permutations, and the
//! factor order.

pub mod chebyshev;
pub mod factor;
pub mod permutation;

pub use chebyshev::{chebyshev_coeffs, check_lambda_conjecture, ChebyshevPoly, LambdaCheck};
pub use factor::{factor_interval, factor_leq, factor_mobius};
pub use permutation::{
    composition_to_layered, direct_sum, is_layered, layered_to_composition, pattern_interval,
    pattern_leq, pattern_mobius, Permutation,
};
