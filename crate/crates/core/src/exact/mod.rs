//! Exact arithmetic: Gaussian rationals, Laurent polynomials in named
//! parameters, integer lattices and presented multiplicative groups.

mod gauss;
mod int;
mod laurent;
mod mult;

pub use gauss::{parse_rational, GaussRat};
pub use int::{
    divisibility_index, gcd_i64, hermite_normal_form, kernel_sublattice, smith_normal_form,
    IntMatrix, IntVector, Lattice, Snf,
};
pub use laurent::{Laurent, Monomial};
pub use mult::MultiplicativeValue;
pub(crate) use mult::lcm_orders;
