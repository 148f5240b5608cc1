//! Exact computations in graded artinian complete intersections
//! `A = k[x_0, …, x_m]/(f_0, …, f_m)` with all `f_i` of degree `d`.
//!
//! Everything is generic over the coefficient [`Field`]; [`Rational`] and the
//! prime-field aliases below are the concrete backends.

pub mod algebra;
pub mod error;
pub mod field;
pub mod instance;
pub mod inverse;
pub mod lefschetz;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod rng;
pub mod strata;
pub mod subspace;
pub mod univariate;
pub mod verify;

pub use algebra::{koszul_hf, Algebra, ElementClass, Regularity};
pub use error::{Error, Result};
pub use field::{Field, FieldKind, FieldSpec, Fp};
pub use instance::{Instance, InstanceFile};
pub use matrix::Matrix;
pub use poly::{Monomial, MonomialBasis, Poly, Side};
pub use report::{Report, Status};
pub use subspace::Subspace;
pub use verify::{verify, Suite, VerifyConfig};

pub type Rational = num_rational::BigRational;
pub type F101 = Fp<101>;
pub type F1009 = Fp<1009>;
pub type F4099 = Fp<4099>;
pub type F32003 = Fp<32003>;
pub type F65521 = Fp<65521>;
pub type F1000003 = Fp<1000003>;
pub type F2147483647 = Fp<2147483647>;

/// Moduli with a compiled prime-field backend.
pub const SUPPORTED_PRIMES: &[u64] = &[101, 1009, 4099, 32003, 65521, 1000003, 2147483647];

/// Draws a complete intersection (or the monomial one) from the `gen`
/// stream of `seed`. Returns the instance and the number of draws.
pub fn generate<T: Field>(m: usize, d: usize, seed: u64, monomial: bool) -> Result<(Instance<T>, usize)> {
    if monomial {
        return Ok((Instance::monomial(m, d)?, 1));
    }
    let mut rng = rng::stream(seed, "gen", 0);
    let (a, attempts) = algebra::generate_regular::<T, _>(m, d, &mut rng, 1000)?;
    Ok((a.instance().clone(), attempts))
}
