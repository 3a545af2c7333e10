//! Exact Cartan–Kähler analysis of the Euclidean and parabolic k-Dirac
//! operators.
//!
//! The crate builds the complex spinor representation, the symbol tableaux
//! of both operators and their prolongations over the Gaussian rationals,
//! computes Cartan characters and runs Cartan's test. Spaces of polynomial
//! (monogenic) solutions are computed independently as kernels of explicit
//! constraint matrices, so every tableau dimension has a second route.
//!
//! The linear algebra, tableau and polynomial layers are generic over an
//! exact [`Field`]; the Dirac systems need `i` and use [`Q`].

pub mod clifford;
pub mod error;
pub mod euclidean;
pub mod linalg;
pub mod parabolic;
pub mod poly;
pub mod scalar;
pub mod tableau;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::{ComplexField, Field, GaussRational};

/// Gaussian rationals with arbitrary-precision parts.
pub type Q = GaussRational<num_bigint::BigInt>;

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

pub type ExactMatrix = linalg::Matrix<Q>;
pub type Subspace = linalg::SubspaceBasis<Q>;
pub type ExactTableau = tableau::Tableau<Q>;
pub type ExactSpinorPoly = poly::SpinorPoly<Q>;
pub type ExactEuclidean = euclidean::EuclideanSystem<Q>;
pub type ExactParabolic = parabolic::ParabolicSystem<Q>;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
