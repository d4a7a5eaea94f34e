//! Independent numerical evaluations of the polarizability.
//!
//! - [`quadrature`]: momentum-space integrals of the resolvent.
//! - [`grid`]: finite-difference solution of the inhomogeneous equation.
//! - [`static_sum`]: sum over states of a boxed Hamiltonian at zero frequency.

pub mod grid;
pub mod quadrature;
pub mod static_sum;

use crate::scalar::Real;

/// Extrapolates values computed at spacings `h, h/2, h/4, ...` whose error
/// is a series in even powers of `h`.
pub fn richardson<T: Real, V>(values: &[V]) -> V
where
    V: Copy + std::ops::Sub<Output = V> + std::ops::Add<Output = V> + std::ops::Mul<T, Output = V>,
{
    let mut row = values.to_vec();
    let mut factor = T::lit(4.0);
    while row.len() > 1 {
        row = row
            .windows(2)
            .map(|w| w[1] + (w[1] - w[0]) * (factor - T::one()).recip())
            .collect();
        factor = factor * T::lit(4.0);
    }
    row[0]
}
