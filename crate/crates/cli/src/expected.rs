//! Closed-form dimensions that computed values are checked against.

use kdirac::binomial;
use kdirac::weyl::cubic_total;

pub fn spinor_dim(n: usize) -> usize {
    1 << (n / 2)
}

fn c(n: usize, k: usize) -> usize {
    binomial(n as u64, k as u64) as usize
}

/// `k·s·(n−1)`.
pub fn euclidean_tableau(n: usize, k: usize) -> usize {
    k * spinor_dim(n) * (n - 1)
}

/// `s·C(k(n−1)+1, 2) − s·C(k, 2)`.
pub fn euclidean_quadratic(n: usize, k: usize) -> usize {
    let s = spinor_dim(n);
    s * c(k * (n - 1) + 1, 2) - s * c(k, 2)
}

/// The `S²E⊗S²F` and `Λ²E⊗Λ²F` pieces of the quadratic solutions.
pub fn euclidean_quadratic_split(n: usize, k: usize) -> [usize; 2] {
    let s = spinor_dim(n);
    [s * c(n, 2) * c(k + 1, 2), s * (c(k, 2) * c(n - 1, 2) - c(k, 2))]
}

pub fn euclidean_cubic(n: usize) -> usize {
    cubic_total(n) as usize
}

/// `(2n−2)s, …, 2s, 0, 0, 0` at level 1 for k = 2.
pub fn euclidean_level1_characters(n: usize) -> Vec<usize> {
    let s = spinor_dim(n);
    (2..=2 * n - 2).rev().map(|j| j * s).chain([0, 0, 0]).collect()
}

/// `k(n−1)s + C(k,2)s`.
pub fn parabolic_tableau(n: usize, k: usize) -> usize {
    let s = spinor_dim(n);
    k * (n - 1) * s + c(k, 2) * s
}

/// `(2n−1)s, …, 2s, 0, 0, 0` at level 1 for k = 2.
pub fn parabolic_level1_characters(n: usize) -> Vec<usize> {
    let s = spinor_dim(n);
    (2..=2 * n - 1).rev().map(|j| j * s).chain([0, 0, 0]).collect()
}

/// Pieces of the first parabolic prolongation by number of `Λ²E` factors.
pub fn parabolic_first_pieces(n: usize) -> Vec<usize> {
    let s = spinor_dim(n);
    vec![euclidean_quadratic(n, 2), 2 * s * (n - 1), s]
}

/// Pieces of the second parabolic prolongation by number of `Λ²E` factors.
pub fn parabolic_second_pieces(n: usize) -> Vec<usize> {
    let s = spinor_dim(n);
    vec![euclidean_cubic(n), euclidean_quadratic(n, 2), 2 * s * (n - 1), s]
}

/// Number of monomials of degree `l` in `v` variables.
pub fn monomial_count(v: usize, l: usize) -> usize {
    if v == 0 {
        return usize::from(l == 0);
    }
    c(l + v - 1, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(euclidean_quadratic(3, 2), 18);
        assert_eq!(euclidean_quadratic_split(4, 2), [72, 8]);
        assert_eq!(euclidean_level1_characters(3), vec![8, 6, 4, 0, 0, 0]);
        assert_eq!(parabolic_tableau(3, 2), 10);
        assert_eq!(parabolic_second_pieces(3), vec![32, 18, 8, 2]);
        assert_eq!(parabolic_second_pieces(3).iter().sum::<usize>(), 60);
        assert_eq!(monomial_count(3, 2), 6);
        assert_eq!(monomial_count(0, 0), 1);
    }
}
