//! Small numeric helpers shared by the transform and oracle paths.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// (a * b) mod n without overflow.
pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// e^{+2πi·numer/n}. Exponents that reduce to zero give exactly 1.
pub(crate) fn root_of_unity(numer: u64, n: u64) -> Complex64 {
    let e = numer % n;
    if e == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let angle = TAU * (e as f64) / (n as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// Forward DFT kernel entry e^{-2πi·row·col/n}.
pub(crate) fn forward_kernel(row: u64, col: u64, n: u64) -> Complex64 {
    root_of_unity(n - mul_mod(row, col, n), n)
}

/// Inverse kernel entry e^{+2πi·row·col/n} (without the 1/n factor).
pub(crate) fn inverse_kernel(row: u64, col: u64, n: u64) -> Complex64 {
    root_of_unity(mul_mod(row, col, n), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_conventions() {
        // e^{-2πi·1·1/4} = -i
        let w = forward_kernel(1, 1, 4);
        assert!((w.re - 0.0).abs() < 1e-15 && (w.im + 1.0).abs() < 1e-15);
        // inverse is the conjugate
        let v = inverse_kernel(1, 1, 4);
        assert!((w - v.conj()).norm() < 1e-15);
        // zero exponent is exactly one
        assert_eq!(forward_kernel(0, 123, 1024), Complex64::new(1.0, 0.0));
        assert_eq!(root_of_unity(1024, 1024), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(12, 8), 4);
        assert_eq!(gcd(0, 8), 8);
        assert_eq!(gcd(7, 8), 1);
    }
}
