use num_complex::Complex64;

use crate::phase::{e, frac_mul, CompensatedSum};

/// `f_X(ξ) = Σ_{n=1}^X e(ξ n^k)`.
///
/// Each phase `ξ n^k mod 1` is reduced exactly from the binary value of `ξ`,
/// so large `n^k` does not degrade the result.
pub fn weyl_sum(k: u32, x: u64, xi: f64) -> Complex64 {
    let xi = xi - xi.floor();
    let mut acc = CompensatedSum::new();
    for n in 1..=x {
        let nk = (n as u128)
            .checked_pow(k)
            .expect("n^k must fit in 128 bits");
        acc.add(e(frac_mul(xi, nk)));
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        assert!((weyl_sum(2, 7, 0.0) - Complex64::new(7.0, 0.0)).norm() < 1e-15);
        assert!(weyl_sum(2, 4, 0.5).norm() < 1e-15);
        assert!(weyl_sum(3, 3, 1.0 / 3.0).norm() < 1e-14);
    }

    #[test]
    fn periodic_and_conjugate_symmetric() {
        // dyadic, so ξ + 1 and -ξ are exact
        for &xi in &[8061.0 / 65536.0, 0.5 + 2f64.powi(-30), 0.98765 - 0.98765f64.rem_euclid(2f64.powi(-24))] {
            let f = weyl_sum(3, 40, xi);
            assert!((weyl_sum(3, 40, xi + 1.0) - f).norm() < 1e-12);
            assert!((weyl_sum(3, 40, -xi) - f.conj()).norm() < 1e-12);
        }
    }
}
