//! Series-level checks of the generating-function identities behind the
//! Class 11 and Class 17 results.
//!
//! * `I(z) = exp(z + z^2/2)`, the EGF of involutions.
//! * `F(z) = exp(z + z^2/2) int_0^z exp(-t - t^2/2) dt`, with `F' = (1+z)F + 1`.
//! * `G(z) = sum 2314_n z^n / n!` solves `G'' - (1+z)G' - G = (z^2/2) I(z)`
//!   with `G(0) = G'(0) = 0`, and equals `F/2 + z(z-2) I(z) / 4`.
//! * `f(z) = sum_{n>=3} u_n z^n` has a rational-times-log closed form.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RationalSeries;
use crate::closed::{seq_2314_class17, u_sequence};
use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 64;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn first_mismatch(a: &RationalSeries, b: &RationalSeries) -> Option<usize> {
    a.coeffs().iter().zip(b.coeffs()).position(|(x, y)| x != y)
}

/// `exp(z + z^2/2)`: `[z^n] = I_n / n!`.
pub fn egf_involutions(order: usize) -> RationalSeries {
    egf_involutions_exponent(order).exp().expect("zero constant term")
}

/// `F` from `F(0) = 0` and `(n+1) c_{n+1} = c_n + c_{n-1} + [n = 0]`.
///
/// Fails if some `n! c_n` is not a natural number.
pub fn series_f(order: usize) -> Result<RationalSeries> {
    let mut c = vec![BigRational::zero(); order + 1];
    for n in 0..order {
        let mut rhs = c[n].clone();
        if n >= 1 {
            rhs += &c[n - 1];
        }
        if n == 0 {
            rhs += BigRational::one();
        }
        c[n + 1] = rhs / q(n as i64 + 1);
    }
    for (n, cn) in c.iter().enumerate() {
        let scaled = cn * BigRational::from_integer(factorial(n));
        if !scaled.is_integer() || scaled.is_negative() {
            return Err(Error::Verification(format!("{n}! [z^{n}]F = {scaled} is not a natural number")));
        }
    }
    RationalSeries::from_coeffs(c)
}

/// The integers `n! [z^n] F` for `n <= order`.
pub fn series_f_integers(order: usize) -> Result<Vec<BigUint>> {
    let f = series_f(order)?;
    Ok(f.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            (c * BigRational::from_integer(factorial(n)))
                .to_integer()
                .to_biguint()
                .expect("checked nonnegative")
        })
        .collect())
}

/// `F` expanded from its integral form. `exp(+/-1/2)` cancels, so the
/// product `exp(z + z^2/2) * int_0^z exp(-t - t^2/2) dt` is all rational.
pub fn capital_f_from_closed_form(order: usize) -> RationalSeries {
    let growth = egf_involutions(order);
    let decay = (-&egf_involutions_exponent(order)).exp().expect("zero constant term");
    &growth * &decay.integral().truncate(order)
}

fn egf_involutions_exponent(order: usize) -> RationalSeries {
    let mut arg = RationalSeries::zero(order);
    if order >= 1 {
        arg = RationalSeries::from_ints(&[0, 1], order);
    }
    if order >= 2 {
        arg = &arg + &RationalSeries::monomial(2, BigRational::new(1.into(), 2.into()), order);
    }
    arg
}

/// `G = sum_{n>=4} 2314_n z^n / n!` from the `2314_n` recurrence.
pub fn g_from_recurrence(order: usize) -> RationalSeries {
    let counts = seq_2314_class17(order);
    let coeffs = counts
        .into_iter()
        .enumerate()
        .map(|(n, c)| BigRational::new(BigInt::from(c), factorial(n)))
        .collect();
    RationalSeries::from_coeffs(coeffs).expect("order + 1 coefficients")
}

/// Residual `G'' - (1+z)G' - G - (z^2/2) exp(z + z^2/2)` through `z^(order-2)`.
/// Fails unless the residual vanishes and `G(0) = G'(0) = 0`.
pub fn verify_g_cauchy(order: usize) -> Result<RationalSeries> {
    if order < 6 {
        return Err(Error::Domain(format!("Cauchy check needs order >= 6, got {order}")));
    }
    let g = g_from_recurrence(order);
    if !g.coeff(0).is_zero() || !g.coeff(1).is_zero() {
        return Err(Error::Verification("G(0) or G'(0) is nonzero".into()));
    }
    let d1 = g.derivative();
    let d2 = d1.derivative();
    let one_plus_z = RationalSeries::from_ints(&[1, 1], order);
    let forcing = &RationalSeries::monomial(2, BigRational::new(1.into(), 2.into()), order)
        * &egf_involutions(order);
    let residual = &(&(&d2 - &(&one_plus_z * &d1)) - &g) - &forcing;
    let residual = residual.truncate(order - 2);
    if let Some(k) = residual.coeffs().iter().position(|c| !c.is_zero()) {
        return Err(Error::Verification(format!(
            "Cauchy residual has [z^{k}] = {}",
            residual.coeff(k)
        )));
    }
    Ok(residual)
}

/// `G = F/2 + z(z-2) exp(z + z^2/2) / 4` through `z^order`, with `F` both
/// from its integral form and from its linear recurrence.
pub fn verify_g_closed_form(order: usize) -> Result<()> {
    if order < 6 {
        return Err(Error::Domain(format!("closed-form check needs order >= 6, got {order}")));
    }
    let f_closed = capital_f_from_closed_form(order);
    let f_rec = series_f(order)?;
    if let Some(k) = first_mismatch(&f_closed, &f_rec) {
        return Err(Error::Verification(format!("F differs between routes at z^{k}")));
    }
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    let poly = RationalSeries::from_ints(&[0, -2, 1], order);
    let rhs = &f_closed.scale(&half) + &(&poly * &egf_involutions(order)).scale(&quarter);
    let g = g_from_recurrence(order);
    match first_mismatch(&g, &rhs) {
        None => Ok(()),
        Some(k) => Err(Error::Verification(format!(
            "G closed form differs at z^{k}: {} vs {}",
            g.coeff(k),
            rhs.coeff(k)
        ))),
    }
}

/// `f(z) = z (2(z-1) ln(1-z) + z^3 + 3z^2 - 2z) / (4 (1-z)^2 (1+z))` against
/// `u_n` from its recurrence, through `z^order`.
pub fn verify_f_closed_form(order: usize) -> Result<RationalSeries> {
    if order < 5 {
        return Err(Error::Domain(format!("f check needs order >= 5, got {order}")));
    }
    let z_minus_one = RationalSeries::from_ints(&[-1, 1], order);
    let log_term = (&z_minus_one * &RationalSeries::ln_one_minus_z(order)).scale(&q(2));
    let inner = &log_term + &RationalSeries::from_ints(&[0, -2, 3, 1], order);
    let numerator = &RationalSeries::from_ints(&[0, 1], order) * &inner;
    // 4 (1-z)^2 (1+z) = 4 - 4z - 4z^2 + 4z^3
    let denominator = RationalSeries::from_ints(&[4, -4, -4, 4], order);
    let closed = numerator.div(&denominator)?;

    let mut expected = RationalSeries::zero(order);
    let mut coeffs = expected.coeffs().to_vec();
    for (n, u) in u_sequence(order) {
        coeffs[n] = u;
    }
    expected = RationalSeries::from_coeffs(coeffs)?;
    match first_mismatch(&closed, &expected) {
        None => Ok(closed),
        Some(k) => Err(Error::Verification(format!(
            "f closed form differs at z^{k}: {} vs u_{k} = {}",
            closed.coeff(k),
            expected.coeff(k)
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed::involutions_upto;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn involution_egf() {
        let s = egf_involutions(30);
        assert_eq!(s.coeff(0), &r(1, 1));
        assert_eq!(s.coeff(2), &r(1, 1));
        assert_eq!(s.coeff(4), &r(10, 24));
        for (n, i_n) in involutions_upto(30).into_iter().enumerate() {
            assert_eq!(s.coeff(n) * BigRational::from_integer(factorial(n)), BigRational::from_integer(i_n.into()));
        }
    }

    #[test]
    fn f_recurrence_values() {
        let ints = series_f_integers(12).unwrap();
        assert_eq!(ints[0], BigUint::zero());
        assert_eq!(ints[1], BigUint::one());
        assert_eq!(ints[3], BigUint::from(3u32));
        // shifted A000932: 1, 1, 3, 6, 18, 48, 156, 492, 1740, 6168, 23568
        let oeis: [u32; 11] = [1, 1, 3, 6, 18, 48, 156, 492, 1740, 6168, 23568];
        for (k, &a) in oeis.iter().enumerate() {
            assert_eq!(ints[k + 1], BigUint::from(a));
        }
    }

    #[test]
    fn g_cauchy_and_closed_form() {
        let res = verify_g_cauchy(30).unwrap();
        assert!(res.is_zero());
        assert_eq!(res.order(), 28);
        let g = g_from_recurrence(30);
        assert_eq!(g.coeff(6), &r(21, 720));
        assert_eq!(g.coeff(4), &r(1, 24));
        for k in 0..4 {
            assert!(g.coeff(k).is_zero());
        }
        verify_g_closed_form(30).unwrap();
    }

    #[test]
    fn f_closed_form() {
        let f = verify_f_closed_form(30).unwrap();
        assert_eq!(f.coeff(3), &r(1, 2));
        assert_eq!(f.coeff(5), &r(9, 8));
        for k in 0..3 {
            assert!(f.coeff(k).is_zero());
        }
    }

    #[test]
    fn small_orders_rejected() {
        assert!(verify_g_cauchy(5).is_err());
        assert!(verify_g_closed_form(5).is_err());
        assert!(verify_f_closed_form(4).is_err());
    }
}
