//! Truncated formal power series with exact rational coefficients, and the
//! generating-function identities checked with them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

mod saddle;
mod verify;

pub use astro_float::BigFloat;
pub use saddle::{
    fixed_point_scan, involution_asymptotic_ratio, log_capital_f, saddle_bound, tail_integral,
    FixedPointScan, SaddleReport, PRECISION_BITS,
};
pub use verify::{
    capital_f_from_closed_form, egf_involutions, g_from_recurrence, series_f, series_f_integers,
    verify_f_closed_form, verify_g_cauchy, verify_g_closed_form, DEFAULT_ORDER,
};

/// `sum_{k <= order} c_k z^k`, known exactly through `z^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RationalSeries {
    pub fn zero(order: usize) -> Self {
        RationalSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, BigRational::one(), order)
    }

    /// `c z^k`, truncated.
    pub fn monomial(k: usize, c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Takes `coeffs[0..]` as `c_0, c_1, ...`; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Malformed("a series needs at least one coefficient".into()));
        }
        Ok(RationalSeries { coeffs })
    }

    /// Polynomial with integer coefficients, padded or truncated to `order`.
    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (slot, &c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = q(c);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `[z^k]`, zero beyond the order is not assumed: panics if `k > order`.
    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `d/dz`, one order lower (order 0 stays order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=self.order()).map(|k| &self.coeffs[k] * q(k as i64)).collect();
        RationalSeries { coeffs }
    }

    /// `int_0^z`, one order higher.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / q(k as i64 + 1)));
        RationalSeries { coeffs }
    }

    /// `exp(A)` for `A(0) = 0`, via `n e_n = sum_k k a_k e_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp needs a series with zero constant term".into()));
        }
        let n_max = self.order();
        let mut e = vec![BigRational::one()];
        for n in 1..=n_max {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * q(k as i64) * &e[n - k];
                }
            }
            e.push(acc / q(n as i64));
        }
        Ok(RationalSeries { coeffs: e })
    }

    /// `1/A` for `A(0) != 0`.
    pub fn recip(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Domain("reciprocal needs a nonzero constant term".into()));
        }
        let inv0 = c0.recip();
        let mut b = vec![inv0.clone()];
        for n in 1..=self.order() {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &b[n - k];
            }
            b.push(-acc * &inv0);
        }
        Ok(RationalSeries { coeffs: b })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// `log(A)` for `A(0) = 1`, as `int A'/A`.
    pub fn ln(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("log needs constant term 1".into()));
        }
        let n = self.order();
        Ok(self.derivative().div(&self.clone().truncate(n.saturating_sub(1)))?.integral().truncate(n))
    }

    /// `log(1 - z) = -sum_{k >= 1} z^k / k`.
    pub fn ln_one_minus_z(order: usize) -> Self {
        let mut s = Self::zero(order);
        for k in 1..=order {
            s.coeffs[k] = BigRational::new(BigInt::from(-1), BigInt::from(k));
        }
        s
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl<'a> Add for &'a RationalSeries {
    type Output = RationalSeries;

    fn add(self, rhs: &'a RationalSeries) -> RationalSeries {
        let order = self.order().min(rhs.order());
        RationalSeries { coeffs: (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl<'a> Sub for &'a RationalSeries {
    type Output = RationalSeries;

    fn sub(self, rhs: &'a RationalSeries) -> RationalSeries {
        let order = self.order().min(rhs.order());
        RationalSeries { coeffs: (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;

    fn neg(self) -> RationalSeries {
        RationalSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Mul for &'a RationalSeries {
    type Output = RationalSeries;

    fn mul(self, rhs: &'a RationalSeries) -> RationalSeries {
        let order = self.order().min(rhs.order());
        let mut out = RationalSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series_strategy(order: usize) -> impl Strategy<Value = RationalSeries> {
        prop::collection::vec((-20i64..20, 1i64..6), order + 1).prop_map(|v| {
            let coeffs = v.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect();
            RationalSeries::from_coeffs(coeffs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in series_strategy(6), b in series_strategy(6), c in series_strategy(6)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn one_is_neutral(a in series_strategy(7)) {
            prop_assert_eq!(&a * &RationalSeries::one(7), a);
        }

        #[test]
        fn leibniz_rule(a in series_strategy(6), b in series_strategy(6)) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exp_and_log_invert(mut a in series_strategy(6)) {
            a.coeffs[0] = BigRational::zero();
            let e = a.exp().unwrap();
            prop_assert_eq!(e.ln().unwrap(), a.clone());
            let mut b = a;
            b.coeffs[0] = BigRational::one();
            prop_assert_eq!(b.ln().unwrap().exp().unwrap(), b);
        }

        #[test]
        fn recip_is_inverse(mut a in series_strategy(6)) {
            if a.coeffs[0].is_zero() {
                a.coeffs[0] = BigRational::one();
            }
            prop_assert_eq!(&a * &a.recip().unwrap(), RationalSeries::one(6));
        }
    }

    #[test]
    fn log_one_minus_z_agrees_with_general_log() {
        let one_minus_z = RationalSeries::from_ints(&[1, -1], 10);
        assert_eq!(one_minus_z.ln().unwrap(), RationalSeries::ln_one_minus_z(10));
    }

    #[test]
    fn orders_propagate() {
        let a = RationalSeries::one(5);
        let b = RationalSeries::one(3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!(a.derivative().order(), 4);
        assert_eq!(a.integral().order(), 6);
        assert!(RationalSeries::zero(3).exp().is_ok());
        assert!(RationalSeries::one(3).exp().is_err());
        assert!(RationalSeries::zero(3).recip().is_err());
    }

    #[test]
    fn display() {
        let s = RationalSeries::from_ints(&[1, 0, -2], 3);
        assert_eq!(s.to_string(), "1 + (-2)z^2 + O(z^4)");
    }
}
