//! Saddle-point bound for `[z^n] F` at `zeta = sqrt(n)` and the finite-n
//! diagnostics for involutions, in high precision.
//!
//! `F(zeta)` is evaluated from its integral form,
//! `exp(zeta + zeta^2/2) * int_0^zeta exp(-t - t^2/2) dt`, with tanh-sinh
//! quadrature at [`PRECISION_BITS`] bits. Levels are halved until two
//! successive estimates differ by less than `1e-30`. Everything is carried
//! in log space so that `n^(n/2)` never has to be formed.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigUint;
use num_rational::BigRational;

use super::series_f;
use crate::closed::involutions_upto;
use crate::error::{Error, Result};

/// About 77 significant decimal digits.
pub const PRECISION_BITS: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;
const QUADRATURE_TOL: f64 = 1e-30;
const QUADRATURE_MAX_LEVEL: usize = 14;
const QUADRATURE_SPAN: f64 = 4.5;

struct Hp {
    p: usize,
    cc: Consts,
}

impl Hp {
    fn new() -> Result<Self> {
        let cc = Consts::new().map_err(|e| Error::Numeric(format!("constant cache: {e:?}")))?;
        Ok(Hp { p: PRECISION_BITS, cc })
    }

    fn int(&self, i: i64) -> BigFloat {
        BigFloat::from_i64(i, self.p)
    }

    fn float(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    fn big(&mut self, x: &BigUint) -> BigFloat {
        BigFloat::parse(&x.to_string(), Radix::Dec, self.p, RM, &mut self.cc)
    }

    fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.p, RM, &mut self.cc)
    }

    fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(self.p, RM, &mut self.cc)
    }

    fn ln_big(&mut self, x: &BigUint) -> BigFloat {
        let v = self.big(x);
        self.ln(&v)
    }

    fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.p, RM)
    }

    fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    fn check(&self, x: BigFloat, what: &str) -> Result<BigFloat> {
        if x.is_nan() || x.is_inf() {
            Err(Error::Numeric(format!("{what} is not finite")))
        } else {
            Ok(x)
        }
    }
}

fn to_f64(x: &BigFloat) -> f64 {
    format!("{x}").parse().unwrap_or(f64::NAN)
}

/// `int_0^z exp(-t - t^2/2) dt` by tanh-sinh quadrature.
fn tail_integral_hp(hp: &mut Hp, z: &BigFloat) -> Result<BigFloat> {
    if z.is_zero() {
        return Ok(hp.int(0));
    }
    let pi = hp.pi();
    let half_pi = hp.div(&pi, &hp.int(2));
    let one = hp.int(1);
    let two = hp.int(2);
    // contribution of the node at u: weight * integrand
    let node = |hp: &mut Hp, u: &BigFloat| -> BigFloat {
        let eu = hp.exp(u);
        let emu = hp.div(&one, &eu);
        let sinh = hp.div(&hp.sub(&eu, &emu), &two);
        let cosh = hp.div(&hp.add(&eu, &emu), &two);
        let s = hp.mul(&half_pi, &sinh);
        // t = z / (1 + exp(-2s)) avoids cancellation near t = 0
        let big_e = hp.exp(&hp.mul(&s, &two).neg());
        let denom = hp.add(&one, &big_e);
        let t = hp.div(z, &denom);
        let dt = hp.div(&hp.mul(&hp.mul(z, &two), &big_e), &hp.mul(&denom, &denom));
        let weight = hp.mul(&hp.mul(&dt, &half_pi), &cosh);
        let exponent = hp.add(&t, &hp.div(&hp.mul(&t, &t), &two)).neg();
        let f = hp.exp(&exponent);
        hp.mul(&weight, &f)
    };

    let mut h = 1.0f64;
    let steps = |h: f64| (QUADRATURE_SPAN / h).floor() as i64;
    let mut sum = hp.int(0);
    for j in -steps(h)..=steps(h) {
        let u = hp.float(j as f64 * h);
        let v = node(hp, &u);
        sum = hp.add(&sum, &v);
    }
    let mut estimate = hp.mul(&sum, &hp.float(h));
    for level in 1..=QUADRATURE_MAX_LEVEL {
        h /= 2.0;
        let mut fresh = hp.int(0);
        let k = steps(h);
        for j in (-k..=k).filter(|j| j % 2 != 0) {
            let u = hp.float(j as f64 * h);
            let v = node(hp, &u);
            fresh = hp.add(&fresh, &v);
        }
        let next = hp.add(&hp.div(&estimate, &two), &hp.mul(&fresh, &hp.float(h)));
        let diff = to_f64(&hp.sub(&next, &estimate)).abs();
        estimate = hp.check(next, "quadrature estimate")?;
        if level >= 3 && diff < QUADRATURE_TOL {
            return Ok(estimate);
        }
    }
    Err(Error::Numeric(format!(
        "tanh-sinh quadrature did not reach {QUADRATURE_TOL:e} within {QUADRATURE_MAX_LEVEL} levels"
    )))
}

/// `int_0^z exp(-t - t^2/2) dt`, returned at [`PRECISION_BITS`] bits.
pub fn tail_integral(z: f64) -> Result<BigFloat> {
    let mut hp = Hp::new()?;
    let z = hp.float(z);
    tail_integral_hp(&mut hp, &z)
}

fn log_capital_f_hp(hp: &mut Hp, z: &BigFloat) -> Result<BigFloat> {
    let integral = tail_integral_hp(hp, z)?;
    let growth = hp.add(z, &hp.div(&hp.mul(z, z), &hp.int(2)));
    let ln_int = hp.ln(&integral);
    Ok(hp.add(&growth, &ln_int))
}

/// `ln F(z)`; `-inf` at `z = 0` where `F(0) = 0`.
pub fn log_capital_f(z: f64) -> Result<BigFloat> {
    let mut hp = Hp::new()?;
    let z = hp.float(z);
    log_capital_f_hp(&mut hp, &z)
}

/// Saddle-point bound `F(sqrt n) / n^(n/2)` against `n I_n / n!`, in log space.
#[derive(Clone, Debug)]
pub struct SaddleReport {
    pub n: usize,
    /// `ln F(sqrt n) - (n/2) ln n`
    pub log_bound: BigFloat,
    /// `ln(n I_n / n!)`
    pub log_reference: BigFloat,
    /// `bound / reference`
    pub ratio: f64,
    /// `[z^n] F` computed exactly by its recurrence.
    pub exact_coefficient: BigRational,
    /// `ln [z^n] F`
    pub log_exact: BigFloat,
}

impl SaddleReport {
    pub fn exact_within_bound(&self) -> bool {
        self.log_exact <= self.log_bound
    }

    pub fn log_bound_f64(&self) -> f64 {
        to_f64(&self.log_bound)
    }

    pub fn log_reference_f64(&self) -> f64 {
        to_f64(&self.log_reference)
    }
}

fn ln_factorial(hp: &mut Hp, n: usize) -> BigFloat {
    let f = (1..=n as u64).fold(BigUint::from(1u32), |acc, k| acc * k);
    hp.ln_big(&f)
}

/// Fails with a verification error if the exact coefficient exceeds the bound.
pub fn saddle_bound(n: usize) -> Result<SaddleReport> {
    if n == 0 {
        return Err(Error::Domain("saddle bound needs n >= 1".into()));
    }
    let mut hp = Hp::new()?;
    let nf = hp.int(n as i64);
    let zeta = hp.sqrt(&nf);
    let log_f = log_capital_f_hp(&mut hp, &zeta)?;
    let ln_n = hp.ln(&nf);
    let log_bound = hp.sub(&log_f, &hp.mul(&hp.div(&nf, &hp.int(2)), &ln_n));
    let log_bound = hp.check(log_bound, "log bound")?;

    let inv = involutions_upto(n);
    let ln_in = hp.ln_big(&inv[n]);
    let ln_fact = ln_factorial(&mut hp, n);
    let log_reference = hp.sub(&hp.add(&ln_n, &ln_in), &ln_fact);
    let log_reference = hp.check(log_reference, "log reference")?;
    let ratio = to_f64(&hp.exp(&hp.sub(&log_bound, &log_reference)));

    let exact_coefficient = series_f(n)?.coeff(n).clone();
    let num = exact_coefficient.numer().to_biguint().expect("coefficients are nonnegative");
    let den = exact_coefficient.denom().to_biguint().expect("positive denominator");
    let (ln_num, ln_den) = (hp.ln_big(&num), hp.ln_big(&den));
    let log_exact = hp.sub(&ln_num, &ln_den);
    let report = SaddleReport { n, log_bound, log_reference, ratio, exact_coefficient, log_exact };
    if !report.exact_within_bound() {
        return Err(Error::Verification(format!("[z^{n}]F exceeds the saddle bound")));
    }
    Ok(report)
}

/// `(I_n / n!)` divided by `n^(-n/2) exp(n/2 + sqrt n - 1/4) / (2 sqrt(pi n))`.
pub fn involution_asymptotic_ratio(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("asymptotic ratio needs n >= 1".into()));
    }
    let mut hp = Hp::new()?;
    let inv = involutions_upto(n);
    let ln_in = hp.ln_big(&inv[n]);
    let ln_fact = ln_factorial(&mut hp, n);
    let exact = hp.sub(&ln_in, &ln_fact);

    let nf = hp.int(n as i64);
    let ln_n = hp.ln(&nf);
    let half_n = hp.div(&nf, &hp.int(2));
    let sqrt_n = hp.sqrt(&nf);
    let pi = hp.pi();
    let pi_n = hp.mul(&pi, &nf);
    let two = hp.int(2);
    let (ln_two, ln_pi_n) = (hp.ln(&two), hp.ln(&pi_n));
    let ln_two_sqrt_pi_n = hp.add(&ln_two, &hp.div(&ln_pi_n, &two));
    let mut approx = hp.mul(&half_n, &ln_n).neg();
    approx = hp.add(&approx, &half_n);
    approx = hp.add(&approx, &sqrt_n);
    approx = hp.sub(&approx, &hp.div(&hp.int(1), &hp.int(4)));
    approx = hp.sub(&approx, &ln_two_sqrt_pi_n);
    let r = hp.exp(&hp.sub(&exact, &approx));
    Ok(to_f64(&hp.check(r, "asymptotic ratio")?))
}

/// Exact scan of `(fp_n / I_n) / sqrt(n)` with `fp_n = n I_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointScan {
    pub lo: usize,
    pub hi: usize,
    /// `fp_n / I_n` strictly increases across the range.
    pub increasing: bool,
    /// Every value lies strictly inside `(0.8, 1.2)`, decided exactly.
    pub within_band: bool,
    pub min: f64,
    pub max: f64,
}

pub fn fixed_point_scan(lo: usize, hi: usize) -> Result<FixedPointScan> {
    if lo < 1 || hi < lo {
        return Err(Error::Domain(format!("bad fixed-point range {lo}..={hi}")));
    }
    let inv = involutions_upto(hi + 1);
    let mut increasing = true;
    let mut within_band = true;
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for n in lo..=hi {
        let (i_prev, i_n) = (&inv[n - 1], &inv[n]);
        // (n I_{n-1} / I_n)^2 / n = n I_{n-1}^2 / I_n^2, band (0.64, 1.44)
        let lhs = i_prev * i_prev * n as u64;
        let rhs = i_n * i_n;
        if !(&rhs * 64u32 < &lhs * 100u32 && &lhs * 100u32 < &rhs * 144u32) {
            within_band = false;
        }
        if n < hi {
            // n I_{n-1} / I_n < (n+1) I_n / I_{n+1}
            if i_prev * &inv[n + 1] * (n as u64) >= i_n * i_n * (n as u64 + 1) {
                increasing = false;
            }
        }
        let v = crate::closed::to_f64(&BigRational::new(lhs.into(), rhs.into())).sqrt();
        min = min.min(v);
        max = max.max(v);
    }
    Ok(FixedPointScan { lo, hi, increasing, within_band, min, max })
}
