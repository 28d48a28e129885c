//! Closed forms and recurrences, evaluated exactly.
//!
//! Class 11 is `Av(123,132,321)`, Class 17 is `Av(123,132)` and Class 18 is
//! `Av(132,231)`. Bold-face totals (`231_n` and friends) are total numbers
//! of consecutive occurrences summed over the class at size `n`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn domain(what: &str, n: i64, min: i64) -> Result<()> {
    if n < min {
        Err(Error::Domain(format!("{what} needs n >= {min}, got {n}")))
    } else {
        Ok(())
    }
}

/// `n!!`, with `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigUint> {
    domain("double factorial", n, -1)?;
    let mut acc = BigUint::one();
    let mut k = n;
    while k > 1 {
        acc *= k as u64;
        k -= 2;
    }
    Ok(acc)
}

fn df(n: i64) -> BigUint {
    double_factorial(n).expect("argument checked by caller")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: u64) -> Parity {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    fn admits(self, k: u64) -> bool {
        Parity::of(k) == self
    }
}

/// `sum of 1/k` over `1 <= k <= n` with `k` of the given parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicPartialSum {
    pub n: u64,
    pub parity: Parity,
    pub value: BigRational,
}

impl HarmonicPartialSum {
    pub fn new(n: u64, parity: Parity) -> Self {
        // accumulate unreduced and reduce once
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for k in (1..=n).filter(|&k| parity.admits(k)) {
            num = num * k + &den;
            den *= k;
        }
        HarmonicPartialSum { n, parity, value: BigRational::new(num, den) }
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn into_count(x: BigRational, what: &str) -> Result<BigUint> {
    if !x.is_integer() || x.is_negative() {
        return Err(Error::Verification(format!("{what} evaluated to {x}, not a natural number")));
    }
    Ok(x.to_integer().to_biguint().expect("nonnegative"))
}

fn ceil_half(x: i64) -> i64 {
    (x + 1).div_euclid(2)
}

/// `|A_n| = (n-1)!! + (n-2)!!` for Class 11.
pub fn class11_size(n: i64) -> Result<BigUint> {
    domain("class 11 size", n, 2)?;
    Ok(df(n - 1) + df(n - 2))
}

pub fn count_231_class11(n: i64) -> Result<BigUint> {
    domain("231_n", n, 3)?;
    Ok(df(n - 1) * ceil_half(n - 3) as u64 + df(n - 2) * ceil_half(n - 2) as u64)
}

// ((-1)^(N) + N - 2) / 4 + S(N) / 2 with S(N) the harmonic sum over k <= N
// of the parity of N; the l-part uses N = n - 1, the r-part N = n - 2.
fn bracket_312(big_n: i64, harmonic: &BigRational) -> BigRational {
    let sign = if big_n % 2 == 0 { 1 } else { -1 };
    ratio(sign + big_n - 2, 4) + harmonic / BigRational::from_integer(2.into())
}

fn harmonic_same_parity(big_n: i64) -> BigRational {
    let big_n = big_n.max(0) as u64;
    HarmonicPartialSum::new(big_n, Parity::of(big_n)).value
}

/// `312^l_n`, the 312 total over members with 1 in position `n - 1`.
pub fn count_312_l(n: i64) -> Result<BigUint> {
    domain("312^l_n", n, 3)?;
    let x = BigRational::from_integer(df(n - 1).into()) * bracket_312(n - 1, &harmonic_same_parity(n - 1));
    into_count(x, "312^l_n")
}

/// `312^r_n`, the 312 total over members ending in 1.
pub fn count_312_r(n: i64) -> Result<BigUint> {
    domain("312^r_n", n, 3)?;
    let x = BigRational::from_integer(df(n - 2).into()) * bracket_312(n - 2, &harmonic_same_parity(n - 2));
    into_count(x, "312^r_n")
}

pub fn count_312_class11(n: i64) -> Result<BigUint> {
    Ok(count_312_l(n)? + count_312_r(n)?)
}

pub fn count_213_class11(n: i64) -> Result<BigUint> {
    domain("213_n", n, 3)?;
    let all = class11_size(n)? * (n - 2) as u64;
    let used = count_231_class11(n)? + count_312_class11(n)?;
    if used > all {
        return Err(Error::Verification(format!("213_{n} would be negative")));
    }
    Ok(all - used)
}

/// `312^l_n` from `312^l_{n-2}` by the l-recurrence, for `n >= 5`.
pub fn rec_312_l(n: i64, l_prev2: &BigUint) -> Result<BigUint> {
    domain("312^l recurrence", n, 5)?;
    let grow = (l_prev2 + df(n - 3)) * (n - 1) as u64;
    let cut = df(n - 5) * ((n - 3) * (n - 2) / 2) as u64;
    if cut > grow {
        return Err(Error::Verification(format!("312^l recurrence negative at n = {n}")));
    }
    Ok(grow - cut)
}

/// `312^r_n = 312^l_{n-1}` for `n >= 5`.
pub fn rec_312_r(n: i64, l_prev1: &BigUint) -> Result<BigUint> {
    domain("312^r recurrence", n, 5)?;
    Ok(l_prev1.clone())
}

/// `u_n = 312^l_n / (n-1)!!` for `3 <= n <= n_max` by
/// `u_n = u_{n-2} + 1 - (n-2)/(2(n-1))`, seeded with `u_3 = 1/2`, `u_4 = 2/3`.
pub fn u_sequence(n_max: usize) -> Vec<(usize, BigRational)> {
    let mut out: Vec<(usize, BigRational)> = Vec::new();
    for n in 3..=n_max {
        let u = match n {
            3 => ratio(1, 2),
            4 => ratio(2, 3),
            _ => {
                let prev = &out[n - 5].1;
                prev + BigRational::one() - ratio(n as i64 - 2, 2 * (n as i64 - 1))
            }
        };
        out.push((n, u));
    }
    out
}

/// Exact Class 11 totals at one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class11Counts {
    pub n: usize,
    pub size: BigUint,
    pub p231: BigUint,
    pub p312: BigUint,
    pub p213: BigUint,
}

/// Closed forms for `3 <= n <= n_max`, sharing the harmonic sums across n.
pub fn class11_closed_form_table(n_max: usize) -> Result<Vec<Class11Counts>> {
    // harmonic[N] = S(N)
    let mut harmonic: Vec<BigRational> = vec![BigRational::zero(); n_max.max(2)];
    for big_n in 1..harmonic.len() {
        let below = if big_n >= 2 { harmonic[big_n - 2].clone() } else { BigRational::zero() };
        harmonic[big_n] = below + ratio(1, big_n as i64);
    }
    let mut dfs = vec![BigUint::one(); n_max.max(2)];
    for k in 2..dfs.len() {
        dfs[k] = &dfs[k - 2] * k as u64;
    }
    (3..=n_max)
        .map(|n| {
            let ni = n as i64;
            let size = &dfs[n - 1] + &dfs[n - 2];
            let p231 = &dfs[n - 1] * ceil_half(ni - 3) as u64 + &dfs[n - 2] * ceil_half(ni - 2) as u64;
            let l = BigRational::from_integer(dfs[n - 1].clone().into()) * bracket_312(ni - 1, &harmonic[n - 1]);
            let r = BigRational::from_integer(dfs[n - 2].clone().into()) * bracket_312(ni - 2, &harmonic[n - 2]);
            let p312 = into_count(l, "312^l_n")? + into_count(r, "312^r_n")?;
            let all = &size * (n - 2) as u64;
            let used = &p231 + &p312;
            if used > all {
                return Err(Error::Verification(format!("213_{n} would be negative")));
            }
            Ok(Class11Counts { n, p213: all - used, size, p231, p312 })
        })
        .collect()
}

/// `I_0..=I_{n_max}` by `I_n = I_{n-1} + (n-1) I_{n-2}`.
pub fn involutions_upto(n_max: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::one(); n_max + 1];
    for n in 2..=n_max {
        out[n] = &out[n - 1] + &out[n - 2] * (n - 1) as u64;
    }
    out
}

pub fn involutions_count(n: usize) -> BigUint {
    involutions_upto(n).pop().expect("nonempty")
}

/// Total number of fixed points over all involutions of size `n`: `n I_{n-1}`.
pub fn fixed_points_total(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    involutions_count(n - 1) * n as u64
}

/// `321_n = (n-1) 2^(n-2) - 2^(n-1) + 1` in Class 18.
pub fn count_321_class18(n: i64) -> Result<BigUint> {
    domain("321_n (class 18)", n, 2)?;
    let pow = |e: i64| BigUint::one() << e as usize;
    let x = pow(n - 2) * (n - 1) as u64 + 1u32;
    Ok(x - pow(n - 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class18Counts {
    pub n: usize,
    pub size: BigUint,
    pub p123: BigUint,
    pub p213: BigUint,
    pub p312: BigUint,
    pub p321: BigUint,
}

/// All four Class 18 totals. The class is closed under reversal, which
/// swaps 123 with 321 and 213 with 312; the window identity fixes the rest.
pub fn class18_counts(n: i64) -> Result<Class18Counts> {
    domain("class 18 counts", n, 2)?;
    let size = BigUint::one() << (n - 1) as usize;
    let p321 = count_321_class18(n)?;
    let windows = &size * (n - 2) as u64;
    let rest = windows - &p321 * 2u32;
    let (half, odd) = rest.div_rem(&BigUint::from(2u32));
    if !odd.is_zero() {
        return Err(Error::Verification(format!("class 18 window split not even at n = {n}")));
    }
    Ok(Class18Counts { n: n as usize, size, p123: p321.clone(), p213: half.clone(), p312: half, p321 })
}

/// `2314_n` for `0..=n_max` in Class 17 (zero below 4), by
/// `2314_n = 2314_{n-1} + (n-1) 2314_{n-2} + C(n-2, 2) I_{n-4}`.
pub fn seq_2314_class17(n_max: usize) -> Vec<BigUint> {
    let inv = involutions_upto(n_max.max(4));
    let mut out = vec![BigUint::zero(); n_max + 1];
    for n in 4..=n_max {
        out[n] = match n {
            4 => BigUint::one(),
            5 => BigUint::from(4u32),
            _ => {
                let binom = ((n - 2) * (n - 3) / 2) as u64;
                &out[n - 1] + &out[n - 2] * (n - 1) as u64 + &inv[n - 4] * binom
            }
        };
    }
    out
}

pub fn count_2314_class17(n: i64) -> Result<BigUint> {
    domain("2314_n", n, 4)?;
    Ok(seq_2314_class17(n as usize).pop().expect("nonempty"))
}

/// Convenience for reporting.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(0).unwrap(), big(1));
        assert_eq!(double_factorial(-1).unwrap(), big(1));
        assert_eq!(double_factorial(5).unwrap(), big(15));
        assert_eq!(double_factorial(6).unwrap(), big(48));
        assert!(matches!(double_factorial(-2), Err(Error::Domain(_))));
    }

    #[test]
    fn harmonic_sums() {
        let h = HarmonicPartialSum::new(5, Parity::Odd);
        assert_eq!(h.value, ratio(23, 15));
        assert_eq!(HarmonicPartialSum::new(4, Parity::Even).value, ratio(3, 4));
        assert_eq!(HarmonicPartialSum::new(0, Parity::Even).value, BigRational::zero());
    }

    #[test]
    fn class11_small_values() {
        assert_eq!(count_231_class11(3).unwrap(), big(1));
        assert_eq!(count_231_class11(4).unwrap(), big(5));
        assert_eq!(count_231_class11(5).unwrap(), big(14));
        assert_eq!(count_312_class11(4).unwrap(), big(3));
        assert_eq!(count_312_l(3).unwrap(), big(1));
        assert_eq!(count_312_l(5).unwrap(), big(9));
        assert_eq!(count_213_class11(4).unwrap(), big(2));
        assert_eq!(count_213_class11(3).unwrap(), big(1));
        assert!(count_231_class11(2).is_err());
    }

    #[test]
    fn table_matches_pointwise() {
        for c in class11_closed_form_table(40).unwrap() {
            let n = c.n as i64;
            assert_eq!(c.p231, count_231_class11(n).unwrap());
            assert_eq!(c.p312, count_312_class11(n).unwrap());
            assert_eq!(c.p213, count_213_class11(n).unwrap());
            assert_eq!(c.size, class11_size(n).unwrap());
        }
    }

    #[test]
    fn involution_counts() {
        assert_eq!(involutions_count(0), big(1));
        assert_eq!(involutions_count(4), big(10));
        assert_eq!(involutions_count(9), big(2620));
        assert_eq!(fixed_points_total(4), big(16));
    }

    #[test]
    fn class18_values() {
        assert_eq!(count_321_class18(2).unwrap(), big(0));
        assert_eq!(count_321_class18(4).unwrap(), big(5));
        assert_eq!(count_321_class18(6).unwrap(), big(49));
    }

    #[test]
    fn values_2314() {
        assert_eq!(count_2314_class17(4).unwrap(), big(1));
        assert_eq!(count_2314_class17(5).unwrap(), big(4));
        assert_eq!(count_2314_class17(6).unwrap(), big(21));
        assert!(count_2314_class17(3).is_err());
    }

    #[test]
    fn recurrences_for_312() {
        assert_eq!(rec_312_l(5, &count_312_l(3).unwrap()).unwrap(), big(9));
        for n in 5..=30 {
            let l = count_312_l(n).unwrap();
            assert_eq!(rec_312_l(n, &count_312_l(n - 2).unwrap()).unwrap(), l);
            assert_eq!(rec_312_r(n, &count_312_l(n - 1).unwrap()).unwrap(), count_312_r(n).unwrap());
        }
    }

    #[test]
    fn u_recurrence_matches_closed_form() {
        for (n, u) in u_sequence(30) {
            let l = BigRational::from_integer(count_312_l(n as i64).unwrap().into());
            let d = BigRational::from_integer(double_factorial(n as i64 - 1).unwrap().into());
            assert_eq!(u, l / d, "u_{n}");
        }
    }
}
