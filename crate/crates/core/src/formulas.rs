//! Exact evaluation of the five sums and the surrounding identities.
//!
//! Everything here is integer or rational arithmetic on arbitrary-precision
//! values. The summation ranges follow the definitions term by term; the
//! only liberty taken is [`eval_v`] at `r = 0`, where the defining sum is
//! degenerate and the value of the empty stratum is returned instead.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::BigCount;

const PASCAL_ROWS: usize = 320;

fn pascal() -> &'static [Vec<BigUint>] {
    static ROWS: OnceLock<Vec<Vec<BigUint>>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(PASCAL_ROWS);
        rows.push(vec![BigUint::one()]);
        for a in 1..PASCAL_ROWS {
            let prev = &rows[a - 1];
            let mut row = Vec::with_capacity(a + 1);
            row.push(BigUint::one());
            for b in 1..a {
                row.push(&prev[b - 1] + &prev[b]);
            }
            row.push(BigUint::one());
            rows.push(row);
        }
        rows
    })
}

/// Binomial coefficient with the convention: `0` for `b < 0`; `1` for
/// `b = 0` and any `a` (negative included); `0` for `b > 0` with `a < b` or
/// `a < 0`.
pub fn binom(a: i64, b: i64) -> BigUint {
    if b < 0 {
        return BigUint::zero();
    }
    if b == 0 {
        return BigUint::one();
    }
    if a < 0 || a < b {
        return BigUint::zero();
    }
    let (a, b) = (a as usize, b as usize);
    if a < PASCAL_ROWS {
        return pascal()[a][b].clone();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= BigUint::from(a - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

fn binom_i(a: i64, b: i64) -> BigInt {
    BigInt::from(binom(a, b))
}

/// `2^k` as an exact integer.
pub fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

fn sign_power(e: usize) -> BigInt {
    if e.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn to_count(v: BigInt, what: &str) -> Result<BigCount> {
    v.to_biguint().ok_or_else(|| Error::internal(format!("{what} evaluated to a negative value")))
}

fn check_nr(n: usize, r: usize) -> Result<()> {
    if n < 1 || r >= n {
        return Err(Error::range(format!("need n >= 1 and 0 <= r <= n-1, got n={n}, r={r}")));
    }
    Ok(())
}

/// `S(m, r) = sum_{i=r+1}^{floor(m/2)} C(m, 2i) C(i-1, r)`; empty sums are 0.
pub fn eval_s(m: usize, r: usize) -> BigCount {
    let (m, r) = (m as i64, r as i64);
    (r + 1..=m / 2).map(|i| binom(m, 2 * i) * binom(i - 1, r)).sum()
}

/// `T(n, r) = sum_{j=r+1}^{n} C(n, j) C(j-1, r)`.
pub fn eval_t(n: usize, r: usize) -> Result<BigCount> {
    check_nr(n, r)?;
    let (n, r) = (n as i64, r as i64);
    Ok((r + 1..=n).map(|j| binom(n, j) * binom(j - 1, r)).sum())
}

/// `U(n, r) = sum_{j=r+1}^{n} C(j-1, r) 2^{j-1-r}`.
pub fn eval_u(n: usize, r: usize) -> Result<BigCount> {
    check_nr(n, r)?;
    Ok((r + 1..=n).map(|j| binom(j as i64 - 1, r as i64) * pow2(j - 1 - r)).sum())
}

/// `V(n, r) = sum_{j=1}^{n-r} C(n-1-j, r-1) 2^{n-r-j} (2^j - 1)` for
/// `r >= 1`, and `2^n - 1` for `r = 0`.
pub fn eval_v(n: usize, r: usize) -> Result<BigCount> {
    check_nr(n, r)?;
    if r == 0 {
        return Ok(pow2(n) - 1u32);
    }
    Ok((1..=n - r).map(|j| binom((n - 1 - j) as i64, r as i64 - 1) * pow2(n - r - j) * (pow2(j) - 1u32)).sum())
}

/// `W(n, r) = 2^{n-r} sum_{k=0}^{floor(r/2)} C(n-2-2k, r-2k) + (-1)^{r+1}`.
pub fn eval_w(n: usize, r: usize) -> Result<BigCount> {
    check_nr(n, r)?;
    let (ni, ri) = (n as i64, r as i64);
    let inner: BigUint = (0..=ri / 2).map(|k| binom(ni - 2 - 2 * k, ri - 2 * k)).sum();
    let value = BigInt::from(inner * pow2(n - r)) + sign_power(r + 1);
    to_count(value, "W")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SumName {
    S,
    T,
    U,
    V,
    W,
}

impl SumName {
    pub const ALL: [SumName; 5] = [SumName::S, SumName::T, SumName::U, SumName::V, SumName::W];

    /// Evaluates the named sum. `S` takes the board length `m`; the others
    /// take `n`.
    pub fn eval(self, size: usize, r: usize) -> Result<BigCount> {
        match self {
            SumName::S => {
                if size < 1 {
                    return Err(Error::range("S needs m >= 1"));
                }
                Ok(eval_s(size, r))
            }
            SumName::T => eval_t(size, r),
            SumName::U => eval_u(size, r),
            SumName::V => eval_v(size, r),
            SumName::W => eval_w(size, r),
        }
    }
}

impl std::str::FromStr for SumName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" | "s" => Ok(SumName::S),
            "T" | "t" => Ok(SumName::T),
            "U" | "u" => Ok(SumName::U),
            "V" | "v" => Ok(SumName::V),
            "W" | "w" => Ok(SumName::W),
            other => {
                Err(Error::Parse { offset: 0, message: format!("unknown sum {other:?} (expected S, T, U, V or W)") })
            }
        }
    }
}

/// Both sides of `sum_{i=r}^{floor(m/2)} C(m,2i) C(i,r) = 2^{m-1-2r} C(m-r,r) m/(m-r)`.
///
/// The right side is evaluated over the rationals (the power of two is
/// `1/2` when `m = 2r`) and must come out integral.
pub fn moriarty(m: usize, r: usize) -> Result<(BigCount, BigCount)> {
    if m < 1 || r > m / 2 || m <= r {
        return Err(Error::range(format!("need m >= 1, r <= m/2, m > r, got m={m}, r={r}")));
    }
    let (mi, ri) = (m as i64, r as i64);
    let lhs: BigUint = (ri..=mi / 2).map(|i| binom(mi, 2 * i) * binom(i, ri)).sum();

    let exponent = mi - 1 - 2 * ri;
    let power = if exponent >= 0 {
        BigRational::from_integer(BigInt::from(pow2(exponent as usize)))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(pow2((-exponent) as usize)))
    };
    let rhs = power
        * BigRational::from_integer(binom_i(mi - ri, ri))
        * BigRational::new(BigInt::from(m), BigInt::from(m - r));
    if !rhs.is_integer() {
        return Err(Error::NonIntegralResult(format!("moriarty rhs at m={m}, r={r} is {rhs}")));
    }
    Ok((lhs, to_count(rhs.to_integer(), "moriarty rhs")?))
}

/// Both sides of `sum_{j=r}^{n} C(n,j) C(j,r) = 2^{n-r} C(n,r)`.
pub fn companion_identity(n: usize, r: usize) -> Result<(BigCount, BigCount)> {
    if r > n {
        return Err(Error::range(format!("need r <= n, got n={n}, r={r}")));
    }
    let (ni, ri) = (n as i64, r as i64);
    let lhs: BigUint = (ri..=ni).map(|j| binom(ni, j) * binom(j, ri)).sum();
    let rhs = pow2(n - r) * binom(ni, ri);
    Ok((lhs, rhs))
}

/// Truncated formal power series with exact integer coefficients. The
/// truncation degree is `coefficients().len() - 1` and is never extended by
/// arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigInt>,
}

impl Series {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least its constant term");
        Series { coeffs }
    }

    pub fn from_fn(degree: usize, f: impl Fn(usize) -> BigInt) -> Self {
        Series { coeffs: (0..=degree).map(f).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Product truncated to the smaller of the two degrees.
    pub fn mul_truncated(&self, other: &Series) -> Series {
        let d = self.degree().min(other.degree());
        Series::from_fn(d, |k| (0..=k).map(|i| &self.coeffs[i] * &other.coeffs[k - i]).sum())
    }

    /// Multiplies by `x^k` and re-truncates to `degree`.
    pub fn shifted(&self, k: usize, degree: usize) -> Series {
        Series::from_fn(degree, |i| if i < k { BigInt::zero() } else { self.coeff(i - k) })
    }
}

/// Coefficients of `x^{2r+2} / ((1-x)(1-2x)^{r+1})` for `x^0 .. x^{m_max}`.
pub fn gf_coefficients(r: usize, m_max: usize) -> Result<Vec<BigCount>> {
    let lead = 2 * r + 2;
    if m_max < lead {
        return Err(Error::range(format!("m_max must be at least 2r+2 = {lead}, got {m_max}")));
    }
    let d = m_max - lead;
    let geometric = Series::from_fn(d, |_| BigInt::one());
    let negative_binomial = Series::from_fn(d, |j| binom_i((j + r) as i64, r as i64) * BigInt::from(pow2(j)));
    geometric
        .mul_truncated(&negative_binomial)
        .shifted(lead, m_max)
        .coefficients()
        .iter()
        .map(|c| to_count(c.clone(), "series coefficient"))
        .collect()
}

/// `(24n^2+44n+16) f(n) + (21n^2+37n+14) f(n+1) - (3n^2+7n+2) f(n+2)` with
/// `f(n) = T(2n, n)`.
pub fn recurrence_residual(n: usize) -> Result<BigInt> {
    if n < 1 {
        return Err(Error::range("recurrence residual needs n >= 1"));
    }
    let f = |k: usize| eval_t(2 * k, k).map(BigInt::from);
    let x = BigInt::from(n);
    let quad = |a: i64, b: i64, c: i64| &x * &x * a + &x * b + c;
    Ok(quad(24, 44, 16) * f(n)? + quad(21, 37, 14) * f(n + 1)? - quad(3, 7, 2) * f(n + 2)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityCheck {
    pub is_odd: bool,
    pub divisibility_ok: bool,
}

/// Is `S(m, r)` odd, and does `2^{m-1-2r}` divide `S(m, r) + (-1)^r`?
pub fn oddness_and_divisibility(m: usize, r: usize) -> Result<ParityCheck> {
    if 2 * r + 2 > m {
        return Err(Error::range(format!("need 0 <= r <= m/2 - 1, got m={m}, r={r}")));
    }
    let s = eval_s(m, r);
    let is_odd = s.is_odd();
    let shifted = BigInt::from(s) + sign_power(r);
    let modulus = BigInt::from(pow2(m - 1 - 2 * r));
    Ok(ParityCheck { is_odd, divisibility_ok: shifted.mod_floor(&modulus).is_zero() })
}

/// Exponent of the largest power of two dividing `v` (`None` for zero).
pub fn two_adic_valuation(v: &BigInt) -> Option<u64> {
    if v.is_zero() {
        None
    } else {
        v.abs().trailing_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigCount {
        BigUint::from(v)
    }

    /// Factorial-based binomial, independent of the Pascal table.
    fn factorial_binom(a: u64, b: u64) -> BigUint {
        let fact = |k: u64| (1..=k).fold(BigUint::one(), |acc, i| acc * i);
        fact(a) / (fact(b) * fact(a - b))
    }

    #[test]
    fn binom_convention() {
        assert_eq!(binom(6, 4), big(15));
        assert_eq!(binom(-1, 0), big(1));
        assert_eq!(binom(0, 1), big(0));
        assert_eq!(binom(-3, 2), big(0));
        assert_eq!(binom(5, -1), big(0));
        assert_eq!(binom(0, 0), big(1));
    }

    #[test]
    fn binom_matches_factorials_on_both_paths() {
        for a in [0u64, 1, 7, 40, 319, 320, 321, 400] {
            for b in [0u64, 1, 2, a / 3, a / 2, a].into_iter().filter(|&b| b <= a) {
                assert_eq!(binom(a as i64, b as i64), factorial_binom(a, b), "C({a},{b})");
            }
        }
    }

    #[test]
    fn sum_examples() {
        assert_eq!(eval_s(6, 1), big(17));
        assert_eq!(eval_s(2, 0), big(1));
        assert_eq!(eval_s(15, 4), big(5503));
        assert_eq!(eval_t(9, 2).unwrap(), big(2815));
        assert_eq!(eval_u(4, 1).unwrap(), big(17));
        assert_eq!(eval_v(4, 1).unwrap(), big(17));
        assert_eq!(eval_w(9, 2).unwrap(), big(2815));
        assert_eq!(eval_w(1, 0).unwrap(), big(1));
        assert_eq!(eval_w(3, 2).unwrap(), big(1));
        assert_eq!(eval_v(5, 0).unwrap(), big(31));
    }

    #[test]
    fn range_errors() {
        for f in [eval_t, eval_u, eval_v, eval_w] {
            assert!(matches!(f(3, 3), Err(Error::Range(_))));
            assert!(matches!(f(0, 0), Err(Error::Range(_))));
        }
        assert!(gf_coefficients(2, 5).is_err());
        assert!(recurrence_residual(0).is_err());
        assert!(oddness_and_divisibility(5, 2).is_err());
        assert!(moriarty(4, 3).is_err());
        assert!(companion_identity(2, 3).is_err());
    }

    #[test]
    fn moriarty_examples() {
        assert_eq!(moriarty(6, 1).unwrap(), (big(48), big(48)));
        assert_eq!(moriarty(2, 1).unwrap(), (big(1), big(1)));
        for m in 1..=20u32 {
            let p = big(1) << (m - 1);
            assert_eq!(moriarty(m as usize, 0).unwrap(), (p.clone(), p));
        }
    }

    #[test]
    fn companion_examples() {
        assert_eq!(companion_identity(4, 1).unwrap(), (big(32), big(32)));
        assert_eq!(companion_identity(7, 7).unwrap(), (big(1), big(1)));
        assert_eq!(companion_identity(3, 0).unwrap(), (big(8), big(8)));
    }

    #[test]
    fn generating_function_examples() {
        assert_eq!(gf_coefficients(0, 4).unwrap(), vec![big(0), big(0), big(1), big(3), big(7)]);
        assert_eq!(gf_coefficients(1, 6).unwrap()[6], big(17));
        assert_eq!(gf_coefficients(4, 15).unwrap()[15], big(5503));
    }

    #[test]
    fn series_truncation_is_explicit() {
        let a = Series::from_fn(3, |i| BigInt::from(i + 1));
        let b = Series::from_fn(5, |_| BigInt::one());
        let p = a.mul_truncated(&b);
        assert_eq!(p.degree(), 3);
        assert_eq!(p.coefficients(), &[1, 3, 6, 10].map(BigInt::from));
        let s = p.shifted(2, 4);
        assert_eq!(s.coefficients(), &[0, 0, 1, 3, 6].map(BigInt::from));
    }

    #[test]
    fn recurrence_examples() {
        // f(1..4) from the published T table.
        assert_eq!(eval_t(2, 1).unwrap(), big(1));
        assert_eq!(eval_t(4, 2).unwrap(), big(7));
        assert_eq!(eval_t(6, 3).unwrap(), big(49));
        assert_eq!(eval_t(8, 4).unwrap(), big(351));
        let n1 = 84 + 72 * 7 - 12 * 49;
        assert_eq!(n1, 0);
        for n in 1..=12 {
            assert!(recurrence_residual(n).unwrap().is_zero(), "n={n}");
        }
    }

    #[test]
    fn parity_examples() {
        for (m, r) in [(6, 1), (2, 0), (15, 4)] {
            assert_eq!(oddness_and_divisibility(m, r).unwrap(), ParityCheck { is_odd: true, divisibility_ok: true });
        }
        assert_eq!(two_adic_valuation(&BigInt::from(5504)), Some(7));
    }

    #[test]
    fn s_is_strictly_increasing_in_m() {
        for r in 0..6 {
            for m in 2 * r + 2..60 {
                assert!(eval_s(m + 1, r) > eval_s(m, r), "m={m} r={r}");
            }
        }
    }
}
