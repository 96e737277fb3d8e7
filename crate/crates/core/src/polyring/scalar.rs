use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n (n-1) ... (n-k+1)`, the coefficient produced by `k` derivatives of `x^n`.
pub fn falling_factorial(n: u32, k: u32) -> BigInt {
    debug_assert!(k <= n);
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}
