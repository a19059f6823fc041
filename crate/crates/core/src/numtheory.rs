//! Elementary number theory over `u64` inputs with exact rational outputs.
//!
//! Factorization is trial division by a prime table up to 10^6, which is far
//! beyond any group order this crate handles.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::scalar::ExactScalar;

const SIEVE_LIMIT: usize = 1_000_000;

static PRIMES: Lazy<Vec<u64>> = Lazy::new(|| {
    let mut composite = vec![false; SIEVE_LIMIT + 1];
    let mut primes = Vec::with_capacity(80_000);
    for i in 2..=SIEVE_LIMIT {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= SIEVE_LIMIT {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
});

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("argument must be a positive integer, got 0")]
    Zero,
    #[error("value missing for divisor {0}")]
    MissingDivisor(u64),
    #[error("exact evaluation requested with non-integer exponents r={r}, s={s}")]
    InexactParameters { r: String, s: String },
}

fn nonzero(n: u64) -> Result<u64, NumError> {
    if n == 0 {
        Err(NumError::Zero)
    } else {
        Ok(n)
    }
}

/// A positive integer stored as its prime factorization. The value 1 is the
/// empty map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FactoredInteger {
    factors: BTreeMap<u64, u64>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds from (prime, exponent) pairs; zero exponents are dropped.
    /// Callers must pass primes.
    pub fn from_prime_powers(pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut out = Self::one();
        for (p, e) in pairs {
            out.multiply_prime_power(p, e);
        }
        out
    }

    pub fn factors(&self) -> &BTreeMap<u64, u64> {
        &self.factors
    }

    pub fn exponent(&self, p: u64) -> u64 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.keys().copied()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn multiply_prime_power(&mut self, p: u64, e: u64) {
        if e > 0 {
            *self.factors.entry(p).or_insert(0) += e;
        }
    }

    /// `self * other^k`, exponent-wise.
    pub fn multiply_pow(&mut self, other: &FactoredInteger, k: u64) {
        for (&p, &e) in &other.factors {
            let add = e.checked_mul(k).expect("exponent overflow");
            self.multiply_prime_power(p, add);
        }
    }

    /// `self^k`.
    pub fn pow(&self, k: u64) -> Self {
        let mut out = Self::one();
        out.multiply_pow(self, k);
        out
    }

    /// Divides out `p^e`; `None` when `p^e` does not divide `self`.
    pub fn divide_prime_power(&mut self, p: u64, e: u64) -> Option<()> {
        if e == 0 {
            return Some(());
        }
        let cur = self.factors.get_mut(&p)?;
        if *cur < e {
            return None;
        }
        *cur -= e;
        if *cur == 0 {
            self.factors.remove(&p);
        }
        Some(())
    }

    /// True when `self` divides `other`, i.e. every exponent of `self` is at
    /// most the matching exponent of `other`.
    pub fn divides(&self, other: &FactoredInteger) -> bool {
        self.factors.iter().all(|(p, e)| other.exponent(*p) >= *e)
    }

    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (&p, &e)| acc * num_traits::pow(BigUint::from(p), e as usize))
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

pub fn factorize(n: u64) -> Result<FactoredInteger, NumError> {
    let mut n = nonzero(n)?;
    let mut out = FactoredInteger::one();
    for &p in PRIMES.iter() {
        if p * p > n {
            break;
        }
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        out.multiply_prime_power(p, e);
    }
    // Past the table the remaining cofactor may still be composite.
    let mut d = SIEVE_LIMIT as u64 + 1;
    while n > 1 && d.saturating_mul(d) <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        out.multiply_prime_power(d, e);
        d += 2;
    }
    if n > 1 {
        out.multiply_prime_power(n, 1);
    }
    Ok(out)
}

/// All divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Result<Vec<u64>, NumError> {
    let f = factorize(n)?;
    let mut out = vec![1u64];
    for (&p, &e) in f.factors() {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Number of positive divisors, `d(n)`.
pub fn divisor_count(n: u64) -> Result<u64, NumError> {
    Ok(factorize(n)?.factors().values().map(|e| e + 1).product())
}

pub fn totient(n: u64) -> Result<u64, NumError> {
    let f = factorize(n)?;
    Ok(f.factors()
        .iter()
        .map(|(&p, &e)| (p - 1) * p.pow(e as u32 - 1))
        .product())
}

pub fn moebius(n: u64) -> Result<i8, NumError> {
    let f = factorize(n)?;
    if f.factors().values().any(|&e| e > 1) {
        return Ok(0);
    }
    Ok(if f.factors().len() % 2 == 0 { 1 } else { -1 })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f.factors().get(&n) == Some(&1)).unwrap_or(false)
}

pub fn is_prime_power(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f.factors().len() == 1).unwrap_or(false)
}

pub fn largest_prime_factor(n: u64) -> Result<Option<u64>, NumError> {
    Ok(factorize(n)?.primes().last())
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// Möbius inversion over the divisor lattice of `n`: given `g` on every
/// divisor of `n`, returns `f` with `g(d) = sum_{e | d} f(e)` for each `d | n`.
pub fn moebius_invert(
    g: &BTreeMap<u64, ExactScalar>,
    n: u64,
) -> Result<BTreeMap<u64, ExactScalar>, NumError> {
    let divs = divisors(n)?;
    if let Some(&missing) = divs.iter().find(|d| !g.contains_key(d)) {
        return Err(NumError::MissingDivisor(missing));
    }
    let mut f = BTreeMap::new();
    for &d in &divs {
        let mut acc = ExactScalar::zero();
        for e in divisors(d)? {
            match moebius(d / e)? {
                0 => {}
                1 => acc = acc + &g[&e],
                _ => acc = acc - &g[&e],
            }
        }
        f.insert(d, acc);
    }
    Ok(f)
}

/// Integer exponents of `(r, s)` when both are exact integers.
pub fn integer_exponents(r: &ExactScalar, s: &ExactScalar) -> Option<(i32, i32)> {
    Some((r.as_integer()?, s.as_integer()?))
}

/// `m^s / phi(m)^r`.
pub fn weight(m: u64, r: &ExactScalar, s: &ExactScalar) -> Result<ExactScalar, NumError> {
    let phi = totient(m)?;
    Ok(match integer_exponents(r, s) {
        Some((ri, si)) => ExactScalar::Rational(
            ExactScalar::int_pow(m, si) / ExactScalar::int_pow(phi, ri),
        ),
        None => ExactScalar::Approx((m as f64).powf(s.to_f64()) / (phi as f64).powf(r.to_f64())),
    })
}

/// `sum_{i | x} i^s / phi(i)^(r-1)`.
pub fn sigma_weighted(x: u64, r: &ExactScalar, s: &ExactScalar) -> Result<ExactScalar, NumError> {
    let r_minus_one = r - &ExactScalar::one();
    divisors(x)?.into_iter().map(|i| weight(i, &r_minus_one, s)).sum()
}

fn pow_scalar(base: u64, exp: &ExactScalar) -> ExactScalar {
    match exp.as_integer() {
        Some(e) => ExactScalar::Rational(ExactScalar::int_pow(base, e)),
        None => ExactScalar::Approx((base as f64).powf(exp.to_f64())),
    }
}

/// Closed product form of the Möbius-weighted coefficient
/// `g(m, j) = sum_{i | j} mu(i) (m i)^s / phi(m i)^r`:
///
/// `m^s/phi(m)^r * prod_{p | j, p | m} (1 - p^(s-r)) * prod_{p | j, p ∤ m} (1 - p^s/(p-1)^r)`.
///
/// Exact when both exponents are integers.
pub fn g_coefficient(
    m: u64,
    j: u64,
    r: &ExactScalar,
    s: &ExactScalar,
) -> Result<ExactScalar, NumError> {
    nonzero(m)?;
    let jf = factorize(j)?;
    let mut acc = weight(m, r, s)?;
    let s_minus_r = s - r;
    for p in jf.primes() {
        let factor = if m % p == 0 {
            ExactScalar::one() - pow_scalar(p, &s_minus_r)
        } else {
            let num = pow_scalar(p, s);
            let den = pow_scalar(p - 1, r);
            let ratio = match (&num, &den) {
                (ExactScalar::Rational(a), ExactScalar::Rational(b)) => ExactScalar::Rational(a / b),
                _ => ExactScalar::Approx(num.to_f64() / den.to_f64()),
            };
            ExactScalar::one() - ratio
        };
        acc = acc * factor;
    }
    Ok(acc)
}

/// Same as [`g_coefficient`] but refuses non-integer exponents.
pub fn g_coefficient_exact(
    m: u64,
    j: u64,
    r: &ExactScalar,
    s: &ExactScalar,
) -> Result<BigRational, NumError> {
    if integer_exponents(r, s).is_none() {
        return Err(NumError::InexactParameters { r: r.to_string(), s: s.to_string() });
    }
    match g_coefficient(m, j, r, s)? {
        ExactScalar::Rational(q) => Ok(q),
        ExactScalar::Approx(_) => unreachable!("integer exponents always evaluate exactly"),
    }
}

/// The definitional sum `sum_{i | j} mu(i) (m i)^s / phi(m i)^r`.
pub fn g_coefficient_by_sum(
    m: u64,
    j: u64,
    r: &ExactScalar,
    s: &ExactScalar,
) -> Result<ExactScalar, NumError> {
    nonzero(m)?;
    let mut acc = ExactScalar::zero();
    for i in divisors(j)? {
        let w = weight(m * i, r, s)?;
        match moebius(i)? {
            0 => {}
            1 => acc = acc + w,
            _ => acc = acc - w,
        }
    }
    Ok(acc)
}

/// Symbolic value of `sum_{i | j} mu(i) log(m i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "arg")]
pub enum LogCoefficient {
    /// `log(m)`
    Log(u64),
    /// `-log(p)`
    NegLog(u64),
    Zero,
}

pub fn g_log_coefficient(m: u64, j: u64) -> Result<LogCoefficient, NumError> {
    nonzero(m)?;
    let jf = factorize(j)?;
    Ok(match jf.factors().len() {
        0 => LogCoefficient::Log(m),
        1 => LogCoefficient::NegLog(jf.primes().next().expect("one prime")),
        _ => LogCoefficient::Zero,
    })
}

impl LogCoefficient {
    pub fn to_f64(self) -> f64 {
        match self {
            LogCoefficient::Log(m) => (m as f64).ln(),
            LogCoefficient::NegLog(p) => -(p as f64).ln(),
            LogCoefficient::Zero => 0.0,
        }
    }
}
