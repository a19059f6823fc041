//! Order statistics of a group: how many elements have each order, how many
//! solve `x^m = 1`, and the functionals built from them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::group::FiniteGroup;
use crate::numtheory::{self, divisors, factorize, g_coefficient, g_log_coefficient, totient, weight};
use crate::numtheory::{FactoredInteger, LogCoefficient, NumError};
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("{n} does not divide the group order {order}")]
    NotDivisor { n: u64, order: u64 },
    #[error("invalid order profile: {0}")]
    InvalidProfile(String),
    #[error("Frobenius divisibility fails: {m} does not divide B({m}) = {solutions}")]
    FrobeniusViolated { m: u64, solutions: u64 },
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Number of elements of each exact order. Only orders that occur are keys.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderProfile {
    group_order: u64,
    counts: BTreeMap<u64, u64>,
}

impl OrderProfile {
    /// Checks: orders divide `n`, counts sum to `n`, exactly one element of
    /// order 1, and `phi(d) | A(d)`. Zero counts are dropped.
    pub fn from_counts(group_order: u64, counts: BTreeMap<u64, u64>) -> Result<Self, StatsError> {
        if group_order == 0 {
            return Err(StatsError::InvalidProfile("group order must be positive".into()));
        }
        let counts: BTreeMap<u64, u64> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let mut total = 0u64;
        for (&d, &c) in &counts {
            if d == 0 || group_order % d != 0 {
                return Err(StatsError::InvalidProfile(format!("order {d} does not divide {group_order}")));
            }
            if c % totient(d)? != 0 {
                return Err(StatsError::InvalidProfile(format!("phi({d}) does not divide A({d}) = {c}")));
            }
            total += c;
        }
        if total != group_order {
            return Err(StatsError::InvalidProfile(format!("counts sum to {total}, expected {group_order}")));
        }
        if counts.get(&1) != Some(&1) {
            return Err(StatsError::InvalidProfile("A(1) must be 1".into()));
        }
        Ok(OrderProfile { group_order, counts })
    }

    pub fn of_group(g: &FiniteGroup) -> Self {
        let mut counts = BTreeMap::new();
        for &o in g.element_orders() {
            *counts.entry(o).or_insert(0) += 1;
        }
        OrderProfile { group_order: g.order() as u64, counts }
    }

    /// Profile of `C_n`: `A(d) = phi(d)` for every `d | n`.
    pub fn cyclic(n: u64) -> Result<Self, StatsError> {
        let mut counts = BTreeMap::new();
        for d in divisors(n)? {
            counts.insert(d, totient(d)?);
        }
        Ok(OrderProfile { group_order: n, counts })
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// `A(d)`.
    pub fn count(&self, d: u64) -> u64 {
        self.counts.get(&d).copied().unwrap_or(0)
    }

    /// `c_m = A(m) / phi(m)`, the number of cyclic subgroups of order `m`.
    pub fn cyclic_subgroups_of_order(&self, m: u64) -> u64 {
        match self.count(m) {
            0 => 0,
            a => a / totient(m).expect("order keys are positive"),
        }
    }

    /// `B(m)`: elements with `x^m = 1`.
    pub fn solutions(&self, m: u64) -> u64 {
        self.counts.iter().filter(|(d, _)| m % **d == 0).map(|(_, c)| c).sum()
    }

    pub fn max_order(&self) -> u64 {
        self.counts.keys().copied().max().unwrap_or(1)
    }

    fn require_divisor(&self, n: u64) -> Result<(), StatsError> {
        if n == 0 || self.group_order % n != 0 {
            return Err(StatsError::NotDivisor { n, order: self.group_order });
        }
        Ok(())
    }
}

pub fn order_profile(g: &FiniteGroup) -> OrderProfile {
    OrderProfile::of_group(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusEntry {
    /// `B(m)`
    pub solutions: u64,
    /// `f(m) = B(m) / m`
    pub multiplicity: u64,
}

/// `B(m)` and `f(m)` for every divisor `m` of the group order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrobeniusTable {
    entries: BTreeMap<u64, FrobeniusEntry>,
}

impl FrobeniusTable {
    pub fn entries(&self) -> &BTreeMap<u64, FrobeniusEntry> {
        &self.entries
    }

    pub fn solutions(&self, m: u64) -> u64 {
        self.entries[&m].solutions
    }

    pub fn multiplicity(&self, m: u64) -> u64 {
        self.entries[&m].multiplicity
    }
}

/// Fails with [`StatsError::FrobeniusViolated`] if some `m` does not divide
/// `B(m)`, which cannot happen for a genuine group.
pub fn frobenius_table(p: &OrderProfile) -> Result<FrobeniusTable, StatsError> {
    let mut entries = BTreeMap::new();
    for m in divisors(p.group_order)? {
        let solutions = p.solutions(m);
        if solutions % m != 0 {
            return Err(StatsError::FrobeniusViolated { m, solutions });
        }
        entries.insert(m, FrobeniusEntry { solutions, multiplicity: solutions / m });
    }
    Ok(FrobeniusTable { entries })
}

/// Number of cyclic subgroups whose order divides `n`.
pub fn cyclic_subgroup_count(p: &OrderProfile, n: u64) -> Result<u64, StatsError> {
    p.require_divisor(n)?;
    Ok(divisors(n)?.into_iter().map(|m| p.cyclic_subgroups_of_order(m)).sum())
}

/// `R_{G,n}(r,s) = sum over x with o(x) | n of o(x)^s / phi(o(x))^r`,
/// evaluated as `sum_{m | n} m^s / phi(m)^(r-1) * c_m`.
pub fn r_functional(p: &OrderProfile, n: u64, r: &ExactScalar, s: &ExactScalar) -> Result<ExactScalar, StatsError> {
    p.require_divisor(n)?;
    let r_minus_one = r - &ExactScalar::one();
    let mut acc = ExactScalar::zero();
    for m in divisors(n)? {
        let c = p.cyclic_subgroups_of_order(m);
        if c > 0 {
            acc = acc + weight(m, &r_minus_one, s)? * ExactScalar::from_integer(c as i64);
        }
    }
    Ok(acc)
}

/// The same functional summed element by element. Only used to cross-check
/// [`r_functional`].
pub fn r_functional_by_elements(
    g: &FiniteGroup,
    n: u64,
    r: &ExactScalar,
    s: &ExactScalar,
) -> Result<ExactScalar, StatsError> {
    let order = g.order() as u64;
    if n == 0 || order % n != 0 {
        return Err(StatsError::NotDivisor { n, order });
    }
    let mut acc = ExactScalar::zero();
    for &o in g.element_orders() {
        if n % o == 0 {
            acc = acc + weight(o, r, s)?;
        }
    }
    Ok(acc)
}

/// `sum_{m | n} m^s / phi(m)^r * A(m)`.
pub fn divisor_weighted_sum(p: &OrderProfile, n: u64, r: &ExactScalar, s: &ExactScalar) -> Result<ExactScalar, StatsError> {
    p.require_divisor(n)?;
    let mut acc = ExactScalar::zero();
    for m in divisors(n)? {
        let a = p.count(m);
        if a > 0 {
            acc = acc + weight(m, r, s)? * ExactScalar::from_integer(a as i64);
        }
    }
    Ok(acc)
}

/// `T_{G,n}(r,s) = R_{G,n}(r,s) - R_{C_|G|,n}(r,s)`.
pub fn t_functional(p: &OrderProfile, n: u64, r: &ExactScalar, s: &ExactScalar) -> Result<ExactScalar, StatsError> {
    let cyclic = OrderProfile::cyclic(p.group_order)?;
    Ok(r_functional(p, n, r, s)? - r_functional(&cyclic, n, r, s)?)
}

/// `sum_{k | n} g(k, n/k) * B(k)`, the Möbius-rearranged form of
/// [`divisor_weighted_sum`].
pub fn g_expansion(p: &OrderProfile, n: u64, r: &ExactScalar, s: &ExactScalar) -> Result<ExactScalar, StatsError> {
    p.require_divisor(n)?;
    let table = frobenius_table(p)?;
    let mut acc = ExactScalar::zero();
    for k in divisors(n)? {
        let b = table.solutions(k);
        acc = acc + g_coefficient(k, n / k, r, s)? * ExactScalar::from_integer(b as i64);
    }
    Ok(acc)
}

/// Product of all element orders, `P_G = n^n / prod_i p_i^(B_i)` with
/// `B_i = sum_{j=1}^{c_i} B(n / p_i^j)` where `n = prod_i p_i^(c_i)`.
pub fn product_of_orders(p: &OrderProfile) -> Result<FactoredInteger, StatsError> {
    let n = p.group_order;
    let nf = factorize(n)?;
    let mut out = FactoredInteger::one();
    for (&prime, &c) in nf.factors() {
        let mut correction = 0u64;
        let mut pj = 1u64;
        for _ in 0..c {
            pj *= prime;
            correction += p.solutions(n / pj);
        }
        let exponent = (n * c).checked_sub(correction).ok_or_else(|| {
            StatsError::InvalidProfile(format!("negative exponent for prime {prime} in product of orders"))
        })?;
        out.multiply_prime_power(prime, exponent);
    }
    Ok(out)
}

/// `prod_d d^A(d)` multiplied out in factored form.
pub fn product_of_orders_direct(p: &OrderProfile) -> Result<FactoredInteger, StatsError> {
    let mut out = FactoredInteger::one();
    for (&d, &a) in p.counts() {
        out.multiply_pow(&factorize(d)?, a);
    }
    Ok(out)
}

/// `log P_G = sum_{k | n} g_log(k, n/k) B(k)`, accumulated on exponents.
pub fn product_of_orders_log_expansion(p: &OrderProfile) -> Result<FactoredInteger, StatsError> {
    let n = p.group_order;
    let mut plus: BTreeMap<u64, u64> = BTreeMap::new();
    let mut minus: BTreeMap<u64, u64> = BTreeMap::new();
    for k in divisors(n)? {
        let b = p.solutions(k);
        match g_log_coefficient(k, n / k)? {
            LogCoefficient::Log(m) => {
                for (q, e) in factorize(m)?.factors() {
                    *plus.entry(*q).or_insert(0) += e * b;
                }
            }
            LogCoefficient::NegLog(q) => *minus.entry(q).or_insert(0) += b,
            LogCoefficient::Zero => {}
        }
    }
    let mut out = FactoredInteger::from_prime_powers(plus);
    for (q, e) in minus {
        out.divide_prime_power(q, e).ok_or_else(|| {
            StatsError::InvalidProfile(format!("negative exponent for prime {q} in product of orders"))
        })?;
    }
    Ok(out)
}

/// Per-prime exponent sums `B_i` appearing in [`product_of_orders`].
pub fn product_corrections(p: &OrderProfile) -> Result<BTreeMap<u64, u64>, StatsError> {
    let n = p.group_order;
    let mut out = BTreeMap::new();
    for (&prime, &c) in numtheory::factorize(n)?.factors() {
        let mut pj = 1;
        let mut acc = 0;
        for _ in 0..c {
            pj *= prime;
            acc += p.solutions(n / pj);
        }
        out.insert(prime, acc);
    }
    Ok(out)
}
