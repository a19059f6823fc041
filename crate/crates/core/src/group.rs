//! Explicit finite groups given by a full multiplication table.
//!
//! Elements are dense indices `0..n` and the identity is always index 0.
//! Everything downstream only reads the table, the inverse map and the
//! element orders.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numtheory::{self, gcd, lcm};

pub const DEFAULT_ORDER_CAP: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table is empty")]
    Empty,
    #[error("not closed: entry mul[{row}][{col}] = {value} is outside 0..{order}")]
    NotClosed { row: usize, col: usize, value: usize, order: usize },
    #[error("not a Latin square: value {value} repeats in {axis} {index}")]
    NotLatin { axis: &'static str, index: usize, value: usize },
    #[error("index 0 is not an identity: mul[0][{index}] = {left}, mul[{index}][0] = {right}")]
    NoIdentity { index: usize, left: usize, right: usize },
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order exceeds cap {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("generator {index} is not a permutation of 0..{degree}")]
    BadPermutation { index: usize, degree: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("gcd(m, 2^u * beta) = gcd({m}, {alpha}) != 1")]
    CoprimalityViolated { m: u64, alpha: u64 },
    #[error("{which} = {value} must be odd")]
    ParityViolated { which: &'static str, value: u64 },
}

/// An immutable finite group.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    element_orders: Vec<u64>,
    label: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

/// A set of permutation generators, each given as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationGenSet {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validates an untrusted table in full, including the O(n^3)
    /// associativity check.
    pub fn from_cayley_table(table: &[Vec<usize>], label: impl Into<String>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut mul = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::NotSquare { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::NotClosed { row, col, value, order: n });
                }
                mul.push(value as u32);
            }
        }
        let g = Self::from_flat_table(mul, label.into(), true)?;
        g.check_associative()?;
        Ok(g)
    }

    /// Builds from a row-major table produced by an internal constructor.
    /// Identity, inverses and the Latin property are still checked; set
    /// `check_latin` to false only when the table is known good.
    pub(crate) fn from_flat_table(mul: Vec<u32>, label: String, check_latin: bool) -> Result<Self, GroupError> {
        let n = (mul.len() as f64).sqrt().round() as usize;
        debug_assert_eq!(n * n, mul.len());
        if check_latin {
            let mut seen = vec![usize::MAX; n];
            for row in 0..n {
                for col in 0..n {
                    let v = mul[row * n + col] as usize;
                    if seen[v] == row {
                        return Err(GroupError::NotLatin { axis: "row", index: row, value: v });
                    }
                    seen[v] = row;
                }
            }
            seen.fill(usize::MAX);
            for col in 0..n {
                for row in 0..n {
                    let v = mul[row * n + col] as usize;
                    if seen[v] == col {
                        return Err(GroupError::NotLatin { axis: "column", index: col, value: v });
                    }
                    seen[v] = col;
                }
            }
        }
        for i in 0..n {
            let left = mul[i] as usize;
            let right = mul[i * n] as usize;
            if left != i || right != i {
                return Err(GroupError::NoIdentity { index: i, left, right });
            }
        }
        let mut inv = vec![u32::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if mul[i * n + j] == 0 {
                    if mul[j * n + i] != 0 {
                        return Err(GroupError::NoInverse { element: i });
                    }
                    inv[i] = j as u32;
                    break;
                }
            }
            if inv[i] == u32::MAX {
                return Err(GroupError::NoInverse { element: i });
            }
        }
        let mut element_orders = vec![0u64; n];
        for (x, slot) in element_orders.iter_mut().enumerate() {
            let mut k = 1u64;
            let mut y = x;
            while y != 0 {
                y = mul[y * n + x] as usize;
                k += 1;
                if k as usize > n {
                    return Err(GroupError::NoInverse { element: x });
                }
            }
            *slot = k;
        }
        Ok(FiniteGroup { order: n, mul, inv, element_orders, label })
    }

    /// Full associativity check.
    pub fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// Closes a set of permutations under composition and tabulates the
    /// resulting group. Composition is left-to-right: `(p*q)(i) = q(p(i))`.
    pub fn from_permutations(
        gens: &PermutationGenSet,
        label: impl Into<String>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        let d = gens.degree;
        for (index, g) in gens.generators.iter().enumerate() {
            let mut seen = vec![false; d];
            if g.len() != d {
                return Err(GroupError::BadPermutation { index, degree: d });
            }
            for &img in g {
                if img >= d || seen[img] {
                    return Err(GroupError::BadPermutation { index, degree: d });
                }
                seen[img] = true;
            }
        }
        let identity: Vec<u32> = (0..d as u32).collect();
        let gen_perms: Vec<Vec<u32>> = gens
            .generators
            .iter()
            .map(|g| g.iter().map(|&x| x as u32).collect())
            .collect();

        // Breadth-first closure; `right[x][k]` is the index of x * gen_k and
        // `parent[x] = (y, k)` records x = y * gen_k.
        let mut elements: Vec<Vec<u32>> = vec![identity.clone()];
        let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(identity, 0)]);
        let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut head = 0;
        while head < elements.len() {
            let mut row = Vec::with_capacity(gen_perms.len());
            for (k, g) in gen_perms.iter().enumerate() {
                let prod: Vec<u32> = elements[head].iter().map(|&i| g[i as usize]).collect();
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= cap {
                            return Err(GroupError::OrderCapExceeded { cap });
                        }
                        let i = elements.len();
                        index.insert(prod.clone(), i);
                        elements.push(prod);
                        parent.push((head, k));
                        i
                    }
                };
                row.push(idx);
            }
            right.push(row);
            head += 1;
        }
        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            mul[a * n] = a as u32;
        }
        // elements are discovered in BFS order, so parents are filled first
        for b in 1..n {
            let (p, k) = parent[b];
            for a in 0..n {
                let ap = mul[a * n + p] as usize;
                mul[a * n + b] = right[ap][k] as u32;
            }
        }
        Self::from_flat_table(mul, label.into(), false)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    #[inline]
    pub fn element_order(&self, a: usize) -> u64 {
        self.element_orders[a]
    }

    pub fn element_orders(&self) -> &[u64] {
        &self.element_orders
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// `a^k` by repeated squaring.
    pub fn pow(&self, a: usize, mut k: u64) -> usize {
        let mut base = a;
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.mul(i, j)).collect())
            .collect()
    }
}

fn build(n: usize, label: String, f: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup, GroupError> {
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            mul.push(f(a, b) as u32);
        }
    }
    FiniteGroup::from_flat_table(mul, label, false)
}

fn check_cap(n: u64, cap: usize) -> Result<usize, GroupError> {
    if n == 0 || n > cap as u64 {
        return Err(GroupError::OrderCapExceeded { cap });
    }
    Ok(n as usize)
}

/// Cyclic group `C_n`, element `i` standing for the residue `i mod n`.
pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    cyclic_capped(n, DEFAULT_ORDER_CAP)
}

pub fn cyclic_capped(n: usize, cap: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidParameter("cyclic order must be >= 1".into()));
    }
    check_cap(n as u64, cap)?;
    build(n, format!("C{n}"), |a, b| (a + b) % n)
}

/// Dihedral group of order `2n` (symmetries of an n-gon), labelled `D{2n}`.
/// Element `i + n*f` is `r^i s^f`.
pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    dihedral_capped(n, DEFAULT_ORDER_CAP)
}

pub fn dihedral_capped(n: usize, cap: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidParameter("dihedral parameter must be >= 1".into()));
    }
    check_cap(2 * n as u64, cap)?;
    build(2 * n, format!("D{}", 2 * n), |a, b| {
        let (i, f) = (a % n, a / n);
        let (j, g) = (b % n, b / n);
        let k = if f == 0 { (i + j) % n } else { (i + n - j) % n };
        k + n * ((f + g) % 2)
    })
}

/// Generalized quaternion group of order `2^k`, `k >= 3`:
/// `<a, b | a^(2^(k-1)) = 1, b^2 = a^(2^(k-2)), b^-1 a b = a^-1>`.
/// Element `i + M*f` is `a^i b^f` with `M = 2^(k-1)`.
pub fn quaternion_generalized(order: usize) -> Result<FiniteGroup, GroupError> {
    if order < 8 || !order.is_power_of_two() {
        return Err(GroupError::InvalidParameter(format!(
            "generalized quaternion order must be a power of two >= 8, got {order}"
        )));
    }
    check_cap(order as u64, DEFAULT_ORDER_CAP)?;
    let m = order / 2;
    build(order, format!("Q{order}"), |x, y| {
        let (i, f) = (x % m, x / m);
        let (j, g) = (y % m, y / m);
        match (f, g) {
            (0, _) => (i + j) % m + m * g,
            (1, 0) => (i + m - j) % m + m,
            _ => (i + m - j + m / 2) % m,
        }
    })
}

/// `(Z/p)^k`, element index read as base-p digits.
pub fn elementary_abelian(p: usize, k: u32) -> Result<FiniteGroup, GroupError> {
    if !numtheory::is_prime(p as u64) {
        return Err(GroupError::InvalidParameter(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(GroupError::InvalidParameter("rank must be >= 1".into()));
    }
    let n = (p as u64)
        .checked_pow(k)
        .ok_or(GroupError::OrderCapExceeded { cap: DEFAULT_ORDER_CAP })?;
    let n = check_cap(n, DEFAULT_ORDER_CAP)?;
    build(n, format!("E{p}^{k}"), |mut a, mut b| {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    })
}

fn transposition_and_cycle(k: usize) -> PermutationGenSet {
    let mut swap: Vec<usize> = (0..k).collect();
    if k >= 2 {
        swap.swap(0, 1);
    }
    let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    PermutationGenSet { degree: k, generators: vec![swap, cycle] }
}

/// Symmetric group on `k` points, `k >= 1`.
pub fn symmetric(k: usize) -> Result<FiniteGroup, GroupError> {
    symmetric_capped(k, DEFAULT_ORDER_CAP)
}

pub fn symmetric_capped(k: usize, cap: usize) -> Result<FiniteGroup, GroupError> {
    if k == 0 {
        return Err(GroupError::InvalidParameter("symmetric degree must be >= 1".into()));
    }
    FiniteGroup::from_permutations(&transposition_and_cycle(k), format!("S{k}"), cap)
}

/// Alternating group on `k` points, generated by the 3-cycles `(0 1 i)`.
pub fn alternating(k: usize) -> Result<FiniteGroup, GroupError> {
    alternating_capped(k, DEFAULT_ORDER_CAP)
}

pub fn alternating_capped(k: usize, cap: usize) -> Result<FiniteGroup, GroupError> {
    if k == 0 {
        return Err(GroupError::InvalidParameter("alternating degree must be >= 1".into()));
    }
    let generators = (2..k)
        .map(|i| {
            let mut p: Vec<usize> = (0..k).collect();
            p[0] = 1;
            p[1] = i;
            p[i] = 0;
            p
        })
        .collect();
    FiniteGroup::from_permutations(&PermutationGenSet { degree: k, generators }, format!("A{k}"), cap)
}

/// Direct product; `(a, b)` has index `a * |B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    direct_product_capped(a, b, DEFAULT_ORDER_CAP)
}

pub fn direct_product_capped(a: &FiniteGroup, b: &FiniteGroup, cap: usize) -> Result<FiniteGroup, GroupError> {
    let nb = b.order();
    let n = check_cap(a.order() as u64 * nb as u64, cap)?;
    let label = format!("{}x{}", a.label(), b.label());
    build(n, label, |x, y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
}

/// Parameters of `C_m ⋊ C_alpha` with `alpha = 2^u * beta` acting on `C_m`
/// by inversion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InversionSemidirect {
    pub m: u64,
    pub beta: u64,
    pub u: u32,
}

impl InversionSemidirect {
    pub fn alpha(&self) -> u64 {
        self.beta << self.u
    }

    pub fn order(&self) -> u64 {
        self.m * self.alpha()
    }

    pub fn label(&self) -> String {
        format!("C{}:C{}", self.m, self.alpha())
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        if self.m == 0 || self.beta == 0 || self.u == 0 || self.u > 40 {
            return Err(GroupError::InvalidParameter(format!(
                "need m >= 1, beta >= 1, 1 <= u <= 40; got {self:?}"
            )));
        }
        if gcd(self.m, self.alpha()) != 1 {
            return Err(GroupError::CoprimalityViolated { m: self.m, alpha: self.alpha() });
        }
        if self.beta % 2 == 0 {
            return Err(GroupError::ParityViolated { which: "beta", value: self.beta });
        }
        if self.m % 2 == 0 {
            return Err(GroupError::ParityViolated { which: "m", value: self.m });
        }
        Ok(())
    }

    /// Parses labels of the form `C{m}:C{alpha}`.
    pub fn parse_label(label: &str) -> Option<Self> {
        let (l, r) = label.split_once(':')?;
        let m: u64 = l.strip_prefix('C')?.parse().ok()?;
        let alpha: u64 = r.strip_prefix('C')?.parse().ok()?;
        if alpha == 0 {
            return None;
        }
        let u = alpha.trailing_zeros();
        Some(InversionSemidirect { m, beta: alpha >> u, u })
    }
}

/// `C_m ⋊ C_alpha` with the generator of `C_alpha` inverting `C_m`. Element
/// `(i, j)` (index `i + m*j`) multiplies as
/// `(i, j)(i', j') = (i + (-1)^j i' mod m, j + j' mod alpha)`.
pub fn inversion_semidirect(m: u64, beta: u64, u: u32) -> Result<FiniteGroup, GroupError> {
    inversion_semidirect_capped(InversionSemidirect { m, beta, u }, DEFAULT_ORDER_CAP)
}

pub fn inversion_semidirect_capped(params: InversionSemidirect, cap: usize) -> Result<FiniteGroup, GroupError> {
    params.validate()?;
    let n = check_cap(params.order(), cap)?;
    let m = params.m as usize;
    let alpha = params.alpha() as usize;
    build(n, params.label(), |x, y| {
        let (i, j) = (x % m, x / m);
        let (i2, j2) = (y % m, y / m);
        let k = if j % 2 == 0 { (i + i2) % m } else { (i + m - i2) % m };
        k + m * ((j + j2) % alpha)
    })
}

/// Order of `(a, b)` in a direct product.
pub fn product_element_order(oa: u64, ob: u64) -> u64 {
    lcm(oa, ob)
}
