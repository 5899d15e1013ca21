//! Smith normal form over Euclidean domains (integers and rational-coefficient
//! polynomials), invariant-factor feasibility through tableau positivity, the
//! block-triangular completion problem, and a brute-force abelian p-group
//! subgroup oracle.
//!
//! Chains follow the ideal convention `a_1 ⊂ a_2 ⊂ ... ⊂ a_n`: valuations are
//! weakly decreasing, so a chain at one prime is a partition with explicit
//! trailing zeros.  Only integral chains are handled; inputs realized by
//! matrices over the quotient field can be reduced to this case by scaling.

use crate::error::{Error, Result};
use crate::horn;
use crate::lr;
use crate::par::{self, ExecMode};
use crate::partition::Partition;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

/// An element of a Euclidean domain, as needed by the elimination: exact
/// division with remainder, a well-founded size for pivot selection, and a
/// canonical associate (positive integers, monic polynomials).
pub trait EuclideanElement: Clone + PartialEq + fmt::Debug {
    type Measure: Ord;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division with remainder; the remainder is zero or strictly smaller.
    fn div_rem(&self, divisor: &Self) -> (Self, Self);
    /// Size of a nonzero element.
    fn measure(&self) -> Self::Measure;
    fn is_unit(&self) -> bool;
    /// The unit `u` for which `self * u` is the canonical associate.
    fn normalizing_unit(&self) -> Self;
    /// Inverse of a unit.
    fn unit_inverse(&self) -> Self;
}

impl EuclideanElement for BigInt {
    type Measure = BigUint;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        num_integer::Integer::div_rem(self, divisor)
    }
    fn measure(&self) -> BigUint {
        self.magnitude().clone()
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn normalizing_unit(&self) -> Self {
        if self.is_negative() {
            -<BigInt as One>::one()
        } else {
            One::one()
        }
    }
    fn unit_inverse(&self) -> Self {
        self.clone()
    }
}

/// A univariate polynomial over the rationals, dense coefficient list with no
/// trailing zeros (`coeffs[i]` multiplies `T^i`; empty list is zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(c.into()))
    }

    /// The monomial `T^k`.
    pub fn t_power(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn leading(&self) -> &BigRational {
        self.coeffs.last().expect("nonzero polynomial")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if k == 1 {
                    write!(f, "T")?;
                } else {
                    write!(f, "T^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl EuclideanElement for Poly {
    type Measure = usize;

    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Poly::constant(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
                    a + b
                })
                .collect(),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return <Poly as EuclideanElement>::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
    fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let d = divisor.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < d {
            return (<Poly as EuclideanElement>::zero(), self.clone());
        }
        let mut quo = vec![BigRational::zero(); rem.len() - d + 1];
        let lead = divisor.leading().clone();
        for k in (0..quo.len()).rev() {
            let c = &rem[k + d - 1] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let v = &c * dc;
                rem[k + i] -= v;
            }
            quo[k] = c;
        }
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }
    fn measure(&self) -> usize {
        self.degree().expect("nonzero polynomial")
    }
    fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }
    fn normalizing_unit(&self) -> Self {
        Poly::constant(self.leading().recip())
    }
    fn unit_inverse(&self) -> Self {
        Poly::constant(self.leading().recip())
    }
}

/// Exact determinant by cofactor expansion; intended for the small matrices
/// handled here.
pub fn determinant<T: EuclideanElement>(m: &[Vec<T>]) -> T {
    fn expand<T: EuclideanElement>(m: &[Vec<T>], rows: &[usize], cols: &[usize]) -> T {
        let Some((&r, rest)) = rows.split_first() else {
            return T::one();
        };
        let mut acc = T::zero();
        for (pos, &c) in cols.iter().enumerate() {
            if m[r][c].is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&x| x != c)
                .collect();
            let minor = m[r][c].mul(&expand(m, rest, &sub_cols));
            acc = if pos % 2 == 0 {
                acc.add(&minor)
            } else {
                acc.sub(&minor)
            };
        }
        acc
    }
    let idx: Vec<usize> = (0..m.len()).collect();
    expand(m, &idx, &idx)
}

/// A diagonalization `M = P * D * Q` with unimodular `P`, `Q` and a
/// divisibility chain on the diagonal.
#[derive(Debug, Clone)]
pub struct SmithForm<T> {
    pub p: Vec<Vec<T>>,
    pub diagonal: Vec<T>,
    pub q: Vec<Vec<T>>,
}

impl<T: EuclideanElement> SmithForm<T> {
    /// Recomputes `P * D * Q` for certificate checking.
    pub fn product(&self) -> Vec<Vec<T>> {
        let n = self.diagonal.len();
        let mut out = vec![vec![T::zero(); n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                for k in 0..n {
                    let term = self.p[i][k].mul(&self.diagonal[k]).mul(&self.q[k][j]);
                    *entry = entry.add(&term);
                }
            }
        }
        out
    }
}

fn identity<T: EuclideanElement>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

/// Reduces a square nonsingular matrix to Smith normal form.  Pivots are
/// chosen by smallest measure, ties broken by position; the diagonal comes
/// out in divisibility order with canonical associates.
pub fn smith_form<T: EuclideanElement>(m: &[Vec<T>]) -> Result<SmithForm<T>> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::domain("matrix must be square and nonempty".to_string()));
    }
    if determinant(m).is_zero() {
        return Err(Error::domain("matrix must have nonzero determinant".to_string()));
    }
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut p = identity::<T>(n);
    let mut q = identity::<T>(n);

    // Row ops on A update columns of P with the inverse op; col ops on A
    // update rows of Q, keeping P * A * Q equal to the input throughout.
    let swap_rows = |a: &mut Vec<Vec<T>>, p: &mut Vec<Vec<T>>, i: usize, j: usize| {
        a.swap(i, j);
        for row in p.iter_mut() {
            row.swap(i, j);
        }
    };
    let swap_cols = |a: &mut Vec<Vec<T>>, q: &mut Vec<Vec<T>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        q.swap(i, j);
    };
    // A: row_j -= c * row_i; P: col_i += c * col_j.
    let row_sub = |a: &mut Vec<Vec<T>>, p: &mut Vec<Vec<T>>, j: usize, c: &T, i: usize| {
        for k in 0..n {
            let v = c.mul(&a[i][k]);
            a[j][k] = a[j][k].sub(&v);
        }
        for row in p.iter_mut() {
            let v = c.mul(&row[j]);
            row[i] = row[i].add(&v);
        }
    };
    // A: col_j -= c * col_i; Q: row_i += c * row_j.
    let col_sub = |a: &mut Vec<Vec<T>>, q: &mut Vec<Vec<T>>, j: usize, c: &T, i: usize| {
        for row in a.iter_mut() {
            let v = c.mul(&row[i]);
            row[j] = row[j].sub(&v);
        }
        for k in 0..n {
            let v = c.mul(&q[j][k]);
            q[i][k] = q[i][k].add(&v);
        }
    };

    for t in 0..n {
        'pivot: loop {
            // Smallest nonzero entry of the active submatrix, row-major ties.
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].measure() < a[bi][bj].measure())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.expect("nonsingular matrix has a pivot");
            if bi != t {
                swap_rows(&mut a, &mut p, t, bi);
            }
            if bj != t {
                swap_cols(&mut a, &mut q, t, bj);
            }
            // Reduce the pivot column and row; any nonzero remainder leaves a
            // strictly smaller entry, so restarting terminates.
            for i in t + 1..n {
                if !a[i][t].is_zero() {
                    let (c, rem) = a[i][t].div_rem(&a[t][t]);
                    row_sub(&mut a, &mut p, i, &c, t);
                    if !rem.is_zero() {
                        continue 'pivot;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let (c, rem) = a[t][j].div_rem(&a[t][t]);
                    col_sub(&mut a, &mut q, j, &c, t);
                    if !rem.is_zero() {
                        continue 'pivot;
                    }
                }
            }
            // The pivot must divide the rest of the submatrix for the
            // divisibility chain; fold a bad row into the pivot row.
            for i in t + 1..n {
                if a[i].iter().skip(t + 1).any(|x| !x.div_rem(&a[t][t]).1.is_zero()) {
                    let minus_one = T::zero().sub(&T::one());
                    row_sub(&mut a, &mut p, t, &minus_one, i);
                    continue 'pivot;
                }
            }
            break;
        }
    }
    // Canonical associates on the diagonal: scale row t of A by the
    // normalizing unit, column t of P by its inverse.
    for t in 0..n {
        let u = a[t][t].normalizing_unit();
        if u != T::one() {
            let inv = u.unit_inverse();
            a[t][t] = a[t][t].mul(&u);
            for row in p.iter_mut() {
                row[t] = row[t].mul(&inv);
            }
        }
    }
    let diagonal = (0..n).map(|t| a[t][t].clone()).collect();
    Ok(SmithForm { p, diagonal, q })
}

fn require_prime(p: u64) -> Result<()> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(Error::validation(format!("{p} is not prime")));
    }
    Ok(())
}

fn valuation(x: &BigInt, p: &BigInt) -> u32 {
    let mut v = 0;
    let mut x = x.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&x, p);
        if !Zero::is_zero(&r) {
            return v;
        }
        v += 1;
        x = q;
    }
}

/// Valuations at one prime, as weakly decreasing exponents with explicit
/// zeros (the chain convention `a_1 ⊂ ... ⊂ a_n`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValuationChain {
    exponents: Vec<u32>,
}

impl ValuationChain {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::validation(
                "valuations must be weakly decreasing".to_string(),
            ));
        }
        Ok(ValuationChain { exponents })
    }

    pub fn zeros(len: usize) -> Self {
        ValuationChain {
            exponents: vec![0; len],
        }
    }

    pub fn from_partition(p: &Partition, len: usize) -> Self {
        ValuationChain {
            exponents: (0..len.max(p.len())).map(|i| p.part(i)).collect(),
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    pub fn to_partition(&self) -> Partition {
        Partition::new(self.exponents.clone()).expect("weakly decreasing by construction")
    }
}

/// Valuations at `p` of the Smith diagonal, sorted decreasing.
pub fn invariant_factors_at(m: &[Vec<BigInt>], p: u64) -> Result<ValuationChain> {
    require_prime(p)?;
    let smith = smith_form(m)?;
    let pb = BigInt::from(p);
    let mut vals: Vec<u32> = smith.diagonal.iter().map(|d| valuation(d, &pb)).collect();
    vals.sort_unstable_by(|a, b| b.cmp(a));
    ValuationChain::new(vals)
}

/// Valuations at `p` of the determinantal divisors (gcds of k-by-k minors),
/// for k = 1..=n.  Successive differences give the invariant factors; kept
/// public as the independent oracle for [`invariant_factors_at`].
pub fn determinantal_divisor_valuations(m: &[Vec<BigInt>], p: u64) -> Result<Vec<u32>> {
    require_prime(p)?;
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::domain("matrix must be square and nonempty".to_string()));
    }
    if Zero::is_zero(&determinant(m)) {
        return Err(Error::domain("matrix must have nonzero determinant".to_string()));
    }
    let pb = BigInt::from(p);
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, k, n, cur, out);
                cur.pop();
            }
        }
        rec(0, k, n, &mut cur, &mut out);
        out
    };
    let mut result = Vec::with_capacity(n);
    for k in 1..=n {
        let mut min_val: Option<u32> = None;
        for rows in subsets(k) {
            for cols in subsets(k) {
                let sub: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect())
                    .collect();
                let d = determinant(&sub);
                if !Zero::is_zero(&d) {
                    let v = valuation(&d, &pb);
                    if min_val.is_none_or(|mv| v < mv) {
                        min_val = Some(v);
                    }
                }
            }
        }
        result.push(min_val.expect("nonsingular matrix has a nonzero k-minor"));
    }
    Ok(result)
}

/// Whether valuation chains `(alpha, beta, gamma)` occur as invariant factors
/// of `A`, `B`, and `C = A * B` over some (equivalently any) discrete
/// valuation ring: exactly positivity of the tableau coefficient.
pub fn feasible_factor_triple(
    alpha: &ValuationChain,
    beta: &ValuationChain,
    gamma: &ValuationChain,
) -> Result<bool> {
    if alpha.len() != beta.len() || alpha.len() != gamma.len() {
        return Err(Error::domain("chains must have equal lengths".to_string()));
    }
    Ok(lr::lr_positive(
        &alpha.to_partition(),
        &beta.to_partition(),
        &gamma.to_partition(),
    ))
}

/// An ideal chain over a principal ideal domain, in factored form: a map
/// from prime labels (such as `"2"` or `"T"`) to valuation chains, all of one
/// length.  Missing primes mean valuation zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FactoredChain {
    length: usize,
    primes: BTreeMap<String, ValuationChain>,
}

impl FactoredChain {
    pub fn new(length: usize, primes: BTreeMap<String, ValuationChain>) -> Result<Self> {
        let mut padded = BTreeMap::new();
        for (label, chain) in primes {
            if chain.len() > length {
                return Err(Error::domain(format!(
                    "chain at {label} has {} entries, length is {length}",
                    chain.len()
                )));
            }
            let mut exps = chain.exponents.clone();
            exps.resize(length, 0);
            let chain = ValuationChain::new(exps).expect("padding keeps monotonicity");
            if chain.weight() > 0 {
                padded.insert(label, chain);
            }
        }
        Ok(FactoredChain {
            length,
            primes: padded,
        })
    }

    pub fn single(prime: &str, exponents: Vec<u32>, length: usize) -> Result<Self> {
        let chain = ValuationChain::new(exponents)?;
        FactoredChain::new(length, BTreeMap::from([(prime.to_string(), chain)]))
    }

    pub fn trivial(length: usize) -> Self {
        FactoredChain {
            length,
            primes: BTreeMap::new(),
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn primes(&self) -> impl Iterator<Item = (&str, &ValuationChain)> {
        self.primes.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn at(&self, prime: &str) -> ValuationChain {
        self.primes
            .get(prime)
            .cloned()
            .unwrap_or_else(|| ValuationChain::zeros(self.length))
    }

    pub fn support(&self) -> BTreeSet<String> {
        self.primes.keys().cloned().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.primes
                .iter()
                .map(|(label, chain)| {
                    serde_json::json!({"prime": label, "exponents": chain.exponents()})
                })
                .collect(),
        )
    }
}

/// Positivity of the iterated tableau coefficient: can `target` be reached by
/// multiplying the factors in order.  Intermediates stay inside `target`.
fn multi_lr_positive(factors: &[Partition], target: &Partition) -> bool {
    let mut support: BTreeSet<Partition> = BTreeSet::from([Partition::empty()]);
    for f in factors {
        let mut next = BTreeSet::new();
        for mu in &support {
            let weight = mu.weight() + f.weight();
            let cols = target.part(0);
            for nu in Partition::enumerate_in_rectangle(weight, target.len(), cols) {
                if target.contains(&nu) && lr::lr_positive(mu, f, &nu) {
                    next.insert(nu);
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        support = next;
    }
    support.contains(target)
}

/// Whether the given chains occur as invariant factors of matrices
/// `A_1, ..., A_m` with product `C`: the determinant ideals must match and
/// each prime must be feasible independently (localization).
pub fn feasible_chain_tuple(chains: &[FactoredChain], product: &FactoredChain) -> Result<bool> {
    if chains.len() < 2 {
        return Err(Error::domain("need at least two factor chains".to_string()));
    }
    let n = product.length;
    if chains.iter().any(|c| c.length != n) {
        return Err(Error::domain("chains must have equal lengths".to_string()));
    }
    let mut support = product.support();
    for c in chains {
        support.extend(c.support());
    }
    for prime in &support {
        let gamma = product.at(prime);
        let total: u64 = chains.iter().map(|c| c.at(prime).weight()).sum();
        if total != gamma.weight() {
            return Ok(false);
        }
        let factors: Vec<Partition> = chains.iter().map(|c| c.at(prime).to_partition()).collect();
        if !multi_lr_positive(&factors, &gamma.to_partition()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `c` occurs as the invariant factors of a block upper-triangular
/// matrix with diagonal blocks of invariant factors `a` (size p) and `b`
/// (size q): determinant equality plus, for every recursive-set triple of
/// ambient `p + q`, the truncated containment
/// `sum_K gamma <= sum_{I, i<=p} alpha + sum_{J, j<=q} beta` at each prime.
pub fn carlson_feasible(
    a: &FactoredChain,
    b: &FactoredChain,
    c: &FactoredChain,
    mode: ExecMode,
) -> Result<bool> {
    let (p, q) = (a.length, b.length);
    let n = p + q;
    if c.length != n {
        return Err(Error::domain(format!(
            "product chain has length {}, expected {p} + {q} = {n}",
            c.length
        )));
    }
    if n == 0 {
        return Ok(true);
    }
    let mut support = c.support();
    support.extend(a.support());
    support.extend(b.support());
    for prime in &support {
        let alpha = a.at(prime);
        let beta = b.at(prime);
        let gamma = c.at(prime);
        if gamma.weight() != alpha.weight() + beta.weight() {
            return Ok(false);
        }
        for r in 1..n {
            for t in horn::t_set(r, n as u32, mode)? {
                let lhs: u64 = t.k.elements().iter().map(|&k| gamma.exponents[(k - 1) as usize] as u64).sum();
                let rhs_a: u64 = t
                    .i
                    .elements()
                    .iter()
                    .filter(|&&i| i as usize <= p)
                    .map(|&i| alpha.exponents[(i - 1) as usize] as u64)
                    .sum();
                let rhs_b: u64 = t
                    .j
                    .elements()
                    .iter()
                    .filter(|&&j| j as usize <= q)
                    .map(|&j| beta.exponents[(j - 1) as usize] as u64)
                    .sum();
                if lhs > rhs_a + rhs_b {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// All feasible completions `c` for the block problem, enumerated prime by
/// prime (the first part at each prime is bounded by the total weight).
pub fn carlson_chains(
    a: &FactoredChain,
    b: &FactoredChain,
    mode: ExecMode,
) -> Result<Vec<FactoredChain>> {
    let n = a.length + b.length;
    let mut support = a.support();
    support.extend(b.support());
    let mut candidates: Vec<FactoredChain> = vec![FactoredChain::trivial(n)];
    for prime in &support {
        let target = a.at(prime).weight() + b.at(prime).weight();
        let per_prime: Vec<ValuationChain> =
            Partition::enumerate_in_rectangle(target, n, target.min(u32::MAX as u64) as u32)
                .into_iter()
                .map(|p| ValuationChain::from_partition(&p, n))
                .collect();
        let mut next = Vec::new();
        for base in &candidates {
            for chain in &per_prime {
                let mut primes: BTreeMap<String, ValuationChain> =
                    base.primes().map(|(k, v)| (k.to_string(), v.clone())).collect();
                primes.insert(prime.clone(), chain.clone());
                next.push(FactoredChain::new(n, primes)?);
            }
        }
        candidates = next;
    }
    let mut out = Vec::new();
    for c in candidates {
        if carlson_feasible(a, b, &c, mode)? {
            out.push(c);
        }
    }
    out.sort();
    Ok(out)
}

/// Enumerates all subgroups `B` of the abelian p-group of type `gamma` and
/// returns the set of `(type B, type G/B)` pairs.  Brute force; the group
/// order is capped by `limit`.
pub fn klein_subgroup_oracle(
    p: u64,
    gamma: &ValuationChain,
    limit: u64,
    mode: ExecMode,
) -> Result<BTreeSet<(Partition, Partition)>> {
    require_prime(p)?;
    let moduli: Vec<u64> = gamma
        .exponents
        .iter()
        .filter(|&&e| e > 0)
        .map(|&e| {
            p.checked_pow(e)
                .ok_or_else(|| Error::resource("group order overflows".to_string()))
        })
        .collect::<Result<_>>()?;
    let order = moduli
        .iter()
        .try_fold(1u64, |acc, &m| acc.checked_mul(m))
        .ok_or_else(|| Error::resource("group order overflows".to_string()))?;
    if order > limit {
        return Err(Error::resource(format!(
            "group order {order} exceeds limit {limit}"
        )));
    }
    let order = order as usize;
    let k = moduli.len();
    let decode = |mut x: usize| -> Vec<u64> {
        let mut v = Vec::with_capacity(k);
        for &m in &moduli {
            v.push(x as u64 % m);
            x /= m as usize;
        }
        v
    };
    let encode = |v: &[u64]| -> usize {
        let mut x = 0usize;
        for (c, &m) in v.iter().zip(&moduli).rev() {
            x = x * m as usize + *c as usize;
        }
        x
    };
    // Addition table would be order^2; recompute instead, order is small.
    let add = |x: usize, y: usize| -> usize {
        let (a, b) = (decode(x), decode(y));
        let sum: Vec<u64> = a
            .iter()
            .zip(&b)
            .zip(&moduli)
            .map(|((&u, &v), &m)| (u + v) % m)
            .collect();
        encode(&sum)
    };
    let scalar_mul = |c: u64, x: usize| -> usize {
        let v = decode(x);
        let scaled: Vec<u64> = v
            .iter()
            .zip(&moduli)
            .map(|(&u, &m)| (u % m) * (c % m) % m)
            .collect();
        encode(&scaled)
    };

    // Breadth-first closure over subgroups, each stored as a sorted element
    // list.
    let trivial = vec![0usize];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([trivial.clone()]);
    let mut stack = vec![trivial];
    let mut all: Vec<Vec<usize>> = Vec::new();
    while let Some(s) = stack.pop() {
        let member: Vec<bool> = {
            let mut b = vec![false; order];
            for &x in &s {
                b[x] = true;
            }
            b
        };
        for g in 1..order {
            if member[g] {
                continue;
            }
            // Closure of s and g: the union of cosets s + k*g until k*g
            // falls back into s.
            let mut elements = s.clone();
            let mut kg = g;
            while !member[kg] {
                for &x in &s {
                    elements.push(add(x, kg));
                }
                kg = add(kg, g);
            }
            elements.sort_unstable();
            elements.dedup();
            if seen.insert(elements.clone()) {
                stack.push(elements);
            }
        }
        all.push(s);
    }

    // Type of an abelian p-group from annihilator counts: the number of
    // elements killed by p^j is p^(sum min(lambda_i, j)), so successive
    // log differences give the conjugate partition.
    let exp_max = gamma.exponents.first().copied().unwrap_or(0);
    let logp = |mut x: u64| -> u32 {
        let mut e = 0;
        while x > 1 {
            x /= p;
            e += 1;
        }
        e
    };
    let type_from_counts = |counts: &[u64]| -> Partition {
        let conj: Vec<u32> = counts
            .windows(2)
            .map(|w| logp(w[1]) - logp(w[0]))
            .collect();
        Partition::new(conj).expect("annihilator counts are log-concave").conjugate()
    };
    let pairs = par::map_vec(
        all,
        |s| {
            let member: Vec<bool> = {
                let mut b = vec![false; order];
                for &x in &s {
                    b[x] = true;
                }
                b
            };
            let mut sub_counts = vec![0u64; exp_max as usize + 1];
            let mut quo_counts = vec![0u64; exp_max as usize + 1];
            for (j, (sc, qc)) in sub_counts.iter_mut().zip(&mut quo_counts).enumerate() {
                let pj = p.pow(j as u32);
                *sc = s.iter().filter(|&&x| scalar_mul(pj, x) == 0).count() as u64;
                *qc = (0..order).filter(|&x| member[scalar_mul(pj, x)]).count() as u64
                    / s.len() as u64;
            }
            (type_from_counts(&sub_counts), type_from_counts(&quo_counts))
        },
        mode,
    );
    Ok(pairs.into_iter().collect())
}
