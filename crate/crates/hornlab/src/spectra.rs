//! Exact-rational decision procedures for the realizability questions: sums
//! of Hermitian matrices, scalar-sum tuples, the integral case through
//! tableau counting, per-index eigenvalue intervals, and the singular-value
//! variants (additive and multiplicative) with their transformed
//! inequalities.
//!
//! Everything here is exact; no floating point and no tolerances.  The
//! floating-point laboratory lives in the matrix module.

use crate::error::{Error, Result};
use crate::horn::{self, HornTriple, HornTuple};
use crate::lr;
use crate::par::{self, ExecMode};
use crate::partition::{IndexSet, Partition};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// A weakly decreasing list of exact rationals (eigenvalues, or singular
/// values).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    values: Vec<BigRational>,
}

impl Spectrum {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::validation(
                "spectrum values must be weakly decreasing".to_string(),
            ));
        }
        Ok(Spectrum { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Spectrum::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn from_partition(p: &Partition, len: usize) -> Self {
        let values = (0..len.max(p.len()))
            .map(|i| BigRational::from_integer(BigInt::from(p.part(i))))
            .collect();
        Spectrum { values }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 1-based access, matching subset indices.
    pub fn at(&self, index: u32) -> &BigRational {
        &self.values[(index - 1) as usize]
    }

    pub fn sum(&self) -> BigRational {
        self.values.iter().sum()
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.last().is_none_or(|v| !v.is_negative())
    }

    fn subset_sum(&self, set: &IndexSet) -> BigRational {
        set.elements().iter().map(|&i| self.at(i).clone()).sum()
    }

    fn subset_product(&self, set: &IndexSet) -> BigRational {
        set.elements().iter().map(|&i| self.at(i).clone()).product()
    }

    fn shifted(&self, t: &BigRational) -> Spectrum {
        Spectrum {
            values: self.values.iter().map(|v| v + t).collect(),
        }
    }

    /// Converts an integral nonnegative spectrum to a partition.
    fn to_partition(&self) -> Result<Partition> {
        if !self.is_integral() || !self.is_nonnegative() {
            return Err(Error::domain("spectrum is not a nonnegative integer sequence".to_string()));
        }
        let parts: Vec<u32> = self
            .values
            .iter()
            .map(|v| {
                u32::try_from(v.to_integer())
                    .map_err(|_| Error::resource("spectrum entry too large".to_string()))
            })
            .collect::<Result<_>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Which inequality family to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    /// The recursive set (the full minimal-except-one list).
    T,
    /// The multiplicity-one subset.
    R,
}

/// The index sets of a violated inequality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum WitnessSets {
    Triple(HornTriple),
    Tuple(HornTuple),
}

impl fmt::Display for WitnessSets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessSets::Triple(t) => write!(f, "{t}"),
            WitnessSets::Tuple(t) => write!(f, "{t}"),
        }
    }
}

/// A violated inequality with both sides evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub sets: WitnessSets,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

/// Outcome of a feasibility check.  When infeasible, either the trace (or
/// determinant) constraint failed, or a specific violated inequality is
/// reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub witness: Option<Violation>,
    pub trace_gap: BigRational,
}

impl FeasibilityVerdict {
    fn feasible(trace_gap: BigRational) -> Self {
        FeasibilityVerdict {
            feasible: true,
            witness: None,
            trace_gap,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let witness = self.witness.as_ref().map(|v| {
            let sets = match &v.sets {
                WitnessSets::Triple(t) => serde_json::to_value(t).unwrap(),
                WitnessSets::Tuple(t) => serde_json::to_value(t).unwrap(),
            };
            serde_json::json!({
                "sets": sets,
                "lhs": v.lhs.to_string(),
                "rhs": v.rhs.to_string(),
            })
        });
        serde_json::json!({
            "feasible": self.feasible,
            "witness": witness,
            "trace_gap": self.trace_gap.to_string(),
        })
    }
}

fn check_equal_lengths(spectra: &[&Spectrum]) -> Result<usize> {
    let n = spectra[0].len();
    if spectra.iter().any(|s| s.len() != n) {
        return Err(Error::domain("spectra must have equal lengths".to_string()));
    }
    if n == 0 {
        return Err(Error::domain("spectra must be nonempty".to_string()));
    }
    Ok(n)
}

fn triples_of(kind: SetKind, r: usize, n: u32, mode: ExecMode) -> Result<Vec<HornTriple>> {
    match kind {
        SetKind::T => horn::t_set(r, n, mode),
        SetKind::R => horn::r_set(r, n, mode),
    }
}

/// Decides whether Hermitian matrices `A + B = C` exist with the given
/// spectra: the trace identity must hold and every inequality
/// `sum_K gamma <= sum_I alpha + sum_J beta` from the chosen set must be
/// satisfied, for all cardinalities below `n`.
pub fn check_hermitian_triple(
    alpha: &Spectrum,
    beta: &Spectrum,
    gamma: &Spectrum,
    kind: SetKind,
    mode: ExecMode,
) -> Result<FeasibilityVerdict> {
    let n = check_equal_lengths(&[alpha, beta, gamma])? as u32;
    let trace_gap = gamma.sum() - alpha.sum() - beta.sum();
    if !trace_gap.is_zero() {
        return Ok(FeasibilityVerdict {
            feasible: false,
            witness: None,
            trace_gap,
        });
    }
    for r in 1..n as usize {
        let triples = triples_of(kind, r, n, mode)?;
        let violation = par::filter_min(
            triples,
            |t| {
                let lhs = gamma.subset_sum(&t.k);
                let rhs = alpha.subset_sum(&t.i) + beta.subset_sum(&t.j);
                (lhs > rhs).then(|| Violation {
                    sets: WitnessSets::Triple(t),
                    lhs,
                    rhs,
                })
            },
            mode,
        );
        if let Some(v) = violation {
            return Ok(FeasibilityVerdict {
                feasible: false,
                witness: Some(v),
                trace_gap,
            });
        }
    }
    Ok(FeasibilityVerdict::feasible(trace_gap))
}

/// Decides whether Hermitian matrices with the given spectra can sum to a
/// scalar matrix.  The scalar is forced to `total / n`; the inequalities are
/// `sum_s sum_{I(s)} alpha(s) <= r * scalar` over the chosen m-factor set.
pub fn check_scalar_sum_tuple(
    spectra: &[Spectrum],
    kind: SetKind,
    mode: ExecMode,
) -> Result<FeasibilityVerdict> {
    if spectra.len() < 2 {
        return Err(Error::domain("need at least two spectra".to_string()));
    }
    let refs: Vec<&Spectrum> = spectra.iter().collect();
    let n = check_equal_lengths(&refs)? as u32;
    let m = spectra.len();
    let total: BigRational = spectra.iter().map(|s| s.sum()).sum();
    let scalar = total / BigRational::from_integer(n.into());
    for r in 1..n as usize {
        let tuples = match kind {
            SetKind::T => horn::t_set_m(r, n, m, mode)?,
            SetKind::R => horn::r_set_m(r, n, m, mode)?,
        };
        let rc = BigRational::from_integer(BigInt::from(r)) * &scalar;
        let violation = par::filter_min(
            tuples,
            |tuple| {
                let lhs: BigRational = tuple
                    .sets
                    .iter()
                    .zip(spectra)
                    .map(|(set, s)| s.subset_sum(set))
                    .sum();
                (lhs > rc).then(|| Violation {
                    sets: WitnessSets::Tuple(tuple),
                    lhs,
                    rhs: rc.clone(),
                })
            },
            mode,
        );
        if let Some(v) = violation {
            return Ok(FeasibilityVerdict {
                feasible: false,
                witness: Some(v),
                trace_gap: BigRational::zero(),
            });
        }
    }
    Ok(FeasibilityVerdict::feasible(BigRational::zero()))
}

/// Decides the integral case through tableau positivity: after shifting all
/// three sequences to be nonnegative, feasibility is exactly positivity of
/// the corresponding coefficient.  Agrees with [`check_hermitian_triple`] on
/// every integral input; when infeasible, the witness is borrowed from the
/// inequality scan so the verdict still names a violated inequality.
pub fn check_integral_via_lr(
    alpha: &Spectrum,
    beta: &Spectrum,
    gamma: &Spectrum,
    mode: ExecMode,
) -> Result<FeasibilityVerdict> {
    let n = check_equal_lengths(&[alpha, beta, gamma])?;
    if !(alpha.is_integral() && beta.is_integral() && gamma.is_integral()) {
        return Err(Error::domain("integral check requires integer spectra".to_string()));
    }
    let trace_gap = gamma.sum() - alpha.sum() - beta.sum();
    if !trace_gap.is_zero() {
        return Ok(FeasibilityVerdict {
            feasible: false,
            witness: None,
            trace_gap,
        });
    }
    // Twist by scalars to reach nonnegative sequences; feasibility is
    // invariant under adding t to every entry of alpha and of gamma (and
    // likewise for beta).
    let zero = BigRational::zero();
    let t = (-&alpha.values[n - 1]).max(zero.clone());
    let tp = (-&beta.values[n - 1]).max(zero.clone());
    let alpha_s = alpha.shifted(&t);
    let beta_s = beta.shifted(&tp);
    let gamma_s = gamma.shifted(&(t + tp));
    let feasible = gamma_s.is_nonnegative()
        && lr::lr_positive(
            &alpha_s.to_partition()?,
            &beta_s.to_partition()?,
            &gamma_s.to_partition()?,
        );
    if feasible {
        Ok(FeasibilityVerdict::feasible(trace_gap))
    } else {
        // The inequality scan supplies the violated inequality.
        check_hermitian_triple(alpha, beta, gamma, SetKind::T, mode)
    }
}

/// All partitions `gamma` with a positive coefficient against `alpha` and
/// `beta`, with at most `max_rows` rows.  The first part is bounded by
/// `alpha_1 + beta_1`.
pub fn feasible_gammas(alpha: &Partition, beta: &Partition, max_rows: usize) -> Vec<Partition> {
    let weight = alpha.weight() + beta.weight();
    let cols = alpha.part(0) + beta.part(0);
    Partition::enumerate_in_rectangle(weight, max_rows, cols)
        .into_iter()
        .filter(|g| lr::lr_positive(alpha, beta, g))
        .collect()
}

/// The sharp interval for the k-th eigenvalue of a sum:
/// `max_{i+j=n+k} alpha_i + beta_j <= gamma_k <= min_{i+j=k+1} alpha_i + beta_j`.
pub fn gamma_k_interval(
    alpha: &Spectrum,
    beta: &Spectrum,
    k: u32,
) -> Result<(BigRational, BigRational)> {
    let n = check_equal_lengths(&[alpha, beta])? as u32;
    if k < 1 || k > n {
        return Err(Error::validation(format!("index {k} out of 1..={n}")));
    }
    let pairs = |target: u32| {
        (1..=n).filter_map(move |i| {
            let j = target.checked_sub(i)?;
            (1..=n).contains(&j).then_some((i, j))
        })
    };
    let lower = pairs(n + k)
        .map(|(i, j)| alpha.at(i) + beta.at(j))
        .max()
        .expect("n+k always has a valid split");
    let upper = pairs(k + 1)
        .map(|(i, j)| alpha.at(i) + beta.at(j))
        .min()
        .expect("k+1 always has a valid split");
    Ok((lower, upper))
}

/// The product bounds `min/max over permutations of prod (alpha_i +
/// beta_{sigma(i)})`.  Factorial enumeration, capped at length 8.
pub fn fiedler_bounds(alpha: &Spectrum, beta: &Spectrum) -> Result<(BigRational, BigRational)> {
    let n = check_equal_lengths(&[alpha, beta])?;
    if n > 8 {
        return Err(Error::resource(format!(
            "permutation enumeration is capped at length 8, got {n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut min: Option<BigRational> = None;
    let mut max: Option<BigRational> = None;
    fn permute(
        k: usize,
        order: &mut Vec<usize>,
        alpha: &Spectrum,
        beta: &Spectrum,
        min: &mut Option<BigRational>,
        max: &mut Option<BigRational>,
    ) {
        if k == order.len() {
            let p: BigRational = order
                .iter()
                .enumerate()
                .map(|(i, &j)| &alpha.values[i] + &beta.values[j])
                .product();
            if min.as_ref().is_none_or(|m| p < *m) {
                *min = Some(p.clone());
            }
            if max.as_ref().is_none_or(|m| p > *m) {
                *max = Some(p);
            }
            return;
        }
        for i in k..order.len() {
            order.swap(k, i);
            permute(k + 1, order, alpha, beta, min, max);
            order.swap(k, i);
        }
    }
    permute(0, &mut order, alpha, beta, &mut min, &mut max);
    Ok((min.unwrap(), max.unwrap()))
}

/// Which sequence a term refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symbol {
    A,
    B,
    C,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::A => write!(f, "a"),
            Symbol::B => write!(f, "b"),
            Symbol::C => write!(f, "c"),
        }
    }
}

/// An inequality `sum(lhs) <= sum(rhs)` between singular-value entries, all
/// coefficients one after cancellation.  Indices are 1-based into sequences
/// of length `q = min(m, n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SignedInequality {
    pub lhs: Vec<(Symbol, u32)>,
    pub rhs: Vec<(Symbol, u32)>,
}

impl SignedInequality {
    pub fn evaluate(&self, a: &Spectrum, b: &Spectrum, c: &Spectrum) -> (BigRational, BigRational) {
        let side = |terms: &[(Symbol, u32)]| {
            terms
                .iter()
                .map(|&(s, i)| match s {
                    Symbol::A => a.at(i).clone(),
                    Symbol::B => b.at(i).clone(),
                    Symbol::C => c.at(i).clone(),
                })
                .sum()
        };
        (side(&self.lhs), side(&self.rhs))
    }

    pub fn evaluate_f64(&self, a: &[f64], b: &[f64], c: &[f64]) -> (f64, f64) {
        let side = |terms: &[(Symbol, u32)]| {
            terms
                .iter()
                .map(|&(s, i)| match s {
                    Symbol::A => a[(i - 1) as usize],
                    Symbol::B => b[(i - 1) as usize],
                    Symbol::C => c[(i - 1) as usize],
                })
                .sum()
        };
        (side(&self.lhs), side(&self.rhs))
    }
}

impl fmt::Display for SignedInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_side = |f: &mut fmt::Formatter<'_>, terms: &[(Symbol, u32)]| -> fmt::Result {
            if terms.is_empty() {
                return write!(f, "0");
            }
            for (i, (s, idx)) in terms.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "{s}{idx}")?;
            }
            Ok(())
        };
        write_side(f, &self.lhs)?;
        write!(f, " <= ")?;
        write_side(f, &self.rhs)
    }
}

/// Transforms an eigenvalue inequality on the symmetric embedding into a
/// singular-value inequality on the original sequences, with all
/// cancellations performed and every term moved to the side where its
/// coefficient is positive.
pub fn singular_inequality(triple: &HornTriple, m: usize, n: usize) -> Result<SignedInequality> {
    let ambient = (m + n) as u32;
    if triple.ambient() != ambient {
        return Err(Error::domain(format!(
            "triple ambient {} does not match m + n = {ambient}",
            triple.ambient()
        )));
    }
    let q = m.min(n) as u32;
    // Accumulate coefficients of (lhs - rhs) of the eigenvalue inequality
    // rewritten in singular values; reflection sends index i to m+n+1-i.
    let mut coeffs: std::collections::BTreeMap<(Symbol, u32), i32> = Default::default();
    let mut add = |sym: Symbol, set: &IndexSet, sign: i32| {
        for &x in set.elements() {
            if x <= q {
                *coeffs.entry((sym, x)).or_insert(0) += sign;
            }
        }
    };
    add(Symbol::C, &triple.k, 1);
    add(Symbol::C, &triple.k.reflect(), -1);
    add(Symbol::A, &triple.i, -1);
    add(Symbol::A, &triple.i.reflect(), 1);
    add(Symbol::B, &triple.j, -1);
    add(Symbol::B, &triple.j.reflect(), 1);
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for ((sym, idx), coeff) in coeffs {
        match coeff {
            0 => {}
            1 => lhs.push((sym, idx)),
            -1 => rhs.push((sym, idx)),
            _ => unreachable!("coefficients cancel to -1, 0, or 1"),
        }
    }
    Ok(SignedInequality { lhs, rhs })
}

/// The eigenvalue sequence of the symmetric embedding of an m-by-n matrix
/// with the given singular values: the values, then `|m - n|` zeros, then
/// the negated values in reverse.
fn embedding_spectrum(values: &Spectrum, m: usize, n: usize) -> Spectrum {
    let mut v: Vec<BigRational> = values.values.clone();
    v.extend(std::iter::repeat_n(BigRational::zero(), m.abs_diff(n)));
    v.extend(values.values.iter().rev().map(|x| -x));
    Spectrum { values: v }
}

/// Decides whether nonnegative `a`, `b`, `c` occur as singular values of
/// m-by-n matrices with `C = A + B`, by running the eigenvalue check on the
/// symmetric embeddings over triples of ambient `m + n`.
pub fn check_singular_additive(
    a: &Spectrum,
    b: &Spectrum,
    c: &Spectrum,
    m: usize,
    n: usize,
    kind: SetKind,
    mode: ExecMode,
) -> Result<FeasibilityVerdict> {
    let q = m.min(n);
    if q == 0 {
        return Err(Error::domain("matrix dimensions must be positive".to_string()));
    }
    for s in [a, b, c] {
        if s.len() != q {
            return Err(Error::domain(format!("expected {q} singular values, got {}", s.len())));
        }
        if !s.is_nonnegative() {
            return Err(Error::validation("singular values must be nonnegative".to_string()));
        }
    }
    check_hermitian_triple(
        &embedding_spectrum(a, m, n),
        &embedding_spectrum(b, m, n),
        &embedding_spectrum(c, m, n),
        kind,
        mode,
    )
}

/// Decides whether strictly positive `a`, `b`, `c` occur as singular values
/// of square matrices with `C = A * B`: the determinant products must agree,
/// and `prod_K c <= prod_I a * prod_J b` must hold over the chosen set.
/// Products of rationals are compared directly; no logarithms.
pub fn check_singular_multiplicative(
    a: &Spectrum,
    b: &Spectrum,
    c: &Spectrum,
    kind: SetKind,
    mode: ExecMode,
) -> Result<FeasibilityVerdict> {
    let n = check_equal_lengths(&[a, b, c])? as u32;
    for s in [a, b, c] {
        if s.values.last().unwrap() <= &BigRational::zero() {
            return Err(Error::domain(
                "multiplicative check requires strictly positive values".to_string(),
            ));
        }
    }
    // C = A * B forces |det C| = |det A| |det B|; the inequalities alone do
    // not imply it, so it is checked first, playing the role of the trace
    // identity.
    let det_gap = c.values.iter().product::<BigRational>()
        - a.values.iter().product::<BigRational>() * b.values.iter().product::<BigRational>();
    if !det_gap.is_zero() {
        return Ok(FeasibilityVerdict {
            feasible: false,
            witness: None,
            trace_gap: det_gap,
        });
    }
    for r in 1..n as usize {
        let triples = triples_of(kind, r, n, mode)?;
        let violation = par::filter_min(
            triples,
            |t| {
                let lhs = c.subset_product(&t.k);
                let rhs = a.subset_product(&t.i) * b.subset_product(&t.j);
                (lhs > rhs).then(|| Violation {
                    sets: WitnessSets::Triple(t),
                    lhs,
                    rhs,
                })
            },
            mode,
        );
        if let Some(v) = violation {
            return Ok(FeasibilityVerdict {
                feasible: false,
                witness: Some(v),
                trace_gap: det_gap,
            });
        }
    }
    Ok(FeasibilityVerdict::feasible(det_gap))
}

/// Candidate facet inequalities for the singular-value cone of n-by-n sums:
/// multiplicity-one triples of ambient `2n` whose members contain no
/// reflected pair and whose folded index sets balance position by position,
/// each paired with its normalized inequality.
pub fn buch_facet_candidates(
    n: usize,
    mode: ExecMode,
) -> Result<Vec<(HornTriple, SignedInequality)>> {
    if n < 2 {
        return Err(Error::domain("need n >= 2".to_string()));
    }
    let ambient = 2 * n as u32;
    let mut out = Vec::new();
    for r in 1..=n {
        for t in horn::r_set(r, ambient, mode)? {
            if buch_conditions(&t, n) {
                let ineq = singular_inequality(&t, n, n)?;
                out.push((t, ineq));
            }
        }
    }
    Ok(out)
}

fn buch_conditions(t: &HornTriple, n: usize) -> bool {
    let ambient = 2 * n as u32;
    let no_pair = |s: &IndexSet| {
        (1..=n as u32).all(|x| !(s.contains(x) && s.contains(ambient + 1 - x)))
    };
    if !(no_pair(&t.i) && no_pair(&t.j) && no_pair(&t.k)) {
        return false;
    }
    // Fold each set into {1..n} and record which positions fold from above.
    let folded = |s: &IndexSet| -> Vec<(u32, bool)> {
        let mut v: Vec<(u32, bool)> = s
            .elements()
            .iter()
            .map(|&x| {
                if x <= n as u32 {
                    (x, false)
                } else {
                    (ambient + 1 - x, true)
                }
            })
            .collect();
        v.sort_unstable();
        v
    };
    let positions = |s: &IndexSet| -> BTreeSet<usize> {
        folded(s)
            .iter()
            .enumerate()
            .filter_map(|(p, &(_, from_above))| from_above.then_some(p + 1))
            .collect()
    };
    let pi = positions(&t.i);
    let pj = positions(&t.j);
    let pk = positions(&t.k);
    pi.is_disjoint(&pj) && pi.union(&pj).copied().collect::<BTreeSet<_>>() == pk
}
