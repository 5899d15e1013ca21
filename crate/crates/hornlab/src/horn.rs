//! The recursive inequality sets on index triples: the degree-sum superset
//! `U_r^n`, the recursively defined `T_r^n`, the tableau-positive `S_r^n`
//! and multiplicity-one `R_r^n`, their m-factor generalizations, and the
//! closed-form valid-inequality sets for cardinality one and two.

use crate::error::{Error, Result};
use crate::lr::{self, point_class_multiple};
use crate::par::{self, ExecMode};
use crate::partition::{partition_from_subset, IndexSet};
use num_traits::Zero;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// A triple of cardinality-r subsets of `{1..n}` indexing the inequality
/// `sum_K gamma <= sum_I alpha + sum_J beta`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HornTriple {
    pub i: IndexSet,
    pub j: IndexSet,
    pub k: IndexSet,
}

impl HornTriple {
    pub fn new(i: IndexSet, j: IndexSet, k: IndexSet) -> Result<Self> {
        let r = i.cardinality();
        let n = i.ambient();
        if j.cardinality() != r || k.cardinality() != r || j.ambient() != n || k.ambient() != n {
            return Err(Error::validation(
                "triple members must share cardinality and ambient".to_string(),
            ));
        }
        Ok(HornTriple { i, j, k })
    }

    pub fn cardinality(&self) -> usize {
        self.i.cardinality()
    }

    pub fn ambient(&self) -> u32 {
        self.i.ambient()
    }
}

impl std::fmt::Display for HornTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

impl Serialize for HornTriple {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            #[serde(rename = "I")]
            i: &'a [u32],
            #[serde(rename = "J")]
            j: &'a [u32],
            #[serde(rename = "K")]
            k: &'a [u32],
        }
        Repr {
            i: self.i.elements(),
            j: self.j.elements(),
            k: self.k.elements(),
        }
        .serialize(ser)
    }
}

/// An m-tuple of cardinality-r subsets of `{1..n}`, all playing symmetric
/// roles (the scalar-sum problem).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HornTuple {
    pub sets: Vec<IndexSet>,
}

impl HornTuple {
    pub fn cardinality(&self) -> usize {
        self.sets[0].cardinality()
    }

    pub fn ambient(&self) -> u32 {
        self.sets[0].ambient()
    }
}

impl std::fmt::Display for HornTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for HornTuple {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            sets: Vec<&'a [u32]>,
        }
        Repr {
            sets: self.sets.iter().map(|s| s.elements()).collect(),
        }
        .serialize(ser)
    }
}

fn check_rn(r: usize, n: u32) -> Result<()> {
    if r == 0 || r as u32 >= n {
        return Err(Error::domain(format!("need 1 <= r < n, got r={r}, n={n}")));
    }
    Ok(())
}

fn triangle(r: u64) -> u64 {
    r * (r + 1) / 2
}

/// All cardinality-`card` subsets of `{1..n}` whose elements sum to `target`.
fn subsets_with_sum(card: usize, n: u32, target: u64) -> Vec<IndexSet> {
    let mut out = Vec::new();
    let mut acc: Vec<u32> = Vec::with_capacity(card);
    fn rec(start: u32, n: u32, left: usize, target: u64, acc: &mut Vec<u32>, out: &mut Vec<IndexSet>) {
        if left == 0 {
            if target == 0 {
                out.push(IndexSet::new(acc.clone(), n).unwrap());
            }
            return;
        }
        // Remaining elements are strictly increasing from `start`; the sum of
        // the smallest and largest possible completions bound the target.
        let l = left as u64;
        let min_sum = (start as u64) * l + triangle(l) - l;
        let max_sum = (n as u64) * l - triangle(l) + l;
        if target < min_sum || target > max_sum {
            return;
        }
        for v in start..=(n + 1 - left as u32) {
            if (v as u64) > target {
                break;
            }
            acc.push(v);
            rec(v + 1, n, left - 1, target - v as u64, acc, out);
            acc.pop();
        }
    }
    rec(1, n, card, target, &mut acc, &mut out);
    out
}

/// The degree-sum set: triples with
/// `sum(I) + sum(J) = sum(K) + r(r+1)/2`, in lexicographic order.
pub fn u_set(r: usize, n: u32, mode: ExecMode) -> Result<Vec<HornTriple>> {
    check_rn(r, n)?;
    let pairs: Vec<(IndexSet, IndexSet)> = IndexSet::enumerate(r, n)
        .into_iter()
        .flat_map(|i| {
            IndexSet::enumerate(r, n)
                .into_iter()
                .map(move |j| (i.clone(), j))
        })
        .collect();
    let offset = triangle(r as u64);
    let mut out = par::flat_map_vec(
        pairs,
        |(i, j)| {
            let total = i.sum() + j.sum();
            if total < offset {
                return Vec::new();
            }
            subsets_with_sum(r, n, total - offset)
                .into_iter()
                .map(|k| HornTriple {
                    i: i.clone(),
                    j: j.clone(),
                    k,
                })
                .collect()
        },
        mode,
    );
    out.sort();
    Ok(out)
}

/// Membership in `U_r^n` without enumeration.
pub fn u_contains(t: &HornTriple) -> bool {
    t.i.sum() + t.j.sum() == t.k.sum() + triangle(t.cardinality() as u64)
}

static T_TABLES: Mutex<Option<HashMap<(usize, u32), Arc<Vec<HornTriple>>>>> = Mutex::new(None);

/// The recursively defined set: `T_1^n = U_1^n`, and for `r > 1` the members
/// of `U_r^n` whose position sums pass every test triple from `T_p^r`,
/// `p < r`.  Tables are cached across calls.
pub fn t_set(r: usize, n: u32, mode: ExecMode) -> Result<Vec<HornTriple>> {
    check_rn(r, n)?;
    {
        let guard = T_TABLES.lock().unwrap();
        if let Some(t) = guard.as_ref().and_then(|m| m.get(&(r, n))) {
            return Ok(t.as_ref().clone());
        }
    }
    let tests = recursion_tests(r, mode)?;
    let candidates = u_set(r, n, mode)?;
    let out: Vec<HornTriple> = par::flat_map_vec(
        candidates,
        |t| {
            if passes_recursion(&t, &tests) {
                vec![t]
            } else {
                Vec::new()
            }
        },
        mode,
    );
    let mut guard = T_TABLES.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert((r, n), Arc::new(out.clone()));
    Ok(out)
}

/// All test triples from `T_p^r` for `p < r`, used by the recursion.
fn recursion_tests(r: usize, mode: ExecMode) -> Result<Vec<HornTriple>> {
    let mut tests = Vec::new();
    for p in 1..r {
        tests.extend(t_set(p, r as u32, mode)?);
    }
    Ok(tests)
}

fn passes_recursion(t: &HornTriple, tests: &[HornTriple]) -> bool {
    recursion_violation(t, tests).is_none()
}

fn recursion_violation(t: &HornTriple, tests: &[HornTriple]) -> Option<(HornTriple, u64, u64)> {
    tests.iter().find_map(|fgh| {
        let lhs: u64 = positions(&t.i, &fgh.i) + positions(&t.j, &fgh.j);
        let rhs: u64 = positions(&t.k, &fgh.k) + triangle(fgh.cardinality() as u64);
        (lhs > rhs).then(|| (fgh.clone(), lhs, rhs))
    })
}

/// `sum_{f in F} i_f`: picks the F-indexed positions out of I.
fn positions(i: &IndexSet, f: &IndexSet) -> u64 {
    f.elements()
        .iter()
        .map(|&p| i.elements()[(p - 1) as usize] as u64)
        .sum()
}

/// Membership in `T_r^n` by direct recursion, without enumerating `T_r^n`
/// itself.  Usable at sizes where the full table is out of reach.
pub fn t_contains(t: &HornTriple, mode: ExecMode) -> Result<bool> {
    Ok(t_violation(t, mode)?.is_none())
}

/// The first failed recursion test for a `U`-member, with both sides of the
/// violated inequality; `None` for members of `T_r^n`.
pub fn t_violation(t: &HornTriple, mode: ExecMode) -> Result<Option<(HornTriple, u64, u64)>> {
    let r = t.cardinality();
    check_rn(r, t.ambient())?;
    if !u_contains(t) {
        return Err(Error::domain(format!("{t} is not in the degree-sum set")));
    }
    let tests = recursion_tests(r, mode)?;
    Ok(recursion_violation(t, &tests))
}

/// Triples of `U_r^n` whose partitions have a positive tableau count.
pub fn s_set(r: usize, n: u32, mode: ExecMode) -> Result<Vec<HornTriple>> {
    let candidates = u_set(r, n, mode)?;
    Ok(par::flat_map_vec(
        candidates,
        |t| if s_contains(&t) { vec![t] } else { Vec::new() },
        mode,
    ))
}

pub fn s_contains(t: &HornTriple) -> bool {
    lr::lr_positive(
        &partition_from_subset(&t.i),
        &partition_from_subset(&t.j),
        &partition_from_subset(&t.k),
    )
}

/// Triples of `U_r^n` with tableau count exactly one.
pub fn r_set(r: usize, n: u32, mode: ExecMode) -> Result<Vec<HornTriple>> {
    let candidates = u_set(r, n, mode)?;
    Ok(par::flat_map_vec(
        candidates,
        |t| {
            let one = lr::lr_multiplicity_one(
                &partition_from_subset(&t.i),
                &partition_from_subset(&t.j),
                &partition_from_subset(&t.k),
            );
            if one {
                vec![t]
            } else {
                Vec::new()
            }
        },
        mode,
    ))
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::domain(format!("need at least two factors, got m={m}")));
    }
    Ok(())
}

/// The m-factor degree-sum set: tuples with
/// `sum_s sum(I(s)) = (m-1) r (n-r) + m r(r+1)/2`.
pub fn u_set_m(r: usize, n: u32, m: usize, mode: ExecMode) -> Result<Vec<HornTuple>> {
    check_rn(r, n)?;
    check_m(m)?;
    let target = (m as u64 - 1) * (r as u64) * ((n as u64) - r as u64)
        + (m as u64) * triangle(r as u64);
    // Enumerate the first m-1 subsets freely and solve for the last one's sum.
    let mut prefixes: Vec<Vec<IndexSet>> = vec![Vec::new()];
    for _ in 0..m - 1 {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                IndexSet::enumerate(r, n).into_iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    let mut out = par::flat_map_vec(
        prefixes,
        |prefix| {
            let partial: u64 = prefix.iter().map(|s| s.sum()).sum();
            if partial > target {
                return Vec::new();
            }
            subsets_with_sum(r, n, target - partial)
                .into_iter()
                .map(|last| {
                    let mut sets = prefix.clone();
                    sets.push(last);
                    HornTuple { sets }
                })
                .collect()
        },
        mode,
    );
    out.sort();
    Ok(out)
}

static TM_TABLES: Mutex<Option<HashMap<(usize, u32, usize), Arc<Vec<HornTuple>>>>> =
    Mutex::new(None);

/// The m-factor recursive set: `T_1^n(m) = U_1^n(m)`, and for `r > 1` the
/// members of `U_r^n(m)` such that for every test tuple from `T_p^r(m)`,
/// `p < r`, the shifted position sums satisfy
/// `sum_s sum_{f in F(s)} (i_f(s) - f) >= (m-1) p (n-r)`.  Since the test
/// tuples carry a fixed degree sum, the right side works out to
/// `(m-1) p (n-p) + m p(p+1)/2` against the raw position sums.
pub fn t_set_m(r: usize, n: u32, m: usize, mode: ExecMode) -> Result<Vec<HornTuple>> {
    check_rn(r, n)?;
    check_m(m)?;
    {
        let guard = TM_TABLES.lock().unwrap();
        if let Some(t) = guard.as_ref().and_then(|t| t.get(&(r, n, m))) {
            return Ok(t.as_ref().clone());
        }
    }
    let mut tests: Vec<HornTuple> = Vec::new();
    for p in 1..r {
        tests.extend(t_set_m(p, r as u32, m, mode)?);
    }
    let candidates = u_set_m(r, n, m, mode)?;
    let out: Vec<HornTuple> = par::flat_map_vec(
        candidates,
        |tuple| {
            let ok = tests.iter().all(|test| {
                let p = test.cardinality() as u64;
                let lhs: u64 = tuple
                    .sets
                    .iter()
                    .zip(&test.sets)
                    .map(|(i, f)| positions(i, f))
                    .sum();
                lhs >= (m as u64 - 1) * p * ((n as u64) - p) + (m as u64) * triangle(p)
            });
            if ok {
                vec![tuple]
            } else {
                Vec::new()
            }
        },
        mode,
    );
    let mut guard = TM_TABLES.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert((r, n, m), Arc::new(out.clone()));
    Ok(out)
}

/// Tuples whose Schubert-class product is a nonzero multiple of the class of
/// a point.
pub fn s_set_m(r: usize, n: u32, m: usize, mode: ExecMode) -> Result<Vec<HornTuple>> {
    check_m(m)?;
    let candidates = u_set_m(r, n, m, mode)?;
    Ok(par::flat_map_vec(
        candidates,
        |tuple| {
            let d = point_class_multiple(&tuple.sets, r, n, ExecMode::Sequential)
                .expect("degree-sum members have matching codimension");
            if d.is_zero() {
                Vec::new()
            } else {
                vec![tuple]
            }
        },
        mode,
    ))
}

/// Tuples whose Schubert-class product is exactly the class of a point.
pub fn r_set_m(r: usize, n: u32, m: usize, mode: ExecMode) -> Result<Vec<HornTuple>> {
    check_m(m)?;
    let candidates = u_set_m(r, n, m, mode)?;
    let one = num_bigint::BigUint::from(1u32);
    Ok(par::flat_map_vec(
        candidates,
        |tuple| {
            let d = point_class_multiple(&tuple.sets, r, n, ExecMode::Sequential)
                .expect("degree-sum members have matching codimension");
            if d == one {
                vec![tuple]
            } else {
                Vec::new()
            }
        },
        mode,
    ))
}

/// The closed-form valid-inequality sets known for cardinality one and two:
/// for r = 1 the triples with `i1 + j1 <= k1 + 1`; for r = 2 the triples
/// additionally satisfying `i2 + j1 <= k2 + 1`, `i1 + j2 <= k2 + 1`, and
/// `i1 + i2 + j1 + j2 <= k1 + k2 + 3`.
pub fn h_set_small(r: usize, n: u32) -> Result<Vec<HornTriple>> {
    check_rn(r, n)?;
    if r > 2 {
        return Err(Error::domain(format!(
            "no closed form is available for cardinality {r}"
        )));
    }
    let sets = IndexSet::enumerate(r, n);
    let mut out = Vec::new();
    for i in &sets {
        for j in &sets {
            for k in &sets {
                let e = |s: &IndexSet, p: usize| s.elements()[p] as u64;
                let ok = match r {
                    1 => e(i, 0) + e(j, 0) <= e(k, 0) + 1,
                    _ => {
                        e(i, 0) + e(j, 0) <= e(k, 0) + 1
                            && e(i, 1) + e(j, 0) <= e(k, 1) + 1
                            && e(i, 0) + e(j, 1) <= e(k, 1) + 1
                            && e(i, 0) + e(i, 1) + e(j, 0) + e(j, 1) <= e(k, 0) + e(k, 1) + 3
                    }
                };
                if ok {
                    out.push(HornTriple {
                        i: i.clone(),
                        j: j.clone(),
                        k: k.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}
