//! Littlewood-Richardson coefficients by direct skew-tableau enumeration,
//! the Pieri special cases, and products of Schubert classes in the
//! cohomology of a Grassmannian.
//!
//! A coefficient `c[lambda,mu]^nu` counts fillings of the skew shape
//! `nu \ lambda` with content `mu` such that rows weakly increase, columns
//! strictly increase, and the reading word (right to left in each row, top
//! row first) is a lattice word.  All four constraints are prefix-closed in
//! reading order, so a backtracking fill with incremental checks enumerates
//! exactly the valid fillings.

use crate::error::{Error, Result};
use crate::par::{self, ExecMode};
use crate::partition::{partition_from_subset, IndexSet, Partition};
use num_bigint::BigUint;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

/// One valid filling of `nu \ lambda`: for each row of `nu`, the entries of
/// the skew boxes left to right (inner boxes omitted).
pub type Filling = Vec<Vec<u32>>;

static MEMO: Mutex<Option<HashMap<(Partition, Partition, Partition), u128>>> = Mutex::new(None);

/// The Littlewood-Richardson coefficient `c[lambda,mu]^nu`.  Zero whenever
/// the weights do not add up or `lambda` is not contained in `nu`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> BigUint {
    BigUint::from(count_memoized(lambda, mu, nu))
}

/// Counts fillings, stopping as soon as `cap` are found.  `lr_count_upto(..,
/// 1) == 1` is a positivity test that never enumerates more than one filling;
/// cap 2 distinguishes multiplicity one from higher multiplicity.
pub fn lr_count_upto(lambda: &Partition, mu: &Partition, nu: &Partition, cap: u128) -> u128 {
    if cap == 0 {
        return 0;
    }
    {
        let guard = MEMO.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(&full) = map.get(&canonical_key(lambda, mu, nu)) {
                return full.min(cap);
            }
        }
    }
    let (lam, m, n) = orient(lambda, mu, nu);
    count_fillings(&lam, &m, &n, Some(cap), None)
}

/// Whether `c[lambda,mu]^nu > 0`.
pub fn lr_positive(lambda: &Partition, mu: &Partition, nu: &Partition) -> bool {
    lr_count_upto(lambda, mu, nu, 1) == 1
}

/// Whether `c[lambda,mu]^nu = 1` exactly.
pub fn lr_multiplicity_one(lambda: &Partition, mu: &Partition, nu: &Partition) -> bool {
    lr_count_upto(lambda, mu, nu, 2) == 1
}

/// Every valid filling of `nu \ lambda` with content `mu`, in the order the
/// backtracking search discovers them.
pub fn lr_fillings(lambda: &Partition, mu: &Partition, nu: &Partition) -> Vec<Filling> {
    let mut out = Vec::new();
    // No canonicalization here: the caller asked for fillings of this exact
    // shape and content.
    count_fillings(lambda, mu, nu, None, Some(&mut out));
    out
}

fn canonical_key(lambda: &Partition, mu: &Partition, nu: &Partition) -> (Partition, Partition, Partition) {
    let (l, m, n) = orient(lambda, mu, nu);
    (l, m, n)
}

/// Puts the smaller-weight factor in the content slot (the coefficient is
/// symmetric and fewer boxes to fill means a smaller search tree).
fn orient(lambda: &Partition, mu: &Partition, nu: &Partition) -> (Partition, Partition, Partition) {
    if mu.weight() <= lambda.weight() {
        (lambda.clone(), mu.clone(), nu.clone())
    } else {
        (mu.clone(), lambda.clone(), nu.clone())
    }
}

fn count_memoized(lambda: &Partition, mu: &Partition, nu: &Partition) -> u128 {
    let key = canonical_key(lambda, mu, nu);
    {
        let guard = MEMO.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(&c) = map.get(&key) {
                return c;
            }
        }
    }
    let c = count_fillings(&key.0, &key.1, &key.2, None, None);
    let mut guard = MEMO.lock().unwrap();
    guard.get_or_insert_with(HashMap::new).insert(key, c);
    c
}

fn count_fillings(
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    cap: Option<u128>,
    mut collect: Option<&mut Vec<Filling>>,
) -> u128 {
    if lambda.weight() + mu.weight() != nu.weight()
        || !nu.contains(lambda)
        || !nu.contains(mu)
    {
        return 0;
    }
    if mu.is_empty() {
        if let Some(out) = collect.as_mut() {
            out.push(vec![Vec::new(); nu.len()]);
        }
        return 1;
    }
    // Skew boxes in reading order: rows top to bottom, columns right to left.
    let boxes: Vec<(usize, u32)> = (0..nu.len())
        .flat_map(|i| (lambda.part(i)..nu.part(i)).rev().map(move |j| (i, j)))
        .collect();
    let width = nu.part(0) as usize;
    let mut grid = vec![0u32; nu.len() * width];
    let mut counts = vec![0u64; mu.len()];
    let mut found = 0u128;

    fn rec(
        pos: usize,
        boxes: &[(usize, u32)],
        grid: &mut [u32],
        width: usize,
        counts: &mut [u64],
        lambda: &Partition,
        nu: &Partition,
        mu: &Partition,
        cap: Option<u128>,
        found: &mut u128,
        collect: &mut Option<&mut Vec<Filling>>,
    ) {
        if pos == boxes.len() {
            *found += 1;
            if let Some(out) = collect.as_mut() {
                let filling = (0..nu.len())
                    .map(|i| {
                        (lambda.part(i)..nu.part(i))
                            .map(|j| grid[i * width + j as usize])
                            .collect()
                    })
                    .collect();
                out.push(filling);
            }
            return;
        }
        let (i, j) = boxes[pos];
        // Row entries weakly increase leftward constraint: at most the entry
        // to the right, which is already placed.
        let row_max = if j + 1 < nu.part(i) {
            grid[i * width + j as usize + 1]
        } else {
            mu.len() as u32
        };
        // Column entries strictly increase: greater than the entry above,
        // when the box above is a filled skew box.
        let col_min = if i > 0 && j >= lambda.part(i - 1) {
            grid[(i - 1) * width + j as usize] + 1
        } else {
            1
        };
        for v in col_min..=row_max {
            let vi = (v - 1) as usize;
            if counts[vi] as u32 >= mu.part(vi) {
                continue;
            }
            // Lattice word: after placing, #v must not exceed #(v-1).
            if v > 1 && counts[vi] + 1 > counts[vi - 1] {
                continue;
            }
            counts[vi] += 1;
            grid[i * width + j as usize] = v;
            rec(pos + 1, boxes, grid, width, counts, lambda, nu, mu, cap, found, collect);
            counts[vi] -= 1;
            if cap.is_some_and(|c| *found >= c) {
                return;
            }
        }
    }

    rec(
        0, &boxes, &mut grid, width, &mut counts, lambda, nu, mu, cap, &mut found,
        &mut collect,
    );
    found
}

/// Pieri row rule: all partitions obtained from `alpha` by adding `p` boxes,
/// no two in the same column, keeping at most `max_rows` rows.  Equivalently
/// the gamma with `gamma_1 >= alpha_1 >= gamma_2 >= alpha_2 >= ...` and
/// `|gamma| = |alpha| + p`.
pub fn pieri_row_expand(alpha: &Partition, p: u32, max_rows: usize) -> Vec<Partition> {
    let rows = max_rows.min(alpha.len() + 1);
    let mut out = Vec::new();
    let mut acc: Vec<u32> = Vec::new();
    fn rec(i: usize, rows: usize, left: u32, alpha: &Partition, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == rows {
            if left == 0 {
                out.push(Partition::new(acc.clone()).unwrap());
            }
            return;
        }
        let lo = alpha.part(i);
        let hi = if i == 0 { alpha.part(0) + left } else { alpha.part(i - 1).min(lo + left) };
        for g in lo..=hi {
            acc.push(g);
            rec(i + 1, rows, left - (g - lo), alpha, acc, out);
            acc.pop();
        }
    }
    if alpha.len() <= max_rows {
        rec(0, rows, p, alpha, &mut acc, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// Pieri column rule: add `p` boxes, no two in the same row, keeping at most
/// `max_rows` rows.  Each row grows by zero or one box.
pub fn pieri_column_expand(alpha: &Partition, p: u32, max_rows: usize) -> Vec<Partition> {
    let rows = max_rows.min(alpha.len() + p as usize);
    let mut out = Vec::new();
    let mut acc: Vec<u32> = Vec::new();
    fn rec(i: usize, rows: usize, left: u32, alpha: &Partition, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == rows || (left == 0 && i >= alpha.len()) {
            if left == 0 {
                out.push(Partition::new(acc.clone()).unwrap());
            }
            return;
        }
        for d in 0..=left.min(1) {
            let g = alpha.part(i) + d;
            if i > 0 && g > acc[i - 1] {
                continue;
            }
            acc.push(g);
            rec(i + 1, rows, left - d, alpha, acc, out);
            acc.pop();
        }
    }
    if alpha.len() <= max_rows {
        rec(0, rows, p, alpha, &mut acc, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// The complement of `lambda` in the `r x cols` rectangle, read upside down:
/// `hat(lambda)_p = cols - lambda_{r+1-p}`.  The Schubert classes of `lambda`
/// and its complement are Poincare dual in `Gr(r, r+cols)`.
pub fn rectangle_complement(lambda: &Partition, r: usize, cols: u32) -> Result<Partition> {
    if !lambda.fits_rectangle(r, cols) {
        return Err(Error::domain(format!(
            "partition {lambda} does not fit the {r} x {cols} rectangle"
        )));
    }
    let parts: Vec<u32> = (0..r).rev().map(|i| cols - lambda.part(i)).collect();
    Partition::new(parts)
}

/// The structure constant `d[alpha,beta]^gamma` of `H*(Gr(r, r+cols))` in the
/// Schubert basis.  For `gamma` inside the rectangle it equals the LR
/// coefficient.
pub fn schubert_coefficient(
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
    r: usize,
    cols: u32,
) -> Result<BigUint> {
    for p in [alpha, beta, gamma] {
        if !p.fits_rectangle(r, cols) {
            return Err(Error::domain(format!(
                "partition {p} does not fit the {r} x {cols} rectangle"
            )));
        }
    }
    Ok(lr_coefficient(alpha, beta, gamma))
}

/// Expands a product of Schubert classes, truncated to the rectangle.
fn expand_partitions(
    factors: &[Partition],
    r: usize,
    cols: u32,
    mode: ExecMode,
) -> Result<BTreeMap<Partition, BigUint>> {
    let mut acc: BTreeMap<Partition, BigUint> = BTreeMap::new();
    acc.insert(Partition::empty(), BigUint::from(1u32));
    for factor in factors {
        if !factor.fits_rectangle(r, cols) {
            return Err(Error::domain(format!(
                "partition {factor} does not fit the {r} x {cols} rectangle"
            )));
        }
        let terms = par::flat_map_vec(
            acc.into_iter().collect::<Vec<_>>(),
            |(gamma, coeff)| {
                let weight = gamma.weight() + factor.weight();
                if weight > (r as u64) * (cols as u64) {
                    return Vec::new();
                }
                Partition::enumerate_in_rectangle(weight, r, cols)
                    .into_iter()
                    .filter(|nu| nu.contains(&gamma))
                    .filter_map(|nu| {
                        let c = lr_coefficient(&gamma, factor, &nu);
                        if c == BigUint::from(0u32) {
                            None
                        } else {
                            Some((nu, &coeff * c))
                        }
                    })
                    .collect()
            },
            mode,
        );
        acc = BTreeMap::new();
        for (nu, c) in terms {
            *acc.entry(nu).or_default() += c;
        }
    }
    Ok(acc)
}

/// Full rectangle-truncated expansion of the product of the classes indexed
/// by the given subsets' partitions, as a map from partition to coefficient.
pub fn expand_product(
    sets: &[IndexSet],
    r: usize,
    n: u32,
    mode: ExecMode,
) -> Result<BTreeMap<Partition, BigUint>> {
    let factors = set_partitions(sets, r, n)?;
    expand_partitions(&factors, r, n - r as u32, mode)
}

/// The integer `d` such that the product of the dimension-indexed Schubert
/// classes of the subsets equals `d` times the class of a point in
/// `Gr(r, n)`.  Each subset `I` contributes the class dual to `sigma` of
/// `lambda(I)`, so the full subset `{1..r}` contributes the point class
/// itself.  Errors unless the codimensions sum to `r(n-r)`.
pub fn point_class_multiple(sets: &[IndexSet], r: usize, n: u32, mode: ExecMode) -> Result<BigUint> {
    let cols = n - r as u32;
    let factors: Vec<Partition> = set_partitions(sets, r, n)?
        .iter()
        .map(|lam| rectangle_complement(lam, r, cols))
        .collect::<Result<_>>()?;
    let total: u64 = factors.iter().map(|f| f.weight()).sum();
    if total != (r as u64) * (cols as u64) {
        return Err(Error::domain(format!(
            "codimensions sum to {total}, expected {}",
            (r as u64) * (cols as u64)
        )));
    }
    let rectangle = Partition::new(vec![cols; r])?;
    let expansion = expand_partitions(&factors, r, cols, mode)?;
    Ok(expansion.get(&rectangle).cloned().unwrap_or_default())
}

fn set_partitions(sets: &[IndexSet], r: usize, n: u32) -> Result<Vec<Partition>> {
    sets.iter()
        .map(|s| {
            if s.cardinality() != r || s.ambient() != n {
                return Err(Error::validation(format!(
                    "subset {s} is not a cardinality-{r} subset of 1..={n}"
                )));
            }
            Ok(partition_from_subset(s))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn c(l: &[u32], m: &[u32], n: &[u32]) -> u128 {
        lr_count_upto(&part(l), &part(m), &part(n), u128::MAX)
    }

    #[test]
    fn multiplicity_three_example() {
        assert_eq!(c(&[3, 2, 1], &[3, 2, 2], &[5, 4, 3, 1]), 3);
    }

    #[test]
    fn multiplicity_two_example() {
        assert_eq!(c(&[2, 1], &[2, 1], &[3, 2, 1]), 2);
    }

    #[test]
    fn identity_and_degree_cases() {
        for lam in [part(&[]), part(&[3, 1]), part(&[5, 4, 3, 1])] {
            assert_eq!(lr_coefficient(&lam, &Partition::empty(), &lam), BigUint::from(1u32));
        }
        assert_eq!(c(&[2], &[2], &[3]), 0); // weight mismatch
        assert_eq!(c(&[2, 2], &[1], &[2, 1, 1]), 0); // containment failure
    }

    #[test]
    fn staircase_doubling_pairs() {
        assert_eq!(c(&[5, 4, 3, 2, 1], &[2, 2, 2], &[6, 5, 4, 3, 2, 1]), 5);
        assert_eq!(c(&[10, 8, 6, 4, 2], &[4, 4, 4], &[12, 10, 8, 6, 4, 2]), 16);
        assert_eq!(c(&[4, 3, 2, 1], &[2, 2, 1], &[5, 4, 3, 2, 1]), 5);
        assert_eq!(c(&[8, 6, 4, 2], &[4, 4, 2], &[10, 8, 6, 4, 2]), 16);
    }

    #[test]
    fn fillings_match_counts() {
        let fillings = lr_fillings(&part(&[2, 1]), &part(&[2, 1]), &part(&[3, 2, 1]));
        assert_eq!(fillings.len(), 2);
        for f in &fillings {
            let content: u64 = f.iter().flatten().count() as u64;
            assert_eq!(content, 3);
        }
        assert_eq!(
            lr_fillings(&part(&[3, 2, 1]), &part(&[3, 2, 2]), &part(&[5, 4, 3, 1])).len(),
            3
        );
    }

    #[test]
    fn capped_counting() {
        let (l, m, n) = (part(&[3, 2, 1]), part(&[3, 2, 2]), part(&[5, 4, 3, 1]));
        assert_eq!(lr_count_upto(&l, &m, &n, 1), 1);
        assert_eq!(lr_count_upto(&l, &m, &n, 2), 2);
        assert!(lr_positive(&l, &m, &n));
        assert!(!lr_multiplicity_one(&l, &m, &n));
        assert!(lr_multiplicity_one(&part(&[1]), &part(&[1]), &part(&[2])));
    }

    #[test]
    fn pieri_row_examples() {
        assert_eq!(pieri_row_expand(&part(&[1]), 1, 2), vec![part(&[1, 1]), part(&[2])]);
        assert_eq!(pieri_row_expand(&Partition::empty(), 3, 4), vec![part(&[3])]);
        let got = pieri_row_expand(&part(&[2, 1]), 2, 3);
        let want = vec![part(&[2, 2, 1]), part(&[3, 1, 1]), part(&[3, 2]), part(&[4, 1])];
        assert_eq!(got, want);
    }

    #[test]
    fn pieri_column_examples() {
        assert_eq!(pieri_column_expand(&part(&[1]), 1, 2), vec![part(&[1, 1]), part(&[2])]);
        assert_eq!(pieri_column_expand(&part(&[2, 2]), 2, 3), vec![part(&[3, 2, 1]), part(&[3, 3])]);
        assert_eq!(pieri_column_expand(&part(&[2, 2]), 2, 4), vec![part(&[2, 2, 1, 1]), part(&[3, 2, 1]), part(&[3, 3])]);
        assert_eq!(pieri_column_expand(&part(&[3, 1]), 0, 2), vec![part(&[3, 1])]);
    }

    #[test]
    fn pieri_agrees_with_direct_counts() {
        let shapes = [part(&[]), part(&[1]), part(&[2, 1]), part(&[3, 1, 1]), part(&[2, 2])];
        for alpha in &shapes {
            for p in 0..=3u32 {
                let row = pieri_row_expand(alpha, p, 5);
                let col = pieri_column_expand(alpha, p, 5);
                let weight = alpha.weight() + p as u64;
                for gamma in Partition::enumerate_in_rectangle(weight, 5, 8) {
                    let via_row = lr_coefficient(alpha, &Partition::new(vec![p]).unwrap(), &gamma);
                    let expect = if row.contains(&gamma) { 1u32 } else { 0 };
                    assert_eq!(via_row, BigUint::from(expect), "row {alpha} + {p} -> {gamma}");
                    let column = Partition::new(vec![1; p as usize]).unwrap();
                    let via_col = lr_coefficient(alpha, &column, &gamma);
                    let expect = if col.contains(&gamma) { 1u32 } else { 0 };
                    assert_eq!(via_col, BigUint::from(expect), "col {alpha} + {p} -> {gamma}");
                }
            }
        }
    }

    #[test]
    fn schubert_coefficient_examples() {
        assert_eq!(
            schubert_coefficient(&part(&[1]), &part(&[1]), &part(&[1, 1]), 2, 2).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            schubert_coefficient(&part(&[2, 1]), &part(&[2, 1]), &part(&[3, 2, 1]), 3, 3).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(
            schubert_coefficient(&part(&[2]), &part(&[1]), &part(&[2]), 2, 2).unwrap(),
            BigUint::from(0u32)
        );
        assert!(schubert_coefficient(&part(&[3]), &part(&[1]), &part(&[3, 1]), 2, 2).is_err());
    }

    #[test]
    fn expand_product_examples() {
        let s135 = IndexSet::new(vec![1, 3, 5], 6).unwrap();
        let one = expand_product(&[s135.clone()], 3, 6, ExecMode::Sequential).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[&part(&[2, 1])], BigUint::from(1u32));

        let s1 = IndexSet::new(vec![1, 3], 4).unwrap(); // lambda = (1)
        let sq = expand_product(&[s1.clone(), s1], 2, 4, ExecMode::Sequential).unwrap();
        assert_eq!(sq[&part(&[2])], BigUint::from(1u32));
        assert_eq!(sq[&part(&[1, 1])], BigUint::from(1u32));
        assert_eq!(sq.len(), 2);

        let prod = expand_product(&[s135.clone(), s135], 3, 6, ExecMode::Sequential).unwrap();
        assert_eq!(prod[&part(&[3, 2, 1])], BigUint::from(2u32));
    }

    #[test]
    fn expand_product_order_independent() {
        let a = IndexSet::new(vec![1, 3, 5], 6).unwrap();
        let b = IndexSet::new(vec![2, 3, 4], 6).unwrap();
        let ab = expand_product(&[a.clone(), b.clone()], 3, 6, ExecMode::Sequential).unwrap();
        let ba = expand_product(&[b, a], 3, 6, ExecMode::Parallel).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn rectangle_complement_examples() {
        assert_eq!(rectangle_complement(&part(&[]), 3, 3).unwrap(), part(&[3, 3, 3]));
        assert_eq!(rectangle_complement(&part(&[3, 2, 1]), 3, 3).unwrap(), part(&[2, 1]));
        assert!(rectangle_complement(&part(&[4]), 3, 3).is_err());
    }

    #[test]
    fn point_multiple_of_the_double_point_product() {
        let s246 = IndexSet::new(vec![2, 4, 6], 6).unwrap();
        let d = point_class_multiple(&[s246.clone(), s246.clone(), s246], 3, 6, ExecMode::Sequential).unwrap();
        assert_eq!(d, BigUint::from(2u32));
    }

    #[test]
    fn point_multiple_of_dual_pairs() {
        use crate::partition::subset_from_partition;
        // For every K, pairing with the subset of the complementary partition
        // gives the class of a point exactly once.
        for k in IndexSet::enumerate(2, 5) {
            let lam = partition_from_subset(&k);
            let dual = rectangle_complement(&lam, 2, 3).unwrap();
            let kd = subset_from_partition(&dual, 2, 5).unwrap();
            let d = point_class_multiple(&[k, kd], 2, 5, ExecMode::Sequential).unwrap();
            assert_eq!(d, BigUint::from(1u32));
        }
    }

    #[test]
    fn point_multiple_on_weyl_triples() {
        // Singleton subsets {i},{j},{i+j-1}: the product in projective space
        // is a point with multiplicity one.
        let n = 6u32;
        for i in 1..=n {
            for j in 1..=n {
                let k = i + j;
                if k < 2 || k - 1 > n {
                    continue;
                }
                let sets = vec![
                    IndexSet::new(vec![i], n).unwrap().reflect(),
                    IndexSet::new(vec![j], n).unwrap().reflect(),
                    IndexSet::new(vec![k - 1], n).unwrap(),
                ];
                let d = point_class_multiple(&sets, 1, n, ExecMode::Sequential).unwrap();
                assert_eq!(d, BigUint::from(1u32), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn point_multiple_codimension_mismatch() {
        let s = IndexSet::new(vec![1, 2, 3], 6).unwrap();
        assert!(point_class_multiple(&[s.clone(), s], 3, 6, ExecMode::Sequential).is_err());
    }

    fn small_partitions(max_weight: u64) -> Vec<Partition> {
        (0..=max_weight)
            .flat_map(|w| Partition::enumerate_in_rectangle(w, 6, 8))
            .collect()
    }

    #[test]
    fn symmetry_and_conjugation_small_weights() {
        // c[l,m]^n = c[m,l]^n = c[l',m']^n' for |n| <= 6 (the |n| <= 10 sweep
        // lives in the acceptance suite).
        let shapes = small_partitions(6);
        for nu in &shapes {
            let w = nu.weight();
            for lam in shapes.iter().filter(|l| l.weight() <= w && nu.contains(l)) {
                for mu in shapes.iter().filter(|m| m.weight() == w - lam.weight()) {
                    let a = lr_coefficient(lam, mu, nu);
                    assert_eq!(a, lr_coefficient(mu, lam, nu));
                    assert_eq!(
                        a,
                        lr_coefficient(&lam.conjugate(), &mu.conjugate(), &nu.conjugate())
                    );
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn permutation_sums_are_positive(
            a in proptest::collection::vec(0u32..4, 1..4),
            b in proptest::collection::vec(0u32..4, 1..4),
            perm_seed in any::<u64>(),
        ) {
            // If gamma is the decreasing sort of alpha_i + beta_{sigma(i)} for
            // any permutation sigma, diagonal matrices realize it, so the
            // coefficient is positive.
            let n = a.len().min(b.len());
            let mut alpha = a[..n].to_vec();
            let mut beta = b[..n].to_vec();
            alpha.sort_unstable_by(|x, y| y.cmp(x));
            beta.sort_unstable_by(|x, y| y.cmp(x));
            let mut order: Vec<usize> = (0..n).collect();
            // Cheap seeded shuffle.
            for i in (1..n).rev() {
                let j = (perm_seed as usize).wrapping_mul(i + 1) % (i + 1);
                order.swap(i, j);
            }
            let mut gamma: Vec<u32> = (0..n).map(|i| alpha[i] + beta[order[i]]).collect();
            gamma.sort_unstable_by(|x, y| y.cmp(x));
            let lam = Partition::new(alpha).unwrap();
            let mu = Partition::new(beta).unwrap();
            let nu = Partition::new(gamma).unwrap();
            prop_assert!(lr_positive(&lam, &mu, &nu), "{lam} {mu} {nu}");
        }
    }
}
