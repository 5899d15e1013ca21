//! Floating-point laboratory: a Jacobi Hermitian eigensolver, singular
//! values through the symmetric embedding, seeded random unitaries, Rayleigh
//! traces, and reproductions of the explicit counterexample matrices.
//!
//! Everything here is approximate and compared with tolerances; the exact
//! decision procedures live in the spectra module.

use crate::error::{Error, Result};
use crate::par::{self, ExecMode};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Hermitian deviation allowed, relative to `max(1, max-entry)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Orthonormality tolerance for bases and sampled unitaries.
pub const ORTHO_TOL: f64 = 1e-10;
/// Absolute tolerance when matching the worked examples' integer spectra.
pub const EXAMPLE_TOL: f64 = 1e-9;
/// Slack allowed when checking inequalities on sampled spectra.
pub const SLACK_TOL: f64 = 1e-8;
/// Jacobi convergence threshold, relative to the Frobenius norm.
pub const JACOBI_TOL: f64 = 1e-13;

/// A dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl NumericMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::validation(format!(
                "expected {rows} x {cols} = {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(NumericMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        NumericMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = NumericMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = NumericMatrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::validation("ragged rows".to_string()));
        }
        NumericMatrix::new(
            r,
            c,
            rows.iter()
                .flatten()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn conj_transpose(&self) -> NumericMatrix {
        let mut out = NumericMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &NumericMatrix) -> Result<NumericMatrix> {
        if self.cols != other.rows {
            return Err(Error::domain("dimension mismatch in product".to_string()));
        }
        let mut out = NumericMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &NumericMatrix) -> Result<NumericMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::domain("dimension mismatch in sum".to_string()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        NumericMatrix::new(self.rows, self.cols, data)
    }

    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let tol = HERMITIAN_TOL * self.norm_max().max(1.0);
        (0..self.rows).all(|i| {
            (i..self.cols).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol)
        })
    }

    /// JSON as nested arrays of `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| {
                    serde_json::Value::Array(
                        (0..self.cols)
                            .map(|j| {
                                let z = self.get(i, j);
                                serde_json::json!([z.re, z.im])
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = || Error::validation("expected rows of [re, im] pairs".to_string());
        let rows = value.as_array().ok_or_else(bad)?;
        let mut data = Vec::new();
        let mut cols = None;
        for row in rows {
            let row = row.as_array().ok_or_else(bad)?;
            if *cols.get_or_insert(row.len()) != row.len() {
                return Err(bad());
            }
            for entry in row {
                let pair = entry.as_array().ok_or_else(bad)?;
                if pair.len() != 2 {
                    return Err(bad());
                }
                let re = pair[0].as_f64().ok_or_else(bad)?;
                let im = pair[1].as_f64().ok_or_else(bad)?;
                data.push(Complex64::new(re, im));
            }
        }
        NumericMatrix::new(rows.len(), cols.unwrap_or(0), data)
    }
}

/// One cyclic-Jacobi diagonalization of a real symmetric matrix; returns the
/// eigenvalues in decreasing order.
fn jacobi_symmetric(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    let fro: f64 = a
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let tol = JACOBI_TOL * fro.max(f64::MIN_POSITIVE);
    for _sweep in 0..200 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
            eig.sort_by(|x, y| y.total_cmp(x));
            return Ok(eig);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= tol / (n as f64) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::resource("Jacobi iteration did not converge".to_string()))
}

/// Eigenvalues of a Hermitian matrix, decreasing.  A complex input `X + iY`
/// is embedded as the real symmetric `[[X, -Y], [Y, X]]`, whose spectrum is
/// the wanted one doubled.
pub fn hermitian_eigenvalues(a: &NumericMatrix) -> Result<Vec<f64>> {
    if !a.is_hermitian() {
        return Err(Error::validation("matrix is not Hermitian".to_string()));
    }
    let n = a.rows;
    if a.data.iter().all(|z| z.im == 0.0) {
        let real: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| a.get(i, j).re).collect())
            .collect();
        return jacobi_symmetric(real);
    }
    let mut big = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = a.get(i, j);
            big[i][j] = z.re;
            big[n + i][n + j] = z.re;
            big[i][n + j] = -z.im;
            big[n + i][j] = z.im;
        }
    }
    let doubled = jacobi_symmetric(big)?;
    // Each eigenvalue appears twice; take every other one.
    Ok(doubled.into_iter().step_by(2).collect())
}

/// Singular values through the Hermitian embedding `[[0, A], [A*, 0]]`,
/// whose spectrum is plus and minus the singular values padded with zeros.
pub fn singular_values(a: &NumericMatrix) -> Result<Vec<f64>> {
    let (m, n) = (a.rows, a.cols);
    let mut h = NumericMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            h.set(i, m + j, a.get(i, j));
            h.set(m + j, i, a.get(i, j).conj());
        }
    }
    let eig = hermitian_eigenvalues(&h)?;
    Ok(eig.into_iter().take(m.min(n)).map(|x| x.max(0.0)).collect())
}

fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    // Box-Muller on open-interval uniforms.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = 2.0 * std::f64::consts::PI * u2;
    (r * t.cos(), r * t.sin())
}

fn gram_schmidt(cols: &mut Vec<Vec<Complex64>>) {
    let n = cols.len();
    for j in 0..n {
        // Two orthogonalization passes for numerical stability.
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for i in 0..cols[j].len() {
                    let v = proj * cols[k][i];
                    cols[j][i] -= v;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
        // Phase normalization: make the diagonal entry real nonnegative.
        let d = cols[j][j];
        if d.norm() > 0.0 {
            let phase = d.conj() / d.norm();
            for z in &mut cols[j] {
                *z *= phase;
            }
        }
    }
}

/// An approximately Haar unitary: complex Gaussian columns orthonormalized
/// with phase normalization.  Deterministic per seed.
pub fn random_unitary(n: usize, seed: u64) -> Result<NumericMatrix> {
    if n == 0 {
        return Err(Error::validation("need n >= 1".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let (re, im) = normal_pair(&mut rng);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    gram_schmidt(&mut cols);
    let mut u = NumericMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u.set(i, j, z);
        }
    }
    Ok(u)
}

/// Real orthogonal variant of [`random_unitary`].
pub fn random_orthogonal(n: usize, seed: u64) -> Result<NumericMatrix> {
    if n == 0 {
        return Err(Error::validation("need n >= 1".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Complex64::new(normal_pair(&mut rng).0, 0.0))
                .collect()
        })
        .collect();
    gram_schmidt(&mut cols);
    let mut u = NumericMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u.set(i, j, z);
        }
    }
    Ok(u)
}

/// How a sampled triple is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    HermitianSum,
    RealSymmetricSum,
    SingularSum,
    SingularProduct,
}

/// A randomly sampled instance: inputs, the computed spectrum, and the seed
/// that reproduces it.
#[derive(Debug, Clone, Serialize)]
pub struct SampledTriple {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub seed: u64,
    pub kind: SampleKind,
}

/// Spectrum of `D(alpha) + U D(beta) U*` for an explicit conjugating matrix.
pub fn sum_with_unitary(alpha: &[f64], beta: &[f64], u: &NumericMatrix) -> Result<Vec<f64>> {
    if alpha.len() != beta.len() || alpha.len() != u.rows() {
        return Err(Error::domain("length mismatch".to_string()));
    }
    let conj = u
        .mul(&NumericMatrix::diagonal(beta))?
        .mul(&u.conj_transpose())?;
    // Symmetrize away roundoff so the Hermitian gate passes.
    let mut b = conj.clone();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let avg = (conj.get(i, j) + conj.get(j, i).conj()) / 2.0;
            b.set(i, j, avg);
        }
    }
    hermitian_eigenvalues(&NumericMatrix::diagonal(alpha).add(&b)?)
}

fn check_decreasing(values: &[f64]) -> Result<()> {
    if values.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::validation("values must be weakly decreasing".to_string()));
    }
    Ok(())
}

/// Draws one random instance of the requested kind; the conjugating or
/// factor matrices are seeded from `seed` so every triple is reproducible.
pub fn sample_sum_spectrum(
    alpha: &[f64],
    beta: &[f64],
    seed: u64,
    kind: SampleKind,
) -> Result<SampledTriple> {
    if alpha.len() != beta.len() || alpha.is_empty() {
        return Err(Error::domain("spectra must be nonempty of equal lengths".to_string()));
    }
    check_decreasing(alpha)?;
    check_decreasing(beta)?;
    let n = alpha.len();
    let gamma = match kind {
        SampleKind::HermitianSum => sum_with_unitary(alpha, beta, &random_unitary(n, seed)?)?,
        SampleKind::RealSymmetricSum => {
            sum_with_unitary(alpha, beta, &random_orthogonal(n, seed)?)?
        }
        SampleKind::SingularSum | SampleKind::SingularProduct => {
            if alpha[n - 1] < 0.0 || beta[n - 1] < 0.0 {
                return Err(Error::validation(
                    "singular values must be nonnegative".to_string(),
                ));
            }
            let a = random_unitary(n, seed)?
                .mul(&NumericMatrix::diagonal(alpha))?
                .mul(&random_unitary(n, seed.wrapping_add(0x9e3779b97f4a7c15))?)?;
            let b = random_unitary(n, seed.wrapping_mul(6364136223846793005).wrapping_add(1))?
                .mul(&NumericMatrix::diagonal(beta))?
                .mul(&random_unitary(n, seed.wrapping_add(0x517cc1b727220a95))?)?;
            let c = match kind {
                SampleKind::SingularSum => a.add(&b)?,
                _ => a.mul(&b)?,
            };
            singular_values(&c)?
        }
    };
    Ok(SampledTriple {
        alpha: alpha.to_vec(),
        beta: beta.to_vec(),
        gamma,
        seed,
        kind,
    })
}

/// Minimum slack `rhs - lhs` of the sampled triple over every inequality of
/// the matching family (eigenvalue inequalities for the sum kinds, the
/// transformed singular-value inequalities otherwise).  Nonnegative up to
/// roundoff when the theory holds.
pub fn sample_min_slack(sample: &SampledTriple, mode: ExecMode) -> Result<f64> {
    let n = sample.alpha.len();
    let mut min_slack = f64::INFINITY;
    match sample.kind {
        SampleKind::HermitianSum | SampleKind::RealSymmetricSum => {
            for r in 1..n {
                for t in crate::horn::t_set(r, n as u32, mode)? {
                    let sum = |v: &[f64], s: &crate::partition::IndexSet| -> f64 {
                        s.elements().iter().map(|&i| v[(i - 1) as usize]).sum()
                    };
                    let slack = sum(&sample.alpha, &t.i) + sum(&sample.beta, &t.j)
                        - sum(&sample.gamma, &t.k);
                    min_slack = min_slack.min(slack);
                }
            }
        }
        SampleKind::SingularSum => {
            for r in 1..2 * n {
                for t in crate::horn::t_set(r, 2 * n as u32, mode)? {
                    let ineq = crate::spectra::singular_inequality(&t, n, n)?;
                    let (lhs, rhs) =
                        ineq.evaluate_f64(&sample.alpha, &sample.beta, &sample.gamma);
                    min_slack = min_slack.min(rhs - lhs);
                }
            }
        }
        SampleKind::SingularProduct => {
            for r in 1..n {
                for t in crate::horn::t_set(r, n as u32, mode)? {
                    let prod = |v: &[f64], s: &crate::partition::IndexSet| -> f64 {
                        s.elements().iter().map(|&i| v[(i - 1) as usize]).product()
                    };
                    let slack = prod(&sample.alpha, &t.i) * prod(&sample.beta, &t.j)
                        - prod(&sample.gamma, &t.k);
                    min_slack = min_slack.min(slack);
                }
            }
        }
    }
    Ok(min_slack)
}

/// Runs `trials` seeded samples and reports the worst slack seen; used by
/// the necessity batteries.
pub fn slack_battery(
    alpha: &[f64],
    beta: &[f64],
    base_seed: u64,
    trials: u64,
    kind: SampleKind,
    mode: ExecMode,
) -> Result<f64> {
    let seeds: Vec<u64> = (0..trials).map(|t| base_seed.wrapping_add(t)).collect();
    let slacks = par::map_vec(
        seeds,
        |seed| {
            let sample = sample_sum_spectrum(alpha, beta, seed, kind)?;
            sample_min_slack(&sample, ExecMode::Sequential)
        },
        mode,
    );
    slacks
        .into_iter()
        .try_fold(f64::INFINITY, |acc, s| Ok(acc.min(s?)))
}

/// Two weakly decreasing random spectra of length `n`, deterministic per
/// seed; entries are standard normals, or their absolute values when
/// `nonnegative` is set.
pub fn random_spectrum_pair(n: usize, seed: u64, nonnegative: bool) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                let (x, _) = normal_pair(rng);
                if nonnegative {
                    // Keep products well away from zero for the
                    // multiplicative checks.
                    x.abs() + 0.1
                } else {
                    x
                }
            })
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let alpha = draw(&mut rng);
    let beta = draw(&mut rng);
    (alpha, beta)
}

/// Worst slack over `trials` random instances with freshly drawn spectra;
/// each trial is reproducible from `base_seed` alone.
pub fn random_battery(
    n: usize,
    trials: u64,
    base_seed: u64,
    kind: SampleKind,
    mode: ExecMode,
) -> Result<f64> {
    let seeds: Vec<u64> = (0..trials).map(|t| base_seed.wrapping_add(t)).collect();
    let nonneg = matches!(kind, SampleKind::SingularSum | SampleKind::SingularProduct);
    let slacks = par::map_vec(
        seeds,
        |seed| {
            let (alpha, beta) = random_spectrum_pair(n, seed ^ 0x5eed_5eed, nonneg);
            let sample = sample_sum_spectrum(&alpha, &beta, seed, kind)?;
            sample_min_slack(&sample, ExecMode::Sequential)
        },
        mode,
    );
    slacks
        .into_iter()
        .try_fold(f64::INFINITY, |acc, s| Ok(acc.min(s?)))
}

fn check_orthonormal(basis: &[Vec<Complex64>], dim: usize) -> Result<()> {
    if basis.is_empty() || basis.iter().any(|v| v.len() != dim) {
        return Err(Error::validation("basis vectors must match the matrix size".to_string()));
    }
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let dot: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            if (dot - want).norm() > ORTHO_TOL {
                return Err(Error::validation("basis is not orthonormal".to_string()));
            }
        }
    }
    Ok(())
}

fn apply(a: &NumericMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| a.get(i, j) * v[j]).sum())
        .collect()
}

/// The Rayleigh trace `sum_i (A u_i, u_i)` over an orthonormal basis of a
/// subspace; equals the trace of the compression of `A` to the subspace.
pub fn rayleigh_trace(a: &NumericMatrix, basis: &[Vec<Complex64>]) -> Result<f64> {
    if !a.is_hermitian() {
        return Err(Error::validation("matrix is not Hermitian".to_string()));
    }
    check_orthonormal(basis, a.rows())?;
    Ok(basis
        .iter()
        .map(|u| {
            let au = apply(a, u);
            au.iter()
                .zip(u)
                .map(|(x, y)| (y.conj() * x).re)
                .sum::<f64>()
        })
        .sum())
}

fn complex_det(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for t in 0..n {
        let pivot = (t..n).max_by(|&i, &j| m[i][t].norm().total_cmp(&m[j][t].norm()));
        let Some(p) = pivot else { break };
        if m[p][t].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != t {
            m.swap(p, t);
            det = -det;
        }
        det *= m[t][t];
        for i in (t + 1)..n {
            let f = m[i][t] / m[t][t];
            for j in t..n {
                let v = f * m[t][j];
                m[i][j] -= v;
            }
        }
    }
    det
}

/// The determinant of the compression Gram matrix `(A u_i, u_j)`; for
/// positive semidefinite `A` it is bounded below by products of eigenvalues
/// over Schubert positions.
pub fn d_rayleigh(a: &NumericMatrix, basis: &[Vec<Complex64>]) -> Result<f64> {
    if !a.is_hermitian() {
        return Err(Error::validation("matrix is not Hermitian".to_string()));
    }
    check_orthonormal(basis, a.rows())?;
    let r = basis.len();
    let gram: Vec<Vec<Complex64>> = (0..r)
        .map(|i| {
            let aui = apply(a, &basis[i]);
            (0..r)
                .map(|j| {
                    basis[j]
                        .iter()
                        .zip(&aui)
                        .map(|(u, x)| u.conj() * x)
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(complex_det(gram).re)
}

/// Outcome of reproducing one worked example.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub which: u32,
    pub passed: bool,
    pub checks: Vec<ExampleCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ExampleReport {
    fn new(which: u32) -> Self {
        ExampleReport {
            which,
            passed: true,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, residual: f64, tolerance: f64) {
        let passed = residual.abs() <= tolerance;
        self.passed &= passed;
        self.checks.push(ExampleCheck {
            name: name.to_string(),
            residual,
            tolerance,
            passed,
        });
    }
}

/// The 6x6 real symmetric matrix with eigenvalues (56, 56, 28, 28, -84, -84)
/// from the equality-case counterexample.
pub fn example1_b_matrix() -> NumericMatrix {
    NumericMatrix::from_real_rows(&[
        vec![15.0, 0.0, -32.0, -3.0, 35.0, -3.0],
        vec![0.0, 15.0, 3.0, -32.0, 3.0, 35.0],
        vec![-32.0, 3.0, -17.0, 0.0, 51.0, 19.0],
        vec![-3.0, -32.0, 0.0, -17.0, -19.0, 51.0],
        vec![35.0, 3.0, 51.0, -19.0, 2.0, 0.0],
        vec![-3.0, 35.0, 19.0, 51.0, 0.0, 2.0],
    ])
    .expect("fixed shape")
}

fn subspace_invariance_residual(m: &NumericMatrix, basis: &[Vec<Complex64>]) -> f64 {
    // Largest component of M v outside the span, over the basis vectors.
    basis
        .iter()
        .map(|v| {
            let mv = apply(m, v);
            let mut residual = mv.clone();
            for u in basis {
                let coeff: Complex64 = u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum();
                for (r, &ui) in residual.iter_mut().zip(u) {
                    *r -= coeff * ui;
                }
            }
            residual.iter().map(|z| z.norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Reproduces the equality-case example: the stated spectrum of `B`, equality
/// in the `({1,3,5}, {1,3,5}, {2,4,6})` inequality for `A = diag(x,x,y,y,z,z)`
/// with `x + y + z = 0`, the paired spectrum of `C`, and the complex invariant
/// subspace spanned by `e1 + i e2`, `e3 + i e4`, `e5 + i e6`.
pub fn verify_example1(x: f64, y: f64, z: f64) -> Result<ExampleReport> {
    let mut report = ExampleReport::new(1);
    if (x + y + z).abs() > EXAMPLE_TOL {
        return Err(Error::validation("x + y + z must be zero".to_string()));
    }
    let b = example1_b_matrix();
    let beta = hermitian_eigenvalues(&b)?;
    let want_beta = [56.0, 56.0, 28.0, 28.0, -84.0, -84.0];
    let beta_residual = beta
        .iter()
        .zip(&want_beta)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max);
    report.check("b-spectrum", beta_residual, EXAMPLE_TOL);

    let a = NumericMatrix::diagonal(&[x, x, y, y, z, z]);
    let mut alpha = vec![x, x, y, y, z, z];
    alpha.sort_by(|p, q| q.total_cmp(p));
    let gamma = hermitian_eigenvalues(&a.add(&b)?)?;
    // alpha_1 + alpha_3 + alpha_5 = x + y + z = 0, likewise for beta, and
    // equality forces gamma_2 + gamma_4 + gamma_6 = 0.
    let lhs = gamma[1] + gamma[3] + gamma[5];
    let rhs = alpha[0] + alpha[2] + alpha[4] + beta[0] + beta[2] + beta[4];
    report.check("equality-135-246", lhs - rhs, EXAMPLE_TOL);
    let pair_residual = [0, 2, 4]
        .iter()
        .map(|&i| (gamma[i] - gamma[i + 1]).abs())
        .fold(0.0, f64::max);
    report.check("gamma-pairs", pair_residual, EXAMPLE_TOL);

    let inv = 0.5f64.sqrt();
    let basis: Vec<Vec<Complex64>> = (0..3)
        .map(|k| {
            let mut v = vec![Complex64::new(0.0, 0.0); 6];
            v[2 * k] = Complex64::new(inv, 0.0);
            v[2 * k + 1] = Complex64::new(0.0, inv);
            v
        })
        .collect();
    report.check("a-invariance", subspace_invariance_residual(&a, &basis), EXAMPLE_TOL);
    report.check("b-invariance", subspace_invariance_residual(&b, &basis), EXAMPLE_TOL);
    Ok(report)
}

/// Reproduces the diagonal-plus-block example whose spectra violate the
/// `({1,3,5,6}, {1,3,5,6}, {2,3,6,9})` inequality.
pub fn verify_example3() -> Result<ExampleReport> {
    let mut report = ExampleReport::new(3);
    let a = NumericMatrix::diagonal(&[2.0, 0.0, 1.0, 2.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    let s3 = 3.0f64.sqrt() / 2.0;
    let mut b = NumericMatrix::diagonal(&[0.5, 1.5, 2.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    b.set(0, 1, Complex64::new(s3, 0.0));
    b.set(1, 0, Complex64::new(s3, 0.0));
    let alpha = hermitian_eigenvalues(&a)?;
    let beta = hermitian_eigenvalues(&b)?;
    let gamma = hermitian_eigenvalues(&a.add(&b)?)?;
    let want_ab = [2.0, 2.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let want_g = [3.0, 3.0, 3.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0];
    let max_dev = |got: &[f64], want: &[f64]| {
        got.iter()
            .zip(want)
            .map(|(g, w)| (g - w).abs())
            .fold(0.0, f64::max)
    };
    report.check("alpha-spectrum", max_dev(&alpha, &want_ab), EXAMPLE_TOL);
    report.check("beta-spectrum", max_dev(&beta, &want_ab), EXAMPLE_TOL);
    report.check("gamma-spectrum", max_dev(&gamma, &want_g), EXAMPLE_TOL);
    let trace_gap: f64 = gamma.iter().sum::<f64>()
        - alpha.iter().sum::<f64>()
        - beta.iter().sum::<f64>();
    report.check("trace-identity", trace_gap, EXAMPLE_TOL);
    // The excluded triple really is violated: 7 > 6.
    let lhs: f64 = [2, 3, 6, 9].iter().map(|&k| gamma[k - 1]).sum();
    let rhs: f64 = [1, 3, 5, 6]
        .iter()
        .map(|&i| alpha[i - 1] + beta[i - 1])
        .sum();
    let violated = if lhs > rhs + EXAMPLE_TOL { 0.0 } else { 1.0 };
    report.check("violates-1356-2369", violated, 0.5);
    Ok(report)
}

/// Reproduces the complex singular-value triple `(1,1,0), (1,1,0), (1,1,1)`
/// realized with diagonal entries involving a primitive sixth root of unity.
pub fn verify_example4() -> Result<ExampleReport> {
    let mut report = ExampleReport::new(4);
    let zeta = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
    let mut a = NumericMatrix::zeros(3, 3);
    a.set(0, 0, Complex64::new(1.0, 0.0));
    a.set(1, 1, zeta);
    let mut b = NumericMatrix::zeros(3, 3);
    b.set(1, 1, zeta.conj());
    b.set(2, 2, Complex64::new(1.0, 0.0));
    let c = a.add(&b)?;
    let max_dev = |got: &[f64], want: &[f64]| {
        got.iter()
            .zip(want)
            .map(|(g, w)| (g - w).abs())
            .fold(0.0, f64::max)
    };
    report.check("a-singular", max_dev(&singular_values(&a)?, &[1.0, 1.0, 0.0]), EXAMPLE_TOL);
    report.check("b-singular", max_dev(&singular_values(&b)?, &[1.0, 1.0, 0.0]), EXAMPLE_TOL);
    report.check("c-singular", max_dev(&singular_values(&c)?, &[1.0, 1.0, 1.0]), EXAMPLE_TOL);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::ExecMode;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_simple_matrices() {
        let d = NumericMatrix::diagonal(&[3.0, 1.0, 0.0]);
        let eig = hermitian_eigenvalues(&d).unwrap();
        assert_eq!(eig, vec![3.0, 1.0, 0.0]);

        let flip = NumericMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let eig = hermitian_eigenvalues(&flip).unwrap();
        assert!((eig[0] - 1.0).abs() < 1e-12 && (eig[1] + 1.0).abs() < 1e-12);

        // Complex Hermitian: [[2, i], [-i, 2]] has eigenvalues 3 and 1.
        let h = NumericMatrix::new(2, 2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)])
            .unwrap();
        let eig = hermitian_eigenvalues(&h).unwrap();
        assert!((eig[0] - 3.0).abs() < 1e-12 && (eig[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = NumericMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(hermitian_eigenvalues(&m).is_err());
    }

    #[test]
    fn singular_value_cases() {
        let m = NumericMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let sv = singular_values(&m).unwrap();
        assert!((sv[0] - 2.0).abs() < 1e-12 && sv[1].abs() < 1e-12);
        let z = NumericMatrix::zeros(2, 3);
        assert!(singular_values(&z).unwrap().iter().all(|&s| s == 0.0));
        // Rectangular: a 1x3 row has one singular value, its norm.
        let row = NumericMatrix::from_real_rows(&[vec![3.0, 0.0, 4.0]]).unwrap();
        let sv = singular_values(&row).unwrap();
        assert_eq!(sv.len(), 1);
        assert!((sv[0] - 5.0).abs() < 1e-10);
    }

    #[test]
    fn random_unitaries_are_unitary_and_stable() {
        for seed in 0..30 {
            for builder in [random_unitary, random_orthogonal] {
                let u = builder(4, seed).unwrap();
                let gram = u.conj_transpose().mul(&u).unwrap();
                let dev = gram
                    .add(&{
                        let mut neg = NumericMatrix::identity(4);
                        for i in 0..4 {
                            neg.set(i, i, c(-1.0, 0.0));
                        }
                        neg
                    })
                    .unwrap()
                    .norm_max();
                assert!(dev <= ORTHO_TOL, "seed {seed}: deviation {dev}");
            }
        }
        assert_eq!(random_unitary(3, 7).unwrap(), random_unitary(3, 7).unwrap());
        let scalar = random_unitary(1, 5).unwrap();
        assert!((scalar.get(0, 0).norm() - 1.0).abs() <= ORTHO_TOL);
    }

    #[test]
    fn identity_conjugation_gives_componentwise_sum() {
        let gamma =
            sum_with_unitary(&[3.0, 1.0, 0.0], &[2.0, 2.0, -1.0], &NumericMatrix::identity(3))
                .unwrap();
        assert_eq!(gamma, vec![5.0, 3.0, -1.0]);
    }

    #[test]
    fn sampled_sums_satisfy_the_inequalities() {
        // Small versions of the necessity batteries; the full runs live in
        // the acceptance suite.
        let alpha = [3.0, 1.0, -0.5];
        let beta = [2.0, 0.0, -1.0];
        for kind in [SampleKind::HermitianSum, SampleKind::RealSymmetricSum] {
            let worst = slack_battery(&alpha, &beta, 100, 25, kind, ExecMode::Sequential).unwrap();
            assert!(worst >= -SLACK_TOL, "{kind:?}: worst slack {worst}");
        }
        let a = [2.0, 1.0, 0.5];
        let b = [1.5, 1.0, 0.25];
        for kind in [SampleKind::SingularSum, SampleKind::SingularProduct] {
            let worst = slack_battery(&a, &b, 200, 15, kind, ExecMode::Sequential).unwrap();
            assert!(worst >= -SLACK_TOL, "{kind:?}: worst slack {worst}");
        }
    }

    #[test]
    fn random_batteries_hold_at_small_scale() {
        for kind in [
            SampleKind::HermitianSum,
            SampleKind::RealSymmetricSum,
            SampleKind::SingularSum,
            SampleKind::SingularProduct,
        ] {
            let worst = random_battery(3, 10, 7, kind, ExecMode::Sequential).unwrap();
            assert!(worst >= -SLACK_TOL, "{kind:?}: worst slack {worst}");
        }
        // Reproducible from the seed alone.
        let (a1, b1) = random_spectrum_pair(4, 42, false);
        let (a2, b2) = random_spectrum_pair(4, 42, false);
        assert_eq!((a1, b1), (a2, b2));
    }

    #[test]
    fn rayleigh_trace_cases() {
        let a = NumericMatrix::diagonal(&[3.0, 1.0]);
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        assert!((rayleigh_trace(&a, &[e1]).unwrap() - 3.0).abs() < 1e-12);
        let inv = 0.5f64.sqrt();
        let mixed = vec![c(inv, 0.0), c(inv, 0.0)];
        assert!((rayleigh_trace(&a, &[mixed.clone()]).unwrap() - 2.0).abs() < 1e-12);
        // Non-orthonormal bases are rejected.
        assert!(rayleigh_trace(&a, &[vec![c(1.0, 0.0), c(1.0, 0.0)]]).is_err());
        // Eigenvector spans realize the subset sums exactly.
        let d = NumericMatrix::diagonal(&[5.0, 3.0, 2.0]);
        let e3 = vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!((rayleigh_trace(&d, &[e1, e3]).unwrap() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn d_rayleigh_cases() {
        let a = NumericMatrix::diagonal(&[4.0, 1.0]);
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        assert!((d_rayleigh(&a, &[e1]).unwrap() - 4.0).abs() < 1e-12);
        // Eigenvector spans realize products of eigenvalues.
        let d = NumericMatrix::diagonal(&[4.0, 2.0, 1.0]);
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let e3 = vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!((d_rayleigh(&d, &[e1, e3]).unwrap() - 4.0).abs() < 1e-12);
    }

    fn subspace_image(a: &NumericMatrix, basis: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let mut cols: Vec<Vec<Complex64>> = basis.iter().map(|v| apply(a, v)).collect();
        gram_schmidt(&mut cols);
        cols
    }

    #[test]
    fn compression_determinants_multiply_along_chains() {
        // D_{C*C}(L_m) = prod_s D_{A(s)*A(s)}(L_s) when A(s) maps L_s into
        // L_{s-1}; here L_{s-1} is the image of L_s.
        for seed in 0..10u64 {
            let n = 4;
            let r = 2;
            let a1 = random_unitary(n, seed)
                .unwrap()
                .mul(&NumericMatrix::diagonal(&[2.0, 1.5, 1.0, 0.5]))
                .unwrap();
            let a2 = random_unitary(n, seed + 1000)
                .unwrap()
                .mul(&NumericMatrix::diagonal(&[1.0, 0.8, 0.6, 0.4]))
                .unwrap();
            let l2: Vec<Vec<Complex64>> = {
                let u = random_unitary(n, seed + 2000).unwrap();
                (0..r).map(|j| (0..n).map(|i| u.get(i, j)).collect()).collect()
            };
            let l1 = subspace_image(&a2, &l2);
            let c = a1.mul(&a2).unwrap();
            let gram = |m: &NumericMatrix| m.conj_transpose().mul(m).unwrap();
            let lhs = d_rayleigh(&gram(&c), &l2).unwrap();
            let rhs = d_rayleigh(&gram(&a1), &l1).unwrap() * d_rayleigh(&gram(&a2), &l2).unwrap();
            assert!((lhs - rhs).abs() <= SLACK_TOL * rhs.abs().max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn example1_report_passes() {
        let report = verify_example1(1.0, 0.0, -1.0).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(verify_example1(1.0, 1.0, 0.0).is_err());
        // Another admissible triple also passes.
        assert!(verify_example1(2.5, -0.5, -2.0).unwrap().passed);
    }

    #[test]
    fn example3_report_passes() {
        let report = verify_example3().unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn example4_report_passes() {
        let report = verify_example4().unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn two_by_two_block_of_example3() {
        let s3 = 3.0f64.sqrt() / 2.0;
        let block =
            NumericMatrix::from_real_rows(&[vec![0.5, s3], vec![s3, 1.5]]).unwrap();
        let eig = hermitian_eigenvalues(&block).unwrap();
        assert!((eig[0] - 2.0).abs() < 1e-12 && eig[1].abs() < 1e-12);
    }

    #[test]
    fn rank_one_perturbations_interlace() {
        for seed in 0..20u64 {
            let n = 5;
            let u = random_unitary(n, seed).unwrap();
            let alpha = [4.0, 2.5, 1.0, -0.5, -2.0];
            let a = {
                let d = NumericMatrix::diagonal(&alpha);
                let conj = u.mul(&d).unwrap().mul(&u.conj_transpose()).unwrap();
                let mut sym = conj.clone();
                for i in 0..n {
                    for j in 0..n {
                        sym.set(i, j, (conj.get(i, j) + conj.get(j, i).conj()) / 2.0);
                    }
                }
                sym
            };
            // Rank-one perturbation: B = A + t v v*.
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            let v: Vec<Complex64> = (0..n)
                .map(|_| {
                    let (re, im) = normal_pair(&mut rng);
                    c(re, im)
                })
                .collect();
            let mut b = a.clone();
            for i in 0..n {
                for j in 0..n {
                    b.set(i, j, b.get(i, j) + 0.7 * v[i] * v[j].conj());
                }
            }
            let ea = hermitian_eigenvalues(&a).unwrap();
            let eb = hermitian_eigenvalues(&b).unwrap();
            for k in 0..n - 1 {
                assert!(ea[k + 1] <= eb[k] + SLACK_TOL, "seed {seed} k {k}");
                assert!(eb[k + 1] <= ea[k] + SLACK_TOL, "seed {seed} k {k}");
            }
        }
    }

    fn rational_rank(mut m: Vec<Vec<BigRational>>) -> usize {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for i in 0..rows {
                if i != rank && !m[i][col].is_zero() {
                    let f = &m[i][col] / &m[rank][col];
                    for j in col..cols {
                        let v = &f * &m[rank][j];
                        m[i][j] -= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn schubert_position_sums_match_exactly() {
        // For a subspace with pivot rows I in the standard flag, the sum of
        // alpha over I equals sum_j (alpha_j - alpha_{j+1}) dim(L cap F_j)
        // with alpha_{n+1} = 0, as an exact rational identity.
        let n = 6usize;
        let rat = |x: i64| BigRational::from_integer(BigInt::from(x));
        let alpha: Vec<BigRational> = [9, 7, 7, 4, 2, -3].iter().map(|&x| rat(x)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for i_set in [vec![1usize, 3, 4], vec![2, 5, 6], vec![1, 2, 3], vec![4, 6]] {
            // Basis vectors with pivot at row i_k and random entries above.
            let basis: Vec<Vec<BigRational>> = i_set
                .iter()
                .map(|&ik| {
                    (1..=n)
                        .map(|row| {
                            if row == ik {
                                BigRational::one()
                            } else if row < ik && !i_set.contains(&row) {
                                rat(rng.gen_range(-5i64..=5)) / rat(rng.gen_range(1i64..=4))
                            } else {
                                BigRational::zero()
                            }
                        })
                        .collect()
                })
                .collect();
            let lhs: BigRational = i_set.iter().map(|&i| alpha[i - 1].clone()).sum();
            let mut rhs = BigRational::zero();
            for j in 1..=n {
                // dim(L cap F_j) = r - rank of the coordinates beyond j.
                let tail: Vec<Vec<BigRational>> = basis
                    .iter()
                    .map(|v| v[j..].to_vec())
                    .collect();
                let dim = basis.len() - rational_rank(tail);
                let step = if j < n {
                    &alpha[j - 1] - &alpha[j]
                } else {
                    alpha[n - 1].clone()
                };
                rhs += step * rat(dim as i64);
            }
            assert_eq!(lhs, rhs, "{i_set:?}");
        }
    }

    #[test]
    fn json_round_trip() {
        let m = NumericMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, -2.5), c(0.0, 2.5), c(3.0, 0.0)])
            .unwrap();
        let json = m.to_json();
        assert_eq!(json[0][1][1], serde_json::json!(-2.5));
        assert_eq!(NumericMatrix::from_json(&json).unwrap(), m);
        assert!(NumericMatrix::from_json(&serde_json::json!([[1, 2]])).is_err());
    }

    #[test]
    fn hermitian_eigenvalues_match_trace_and_norm() {
        // Cross-check the solver against two exact invariants on random
        // Hermitian matrices.
        for seed in 0..10u64 {
            let n = 6;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut m = NumericMatrix::zeros(n, n);
            for i in 0..n {
                let (re, _) = normal_pair(&mut rng);
                m.set(i, i, c(re, 0.0));
                for j in i + 1..n {
                    let (re, im) = normal_pair(&mut rng);
                    m.set(i, j, c(re, im));
                    m.set(j, i, c(re, -im));
                }
            }
            let eig = hermitian_eigenvalues(&m).unwrap();
            let trace: f64 = (0..n).map(|i| m.get(i, i).re).sum();
            assert!((eig.iter().sum::<f64>() - trace).abs() < 1e-9);
            let fro2: f64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| m.get(i, j).norm_sqr())
                .sum();
            assert!((eig.iter().map(|x| x * x).sum::<f64>() - fro2).abs() < 1e-8);
        }
    }

    #[test]
    fn check_signed_abs() {
        // Guard for the Box-Muller helper: values are finite and vary.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (a, _) = normal_pair(&mut rng);
        let (b, _) = normal_pair(&mut rng);
        assert!(a.is_finite() && b.is_finite() && a != b);
        assert!(BigRational::from_integer(BigInt::from(-2)).is_negative());
    }
}
