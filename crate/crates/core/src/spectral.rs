//! Analytic lower bounds: the closed form `alpha(m)` for semi-progressions,
//! the transfer matrix `A_{r,n}` and its Perron root for quasi-progressions,
//! the weighted conjugate-vector sums `S_{t,j}`, and the counting upper bounds
//! on the number of colorings that contain a monochromatic progression.
//!
//! Quantities that are rational (matrix entries, `S_{t,j}`, counting bounds)
//! are exact [`BigRational`]s. Only roots and eigenvalues are `f64`, and those
//! come with a residual.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::progression::{Family, FrequencyVector};

/// Default eigen-residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Power iteration stops when successive Rayleigh quotients differ by less than this.
pub const RAYLEIGH_STEP_TOL: f64 = 1e-12;
pub const MAX_POWER_ITERATIONS: usize = 100_000;
/// Largest transfer matrix the eigen routines accept.
pub const MAX_DIM: usize = 64;
/// Cap on the number of frequency vectors the sum form will enumerate.
pub const FREQUENCY_VECTOR_LIMIT: u64 = 5_000_000;

/// Prior constant for the diameter-1, two-color quasi bound.
pub const PRIOR_QUASI_BASE: f64 = 1.08226;

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn ratio(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn rpow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `1 - 1/r`, the per-cell probability weight of a forced cell.
pub fn color_alpha(r: usize) -> BigRational {
    ratio(r as u64 - 1, r as u64)
}

/// `sqrt(2^m / (2^m - 1))`.
pub fn alpha_semi(m: usize) -> Result<f64> {
    if m == 0 {
        return invalid("scope must be at least 1");
    }
    // 2^m / (2^m - 1) = 1 / (1 - 2^-m); powi saturates to 0 for huge m
    let tail = 0.5f64.powi(m.min(i32::MAX as usize) as i32);
    Ok((1.0 / (1.0 - tail)).sqrt())
}

/// Exact multinomial coefficient `(sum v)! / prod v_j!`.
pub fn multinomial_count(v: &FrequencyVector) -> BigUint {
    let mut acc = BigUint::one();
    let mut total = 0usize;
    for &vj in v.counts() {
        // multiply by C(total + vj, vj)
        for i in 1..=vj {
            acc *= BigUint::from(total + i);
            acc /= BigUint::from(i);
        }
        total += vj;
    }
    acc
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= BigUint::from(n - k + i);
        acc /= BigUint::from(i);
    }
    acc
}

/// Upper bounds on the number of colorings with a monochromatic k-term
/// semi-progression of scope `m`.
#[derive(Clone, Debug, Serialize)]
pub struct SemiCountingBound {
    pub r: usize,
    pub n_points: usize,
    pub k: usize,
    pub scope: usize,
    /// `N^2 r^{N-k+1} / (k-1) * sum_v M(v) alpha^{w(v)}` over frequency vectors.
    #[serde(serialize_with = "ser_rational")]
    pub sum_form: BigRational,
    /// `N^2 r^N / (k-1) * (1 - alpha^m)^{k-1}`.
    #[serde(serialize_with = "ser_rational")]
    pub closed_form: BigRational,
    /// Same prefactor with exponent `k` instead of `k - 1`.
    #[serde(serialize_with = "ser_rational")]
    pub displayed_form: BigRational,
    pub frequency_vectors: u64,
}

pub(crate) fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Two-color semi counting bound.
pub fn semi_counting_bound(n_points: usize, k: usize, m: usize) -> Result<SemiCountingBound> {
    semi_counting_bound_colors(2, n_points, k, m, FREQUENCY_VECTOR_LIMIT)
}

/// Semi counting bound for `r` colors, where each forced cell contributes a
/// factor `alpha = 1 - 1/r`.
pub fn semi_counting_bound_colors(
    r: usize,
    n_points: usize,
    k: usize,
    m: usize,
    limit: u64,
) -> Result<SemiCountingBound> {
    if k < 2 || n_points == 0 || m == 0 || r < 2 {
        return invalid("need k >= 2, N >= 1, m >= 1, r >= 2");
    }
    let slots = k - 1;
    let n_vectors = binomial(slots + m - 1, m - 1);
    if n_vectors > BigUint::from(limit) {
        return Err(Error::BudgetExceeded(format!(
            "{n_vectors} frequency vectors exceeds limit {limit}"
        )));
    }
    let alpha = color_alpha(r);
    let alpha_pows: Vec<BigRational> = (0..=slots * (m - 1)).map(|w| rpow(&alpha, w)).collect();

    let mut sum = BigRational::zero();
    let mut count = 0u64;
    let mut counts = vec![0usize; m];
    // compositions of `slots` into m parts
    fn go(
        j: usize,
        left: usize,
        counts: &mut Vec<usize>,
        alpha_pows: &[BigRational],
        sum: &mut BigRational,
        count: &mut u64,
    ) {
        let m = counts.len();
        if j == m - 1 {
            counts[j] = left;
            let v = FrequencyVector::new(counts.clone());
            let mult = BigRational::from_integer(BigInt::from(multinomial_count(&v)));
            *sum += mult * &alpha_pows[v.weight()];
            *count += 1;
            return;
        }
        for c in 0..=left {
            counts[j] = c;
            go(j + 1, left - c, counts, alpha_pows, sum, count);
        }
    }
    go(0, slots, &mut counts, &alpha_pows, &mut sum, &mut count);

    let n2 = int((n_points * n_points) as u64);
    let r_big = int(r as u64);
    let r_pow_n = rpow(&r_big, n_points);
    let prefactor_sum = &n2 * &r_pow_n / (rpow(&r_big, slots) * int(slots as u64));
    let prefactor_closed = n2 * r_pow_n / int(slots as u64);
    let tail = BigRational::one() - rpow(&alpha, m);

    Ok(SemiCountingBound {
        r,
        n_points,
        k,
        scope: m,
        sum_form: prefactor_sum * sum,
        closed_form: &prefactor_closed * rpow(&tail, slots),
        displayed_form: prefactor_closed * rpow(&tail, k),
        frequency_vectors: count,
    })
}

/// The `(n+1) x (n+1)` matrix with entries `alpha^{min(i, n-j)}`, `alpha = 1 - 1/r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    r: usize,
    n: usize,
    entries: Vec<Vec<BigRational>>,
}

pub fn transfer_matrix(r: usize, n: usize) -> Result<TransferMatrix> {
    if r < 2 {
        return invalid("need at least two colors");
    }
    if n + 1 > MAX_DIM {
        return invalid(format!("diameter {n} gives a matrix larger than {MAX_DIM}"));
    }
    let alpha = color_alpha(r);
    let pows: Vec<BigRational> = (0..=n).map(|e| rpow(&alpha, e)).collect();
    let entries = (0..=n)
        .map(|i| (0..=n).map(|j| pows[i.min(n - j)].clone()).collect())
        .collect();
    Ok(TransferMatrix { r, n, entries })
}

impl TransferMatrix {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn diameter(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(rational_to_f64).collect())
            .collect()
    }

    /// Minimum and maximum row sums, which bracket the Perron root.
    pub fn row_sum_bounds(&self) -> (f64, f64) {
        self.entries
            .iter()
            .map(|row| rational_to_f64(&row.iter().sum()))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s), hi.max(s))
            })
    }

    /// `A x` in exact arithmetic.
    pub fn apply(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Eigen {
    pub lambda: f64,
    /// `||A v - lambda v||_inf` for the returned `v`, which has `||v||_inf = 1`.
    pub residual: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
}

pub fn dominant_eigenvalue(a: &TransferMatrix, tol: f64) -> Result<Eigen> {
    power_iteration(&a.to_f64(), tol, MAX_POWER_ITERATIONS)
}

/// Power iteration on a dense entrywise-positive matrix, starting from the
/// all-ones vector.
pub fn power_iteration(matrix: &[Vec<f64>], tol: f64, max_iter: usize) -> Result<Eigen> {
    let dim = matrix.len();
    if dim == 0 || dim > MAX_DIM {
        return invalid(format!("matrix dimension must be in 1..={MAX_DIM}"));
    }
    if matrix.iter().any(|row| row.len() != dim) {
        return invalid("matrix must be square");
    }
    if matrix
        .iter()
        .flatten()
        .any(|&x| !(x > 0.0 && x.is_finite()))
    {
        return invalid("power iteration needs a positive matrix");
    }
    if tol.is_nan() || tol <= 0.0 {
        return invalid("tolerance must be positive");
    }

    let mut v = vec![1.0; dim];
    let mut w = vec![0.0; dim];
    let mut prev = f64::NAN;
    let mut best = f64::INFINITY;
    for it in 1..=max_iter {
        for (wi, row) in w.iter_mut().zip(matrix) {
            *wi = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let vw: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let lambda = vw / vv;
        let residual = v
            .iter()
            .zip(&w)
            .map(|(vi, wi)| (wi - lambda * vi).abs())
            .fold(0.0, f64::max);
        best = best.min(residual);
        if (lambda - prev).abs() < RAYLEIGH_STEP_TOL && residual <= tol {
            return Ok(Eigen {
                lambda,
                residual,
                vector: v,
                iterations: it,
            });
        }
        prev = lambda;
        let scale = w.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / scale;
        }
    }
    Err(Error::Convergence {
        iterations: max_iter,
        residual: best,
    })
}

/// Characteristic polynomial `det(x I - A)` by Faddeev-LeVerrier, exact.
/// Coefficients are ascending: `p(x) = sum c_i x^i`, with `c_dim = 1`.
pub fn characteristic_polynomial(a: &TransferMatrix) -> Vec<BigRational> {
    let dim = a.dim();
    let rows = a.rows();
    let mut coeffs = vec![BigRational::zero(); dim + 1];
    coeffs[dim] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); dim]; dim];
    for step in 1..=dim {
        // M_step = A M_{step-1} + c_{dim-step+1} I
        let mut next = vec![vec![BigRational::zero(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc: BigRational = (0..dim).map(|l| &rows[i][l] * &m[l][j]).sum();
                if i == j {
                    acc += &coeffs[dim - step + 1];
                }
                next[i][j] = acc;
            }
        }
        m = next;
        // c_{dim-step} = -tr(A M_step) / step
        let trace: BigRational = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|l| &rows[i][l] * &m[l][i])
                    .sum::<BigRational>()
            })
            .sum();
        coeffs[dim - step] = -trace / int(step as u64);
    }
    coeffs
}

/// Largest real root of the characteristic polynomial, located inside the
/// row-sum bracket by a downward scan followed by bisection.
pub fn perron_root_by_bisection(a: &TransferMatrix, tol: f64) -> f64 {
    let coeffs: Vec<f64> = characteristic_polynomial(a)
        .iter()
        .map(rational_to_f64)
        .collect();
    let p = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let (lo, hi) = a.row_sum_bounds();
    if hi - lo <= tol {
        return hi;
    }
    // p > 0 above the largest root; step down until the sign flips
    const STEPS: usize = 4096;
    let step = (hi - lo) / STEPS as f64;
    let mut upper = hi;
    let mut lower = hi;
    for i in 1..=STEPS {
        let x = hi - step * i as f64;
        if p(x) <= 0.0 {
            lower = x;
            break;
        }
        upper = x;
        lower = lo;
    }
    while upper - lower > tol {
        let mid = 0.5 * (lower + upper);
        if p(mid) > 0.0 {
            upper = mid;
        } else {
            lower = mid;
        }
    }
    0.5 * (lower + upper)
}

/// A lower bound of the form `value > base^k`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundResult {
    pub family: Family,
    pub r: usize,
    pub base: f64,
    pub lambda_max: Option<f64>,
    pub residual: f64,
    /// `base > 1`, i.e. the bound grows with `k`.
    pub useful: bool,
}

impl BoundResult {
    /// `floor(base^k)`; the Ramsey value is strictly larger.
    pub fn threshold(&self, k: usize) -> f64 {
        self.base.powi(k as i32).floor()
    }
}

/// Two-color semi bound `alpha(m)`.
pub fn alpha_bound(m: usize) -> Result<BoundResult> {
    let base = alpha_semi(m)?;
    Ok(BoundResult {
        family: Family::semi(m)?,
        r: 2,
        base,
        lambda_max: None,
        residual: 0.0,
        useful: base > 1.0,
    })
}

/// `beta_{r,n} = sqrt(r / lambda_max(A_{r,n}))`.
pub fn beta_quasi(r: usize, n: usize, tol: f64) -> Result<BoundResult> {
    let a = transfer_matrix(r, n)?;
    let eig = dominant_eigenvalue(&a, tol)?;
    let base = (r as f64 / eig.lambda).sqrt();
    Ok(BoundResult {
        family: Family::quasi(n),
        r,
        base,
        lambda_max: Some(eig.lambda),
        residual: eig.residual,
        useful: base > 1.0,
    })
}

/// Smallest positive root of `y^4 - 8y^2 + 8`, checked against `beta_{2,1}`
/// and the prior constant.
pub fn quartic_root_check() -> Result<f64> {
    let root = (4.0 - 2.0 * 2f64.sqrt()).sqrt();
    let beta = beta_quasi(2, 1, DEFAULT_TOL)?.base;
    if (beta - root).abs() > 1e-6 {
        return Err(Error::CheckFailed(format!(
            "beta_(2,1) = {beta} disagrees with quartic root {root}"
        )));
    }
    if root <= PRIOR_QUASI_BASE {
        return Err(Error::CheckFailed(format!(
            "root {root} does not exceed {PRIOR_QUASI_BASE}"
        )));
    }
    Ok(root)
}

/// `S_{t,j}`: sum of `alpha^{w(u)}` over quasi conjugate vectors `u` of length
/// `t` starting with `j`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightedSums {
    pub t: usize,
    pub r: usize,
    pub n: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub by_first: Vec<BigRational>,
    #[serde(serialize_with = "ser_rational")]
    pub total: BigRational,
}

fn ser_rationals<S: serde::Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

pub fn weighted_conjugate_sum(t: usize, r: usize, n: usize) -> Result<WeightedSums> {
    if t == 0 {
        return invalid("length must be at least 1");
    }
    let a = transfer_matrix(r, n)?;
    let alpha = color_alpha(r);
    let mut s: Vec<BigRational> = (0..=n).map(|j| rpow(&alpha, j)).collect();
    for _ in 1..t {
        s = a.apply(&s);
    }
    let total = s.iter().sum();
    Ok(WeightedSums {
        t,
        r,
        n,
        by_first: s,
        total,
    })
}

/// `N^2 r^{N-k+1} / (k-1) * S_{k-1}(r, n)`: upper bound on the number of
/// r-colorings of `[1, N]` with a monochromatic k-term quasi-progression of
/// diameter `n`.
pub fn quasi_counting_bound(r: usize, n_points: usize, k: usize, n: usize) -> Result<BigRational> {
    if k < 2 || n_points == 0 {
        return invalid("need k >= 2 and N >= 1");
    }
    let sums = weighted_conjugate_sum(k - 1, r, n)?;
    let r_big = int(r as u64);
    let prefactor = int((n_points * n_points) as u64) * rpow(&r_big, n_points)
        / (rpow(&r_big, k - 1) * int((k - 1) as u64));
    Ok(prefactor * sums.total)
}

/// The displayed two-color, diameter-1 bound
/// `N^2 2^{N-k+1} [(1 + 1/sqrt 2)^k + (1 - 1/sqrt 2)^k] / (2 (k-1))`.
pub fn quasi_closed_form_binary(n_points: usize, k: usize) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bracket = (1.0 + s).powi(k as i32) + (1.0 - s).powi(k as i32);
    let n = n_points as f64;
    n * n * 2f64.powi(n_points as i32 - k as i32 + 1) * bracket / (2.0 * (k - 1) as f64)
}

/// Side-by-side lower bounds for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonBounds {
    pub r: usize,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    /// `(sqrt(r / (n+1)))^k` from a first-moment count.
    pub naive_quasi: f64,
    /// `2 k^2 / m`, leading term of the earlier semi bound.
    pub landman_semi: f64,
    pub alpha_power: f64,
    pub beta_power: f64,
}

pub fn comparison_bounds(r: usize, n: usize, k: usize, m: usize) -> Result<ComparisonBounds> {
    if r < 2 || k == 0 || m == 0 {
        return invalid("need r >= 2, k >= 1, m >= 1");
    }
    let kk = k as i32;
    Ok(ComparisonBounds {
        r,
        n,
        k,
        m,
        naive_quasi: (r as f64 / (n + 1) as f64).sqrt().powi(kk),
        landman_semi: 2.0 * (k * k) as f64 / m as f64,
        alpha_power: alpha_semi(m)?.powi(kk),
        beta_power: beta_quasi(r, n, DEFAULT_TOL)?.base.powi(kk),
    })
}

/// One cell of the beta table.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub r: usize,
    pub n: usize,
    pub alpha: f64,
    pub lambda_max: f64,
    pub residual: f64,
    pub beta: f64,
    pub useful: bool,
}

/// `beta_{r,n}` for `2 <= r <= r_max`, `1 <= n <= n_max`, row-major.
pub fn beta_table(r_max: usize, n_max: usize, tol: f64) -> Result<Vec<TableRow>> {
    let cells: Vec<(usize, usize)> = (2..=r_max)
        .flat_map(|r| (1..=n_max).map(move |n| (r, n)))
        .collect();
    cells
        .par_iter()
        .map(|&(r, n)| {
            let b = beta_quasi(r, n, tol)?;
            Ok(TableRow {
                r,
                n,
                alpha: 1.0 - 1.0 / r as f64,
                lambda_max: b.lambda_max.expect("quasi bound has an eigenvalue"),
                residual: b.residual,
                beta: b.base,
                useful: b.useful,
            })
        })
        .collect()
}

/// Table display: `<1` when the bound is useless, otherwise truncated (not
/// rounded) to five decimals.
pub fn display_beta(beta: f64) -> String {
    if beta <= 1.0 {
        "<1".to_string()
    } else {
        format!("{:.5}", (beta * 1e5).floor() / 1e5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::progression::{weight, ConjugateVector};

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn alpha_examples() {
        assert!((alpha_semi(1).unwrap() - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((alpha_semi(2).unwrap() - 1.154701).abs() < 1e-6);
        assert!((alpha_semi(3).unwrap() - 1.069045).abs() < 1e-6);
        assert!(alpha_semi(0).is_err());
        for m in 1..40 {
            let a = alpha_semi(m).unwrap();
            let p = 2f64.powi(m as i32);
            assert!(((a * a * (p - 1.0)) - p).abs() / p < 1e-12, "m = {m}");
        }
    }

    fn factorial(n: usize) -> BigUint {
        (1..=n).map(BigUint::from).product()
    }

    #[test]
    fn multinomial_examples() {
        let direct = factorial(5) / (factorial(1) * factorial(2) * factorial(2));
        assert_eq!(direct, BigUint::from(30u32));
        assert_eq!(
            multinomial_count(&FrequencyVector::new(vec![1, 2, 2])),
            direct
        );
        assert_eq!(
            multinomial_count(&FrequencyVector::new(vec![7, 0, 0])),
            BigUint::one()
        );
        assert_eq!(
            multinomial_count(&FrequencyVector::new(vec![0, 0, 4])),
            BigUint::one()
        );
        // beyond u64: 60! / (20!)^3
        let v = FrequencyVector::new(vec![20, 20, 20]);
        let f20 = factorial(20);
        assert_eq!(multinomial_count(&v), factorial(60) / (&f20 * &f20 * &f20));
    }

    #[test]
    fn semi_bound_examples() {
        let b = semi_counting_bound(10, 3, 1).unwrap();
        assert_eq!(b.closed_form, int(12800));
        assert_eq!(b.sum_form, b.closed_form);
        assert_eq!(b.frequency_vectors, 1);

        let b = semi_counting_bound(10, 4, 2).unwrap();
        // independent: 100 * 1024 / 3 * (3/4)^3
        assert_eq!(b.closed_form, rat(100 * 1024 * 27, 3 * 64));
        assert_eq!(b.sum_form, b.closed_form);
        assert_eq!(b.displayed_form, &b.closed_form * rat(3, 4));
        assert_eq!(b.frequency_vectors, 4);
    }

    #[test]
    fn semi_bound_budget() {
        assert!(matches!(
            semi_counting_bound_colors(2, 10, 40, 8, 1000),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(semi_counting_bound(10, 1, 2).is_err());
    }

    #[test]
    fn transfer_matrix_examples() {
        let a = transfer_matrix(2, 1).unwrap();
        assert_eq!(
            a.rows(),
            &[vec![rat(1, 1), rat(1, 1)], vec![rat(1, 2), rat(1, 1)]]
        );
        let a = transfer_matrix(3, 2).unwrap();
        assert_eq!(
            a.rows(),
            &[
                vec![rat(1, 1), rat(1, 1), rat(1, 1)],
                vec![rat(2, 3), rat(2, 3), rat(1, 1)],
                vec![rat(4, 9), rat(2, 3), rat(1, 1)],
            ]
        );
        assert_eq!(transfer_matrix(5, 0).unwrap().rows(), &[vec![rat(1, 1)]]);
        assert!(transfer_matrix(1, 2).is_err());
    }

    #[test]
    fn transfer_entries_follow_pair_multiplicity() {
        for r in 2..6 {
            for n in 0..6 {
                let a = transfer_matrix(r, n).unwrap();
                let alpha = color_alpha(r);
                for i in 0..=n {
                    for j in 0..=n {
                        let e = crate::pair_multiplicity(i, j, n).unwrap();
                        assert_eq!(a.entry(i, j), &rpow(&alpha, e));
                        assert!(a.entry(i, j) > &BigRational::zero());
                        assert!(a.entry(i, j) <= &BigRational::one());
                    }
                    assert!(a.entry(0, i).is_one());
                    assert!(a.entry(i, n).is_one());
                }
            }
        }
    }

    #[test]
    fn eigen_examples() {
        let e = dominant_eigenvalue(&transfer_matrix(2, 1).unwrap(), DEFAULT_TOL).unwrap();
        assert!((e.lambda - (1.0 + std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-10);
        let e = dominant_eigenvalue(&transfer_matrix(7, 0).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(e.lambda, 1.0);
        let e = dominant_eigenvalue(&transfer_matrix(3, 2).unwrap(), DEFAULT_TOL).unwrap();
        assert!((e.lambda - 2.425005).abs() < 1e-4);
    }

    #[test]
    fn eigen_rejects_bad_input() {
        assert!(power_iteration(&[vec![1.0, 0.0], vec![1.0, 1.0]], 1e-9, 10).is_err());
        assert!(power_iteration(&[vec![1.0, 1.0]], 1e-9, 10).is_err());
        assert!(power_iteration(&[vec![1.0]], 0.0, 10).is_err());
        assert!(matches!(
            power_iteration(&[vec![1.0, 1.0], vec![1.0, 2.0]], 1e-300, 50),
            Err(Error::Convergence { iterations: 50, .. })
        ));
    }

    #[test]
    fn eigen_agrees_with_bisection() {
        for r in 2..=5 {
            for n in 0..=3 {
                let a = transfer_matrix(r, n).unwrap();
                let e = dominant_eigenvalue(&a, DEFAULT_TOL).unwrap();
                let b = perron_root_by_bisection(&a, 1e-13);
                assert!(
                    (e.lambda - b).abs() < 1e-9,
                    "r={r} n={n}: {} vs {b}",
                    e.lambda
                );
                let (lo, hi) = a.row_sum_bounds();
                assert!(lo - 1e-12 <= e.lambda && e.lambda <= hi + 1e-12);
                assert!(e.vector.iter().all(|&x| x > 0.0));
            }
        }
    }

    #[test]
    fn characteristic_polynomial_of_binary_matrix() {
        // det(xI - [[1,1],[1/2,1]]) = x^2 - 2x + 1/2
        let c = characteristic_polynomial(&transfer_matrix(2, 1).unwrap());
        assert_eq!(c, vec![rat(1, 2), rat(-2, 1), rat(1, 1)]);
    }

    #[test]
    fn beta_examples() {
        let b = beta_quasi(2, 1, DEFAULT_TOL).unwrap();
        assert!((b.base - 1.08239).abs() < 1e-5);
        assert!(b.useful);
        let b = beta_quasi(4, 1, DEFAULT_TOL).unwrap();
        assert!((b.base - 1.46410).abs() < 1e-5);
        let b = beta_quasi(3, 4, DEFAULT_TOL).unwrap();
        assert!(b.base < 1.0 && !b.useful);
        assert!((beta_quasi(3, 0, DEFAULT_TOL).unwrap().base - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quartic_root() {
        let y = quartic_root_check().unwrap();
        assert!((y - 1.082392).abs() < 1e-6);
        assert!((y.powi(4) - 8.0 * y * y + 8.0).abs() < 1e-12);
        assert!(y > 1.08226);
        // bisection oracle on the quartic itself, over [1, 2] where it changes sign once
        let q = |y: f64| y.powi(4) - 8.0 * y * y + 8.0;
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if q(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((y - lo).abs() < 1e-12);
    }

    /// Brute-force oracle: every length-t quasi conjugate vector, weighted directly.
    fn brute_weighted_sums(t: usize, r: usize, n: usize) -> Vec<BigRational> {
        let alpha = color_alpha(r);
        let mut out = vec![BigRational::zero(); n + 1];
        let total = (n + 1).pow(t as u32);
        for code in 0..total {
            let mut c = code;
            let entries: Vec<usize> = (0..t)
                .map(|_| {
                    let e = c % (n + 1);
                    c /= n + 1;
                    e
                })
                .collect();
            let u = ConjugateVector::new(entries.clone(), Family::quasi(n)).unwrap();
            out[entries[0]] += rpow(&alpha, weight(&u));
        }
        out
    }

    #[test]
    fn weighted_sum_examples() {
        let s = weighted_conjugate_sum(1, 2, 1).unwrap();
        assert_eq!(s.by_first, vec![rat(1, 1), rat(1, 2)]);
        assert_eq!(s.total, rat(3, 2));
        let s = weighted_conjugate_sum(2, 2, 1).unwrap();
        assert_eq!(s.by_first, vec![rat(3, 2), rat(1, 1)]);
        assert_eq!(s.total, rat(5, 2));
        assert_eq!(brute_weighted_sums(2, 2, 1), s.by_first);
        assert!(weighted_conjugate_sum(0, 2, 1).is_err());
    }

    #[test]
    fn weighted_sum_matches_enumeration_small() {
        for (t, r, n) in [(3, 2, 1), (4, 3, 2), (3, 4, 3), (5, 2, 2)] {
            let s = weighted_conjugate_sum(t, r, n).unwrap();
            assert_eq!(
                s.by_first,
                brute_weighted_sums(t, r, n),
                "t={t} r={r} n={n}"
            );
        }
    }

    #[test]
    fn quasi_bound_examples() {
        assert_eq!(quasi_counting_bound(2, 10, 3, 1).unwrap(), int(32000));
        for k in 3..=10 {
            let exact = rational_to_f64(&quasi_counting_bound(2, 12, k, 1).unwrap());
            let closed = quasi_closed_form_binary(12, k);
            assert!((exact - closed).abs() / closed < 1e-9, "k = {k}");
        }
        // k = 2: N^2 r^{N-1} S_1, S_1 = sum_j alpha^j
        let s1 = rat(1, 1) + rat(2, 3) + rat(4, 9);
        let expected = int(49) * rpow(&int(3), 6) * s1;
        assert_eq!(quasi_counting_bound(3, 7, 2, 2).unwrap(), expected);
    }

    #[test]
    fn comparison_examples() {
        let c = comparison_bounds(4, 1, 10, 2).unwrap();
        assert!((c.naive_quasi - 32.0).abs() < 1e-9);
        assert!((c.landman_semi - 100.0).abs() < 1e-12);
        let c = comparison_bounds(2, 1, 10, 1).unwrap();
        assert!((c.naive_quasi - 1.0).abs() < 1e-12);
        assert!(c.beta_power > c.naive_quasi);
    }

    #[test]
    fn display_truncates() {
        assert_eq!(display_beta(1.285118972), "1.28511");
        assert_eq!(display_beta(1.4641016), "1.46410");
        assert_eq!(display_beta(0.97), "<1");
        assert_eq!(display_beta(1.0), "<1");
    }
}
