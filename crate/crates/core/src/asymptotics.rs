//! λ sweeps and the quantities extracted from them: the perimeter limit of
//! `2λN_λ`, the second-order oscillation `l_±`, the value set of `N_λ` with
//! its level intervals, and the Hadwiger dimension.

use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{perimeter, ClosedCurve};
use crate::error::{Error, Result};
use crate::gauge::{self_perimeter, SymmetricOval};
use crate::necklace::{hadwiger_count_with, CountOptions, NecklaceStatus};
use crate::oracle::{box_counting_dimension, least_squares};
use crate::scalar::Scalar;

/// Rows needed by [`second_order`] for a dense sweep.
pub const DENSE_ROWS: usize = 1000;

/// Rows needed by [`perimeter_limit`] inside its fitting window.
pub const MIN_FIT_ROWS: usize = 5;

/// Resolution in λ of the level-interval endpoints of [`gap_set`].
pub const GAP_BISECTION_TOL: f64 = 1e-6;

/// The λ values of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule<T> {
    /// `max, max·ratio, max·ratio², ...` down to `min`.
    Geometric { max: T, min: T, ratio: T },
    Explicit { lambdas: Vec<T> },
}

impl<T: Scalar> Schedule<T> {
    pub fn geometric(max: T, min: T, ratio: T) -> Self {
        Schedule::Geometric { max, min, ratio }
    }

    /// The λ values, strictly decreasing.
    pub fn lambdas(&self) -> Result<Vec<T>> {
        match self {
            Schedule::Geometric { max, min, ratio } => {
                let (max, min, ratio) = (*max, *min, *ratio);
                if !(min > T::zero()) || !(max <= T::one()) || min > max {
                    return Err(Error::InvalidInput(format!(
                        "schedule bounds need 0 < min <= max <= 1, got [{min}, {max}]"
                    )));
                }
                if !(ratio > T::zero() && ratio < T::one()) {
                    return Err(Error::InvalidInput(format!("schedule ratio must lie in (0, 1), got {ratio}")));
                }
                let mut out = Vec::new();
                let mut k = 0i32;
                loop {
                    let lam = max * ratio.powi(k);
                    if lam < min * (T::one() - T::lit(1e-12)) {
                        break;
                    }
                    out.push(lam);
                    k += 1;
                }
                Ok(out)
            }
            Schedule::Explicit { lambdas } => {
                if lambdas.iter().any(|&l| !(l > T::zero()) || !l.is_finite()) {
                    return Err(Error::InvalidInput("schedule values must be positive".into()));
                }
                let mut out = lambdas.clone();
                out.sort_by(|a, b| b.partial_cmp(a).unwrap());
                out.dedup();
                Ok(out)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow<T> {
    pub lambda: T,
    /// 0 when the row failed.
    pub count: usize,
    /// `2λ·count`.
    pub product: T,
    /// `(product - p_ref) / λ` when a reference perimeter was given.
    pub residual: Option<T>,
    /// Status of the necklace realizing the count.
    pub status: Option<NecklaceStatus>,
    pub gap: Option<T>,
    pub certified: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable<T> {
    /// Rows by strictly decreasing λ.
    pub rows: Vec<SweepRow<T>>,
    pub schedule: Schedule<T>,
    pub p_ref: Option<T>,
}

impl<T: Scalar> SweepTable<T> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows whose count fell by more than `slack` as λ decreased.
    pub fn monotonicity_violations(&self, slack: usize) -> Vec<T> {
        let ok: Vec<&SweepRow<T>> = self.rows.iter().filter(|r| r.error.is_none()).collect();
        ok.windows(2)
            .filter(|w| w[1].count + slack < w[0].count)
            .map(|w| w[1].lambda)
            .collect()
    }

    /// Rows outside `p_B(F) - 2λ <= 2λN_λ <= p_B(F) + λ p_B(∂B)`.
    pub fn sandwich_violations(&self, p_f: T, p_b: T) -> Vec<T> {
        self.rows
            .iter()
            .filter(|r| r.error.is_none())
            .filter(|r| {
                let lam = r.lambda;
                let slack = T::lit(1e-9) * (p_f + p_b);
                r.product < p_f - T::two() * lam - slack || r.product > p_f + lam * p_b + slack
            })
            .map(|r| r.lambda)
            .collect()
    }
}

/// Options of [`sweep_with`].
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub count: CountOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { count: CountOptions::fast() }
    }
}

/// One row per λ of the schedule, computed in parallel.
pub fn sweep<T: Scalar>(
    f: &ClosedCurve<T>,
    b: &SymmetricOval<T>,
    schedule: &Schedule<T>,
    p_ref: Option<T>,
) -> Result<SweepTable<T>> {
    sweep_with(f, b, schedule, p_ref, &SweepOptions::default())
}

pub fn sweep_with<T: Scalar>(
    f: &ClosedCurve<T>,
    b: &SymmetricOval<T>,
    schedule: &Schedule<T>,
    p_ref: Option<T>,
    opts: &SweepOptions,
) -> Result<SweepTable<T>> {
    let lambdas = schedule.lambdas()?;
    let rows = lambdas.par_iter().map(|&lam| row(f, b, lam, p_ref, &opts.count)).collect();
    Ok(SweepTable { rows, schedule: schedule.clone(), p_ref })
}

fn row<T: Scalar>(f: &ClosedCurve<T>, b: &SymmetricOval<T>, lambda: T, p_ref: Option<T>, opts: &CountOptions) -> SweepRow<T> {
    match hadwiger_count_with(f, b, lambda, opts) {
        Ok(rep) => {
            let product = T::two() * lambda * T::cast(rep.count);
            SweepRow {
                lambda,
                count: rep.count,
                product,
                residual: p_ref.map(|p| (product - p) / lambda),
                status: Some(rep.necklace.status),
                gap: Some(rep.necklace.gap),
                certified: rep.certified(),
                error: None,
            }
        }
        Err(e) => SweepRow {
            lambda,
            count: 0,
            product: T::zero(),
            residual: None,
            status: None,
            gap: None,
            certified: false,
            error: Some(e.to_string()),
        },
    }
}

/// Rows inside the smallest decade `[λ_min, 10 λ_min]` of the table.
fn smallest_decade<T: Scalar>(table: &SweepTable<T>) -> Vec<&SweepRow<T>> {
    let ok: Vec<&SweepRow<T>> = table.rows.iter().filter(|r| r.error.is_none() && r.count > 0).collect();
    let Some(min) = ok.iter().map(|r| r.lambda).reduce(|a, c| a.min(c)) else {
        return Vec::new();
    };
    let top = min * T::lit(10.0) * (T::one() + T::lit(1e-12));
    ok.into_iter().filter(|r| r.lambda <= top).collect()
}

/// An extrapolated value with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate<T> {
    pub value: T,
    pub half_width: T,
    pub rows: usize,
}

/// Extrapolates `2λN_λ` to `λ = 0` by a least-squares line in λ over the
/// smallest decade; the half-width is the largest deviation of the rows
/// from the line.
pub fn perimeter_limit<T: Scalar>(table: &SweepTable<T>) -> Result<Estimate<T>> {
    let rows = smallest_decade(table);
    if rows.len() < MIN_FIT_ROWS {
        return Err(Error::InsufficientData(format!(
            "perimeter limit needs {MIN_FIT_ROWS} rows in the smallest decade, got {}",
            rows.len()
        )));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda.as_f64()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.product.as_f64()).collect();
    let (slope, intercept) = least_squares(&xs, &ys)
        .ok_or_else(|| Error::InsufficientData("perimeter limit needs distinct λ values".into()))?;
    let half_width = xs.iter().zip(&ys).map(|(x, y)| (y - (intercept + slope * x)).abs()).fold(0.0, f64::max);
    Ok(Estimate { value: T::cast(intercept), half_width: T::cast(half_width), rows: rows.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondOrder<T> {
    pub l_minus: T,
    pub l_plus: T,
    pub rows: usize,
    /// At least [`DENSE_ROWS`] rows entered.
    pub dense: bool,
}

/// Empirical inf and sup of `(2λN_λ - p_ref)/λ` over the smallest decade.
pub fn second_order<T: Scalar>(table: &SweepTable<T>, p_ref: T) -> Result<SecondOrder<T>> {
    let rows = smallest_decade(table);
    if rows.len() < MIN_FIT_ROWS {
        return Err(Error::InsufficientData(format!(
            "second-order bounds need {MIN_FIT_ROWS} rows in the smallest decade, got {}",
            rows.len()
        )));
    }
    let res = rows.iter().map(|r| (r.product - p_ref) / r.lambda);
    let (lo, hi) = res.fold((T::infinity(), T::neg_infinity()), |(lo, hi), x| (lo.min(x), hi.max(x)));
    Ok(SecondOrder { l_minus: lo, l_plus: hi, rows: rows.len(), dense: rows.len() >= DENSE_ROWS })
}

/// One maximal λ-interval on which `N_λ = k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelInterval<T> {
    pub k: usize,
    pub lambda_lo: T,
    pub lambda_hi: T,
    /// Some evaluated λ in the interval had a complete best necklace.
    pub complete_found: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapSetReport<T> {
    /// Distinct counts, increasing.
    pub values: Vec<usize>,
    pub max_consecutive_gap: usize,
    /// Level intervals by increasing λ.
    pub intervals: Vec<LevelInterval<T>>,
    /// Every transition was resolved to [`GAP_BISECTION_TOL`] with no value
    /// skipped on an interval longer than that.
    pub density_certified: bool,
}

impl<T> GapSetReport<T> {
    /// Values of `N_λ` with `λ` in the intervals where a complete necklace
    /// was seen, i.e. the `k` with nonempty observed `J_k`.
    pub fn complete_values(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.intervals.iter().filter(|i| i.complete_found).map(|i| i.k).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Value set of `N_λ` over the range of `table`, with the level intervals
/// `I_k` refined by bisection between rows of different counts. `J_k` is
/// recorded through the status of the best necklace at each evaluated λ.
pub fn gap_set<T: Scalar>(f: &ClosedCurve<T>, b: &SymmetricOval<T>, table: &SweepTable<T>) -> Result<GapSetReport<T>> {
    let opts = CountOptions::fast();
    let eval = |lam: T| -> Result<(usize, bool)> {
        let rep = hadwiger_count_with(f, b, lam, &opts)?;
        Ok((rep.count, rep.necklace.status == NecklaceStatus::Complete))
    };
    // (λ, count, complete) by increasing λ
    let mut pts: Vec<(T, usize, bool)> = table
        .rows
        .iter()
        .filter(|r| r.error.is_none())
        .map(|r| (r.lambda, r.count, r.status == Some(NecklaceStatus::Complete)))
        .collect();
    pts.sort_by(|a, c| a.0.partial_cmp(&c.0).unwrap());
    if pts.is_empty() {
        return Ok(GapSetReport { values: Vec::new(), max_consecutive_gap: 0, intervals: Vec::new(), density_certified: true });
    }
    let tol = T::lit(GAP_BISECTION_TOL);
    // refine every pair of neighbors with different counts
    let pairs: Vec<((T, usize, bool), (T, usize, bool))> =
        pts.windows(2).filter(|w| w[0].1 != w[1].1).map(|w| (w[0], w[1])).collect();
    let refined: Vec<Result<Vec<(T, usize, bool)>>> = pairs
        .par_iter()
        .map(|&(a, c)| {
            let mut out = Vec::new();
            let mut stack = vec![(a, c)];
            while let Some((a, c)) = stack.pop() {
                if c.0 - a.0 <= tol {
                    continue;
                }
                let mid = (a.0 + c.0) * T::half();
                let (k, complete) = eval(mid)?;
                let m = (mid, k, complete);
                out.push(m);
                if k != a.1 {
                    stack.push((a, m));
                }
                if k != c.1 {
                    stack.push((m, c));
                }
            }
            Ok(out)
        })
        .collect();
    for r in refined {
        pts.extend(r?);
    }
    pts.sort_by(|a, c| a.0.partial_cmp(&c.0).unwrap());
    let mut intervals: Vec<LevelInterval<T>> = Vec::new();
    for &(lam, k, complete) in &pts {
        match intervals.last_mut() {
            Some(iv) if iv.k == k => {
                iv.lambda_hi = lam;
                iv.complete_found |= complete;
            }
            _ => intervals.push(LevelInterval { k, lambda_lo: lam, lambda_hi: lam, complete_found: complete }),
        }
    }
    let mut values: Vec<usize> = intervals.iter().map(|i| i.k).collect();
    values.sort_unstable();
    values.dedup();
    let max_consecutive_gap = values.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    // a transition is resolved when its two sides are within the tolerance
    let density_certified = intervals
        .windows(2)
        .all(|w| w[1].lambda_lo - w[0].lambda_hi <= tol * (T::one() + T::lit(1e-9)));
    Ok(GapSetReport { values, max_consecutive_gap, intervals, density_certified })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionReport {
    /// Slope of `log N_λ` against `log(1/(2λ))`.
    pub slope: f64,
    pub intercept: f64,
    /// Largest deviation of the points from the fitted line.
    pub residual: f64,
    pub rows: usize,
    /// Box-counting dimension of the same polyline over box sizes `2λ`.
    pub box_counting: Option<f64>,
}

/// Least-squares Hadwiger dimension over the rows of `table` with
/// `lambda_min <= λ <= lambda_max`, reported next to the box-counting
/// dimension of `f` at the same scales.
pub fn hadwiger_dimension<T: Scalar>(
    f: &ClosedCurve<T>,
    table: &SweepTable<T>,
    lambda_min: T,
    lambda_max: T,
) -> Result<DimensionReport> {
    let rows: Vec<&SweepRow<T>> = table
        .rows
        .iter()
        .filter(|r| r.error.is_none() && r.count > 0 && r.lambda >= lambda_min && r.lambda <= lambda_max)
        .collect();
    if rows.len() < 3 {
        return Err(Error::InsufficientData(format!("dimension window holds {} rows, need 3", rows.len())));
    }
    let xs: Vec<f64> = rows.iter().map(|r| (1.0 / (2.0 * r.lambda.as_f64())).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| (r.count as f64).ln()).collect();
    let (slope, intercept) =
        least_squares(&xs, &ys).ok_or_else(|| Error::InsufficientData("dimension window is a single λ".into()))?;
    let residual = xs.iter().zip(&ys).map(|(x, y)| (y - (intercept + slope * x)).abs()).fold(0.0, f64::max);
    let pts: Vec<_> = f.points().iter().map(|p| p.to_f64()).collect();
    let sizes: Vec<f64> = rows.iter().map(|r| 2.0 * r.lambda.as_f64()).collect();
    let box_counting = box_counting_dimension(&pts, true, &sizes).map(|(s, _)| s);
    Ok(DimensionReport { slope, intercept, residual, rows: rows.len(), box_counting })
}

/// One sample of `2N_{c/r}(F, B) - r` against the fractional part of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjectureSample<T> {
    pub r: T,
    pub frac: T,
    pub value: T,
}

/// Samples `α = {r} ↦ 2N_{c/r} - r` for the given `r`; data only.
pub fn conjecture_samples<T: Scalar>(
    f: &ClosedCurve<T>,
    b: &SymmetricOval<T>,
    c: T,
    rs: &[T],
) -> Result<Vec<ConjectureSample<T>>> {
    let opts = CountOptions::fast();
    rs.par_iter()
        .map(|&r| {
            let n = hadwiger_count_with(f, b, c / r, &opts)?.count;
            Ok(ConjectureSample { r, frac: r - r.floor(), value: T::two() * T::cast(n) - r })
        })
        .collect()
}

/// `p_B(∂F)` and `p_B(∂B)`, the constants of the sandwich bounds.
pub fn sandwich_constants<T: Scalar>(f: &ClosedCurve<T>, b: &SymmetricOval<T>) -> (T, T) {
    (perimeter(b, f), self_perimeter(b))
}
