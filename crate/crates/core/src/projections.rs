//! Dirichlet kernels, Taylor partial sums and the convergence rate of the
//! monomial expansion in the weighted norms.
//!
//! For `mu > mu0 > 0` and `f` of finite `mu0`-norm, the tail `f - P_n f`
//! satisfies
//!
//! ```text
//! ||f - P_n f||_mu  <=  C (mu/(n+1))^(mu - mu0) (1 + ln n) ||f||_mu0,
//! ```
//!
//! where `C` is the uniform bound of the Dirichlet projections on circles.
//! [`tail_bound_check`] measures the left side against the right side with
//! `C = 1`; the constant itself is only ever measured, never assumed.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{log_monomial_norm, weighted_norm, TaylorSeries, WeightExponent};
use crate::error::{Error, Result};
use crate::optimize::loglog_slope;
use crate::quadrature;

/// Absolute tolerance of [`kernel_l1`].
pub const KERNEL_L1_TOL: f64 = 1e-8;

/// `D_m(phi) = sum_{|j| <= m} e^{i j phi}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirichletKernel {
    m: usize,
}

impl DirichletKernel {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("Dirichlet kernel order must be >= 1".into()));
        }
        Ok(DirichletKernel { m })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn eval(&self, phi: f64) -> f64 {
        let m = self.m as f64;
        let half = (0.5 * phi).sin();
        if half.abs() < 1e-9 {
            // near the removable singularity
            return 1.0 + 2.0 * (1..=self.m).map(|j| (j as f64 * phi).cos()).sum::<f64>();
        }
        ((m + 0.5) * phi).sin() / half
    }

    /// `(2 pi)^{-1} ∫ |D_m|`, the Lebesgue constant of order `m`.
    ///
    /// The kernel is even and changes sign only at `2 pi k/(2m + 1)`, so the
    /// integral over `[0, pi]` is split at those zeros and each lobe is
    /// integrated adaptively.
    pub fn l1_mean(&self) -> f64 {
        let lobes = self.m + 1;
        let tol = KERNEL_L1_TOL * PI / lobes as f64;
        let step = TAU / (2 * self.m + 1) as f64;
        let integrand = |phi: f64| self.eval(phi);
        let total: f64 = (0..lobes)
            .map(|k| {
                let a = k as f64 * step;
                let b = if k == self.m { PI } else { (k + 1) as f64 * step };
                quadrature::integrate(&integrand, a, b, tol).abs()
            })
            .sum();
        total / PI
    }
}

/// Closed-form `D_m(phi)`, equal to `2m + 1` at multiples of `2 pi`.
pub fn dirichlet_eval(m: usize, phi: f64) -> Result<f64> {
    Ok(DirichletKernel::new(m)?.eval(phi))
}

/// Lebesgue constant `(2 pi)^{-1} ∫_0^{2 pi} |D_m(phi)| d phi`.
pub fn kernel_l1(m: usize) -> Result<f64> {
    Ok(DirichletKernel::new(m)?.l1_mean())
}

/// `P_n f`, the Taylor partial sum of degree `n`.
pub fn partial_sum(f: &TaylorSeries, n: usize) -> TaylorSeries {
    f.truncated(n)
}

/// `(id - P_n) f`: the coefficients of degree `<= n` set to zero.
pub fn tail(f: &TaylorSeries, n: usize) -> TaylorSeries {
    let mut coeffs = f.coeffs().to_vec();
    for c in coeffs.iter_mut().take(n + 1) {
        *c = Complex64::new(0.0, 0.0);
    }
    TaylorSeries::new(coeffs).expect("zeroing keeps coefficients finite")
}

/// `||P_n f||_mu / ||f||_mu` for each `n` in `ns`.
pub fn projection_growth(f: &TaylorSeries, mu: WeightExponent, ns: &[usize]) -> Result<Vec<f64>> {
    if ns.is_empty() {
        return Err(Error::InvalidArgument("no projection orders given".into()));
    }
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!("projection order {n} < 2")));
    }
    let full = weighted_norm(f, mu);
    if full == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(ns
        .iter()
        .map(|&n| weighted_norm(&partial_sum(f, n), mu) / full)
        .collect())
}

/// Measured tail norm against the convergence bound for one `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateBoundRecord {
    pub n: usize,
    pub mu0: f64,
    pub mu: f64,
    pub bound: f64,
    pub measured: f64,
    pub ratio: f64,
}

/// `(mu/(n+1))^(mu - mu0) (1 + ln n) norm_mu0`.
pub fn rate_bound(n: usize, mu0: WeightExponent, mu: WeightExponent, norm_mu0: f64) -> f64 {
    (mu.get() / (n as f64 + 1.0)).powf(mu.get() - mu0.get()) * (1.0 + (n as f64).ln()) * norm_mu0
}

/// Compares `||(id - P_n) f||_mu` with [`rate_bound`].
pub fn tail_bound_check(
    f: &TaylorSeries,
    mu0: WeightExponent,
    mu: WeightExponent,
    n: usize,
) -> Result<RateBoundRecord> {
    check_rate_inputs(mu0, mu, n)?;
    let norm_mu0 = weighted_norm(f, mu0);
    if norm_mu0 == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(rate_record(f, mu0, mu, n, norm_mu0))
}

fn check_rate_inputs(mu0: WeightExponent, mu: WeightExponent, n: usize) -> Result<()> {
    if mu <= mu0 {
        return Err(Error::ExponentOrder {
            what: "mu0 < mu",
            lower: mu0.get(),
            upper: mu.get(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("tail order {n} < 2")));
    }
    Ok(())
}

fn rate_record(
    f: &TaylorSeries,
    mu0: WeightExponent,
    mu: WeightExponent,
    n: usize,
    norm_mu0: f64,
) -> RateBoundRecord {
    let measured = weighted_norm(&tail(f, n), mu);
    let bound = rate_bound(n, mu0, mu, norm_mu0);
    RateBoundRecord {
        n,
        mu0: mu0.get(),
        mu: mu.get(),
        bound,
        measured,
        ratio: measured / bound,
    }
}

/// [`tail_bound_check`] over every `(mu, n)`, with `mu0 = (gamma + mu)/2`.
///
/// Records are ordered by `mu` (as given) and then by `n`.
pub fn basis_convergence_suite(
    f: &TaylorSeries,
    gamma: f64,
    mus: &[WeightExponent],
    ns: &[usize],
) -> Result<Vec<RateBoundRecord>> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidArgument(format!("gamma = {gamma} must be >= 0")));
    }
    let mut records = Vec::with_capacity(mus.len() * ns.len());
    for &mu in mus {
        if mu.get() <= gamma {
            return Err(Error::ExponentOrder {
                what: "gamma < mu",
                lower: gamma,
                upper: mu.get(),
            });
        }
        let mu0 = WeightExponent::new(0.5 * (gamma + mu.get()))?;
        let norm_mu0 = weighted_norm(f, mu0);
        if norm_mu0 == 0.0 {
            return Err(Error::ZeroFunction);
        }
        for &n in ns {
            check_rate_inputs(mu0, mu, n)?;
            records.push(rate_record(f, mu0, mu, n, norm_mu0));
        }
    }
    Ok(records)
}

/// Log-log regression slope of `measured` against `n`, over the records
/// with a positive measurement.
pub fn decay_slope(records: &[RateBoundRecord]) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter(|r| r.measured > 0.0)
        .map(|r| (r.n as f64, r.measured))
        .unzip();
    (xs.len() >= 2).then(|| loglog_slope(&xs, &ys))
}

/// Whether `measured` never increases by more than `slack` along the
/// records (assumed sorted by `n`).
pub fn is_nonincreasing(records: &[RateBoundRecord], slack: f64) -> bool {
    records.windows(2).all(|w| w[1].measured <= w[0].measured + slack)
}

/// `sum_{n=1}^{N} ||z^n||_mu / ||z^n||_nu` for `gamma < nu < mu < nu + 1`.
pub fn nuclearity_divergence(gamma: f64, nu: WeightExponent, mu: WeightExponent, n_max: usize) -> Result<f64> {
    Ok(nuclearity_partial_sums(gamma, nu, mu, n_max)?
        .last()
        .copied()
        .unwrap_or(0.0))
}

/// All partial sums `S_1 .. S_N` of the series in [`nuclearity_divergence`].
pub fn nuclearity_partial_sums(
    gamma: f64,
    nu: WeightExponent,
    mu: WeightExponent,
    n_max: usize,
) -> Result<Vec<f64>> {
    if !(gamma >= 0.0 && gamma < nu.get()) {
        return Err(Error::ExponentOrder {
            what: "gamma < nu",
            lower: gamma,
            upper: nu.get(),
        });
    }
    if nu >= mu {
        return Err(Error::ExponentOrder {
            what: "nu < mu",
            lower: nu.get(),
            upper: mu.get(),
        });
    }
    let gap = mu.get() - nu.get();
    if gap >= 1.0 {
        return Err(Error::ExponentGap(gap));
    }
    let mut sum = 0.0;
    Ok((1..=n_max)
        .map(|n| {
            let n = n as f64;
            sum += (log_monomial_norm(n, mu.get()) - log_monomial_norm(n, nu.get())).exp();
            sum
        })
        .collect())
}

/// Log-log slope of the partial sums over `N = 2^{k/8}` in `[n_lo, n_hi]`.
pub fn nuclearity_slope(
    gamma: f64,
    nu: WeightExponent,
    mu: WeightExponent,
    n_lo: usize,
    n_hi: usize,
) -> Result<f64> {
    if !(2 <= n_lo && n_lo < n_hi) {
        return Err(Error::InvalidArgument(format!("bad slope window [{n_lo}, {n_hi}]")));
    }
    let sums = nuclearity_partial_sums(gamma, nu, mu, n_hi)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut k = 0;
    loop {
        let n = ((n_lo as f64) * (k as f64 / 8.0).exp2()).round() as usize;
        if n > n_hi {
            break;
        }
        if xs.last() != Some(&(n as f64)) {
            xs.push(n as f64);
            ys.push(sums[n - 1]);
        }
        k += 1;
    }
    Ok(loglog_slope(&xs, &ys))
}
