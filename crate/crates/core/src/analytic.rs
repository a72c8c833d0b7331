//! Truncated Taylor series on the unit disc and the weighted sup-norms
//!
//! ```text
//! ||f||_mu = sup_{0 <= r < 1} M(f, r) (1 - r)^mu,    M(f, r) = max_{|z| = r} |f(z)|.
//! ```
//!
//! Both suprema are computed numerically. The circle maximum is taken on an
//! oversampled FFT grid and each promising grid peak is polished by Newton
//! iterations on `|f|^2` using exact Horner evaluation. The radial supremum
//! is located on a geometric ladder of the radii `N / (N + mu)` at which a
//! single term `r^N (1 - r)^mu` peaks, followed by golden-section refinement
//! of every competitive ladder peak. All radial products are formed in
//! log-space so that degrees in the tens of thousands neither underflow nor
//! overflow.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft;
use crate::optimize::golden_max;

/// Default grid oversampling for circle maxima.
pub const DEFAULT_OVERSAMPLE: usize = 8;

/// Ladder density used by [`weighted_norm`] around candidate peaks.
pub const LADDER_PER_OCTAVE: usize = 64;

/// Density of the first, global scan of the ladder.
const COARSE_PER_OCTAVE: usize = 8;

/// Terms smaller than `e^-BAND_CUT` times the largest term on a circle are dropped.
const BAND_CUT: f64 = 38.0;

/// Ladder peaks within this log-distance of the best one are refined. The
/// coarse scan adds `COARSE_SLACK_PER_MU * mu` to cover its wider step.
const CANDIDATE_LOG_SLACK: f64 = 0.01;
const COARSE_SLACK_PER_MU: f64 = 0.01;
const MAX_RADIAL_CANDIDATES: usize = 6;

/// Relative slack for circle grid peaks worth polishing.
const PEAK_SLACK: f64 = 0.02;
const MAX_ANGULAR_CANDIDATES: usize = 8;

/// A polynomial `a_0 + a_1 z + ... + a_D z^D`, the truncation of an analytic
/// function on the disc.
///
/// The degree is `coeffs.len() - 1`; trailing zeros are kept. The zero
/// polynomial is `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
}

impl TaylorSeries {
    /// Builds a series, rejecting non-finite coefficients. An empty vector
    /// becomes the zero polynomial.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Ok(TaylorSeries { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        TaylorSeries {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        TaylorSeries { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Index of the first nonzero coefficient, `None` for the zero polynomial.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.lowest_degree().is_none()
    }

    /// Horner evaluation at an arbitrary point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Zero-pads (never truncates) to degree `degree`.
    pub fn padded(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < degree + 1 {
            coeffs.resize(degree + 1, Complex64::new(0.0, 0.0));
        }
        TaylorSeries { coeffs }
    }

    /// Keeps degrees `0..=degree`.
    pub fn truncated(&self, degree: usize) -> Self {
        let end = (degree + 1).min(self.coeffs.len());
        TaylorSeries {
            coeffs: self.coeffs[..end].to_vec(),
        }
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        TaylorSeries {
            coeffs: self.coeffs.iter().map(|c| c * alpha).collect(),
        }
    }

    /// Coefficientwise `self + alpha * other`.
    pub fn axpy(&self, alpha: Complex64, other: &TaylorSeries) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..len)
            .map(|j| {
                self.coeffs.get(j).copied().unwrap_or(zero)
                    + alpha * other.coeffs.get(j).copied().unwrap_or(zero)
            })
            .collect();
        TaylorSeries { coeffs }
    }
}

/// The exponent `mu > 0` of a weight `(1 - r)^mu`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct WeightExponent(f64);

impl WeightExponent {
    pub fn new(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu > 0.0 {
            Ok(WeightExponent(mu))
        } else {
            Err(Error::InvalidExponent(mu))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for WeightExponent {
    type Error = Error;

    fn try_from(mu: f64) -> Result<Self> {
        WeightExponent::new(mu)
    }
}

impl From<WeightExponent> for f64 {
    fn from(mu: WeightExponent) -> f64 {
        mu.0
    }
}

impl fmt::Display for WeightExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One sample `(r, M(f, r)(1 - r)^mu)` of the radial profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialProfilePoint {
    pub r: f64,
    pub value: f64,
}

/// Values `f(r e^{2 pi i k / K})` for `k = 0..K`.
///
/// Requires `K >= D + 1`; coarser grids alias distinct frequencies onto each
/// other.
pub fn eval_circle(f: &TaylorSeries, r: f64, points: usize) -> Result<Vec<Complex64>> {
    check_radius(r)?;
    if points < f.coeffs.len() {
        return Err(Error::Aliasing {
            points,
            degree: f.degree(),
        });
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); points];
    let mut power = 1.0;
    for (slot, &c) in buf.iter_mut().zip(&f.coeffs) {
        *slot = c * power;
        power *= r;
    }
    fft::synthesize(&mut buf);
    Ok(buf)
}

/// `M(f, r) = max_{|z| = r} |f(z)|`.
///
/// The grid has at least `oversample` points per frequency of the
/// numerically relevant band of `f` on the circle (rounded up to a power of
/// two), and the best grid peaks are polished with Newton steps on exact
/// evaluations. The result is attained by `|f|` at some point of the circle
/// and is therefore a lower bound up to rounding.
pub fn sup_modulus(f: &TaylorSeries, r: f64, oversample: usize) -> Result<f64> {
    check_radius(r)?;
    if oversample == 0 {
        return Err(Error::ZeroOversample);
    }
    Ok(Spectrum::new(f).log_sup(r, oversample).exp())
}

/// `N / (N + mu)`, the maximizer of `r^N (1 - r)^mu` on `[0, 1]`.
pub fn max_radius(n: usize, mu: WeightExponent) -> f64 {
    let n = n as f64;
    n / (n + mu.0)
}

/// `||z^N||_mu = (N/(N+mu))^N (mu/(N+mu))^mu`, and 1 for `N = 0`.
pub fn monomial_norm(n: usize, mu: WeightExponent) -> f64 {
    log_monomial_norm(n as f64, mu.0).exp()
}

pub(crate) fn log_monomial_norm(n: f64, mu: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    -n * (mu / n).ln_1p() + mu * (mu / (n + mu)).ln()
}

/// `1 - mu/n`. For `f` with no terms below degree `n`, the supremum defining
/// `||f||_mu` is attained on `[1 - mu/n, 1)`.
pub fn tail_sup_radius(n: usize, mu: WeightExponent) -> Result<f64> {
    if (n as f64) <= mu.0 {
        return Err(Error::TailRadius { n, mu: mu.0 });
    }
    Ok(1.0 - mu.0 / n as f64)
}

/// `||f||_mu`, searching `[tail_sup_radius(n_low, mu), 1)` when the lowest
/// nonzero degree `n_low` exceeds `mu` and the whole of `[0, 1)` otherwise.
pub fn weighted_norm(f: &TaylorSeries, mu: WeightExponent) -> f64 {
    let r_min = match f.lowest_degree() {
        Some(n) if n as f64 > mu.0 => 1.0 - mu.0 / n as f64,
        _ => 0.0,
    };
    weighted_norm_from(f, mu, r_min)
}

/// `sup_{r_min <= r < 1} M(f, r)(1 - r)^mu`.
///
/// # Panics
///
/// If `r_min` is not in `[0, 1)`.
pub fn weighted_norm_from(f: &TaylorSeries, mu: WeightExponent, r_min: f64) -> f64 {
    assert!((0.0..1.0).contains(&r_min), "r_min = {r_min} not in [0, 1)");
    if f.is_zero() {
        return 0.0;
    }
    RadialSearch::new(f, mu.0).maximize(r_min).exp()
}

/// Samples `r -> M(f, r)(1 - r)^mu` at `r = 0` and along the geometric
/// ladder `r = N/(N + mu)` with `per_octave` values of `N` per doubling.
pub fn radial_profile(
    f: &TaylorSeries,
    mu: WeightExponent,
    per_octave: usize,
) -> Result<Vec<RadialProfilePoint>> {
    if per_octave < 2 {
        return Err(Error::InvalidArgument(format!(
            "profile needs at least 2 points per octave, got {per_octave}"
        )));
    }
    let search = RadialSearch::new(f, mu.0);
    Ok(ladder(f.degree(), mu.0, per_octave, 0.0)
        .into_iter()
        .map(|r| RadialProfilePoint {
            r,
            value: search.log_objective(r).exp(),
        })
        .collect())
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::InvalidRadius(r))
    }
}

/// `{r_min} ∪ {N/(N+mu) > r_min : N = 2^{k/per_octave}, k >= 0, N <= 4 max(D, 1)}`.
fn ladder(degree: usize, mu: f64, per_octave: usize, r_min: f64) -> Vec<f64> {
    let n_top = 4.0 * degree.max(1) as f64;
    let mut radii = vec![r_min];
    let mut k = 0u32;
    loop {
        let n = (k as f64 / per_octave as f64).exp2();
        if n > n_top * (1.0 + 1e-12) {
            break;
        }
        let r = n / (n + mu);
        if r > r_min {
            radii.push(r);
        }
        k += 1;
    }
    radii
}

/// Nonzero coefficients in polar form, the working representation for
/// repeated circle maxima of one function.
struct Spectrum {
    index: Vec<usize>,
    log_mod: Vec<f64>,
    phase: Vec<Complex64>,
}

impl Spectrum {
    fn new(f: &TaylorSeries) -> Self {
        let mut s = Spectrum {
            index: Vec::new(),
            log_mod: Vec::new(),
            phase: Vec::new(),
        };
        for (j, c) in f.coeffs.iter().enumerate() {
            let m = c.norm();
            if m > 0.0 {
                s.index.push(j);
                s.log_mod.push(m.ln());
                s.phase.push(c / m);
            }
        }
        s
    }

    /// `ln M(f, r)`, `-inf` for the zero function.
    fn log_sup(&self, r: f64, oversample: usize) -> f64 {
        if self.index.is_empty() {
            return f64::NEG_INFINITY;
        }
        if r == 0.0 {
            return if self.index[0] == 0 {
                self.log_mod[0]
            } else {
                f64::NEG_INFINITY
            };
        }
        let ln_r = r.ln();
        let logs: Vec<f64> = self
            .index
            .iter()
            .zip(&self.log_mod)
            .map(|(&j, &l)| l + j as f64 * ln_r)
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let keep = |l: f64| l >= top - BAND_CUT;
        let first = logs.iter().position(|&l| keep(l)).unwrap();
        let last = logs.iter().rposition(|&l| keep(l)).unwrap();
        let lo = self.index[first];
        let width = self.index[last] - lo + 1;

        let mut band = vec![Complex64::new(0.0, 0.0); width];
        for t in first..=last {
            if keep(logs[t]) {
                band[self.index[t] - lo] = self.phase[t] * (logs[t] - top).exp();
            }
        }
        top + unit_circle_sup(&band, oversample).ln()
    }
}

/// `max_{|z| = 1} |p(z)|` for `p` with coefficients `band`.
fn unit_circle_sup(band: &[Complex64], oversample: usize) -> f64 {
    if band.len() == 1 {
        return band[0].norm();
    }
    let points = (oversample * band.len()).next_power_of_two().max(4);
    let mut grid = vec![Complex64::new(0.0, 0.0); points];
    grid[..band.len()].copy_from_slice(band);
    fft::synthesize(&mut grid);
    let mags: Vec<f64> = grid.iter().map(|v| v.norm()).collect();

    let k_len = mags.len();
    let grid_max = mags.iter().copied().fold(0.0, f64::max);
    let mut peaks: Vec<(f64, usize, f64)> = Vec::new();
    for k in 0..k_len {
        let left = mags[(k + k_len - 1) % k_len];
        let mid = mags[k];
        let right = mags[(k + 1) % k_len];
        if mid >= left && mid > right {
            let denom = left - 2.0 * mid + right;
            let delta = if denom < 0.0 {
                (0.5 * (left - right) / denom).clamp(-0.5, 0.5)
            } else {
                0.0
            };
            let estimate = mid - 0.25 * (left - right) * delta;
            peaks.push((estimate, k, delta));
        }
    }
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let Some(&(best_estimate, _, _)) = peaks.first() else {
        return grid_max;
    };

    let step = std::f64::consts::TAU / k_len as f64;
    let mut best = grid_max;
    for &(estimate, k, delta) in peaks.iter().take(MAX_ANGULAR_CANDIDATES) {
        if estimate < best_estimate * (1.0 - PEAK_SLACK) {
            break;
        }
        let center = k as f64 * step;
        best = best.max(polish_peak(band, center + delta * step, center - step, center + step));
    }
    best
}

/// `(p, dp/dphi, d^2p/dphi^2)` at `z = e^{i phi}`.
fn eval_with_derivatives(band: &[Complex64], phi: f64) -> (Complex64, Complex64, Complex64) {
    let z = Complex64::from_polar(1.0, phi);
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut dp, mut d2p) = (zero, zero, zero);
    for &c in band.iter().rev() {
        d2p = d2p * z + dp * 2.0;
        dp = dp * z + p;
        p = p * z + c;
    }
    let i = Complex64::new(0.0, 1.0);
    let first = i * z * dp;
    let second = -(z * dp + z * z * d2p);
    (p, first, second)
}

/// Newton iterations on `|p(e^{i phi})|^2` inside `[lo, hi]`, falling back
/// to golden-section search when a step leaves the bracket or the local
/// curvature has the wrong sign.
fn polish_peak(band: &[Complex64], start: f64, lo: f64, hi: f64) -> f64 {
    let mut phi = start;
    let mut best = 0.0f64;
    for _ in 0..32 {
        let (p, d1, d2) = eval_with_derivatives(band, phi);
        best = best.max(p.norm());
        let g1 = 2.0 * (p.conj() * d1).re;
        let g2 = 2.0 * (d1.norm_sqr() + (p.conj() * d2).re);
        if !(g2 < 0.0) {
            return best.max(golden_peak(band, lo, hi));
        }
        let next = phi - g1 / g2;
        if !(lo..=hi).contains(&next) {
            return best.max(golden_peak(band, lo, hi));
        }
        let moved = (next - phi).abs();
        phi = next;
        if moved < 1e-15 * (1.0 + phi.abs()) {
            break;
        }
    }
    best.max(eval_with_derivatives(band, phi).0.norm())
}

fn golden_peak(band: &[Complex64], lo: f64, hi: f64) -> f64 {
    golden_max(|phi| eval_with_derivatives(band, phi).0.norm(), lo, hi, 1e-13).1
}

/// The radial objective `ln M(f, r) + mu ln(1 - r)` for one function.
struct RadialSearch {
    spectrum: Spectrum,
    degree: usize,
    mu: f64,
}

impl RadialSearch {
    fn new(f: &TaylorSeries, mu: f64) -> Self {
        RadialSearch {
            spectrum: Spectrum::new(f),
            degree: f.degree(),
            mu,
        }
    }

    fn log_objective(&self, r: f64) -> f64 {
        if r >= 1.0 {
            return f64::NEG_INFINITY;
        }
        self.spectrum.log_sup(r, DEFAULT_OVERSAMPLE) + self.mu * (-r).ln_1p()
    }

    fn maximize(&self, r_min: f64) -> f64 {
        let coarse = ladder(self.degree, self.mu, COARSE_PER_OCTAVE, r_min);
        let values: Vec<f64> = coarse.iter().map(|&r| self.log_objective(r)).collect();
        let slack = 0.05 + COARSE_SLACK_PER_MU * self.mu;
        let Some(peaks) = local_peaks(&values, slack) else {
            return values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        };

        let last = coarse.len() - 1;
        let mut best = f64::NEG_INFINITY;
        for i in peaks {
            let lo = coarse[i.saturating_sub(1)];
            let hi = coarse[(i + 1).min(last)];
            let mut radii: Vec<f64> = ladder(self.degree, self.mu, LADDER_PER_OCTAVE, lo)
                .into_iter()
                .filter(|&r| r < hi)
                .collect();
            radii.push(hi);
            let fine: Vec<f64> = radii.iter().map(|&r| self.log_objective(r)).collect();
            best = best.max(self.refine(&radii, &fine));
        }
        best
    }

    /// Golden-section refinement around every local maximum of `values`
    /// close to the best one.
    fn refine(&self, radii: &[f64], values: &[f64]) -> f64 {
        let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let Some(peaks) = local_peaks(values, CANDIDATE_LOG_SLACK) else {
            return top;
        };
        let last = radii.len() - 1;
        let mut best = top;
        for i in peaks {
            let r_lo = radii[i.saturating_sub(1)];
            let r_hi = radii[(i + 1).min(last)];
            // search in t = ln(1 - r), where single-term peaks have curvature ~ mu
            let t_hi = (-r_lo).ln_1p();
            let t_lo = (-r_hi).ln_1p();
            let (_, v) = golden_max(
                |t| {
                    let r = (-t.exp_m1()).clamp(r_lo, r_hi);
                    self.log_objective(r)
                },
                t_lo,
                t_hi,
                1e-7,
            );
            best = best.max(v);
        }
        best
    }
}

/// Indices of the local maxima within `slack` of the largest value, best
/// first, at most [`MAX_RADIAL_CANDIDATES`]. `None` when nothing is finite
/// or there is a single value.
fn local_peaks(values: &[f64], slack: f64) -> Option<Vec<usize>> {
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY || values.len() == 1 {
        return None;
    }
    let last = values.len() - 1;
    let mut peaks: Vec<usize> = (0..values.len())
        .filter(|&i| {
            (i == 0 || values[i] >= values[i - 1])
                && (i == last || values[i] >= values[i + 1])
                && values[i] >= top - slack
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    peaks.truncate(MAX_RADIAL_CANDIDATES);
    Some(peaks)
}
