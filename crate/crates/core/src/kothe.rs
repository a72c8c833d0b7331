//! Weights of the sequence spaces isomorphic to `A^{-gamma}_+` and
//! `A^{-gamma}_-`.
//!
//! Two weight families are used, both equal to 1 at `j = 0`:
//!
//! ```text
//! s_mu(j) = (mu / (j + mu))^mu
//! r_mu(j) = (mu / (2^n + mu))^mu      for 2^n <= j < 2^{n+1}
//! ```
//!
//! `r_mu` is constant on dyadic blocks and defines the seminorm
//! `|||x|||_mu = sup_j r_mu(j) |x_j|`; `s_mu` gives the rows of the Köthe
//! matrices. They are equivalent: `s_mu <= r_mu <= 2^max(1, mu) s_mu`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::WeightExponent;
use crate::error::{Error, Result};

/// Slack used where both weights are exactly 1.
pub const EQUALITY_SLACK: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightKind {
    /// Block-constant `r_mu`.
    R,
    /// Pointwise `s_mu`.
    S,
}

/// One member of either weight family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFamily {
    pub kind: WeightKind,
    pub mu: WeightExponent,
}

impl WeightFamily {
    pub fn at(&self, j: u64) -> f64 {
        match self.kind {
            WeightKind::R => weight_r(self.mu, j),
            WeightKind::S => weight_s(self.mu, j),
        }
    }
}

/// Rows `k >= 1` of an increasing (echelon) or decreasing (co-echelon)
/// family built from `s_mu`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum KotheMatrixSpec {
    /// `a_k = s_{gamma + 1/k}`, nondecreasing in `k`.
    Echelon { gamma: f64 },
    /// `v_k = s_{gamma - 1/k}` for `k > 1/gamma`, nonincreasing in `k`.
    CoEchelon { gamma: f64 },
}

impl KotheMatrixSpec {
    /// Exponent of row `k`.
    pub fn row_exponent(&self, k: u32) -> Result<WeightExponent> {
        match *self {
            KotheMatrixSpec::Echelon { gamma } => {
                if !(gamma >= 0.0) || k == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "echelon rows need gamma >= 0 and k >= 1 (gamma = {gamma}, k = {k})"
                    )));
                }
                WeightExponent::new(gamma + 1.0 / k as f64)
            }
            KotheMatrixSpec::CoEchelon { gamma } => {
                if !(gamma > 0.0) || !gamma.is_finite() {
                    return Err(Error::CoechelonGamma);
                }
                let min_k = (1.0 / gamma).floor() as u32 + 1;
                if k < min_k {
                    return Err(Error::CoechelonRow { k, min_k });
                }
                WeightExponent::new(gamma - 1.0 / k as f64)
            }
        }
    }
}

/// A finite section `x_0 .. x_J` of a sequence.
#[derive(Clone, Copy, Debug)]
pub struct CoefSequenceView<'a> {
    x: &'a [Complex64],
}

impl<'a> CoefSequenceView<'a> {
    pub fn new(x: &'a [Complex64]) -> Self {
        CoefSequenceView { x }
    }

    pub fn as_slice(&self) -> &'a [Complex64] {
        self.x
    }
}

impl<'a> From<&'a [Complex64]> for CoefSequenceView<'a> {
    fn from(x: &'a [Complex64]) -> Self {
        CoefSequenceView { x }
    }
}

impl<'a> From<&'a Vec<Complex64>> for CoefSequenceView<'a> {
    fn from(x: &'a Vec<Complex64>) -> Self {
        CoefSequenceView { x }
    }
}

/// `s_mu(j) = (mu/(j + mu))^mu`, with `s_mu(0) = 1`.
pub fn weight_s(mu: WeightExponent, j: u64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let mu = mu.get();
    (-mu * (j as f64 / mu).ln_1p()).exp()
}

/// `r_mu(j) = (mu/(2^n + mu))^mu` on the block `2^n <= j < 2^{n+1}`, with
/// `r_mu(0) = 1`.
pub fn weight_r(mu: WeightExponent, j: u64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    weight_s(mu, block_start(j))
}

/// `2^n` for `2^n <= j < 2^{n+1}`.
pub(crate) fn block_start(j: u64) -> u64 {
    1u64 << (63 - j.leading_zeros())
}

/// `|||x|||_mu = max_j r_mu(j) |x_j|`.
pub fn seminorm<'a>(x: impl Into<CoefSequenceView<'a>>, mu: WeightExponent) -> f64 {
    x.into()
        .x
        .iter()
        .enumerate()
        .map(|(j, v)| weight_r(mu, j as u64) * v.norm())
        .fold(0.0, f64::max)
}

/// Whether `r_{mu1} <= r_{mu2}` and `s_{mu1} <= s_{mu2}` on `0..=j_max`
/// for `mu1 > mu2`.
pub fn check_weight_monotone(mu1: WeightExponent, mu2: WeightExponent, j_max: u64) -> Result<bool> {
    if mu2 >= mu1 {
        return Err(Error::ExponentOrder {
            what: "mu2 < mu1",
            lower: mu2.get(),
            upper: mu1.get(),
        });
    }
    let ok = (0..=j_max).all(|j| {
        let slack = if j == 0 { EQUALITY_SLACK } else { 0.0 };
        weight_r(mu1, j) <= weight_r(mu2, j) + slack && weight_s(mu1, j) <= weight_s(mu2, j) + slack
    });
    Ok(ok)
}

/// `(min, max)` of `r_mu(j) / s_mu(j)` over `1 <= j <= j_max`.
pub fn equivalence_ratio(mu: WeightExponent, j_max: u64) -> Result<(f64, f64)> {
    if j_max == 0 {
        return Err(Error::InvalidArgument("equivalence ratio needs j_max >= 1".into()));
    }
    // the ratio is ((j + mu)/(2^n + mu))^mu
    let m = mu.get();
    Ok((1..=j_max)
        .map(|j| {
            let lead = block_start(j) as f64;
            (m * ((j as f64 - lead) / (lead + m)).ln_1p()).exp()
        })
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v))))
}

/// Entry `j` of row `k` of the Köthe matrix described by `spec`.
pub fn kothe_row(spec: KotheMatrixSpec, k: u32, j: u64) -> Result<f64> {
    Ok(weight_s(spec.row_exponent(k)?, j))
}
