//! The dyadic block-sampling transform `T`.
//!
//! A Taylor series is split into `a_0` and the blocks
//! `f_n(z) = sum_{2^n <= j < 2^{n+1}} a_j z^j`. `T` keeps `a_0` and replaces
//! the `2^n` coefficients of block `n` by the `2^n` values
//!
//! ```text
//! (Tf)(j) = f_n(e^{2 pi i j / 2^n}),      2^n <= j < 2^{n+1}.
//! ```
//!
//! Since `e^{2 pi i j} = 1`, the value at `j = 2^n + k` is
//! `sum_m a_{2^n + m} e^{+2 pi i k m / 2^n}`: block `n` of `Tf` is the
//! length-`2^n` discrete Fourier synthesis of the block coefficients, and the
//! inverse transform is the normalized analysis with the opposite sign. Both
//! directions run per block through the FFT, so `T` is an exact linear
//! bijection between coefficient vectors and sample vectors of length
//! `2^{N+1}`.
//!
//! The remaining functions measure the inequalities relating the block
//! samples to the weighted norms.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{sup_modulus, weighted_norm, TaylorSeries, WeightExponent, DEFAULT_OVERSAMPLE};
use crate::error::{Error, Result};
use crate::fft;
use crate::kothe::seminorm;

/// Oversampling used for the block maximum in [`sampling_inequality`].
pub const SAMPLING_OVERSAMPLE: usize = 16;

/// Blocks at or above this level are transformed in parallel.
const PARALLEL_LEVEL: u32 = 10;

/// Block `n` of a Taylor series: the coefficients `a_{2^n} .. a_{2^{n+1}-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPolynomial {
    level: u32,
    coeffs: Vec<Complex64>,
}

impl BlockPolynomial {
    pub fn new(level: u32, coeffs: Vec<Complex64>) -> Result<Self> {
        if level > 40 || coeffs.len() != 1usize << level {
            return Err(Error::InvalidArgument(format!(
                "block of level {level} needs 2^{level} coefficients, got {}",
                coeffs.len()
            )));
        }
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(BlockPolynomial { level, coeffs })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// First degree of the block, `2^level`.
    pub fn offset(&self) -> usize {
        1 << self.level
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// `f_n` as a series of degree `2^{n+1} - 1`.
    pub fn to_series(&self) -> TaylorSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.offset()];
        coeffs.extend_from_slice(&self.coeffs);
        TaylorSeries::new(coeffs).expect("block coefficients are finite")
    }

    /// `g_n(z) = f_n(z) / z^{2^n}`, a polynomial of degree `2^n - 1`.
    pub fn shifted(&self) -> TaylorSeries {
        TaylorSeries::new(self.coeffs.clone()).expect("block coefficients are finite")
    }

    /// `f_n(e^{2 pi i j/2^n})` for `j = 2^n .. 2^{n+1}`.
    pub fn samples(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        fft::synthesize(&mut buf);
        buf
    }

    /// Recovers the block from its samples.
    pub fn from_samples(level: u32, samples: &[Complex64]) -> Result<Self> {
        let mut buf = samples.to_vec();
        fft::analyze(&mut buf);
        Self::new(level, buf)
    }

    /// `M(f_n, r) = r^{2^n} M(g_n, r)`.
    pub fn sup_modulus(&self, r: f64, oversample: usize) -> Result<f64> {
        let inner = sup_modulus(&self.shifted(), r, oversample)?;
        Ok(inner * r.powf(self.offset() as f64))
    }
}

/// `a_0` together with the blocks `n = 0 ..= N`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDecomposition {
    pub constant: Complex64,
    pub blocks: Vec<BlockPolynomial>,
}

impl BlockDecomposition {
    /// Concatenates `a_0` and the block coefficients.
    pub fn reassemble(&self) -> TaylorSeries {
        let mut coeffs = Vec::with_capacity(1usize << self.blocks.len());
        coeffs.push(self.constant);
        for b in &self.blocks {
            coeffs.extend_from_slice(&b.coeffs);
        }
        TaylorSeries::new(coeffs).expect("block coefficients are finite")
    }
}

/// Smallest `N >= 0` with `2^{N+1} > degree`.
pub fn top_level(degree: usize) -> u32 {
    let len = (degree + 1).next_power_of_two().max(2);
    len.trailing_zeros() - 1
}

/// Splits `f` (zero-padded to degree `2^{N+1} - 1`) into its dyadic blocks.
pub fn block_decompose(f: &TaylorSeries) -> BlockDecomposition {
    let top = top_level(f.degree());
    let padded = f.padded((1usize << (top + 1)) - 1);
    let c = padded.coeffs();
    BlockDecomposition {
        constant: c[0],
        blocks: (0..=top)
            .map(|n| BlockPolynomial {
                level: n,
                coeffs: c[1 << n..2 << n].to_vec(),
            })
            .collect(),
    }
}

/// `Tf`: a sequence `x_0 .. x_J`, `J = 2^{N+1} - 1`, indexed like the
/// Taylor coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSequence {
    x: Vec<Complex64>,
}

impl SampleSequence {
    /// Accepts any finite sequence whose length is a power of two.
    pub fn new(x: Vec<Complex64>) -> Result<Self> {
        if !x.len().is_power_of_two() {
            return Err(Error::SequenceLength(x.len()));
        }
        if let Some(index) = x.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(SampleSequence { x })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.x
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.x
    }

    /// Highest block level `N`, `None` when only `x_0` is present.
    pub fn top_level(&self) -> Option<u32> {
        (self.x.len() >= 2).then(|| self.x.len().trailing_zeros() - 1)
    }

    /// Samples of block `n`.
    pub fn block(&self, n: u32) -> &[Complex64] {
        &self.x[1 << n..2 << n]
    }

    /// `|||x|||_mu`.
    pub fn seminorm(&self, mu: WeightExponent) -> f64 {
        seminorm(&self.x, mu)
    }
}

fn map_blocks<F>(levels: u32, op: F) -> Vec<Vec<Complex64>>
where
    F: Fn(u32) -> Vec<Complex64> + Sync,
{
    if levels >= PARALLEL_LEVEL {
        (0..levels).into_par_iter().map(&op).collect()
    } else {
        (0..levels).map(op).collect()
    }
}

/// The forward transform.
pub fn forward_t(f: &TaylorSeries) -> SampleSequence {
    let dec = block_decompose(f);
    let blocks = map_blocks(dec.blocks.len() as u32, |n| dec.blocks[n as usize].samples());
    let mut x = Vec::with_capacity(2 << (dec.blocks.len() - 1));
    x.push(dec.constant);
    for b in blocks {
        x.extend(b);
    }
    SampleSequence { x }
}

/// The inverse transform.
pub fn inverse_t(x: &SampleSequence) -> TaylorSeries {
    let levels = x.top_level().map_or(0, |n| n + 1);
    let blocks = map_blocks(levels, |n| {
        let mut buf = x.block(n).to_vec();
        fft::analyze(&mut buf);
        buf
    });
    let mut coeffs = Vec::with_capacity(x.x.len());
    coeffs.push(x.x[0]);
    for b in blocks {
        coeffs.extend(b);
    }
    TaylorSeries::new(coeffs).expect("inverse transform of finite samples is finite")
}

/// A trigonometric polynomial `sum_k b_k e^{i k phi}` over consecutive
/// frequencies starting at `min_freq`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    pub min_freq: i64,
    pub coeffs: Vec<Complex64>,
}

impl TrigPolynomial {
    pub fn eval(&self, phi: f64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, b)| b * Complex64::from_polar(1.0, (self.min_freq + i as i64) as f64 * phi))
            .sum()
    }

    /// `b_0`, the mean over the circle.
    pub fn mean(&self) -> Complex64 {
        usize::try_from(-self.min_freq)
            .ok()
            .and_then(|i| self.coeffs.get(i).copied())
            .unwrap_or_default()
    }

    fn nonzero_freqs(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, b)| **b != Complex64::new(0.0, 0.0))
            .map(move |(i, _)| self.min_freq + i as i64)
    }
}

/// `(2^{-n} sum_{j=1}^{2^n} g(2 pi j/2^n), b_0)`.
///
/// The two agree whenever every frequency of `g` satisfies `|k| < 2^n`;
/// other inputs are rejected.
pub fn quadrature_identity(g: &TrigPolynomial, level: u32) -> Result<(Complex64, Complex64)> {
    let nodes = 1i64 << level;
    if let Some(freq) = g.nonzero_freqs().find(|k| k.abs() >= nodes) {
        return Err(Error::AliasedFrequency { freq, level });
    }
    let step = std::f64::consts::TAU / nodes as f64;
    let sum: Complex64 = (1..=nodes).map(|j| g.eval(j as f64 * step)).sum();
    Ok((sum / nodes as f64, g.mean()))
}

/// Largest sample of a block against its maximum modulus on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingRecord {
    pub level: u32,
    pub max_sample: f64,
    pub sup_modulus: f64,
    /// `sup_modulus / max_sample`.
    pub ratio: f64,
}

/// Compares `max_j |f_n(e^{2 pi i j/2^n})|` with `M(f_n, 1)`.
pub fn sampling_inequality(blk: &BlockPolynomial) -> Result<SamplingRecord> {
    if blk.level == 0 {
        return Err(Error::InvalidArgument("sampling inequality needs level >= 1".into()));
    }
    if blk.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let max_sample = blk.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let sup = blk.sup_modulus(1.0, SAMPLING_OVERSAMPLE)?;
    Ok(SamplingRecord {
        level: blk.level,
        max_sample,
        sup_modulus: sup,
        ratio: sup / max_sample,
    })
}

/// Norm of one block against the two block estimates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockNormBounds {
    pub level: u32,
    pub mu: f64,
    /// `||f_n||_mu`.
    pub norm: f64,
    /// `M(f_n, 1)`.
    pub sup_at_one: f64,
    /// `M(f_n, 1) (mu/(2^n + mu))^mu`.
    pub upper: f64,
    /// `r_{mu,n} = 2^n/(2^n + mu)`, the peak of `r^{2^n} (1 - r)^mu`.
    pub peak_radius: f64,
    /// `M(f_n, r_{mu,n})`.
    pub sup_at_peak: f64,
    /// `(1 + mu/2^n)^{2^{n+1}} = r_{mu,n}^{-2^{n+1}}`.
    pub growth_factor: f64,
}

impl BlockNormBounds {
    /// `norm <= upper` up to relative slack.
    pub fn norm_bound_holds(&self, rel: f64) -> bool {
        self.norm <= self.upper * (1.0 + rel)
    }

    /// `M(f_n, 1) <= growth_factor M(f_n, r_{mu,n})` up to relative slack.
    pub fn growth_chain_holds(&self, rel: f64) -> bool {
        self.sup_at_one <= self.growth_factor * self.sup_at_peak * (1.0 + rel)
    }
}

/// Evaluates both sides of the block estimates for `blk` and `mu`.
pub fn block_norm_bounds(blk: &BlockPolynomial, mu: WeightExponent) -> BlockNormBounds {
    let m = mu.get();
    let lead = blk.offset() as f64;
    let peak_radius = lead / (lead + m);
    let growth_factor = (2.0 * lead * (m / lead).ln_1p()).exp();
    let weight = (m * (m / (lead + m)).ln()).exp();
    let (norm, sup_at_one, sup_at_peak) = if blk.is_zero() {
        (0.0, 0.0, 0.0)
    } else {
        (
            weighted_norm(&blk.to_series(), mu),
            blk.sup_modulus(1.0, DEFAULT_OVERSAMPLE).expect("valid radius"),
            blk.sup_modulus(peak_radius, DEFAULT_OVERSAMPLE).expect("valid radius"),
        )
    };
    BlockNormBounds {
        level: blk.level,
        mu: m,
        norm,
        sup_at_one,
        upper: sup_at_one * weight,
        peak_radius,
        sup_at_peak,
        growth_factor,
    }
}

/// Finite-section constants of the two-sided estimate
/// `d1 ||f||_mu2 <= |||Tf|||_mu <= d2 ||f||_mu1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TechnicalConstants {
    /// `max_f |||Tf|||_mu / ||f||_mu1`.
    pub d2_hat: f64,
    /// `min_f |||Tf|||_mu / ||f||_mu2`.
    pub d1_hat: f64,
    /// Per-function `|||Tf|||_mu / ||f||_mu1`, in corpus order.
    pub upper_ratios: Vec<f64>,
    /// Per-function `|||Tf|||_mu / ||f||_mu2`, in corpus order.
    pub lower_ratios: Vec<f64>,
}

pub fn technical_constants(
    corpus: &[TaylorSeries],
    mu1: WeightExponent,
    mu: WeightExponent,
    mu2: WeightExponent,
) -> Result<TechnicalConstants> {
    if !(mu1 < mu && mu < mu2) {
        return Err(Error::ExponentOrder {
            what: "mu1 < mu < mu2",
            lower: mu1.get(),
            upper: mu2.get(),
        });
    }
    if corpus.is_empty() {
        return Err(Error::InvalidArgument("empty corpus".into()));
    }
    if corpus.iter().any(TaylorSeries::is_zero) {
        return Err(Error::ZeroFunction);
    }
    let ratios: Vec<(f64, f64)> = corpus
        .par_iter()
        .map(|f| {
            let tf = forward_t(f).seminorm(mu);
            (tf / weighted_norm(f, mu1), tf / weighted_norm(f, mu2))
        })
        .collect();
    let (upper_ratios, lower_ratios): (Vec<f64>, Vec<f64>) = ratios.into_iter().unzip();
    Ok(TechnicalConstants {
        d2_hat: upper_ratios.iter().copied().fold(0.0, f64::max),
        d1_hat: lower_ratios.iter().copied().fold(f64::INFINITY, f64::min),
        upper_ratios,
        lower_ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::monomial_norm;
    use crate::kothe::weight_r;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mu(x: f64) -> WeightExponent {
        WeightExponent::new(x).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let dec = block_decompose(&TaylorSeries::from_real(&[7.0]).unwrap());
        assert_eq!(dec.constant, c(7.0, 0.0));
        assert!(dec.blocks.iter().all(BlockPolynomial::is_zero));

        let f = TaylorSeries::from_real(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        let dec = block_decompose(&f);
        assert_eq!(dec.blocks.len(), 2);
        assert_eq!(dec.blocks[0].coeffs(), &[c(1.0, 0.0)]);
        assert_eq!(dec.blocks[1].coeffs(), &[c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(dec.reassemble(), f);
    }

    #[test]
    fn decompose_pads_to_full_blocks() {
        let f = TaylorSeries::from_real(&[1.0; 5]).unwrap();
        let dec = block_decompose(&f);
        assert_eq!(dec.blocks.len(), 3);
        assert_eq!(dec.reassemble(), f.padded(7));
        assert_eq!(top_level(0), 0);
        assert_eq!(top_level(1), 0);
        assert_eq!(top_level(2), 1);
        assert_eq!(top_level(8191), 12);
        assert_eq!(top_level(8192), 13);
    }

    #[test]
    fn forward_examples() {
        let x = forward_t(&TaylorSeries::monomial(1));
        assert_eq!(x.values(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        let x = forward_t(&TaylorSeries::from_real(&[0.0, 0.0, 1.0, 1.0]).unwrap());
        assert!((x.values()[2] - c(2.0, 0.0)).norm() < 1e-15);
        assert!(x.values()[3].norm() < 1e-15);
    }

    #[test]
    fn inverse_examples() {
        let x = SampleSequence::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(inverse_t(&x), TaylorSeries::monomial(1));
        let x = SampleSequence::new(vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(inverse_t(&x), TaylorSeries::from_real(&[1.0]).unwrap());
        assert!(matches!(SampleSequence::new(vec![c(1.0, 0.0); 3]), Err(Error::SequenceLength(3))));
    }

    #[test]
    fn quadrature_examples() {
        let one = TrigPolynomial { min_freq: 0, coeffs: vec![c(1.0, 0.0)] };
        for n in 0..5 {
            let (s, b) = quadrature_identity(&one, n).unwrap();
            assert!((s - c(1.0, 0.0)).norm() < 1e-15 && b == c(1.0, 0.0));
        }
        let e1 = TrigPolynomial { min_freq: 1, coeffs: vec![c(1.0, 0.0)] };
        let (s, b) = quadrature_identity(&e1, 2).unwrap();
        assert!(s.norm() < 1e-15 && b == c(0.0, 0.0));
        let alias = TrigPolynomial { min_freq: -4, coeffs: vec![c(1.0, 0.0)] };
        assert!(matches!(
            quadrature_identity(&alias, 2),
            Err(Error::AliasedFrequency { freq: -4, level: 2 })
        ));
    }

    #[test]
    fn sampling_examples() {
        let mono = BlockPolynomial::new(3, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(mono.is_err());
        let mut coeffs = vec![c(0.0, 0.0); 8];
        coeffs[0] = c(1.0, 0.0);
        let mono = BlockPolynomial::new(3, coeffs).unwrap();
        let rec = sampling_inequality(&mono).unwrap();
        assert!((rec.ratio - 1.0).abs() < 1e-14);

        let ones = BlockPolynomial::new(6, vec![c(1.0, 0.0); 64]).unwrap();
        let rec = sampling_inequality(&ones).unwrap();
        assert!(rec.ratio >= 1.0 - 1e-12 && rec.ratio.is_finite());

        let zero = BlockPolynomial::new(2, vec![c(0.0, 0.0); 4]).unwrap();
        assert!(matches!(sampling_inequality(&zero), Err(Error::ZeroFunction)));
    }

    #[test]
    fn block_bounds_for_monomial_block() {
        for (n, m) in [(0u32, 1.0), (3, 0.5), (6, 2.0), (10, 1.0)] {
            let mut coeffs = vec![c(0.0, 0.0); 1 << n];
            coeffs[0] = c(1.0, 0.0);
            let blk = BlockPolynomial::new(n, coeffs).unwrap();
            let b = block_norm_bounds(&blk, mu(m));
            let lead = (1u64 << n) as f64;
            assert!((b.norm / monomial_norm(1 << n, mu(m)) - 1.0).abs() < 1e-9);
            assert!((b.upper - (m / (lead + m)).powf(m)).abs() < 1e-14);
            assert!((b.norm / b.upper - (lead / (lead + m)).powf(lead)).abs() < 1e-9);
            assert!(b.norm_bound_holds(1e-9) && b.growth_chain_holds(1e-12));
        }
        let b = block_norm_bounds(&BlockPolynomial::new(2, vec![c(0.0, 0.0); 4]).unwrap(), mu(1.0));
        assert_eq!((b.norm, b.upper), (0.0, 0.0));
    }

    #[test]
    fn growth_factor_at_level_ten() {
        let blk = BlockPolynomial::new(10, vec![c(1.0, 0.0); 1024]).unwrap();
        let b = block_norm_bounds(&blk, mu(1.0));
        let direct = (1.0 + 2f64.powi(-10)).powi(2048);
        assert!((b.growth_factor / direct - 1.0).abs() < 1e-12);
        assert!((b.growth_factor / std::f64::consts::E.powi(2) - 1.0).abs() < 0.01);
    }

    #[test]
    fn technical_constants_examples() {
        let one = TaylorSeries::from_real(&[1.0]).unwrap();
        let t = technical_constants(&[one], mu(0.8), mu(1.0), mu(1.25)).unwrap();
        assert_eq!((t.d2_hat, t.d1_hat), (1.0, 1.0));

        let n = 5;
        let f = TaylorSeries::monomial(1 << n);
        let t = technical_constants(&[f.clone()], mu(0.8), mu(1.0), mu(1.25)).unwrap();
        let want = weight_r(mu(1.0), 1 << n) / monomial_norm(1 << n, mu(0.8));
        assert!((t.d2_hat / want - 1.0).abs() < 1e-9);
        assert!((forward_t(&f).seminorm(mu(1.0)) - weight_r(mu(1.0), 1 << n)).abs() < 1e-15);

        assert!(technical_constants(&[TaylorSeries::zero()], mu(0.8), mu(1.0), mu(1.25)).is_err());
        assert!(technical_constants(&[], mu(0.8), mu(1.0), mu(1.25)).is_err());
        assert!(technical_constants(&[f], mu(1.0), mu(1.0), mu(1.25)).is_err());
    }
}
