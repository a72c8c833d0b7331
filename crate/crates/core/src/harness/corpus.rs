//! Reproducible test functions.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::analytic::TaylorSeries;
use crate::error::{Error, Result};

pub const MIN_LEVEL: u32 = 4;
pub const MAX_LEVEL: u32 = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyKind {
    /// Truncation of `(1 - z)^{-beta}`, a member of `A^{-beta}`.
    BinomialPole,
    /// `sum_n 2^{n gamma} z^{2^n}`.
    Lacunary,
    /// Complex Gaussian blocks scaled by `(2^n)^gamma`.
    RandomBlock,
    /// `z^N`.
    Monomial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub params: Vec<f64>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, param: f64) -> Self {
        FamilySpec {
            kind,
            params: vec![param],
        }
    }

    pub fn label(&self) -> String {
        let name = match self.kind {
            FamilyKind::BinomialPole => "BINOMIAL_POLE",
            FamilyKind::Lacunary => "LACUNARY",
            FamilyKind::RandomBlock => "RANDOM_BLOCK",
            FamilyKind::Monomial => "MONOMIAL",
        };
        let params: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        format!("{name}({})", params.join(" "))
    }

    fn param(&self) -> Result<f64> {
        match self.params.as_slice() {
            [p] if p.is_finite() => Ok(*p),
            _ => Err(Error::Corpus(format!("{} takes exactly one finite parameter", self.label()))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    pub families: Vec<FamilySpec>,
    pub level_max: u32,
    pub seed: u64,
}

impl CorpusSpec {
    /// The default corpus for the regime `gamma`: every member has finite
    /// `mu`-norm for all `mu >= gamma + 0.2`.
    pub fn standard(gamma: f64, level_max: u32, seed: u64) -> Self {
        CorpusSpec {
            families: vec![
                FamilySpec::new(FamilyKind::BinomialPole, gamma + 0.1),
                FamilySpec::new(FamilyKind::Lacunary, gamma),
                FamilySpec::new(FamilyKind::RandomBlock, gamma - 0.5),
                FamilySpec::new(FamilyKind::RandomBlock, gamma - 0.5),
                FamilySpec::new(FamilyKind::Monomial, 1.0),
                FamilySpec::new(FamilyKind::Monomial, 37.0),
            ],
            level_max,
            seed,
        }
    }

    /// Degree `2^{N_max + 1} - 1` of every generated member.
    pub fn degree(&self) -> usize {
        (2usize << self.level_max) - 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_LEVEL..=MAX_LEVEL).contains(&self.level_max) {
            return Err(Error::Corpus(format!(
                "level_max {} outside [{MIN_LEVEL}, {MAX_LEVEL}]",
                self.level_max
            )));
        }
        for fam in &self.families {
            let p = fam.param()?;
            match fam.kind {
                FamilyKind::BinomialPole if p <= 0.0 => {
                    return Err(Error::Corpus(format!("{}: beta must be > 0", fam.label())))
                }
                FamilyKind::Monomial if p < 0.0 || p.fract() != 0.0 || p as usize > self.degree() => {
                    return Err(Error::Corpus(format!(
                        "{}: degree must be an integer in [0, {}]",
                        fam.label(),
                        self.degree()
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// One generated function with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusMember {
    pub label: String,
    pub series: TaylorSeries,
}

/// Generates every family of `spec` at degree `2^{N_max+1} - 1`.
pub fn gen_corpus(spec: &CorpusSpec) -> Result<Vec<TaylorSeries>> {
    Ok(gen_members(spec)?.into_iter().map(|m| m.series).collect())
}

pub fn gen_members(spec: &CorpusSpec) -> Result<Vec<CorpusMember>> {
    spec.validate()?;
    let degree = spec.degree();
    spec.families
        .iter()
        .enumerate()
        .map(|(index, fam)| {
            let p = fam.param()?;
            let coeffs = match fam.kind {
                FamilyKind::BinomialPole => binomial_pole(p, degree),
                FamilyKind::Lacunary => lacunary(p, degree),
                FamilyKind::RandomBlock => random_blocks(p, spec.level_max, spec.seed, index as u64),
                FamilyKind::Monomial => {
                    let mut c = vec![Complex64::new(0.0, 0.0); degree + 1];
                    c[p as usize] = Complex64::new(1.0, 0.0);
                    c
                }
            };
            Ok(CorpusMember {
                label: fam.label(),
                series: TaylorSeries::new(coeffs)?,
            })
        })
        .collect()
}

/// Coefficients of `(1 - z)^{-beta}`: `a_{j+1} = a_j (j + beta)/(j + 1)`.
pub fn binomial_pole(beta: f64, degree: usize) -> Vec<Complex64> {
    let mut a = 1.0;
    (0..=degree)
        .map(|j| {
            let c = Complex64::new(a, 0.0);
            a *= (j as f64 + beta) / (j as f64 + 1.0);
            c
        })
        .collect()
}

fn lacunary(gamma: f64, degree: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); degree + 1];
    let mut n = 0;
    while (1usize << n) <= degree {
        c[1 << n] = Complex64::new((n as f64 * gamma).exp2(), 0.0);
        n += 1;
    }
    c
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// An independent generator for `(seed, stream, substream)`.
pub fn stream_rng(seed: u64, stream: u64, substream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(splitmix(seed ^ splitmix(stream)) ^ substream))
}

pub fn complex_gaussian<R: rand::Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Each block draws from its own stream, so the corpus at a lower
/// `level_max` is a truncation of the corpus at a higher one.
fn random_blocks(gamma: f64, level_max: u32, seed: u64, index: u64) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(2 << level_max);
    c.push(complex_gaussian(&mut stream_rng(seed, index, 0)));
    for n in 0..=level_max {
        let mut rng = stream_rng(seed, index, n as u64 + 1);
        let scale = (n as f64 * gamma).exp2();
        c.extend((0..1usize << n).map(|_| complex_gaussian(&mut rng) * scale));
    }
    c
}
