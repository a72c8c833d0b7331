//! Suite parameters, read from TOML.
//!
//! Every key is optional; a missing table or key takes its default.
//!
//! ```toml
//! seed = 7
//! level_max = 10
//! gammas = [0.0, 1.0]
//!
//! [weights]
//! j_max = 1000
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::corpus::{CorpusSpec, FamilySpec};
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 20_240_101;
pub const DEFAULT_LEVEL_MAX: u32 = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub level_max: u32,
    /// Regimes `gamma`; each gets the triple `(gamma + 0.2, gamma + 0.5, gamma + 1)`.
    pub gammas: Vec<f64>,
    /// Replaces the standard corpus families when set.
    pub families: Option<Vec<FamilySpec>>,
    pub norms: NormsConfig,
    pub projections: ProjectionsConfig,
    pub basis: BasisConfig,
    pub nuclearity: NuclearityConfig,
    pub weights: WeightsConfig,
    pub transform: TransformConfig,
    pub isomorphism: IsomorphismConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            level_max: DEFAULT_LEVEL_MAX,
            gammas: vec![0.0, 0.5, 1.0],
            families: None,
            norms: NormsConfig::default(),
            projections: ProjectionsConfig::default(),
            basis: BasisConfig::default(),
            nuclearity: NuclearityConfig::default(),
            weights: WeightsConfig::default(),
            transform: TransformConfig::default(),
            isomorphism: IsomorphismConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormsConfig {
    pub mus: Vec<f64>,
    /// Monomials `z^N` are checked for `N` up to this degree.
    pub monomial_max_degree: usize,
    pub random_polys: usize,
    pub random_max_degree: usize,
    pub tails: usize,
    pub rel_tol: f64,
}

impl Default for NormsConfig {
    fn default() -> Self {
        NormsConfig {
            mus: vec![0.5, 1.0, 2.7],
            monomial_max_degree: 4096,
            random_polys: 50,
            random_max_degree: 256,
            tails: 100,
            rel_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProjectionsConfig {
    /// Kernel orders `m` for the doubling check `L_{2m} - L_m`.
    pub kernel_orders: Vec<usize>,
    pub max_order: usize,
    /// `(mu0, mu)` pairs for the convergence rate check.
    pub rate_pairs: Vec<[f64; 2]>,
    pub rate_n_lo: usize,
    pub rate_n_hi: usize,
    /// The test function is truncated at degree `rate_degree_factor * rate_n_hi - 1`.
    pub rate_degree_factor: usize,
    pub slope_tol: f64,
    pub ratio_max: f64,
}

impl Default for ProjectionsConfig {
    fn default() -> Self {
        ProjectionsConfig {
            kernel_orders: (6..=12).map(|k| 1 << k).collect(),
            max_order: 4096,
            rate_pairs: vec![[1.0, 1.5], [0.5, 1.5]],
            rate_n_lo: 64,
            rate_n_hi: 2048,
            rate_degree_factor: 8,
            slope_tol: 0.15,
            ratio_max: 4.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasisConfig {
    /// Offsets `mu - gamma`.
    pub mu_offsets: Vec<f64>,
    pub n_lo: usize,
    pub n_hi: usize,
}

impl Default for BasisConfig {
    fn default() -> Self {
        BasisConfig {
            mu_offsets: vec![0.1, 0.5, 1.0],
            n_lo: 8,
            n_hi: 2048,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NuclearityConfig {
    /// `(gamma, nu, mu)` triples.
    pub triples: Vec<[f64; 3]>,
    pub n_lo: usize,
    pub n_hi: usize,
    pub slope_tol: f64,
}

impl Default for NuclearityConfig {
    fn default() -> Self {
        NuclearityConfig {
            triples: vec![[0.0, 0.4, 1.0], [0.5, 0.7, 1.5], [1.0, 1.2, 1.7]],
            n_lo: 256,
            n_hi: 8192,
            slope_tol: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightsConfig {
    /// `(mu1, mu2)` with `mu1 > mu2`.
    pub pairs: Vec<[f64; 2]>,
    pub mus: Vec<f64>,
    pub j_max: u64,
    pub kothe_rows: u32,
    pub kothe_j_max: u64,
}

impl Default for WeightsConfig {
    fn default() -> Self {
        WeightsConfig {
            pairs: vec![[2.0, 1.0], [1.5, 0.5], [3.0, 2.9]],
            mus: vec![0.5, 1.0, 3.0],
            j_max: 100_000,
            kothe_rows: 32,
            kothe_j_max: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformConfig {
    pub round_trips_per_level: usize,
    pub round_trip_level_lo: u32,
    pub round_trip_tol: f64,
    pub sampling_blocks_per_level: usize,
    pub sampling_levels: [u32; 2],
    pub quadrature_polys_per_level: usize,
    pub quadrature_levels: [u32; 2],
    pub quadrature_tol: f64,
    pub block_mus: Vec<f64>,
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig {
            round_trips_per_level: 100,
            round_trip_level_lo: 4,
            round_trip_tol: 1e-10,
            sampling_blocks_per_level: 1000,
            sampling_levels: [2, 10],
            quadrature_polys_per_level: 1000,
            quadrature_levels: [2, 8],
            quadrature_tol: 1e-12,
            block_mus: vec![0.5, 1.0, 2.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IsomorphismConfig {
    pub level_lo: u32,
    /// Largest relative change of `d2_hat` and `1/d1_hat` between levels.
    pub max_change: f64,
}

impl Default for IsomorphismConfig {
    fn default() -> Self {
        IsomorphismConfig {
            level_lo: 8,
            max_change: 0.25,
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    /// `(mu1, mu, mu2)` for the regime `gamma`.
    pub fn triple(gamma: f64) -> [f64; 3] {
        [gamma + 0.2, gamma + 0.5, gamma + 1.0]
    }

    /// The corpus for `gamma` at this configuration's seed and level.
    pub fn corpus_spec(&self, gamma: f64) -> CorpusSpec {
        let mut spec = CorpusSpec::standard(gamma, self.level_max, self.seed);
        if let Some(families) = &self.families {
            spec.families = families.clone();
        }
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus::FamilyKind;

    #[test]
    fn empty_file_is_default() {
        assert_eq!(SuiteConfig::from_toml("").unwrap(), SuiteConfig::default());
    }

    #[test]
    fn partial_tables() {
        let c = SuiteConfig::from_toml(
            "level_max = 10\n[weights]\nj_max = 1000\n\n[[families]]\nkind = \"MONOMIAL\"\nparams = [3.0]\n",
        )
        .unwrap();
        assert_eq!(c.level_max, 10);
        assert_eq!(c.weights.j_max, 1000);
        assert_eq!(c.weights.mus, WeightsConfig::default().mus);
        let spec = c.corpus_spec(0.5);
        assert_eq!(spec.families, vec![FamilySpec::new(FamilyKind::Monomial, 3.0)]);
        assert_eq!(spec.level_max, 10);
    }

    #[test]
    fn malformed_config_rejected() {
        assert!(SuiteConfig::from_toml("level_max = \"big\"").is_err());
        assert!(SuiteConfig::from_toml("unknown_key = 1").is_err());
    }
}
