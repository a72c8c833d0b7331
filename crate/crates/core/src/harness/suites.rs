//! The property suites behind `verify`.
//!
//! Cases are built as an ordered job list and evaluated on the rayon pool;
//! `collect` keeps job order, so a report never depends on scheduling.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::config::SuiteConfig;
use super::corpus::{complex_gaussian, gen_members, stream_rng, CorpusMember, CorpusSpec, FamilyKind, FamilySpec};
use super::report::{Case, Values, VerificationReport};
use crate::analytic::{monomial_norm, weighted_norm, weighted_norm_from, TaylorSeries, WeightExponent};
use crate::error::{Error, Result};
use crate::kothe::{check_weight_monotone, equivalence_ratio, kothe_row, KotheMatrixSpec};
use crate::optimize::loglog_slope;
use crate::projections::{
    basis_convergence_suite, decay_slope, is_nonincreasing, kernel_l1, nuclearity_partial_sums,
    nuclearity_slope, partial_sum, projection_growth, rate_bound, tail,
};
use crate::transform::{
    block_decompose, block_norm_bounds, forward_t, inverse_t, quadrature_identity, sampling_inequality,
    technical_constants, BlockPolynomial, TrigPolynomial,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Norms,
    Projections,
    Basis,
    Nuclearity,
    Weights,
    Transform,
    Isomorphism,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Norms,
        Suite::Projections,
        Suite::Basis,
        Suite::Nuclearity,
        Suite::Weights,
        Suite::Transform,
        Suite::Isomorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Norms => "NORMS",
            Suite::Projections => "PROJECTIONS",
            Suite::Basis => "BASIS",
            Suite::Nuclearity => "NUCLEARITY",
            Suite::Weights => "WEIGHTS",
            Suite::Transform => "TRANSFORM",
            Suite::Isomorphism => "ISOMORPHISM",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownSuite(s.to_owned()))
    }
}

// stream ids for the suite-local random draws, disjoint from corpus indices
const NORMS_STREAM: u64 = 1 << 32;
const TAILS_STREAM: u64 = NORMS_STREAM + 1;
const ROUND_TRIP_STREAM: u64 = NORMS_STREAM + 2;
const SAMPLING_STREAM: u64 = NORMS_STREAM + 3;
const QUADRATURE_STREAM: u64 = NORMS_STREAM + 4;

/// Runs `suite` over the corpus described by `spec`.
///
/// An empty `spec.families` selects the standard corpus of every regime in
/// `config.gammas`, at `spec.level_max` and `spec.seed`.
pub fn run_suite(suite: Suite, spec: &CorpusSpec, config: &SuiteConfig) -> Result<VerificationReport> {
    spec.validate()?;
    let mut constants = Values::new();
    let cases = match suite {
        Suite::Norms => norms(spec, config, &mut constants)?,
        Suite::Projections => projections(spec, config, &mut constants)?,
        Suite::Basis => basis(spec, config)?,
        Suite::Nuclearity => nuclearity(config, &mut constants)?,
        Suite::Weights => weights(config, &mut constants)?,
        Suite::Transform => transform(spec, config, &mut constants)?,
        Suite::Isomorphism => isomorphism(spec, config, &mut constants)?,
    };
    Ok(VerificationReport::new(suite.name(), cases, constants))
}

/// [`run_suite`] with the corpus taken from `config`.
pub fn run_configured(suite: Suite, config: &SuiteConfig) -> Result<VerificationReport> {
    let spec = CorpusSpec {
        families: config.families.clone().unwrap_or_default(),
        level_max: config.level_max,
        seed: config.seed,
    };
    run_suite(suite, &spec, config)
}

fn mu(x: f64) -> Result<WeightExponent> {
    WeightExponent::new(x)
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// `(gamma, members)` per regime.
fn corpora(spec: &CorpusSpec, config: &SuiteConfig) -> Result<Vec<(f64, Vec<CorpusMember>)>> {
    config
        .gammas
        .iter()
        .map(|&gamma| {
            let members = if spec.families.is_empty() {
                gen_members(&CorpusSpec::standard(gamma, spec.level_max, spec.seed))?
            } else {
                gen_members(spec)?
            };
            Ok((gamma, members))
        })
        .collect()
}

fn random_poly<R: Rng>(rng: &mut R, degree: usize) -> TaylorSeries {
    TaylorSeries::new((0..=degree).map(|_| complex_gaussian(rng)).collect()).expect("finite")
}

fn monomial_degrees(max: usize) -> Vec<usize> {
    let mut ns = vec![0, 1, 2, 3];
    let mut p = 4;
    while p <= max {
        ns.push(p);
        if p + p / 2 <= max {
            ns.push(p + p / 2);
        }
        p *= 2;
    }
    ns.retain(|&n| n <= max);
    ns.dedup();
    ns
}

fn norms(spec: &CorpusSpec, config: &SuiteConfig, constants: &mut Values) -> Result<Vec<Case>> {
    let cfg = &config.norms;
    let tol = cfg.rel_tol;
    let mus = cfg.mus.iter().map(|&m| mu(m)).collect::<Result<Vec<_>>>()?;
    let mut cases = Vec::new();

    let jobs: Vec<(usize, WeightExponent)> = mus
        .iter()
        .flat_map(|&m| monomial_degrees(cfg.monomial_max_degree).into_iter().map(move |n| (n, m)))
        .collect();
    cases.extend(jobs.par_iter().map(|&(n, m)| {
        let measured = weighted_norm(&TaylorSeries::monomial(n), m);
        let exact = monomial_norm(n, m);
        let err = rel_diff(measured, exact);
        Case::new(format!("monomial z^{n} mu={m}"))
            .input("n", n as f64)
            .input("mu", m.get())
            .measured("norm", measured)
            .measured("rel_err", err)
            .bound("norm", exact)
            .bound("rel_err", tol)
            .check(err <= tol)
    }).collect::<Vec<_>>());

    let max_deg = cfg.random_max_degree.max(1);
    let polys: Vec<TaylorSeries> = (0..cfg.random_polys + 1)
        .map(|i| {
            let mut rng = stream_rng(config.seed, NORMS_STREAM, i as u64);
            let degree = rng.gen_range(1..=max_deg);
            random_poly(&mut rng, degree)
        })
        .collect();
    let alpha = Complex64::new(2.5, -1.5);
    let jobs: Vec<(usize, usize)> = (0..cfg.random_polys)
        .flat_map(|i| (0..mus.len()).map(move |k| (i, k)))
        .collect();
    cases.extend(jobs.par_iter().map(|&(i, k)| {
        let (f, g, m) = (&polys[i], &polys[i + 1], mus[k]);
        let nf = weighted_norm(f, m);
        let ng = weighted_norm(g, m);
        let homog = rel_diff(weighted_norm(&f.scaled(alpha), m), alpha.norm() * nf);
        let sum = weighted_norm(&f.axpy(Complex64::new(1.0, 0.0), g), m);
        let mut case = Case::new(format!("random poly {i} mu={m}"))
            .input("degree", f.degree() as f64)
            .input("mu", m.get())
            .measured("norm", nf)
            .measured("homogeneity_err", homog)
            .measured("norm_sum", sum)
            .bound("homogeneity_err", tol)
            .bound("norm_sum", (nf + ng) * (1.0 + tol));
        let mut ok = homog <= tol && sum <= (nf + ng) * (1.0 + tol);
        if let Some(&next) = mus.iter().filter(|&&n| n > m).min_by(|a, b| a.get().total_cmp(&b.get())) {
            let larger = weighted_norm(f, next);
            case = case.measured("norm_next_mu", larger).bound("norm_next_mu", nf * (1.0 + tol));
            ok &= larger <= nf * (1.0 + tol);
        }
        case.check(ok)
    }).collect::<Vec<_>>());

    let top_mu = cfg.mus.iter().copied().fold(0.0, f64::max);
    let tails: Vec<(TaylorSeries, WeightExponent)> = (0..cfg.tails)
        .map(|i| {
            let mut rng = stream_rng(config.seed, TAILS_STREAM, i as u64);
            let low = rng.gen_range(top_mu.floor() as usize + 1..=200);
            let len = rng.gen_range(1..=256);
            let mut coeffs = vec![Complex64::new(0.0, 0.0); low];
            coeffs.extend((0..len).map(|_| complex_gaussian(&mut rng)));
            (TaylorSeries::new(coeffs).expect("finite"), mus[i % mus.len()])
        })
        .collect();
    cases.extend(tails.par_iter().enumerate().map(|(i, (f, m))| {
        let restricted = weighted_norm(f, *m);
        let full = weighted_norm_from(f, *m, 0.0);
        let err = rel_diff(restricted, full);
        Case::new(format!("tail {i} mu={m}"))
            .input("lowest_degree", f.lowest_degree().unwrap_or(0) as f64)
            .input("mu", m.get())
            .measured("restricted", restricted)
            .measured("full", full)
            .measured("rel_err", err)
            .bound("rel_err", tol)
            .check(err <= tol)
    }).collect::<Vec<_>>());

    let mut worst_monotone = 0.0f64;
    for (gamma, members) in corpora(spec, config)? {
        let triple = SuiteConfig::triple(gamma);
        let triple = [mu(triple[0])?, mu(triple[1])?, mu(triple[2])?];
        let rows: Vec<Case> = members
            .par_iter()
            .map(|m| {
                let n: Vec<f64> = triple.iter().map(|&t| weighted_norm(&m.series, t)).collect();
                let ok = n[1] <= n[0] * (1.0 + tol) && n[2] <= n[1] * (1.0 + tol);
                Case::new(format!("monotone in mu gamma={gamma} {}", m.label))
                    .input("gamma", gamma)
                    .measured("norm_mu1", n[0])
                    .measured("norm_mu", n[1])
                    .measured("norm_mu2", n[2])
                    .check(ok)
            })
            .collect();
        for c in &rows {
            let n0 = c.measured["norm_mu1"];
            if n0 > 0.0 {
                worst_monotone = worst_monotone.max(c.measured["norm_mu2"] / n0);
            }
        }
        cases.extend(rows);
    }
    constants.insert("max_norm_ratio_mu2_over_mu1".into(), worst_monotone);
    Ok(cases)
}

fn projections(spec: &CorpusSpec, config: &SuiteConfig, constants: &mut Values) -> Result<Vec<Case>> {
    let cfg = &config.projections;
    let mut cases = Vec::new();
    let doubling = 4.0 / (PI * PI) * LN_2;
    let kernels: Vec<Result<Case>> = cfg
        .kernel_orders
        .par_iter()
        .map(|&m| {
            let d = kernel_l1(2 * m)? - kernel_l1(m)?;
            Ok(Case::new(format!("kernel doubling m={m}"))
                .input("m", m as f64)
                .measured("l1_difference", d)
                .bound("lower", 0.9 * doubling)
                .bound("upper", 1.1 * doubling)
                .check((0.9 * doubling..=1.1 * doubling).contains(&d)))
        })
        .collect();
    cases.extend(kernels.into_iter().collect::<Result<Vec<_>>>()?);

    let mut projection_constant = 0.0f64;
    for (gamma, members) in corpora(spec, config)? {
        let m = mu(gamma + 0.5)?;
        let rows: Vec<Result<Case>> = members
            .par_iter()
            .map(|member| {
                let top = cfg.max_order.min(member.series.degree());
                let ns: Vec<usize> = (1..).map(|k| 1usize << k).take_while(|&n| n <= top).collect();
                if ns.is_empty() {
                    return Ok(Case::new(format!("projection growth gamma={gamma} {}", member.label)));
                }
                let ratios = projection_growth(&member.series, m, &ns)?;
                let (worst, worst_n) = ns
                    .iter()
                    .zip(&ratios)
                    .map(|(&n, &r)| (r / (1.0 + (n as f64).ln()), n))
                    .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a });
                Ok(Case::new(format!("projection growth gamma={gamma} {}", member.label))
                    .input("gamma", gamma)
                    .input("mu", m.get())
                    .measured("max_ratio_over_log", worst)
                    .measured("worst_n", worst_n as f64)
                    .bound("max_ratio_over_log", 4.0)
                    .check(worst <= 4.0))
            })
            .collect();
        for c in rows {
            let c = c?;
            if let Some(&w) = c.measured.get("max_ratio_over_log") {
                projection_constant = projection_constant.max(w);
            }
            cases.push(c);
        }
    }
    constants.insert("projection_constant".into(), projection_constant);

    for &[m0, m1] in &cfg.rate_pairs {
        let (mu0, mu1) = (mu(m0)?, mu(m1)?);
        if mu1 <= mu0 {
            return Err(Error::ExponentOrder {
                what: "mu0 < mu",
                lower: m0,
                upper: m1,
            });
        }
        let degree = cfg.rate_degree_factor.max(2) * cfg.rate_n_hi - 1;
        let f = TaylorSeries::new(super::corpus::binomial_pole(m0, degree))?;
        let norm0 = weighted_norm(&f, mu0);
        let ns = half_octaves(cfg.rate_n_lo.max(2), cfg.rate_n_hi);
        let measured: Vec<f64> = ns.par_iter().map(|&n| weighted_norm(&tail(&f, n), mu1)).collect();
        let mut worst = 0.0f64;
        for (&n, &v) in ns.iter().zip(&measured) {
            let bound = rate_bound(n, mu0, mu1, norm0);
            worst = worst.max(v / bound);
            cases.push(
                Case::new(format!("rate bound mu0={m0} mu={m1} n={n}"))
                    .input("mu0", m0)
                    .input("mu", m1)
                    .input("n", n as f64)
                    .measured("tail_norm", v)
                    .measured("ratio", v / bound)
                    .bound("tail_norm", bound)
                    .bound("ratio", cfg.ratio_max)
                    .check(v / bound <= cfg.ratio_max),
            );
        }
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let slope = loglog_slope(&xs, &measured);
        let expected = -(m1 - m0);
        cases.push(
            Case::new(format!("rate slope mu0={m0} mu={m1}"))
                .input("mu0", m0)
                .input("mu", m1)
                .measured("slope", slope)
                .bound("expected", expected)
                .bound("tolerance", cfg.slope_tol)
                .check((slope - expected).abs() <= cfg.slope_tol),
        );
        constants.insert(format!("rate_ratio_max[mu0={m0},mu={m1}]"), worst);
    }
    Ok(cases)
}

/// `round(lo 2^{k/2})` up to `hi`, deduplicated.
fn half_octaves(lo: usize, hi: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = (0..)
        .map(|k| (lo as f64 * (k as f64 / 2.0).exp2()).round() as usize)
        .take_while(|&n| n <= hi)
        .collect();
    ns.dedup();
    ns
}

fn basis(spec: &CorpusSpec, config: &SuiteConfig) -> Result<Vec<Case>> {
    let cfg = &config.basis;
    let mut jobs = Vec::new();
    for &gamma in &config.gammas {
        let family = if gamma > 0.0 {
            FamilySpec::new(FamilyKind::BinomialPole, gamma)
        } else {
            FamilySpec::new(FamilyKind::Lacunary, 0.0)
        };
        let f = gen_members(&CorpusSpec {
            families: vec![family],
            level_max: spec.level_max,
            seed: spec.seed,
        })?
        .remove(0);
        for &offset in &cfg.mu_offsets {
            jobs.push((gamma, f.clone(), mu(gamma + offset)?));
        }
    }
    let ns: Vec<usize> = (1..)
        .map(|k| 1usize << k)
        .skip_while(|&n| n < cfg.n_lo.max(2))
        .take_while(|&n| n <= cfg.n_hi)
        .collect();
    let results: Vec<Result<(f64, WeightExponent, Case)>> = jobs
        .par_iter()
        .map(|(gamma, f, m)| {
            let records = basis_convergence_suite(&f.series, *gamma, &[*m], &ns)?;
            let first = records.first().map_or(0.0, |r| r.measured);
            let last = records.last().map_or(0.0, |r| r.measured);
            let slope = decay_slope(&records).unwrap_or(f64::NAN);
            let max_ratio = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
            let monotone = is_nonincreasing(&records, 1e-9 * first);
            let case = Case::new(format!("tail decay gamma={gamma} mu={m} {}", f.label))
                .input("gamma", *gamma)
                .input("mu", m.get())
                .measured("first", first)
                .measured("last", last)
                .measured("slope", slope)
                .measured("max_bound_ratio", max_ratio)
                .check(monotone && last < first);
            Ok((*gamma, *m, case))
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut cases = Vec::new();
    for &gamma in &config.gammas {
        let group: Vec<&(f64, WeightExponent, Case)> = results.iter().filter(|r| r.0 == gamma).collect();
        cases.extend(group.iter().map(|r| r.2.clone()));
        let mut by_mu: Vec<(f64, f64)> = group.iter().map(|r| (r.1.get(), r.2.measured["slope"])).collect();
        by_mu.sort_by(|a, b| a.0.total_cmp(&b.0));
        let ordered = by_mu.windows(2).all(|w| w[1].1 < w[0].1);
        cases.push(
            Case::new(format!("faster decay for larger mu gamma={gamma}"))
                .input("gamma", gamma)
                .check(ordered),
        );
    }
    Ok(cases)
}

fn nuclearity(config: &SuiteConfig, constants: &mut Values) -> Result<Vec<Case>> {
    let cfg = &config.nuclearity;
    cfg.triples
        .iter()
        .map(|&[gamma, nu, m]| {
            let (nu_w, mu_w) = (mu(nu)?, mu(m)?);
            let slope = nuclearity_slope(gamma, nu_w, mu_w, cfg.n_lo, cfg.n_hi)?;
            let sums = nuclearity_partial_sums(gamma, nu_w, mu_w, cfg.n_hi)?;
            let expected = 1.0 - (m - nu);
            constants.insert(format!("nuclearity_slope[gamma={gamma},nu={nu},mu={m}]"), slope);
            Ok(Case::new(format!("nuclearity gamma={gamma} nu={nu} mu={m}"))
                .input("gamma", gamma)
                .input("nu", nu)
                .input("mu", m)
                .measured("slope", slope)
                .measured("partial_sum", sums[cfg.n_hi - 1])
                .bound("expected_slope", expected)
                .bound("tolerance", cfg.slope_tol)
                .check((slope - expected).abs() <= cfg.slope_tol))
        })
        .collect()
}

fn weights(config: &SuiteConfig, constants: &mut Values) -> Result<Vec<Case>> {
    let cfg = &config.weights;
    let mut cases = Vec::new();
    for &[m1, m2] in &cfg.pairs {
        let ok = check_weight_monotone(mu(m1)?, mu(m2)?, cfg.j_max)?;
        cases.push(
            Case::new(format!("weights decrease in mu ({m1}, {m2})"))
                .input("mu1", m1)
                .input("mu2", m2)
                .input("j_max", cfg.j_max as f64)
                .check(ok),
        );
    }
    for &m in &cfg.mus {
        let (lo, hi) = equivalence_ratio(mu(m)?, cfg.j_max)?;
        let cap = m.max(1.0).exp2();
        constants.insert(format!("equivalence_max[mu={m}]"), hi);
        cases.push(
            Case::new(format!("r/s equivalence mu={m}"))
                .input("mu", m)
                .input("j_max", cfg.j_max as f64)
                .measured("min", lo)
                .measured("max", hi)
                .bound("min", 1.0)
                .bound("max", cap)
                .check(lo >= 1.0 && hi <= cap),
        );
    }
    for &gamma in &config.gammas {
        cases.push(kothe_case(KotheMatrixSpec::Echelon { gamma }, 1, cfg)?);
        if gamma > 0.0 {
            let min_k = (1.0 / gamma).floor() as u32 + 1;
            cases.push(kothe_case(KotheMatrixSpec::CoEchelon { gamma }, min_k, cfg)?);
        }
    }
    Ok(cases)
}

/// Rows positive, ordered in `k` in the direction the family requires.
fn kothe_case(spec: KotheMatrixSpec, k0: u32, cfg: &super::config::WeightsConfig) -> Result<Case> {
    let (name, gamma, increasing) = match spec {
        KotheMatrixSpec::Echelon { gamma } => ("echelon", gamma, true),
        KotheMatrixSpec::CoEchelon { gamma } => ("co-echelon", gamma, false),
    };
    let mut ok = true;
    for k in k0..k0 + cfg.kothe_rows {
        for j in 0..=cfg.kothe_j_max {
            let a = kothe_row(spec, k, j)?;
            let b = kothe_row(spec, k + 1, j)?;
            ok &= a > 0.0 && if increasing { a <= b } else { b <= a };
        }
    }
    Ok(Case::new(format!("{name} rows gamma={gamma}"))
        .input("gamma", gamma)
        .input("first_row", k0 as f64)
        .input("rows", cfg.kothe_rows as f64)
        .input("j_max", cfg.kothe_j_max as f64)
        .check(ok))
}

fn transform(spec: &CorpusSpec, config: &SuiteConfig, constants: &mut Values) -> Result<Vec<Case>> {
    let cfg = &config.transform;
    let tol = cfg.round_trip_tol;
    let mut cases = Vec::new();

    let levels: Vec<u32> = (cfg.round_trip_level_lo..=spec.level_max).collect();
    cases.extend(levels.par_iter().map(|&level| {
        let mut rng = stream_rng(config.seed, ROUND_TRIP_STREAM, level as u64);
        let degree = (2usize << level) - 1;
        let mut worst = 0.0f64;
        let mut worst_linear = 0.0f64;
        let mut prev: Option<TaylorSeries> = None;
        for _ in 0..cfg.round_trips_per_level {
            let f = random_poly(&mut rng, degree);
            worst = worst.max(max_abs_diff(inverse_t(&forward_t(&f)).coeffs(), f.coeffs()));
            if let Some(g) = &prev {
                let a = complex_gaussian(&mut rng);
                let combo = forward_t(&f.scaled(a).axpy(Complex64::new(1.0, 0.0), g));
                let expected: Vec<Complex64> = forward_t(&f)
                    .values()
                    .iter()
                    .zip(forward_t(g).values())
                    .map(|(x, y)| a * x + y)
                    .collect();
                worst_linear = worst_linear.max(max_abs_diff(combo.values(), &expected));
            }
            prev = Some(f);
        }
        Case::new(format!("round trip level {level}"))
            .input("level", level as f64)
            .input("count", cfg.round_trips_per_level as f64)
            .measured("max_error", worst)
            .measured("max_linearity_error", worst_linear)
            .bound("max_error", tol)
            .bound("max_linearity_error", tol)
            .check(worst < tol && worst_linear < tol)
    }).collect::<Vec<_>>());

    let regimes = corpora(spec, config)?;
    for (gamma, members) in &regimes {
        cases.extend(members.iter().map(|m| {
            let err = max_abs_diff(inverse_t(&forward_t(&m.series)).coeffs(), m.series.coeffs());
            let scale = m.series.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max);
            Case::new(format!("corpus round trip gamma={gamma} {}", m.label))
                .input("gamma", *gamma)
                .measured("max_error", err)
                .bound("max_error", tol * scale)
                .check(err < tol * scale)
        }));
    }

    let [s_lo, s_hi] = cfg.sampling_levels;
    let sampling: Vec<Result<(u32, f64, f64)>> = (s_lo.max(1)..=s_hi)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&level| {
            let mut rng = stream_rng(config.seed, SAMPLING_STREAM, level as u64);
            let mut min_ratio = f64::INFINITY;
            let mut max_ratio = 0.0f64;
            for _ in 0..cfg.sampling_blocks_per_level {
                let coeffs = (0..1usize << level).map(|_| complex_gaussian(&mut rng)).collect();
                let rec = sampling_inequality(&BlockPolynomial::new(level, coeffs)?)?;
                min_ratio = min_ratio.min(rec.ratio);
                max_ratio = max_ratio.max(rec.ratio);
            }
            Ok((level, min_ratio, max_ratio))
        })
        .collect();
    let mut sampling_constant = 0.0f64;
    for row in sampling {
        let (level, min_ratio, max_ratio) = row?;
        let n2 = (level * level) as f64;
        let c = max_ratio / n2;
        if level >= 4 {
            sampling_constant = sampling_constant.max(c);
        }
        let mut case = Case::new(format!("sampling inequality level {level}"))
            .input("level", level as f64)
            .input("count", cfg.sampling_blocks_per_level as f64)
            .measured("min_sup_over_max_sample", min_ratio)
            .measured("max_sup_over_n2_max_sample", c)
            .bound("min_sup_over_max_sample", 1.0 - 1e-9);
        let mut ok = min_ratio >= 1.0 - 1e-9;
        if level >= 4 {
            case = case.bound("max_sup_over_n2_max_sample", 1.0);
            ok &= c <= 1.0;
        }
        cases.push(case.check(ok));
    }
    constants.insert("sampling_constant".into(), sampling_constant);

    let [q_lo, q_hi] = cfg.quadrature_levels;
    let quad: Vec<Result<Case>> = (q_lo..=q_hi)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&level| {
            let mut rng = stream_rng(config.seed, QUADRATURE_STREAM, level as u64);
            let top = (1i64 << level) - 1;
            let mut worst = 0.0f64;
            for _ in 0..cfg.quadrature_polys_per_level {
                let lo = rng.gen_range(-top..=0);
                let hi = rng.gen_range(0..=top);
                let g = TrigPolynomial {
                    min_freq: lo,
                    coeffs: (lo..=hi).map(|_| complex_gaussian(&mut rng)).collect(),
                };
                let (mean, b0) = quadrature_identity(&g, level)?;
                worst = worst.max((mean - b0).norm());
            }
            Ok(Case::new(format!("quadrature identity level {level}"))
                .input("level", level as f64)
                .input("count", cfg.quadrature_polys_per_level as f64)
                .measured("max_error", worst)
                .bound("max_error", cfg.quadrature_tol)
                .check(worst <= cfg.quadrature_tol))
        })
        .collect();
    cases.extend(quad.into_iter().collect::<Result<Vec<_>>>()?);

    let block_mus = cfg.block_mus.iter().map(|&m| mu(m)).collect::<Result<Vec<_>>>()?;
    for &m in &block_mus {
        for level in 4..=spec.level_max {
            let lead = (1u64 << level) as f64;
            let factor = (2.0 * lead * (m.get() / lead).ln_1p()).exp();
            let cap = (2.0 * m.get()).exp() * 1.05;
            cases.push(
                Case::new(format!("growth factor mu={m} level {level}"))
                    .input("mu", m.get())
                    .input("level", level as f64)
                    .measured("factor", factor)
                    .bound("factor", cap)
                    .check(factor <= cap),
            );
        }
    }
    for (gamma, members) in &regimes {
        let jobs: Vec<(&CorpusMember, WeightExponent)> =
            members.iter().flat_map(|mem| block_mus.iter().map(move |&m| (mem, m))).collect();
        cases.extend(jobs.par_iter().map(|&(mem, m)| {
            let mut worst = 0.0f64;
            let mut ok = true;
            for blk in block_decompose(&mem.series).blocks.iter().filter(|b| !b.is_zero()) {
                let b = block_norm_bounds(blk, m);
                worst = worst.max(b.norm / b.upper);
                ok &= b.norm_bound_holds(1e-9) && b.growth_chain_holds(1e-9);
            }
            Case::new(format!("block bounds gamma={gamma} mu={m} {}", mem.label))
                .input("gamma", *gamma)
                .input("mu", m.get())
                .measured("max_norm_over_upper", worst)
                .bound("max_norm_over_upper", 1.0 + 1e-9)
                .check(ok)
        }).collect::<Vec<_>>());
    }
    Ok(cases)
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len().max(b.len());
    let zero = Complex64::new(0.0, 0.0);
    (0..n)
        .map(|i| (a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).norm())
        .fold(0.0, f64::max)
}

fn isomorphism(spec: &CorpusSpec, config: &SuiteConfig, constants: &mut Values) -> Result<Vec<Case>> {
    let cfg = &config.isomorphism;
    let mut cases = Vec::new();
    for (gamma, members) in corpora(spec, config)? {
        let [m1, m, m2] = SuiteConfig::triple(gamma);
        let (mu1, mu_mid, mu2) = (mu(m1)?, mu(m)?, mu(m2)?);
        let mut prev: Option<(u32, f64, f64)> = None;
        for level in cfg.level_lo..=spec.level_max {
            let degree = (2usize << level) - 1;
            let corpus: Vec<TaylorSeries> = members
                .iter()
                .map(|mem| partial_sum(&mem.series, degree))
                .filter(|f| !f.is_zero())
                .collect();
            let tc = technical_constants(&corpus, mu1, mu_mid, mu2)?;
            let inv_d1 = 1.0 / tc.d1_hat;
            if let Some((prev_level, d2, inv)) = prev {
                let c2 = (tc.d2_hat / d2 - 1.0).abs();
                let c1 = (inv_d1 / inv - 1.0).abs();
                cases.push(
                    Case::new(format!("stability gamma={gamma} levels {prev_level}->{level}"))
                        .input("gamma", gamma)
                        .input("level", level as f64)
                        .measured("d2_hat", tc.d2_hat)
                        .measured("inv_d1_hat", inv_d1)
                        .measured("d2_change", c2)
                        .measured("inv_d1_change", c1)
                        .bound("d2_change", cfg.max_change)
                        .bound("inv_d1_change", cfg.max_change)
                        .check(c2 < cfg.max_change && c1 < cfg.max_change),
                );
            }
            prev = Some((level, tc.d2_hat, inv_d1));
        }
        if let Some((_, d2, inv)) = prev {
            constants.insert(format!("d2_hat[gamma={gamma}]"), d2);
            constants.insert(format!("d1_hat[gamma={gamma}]"), 1.0 / inv);
        }
    }
    Ok(cases)
}
