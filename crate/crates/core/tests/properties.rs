use korenblum::io::{parse_values, samples_to_json, series_to_json};
use korenblum::kothe::{kothe_row, KotheMatrixSpec};
use korenblum::projections::{partial_sum, tail};
use korenblum::*;
use proptest::prelude::*;

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-4.0..4.0f64, -4.0..4.0f64), 1..max_len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn series(max_len: usize) -> impl Strategy<Value = TaylorSeries> {
    coeffs(max_len).prop_map(|c| TaylorSeries::new(c).unwrap())
}

fn w(mu: f64) -> WeightExponent {
    WeightExponent::new(mu).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_decreases_in_mu(f in series(64), mu in 0.1..3.0f64, dmu in 0.05..2.0f64) {
        let a = weighted_norm(&f, w(mu));
        let b = weighted_norm(&f, w(mu + dmu));
        prop_assert!(b <= a * (1.0 + 1e-9));
    }

    #[test]
    fn norm_is_homogeneous_and_subadditive(
        f in series(48), g in series(48), re in -3.0..3.0f64, im in -3.0..3.0f64, mu in 0.2..3.0f64,
    ) {
        let alpha = Complex64::new(re, im);
        let nf = weighted_norm(&f, w(mu));
        prop_assert!(close(weighted_norm(&f.scaled(alpha), w(mu)), alpha.norm() * nf, 1e-9));
        let sum = weighted_norm(&f.axpy(Complex64::new(1.0, 0.0), &g), w(mu));
        prop_assert!(sum <= (nf + weighted_norm(&g, w(mu))) * (1.0 + 1e-9));
    }

    #[test]
    fn norm_dominates_every_circle(f in series(64), mu in 0.2..3.0f64, r in 0.0..0.999f64) {
        let n = weighted_norm(&f, w(mu));
        let at_r = sup_modulus(&f, r, 8).unwrap() * (1.0 - r).powf(mu);
        prop_assert!(at_r <= n * (1.0 + 1e-9));
        prop_assert!(f.coeffs()[0].norm() <= n * (1.0 + 1e-12));
    }

    #[test]
    fn monomial_closed_form(n in 0usize..5000, mu in 0.1..5.0f64) {
        let direct = if n == 0 {
            1.0
        } else {
            let nf = n as f64;
            (nf / (nf + mu)).powf(nf) * (mu / (nf + mu)).powf(mu)
        };
        prop_assert!(close(monomial_norm(n, w(mu)), direct, 1e-11));
        prop_assert!(close(weighted_norm(&TaylorSeries::monomial(n), w(mu)), direct, 1e-9));
    }

    #[test]
    fn projections_compose(f in series(128), n in 0usize..140, m in 0usize..140) {
        prop_assert_eq!(partial_sum(&partial_sum(&f, n), m), partial_sum(&f, n.min(m)));
        let split = partial_sum(&f, n).padded(f.degree()).axpy(Complex64::new(1.0, 0.0), &tail(&f, n));
        prop_assert_eq!(split.truncated(f.degree()), f.padded(split.degree()).truncated(f.degree()));
    }

    #[test]
    fn transform_round_trip_and_linearity(f in series(300), g in series(300), re in -2.0..2.0f64) {
        let back = inverse_t(&forward_t(&f));
        for (j, c) in f.coeffs().iter().enumerate() {
            prop_assert!((back.coeffs()[j] - c).norm() < 1e-11);
        }
        prop_assert!(back.coeffs()[f.degree() + 1..].iter().all(|c| c.norm() < 1e-11));
        let a = Complex64::new(re, 0.5);
        let lhs = forward_t(&f.scaled(a).axpy(Complex64::new(1.0, 0.0), &g));
        let (tf, tg) = (forward_t(&f), forward_t(&g));
        for (i, v) in lhs.values().iter().enumerate() {
            let x = tf.values().get(i).copied().unwrap_or_default();
            let y = tg.values().get(i).copied().unwrap_or_default();
            prop_assert!((v - (a * x + y)).norm() < 1e-10);
        }
    }

    #[test]
    fn seminorm_properties(x in coeffs(200), y in coeffs(200), s in -3.0..3.0f64, mu in 0.1..3.0f64) {
        let m = w(mu);
        let nx = seminorm(&x, m);
        let scaled: Vec<Complex64> = x.iter().map(|v| v * s).collect();
        prop_assert!(close(seminorm(&scaled, m), s.abs() * nx, 1e-12));
        let len = x.len().max(y.len());
        let sum: Vec<Complex64> = (0..len)
            .map(|i| x.get(i).copied().unwrap_or_default() + y.get(i).copied().unwrap_or_default())
            .collect();
        prop_assert!(seminorm(&sum, m) <= (nx + seminorm(&y, m)) * (1.0 + 1e-12));
        prop_assert!(x[0].norm() <= nx);
    }

    #[test]
    fn weights_ordered(mu in 0.1..4.0f64, j in 1u64..1_000_000) {
        let m = w(mu);
        prop_assert!(weight_s(m, j + 1) <= weight_s(m, j));
        prop_assert!(weight_s(m, j) <= weight_r(m, j));
        prop_assert!(weight_r(m, j) <= weight_s(m, j) * mu.max(1.0).exp2());
        let lead = 1u64 << (63 - j.leading_zeros());
        prop_assert_eq!(weight_r(m, j), weight_r(m, lead));
    }

    #[test]
    fn kothe_rows_monotone(gamma in 0.05..2.0f64, k in 1u32..40, j in 0u64..100_000) {
        let e = KotheMatrixSpec::Echelon { gamma };
        prop_assert!(kothe_row(e, k, j).unwrap() <= kothe_row(e, k + 1, j).unwrap());
        let c = KotheMatrixSpec::CoEchelon { gamma };
        let k0 = (1.0 / gamma).floor() as u32 + 1 + k;
        prop_assert!(kothe_row(c, k0 + 1, j).unwrap() <= kothe_row(c, k0, j).unwrap());
        prop_assert!(kothe_row(c, k0, j).unwrap() > 0.0);
    }

    #[test]
    fn quadrature_on_admissible(level in 1u32..8, seed in coeffs(64), lo_frac in 0.0..1.0f64) {
        let top = (1i64 << level) - 1;
        let lo = -((lo_frac * top as f64) as i64);
        let len = ((top - lo + 1) as usize).min(seed.len());
        let g = TrigPolynomial { min_freq: lo, coeffs: seed[..len].to_vec() };
        let (mean, b0) = quadrature_identity(&g, level).unwrap();
        prop_assert!((mean - b0).norm() < 1e-12);
    }

    #[test]
    fn json_round_trips(f in series(100)) {
        let text = series_to_json(&f).unwrap();
        prop_assert_eq!(TaylorSeries::new(parse_values(&text).unwrap()).unwrap(), f.clone());
        let x = forward_t(&f);
        prop_assert_eq!(parse_values(&samples_to_json(&x).unwrap()).unwrap(), x.values().to_vec());
    }
}
