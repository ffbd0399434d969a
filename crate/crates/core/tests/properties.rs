use proptest::prelude::*;

use tsforecast::compose::{tabularize, EnsembleForecaster, ReducedRegressionForecaster, TransformedTargetForecaster};
use tsforecast::eval::{
    friedman_test, holm_adjust, mase, owa, smape, wilcoxon_signed_rank, EvalRecord, MaseDenominator, RankMatrix,
};
use tsforecast::forecasters::{ExponentialSmoothing, NaiveForecaster, PolynomialTrendForecaster, ThetaForecaster};
use tsforecast::regress::{KNeighborsRegressor, LinearRegression, Regressor};
use tsforecast::select::{ForecastingGridSearch, ParamGrid, SlidingWindowSplitter};
use tsforecast::transforms::{classical_decompose, BoxCox, Deseasonalizer, Detrender, Standardizer, Transformer};
use tsforecast::{Forecaster, ForecastingHorizon, TimeSeries};

fn positive_series(min_len: usize, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1.0f64..100.0, min_len..max_len)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smape_symmetric_bounded_scale_free(
        pairs in prop::collection::vec((0.1f64..1e3, 0.1f64..1e3), 1..20),
        c in 0.01f64..100.0,
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let s = smape(&a, &b).unwrap();
        prop_assert!((0.0..=200.0).contains(&s));
        prop_assert!(close(s, smape(&b, &a).unwrap(), 1e-12));
        let ca: Vec<f64> = a.iter().map(|v| v * c).collect();
        let cb: Vec<f64> = b.iter().map(|v| v * c).collect();
        prop_assert!(close(s, smape(&ca, &cb).unwrap(), 1e-10));
    }

    #[test]
    fn mase_scale_free(
        train in positive_series(10, 30),
        pairs in prop::collection::vec((1.0f64..100.0, 1.0f64..100.0), 1..8),
        c in 0.01f64..100.0,
        m in 1usize..4,
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let scale = |v: &[f64]| v.iter().map(|x| x * c).collect::<Vec<_>>();
        for denom in [MaseDenominator::AsFormula, MaseDenominator::TrainOnly] {
            let base = mase(&a, &b, &train, m, denom);
            let scaled = mase(&scale(&a), &scale(&b), &scale(&train), m, denom);
            match (base, scaled) {
                (Ok(x), Ok(y)) => prop_assert!(close(x, y, 1e-10)),
                (Err(_), Err(_)) => {}
                other => prop_assert!(false, "{other:?}"),
            }
        }
    }

    #[test]
    fn owa_of_reference_is_one(scores in prop::collection::vec((0.1f64..50.0, 0.1f64..5.0), 1..10)) {
        let records: Vec<EvalRecord> = scores
            .iter()
            .enumerate()
            .map(|(i, (s, m))| EvalRecord {
                series_id: format!("S{i}"),
                model: "Naive2".into(),
                dataset: "x".into(),
                smape: *s,
                mase: *m,
                runtime_s: 0.0,
            })
            .collect();
        prop_assert!(close(owa(&records, &records).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn transformer_round_trips(values in positive_series(16, 60)) {
        let y = TimeSeries::seasonal(values, 4).unwrap();
        let steps: Vec<Box<dyn Transformer>> = vec![
            Box::new(BoxCox::new()),
            Box::new(Standardizer::new()),
            Box::new(Deseasonalizer::new(4)),
            Box::new(Detrender::default()),
        ];
        for mut t in steps {
            t.fit(&y).unwrap();
            let back = t.inverse_transform(&t.transform(&y).unwrap()).unwrap();
            for (u, v) in back.values().iter().zip(y.values()) {
                prop_assert!(close(*u, *v, 1e-9), "{}: {u} vs {v}", t.name());
            }
        }
    }

    #[test]
    fn decomposition_recovers_indices(
        raw in prop::collection::vec(0.5f64..1.5, 2..8),
        level in 1.0f64..1e3,
        cycles in 3usize..6,
    ) {
        let sp = raw.len();
        let mean = raw.iter().sum::<f64>() / sp as f64;
        let s: Vec<f64> = raw.iter().map(|v| v / mean).collect();
        let y = TimeSeries::seasonal((0..sp * cycles).map(|t| level * s[t % sp]).collect(), sp).unwrap();
        let got = classical_decompose(&y, sp).unwrap();
        for (a, b) in got.indices.iter().zip(&s) {
            prop_assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn tabularize_reconstructs(values in prop::collection::vec(-50.0f64..50.0, 2..40), w in 1usize..8) {
        prop_assume!(values.len() > w);
        let t = tabularize(&values, w).unwrap();
        prop_assert_eq!(t.x.len(), values.len() - w);
        // First window plus every target gives back the series.
        let mut rebuilt = t.x[0].clone();
        rebuilt.extend(&t.targets);
        prop_assert_eq!(&rebuilt, &values);
        for (i, row) in t.x.iter().enumerate() {
            prop_assert_eq!(row.as_slice(), &values[i..i + w]);
        }
    }

    #[test]
    fn grid_search_matches_brute_force(values in positive_series(12, 30), w in 3usize..7) {
        let y = TimeSeries::new(values.clone()).unwrap();
        let fh = ForecastingHorizon::new(vec![1, 2]).unwrap();
        let degrees = [0usize, 1, 2];
        let grid = ParamGrid::new([("degree", degrees.iter().map(|d| (*d).into()).collect())]).unwrap();
        let cv = SlidingWindowSplitter::new(w, fh.clone());
        let mut gs = ForecastingGridSearch::new(Box::new(PolynomialTrendForecaster::new(1)), grid, cv);
        gs.fit(&y, None).unwrap();
        let report = gs.report().unwrap();

        let n = values.len();
        let mut oracle = Vec::new();
        for &d in &degrees {
            let (mut total, mut count) = (0.0, 0);
            let mut start = 0;
            while start + w + 1 < n {
                let mut f = PolynomialTrendForecaster::new(d);
                f.fit(&TimeSeries::with_start(values[start..start + w].to_vec(), start as i64, 1).unwrap(), None)
                    .unwrap();
                let pred = f.predict(&fh).unwrap().values;
                let truth = [values[start + w], values[start + w + 1]];
                total += smape(&truth, &pred).unwrap();
                count += 1;
                start += 1;
            }
            oracle.push(total / count as f64);
        }
        for (c, o) in report.candidates.iter().zip(&oracle) {
            prop_assert!(close(c.score, *o, 1e-9));
        }
        let best = oracle.iter().enumerate().fold(0, |b, (i, v)| if *v < oracle[b] { i } else { b });
        prop_assert!(close(oracle[report.best_index], oracle[best], 1e-9));
    }

    #[test]
    fn wilcoxon_matches_sign_enumeration(diffs in prop::collection::vec(-6i32..7, 1..11)) {
        let a: Vec<f64> = diffs.iter().map(|d| *d as f64).collect();
        let b = vec![0.0; a.len()];
        let nonzero: Vec<f64> = a.iter().copied().filter(|v| *v != 0.0).collect();
        prop_assume!(!nonzero.is_empty());
        let res = wilcoxon_signed_rank(&a, &b).unwrap();

        // Midranks of |d| by direct counting.
        let abs: Vec<f64> = nonzero.iter().map(|v| v.abs()).collect();
        let ranks: Vec<f64> = abs
            .iter()
            .map(|x| {
                let below = abs.iter().filter(|y| *y < x).count() as f64;
                let equal = abs.iter().filter(|y| *y == x).count() as f64;
                below + (equal + 1.0) / 2.0
            })
            .collect();
        let n = ranks.len();
        let total: f64 = ranks.iter().sum();
        let w_plus: f64 = nonzero.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
        let w = w_plus.min(total - w_plus);
        prop_assert!((res.w - w).abs() < 1e-12);
        let mut hits = 0u32;
        for mask in 0u32..(1 << n) {
            let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            if s <= w + 1e-9 {
                hits += 1;
            }
        }
        let p = (2.0 * hits as f64 / (1u64 << n) as f64).min(1.0);
        prop_assert!(res.exact);
        prop_assert!((res.p - p).abs() < 1e-12, "{} vs {}", res.p, p);
    }

    #[test]
    fn friedman_matches_rank_sum_form(raw in prop::collection::vec(prop::collection::vec(0u8..10, 4), 5)) {
        let ranks: Vec<Vec<f64>> = raw
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let below = row.iter().filter(|y| *y < x).count() as f64;
                        let equal = row.iter().filter(|y| *y == x).count() as f64;
                        below + (equal + 1.0) / 2.0
                    })
                    .collect()
            })
            .collect();
        let (n, k) = (5.0, 4.0);
        let sums: Vec<f64> = (0..4).map(|j| ranks.iter().map(|r| r[j]).sum()).collect();
        let chi2 = 12.0 / (n * k * (k + 1.0)) * sums.iter().map(|s| s * s).sum::<f64>() - 3.0 * n * (k + 1.0);
        let m = RankMatrix {
            models: (0..4).map(|j| format!("m{j}")).collect(),
            series: (0..5).map(|i| format!("s{i}")).collect(),
            ranks,
        };
        let (got, p) = friedman_test(&m).unwrap();
        prop_assert!((got - chi2.max(0.0)).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn holm_is_monotone_and_dominates(p in prop::collection::vec(0.0f64..1.0, 1..12)) {
        let adj = holm_adjust(&p).unwrap();
        for i in 0..p.len() {
            prop_assert!(adj[i] >= p[i] && adj[i] <= 1.0);
            for j in 0..p.len() {
                if p[i] < p[j] {
                    prop_assert!(adj[i] <= adj[j]);
                }
            }
        }
    }

    #[test]
    fn knn_predictions_stay_within_targets(
        rows in prop::collection::vec((prop::collection::vec(-10.0f64..10.0, 3), -5.0f64..5.0), 3..20),
        query in prop::collection::vec(-20.0f64..20.0, 3),
        k in 1usize..4,
    ) {
        let (x, y): (Vec<Vec<f64>>, Vec<f64>) = rows.into_iter().unzip();
        let mut r = KNeighborsRegressor::new(k);
        r.fit(&x, &y).unwrap();
        let v = r.predict(&query).unwrap();
        let (lo, hi) = y.iter().fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(*v), b.max(*v)));
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
    }

    #[test]
    fn linear_regression_minimises_squared_error(
        rows in prop::collection::vec((prop::collection::vec(-10.0f64..10.0, 2), -5.0f64..5.0), 6..20),
        bump in prop::collection::vec(-0.1f64..0.1, 3),
    ) {
        let (x, y): (Vec<Vec<f64>>, Vec<f64>) = rows.into_iter().unzip();
        let mut r = LinearRegression::default();
        r.fit(&x, &y).unwrap();
        let (coef, intercept) = r.coefficients().unwrap();
        let sse = |c: &[f64], b: f64| -> f64 {
            x.iter().zip(&y).map(|(row, t)| {
                let p = b + row.iter().zip(c).map(|(u, v)| u * v).sum::<f64>();
                (p - t).powi(2)
            }).sum()
        };
        let best = sse(coef, intercept);
        let moved: Vec<f64> = coef.iter().zip(&bump).map(|(c, d)| c + d).collect();
        prop_assert!(best <= sse(&moved, intercept + bump[2]) + 1e-9);
        let fitted: Vec<f64> = x.iter().map(|row| r.predict(row).unwrap()).collect();
        let direct: f64 = fitted.iter().zip(&y).map(|(p, t)| (p - t).powi(2)).sum();
        prop_assert!(close(direct, best, 1e-9));
    }

    #[test]
    fn ensemble_ignores_member_order(values in positive_series(12, 40), h in 1usize..6) {
        let y = TimeSeries::new(values).unwrap();
        let members = || -> Vec<(String, Box<dyn Forecaster>)> {
            vec![
                ("naive".into(), Box::new(NaiveForecaster::last())),
                ("ses".into(), Box::new(ExponentialSmoothing::ses())),
                ("theta".into(), Box::new(ThetaForecaster::new())),
            ]
        };
        let mut fwd = EnsembleForecaster::new(members());
        let mut rev_members = members();
        rev_members.reverse();
        let mut rev = EnsembleForecaster::new(rev_members);
        fwd.fit(&y, None).unwrap();
        rev.fit(&y, None).unwrap();
        let fh = ForecastingHorizon::ahead(h).unwrap();
        for (a, b) in fwd.predict(&fh).unwrap().values.iter().zip(rev.predict(&fh).unwrap().values) {
            prop_assert!(close(*a, b, 1e-12));
        }
    }

    #[test]
    fn pipeline_equals_manual_composition(values in positive_series(12, 40), h in 1usize..6) {
        let y = TimeSeries::new(values).unwrap();
        let mut pipe = TransformedTargetForecaster::new(
            vec![
                ("scale".into(), Box::new(Standardizer::new())),
                ("detrend".into(), Box::new(Detrender::default())),
            ],
            "naive",
            Box::new(NaiveForecaster::last()),
        );
        pipe.fit(&y, None).unwrap();
        let fh = ForecastingHorizon::ahead(h).unwrap();
        let got = pipe.predict(&fh).unwrap().values;

        let mut scale = Standardizer::new();
        scale.fit(&y).unwrap();
        let z = scale.transform(&y).unwrap();
        let mut detrend = Detrender::default();
        detrend.fit(&z).unwrap();
        let r = detrend.transform(&z).unwrap();
        let mut naive = NaiveForecaster::last();
        naive.fit(&r, None).unwrap();
        let positions = fh.resolve(y.end());
        let f = naive.predict(&fh).unwrap().values;
        let want = scale.inverse_at(&positions, &detrend.inverse_at(&positions, &f).unwrap()).unwrap();
        for (a, b) in got.iter().zip(&want) {
            prop_assert!(close(*a, *b, 1e-12));
        }
    }

    #[test]
    fn recursive_reduction_continues_ar_process(
        a in -0.6f64..0.6,
        b in -0.3f64..0.3,
        c in 1.0f64..5.0,
        y0 in -20.0f64..20.0,
        y1 in -20.0f64..20.0,
    ) {
        let step = |p1: f64, p2: f64| a * p1 + b * p2 + c;
        let mut v = vec![y0, y1];
        for _ in 0..30 {
            let n = v.len();
            v.push(step(v[n - 1], v[n - 2]));
        }
        let (train, future) = v.split_at(24);
        // Skip paths that have already settled on the fixed point.
        let spread = train[14..].iter().fold(0.0f64, |m, x| m.max((x - train[23]).abs()));
        prop_assume!(spread > 1e-3);
        let mut f = ReducedRegressionForecaster::new(Box::new(LinearRegression::default()), 2);
        f.fit(&TimeSeries::new(train.to_vec()).unwrap(), None).unwrap();
        let fc = f.predict(&ForecastingHorizon::ahead(6).unwrap()).unwrap().values;
        for (p, t) in fc.iter().zip(future) {
            prop_assert!(close(*p, *t, 1e-6), "{p} vs {t}");
        }
    }

    #[test]
    fn holt_is_affine_equivariant(values in positive_series(12, 40), s in 0.5f64..20.0, shift in -50.0f64..50.0) {
        let y = TimeSeries::new(values.clone()).unwrap();
        let moved = TimeSeries::new(values.iter().map(|v| s * v + shift).collect()).unwrap();
        let fh = ForecastingHorizon::ahead(5).unwrap();
        let mut f = ExponentialSmoothing::holt().with_alpha(0.4).with_beta(0.2);
        let mut g = f.clone();
        f.fit(&y, None).unwrap();
        g.fit(&moved, None).unwrap();
        let base = f.predict(&fh).unwrap().values;
        for (u, v) in base.iter().zip(g.predict(&fh).unwrap().values) {
            prop_assert!(close(s * u + shift, v, 1e-6), "{} vs {v}", s * u + shift);
        }
    }

    #[test]
    fn damped_steps_shrink_geometrically(values in positive_series(12, 40), phi in 0.2f64..0.95) {
        let y = TimeSeries::new(values).unwrap();
        let mut f = ExponentialSmoothing::damped().with_alpha(0.3).with_beta(0.1).with_phi(phi);
        f.fit(&y, None).unwrap();
        let (_, trend) = f.states().unwrap();
        let fc = f.predict(&ForecastingHorizon::ahead(30).unwrap()).unwrap().values;
        for h in 1..30 {
            let inc = fc[h] - fc[h - 1];
            prop_assert!((inc - phi.powi(h as i32 + 1) * trend).abs() < 1e-9 * (1.0 + trend.abs()));
        }
    }
}
