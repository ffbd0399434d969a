//! Behaviour every forecaster shares: horizon relativity, idempotent fits,
//! deterministic predictions, dynamic forecasting.

use tsforecast::compose::{EnsembleForecaster, ReducedRegressionForecaster, TransformedTargetForecaster};
use tsforecast::forecasters::{
    ExponentialSmoothing, NaiveForecaster, PolynomialTrendForecaster, ThetaForecaster,
};
use tsforecast::params::params;
use tsforecast::regress::{KNeighborsRegressor, LinearRegression};
use tsforecast::select::SlidingWindowSplitter;
use tsforecast::transforms::{Deseasonalizer, Detrender, Standardizer};
use tsforecast::{update_predict, Error, Forecaster, ForecastingHorizon, TimeSeries};

fn wiggly(n: usize, sp: usize) -> TimeSeries {
    TimeSeries::seasonal(
        (0..n)
            .map(|t| {
                let t = t as f64;
                30.0 + 0.2 * t + 3.0 * (t * 2.0 * std::f64::consts::PI / sp as f64).sin() + (t * 1.3).cos()
            })
            .collect(),
        sp,
    )
    .unwrap()
}

fn zoo() -> Vec<Box<dyn Forecaster>> {
    vec![
        Box::new(NaiveForecaster::last()),
        Box::new(NaiveForecaster::seasonal(4)),
        Box::new(ExponentialSmoothing::ses()),
        Box::new(ExponentialSmoothing::holt()),
        Box::new(ExponentialSmoothing::damped()),
        Box::new(ThetaForecaster::new()),
        Box::new(PolynomialTrendForecaster::new(2)),
        Box::new(ReducedRegressionForecaster::new(Box::new(LinearRegression::default()), 4)),
        Box::new(TransformedTargetForecaster::new(
            vec![
                ("deseasonalize".into(), Box::new(Deseasonalizer::new(4))),
                ("detrend".into(), Box::new(Detrender::default())),
                ("standardize".into(), Box::new(Standardizer::new())),
            ],
            "reduce",
            Box::new(ReducedRegressionForecaster::new(Box::new(KNeighborsRegressor::new(1)), 4)),
        )),
        Box::new(EnsembleForecaster::new(vec![
            ("ses".into(), Box::new(ExponentialSmoothing::ses())),
            ("holt".into(), Box::new(ExponentialSmoothing::holt())),
        ])),
    ]
}

#[test]
fn forecast_length_and_determinism() {
    let y = wiggly(48, 4);
    let fh = ForecastingHorizon::new(vec![1, 2, 5, 9]).unwrap();
    for mut f in zoo() {
        f.fit(&y, None).unwrap();
        assert_eq!(f.cutoff(), Some(47), "{}", f.name());
        let a = f.predict(&fh).unwrap();
        let b = f.predict(&fh).unwrap();
        assert_eq!(a.len(), fh.len());
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a.values), bits(&b.values), "{}", f.name());
    }
}

#[test]
fn fit_is_idempotent() {
    let y = wiggly(48, 4);
    for mut f in zoo() {
        f.fit(&y, None).unwrap();
        let once = f.get_fitted_params().unwrap();
        f.fit(&y, None).unwrap();
        assert_eq!(once, f.get_fitted_params().unwrap(), "{}", f.name());
    }
}

#[test]
fn refit_resets_previous_state() {
    let long = wiggly(48, 4);
    let short = wiggly(20, 4);
    for mut f in zoo() {
        f.fit(&long, None).unwrap();
        f.fit(&short, None).unwrap();
        let mut fresh = f.clone_box();
        fresh.fit(&short, None).unwrap();
        let fh = ForecastingHorizon::ahead(3).unwrap();
        assert_eq!(f.predict(&fh).unwrap(), fresh.predict(&fh).unwrap(), "{}", f.name());
    }
}

#[test]
fn unfitted_errors() {
    for f in zoo() {
        assert_eq!(f.get_fitted_params(), Err(Error::NotFitted), "{}", f.name());
        assert_eq!(
            f.predict(&ForecastingHorizon::ahead(1).unwrap()),
            Err(Error::NotFitted)
        );
    }
}

#[test]
fn set_get_round_trip_and_unknown() {
    for mut f in zoo() {
        let p = f.get_params();
        f.set_params(&p).unwrap();
        assert_eq!(f.get_params(), p, "{}", f.name());
        assert!(matches!(
            f.set_params(&params([("bogus", 1usize)])),
            Err(Error::UnknownParameter(_))
        ));
    }
}

#[test]
fn horizon_relativity_for_naive_family() {
    let y = wiggly(30, 4);
    let head = y.slice(0..26).unwrap();
    let tail = y.slice(26..29).unwrap();
    for mut f in [NaiveForecaster::last(), NaiveForecaster::seasonal(4)] {
        f.fit(&head, None).unwrap();
        // Position 30 is step 5 before the update and step 2 after it.
        let before = f.predict(&ForecastingHorizon::new(vec![5]).unwrap()).unwrap();
        f.update(&tail, false).unwrap();
        let after = f.predict(&ForecastingHorizon::new(vec![2]).unwrap()).unwrap();
        if f.get_params()["strategy"] == "seasonal_last".into() {
            // Seasonal naive repeats the same season either way.
            assert_eq!(before.values[0], head.values()[22]);
            assert_eq!(after.values[0], y.values()[26]);
        } else {
            assert_eq!(before.values[0], head.values()[25]);
            assert_eq!(after.values[0], y.values()[28]);
        }
    }
}

#[test]
fn horizon_relativity_without_new_information() {
    // Updating with values equal to the model's own forecasts leaves the
    // naive predictions of later absolute positions unchanged.
    let y = wiggly(30, 4);
    for mut f in [NaiveForecaster::last(), NaiveForecaster::seasonal(4)] {
        f.fit(&y, None).unwrap();
        let before = f.predict(&ForecastingHorizon::new(vec![3, 6]).unwrap()).unwrap();
        let own = f.predict(&ForecastingHorizon::ahead(2).unwrap()).unwrap();
        f.update(&TimeSeries::with_start(own.values, 30, 4).unwrap(), false)
            .unwrap();
        let after = f.predict(&ForecastingHorizon::new(vec![1, 4]).unwrap()).unwrap();
        assert_eq!(before.values, after.values);
    }
}

#[test]
fn update_predict_naive_previous_observation() {
    let y = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
    let (train, test) = (y.slice(0..2).unwrap(), y.slice(2..6).unwrap());
    let mut f = NaiveForecaster::last();
    f.fit(&train, None).unwrap();
    let cv = SlidingWindowSplitter::expanding(1, ForecastingHorizon::ahead(1).unwrap());
    let out = update_predict(&mut f, &test, &cv, false).unwrap();
    assert_eq!(out.len(), 4);
    for (i, (cutoff, fc)) in out.iter().enumerate() {
        assert_eq!(*cutoff, 1 + i as i64);
        assert_eq!(fc.values, vec![y.values()[1 + i]]);
    }
}

#[test]
fn update_predict_empty_splitter() {
    let y = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
    let mut f = NaiveForecaster::last();
    f.fit(&y.slice(0..2).unwrap(), None).unwrap();
    let cv = SlidingWindowSplitter::new(1, ForecastingHorizon::ahead(3).unwrap());
    let out = update_predict(&mut f, &y.slice(2..3).unwrap(), &cv, false).unwrap();
    assert!(out.is_empty());
}

#[test]
fn update_predict_refit_flag_shapes() {
    let y = wiggly(40, 1);
    let (train, test) = (y.slice(0..30).unwrap(), y.slice(30..40).unwrap());
    let cv = SlidingWindowSplitter::new(1, ForecastingHorizon::ahead(2).unwrap()).with_step_length(2);
    for refit in [false, true] {
        let mut f = ExponentialSmoothing::ses();
        f.fit(&train, None).unwrap();
        let out = update_predict(&mut f, &test, &cv, refit).unwrap();
        assert_eq!(out.len(), 5);
        for (_, fc) in &out {
            assert_eq!(fc.len(), 2);
            assert!(fc.values.iter().all(|v| v.is_finite()));
        }
    }
}

#[test]
fn update_predict_rejects_gap() {
    let y = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
    let mut f = NaiveForecaster::last();
    f.fit(&y, None).unwrap();
    let gap = TimeSeries::with_start(vec![4.0], 5, 1).unwrap();
    let cv = SlidingWindowSplitter::new(1, ForecastingHorizon::ahead(1).unwrap());
    assert_eq!(
        update_predict(&mut f, &gap, &cv, false),
        Err(Error::NonContiguousUpdate { expected: 3, got: 5 })
    );
}

#[test]
fn smoothing_update_without_new_parameters_matches_full_filter() {
    // Updating SES with fixed parameters continues the recursion exactly as
    // if the whole series had been filtered in one go.
    let y = wiggly(40, 1);
    let mut split = ExponentialSmoothing::ses().with_alpha(0.3);
    split.fit(&y.slice(0..25).unwrap(), None).unwrap();
    split.update(&y.slice(25..40).unwrap(), false).unwrap();
    let fixed_level = split.get_fitted_params().unwrap()["level"].as_f64("level").unwrap();
    // Hand recursion with the initial level the first fit chose.
    let l0 = split.params().unwrap().initial_level;
    let level = y.values().iter().fold(l0, |l, v| 0.3 * v + 0.7 * l);
    assert!((fixed_level - level).abs() < 1e-9);
}

#[test]
fn fitted_param_keys() {
    let y = wiggly(40, 4);
    let keys = |f: &mut dyn Forecaster| {
        f.fit(&y, None).unwrap();
        f.get_fitted_params().unwrap().into_keys().collect::<Vec<_>>()
    };
    assert_eq!(keys(&mut ExponentialSmoothing::ses()), vec!["alpha", "level"]);
    assert_eq!(
        keys(&mut PolynomialTrendForecaster::new(2)),
        vec!["coef_0", "coef_1", "coef_2"]
    );
    assert_eq!(
        keys(&mut ThetaForecaster::new()),
        vec!["alpha", "intercept", "level", "slope"]
    );
}
