use proptest::prelude::*;
use qrng_core::model::{dwell_limited_toggle_rate, transition_count_std_dev, Synthesizer};
use qrng_core::{
    generate_detections, synthesize_divider_xor_signal, synthesize_toggle_signal, theoretical_rates, DetectionEvent,
    DetectionStream, Detector, Device, SourceConfig, Variant,
};

#[test]
fn toggle_rate_law() {
    for (i, p) in [0.3, 0.5, 0.7].into_iter().enumerate() {
        let rate = 20e6;
        let duration = 20e-3;
        let stream = generate_detections(&SourceConfig::ideal(rate, p, 10 + i as u64), duration).unwrap();
        let seq = synthesize_toggle_signal(&stream, false, 0.0, 0.0).unwrap();
        assert!(seq.len() >= 100_000);
        let expected = theoretical_rates(rate, p).unwrap().toggle_rate * duration;
        let sd = transition_count_std_dev(Variant::Toggle, rate, p, duration);
        let z = (seq.len() as f64 - expected) / sd;
        assert!(z.abs() <= 4.0, "p={p}: z={z}");
    }
}

#[test]
fn divider_xor_equidistribution() {
    for (i, p) in [0.5, 0.7, 0.9].into_iter().enumerate() {
        let (rate, duration) = (1e6, 0.1);
        let stream = generate_detections(&SourceConfig::ideal(rate, p, 20 + i as u64), duration).unwrap();
        let seq = synthesize_divider_xor_signal(&stream, 0.0).unwrap();
        assert_eq!(seq.len(), stream.len());
        let sigma = 1.0 / (2.0 * (rate * duration).sqrt());
        assert!((seq.time_in_one() - 0.5).abs() <= 4.0 * sigma, "p={p}: {}", seq.time_in_one());
    }
}

#[test]
fn dwell_limited_rate() {
    let config = SourceConfig {
        min_dwell: 3e-9,
        internal_delay: 0.0,
        ..SourceConfig::ideal(52e6, 0.5, 3)
    };
    let duration = 10e-3;
    let seq = Device::new(config, Variant::Toggle, false).unwrap().signal(duration).unwrap();
    let expected = dwell_limited_toggle_rate(Variant::Toggle, 52e6, 0.5, 3e-9).unwrap();
    let sd = transition_count_std_dev(Variant::Toggle, 52e6, 0.5, duration);
    let z = (seq.len() as f64 - expected * duration) / sd;
    assert!(z.abs() <= 4.0, "z={z}");
}

#[test]
fn balanced_split_fraction() {
    let stream = generate_detections(&SourceConfig::ideal(52e6, 0.5, 4), 10e-3).unwrap();
    let n = stream.len() as f64;
    let sigma = (0.25 / n).sqrt();
    let d1 = stream.count(Detector::D1) as f64 / n;
    assert!((d1 - 0.5).abs() <= 4.0 * sigma);
    assert!((n - 520_000.0).abs() <= 4.0 * 520_000f64.sqrt());
}

#[test]
fn determinism() {
    let config = SourceConfig {
        dead_time: 5e-9,
        min_dwell: 3e-9,
        ..SourceConfig::default()
    };
    for variant in [Variant::Toggle, Variant::DividerXor] {
        let device = Device::new(config, variant, false).unwrap();
        assert_eq!(device.signal(1e-3).unwrap(), device.signal(1e-3).unwrap());
    }
    let a = generate_detections(&config, 1e-3).unwrap();
    let b = generate_detections(&SourceConfig { seed: 2, ..config }, 1e-3).unwrap();
    assert_ne!(a, b);
}

fn events() -> impl Strategy<Value = DetectionStream> {
    prop::collection::vec((1u32..50_000, any::<bool>()), 0..200).prop_map(|raw| {
        let mut t = 0.0;
        let events = raw
            .into_iter()
            .map(|(gap, d2)| {
                t += gap as f64 * 1e-11;
                DetectionEvent {
                    time: t,
                    detector: if d2 { Detector::D2 } else { Detector::D1 },
                }
            })
            .collect();
        DetectionStream::new(events, t + 1e-9).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dead_time_holds(rate in 1e6f64..1e8, dead in 0f64..50e-9, seed in any::<u64>()) {
        let config = SourceConfig { dead_time: dead, ..SourceConfig::ideal(rate, 0.5, seed) };
        let stream = generate_detections(&config, 20e-6).unwrap();
        for det in [Detector::D1, Detector::D2] {
            let times: Vec<f64> = stream.events().iter().filter(|e| e.detector == det).map(|e| e.time).collect();
            for w in times.windows(2) {
                prop_assert!(w[1] - w[0] >= dead);
            }
        }
    }

    #[test]
    fn min_dwell_holds(stream in events(), dwell in 0f64..100e-9, delay in 0f64..100e-9, init in any::<bool>()) {
        let seq = synthesize_toggle_signal(&stream, init, dwell, delay).unwrap();
        for w in seq.transition_times().windows(2) {
            prop_assert!(w[1] - w[0] >= dwell);
        }
        let xor = synthesize_divider_xor_signal(&stream, dwell).unwrap();
        for w in xor.transition_times().windows(2) {
            prop_assert!(w[1] - w[0] >= dwell);
        }
        prop_assert!((seq.duration() - stream.duration() - delay).abs() < 1e-15);
    }

    #[test]
    fn absorption(stream in events(), init in any::<bool>()) {
        // Every emitted transition moves to the state its event forces, so
        // no two consecutive transitions go to the same state.
        let mut synth = Synthesizer::new(Variant::Toggle, init, 0.0, 0.0).unwrap();
        let mut state = init;
        let mut last_target = None;
        for e in stream.events() {
            let forced = e.detector == Detector::D2;
            if synth.feed(*e).is_some() {
                prop_assert_ne!(forced, state);
                prop_assert_ne!(Some(forced), last_target);
                state = forced;
                last_target = Some(forced);
            }
        }
        let seq = synthesize_toggle_signal(&stream, init, 0.0, 0.0).unwrap();
        prop_assert_eq!(seq.final_state(), state);
    }

    #[test]
    fn xor_flips_on_every_event(stream in events()) {
        let seq = synthesize_divider_xor_signal(&stream, 0.0).unwrap();
        let times: Vec<f64> = stream.events().iter().map(|e| e.time).collect();
        prop_assert_eq!(seq.transition_times(), &times[..]);
    }

    #[test]
    fn rate_relations(rate in 1.0f64..1e9, p in 0.0f64..=1.0) {
        let r = theoretical_rates(rate, p).unwrap();
        prop_assert!((r.toggle_rate - 2.0 * rate * p * (1.0 - p)).abs() <= 1e-9 * rate);
        if r.toggle_rate > 0.0 {
            prop_assert!((r.autocorrelation_time * 2.0 * r.toggle_rate - 1.0).abs() < 1e-12);
            prop_assert!((r.mean_interval * r.toggle_rate - 1.0).abs() < 1e-12);
        }
    }
}
