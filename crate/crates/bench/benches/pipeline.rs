use criterion::{black_box, criterion_group, criterion_main, Criterion, Throughput};
use qrng_core::analysis::{autocorrelation, block_distribution, monte_carlo_pi, run_length_counts};
use qrng_core::{
    generate_detections, run_battery, sample_signal, synthesize_toggle_signal, BatteryOptions, Device, SamplePlan,
    SourceConfig, Tolerances, Variant,
};

fn model(c: &mut Criterion) {
    let config = SourceConfig::default();
    let duration = 1e-3;
    let mut g = c.benchmark_group("model");
    g.throughput(Throughput::Elements((config.detection_rate * duration) as u64));
    g.bench_function("generate_detections_1ms", |b| {
        b.iter(|| generate_detections(black_box(&config), duration).unwrap())
    });
    let stream = generate_detections(&config, duration).unwrap();
    g.bench_function("synthesize_toggle_1ms", |b| {
        b.iter(|| synthesize_toggle_signal(black_box(&stream), false, 3e-9, 75e-9).unwrap())
    });
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let device = Device::new(SourceConfig::default(), Variant::Toggle, false).unwrap();
    let plan = SamplePlan::new(1e-6, 0.0, 100_000).unwrap();
    let seq = device.signal(plan.last_instant().unwrap()).unwrap();
    let mut g = c.benchmark_group("sampler");
    g.throughput(Throughput::Elements(plan.count));
    g.bench_function("sample_signal_1e5", |b| b.iter(|| sample_signal(black_box(&seq), &plan).unwrap()));
    g.bench_function("device_sample_streaming_1e5", |b| b.iter(|| device.sample(black_box(&plan)).unwrap()));
    g.finish();
}

fn analysis(c: &mut Criterion) {
    let device = Device::new(SourceConfig::default(), Variant::Toggle, false).unwrap();
    let bits = device.sample(&SamplePlan::new(1e-6, 0.0, 1_000_000).unwrap()).unwrap();
    let mut g = c.benchmark_group("analysis");
    g.throughput(Throughput::Elements(bits.len()));
    g.bench_function("blocks_8", |b| b.iter(|| block_distribution(black_box(&bits), 8).unwrap()));
    g.bench_function("runs", |b| b.iter(|| run_length_counts(black_box(&bits)).unwrap()));
    g.bench_function("pi_16", |b| b.iter(|| monte_carlo_pi(black_box(&bits), 16).unwrap()));

    let trace: Vec<f64> = bits.iter().take(150_000).map(f64::from).collect();
    g.bench_function("acf_150k_200", |b| b.iter(|| autocorrelation(black_box(&trace), 2e-9, 200).unwrap()));

    let seq = device.signal(1e-3).unwrap();
    let options = BatteryOptions::default();
    g.sample_size(10);
    g.bench_function("battery_1e6_bits", |b| {
        b.iter(|| run_battery(black_box(&bits), Some(&seq), &options, &Tolerances::default()))
    });
    g.finish();
}

criterion_group!(benches, model, sampling, analysis);
criterion_main!(benches);
