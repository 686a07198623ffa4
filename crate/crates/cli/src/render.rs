//! Human-readable report summary.

use std::fmt::Write as _;

use qrng_core::analysis::{TestBlock, TestReport};

fn status<P, S>(t: &TestBlock<P, S>) -> &'static str {
    match (t.error.is_some(), t.pass) {
        (true, _) => "NOT RUN",
        (false, Some(true)) => "pass",
        (false, Some(false)) => "FAIL",
        (false, None) => "-",
    }
}

fn line<P, S>(out: &mut String, name: &str, t: &TestBlock<P, S>, detail: impl FnOnce(&S) -> String) {
    let text = match (&t.statistics, &t.error) {
        (Some(s), _) => detail(s),
        (None, Some(e)) => e.clone(),
        (None, None) => String::new(),
    };
    writeln!(out, "{name:<10} {:<8} {text}", status(t)).unwrap();
}

pub fn summary(report: &TestReport) -> String {
    let mut out = String::new();
    let p = &report.provenance;
    writeln!(out, "input: {} ({} bits)", p.origin, p.bit_count).unwrap();
    if let Some(n) = p.transitions {
        writeln!(out, "signal: {n} transitions over {:e} s", p.signal_duration.unwrap_or(0.0)).unwrap();
    }
    line(&mut out, "bias", &report.bias, |b| {
        format!("ones fraction {:.6} ± {:.6}", b.fraction, b.std_error)
    });
    line(&mut out, "blocks", &report.blocks, |d| {
        format!(
            "{}-bit mean {:.4} (ideal {}), entropy {:.6} bits",
            d.block_length,
            d.mean,
            d.ideal_mean(),
            d.entropy
        )
    });
    line(&mut out, "runs", &report.runs, |r| {
        let fmt = |s: Option<qrng_core::analysis::RunSlope>| {
            s.map_or("n/a".to_string(), |s| format!("{:.5} ± {:.5}", s.slope, s.std_error))
        };
        let mut text = format!(
            "log10 slope zeros {}, ones {} (ideal -0.30103)",
            fmt(r.distribution.zero_slope),
            fmt(r.distribution.one_slope)
        );
        if let (Some(z), Some(o)) = (r.implied_ones_from_zero_runs, r.implied_ones_from_one_runs) {
            write!(text, "; implied P(1) {z:.4} / {o:.4}").unwrap();
        }
        text
    });
    line(&mut out, "pi", &report.pi, |p| {
        format!("{:.5} ± {:.5} from {} points", p.estimate, p.std_error, p.points)
    });
    if let Some(t) = &report.acf {
        line(&mut out, "acf", t, |a| {
            format!(
                "tau_ac {:.3} ± {:.3} ns (1/2R = {:.3} ns)",
                a.fit.autocorrelation_time * 1e9,
                a.fit.autocorrelation_time_se * 1e9,
                a.expected_autocorrelation_time * 1e9
            )
        });
    }
    if let Some(t) = &report.intervals {
        line(&mut out, "intervals", t, |s| {
            format!(
                "T0 {:.3} ± {:.3} ns (mean excess {:.3} ns, {} intervals)",
                s.fit.mean_interval * 1e9,
                s.fit.mean_interval_se * 1e9,
                s.expected_mean_interval * 1e9,
                s.histogram.intervals
            )
        });
    }
    out
}
