//! Cross-checks of the closed-form traces against the independent oracles for
//! a single flux and coupling.

use std::f64::consts::PI;

use hoftrace_core::dos::integrate_point_traces_exact;
use hoftrace_core::kreft::{chambers_nested, chambers_recursive};
use hoftrace_core::oracle::{
    bz_trace, eigenvalues, point_spectrum_roots, walk_trace, SecularMatrix, Sign, DEFAULT_WALK_CAP,
};
use hoftrace_core::traces::{
    almost_mathieu_trace, full_trace, midband_trace, pm_s_trace, pm_s_trace_by_power_sums,
    trace_series, TraceKind,
};
use hoftrace_core::{Coupling, Flux};
use rayon::prelude::*;

use crate::output::CheckRow;

struct Tally {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tally {
            name,
            tolerance,
            cases: 0,
            worst: 0.0,
        }
    }

    /// Relative deviation with the scale floored at 1.
    fn add(&mut self, got: f64, want: f64) {
        let dev = (got - want).abs() / want.abs().max(1.0);
        self.cases += 1;
        // NaN must register as a failure
        if dev.is_nan() || dev > self.worst {
            self.worst = dev;
        }
    }

    fn row(self) -> CheckRow {
        CheckRow {
            name: self.name.to_string(),
            passed: self.worst <= self.tolerance,
            cases: self.cases,
            max_deviation: self.worst,
            tolerance: self.tolerance,
        }
    }
}

fn even_orders(n_max: u32) -> impl Iterator<Item = u32> {
    (0..=n_max).step_by(2)
}

/// Runs every check; trace checks cover even orders up to `n_max`.
pub fn run_checks(flux: Flux, coupling: Coupling, n_max: u32) -> Vec<CheckRow> {
    let q = flux.q();
    let lambda = coupling.lambda();
    let poly = chambers_recursive(flux, coupling);
    let mut rows = Vec::new();

    let mut t = Tally::new("recursive-vs-nested-coefficients", 1e-9);
    let nested = chambers_nested(flux, coupling);
    for (a, b) in poly.coefficients().iter().zip(nested.coefficients()) {
        t.add(*b, *a);
    }
    rows.push(t.row());

    // a(2) only exists for q ≥ 2
    let mut t = Tally::new("second-coefficient", 1e-9);
    if q >= 2 {
        t.add(poly.a(1), q as f64 * (1.0 + (lambda / 2.0).powi(2)));
    }
    rows.push(t.row());

    let mut t = Tally::new("chambers-identity", 1e-8);
    let lt = coupling.lambda_tilde(q);
    for i in 0..7 {
        for j in 0..7 {
            let kx = -PI + 2.0 * PI * (i as f64 + 0.31) / 7.0;
            let ky = -PI + 2.0 * PI * (j as f64 + 0.73) / 7.0;
            let want = 2.0 * ((q as f64 * kx).cos() + lt * (q as f64 * ky).cos());
            for e in eigenvalues(&SecularMatrix::new(flux, coupling, kx, ky)) {
                t.add(poly.eval_big_e(e), want);
            }
        }
    }
    rows.push(t.row());

    let formula: Vec<(u32, f64)> = even_orders(n_max)
        .map(|n| (n, full_trace(&poly, n)))
        .collect();

    let mut t = Tally::new("partition-sum-vs-brillouin-zone", 1e-8);
    let bz: Vec<f64> = formula
        .par_iter()
        .map(|&(n, _)| bz_trace(flux, coupling, n, n as usize + 1))
        .collect();
    for ((_, want), got) in formula.iter().zip(bz) {
        t.add(got, *want);
    }
    rows.push(t.row());

    let mut t = Tally::new("partition-sum-vs-walks", 1e-8);
    for &(n, want) in formula.iter().filter(|(n, _)| *n <= DEFAULT_WALK_CAP) {
        let got = walk_trace(flux, coupling, n).expect("n within the walk cap");
        t.add(got, want);
    }
    rows.push(t.row());

    let mut t = Tally::new("aubry-duality", 1e-9);
    for &(n, want) in &formula {
        let dual = almost_mathieu_trace(flux, coupling.dual(), n);
        t.add((lambda / 2.0).powi(n as i32) * dual, want);
    }
    rows.push(t.row());

    let range = poly.s_range();
    let s_values = [0.0, 0.25 * range, 0.5 * range, range];

    let mut t = Tally::new("point-traces-vs-newton-power-sums", 1e-9);
    for n in even_orders(n_max) {
        for s in s_values {
            t.add(
                pm_s_trace_by_power_sums(&poly, n, s),
                pm_s_trace(&poly, n, s),
            );
        }
    }
    rows.push(t.row());

    let mut t = Tally::new("point-traces-vs-roots", 1e-8);
    for s in s_values {
        let plus = point_spectrum_roots(flux, coupling, s, Sign::Plus).expect("s within range");
        let minus = point_spectrum_roots(flux, coupling, s, Sign::Minus).expect("s within range");
        for n in even_orders(n_max) {
            let sum: f64 = plus.iter().chain(&minus).map(|e| e.powi(n as i32)).sum();
            t.add(sum / (2.0 * q as f64), pm_s_trace(&poly, n, s));
        }
    }
    rows.push(t.row());

    let mut t = Tally::new("mid-band-at-s-zero", 0.0);
    for n in even_orders(n_max) {
        t.add(pm_s_trace(&poly, n, 0.0), midband_trace(&poly, n));
    }
    rows.push(t.row());

    let mut t = Tally::new("point-trace-closure", 1e-12);
    for &(n, want) in &formula {
        t.add(integrate_point_traces_exact(flux, coupling, n), want);
    }
    rows.push(t.row());

    let mut t = Tally::new("generating-functions", 1e-10);
    let n_series = n_max as usize;
    let full = trace_series(flux, coupling, TraceKind::FullQuantum, None, n_series);
    let mid = trace_series(flux, coupling, TraceKind::MidBand, None, n_series);
    let pm = trace_series(
        flux,
        coupling,
        TraceKind::PlusMinusS,
        Some(0.5 * range),
        n_series,
    );
    for n in 0..=n_max {
        let i = n as usize;
        t.add(full[i], full_trace(&poly, n));
        t.add(mid[i], midband_trace(&poly, n));
        t.add(pm[i], pm_s_trace(&poly, n, 0.5 * range));
    }
    rows.push(t.row());

    rows
}
