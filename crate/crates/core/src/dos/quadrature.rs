//! One-dimensional quadrature: adaptive Gauss-Kronrod (7/15 points) and a
//! fixed-node tanh-sinh rule for integrands with endpoint singularities.

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = (fc * WGK[7]).abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment { a, b, value, error }
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Bisects the segment with the largest error estimate until the total error
/// is below `max(epsabs, epsrel·|value|)` or `limit` segments exist. The rule
/// never evaluates `f` at the endpoints.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    epsabs: f64,
    epsrel: f64,
    limit: usize,
) -> QuadResult {
    let mut segments = vec![gk15(&f, a, b)];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let tol = epsabs.max(epsrel * value.abs());
        if error <= tol || segments.len() >= limit.max(1) {
            return QuadResult {
                value,
                abs_error: error,
                intervals: segments.len(),
            };
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // cannot split further; keep the estimate and stop refining it
            segments.push(Segment { error: 0.0, ..seg });
            continue;
        }
        segments.push(gk15(&f, seg.a, mid));
        segments.push(gk15(&f, mid, seg.b));
    }
}

/// Minimum number of abscissae per panel accepted by [`tanh_sinh`].
pub const TANH_SINH_MIN_NODES: usize = 16;

const TANH_SINH_T_MAX: f64 = 3.0;

/// Fixed-node tanh-sinh rule on `[a, b]` with `nodes` abscissae (at least
/// [`TANH_SINH_MIN_NODES`]). Nodes that round onto an endpoint are dropped,
/// so `f` may be infinite there.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, nodes: usize) -> f64 {
    let nodes = nodes.max(TANH_SINH_MIN_NODES);
    let half = 0.5 * (b - a);
    let h = 2.0 * TANH_SINH_T_MAX / (nodes - 1) as f64;
    let mut acc = 0.0;
    for i in 0..nodes {
        let t = -TANH_SINH_T_MAX + h * i as f64;
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        // 1 - tanh|u| without cancellation
        let comp = 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        let x = if u < 0.0 {
            a + half * comp
        } else {
            b - half * comp
        };
        if x <= a.min(b) || x >= a.max(b) || comp == 0.0 {
            continue;
        }
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        acc += w * f(x);
    }
    acc * half * h
}
