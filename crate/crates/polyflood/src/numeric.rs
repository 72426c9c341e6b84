//! Scalar root finding and adaptive Runge-Kutta integration.

#[derive(Debug, Clone, PartialEq)]
pub enum NumericError {
    /// The function has the same sign at both bracket ends.
    NoBracket { lo: f64, hi: f64, flo: f64, fhi: f64 },
    /// Non-finite value encountered during iteration.
    NotFinite { x: f64 },
    /// Step size underflowed before reaching the integration target.
    StepUnderflow { x: f64 },
    /// Iteration/step limit exceeded.
    Budget { x: f64 },
}

impl std::fmt::Display for NumericError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NoBracket { lo, hi, flo, fhi } => write!(
                f,
                "no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}"
            ),
            Self::NotFinite { x } => write!(f, "non-finite value near x={x}"),
            Self::StepUnderflow { x } => write!(f, "step underflow at x={x}"),
            Self::Budget { x } => write!(f, "iteration budget exhausted at x={x}"),
        }
    }
}

impl std::error::Error for NumericError {}

/// Bracketed root finding: bisection with Newton acceleration when a
/// derivative is supplied. The bracket is kept valid throughout, so the
/// result is always within `xtol` of a sign change.
pub fn find_root<F, D>(f: F, df: Option<D>, lo: f64, hi: f64, xtol: f64) -> Result<f64, NumericError>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (mut fa, fb) = (f(a), f(b));
    if !fa.is_finite() || !fb.is_finite() {
        return Err(NumericError::NotFinite { x: a });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericError::NoBracket { lo: a, hi: b, flo: fa, fhi: fb });
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        if b - a <= xtol {
            return Ok(0.5 * (a + b));
        }
        // Try a Newton step from the current midpoint estimate; fall back to
        // bisection whenever it leaves the bracket or stalls.
        let mut used_newton = false;
        if let Some(df) = df.as_ref() {
            let fx = f(x);
            if fx == 0.0 {
                return Ok(x);
            }
            if fx.signum() == fa.signum() {
                a = x;
                fa = fx;
            } else {
                b = x;
            }
            let d = df(x);
            if d != 0.0 && d.is_finite() {
                let xn = x - fx / d;
                if xn > a && xn < b {
                    x = xn;
                    used_newton = true;
                }
            }
        }
        if !used_newton {
            x = 0.5 * (a + b);
            let fx = f(x);
            if !fx.is_finite() {
                return Err(NumericError::NotFinite { x });
            }
            if fx == 0.0 {
                return Ok(x);
            }
            if fx.signum() == fa.signum() {
                a = x;
                fa = fx;
            } else {
                b = x;
            }
            x = 0.5 * (a + b);
        }
    }
    Ok(0.5 * (a + b))
}

/// Convenience wrapper for derivative-free bracketed root finding.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64, NumericError> {
    find_root(f, None::<fn(f64) -> f64>, lo, hi, xtol)
}

/// Golden-section minimisation on [lo, hi]. Returns (argmin, min).
pub fn golden_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Options for adaptive Runge-Kutta integration.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    /// Local error tolerance (used both absolutely and relatively).
    pub tol: f64,
    /// Largest step in the independent variable.
    pub max_step: f64,
    /// Hard cap on accepted + rejected steps.
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { tol: crate::tol::ODE_TOL, max_step: 0.5, max_steps: 2_000_000 }
    }
}

/// Outcome of an adaptive integration run.
pub struct OdeResult<const N: usize> {
    pub x: f64,
    pub y: [f64; N],
    /// True when an event function sign change terminated the run.
    pub event_hit: bool,
}

// Cash-Karp embedded 5(4) pair.
const CK_A: [[f64; 5]; 5] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
    [3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0, 0.0, 0.0],
    [-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0, 0.0],
    [
        1631.0 / 55296.0,
        175.0 / 512.0,
        575.0 / 13824.0,
        44275.0 / 110592.0,
        253.0 / 4096.0,
    ],
];
const CK_B5: [f64; 6] = [37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0];
const CK_B4: [f64; 6] = [
    2825.0 / 27648.0,
    0.0,
    18575.0 / 48384.0,
    13525.0 / 55296.0,
    277.0 / 14336.0,
    1.0 / 4.0,
];

fn ck_step<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(
    f: &F,
    x: f64,
    y: &[f64; N],
    h: f64,
) -> ([f64; N], f64) {
    let mut k = [[0.0; N]; 6];
    k[0] = f(x, y);
    for stage in 1..6 {
        let mut yi = *y;
        for (j, kj) in k.iter().enumerate().take(stage) {
            let a = CK_A[stage - 1][j];
            if a != 0.0 {
                for n in 0..N {
                    yi[n] += h * a * kj[n];
                }
            }
        }
        let c = [0.2, 0.3, 0.6, 1.0, 0.875][stage - 1];
        k[stage] = f(x + c * h, &yi);
    }
    let mut y5 = *y;
    let mut err = 0.0f64;
    for n in 0..N {
        let mut d5 = 0.0;
        let mut d4 = 0.0;
        for (j, kj) in k.iter().enumerate() {
            d5 += CK_B5[j] * kj[n];
            d4 += CK_B4[j] * kj[n];
        }
        y5[n] += h * d5;
        let scale = 1.0 + y5[n].abs();
        err = err.max((h * (d5 - d4)).abs() / scale);
    }
    (y5, err)
}

/// Integrate `dy/dx = f(x, y)` from `x0` to `x1` (either direction) with the
/// Cash-Karp adaptive pair.
///
/// `event`, when supplied, is evaluated after every accepted step; the first
/// sign change relative to its initial value is localised by step bisection
/// and the run stops there. `sink` observes every accepted point including
/// the initial and final ones.
pub fn integrate<const N: usize, F, E, S>(
    f: F,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    opts: OdeOptions,
    mut event: Option<E>,
    mut sink: S,
) -> Result<OdeResult<N>, NumericError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    E: FnMut(f64, &[f64; N]) -> f64,
    S: FnMut(f64, &[f64; N]),
{
    let dir = (x1 - x0).signum();
    if dir == 0.0 {
        sink(x0, &y0);
        return Ok(OdeResult { x: x0, y: y0, event_hit: false });
    }
    let mut x = x0;
    let mut y = y0;
    sink(x, &y);
    let mut g_prev = event.as_mut().map(|e| e(x, &y));
    let mut h = dir * opts.max_step.min((x1 - x0).abs() / 16.0).max(1e-12);
    let mut steps = 0usize;
    while (x1 - x) * dir > 0.0 {
        if steps > opts.max_steps {
            return Err(NumericError::Budget { x });
        }
        steps += 1;
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let (y_new, err) = ck_step(&f, x, &y, h);
        if !err.is_finite() {
            return Err(NumericError::NotFinite { x });
        }
        if err > opts.tol {
            let shrink = 0.9 * (opts.tol / err).powf(0.25);
            h *= shrink.max(0.1);
            if h.abs() < 1e-14 * (1.0 + x.abs()) {
                return Err(NumericError::StepUnderflow { x });
            }
            continue;
        }
        let x_new = x + h;
        // Event localisation: bisect the step until the crossing is tight.
        if let (Some(e), Some(gp)) = (event.as_mut(), g_prev) {
            let g_new = e(x_new, &y_new);
            if g_new == 0.0 {
                sink(x_new, &y_new);
                return Ok(OdeResult { x: x_new, y: y_new, event_hit: true });
            }
            if gp != 0.0 && g_new.signum() != gp.signum() {
                let (mut xa, mut ya) = (x, y);
                let (mut xb, mut yb) = (x_new, y_new);
                let mut ga = gp;
                for _ in 0..100 {
                    if (xb - xa).abs() <= 1e-13 * (1.0 + xa.abs()) {
                        break;
                    }
                    let hm = 0.5 * (xb - xa);
                    let (ym, _) = ck_step(&f, xa, &ya, hm);
                    let xm = xa + hm;
                    let gm = e(xm, &ym);
                    if gm == 0.0 {
                        xa = xm;
                        ya = ym;
                        break;
                    }
                    if gm.signum() == ga.signum() {
                        xa = xm;
                        ya = ym;
                        ga = gm;
                    } else {
                        xb = xm;
                        yb = ym;
                    }
                }
                let _ = (xb, yb);
                sink(xa, &ya);
                return Ok(OdeResult { x: xa, y: ya, event_hit: true });
            }
            g_prev = Some(g_new);
        }
        x = x_new;
        y = y_new;
        sink(x, &y);
        let grow = if err > 0.0 { 0.9 * (opts.tol / err).powf(0.2) } else { 5.0 };
        h *= grow.clamp(0.2, 5.0);
        if h.abs() > opts.max_step {
            h = h.signum() * opts.max_step;
        }
    }
    Ok(OdeResult { x, y, event_hit: false })
}

/// Integration without an event function.
pub fn integrate_plain<const N: usize, F, S>(
    f: F,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    opts: OdeOptions,
    sink: S,
) -> Result<OdeResult<N>, NumericError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    S: FnMut(f64, &[f64; N]),
{
    integrate(f, x0, y0, x1, opts, None::<fn(f64, &[f64; N]) -> f64>, sink)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_cubic() {
        let f = |x: f64| x * x * x - 2.0;
        let df = |x: f64| 3.0 * x * x;
        let r = find_root(f, Some(df), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(NumericError::NoBracket { .. })
        ));
    }

    #[test]
    fn golden_finds_parabola_min() {
        let (x, _) = golden_min(|x| (x - 0.3).powi(2), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
    }

    #[test]
    fn integrates_exponential_decay() {
        let r = integrate_plain(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 5.0, OdeOptions::default(), |_, _| {})
            .unwrap();
        assert!((r.y[0] - (-5.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn event_stops_at_crossing() {
        // y' = 1, event at y = 2.5
        let r = integrate(
            |_, _y: &[f64; 1]| [1.0],
            0.0,
            [0.0],
            10.0,
            OdeOptions::default(),
            Some(|_x: f64, y: &[f64; 1]| y[0] - 2.5),
            |_, _| {},
        )
        .unwrap();
        assert!(r.event_hit);
        assert!((r.x - 2.5).abs() < 1e-9);
    }
}
