//! Dormand-Prince 5(4) with Hairer's PI step control and 4th-order dense
//! output, on fixed-size real state arrays.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
// step-size ratio bounds: 1/FAC_MIN_INV <= h_new/h <= 1/FAC_MAX_INV
const FAC_MIN_INV: f64 = 5.0;
const FAC_MAX_INV: f64 = 0.1;

#[derive(Clone, Copy, Debug)]
pub(crate) struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct DenseSolution<const N: usize> {
    pub samples: Vec<[f64; N]>,
    pub accepted: usize,
    pub rejected: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn rms_scaled<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    let s: f64 = (0..N).map(|i| (v[i] / scale[i]).powi(2)).sum();
    (s / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(
    rhs: &mut F,
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    ctrl: &StepControl,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let sk = y0.map(|y| ctrl.atol + ctrl.rtol * y.abs());
    let dnf = rms_scaled(f0, &sk);
    let dny = rms_scaled(y0, &sk);
    let mut h = if dnf <= 1e-5 || dny <= 1e-5 {
        1e-6
    } else {
        0.01 * dny / dnf
    };
    h = h.min(ctrl.h_max);
    let y1 = axpy(y0, h, &[(1.0, f0)]);
    let f1 = rhs(t0 + h, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let der2 = rms_scaled(&diff, &sk) / h;
    let der12 = der2.max(dnf);
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(ctrl.h_max)
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t_end` and samples the dense
/// interpolant at `outputs` (sorted, within `[t0, t_end]`). `on_accept` sees
/// every accepted step endpoint and may abort the run.
pub(crate) fn solve<const N: usize, F, G>(
    rhs: &mut F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    outputs: &[f64],
    ctrl: &StepControl,
    on_accept: &mut G,
) -> Result<DenseSolution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    G: FnMut(f64, &[f64; N]) -> Result<()>,
{
    let mut samples = Vec::with_capacity(outputs.len());
    let mut next_out = 0;
    while next_out < outputs.len() && outputs[next_out] <= t0 {
        samples.push(y0);
        next_out += 1;
    }
    let mut accepted = 0;
    let mut rejected = 0;
    if t_end <= t0 {
        return Ok(DenseSolution {
            samples,
            accepted,
            rejected,
        });
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = initial_step(rhs, t, &y, &k1, ctrl);
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;
    let mut steps = 0usize;

    loop {
        if steps >= ctrl.max_steps {
            return Err(Error::MaxSteps {
                t,
                max_steps: ctrl.max_steps,
            });
        }
        if h < 10.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t, h });
        }
        let last = t + 1.01 * h >= t_end;
        if last {
            h = t_end - t;
        }
        steps += 1;

        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            t + C4 * h,
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let t_new = if last { t_end } else { t + h };
        let k7 = rhs(t_new, &y_new);

        let err_vec = axpy(
            &[0.0; N],
            h,
            &[
                (E1, &k1),
                (E3, &k3),
                (E4, &k4),
                (E5, &k5),
                (E6, &k6),
                (E7, &k7),
            ],
        );
        let mut scale = [0.0; N];
        for i in 0..N {
            scale[i] = ctrl.atol + ctrl.rtol * y[i].abs().max(y_new[i].abs());
        }
        let err = rms_scaled(&err_vec, &scale);
        if !err.is_finite() {
            return Err(Error::NonFinite);
        }

        let fac11 = err.powf(EXPO1);
        let fac = (fac11 / fac_old.powf(BETA) / SAFETY).clamp(FAC_MAX_INV, FAC_MIN_INV);

        if err <= 1.0 {
            accepted += 1;
            fac_old = err.max(1e-4);

            while next_out < outputs.len() && outputs[next_out] <= t_new {
                let to = outputs[next_out];
                if to == t_new {
                    samples.push(y_new);
                } else {
                    samples.push(dense_eval(
                        &y,
                        &y_new,
                        h,
                        [&k1, &k3, &k4, &k5, &k6, &k7],
                        (to - t) / h,
                    ));
                }
                next_out += 1;
            }
            on_accept(t_new, &y_new)?;

            if last {
                break;
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            let mut h_new = (h / fac).min(ctrl.h_max);
            if last_rejected {
                h_new = h_new.min(h);
            }
            h = h_new;
            last_rejected = false;
        } else {
            rejected += 1;
            last_rejected = true;
            h /= FAC_MIN_INV.min(fac11 / SAFETY);
        }
    }

    // outputs beyond t_end are a caller error; anything left is at t_end
    while next_out < outputs.len() {
        samples.push(y);
        next_out += 1;
    }
    Ok(DenseSolution {
        samples,
        accepted,
        rejected,
    })
}

fn dense_eval<const N: usize>(
    y: &[f64; N],
    y_new: &[f64; N],
    h: f64,
    k: [&[f64; N]; 6],
    theta: f64,
) -> [f64; N] {
    let [k1, k3, k4, k5, k6, k7] = k;
    let theta1 = 1.0 - theta;
    let mut out = [0.0; N];
    for i in 0..N {
        let ydiff = y_new[i] - y[i];
        let bspl = h * k1[i] - ydiff;
        let r4 = ydiff - h * k7[i] - bspl;
        let r5 = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        out[i] = y[i] + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
    }
    out
}
