//! Instantaneous eigensystems tracked along a time grid.
//!
//! Phases follow the discrete parallel-transport gauge: the overlap of each
//! band with itself between neighbouring grid points is real and positive,
//! the discrete counterpart of `<n|n_dot> = 0`. Bands are continued by
//! overlap, not by energy order.

use crate::error::{Error, Result};
use crate::models::Hamiltonian;
use crate::two_level::{inner, norm3, HermitianOperator2, Ket, C64};

/// Consecutive same-band overlaps below this mean the grid cannot resolve
/// the eigenbasis motion.
pub const MIN_CONTINUATION_OVERLAP: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigensystem {
    /// Ascending.
    pub energies: [f64; 2],
    pub states: [Ket; 2],
}

/// Closed-form eigensystem of `a0 + a . sigma`: energies `a0 -+ |a|`.
///
/// With `a_hat` at polar angle `alpha` and azimuth `phi`, the upper state is
/// `(cos(alpha/2), e^{i phi} sin(alpha/2))` and the lower one is
/// `(-e^{-i phi} sin(alpha/2), cos(alpha/2))`. For `a = 0` the
/// computational basis is returned.
pub fn instantaneous_eigensystem(h: &HermitianOperator2) -> Eigensystem {
    let (a0, a) = h.pauli_components();
    let r = norm3(&a);
    if r == 0.0 {
        return Eigensystem {
            energies: [a0, a0],
            states: [
                Ket::new(C64::from(1.0), C64::from(0.0)),
                Ket::new(C64::from(0.0), C64::from(1.0)),
            ],
        };
    }
    let [x, y, z] = a.map(|c| c / r);
    let rho = x.hypot(y);
    // half-angle cosine/sine, each from the better-conditioned branch
    let (c, s) = if z >= 0.0 {
        let c = ((1.0 + z) / 2.0).sqrt();
        (c, rho / (2.0 * c))
    } else {
        let s = ((1.0 - z) / 2.0).sqrt();
        (rho / (2.0 * s), s)
    };
    let azimuth = if rho > 0.0 {
        C64::new(x / rho, y / rho)
    } else {
        C64::from(1.0)
    };
    let upper = Ket::new(C64::from(c), azimuth * s);
    let lower = Ket::new(-azimuth.conj() * s, C64::from(c));
    Eigensystem {
        energies: [a0 - r, a0 + r],
        states: [lower, upper],
    }
}

/// Eigenvalues and gauge-fixed eigenvectors sampled on a grid.
#[derive(Clone, Debug)]
pub struct EigenFrame {
    times: Vec<f64>,
    energies: Vec<[f64; 2]>,
    states: Vec<[Ket; 2]>,
    gap_min: f64,
}

/// `<m_dot(t_k)|0(t_k)>`; `one_sided` marks a boundary sample computed with
/// a one-sided difference (second order, first order on a two-point grid).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling {
    pub value: C64,
    pub one_sided: bool,
}

pub(crate) fn validate_grid(grid: &[f64], needed: usize) -> Result<()> {
    if grid.len() < needed {
        return Err(Error::GridTooShort {
            needed,
            got: grid.len(),
        });
    }
    if let Some(index) = grid.iter().position(|t| !t.is_finite()) {
        return Err(Error::GridNotIncreasing { index });
    }
    if let Some(index) = grid.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::GridNotIncreasing { index: index + 1 });
    }
    Ok(())
}

pub fn build_eigenframe<H: Hamiltonian>(model: &H, grid: &[f64]) -> Result<EigenFrame> {
    validate_grid(grid, 2)?;
    let mut energies = Vec::with_capacity(grid.len());
    let mut states: Vec<[Ket; 2]> = Vec::with_capacity(grid.len());

    for (k, &t) in grid.iter().enumerate() {
        let Eigensystem {
            energies: mut e,
            states: mut v,
        } = instantaneous_eigensystem(&model.at(t));
        if let Some(prev) = states.last() {
            let direct = inner(&prev[0], &v[0]).norm() + inner(&prev[1], &v[1]).norm();
            let crossed = inner(&prev[0], &v[1]).norm() + inner(&prev[1], &v[0]).norm();
            if crossed > direct {
                v.swap(0, 1);
                e.swap(0, 1);
            }
            for band in 0..2 {
                let overlap = inner(&prev[band], &v[band]);
                let magnitude = overlap.norm();
                if magnitude < MIN_CONTINUATION_OVERLAP {
                    return Err(Error::GridTooCoarse {
                        index: k,
                        overlap: magnitude,
                    });
                }
                v[band] *= overlap.conj() / magnitude;
            }
        }
        energies.push(e);
        states.push(v);
    }

    let gap_min = energies
        .iter()
        .map(|e| (e[1] - e[0]).abs())
        .fold(f64::INFINITY, f64::min);
    Ok(EigenFrame {
        times: grid.to_vec(),
        energies,
        states,
        gap_min,
    })
}

impl EigenFrame {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn energies(&self) -> &[[f64; 2]] {
        &self.energies
    }

    pub fn states(&self) -> &[[Ket; 2]] {
        &self.states
    }

    pub fn gap_min(&self) -> f64 {
        self.gap_min
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn span(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    /// Cell `k` with `t_k <= t <= t_{k+1}` and the fractional position in it.
    pub(crate) fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let (start, end) = self.span();
        if !(start..=end).contains(&t) {
            return Err(Error::OutOfRange { t, start, end });
        }
        let k = match self.times.partition_point(|&x| x <= t) {
            0 => 0,
            p => (p - 1).min(self.times.len() - 2),
        };
        let (a, b) = (self.times[k], self.times[k + 1]);
        Ok((k, (t - a) / (b - a)))
    }

    /// Phase accumulated by parallel transport of `band` across the grid,
    /// `arg <n(t_0)|n(t_N)>`. For a closed loop this is the Berry phase.
    pub fn holonomy(&self, band: usize) -> f64 {
        let first = &self.states[0][band];
        let last = &self.states[self.states.len() - 1][band];
        inner(first, last).arg()
    }
}

/// Three-point derivative weights on a possibly nonuniform grid.
fn derivative_weights(h1: f64, h2: f64) -> [f64; 3] {
    [
        -h2 / (h1 * (h1 + h2)),
        (h2 - h1) / (h1 * h2),
        h1 / (h2 * (h1 + h2)),
    ]
}

/// Discrete `<1_dot(t_k)|0(t_k)>` from the transported excited band.
///
/// # Panics
/// If `k` is not a grid index.
pub fn coupling(frame: &EigenFrame, k: usize) -> Coupling {
    let n = frame.len();
    assert!(k < n, "grid index {k} out of range for frame of length {n}");
    let t = &frame.times;
    let excited = |i: usize| frame.states[i][1];
    let combine = |idx: [usize; 3], w: [f64; 3]| {
        excited(idx[0]) * C64::from(w[0])
            + excited(idx[1]) * C64::from(w[1])
            + excited(idx[2]) * C64::from(w[2])
    };
    let (derivative, one_sided) = if n == 2 {
        let i = k.min(n - 2);
        (
            (excited(i + 1) - excited(i)) / C64::from(t[i + 1] - t[i]),
            true,
        )
    } else if k == 0 {
        let (h1, h2) = (t[1] - t[0], t[2] - t[1]);
        let w = [
            -(2.0 * h1 + h2) / (h1 * (h1 + h2)),
            (h1 + h2) / (h1 * h2),
            -h1 / (h2 * (h1 + h2)),
        ];
        (combine([0, 1, 2], w), true)
    } else if k == n - 1 {
        let (h1, h2) = (t[k - 1] - t[k - 2], t[k] - t[k - 1]);
        let w = [
            h2 / (h1 * (h1 + h2)),
            -(h1 + h2) / (h1 * h2),
            (h1 + 2.0 * h2) / (h2 * (h1 + h2)),
        ];
        (combine([k - 2, k - 1, k], w), true)
    } else {
        let w = derivative_weights(t[k] - t[k - 1], t[k + 1] - t[k]);
        (combine([k - 1, k, k + 1], w), false)
    };
    Coupling {
        value: inner(&derivative, &frame.states[k][0]),
        one_sided,
    }
}

fn bloch_vector(ket: &Ket) -> [f64; 3] {
    let (a, b) = (ket[0], ket[1]);
    let ab = a.conj() * b;
    [2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()]
}

/// Eigenstate drift `delta = max 1 - |<m(t1)|m(t2)>|` over both bands and all
/// grid pairs. Uses `|<a|b>|^2 = (1 + r_a . r_b) / 2` on Bloch vectors, so
/// the search is over the smallest Bloch-vector dot product.
pub fn eigenstate_drift(frame: &EigenFrame) -> f64 {
    let mut min_dot = 1.0f64;
    for band in 0..2 {
        let bloch: Vec<[f64; 3]> = frame
            .states
            .iter()
            .map(|s| bloch_vector(&s[band]))
            .collect();
        for (i, r1) in bloch.iter().enumerate() {
            for r2 in &bloch[i + 1..] {
                let d = r1[0] * r2[0] + r1[1] * r2[1] + r1[2] * r2[2];
                min_dot = min_dot.min(d);
            }
        }
    }
    1.0 - ((1.0 + min_dot.clamp(-1.0, 1.0)) / 2.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{rotating_field_hamiltonian, RotatingFieldParams, Static};
    use crate::two_level::sigma_x;
    use std::f64::consts::{PI, TAU};

    fn residual(h: &HermitianOperator2, e: f64, v: &Ket) -> f64 {
        (h.apply(v) - v * C64::from(e)).norm()
    }

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn diagonal_eigensystem() {
        let h = HermitianOperator2::from_pauli(0.0, [0.0, 0.0, -0.5]);
        let es = instantaneous_eigensystem(&h);
        assert_eq!(es.energies, [-0.5, 0.5]);
        assert!(
            inner(&es.states[0], &Ket::new(C64::from(1.0), C64::from(0.0))).norm() > 1.0 - 1e-15
        );
        assert!(
            inner(&es.states[1], &Ket::new(C64::from(0.0), C64::from(1.0))).norm() > 1.0 - 1e-15
        );
    }

    #[test]
    fn sigma_x_ground_state() {
        let h = HermitianOperator2::new(sigma_x() * C64::from(-0.5)).unwrap();
        let es = instantaneous_eigensystem(&h);
        assert!((es.energies[0] + 0.5).abs() < 1e-15);
        let plus = Ket::new(C64::from(1.0), C64::from(1.0)) / C64::from(2f64.sqrt());
        assert!((inner(&plus, &es.states[0]).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotating_field_residuals() {
        let p = RotatingFieldParams::new(1.0, -1.0, 0.1).unwrap();
        let h = rotating_field_hamiltonian(&p, 0.7);
        let es = instantaneous_eigensystem(&h);
        for i in 0..2 {
            assert!(residual(&h, es.energies[i], &es.states[i]) < 1e-10);
        }
        assert!(inner(&es.states[0], &es.states[1]).norm() < 1e-15);
    }

    #[test]
    fn south_pole_and_degenerate_inputs() {
        let h = HermitianOperator2::from_pauli(0.3, [0.0, 0.0, -2.0]);
        let es = instantaneous_eigensystem(&h);
        assert!(residual(&h, es.energies[0], &es.states[0]) < 1e-15);
        assert!(residual(&h, es.energies[1], &es.states[1]) < 1e-15);
        let es = instantaneous_eigensystem(&HermitianOperator2::from_pauli(1.0, [0.0; 3]));
        assert_eq!(es.energies, [1.0, 1.0]);
    }

    #[test]
    fn static_frame_is_constant() {
        let h = HermitianOperator2::from_pauli(0.0, [0.2, -0.1, 0.4]);
        let frame = build_eigenframe(&Static(h), &linspace(0.0, 5.0, 50)).unwrap();
        let first = frame.states()[0];
        for s in frame.states() {
            for (now, start) in s.iter().zip(&first) {
                assert!((now - start).norm() < 1e-15);
            }
        }
        assert!(eigenstate_drift(&frame) < 1e-15);
        assert!(coupling(&frame, 10).value.norm() < 1e-15);
    }

    #[test]
    fn constant_gap_and_gauge() {
        let p = RotatingFieldParams::new(1.0, 1.0, 0.1).unwrap();
        let frame = build_eigenframe(&p, &linspace(0.0, TAU, 2000)).unwrap();
        assert!((frame.gap_min() - 1.0).abs() < 1e-10);
        for w in frame.states().windows(2) {
            for (a, b) in w[0].iter().zip(&w[1]) {
                let o = inner(a, b);
                assert!(o.re > 0.0);
                assert!(o.im.abs() < 1e-8 * o.norm());
            }
        }
        let spread = frame
            .energies()
            .iter()
            .map(|e| {
                (e[0] - frame.energies()[0][0])
                    .abs()
                    .max((e[1] - frame.energies()[0][1]).abs())
            })
            .fold(0.0, f64::max);
        assert!(spread < 1e-12);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let p = RotatingFieldParams::new(1.0, 1.0, 1.2).unwrap();
        let err = build_eigenframe(&p, &linspace(0.0, TAU, 4)).unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse { .. }));
        assert!(matches!(
            build_eigenframe(&p, &[0.0, 1.0, 1.0]),
            Err(Error::GridNotIncreasing { index: 2 })
        ));
    }

    #[test]
    fn coupling_vanishes_without_motion() {
        let p = RotatingFieldParams::new(1.0, 2.0, 0.0).unwrap();
        let frame = build_eigenframe(&p, &linspace(0.0, 3.0, 300)).unwrap();
        for k in 0..frame.len() {
            assert_eq!(coupling(&frame, k).value.norm(), 0.0);
        }
        let boundary = coupling(&frame, 0);
        assert!(boundary.one_sided);
        assert!(!coupling(&frame, 5).one_sided);
    }

    /// Oracle: analytic transported states of the rotating field with
    /// `phi = omega t`, `c, s = cos, sin(theta/2)`:
    /// ground `e^{-i s^2 phi}(c, e^{i phi} s)`, excited
    /// `e^{i s^2 phi}(-e^{-i phi} s, c)`, differentiated by hand.
    #[test]
    fn coupling_matches_hand_derivative() {
        let p = RotatingFieldParams::new(1.0, 1.0, 0.1).unwrap();
        let (c, s) = ((p.theta / 2.0).cos(), (p.theta / 2.0).sin());
        let analytic = |t: f64| {
            let phi = p.omega * t;
            let ground = Ket::new(C64::from(c), C64::from_polar(s, phi))
                * C64::from_polar(1.0, -s * s * phi);
            let excited = Ket::new(-C64::from_polar(s, -phi), C64::from(c));
            let d_excited = Ket::new(C64::from_polar(s, -phi) * C64::i(), C64::from(0.0));
            let derivative = (excited * C64::new(0.0, s * s) + d_excited)
                * C64::from_polar(p.omega, s * s * phi);
            inner(&derivative, &ground).norm()
        };
        assert!((analytic(0.3) - 0.0499167).abs() < 1e-7);
        let frame = build_eigenframe(&p, &linspace(0.0, TAU, 2000)).unwrap();
        let mut worst: f64 = 0.0;
        for k in 1..frame.len() - 1 {
            let got = coupling(&frame, k).value.norm();
            worst = worst.max((got - analytic(frame.times()[k])).abs());
        }
        assert!(worst < 1e-5, "worst coupling error {worst}");
        assert!((coupling(&frame, 1000).value.norm() - p.coupling_magnitude()).abs() < 1e-5);
    }

    #[test]
    fn coupling_magnitude_is_time_independent() {
        let p = RotatingFieldParams::new(1.0, 0.7, 0.4).unwrap();
        let frame = build_eigenframe(&p, &linspace(0.0, 20.0, 20001)).unwrap();
        let vals: Vec<f64> = (1..frame.len() - 1)
            .map(|k| coupling(&frame, k).value.norm())
            .collect();
        let (lo, hi) = vals
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi - lo < 1e-6);
    }

    /// Oracle: brute-force pairwise complex overlaps.
    #[test]
    fn drift_matches_brute_force() {
        let p = RotatingFieldParams::new(1.0, 1.0, 0.1).unwrap();
        let frame = build_eigenframe(&p, &linspace(0.0, TAU, 200)).unwrap();
        let mut brute: f64 = 0.0;
        for band in 0..2 {
            for a in frame.states() {
                for b in frame.states() {
                    brute = brute.max(1.0 - inner(&a[band], &b[band]).norm());
                }
            }
        }
        let delta = eigenstate_drift(&frame);
        assert!((delta - brute).abs() < 1e-6);
        // 200 points over a period include (nearly) antipodal azimuths
        assert!((delta - (1.0 - p.theta.cos())).abs() < 1e-4);
        let flat = RotatingFieldParams::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(
            eigenstate_drift(&build_eigenframe(&flat, &linspace(0.0, TAU, 50)).unwrap()),
            0.0
        );
    }

    #[test]
    fn a_priori_ratio_is_linear_in_sin_theta() {
        let mut ratios = Vec::new();
        let thetas = [0.01, 0.02, 0.04];
        for &th in &thetas {
            let p = RotatingFieldParams::new(1.0, 0.5, th).unwrap();
            let frame = build_eigenframe(&p, &linspace(0.0, 5.0, 2001)).unwrap();
            let k = 1000;
            let gap = frame.energies()[k][1] - frame.energies()[k][0];
            ratios.push(coupling(&frame, k).value.norm() / gap);
        }
        // least-squares slope through the origin vs. sin(theta)
        let xs: Vec<f64> = thetas.iter().map(|t: &f64| t.sin()).collect();
        for (x, r) in xs.iter().zip(&ratios) {
            let slope = r / x;
            assert!((slope - 0.25).abs() < 0.05 * 0.25, "slope {slope}");
        }
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ratios.iter().sum::<f64>() / n);
        let fit = xs
            .iter()
            .zip(&ratios)
            .map(|(x, y)| (x - mx) * (y - my))
            .sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!((fit - 0.25).abs() < 0.05 * 0.25);
    }

    #[test]
    fn transported_loop_picks_up_berry_phase() {
        for &theta in &[0.1, 0.5, 1.2] {
            let p = RotatingFieldParams::new(1.0, 1.0, theta).unwrap();
            let frame = build_eigenframe(&p, &linspace(0.0, TAU, 4000)).unwrap();
            let expected = PI * (1.0 - theta.cos());
            let got = frame.holonomy(0).abs();
            assert!(
                (got - expected).abs() < 1e-3,
                "theta {theta}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn locate_cells() {
        let p = RotatingFieldParams::new(1.0, 1.0, 0.1).unwrap();
        let frame = build_eigenframe(&p, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(frame.locate(0.0).unwrap(), (0, 0.0));
        assert_eq!(frame.locate(1.5).unwrap(), (1, 0.5));
        assert_eq!(frame.locate(2.0).unwrap(), (1, 1.0));
        assert!(frame.locate(2.5).is_err());
    }
}
