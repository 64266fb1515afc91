use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::circles::{abs_s_sieved, PrimeAngles, AVG_S_MAX};
use crate::collision::{
    angular_mean, g_eval, index_radius_sq, q_reference_detailed, to_lattice, DiscreteOperator,
    Domain, KernelSpec, LatticeDistribution, MaxwellianMixture, QuadratureConfig, ReferenceValue,
    Sampling, Vec2, VelocityDensity,
};
use crate::error::{invalid, Result};
use crate::numtheory::SpfSieve;
use crate::sum::CompensatedSum;

/// Default number of Fourier modes treated explicitly in the error budget.
pub const DEFAULT_M_DIAG: usize = 64;

const GL_NODES: usize = 8;
const GL_PANEL: f64 = 0.25;
const N_PHI: usize = 128;

/// (2h)^2 max_{0<|k|<M, 4|k} sum_{0<|zeta|<=R/h} |S(|zeta|^2, k)| / r(|zeta|^2).
///
/// Every n <= (R/h)^2 with r(n) > 0 contributes r(n) points of equal weight,
/// so the inner sum is sum_{n <= (R/h)^2} |S(n, k)|.
pub fn equid_term(h: f64, truncation: f64, m: usize) -> Result<f64> {
    Ok(equid_sums(h, truncation, m)?
        .into_iter()
        .map(|(_, s)| 4.0 * h * h * s)
        .fold(0.0, f64::max))
}

/// (k, sum_{n <= (R/h)^2} |S(n, k)|) for k = 4, 8, ... below m.
pub fn equid_sums(h: f64, truncation: f64, m: usize) -> Result<Vec<(i64, f64)>> {
    if !(h.is_finite() && h > 0.0 && truncation.is_finite() && truncation > 0.0) {
        return invalid(format!(
            "h and R must be positive, got h = {h}, R = {truncation}"
        ));
    }
    if m <= 4 {
        return invalid(format!(
            "M must exceed 4 so that k = 4 is included, got {m}"
        ));
    }
    let n_max = index_radius_sq(truncation, h) as u64;
    if n_max > AVG_S_MAX {
        return invalid(format!("(R/h)^2 = {n_max} exceeds {AVG_S_MAX}"));
    }
    let ks: Vec<i64> = (4..m as i64).step_by(4).collect();
    if n_max == 0 {
        return Ok(ks.into_iter().map(|k| (k, 0.0)).collect());
    }
    let sieve = SpfSieve::new(n_max as u32);
    let angles = PrimeAngles::new(&sieve);
    Ok(ks
        .into_par_iter()
        .map(|k| {
            let mut scratch = Vec::new();
            let s: CompensatedSum = (1..=n_max as u32)
                .map(|n| abs_s_sieved(n, k, &sieve, &angles, &mut scratch))
                .collect();
            (k, s.value())
        })
        .collect())
}

/// Fourier coefficients of theta -> g_v(h zeta, theta).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularFourier {
    pub zeta: (i64, i64),
    pub n_theta: usize,
    /// (k, g_hat(zeta, k)) for k = -K..=K.
    pub coefficients: Vec<(i64, Complex64)>,
    /// max_k |g_hat(zeta, k)| (1 + k^2) over the reported k.
    pub c3: f64,
}

fn fft_for(n: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_forward(n)
}

/// g_hat(k) for k = 0..n (negative k at n - |k|) by the trapezoid rule on
/// theta_j = -pi + 2 pi j / n.
fn spectrum(
    f: &dyn VelocityDensity,
    kernel: &KernelSpec,
    v: Vec2,
    w: Vec2,
    fft: &dyn Fft<f64>,
) -> Vec<Complex64> {
    let n = fft.len();
    let mut buf: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta = -PI + 2.0 * PI * j as f64 / n as f64;
            Complex64::new(g_eval(f, v, w, theta, kernel).value, 0.0)
        })
        .collect();
    fft.process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        // exp(-i k theta_j) = (-1)^k exp(-2 pi i j k / n)
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *c *= sign / n as f64;
    }
    buf
}

fn signed_index(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Trapezoid-rule Fourier coefficients of g_v(h zeta, .) for |k| <= k_max,
/// sampled at the next power of two above max(256, 8 k_max) angles.
pub fn angular_fourier(
    f: &dyn VelocityDensity,
    kernel: &KernelSpec,
    v: Vec2,
    h: f64,
    zeta: (i64, i64),
    k_max: usize,
) -> Result<AngularFourier> {
    if k_max == 0 {
        return invalid("angular_fourier needs K >= 1");
    }
    if !(h.is_finite() && h > 0.0) {
        return invalid(format!("lattice step must be positive, got {h}"));
    }
    kernel.validate()?;
    let n = (8 * k_max).max(256).next_power_of_two();
    let w = Vec2::new(zeta.0 as f64 * h, zeta.1 as f64 * h);
    let spec = spectrum(f, kernel, v, w, fft_for(n).as_ref());
    let k_max = k_max as i64;
    let coefficients: Vec<(i64, Complex64)> = (-k_max..=k_max)
        .map(|k| (k, spec[signed_index(k, n)]))
        .collect();
    let c3 = coefficients
        .iter()
        .map(|&(k, c)| c.norm() * (1.0 + (k * k) as f64))
        .fold(0.0, f64::max);
    Ok(AngularFourier {
        zeta,
        n_theta: n,
        coefficients,
        c3,
    })
}

/// Parameters of [`converge_study`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeConfig {
    pub v: Vec2,
    /// Strictly decreasing lattice steps.
    pub h_list: Vec<f64>,
    /// R: the lattice sum runs over |zeta| <= R/h.
    pub truncation: f64,
    pub m_diag: usize,
    pub sampling: Sampling,
    pub quadrature: QuadratureConfig,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self {
            v: Vec2::ZERO,
            h_list: vec![0.5, 0.25, 0.125, 0.0625],
            truncation: 6.0,
            m_diag: DEFAULT_M_DIAG,
            sampling: Sampling::CellAverage,
            quadrature: QuadratureConfig::default(),
        }
    }
}

/// Observed sizes of the pieces of |Q - Q^h| for one (v, h, R, M).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub v: Vec2,
    pub h: f64,
    pub truncation: f64,
    pub m: usize,
    /// 4 int_{|w|>=R} |<g_v(w)>| dw.
    pub tail_r: f64,
    /// |4 int_{|w|<R} <g_v> dw - (2h)^2 sum_{zeta in Z_{h,R}} <g_v(h zeta)>|.
    pub riemann_h: f64,
    /// (2h)^2 sum_zeta sum_{|k|>=M} |g_hat_v(zeta, k)|.
    pub fourier_tail_m: f64,
    /// c3 times [`equid_term`].
    pub equid_term: f64,
    /// max_{zeta, k} |g_hat_v(zeta, k)| (1 + k^2), the fitted C3.
    pub c3: f64,
    /// |Q^h - Q_ref|.
    pub total_observed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergeRow {
    pub h: f64,
    pub qh: f64,
    pub qref: f64,
    pub abs_err: f64,
    pub budget: ErrorBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeStudy {
    pub config: ConvergeConfig,
    pub density: MaxwellianMixture,
    pub kernel: KernelSpec,
    pub reference: ReferenceValue,
    /// 4 int_{|w|<R} <g_v> dw, shared by every row.
    pub inner_integral: f64,
    pub rows: Vec<ConvergeRow>,
}

/// 4 int_{a <= |w| <= b} F(<g_v(w)>) dw in polar coordinates: panels of
/// Gauss-Legendre in rho, trapezoid in phi.
fn ring_integral(
    f: &dyn VelocityDensity,
    kernel: &KernelSpec,
    v: Vec2,
    (a, b): (f64, f64),
    n_theta: usize,
    absolute: bool,
) -> f64 {
    if b <= a {
        return 0.0;
    }
    let gl = GaussLegendre::new(NonZeroUsize::new(GL_NODES).expect("nonzero"));
    let panels = ((b - a) / GL_PANEL).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let lo = a + p as f64 * width;
            gl.as_node_weight_pairs()
                .iter()
                .map(move |&(x, wt)| (lo + 0.5 * width * (x + 1.0), 0.5 * width * wt))
                .collect::<Vec<_>>()
        })
        .collect();
    let parts: Vec<CompensatedSum> = nodes
        .par_iter()
        .map(|&(rho, wt)| {
            let mut s = CompensatedSum::default();
            for j in 0..N_PHI {
                let phi = 2.0 * PI * j as f64 / N_PHI as f64;
                let w = Vec2::new(rho * phi.cos(), rho * phi.sin());
                let g = angular_mean(f, v, w, kernel, n_theta).0;
                s.add(if absolute { g.abs() } else { g });
            }
            let mut out = CompensatedSum::default();
            out.add(s.value() * wt * rho * 2.0 * PI / N_PHI as f64);
            out
        })
        .collect();
    let mut total = CompensatedSum::default();
    parts.into_iter().for_each(|p| total.merge(p));
    4.0 * total.value()
}

struct LatticeDiagnostics {
    riemann_sum: f64,
    fourier_tail: f64,
    c3: f64,
}

fn lattice_diagnostics(
    f: &dyn VelocityDensity,
    kernel: &KernelSpec,
    v: Vec2,
    h: f64,
    truncation: f64,
    m: usize,
    n_theta: usize,
) -> LatticeDiagnostics {
    let r2 = index_radius_sq(truncation, h);
    let w_max = (r2 as f64).sqrt() as i64;
    let points: Vec<(i64, i64)> = (-w_max..=w_max)
        .flat_map(|y| (-w_max..=w_max).map(move |x| (x, y)))
        .filter(|&(x, y)| x * x + y * y <= r2 && (x, y) != (0, 0))
        .collect();
    let fft = fft_for(n_theta);
    let half = (n_theta / 2) as i64;
    let per_point: Vec<(f64, f64, f64)> = points
        .par_iter()
        .map(|&(x, y)| {
            let spec = spectrum(
                f,
                kernel,
                v,
                Vec2::new(x as f64 * h, y as f64 * h),
                fft.as_ref(),
            );
            let mean = spec[0].re;
            let tail: f64 = (m as i64..=half)
                .map(|k| {
                    let pos = spec[signed_index(k, n_theta)].norm();
                    // k = n/2 aliases onto itself
                    if k == half {
                        pos
                    } else {
                        pos + spec[signed_index(-k, n_theta)].norm()
                    }
                })
                .sum();
            let c3 = (-half / 2..=half / 2)
                .map(|k| spec[signed_index(k, n_theta)].norm() * (1.0 + (k * k) as f64))
                .fold(0.0, f64::max);
            (mean, tail, c3)
        })
        .collect();
    let mut riemann = CompensatedSum::default();
    let mut tail = CompensatedSum::default();
    let mut c3 = 0.0f64;
    for (a, b, c) in per_point {
        riemann.add(a);
        tail.add(b);
        c3 = c3.max(c);
    }
    let cell = 4.0 * h * h;
    LatticeDiagnostics {
        riemann_sum: cell * riemann.value(),
        fourier_tail: cell * tail.value(),
        c3,
    }
}

/// Q^h(f,f)(v) for each h against the quadrature reference, with the error
/// budget of each step.
pub fn converge_study(
    density: &MaxwellianMixture,
    kernel: &KernelSpec,
    config: &ConvergeConfig,
) -> Result<ConvergeStudy> {
    let ConvergeConfig {
        v,
        ref h_list,
        truncation,
        m_diag,
        sampling,
        quadrature,
    } = *config;
    if h_list.is_empty() {
        return invalid("h_list is empty");
    }
    if h_list.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return invalid("every h must be positive and finite");
    }
    if h_list.windows(2).any(|w| w[1] >= w[0]) {
        return invalid(format!(
            "h_list must be strictly decreasing, got {h_list:?}"
        ));
    }
    if !(truncation.is_finite() && truncation > 0.0) {
        return invalid(format!("R must be positive, got {truncation}"));
    }
    if m_diag <= 4 {
        return invalid(format!("M must exceed 4, got {m_diag}"));
    }
    kernel.validate()?;
    let lattice_v: Vec<(i64, i64)> = h_list
        .iter()
        .map(|&h| to_lattice(v, h))
        .collect::<Result<_>>()?;

    let reference = q_reference_detailed(density, v, kernel, &quadrature)?;
    let n_theta = (4 * m_diag).max(64).next_power_of_two();
    let outer = density.extent() + v.norm();
    let inner_integral = ring_integral(density, kernel, v, (0.0, truncation), n_theta, false);
    let tail_r = ring_integral(density, kernel, v, (truncation, outer), n_theta, true);

    let mut rows = Vec::with_capacity(h_list.len());
    for (&h, &zeta_v) in h_list.iter().zip(&lattice_v) {
        // every velocity reached from v through |zeta| <= R/h lies within |v| + 2R
        let f = LatticeDistribution::sample(density, h, v.norm() + 2.0 * truncation, sampling)?;
        let op = DiscreteOperator::new(h, truncation, kernel)?;
        let qh = op.eval(&f, zeta_v, Domain::Unbounded)?;
        let diag = lattice_diagnostics(density, kernel, v, h, truncation, m_diag, n_theta);
        let abs_err = (qh - reference.value).abs();
        rows.push(ConvergeRow {
            h,
            qh,
            qref: reference.value,
            abs_err,
            budget: ErrorBudget {
                v,
                h,
                truncation,
                m: m_diag,
                tail_r,
                riemann_h: (inner_integral - diag.riemann_sum).abs(),
                fourier_tail_m: diag.fourier_tail,
                equid_term: diag.c3 * equid_term(h, truncation, m_diag)?,
                c3: diag.c3,
                total_observed: abs_err,
            },
        });
    }
    Ok(ConvergeStudy {
        config: config.clone(),
        density: density.clone(),
        kernel: kernel.clone(),
        reference,
        inner_integral,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circles::{circle_points, exp_sum_direct};
    use crate::collision::Maxwellian;

    #[test]
    fn equid_term_against_point_enumeration() {
        // R/h = 100
        let (h, r, m) = (0.05, 5.0, 13);
        let n_max = 100 * 100;
        let mut sums = [0.0; 3];
        for zx in -100i64..=100 {
            for zy in -100i64..=100 {
                let n = (zx * zx + zy * zy) as u64;
                if n == 0 || n > n_max {
                    continue;
                }
                let r2 = circle_points(n).len() as f64;
                for (i, k) in [4, 8, 12].into_iter().enumerate() {
                    sums[i] += exp_sum_direct(n, k).value.norm() / r2;
                }
            }
        }
        let brute = sums.iter().map(|s| 4.0 * h * h * s).fold(0.0, f64::max);
        let fast = equid_term(h, r, m).unwrap();
        assert!((fast - brute).abs() <= 1e-9 * brute, "{fast} vs {brute}");
    }

    #[test]
    fn equid_term_small_m_uses_only_k4() {
        let sums = equid_sums(0.1, 3.0, 7).unwrap();
        assert_eq!(sums.len(), 1);
        assert_eq!(sums[0].0, 4);
        assert!(equid_sums(0.1, 3.0, 4).is_err());
    }

    #[test]
    fn equid_term_decreases_with_h() {
        let a = equid_term(0.5, 6.0, 16).unwrap();
        let b = equid_term(0.25, 6.0, 16).unwrap();
        let c = equid_term(0.125, 6.0, 16).unwrap();
        assert!(a > b && b > c, "{a} {b} {c}");
    }

    #[test]
    fn fourier_of_maxwellian_vanishes() {
        let m = Maxwellian::standard();
        let four = angular_fourier(
            &m,
            &KernelSpec::Maxwell,
            Vec2::new(0.5, 0.0),
            0.5,
            (2, 1),
            16,
        )
        .unwrap();
        assert!(four.coefficients.iter().all(|(_, c)| c.norm() <= 1e-10));
    }

    #[test]
    fn fourier_symmetry_for_reflection_symmetric_setup() {
        // f, v and w symmetric about the x-axis make g even in theta
        let f = MaxwellianMixture::bi_maxwellian();
        let kernel = KernelSpec::product_power(0.0, vec![1.0, 0.3]).unwrap();
        let four = angular_fourier(&f, &kernel, Vec2::new(0.5, 0.0), 0.5, (2, 0), 32).unwrap();
        let get = |k: i64| four.coefficients.iter().find(|(j, _)| *j == k).unwrap().1;
        let scale = get(0).norm().max(1e-300);
        for k in 1..=32 {
            assert!((get(k) - get(-k)).norm() <= 1e-12 * scale);
            assert!(get(k).im.abs() <= 1e-12 * scale);
        }
        assert!(four.c3.is_finite() && four.c3 > 0.0);
    }

    #[test]
    fn fourier_decay_bimaxwellian() {
        let f = MaxwellianMixture::bi_maxwellian();
        let four = angular_fourier(
            &f,
            &KernelSpec::Maxwell,
            Vec2::new(0.5, 0.5),
            0.5,
            (3, -2),
            64,
        )
        .unwrap();
        let g0 = four
            .coefficients
            .iter()
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        assert!(four.c3 <= 1e3 * g0, "{} vs {}", four.c3, g0);
    }

    #[test]
    fn rejects_bad_ladders() {
        let f = MaxwellianMixture::bi_maxwellian();
        let mut cfg = ConvergeConfig {
            h_list: vec![0.5, 0.5],
            ..Default::default()
        };
        assert!(converge_study(&f, &KernelSpec::Maxwell, &cfg).is_err());
        cfg.h_list = vec![0.25, 0.5];
        assert!(converge_study(&f, &KernelSpec::Maxwell, &cfg).is_err());
        cfg.h_list = vec![0.5, 0.25];
        cfg.v = Vec2::new(0.3, 0.0);
        assert!(converge_study(&f, &KernelSpec::Maxwell, &cfg).is_err());
    }

    #[test]
    fn zero_density_gives_zero_columns() {
        let cfg = ConvergeConfig {
            h_list: vec![0.5, 0.25],
            truncation: 2.0,
            m_diag: 8,
            ..Default::default()
        };
        let s = converge_study(&MaxwellianMixture::zero(), &KernelSpec::Maxwell, &cfg).unwrap();
        for row in &s.rows {
            assert_eq!((row.qh, row.qref, row.abs_err), (0.0, 0.0, 0.0));
            assert_eq!(row.budget.riemann_h, 0.0);
            assert_eq!(row.budget.fourier_tail_m, 0.0);
        }
    }

    #[test]
    fn maxwellian_ladder_decreases() {
        let cfg = ConvergeConfig {
            h_list: vec![0.5, 0.25],
            truncation: 4.0,
            m_diag: 8,
            ..Default::default()
        };
        let s = converge_study(
            &MaxwellianMixture::new(vec![Maxwellian::standard()]),
            &KernelSpec::Maxwell,
            &cfg,
        )
        .unwrap();
        assert!(s.reference.value.abs() < 1e-12);
        assert!(s.rows[1].abs_err < s.rows[0].abs_err, "{:?}", s.rows);
        assert!(s.rows[0].budget.tail_r >= 0.0);
    }
}
