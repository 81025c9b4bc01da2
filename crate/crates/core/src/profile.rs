//! One-dimensional periodic profiles `u: ℝ/ℤ → ℝ` with pinned values.
//!
//! Pins are imposed by linear elimination: the coefficient vector is written
//! as `c = c_pinned + N θ` with `N` spanning the null space of the pin
//! equations, so every `θ` satisfies the pins up to rounding. An optional
//! slope target runs Lawson's iteratively reweighted least squares on the
//! derivative, which converges to the minimax (smallest `max |u'|`) profile.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::centered_mod;
use crate::trig::{TrigSeries, TrigTerm};

pub const SLOPE_GRID: usize = 4096;
const PIN_TOL: f64 = 1e-10;
const LAWSON_MAX_ITER: usize = 6000;
const LAWSON_REL_GAP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileBasis {
    /// Odd cosine harmonics when the pins are a pair at `0` and `1/2`,
    /// the full basis otherwise.
    #[default]
    Auto,
    /// Constant plus `cos 2πkx, sin 2πkx` for `k = 1..=n_modes`.
    Full,
    /// Constant plus `cos 2πkx` for the first `n_modes` odd `k`.
    OddCosine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum BasisFn {
    Const,
    Cos(i32),
    Sin(i32),
}

impl BasisFn {
    fn value(self, x: f64) -> f64 {
        match self {
            Self::Const => 1.0,
            Self::Cos(k) => (TAU * k as f64 * x).cos(),
            Self::Sin(k) => (TAU * k as f64 * x).sin(),
        }
    }

    fn slope(self, x: f64) -> f64 {
        match self {
            Self::Const => 0.0,
            Self::Cos(k) => -TAU * k as f64 * (TAU * k as f64 * x).sin(),
            Self::Sin(k) => TAU * k as f64 * (TAU * k as f64 * x).cos(),
        }
    }
}

fn basis_functions(basis: ProfileBasis, n_modes: usize) -> Vec<BasisFn> {
    let mut out = vec![BasisFn::Const];
    match basis {
        ProfileBasis::OddCosine => {
            out.extend((0..n_modes).map(|j| BasisFn::Cos(2 * j as i32 + 1)));
        }
        _ => {
            for k in 1..=n_modes as i32 {
                out.push(BasisFn::Cos(k));
                out.push(BasisFn::Sin(k));
            }
        }
    }
    out
}

fn is_antipodal_pair(pins: &[(f64, f64)]) -> bool {
    if pins.len() != 2 {
        return false;
    }
    let a = centered_mod(pins[0].0);
    let b = centered_mod(pins[1].0);
    let zero_half = |x: f64, y: f64| x.abs() < PIN_TOL && (y.abs() - 0.5).abs() < PIN_TOL;
    zero_half(a, b) || zero_half(b, a)
}

/// Certified bound on `max |f|` of a one-dimensional series from a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeBound {
    pub grid_max: f64,
    pub correction: f64,
    pub certified: f64,
}

/// Grid maximum of `|f|` plus the smaller of the first- and second-order
/// Lipschitz corrections for a one-dimensional periodic series.
pub fn certified_max_1d(f: &TrigSeries, grid: usize) -> SlopeBound {
    let delta = 1.0 / grid as f64;
    let grid_max = (0..grid)
        .map(|i| f.eval(&[i as f64 * delta], 0.0).abs())
        .fold(0.0, f64::max);
    let first = 0.5 * delta * f.gradient_bound();
    let second = 0.125 * delta * delta * f.hessian_bound();
    let correction = first.min(second);
    SlopeBound {
        grid_max,
        correction,
        certified: grid_max + correction,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub target: Option<f64>,
    pub bound: SlopeBound,
    pub target_met: bool,
    pub iterations: usize,
    /// Lower bound on the minimax slope over the whole family.
    pub family_lower_bound: f64,
}

/// Affine parametrization `c = c_pinned + N θ` of the profiles meeting the pins.
#[derive(Debug, Clone)]
pub struct PinnedFamily {
    basis: Vec<BasisFn>,
    resolved: ProfileBasis,
    n_modes: usize,
    pins: Vec<(f64, f64)>,
    particular: DVector<f64>,
    null_space: DMatrix<f64>,
}

impl PinnedFamily {
    pub fn new(pins: &[(f64, f64)], n_modes: usize, basis: ProfileBasis) -> Result<Self> {
        let mut uniq: Vec<(f64, f64)> = Vec::new();
        for &(x, v) in pins {
            if !x.is_finite() || !v.is_finite() {
                return Err(Error::InfeasiblePins("non-finite pin".into()));
            }
            match uniq.iter().find(|(y, _)| centered_mod(x - y).abs() < PIN_TOL) {
                Some(&(_, w)) if (w - v).abs() > PIN_TOL => {
                    return Err(Error::InfeasiblePins(format!(
                        "point {x} pinned to both {w} and {v}"
                    )))
                }
                Some(_) => {}
                None => uniq.push((x, v)),
            }
        }
        let resolved = match basis {
            ProfileBasis::Auto if is_antipodal_pair(&uniq) => ProfileBasis::OddCosine,
            ProfileBasis::Auto => ProfileBasis::Full,
            other => other,
        };
        let fns = basis_functions(resolved, n_modes);
        let nb = fns.len();
        let a = DMatrix::from_fn(uniq.len(), nb, |i, j| fns[j].value(uniq[i].0));
        let v = DVector::from_iterator(uniq.len(), uniq.iter().map(|p| p.1));

        let (particular, row_space) = if uniq.is_empty() {
            (DVector::zeros(nb), Vec::new())
        } else {
            let svd = a.clone().svd(true, true);
            let smax = svd.singular_values.max();
            let eps = 1e-10 * smax.max(1.0);
            let particular = svd
                .solve(&v, eps)
                .map_err(|e| Error::InfeasiblePins(e.to_string()))?;
            let vt = svd.v_t.as_ref().expect("requested V");
            let rows: Vec<DVector<f64>> = svd
                .singular_values
                .iter()
                .enumerate()
                .filter(|(_, &s)| s > eps)
                .map(|(i, _)| vt.row(i).transpose())
                .collect();
            (particular, rows)
        };
        let residual = (&a * &particular - &v).amax();
        if uniq.len() > 0 && residual > PIN_TOL {
            return Err(Error::InfeasiblePins(format!(
                "pins cannot be met by this basis (residual {residual:e})"
            )));
        }

        // Complete the row space to an orthonormal basis; the extra vectors span the null space.
        let mut ortho = row_space;
        let mut null = Vec::new();
        for j in 0..nb {
            let mut e = DVector::zeros(nb);
            e[j] = 1.0;
            for q in ortho.iter() {
                let proj = q.dot(&e);
                e -= q * proj;
            }
            let norm = e.norm();
            if norm > 1e-8 {
                e /= norm;
                ortho.push(e.clone());
                null.push(e);
            }
        }
        let null_space = if null.is_empty() {
            DMatrix::zeros(nb, 0)
        } else {
            DMatrix::from_columns(&null)
        };
        Ok(Self {
            basis: fns,
            resolved,
            n_modes,
            pins: uniq,
            particular,
            null_space,
        })
    }

    pub fn param_dim(&self) -> usize {
        self.null_space.ncols()
    }

    pub fn resolved_basis(&self) -> ProfileBasis {
        self.resolved
    }

    pub fn coefficients(&self, theta: &[f64]) -> DVector<f64> {
        let t = DVector::from_column_slice(theta);
        &self.particular + &self.null_space * t
    }

    /// Null-space coordinates of a coefficient vector (least-squares projection).
    pub fn params_of(&self, coeffs: &DVector<f64>) -> Vec<f64> {
        let d = coeffs - &self.particular;
        (self.null_space.transpose() * d).iter().copied().collect()
    }

    pub fn profile(&self, theta: &[f64]) -> PinnedProfile {
        self.profile_from_coeffs(&self.coefficients(theta))
    }

    fn profile_from_coeffs(&self, c: &DVector<f64>) -> PinnedProfile {
        let mut constant = 0.0;
        let mut terms: Vec<TrigTerm> = Vec::new();
        for (f, &v) in self.basis.iter().zip(c.iter()) {
            match *f {
                BasisFn::Const => constant += v,
                BasisFn::Cos(k) => terms.push(TrigTerm::new(vec![k], 0, v, 0.0)),
                BasisFn::Sin(k) => terms.push(TrigTerm::new(vec![k], 0, 0.0, v)),
            }
        }
        let series = TrigSeries::new(1, constant, terms)
            .expect("one-dimensional terms")
            .normalized();
        PinnedProfile {
            series,
            pins: self.pins.clone(),
            basis: self.resolved,
            n_modes: self.n_modes,
            report: None,
        }
    }

    /// Lawson iteration for `min_θ max_grid |u'_θ|`. Returns the best
    /// parameter vector, iterations used, and a lower bound on the minimax value.
    pub fn minimax_slope(&self, grid: usize) -> (Vec<f64>, usize, f64) {
        let pd = self.param_dim();
        if pd == 0 {
            return (Vec::new(), 0, 0.0);
        }
        let xs: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
        let d = DMatrix::from_fn(grid, self.basis.len(), |i, j| self.basis[j].slope(xs[i]));
        let m = &d * &self.null_space;
        let r0 = &d * &self.particular;
        let mut w = DVector::from_element(grid, 1.0 / grid as f64);
        let mut best = (f64::INFINITY, vec![0.0; pd]);
        let mut lower = 0.0f64;
        let mut iters = 0;
        for it in 0..LAWSON_MAX_ITER {
            iters = it + 1;
            let mut mw = m.clone();
            for (i, mut row) in mw.row_iter_mut().enumerate() {
                row *= w[i];
            }
            let normal = m.transpose() * &mw;
            let rhs = -(mw.transpose() * &r0);
            let theta = match normal.clone().cholesky() {
                Some(ch) => ch.solve(&rhs),
                None => match normal.lu().solve(&rhs) {
                    Some(t) => t,
                    None => break,
                },
            };
            let r = &r0 + &m * &theta;
            let wl2: f64 = r.iter().zip(w.iter()).map(|(ri, wi)| wi * ri * ri).sum();
            lower = lower.max(wl2.sqrt());
            let rmax = r.amax();
            if rmax < best.0 {
                best = (rmax, theta.iter().copied().collect());
            }
            if best.0 - lower <= LAWSON_REL_GAP * best.0 {
                break;
            }
            let mut total = 0.0;
            for (wi, ri) in w.iter_mut().zip(r.iter()) {
                *wi *= ri.abs();
                total += *wi;
            }
            if total <= 0.0 || !total.is_finite() {
                break;
            }
            w /= total;
        }
        (best.1, iters, lower)
    }
}

/// A periodic profile `u` with recorded pins, basis choice and slope report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinnedProfile {
    series: TrigSeries,
    pins: Vec<(f64, f64)>,
    basis: ProfileBasis,
    n_modes: usize,
    report: Option<SlopeReport>,
}

impl PinnedProfile {
    pub fn eval(&self, x: f64) -> f64 {
        self.series.eval(&[x], 0.0)
    }

    pub fn slope(&self, x: f64) -> f64 {
        self.series.grad(&[x], 0.0)[0]
    }

    pub fn series(&self) -> &TrigSeries {
        &self.series
    }

    pub fn pins(&self) -> &[(f64, f64)] {
        &self.pins
    }

    pub fn basis(&self) -> ProfileBasis {
        self.basis
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn report(&self) -> Option<&SlopeReport> {
        self.report.as_ref()
    }

    /// Certified `max |u'|` on a grid of `grid` points.
    pub fn max_slope(&self, grid: usize) -> SlopeBound {
        certified_max_1d(&self.series.partial(0), grid)
    }

    /// Largest pin violation.
    pub fn pin_error(&self) -> f64 {
        self.pins
            .iter()
            .map(|&(x, v)| (self.eval(x) - v).abs())
            .fold(0.0, f64::max)
    }
}

/// Builds `u` meeting `pins` with `n_modes` harmonics of the automatically
/// chosen basis. With a slope target the coefficients minimize `max |u'|`
/// and the certified result is reported against the target.
pub fn make_pinned_profile(
    pins: &[(f64, f64)],
    slope_target: Option<f64>,
    n_modes: usize,
) -> Result<PinnedProfile> {
    make_pinned_profile_with(pins, slope_target, n_modes, ProfileBasis::Auto)
}

pub fn make_pinned_profile_with(
    pins: &[(f64, f64)],
    slope_target: Option<f64>,
    n_modes: usize,
    basis: ProfileBasis,
) -> Result<PinnedProfile> {
    let family = PinnedFamily::new(pins, n_modes, basis)?;
    let (theta, iterations, lower) = match slope_target {
        Some(_) => family.minimax_slope(SLOPE_GRID),
        None => (vec![0.0; family.param_dim()], 0, 0.0),
    };
    let mut profile = family.profile(&theta);
    if let Some(target) = slope_target {
        let bound = profile.max_slope(SLOPE_GRID);
        profile.report = Some(SlopeReport {
            target: Some(target),
            bound,
            target_met: bound.certified <= target,
            iterations,
            family_lower_bound: lower,
        });
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_target_met_with_twelve_odd_modes() {
        let u = make_pinned_profile(&[(0.0, 0.0), (0.5, 1.0)], Some(2.1), 12).unwrap();
        let rep = u.report().unwrap();
        assert_eq!(u.basis(), ProfileBasis::OddCosine);
        assert!(rep.target_met, "{rep:?}");
        assert!(rep.bound.certified <= 2.1);
        assert!(u.pin_error() <= 1e-10);
        // Independent check on a denser grid.
        let dense = (0..16384)
            .map(|i| u.slope(i as f64 / 16384.0).abs())
            .fold(0.0, f64::max);
        assert!(dense <= rep.bound.certified);
        // No periodic profile with these pins can beat slope 2.
        assert!(rep.family_lower_bound <= 2.1 && rep.bound.certified >= 2.0);
    }

    #[test]
    fn twelve_full_modes_cannot_reach_the_target() {
        // Frozen linear-programming optimum for the full 12-harmonic basis
        // on a 4096-point grid: 2.18625.
        let u = make_pinned_profile_with(
            &[(0.0, 0.0), (0.5, 1.0)],
            Some(2.1),
            12,
            ProfileBasis::Full,
        )
        .unwrap();
        let rep = u.report().unwrap();
        assert!(!rep.target_met);
        assert!((rep.bound.grid_max - 2.18625).abs() < 2e-3, "{rep:?}");
    }

    #[test]
    fn single_zero_pin_gives_zero_profile() {
        let u = make_pinned_profile(&[(0.0, 0.0)], None, 12).unwrap();
        for i in 0..10 {
            assert_eq!(u.eval(i as f64 / 10.0), 0.0);
        }
    }

    #[test]
    fn contradictory_pins_rejected() {
        assert!(matches!(
            make_pinned_profile(&[(0.0, 0.0), (0.0, 1.0)], None, 12),
            Err(Error::InfeasiblePins(_))
        ));
        assert!(matches!(
            make_pinned_profile(&[(0.0, 0.0), (1.0, 1.0)], None, 12),
            Err(Error::InfeasiblePins(_))
        ));
    }

    #[test]
    fn family_members_meet_pins() {
        let fam = PinnedFamily::new(&[(0.1, 0.3), (0.6, -0.2), (0.8, 0.0)], 5, ProfileBasis::Auto)
            .unwrap();
        assert_eq!(fam.resolved_basis(), ProfileBasis::Full);
        assert_eq!(fam.param_dim(), 11 - 3);
        let theta: Vec<f64> = (0..fam.param_dim()).map(|i| (i as f64).sin()).collect();
        let u = fam.profile(&theta);
        assert!(u.pin_error() <= 1e-10);
        let back = fam.params_of(&fam.coefficients(&theta));
        for (a, b) in back.iter().zip(&theta) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
