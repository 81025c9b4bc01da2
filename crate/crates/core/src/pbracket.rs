//! Brackets `{F, α} = dF(sgrad α)`, certified sup norms, upper bounds for the
//! invariant `pb^a(X, X')`, and chords of `sgrad α` from `X` to `X'`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{IntegrationOptions, Stepper, VectorFieldSpec};
use crate::error::{check_dim, Error, Result};
use crate::fields::HamiltonianSpec;
use crate::geometry::{ClosedOneForm, CohomologyClass, PhaseSpace};
use crate::measures::{dot, orbit_average};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::profile::{PinnedFamily, ProfileBasis, SLOPE_GRID};
use crate::region::RegionSpec;
use crate::trig::{TrigSeries, TrigTerm};

/// Relative tolerance between the two evaluations of the bracket.
pub const BRACKET_TOL: f64 = 1e-10;
const MAX_SUP_POINTS: usize = 1 << 22;
/// Tolerance for the constraints `F ≤ 0` on `X`, `F ≥ 1` on `X'`.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// `{F, α}(x, s)`, evaluated as `dF(sgrad α)` and cross-checked against `α(sgrad F)`.
pub fn bracket(
    f: &HamiltonianSpec,
    alpha: &ClosedOneForm,
    space: &PhaseSpace,
    x: &[f64],
    s: f64,
) -> Result<f64> {
    let d = space.dim();
    check_dim(d, f.dim())?;
    check_dim(d, alpha.dim())?;
    check_dim(d, x.len())?;
    let omega = space.omega();
    let a = alpha.covector(x);
    let df = f.grad(x, s);
    let via_form = dot(&df, &omega.sharp(&a));
    let neg: Vec<f64> = df.iter().map(|v| -v).collect();
    let via_field = dot(&a, &omega.sharp(&neg));
    if (via_form - via_field).abs() > BRACKET_TOL * via_form.abs().max(1.0) {
        return Err(Error::InternalInconsistency {
            via_form,
            via_field,
        });
    }
    Ok(via_form)
}

/// `{F, α}` as a trigonometric series, when `F` and the potential of `α` are trigonometric.
pub fn bracket_series(
    f: &HamiltonianSpec,
    alpha: &ClosedOneForm,
    space: &PhaseSpace,
) -> Option<TrigSeries> {
    let d = space.dim();
    if f.dim() != d || alpha.dim() != d {
        return None;
    }
    let ft = f.to_trig()?;
    let omega = space.omega();
    let mut out = ft.directional(&omega.sharp(alpha.class().coeffs()));
    if let Some(g) = alpha.potential() {
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            let col = omega.sharp(&e);
            if col.iter().all(|c| *c == 0.0) {
                continue;
            }
            let gi = g.partial(i);
            if gi.terms().is_empty() && gi.constant_term() == 0.0 {
                continue;
            }
            out = out.add(&ft.directional(&col).mul(&gi).ok()?).ok()?;
        }
    }
    Some(out.normalized())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub grid_max: f64,
    pub pad: f64,
    /// `grid_max + pad`; an upper bound for the true sup when `padded`.
    pub certified: f64,
    pub padded: bool,
    pub grid_res: usize,
    pub active_coords: Vec<usize>,
    pub argmax: Vec<f64>,
}

/// Maximum of `|f|` over the grid `j/res` in the coordinates `f` depends on,
/// padded by the smaller of the first- and second-order Taylor bounds.
pub fn certified_sup(series: &TrigSeries, grid_res: usize, pad: bool) -> Result<SupNorm> {
    if grid_res < 16 {
        return Err(Error::InvalidArgument(format!("grid_res must be >= 16, got {grid_res}")));
    }
    if series.is_time_dependent() {
        return Err(Error::InvalidArgument("sup norm of a time-dependent bracket".into()));
    }
    let d = series.dim();
    let active = series.active_coords();
    let k = active.len();
    let count = grid_res
        .checked_pow(k as u32)
        .filter(|c| *c <= MAX_SUP_POINTS)
        .ok_or_else(|| {
            Error::Uncertifiable(format!("{grid_res}^{k} grid points exceed the budget"))
        })?;
    let mut x = vec![0.0; d];
    let mut best = (f64::NEG_INFINITY, vec![0.0; d]);
    for mut idx in 0..count {
        for &c in active.iter().rev() {
            x[c] = (idx % grid_res) as f64 / grid_res as f64;
            idx /= grid_res;
        }
        let v = series.eval(&x, 0.0).abs();
        if v > best.0 {
            best = (v, x.clone());
        }
    }
    let pad_value = if pad && k > 0 {
        let delta = 1.0 / grid_res as f64;
        let kf = k as f64;
        let first = 0.5 * delta * kf.sqrt() * series.gradient_bound();
        let second = delta * delta * kf / 8.0 * series.hessian_bound();
        first.min(second)
    } else {
        0.0
    };
    Ok(SupNorm {
        grid_max: best.0,
        pad: pad_value,
        certified: best.0 + pad_value,
        padded: pad,
        grid_res,
        active_coords: active,
        argmax: best.1,
    })
}

/// `max |{F, α}|` on a grid; with `lipschitz_pad` the result is a certified upper bound.
pub fn sup_norm(
    f: &HamiltonianSpec,
    alpha: &ClosedOneForm,
    space: &PhaseSpace,
    grid_res: usize,
    lipschitz_pad: bool,
) -> Result<SupNorm> {
    if let Some(series) = bracket_series(f, alpha, space) {
        return certified_sup(&series, grid_res, lipschitz_pad);
    }
    if lipschitz_pad {
        return Err(Error::Uncertifiable(
            "bracket has no trigonometric form; no derivative bound available".into(),
        ));
    }
    if grid_res < 16 {
        return Err(Error::InvalidArgument(format!("grid_res must be >= 16, got {grid_res}")));
    }
    let d = space.dim();
    let count = grid_res
        .checked_pow(d as u32)
        .filter(|c| *c <= MAX_SUP_POINTS)
        .ok_or_else(|| Error::InvalidArgument("grid too large".into()))?;
    let mut best = (f64::NEG_INFINITY, vec![0.0; d]);
    let mut x = vec![0.0; d];
    for mut idx in 0..count {
        for c in (0..d).rev() {
            x[c] = (idx % grid_res) as f64 / grid_res as f64;
            idx /= grid_res;
        }
        let v = bracket(f, alpha, space, &x, 0.0)?.abs();
        if v > best.0 {
            best = (v, x.clone());
        }
    }
    Ok(SupNorm {
        grid_max: best.0,
        pad: 0.0,
        certified: best.0,
        padded: false,
        grid_res,
        active_coords: (0..d).collect(),
        argmax: best.1,
    })
}

/// `{F, α_T}(x)` for `α_T = (1/T)∫₀ᵀ φ_t^* α dt`, computed as the orbit average of `α(sgrad F)`.
pub fn averaged_bracket(
    f: &HamiltonianSpec,
    alpha: &ClosedOneForm,
    space: &PhaseSpace,
    x: &[f64],
    horizon: f64,
    opts: IntegrationOptions,
) -> Result<f64> {
    check_dim(space.dim(), alpha.dim())?;
    let field = VectorFieldSpec::hamiltonian(f.clone(), space)?;
    let d = space.dim();
    let mut cov = vec![0.0; d];
    let mut v = vec![0.0; d];
    let mut a = vec![0.0; d];
    orbit_average(&field, x, 0.0, horizon, opts, |y, s| {
        field.eval_into(y, s, &mut cov, &mut v);
        alpha.covector_into(y, &mut a);
        dot(&a, &v)
    })
}

/// Admissible functions for the bracket minimization.
#[derive(Debug, Clone)]
pub enum FFamily {
    /// A single function; no free parameters.
    Fixed(HamiltonianSpec),
    /// `F(x) = u(x_coord)` for pinned periodic profiles `u`.
    Profile { coord: usize, family: PinnedFamily },
}

impl FFamily {
    pub fn profile(coord: usize, pins: &[(f64, f64)], n_modes: usize, basis: ProfileBasis) -> Result<Self> {
        Ok(Self::Profile {
            coord,
            family: PinnedFamily::new(pins, n_modes, basis)?,
        })
    }

    pub fn param_dim(&self) -> usize {
        match self {
            Self::Fixed(_) => 0,
            Self::Profile { family, .. } => family.param_dim(),
        }
    }

    fn build(&self, dim: usize, theta: &[f64]) -> Result<HamiltonianSpec> {
        match self {
            Self::Fixed(f) => Ok(f.clone()),
            Self::Profile { coord, family } => {
                HamiltonianSpec::profile(dim, *coord, family.profile(theta))
            }
        }
    }

    /// Starting parameters: the slope-minimax profile for profile families.
    fn warm_start(&self) -> Vec<f64> {
        match self {
            Self::Fixed(_) => Vec::new(),
            Self::Profile { family, .. } => family.minimax_slope(SLOPE_GRID).0,
        }
    }
}

/// `pb^a(X, X')` setup: regions, class and candidate families.
#[derive(Debug, Clone)]
pub struct PbProblem {
    pub space: PhaseSpace,
    pub x: RegionSpec,
    pub x_prime: RegionSpec,
    pub class: CohomologyClass,
    pub f_family: FFamily,
    /// Harmonics per coordinate in the potential of `α`; 0 fixes `α` to the constant form.
    pub alpha_modes: usize,
}

impl PbProblem {
    pub fn new(
        space: PhaseSpace,
        x: RegionSpec,
        x_prime: RegionSpec,
        class: CohomologyClass,
        f_family: FFamily,
        alpha_modes: usize,
    ) -> Result<Self> {
        let d = space.dim();
        check_dim(d, x.dim())?;
        check_dim(d, x_prime.dim())?;
        check_dim(d, class.dim())?;
        if x.grid().iter().any(|p| x_prime.contains(p)) {
            return Err(Error::Region("X and X' intersect".into()));
        }
        if let FFamily::Fixed(f) = &f_family {
            check_dim(d, f.dim())?;
        }
        if let FFamily::Profile { coord, .. } = &f_family {
            if *coord >= d {
                return Err(Error::InvalidArgument(format!("profile coordinate {coord} out of range")));
            }
        }
        Ok(Self {
            space,
            x,
            x_prime,
            class,
            f_family,
            alpha_modes,
        })
    }

    /// Momentum tori `{p = 0}` and `{p₁ = ½, p_{≥2} = 0}` in `T^{2n}`, class `½[dq₁]`,
    /// profiles in `p₁` pinned at `u(0) = 0`, `u(½) = 1`.
    pub fn lagrangian_pair(n: usize, n_modes: usize, resolution: usize) -> Result<Self> {
        let space = PhaseSpace::standard_torus(n);
        let zero = vec![0.0; n];
        let mut half = zero.clone();
        half[0] = 0.5;
        let x = RegionSpec::momentum_level(&space, &zero, resolution)?;
        let xp = RegionSpec::momentum_level(&space, &half, resolution)?;
        let fam = FFamily::profile(space.p(0), &[(0.0, 0.0), (0.5, 1.0)], n_modes, ProfileBasis::Auto)?;
        Self::new(space, x, xp, CohomologyClass::dq(n, 0, 0.5), fam, 0)
    }

    pub fn alpha_param_dim(&self) -> usize {
        2 * self.alpha_modes * self.space.dim()
    }

    fn build_alpha(&self, params: &[f64]) -> Result<ClosedOneForm> {
        if self.alpha_modes == 0 {
            return Ok(ClosedOneForm::constant(self.class.clone()));
        }
        let d = self.space.dim();
        let mut terms = Vec::with_capacity(params.len() / 2);
        let mut it = params.chunks_exact(2);
        for j in 0..d {
            for k in 1..=self.alpha_modes {
                let c = it.next().expect("parameter count");
                let mut kv = vec![0; d];
                kv[j] = k as i32;
                terms.push(TrigTerm::new(kv, 0, c[0], c[1]));
            }
        }
        ClosedOneForm::new(self.class.clone(), Some(TrigSeries::new(d, 0.0, terms)?))
    }

    /// Checks `F ≤ 0` on the grid of `X` and `F ≥ 1` on the grid of `X'`.
    pub fn validate(&self, f: &HamiltonianSpec) -> ConstraintAudit {
        let max_on_x = self
            .x
            .grid()
            .iter()
            .map(|p| f.eval(p, 0.0))
            .fold(f64::NEG_INFINITY, f64::max);
        let min_on_x_prime = self
            .x_prime
            .grid()
            .iter()
            .map(|p| f.eval(p, 0.0))
            .fold(f64::INFINITY, f64::min);
        ConstraintAudit {
            x_points: self.x.grid().len(),
            x_prime_points: self.x_prime.grid().len(),
            max_on_x,
            min_on_x_prime,
            tol: CONSTRAINT_TOL,
            passed: max_on_x <= CONSTRAINT_TOL && min_on_x_prime >= 1.0 - CONSTRAINT_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PbOptions {
    pub restarts: usize,
    pub nelder_mead: NelderMeadOptions,
    pub grid_res: usize,
    /// Standard deviation of the random restart perturbations.
    pub perturbation: f64,
    pub seed: u64,
}

impl Default for PbOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            nelder_mead: NelderMeadOptions {
                max_evals: 2000,
                initial_step: 0.02,
                ..NelderMeadOptions::default()
            },
            grid_res: 4096,
            perturbation: 0.05,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintAudit {
    pub x_points: usize,
    pub x_prime_points: usize,
    pub max_on_x: f64,
    pub min_on_x_prime: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartAudit {
    pub index: usize,
    pub start_value: Option<f64>,
    pub value: Option<f64>,
    pub evals: usize,
    pub rejected: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PbAudit {
    pub winner: usize,
    pub restarts: Vec<RestartAudit>,
    pub constraints: ConstraintAudit,
    pub disjoint: bool,
    pub f_param_dim: usize,
    pub alpha_param_dim: usize,
    pub alpha_modes: usize,
    pub sup: SupNorm,
}

#[derive(Debug, Clone)]
pub struct PbResult {
    /// Smallest certified `sup |{F, α}|` found.
    pub value: f64,
    pub f: HamiltonianSpec,
    pub alpha: ClosedOneForm,
    pub f_params: Vec<f64>,
    pub alpha_params: Vec<f64>,
    pub audit: PbAudit,
}

struct Candidate {
    sup: SupNorm,
    f: HamiltonianSpec,
    alpha: ClosedOneForm,
    constraints: ConstraintAudit,
}

fn evaluate(problem: &PbProblem, params: &[f64], grid_res: usize) -> Result<Option<Candidate>> {
    let fd = problem.f_family.param_dim();
    let f = problem.f_family.build(problem.space.dim(), &params[..fd])?;
    let constraints = problem.validate(&f);
    if !constraints.passed {
        return Ok(None);
    }
    let alpha = problem.build_alpha(&params[fd..])?;
    let sup = sup_norm(&f, &alpha, &problem.space, grid_res, true)?;
    Ok(Some(Candidate {
        sup,
        f,
        alpha,
        constraints,
    }))
}

/// Upper bound for `pb^a(X, X')` by minimizing the certified sup norm of the
/// bracket over the candidate families.
pub fn pb_upper_bound(problem: &PbProblem, opts: &PbOptions) -> Result<PbResult> {
    let fd = problem.f_family.param_dim();
    let ad = problem.alpha_param_dim();
    let mut base = problem.f_family.warm_start();
    base.resize(fd, 0.0);
    base.extend(std::iter::repeat(0.0).take(ad));
    let restarts = opts.restarts.max(1);

    let runs: Vec<Result<(RestartAudit, Vec<f64>)>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                base.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    opts.seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                );
                let normal = Normal::new(0.0, opts.perturbation)
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                base.iter().map(|b| b + normal.sample(&mut rng)).collect()
            };
            let mut rejected = 0usize;
            let mut failure: Option<Error> = None;
            let mut objective = |p: &[f64]| match evaluate(problem, p, opts.grid_res) {
                Ok(Some(c)) => c.sup.certified,
                Ok(None) => {
                    rejected += 1;
                    f64::INFINITY
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            };
            let start_value = objective(&start);
            let nm = nelder_mead(&mut objective, &start, &opts.nelder_mead);
            if let Some(e) = failure {
                return Err(e);
            }
            let finite = |v: f64| v.is_finite().then_some(v);
            Ok((
                RestartAudit {
                    index: r,
                    start_value: finite(start_value),
                    value: finite(nm.value),
                    evals: nm.evals + 1,
                    rejected,
                    converged: nm.converged,
                },
                nm.x,
            ))
        })
        .collect();

    let mut audits = Vec::with_capacity(restarts);
    let mut params = Vec::with_capacity(restarts);
    for r in runs {
        let (a, p) = r?;
        audits.push(a);
        params.push(p);
    }
    let winner = audits
        .iter()
        .enumerate()
        .filter_map(|(i, a)| a.value.map(|v| (i, v)))
        .fold(None, |best: Option<(usize, f64)>, (i, v)| match best {
            Some((_, bv)) if bv <= v => best,
            _ => Some((i, v)),
        })
        .map(|(i, _)| i)
        .ok_or_else(|| {
            Error::InfeasibleFamily("no candidate satisfied F <= 0 on X and F >= 1 on X'".into())
        })?;
    let best = evaluate(problem, &params[winner], opts.grid_res)?
        .ok_or_else(|| Error::InfeasibleFamily("winning candidate failed revalidation".into()))?;
    let p = &params[winner];
    Ok(PbResult {
        value: best.sup.certified,
        f: best.f,
        alpha: best.alpha,
        f_params: p[..fd].to_vec(),
        alpha_params: p[fd..].to_vec(),
        audit: PbAudit {
            winner,
            restarts: audits,
            constraints: best.constraints,
            disjoint: true,
            f_param_dim: fd,
            alpha_param_dim: ad,
            alpha_modes: problem.alpha_modes,
            sup: best.sup,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chord {
    pub seed_index: usize,
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ChordOutcome {
    Found(Chord),
    NotFound { t_max: f64, seeds: usize },
}

impl ChordOutcome {
    pub fn chord(&self) -> Option<&Chord> {
        match self {
            Self::Found(c) => Some(c),
            Self::NotFound { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChordOptions {
    pub t_max: f64,
    pub integration: IntegrationOptions,
    /// Target accuracy of the crossing time.
    pub time_tol: f64,
    /// Tolerance on the remaining pinned levels of `X'` at the crossing.
    pub membership_tol: f64,
}

impl Default for ChordOptions {
    fn default() -> Self {
        Self {
            t_max: 10.0,
            integration: IntegrationOptions::default(),
            time_tol: 1e-12,
            membership_tol: 1e-6,
        }
    }
}

/// Level crossed between `a` and `b` by a coordinate with base level `v`,
/// counting every `v + k` when the coordinate is periodic.
fn crossed_level(a: f64, b: f64, v: f64, periodic: bool) -> Option<f64> {
    if periodic {
        let (fa, fb) = ((a - v).floor(), (b - v).floor());
        if fb > fa {
            Some(v + fb)
        } else if fb < fa {
            Some(v + fa)
        } else if b - v == fb && a != b {
            Some(b)
        } else {
            None
        }
    } else if (a - v) * (b - v) <= 0.0 && a != v {
        Some(v)
    } else {
        None
    }
}

fn chord_from_seed(
    field: &VectorFieldSpec,
    x_prime: &RegionSpec,
    pins: &[(usize, f64)],
    seed_index: usize,
    x0: &[f64],
    opts: &ChordOptions,
) -> Result<Option<Chord>> {
    let (c, v) = pins[0];
    let periodic = field.space().periodic().to_vec();
    let h = opts.integration.h;
    let mut stepper = Stepper::new(field, opts.integration);
    let mut x = x0.to_vec();
    let mut next = x.clone();
    let mut trial = x.clone();
    let mut t = 0.0;
    let mut i = 0usize;
    while t < opts.t_max {
        let t_next = ((i + 1) as f64 * h).min(opts.t_max);
        let dt = t_next - t;
        next.copy_from_slice(&x);
        stepper.step(&mut next, t, dt)?;
        if let Some(level) = crossed_level(x[c], next[c], v, periodic[c]) {
            let up = next[c] > x[c];
            let (mut lo, mut hi) = (0.0, dt);
            while hi - lo > opts.time_tol && hi - lo > f64::EPSILON * t_next.max(1.0) {
                let mid = 0.5 * (lo + hi);
                trial.copy_from_slice(&x);
                stepper.step(&mut trial, t, mid)?;
                let past = if up { trial[c] >= level } else { trial[c] <= level };
                if past {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            trial.copy_from_slice(&x);
            stepper.step(&mut trial, t, hi)?;
            if x_prime.contains_within(&snap(&trial, c, level), opts.membership_tol) {
                return Ok(Some(Chord {
                    seed_index,
                    start: x0.to_vec(),
                    end: trial,
                    time: t + hi,
                }));
            }
        }
        std::mem::swap(&mut x, &mut next);
        t = t_next;
        i += 1;
    }
    Ok(None)
}

fn snap(x: &[f64], c: usize, level: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[c] = level;
    y
}

/// Shortest chord of `sgrad α` from a grid point of `X` to `X'`.
/// `X'` must be given by pinned levels; the first pin is tracked for crossings.
pub fn chord_search(
    alpha: &ClosedOneForm,
    space: &PhaseSpace,
    x: &RegionSpec,
    x_prime: &RegionSpec,
    opts: &ChordOptions,
) -> Result<ChordOutcome> {
    check_dim(space.dim(), x.dim())?;
    check_dim(space.dim(), x_prime.dim())?;
    if !(opts.t_max > 0.0) {
        return Err(Error::InvalidArgument("t_max must be positive".into()));
    }
    opts.integration.validate()?;
    let pins = x_prime
        .pins()
        .filter(|p| !p.is_empty())
        .ok_or_else(|| Error::InvalidArgument("chord target must have pinned levels".into()))?;
    let field = VectorFieldSpec::locally_hamiltonian(alpha.clone(), space)?;
    let found = x
        .grid()
        .par_iter()
        .enumerate()
        .map(|(i, p)| chord_from_seed(&field, x_prime, pins, i, p, opts))
        .collect::<Result<Vec<_>>>()?;
    let best = found.into_iter().flatten().fold(None, |best: Option<Chord>, c| match best {
        Some(b) if b.time <= c.time => Some(b),
        _ => Some(c),
    });
    Ok(match best {
        Some(c) => ChordOutcome::Found(c),
        None => ChordOutcome::NotFound {
            t_max: opts.t_max,
            seeds: x.grid().len(),
        },
    })
}

/// Two-sided check `1/p̂ − tol ≤ t* ≤ 1/p_floor + tol` for an upper estimate `p̂`
/// and a known floor `p_floor` of the invariant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordBoundCheck {
    pub time: f64,
    pub lower: f64,
    pub upper: f64,
    pub tol: f64,
    pub holds: bool,
}

pub fn chord_bound_check(chord: &Chord, p_hat: f64, p_floor: f64, tol: f64) -> ChordBoundCheck {
    let lower = 1.0 / p_hat;
    let upper = 1.0 / p_floor;
    ChordBoundCheck {
        time: chord.time,
        lower,
        upper,
        tol,
        holds: chord.time >= lower - tol && chord.time <= upper + tol,
    }
}
