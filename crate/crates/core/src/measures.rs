//! Empirical orbit measures, Birkhoff averages and rotation vectors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{flow, IntegrationOptions, OrbitCursor, Trajectory, VectorFieldSpec};
use crate::error::{check_dim, Error, Result};
use crate::fields::HamiltonianSpec;
use crate::geometry::{ClosedOneForm, PhasePoint, PhaseSpace, RotationVector};
use crate::trig::TrigSeries;

/// A function on `M × S¹` (the second argument is the phase `s`).
pub trait Observable: Sync {
    fn value(&self, x: &[f64], s: f64) -> f64;

    /// An a priori bound for `sup |H|`, when cheaply available.
    fn sup_bound(&self) -> Option<f64> {
        None
    }
}

impl Observable for TrigSeries {
    fn value(&self, x: &[f64], s: f64) -> f64 {
        self.eval(x, s)
    }

    fn sup_bound(&self) -> Option<f64> {
        Some(self.amplitude_bound())
    }
}

impl Observable for HamiltonianSpec {
    fn value(&self, x: &[f64], s: f64) -> f64 {
        self.eval(x, s)
    }

    fn sup_bound(&self) -> Option<f64> {
        self.to_trig().map(|t| t.amplitude_bound())
    }
}

impl<F> Observable for F
where
    F: Fn(&[f64], f64) -> f64 + Sync,
{
    fn value(&self, x: &[f64], s: f64) -> f64 {
        self(x, s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub x0: Vec<f64>,
    pub horizon: f64,
    pub h: f64,
    pub s0: f64,
    pub field: String,
}

/// Finitely supported probability measure on `M × S¹`.
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure {
    dim: usize,
    periodic: Vec<bool>,
    points: Vec<f64>,
    phases: Vec<f64>,
    weights: Vec<f64>,
    provenance: Option<Provenance>,
    source: Option<(VectorFieldSpec, IntegrationOptions)>,
}

impl EmpiricalMeasure {
    pub fn from_weighted(
        space: &PhaseSpace,
        points: &[Vec<f64>],
        phases: &[f64],
        weights: &[f64],
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        check_dim(points.len(), phases.len())?;
        check_dim(points.len(), weights.len())?;
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(*w >= 0.0)) || !(total > 0.0) {
            return Err(Error::InvalidArgument("weights must be non-negative with positive sum".into()));
        }
        let mut flat = Vec::with_capacity(points.len() * space.dim());
        for p in points {
            check_dim(space.dim(), p.len())?;
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidPoint(format!("{p:?}")));
            }
            flat.extend_from_slice(p);
        }
        Ok(Self {
            dim: space.dim(),
            periodic: space.periodic().to_vec(),
            points: flat,
            phases: phases.to_vec(),
            weights: weights.iter().map(|w| w / total).collect(),
            provenance: None,
            source: None,
        })
    }

    /// Equal weights on the given points.
    pub fn uniform(space: &PhaseSpace, points: &[Vec<f64>], phases: &[f64]) -> Result<Self> {
        let w = vec![1.0; points.len()];
        Self::from_weighted(space, points, phases, &w)
    }

    pub fn point_mass(x: &PhasePoint, space: &PhaseSpace) -> Result<Self> {
        Self::uniform(space, &[x.lift().to_vec()], &[0.0])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lift(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point(&self, i: usize) -> PhasePoint {
        PhasePoint::from_lift_unchecked(self.lift(i).to_vec(), &self.periodic)
    }

    pub fn phase(&self, i: usize) -> f64 {
        self.phases[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// `Σ wᵢ f(xᵢ, sᵢ)`, summed in sample order.
    pub fn expect(&self, f: impl Fn(&[f64], f64) -> f64) -> f64 {
        (0..self.len())
            .map(|i| self.weights[i] * f(self.lift(i), self.phases[i]))
            .sum()
    }
}

/// Time average along a trajectory, as a measure with trapezoidal weights.
pub fn empirical_measure(traj: &Trajectory) -> Result<EmpiricalMeasure> {
    let n = traj.len();
    if n == 0 {
        return Err(Error::EmptyTrajectory);
    }
    let t = traj.times();
    let weights = if n == 1 {
        vec![1.0]
    } else {
        let span = t[n - 1] - t[0];
        (0..n)
            .map(|i| {
                let lo = if i == 0 { t[0] } else { t[i - 1] };
                let hi = if i == n - 1 { t[n - 1] } else { t[i + 1] };
                0.5 * (hi - lo) / span
            })
            .collect()
    };
    let mut points = Vec::with_capacity(n * traj.dim());
    for i in 0..n {
        points.extend_from_slice(traj.lift(i));
    }
    let s0 = traj.start_phase();
    Ok(EmpiricalMeasure {
        dim: traj.dim(),
        periodic: traj.periodic().to_vec(),
        points,
        phases: t.iter().map(|ti| s0 + ti).collect(),
        weights,
        provenance: Some(Provenance {
            x0: traj.first_lift().to_vec(),
            horizon: traj.horizon(),
            h: traj.step(),
            s0,
            field: traj.field().label().into(),
        }),
        source: Some((traj.field().clone(), *traj.options())),
    })
}

pub fn average(mu: &EmpiricalMeasure, obs: &dyn Observable) -> f64 {
    mu.expect(|x, s| obs.value(x, s))
}

/// `∫ α(sgrad F) dμ`.
pub fn rotation_pairing(
    mu: &EmpiricalMeasure,
    f: &HamiltonianSpec,
    alpha: &ClosedOneForm,
    space: &PhaseSpace,
) -> Result<f64> {
    check_dim(space.dim(), mu.dim())?;
    check_dim(space.dim(), alpha.dim())?;
    let field = VectorFieldSpec::hamiltonian(f.clone(), space)?;
    let d = space.dim();
    let (mut cov, mut v, mut a) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    let mut acc = 0.0;
    for i in 0..mu.len() {
        let x = mu.lift(i);
        field.eval_into(x, mu.phase(i), &mut cov, &mut v);
        alpha.covector_into(x, &mut a);
        acc += mu.weights[i] * dot(&a, &v);
    }
    Ok(acc)
}

/// `(g(x_T) − g(x_0))/T` for an orbit measure and the exact part `dg` of `α`.
pub fn boundary_term(mu: &EmpiricalMeasure, alpha: &ClosedOneForm) -> Option<f64> {
    let prov = mu.provenance.as_ref()?;
    alpha.potential()?;
    if prov.horizon <= 0.0 {
        return None;
    }
    let first = mu.lift(0);
    let last = mu.lift(mu.len() - 1);
    Some((alpha.potential_value(last) - alpha.potential_value(first)) / prov.horizon)
}

/// Coordinates of `ρ(μ, sgrad F)` in the basis dual to `(dp₁..dpₙ, dq₁..dqₙ)`.
pub fn rotation_vector(
    mu: &EmpiricalMeasure,
    f: &HamiltonianSpec,
    space: &PhaseSpace,
) -> Result<RotationVector> {
    check_dim(space.dim(), mu.dim())?;
    let field = VectorFieldSpec::hamiltonian(f.clone(), space)?;
    let d = space.dim();
    let (mut cov, mut v) = (vec![0.0; d], vec![0.0; d]);
    let mut acc = vec![0.0; d];
    for i in 0..mu.len() {
        field.eval_into(mu.lift(i), mu.phase(i), &mut cov, &mut v);
        for j in 0..d {
            acc[j] += mu.weights[i] * v[j];
        }
    }
    Ok(RotationVector(acc))
}

/// Trapezoidal time average of `f` along an orbit, without storing it.
pub fn orbit_average(
    field: &VectorFieldSpec,
    x0: &[f64],
    s0: f64,
    horizon: f64,
    opts: IntegrationOptions,
    mut f: impl FnMut(&[f64], f64) -> f64,
) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    let mut cursor = OrbitCursor::new(field, x0, s0, opts)?;
    let mut prev_t = 0.0;
    let mut prev_f = f(x0, s0);
    let mut acc = 0.0;
    cursor.advance_to(horizon, |t, x| {
        let fx = f(x, s0 + t);
        acc += 0.5 * (t - prev_t) * (prev_f + fx);
        prev_t = t;
        prev_f = fx;
    })?;
    Ok(acc / horizon)
}

/// Rotation vector of a single orbit, streamed.
pub fn orbit_rotation_vector(
    field: &VectorFieldSpec,
    x0: &PhasePoint,
    horizon: f64,
    opts: IntegrationOptions,
) -> Result<RotationVector> {
    let d = field.dim();
    let mut cursor = OrbitCursor::new(field, x0.lift(), 0.0, opts)?;
    let (mut cov, mut v) = (vec![0.0; d], vec![0.0; d]);
    field.eval_into(x0.lift(), 0.0, &mut cov, &mut v);
    let mut prev = v.clone();
    let mut acc = vec![0.0; d];
    let mut prev_t = 0.0;
    cursor.advance_to(horizon, |t, x| {
        field.eval_into(x, t, &mut cov, &mut v);
        for j in 0..d {
            acc[j] += 0.5 * (t - prev_t) * (prev[j] + v[j]);
        }
        prev.copy_from_slice(&v);
        prev_t = t;
    })?;
    Ok(RotationVector(acc.iter().map(|a| a / horizon).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SeedLayout {
    /// Momenta on a grid, positions at 0.
    #[default]
    Momentum,
    /// All coordinates on a grid.
    Full,
}

const MAX_SEEDS: usize = 1 << 22;

/// Regular grid of initial points with `resolution` nodes `j/resolution` per gridded coordinate.
pub fn seed_grid(space: &PhaseSpace, resolution: usize, layout: SeedLayout) -> Result<Vec<PhasePoint>> {
    if resolution == 0 {
        return Err(Error::InvalidArgument("seed resolution must be positive".into()));
    }
    let d = space.dim();
    let gridded: Vec<usize> = match layout {
        SeedLayout::Momentum => (0..space.n()).map(|i| space.p(i)).collect(),
        SeedLayout::Full => (0..d).collect(),
    };
    let count = resolution
        .checked_pow(gridded.len() as u32)
        .filter(|c| *c <= MAX_SEEDS)
        .ok_or_else(|| Error::InvalidArgument("seed grid too large".into()))?;
    let mut out = Vec::with_capacity(count);
    for mut idx in 0..count {
        let mut x = vec![0.0; d];
        for &c in gridded.iter().rev() {
            x[c] = (idx % resolution) as f64 / resolution as f64;
            idx /= resolution;
        }
        out.push(PhasePoint::from_lift_unchecked(x, space.periodic()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchOptions {
    /// First horizon.
    pub t0: f64,
    pub t_max: f64,
    pub tol: f64,
    pub integration: IntegrationOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            t0: 100.0,
            t_max: 1e5,
            tol: 1e-4,
            integration: IntegrationOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub horizons: Vec<f64>,
    pub best_values: Vec<f64>,
    pub diffs: Vec<f64>,
    pub converged: bool,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best_index: usize,
    pub best_seed: Vec<f64>,
    /// `|pairing|` of the best seed at the final horizon.
    pub best_value: f64,
    pub signed_value: f64,
    /// Signed pairing of every seed at the final horizon.
    pub values: Vec<f64>,
    #[serde(flatten)]
    pub report: ConvergenceReport,
}

impl SearchOutcome {
    pub fn final_horizon(&self) -> f64 {
        self.report.horizons.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub(crate) trait SeedRun: Send {
    fn advance_to(&mut self, horizon: f64) -> Result<()>;
    fn value(&self) -> f64;
}

/// Deterministic argmax of `|v|`; ties go to the lowest index.
pub(crate) fn argmax_abs(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v.abs() > values[best].abs() {
            best = i;
        }
    }
    best
}

/// Runs all seeds to horizons `t0, 2t0, ...` (capped at `t_max`) until the best value settles.
pub(crate) fn doubling_search<R: SeedRun>(
    runs: &mut [R],
    seeds: &[PhasePoint],
    t0: f64,
    t_max: f64,
    tol: f64,
) -> Result<SearchOutcome> {
    if runs.is_empty() {
        return Err(Error::InvalidArgument("empty seed set".into()));
    }
    if !(t0 > 0.0) || t_max < t0 {
        return Err(Error::InvalidArgument(format!("need 0 < t0 <= t_max, got {t0}, {t_max}")));
    }
    let mut report = ConvergenceReport {
        horizons: Vec::new(),
        best_values: Vec::new(),
        diffs: Vec::new(),
        converged: false,
        tol,
    };
    let mut horizon = t0;
    loop {
        runs.par_iter_mut().try_for_each(|r| r.advance_to(horizon))?;
        let values: Vec<f64> = runs.iter().map(|r| r.value()).collect();
        let best = argmax_abs(&values);
        let best_value = values[best].abs();
        if let Some(prev) = report.best_values.last() {
            report.diffs.push((best_value - prev).abs());
        }
        report.horizons.push(horizon);
        report.best_values.push(best_value);
        report.converged = report.diffs.last().is_some_and(|d| *d <= tol);
        if report.converged || horizon >= t_max {
            return Ok(SearchOutcome {
                best_index: best,
                best_seed: seeds[best].lift().to_vec(),
                best_value,
                signed_value: values[best],
                values,
                report,
            });
        }
        horizon = (2.0 * horizon).min(t_max);
    }
}

struct PairingRun<'a> {
    field: &'a VectorFieldSpec,
    alpha: &'a ClosedOneForm,
    cursor: OrbitCursor<'a>,
    integral: f64,
    prev_f: f64,
    prev_t: f64,
    cov: Vec<f64>,
    v: Vec<f64>,
    a: Vec<f64>,
}

impl<'a> PairingRun<'a> {
    fn new(
        field: &'a VectorFieldSpec,
        alpha: &'a ClosedOneForm,
        x0: &[f64],
        opts: IntegrationOptions,
    ) -> Result<Self> {
        let d = field.dim();
        let mut run = Self {
            field,
            alpha,
            cursor: OrbitCursor::new(field, x0, 0.0, opts)?,
            integral: 0.0,
            prev_f: 0.0,
            prev_t: 0.0,
            cov: vec![0.0; d],
            v: vec![0.0; d],
            a: vec![0.0; d],
        };
        run.prev_f = pairing_density(field, alpha, x0, 0.0, &mut run.cov, &mut run.v, &mut run.a);
        Ok(run)
    }
}

fn pairing_density(
    field: &VectorFieldSpec,
    alpha: &ClosedOneForm,
    x: &[f64],
    s: f64,
    cov: &mut [f64],
    v: &mut [f64],
    a: &mut [f64],
) -> f64 {
    field.eval_into(x, s, cov, v);
    alpha.covector_into(x, a);
    dot(a, v)
}

impl SeedRun for PairingRun<'_> {
    fn advance_to(&mut self, horizon: f64) -> Result<()> {
        let Self {
            field,
            alpha,
            cursor,
            integral,
            prev_f,
            prev_t,
            cov,
            v,
            a,
        } = self;
        cursor.advance_to(horizon, |t, x| {
            let f = pairing_density(field, alpha, x, t, cov, v, a);
            *integral += 0.5 * (t - *prev_t) * (*prev_f + f);
            *prev_t = t;
            *prev_f = f;
        })
    }

    fn value(&self) -> f64 {
        if self.prev_t > 0.0 {
            self.integral / self.prev_t
        } else {
            self.prev_f
        }
    }
}

/// Seed whose orbit average of `α(sgrad F)` has the largest modulus.
pub fn extremal_orbit_search(
    f: &HamiltonianSpec,
    alpha: &ClosedOneForm,
    space: &PhaseSpace,
    seeds: &[PhasePoint],
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    check_dim(space.dim(), alpha.dim())?;
    let field = VectorFieldSpec::hamiltonian(f.clone(), space)?;
    opts.integration.validate()?;
    let mut runs = seeds
        .iter()
        .map(|x| {
            check_dim(space.dim(), x.dim())?;
            PairingRun::new(&field, alpha, x.lift(), opts.integration)
        })
        .collect::<Result<Vec<_>>>()?;
    doubling_search(&mut runs, seeds, opts.t0, opts.t_max, opts.tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub defect: f64,
    /// `2 s sup|H| / T` when `μ` is an orbit measure and `sup|H|` is known.
    pub bound: Option<f64>,
}

/// `|∫ H∘φ_s dμ − ∫ H dμ|`.
pub fn invariance_defect(
    mu: &EmpiricalMeasure,
    field: &VectorFieldSpec,
    s: f64,
    obs: &dyn Observable,
    opts: IntegrationOptions,
) -> Result<DefectReport> {
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!("shift must be positive, got {s}")));
    }
    check_dim(field.dim(), mu.dim())?;
    let base = average(mu, obs);
    let shifted = match shifted_along_orbit(mu, field, s, obs)? {
        Some(v) => v,
        None => {
            let vals = (0..mu.len())
                .into_par_iter()
                .map(|i| {
                    let y = flow(field, mu.lift(i), mu.phase(i), s, opts)?;
                    Ok(obs.value(&y, mu.phase(i) + s))
                })
                .collect::<Result<Vec<f64>>>()?;
            vals.iter().zip(&mu.weights).map(|(v, w)| v * w).sum()
        }
    };
    let bound = match (&mu.provenance, obs.sup_bound()) {
        (Some(p), Some(m)) if p.horizon > 0.0 => Some(2.0 * s * m / p.horizon),
        _ => None,
    };
    Ok(DefectReport {
        defect: (shifted - base).abs(),
        bound,
    })
}

/// When `μ` is a uniformly sampled orbit of `field` and `s` is a whole number of steps,
/// `∫ H∘φ_s dμ` is read off the orbit itself, extended past its end by `s`.
fn shifted_along_orbit(
    mu: &EmpiricalMeasure,
    field: &VectorFieldSpec,
    s: f64,
    obs: &dyn Observable,
) -> Result<Option<f64>> {
    let (Some(prov), Some((src, opts))) = (&mu.provenance, &mu.source) else {
        return Ok(None);
    };
    if src != field {
        return Ok(None);
    }
    let h = prov.h;
    let steps = (prov.horizon / h).round();
    let m = (s / h).round();
    if (steps * h - prov.horizon).abs() > 1e-9 * prov.horizon.max(1.0)
        || (m * h - s).abs() > 1e-9 * s.max(1.0)
        || steps as usize + 1 != mu.len()
    {
        return Ok(None);
    }
    let m = m as usize;
    let n = mu.len();
    let d = mu.dim;
    let mut tail: Vec<f64> = Vec::with_capacity(m * d);
    let mut cursor = OrbitCursor::new(field, mu.lift(n - 1), prov.s0 + prov.horizon, *opts)?;
    cursor.advance_to(s, |_, x| tail.extend_from_slice(x))?;
    if tail.len() != m * d {
        return Ok(None);
    }
    let mut acc = 0.0;
    for i in 0..n {
        let j = i + m;
        let x = if j < n {
            mu.lift(j)
        } else {
            &tail[(j - n) * d..(j - n + 1) * d]
        };
        acc += mu.weights[i] * obs.value(x, prov.s0 + j as f64 * h);
    }
    Ok(Some(acc))
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
