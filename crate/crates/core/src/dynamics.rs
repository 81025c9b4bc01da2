//! Hamiltonian and locally Hamiltonian vector fields and their flows.
//!
//! Conventions: `sgrad α` solves `i_v ω = α`, and `sgrad F = sgrad(−dF)`.
//! For the standard form this gives `q̇ = ∂F/∂p`, `ṗ = −∂F/∂q`.
//!
//! Integration uses fixed steps and never re-wraps the state, so the lift of
//! every orbit is available for winding and rotation bookkeeping.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::fields::HamiltonianSpec;
use crate::geometry::{ClosedOneForm, PhasePoint, PhaseSpace};

#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    Hamiltonian(HamiltonianSpec),
    LocallyHamiltonian(ClosedOneForm),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldSpec {
    kind: FieldKind,
    space: PhaseSpace,
}

impl VectorFieldSpec {
    pub fn hamiltonian(f: HamiltonianSpec, space: &PhaseSpace) -> Result<Self> {
        check_dim(space.dim(), f.dim())?;
        Ok(Self {
            kind: FieldKind::Hamiltonian(f),
            space: space.clone(),
        })
    }

    pub fn locally_hamiltonian(alpha: ClosedOneForm, space: &PhaseSpace) -> Result<Self> {
        check_dim(space.dim(), alpha.dim())?;
        Ok(Self {
            kind: FieldKind::LocallyHamiltonian(alpha),
            space: space.clone(),
        })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_autonomous(&self) -> bool {
        match &self.kind {
            FieldKind::Hamiltonian(f) => !f.is_time_dependent(),
            FieldKind::LocallyHamiltonian(_) => true,
        }
    }

    /// Conserved energy for autonomous Hamiltonian fields.
    pub fn energy(&self, x: &[f64]) -> Option<f64> {
        match &self.kind {
            FieldKind::Hamiltonian(f) if !f.is_time_dependent() => Some(f.eval(x, 0.0)),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match &self.kind {
            FieldKind::Hamiltonian(_) => "hamiltonian",
            FieldKind::LocallyHamiltonian(_) => "locally-hamiltonian",
        }
    }

    /// Field at `(x, s)`; `cov` is scratch of length `dim`.
    #[inline]
    pub fn eval_into(&self, x: &[f64], s: f64, cov: &mut [f64], out: &mut [f64]) {
        match &self.kind {
            FieldKind::Hamiltonian(f) => {
                f.grad_into(x, s, cov);
                cov.iter_mut().for_each(|c| *c = -*c);
            }
            FieldKind::LocallyHamiltonian(alpha) => alpha.covector_into(x, cov),
        }
        self.space.omega().sharp_into(cov, out);
    }

    pub fn eval(&self, x: &[f64], s: f64) -> Vec<f64> {
        let mut cov = vec![0.0; self.dim()];
        let mut out = vec![0.0; self.dim()];
        self.eval_into(x, s, &mut cov, &mut out);
        out
    }
}

/// `sgrad α` at `x`.
pub fn sgrad_form(alpha: &ClosedOneForm, space: &PhaseSpace, x: &PhasePoint) -> Result<Vec<f64>> {
    check_dim(space.dim(), alpha.dim())?;
    check_dim(space.dim(), x.dim())?;
    Ok(space.omega().sharp(&alpha.covector(x.lift())))
}

/// Hamiltonian vector field `sgrad F = sgrad(−dF)` at `(x, s)`.
pub fn sgrad(f: &HamiltonianSpec, space: &PhaseSpace, x: &PhasePoint, s: f64) -> Result<Vec<f64>> {
    check_dim(space.dim(), f.dim())?;
    check_dim(space.dim(), x.dim())?;
    let neg: Vec<f64> = f.grad(x.lift(), s).iter().map(|v| -v).collect();
    Ok(space.omega().sharp(&neg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    ImplicitMidpoint,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegrationOptions {
    pub h: f64,
    pub method: Method,
    pub fixed_point_tol: f64,
    pub fixed_point_max_iter: usize,
    /// Maximum tolerated `|F(x_t) − F(x_0)|` on autonomous Hamiltonian orbits.
    pub drift_budget: Option<f64>,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            h: 1e-2,
            method: Method::ImplicitMidpoint,
            fixed_point_tol: 1e-12,
            fixed_point_max_iter: 50,
            drift_budget: None,
        }
    }
}

impl IntegrationOptions {
    pub fn with_step(h: f64) -> Self {
        Self {
            h,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::InvalidArgument(format!("step must be positive, got {}", self.h)));
        }
        Ok(())
    }
}

/// One-step integrator with preallocated scratch.
pub struct Stepper<'a> {
    field: &'a VectorFieldSpec,
    opts: IntegrationOptions,
    cov: Vec<f64>,
    k: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(field: &'a VectorFieldSpec, opts: IntegrationOptions) -> Self {
        let d = field.dim();
        Self {
            field,
            opts,
            cov: vec![0.0; d],
            k: vec![0.0; d],
            k2: vec![0.0; d],
            k3: vec![0.0; d],
            k4: vec![0.0; d],
            tmp: vec![0.0; d],
        }
    }

    pub fn field(&self) -> &VectorFieldSpec {
        self.field
    }

    pub fn options(&self) -> &IntegrationOptions {
        &self.opts
    }

    /// Advances `x` from time `s` by `dt` (which may be negative).
    pub fn step(&mut self, x: &mut [f64], s: f64, dt: f64) -> Result<()> {
        match self.opts.method {
            Method::ImplicitMidpoint => self.midpoint(x, s, dt)?,
            Method::Rk4 => self.rk4(x, s, dt),
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { t: s + dt });
        }
        Ok(())
    }

    fn midpoint(&mut self, x: &mut [f64], s: f64, dt: f64) -> Result<()> {
        let f = self.field;
        f.eval_into(x, s, &mut self.cov, &mut self.k);
        let sm = s + 0.5 * dt;
        let mut converged = false;
        for _ in 0..self.opts.fixed_point_max_iter {
            for i in 0..x.len() {
                self.tmp[i] = x[i] + 0.5 * dt * self.k[i];
            }
            f.eval_into(&self.tmp, sm, &mut self.cov, &mut self.k2);
            let mut diff = 0.0f64;
            for i in 0..x.len() {
                diff = diff.max((dt * (self.k2[i] - self.k[i])).abs());
            }
            std::mem::swap(&mut self.k, &mut self.k2);
            if !diff.is_finite() {
                return Err(Error::BlowUp { t: s });
            }
            if diff <= self.opts.fixed_point_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::StiffStep { t: s, h: dt.abs() });
        }
        for i in 0..x.len() {
            x[i] += dt * self.k[i];
        }
        Ok(())
    }

    fn rk4(&mut self, x: &mut [f64], s: f64, dt: f64) {
        let f = self.field;
        let n = x.len();
        f.eval_into(x, s, &mut self.cov, &mut self.k);
        for i in 0..n {
            self.tmp[i] = x[i] + 0.5 * dt * self.k[i];
        }
        f.eval_into(&self.tmp, s + 0.5 * dt, &mut self.cov, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = x[i] + 0.5 * dt * self.k2[i];
        }
        f.eval_into(&self.tmp, s + 0.5 * dt, &mut self.cov, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = x[i] + dt * self.k3[i];
        }
        f.eval_into(&self.tmp, s + dt, &mut self.cov, &mut self.k4);
        for i in 0..n {
            x[i] += dt / 6.0 * (self.k[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

/// An orbit that can be advanced incrementally on the uniform grid `t = i·h`.
pub struct OrbitCursor<'a> {
    stepper: Stepper<'a>,
    x: Vec<f64>,
    t: f64,
    s0: f64,
}

impl<'a> OrbitCursor<'a> {
    pub fn new(
        field: &'a VectorFieldSpec,
        x0: &[f64],
        s0: f64,
        opts: IntegrationOptions,
    ) -> Result<Self> {
        opts.validate()?;
        check_dim(field.dim(), x0.len())?;
        Ok(Self {
            stepper: Stepper::new(field, opts),
            x: x0.to_vec(),
            t: 0.0,
            s0,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &[f64] {
        &self.x
    }

    pub fn phase(&self) -> f64 {
        self.s0 + self.t
    }

    pub fn field(&self) -> &VectorFieldSpec {
        self.stepper.field
    }

    /// Steps forward until `target`, calling `visit(t, x)` after every step.
    pub fn advance_to(&mut self, target: f64, mut visit: impl FnMut(f64, &[f64])) -> Result<()> {
        let h = self.stepper.opts.h;
        while self.t < target - 1e-12 * h.max(target.abs()) {
            let idx = (self.t / h + 1e-9).floor() + 1.0;
            let next = (idx * h).min(target);
            let dt = next - self.t;
            self.stepper.step(&mut self.x, self.s0 + self.t, dt)?;
            self.t = if (next - target).abs() <= 1e-12 * h.max(target.abs()) {
                target
            } else {
                next
            };
            visit(self.t, &self.x);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    source: VectorFieldSpec,
    opts: IntegrationOptions,
    dim: usize,
    periodic: Vec<bool>,
    s0: f64,
    h: f64,
    times: Vec<f64>,
    lifts: Vec<f64>,
    energy: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Field that generated the orbit.
    pub fn field(&self) -> &VectorFieldSpec {
        &self.source
    }

    pub fn options(&self) -> &IntegrationOptions {
        &self.opts
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Phase (time offset) at which the orbit started.
    pub fn start_phase(&self) -> f64 {
        self.s0
    }

    pub fn horizon(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn lift(&self, i: usize) -> &[f64] {
        &self.lifts[i * self.dim..(i + 1) * self.dim]
    }

    pub fn first_lift(&self) -> &[f64] {
        self.lift(0)
    }

    pub fn last_lift(&self) -> &[f64] {
        self.lift(self.len() - 1)
    }

    pub fn point(&self, i: usize) -> PhasePoint {
        PhasePoint::from_lift_unchecked(self.lift(i).to_vec(), &self.periodic)
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn energy_log(&self) -> Option<&[f64]> {
        self.energy.as_deref()
    }

    /// `max_t |F(x_t) − F(x_0)|` for autonomous Hamiltonian orbits.
    pub fn energy_drift(&self) -> Option<f64> {
        self.energy.as_ref().map(|e| {
            let e0 = e[0];
            e.iter().map(|v| (v - e0).abs()).fold(0.0, f64::max)
        })
    }

    /// CSV with columns `t, x0..x{d-1} (lift), w0..w{d-1} (wrapped), F`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let d = self.dim;
        let mut header = vec!["t".to_string()];
        header.extend((0..d).map(|j| format!("x{j}")));
        header.extend((0..d).map(|j| format!("w{j}")));
        header.push("F".into());
        writeln!(out, "{}", header.join(","))?;
        for i in 0..self.len() {
            let p = self.point(i);
            let mut row = vec![format!("{}", self.times[i])];
            row.extend(p.lift().iter().map(|v| format!("{v}")));
            row.extend(p.wrapped().iter().map(|v| format!("{v}")));
            row.push(
                self.energy
                    .as_ref()
                    .map_or_else(String::new, |e| format!("{}", e[i])),
            );
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Integrates from `x0` for time `horizon`, starting at phase 0.
pub fn integrate(
    field: &VectorFieldSpec,
    x0: &PhasePoint,
    horizon: f64,
    opts: IntegrationOptions,
) -> Result<Trajectory> {
    integrate_from(field, x0, 0.0, horizon, opts)
}

/// Integrates from `x0` starting at phase `s0` for time `horizon`.
pub fn integrate_from(
    field: &VectorFieldSpec,
    x0: &PhasePoint,
    s0: f64,
    horizon: f64,
    opts: IntegrationOptions,
) -> Result<Trajectory> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    let mut cursor = OrbitCursor::new(field, x0.lift(), s0, opts)?;
    let d = field.dim();
    let cap = (horizon / opts.h).ceil() as usize + 2;
    let mut times = Vec::with_capacity(cap);
    let mut lifts = Vec::with_capacity(cap * d);
    times.push(0.0);
    lifts.extend_from_slice(x0.lift());
    cursor.advance_to(horizon, |t, x| {
        times.push(t);
        lifts.extend_from_slice(x);
    })?;
    let energy = field.is_autonomous().then(|| {
        (0..times.len())
            .filter_map(|i| field.energy(&lifts[i * d..(i + 1) * d]))
            .collect::<Vec<_>>()
    });
    let energy = energy.filter(|e| !e.is_empty());
    let traj = Trajectory {
        source: field.clone(),
        opts,
        dim: d,
        periodic: field.space().periodic().to_vec(),
        s0,
        h: opts.h,
        times,
        lifts,
        energy,
    };
    if let (Some(budget), Some(drift)) = (opts.drift_budget, traj.energy_drift()) {
        if drift > budget {
            return Err(Error::DriftBudgetExceeded { drift, budget });
        }
    }
    Ok(traj)
}

/// Endpoint of the flow for a signed duration; negative durations run backwards.
pub fn flow(
    field: &VectorFieldSpec,
    x0: &[f64],
    s0: f64,
    duration: f64,
    opts: IntegrationOptions,
) -> Result<Vec<f64>> {
    opts.validate()?;
    check_dim(field.dim(), x0.len())?;
    let mut x = x0.to_vec();
    if duration == 0.0 {
        return Ok(x);
    }
    let n = (duration.abs() / opts.h - 1e-9).ceil().max(1.0) as usize;
    let sign = duration.signum();
    let mut stepper = Stepper::new(field, opts);
    for i in 0..n {
        let t0 = (i as f64 * opts.h).min(duration.abs());
        let t1 = ((i + 1) as f64 * opts.h).min(duration.abs());
        stepper.step(&mut x, s0 + sign * t0, sign * (t1 - t0))?;
    }
    Ok(x)
}

/// Time-one map of a 1-periodic Hamiltonian flow started at phase 0, with the arc `t ↦ φ_t x0`.
pub fn time_one_map(
    f: &HamiltonianSpec,
    space: &PhaseSpace,
    x0: &PhasePoint,
    opts: IntegrationOptions,
) -> Result<(PhasePoint, Trajectory)> {
    let m = (1.0 / opts.h).round();
    if m < 1.0 || (m * opts.h - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "time-one map needs h = 1/m, got {}",
            opts.h
        )));
    }
    let field = VectorFieldSpec::hamiltonian(f.clone(), space)?;
    let opts = IntegrationOptions {
        h: 1.0 / m,
        ..opts
    };
    let arc = integrate_from(&field, x0, 0.0, 1.0, opts)?;
    Ok((arc.point(arc.len() - 1), arc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{wrap, CohomologyClass};
    use crate::trig::{TrigSeries, TrigTerm};
    use std::f64::consts::PI;

    #[test]
    fn sgrad_form_examples() {
        let s = PhaseSpace::standard_torus(1);
        let x = wrap(&[0.1, 0.2], &s).unwrap();
        let half = ClosedOneForm::constant(CohomologyClass::dq(1, 0, 0.5));
        assert_eq!(sgrad_form(&half, &s, &x).unwrap(), vec![0.5, 0.0]);
        let zero = ClosedOneForm::constant(CohomologyClass::zero(2));
        assert_eq!(sgrad_form(&zero, &s, &x).unwrap(), vec![0.0, 0.0]);
        let tw = PhaseSpace::twisted_torus(2f64.sqrt() - 1.0).unwrap();
        let y = wrap(&[0.1, 0.2, 0.3, 0.4], &tw).unwrap();
        let dq1 = ClosedOneForm::constant(CohomologyClass::dq(2, 0, 1.0));
        let v = sgrad_form(&dq1, &tw, &y).unwrap();
        let want = [1.0, 0.0, 0.0, 0.0];
        for i in 0..4 {
            assert!((v[i] - want[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn sgrad_examples() {
        let s = PhaseSpace::standard_torus(1);
        let x = wrap(&[0.1, 0.2], &s).unwrap();
        let p1 = HamiltonianSpec::Linear(vec![1.0, 0.0]);
        assert_eq!(sgrad(&p1, &s, &x, 0.0).unwrap(), vec![0.0, 1.0]);
        let c = HamiltonianSpec::constant(2, 4.0);
        assert_eq!(sgrad(&c, &s, &x, 0.0).unwrap(), vec![0.0, 0.0]);

        let gamma = 2f64.sqrt() - 1.0;
        let tw = PhaseSpace::twisted_torus(gamma).unwrap();
        let f = HamiltonianSpec::sin_squared(4, 0);
        for &p in &[0.1, 0.2, 0.33] {
            let y = wrap(&[p, 0.4, 0.5, 0.6], &tw).unwrap();
            let v = sgrad(&f, &tw, &y, 0.0).unwrap();
            let c = PI * (2.0 * PI * p).sin();
            let want = [0.0, 0.0, c, -gamma * c];
            for i in 0..4 {
                assert!((v[i] - want[i]).abs() < 1e-14, "{v:?}");
            }
        }
    }

    #[test]
    fn defining_identity_holds() {
        let tw = PhaseSpace::twisted_torus(0.37).unwrap();
        let f = HamiltonianSpec::Fourier(
            TrigSeries::new(
                4,
                0.0,
                vec![
                    TrigTerm::new(vec![1, 0, 1, 0], 0, 0.3, 0.2),
                    TrigTerm::new(vec![0, 2, 0, -1], 0, -0.1, 0.4),
                ],
            )
            .unwrap(),
        );
        let x = wrap(&[0.1, 0.7, 0.3, 0.9], &tw).unwrap();
        let v = sgrad(&f, &tw, &x, 0.0).unwrap();
        let df = f.grad(x.lift(), 0.0);
        for w in [[1.0, 0.0, 0.0, 0.0], [0.2, -0.3, 0.5, 0.7]] {
            let lhs = tw.omega().omega(&v, &w) + df.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
            assert!(lhs.abs() < 1e-12);
        }
    }

    #[test]
    fn integrate_sin_squared_orbit() {
        let s = PhaseSpace::standard_torus(1);
        let field = VectorFieldSpec::hamiltonian(HamiltonianSpec::sin_squared(2, 0), &s).unwrap();
        let x0 = wrap(&[0.25, 0.0], &s).unwrap();
        let tr = integrate(&field, &x0, 1.0, IntegrationOptions::with_step(1e-3)).unwrap();
        let end = tr.last_lift();
        assert!((end[0] - 0.25).abs() < 1e-10);
        assert!((end[1] - PI).abs() < 1e-6);
        assert_eq!(tr.len(), 1001);
        assert!(tr.energy_drift().unwrap() < 1e-14);
    }

    #[test]
    fn zero_field_is_constant() {
        let s = PhaseSpace::standard_torus(1);
        let field = VectorFieldSpec::hamiltonian(HamiltonianSpec::constant(2, 1.0), &s).unwrap();
        let x0 = wrap(&[0.3, 0.4], &s).unwrap();
        let tr = integrate(&field, &x0, 2.0, IntegrationOptions::default()).unwrap();
        assert!((0..tr.len()).all(|i| tr.lift(i) == [0.3, 0.4]));
    }

    #[test]
    fn constant_form_translates() {
        let s = PhaseSpace::standard_torus(1);
        let alpha = ClosedOneForm::constant(CohomologyClass::dq(1, 0, 0.5));
        let field = VectorFieldSpec::locally_hamiltonian(alpha, &s).unwrap();
        let x0 = wrap(&[0.0, 0.0], &s).unwrap();
        let tr = integrate(&field, &x0, 1.0, IntegrationOptions::default()).unwrap();
        assert!((tr.last_lift()[0] - 0.5).abs() < 1e-14);
        assert!(tr.energy_log().is_none());
    }

    #[test]
    fn last_step_may_be_shorter() {
        let s = PhaseSpace::standard_torus(1);
        let field = VectorFieldSpec::hamiltonian(HamiltonianSpec::sin_squared(2, 0), &s).unwrap();
        let x0 = wrap(&[0.1, 0.0], &s).unwrap();
        let tr = integrate(&field, &x0, 0.105, IntegrationOptions::with_step(0.01)).unwrap();
        assert_eq!(tr.len(), 12);
        assert!((tr.horizon() - 0.105).abs() < 1e-15);
    }

    #[test]
    fn time_one_map_examples() {
        let s = PhaseSpace::standard_torus(1);
        let opts = IntegrationOptions::with_step(0.01);
        let f = HamiltonianSpec::sin_squared(2, 0);
        let x0 = wrap(&[0.2, 0.1], &s).unwrap();
        let (end, arc) = time_one_map(&f, &s, &x0, opts).unwrap();
        let field = VectorFieldSpec::hamiltonian(f, &s).unwrap();
        let direct = integrate(&field, &x0, 1.0, opts).unwrap();
        for i in 0..2 {
            assert!((end.lift()[i] - direct.last_lift()[i]).abs() < 1e-12);
        }
        assert_eq!(arc.len(), 101);

        let zero = HamiltonianSpec::constant(2, 0.0);
        let (end, _) = time_one_map(&zero, &s, &x0, opts).unwrap();
        assert_eq!(end.lift(), x0.lift());

        let forced = HamiltonianSpec::forced_sin_squared(2, 0, 0.2);
        let x0 = wrap(&[0.0, 0.3], &s).unwrap();
        let (end, arc) = time_one_map(&forced, &s, &x0, opts).unwrap();
        assert_eq!(end.lift()[0], 0.0);
        assert!((0..arc.len()).all(|i| arc.lift(i)[0] == 0.0));

        assert!(time_one_map(&forced, &s, &x0, IntegrationOptions::with_step(0.3)).is_err());
    }

    #[test]
    fn stiff_step_is_reported() {
        let s = PhaseSpace::standard_torus(1);
        // Strongly q-dependent field with a huge step: fixed point iteration diverges.
        let f = HamiltonianSpec::Fourier(
            TrigSeries::new(
                2,
                0.0,
                vec![
                    TrigTerm::new(vec![3, 0], 0, 50.0, 0.0),
                    TrigTerm::new(vec![0, 3], 0, 50.0, 0.0),
                ],
            )
            .unwrap(),
        );
        let field = VectorFieldSpec::hamiltonian(f, &s).unwrap();
        let x0 = wrap(&[0.0, 0.1], &s).unwrap();
        let err = integrate(&field, &x0, 1.0, IntegrationOptions::with_step(0.5)).unwrap_err();
        assert!(matches!(err, Error::StiffStep { .. } | Error::BlowUp { .. }));
    }

    #[test]
    fn rk4_agrees_with_midpoint() {
        let s = PhaseSpace::standard_torus(1);
        let f = HamiltonianSpec::Fourier(
            TrigSeries::new(
                2,
                0.0,
                vec![
                    TrigTerm::new(vec![1, 0], 0, 0.2, 0.0),
                    TrigTerm::new(vec![0, 1], 0, 0.0, 0.15),
                ],
            )
            .unwrap(),
        );
        let field = VectorFieldSpec::hamiltonian(f, &s).unwrap();
        let x0 = [0.1, 0.2];
        let a = flow(&field, &x0, 0.0, 2.0, IntegrationOptions::with_step(1e-3)).unwrap();
        let b = flow(
            &field,
            &x0,
            0.0,
            2.0,
            IntegrationOptions {
                method: Method::Rk4,
                ..IntegrationOptions::with_step(1e-3)
            },
        )
        .unwrap();
        for i in 0..2 {
            assert!((a[i] - b[i]).abs() < 1e-5);
        }
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let s = PhaseSpace::standard_torus(1);
        let field = VectorFieldSpec::hamiltonian(HamiltonianSpec::sin_squared(2, 0), &s).unwrap();
        let x0 = wrap(&[0.25, 0.0], &s).unwrap();
        let tr = integrate(&field, &x0, 0.05, IntegrationOptions::default()).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x0,x1,w0,w1,F");
        assert_eq!(lines.len(), 7);
    }
}
