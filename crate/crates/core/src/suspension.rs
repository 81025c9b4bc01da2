//! Suspension of a 1-periodic Hamiltonian `F(x, s)` on `M` to the autonomous
//! `H(x, r, s) = F(x, s) + r` on `N = M × T*S¹`, rotation pairings of the
//! time-one map, and the correspondence between invariant measures of the
//! suspended flow and of the time-one map.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_from, IntegrationOptions, OrbitCursor, VectorFieldSpec};
use crate::error::{check_dim, Error, Result};
use crate::fields::HamiltonianSpec;
use crate::geometry::{unit_mod, ClosedOneForm, PhasePoint, PhaseSpace};
use crate::measures::{doubling_search, dot, EmpiricalMeasure, Observable, SearchOutcome, SeedRun};
use crate::region::RegionSpec;

/// Disagreement between the two time-one pairing formulas that raises a warning.
pub const QUADRATURE_WARN: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedPoint {
    pub base: PhasePoint,
    pub r: f64,
    /// Lift of the circle coordinate.
    pub s: f64,
}

impl ExtendedPoint {
    pub fn new(base: PhasePoint, r: f64, s: f64) -> Self {
        Self { base, r, s }
    }

    pub fn s_wrapped(&self) -> f64 {
        unit_mod(self.s)
    }

    /// The `ℝ`-action `(x, r, s) ↦ (x, r + c, s)`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            base: self.base.clone(),
            r: self.r + c,
            s: self.s,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuspendedHamiltonian {
    f: HamiltonianSpec,
}

impl SuspendedHamiltonian {
    pub fn new(f: HamiltonianSpec) -> Self {
        Self { f }
    }

    pub fn base(&self) -> &HamiltonianSpec {
        &self.f
    }

    pub fn eval(&self, x: &[f64], r: f64, s: f64) -> f64 {
        self.f.eval(x, s) + r
    }

    pub fn eval_point(&self, z: &ExtendedPoint) -> f64 {
        self.eval(z.base.lift(), z.r, z.s)
    }
}

/// `stab(X) = X × {r = 0}`.
pub fn stab(x: &RegionSpec, s_resolution: usize) -> Result<RegionSpec> {
    x.stabilized(s_resolution)
}

/// Orbit of the suspended flow.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedTrajectory {
    dim: usize,
    periodic: Vec<bool>,
    times: Vec<f64>,
    xs: Vec<f64>,
    rs: Vec<f64>,
    ss: Vec<f64>,
    hs: Vec<f64>,
}

impl ExtendedTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.xs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn r(&self, i: usize) -> f64 {
        self.rs[i]
    }

    pub fn s(&self, i: usize) -> f64 {
        self.ss[i]
    }

    pub fn energy(&self, i: usize) -> f64 {
        self.hs[i]
    }

    pub fn point(&self, i: usize) -> ExtendedPoint {
        ExtendedPoint {
            base: PhasePoint::from_lift_unchecked(self.x(i).to_vec(), &self.periodic),
            r: self.rs[i],
            s: self.ss[i],
        }
    }

    pub fn last(&self) -> ExtendedPoint {
        self.point(self.len() - 1)
    }

    /// `max_t |H(z_t) − H(z_0)|`.
    pub fn energy_drift(&self) -> f64 {
        let h0 = self.hs[0];
        self.hs.iter().map(|h| (h - h0).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_r(&self) -> f64 {
        self.rs.iter().map(|r| r.abs()).fold(0.0, f64::max)
    }

    /// Projection to `M × S¹` as a time-average measure with trapezoidal weights.
    pub fn base_measure(&self, space: &PhaseSpace) -> Result<EmpiricalMeasure> {
        let n = self.len();
        let pts: Vec<Vec<f64>> = (0..n).map(|i| self.x(i).to_vec()).collect();
        let w: Vec<f64> = if n == 1 {
            vec![1.0]
        } else {
            (0..n)
                .map(|i| {
                    let lo = self.times[i.saturating_sub(1)];
                    let hi = self.times[(i + 1).min(n - 1)];
                    0.5 * (hi - lo)
                })
                .collect()
        };
        EmpiricalMeasure::from_weighted(space, &pts, &self.ss, &w)
    }

    /// CSV with columns `t, x0..x{d-1} (lift), r, s (lift), H`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut header = vec!["t".to_string()];
        header.extend((0..self.dim).map(|j| format!("x{j}")));
        header.extend(["r".to_string(), "s".to_string(), "H".to_string()]);
        writeln!(out, "{}", header.join(","))?;
        for i in 0..self.len() {
            let mut row = vec![format!("{}", self.times[i])];
            row.extend(self.x(i).iter().map(|v| format!("{v}")));
            row.push(format!("{}", self.rs[i]));
            row.push(format!("{}", self.ss[i]));
            row.push(format!("{}", self.hs[i]));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Flow of `H = F + r`: `x` follows the time-dependent flow of `F` from phase `s(0)`,
/// `s` advances at unit speed, and `r` integrates `−∂F/∂s` by Simpson's rule on each step.
pub fn suspension_flow(
    h: &SuspendedHamiltonian,
    space: &PhaseSpace,
    z0: &ExtendedPoint,
    horizon: f64,
    opts: IntegrationOptions,
) -> Result<ExtendedTrajectory> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    check_dim(space.dim(), z0.base.dim())?;
    if !z0.r.is_finite() || !z0.s.is_finite() {
        return Err(Error::InvalidPoint("non-finite extended coordinate".into()));
    }
    let f = h.base();
    let field = VectorFieldSpec::hamiltonian(f.clone(), space)?;
    let d = space.dim();
    let s0 = z0.s;
    let mut cursor = OrbitCursor::new(&field, z0.base.lift(), s0, opts)?;
    let cap = (horizon / opts.h).ceil() as usize + 2;
    let mut out = ExtendedTrajectory {
        dim: d,
        periodic: space.periodic().to_vec(),
        times: Vec::with_capacity(cap),
        xs: Vec::with_capacity(cap * d),
        rs: Vec::with_capacity(cap),
        ss: Vec::with_capacity(cap),
        hs: Vec::with_capacity(cap),
    };
    let x0 = z0.base.lift();
    out.times.push(0.0);
    out.xs.extend_from_slice(x0);
    out.rs.push(z0.r);
    out.ss.push(s0);
    out.hs.push(h.eval(x0, z0.r, s0));

    let time_dependent = f.is_time_dependent();
    let mut prev = x0.to_vec();
    let mut mid = vec![0.0; d];
    let mut prev_t = 0.0;
    let mut r = z0.r;
    cursor.advance_to(horizon, |t, x| {
        let dt = t - prev_t;
        let (sa, sb) = (s0 + prev_t, s0 + t);
        if time_dependent {
            for j in 0..d {
                mid[j] = 0.5 * (prev[j] + x[j]);
            }
            let q = f.dds(&prev, sa) + 4.0 * f.dds(&mid, 0.5 * (sa + sb)) + f.dds(x, sb);
            r -= dt / 6.0 * q;
        }
        out.times.push(t);
        out.xs.extend_from_slice(x);
        out.rs.push(r);
        out.ss.push(sb);
        out.hs.push(f.eval(x, sb) + r);
        prev.copy_from_slice(x);
        prev_t = t;
    })?;
    Ok(out)
}

/// Sup-distance between `h_T(S_c z0)` and `S_c(h_T z0)`.
pub fn shift_equivariance_check(
    h: &SuspendedHamiltonian,
    space: &PhaseSpace,
    z0: &ExtendedPoint,
    c: f64,
    horizon: f64,
    opts: IntegrationOptions,
) -> Result<f64> {
    let a = suspension_flow(h, space, &z0.shifted(c), horizon, opts)?.last();
    let b = suspension_flow(h, space, z0, horizon, opts)?.last().shifted(c);
    let dx = a
        .base
        .lift()
        .iter()
        .zip(b.base.lift())
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max);
    Ok(dx.max((a.r - b.r).abs()).max((a.s - b.s).abs()))
}

/// Both expressions for `⟨a, ρ(μ, φ)⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeOnePairing {
    /// `∫_M (∫_{γ_x} α) dμ(x)`.
    pub loop_integral: f64,
    /// `∫₀¹ ∫_M α(sgrad F_t)(φ_t x) dμ(x) dt`, trapezoidal in `t`.
    pub double_integral: f64,
    pub discrepancy: f64,
}

struct ArcIntegrals {
    loop_integral: f64,
    double_integral: f64,
}

fn time_one_arc(
    field: &VectorFieldSpec,
    alpha: &ClosedOneForm,
    x0: &[f64],
    opts: IntegrationOptions,
) -> Result<ArcIntegrals> {
    let d = field.dim();
    let mut cursor = OrbitCursor::new(field, x0, 0.0, opts)?;
    let (mut cov, mut v, mut a) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    let mut density = |x: &[f64], s: f64| {
        field.eval_into(x, s, &mut cov, &mut v);
        alpha.covector_into(x, &mut a);
        dot(&a, &v)
    };
    let mut prev_f = density(x0, 0.0);
    let mut prev_t = 0.0;
    let mut acc = 0.0;
    cursor.advance_to(1.0, |t, x| {
        let fx = density(x, t);
        acc += 0.5 * (t - prev_t) * (prev_f + fx);
        prev_f = fx;
        prev_t = t;
    })?;
    Ok(ArcIntegrals {
        loop_integral: alpha.path_integral(x0, cursor.state()),
        double_integral: acc,
    })
}

fn time_one_step(opts: IntegrationOptions) -> Result<IntegrationOptions> {
    let m = (1.0 / opts.h).round();
    if m < 1.0 || (m * opts.h - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("time-one map needs h = 1/m, got {}", opts.h)));
    }
    Ok(IntegrationOptions {
        h: 1.0 / m,
        ..opts
    })
}

/// `⟨a, ρ(μ, φ)⟩` for the time-one map `φ` of `F` (started at phase 0), by
/// loop integrals along the arcs `t ↦ φ_t x` and by the double integral.
pub fn rotation_pairing_time_one(
    mu: &EmpiricalMeasure,
    f: &HamiltonianSpec,
    alpha: &ClosedOneForm,
    space: &PhaseSpace,
    opts: IntegrationOptions,
) -> Result<TimeOnePairing> {
    check_dim(space.dim(), mu.dim())?;
    check_dim(space.dim(), alpha.dim())?;
    let opts = time_one_step(opts)?;
    let field = VectorFieldSpec::hamiltonian(f.clone(), space)?;
    let arcs = (0..mu.len())
        .into_par_iter()
        .map(|i| time_one_arc(&field, alpha, mu.lift(i), opts))
        .collect::<Result<Vec<_>>>()?;
    let w = mu.weights();
    let loop_integral: f64 = arcs.iter().zip(w).map(|(a, w)| w * a.loop_integral).sum();
    let double_integral: f64 = arcs.iter().zip(w).map(|(a, w)| w * a.double_integral).sum();
    let discrepancy = (loop_integral - double_integral).abs();
    if discrepancy > QUADRATURE_WARN {
        return Err(Error::QuadratureWarning {
            double_integral,
            loop_integral,
        });
    }
    Ok(TimeOnePairing {
        loop_integral,
        double_integral,
        discrepancy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeOneSearchOptions {
    /// First number of iterates.
    pub n0: usize,
    pub n_max: usize,
    pub tol: f64,
    pub integration: IntegrationOptions,
}

impl Default for TimeOneSearchOptions {
    fn default() -> Self {
        Self {
            n0: 100,
            n_max: 10_000,
            tol: 1e-4,
            integration: IntegrationOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TimeOneSearch {
    /// Horizons in the report count iterates of `φ`.
    pub outcome: SearchOutcome,
    /// Uniform measure on the iterates `x, φx, ..., φ^{N−1}x` of the best seed.
    pub measure: EmpiricalMeasure,
    pub pairing: TimeOnePairing,
}

struct IterateRun<'a> {
    alpha: &'a ClosedOneForm,
    cursor: OrbitCursor<'a>,
    x0: Vec<f64>,
}

impl SeedRun for IterateRun<'_> {
    fn advance_to(&mut self, horizon: f64) -> Result<()> {
        self.cursor.advance_to(horizon, |_, _| {})
    }

    fn value(&self) -> f64 {
        let n = self.cursor.time().round();
        if n <= 0.0 {
            return 0.0;
        }
        self.alpha.path_integral(&self.x0, self.cursor.state()) / n
    }
}

/// Seed maximizing `|(1/N) Σ_k ∫_{γ_{φ^k x}} α|`, with `N` doubling until the best value settles.
pub fn time_one_extremal_search(
    f: &HamiltonianSpec,
    alpha: &ClosedOneForm,
    space: &PhaseSpace,
    seeds: &[PhasePoint],
    opts: &TimeOneSearchOptions,
) -> Result<TimeOneSearch> {
    check_dim(space.dim(), alpha.dim())?;
    let integration = time_one_step(opts.integration)?;
    let field = VectorFieldSpec::hamiltonian(f.clone(), space)?;
    let mut runs = seeds
        .iter()
        .map(|x| {
            check_dim(space.dim(), x.dim())?;
            Ok(IterateRun {
                alpha,
                cursor: OrbitCursor::new(&field, x.lift(), 0.0, integration)?,
                x0: x.lift().to_vec(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let outcome = doubling_search(
        &mut runs,
        seeds,
        opts.n0 as f64,
        opts.n_max.max(opts.n0) as f64,
        opts.tol,
    )?;
    let n = outcome.final_horizon().round() as usize;
    let measure = iterate_measure(&field, &outcome.best_seed, n, integration, space)?;
    let pairing = rotation_pairing_time_one(&measure, f, alpha, space, integration)?;
    Ok(TimeOneSearch {
        outcome,
        measure,
        pairing,
    })
}

/// Uniform measure on `x, φx, ..., φ^{n−1}x`.
pub fn iterate_measure(
    field: &VectorFieldSpec,
    x0: &[f64],
    n: usize,
    opts: IntegrationOptions,
    space: &PhaseSpace,
) -> Result<EmpiricalMeasure> {
    if n == 0 {
        return Err(Error::EmptyTrajectory);
    }
    let opts = time_one_step(opts)?;
    let mut cursor = OrbitCursor::new(field, x0, 0.0, opts)?;
    let mut pts = Vec::with_capacity(n);
    pts.push(x0.to_vec());
    for k in 1..n {
        cursor.advance_to(k as f64, |_, _| {})?;
        pts.push(cursor.state().to_vec());
    }
    EmpiricalMeasure::uniform(space, &pts, &vec![0.0; n])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step7Report {
    pub defects: Vec<f64>,
    pub max_defect: f64,
}

/// `max_G |∫ G dσ − ∫₀¹ ∫_M G(φ_s x, s) dμ(x) ds|` over the test observables,
/// with the inner time integral by the trapezoidal rule on each arc.
pub fn step7_correspondence_check(
    sigma: &EmpiricalMeasure,
    mu: &EmpiricalMeasure,
    f: &HamiltonianSpec,
    space: &PhaseSpace,
    observables: &[&dyn Observable],
    opts: IntegrationOptions,
) -> Result<Step7Report> {
    check_dim(space.dim(), sigma.dim())?;
    check_dim(space.dim(), mu.dim())?;
    let opts = time_one_step(opts)?;
    let field = VectorFieldSpec::hamiltonian(f.clone(), space)?;
    let arcs = (0..mu.len())
        .into_par_iter()
        .map(|i| {
            let x = PhasePoint::from_lift_unchecked(mu.lift(i).to_vec(), space.periodic());
            integrate_from(&field, &x, 0.0, 1.0, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let defects: Vec<f64> = observables
        .iter()
        .map(|g| {
            let lhs = sigma.expect(|x, s| g.value(x, unit_mod(s)));
            let rhs: f64 = arcs
                .iter()
                .zip(mu.weights())
                .map(|(arc, w)| {
                    let t = arc.times();
                    let mut acc = 0.0;
                    for k in 1..arc.len() {
                        acc += 0.5
                            * (t[k] - t[k - 1])
                            * (g.value(arc.lift(k - 1), t[k - 1]) + g.value(arc.lift(k), t[k]));
                    }
                    w * acc
                })
                .sum();
            (lhs - rhs).abs()
        })
        .collect();
    let max_defect = defects.iter().copied().fold(0.0, f64::max);
    Ok(Step7Report {
        defects,
        max_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate;
    use crate::geometry::{wrap, CohomologyClass};
    use crate::measures::{empirical_measure, rotation_pairing, seed_grid, SeedLayout};
    use crate::trig::{TrigSeries, TrigTerm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn forced() -> HamiltonianSpec {
        HamiltonianSpec::forced_sin_squared(2, 0, 0.2)
    }

    fn mixed_forced() -> HamiltonianSpec {
        HamiltonianSpec::Fourier(
            TrigSeries::new(
                2,
                0.0,
                vec![
                    TrigTerm::new(vec![1, 0], 0, 0.3, 0.0),
                    TrigTerm::new(vec![0, 1], 1, 0.0, 0.2),
                    TrigTerm::new(vec![1, 1], -1, 0.1, 0.05),
                ],
            )
            .unwrap(),
        )
    }

    fn z(space: &PhaseSpace, x: &[f64], r: f64, s: f64) -> ExtendedPoint {
        ExtendedPoint::new(wrap(x, space).unwrap(), r, s)
    }

    #[test]
    fn suspended_hamiltonian_adds_r() {
        let h = SuspendedHamiltonian::new(forced());
        let x = [0.3, 0.1];
        assert_eq!(h.eval(&x, 0.7, 0.2), forced().eval(&x, 0.2) + 0.7);
    }

    #[test]
    fn stab_examples() {
        let s = PhaseSpace::standard_torus(1);
        let x = RegionSpec::levels(&s, vec![(0, 0.0)], 8).unwrap();
        let st = stab(&x, 4).unwrap();
        assert_eq!(st.pins().unwrap(), &[(0, 0.0), (2, 0.0)]);
        assert_eq!(st.grid().len(), 32);
        assert!(st.contains(&[0.0, 0.3, 0.0, 0.77]));
        assert!(!st.contains(&[0.0, 0.3, 0.1, 0.77]));
        assert!(stab(&RegionSpec::empty(&s), 4).unwrap().is_empty());
    }

    #[test]
    fn suspension_flow_examples() {
        let s = PhaseSpace::standard_torus(1);
        let opts = IntegrationOptions::default();
        let auto = SuspendedHamiltonian::new(HamiltonianSpec::sin_squared(2, 0));
        let tr = suspension_flow(&auto, &s, &z(&s, &[0.2, 0.1], 0.0, 0.3), 5.0, opts).unwrap();
        assert!((0..tr.len()).all(|i| tr.r(i) == 0.0));

        let h = SuspendedHamiltonian::new(mixed_forced());
        let tr = suspension_flow(&h, &s, &z(&s, &[0.2, 0.1], 0.0, 0.3), 7.5, opts).unwrap();
        for i in 0..tr.len() {
            assert!((tr.s(i) - 0.3 - tr.times()[i]).abs() < 1e-12);
        }
        let last = tr.last();
        assert!((last.s - 0.3 - 7.5).abs() < 1e-12);
    }

    #[test]
    fn base_component_is_the_phase_shifted_flow() {
        let s = PhaseSpace::standard_torus(1);
        let f = mixed_forced();
        let field = VectorFieldSpec::hamiltonian(f.clone(), &s).unwrap();
        let opts = IntegrationOptions::default();
        let x0 = wrap(&[0.2, 0.1], &s).unwrap();
        let direct = integrate_from(&field, &x0, 0.4, 3.0, opts).unwrap();
        let h = SuspendedHamiltonian::new(f);
        let tr = suspension_flow(&h, &s, &ExtendedPoint::new(x0, 0.0, 0.4), 3.0, opts).unwrap();
        assert_eq!(tr.x(tr.len() - 1), direct.last_lift());
    }

    #[test]
    fn builtin_suspension_conserves_h() {
        let s = PhaseSpace::standard_torus(1);
        let h = SuspendedHamiltonian::new(forced());
        let tr = suspension_flow(&h, &s, &z(&s, &[0.2, 0.1], 0.0, 0.0), 1e3, IntegrationOptions::default())
            .unwrap();
        assert!(tr.energy_drift() <= 1e-8, "{}", tr.energy_drift());
    }

    #[test]
    fn generic_drift_is_second_order_and_r_is_bounded() {
        let s = PhaseSpace::standard_torus(1);
        let h = SuspendedHamiltonian::new(mixed_forced());
        let run = |step: f64| {
            suspension_flow(&h, &s, &z(&s, &[0.2, 0.1], 0.0, 0.0), 50.0, IntegrationOptions::with_step(step))
                .unwrap()
        };
        let coarse = run(0.02);
        let fine = run(0.01);
        let ratio = coarse.energy_drift() / fine.energy_drift();
        assert!(ratio > 3.0 && ratio < 5.0, "{ratio}");

        let f = h.base();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..64 {
            for j in 0..64 {
                for k in 0..64 {
                    let v = f.eval(&[i as f64 / 64.0, j as f64 / 64.0], k as f64 / 64.0);
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
        }
        // The grid range slightly underestimates max F − min F.
        assert!(fine.max_abs_r() <= hi - lo + 1e-3);
    }

    #[test]
    fn shift_equivariance() {
        let s = PhaseSpace::standard_torus(1);
        let h = SuspendedHamiltonian::new(mixed_forced());
        let z0 = z(&s, &[0.2, 0.1], 0.0, 0.0);
        let opts = IntegrationOptions::default();
        assert_eq!(shift_equivariance_check(&h, &s, &z0, 0.0, 10.0, opts).unwrap(), 0.0);
        assert!(shift_equivariance_check(&h, &s, &z0, 1.0, 10.0, opts).unwrap() <= 1e-8);
        assert!(shift_equivariance_check(&h, &s, &z0, -3.7, 100.0, opts).unwrap() <= 1e-7);
    }

    #[test]
    fn csv_columns() {
        let s = PhaseSpace::standard_torus(1);
        let h = SuspendedHamiltonian::new(forced());
        let tr = suspension_flow(&h, &s, &z(&s, &[0.2, 0.1], 0.0, 0.0), 0.03, IntegrationOptions::default()).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "t,x0,x1,r,s,H");
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn time_one_pairing_matches_autonomous_pairing() {
        let s = PhaseSpace::standard_torus(1);
        let f = HamiltonianSpec::sin_squared(2, 0);
        let field = VectorFieldSpec::hamiltonian(f.clone(), &s).unwrap();
        let opts = IntegrationOptions::default();
        let tr = integrate(&field, &wrap(&[0.2, 0.0], &s).unwrap(), 20.0, opts).unwrap();
        let mu = empirical_measure(&tr).unwrap();
        let alpha = ClosedOneForm::constant(CohomologyClass::dq(1, 0, 1.0));
        let auto = rotation_pairing(&mu, &f, &alpha, &s).unwrap();
        let t1 = rotation_pairing_time_one(&mu, &f, &alpha, &s, opts).unwrap();
        assert!((t1.loop_integral - auto).abs() < 1e-6);
        assert!(t1.discrepancy < 1e-6);

        let zero = HamiltonianSpec::constant(2, 0.0);
        let t0 = rotation_pairing_time_one(&mu, &zero, &alpha, &s, opts).unwrap();
        assert_eq!(t0.loop_integral, 0.0);
    }

    #[test]
    fn time_one_search_on_forced_system() {
        let s = PhaseSpace::standard_torus(1);
        let f = forced();
        let alpha = ClosedOneForm::constant(CohomologyClass::dq(1, 0, 1.0));
        let seeds = seed_grid(&s, 8, SeedLayout::Full).unwrap();
        let opts = TimeOneSearchOptions {
            n0: 20,
            n_max: 80,
            ..TimeOneSearchOptions::default()
        };
        let out = time_one_extremal_search(&f, &alpha, &s, &seeds, &opts).unwrap();
        assert!(out.outcome.best_value >= 2.0 - 1e-2);
        assert!((out.pairing.loop_integral.abs() - out.outcome.best_value).abs() < 1e-9);
        assert!(out.pairing.discrepancy < 1e-6);
    }

    #[test]
    fn step7_fixed_point_suspension() {
        let s = PhaseSpace::standard_torus(1);
        let f = HamiltonianSpec::sin_squared(2, 0);
        let opts = IntegrationOptions::default();
        let xstar = wrap(&[0.0, 0.3], &s).unwrap();
        let h = SuspendedHamiltonian::new(f.clone());
        let tr = suspension_flow(&h, &s, &ExtendedPoint::new(xstar.clone(), 0.0, 0.0), 1.0, opts).unwrap();
        let sigma = tr.base_measure(&s).unwrap();
        let mu = EmpiricalMeasure::point_mass(&xstar, &s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let gs: Vec<TrigSeries> = (0..10)
            .map(|_| {
                let terms = (0..3)
                    .map(|_| {
                        TrigTerm::new(
                            vec![rng.gen_range(-2..=2), rng.gen_range(-2..=2)],
                            rng.gen_range(-2..=2),
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(-1.0..1.0),
                        )
                    })
                    .collect();
                TrigSeries::new(2, rng.gen_range(-1.0..1.0), terms).unwrap()
            })
            .collect();
        let obs: Vec<&dyn Observable> = gs.iter().map(|g| g as &dyn Observable).collect();
        let rep = step7_correspondence_check(&sigma, &mu, &f, &s, &obs, opts).unwrap();
        assert!(rep.max_defect <= 1e-8, "{rep:?}");
    }

    #[test]
    fn step7_orbit_and_negative_control() {
        let s = PhaseSpace::standard_torus(1);
        let f = forced();
        let opts = IntegrationOptions::default();
        let field = VectorFieldSpec::hamiltonian(f.clone(), &s).unwrap();
        let h = SuspendedHamiltonian::new(f.clone());
        let n = 20;
        let x0 = wrap(&[0.1, 0.2], &s).unwrap();
        let tr = suspension_flow(&h, &s, &ExtendedPoint::new(x0.clone(), 0.0, 0.0), n as f64, opts).unwrap();
        let sigma = tr.base_measure(&s).unwrap();
        let mu = iterate_measure(&field, x0.lift(), n, opts, &s).unwrap();
        let g1 = TrigSeries::harmonic(2, 0, 1, 1.0, 0.0);
        let g2 = TrigSeries::new(2, 0.0, vec![TrigTerm::new(vec![0, 1], 1, 0.4, 0.3)]).unwrap();
        let obs: [&dyn Observable; 2] = [&g1, &g2];
        let rep = step7_correspondence_check(&sigma, &mu, &f, &s, &obs, opts).unwrap();
        assert!(rep.max_defect <= 1e-9, "{rep:?}");

        let other = iterate_measure(&field, &[0.4, 0.2], n, opts, &s).unwrap();
        let rep = step7_correspondence_check(&sigma, &other, &f, &s, &obs, opts).unwrap();
        assert!(rep.max_defect > 0.1);
    }
}
