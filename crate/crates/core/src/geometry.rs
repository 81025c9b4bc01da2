//! Phase spaces, constant symplectic structures, closed 1-forms and the
//! homology/cohomology pairing.
//!
//! Coordinates are always ordered `(p_1..p_n, q_1..q_n)`. A symplectic
//! structure is a constant antisymmetric matrix `Ω` with `ω(u, w) = uᵀ Ω w`;
//! contracting a vector gives the covector `i_v ω = Ωᵀ v`, and the inverse
//! map (the "sharp" of a covector `β`) is `v = Ω⁻ᵀ β`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::trig::TrigSeries;

const ANTISYMMETRY_TOL: f64 = 1e-12;
const DET_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticStructure {
    n: usize,
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    // Ω⁻ᵀ, row-major, used on every field evaluation.
    sharp: Vec<f64>,
}

impl SymplecticStructure {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || dim % 2 != 0 || matrix.ncols() != dim {
            return Err(Error::DegenerateForm(format!(
                "matrix must be square of even size, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateForm("non-finite entry".into()));
        }
        let asym = (&matrix + matrix.transpose()).amax();
        if asym > ANTISYMMETRY_TOL {
            return Err(Error::DegenerateForm(format!(
                "matrix is not antisymmetric (|Ω + Ωᵀ| = {asym:e})"
            )));
        }
        let det = matrix.determinant();
        if det.abs() <= DET_FLOOR {
            return Err(Error::DegenerateForm(format!("determinant {det:e}")));
        }
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateForm("matrix is not invertible".into()))?;
        let inv_t = inverse.transpose();
        let mut sharp = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                sharp.push(inv_t[(i, j)]);
            }
        }
        Ok(Self {
            n: dim / 2,
            matrix,
            inverse,
            sharp,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DegenerateForm("matrix rows have unequal length".into()));
        }
        Self::new(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
    }

    /// `dp ∧ dq = Σ dp_i ∧ dq_i`.
    pub fn standard(n: usize) -> Self {
        let dim = 2 * n;
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..n {
            m[(i, n + i)] = 1.0;
            m[(n + i, i)] = -1.0;
        }
        Self::new(m).expect("standard form is non-degenerate")
    }

    /// `dp₁∧dq₁ + γ dp₂∧dq₁ + dp₂∧dq₂` on a four-dimensional torus.
    pub fn twisted(gamma: f64) -> Result<Self> {
        let mut m = DMatrix::zeros(4, 4);
        // (p1, p2, q1, q2) = (0, 1, 2, 3)
        m[(0, 2)] = 1.0;
        m[(2, 0)] = -1.0;
        m[(1, 2)] = gamma;
        m[(2, 1)] = -gamma;
        m[(1, 3)] = 1.0;
        m[(3, 1)] = -1.0;
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.matrix[(i, j)]).collect())
            .collect()
    }

    /// `ω(u, w) = uᵀ Ω w`.
    pub fn omega(&self, u: &[f64], w: &[f64]) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += u[i] * self.matrix[(i, j)] * w[j];
            }
        }
        acc
    }

    /// Covector `i_v ω`.
    pub fn contract(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|j| (0..d).map(|i| v[i] * self.matrix[(i, j)]).sum())
            .collect()
    }

    /// Writes the vector `v` with `i_v ω = beta` into `out`.
    #[inline]
    pub fn sharp_into(&self, beta: &[f64], out: &mut [f64]) {
        let d = self.dim();
        for (i, o) in out.iter_mut().enumerate().take(d) {
            let row = &self.sharp[i * d..(i + 1) * d];
            *o = row.iter().zip(beta).map(|(a, b)| a * b).sum();
        }
    }

    pub fn sharp(&self, beta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.sharp_into(beta, &mut out);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    Torus,
    CotangentOfTorus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpace {
    kind: SpaceKind,
    omega: SymplecticStructure,
    periodic: Vec<bool>,
}

impl PhaseSpace {
    pub fn new(kind: SpaceKind, omega: SymplecticStructure) -> Self {
        let n = omega.n();
        let periodic = (0..2 * n)
            .map(|j| match kind {
                SpaceKind::Torus => true,
                SpaceKind::CotangentOfTorus => j >= n,
            })
            .collect();
        Self {
            kind,
            omega,
            periodic,
        }
    }

    pub fn standard_torus(n: usize) -> Self {
        Self::new(SpaceKind::Torus, SymplecticStructure::standard(n))
    }

    pub fn twisted_torus(gamma: f64) -> Result<Self> {
        Ok(Self::new(SpaceKind::Torus, SymplecticStructure::twisted(gamma)?))
    }

    pub fn cotangent_torus(n: usize) -> Self {
        Self::new(SpaceKind::CotangentOfTorus, SymplecticStructure::standard(n))
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.omega.n()
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn omega(&self) -> &SymplecticStructure {
        &self.omega
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn p(&self, i: usize) -> usize {
        i
    }

    pub fn q(&self, i: usize) -> usize {
        self.n() + i
    }

    /// Unit tangent vector along coordinate `j`.
    pub fn basis_vector(&self, j: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        v[j] = 1.0;
        v
    }
}

/// Reduces `x` into `[0, 1)`.
#[inline]
pub fn unit_mod(x: f64) -> f64 {
    let w = x - x.floor();
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Signed representative of `x mod 1` in `[-1/2, 1/2)`.
#[inline]
pub fn centered_mod(x: f64) -> f64 {
    let w = unit_mod(x + 0.5) - 0.5;
    if w < -0.5 {
        w + 1.0
    } else {
        w
    }
}

/// A point with its lift to the universal cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    lift: Vec<f64>,
    wrapped: Vec<f64>,
}

impl PhasePoint {
    pub fn lift(&self) -> &[f64] {
        &self.lift
    }

    pub fn wrapped(&self) -> &[f64] {
        &self.wrapped
    }

    pub fn dim(&self) -> usize {
        self.lift.len()
    }

    pub(crate) fn from_lift_unchecked(lift: Vec<f64>, periodic: &[bool]) -> Self {
        let wrapped = lift
            .iter()
            .zip(periodic)
            .map(|(&x, &per)| if per { unit_mod(x) } else { x })
            .collect();
        Self { lift, wrapped }
    }
}

/// Wraps a lifted point into the phase space; the lift is kept verbatim.
pub fn wrap(lift: &[f64], space: &PhaseSpace) -> Result<PhasePoint> {
    check_dim(space.dim(), lift.len())?;
    if let Some(bad) = lift.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidPoint(format!("non-finite coordinate {bad}")));
    }
    Ok(PhasePoint::from_lift_unchecked(lift.to_vec(), space.periodic()))
}

/// Coordinates of a class in `H¹` in the basis `([dp_i], [dq_i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologyClass(pub Vec<f64>);

impl CohomologyClass {
    pub fn zero(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// `coeff · [dq_i]` on a space of half-dimension `n`.
    pub fn dq(n: usize, i: usize, coeff: f64) -> Self {
        let mut c = vec![0.0; 2 * n];
        c[n + i] = coeff;
        Self(c)
    }

    /// `coeff · [dp_i]`.
    pub fn dp(n: usize, i: usize, coeff: f64) -> Self {
        let mut c = vec![0.0; 2 * n];
        c[i] = coeff;
        Self(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self(self.0.iter().map(|c| lambda * c).collect())
    }
}

/// Coordinates of a class in `H₁` in the basis dual to `([dp_i], [dq_i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationVector(pub Vec<f64>);

impl RotationVector {
    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }
}

pub fn pair(a: &CohomologyClass, rho: &RotationVector) -> Result<f64> {
    check_dim(a.dim(), rho.0.len())?;
    Ok(a.0.iter().zip(&rho.0).map(|(x, y)| x * y).sum())
}

/// A closed 1-form: constant part in a fixed class plus an exact part `dg`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedOneForm {
    class: CohomologyClass,
    potential: Option<TrigSeries>,
}

impl ClosedOneForm {
    pub fn new(class: CohomologyClass, potential: Option<TrigSeries>) -> Result<Self> {
        if let Some(g) = &potential {
            check_dim(class.dim(), g.dim())?;
            if g.is_time_dependent() {
                return Err(Error::InvalidArgument(
                    "form potential must not depend on time".into(),
                ));
            }
        }
        Ok(Self { class, potential })
    }

    pub fn constant(class: CohomologyClass) -> Self {
        Self {
            class,
            potential: None,
        }
    }

    /// The exact form `dg`.
    pub fn exact(g: TrigSeries) -> Result<Self> {
        Self::new(CohomologyClass::zero(g.dim()), Some(g))
    }

    pub fn class(&self) -> &CohomologyClass {
        &self.class
    }

    pub fn potential(&self) -> Option<&TrigSeries> {
        self.potential.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.class.dim()
    }

    /// Coefficients of the form at `x`: class + ∇g(x).
    #[inline]
    pub fn covector_into(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.class.0);
        if let Some(g) = &self.potential {
            g.add_grad_into(x, 0.0, out);
        }
    }

    pub fn covector(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.covector_into(x, &mut out);
        out
    }

    /// Value of the potential, zero if the form has no exact part.
    pub fn potential_value(&self, x: &[f64]) -> f64 {
        self.potential.as_ref().map_or(0.0, |g| g.eval(x, 0.0))
    }

    /// Integral of the form along any path from `from` to `to` (lifts).
    pub fn path_integral(&self, from: &[f64], to: &[f64]) -> f64 {
        let c: f64 = self
            .class
            .0
            .iter()
            .zip(to.iter().zip(from))
            .map(|(a, (t, f))| a * (t - f))
            .sum();
        c + self.potential_value(to) - self.potential_value(from)
    }
}

/// `α_x(v)`.
pub fn eval_form(alpha: &ClosedOneForm, v: &[f64], x: &PhasePoint) -> Result<f64> {
    check_dim(alpha.dim(), v.len())?;
    check_dim(alpha.dim(), x.dim())?;
    let cov = alpha.covector(x.lift());
    Ok(cov.iter().zip(v).map(|(a, b)| a * b).sum())
}

/// Flux of the unit-time translation along the constant field `w`: `[i_w ω]`.
pub fn flux_of_translation(w: &[f64], space: &PhaseSpace) -> Result<CohomologyClass> {
    check_dim(space.dim(), w.len())?;
    Ok(CohomologyClass(space.omega().contract(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::TrigTerm;
    use std::f64::consts::TAU;

    #[test]
    fn wrap_examples() {
        let s = PhaseSpace::standard_torus(1);
        let p = wrap(&[1.25, -0.5], &s).unwrap();
        assert_eq!(p.wrapped(), &[0.25, 0.5]);
        assert_eq!(p.lift(), &[1.25, -0.5]);
        assert_eq!(wrap(&[0.0, 0.0], &s).unwrap().wrapped(), &[0.0, 0.0]);
        let p = wrap(&[3.0, 2.0], &s).unwrap();
        assert_eq!(p.wrapped(), &[0.0, 0.0]);
        assert_eq!(p.lift(), &[3.0, 2.0]);
        assert!(matches!(
            wrap(&[f64::NAN, 0.0], &s),
            Err(Error::InvalidPoint(_))
        ));
        assert_eq!(unit_mod(-1e-18), 0.0);
    }

    #[test]
    fn cotangent_momenta_are_not_wrapped() {
        let s = PhaseSpace::cotangent_torus(1);
        let p = wrap(&[1.25, 1.25], &s).unwrap();
        assert_eq!(p.wrapped(), &[1.25, 0.25]);
    }

    #[test]
    fn eval_form_examples() {
        let s = PhaseSpace::standard_torus(1);
        let x = wrap(&[0.0, 0.0], &s).unwrap();
        let dq1 = ClosedOneForm::constant(CohomologyClass::dq(1, 0, 1.0));
        assert_eq!(eval_form(&dq1, &[0.0, 1.0], &x).unwrap(), 1.0);
        let half = ClosedOneForm::constant(CohomologyClass::dq(1, 0, 0.5));
        assert_eq!(eval_form(&half, &[0.0, 1.0], &x).unwrap(), 0.5);
        let g = TrigSeries::harmonic(2, 1, 1, 0.0, 1.0 / TAU);
        let dg = ClosedOneForm::exact(g).unwrap();
        assert!((eval_form(&dg, &[0.0, 1.0], &x).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            eval_form(&dq1, &[1.0], &x),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn pair_examples() {
        let a = CohomologyClass::dq(1, 0, 1.0);
        assert_eq!(pair(&a, &RotationVector(vec![0.0, 1.0])).unwrap(), 1.0);
        let half = CohomologyClass::dq(1, 0, 0.5);
        assert_eq!(pair(&half, &RotationVector(vec![0.0, 2.0])).unwrap(), 1.0);
        assert_eq!(pair(&a, &RotationVector(vec![1.0, 0.0])).unwrap(), 0.0);
        assert!(pair(&a, &RotationVector(vec![1.0])).is_err());
    }

    #[test]
    fn flux_examples() {
        let s = PhaseSpace::standard_torus(1);
        let a = flux_of_translation(&[0.5, 0.0], &s).unwrap();
        assert_eq!(a, CohomologyClass::dq(1, 0, 0.5));
        assert_eq!(
            flux_of_translation(&[0.0, 0.0], &s).unwrap(),
            CohomologyClass::zero(2)
        );
        let tw = PhaseSpace::twisted_torus(2f64.sqrt() - 1.0).unwrap();
        let a = flux_of_translation(&[1.0, 0.0, 0.0, 0.0], &tw).unwrap();
        assert_eq!(a, CohomologyClass::dq(2, 0, 1.0));
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(SymplecticStructure::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(SymplecticStructure::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
        assert!(SymplecticStructure::from_rows(&[vec![0.0, 1.0, 0.0]]).is_err());
    }

    #[test]
    fn inverse_is_cached_and_exact() {
        let w = SymplecticStructure::twisted(0.3).unwrap();
        let prod = w.matrix() * w.inverse();
        let id = DMatrix::<f64>::identity(4, 4);
        assert!((prod - id).amax() < 1e-12);
    }

    #[test]
    fn loop_integral_depends_only_on_class() {
        // α = 0.7 dq1 + dg, integrated over the loop q1 -> q1 + 1 by the trapezoid rule.
        let g = TrigSeries::new(
            2,
            0.0,
            vec![
                TrigTerm::new(vec![0, 1], 0, 0.3, -0.4),
                TrigTerm::new(vec![1, 2], 0, 0.2, 0.1),
            ],
        )
        .unwrap();
        let alpha = ClosedOneForm::new(CohomologyClass::dq(1, 0, 0.7), Some(g)).unwrap();
        let m = 256;
        let mut acc = 0.0;
        for i in 0..m {
            let x = [0.37, i as f64 / m as f64];
            acc += alpha.covector(&x)[1] / m as f64;
        }
        assert!((acc - 0.7).abs() < 1e-8);
    }
}
