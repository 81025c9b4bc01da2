//! Analytic Hamiltonian families with exact gradients and exact `∂/∂s`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::profile::PinnedProfile;
use crate::trig::{TrigSeries, TrigTerm};

/// Smooth bump `height · exp(1 − 1/(1 − ρ²))`, `ρ = (x_coord − center)/radius`,
/// supported in `|ρ| < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub coord: usize,
    pub center: f64,
    pub radius: f64,
    pub height: f64,
}

impl Bump {
    fn value_and_slope(&self, x: f64) -> (f64, f64) {
        let rho = (x - self.center) / self.radius;
        let d = 1.0 - rho * rho;
        if d <= 0.0 {
            return (0.0, 0.0);
        }
        let v = self.height * (1.0 - 1.0 / d).exp();
        (v, v * (-2.0 * rho / (d * d)) / self.radius)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianSpec {
    /// Finite trigonometric polynomial in the coordinates and optionally in time.
    Fourier(TrigSeries),
    /// `ℓ · x`. On a torus this is multivalued and only its differential is meaningful.
    Linear(Vec<f64>),
    /// `u(x_coord)` for a pinned periodic profile `u`.
    Profile {
        dim: usize,
        coord: usize,
        profile: PinnedProfile,
    },
    Bump { dim: usize, bump: Bump },
    Sum(Vec<HamiltonianSpec>),
    Product(Box<HamiltonianSpec>, Box<HamiltonianSpec>),
}

impl HamiltonianSpec {
    pub fn constant(dim: usize, c: f64) -> Self {
        Self::Fourier(TrigSeries::constant(dim, c))
    }

    /// `sin²(π x_coord) = ½ − ½ cos 2π x_coord`.
    pub fn sin_squared(dim: usize, coord: usize) -> Self {
        let mut k = vec![0; dim];
        k[coord] = 1;
        Self::Fourier(
            TrigSeries::new(dim, 0.5, vec![TrigTerm::new(k, 0, -0.5, 0.0)]).expect("dims match"),
        )
    }

    /// `sin²(π x_c) + ε sin(2πs) sin(2π x_c)`, a 1-periodic non-autonomous family.
    pub fn forced_sin_squared(dim: usize, coord: usize, eps: f64) -> Self {
        let mut k = vec![0; dim];
        k[coord] = 1;
        // sin(2πs) sin(2πx) = ½ cos 2π(x − s) − ½ cos 2π(x + s)
        Self::Fourier(
            TrigSeries::new(
                dim,
                0.5,
                vec![
                    TrigTerm::new(k.clone(), 0, -0.5, 0.0),
                    TrigTerm::new(k.clone(), -1, 0.5 * eps, 0.0),
                    TrigTerm::new(k, 1, -0.5 * eps, 0.0),
                ],
            )
            .expect("dims match")
            .normalized(),
        )
    }

    pub fn profile(dim: usize, coord: usize, profile: PinnedProfile) -> Result<Self> {
        if coord >= dim {
            return Err(Error::InvalidArgument(format!(
                "profile coordinate {coord} out of range"
            )));
        }
        Ok(Self::Profile {
            dim,
            coord,
            profile,
        })
    }

    pub fn bump(dim: usize, bump: Bump) -> Result<Self> {
        if bump.coord >= dim || !(bump.radius > 0.0) {
            return Err(Error::InvalidArgument("invalid bump".into()));
        }
        Ok(Self::Bump { dim, bump })
    }

    pub fn sum(parts: Vec<HamiltonianSpec>) -> Result<Self> {
        let dim = parts
            .first()
            .map(Self::dim)
            .ok_or_else(|| Error::InvalidArgument("empty sum".into()))?;
        for p in &parts {
            check_dim(dim, p.dim())?;
        }
        Ok(Self::Sum(parts))
    }

    pub fn product(a: HamiltonianSpec, b: HamiltonianSpec) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        Ok(Self::Product(Box::new(a), Box::new(b)))
    }

    pub fn scaled(self, lambda: f64) -> Self {
        let dim = self.dim();
        match self {
            Self::Fourier(s) => Self::Fourier(s.scaled(lambda)),
            Self::Linear(l) => Self::Linear(l.iter().map(|v| lambda * v).collect()),
            other => Self::Product(
                Box::new(Self::constant(dim, lambda)),
                Box::new(other),
            ),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Fourier(s) => s.dim(),
            Self::Linear(l) => l.len(),
            Self::Profile { dim, .. } | Self::Bump { dim, .. } => *dim,
            Self::Sum(parts) => parts[0].dim(),
            Self::Product(a, _) => a.dim(),
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        match self {
            Self::Fourier(s) => s.is_time_dependent(),
            Self::Sum(parts) => parts.iter().any(Self::is_time_dependent),
            Self::Product(a, b) => a.is_time_dependent() || b.is_time_dependent(),
            _ => false,
        }
    }

    pub fn eval(&self, x: &[f64], s: f64) -> f64 {
        match self {
            Self::Fourier(f) => f.eval(x, s),
            Self::Linear(l) => l.iter().zip(x).map(|(a, b)| a * b).sum(),
            Self::Profile { coord, profile, .. } => profile.eval(x[*coord]),
            Self::Bump { bump, .. } => bump.value_and_slope(x[bump.coord]).0,
            Self::Sum(parts) => parts.iter().map(|p| p.eval(x, s)).sum(),
            Self::Product(a, b) => a.eval(x, s) * b.eval(x, s),
        }
    }

    /// Adds `dF(x, s)` into `out`.
    pub fn add_grad_into(&self, x: &[f64], s: f64, out: &mut [f64]) {
        match self {
            Self::Fourier(f) => f.add_grad_into(x, s, out),
            Self::Linear(l) => {
                for (o, v) in out.iter_mut().zip(l) {
                    *o += v;
                }
            }
            Self::Profile { coord, profile, .. } => {
                let series = profile.series();
                for t in series.terms() {
                    let th = TAU * t.k[0] as f64 * x[*coord];
                    let (sn, cs) = th.sin_cos();
                    out[*coord] += TAU * t.k[0] as f64 * (t.sin * cs - t.cos * sn);
                }
            }
            Self::Bump { bump, .. } => out[bump.coord] += bump.value_and_slope(x[bump.coord]).1,
            Self::Sum(parts) => parts.iter().for_each(|p| p.add_grad_into(x, s, out)),
            Self::Product(a, b) => {
                let (fa, fb) = (a.eval(x, s), b.eval(x, s));
                let mut ga = vec![0.0; out.len()];
                let mut gb = vec![0.0; out.len()];
                a.add_grad_into(x, s, &mut ga);
                b.add_grad_into(x, s, &mut gb);
                for i in 0..out.len() {
                    out[i] += fb * ga[i] + fa * gb[i];
                }
            }
        }
    }

    pub fn grad_into(&self, x: &[f64], s: f64, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        self.add_grad_into(x, s, out);
    }

    pub fn grad(&self, x: &[f64], s: f64) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        self.add_grad_into(x, s, &mut g);
        g
    }

    /// Exact `∂F/∂s`; zero for autonomous families.
    pub fn dds(&self, x: &[f64], s: f64) -> f64 {
        match self {
            Self::Fourier(f) => f.dds(x, s),
            Self::Sum(parts) => parts.iter().map(|p| p.dds(x, s)).sum(),
            Self::Product(a, b) => a.dds(x, s) * b.eval(x, s) + a.eval(x, s) * b.dds(x, s),
            _ => 0.0,
        }
    }

    /// The family as one trigonometric series, when it is one.
    pub fn to_trig(&self) -> Option<TrigSeries> {
        match self {
            Self::Fourier(f) => Some(f.clone()),
            Self::Profile {
                dim,
                coord,
                profile,
            } => {
                let p = profile.series();
                let terms = p
                    .terms()
                    .iter()
                    .map(|t| {
                        let mut k = vec![0; *dim];
                        k[*coord] = t.k[0];
                        TrigTerm::new(k, 0, t.cos, t.sin)
                    })
                    .collect();
                TrigSeries::new(*dim, p.constant_term(), terms).ok()
            }
            Self::Sum(parts) => {
                let mut acc = TrigSeries::zero(self.dim());
                for p in parts {
                    acc = acc.add(&p.to_trig()?).ok()?;
                }
                Some(acc)
            }
            Self::Product(a, b) => a.to_trig()?.mul(&b.to_trig()?).ok(),
            Self::Linear(_) | Self::Bump { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::make_pinned_profile;
    use std::f64::consts::PI;

    #[test]
    fn sin_squared_values() {
        let f = HamiltonianSpec::sin_squared(2, 0);
        assert!(f.eval(&[0.0, 0.3], 0.0).abs() < 1e-15);
        assert!((f.eval(&[0.5, 0.3], 0.0) - 1.0).abs() < 1e-15);
        assert!((f.eval(&[0.25, 0.3], 0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sin_squared_gradient() {
        let f = HamiltonianSpec::sin_squared(2, 0);
        let g = f.grad(&[0.25, 0.7], 0.0);
        assert!((g[0] - PI).abs() < 1e-14);
        assert_eq!(g[1], 0.0);
        assert_eq!(HamiltonianSpec::constant(2, 3.0).grad(&[0.1, 0.2], 0.0), vec![0.0, 0.0]);
    }

    #[test]
    fn profile_gradient_is_chain_rule() {
        let u = make_pinned_profile(&[(0.0, 0.0), (0.5, 1.0)], None, 4).unwrap();
        let f = HamiltonianSpec::profile(4, 1, u.clone()).unwrap();
        let x = [0.3, 0.17, 0.9, 0.1];
        let g = f.grad(&x, 0.0);
        assert!((g[1] - u.slope(0.17)).abs() < 1e-13);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[2], 0.0);
        let t = f.to_trig().unwrap();
        assert!((t.eval(&x, 0.0) - f.eval(&x, 0.0)).abs() < 1e-14);
    }

    #[test]
    fn dds_examples() {
        let f = HamiltonianSpec::sin_squared(2, 0);
        assert_eq!(f.dds(&[0.3, 0.1], 0.4), 0.0);
        let eps = 0.2;
        let g = HamiltonianSpec::forced_sin_squared(2, 0, eps);
        for &(p, s) in &[(0.1, 0.2), (0.37, 0.81), (0.25, 0.0)] {
            let want = TAU * eps * (TAU * s).cos() * (TAU * p).sin();
            assert!((g.dds(&[p, 0.4], s) - want).abs() < 1e-13);
            assert!((g.dds(&[p, 0.4], s + 1.0) - g.dds(&[p, 0.4], s)).abs() < 1e-12);
            let direct = (PI * p).sin().powi(2) + eps * (TAU * s).sin() * (TAU * p).sin();
            assert!((g.eval(&[p, 0.4], s) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn product_gradient_matches_expansion() {
        let a = HamiltonianSpec::sin_squared(2, 0);
        let b = HamiltonianSpec::Fourier(TrigSeries::harmonic(2, 1, 2, 0.3, 0.4));
        let f = HamiltonianSpec::product(a, b).unwrap();
        let t = f.to_trig().unwrap();
        let x = [0.31, 0.58];
        let (g1, g2) = (f.grad(&x, 0.0), t.grad(&x, 0.0));
        for i in 0..2 {
            assert!((g1[i] - g2[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn bump_is_compactly_supported() {
        let f = HamiltonianSpec::bump(
            2,
            Bump {
                coord: 0,
                center: 1.0,
                radius: 0.5,
                height: 1.0,
            },
        )
        .unwrap();
        assert_eq!(f.eval(&[0.0, 0.0], 0.0), 0.0);
        assert_eq!(f.eval(&[1.6, 0.0], 0.0), 0.0);
        assert!((f.eval(&[1.0, 0.0], 0.0) - 1.0).abs() < 1e-15);
        let h = 1e-6;
        let x = 1.2;
        let fd = (f.eval(&[x + h, 0.0], 0.0) - f.eval(&[x - h, 0.0], 0.0)) / (2.0 * h);
        assert!((fd - f.grad(&[x, 0.0], 0.0)[0]).abs() < 1e-6);
    }
}
