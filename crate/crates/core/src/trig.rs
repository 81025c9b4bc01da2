//! Real trigonometric polynomials on the torus, optionally 1-periodic in time.
//!
//! A series in `dim` spatial coordinates has the form
//!
//! ```text
//! f(x, s) = c0 + Σ [a cos 2π(k·x + ks s) + b sin 2π(k·x + ks s)]
//! ```
//!
//! All derivatives are closed form, and products stay in the family, which is
//! what makes Poisson brackets of these series certifiable.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    /// Spatial frequency vector.
    pub k: Vec<i32>,
    /// Time frequency.
    #[serde(default)]
    pub ks: i32,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

impl TrigTerm {
    pub fn new(k: Vec<i32>, ks: i32, cos: f64, sin: f64) -> Self {
        Self { k, ks, cos, sin }
    }

    #[inline]
    fn phase(&self, x: &[f64], s: f64) -> f64 {
        let mut acc = self.ks as f64 * s;
        for (kj, xj) in self.k.iter().zip(x) {
            if *kj != 0 {
                acc += *kj as f64 * xj;
            }
        }
        TAU * acc
    }

    fn amplitude(&self) -> f64 {
        self.cos.hypot(self.sin)
    }

    fn spatial_norm(&self) -> f64 {
        self.k
            .iter()
            .map(|&k| (k as f64) * (k as f64))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigSeries {
    dim: usize,
    #[serde(default)]
    constant: f64,
    #[serde(default)]
    terms: Vec<TrigTerm>,
}

impl TrigSeries {
    pub fn new(dim: usize, constant: f64, terms: Vec<TrigTerm>) -> Result<Self> {
        for t in &terms {
            check_dim(dim, t.k.len())?;
        }
        Ok(Self {
            dim,
            constant,
            terms,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            constant: 0.0,
            terms: Vec::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self {
            dim,
            constant: c,
            terms: Vec::new(),
        }
    }

    /// A single harmonic `cos·cos θ + sin·sin θ` in coordinate `coord` with frequency `k`.
    pub fn harmonic(dim: usize, coord: usize, k: i32, cos: f64, sin: f64) -> Self {
        let mut kv = vec![0; dim];
        kv[coord] = k;
        Self {
            dim,
            constant: 0.0,
            terms: vec![TrigTerm::new(kv, 0, cos, sin)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant_term(&self) -> f64 {
        self.constant
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn is_time_dependent(&self) -> bool {
        self.terms.iter().any(|t| t.ks != 0 && t.amplitude() != 0.0)
    }

    pub fn eval(&self, x: &[f64], s: f64) -> f64 {
        let mut acc = self.constant;
        for t in &self.terms {
            let (sn, cs) = t.phase(x, s).sin_cos();
            acc += t.cos * cs + t.sin * sn;
        }
        acc
    }

    /// Adds the spatial gradient at `(x, s)` into `out`.
    pub fn add_grad_into(&self, x: &[f64], s: f64, out: &mut [f64]) {
        for t in &self.terms {
            let (sn, cs) = t.phase(x, s).sin_cos();
            let d = TAU * (t.sin * cs - t.cos * sn);
            for (o, &kj) in out.iter_mut().zip(&t.k) {
                if kj != 0 {
                    *o += kj as f64 * d;
                }
            }
        }
    }

    pub fn grad(&self, x: &[f64], s: f64) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        self.add_grad_into(x, s, &mut g);
        g
    }

    pub fn dds(&self, x: &[f64], s: f64) -> f64 {
        let mut acc = 0.0;
        for t in &self.terms {
            if t.ks == 0 {
                continue;
            }
            let (sn, cs) = t.phase(x, s).sin_cos();
            acc += TAU * t.ks as f64 * (t.sin * cs - t.cos * sn);
        }
        acc
    }

    /// Derivative along the constant vector `dir`, as a new series.
    pub fn directional(&self, dir: &[f64]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let kd: f64 = t.k.iter().zip(dir).map(|(&k, d)| k as f64 * d).sum();
                (kd != 0.0).then(|| {
                    TrigTerm::new(t.k.clone(), t.ks, TAU * kd * t.sin, -TAU * kd * t.cos)
                })
            })
            .collect();
        Self {
            dim: self.dim,
            constant: 0.0,
            terms,
        }
    }

    pub fn partial(&self, coord: usize) -> Self {
        let mut dir = vec![0.0; self.dim];
        dir[coord] = 1.0;
        self.directional(&dir)
    }

    pub fn time_derivative(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.ks != 0)
            .map(|t| {
                let w = TAU * t.ks as f64;
                TrigTerm::new(t.k.clone(), t.ks, w * t.sin, -w * t.cos)
            })
            .collect();
        Self {
            dim: self.dim,
            constant: 0.0,
            terms,
        }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            dim: self.dim,
            constant: lambda * self.constant,
            terms: self
                .terms
                .iter()
                .map(|t| TrigTerm::new(t.k.clone(), t.ks, lambda * t.cos, lambda * t.sin))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            dim: self.dim,
            constant: self.constant + other.constant,
            terms,
        }
        .normalized())
    }

    /// Product of two series, expanded by the product-to-sum identities.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out: Vec<TrigTerm> = Vec::new();
        for t in &self.terms {
            out.push(TrigTerm::new(
                t.k.clone(),
                t.ks,
                other.constant * t.cos,
                other.constant * t.sin,
            ));
        }
        for t in &other.terms {
            out.push(TrigTerm::new(
                t.k.clone(),
                t.ks,
                self.constant * t.cos,
                self.constant * t.sin,
            ));
        }
        for a in &self.terms {
            for b in &other.terms {
                let plus: Vec<i32> = a.k.iter().zip(&b.k).map(|(x, y)| x + y).collect();
                let minus: Vec<i32> = a.k.iter().zip(&b.k).map(|(x, y)| x - y).collect();
                out.push(TrigTerm::new(
                    plus,
                    a.ks + b.ks,
                    0.5 * (a.cos * b.cos - a.sin * b.sin),
                    0.5 * (a.cos * b.sin + a.sin * b.cos),
                ));
                out.push(TrigTerm::new(
                    minus,
                    a.ks - b.ks,
                    0.5 * (a.cos * b.cos + a.sin * b.sin),
                    0.5 * (a.sin * b.cos - a.cos * b.sin),
                ));
            }
        }
        Ok(Self {
            dim: self.dim,
            constant: self.constant * other.constant,
            terms: out,
        }
        .normalized())
    }

    /// Merges equal frequencies into one term with a canonical sign and folds
    /// the zero frequency into the constant.
    pub fn normalized(&self) -> Self {
        let mut map: BTreeMap<(Vec<i32>, i32), (f64, f64)> = BTreeMap::new();
        let mut constant = self.constant;
        for t in &self.terms {
            let first = t.k.iter().copied().chain([t.ks]).find(|&v| v != 0);
            match first {
                None => constant += t.cos,
                Some(v) => {
                    let (key, sin) = if v < 0 {
                        ((t.k.iter().map(|x| -x).collect(), -t.ks), -t.sin)
                    } else {
                        ((t.k.clone(), t.ks), t.sin)
                    };
                    let e = map.entry(key).or_insert((0.0, 0.0));
                    e.0 += t.cos;
                    e.1 += sin;
                }
            }
        }
        let terms = map
            .into_iter()
            .filter(|(_, (a, b))| *a != 0.0 || *b != 0.0)
            .map(|((k, ks), (a, b))| TrigTerm::new(k, ks, a, b))
            .collect();
        Self {
            dim: self.dim,
            constant,
            terms,
        }
    }

    /// Spatial coordinates on which the series actually depends.
    pub fn active_coords(&self) -> Vec<usize> {
        (0..self.dim)
            .filter(|&j| {
                self.terms
                    .iter()
                    .any(|t| t.k[j] != 0 && t.amplitude() != 0.0)
            })
            .collect()
    }

    /// `|c0| + Σ amplitude`, an upper bound for `max |f|`.
    pub fn amplitude_bound(&self) -> f64 {
        self.constant.abs() + self.terms.iter().map(TrigTerm::amplitude).sum::<f64>()
    }

    /// Bound on the Euclidean norm of the gradient in `(x, s)`.
    pub fn gradient_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let kn = t.spatial_norm().hypot(t.ks as f64);
                TAU * kn * t.amplitude()
            })
            .sum()
    }

    /// Bound on the operator norm of the Hessian in `(x, s)`.
    pub fn hessian_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let kn = t.spatial_norm().hypot(t.ks as f64);
                TAU * TAU * kn * kn * t.amplitude()
            })
            .sum()
    }
}
