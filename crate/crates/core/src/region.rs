//! Compact subsets of phase space given by a membership predicate and a
//! finite sample grid on the set.

use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{centered_mod, PhaseSpace};

pub const DEFAULT_RESOLUTION: usize = 32;
pub const MEMBERSHIP_TOL: f64 = 1e-9;
const MAX_GRID_POINTS: usize = 1 << 22;

pub type Predicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum RegionKind {
    /// `{x_j = c_j}` for every pinned coordinate; momentum-level tori and
    /// products of level sets.
    Levels { pins: Vec<(usize, f64)> },
    /// Pinned levels times, for every listed coordinate pair `(a, b)`, the
    /// codimension-one skeleton of the square grid of mesh `1/mesh`.
    Skeleton {
        pins: Vec<(usize, f64)>,
        factors: Vec<(usize, usize)>,
        mesh: usize,
    },
    Custom { label: String, predicate: Predicate },
    Empty,
}

impl fmt::Debug for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Levels { pins } => f.debug_struct("Levels").field("pins", pins).finish(),
            Self::Skeleton {
                pins,
                factors,
                mesh,
            } => f
                .debug_struct("Skeleton")
                .field("pins", pins)
                .field("factors", factors)
                .field("mesh", mesh)
                .finish(),
            Self::Custom { label, .. } => f.debug_struct("Custom").field("label", label).finish(),
            Self::Empty => f.write_str("Empty"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegionSpec {
    kind: RegionKind,
    periodic: Vec<bool>,
    grid: Vec<Vec<f64>>,
}

fn on_level(x: f64, c: f64, periodic: bool, tol: f64) -> bool {
    let d = if periodic { centered_mod(x - c) } else { x - c };
    d.abs() <= tol
}

fn on_mesh(x: f64, mesh: usize, tol: f64) -> bool {
    let scaled = x * mesh as f64;
    (scaled - scaled.round()).abs() <= tol * mesh as f64
}

fn cartesian(axes: &[(usize, Vec<f64>)], base: &[f64]) -> Result<Vec<Vec<f64>>> {
    let total = axes
        .iter()
        .try_fold(1usize, |acc, (_, v)| acc.checked_mul(v.len()))
        .filter(|&n| n <= MAX_GRID_POINTS)
        .ok_or_else(|| Error::Region("sample grid too large".into()))?;
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; axes.len()];
    for _ in 0..total {
        let mut p = base.to_vec();
        for (a, (coord, vals)) in axes.iter().enumerate() {
            p[*coord] = vals[idx[a]];
        }
        out.push(p);
        for a in (0..axes.len()).rev() {
            idx[a] += 1;
            if idx[a] < axes[a].1.len() {
                break;
            }
            idx[a] = 0;
        }
    }
    Ok(out)
}

fn validate_pins(space: &PhaseSpace, pins: &[(usize, f64)]) -> Result<()> {
    for (j, (c, v)) in pins.iter().enumerate() {
        if *c >= space.dim() {
            return Err(Error::Region(format!("pinned coordinate {c} out of range")));
        }
        if !v.is_finite() {
            return Err(Error::Region(format!("non-finite level for coordinate {c}")));
        }
        if pins[..j].iter().any(|(o, _)| o == c) {
            return Err(Error::Region(format!("coordinate {c} pinned twice")));
        }
    }
    Ok(())
}

fn unit_axis(resolution: usize) -> Vec<f64> {
    (0..resolution).map(|i| i as f64 / resolution as f64).collect()
}

impl RegionSpec {
    /// `{x_j = c_j}` for the given pins, sampled with `resolution` points per
    /// free dimension.
    pub fn levels(space: &PhaseSpace, pins: Vec<(usize, f64)>, resolution: usize) -> Result<Self> {
        validate_pins(space, &pins)?;
        if resolution == 0 {
            return Err(Error::Region("resolution must be positive".into()));
        }
        let mut base = vec![0.0; space.dim()];
        for (c, v) in &pins {
            base[*c] = *v;
        }
        let mut axes = Vec::new();
        for j in 0..space.dim() {
            if pins.iter().any(|(c, _)| *c == j) {
                continue;
            }
            if !space.periodic()[j] {
                return Err(Error::Region(format!(
                    "free coordinate {j} is unbounded; pin it or use a custom region"
                )));
            }
            axes.push((j, unit_axis(resolution)));
        }
        let grid = cartesian(&axes, &base)?;
        Ok(Self {
            kind: RegionKind::Levels { pins },
            periodic: space.periodic().to_vec(),
            grid,
        })
    }

    /// `{p = c}` for a full momentum vector `c`.
    pub fn momentum_level(space: &PhaseSpace, levels: &[f64], resolution: usize) -> Result<Self> {
        check_dim(space.n(), levels.len())?;
        let pins = levels.iter().enumerate().map(|(i, &v)| (space.p(i), v)).collect();
        Self::levels(space, pins, resolution)
    }

    pub fn skeleton(
        space: &PhaseSpace,
        pins: Vec<(usize, f64)>,
        factors: Vec<(usize, usize)>,
        mesh: usize,
        resolution: usize,
    ) -> Result<Self> {
        validate_pins(space, &pins)?;
        if mesh == 0 || resolution == 0 || factors.is_empty() {
            return Err(Error::Region(
                "skeleton needs a positive mesh, resolution and at least one factor".into(),
            ));
        }
        let mut used: Vec<usize> = pins.iter().map(|(c, _)| *c).collect();
        for &(a, b) in &factors {
            for c in [a, b] {
                if c >= space.dim() || used.contains(&c) || !space.periodic()[c] {
                    return Err(Error::Region(format!("invalid skeleton coordinate {c}")));
                }
                used.push(c);
            }
        }
        let mut base = vec![0.0; space.dim()];
        for (c, v) in &pins {
            base[*c] = *v;
        }
        let free: Vec<(usize, Vec<f64>)> = (0..space.dim())
            .filter(|j| !used.contains(j))
            .map(|j| {
                if space.periodic()[j] {
                    Ok((j, unit_axis(resolution)))
                } else {
                    Err(Error::Region(format!("free coordinate {j} is unbounded")))
                }
            })
            .collect::<Result<_>>()?;
        let mut grid = cartesian(&free, &base)?;
        for &(a, b) in &factors {
            // Points on the grid lines of this factor.
            let mut lines = Vec::new();
            for i in 0..mesh {
                let level = i as f64 / mesh as f64;
                for t in unit_axis(resolution) {
                    lines.push((level, t));
                    lines.push((t, level));
                }
            }
            lines.sort_by(|x, y| x.partial_cmp(y).unwrap());
            lines.dedup();
            if grid.len().saturating_mul(lines.len()) > MAX_GRID_POINTS {
                return Err(Error::Region("sample grid too large".into()));
            }
            grid = grid
                .into_iter()
                .flat_map(|p| {
                    lines.iter().map(move |&(va, vb)| {
                        let mut q = p.clone();
                        q[a] = va;
                        q[b] = vb;
                        q
                    })
                })
                .collect();
        }
        Ok(Self {
            kind: RegionKind::Skeleton {
                pins,
                factors,
                mesh,
            },
            periodic: space.periodic().to_vec(),
            grid,
        })
    }

    /// A region given by a predicate and a caller-supplied sampler output.
    pub fn custom(
        space: &PhaseSpace,
        label: impl Into<String>,
        predicate: Predicate,
        samples: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Region("custom region needs at least one sample".into()));
        }
        for s in &samples {
            check_dim(space.dim(), s.len())?;
            if !predicate(s) {
                return Err(Error::Region(format!("sample {s:?} violates the predicate")));
            }
        }
        Ok(Self {
            kind: RegionKind::Custom {
                label: label.into(),
                predicate,
            },
            periodic: space.periodic().to_vec(),
            grid: samples,
        })
    }

    pub fn empty(space: &PhaseSpace) -> Self {
        Self {
            kind: RegionKind::Empty,
            periodic: space.periodic().to_vec(),
            grid: Vec::new(),
        }
    }

    /// `X × {r = 0}` inside `M × T*S¹`, with coordinates `(x, r, s)`;
    /// `s` is free and sampled at `s_resolution` points.
    pub fn stabilized(&self, s_resolution: usize) -> Result<Self> {
        if s_resolution == 0 {
            return Err(Error::Region("resolution must be positive".into()));
        }
        let d = self.dim();
        let mut periodic = self.periodic.clone();
        periodic.extend([false, true]);
        let with_r = |pins: &[(usize, f64)]| {
            let mut p = pins.to_vec();
            p.push((d, 0.0));
            p
        };
        let kind = match &self.kind {
            RegionKind::Empty => {
                return Ok(Self {
                    kind: RegionKind::Empty,
                    periodic,
                    grid: Vec::new(),
                })
            }
            RegionKind::Levels { pins } => RegionKind::Levels { pins: with_r(pins) },
            RegionKind::Skeleton {
                pins,
                factors,
                mesh,
            } => RegionKind::Skeleton {
                pins: with_r(pins),
                factors: factors.clone(),
                mesh: *mesh,
            },
            RegionKind::Custom { label, predicate } => {
                let inner = predicate.clone();
                RegionKind::Custom {
                    label: format!("stab({label})"),
                    predicate: Arc::new(move |z: &[f64]| {
                        z.len() == d + 2 && z[d].abs() <= MEMBERSHIP_TOL && inner(&z[..d])
                    }),
                }
            }
        };
        if self.grid.len().saturating_mul(s_resolution) > MAX_GRID_POINTS {
            return Err(Error::Region("sample grid too large".into()));
        }
        let grid = self
            .grid
            .iter()
            .flat_map(|p| {
                unit_axis(s_resolution).into_iter().map(move |sv| {
                    let mut z = p.clone();
                    z.extend([0.0, sv]);
                    z
                })
            })
            .collect();
        Ok(Self {
            kind,
            periodic,
            grid,
        })
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.periodic.len()
    }

    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.kind, RegionKind::Empty)
    }

    pub fn level_pins(&self) -> Option<&[(usize, f64)]> {
        match &self.kind {
            RegionKind::Levels { pins } => Some(pins),
            _ => None,
        }
    }

    /// Pinned levels of level-set and skeleton regions.
    pub fn pins(&self) -> Option<&[(usize, f64)]> {
        match &self.kind {
            RegionKind::Levels { pins } | RegionKind::Skeleton { pins, .. } => Some(pins),
            _ => None,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_within(x, MEMBERSHIP_TOL)
    }

    /// Membership with tolerance `tol` on pinned levels and mesh lines.
    /// Custom predicates ignore `tol`.
    pub fn contains_within(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let pins_ok = |pins: &[(usize, f64)]| {
            pins.iter()
                .all(|&(c, v)| on_level(x[c], v, self.periodic[c], tol))
        };
        match &self.kind {
            RegionKind::Levels { pins } => pins_ok(pins),
            RegionKind::Skeleton {
                pins,
                factors,
                mesh,
            } => {
                pins_ok(pins)
                    && factors
                        .iter()
                        .all(|&(a, b)| on_mesh(x[a], *mesh, tol) || on_mesh(x[b], *mesh, tol))
            }
            RegionKind::Custom { predicate, .. } => predicate(x),
            RegionKind::Empty => false,
        }
    }

    /// True when no grid point of either region lies in the other.
    pub fn disjoint_on_grids(&self, other: &RegionSpec) -> bool {
        self.grid.iter().all(|p| !other.contains(p)) && other.grid.iter().all(|p| !self.contains(p))
    }
}
