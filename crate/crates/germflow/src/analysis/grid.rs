//! Deterministic sample grids over balls around the origin.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Seed for every pseudo-random sampling decision in the toolkit.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridPattern {
    /// Full lattice on the cube `|x|_inf <= radius`.
    CubeGrid,
    /// Concentric spheres `|x|_2 = radius * j/k`; directions include the
    /// coordinate axes, so axis-aligned extrema are always sampled.
    SphereShells,
}

/// Discretization of a neighbourhood of the origin.
#[derive(Debug, Clone, Serialize)]
pub struct SampleGrid {
    pub radius: f64,
    pub points_per_axis: usize,
    pub pattern: GridPattern,
    /// Context-dependent floor: scans skip points where the relevant
    /// magnitude (|f| or |∇f|) falls below this.
    pub exclusion: f64,
}

impl SampleGrid {
    pub fn new(radius: f64, points_per_axis: usize, pattern: GridPattern, exclusion: f64) -> Self {
        assert!(radius > 0.0, "grid radius must be positive");
        assert!(points_per_axis >= 3, "need at least 3 points per axis");
        SampleGrid {
            radius,
            points_per_axis,
            pattern,
            exclusion,
        }
    }

    pub fn cube(radius: f64, points_per_axis: usize) -> Self {
        SampleGrid::new(radius, points_per_axis, GridPattern::CubeGrid, 1e-12)
    }

    pub fn shells(radius: f64, points_per_axis: usize) -> Self {
        SampleGrid::new(radius, points_per_axis, GridPattern::SphereShells, 1e-12)
    }

    /// A grid with doubled resolution for refinement-stability checks.
    /// Lattice nesting is preserved (every old point is a new point).
    pub fn refined(&self) -> SampleGrid {
        SampleGrid {
            points_per_axis: self.points_per_axis * 2 - 1,
            ..self.clone()
        }
    }

    /// Spatial sample points in dimension `n`.
    pub fn points(&self, n: usize) -> Vec<Vec<f64>> {
        match self.pattern {
            GridPattern::CubeGrid => self.cube_points(n),
            GridPattern::SphereShells => self.shell_points(n),
        }
    }

    fn cube_points(&self, n: usize) -> Vec<Vec<f64>> {
        let axis = linspace(-self.radius, self.radius, self.points_per_axis);
        let total = axis.len().checked_pow(n as u32).expect("grid size overflow");
        assert!(total <= 4_000_000, "cube grid too large ({total} points)");
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        loop {
            out.push(idx.iter().map(|&i| axis[i]).collect());
            let mut pos = 0;
            loop {
                if pos == n {
                    return out;
                }
                idx[pos] += 1;
                if idx[pos] < axis.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    fn shell_points(&self, n: usize) -> Vec<Vec<f64>> {
        let shells = self.points_per_axis;
        let dirs = unit_directions(n);
        let mut out = Vec::with_capacity(shells * dirs.len());
        for j in 1..=shells {
            let rho = self.radius * j as f64 / shells as f64;
            for d in &dirs {
                out.push(d.iter().map(|c| c * rho).collect());
            }
        }
        out
    }
}

/// Evenly spaced values including both endpoints. Midpoints land exactly
/// when `count` is odd.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    (0..count)
        .map(|i| lo + (hi - lo) * (i as f64 / (count - 1) as f64))
        .collect()
}

/// Deterministic unit directions: the coordinate axes plus (for n >= 2) a
/// fixed fan of generic directions.
pub fn unit_directions(n: usize) -> Vec<Vec<f64>> {
    match n {
        0 => panic!("dimension must be positive"),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => {
            // 32 equally spaced angles starting on the positive x-axis.
            (0..32)
                .map(|k| {
                    let theta = 2.0 * std::f64::consts::PI * k as f64 / 32.0;
                    vec![theta.cos(), theta.sin()]
                })
                .collect()
        }
        _ => {
            let mut dirs = Vec::new();
            for i in 0..n {
                for sign in [1.0, -1.0] {
                    let mut d = vec![0.0; n];
                    d[i] = sign;
                    dirs.push(d);
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
            while dirs.len() < 2 * n + 64 {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                if norm > 1e-3 {
                    dirs.push(v.into_iter().map(|c| c / norm).collect());
                }
            }
            dirs
        }
    }
}

/// Seeded pseudo-random points in the Euclidean ball of the given radius.
pub fn random_ball_points(n: usize, radius: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-radius..=radius)).collect();
        if v.iter().map(|c| c * c).sum::<f64>() <= radius * radius {
            out.push(v);
        }
    }
    out
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let var: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if var <= 0.0 {
        return None;
    }
    let cov: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    Some(cov / var)
}

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}
