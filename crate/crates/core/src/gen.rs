//! Seeded random point sets.

use std::collections::HashSet;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    /// Uniform in `[0, 1)^d`.
    UniformCube,
    /// Standard normal in every coordinate.
    Gaussian,
    /// Normal blobs (sigma 0.02) around uniform centres in the unit cube.
    Clustered,
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform-cube" => Ok(Distribution::UniformCube),
            "gaussian" => Ok(Distribution::Gaussian),
            "clustered" => Ok(Distribution::Clustered),
            other => Err(Error::InvalidParameter(format!("unknown distribution `{other}`"))),
        }
    }
}

const CLUSTER_SIGMA: f64 = 0.02;

/// `n` distinct points in `d` dimensions, fully determined by `seed`.
pub fn generate(n: usize, d: usize, dist: Distribution, seed: u64) -> Result<PointSet> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if d < 1 {
        return Err(Error::ZeroDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let clusters = ((n as f64).sqrt().ceil() as usize).max(1);
    let centres: Vec<Vec<f64>> = (0..clusters)
        .map(|_| (0..d).map(|_| rng.random::<f64>()).collect())
        .collect();

    let mut seen = HashSet::new();
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let row: Vec<f64> = match dist {
            Distribution::UniformCube => (0..d).map(|_| rng.random::<f64>()).collect(),
            Distribution::Gaussian => (0..d).map(|_| normal.sample(&mut rng)).collect(),
            Distribution::Clustered => {
                let c = &centres[rng.random_range(0..clusters)];
                c.iter().map(|&x| x + CLUSTER_SIGMA * normal.sample(&mut rng)).collect()
            }
        };
        let key: Vec<u64> = row.iter().map(|c| (c + 0.0).to_bits()).collect();
        if seen.insert(key) {
            rows.push(row);
        }
    }
    PointSet::new(d, rows)
}

/// Uniform points in the unit cube.
pub fn uniform(n: usize, d: usize, seed: u64) -> PointSet {
    generate(n, d, Distribution::UniformCube, seed).expect("n, d >= 1")
}
