//! Colored point configurations in `Q^d`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredPoint {
    pub coords: Vec<Rational>,
    pub color: usize,
}

/// A finite point set with a strict coloring: colors are exactly `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredConfig {
    dim: usize,
    points: Vec<ColoredPoint>,
    class_sizes: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointDocument {
    pub x: Vec<String>,
    pub color: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigDocument {
    pub dim: usize,
    pub points: Vec<PointDocument>,
}

impl ColoredConfig {
    pub fn new(dim: usize, points: Vec<ColoredPoint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedInput("dimension must be at least 1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.coords.len() != dim {
                return Err(Error::MalformedInput(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.coords.len()
                )));
            }
        }
        let colors = points.iter().map(|p| p.color + 1).max().unwrap_or(0);
        let mut class_sizes = vec![0; colors];
        for p in &points {
            class_sizes[p.color] += 1;
        }
        if let Some(missing) = class_sizes.iter().position(|&s| s == 0) {
            return Err(Error::MalformedInput(format!(
                "coloring is not strict: color {missing} is unused"
            )));
        }
        Ok(ColoredConfig { dim, points, class_sizes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[ColoredPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &ColoredPoint {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn color(&self, i: usize) -> usize {
        self.points[i].color
    }

    /// `class_sizes()[c]` is the number of points of color `c`.
    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn color_count(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn to_document(&self) -> ConfigDocument {
        ConfigDocument {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| PointDocument {
                    x: p.coords.iter().map(format_rational).collect(),
                    color: p.color,
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &ConfigDocument) -> Result<Self> {
        let points = doc
            .points
            .iter()
            .map(|p| {
                Ok(ColoredPoint {
                    coords: p.x.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
                    color: p.color,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ColoredConfig::new(doc.dim, points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("config document serializes")
    }
}

/// Parses the JSON form `{"dim": d, "points": [{"x": [...], "color": c}, ...]}`.
pub fn parse_config(text: &str) -> Result<ColoredConfig> {
    let doc: ConfigDocument =
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
    ColoredConfig::from_document(&doc)
}

/// Integer points uniform in `[-bound, bound]^dim`, color `c` repeated
/// `class_sizes[c]` times, from a ChaCha8 stream seeded with `seed`.
pub fn random_config(dim: usize, class_sizes: &[usize], seed: u64, bound: u64) -> Result<ColoredConfig> {
    if class_sizes.iter().any(|&s| s == 0) {
        return Err(Error::Parameter("class sizes must be positive".into()));
    }
    let bound = i64::try_from(bound).map_err(|_| Error::Parameter("coordinate bound too large".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(class_sizes.iter().sum());
    for (color, &size) in class_sizes.iter().enumerate() {
        for _ in 0..size {
            let coords = (0..dim)
                .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound))))
                .collect();
            points.push(ColoredPoint { coords, color });
        }
    }
    ColoredConfig::new(dim, points)
}
