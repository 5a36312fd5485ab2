//! Common-point certificates for rainbow partitions.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::config::ColoredConfig;
use super::lp::nonnegative_solution;
use super::partition::RainbowPartition;
use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// A point `x` and, for every block, convex weights on its members (in the
/// block's sorted order) whose combination is `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionCertificate {
    pub point: Vec<Rational>,
    pub weights: Vec<Vec<Rational>>,
}

impl IntersectionCertificate {
    pub fn point_json(&self) -> Value {
        json!(self.point.iter().map(format_rational).collect::<Vec<_>>())
    }

    pub fn weights_json(&self) -> Value {
        json!(self
            .weights
            .iter()
            .map(|w| w.iter().map(format_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(IntersectionCertificate),
    Infeasible,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

fn check_partition(config: &ColoredConfig, partition: &RainbowPartition) -> Result<()> {
    RainbowPartition::new(config, partition.blocks().to_vec()).map(|_| ())
}

/// Decides exactly whether the hulls of the blocks share a point.
///
/// Variables are the convex weights of every block; each block's weights sum
/// to one and each later block's combination equals the first block's.
pub fn common_point_lp(config: &ColoredConfig, partition: &RainbowPartition) -> Result<LpOutcome> {
    check_partition(config, partition)?;
    let blocks = partition.blocks();
    let d = config.dim();
    let n: usize = partition.used_points();
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut column = 0;
    for block in blocks {
        offsets.push(column);
        column += block.len();
    }

    let mut a = Vec::new();
    let mut b = Vec::new();
    for (block, &start) in blocks.iter().zip(&offsets) {
        let mut row = vec![Rational::zero(); n];
        row[start..start + block.len()].iter_mut().for_each(|v| *v = Rational::one());
        a.push(row);
        b.push(Rational::one());
    }
    for (block, &start) in blocks.iter().zip(&offsets).skip(1) {
        for t in 0..d {
            let mut row = vec![Rational::zero(); n];
            for (k, &i) in block.iter().enumerate() {
                row[start + k] = config.point(i).coords[t].clone();
            }
            for (k, &i) in blocks[0].iter().enumerate() {
                row[k] = -config.point(i).coords[t].clone();
            }
            a.push(row);
            b.push(Rational::zero());
        }
    }

    let Some(x) = nonnegative_solution(&a, &b) else {
        return Ok(LpOutcome::Infeasible);
    };
    let weights: Vec<Vec<Rational>> = blocks
        .iter()
        .zip(&offsets)
        .map(|(block, &start)| x[start..start + block.len()].to_vec())
        .collect();
    let point = (0..d)
        .map(|t| {
            blocks[0]
                .iter()
                .zip(&weights[0])
                .map(|(&i, w)| w * &config.point(i).coords[t])
                .sum()
        })
        .collect();
    Ok(LpOutcome::Feasible(IntersectionCertificate { point, weights }))
}

/// Rechecks a certificate from scratch: the partition is a rainbow partition
/// of `config`, every weight is nonnegative, each block's weights sum to one
/// and each block's combination equals the stated point.
pub fn verify_certificate(
    config: &ColoredConfig,
    partition: &RainbowPartition,
    cert: &IntersectionCertificate,
) -> bool {
    let blocks = partition.blocks();
    if cert.weights.len() != blocks.len() || cert.point.len() != config.dim() {
        return false;
    }
    let mut used = vec![false; config.len()];
    for (block, weights) in blocks.iter().zip(&cert.weights) {
        if block.is_empty() || weights.len() != block.len() {
            return false;
        }
        let mut colors = vec![false; config.color_count()];
        for &i in block {
            if i >= config.len() || used[i] || colors[config.color(i)] {
                return false;
            }
            used[i] = true;
            colors[config.color(i)] = true;
        }
        if weights.iter().any(Signed::is_negative) {
            return false;
        }
        if weights.iter().sum::<Rational>() != Rational::one() {
            return false;
        }
        for (t, target) in cert.point.iter().enumerate() {
            let combination: Rational = block
                .iter()
                .zip(weights)
                .map(|(&i, w)| w * &config.point(i).coords[t])
                .sum();
            if &combination != target {
                return false;
            }
        }
    }
    true
}

/// The certificate for `partition`, or an integrity error if the solver's
/// answer does not survive independent verification.
pub(crate) fn certified(
    config: &ColoredConfig,
    partition: &RainbowPartition,
) -> Result<Option<IntersectionCertificate>> {
    match common_point_lp(config, partition)? {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Feasible(cert) => {
            if verify_certificate(config, partition, &cert) {
                Ok(Some(cert))
            } else {
                Err(Error::Integrity(format!(
                    "solver certificate for {:?} failed verification",
                    partition.blocks()
                )))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{parse_config, parse_rational};

    fn line(xs: &[(&str, usize)]) -> ColoredConfig {
        let pts: Vec<String> = xs
            .iter()
            .map(|(x, c)| format!(r#"{{"x":["{x}"],"color":{c}}}"#))
            .collect();
        parse_config(&format!(r#"{{"dim":1,"points":[{}]}}"#, pts.join(","))).unwrap()
    }

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn segment_contains_point() {
        let c = line(&[("1", 0), ("5", 1), ("2", 0)]);
        let p = RainbowPartition::new(&c, vec![vec![0, 1], vec![2]]).unwrap();
        let LpOutcome::Feasible(cert) = common_point_lp(&c, &p).unwrap() else {
            panic!("expected a common point");
        };
        assert_eq!(cert.point, vec![q("2")]);
        assert_eq!(cert.weights, vec![vec![q("3/4"), q("1/4")], vec![q("1")]]);
        assert!(verify_certificate(&c, &p, &cert));
    }

    #[test]
    fn disjoint_segments_are_infeasible() {
        let c = line(&[("0", 0), ("1", 1), ("2", 0), ("3", 1)]);
        let p = RainbowPartition::new(&c, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(common_point_lp(&c, &p).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn coincident_points() {
        let doc = r#"{"dim":2,"points":[{"x":["1/2","3"],"color":0},{"x":["1/2","3"],"color":1},{"x":["1/2","3"],"color":0},{"x":["1/2","3"],"color":2}]}"#;
        let c = parse_config(doc).unwrap();
        for p in crate::geometry::enumerate_rainbow_partitions(&c, 2) {
            let LpOutcome::Feasible(cert) = common_point_lp(&c, &p).unwrap() else {
                panic!("coincident points always meet");
            };
            assert_eq!(cert.point, vec![q("1/2"), q("3")]);
            assert!(verify_certificate(&c, &p, &cert));
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let c = line(&[("1", 0), ("5", 1), ("2", 0)]);
        let p = RainbowPartition::new(&c, vec![vec![0, 1], vec![2]]).unwrap();
        let LpOutcome::Feasible(cert) = common_point_lp(&c, &p).unwrap() else {
            panic!();
        };
        let mut neg = cert.clone();
        neg.weights[0] = vec![q("3/2"), q("-1/2")];
        assert!(!verify_certificate(&c, &p, &neg));
        let mut moved = cert.clone();
        moved.point = vec![q("3")];
        assert!(!verify_certificate(&c, &p, &moved));
        let other = line(&[("1", 0), ("5", 1), ("7/3", 0)]);
        assert!(!verify_certificate(&other, &p, &cert));
        let mut short = cert;
        short.weights.pop();
        assert!(!verify_certificate(&c, &p, &short));
    }

    #[test]
    fn mismatched_partition_is_a_parameter_error() {
        let c = line(&[("1", 0), ("5", 1)]);
        let other = line(&[("1", 0), ("5", 1), ("2", 0)]);
        let p = RainbowPartition::new(&other, vec![vec![0, 1], vec![2]]).unwrap();
        assert!(matches!(common_point_lp(&c, &p), Err(Error::Parameter(_))));
    }
}
