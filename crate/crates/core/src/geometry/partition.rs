//! Rainbow partitions: `r` disjoint nonempty blocks, each using every color
//! at most once. Points may be left out.

use super::config::ColoredConfig;
use crate::error::{Error, Result};

/// Blocks are kept sorted internally and ordered by their smallest member,
/// so two partitions that differ only in block order compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RainbowPartition {
    blocks: Vec<Vec<usize>>,
}

impl RainbowPartition {
    pub fn new(config: &ColoredConfig, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; config.len()];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::Parameter("partition has an empty block".into()));
            }
            block.sort_unstable();
            let mut colors = vec![false; config.color_count()];
            for &i in block.iter() {
                if i >= config.len() {
                    return Err(Error::Parameter(format!("point index {i} out of range")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::Parameter(format!("point {i} is used twice")));
                }
                if std::mem::replace(&mut colors[config.color(i)], true) {
                    return Err(Error::Parameter(format!(
                        "block {block:?} repeats color {}",
                        config.color(i)
                    )));
                }
            }
        }
        blocks.sort_unstable();
        Ok(RainbowPartition { blocks })
    }

    pub(crate) fn from_canonical(blocks: Vec<Vec<usize>>) -> Self {
        RainbowPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn used_points(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// No unused point can join any block without repeating a color.
    pub fn is_maximal(&self, config: &ColoredConfig) -> bool {
        let mut used = vec![false; config.len()];
        let mut has = vec![vec![false; config.color_count()]; self.blocks.len()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                used[i] = true;
                has[b][config.color(i)] = true;
            }
        }
        (0..config.len())
            .filter(|&i| !used[i])
            .all(|i| has.iter().all(|h| h[config.color(i)]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionMode {
    /// Every rainbow partition into exactly `r` blocks.
    All,
    /// Only partitions to which no unused point can be added. Enlarging a
    /// block only enlarges its hull, so these suffice for intersection search.
    Maximal,
    /// Only partitions that use every point.
    Full,
}

/// Lazy depth-first enumeration in canonical order. Each point is first
/// left unused, then tried in block 0, 1, ... and finally a fresh block.
#[derive(Debug, Clone)]
pub struct RainbowPartitions {
    colors: Vec<usize>,
    r: usize,
    unused_quota: Vec<usize>,
    unused_by_color: Vec<usize>,
    block_has: Vec<bool>,
    block_size: Vec<usize>,
    open: usize,
    choice: Vec<usize>,
    depth: usize,
    next_option: usize,
    at_leaf: bool,
    done: bool,
}

pub fn enumerate_rainbow_partitions(config: &ColoredConfig, r: usize) -> RainbowPartitions {
    RainbowPartitions::new(config, r, PartitionMode::All)
}

impl RainbowPartitions {
    pub fn new(config: &ColoredConfig, r: usize, mode: PartitionMode) -> Self {
        let colors: Vec<usize> = config.points().iter().map(|p| p.color).collect();
        let unused_quota = config
            .class_sizes()
            .iter()
            .map(|&s| match mode {
                PartitionMode::All => s,
                // A maximal partition leaves a color unused only once all r
                // blocks carry it.
                PartitionMode::Maximal => s.saturating_sub(r),
                PartitionMode::Full => 0,
            })
            .collect();
        let n = colors.len();
        RainbowPartitions {
            r,
            unused_quota,
            unused_by_color: vec![0; config.color_count()],
            block_has: vec![false; r * config.color_count()],
            block_size: vec![0; r],
            open: 0,
            choice: vec![0; n],
            depth: 0,
            next_option: 0,
            at_leaf: false,
            done: r == 0 || r > n,
            colors,
        }
    }

    fn color_count(&self) -> usize {
        self.unused_by_color.len()
    }

    /// Option 0 leaves the point unused; option `b + 1` puts it in block `b`.
    fn slot_of(&self, option: usize) -> usize {
        if option == 0 {
            self.r
        } else {
            option - 1
        }
    }

    fn try_apply(&mut self, i: usize, option: usize) -> bool {
        let option = self.slot_of(option);
        let c = self.colors[i];
        let remaining = self.colors.len() - i - 1;
        if option == self.r {
            if self.unused_by_color[c] >= self.unused_quota[c] || remaining < self.r - self.open {
                return false;
            }
            self.unused_by_color[c] += 1;
            return true;
        }
        if option > self.open {
            return false;
        }
        let opens = option == self.open;
        if remaining < self.r - self.open - usize::from(opens) {
            return false;
        }
        let slot = option * self.color_count() + c;
        if self.block_has[slot] {
            return false;
        }
        self.block_has[slot] = true;
        self.block_size[option] += 1;
        if opens {
            self.open += 1;
        }
        true
    }

    fn undo(&mut self, i: usize, option: usize) {
        let option = self.slot_of(option);
        let c = self.colors[i];
        if option == self.r {
            self.unused_by_color[c] -= 1;
            return;
        }
        let slot = option * self.color_count() + c;
        self.block_has[slot] = false;
        self.block_size[option] -= 1;
        if self.block_size[option] == 0 {
            self.open -= 1;
        }
    }

    fn backtrack(&mut self) {
        if self.depth == 0 {
            self.done = true;
            return;
        }
        self.depth -= 1;
        let option = self.choice[self.depth];
        self.undo(self.depth, option);
        self.next_option = option + 1;
    }

    fn current(&self) -> RainbowPartition {
        let mut blocks = vec![Vec::new(); self.r];
        for (i, &option) in self.choice.iter().enumerate() {
            if option > 0 {
                blocks[option - 1].push(i);
            }
        }
        RainbowPartition::from_canonical(blocks)
    }
}

impl Iterator for RainbowPartitions {
    type Item = RainbowPartition;

    fn next(&mut self) -> Option<RainbowPartition> {
        if self.at_leaf {
            self.at_leaf = false;
            self.backtrack();
        }
        let n = self.colors.len();
        while !self.done {
            if self.depth == n {
                if self.open == self.r {
                    self.at_leaf = true;
                    return Some(self.current());
                }
                self.backtrack();
                continue;
            }
            let i = self.depth;
            let mut advanced = false;
            for option in self.next_option..=self.r {
                if self.try_apply(i, option) {
                    self.choice[i] = option;
                    self.depth += 1;
                    self.next_option = 0;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                self.backtrack();
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::geometry::config::random_config;
    use crate::geometry::parse_config;

    fn radon_example() -> ColoredConfig {
        parse_config(r#"{"dim":1,"points":[{"x":["0"],"color":0},{"x":["1"],"color":0},{"x":["2"],"color":0},{"x":["5"],"color":1}]}"#).unwrap()
    }

    /// Every map point -> {unused, 0..r} with exactly r nonempty rainbow
    /// blocks, canonicalized through a set.
    fn brute_force(config: &ColoredConfig, r: usize) -> BTreeSet<Vec<Vec<usize>>> {
        let n = config.len();
        let mut out = BTreeSet::new();
        let total = (r + 1).pow(n as u32);
        for mut code in 0..total {
            let mut blocks = vec![Vec::new(); r];
            for i in 0..n {
                let a = code % (r + 1);
                code /= r + 1;
                if a < r {
                    blocks[a].push(i);
                }
            }
            if blocks.iter().any(Vec::is_empty) {
                continue;
            }
            let rainbow = blocks.iter().all(|b| {
                let colors: BTreeSet<_> = b.iter().map(|&i| config.color(i)).collect();
                colors.len() == b.len()
            });
            if rainbow {
                blocks.sort();
                out.insert(blocks);
            }
        }
        out
    }

    #[test]
    fn documented_example_partition_appears() {
        let c = radon_example();
        let all: Vec<_> = enumerate_rainbow_partitions(&c, 2).collect();
        assert!(all.iter().any(|p| p.blocks() == [vec![1, 3], vec![2]]));
        let set: BTreeSet<_> = all.iter().map(|p| p.blocks().to_vec()).collect();
        assert_eq!(set.len(), all.len());
        assert_eq!(set, brute_force(&c, 2));
    }

    #[test]
    fn too_many_blocks_is_empty() {
        assert_eq!(enumerate_rainbow_partitions(&radon_example(), 5).count(), 0);
    }

    #[test]
    fn full_partition_counts() {
        let k4444 = random_config(3, &[4, 4, 4, 4], 1, 10).unwrap();
        assert_eq!(RainbowPartitions::new(&k4444, 4, PartitionMode::Full).count(), 13824);
        let k333 = random_config(2, &[3, 3, 3], 1, 10).unwrap();
        assert_eq!(RainbowPartitions::new(&k333, 3, PartitionMode::Maximal).count(), 36);
    }

    #[test]
    fn agrees_with_brute_force() {
        for (sizes, r) in [(vec![3, 1, 1], 2), (vec![2, 2, 3], 3), (vec![1, 1, 1, 1, 1, 1], 3), (vec![4, 3], 2)] {
            let c = random_config(2, &sizes, 5, 10).unwrap();
            let fast: Vec<_> = enumerate_rainbow_partitions(&c, r).map(|p| p.blocks().to_vec()).collect();
            let set: BTreeSet<_> = fast.iter().cloned().collect();
            assert_eq!(set.len(), fast.len(), "{sizes:?}");
            assert_eq!(set, brute_force(&c, r), "{sizes:?}");

            let maximal: BTreeSet<_> = RainbowPartitions::new(&c, r, PartitionMode::Maximal)
                .map(|p| p.blocks().to_vec())
                .collect();
            let expected: BTreeSet<_> = set
                .iter()
                .filter(|b| RainbowPartition::from_canonical((*b).clone()).is_maximal(&c))
                .cloned()
                .collect();
            assert_eq!(maximal, expected, "{sizes:?}");
            let full: BTreeSet<_> = RainbowPartitions::new(&c, r, PartitionMode::Full)
                .map(|p| p.blocks().to_vec())
                .collect();
            let expected: BTreeSet<_> = set
                .iter()
                .filter(|b| b.iter().map(Vec::len).sum::<usize>() == c.len())
                .cloned()
                .collect();
            assert_eq!(full, expected, "{sizes:?}");
        }
    }

    #[test]
    fn new_validates_and_canonicalizes() {
        let c = radon_example();
        let p = RainbowPartition::new(&c, vec![vec![2], vec![3, 1]]).unwrap();
        assert_eq!(p.blocks(), [vec![1, 3], vec![2]]);
        assert!(RainbowPartition::new(&c, vec![vec![0, 1], vec![3]]).is_err());
        assert!(RainbowPartition::new(&c, vec![vec![0], vec![0, 3]]).is_err());
        assert!(RainbowPartition::new(&c, vec![vec![0], vec![]]).is_err());
        assert!(RainbowPartition::new(&c, vec![vec![9], vec![1]]).is_err());
    }
}
