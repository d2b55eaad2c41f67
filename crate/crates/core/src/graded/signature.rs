use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GradedError, Result};

/// Size caps for signatures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_families: usize,
    pub max_coords: usize,
    pub max_weight: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_families: 4,
            max_coords: 24,
            max_weight: 6,
        }
    }
}

/// Coordinate layout of a graded space.
///
/// Coordinates are numbered block by block: the base block (degree 0) first,
/// then the graded blocks. `Simple { dims }` has `dims[i]` coordinates of
/// weight `i + 1`. `Multi` has one block per nonzero `sigma` in `{0,1}^n`
/// (bit `i` of the mask is `sigma_i`), ordered by total weight, then mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSignature", into = "RawSignature")]
pub enum GradedSignature {
    Simple {
        base: usize,
        dims: Vec<usize>,
    },
    Multi {
        n: usize,
        base: usize,
        blocks: BTreeMap<u32, usize>,
    },
}

#[derive(Serialize, Deserialize)]
struct RawBlock {
    degree: Vec<u32>,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
enum RawSignature {
    Simple {
        #[serde(default)]
        base: usize,
        dims: Vec<usize>,
    },
    Multi {
        n: usize,
        #[serde(default)]
        base: usize,
        blocks: Vec<RawBlock>,
    },
}

impl From<GradedSignature> for RawSignature {
    fn from(s: GradedSignature) -> Self {
        match s {
            GradedSignature::Simple { base, dims } => RawSignature::Simple { base, dims },
            GradedSignature::Multi {
                n,
                base,
                ref blocks,
            } => {
                let mut masks: Vec<u32> = blocks.keys().copied().collect();
                masks.sort_by_key(|&m| (m.count_ones(), m));
                let blocks = masks
                    .into_iter()
                    .map(|m| RawBlock {
                        degree: mask_degree(m, n),
                        dim: blocks[&m],
                    })
                    .collect();
                RawSignature::Multi { n, base, blocks }
            }
        }
    }
}

impl TryFrom<RawSignature> for GradedSignature {
    type Error = GradedError;
    fn try_from(raw: RawSignature) -> Result<Self> {
        match raw {
            RawSignature::Simple { base, dims } => Ok(GradedSignature::Simple { base, dims }),
            RawSignature::Multi { n, base, blocks } => {
                let pairs: Vec<(Vec<u32>, usize)> =
                    blocks.into_iter().map(|b| (b.degree, b.dim)).collect();
                GradedSignature::multi_unchecked(n, base, &pairs)
            }
        }
    }
}

/// One block of coordinates sharing a multi-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub degree: Vec<u32>,
    pub start: usize,
    pub dim: usize,
}

impl Block {
    pub fn weight(&self) -> u32 {
        self.degree.iter().sum()
    }

    pub fn coords(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.dim
    }
}

fn mask_degree(mask: u32, n: usize) -> Vec<u32> {
    (0..n).map(|i| (mask >> i) & 1).collect()
}

impl GradedSignature {
    pub fn simple(dims: &[usize]) -> Result<Self> {
        let s = GradedSignature::Simple {
            base: 0,
            dims: dims.to_vec(),
        };
        s.validate(&Caps::default())?;
        Ok(s)
    }

    /// Multi-graded signature from `(sigma, dim)` pairs with `sigma` in `{0,1}^n`.
    pub fn multi(n: usize, base: usize, blocks: &[(Vec<u32>, usize)]) -> Result<Self> {
        let s = GradedSignature::multi_unchecked(n, base, blocks)?;
        s.validate(&Caps::default())?;
        Ok(s)
    }

    /// Like [`GradedSignature::multi`] without the size caps.
    pub fn multi_unchecked(n: usize, base: usize, blocks: &[(Vec<u32>, usize)]) -> Result<Self> {
        if n == 0 || n > 31 {
            return Err(GradedError::InvalidSignature(format!("{n} families")));
        }
        let mut map = BTreeMap::new();
        for (degree, dim) in blocks {
            if degree.len() != n || degree.iter().any(|&b| b > 1) {
                return Err(GradedError::InvalidSignature(format!(
                    "degree {degree:?} is not in {{0,1}}^{n}"
                )));
            }
            let mask = degree
                .iter()
                .enumerate()
                .fold(0u32, |m, (i, &b)| m | (b << i));
            if map.insert(mask, *dim).is_some() {
                return Err(GradedError::InvalidSignature(format!(
                    "degree {degree:?} listed twice"
                )));
            }
        }
        Ok(GradedSignature::Multi {
            n,
            base,
            blocks: map,
        })
    }

    /// `(1,0)`, `(0,1)`, `(1,1)` blocks of dimensions `d`, `d'`, `d0` over an empty base.
    pub fn double(d: usize, dprime: usize, d0: usize) -> Result<Self> {
        GradedSignature::multi(
            2,
            0,
            &[(vec![1, 0], d), (vec![0, 1], dprime), (vec![1, 1], d0)],
        )
    }

    pub fn validate(&self, caps: &Caps) -> Result<()> {
        let err = |m: String| Err(GradedError::InvalidSignature(m));
        match self {
            GradedSignature::Simple { dims, .. } => {
                if dims.len() as u32 > caps.max_weight {
                    return err(format!(
                        "weights up to {} exceed the cap {}",
                        dims.len(),
                        caps.max_weight
                    ));
                }
            }
            GradedSignature::Multi { n, blocks, .. } => {
                if *n == 0 || *n > caps.max_families {
                    return err(format!("{n} families outside 1..={}", caps.max_families));
                }
                if let Some(&m) = blocks.keys().find(|&&m| m == 0 || m >= 1 << n) {
                    return err(format!(
                        "block mask {m} is not a nonzero element of {{0,1}}^{n}"
                    ));
                }
                if *n as u32 > caps.max_weight {
                    return err(format!("weight {n} exceeds the cap {}", caps.max_weight));
                }
            }
        }
        let total = self.coords();
        if total == 0 {
            return err("signature has no coordinates".into());
        }
        if total > caps.max_coords {
            return err(format!(
                "{total} coordinates exceed the cap {}",
                caps.max_coords
            ));
        }
        Ok(())
    }

    /// Number of dilation families (1 for simple signatures).
    pub fn families(&self) -> usize {
        match self {
            GradedSignature::Simple { .. } => 1,
            GradedSignature::Multi { n, .. } => *n,
        }
    }

    pub fn base_dim(&self) -> usize {
        match self {
            GradedSignature::Simple { base, .. } | GradedSignature::Multi { base, .. } => *base,
        }
    }

    /// All blocks including the base block, in coordinate order; empty blocks included.
    pub fn blocks(&self) -> Vec<Block> {
        let n = self.families();
        let mut out = vec![Block {
            degree: vec![0; n],
            start: 0,
            dim: self.base_dim(),
        }];
        let mut start = self.base_dim();
        match self {
            GradedSignature::Simple { dims, .. } => {
                for (i, &d) in dims.iter().enumerate() {
                    out.push(Block {
                        degree: vec![i as u32 + 1],
                        start,
                        dim: d,
                    });
                    start += d;
                }
            }
            GradedSignature::Multi { n, blocks, .. } => {
                let mut masks: Vec<u32> = blocks.keys().copied().collect();
                masks.sort_by_key(|&m| (m.count_ones(), m));
                for m in masks {
                    let d = blocks[&m];
                    out.push(Block {
                        degree: mask_degree(m, *n),
                        start,
                        dim: d,
                    });
                    start += d;
                }
            }
        }
        out
    }

    pub fn coords(&self) -> usize {
        match self {
            GradedSignature::Simple { base, dims } => base + dims.iter().sum::<usize>(),
            GradedSignature::Multi { base, blocks, .. } => base + blocks.values().sum::<usize>(),
        }
    }

    /// Multi-degree of every coordinate.
    pub fn degrees(&self) -> Vec<Vec<u32>> {
        self.blocks()
            .into_iter()
            .flat_map(|b| std::iter::repeat_n(b.degree.clone(), b.dim))
            .collect()
    }

    /// Total weight of every coordinate.
    pub fn weights(&self) -> Vec<u32> {
        self.degrees().iter().map(|d| d.iter().sum()).collect()
    }

    /// Weight of every coordinate for dilation family `family`.
    pub fn family_weights(&self, family: usize) -> Vec<u32> {
        self.degrees().iter().map(|d| d[family]).collect()
    }

    /// Multi-degree of a monomial.
    pub fn monomial_degree(&self, exponents: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.families()];
        for (d, &k) in self.degrees().iter().zip(exponents) {
            for (o, &x) in out.iter_mut().zip(d) {
                *o += x * k;
            }
        }
        out
    }

    pub fn max_weight(&self) -> u32 {
        self.weights().into_iter().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_layout() {
        let s = GradedSignature::simple(&[1, 2]).unwrap();
        assert_eq!(s.coords(), 3);
        assert_eq!(s.weights(), vec![1, 2, 2]);
        assert_eq!(s.monomial_degree(&[2, 1, 0]), vec![4]);
    }

    #[test]
    fn double_layout() {
        let s = GradedSignature::double(1, 2, 1).unwrap();
        assert_eq!(
            s.degrees(),
            vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![1, 1]]
        );
        assert_eq!(s.family_weights(1), vec![0, 1, 1, 1]);
        assert_eq!(s.blocks().len(), 4);
    }

    #[test]
    fn caps_are_enforced() {
        assert!(GradedSignature::simple(&[0, 0]).is_err());
        assert!(GradedSignature::simple(&[25]).is_err());
        assert!(GradedSignature::simple(&[1, 0, 0, 0, 0, 0, 1]).is_err());
        assert!(GradedSignature::multi(5, 0, &[(vec![1, 0, 0, 0, 0], 1)]).is_err());
        assert!(GradedSignature::multi(2, 0, &[(vec![0, 0], 1)]).is_err());
        assert!(GradedSignature::multi(2, 0, &[(vec![1, 0], 1), (vec![1, 0], 1)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = GradedSignature::double(1, 1, 1).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"mode":"multi","n":2,"base":0,"blocks":[{"degree":[1,0],"dim":1},{"degree":[0,1],"dim":1},{"degree":[1,1],"dim":1}]}"#
        );
        assert_eq!(serde_json::from_str::<GradedSignature>(&j).unwrap(), s);
        let simple: GradedSignature =
            serde_json::from_str(r#"{"mode":"simple","dims":[1,1]}"#).unwrap();
        assert_eq!(simple, GradedSignature::simple(&[1, 1]).unwrap());
    }
}
