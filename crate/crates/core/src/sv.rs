//! Layered partitions of a monomial set in the Schmitt-Vogel form: if `P_0`
//! is a singleton and any two distinct elements of a later block have their
//! product divided by an element of an earlier block, the block sums
//! `q_i = sum p^e(p)` generate `(P)` up to radical.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::SquarefreeMonomial;
use crate::tls::TreeLikeSystem;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvPartition {
    pub target: Vec<SquarefreeMonomial>,
    pub blocks: Vec<Vec<SquarefreeMonomial>>,
    /// Parallel to `blocks`; empty means every exponent is 1.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exponents: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SvViolation {
    /// (i): a block element outside the target.
    NotInTarget { block: usize, monomial: SquarefreeMonomial },
    /// (i): a target element in no block.
    Uncovered { monomial: SquarefreeMonomial },
    /// (ii)
    FirstBlockNotSingleton { size: usize },
    /// (iii)
    NoEarlierDivisor { block: usize, p: SquarefreeMonomial, q: SquarefreeMonomial },
    BadExponent { block: usize },
}

impl fmt::Display for SvViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SvViolation::NotInTarget { block, monomial } => write!(f, "block {block}: {monomial} is not in the target set"),
            SvViolation::Uncovered { monomial } => write!(f, "{monomial} is in no block"),
            SvViolation::FirstBlockNotSingleton { size } => write!(f, "first block has {size} elements"),
            SvViolation::NoEarlierDivisor { block, p, q } => {
                write!(f, "block {block}: no element of an earlier block divides {p} * {q}")
            }
            SvViolation::BadExponent { block } => write!(f, "block {block}: exponents must be positive and match the block"),
        }
    }
}

impl SvPartition {
    pub fn new(target: Vec<SquarefreeMonomial>, blocks: Vec<Vec<SquarefreeMonomial>>) -> Self {
        SvPartition { target, blocks, exponents: Vec::new() }
    }

    pub fn exponent(&self, block: usize, index: usize) -> u32 {
        self.exponents
            .get(block)
            .and_then(|b| b.get(index))
            .copied()
            .unwrap_or(1)
    }
}

pub fn sv_check(part: &SvPartition) -> std::result::Result<(), SvViolation> {
    if !part.exponents.is_empty() {
        if part.exponents.len() != part.blocks.len() {
            return Err(SvViolation::BadExponent { block: part.exponents.len().min(part.blocks.len()) });
        }
        for (i, (b, e)) in part.blocks.iter().zip(&part.exponents).enumerate() {
            if b.len() != e.len() || e.contains(&0) {
                return Err(SvViolation::BadExponent { block: i });
            }
        }
    }
    let target: BTreeSet<&SquarefreeMonomial> = part.target.iter().collect();
    let mut covered = BTreeSet::new();
    for (i, block) in part.blocks.iter().enumerate() {
        for m in block {
            if !target.contains(m) {
                return Err(SvViolation::NotInTarget { block: i, monomial: m.clone() });
            }
            covered.insert(m);
        }
    }
    if let Some(m) = target.iter().find(|m| !covered.contains(*m)) {
        return Err(SvViolation::Uncovered { monomial: (*m).clone() });
    }
    let first = part.blocks.first().map_or(0, |b| b.len());
    if first != 1 {
        return Err(SvViolation::FirstBlockNotSingleton { size: first });
    }
    for (i, block) in part.blocks.iter().enumerate().skip(1) {
        for (x, p) in block.iter().enumerate() {
            for q in &block[x + 1..] {
                if p == q {
                    continue;
                }
                let ok = part.blocks[..i].iter().flatten().any(|d| d.divides_product(p, q));
                if !ok {
                    return Err(SvViolation::NoEarlierDivisor { block: i, p: p.clone(), q: q.clone() });
                }
            }
        }
    }
    Ok(())
}

/// One block per element, with the target set to the support. When the
/// system splits into strict chains the blocks follow the chains one after
/// the other, each starting with its singleton head; otherwise they follow
/// the element order.
pub fn tls_to_partition(s: &TreeLikeSystem) -> Result<SvPartition> {
    if s.is_empty() {
        return Err(Error::InvalidSystem("empty system".into()));
    }
    s.validate().map_err(|v| Error::InvalidSystem(v.to_string()))?;
    let order: Vec<usize> = match s.decompose_strict() {
        Ok(chains) => chains.into_iter().flat_map(|c| c.positions).collect(),
        Err(_) => (0..s.len()).collect(),
    };
    let blocks = order
        .iter()
        .map(|&i| s.elements()[i].summands().cloned().collect())
        .collect();
    Ok(SvPartition::new(s.support().into_iter().collect(), blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tls::TlsElement;

    fn e(u: usize, v: usize) -> SquarefreeMonomial {
        SquarefreeMonomial::edge(u, v)
    }

    // v=0 v1=1 v2=2 w1=3 w2=4 a=5 b=6 c=7 d=8
    fn blocks_pd5() -> Vec<Vec<SquarefreeMonomial>> {
        vec![
            vec![e(0, 2)],
            vec![e(0, 1), e(2, 3)],
            vec![e(2, 4), e(3, 5)],
            vec![e(5, 7)],
            vec![e(5, 6), e(7, 8)],
        ]
    }

    fn flat(blocks: &[Vec<SquarefreeMonomial>]) -> Vec<SquarefreeMonomial> {
        blocks.iter().flatten().cloned().collect()
    }

    #[test]
    fn sample_partition_passes() {
        let b = blocks_pd5();
        assert_eq!(sv_check(&SvPartition::new(flat(&b), b)), Ok(()));
    }

    #[test]
    fn missing_divisor_fails() {
        // x=0 y=1 z=2 u=3 w=4
        let b = vec![vec![e(0, 1)], vec![e(0, 2), e(3, 4)]];
        assert!(matches!(
            sv_check(&SvPartition::new(flat(&b), b)),
            Err(SvViolation::NoEarlierDivisor { block: 1, .. })
        ));
    }

    #[test]
    fn single_block() {
        let b = vec![vec![e(0, 1)]];
        assert_eq!(sv_check(&SvPartition::new(flat(&b), b)), Ok(()));
        let b = vec![vec![e(0, 1), e(1, 2)]];
        assert_eq!(
            sv_check(&SvPartition::new(flat(&b), b)),
            Err(SvViolation::FirstBlockNotSingleton { size: 2 })
        );
    }

    #[test]
    fn coverage_conditions() {
        let b = vec![vec![e(0, 1)]];
        assert!(matches!(sv_check(&SvPartition::new(vec![e(0, 1), e(1, 2)], b.clone())), Err(SvViolation::Uncovered { .. })));
        assert!(matches!(sv_check(&SvPartition::new(vec![e(1, 2)], b)), Err(SvViolation::NotInTarget { .. })));
    }

    #[test]
    fn moving_a_block_ahead_of_its_divisor_fails() {
        let mut b = blocks_pd5();
        b.swap(3, 4);
        let p = SvPartition::new(flat(&b), b);
        assert!(matches!(sv_check(&p), Err(SvViolation::NoEarlierDivisor { block: 3, .. })));
    }

    #[test]
    fn overlapping_blocks_are_allowed() {
        let b = vec![vec![e(0, 1)], vec![e(0, 1)], vec![e(0, 2), e(1, 3)]];
        assert_eq!(sv_check(&SvPartition::new(vec![e(0, 1), e(0, 2), e(1, 3)], b)), Ok(()));
    }

    #[test]
    fn exponents_are_checked() {
        let b = blocks_pd5();
        let mut p = SvPartition::new(flat(&b), b);
        p.exponents = vec![vec![1], vec![2, 3], vec![1, 1], vec![4], vec![1, 1]];
        assert_eq!(sv_check(&p), Ok(()));
        assert_eq!(p.exponent(1, 1), 3);
        p.exponents[2][0] = 0;
        assert_eq!(sv_check(&p), Err(SvViolation::BadExponent { block: 2 }));
    }

    #[test]
    fn from_systems() {
        let els = blocks_pd5()
            .into_iter()
            .map(|b| TlsElement::try_from(b).unwrap())
            .collect();
        let s = TreeLikeSystem::new(9, els).unwrap();
        let p = tls_to_partition(&s).unwrap();
        assert_eq!(p.blocks, blocks_pd5());
        assert_eq!(sv_check(&p), Ok(()));

        let single = TreeLikeSystem::isolated_edges(2, &[(0, 1)]);
        assert_eq!(tls_to_partition(&single).unwrap().blocks, vec![vec![e(0, 1)]]);

        let bad = TreeLikeSystem::new(4, vec![TlsElement::pair(e(0, 1), e(2, 3)).unwrap()]).unwrap();
        assert!(matches!(tls_to_partition(&bad), Err(Error::InvalidSystem(_))));
    }
}
