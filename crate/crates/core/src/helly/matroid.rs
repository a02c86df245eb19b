//! Partition matroids over a family of bodies: color classes with
//! rank(S) = number of classes S meets. The free matroid is the partition
//! into singletons. These are the only matroids the harness supports.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionMatroid {
    classes: Vec<Vec<usize>>,
    ground_size: usize,
}

impl PartitionMatroid {
    /// Classes must partition `{0, .., ground_size-1}`.
    pub fn new(classes: Vec<Vec<usize>>, ground_size: usize) -> Result<Self> {
        let mut seen = vec![false; ground_size];
        for class in &classes {
            for &i in class {
                if i >= ground_size || seen[i] {
                    return Err(GeomError::InvalidInput(
                        "classes must partition the ground set".into(),
                    ));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(GeomError::InvalidInput(
                "classes must cover the ground set".into(),
            ));
        }
        Ok(PartitionMatroid {
            classes,
            ground_size,
        })
    }

    /// Free matroid: every element its own class, rank(S) = |S|.
    pub fn free(ground_size: usize) -> Self {
        PartitionMatroid {
            classes: (0..ground_size).map(|i| vec![i]).collect(),
            ground_size,
        }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn rank(&self, subset: &[usize]) -> usize {
        self.classes
            .iter()
            .filter(|class| class.iter().any(|i| subset.contains(i)))
            .count()
    }

    pub fn is_independent(&self, subset: &[usize]) -> bool {
        self.classes
            .iter()
            .all(|class| class.iter().filter(|i| subset.contains(i)).count() <= 1)
    }

    /// Number of maximal independent sets (one element per nonempty class).
    pub fn transversal_count(&self) -> usize {
        self.classes
            .iter()
            .filter(|c| !c.is_empty())
            .map(|c| c.len())
            .product()
    }

    /// Enumerate maximal independent sets; witness checks on these cover all
    /// independent sets because shrinking an index set only grows the
    /// intersection.
    pub fn transversals(&self) -> Vec<Vec<usize>> {
        let nonempty: Vec<&Vec<usize>> = self.classes.iter().filter(|c| !c.is_empty()).collect();
        let mut out = vec![Vec::new()];
        for class in nonempty {
            let mut next = Vec::with_capacity(out.len() * class.len());
            for prefix in &out {
                for &i in class {
                    let mut p = prefix.clone();
                    p.push(i);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}
