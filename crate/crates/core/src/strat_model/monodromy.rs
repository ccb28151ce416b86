use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::StratError;
use crate::chain_engine::{SimplicialComplexDesc, Vertex};
use crate::group_data::{CompactGroupDesc, GroupInclusion};
use crate::linalg::Matrix;

/// Monodromy of the coefficient bundles over a node complex, given by
/// automorphisms of the character lattice on oriented edges `a < b`: the
/// transport from the fiber at `b` to the fiber at `a` sends a character
/// `χ` to `M χ`. Edges without data (a spanning tree, typically) carry the
/// identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Monodromy {
    edges: BTreeMap<(Vertex, Vertex), Vec<Vec<i64>>>,
}

impl Monodromy {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(Vertex, Vertex), &Vec<Vec<i64>>)> {
        self.edges.iter()
    }

    /// Sets the transport `V_b -> V_a`. Data for `a > b` is stored inverted.
    pub fn set(&mut self, a: Vertex, b: Vertex, m: Vec<Vec<i64>>) -> Result<(), StratError> {
        let bad = |reason: &str| StratError::BadMonodromy { edge: (a, b), reason: reason.into() };
        if a == b {
            return Err(bad("loop edge"));
        }
        let stored = if a < b { m } else { int_inverse(&m).ok_or_else(|| bad("not invertible over the integers"))? };
        let n = stored.len();
        if stored.iter().any(|r| r.len() != n) {
            return Err(bad("matrix is not square"));
        }
        if is_identity(&stored) {
            self.edges.remove(&(a.min(b), a.max(b)));
        } else {
            self.edges.insert((a.min(b), a.max(b)), stored);
        }
        Ok(())
    }

    /// Transport `V_b -> V_a` for vertices of a common simplex.
    pub fn transport(&self, a: Vertex, b: Vertex, n: usize) -> Vec<Vec<i64>> {
        if a == b {
            return identity(n);
        }
        match self.edges.get(&(a.min(b), a.max(b))) {
            None => identity(n),
            Some(m) if a < b => m.clone(),
            Some(m) => int_inverse(m).expect("validated monodromy is invertible"),
        }
    }

    pub fn validate(&self, group: &CompactGroupDesc, complex: &SimplicialComplexDesc) -> Result<(), StratError> {
        if self.is_trivial() {
            return Ok(());
        }
        if group.is_formal() {
            return Err(StratError::Unsupported("monodromy on a node with a formal group".into()));
        }
        let n = group.character_len();
        for (&(a, b), m) in &self.edges {
            let bad = |reason: String| StratError::BadMonodromy { edge: (a, b), reason };
            if !complex.contains(&[a, b]) {
                return Err(bad("not an edge of the complex".into()));
            }
            if m.len() != n {
                return Err(bad(format!("expected a {n}x{n} matrix")));
            }
            GroupInclusion::abelian(group.clone(), group.clone(), m.clone()).validate().map_err(|e| bad(e.to_string()))?;
            if int_inverse(m).is_none() {
                return Err(bad("not invertible over the integers".into()));
            }
        }
        for s in complex.simplices(2) {
            let (a, b, c) = (s[0], s[1], s[2]);
            if int_mul(&self.transport(a, b, n), &self.transport(b, c, n)) != self.transport(a, c, n) {
                return Err(StratError::NotFlat(s.clone()));
            }
        }
        Ok(())
    }

    /// Restriction to the edges of a subcomplex.
    pub fn restrict(&self, sub: &SimplicialComplexDesc) -> Monodromy {
        Monodromy { edges: self.edges.iter().filter(|((a, b), _)| sub.contains(&[*a, *b])).map(|(k, v)| (*k, v.clone())).collect() }
    }

    /// Monodromy on a complex whose vertex `v` sits over the old vertex
    /// `f(v)`; edges between vertices over a common simplex carry the old
    /// transport.
    pub fn pull_back(&self, target: &SimplicialComplexDesc, n: usize, f: impl Fn(Vertex) -> Vertex) -> Monodromy {
        let mut out = Monodromy::trivial();
        for e in target.simplices(1) {
            let (a, b) = (f(e[0]), f(e[1]));
            out.set(e[0], e[1], self.transport(a, b, n)).expect("transport is invertible");
        }
        out
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn is_identity(m: &[Vec<i64>]) -> bool {
    m.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
}

pub(crate) fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter().map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum()).collect()).collect()
}

pub(crate) fn int_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let inv = Matrix::from_i64(m, n).inverse()?;
    (0..n)
        .map(|i| (0..n).map(|j| inv.get(i, j).is_integer().then(|| inv.get(i, j).to_integer().to_i64()).flatten()).collect())
        .collect()
}
