use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ChainError;

pub type Vertex = usize;
/// A simplex as its strictly increasing vertex list.
pub type Simplex = Vec<Vertex>;

/// Finite abstract simplicial complex, closed under faces. Simplices are
/// oriented by increasing vertex label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplexDesc {
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplexDesc {
    pub fn empty() -> Self {
        SimplicialComplexDesc { by_dim: Vec::new(), index: Vec::new() }
    }

    /// Face closure of the given simplices.
    pub fn from_simplices<I, S>(simplices: I) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[Vertex]>,
    {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for s in simplices {
            let mut v = s.as_ref().to_vec();
            v.sort_unstable();
            let n = v.len();
            v.dedup();
            if v.len() != n || v.is_empty() {
                return Err(ChainError::BadSimplex(s.as_ref().to_vec()));
            }
            if all.contains(&v) {
                continue;
            }
            for mask in 1u64..(1u64 << v.len()) {
                let face: Simplex = v.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
                all.insert(face);
            }
        }
        Ok(Self::from_closed_set(all))
    }

    fn from_closed_set(all: BTreeSet<Simplex>) -> Self {
        let top = all.iter().map(|s| s.len()).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        for level in &mut by_dim {
            level.sort();
        }
        let index = by_dim.iter().map(|l| l.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        SimplicialComplexDesc { by_dim, index }
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// Dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn simplices(&self, p: usize) -> &[Simplex] {
        self.by_dim.get(p).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices(p).len()
    }

    pub fn index_of(&self, s: &[Vertex]) -> Option<usize> {
        let p = s.len().checked_sub(1)?;
        self.index.get(p)?.get(s).copied()
    }

    pub fn contains(&self, s: &[Vertex]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<&[Vertex]> = BTreeSet::new();
        for level in self.by_dim.iter().skip(1) {
            for s in level {
                for i in 0..s.len() {
                    let f = face(s, i);
                    if let Some(j) = self.index_of(&f) {
                        covered.insert(&self.by_dim[f.len() - 1][j]);
                    }
                }
            }
        }
        self.all_simplices().filter(|s| !covered.contains(s.as_slice())).cloned().collect()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplexDesc) -> bool {
        self.all_simplices().all(|s| other.contains(s))
    }

    pub fn intersection(&self, other: &SimplicialComplexDesc) -> SimplicialComplexDesc {
        Self::from_closed_set(self.all_simplices().filter(|s| other.contains(s)).cloned().collect())
    }

    pub fn union(&self, other: &SimplicialComplexDesc) -> SimplicialComplexDesc {
        Self::from_closed_set(self.all_simplices().chain(other.all_simplices()).cloned().collect())
    }

    /// Subcomplex spanned by simplices all of whose vertices are in `vs`.
    pub fn induced(&self, vs: &BTreeSet<Vertex>) -> SimplicialComplexDesc {
        Self::from_closed_set(self.all_simplices().filter(|s| s.iter().all(|v| vs.contains(v))).cloned().collect())
    }

    /// Connected components, ordered by smallest vertex.
    pub fn components(&self) -> Vec<SimplicialComplexDesc> {
        let verts = self.vertices();
        let pos: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, pos[&e[0]]), find(&mut parent, pos[&e[1]]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<Vertex>> = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().insert(v);
        }
        groups.into_values().map(|vs| self.induced(&vs)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(p, l)| if p % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    /// Barycentric subdivision. New vertex `i` is the barycenter of
    /// `labels[i]`; labels are listed by dimension, then lexicographically.
    pub fn barycentric_subdivision(&self) -> (SimplicialComplexDesc, Vec<Simplex>) {
        let labels: Vec<Simplex> = self.all_simplices().cloned().collect();
        let id: HashMap<&Simplex, usize> = labels.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut chains: Vec<Simplex> = Vec::new();
        for top in self.all_simplices() {
            // flags ending at `top`, built by removing one vertex at a time
            let mut stack: Vec<Vec<Simplex>> = vec![vec![top.clone()]];
            while let Some(flag) = stack.pop() {
                let last = flag.last().unwrap();
                let mut ids: Vec<usize> = flag.iter().map(|s| id[s]).collect();
                ids.sort_unstable();
                chains.push(ids);
                if last.len() > 1 {
                    for i in 0..last.len() {
                        let mut next = flag.clone();
                        next.push(face(last, i));
                        stack.push(next);
                    }
                }
            }
        }
        let sd = Self::from_simplices(chains).expect("flags are simplices");
        (sd, labels)
    }
}

/// Face obtained by deleting the i-th vertex.
pub fn face(s: &[Vertex], i: usize) -> Simplex {
    s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect()
}

/// Simplicial map given by a vertex map on its source complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMapDesc {
    pub vertex_map: BTreeMap<Vertex, Vertex>,
}

/// Image of an oriented simplex under a simplicial map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplexImage {
    /// Two vertices collapse.
    Degenerate,
    /// Sorted image simplex and the sign of the sorting permutation.
    Simplex { image: Simplex, sign: i64 },
}

impl SimplicialMapDesc {
    pub fn new(vertex_map: BTreeMap<Vertex, Vertex>) -> Self {
        SimplicialMapDesc { vertex_map }
    }

    pub fn constant(source: &SimplicialComplexDesc, v: Vertex) -> Self {
        SimplicialMapDesc { vertex_map: source.vertices().into_iter().map(|x| (x, v)).collect() }
    }

    pub fn vertex(&self, v: Vertex) -> Option<Vertex> {
        self.vertex_map.get(&v).copied()
    }

    pub fn image(&self, s: &[Vertex]) -> Option<SimplexImage> {
        let img: Vec<Vertex> = s.iter().map(|v| self.vertex(*v)).collect::<Option<_>>()?;
        let mut sorted = img.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Some(SimplexImage::Degenerate);
        }
        Some(SimplexImage::Simplex { sign: permutation_sign(&img), image: sorted })
    }

    /// Image of the vertex set of `s` (degenerate images allowed).
    pub fn image_set(&self, s: &[Vertex]) -> Option<Simplex> {
        let set: BTreeSet<Vertex> = s.iter().map(|v| self.vertex(*v)).collect::<Option<_>>()?;
        Some(set.into_iter().collect())
    }

    /// Checks that every source simplex maps onto a simplex of `target`.
    pub fn validate(&self, source: &SimplicialComplexDesc, target: &SimplicialComplexDesc) -> Result<(), ChainError> {
        for s in source.all_simplices() {
            match self.image_set(s) {
                None => return Err(ChainError::MapUndefined(s.clone())),
                Some(img) if !target.contains(&img) => {
                    return Err(ChainError::MapNotSimplicial { simplex: s.clone(), image: img })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMapDesc) -> Option<SimplicialMapDesc> {
        let vm = self.vertex_map.iter().map(|(&a, &b)| other.vertex(b).map(|c| (a, c))).collect::<Option<_>>()?;
        Some(SimplicialMapDesc { vertex_map: vm })
    }
}

fn permutation_sign(v: &[Vertex]) -> i64 {
    let mut inversions = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_counts() {
        let tri = SimplicialComplexDesc::from_simplices([[0, 1, 2]]).unwrap();
        assert_eq!((tri.count(0), tri.count(1), tri.count(2)), (3, 3, 1));
        assert_eq!(tri.euler_characteristic(), 1);
        assert_eq!(tri.maximal_simplices(), vec![vec![0, 1, 2]]);
        assert!(SimplicialComplexDesc::from_simplices([[0, 0]]).is_err());
    }

    #[test]
    fn components_of_two_intervals() {
        let c = SimplicialComplexDesc::from_simplices([vec![0, 1], vec![2, 3], vec![3, 4]]).unwrap();
        let comps = c.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[1].vertices(), vec![2, 3, 4]);
    }

    #[test]
    fn subdivision_counts() {
        let tri = SimplicialComplexDesc::from_simplices([[0, 1, 2]]).unwrap();
        let (sd, labels) = tri.barycentric_subdivision();
        assert_eq!(labels.len(), 7);
        assert_eq!((sd.count(0), sd.count(1), sd.count(2)), (7, 12, 6));
        assert_eq!(sd.euler_characteristic(), 1);
    }

    #[test]
    fn map_images_and_signs() {
        let m = SimplicialMapDesc::new([(0, 5), (1, 3), (2, 3)].into_iter().collect());
        assert_eq!(m.image(&[0, 1]), Some(SimplexImage::Simplex { image: vec![3, 5], sign: -1 }));
        assert_eq!(m.image(&[1, 2]), Some(SimplexImage::Degenerate));
        assert_eq!(m.image(&[7]), None);
    }
}
