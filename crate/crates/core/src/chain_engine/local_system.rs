use std::collections::BTreeMap;

use super::complex::{SimplicialComplexDesc, Vertex};
use super::ChainError;
use crate::linalg::Matrix;

/// Flat system of graded coefficient spaces over a simplicial complex.
///
/// The fiber is a list of graded pieces `(degree, dim)`. Transport along an
/// edge `a < b` is an invertible map `g_ab: V_b -> V_a` per piece; edges
/// without data carry the identity. Flatness means `g_ab g_bc = g_ac` on
/// every 2-simplex `a < b < c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystem {
    pieces: Vec<(u32, usize)>,
    transport: BTreeMap<(Vertex, Vertex), Vec<Matrix>>,
}

impl LocalSystem {
    pub fn constant(pieces: Vec<(u32, usize)>) -> Self {
        LocalSystem { pieces, transport: BTreeMap::new() }
    }

    pub fn pieces(&self) -> &[(u32, usize)] {
        &self.pieces
    }

    pub fn is_constant(&self) -> bool {
        self.transport.is_empty()
    }

    /// Sets `g_ab` (one matrix per piece). Orientation is normalized: data
    /// given for `a > b` is stored as the inverse on `(b, a)`.
    pub fn set_edge(&mut self, a: Vertex, b: Vertex, mats: Vec<Matrix>) -> Result<(), ChainError> {
        if a == b || mats.len() != self.pieces.len() {
            return Err(ChainError::BadTransport { edge: (a, b), reason: "wrong number of pieces".into() });
        }
        let mut forward = Vec::with_capacity(mats.len());
        let mut backward = Vec::with_capacity(mats.len());
        for (m, &(_, d)) in mats.into_iter().zip(&self.pieces) {
            if m.rows() != d || m.cols() != d {
                return Err(ChainError::BadTransport { edge: (a, b), reason: format!("expected a {d}x{d} matrix") });
            }
            let inv = m
                .inverse()
                .ok_or_else(|| ChainError::BadTransport { edge: (a, b), reason: "not invertible".into() })?;
            forward.push(m);
            backward.push(inv);
        }
        let (key, mats) = if a < b { ((a, b), forward) } else { ((b, a), backward) };
        if mats.iter().all(|m| *m == Matrix::identity(m.rows())) {
            self.transport.remove(&key);
        } else {
            self.transport.insert(key, mats);
        }
        Ok(())
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(Vertex, Vertex), &Vec<Matrix>)> {
        self.transport.iter()
    }

    /// `g_ab: V_b -> V_a` in piece `k`, for any two vertices of a common
    /// simplex.
    pub fn transport(&self, k: usize, a: Vertex, b: Vertex) -> Matrix {
        let d = self.pieces[k].1;
        if a == b {
            return Matrix::identity(d);
        }
        let (lo, hi) = (a.min(b), a.max(b));
        match self.transport.get(&(lo, hi)) {
            None => Matrix::identity(d),
            Some(m) if a < b => m[k].clone(),
            Some(m) => m[k].inverse().expect("stored transports are invertible"),
        }
    }

    pub fn validate(&self, base: &SimplicialComplexDesc) -> Result<(), ChainError> {
        for &(a, b) in self.transport.keys() {
            if !base.contains(&[a, b]) {
                return Err(ChainError::BadTransport { edge: (a, b), reason: "not an edge of the base".into() });
            }
        }
        for s in base.simplices(2) {
            let (a, b, c) = (s[0], s[1], s[2]);
            for k in 0..self.pieces.len() {
                if self.transport(k, a, b).mul(&self.transport(k, b, c)) != self.transport(k, a, c) {
                    return Err(ChainError::NotFlat(s.clone()));
                }
            }
        }
        Ok(())
    }

    /// Transport data pulled back along a vertex relabeling `f` of a complex
    /// on which the system is indexed by `f(v)` (used for subdivisions).
    pub fn pull_back(&self, target: &SimplicialComplexDesc, f: impl Fn(Vertex) -> Vertex) -> LocalSystem {
        let mut out = LocalSystem::constant(self.pieces.clone());
        for e in target.simplices(1) {
            let (a, b) = (f(e[0]), f(e[1]));
            if a == b {
                continue;
            }
            let mats: Vec<Matrix> = (0..self.pieces.len()).map(|k| self.transport(k, a, b)).collect();
            out.set_edge(e[0], e[1], mats).expect("transport is invertible");
        }
        out
    }
}

/// Twisted coboundary `C^p(X; V) -> C^{p+1}(X; V)` in piece `k`.
///
/// A cochain value on `[v0..vp]` lives in the fiber at `v0`; then
/// `(dc)[v0..v(p+1)] = g_{v0 v1} c[v1..] + sum_{i>=1} (-1)^i c[..^vi..]`.
/// Rows and columns are indexed by `simplex * dim + fiber coordinate`.
pub fn twisted_coboundary(x: &SimplicialComplexDesc, l: &LocalSystem, k: usize, p: usize) -> Matrix {
    let d = l.pieces[k].1;
    let src = x.simplices(p);
    let dst = x.simplices(p + 1);
    let mut m = Matrix::zeros(dst.len() * d, src.len() * d);
    if d == 0 {
        return m;
    }
    let one = crate::linalg::rat(1);
    let minus = crate::linalg::rat(-1);
    for (r, s) in dst.iter().enumerate() {
        for i in 0..s.len() {
            let f = super::complex::face(s, i);
            let c = x.index_of(&f).expect("faces of simplices are simplices");
            if i == 0 {
                let g = l.transport(k, s[0], s[1]);
                for a in 0..d {
                    for b in 0..d {
                        let v = g.get(a, b);
                        if !num_traits::Zero::is_zero(v) {
                            m.add_at(r * d + a, c * d + b, v);
                        }
                    }
                }
            } else {
                let sign = if i % 2 == 0 { &one } else { &minus };
                for a in 0..d {
                    m.add_at(r * d + a, c * d + a, sign);
                }
            }
        }
    }
    m
}
