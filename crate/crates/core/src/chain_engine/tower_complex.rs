use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use super::cohomology::{slices_from_strands, CohomologyTable, Strand, TowerComplexSlice};
use super::complex::SimplexImage;
use super::local_system::{twisted_coboundary, LocalSystem};
use super::ChainError;
use crate::group_data::{borel_fiber, rep_ring, Character, CompactGroupDesc, GroupInclusion};
use crate::linalg::{Matrix, Rational, Subspace};
use crate::strat_model::{Monodromy, ResolutionTower};

/// Largest representation window produced by closing a box under monodromy.
const MAX_WINDOW: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientKind {
    Borel,
    Rep,
}

/// Flat coefficient systems on every node of a tower, with the restriction
/// maps along its edges. Piece `k` of every node has degree `degrees[k]`.
#[derive(Clone, Debug)]
pub struct TowerCoefficients {
    pub kind: CoefficientKind,
    pub degrees: Vec<u32>,
    pub systems: Vec<LocalSystem>,
    /// Per edge and piece: fiber of the target node -> fiber of the source node.
    pub restrictions: Vec<Vec<Matrix>>,
    /// Per node, the basis characters of the fiber (representation coefficients only).
    pub windows: Vec<Vec<Character>>,
}

impl TowerCoefficients {
    /// Borel coefficients in total degrees `0..=max_degree`.
    pub fn borel(tower: &ResolutionTower, max_degree: usize) -> Result<TowerCoefficients, ChainError> {
        let fibers: Vec<_> = tower.nodes.iter().map(|n| borel_fiber(&n.group)).collect();
        let degrees: Vec<u32> =
            (0..=max_degree as u32).filter(|&d| fibers.iter().any(|f| f.dim(d) > 0)).collect();
        let systems =
            tower.nodes.iter().map(|n| borel_system(&n.group, &n.monodromy, &degrees)).collect::<Result<Vec<_>, _>>()?;
        let mut restrictions = Vec::with_capacity(tower.edges.len());
        for e in &tower.edges {
            let map = e.inclusion.restrict_poly()?;
            restrictions.push(degrees.iter().map(|&d| map.matrix(d)).collect());
        }
        let out = TowerCoefficients { kind: CoefficientKind::Borel, degrees, systems, restrictions, windows: Vec::new() };
        out.check_compatible(tower)?;
        Ok(out)
    }

    /// Representation-ring coefficients on the character box `[lo, hi]^r`,
    /// enlarged at each node by the restrictions of the windows it fibers
    /// over and closed under monodromy.
    pub fn rep(tower: &ResolutionTower, lo: i64, hi: i64) -> Result<TowerCoefficients, ChainError> {
        if lo > hi {
            return Err(ChainError::EmptyWindow);
        }
        let n = tower.nodes.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(tower.nodes[i].depth));
        let mut windows: Vec<Option<BTreeSet<Character>>> = vec![None; n];
        for &i in &order {
            let node = &tower.nodes[i];
            let ring = rep_ring(&node.group);
            let mut w: BTreeSet<Character> = ring.window(lo, hi).into_iter().collect();
            for (_, e) in tower.edges_from(i) {
                let target = windows[e.target].as_ref().ok_or_else(|| {
                    ChainError::Inconsistent(format!("edge `{}` points to a node of no greater depth", e.id))
                })?;
                let r = e.inclusion.restrict_rep()?;
                for c in target {
                    w.extend(r.apply(c)?.terms().map(|(c, _)| c.clone()));
                }
            }
            windows[i] = Some(close_window(&node.group, &node.monodromy, w)?);
        }
        let windows: Vec<Vec<Character>> = windows.into_iter().map(|w| w.unwrap_or_default().into_iter().collect()).collect();
        let index: Vec<BTreeMap<&Character, usize>> =
            windows.iter().map(|w| w.iter().enumerate().map(|(i, c)| (c, i)).collect()).collect();

        let systems = tower
            .nodes
            .iter()
            .zip(&windows)
            .map(|(node, w)| rep_system(&node.group, &node.monodromy, w))
            .collect::<Result<Vec<_>, _>>()?;
        let mut restrictions = Vec::with_capacity(tower.edges.len());
        for e in &tower.edges {
            let r = e.inclusion.restrict_rep()?;
            restrictions.push(vec![character_matrix(&r, &windows[e.target], &index[e.source])?]);
        }
        let out = TowerCoefficients { kind: CoefficientKind::Rep, degrees: vec![0], systems, restrictions, windows };
        out.check_compatible(tower)?;
        Ok(out)
    }

    fn dim(&self, node: usize, k: usize) -> usize {
        self.systems[node].pieces()[k].1
    }

    /// Restriction maps must intertwine the transports of source and target.
    fn check_compatible(&self, tower: &ResolutionTower) -> Result<(), ChainError> {
        for (ei, e) in tower.edges.iter().enumerate() {
            let (ls, lt) = (&self.systems[e.source], &self.systems[e.target]);
            for s in e.hypersurface.simplices(1) {
                let (a, b) = (s[0], s[1]);
                let (fa, fb) = (e.map.vertex(a).unwrap(), e.map.vertex(b).unwrap());
                for (k, r) in self.restrictions[ei].iter().enumerate() {
                    if r.mul(&lt.transport(k, fa, fb)) != ls.transport(k, a, b).mul(r) {
                        return Err(ChainError::Inconsistent(format!(
                            "restriction along `{}` does not commute with monodromy on {s:?}",
                            e.id
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Borel system of a node: pieces of the given degrees, transported by the
/// action of the monodromy on invariant polynomials.
pub fn borel_system(group: &CompactGroupDesc, monodromy: &Monodromy, degrees: &[u32]) -> Result<LocalSystem, ChainError> {
    let fiber = borel_fiber(group);
    let mut l = LocalSystem::constant(degrees.iter().map(|&d| (d, fiber.dim(d))).collect());
    for (&(a, b), m) in monodromy.edges() {
        let map = GroupInclusion::abelian(group.clone(), group.clone(), m.clone()).restrict_poly()?;
        l.set_edge(a, b, degrees.iter().map(|&d| map.matrix(d)).collect())?;
    }
    Ok(l)
}

/// Representation system on a character window closed under monodromy.
pub fn rep_system(group: &CompactGroupDesc, monodromy: &Monodromy, window: &[Character]) -> Result<LocalSystem, ChainError> {
    let index: BTreeMap<&Character, usize> = window.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut l = LocalSystem::constant(vec![(0, window.len())]);
    for (&(a, b), m) in monodromy.edges() {
        let r = GroupInclusion::abelian(group.clone(), group.clone(), m.clone()).restrict_rep()?;
        l.set_edge(a, b, vec![character_matrix(&r, window, &index)?])?;
    }
    Ok(l)
}

/// Smallest superset of `w` closed under the monodromy action on characters.
pub fn close_window(group: &CompactGroupDesc, monodromy: &Monodromy, mut w: BTreeSet<Character>) -> Result<BTreeSet<Character>, ChainError> {
    let maps = monodromy
        .edges()
        .map(|(_, m)| GroupInclusion::abelian(group.clone(), group.clone(), m.clone()).restrict_rep())
        .collect::<Result<Vec<_>, _>>()?;
    let mut frontier: Vec<Character> = w.iter().cloned().collect();
    while let Some(c) = frontier.pop() {
        for m in &maps {
            for (img, _) in m.apply(&c)?.terms() {
                if w.insert(img.clone()) {
                    frontier.push(img.clone());
                }
            }
        }
        if w.len() > MAX_WINDOW {
            return Err(ChainError::Inconsistent("character window does not close under monodromy".into()));
        }
    }
    Ok(w)
}

/// Matrix of a restriction of representation rings between character
/// windows: column `j` holds the image of `from[j]`.
fn character_matrix(
    r: &crate::group_data::RepMap,
    from: &[Character],
    to: &BTreeMap<&Character, usize>,
) -> Result<Matrix, ChainError> {
    let mut m = Matrix::zeros(to.len(), from.len());
    for (j, c) in from.iter().enumerate() {
        for (img, n) in r.apply(c)?.terms() {
            let i = *to.get(img).ok_or_else(|| ChainError::Inconsistent(format!("character {img:?} outside the window")))?;
            m.add_at(i, j, &Rational::from_integer(n.into()));
        }
    }
    Ok(m)
}

/// Ambient data of one coefficient piece: cochains of every node in each
/// form degree, stacked node by node.
struct AmbientStrand {
    coeff_degree: u32,
    differentials: Vec<Matrix>,
    offsets: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

fn top_degree(tower: &ResolutionTower) -> usize {
    tower.nodes.iter().filter_map(|n| n.complex.dim()).max().map_or(0, |d| d + 1)
}

fn ambient_strand(tower: &ResolutionTower, coeff: &TowerCoefficients, k: usize) -> AmbientStrand {
    let top = top_degree(tower);
    let mut offsets = vec![Vec::with_capacity(tower.nodes.len()); top + 1];
    let mut dims = vec![0; top + 1];
    for (p, offs) in offsets.iter_mut().enumerate() {
        for (i, node) in tower.nodes.iter().enumerate() {
            offs.push(dims[p]);
            dims[p] += node.complex.count(p) * coeff.dim(i, k);
        }
    }
    let differentials = (0..top)
        .map(|p| {
            let mut d = Matrix::zeros(dims[p + 1], dims[p]);
            for (i, node) in tower.nodes.iter().enumerate() {
                let block = twisted_coboundary(&node.complex, &coeff.systems[i], k, p);
                for r in 0..block.rows() {
                    for (c, x) in block.row(r).iter().enumerate() {
                        if !x.is_zero() {
                            d.set(offsets[p + 1][i] + r, offsets[p][i] + c, x.clone());
                        }
                    }
                }
            }
            d
        })
        .collect();
    AmbientStrand { coeff_degree: coeff.degrees[k], differentials, offsets, dims }
}

/// Constraint rows in form degree `p`: `c_s(σ) = r(ψ^* c_t)(σ)` along every
/// edge and `c_n = 0` on the nodes in `zero`.
fn constraints(
    tower: &ResolutionTower,
    coeff: &TowerCoefficients,
    k: usize,
    a: &AmbientStrand,
    p: usize,
    zero: &BTreeSet<usize>,
) -> Matrix {
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    for (ei, e) in tower.edges.iter().enumerate() {
        let (s, t) = (e.source, e.target);
        let (ds, dt) = (coeff.dim(s, k), coeff.dim(t, k));
        if ds == 0 {
            continue;
        }
        let r = &coeff.restrictions[ei][k];
        let (src, tgt) = (&tower.nodes[s].complex, &tower.nodes[t].complex);
        for sigma in e.hypersurface.simplices(p) {
            let si = src.index_of(sigma).expect("hypersurface lies in the source complex");
            let pulled = match e.map.image(sigma) {
                Some(SimplexImage::Simplex { image, sign }) => {
                    let ti = tgt.index_of(&image).expect("validated map");
                    let g = coeff.systems[t].transport(k, e.map.vertex(sigma[0]).unwrap(), image[0]);
                    Some((ti, r.mul(&g).scale(&Rational::from_integer(sign.into()))))
                }
                _ => None,
            };
            for i in 0..ds {
                let mut row = vec![(a.offsets[p][s] + si * ds + i, Rational::one())];
                if let Some((ti, m)) = &pulled {
                    for j in 0..dt {
                        if !m.get(i, j).is_zero() {
                            row.push((a.offsets[p][t] + ti * dt + j, -m.get(i, j).clone()));
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    for &n in zero {
        let len = tower.nodes[n].complex.count(p) * coeff.dim(n, k);
        for i in 0..len {
            rows.push(vec![(a.offsets[p][n] + i, Rational::one())]);
        }
    }
    let mut m = Matrix::zeros(rows.len(), a.dims[p]);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row {
            m.add_at(i, j, &x);
        }
    }
    m
}

fn constrained_spaces(
    tower: &ResolutionTower,
    coeff: &TowerCoefficients,
    k: usize,
    a: &AmbientStrand,
    zero: &BTreeSet<usize>,
) -> Vec<Subspace> {
    (0..a.dims.len())
        .map(|p| {
            let c = constraints(tower, coeff, k, a, p, zero);
            if c.rows() == 0 {
                Subspace::full(a.dims[p])
            } else {
                c.kernel()
            }
        })
        .collect()
}

fn check_coefficients(tower: &ResolutionTower, coeff: &TowerCoefficients) -> Result<(), ChainError> {
    if coeff.systems.len() != tower.nodes.len() || coeff.restrictions.len() != tower.edges.len() {
        return Err(ChainError::Inconsistent("coefficients do not match the tower".into()));
    }
    if coeff.degrees.is_empty() {
        return Err(ChainError::EmptyWindow);
    }
    for (i, node) in tower.nodes.iter().enumerate() {
        let degrees: Vec<u32> = coeff.systems[i].pieces().iter().map(|p| p.0).collect();
        if degrees != coeff.degrees {
            return Err(ChainError::Inconsistent(format!("coefficient degrees at `{}` differ", node.id)));
        }
        coeff.systems[i].validate(&node.complex)?;
    }
    for (ei, e) in tower.edges.iter().enumerate() {
        for (k, r) in coeff.restrictions[ei].iter().enumerate() {
            if r.rows() != coeff.dim(e.source, k) || r.cols() != coeff.dim(e.target, k) {
                return Err(ChainError::Inconsistent(format!("restriction along `{}` has the wrong shape", e.id)));
            }
        }
        e.map.validate(&e.hypersurface, &tower.nodes[e.target].complex)?;
        if !e.hypersurface.is_subcomplex_of(&tower.nodes[e.source].complex) {
            return Err(ChainError::Inconsistent(format!("hypersurface `{}` is not in its source", e.id)));
        }
    }
    Ok(())
}

fn build(
    tower: &ResolutionTower,
    coeff: &TowerCoefficients,
    max_degree: usize,
    zero: &BTreeSet<usize>,
) -> Result<Vec<TowerComplexSlice>, ChainError> {
    check_coefficients(tower, coeff)?;
    let mut strands = Vec::new();
    for k in 0..coeff.degrees.len() {
        if coeff.degrees[k] as usize > max_degree {
            continue;
        }
        let a = ambient_strand(tower, coeff, k);
        let mut spaces = constrained_spaces(tower, coeff, k, &a, zero);
        spaces.truncate(a.differentials.len());
        strands.push(Strand::restrict(a.coeff_degree, spaces, &a.differentials)?);
    }
    Ok(slices_from_strands(strands, max_degree))
}

/// Node cochains subject to `c_source|H = r(ψ_H^* c_target)` for every edge.
pub fn equalizer_complex(
    tower: &ResolutionTower,
    coeff: &TowerCoefficients,
    max_degree: usize,
) -> Result<Vec<TowerComplexSlice>, ChainError> {
    build(tower, coeff, max_degree, &BTreeSet::new())
}

/// The equalizer complex with the summands of the nodes in `b` set to zero.
pub fn relative_complex(
    tower: &ResolutionTower,
    coeff: &TowerCoefficients,
    b: &BTreeSet<usize>,
    max_degree: usize,
) -> Result<Vec<TowerComplexSlice>, ChainError> {
    if !tower.is_closed_below(b) {
        return Err(ChainError::NotClosedBelow(describe(tower, b)));
    }
    build(tower, coeff, max_degree, b)
}

fn describe(tower: &ResolutionTower, b: &BTreeSet<usize>) -> String {
    let ids: Vec<&str> = b.iter().filter_map(|&n| tower.nodes.get(n).map(|n| n.id.as_str())).collect();
    format!("{{{}}}", ids.join(", "))
}

/// One row of the long exact sequence `H(A) -> H(S) -> H(S/A) -> H(A)[1]`
/// for `A = rel(b')`, `S = rel(b)`, in a single total degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesSlot {
    pub degree: usize,
    pub sub: usize,
    pub whole: usize,
    pub quotient: usize,
    pub rank_inclusion: usize,
    pub rank_projection: usize,
    pub rank_connecting: usize,
    /// Failures of exactness at `H(A)`, `H(S)` and `H(S/A)`.
    pub defects: [i64; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub added: Vec<String>,
    pub slots: Vec<LesSlot>,
}

impl LesReport {
    pub fn is_exact(&self) -> bool {
        self.slots.iter().all(|s| s.defects == [0, 0, 0])
    }
}

fn span_dim(parts: &[&Matrix], rows: usize) -> usize {
    let mut m = Matrix::zeros(rows, 0);
    for p in parts {
        m = m.hstack(p);
    }
    m.rank()
}

/// Per-form-degree ranks of one strand of the sequence.
#[derive(Default, Clone)]
struct StrandLes {
    sub: usize,
    whole: usize,
    quotient: usize,
    inclusion: usize,
    projection: usize,
    connecting: usize,
}

fn strand_les(a: &AmbientStrand, s: &[Subspace], sub: &[Subspace]) -> Vec<StrandLes> {
    let top = a.differentials.len();
    let d = |p: usize| -> Option<&Matrix> { a.differentials.get(p) };
    let image = |spaces: &[Subspace], p: usize| -> Matrix {
        match p.checked_sub(1) {
            Some(q) => d(q).unwrap().mul(&spaces[q].basis),
            None => Matrix::zeros(a.dims[0], 0),
        }
    };
    let cycles = |spaces: &[Subspace], p: usize| -> Matrix {
        match d(p) {
            Some(dp) => {
                let e = &spaces[p].basis;
                e.mul(&dp.mul(e).kernel().basis)
            }
            None => spaces[p].basis.clone(),
        }
    };
    (0..top)
        .map(|p| {
            let n = a.dims[p];
            let (zs, bs) = (cycles(s, p), image(s, p));
            let (za, ba) = (cycles(sub, p), image(sub, p));
            let sub_p = &sub[p].basis;
            let dim_zs = zs.rank();
            let dim_bs = bs.rank();
            let dim_za = za.rank();
            let dim_ba = ba.rank();
            // relative cycles of S/A: x in S with dx in A
            let bs_plus_a = span_dim(&[&bs, sub_p], n);
            let quotient_cycles = match d(p) {
                Some(dp) => {
                    let e = &s[p].basis;
                    let de = dp.mul(e);
                    let next = &sub[p + 1].basis;
                    // solve de·x ∈ span(next): kernel of [de | -next] projected to x
                    let k = de.hstack(&next.scale(&-Rational::one())).kernel().basis;
                    let x = k.select_rows(&(0..e.cols()).collect::<Vec<_>>());
                    e.mul(&x)
                }
                None => s[p].basis.clone(),
            };
            let zq_plus_a = span_dim(&[&quotient_cycles, sub_p], n);
            let connecting = match d(p) {
                Some(dp) => {
                    let ds = dp.mul(&s[p].basis);
                    let next = &sub[p + 1].basis;
                    let rows = a.dims[p + 1];
                    let cap = ds.rank() + next.rank() - span_dim(&[&ds, next], rows);
                    cap - dp.mul(sub_p).rank()
                }
                None => 0,
            };
            StrandLes {
                sub: dim_za - dim_ba,
                whole: dim_zs - dim_bs,
                quotient: zq_plus_a - bs_plus_a,
                inclusion: span_dim(&[&za, &bs], n) - dim_bs,
                projection: span_dim(&[&zs, sub_p], n) - bs_plus_a,
                connecting,
            }
        })
        .collect()
}

/// Rank bookkeeping for the sequence of the pair `rel(b_large) ⊂ rel(b_small)`.
pub fn les_check(
    tower: &ResolutionTower,
    coeff: &TowerCoefficients,
    b_small: &BTreeSet<usize>,
    b_large: &BTreeSet<usize>,
    max_degree: usize,
) -> Result<LesReport, ChainError> {
    if !b_small.is_subset(b_large) {
        return Err(ChainError::LesPrecondition("the smaller set must be contained in the larger".into()));
    }
    if b_large.len() > b_small.len() + 1 {
        return Err(ChainError::LesPrecondition("the sets differ by more than one class".into()));
    }
    for b in [b_small, b_large] {
        if !tower.is_closed_below(b) {
            return Err(ChainError::NotClosedBelow(describe(tower, b)));
        }
    }
    check_coefficients(tower, coeff)?;
    let mut slots: Vec<StrandLes> = vec![StrandLes::default(); max_degree + 2];
    for k in 0..coeff.degrees.len() {
        let q = coeff.degrees[k] as usize;
        if q > max_degree + 1 {
            continue;
        }
        let a = ambient_strand(tower, coeff, k);
        let s = constrained_spaces(tower, coeff, k, &a, b_small);
        let sub = constrained_spaces(tower, coeff, k, &a, b_large);
        for (p, r) in strand_les(&a, &s, &sub).into_iter().enumerate() {
            let n = p + q;
            if n > max_degree + 1 {
                continue;
            }
            let slot = &mut slots[n];
            slot.sub += r.sub;
            slot.whole += r.whole;
            slot.quotient += r.quotient;
            slot.inclusion += r.inclusion;
            slot.projection += r.projection;
            slot.connecting += r.connecting;
        }
    }
    let added: Vec<String> = b_large.difference(b_small).map(|&n| tower.nodes[n].id.clone()).collect();
    let slots = (0..=max_degree)
        .map(|n| {
            let s = &slots[n];
            let prev_connecting = n.checked_sub(1).map_or(0, |m| slots[m].connecting);
            let at_sub = s.sub as i64 - prev_connecting as i64 - s.inclusion as i64;
            let at_whole = s.whole as i64 - s.inclusion as i64 - s.projection as i64;
            let at_quotient = s.quotient as i64 - s.projection as i64 - s.connecting as i64;
            LesSlot {
                degree: n,
                sub: s.sub,
                whole: s.whole,
                quotient: s.quotient,
                rank_inclusion: s.inclusion,
                rank_projection: s.projection,
                rank_connecting: s.connecting,
                defects: [at_sub, at_whole, at_quotient],
            }
        })
        .collect();
    Ok(LesReport { added, slots })
}

/// Cohomology of the equalizer complex in total degrees `0..=max_degree`.
pub fn tower_cohomology(
    tower: &ResolutionTower,
    coeff: &TowerCoefficients,
    max_degree: usize,
) -> Result<CohomologyTable, ChainError> {
    super::cohomology(&equalizer_complex(tower, coeff, max_degree)?)
}

/// A basis of the closed form-degree-0 cochains of the equalizer complex in
/// piece `k`, each split into its node components.
pub fn zero_cocycles(tower: &ResolutionTower, coeff: &TowerCoefficients, k: usize) -> Result<Vec<Vec<Vec<Rational>>>, ChainError> {
    check_coefficients(tower, coeff)?;
    let a = ambient_strand(tower, coeff, k);
    let space = constrained_spaces(tower, coeff, k, &a, &BTreeSet::new()).swap_remove(0);
    let closed = match a.differentials.first() {
        Some(d) => space.basis.mul(&d.mul(&space.basis).kernel().basis),
        None => space.basis.clone(),
    };
    Ok((0..closed.cols())
        .map(|j| {
            let col = closed.column(j);
            (0..tower.nodes.len())
                .map(|n| {
                    let len = tower.nodes[n].complex.count(0) * coeff.dim(n, k);
                    col[a.offsets[0][n]..a.offsets[0][n] + len].to_vec()
                })
                .collect()
        })
        .collect())
}

/// Number of violated equalizer constraints for a cochain given as a vector
/// per node in form degree `p`, piece `k`.
pub fn constraint_defect(
    tower: &ResolutionTower,
    coeff: &TowerCoefficients,
    k: usize,
    p: usize,
    values: &[Vec<Rational>],
) -> usize {
    let a = ambient_strand(tower, coeff, k);
    let mut v = Vec::with_capacity(a.dims[p]);
    for x in values {
        v.extend(x.iter().cloned());
    }
    let c = constraints(tower, coeff, k, &a, p, &BTreeSet::new());
    c.apply(&v).iter().filter(|x| !x.is_zero()).count()
}

/// Coboundary of a node-wise cochain, for closedness checks.
pub fn tower_coboundary(
    tower: &ResolutionTower,
    coeff: &TowerCoefficients,
    k: usize,
    p: usize,
    values: &[Vec<Rational>],
) -> Vec<Rational> {
    let a = ambient_strand(tower, coeff, k);
    let v: Vec<Rational> = values.iter().flatten().cloned().collect();
    match a.differentials.get(p) {
        Some(d) => d.apply(&v),
        None => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strat_model::canonical_resolution;
    use crate::strat_model::fixtures::{rotation_sphere, torus_on_s2xs2};

    fn sphere() -> ResolutionTower {
        canonical_resolution(&rotation_sphere()).unwrap().0
    }

    #[test]
    fn sphere_borel_table() {
        let t = sphere();
        let c = TowerCoefficients::borel(&t, 8).unwrap();
        assert_eq!(tower_cohomology(&t, &c, 8).unwrap().ranks, vec![1, 0, 2, 0, 2, 0, 2, 0, 2]);
    }

    #[test]
    fn sphere_rep_window() {
        let t = sphere();
        let c = TowerCoefficients::rep(&t, -2, 2).unwrap();
        let h = tower_cohomology(&t, &c, 1).unwrap();
        assert_eq!((h.even(), h.odd()), (9, 0));
    }

    #[test]
    fn product_of_spheres() {
        let t = canonical_resolution(&torus_on_s2xs2()).unwrap().0;
        let c = TowerCoefficients::borel(&t, 6).unwrap();
        assert_eq!(tower_cohomology(&t, &c, 6).unwrap().ranks, vec![1, 0, 4, 0, 8, 0, 12]);
    }

    #[test]
    fn relative_to_all_poles() {
        let t = sphere();
        let c = TowerCoefficients::borel(&t, 4).unwrap();
        let all: BTreeSet<usize> = t.boundary_classes().into_iter().collect();
        // (interval, endpoints) with constant coefficients: only H^1
        let h = cohomology_of(&t, &c, &all, 4);
        assert_eq!(h, vec![0, 1, 0, 0, 0]);
        let one: BTreeSet<usize> = [1].into();
        assert_eq!(cohomology_of(&t, &c, &one, 4), vec![0, 0, 1, 0, 1]);
        assert!(matches!(relative_complex(&t, &c, &[0].into(), 4), Err(ChainError::NotClosedBelow(_))));
    }

    fn cohomology_of(t: &ResolutionTower, c: &TowerCoefficients, b: &BTreeSet<usize>, d: usize) -> Vec<usize> {
        crate::chain_engine::cohomology(&relative_complex(t, c, b, d).unwrap()).unwrap().ranks
    }

    #[test]
    fn les_on_sphere() {
        let t = sphere();
        let c = TowerCoefficients::borel(&t, 9).unwrap();
        let r = les_check(&t, &c, &BTreeSet::new(), &[1].into(), 8).unwrap();
        assert!(r.is_exact(), "{r:?}");
        assert_eq!(r.slots.iter().map(|s| s.quotient).collect::<Vec<_>>(), [1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let back = les_check(&t, &c, &[1].into(), &[1, 2].into(), 8).unwrap();
        assert!(back.is_exact());
        assert!(back.slots.iter().any(|s| s.rank_connecting > 0));
        let same = les_check(&t, &c, &[1].into(), &[1].into(), 8).unwrap();
        assert!(same.is_exact());
        assert!(les_check(&t, &c, &BTreeSet::new(), &[1, 2].into(), 8).is_err());
    }

    #[test]
    fn les_on_product_corner() {
        let t = canonical_resolution(&torus_on_s2xs2()).unwrap().0;
        let c = TowerCoefficients::borel(&t, 7).unwrap();
        let corner = t.node_index("fixed#0").unwrap();
        let r = les_check(&t, &c, &BTreeSet::new(), &[corner].into(), 6).unwrap();
        assert!(r.is_exact(), "{r:?}");
    }

    #[test]
    fn subdivision_invariance() {
        for t in [sphere(), canonical_resolution(&torus_on_s2xs2()).unwrap().0] {
            let c = TowerCoefficients::borel(&t, 4).unwrap();
            let sd = t.subdivide();
            let csd = TowerCoefficients::borel(&sd, 4).unwrap();
            assert_eq!(tower_cohomology(&t, &c, 4).unwrap(), tower_cohomology(&sd, &csd, 4).unwrap());
        }
    }

    #[test]
    fn single_node_is_plain_twisted_complex() {
        let mut t = sphere();
        t.edges.clear();
        t.nodes.truncate(1);
        let c = TowerCoefficients::borel(&t, 2).unwrap();
        assert_eq!(tower_cohomology(&t, &c, 2).unwrap().ranks, vec![1, 0, 0]);
    }
}
