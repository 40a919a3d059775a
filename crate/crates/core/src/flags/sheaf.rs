use std::collections::HashMap;

use super::simplicial::{SimplexId, SimplicialComplex};
use crate::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Stalk ranks per simplex and restriction matrices `F(τ) → F(σ)` for each
/// codimension-one face `τ ⊂ σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularSheaf {
    stalks: HashMap<SimplexId, usize>,
    restrictions: HashMap<(SimplexId, SimplexId), IntMatrix>,
}

impl CellularSheaf {
    /// Constant `Z` sheaf.
    pub fn constant(x: &SimplicialComplex) -> Self {
        let stalks = x.ids().map(|id| (id, 1)).collect();
        let mut restrictions = HashMap::new();
        for id in x.ids() {
            for (face, _) in x.boundary_faces(id) {
                restrictions.insert((face, id), IntMatrix::identity(1));
            }
        }
        CellularSheaf { stalks, restrictions }
    }

    pub fn zero(x: &SimplicialComplex) -> Self {
        let stalks = x.ids().map(|id| (id, 0)).collect();
        let mut restrictions = HashMap::new();
        for id in x.ids() {
            for (face, _) in x.boundary_faces(id) {
                restrictions.insert((face, id), IntMatrix::zeros(0, 0));
            }
        }
        CellularSheaf { stalks, restrictions }
    }

    /// Assembles and validates a sheaf. Every face incidence needs a matrix
    /// of shape `stalk(σ) × stalk(τ)`.
    pub fn new(
        x: &SimplicialComplex,
        stalks: HashMap<SimplexId, usize>,
        restrictions: HashMap<(SimplexId, SimplexId), IntMatrix>,
    ) -> Result<Self> {
        let s = CellularSheaf { stalks, restrictions };
        s.validate(x)?;
        Ok(s)
    }

    pub fn stalk(&self, id: SimplexId) -> usize {
        self.stalks.get(&id).copied().unwrap_or(0)
    }

    pub fn restriction(&self, face: SimplexId, coface: SimplexId) -> Option<&IntMatrix> {
        self.restrictions.get(&(face, coface))
    }

    pub fn validate(&self, x: &SimplicialComplex) -> Result<()> {
        for id in x.ids() {
            for (face, _) in x.boundary_faces(id) {
                let m = self.restrictions.get(&(face, id)).ok_or_else(|| {
                    Error::Sheaf(format!("missing restriction {} -> {}", x.describe(face), x.describe(id)))
                })?;
                if m.rows() != self.stalk(id) || m.cols() != self.stalk(face) {
                    return Err(Error::Sheaf(format!(
                        "restriction {} -> {} has shape {}x{}, expected {}x{}",
                        x.describe(face),
                        x.describe(id),
                        m.rows(),
                        m.cols(),
                        self.stalk(id),
                        self.stalk(face)
                    )));
                }
            }
        }
        // both routes around every codimension-two face agree
        for id in x.ids() {
            let s = x.simplex(id);
            if s.len() < 3 {
                continue;
            }
            for i in 0..s.len() {
                for j in i + 1..s.len() {
                    let mut low = s.to_vec();
                    low.remove(j);
                    low.remove(i);
                    let low = x.id_of(&low).unwrap();
                    let mut mid_a = s.to_vec();
                    mid_a.remove(i);
                    let mut mid_b = s.to_vec();
                    mid_b.remove(j);
                    let (a, b) = (x.id_of(&mid_a).unwrap(), x.id_of(&mid_b).unwrap());
                    let via_a = &self.restrictions[&(a, id)] * &self.restrictions[&(low, a)];
                    let via_b = &self.restrictions[&(b, id)] * &self.restrictions[&(low, b)];
                    if via_a != via_b {
                        return Err(Error::Sheaf(format!(
                            "restrictions {} -> {} disagree",
                            x.describe(low),
                            x.describe(id)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Composite restriction `F(τ) → F(σ)` for any face `τ ⊆ σ`.
    pub fn restriction_between(&self, x: &SimplicialComplex, face: SimplexId, coface: SimplexId) -> IntMatrix {
        if face == coface {
            return IntMatrix::identity(self.stalk(face));
        }
        let s = x.simplex(coface);
        let t = x.simplex(face);
        let extra = s.iter().position(|v| !t.contains(v)).expect("proper face");
        let mut mid = s.to_vec();
        mid.remove(extra);
        let mid = x.id_of(&mid).expect("face closure");
        &self.restrictions[&(mid, coface)] * &self.restriction_between(x, face, mid)
    }

    /// Pullback to the barycentric subdivision: the stalk on a chain is the
    /// stalk of its largest simplex.
    pub fn subdivide(&self, x: &SimplicialComplex, sd: &SimplicialComplex, carrier: &[SimplexId]) -> Self {
        let top = |chain: &[usize]| carrier[*chain.last().unwrap()];
        let stalks = sd.ids().map(|id| (id, self.stalk(top(sd.simplex(id))))).collect();
        let mut restrictions = HashMap::new();
        for id in sd.ids() {
            for (face, _) in sd.boundary_faces(id) {
                let m = self.restriction_between(x, top(sd.simplex(face)), top(sd.simplex(id)));
                restrictions.insert((face, id), m);
            }
        }
        CellularSheaf { stalks, restrictions }
    }

    /// Restriction to a standalone subcomplex, given its id map.
    pub fn restrict(&self, sub: &SimplicialComplex, back: &[Vec<usize>]) -> Self {
        let up = |id: SimplexId| (id.0, back[id.0][id.1]);
        let stalks = sub.ids().map(|id| (id, self.stalk(up(id)))).collect();
        let mut restrictions = HashMap::new();
        for id in sub.ids() {
            for (face, _) in sub.boundary_faces(id) {
                restrictions.insert((face, id), self.restrictions[&(up(face), up(id))].clone());
            }
        }
        CellularSheaf { stalks, restrictions }
    }
}

/// Where each simplex's stalk sits inside the cochain groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainLayout {
    offsets: Vec<Vec<usize>>,
    ranks: Vec<usize>,
    stalks: Vec<Vec<usize>>,
}

impl CochainLayout {
    pub fn new(x: &SimplicialComplex, s: &CellularSheaf) -> Self {
        let dims = x.dim().map_or(0, |d| d + 1);
        let mut offsets = Vec::with_capacity(dims);
        let mut ranks = Vec::with_capacity(dims);
        let mut stalks = Vec::with_capacity(dims);
        for k in 0..dims {
            let mut off = Vec::with_capacity(x.count(k));
            let mut st = Vec::with_capacity(x.count(k));
            let mut total = 0;
            for i in 0..x.count(k) {
                off.push(total);
                let r = s.stalk((k, i));
                st.push(r);
                total += r;
            }
            offsets.push(off);
            ranks.push(total);
            stalks.push(st);
        }
        CochainLayout { offsets, ranks, stalks }
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    /// Coordinates of `σ`'s stalk in `C^{dim σ}`.
    pub fn range(&self, id: SimplexId) -> std::ops::Range<usize> {
        let o = self.offsets[id.0][id.1];
        o..o + self.stalks[id.0][id.1]
    }
}

/// Cellular sheaf cochains: `C^l = ⊕_{dim σ = l} F(σ)` with the signed
/// restriction differential. Degrees start at 0.
pub fn sheaf_cochains(x: &SimplicialComplex, s: &CellularSheaf) -> Result<CochainComplex> {
    s.validate(x)?;
    let layout = CochainLayout::new(x, s);
    let dims = x.dim().map_or(0, |d| d + 1);
    let ranks: Vec<usize> = (0..dims).map(|k| layout.rank(k)).collect();
    let mut differentials = Vec::new();
    for k in 0..dims.saturating_sub(1) {
        let mut d = IntMatrix::zeros(ranks[k + 1], ranks[k]);
        for i in 0..x.count(k + 1) {
            let sigma = (k + 1, i);
            let rows = layout.range(sigma);
            for (face, sign) in x.boundary_faces(sigma) {
                let cols = layout.range(face);
                let m = &s.restrictions[&(face, sigma)];
                for (a, r) in rows.clone().enumerate() {
                    for (b, c) in cols.clone().enumerate() {
                        let v = m.get(a, b) * sign;
                        let cur = d.get(r, c) + v;
                        d.set(r, c, cur);
                    }
                }
            }
        }
        differentials.push(d);
    }
    if dims == 0 {
        return Ok(CochainComplex::zero());
    }
    CochainComplex::new(0, ranks, differentials)
}

/// Unit vectors of the stalks on simplices satisfying `pred`, degree `k`.
pub(crate) fn stalk_basis(
    x: &SimplicialComplex,
    layout: &CochainLayout,
    k: usize,
    pred: impl Fn(SimplexId) -> bool,
) -> Vec<usize> {
    (0..x.count(k))
        .filter(|&i| pred((k, i)))
        .flat_map(|i| layout.range((k, i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbelianGroup;

    #[test]
    fn constant_sheaf_examples() {
        let point = SimplicialComplex::from_labeled(&[vec!["p"]]).unwrap();
        let c = sheaf_cochains(&point, &CellularSheaf::constant(&point)).unwrap();
        assert_eq!(c.cohomology(0).unwrap(), AbelianGroup::free(1));

        let circle = SimplicialComplex::from_labeled(&[vec!["a", "b"], vec!["b", "c"], vec!["a", "c"]]).unwrap();
        let c = sheaf_cochains(&circle, &CellularSheaf::constant(&circle)).unwrap();
        assert_eq!(c.ranks(), &[3, 3]);
        assert_eq!(c.cohomology(0).unwrap(), AbelianGroup::free(1));
        assert_eq!(c.cohomology(1).unwrap(), AbelianGroup::free(1));

        let z = sheaf_cochains(&circle, &CellularSheaf::zero(&circle)).unwrap();
        assert!(z.is_empty());
    }

    #[test]
    fn inconsistent_sheaf_rejected() {
        let disk = SimplicialComplex::from_labeled(&[vec!["a", "b", "c"]]).unwrap();
        let mut s = CellularSheaf::constant(&disk);
        let e = disk.id_of_labels(&["a", "b"]).unwrap();
        let v = disk.id_of_labels(&["a"]).unwrap();
        s.restrictions.insert((v, e), IntMatrix::from_rows(&[vec![2]]));
        assert!(s.validate(&disk).is_err());
        assert!(sheaf_cochains(&disk, &s).is_err());
    }

    #[test]
    fn subdivision_preserves_cohomology() {
        let disk = SimplicialComplex::from_labeled(&[vec!["a", "b", "c"]]).unwrap();
        let s = CellularSheaf::constant(&disk);
        let (sd, carrier) = disk.barycentric_subdivision();
        let s2 = s.subdivide(&disk, &sd, &carrier);
        let c = sheaf_cochains(&sd, &s2).unwrap();
        assert_eq!(c.cohomology(0).unwrap(), AbelianGroup::free(1));
        assert!(c.cohomology(1).unwrap().is_trivial());
        assert!(c.cohomology(2).unwrap().is_trivial());
    }
}
