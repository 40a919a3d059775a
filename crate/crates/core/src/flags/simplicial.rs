use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// A simplex addressed by dimension and position within that dimension.
pub type SimplexId = (usize, usize);

/// A finite abstract simplicial complex. Simplices are sorted vertex-id
/// lists; orientation is the increasing vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: HashMap<Vec<usize>, SimplexId>,
}

impl SimplicialComplex {
    /// Builds the face closure of the given simplices. Vertex ids follow the
    /// order in which labels first appear.
    pub fn from_labeled<S: AsRef<str>>(simplices: &[Vec<S>]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut facets = Vec::new();
        for s in simplices {
            let mut f = Vec::new();
            for v in s {
                let v = v.as_ref().to_string();
                let next = labels.len();
                let id = *ids.entry(v.clone()).or_insert_with(|| {
                    labels.push(v);
                    next
                });
                f.push(id);
            }
            facets.push(f);
        }
        Self::from_facets(labels, &facets)
    }

    /// Face closure of `facets`, given as vertex ids into `labels`.
    pub fn from_facets(labels: Vec<String>, facets: &[Vec<usize>]) -> Result<Self> {
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            if s.is_empty() {
                return Err(Error::Simplicial("empty simplex".into()));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Simplicial(format!("repeated vertex in simplex {s:?}")));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= labels.len()) {
                return Err(Error::Simplicial(format!("unknown vertex id {v}")));
            }
            for face in nonempty_subsets(&s) {
                let k = face.len() - 1;
                if by_dim.len() <= k {
                    by_dim.resize_with(k + 1, BTreeSet::new);
                }
                by_dim[k].insert(face);
            }
        }
        // isolated labels with no simplex still count as vertices
        if by_dim.is_empty() && !labels.is_empty() {
            by_dim.push(BTreeSet::new());
        }
        for v in 0..labels.len() {
            by_dim[0].insert(vec![v]);
        }
        let simplices: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let mut index = HashMap::new();
        for (k, list) in simplices.iter().enumerate() {
            for (i, s) in list.iter().enumerate() {
                index.insert(s.clone(), (k, i));
            }
        }
        Ok(SimplicialComplex { labels, simplices, index })
    }

    /// Dimension, or `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_id(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, id: SimplexId) -> &[usize] {
        &self.simplices[id.0][id.1]
    }

    pub fn id_of(&self, vertices: &[usize]) -> Option<SimplexId> {
        self.index.get(vertices).copied()
    }

    /// Id of a simplex given by labels in any order.
    pub fn id_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Option<SimplexId> {
        let mut vs: Vec<usize> = labels.iter().map(|l| self.vertex_id(l.as_ref())).collect::<Option<_>>()?;
        vs.sort_unstable();
        self.id_of(&vs)
    }

    pub fn ids(&self) -> impl Iterator<Item = SimplexId> + '_ {
        self.simplices
            .iter()
            .enumerate()
            .flat_map(|(k, list)| (0..list.len()).map(move |i| (k, i)))
    }

    /// Codimension-one faces with their incidence signs `(-1)^i`, where `i`
    /// is the position of the removed vertex.
    pub fn boundary_faces(&self, id: SimplexId) -> Vec<(SimplexId, i64)> {
        let s = self.simplex(id);
        if s.len() < 2 {
            return Vec::new();
        }
        (0..s.len())
            .map(|i| {
                let mut face = s.to_vec();
                face.remove(i);
                let fid = self.id_of(&face).expect("face closure");
                (fid, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    pub fn describe(&self, id: SimplexId) -> String {
        self.simplex(id).iter().map(|&v| self.label(v)).collect::<Vec<_>>().join(" ")
    }

    /// The subcomplex as a standalone complex, with the map from its
    /// simplex ids back to ids here.
    pub fn restrict(&self, sub: &Subcomplex) -> (SimplicialComplex, Vec<Vec<usize>>) {
        let used: BTreeSet<usize> = self
            .ids()
            .filter(|&id| sub.contains(id))
            .flat_map(|id| self.simplex(id).to_vec())
            .collect();
        let relabel: HashMap<usize, usize> = used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let labels = used.iter().map(|&v| self.labels[v].clone()).collect();
        let facets: Vec<Vec<usize>> = self
            .ids()
            .filter(|&id| sub.contains(id))
            .map(|id| self.simplex(id).iter().map(|v| relabel[v]).collect())
            .collect();
        let restricted = SimplicialComplex::from_facets(labels, &facets).expect("subcomplex of a valid complex");
        let back = restricted
            .simplices
            .iter()
            .map(|list| {
                list.iter()
                    .map(|s| {
                        let orig: Vec<usize> = s.iter().map(|&v| used.iter().nth(v).copied().unwrap()).collect();
                        self.id_of(&orig).expect("restricted simplex exists").1
                    })
                    .collect()
            })
            .collect();
        (restricted, back)
    }

    /// Barycentric subdivision. Vertex `k` of the result is the barycenter
    /// of the `k`-th simplex in `(dim, index)` order; simplices are strict
    /// face chains. Also returns, for each vertex of the subdivision, the
    /// simplex it sits in.
    pub fn barycentric_subdivision(&self) -> (SimplicialComplex, Vec<SimplexId>) {
        let order: Vec<SimplexId> = self.ids().collect();
        let position: HashMap<SimplexId, usize> = order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let labels = order.iter().map(|&id| format!("[{}]", self.describe(id).replace(' ', ","))).collect();
        let mut chains: Vec<Vec<usize>> = Vec::new();
        for &id in &order {
            for chain in self.chains_ending_at(id) {
                chains.push(chain.iter().map(|c| position[c]).collect());
            }
        }
        let sd = SimplicialComplex::from_facets(labels, &chains).expect("chains are simplices");
        (sd, order)
    }

    fn chains_ending_at(&self, id: SimplexId) -> Vec<Vec<SimplexId>> {
        let s = self.simplex(id);
        let mut out = vec![vec![id]];
        for face in nonempty_subsets(s) {
            if face.len() == s.len() {
                continue;
            }
            let fid = self.id_of(&face).expect("face closure");
            for mut c in self.chains_ending_at_exact(fid) {
                c.push(id);
                out.push(c);
            }
        }
        out
    }

    // chains whose maximum is exactly `id`
    fn chains_ending_at_exact(&self, id: SimplexId) -> Vec<Vec<SimplexId>> {
        self.chains_ending_at(id)
    }

    /// `k`-skeleton as a subcomplex.
    pub fn skeleton(&self, k: usize) -> Subcomplex {
        Subcomplex::from_predicate(self, |id| id.0 <= k)
    }

    pub fn full(&self) -> Subcomplex {
        Subcomplex::from_predicate(self, |_| true)
    }

    pub fn empty(&self) -> Subcomplex {
        Subcomplex::from_predicate(self, |_| false)
    }
}

fn nonempty_subsets(s: &[usize]) -> Vec<Vec<usize>> {
    let n = s.len();
    (1u64..(1 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect())
        .collect()
}

/// A set of simplices of a fixed ambient complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subcomplex {
    members: Vec<Vec<bool>>,
}

impl Subcomplex {
    pub fn from_predicate(x: &SimplicialComplex, pred: impl Fn(SimplexId) -> bool) -> Self {
        let members = (0..x.simplices.len())
            .map(|k| (0..x.count(k)).map(|i| pred((k, i))).collect())
            .collect();
        Subcomplex { members }
    }

    /// Face closure of the listed simplices.
    pub fn closure_of(x: &SimplicialComplex, simplices: &[SimplexId]) -> Self {
        let mut sub = Self::from_predicate(x, |_| false);
        for &id in simplices {
            for face in nonempty_subsets(x.simplex(id)) {
                let fid = x.id_of(&face).expect("face closure");
                sub.members[fid.0][fid.1] = true;
            }
        }
        sub
    }

    pub fn contains(&self, id: SimplexId) -> bool {
        self.members.get(id.0).and_then(|m| m.get(id.1)).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.iter().flatten().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &Subcomplex) -> bool {
        self.members
            .iter()
            .flatten()
            .zip(other.members.iter().flatten())
            .all(|(&a, &b)| !a || b)
    }

    /// Face-closed within `x`.
    pub fn is_closed(&self, x: &SimplicialComplex) -> bool {
        x.ids()
            .filter(|&id| self.contains(id))
            .all(|id| x.boundary_faces(id).iter().all(|(f, _)| self.contains(*f)))
    }

    pub fn fits(&self, x: &SimplicialComplex) -> bool {
        self.members.len() == x.simplices.len()
            && self.members.iter().enumerate().all(|(k, m)| m.len() == x.count(k))
    }

    pub fn ids(&self) -> impl Iterator<Item = SimplexId> + '_ {
        self.members
            .iter()
            .enumerate()
            .flat_map(|(k, m)| m.iter().enumerate().filter(|(_, &b)| b).map(move |(i, _)| (k, i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_boundary() -> SimplicialComplex {
        SimplicialComplex::from_labeled(&[vec!["a", "b"], vec!["b", "c"], vec!["a", "c"]]).unwrap()
    }

    #[test]
    fn closure_and_counts() {
        let disk = SimplicialComplex::from_labeled(&[vec!["a", "b", "c"]]).unwrap();
        assert_eq!((disk.count(0), disk.count(1), disk.count(2)), (3, 3, 1));
        assert_eq!(disk.dim(), Some(2));
        let t = triangle_boundary();
        assert_eq!(t.dim(), Some(1));
        assert!(t.id_of_labels(&["c", "a"]).is_some());
        assert!(SimplicialComplex::from_labeled(&[vec!["a", "a"]]).is_err());
    }

    #[test]
    fn subdivision_counts() {
        let (sd, order) = triangle_boundary().barycentric_subdivision();
        assert_eq!(order.len(), 6);
        assert_eq!((sd.count(0), sd.count(1)), (6, 6));
        let (sd2, _) = SimplicialComplex::from_labeled(&[vec!["a", "b", "c"]]).unwrap().barycentric_subdivision();
        assert_eq!((sd2.count(0), sd2.count(1), sd2.count(2)), (7, 12, 6));
    }

    #[test]
    fn subcomplexes() {
        let t = triangle_boundary();
        let v = Subcomplex::closure_of(&t, &[t.id_of_labels(&["a"]).unwrap()]);
        assert!(v.is_closed(&t));
        assert_eq!(v.len(), 1);
        assert!(v.is_subset(&t.full()));
        let edge_only = Subcomplex::from_predicate(&t, |id| id.0 == 1 && id.1 == 0);
        assert!(!edge_only.is_closed(&t));
        let (r, back) = t.restrict(&t.skeleton(0));
        assert_eq!(r.count(0), 3);
        assert_eq!(r.count(1), 0);
        assert_eq!(back[0].len(), 3);
    }
}
