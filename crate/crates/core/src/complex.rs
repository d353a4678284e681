//! Flag (clique) complexes of a graph, truncated at a dimension cap.
//!
//! Faces are strictly increasing vertex tuples. Cliques are enumerated by
//! ordered extension: a clique is only ever extended by a common neighbour
//! larger than its maximum vertex, which reaches every clique exactly once
//! and, visiting candidates in increasing order, yields each dimension's
//! face list already in lexicographic order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset;
use crate::graph::{Graph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexError {
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<Vertex>),
    #[error("vertices {0:?} are not strictly increasing")]
    NotCanonical(Vec<Vertex>),
    #[error("skeleton cap {cap} is below the required dimension {needed}")]
    CapTooSmall { cap: usize, needed: usize },
    #[error("clique size must be at least 1")]
    ZeroCliqueSize,
    #[error("dump is not the flag complex of its 1-skeleton: {0}")]
    NotFlag(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A simplex given by its strictly increasing vertex tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<Vertex>);

impl Face {
    pub fn new(vertices: Vec<Vertex>) -> Result<Face, ComplexError> {
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ComplexError::NotCanonical(vertices));
        }
        Ok(Face(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }
}

impl std::fmt::Display for Face {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All faces of one dimension, stored flat with stride `dim + 1` and sorted
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceList {
    dim: usize,
    flat: Vec<u32>,
}

impl FaceList {
    fn new(dim: usize) -> Self {
        FaceList { dim, flat: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.flat.len() / (self.dim + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> &[u32] {
        let w = self.dim + 1;
        &self.flat[i * w..(i + 1) * w]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, u32> {
        self.flat.chunks_exact(self.dim + 1)
    }

    /// Position of `face` in the list, by binary search.
    pub fn index_of(&self, face: &[u32]) -> Option<usize> {
        if face.len() != self.dim + 1 {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(face) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagSkeleton {
    graph: Graph,
    cap: usize,
    faces: Vec<FaceList>,
}

/// Depth-first ordered extension. `visit` sees each clique once, with the
/// common neighbourhood of the whole clique; it returns whether to extend.
fn for_each_clique<F>(g: &Graph, max_size: usize, mut visit: F)
where
    F: FnMut(&[u32], &[u64]) -> bool,
{
    if max_size == 0 || g.n() == 0 {
        return;
    }
    let words = g.words();
    // level l holds the candidates (greater than the max) and the full
    // common neighbourhood of the current clique of size l.
    let mut cand = vec![0u64; words * (max_size + 1)];
    let mut common = vec![0u64; words * (max_size + 1)];
    for v in 0..g.n() {
        bitset::set(&mut cand[..words], v);
    }
    common[..words].copy_from_slice(&cand[..words]);
    let mut clique: Vec<u32> = Vec::with_capacity(max_size);
    // Explicit stack of per-level cursors into the candidate set.
    let mut cursor = vec![0usize; max_size + 1];
    let mut level = 0usize;
    loop {
        let base = level * words;
        let next = bitset::next_one(&cand[base..base + words], cursor[level]);
        match next {
            Some(v) => {
                cursor[level] = v + 1;
                clique.push(v as u32);
                let nb = level + 1;
                let (lo, hi) = common.split_at_mut(nb * words);
                let dst = &mut hi[..words];
                dst.copy_from_slice(&lo[base..base + words]);
                bitset::and_assign(dst, g.row(v));
                let extend = visit(&clique, dst);
                if extend && nb < max_size {
                    let (lo, hi) = cand.split_at_mut(nb * words);
                    let dst = &mut hi[..words];
                    dst.copy_from_slice(&lo[base..base + words]);
                    bitset::and_assign(dst, g.row(v));
                    bitset::clear_through(dst, v);
                    cursor[nb] = v + 1;
                    level = nb;
                } else {
                    clique.pop();
                }
            }
            None => {
                if level == 0 {
                    return;
                }
                level -= 1;
                clique.pop();
            }
        }
    }
}

/// Number of `size`-cliques of `g` contained in no `(size + 1)`-clique.
pub fn count_maximal_cliques(g: &Graph, size: usize) -> Result<usize, ComplexError> {
    if size == 0 {
        return Err(ComplexError::ZeroCliqueSize);
    }
    let mut count = 0;
    for_each_clique(g, size, |clique, common| {
        if clique.len() == size {
            if bitset::is_empty(common) {
                count += 1;
            }
            false
        } else {
            true
        }
    });
    Ok(count)
}

impl FlagSkeleton {
    /// All cliques of `g` with at most `cap + 1` vertices.
    pub fn build(g: &Graph, cap: usize) -> FlagSkeleton {
        let mut faces: Vec<FaceList> = (0..=cap).map(FaceList::new).collect();
        for_each_clique(g, cap + 1, |clique, _| {
            faces[clique.len() - 1].flat.extend_from_slice(clique);
            true
        });
        FlagSkeleton {
            graph: g.clone(),
            cap,
            faces,
        }
    }

    /// The whole flag complex: the cap is the clique number minus one.
    pub fn full(g: &Graph) -> FlagSkeleton {
        let mut sk = FlagSkeleton::build(g, g.n().saturating_sub(1));
        while sk.cap > 0 && sk.faces[sk.cap].is_empty() {
            sk.faces.pop();
            sk.cap -= 1;
        }
        sk
    }

    /// The `cap`-skeleton of this complex.
    pub fn truncate(&self, cap: usize) -> Result<FlagSkeleton, ComplexError> {
        if cap > self.cap {
            return Err(ComplexError::CapTooSmall {
                cap: self.cap,
                needed: cap,
            });
        }
        Ok(FlagSkeleton {
            graph: self.graph.clone(),
            cap,
            faces: self.faces[..=cap].to_vec(),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Faces of dimension `d`; empty above the cap.
    pub fn faces(&self, d: usize) -> &[u32] {
        self.faces.get(d).map_or(&[], |l| &l.flat)
    }

    pub fn face_list(&self, d: usize) -> Option<&FaceList> {
        self.faces.get(d)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(FaceList::len).collect()
    }

    pub fn contains(&self, face: &Face) -> bool {
        let key: Vec<u32> = face.vertices().iter().map(|&v| v as u32).collect();
        self.faces
            .get(face.dim())
            .is_some_and(|l| l.index_of(&key).is_some())
    }

    /// Link of `face` as a graph on the common neighbourhood of its vertices,
    /// together with the original label of each link vertex.
    pub fn link_graph(&self, face: &Face) -> Result<(Graph, Vec<Vertex>), ComplexError> {
        if !self.contains(face) {
            return Err(ComplexError::NotAFace(face.vertices().to_vec()));
        }
        let verts = self.graph.common_neighbors(face.vertices())?;
        Ok((self.graph.induced_subgraph(&verts), verts))
    }

    /// Whether every face of dimension below `dim` lies in some `dim`-face.
    ///
    /// Each face of dimension `d < dim` having a `(d + 1)`-coface is
    /// equivalent, since cofaces compose upward.
    pub fn is_pure(&self, dim: usize) -> Result<bool, ComplexError> {
        if dim > self.cap {
            return Err(ComplexError::CapTooSmall {
                cap: self.cap,
                needed: dim,
            });
        }
        for d in 0..dim {
            let mut members = Vec::with_capacity(d + 1);
            for face in self.faces[d].iter() {
                members.clear();
                members.extend(face.iter().map(|&v| v as usize));
                if bitset::is_empty(&self.graph.common_neighbor_bits(&members)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Every stored `d`-face has all of its facets stored.
    pub fn check_downward_closed(&self) -> bool {
        let mut facet = Vec::new();
        for d in 1..=self.cap {
            for face in self.faces[d].iter() {
                for skip in 0..=d {
                    facet.clear();
                    facet.extend(
                        face.iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v),
                    );
                    if self.faces[d - 1].index_of(&facet).is_none() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn to_dump(&self) -> SkeletonDump {
        SkeletonDump {
            n: self.graph.n(),
            cap: self.cap,
            f_vector: self.f_vector(),
            faces: self
                .faces
                .iter()
                .flat_map(|l| l.iter().map(|f| f.iter().map(|&v| v as Vertex).collect()))
                .collect(),
        }
    }

    /// Rebuilds a skeleton from its dump, checking that the listed faces are
    /// exactly the cliques of the dumped 1-skeleton.
    pub fn from_dump(dump: &SkeletonDump) -> Result<FlagSkeleton, ComplexError> {
        let edges: Vec<(Vertex, Vertex)> = dump
            .faces
            .iter()
            .filter(|f| f.len() == 2)
            .map(|f| (f[0], f[1]))
            .collect();
        let g = Graph::from_edges(dump.n, &edges)?;
        let sk = FlagSkeleton::build(&g, dump.cap);
        let rebuilt = sk.to_dump();
        if rebuilt.f_vector != dump.f_vector {
            return Err(ComplexError::NotFlag(format!(
                "f-vector {:?} does not match cliques {:?}",
                dump.f_vector, rebuilt.f_vector
            )));
        }
        let mut listed = dump.faces.clone();
        listed.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        if listed != rebuilt.faces {
            return Err(ComplexError::NotFlag("face lists differ".into()));
        }
        Ok(sk)
    }
}

/// JSON form of a skeleton. `faces` lists every face, dimension by
/// dimension, each in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonDump {
    pub n: usize,
    pub cap: usize,
    pub f_vector: Vec<usize>,
    pub faces: Vec<Vec<Vertex>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn octahedron() -> Graph {
        // antipodal pairs (0,1), (2,3), (4,5)
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                if u / 2 != v / 2 {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(6, &edges).unwrap()
    }

    #[test]
    fn f_vectors() {
        assert_eq!(FlagSkeleton::build(&Graph::complete(3), 2).f_vector(), vec![3, 3, 1]);
        assert_eq!(FlagSkeleton::build(&Graph::cycle(4), 2).f_vector(), vec![4, 4, 0]);
        assert_eq!(FlagSkeleton::build(&octahedron(), 3).f_vector(), vec![6, 12, 8, 0]);
        assert_eq!(FlagSkeleton::build(&Graph::empty(0), 2).f_vector(), vec![0, 0, 0]);
        assert_eq!(FlagSkeleton::full(&octahedron()).cap(), 2);
    }

    #[test]
    fn faces_are_sorted_and_closed() {
        let g = Graph::sample_gnp(70, 0.4, crate::Seed::new(3, 1)).unwrap();
        let sk = FlagSkeleton::build(&g, 4);
        for d in 0..=4 {
            let list = sk.face_list(d).unwrap();
            for i in 1..list.len() {
                assert!(list.get(i - 1) < list.get(i));
            }
        }
        assert!(sk.check_downward_closed());
    }

    #[test]
    fn maximal_clique_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(count_maximal_cliques(&k4, 4).unwrap(), 1);
        assert_eq!(count_maximal_cliques(&k4, 3).unwrap(), 0);
        assert_eq!(count_maximal_cliques(&Graph::cycle(4), 2).unwrap(), 4);
        assert_eq!(count_maximal_cliques(&Graph::empty(5), 1).unwrap(), 5);
        assert_eq!(count_maximal_cliques(&k4, 0), Err(ComplexError::ZeroCliqueSize));
    }

    #[test]
    fn link_examples() {
        let sk = FlagSkeleton::build(&octahedron(), 2);
        let (link, verts) = sk.link_graph(&Face::new(vec![0]).unwrap()).unwrap();
        assert_eq!(verts, vec![2, 3, 4, 5]);
        assert_eq!(link.edge_count(), 4);
        assert!((0..4).all(|v| link.degree(v).unwrap() == 2));

        let sk = FlagSkeleton::build(&Graph::complete(4), 3);
        let (link, verts) = sk.link_graph(&Face::new(vec![1, 3]).unwrap()).unwrap();
        assert_eq!(verts, vec![0, 2]);
        assert_eq!(link, Graph::complete(2));

        let sk = FlagSkeleton::build(&Graph::cycle(4), 2);
        let (link, _) = sk.link_graph(&Face::new(vec![2]).unwrap()).unwrap();
        assert_eq!(link, Graph::empty(2));
        assert_eq!(
            sk.link_graph(&Face::new(vec![0, 2]).unwrap()),
            Err(ComplexError::NotAFace(vec![0, 2]))
        );
    }

    #[test]
    fn purity_examples() {
        assert!(FlagSkeleton::build(&octahedron(), 2).is_pure(2).unwrap());
        assert!(!FlagSkeleton::build(&Graph::cycle(4), 2).is_pure(2).unwrap());
        let pendant = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert!(!FlagSkeleton::build(&pendant, 2).is_pure(2).unwrap());
        assert!(FlagSkeleton::build(&Graph::empty(0), 2).is_pure(2).unwrap());
        assert!(!FlagSkeleton::build(&Graph::empty(3), 2).is_pure(1).unwrap());
        assert!(FlagSkeleton::build(&Graph::empty(3), 2).is_pure(0).unwrap());
        assert!(FlagSkeleton::build(&octahedron(), 2).is_pure(3).is_err());
    }

    #[test]
    fn face_validation() {
        assert!(Face::new(vec![2, 1]).is_err());
        assert!(Face::new(vec![]).is_err());
        assert_eq!(Face::new(vec![0, 4, 9]).unwrap().dim(), 2);
    }

    #[test]
    fn dump_round_trip_and_rejects_non_flag() {
        let sk = FlagSkeleton::build(&octahedron(), 3);
        let dump = sk.to_dump();
        assert_eq!(dump.faces.len(), 26);
        let json = serde_json::to_string(&dump).unwrap();
        let back: SkeletonDump = serde_json::from_str(&json).unwrap();
        assert_eq!(FlagSkeleton::from_dump(&back).unwrap(), sk);

        // hollow triangle claimed as a complex with no 2-face
        let mut hollow = FlagSkeleton::build(&Graph::complete(3), 2).to_dump();
        hollow.faces.pop();
        hollow.f_vector[2] = 0;
        assert!(matches!(
            FlagSkeleton::from_dump(&hollow),
            Err(ComplexError::NotFlag(_))
        ));
    }
}
