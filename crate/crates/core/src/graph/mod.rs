//! Buckyball construction by truncating a rotation-system polyhedron.
//!
//! Rotation systems list each vertex's neighbours counterclockwise as seen
//! from outside the solid. Truncation replaces a degree-`k` seed vertex `v`
//! by `k` new vertices `(v, e)`, one per incident seed edge `e`; new vertex
//! ids are assigned in `(seed vertex, cyclic position)` order.

mod automorphism;

pub use automorphism::{automorphisms, find_antipodal_involution, Involution};

use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

use crate::linalg::{int, RationalMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("inconsistent rotation system: {0}")]
    InconsistentRotation(String),
    #[error("face walk from {from}->{to} did not close within {limit} steps")]
    OpenFace { from: usize, to: usize, limit: usize },
    #[error("malformed permutation: {0}")]
    BadPermutation(String),
    #[error("no fixed-point-free involutive automorphism exists")]
    InvolutionNotFound,
}

/// Polyhedron given only by its rotation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedPolyhedron {
    rotation: Vec<Vec<usize>>,
}

impl SeedPolyhedron {
    /// Validates symmetry, simplicity, and that face tracing yields a sphere.
    pub fn new(rotation: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        check_rotation(&rotation)?;
        let seed = Self { rotation };
        let faces = trace_faces(&seed.rotation)?;
        let v = seed.vertex_count() as i64;
        let e = seed.edge_count() as i64;
        if v - e + faces.len() as i64 != 2 {
            return Err(GraphError::InconsistentRotation(format!(
                "Euler characteristic {} (v={v}, e={e}, f={}), expected 2",
                v - e + faces.len() as i64,
                faces.len()
            )));
        }
        Ok(seed)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }
}

/// Icosahedron with pole 0, upper ring 1..=5, lower ring 6..=10, antipole 11.
///
/// Upper vertex `u_i = i` sits at azimuth `72(i−1)°`, lower vertex
/// `l_i = i + 5` at `72(i−1) + 36°`; `u_i` touches `l_{i−1}` and `l_i`.
pub fn canonical_icosahedron() -> SeedPolyhedron {
    let up = |i: usize| 1 + (i + 5) % 5; // ring index 0..5 -> vertex 1..=5
    let lo = |i: usize| 6 + (i + 5) % 5;
    let mut rotation = vec![Vec::new(); 12];
    rotation[0] = (0..5).map(up).collect();
    for i in 0..5 {
        rotation[up(i)] = vec![lo(i + 4), lo(i), up(i + 1), 0, up(i + 4)];
        rotation[lo(i)] = vec![lo(i + 1), up(i + 1), up(i), lo(i + 4), 11];
    }
    rotation[11] = (0..5).rev().map(lo).collect();
    SeedPolyhedron::new(rotation).expect("canonical icosahedron is a valid sphere map")
}

/// Tetrahedron with apex 0 over the counterclockwise base 1, 2, 3.
pub fn tetrahedron() -> SeedPolyhedron {
    SeedPolyhedron::new(vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]])
        .expect("tetrahedron is a valid sphere map")
}

/// Seed vertex and the other endpoint of the seed edge a truncated vertex sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Provenance {
    pub seed_vertex: usize,
    pub seed_neighbor: usize,
}

/// Simple undirected planar graph with a rotation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralGraph {
    rotation: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<Provenance>>,
}

impl PolyhedralGraph {
    pub fn from_rotation(rotation: Vec<Vec<usize>>, labels: Option<Vec<Provenance>>) -> Result<Self, GraphError> {
        check_rotation(&rotation)?;
        if let Some(l) = &labels {
            if l.len() != rotation.len() {
                return Err(GraphError::InconsistentRotation("label count differs from vertex count".into()));
            }
        }
        let edges = collect_edges(&rotation);
        Ok(Self { rotation, edges, labels })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn labels(&self) -> Option<&[Provenance]> {
        self.labels.as_deref()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rotation[a].contains(&b)
    }

    pub fn is_regular(&self, k: usize) -> bool {
        self.rotation.iter().all(|r| r.len() == k)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        n == 0 || self.bfs_distances(0).iter().all(|d| d.is_some())
    }

    /// Hop distances from `src` (`None` when unreachable).
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &w in &self.rotation[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.rotation[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if parent[v] != w {
                        let cycle = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(cycle, |b| b.min(cycle)));
                    }
                }
            }
        }
        best
    }

    /// Discrete Laplacian: degree on the diagonal, −1 per edge.
    pub fn laplacian(&self) -> RationalMatrix {
        let n = self.vertex_count();
        let mut m = RationalMatrix::zeros(n, n);
        for (v, nbrs) in self.rotation.iter().enumerate() {
            m[(v, v)] = int(nbrs.len() as i64);
            for &w in nbrs {
                m[(v, w)] = int(-1);
            }
        }
        m
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GraphError> {
        check_permutation(perm, self.vertex_count())?;
        let n = self.vertex_count();
        let mut rotation = vec![Vec::new(); n];
        for (v, nbrs) in self.rotation.iter().enumerate() {
            rotation[perm[v]] = nbrs.iter().map(|&w| perm[w]).collect();
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = l.clone();
            for (v, lab) in l.iter().enumerate() {
                out[perm[v]] = *lab;
            }
            out
        });
        Self::from_rotation(rotation, labels)
    }

    /// Graphviz rendering; node names are vertex ids.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph buckyball {\n");
        for v in 0..self.vertex_count() {
            out.push_str(&format!("  {v};\n"));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  {a} -- {b};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// `{"n", "edges", "faces"}` with sorted edges.
    pub fn to_json(&self) -> Result<serde_json::Value, GraphError> {
        let census = face_census(self)?;
        Ok(serde_json::json!({
            "n": self.vertex_count(),
            "edges": self.edges.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
            "faces": census.faces,
        }))
    }
}

fn check_rotation(rotation: &[Vec<usize>]) -> Result<(), GraphError> {
    let n = rotation.len();
    for (v, nbrs) in rotation.iter().enumerate() {
        let set: BTreeSet<usize> = nbrs.iter().copied().collect();
        if set.len() != nbrs.len() {
            return Err(GraphError::InconsistentRotation(format!("vertex {v} lists a neighbour twice")));
        }
        for &w in nbrs {
            if w >= n || w == v {
                return Err(GraphError::InconsistentRotation(format!("vertex {v} has invalid neighbour {w}")));
            }
            if !rotation[w].contains(&v) {
                return Err(GraphError::InconsistentRotation(format!("edge {v}-{w} is not symmetric")));
            }
        }
    }
    Ok(())
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<(), GraphError> {
    if perm.len() != n {
        return Err(GraphError::BadPermutation(format!("length {} for {n} vertices", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(GraphError::BadPermutation(format!("{p} out of range or repeated")));
        }
        seen[p] = true;
    }
    Ok(())
}

fn collect_edges(rotation: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = rotation
        .iter()
        .enumerate()
        .flat_map(|(v, nbrs)| nbrs.iter().filter(move |&&w| v < w).map(move |&w| (v, w)))
        .collect();
    edges.sort_unstable();
    edges
}

/// Truncates every vertex of `seed`.
pub fn truncate(seed: &SeedPolyhedron) -> Result<PolyhedralGraph, GraphError> {
    let rot = seed.rotation();
    let mut offset = Vec::with_capacity(rot.len());
    let mut total = 0;
    for nbrs in rot {
        offset.push(total);
        total += nbrs.len();
    }
    let id = |v: usize, k: usize| offset[v] + k;
    let position = |v: usize, w: usize| -> Result<usize, GraphError> {
        rot[v]
            .iter()
            .position(|&x| x == w)
            .ok_or_else(|| GraphError::InconsistentRotation(format!("{w} missing from rotation of {v}")))
    };

    let mut rotation = vec![Vec::new(); total];
    let mut labels = Vec::with_capacity(total);
    for (v, nbrs) in rot.iter().enumerate() {
        let k_count = nbrs.len();
        for (k, &w) in nbrs.iter().enumerate() {
            let bond = id(w, position(w, v)?);
            // counterclockwise: bond partner, next corner, previous corner
            rotation[id(v, k)] = vec![bond, id(v, (k + 1) % k_count), id(v, (k + k_count - 1) % k_count)];
            labels.push(Provenance { seed_vertex: v, seed_neighbor: w });
        }
    }
    PolyhedralGraph::from_rotation(rotation, Some(labels))
}

/// The buckyball: truncated canonical icosahedron.
pub fn buckyball() -> PolyhedralGraph {
    truncate(&canonical_icosahedron()).expect("icosahedron truncates cleanly")
}

/// Faces of a rotation-system embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCensus {
    pub faces: Vec<Vec<usize>>,
    pub pentagon_count: usize,
    pub hexagon_count: usize,
}

impl FaceCensus {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Number of faces of each length, ascending by length.
    pub fn length_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist = std::collections::BTreeMap::new();
        for f in &self.faces {
            *hist.entry(f.len()).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }
}

/// Face walk: after arriving at `v` from `u`, leave towards the neighbour
/// that precedes `u` in the counterclockwise order at `v`.
fn trace_faces(rotation: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, GraphError> {
    let darts: usize = rotation.iter().map(Vec::len).sum();
    let limit = darts; // 2·e
    let mut used: Vec<Vec<bool>> = rotation.iter().map(|r| vec![false; r.len()]).collect();
    let mut faces = Vec::new();
    for s in 0..rotation.len() {
        for si in 0..rotation[s].len() {
            if used[s][si] {
                continue;
            }
            let mut face = Vec::new();
            let (mut u, mut ui) = (s, si);
            let mut steps = 0;
            loop {
                if used[u][ui] {
                    if (u, ui) == (s, si) {
                        break;
                    }
                    return Err(GraphError::OpenFace { from: s, to: rotation[s][si], limit });
                }
                used[u][ui] = true;
                face.push(u);
                let v = rotation[u][ui];
                let back = rotation[v].iter().position(|&x| x == u).ok_or_else(|| {
                    GraphError::InconsistentRotation(format!("edge {u}-{v} is not symmetric"))
                })?;
                let deg = rotation[v].len();
                u = v;
                ui = (back + deg - 1) % deg;
                steps += 1;
                if steps > limit {
                    return Err(GraphError::OpenFace { from: s, to: rotation[s][si], limit });
                }
            }
            faces.push(face);
        }
    }
    Ok(faces)
}

/// Traces all faces of `g` and counts pentagons and hexagons.
pub fn face_census(g: &PolyhedralGraph) -> Result<FaceCensus, GraphError> {
    let faces = trace_faces(g.rotation())?;
    let pentagon_count = faces.iter().filter(|f| f.len() == 5).count();
    let hexagon_count = faces.iter().filter(|f| f.len() == 6).count();
    Ok(FaceCensus { faces, pentagon_count, hexagon_count })
}
