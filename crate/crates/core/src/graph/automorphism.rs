//! Backtracking automorphism search.
//!
//! Vertices are assigned in increasing id order and candidate images are
//! tried in increasing order, so the first complete assignment found is the
//! lexicographically smallest permutation satisfying the constraints.
//! Partial maps must preserve hop distance between every pair of assigned
//! vertices, which prunes the tree to little more than the automorphisms
//! themselves.

use super::{check_permutation, GraphError, PolyhedralGraph};

/// Fixed-point-free graph automorphism of order two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    perm: Vec<usize>,
}

impl Involution {
    /// Checks `σ∘σ = id`, no fixed point, and edge preservation on `g`.
    pub fn new(perm: Vec<usize>, g: &PolyhedralGraph) -> Result<Self, GraphError> {
        check_permutation(&perm, g.vertex_count())?;
        for (i, &s) in perm.iter().enumerate() {
            if s == i {
                return Err(GraphError::BadPermutation(format!("{i} is a fixed point")));
            }
            if perm[s] != i {
                return Err(GraphError::BadPermutation(format!("not an involution at {i}")));
            }
        }
        if !is_automorphism(g, &perm) {
            return Err(GraphError::BadPermutation("does not preserve edges".into()));
        }
        Ok(Self { perm })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn image(&self, v: usize) -> usize {
        self.perm[v]
    }

    /// Orbit representatives (smaller element of each pair), ascending.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.perm.len()).filter(|&i| i < self.perm[i]).collect()
    }
}

fn is_automorphism(g: &PolyhedralGraph, perm: &[usize]) -> bool {
    g.edges().iter().all(|&(a, b)| g.has_edge(perm[a], perm[b]))
}

struct Search<'a> {
    g: &'a PolyhedralGraph,
    dist: Vec<Vec<usize>>,
    involutive: bool,
    first_only: bool,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn consistent(&self, v: usize, w: usize) -> bool {
        if self.g.degree(v) != self.g.degree(w) {
            return false;
        }
        self.map.iter().enumerate().all(|(u, img)| match img {
            Some(x) => self.dist[u][v] == self.dist[*x][w],
            None => true,
        })
    }

    fn assign(&mut self, v: usize, w: usize) {
        self.map[v] = Some(w);
        self.used[w] = true;
    }

    fn unassign(&mut self, v: usize) {
        if let Some(w) = self.map[v].take() {
            self.used[w] = false;
        }
    }

    /// Returns true to stop the search.
    fn run(&mut self, from: usize) -> bool {
        let n = self.map.len();
        let Some(v) = (from..n).find(|&i| self.map[i].is_none()) else {
            let perm: Vec<usize> = self.map.iter().map(|x| x.expect("complete map")).collect();
            if is_automorphism(self.g, &perm) {
                self.found.push(perm);
                return self.first_only;
            }
            return false;
        };
        for w in 0..n {
            // in involutive mode every w < v is already paired with someone else
            if self.used[w] || (self.involutive && w <= v) || !self.consistent(v, w) {
                continue;
            }
            self.assign(v, w);
            // an involution also fixes σ(w) = v
            let paired = self.involutive;
            let mut ok = true;
            if paired {
                if self.map[w].is_some() || self.used[v] || !self.consistent(w, v) {
                    ok = false;
                } else {
                    self.assign(w, v);
                }
            }
            if ok && self.run(v + 1) {
                return true;
            }
            if ok && paired {
                self.unassign(w);
            }
            self.unassign(v);
        }
        false
    }
}

fn all_pairs_distances(g: &PolyhedralGraph) -> Vec<Vec<usize>> {
    (0..g.vertex_count())
        .map(|s| g.bfs_distances(s).into_iter().map(|d| d.unwrap_or(usize::MAX)).collect())
        .collect()
}

fn search(g: &PolyhedralGraph, involutive: bool, first_only: bool) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut s = Search {
        g,
        dist: all_pairs_distances(g),
        involutive,
        first_only,
        map: vec![None; n],
        used: vec![false; n],
        found: Vec::new(),
    };
    s.run(0);
    s.found
}

/// Every automorphism of `g`, in lexicographic order.
pub fn automorphisms(g: &PolyhedralGraph) -> Vec<Vec<usize>> {
    search(g, false, false)
}

/// Lexicographically smallest fixed-point-free involutive automorphism.
pub fn find_antipodal_involution(g: &PolyhedralGraph) -> Result<Involution, GraphError> {
    if g.vertex_count() % 2 == 1 || g.vertex_count() == 0 {
        return Err(GraphError::InvolutionNotFound);
    }
    let perm = search(g, true, true).pop().ok_or(GraphError::InvolutionNotFound)?;
    Involution::new(perm, g)
}
