//! Labeled trees on vertices `0..v_count`, edge cuts, and the unlabeled
//! machinery (canonical codes, enumeration) built on them.

mod canonical;
mod enumerate;
mod format;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canonical::{canonical_code, CanonicalCode};
pub use enumerate::{
    enumerate_trees, labeled_trees, unlabeled_trees_via_prufer, TreeMode, LABELED_MATERIALIZE_LIMIT,
    MAX_TREE_VERTICES,
};
pub use format::{parse_tree, Graph6};

/// A tree with vertices labeled `0..v_count`.
///
/// Edges are stored as `(min, max)` pairs in sorted order, so two trees with
/// the same edge set compare equal regardless of construction order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct Tree {
    v_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    v_count: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<TreeRepr> for Tree {
    type Error = Error;

    fn try_from(r: TreeRepr) -> Result<Self> {
        Tree::new(r.v_count, r.edges)
    }
}

impl From<Tree> for TreeRepr {
    fn from(t: Tree) -> Self {
        TreeRepr { v_count: t.v_count, edges: t.edges }
    }
}

impl Tree {
    pub fn new(v_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if v_count == 0 {
            return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(v_count - 1);
        for (u, v) in edges {
            if u >= v_count || v >= v_count {
                return Err(Error::InvalidTree(format!("edge {{{u}, {v}}} names a vertex >= {v_count}")));
            }
            if u == v {
                return Err(Error::InvalidTree(format!("self-loop at vertex {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTree(format!("duplicate edge {{{}, {}}}", w[0].0, w[0].1)));
        }
        if normalized.len() != v_count - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges on {v_count} vertices; a tree has {}",
                normalized.len(),
                v_count - 1
            )));
        }
        let mut adjacency = vec![Vec::new(); v_count];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let tree = Tree { v_count, edges: normalized, adjacency };
        if tree.bfs_order(0).len() != v_count {
            return Err(Error::InvalidTree("graph is not connected".into()));
        }
        Ok(tree)
    }

    pub fn single_vertex() -> Self {
        Tree { v_count: 1, edges: Vec::new(), adjacency: vec![Vec::new()] }
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(v_count: usize) -> Result<Self> {
        Tree::new(v_count, (1..v_count).map(|v| (v - 1, v)))
    }

    /// Star with center 0 and leaves `1..n`.
    pub fn star(v_count: usize) -> Result<Self> {
        Tree::new(v_count, (1..v_count).map(|v| (0, v)))
    }

    /// Decode a Prüfer sequence of length `v_count - 2`.
    pub fn from_prufer(sequence: &[usize], v_count: usize) -> Result<Self> {
        if v_count < 2 || sequence.len() != v_count - 2 {
            return Err(Error::InvalidArgument(format!(
                "Prüfer sequence of length {} does not describe a tree on {v_count} vertices",
                sequence.len()
            )));
        }
        if let Some(&bad) = sequence.iter().find(|&&s| s >= v_count) {
            return Err(Error::InvalidArgument(format!("Prüfer entry {bad} out of range")));
        }
        let mut degree = vec![1usize; v_count];
        for &s in sequence {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(v_count - 1);
        for &s in sequence {
            let leaf = (0..v_count).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..v_count).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        Tree::new(v_count, edges)
    }

    pub fn v_count(&self) -> usize {
        self.v_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree(v) == 1
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.v_count).filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.v_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Vertices in breadth-first order from `root`.
    pub fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.v_count];
        let mut order = Vec::with_capacity(self.v_count);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Graph distances from `source` to every vertex.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.v_count];
        dist[source] = 0;
        for v in self.bfs_order(source) {
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                }
            }
        }
        dist
    }

    pub fn distance_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.v_count)
            .map(|s| self.distances_from(s).into_iter().map(|d| d as i64).collect())
            .collect()
    }

    /// The one or two central vertices (minimum eccentricity).
    pub fn centers(&self) -> Vec<usize> {
        if self.v_count <= 2 {
            return (0..self.v_count).collect();
        }
        let mut degree = self.degrees();
        let mut layer: Vec<usize> = self.leaves();
        let mut remaining = self.v_count;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                degree[leaf] = 0;
                for &w in &self.adjacency[leaf] {
                    if degree[w] > 0 {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }

    /// The tree with `leaf` deleted and remaining vertices relabeled in
    /// increasing order. Also returns the old-to-new label map (`None` for
    /// the deleted vertex).
    pub fn without_leaf(&self, leaf: usize) -> Result<(Tree, Vec<Option<usize>>)> {
        if self.v_count < 2 || !self.is_leaf(leaf) {
            return Err(Error::InvalidArgument(format!("vertex {leaf} is not a leaf")));
        }
        let map: Vec<Option<usize>> =
            (0..self.v_count).map(|v| (v != leaf).then(|| if v < leaf { v } else { v - 1 })).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| u != leaf && v != leaf)
            .map(|&(u, v)| (map[u].unwrap(), map[v].unwrap()));
        Ok((Tree::new(self.v_count - 1, edges)?, map))
    }

    /// The tree with a new vertex `v_count` attached to `parent`.
    pub fn with_leaf(&self, parent: usize) -> Result<Tree> {
        Tree::new(self.v_count + 1, self.edges.iter().copied().chain([(parent, self.v_count)]))
    }

    /// Split along `edge` into the two components of `T - edge`.
    pub fn edge_cut(&self, edge: (usize, usize)) -> Result<EdgeCut> {
        let (a, b) = (edge.0.min(edge.1), edge.0.max(edge.1));
        if !self.has_edge(a, b) {
            return Err(Error::InvalidArgument(format!("{{{a}, {b}}} is not an edge of the tree")));
        }
        let mut in_a = vec![false; self.v_count];
        let mut stack = vec![a];
        in_a[a] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !in_a[w] && !(v == a && w == b) {
                    in_a[w] = true;
                    stack.push(w);
                }
            }
        }
        let (side_a, side_b): (Vec<usize>, Vec<usize>) = (0..self.v_count).partition(|&v| in_a[v]);
        Ok(EdgeCut { edge: (a, b), side_a, side_b })
    }

    /// Apply a vertex relabeling `v -> perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Tree> {
        if perm.len() != self.v_count {
            return Err(Error::InvalidArgument("permutation length differs from vertex count".into()));
        }
        Tree::new(self.v_count, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }
}

/// The two sides of a tree split along one edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCut {
    /// `(a, b)` with `a < b`.
    pub edge: (usize, usize),
    /// Component containing `a`, sorted.
    pub side_a: Vec<usize>,
    /// Component containing `b`, sorted.
    pub side_b: Vec<usize>,
}

impl EdgeCut {
    pub fn side_of(&self, v: usize) -> Side {
        if self.side_a.binary_search(&v).is_ok() {
            Side::A
        } else {
            Side::B
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rejects_non_trees() {
        assert!(matches!(Tree::new(3, [(0, 1)]), Err(Error::InvalidTree(_))));
        assert!(matches!(Tree::new(3, [(0, 1), (1, 1)]), Err(Error::InvalidTree(_))));
        assert!(matches!(Tree::new(3, [(0, 1), (1, 0)]), Err(Error::InvalidTree(_))));
        assert!(matches!(Tree::new(4, [(0, 1), (1, 0), (2, 3)]), Err(Error::InvalidTree(_))));
        assert!(matches!(Tree::new(4, [(0, 1), (2, 3), (0, 4)]), Err(Error::InvalidTree(_))));
        assert!(matches!(Tree::new(0, []), Err(Error::InvalidTree(_))));
        assert!(Tree::new(1, []).is_ok());
    }

    #[test]
    fn disconnected_graph_with_right_edge_count_is_rejected() {
        // triangle plus an isolated vertex
        assert!(matches!(Tree::new(4, [(0, 1), (1, 2), (0, 2)]), Err(Error::InvalidTree(_))));
    }

    #[test]
    fn edge_cut_examples() {
        let path = Tree::path(4).unwrap();
        let cut = path.edge_cut((2, 1)).unwrap();
        assert_eq!(cut.edge, (1, 2));
        assert_eq!(cut.side_a, vec![0, 1]);
        assert_eq!(cut.side_b, vec![2, 3]);

        let star = Tree::star(4).unwrap();
        let cut = star.edge_cut((0, 3)).unwrap();
        assert_eq!(cut.side_a, vec![0, 1, 2]);
        assert_eq!(cut.side_b, vec![3]);

        let edge = Tree::path(2).unwrap();
        let cut = edge.edge_cut((0, 1)).unwrap();
        assert_eq!((cut.side_a, cut.side_b), (vec![0], vec![1]));

        assert!(matches!(path.edge_cut((0, 2)), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn centers_of_paths_and_stars() {
        assert_eq!(Tree::path(5).unwrap().centers(), vec![2]);
        assert_eq!(Tree::path(4).unwrap().centers(), vec![1, 2]);
        assert_eq!(Tree::star(6).unwrap().centers(), vec![0]);
        assert_eq!(Tree::single_vertex().centers(), vec![0]);
    }

    #[test]
    fn prufer_decoding() {
        // the sequence [3, 3, 3] is the star centered at 3
        let t = Tree::from_prufer(&[3, 3, 3], 5).unwrap();
        assert_eq!(t.degree(3), 4);
        let p = Tree::from_prufer(&[1, 2], 4).unwrap();
        assert_eq!(p, Tree::path(4).unwrap());
    }

    #[test]
    fn leaf_removal_relabels() {
        let t = Tree::new(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        let (smaller, map) = t.without_leaf(0).unwrap();
        assert_eq!(map, vec![None, Some(0), Some(1), Some(2)]);
        assert_eq!(smaller, Tree::star(3).unwrap());
        assert!(t.without_leaf(1).is_err());
    }

    #[test]
    fn distance_matrix_of_path() {
        let d = Tree::path(3).unwrap().distance_matrix();
        assert_eq!(d, vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]]);
    }

    #[test]
    fn serde_validates() {
        let t: Tree = serde_json::from_str(r#"{"v_count":3,"edges":[[0,1],[1,2]]}"#).unwrap();
        assert_eq!(t, Tree::path(3).unwrap());
        assert!(serde_json::from_str::<Tree>(r#"{"v_count":3,"edges":[[0,1]]}"#).is_err());
    }
}
