use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{canonical_code, CanonicalCode, Tree};
use crate::error::{Error, Result};

pub const MAX_TREE_VERTICES: usize = 10;

/// Largest vertex count for which all labeled trees are collected into a
/// vector (8^6 = 262144 trees). Larger counts are served by [`labeled_trees`].
pub const LABELED_MATERIALIZE_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeMode {
    Labeled,
    Unlabeled,
}

/// Lazily decoded Prüfer enumeration of all `v_count^(v_count-2)` labeled trees.
pub fn labeled_trees(v_count: usize) -> Result<impl Iterator<Item = Tree>> {
    check_range(v_count)?;
    let len = v_count.saturating_sub(2);
    let total = if v_count <= 2 { 1 } else { v_count.pow(len as u32) };
    Ok((0..total).map(move |mut index| {
        if v_count <= 2 {
            return if v_count == 1 { Tree::single_vertex() } else { Tree::path(2).unwrap() };
        }
        let mut seq = vec![0usize; len];
        for slot in seq.iter_mut().rev() {
            *slot = index % v_count;
            index /= v_count;
        }
        Tree::from_prufer(&seq, v_count).expect("every sequence decodes")
    }))
}

fn check_range(v_count: usize) -> Result<()> {
    if v_count == 0 || v_count > MAX_TREE_VERTICES {
        return Err(Error::SizeLimit(format!(
            "tree enumeration supports 1 <= v_count <= {MAX_TREE_VERTICES}, got {v_count}"
        )));
    }
    Ok(())
}

/// All trees on `v_count` vertices: every labeled tree, or one representative
/// per isomorphism class sorted by canonical code.
pub fn enumerate_trees(v_count: usize, mode: TreeMode) -> Result<Vec<Tree>> {
    check_range(v_count)?;
    match mode {
        TreeMode::Labeled => {
            if v_count > LABELED_MATERIALIZE_LIMIT {
                return Err(Error::SizeLimit(format!(
                    "collecting labeled trees is limited to v_count <= {LABELED_MATERIALIZE_LIMIT}; \
                     iterate with labeled_trees instead"
                )));
            }
            Ok(labeled_trees(v_count)?.collect())
        }
        TreeMode::Unlabeled => Ok(unlabeled_by_leaf_extension(v_count)),
    }
}

/// Every tree on `n >= 2` vertices arises from a tree on `n - 1` vertices by
/// attaching a leaf, so extending each class representative at every vertex
/// and deduplicating by canonical code reaches every class.
fn unlabeled_by_leaf_extension(v_count: usize) -> Vec<Tree> {
    let mut level: BTreeMap<CanonicalCode, Tree> = BTreeMap::new();
    let root = Tree::single_vertex();
    level.insert(canonical_code(&root), root);
    for _ in 1..v_count {
        let mut next = BTreeMap::new();
        for tree in level.values() {
            for v in 0..tree.v_count() {
                let grown = tree.with_leaf(v).expect("attaching a leaf keeps a tree");
                next.entry(canonical_code(&grown)).or_insert(grown);
            }
        }
        level = next;
    }
    level.into_values().collect()
}

/// Unlabeled classes found by canonicalizing every Prüfer tree. Quadratic in
/// the labeled count, so only practical for small `v_count`; serves as the
/// cross-check for the leaf-extension enumeration.
pub fn unlabeled_trees_via_prufer(v_count: usize) -> Result<Vec<Tree>> {
    let mut classes = BTreeMap::new();
    for tree in labeled_trees(v_count)? {
        classes.entry(canonical_code(&tree)).or_insert(tree);
    }
    Ok(classes.into_values().collect())
}
