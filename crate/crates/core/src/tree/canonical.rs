use std::fmt;

use serde::{Deserialize, Serialize};

use super::Tree;

/// Relabeling-invariant identifier of an unlabeled tree: the AHU
/// parenthesis string of the tree rooted at its center, minimized over the
/// (at most two) centers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Hex form, safe for file names.
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    /// The tree the code describes, vertices numbered in preorder from the root.
    /// Isomorphic inputs decode to the same labeled tree.
    pub fn to_tree(&self) -> Tree {
        let mut edges = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut next = 0;
        for &b in &self.0 {
            if b == b'(' {
                if let Some(&parent) = stack.last() {
                    edges.push((parent, next));
                }
                stack.push(next);
                next += 1;
            } else {
                stack.pop();
            }
        }
        Tree::new(next, edges).expect("a balanced code describes a tree")
    }
}

/// One balanced parenthesis group.
fn is_single_group(bytes: &[u8]) -> bool {
    let mut depth = 0i64;
    for (i, &b) in bytes.iter().enumerate() {
        depth += match b {
            b'(' => 1,
            b')' => -1,
            _ => return false,
        };
        if depth < 0 || (depth == 0 && i + 1 != bytes.len()) {
            return false;
        }
    }
    depth == 0 && !bytes.is_empty()
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(std::str::from_utf8(&self.0).expect("codes are ASCII"))
    }
}

impl From<CanonicalCode> for String {
    fn from(c: CanonicalCode) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for CanonicalCode {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        if is_single_group(s.as_bytes()) {
            Ok(CanonicalCode(s.into_bytes()))
        } else {
            Err(format!("not a canonical tree code: {s:?}"))
        }
    }
}

fn rooted_code(tree: &Tree, root: usize) -> Vec<u8> {
    // Iterative post-order so deep paths cannot overflow the stack.
    let order = tree.bfs_order(root);
    let mut parent = vec![usize::MAX; tree.v_count()];
    for &v in &order {
        for &w in tree.neighbors(v) {
            if w != parent[v] && parent[w] == usize::MAX && w != root {
                parent[w] = v;
            }
        }
    }
    let mut children: Vec<Vec<Vec<u8>>> = vec![Vec::new(); tree.v_count()];
    for &v in order.iter().rev() {
        let mut kids = std::mem::take(&mut children[v]);
        kids.sort_unstable();
        let mut code = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
        code.push(b'(');
        for k in kids {
            code.extend(k);
        }
        code.push(b')');
        if v == root {
            return code;
        }
        children[parent[v]].push(code);
    }
    unreachable!("root is visited last")
}

pub fn canonical_code(tree: &Tree) -> CanonicalCode {
    let code = tree.centers().into_iter().map(|c| rooted_code(tree, c)).min().expect("a tree has a center");
    CanonicalCode(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphic_relabelings_agree() {
        let a = Tree::new(3, [(0, 1), (1, 2)]).unwrap();
        let b = Tree::new(3, [(1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
    }

    #[test]
    fn path_and_star_differ() {
        assert_ne!(canonical_code(&Tree::path(4).unwrap()), canonical_code(&Tree::star(4).unwrap()));
    }

    #[test]
    fn single_edge_code_is_fixed() {
        let code = canonical_code(&Tree::path(2).unwrap());
        assert_eq!(code.to_string(), "(())");
        assert_eq!(code.to_hex(), "28282929");
        assert_eq!(canonical_code(&Tree::single_vertex()).to_string(), "()");
    }

    #[test]
    fn serde_round_trip() {
        let code = canonical_code(&Tree::star(5).unwrap());
        let json = serde_json::to_string(&code).unwrap();
        assert_eq!(serde_json::from_str::<CanonicalCode>(&json).unwrap(), code);
        assert!(serde_json::from_str::<CanonicalCode>("\"abc\"").is_err());
        assert!(serde_json::from_str::<CanonicalCode>("\")(\"").is_err());
        assert!(serde_json::from_str::<CanonicalCode>("\"()()\"").is_err());
    }

    #[test]
    fn decoding_is_canonical() {
        for n in 1..=8 {
            for t in crate::tree::enumerate_trees(n, crate::tree::TreeMode::Unlabeled).unwrap() {
                let code = canonical_code(&t);
                let decoded = code.to_tree();
                assert_eq!(canonical_code(&decoded), code);
                let relabeled = t.relabeled(&(0..n).rev().collect::<Vec<_>>()).unwrap();
                assert_eq!(canonical_code(&relabeled).to_tree(), decoded);
            }
        }
    }
}
