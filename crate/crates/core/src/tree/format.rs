//! Tree text formats.
//!
//! Edge-list form:
//!
//! ```text
//! n 4
//! 0 1
//! 1 2
//! 1 3
//! ```
//!
//! and graph6 (n <= 62), optionally prefixed with `>>graph6<<`.

use std::fmt::Write as _;

use super::Tree;
use crate::error::{Error, Result};

const GRAPH6_HEADER: &str = ">>graph6<<";

impl Tree {
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.v_count());
        for &(u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Tree> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty tree description".into()))?;
        let v_count = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", count] => count.parse::<usize>().map_err(|e| Error::Parse(format!("vertex count: {e}")))?,
            _ => return Err(Error::Parse(format!("expected `n <v_count>`, found {header:?}"))),
        };
        let mut edges = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [u, v] = parts.as_slice() else {
                return Err(Error::Parse(format!("expected `u v`, found {line:?}")));
            };
            let parse = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("vertex {s:?}: {e}")));
            edges.push((parse(u)?, parse(v)?));
        }
        Tree::new(v_count, edges)
    }
}

/// graph6 encoding and decoding of trees.
pub trait Graph6: Sized {
    fn to_graph6(&self) -> String;
    fn from_graph6(text: &str) -> Result<Self>;
}

impl Graph6 for Tree {
    fn to_graph6(&self) -> String {
        let n = self.v_count();
        assert!(n <= 62, "graph6 short form covers n <= 62");
        let mut bits = Vec::with_capacity(n * (n - 1) / 2);
        for j in 1..n {
            for i in 0..j {
                bits.push(self.has_edge(i, j));
            }
        }
        let mut out = String::new();
        out.push((n as u8 + 63) as char);
        for chunk in bits.chunks(6) {
            let mut byte = 0u8;
            for k in 0..6 {
                byte = (byte << 1) | u8::from(chunk.get(k).copied().unwrap_or(false));
            }
            out.push((byte + 63) as char);
        }
        out
    }

    fn from_graph6(text: &str) -> Result<Tree> {
        let body = text.trim();
        let body = body.strip_prefix(GRAPH6_HEADER).unwrap_or(body).as_bytes();
        let (&first, rest) = body.split_first().ok_or_else(|| Error::Parse("empty graph6 string".into()))?;
        if !(63..=125).contains(&first) {
            return Err(Error::Parse("graph6 vertex counts above 62 are not supported".into()));
        }
        let n = (first - 63) as usize;
        let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
        if rest.len() != needed {
            return Err(Error::Parse(format!("graph6 body has {} bytes, expected {needed}", rest.len())));
        }
        let mut bits = Vec::with_capacity(needed * 6);
        for &b in rest {
            if !(63..=126).contains(&b) {
                return Err(Error::Parse(format!("invalid graph6 byte {b}")));
            }
            let v = b - 63;
            bits.extend((0..6).rev().map(|k| (v >> k) & 1 == 1));
        }
        let mut edges = Vec::new();
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                if bits[idx] {
                    edges.push((i, j));
                }
                idx += 1;
            }
        }
        Tree::new(n, edges)
    }
}

/// Parse either format; edge lists are recognized by their `n <count>` header.
pub fn parse_tree(text: &str) -> Result<Tree> {
    let trimmed = text.trim_start();
    let first_line = trimmed.lines().next().unwrap_or("");
    if first_line.split_whitespace().next() == Some("n") && first_line.split_whitespace().count() == 2 {
        Tree::from_edge_list(text)
    } else {
        Tree::from_graph6(trimmed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{enumerate_trees, TreeMode};

    #[test]
    fn edge_list_round_trip() {
        let t = Tree::new(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        let text = t.to_edge_list();
        assert_eq!(text, "n 4\n0 1\n1 2\n1 3\n");
        assert_eq!(Tree::from_edge_list(&text).unwrap(), t);
        assert_eq!(parse_tree(&text).unwrap(), t);
    }

    #[test]
    fn known_graph6_strings() {
        // P3 (0-1-2) is "Bg", the single edge is "A_".
        assert_eq!(Tree::path(3).unwrap().to_graph6(), "Bg");
        assert_eq!(Tree::path(2).unwrap().to_graph6(), "A_");
        assert_eq!(parse_tree("Bg").unwrap(), Tree::path(3).unwrap());
        assert_eq!(parse_tree(">>graph6<<A_").unwrap(), Tree::path(2).unwrap());
    }

    #[test]
    fn graph6_round_trip_all_small_trees() {
        for n in 1..=9 {
            for t in enumerate_trees(n, TreeMode::Unlabeled).unwrap() {
                assert_eq!(Tree::from_graph6(&t.to_graph6()).unwrap(), t);
            }
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(Tree::from_edge_list("m 3\n0 1"), Err(Error::Parse(_))));
        assert!(matches!(Tree::from_edge_list("n 3\n0 1 2"), Err(Error::Parse(_))));
        assert!(matches!(Tree::from_edge_list("n 3\n0 1"), Err(Error::InvalidTree(_))));
        assert!(matches!(Tree::from_graph6("Bgg"), Err(Error::Parse(_))));
        // triangle
        assert!(matches!(Tree::from_graph6("Bw"), Err(Error::InvalidTree(_))));
    }
}
