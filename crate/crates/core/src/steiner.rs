//! Steiner distances of trees and the algebraic objects built from them:
//! the order-k Steiner hypermatrix, its k-form, the gradient generators of
//! the Steiner ideal, and the closed-form row differences of the contracted
//! matrix `S(x^{k-2}, *, *)`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{multinomial, HomogeneousForm, Monomial};
use crate::tree::{EdgeCut, Side, Tree};

/// Guard on hypermatrix order for the constructions below.
pub const MAX_ORDER: u32 = 8;
/// Guard on vertex count for hypermatrix constructions and the brute-force oracle.
pub const MAX_VERTICES: usize = 10;

/// Sorted multiset of vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexMultiset(Vec<usize>);

impl VertexMultiset {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        VertexMultiset(vertices)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit mask of the underlying set.
    pub fn set_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &v| m | (1 << v))
    }

    /// Multiplicity of each vertex `0..v_count`, i.e. the exponent vector of
    /// the monomial `prod x_v`.
    pub fn multiplicities(&self, v_count: usize) -> Vec<u32> {
        let mut m = vec![0u32; v_count];
        for &v in &self.0 {
            m[v] += 1;
        }
        m
    }

    fn validate(&self, v_count: usize) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::InvalidArgument("Steiner distance of an empty multiset".into()));
        }
        if let Some(&v) = self.0.iter().find(|&&v| v >= v_count) {
            return Err(Error::InvalidArgument(format!("vertex {v} not in a tree on {v_count} vertices")));
        }
        Ok(())
    }
}

/// All size-`size` multisets over `0..v_count` in lexicographic order.
pub fn multisets(v_count: usize, size: usize) -> Vec<VertexMultiset> {
    fn rec(start: usize, v_count: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<VertexMultiset>) {
        if left == 0 {
            out.push(VertexMultiset(cur.clone()));
            return;
        }
        for v in start..v_count {
            cur.push(v);
            rec(v, v_count, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, v_count, size, &mut Vec::with_capacity(size), &mut out);
    out
}

/// Edge side masks of a tree; the Steiner distance of a vertex set is the
/// number of edges whose two sides both meet the set.
#[derive(Debug, Clone)]
pub struct CutMasks {
    full: u64,
    sides: Vec<u64>,
}

impl CutMasks {
    pub fn new(tree: &Tree) -> Result<Self> {
        if tree.v_count() > 64 {
            return Err(Error::SizeLimit("Steiner distances use 64-bit vertex masks".into()));
        }
        let full = if tree.v_count() == 64 { u64::MAX } else { (1u64 << tree.v_count()) - 1 };
        let sides = tree
            .edges()
            .iter()
            .map(|&e| tree.edge_cut(e).expect("own edge").side_a.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect();
        Ok(Self { full, sides })
    }

    /// Distance of the set given by a mask.
    #[inline]
    pub fn distance(&self, set: u64) -> u32 {
        self.sides.iter().filter(|&&side| side & set != 0 && !side & self.full & set != 0).count() as u32
    }
}

pub fn steiner_distance(tree: &Tree, s: &VertexMultiset) -> Result<u32> {
    s.validate(tree.v_count())?;
    Ok(CutMasks::new(tree)?.distance(s.set_mask()))
}

/// Brute force: the fewest edges in any connected subgraph containing the
/// set, found by scanning vertex supersets for connected induced subgraphs
/// (a connected subgraph on `W` needs at least `|W| - 1` edges, and the
/// induced tree on a connected `W` has exactly that many).
pub fn steiner_distance_oracle(tree: &Tree, s: &VertexMultiset) -> Result<u32> {
    let n = tree.v_count();
    if n > MAX_VERTICES {
        return Err(Error::SizeLimit(format!("brute-force Steiner oracle is limited to {MAX_VERTICES} vertices")));
    }
    s.validate(n)?;
    let required = s.set_mask();
    let free = ((1u64 << n) - 1) & !required;
    let connected = |w: u64| -> bool {
        let start = w.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in tree.neighbors(v) {
                let bit = 1u64 << u;
                if w & bit != 0 && seen & bit == 0 {
                    seen |= bit;
                    stack.push(u);
                }
            }
        }
        seen == w
    };
    let mut best = u32::MAX;
    // iterate over all subsets of `free`
    let mut extra = free;
    loop {
        let w = required | extra;
        if connected(w) {
            best = best.min(w.count_ones() - 1);
        }
        if extra == 0 {
            break;
        }
        extra = (extra - 1) & free;
    }
    Ok(best)
}

fn guard(tree: &Tree, k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("hypermatrix order must be at least 2, got {k}")));
    }
    if k > MAX_ORDER || tree.v_count() > MAX_VERTICES {
        return Err(Error::SizeLimit(format!(
            "hypermatrix constructions are limited to k <= {MAX_ORDER} and v_count <= {MAX_VERTICES} \
             (got k = {k}, v_count = {})",
            tree.v_count()
        )));
    }
    Ok(())
}

/// Order-k Steiner hypermatrix keyed by sorted vertex multiset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerHypermatrix {
    pub v_count: usize,
    pub k: u32,
    pub entries: Vec<HypermatrixEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypermatrixEntry {
    pub multiset: VertexMultiset,
    pub d: u32,
}

impl SteinerHypermatrix {
    /// Entry at an arbitrary index tuple (any order).
    pub fn get(&self, indices: &[usize]) -> Option<u32> {
        if indices.len() != self.k as usize {
            return None;
        }
        let key = VertexMultiset::new(indices.to_vec());
        self.entries.binary_search_by(|e| e.multiset.cmp(&key)).ok().map(|i| self.entries[i].d)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn build_hypermatrix(tree: &Tree, k: u32) -> Result<SteinerHypermatrix> {
    guard(tree, k)?;
    let masks = CutMasks::new(tree)?;
    let entries = multisets(tree.v_count(), k as usize)
        .into_iter()
        .map(|m| {
            let d = masks.distance(m.set_mask());
            HypermatrixEntry { multiset: m, d }
        })
        .collect();
    Ok(SteinerHypermatrix { v_count: tree.v_count(), k, entries })
}

/// `sum over multisets m of size |m|` of `multinomial(m) * d(m + fixed) * x^m`:
/// the contraction of the hypermatrix against `x` in all but the fixed slots.
fn contraction(tree: &Tree, masks: &CutMasks, free_slots: usize, fixed: &[usize]) -> HomogeneousForm {
    let n = tree.v_count();
    let fixed_mask = fixed.iter().fold(0u64, |m, &v| m | (1 << v));
    let mut form = HomogeneousForm::zero(n, free_slots as u32);
    for m in multisets(n, free_slots) {
        let d = masks.distance(m.set_mask() | fixed_mask);
        if d == 0 {
            continue;
        }
        let exps = m.multiplicities(n);
        let coef = multinomial(&exps) * d;
        form.add_term(Monomial::new(exps), coef);
    }
    form
}

/// The Steiner k-form `p(x) = sum over k-tuples of d(tuple) x^tuple`.
pub fn steiner_polynomial(tree: &Tree, k: u32) -> Result<HomogeneousForm> {
    guard(tree, k)?;
    Ok(contraction(tree, &CutMasks::new(tree)?, k as usize, &[]))
}

/// Which scaling of the gradient generators is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Normalization {
    /// `g_r = sum over (k-1)-tuples i of d(r, i) x^i`.
    #[default]
    #[serde(rename = "paper-g")]
    Unscaled,
    /// `D_r p = k * g_r`.
    #[serde(rename = "full-Dp")]
    FullDp,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Unscaled => "paper-g",
            Normalization::FullDp => "full-Dp",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-g" => Ok(Normalization::Unscaled),
            "full-Dp" => Ok(Normalization::FullDp),
            other => Err(Error::InvalidArgument(format!("unknown normalization {other:?}"))),
        }
    }
}

/// Exponent `e` such that `Res(D p) = k^e * Res(g)`: each of the `n` forms
/// scaled by `k` contributes `(k-1)^(n-1)`.
pub fn normalization_exponent(k: u32, v_count: usize) -> u64 {
    v_count as u64 * ((k - 1) as u64).pow(v_count as u32 - 1)
}

/// `k^(n (k-1)^(n-1))`, the factor between the two conventions' resultants.
pub fn normalization_factor(k: u32, v_count: usize) -> BigInt {
    num_traits::pow(BigInt::from(k), normalization_exponent(k, v_count) as usize)
}

/// Generators `g_0, ..., g_{n-1}` of the Steiner ideal, each of degree `k-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradientSystem {
    pub k: u32,
    pub v_count: usize,
    /// Unscaled generators `g_r`.
    pub forms: Vec<HomogeneousForm>,
}

impl GradientSystem {
    pub fn forms_with(&self, normalization: Normalization) -> Vec<HomogeneousForm> {
        match normalization {
            Normalization::Unscaled => self.forms.clone(),
            Normalization::FullDp => {
                let k = BigInt::from(self.k);
                self.forms.iter().map(|f| f.scale(&k)).collect()
            }
        }
    }
}

pub fn gradient_system(tree: &Tree, k: u32) -> Result<GradientSystem> {
    guard(tree, k)?;
    let masks = CutMasks::new(tree)?;
    let forms = (0..tree.v_count()).map(|r| contraction(tree, &masks, k as usize - 1, &[r])).collect();
    Ok(GradientSystem { k, v_count: tree.v_count(), forms })
}

/// Entry `S_{u,w} = sum over (k-2)-tuples i of d(u, w, i) x^i` of the
/// contracted matrix `S(x^{k-2}, *, *)`, by direct expansion.
pub fn contracted_entry(tree: &Tree, k: u32, u: usize, w: usize) -> Result<HomogeneousForm> {
    guard(tree, k)?;
    if u >= tree.v_count() || w >= tree.v_count() {
        return Err(Error::InvalidArgument(format!("vertex out of range: ({u}, {w})")));
    }
    Ok(contraction(tree, &CutMasks::new(tree)?, k as usize - 2, &[u, w]))
}

/// Closed form of the row difference `S_a - S_b` across an edge `{a, b}`:
/// constant `-(sum_{side_a} x)^{k-2}` on `a`'s side and
/// `(sum_{side_b} x)^{k-2}` on `b`'s side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDifferenceDescriptor {
    pub cut: EdgeCut,
    pub k: u32,
    pub value_on_a: HomogeneousForm,
    pub value_on_b: HomogeneousForm,
    /// The identity is established for even `k`; odd orders are computed
    /// all the same and flagged here.
    pub in_stated_scope: bool,
}

impl RowDifferenceDescriptor {
    /// The two-valued vector, one form per vertex.
    pub fn as_vector(&self) -> Vec<HomogeneousForm> {
        let n = self.cut.side_a.len() + self.cut.side_b.len();
        (0..n)
            .map(|v| match self.cut.side_of(v) {
                Side::A => self.value_on_a.clone(),
                Side::B => self.value_on_b.clone(),
            })
            .collect()
    }

    /// `h^T x = -(sum_a x)^{k-1} + (sum_b x)^{k-1}`, which equals `g_a - g_b`.
    pub fn contracted_with_x(&self) -> HomogeneousForm {
        let n = self.cut.side_a.len() + self.cut.side_b.len();
        let sa = HomogeneousForm::linear_sum(n, &self.cut.side_a);
        let sb = HomogeneousForm::linear_sum(n, &self.cut.side_b);
        self.value_on_a.mul(&sa).add(&self.value_on_b.mul(&sb))
    }
}

pub fn row_difference_form(tree: &Tree, k: u32, edge: (usize, usize)) -> Result<RowDifferenceDescriptor> {
    guard(tree, k)?;
    let cut = tree.edge_cut(edge)?;
    let n = tree.v_count();
    let value_on_a = HomogeneousForm::linear_sum(n, &cut.side_a).pow(k - 2).neg();
    let value_on_b = HomogeneousForm::linear_sum(n, &cut.side_b).pow(k - 2);
    Ok(RowDifferenceDescriptor { cut, k, value_on_a, value_on_b, in_stated_scope: k.is_multiple_of(2) })
}

/// `S_a - S_b` computed entry by entry from [`contracted_entry`].
pub fn row_difference_direct(tree: &Tree, k: u32, edge: (usize, usize)) -> Result<Vec<HomogeneousForm>> {
    let cut = tree.edge_cut(edge)?;
    let (a, b) = cut.edge;
    (0..tree.v_count())
        .map(|w| Ok(contracted_entry(tree, k, a, w)?.sub(&contracted_entry(tree, k, b, w)?)))
        .collect()
}

/// The vector `2 - deg(v)` (leaf entries 1): the only shape an even-order
/// Steiner nullvector could have.
pub fn forced_candidate(tree: &Tree) -> Result<Vec<i64>> {
    if tree.v_count() < 2 {
        return Err(Error::InvalidArgument("forced candidate needs at least two vertices".into()));
    }
    Ok(tree.degrees().into_iter().map(|d| 2 - d as i64).collect())
}
