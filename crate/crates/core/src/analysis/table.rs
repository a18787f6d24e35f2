//! Published values of the Steiner hyperdeterminant, stored as signed
//! factorizations keyed by their printed index pair.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    /// Index pair exactly as printed.
    pub index: (u32, u32),
    pub sign: i8,
    pub factors: &'static [(u64, u32)],
}

impl TableRow {
    pub fn value(&self) -> BigInt {
        let magnitude = self
            .factors
            .iter()
            .fold(BigInt::from(1), |acc, &(p, e)| acc * num_traits::pow(BigInt::from(p), e as usize));
        if self.sign < 0 {
            -magnitude
        } else {
            magnitude
        }
    }

    pub fn factored(&self) -> String {
        let body: Vec<String> =
            self.factors.iter().map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        format!("{}{}", if self.sign < 0 { "-" } else { "" }, body.join("*"))
    }
}

pub const REFERENCE_TABLE: [TableRow; 9] = [
    TableRow { index: (4, 2), sign: -1, factors: &[(2, 2), (7, 1)] },
    TableRow { index: (4, 3), sign: 1, factors: &[(2, 12), (7, 1), (23, 4)] },
    TableRow { index: (4, 4), sign: -1, factors: &[(2, 38), (3, 27), (5, 6), (7, 1), (13, 12)] },
    TableRow { index: (4, 5), sign: 1, factors: &[(2, 203), (5, 32), (7, 1), (11, 32), (23, 24), (37, 8)] },
    TableRow { index: (6, 2), sign: -1, factors: &[(11, 2), (31, 1)] },
    TableRow { index: (6, 3), sign: 1, factors: &[(2, 14), (3, 16), (11, 4), (31, 1), (19231, 4)] },
    TableRow {
        index: (6, 4),
        sign: -1,
        factors: &[
            (2, 82),
            (3, 17),
            (11, 8),
            (31, 1),
            (41, 12),
            (71, 6),
            (89, 6),
            (151, 24),
            (257, 24),
            (1511, 12),
        ],
    },
    TableRow { index: (8, 2), sign: -1, factors: &[(2, 6), (29, 2), (127, 1)] },
    TableRow { index: (8, 3), sign: 1, factors: &[(2, 56), (13, 16), (29, 4), (113, 8), (127, 1), (1009, 8), (2143, 4)] },
];

/// Reading of the printed index pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableIndex {
    /// First index is the order `k`, second the vertex count.
    #[default]
    Kn,
    /// First index is the vertex count.
    Nk,
}

impl std::str::FromStr for TableIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kn" => Ok(TableIndex::Kn),
            "nk" => Ok(TableIndex::Nk),
            other => Err(Error::InvalidArgument(format!("unknown table index {other:?} (expected kn or nk)"))),
        }
    }
}

impl TableIndex {
    pub fn as_str(self) -> &'static str {
        match self {
            TableIndex::Kn => "kn",
            TableIndex::Nk => "nk",
        }
    }
}

/// Row for order `k` and `v_count` vertices under the given reading.
pub fn reference_row(k: u32, v_count: usize, index: TableIndex) -> Result<&'static TableRow> {
    let key = match index {
        TableIndex::Kn => (k, v_count as u32),
        TableIndex::Nk => (v_count as u32, k),
    };
    REFERENCE_TABLE.iter().find(|r| r.index == key).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "no table row {key:?} (index reading {}); rows: {}",
            index.as_str(),
            REFERENCE_TABLE.iter().map(|r| format!("{:?}", r.index)).collect::<Vec<_>>().join(" ")
        ))
    })
}

/// `2^(k-1) - 1`.
pub fn obstruction_prime(k: u32) -> BigInt {
    (BigInt::from(1) << (k - 1)) - 1
}
