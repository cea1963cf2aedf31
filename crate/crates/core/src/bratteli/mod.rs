//! Bratteli diagrams of unital AF algebras.
//!
//! A diagram is a finite list of level widths `k_0 = 1, k_1, …, k_m` with
//! multiplicity matrices `M_1, …, M_m` (`M_n` is `k_n × k_{n-1}`, rows
//! indexed by level-`n` vertices). An infinite diagram is encoded by the
//! [`Tail::RepeatLast`] marker: `M_m` then repeats forever. Every quantity
//! that depends on the whole infinite diagram takes an explicit depth.

mod k0;
mod matrix;
mod premorphism;
mod towers;

pub use k0::{
    divide_element, k0_unit_divisor, rational_subgroup_member_stage, theta_eval_stage, uhf_embeds,
    DimensionVector, Embedding,
};
pub use matrix::Matrix;
pub use premorphism::{canonical_premorphism, verify_premorphism, Premorphism, PremorphismError};
pub use towers::{
    mu_supernatural, odometer, telescope, tower_profile, uhf_diagram, Exactness, MuSupernatural,
    TowerProfile,
};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use thiserror::Error;

/// What follows the last listed matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    /// The diagram stops at level `m`: a finite-dimensional algebra.
    None,
    /// `M_m` is repeated for every level after `m`.
    RepeatLast,
}

impl Tail {
    pub fn as_str(self) -> &'static str {
        match self {
            Tail::None => "none",
            Tail::RepeatLast => "repeat-last",
        }
    }
}

/// First structural defect found by [`validate`]. Matrix levels count from 1
/// (`M_1` maps level 0 to level 1); rows and columns count from 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("no levels")]
    NoLevels,
    #[error("level 0 must have exactly one vertex, found {found}")]
    RootWidth { found: usize },
    #[error("level {level} has no vertices")]
    EmptyLevel { level: usize },
    #[error("expected {expected} matrices for the given levels, found {found}")]
    MatrixCount { expected: usize, found: usize },
    #[error("matrix {level}: expected {expected} rows, found {found}")]
    RowCount {
        level: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix {level} row {row}: expected {expected} entries, found {found}")]
    RowLength {
        level: usize,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix {level}: row {row} is zero (vertex with no incoming edge)")]
    ZeroRow { level: usize, row: usize },
    #[error("matrix {level}: column {column} is zero (vertex with no outgoing edge)")]
    ZeroColumn { level: usize, column: usize },
    #[error("repeat-last tail needs at least one matrix")]
    TailWithoutMatrix,
    #[error("repeat-last tail needs a square last matrix, matrix {level} is {rows}x{cols}")]
    TailNotSquare {
        level: usize,
        rows: usize,
        cols: usize,
    },
}

/// Errors from operations on valid diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Invalid(#[from] Violation),
    #[error("depth {depth} is beyond the last level {levels} of a finite diagram")]
    DepthBeyondDiagram { depth: usize, levels: usize },
    #[error("expected a positive integer, got {0}")]
    NotPositive(String),
    #[error("stage {stage} exceeds depth {depth}")]
    StageBeyondDepth { stage: usize, depth: usize },
    #[error("vector has length {found}, level {stage} has {expected} vertices")]
    VectorLength {
        stage: usize,
        expected: usize,
        found: usize,
    },
    #[error("vector entries must be nonnegative")]
    NegativeEntry,
    #[error("invalid cut points: {0}")]
    InvalidCuts(String),
    #[error("{0} is not in Q(MU) for this diagram")]
    OutsideRationalGroup(BigRational),
    #[error("no stage up to depth {depth} has height gcd divisible by {denominator}")]
    DenominatorNotDivisible { denominator: BigUint, depth: usize },
}

/// Unvalidated diagram data, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDiagram {
    pub name: Option<String>,
    pub levels: Vec<usize>,
    pub matrices: Vec<Vec<Vec<BigUint>>>,
    pub tail: Tail,
}

impl RawDiagram {
    pub fn build(self) -> Result<BratteliDiagram, Violation> {
        validate(&self)?;
        let matrices = self.matrices.into_iter().map(Matrix::from_rows).collect();
        Ok(BratteliDiagram {
            name: self.name,
            levels: self.levels,
            matrices,
            tail: self.tail,
        })
    }
}

/// Checks every structural invariant and reports the first failure.
pub fn validate(raw: &RawDiagram) -> Result<(), Violation> {
    let levels = &raw.levels;
    match levels.first() {
        None => return Err(Violation::NoLevels),
        Some(&1) => {}
        Some(&found) => return Err(Violation::RootWidth { found }),
    }
    if let Some(level) = levels.iter().position(|&k| k == 0) {
        return Err(Violation::EmptyLevel { level });
    }
    if raw.matrices.len() + 1 != levels.len() {
        return Err(Violation::MatrixCount {
            expected: levels.len() - 1,
            found: raw.matrices.len(),
        });
    }
    for (i, rows) in raw.matrices.iter().enumerate() {
        let level = i + 1;
        let (expected_rows, expected_cols) = (levels[level], levels[level - 1]);
        if rows.len() != expected_rows {
            return Err(Violation::RowCount {
                level,
                expected: expected_rows,
                found: rows.len(),
            });
        }
        if let Some((r, row)) = rows
            .iter()
            .enumerate()
            .find(|(_, row)| row.len() != expected_cols)
        {
            return Err(Violation::RowLength {
                level,
                row: r + 1,
                expected: expected_cols,
                found: row.len(),
            });
        }
        let m = Matrix::from_rows(rows.clone());
        if let Some(row) = m.zero_row() {
            return Err(Violation::ZeroRow {
                level,
                row: row + 1,
            });
        }
        if let Some(column) = m.zero_column() {
            return Err(Violation::ZeroColumn {
                level,
                column: column + 1,
            });
        }
    }
    if raw.tail == Tail::RepeatLast {
        let last = raw.matrices.len();
        if last == 0 {
            return Err(Violation::TailWithoutMatrix);
        }
        if levels[last] != levels[last - 1] {
            return Err(Violation::TailNotSquare {
                level: last,
                rows: levels[last],
                cols: levels[last - 1],
            });
        }
    }
    Ok(())
}

/// A validated Bratteli diagram.
#[derive(Clone, PartialEq, Eq)]
pub struct BratteliDiagram {
    name: Option<String>,
    levels: Vec<usize>,
    matrices: Vec<Matrix>,
    tail: Tail,
}

impl BratteliDiagram {
    pub fn new(levels: Vec<usize>, matrices: Vec<Matrix>, tail: Tail) -> Result<Self, Violation> {
        RawDiagram {
            name: None,
            levels,
            matrices: matrices.iter().map(Matrix::to_rows).collect(),
            tail,
        }
        .build()
    }

    /// Convenience constructor from nested integer slices.
    pub fn from_u64(
        levels: &[usize],
        matrices: &[&[&[u64]]],
        tail: Tail,
    ) -> Result<Self, Violation> {
        Self::new(
            levels.to_vec(),
            matrices.iter().map(|m| Matrix::from_u64_rows(m)).collect(),
            tail,
        )
    }

    /// The diagram of `ℂ`: one vertex, no edges.
    pub fn trivial() -> Self {
        Self {
            name: None,
            levels: vec![1],
            matrices: Vec::new(),
            tail: Tail::None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Listed level widths `k_0, …, k_m`.
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Listed matrices `M_1, …, M_m`.
    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// Index `m` of the last listed level.
    pub fn last_level(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_finite(&self) -> bool {
        self.tail == Tail::None
    }

    /// Deepest level that exists, `None` when the diagram is infinite.
    pub fn max_depth(&self) -> Option<usize> {
        self.is_finite().then_some(self.last_level())
    }

    pub fn check_depth(&self, depth: usize) -> Result<(), DiagramError> {
        match self.max_depth() {
            Some(levels) if depth > levels => {
                Err(DiagramError::DepthBeyondDiagram { depth, levels })
            }
            _ => Ok(()),
        }
    }

    /// Number of vertices at level `n` (levels past `m` repeat `k_m`).
    pub fn width(&self, n: usize) -> usize {
        self.levels[n.min(self.last_level())]
    }

    /// `M_n` for `n ≥ 1`, following the tail past `m`.
    pub fn matrix(&self, n: usize) -> &Matrix {
        assert!(n >= 1, "levels are connected from M_1 on");
        &self.matrices[n.min(self.last_level()) - 1]
    }

    /// `M_to ⋯ M_{from+1}`, the identity when `from == to`.
    pub fn transition(&self, from: usize, to: usize) -> Matrix {
        assert!(from <= to);
        (from + 1..=to).fold(Matrix::identity(self.width(from)), |acc, n| {
            self.matrix(n).mul(&acc)
        })
    }

    /// Image of an integer vector at level `from` in level `to`.
    pub fn push_forward(&self, from: usize, v: &[BigInt], to: usize) -> Vec<BigInt> {
        (from + 1..=to).fold(v.to_vec(), |acc, n| self.matrix(n).apply_signed(&acc))
    }

    /// Vertex counts and matrices for levels `0..=depth`, expanding the tail.
    pub fn prefix(&self, depth: usize) -> Result<Self, DiagramError> {
        self.check_depth(depth)?;
        Ok(Self {
            name: self.name.clone(),
            levels: (0..=depth).map(|n| self.width(n)).collect(),
            matrices: (1..=depth).map(|n| self.matrix(n).clone()).collect(),
            tail: Tail::None,
        })
    }

    pub fn to_raw(&self) -> RawDiagram {
        RawDiagram {
            name: self.name.clone(),
            levels: self.levels.clone(),
            matrices: self.matrices.iter().map(Matrix::to_rows).collect(),
            tail: self.tail,
        }
    }
}

impl fmt::Debug for BratteliDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BratteliDiagram")
            .field("name", &self.name)
            .field("levels", &self.levels)
            .field("matrices", &self.matrices)
            .field("tail", &self.tail)
            .finish()
    }
}

pub(crate) fn check_vector(
    d: &BratteliDiagram,
    stage: usize,
    len: usize,
    depth: usize,
) -> Result<(), DiagramError> {
    d.check_depth(depth)?;
    if stage > depth {
        return Err(DiagramError::StageBeyondDepth { stage, depth });
    }
    let expected = d.width(stage);
    if len != expected {
        return Err(DiagramError::VectorLength {
            stage,
            expected,
            found: len,
        });
    }
    Ok(())
}
