//! Premorphisms between Bratteli diagrams, at the level of multiplicity
//! matrices.
//!
//! A premorphism `B → C` is a level map `f_0 = 0 ≤ f_1 ≤ …` together with
//! edge sets `F_n` from level `n` of `B` to level `f_n` of `C`. Each square
//! commutes up to a source/range-preserving bijection of composed paths,
//! which is the same as equality of the path-count matrices
//! `M(F_{n+1}) · M(E_{n+1}) = M(S_{f_n → f_{n+1}}) · M(F_n)`.

use num_bigint::BigUint;
use thiserror::Error;

use super::{tower_profile, BratteliDiagram, DiagramError, Matrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Premorphism {
    /// `f_0, f_1, …`
    pub level_map: Vec<usize>,
    /// `M(F_0), M(F_1), …`; `M(F_n)` has one row per vertex of the target at
    /// level `f_n` and one column per vertex of the source at level `n`.
    pub matrices: Vec<Matrix>,
}

impl Premorphism {
    /// `f_n = n` and `M(F_n) = I` from a diagram to itself.
    pub fn identity(d: &BratteliDiagram, depth: usize) -> Result<Self, DiagramError> {
        d.check_depth(depth)?;
        Ok(Self {
            level_map: (0..=depth).collect(),
            matrices: (0..=depth).map(|n| Matrix::identity(d.width(n))).collect(),
        })
    }

    /// Number of levels of the source this fragment covers, minus one.
    pub fn depth(&self) -> usize {
        self.level_map.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PremorphismError {
    #[error("premorphism has {found} levels, {needed} needed")]
    TooShort { needed: usize, found: usize },
    #[error("level map and matrix list have different lengths ({maps} vs {matrices})")]
    LengthMismatch { maps: usize, matrices: usize },
    #[error("level map must start at 0 and never decrease (fails at level {level})")]
    LevelMap { level: usize },
    #[error("M(F_0) must be [1]")]
    Root,
    #[error("M(F_{level}) is {found:?}, expected {expected:?}")]
    Shape {
        level: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("M(F_{level}) has zero column {column} (source vertex without an edge)")]
    ZeroColumn { level: usize, column: usize },
    #[error("square between levels {} and {level} does not commute", level - 1)]
    NotCommuting { level: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Checks the premorphism `p : src → tgt` on levels `0..=depth`. Shape
/// problems are reported before any commutativity check; a commutativity
/// failure names the upper level `n + 1` of the first failing square.
pub fn verify_premorphism(
    p: &Premorphism,
    src: &BratteliDiagram,
    tgt: &BratteliDiagram,
    depth: usize,
) -> Result<(), PremorphismError> {
    if p.level_map.len() != p.matrices.len() {
        return Err(PremorphismError::LengthMismatch {
            maps: p.level_map.len(),
            matrices: p.matrices.len(),
        });
    }
    if p.level_map.len() < depth + 1 {
        return Err(PremorphismError::TooShort {
            needed: depth + 1,
            found: p.level_map.len(),
        });
    }
    if p.level_map[0] != 0 {
        return Err(PremorphismError::LevelMap { level: 0 });
    }
    if let Some(level) = (1..=depth).find(|&n| p.level_map[n] < p.level_map[n - 1]) {
        return Err(PremorphismError::LevelMap { level });
    }
    src.check_depth(depth)?;
    tgt.check_depth(p.level_map[depth])?;
    if p.matrices[0] != Matrix::from_rows(vec![vec![BigUint::from(1u32)]]) {
        return Err(PremorphismError::Root);
    }
    for n in 0..=depth {
        let expected = (tgt.width(p.level_map[n]), src.width(n));
        let f = &p.matrices[n];
        if f.shape() != expected {
            return Err(PremorphismError::Shape {
                level: n,
                expected,
                found: f.shape(),
            });
        }
        if let Some(column) = f.zero_column() {
            return Err(PremorphismError::ZeroColumn {
                level: n,
                column: column + 1,
            });
        }
    }
    for n in 0..depth {
        let lhs = p.matrices[n + 1].mul(src.matrix(n + 1));
        let rhs = tgt
            .transition(p.level_map[n], p.level_map[n + 1])
            .mul(&p.matrices[n]);
        if lhs != rhs {
            return Err(PremorphismError::NotCommuting { level: n + 1 });
        }
    }
    Ok(())
}

/// The premorphism from the odometer of `d` into `d`: `f_n = n` and
/// `M(F_n)` is the column of normalized heights `h_{n,i} / h_n`.
pub fn canonical_premorphism(
    d: &BratteliDiagram,
    depth: usize,
) -> Result<Premorphism, DiagramError> {
    let profile = tower_profile(d, depth)?;
    Ok(Premorphism {
        level_map: (0..=depth).collect(),
        matrices: (0..=depth)
            .map(|n| Matrix::column(profile.normalized(n)))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{odometer, Tail};
    use super::*;

    fn example() -> BratteliDiagram {
        BratteliDiagram::from_u64(
            &[1, 2, 2],
            &[&[&[1], &[1]], &[&[2, 1], &[1, 2]]],
            Tail::RepeatLast,
        )
        .unwrap()
    }

    #[test]
    fn canonical_columns() {
        let p = canonical_premorphism(&example(), 4).unwrap();
        for n in 1..=4 {
            assert_eq!(p.matrices[n], Matrix::from_u64_rows(&[&[1], &[1]]));
        }
        let findim = BratteliDiagram::from_u64(&[1, 2], &[&[&[4], &[6]]], Tail::None).unwrap();
        let p = canonical_premorphism(&findim, 1).unwrap();
        assert_eq!(p.matrices[1], Matrix::from_u64_rows(&[&[2], &[3]]));
        let p = canonical_premorphism(&BratteliDiagram::trivial(), 0).unwrap();
        assert_eq!(p.matrices, vec![Matrix::from_u64_rows(&[&[1]])]);
    }

    #[test]
    fn canonical_verifies() {
        let d = example();
        let p = canonical_premorphism(&d, 6).unwrap();
        let o = odometer(&d, 6).unwrap();
        assert_eq!(verify_premorphism(&p, &o, &d, 6), Ok(()));
    }

    #[test]
    fn perturbation_is_caught_at_its_level() {
        let d = example();
        let o = odometer(&d, 5).unwrap();
        for level in 1..=5 {
            let mut p = canonical_premorphism(&d, 5).unwrap();
            *p.matrices[level].get_mut(1, 0) += 1u32;
            assert_eq!(
                verify_premorphism(&p, &o, &d, 5),
                Err(PremorphismError::NotCommuting { level })
            );
        }
    }

    #[test]
    fn identity_verifies() {
        let d = example();
        let p = Premorphism::identity(&d, 5).unwrap();
        assert_eq!(verify_premorphism(&p, &d, &d, 5), Ok(()));
    }

    #[test]
    fn shape_errors_are_distinct() {
        let d = example();
        let o = odometer(&d, 3).unwrap();
        let mut p = canonical_premorphism(&d, 3).unwrap();
        p.matrices[2] = Matrix::from_u64_rows(&[&[1, 1]]);
        assert!(matches!(
            verify_premorphism(&p, &o, &d, 3),
            Err(PremorphismError::Shape { level: 2, .. })
        ));
        let mut p = canonical_premorphism(&d, 3).unwrap();
        p.matrices[2] = Matrix::from_u64_rows(&[&[0], &[0]]);
        assert_eq!(
            verify_premorphism(&p, &o, &d, 3),
            Err(PremorphismError::ZeroColumn {
                level: 2,
                column: 1
            })
        );
        let p = canonical_premorphism(&d, 2).unwrap();
        assert!(matches!(
            verify_premorphism(&p, &o, &d, 3),
            Err(PremorphismError::TooShort { .. })
        ));
        let mut p = canonical_premorphism(&d, 3).unwrap();
        p.level_map[2] = 0;
        assert_eq!(
            verify_premorphism(&p, &o, &d, 3),
            Err(PremorphismError::LevelMap { level: 2 })
        );
    }

    #[test]
    fn level_skipping_premorphism() {
        // f_n = 2n from the telescoped example back into the example
        let d = example();
        let t = super::super::telescope(&d, &[1, 3]).unwrap();
        let p = Premorphism {
            level_map: vec![0, 1, 3, 5],
            matrices: vec![
                Matrix::identity(1),
                Matrix::identity(2),
                Matrix::identity(2),
                Matrix::identity(2),
            ],
        };
        assert_eq!(verify_premorphism(&p, &t, &d, 3), Ok(()));
    }
}
