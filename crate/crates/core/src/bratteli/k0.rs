//! Stage-level computations in `K_0` of the limit algebra.
//!
//! An element of the dimension group is represented by an integer vector at
//! some level; two representatives agree when they coincide after pushing
//! forward far enough. The order unit `[1]_0` at level `n` is the height
//! vector. Each query searches stages up to a given depth and reports the
//! first stage with a witness.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{check_vector, mu_supernatural, tower_profile, BratteliDiagram, DiagramError};
use crate::supernatural::SupernaturalNumber;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionVector {
    pub stage: usize,
    pub entries: Vec<BigUint>,
}

/// First stage `s ≤ depth` with `n | h_s`, together with `x = heights / n`,
/// so that `n·x = [1]_0` with `x > 0`.
pub fn k0_unit_divisor(
    d: &BratteliDiagram,
    n: u64,
    depth: usize,
) -> Result<Option<DimensionVector>, DiagramError> {
    if n == 0 {
        return Err(DiagramError::NotPositive(n.to_string()));
    }
    let profile = tower_profile(d, depth)?;
    let n = BigUint::from(n);
    Ok(profile
        .gcds
        .iter()
        .position(|h| (h % &n).is_zero())
        .map(|stage| DimensionVector {
            stage,
            entries: profile.heights[stage].iter().map(|h| h / &n).collect(),
        }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    Yes,
    /// Not visible up to the depth inspected; deeper levels may still allow it.
    NoWithinDepth,
    /// Ruled out by a certified maximal UHF supernatural number.
    NoCertified,
}

impl Embedding {
    pub fn as_str(self) -> &'static str {
        match self {
            Embedding::Yes => "yes",
            Embedding::NoWithinDepth => "no-within-depth",
            Embedding::NoCertified => "no-certified",
        }
    }
}

/// Whether `M_m` embeds unitally, decided by `m | MU`.
pub fn uhf_embeds(
    m: &SupernaturalNumber,
    d: &BratteliDiagram,
    depth: usize,
) -> Result<Embedding, DiagramError> {
    let mu = mu_supernatural(d, depth)?;
    Ok(if m.divides(&mu.value) {
        Embedding::Yes
    } else if mu.exactness.is_certified() {
        Embedding::NoCertified
    } else {
        Embedding::NoWithinDepth
    })
}

/// Searches for `λ` with `g_s = λ · heights_s` at some stage `s ≤ depth`,
/// where `g_s` is `g` pushed from level `stage`. Then `m·g = q·[1]_0` for
/// `λ = q/m`. `None` only means no witness up to `depth`.
pub fn rational_subgroup_member_stage(
    d: &BratteliDiagram,
    stage: usize,
    g: &[BigInt],
    depth: usize,
) -> Result<Option<(BigRational, usize)>, DiagramError> {
    check_vector(d, stage, g.len(), depth)?;
    let profile = tower_profile(d, depth)?;
    let mut current = g.to_vec();
    for s in stage..=depth {
        if s > stage {
            current = d.matrix(s).apply_signed(&current);
        }
        let heights = &profile.heights[s];
        let lambda = BigRational::new(current[0].clone(), BigInt::from(heights[0].clone()));
        let proportional = current.iter().zip(heights).all(|(x, h)| {
            BigRational::from_integer(x.clone()) == &lambda * BigInt::from(h.clone())
        });
        if proportional {
            return Ok(Some((lambda, s)));
        }
    }
    Ok(None)
}

/// `θ(x)` realized at the first stage whose height gcd the denominator of
/// `x` divides: the vector `x · heights_s`.
pub fn theta_eval_stage(
    d: &BratteliDiagram,
    x: &BigRational,
    depth: usize,
) -> Result<(usize, Vec<BigInt>), DiagramError> {
    let profile = tower_profile(d, depth)?;
    let denominator = x.denom().magnitude().clone();
    match profile
        .gcds
        .iter()
        .position(|h| (h % &denominator).is_zero())
    {
        Some(s) => {
            let vector = profile.heights[s]
                .iter()
                .map(|h| BigInt::from(h / &denominator) * x.numer())
                .collect();
            Ok((s, vector))
        }
        None => {
            let mu = mu_supernatural(d, depth)?;
            if mu.exactness.is_certified() && !mu.value.contains(x) {
                Err(DiagramError::OutsideRationalGroup(x.clone()))
            } else {
                Err(DiagramError::DenominatorNotDivisible { denominator, depth })
            }
        }
    }
}

/// First stage `s ≤ depth` where `m` divides every entry of `g` pushed from
/// level `stage`, with the quotient `y` (so `m·y = g` in the limit).
pub fn divide_element(
    d: &BratteliDiagram,
    stage: usize,
    g: &[BigInt],
    m: u64,
    depth: usize,
) -> Result<Option<(usize, Vec<BigInt>)>, DiagramError> {
    if m == 0 {
        return Err(DiagramError::NotPositive(m.to_string()));
    }
    check_vector(d, stage, g.len(), depth)?;
    if g.iter().any(Signed::is_negative) {
        return Err(DiagramError::NegativeEntry);
    }
    let m = BigInt::from_biguint(Sign::Plus, BigUint::from(m));
    let mut current = g.to_vec();
    for s in stage..=depth {
        if s > stage {
            current = d.matrix(s).apply_signed(&current);
        }
        if current.iter().all(|x| x.is_multiple_of(&m)) {
            return Ok(Some((s, current.iter().map(|x| x / &m).collect())));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::super::Tail;
    use super::*;

    fn example() -> BratteliDiagram {
        BratteliDiagram::from_u64(
            &[1, 2, 2],
            &[&[&[1], &[1]], &[&[2, 1], &[1, 2]]],
            Tail::RepeatLast,
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn unit_divisor_examples() {
        let d = example();
        let w = k0_unit_divisor(&d, 9, 8).unwrap().unwrap();
        assert_eq!(w.stage, 3);
        assert_eq!(w.entries, vec![BigUint::from(1u32); 2]);
        for depth in [1, 5, 12] {
            assert_eq!(k0_unit_divisor(&d, 2, depth).unwrap(), None);
        }
        let w = k0_unit_divisor(&d, 1, 4).unwrap().unwrap();
        assert_eq!((w.stage, w.entries), (0, vec![BigUint::from(1u32)]));
        assert!(k0_unit_divisor(&d, 0, 4).is_err());
    }

    #[test]
    fn embedding_examples() {
        let d = example();
        let nine = SupernaturalNumber::from_u64(9).unwrap();
        assert_eq!(uhf_embeds(&nine, &d, 4).unwrap(), Embedding::Yes);
        let six = SupernaturalNumber::from_u64(6).unwrap();
        assert_eq!(uhf_embeds(&six, &d, 4).unwrap(), Embedding::NoCertified);
        assert_eq!(uhf_embeds(&six, &d, 1).unwrap(), Embedding::NoWithinDepth);
        assert_eq!(
            uhf_embeds(&SupernaturalNumber::one(), &d, 0).unwrap(),
            Embedding::Yes
        );
    }

    #[test]
    fn rational_subgroup_examples() {
        let d = example();
        assert_eq!(
            rational_subgroup_member_stage(&d, 1, &ints(&[1, 1]), 6).unwrap(),
            Some((rat(1, 1), 1))
        );
        assert_eq!(
            rational_subgroup_member_stage(&d, 1, &ints(&[1, 0]), 12).unwrap(),
            None
        );
        assert_eq!(
            rational_subgroup_member_stage(&d, 2, &ints(&[-2, -2]), 6).unwrap(),
            Some((rat(-2, 3), 2))
        );
        assert!(matches!(
            rational_subgroup_member_stage(&d, 1, &ints(&[1]), 6),
            Err(DiagramError::VectorLength { .. })
        ));
        assert!(matches!(
            rational_subgroup_member_stage(&d, 7, &ints(&[1, 1]), 6),
            Err(DiagramError::StageBeyondDepth { .. })
        ));
    }

    /// T = [[2,1],[1,2]] fixes (1,-1), so the coordinate difference of a
    /// pushed-forward vector never changes.
    #[test]
    fn difference_invariant_blocks_membership() {
        let d = example();
        let mut v = ints(&[1, 0]);
        for s in 2..=12 {
            v = d.matrix(s).apply_signed(&v);
            assert_eq!(&v[0] - &v[1], BigInt::from(1));
        }
    }

    #[test]
    fn uhf_single_vertex_membership() {
        let d = super::super::uhf_diagram(&SupernaturalNumber::prime_power_omega(2).unwrap(), 3)
            .unwrap();
        assert_eq!(
            rational_subgroup_member_stage(&d, 2, &ints(&[7]), 5).unwrap(),
            Some((rat(7, 4), 2))
        );
    }

    #[test]
    fn theta_examples() {
        let d = example();
        assert_eq!(
            theta_eval_stage(&d, &rat(1, 3), 8).unwrap(),
            (2, ints(&[1, 1]))
        );
        assert_eq!(
            theta_eval_stage(&d, &rat(1, 1), 8).unwrap(),
            (0, ints(&[1]))
        );
        assert_eq!(
            theta_eval_stage(&d, &rat(2, 9), 8).unwrap(),
            (3, ints(&[2, 2]))
        );
        assert_eq!(
            theta_eval_stage(&d, &rat(1, 2), 8),
            Err(DiagramError::OutsideRationalGroup(rat(1, 2)))
        );
        assert!(matches!(
            theta_eval_stage(&d, &rat(1, 27), 2),
            Err(DiagramError::DenominatorNotDivisible { .. })
        ));
    }

    #[test]
    fn divide_examples() {
        let d = example();
        assert_eq!(
            divide_element(&d, 1, &ints(&[1, 1]), 3, 6).unwrap(),
            Some((2, ints(&[1, 1])))
        );
        assert_eq!(divide_element(&d, 1, &ints(&[1, 0]), 3, 12).unwrap(), None);
        assert_eq!(
            divide_element(&d, 2, &ints(&[4, 7]), 1, 6).unwrap(),
            Some((2, ints(&[4, 7])))
        );
        assert!(divide_element(&d, 1, &ints(&[1, 1]), 0, 6).is_err());
        assert_eq!(
            divide_element(&d, 1, &ints(&[-1, 1]), 2, 6),
            Err(DiagramError::NegativeEntry)
        );
    }
}
