//! Tower heights, the odometer of a diagram and the maximal UHF supernatural
//! number.
//!
//! The heights at level `n` are the entries of `M_n ⋯ M_1 · (1)`, i.e. the
//! number of paths from the root to each vertex. Their gcd `h_n` forms a
//! divisibility chain `1 = h_0 | h_1 | …` and the ratios `r_n = h_n / h_{n-1}`
//! are the multiplicities of the odometer, the one-vertex-per-level diagram
//! of the largest UHF algebra embedding unitally.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{BratteliDiagram, DiagramError, Matrix, Tail};
use crate::primes;
use crate::supernatural::{Exponent, SupernaturalNumber};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerProfile {
    /// `heights[n]` is the dimension vector at level `n`.
    pub heights: Vec<Vec<BigUint>>,
    /// `gcds[n] = h_n`.
    pub gcds: Vec<BigUint>,
    /// `ratios[n - 1] = r_n` for `n ≥ 1`.
    pub ratios: Vec<BigUint>,
}

impl TowerProfile {
    pub fn depth(&self) -> usize {
        self.gcds.len() - 1
    }

    /// `r_n` for `1 ≤ n ≤ depth`.
    pub fn ratio(&self, n: usize) -> &BigUint {
        &self.ratios[n - 1]
    }

    /// Heights at level `n` divided by their gcd.
    pub fn normalized(&self, n: usize) -> Vec<BigUint> {
        self.heights[n].iter().map(|h| h / &self.gcds[n]).collect()
    }
}

fn gcd_all(v: &[BigUint]) -> BigUint {
    v.iter().fold(BigUint::zero(), |acc, x| acc.gcd(x))
}

pub fn tower_profile(d: &BratteliDiagram, depth: usize) -> Result<TowerProfile, DiagramError> {
    d.check_depth(depth)?;
    let mut heights = vec![vec![BigUint::one()]];
    let mut gcds = vec![BigUint::one()];
    let mut ratios = Vec::with_capacity(depth);
    for n in 1..=depth {
        let next = d.matrix(n).apply(&heights[n - 1]);
        let g = gcd_all(&next);
        ratios.push(&g / &gcds[n - 1]);
        heights.push(next);
        gcds.push(g);
    }
    Ok(TowerProfile {
        heights,
        gcds,
        ratios,
    })
}

/// The odometer of type `(r_n)`: one vertex per level with `1×1` matrices
/// `[r_1], …, [r_depth]`.
pub fn odometer(d: &BratteliDiagram, depth: usize) -> Result<BratteliDiagram, DiagramError> {
    let profile = tower_profile(d, depth)?;
    let matrices = profile
        .ratios
        .into_iter()
        .map(|r| Matrix::from_rows(vec![vec![r]]))
        .collect();
    Ok(BratteliDiagram::new(
        vec![1; depth + 1],
        matrices,
        Tail::None,
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    /// The value is the supernatural number of the limit algebra.
    Certified,
    /// Only levels up to the given depth were inspected.
    TruncatedAtDepth(usize),
}

impl Exactness {
    pub fn is_certified(self) -> bool {
        self == Exactness::Certified
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuSupernatural {
    /// Best known value: the limit when certified, else `truncation`.
    pub value: SupernaturalNumber,
    /// `r_1 ⋯ r_depth = h_depth` as a supernatural number.
    pub truncation: SupernaturalNumber,
    pub exactness: Exactness,
}

fn product_of(ratios: &[BigUint]) -> SupernaturalNumber {
    let product: BigUint = ratios.iter().product();
    SupernaturalNumber::from_nat(&product).expect("ratios are positive")
}

/// Supernatural number of the maximal UHF subalgebra.
///
/// Certified when the diagram is finite and `depth` reaches its last level,
/// or when, inside a repeating tail, the normalized height vector at some
/// level reappears at a later level within `depth`. In the second case the
/// ratios are periodic from there on, so every prime dividing a ratio in
/// the period gets exponent ω and the remaining primes keep the exponents
/// accumulated before the period starts.
pub fn mu_supernatural(d: &BratteliDiagram, depth: usize) -> Result<MuSupernatural, DiagramError> {
    let profile = tower_profile(d, depth)?;
    let truncation = product_of(&profile.ratios);
    let truncated = |truncation: SupernaturalNumber| MuSupernatural {
        value: truncation.clone(),
        truncation,
        exactness: Exactness::TruncatedAtDepth(depth),
    };
    match d.tail() {
        Tail::None if depth == d.last_level() => Ok(MuSupernatural {
            value: truncation.clone(),
            truncation,
            exactness: Exactness::Certified,
        }),
        Tail::None => Ok(truncated(truncation)),
        Tail::RepeatLast => {
            // levels from m - 1 on are all mapped by the tail matrix
            let start = d.last_level() - 1;
            let mut seen: HashMap<Vec<BigUint>, usize> = HashMap::new();
            for n in start..=depth {
                match seen.entry(profile.normalized(n)) {
                    Entry::Occupied(first) => {
                        let a = *first.get();
                        let prefix = product_of(&profile.ratios[..a]);
                        let cycle = product_of(&profile.ratios[a..n]);
                        let omega = SupernaturalNumber::from_prime_powers(
                            cycle.primes().map(|p| (p.clone(), Exponent::Omega)),
                        )
                        .expect("keys are prime");
                        return Ok(MuSupernatural {
                            value: prefix.mul(&omega),
                            truncation,
                            exactness: Exactness::Certified,
                        });
                    }
                    Entry::Vacant(slot) => {
                        slot.insert(n);
                    }
                }
            }
            Ok(truncated(truncation))
        }
    }
}

/// Single-vertex diagram with matrices `[ℓ_j / ℓ_{j-1}]`, `j = 1..=stages`.
///
/// The tail is marked repeat-last exactly when the ratio sequence has
/// reached its final constant value `∏_{n_p = ω} p`, which happens once
/// every prime of `n` is among `p_1, …, p_{stages-1}` and every finite
/// exponent is below `stages`.
pub fn uhf_diagram(n: &SupernaturalNumber, stages: usize) -> Result<BratteliDiagram, DiagramError> {
    if stages == 0 {
        return Err(DiagramError::NotPositive("0".into()));
    }
    let mut ells = vec![BigUint::one()];
    for j in 1..=stages {
        ells.push(n.ell(j as u64).expect("j ≥ 1"));
    }
    let matrices = ells
        .windows(2)
        .map(|w| Matrix::from_rows(vec![vec![&w[1] / &w[0]]]))
        .collect();
    let known: Vec<BigUint> = primes::first_primes(stages - 1)
        .into_iter()
        .map(BigUint::from)
        .collect();
    let stable = n.iter().all(|(p, e)| {
        known.contains(p)
            && match e {
                Exponent::Finite(k) => k < stages as u64,
                Exponent::Omega => true,
            }
    });
    let tail = if stable { Tail::RepeatLast } else { Tail::None };
    Ok(BratteliDiagram::new(vec![1; stages + 1], matrices, tail)?)
}

/// Composes the matrices between consecutive cut points.
///
/// For a finite diagram the last cut must be its last level, so the limit
/// algebra is unchanged. For a repeating tail the last two cuts must both lie
/// where only the tail matrix acts (`c ≥ m - 1`); the telescoped diagram then
/// repeats the last composed block, which continues the same stride.
pub fn telescope(d: &BratteliDiagram, cuts: &[usize]) -> Result<BratteliDiagram, DiagramError> {
    let invalid = |msg: String| Err(DiagramError::InvalidCuts(msg));
    if cuts.first() == Some(&0) {
        return invalid("cut points start after level 0".into());
    }
    if cuts.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("cut points must be strictly increasing".into());
    }
    let m = d.last_level();
    match (d.tail(), cuts.last()) {
        (Tail::None, None) if m == 0 => {}
        (Tail::None, Some(&last)) if last == m => {}
        (Tail::None, _) => return invalid(format!("the last cut must be the last level {m}")),
        (Tail::RepeatLast, None) => {
            return invalid("a diagram with a repeating tail needs at least one cut".into())
        }
        (Tail::RepeatLast, Some(_)) => {
            let before_last = if cuts.len() >= 2 {
                cuts[cuts.len() - 2]
            } else {
                0
            };
            if before_last + 1 < m {
                return invalid(format!(
                    "the last two cuts must lie at or after level {} where the tail repeats",
                    m - 1
                ));
            }
        }
    }
    let mut levels = vec![1];
    let mut matrices = Vec::with_capacity(cuts.len());
    let mut prev = 0;
    for &c in cuts {
        matrices.push(d.transition(prev, c));
        levels.push(d.width(c));
        prev = c;
    }
    let mut out = BratteliDiagram::new(levels, matrices, d.tail())?;
    if let Some(name) = d.name() {
        out = out.with_name(name);
    }
    Ok(out)
}
