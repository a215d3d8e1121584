//! Concave minimization over mixed-integer points: a concave function attains
//! its minimum over `P ∩ (Z^n × R^d)` at a vertex of the mixed-integer hull.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mihull::mih_from_vrep;
use crate::polyrep::VRep;
use crate::rat::{dot, Rat, RatVec};

/// `z ↦ min_k (c_k · z + c0_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseAffineConcave {
    pub pieces: Vec<(RatVec, Rat)>,
}

impl PiecewiseAffineConcave {
    pub fn new(pieces: Vec<(RatVec, Rat)>) -> Result<Self> {
        let dim = pieces.first().ok_or(Error::EmptyInput)?.0.len();
        if let Some((c, _)) = pieces.iter().find(|(c, _)| c.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: c.len(),
            });
        }
        Ok(PiecewiseAffineConcave { pieces })
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].0.len()
    }
}

pub fn evaluate(f: &PiecewiseAffineConcave, z: &[Rat]) -> Result<Rat> {
    if z.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: z.len(),
        });
    }
    Ok(f.pieces
        .iter()
        .map(|(c, c0)| dot(c, z) + c0)
        .min()
        .expect("nonempty pieces"))
}

/// Minimum of `f` over the candidate points: smallest value, then
/// lexicographically smallest point.
pub fn minimize_over_points<F>(points: &[RatVec], f: F) -> Result<(RatVec, Rat)>
where
    F: Fn(&[Rat]) -> Result<Rat> + Sync,
{
    let values = points
        .par_iter()
        .map(|p| f(p).map(|v| (v, p.clone())))
        .collect::<Result<Vec<_>>>()?;
    values
        .into_iter()
        .min()
        .map(|(v, p)| (p, v))
        .ok_or(Error::MixedInfeasible)
}

/// Minimum of a concave callback over `P ∩ (Z^n × R^d)`.
pub fn minimize_over_mih_with<F>(p: &VRep, f: F) -> Result<(RatVec, Rat)>
where
    F: Fn(&[Rat]) -> Result<Rat> + Sync,
{
    let hull = mih_from_vrep(p)?;
    minimize_over_points(&hull.vertices, f)
}

pub fn minimize_over_mih(p: &VRep, f: &PiecewiseAffineConcave) -> Result<(RatVec, Rat)> {
    if f.dim() != p.space.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.space.dim(),
            got: f.dim(),
        });
    }
    minimize_over_mih_with(p, |z| evaluate(f, z))
}
