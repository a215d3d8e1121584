//! Instance generators: the rotated hypercube family, knapsack-style systems
//! and seeded random polytopes, polyhedra and objectives.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::concmin::PiecewiseAffineConcave;
use crate::error::{Error, Result};
use crate::mihull::{mixed_feasible, reduce_to_polytope};
use crate::polyrep::{vrep_to_hrep, HRep, MixedSpace, Polyhedron, VRep};
use crate::rat::{int, rat, Rat, RatMat, RatVec};

/// `b_i = 2^i + 1` for `i = 1..=d+1`.
pub fn example1_default_b(d: usize) -> Vec<i64> {
    (1..=d + 1).map(|i| (1i64 << i) + 1).collect()
}

/// `b_i = 3` for `i = 1..=d+1`.
pub fn remark1_b(d: usize) -> Vec<i64> {
    vec![3; d + 1]
}

/// `A = [[2, -1, …, -1], [0, I_d]]`.
pub fn example1_matrix(d: usize) -> RatMat {
    let mut a = RatMat::identity(d + 1);
    a.set(0, 0, int(2));
    for j in 1..=d {
        a.set(0, j, int(-1));
    }
    a
}

/// `R = A^{-1} = [[1/2, …, 1/2], [0, I_d]]`.
pub fn example1_inverse(d: usize) -> RatMat {
    let mut r = RatMat::identity(d + 1);
    for j in 0..=d {
        r.set(0, j, rat(1, 2));
    }
    r
}

/// The image of the box `∏ [-b_i, b_i]` under `R`, in `Z^1 × R^d` with
/// `d = |b| - 1`: inequalities `-b_i ≤ A_i z ≤ b_i` and the `2^{d+1}` vertices.
pub fn example1(b: &[i64]) -> Result<(HRep, VRep)> {
    if b.is_empty() {
        return Err(Error::BadDimension { n: 1, d: 0 });
    }
    if let Some(bad) = b.iter().find(|&&x| x <= 0 || x % 2 == 0) {
        return Err(Error::InvalidParameter(format!("b entries must be positive and odd, got {bad}")));
    }
    let d = b.len() - 1;
    let space = MixedSpace::new(1, d)?;
    let a = example1_matrix(d);
    let r = example1_inverse(d);
    let mut rows = Vec::with_capacity(2 * b.len());
    for (i, &bi) in b.iter().enumerate() {
        let row = a.row(i).to_vec();
        rows.push((row.iter().map(|x| -x).collect(), int(bi)));
        rows.push((row, int(bi)));
    }
    let h = HRep::from_rows(space, rows)?;
    let points = b
        .iter()
        .map(|&bi| [int(-bi), int(bi)])
        .multi_cartesian_product()
        .map(|corner| r.mul_vec(&corner))
        .collect();
    Ok((h, VRep::polytope(space, points)?))
}

/// `{A z ≤ b, z ≥ 0}` with `m` rows, entries of `A` in `1..=9`, `b` in `0..=20`.
pub fn knapsack(m: usize, n: usize, d: usize, seed: u64) -> Result<HRep> {
    let space = MixedSpace::new(n, d)?;
    let dim = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(m + dim);
    for _ in 0..m {
        let a: RatVec = (0..dim).map(|_| int(rng.gen_range(1..=9))).collect();
        rows.push((a, int(rng.gen_range(0..=20))));
    }
    for j in 0..dim {
        let mut e = vec![int(0); dim];
        e[j] = int(-1);
        rows.push((e, int(0)));
    }
    HRep::from_rows(space, rows)
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> RatVec {
    (0..dim).map(|_| small_rational(rng)).collect()
}

/// Seeded polytope with `n ∈ {1, 2}`, `d ≤ 3`, at most 8 points with
/// coordinates `p/q`, `|p| ≤ 5`, `q ≤ 4`, holding a mixed-integer point.
pub fn random_vrep(seed: u64) -> Result<VRep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=2);
    let d = rng.gen_range(0..=3);
    let space = MixedSpace::new(n, d)?;
    loop {
        let count = rng.gen_range(2..=8);
        let points = (0..count).map(|_| random_point(&mut rng, space.dim())).collect();
        let v = VRep::polytope(space, points)?;
        if mixed_feasible(&vrep_to_hrep(&v)?)? {
            return Ok(v);
        }
    }
}

/// Seeded pure-integer polytope (`d = 0`, `n ≤ 3`, at most 8 points).
pub fn random_pure(seed: u64) -> Result<VRep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let space = MixedSpace::new(n, 0)?;
    let count = rng.gen_range(1..=8);
    let points = (0..count).map(|_| random_point(&mut rng, n)).collect();
    VRep::polytope(space, points)
}

/// Seeded pointed polyhedron with `n = 1`, `d ≤ 1` and one primitive
/// integer ray, holding a mixed-integer point.
pub fn random_unbounded(seed: u64) -> Result<VRep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.gen_range(0..=1);
    let space = MixedSpace::new(1, d)?;
    loop {
        let count = rng.gen_range(1..=4);
        let points: Vec<RatVec> = (0..count).map(|_| random_point(&mut rng, space.dim())).collect();
        let ray: RatVec = (0..space.dim()).map(|_| int(rng.gen_range(-3..=3))).collect();
        if ray.iter().all(|x| *x == int(0)) {
            continue;
        }
        let v = VRep::new(space, points, vec![ray])?;
        match reduce_to_polytope(&Polyhedron::V(v.clone())) {
            Ok(_) => return Ok(v),
            Err(Error::MixedInfeasible) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Seeded concave objective with 1 to 4 affine pieces.
pub fn random_objective(seed: u64, dim: usize) -> Result<PiecewiseAffineConcave> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=4);
    let pieces = (0..count)
        .map(|_| {
            let c = (0..dim).map(|_| int(rng.gen_range(-5..=5))).collect();
            (c, int(rng.gen_range(-10..=10)))
        })
        .collect();
    PiecewiseAffineConcave::new(pieces)
}
