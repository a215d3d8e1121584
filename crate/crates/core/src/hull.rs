//! Extreme points of finite point sets and Delaunay triangulations obtained
//! from the lower hull of the points lifted onto the paraboloid.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp;
use crate::polyrep::{affine_dim, independent_columns};
use crate::rat::{
    canonical, cofactor_kernel, denominator_lcm, dot, from_bigint, mat_solve, scale, sub, Rat, RatMat,
    RatVec,
};

/// A triangulation of `conv(points)` into simplices of the affine dimension
/// of `points`. Cells hold sorted indices into `points`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub points: Vec<RatVec>,
    pub cells: Vec<Vec<usize>>,
}

impl Triangulation {
    pub fn cell_points(&self, cell: usize) -> Vec<RatVec> {
        self.cells[cell]
            .iter()
            .map(|&i| self.points[i].clone())
            .collect()
    }
}

/// Extreme points of `conv(points)` in canonical order.
///
/// Output-sensitive: each point is tested against the extreme points found so
/// far; a separating direction exposes a new extreme point (the
/// lexicographically smallest maximizer of that direction).
pub fn hull_vertices(points: &[RatVec]) -> Vec<RatVec> {
    let pts = canonical(points.to_vec());
    if pts.len() <= 2 {
        return pts;
    }
    // a common positive scaling keeps the LPs integral at the start
    let all: Vec<Rat> = pts.iter().flatten().cloned().collect();
    let lcm = from_bigint(denominator_lcm(&all));
    let scaled: Vec<RatVec> = pts.iter().map(|p| scale(p, &lcm)).collect();
    let mut ext: Vec<usize> = vec![0];
    let mut ext_pts: Vec<RatVec> = vec![scaled[0].clone()];
    for (i, p) in scaled.iter().enumerate() {
        while !ext.contains(&i) {
            let Some(c) = lp::hull_separator(p, &ext_pts).expect("matching dimensions") else {
                break;
            };
            let values: Vec<Rat> = scaled.iter().map(|q| dot(&c, q)).collect();
            let best = values.iter().max().expect("nonempty");
            let pick = values.iter().position(|v| v == best).expect("a maximizer exists");
            debug_assert!(!ext.contains(&pick));
            ext.push(pick);
            ext_pts.push(scaled[pick].clone());
        }
    }
    ext.sort_unstable();
    ext.into_iter().map(|i| pts[i].clone()).collect()
}

/// `v -> (v, |v|^2)`.
pub fn lift_points(points: &[RatVec]) -> Vec<RatVec> {
    points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.push(squared_norm(p));
            q
        })
        .collect()
}

fn squared_norm(p: &[Rat]) -> Rat {
    dot(p, p)
}

/// Coordinates of each point in a chart of the affine hull: the subset of
/// coordinates on which the hull projects isomorphically.
fn chart(points: &[RatVec]) -> Vec<RatVec> {
    let base = &points[0];
    let diffs: Vec<RatVec> = points.iter().map(|p| sub(p, base)).collect();
    let m = RatMat::from_rows(base.len(), diffs).expect("points share a dimension");
    let cols = independent_columns(&m);
    points
        .iter()
        .map(|p| cols.iter().map(|&c| p[c].clone()).collect())
        .collect()
}

/// Delaunay triangulation via lower-hull facets of the lifted points.
///
/// Lower facets whose supporting hyperplane carries more than `n'+1` points
/// (co-spherical inputs) are triangulated by pulling from their
/// lexicographically smallest vertex.
pub fn delaunay_triangulate(points: &[RatVec]) -> Result<Triangulation> {
    let points = canonical(points.to_vec());
    if points.is_empty() {
        return Err(Error::TooFewPoints);
    }
    let dim = affine_dim(&points);
    if dim == 0 {
        return Ok(Triangulation {
            points,
            cells: vec![vec![0]],
        });
    }
    let coords = chart(&points);
    let heights: Vec<Rat> = points.iter().map(|p| squared_norm(p)).collect();

    let mut cells: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut big_facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for subset in (0..points.len()).combinations(dim + 1) {
        // affine interpolant g(c) = a.c + a0 of the heights on the subset
        let m = RatMat::from_rows(
            dim + 1,
            subset
                .iter()
                .map(|&i| {
                    let mut r = coords[i].clone();
                    r.push(Rat::one());
                    r
                })
                .collect(),
        )
        .expect("square");
        let rhs: RatVec = subset.iter().map(|&i| heights[i].clone()).collect();
        let Ok(coef) = mat_solve(&m, &rhs) else {
            continue;
        };
        let (a, a0) = coef.split_at(dim);
        let residual: Vec<Rat> = coords
            .iter()
            .zip(&heights)
            .map(|(c, h)| h - dot(a, c) - &a0[0])
            .collect();
        if residual.iter().any(Signed::is_negative) {
            continue;
        }
        let on: Vec<usize> = (0..points.len())
            .filter(|&i| residual[i].is_zero())
            .collect();
        if on.len() == dim + 1 {
            cells.insert(on);
        } else {
            big_facets.insert(on);
        }
    }
    for facet in big_facets {
        for cell in pull_triangulate(&facet, &coords, dim) {
            cells.insert(cell);
        }
    }
    Ok(Triangulation {
        points,
        cells: cells.into_iter().collect(),
    })
}

/// Pulling triangulation of `conv(set)` (affine dimension `dim`, all points in
/// convex position) from its smallest index.
fn pull_triangulate(set: &[usize], coords: &[RatVec], dim: usize) -> Vec<Vec<usize>> {
    if set.len() == dim + 1 || dim == 0 {
        return vec![set.to_vec()];
    }
    let apex = set[0];
    let local_pts: Vec<RatVec> = set.iter().map(|&i| coords[i].clone()).collect();
    let local = chart(&local_pts);
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for subset in (0..set.len()).combinations(dim) {
        let base = &local[subset[0]];
        let diffs: Vec<RatVec> = subset[1..].iter().map(|&k| sub(&local[k], base)).collect();
        let normal = cofactor_kernel(&diffs, dim);
        if normal.iter().all(Zero::is_zero) {
            continue;
        }
        let values: Vec<Rat> = local.iter().map(|q| dot(&normal, &sub(q, base))).collect();
        let one_side = values.iter().all(|v| !v.is_positive()) || values.iter().all(|v| !v.is_negative());
        if !one_side {
            continue;
        }
        let facet: Vec<usize> = (0..set.len())
            .filter(|&k| values[k].is_zero())
            .map(|k| set[k])
            .collect();
        facets.insert(facet);
    }
    let mut out = Vec::new();
    for facet in facets {
        if facet.contains(&apex) {
            continue;
        }
        for mut cell in pull_triangulate(&facet, coords, dim - 1) {
            cell.push(apex);
            cell.sort_unstable();
            out.push(cell);
        }
    }
    out
}

/// `n'!` times the `n'`-volume of a simplex measured in the given chart
/// coordinates.
pub fn simplex_volume_times_factorial(vertices: &[RatVec]) -> Rat {
    let base = &vertices[0];
    let diffs: Vec<RatVec> = vertices[1..].iter().map(|v| sub(v, base)).collect();
    let m = RatMat::from_rows(base.len(), diffs).expect("consistent");
    crate::rat::mat_det(&m).expect("square").abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::is_extreme_point;
    use crate::rat::{int, rat, vec_from_ints};
    use rand::{Rng, SeedableRng};

    fn pts(raw: &[&[i64]]) -> Vec<RatVec> {
        raw.iter().map(|p| vec_from_ints(p)).collect()
    }

    #[test]
    fn hull_vertices_examples() {
        let mut sq = pts(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]]);
        sq.push(vec_from_ints(&[1, 1]));
        assert_eq!(hull_vertices(&sq), pts(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]]));
        let same = pts(&[&[3, 1], &[3, 1], &[3, 1]]);
        assert_eq!(hull_vertices(&same), pts(&[&[3, 1]]));
        let collinear = pts(&[&[0, 0], &[1, 1], &[2, 2], &[3, 3]]);
        assert_eq!(hull_vertices(&collinear), pts(&[&[0, 0], &[3, 3]]));
    }

    #[test]
    fn hull_vertices_match_brute_force_in_disc() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let mut points = Vec::new();
            while points.len() < 20 {
                let x = rng.gen_range(-8..=8);
                let y = rng.gen_range(-8..=8);
                if x * x + y * y <= 64 {
                    points.push(vec![rat(x, 2), rat(y, 3)]);
                }
            }
            let brute: Vec<RatVec> = canonical(points.clone())
                .into_iter()
                .filter(|p| is_extreme_point(p, &points).unwrap())
                .collect();
            assert_eq!(hull_vertices(&points), brute);
        }
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_points(&pts(&[&[0, 0]])), pts(&[&[0, 0, 0]]));
        assert_eq!(
            lift_points(&[vec![rat(1, 2), int(1)]]),
            vec![vec![rat(1, 2), int(1), rat(5, 4)]]
        );
        assert_eq!(lift_points(&pts(&[&[-2, 3]])), pts(&[&[-2, 3, 13]]));
    }

    #[test]
    fn triangle_is_one_cell() {
        let t = delaunay_triangulate(&pts(&[&[0, 0], &[4, 1], &[1, 3]])).unwrap();
        assert_eq!(t.cells, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn square_uses_diagonal_through_smallest_point() {
        let t = delaunay_triangulate(&pts(&[&[1, 1], &[0, 1], &[1, 0], &[0, 0]])).unwrap();
        assert_eq!(t.points, pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]));
        assert_eq!(t.cells, vec![vec![0, 1, 3], vec![0, 2, 3]]);
    }

    #[test]
    fn lower_dimensional_inputs() {
        let t = delaunay_triangulate(&pts(&[&[0, 0, 0], &[2, 2, 2], &[1, 1, 1]])).unwrap();
        assert_eq!(t.cells, vec![vec![0, 1], vec![1, 2]]);
        let t = delaunay_triangulate(&pts(&[&[5, 5]])).unwrap();
        assert_eq!(t.cells, vec![vec![0]]);
        assert_eq!(delaunay_triangulate(&[]), Err(Error::TooFewPoints));
        // planar square embedded in 3-space
        let t = delaunay_triangulate(&pts(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]))
            .unwrap();
        assert_eq!(t.cells.len(), 2);
    }

    #[test]
    fn cospherical_cube_is_covered() {
        let mut cube = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    cube.push(vec_from_ints(&[x, y, z]));
                }
            }
        }
        let t = delaunay_triangulate(&cube).unwrap();
        let total: Rat = (0..t.cells.len())
            .map(|c| simplex_volume_times_factorial(&t.cell_points(c)))
            .sum();
        // 3! * volume of the unit cube
        assert_eq!(total, int(6));
        assert_eq!(t, delaunay_triangulate(&cube).unwrap());
    }
}
