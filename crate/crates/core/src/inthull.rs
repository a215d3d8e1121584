//! Integer hulls of polytopes.
//!
//! `integer_hull_oracle` enumerates every lattice point in the coordinate
//! bounding box. `integer_hull_from_vertices` triangulates a vertex set,
//! computes the integer hull of each simplex from its inequality description,
//! and filters the union down to extreme points.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::hull::{delaunay_triangulate, hull_vertices, Triangulation};
use crate::lp;
use crate::polyrep::{vrep_to_hrep, HRep, MixedSpace, VRep};
use crate::rat::{encoding_size_vec, int, is_integral_vec, Rat, RatVec};

/// Vertices of an integer hull, all integral, in canonical order. Empty when
/// the polytope holds no lattice point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerHull {
    pub vertices: Vec<RatVec>,
}

/// Integer ranges `[ceil(min), floor(max)]` of the given coordinates over a
/// bounded `h`, or `None` when `h` is empty.
pub(crate) fn integer_box(h: &HRep, coords: usize) -> Result<Option<Vec<(BigInt, BigInt)>>> {
    let mut ranges = Vec::with_capacity(coords);
    for i in 0..coords {
        match lp::coordinate_bounds(h, i) {
            Ok((lo, hi)) => ranges.push((lo.ceil().to_integer(), hi.floor().to_integer())),
            Err(Error::Infeasible) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(ranges))
}

/// Every integer vector in the box, in lexicographic order.
pub(crate) fn box_points(ranges: &[(BigInt, BigInt)]) -> Vec<RatVec> {
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Vec::new();
    }
    if ranges.is_empty() {
        return vec![Vec::new()];
    }
    ranges
        .iter()
        .map(|(lo, hi)| {
            let mut vals = Vec::new();
            let mut v = lo.clone();
            while &v <= hi {
                vals.push(Rat::from_integer(v.clone()));
                v += 1;
            }
            vals
        })
        .multi_cartesian_product()
        .collect()
}

/// All points of `P ∩ Z^n` for a bounded pure-integer `h`.
pub fn lattice_points(h: &HRep) -> Result<Vec<RatVec>> {
    if h.space.d != 0 {
        return Err(Error::NotPureInteger);
    }
    if !lp::is_feasible(h) {
        return Ok(Vec::new());
    }
    if !lp::is_bounded(h)? {
        return Err(Error::UnboundedInput);
    }
    let Some(ranges) = integer_box(h, h.space.n)? else {
        return Ok(Vec::new());
    };
    Ok(box_points(&ranges)
        .into_iter()
        .filter(|z| h.contains(z))
        .collect())
}

/// Drops lattice points that are midpoints of two others at distance one in
/// the max norm; such points are never extreme.
fn drop_lattice_midpoints(points: Vec<RatVec>) -> Vec<RatVec> {
    let Some(dim) = points.first().map(Vec::len) else {
        return points;
    };
    let set: BTreeSet<RatVec> = points.iter().cloned().collect();
    let steps: Vec<Vec<i64>> = (0..dim)
        .map(|_| [-1i64, 0, 1])
        .multi_cartesian_product()
        .filter(|u| u.iter().any(|&x| x != 0))
        .filter(|u| u.iter().find(|&&x| x != 0) == Some(&1))
        .collect();
    points
        .into_iter()
        .filter(|p| {
            !steps.iter().any(|u| {
                let plus: RatVec = p.iter().zip(u).map(|(x, &s)| x + int(s)).collect();
                let minus: RatVec = p.iter().zip(u).map(|(x, &s)| x - int(s)).collect();
                set.contains(&plus) && set.contains(&minus)
            })
        })
        .collect()
}

/// `conv(P ∩ Z^n)` by exhaustive lattice enumeration.
pub fn integer_hull_oracle(h: &HRep) -> Result<IntegerHull> {
    let points = lattice_points(h)?;
    let candidates = drop_lattice_midpoints(points);
    Ok(IntegerHull {
        vertices: hull_vertices(&candidates),
    })
}

/// The triangulation of `conv(vertices)` together with the integer hull of
/// each of its cells.
pub fn cell_integer_hulls(vertices: &[RatVec]) -> Result<(Triangulation, Vec<IntegerHull>)> {
    let n = vertices.first().ok_or(Error::EmptyInput)?.len();
    let space = MixedSpace::new(n, 0)?;
    let tri = delaunay_triangulate(vertices)?;
    let hulls = (0..tri.cells.len())
        .map(|c| {
            let cell = VRep::polytope(space, tri.cell_points(c))?;
            let h = vrep_to_hrep(&cell)?;
            integer_hull_oracle(&h)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((tri, hulls))
}

/// Integer hull of `conv(vertices)` through a Delaunay triangulation: the
/// union of the per-cell integer hulls is a superset of the answer, which an
/// extreme-point filter reduces.
pub fn integer_hull_from_vertices(vertices: &[RatVec]) -> Result<IntegerHull> {
    let first = vertices.first().ok_or(Error::EmptyInput)?;
    if first.is_empty() {
        // Z^0 has a single point
        return Ok(IntegerHull {
            vertices: vec![Vec::new()],
        });
    }
    let (_, hulls) = cell_integer_hulls(vertices)?;
    let pool: Vec<RatVec> = hulls.into_iter().flat_map(|h| h.vertices).collect();
    debug_assert!(pool.iter().all(|p| is_integral_vec(p)));
    Ok(IntegerHull {
        vertices: hull_vertices(&pool),
    })
}

fn pow(base: &Rat, exp: usize) -> Rat {
    num_traits::pow(base.clone(), exp)
}

/// Vertex-count bound for the integer hull of `conv(V)`, `V ⊆ Q^n`:
/// `1/3 · 12^n n^{3n-2} φ^{n-1} |V|^{n+1}`, or for a simplex
/// `2/3 · 24^n n^{3n-2} φ^{n-1}`, with `φ = 4 n^2 ν`.
pub fn intvertex_bound(n: usize, nu: u64, num_vertices: usize, simplex: bool) -> Result<Rat> {
    if n == 0 {
        return Err(Error::InvalidParameter("bound requires n >= 1".into()));
    }
    let nr = int(n as i64);
    let phi = Rat::from_integer(BigInt::from(4u64 * (n as u64) * (n as u64) * nu));
    let common = pow(&nr, 3 * n - 2) * pow(&phi, n - 1);
    Ok(if simplex {
        Rat::new(BigInt::from(2), BigInt::from(3)) * pow(&int(24), n) * common
    } else {
        Rat::new(BigInt::one(), BigInt::from(3))
            * pow(&int(12), n)
            * common
            * pow(&int(num_vertices as i64), n + 1)
    })
}

/// Largest encoding size of a point in the list.
pub fn max_encoding_size(points: &[RatVec]) -> u64 {
    points.iter().map(|p| encoding_size_vec(p)).max().unwrap_or(0)
}

impl IntegerHull {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, vec_from_ints};

    fn pts(raw: &[&[i64]]) -> Vec<RatVec> {
        raw.iter().map(|p| vec_from_ints(p)).collect()
    }

    fn hrep_of(points: Vec<RatVec>) -> HRep {
        let n = points[0].len();
        vrep_to_hrep(&VRep::polytope(MixedSpace::new(n, 0).unwrap(), points).unwrap()).unwrap()
    }

    #[test]
    fn lattice_point_examples() {
        let sq = hrep_of(pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]));
        assert_eq!(
            lattice_points(&sq).unwrap(),
            pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]])
        );
        let thin = HRep::from_rows(
            MixedSpace::new(1, 0).unwrap(),
            vec![(vec![int(1)], rat(2, 3)), (vec![int(-1)], rat(-1, 3))],
        )
        .unwrap();
        assert!(lattice_points(&thin).unwrap().is_empty());
        let tri = hrep_of(vec![
            vec![int(0), int(0)],
            vec![rat(7, 2), int(0)],
            vec![int(0), rat(7, 2)],
        ]);
        let lp = lattice_points(&tri).unwrap();
        let brute = (0..=3)
            .flat_map(|x| (0..=3).map(move |y| (x, y)))
            .filter(|&(x, y)| 2 * (x + y) <= 7)
            .count();
        assert_eq!(lp.len(), brute);
        assert_eq!(brute, 10);
    }

    #[test]
    fn unbounded_lattice_input() {
        let ray = HRep::from_rows(MixedSpace::new(1, 0).unwrap(), vec![(vec![int(-1)], int(0))])
            .unwrap();
        assert_eq!(lattice_points(&ray), Err(Error::UnboundedInput));
        let mixed = HRep::from_rows(MixedSpace::new(1, 1).unwrap(), vec![]).unwrap();
        assert_eq!(lattice_points(&mixed), Err(Error::NotPureInteger));
    }

    #[test]
    fn oracle_examples() {
        let sq = pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert_eq!(integer_hull_oracle(&hrep_of(sq.clone())).unwrap().vertices, sq);
        let tri = hrep_of(vec![
            vec![int(0), int(0)],
            vec![rat(7, 2), int(0)],
            vec![int(0), rat(7, 2)],
        ]);
        assert_eq!(
            integer_hull_oracle(&tri).unwrap().vertices,
            pts(&[&[0, 0], &[0, 3], &[3, 0]])
        );
        let integral = pts(&[&[0, 0], &[1, 3], &[2, 1]]);
        assert_eq!(
            integer_hull_oracle(&hrep_of(integral.clone())).unwrap().vertices,
            integral
        );
    }

    #[test]
    fn from_vertices_examples() {
        let sq = pts(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]]);
        assert_eq!(integer_hull_from_vertices(&sq).unwrap().vertices, sq);
        let seg = vec![vec![rat(1, 2)], vec![rat(5, 2)]];
        assert_eq!(
            integer_hull_from_vertices(&seg).unwrap().vertices,
            pts(&[&[1], &[2]])
        );
        let v = vec![
            vec![rat(1, 3), rat(1, 3)],
            vec![rat(10, 3), rat(1, 3)],
            vec![rat(1, 3), rat(10, 3)],
            vec![rat(10, 3), rat(10, 3)],
        ];
        let oracle = integer_hull_oracle(&hrep_of(v.clone())).unwrap();
        assert_eq!(integer_hull_from_vertices(&v).unwrap(), oracle);
        assert_eq!(oracle.vertices, pts(&[&[1, 1], &[1, 3], &[3, 1], &[3, 3]]));
        assert_eq!(integer_hull_from_vertices(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn lattice_free_simplex() {
        let v = vec![vec![rat(1, 4), rat(1, 4)], vec![rat(3, 4), rat(1, 4)], vec![rat(1, 4), rat(3, 4)]];
        assert!(integer_hull_from_vertices(&v).unwrap().is_empty());
    }

    #[test]
    fn bound_values() {
        assert_eq!(intvertex_bound(1, 3, 2, false).unwrap(), int(16));
        assert_eq!(intvertex_bound(1, 3, 7, true).unwrap(), int(16));
        // phi = 4 * 2^2 * 4 = 64; 1/3 * 144 * 2^4 * 64 * 3^3
        assert_eq!(intvertex_bound(2, 4, 3, false).unwrap(), int(48 * 16 * 64 * 27));
        assert!(intvertex_bound(0, 4, 3, false).is_err());
    }
}
