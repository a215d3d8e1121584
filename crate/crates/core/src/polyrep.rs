//! Polyhedra over a mixed space, in inequality (`HRep`) and generator
//! (`VRep`) form, with the fixed-dimension conversions between them.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp;
use crate::rat::{
    canonical, clear_denominators, cofactor_kernel, is_integral_vec, mat_rank, mat_solve,
    null_space, primitive_integer, sub, Rat, RatMat, RatVec,
};

/// `n` integer coordinates followed by `d` continuous ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MixedSpace {
    pub n: usize,
    pub d: usize,
}

impl MixedSpace {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n + d == 0 {
            return Err(Error::BadDimension { n, d });
        }
        Ok(MixedSpace { n, d })
    }

    pub fn dim(&self) -> usize {
        self.n + self.d
    }
}

/// `{z : A z <= b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub space: MixedSpace,
    pub a: RatMat,
    pub b: RatVec,
}

impl HRep {
    pub fn new(space: MixedSpace, a: RatMat, b: RatVec) -> Result<Self> {
        if a.cols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: a.cols(),
            });
        }
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                got: b.len(),
            });
        }
        Ok(HRep { space, a, b })
    }

    pub fn from_rows(space: MixedSpace, rows: Vec<(RatVec, Rat)>) -> Result<Self> {
        let (a, b): (Vec<RatVec>, RatVec) = rows.into_iter().unzip();
        HRep::new(space, RatMat::from_rows(space.dim(), a)?, b)
    }

    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[Rat], &Rat)> {
        (0..self.num_rows()).map(move |i| (self.a.row(i), &self.b[i]))
    }

    pub fn contains(&self, z: &[Rat]) -> bool {
        z.len() == self.space.dim()
            && self
                .rows()
                .all(|(row, rhs)| crate::rat::dot(row, z) <= *rhs)
    }

    pub fn with_rows(&self, extra: Vec<(RatVec, Rat)>) -> HRep {
        let mut rows: Vec<(RatVec, Rat)> = self
            .rows()
            .map(|(r, b)| (r.to_vec(), b.clone()))
            .collect();
        rows.extend(extra);
        HRep::from_rows(self.space, rows).expect("rows share the ambient dimension")
    }

    /// Same feasible set with every row `(a, b)` scaled to integer entries.
    pub fn integer_cleared(&self) -> HRep {
        let rows = self
            .rows()
            .map(|(row, rhs)| {
                let mut full = row.to_vec();
                full.push(rhs.clone());
                let (ints, _) = clear_denominators(&full);
                let mut vals: RatVec = ints.into_iter().map(Rat::from_integer).collect();
                let b = vals.pop().expect("row has a right-hand side");
                (vals, b)
            })
            .collect();
        HRep::from_rows(self.space, rows).expect("same shape")
    }

    /// Intersection with the box `[-radius, radius]^{n+d}`.
    pub fn intersect_box(&self, radius: &Rat) -> HRep {
        let dim = self.space.dim();
        let mut extra = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[i] = Rat::one();
            extra.push((e.clone(), radius.clone()));
            e[i] = -Rat::one();
            extra.push((e, radius.clone()));
        }
        self.with_rows(extra)
    }
}

/// `conv(points) + cone(rays)` with integral primitive rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub space: MixedSpace,
    pub points: Vec<RatVec>,
    pub rays: Vec<RatVec>,
}

impl VRep {
    /// Points are deduplicated and sorted; rays are normalized.
    pub fn new(space: MixedSpace, points: Vec<RatVec>, rays: Vec<RatVec>) -> Result<Self> {
        let dim = space.dim();
        if let Some(bad) = points.iter().chain(&rays).find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        Ok(VRep {
            space,
            points: canonical(points),
            rays: normalize_rays(&rays)?,
        })
    }

    pub fn polytope(space: MixedSpace, points: Vec<RatVec>) -> Result<Self> {
        VRep::new(space, points, Vec::new())
    }

    pub fn is_polytope(&self) -> bool {
        self.rays.is_empty()
    }
}

/// Either description of a polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Polyhedron {
    H(HRep),
    V(VRep),
}

impl Polyhedron {
    pub fn space(&self) -> MixedSpace {
        match self {
            Polyhedron::H(h) => h.space,
            Polyhedron::V(v) => v.space,
        }
    }
}

/// Scales every ray to a primitive integer vector and removes duplicates.
pub fn normalize_rays(raw: &[RatVec]) -> Result<Vec<RatVec>> {
    let rays = raw
        .iter()
        .map(|r| primitive_integer(r).ok_or(Error::ZeroRay))
        .collect::<Result<Vec<_>>>()?;
    Ok(canonical(rays))
}

/// Vertices and extreme rays of a pointed polyhedron, by exhaustive basis
/// enumeration.
pub fn hrep_to_vrep(h: &HRep) -> Result<VRep> {
    let dim = h.space.dim();
    if mat_rank(&h.a) < dim {
        return if lp::is_feasible(h) {
            Err(Error::ImplicitLineality)
        } else {
            Err(Error::EmptyPolyhedron)
        };
    }
    let h = h.integer_cleared();
    let points = basic_feasible_points(&h);
    if points.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    let rays = extreme_rays(&h.a);
    VRep::new(h.space, points, rays)
}

fn basic_feasible_points(h: &HRep) -> Vec<RatVec> {
    let dim = h.space.dim();
    let subsets: Vec<Vec<usize>> = (0..h.num_rows()).combinations(dim).collect();
    let found: BTreeSet<RatVec> = subsets
        .par_iter()
        .filter_map(|rows| {
            let m = h.a.select_rows(rows);
            let rhs: RatVec = rows.iter().map(|&i| h.b[i].clone()).collect();
            let z = mat_solve(&m, &rhs).ok()?;
            h.contains(&z).then_some(z)
        })
        .collect();
    found.into_iter().collect()
}

/// Extreme rays of `{z : a z <= 0}`, assuming the cone is pointed.
fn extreme_rays(a: &RatMat) -> Vec<RatVec> {
    let dim = a.cols();
    let mut rays = BTreeSet::new();
    for rows in (0..a.rows()).combinations(dim - 1) {
        let sub: Vec<RatVec> = rows.iter().map(|&i| a.row(i).to_vec()).collect();
        let k = cofactor_kernel(&sub, dim);
        if k.iter().all(Zero::is_zero) {
            continue;
        }
        let neg: RatVec = k.iter().map(|v| -v).collect();
        for dir in [k, neg] {
            if (0..a.rows()).all(|i| !crate::rat::dot(a.row(i), &dir).is_positive()) {
                rays.insert(primitive_integer(&dir).expect("nonzero direction"));
            }
        }
    }
    rays.into_iter().collect()
}

/// Columns of `m` (in increasing order) forming a basis of its column space.
pub(crate) fn independent_columns(m: &RatMat) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..m.cols() {
        let mut trial = chosen.clone();
        trial.push(c);
        let r = mat_rank(&m.select_cols(&trial));
        if r > rank {
            rank = r;
            chosen = trial;
        }
    }
    chosen
}

/// Irredundant inequality description of `conv(points) + cone(rays)`.
///
/// Works on the homogenized cone generated by `(v, 1)` and `(w, 0)`. The
/// equations of its linear hull become paired inequalities; facets are found
/// in a coordinate chart of that hull.
pub fn vrep_to_hrep(v: &VRep) -> Result<HRep> {
    if v.points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = v.space.dim();
    let is_point: Vec<bool> = v
        .points
        .iter()
        .map(|_| true)
        .chain(v.rays.iter().map(|_| false))
        .collect();
    let gens: Vec<RatVec> = v
        .points
        .iter()
        .map(|p| {
            let mut g = p.clone();
            g.push(Rat::one());
            g
        })
        .chain(v.rays.iter().map(|w| {
            let mut g = w.clone();
            g.push(Rat::zero());
            g
        }))
        .collect();
    let g = RatMat::from_rows(dim + 1, gens.clone())?;

    let mut rows: Vec<(RatVec, Rat)> = Vec::new();
    let mut equations: Vec<RatVec> = null_space(&g)
        .iter()
        .map(|e| primitive_integer(e).expect("null space basis vectors are nonzero"))
        .collect();
    equations.sort();
    for e in equations {
        let (ez, et) = e.split_at(dim);
        rows.push((ez.to_vec(), -et[0].clone()));
        rows.push((ez.iter().map(|x| -x).collect(), et[0].clone()));
    }

    let chart = independent_columns(&g);
    let r = chart.len();
    let projected: Vec<RatVec> = gens
        .iter()
        .map(|row| chart.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let mut facets: BTreeSet<RatVec> = BTreeSet::new();
    for subset in (0..gens.len()).combinations(r - 1) {
        let sub: Vec<RatVec> = subset.iter().map(|&i| projected[i].clone()).collect();
        let k = cofactor_kernel(&sub, r);
        if k.iter().all(Zero::is_zero) {
            continue;
        }
        let values: Vec<Rat> = projected.iter().map(|p| crate::rat::dot(p, &k)).collect();
        let normal: RatVec = if values.iter().all(|x| !x.is_positive()) {
            k
        } else if values.iter().all(|x| !x.is_negative()) {
            k.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        // A face touching no point generator is the face at infinity.
        let touches_point = values
            .iter()
            .zip(&is_point)
            .any(|(val, &pt)| pt && val.is_zero());
        if !touches_point {
            continue;
        }
        let mut full = vec![Rat::zero(); dim + 1];
        for (i, &c) in chart.iter().enumerate() {
            full[c] = normal[i].clone();
        }
        if full[..dim].iter().all(Zero::is_zero) {
            continue;
        }
        facets.insert(primitive_integer(&full).expect("nonzero normal"));
    }
    for f in facets {
        let (az, at) = f.split_at(dim);
        rows.push((az.to_vec(), -at[0].clone()));
    }
    HRep::from_rows(v.space, rows)
}

/// Truncates points to their integer block. Requires `n >= 1`.
pub fn project_x(v: &VRep) -> Result<VRep> {
    let n = v.space.n;
    let space = MixedSpace::new(n, 0)?;
    let points = v.points.iter().map(|p| p[..n].to_vec()).collect();
    let rays: Vec<RatVec> = v
        .rays
        .iter()
        .map(|w| w[..n].to_vec())
        .filter(|w| w.iter().any(|x| !x.is_zero()))
        .collect();
    VRep::new(space, points, rays)
}

/// Appends `x <= x_hat` and `-x <= -x_hat` to `h`.
pub fn fiber_slice(h: &HRep, x_hat: &[Rat]) -> Result<HRep> {
    let n = h.space.n;
    if x_hat.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x_hat.len(),
        });
    }
    if !is_integral_vec(x_hat) {
        return Err(Error::InvalidParameter("fiber point must be integral".into()));
    }
    let dim = h.space.dim();
    let mut extra = Vec::with_capacity(2 * n);
    for (i, xi) in x_hat.iter().enumerate() {
        let mut e = vec![Rat::zero(); dim];
        e[i] = Rat::one();
        extra.push((e.clone(), xi.clone()));
        e[i] = -Rat::one();
        extra.push((e, -xi.clone()));
    }
    Ok(h.with_rows(extra))
}

/// All tuple-wise sums of the given point sets, deduplicated.
pub fn minkowski_sum_points(sets: &[Vec<RatVec>]) -> Result<Vec<RatVec>> {
    let (first, rest) = sets.split_first().ok_or(Error::EmptyInput)?;
    if sets.iter().any(Vec::is_empty) {
        return Err(Error::EmptyInput);
    }
    let mut acc = canonical(first.clone());
    for set in rest {
        let mut next = Vec::with_capacity(acc.len() * set.len());
        for a in &acc {
            for b in set {
                if a.len() != b.len() {
                    return Err(Error::DimensionMismatch {
                        expected: a.len(),
                        got: b.len(),
                    });
                }
                next.push(crate::rat::add(a, b));
            }
        }
        acc = canonical(next);
    }
    Ok(acc)
}

/// Dimension of the affine hull of a nonempty point list.
pub fn affine_dim(points: &[RatVec]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    if rest.is_empty() {
        return 0;
    }
    let diffs: Vec<RatVec> = rest.iter().map(|p| sub(p, first)).collect();
    mat_rank(&RatMat::from_rows(first.len(), diffs).expect("points share a dimension"))
}
