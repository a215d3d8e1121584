//! Mixed-integer hulls `conv(P ∩ (Z^n × R^d))`.
//!
//! Three routes produce the same vertex set:
//!
//! * [`mih_from_hrep`] stretches the continuous block by an integer `t` chosen
//!   so that every fiber vertex of the stretched polytope is integral, takes
//!   the integer hull there, and shrinks back.
//! * [`mih_from_vrep`] works from a vertex list: every hull vertex lies in the
//!   convex hull of some `n'+1` input points, at an integer-hull vertex of
//!   their projection, as a vertex of the corresponding fiber.
//! * [`mih_oracle`] enumerates every integer `x̂` in the projection and
//!   collects fiber vertices directly.
//!
//! [`reduce_to_polytope`] handles unbounded inputs by cutting them down to a
//! polytope that carries every relevant mixed-integer point.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hull::hull_vertices;
use crate::inthull::{box_points, integer_box, integer_hull_from_vertices, max_encoding_size};
use crate::lp;
use crate::polyrep::{
    affine_dim, fiber_slice, hrep_to_vrep, minkowski_sum_points, vrep_to_hrep, HRep, MixedSpace,
    Polyhedron, VRep,
};
use crate::rat::{
    bareiss_det, canonical, clear_denominators, encoding_size_vec, from_bigint, mat_det,
    mat_inverse, max_abs, mat_solve, rref, Rat, RatMat, RatVec,
};

/// Vertices (and, for unbounded inputs, rays) of a mixed-integer hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedIntegerHull {
    pub space: MixedSpace,
    pub vertices: Vec<RatVec>,
    pub rays: Vec<RatVec>,
}

/// Outcome of the scale-factor computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleReport {
    /// lcm of `|det(A_B)|` over nonsingular bases of the augmented matrix.
    pub t: BigInt,
    /// Nonsingular bases found.
    pub bases_considered: usize,
    pub max_abs_det: BigInt,
    /// Maximum encoding size of a row `(a, b)`.
    pub phi: u64,
    /// Rows of the input system.
    pub rows: usize,
    /// Rows of the augmented system `[A; I 0; -I 0]`.
    pub augmented_rows: usize,
    /// `max_abs_det <= 2^{(n+d) phi}` (Hadamard).
    pub within_hadamard_bound: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Scaling,
    Subsets,
    Oracle,
}

/// One `d`-subset `B` of rows with `A2_B` nonsingular, stored in integer form:
/// `y = adj · u / det` for `u = (b - A1 x̂)_B`, and `w = A2 · adj`.
struct FiberBasis {
    rows: Vec<usize>,
    det: BigInt,
    adj: Vec<Vec<BigInt>>,
    w: Vec<Vec<BigInt>>,
}

/// Vertex enumeration for all fibers `P_x̂` of one integer system at once.
struct FiberEnumerator {
    n: usize,
    a1: Vec<Vec<BigInt>>,
    b: Vec<BigInt>,
    bases: Vec<FiberBasis>,
}

fn to_int(v: &Rat) -> BigInt {
    debug_assert!(v.is_integer());
    v.to_integer()
}

impl FiberEnumerator {
    /// `h` must have integer entries.
    fn new(h: &HRep) -> Self {
        let n = h.space.n;
        let d = h.space.d;
        let m = h.num_rows();
        let a1: Vec<Vec<BigInt>> = (0..m)
            .map(|i| h.a.row(i)[..n].iter().map(to_int).collect())
            .collect();
        let a2: Vec<Vec<BigInt>> = (0..m)
            .map(|i| h.a.row(i)[n..].iter().map(to_int).collect())
            .collect();
        let b: Vec<BigInt> = h.b.iter().map(to_int).collect();
        let subsets: Vec<Vec<usize>> = (0..m).combinations(d).collect();
        let bases = subsets
            .into_par_iter()
            .filter_map(|rows| {
                let sub: Vec<RatVec> = rows
                    .iter()
                    .map(|&i| a2[i].iter().cloned().map(from_bigint).collect())
                    .collect();
                let mat = RatMat::from_rows(d, sub).expect("square");
                let det = mat_det(&mat).expect("square").to_integer();
                if det.is_zero() {
                    return None;
                }
                let inv = mat_inverse(&mat).expect("nonsingular");
                let sign = if det.is_negative() { -BigInt::one() } else { BigInt::one() };
                let det_abs = det.abs();
                let adj: Vec<Vec<BigInt>> = (0..d)
                    .map(|r| {
                        (0..d)
                            .map(|c| (inv.get(r, c) * from_bigint(det.clone())).to_integer() * &sign)
                            .collect()
                    })
                    .collect();
                let w: Vec<Vec<BigInt>> = a2
                    .iter()
                    .map(|row| {
                        (0..d)
                            .map(|c| {
                                row.iter()
                                    .zip(&adj)
                                    .map(|(a, adj_row)| a * &adj_row[c])
                                    .sum()
                            })
                            .collect()
                    })
                    .collect();
                Some(FiberBasis {
                    rows,
                    det: det_abs,
                    adj,
                    w,
                })
            })
            .collect();
        FiberEnumerator { n, a1, b, bases }
    }

    /// Vertices of `P_x̂` as full `(x̂, y)` points.
    fn vertices(&self, x_hat: &[BigInt]) -> Vec<RatVec> {
        let rhs: Vec<BigInt> = self
            .a1
            .iter()
            .zip(&self.b)
            .map(|(row, bi)| bi - row.iter().zip(x_hat).map(|(a, x)| a * x).sum::<BigInt>())
            .collect();
        let prefix: RatVec = x_hat.iter().cloned().map(from_bigint).collect();
        if self.bases.is_empty() {
            // d = 0: the fiber is the point x̂ itself, if feasible
            return if rhs.iter().all(|r| !r.is_negative()) {
                vec![prefix]
            } else {
                Vec::new()
            };
        }
        let mut found: BTreeSet<RatVec> = BTreeSet::new();
        for basis in &self.bases {
            let u: Vec<&BigInt> = basis.rows.iter().map(|&i| &rhs[i]).collect();
            let feasible = basis.w.iter().zip(&rhs).all(|(w_row, r)| {
                let lhs: BigInt = w_row.iter().zip(&u).map(|(w, ui)| w * *ui).sum();
                lhs <= &basis.det * r
            });
            if !feasible {
                continue;
            }
            let mut point = prefix.clone();
            for adj_row in &basis.adj {
                let num: BigInt = adj_row.iter().zip(&u).map(|(a, ui)| a * *ui).sum();
                point.push(Rat::new(num, basis.det.clone()));
            }
            found.insert(point);
        }
        debug_assert!(found.iter().all(|p| p.len() == self.n + self.bases[0].adj.len()));
        found.into_iter().collect()
    }
}

/// Integer points of the bounding box of `proj_x(P)`; empty when `P` is empty.
fn x_candidates(h: &HRep) -> Result<Vec<Vec<BigInt>>> {
    let Some(ranges) = integer_box(h, h.space.n)? else {
        return Ok(Vec::new());
    };
    Ok(box_points(&ranges)
        .into_iter()
        .map(|x| x.iter().map(to_int).collect())
        .collect())
}

/// Union of the vertex sets of the fibers of a bounded integer `h` over the
/// given integer points.
fn fiber_union(h: &HRep, xs: &[Vec<BigInt>]) -> Result<Vec<RatVec>> {
    let enumerator = FiberEnumerator::new(h);
    let found: Vec<Vec<RatVec>> = xs.par_iter().map(|x| enumerator.vertices(x)).collect();
    Ok(canonical(found.into_iter().flatten().collect()))
}

/// Integer-cleared copy of a bounded, feasible H-rep; errors otherwise.
fn bounded_integer_system(h: &HRep) -> Result<HRep> {
    let h = h.integer_cleared();
    match lp::is_bounded(&h) {
        Ok(true) => Ok(h),
        Ok(false) => Err(Error::UnboundedInput),
        Err(Error::Infeasible) => Err(Error::MixedInfeasible),
        Err(e) => Err(e),
    }
}

/// Whether a bounded `h` contains a point with integral `x`-block.
pub fn mixed_feasible(h: &HRep) -> Result<bool> {
    let h = bounded_integer_system(h);
    let h = match h {
        Ok(h) => h,
        Err(Error::MixedInfeasible) => return Ok(false),
        Err(e) => return Err(e),
    };
    for x in x_candidates(&h)? {
        let x: RatVec = x.into_iter().map(from_bigint).collect();
        if lp::is_feasible(&fiber_slice(&h, &x)?) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Ground truth: the extreme points of the union of all fiber vertex sets.
pub fn mih_oracle(p: &Polyhedron) -> Result<MixedIntegerHull> {
    let h = match p {
        Polyhedron::H(h) => h.clone(),
        Polyhedron::V(v) => {
            if !v.is_polytope() {
                return Err(Error::UnboundedInput);
            }
            vrep_to_hrep(v)?
        }
    };
    let h = bounded_integer_system(&h)?;
    let pool = fiber_union(&h, &x_candidates(&h)?)?;
    if pool.is_empty() {
        return Err(Error::MixedInfeasible);
    }
    Ok(MixedIntegerHull {
        space: h.space,
        vertices: hull_vertices(&pool),
        rays: Vec::new(),
    })
}

fn augmented_integer_rows(h: &HRep) -> Vec<Vec<BigInt>> {
    let n = h.space.n;
    let dim = h.space.dim();
    let mut rows: Vec<Vec<BigInt>> = (0..h.num_rows())
        .map(|i| clear_denominators(h.a.row(i)).0)
        .collect();
    for sign in [1i64, -1] {
        for i in 0..n {
            let mut r = vec![BigInt::zero(); dim];
            r[i] = BigInt::from(sign);
            rows.push(r);
        }
    }
    rows
}

fn row_encoding_phi(h: &HRep) -> u64 {
    h.rows()
        .map(|(row, rhs)| {
            let mut full = row.to_vec();
            full.push(rhs.clone());
            encoding_size_vec(&full)
        })
        .max()
        .unwrap_or(0)
}

/// Smallest `t` divisible by `|det(A_B)|` for every nonsingular basis `B` of
/// `[A; I_n 0; -I_n 0]`. With that `t`, every vertex of every fiber of the
/// stretched polytope is integral.
pub fn compute_scale_factor(h: &HRep) -> Result<ScaleReport> {
    let h = bounded_integer_system(h).map_err(|e| match e {
        Error::MixedInfeasible => Error::EmptyPolyhedron,
        e => e,
    })?;
    let dim = h.space.dim();
    let rows = augmented_integer_rows(&h);
    let subsets: Vec<Vec<usize>> = (0..rows.len()).combinations(dim).collect();
    let dets: Vec<BigInt> = subsets
        .par_iter()
        .filter_map(|s| {
            let det = bareiss_det(s.iter().map(|&i| rows[i].clone()).collect());
            (!det.is_zero()).then(|| det.abs())
        })
        .collect();
    let t = dets.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
    let max_abs_det = dets.iter().max().cloned().unwrap_or_else(BigInt::zero);
    let phi = row_encoding_phi(&h);
    let hadamard = BigInt::one() << (dim as u64 * phi);
    Ok(ScaleReport {
        t,
        bases_considered: dets.len(),
        within_hadamard_bound: max_abs_det <= hadamard,
        max_abs_det,
        phi,
        rows: h.num_rows(),
        augmented_rows: rows.len(),
    })
}

/// `{(x, t y) : (x, y) ∈ P}` as the integer system `(A1, A2/t) ≤ b`, rows
/// rescaled to integers.
pub fn scale_polytope(h: &HRep, t: &BigInt) -> Result<HRep> {
    if !t.is_positive() {
        return Err(Error::InvalidParameter("scale factor must be positive".into()));
    }
    let n = h.space.n;
    let t = from_bigint(t.clone());
    let rows = h
        .rows()
        .map(|(row, rhs)| {
            let scaled: RatVec = row
                .iter()
                .enumerate()
                .map(|(j, v)| if j < n { v.clone() } else { v / &t })
                .collect();
            (scaled, rhs.clone())
        })
        .collect();
    Ok(HRep::from_rows(h.space, rows)?.integer_cleared())
}

/// Maps the vertices of the stretched hull back to the original space.
fn unscale(points: &[RatVec], n: usize, t: &BigInt) -> Vec<RatVec> {
    let t = from_bigint(t.clone());
    canonical(
        points
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .map(|(j, v)| if j < n { v.clone() } else { v / &t })
                    .collect()
            })
            .collect(),
    )
}

/// Mixed-integer hull from an inequality description, with the scale report.
pub fn mih_from_hrep_with_report(h: &HRep) -> Result<(MixedIntegerHull, ScaleReport)> {
    let h = bounded_integer_system(h)?;
    let report = compute_scale_factor(&h)?;
    let stretched = scale_polytope(&h, &report.t)?;
    // Every fiber of the stretched polytope has integral vertices, so the
    // union below is exactly the vertex pool of its integer hull.
    // stretching leaves the x-projection unchanged
    let pool = fiber_union(&stretched, &x_candidates(&h)?)?;
    if pool.is_empty() {
        return Err(Error::MixedInfeasible);
    }
    debug_assert!(pool.iter().all(|p| crate::rat::is_integral_vec(p)));
    // extreme points commute with the linear map y -> y/t, so the filter runs
    // on the shrunk pool where the numbers are small
    let vertices = hull_vertices(&unscale(&pool, h.space.n, &report.t));
    Ok((
        MixedIntegerHull {
            space: h.space,
            vertices,
            rays: Vec::new(),
        },
        report,
    ))
}

pub fn mih_from_hrep(h: &HRep) -> Result<MixedIntegerHull> {
    mih_from_hrep_with_report(h).map(|(hull, _)| hull)
}

/// All `(n'+1)`-subsets of the points, `n' = min(n, dim conv(V))`.
pub fn candidate_subsets(v: &VRep) -> Result<Vec<Vec<RatVec>>> {
    if !v.is_polytope() {
        return Err(Error::NonPolytopeInput);
    }
    if v.points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let size = v.space.n.min(affine_dim(&v.points)) + 1;
    Ok(v.points.iter().cloned().combinations(size).collect())
}

/// Vertices of `conv(S) ∩ {x = x̂}`: each vertex of the weight polytope
/// `{λ ≥ 0 : Σλ = 1, Σ λ_i x(v_i) = x̂}` maps to `Σ λ_i v_i`.
pub fn fiber_vertices_in_simplex(n: usize, simplex: &[RatVec], x_hat: &[Rat]) -> Result<Vec<RatVec>> {
    let k = simplex.len();
    if k == 0 {
        return Err(Error::EmptyInput);
    }
    if x_hat.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x_hat.len(),
        });
    }
    // [M | r] with M the x-blocks plus a row of ones
    let mut system: Vec<RatVec> = (0..n)
        .map(|i| {
            let mut row: RatVec = simplex.iter().map(|v| v[i].clone()).collect();
            row.push(x_hat[i].clone());
            row
        })
        .collect();
    let mut ones = vec![Rat::one(); k];
    ones.push(Rat::one());
    system.push(ones);
    let pivots = rref(&mut system);
    if pivots.contains(&k) {
        return Err(Error::FiberEmpty);
    }
    let rank = pivots.len();
    let reduced: Vec<RatVec> = system.into_iter().take(rank).collect();
    let mut found: BTreeSet<RatVec> = BTreeSet::new();
    for cols in (0..k).combinations(rank) {
        let m = RatMat::from_rows(
            rank,
            reduced
                .iter()
                .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
                .collect(),
        )
        .expect("square");
        let rhs: RatVec = reduced.iter().map(|row| row[k].clone()).collect();
        let Ok(weights) = mat_solve(&m, &rhs) else {
            continue;
        };
        if weights.iter().any(Signed::is_negative) {
            continue;
        }
        let dim = simplex[0].len();
        let mut point = vec![Rat::zero(); dim];
        for (&c, w) in cols.iter().zip(&weights) {
            for (p, v) in point.iter_mut().zip(&simplex[c]) {
                *p += w * v;
            }
        }
        found.insert(point);
    }
    if found.is_empty() {
        return Err(Error::FiberEmpty);
    }
    Ok(found.into_iter().collect())
}

/// Candidate pool of the subset algorithm: fiber vertices over integer-hull
/// vertices of every candidate subset's projection. Canonical order.
pub fn subset_candidate_pool(v: &VRep) -> Result<Vec<RatVec>> {
    let n = v.space.n;
    let subsets = candidate_subsets(v)?;
    let per_subset = subsets
        .par_iter()
        .map(|s| {
            let projected: Vec<RatVec> = s.iter().map(|p| p[..n].to_vec()).collect();
            let qi = integer_hull_from_vertices(&projected)?;
            let mut out = Vec::new();
            for x_hat in &qi.vertices {
                match fiber_vertices_in_simplex(n, s, x_hat) {
                    Ok(points) => out.extend(points),
                    Err(Error::FiberEmpty) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(canonical(per_subset.into_iter().flatten().collect()))
}

/// Mixed-integer hull of a polytope given by points.
pub fn mih_from_vrep(v: &VRep) -> Result<MixedIntegerHull> {
    let pool = subset_candidate_pool(v)?;
    if pool.is_empty() {
        return Err(Error::MixedInfeasible);
    }
    Ok(MixedIntegerHull {
        space: v.space,
        vertices: hull_vertices(&pool),
        rays: Vec::new(),
    })
}

/// Whether the rays contain a line (some nonnegative combination vanishes).
fn rays_contain_line(rays: &[RatVec]) -> Result<bool> {
    if rays.is_empty() {
        return Ok(false);
    }
    let zero = vec![Rat::zero(); rays[0].len()];
    lp::point_in_hull(&zero, rays)
}

/// Reduces a polyhedron to a polytope `Q` with
/// `P_MI = conv(Q ∩ (Z^n × R^d)) + cone(rays)`.
pub fn reduce_to_polytope(p: &Polyhedron) -> Result<(Polyhedron, Vec<RatVec>)> {
    let (q, rays) = match p {
        Polyhedron::V(v) => {
            if rays_contain_line(&v.rays)? {
                return Err(Error::ImplicitLineality);
            }
            let k = from_bigint(BigInt::from(v.space.dim()));
            let mut stretched: Vec<RatVec> = v
                .rays
                .iter()
                .map(|w| w.iter().map(|x| x * &k).collect())
                .collect();
            stretched.push(vec![Rat::zero(); v.space.dim()]);
            let sum = minkowski_sum_points(&[v.points.clone(), stretched])?;
            let q = VRep::polytope(v.space, hull_vertices(&sum))?;
            (Polyhedron::V(q), v.rays.clone())
        }
        Polyhedron::H(h) => {
            let inner = match hrep_to_vrep(h) {
                Ok(inner) => inner,
                Err(Error::EmptyPolyhedron) => return Err(Error::MixedInfeasible),
                Err(e) => return Err(e),
            };
            let radius = inner
                .points
                .iter()
                .chain(&inner.rays)
                .map(|z| max_abs(z))
                .max()
                .unwrap_or_else(Rat::zero);
            let outer = radius * from_bigint(BigInt::from(h.space.dim() + 1));
            (Polyhedron::H(h.intersect_box(&outer)), inner.rays)
        }
    };
    let check = match &q {
        Polyhedron::H(h) => h.clone(),
        Polyhedron::V(v) => vrep_to_hrep(v)?,
    };
    if !mixed_feasible(&check)? {
        return Err(Error::MixedInfeasible);
    }
    Ok((q, rays))
}

fn is_bounded_polyhedron(p: &Polyhedron) -> Result<bool> {
    match p {
        Polyhedron::V(v) => Ok(v.is_polytope()),
        Polyhedron::H(h) => match lp::is_bounded(h) {
            Err(Error::Infeasible) => Err(Error::MixedInfeasible),
            other => other,
        },
    }
}

/// Mixed-integer hull of any pointed polyhedron by the chosen method.
/// Unbounded inputs go through [`reduce_to_polytope`] first.
pub fn mixed_integer_hull(
    p: &Polyhedron,
    method: Method,
) -> Result<(MixedIntegerHull, Option<ScaleReport>)> {
    let (q, rays) = if is_bounded_polyhedron(p)? {
        (p.clone(), Vec::new())
    } else {
        reduce_to_polytope(p)?
    };
    let (mut hull, report) = match method {
        Method::Oracle => (mih_oracle(&q)?, None),
        Method::Scaling => {
            let h = match &q {
                Polyhedron::H(h) => h.clone(),
                Polyhedron::V(v) => vrep_to_hrep(v)?,
            };
            let (hull, report) = mih_from_hrep_with_report(&h)?;
            (hull, Some(report))
        }
        Method::Subsets => {
            let v = match &q {
                Polyhedron::V(v) => v.clone(),
                Polyhedron::H(h) => hrep_to_vrep(h)?,
            };
            (mih_from_vrep(&v)?, None)
        }
    };
    if !rays.is_empty() {
        let all = hull.vertices.clone();
        let mut kept = Vec::new();
        for v in &all {
            let others: Vec<RatVec> = all.iter().filter(|o| *o != v).cloned().collect();
            if others.is_empty() || !lp::point_in_generated(v, &others, &rays)? {
                kept.push(v.clone());
            }
        }
        hull.vertices = kept;
        hull.rays = rays;
    }
    Ok((hull, report))
}

fn pow_int(base: u64, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// `2 m^{n+d} (6 (n+d)^2 φ')^{n+d-1}` with `φ' = φ + n φ (m+n)^{n+d}`.
pub fn vertex_bound_hrep(m: usize, n: usize, d: usize, phi: u64) -> Rat {
    let dim = n + d;
    let phi = BigInt::from(phi);
    let phi_prime = &phi + BigInt::from(n) * &phi * pow_int((m + n) as u64, dim);
    let inner = BigInt::from(6 * dim * dim) * phi_prime;
    let bound = BigInt::from(2) * pow_int(m as u64, dim) * num_traits::pow(inner, dim.saturating_sub(1));
    from_bigint(bound)
}

/// `4/3 · 48^n n^{3n-2} φ^{n-1} |V|^{n+1}` with `φ = 4 n^2 ν`; requires `n >= 1`.
pub fn vertex_bound_vrep(n: usize, nu: u64, num_vertices: usize) -> Result<Rat> {
    if n == 0 {
        return Err(Error::InvalidParameter("bound requires n >= 1".into()));
    }
    let phi = BigInt::from(4 * (n as u64) * (n as u64) * nu);
    let value = BigInt::from(4)
        * pow_int(48, n)
        * pow_int(n as u64, 3 * n - 2)
        * num_traits::pow(phi, n - 1)
        * pow_int(num_vertices as u64, n + 1);
    Ok(Rat::new(value, BigInt::from(3)))
}

/// Bound of [`vertex_bound_hrep`] evaluated on an inequality system.
pub fn hrep_bound_for(h: &HRep) -> Rat {
    let h = h.integer_cleared();
    vertex_bound_hrep(h.num_rows(), h.space.n, h.space.d, row_encoding_phi(&h))
}

/// Bound of [`vertex_bound_vrep`] evaluated on a point list.
pub fn vrep_bound_for(v: &VRep) -> Result<Rat> {
    vertex_bound_vrep(v.space.n, max_encoding_size(&v.points), v.points.len())
}
