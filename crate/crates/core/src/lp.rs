//! Exact linear programming (two-phase tableau simplex, Bland's rule) and the
//! convexity predicates built on it.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyrep::HRep;
use crate::rat::{dot, Rat, RatVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    pub point: Option<RatVec>,
    pub value: Option<Rat>,
}

enum Outcome {
    Optimal(RatVec),
    Infeasible,
    Unbounded,
}

const DEGENERATE_LIMIT: usize = 64;

struct Tableau {
    rows: Vec<RatVec>,
    objective: RatVec,
    basis: Vec<usize>,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.objective.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut RatVec| {
            if row[c].is_zero() {
                return;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.objective);
        self.basis[r] = c;
    }

    /// Most negative reduced cost enters; after a run of degenerate pivots the
    /// rule switches to Bland's (lowest index in, lowest basic index out
    /// among ratio ties), which cannot cycle. Returns false when unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run > DEGENERATE_LIMIT;
            let enter = if bland {
                (0..allowed).find(|&j| self.objective[j].is_negative())
            } else {
                (0..allowed)
                    .filter(|&j| self.objective[j].is_negative())
                    .min_by(|&x, &y| self.objective[x].cmp(&self.objective[y]).then(x.cmp(&y)))
            };
            let Some(enter) = enter else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, ratio)) => {
                    if ratio.is_zero() {
                        degenerate_run += 1;
                    } else if !bland {
                        degenerate_run = 0;
                    }
                    self.pivot(i, enter)
                }
                None => return false,
            }
        }
    }

    fn price(&mut self, cost: &[Rat]) {
        let width = self.objective.len();
        let mut obj = vec![Rat::zero(); width];
        obj[..cost.len()].clone_from_slice(cost);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost.get(b).cloned().unwrap_or_else(Rat::zero);
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                *o -= &cb * v;
            }
        }
        self.objective = obj;
    }
}

/// Phase one on `a x = b`, `x >= 0` with one artificial per row. Returns the
/// tableau and, when infeasible, `y` with `y . a_j <= 0` for every column and
/// `y . b > 0`.
fn phase_one(a: &[RatVec], b: &[Rat], width: usize) -> (Tableau, Option<RatVec>) {
    let m = a.len();
    let total = width + m;
    let mut rows = Vec::with_capacity(m);
    let mut flips = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        flips.push(flip);
        let mut t: RatVec = Vec::with_capacity(total + 1);
        t.extend(row.iter().map(|v| if flip { -v } else { v.clone() }));
        t.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
        t.push(if flip { -rhs } else { rhs.clone() });
        rows.push(t);
    }
    let mut tab = Tableau {
        rows,
        objective: vec![Rat::zero(); total + 1],
        basis: (width..total).collect(),
    };
    let mut phase1 = vec![Rat::zero(); total];
    for c in phase1[width..].iter_mut() {
        *c = Rat::one();
    }
    tab.price(&phase1);
    tab.run(total);
    let rhs = tab.rhs();
    if !tab.objective[rhs].is_negative() {
        return (tab, None);
    }
    let certificate = flips
        .iter()
        .enumerate()
        .map(|(i, &flip)| {
            let y = Rat::one() - &tab.objective[width + i];
            if flip {
                -y
            } else {
                y
            }
        })
        .collect();
    (tab, Some(certificate))
}

/// Minimizes `cost . x` subject to `a x = b`, `x >= 0`. With no cost the
/// first feasible basic solution is returned.
fn simplex(a: &[RatVec], b: &[Rat], cost: Option<&[Rat]>, width: usize) -> Outcome {
    let (mut tab, certificate) = phase_one(a, b, width);
    if certificate.is_some() {
        return Outcome::Infeasible;
    }
    let rhs = tab.rhs();

    // Drive artificial variables out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= width {
            match (0..width).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    if let Some(cost) = cost {
        tab.price(cost);
        if !tab.run(width) {
            return Outcome::Unbounded;
        }
    }
    let mut x = vec![Rat::zero(); width];
    for (row, &b) in tab.rows.iter().zip(&tab.basis) {
        x[b] = row[rhs].clone();
    }
    Outcome::Optimal(x)
}

/// Optimizes `c . z` over `{z : A z <= b}` with free variables `z = u - v`.
pub fn lp_solve(h: &HRep, c: &[Rat], sense: Sense) -> Result<LpResult> {
    let dim = h.space.dim();
    if c.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: c.len(),
        });
    }
    let m = h.num_rows();
    let width = 2 * dim + m;
    let a: Vec<RatVec> = (0..m)
        .map(|i| {
            let row = h.a.row(i);
            let mut r = Vec::with_capacity(width);
            r.extend(row.iter().cloned());
            r.extend(row.iter().map(|v| -v));
            r.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let sign = match sense {
        Sense::Min => Rat::one(),
        Sense::Max => -Rat::one(),
    };
    let mut cost: RatVec = c.iter().map(|v| v * &sign).collect();
    cost.extend(c.iter().map(|v| -(v * &sign)));
    let outcome = simplex(&a, &h.b, Some(&cost), width);
    Ok(match outcome {
        Outcome::Infeasible => LpResult {
            status: LpStatus::Infeasible,
            point: None,
            value: None,
        },
        Outcome::Unbounded => LpResult {
            status: LpStatus::Unbounded,
            point: None,
            value: None,
        },
        Outcome::Optimal(x) => {
            let z: RatVec = (0..dim).map(|j| &x[j] - &x[dim + j]).collect();
            let value = dot(c, &z);
            LpResult {
                status: LpStatus::Optimal,
                point: Some(z),
                value: Some(value),
            }
        }
    })
}

pub fn is_feasible(h: &HRep) -> bool {
    let zero = vec![Rat::zero(); h.space.dim()];
    lp_solve(h, &zero, Sense::Min)
        .map(|r| r.status != LpStatus::Infeasible)
        .unwrap_or(false)
}

/// A feasible point of `h`, if any.
pub fn feasible_point(h: &HRep) -> Option<RatVec> {
    let zero = vec![Rat::zero(); h.space.dim()];
    lp_solve(h, &zero, Sense::Min).ok()?.point
}

/// Exact minimum and maximum of coordinate `i` over `h`.
pub fn coordinate_bounds(h: &HRep, i: usize) -> Result<(Rat, Rat)> {
    let mut c = vec![Rat::zero(); h.space.dim()];
    c[i] = Rat::one();
    let mut out = Vec::with_capacity(2);
    for sense in [Sense::Min, Sense::Max] {
        let r = lp_solve(h, &c, sense)?;
        match r.status {
            LpStatus::Infeasible => return Err(Error::Infeasible),
            LpStatus::Unbounded => return Err(Error::UnboundedInput),
            LpStatus::Optimal => out.push(r.value.expect("optimal value")),
        }
    }
    let hi = out.pop().expect("max");
    let lo = out.pop().expect("min");
    Ok((lo, hi))
}

pub fn is_bounded(h: &HRep) -> Result<bool> {
    for i in 0..h.space.dim() {
        match coordinate_bounds(h, i) {
            Ok(_) => {}
            Err(Error::UnboundedInput) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// Whether `p` is in `conv(generators) + cone(rays)`.
pub fn point_in_generated(p: &[Rat], generators: &[RatVec], rays: &[RatVec]) -> Result<bool> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let dim = p.len();
    if let Some(bad) = generators.iter().chain(rays).find(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let width = generators.len() + rays.len();
    let mut a: Vec<RatVec> = (0..dim)
        .map(|c| {
            generators
                .iter()
                .chain(rays)
                .map(|g| g[c].clone())
                .collect()
        })
        .collect();
    let mut b: RatVec = p.to_vec();
    let mut sum_row: RatVec = vec![Rat::one(); generators.len()];
    sum_row.extend(std::iter::repeat(Rat::zero()).take(rays.len()));
    a.push(sum_row);
    b.push(Rat::one());
    Ok(matches!(simplex(&a, &b, None, width), Outcome::Optimal(_)))
}

/// `None` when `p ∈ conv(generators)`; otherwise `c` with
/// `c . p > c . g` for every generator `g`.
pub fn hull_separator(p: &[Rat], generators: &[RatVec]) -> Result<Option<RatVec>> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let dim = p.len();
    if let Some(bad) = generators.iter().find(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let mut a: Vec<RatVec> = (0..dim)
        .map(|c| generators.iter().map(|g| g[c].clone()).collect())
        .collect();
    a.push(vec![Rat::one(); generators.len()]);
    let mut b: RatVec = p.to_vec();
    b.push(Rat::one());
    let (_, certificate) = phase_one(&a, &b, generators.len());
    Ok(certificate.map(|mut y| {
        y.pop();
        y
    }))
}

/// Whether `p` is in `conv(generators)`.
pub fn point_in_hull(p: &[Rat], generators: &[RatVec]) -> Result<bool> {
    point_in_generated(p, generators, &[])
}

/// True iff `p` is not a convex combination of the other candidates.
/// Copies of `p` are removed before testing.
pub fn is_extreme_point(p: &[Rat], candidates: &[RatVec]) -> Result<bool> {
    if !candidates.iter().any(|c| c.as_slice() == p) {
        return Err(Error::PNotInCandidates);
    }
    let others: Vec<RatVec> = candidates
        .iter()
        .filter(|c| c.as_slice() != p)
        .cloned()
        .collect();
    if others.is_empty() {
        return Ok(true);
    }
    Ok(!point_in_hull(p, &others)?)
}
