//! Marginal cones and marginal polytopes.
//!
//! Facets of `cone(G)` are found with the double description method applied
//! to the polar cone `{ y : y . g >= 0 for all generators g }`, computed in
//! coordinates of the linear span of the generators so the polar is pointed.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{rank_int, rref, solve_lp, LinearProgram, LpStatus, Sense};
use crate::model::{enumerate_networks, DesignMatrix, IntMatrix, MarginVector, Network};
use crate::rational::Rational;

/// A facet of a polyhedral cone: `normal . g >= 0` on every generator with
/// equality exactly on `tight`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Facet {
    /// Primitive integer functional in ambient coordinates.
    pub normal: Vec<i64>,
    /// Indices of the generators on the facet, ascending.
    pub tight: Vec<usize>,
}

impl Facet {
    pub fn evaluate(&self, v: &[i64]) -> i64 {
        self.normal.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

/// The cone spanned by the columns of an integer matrix.
#[derive(Debug)]
pub struct PolyhedralCone {
    generators: IntMatrix,
    span_dim: usize,
    facets: OnceLock<Vec<Facet>>,
}

impl PolyhedralCone {
    pub fn new(generators: IntMatrix) -> PolyhedralCone {
        let span_dim = rank_int(&generators);
        PolyhedralCone { generators, span_dim, facets: OnceLock::new() }
    }

    pub fn from_design(a: &DesignMatrix) -> PolyhedralCone {
        PolyhedralCone::new(a.entries().clone())
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.span_dim
    }

    pub fn ambient_dimension(&self) -> usize {
        self.generators.nrows()
    }

    /// Facet list, computed on first use.
    pub fn facets(&self) -> Result<&[Facet]> {
        if let Some(f) = self.facets.get() {
            return Ok(f);
        }
        let computed = cone_facets(&self.generators)?;
        Ok(self.facets.get_or_init(|| computed))
    }
}

/// Dimension of the cone spanned by the columns of `generators`.
pub fn cone_dimension(generators: &IntMatrix) -> usize {
    rank_int(generators)
}

/// A small fixed-capacity bitset over constraint indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
struct Bits([u64; 2]);

impl Bits {
    const CAPACITY: usize = 128;

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(self, o: Bits) -> Bits {
        Bits([self.0[0] & o.0[0], self.0[1] & o.0[1]])
    }

    fn count(self) -> u32 {
        self.0[0].count_ones() + self.0[1].count_ones()
    }

    fn contains(self, o: Bits) -> bool {
        self.and(o) == o
    }
}

struct Ray {
    coords: Vec<i128>,
    zeros: Bits,
}

fn gcd_reduce(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn dot_i128(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y).and_then(|p| acc.checked_add(p)).ok_or(Error::Overflow("double description"))
    })
}

/// Picks `rank` linearly independent rows of `m`, greedily in index order.
fn independent_rows(m: &IntMatrix) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for r in 0..m.nrows() {
        let mut trial = basis.clone();
        trial.push(m.row(r).iter().map(|&v| Rational::from_integer(v)).collect());
        let mut reduced = trial.clone();
        if rref(&mut reduced).len() == trial.len() {
            basis = trial;
            chosen.push(r);
        }
    }
    chosen
}

/// Complete, irredundant facet list of the cone spanned by the columns of
/// `generators`, computed inside the linear span of the generators.
///
/// Facet normals are primitive integer vectors supported on a fixed set of
/// linearly independent coordinate rows and oriented so that every generator
/// evaluates to a nonnegative number. The list is sorted by normal.
pub fn cone_facets(generators: &IntMatrix) -> Result<Vec<Facet>> {
    let d = rank_int(generators);
    let ncols = generators.ncols();
    if d == 0 {
        return Ok(Vec::new());
    }
    if ncols > Bits::CAPACITY {
        return Err(Error::Dimension(format!(
            "double description supports at most {} generators, got {ncols}",
            Bits::CAPACITY
        )));
    }
    // Coordinate rows that are injective on the span.
    let rows = independent_rows(generators);
    debug_assert_eq!(rows.len(), d);
    let projected: Vec<Vec<i128>> = (0..ncols)
        .map(|c| rows.iter().map(|&r| generators.get(r, c) as i128).collect())
        .collect();

    // Constraint order: generators sorted lexicographically by ambient column.
    let columns = generators.columns();
    let mut order: Vec<usize> = (0..ncols).filter(|&c| columns[c].iter().any(|&v| v != 0)).collect();
    order.sort_by(|&a, &b| columns[a].cmp(&columns[b]).then(a.cmp(&b)));

    // Initial simplicial cone from the first d independent constraints.
    let mut initial: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for &c in &order {
        if initial.len() == d {
            break;
        }
        let mut trial = basis.clone();
        trial.push(projected[c].iter().map(|&v| Rational::from_integer(v as i64)).collect());
        let mut reduced = trial.clone();
        if rref(&mut reduced).len() == trial.len() {
            basis = trial;
            initial.push(c);
        }
    }
    debug_assert_eq!(initial.len(), d);
    let remaining: Vec<usize> = order.iter().copied().filter(|c| !initial.contains(c)).collect();
    let processing: Vec<usize> = initial.iter().chain(&remaining).copied().collect();
    // Position of each generator in processing order = its bit index.
    let mut bit_of = vec![usize::MAX; ncols];
    for (k, &c) in processing.iter().enumerate() {
        bit_of[c] = k;
    }

    // Rays of {y : M y >= 0} are the columns of M^{-1}.
    let mut aug: Vec<Vec<Rational>> = basis
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| Rational::from_integer((i == j) as i64)));
            r
        })
        .collect();
    rref(&mut aug);
    let mut rays: Vec<Ray> = Vec::with_capacity(d);
    for k in 0..d {
        let col: Vec<Rational> = (0..d).map(|i| aug[i][d + k].clone()).collect();
        let ints = crate::lp::primitive(&col);
        let coords: Vec<i128> = ints
            .iter()
            .map(|v| num_traits::ToPrimitive::to_i128(v).ok_or(Error::Overflow("double description")))
            .collect::<Result<_>>()?;
        // primitive() fixes the sign of the first entry; restore M r_k = +e_k.
        let probe = dot_i128(&projected[initial[k]], &coords)?;
        let coords = if probe < 0 { coords.into_iter().map(|v| -v).collect() } else { coords };
        let mut zeros = Bits::default();
        for (j, _) in initial.iter().enumerate() {
            if j != k {
                zeros.set(j);
            }
        }
        rays.push(Ray { coords, zeros });
    }

    for (step, &c) in remaining.iter().enumerate() {
        let bit = d + step;
        let g = &projected[c];
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zero = Vec::new();
        for (idx, ray) in rays.iter().enumerate() {
            let v = dot_i128(g, &ray.coords)?;
            match v.cmp(&0) {
                Ordering::Greater => pos.push((idx, v)),
                Ordering::Less => neg.push((idx, v)),
                Ordering::Equal => zero.push(idx),
            }
        }
        if neg.is_empty() {
            for &z in &zero {
                rays[z].zeros.set(bit);
            }
            continue;
        }
        let mut created: Vec<Ray> = Vec::new();
        let threshold = d.saturating_sub(2) as u32;
        for &(p, vp) in &pos {
            for &(q, vq) in &neg {
                let common = rays[p].zeros.and(rays[q].zeros);
                if common.count() < threshold {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(r, ray)| r == p || r == q || !ray.zeros.contains(common));
                if !adjacent {
                    continue;
                }
                // vp > 0 > vq: vp * q - vq * p lies on the new hyperplane.
                let mut coords = Vec::with_capacity(d);
                for (a, b) in rays[q].coords.iter().zip(&rays[p].coords) {
                    let v = vp
                        .checked_mul(*a)
                        .and_then(|x| vq.checked_mul(*b).and_then(|y| x.checked_sub(y)))
                        .ok_or(Error::Overflow("double description"))?;
                    coords.push(v);
                }
                gcd_reduce(&mut coords);
                let mut zeros = common;
                zeros.set(bit);
                created.push(Ray { coords, zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(pos.len() + zero.len() + created.len());
        let mut taken: Vec<Option<Ray>> = rays.into_iter().map(Some).collect();
        for &(p, _) in &pos {
            next.push(taken[p].take().expect("ray"));
        }
        for &z in &zero {
            let mut r = taken[z].take().expect("ray");
            r.zeros.set(bit);
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }

    let mut facets: Vec<Facet> = rays
        .into_iter()
        .map(|ray| {
            let mut normal = vec![0i64; generators.nrows()];
            for (&r, &v) in rows.iter().zip(&ray.coords) {
                normal[r] = i64::try_from(v).map_err(|_| Error::Overflow("facet normal"))?;
            }
            let tight = (0..ncols)
                .filter(|&col| {
                    let b = bit_of[col];
                    // Zero generators lie on every facet.
                    b == usize::MAX || {
                        let mut probe = Bits::default();
                        probe.set(b);
                        ray.zeros.contains(probe)
                    }
                })
                .collect();
            Ok(Facet { normal, tight })
        })
        .collect::<Result<_>>()?;
    facets.sort_by(|a, b| a.normal.cmp(&b.normal));
    Ok(facets)
}

/// Whether `t = A x` is a vertex of the marginal polytope.
///
/// `fiber_size`, when known, short-circuits statistics shared by several
/// networks. Otherwise decides, by an exact LP, whether some `c` satisfies
/// `c . a_x(d) >= c . a_k + 1` for every dyad `d` and every other column `k`
/// of that dyad, i.e. whether `x` is the unique maximizer of a linear
/// functional over the Minkowski sum of the dyad simplices.
pub fn is_minkowski_vertex(a: &DesignMatrix, x: &Network, fiber_size: Option<usize>) -> Result<bool> {
    if x.n() != a.n() {
        return Err(Error::Dimension("network and design matrix disagree on n".into()));
    }
    if fiber_size.is_some_and(|s| s > 1) {
        return Ok(false);
    }
    let rows: Vec<usize> = a.non_lambda_rows().collect();
    let m = rows.len();
    let e = a.entries();
    let mut lp = LinearProgram::new(m);
    for j in 0..m {
        lp.set_free(j);
    }
    for (d, chosen) in x.columns().enumerate() {
        for k in a.dyad_columns(d) {
            if k == chosen {
                continue;
            }
            let diff: Vec<Rational> =
                rows.iter().map(|&r| Rational::from_integer(e.get(r, chosen) - e.get(r, k))).collect();
            if diff.iter().all(Rational::is_zero) {
                // Two identical columns in one dyad can never be separated.
                return Ok(false);
            }
            lp.add_inequality(diff, Sense::Ge, Rational::ONE);
        }
    }
    Ok(solve_lp(&lp).status == LpStatus::Optimal)
}

/// The marginal polytope as the convex hull of the observable statistics.
#[derive(Debug, Clone)]
pub struct PointSetPolytope {
    points: Vec<MarginVector>,
}

impl PointSetPolytope {
    /// Deduplicates and sorts `points`.
    pub fn new(mut points: Vec<MarginVector>) -> PointSetPolytope {
        points.sort();
        points.dedup();
        PointSetPolytope { points }
    }

    /// All observable statistics of `a`, by exhaustive enumeration.
    pub fn observable(a: &DesignMatrix, cap: usize) -> Result<PointSetPolytope> {
        let pts = enumerate_networks(a.n(), cap)?
            .map(|x| a.sufficient_statistic(&x))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointSetPolytope::new(pts))
    }

    pub fn points(&self) -> &[MarginVector] {
        &self.points
    }

    /// Whether `t` lies in the relative interior of the hull.
    ///
    /// Solves `max s` subject to `t = sum_k g_k v_k`, `sum_k g_k = 1` and
    /// `g_k >= s >= 0` for every point `v_k`; `t` is relatively interior iff
    /// the optimum is positive. A point outside the hull gives `false`.
    pub fn relative_interior_contains(&self, t: &MarginVector) -> Result<bool> {
        let dim = t.len();
        if let Some(p) = self.points.first() {
            if p.len() != dim {
                return Err(Error::Dimension("statistic length differs from the point set".into()));
            }
        }
        let k = self.points.len();
        // Rows that are constant over the point set only restate the normalization.
        let rows: Vec<usize> = (0..dim)
            .filter(|&r| self.points.iter().any(|p| p.0[r] != self.points[0].0[r]))
            .collect();
        for r in 0..dim {
            if !rows.contains(&r) && self.points.first().is_some_and(|p| p.0[r] != t.0[r]) {
                return Ok(false);
            }
        }
        // Variables: delta_0..delta_{k-1} (= g_k - s), then s.
        let mut lp = LinearProgram::new(k + 1);
        let mut obj = vec![Rational::ZERO; k + 1];
        obj[k] = Rational::ONE;
        lp.maximize(obj);
        for &r in &rows {
            let mut coeffs: Vec<Rational> =
                self.points.iter().map(|p| Rational::from_integer(p.0[r])).collect();
            coeffs.push(Rational::from_integer(self.points.iter().map(|p| p.0[r]).sum()));
            lp.add_equality(coeffs, Rational::from_integer(t.0[r]));
        }
        let mut norm = vec![Rational::ONE; k];
        norm.push(Rational::from_integer(k as i64));
        lp.add_equality(norm, Rational::ONE);
        let out = solve_lp(&lp);
        Ok(out.status == LpStatus::Optimal && out.value.is_positive())
    }

    /// Whether `t` is an extreme point: `t` is not a convex combination of
    /// the other points.
    pub fn is_extreme_point(&self, t: &MarginVector) -> Result<bool> {
        let others: Vec<&MarginVector> = self.points.iter().filter(|p| *p != t).collect();
        if others.len() == self.points.len() {
            return Err(Error::Dimension("point is not in the point set".into()));
        }
        let mut lp = LinearProgram::new(others.len());
        for r in 0..t.len() {
            let coeffs = others.iter().map(|p| Rational::from_integer(p.0[r])).collect();
            lp.add_equality(coeffs, Rational::from_integer(t.0[r]));
        }
        lp.add_equality(vec![Rational::ONE; others.len()], Rational::ONE);
        Ok(solve_lp(&lp).status == LpStatus::Infeasible)
    }
}

/// Splits a facial set into its per-dyad pieces: for each dyad, the columns
/// of `A_{i,j}` that belong to the face containing `t`.
pub fn face_decomposition(a: &DesignMatrix, t: &MarginVector, facial_set: &[usize]) -> Result<Vec<Vec<usize>>> {
    if t.len() != a.nrows() {
        return Err(Error::Dimension("statistic length differs from the design matrix".into()));
    }
    let mut per_dyad: Vec<Vec<usize>> = vec![Vec::new(); a.num_dyads()];
    for &c in facial_set {
        if c >= a.ncols() {
            return Err(Error::Dimension(format!("column index {c} out of range")));
        }
        per_dyad[c / 4].push(c);
    }
    for (d, cols) in per_dyad.iter_mut().enumerate() {
        cols.sort_unstable();
        cols.dedup();
        if cols.is_empty() {
            return Err(Error::Inconsistent(format!("facial set has no column in dyad {}", d + 1)));
        }
        if t.0[d] != 1 {
            return Err(Error::Inconsistent(format!("lambda coordinate of dyad {} is not 1", d + 1)));
        }
    }
    Ok(per_dyad)
}

/// Groups networks by statistic; returns `statistic -> fiber size`.
pub fn fiber_sizes(a: &DesignMatrix, cap: usize) -> Result<HashMap<MarginVector, usize>> {
    let mut map = HashMap::new();
    for x in enumerate_networks(a.n(), cap)? {
        *map.entry(a.sufficient_statistic(&x)?).or_insert(0) += 1;
    }
    Ok(map)
}
