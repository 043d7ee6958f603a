//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use p1geom::lp::{LinearProgram, Sense};
use p1geom::model::{DesignMatrix, MarginVector};
use p1geom::polyhedra::cone_facets;
use p1geom::Rational;

/// A bounded LP in plain integers: `max c.x`, rows `a.x (<=|>=|=) b`,
/// `0 <= x_j <= upper_j`.
#[derive(Debug, Clone)]
pub struct SmallLp {
    pub c: Vec<i64>,
    /// (coefficients, kind, rhs) with kind -1 for `<=`, 0 for `=`, 1 for `>=`.
    pub rows: Vec<(Vec<i64>, i8, i64)>,
    pub upper: Vec<i64>,
}

pub fn random_lp(rng: &mut impl Rng, max_vars: usize, max_rows: usize) -> SmallLp {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(0..=max_rows);
    let c = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
    let upper: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    // Most programs are built around a point of the box so they are feasible.
    let anchor: Option<Vec<i64>> = rng.gen_bool(0.8).then(|| upper.iter().map(|&u| rng.gen_range(0..=u)).collect());
    let rows = (0..m)
        .map(|_| {
            let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            let kind = match rng.gen_range(0..10) {
                0 => 0,
                1..=3 => 1,
                _ => -1,
            };
            let b = match &anchor {
                Some(x) => {
                    let ax: i64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
                    ax - kind as i64 * rng.gen_range(0..=3)
                }
                None if kind == 1 => rng.gen_range(-4..=6),
                None => rng.gen_range(-2..=10),
            };
            (a, kind, b)
        })
        .collect();
    SmallLp { c, rows, upper }
}

impl SmallLp {
    pub fn to_program(&self) -> LinearProgram {
        let r = |v: i64| Rational::from_integer(v);
        let n = self.c.len();
        let mut lp = LinearProgram::new(n);
        lp.maximize(self.c.iter().map(|&v| r(v)).collect());
        for j in 0..n {
            lp.set_bounds(j, Some(Rational::ZERO), Some(r(self.upper[j])));
        }
        for (a, kind, b) in &self.rows {
            let coeffs = a.iter().map(|&v| r(v)).collect();
            match kind {
                0 => lp.add_equality(coeffs, r(*b)),
                -1 => lp.add_inequality(coeffs, Sense::Le, r(*b)),
                _ => lp.add_inequality(coeffs, Sense::Ge, r(*b)),
            };
        }
        lp
    }

    fn feasible(&self, x: &[BigRational]) -> bool {
        let zero = BigRational::zero();
        let bounds = x.iter().zip(&self.upper).all(|(v, &u)| *v >= zero && *v <= big(u));
        bounds
            && self.rows.iter().all(|(a, kind, b)| {
                let lhs: BigRational = a.iter().zip(x).map(|(&ai, xi)| big(ai) * xi).sum();
                match kind {
                    0 => lhs == big(*b),
                    -1 => lhs <= big(*b),
                    _ => lhs >= big(*b),
                }
            })
    }

    /// Optimum by enumerating every basic solution; `None` when infeasible.
    ///
    /// A vertex is fixed by `k` tight rows, `k` free variables and the
    /// remaining variables at a bound.
    pub fn brute_force_optimum(&self) -> Option<BigRational> {
        let n = self.c.len();
        let m = self.rows.len();
        let mut best: Option<BigRational> = None;
        for k in 0..=n.min(m) {
            for rows in subsets(m, k) {
                for free in subsets(n, k) {
                    let square: Vec<Vec<BigRational>> =
                        rows.iter().map(|&r| free.iter().map(|&j| big(self.rows[r].0[j])).collect()).collect();
                    let Some(inv) = invert(square) else { continue };
                    let fixed: Vec<usize> = (0..n).filter(|j| !free.contains(j)).collect();
                    for mask in 0u32..(1 << fixed.len()) {
                        let mut x = vec![BigRational::zero(); n];
                        for (bit, &j) in fixed.iter().enumerate() {
                            if mask >> bit & 1 == 1 {
                                x[j] = big(self.upper[j]);
                            }
                        }
                        let rhs: Vec<BigRational> = rows
                            .iter()
                            .map(|&r| {
                                let (a, _, b) = &self.rows[r];
                                let mut v = big(*b);
                                for &j in &fixed {
                                    v -= big(a[j]) * &x[j];
                                }
                                v
                            })
                            .collect();
                        for (i, &j) in free.iter().enumerate() {
                            x[j] = inv[i].iter().zip(&rhs).map(|(p, q)| p * q).sum();
                        }
                        if self.feasible(&x) {
                            let val: BigRational = self.c.iter().zip(&x).map(|(&c, v)| big(c) * v).sum();
                            if best.as_ref().map_or(true, |b| val > *b) {
                                best = Some(val);
                            }
                        }
                    }
                }
            }
        }
        best
    }
}

pub fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn to_big(r: &Rational) -> BigRational {
    BigRational::new(r.numer(), r.denom())
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Inverse of a square matrix by Gauss-Jordan; `None` when singular.
fn invert(mut m: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let k = m.len();
    for (i, row) in m.iter_mut().enumerate() {
        row.extend((0..k).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
    }
    for col in 0..k {
        let piv = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = BigRational::one() / &m[col][col];
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..2 * k {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[k..].to_vec()).collect())
}

/// Facial set of `t` from the facet list: columns lying on every facet
/// that contains `t`.
pub fn facial_set_from_facets(a: &DesignMatrix, t: &MarginVector) -> Vec<usize> {
    let facets = cone_facets(a.entries()).expect("facets");
    let e = a.entries();
    (0..a.ncols())
        .filter(|&c| {
            let col = e.column(c);
            facets.iter().filter(|f| f.evaluate(t.values()) == 0).all(|f| f.evaluate(&col) == 0)
        })
        .collect()
}

/// Extended MLE by plain gradient ascent with a fixed step on the
/// log-likelihood restricted to `support`. Returns column probabilities.
pub fn gradient_ascent_oracle(a: &DesignMatrix, t: &MarginVector, support: &[usize], iters: usize) -> Vec<f64> {
    let e = a.entries();
    let rows: Vec<usize> = a.non_lambda_rows().collect();
    let q = rows.len();
    let feat = |c: usize| -> Vec<f64> { rows.iter().map(|&r| e.get(r, c) as f64).collect() };
    let mut per_dyad: Vec<Vec<(usize, Vec<f64>)>> = vec![Vec::new(); a.num_dyads()];
    for &c in support {
        per_dyad[c / 4].push((c, feat(c)));
    }
    let target: Vec<f64> = rows.iter().map(|&r| t.values()[r] as f64).collect();
    // Lipschitz bound on the gradient: sum over dyads of max squared feature norm.
    let lip: f64 = per_dyad
        .iter()
        .map(|cols| cols.iter().map(|(_, f)| f.iter().map(|v| v * v).sum::<f64>()).fold(0.0, f64::max))
        .sum::<f64>()
        .max(1.0);
    let step = 1.0 / lip;
    let mut zeta = vec![0.0; q];
    let probs = |zeta: &[f64]| -> Vec<f64> {
        let mut p = vec![0.0; a.ncols()];
        for cols in &per_dyad {
            let s: Vec<f64> = cols.iter().map(|(_, f)| f.iter().zip(zeta).map(|(a, b)| a * b).sum()).collect();
            let mx = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let z: f64 = s.iter().map(|v| (v - mx).exp()).sum();
            for ((c, _), v) in cols.iter().zip(&s) {
                p[*c] = (v - mx).exp() / z;
            }
        }
        p
    };
    for _ in 0..iters {
        let p = probs(&zeta);
        let mut grad = target.clone();
        for cols in &per_dyad {
            for (c, f) in cols {
                for (g, v) in grad.iter_mut().zip(f) {
                    *g -= p[*c] * v;
                }
            }
        }
        if grad.iter().map(|g| g.abs()).fold(0.0, f64::max) < 1e-12 {
            break;
        }
        for (z, g) in zeta.iter_mut().zip(&grad) {
            *z += step * g;
        }
    }
    probs(&zeta)
}
