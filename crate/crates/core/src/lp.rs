//! Exact linear algebra and linear programming over [`Rational`].
//!
//! The solver is a two-phase revised simplex method with a dense explicit
//! basis inverse and Bland's smallest-index rule for both the entering and
//! the leaving variable, so it always terminates and the pivot sequence is a
//! deterministic function of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::model::IntMatrix;
use crate::rational::{dot, Rational};

/// Direction of an inequality constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// `a . x <= b`
    Le,
    /// `a . x >= b`
    Ge,
}

/// A linear program `max c . x` subject to equalities, inequalities and
/// per-variable bounds. New variables default to `x >= 0`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    equalities: Vec<(Vec<Rational>, Rational)>,
    inequalities: Vec<(Vec<Rational>, Sense, Rational)>,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
}

impl LinearProgram {
    /// A program in `num_vars` nonnegative variables with a zero objective.
    pub fn new(num_vars: usize) -> LinearProgram {
        LinearProgram {
            objective: vec![Rational::ZERO; num_vars],
            equalities: Vec::new(),
            inequalities: Vec::new(),
            lower: vec![Some(Rational::ZERO); num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.equalities.len() + self.inequalities.len()
    }

    /// Sets the objective to maximize.
    pub fn maximize(&mut self, c: Vec<Rational>) -> &mut Self {
        assert_eq!(c.len(), self.num_vars(), "objective length");
        self.objective = c;
        self
    }

    pub fn add_equality(&mut self, a: Vec<Rational>, b: Rational) -> &mut Self {
        assert_eq!(a.len(), self.num_vars(), "constraint length");
        self.equalities.push((a, b));
        self
    }

    pub fn add_inequality(&mut self, a: Vec<Rational>, sense: Sense, b: Rational) -> &mut Self {
        assert_eq!(a.len(), self.num_vars(), "constraint length");
        self.inequalities.push((a, sense, b));
        self
    }

    /// Sets the bounds of variable `j`; `None` means unbounded on that side.
    pub fn set_bounds(&mut self, j: usize, lower: Option<Rational>, upper: Option<Rational>) -> &mut Self {
        self.lower[j] = lower;
        self.upper[j] = upper;
        self
    }

    pub fn set_free(&mut self, j: usize) -> &mut Self {
        self.set_bounds(j, None, None)
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn equalities(&self) -> &[(Vec<Rational>, Rational)] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[(Vec<Rational>, Sense, Rational)] {
        &self.inequalities
    }

    pub fn bounds(&self, j: usize) -> (Option<&Rational>, Option<&Rational>) {
        (self.lower[j].as_ref(), self.upper[j].as_ref())
    }

    /// Positively rescales every constraint row by `factor`.
    pub fn rescaled(&self, factor: &Rational) -> LinearProgram {
        assert!(factor.is_positive());
        let scale = |v: &Vec<Rational>| v.iter().map(|a| a * factor).collect::<Vec<_>>();
        LinearProgram {
            objective: self.objective.clone(),
            equalities: self.equalities.iter().map(|(a, b)| (scale(a), b * factor)).collect(),
            inequalities: self
                .inequalities
                .iter()
                .map(|(a, s, b)| (scale(a), *s, b * factor))
                .collect(),
            lower: self.lower.clone(),
            upper: self.upper.clone(),
        }
    }

    /// Whether `x` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let bounds_ok = x.iter().enumerate().all(|(j, v)| {
            self.lower[j].as_ref().is_none_or(|l| v >= l) && self.upper[j].as_ref().is_none_or(|u| v <= u)
        });
        bounds_ok
            && self.equalities.iter().all(|(a, b)| &dot(a, x) == b)
            && self.inequalities.iter().all(|(a, s, b)| {
                let lhs = dot(a, x);
                match s {
                    Sense::Le => &lhs <= b,
                    Sense::Ge => &lhs >= b,
                }
            })
    }

    /// Objective value of the dual program at `dual` (equalities first, then
    /// inequalities), or `None` if `dual` is not dual feasible.
    ///
    /// The reduced costs `c - A^T y` must be absorbed by finite bounds: a
    /// positive reduced cost needs an upper bound, a negative one a lower bound.
    pub fn dual_value(&self, dual: &[Rational]) -> Option<Rational> {
        if dual.len() != self.num_constraints() {
            return None;
        }
        let (y_eq, y_in) = dual.split_at(self.equalities.len());
        for ((_, s, _), y) in self.inequalities.iter().zip(y_in) {
            let ok = match s {
                Sense::Le => !y.is_negative(),
                Sense::Ge => !y.is_positive(),
            };
            if !ok {
                return None;
            }
        }
        let mut value = Rational::ZERO;
        for ((_, b), y) in self.equalities.iter().zip(y_eq) {
            value += &(b * y);
        }
        for ((_, _, b), y) in self.inequalities.iter().zip(y_in) {
            value += &(b * y);
        }
        for j in 0..self.num_vars() {
            let mut d = self.objective[j].clone();
            for ((a, _), y) in self.equalities.iter().zip(y_eq) {
                d -= &(&a[j] * y);
            }
            for ((a, _, _), y) in self.inequalities.iter().zip(y_in) {
                d -= &(&a[j] * y);
            }
            if d.is_positive() {
                value += &(&d * self.upper[j].as_ref()?);
            } else if d.is_negative() {
                value += &(&d * self.lower[j].as_ref()?);
            }
        }
        Some(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of [`solve_lp`].
#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Optimal objective value; zero unless `status` is `Optimal`.
    pub value: Rational,
    /// Primal solution; empty when infeasible.
    pub primal: Vec<Rational>,
    /// For `Optimal`: dual multipliers, equalities first then inequalities.
    /// For `Infeasible`: the phase-one multipliers, which certify infeasibility.
    pub dual: Vec<Rational>,
    /// Number of simplex pivots over both phases.
    pub pivots: usize,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// How an original variable maps onto standard-form columns.
#[derive(Debug, Clone)]
enum VarMap {
    /// `x = shift + x'`
    Shift(Rational, usize),
    /// `x = shift - x'`
    Reflect(Rational, usize),
    /// `x = x+ - x-`
    Split(usize, usize),
}

/// `max c.x` s.t. `A x = b`, `x >= 0`, `b >= 0`, with sparse columns.
struct StandardForm {
    rows: usize,
    cols: Vec<Vec<(usize, Rational)>>,
    cost: Vec<Rational>,
    rhs: Vec<Rational>,
    /// +1 or -1 per original constraint row, after making `rhs >= 0`.
    row_sign: Vec<i32>,
    vars: Vec<VarMap>,
    constant: Rational,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> StandardForm {
        let nv = lp.num_vars();
        let mut cols: Vec<Vec<(usize, Rational)>> = Vec::new();
        let mut cost = Vec::new();
        let mut vars = Vec::with_capacity(nv);
        let mut upper_rows: Vec<(usize, Rational)> = Vec::new();
        let mut constant = Rational::ZERO;
        for j in 0..nv {
            let c = &lp.objective[j];
            match (&lp.lower[j], &lp.upper[j]) {
                (Some(l), u) => {
                    vars.push(VarMap::Shift(l.clone(), cols.len()));
                    if let Some(u) = u {
                        upper_rows.push((cols.len(), u - l));
                    }
                    constant += &(c * l);
                    cols.push(Vec::new());
                    cost.push(c.clone());
                }
                (None, Some(u)) => {
                    vars.push(VarMap::Reflect(u.clone(), cols.len()));
                    constant += &(c * u);
                    cols.push(Vec::new());
                    cost.push(-c);
                }
                (None, None) => {
                    vars.push(VarMap::Split(cols.len(), cols.len() + 1));
                    cols.push(Vec::new());
                    cols.push(Vec::new());
                    cost.push(c.clone());
                    cost.push(-c);
                }
            }
        }

        let n_orig = lp.num_constraints();
        let rows = n_orig + upper_rows.len();
        let mut rhs = Vec::with_capacity(rows);
        let mut row_sign = Vec::with_capacity(rows);

        let constraint_rows = lp
            .equalities
            .iter()
            .map(|(a, b)| (a, None, b))
            .chain(lp.inequalities.iter().map(|(a, s, b)| (a, Some(*s), b)));
        for (r, (a, sense, b)) in constraint_rows.enumerate() {
            // Substitute the variable maps and move constants to the right.
            let mut entries: Vec<(usize, Rational)> = Vec::new();
            let mut b = b.clone();
            for (j, coef) in a.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                match &vars[j] {
                    VarMap::Shift(l, k) => {
                        b -= &(coef * l);
                        entries.push((*k, coef.clone()));
                    }
                    VarMap::Reflect(u, k) => {
                        b -= &(coef * u);
                        entries.push((*k, -coef));
                    }
                    VarMap::Split(p, q) => {
                        entries.push((*p, coef.clone()));
                        entries.push((*q, -coef));
                    }
                }
            }
            let slack = sense.map(|s| match s {
                Sense::Le => Rational::ONE,
                Sense::Ge => -Rational::ONE,
            });
            let sign = if b.is_negative() { -1 } else { 1 };
            let flip = |v: Rational| if sign < 0 { -v } else { v };
            for (k, v) in entries {
                cols[k].push((r, flip(v)));
            }
            if let Some(s) = slack {
                cols.push(vec![(r, flip(s))]);
                cost.push(Rational::ZERO);
            }
            rhs.push(flip(b));
            row_sign.push(sign);
        }
        for (idx, (k, cap)) in upper_rows.into_iter().enumerate() {
            let r = n_orig + idx;
            // x' + s = u - l; u >= l is required for feasibility.
            let sign = if cap.is_negative() { -1 } else { 1 };
            let v = if sign < 0 { -Rational::ONE } else { Rational::ONE };
            cols[k].push((r, v.clone()));
            cols.push(vec![(r, v)]);
            cost.push(Rational::ZERO);
            rhs.push(if sign < 0 { -cap } else { cap });
            row_sign.push(sign);
        }
        StandardForm { rows, cols, cost, rhs, row_sign, vars, constant }
    }
}

/// Revised simplex state. Columns `0..ncols` are structural, `ncols..ncols+rows`
/// are artificial (the identity).
struct Simplex<'a> {
    sf: &'a StandardForm,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    pivots: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl<'a> Simplex<'a> {
    fn new(sf: &'a StandardForm) -> Simplex<'a> {
        let m = sf.rows;
        let ncols = sf.cols.len();
        let mut binv = vec![vec![Rational::ZERO; m]; m];
        for (i, row) in binv.iter_mut().enumerate() {
            row[i] = Rational::ONE;
        }
        let mut is_basic = vec![false; ncols + m];
        for flag in is_basic.iter_mut().skip(ncols) {
            *flag = true;
        }
        Simplex {
            sf,
            basis: (ncols..ncols + m).collect(),
            is_basic,
            binv,
            xb: sf.rhs.clone(),
            pivots: 0,
        }
    }

    fn ncols(&self) -> usize {
        self.sf.cols.len()
    }

    /// Entries of column `j` (artificial columns are unit vectors).
    fn column_entries(&self, j: usize) -> std::borrow::Cow<'a, [(usize, Rational)]> {
        if j < self.ncols() {
            std::borrow::Cow::Borrowed(&self.sf.cols[j][..])
        } else {
            std::borrow::Cow::Owned(vec![(j - self.ncols(), Rational::ONE)])
        }
    }

    fn multipliers(&self, cost: &dyn Fn(usize) -> Rational) -> Vec<Rational> {
        let m = self.sf.rows;
        let mut y = vec![Rational::ZERO; m];
        for (i, &bj) in self.basis.iter().enumerate() {
            let cb = cost(bj);
            if cb.is_zero() {
                continue;
            }
            for (k, yk) in y.iter_mut().enumerate() {
                let b = &self.binv[i][k];
                if !b.is_zero() {
                    *yk += &(&cb * b);
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, cj: &Rational, y: &[Rational]) -> Rational {
        let mut d = cj.clone();
        for (r, v) in self.column_entries(j).iter() {
            if !y[*r].is_zero() {
                d -= &(&y[*r] * v);
            }
        }
        d
    }

    fn transformed_column(&self, j: usize) -> Vec<Rational> {
        let entries = self.column_entries(j);
        self.binv
            .iter()
            .map(|row| {
                let mut acc = Rational::ZERO;
                for (r, v) in entries.iter() {
                    if !row[*r].is_zero() {
                        acc += &(&row[*r] * v);
                    }
                }
                acc
            })
            .collect()
    }

    fn pivot(&mut self, p: usize, entering: usize, alpha: &[Rational]) {
        let inv = alpha[p].recip();
        for v in self.binv[p].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.xb[p] *= &inv;
        let prow = self.binv[p].clone();
        let px = self.xb[p].clone();
        for i in 0..self.sf.rows {
            if i == p || alpha[i].is_zero() {
                continue;
            }
            let f = &alpha[i];
            for (k, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    let t = f * pv;
                    self.binv[i][k] -= &t;
                }
            }
            let t = f * &px;
            self.xb[i] -= &t;
        }
        let leaving = self.basis[p];
        self.is_basic[leaving] = false;
        self.is_basic[entering] = true;
        self.basis[p] = entering;
        self.pivots += 1;
    }

    /// Runs Bland's rule until optimality or unboundedness. Columns for which
    /// `allowed` is false never enter.
    fn run(&mut self, cost: &dyn Fn(usize) -> Rational, allowed: &dyn Fn(usize) -> bool) -> PhaseEnd {
        let total = self.ncols() + self.sf.rows;
        loop {
            let y = self.multipliers(cost);
            let entering = (0..total)
                .filter(|&j| !self.is_basic[j] && allowed(j))
                .find(|&j| self.reduced_cost(j, &cost(j), &y).is_positive());
            let Some(q) = entering else {
                return PhaseEnd::Optimal;
            };
            let alpha = self.transformed_column(q);
            let mut leave: Option<(usize, Rational)> = None;
            for (i, a) in alpha.iter().enumerate() {
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.xb[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((p, _)) = leave else {
                return PhaseEnd::Unbounded;
            };
            self.pivot(p, q, &alpha);
        }
    }

    /// Pivots zero-level artificials out of the basis where possible.
    fn expel_artificials(&mut self) {
        let ncols = self.ncols();
        for p in 0..self.sf.rows {
            if self.basis[p] < ncols {
                continue;
            }
            let row = self.binv[p].clone();
            let found = (0..ncols).filter(|&j| !self.is_basic[j]).find(|&j| {
                let v: Rational = self.sf.cols[j]
                    .iter()
                    .filter(|(r, _)| !row[*r].is_zero())
                    .map(|(r, v)| &row[*r] * v)
                    .sum();
                !v.is_zero()
            });
            if let Some(j) = found {
                let alpha = self.transformed_column(j);
                self.pivot(p, j, &alpha);
            }
        }
    }

    fn structural_values(&self) -> Vec<Rational> {
        let mut x = vec![Rational::ZERO; self.ncols()];
        for (i, &bj) in self.basis.iter().enumerate() {
            if bj < self.ncols() {
                x[bj] = self.xb[i].clone();
            }
        }
        x
    }
}

/// Solves `lp` exactly.
pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    let sf = StandardForm::build(lp);
    let ncols = sf.cols.len();
    let n_orig = lp.num_constraints();
    let mut sx = Simplex::new(&sf);

    // Phase one: maximize minus the sum of artificials.
    let phase1_cost = |j: usize| if j >= ncols { -Rational::ONE } else { Rational::ZERO };
    let structural = |j: usize| j < ncols;
    sx.run(&phase1_cost, &structural);
    let infeasibility: Rational = sx
        .basis
        .iter()
        .zip(&sx.xb)
        .filter(|(&b, _)| b >= ncols)
        .map(|(_, v)| v.clone())
        .sum();
    if infeasibility.is_positive() {
        let y = sx.multipliers(&phase1_cost);
        let dual = (0..n_orig)
            .map(|r| if sf.row_sign[r] < 0 { -&y[r] } else { y[r].clone() })
            .collect();
        return LpOutcome {
            status: LpStatus::Infeasible,
            value: Rational::ZERO,
            primal: Vec::new(),
            dual,
            pivots: sx.pivots,
        };
    }
    sx.expel_artificials();

    let phase2_cost = |j: usize| if j < ncols { sf.cost[j].clone() } else { Rational::ZERO };
    let end = sx.run(&phase2_cost, &structural);
    let xs = sx.structural_values();
    let primal: Vec<Rational> = sf
        .vars
        .iter()
        .map(|v| match v {
            VarMap::Shift(l, k) => l + &xs[*k],
            VarMap::Reflect(u, k) => u - &xs[*k],
            VarMap::Split(p, q) => &xs[*p] - &xs[*q],
        })
        .collect();
    match end {
        PhaseEnd::Unbounded => LpOutcome {
            status: LpStatus::Unbounded,
            value: Rational::ZERO,
            primal,
            dual: Vec::new(),
            pivots: sx.pivots,
        },
        PhaseEnd::Optimal => {
            let y = sx.multipliers(&phase2_cost);
            let dual = (0..n_orig)
                .map(|r| if sf.row_sign[r] < 0 { -&y[r] } else { y[r].clone() })
                .collect();
            let value = &sf.constant
                + &sf
                    .cost
                    .iter()
                    .zip(&xs)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, x)| c * x)
                    .sum::<Rational>();
            LpOutcome { status: LpStatus::Optimal, value, primal, dual, pivots: sx.pivots }
        }
    }
}

/// Converts an integer matrix to rational rows.
pub fn to_rational_rows(m: &IntMatrix) -> Vec<Vec<Rational>> {
    (0..m.nrows())
        .map(|r| m.row(r).iter().map(|&v| Rational::from_integer(v)).collect())
        .collect()
}

/// Clears denominators row-wise, giving integer rows with the same row space.
fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::from(1), |acc, v| acc.lcm(&v.denom()));
            row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
        })
        .collect()
}

/// Exact rank by fraction-free (Bareiss) elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = integer_rows(rows);
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for k in c + 1..ncols {
                let v = (&m[r][c] * &m[i][k] - &m[i][c] * &m[r][k]) / &prev;
                m[i][k] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

pub fn rank_int(m: &IntMatrix) -> usize {
    rank(&to_rational_rows(m))
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &(&f * pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(&x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(1, |x| if x.is_negative() { -1 } else { 1 });
    ints.into_iter().map(|x| x / &g * sign).collect()
}

/// Basis of the right null space `{ v : M v = 0 }`, as primitive integer
/// vectors. Empty iff `M` has full column rank.
pub fn kernel_basis(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::ZERO; ncols];
            v[f] = Rational::ONE;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&m[r][f];
            }
            primitive(&v).into_iter().map(Rational::from).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn trivial_max() {
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![q(1)]).add_inequality(vec![q(1)], Sense::Le, q(1));
        let out = solve_lp(&lp);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, q(1));
        assert_eq!(out.primal, vec![q(1)]);
        assert_eq!(lp.dual_value(&out.dual), Some(q(1)));
    }

    #[test]
    fn infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.add_inequality(vec![q(1)], Sense::Ge, q(1)).add_inequality(vec![q(1)], Sense::Le, q(0));
        let out = solve_lp(&lp);
        assert_eq!(out.status, LpStatus::Infeasible);
        assert_eq!(out.dual.len(), 2);
    }

    #[test]
    fn unbounded() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![q(1), q(0)]).add_inequality(vec![q(1), q(-1)], Sense::Le, q(3));
        assert_eq!(solve_lp(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_bounded_variables() {
        // max x - y, x in [-2, 5], y free, y >= -3, x + y = 1
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![q(1), q(-1)])
            .set_bounds(0, Some(q(-2)), Some(q(5)))
            .set_free(1)
            .add_inequality(vec![q(0), q(1)], Sense::Ge, q(-3))
            .add_equality(vec![q(1), q(1)], q(1));
        let out = solve_lp(&lp);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.primal, vec![q(4), q(-3)]);
        assert_eq!(out.value, q(7));
        assert_eq!(lp.dual_value(&out.dual), Some(q(7)));
    }

    #[test]
    fn upper_only_bound() {
        // min x (max -x) with x <= 2, x >= -7 via constraint
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![q(-1)])
            .set_bounds(0, None, Some(q(2)))
            .add_inequality(vec![q(1)], Sense::Ge, q(-7));
        let out = solve_lp(&lp);
        assert_eq!(out.primal, vec![q(-7)]);
        assert_eq!(lp.dual_value(&out.dual), Some(q(7)));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the textbook largest-coefficient rule.
        let r = |n, d| Rational::new(n, d);
        let mut lp = LinearProgram::new(4);
        lp.maximize(vec![r(3, 4), r(-20, 1), r(1, 2), r(-6, 1)])
            .add_inequality(vec![r(1, 4), r(-8, 1), r(-1, 1), r(9, 1)], Sense::Le, q(0))
            .add_inequality(vec![r(1, 2), r(-12, 1), r(-1, 2), r(3, 1)], Sense::Le, q(0))
            .add_inequality(vec![q(0), q(0), q(1), q(0)], Sense::Le, q(1));
        let out = solve_lp(&lp);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, r(5, 4));
        assert_eq!(lp.dual_value(&out.dual), Some(r(5, 4)));
    }

    #[test]
    fn rank_and_kernel() {
        let id: Vec<Vec<Rational>> = (0..4)
            .map(|i| (0..4).map(|j| q((i == j) as i64)).collect())
            .collect();
        assert_eq!(rank(&id), 4);
        assert!(kernel_basis(&id, 4).is_empty());
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        assert_eq!(rank(&m), 1);
        let k = kernel_basis(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.iter().all(|row| dot(row, v).is_zero()));
        }
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn primitive_normalization() {
        let v = vec![Rational::new(0, 1), Rational::new(-2, 3), Rational::new(4, 9)];
        let p = primitive(&v);
        assert_eq!(p, vec![BigInt::from(0), BigInt::from(3), BigInt::from(-2)]);
    }
}
