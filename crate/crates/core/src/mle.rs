//! Existence of the MLE, facial sets, and (extended) MLE fitting.
//!
//! Existence and facial sets are decided with exact linear programs over the
//! marginal cone `cone(A)`. Fitting is done in floating point on the face
//! selected by the facial set, where the restricted MLE always exists.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Sense};
use crate::model::{DesignMatrix, IntMatrix, MarginVector, Network, ReciprocityVariant};
use crate::rational::Rational;

/// Default tolerance on the moment residual `max |A p - t|`.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default iteration cap for [`fit`].
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Outcome of the existence linear program.
#[derive(Debug, Clone)]
pub struct ExistenceReport {
    /// Whether `t` lies in the relative interior of the marginal cone.
    pub exists: bool,
    /// Whether `t` lies in the marginal cone at all.
    pub in_cone: bool,
    /// Optimal `s` of `max s : A x = t, x_i >= s, s >= 0`; zero when `t` is
    /// not in the cone.
    pub s_star: Rational,
    /// An optimal `x`.
    pub witness: Option<Vec<Rational>>,
    /// Infeasibility certificate when `t` is outside the cone.
    pub certificate: Option<Vec<Rational>>,
}

/// Solves `max s` subject to `A x = t`, `x_i - s >= 0`, `s >= 0` exactly.
///
/// The program is solved after the substitution `x = z + s 1`, `z >= 0`,
/// which has the same optimum and keeps the row count at `rows(A)`.
pub fn check_exists(a: &IntMatrix, t: &[i64]) -> Result<ExistenceReport> {
    if t.len() != a.nrows() {
        return Err(Error::Dimension(format!(
            "statistic has length {} but the matrix has {} rows",
            t.len(),
            a.nrows()
        )));
    }
    let ncols = a.ncols();
    let mut lp = LinearProgram::new(ncols + 1);
    let mut obj = vec![Rational::ZERO; ncols + 1];
    obj[ncols] = Rational::ONE;
    lp.maximize(obj);
    for r in 0..a.nrows() {
        let row = a.row(r);
        let mut coeffs: Vec<Rational> = row.iter().map(|&v| Rational::from_integer(v)).collect();
        coeffs.push(Rational::from_integer(row.iter().sum()));
        lp.add_equality(coeffs, Rational::from_integer(t[r]));
    }
    let out = solve_lp(&lp);
    match out.status {
        LpStatus::Infeasible => Ok(ExistenceReport {
            exists: false,
            in_cone: false,
            s_star: Rational::ZERO,
            witness: None,
            certificate: Some(out.dual),
        }),
        LpStatus::Unbounded => Err(Error::Inconsistent("existence program is unbounded; the cone is not pointed".into())),
        LpStatus::Optimal => {
            let s = out.value.clone();
            let witness = out.primal[..ncols].iter().map(|z| z + &s).collect();
            Ok(ExistenceReport {
                exists: s.is_positive(),
                in_cone: true,
                s_star: s,
                witness: Some(witness),
                certificate: None,
            })
        }
    }
}

/// [`check_exists`] for a design matrix and a margin vector.
pub fn check_mle_exists(a: &DesignMatrix, t: &MarginVector) -> Result<ExistenceReport> {
    check_exists(a.entries(), t.values())
}

/// A facial set of the marginal cone together with a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacialSet {
    /// Column indices (zero-based), ascending.
    pub indices: Vec<usize>,
    /// A functional `c` with `c . a_i = 0` for `i` in the set and
    /// `c . a_i < 0` otherwise. All zeros when the set is every column.
    pub certificate: Vec<Rational>,
}

impl FacialSet {
    pub fn is_full(&self, ncols: usize) -> bool {
        self.indices.len() == ncols
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// One-based indices, as in `{1, ..., 2n(n-1)}`.
    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }
}

/// The facial set of the face of `cone(A)` whose relative interior holds `t`.
///
/// For every column `i` solves `max a_i . y` subject to `y . t = 0`,
/// `A^T y >= 0` and `-1 <= y <= 1`; `i` is in the facial set iff that optimum
/// is zero. A column shown positive by another program's optimizer is
/// excluded without solving its own program.
pub fn facial_set(a: &IntMatrix, t: &[i64]) -> Result<FacialSet> {
    let report = check_exists(a, t)?;
    if !report.in_cone {
        return Err(Error::NotInCone);
    }
    let m = a.nrows();
    let ncols = a.ncols();
    if report.exists {
        return Ok(FacialSet { indices: (0..ncols).collect(), certificate: vec![Rational::ZERO; m] });
    }
    let columns: Vec<Vec<Rational>> = a
        .columns()
        .into_iter()
        .map(|c| c.into_iter().map(Rational::from_integer).collect())
        .collect();
    let mut base = LinearProgram::new(m);
    for r in 0..m {
        base.set_bounds(r, Some(-Rational::ONE), Some(Rational::ONE));
    }
    base.add_equality(t.iter().map(|&v| Rational::from_integer(v)).collect(), Rational::ZERO);
    for col in &columns {
        base.add_inequality(col.clone(), Sense::Ge, Rational::ZERO);
    }

    let mut excluded = vec![false; ncols];
    let mut sum_y = vec![Rational::ZERO; m];
    for i in 0..ncols {
        if excluded[i] {
            continue;
        }
        let mut lp = base.clone();
        lp.maximize(columns[i].clone());
        let out = solve_lp(&lp);
        if out.status != LpStatus::Optimal {
            return Err(Error::Inconsistent(format!("facial-set program {i} is not optimal")));
        }
        if out.value.is_positive() {
            let y = &out.primal;
            for (j, col) in columns.iter().enumerate() {
                if crate::rational::dot(col, y).is_positive() {
                    excluded[j] = true;
                }
            }
            debug_assert!(excluded[i]);
            for (s, v) in sum_y.iter_mut().zip(y) {
                *s += v;
            }
        }
    }
    let indices: Vec<usize> = (0..ncols).filter(|&j| !excluded[j]).collect();
    let certificate = sum_y.into_iter().map(|v| -v).collect();
    Ok(FacialSet { indices, certificate })
}

/// [`facial_set`] for a design matrix and margin vector.
pub fn facial_set_of(a: &DesignMatrix, t: &MarginVector) -> Result<FacialSet> {
    facial_set(a.entries(), t.values())
}

/// Settings for [`fit`].
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER }
    }
}

/// The (extended) MLE of a p1 model.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub n: usize,
    pub variant: ReciprocityVariant,
    pub include_theta: bool,
    /// Whether the ordinary MLE exists (the facial set is every column).
    pub exists: bool,
    /// Per-column probabilities, dyad blocks in column order.
    pub probabilities: Vec<f64>,
    pub support: FacialSet,
    pub log_likelihood: f64,
    /// `max |A p - t|`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective value after every accepted step, starting point included.
    pub objective_trace: Vec<f64>,
}

/// Serializable summary of a [`FitResult`].
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub n: usize,
    pub variant: ReciprocityVariant,
    pub theta: bool,
    pub exists: bool,
    /// One-based column indices.
    pub facial_set: Vec<usize>,
    /// Rounded to 12 significant digits.
    pub probabilities: Vec<f64>,
    pub log_likelihood: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Rounds to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

impl FitResult {
    pub fn report(&self) -> FitReport {
        FitReport {
            n: self.n,
            variant: self.variant,
            theta: self.include_theta,
            exists: self.exists,
            facial_set: self.support.one_based(),
            probabilities: self.probabilities.iter().map(|&p| round_significant(p, 12)).collect(),
            log_likelihood: round_significant(self.log_likelihood, 12),
            residual: self.residual,
            iterations: self.iterations,
            converged: self.converged,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.report())?)
    }
}

/// Log-linear model restricted to a facial set, over the non-lambda rows.
struct FaceModel {
    /// Per dyad: (column index, feature vector) for columns in the face.
    dyads: Vec<Vec<(usize, DVector<f64>)>>,
    target: DVector<f64>,
    ncols: usize,
}

impl FaceModel {
    fn new(a: &DesignMatrix, t: &MarginVector, face: &FacialSet) -> FaceModel {
        let rows: Vec<usize> = a.non_lambda_rows().collect();
        let e = a.entries();
        let mut dyads = vec![Vec::new(); a.num_dyads()];
        for &c in &face.indices {
            let f = DVector::from_iterator(rows.len(), rows.iter().map(|&r| e.get(r, c) as f64));
            dyads[c / 4].push((c, f));
        }
        let target = DVector::from_iterator(rows.len(), rows.iter().map(|&r| t.0[r] as f64));
        FaceModel { dyads, target, ncols: a.ncols() }
    }

    fn dim(&self) -> usize {
        self.target.len()
    }

    /// Probabilities at natural parameters `zeta`.
    fn probabilities(&self, zeta: &DVector<f64>) -> Vec<f64> {
        let mut p = vec![0.0; self.ncols];
        for cols in &self.dyads {
            let scores: Vec<f64> = cols.iter().map(|(_, f)| f.dot(zeta)).collect();
            let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let z: f64 = scores.iter().map(|s| (s - max).exp()).sum();
            for ((c, _), s) in cols.iter().zip(&scores) {
                p[*c] = (s - max).exp() / z;
            }
        }
        p
    }

    /// `zeta . t - sum_d log Z_d(zeta)`.
    fn objective(&self, zeta: &DVector<f64>) -> f64 {
        let mut val = zeta.dot(&self.target);
        for cols in &self.dyads {
            let scores: Vec<f64> = cols.iter().map(|(_, f)| f.dot(zeta)).collect();
            let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            val -= max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
        }
        val
    }

    /// Gradient `t - E[a]` and Fisher information `sum_d Cov_d(a)`.
    fn derivatives(&self, p: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let q = self.dim();
        let mut grad = self.target.clone();
        let mut info = DMatrix::zeros(q, q);
        for cols in &self.dyads {
            let mut mean = DVector::zeros(q);
            for (c, f) in cols {
                mean.axpy(p[*c], f, 1.0);
            }
            grad -= &mean;
            for (c, f) in cols {
                let d = f - &mean;
                info.ger(p[*c], &d, &d, 1.0);
            }
        }
        (grad, info)
    }
}

/// Moment residual `max |A p - t|` over all rows.
pub fn moment_residual(a: &DesignMatrix, p: &[f64], t: &MarginVector) -> f64 {
    let e = a.entries();
    (0..a.nrows())
        .map(|r| {
            let ap: f64 = (0..a.ncols()).map(|c| e.get(r, c) as f64 * p[c]).sum();
            (ap - t.0[r] as f64).abs()
        })
        .fold(0.0, f64::max)
}

/// Computes the MLE, or the extended MLE when the MLE does not exist.
///
/// The facial set of `t = A x` is found exactly, then the likelihood is
/// maximized over distributions supported on it by damped Newton steps
/// (Fisher scoring with a pseudo-inverse for the rank-deficient
/// parametrization), falling back to gradient ascent when Newton stalls.
pub fn fit(a: &DesignMatrix, x: &Network, opts: FitOptions) -> Result<FitResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::Dimension("tolerance must be positive".into()));
    }
    let t = a.sufficient_statistic(x)?;
    let face = facial_set_of(a, &t)?;
    let model = FaceModel::new(a, &t, &face);

    let mut zeta = DVector::zeros(model.dim());
    let mut p = model.probabilities(&zeta);
    let mut value = model.objective(&zeta);
    let mut trace = vec![value];
    let mut residual = moment_residual(a, &p, &t);
    let mut iterations = 0;
    let mut newton = true;

    while residual > opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let (grad, info) = model.derivatives(&p);
        let direction = if newton {
            match info.clone().pseudo_inverse(1e-12) {
                Ok(pinv) => pinv * &grad,
                Err(_) => grad.clone(),
            }
        } else {
            grad.clone()
        };
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = &zeta + &direction * step;
            let cv = model.objective(&cand);
            if cv >= value {
                let cp = model.probabilities(&cand);
                let cr = moment_residual(a, &cp, &t);
                // Accept a flat objective only if it does not worsen the moments.
                if cv > value || cr < residual {
                    zeta = cand;
                    p = cp;
                    value = cv;
                    residual = cr;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if accepted {
            trace.push(value);
        } else if newton {

            newton = false;
        } else {
            break;
        }
    }

    let log_likelihood: f64 = x.columns().map(|c| p[c].ln()).sum();
    Ok(FitResult {
        n: a.n(),
        variant: a.variant(),
        include_theta: a.include_theta(),
        exists: face.is_full(a.ncols()),
        probabilities: p,
        support: face,
        log_likelihood,
        residual,
        iterations,
        converged: residual <= opts.tol,
        objective_trace: trace,
    })
}

/// Checks the moment equations `|A p - t| <= tol`, per-dyad normalization,
/// nonnegativity, and that probabilities vanish exactly off the support.
pub fn verify_moment_equations(a: &DesignMatrix, fit: &FitResult, t: &MarginVector, tol: f64) -> bool {
    let p = &fit.probabilities;
    if p.len() != a.ncols() || t.len() != a.nrows() {
        return false;
    }
    if p.iter().any(|&v| !(v >= 0.0)) {
        return false;
    }
    if (0..a.ncols()).any(|c| !fit.support.contains(c) && p[c] != 0.0) {
        return false;
    }
    let normalized = (0..a.num_dyads()).all(|d| {
        let s: f64 = a.dyad_columns(d).map(|c| p[c]).sum();
        (s - 1.0).abs() <= tol
    });
    normalized && moment_residual(a, p, t) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NetworkFormat;

    const FIRST_CYCLE: &str = "0 0 1 0 0 1 0 0 0 0 1 0";

    fn zero3() -> DesignMatrix {
        DesignMatrix::new(3, ReciprocityVariant::Zero, true).unwrap()
    }

    #[test]
    fn cycle_exists_with_quarter() {
        let a = DesignMatrix::new(3, ReciprocityVariant::Zero, false).unwrap();
        let x = Network::parse(FIRST_CYCLE, NetworkFormat::Vector).unwrap();
        let r = check_mle_exists(&a, &a.sufficient_statistic(&x).unwrap()).unwrap();
        assert!(r.exists);
        assert_eq!(r.s_star, Rational::new(1, 4));
        assert_eq!(r.witness.unwrap(), vec![Rational::new(1, 4); 12]);
    }

    #[test]
    fn outside_cone() {
        let a = zero3();
        let mut t = a.sufficient_statistic(&Network::empty(3)).unwrap();
        t.0[0] = -1;
        let r = check_mle_exists(&a, &t).unwrap();
        assert!(!r.exists && !r.in_cone);
        assert!(r.certificate.is_some());
        assert!(matches!(facial_set_of(&a, &t), Err(Error::NotInCone)));
        assert!(check_exists(a.entries(), &[1, 2]).is_err());
    }

    #[test]
    fn facial_set_certificate_separates() {
        let a = zero3();
        // node 1 sends to both others: row sum 2
        let x = Network::from_edges(3, |i, _| i == 0);
        let t = a.sufficient_statistic(&x).unwrap();
        let f = facial_set_of(&a, &t).unwrap();
        assert!(!f.is_full(12));
        for c in 0..12 {
            let col: Vec<Rational> = a.entries().column(c).into_iter().map(Rational::from_integer).collect();
            let v = crate::rational::dot(&f.certificate, &col);
            if f.contains(c) {
                assert!(v.is_zero());
            } else {
                assert!(v.is_negative());
            }
        }
    }

    #[test]
    fn cycle_fit_is_uniform() {
        let a = zero3();
        let x = Network::parse(FIRST_CYCLE, NetworkFormat::Vector).unwrap();
        let fit = fit(&a, &x, FitOptions::default()).unwrap();
        assert!(fit.converged && fit.exists);
        for p in &fit.probabilities {
            assert!((p - 0.25).abs() < 1e-10);
        }
        let t = a.sufficient_statistic(&x).unwrap();
        assert!(verify_moment_equations(&a, &fit, &t, 1e-10));
        let mut bad = fit.clone();
        bad.probabilities[3] += 0.01;
        assert!(!verify_moment_equations(&a, &bad, &t, 1e-10));
        assert!((fit.log_likelihood - 3.0 * 0.25f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn rejects_nonpositive_tol() {
        let a = zero3();
        let x = Network::empty(3);
        assert!(fit(&a, &x, FitOptions { tol: 0.0, max_iter: 10 }).is_err());
    }

    #[test]
    fn significant_rounding() {
        assert_eq!(round_significant(0.123456789012345, 12), 0.123456789012);
        assert_eq!(round_significant(0.0, 12), 0.0);
    }
}
