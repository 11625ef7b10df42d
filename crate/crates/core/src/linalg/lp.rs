//! Dense two-phase simplex with Bland's rule over a bounded box.

use alloc::vec;
use alloc::vec::Vec;

use super::matrix::dot;
use crate::{Error, Result};

/// `lower <= x <= upper`, `a x = b` for each equality, `a x <= b` for each
/// inequality, optionally maximizing `objective . x`.
///
/// When `equality_tolerance > 0` every equality is relaxed to
/// `|a x - b| <= equality_tolerance`, which keeps systems assembled from
/// floating-point data from being declared infeasible by rounding alone.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub equalities: Vec<(Vec<f64>, f64)>,
    pub inequalities: Vec<(Vec<f64>, f64)>,
    pub objective: Option<Vec<f64>>,
    pub equality_tolerance: f64,
}

impl LpProblem {
    /// Variables boxed in `[lower, upper]` with no constraints yet.
    pub fn boxed(n: usize, lower: f64, upper: f64) -> Self {
        Self {
            lower: vec![lower; n],
            upper: vec![upper; n],
            equalities: Vec::new(),
            inequalities: Vec::new(),
            objective: None,
            equality_tolerance: 0.0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.upper.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.upper.len(),
            });
        }
        let rows = self.equalities.iter().chain(&self.inequalities);
        for (a, b) in rows {
            if a.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: a.len(),
                });
            }
            if !b.is_finite() || a.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        if let Some(c) = &self.objective {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
        }
        for (l, u) in self.lower.iter().zip(&self.upper) {
            if !l.is_finite() || !u.is_finite() {
                return Err(Error::param("LP box bounds must be finite"));
            }
        }
        if !(self.equality_tolerance >= 0.0) {
            return Err(Error::param("equality tolerance must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[f64]> {
        match self {
            LpOutcome::Optimal { x, .. } => Some(x),
            LpOutcome::Infeasible => None,
        }
    }
}

/// A feasible point within `1e-9`, or `None`.
pub fn lp_feasible(p: &LpProblem) -> Result<Option<Vec<f64>>> {
    let mut q = p.clone();
    q.objective = None;
    Ok(match lp_solve(&q)? {
        LpOutcome::Optimal { x, .. } => Some(x),
        LpOutcome::Infeasible => None,
    })
}

const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;

struct Tableau {
    rows: Vec<Vec<f64>>, // each row: coefficients then rhs
    basis: Vec<usize>,
    width: usize, // number of columns excluding rhs
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, cost: &mut [f64]) {
        let w = self.width;
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
                if row[w] < 0.0 && row[w] > -1e-13 {
                    row[w] = 0.0;
                }
            }
        }
        let f = cost[c];
        if f != 0.0 {
            for (v, pv) in cost.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row for maximizing `c` (entries `< 0` may enter).
    fn cost_row(&self, c: &[f64]) -> Vec<f64> {
        let w = self.width;
        let mut cost: Vec<f64> = (0..=w).map(|j| if j < w { -c[j] } else { 0.0 }).collect();
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            let cb = c[bv];
            if cb != 0.0 {
                for (v, a) in cost.iter_mut().zip(row) {
                    *v += cb * a;
                }
            }
        }
        cost
    }

    /// Bland's rule simplex on the given cost row; `allowed` masks columns.
    fn run(&mut self, cost: &mut [f64], allowed: &[bool]) -> Result<()> {
        let w = self.width;
        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..w).find(|&j| allowed[j] && cost[j] < -COST_TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[enter];
                if a > PIVOT_TOL {
                    let ratio = row[w] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                            if ratio < lr && !tie || tie && self.basis[i] < self.basis[li] {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                // cannot happen over a bounded box
                return Err(Error::Construction("LP unbounded over a bounded box".into()));
            };
            self.pivot(r, enter, cost);
        }
        Err(Error::Construction("simplex pivot limit reached".into()))
    }
}

pub fn lp_solve(p: &LpProblem) -> Result<LpOutcome> {
    p.validate()?;
    let n = p.num_vars();
    if p.lower.iter().zip(&p.upper).any(|(l, u)| l > u) {
        return Ok(LpOutcome::Infeasible);
    }
    // shift to y = x - lower, 0 <= y <= upper - lower
    let mut le_rows: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut eq_rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..n {
        let mut a = vec![0.0; n];
        a[i] = 1.0;
        le_rows.push((a, p.upper[i] - p.lower[i]));
    }
    for (a, b) in &p.inequalities {
        le_rows.push((a.clone(), b - dot(a, &p.lower)));
    }
    for (a, b) in &p.equalities {
        let rhs = b - dot(a, &p.lower);
        if p.equality_tolerance > 0.0 {
            le_rows.push((a.clone(), rhs + p.equality_tolerance));
            le_rows.push((a.iter().map(|v| -v).collect(), -rhs + p.equality_tolerance));
        } else {
            eq_rows.push((a.clone(), rhs));
        }
    }
    let n_slack = le_rows.len();
    let m = le_rows.len() + eq_rows.len();
    let needs_art: Vec<bool> = le_rows
        .iter()
        .map(|(_, b)| *b < 0.0)
        .chain(eq_rows.iter().map(|_| true))
        .collect();
    let n_art = needs_art.iter().filter(|&&x| x).count();
    let width = n + n_slack + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_col = n + n_slack;
    for (r, (a, b)) in le_rows.iter().chain(&eq_rows).enumerate() {
        let mut row = vec![0.0; width + 1];
        let sign = if *b < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            row[j] = sign * a[j];
        }
        if r < n_slack {
            row[n + r] = sign;
        }
        row[width] = sign * b;
        if needs_art[r] {
            row[art_col] = 1.0;
            basis.push(art_col);
            art_col += 1;
        } else {
            basis.push(n + r);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, width };
    let is_art = |j: usize| j >= n + n_slack;

    if n_art > 0 {
        let c1: Vec<f64> = (0..width).map(|j| if is_art(j) { -1.0 } else { 0.0 }).collect();
        let mut cost = t.cost_row(&c1);
        let allowed = vec![true; width];
        t.run(&mut cost, &allowed)?;
        let infeas: f64 = t
            .rows
            .iter()
            .zip(&t.basis)
            .filter(|(_, &bv)| is_art(bv))
            .map(|(row, _)| row[width])
            .sum();
        let scale = t.rows.iter().map(|r| r[width].abs()).fold(1.0, f64::max);
        if infeas > 1e-9 * scale {
            return Ok(LpOutcome::Infeasible);
        }
        // drive remaining artificials out of the basis
        let mut r = 0;
        while r < t.rows.len() {
            if is_art(t.basis[r]) {
                t.rows[r][width] = 0.0;
                let col = (0..n + n_slack)
                    .filter(|&j| t.rows[r][j].abs() > 1e-9)
                    .max_by(|&a, &b| t.rows[r][a].abs().total_cmp(&t.rows[r][b].abs()).then(b.cmp(&a)));
                match col {
                    Some(j) => {
                        let mut dummy = vec![0.0; width + 1];
                        t.pivot(r, j, &mut dummy);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    let allowed: Vec<bool> = (0..width).map(|j| !is_art(j)).collect();
    let c2: Vec<f64> = match &p.objective {
        Some(c) => (0..width).map(|j| if j < n { c[j] } else { 0.0 }).collect(),
        None => vec![0.0; width],
    };
    if p.objective.is_some() {
        let mut cost = t.cost_row(&c2);
        t.run(&mut cost, &allowed)?;
    }
    let mut y = vec![0.0; n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < n {
            y[bv] = row[width];
        }
    }
    let x: Vec<f64> = (0..n)
        .map(|i| (p.lower[i] + y[i]).clamp(p.lower[i], p.upper[i]))
        .collect();
    let objective = p.objective.as_ref().map_or(0.0, |c| dot(c, &x));
    Ok(LpOutcome::Optimal { x, objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_by_equality() {
        let mut p = LpProblem::boxed(1, 0.0, 1.0);
        p.equalities.push((vec![1.0], 0.5));
        let x = lp_feasible(&p).unwrap().unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasibility() {
        let mut p = LpProblem::boxed(2, 0.0, 10.0);
        p.equalities.push((vec![1.0, 1.0], 1.0));
        p.inequalities.push((vec![-1.0, 0.0], -2.0));
        p.inequalities.push((vec![0.0, -1.0], -2.0));
        assert_eq!(lp_feasible(&p).unwrap(), None);
    }

    #[test]
    fn maximizes_over_box() {
        let mut p = LpProblem::boxed(2, -1.0, 1.0);
        p.inequalities.push((vec![1.0, 1.0], 1.5));
        p.objective = Some(vec![1.0, 2.0]);
        match lp_solve(&p).unwrap() {
            LpOutcome::Optimal { x, objective } => {
                assert!((objective - 2.5).abs() < 1e-12);
                assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
            }
            LpOutcome::Infeasible => panic!(),
        }
    }

    #[test]
    fn interior_point_via_slack() {
        // a_k . x + s <= b_k built around the interior point (0.2, 0.3, 0.1)
        let center = [0.2, 0.3, 0.1];
        let dirs = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [-1.0, -1.0, -1.0]];
        let mut p = LpProblem::boxed(4, -5.0, 5.0);
        p.upper[3] = 1.0;
        let mut ineqs = Vec::new();
        for d in &dirs {
            let b = dot(d, &center) + 0.25;
            ineqs.push((d.to_vec(), b));
            p.inequalities.push((vec![d[0], d[1], d[2], 1.0], b));
        }
        p.objective = Some(vec![0.0, 0.0, 0.0, 1.0]);
        let LpOutcome::Optimal { x, objective } = lp_solve(&p).unwrap() else { panic!() };
        assert!(objective > 0.0);
        for (a, b) in &ineqs {
            assert!(dot(a, &x[..3]) < *b);
        }
    }

    #[test]
    fn noisy_equalities_with_tolerance() {
        let mut p = LpProblem::boxed(2, 0.0, 3.0);
        p.equalities.push((vec![1.0, 1.0], 1.0));
        p.equalities.push((vec![2.0, 2.0], 2.0 + 1e-6));
        assert_eq!(lp_feasible(&p).unwrap(), None);
        p.equality_tolerance = 1e-6;
        assert!(lp_feasible(&p).unwrap().is_some());
    }
}
