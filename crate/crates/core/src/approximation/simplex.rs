//! Dense two-phase simplex for `max c^T x` subject to `A x = b`, `x >= 0`.
//!
//! Bland's rule is used throughout, so the method terminates on degenerate
//! problems. Rows are equilibrated before pivoting; dual values are recovered
//! afterwards from the unscaled matrix.

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-10;
const PHASE_ONE_EPS: f64 = 1e-9;
const MAX_ITERATIONS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
    Breakdown,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub outcome: Outcome,
    pub duals: Vec<f64>,
    pub objective: f64,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col];
        for v in &mut self.rows[r] {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
        }
        self.basis[r] = col;
    }

    /// Runs Bland's rule over columns `0..allowed`.
    fn optimize(&mut self, allowed: usize, iterations: &mut usize) -> Outcome {
        let rhs = self.width;
        loop {
            *iterations += 1;
            if *iterations > MAX_ITERATIONS {
                return Outcome::Breakdown;
            }
            let Some(col) = (0..allowed).find(|&j| self.obj[j] < -COST_EPS) else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col] > PIVOT_EPS {
                    let ratio = row[rhs] / row[col];
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-14
                                || (ratio <= br + 1e-14 && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                None => return Outcome::Unbounded,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }
}

/// Solves `B^T y = c_B` by Gaussian elimination with partial pivoting.
fn solve_transposed(a: &[Vec<f64>], basis: &[usize], cost: &[f64]) -> Option<Vec<f64>> {
    let m = basis.len();
    let mut mat: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row: Vec<f64> = (0..m).map(|k| a[k][basis[i]]).collect();
            row.push(cost[basis[i]]);
            row
        })
        .collect();
    for col in 0..m {
        let p = (col..m).max_by(|&x, &y| mat[x][col].abs().total_cmp(&mat[y][col].abs()))?;
        if mat[p][col].abs() < 1e-300 {
            return None;
        }
        mat.swap(col, p);
        for i in 0..m {
            if i != col {
                let f = mat[i][col] / mat[col][col];
                if f != 0.0 {
                    for k in col..=m {
                        mat[i][k] -= f * mat[col][k];
                    }
                }
            }
        }
    }
    Some((0..m).map(|i| mat[i][m] / mat[i][i]).collect())
}

pub(crate) fn maximize(a: &[Vec<f64>], b: &[f64], cost: &[f64]) -> Solution {
    let m = a.len();
    let nvars = cost.len();
    let width = nvars + m;
    let failed = |outcome| Solution {
        outcome,
        duals: Vec::new(),
        objective: f64::NAN,
    };

    let mut rows = Vec::with_capacity(m);
    for (i, (row, &bi)) in a.iter().zip(b).enumerate() {
        let scale = row.iter().fold(bi.abs(), |s, v| s.max(v.abs()));
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let sign = if bi < 0.0 { -1.0 } else { 1.0 };
        let mut t = vec![0.0; width + 1];
        for (dst, v) in t.iter_mut().zip(row) {
            *dst = sign * v / scale;
        }
        t[nvars + i] = 1.0;
        t[width] = sign * bi / scale;
        rows.push(t);
    }
    let mut obj = vec![0.0; width + 1];
    for row in &rows {
        for j in 0..nvars {
            obj[j] -= row[j];
        }
        obj[width] -= row[width];
    }
    let mut tab = Tableau {
        rows,
        obj,
        basis: (nvars..width).collect(),
        width,
    };

    let mut iterations = 0;
    if tab.optimize(width, &mut iterations) != Outcome::Optimal {
        return failed(Outcome::Breakdown);
    }
    if tab.obj[width] < -PHASE_ONE_EPS {
        return failed(Outcome::Infeasible);
    }
    for r in 0..m {
        if tab.basis[r] >= nvars {
            match (0..nvars).find(|&j| tab.rows[r][j].abs() > 1e-9) {
                Some(j) => tab.pivot(r, j),
                // a redundant row; the problems built here have none
                None => return failed(Outcome::Breakdown),
            }
        }
    }

    let mut obj = vec![0.0; width + 1];
    for j in 0..=width {
        let mut s: f64 = tab
            .basis
            .iter()
            .zip(&tab.rows)
            .map(|(&bj, row)| cost[bj] * row[j])
            .sum();
        if j < nvars {
            s -= cost[j];
        }
        obj[j] = s;
    }
    tab.obj = obj;
    match tab.optimize(nvars, &mut iterations) {
        Outcome::Optimal => {}
        other => return failed(other),
    }

    let mut x = vec![0.0; nvars];
    for (r, &bj) in tab.basis.iter().enumerate() {
        x[bj] = tab.rows[r][width];
    }
    let Some(duals) = solve_transposed(a, &tab.basis, cost) else {
        return failed(Outcome::Breakdown);
    };
    let objective = x.iter().zip(cost).map(|(x, c)| x * c).sum();
    Solution {
        outcome: Outcome::Optimal,
        duals,
        objective,
    }
}
