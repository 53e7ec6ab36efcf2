//! Exact-rational two-phase simplex for `min c·x` subject to `A x = b`,
//! `x ≥ 0`, with Bland's rule against cycling.

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub objective: Rational,
    /// `y` with `c - yᵀA ≥ 0` and `yᵀb = objective`.
    pub duals: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v = *v / p;
        }
        self.rhs[r] = self.rhs[r] / p;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][col];
            if f.is_zero() {
                continue;
            }
            for j in 0..self.rows[i].len() {
                let delta = f * self.rows[r][j];
                self.rows[i][j] -= delta;
            }
            let delta = f * self.rhs[r];
            self.rhs[i] -= delta;
        }
        self.basis[r] = col;
    }

    fn reduced_cost(&self, cost: &[Rational], col: usize) -> Rational {
        let mut d = cost[col];
        for (i, &b) in self.basis.iter().enumerate() {
            d -= cost[b] * self.rows[i][col];
        }
        d
    }

    /// Runs to optimality over columns `< allowed`. `false` when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.reduced_cost(cost, j).is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col];
                if a > Rational::ZERO {
                    let ratio = self.rhs[i] / a;
                    let better = match leave {
                        None => true,
                        Some((r, best)) => ratio < best || (ratio == best && self.basis[i] < self.basis[r]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, col);
        }
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().zip(&self.rhs).map(|(&b, &v)| cost[b] * v).sum()
    }
}

pub fn minimize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let mut sign = vec![Rational::ONE; m];
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        assert_eq!(a[i].len(), n, "constraint row {i} has the wrong width");
        if b[i].is_negative() {
            sign[i] = -Rational::ONE;
        }
        let mut row: Vec<Rational> = a[i].iter().map(|&v| v * sign[i]).collect();
        row.extend((0..m).map(|j| if i == j { Rational::ONE } else { Rational::ZERO }));
        rows.push(row);
        rhs.push(b[i] * sign[i]);
    }
    let mut t = Tableau { rows, rhs, basis: (n..n + m).collect() };

    let mut phase1 = vec![Rational::ZERO; n + m];
    for v in phase1.iter_mut().skip(n) {
        *v = Rational::ONE;
    }
    t.optimize(&phase1, n + m);
    if !t.objective(&phase1).is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive zero-level artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut cost = c.to_vec();
    cost.extend(std::iter::repeat_n(Rational::ZERO, m));
    if !t.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::ZERO; n];
    for (&bcol, &v) in t.basis.iter().zip(&t.rhs) {
        x[bcol] = v;
    }
    let duals = (0..m)
        .map(|r| {
            let y: Rational = t.basis.iter().enumerate().map(|(i, &bc)| cost[bc] * t.rows[i][n + r]).sum();
            y * sign[r]
        })
        .collect();
    LpOutcome::Optimal(LpSolution { x, objective: t.objective(&cost), duals })
}

impl LpSolution {
    /// `c_j - yᵀA_j` for every column.
    pub fn reduced_costs(&self, a: &[Vec<Rational>], c: &[Rational]) -> Vec<Rational> {
        (0..c.len())
            .map(|j| c[j] - a.iter().zip(&self.duals).map(|(row, &y)| y * row[j]).sum::<Rational>())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i128) -> Rational {
        Rational::from(v)
    }

    fn rows(v: &[&[i128]]) -> Vec<Vec<Rational>> {
        v.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect()
    }

    fn optimal(o: LpOutcome) -> LpSolution {
        match o {
            LpOutcome::Optimal(s) => s,
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn picks_the_cheaper_mixture() {
        // weights over points x = 0, 1, 2 with costs 4, 3, 0; target x = 1
        let a = rows(&[&[1, 1, 1], &[0, 1, 2]]);
        let b = vec![r(1), r(1)];
        let c = vec![r(4), r(3), r(0)];
        let s = optimal(minimize(&a, &b, &c));
        assert_eq!(s.objective, r(2));
        assert_eq!(s.x, vec![Rational::new(1, 2), r(0), Rational::new(1, 2)]);
        let dual_obj: Rational = s.duals.iter().zip(&b).map(|(&y, &v)| y * v).sum();
        assert_eq!(dual_obj, s.objective);
        assert!(s.reduced_costs(&a, &c).iter().all(|d| !d.is_negative()));
    }

    #[test]
    fn detects_infeasibility() {
        let a = rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(minimize(&a, &[r(1), r(2)], &[r(1), r(1)]), LpOutcome::Infeasible);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let a = rows(&[&[1, 1, 1], &[2, 2, 2], &[0, 1, 2]]);
        let b = vec![r(1), r(2), Rational::new(1, 2)];
        let c = vec![r(2), r(1), r(1)];
        let s = optimal(minimize(&a, &b, &c));
        assert_eq!(s.objective, Rational::new(3, 2));
        assert!(s.reduced_costs(&a, &c).iter().all(|d| !d.is_negative()));
    }

    #[test]
    fn negative_right_hand_side() {
        let a = rows(&[&[-1, -1]]);
        let s = optimal(minimize(&a, &[r(-3)], &[r(2), r(1)]));
        assert_eq!(s.objective, r(3));
        assert_eq!(s.duals, vec![r(-1)]);
    }

    #[test]
    fn unbounded_direction() {
        let a = rows(&[&[1, -1]]);
        assert_eq!(minimize(&a, &[r(0)], &[r(0), r(-1)]), LpOutcome::Unbounded);
    }
}
