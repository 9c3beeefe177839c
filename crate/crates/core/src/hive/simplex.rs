//! Exact phase-one simplex over free variables, Bland's rule.

use num::{Signed, Zero};

use crate::rational::Q;

type Row = Vec<(usize, Q)>;

/// Feasibility of `{x free : A_eq x = b_eq, A_ge x >= b_ge}`.
pub(crate) struct Feasibility {
    vars: usize,
    eq: Vec<(Row, Q)>,
    ge: Vec<(Row, Q)>,
}

impl Feasibility {
    pub fn new(vars: usize) -> Self {
        Feasibility { vars, eq: Vec::new(), ge: Vec::new() }
    }

    pub fn equal(&mut self, row: Row, rhs: Q) {
        self.eq.push((row, rhs));
    }

    pub fn at_least(&mut self, row: Row, rhs: Q) {
        self.ge.push((row, rhs));
    }

    /// A feasible point, or `None`.
    pub fn solve(&self) -> Option<Vec<Q>> {
        // Columns: x+ (vars), x- (vars), one surplus per >= row, one artificial per row.
        let m = self.vars;
        let rows = self.eq.len() + self.ge.len();
        let surplus0 = 2 * m;
        let art0 = surplus0 + self.ge.len();
        let width = art0 + rows;
        let mut tab: Vec<Vec<Q>> = Vec::with_capacity(rows);
        let mut rhs: Vec<Q> = Vec::with_capacity(rows);
        let all = self.eq.iter().map(|r| (r, None)).chain(self.ge.iter().enumerate().map(|(s, r)| (r, Some(s))));
        for (r, ((coeffs, b), surplus)) in all.enumerate() {
            let mut line = vec![Q::zero(); width];
            for (v, c) in coeffs {
                line[*v] += c;
                line[m + *v] -= c;
            }
            if let Some(s) = surplus {
                line[surplus0 + s] = Q::from_integer((-1).into());
            }
            let mut b = b.clone();
            if b.is_negative() {
                for x in line.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
            }
            line[art0 + r] = Q::from_integer(1.into());
            tab.push(line);
            rhs.push(b);
        }
        let mut basis: Vec<usize> = (0..rows).map(|r| art0 + r).collect();

        // Reduced costs of the phase-one objective `sum of artificials`.
        let mut cost = vec![Q::zero(); width];
        let mut obj = Q::zero();
        for (line, b) in tab.iter().zip(&rhs) {
            for (c, x) in cost.iter_mut().zip(line).take(art0) {
                *c -= x;
            }
            obj -= b;
        }

        loop {
            let Some(enter) = (0..art0).find(|&j| cost[j].is_negative()) else { break };
            let mut leave: Option<(usize, Q)> = None;
            for r in 0..rows {
                let a = &tab[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            // Phase one is bounded below by zero, so a ratio always exists.
            let (pr, _) = leave.expect("phase-one objective is bounded");
            let piv = tab[pr][enter].clone();
            for x in tab[pr].iter_mut() {
                if !x.is_zero() {
                    *x /= &piv;
                }
            }
            rhs[pr] /= &piv;
            let prow = tab[pr].clone();
            let prhs = rhs[pr].clone();
            for r in 0..rows {
                if r == pr || tab[r][enter].is_zero() {
                    continue;
                }
                let f = tab[r][enter].clone();
                for (x, p) in tab[r].iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
                rhs[r] -= &f * &prhs;
            }
            let f = cost[enter].clone();
            for (x, p) in cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            obj -= &f * &prhs;
            basis[pr] = enter;
        }

        if !obj.is_zero() {
            return None;
        }
        let mut col = vec![Q::zero(); width];
        for (r, &b) in basis.iter().enumerate() {
            col[b] = rhs[r].clone();
        }
        Some((0..m).map(|v| &col[v] - &col[m + v]).collect())
    }
}
