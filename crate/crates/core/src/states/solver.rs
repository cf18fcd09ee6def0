//! Exact feasibility of `{ω ≥ 0, Σ_{x∈E} ω(x) = 1 for every test E}`.
//!
//! Phase-one simplex over `BigRational` with Bland's rule. An infeasible
//! system yields Farkas multipliers that can be re-checked independently.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::space::TestSpace;
use crate::states::ExactState;

/// Multipliers `y_E`, one per test, with `Σ_{E∋x} y_E ≥ 0` for every outcome
/// and `Σ_E y_E < 0`. Summing `y_E` times the test equations of any state
/// would give a non-negative number equal to a negative one.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibilityCertificate {
    pub multipliers: Vec<BigRational>,
}

impl InfeasibilityCertificate {
    /// Re-checks the certificate with exact arithmetic.
    pub fn check(&self, ts: &TestSpace) -> bool {
        if self.multipliers.len() != ts.tests().len() {
            return false;
        }
        let total: BigRational = self.multipliers.iter().cloned().sum();
        total.is_negative()
            && (0..ts.outcome_count()).all(|x| {
                let s: BigRational = ts
                    .tests_containing(x)
                    .iter()
                    .map(|&t| self.multipliers[t].clone())
                    .sum();
                !s.is_negative()
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(ExactState),
    Infeasible(InfeasibilityCertificate),
}

/// Some exact-rational state, or `None` when the space has no states.
pub fn find_state(ts: &TestSpace) -> Option<ExactState> {
    match solve_state(ts) {
        Feasibility::Feasible(s) => Some(s),
        Feasibility::Infeasible(_) => None,
    }
}

/// Decides whether `ts` admits a state, with a witness either way.
pub fn solve_state(ts: &TestSpace) -> Feasibility {
    let m = ts.tests().len();
    let n = ts.outcome_count();
    let width = n + m;
    let q0 = BigRational::zero;

    // Rows: A ω + a = 1 with artificial a ≥ 0. Column `width` is the rhs.
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = vec![q0(); width + 1];
            for x in ts.test(i).iter() {
                row[x] = BigRational::one();
            }
            row[n + i] = BigRational::one();
            row[width] = BigRational::one();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of `min Σ a`; the last slot holds minus the objective.
    let mut cost = vec![q0(); width + 1];
    for row in &rows {
        for (j, v) in row.iter().enumerate() {
            if j < n || j == width {
                cost[j] -= v;
            }
        }
    }

    // Bland: first improving column, ties in the ratio test by lowest basic index.
    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by 0, so a pivot row always exists.
        let (r, _) = leave.expect("phase-one objective is bounded");
        let pivot = rows[r][enter].clone();
        for v in rows[r].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        let f = cost[enter].clone();
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
        basis[r] = enter;
    }

    if cost[width].is_zero() {
        let mut values = vec![q0(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                values[b] = rows[i][width].clone();
            }
        }
        let state = ExactState::new(
            values
                .into_iter()
                .enumerate()
                .map(|(x, v)| (ts.outcome_id(x).to_string(), v)),
        );
        Feasibility::Feasible(state)
    } else {
        // Duals of min Σ a: y_i = 1 − (reduced cost of a_i). Negate them.
        let multipliers = (0..m).map(|i| &cost[n + i] - BigRational::one()).collect();
        Feasibility::Infeasible(InfeasibilityCertificate { multipliers })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::verify_state;

    fn space(text: &str) -> TestSpace {
        TestSpace::parse(text).unwrap()
    }

    #[test]
    fn classical_space_has_a_state() {
        let ts = space("outcomes a b c\ntest a b c");
        let s = find_state(&ts).unwrap();
        assert!(verify_state(&ts, &s).unwrap().valid);
    }

    #[test]
    fn glued_pair_has_a_state() {
        let ts = space("outcomes a b c d e\ntest a b c\ntest c d e");
        let s = find_state(&ts).unwrap();
        assert!(verify_state(&ts, &s).unwrap().valid);
        // The assignment ω(c) = 1 is also a state.
        let c = ExactState::indicator(&ts, &ts.set(["c"]).unwrap());
        assert!(verify_state(&ts, &c).unwrap().valid);
    }

    #[test]
    fn grid_space_is_stateless() {
        // Two tests cover X once, three tests cover it again: Σω = 2 = 3.
        let ts =
            space("outcomes a b c d e f\ntest a b c\ntest d e f\ntest a d\ntest b e\ntest c f");
        match solve_state(&ts) {
            Feasibility::Infeasible(cert) => assert!(cert.check(&ts)),
            Feasibility::Feasible(s) => panic!("unexpected state {s}"),
        }
    }

    #[test]
    fn redundant_singletons_are_stateless() {
        let ts = space("outcomes a b\ntest a\ntest b\ntest a b");
        assert!(find_state(&ts).is_none());
    }

    #[test]
    fn certificate_check_rejects_garbage() {
        let ts = space("outcomes a b\ntest a b");
        let cert = InfeasibilityCertificate {
            multipliers: vec![BigRational::from_integer((-1).into())],
        };
        assert!(!cert.check(&ts));
    }
}
