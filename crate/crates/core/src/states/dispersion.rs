//! Dispersion-free (`{0,1}`-valued) states: exactly one outcome of value 1
//! in every test.

use crate::error::{Error, Result};
use crate::space::{OutcomeSet, TestSpace};
use crate::states::ExactState;

/// Default bound on `|X|` for dispersion-free searches.
pub const DEFAULT_OUTCOME_CAP: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cell {
    Free,
    Zero,
    One,
}

struct Search<'a> {
    ts: &'a TestSpace,
    cells: Vec<Cell>,
    trail: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(ts: &'a TestSpace) -> Self {
        Search {
            ts,
            cells: vec![Cell::Free; ts.outcome_count()],
            trail: Vec::new(),
        }
    }

    /// Sets `x` to 1 and every outcome orthogonal to it to 0.
    fn choose(&mut self, x: usize) -> usize {
        let mark = self.trail.len();
        self.cells[x] = Cell::One;
        self.trail.push(x);
        for &t in self.ts.tests_containing(x) {
            for y in self.ts.test(t).iter() {
                if self.cells[y] == Cell::Free {
                    self.cells[y] = Cell::Zero;
                    self.trail.push(y);
                }
            }
        }
        mark
    }

    fn undo(&mut self, mark: usize) {
        for y in self.trail.drain(mark..) {
            self.cells[y] = Cell::Free;
        }
    }

    /// The unsatisfied test with the fewest free outcomes; `Err(())` on a
    /// test with no 1 and nothing free.
    fn most_constrained(&self) -> Result<Option<usize>, ()> {
        let mut best: Option<(usize, usize)> = None;
        for (t, test) in self.ts.tests().iter().enumerate() {
            let mut free = 0;
            let mut satisfied = false;
            for x in test.iter() {
                match self.cells[x] {
                    Cell::One => {
                        satisfied = true;
                        break;
                    }
                    Cell::Free => free += 1,
                    Cell::Zero => {}
                }
            }
            if satisfied {
                continue;
            }
            if free == 0 {
                return Err(());
            }
            if best.is_none_or(|(_, f)| free < f) {
                best = Some((t, free));
            }
        }
        Ok(best.map(|(t, _)| t))
    }

    fn run(&mut self, out: &mut Vec<OutcomeSet>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let t = match self.most_constrained() {
            Err(()) => return,
            Ok(None) => {
                out.push(
                    self.cells
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| **c == Cell::One)
                        .map(|(x, _)| x)
                        .collect(),
                );
                return;
            }
            Ok(Some(t)) => t,
        };
        let candidates: Vec<usize> = self
            .ts
            .test(t)
            .iter()
            .filter(|&x| self.cells[x] == Cell::Free)
            .collect();
        for x in candidates {
            let mark = self.choose(x);
            self.run(out, limit);
            self.undo(mark);
            if out.len() >= limit {
                return;
            }
        }
    }
}

fn check_cap(ts: &TestSpace, cap: usize) -> Result<()> {
    if ts.outcome_count() > cap {
        return Err(Error::OutcomeCapExceeded {
            outcomes: ts.outcome_count(),
            cap,
        });
    }
    Ok(())
}

/// Supports (sets of outcomes with value 1) of dispersion-free states,
/// optionally forcing one outcome to 1, up to `limit` results.
pub fn dispersion_free_supports(
    ts: &TestSpace,
    forced: Option<usize>,
    limit: usize,
) -> Vec<OutcomeSet> {
    let mut search = Search::new(ts);
    if let Some(x) = forced {
        search.choose(x);
    }
    let mut out = Vec::new();
    search.run(&mut out, limit);
    out.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    out
}

pub fn dispersion_free_states(ts: &TestSpace) -> Result<Vec<ExactState>> {
    dispersion_free_states_with_cap(ts, DEFAULT_OUTCOME_CAP)
}

/// Every dispersion-free state, ordered by support.
pub fn dispersion_free_states_with_cap(ts: &TestSpace, cap: usize) -> Result<Vec<ExactState>> {
    check_cap(ts, cap)?;
    Ok(dispersion_free_supports(ts, None, usize::MAX)
        .iter()
        .map(|s| ExactState::indicator(ts, s))
        .collect())
}

pub fn is_udf(ts: &TestSpace) -> Result<(bool, Option<String>)> {
    is_udf_with_cap(ts, DEFAULT_OUTCOME_CAP)
}

/// Unital dispersion-free: every outcome gets value 1 in some
/// dispersion-free state. Returns the first outcome that never does.
pub fn is_udf_with_cap(ts: &TestSpace, cap: usize) -> Result<(bool, Option<String>)> {
    check_cap(ts, cap)?;
    for x in 0..ts.outcome_count() {
        if dispersion_free_supports(ts, Some(x), 1).is_empty() {
            return Ok((false, Some(ts.outcome_id(x).to_string())));
        }
    }
    Ok((true, None))
}
