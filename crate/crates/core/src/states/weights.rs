//! Probability weights on test spaces and their extension to events.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::space::{OutcomeSet, TestSpace};

/// Default tolerance for float-valued states.
pub const DEFAULT_STATE_TOL: f64 = 1e-9;

/// A probability value: exact rationals or tolerance-checked floats.
pub trait Weight: Clone + PartialOrd + fmt::Display + Zero + One {
    fn to_f64(&self) -> f64;

    /// Whether `sum` counts as 1.
    fn is_unit(sum: &Self, tol: f64) -> bool;

    /// Whether the value lies in `[0, 1]`.
    fn in_unit_interval(&self, tol: f64) -> bool;
}

impl Weight for BigRational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_unit(sum: &Self, _tol: f64) -> bool {
        sum.is_one()
    }

    fn in_unit_interval(&self, _tol: f64) -> bool {
        !self.is_negative() && *self <= BigRational::one()
    }
}

impl Weight for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_unit(sum: &Self, tol: f64) -> bool {
        (sum - 1.0).abs() <= tol
    }

    fn in_unit_interval(&self, tol: f64) -> bool {
        *self >= -tol && *self <= 1.0 + tol
    }
}

/// A map from outcome ids to weights.
#[derive(Debug, Clone, PartialEq)]
pub struct State<W> {
    values: BTreeMap<String, W>,
    tol: f64,
}

pub type ExactState = State<BigRational>;
pub type FloatState = State<f64>;

/// Result of [`verify_state`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateCheck {
    pub valid: bool,
    /// Test with the largest `|Σ − 1|` (first one on ties).
    pub worst_test: usize,
    pub residual: f64,
    /// First outcome whose value falls outside `[0, 1]`.
    pub out_of_range: Option<String>,
}

impl<W: Weight> State<W> {
    pub fn new<S: Into<String>>(values: impl IntoIterator<Item = (S, W)>) -> Self {
        State {
            values: values.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            tol: DEFAULT_STATE_TOL,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn get(&self, id: &str) -> Option<&W> {
        self.values.get(id)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &W)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn value(&self, ts: &TestSpace, x: usize) -> Result<&W> {
        let id = ts.outcome_id(x);
        self.values
            .get(id)
            .ok_or_else(|| Error::MissingValue(id.to_string()))
    }

    /// `ω(A) = Σ_{x∈A} ω(x)`.
    pub fn event_value(&self, ts: &TestSpace, event: &OutcomeSet) -> Result<W> {
        event
            .iter()
            .try_fold(W::zero(), |acc, x| Ok(acc + self.value(ts, x)?.clone()))
    }

    /// Renders as `state a=1/3 b=1/3 c=1/3`.
    pub fn to_line(&self) -> String {
        let mut out = String::from("state");
        for (k, v) in &self.values {
            out.push_str(&format!(" {k}={v}"));
        }
        out
    }
}

impl<W: Weight> fmt::Display for State<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

impl ExactState {
    /// Parses a `state id=p/q ...` line.
    pub fn parse_line(line: &str) -> Result<Self> {
        let mut tokens = crate::space::tokenize(line);
        match tokens.next() {
            Some((_, "state")) => {}
            Some((col, other)) => {
                return Err(Error::parse(
                    1,
                    col,
                    format!("expected `state`, found `{other}`"),
                ))
            }
            None => return Err(Error::parse(1, 1, "empty state line")),
        }
        let mut values = BTreeMap::new();
        for (col, tok) in tokens {
            let (id, value) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse(1, col, format!("expected id=value, found `{tok}`")))?;
            let value: BigRational = value
                .parse()
                .map_err(|_| Error::parse(1, col, format!("bad rational `{value}`")))?;
            values.insert(id.to_string(), value);
        }
        Ok(State {
            values,
            tol: DEFAULT_STATE_TOL,
        })
    }

    /// The `{0,1}`-valued state with value 1 exactly on `support`.
    pub fn indicator(ts: &TestSpace, support: &OutcomeSet) -> Self {
        State::new((0..ts.outcome_count()).map(|x| {
            let v = if support.contains(x) {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            (ts.outcome_id(x).to_string(), v)
        }))
    }
}

/// Checks that every test sums to 1 (exactly or within the state's
/// tolerance) and every value lies in `[0, 1]`.
pub fn verify_state<W: Weight>(ts: &TestSpace, state: &State<W>) -> Result<StateCheck> {
    let mut out_of_range = None;
    for x in 0..ts.outcome_count() {
        let v = state.value(ts, x)?;
        if out_of_range.is_none() && !v.in_unit_interval(state.tol) {
            out_of_range = Some(ts.outcome_id(x).to_string());
        }
    }
    let mut valid = out_of_range.is_none();
    let mut worst_test = 0;
    let mut residual = -1.0f64;
    for (t, test) in ts.tests().iter().enumerate() {
        let sum = state.event_value(ts, test)?;
        valid &= W::is_unit(&sum, state.tol);
        let r = (sum.to_f64() - 1.0).abs();
        if r > residual {
            residual = r;
            worst_test = t;
        }
    }
    Ok(StateCheck {
        valid,
        worst_test,
        residual,
        out_of_range,
    })
}

/// `ω(A)` for an event `A`.
pub fn extend_to_event<W: Weight>(
    ts: &TestSpace,
    state: &State<W>,
    event: &OutcomeSet,
) -> Result<W> {
    if !ts.is_event(event) {
        return Err(Error::NotAnEvent(ts.format_set(event)));
    }
    state.event_value(ts, event)
}

/// `⊥`-separation: distinct `p, q` are non-orthogonal iff some state gives
/// `ω(p) + ω(q) > 1`.
pub fn perp_separating<W: Weight>(ts: &TestSpace, states: &[State<W>]) -> Result<bool> {
    let n = ts.outcome_count();
    let mut values: Vec<Vec<&W>> = Vec::with_capacity(states.len());
    for s in states {
        values.push((0..n).map(|x| s.value(ts, x)).collect::<Result<_>>()?);
    }
    let one = W::one();
    for p in 0..n {
        for q in p + 1..n {
            let exceeds = values.iter().any(|v| v[p].clone() + v[q].clone() > one);
            if exceeds == ts.orthogonal_idx(p, q) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn t1() -> TestSpace {
        TestSpace::parse("outcomes a b c\ntest a b c").unwrap()
    }

    fn t2() -> TestSpace {
        TestSpace::parse("outcomes a b c d\ntest a b\ntest c d").unwrap()
    }

    #[test]
    fn uniform_classical_state() {
        let s = State::new([("a", q(1, 3)), ("b", q(1, 3)), ("c", q(1, 3))]);
        let check = verify_state(&t1(), &s).unwrap();
        assert!(check.valid);
        assert_eq!(check.residual, 0.0);
    }

    #[test]
    fn triangle_half_state() {
        let ts =
            TestSpace::parse("outcomes a b c x y z\ntest a x b\ntest b y c\ntest c z a").unwrap();
        let half = q(1, 2);
        let zero = q(0, 1);
        let s = State::new([
            ("a", half.clone()),
            ("b", half.clone()),
            ("c", half),
            ("x", zero.clone()),
            ("y", zero.clone()),
            ("z", zero),
        ]);
        assert!(verify_state(&ts, &s).unwrap().valid);
    }

    #[test]
    fn invalid_state_residual() {
        let s = State::new([("a", q(1, 1)), ("b", q(1, 1)), ("c", q(0, 1))]);
        let check = verify_state(&t1(), &s).unwrap();
        assert!(!check.valid);
        assert_eq!(check.residual, 1.0);
        assert_eq!(check.worst_test, 0);
    }

    #[test]
    fn missing_value_is_an_error() {
        let s = State::new([("a", q(1, 1)), ("b", q(0, 1))]);
        assert_eq!(
            verify_state(&t1(), &s).unwrap_err(),
            Error::MissingValue("c".into())
        );
    }

    #[test]
    fn negative_values_are_not_states() {
        let s = State::new([("a", q(2, 1)), ("b", q(-1, 1)), ("c", q(0, 1))]);
        let check = verify_state(&t1(), &s).unwrap();
        assert!(!check.valid);
        assert_eq!(check.out_of_range.as_deref(), Some("a"));
    }

    #[test]
    fn float_tolerance() {
        let ts = t1();
        let s = State::new([("a", 0.5), ("b", 0.25), ("c", 0.25 + 1e-12)]);
        assert!(verify_state(&ts, &s).unwrap().valid);
        let s = s.with_tolerance(1e-14);
        assert!(!verify_state(&ts, &s).unwrap().valid);
    }

    #[test]
    fn event_extension() {
        let ts = t1();
        let s = State::new([("a", q(1, 3)), ("b", q(1, 3)), ("c", q(1, 3))]);
        assert_eq!(
            extend_to_event(&ts, &s, &OutcomeSet::empty()).unwrap(),
            q(0, 1)
        );
        let ab = ts.set(["a", "b"]).unwrap();
        assert_eq!(extend_to_event(&ts, &s, &ab).unwrap(), q(2, 3));

        let t6 = TestSpace::parse("outcomes a b c d e\ntest a b c\ntest c d e").unwrap();
        let s = ExactState::indicator(&t6, &t6.set(["c"]).unwrap());
        assert_eq!(
            extend_to_event(&t6, &s, &t6.set(["a", "b"]).unwrap()).unwrap(),
            q(0, 1)
        );
        assert_eq!(
            extend_to_event(&t6, &s, &t6.set(["c"]).unwrap()).unwrap(),
            q(1, 1)
        );
        assert!(extend_to_event(&t6, &s, &t6.set(["a", "d"]).unwrap()).is_err());
    }

    #[test]
    fn separation() {
        let ts = t1();
        let deltas: Vec<ExactState> = ["a", "b", "c"]
            .iter()
            .map(|x| ExactState::indicator(&ts, &ts.set([*x]).unwrap()))
            .collect();
        assert!(perp_separating(&ts, &deltas).unwrap());

        let ts = t2();
        let all: Vec<ExactState> = [["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"]]
            .iter()
            .map(|s| ExactState::indicator(&ts, &ts.set(*s).unwrap()))
            .collect();
        assert!(perp_separating(&ts, &all).unwrap());
        let half = State::new(["a", "b", "c", "d"].map(|x| (x, q(1, 2))));
        assert!(!perp_separating(&ts, &[half]).unwrap());
    }

    #[test]
    fn state_line_round_trip() {
        let s = State::new([("a", q(1, 3)), ("b", q(2, 3)), ("c", q(0, 1))]);
        assert_eq!(s.to_line(), "state a=1/3 b=2/3 c=0");
        assert_eq!(ExactState::parse_line(&s.to_line()).unwrap(), s);
        assert!(ExactState::parse_line("state a=x").is_err());
        assert!(ExactState::parse_line("weights a=1").is_err());
    }
}
