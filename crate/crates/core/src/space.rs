//! Finite test spaces `(X, 𝔄)`: outcomes, tests, events and the
//! orthogonality, complementation and perspectivity relations between them.
//!
//! Outcomes are addressed by their position in the lexicographically sorted
//! id list. Tests keep the order in which they were given.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default bound on `Σ_E 2^|E|` for exhaustive event enumeration.
pub const DEFAULT_EVENT_CAP: u128 = 1 << 20;

/// A sorted, duplicate-free set of outcome indices.
///
/// Sets are ordered by size first and then lexicographically by members,
/// which is the canonical order used for events and ∼-classes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OutcomeSet(Vec<usize>);

impl OutcomeSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        OutcomeSet(v)
    }

    pub fn empty() -> Self {
        OutcomeSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &OutcomeSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for &x in &self.0 {
            for &y in it.by_ref() {
                match y.cmp(&x) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &OutcomeSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &OutcomeSet) -> OutcomeSet {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => {
                    v.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    v.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    v.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&other.0[j..]);
        OutcomeSet(v)
    }

    pub fn difference(&self, other: &OutcomeSet) -> OutcomeSet {
        OutcomeSet(
            self.0
                .iter()
                .copied()
                .filter(|&x| !other.contains(x))
                .collect(),
        )
    }

    /// The subset selected by the low `len()` bits of `mask`.
    pub fn subset_by_mask(&self, mask: u64) -> OutcomeSet {
        OutcomeSet(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect(),
        )
    }
}

impl Ord for OutcomeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for OutcomeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<usize> for OutcomeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        OutcomeSet::new(iter)
    }
}

/// An outcome set contained in at least one test.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub members: OutcomeSet,
    /// Index of the first test containing `members`.
    pub witness_test: usize,
}

/// A finite test space.
#[derive(Debug, Clone)]
pub struct TestSpace {
    outcomes: Vec<String>,
    index: HashMap<String, usize>,
    tests: Vec<OutcomeSet>,
    incidence: Vec<Vec<usize>>,
    test_lookup: HashMap<OutcomeSet, usize>,
}

impl PartialEq for TestSpace {
    fn eq(&self, other: &Self) -> bool {
        self.outcomes == other.outcomes && self.tests == other.tests
    }
}

impl TestSpace {
    /// Builds a test space from outcome ids and tests given as id lists.
    ///
    /// Outcome ids are sorted lexicographically; tests keep their order.
    pub fn new<S, T, I>(outcomes: impl IntoIterator<Item = S>, tests: T) -> Result<Self>
    where
        S: Into<String>,
        T: IntoIterator<Item = I>,
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let mut ids: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateOutcome(w[0].clone()));
        }
        if let Some(bad) = ids.iter().find(|id| !valid_id(id)) {
            return Err(Error::UnknownOutcome(bad.clone()));
        }
        let index: HashMap<String, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut sets = Vec::new();
        for test in tests {
            let mut members = Vec::new();
            for id in test {
                let id = id.as_ref();
                let &i = index
                    .get(id)
                    .ok_or_else(|| Error::UnknownOutcome(id.to_string()))?;
                members.push(i);
            }
            sets.push(OutcomeSet::new(members));
        }
        Self::from_sets(ids, sets)
    }

    /// Builds a test space from sorted outcome ids and index-based tests.
    pub fn from_sets(outcomes: Vec<String>, tests: Vec<OutcomeSet>) -> Result<Self> {
        if outcomes.windows(2).any(|w| w[0] >= w[1]) {
            let mut sorted = outcomes.clone();
            sorted.sort();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateOutcome(w[0].clone()));
            }
            // Re-index tests against the sorted order.
            let names: Vec<Vec<String>> = tests
                .iter()
                .map(|t| t.iter().map(|i| outcomes[i].clone()).collect())
                .collect();
            return Self::new(outcomes, names);
        }
        let n = outcomes.len();
        let mut incidence = vec![Vec::new(); n];
        let mut test_lookup = HashMap::with_capacity(tests.len());
        for (t, set) in tests.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::EmptyTest(t));
            }
            if let Some(&x) = set.as_slice().last() {
                if x >= n {
                    return Err(Error::UnknownOutcome(format!("#{x}")));
                }
            }
            if let Some(&first) = test_lookup.get(set) {
                return Err(Error::DuplicateTest { first, second: t });
            }
            test_lookup.insert(set.clone(), t);
            for x in set.iter() {
                incidence[x].push(t);
            }
        }
        if let Some(x) = incidence.iter().position(Vec::is_empty) {
            return Err(Error::UncoveredOutcome(outcomes[x].clone()));
        }
        let index = outcomes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(TestSpace {
            outcomes,
            index,
            tests,
            incidence,
            test_lookup,
        })
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn tests(&self) -> &[OutcomeSet] {
        &self.tests
    }

    pub fn test(&self, i: usize) -> &OutcomeSet {
        &self.tests[i]
    }

    /// Indices of the tests containing outcome `x`.
    pub fn tests_containing(&self, x: usize) -> &[usize] {
        &self.incidence[x]
    }

    pub fn outcome_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownOutcome(id.to_string()))
    }

    pub fn outcome_id(&self, x: usize) -> &str {
        &self.outcomes[x]
    }

    /// Resolves ids to an outcome set.
    pub fn set<S: AsRef<str>>(&self, ids: impl IntoIterator<Item = S>) -> Result<OutcomeSet> {
        ids.into_iter()
            .map(|id| self.outcome_index(id.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(OutcomeSet::new)
    }

    /// Renders a set as `{a,b,c}`.
    pub fn format_set(&self, set: &OutcomeSet) -> String {
        let names: Vec<&str> = set.iter().map(|x| self.outcome_id(x)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// The sub-test-space formed by the given tests and their outcomes.
    pub fn restrict(&self, tests: &[usize]) -> Result<TestSpace> {
        let outcomes: OutcomeSet = tests.iter().flat_map(|&t| self.tests[t].iter()).collect();
        TestSpace::new(
            outcomes.iter().map(|x| self.outcome_id(x).to_string()),
            tests.iter().map(|&t| {
                self.tests[t]
                    .iter()
                    .map(|x| self.outcome_id(x))
                    .collect::<Vec<_>>()
            }),
        )
    }

    /// Maximum test cardinality.
    pub fn rank(&self) -> usize {
        self.tests.iter().map(OutcomeSet::len).max().unwrap_or(0)
    }

    pub fn is_uniform(&self) -> bool {
        let r = self.rank();
        self.tests.iter().all(|t| t.len() == r)
    }

    /// Index of the test equal to `set`, if any.
    pub fn test_index(&self, set: &OutcomeSet) -> Option<usize> {
        self.test_lookup.get(set).copied()
    }

    /// Pairs `(i, j)` where test `i` is a proper subset of test `j`.
    pub fn redundancy(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.tests.iter().enumerate() {
            for (j, b) in self.tests.iter().enumerate() {
                if i != j && a.len() < b.len() && a.is_subset(b) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `x ⊥ y`: distinct outcomes sharing a test.
    pub fn orthogonal(&self, x: &str, y: &str) -> Result<bool> {
        let (x, y) = (self.outcome_index(x)?, self.outcome_index(y)?);
        Ok(self.orthogonal_idx(x, y))
    }

    pub fn orthogonal_idx(&self, x: usize, y: usize) -> bool {
        x != y && self.incidence[x].iter().any(|&t| self.tests[t].contains(y))
    }

    /// First test containing `set`; `None` if `set` is not an event.
    pub fn witness(&self, set: &OutcomeSet) -> Option<usize> {
        match set.as_slice().first() {
            None => Some(0),
            Some(&x) => self.incidence[x]
                .iter()
                .copied()
                .find(|&t| set.is_subset(&self.tests[t])),
        }
    }

    pub fn is_event(&self, set: &OutcomeSet) -> bool {
        self.witness(set).is_some()
    }

    pub fn event_from_set(&self, members: OutcomeSet) -> Result<Event> {
        match self.witness(&members) {
            Some(witness_test) => Ok(Event {
                members,
                witness_test,
            }),
            None => Err(Error::NotAnEvent(
                self.format_set(&members)
                    .trim_matches(['{', '}'])
                    .to_string(),
            )),
        }
    }

    /// Resolves ids to an event.
    pub fn event<S: AsRef<str>>(&self, ids: impl IntoIterator<Item = S>) -> Result<Event> {
        self.event_from_set(self.set(ids)?)
    }

    /// `Σ_E 2^|E|`, saturating.
    pub fn event_enumeration_size(&self) -> u128 {
        self.tests.iter().fold(0u128, |acc, t| {
            let n = t.len() as u32;
            acc.saturating_add(if n >= 127 { u128::MAX } else { 1u128 << n })
        })
    }

    pub fn enumerate_events(&self) -> Result<Vec<Event>> {
        self.enumerate_events_with_cap(DEFAULT_EVENT_CAP)
    }

    /// All events, deduplicated across tests, in canonical set order.
    pub fn enumerate_events_with_cap(&self, cap: u128) -> Result<Vec<Event>> {
        let required = self.event_enumeration_size();
        if required > cap {
            return Err(Error::EventCapExceeded { required, cap });
        }
        let mut seen: HashMap<OutcomeSet, usize> = HashMap::new();
        for (t, test) in self.tests.iter().enumerate() {
            for mask in 0..(1u64 << test.len()) {
                seen.entry(test.subset_by_mask(mask)).or_insert(t);
            }
        }
        let mut events: Vec<Event> = seen
            .into_iter()
            .map(|(members, witness_test)| Event {
                members,
                witness_test,
            })
            .collect();
        events.sort_by(|a, b| a.members.cmp(&b.members));
        Ok(events)
    }

    /// `A oc C`: disjoint and `A ∪ C` is a test.
    pub fn complementary(&self, a: &OutcomeSet, c: &OutcomeSet) -> bool {
        a.is_disjoint(c) && self.test_lookup.contains_key(&a.union(c))
    }

    /// Every event complementary to `a`, in canonical order.
    pub fn complements(&self, a: &OutcomeSet) -> Vec<OutcomeSet> {
        let candidates: Box<dyn Iterator<Item = usize>> = match a.as_slice().first() {
            None => Box::new(0..self.tests.len()),
            Some(&x) => Box::new(self.incidence[x].iter().copied()),
        };
        let mut out: Vec<OutcomeSet> = candidates
            .filter(|&t| a.is_subset(&self.tests[t]))
            .map(|t| self.tests[t].difference(a))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `A ∼ B`: some event is complementary to both.
    pub fn perspective(&self, a: &OutcomeSet, b: &OutcomeSet) -> bool {
        self.complements(a).iter().any(|c| self.complementary(b, c))
    }

    /// `A ⊥ B`: disjoint with `A ∪ B` an event.
    pub fn orthogonal_events(&self, a: &OutcomeSet, b: &OutcomeSet) -> bool {
        a.is_disjoint(b) && self.is_event(&a.union(b))
    }

    /// Serializes to the `.tsp` text format.
    pub fn to_tsp(&self) -> String {
        let mut out = String::from("outcomes");
        for id in &self.outcomes {
            out.push(' ');
            out.push_str(id);
        }
        out.push('\n');
        for test in &self.tests {
            out.push_str("test");
            for x in test.iter() {
                out.push(' ');
                out.push_str(&self.outcomes[x]);
            }
            out.push('\n');
        }
        out
    }

    /// Parses the `.tsp` text format.
    ///
    /// ```text
    /// # comment
    /// outcomes a b c d e
    /// test a b c
    /// test c d e
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut outcomes: Option<Vec<String>> = None;
        let mut known: HashMap<&str, ()> = HashMap::new();
        let mut tests: Vec<Vec<String>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = tokenize(content);
            let Some((col, keyword)) = tokens.next() else {
                continue;
            };
            match keyword {
                "outcomes" => {
                    if outcomes.is_some() {
                        return Err(Error::parse(line, col, "second `outcomes` line"));
                    }
                    let mut ids = Vec::new();
                    for (col, tok) in tokens {
                        if known.insert(tok, ()).is_some() {
                            return Err(Error::DuplicateOutcome(tok.to_string()));
                        }
                        if !valid_id(tok) {
                            return Err(Error::parse(line, col, format!("invalid id `{tok}`")));
                        }
                        ids.push(tok.to_string());
                    }
                    if ids.is_empty() {
                        return Err(Error::parse(line, col, "no outcomes declared"));
                    }
                    outcomes = Some(ids);
                }
                "test" => {
                    if outcomes.is_none() {
                        return Err(Error::parse(line, col, "`test` before `outcomes`"));
                    }
                    let mut members: Vec<String> = Vec::new();
                    for (col, tok) in tokens {
                        if !known.contains_key(tok) {
                            return Err(Error::parse(
                                line,
                                col,
                                format!("undeclared outcome `{tok}`"),
                            ));
                        }
                        if members.iter().any(|m| m == tok) {
                            return Err(Error::parse(
                                line,
                                col,
                                format!("outcome `{tok}` repeated in test"),
                            ));
                        }
                        members.push(tok.to_string());
                    }
                    if members.is_empty() {
                        return Err(Error::EmptyTest(tests.len()));
                    }
                    tests.push(members);
                }
                other => {
                    return Err(Error::parse(
                        line,
                        col,
                        format!("unknown keyword `{other}`"),
                    ));
                }
            }
        }
        let outcomes = outcomes.ok_or_else(|| Error::parse(1, 1, "missing `outcomes` line"))?;
        Self::new(outcomes, tests)
    }
}

impl fmt::Display for TestSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tsp())
    }
}

impl std::str::FromStr for TestSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TestSpace::parse(s)
    }
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && !id.chars().any(|c| c.is_whitespace() || c == '#')
}

/// Whitespace-separated tokens with their 1-based character columns.
pub(crate) fn tokenize(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0usize;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let token = &tail[..len];
        let col = line[..offset + start].chars().count() + 1;
        offset += start + len;
        rest = &tail[len..];
        Some((col, token))
    })
}
