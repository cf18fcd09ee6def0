//! Algebraicity and the logic `Π(X, 𝔄) = ℰ/∼` of an algebraic test space.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::Orthoalgebra;
use crate::space::{Event, OutcomeSet, TestSpace};

/// Events `A ∼ B` and `B oc C` with `A` not complementary to `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicityViolation {
    pub a: OutcomeSet,
    pub b: OutcomeSet,
    pub c: OutcomeSet,
}

impl AlgebraicityViolation {
    pub fn describe(&self, ts: &TestSpace) -> String {
        format!(
            "A={} ∼ B={} and B oc C={}, but A and C are not complementary",
            ts.format_set(&self.a),
            ts.format_set(&self.b),
            ts.format_set(&self.c)
        )
    }
}

/// Complement lists for every event, indexed like `events`.
fn complement_table(ts: &TestSpace, events: &[Event]) -> Vec<Vec<OutcomeSet>> {
    events.iter().map(|e| ts.complements(&e.members)).collect()
}

/// Decides algebraicity. On failure the first violating triple in canonical
/// event order is returned.
pub fn is_algebraic(ts: &TestSpace) -> Result<(bool, Option<AlgebraicityViolation>)> {
    let events = ts.enumerate_events()?;
    let comps = complement_table(ts, &events);
    Ok(match find_violation(&events, &comps) {
        None => (true, None),
        Some(v) => (false, Some(v)),
    })
}

/// Events sharing a complement are perspective, so algebraicity holds iff
/// every such group has one common complement list.
fn find_violation(events: &[Event], comps: &[Vec<OutcomeSet>]) -> Option<AlgebraicityViolation> {
    let mut by_complement: HashMap<&OutcomeSet, Vec<usize>> = HashMap::new();
    for (i, cs) in comps.iter().enumerate() {
        for c in cs {
            by_complement.entry(c).or_default().push(i);
        }
    }
    let mut keys: Vec<&OutcomeSet> = by_complement.keys().copied().collect();
    keys.sort();
    for c in keys {
        let group = &by_complement[c];
        for &a in group {
            for &b in group {
                if a == b || comps[a] == comps[b] {
                    continue;
                }
                if let Some(c2) = comps[b].iter().find(|x| comps[a].binary_search(x).is_err()) {
                    return Some(AlgebraicityViolation {
                        a: events[a].members.clone(),
                        b: events[b].members.clone(),
                        c: c2.clone(),
                    });
                }
            }
        }
    }
    None
}

/// The logic of an algebraic test space.
#[derive(Debug, Clone)]
pub struct Logic {
    algebra: Orthoalgebra,
    events: Vec<Event>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    lookup: HashMap<OutcomeSet, usize>,
}

impl Logic {
    pub fn algebra(&self) -> &Orthoalgebra {
        &self.algebra
    }

    /// Number of ∼-classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Class id `p(A)` of an event.
    pub fn class_of(&self, members: &OutcomeSet) -> Option<usize> {
        self.lookup.get(members).map(|&e| self.class_of[e])
    }

    /// Canonically smallest event of a class.
    pub fn representative(&self, class: usize) -> &OutcomeSet {
        &self.events[self.classes[class][0]].members
    }

    pub fn class_members(&self, class: usize) -> impl Iterator<Item = &OutcomeSet> + '_ {
        self.classes[class].iter().map(|&e| &self.events[e].members)
    }

    pub fn zero(&self) -> usize {
        self.algebra.zero()
    }

    pub fn one(&self) -> usize {
        self.algebra.one()
    }

    pub fn osum(&self, p: usize, q: usize) -> Option<usize> {
        self.algebra.osum(p, q)
    }

    pub fn ocomp(&self, p: usize) -> usize {
        self.algebra.ocomp(p)
    }
}

/// Builds `Π(X, 𝔄)`. Refuses non-algebraic spaces.
///
/// `p(A) ⊕ p(B)` is recorded for every orthogonal pair of representatives;
/// two pairs that disagree abort the build, as do failures of the
/// orthoalgebra axioms.
pub fn build_logic(ts: &TestSpace) -> Result<Logic> {
    let events = ts.enumerate_events()?;
    let comps = complement_table(ts, &events);
    if let Some(v) = find_violation(&events, &comps) {
        return Err(Error::NotAlgebraic(v.describe(ts)));
    }
    let lookup: HashMap<OutcomeSet, usize> = events
        .iter()
        .enumerate()
        .map(|(i, e)| (e.members.clone(), i))
        .collect();

    // On an algebraic space perspective events have equal complement lists.
    let mut class_by_comps: HashMap<&[OutcomeSet], usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(events.len());
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, cs) in comps.iter().enumerate() {
        let next = classes.len();
        let c = *class_by_comps.entry(cs.as_slice()).or_insert(next);
        if c == next {
            classes.push(Vec::new());
        }
        classes[c].push(i);
        class_of.push(c);
    }

    let n = classes.len();
    let mut table: Vec<Option<usize>> = vec![None; n * n];
    for (u, event) in events.iter().enumerate() {
        let union = &event.members;
        let cu = class_of[u];
        for mask in 0..(1u64 << union.len()) {
            let a = union.subset_by_mask(mask);
            let b = union.difference(&a);
            let (ca, cb) = (class_of[lookup[&a]], class_of[lookup[&b]]);
            let slot = &mut table[ca * n + cb];
            match *slot {
                Some(old) if old != cu => {
                    return Err(Error::AxiomViolation(format!(
                        "p({}) ⊕ p({}) depends on representatives",
                        ts.format_set(&a),
                        ts.format_set(&b)
                    )))
                }
                _ => *slot = Some(cu),
            }
        }
    }

    let zero = class_of[lookup[&OutcomeSet::empty()]];
    let one = class_of[lookup[ts.test(0)]];
    let labels: Vec<String> = classes
        .iter()
        .map(|members| ts.format_set(&events[members[0]].members))
        .collect();
    let algebra = Orthoalgebra::from_table(labels, zero, one, table)?;

    // p(A)′ must be the class of any complement of A.
    for (i, cs) in comps.iter().enumerate() {
        for c in cs {
            if class_of[lookup[c]] != algebra.ocomp(class_of[i]) {
                return Err(Error::AxiomViolation(format!(
                    "complement {} of {} is not in p(A)′",
                    ts.format_set(c),
                    ts.format_set(&events[i].members)
                )));
            }
        }
    }

    Ok(Logic {
        algebra,
        events,
        class_of,
        classes,
        lookup,
    })
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "logic with {} classes", self.len())
    }
}
