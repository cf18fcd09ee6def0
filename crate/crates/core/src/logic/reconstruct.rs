//! The test space `(X_L, 𝔄_L)` of an orthoalgebra and the round trip back
//! to its logic.

use crate::error::{Error, Result};
use crate::logic::{build_logic, Logic, Orthoalgebra};
use crate::space::{OutcomeSet, TestSpace};

/// `X_L = L ∖ {0}`; tests are the sets of non-zero elements summing to 1.
pub fn oa_to_test_space(l: &Orthoalgebra) -> Result<TestSpace> {
    let outcomes: Vec<usize> = (0..l.len()).filter(|&p| p != l.zero()).collect();
    let mut tests: Vec<Vec<usize>> = Vec::new();
    let mut chosen = Vec::new();
    collect_unit_sums(l, &outcomes, 0, l.zero(), &mut chosen, &mut tests);
    let names = |set: &Vec<usize>| -> Vec<&str> { set.iter().map(|&p| l.label(p)).collect() };
    let mut named: Vec<Vec<&str>> = tests.iter().map(names).collect();
    if named.is_empty() {
        return Err(Error::AxiomViolation("no subset sums to 1".into()));
    }
    named.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let ts = TestSpace::new(outcomes.iter().map(|&p| l.label(p)), named)?;
    Ok(canonical_order(ts))
}

fn collect_unit_sums(
    l: &Orthoalgebra,
    outcomes: &[usize],
    start: usize,
    acc: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for (i, &p) in outcomes.iter().enumerate().skip(start) {
        let Some(s) = l.osum(acc, p) else { continue };
        chosen.push(p);
        if s == l.one() {
            // Only 0 is orthogonal to 1, so the set cannot grow further.
            out.push(chosen.clone());
        } else {
            collect_unit_sums(l, outcomes, i + 1, s, chosen, out);
        }
        chosen.pop();
    }
}

/// Re-sorts tests by the canonical index-set order.
fn canonical_order(ts: TestSpace) -> TestSpace {
    let mut tests: Vec<OutcomeSet> = ts.tests().to_vec();
    tests.sort();
    TestSpace::from_sets(ts.outcomes().to_vec(), tests).expect("reordering keeps invariants")
}

/// An isomorphism `Π(X_L, 𝔄_L) → L`, found by backtracking.
#[derive(Debug, Clone)]
pub struct Roundtrip {
    pub space: TestSpace,
    pub logic: Logic,
    /// `map[class] = element of L`.
    pub map: Vec<usize>,
}

/// Rebuilds `L` from its test space; `Ok(None)` if no isomorphism exists.
pub fn roundtrip_logic(l: &Orthoalgebra) -> Result<Option<Roundtrip>> {
    let space = oa_to_test_space(l)?;
    let logic = build_logic(&space)?;
    Ok(logic
        .algebra()
        .find_isomorphism(l)
        .map(|map| Roundtrip { space, logic, map }))
}

/// The canonical map `p({e₁,…,eₙ}) ↦ e₁ ⊕ ⋯ ⊕ eₙ`, if it is an isomorphism.
pub fn canonical_isomorphism(
    l: &Orthoalgebra,
    space: &TestSpace,
    logic: &Logic,
) -> Option<Vec<usize>> {
    let map: Option<Vec<usize>> = (0..logic.len())
        .map(|class| {
            let rep = logic.representative(class);
            l.osum_all(
                rep.iter()
                    .map(|x| l.index_of(space.outcome_id(x)))
                    .collect::<Option<Vec<_>>>()?,
            )
        })
        .collect();
    map.filter(|m| logic.algebra().is_isomorphism(l, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_three_tests_are_partitions() {
        let l = Orthoalgebra::boolean(3);
        let ts = oa_to_test_space(&l).unwrap();
        assert_eq!(ts.outcome_count(), 7);
        // Bell(3) = 5 partitions of {1,2,3}.
        assert_eq!(ts.tests().len(), 5);
        assert!(ts.test_index(&ts.set(["1", "23"]).unwrap()).is_some());
        assert!(ts.test_index(&ts.set(["1", "2", "3"]).unwrap()).is_some());
        assert!(ts.test_index(&ts.set(["123"]).unwrap()).is_some());
    }

    #[test]
    fn mo2_tests() {
        let ts = oa_to_test_space(&Orthoalgebra::mo(2)).unwrap();
        let mut tests: Vec<String> = ts.tests().iter().map(|t| ts.format_set(t)).collect();
        tests.sort();
        assert_eq!(tests, ["{1}", "{a,a'}", "{b,b'}"]);
    }

    #[test]
    fn two_element_algebra() {
        let l = Orthoalgebra::parse("elements 0 1\nzero 0\none 1").unwrap();
        let ts = oa_to_test_space(&l).unwrap();
        assert_eq!(ts.to_tsp(), "outcomes 1\ntest 1\n");
        let rt = roundtrip_logic(&l).unwrap().unwrap();
        assert_eq!(rt.map.len(), 2);
    }

    #[test]
    fn roundtrips_find_isomorphisms() {
        for l in [
            Orthoalgebra::boolean(2),
            Orthoalgebra::boolean(3),
            Orthoalgebra::mo(2),
        ] {
            let rt = roundtrip_logic(&l).unwrap().expect("isomorphism");
            assert!(rt.logic.algebra().is_isomorphism(&l, &rt.map));
            let canon = canonical_isomorphism(&l, &rt.space, &rt.logic).expect("canonical map");
            assert!(rt.logic.algebra().is_isomorphism(&l, &canon));
        }
    }
}
