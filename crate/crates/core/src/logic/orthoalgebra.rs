//! Finite orthoalgebras given by an explicit partial-sum table.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::space::tokenize;

/// Dense bit rows used for order computations.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            words,
            bits: vec![0; words * n],
        }
    }

    fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words + col / 64] |= 1 << (col % 64);
    }

    fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.words + col / 64] >> (col % 64) & 1 == 1
    }

    fn row(&self, row: usize) -> &[u64] {
        &self.bits[row * self.words..(row + 1) * self.words]
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let b = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(w * 64 + b)
        })
    })
}

fn is_subset_words(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// A finite orthoalgebra `(L, ⊕, ′, 0, 1)`.
///
/// Construction verifies the four orthoalgebra axioms, so every value of
/// this type satisfies them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orthoalgebra {
    labels: Vec<String>,
    zero: usize,
    one: usize,
    sum: Vec<Option<usize>>,
    comp: Vec<usize>,
    /// `up.get(p, q)` iff `p ≤ q`.
    up: BitMatrix,
    /// `down.get(q, p)` iff `p ≤ q`.
    down: BitMatrix,
}

/// Outcome of the orthocoherence / join / orthomodularity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagReport {
    pub orthocoherent: bool,
    pub osum_is_join: bool,
    pub omp: bool,
    /// First failure found for each flag, in the order above.
    pub witnesses: [Option<String>; 3],
}

impl FlagReport {
    pub fn flags_agree(&self) -> bool {
        self.orthocoherent == self.osum_is_join && self.osum_is_join == self.omp
    }
}

impl Orthoalgebra {
    /// Builds an orthoalgebra from `p ⊕ q = r` triples.
    ///
    /// Sums are symmetric and `p ⊕ 0 = p` is implied; conflicting entries
    /// and axiom failures are rejected.
    pub fn new(
        labels: Vec<String>,
        zero: usize,
        one: usize,
        sums: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let n = labels.len();
        if zero >= n || one >= n {
            return Err(Error::AxiomViolation("zero or one out of range".into()));
        }
        let mut table: Vec<Option<usize>> = vec![None; n * n];
        let mut put = |p: usize, q: usize, r: usize| -> Result<()> {
            if p >= n || q >= n || r >= n {
                return Err(Error::AxiomViolation(format!(
                    "sum entry ({p},{q},{r}) out of range"
                )));
            }
            for (a, b) in [(p, q), (q, p)] {
                match table[a * n + b] {
                    Some(old) if old != r => {
                        return Err(Error::AxiomViolation(format!(
                            "{} ⊕ {} given as both {} and {}",
                            labels[a], labels[b], labels[old], labels[r]
                        )))
                    }
                    _ => table[a * n + b] = Some(r),
                }
            }
            Ok(())
        };
        for p in 0..n {
            put(p, zero, p)?;
        }
        for (p, q, r) in sums {
            put(p, q, r)?;
        }
        Self::from_table(labels, zero, one, table)
    }

    /// Builds from a dense `n × n` table and verifies the axioms.
    pub fn from_table(
        labels: Vec<String>,
        zero: usize,
        one: usize,
        sum: Vec<Option<usize>>,
    ) -> Result<Self> {
        let n = labels.len();
        if sum.len() != n * n || zero >= n || one >= n {
            return Err(Error::AxiomViolation("malformed sum table".into()));
        }
        if sum.iter().flatten().any(|&r| r >= n) {
            return Err(Error::AxiomViolation("sum table entry out of range".into()));
        }
        let mut oa = Orthoalgebra {
            labels,
            zero,
            one,
            sum,
            comp: Vec::new(),
            up: BitMatrix::new(n),
            down: BitMatrix::new(n),
        };
        oa.comp = oa.verify_axioms()?;
        for p in 0..n {
            for r in 0..n {
                if let Some(q) = oa.osum(p, r) {
                    oa.up.set(p, q);
                    oa.down.set(q, p);
                }
            }
        }
        Ok(oa)
    }

    /// Checks axioms (1)–(4) and returns the orthocomplement map.
    fn verify_axioms(&self) -> Result<Vec<usize>> {
        let n = self.len();
        let l = |p: usize| self.labels[p].as_str();
        for p in 0..n {
            for q in 0..n {
                if self.osum(p, q) != self.osum(q, p) {
                    return Err(Error::AxiomViolation(format!(
                        "{} ⊕ {} is not commutative",
                        l(p),
                        l(q)
                    )));
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                let pq = self.osum(p, q);
                for r in 0..n {
                    let left = self.osum(q, r).and_then(|qr| self.osum(p, qr));
                    let right = pq.and_then(|pq| self.osum(pq, r));
                    if left != right {
                        return Err(Error::AxiomViolation(format!(
                            "({0} ⊕ {1}) ⊕ {2} and {0} ⊕ ({1} ⊕ {2}) differ",
                            l(p),
                            l(q),
                            l(r)
                        )));
                    }
                }
            }
        }
        for p in 0..n {
            if p != self.zero && self.osum(p, p).is_some() {
                return Err(Error::AxiomViolation(format!("{0} ⊕ {0} is defined", l(p))));
            }
            if self.osum(p, self.zero) != Some(p) {
                return Err(Error::AxiomViolation(format!("{} ⊕ 0 ≠ {}", l(p), l(p))));
            }
        }
        let mut comp = Vec::with_capacity(n);
        for p in 0..n {
            let mut found = (0..n).filter(|&q| self.osum(p, q) == Some(self.one));
            match (found.next(), found.next()) {
                (Some(q), None) => comp.push(q),
                (None, _) => {
                    return Err(Error::AxiomViolation(format!("{} has no complement", l(p))))
                }
                (Some(a), Some(b)) => {
                    return Err(Error::AxiomViolation(format!(
                        "{} has complements {} and {}",
                        l(p),
                        l(a),
                        l(b)
                    )))
                }
            }
        }
        Ok(comp)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn osum(&self, p: usize, q: usize) -> Option<usize> {
        self.sum[p * self.len() + q]
    }

    /// `p ⊥ q`: the sum is defined.
    pub fn orthogonal(&self, p: usize, q: usize) -> bool {
        self.osum(p, q).is_some()
    }

    pub fn ocomp(&self, p: usize) -> usize {
        self.comp[p]
    }

    /// Folds `⊕` over `items`, starting from 0.
    pub fn osum_all(&self, items: impl IntoIterator<Item = usize>) -> Option<usize> {
        items
            .into_iter()
            .try_fold(self.zero, |acc, p| self.osum(acc, p))
    }

    /// `p ≤ q` iff `p ⊕ r = q` for some `r`.
    pub fn natural_order(&self, p: usize, q: usize) -> bool {
        self.up.get(p, q)
    }

    /// `p ≤ q` computed as `p ⊥ q′`.
    pub fn leq_via_complement(&self, p: usize, q: usize) -> bool {
        self.orthogonal(p, self.ocomp(q))
    }

    /// Least upper bound in the natural order, if it exists.
    pub fn join(&self, p: usize, q: usize) -> Option<usize> {
        let ub: Vec<u64> = self
            .up
            .row(p)
            .iter()
            .zip(self.up.row(q))
            .map(|(a, b)| a & b)
            .collect();
        let least = iter_bits(&ub).find(|&u| is_subset_words(&ub, self.up.row(u)));
        least
    }

    /// Greatest lower bound in the natural order, if it exists.
    pub fn meet(&self, p: usize, q: usize) -> Option<usize> {
        let lb: Vec<u64> = self
            .down
            .row(p)
            .iter()
            .zip(self.down.row(q))
            .map(|(a, b)| a & b)
            .collect();
        let greatest = iter_bits(&lb).find(|&m| is_subset_words(&lb, self.down.row(m)));
        greatest
    }

    /// Orthocoherence, `⊕ = ∨` on orthogonal pairs, and orthomodularity of
    /// `(L, ≤, ′)`, each decided independently.
    pub fn check_flags(&self) -> FlagReport {
        let coherence = self.orthocoherence_failure();
        let join = self.osum_join_failure();
        let omp = self.omp_failure();
        FlagReport {
            orthocoherent: coherence.is_none(),
            osum_is_join: join.is_none(),
            omp: omp.is_none(),
            witnesses: [coherence, join, omp],
        }
    }

    fn orthocoherence_failure(&self) -> Option<String> {
        let n = self.len();
        for p in 0..n {
            for q in 0..n {
                let Some(pq) = self.osum(p, q) else { continue };
                for r in 0..n {
                    if self.orthogonal(q, r) && self.orthogonal(p, r) && !self.orthogonal(pq, r) {
                        return Some(format!(
                            "{} ⊕ {} ⊕ {} undefined",
                            self.label(p),
                            self.label(q),
                            self.label(r)
                        ));
                    }
                }
            }
        }
        None
    }

    fn osum_join_failure(&self) -> Option<String> {
        let n = self.len();
        for p in 0..n {
            for q in p..n {
                let Some(s) = self.osum(p, q) else { continue };
                match self.join(p, q) {
                    Some(j) if j == s => {}
                    Some(j) => {
                        return Some(format!(
                            "{} ∨ {} = {} but {} ⊕ {} = {}",
                            self.label(p),
                            self.label(q),
                            self.label(j),
                            self.label(p),
                            self.label(q),
                            self.label(s)
                        ))
                    }
                    None => {
                        return Some(format!(
                            "{} ∨ {} does not exist",
                            self.label(p),
                            self.label(q)
                        ))
                    }
                }
            }
        }
        None
    }

    fn omp_failure(&self) -> Option<String> {
        let n = self.len();
        let l = |p: usize| self.label(p);
        let leq = |p: usize, q: usize| self.natural_order(p, q);
        // Bounded partial order.
        for p in 0..n {
            if !leq(p, p) {
                return Some(format!("{} ≰ {}", l(p), l(p)));
            }
            if !leq(self.zero, p) || !leq(p, self.one) {
                return Some(format!("{} is not between 0 and 1", l(p)));
            }
            for q in 0..n {
                if p != q && leq(p, q) && leq(q, p) {
                    return Some(format!("{} and {} are mutually below", l(p), l(q)));
                }
                if !leq(p, q) {
                    continue;
                }
                for r in 0..n {
                    if leq(q, r) && !leq(p, r) {
                        return Some(format!(
                            "order not transitive at {}, {}, {}",
                            l(p),
                            l(q),
                            l(r)
                        ));
                    }
                }
            }
        }
        // Orthocomplementation.
        for p in 0..n {
            let pc = self.ocomp(p);
            if self.ocomp(pc) != p {
                return Some(format!("′ is not an involution at {}", l(p)));
            }
            if self.meet(p, pc) != Some(self.zero) || self.join(p, pc) != Some(self.one) {
                return Some(format!(
                    "{} and {}′ are not lattice complements",
                    l(p),
                    l(p)
                ));
            }
            for q in 0..n {
                if leq(p, q) && !leq(self.ocomp(q), pc) {
                    return Some(format!("′ does not reverse {} ≤ {}", l(p), l(q)));
                }
            }
        }
        // Orthogonal joins exist; orthomodular law.
        for p in 0..n {
            for q in 0..n {
                if leq(p, self.ocomp(q)) && self.join(p, q).is_none() {
                    return Some(format!(
                        "{} ≤ {}′ but {} ∨ {} does not exist",
                        l(p),
                        l(q),
                        l(p),
                        l(q)
                    ));
                }
                if !leq(p, q) {
                    continue;
                }
                let law = self.meet(q, self.ocomp(p)).and_then(|m| self.join(p, m));
                if law != Some(q) {
                    return Some(format!("orthomodular law fails for {} ≤ {}", l(p), l(q)));
                }
            }
        }
        None
    }

    /// True iff `map` is a bijection onto `other` preserving 0, 1 and `⊕`
    /// (including definedness).
    pub fn is_isomorphism(&self, other: &Orthoalgebra, map: &[usize]) -> bool {
        let n = self.len();
        if other.len() != n || map.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &x in map {
            if x >= n || std::mem::replace(&mut hit[x], true) {
                return false;
            }
        }
        if map[self.zero] != other.zero || map[self.one] != other.one {
            return false;
        }
        (0..n)
            .all(|p| (0..n).all(|q| self.osum(p, q).map(|s| map[s]) == other.osum(map[p], map[q])))
    }

    /// Backtracking search for an isomorphism `self → other`.
    pub fn find_isomorphism(&self, other: &Orthoalgebra) -> Option<Vec<usize>> {
        let n = self.len();
        if other.len() != n {
            return None;
        }
        let sig = |oa: &Orthoalgebra, p: usize| {
            let below = (0..n).filter(|&q| oa.natural_order(q, p)).count();
            let above = (0..n).filter(|&q| oa.natural_order(p, q)).count();
            let perp = (0..n).filter(|&q| oa.orthogonal(p, q)).count();
            (below, above, perp)
        };
        let sig_a: Vec<_> = (0..n).map(|p| sig(self, p)).collect();
        let sig_b: Vec<_> = (0..n).map(|p| sig(other, p)).collect();
        let mut multiset_a = sig_a.clone();
        let mut multiset_b = sig_b.clone();
        multiset_a.sort_unstable();
        multiset_b.sort_unstable();
        if multiset_a != multiset_b {
            return None;
        }
        // Small down-sets first, so atoms are placed before their sums.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&p| (sig_a[p].0, p));
        let mut map = vec![usize::MAX; n];
        let mut inv = vec![usize::MAX; n];
        let search = Search {
            a: self,
            b: other,
            sig_a: &sig_a,
            sig_b: &sig_b,
            order: &order,
        };
        search
            .extend(0, &mut map, &mut inv)
            .then_some(map)
            .filter(|m| self.is_isomorphism(other, m))
    }

    /// Parses the orthoalgebra text format:
    ///
    /// ```text
    /// elements 0 a a' b b' 1
    /// zero 0
    /// one 1
    /// sum a a' 1
    /// sum b b' 1
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut labels: Option<Vec<String>> = None;
        let mut zero = None;
        let mut one = None;
        let mut sums = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<(usize, &str)> = tokenize(content).collect();
            let Some(&(col, keyword)) = tokens.first() else {
                continue;
            };
            let lookup = |(col, tok): (usize, &str)| -> Result<usize> {
                labels
                    .as_ref()
                    .ok_or_else(|| Error::parse(line, col, "`elements` line must come first"))?
                    .iter()
                    .position(|l| l == tok)
                    .ok_or_else(|| Error::parse(line, col, format!("unknown element `{tok}`")))
            };
            let arity = |k: usize| -> Result<()> {
                if tokens.len() == k + 1 {
                    Ok(())
                } else {
                    Err(Error::parse(
                        line,
                        col,
                        format!("`{keyword}` takes {k} argument(s)"),
                    ))
                }
            };
            match keyword {
                "elements" => {
                    if labels.is_some() {
                        return Err(Error::parse(line, col, "second `elements` line"));
                    }
                    let names: Vec<String> =
                        tokens[1..].iter().map(|(_, t)| t.to_string()).collect();
                    for (i, (c, t)) in tokens[1..].iter().enumerate() {
                        if names[..i].iter().any(|m| m == t) {
                            return Err(Error::parse(line, *c, format!("duplicate element `{t}`")));
                        }
                    }
                    if names.is_empty() {
                        return Err(Error::parse(line, col, "no elements"));
                    }
                    labels = Some(names);
                }
                "zero" => {
                    arity(1)?;
                    zero = Some(lookup(tokens[1])?);
                }
                "one" => {
                    arity(1)?;
                    one = Some(lookup(tokens[1])?);
                }
                "sum" => {
                    arity(3)?;
                    sums.push((lookup(tokens[1])?, lookup(tokens[2])?, lookup(tokens[3])?));
                }
                other => {
                    return Err(Error::parse(
                        line,
                        col,
                        format!("unknown keyword `{other}`"),
                    ))
                }
            }
        }
        let labels = labels.ok_or_else(|| Error::parse(1, 1, "missing `elements` line"))?;
        let zero = zero.ok_or_else(|| Error::parse(1, 1, "missing `zero` line"))?;
        let one = one.ok_or_else(|| Error::parse(1, 1, "missing `one` line"))?;
        Self::new(labels, zero, one, sums)
    }

    /// Serializes to the text format; sums with 0 are left implicit.
    pub fn to_text(&self) -> String {
        let mut out = String::from("elements");
        for l in &self.labels {
            out.push(' ');
            out.push_str(l);
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "zero {}", self.label(self.zero));
        let _ = writeln!(out, "one {}", self.label(self.one));
        for p in 0..self.len() {
            for q in p..self.len() {
                if p == self.zero || q == self.zero {
                    continue;
                }
                if let Some(r) = self.osum(p, q) {
                    let _ = writeln!(
                        out,
                        "sum {} {} {}",
                        self.label(p),
                        self.label(q),
                        self.label(r)
                    );
                }
            }
        }
        out
    }

    /// The Boolean algebra of subsets of `{1..=n}`; elements are labelled by
    /// their members (`0` for the empty set, `12` for `{1,2}` when `n < 10`,
    /// `1.12` style otherwise).
    pub fn boolean(n: usize) -> Self {
        assert!(n < 16, "boolean algebra too large");
        let size = 1usize << n;
        let label = |mask: usize| -> String {
            if mask == 0 {
                return "0".into();
            }
            let parts: Vec<String> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (i + 1).to_string())
                .collect();
            parts.join(if n < 10 { "" } else { "." })
        };
        let labels = (0..size).map(label).collect();
        let mut table = vec![None; size * size];
        for p in 0..size {
            for q in 0..size {
                if p & q == 0 {
                    table[p * size + q] = Some(p | q);
                }
            }
        }
        Self::from_table(labels, 0, size - 1, table).expect("boolean algebra satisfies the axioms")
    }

    /// The horizontal sum of `n` four-element Boolean algebras: `0`, `1`,
    /// and pairs `aᵢ, aᵢ'`.
    pub fn mo(n: usize) -> Self {
        let mut labels = vec!["0".to_string()];
        for i in 0..n {
            let base = if n <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("a{i}")
            };
            labels.push(base.clone());
            labels.push(format!("{base}'"));
        }
        labels.push("1".into());
        let one = labels.len() - 1;
        let sums = (0..n).map(|i| (1 + 2 * i, 2 + 2 * i, one));
        Self::new(labels, 0, one, sums).expect("MOn satisfies the axioms")
    }
}

struct Search<'a> {
    a: &'a Orthoalgebra,
    b: &'a Orthoalgebra,
    sig_a: &'a [(usize, usize, usize)],
    sig_b: &'a [(usize, usize, usize)],
    order: &'a [usize],
}

impl Search<'_> {
    fn extend(&self, depth: usize, map: &mut [usize], inv: &mut [usize]) -> bool {
        let Some(&p) = self.order.get(depth) else {
            return true;
        };
        let candidates: Vec<usize> = if p == self.a.zero {
            vec![self.b.zero]
        } else if p == self.a.one {
            vec![self.b.one]
        } else {
            (0..self.b.len()).collect()
        };
        for x in candidates {
            if inv[x] != usize::MAX || self.sig_a[p] != self.sig_b[x] {
                continue;
            }
            map[p] = x;
            inv[x] = p;
            if self.consistent(p, map, inv) && self.extend(depth + 1, map, inv) {
                return true;
            }
            map[p] = usize::MAX;
            inv[x] = usize::MAX;
        }
        false
    }

    /// Checks `⊕` between `p` and every already-placed element.
    fn consistent(&self, p: usize, map: &[usize], inv: &[usize]) -> bool {
        let x = map[p];
        for q in 0..self.a.len() {
            let y = map[q];
            if y == usize::MAX {
                continue;
            }
            let s = self.a.osum(p, q);
            let t = self.b.osum(x, y);
            if s.is_some() != t.is_some() {
                return false;
            }
            if let (Some(s), Some(t)) = (s, t) {
                if map[s] != usize::MAX && map[s] != t {
                    return false;
                }
                if inv[t] != usize::MAX && inv[t] != s {
                    return false;
                }
            }
        }
        true
    }
}
