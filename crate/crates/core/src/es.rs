//! Finite event structures.
//!
//! Causality is given by covering edges and closed reflexively and
//! transitively into `≤`. Consistency is given by the antichain of minimal
//! inconsistent sets: a finite set is consistent iff it contains none of them.
//! Events are indexed `0..len()` in the order they were supplied; names are
//! opaque identifiers.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Rule, ValidationReport};
use crate::tag::{tag, Side};
use crate::util::product;

/// A set of events of one event structure, as a bitset over event indices.
pub type EventSet = FixedBitSet;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "EsDoc", into = "EsDoc")]
pub struct EventStructure {
    names: Vec<String>,
    index: HashMap<String, usize>,
    covering: Vec<(usize, usize)>,
    min_inconsistent: Vec<EventSet>,
    down: Vec<EventSet>,
    up: Vec<EventSet>,
    conflicts_of: Vec<Vec<usize>>,
    acyclic: bool,
    configs: OnceLock<Vec<EventSet>>,
}

/// JSON form of an event structure. Lists are emitted sorted.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EsDoc {
    pub events: Vec<String>,
    #[serde(default)]
    pub covering: Vec<(String, String)>,
    #[serde(default)]
    pub min_inconsistent: Vec<Vec<String>>,
}

impl TryFrom<EsDoc> for EventStructure {
    type Error = Error;

    fn try_from(doc: EsDoc) -> Result<Self> {
        let covering: Vec<(&str, &str)> =
            doc.covering.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let events: Vec<&str> = doc.events.iter().map(String::as_str).collect();
        let sets: Vec<Vec<&str>> = doc
            .min_inconsistent
            .iter()
            .map(|m| m.iter().map(String::as_str).collect())
            .collect();
        EventStructure::new(&events, &covering, &sets)
    }
}

impl From<EventStructure> for EsDoc {
    fn from(es: EventStructure) -> Self {
        let mut events = es.names.clone();
        events.sort();
        let mut covering: Vec<(String, String)> = es
            .covering
            .iter()
            .map(|&(a, b)| (es.names[a].clone(), es.names[b].clone()))
            .collect();
        covering.sort();
        let mut min_inconsistent: Vec<Vec<String>> =
            es.min_inconsistent.iter().map(|m| es.names_of(m)).collect();
        min_inconsistent.sort();
        EsDoc { events, covering, min_inconsistent }
    }
}

/// Relation tables of an event structure, by event name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relations {
    pub leq: Vec<(String, String)>,
    pub immediate: Vec<(String, String)>,
    pub co: Vec<(String, String)>,
}

impl EventStructure {
    pub fn empty() -> Self {
        Self::from_indexed(Vec::new(), Vec::new(), Vec::new()).expect("empty structure")
    }

    /// Builds a structure from named events. Unknown names and duplicate
    /// entries are rejected.
    pub fn new<S: AsRef<str>>(
        events: &[S],
        covering: &[(S, S)],
        min_inconsistent: &[Vec<S>],
    ) -> Result<Self> {
        let names: Vec<String> = events.iter().map(|e| e.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Duplicate(n.clone()));
            }
        }
        let lookup = |n: &S| {
            index
                .get(n.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownEvent(n.as_ref().to_string()))
        };
        let mut edges = Vec::with_capacity(covering.len());
        let mut seen_edges = HashSet::new();
        for (a, b) in covering {
            let e = (lookup(a)?, lookup(b)?);
            if !seen_edges.insert(e) {
                return Err(Error::Duplicate(format!("covering {}→{}", a.as_ref(), b.as_ref())));
            }
            edges.push(e);
        }
        let n = names.len();
        let mut sets = Vec::with_capacity(min_inconsistent.len());
        let mut seen_sets = HashSet::new();
        for m in min_inconsistent {
            let mut set = FixedBitSet::with_capacity(n);
            for e in m {
                let i = lookup(e)?;
                if set.contains(i) {
                    return Err(Error::Duplicate(format!(
                        "event `{}` repeated in an inconsistent set",
                        e.as_ref()
                    )));
                }
                set.insert(i);
            }
            if !seen_sets.insert(set.clone()) {
                let label: Vec<&str> = m.iter().map(|e| e.as_ref()).collect();
                return Err(Error::Duplicate(format!("inconsistent set {{{}}}", label.join(","))));
            }
            sets.push(set);
        }
        Self::from_indexed(names, edges, sets)
    }

    /// Builds a structure from index-based data. Edges and inconsistent sets
    /// are deduplicated; names must be unique.
    pub fn from_indexed(
        names: Vec<String>,
        covering: Vec<(usize, usize)>,
        min_inconsistent: Vec<EventSet>,
    ) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Duplicate(name.clone()));
            }
        }
        for &(a, b) in &covering {
            if a >= n || b >= n {
                return Err(Error::Invalid(format!("edge ({a},{b}) out of range")));
            }
        }
        let mut preds = vec![Vec::new(); n];
        for &(a, b) in &covering {
            preds[b].push(a);
        }
        let mut down = Vec::with_capacity(n);
        for e in 0..n {
            let mut set = FixedBitSet::with_capacity(n);
            let mut stack = vec![e];
            set.insert(e);
            while let Some(v) = stack.pop() {
                for &p in &preds[v] {
                    if !set.contains(p) {
                        set.insert(p);
                        stack.push(p);
                    }
                }
            }
            down.push(set);
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (e, d) in down.iter().enumerate() {
            for p in d.ones() {
                up[p].insert(e);
            }
        }
        let acyclic = (0..n).all(|e| down[e].ones().all(|p| p == e || !down[p].contains(e)));

        let covering = if acyclic {
            let mut hasse = Vec::new();
            for b in 0..n {
                for a in down[b].ones() {
                    if a != b && down[b].intersection(&up[a]).count() == 2 {
                        hasse.push((a, b));
                    }
                }
            }
            hasse
        } else {
            let mut c = covering;
            c.sort_unstable();
            c.dedup();
            c
        };

        let mut sets: Vec<EventSet> = min_inconsistent
            .into_iter()
            .map(|mut s| {
                s.grow(n);
                s
            })
            .collect();
        sets.sort_by_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
        sets.dedup();
        let mut conflicts_of = vec![Vec::new(); n];
        for (i, s) in sets.iter().enumerate() {
            for e in s.ones() {
                if e < n {
                    conflicts_of[e].push(i);
                }
            }
        }
        Ok(Self {
            names,
            index,
            covering,
            min_inconsistent: sets,
            down,
            up,
            conflicts_of,
            acyclic,
            configs: OnceLock::new(),
        })
    }

    /// Builds a structure whose consistency is inherited along causality from
    /// a family of base inconsistent sets: a set is consistent iff its
    /// down-closure contains no base set. The stored antichain is the family
    /// of minimal such inconsistent sets.
    pub fn with_inherited_conflicts(
        names: Vec<String>,
        covering: Vec<(usize, usize)>,
        base: &[EventSet],
    ) -> Result<Self> {
        let skeleton = Self::from_indexed(names, covering, Vec::new())?;
        let sets = skeleton.inherited_inconsistent(base);
        Self::from_indexed(skeleton.names, skeleton.covering, sets)
    }

    fn inherited_inconsistent(&self, base: &[EventSet]) -> Vec<EventSet> {
        let n = self.len();
        let mut candidates: HashSet<EventSet> = HashSet::new();
        for m in base {
            let members: Vec<usize> = m.ones().collect();
            if members.is_empty() {
                candidates.insert(FixedBitSet::with_capacity(n));
                continue;
            }
            let choices: Vec<Vec<usize>> = members.iter().map(|&e| self.up[e].ones().collect()).collect();
            let sizes: Vec<usize> = choices.iter().map(Vec::len).collect();
            for pick in product(&sizes) {
                let mut set = FixedBitSet::with_capacity(n);
                for (slot, &k) in pick.iter().enumerate() {
                    set.insert(choices[slot][k]);
                }
                let is_antichain = set
                    .ones()
                    .all(|a| set.ones().all(|b| a == b || !self.down[b].contains(a)));
                if is_antichain {
                    candidates.insert(set);
                }
            }
        }
        let mut cands: Vec<(usize, EventSet)> = candidates.into_iter().map(|c| (c.count_ones(..), c)).collect();
        cands.sort_by_key(|(k, _)| *k);
        let mut minimal: Vec<(usize, EventSet)> = Vec::new();
        for (k, c) in cands {
            if !minimal.iter().any(|(j, m)| *j < k && m.is_subset(&c)) {
                minimal.push((k, c));
            }
        }
        minimal.into_iter().map(|(_, m)| m).collect()
    }

    /// Adds causal edges and closes; consistency becomes "down-closure
    /// consistent in the original structure".
    pub fn with_extra_causality(&self, edges: &[(usize, usize)]) -> Result<Self> {
        let mut covering = self.covering.clone();
        covering.extend_from_slice(edges);
        Self::with_inherited_conflicts(self.names.clone(), covering, &self.min_inconsistent)
    }

    /// Builds a structure from an order and a consistency predicate, searching
    /// the minimal inconsistent sets among antichains level by level. The
    /// predicate must be closed under subsets.
    pub fn from_predicate(
        names: Vec<String>,
        covering: Vec<(usize, usize)>,
        is_consistent: impl Fn(&EventSet) -> bool,
    ) -> Result<Self> {
        let skeleton = Self::from_indexed(names, covering, Vec::new())?;
        let n = skeleton.len();
        let mut minimal = Vec::new();
        let mut level: Vec<Vec<usize>> = Vec::new();
        for e in 0..n {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(e);
            if is_consistent(&s) {
                level.push(vec![e]);
            } else {
                minimal.push(s);
            }
        }
        let mut consistent_level: HashSet<Vec<usize>> = level.iter().cloned().collect();
        while !level.is_empty() {
            let mut next = Vec::new();
            let mut next_set = HashSet::new();
            for members in &level {
                let last = *members.last().unwrap();
                for e in last + 1..n {
                    if members
                        .iter()
                        .any(|&m| skeleton.down[e].contains(m) || skeleton.down[m].contains(e))
                    {
                        continue;
                    }
                    let mut cand = members.clone();
                    cand.push(e);
                    // every subset one smaller must already be consistent
                    let all_sub = (0..cand.len()).all(|skip| {
                        let sub: Vec<usize> = cand
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v)
                            .collect();
                        consistent_level.contains(&sub)
                    });
                    if !all_sub {
                        continue;
                    }
                    let mut set = FixedBitSet::with_capacity(n);
                    cand.iter().for_each(|&v| set.insert(v));
                    if is_consistent(&set) {
                        next_set.insert(cand.clone());
                        next.push(cand);
                    } else {
                        minimal.push(set);
                    }
                }
            }
            consistent_level = next_set;
            level = next;
        }
        Self::from_indexed(skeleton.names, skeleton.covering, minimal)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownEvent(name.to_string()))
    }

    /// Covering edges. For acyclic input these are exactly the immediate
    /// dependencies `→`.
    pub fn covering(&self) -> &[(usize, usize)] {
        &self.covering
    }

    pub fn min_inconsistent(&self) -> &[EventSet] {
        &self.min_inconsistent
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    /// The principal down-set `[e]`, including `e`.
    pub fn down(&self, e: usize) -> &EventSet {
        &self.down[e]
    }

    pub fn up(&self, e: usize) -> &EventSet {
        &self.up[e]
    }

    /// `[e)`: strict causal predecessors.
    pub fn strict_down(&self, e: usize) -> EventSet {
        let mut s = self.down[e].clone();
        s.set(e, false);
        s
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Immediate dependency `a → b`: distinct, `a ≤ b`, nothing in between.
    pub fn immediate(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b) && self.down[b].intersection(&self.up[a]).count() == 2
    }

    /// `a co b`: pairwise consistent and incomparable.
    pub fn co(&self, a: usize, b: usize) -> bool {
        if a == b || self.leq(a, b) || self.leq(b, a) {
            return false;
        }
        self.is_consistent(&self.set_of([a, b]))
    }

    pub fn empty_set(&self) -> EventSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> EventSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, events: impl IntoIterator<Item = usize>) -> EventSet {
        let mut s = self.empty_set();
        for e in events {
            s.insert(e);
        }
        s
    }

    pub fn set_of_names<S: AsRef<str>>(&self, names: &[S]) -> Result<EventSet> {
        let mut s = self.empty_set();
        for n in names {
            s.insert(self.require(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn names_of(&self, set: &EventSet) -> Vec<String> {
        let mut v: Vec<String> = set.ones().map(|e| self.names[e].clone()).collect();
        v.sort();
        v
    }

    pub fn fmt_set(&self, set: &EventSet) -> String {
        format!("{{{}}}", self.names_of(set).join(","))
    }

    pub fn is_consistent(&self, set: &EventSet) -> bool {
        !self.min_inconsistent.iter().any(|m| m.is_subset(set))
    }

    /// Whether `x ∪ {e}` is consistent, assuming `x` is.
    pub fn consistent_with(&self, x: &EventSet, e: usize) -> bool {
        self.conflicts_of[e].iter().all(|&i| {
            let m = &self.min_inconsistent[i];
            !m.ones().all(|v| v == e || x.contains(v))
        })
    }

    pub fn is_down_closed(&self, set: &EventSet) -> bool {
        set.ones().all(|e| self.down[e].is_subset(set))
    }

    pub fn down_closure(&self, set: &EventSet) -> EventSet {
        let mut out = self.empty_set();
        for e in set.ones() {
            out.union_with(&self.down[e]);
        }
        out
    }

    pub fn is_configuration(&self, set: &EventSet) -> bool {
        self.is_down_closed(set) && self.is_consistent(set)
    }

    /// `x` enables `e`: `e ∉ x` and `x ∪ {e}` is a configuration, given that
    /// `x` is one.
    pub fn enables(&self, x: &EventSet, e: usize) -> bool {
        !x.contains(e)
            && self.down[e].ones().all(|p| p == e || x.contains(p))
            && self.consistent_with(x, e)
    }

    /// Checked form of [`Self::enables`]: rejects `x` that is not a
    /// configuration.
    pub fn is_enabled(&self, x: &EventSet, e: usize) -> Result<bool> {
        if !self.is_configuration(x) {
            return Err(Error::NotConfiguration(self.fmt_set(x)));
        }
        Ok(self.enables(x, e))
    }

    pub fn enabled_events(&self, x: &EventSet) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.enables(x, e)).collect()
    }

    pub fn with(&self, x: &EventSet, e: usize) -> EventSet {
        let mut y = x.clone();
        y.insert(e);
        y
    }

    /// All finite configurations, each listed once, ordered by size and then
    /// by member indices. Always contains the empty configuration.
    pub fn configurations(&self) -> &[EventSet] {
        self.configs.get_or_init(|| {
            let mut seen: HashSet<EventSet> = HashSet::new();
            let empty = self.empty_set();
            seen.insert(empty.clone());
            let mut stack = vec![empty];
            while let Some(x) = stack.pop() {
                for e in 0..self.len() {
                    if self.enables(&x, e) {
                        let y = self.with(&x, e);
                        if seen.insert(y.clone()) {
                            stack.push(y);
                        }
                    }
                }
            }
            let mut all: Vec<EventSet> = seen.into_iter().collect();
            all.sort_by_cached_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
            all
        })
    }

    pub fn maximal_configurations(&self) -> Vec<EventSet> {
        self.configurations()
            .iter()
            .filter(|x| (0..self.len()).all(|e| !self.enables(x, e)))
            .cloned()
            .collect()
    }

    /// Checks the event-structure axioms, listing every violation.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let n = self.len();
        if !self.acyclic {
            let mut reported = BTreeSet::new();
            for a in 0..n {
                for b in self.down[a].ones() {
                    if a != b && self.down[b].contains(a) {
                        let key = (a.min(b), a.max(b));
                        if reported.insert(key) {
                            report.push(
                                Rule::CausalityCycle,
                                format!("causality cycle through {} and {}", self.names[a], self.names[b]),
                            );
                        }
                    }
                }
            }
        }
        for m in &self.min_inconsistent {
            if m.count_ones(..) <= 1 {
                report.push(
                    Rule::SingletonConsistency,
                    format!("{} is declared inconsistent", self.fmt_set(m)),
                );
            }
        }
        for (i, a) in self.min_inconsistent.iter().enumerate() {
            for (j, b) in self.min_inconsistent.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    report.push(
                        Rule::Antichain,
                        format!("{} is contained in {}", self.fmt_set(a), self.fmt_set(b)),
                    );
                }
            }
        }
        // X ∈ Con, e ≤ e', e' ∈ X ⇒ X ∪ {e} ∈ Con fails exactly when some
        // minimal inconsistent M, e ∈ M and e' > e give (M \ {e}) ∪ {e'} ∈ Con.
        for m in &self.min_inconsistent {
            'members: for e in m.ones() {
                for e2 in self.up[e].ones() {
                    if e2 == e {
                        continue;
                    }
                    let mut x = m.clone();
                    x.set(e, false);
                    x.insert(e2);
                    if self.is_consistent(&x) {
                        report.push(
                            Rule::ConsistencyClosure,
                            format!(
                                "{} is consistent and {} ≤ {} but adding {} is inconsistent",
                                self.fmt_set(&x),
                                self.names[e],
                                self.names[e2],
                                self.names[e]
                            ),
                        );
                        break 'members;
                    }
                }
            }
        }
        report
    }

    pub fn relations(&self) -> Relations {
        let n = self.len();
        let mut leq = Vec::new();
        let mut immediate = Vec::new();
        let mut co = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.leq(a, b) {
                    leq.push((self.names[a].clone(), self.names[b].clone()));
                }
                if self.immediate(a, b) {
                    immediate.push((self.names[a].clone(), self.names[b].clone()));
                }
                if a < b && self.co(a, b) {
                    co.push((self.names[a].clone(), self.names[b].clone()));
                }
            }
        }
        leq.sort();
        immediate.sort();
        co.sort();
        Relations { leq, immediate, co }
    }

    /// Restriction to a subset of events, inheriting order and consistency.
    /// Returns the new structure and the old index of each new event.
    pub fn restrict(&self, keep: &EventSet) -> (EventStructure, Vec<usize>) {
        let old: Vec<usize> = keep.ones().collect();
        let mut new_of = vec![usize::MAX; self.len()];
        for (i, &o) in old.iter().enumerate() {
            new_of[o] = i;
        }
        let names = old.iter().map(|&o| self.names[o].clone()).collect();
        let mut covering = Vec::new();
        for &b in &old {
            for a in self.down[b].ones() {
                if a != b && keep.contains(a) {
                    covering.push((new_of[a], new_of[b]));
                }
            }
        }
        let k = old.len();
        let sets = self
            .min_inconsistent
            .iter()
            .filter(|m| m.is_subset(keep))
            .map(|m| {
                let mut s = FixedBitSet::with_capacity(k);
                m.ones().for_each(|e| s.insert(new_of[e]));
                s
            })
            .collect();
        let es = Self::from_indexed(names, covering, sets).expect("restriction keeps names unique");
        (es, old)
    }

    /// Parallel composition: tagged disjoint union, no cross causality, and a
    /// set is consistent iff both of its sides are.
    pub fn par(left: &EventStructure, right: &EventStructure) -> EventStructure {
        let offset = left.len();
        let n = offset + right.len();
        let names = left
            .names
            .iter()
            .map(|x| tag(Side::Left, x))
            .chain(right.names.iter().map(|x| tag(Side::Right, x)))
            .collect();
        let covering = left
            .covering
            .iter()
            .copied()
            .chain(right.covering.iter().map(|&(a, b)| (a + offset, b + offset)))
            .collect();
        let sets = left
            .min_inconsistent
            .iter()
            .map(|m| {
                let mut s = FixedBitSet::with_capacity(n);
                m.ones().for_each(|e| s.insert(e));
                s
            })
            .chain(right.min_inconsistent.iter().map(|m| {
                let mut s = FixedBitSet::with_capacity(n);
                m.ones().for_each(|e| s.insert(e + offset));
                s
            }))
            .collect();
        Self::from_indexed(names, covering, sets).expect("tagged names are unique")
    }

    /// Structural equality by event name: same events, order and consistency.
    pub fn same_as(&self, other: &EventStructure) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut map = Vec::with_capacity(self.len());
        for n in &self.names {
            match other.index_of(n) {
                Some(j) => map.push(j),
                None => return false,
            }
        }
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.leq(a, b) != other.leq(map[a], map[b]) {
                    return false;
                }
            }
        }
        let mine: HashSet<Vec<usize>> = self
            .min_inconsistent
            .iter()
            .map(|m| {
                let mut v: Vec<usize> = m.ones().map(|e| map[e]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let theirs: HashSet<Vec<usize>> =
            other.min_inconsistent.iter().map(|m| m.ones().collect()).collect();
        mine == theirs
    }
}

impl PartialEq for EventStructure {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for EventStructure {}

impl fmt::Display for EventStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "events {{{}}}", self.names.join(","))?;
        if !self.covering.is_empty() {
            let edges: Vec<String> = self
                .covering
                .iter()
                .map(|&(a, b)| format!("{}→{}", self.names[a], self.names[b]))
                .collect();
            write!(f, " covering [{}]", edges.join(", "))?;
        }
        if !self.min_inconsistent.is_empty() {
            let sets: Vec<String> = self.min_inconsistent.iter().map(|m| self.fmt_set(m)).collect();
            write!(f, " inconsistent [{}]", sets.join(", "))?;
        }
        Ok(())
    }
}

/// A partial function between the events of two structures.
#[derive(Debug, Clone)]
pub struct EsMap<'a> {
    pub domain: &'a EventStructure,
    pub codomain: &'a EventStructure,
    pub mapping: Vec<Option<usize>>,
}

impl<'a> EsMap<'a> {
    pub fn new(
        domain: &'a EventStructure,
        codomain: &'a EventStructure,
        mapping: Vec<Option<usize>>,
    ) -> Self {
        Self { domain, codomain, mapping }
    }

    pub fn total(domain: &'a EventStructure, codomain: &'a EventStructure, mapping: &[usize]) -> Self {
        Self::new(domain, codomain, mapping.iter().map(|&e| Some(e)).collect())
    }

    pub fn identity(es: &'a EventStructure) -> Self {
        Self::new(es, es, (0..es.len()).map(Some).collect())
    }

    pub fn image(&self, x: &EventSet) -> EventSet {
        let mut out = self.codomain.empty_set();
        for e in x.ones() {
            if let Some(t) = self.mapping[e] {
                out.insert(t);
            }
        }
        out
    }

    /// `other ∘ self`.
    pub fn then<'b>(&self, other: &EsMap<'b>) -> EsMap<'b>
    where
        'a: 'b,
    {
        let mapping = self
            .mapping
            .iter()
            .map(|m| m.and_then(|e| other.mapping[e]))
            .collect();
        EsMap::new(self.domain, other.codomain, mapping)
    }

    /// Checks that every configuration's image is a configuration and that
    /// the map is injective on every configuration. Each violated axiom is
    /// listed once, with the first offending configuration as witness.
    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.mapping.len() != self.domain.len()
            || self.mapping.iter().flatten().any(|&e| e >= self.codomain.len())
        {
            report.push(Rule::NotTotal, "mapping does not match the domain and codomain");
            return report;
        }
        let (mut injective, mut closed, mut consistent) = (true, true, true);
        for x in self.domain.configurations() {
            let mut img = self.codomain.empty_set();
            for e in x.ones() {
                if let Some(t) = self.mapping[e] {
                    if img.contains(t) && injective {
                        injective = false;
                        report.push(
                            Rule::NotLocallyInjective,
                            format!(
                                "two events of {} map to {}",
                                self.domain.fmt_set(x),
                                self.codomain.name(t)
                            ),
                        );
                    }
                    img.insert(t);
                }
            }
            if closed && !self.codomain.is_down_closed(&img) {
                closed = false;
                report.push(
                    Rule::ImageNotDownClosed,
                    format!(
                        "image {} of {} is not down-closed",
                        self.codomain.fmt_set(&img),
                        self.domain.fmt_set(x)
                    ),
                );
            }
            if consistent && !self.codomain.is_consistent(&img) {
                consistent = false;
                report.push(
                    Rule::ImageInconsistent,
                    format!(
                        "image {} of {} is inconsistent",
                        self.codomain.fmt_set(&img),
                        self.domain.fmt_set(x)
                    ),
                );
            }
            if !(injective || closed || consistent) {
                break;
            }
        }
        report
    }
}

/// Validates `es` and returns its configurations.
pub fn enumerate_configurations(es: &EventStructure) -> Vec<EventSet> {
    es.configurations().to_vec()
}
