//! Event structures with polarity and A-games.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, VariableSet};
use crate::error::{Error, Result};
use crate::es::{EventSet, EventStructure};
use crate::logic::Formula;
use crate::report::{Rule, ValidationReport};
use crate::tag::{tag, untag, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Neutral,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Plus => Polarity::Minus,
            Polarity::Minus => Polarity::Plus,
            Polarity::Neutral => Polarity::Neutral,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Polarity::Plus => "+",
            Polarity::Minus => "-",
            Polarity::Neutral => "0",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// An event structure with a polarity on every event.
#[derive(Debug, Clone)]
pub struct PolarizedES {
    pub es: EventStructure,
    pub pol: Vec<Polarity>,
}

impl PolarizedES {
    pub fn new(es: EventStructure, pol: Vec<Polarity>) -> Result<Self> {
        if pol.len() != es.len() {
            return Err(Error::Invalid(format!(
                "{} polarities for {} events",
                pol.len(),
                es.len()
            )));
        }
        Ok(Self { es, pol })
    }

    /// Polarities given by event name; every event must be listed.
    pub fn with_names(es: EventStructure, pol: &[(&str, Polarity)]) -> Result<Self> {
        let mut out = vec![None; es.len()];
        for (n, p) in pol {
            let i = es.require(n)?;
            if out[i].replace(*p).is_some() {
                return Err(Error::Duplicate(format!("polarity of {n}")));
            }
        }
        let pol = out
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::Invalid(format!("no polarity for {}", es.name(i)))))
            .collect::<Result<_>>()?;
        Ok(Self { es, pol })
    }

    pub fn empty() -> Self {
        Self { es: EventStructure::empty(), pol: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.es.len()
    }

    pub fn is_empty(&self) -> bool {
        self.es.is_empty()
    }

    pub fn pol(&self, e: usize) -> Polarity {
        self.pol[e]
    }

    pub fn dual(&self) -> PolarizedES {
        Self { es: self.es.clone(), pol: self.pol.iter().map(|p| p.flip()).collect() }
    }

    pub fn par(left: &PolarizedES, right: &PolarizedES) -> PolarizedES {
        let es = EventStructure::par(&left.es, &right.es);
        let pol = left.pol.iter().chain(&right.pol).copied().collect();
        Self { es, pol }
    }

    pub fn restrict(&self, keep: &EventSet) -> (PolarizedES, Vec<usize>) {
        let (es, old) = self.es.restrict(keep);
        let pol = old.iter().map(|&o| self.pol[o]).collect();
        (Self { es, pol }, old)
    }

    /// Events of one side of a tagged parallel composition, untagged.
    pub fn side(&self, side: Side) -> (PolarizedES, Vec<usize>) {
        let keep = self.side_events(side);
        let (mut p, old) = self.restrict(&keep);
        let names = p.es.names().iter().map(|n| untag(n).expect("tagged").1.to_string()).collect();
        p.es = EventStructure::from_indexed(
            names,
            p.es.covering().to_vec(),
            p.es.min_inconsistent().to_vec(),
        )
        .expect("untagging one side keeps names unique");
        (p, old)
    }

    pub fn side_events(&self, side: Side) -> EventSet {
        self.es.set_of((0..self.len()).filter(|&e| matches!(untag(self.es.name(e)), Some((s, _)) if s == side)))
    }

    /// Event-structure axioms followed by race-freedom.
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.es.validate();
        if !self.es.is_acyclic() {
            return report;
        }
        for (x, e, e2) in self.race_violations() {
            report.push(
                Rule::RaceFree,
                format!(
                    "{} enables {}+ and {}- which are inconsistent together",
                    self.es.fmt_set(&x),
                    self.es.name(e),
                    self.es.name(e2)
                ),
            );
        }
        report
    }

    /// Race-freedom: no configuration enables a positive and a negative
    /// event that are inconsistent together. Lists each offending pair once.
    pub fn race_violations(&self) -> Vec<(EventSet, usize, usize)> {
        let mut out: Vec<(EventSet, usize, usize)> = Vec::new();
        for x in self.es.configurations() {
            let enabled = self.es.enabled_events(x);
            for &e in &enabled {
                if self.pol[e] != Polarity::Plus {
                    continue;
                }
                for &e2 in &enabled {
                    if self.pol[e2] != Polarity::Minus {
                        continue;
                    }
                    let y = self.es.with(&self.es.with(x, e), e2);
                    if !self.es.is_consistent(&y) && !out.iter().any(|&(_, a, b)| (a, b) == (e, e2)) {
                        out.push((x.clone(), e, e2));
                    }
                }
            }
        }
        out
    }

    pub fn same_as(&self, other: &PolarizedES) -> bool {
        self.es.same_as(&other.es)
            && (0..self.len()).all(|e| other.es.index_of(self.es.name(e)).map(|j| other.pol[j]) == Some(self.pol[e]))
    }
}

impl PartialEq for PolarizedES {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for PolarizedES {}

/// An A-game: a polarized event structure over an algebra, with a variable
/// on every event and an optional winning condition. A missing winning
/// condition means the empty conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AGame {
    pub pes: PolarizedES,
    pub algebra: Algebra,
    pub vars: VariableSet,
    pub var: Vec<String>,
    pub winning: Option<Formula>,
}

impl AGame {
    pub fn new(
        pes: PolarizedES,
        algebra: Algebra,
        vars: VariableSet,
        var: Vec<String>,
        winning: Option<Formula>,
    ) -> Result<Self> {
        if var.len() != pes.len() {
            return Err(Error::Invalid(format!("{} variables for {} events", var.len(), pes.len())));
        }
        for v in &var {
            if !vars.contains(v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        Ok(Self { pes, algebra, vars, var, winning })
    }

    pub fn empty(algebra: Algebra) -> Self {
        Self {
            pes: PolarizedES::empty(),
            algebra,
            vars: VariableSet::default(),
            var: Vec::new(),
            winning: None,
        }
    }

    pub fn es(&self) -> &EventStructure {
        &self.pes.es
    }

    pub fn len(&self) -> usize {
        self.pes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pes.is_empty()
    }

    pub fn pol(&self, e: usize) -> Polarity {
        self.pes.pol[e]
    }

    pub fn var_of(&self, e: usize) -> &str {
        &self.var[e]
    }

    /// The sort of the variable labelling `e`.
    pub fn sort_of_event(&self, e: usize) -> &str {
        self.vars.sort_of(&self.var[e]).expect("variables are declared")
    }

    /// Carrier elements an event may be instantiated with.
    pub fn values_of(&self, e: usize) -> Vec<&str> {
        self.algebra.elements_of_sort(self.sort_of_event(e)).collect()
    }

    pub fn winning_or_true(&self) -> Formula {
        self.winning.clone().unwrap_or_else(Formula::truth)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.pes.validate();
        report.extend(self.algebra.validate());
        for v in self.vars.iter() {
            if !self.algebra.has_sort(&v.sort) {
                report.push(Rule::VariableSort, format!("variable {} has sort {} not in the algebra", v.name, v.sort));
            }
        }
        if !self.es().is_acyclic() {
            return report;
        }
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                if self.var[a] == self.var[b] && self.es().co(a, b) {
                    report.push(
                        Rule::NoOverlap,
                        format!("{} and {} share variable {} and are concurrent", self.es().name(a), self.es().name(b), self.var[a]),
                    );
                }
            }
        }
        if !report.has(Rule::NoOverlap) {
            'configs: for x in self.es().configurations() {
                for a in x.ones() {
                    for b in x.ones() {
                        if a < b && self.var[a] == self.var[b] && !self.es().leq(a, b) && !self.es().leq(b, a) {
                            report.push(
                                Rule::VariableChain,
                                format!("{} has unordered events for {}", self.es().fmt_set(x), self.var[a]),
                            );
                            break 'configs;
                        }
                    }
                }
            }
        }
        if let Some(w) = &self.winning {
            report.extend(w.check_sorts(&self.algebra, &self.vars));
        }
        report
    }

    /// Same events, order, consistency and variables; polarity reversed;
    /// winning condition negated.
    pub fn dual(&self) -> AGame {
        Self {
            pes: self.pes.dual(),
            algebra: self.algebra.clone(),
            vars: self.vars.clone(),
            var: self.var.clone(),
            winning: Some(Formula::not(self.winning_or_true())),
        }
    }

    /// Parallel composition over the tagged disjoint union of the algebras.
    /// The winning condition is the disjunction of the sides'; when neither
    /// side has one, neither does the result.
    pub fn par(left: &AGame, right: &AGame) -> AGame {
        let winning = match (&left.winning, &right.winning) {
            (None, None) => None,
            _ => Some(Formula::or(
                left.winning_or_true().tagged(Side::Left),
                right.winning_or_true().tagged(Side::Right),
            )),
        };
        let var = left
            .var
            .iter()
            .map(|v| tag(Side::Left, v))
            .chain(right.var.iter().map(|v| tag(Side::Right, v)))
            .collect();
        Self {
            pes: PolarizedES::par(&left.pes, &right.pes),
            algebra: Algebra::par(&left.algebra, &right.algebra),
            vars: VariableSet::par(&left.vars, &right.vars),
            var,
            winning,
        }
    }

    /// Recovers the two components of a tagged parallel game, with the old
    /// index of each event. Winning conditions are recovered when the
    /// winning formula is a disjunction of side-pure formulas.
    pub fn split(&self) -> ((AGame, Vec<usize>), (AGame, Vec<usize>)) {
        let (wl, wr) = match &self.winning {
            Some(Formula::Or { left, right }) => (left.untagged(Side::Left), right.untagged(Side::Right)),
            _ => (None, None),
        };
        let side = |side: Side, w: Option<Formula>| {
            let (pes, old) = self.pes.side(side);
            let var = old.iter().map(|&o| untag(&self.var[o]).expect("tagged variable").1.to_string()).collect();
            let w = w.filter(|f| *f != Formula::truth());
            let g = AGame {
                pes,
                algebra: self.algebra.project(side),
                vars: self.vars.project(side),
                var,
                winning: w,
            };
            (g, old)
        };
        (side(Side::Left, wl), side(Side::Right, wr))
    }

    /// `latest(α, x)`: the greatest event of `x` labelled `α`, if any.
    pub fn latest(&self, var: &str, x: &EventSet) -> Result<Option<usize>> {
        latest_in(self.es(), |e| self.var[e] == var, x).map_err(|_| Error::NotTotallyOrdered(var.to_string()))
    }

    pub fn restrict(&self, keep: &EventSet) -> (AGame, Vec<usize>) {
        let (pes, old) = self.pes.restrict(keep);
        let var = old.iter().map(|&o| self.var[o].clone()).collect();
        let g = AGame {
            pes,
            algebra: self.algebra.clone(),
            vars: self.vars.clone(),
            var,
            winning: self.winning.clone(),
        };
        (g, old)
    }
}

/// The ≤-maximum of the events of `x` satisfying `pred`. Errors when that
/// set is nonempty without a maximum.
pub(crate) fn latest_in(es: &EventStructure, pred: impl Fn(usize) -> bool, x: &EventSet) -> Result<Option<usize>, ()> {
    let cands: Vec<usize> = x.ones().filter(|&e| pred(e)).collect();
    if cands.is_empty() {
        return Ok(None);
    }
    cands
        .iter()
        .copied()
        .find(|&c| cands.iter().all(|&o| es.leq(o, c)))
        .map(Some)
        .ok_or(())
}
