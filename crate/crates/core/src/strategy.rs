//! Strategies and A-strategies: axioms, winning, projections onto the sides
//! of a parallel game, the induced algebra on strategy events, and the
//! extension/restriction primitives along negative and positive moves.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::es::{EsMap, EventSet, EventStructure};
use crate::game::{AGame, Polarity, PolarizedES};
use crate::logic::{Formula, Term, Valuation};
use crate::report::{Rule, ValidationReport};
use crate::tag::untag;
use crate::util::product;

/// A total map of polarized event structures `σ: S → game`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub s: PolarizedES,
    pub game: PolarizedES,
    pub sigma: Vec<usize>,
}

/// An A-strategy: a strategy into an A-game together with an instantiation
/// of every strategy event by a carrier element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AStrategy {
    pub s: PolarizedES,
    pub game: AGame,
    pub sigma: Vec<usize>,
    pub inst: Vec<String>,
}

fn check_sigma(s: &PolarizedES, game_len: usize, sigma: &[usize]) -> Result<()> {
    if sigma.len() != s.len() {
        return Err(Error::Invalid(format!("σ has {} entries for {} events", sigma.len(), s.len())));
    }
    if let Some(&e) = sigma.iter().find(|&&e| e >= game_len) {
        return Err(Error::Invalid(format!("σ maps to event index {e} outside the game")));
    }
    Ok(())
}

pub fn image(game: &EventStructure, sigma: &[usize], x: &EventSet) -> EventSet {
    let mut out = game.empty_set();
    x.ones().for_each(|s| out.insert(sigma[s]));
    out
}

/// Map axioms and polarity preservation.
fn check_map_and_polarity(s: &PolarizedES, game: &PolarizedES, sigma: &[usize]) -> ValidationReport {
    let mut report = EsMap::total(&s.es, &game.es, sigma).check();
    for (i, &e) in sigma.iter().enumerate() {
        if s.pol[i] != game.pol[e] {
            report.push(
                Rule::PolarityNotPreserved,
                format!("{}{} is sent to {}{}", s.es.name(i), s.pol[i], game.es.name(e), game.pol[e]),
            );
        }
    }
    report
}

/// `s → s'` with `pol(s') = −` or `pol(s) = +` must map to `σ(s) → σ(s')`.
fn check_innocence(s: &PolarizedES, game: &PolarizedES, sigma: &[usize], report: &mut ValidationReport) {
    for &(a, b) in s.es.covering() {
        if (s.pol[b] == Polarity::Minus || s.pol[a] == Polarity::Plus) && !game.es.immediate(sigma[a], sigma[b]) {
            report.push(
                Rule::NotInnocent,
                format!(
                    "{}{} → {}{} but not {} → {}",
                    s.es.name(a),
                    s.pol[a],
                    s.es.name(b),
                    s.pol[b],
                    game.es.name(sigma[a]),
                    game.es.name(sigma[b])
                ),
            );
        }
    }
}

/// Checks that for every configuration `x` and negative `e` enabled at `σx`
/// the events `s` enabled at `x` over `e`, grouped by `key(s)`, have exactly
/// one member for every key in `keys(e)`. Each game event is reported once.
fn check_receptive(
    s: &PolarizedES,
    game: &PolarizedES,
    sigma: &[usize],
    keys: impl Fn(usize) -> Vec<String>,
    key: impl Fn(usize) -> String,
    report: &mut ValidationReport,
) {
    let mut reported = vec![false; game.len()];
    for x in s.es.configurations() {
        let sx = image(&game.es, sigma, x);
        if !game.es.is_configuration(&sx) {
            continue;
        }
        let enabled_s: Vec<usize> = s.es.enabled_events(x);
        for e in game.es.enabled_events(&sx) {
            if game.pol[e] != Polarity::Minus || reported[e] {
                continue;
            }
            for k in keys(e) {
                let count = enabled_s.iter().filter(|&&t| sigma[t] == e && key(t) == k).count();
                if count != 1 {
                    reported[e] = true;
                    let what = if k.is_empty() { String::new() } else { format!(" with value {k}") };
                    report.push(
                        Rule::NotReceptive,
                        format!(
                            "at {}: {} preimages enabled for {}-{what}",
                            s.es.fmt_set(x),
                            count,
                            game.es.name(e)
                        ),
                    );
                    break;
                }
            }
        }
    }
}

fn plus_maximal(s: &PolarizedES) -> Vec<EventSet> {
    s.es.configurations()
        .iter()
        .filter(|x| s.es.enabled_events(x).iter().all(|&t| s.pol[t] != Polarity::Plus))
        .cloned()
        .collect()
}

fn is_deterministic(s: &PolarizedES) -> bool {
    s.es.configurations().iter().all(|x| {
        let en = s.es.enabled_events(x);
        en.iter().all(|&a| {
            en.iter().all(|&b| {
                a >= b
                    || (s.pol[a] != Polarity::Plus && s.pol[b] != Polarity::Plus)
                    || s.es.is_consistent(&s.es.with(&s.es.with(x, a), b))
            })
        })
    })
}

impl Strategy {
    pub fn new(s: PolarizedES, game: PolarizedES, sigma: Vec<usize>) -> Result<Self> {
        check_sigma(&s, game.len(), &sigma)?;
        Ok(Self { s, game, sigma })
    }

    /// The identity strategy of a game; a strategy exactly when the game
    /// is receptive to itself, which always holds.
    pub fn identity(game: &PolarizedES) -> Self {
        Self { s: game.clone(), game: game.clone(), sigma: (0..game.len()).collect() }
    }

    pub fn image(&self, x: &EventSet) -> EventSet {
        image(&self.game.es, &self.sigma, x)
    }

    pub fn check(&self) -> ValidationReport {
        let mut report = check_map_and_polarity(&self.s, &self.game, &self.sigma);
        if report.is_empty() {
            check_receptive(&self.s, &self.game, &self.sigma, |_| vec![String::new()], |_| String::new(), &mut report);
        }
        check_innocence(&self.s, &self.game, &self.sigma, &mut report);
        report
    }

    /// Configurations of `S` at which no positive event is enabled.
    pub fn plus_maximal(&self) -> Vec<EventSet> {
        plus_maximal(&self.s)
    }

    pub fn is_deterministic(&self) -> bool {
        is_deterministic(&self.s)
    }

    /// The unique `x' ⊇ x` with `σx' = y`, where `y` extends `σx` by
    /// negative events only.
    pub fn extend_along_negative(&self, x: &EventSet, y: &EventSet) -> Result<EventSet> {
        let es = &self.s.es;
        let g = &self.game.es;
        if !es.is_configuration(x) {
            return Err(Error::NotConfiguration(es.fmt_set(x)));
        }
        if !g.is_configuration(y) {
            return Err(Error::NotConfiguration(g.fmt_set(y)));
        }
        let sx = self.image(x);
        if !sx.is_subset(y) || y.difference(&sx).any(|e| self.game.pol[e] != Polarity::Minus) {
            return Err(Error::Precondition("y must extend σx by negative events only".into()));
        }
        let mut cur = x.clone();
        let mut img = sx;
        while img != *y {
            let e = y
                .difference(&img)
                .find(|&e| g.enables(&img, e))
                .ok_or_else(|| Error::Precondition("no remaining event of y is enabled".into()))?;
            let pre: Vec<usize> = es.enabled_events(&cur).into_iter().filter(|&s| self.sigma[s] == e).collect();
            match pre.as_slice() {
                [s] => {
                    cur.insert(*s);
                    img.insert(e);
                }
                _ => {
                    return Err(Error::Precondition(format!(
                        "{} enabled preimages of {} at {}",
                        pre.len(),
                        g.name(e),
                        es.fmt_set(&cur)
                    )))
                }
            }
        }
        Ok(cur)
    }

    /// The unique `x' ⊆ x` with `σx' = y`, where `σx` extends `y` by
    /// positive events only.
    pub fn restrict_along_positive(&self, x: &EventSet, y: &EventSet) -> Result<EventSet> {
        let es = &self.s.es;
        if !es.is_configuration(x) {
            return Err(Error::NotConfiguration(es.fmt_set(x)));
        }
        let sx = self.image(x);
        if !y.is_subset(&sx) || sx.difference(y).any(|e| self.game.pol[e] != Polarity::Plus) {
            return Err(Error::Precondition("σx must extend y by positive events only".into()));
        }
        let mut out = es.empty_set();
        x.ones().filter(|&s| y.contains(self.sigma[s])).for_each(|s| out.insert(s));
        if !es.is_configuration(&out) || self.image(&out) != *y {
            return Err(Error::Precondition(format!(
                "{} has no sub-configuration over {}",
                es.fmt_set(x),
                self.game.es.fmt_set(y)
            )));
        }
        Ok(out)
    }
}

/// Verdict of a winning check, with a +-maximal configuration that fails
/// the condition when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Winning {
    pub winning: bool,
    pub witness: Option<EventSet>,
}

impl AStrategy {
    pub fn new(s: PolarizedES, game: AGame, sigma: Vec<usize>, inst: Vec<String>) -> Result<Self> {
        check_sigma(&s, game.len(), &sigma)?;
        if inst.len() != s.len() {
            return Err(Error::Invalid(format!("inst has {} entries for {} events", inst.len(), s.len())));
        }
        for a in &inst {
            if game.algebra.element(a).is_none() {
                return Err(Error::UnknownElement(a.clone()));
            }
        }
        Ok(Self { s, game, sigma, inst })
    }

    pub fn es(&self) -> &EventStructure {
        &self.s.es
    }

    pub fn algebra(&self) -> &Algebra {
        &self.game.algebra
    }

    /// The underlying plain strategy.
    pub fn plain(&self) -> Strategy {
        Strategy { s: self.s.clone(), game: self.game.pes.clone(), sigma: self.sigma.clone() }
    }

    pub fn image(&self, x: &EventSet) -> EventSet {
        image(self.game.es(), &self.sigma, x)
    }

    pub fn check(&self) -> ValidationReport {
        let mut report = check_map_and_polarity(&self.s, &self.game.pes, &self.sigma);
        for (i, a) in self.inst.iter().enumerate() {
            let want = self.game.sort_of_event(self.sigma[i]);
            if self.game.algebra.sort_of(a) != Some(want) {
                report.push(
                    Rule::InstSort,
                    format!("inst({}) = {a} is not of sort {want}", self.s.es.name(i)),
                );
            }
        }
        if report.is_empty() {
            let game = &self.game;
            check_receptive(
                &self.s,
                &game.pes,
                &self.sigma,
                |e| game.values_of(e).into_iter().map(String::from).collect(),
                |t| self.inst[t].clone(),
                &mut report,
            );
        }
        check_innocence(&self.s, &self.game.pes, &self.sigma, &mut report);
        report
    }

    pub fn plus_maximal(&self) -> Vec<EventSet> {
        plus_maximal(&self.s)
    }

    pub fn is_deterministic(&self) -> bool {
        is_deterministic(&self.s)
    }

    /// The value of each variable at its latest event in `σx`.
    pub fn valuation(&self, x: &EventSet) -> Result<Valuation> {
        let sx = self.image(x);
        let mut by_game: HashMap<usize, usize> = HashMap::new();
        for s in x.ones() {
            by_game.insert(self.sigma[s], s);
        }
        let mut values = HashMap::new();
        let used: BTreeSet<&str> = sx.ones().map(|e| self.game.var_of(e)).collect();
        for v in used {
            if let Some(e) = self.game.latest(v, &sx)? {
                values.insert(v.to_string(), self.inst[by_game[&e]].clone());
            }
        }
        Ok(Valuation::new(values))
    }

    /// `last(x)`: the values of the events of `x` that sit at the latest
    /// occurrence of their variable.
    pub fn last_values(&self, x: &EventSet) -> Result<BTreeSet<String>> {
        Ok(self.valuation(x)?.last().iter().cloned().collect())
    }

    pub fn eval_term(&self, x: &EventSet, t: &Term) -> Result<Option<String>> {
        Ok(self.valuation(x)?.eval_term(t).map(String::from))
    }

    pub fn satisfies(&self, x: &EventSet, phi: &Formula) -> Result<bool> {
        Ok(self.valuation(x)?.satisfies(phi, &self.game.algebra, &self.game.vars))
    }

    /// Whether every +-maximal configuration satisfies `w`. The witness is
    /// a largest failing configuration.
    pub fn is_winning(&self, w: &Formula) -> Result<Winning> {
        for x in self.plus_maximal().into_iter().rev() {
            if !self.satisfies(&x, w)? {
                return Ok(Winning { winning: false, witness: Some(x) });
            }
        }
        Ok(Winning { winning: true, witness: None })
    }

    /// Restriction of the strategy to the events mapped into one side of a
    /// tagged parallel game.
    pub fn project_parallel(&self) -> Result<Projection> {
        if self.game.es().names().iter().any(|n| untag(n).is_none()) {
            return Err(Error::Precondition("game is not a parallel composition".into()));
        }
        let ((gl, oldl), (gr, oldr)) = self.game.split();
        let side = |g: AGame, old: Vec<usize>| {
            let mut new_of = vec![usize::MAX; self.game.len()];
            old.iter().enumerate().for_each(|(i, &o)| new_of[o] = i);
            let keep = self.s.es.set_of((0..self.s.len()).filter(|&s| new_of[self.sigma[s]] != usize::MAX));
            let (s, kept) = self.s.restrict(&keep);
            let sigma = kept.iter().map(|&k| new_of[self.sigma[k]]).collect();
            let inst = kept
                .iter()
                .map(|&k| untag(&self.inst[k]).expect("tagged element").1.to_string())
                .collect();
            (AStrategy { s, game: g, sigma, inst }, kept)
        };
        let (left, left_events) = side(gl, oldl);
        let (right, right_events) = side(gr, oldr);
        Ok(Projection { left, left_events, right, right_events })
    }

    /// Whether `R(s1..sk)` holds in the algebra induced on strategy events:
    /// the events are consistent, each is the latest for its variable in the
    /// image of their down-closure, and their values are related.
    pub fn induced_relation(&self, symbol: &str, events: &[usize]) -> Result<bool> {
        let rel = self
            .game
            .algebra
            .relation(symbol)
            .ok_or_else(|| Error::UnknownRelation(symbol.to_string()))?;
        if rel.arity.len() != events.len() {
            return Err(Error::Invalid(format!("{symbol} has arity {}", rel.arity.len())));
        }
        if let Some(&s) = events.iter().find(|&&s| s >= self.s.len()) {
            return Err(Error::Invalid(format!("event index {s} out of range")));
        }
        let es = &self.s.es;
        let x = es.down_closure(&es.set_of(events.iter().copied()));
        if !es.is_consistent(&x) {
            return Ok(false);
        }
        let sx = self.image(&x);
        for &s in events {
            let e = self.sigma[s];
            if self.game.latest(self.game.var_of(e), &sx)? != Some(e) {
                return Ok(false);
            }
        }
        let args: Vec<&str> = events.iter().map(|&s| self.inst[s].as_str()).collect();
        Ok(self.game.algebra.holds(symbol, &args))
    }

    /// Right-hand side of the induced-algebra correspondence: some
    /// configuration `x` containing every `si`, and variables `β1..βk` with
    /// `σ(si) = latest(βi, σx)` and `x ⊨ E(β1) ∧ … ∧ E(βk) ∧ R(β1..βk)`.
    pub fn induced_by_formula(&self, symbol: &str, events: &[usize]) -> Result<bool> {
        let vars: Vec<String> = self.game.vars.iter().map(|v| v.name.clone()).collect();
        for x in self.s.es.configurations() {
            if !events.iter().all(|&s| x.contains(s)) {
                continue;
            }
            let sx = self.image(x);
            let mut choices: Vec<Vec<&String>> = Vec::new();
            for &s in events {
                let ok: Vec<&String> = vars
                    .iter()
                    .filter(|v| self.game.latest(v, &sx).ok().flatten() == Some(self.sigma[s]))
                    .collect();
                choices.push(ok);
            }
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let val = self.valuation(x)?;
            let sizes: Vec<usize> = choices.iter().map(Vec::len).collect();
            for pick in product(&sizes) {
                let terms: Vec<Term> = pick.iter().enumerate().map(|(i, &j)| Term::Var(choices[i][j].clone())).collect();
                let mut conj: Vec<Formula> = terms.iter().cloned().map(Formula::def).collect();
                conj.push(Formula::rel(symbol, terms));
                if val.satisfies(&Formula::big_and(conj), &self.game.algebra, &self.game.vars) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Compares both sides of the induced-algebra correspondence on every
    /// relation symbol and every tuple of strategy events.
    pub fn check_induced_conjecture(&self) -> Result<InducedReport> {
        let mut report = InducedReport::default();
        let n = self.s.len();
        for rel in self.game.algebra.relations() {
            let k = rel.arity.len();
            let total = n.checked_pow(k as u32).unwrap_or(usize::MAX);
            for code in 0..total {
                let mut events = Vec::with_capacity(k);
                let mut c = code;
                for _ in 0..k {
                    events.push(c % n);
                    c /= n.max(1);
                }
                let lhs = self.induced_relation(&rel.name, &events)?;
                let rhs = self.induced_by_formula(&rel.name, &events)?;
                report.checked += 1;
                if lhs == rhs {
                    report.agreements += 1;
                } else {
                    report.counterexamples.push(InducedCounterexample {
                        relation: rel.name.clone(),
                        events: events.iter().map(|&s| self.s.es.name(s).to_string()).collect(),
                        induced: lhs,
                        formula: rhs,
                    });
                }
            }
        }
        Ok(report)
    }
}

/// The two sides of a strategy over a parallel game, with the old index of
/// each retained strategy event.
#[derive(Debug, Clone)]
pub struct Projection {
    pub left: AStrategy,
    pub left_events: Vec<usize>,
    pub right: AStrategy,
    pub right_events: Vec<usize>,
}

impl Projection {
    /// Splits a configuration of the composite strategy into its sides.
    pub fn split(&self, x: &EventSet) -> (EventSet, EventSet) {
        let part = |ast: &AStrategy, old: &[usize]| {
            ast.s.es.set_of(old.iter().enumerate().filter(|(_, &o)| x.contains(o)).map(|(i, _)| i))
        };
        (part(&self.left, &self.left_events), part(&self.right, &self.right_events))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InducedReport {
    pub checked: usize,
    pub agreements: usize,
    pub counterexamples: Vec<InducedCounterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedCounterexample {
    pub relation: String,
    pub events: Vec<String>,
    pub induced: bool,
    pub formula: bool,
}
