//! Seeded generators of small event structures, games, strategies and
//! formulas, used by the property suites and the CLI.

use rand::seq::IndexedRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::access::LevelPreorder;
use crate::algebra::{Algebra, Element, Relation, Variable, VariableSet};
use crate::error::Result;
use crate::es::{EventSet, EventStructure};
use crate::expansion::{expand_game, reduc};
use crate::game::{AGame, Polarity, PolarizedES};
use crate::logic::{Formula, Term};
use crate::strategy::{AStrategy, Strategy};

pub const DEFAULT_SEED: u64 = 7;

/// Instances in the default randomized conjecture suites.
pub const SUITE_SIZE: usize = 30;

/// Shape of generated A-games.
#[derive(Debug, Clone)]
pub struct GameParams {
    pub max_events: usize,
    /// Total number of carrier elements across sorts.
    pub max_carrier: usize,
    pub max_sorts: usize,
    /// Depth of the generated winning formula; `None` for no formula.
    pub winning_depth: Option<usize>,
}

impl Default for GameParams {
    fn default() -> Self {
        Self { max_events: 4, max_carrier: 2, max_sorts: 2, winning_depth: Some(2) }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
}

/// Default suite of the winning-stability harness: composable pairs over
/// games of at most `max_events` events.
pub fn stability_suite(seed: u64, max_events: usize) -> Result<Vec<(AStrategy, AStrategy)>> {
    let p = GameParams { max_events, ..GameParams::default() };
    let mut gen = Generator::new(seed);
    (0..SUITE_SIZE).map(|_| gen.composable(&p)).collect()
}

/// Default suite of the induced-algebra harness.
pub fn induced_suite(seed: u64, max_events: usize) -> Result<Vec<AStrategy>> {
    let p = GameParams { max_events, ..GameParams::default() };
    let mut gen = Generator::new(seed);
    (0..SUITE_SIZE)
        .map(|_| {
            let g = gen.agame(&p);
            gen.astrategy(&g)
        })
        .collect()
}

/// Levels `low ≤ left, right ≤ high` with `left` and `right` incomparable.
pub fn diamond() -> LevelPreorder {
    LevelPreorder::new(
        &["low", "left", "right", "high"],
        &[("low", "left"), ("low", "right"), ("left", "high"), ("right", "high")],
    )
    .expect("known levels")
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform in `lo..=hi`.
    pub fn rng_range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    fn polarities(&mut self, n: usize) -> Vec<Polarity> {
        (0..n).map(|_| if self.rng.random_bool(0.5) { Polarity::Plus } else { Polarity::Minus }).collect()
    }

    /// Events `e0 … e{n-1}` with causality going up the indices and binary
    /// conflicts among pairs with no common future accepted by
    /// `may_conflict`, inherited upwards.
    fn es_with(&mut self, n: usize, may_conflict: impl Fn(usize, usize) -> bool) -> EventStructure {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let mut covering = Vec::new();
        for j in 0..n {
            for i in 0..j {
                if self.rng.random_bool(0.3) {
                    covering.push((i, j));
                }
            }
        }
        let skeleton = EventStructure::from_indexed(names.clone(), covering.clone(), Vec::new()).expect("fresh names");
        let mut base = Vec::new();
        for j in 0..n {
            for i in 0..j {
                let joined = skeleton.up(i).intersection(skeleton.up(j)).next().is_some();
                if !joined && may_conflict(i, j) && self.rng.random_bool(0.25) {
                    base.push(skeleton.set_of([i, j]));
                }
            }
        }
        EventStructure::with_inherited_conflicts(names, covering, &base).expect("fresh names")
    }

    pub fn es(&mut self, n: usize) -> EventStructure {
        self.es_with(n, |_, _| true)
    }

    /// Any polarized structure; not necessarily race-free.
    pub fn polarized(&mut self, n: usize) -> PolarizedES {
        let es = self.es(n);
        let pol = self.polarities(n);
        PolarizedES::new(es, pol).expect("one polarity per event")
    }

    /// A race-free game: minimal conflicts only join events of the same
    /// polarity, so a positive and a negative event enabled together are
    /// never in conflict.
    pub fn game(&mut self, n: usize) -> PolarizedES {
        let pol = self.polarities(n);
        let es = self.es_with(n, |i, j| pol[i] == pol[j]);
        PolarizedES::new(es, pol).expect("one polarity per event")
    }

    /// A strategy in `game`: positive events are pruned along with their
    /// futures, some negative-to-positive delays are added and some pairs of
    /// positive events are put in conflict. Falls back to plainer shapes
    /// when the decorated candidate is not a strategy.
    pub fn strategy(&mut self, game: &PolarizedES) -> Strategy {
        let n = game.len();
        let mut keep = game.es.full_set();
        for p in 0..n {
            if game.pol(p) == Polarity::Plus && keep.contains(p) && self.rng.random_bool(0.2) {
                keep.difference_with(game.es.up(p));
            }
        }
        let (s0, old) = game.restrict(&keep);
        let plain = Strategy::new(s0.clone(), game.clone(), old.clone()).expect("restriction indices");
        let m = s0.len();
        let mut delays = Vec::new();
        let mut conflicts: Vec<EventSet> = s0.es.min_inconsistent().to_vec();
        for a in 0..m {
            for b in 0..m {
                if a == b || s0.es.leq(a, b) || s0.es.leq(b, a) {
                    continue;
                }
                if s0.pol(a) == Polarity::Minus && s0.pol(b) == Polarity::Plus && self.rng.random_bool(0.2) {
                    delays.push((a, b));
                }
                if a < b
                    && s0.pol(a) == Polarity::Plus
                    && s0.pol(b) == Polarity::Plus
                    && s0.es.co(a, b)
                    && self.rng.random_bool(0.15)
                {
                    conflicts.push(s0.es.set_of([a, b]));
                }
            }
        }
        let build = |delays: &[(usize, usize)], conflicts: &[EventSet]| -> Option<Strategy> {
            let mut covering = s0.es.covering().to_vec();
            covering.extend_from_slice(delays);
            let es = EventStructure::with_inherited_conflicts(s0.es.names().to_vec(), covering, conflicts).ok()?;
            if !es.validate().is_valid() {
                return None;
            }
            let st = Strategy::new(PolarizedES::new(es, s0.pol.clone()).ok()?, game.clone(), old.clone()).ok()?;
            st.check().is_valid().then_some(st)
        };
        let base = s0.es.min_inconsistent().to_vec();
        build(&delays, &conflicts)
            .or_else(|| build(&delays, &base))
            .or_else(|| build(&[], &conflicts))
            .unwrap_or(plain)
    }

    fn algebra(&mut self, p: &GameParams) -> Algebra {
        let sorts = if p.max_sorts >= 2 && p.max_carrier >= 2 && self.rng.random_bool(0.3) { 2 } else { 1 };
        let total = self.rng.random_range(sorts..=p.max_carrier.max(sorts));
        let sort_names: Vec<String> = (0..sorts).map(|i| format!("s{i}")).collect();
        let carrier: Vec<Element> = (0..total)
            .map(|i| Element { name: ((b'a' + i as u8) as char).to_string(), sort: sort_names[i % sorts].clone() })
            .collect();
        let s0: Vec<&Element> = carrier.iter().filter(|e| e.sort == sort_names[0]).collect();
        let mut relations = Vec::new();
        if self.rng.random_bool(0.7) {
            let mut tuples = Vec::new();
            for a in &s0 {
                for b in &s0 {
                    if self.rng.random_bool(0.5) {
                        tuples.push(vec![a.name.clone(), b.name.clone()]);
                    }
                }
            }
            relations.push(Relation { name: "R".into(), arity: vec![sort_names[0].clone(); 2], tuples });
        }
        if self.rng.random_bool(0.5) {
            let s = sort_names.choose(&mut self.rng).expect("a sort").clone();
            let tuples = carrier
                .iter()
                .filter(|e| e.sort == s && self.rng.random_bool(0.5))
                .map(|e| vec![e.name.clone()])
                .collect();
            relations.push(Relation { name: "P".into(), arity: vec![s], tuples });
        }
        Algebra::new(sort_names, carrier, relations).expect("generated algebra is well formed")
    }

    /// A valid A-game. Variables are shared along causal chains and across
    /// conflicts, never between concurrent events.
    pub fn agame(&mut self, p: &GameParams) -> AGame {
        let n = self.rng.random_range(0..=p.max_events);
        let algebra = self.algebra(p);
        let pes = self.game(n);
        let es = &pes.es;
        let mut var: Vec<String> = Vec::with_capacity(n);
        let mut vars: Vec<Variable> = Vec::new();
        for e in 0..n {
            let shareable: Vec<usize> = (0..vars.len())
                .filter(|&v| {
                    (0..e)
                        .filter(|&d| var[d] == vars[v].name)
                        .all(|d| es.leq(d, e) || !es.is_consistent(&es.set_of([d, e])))
                })
                .collect();
            let v = match shareable.choose(&mut self.rng) {
                Some(&v) if self.rng.random_bool(0.5) => v,
                _ => {
                    let sort = algebra.sorts().choose(&mut self.rng).expect("a sort").clone();
                    vars.push(Variable { name: format!("v{}", vars.len()), sort });
                    vars.len() - 1
                }
            };
            var.push(vars[v].name.clone());
        }
        let vars = VariableSet::new(vars).expect("fresh variable names");
        let mut g = AGame::new(pes, algebra, vars, var, None).expect("known variables");
        if let Some(d) = p.winning_depth {
            g.winning = Some(self.formula(&g.algebra, &g.vars, d));
        }
        g
    }

    /// A pair of games sharing nothing, each from `p`.
    pub fn agame_pair(&mut self, p: &GameParams) -> (AGame, AGame) {
        (self.agame(p), self.agame(p))
    }

    /// An A-strategy, built as a random strategy on the expansion.
    pub fn astrategy(&mut self, g: &AGame) -> Result<AStrategy> {
        let x = expand_game(g)?;
        let st = self.strategy(&x.pes);
        reduc(&st, &x)
    }

    /// An A-strategy on `g`, preferring a winning one among a few draws.
    pub fn winning_astrategy(&mut self, g: &AGame, tries: usize) -> Result<AStrategy> {
        let w = g.winning_or_true();
        let mut last = self.astrategy(g)?;
        for _ in 1..tries {
            if last.is_winning(&w)?.winning {
                break;
            }
            last = self.astrategy(g)?;
        }
        Ok(last)
    }

    /// Strategies `σ: E⊥ ⅋ F` and `τ: F⊥ ⅋ G` over fresh games `E, F, G`.
    pub fn composable(&mut self, p: &GameParams) -> Result<(AStrategy, AStrategy)> {
        let (e, f) = self.agame_pair(p);
        let g = self.agame(p);
        let sigma = self.winning_astrategy(&AGame::par(&e.dual(), &f), 8)?;
        let tau = self.winning_astrategy(&AGame::par(&f.dual(), &g), 8)?;
        Ok((sigma, tau))
    }

    /// A monotone level assignment: a random level per event, joined with
    /// the levels of its causal predecessors.
    pub fn levels_for(&mut self, es: &EventStructure, levels: &LevelPreorder) -> Vec<usize> {
        let k = levels.levels().len();
        let mut l = vec![0; es.len()];
        let mut order: Vec<usize> = (0..es.len()).collect();
        order.sort_by_key(|&e| es.down(e).count_ones(..));
        for e in order {
            let mut below: Vec<usize> = es.down(e).ones().filter(|&d| d != e).map(|d| l[d]).collect();
            below.push(self.rng.random_range(0..k));
            let uppers: Vec<usize> = (0..k).filter(|&u| below.iter().all(|&b| levels.leq(b, u))).collect();
            l[e] = uppers
                .iter()
                .copied()
                .find(|&u| uppers.iter().all(|&v| levels.leq(u, v)))
                .unwrap_or(uppers[0]);
        }
        l
    }

    fn term(&mut self, algebra: &Algebra, vars: &VariableSet, sort: &str) -> Term {
        let mut options: Vec<Term> = vars.iter().filter(|v| v.sort == sort).map(|v| Term::var(&v.name)).collect();
        options.extend(algebra.elements_of_sort(sort).map(Term::elem));
        options.choose(&mut self.rng).cloned().unwrap_or_else(|| Term::elem("?"))
    }

    fn atom(&mut self, algebra: &Algebra, vars: &VariableSet) -> Formula {
        let sort = algebra.sorts().choose(&mut self.rng).expect("a sort").clone();
        match self.rng.random_range(0..3) {
            0 if !algebra.relations().is_empty() => {
                let r = algebra.relations().choose(&mut self.rng).expect("a relation").clone();
                let args = r.arity.iter().map(|s| self.term(algebra, vars, s)).collect();
                Formula::rel(&r.name, args)
            }
            1 => {
                let l = self.term(algebra, vars, &sort);
                let r = self.term(algebra, vars, &sort);
                Formula::eq(l, r)
            }
            _ => Formula::def(self.term(algebra, vars, &sort)),
        }
    }

    /// A sort-correct formula of depth at most `depth`.
    pub fn formula(&mut self, algebra: &Algebra, vars: &VariableSet, depth: usize) -> Formula {
        if depth == 0 || self.rng.random_bool(0.25) {
            return self.atom(algebra, vars);
        }
        let d = depth - 1;
        match self.rng.random_range(0..6) {
            0 => Formula::not(self.formula(algebra, vars, d)),
            1 => Formula::and(self.formula(algebra, vars, d), self.formula(algebra, vars, d)),
            2 => Formula::or(self.formula(algebra, vars, d), self.formula(algebra, vars, d)),
            3 | 4 if !vars.is_empty() => {
                let names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
                let v = names.choose(&mut self.rng).expect("a variable").clone();
                let body = self.formula(algebra, vars, d);
                if self.rng.random_bool(0.5) {
                    Formula::forall(&v, body)
                } else {
                    Formula::exists(&v, body)
                }
            }
            _ => {
                let k = self.rng.random_range(0..3);
                let items = (0..k).map(|_| self.formula(algebra, vars, d)).collect();
                if self.rng.random_bool(0.5) {
                    Formula::big_and(items)
                } else {
                    Formula::big_or(items)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_objects_are_valid() {
        let mut gen = Generator::new(DEFAULT_SEED);
        for _ in 0..50 {
            let g = gen.game(4);
            assert!(g.es.validate().is_valid(), "{}\n{}", g.es.validate(), g.es);
            assert!(g.race_violations().is_empty());
            let st = gen.strategy(&g);
            assert!(st.check().is_valid(), "{}", st.check());
        }
        for _ in 0..50 {
            let g = gen.agame(&GameParams::default());
            assert!(g.validate().is_valid(), "{}", g.validate());
            let ast = gen.astrategy(&g).unwrap();
            assert!(ast.check().is_valid(), "{}", ast.check());
        }
    }

    #[test]
    fn same_seed_same_output() {
        let a = Generator::new(3).agame(&GameParams::default());
        let b = Generator::new(3).agame(&GameParams::default());
        assert_eq!(a, b);
    }
}
