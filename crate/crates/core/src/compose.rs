//! Copycat strategies, composition by interaction and hiding, composition
//! of A-strategies through the expansion, and a harness for checking
//! whether composition keeps strategies winning.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::es::{EventSet, EventStructure};
use crate::expansion::{distribute_expansion, expand_game, reduc, theta_into, transport};
use crate::game::{AGame, Polarity, PolarizedES};
use crate::report::{Rule, ValidationReport};
use crate::strategy::{AStrategy, Strategy};
use crate::tag::{tag, Side};

/// `γ_A: CC_A → A⊥||A`, the identity on events.
#[derive(Debug, Clone)]
pub struct CopycatStrategy {
    pub a: PolarizedES,
    pub strategy: Strategy,
}

impl CopycatStrategy {
    /// The copy `c̄` of an event on the other side.
    pub fn bar(&self, c: usize) -> usize {
        let n = self.a.len();
        if c < n {
            c + n
        } else {
            c - n
        }
    }

    pub fn es(&self) -> &EventStructure {
        &self.strategy.s.es
    }

    /// Immediate causality of `CC_A` against the characterisation: `c → c'`
    /// iff `c → c'` in `A⊥||A`, or `c'` is positive and `c = c̄'`.
    pub fn check_immediate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let game = &self.strategy.game;
        let cc = self.es();
        for c in 0..cc.len() {
            for d in 0..cc.len() {
                let expected = game.es.immediate(c, d) || (game.pol(d) == Polarity::Plus && self.bar(d) == c);
                if cc.immediate(c, d) != expected {
                    report.push(
                        Rule::CopycatCausality,
                        format!("{} → {} is {} in CC but expected {}", cc.name(c), cc.name(d), cc.immediate(c, d), expected),
                    );
                }
            }
        }
        report
    }

    /// Immediate causality of `CC_A` against the refined characterisation:
    /// game links between opposite polarities, `c⁻ → c'⁺`, are bypassed
    /// through the other copy (`c ≤ c̄ → c̄' ≤ c'`) and so are not immediate.
    pub fn check_immediate_refined(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let game = &self.strategy.game;
        let cc = self.es();
        for c in 0..cc.len() {
            for d in 0..cc.len() {
                let bypassed = game.pol(c) == Polarity::Minus && game.pol(d) == Polarity::Plus;
                let expected = (game.es.immediate(c, d) && !bypassed)
                    || (game.pol(d) == Polarity::Plus && self.bar(d) == c);
                if cc.immediate(c, d) != expected {
                    report.push(
                        Rule::CopycatCausality,
                        format!("{} → {} is {} in CC but expected {}", cc.name(c), cc.name(d), cc.immediate(c, d), expected),
                    );
                }
            }
        }
        report
    }

    /// Configurations of `CC_A` against the characterisation: exactly the
    /// configurations of `A⊥||A` containing `c̄` for each positive `c`.
    pub fn check_configurations(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let game = &self.strategy.game;
        let expected: BTreeSet<Vec<usize>> = game
            .es
            .configurations()
            .iter()
            .filter(|x| x.ones().all(|c| game.pol(c) != Polarity::Plus || x.contains(self.bar(c))))
            .map(|x| x.ones().collect())
            .collect();
        let actual: BTreeSet<Vec<usize>> = self.es().configurations().iter().map(|x| x.ones().collect()).collect();
        for x in expected.symmetric_difference(&actual) {
            let set = self.es().set_of(x.iter().copied());
            report.push(Rule::CopycatConfigurations, format!("configuration {} differs", self.es().fmt_set(&set)));
        }
        report
    }
}

/// The copycat strategy on `A`: `A⊥||A` with `c̄ ≤ c` for each positive `c`.
pub fn copycat(a: &PolarizedES) -> CopycatStrategy {
    let game = PolarizedES::par(&a.dual(), a);
    let n = a.len();
    let edges: Vec<(usize, usize)> = (0..2 * n)
        .filter(|&c| game.pol(c) == Polarity::Plus)
        .map(|c| (if c < n { c + n } else { c - n }, c))
        .collect();
    let es = game.es.with_extra_causality(&edges).expect("copycat edges stay in range");
    let s = PolarizedES { es, pol: game.pol.clone() };
    let sigma = (0..2 * n).collect();
    CopycatStrategy { a: a.clone(), strategy: Strategy { s, game, sigma } }
}

/// The A-copycat on `g`, as an A-strategy in `g⊥ ⅋ g`: copycat on the
/// expansion, carried through the distribution and reduced.
pub fn a_copycat(g: &AGame) -> Result<AStrategy> {
    let x = expand_game(g)?;
    let cc = copycat(&x.pes).strategy;
    let d = distribute_expansion(&g.dual(), g)?;
    let to_split = name_map(&cc.game.es, &d.split.es)?;
    let to_joint: Vec<usize> = to_split.iter().map(|&i| d.backward[i]).collect();
    let st = transport(&cc, &d.joint.pes, &to_joint)?;
    reduc(&st, &d.joint)
}

fn name_map(from: &EventStructure, to: &EventStructure) -> Result<Vec<usize>> {
    from.names().iter().map(|n| to.require(n)).collect()
}

/// Which side of the interaction a node belongs to, with its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    S(usize),
    T(usize),
}

/// One step of an interaction: a visible event of either strategy, or a
/// synchronisation of two events over the same middle-game event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Step {
    Left(usize),
    Right(usize),
    Sync(usize, usize),
}

/// A secured interaction state `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InteractionState {
    pub x: EventSet,
    pub y: EventSet,
}

struct Interaction<'a> {
    st1: &'a Strategy,
    st2: &'a Strategy,
    /// Middle-game event of each S-event, numbered in st2's game, if any.
    sync1: Vec<Option<usize>>,
    /// Middle-game event of each T-event, numbered in st2's game, if any.
    sync2: Vec<Option<usize>>,
}

impl Interaction<'_> {
    fn successors(&self, z: &InteractionState) -> Vec<(Step, InteractionState)> {
        let (s_es, t_es) = (&self.st1.s.es, &self.st2.s.es);
        let en_s = s_es.enabled_events(&z.x);
        let en_t = t_es.enabled_events(&z.y);
        let mut out = Vec::new();
        for &s in &en_s {
            match self.sync1[s] {
                None => out.push((Step::Left(s), InteractionState { x: s_es.with(&z.x, s), y: z.y.clone() })),
                Some(b) => {
                    for &t in en_t.iter().filter(|&&t| self.sync2[t] == Some(b)) {
                        out.push((
                            Step::Sync(s, t),
                            InteractionState { x: s_es.with(&z.x, s), y: t_es.with(&z.y, t) },
                        ));
                    }
                }
            }
        }
        for &t in en_t.iter().filter(|&&t| self.sync2[t].is_none()) {
            out.push((Step::Right(t), InteractionState { x: z.x.clone(), y: t_es.with(&z.y, t) }));
        }
        out
    }

    /// The least sub-state of `z` containing `step`, following causality
    /// in both strategies and the synchronisation matching inside `z`.
    fn prime(&self, z: &InteractionState, step: Step) -> InteractionState {
        let (s_es, t_es) = (&self.st1.s.es, &self.st2.s.es);
        let partner_of_s: HashMap<usize, usize> =
            z.y.ones().filter_map(|t| self.sync2[t].map(|b| (b, t))).collect();
        let partner_of_t: HashMap<usize, usize> =
            z.x.ones().filter_map(|s| self.sync1[s].map(|b| (b, s))).collect();
        let mut x = FixedBitSet::with_capacity(s_es.len());
        let mut y = FixedBitSet::with_capacity(t_es.len());
        let mut stack = match step {
            Step::Left(s) => vec![Node::S(s)],
            Step::Right(t) => vec![Node::T(t)],
            Step::Sync(s, t) => vec![Node::S(s), Node::T(t)],
        };
        while let Some(node) = stack.pop() {
            match node {
                Node::S(s) => {
                    if x.put(s) {
                        continue;
                    }
                    stack.extend(s_es.down(s).ones().filter(|&u| u != s).map(Node::S));
                    if let Some(b) = self.sync1[s] {
                        stack.push(Node::T(partner_of_s[&b]));
                    }
                }
                Node::T(t) => {
                    if y.put(t) {
                        continue;
                    }
                    stack.extend(t_es.down(t).ones().filter(|&u| u != t).map(Node::T));
                    if let Some(b) = self.sync2[t] {
                        stack.push(Node::S(partner_of_t[&b]));
                    }
                }
            }
        }
        InteractionState { x, y }
    }
}

/// Every secured interaction state of two strategies sharing a middle game,
/// reached from `(∅, ∅)` one step at a time, in discovery order.
pub fn interaction_states(st1: &Strategy, st2: &Strategy) -> Result<Vec<InteractionState>> {
    let it = interaction(st1, st2)?;
    Ok(explore(&it).0)
}

fn interaction<'a>(st1: &'a Strategy, st2: &'a Strategy) -> Result<Interaction<'a>> {
    let (b1, old1) = st1.game.side(Side::Right);
    let (b2, old2) = st2.game.side(Side::Left);
    if !b1.same_as(&b2.dual()) {
        return Err(Error::MiddleGameMismatch(format!(
            "{{{}}} against {{{}}}",
            b1.es.names().join(","),
            b2.es.names().join(",")
        )));
    }
    // middle events are numbered by their index in b2
    let mut via1 = vec![None; st1.game.len()];
    for (i, &o) in old1.iter().enumerate() {
        via1[o] = b2.es.index_of(b1.es.name(i));
    }
    let mut via2 = vec![None; st2.game.len()];
    for (i, &o) in old2.iter().enumerate() {
        via2[o] = Some(i);
    }
    Ok(Interaction {
        st1,
        st2,
        sync1: st1.sigma.iter().map(|&e| via1[e]).collect(),
        sync2: st2.sigma.iter().map(|&e| via2[e]).collect(),
    })
}

type Primes = Vec<(InteractionState, Step)>;

fn explore(it: &Interaction) -> (Vec<InteractionState>, Primes) {
    let start = InteractionState {
        x: FixedBitSet::with_capacity(it.st1.s.len()),
        y: FixedBitSet::with_capacity(it.st2.s.len()),
    };
    let mut seen: HashMap<InteractionState, usize> = HashMap::new();
    seen.insert(start.clone(), 0);
    let mut states = vec![start];
    let mut primes: Primes = Vec::new();
    let mut prime_seen: HashMap<InteractionState, usize> = HashMap::new();
    let mut next = 0;
    while next < states.len() {
        let z = states[next].clone();
        next += 1;
        for (step, z2) in it.successors(&z) {
            let p = it.prime(&z2, step);
            if !prime_seen.contains_key(&p) {
                prime_seen.insert(p.clone(), primes.len());
                primes.push((p, step));
            }
            if !seen.contains_key(&z2) {
                seen.insert(z2.clone(), states.len());
                states.push(z2);
            }
        }
    }
    (states, primes)
}

/// `st2 ⊙ st1`: interaction of `S → A⊥||B` and `T → B⊥||C` over `B`, with
/// the synchronised events hidden. The result is a strategy into `A⊥||C`.
pub fn compose_classic(st1: &Strategy, st2: &Strategy) -> Result<Strategy> {
    let it = interaction(st1, st2)?;
    let (states, primes) = explore(&it);
    let (a, old_a) = st1.game.side(Side::Left);
    let (c, old_c) = st2.game.side(Side::Right);
    let game = PolarizedES::par(&a, &c);
    let pos = |old: &[usize], e: usize| old.iter().position(|&o| o == e).expect("visible event");

    let visible: Vec<(&InteractionState, usize)> = primes
        .iter()
        .filter_map(|(p, step)| match *step {
            Step::Left(s) => Some((p, pos(&old_a, st1.sigma[s]))),
            Step::Right(t) => Some((p, a.len() + pos(&old_c, st2.sigma[t]))),
            Step::Sync(..) => None,
        })
        .collect();
    let n = visible.len();
    let within = |p: &InteractionState, z: &InteractionState| p.x.is_subset(&z.x) && p.y.is_subset(&z.y);
    let mut covering = Vec::new();
    for (i, (p, _)) in visible.iter().enumerate() {
        for (j, (q, _)) in visible.iter().enumerate() {
            if i != j && within(p, q) {
                covering.push((i, j));
            }
        }
    }
    let holders: Vec<FixedBitSet> = visible
        .iter()
        .map(|(p, _)| {
            let mut h = FixedBitSet::with_capacity(states.len());
            states.iter().enumerate().filter(|(_, z)| within(p, z)).for_each(|(k, _)| h.insert(k));
            h
        })
        .collect();
    let names = visible
        .iter()
        .map(|(p, _)| {
            let mut parts: Vec<String> = p.x.ones().map(|s| tag(Side::Left, st1.s.es.name(s))).collect();
            parts.extend(p.y.ones().map(|t| tag(Side::Right, st2.s.es.name(t))));
            parts.sort();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let es = EventStructure::from_predicate(names, covering, |set| {
        let mut common = FixedBitSet::with_capacity(states.len());
        common.insert_range(..);
        set.ones().for_each(|i| common.intersect_with(&holders[i]));
        common.count_ones(..) > 0
    })?;
    debug_assert_eq!(es.len(), n);
    let sigma: Vec<usize> = visible.iter().map(|&(_, e)| e).collect();
    let pol = sigma.iter().map(|&e| game.pol(e)).collect();
    Strategy::new(PolarizedES::new(es, pol)?, game, sigma)
}

/// `τ ⊛ σ` for `σ` in `E⊥ ⅋ F` and `τ` in `F⊥ ⅋ G`, computed on the
/// expansions and reduced back to an A-strategy in `E⊥ ⅋ G`.
pub fn a_compose(ast1: &AStrategy, ast2: &AStrategy) -> Result<AStrategy> {
    let ((e_dual, _), (f, _)) = ast1.game.split();
    let ((f_dual, _), (g, _)) = ast2.game.split();
    if !f.pes.same_as(&f_dual.pes.dual()) || f.algebra != f_dual.algebra || f.var != f_dual.var {
        return Err(Error::MiddleGameMismatch("the middle A-games differ".into()));
    }
    let d1 = distribute_expansion(&e_dual, &f)?;
    let d2 = distribute_expansion(&f_dual, &g)?;
    if d1.joint.base.es().names() != ast1.game.es().names() || d2.joint.base.es().names() != ast2.game.es().names() {
        return Err(Error::Precondition("games must be laid out as parallel compositions".into()));
    }
    let st1 = transport(&theta_into(ast1, &d1.joint)?, &d1.split, &d1.forward)?;
    let st2 = transport(&theta_into(ast2, &d2.joint)?, &d2.split, &d2.forward)?;
    let composed = compose_classic(&st1, &st2)?;
    let out = distribute_expansion(&e_dual, &g)?;
    let to_split = name_map(&composed.game.es, &out.split.es)?;
    let to_joint: Vec<usize> = to_split.iter().map(|&i| out.backward[i]).collect();
    reduc(&transport(&composed, &out.joint.pes, &to_joint)?, &out.joint)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Preserved,
    Violated,
    /// An operand was not winning to begin with.
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityRecord {
    pub instance: usize,
    pub verdict: Verdict,
    /// Failing +-maximal configuration of the composite, by event name.
    pub witness: Option<Vec<String>>,
    /// Preorder evaluation of the composite's winning formula at the witness.
    pub trace: Option<Vec<(String, bool)>>,
    #[serde(skip)]
    pub composed: Option<AStrategy>,
}

/// For each pair of winning strategies `σ: E ⇸ F`, `τ: F ⇸ G`, checks
/// whether `τ ⊛ σ` wins `¬W_E ∨ W_G`. Counterexamples are reported.
pub fn check_winning_stability(suite: &[(AStrategy, AStrategy)]) -> Result<Vec<StabilityRecord>> {
    let mut records = Vec::with_capacity(suite.len());
    for (instance, (ast1, ast2)) in suite.iter().enumerate() {
        let wins = |a: &AStrategy| a.is_winning(&a.game.winning_or_true()).map(|w| w.winning);
        if !wins(ast1)? || !wins(ast2)? {
            records.push(StabilityRecord { instance, verdict: Verdict::Skipped, witness: None, trace: None, composed: None });
            continue;
        }
        let composed = a_compose(ast1, ast2)?;
        let w = composed.game.winning_or_true();
        let result = composed.is_winning(&w)?;
        let (verdict, witness, trace) = match result.witness {
            Some(x) if !result.winning => {
                let v = composed.valuation(&x)?;
                let trace = v.trace(&w, composed.algebra(), &composed.game.vars);
                (Verdict::Violated, Some(composed.es().names_of(&x)), Some(trace))
            }
            _ => (Verdict::Preserved, None, None),
        };
        records.push(StabilityRecord { instance, verdict, witness, trace, composed: Some(composed) });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, VariableSet};
    use crate::game::Polarity::{Minus, Plus};
    use crate::iso::{a_isomorphic, isomorphic};

    fn pes(names: &[&str], cov: &[(&str, &str)], pol: &[Polarity]) -> PolarizedES {
        PolarizedES::new(EventStructure::new(names, cov, &[]).unwrap(), pol.to_vec()).unwrap()
    }

    #[test]
    fn copycat_single_positive() {
        let cc = copycat(&pes(&["a"], &[], &[Plus]));
        let es = cc.es();
        assert_eq!(es.names(), &["1.a".to_string(), "2.a".to_string()]);
        assert!(es.lt(0, 1));
        let configs: Vec<Vec<usize>> = es.configurations().iter().map(|x| x.ones().collect()).collect();
        assert_eq!(configs, vec![vec![], vec![0], vec![0, 1]]);
        assert!(cc.strategy.check().is_valid());
    }

    #[test]
    fn copycat_single_negative() {
        let cc = copycat(&pes(&["a"], &[], &[Minus]));
        assert!(cc.es().lt(1, 0));
        assert!(cc.strategy.check().is_valid());
    }

    #[test]
    fn copycat_concurrent_pair() {
        let cc = copycat(&pes(&["a", "b"], &[], &[Plus, Minus]));
        // ā ≤ a and b ≤ b̄
        assert!(cc.es().lt(0, 2));
        assert!(cc.es().lt(3, 1));
        assert!(cc.check_immediate().is_valid());
        assert!(cc.check_configurations().is_valid());
        // brute-force oracle over all subsets of A⊥||A
        let game = &cc.strategy.game;
        let mut count = 0;
        for bits in 0u32..16 {
            let x = game.es.set_of((0..4).filter(|i| bits >> i & 1 == 1));
            let ok = game.es.is_configuration(&x)
                && x.ones().all(|c| game.pol(c) != Plus || x.contains(cc.bar(c)));
            assert_eq!(ok, cc.es().is_configuration(&x));
            count += ok as usize;
        }
        assert_eq!(count, 9);
    }

    #[test]
    fn literal_immediate_clause_fails_on_alternating_link() {
        let cc = copycat(&pes(&["a", "b"], &[("a", "b")], &[Minus, Plus]));
        let report = cc.check_immediate();
        assert_eq!(report.count(Rule::CopycatCausality), 1);
        assert!(report.to_string().contains("2.a → 2.b"));
        assert!(cc.check_immediate_refined().is_valid());
    }

    fn single_sync() -> (Strategy, Strategy) {
        // a⁻ then b⁺ into A⊥||B with A = a⁺, B = b⁺
        let g1 = PolarizedES::par(&pes(&["a"], &[], &[Plus]).dual(), &pes(&["b"], &[], &[Plus]));
        let s1 = pes(&["a", "b"], &[("a", "b")], &[Minus, Plus]);
        let st1 = Strategy::new(s1, g1, vec![0, 1]).unwrap();
        // b⁻ then c⁺ into B⊥||C with C = c⁺
        let g2 = PolarizedES::par(&pes(&["b"], &[], &[Plus]).dual(), &pes(&["c"], &[], &[Plus]));
        let s2 = pes(&["b", "c"], &[("b", "c")], &[Minus, Plus]);
        let st2 = Strategy::new(s2, g2, vec![0, 1]).unwrap();
        (st1, st2)
    }

    #[test]
    fn single_synchronisation_chain() {
        let (st1, st2) = single_sync();
        assert!(st1.check().is_valid() && st2.check().is_valid());
        let states = interaction_states(&st1, &st2).unwrap();
        assert_eq!(states.len(), 4);
        let r = compose_classic(&st1, &st2).unwrap();
        assert_eq!(r.s.len(), 2);
        let names: Vec<&str> = r.sigma.iter().map(|&e| r.game.es.name(e)).collect();
        assert_eq!(names, vec!["1.a", "2.c"]);
        assert!(r.s.es.lt(0, 1));
        assert!(r.check().is_valid());
    }

    #[test]
    fn identity_laws() {
        let (st1, st2) = single_sync();
        let b = pes(&["b"], &[], &[Plus]);
        let left = compose_classic(&st1, &copycat(&b).strategy).unwrap();
        assert!(isomorphic(&left, &st1));
        let right = compose_classic(&copycat(&b).strategy, &st2).unwrap();
        assert!(isomorphic(&right, &st2));
    }

    #[test]
    fn mismatched_middle_is_rejected() {
        let (st1, _) = single_sync();
        let err = compose_classic(&st1, &st1).unwrap_err();
        assert!(matches!(err, Error::MiddleGameMismatch(_)));
    }

    fn agame(names: &[&str], cov: &[(&str, &str)], pol: &[Polarity], values: &[&str]) -> AGame {
        AGame::new(
            pes(names, cov, pol),
            Algebra::set("s", values),
            VariableSet::from_pairs(&[("x", "s")]).unwrap(),
            names.iter().map(|_| "x".to_string()).collect(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn a_copycat_shapes() {
        let empty = a_copycat(&AGame::empty(Algebra::set("s", &["a"]))).unwrap();
        assert_eq!(empty.s.len(), 0);

        let one = a_copycat(&agame(&["e"], &[], &[Minus], &["a"])).unwrap();
        assert_eq!(one.s.len(), 2);
        assert!(one.check().is_valid(), "{}", one.check());

        let two = a_copycat(&agame(&["e"], &[], &[Minus], &["a", "b"])).unwrap();
        assert_eq!(two.s.len(), 4);
        let report = two.check();
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn a_copycat_is_identity_for_a_compose() {
        let f = agame(&["e"], &[], &[Plus], &["a", "b"]);
        let e = agame(&["d"], &[], &[Plus], &["a", "b"]);
        // σ: E ⇸ F copies the value of d⁻ into e⁺
        let x = expand_game(&AGame::par(&e.dual(), &f)).unwrap();
        let cc = a_copycat(&e).unwrap();
        // the copycat on E is a strategy E ⇸ E; rename the right copy to F
        assert_eq!(x.len(), 4);
        let sigma = cc.sigma.clone();
        let game = AGame::par(&e.dual(), &f);
        let s1 = AStrategy::new(cc.s.clone(), game, sigma, cc.inst.clone()).unwrap();
        assert!(s1.check().is_valid());
        let left = a_compose(&s1, &a_copycat(&f).unwrap()).unwrap();
        assert!(left.check().is_valid(), "{}", left.check());
        assert!(a_isomorphic(&left, &s1));
        let right = a_compose(&a_copycat(&e).unwrap(), &s1).unwrap();
        assert!(a_isomorphic(&right, &s1));
    }

    #[test]
    fn trivial_games_are_stable() {
        let g = agame(&["e"], &[], &[Plus], &["a"]);
        let cc = a_copycat(&g).unwrap();
        let records = check_winning_stability(&[(cc.clone(), cc)]).unwrap();
        assert_eq!(records.len(), 1);
        assert_ne!(records[0].verdict, Verdict::Violated);
    }
}
