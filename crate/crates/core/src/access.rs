//! Imperfect information through a preorder of access levels: leveled
//! games, leveled strategies and the independence of moves at
//! incomparable levels.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::compose::{compose_classic, copycat};
use crate::error::{Error, Result};
use crate::es::EventSet;
use crate::expansion::{theta, ExpandedGame};
use crate::game::{AGame, Polarity, PolarizedES};
use crate::iso::isomorphic;
use crate::report::{Rule, ValidationReport};
use crate::strategy::{AStrategy, Strategy};
use crate::tag::Side;

/// A finite preorder `(Λ, ≲)`, stored reflexively and transitively closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPreorder {
    levels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl LevelPreorder {
    /// The reflexive-transitive closure of `pairs` on `levels`.
    pub fn new<S: AsRef<str>>(levels: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let levels: Vec<String> = levels.iter().map(|l| l.as_ref().to_string()).collect();
        let n = levels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut out = Self { levels, leq };
        for (a, b) in pairs {
            let (i, j) = (out.require(a.as_ref())?, out.require(b.as_ref())?);
            out.leq[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if out.leq[i][k] && out.leq[k][j] {
                        out.leq[i][j] = true;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reports the pairs a relation misses to be a preorder.
    pub fn check_relation<S: AsRef<str>>(levels: &[S], pairs: &[(S, S)]) -> ValidationReport {
        let mut report = ValidationReport::new();
        let given: BTreeSet<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_ref(), b.as_ref())).collect();
        for l in levels {
            if !given.contains(&(l.as_ref(), l.as_ref())) {
                report.push(Rule::LevelPreorder, format!("{} ≲ {} missing (reflexivity)", l.as_ref(), l.as_ref()));
            }
        }
        for &(a, b) in &given {
            for &(b2, c) in &given {
                if b == b2 && !given.contains(&(a, c)) {
                    report.push(Rule::LevelPreorder, format!("{a} ≲ {c} missing (transitivity through {b})"));
                }
            }
        }
        report
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn index_of(&self, level: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == level)
    }

    pub fn require(&self, level: &str) -> Result<usize> {
        self.index_of(level).ok_or_else(|| Error::UnknownLevel(level.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq[a][b] || self.leq[b][a]
    }

    /// The relation as explicit pairs, for serialization.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let n = self.levels.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.leq[i][j] {
                    out.push((self.levels[i].clone(), self.levels[j].clone()));
                }
            }
        }
        out
    }
}

/// The levels document: the preorder and the level of each event by name.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelsDoc {
    pub levels: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
    #[serde(default)]
    pub assign: BTreeMap<String, String>,
}

impl LevelsDoc {
    /// Resolves the assignment against a game's events.
    pub fn resolve(&self, pes: &PolarizedES) -> Result<(LevelPreorder, Vec<usize>)> {
        let levels = LevelPreorder::new(&self.levels, &self.leq)?;
        let mut l = Vec::with_capacity(pes.len());
        for name in pes.es.names() {
            let level = self
                .assign
                .get(name)
                .ok_or_else(|| Error::Invalid(format!("no level assigned to event {name}")))?;
            l.push(levels.require(level)?);
        }
        for name in self.assign.keys() {
            pes.es.require(name)?;
        }
        Ok((levels, l))
    }
}

/// A Λ-game: a game with a level per event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeveledGame {
    pub pes: PolarizedES,
    pub levels: LevelPreorder,
    pub l: Vec<usize>,
}

impl LeveledGame {
    pub fn new(pes: PolarizedES, levels: LevelPreorder, l: Vec<usize>) -> Result<Self> {
        if l.len() != pes.len() {
            return Err(Error::Invalid(format!("{} levels for {} events", l.len(), pes.len())));
        }
        if let Some(&bad) = l.iter().find(|&&i| i >= levels.levels().len()) {
            return Err(Error::UnknownLevel(format!("#{bad}")));
        }
        Ok(Self { pes, levels, l })
    }

    pub fn level_name(&self, e: usize) -> &str {
        &self.levels.levels()[self.l[e]]
    }

    pub fn dual(&self) -> LeveledGame {
        Self { pes: self.pes.dual(), levels: self.levels.clone(), l: self.l.clone() }
    }

    /// `(A||B, l_A||l_B)`; both sides must use the same preorder.
    pub fn par(a: &LeveledGame, b: &LeveledGame) -> Result<LeveledGame> {
        if a.levels != b.levels {
            return Err(Error::Precondition("parallel Λ-games must share the preorder".into()));
        }
        let l = a.l.iter().chain(&b.l).copied().collect();
        LeveledGame::new(PolarizedES::par(&a.pes, &b.pes), a.levels.clone(), l)
    }

    /// The levels of one side of a tagged parallel game.
    pub fn side(&self, side: Side) -> LeveledGame {
        let (pes, old) = self.pes.side(side);
        let l = old.iter().map(|&o| self.l[o]).collect();
        Self { pes, levels: self.levels.clone(), l }
    }
}

/// An A,Λ-game: an A-game with a level per event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeveledAGame {
    pub game: AGame,
    pub levels: LevelPreorder,
    pub l: Vec<usize>,
}

impl LeveledAGame {
    pub fn new(game: AGame, levels: LevelPreorder, l: Vec<usize>) -> Result<Self> {
        let plain = LeveledGame::new(game.pes.clone(), levels, l)?;
        Ok(Self { game, levels: plain.levels, l: plain.l })
    }

    /// Levels induced by levels on variables: `l(e) = level(var(e))`.
    pub fn from_variable_levels(game: AGame, levels: LevelPreorder, var_level: &BTreeMap<String, String>) -> Result<Self> {
        let mut l = Vec::with_capacity(game.len());
        for v in &game.var {
            let level = var_level.get(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            l.push(levels.require(level)?);
        }
        Self::new(game, levels, l)
    }

    pub fn plain(&self) -> LeveledGame {
        LeveledGame { pes: self.game.pes.clone(), levels: self.levels.clone(), l: self.l.clone() }
    }

    /// `expn(A)` as a Λ-game, with `l_expn(e) = l(ep(e))`.
    pub fn leveled_expansion(&self, x: &ExpandedGame) -> LeveledGame {
        LeveledGame { pes: x.pes.clone(), levels: self.levels.clone(), l: x.red.iter().map(|&e| self.l[e]).collect() }
    }
}

/// Monotonicity of the level function along causality.
pub fn validate_lambda_game(g: &LeveledGame) -> ValidationReport {
    let mut report = ValidationReport::new();
    let es = &g.pes.es;
    for a in 0..es.len() {
        for b in es.up(a).ones() {
            if !g.levels.leq(g.l[a], g.l[b]) {
                report.push(
                    Rule::LevelMonotone,
                    format!("{} ≤ {} but {} ≴ {}", es.name(a), es.name(b), g.level_name(a), g.level_name(b)),
                );
            }
        }
    }
    report
}

/// `s' ≤ s ⇒ lσ(s') ≲ lσ(s)`.
pub fn check_lambda_strategy(st: &Strategy, g: &LeveledGame) -> ValidationReport {
    let mut report = ValidationReport::new();
    if st.game.len() != g.pes.len() {
        report.push(Rule::LevelMonotone, "strategy and leveled game differ in size".to_string());
        return report;
    }
    let es = &st.s.es;
    for a in 0..es.len() {
        for b in es.up(a).ones() {
            let (la, lb) = (g.l[st.sigma[a]], g.l[st.sigma[b]]);
            if !g.levels.leq(la, lb) {
                report.push(
                    Rule::LevelMonotone,
                    format!(
                        "{} ≤ {} but {} ≴ {}",
                        es.name(a),
                        es.name(b),
                        g.levels.levels()[la],
                        g.levels.levels()[lb]
                    ),
                );
            }
        }
    }
    report
}

/// The A,Λ check, run on `θ(ast)` against the leveled expansion.
pub fn check_a_lambda_strategy(ast: &AStrategy, g: &LeveledAGame) -> Result<ValidationReport> {
    let (x, st) = theta(ast)?;
    Ok(check_lambda_strategy(&st, &g.leveled_expansion(&x)))
}

/// The Λ-copycat on `g`, with its leveled game `(A⊥||A, l||l)`.
pub fn lambda_copycat(g: &LeveledGame) -> Result<(Strategy, LeveledGame)> {
    let cc = copycat(&g.pes).strategy;
    let leveled = LeveledGame::par(&g.dual(), g)?;
    Ok((cc, leveled))
}

/// Outcome of composing a Λ-strategy `A ⇸ B` with copycat on either side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaIdentity {
    pub left_isomorphic: bool,
    pub right_isomorphic: bool,
    pub left_leveled: bool,
    pub right_leveled: bool,
}

impl LambdaIdentity {
    pub fn holds(&self) -> bool {
        self.left_isomorphic && self.right_isomorphic && self.left_leveled && self.right_leveled
    }
}

/// Composes `st: A ⇸ B` with the Λ-copycats of `A` and `B` and checks
/// both composites against `st` and against the levels of `A⊥||B`.
pub fn lambda_identity(st: &Strategy, a: &LeveledGame, b: &LeveledGame) -> Result<LambdaIdentity> {
    let target = LeveledGame::par(&a.dual(), b)?;
    let (cc_a, _) = lambda_copycat(a)?;
    let (cc_b, _) = lambda_copycat(b)?;
    let left = compose_classic(st, &cc_b)?;
    let right = compose_classic(&cc_a, st)?;
    let leveled = |c: &Strategy| {
        let map: Vec<usize> = (0..c.game.len())
            .map(|e| target.pes.es.index_of(c.game.es.name(e)).expect("same game"))
            .collect();
        let moved = Strategy { s: c.s.clone(), game: target.pes.clone(), sigma: c.sigma.iter().map(|&e| map[e]).collect() };
        check_lambda_strategy(&moved, &target).is_valid()
    };
    Ok(LambdaIdentity {
        left_isomorphic: isomorphic(&left, st),
        right_isomorphic: isomorphic(&right, st),
        left_leveled: leveled(&left),
        right_leveled: leveled(&right),
    })
}

/// Enumerated content of the independence proposition at one configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    /// Pairs of single extensions whose union is not a configuration.
    pub inconsistent_pairs: Vec<(String, String)>,
    /// `(α, α')` values over joint extensions.
    pub joint: BTreeSet<(String, String)>,
    /// Product of the single-extension value sets.
    pub product: BTreeSet<(String, String)>,
}

impl IndependenceReport {
    pub fn clause1(&self) -> bool {
        self.inconsistent_pairs.is_empty()
    }

    pub fn clause2(&self) -> bool {
        self.joint == self.product
    }

    pub fn to_report(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (s, t) in &self.inconsistent_pairs {
            report.push(Rule::LevelIndependence, format!("extensions {s} and {t} are not jointly consistent"));
        }
        if !self.clause2() {
            report.push(
                Rule::LevelIndependence,
                format!("joint values {:?} differ from the product {:?}", self.joint, self.product),
            );
        }
        report
    }
}

/// Checks both clauses of the independence proposition for `e⁻`, `e'⁺` at
/// levels incomparable in `g`, at a configuration `x` of the strategy whose
/// image enables both.
pub fn check_lambda_independence(
    ast: &AStrategy,
    g: &LeveledAGame,
    e: usize,
    e2: usize,
    x: &EventSet,
) -> Result<IndependenceReport> {
    let ges = ast.game.es();
    if g.levels.comparable(g.l[e], g.l[e2]) {
        return Err(Error::Precondition(format!("levels of {} and {} are comparable", ges.name(e), ges.name(e2))));
    }
    if ast.game.pol(e) != Polarity::Minus || ast.game.pol(e2) != Polarity::Plus {
        return Err(Error::Precondition("expects a negative and a positive event".into()));
    }
    if !ast.es().is_configuration(x) {
        return Err(Error::NotConfiguration(ast.es().fmt_set(x)));
    }
    let sx = ast.image(x);
    if !ges.enables(&sx, e) || !ges.enables(&sx, e2) {
        return Err(Error::Precondition("the image of x must enable both events".into()));
    }
    let es = ast.es();
    let enabled = es.enabled_events(x);
    let ext: Vec<usize> = enabled.iter().copied().filter(|&s| ast.sigma[s] == e).collect();
    let ext2: Vec<usize> = enabled.iter().copied().filter(|&s| ast.sigma[s] == e2).collect();
    let mut inconsistent_pairs = Vec::new();
    let mut joint = BTreeSet::new();
    for &s in &ext {
        for &t in &ext2 {
            let mut y = es.with(x, s);
            y.insert(t);
            if es.is_configuration(&y) {
                joint.insert((ast.inst[s].clone(), ast.inst[t].clone()));
            } else {
                inconsistent_pairs.push((es.name(s).to_string(), es.name(t).to_string()));
            }
        }
    }
    let mut product = BTreeSet::new();
    for &s in &ext {
        for &t in &ext2 {
            product.insert((ast.inst[s].clone(), ast.inst[t].clone()));
        }
    }
    Ok(IndependenceReport { inconsistent_pairs, joint, product })
}

/// All instances of the independence proposition in a strategy: every
/// configuration and every Λ-independent pair `(e⁻, e'⁺)` enabled at its
/// image.
pub fn independence_instances(ast: &AStrategy, g: &LeveledAGame) -> Vec<(usize, usize, EventSet)> {
    let ges = ast.game.es();
    let mut out = Vec::new();
    for x in ast.es().configurations() {
        let sx = ast.image(x);
        let enabled = ges.enabled_events(&sx);
        for &e in enabled.iter().filter(|&&e| ast.game.pol(e) == Polarity::Minus) {
            for &e2 in enabled.iter().filter(|&&e2| ast.game.pol(e2) == Polarity::Plus) {
                if !g.levels.comparable(g.l[e], g.l[e2]) {
                    out.push((e, e2, x.clone()));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, VariableSet};
    use crate::es::EventStructure;
    use crate::expansion::red_strategy;
    use crate::game::Polarity::{Minus, Plus};

    fn pes(names: &[&str], cov: &[(&str, &str)], pol: &[Polarity]) -> PolarizedES {
        PolarizedES::new(EventStructure::new(names, cov, &[]).unwrap(), pol.to_vec()).unwrap()
    }

    fn two_levels(related: bool) -> LevelPreorder {
        if related {
            LevelPreorder::new(&["low", "high"], &[("low", "high")]).unwrap()
        } else {
            LevelPreorder::new(&["low", "high"], &[]).unwrap()
        }
    }

    #[test]
    fn preorder_closure_and_check() {
        let p = LevelPreorder::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(p.leq(0, 2) && p.leq(1, 1) && !p.leq(2, 0));
        let r = LevelPreorder::check_relation(&["a", "b"], &[("a", "b")]);
        assert_eq!(r.count(Rule::LevelPreorder), 2);
        assert!(matches!(LevelPreorder::new(&["a"], &[("a", "z")]), Err(Error::UnknownLevel(_))));
    }

    #[test]
    fn lambda_games() {
        let chain = pes(&["e1", "e2"], &[("e1", "e2")], &[Minus, Plus]);
        let constant = LeveledGame::new(chain.clone(), two_levels(false), vec![0, 0]).unwrap();
        assert!(validate_lambda_game(&constant).is_valid());
        let broken = LeveledGame::new(chain.clone(), two_levels(false), vec![0, 1]).unwrap();
        assert!(validate_lambda_game(&broken).has(Rule::LevelMonotone));
        let ok = LeveledGame::new(chain, two_levels(true), vec![0, 1]).unwrap();
        assert!(validate_lambda_game(&ok).is_valid());
    }

    #[test]
    fn lambda_strategies() {
        let game = pes(&["n", "p"], &[], &[Minus, Plus]);
        let g = LeveledGame::new(game.clone(), two_levels(false), vec![0, 1]).unwrap();
        let free = Strategy::identity(&game);
        assert!(check_lambda_strategy(&free, &g).is_valid());
        let s = pes(&["n", "p"], &[("n", "p")], &[Minus, Plus]);
        let delayed = Strategy::new(s, game, vec![0, 1]).unwrap();
        assert!(delayed.check().is_valid());
        assert!(check_lambda_strategy(&delayed, &g).has(Rule::LevelMonotone));
    }

    #[test]
    fn lambda_copycats() {
        for (game, levels, l) in [
            (pes(&["a"], &[], &[Plus]), two_levels(false), vec![0]),
            (pes(&["a", "b"], &[], &[Plus, Minus]), two_levels(false), vec![0, 1]),
            (pes(&["a", "b"], &[("a", "b")], &[Minus, Plus]), two_levels(true), vec![0, 1]),
        ] {
            let g = LeveledGame::new(game, levels, l).unwrap();
            let (cc, leveled) = lambda_copycat(&g).unwrap();
            assert!(validate_lambda_game(&leveled).is_valid());
            assert!(check_lambda_strategy(&cc, &leveled).is_valid());
        }
    }

    #[test]
    fn identity_for_a_leveled_strategy() {
        let a = LeveledGame::new(pes(&["a"], &[], &[Plus]), two_levels(true), vec![0]).unwrap();
        let b = LeveledGame::new(pes(&["b"], &[], &[Plus]), two_levels(true), vec![1]).unwrap();
        let game = PolarizedES::par(&a.pes.dual(), &b.pes);
        let s = pes(&["a", "b"], &[("a", "b")], &[Minus, Plus]);
        let st = Strategy::new(s, game, vec![0, 1]).unwrap();
        let r = lambda_identity(&st, &a, &b).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    fn independent_game(values: &[&str]) -> LeveledAGame {
        let game = AGame::new(
            pes(&["e", "f"], &[], &[Minus, Plus]),
            Algebra::set("s", values),
            VariableSet::from_pairs(&[("x", "s"), ("y", "s")]).unwrap(),
            vec!["x".into(), "y".into()],
            None,
        )
        .unwrap();
        LeveledAGame::new(game, two_levels(false), vec![0, 1]).unwrap()
    }

    #[test]
    fn independence_singletons_and_products() {
        let g = independent_game(&["a"]);
        let red = red_strategy(&g.game).unwrap();
        let r = check_lambda_independence(&red, &g, 0, 1, &red.es().empty_set()).unwrap();
        assert!(r.clause1() && r.clause2());
        assert_eq!(r.product.len(), 1);

        let g = independent_game(&["a", "b"]);
        let red = red_strategy(&g.game).unwrap();
        assert!(check_a_lambda_strategy(&red, &g).unwrap().is_valid());
        let r = check_lambda_independence(&red, &g, 0, 1, &red.es().empty_set()).unwrap();
        assert!(r.clause1() && r.clause2());
        assert_eq!(r.product.len(), 4);
        assert_eq!(independence_instances(&red, &g).len(), 1);

        let err = check_lambda_independence(&red, &g, 1, 0, &red.es().empty_set());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn value_dependent_strategy_is_rejected_by_levels() {
        // the positive reply waits for the negative move: a flow from low to
        // high is forbidden when the levels are incomparable
        let g = independent_game(&["a"]);
        let s = pes(&["e", "f"], &[("e", "f")], &[Minus, Plus]);
        let ast = AStrategy::new(s, g.game.clone(), vec![0, 1], vec!["a".into(), "a".into()]).unwrap();
        assert!(ast.check().is_valid());
        assert!(check_a_lambda_strategy(&ast, &g).unwrap().has(Rule::LevelMonotone));
    }
}
