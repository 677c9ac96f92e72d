//! The expansion of an A-game into a plain game whose events carry their
//! whole value history, and the translations between A-strategies and plain
//! strategies on the expansion.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::es::{EventSet, EventStructure};
use crate::game::{AGame, PolarizedES};
use crate::strategy::{AStrategy, Strategy};
use crate::tag::{tag, untag, Side};
use crate::util::product;

/// An assignment of values to the events of some `[e]`, keyed by game event
/// index.
pub type Env = BTreeMap<usize, String>;

/// `expn(E)`: events `(e, ε)` for every sortwise `ε: [e] → |A|`, ordered by
/// restriction, with `red` and `Inst`.
#[derive(Debug, Clone)]
pub struct ExpandedGame {
    pub pes: PolarizedES,
    pub base: AGame,
    pub red: Vec<usize>,
    pub eps: Vec<Env>,
    lookup: HashMap<(usize, Vec<(usize, String)>), usize>,
}

impl ExpandedGame {
    pub fn len(&self) -> usize {
        self.pes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pes.is_empty()
    }

    pub fn es(&self) -> &EventStructure {
        &self.pes.es
    }

    /// `Inst(e, ε) = ε(e)`.
    pub fn inst(&self, i: usize) -> &str {
        &self.eps[i][&self.red[i]]
    }

    /// The expanded event `(e, ε)`, if `ε` is a valid environment for `[e]`.
    pub fn find(&self, e: usize, eps: &Env) -> Option<usize> {
        let key: Vec<(usize, String)> = eps.iter().map(|(&k, v)| (k, v.clone())).collect();
        self.lookup.get(&(e, key)).copied()
    }

    /// Canonical event name `e@[e1=a,e2=b]`, entries sorted by event name.
    pub fn event_name(base: &AGame, e: usize, eps: &Env) -> String {
        let mut entries: Vec<(&str, &str)> = eps.iter().map(|(&k, v)| (base.es().name(k), v.as_str())).collect();
        entries.sort();
        let body: Vec<String> = entries.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}@[{}]", base.es().name(e), body.join(","))
    }
}

/// Number of events of the expansion: `Σ_e Π_{e' ∈ [e]} |values(e')|`.
pub fn expansion_size(g: &AGame) -> usize {
    (0..g.len())
        .map(|e| g.es().down(e).ones().map(|d| g.values_of(d).len()).product::<usize>())
        .sum()
}

pub fn expand_game(g: &AGame) -> Result<ExpandedGame> {
    for e in 0..g.len() {
        if g.values_of(e).is_empty() {
            return Err(Error::EmptySort(g.sort_of_event(e).to_string()));
        }
    }
    let es = g.es();
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by_key(|&e| (es.down(e).count_ones(..), e));

    let mut names = Vec::new();
    let mut red = Vec::new();
    let mut eps: Vec<Env> = Vec::new();
    let mut lookup = HashMap::new();
    let mut covering = Vec::new();
    let preds: Vec<Vec<usize>> = (0..g.len())
        .map(|e| es.covering().iter().filter(|&&(_, b)| b == e).map(|&(a, _)| a).collect())
        .collect();

    for &e in &order {
        let hist: Vec<usize> = es.down(e).ones().collect();
        let values: Vec<Vec<&str>> = hist.iter().map(|&d| g.values_of(d)).collect();
        let sizes: Vec<usize> = values.iter().map(Vec::len).collect();
        for pick in product(&sizes) {
            let env: Env = hist.iter().zip(&pick).zip(&values).map(|((&d, &k), v)| (d, v[k].to_string())).collect();
            let idx = names.len();
            names.push(ExpandedGame::event_name(g, e, &env));
            for &p in &preds[e] {
                let key: Vec<(usize, String)> = env
                    .iter()
                    .filter(|(k, _)| es.leq(**k, p))
                    .map(|(&k, v)| (k, v.clone()))
                    .collect();
                covering.push((lookup[&(p, key)], idx));
            }
            lookup.insert((e, env.iter().map(|(&k, v)| (k, v.clone())).collect()), idx);
            red.push(e);
            eps.push(env);
        }
    }

    let n = names.len();
    let mut by_base: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    for (i, &e) in red.iter().enumerate() {
        by_base[e].push(i);
    }
    let mut base_sets = Vec::new();
    for group in &by_base {
        for (i, &a) in group.iter().enumerate() {
            for &b in &group[i + 1..] {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(a);
                s.insert(b);
                base_sets.push(s);
            }
        }
    }
    for m in es.min_inconsistent() {
        let members: Vec<usize> = m.ones().collect();
        let sizes: Vec<usize> = members.iter().map(|&b| by_base[b].len()).collect();
        for pick in product(&sizes) {
            let mut s = FixedBitSet::with_capacity(n);
            for (slot, &k) in pick.iter().enumerate() {
                s.insert(by_base[members[slot]][k]);
            }
            base_sets.push(s);
        }
    }
    let xes = EventStructure::with_inherited_conflicts(names, covering, &base_sets)?;
    let pol = red.iter().map(|&e| g.pol(e)).collect();
    Ok(ExpandedGame { pes: PolarizedES::new(xes, pol)?, base: g.clone(), red, eps, lookup })
}

/// `(expn(E), red, Inst)` as an A-strategy in `E`.
pub fn red_strategy(g: &AGame) -> Result<AStrategy> {
    let x = expand_game(g)?;
    let inst = (0..x.len()).map(|i| x.inst(i).to_string()).collect();
    AStrategy::new(x.pes.clone(), g.clone(), x.red.clone(), inst)
}

/// The local instantiation `ε_s: [σ(s)] → |A|`, read off the preimages of
/// `[σ(s)]` inside `[s]`.
pub fn local_env(ast: &AStrategy, s: usize) -> Result<Env> {
    let e = ast.sigma[s];
    let below = ast.es().down(s);
    let mut env = Env::new();
    for d in ast.game.es().down(e).ones() {
        let pre: Vec<usize> = below.ones().filter(|&t| ast.sigma[t] == d).collect();
        match pre.as_slice() {
            [t] => {
                env.insert(d, ast.inst[*t].clone());
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "{} preimages of {} below {}",
                    pre.len(),
                    ast.game.es().name(d),
                    ast.es().name(s)
                )))
            }
        }
    }
    Ok(env)
}

/// `θ(σ, inst)`: the plain strategy `s ↦ (σ(s), ε_s)` into the expansion.
pub fn theta_into(ast: &AStrategy, x: &ExpandedGame) -> Result<Strategy> {
    let mut sigma = Vec::with_capacity(ast.s.len());
    for s in 0..ast.s.len() {
        let env = local_env(ast, s)?;
        let i = x.find(ast.sigma[s], &env).ok_or_else(|| {
            Error::Precondition(format!("no expanded event for {}", ExpandedGame::event_name(&ast.game, ast.sigma[s], &env)))
        })?;
        sigma.push(i);
    }
    Strategy::new(ast.s.clone(), x.pes.clone(), sigma)
}

pub fn theta(ast: &AStrategy) -> Result<(ExpandedGame, Strategy)> {
    let x = expand_game(&ast.game)?;
    let st = theta_into(ast, &x)?;
    Ok((x, st))
}

/// `reduc(σ') = (red ∘ σ', Inst ∘ σ')`.
pub fn reduc(st: &Strategy, x: &ExpandedGame) -> Result<AStrategy> {
    if st.game.len() != x.len() {
        return Err(Error::Precondition("strategy is not into this expansion".into()));
    }
    let sigma = st.sigma.iter().map(|&i| x.red[i]).collect();
    let inst = st.sigma.iter().map(|&i| x.inst(i).to_string()).collect();
    AStrategy::new(st.s.clone(), x.base.clone(), sigma, inst)
}

/// The isomorphism `expn(E ⅋ F) ≅ expn(E) || expn(F)`, as two mutually
/// inverse index maps.
#[derive(Debug, Clone)]
pub struct Distribution {
    /// `expn_{A||B}(E ⅋ F)`.
    pub joint: ExpandedGame,
    pub left: ExpandedGame,
    pub right: ExpandedGame,
    /// `expn_A(E) || expn_B(F)`.
    pub split: PolarizedES,
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

impl Distribution {
    /// `Inst` on the split side: the tagged value of the side's expansion.
    pub fn split_inst(&self, i: usize) -> String {
        let n = self.left.len();
        if i < n {
            tag(Side::Left, self.left.inst(i))
        } else {
            tag(Side::Right, self.right.inst(i - n))
        }
    }
}

pub fn distribute_expansion(g: &AGame, h: &AGame) -> Result<Distribution> {
    let joint = expand_game(&AGame::par(g, h))?;
    let left = expand_game(g)?;
    let right = expand_game(h)?;
    let split = PolarizedES::par(&left.pes, &right.pes);
    let mut forward = vec![usize::MAX; joint.len()];
    let mut backward = vec![usize::MAX; joint.len()];
    if split.len() != joint.len() {
        return Err(Error::Invalid("expansions differ in size".into()));
    }
    let untag_idx = |es: &EventStructure, e: usize| -> (Side, String) {
        let (s, n) = untag(es.name(e)).expect("tagged event");
        (s, n.to_string())
    };
    for i in 0..joint.len() {
        let (side, ename) = untag_idx(joint.base.es(), joint.red[i]);
        let (part, offset) = match side {
            Side::Left => (&left, 0),
            Side::Right => (&right, left.len()),
        };
        let e = part.base.es().require(&ename)?;
        let mut env = Env::new();
        for (&k, v) in &joint.eps[i] {
            let (_, kname) = untag_idx(joint.base.es(), k);
            let value = untag(v).expect("tagged value").1.to_string();
            env.insert(part.base.es().require(&kname)?, value);
        }
        let j = part.find(e, &env).ok_or_else(|| Error::Invalid(format!("no image for {}", joint.es().name(i))))? + offset;
        forward[i] = j;
        backward[j] = i;
    }
    Ok(Distribution { joint, left, right, split, forward, backward })
}

/// Transports a strategy along an index bijection between two games.
pub fn transport(st: &Strategy, target: &PolarizedES, map: &[usize]) -> Result<Strategy> {
    Strategy::new(st.s.clone(), target.clone(), st.sigma.iter().map(|&e| map[e]).collect())
}

/// Events of `es` seen as a set of names, for comparisons across indexings.
pub fn names_of(es: &EventStructure, x: &EventSet) -> Vec<String> {
    es.names_of(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, VariableSet};
    use crate::game::Polarity;
    use crate::report::Rule;

    fn game(names: &[&str], cov: &[(&str, &str)], pol: &[Polarity], values: &[&str]) -> AGame {
        let es = EventStructure::new(names, cov, &[]).unwrap();
        AGame::new(
            PolarizedES::new(es, pol.to_vec()).unwrap(),
            Algebra::set("s", values),
            VariableSet::from_pairs(&[("x", "s")]).unwrap(),
            names.iter().map(|_| "x".to_string()).collect(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn single_event_two_values() {
        let g = game(&["e"], &[], &[Polarity::Minus], &["a", "b"]);
        let x = expand_game(&g).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.es().names(), &["e@[e=a]".to_string(), "e@[e=b]".to_string()]);
        assert!(!x.es().is_consistent(&x.es().set_of([0, 1])));
        assert!(x.es().validate().is_empty());
        let r = red_strategy(&g).unwrap();
        assert!(r.check().is_empty());
    }

    #[test]
    fn chains() {
        let g1 = game(&["e1", "e2"], &[("e1", "e2")], &[Polarity::Minus, Polarity::Plus], &["a"]);
        let x1 = expand_game(&g1).unwrap();
        assert_eq!(x1.len(), 2);
        assert!(x1.es().leq(0, 1));

        let g2 = game(&["e1", "e2"], &[("e1", "e2")], &[Polarity::Minus, Polarity::Plus], &["a", "b"]);
        let x2 = expand_game(&g2).unwrap();
        assert_eq!(x2.len(), 6);
        assert_eq!(expansion_size(&g2), 6);
        assert_eq!(x2.red.iter().filter(|&&e| e == 1).count(), 4);
        assert!(x2.es().validate().is_empty(), "{}", x2.es().validate());
        let top = x2.es().index_of("e2@[e1=a,e2=b]").unwrap();
        let bottom = x2.es().index_of("e1@[e1=a]").unwrap();
        let other = x2.es().index_of("e1@[e1=b]").unwrap();
        assert!(x2.es().immediate(bottom, top));
        assert!(!x2.es().is_consistent(&x2.es().set_of([other, top])));
        assert!(red_strategy(&g2).unwrap().check().is_empty());
    }

    #[test]
    fn empty_sort_is_rejected() {
        let g = game(&["e"], &[], &[Polarity::Minus], &[]);
        assert!(matches!(expand_game(&g), Err(Error::EmptySort(_))));
        let empty = AGame::empty(Algebra::empty());
        assert!(red_strategy(&empty).unwrap().s.is_empty());
    }

    #[test]
    fn theta_and_reduc() {
        let g = game(&["e"], &[], &[Polarity::Minus], &["a", "b"]);
        let r = red_strategy(&g).unwrap();
        let (x, st) = theta(&r).unwrap();
        assert_eq!(st.sigma, (0..x.len()).collect::<Vec<_>>());
        assert!(st.check().is_empty());
        assert_eq!(reduc(&st, &x).unwrap(), r);

        let g2 = game(&["e1", "e2"], &[("e1", "e2")], &[Polarity::Minus, Polarity::Plus], &["a", "b"]);
        let chain = AStrategy::new(
            PolarizedES::new(
                EventStructure::new(
                    &["sa", "sb", "ta", "tb"],
                    &[("sa", "ta"), ("sb", "tb")],
                    &[vec!["sa", "sb"], vec!["sa", "tb"], vec!["sb", "ta"], vec!["ta", "tb"]],
                )
                .unwrap(),
                vec![Polarity::Minus, Polarity::Minus, Polarity::Plus, Polarity::Plus],
            )
            .unwrap(),
            g2,
            vec![0, 0, 1, 1],
            vec!["a".into(), "b".into(), "b".into(), "a".into()],
        )
        .unwrap();
        assert!(chain.check().is_empty(), "{}", chain.check());
        let env = local_env(&chain, 2).unwrap();
        assert_eq!(env.get(&0).map(String::as_str), Some("a"));
        assert_eq!(env.get(&1).map(String::as_str), Some("b"));
        let (x, st) = theta(&chain).unwrap();
        assert!(st.check().is_empty(), "{}", st.check());
        assert_eq!(x.es().name(st.sigma[2]), "e2@[e1=a,e2=b]");
        assert_eq!(reduc(&st, &x).unwrap(), chain);
    }

    #[test]
    fn expansion_commutes_with_dual() {
        let g = game(&["e1", "e2"], &[("e1", "e2")], &[Polarity::Minus, Polarity::Plus], &["a", "b"]);
        let a = expand_game(&g.dual()).unwrap();
        let b = expand_game(&g).unwrap();
        assert_eq!(a.pes, b.pes.dual());
    }

    #[test]
    fn distribution_small() {
        let g = game(&["e"], &[], &[Polarity::Minus], &["a"]);
        let h = game(&["f"], &[], &[Polarity::Plus], &["b"]);
        let d = distribute_expansion(&g, &h).unwrap();
        assert_eq!(d.joint.len(), 2);
        for i in 0..2 {
            assert_eq!(d.backward[d.forward[i]], i);
            assert_eq!(d.joint.inst(i), d.split_inst(d.forward[i]));
            assert_eq!(d.joint.pes.pol(i), d.split.pol(d.forward[i]));
        }
        let empty = AGame::empty(Algebra::empty());
        assert!(distribute_expansion(&empty, &empty).unwrap().joint.is_empty());
        assert!(!Rule::NotReceptive.to_string().is_empty());
    }
}
