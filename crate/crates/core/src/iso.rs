//! Isomorphism of strategies over the same game: a bijection of strategy
//! events commuting with the maps to the game (and with `inst` when present)
//! that preserves causality and consistency both ways.

use std::collections::{BTreeMap, HashSet};

use crate::es::EventStructure;
use crate::game::{Polarity, PolarizedES};
use crate::strategy::{AStrategy, Strategy};

struct Side<'a> {
    s: &'a PolarizedES,
    image: Vec<usize>,
    inst: Option<&'a [String]>,
}

impl<'a> Side<'a> {
    fn key(&self, u: usize) -> (usize, usize, usize, Option<&'a str>) {
        let es = &self.s.es;
        (self.image[u], es.down(u).count_ones(..), es.up(u).count_ones(..), self.inst.map(|i| i[u].as_str()))
    }
}

/// Game index translation by event name, when both games are the same.
fn game_map(a: &PolarizedES, b: &PolarizedES) -> Option<Vec<usize>> {
    if !a.same_as(b) {
        return None;
    }
    (0..a.len()).map(|e| b.es.index_of(a.es.name(e))).collect()
}

pub fn find_isomorphism(a: &Strategy, b: &Strategy) -> Option<Vec<usize>> {
    let gmap = game_map(&a.game, &b.game)?;
    search(
        &Side { s: &a.s, image: a.sigma.iter().map(|&e| gmap[e]).collect(), inst: None },
        &Side { s: &b.s, image: b.sigma.clone(), inst: None },
    )
}

pub fn find_a_isomorphism(a: &AStrategy, b: &AStrategy) -> Option<Vec<usize>> {
    if a.game.algebra != b.game.algebra || a.game.var.len() != b.game.var.len() {
        return None;
    }
    let gmap = game_map(&a.game.pes, &b.game.pes)?;
    if (0..gmap.len()).any(|e| a.game.var[e] != b.game.var[gmap[e]]) {
        return None;
    }
    search(
        &Side { s: &a.s, image: a.sigma.iter().map(|&e| gmap[e]).collect(), inst: Some(&a.inst) },
        &Side { s: &b.s, image: b.sigma.clone(), inst: Some(&b.inst) },
    )
}

pub fn isomorphic(a: &Strategy, b: &Strategy) -> bool {
    find_isomorphism(a, b).is_some()
}

pub fn a_isomorphic(a: &AStrategy, b: &AStrategy) -> bool {
    find_a_isomorphism(a, b).is_some()
}

fn search(a: &Side, b: &Side) -> Option<Vec<usize>> {
    let n = a.s.len();
    if n != b.s.len() {
        return None;
    }
    if profile(a) != profile(b) {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| a.s.es.down(u).count_ones(..));
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| a.key(u) == b.key(v) && a.s.pol[u] == b.s.pol[v]).collect())
        .collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(a, b, &order, 0, &candidates, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

type Key<'a> = ((usize, usize, usize, Option<&'a str>), Polarity);

fn profile<'a>(side: &Side<'a>) -> BTreeMap<Key<'a>, usize> {
    let mut m = BTreeMap::new();
    for u in 0..side.s.len() {
        *m.entry((side.key(u), side.s.pol[u])).or_default() += 1;
    }
    m
}

fn extend(
    a: &Side,
    b: &Side,
    order: &[usize],
    depth: usize,
    candidates: &[Vec<usize>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return same_conflicts(&a.s.es, &b.s.es, map);
    }
    let u = order[depth];
    let (ea, eb) = (&a.s.es, &b.s.es);
    for &v in &candidates[u] {
        if used[v] {
            continue;
        }
        let fits = order[..depth].iter().all(|&w| {
            let fw = map[w];
            ea.leq(w, u) == eb.leq(fw, v)
                && ea.leq(u, w) == eb.leq(v, fw)
                && ea.is_consistent(&ea.set_of([u, w])) == eb.is_consistent(&eb.set_of([v, fw]))
        });
        if !fits {
            continue;
        }
        map[u] = v;
        used[v] = true;
        if extend(a, b, order, depth + 1, candidates, map, used) {
            return true;
        }
        used[v] = false;
        map[u] = usize::MAX;
    }
    false
}

fn same_conflicts(a: &EventStructure, b: &EventStructure, map: &[usize]) -> bool {
    let mine: HashSet<Vec<usize>> = a
        .min_inconsistent()
        .iter()
        .map(|m| {
            let mut v: Vec<usize> = m.ones().map(|e| map[e]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let theirs: HashSet<Vec<usize>> = b.min_inconsistent().iter().map(|m| m.ones().collect()).collect();
    mine == theirs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Polarity::{Minus, Plus};
    use crate::game::PolarizedES;

    fn chain(names: [&str; 2]) -> PolarizedES {
        let es = EventStructure::new(&names, &[(names[0], names[1])], &[]).unwrap();
        PolarizedES::new(es, vec![Minus, Plus]).unwrap()
    }

    #[test]
    fn renamed_strategy_is_isomorphic() {
        let game = chain(["a", "b"]);
        let id = Strategy::identity(&game);
        let renamed = Strategy::new(chain(["x", "y"]), game.clone(), vec![0, 1]).unwrap();
        assert_eq!(find_isomorphism(&id, &renamed), Some(vec![0, 1]));
    }

    #[test]
    fn different_order_is_not_isomorphic() {
        let es = EventStructure::new(&["a", "b"], &[], &[]).unwrap();
        let game = PolarizedES::new(es.clone(), vec![Minus, Plus]).unwrap();
        let id = Strategy::identity(&game);
        let other = Strategy::new(chain(["a", "b"]), game, vec![0, 1]).unwrap();
        assert!(!isomorphic(&id, &other));
    }
}
