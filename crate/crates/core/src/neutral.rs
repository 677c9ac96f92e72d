//! Games with neutral events `N||E`: neutral moves sit in parallel with an
//! ordinary A-game and carry polarity 0.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::es::{EventSet, EventStructure};
use crate::expansion::{expand_game, reduc, theta_into, transport, ExpandedGame};
use crate::game::{AGame, Polarity, PolarizedES};
use crate::report::{Rule, ValidationReport};
use crate::strategy::{AStrategy, Strategy};
use crate::tag::{tag, Side};

/// An A-game with neutral events. `game` is the combined structure, with
/// the original event names; `neutral` marks the events of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeutralGame {
    pub game: AGame,
    pub neutral: EventSet,
}

impl NeutralGame {
    /// `N||E` from its parts. Event names of the parts must be disjoint and
    /// the variables of `N` must be declared in `e_part`'s variable set.
    pub fn from_parts(n_part: &EventStructure, n_var: &[String], e_part: &AGame) -> Result<Self> {
        if n_var.len() != n_part.len() {
            return Err(Error::Invalid(format!("{} variables for {} neutral events", n_var.len(), n_part.len())));
        }
        let joint = EventStructure::par(n_part, e_part.es());
        let names: Vec<String> = n_part.names().iter().chain(e_part.es().names()).cloned().collect();
        let es = EventStructure::from_indexed(names, joint.covering().to_vec(), joint.min_inconsistent().to_vec())?;
        let pol = std::iter::repeat_n(Polarity::Neutral, n_part.len()).chain(e_part.pes.pol.iter().copied()).collect();
        let var = n_var.iter().chain(&e_part.var).cloned().collect();
        let game = AGame::new(
            PolarizedES::new(es, pol)?,
            e_part.algebra.clone(),
            e_part.vars.clone(),
            var,
            e_part.winning.clone(),
        )?;
        let mut neutral = FixedBitSet::with_capacity(game.len());
        neutral.insert_range(..n_part.len());
        Ok(Self { game, neutral })
    }

    /// Reads the neutral part off the polarity-0 events of a game.
    pub fn from_game(game: AGame) -> Self {
        let neutral = game.es().set_of((0..game.len()).filter(|&e| game.pol(e) == Polarity::Neutral));
        Self { game, neutral }
    }

    fn part(&self, neutral: bool) -> (AGame, Vec<usize>) {
        let keep = self
            .game
            .es()
            .set_of((0..self.game.len()).filter(|&e| self.neutral.contains(e) == neutral));
        self.game.restrict(&keep)
    }

    pub fn n_part(&self) -> (AGame, Vec<usize>) {
        let (mut g, old) = self.part(true);
        g.winning = None;
        (g, old)
    }

    pub fn e_part(&self) -> (AGame, Vec<usize>) {
        self.part(false)
    }

    /// Structural checks that the game really is `N||E`, followed by the
    /// A-game axioms on the whole (hence no-overlap across the parts) and
    /// on `E` alone.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let es = self.game.es();
        for e in 0..self.game.len() {
            let neutral = self.neutral.contains(e);
            if neutral != (self.game.pol(e) == Polarity::Neutral) {
                report.push(Rule::NeutralPart, format!("{} has polarity {} on the wrong side", es.name(e), self.game.pol(e)));
            }
        }
        for &(a, b) in es.covering() {
            if self.neutral.contains(a) != self.neutral.contains(b) {
                report.push(Rule::NeutralPart, format!("causal link {} → {} crosses the parts", es.name(a), es.name(b)));
            }
        }
        for m in es.min_inconsistent() {
            let n = m.intersection(&self.neutral).count();
            if n != 0 && n != m.count_ones(..) {
                report.push(Rule::NeutralPart, format!("conflict {} crosses the parts", es.fmt_set(m)));
            }
        }
        report.extend(self.game.validate());
        report.extend(self.e_part().0.validate());
        report
    }
}

/// Checks an A-strategy on a neutral game, then re-checks that its
/// restriction to ±-events is an A-strategy on `E`.
pub fn check_neutral_astrategy(ng: &NeutralGame, ast: &AStrategy) -> ValidationReport {
    let mut report = ast.check();
    if !report.is_empty() {
        return report;
    }
    let (e_game, old) = ng.e_part();
    let keep = ast.es().set_of((0..ast.s.len()).filter(|&s| ast.s.pol(s) != Polarity::Neutral));
    let (s, s_old) = ast.s.restrict(&keep);
    let sigma: Vec<usize> = s_old
        .iter()
        .map(|&t| old.iter().position(|&o| o == ast.sigma[t]).expect("±-event maps into E"))
        .collect();
    let inst = s_old.iter().map(|&t| ast.inst[t].clone()).collect();
    match AStrategy::new(s, e_game, sigma, inst) {
        Ok(restricted) => {
            for v in restricted.check().violations {
                report.push(Rule::NeutralRestriction, format!("{}: {}", v.rule, v.detail));
            }
        }
        Err(err) => report.push(Rule::NeutralRestriction, err.to_string()),
    }
    report
}

/// `expn(N||E)` with its identification with `expn(N)||expn(E)`.
#[derive(Debug, Clone)]
pub struct NeutralExpansion {
    pub joint: ExpandedGame,
    /// `expn(N) || expn(E)`, tagged.
    pub split: PolarizedES,
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

pub fn neutral_expansion(ng: &NeutralGame) -> Result<NeutralExpansion> {
    let joint = expand_game(&ng.game)?;
    let xn = expand_game(&ng.n_part().0)?;
    let xe = expand_game(&ng.e_part().0)?;
    let split = PolarizedES::par(&xn.pes, &xe.pes);
    let mut forward = Vec::with_capacity(joint.len());
    for i in 0..joint.len() {
        let side = if ng.neutral.contains(joint.red[i]) { Side::Left } else { Side::Right };
        forward.push(split.es.require(&tag(side, joint.es().name(i)))?);
    }
    let mut backward = vec![0; forward.len()];
    for (i, &j) in forward.iter().enumerate() {
        backward[j] = i;
    }
    if split.len() != joint.len() {
        return Err(Error::Invalid("expansions of the parts differ in size".into()));
    }
    Ok(NeutralExpansion { joint, split, forward, backward })
}

/// `θ` for neutral games, landing in `expn(N)||expn(E)`.
pub fn neutral_theta(ng: &NeutralGame, ast: &AStrategy) -> Result<(NeutralExpansion, Strategy)> {
    let x = neutral_expansion(ng)?;
    let st = transport(&theta_into(ast, &x.joint)?, &x.split, &x.forward)?;
    Ok((x, st))
}

/// Inverse of [`neutral_theta`].
pub fn neutral_reduc(st: &Strategy, x: &NeutralExpansion) -> Result<AStrategy> {
    reduc(&transport(st, &x.joint.pes, &x.backward)?, &x.joint)
}
