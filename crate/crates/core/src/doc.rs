//! JSON documents for games and strategies. Documents are keyed by event
//! name; an algebra or game may be given inline or as a path relative to
//! the referring document.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Variable, VariableSet};
use crate::error::{Error, Result};
use crate::es::EventStructure;
use crate::game::{AGame, Polarity, PolarizedES};
use crate::logic::Formula;
use crate::strategy::{AStrategy, Strategy};

/// Something embedded in a document or referenced by path.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

impl<T: DeserializeOwned + Clone> Ref<T> {
    fn resolve(&self, base: Option<&Path>) -> Result<(T, Option<PathBuf>)> {
        match self {
            Ref::Inline(t) => Ok((t.clone(), base.map(Path::to_path_buf))),
            Ref::Path(p) => {
                let path = match base {
                    Some(dir) => dir.join(p),
                    None => PathBuf::from(p),
                };
                let t = read_json(&path)?;
                Ok((t, path.parent().map(Path::to_path_buf)))
            }
        }
    }
}

/// Reads and parses a JSON file; parse errors carry line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// Pretty JSON with object keys sorted.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("documents serialize");
    serde_json::to_string_pretty(&v).expect("values serialize")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDoc {
    pub es: EventStructure,
    pub pol: BTreeMap<String, Polarity>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub var: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vars: Vec<Variable>,
    #[serde(default)]
    pub winning: Option<Formula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<Ref<Algebra>>,
    /// Instantiation of events, emitted for expansions only.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inst: BTreeMap<String, String>,
}

/// A game read from a document: an A-game when it names variables, a plain
/// polarized structure otherwise.
#[derive(Debug, Clone)]
pub enum LoadedGame {
    Plain(PolarizedES),
    Typed(AGame),
}

impl LoadedGame {
    pub fn pes(&self) -> &PolarizedES {
        match self {
            LoadedGame::Plain(p) => p,
            LoadedGame::Typed(g) => &g.pes,
        }
    }

    pub fn agame(&self) -> Result<&AGame> {
        match self {
            LoadedGame::Typed(g) => Ok(g),
            LoadedGame::Plain(_) => Err(Error::Invalid("expected an A-game with variables".into())),
        }
    }
}

fn per_event<T: Clone>(es: &EventStructure, map: &BTreeMap<String, T>, what: &str) -> Result<Vec<T>> {
    for name in map.keys() {
        es.require(name)?;
    }
    es.names()
        .iter()
        .map(|n| map.get(n).cloned().ok_or_else(|| Error::Invalid(format!("no {what} for event {n}"))))
        .collect()
}

impl GameDoc {
    pub fn load(&self, base: Option<&Path>) -> Result<LoadedGame> {
        let pol = per_event(&self.es, &self.pol, "polarity")?;
        let pes = PolarizedES::new(self.es.clone(), pol)?;
        if self.var.is_empty() && self.vars.is_empty() && self.algebra.is_none() && self.winning.is_none() {
            return Ok(LoadedGame::Plain(pes));
        }
        let algebra = match &self.algebra {
            Some(r) => r.resolve(base)?.0,
            None => Algebra::empty(),
        };
        let var = per_event(&self.es, &self.var, "variable")?;
        let vars = VariableSet::new(self.vars.clone())?;
        Ok(LoadedGame::Typed(AGame::new(pes, algebra, vars, var, self.winning.clone())?))
    }

    pub fn read(path: &Path) -> Result<LoadedGame> {
        let doc: GameDoc = read_json(path)?;
        doc.load(path.parent())
    }

    pub fn from_pes(pes: &PolarizedES) -> Self {
        let names = pes.es.names();
        Self {
            es: pes.es.clone(),
            pol: names.iter().cloned().zip(pes.pol.iter().copied()).collect(),
            var: BTreeMap::new(),
            vars: Vec::new(),
            winning: None,
            algebra: None,
            inst: BTreeMap::new(),
        }
    }

    pub fn from_agame(g: &AGame) -> Self {
        let mut doc = Self::from_pes(&g.pes);
        doc.var = g.es().names().iter().cloned().zip(g.var.iter().cloned()).collect();
        doc.vars = g.vars.iter().cloned().collect();
        doc.winning = g.winning.clone();
        doc.algebra = Some(Ref::Inline(g.algebra.clone()));
        doc
    }

    pub fn from_loaded(g: &LoadedGame) -> Self {
        match g {
            LoadedGame::Plain(p) => Self::from_pes(p),
            LoadedGame::Typed(g) => Self::from_agame(g),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub s_es: EventStructure,
    pub pol: BTreeMap<String, Polarity>,
    pub sigma: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inst: BTreeMap<String, String>,
    pub game: Ref<GameDoc>,
}

#[derive(Debug, Clone)]
pub enum LoadedStrategy {
    Plain(Strategy),
    Typed(AStrategy),
}

impl LoadedStrategy {
    pub fn plain(&self) -> Strategy {
        match self {
            LoadedStrategy::Plain(s) => s.clone(),
            LoadedStrategy::Typed(a) => a.plain(),
        }
    }

    pub fn typed(&self) -> Result<&AStrategy> {
        match self {
            LoadedStrategy::Typed(a) => Ok(a),
            LoadedStrategy::Plain(_) => Err(Error::Invalid("expected an A-strategy with instantiation".into())),
        }
    }
}

impl StrategyDoc {
    pub fn load(&self, base: Option<&Path>) -> Result<LoadedStrategy> {
        let (game_doc, game_base) = self.game.resolve(base)?;
        let game = game_doc.load(game_base.as_deref())?;
        let pol = per_event(&self.s_es, &self.pol, "polarity")?;
        let s = PolarizedES::new(self.s_es.clone(), pol)?;
        let sigma = per_event(&self.s_es, &self.sigma, "sigma image")?
            .iter()
            .map(|e| game.pes().es.require(e))
            .collect::<Result<Vec<usize>>>()?;
        match game {
            LoadedGame::Plain(pes) => {
                if !self.inst.is_empty() {
                    return Err(Error::Invalid("inst given for a game without variables".into()));
                }
                Ok(LoadedStrategy::Plain(Strategy::new(s, pes, sigma)?))
            }
            LoadedGame::Typed(g) => {
                let inst = per_event(&self.s_es, &self.inst, "instantiation")?;
                Ok(LoadedStrategy::Typed(AStrategy::new(s, g, sigma, inst)?))
            }
        }
    }

    pub fn read(path: &Path) -> Result<LoadedStrategy> {
        let doc: StrategyDoc = read_json(path)?;
        doc.load(path.parent())
    }

    pub fn from_strategy(st: &Strategy) -> Self {
        let names = st.s.es.names();
        Self {
            s_es: st.s.es.clone(),
            pol: names.iter().cloned().zip(st.s.pol.iter().copied()).collect(),
            sigma: names.iter().cloned().zip(st.sigma.iter().map(|&e| st.game.es.name(e).to_string())).collect(),
            inst: BTreeMap::new(),
            game: Ref::Inline(GameDoc::from_pes(&st.game)),
        }
    }

    pub fn from_astrategy(ast: &AStrategy) -> Self {
        let mut doc = Self::from_strategy(&ast.plain());
        doc.inst = ast.es().names().iter().cloned().zip(ast.inst.iter().cloned()).collect();
        doc.game = Ref::Inline(GameDoc::from_agame(&ast.game));
        doc
    }

    pub fn from_loaded(st: &LoadedStrategy) -> Self {
        match st {
            LoadedStrategy::Plain(s) => Self::from_strategy(s),
            LoadedStrategy::Typed(a) => Self::from_astrategy(a),
        }
    }
}
