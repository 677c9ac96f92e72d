use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use esgames::access::{check_a_lambda_strategy, check_lambda_strategy, validate_lambda_game, LeveledAGame, LeveledGame, LevelsDoc};
use esgames::compose::{a_compose, a_copycat, check_winning_stability, compose_classic, copycat};
use esgames::doc::{read_json, to_pretty, GameDoc, LoadedGame, LoadedStrategy, Ref, StrategyDoc};
use esgames::expansion::{expand_game, reduc, theta, transport};
use esgames::model_games::{self, GameKind, Instance, NamedStructure};
use esgames::neutral::{check_neutral_astrategy, NeutralGame};
use esgames::random::{induced_suite, stability_suite, DEFAULT_SEED};
use esgames::{Algebra, Error, EventStructure, ValidationReport};

#[derive(Parser)]
#[command(name = "esgames", version, about = "Games on event structures over relational algebras")]
struct Cli {
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a document against its axioms.
    Validate {
        #[command(subcommand)]
        what: ValidateCmd,
    },
    /// List the configurations of an event structure or game.
    Configs { file: PathBuf },
    /// The expansion of an A-game.
    Expand { game: PathBuf },
    /// The plain strategy on the expansion corresponding to an A-strategy.
    Theta { strategy: PathBuf },
    /// The A-strategy corresponding to a plain strategy on `expn(game)`.
    Reduc {
        strategy: PathBuf,
        #[arg(long)]
        game: PathBuf,
    },
    /// Copycat on a game.
    Copycat { game: PathBuf },
    /// Copycat on an A-game.
    ACopycat { game: PathBuf },
    /// Compose two plain strategies, first then second.
    Compose { first: PathBuf, second: PathBuf },
    /// Compose two A-strategies, first then second.
    ACompose { first: PathBuf, second: PathBuf },
    /// Evaluate the winning condition of an A-strategy.
    Winning { strategy: PathBuf },
    /// Generate a homomorphism or EF game between two structures.
    Gen {
        kind: Kind,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Decide a truncated hom or EF game by brute force.
    Oracle {
        kind: Kind,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Run a conjecture harness and print one JSON line per instance.
    Conjectures {
        which: Harness,
        /// `small` or a path to a suite document.
        #[arg(long, default_value = "small")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_events: usize,
        /// Search budget per game instance.
        #[arg(long, default_value_t = 1_000_000)]
        bound: usize,
    },
    /// Move between configurations of a strategy along its game.
    Lift {
        mode: LiftMode,
        strategy: PathBuf,
        /// Strategy events, comma separated.
        #[arg(long, default_value = "")]
        x: String,
        /// Game events, comma separated.
        #[arg(long, default_value = "")]
        y: String,
    },
}

#[derive(Subcommand)]
enum ValidateCmd {
    Es { file: PathBuf },
    Algebra { file: PathBuf },
    Game { file: PathBuf },
    Strategy { file: PathBuf },
    /// A game with neutral events, and optionally a strategy on it.
    Neutral {
        game: PathBuf,
        #[arg(long)]
        strategy: Option<PathBuf>,
    },
    /// A game with access levels, and optionally a strategy on it.
    Lambda {
        game: PathBuf,
        #[arg(long)]
        levels: PathBuf,
        #[arg(long)]
        strategy: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hom,
    Ef,
}

impl From<Kind> for GameKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Hom => GameKind::Hom,
            Kind::Ef => GameKind::Ef,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Harness {
    Stability,
    Induced,
    Games,
}

#[derive(Clone, Copy, ValueEnum)]
enum LiftMode {
    Extend,
    Restrict,
}

enum Failure {
    /// Malformed input or a failed precondition.
    Malformed(String),
    /// A well-formed input that breaks an axiom.
    Violations(ValidationReport),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Malformed(e.to_string())
    }
}

/// What a command produces: a document, or lines of JSON.
enum Output {
    Doc(Value),
    Lines(Vec<Value>, bool),
}

type Outcome = Result<Output, Failure>;

fn doc<T: serde::Serialize>(value: &T) -> Output {
    Output::Doc(serde_json::to_value(value).expect("documents serialize"))
}

fn report(r: ValidationReport) -> Outcome {
    if r.is_valid() {
        Ok(doc(&r))
    } else {
        Err(Failure::Violations(r))
    }
}

fn names(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn set_of(es: &EventStructure, list: &str) -> Result<esgames::EventSet, Error> {
    let mut set = es.empty_set();
    for n in names(list) {
        set.insert(es.require(n)?);
    }
    Ok(set)
}

fn load_structure(path: &Path) -> Result<Algebra, Error> {
    read_json(path)
}

fn validate(what: ValidateCmd) -> Outcome {
    match what {
        ValidateCmd::Es { file } => {
            let es: EventStructure = read_json(&file)?;
            report(es.validate())
        }
        ValidateCmd::Algebra { file } => report(load_structure(&file)?.validate()),
        ValidateCmd::Game { file } => match GameDoc::read(&file)? {
            LoadedGame::Plain(p) => report(p.validate()),
            LoadedGame::Typed(g) => report(g.validate()),
        },
        ValidateCmd::Strategy { file } => match StrategyDoc::read(&file)? {
            LoadedStrategy::Plain(s) => report(s.check()),
            LoadedStrategy::Typed(a) => report(a.check()),
        },
        ValidateCmd::Neutral { game, strategy } => {
            let ng = NeutralGame::from_game(GameDoc::read(&game)?.agame()?.clone());
            let mut r = ng.validate();
            if let Some(path) = strategy {
                let st = StrategyDoc::read(&path)?;
                r.extend(check_neutral_astrategy(&ng, st.typed()?));
            }
            report(r)
        }
        ValidateCmd::Lambda { game, levels, strategy } => {
            let g = GameDoc::read(&game)?;
            let levels: LevelsDoc = read_json(&levels)?;
            let (preorder, l) = levels.resolve(g.pes())?;
            let plain = LeveledGame::new(g.pes().clone(), preorder.clone(), l.clone())?;
            let mut r = validate_lambda_game(&plain);
            if let Some(path) = strategy {
                match StrategyDoc::read(&path)? {
                    LoadedStrategy::Plain(s) => r.extend(check_lambda_strategy(&s, &plain)),
                    LoadedStrategy::Typed(a) => {
                        let lg = LeveledAGame::new(g.agame()?.clone(), preorder, l)?;
                        r.extend(check_a_lambda_strategy(&a, &lg)?);
                    }
                }
            }
            report(r)
        }
    }
}

fn configs(file: &Path) -> Outcome {
    let es = match read_json::<EventStructure>(file) {
        Ok(es) => es,
        Err(first) => match GameDoc::read(file) {
            Ok(g) => g.pes().es.clone(),
            Err(_) => return Err(first.into()),
        },
    };
    let mut all: Vec<Vec<String>> = es.configurations().iter().map(|x| es.names_of(x)).collect();
    all.sort();
    Ok(doc(&json!({ "configurations": all })))
}

fn expand(game: &Path) -> Outcome {
    let g = GameDoc::read(game)?;
    let x = expand_game(g.agame()?)?;
    let mut out = GameDoc::from_pes(&x.pes);
    out.inst = (0..x.len()).map(|i| (x.es().name(i).to_string(), x.inst(i).to_string())).collect();
    Ok(doc(&out))
}

fn reduc_cmd(strategy: &Path, game: &Path) -> Outcome {
    let st = StrategyDoc::read(strategy)?.plain();
    let g = GameDoc::read(game)?;
    let x = expand_game(g.agame()?)?;
    if st.game.len() != x.len() {
        return Err(Failure::Malformed(format!("strategy game has {} events, expansion has {}", st.game.len(), x.len())));
    }
    let map = (0..st.game.len()).map(|e| x.es().require(st.game.es.name(e))).collect::<Result<Vec<_>, _>>()?;
    let ast = reduc(&transport(&st, &x.pes, &map)?, &x)?;
    Ok(doc(&StrategyDoc::from_astrategy(&ast)))
}

fn winning(strategy: &Path) -> Outcome {
    let st = StrategyDoc::read(strategy)?;
    let ast = st.typed()?;
    let w = ast.game.winning_or_true();
    let result = ast.is_winning(&w)?;
    let (witness, trace) = match &result.witness {
        Some(x) => (Some(ast.es().names_of(x)), Some(ast.valuation(x)?.trace(&w, ast.algebra(), &ast.game.vars))),
        None => (None, None),
    };
    Ok(doc(&json!({ "winning": result.winning, "witness": witness, "trace": trace })))
}

fn lift(mode: LiftMode, strategy: &Path, x: &str, y: &str) -> Outcome {
    let st = StrategyDoc::read(strategy)?.plain();
    let xs = set_of(&st.s.es, x)?;
    let ys = set_of(&st.game.es, y)?;
    let out = match mode {
        LiftMode::Extend => st.extend_along_negative(&xs, &ys)?,
        LiftMode::Restrict => st.restrict_along_positive(&xs, &ys)?,
    };
    Ok(doc(&json!({ "configuration": st.s.es.names_of(&out) })))
}

/// Suite documents for the harnesses that accept one.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GamesSuite {
    instances: Vec<GamesEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GamesEntry {
    kind: GameKind,
    a: String,
    b: String,
    k: usize,
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StabilitySuite {
    pairs: Vec<(Ref<StrategyDoc>, Ref<StrategyDoc>)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InducedSuite {
    strategies: Vec<Ref<StrategyDoc>>,
}

fn load_strategy_ref(r: &Ref<StrategyDoc>, base: Option<&Path>) -> Result<LoadedStrategy, Error> {
    match r {
        Ref::Inline(d) => d.load(base),
        Ref::Path(p) => StrategyDoc::read(&base.map(|b| b.join(p)).unwrap_or_else(|| PathBuf::from(p))),
    }
}

fn with_instance(id: usize, value: impl serde::Serialize) -> Value {
    let mut v = serde_json::to_value(value).expect("records serialize");
    if let Value::Object(m) = &mut v {
        m.insert("instance".into(), json!(id));
    }
    v
}

fn conjectures(which: Harness, suite: &str, seed: u64, max_events: usize, bound: usize) -> Outcome {
    let path = (suite != "small").then(|| PathBuf::from(suite));
    let base = path.as_deref().and_then(Path::parent);
    match which {
        Harness::Games => {
            let instances = match &path {
                None => model_games::default_suite(),
                Some(p) => {
                    let doc: GamesSuite = read_json(p)?;
                    let named = |s: &str| -> Result<NamedStructure, Error> {
                        let algebra = load_structure(&base.map(|b| b.join(s)).unwrap_or_else(|| PathBuf::from(s)))?;
                        Ok(NamedStructure { name: s.to_string(), algebra })
                    };
                    doc.instances
                        .iter()
                        .map(|e| Ok(Instance { kind: e.kind, a: named(&e.a)?, b: named(&e.b)?, k: e.k, n: e.n }))
                        .collect::<Result<Vec<_>, Error>>()?
                }
            };
            let records = model_games::check_game_conjectures(&instances, bound)?;
            let all_agree = records.iter().all(|r| r.agree);
            Ok(Output::Lines(records.iter().enumerate().map(|(i, r)| with_instance(i, r)).collect(), all_agree))
        }
        Harness::Stability => {
            let pairs = match &path {
                None => stability_suite(seed, max_events)?,
                Some(p) => {
                    let doc: StabilitySuite = read_json(p)?;
                    doc.pairs
                        .iter()
                        .map(|(a, b)| {
                            Ok((load_strategy_ref(a, base)?.typed()?.clone(), load_strategy_ref(b, base)?.typed()?.clone()))
                        })
                        .collect::<Result<Vec<_>, Error>>()?
                }
            };
            let records = check_winning_stability(&pairs)?;
            Ok(Output::Lines(records.iter().map(|r| serde_json::to_value(r).expect("records serialize")).collect(), true))
        }
        Harness::Induced => {
            let strategies = match &path {
                None => induced_suite(seed, max_events)?,
                Some(p) => {
                    let doc: InducedSuite = read_json(p)?;
                    doc.strategies
                        .iter()
                        .map(|s| Ok(load_strategy_ref(s, base)?.typed()?.clone()))
                        .collect::<Result<Vec<_>, Error>>()?
                }
            };
            let mut lines = Vec::new();
            for (i, ast) in strategies.iter().enumerate() {
                let r = ast.check_induced_conjecture()?;
                let verdict = if r.counterexamples.is_empty() { "agrees" } else { "counterexample" };
                let mut v = with_instance(i, &r);
                v["verdict"] = json!(verdict);
                lines.push(v);
            }
            Ok(Output::Lines(lines, true))
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.cmd {
        Cmd::Validate { what } => validate(what),
        Cmd::Configs { file } => configs(&file),
        Cmd::Expand { game } => expand(&game),
        Cmd::Theta { strategy } => {
            let st = StrategyDoc::read(&strategy)?;
            let (x, plain) = theta(st.typed()?)?;
            let mut out = StrategyDoc::from_strategy(&plain);
            if let Ref::Inline(g) = &mut out.game {
                g.inst = (0..x.len()).map(|i| (x.es().name(i).to_string(), x.inst(i).to_string())).collect();
            }
            Ok(doc(&out))
        }
        Cmd::Reduc { strategy, game } => reduc_cmd(&strategy, &game),
        Cmd::Copycat { game } => Ok(doc(&StrategyDoc::from_strategy(&copycat(GameDoc::read(&game)?.pes()).strategy))),
        Cmd::ACopycat { game } => {
            let g = GameDoc::read(&game)?;
            Ok(doc(&StrategyDoc::from_astrategy(&a_copycat(g.agame()?)?)))
        }
        Cmd::Compose { first, second } => {
            let (s, t) = (StrategyDoc::read(&first)?.plain(), StrategyDoc::read(&second)?.plain());
            Ok(doc(&StrategyDoc::from_strategy(&compose_classic(&s, &t)?)))
        }
        Cmd::ACompose { first, second } => {
            let (s, t) = (StrategyDoc::read(&first)?, StrategyDoc::read(&second)?);
            Ok(doc(&StrategyDoc::from_astrategy(&a_compose(s.typed()?, t.typed()?)?)))
        }
        Cmd::Winning { strategy } => winning(&strategy),
        Cmd::Gen { kind, a, b, k, n } => {
            let g = model_games::gen_game(kind.into(), &load_structure(&a)?, &load_structure(&b)?, k, n)?;
            Ok(doc(&GameDoc::from_agame(&g)))
        }
        Cmd::Oracle { kind, a, b, k, n } => {
            let kind: GameKind = kind.into();
            let wins = model_games::oracle_decide(kind, &load_structure(&a)?, &load_structure(&b)?, k, n)?;
            Ok(doc(&json!({ "kind": kind, "k": k, "n": n, "duplicator_wins": wins })))
        }
        Cmd::Conjectures { which, suite, seed, max_events, bound } => conjectures(which, &suite, seed, max_events, bound),
        Cmd::Lift { mode, strategy, x, y } => lift(mode, &strategy, &x, &y),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let (text, code) = match run(cli) {
        Ok(Output::Doc(v)) => (to_pretty(&v) + "\n", 0),
        Ok(Output::Lines(lines, ok)) => {
            let text: String = lines.iter().map(|v| serde_json::to_string(v).expect("values serialize") + "\n").collect();
            (text, if ok { 0 } else { 1 })
        }
        Err(Failure::Violations(r)) => (to_pretty(&r) + "\n", 1),
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&out, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
