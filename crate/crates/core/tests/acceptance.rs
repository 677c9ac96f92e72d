//! Acceptance run: one line per criterion, then a single assertion over all
//! of them. Lines go straight to stdout so they show without `--nocapture`.

use std::io::Write;
use std::time::{Duration, Instant};

use esgames::access::{
    check_a_lambda_strategy, check_lambda_independence, check_lambda_strategy, independence_instances, lambda_identity,
    LeveledAGame, LeveledGame,
};
use esgames::compose::{a_compose, a_copycat, check_winning_stability, compose_classic, copycat, Verdict};
use esgames::expansion::{distribute_expansion, red_strategy, reduc, theta};
use esgames::iso::{a_isomorphic, isomorphic};
use esgames::model_games::{
    check_game_conjectures, default_suite, gen_ef_game, oracle_decide, search_deterministic_winning, sets_up_to,
    GameKind, SearchOutcome,
};
use esgames::random::{diamond, induced_suite, stability_suite, GameParams, Generator, DEFAULT_SEED};
use esgames::{AGame, Formula, PolarizedES, Side};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const BOUND: usize = 1_000_000;

fn params(max_events: usize) -> GameParams {
    GameParams { max_events, max_carrier: 2, max_sorts: 2, winning_depth: Some(2) }
}

fn within(elapsed: Duration, limit: u64, detail: String) -> Outcome {
    if elapsed <= Duration::from_secs(limit) {
        Ok(format!("{detail}, {:.1}s", elapsed.as_secs_f64()))
    } else {
        Err(format!("{detail}, took {:.1}s over the {limit}s limit", elapsed.as_secs_f64()))
    }
}

fn bijection_round_trip() -> Outcome {
    let start = Instant::now();
    let mut gen = Generator::new(101);
    let mut checked = 0;
    for _ in 0..250 {
        let g = gen.agame(&params(5));
        let ast = gen.astrategy(&g).map_err(|e| e.to_string())?;
        if !ast.check().is_valid() {
            continue;
        }
        let (x, st) = theta(&ast).map_err(|e| e.to_string())?;
        if reduc(&st, &x).map_err(|e| e.to_string())? != ast {
            return Err(format!("reduc(theta(σ)) differs from σ on\n{}", ast.es()));
        }
        let plain = gen.strategy(&x.pes);
        let back = theta(&reduc(&plain, &x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.1;
        if back != plain {
            return Err(format!("theta(reduc(τ)) differs from τ on\n{}", plain.s.es));
        }
        checked += 1;
    }
    if checked < 200 {
        return Err(format!("only {checked} valid A-strategies generated"));
    }
    within(start.elapsed(), 60, format!("{checked} A-strategies"))
}

fn red_strategies_are_valid() -> Outcome {
    let mut gen = Generator::new(101);
    for i in 0..250 {
        let g = gen.agame(&params(5));
        let red = red_strategy(&g).map_err(|e| e.to_string())?;
        let report = red.check();
        if !report.is_valid() {
            return Err(format!("game {i}: {report}"));
        }
        // keep the generator in step with the first criterion
        gen.astrategy(&g).map_err(|e| e.to_string())?;
    }
    Ok("250 games".into())
}

fn disjunction_over_projections() -> Outcome {
    let mut gen = Generator::new(103);
    let p = GameParams { max_events: 3, ..params(3) };
    let mut configs = 0;
    for i in 0..200 {
        let (e, f) = gen.agame_pair(&p);
        let par = AGame::par(&e, &f);
        let ast = gen.astrategy(&par).map_err(|e| e.to_string())?;
        let we = gen.formula(&e.algebra, &e.vars, 3);
        let wf = gen.formula(&f.algebra, &f.vars, 3);
        let joint = Formula::or(we.tagged(Side::Left), wf.tagged(Side::Right));
        let proj = ast.project_parallel().map_err(|e| e.to_string())?;
        for x in ast.es().configurations() {
            let (xl, xr) = proj.split(x);
            let lhs = ast.satisfies(x, &joint).map_err(|e| e.to_string())?;
            let rhs = proj.left.satisfies(&xl, &we).map_err(|e| e.to_string())?
                || proj.right.satisfies(&xr, &wf).map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("instance {i} at {}: joint {lhs}, sides {rhs}", ast.es().fmt_set(x)));
            }
            configs += 1;
        }
    }
    Ok(format!("200 instances, {configs} configurations"))
}

fn distribution() -> Outcome {
    let mut gen = Generator::new(104);
    let p = GameParams { max_events: 3, ..params(3) };
    for i in 0..100 {
        let (e, f) = gen.agame_pair(&p);
        let d = distribute_expansion(&e, &f).map_err(|e| e.to_string())?;
        let (j, s) = (d.joint.es(), &d.split.es);
        let fail = |what: &str| Err(format!("pair {i}: {what}"));
        if d.forward.len() != s.len() || d.backward.len() != j.len() {
            return fail("maps are not bijections");
        }
        for a in 0..j.len() {
            if d.backward[d.forward[a]] != a {
                return fail("backward ∘ forward is not the identity");
            }
            if d.joint.pes.pol(a) != d.split.pol(d.forward[a]) {
                return fail("polarity not preserved");
            }
            if d.joint.inst(a) != d.split_inst(d.forward[a]) {
                return fail("instantiation not preserved");
            }
            for b in 0..j.len() {
                if j.leq(a, b) != s.leq(d.forward[a], d.forward[b]) {
                    return fail("causality not preserved");
                }
            }
        }
        for b in 0..s.len() {
            if d.forward[d.backward[b]] != b {
                return fail("forward ∘ backward is not the identity");
            }
        }
        for x in j.min_inconsistent() {
            if s.is_consistent(&s.set_of(x.ones().map(|a| d.forward[a]))) {
                return fail("an inconsistent set maps to a consistent one");
            }
        }
        for x in s.min_inconsistent() {
            if j.is_consistent(&j.set_of(x.ones().map(|b| d.backward[b]))) {
                return fail("an inconsistent set maps back to a consistent one");
            }
        }
    }
    Ok("100 pairs".into())
}

fn copycat_characterisation() -> Outcome {
    let mut gen = Generator::new(105);
    let mut failures = Vec::new();
    let total = 120;
    for i in 0..total {
        let n = gen.rng_range(0, 4);
        let a = gen.polarized(n);
        let cc = copycat(&a);
        let configs = cc.check_configurations();
        if !configs.is_valid() {
            return Err(format!("game {i}, clause (ii): {configs}"));
        }
        let immediate = cc.check_immediate();
        if !immediate.is_valid() {
            failures.push((i, a, immediate));
        }
    }
    match failures.first() {
        None => Ok(format!("{total} games, both clauses")),
        Some((i, a, report)) => Err(format!(
            "clause (i) fails on {} of {total} games (clause (ii) holds on all); first witness, game {i}:\n{}\npolarities {:?}\n{report}",
            failures.len(),
            a.es,
            a.pol
        )),
    }
}

fn identity_laws() -> Outcome {
    let start = Instant::now();
    let mut gen = Generator::new(106);
    let mut plain = 0;
    while plain < 150 {
        let (na, nb) = (gen.rng_range(0, 3), gen.rng_range(0, 3));
        let (a, b) = (gen.game(na), gen.game(nb));
        let st = gen.strategy(&PolarizedES::par(&a.dual(), &b));
        if st.s.len() > 6 {
            continue;
        }
        plain += 1;
        let left = compose_classic(&st, &copycat(&b).strategy).map_err(|e| e.to_string())?;
        let right = compose_classic(&copycat(&a).strategy, &st).map_err(|e| e.to_string())?;
        if !isomorphic(&left, &st) || !isomorphic(&right, &st) {
            return Err(format!("copycat is not an identity for\n{}", st.s.es));
        }
    }
    let p = GameParams { max_events: 2, max_carrier: 2, max_sorts: 2, winning_depth: Some(1) };
    let mut typed = 0;
    while typed < 40 {
        let (e, f) = gen.agame_pair(&p);
        let ast = gen.astrategy(&AGame::par(&e.dual(), &f)).map_err(|e| e.to_string())?;
        if ast.s.len() > 6 {
            continue;
        }
        typed += 1;
        let left = a_compose(&ast, &a_copycat(&f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let right = a_compose(&a_copycat(&e).map_err(|e| e.to_string())?, &ast).map_err(|e| e.to_string())?;
        if !a_isomorphic(&left, &ast) || !a_isomorphic(&right, &ast) {
            return Err(format!("A-copycat is not an identity for\n{}", ast.es()));
        }
    }
    within(start.elapsed(), 120, format!("{plain} strategies, {typed} A-strategies"))
}

fn model_game_agreement() -> Outcome {
    let start = Instant::now();
    let suite = default_suite();
    let records = check_game_conjectures(&suite, BOUND).map_err(|e| e.to_string())?;
    if let Some(r) = records.iter().find(|r| !r.agree) {
        return Err(format!(
            "{} {} {} k={} n={}: oracle {}, search {}, witness {:?}",
            r.kind, r.a, r.b, r.k, r.n, r.oracle, r.search, r.witness
        ));
    }
    within(start.elapsed(), 300, format!("{} instances", records.len()))
}

fn ef_anchors() -> Outcome {
    let sets = sets_up_to(2);
    let (one, two) = (&sets[1].algebra, &sets[2].algebra);
    for (n, expected) in [(1, true), (2, false)] {
        let oracle = oracle_decide(GameKind::Ef, one, two, 2, n).map_err(|e| e.to_string())?;
        let game = gen_ef_game(one, two, 2, n).map_err(|e| e.to_string())?;
        let found = match search_deterministic_winning(&game, BOUND).map_err(|e| e.to_string())? {
            SearchOutcome::Found(_) => true,
            SearchOutcome::Exhausted => false,
            SearchOutcome::BoundExceeded => return Err(format!("search bound exceeded at n={n}")),
        };
        if oracle != expected || found != expected {
            return Err(format!("n={n}: expected {expected}, oracle {oracle}, search {found}"));
        }
    }
    Ok("(2,1) wins, (2,2) loses, by oracle and search".into())
}

fn conjecture_harnesses() -> Outcome {
    let suite = stability_suite(DEFAULT_SEED, 3).map_err(|e| e.to_string())?;
    let records = check_winning_stability(&suite).map_err(|e| e.to_string())?;
    if records.len() != suite.len() {
        return Err(format!("{} verdicts for {} stability instances", records.len(), suite.len()));
    }
    let mut counts = [0usize; 3];
    for r in &records {
        counts[r.verdict as usize] += 1;
        if r.verdict != Verdict::Violated {
            continue;
        }
        let composed = r.composed.as_ref().ok_or("violation without a composite")?;
        let names = r.witness.as_ref().ok_or("violation without a witness")?;
        let x = composed.es().set_of_names(names).map_err(|e| e.to_string())?;
        let w = composed.game.winning_or_true();
        let malformed = !composed.es().is_configuration(&x)
            || composed.satisfies(&x, &w).map_err(|e| e.to_string())?
            || r.trace.as_ref().is_none_or(|t| t.is_empty());
        if malformed {
            return Err(format!("stability instance {}: malformed witness {names:?}", r.instance));
        }
    }
    let strategies = induced_suite(DEFAULT_SEED, 3).map_err(|e| e.to_string())?;
    let mut agreeing = 0;
    for (i, ast) in strategies.iter().enumerate() {
        let report = ast.check_induced_conjecture().map_err(|e| e.to_string())?;
        for c in &report.counterexamples {
            let named = c.events.iter().all(|n| ast.es().index_of(n).is_some());
            if !named || c.induced == c.formula {
                return Err(format!("induced instance {i}: malformed counterexample {c:?}"));
            }
        }
        if report.counterexamples.is_empty() {
            agreeing += 1;
        }
    }
    Ok(format!(
        "stability {} preserved, {} violated, {} skipped; induced {agreeing} of {} agree",
        counts[Verdict::Preserved as usize],
        counts[Verdict::Violated as usize],
        counts[Verdict::Skipped as usize],
        strategies.len()
    ))
}

fn lambda_theorem() -> Outcome {
    let mut gen = Generator::new(110);
    let levels = diamond();
    let mut identities = 0;
    let mut attempts = 0;
    while identities < 100 {
        attempts += 1;
        if attempts > 5000 {
            return Err(format!("only {identities} Λ-strategies generated"));
        }
        let (na, nb) = (gen.rng_range(0, 3), gen.rng_range(0, 3));
        let (ga, gb) = (gen.game(na), gen.game(nb));
        let la = gen.levels_for(&ga.es, &levels);
        let lb = gen.levels_for(&gb.es, &levels);
        let a = LeveledGame::new(ga, levels.clone(), la).map_err(|e| e.to_string())?;
        let b = LeveledGame::new(gb, levels.clone(), lb).map_err(|e| e.to_string())?;
        let target = LeveledGame::par(&a.dual(), &b).map_err(|e| e.to_string())?;
        let st = gen.strategy(&target.pes);
        if st.s.len() > 6 || !check_lambda_strategy(&st, &target).is_valid() {
            continue;
        }
        identities += 1;
        let r = lambda_identity(&st, &a, &b).map_err(|e| e.to_string())?;
        if !r.holds() {
            return Err(format!("{r:?} for\n{}", st.s.es));
        }
    }
    let (mut strategies, mut instances) = (0, 0);
    // sample until enough incomparable pairs have been met
    let mut games = 0;
    while instances < 200 {
        games += 1;
        if games > 20_000 {
            return Err(format!("only {instances} independence instances generated"));
        }
        let g = gen.agame(&params(4));
        let l = gen.levels_for(g.es(), &levels);
        let lg = LeveledAGame::new(g.clone(), levels.clone(), l).map_err(|e| e.to_string())?;
        let ast = gen.astrategy(&g).map_err(|e| e.to_string())?;
        if !ast.check().is_valid() || !check_a_lambda_strategy(&ast, &lg).map_err(|e| e.to_string())?.is_valid() {
            continue;
        }
        strategies += 1;
        for (e, e2, x) in independence_instances(&ast, &lg) {
            instances += 1;
            let r = check_lambda_independence(&ast, &lg, e, e2, &x).map_err(|e| e.to_string())?;
            if !r.clause1() || !r.clause2() {
                return Err(r.to_report().to_string());
            }
        }
    }
    Ok(format!(
        "{identities} identity checks; independence on {strategies} A,Λ-strategies, {instances} instances"
    ))
}

fn emit(line: &str) {
    let mut out = std::io::stdout();
    out.write_all(line.as_bytes()).unwrap();
    out.write_all(b"\n").unwrap();
    out.flush().unwrap();
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let criteria: [Criterion; 10] = [
        ("bijection round-trip", bijection_round_trip),
        ("red strategies are A-strategies", red_strategies_are_valid),
        ("disjunction over projections", disjunction_over_projections),
        ("distribution isomorphism", distribution),
        ("copycat characterisation", copycat_characterisation),
        ("copycat identity laws", identity_laws),
        ("model games agree with the oracle", model_game_agreement),
        ("EF anchors", ef_anchors),
        ("conjecture harnesses complete", conjecture_harnesses),
        ("Λ identity and independence", lambda_theorem),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        match run() {
            Ok(detail) => emit(&format!("[PASS] criterion {n}: {name} ({detail})")),
            Err(detail) => {
                emit(&format!("[FAIL] criterion {n}: {name}: {detail}"));
                failed.push(n);
            }
        }
    }
    let total = within(start.elapsed(), 600, "acceptance run".into());
    match total {
        Ok(detail) => emit(&format!("[PASS] criterion 11: total time ({detail})")),
        Err(detail) => {
            emit(&format!("[FAIL] criterion 11: total time: {detail}"));
            failed.push(11);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
