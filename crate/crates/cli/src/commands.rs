use clap::{Args, Parser, Subcommand, ValueEnum};

use extricat_core::cotorsion::{
    self, check_cotorsion_pair, describe_conflation, enumerate_cotorsion_pairs, glue, glued_approximation,
    outcome_verdict, render, restrict_pair, gluing_conditions, CotorsionReport, Direction, Outcome, Pair,
    SidePairs, Via,
};
use extricat_core::exstruct::{check_extension_closed, et4_sweep, ext_round_trip, hom_ext_exactness, wic_spot_check};
use extricat_core::morphcat::{FunctorTag, Side};
use extricat_core::recollement::{full_report, identity_suite, verify_axioms, Item, RecollementScenario};
use extricat_core::{ExCat, Mode, Status, Subcat, Verdict, Witness};

use crate::error::CliError;
use crate::report::{escalate_failures, Report};
use crate::scenario::{load_scenario, split_list};
use crate::world::{compute_catalogs, parse_subcat, build_algebra, CacheMode, World};

#[derive(Parser, Debug)]
#[command(name = "extricat", version, about = "Cotorsion pairs and recollements of finite-dimensional algebras")]
pub struct Cli {
    /// Emit the machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampled sweeps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Recompute catalogs without reading or writing the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    A,
    B,
    C,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::A => Side::A,
            SideArg::B => Side::B,
            SideArg::C => Side::C,
        }
    }
}

#[derive(Args, Debug)]
pub struct Target {
    /// Built-in scenario name or path to a scenario file.
    pub scenario: String,
    /// Category to work in (default: the scenario's own).
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
}

#[derive(Args, Debug)]
pub struct SidePairArgs {
    #[arg(long = "T1")]
    pub t1: Option<String>,
    #[arg(long = "F1")]
    pub f1: Option<String>,
    #[arg(long = "T2")]
    pub t2: Option<String>,
    #[arg(long = "F2")]
    pub f2: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Indecomposables with Hom and Ext tables.
    Catalog {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        bounds: Option<String>,
        /// Recompute the catalog and compare it with the cached one.
        #[arg(long)]
        verify_cache: bool,
    },
    #[command(subcommand)]
    Cotorsion(CotorsionCmd),
    /// Glue a pair on each side into a pair of the middle category.
    Glue {
        scenario: String,
        #[command(flatten)]
        pairs: SidePairArgs,
        /// Also check the sufficient conditions for a cotorsion pair.
        #[arg(long)]
        conditions: bool,
    },
    /// An approximation conflation of one object.
    Approx {
        #[command(flatten)]
        target: Target,
        #[arg(long = "T")]
        t: Option<String>,
        #[arg(long = "F")]
        f: Option<String>,
        #[arg(long)]
        object: String,
        #[arg(long)]
        direction: String,
        /// Build it from side approximations of a glued pair.
        #[arg(long)]
        glued: bool,
        #[command(flatten)]
        pairs: SidePairArgs,
    },
    #[command(subcommand)]
    Recollement(RecollementCmd),
    #[command(subcommand)]
    Functor(FunctorCmd),
    /// Restrict a cotorsion pair of the middle category to a side.
    Restrict {
        scenario: String,
        #[arg(long = "U")]
        u: String,
        #[arg(long = "V")]
        v: String,
        #[arg(long)]
        via: String,
    },
    /// Structural property suites on every category of the scenario.
    Properties { scenario: String },
    /// Extension-closure of a list of indecomposables.
    Closure {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        objects: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CotorsionCmd {
    /// Every cotorsion pair of the category.
    Enumerate {
        #[command(flatten)]
        target: Target,
    },
    /// Check a single pair.
    Check {
        #[command(flatten)]
        target: Target,
        #[arg(long = "T")]
        t: String,
        #[arg(long = "F")]
        f: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum RecollementCmd {
    /// Axioms, the derived exactness statements and the conflation properties.
    Verify { scenario: String },
}

#[derive(Subcommand, Debug)]
pub enum FunctorCmd {
    /// Exactness of one recollement functor.
    Check {
        scenario: String,
        #[arg(long)]
        functor: String,
        #[arg(long)]
        mode: String,
    },
}

pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs a command line (without the program name).
pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("extricat".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { stdout: text, stderr: String::new(), code }
            } else {
                Output { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match execute(&cli, args) {
        Ok((report, note)) => Output {
            stdout: if cli.json {
                crate::report::to_json(&report)
            } else {
                crate::report::to_human(&report)
            },
            stderr: note,
            code: report.exit_code(),
        },
        Err(e) => Output {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn scenario_arg(cmd: &Command) -> &str {
    match cmd {
        Command::Catalog { target, .. } | Command::Approx { target, .. } | Command::Closure { target, .. } => &target.scenario,
        Command::Cotorsion(CotorsionCmd::Enumerate { target }) | Command::Cotorsion(CotorsionCmd::Check { target, .. }) => {
            &target.scenario
        }
        Command::Glue { scenario, .. }
        | Command::Restrict { scenario, .. }
        | Command::Properties { scenario }
        | Command::Recollement(RecollementCmd::Verify { scenario })
        | Command::Functor(FunctorCmd::Check { scenario, .. }) => scenario,
    }
}

fn execute(cli: &Cli, args: Vec<String>) -> Result<(Report, String), CliError> {
    let mut scenario = load_scenario(scenario_arg(&cli.command))?;
    if let Some(seed) = cli.seed {
        scenario.caps.seed = seed;
    }
    if let Command::Catalog { bounds: Some(b), .. } = &cli.command {
        scenario.caps.bounds = split_list(b)
            .iter()
            .map(|x| x.parse::<usize>().map_err(|_| CliError::Usage(format!("bad bound {x}"))))
            .collect::<Result<_, _>>()?;
    }
    let mode = if cli.no_cache { CacheMode::Off } else { CacheMode::Use };
    let world = World::load(scenario, mode)?;
    let note = format!("catalog cache: {:?}\n", world.cache).to_lowercase();
    let mut report = Report::new(&world.scenario.name, &world.hash, args, world.scenario.caps.clone());
    match &cli.command {
        Command::Catalog { target, verify_cache, .. } => catalog(&world, target, *verify_cache, &mut report)?,
        Command::Cotorsion(CotorsionCmd::Enumerate { target }) => enumerate(&world, target, &mut report)?,
        Command::Cotorsion(CotorsionCmd::Check { target, t, f }) => {
            let x = world.side(target.side.map(Into::into))?;
            let pair = Pair {
                t: parse_subcat(&x, t)?,
                f: parse_subcat(&x, f)?,
            };
            let r = check_cotorsion_pair(&x, &pair)?;
            report.lines("pair", vec![format!("T = {}", render(&x, &pair.t)), format!("F = {}", render(&x, &pair.f))]);
            cotorsion_sections(&mut report, "cotorsion pair", &r);
            report.absorb(&r.overall());
        }
        Command::Glue { pairs, conditions, .. } => glue_cmd(&world, pairs, *conditions, &mut report)?,
        Command::Approx {
            target,
            t,
            f,
            object,
            direction,
            glued,
            pairs,
        } => {
            let dir = Direction::parse(direction)?;
            if *glued {
                glued_approx_cmd(&world, pairs, object, dir, &mut report)?
            } else {
                let x = world.side(target.side.map(Into::into))?;
                let need = |o: &Option<String>, n: &str| o.clone().ok_or_else(|| CliError::Usage(format!("--{n} is required")));
                let pair = Pair {
                    t: parse_subcat(&x, &need(t, "T")?)?,
                    f: parse_subcat(&x, &need(f, "F")?)?,
                };
                let m = object_in(&x, object)?;
                let outcome = cotorsion::approximate(&x, &m, &pair, dir)?;
                let v = outcome_verdict(&x, object, &outcome);
                if let Outcome::Found(a) = &outcome {
                    report.lines(
                        "conflation",
                        vec![describe_conflation(&x, &a.conf), format!("stage: {}", a.stage.name())],
                    );
                }
                report.verdicts("approximation", vec![Item::new(direction, "approximation conflation exists", v.clone())]);
                report.absorb(&v);
            }
        }
        Command::Recollement(RecollementCmd::Verify { .. }) => {
            let s = world.recollement()?;
            let r = full_report(s);
            report.verdicts("axioms", r.axioms.clone());
            report.verdicts("derived exactness", r.consequences.clone());
            report.verdicts("conflations", r.conflations.clone());
            report.verdicts("identities", r.identities.clone());
            for i in r.items() {
                report.absorb(&i.verdict);
            }
        }
        Command::Functor(FunctorCmd::Check { functor, mode, .. }) => {
            let s = world.recollement()?;
            let tag = FunctorTag::parse(functor)?;
            let mode = Mode::parse(mode)?;
            let v = cotorsion::role_exactness(s, tag, mode);
            let id = format!("{} {}", tag.symbol(), mode.name());
            report.verdicts("functor", vec![Item::new(&id, "preserves the conflations", v.clone())]);
            report.absorb(&v);
        }
        Command::Restrict { u, v, via, .. } => restrict_cmd(&world, u, v, via, &mut report)?,
        Command::Properties { .. } => properties(&world, &mut report),
        Command::Closure { target, objects } => {
            let x = world.side(target.side.map(Into::into))?;
            let sub = match objects {
                Some(o) => parse_subcat(&x, o)?,
                None => x.carrier.clone(),
            };
            let v = check_extension_closed(&ExCat::new(x.cat.clone(), sub.clone()));
            report.verdicts("extension closure", vec![Item::new(&render(&x, &sub), "closed under extensions", v.clone())]);
            report.absorb(&v);
        }
    }
    Ok((report, note))
}

fn object_in(x: &ExCat, name: &str) -> Result<extricat_core::Rep, CliError> {
    let i = x.cat.catalog.resolve(name)?;
    if !x.carrier.contains(i) {
        return Err(CliError::Usage(format!("{name} is not in the category")));
    }
    Ok(x.cat.object(i).clone())
}

fn names(x: &ExCat, idx: &[usize]) -> String {
    render(x, &Subcat::of(idx.iter().copied()))
}

fn catalog_tables(report: &mut Report, title: &str, x: &ExCat) {
    let cat = &x.cat;
    let proj = cat.projectives();
    let inj = cat.injectives();
    let idx = x.indices();
    let rows = idx
        .iter()
        .map(|&i| {
            vec![
                cat.catalog.names[i].clone(),
                cat.catalog.aliases[i].join(" "),
                format!("{:?}", cat.object(i).dims),
                if proj.contains(&i) { "P" } else { "" }.to_string(),
                if inj.contains(&i) { "I" } else { "" }.to_string(),
            ]
        })
        .collect();
    let header = ["name", "aliases", "dims", "proj", "inj"].map(String::from).to_vec();
    report.table(&format!("{title}: {} indecomposables", idx.len()), header, rows);
    let labels: Vec<String> = idx.iter().map(|&i| x.label(i).to_string()).collect();
    let grid = |t: Vec<Vec<usize>>| -> Vec<Vec<String>> {
        idx.iter()
            .map(|&i| {
                std::iter::once(x.label(i).to_string())
                    .chain(idx.iter().map(|&j| t[i][j].to_string()))
                    .collect()
            })
            .collect()
    };
    let mut header = vec![String::new()];
    header.extend(labels);
    report.table(&format!("{title}: dim Hom(row, column)"), header.clone(), grid(cat.hom_table()));
    report.table(&format!("{title}: dim Ext¹(row, column)"), header, grid(cat.ext_table()));
}

fn catalog(world: &World, target: &Target, verify: bool, report: &mut Report) -> Result<(), CliError> {
    let cats: Vec<(String, ExCat)> = match (&target.side, &world.rec) {
        (Some(s), _) => vec![(format!("{:?}", s), world.side(Some((*s).into()))?)],
        (None, Some(r)) => vec![("A".into(), r.a.clone()), ("B".into(), r.b.clone()), ("C".into(), r.c.clone())],
        (None, None) if world.mc.is_some() => vec![("A".into(), ExCat::full(world.base.clone())), ("B".into(), world.main.clone())],
        (None, None) => vec![("A".into(), world.main.clone())],
    };
    let mut exact = Vec::new();
    for (title, x) in &cats {
        catalog_tables(report, title, x);
        exact.push(vec![
            title.clone(),
            names(x, &x.projectives()),
            names(x, &x.injectives()),
        ]);
    }
    let header = ["category", "projectives", "injectives"].map(String::from).to_vec();
    report.table("projective and injective objects of each carrier", header, exact);
    let mut caps_hit = world.base.catalog.caps_hit.clone();
    if let Some(mc) = &world.mc {
        caps_hit.extend(mc.middle.catalog.caps_hit.iter().cloned());
    }
    let complete = if caps_hit.is_empty() {
        Verdict::holds()
    } else {
        let mut v = Verdict::unknown("catalog bounds");
        v.witness = Some(Witness::new(caps_hit.join("; ")));
        v
    };
    let mut items = vec![Item::new("complete", "no search cap was reached while enumerating", complete.clone())];
    report.absorb(&complete);
    if verify {
        let alg = build_algebra(&world.scenario)?;
        let (base, middle) = compute_catalogs(&world.scenario, &alg)?;
        let strip = |c: &extricat_core::Catalog| (c.objects.clone(), c.names.clone(), c.caps_hit.clone());
        let same = strip(&base) == strip(&world.base.catalog)
            && match (&middle, &world.mc) {
                (Some(m), Some(mc)) => strip(m) == strip(&mc.middle.catalog),
                (None, None) => true,
                _ => false,
            };
        let v = Verdict::from_bool(same, || Witness::new("the cached catalog differs from a fresh computation"));
        report.absorb(&v);
        items.push(Item::new("cache", "cached catalog equals a fresh computation", v));
    }
    report.verdicts("catalog", items);
    Ok(())
}

fn enumerate(world: &World, target: &Target, report: &mut Report) -> Result<(), CliError> {
    let x = world.side(target.side.map(Into::into))?;
    let e = enumerate_cotorsion_pairs(&x)?;
    let rows = e
        .pairs
        .iter()
        .enumerate()
        .map(|(k, p)| vec![format!("{}", k + 1), render(&x, &p.pair.t), render(&x, &p.pair.f)])
        .collect();
    report.table(
        &format!("{} cotorsion pairs", e.pairs.len()),
        ["#", "T", "F"].map(String::from).to_vec(),
        rows,
    );
    let mut items = Vec::new();
    for (k, p) in e.pairs.iter().enumerate() {
        items.push(Item::new(&format!("{} coherence", k + 1), "perpendicular classes, closed under extensions", p.coherence.clone()));
        report.absorb(&p.coherence);
    }
    for (pair, v) in &e.rejected {
        if v.status == Status::Unknown {
            let id = format!("undecided {} / {}", render(&x, &pair.t), render(&x, &pair.f));
            items.push(Item::new(&id, "candidate pair", v.clone()));
            report.absorb(v);
        }
    }
    report.verdicts("checks", items);
    report.lines(
        "search",
        vec![format!(
            "{} subsets examined, {} perpendicular candidates rejected",
            e.subsets_examined,
            e.rejected.len()
        )],
    );
    Ok(())
}

fn cotorsion_sections(report: &mut Report, title: &str, r: &CotorsionReport) {
    report.verdicts(
        title,
        vec![
            Item::new("(a)", "Ext¹(T, F) = 0", r.orthogonal.clone()),
            Item::new("(b)", "F -> T -> C for every C", r.right.clone()),
            Item::new("(c)", "C -> F -> T for every C", r.left.clone()),
        ],
    );
    let rows = r
        .records
        .iter()
        .map(|a| {
            vec![
                a.object.clone(),
                format!("{:?}", a.direction).to_lowercase(),
                a.verdict.status.to_string(),
                a.verdict.witness.as_ref().map(|w| w.message.clone()).unwrap_or_default(),
            ]
        })
        .collect();
    report.table(
        &format!("{title}: approximations"),
        ["object", "dir", "status", "conflation"].map(String::from).to_vec(),
        rows,
    );
}

fn side_pairs(s: &RecollementScenario, a: &SidePairArgs) -> Result<SidePairs, CliError> {
    let need = |o: &Option<String>, n: &str| o.clone().ok_or_else(|| CliError::Usage(format!("--{n} is required")));
    Ok(SidePairs {
        t1: parse_subcat(&s.a, &need(&a.t1, "T1")?)?,
        f1: parse_subcat(&s.a, &need(&a.f1, "F1")?)?,
        t2: parse_subcat(&s.c, &need(&a.t2, "T2")?)?,
        f2: parse_subcat(&s.c, &need(&a.f2, "F2")?)?,
    })
}

fn glue_cmd(world: &World, args: &SidePairArgs, conditions: bool, report: &mut Report) -> Result<(), CliError> {
    let s = world.recollement()?;
    let sides = side_pairs(s, args)?;
    let g = glue(s, &sides)?;
    report.lines(
        "glued pair",
        vec![format!("T = {}", render(&s.b, &g.pair.t)), format!("F = {}", render(&s.b, &g.pair.f))],
    );
    let yn = |b: bool| if b { "yes" } else { "no" }.to_string();
    let rows = g
        .trace
        .iter()
        .map(|t| {
            vec![
                t.object.clone(),
                t.i_star_upper.clone(),
                t.j_star.clone(),
                t.i_shriek.clone(),
                yn(t.in_t),
                yn(t.in_f),
            ]
        })
        .collect();
    report.table(
        "membership",
        ["object", "i^*", "j^*", "i^!", "in T", "in F"].map(String::from).to_vec(),
        rows,
    );
    let closure = cotorsion::glued_closure(s, &sides, &g);
    report.verdicts("glued classes", closure);
    if conditions {
        let th = gluing_conditions(s, &sides, &g)?;
        report.verdicts("hypotheses", th.hypotheses.clone());
        report.verdicts("conditions", th.conditions.clone());
        cotorsion_sections(report, "glued cotorsion pair", &th.cotorsion);
        report.verdicts(
            "consistency",
            vec![Item::new("implication", "hypotheses and a condition give a cotorsion pair", th.consistency.clone())],
        );
        report.absorb(&th.cotorsion.overall());
        report.absorb(&th.consistency);
    }
    Ok(())
}

fn glued_approx_cmd(world: &World, args: &SidePairArgs, object: &str, dir: Direction, report: &mut Report) -> Result<(), CliError> {
    let s = world.recollement()?;
    let sides = side_pairs(s, args)?;
    let m = object_in(&s.b, object)?;
    let g = glued_approximation(s, &sides, &m, dir)?;
    report.lines("construction", g.trace.clone());
    report.lines("conflation", vec![describe_conflation(&s.b, &g.conf)]);
    let exact = Verdict::from_bool(g.conf.is_exact(), || Witness::new("the constructed sequence is not exact"));
    report.absorb(&exact);
    report.verdicts(
        "certificates",
        vec![
            Item::new("exact", "the sequence is a conflation", exact),
            Item::new("members", "the outer terms lie in the glued classes", Verdict::holds()),
        ],
    );
    Ok(())
}

fn restrict_cmd(world: &World, u: &str, v: &str, via: &str, report: &mut Report) -> Result<(), CliError> {
    let s = world.recollement()?;
    let via = Via::parse(via)?;
    let pair = Pair {
        t: parse_subcat(&s.b, u)?,
        f: parse_subcat(&s.b, v)?,
    };
    let r = restrict_pair(s, &pair, via)?;
    let target = match via {
        Via::I => &s.a,
        Via::J => &s.c,
    };
    cotorsion_sections(report, "input pair", &r.input);
    report.verdicts("preconditions", r.preconditions.clone());
    report.lines(
        "restricted pair",
        vec![format!("T = {}", render(target, &r.pair.t)), format!("F = {}", render(target, &r.pair.f))],
    );
    cotorsion_sections(report, "restricted cotorsion pair", &r.result);
    report.verdicts(
        "consistency",
        vec![Item::new("implication", "the restriction theorem's conclusion", r.consistency.clone())],
    );
    report.absorb(&r.input.overall());
    report.absorb(&r.result.overall());
    report.absorb(&r.consistency);
    Ok(())
}

fn properties(world: &World, report: &mut Report) {
    let cats: Vec<(String, ExCat)> = match &world.rec {
        Some(r) => vec![("A".into(), r.a.clone()), ("B".into(), r.b.clone()), ("C".into(), r.c.clone())],
        None => vec![("A".into(), world.main.clone())],
    };
    for (title, x) in &cats {
        let closed = check_extension_closed(x);
        let gate_holds = closed.is_holds();
        let mut items = vec![
            Item::new("hom-ext", "Hom and Ext¹ long exact sequences", hom_ext_exactness(x)),
            Item::new("round trip", "class -> conflation -> class is the identity", ext_round_trip(x)),
            Item::new("ET4", "octahedral certificates on composable conflations", et4_sweep(x)),
            Item::new("WIC", "no non-isomorphism is both inflation and deflation", wic_spot_check(x)),
        ];
        // these hold on every extension-closed carrier
        if gate_holds {
            escalate_failures(&mut items);
        }
        items.insert(0, Item::new("extension-closed", "the carrier is closed under extensions", closed));
        for i in &items {
            report.absorb(&i.verdict);
        }
        report.verdicts(&format!("category {title}"), items);
    }
    if let Some(r) = &world.rec {
        let mut items = identity_suite(r);
        if verify_axioms(r).iter().all(|i| i.verdict.is_holds()) {
            escalate_failures(&mut items);
        }
        for i in &items {
            report.absorb(&i.verdict);
        }
        report.verdicts("adjunctions", items);
    }
}
