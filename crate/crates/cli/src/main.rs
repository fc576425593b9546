//! `wdp`: command-line front end for the `wdp` library.

mod table;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use num::{BigRational, ToPrimitive};
use serde_json::{json, Value};

use wdp::classify::{enumerate_unstable, singularity_census, ClassificationReport};
use wdp::foliation::{check_foliation_adjunction, n_invariant, n_step, slope_report};
use wdp::fsing::{classify_foliated_singularity, solve_discrepancies, DecoratedGraph};
use wdp::surface::{hirzebruch, SurfaceConfig, SurfaceError};
use wdp::toric::elimination::eliminate;
use wdp::toric::enumerate::{gorenstein_catalog, isomorphic};
use wdp::toric::{analyze_toric_foliation, CaseId};

use table::Table;

const ENUMERATE_FIXTURE: &str = include_str!("../fixtures/enumerate_m7.tsv");
const EXAMPLES_FIXTURE: &str = include_str!("../fixtures/examples.tsv");
const THREADS_VAR: &str = "WDP_THREADS";

#[derive(Parser)]
#[command(
    name = "wdp",
    version,
    about = "Slope-unstable weak del Pezzo surfaces, exactly"
)]
struct Cli {
    /// Print timing to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the destabilized classes and check them against the golden list.
    Enumerate {
        #[arg(long, default_value_t = 7)]
        max_blowups: usize,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        /// Emit the (−2)-curve graph of each class.
        #[arg(long)]
        dot: bool,
    },
    /// Load a configuration file and report its invariants.
    Check {
        config: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Verify the slopes of F_n and X_{n,k}.
    Examples {
        #[arg(long)]
        json: bool,
    },
    /// Toric computations.
    #[command(subcommand)]
    Toric(ToricCommand),
    /// Du Val singularities of the anticanonical model of a configuration.
    Singularities {
        config: PathBuf,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Classify a foliated singularity given as a DOT resolution graph.
    Fsing {
        graph: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ToricCommand {
    /// The Gorenstein toric del Pezzo surfaces up to isomorphism.
    ListGorenstein {
        #[arg(long)]
        json: bool,
    },
    /// Bounded blowup search ruling out a case.
    Eliminate {
        /// 6d, 8c or 9.
        #[arg(long)]
        case: String,
        /// Print every search step.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Invariants of the foliation spanned by one ray of a case fan.
    Foliation {
        #[arg(long)]
        case: String,
        /// Ray number 1, 2 or 3 in the case table (default: the case's own).
        #[arg(long)]
        ray: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Ok,
    Mismatch,
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Ok
    } else {
        Verdict::Mismatch
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_config(path: &Path) -> Result<SurfaceConfig> {
    let src = read(path)?;
    SurfaceConfig::from_json_str(&src).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn class_name(r: &ClassificationReport) -> String {
    r.name.clone().unwrap_or_else(|| "-".to_string())
}

fn dot_id(name: &str) -> String {
    name.chars()
        .filter_map(|c| match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' => Some(c),
            '_' | ',' => Some('_'),
            _ => None,
        })
        .collect()
}

/// One golden record: name, m, N, μ_F, μ_T, singularities, key.
fn record(r: &ClassificationReport) -> Vec<String> {
    vec![
        class_name(r),
        r.m.to_string(),
        r.slope.n_inv.to_string(),
        r.slope.mu_f.to_string(),
        r.slope.mu_t.to_string(),
        r.singularity_label.clone(),
        r.canonical_key.clone(),
    ]
}

fn fixture_rows(src: &str) -> Vec<Vec<String>> {
    src.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

fn enumerate(max_blowups: usize, json: bool, dot: bool) -> Result<Verdict> {
    let mut reports = enumerate_unstable(max_blowups)?;
    reports.sort_by(|a, b| {
        (a.m, class_name(a), &a.canonical_key).cmp(&(b.m, class_name(b), &b.canonical_key))
    });
    let mut got: Vec<Vec<String>> = reports.iter().map(record).collect();
    let mut want: Vec<Vec<String>> = fixture_rows(ENUMERATE_FIXTURE)
        .into_iter()
        .filter(|r| r[1].parse::<usize>().is_ok_and(|m| m <= max_blowups))
        .collect();
    got.sort();
    want.sort();
    let matches = got == want;

    if json {
        print_json(&reports)?;
    } else if dot {
        for r in &reports {
            print!("{}", r.config().minus_two_dot(&dot_id(&class_name(r))));
        }
    } else {
        let mut t = Table::new(&["class", "m", "N", "mu_F", "mu_T", "singularities", "key"]);
        for r in &reports {
            t.row(record(r));
        }
        print!("{}", t.render());
        println!();
        let mut c = Table::new(&["singularities", "classes", "listed"]);
        for e in singularity_census(&reports) {
            c.row(vec![
                e.label,
                e.witnesses.join(", "),
                if e.expected { "yes" } else { "no (flagged)" }.to_string(),
            ]);
        }
        print!("{}", c.render());
        println!();
        println!(
            "{} classes with at most {max_blowups} blowups; golden list: {}",
            reports.len(),
            if matches { "match" } else { "MISMATCH" }
        );
    }
    if !matches {
        eprintln!("output differs from the golden list for max blowups {max_blowups}");
    }
    Ok(verdict(matches))
}

fn check(path: &Path, json: bool) -> Result<Verdict> {
    let config = load_config(path)?;
    let weak_dp = config.is_weak_del_pezzo();
    let slope = slope_report(&config);
    let adjunction = check_foliation_adjunction(&config);
    let invariants = config.check_invariants();

    // N along the blowup sequence, recomputed and predicted
    let base = hirzebruch(config.n() as i64)?;
    let mut cur = base;
    let mut n_trace = vec![n_invariant(&cur)];
    let mut recursion_ok = true;
    for &c in config.history() {
        let predicted = n_invariant(&cur) + n_step(c);
        cur = cur.blowup(c)?;
        let actual = n_invariant(&cur);
        recursion_ok &= actual == predicted;
        n_trace.push(actual);
    }
    let key = wdp::classify::canonical_encoding(&config);
    let name = wdp::classify::known_name(&key);
    let singularities = if weak_dp {
        config
            .anticanonical_model()
            .ok()
            .map(|s| wdp::fsing::format_ade_multiset(&s))
    } else {
        None
    };
    let negative = config.negative_curves();
    let ok = weak_dp && adjunction.is_ok() && invariants.is_ok() && recursion_ok;

    if json {
        print_json(&json!({
            "base": format!("F{}", config.n()),
            "m": config.m(),
            "k_squared": config.k_squared(),
            "weak_del_pezzo": weak_dp,
            "canonical_class": config.canonical_class(),
            "kf": wdp::foliation::foliation_state(&config).kf,
            "slope": slope,
            "n_sequence": n_trace,
            "n_recursion_holds": recursion_ok,
            "adjunction_holds": adjunction.is_ok(),
            "invariants_hold": invariants.is_ok(),
            "minus_one_curves": negative.minus_one.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "minus_two_curves": negative.minus_two.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "singularities": singularities,
            "canonical_key": key,
            "name": name,
        }))?;
    } else {
        let yes = |b: bool| if b { "yes" } else { "no" };
        let curves = |v: &[wdp::surface::CurveRef]| {
            if v.is_empty() {
                "none".to_string()
            } else {
                v.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            }
        };
        let mut t = Table::new(&["field", "value"]);
        let mut row = |k: &str, v: String| t.row(vec![k.to_string(), v]);
        row("base", format!("F{}", config.n()));
        row("blowups", config.m().to_string());
        row("K^2", config.k_squared().to_string());
        row("weak del Pezzo", yes(weak_dp).to_string());
        row("K", config.canonical_class().to_string());
        row(
            "K_F",
            wdp::foliation::foliation_state(&config).kf.to_string(),
        );
        row("mu_F", slope.mu_f.to_string());
        row("mu_T", slope.mu_t.to_string());
        row("N", slope.n_inv.to_string());
        row("N sequence", format!("{n_trace:?}"));
        row("N recursion", yes(recursion_ok).to_string());
        row("destabilizes", yes(slope.destabilizes).to_string());
        row(
            "adjunction",
            match &adjunction {
                Ok(()) => "holds".to_string(),
                Err(v) => format!("fails on fiber {} component {}", v.fiber, v.component),
            },
        );
        row(
            "invariants",
            match &invariants {
                Ok(()) => "hold".to_string(),
                Err(e) => e.clone(),
            },
        );
        row("(-1)-curves", curves(&negative.minus_one));
        row("(-2)-curves", curves(&negative.minus_two));
        row(
            "singularities",
            singularities.unwrap_or_else(|| "-".to_string()),
        );
        row("class", name.unwrap_or_else(|| "-".to_string()));
        row("key", key);
        print!("{}", t.render());
    }
    Ok(verdict(ok))
}

fn examples(json: bool) -> Result<Verdict> {
    let mut rows = Vec::new();
    let mut all_ok = true;
    for want in fixture_rows(EXAMPLES_FIXTURE) {
        let [name, mu_f, mu_t] = &want[..] else {
            bail!("malformed examples fixture row {want:?}");
        };
        let (n, k) = parse_example_name(name)?;
        let r = slope_report(&SurfaceConfig::x_nk(n, k)?);
        let ok = &r.mu_f.to_string() == mu_f && &r.mu_t.to_string() == mu_t;
        all_ok &= ok;
        rows.push((name.clone(), r, mu_f.clone(), ok));
    }
    if json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(name, r, expected, ok)| json!({"surface": name, "slope": r, "expected_mu": expected, "verified": ok}))
            .collect();
        print_json(&v)?;
    } else {
        let mut t = Table::new(&["surface", "mu_F", "mu_T", "N", "expected", "verified"]);
        for (name, r, expected, ok) in &rows {
            t.row(vec![
                name.clone(),
                r.mu_f.to_string(),
                r.mu_t.to_string(),
                r.n_inv.to_string(),
                expected.clone(),
                if *ok { "yes" } else { "NO" }.to_string(),
            ]);
        }
        print!("{}", t.render());
    }
    Ok(verdict(all_ok))
}

/// `F2` → (2, 0); `X_{1,3}` → (1, 3).
fn parse_example_name(name: &str) -> Result<(i64, usize)> {
    if let Some(n) = name.strip_prefix('F') {
        return Ok((n.parse()?, 0));
    }
    let inner = name
        .strip_prefix("X_{")
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| anyhow!("bad surface name {name:?}"))?;
    let (n, k) = inner
        .split_once(',')
        .ok_or_else(|| anyhow!("bad surface name {name:?}"))?;
    Ok((n.parse()?, k.parse()?))
}

fn list_gorenstein(json: bool) -> Result<Verdict> {
    let catalog = gorenstein_catalog();
    let case_of = |fan: &wdp::toric::Fan2D| {
        CaseId::ALL
            .into_iter()
            .find(|c| isomorphic(fan, &c.fan()))
            .map(|c| c.name().to_string())
    };
    if json {
        let v: Vec<Value> = catalog
            .iter()
            .map(|g| {
                let mut v = serde_json::to_value(g).expect("serializable");
                v["case"] = json!(case_of(&g.fan));
                v
            })
            .collect();
        print_json(&v)?;
    } else {
        let mut t = Table::new(&["#", "K^2", "rank", "singularities", "case", "rays"]);
        for (i, g) in catalog.iter().enumerate() {
            t.row(vec![
                (i + 1).to_string(),
                g.k_squared.to_string(),
                g.picard_rank.to_string(),
                wdp::fsing::format_ade_multiset(&g.singularities),
                case_of(&g.fan).unwrap_or_else(|| "-".to_string()),
                g.fan.to_string(),
            ]);
        }
        print!("{}", t.render());
    }
    Ok(verdict(catalog.len() == 16))
}

fn eliminate_cmd(case: &str, trace: bool, json: bool) -> Result<Verdict> {
    let case = CaseId::parse(case)?;
    let report = eliminate(case);
    if json {
        let mut v = serde_json::to_value(&report)?;
        if trace {
            v["trace"] = json!(report.trace);
        }
        print_json(&v)?;
    } else {
        if trace {
            for line in &report.trace {
                println!("{line}");
            }
            println!();
        }
        println!(
            "case {}: N0 = {}, K^2 = {}",
            report.case, report.n0, report.k_squared
        );
        println!(
            "alpha: {} <= alpha < {}, admissible values {:?}",
            report.alpha_range.min, report.alpha_range.bound, report.alpha_range.values
        );
        if !report.branches.is_empty() {
            let mut t = Table::new(&["branch", "max ell", "needed", "states"]);
            for b in &report.branches {
                t.row(vec![
                    b.description.clone(),
                    b.max_ell.to_string(),
                    format!(">= {}", b.required_min),
                    b.states_explored.to_string(),
                ]);
            }
            print!("{}", t.render());
        }
        println!("verdict: {}", report.verdict);
    }
    Ok(verdict(report.infeasible()))
}

fn foliation_cmd(case: &str, ray: Option<usize>, json: bool) -> Result<Verdict> {
    let case = CaseId::parse(case)?;
    let fan = case.fan();
    let index = match ray {
        None => case.foliation_index(),
        Some(r @ 1..=3) => fan
            .index_of(case.rays()[r - 1])
            .expect("case rays are fan rays"),
        Some(r) => bail!("--ray must be 1, 2 or 3, got {r}"),
    };
    let report = analyze_toric_foliation(&fan, index)?;
    if json {
        print_json(&report)?;
    } else {
        let cone = |(a, b): (usize, usize)| {
            let (p, q) = (fan.ray(a), fan.ray(b));
            format!("<({},{}), ({},{})>", p[0], p[1], q[0], q[1])
        };
        let cones = |v: &[(usize, usize)]| {
            if v.is_empty() {
                "none".to_string()
            } else {
                v.iter().map(|&c| cone(c)).collect::<Vec<_>>().join(" ")
            }
        };
        let mut t = Table::new(&["field", "value"]);
        let mut row = |k: &str, v: String| t.row(vec![k.to_string(), v]);
        row("fan", fan.to_string());
        row("V", format!("({},{})", report.v[0], report.v[1]));
        row("refinement", report.refinement.to_string());
        row(
            "K_F on refinement",
            format!("{:?}", report.kf_on_refinement),
        );
        row("K_F.K", report.kf_dot_k.to_string());
        row("K^2", report.k_squared.to_string());
        row("N0", report.n0.to_string());
        row("singular orbits", cones(&report.singular_orbits));
        row("dicritical", cones(&report.dicritical_cones));
        row("general leaf", format!("{:?}", report.leaf_on_refinement));
        row("leaf^2", report.leaf_self_int.to_string());
        print!("{}", t.render());
    }
    Ok(Verdict::Ok)
}

fn singularities(path: &Path, json: bool, dot: bool) -> Result<Verdict> {
    let config = load_config(path)?;
    let types = match config.anticanonical_model() {
        Ok(t) => t,
        Err(SurfaceError::Classification(e)) => {
            eprintln!("(-2)-curves do not form Du Val graphs: {e}");
            return Ok(Verdict::Mismatch);
        }
        Err(e) => return Err(e.into()),
    };
    let label = wdp::fsing::format_ade_multiset(&types);
    let (curves, graph) = config.minus_two_graph();
    if dot {
        print!("{}", config.minus_two_dot("minus_two"));
    } else if json {
        print_json(&json!({
            "singularities": types,
            "label": label,
            "minus_two_curves": curves.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "edges": graph.edges,
        }))?;
    } else {
        println!("(-2)-curves: {}", curves.len());
        for (a, b) in &graph.edges {
            println!("  {} -- {}", curves[*a], curves[*b]);
        }
        println!("anticanonical model: {label}");
    }
    Ok(verdict(config.is_weak_del_pezzo()))
}

fn ratio_json(q: &BigRational) -> Value {
    let num = q
        .numer()
        .to_i64()
        .map(Value::from)
        .unwrap_or_else(|| q.numer().to_string().into());
    let den = q
        .denom()
        .to_i64()
        .map(Value::from)
        .unwrap_or_else(|| q.denom().to_string().into());
    json!({"num": num, "den": den})
}

fn fsing(path: &Path, json: bool) -> Result<Verdict> {
    let src = read(path)?;
    let graph = DecoratedGraph::from_dot(&src).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let class = classify_foliated_singularity(&graph);
    let disc = solve_discrepancies(&graph);
    if json {
        print_json(&json!({
            "vertices": graph.vertices,
            "edges": graph.edges,
            "classification": class,
            "summary": class.to_string(),
            "discrepancies": disc.as_ref().ok().map(|d| d.values.iter().map(ratio_json).collect::<Vec<_>>()),
            "discrepancy_error": disc.as_ref().err().map(ToString::to_string),
        }))?;
    } else {
        let mut t = Table::new(&["vertex", "self-int", "invariant", "Z", "discrepancy"]);
        for (i, v) in graph.vertices.iter().enumerate() {
            t.row(vec![
                i.to_string(),
                v.self_int.to_string(),
                if v.invariant { "yes" } else { "no" }.to_string(),
                v.z_index.map_or("-".to_string(), |z| z.to_string()),
                disc.as_ref()
                    .map_or("-".to_string(), |d| d.values[i].to_string()),
            ]);
        }
        print!("{}", t.render());
        if let Err(e) = &disc {
            println!("discrepancies: {e}");
        }
        println!("classification: {class}");
    }
    Ok(Verdict::Ok)
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow!("{THREADS_VAR} must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<Verdict> {
    configure_threads()?;
    match cli.command {
        Command::Enumerate {
            max_blowups,
            json,
            dot,
        } => enumerate(max_blowups, json, dot),
        Command::Check { config, json } => check(&config, json),
        Command::Examples { json } => examples(json),
        Command::Toric(ToricCommand::ListGorenstein { json }) => list_gorenstein(json),
        Command::Toric(ToricCommand::Eliminate { case, trace, json }) => {
            eliminate_cmd(&case, trace, json)
        }
        Command::Toric(ToricCommand::Foliation { case, ray, json }) => {
            foliation_cmd(&case, ray, json)
        }
        Command::Singularities { config, json, dot } => singularities(&config, json, dot),
        Command::Fsing { graph, json } => fsing(&graph, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verbose = cli.verbose;
    let start = Instant::now();
    let outcome = run(cli);
    if verbose {
        eprintln!("elapsed: {:?}", start.elapsed());
    }
    match outcome {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
