mod check;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use csets_core::io::{
    parse_chain, parse_coloring, parse_family, parse_generators, parse_matrix, parse_set_spec, parse_trace, parse_word,
    ColoringFile,
};
use csets_core::{
    columns_condition, cst_trace, entering_times, enumerate_solutions, essential_chain_check, fs_mono_witness,
    indicator_word, j_witness, monochromatic_solution, partition_reduction, solve_in_set, strong_prox_times,
    vdw_witness, verify_certificate, verify_cst, Companion, CstOutcome, Cylinder, Engine, FilterVerdict, RamseyVerdict,
    SymbolicWord, WindowSet,
};
use serde_json::json;

use report::{read, Input, Outcome, Report};

#[derive(Parser)]
#[command(name = "csets", version, about = "Finite-window witnesses for set classes, Rado systems, J-sets and symbolic shifts")]
struct Cli {
    /// Worker threads for the parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Densities, runs, gaps and IP/block witnesses of a set.
    Detect(DetectArgs),
    /// Dual, filter and Ramsey checks on a finite family.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Columns condition and solutions of A x = 0.
    #[command(subcommand)]
    Rado(RadoCmd),
    /// Monochromatic k-term arithmetic progression.
    Vdw(ColoringArgs),
    /// Monochromatic finite sums of k generators.
    Hindman(ColoringArgs),
    /// J-set witnesses and the two-cell reduction.
    #[command(subcommand)]
    Jset(JsetCmd),
    /// Entering times, proximality times and chain certificates.
    #[command(subcommand)]
    Sym(SymCmd),
    /// Central sets trace construction and verification.
    #[command(subcommand)]
    Cst(CstCmd),
}

#[derive(Args)]
struct DetectArgs {
    set: PathBuf,
    /// Interval width for the Banach density.
    #[arg(long, default_value_t = 10)]
    width: usize,
    /// Gap bound for the piecewise syndetic scan.
    #[arg(long, default_value_t = 1)]
    gap: usize,
    /// Interval length for the piecewise syndetic scan (skipped if absent).
    #[arg(long)]
    run: Option<usize>,
    /// Number of IP generators to look for.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Base set for the block witness.
    #[arg(long, requires = "block_depth")]
    block_base: Option<PathBuf>,
    #[arg(long, requires = "block_base")]
    block_depth: Option<usize>,
}

#[derive(Subcommand)]
enum FamilyCmd {
    Dual { family: PathBuf },
    Filter { family: PathBuf },
    Ramsey { family: PathBuf },
}

#[derive(Subcommand)]
enum RadoCmd {
    /// Decide the columns condition.
    Check { matrix: PathBuf },
    /// Monochromatic solution under a coloring, or all solutions in [1, bound].
    Solve {
        matrix: PathBuf,
        #[arg(long, conflicts_with = "bound", required_unless_present = "bound")]
        coloring: Option<PathBuf>,
        #[arg(long)]
        bound: Option<usize>,
        /// Solutions listed in the report when enumerating.
        #[arg(long, default_value_t = 100)]
        limit: usize,
        /// Skip constant solutions.
        #[arg(long)]
        nontrivial: bool,
    },
    /// A solution with every entry in a set.
    Inset {
        matrix: PathBuf,
        set: PathBuf,
        #[arg(long)]
        nontrivial: bool,
    },
}

#[derive(Args)]
struct ColoringArgs {
    #[arg(long)]
    coloring: PathBuf,
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand)]
enum JsetCmd {
    Witness {
        set: PathBuf,
        gens: PathBuf,
    },
    Reduce {
        f1: PathBuf,
        f2: PathBuf,
        gens: PathBuf,
        /// Generators per block of the blown-up system.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum SymCmd {
    Enter {
        /// Word file, or a set file with --from-set.
        input: PathBuf,
        #[arg(long)]
        cylinder: String,
        #[arg(long)]
        from_set: bool,
    },
    Prox {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        from_set: bool,
    },
    Chain {
        certificate: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum YMode {
    /// y = x.
    #[value(name = "self")]
    SelfWord,
    /// y = a shift of x with a frequently returning prefix.
    Auto,
}

#[derive(Subcommand)]
enum CstCmd {
    Run {
        set: PathBuf,
        gens: PathBuf,
        #[arg(long)]
        rounds: usize,
        #[arg(long, value_enum, default_value = "self", conflicts_with = "y_word")]
        y: YMode,
        /// Companion word file.
        #[arg(long)]
        y_word: Option<PathBuf>,
        /// Prefix length compared when --y auto scans shifts.
        #[arg(long, default_value_t = 4)]
        y_depth: usize,
        /// Use backtracking with this many visited witnesses at most.
        #[arg(long)]
        backtrack: Option<u64>,
    },
    Verify {
        set: PathBuf,
        gens: PathBuf,
        trace: PathBuf,
    },
}

const AUTO_CANDIDATES: usize = 256;

fn set_of(input: &Input) -> Result<WindowSet> {
    parse_set_spec(&input.text).with_context(|| input.path.clone())
}

fn coloring_of(input: &Input) -> Result<ColoringFile> {
    parse_coloring(&input.text).with_context(|| input.path.clone())
}

fn word_or_set(input: &Input, from_set: bool) -> Result<SymbolicWord> {
    if from_set {
        Ok(indicator_word(&set_of(input)?))
    } else {
        parse_word(&input.text).with_context(|| input.path.clone())
    }
}

fn found(ok: bool) -> Outcome {
    if ok {
        Outcome::Witness
    } else {
        Outcome::None
    }
}

fn decided(ok: bool) -> Outcome {
    if ok {
        Outcome::True
    } else {
        Outcome::False
    }
}

fn detect(a: &DetectArgs) -> Result<i32> {
    let input = read(&a.set)?;
    let base_input = a.block_base.as_deref().map(read).transpose()?;
    let set = set_of(&input)?;
    let base = base_input.as_ref().map(set_of).transpose()?;

    let width = a.width.min(set.window());
    let density = set.density_profile(width)?;
    let run = set.longest_run_at();
    let pws = a.run.map(|l| set.pws_witness(a.gap, l)).transpose()?;
    let ip = set.ip_witness(a.depth);
    let block = match (&base, a.block_depth) {
        (Some(b), Some(k)) => Some(set.block_witness(b, k)?),
        _ => None,
    };

    let mut verified = ip.as_ref().is_none_or(|xs| check::sums_inside(&set, xs));
    if let (Some(Some(start)), Some(l)) = (pws, a.run) {
        verified &= check::gap_bounded(&set, start, a.gap, l);
    }
    if let (Some(Some(shifts)), Some(b)) = (&block, &base) {
        verified &= check::block_shifts(&set, b, shifts);
    }
    let mut inputs = vec![&input];
    inputs.extend(base_input.as_ref());
    let witness = json!({
        "window": set.window(),
        "size": set.len(),
        "upper_density": density.upper.to_string(),
        "banach_density": density.banach.to_string(),
        "banach_width": density.width,
        "banach_start": density.banach_start,
        "longest_run": run.map_or(0, |(_, l)| l),
        "longest_run_start": run.map(|(s, _)| s),
        "max_gap": set.max_gap(),
        "pws_start": pws.flatten(),
        "ip_generators": ip,
        "block_shifts": block.flatten(),
    });
    Ok(Report::new("detect", &inputs)
        .param("width", width)
        .param("gap", a.gap)
        .param("run", a.run)
        .param("depth", a.depth)
        .param("block_depth", a.block_depth)
        .outcome(Outcome::Witness)
        .witness(&witness)
        .verified(verified)
        .emit())
}

fn family(cmd: &FamilyCmd) -> Result<i32> {
    let (op, path) = match cmd {
        FamilyCmd::Dual { family } => ("family dual", family),
        FamilyCmd::Filter { family } => ("family filter", family),
        FamilyCmd::Ramsey { family } => ("family ramsey", family),
    };
    let input = read(path)?;
    let fam = parse_family(&input.text).with_context(|| input.path.clone())?;
    let report = Report::new(op, &[&input]).param("universe", fam.universe());
    Ok(match cmd {
        FamilyCmd::Dual { .. } => {
            let d = fam.dual()?;
            report
                .outcome(Outcome::Witness)
                .witness(&json!({ "universe": d.universe(), "generators": d.minimal_sets() }))
                .verified(check::dual(&fam, &d))
                .emit()
        }
        FamilyCmd::Filter { .. } => {
            let v = fam.is_filter()?;
            match &v {
                FilterVerdict::Filter => report.outcome(Outcome::True).emit(),
                FilterVerdict::NotFilter { first, second, intersection } => {
                    let ok = check::filter_counterexample(&fam, first, second, intersection);
                    report.outcome(Outcome::False).witness(&v).verified(ok).emit()
                }
            }
        }
        FamilyCmd::Ramsey { .. } => {
            let v = fam.ramsey_check()?;
            match &v {
                RamseyVerdict::Ramsey => report.outcome(Outcome::True).emit(),
                RamseyVerdict::NotRamsey { set, part1, part2 } => {
                    let ok = check::ramsey_counterexample(&fam, set, part1, part2);
                    report.outcome(Outcome::False).witness(&v).verified(ok).emit()
                }
            }
        }
    })
}

fn rado(cmd: &RadoCmd) -> Result<i32> {
    match cmd {
        RadoCmd::Check { matrix } => {
            let input = read(matrix)?;
            let a = parse_matrix(&input.text).with_context(|| input.path.clone())?;
            let report = Report::new("rado check", &[&input]).param("rows", a.rows()).param("cols", a.cols());
            Ok(match columns_condition(&a)? {
                Some(cert) => {
                    let ok = verify_certificate(&a, &cert)?;
                    report.outcome(Outcome::Witness).witness(&cert).verified(ok).emit()
                }
                None => report.emit(),
            })
        }
        RadoCmd::Solve { matrix, coloring, bound, limit, nontrivial } => {
            let input = read(matrix)?;
            let c_input = coloring.as_deref().map(read).transpose()?;
            let a = parse_matrix(&input.text).with_context(|| input.path.clone())?;
            let c = c_input.as_ref().map(coloring_of).transpose()?;
            let mut inputs = vec![&input];
            inputs.extend(c_input.as_ref());
            let report = Report::new("rado solve", &inputs).param("nontrivial", nontrivial);
            match (c, bound) {
                (Some(c), _) => {
                    let report = report.param("window", c.coloring.window());
                    Ok(match monochromatic_solution(&a, &c.coloring, *nontrivial) {
                        Some((color, x)) => {
                            let ok = check::mono_solution(&a, &c.coloring, color, &x, *nontrivial);
                            let label = c.labels.as_ref().map(|l| l[color as usize].clone());
                            report
                                .outcome(Outcome::Witness)
                                .witness(&json!({ "x": x, "color": color, "label": label }))
                                .verified(ok)
                                .emit()
                        }
                        None => report.emit(),
                    })
                }
                (None, Some(n)) => {
                    let all = enumerate_solutions(&a, *n, *nontrivial)?;
                    let full = WindowSet::full(*n);
                    let ok = all.iter().all(|x| check::solution_in(&a, &full, x, *nontrivial));
                    let shown = &all[..all.len().min(*limit)];
                    let report = report.param("bound", n).param("limit", limit).extra("count", all.len());
                    Ok(if all.is_empty() {
                        report.emit()
                    } else {
                        report
                            .outcome(Outcome::Witness)
                            .witness(&json!({ "solutions": shown, "truncated": shown.len() < all.len() }))
                            .verified(ok)
                            .emit()
                    })
                }
                (None, None) => bail!("one of --coloring or --bound is required"),
            }
        }
        RadoCmd::Inset { matrix, set, nontrivial } => {
            let input = read(matrix)?;
            let s_input = read(set)?;
            let a = parse_matrix(&input.text).with_context(|| input.path.clone())?;
            let s = set_of(&s_input)?;
            let report = Report::new("rado inset", &[&input, &s_input]).param("nontrivial", nontrivial);
            Ok(match solve_in_set(&a, &s, *nontrivial) {
                Some(x) => {
                    let ok = check::solution_in(&a, &s, &x, *nontrivial);
                    report.outcome(Outcome::Witness).witness(&json!({ "x": x })).verified(ok).emit()
                }
                None => report.emit(),
            })
        }
    }
}

fn vdw(a: &ColoringArgs) -> Result<i32> {
    let input = read(&a.coloring)?;
    let c = coloring_of(&input)?;
    let report = Report::new("vdw", &[&input]).param("k", a.k).param("window", c.coloring.window());
    Ok(match vdw_witness(&c.coloring, a.k)? {
        Some(p) => {
            let ok = check::progression(&c.coloring, &p, a.k);
            report.outcome(Outcome::Witness).witness(&p).verified(ok).emit()
        }
        None => report.emit(),
    })
}

fn hindman(a: &ColoringArgs) -> Result<i32> {
    let input = read(&a.coloring)?;
    let c = coloring_of(&input)?;
    let report = Report::new("hindman", &[&input]).param("k", a.k).param("window", c.coloring.window());
    Ok(match fs_mono_witness(&c.coloring, a.k)? {
        Some((xs, color)) => {
            let ok = check::finite_sums(&c.coloring, &xs, color);
            report.outcome(Outcome::Witness).witness(&json!({ "xs": xs, "color": color })).verified(ok).emit()
        }
        None => report.emit(),
    })
}

fn jset(cmd: &JsetCmd) -> Result<i32> {
    match cmd {
        JsetCmd::Witness { set, gens } => {
            let s_input = read(set)?;
            let g_input = read(gens)?;
            let f = set_of(&s_input)?;
            let g = parse_generators(&g_input.text).with_context(|| g_input.path.clone())?;
            let report = Report::new("jset witness", &[&s_input, &g_input]).param("m", g.dim()).param("k", g.len());
            Ok(match j_witness(&f, &g)? {
                Some(w) => {
                    let t = w.verify(&f, &g)?;
                    report.outcome(Outcome::Witness).witness(&w).verified(t.ok).extra("transcript", &t.components).emit()
                }
                None => report.emit(),
            })
        }
        JsetCmd::Reduce { f1, f2, gens, n } => {
            let inputs = [read(f1)?, read(f2)?, read(gens)?];
            let a = set_of(&inputs[0])?;
            let b = set_of(&inputs[1])?;
            let g = parse_generators(&inputs[2].text).with_context(|| inputs[2].path.clone())?;
            let report = Report::new("jset reduce", &[&inputs[0], &inputs[1], &inputs[2]]).param("n", n);
            Ok(match partition_reduction(&a, &b, &g, *n)? {
                Some(red) => {
                    let cell = if red.index == 1 { &a } else { &b };
                    let t = red.witness.verify(cell, &g)?;
                    let ok = t.ok && red.witness.r > red.witness.alpha.len();
                    report.outcome(Outcome::Witness).witness(&red).verified(ok).extra("transcript", &t.components).emit()
                }
                None => report.emit(),
            })
        }
    }
}

fn sym(cmd: &SymCmd) -> Result<i32> {
    match cmd {
        SymCmd::Enter { input, cylinder, from_set } => {
            let inp = read(input)?;
            let x = word_or_set(&inp, *from_set)?;
            let u = Cylinder::parse(cylinder)?;
            let times = entering_times(&x, &u)?;
            let ok = check::entering(&x, &u, &times);
            let report = Report::new("sym enter", &[&inp]).param("cylinder", cylinder).param("from_set", from_set);
            Ok(report.outcome(found(!times.is_empty())).witness(&times).verified(ok).emit())
        }
        SymCmd::Prox { x, y, depth, from_set } => {
            let xi = read(x)?;
            let yi = read(y)?;
            let xw = word_or_set(&xi, *from_set)?;
            let yw = word_or_set(&yi, *from_set)?;
            let times = strong_prox_times(&xw, &yw, *depth)?;
            let ok = check::prox(&xw, &yw, *depth, &times);
            let report = Report::new("sym prox", &[&xi, &yi]).param("depth", depth).param("from_set", from_set);
            Ok(report.outcome(found(!times.is_empty())).witness(&times).verified(ok).emit())
        }
        SymCmd::Chain { certificate } => {
            let input = read(certificate)?;
            let (chain, links) = parse_chain(&input.text).with_context(|| input.path.clone())?;
            let v = essential_chain_check(&chain, &links)?;
            let report = Report::new("sym chain", &[&input]).param("length", chain.len()).param("links", links.len());
            Ok(report.outcome(decided(v.ok)).witness(&v).emit())
        }
    }
}

fn cst(cmd: &CstCmd) -> Result<i32> {
    match cmd {
        CstCmd::Run { set, gens, rounds, y, y_word, y_depth, backtrack } => {
            let s_input = read(set)?;
            let g_input = read(gens)?;
            let y_input = y_word.as_deref().map(read).transpose()?;
            let f = set_of(&s_input)?;
            let g = parse_generators(&g_input.text).with_context(|| g_input.path.clone())?;
            let y_given = y_input.as_ref().map(|i| parse_word(&i.text).with_context(|| i.path.clone())).transpose()?;

            let x = indicator_word(&f);
            let companion = match (y_given, y) {
                (Some(w), _) => Companion::explicit(w)?,
                (None, YMode::SelfWord) => Companion::self_word(&x)?,
                (None, YMode::Auto) => Companion::auto_shift(&x, *y_depth, AUTO_CANDIDATES)?,
            };
            let engine = backtrack.map_or(Engine::Greedy, |budget| Engine::Backtracking { budget });
            let mut inputs = vec![&s_input, &g_input];
            inputs.extend(y_input.as_ref());
            let report = Report::new("cst run", &inputs).param("rounds", rounds).param("engine", engine);
            Ok(match cst_trace(&x, &companion, &g, *rounds, engine)? {
                CstOutcome::Trace(t) => {
                    let v = verify_cst(&f, &g, &t)?;
                    report
                        .outcome(Outcome::Witness)
                        .witness(&json!({ "y_choice": companion, "steps": t.steps }))
                        .verified(v.ok)
                        .extra("checked_beta_count", v.checked_beta_count)
                        .extra("verification", &v)
                        .emit()
                }
                CstOutcome::None(why) => report.extra("y_choice", &companion).extra("failure", &why).emit(),
            })
        }
        CstCmd::Verify { set, gens, trace } => {
            let inputs = [read(set)?, read(gens)?, read(trace)?];
            let f = set_of(&inputs[0])?;
            let g = parse_generators(&inputs[1].text).with_context(|| inputs[1].path.clone())?;
            let t = parse_trace(&inputs[2].text).with_context(|| inputs[2].path.clone())?;
            let v = verify_cst(&f, &g, &t)?;
            let report = Report::new("cst verify", &[&inputs[0], &inputs[1], &inputs[2]]).param("rounds", t.rounds());
            Ok(report
                .outcome(decided(v.ok))
                .witness(&v)
                .verified(v.ok)
                .extra("checked_beta_count", v.checked_beta_count)
                .emit())
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match &cli.command {
        Command::Detect(a) => detect(a),
        Command::Family(c) => family(c),
        Command::Rado(c) => rado(c),
        Command::Vdw(a) => vdw(a),
        Command::Hindman(a) => hindman(a),
        Command::Jset(c) => jset(c),
        Command::Sym(c) => sym(c),
        Command::Cst(c) => cst(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
