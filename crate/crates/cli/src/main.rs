use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use mdtree::constants::{c_general_with, c_gw, c_mary, c_rich_with, c_rrt_with, ConstantResult, QuadratureSpec};
use mdtree::experiments::{
    compare_to_constant, export, reference_constant, run_experiment, ExperimentConfig, ExportFormat, ModelSpec,
    Statistic,
};
use mdtree::fringe::{count_subtree_property, fringe_size_counts, Property};
use mdtree::generators::{simulate_cmj, OffspringPmf, PAParams, RngSpec, StopRule};
use mdtree::metric_dimension::{brute_force_md_with_cap, md_report, DEFAULT_BRUTE_FORCE_CAP};
use mdtree::verify::{run_suite, Suite, DEFAULT_SEED};
use mdtree::RootedTree;

#[derive(Parser)]
#[command(name = "mdtree", version, about = "Metric dimension of random trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random tree and write it in the parent-list text format.
    Generate {
        #[arg(long, value_enum)]
        model: GenModel,
        /// Attachment parameter rho (pa, cmj).
        #[arg(long)]
        rho: Option<f64>,
        /// Attachment parameter chi in {-1, 0, 1} (pa, cmj).
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i8>,
        /// Offspring distribution file for gw (default Poisson(1), cut at 30).
        #[arg(long)]
        pmf: Option<PathBuf>,
        /// Number of vertices.
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overwrite an existing output file.
        #[arg(long)]
        force: bool,
    },
    /// Metric dimension of a tree file.
    Md {
        file: PathBuf,
        /// Also search for a minimum resolving set by brute force.
        #[arg(long)]
        witness: bool,
        /// Largest tree the brute-force search accepts.
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        cap: usize,
    },
    /// Count vertices whose subtree has a property.
    Fringe {
        file: PathBuf,
        #[arg(long, value_enum)]
        property: PropertyArg,
        /// Also print the subtree-size histogram.
        #[arg(long)]
        histogram: bool,
    },
    /// Evaluate a limiting constant of beta/n.
    Constant {
        #[arg(long, value_enum)]
        model: ConstantModel,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i8>,
        /// Arity for the m-ary model.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        pmf: Option<PathBuf>,
        /// Relative quadrature tolerance (absolute tolerance is 1% of it).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a seeded Monte Carlo experiment.
    Experiment {
        #[arg(long, value_enum)]
        model: ExpModel,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i8>,
        #[arg(long)]
        pmf: Option<PathBuf>,
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Worker threads.
        #[arg(long, env = "MDTREE_THREADS", default_value_t = 1)]
        threads: usize,
        #[arg(long, value_enum, default_value_t = StatArg::Beta)]
        stat: StatArg,
        /// Subtree size for --stat fringe.
        #[arg(long)]
        fringe_size: Option<usize>,
        /// Results file (format from --format, else from the extension).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Compare the mean with the limiting constant; exit 1 on failure.
        #[arg(long)]
        compare: bool,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
        #[arg(long)]
        force: bool,
    },
    /// Run an acceptance suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenModel {
    Gw,
    Uniform,
    Pa,
    Cmj,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpModel {
    Gw,
    Uniform,
    Pa,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstantModel {
    Gw,
    Mary,
    Rrt,
    Rich,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Pl,
    Pk,
    Line,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatArg {
    Beta,
    Pl,
    Pk,
    Fringe,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Slater,
    Embedding,
    Fringe,
    Constants,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn pa_params(rho: Option<f64>, chi: Option<i8>) -> Result<PAParams> {
    let (Some(rho), Some(chi)) = (rho, chi) else { bail!("--rho and --chi are required for this model") };
    Ok(PAParams::new(rho, chi)?)
}

fn reject(flag: &str, present: bool, model: &str) -> Result<()> {
    if present {
        bail!("{flag} does not apply to model {model}");
    }
    Ok(())
}

fn load_pmf(path: Option<&Path>) -> Result<OffspringPmf> {
    match path {
        Some(p) => OffspringPmf::read_file(p).with_context(|| format!("reading {}", p.display())),
        None => Ok(OffspringPmf::poisson_critical()),
    }
}

fn check_output(path: &Path, force: bool) -> Result<()> {
    if path.exists() && !force {
        bail!("{} exists; pass --force to overwrite", path.display());
    }
    Ok(())
}

fn read_tree(path: &Path) -> Result<RootedTree> {
    RootedTree::read_file(path).with_context(|| format!("reading {}", path.display()))
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Generate { model, rho, chi, pmf, n, seed, out, force } => {
            if let Some(p) = &out {
                check_output(p, force)?;
            }
            if n == 0 {
                bail!("-n must be at least 1");
            }
            let mut rng = RngSpec::new(seed).stream(0);
            let tree = match model {
                GenModel::Gw => {
                    reject("--rho/--chi", rho.is_some() || chi.is_some(), "gw")?;
                    let pmf = load_pmf(pmf.as_deref())?;
                    ModelSpec::Gw(pmf).generate(n, &mut rng)?
                }
                GenModel::Uniform => {
                    reject("--rho/--chi", rho.is_some() || chi.is_some(), "uniform")?;
                    reject("--pmf", pmf.is_some(), "uniform")?;
                    ModelSpec::Uniform.generate(n, &mut rng)?
                }
                GenModel::Pa => {
                    reject("--pmf", pmf.is_some(), "pa")?;
                    ModelSpec::Pa(pa_params(rho, chi)?).generate(n, &mut rng)?
                }
                GenModel::Cmj => {
                    reject("--pmf", pmf.is_some(), "cmj")?;
                    simulate_cmj(pa_params(rho, chi)?, StopRule::FixedSize(n), &mut rng)?.tree
                }
            };
            match out {
                Some(p) => tree.write_file(&p).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{}", tree.to_text()),
            }
            Ok(true)
        }
        Command::Md { file, witness, cap } => {
            let tree = read_tree(&file)?;
            let report = md_report(&tree);
            println!("n\t{}", tree.len());
            println!("beta\t{}", report.beta);
            println!("leaves\t{}", report.leaves.len());
            println!("exterior_major\t{}", report.exterior_major.len());
            println!("is_path\t{}", report.is_path);
            if witness {
                let (beta, set) = brute_force_md_with_cap(&tree, cap)?;
                let set: Vec<String> = set.iter().map(ToString::to_string).collect();
                println!("brute_force_beta\t{beta}");
                println!("witness\t{}", set.join(" "));
                if beta != report.beta {
                    bail!("brute force gives {beta}, formula gives {}", report.beta);
                }
            }
            Ok(true)
        }
        Command::Fringe { file, property, histogram } => {
            let tree = read_tree(&file)?;
            let (name, prop) = match property {
                PropertyArg::Pl => ("pl", Property::Leaf),
                PropertyArg::Pk => ("pk", Property::ExteriorProxy),
                PropertyArg::Line => ("line", Property::Line),
            };
            let count = count_subtree_property(&tree, &prop);
            println!("n\t{}", tree.len());
            println!("{name}\t{count}");
            println!("fraction\t{}", count as f64 / tree.len() as f64);
            if histogram {
                println!("size\tcount");
                for (size, c) in fringe_size_counts(&tree) {
                    println!("{size}\t{c}");
                }
            }
            Ok(true)
        }
        Command::Constant { model, rho, chi, m, pmf, tol } => {
            let spec = match tol {
                Some(t) => QuadratureSpec::new(t, t * 1e-2, QuadratureSpec::default().max_depth)?,
                None => QuadratureSpec::default(),
            };
            let result: ConstantResult = match model {
                ConstantModel::Gw => {
                    reject("--rho/--chi/--m", rho.is_some() || chi.is_some() || m.is_some(), "gw")?;
                    c_gw(&load_pmf(pmf.as_deref())?)?
                }
                ConstantModel::Mary => {
                    reject("--rho/--chi/--pmf", rho.is_some() || chi.is_some() || pmf.is_some(), "mary")?;
                    c_mary(m.context("--m is required for model mary")?)?
                }
                ConstantModel::Rrt => {
                    reject(
                        "--rho/--chi/--m/--pmf",
                        rho.is_some() || chi.is_some() || m.is_some() || pmf.is_some(),
                        "rrt",
                    )?;
                    c_rrt_with(&spec)?
                }
                ConstantModel::Rich => {
                    reject("--chi/--m/--pmf", chi.is_some() || m.is_some() || pmf.is_some(), "rich")?;
                    c_rich_with(rho.context("--rho is required for model rich")?, &spec)?
                }
                ConstantModel::General => {
                    reject("--m/--pmf", m.is_some() || pmf.is_some(), "general")?;
                    c_general_with(pa_params(rho, chi)?, &spec)?
                }
            };
            println!("value\t{}", result.value);
            println!("abs_error_estimate\t{:e}", result.abs_error_estimate);
            println!("method\t{}", result.method.as_str());
            Ok(true)
        }
        Command::Experiment {
            model,
            rho,
            chi,
            pmf,
            n,
            trials,
            seed,
            threads,
            stat,
            fringe_size,
            out,
            format,
            compare,
            tol,
            force,
        } => {
            let model = match model {
                ExpModel::Gw => {
                    reject("--rho/--chi", rho.is_some() || chi.is_some(), "gw")?;
                    ModelSpec::Gw(load_pmf(pmf.as_deref())?)
                }
                ExpModel::Uniform => {
                    reject("--rho/--chi/--pmf", rho.is_some() || chi.is_some() || pmf.is_some(), "uniform")?;
                    ModelSpec::Uniform
                }
                ExpModel::Pa => {
                    reject("--pmf", pmf.is_some(), "pa")?;
                    ModelSpec::Pa(pa_params(rho, chi)?)
                }
            };
            let statistic = match (stat, fringe_size) {
                (StatArg::Fringe, Some(k)) => Statistic::FringeFraction(k),
                (StatArg::Fringe, None) => bail!("--stat fringe needs --fringe-size"),
                (_, Some(_)) => bail!("--fringe-size applies only to --stat fringe"),
                (StatArg::Beta, None) => Statistic::BetaOverN,
                (StatArg::Pl, None) => Statistic::PlFraction,
                (StatArg::Pk, None) => Statistic::PkFraction,
            };
            if tol.is_nan() || tol <= 0.0 {
                bail!("--tol must be positive");
            }
            let target = match &out {
                Some(p) => {
                    check_output(p, force)?;
                    let fmt = match format {
                        Some(FormatArg::Csv) => ExportFormat::Csv,
                        Some(FormatArg::Json) => ExportFormat::Json,
                        None if p.extension().is_some_and(|e| e == "json") => ExportFormat::Json,
                        None => ExportFormat::Csv,
                    };
                    Some((p.clone(), fmt))
                }
                None if format.is_some() => bail!("--format needs --out"),
                None => None,
            };
            let config = ExperimentConfig {
                statistic,
                workers: threads,
                ..ExperimentConfig::new(model.clone(), n, trials, seed)
            };
            config.validate()?;
            let reference = if compare {
                Some(
                    reference_constant(&model, statistic)?
                        .context("no reference constant for this model and statistic")?,
                )
            } else {
                None
            };
            let summary = run_experiment(&config)?;
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "mean\t{}", summary.mean)?;
            writeln!(stdout, "stddev\t{}", summary.stddev)?;
            writeln!(stdout, "stderr\t{}", summary.stderr)?;
            writeln!(stdout, "ci95\t[{}, {}]", summary.ci_lo, summary.ci_hi)?;
            if let Some(c) = summary.constant {
                writeln!(stdout, "constant\t{c}")?;
            }
            if let Some((path, fmt)) = &target {
                export(std::slice::from_ref(&summary), *fmt, path)?;
            }
            let Some(reference) = reference else { return Ok(true) };
            let cmp = compare_to_constant(&summary, &reference, tol);
            writeln!(stdout, "abs_diff\t{}", cmp.abs_diff)?;
            writeln!(stdout, "within_tol\t{}", cmp.within_tol)?;
            writeln!(stdout, "within_3se\t{}", cmp.within_3se)?;
            writeln!(stdout, "compare\t{}", if cmp.passed() { "PASS" } else { "FAIL" })?;
            Ok(cmp.passed())
        }
        Command::Verify { suite, seed } => {
            let suite = match suite {
                SuiteArg::Slater => Suite::Slater,
                SuiteArg::Embedding => Suite::Embedding,
                SuiteArg::Fringe => Suite::Fringe,
                SuiteArg::Constants => Suite::Constants,
                SuiteArg::All => Suite::All,
            };
            let mut all_ok = true;
            for report in run_suite(suite, seed) {
                let status = if report.passed() { "PASS" } else { "FAIL" };
                println!(
                    "criterion {:>2} {status}  {} ({:.2} s)",
                    report.id,
                    report.title,
                    report.elapsed.as_secs_f64()
                );
                for c in &report.checks {
                    let mark = if c.passed { "ok" } else { "FAIL" };
                    println!("  {mark:<4} {}: expected {}, observed {}", c.name, c.expected, c.observed);
                }
                all_ok &= report.passed();
            }
            Ok(all_ok)
        }
    }
}
