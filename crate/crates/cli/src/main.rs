use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use nearlab::catalog::{read_catalog, read_structure, write_catalog};
use nearlab::derivation::{enumerate_mult_derivations, is_additive};
use nearlab::enumerate::{enumerate_groups, enumerate_nearrings_with, NearRingSearch};
use nearlab::identity::{holds_for_all_with_center, parse_identity};
use nearlab::report::{sweep, SweepOptions};
use nearlab::theorems::{hunt_at_order, hunt_counterexamples, registry, spec_by_id, SpecId, TheoremSpec};
use nearlab::{NearRing, StructureError};

/// Finite near-rings, multiplicative derivations, and exhaustive theorem checks.
#[derive(Debug, Parser)]
#[command(name = "nearlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a structure file and print its structural predicates.
    Check { file: PathBuf },
    /// List the multiplicative derivations of a structure.
    Derivations {
        file: PathBuf,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        non_additive_only: bool,
    },
    /// Check registry statements on a structure file or a directory of them.
    Theorems {
        path: PathBuf,
        /// Restrict to these spec ids (repeatable).
        #[arg(long = "spec")]
        specs: Vec<String>,
        /// Also test this identity on every derivation.
        #[arg(long)]
        identity: Option<String>,
        /// Omit timings.
        #[arg(long)]
        canonical: bool,
    },
    /// Write every near-ring of the given order to a directory.
    Enumerate {
        #[arg(long)]
        order: usize,
        /// Only this additive group (e.g. Z4, Z2xZ2, S3).
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        up_to_iso: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for structures violating a statement once hypotheses are dropped.
    Hunt {
        #[arg(long)]
        spec: String,
        /// Hypothesis to drop (repeatable).
        #[arg(long = "drop")]
        drop: Vec<String>,
        /// Only search this order; by default orders 1 to 4 in turn.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value_t = 5)]
        max: usize,
        /// Search these structure files first.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Sweep every statement over a directory and emit the verdicts.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        canonical: bool,
        #[arg(long = "spec")]
        specs: Vec<String>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Outcome of a successful run.
enum Outcome {
    Clean,
    Refuted,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Refuted) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Check { file } => check(&file),
        Command::Derivations {
            file,
            count_only,
            non_additive_only,
        } => derivations(&file, count_only, non_additive_only),
        Command::Theorems {
            path,
            specs,
            identity,
            canonical,
        } => theorems(&path, &specs, identity.as_deref(), canonical),
        Command::Enumerate {
            order,
            group,
            up_to_iso,
            out,
        } => enumerate(order, group.as_deref(), up_to_iso, &out),
        Command::Hunt {
            spec,
            drop,
            order,
            max,
            input,
        } => hunt(&spec, &drop, order, max, input.as_deref()),
        Command::Report {
            input,
            format,
            canonical,
            specs,
            out,
        } => report(&input, format, canonical, &specs, out.as_deref()),
    }
}

fn select_specs(ids: &[String]) -> Result<Vec<TheoremSpec>> {
    if ids.is_empty() {
        return Ok(registry());
    }
    ids.iter()
        .map(|s| Ok(spec_by_id(s.parse::<SpecId>()?)))
        .collect()
}

fn load(path: &Path) -> Result<Vec<NearRing>> {
    if path.is_dir() {
        Ok(read_catalog(path)?)
    } else {
        Ok(vec![read_structure(path)?])
    }
}

fn check(file: &Path) -> Result<Outcome> {
    let n = match read_structure(file) {
        Ok(n) => n,
        Err(e) => {
            if let Some(StructureError::Violations(v)) = find_violations(&e) {
                let mut out = io::stdout().lock();
                writeln!(out, "invalid: {} axiom violation(s)", v.len())?;
                for violation in v {
                    writeln!(out, "  {violation}")?;
                }
            }
            return Err(e.into());
        }
    };
    let p = n.structural_predicates();
    let mut out = io::stdout().lock();
    writeln!(out, "name: {}", n.name().unwrap_or("-"))?;
    writeln!(out, "order: {}", n.order())?;
    writeln!(out, "zero_symmetric: {}", p.zero_symmetric)?;
    match n.three_prime_witness() {
        None => writeln!(out, "three_prime: true")?,
        Some((x, y)) => writeln!(out, "three_prime: false (x={x}, y={y})")?,
    }
    writeln!(out, "two_torsion_free: {}", p.two_torsion_free)?;
    writeln!(out, "abelian_addition: {}", p.abelian_addition)?;
    writeln!(out, "commutative_mul: {}", p.commutative_mul)?;
    writeln!(out, "right_distributive: {}", p.right_distributive)?;
    writeln!(out, "commutative_ring: {}", p.is_commutative_ring)?;
    writeln!(out, "center: {:?}", n.center())?;
    match n.semigroup_ideal_in_center() {
        Some(i) => writeln!(out, "central_semigroup_ideal: {i:?}")?,
        None => writeln!(out, "central_semigroup_ideal: none")?,
    }
    writeln!(out, "derivations: {}", enumerate_mult_derivations(&n).len())?;
    Ok(Outcome::Clean)
}

fn find_violations(e: &nearlab::catalog::CatalogError) -> Option<&StructureError> {
    use nearlab::catalog::CatalogError;
    match e {
        CatalogError::Invalid(s) => Some(s),
        CatalogError::InFile { source, .. } => find_violations(source),
        _ => None,
    }
}

fn derivations(file: &Path, count_only: bool, non_additive_only: bool) -> Result<Outcome> {
    let n = read_structure(file)?;
    let ds: Vec<_> = enumerate_mult_derivations(&n)
        .into_iter()
        .filter(|d| !non_additive_only || !is_additive(&n, d))
        .collect();
    let mut out = io::stdout().lock();
    if count_only {
        writeln!(out, "{}", ds.len())?;
    } else {
        for d in &ds {
            writeln!(out, "{d}")?;
        }
    }
    Ok(Outcome::Clean)
}

fn theorems(path: &Path, specs: &[String], identity: Option<&str>, canonical: bool) -> Result<Outcome> {
    let catalog = load(path)?;
    let identity = identity
        .map(|text| parse_identity(text).with_context(|| format!("--identity {text:?}")))
        .transpose()?;
    let specs = if specs.is_empty() && identity.is_some() {
        Vec::new()
    } else {
        select_specs(specs)?
    };
    let mut out = io::stdout().lock();

    let report = sweep(&catalog, &specs, SweepOptions { canonical, ..Default::default() });
    for row in &report.rows {
        let d = row.derivation.map_or_else(|| "-".to_string(), |i| format!("d#{i}"));
        write!(out, "{} {} {} {}", row.structure, row.spec, d, row.status)?;
        if let Some(w) = &row.witness {
            write!(out, " {w}")?;
        }
        if let Some(t) = row.timing_us {
            write!(out, " ({t}us)")?;
        }
        writeln!(out)?;
    }
    if !specs.is_empty() {
        let c = report.counts();
        writeln!(
            out,
            "verdicts: {} verified, {} skipped, {} refuted",
            c.verified, c.skipped, c.refuted
        )?;
    }

    if let Some(id) = identity {
        let (mut holds, mut fails) = (0, 0);
        for n in &catalog {
            let center = n.center_mask();
            let name = n.name().unwrap_or("-");
            for (i, d) in enumerate_mult_derivations(n).iter().enumerate() {
                match holds_for_all_with_center(n, d, &id, &center) {
                    Ok(()) => {
                        holds += 1;
                        writeln!(out, "{name} identity d#{i} {d} holds")?;
                    }
                    Err(env) => {
                        fails += 1;
                        writeln!(out, "{name} identity d#{i} {d} fails at {env}")?;
                    }
                }
            }
        }
        writeln!(out, "identity {id}: holds for {holds}, fails for {fails}")?;
    }

    Ok(if report.has_refuted() {
        Outcome::Refuted
    } else {
        Outcome::Clean
    })
}

fn enumerate(order: usize, group: Option<&str>, up_to_iso: bool, out_dir: &Path) -> Result<Outcome> {
    let groups = enumerate_groups(order)?;
    let selected: Vec<_> = match group {
        None => groups,
        Some(label) => {
            let wanted = group_key(label);
            let labels: Vec<String> = groups.iter().map(|g| g.label().to_string()).collect();
            let hit: Vec<_> = groups
                .into_iter()
                .filter(|g| g.label().to_ascii_lowercase() == wanted)
                .collect();
            if hit.is_empty() {
                bail!("no group {label:?} of order {order} (available: {})", labels.join(", "));
            }
            hit
        }
    };
    let opts = NearRingSearch {
        up_to_isomorphism: up_to_iso,
    };
    let catalog: Vec<NearRing> = selected
        .iter()
        .flat_map(|g| enumerate_nearrings_with(g, opts))
        .collect();
    let paths = write_catalog(&catalog, out_dir)?;
    println!("wrote {} structures to {}", paths.len(), out_dir.display());
    Ok(Outcome::Clean)
}

/// Case-folded group label, with the usual names for the Klein four-group.
fn group_key(label: &str) -> String {
    match label.to_ascii_lowercase().as_str() {
        "k4" | "v4" => "z2xz2".to_string(),
        other => other.to_string(),
    }
}

fn hunt(spec: &str, drop: &[String], order: Option<usize>, max: usize, input: Option<&Path>) -> Result<Outcome> {
    let spec = spec_by_id(spec.parse::<SpecId>()?);
    let existing = match input {
        Some(dir) => load(dir)?,
        None => Vec::new(),
    };
    let witnesses = match order {
        Some(n) => hunt_at_order(&existing, &spec, drop, n, max)?,
        None => {
            let mut found = hunt_counterexamples(&existing, &spec, drop, max)?;
            for n in 1..=4 {
                if found.len() >= max {
                    break;
                }
                found.extend(hunt_at_order(&[], &spec, drop, n, max - found.len())?);
            }
            found
        }
    };
    let mut out = io::stdout().lock();
    if witnesses.is_empty() {
        writeln!(out, "no counterexample found")?;
    }
    for w in &witnesses {
        writeln!(out, "{w}")?;
    }
    Ok(Outcome::Clean)
}

fn report(input: &Path, format: Format, canonical: bool, specs: &[String], out: Option<&Path>) -> Result<Outcome> {
    let catalog = read_catalog(input)?;
    let specs = select_specs(specs)?;
    let report = sweep(&catalog, &specs, SweepOptions { canonical, ..Default::default() });
    let text = match format {
        Format::Json => report.to_jsonl(),
        Format::Csv => report.to_csv(),
    };
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    for row in report.refuted() {
        eprintln!(
            "REFUTED {} {} {:?}: {}",
            row.structure,
            row.spec,
            row.derivation,
            row.witness.as_ref().map(ToString::to_string).unwrap_or_default()
        );
    }
    Ok(if report.has_refuted() {
        Outcome::Refuted
    } else {
        Outcome::Clean
    })
}
