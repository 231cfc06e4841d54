//! Command-line front end. [`dispatch`] takes the argument vector and the
//! three standard streams so it can be driven in-process by tests.

use std::io::{BufRead, Write};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::allocator::{insert_after, insert_before, insert_between, retag_region};
use crate::arithmetic::{self, check_group, build_quotient, GroupCheckConfig, Universe};
use crate::cave::{benchmark_insertions, explore, generate_cave, render_bench, verify_tagging, Policy};
use crate::label::{Bound, EcnTag, Region};
use crate::sorter::{heuristic_sort, SortError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_SORT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ecn", about = "Dense hierarchical order labels", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The m-th of n tags strictly between two bounds (MIN/MAX allowed)
    Between {
        lower: Bound,
        upper: Bound,
        #[arg(short = 'n', long = "count", default_value_t = 1)]
        count: u64,
        #[arg(short = 'm', long = "index", default_value_t = 1)]
        index: u64,
    },
    /// The m-th of n tags above a tag
    After {
        #[arg(allow_hyphen_values = true)]
        tag: EcnTag,
        #[arg(short = 'n', long = "count", default_value_t = 1)]
        count: u64,
        #[arg(short = 'm', long = "index", default_value_t = 1)]
        index: u64,
    },
    /// The m-th of n tags below a tag
    Before {
        #[arg(allow_hyphen_values = true)]
        tag: EcnTag,
        #[arg(short = 'n', long = "count", default_value_t = 1)]
        count: u64,
        #[arg(short = 'm', long = "index", default_value_t = 1)]
        index: u64,
    },
    /// Prints <, = or >
    Compare {
        #[arg(allow_hyphen_values = true)]
        a: EcnTag,
        #[arg(allow_hyphen_values = true)]
        b: EcnTag,
    },
    /// Re-tags the ascending tags read from stdin inside a region
    Retag {
        #[arg(allow_hyphen_values = true)]
        lower: Bound,
        #[arg(allow_hyphen_values = true)]
        upper: Bound,
        #[arg(long, default_value_t = 2)]
        spacing: u64,
    },
    /// Tag arithmetic
    Arith {
        #[command(subcommand)]
        op: ArithOp,
    },
    /// Checks the additive group laws on a tag universe
    GroupCheck {
        #[arg(long, value_enum, default_value_t = UniverseKind::Einheit)]
        universe: UniverseKind,
        /// Einheit depths of the universe
        #[arg(long, value_delimiter = ',', default_value = "0")]
        depth: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also build and verify the quotient by this factor at the first depth
        #[arg(long)]
        factor: Option<u64>,
    },
    /// Heuristic insertion sort of decimal keys read from stdin
    Sort {
        #[arg(long)]
        fallback: bool,
        #[arg(long = "max-iters")]
        max_iters: Option<usize>,
    },
    /// Generates a cave, explores it and prints the visit log
    Simulate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        branch: usize,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// random[:SEED], depth-first or adversarial-dense
        #[arg(long, default_value = "random")]
        policy: String,
    },
    /// Times dense same-point insertion for each count
    Bench {
        #[arg(required = true)]
        counts: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum ArithOp {
    Add {
        #[arg(allow_hyphen_values = true)]
        a: EcnTag,
        #[arg(allow_hyphen_values = true)]
        b: EcnTag,
    },
    /// a - b; with --checked, only defined when b <= a
    Sub {
        #[arg(allow_hyphen_values = true)]
        a: EcnTag,
        #[arg(allow_hyphen_values = true)]
        b: EcnTag,
        #[arg(long)]
        checked: bool,
    },
    Neg {
        #[arg(allow_hyphen_values = true)]
        a: EcnTag,
    },
    /// Length of the segment between two tags
    Length {
        #[arg(allow_hyphen_values = true)]
        a: EcnTag,
        #[arg(allow_hyphen_values = true)]
        b: EcnTag,
    },
    Mul {
        #[arg(allow_hyphen_values = true)]
        a: EcnTag,
        #[arg(allow_hyphen_values = true)]
        p: BigInt,
    },
    Div {
        #[arg(allow_hyphen_values = true)]
        a: EcnTag,
        #[arg(allow_hyphen_values = true)]
        p: BigInt,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UniverseKind {
    Einheit,
    Positives,
    Empty,
}

fn parse_policy(text: &str, default_seed: u64) -> Result<Policy, String> {
    match text {
        "depth-first" => Ok(Policy::DepthFirst),
        "adversarial-dense" => Ok(Policy::AdversarialDense),
        "random" => Ok(Policy::Random { seed: default_seed }),
        _ => match text.strip_prefix("random:") {
            Some(seed) => seed
                .parse()
                .map(|seed| Policy::Random { seed })
                .map_err(|e| format!("bad policy seed {seed:?}: {e}")),
            None => Err(format!("unknown policy {text:?}")),
        },
    }
}

fn read_lines(stdin: &mut dyn BufRead) -> std::io::Result<Vec<String>> {
    let mut out = Vec::new();
    for line in stdin.lines() {
        let line = line?;
        let line = line.trim();
        if !line.is_empty() {
            out.push(line.to_owned());
        }
    }
    Ok(out)
}

/// Runs one command. Data goes to `stdout`, diagnostics to `stderr`.
/// Returns the process exit code.
pub fn dispatch<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match run(cli.command, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn run(
    command: Command,
    stdin: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    let display = |e: &dyn std::fmt::Display| e.to_string();
    match command {
        Command::Between {
            lower,
            upper,
            count,
            index,
        } => {
            let region = Region::new(lower, upper).map_err(|e| display(&e))?;
            let tag = insert_between(&region, count, index).map_err(|e| display(&e))?;
            writeln!(out, "{tag}").map_err(io)?;
        }
        Command::After { tag, count, index } => {
            let tag = insert_after(&tag, count, index).map_err(|e| display(&e))?;
            writeln!(out, "{tag}").map_err(io)?;
        }
        Command::Before { tag, count, index } => {
            let tag = insert_before(&tag, count, index).map_err(|e| display(&e))?;
            writeln!(out, "{tag}").map_err(io)?;
        }
        Command::Compare { a, b } => {
            let symbol = match a.cmp(&b) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            writeln!(out, "{symbol}").map_err(io)?;
        }
        Command::Retag {
            lower,
            upper,
            spacing,
        } => {
            let region = Region::new(lower, upper).map_err(|e| display(&e))?;
            let tags = read_lines(stdin)
                .map_err(io)?
                .iter()
                .map(|l| l.parse::<EcnTag>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| display(&e))?;
            for tag in retag_region(&region, &tags, spacing).map_err(|e| display(&e))? {
                writeln!(out, "{tag}").map_err(io)?;
            }
        }
        Command::Arith { op } => {
            let result = match op {
                ArithOp::Add { a, b } => arithmetic::add(&a, &b),
                ArithOp::Sub { a, b, checked: false } => arithmetic::sub_group(&a, &b),
                ArithOp::Sub { a, b, checked: true } => {
                    arithmetic::sub_euclidean(&a, &b).map_err(|e| display(&e))?
                }
                ArithOp::Neg { a } => arithmetic::neg(&a),
                ArithOp::Length { a, b } => arithmetic::length(&a, &b),
                ArithOp::Mul { a, p } => arithmetic::mul_count(&a, &p),
                ArithOp::Div { a, p } => arithmetic::div_count(&a, &p).map_err(|e| display(&e))?,
            };
            writeln!(out, "{result}").map_err(io)?;
        }
        Command::GroupCheck {
            universe,
            depth,
            samples,
            seed,
            factor,
        } => {
            let u = match universe {
                UniverseKind::Einheit => Universe::einheit(depth.iter().copied()),
                UniverseKind::Positives => Universe::positives(depth.iter().copied()),
                UniverseKind::Empty => Universe::Empty,
            };
            let config = GroupCheckConfig {
                samples,
                seed,
                ..GroupCheckConfig::default()
            };
            let report = check_group(&u, &config);
            for (name, check) in report.checks() {
                let verdict = if check.passed { "pass" } else { "fail" };
                write!(out, "{name}\t{verdict}\t{}", check.cases).map_err(io)?;
                if !check.witness.is_empty() {
                    let w: Vec<String> = check.witness.iter().map(ToString::to_string).collect();
                    write!(out, "\t{}", w.join(" ")).map_err(io)?;
                }
                writeln!(out).map_err(io)?;
            }
            if let Some(f) = factor {
                if f < 2 {
                    return Err("quotient factor must be at least 2".into());
                }
                let q = build_quotient(depth.first().copied().unwrap_or(0), f);
                let verdict = |ok: bool| if ok { "pass" } else { "fail" };
                writeln!(out, "quotient-abelian\t{}", verdict(q.is_abelian())).map_err(io)?;
                writeln!(out, "quotient-associative\t{}", verdict(q.is_associative())).map_err(io)?;
                writeln!(out, "quotient-well-defined\t{}", verdict(q.is_well_defined(3))).map_err(io)?;
                for row in &q.table {
                    let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                    writeln!(out, "{}", cells.join(" ")).map_err(io)?;
                }
            }
        }
        Command::Sort {
            fallback,
            max_iters,
        } => {
            let items = read_lines(stdin)
                .map_err(io)?
                .iter()
                .map(|l| {
                    l.parse::<f64>()
                        .map_err(|e| format!("bad key {l:?}: {e}"))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            match heuristic_sort(&items, fallback, max_iters) {
                Ok((sorted, stats)) => {
                    for v in sorted {
                        writeln!(out, "{v}").map_err(io)?;
                    }
                    writeln!(
                        err,
                        "probes={} comparisons={} failures={} max_iters_per_element={}",
                        stats.probes,
                        stats.comparisons,
                        stats.failures.len(),
                        stats.per_element_iters.iter().max().unwrap_or(&0)
                    )
                    .map_err(io)?;
                }
                Err(e @ SortError::Aborted { .. }) => {
                    writeln!(err, "error: {e}").map_err(io)?;
                    return Ok(EXIT_SORT_FAILURE);
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        Command::Simulate {
            seed,
            depth,
            branch,
            steps,
            policy,
        } => {
            if branch == 0 {
                return Err("--branch must be at least 1".into());
            }
            let policy = parse_policy(&policy, seed)?;
            let mut cave = generate_cave(seed, depth, branch);
            for visit in explore(&mut cave, policy, steps) {
                writeln!(out, "{visit}").map_err(io)?;
            }
            let report = verify_tagging(&cave);
            writeln!(
                err,
                "nodes={} tagged={} violations={}",
                cave.len(),
                report.tagged,
                report.violations.len()
            )
            .map_err(io)?;
            for v in &report.violations {
                writeln!(err, "violation: {v:?}").map_err(io)?;
            }
            if !report.passed() {
                return Ok(EXIT_ERROR);
            }
        }
        Command::Bench { counts } => {
            write!(out, "{}", render_bench(&benchmark_insertions(&counts))).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}
