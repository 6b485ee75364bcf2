use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use prefixperm::oracle::{enumerate_avoiders, EnumerateOptions, OracleResult, DEFAULT_WITNESS_CAP};
use prefixperm::sequences::{bell, catalan, schroder, Sequence};
use prefixperm::verify::{self, Suite, VerifyConfig};
use prefixperm::wilf::{classify_r_wilf, leading_term, table2, table3};
use prefixperm::{formulas, Count, Pattern, Permutation, PrefixQuery};

/// Count permutations with a fixed prefix that avoid given patterns.
#[derive(Parser, Debug)]
#[command(name = "prefixperm", version)]
struct Cli {
    /// Worker threads for enumeration (0 = one per core).
    #[arg(long, global = true, env = "PREFIXPERM_JOBS", default_value_t = 0)]
    jobs: usize,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form count with the rule that produced it.
    Count {
        #[arg(long)]
        n: usize,
        /// Prefix entries, e.g. `3,1,2` or `312`. Empty for none.
        #[arg(long, default_value = "")]
        prefix: Permutation,
        #[arg(long, num_args = 1.., required = true)]
        patterns: Vec<Pattern>,
    },
    /// Exhaustive count, optionally listing the avoiders.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        prefix: Permutation,
        #[arg(long, num_args = 1.., required = true)]
        patterns: Vec<Pattern>,
        /// List avoiding permutations (lexicographic, at most --cap).
        #[arg(long)]
        witnesses: bool,
        #[arg(long, default_value_t = DEFAULT_WITNESS_CAP)]
        cap: usize,
        /// Test each full permutation instead of pruning partial ones.
        #[arg(long)]
        naive: bool,
    },
    /// Compare closed forms against the enumerator.
    Verify {
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        prefix_max: usize,
        /// Suites to run; all of them when omitted.
        #[arg(long, value_enum, num_args = 1..)]
        suite: Vec<SuiteArg>,
    },
    /// Group patterns by their leading-term counts |S_{n,r}(p)|.
    Classify {
        #[arg(long)]
        r: usize,
        #[arg(long, num_args = 1.., conflicts_with = "family")]
        patterns: Vec<Pattern>,
        /// Classify all length-3 patterns of one kind.
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Print terms 0..terms of a sequence.
    Seq {
        #[arg(long)]
        name: Sequence,
        #[arg(long)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Reproduce the leading-term tables as CSV.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        /// n for table 2, number of terms for table 1.
        #[arg(long)]
        n: Option<usize>,
        /// r for table 3.
        #[arg(long)]
        r: Option<usize>,
        /// Recompute every filled cell with the enumerator.
        #[arg(long)]
        oracle_check: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Singles,
    Pairs,
    Schroder,
    Tables,
    Identities,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Singles => Suite::Singles,
            SuiteArg::Pairs => Suite::Pairs,
            SuiteArg::Schroder => Suite::Schroder,
            SuiteArg::Tables => Suite::Tables,
            SuiteArg::Identities => Suite::Identities,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Classical,
    Vincular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Serialize)]
struct Enumerated<'a> {
    query: &'a PrefixQuery,
    #[serde(flatten)]
    result: OracleResult,
}

/// What a command produced and whether it counts as success.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

/// Exit with status 2 and a clap-formatted message naming `flag`.
fn usage_error(flag: &str, msg: impl std::fmt::Display) -> ! {
    Cli::command()
        .error(
            clap::error::ErrorKind::ValueValidation,
            format!("invalid value for '{flag}': {msg}"),
        )
        .exit()
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn build_query(n: usize, prefix: Permutation, patterns: Vec<Pattern>) -> PrefixQuery {
    if n == 0 {
        usage_error("--n", "must be positive");
    }
    if prefix.len() >= n {
        usage_error(
            "--prefix",
            format!("length {} must be smaller than n = {n}", prefix.len()),
        );
    }
    if let Some(&c) = prefix.entries().iter().find(|&&c| c as usize > n) {
        usage_error("--prefix", format!("entry {c} exceeds n = {n}"));
    }
    PrefixQuery::new(n, prefix, patterns).unwrap_or_else(|e| usage_error("--patterns", e))
}

fn run(command: Command, jobs: usize) -> Output {
    match command {
        Command::Count {
            n,
            prefix,
            patterns,
        } => {
            let q = build_query(n, prefix, patterns);
            let outcome = formulas::count(&q).unwrap_or_else(|e| usage_error("--patterns", e));
            Output::ok(json(&outcome))
        }
        Command::Enumerate {
            n,
            prefix,
            patterns,
            witnesses,
            cap,
            naive,
        } => {
            let q = build_query(n, prefix, patterns);
            let opts = EnumerateOptions {
                collect: witnesses,
                cap,
                jobs,
                naive,
            };
            let start = Instant::now();
            let result = enumerate_avoiders(&q, &opts);
            // timing goes to stderr so stdout stays byte-identical across runs
            eprintln!("elapsed_ms: {}", start.elapsed().as_millis());
            Output::ok(json(&Enumerated { query: &q, result }))
        }
        Command::Verify {
            n_max,
            prefix_max,
            suite,
        } => {
            if n_max == 0 {
                usage_error("--n-max", "must be positive");
            }
            let suites: Vec<Suite> = suite.into_iter().map(Suite::from).collect();
            let report = verify::run(&suites, &VerifyConfig { n_max, prefix_max })
                .unwrap_or_else(|e| usage_error("--n-max", e));
            for m in &report.mismatches {
                eprintln!(
                    "mismatch [{}] {}: formula {} oracle {} ({})",
                    m.suite, m.query, m.expected, m.actual, m.rule
                );
            }
            Output {
                text: json(&report),
                ok: report.passed(),
            }
        }
        Command::Classify {
            r,
            patterns,
            family,
            n_max,
        } => {
            let patterns = match family {
                Some(Family::Classical) => Pattern::classical_length3(),
                Some(Family::Vincular) => Pattern::vincular_length3(),
                None if patterns.is_empty() => {
                    usage_error("--patterns", "give patterns or --family")
                }
                None => patterns,
            };
            if r == 0 {
                usage_error("--r", "must be positive");
            }
            if n_max < r {
                usage_error("--n-max", format!("must be at least r = {r}"));
            }
            let w = classify_r_wilf(r, &patterns, n_max)
                .unwrap_or_else(|e| usage_error("--patterns", e));
            Output::ok(json(&w))
        }
        Command::Seq {
            name,
            terms,
            format,
        } => {
            let values: Vec<Count> = (0..terms).map(|n| name.term(n)).collect();
            let text = match format {
                Format::Csv => values
                    .iter()
                    .map(Count::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
                Format::Json => values
                    .iter()
                    .enumerate()
                    .map(|(n, v)| format!("{{\"n\":{n},\"{}\":\"{v}\"}}", name.name()))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            Output::ok(text)
        }
        Command::Tables {
            table,
            n,
            r,
            oracle_check,
        } => tables(table, n, r, oracle_check),
    }
}

fn tables(table: u8, n: Option<usize>, r: Option<usize>, oracle_check: bool) -> Output {
    let mut out = String::new();
    let mut bad = 0usize;
    let mut check = |n: usize, r: usize, p: &Pattern, v: &Count| {
        if oracle_check {
            let q = PrefixQuery::new(
                n,
                Permutation::new(vec![r as u32]).unwrap(),
                vec![p.clone()],
            )
            .unwrap();
            let actual = enumerate_avoiders(&q, &EnumerateOptions::default()).count;
            if &actual != v {
                eprintln!("mismatch: n={n} r={r} {p}: table {v} oracle {actual}");
                bad += 1;
            }
        }
    };
    match table {
        1 => {
            let terms = n.unwrap_or(11);
            out.push_str("n,catalan,bell,schroder\n");
            for k in 0..terms {
                writeln!(out, "{k},{},{},{}", catalan(k), bell(k), schroder(k)).unwrap();
            }
        }
        2 => {
            let n = n.unwrap_or_else(|| usage_error("--n", "table 2 needs --n"));
            let cells = table2(n).unwrap_or_else(|e| usage_error("--n", e));
            let columns = ["123", "321", "132", "312", "213", "231"];
            writeln!(out, "r,{}", columns.join(",")).unwrap();
            let mut rows: Vec<usize> = cells.keys().map(|(r, _)| *r).collect();
            rows.dedup();
            for r in rows.into_iter().rev() {
                let mut line = r.to_string();
                for c in columns {
                    let p: Pattern = c.parse().unwrap();
                    let v = &cells[&(r, p.clone())];
                    check(n, r, &p, v);
                    write!(line, ",{v}").unwrap();
                }
                writeln!(out, "{line}").unwrap();
            }
        }
        _ => {
            let r = r.unwrap_or_else(|| usage_error("--r", "table 3 needs --r"));
            let cells = table3(r).unwrap_or_else(|e| usage_error("--r", e));
            writeln!(out, "pattern,n={r},n={},n={}", r + 1, r + 2).unwrap();
            for p in Pattern::vincular_length3() {
                let mut line = p.to_string();
                for n in r..=r + 2 {
                    line.push(',');
                    if let Some(v) = &cells[&(p.clone(), n)] {
                        if oracle_check {
                            let actual = leading_term(n, r, &p).unwrap();
                            if &actual != v {
                                eprintln!("mismatch: n={n} r={r} {p}: table {v} oracle {actual}");
                                bad += 1;
                            }
                        }
                        write!(line, "{v}").unwrap();
                    }
                }
                writeln!(out, "{line}").unwrap();
            }
        }
    }
    if oracle_check {
        eprintln!("oracle check: {}", if bad == 0 { "ok" } else { "FAILED" });
    }
    Output {
        text: out.trim_end().to_string(),
        ok: bad == 0,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    let output = run(cli.command, cli.jobs);
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, format!("{}\n", output.text)) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{}", output.text),
    }
    if output.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
