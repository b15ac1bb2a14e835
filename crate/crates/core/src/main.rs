//! Command-line front end: scenario runner, ad-hoc cohomology queries on
//! JSON lattice specs, and root-system dumps.
//!
//! Exit codes: 0 success / all scenarios pass, 1 scenario failure,
//! 2 usage or input error, 3 resource-guard error. Output is deterministic;
//! wall-clock timings are only included behind --timings.

use clap::{Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::process::ExitCode;

use weylat::cohomology::{h1, h2, sha_omega, tate_h0, CohomologyOptions};
use weylat::error::Error;
use weylat::jsonio;
use weylat::matrix::AbelianGroupInvariants;
use weylat::roots::{build, DynkinType, Family};
use weylat::scenarios::{self, ScenarioReport, Status};

#[derive(Parser)]
#[command(name = "weylat", version, about = "Exact Weyl-lattice cohomology and verification suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification scenario, or all of them.
    Verify {
        /// Scenario name, or "all".
        name: String,
        /// Emit the reports as JSON.
        #[arg(long)]
        json: bool,
        /// Include wall-clock runtimes in the output.
        #[arg(long)]
        timings: bool,
        /// Scenario parameters as key=value (e.g. bound=2).
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// Compute cohomology of a lattice given as a JSON spec.
    Cohomology {
        /// Path of the lattice spec file.
        #[arg(long)]
        input: String,
        /// Cohomology degree: 0, 1 or 2.
        #[arg(long)]
        degree: u8,
        /// In degree 0, take the Tate quotient by the norm image.
        #[arg(long)]
        tate: bool,
        /// Compute the kernel of the restrictions to cyclic subgroups.
        #[arg(long = "sha-omega")]
        sha_omega: bool,
        /// Emit JSON.
        #[arg(long)]
        json: bool,
        /// Include wall-clock timings.
        #[arg(long)]
        timings: bool,
    },
    /// Construct a root system and print its data.
    Rootsystem {
        /// Family letter A-G.
        #[arg(long = "type")]
        family: String,
        /// Rank.
        #[arg(long)]
        rank: usize,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            match e {
                Error::MemoryGuard { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, String>, Error> {
    let mut out = BTreeMap::new();
    for p in raw {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Unsupported(format!("malformed --param {:?}", p)))?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Verify {
            name,
            json,
            timings,
            params,
        } => {
            let params = parse_params(&params)?;
            let reports: Vec<Result<ScenarioReport, Error>> = if name == "all" {
                scenarios::verify_all(&params)
            } else {
                vec![scenarios::run_scenario(&name, &params)]
            };
            let mut all_pass = true;
            let mut guard_hit = false;
            let mut printable = Vec::new();
            for r in reports {
                match r {
                    Ok(mut rep) => {
                        if !timings {
                            rep.runtime_ms = None;
                        }
                        if rep.status != Status::Pass {
                            all_pass = false;
                        }
                        printable.push(rep);
                    }
                    Err(Error::MemoryGuard { needed, guard }) => {
                        guard_hit = true;
                        eprintln!("guard exceeded: needs {} entries, guard {}", needed, guard);
                    }
                    Err(e) => return Err(e),
                }
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&printable).unwrap());
            } else {
                for rep in &printable {
                    print_report_text(rep);
                }
            }
            if guard_hit {
                Ok(ExitCode::from(3))
            } else if all_pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Cohomology {
            input,
            degree,
            tate,
            sha_omega: sha,
            json,
            timings,
        } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::InvalidSpec(format!("{}: {}", input, e)))?;
            let lattice = jsonio::load_lattice_spec(&text)?;
            let opts = CohomologyOptions::default();
            let started = std::time::Instant::now();
            let invariants: AbelianGroupInvariants = match (degree, tate, sha) {
                (0, false, false) => {
                    AbelianGroupInvariants::free(lattice.fixed_sublattice_whole().cols())
                }
                (0, true, false) => tate_h0(&lattice).invariants,
                (1, false, false) => h1(&lattice).invariants,
                (2, false, false) => h2(&lattice, &opts)?.invariants,
                (d @ (1 | 2), false, true) => sha_omega(&lattice, d, &opts)?.invariants,
                _ => {
                    return Err(Error::Unsupported(
                        "degree must be 0, 1 or 2; --tate only with degree 0; --sha-omega only with degree 1 or 2"
                            .into(),
                    ))
                }
            };
            let elapsed = started.elapsed().as_millis();
            if json {
                let mut obj = serde_json::json!({
                    "invariants": {
                        "free_rank": invariants.free_rank,
                        "torsion": invariants.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    },
                    "exponent": invariants.exponent().to_string(),
                });
                if timings {
                    obj["timings_ms"] = serde_json::json!(elapsed);
                }
                println!("{}", serde_json::to_string_pretty(&obj).unwrap());
            } else {
                println!("invariants: {}", invariants);
                println!("exponent: {}", invariants.exponent());
                if timings {
                    println!("timings_ms: {}", elapsed);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rootsystem { family, rank, emit } => {
            let fam = family
                .chars()
                .next()
                .filter(|_| family.len() == 1)
                .and_then(Family::from_letter)
                .ok_or_else(|| Error::InvalidDynkinType(family.clone()))?;
            let t = DynkinType::new(fam, rank)?;
            let rs = build(t)?;
            match emit {
                Emit::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&jsonio::root_system_to_json(&rs)).unwrap()
                    );
                }
                Emit::Text => {
                    println!("type: {}", rs.dynkin);
                    println!("ambient dimension: {}", rs.ambient_dim);
                    println!("roots: {}", rs.num_roots());
                    println!("connection index: {}", rs.connection_index());
                    println!("cartan:");
                    for i in 0..rs.rank() {
                        let row: Vec<String> = (0..rs.rank())
                            .map(|j| rs.cartan.at(i, j).to_string())
                            .collect();
                        println!("  [{}]", row.join(", "));
                    }
                    for i in 0..rs.rank() {
                        println!("simple root {}: ({})", i + 1, format_rat_vec(&rs.simple_root(i)));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_report_text(rep: &ScenarioReport) {
    let status = match rep.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Inconclusive => "INCONCLUSIVE",
    };
    match rep.runtime_ms {
        Some(ms) => println!("{}: {} ({} ms)", rep.name, status, ms),
        None => println!("{}: {}", rep.name, status),
    }
    for c in &rep.claims {
        if c.expected == c.computed {
            println!("  [ok] {} = {}", c.description, c.computed);
        } else {
            println!(
                "  [!!] {}: expected {}, computed {}",
                c.description, c.expected, c.computed
            );
        }
    }
}

fn format_rat_vec(v: &[weylat::rational::Rat]) -> String {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                x.to_integer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}
