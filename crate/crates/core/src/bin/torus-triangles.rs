//! Command-line front end. Machine-readable results go to standard output
//! (or `--output`); human-readable summaries go to standard error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use torus_triangles::overlap::{f_hht, f_hhh, f_htt, f_numeric, f_qqq, f_tqq, OverlapKind, OverlapMethod};
use torus_triangles::probability::{moduli_average, p_closed_form, p_monte_carlo, ModuliAverageConfig};
use torus_triangles::shapes::{corner_triangle, difference_hexagon, hexagon, unit_square};
use torus_triangles::torus::{dirichlet_domain, reduce_to_fundamental, TauParam};
use torus_triangles::verify::{run_suite, Budget};
use torus_triangles::ConvexPolygon;

#[derive(Parser, Debug)]
#[command(name = "torus-triangles", version, about = "Contractible random triangles on flat tori")]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for the parallel estimators.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form probability for one torus shape.
    Eval {
        #[command(flatten)]
        tau: TauArgs,
    },
    /// Monte Carlo estimate from sampled triangles.
    Mc {
        #[command(flatten)]
        tau: TauArgs,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// CSV of the probability over a grid of shapes.
    Scan {
        /// Grid size as `na,nb`.
        #[arg(long, value_parser = parse_grid)]
        grid: (usize, usize),
        /// Range of the imaginary part as `lo,hi`.
        #[arg(long, value_parser = parse_pair, default_value = "0.8,3")]
        b_range: (f64, f64),
        /// Also run the simulation with this many triangles per grid point.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Average over the moduli space with the hyperbolic measure.
    Average {
        #[arg(long, default_value_t = 100.0)]
        b_max: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Skip the analytic contribution above `b_max`.
        #[arg(long)]
        no_tail: bool,
    },
    /// Numeric overlap invariant F(A, B, C).
    Overlap {
        /// One of the built-in triples; ignored when `--input` is given.
        #[arg(long, value_enum, default_value_t = Family::Hhh)]
        sets: Family,
        /// Shape parameters `s,t` of the built-in family.
        #[arg(long, value_parser = parse_pair, default_value = "0.5,0.5")]
        st: (f64, f64),
        /// JSON file `{"a": {"vertices": ...}, "b": ..., "c": ...}`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::MonteCarlo)]
        method: MethodArg,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dirichlet domain of the lattice as JSON.
    Dirichlet {
        #[command(flatten)]
        tau: TauArgs,
    },
    /// Run the invariant suite; exits nonzero if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = BudgetArg::Quick)]
        budget: BudgetArg,
    },
}

#[derive(clap::Args, Debug)]
struct TauArgs {
    /// Shape `a,b` of the torus R²/⟨1, a+ib⟩.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    tau: (f64, f64),
    /// Reduce into the modular domain first.
    #[arg(long)]
    reduce: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Qqq,
    Tqq,
    Htt,
    Hht,
    Hhh,
    Vtt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    MonteCarlo,
    MidpointQuadrature,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BudgetArg {
    Quick,
    Full,
}

#[derive(Deserialize)]
struct PolygonTriple {
    a: ConvexPolygon,
    b: ConvexPolygon,
    c: ConvexPolygon,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let x = x.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let y = y.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((x, y))
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `na,nb`, got `{s}`"))?;
    let na = x.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let nb = y.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if na < 2 || nb < 2 {
        return Err("grid needs at least 2 points per axis".into());
    }
    Ok((na, nb))
}

/// Invalid shapes are usage errors (exit status 2).
fn resolve_tau(args: &TauArgs) -> TauParam {
    let (a, b) = args.tau;
    let result = if args.reduce {
        reduce_to_fundamental(a, b).map(|(tau, _)| tau)
    } else {
        TauParam::new(a, b)
    };
    match result {
        Ok(tau) => tau,
        Err(e) => {
            let hint = if args.reduce { "" } else { "; pass --reduce to map it into the modular domain" };
            Cli::command()
                .error(clap::error::ErrorKind::ValueValidation, format!("invalid --tau {a},{b}: {e}{hint}"))
                .exit()
        }
    }
}

fn run(cli: Cli) -> Result<(String, bool)> {
    let mut ok = true;
    let out = match cli.command {
        Command::Eval { tau } => {
            let tau = resolve_tau(&tau);
            let p = p_closed_form(&tau);
            eprintln!("P({tau}) = {p}");
            format!("{p}\n")
        }
        Command::Mc { tau, samples, seed } => {
            let tau = resolve_tau(&tau);
            let e = p_monte_carlo(&tau, samples, seed)?;
            let exact = p_closed_form(&tau);
            eprintln!(
                "seed {seed}: {} ± {} over {} triangles (closed form {exact})",
                e.mean, e.std_error, e.n
            );
            let record = json!({
                "tau": [tau.a(), tau.b()],
                "mean": e.mean,
                "std_error": e.std_error,
                "n": e.n,
                "seed": e.seed,
                "p_closed": exact,
            });
            format!("{record}\n")
        }
        Command::Scan {
            grid: (na, nb),
            b_range: (lo, hi),
            samples,
            seed,
        } => {
            if !(lo > 0.0 && hi > lo) {
                bail!("--b-range needs 0 < lo < hi");
            }
            let mut csv = String::from("a,b,p_closed,p_mc,mc_stderr,n,seed\n");
            let mut rows = 0;
            for i in 0..na {
                let a = -0.5 + i as f64 / (na - 1) as f64;
                for j in 0..nb {
                    let b = lo + (hi - lo) * j as f64 / (nb - 1) as f64;
                    let Ok(tau) = TauParam::new(a, b) else { continue };
                    let p = p_closed_form(&tau);
                    match samples {
                        Some(n) => {
                            let e = p_monte_carlo(&tau, n, seed)?;
                            csv.push_str(&format!("{a},{b},{p},{},{},{},{}\n", e.mean, e.std_error, e.n, e.seed));
                        }
                        None => csv.push_str(&format!("{a},{b},{p},,,,\n")),
                    }
                    rows += 1;
                }
            }
            eprintln!("{rows} of {} grid points inside the modular domain", na * nb);
            if samples.is_some() {
                eprintln!("seed {seed}");
            }
            csv
        }
        Command::Average { b_max, tol, no_tail } => {
            let cfg = ModuliAverageConfig::new(b_max, tol, !no_tail)?;
            let avg = moduli_average(&cfg)?;
            eprintln!(
                "average {} over {} cells (volume check {} vs π/3 = {})",
                avg.value,
                avg.cells,
                avg.volume,
                std::f64::consts::PI / 3.0
            );
            let record = json!({
                "value": avg.value,
                "b_max": b_max,
                "tol": tol,
                "tail_included": !no_tail,
                "cells": avg.cells,
            });
            format!("{record}\n")
        }
        Command::Overlap {
            sets,
            st: (s, t),
            input,
            method,
            budget,
            seed,
        } => {
            let kind = match method {
                MethodArg::MonteCarlo => OverlapKind::MonteCarlo,
                MethodArg::MidpointQuadrature => OverlapKind::MidpointQuadrature,
            };
            let method = OverlapMethod::new(kind, budget)?;
            let (triple, exact) = match input {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let triple: PolygonTriple = serde_json::from_str(&text).context("parsing polygon triple")?;
                    ((triple.a, triple.b, triple.c), None)
                }
                None => family(sets, s, t)?,
            };
            let e = f_numeric(&triple.0, &triple.1, &triple.2, method, seed);
            match exact {
                Some(x) => eprintln!("F = {} ± {} (closed form {x}), seed {seed}", e.mean, e.std_error),
                None => eprintln!("F = {} ± {}, seed {seed}", e.mean, e.std_error),
            }
            let record = json!({
                "value": e.mean,
                "std_error": e.std_error,
                "n": e.n,
                "method": kind.name(),
                "seed": e.seed,
            });
            format!("{record}\n")
        }
        Command::Dirichlet { tau } => {
            let tau = resolve_tau(&tau);
            let d = dirichlet_domain(&tau);
            let vertices: Vec<[f64; 2]> = d.hexagon().vertices().iter().map(|v| [v.x, v.y]).collect();
            let record = json!({
                "tau": [tau.a(), tau.b()],
                "alpha": d.alpha(),
                "beta": d.beta(),
                "vertices": vertices,
                "area": d.hexagon().area(),
            });
            eprintln!("{} vertices, area {}", vertices.len(), d.hexagon().area());
            format!("{record}\n")
        }
        Command::Verify { budget } => {
            let budget = match budget {
                BudgetArg::Quick => Budget::Quick,
                BudgetArg::Full => Budget::Full,
            };
            let mut text = String::new();
            for outcome in run_suite(budget) {
                eprintln!(
                    "{} {}: {}",
                    if outcome.pass { "PASS" } else { "FAIL" },
                    outcome.check,
                    outcome.detail
                );
                ok &= outcome.pass;
                text.push_str(&serde_json::to_string(&outcome)?);
                text.push('\n');
            }
            text
        }
    };
    Ok((out, ok))
}

type Triple = (ConvexPolygon, ConvexPolygon, ConvexPolygon);

fn family(sets: Family, s: f64, t: f64) -> Result<(Triple, Option<f64>)> {
    let (q, tri, h) = (unit_square(), corner_triangle(s, t), hexagon(s, t));
    Ok(match sets {
        Family::Qqq => ((q.clone(), q.clone(), q), Some(f_qqq())),
        Family::Tqq => ((tri, q.clone(), q), Some(f_tqq(s, t)?)),
        Family::Htt => ((h, tri.clone(), tri), Some(f_htt(s, t)?)),
        Family::Hht => ((h.clone(), h, tri), Some(f_hht(s, t)?)),
        Family::Hhh => ((h.clone(), h.clone(), h), Some(f_hhh(s, t)?)),
        Family::Vtt => ((difference_hexagon(s, t), tri.clone(), tri), Some(f_htt(s, t)?)),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers as usize).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    match pool.install(|| run(cli)) {
        Ok((text, ok)) => {
            let written = match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
                None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::FAILURE;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
