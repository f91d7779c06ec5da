use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use inception::alba::run_alba;
use inception::checker::{check, path_string, Calculus, Derivation};
use inception::cutelim::eliminate_all_cuts;
use inception::rulegen::{check_analytic, lint, render, translate, RulesFile};
use inception::signature::Signature;
use inception::syntax::{check_inductive, find_inductive_certificate};
use inception_cli::corpus::{self, default_root, load_axioms, load_signature, parse_polarity, Corpus};
use inception_cli::oracle::{sweep, SweepConfig};
use inception_cli::selftest::{self, Config};

#[derive(Parser)]
#[command(name = "inception", version, about = "Inception rules from ALBA outputs, with a checker and cut elimination")]
struct Cli {
    /// Signature file; defaults to the corpus signature.
    #[arg(long, global = true)]
    sig: Option<PathBuf>,
    /// Corpus root; overrides the INCEPTION_CORPUS environment variable.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide inductiveness and report ε, Ω, depth and analyticity.
    Classify {
        /// Axiom file (one inequality per line) or a literal inequality.
        input: String,
        /// Check this order-type instead of searching, e.g. `p:1,q:d`.
        #[arg(long)]
        epsilon: Option<String>,
        /// Dependency order for `--epsilon`, e.g. `p<q`.
        #[arg(long)]
        omega: Option<String>,
    },
    /// Run ALBA to a polarity-safe clause.
    Alba {
        input: String,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify, run ALBA and translate into inception rules.
    GenRules {
        input: String,
        /// Name of the generated rule.
        #[arg(long, default_value = "R")]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a derivation against a calculus.
    Check {
        derivation: PathBuf,
        #[arg(long)]
        calculus: PathBuf,
    },
    /// Eliminate all cuts from a derivation.
    CutElim {
        derivation: PathBuf,
        #[arg(long)]
        calculus: PathBuf,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare axiom and clause validity on random finite algebras.
    Oracle {
        input: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random algebras.
        #[arg(long, default_value_t = 200)]
        random: usize,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
    /// Replay every acceptance criterion on the bundled corpus.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random algebras per axiom.
        #[arg(long, default_value_t = 200)]
        random: usize,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn corpus_root(cli: &Cli) -> PathBuf {
    cli.corpus.clone().unwrap_or_else(default_root)
}

fn signature(cli: &Cli) -> Result<Signature> {
    let path = cli
        .sig
        .clone()
        .unwrap_or_else(|| corpus_root(cli).join("signatures/le.json"));
    load_signature(&path)
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = out {
        fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn fail() -> ExitCode {
    ExitCode::from(1)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.cmd {
        Cmd::Classify { input, epsilon, omega } => {
            let sig = signature(&cli)?;
            classify(&load_axioms(input, &sig)?, epsilon.as_deref(), omega.as_deref(), &sig)
        }
        Cmd::Alba { input, trace, out } => {
            let sig = signature(&cli)?;
            let mut text = String::new();
            for ineq in load_axioms(input, &sig)? {
                let run = match run_alba(&ineq, &sig) {
                    Ok(r) => r,
                    Err(e) => {
                        println!("{ineq}: {e}");
                        return Ok(fail());
                    }
                };
                println!("axiom: {ineq}");
                for c in &run.components {
                    if *trace {
                        for s in &c.trace {
                            println!("  [{}] {}\n      {}", s.kind, s.detail, s.clause);
                        }
                    }
                    println!("clause: {}", c.clause);
                    text.push_str(&format!("{}\n", c.clause));
                }
            }
            write_out(out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::GenRules { input, name, out } => {
            let sig = signature(&cli)?;
            gen_rules(&load_axioms(input, &sig)?, name, out, &sig)
        }
        Cmd::Check { derivation, calculus } => {
            let (calc, d) = load_pair(derivation, calculus)?;
            match check(&d, &calc) {
                Ok(r) => {
                    println!(
                        "accepted: {}\ndepth: {}\ncut-free: {}\nnodes: {}",
                        d.seq, r.depth, r.cut_free, r.nodes
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("rejected at {} [{}]: {}", path_string(&e.path), e.kind.code(), e.msg);
                    Ok(fail())
                }
            }
        }
        Cmd::CutElim {
            derivation,
            calculus,
            trace,
            out,
        } => {
            let (calc, d) = load_pair(derivation, calculus)?;
            match eliminate_all_cuts(&d, &calc) {
                Ok((res, steps)) => {
                    if *trace {
                        for (i, s) in steps.iter().enumerate() {
                            println!("step {}: {s}", i + 1);
                        }
                    }
                    let ok = check(&res, &calc).is_ok() && res.is_cut_free();
                    println!("steps: {}\nendsequent: {}\ncut-free: {}", steps.len(), res.seq, res.is_cut_free());
                    write_out(out, &res.to_json())?;
                    Ok(if ok { ExitCode::SUCCESS } else { fail() })
                }
                Err(e) => {
                    println!("cut elimination failed: {e}");
                    Ok(fail())
                }
            }
        }
        Cmd::Oracle {
            input,
            seed,
            random,
            max_size,
        } => {
            let sig = signature(&cli)?;
            let cfg = SweepConfig {
                seed: *seed,
                count: *random,
                max_size: *max_size,
            };
            let mut mismatches = 0;
            for ineq in load_axioms(input, &sig)? {
                let report = match sweep(&ineq, &sig, &cfg) {
                    Ok(r) => r,
                    Err(e) => {
                        println!("{ineq}: {e}");
                        return Ok(fail());
                    }
                };
                println!("axiom: {ineq}");
                for line in &report.verdicts {
                    println!("  {line}");
                }
                println!("  mismatches: {}", report.mismatches.len());
                for m in &report.mismatches {
                    println!("  mismatch: {m}");
                }
                mismatches += report.mismatches.len();
            }
            Ok(if mismatches == 0 { ExitCode::SUCCESS } else { fail() })
        }
        Cmd::Selftest { seed, random, max_size } => {
            let corpus = Corpus::load(&corpus_root(&cli))?;
            let cfg = Config {
                seed: *seed,
                algebras: *random,
                max_size: *max_size,
                ..Config::default()
            };
            let mut ok = true;
            for o in selftest::run_all(&corpus, &cfg) {
                println!("{o}");
                ok &= o.passed();
            }
            Ok(if ok { ExitCode::SUCCESS } else { fail() })
        }
    }
}

fn load_pair(derivation: &Path, calculus: &Path) -> Result<(Calculus, Derivation)> {
    let calc = Calculus::load(calculus).map_err(|e| anyhow!(e))?;
    let d = Derivation::from_json(&corpus::read(derivation)?, &calc.sig)
        .map_err(|e| anyhow!("{}: {e}", derivation.display()))?;
    Ok((calc, d))
}

fn classify(
    axioms: &[inception::syntax::Inequality],
    epsilon: Option<&str>,
    omega: Option<&str>,
    sig: &Signature,
) -> Result<ExitCode> {
    let mut ok = true;
    for ineq in axioms {
        println!("axiom: {ineq}");
        if let Some(e) = epsilon {
            let mut eps = Vec::new();
            for part in e.split(',').filter(|s| !s.trim().is_empty()) {
                let (p, pol) = part.split_once(':').ok_or_else(|| anyhow!("bad epsilon entry `{part}`"))?;
                eps.push((p.trim().to_string(), parse_polarity(pol.trim())?));
            }
            let mut om = Vec::new();
            for part in omega.unwrap_or_default().split(',').filter(|s| !s.trim().is_empty()) {
                let (a, b) = part.split_once('<').ok_or_else(|| anyhow!("bad omega entry `{part}`"))?;
                om.push((a.trim().to_string(), b.trim().to_string()));
            }
            let accepted = check_inductive(ineq, &eps, &om, sig);
            println!("certificate: {}", if accepted { "accepted" } else { "rejected" });
            ok &= accepted;
            continue;
        }
        match find_inductive_certificate(ineq, sig) {
            Some(c) => print!("{}", c.report()),
            None => {
                println!("inductive: false");
                ok = false;
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { fail() })
}

fn gen_rules(
    axioms: &[inception::syntax::Inequality],
    name: &str,
    out: &Option<PathBuf>,
    sig: &Signature,
) -> Result<ExitCode> {
    let mut file = RulesFile {
        axiom: axioms.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("\n"),
        rules: vec![],
        metavariables: Default::default(),
    };
    let mut clean = true;
    let mut k = 0;
    for ineq in axioms {
        let run = match run_alba(ineq, sig) {
            Ok(r) => r,
            Err(e) => {
                println!("{ineq}: {e}");
                return Ok(fail());
            }
        };
        for c in &run.components {
            k += 1;
            let rule_name = if k == 1 { name.to_string() } else { format!("{name}{k}") };
            let (rule, map) = translate(&c.clause, &rule_name, sig).map_err(|e| anyhow!("{ineq}: {e}"))?;
            print!("{}", render(&rule));
            let mut issues = lint(&rule, sig);
            if rule.depth == 0 {
                issues.extend(check_analytic(&rule));
            }
            for i in &issues {
                println!("lint: {}: {} {}", i.rule, i.condition, i.msg);
            }
            clean &= issues.is_empty();
            for (m, v) in &map {
                println!("{rule_name}: {m} = {v}");
            }
            file.metavariables.extend(map.into_iter().map(|(m, v)| (format!("{rule_name}:{m}"), v)));
            file.rules.push(rule);
        }
    }
    write_out(out, &file.to_json())?;
    Ok(if clean { ExitCode::SUCCESS } else { fail() })
}
