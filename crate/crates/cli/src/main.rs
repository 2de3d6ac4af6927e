//! `hodge` — batch computations with filtered (φ,N,G)-modules and p-adic
//! Hodge complexes: validation, admissibility, Ext groups, syntomic
//! cohomology, the descent spectral sequence and the Bloch–Kato exponential.
//!
//! Exit codes: 0 on success (verdicts are results), 1 on domain errors,
//! 2 on malformed input or usage errors.

use clap::{Parser, Subcommand};
use hodgeforge::dfmod::{
    h_st, hom_flat, is_weakly_admissible_seeded, AdmissibilityStatus, DfComplex,
    FilteredPhiNModule,
};
use hodgeforge::json::{
    self, canonical_json, complex_from_file, complex_to_file, lefschetz_from_file,
    module_from_file, module_to_file, parse_any, ph_from_file, ph_to_file, AnyFile,
};
use hodgeforge::phodge::{syntomic_cohomology, theta, PadicHodgeComplex};
use hodgeforge::syntomic::{c_pst, check_degeneration, descent_ss, exp_bk};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hodge", version, about = "exact p-adic Hodge computations")]
struct Cli {
    /// machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Re-validate module, complex or p-adic Hodge complex files
    Validate { files: Vec<PathBuf> },
    /// Weak admissibility of a module
    Adm {
        file: PathBuf,
        /// trials for the randomized scan when the subobject lattice is infinite
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// seed for the randomized scan; echoed in the report when used
        #[arg(long, default_value_t = 0x68646765)]
        probabilistic_seed: u64,
    },
    /// Ext dimensions between two modules (cohomology of the derived Hom)
    Ext { source: PathBuf, target: PathBuf },
    /// Semistable extension groups h_st of a module
    Hst { file: PathBuf },
    /// Syntomic cohomology dimensions of a module, complex or pH complex
    Syn {
        file: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        r: i32,
    },
    /// Tate twist; canonical JSON on stdout
    Twist {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        r: i32,
    },
    /// Tensor product of two modules or two pH complexes; JSON on stdout
    Tensor { left: PathBuf, right: PathBuf },
    /// Descent spectral sequence of a complex
    Ss {
        file: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        r: i32,
    },
    /// Lefschetz degeneration check of a complex carrying its operator
    Degen {
        file: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        r: i32,
    },
    /// Bloch–Kato exponential of a module
    ExpBk { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

enum AppError {
    Domain(String),
    Malformed(String),
}

impl From<json::LoadError> for AppError {
    fn from(e: json::LoadError) -> Self {
        match e {
            json::LoadError::Json(err) => AppError::Malformed(err.to_string()),
            other => AppError::Domain(other.to_string()),
        }
    }
}

fn read(path: &PathBuf) -> Result<AnyFile, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Malformed(format!("{}: {e}", path.display())))?;
    Ok(parse_any(&text)?)
}

fn load_module(path: &PathBuf) -> Result<FilteredPhiNModule, AppError> {
    match read(path)? {
        AnyFile::Module(f) => Ok(module_from_file(&f, &pointer(path))?),
        _ => Err(AppError::Domain(format!(
            "{}: expected a module file",
            path.display()
        ))),
    }
}

fn pointer(path: &std::path::Path) -> String {
    format!("{}#", path.display())
}

fn run(cli: &Cli) -> Result<(), AppError> {
    match &cli.cmd {
        Cmd::Validate { files } => {
            if files.is_empty() {
                return Err(AppError::Malformed("validate: no files given".into()));
            }
            for path in files {
                match read(path)? {
                    AnyFile::Module(f) => {
                        module_from_file(&f, &pointer(path))?;
                    }
                    AnyFile::Complex(f) => {
                        let c = complex_from_file(&f, &pointer(path))?;
                        lefschetz_from_file(&f, &c, &pointer(path))?;
                    }
                    AnyFile::Ph(f) => {
                        ph_from_file(&f, &pointer(path))?;
                    }
                }
                println!("{}: ok", path.display());
            }
            Ok(())
        }
        Cmd::Adm { file, trials, probabilistic_seed } => {
            let m = load_module(file)?;
            let v = is_weakly_admissible_seeded(&m, *trials, *probabilistic_seed);
            if cli.json {
                let status = match &v.status {
                    AdmissibilityStatus::Admissible { scanned } => serde_json::json!({
                        "status": "Admissible", "scanned": scanned,
                    }),
                    AdmissibilityStatus::NotAdmissible { witness, witness_t_n, witness_t_h } => {
                        serde_json::json!({
                            "status": "NotAdmissible",
                            "witness_basis": witness
                                .basis()
                                .iter()
                                .map(|v| v.iter().map(|r| r.to_string()).collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                            "witness_t_n": witness_t_n,
                            "witness_t_h": witness_t_h,
                        })
                    }
                    AdmissibilityStatus::ProbablyAdmissible { trials, seed } => serde_json::json!({
                        "status": "ProbablyAdmissible", "trials": trials, "seed": seed,
                    }),
                };
                println!(
                    "{}",
                    serde_json::json!({"t_n": v.t_n, "t_h": v.t_h, "verdict": status})
                );
            } else {
                match &v.status {
                    AdmissibilityStatus::Admissible { scanned } => println!(
                        "Admissible: t_N={} t_H={} (subobjects scanned: {scanned})",
                        v.t_n, v.t_h
                    ),
                    AdmissibilityStatus::NotAdmissible { witness, witness_t_n, witness_t_h } => {
                        if witness.is_whole() {
                            println!("NotAdmissible: t_N={} < t_H={}", v.t_n, v.t_h);
                        } else {
                            println!(
                                "NotAdmissible: subobject of dim {} with t_N={witness_t_n} < t_H={witness_t_h}",
                                witness.dim()
                            );
                        }
                    }
                    AdmissibilityStatus::ProbablyAdmissible { trials, seed } => println!(
                        "ProbablyAdmissible: t_N={} t_H={} (trials={trials}, seed={seed})",
                        v.t_n, v.t_h
                    ),
                }
            }
            Ok(())
        }
        Cmd::Ext { source, target } => {
            let m = load_module(source)?;
            let t = load_module(target)?;
            if m.p() != t.p() {
                return Err(AppError::Domain(format!(
                    "prime mismatch: {} vs {}",
                    m.p(),
                    t.p()
                )));
            }
            let (c, _) = hom_flat(&DfComplex::concentrated(m), &DfComplex::concentrated(t));
            let dims: Vec<usize> = c
                .cohomology_dims()
                .iter()
                .filter(|&&(i, _)| i >= 0)
                .map(|&(_, d)| d)
                .collect();
            if cli.json {
                println!("{}", serde_json::json!({ "ext": dims }));
            } else {
                println!("ext = {dims:?}");
            }
            Ok(())
        }
        Cmd::Hst { file } => {
            let m = load_module(file)?;
            let dims = h_st(&m);
            if cli.json {
                println!("{}", serde_json::json!({ "h_st": dims }));
            } else {
                println!("h_st = {dims:?}");
            }
            Ok(())
        }
        Cmd::Syn { file, r } => {
            let ph: PadicHodgeComplex = match read(file)? {
                AnyFile::Module(f) => theta(&DfComplex::concentrated(module_from_file(
                    &f,
                    &pointer(file),
                )?)),
                AnyFile::Complex(f) => theta(&complex_from_file(&f, &pointer(file))?),
                AnyFile::Ph(f) => ph_from_file(&f, &pointer(file))?,
            };
            let rep =
                syntomic_cohomology(&ph, *r).map_err(|e| AppError::Domain(e.to_string()))?;
            if cli.json {
                let dims: Vec<serde_json::Value> = rep
                    .dims
                    .iter()
                    .map(|&(i, d)| serde_json::json!({"degree": i, "dim": d}))
                    .collect();
                println!("{}", serde_json::json!({ "r": r, "syntomic": dims }));
            } else {
                println!("syntomic cohomology (r = {r}):");
                for (i, d) in &rep.dims {
                    println!("  H^{i} = {d}");
                }
            }
            Ok(())
        }
        Cmd::Twist { file, r } => {
            match read(file)? {
                AnyFile::Module(f) => {
                    let m = module_from_file(&f, &pointer(file))?;
                    let mut out = module_to_file(&m.tate_twist(*r));
                    out.comment = f.comment.clone();
                    if *r == 0 {
                        out.expected = f.expected.clone();
                    }
                    print!("{}", canonical_json(&out));
                }
                AnyFile::Ph(f) => {
                    let ph = ph_from_file(&f, &pointer(file))?;
                    let mut out = ph_to_file(&ph.tate_twist(*r));
                    out.comment = f.comment.clone();
                    print!("{}", canonical_json(&out));
                }
                AnyFile::Complex(f) => {
                    let c = complex_from_file(&f, &pointer(file))?;
                    let mut out = complex_to_file(&c.tate_twist(*r));
                    out.comment = f.comment.clone();
                    if *r == 0 {
                        out.expected = f.expected.clone();
                        out.lefschetz = f.lefschetz.clone();
                        out.middle = f.middle;
                        for (t_out, t_in) in out.terms.iter_mut().zip(&f.terms) {
                            t_out.comment = t_in.comment.clone();
                            t_out.expected = t_in.expected.clone();
                        }
                    }
                    print!("{}", canonical_json(&out));
                }
            }
            Ok(())
        }
        Cmd::Tensor { left, right } => {
            match (read(left)?, read(right)?) {
                (AnyFile::Module(a), AnyFile::Module(b)) => {
                    let ma = module_from_file(&a, &pointer(left))?;
                    let mb = module_from_file(&b, &pointer(right))?;
                    let t = ma.tensor(&mb).map_err(|e| AppError::Domain(e.to_string()))?;
                    print!("{}", canonical_json(&module_to_file(&t)));
                }
                (AnyFile::Ph(a), AnyFile::Ph(b)) => {
                    let pa = ph_from_file(&a, &pointer(left))?;
                    let pb = ph_from_file(&b, &pointer(right))?;
                    let t = pa.tensor(&pb).map_err(|e| AppError::Domain(e.to_string()))?;
                    print!("{}", canonical_json(&ph_to_file(&t)));
                }
                _ => {
                    return Err(AppError::Domain(
                        "tensor expects two module files or two ph files".into(),
                    ))
                }
            }
            Ok(())
        }
        Cmd::Ss { file, r } => {
            let c = match read(file)? {
                AnyFile::Complex(f) => complex_from_file(&f, &pointer(file))?,
                AnyFile::Module(f) => {
                    DfComplex::concentrated(module_from_file(&f, &pointer(file))?)
                }
                _ => return Err(AppError::Domain("ss expects a complex file".into())),
            };
            let rep = descent_ss(&c, *r);
            if cli.json {
                let pages: Vec<serde_json::Value> = rep
                    .pages
                    .iter()
                    .enumerate()
                    .map(|(s, grid)| {
                        let cells: Vec<serde_json::Value> = grid
                            .iter()
                            .map(|(&(i, j), &d)| serde_json::json!({"i": i, "j": j, "dim": d}))
                            .collect();
                        serde_json::json!({"page": s, "cells": cells})
                    })
                    .collect();
                let abutment: Vec<serde_json::Value> = rep
                    .abutment
                    .iter()
                    .map(|(&n, &d)| serde_json::json!({"n": n, "dim": d}))
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "r": r,
                        "pages": pages,
                        "abutment": abutment,
                        "converged_at": rep.converged_at,
                    })
                );
            } else {
                println!("descent spectral sequence (r = {r}):");
                for (s, grid) in rep.pages.iter().enumerate().skip(1) {
                    if s > rep.converged_at {
                        break;
                    }
                    println!("  E_{s}:");
                    for (&(i, j), &d) in grid {
                        println!("    E_{s}^{{{i},{j}}} = {d}");
                    }
                }
                println!("  abutment:");
                for (&n, &d) in &rep.abutment {
                    println!("    H^{n} = {d}");
                }
                println!("  converged at page {}", rep.converged_at);
            }
            Ok(())
        }
        Cmd::Degen { file, r } => {
            let f = match read(file)? {
                AnyFile::Complex(f) => f,
                _ => return Err(AppError::Domain("degen expects a complex file".into())),
            };
            let c = complex_from_file(&f, &pointer(file))?;
            let Some((l, middle)) = lefschetz_from_file(&f, &c, &pointer(file))? else {
                return Err(AppError::Domain(
                    "degen: complex file carries no lefschetz data".into(),
                ));
            };
            let rep = check_degeneration(&c, &l, middle, *r)
                .map_err(|e| AppError::Domain(e.to_string()))?;
            if cli.json {
                let prim: Vec<serde_json::Value> = rep
                    .primitive_dims
                    .iter()
                    .map(|(&m, &d)| serde_json::json!({"degree": m, "dim": d}))
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "degenerate": rep.degenerate,
                        "hard_lefschetz_ok": rep.hard_lefschetz_ok,
                        "decomposition_ok": rep.decomposition_ok,
                        "primitive_dims": prim,
                        "converged_at": rep.spectral.converged_at,
                    })
                );
            } else {
                println!(
                    "degenerate at E_2: {}",
                    if rep.degenerate { "yes" } else { "no" }
                );
                println!(
                    "hard Lefschetz isomorphisms: {}",
                    if rep.hard_lefschetz_ok { "ok" } else { "FAILED" }
                );
                println!(
                    "primitive decomposition: {}",
                    if rep.decomposition_ok { "ok" } else { "FAILED" }
                );
                for (m, d) in &rep.primitive_dims {
                    println!("  prim^{m} = {d}");
                }
            }
            Ok(())
        }
        Cmd::ExpBk { file } => {
            let m = load_module(file)?;
            let e = exp_bk(&m);
            let c = c_pst(&m);
            let h1 = c
                .complex
                .cohomology_dims()
                .iter()
                .find(|&&(i, _)| i == 1)
                .map(|&(_, d)| d)
                .unwrap_or(0);
            if cli.json {
                let rows: Vec<Vec<String>> = (0..e.rows())
                    .map(|i| (0..e.cols()).map(|j| e.at(i, j).to_string()).collect())
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "domain_dim": e.cols(),
                        "h1_dim": h1,
                        "rank": e.rank(),
                        "matrix": rows,
                    })
                );
            } else {
                println!(
                    "exp_BK: D_K/F^0 (dim {}) -> H^1(C_pst) (dim {h1}), rank {}",
                    e.cols(),
                    e.rank()
                );
                for i in 0..e.rows() {
                    let row: Vec<String> =
                        (0..e.cols()).map(|j| e.at(i, j).to_string()).collect();
                    println!("  [{}]", row.join(", "));
                }
            }
            Ok(())
        }
    }
}
