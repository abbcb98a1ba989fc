//! `cdb`: verification, counting, rate tables, code generation, rank and
//! unrank, and channel simulations for constrained de Bruijn codes.
//!
//! Exit codes: 0 success, 1 validation error, 2 decode or verification
//! failure, 3 resource budget exceeded. All randomness flows from the
//! explicit `--seed`, so identical invocations produce byte-identical
//! output.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;

use cdb::automaton::{
    build_automaton, essential_component, largest_eigenvalue, transfer_matrix, Form,
};
use cdb::channels::sim::lsymbol_trial_reads;
use cdb::channels::{simulate_lsymbol, simulate_racetrack, ReadMode};
use cdb::constraint::{
    forbidden_family, is_constrained_acyclic, is_constrained_cyclic, reduce_forbidden,
    ConstraintParams,
};
use cdb::construction::{db_independent_set, Construction1};
use cdb::enumeration::{
    capacity_table, capacity_table_csv, count_brute, count_cyclic_brute, count_exact, count_k1,
    count_recursion_b3, CodeIndex,
};
use cdb::error::Error;
use cdb::gf::{enumerate_primitive_polys, field_of_order, format_poly_text, lfsr_msequence};
use cdb::words::{read_words, write_words, CyclicWord, Word};

#[derive(Parser)]
#[command(name = "cdb", version, about = "Constrained de Bruijn code toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format: text, json, or csv where applicable
    #[arg(long, default_value = "text")]
    format: String,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check words in a file against the (b,k) constraint
    Verify {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        /// Alphabet size; defaults to the file header or the smallest fit
        #[arg(long)]
        sigma: Option<u32>,
        /// cyclic or acyclic
        #[arg(long, default_value = "acyclic")]
        mode: String,
        /// Input file in the word text format; - for stdin
        input: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Count constrained words of length n
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        /// exact, brute, k1, recursion, or cyclic
        #[arg(long, default_value = "exact")]
        method: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Asymptotic rate of one (b,k) constraint
    Capacity {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Automaton form: prefix or window
        #[arg(long, default_value = "prefix")]
        form: String,
        /// Export the automaton as JSON
        #[arg(long)]
        automaton_out: Option<PathBuf>,
        /// Export the essential transfer matrix as dense CSV
        #[arg(long)]
        matrix_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Rate table over a (b,k) grid
    Table {
        #[arg(long, default_value_t = 6)]
        b_max: usize,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Forbidden pattern family of the (b,k) constraint
    Forbidden {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        /// Apply the avoiding-set-preserving reduction
        #[arg(long)]
        reduce: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Index of a word in the lexicographic order of all valid words
    Rank {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        /// The word, symbols separated by spaces, e.g. "0 1 0 1"
        #[arg(long, conflicts_with = "input")]
        word: Option<String>,
        /// Read the (first) word from a file instead
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Word at a given index in the lexicographic order
    Unrank {
        #[arg(long)]
        r: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Canonical maximal-length shift-register sequences over F_q
    Msequences {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Codewords built from concatenated m-sequences
    Construct1 {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        /// Emit only the codeword with this index (decimal)
        #[arg(long)]
        index: Option<String>,
        /// Pad every codeword to the common fixed length
        #[arg(long)]
        fixed_length: bool,
        /// Emit the cyclic variant (all admissible zero-run splits)
        #[arg(long, conflicts_with_all = ["index", "fixed_length"])]
        cyclic: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Search for de Bruijn cycles sharing no long window
    IndependentSet {
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Monte-Carlo round-trips through the l-symbol read channel
    SimulateLsymbol {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[arg(long, default_value = "cyclic")]
        mode: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Dump the corrupted reads of trial 0, one read per line
        #[arg(long)]
        dump_reads: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Monte-Carlo round-trips through the racetrack codec
    SimulateRacetrack {
        /// Number of primary heads
        #[arg(long)]
        m: usize,
        /// Segment length (cells per head)
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        /// Maximum number of deletion bursts
        #[arg(long, default_value_t = 2)]
        t1: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are not errors
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Domain(_) | Error::Parse { .. } | Error::Io(_) => 1,
        Error::Decode(_) | Error::VerifyFailed(_) => 2,
        Error::Resource(_) | Error::Numeric(_) => 3,
    }
}

fn emit(output: &OutputOpts, content: &str) -> Result<(), Error> {
    match &output.out {
        Some(path) => fs::write(path, content)?,
        None => io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn json_line(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn parse_biguint(s: &str) -> Result<BigUint, Error> {
    BigUint::from_str(s).map_err(|_| Error::InvalidInput(format!("bad index {s:?}")))
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Verify {
            b,
            k,
            sigma,
            mode,
            input,
            output,
        } => cmd_verify(b, k, sigma, &mode, &input, &output),
        Command::Count {
            n,
            b,
            k,
            sigma,
            method,
            output,
        } => cmd_count(n, b, k, sigma, &method, &output),
        Command::Capacity {
            b,
            k,
            sigma,
            tol,
            form,
            automaton_out,
            matrix_out,
            output,
        } => cmd_capacity(b, k, sigma, tol, &form, automaton_out, matrix_out, &output),
        Command::Table {
            b_max,
            k_max,
            sigma,
            tol,
            output,
        } => cmd_table(b_max, k_max, sigma, tol, &output),
        Command::Forbidden {
            b,
            k,
            sigma,
            reduce,
            output,
        } => cmd_forbidden(b, k, sigma, reduce, &output),
        Command::Rank {
            b,
            k,
            sigma,
            word,
            input,
            output,
        } => cmd_rank(b, k, sigma, word, input, &output),
        Command::Unrank {
            r,
            n,
            b,
            k,
            sigma,
            output,
        } => cmd_unrank(&r, n, b, k, sigma, &output),
        Command::Msequences { q, k, output } => cmd_msequences(q, k, &output),
        Command::Construct1 {
            q,
            k,
            ell,
            index,
            fixed_length,
            cyclic,
            output,
        } => cmd_construct1(q, k, ell, index, fixed_length, cyclic, &output),
        Command::IndependentSet {
            sigma,
            k,
            delta,
            seed,
            output,
        } => cmd_independent_set(sigma, k, delta, seed, &output),
        Command::SimulateLsymbol {
            n,
            b,
            k,
            sigma,
            mode,
            trials,
            seed,
            dump_reads,
            output,
        } => cmd_simulate_lsymbol(n, b, k, sigma, &mode, trials, seed, dump_reads, &output),
        Command::SimulateRacetrack {
            m,
            n,
            b,
            k,
            t1,
            trials,
            seed,
            output,
        } => cmd_simulate_racetrack(m, n, b, k, t1, trials, seed, &output),
    }
}

fn read_input_words(path: &PathBuf) -> Result<cdb::words::WordFile, Error> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        read_words(buf.as_bytes())
    } else {
        let file = fs::File::open(path)?;
        read_words(io::BufReader::new(file))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    b: usize,
    k: usize,
    sigma: Option<u32>,
    mode: &str,
    input: &PathBuf,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    let mode: ReadMode = mode.parse()?;
    let file = read_input_words(input)?;
    let sigma = sigma
        .or(file.sigma)
        .unwrap_or_else(|| {
            file.words
                .iter()
                .map(|w| w.min_sigma())
                .max()
                .unwrap_or(2)
                .max(2)
        });
    let c = ConstraintParams::new(b, k, sigma)?;
    let mut results = Vec::new();
    let mut all_ok = true;
    for (i, w) in file.words.iter().enumerate() {
        let ok = match mode {
            ReadMode::Acyclic => is_constrained_acyclic(w, &c)?,
            ReadMode::Cyclic => {
                is_constrained_cyclic(&CyclicWord::new(w.symbols().to_vec()), &c)?
            }
        };
        all_ok &= ok;
        results.push((i + 1, ok));
    }
    let content = if output.format == "json" {
        json_line(&json!({
            "schema": 1,
            "b": b, "k": k, "sigma": sigma, "mode": mode.to_string(),
            "words": results.len(),
            "all_ok": all_ok,
            "results": results.iter().map(|&(line, ok)| json!({"word": line, "ok": ok})).collect::<Vec<_>>(),
        }))
    } else {
        let mut s = String::new();
        for &(line, ok) in &results {
            s.push_str(&format!("word {line}: {}\n", if ok { "ok" } else { "FAIL" }));
        }
        s.push_str(&format!(
            "{}/{} words satisfy the ({b},{k}) constraint\n",
            results.iter().filter(|&&(_, ok)| ok).count(),
            results.len()
        ));
        s
    };
    emit(output, &content)?;
    if all_ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn cmd_count(
    n: usize,
    b: usize,
    k: usize,
    sigma: u32,
    method: &str,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    let c = ConstraintParams::new(b, k, sigma)?;
    let count = match method {
        "exact" => count_exact(n, &c)?,
        "brute" => count_brute(n, &c)?,
        "cyclic" => count_cyclic_brute(n, &c)?,
        "k1" => {
            if k != 1 {
                return Err(Error::InvalidInput("the closed form needs k = 1".into()));
            }
            count_k1(n, b, sigma)?
        }
        "recursion" => {
            if b != 3 || sigma != 2 {
                return Err(Error::InvalidInput(
                    "the recursion covers binary (3,k) constraints".into(),
                ));
            }
            if n == 0 {
                BigUint::from(1u32)
            } else {
                count_recursion_b3(n - 1, k)? * 2u32
            }
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown method {other:?} (expected exact, brute, cyclic, k1, or recursion)"
            )))
        }
    };
    let content = if output.format == "json" {
        json_line(&json!({
            "schema": 1,
            "n": n, "b": b, "k": k, "sigma": sigma,
            "method": method,
            "count": count.to_string(),
        }))
    } else {
        format!("{count}\n")
    };
    emit(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_capacity(
    b: usize,
    k: usize,
    sigma: u32,
    tol: f64,
    form: &str,
    automaton_out: Option<PathBuf>,
    matrix_out: Option<PathBuf>,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    let c = ConstraintParams::new(b, k, sigma)?;
    let form: Form = form.parse()?;
    let automaton = build_automaton(&c, form)?;
    let essential = essential_component(&automaton);
    if let Some(path) = automaton_out {
        fs::write(&path, json_line(&automaton.to_json()))?;
    }
    let perron = if essential.num_states() == 0 {
        None
    } else {
        let matrix = transfer_matrix(&essential)?;
        if let Some(path) = matrix_out {
            let mut buf = Vec::new();
            matrix.write_csv(&mut buf)?;
            fs::write(&path, buf)?;
        }
        Some(largest_eigenvalue(&matrix, tol)?)
    };
    let (lambda, cap, residual, iterations) = match &perron {
        Some(p) => (p.lambda, p.capacity, p.residual, p.iterations),
        None => (0.0, 0.0, 0.0, 0),
    };
    let content = if output.format == "json" {
        json_line(&json!({
            "schema": 1,
            "b": b, "k": k, "sigma": sigma,
            "states": automaton.num_states(),
            "essential_states": essential.num_states(),
            "lambda": lambda,
            "capacity": cap,
            "residual": residual,
            "iterations": iterations,
        }))
    } else {
        format!(
            "b={b} k={k} sigma={sigma}: capacity {cap:.6} (lambda {lambda:.8}, {} states, {} essential)\n",
            automaton.num_states(),
            essential.num_states()
        )
    };
    emit(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(
    b_max: usize,
    k_max: usize,
    sigma: u32,
    tol: f64,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    let cells = capacity_table(1..=b_max, 1..=k_max, sigma, tol);
    let any_error = cells.iter().any(|c| c.error.is_some());
    let content = match output.format.as_str() {
        "json" => json_line(&json!({
            "schema": 1,
            "sigma": sigma,
            "tol": tol,
            "cells": cells,
        })),
        _ => {
            let mut buf = Vec::new();
            capacity_table_csv(&cells, &mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    emit(output, &content)?;
    if any_error {
        Ok(ExitCode::from(3))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_forbidden(
    b: usize,
    k: usize,
    sigma: u32,
    reduce: bool,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    let c = ConstraintParams::new(b, k, sigma)?;
    let mut family = forbidden_family(&c);
    if reduce {
        family = reduce_forbidden(&family);
    }
    let words: Vec<Word> = family.iter().cloned().collect();
    let content = if output.format == "json" {
        json_line(&json!({
            "schema": 1,
            "b": b, "k": k, "sigma": sigma,
            "reduced": reduce,
            "patterns": words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        }))
    } else {
        let mut buf = Vec::new();
        write_words(&mut buf, Some(sigma), &words)?;
        String::from_utf8(buf).expect("text is utf-8")
    };
    emit(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_rank(
    b: usize,
    k: usize,
    sigma: u32,
    word: Option<String>,
    input: Option<PathBuf>,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    let c = ConstraintParams::new(b, k, sigma)?;
    let w = match (word, input) {
        (Some(s), _) => Word::parse_line(&s)?,
        (None, Some(path)) => read_input_words(&path)?
            .words
            .into_iter()
            .next()
            .ok_or_else(|| Error::InvalidInput("input file contains no word".into()))?,
        (None, None) => {
            return Err(Error::InvalidInput("provide --word or --input".into()))
        }
    };
    let index = CodeIndex::new(w.len(), &c)?;
    let r = index.rank(&w)?;
    let content = if output.format == "json" {
        json_line(&json!({
            "schema": 1,
            "n": w.len(), "b": b, "k": k, "sigma": sigma,
            "word": w.to_string(),
            "rank": r.to_string(),
            "count": index.count().to_string(),
        }))
    } else {
        format!("{r}\n")
    };
    emit(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_unrank(
    r: &str,
    n: usize,
    b: usize,
    k: usize,
    sigma: u32,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    let c = ConstraintParams::new(b, k, sigma)?;
    let r = parse_biguint(r)?;
    let index = CodeIndex::new(n, &c)?;
    let w = index.unrank(&r)?;
    let content = if output.format == "json" {
        json_line(&json!({
            "schema": 1,
            "n": n, "b": b, "k": k, "sigma": sigma,
            "rank": r.to_string(),
            "word": w.to_string(),
        }))
    } else {
        format!("{w}\n")
    };
    emit(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_msequences(q: u32, k: usize, output: &OutputOpts) -> Result<ExitCode, Error> {
    let field = field_of_order(q)?;
    let polys = enumerate_primitive_polys(&field, k)?;
    let mut entries = Vec::new();
    for poly in &polys {
        let ms = lfsr_msequence(&field, poly)?;
        let canon = cdb::gf::canonicalize_msequence(&ms);
        entries.push((format_poly_text(poly), canon));
    }
    let content = if output.format == "json" {
        json_line(&json!({
            "schema": 1,
            "q": q, "k": k,
            "count": entries.len(),
            "msequences": entries.iter().map(|(g, w)| json!({
                "generator": g,
                "word": w.to_string(),
            })).collect::<Vec<_>>(),
        }))
    } else {
        let mut s = format!("# sigma={q}\n");
        for (g, w) in &entries {
            s.push_str(&format!("# generator={g}\n{w}\n"));
        }
        s
    };
    emit(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct1(
    q: u32,
    k: usize,
    ell: usize,
    index: Option<String>,
    fixed_length: bool,
    cyclic: bool,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    const ENUM_CAP: u64 = 1 << 16;
    let c1 = Construction1::new(q, k)?;
    if ell < 1 {
        return Err(Error::InvalidInput("ell must be at least 1".into()));
    }
    let m = c1.block_choices();

    let mut indices: Vec<BigUint> = Vec::new();
    let mut words: Vec<Word> = Vec::new();
    if cyclic {
        // all admissible zero-run splits for all generator tuples; block
        // rotations of each other collapse to one cyclic codeword
        let total_eps = ell * (k + 1) / 2;
        let gens = c1.generators().len();
        let mut seen = std::collections::BTreeSet::new();
        let mut gen_choice = vec![0usize; ell];
        loop {
            enumerate_eps(ell, k + 1, total_eps, &mut |eps| {
                let blocks: Vec<(usize, usize)> = gen_choice
                    .iter()
                    .zip(eps)
                    .map(|(&g, &e)| (g, e))
                    .collect();
                let choice = cdb::construction::Construction1Choice {
                    blocks: blocks
                        .iter()
                        .map(|&(g, e)| (c1.generators()[g].clone(), e))
                        .collect(),
                };
                if let Ok(w) = c1.encode_cyclic(&choice) {
                    let canon = w.canonical_rotation();
                    if seen.insert(canon.clone()) {
                        words.push(canon);
                    }
                }
            });
            if words.len() as u64 > ENUM_CAP {
                return Err(Error::Resource("too many cyclic codewords to list".into()));
            }
            // odometer over generator choices
            let mut i = ell;
            loop {
                if i == 0 {
                    gen_choice.clear();
                    break;
                }
                i -= 1;
                gen_choice[i] += 1;
                if gen_choice[i] < gens {
                    break;
                }
                gen_choice[i] = 0;
            }
            if gen_choice.is_empty() {
                break;
            }
        }
    } else if let Some(idx) = index {
        indices.push(parse_biguint(&idx)?);
    } else {
        let total = c1.code_size(ell);
        if total > BigUint::from(ENUM_CAP) {
            return Err(Error::Resource(format!(
                "listing all {total} codewords exceeds the cap; use --index"
            )));
        }
        let mut i = BigUint::from(0u32);
        while i < total {
            indices.push(i.clone());
            i += 1u32;
        }
    }
    for idx in &indices {
        let w = if fixed_length {
            c1.encode_fixed_length(ell, idx)?
        } else {
            let blocks = c1.index_to_blocks(ell, idx)?;
            c1.encode_indices(&blocks)
        };
        words.push(w);
    }

    let content = if output.format == "json" {
        json_line(&json!({
            "schema": 1,
            "q": q, "k": k, "ell": ell,
            "block_choices": m,
            "code_size": c1.code_size(ell).to_string(),
            "fixed_length": fixed_length,
            "cyclic": cyclic,
            "choice_indices": indices.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
            "codewords": words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        }))
    } else {
        let mut s = format!("# sigma={q}\n# q={q} k={k} ell={ell} M={m}\n");
        for w in &words {
            s.push_str(&format!("{w}\n"));
        }
        s
    };
    emit(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

/// Enumerate all splits of `total` into `ell` parts bounded by `max_eps`.
fn enumerate_eps(ell: usize, max_eps: usize, total: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(
        slot: usize,
        remaining: usize,
        ell: usize,
        max_eps: usize,
        acc: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if slot == ell {
            if remaining == 0 {
                f(acc);
            }
            return;
        }
        let hi = max_eps.min(remaining);
        for e in 0..=hi {
            acc.push(e);
            go(slot + 1, remaining - e, ell, max_eps, acc, f);
            acc.pop();
        }
    }
    let mut acc = Vec::with_capacity(ell);
    go(0, total, ell, max_eps, &mut acc, f);
}

fn cmd_independent_set(
    sigma: u32,
    k: usize,
    delta: usize,
    seed: u64,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    let set = db_independent_set(sigma, k, delta, seed)?;
    let words: Vec<Word> = set.iter().map(|c| c.canonical_rotation()).collect();
    let content = if output.format == "json" {
        json_line(&json!({
            "schema": 1,
            "sigma": sigma, "k": k, "delta": delta, "seed": seed,
            "size": words.len(),
            "cycles": words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        }))
    } else {
        let mut buf = Vec::new();
        write_words(&mut buf, Some(sigma), &words)?;
        String::from_utf8(buf).expect("text is utf-8")
    };
    emit(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate_lsymbol(
    n: usize,
    b: usize,
    k: usize,
    sigma: u32,
    mode: &str,
    trials: u64,
    seed: u64,
    dump_reads: Option<PathBuf>,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    let c = ConstraintParams::new(b, k, sigma)?;
    let mode: ReadMode = mode.parse()?;
    let manifest = simulate_lsymbol(&c, n, mode, trials, seed)?;
    if let Some(path) = dump_reads {
        if trials > 0 {
            let reads = lsymbol_trial_reads(&c, n, mode, seed, 0)?;
            let mut buf = Vec::new();
            reads.write_text(&mut buf)?;
            fs::write(&path, buf)?;
        }
    }
    let failures = manifest.failures;
    emit(output, &json_line(&serde_json::to_value(&manifest).expect("serializable")))?;
    if failures > 0 {
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate_racetrack(
    m: usize,
    n: usize,
    b: usize,
    k: usize,
    t1: usize,
    trials: u64,
    seed: u64,
    output: &OutputOpts,
) -> Result<ExitCode, Error> {
    let c = ConstraintParams::new(b, k, 2)?;
    let manifest = simulate_racetrack(m, n, &c, t1, trials, seed)?;
    let failures = manifest.failures;
    emit(output, &json_line(&serde_json::to_value(&manifest).expect("serializable")))?;
    if failures > 0 {
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
