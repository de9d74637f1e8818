//! The `aes-anf` command line: generate equation files, verify them against
//! the reference cipher, print the ANF of a truth table, and report stats.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage, parse or I/O
//! error.

use std::io::Write;
use std::path::{Path, PathBuf};

use aes_anf::aes::{reference_decrypt, reference_encrypt};
use aes_anf::serial::{self, MANIFEST_FILE};
use aes_anf::system::{build_system, reference_trace};
use aes_anf::{Block, Direction, EquationSystem, TruthTable};
use clap::{Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "aes-anf",
    version,
    about = "AES-128 as layered Boolean equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the equation system and write one file per output bit and stage.
    Generate {
        #[arg(long, value_parser = parse_direction)]
        mode: Direction,
        /// Directory that receives AES_files_<mode>/.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the files on a block and key and compare with the reference.
    Verify {
        #[arg(long, value_parser = parse_direction)]
        mode: Direction,
        /// Input block, 32 lowercase hex characters.
        #[arg(long, value_parser = parse_block)]
        block: Block,
        /// Cipher key, 32 lowercase hex characters.
        #[arg(long, value_parser = parse_block)]
        key: Block,
        /// AES_files_<mode>/ or the directory containing it.
        #[arg(long)]
        files: PathBuf,
    },
    /// Print the algebraic normal form of a truth table given as a 0/1 string.
    Anf {
        #[arg(value_name = "BITSTRING")]
        table: String,
    },
    /// Report monomial counts and degrees of a generated system.
    Stats {
        #[arg(long)]
        files: PathBuf,
    },
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    s.parse()
}

fn parse_block(s: &str) -> Result<Block, String> {
    s.parse().map_err(|e: aes_anf::Error| e.to_string())
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Generate { mode, out: dir } => generate(mode, &dir, out),
        Command::Verify {
            mode,
            block,
            key,
            files,
        } => verify(mode, &block, &key, &files, out, err),
        Command::Anf { table } => anf(&table, out),
        Command::Stats { files } => stats(&files, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

type CmdResult = Result<i32, Box<dyn std::error::Error>>;

fn generate(mode: Direction, dir: &Path, out: &mut dyn Write) -> CmdResult {
    let system = build_system(mode)?;
    let header = match mode {
        Direction::Encrypt => "## Ciphering process",
        Direction::Decrypt => "## Deciphering process",
    };
    writeln!(out, "{header}")?;
    writeln!(out, "## Create directory {}", dir.display())?;
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut failed = None;
    serial::write_system_with_progress(&system, dir, |stage| {
        if let Err(e) = writeln!(out, "## {}", stage.progress_label()) {
            failed.get_or_insert(e);
        }
    })?;
    if let Some(e) = failed {
        return Err(e.into());
    }
    writeln!(out, "## Files generated")?;
    Ok(EXIT_OK)
}

fn resolve_system_dir(files: &Path, mode: Option<Direction>) -> Result<PathBuf, String> {
    if files.join(MANIFEST_FILE).is_file() {
        return Ok(files.to_path_buf());
    }
    let modes = match mode {
        Some(m) => vec![m],
        None => vec![Direction::Encrypt, Direction::Decrypt],
    };
    let found: Vec<PathBuf> = modes
        .into_iter()
        .map(|m| serial::system_dir(files, m))
        .filter(|d| d.join(MANIFEST_FILE).is_file())
        .collect();
    match found.as_slice() {
        [one] => Ok(one.clone()),
        [] => Err(format!(
            "{}: no {MANIFEST_FILE} found here or in an AES_files_<mode> subdirectory",
            files.display()
        )),
        _ => Err(format!(
            "{}: holds both AES_files_enc and AES_files_dec, pass one of them",
            files.display()
        )),
    }
}

fn load(
    files: &Path,
    mode: Option<Direction>,
) -> Result<EquationSystem, Box<dyn std::error::Error>> {
    let dir = resolve_system_dir(files, mode)?;
    Ok(serial::read_system(&dir)?)
}

fn verify(
    mode: Direction,
    block: &Block,
    key: &Block,
    files: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let system = load(files, Some(mode))?;
    if system.direction() != mode {
        return Err(format!(
            "{} holds a {} system, not {mode}",
            files.display(),
            system.direction()
        )
        .into());
    }
    let block_label = match mode {
        Direction::Encrypt => "Clear",
        Direction::Decrypt => "Cipher",
    };
    writeln!(out, "## {block_label} block {block}")?;
    writeln!(out, "## Key block {key}")?;
    let evaluation = system.evaluate(block, key);
    for entry in &evaluation.trace {
        writeln!(out, "## {}", entry.label)?;
        writeln!(out, "{}", entry.value)?;
    }
    let expected = match mode {
        Direction::Encrypt => reference_encrypt(block, key),
        Direction::Decrypt => reference_decrypt(block, key),
    };
    writeln!(out, "{expected} (FIPS result)")?;

    let reference = reference_trace(mode, block, key);
    let first_diff = evaluation
        .trace
        .iter()
        .zip(&reference)
        .position(|(a, b)| a.value != b.value);
    if let Some(i) = first_diff {
        writeln!(
            err,
            "mismatch at stage {}: files give {}, reference gives {}",
            serial::stage_dir_name(i, &system.stages()[i].name()),
            evaluation.trace[i].value,
            reference[i].value
        )?;
        return Ok(EXIT_MISMATCH);
    }
    if evaluation.output != expected {
        writeln!(
            err,
            "mismatch: files give {}, reference gives {expected}",
            evaluation.output
        )?;
        return Ok(EXIT_MISMATCH);
    }
    Ok(EXIT_OK)
}

fn anf(table: &str, out: &mut dyn Write) -> CmdResult {
    let tt: TruthTable = table.parse()?;
    writeln!(out, "{}", tt.to_anf().to_string_with_base(1))?;
    Ok(EXIT_OK)
}

fn stats(files: &Path, out: &mut dyn Write) -> CmdResult {
    let system = load(files, None)?;
    writeln!(out, "direction {}", system.direction())?;
    let mut total = 0;
    for (i, stage) in system.stages().iter().enumerate() {
        let s = stage.stats();
        total += s.monomials;
        let histogram: Vec<String> = s
            .degree_histogram
            .iter()
            .map(|(d, n)| format!("{d}:{n}"))
            .collect();
        writeln!(
            out,
            "{} monomials={} per_equation={}..{} max_degree={} degrees={}",
            serial::stage_dir_name(i, &s.name),
            s.monomials,
            s.min_terms,
            s.max_terms,
            s.max_degree,
            histogram.join(",")
        )?;
    }
    writeln!(out, "total monomials={total}")?;
    let acc = system.variable_accounting();
    writeln!(
        out,
        "variables {} ({} state + {} key over {} rounds)",
        acc.total(),
        acc.state_variables(),
        acc.key_variables(),
        acc.rounds
    )?;
    writeln!(
        out,
        "structural variables {} ({} state layers + {} key layers of 128, input block and cipher key included)",
        acc.structural_total(),
        acc.state_layers,
        acc.key_layers
    )?;
    Ok(EXIT_OK)
}
