//! One-file-per-bit storage of equation systems.
//!
//! A system for direction `enc` lives in `AES_files_enc/`. Every stage gets
//! a subdirectory `NN_<StageName>/` holding `bit_000.eq` .. `bit_127.eq`.
//! Each line of a bit file is one monomial: a constant character followed by
//! a mask of `0`/`1`, variable 0 leftmost. The constant monomial is written
//! as `1` followed by an all-zero mask, any other monomial as `0` followed by
//! its mask. Lines are sorted by mask read as a big-endian integer and are
//! terminated by a single line feed. An empty `END` file marks the end of the
//! stage data and `manifest.txt` is written last.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use crate::aes::BLOCK_BITS;
use crate::anf::{Anf, Monomial, VarSpace};
use crate::bits::BitMask;
use crate::error::{Error, Result};
use crate::system::{Direction, EquationSystem, Stage, StageKind};

pub const MANIFEST_FILE: &str = "manifest.txt";
pub const END_FILE: &str = "END";

/// The directory `write_system` creates under `root` for `direction`.
pub fn system_dir(root: &Path, direction: Direction) -> PathBuf {
    root.join(format!("AES_files_{direction}"))
}

pub fn stage_dir_name(index: usize, stage_name: &str) -> String {
    format!("{index:02}_{stage_name}")
}

pub fn bit_file_name(bit: usize) -> String {
    format!("bit_{bit:03}.eq")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub index: usize,
    pub name: String,
    pub state_width: usize,
    pub key_width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub direction: Direction,
    pub stages: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn of(system: &EquationSystem) -> Manifest {
        Manifest {
            direction: system.direction(),
            stages: system
                .stages()
                .iter()
                .enumerate()
                .map(|(index, s)| ManifestEntry {
                    index,
                    name: s.name(),
                    state_width: s.state_width(),
                    key_width: s.key_width(),
                })
                .collect(),
        }
    }

    pub fn parse(text: &str, path: &Path) -> Result<Manifest> {
        let mut direction = None;
        let mut stages = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: String| Error::parse(path, line_no, msg);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["direction", d] => {
                    if direction.is_some() {
                        return Err(err("direction given twice".into()));
                    }
                    direction = Some(d.parse::<Direction>().map_err(err)?);
                }
                ["stage", index, name, state, key] => {
                    let index: usize = index
                        .parse()
                        .map_err(|_| err(format!("bad stage index {index:?}")))?;
                    if index != stages.len() {
                        return Err(err(format!(
                            "stage index {index} out of sequence, expected {}",
                            stages.len()
                        )));
                    }
                    let width = |field: &str, key: &str| -> Result<usize> {
                        field
                            .strip_prefix(key)
                            .and_then(|w| w.strip_prefix('='))
                            .and_then(|w| w.parse().ok())
                            .ok_or_else(|| err(format!("expected {key}=<width>, found {field:?}")))
                    };
                    stages.push(ManifestEntry {
                        index,
                        name: name.to_string(),
                        state_width: width(state, "state_width")?,
                        key_width: width(key, "key_width")?,
                    });
                }
                _ => return Err(err(format!("unrecognized manifest line {line:?}"))),
            }
        }
        let direction =
            direction.ok_or_else(|| Error::parse(path, 0, "manifest has no direction line"))?;
        Ok(Manifest { direction, stages })
    }
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# AES-128 layered equation system")?;
        writeln!(
            f,
            "# bit file line: constant character, then mask with variable 0 leftmost"
        )?;
        writeln!(
            f,
            "# AddRoundKey masks: state variables 0..127, then round-key variables 128..255"
        )?;
        writeln!(f, "direction {}", self.direction)?;
        for s in &self.stages {
            writeln!(
                f,
                "stage {} {} state_width={} key_width={}",
                s.index, s.name, s.state_width, s.key_width
            )?;
        }
        Ok(())
    }
}

/// Renders an equation as bit-file lines in canonical order.
pub fn format_equation(anf: &Anf) -> String {
    let width = anf.width();
    let mut out = String::with_capacity(anf.len() * (width + 2));
    for m in anf.sorted_terms() {
        out.push(if m.is_one() { '1' } else { '0' });
        out.push_str(&m.mask().to_bit_string(width));
        out.push('\n');
    }
    out
}

/// Parses bit-file lines over `space`; repeated lines cancel. `path` only
/// labels errors.
pub fn parse_equation(text: &str, space: &Arc<VarSpace>, path: &Path) -> Result<Anf> {
    let width = space.width();
    let mut anf = Anf::zero(space);
    if text.is_empty() {
        return Ok(anf);
    }
    let body = match text.strip_suffix('\n') {
        Some(body) => body,
        None => {
            let line = text.split('\n').count();
            return Err(Error::parse(path, line, "missing final line feed"));
        }
    };
    for (i, line) in body.split('\n').enumerate() {
        let line_no = i + 1;
        let bytes = line.as_bytes();
        if bytes.len() != width + 1 {
            return Err(Error::parse(
                path,
                line_no,
                format!(
                    "line has {} characters, expected {}",
                    bytes.len(),
                    width + 1
                ),
            ));
        }
        if let Some(pos) = bytes.iter().position(|&b| b != b'0' && b != b'1') {
            let ch = line[pos..].chars().next().unwrap_or('?');
            return Err(Error::parse(
                path,
                line_no,
                format!("illegal character {ch:?} at column {}", pos + 1),
            ));
        }
        let mask = BitMask::from_indices(
            width,
            bytes[1..]
                .iter()
                .enumerate()
                .filter(|(_, &b)| b == b'1')
                .map(|(j, _)| j),
        );
        match (bytes[0], mask.is_empty()) {
            (b'1', false) => {
                return Err(Error::parse(
                    path,
                    line_no,
                    "constant line must have an all-zero mask",
                ))
            }
            (b'0', true) => {
                return Err(Error::parse(
                    path,
                    line_no,
                    "empty mask must be written with constant 1",
                ))
            }
            _ => {}
        }
        anf.toggle(Monomial::from_mask(mask));
    }
    Ok(anf)
}

/// Writes `system` under `root` and returns the manifest written.
pub fn write_system(system: &EquationSystem, root: &Path) -> Result<Manifest> {
    write_system_with_progress(system, root, |_| {})
}

/// Like `write_system`, calling `progress` before each stage is written.
pub fn write_system_with_progress(
    system: &EquationSystem,
    root: &Path,
    mut progress: impl FnMut(&Stage),
) -> Result<Manifest> {
    let dir = system_dir(root, system.direction());
    if dir.exists() {
        fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    for (index, stage) in system.stages().iter().enumerate() {
        progress(stage);
        let stage_dir = dir.join(stage_dir_name(index, &stage.name()));
        fs::create_dir(&stage_dir).map_err(|e| Error::io(&stage_dir, e))?;
        stage
            .equations()
            .par_iter()
            .enumerate()
            .try_for_each(|(bit, eq)| {
                let path = stage_dir.join(bit_file_name(bit));
                fs::write(&path, format_equation(eq)).map_err(|e| Error::io(&path, e))
            })?;
    }
    let end = dir.join(END_FILE);
    fs::write(&end, "").map_err(|e| Error::io(&end, e))?;
    let manifest = Manifest::of(system);
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, manifest.to_string()).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

/// Reads a system directory, the one containing `manifest.txt`.
pub fn read_system(dir: &Path) -> Result<EquationSystem> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = match fs::read_to_string(&manifest_path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::parse(&manifest_path, 0, "missing manifest"))
        }
        Err(e) => return Err(Error::io(&manifest_path, e)),
    };
    let manifest = Manifest::parse(&text, &manifest_path)?;
    let mut stages = Vec::with_capacity(manifest.stages.len());
    for entry in &manifest.stages {
        let line = text
            .lines()
            .position(|l| l.starts_with(&format!("stage {} ", entry.index)))
            .map_or(0, |i| i + 1);
        let (kind, round) = StageKind::parse_name(&entry.name).ok_or_else(|| {
            Error::parse(
                &manifest_path,
                line,
                format!("unknown stage name {:?}", entry.name),
            )
        })?;
        let expected_key = if kind.has_key() { BLOCK_BITS } else { 0 };
        if entry.state_width != BLOCK_BITS || entry.key_width != expected_key {
            return Err(Error::parse(
                &manifest_path,
                line,
                format!(
                    "stage {} declares widths {}+{}, expected {}+{}",
                    entry.name, entry.state_width, entry.key_width, BLOCK_BITS, expected_key
                ),
            ));
        }
        let space = kind.space();
        let stage_dir = dir.join(stage_dir_name(entry.index, &entry.name));
        let equations = (0..BLOCK_BITS)
            .into_par_iter()
            .map(|bit| {
                let path = stage_dir.join(bit_file_name(bit));
                let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                parse_equation(&text, &space, &path)
            })
            .collect::<Result<Vec<Anf>>>()?;
        stages.push(Stage::new(kind, round, equations)?);
    }
    EquationSystem::new(manifest.direction, stages)
}

pub fn write_equation_file(anf: &Anf, path: &Path) -> Result<()> {
    fs::write(path, format_equation(anf)).map_err(|e| Error::io(path, e))
}

pub fn read_equation_file(path: &Path, space: &Arc<VarSpace>) -> Result<Anf> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_equation(&text, space, path)
}
