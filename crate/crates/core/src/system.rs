//! Layered AES-128 equation systems.
//!
//! A system is an ordered list of stages. Every stage holds 128 equations
//! that map its input layer to a fresh output layer; AddRoundKey stages also
//! read a 128-variable round-key layer. Stage equations use a local variable
//! space: state variables at 0..128, key variables (if any) at 128..256.
//! No operation ever flattens several stages into one polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::aes::{self, Block, RoundKeySchedule, BLOCK_BITS};
use crate::anf::{Anf, Assignment, VarSpace};
use crate::error::{Error, Result};

pub const STATE_LAYER: &str = "state";
pub const KEY_LAYER: &str = "key";

/// Space of a stage that reads only the state.
pub fn state_space() -> Arc<VarSpace> {
    static SPACE: OnceLock<Arc<VarSpace>> = OnceLock::new();
    Arc::clone(SPACE.get_or_init(|| {
        Arc::new(VarSpace::new([(STATE_LAYER, BLOCK_BITS)]).expect("valid layout"))
    }))
}

/// Space of an AddRoundKey stage: state then round key.
pub fn keyed_space() -> Arc<VarSpace> {
    static SPACE: OnceLock<Arc<VarSpace>> = OnceLock::new();
    Arc::clone(SPACE.get_or_init(|| {
        Arc::new(
            VarSpace::new([(STATE_LAYER, BLOCK_BITS), (KEY_LAYER, BLOCK_BITS)])
                .expect("valid layout"),
        )
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Encrypt,
    Decrypt,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Encrypt => "enc",
            Direction::Decrypt => "dec",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "enc" => Ok(Direction::Encrypt),
            "dec" => Ok(Direction::Decrypt),
            other => Err(format!("unknown mode {other:?}, expected enc or dec")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StageKind {
    AddRoundKey,
    /// MixColumns after ShiftRows after SubBytes.
    Round,
    /// ShiftRows after SubBytes, the last encryption round.
    FinalRound,
    /// InvSubBytes after InvShiftRows.
    InvRound,
    InvMixColumns,
}

impl StageKind {
    const ALL: [StageKind; 5] = [
        StageKind::AddRoundKey,
        StageKind::Round,
        StageKind::FinalRound,
        StageKind::InvRound,
        StageKind::InvMixColumns,
    ];

    fn ident(self) -> &'static str {
        match self {
            StageKind::AddRoundKey => "AddRoundKey",
            StageKind::Round => "Round",
            StageKind::FinalRound => "FinalRound",
            StageKind::InvRound => "InvRound",
            StageKind::InvMixColumns => "InvMixColumns",
        }
    }

    pub fn has_key(self) -> bool {
        self == StageKind::AddRoundKey
    }

    pub fn space(self) -> Arc<VarSpace> {
        if self.has_key() {
            keyed_space()
        } else {
            state_space()
        }
    }

    /// Byte-level counterpart of the stage, used as the oracle.
    pub fn apply_reference(self, state: &Block, round_key: &Block) -> Block {
        match self {
            StageKind::AddRoundKey => aes::add_round_key(state, round_key),
            StageKind::Round => aes::mix_columns(&aes::shift_rows(&aes::sub_bytes(state))),
            StageKind::FinalRound => aes::shift_rows(&aes::sub_bytes(state)),
            StageKind::InvRound => aes::inv_sub_bytes(&aes::inv_shift_rows(state)),
            StageKind::InvMixColumns => aes::inv_mix_columns(state),
        }
    }

    /// Splits a stage name such as `InvMixColumns9` into kind and round.
    pub fn parse_name(name: &str) -> Option<(StageKind, usize)> {
        // longest identifiers first so "Round" does not shadow "FinalRound"
        let mut kinds = Self::ALL;
        kinds.sort_by_key(|k| std::cmp::Reverse(k.ident().len()));
        kinds.into_iter().find_map(|kind| {
            let digits = name.strip_prefix(kind.ident())?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let round: usize = digits.parse().ok()?;
            (round <= RoundKeySchedule::ROUNDS).then_some((kind, round))
        })
    }
}

/// The order of stages for a direction.
pub fn stage_plan(direction: Direction) -> Vec<(StageKind, usize)> {
    let mut plan = Vec::new();
    match direction {
        Direction::Encrypt => {
            for round in 0..9 {
                plan.push((StageKind::AddRoundKey, round));
                plan.push((StageKind::Round, round));
            }
            plan.push((StageKind::AddRoundKey, 9));
            plan.push((StageKind::FinalRound, 9));
            plan.push((StageKind::AddRoundKey, 10));
        }
        Direction::Decrypt => {
            plan.push((StageKind::AddRoundKey, 10));
            for round in (1..10).rev() {
                plan.push((StageKind::InvRound, round));
                plan.push((StageKind::AddRoundKey, round));
                plan.push((StageKind::InvMixColumns, round));
            }
            plan.push((StageKind::InvRound, 0));
            plan.push((StageKind::AddRoundKey, 0));
        }
    }
    plan
}

/// One layer of 128 equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    kind: StageKind,
    round: usize,
    equations: Vec<Anf>,
}

impl Stage {
    /// Checks there are exactly 128 equations, all over the kind's space.
    pub fn new(kind: StageKind, round: usize, equations: Vec<Anf>) -> Result<Self> {
        let name = format!("{}{}", kind.ident(), round);
        if equations.len() != BLOCK_BITS {
            return Err(Error::Stage {
                stage: name,
                message: format!("expected {BLOCK_BITS} equations, found {}", equations.len()),
            });
        }
        let space = kind.space();
        if let Some(i) = equations.iter().position(|e| **e.space() != *space) {
            return Err(Error::Stage {
                stage: name,
                message: format!("equation {i} is not over the stage's variable space"),
            });
        }
        if round > RoundKeySchedule::ROUNDS {
            return Err(Error::RoundIndex(round));
        }
        Ok(Stage {
            kind,
            round,
            equations,
        })
    }

    pub fn kind(&self) -> StageKind {
        self.kind
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn equations(&self) -> &[Anf] {
        &self.equations
    }

    pub fn state_width(&self) -> usize {
        BLOCK_BITS
    }

    pub fn key_width(&self) -> usize {
        if self.kind.has_key() {
            BLOCK_BITS
        } else {
            0
        }
    }

    /// Total mask width of the stage's equations.
    pub fn width(&self) -> usize {
        self.state_width() + self.key_width()
    }

    /// Identifier used for directories and the manifest, e.g. `FinalRound9`.
    pub fn name(&self) -> String {
        format!("{}{}", self.kind.ident(), self.round)
    }

    /// Label printed while generating files.
    pub fn progress_label(&self) -> String {
        let r = self.round;
        match self.kind {
            StageKind::AddRoundKey => format!("AddRoundKey{r}"),
            StageKind::Round | StageKind::FinalRound => format!("Round{r}"),
            StageKind::InvRound => format!("Round {r}"),
            StageKind::InvMixColumns => format!("InvMixColumns {r}"),
        }
    }

    /// Label printed in evaluation traces.
    pub fn trace_label(&self) -> String {
        trace_label(self.kind, self.round)
    }

    /// Evaluates the 128 equations on a concrete state and round key.
    pub fn evaluate(&self, state: &Block, round_key: &Block) -> Block {
        let assignment = if self.kind.has_key() {
            let mut bytes = [0u8; 32];
            bytes[..16].copy_from_slice(state.bytes());
            bytes[16..].copy_from_slice(round_key.bytes());
            Assignment::from_bytes(&bytes)
        } else {
            state.to_assignment()
        };
        Block::from_bits(
            self.equations
                .iter()
                .map(|e| e.evaluate_unchecked(&assignment)),
        )
    }

    pub fn stats(&self) -> StageStats {
        StageStats::of(&self.name(), &self.equations)
    }
}

fn trace_label(kind: StageKind, round: usize) -> String {
    match kind {
        StageKind::AddRoundKey => format!("addRoundKey{round}"),
        StageKind::Round | StageKind::FinalRound | StageKind::InvRound => format!("Round{round}"),
        StageKind::InvMixColumns => format!("invMixColumns{round}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub label: String,
    pub value: Block,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub output: Block,
    pub trace: Vec<TraceEntry>,
}

/// Variable counts of a layered system.
///
/// `total()` is the count of fresh variables introduced by the rounds, 128
/// state and 128 key variables per round. The structural count additionally
/// includes the input block and the cipher key, the first layer of each.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VariableAccounting {
    pub rounds: usize,
    pub state_layers: usize,
    pub key_layers: usize,
}

impl VariableAccounting {
    pub fn state_variables(&self) -> usize {
        (self.state_layers - 1) * BLOCK_BITS
    }

    pub fn key_variables(&self) -> usize {
        (self.key_layers - 1) * BLOCK_BITS
    }

    pub fn total(&self) -> usize {
        self.state_variables() + self.key_variables()
    }

    pub fn structural_total(&self) -> usize {
        (self.state_layers + self.key_layers) * BLOCK_BITS
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    direction: Direction,
    stages: Vec<Stage>,
}

impl EquationSystem {
    /// Checks the stage sequence matches the direction's plan.
    pub fn new(direction: Direction, stages: Vec<Stage>) -> Result<Self> {
        let plan = stage_plan(direction);
        let actual: Vec<(StageKind, usize)> = stages.iter().map(|s| (s.kind, s.round)).collect();
        if actual != plan {
            let at = plan
                .iter()
                .zip(&actual)
                .position(|(a, b)| a != b)
                .unwrap_or(plan.len().min(actual.len()));
            let stage = stages
                .get(at)
                .map(Stage::name)
                .unwrap_or_else(|| format!("#{at}"));
            return Err(Error::Stage {
                stage,
                message: format!(
                    "stage order does not match the {direction} layout ({} stages, expected {})",
                    actual.len(),
                    plan.len()
                ),
            });
        }
        Ok(EquationSystem { direction, stages })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// Folds the input through every stage, binding each AddRoundKey stage to
    /// the concrete round key from the reference schedule.
    pub fn evaluate(&self, input: &Block, key: &Block) -> Evaluation {
        let keys = RoundKeySchedule::new(key).round_keys();
        let mut state = *input;
        let mut trace = Vec::with_capacity(self.stages.len());
        for stage in &self.stages {
            state = stage.evaluate(&state, &keys[stage.round]);
            trace.push(TraceEntry {
                label: stage.trace_label(),
                value: state,
            });
        }
        Evaluation {
            output: state,
            trace,
        }
    }

    pub fn variable_accounting(&self) -> VariableAccounting {
        let rounds = self
            .stages
            .iter()
            .filter(|s| {
                matches!(
                    s.kind,
                    StageKind::Round | StageKind::FinalRound | StageKind::InvRound
                )
            })
            .count();
        let key_layers = self.stages.iter().filter(|s| s.kind.has_key()).count();
        VariableAccounting {
            rounds,
            state_layers: rounds + 1,
            key_layers,
        }
    }

    /// The whole layered variable space: one 128-variable segment per state
    /// layer (`state0` is the input block) and per round key.
    pub fn layer_space(&self) -> VarSpace {
        let acc = self.variable_accounting();
        let state = (0..acc.state_layers).map(|i| (format!("state{i}"), BLOCK_BITS));
        let key = (0..acc.key_layers).map(|i| (format!("key{i}"), BLOCK_BITS));
        VarSpace::new(state.chain(key)).expect("segment names are distinct")
    }
}

/// The byte-level trace of the same stage sequence.
pub fn reference_trace(direction: Direction, input: &Block, key: &Block) -> Vec<TraceEntry> {
    let keys = RoundKeySchedule::new(key).round_keys();
    let mut state = *input;
    stage_plan(direction)
        .into_iter()
        .map(|(kind, round)| {
            state = kind.apply_reference(&state, &keys[round]);
            TraceEntry {
                label: trace_label(kind, round),
                value: state,
            }
        })
        .collect()
}

fn compose(outer: &[Anf], inner: &[Anf]) -> Result<Vec<Anf>> {
    outer
        .par_iter()
        .map(|eq| eq.substitute_all(inner))
        .collect()
}

/// MixColumns after ShiftRows after SubBytes, composed per bit.
pub fn round_equations() -> Result<Vec<Anf>> {
    let space = state_space();
    let sb = aes::subbytes_equations(&space, STATE_LAYER)?;
    let sr = aes::shiftrows_equations(&space, STATE_LAYER)?;
    let mc = aes::mixcolumns_equations(&space, STATE_LAYER)?;
    compose(&mc, &compose(&sr, &sb)?)
}

pub fn final_round_equations() -> Result<Vec<Anf>> {
    let space = state_space();
    let sb = aes::subbytes_equations(&space, STATE_LAYER)?;
    let sr = aes::shiftrows_equations(&space, STATE_LAYER)?;
    compose(&sr, &sb)
}

/// InvSubBytes after InvShiftRows, composed per bit.
pub fn inv_round_equations() -> Result<Vec<Anf>> {
    let space = state_space();
    let isb = aes::inv_subbytes_equations(&space, STATE_LAYER)?;
    let isr = aes::inv_shiftrows_equations(&space, STATE_LAYER)?;
    compose(&isb, &isr)
}

fn build(direction: Direction) -> Result<EquationSystem> {
    let keyed = keyed_space();
    let state = state_space();
    let ark = aes::addroundkey_equations(&keyed, STATE_LAYER, KEY_LAYER)?;
    let mut cache: BTreeMap<&'static str, Vec<Anf>> = BTreeMap::new();
    let mut stages = Vec::new();
    for (kind, round) in stage_plan(direction) {
        let equations = match kind {
            StageKind::AddRoundKey => ark.clone(),
            StageKind::Round => cache.entry("round").or_insert(round_equations()?).clone(),
            StageKind::FinalRound => final_round_equations()?,
            StageKind::InvRound => cache
                .entry("inv_round")
                .or_insert(inv_round_equations()?)
                .clone(),
            StageKind::InvMixColumns => cache
                .entry("inv_mix")
                .or_insert(aes::inv_mixcolumns_equations(&state, STATE_LAYER)?)
                .clone(),
        };
        stages.push(Stage::new(kind, round, equations)?);
    }
    EquationSystem::new(direction, stages)
}

pub fn build_encryption_system() -> Result<EquationSystem> {
    build(Direction::Encrypt)
}

pub fn build_decryption_system() -> Result<EquationSystem> {
    build(Direction::Decrypt)
}

pub fn build_system(direction: Direction) -> Result<EquationSystem> {
    build(direction)
}

/// Monomial and degree counts over one stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageStats {
    pub name: String,
    pub equations: usize,
    pub monomials: usize,
    pub min_terms: usize,
    pub max_terms: usize,
    pub max_degree: i32,
    /// Monomial count per degree.
    pub degree_histogram: BTreeMap<usize, usize>,
}

impl StageStats {
    pub fn of(name: &str, equations: &[Anf]) -> StageStats {
        let mut histogram = BTreeMap::new();
        for m in equations.iter().flat_map(Anf::terms) {
            *histogram.entry(m.degree()).or_insert(0) += 1;
        }
        StageStats {
            name: name.to_string(),
            equations: equations.len(),
            monomials: equations.iter().map(Anf::len).sum(),
            min_terms: equations.iter().map(Anf::len).min().unwrap_or(0),
            max_terms: equations.iter().map(Anf::len).max().unwrap_or(0),
            max_degree: equations.iter().map(Anf::degree).max().unwrap_or(-1),
            degree_histogram: histogram,
        }
    }
}
