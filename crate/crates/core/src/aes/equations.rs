//! Per-bit ANF equations for the AES-128 sub-functions.
//!
//! Every builder returns 128 equations, equation `i` giving output bit `i` in
//! terms of the variables of one or two 128-variable segments of a caller
//! supplied [`VarSpace`].

use std::sync::{Arc, OnceLock};

use super::reference::{gf_mul, INV_MIX_COLUMNS, MIX_COLUMNS};
use super::tables::{INV_SBOX, RCON, SBOX, SHIFT_ROWS_BITS};
use crate::anf::{Anf, Segment, VarSpace};
use crate::boolfn::TruthTable;
use crate::error::{Error, Result};

pub const BLOCK_BITS: usize = 128;
const WORD_BITS: usize = 32;

fn coordinates_of(table: &[u8; 256]) -> [Anf; 8] {
    std::array::from_fn(|p| {
        TruthTable::from_fn(8, |x| table[x] >> (7 - p) & 1 == 1)
            .expect("arity 8 is supported")
            .to_anf()
    })
}

/// The eight coordinate functions of the S-box, most significant output bit
/// first, each over 8 variables with variable 0 the input's most significant
/// bit.
pub fn sbox_coordinate_anfs() -> [Anf; 8] {
    static CACHE: OnceLock<[Anf; 8]> = OnceLock::new();
    CACHE.get_or_init(|| coordinates_of(&SBOX)).clone()
}

pub fn inv_sbox_coordinate_anfs() -> [Anf; 8] {
    static CACHE: OnceLock<[Anf; 8]> = OnceLock::new();
    CACHE.get_or_init(|| coordinates_of(&INV_SBOX)).clone()
}

fn layer<'a>(space: &'a VarSpace, name: &str) -> Result<&'a Segment> {
    space.segment_of_width(name, BLOCK_BITS)
}

fn bytewise(space: &Arc<VarSpace>, seg: &Segment, coordinates: &[Anf; 8]) -> Result<Vec<Anf>> {
    let mut out = Vec::with_capacity(BLOCK_BITS);
    for byte in 0..16 {
        let base = seg.var(8 * byte);
        for coordinate in coordinates {
            out.push(coordinate.rename(space, |v| base + v)?);
        }
    }
    Ok(out)
}

pub fn subbytes_equations(space: &Arc<VarSpace>, layer_name: &str) -> Result<Vec<Anf>> {
    let seg = layer(space, layer_name)?;
    bytewise(space, seg, &sbox_coordinate_anfs())
}

pub fn inv_subbytes_equations(space: &Arc<VarSpace>, layer_name: &str) -> Result<Vec<Anf>> {
    let seg = layer(space, layer_name)?;
    bytewise(space, seg, &inv_sbox_coordinate_anfs())
}

/// Output bit `i` of ShiftRows reads input bit `shift_rows_permutation()[i]`.
pub fn shift_rows_permutation() -> [usize; 128] {
    SHIFT_ROWS_BITS
}

pub fn inv_shift_rows_permutation() -> [usize; 128] {
    let mut inv = [0usize; 128];
    for (i, &src) in SHIFT_ROWS_BITS.iter().enumerate() {
        inv[src] = i;
    }
    inv
}

fn permuted(space: &Arc<VarSpace>, seg: &Segment, perm: &[usize; 128]) -> Result<Vec<Anf>> {
    perm.iter()
        .map(|&src| Anf::var(space, seg.var(src)))
        .collect()
}

pub fn shiftrows_equations(space: &Arc<VarSpace>, layer_name: &str) -> Result<Vec<Anf>> {
    permuted(space, layer(space, layer_name)?, &SHIFT_ROWS_BITS)
}

pub fn inv_shiftrows_equations(space: &Arc<VarSpace>, layer_name: &str) -> Result<Vec<Anf>> {
    permuted(
        space,
        layer(space, layer_name)?,
        &inv_shift_rows_permutation(),
    )
}

/// Bit matrix of `x -> c * x` in GF(2^8): entry `[p][q]` is set when output
/// bit `p` depends on input bit `q`, both counted from the most significant
/// bit.
pub fn multiplication_matrix(c: u8) -> [[bool; 8]; 8] {
    let mut m = [[false; 8]; 8];
    for q in 0..8 {
        let image = gf_mul(c, 0x80 >> q);
        for (p, row) in m.iter_mut().enumerate() {
            row[q] = image >> (7 - p) & 1 == 1;
        }
    }
    m
}

fn column_mix(
    space: &Arc<VarSpace>,
    seg: &Segment,
    coefficients: &[[u8; 4]; 4],
) -> Result<Vec<Anf>> {
    let matrices: Vec<Vec<[[bool; 8]; 8]>> = coefficients
        .iter()
        .map(|row| row.iter().map(|&c| multiplication_matrix(c)).collect())
        .collect();
    let mut out = Vec::with_capacity(BLOCK_BITS);
    for column in 0..4 {
        for row in matrices.iter() {
            for p in 0..8 {
                let mut eq = Anf::zero(space);
                for (j, m) in row.iter().enumerate() {
                    let byte = 4 * column + j;
                    for (q, &hit) in m[p].iter().enumerate() {
                        if hit {
                            eq.xor_assign(&Anf::var(space, seg.var(8 * byte + q))?)?;
                        }
                    }
                }
                out.push(eq);
            }
        }
    }
    Ok(out)
}

pub fn mixcolumns_equations(space: &Arc<VarSpace>, layer_name: &str) -> Result<Vec<Anf>> {
    column_mix(space, layer(space, layer_name)?, &MIX_COLUMNS)
}

pub fn inv_mixcolumns_equations(space: &Arc<VarSpace>, layer_name: &str) -> Result<Vec<Anf>> {
    column_mix(space, layer(space, layer_name)?, &INV_MIX_COLUMNS)
}

/// Equation `i` is `x_i + k_i` over the state and key segments.
pub fn addroundkey_equations(
    space: &Arc<VarSpace>,
    state_layer: &str,
    key_layer: &str,
) -> Result<Vec<Anf>> {
    let state = layer(space, state_layer)?;
    let key = layer(space, key_layer)?;
    (0..BLOCK_BITS)
        .map(|i| Anf::var(space, state.var(i))?.xor(&Anf::var(space, key.var(i))?))
        .collect()
}

/// A single 128-variable segment `key` holding the previous round key.
pub fn key_space() -> Arc<VarSpace> {
    static SPACE: OnceLock<Arc<VarSpace>> = OnceLock::new();
    Arc::clone(
        SPACE.get_or_init(|| Arc::new(VarSpace::new([("key", BLOCK_BITS)]).expect("valid layout"))),
    )
}

/// The 32 bit equations of key-expansion word `num` (0..=43), expressed over
/// the 128 variables of the round key it is derived from.
///
/// Words 0 to 3 are the identity on the cipher key. A word whose index is a
/// multiple of 4 is `SubWord(RotWord(w3)) + Rcon + w0`; any other word is the
/// previous word plus the same-position word of the previous round key.
pub fn key_expansion_word_anf(num: usize) -> Result<Vec<Anf>> {
    if num > 43 {
        return Err(Error::WordIndex(num));
    }
    let space = key_space();
    let previous_word = |n: usize| -> Result<Vec<Anf>> {
        (0..WORD_BITS)
            .map(|t| Anf::var(&space, WORD_BITS * n + t))
            .collect()
    };
    if num < 4 {
        return previous_word(num);
    }
    if num.is_multiple_of(4) {
        let sbox = sbox_coordinate_anfs();
        let rcon = RCON[num / 4 - 1];
        let w0 = previous_word(0)?;
        let mut out = Vec::with_capacity(WORD_BITS);
        for byte in 0..4 {
            // RotWord: byte `byte` of the rotated word is byte `byte + 1` of w3
            let base = 3 * WORD_BITS + ((byte + 1) % 4) * 8;
            for (p, coordinate) in sbox.iter().enumerate() {
                let mut eq = coordinate.rename(&space, |v| base + v)?;
                if byte == 0 && rcon >> (7 - p) & 1 == 1 {
                    eq.xor_assign(&Anf::one(&space))?;
                }
                eq.xor_assign(&w0[8 * byte + p])?;
                out.push(eq);
            }
        }
        return Ok(out);
    }
    let before = key_expansion_word_anf(num - 1)?;
    let same_position = previous_word(num % 4)?;
    before
        .iter()
        .zip(&same_position)
        .map(|(a, b)| a.xor(b))
        .collect()
}

/// The 128 equations of round key `round` (1..=10) over the variables of
/// round key `round - 1`.
pub fn round_key_equations(round: usize) -> Result<Vec<Anf>> {
    if !(1..=10).contains(&round) {
        return Err(Error::RoundIndex(round));
    }
    let mut out = Vec::with_capacity(BLOCK_BITS);
    for w in 4 * round..4 * round + 4 {
        out.extend(key_expansion_word_anf(w)?);
    }
    Ok(out)
}
