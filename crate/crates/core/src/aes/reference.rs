//! Table-based byte-level AES-128, the oracle every symbolic result is
//! checked against.
//!
//! The state is kept as the 16 input bytes in FIPS order (byte `r + 4c` is
//! row `r`, column `c`).

use std::fmt;
use std::str::FromStr;

use super::tables::{INV_SBOX, RCON, SBOX};
use crate::anf::Assignment;
use crate::error::{Error, Result};

/// A 128-bit block. Bit `i` is bit `7 - i % 8` of byte `i / 8`, so bit 0 is
/// the most significant bit of the first hex byte.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Block(pub [u8; 16]);

impl Block {
    pub const ZERO: Block = Block([0; 16]);

    pub fn bytes(&self) -> &[u8; 16] {
        &self.0
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i / 8] >> (7 - i % 8) & 1 == 1
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Block {
        let mut out = [0u8; 16];
        for (i, b) in bits.into_iter().take(128).enumerate() {
            if b {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        Block(out)
    }

    pub fn to_assignment(&self) -> Assignment {
        Assignment::from_bytes(&self.0)
    }

    pub fn xor(&self, other: &Block) -> Block {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(other.0) {
            *a ^= b;
        }
        Block(out)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl FromStr for Block {
    type Err = Error;

    /// Accepts exactly 32 lowercase hex characters.
    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 32
            || !s
                .bytes()
                .all(|c| c.is_ascii_digit() || (b'a'..=b'f').contains(&c))
        {
            return Err(Error::Hex(s.to_string()));
        }
        let mut out = [0u8; 16];
        hex::decode_to_slice(s, &mut out).map_err(|_| Error::Hex(s.to_string()))?;
        Ok(Block(out))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block({self})")
    }
}

/// Multiplication by 02 modulo x^8 + x^4 + x^3 + x + 1.
pub fn xtime(a: u8) -> u8 {
    (a << 1) ^ if a & 0x80 != 0 { 0x1b } else { 0 }
}

/// GF(2^8) product by shift-and-add over `xtime`.
pub fn gf_mul(a: u8, b: u8) -> u8 {
    let mut acc = 0;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    acc
}

pub const MIX_COLUMNS: [[u8; 4]; 4] = [
    [0x02, 0x03, 0x01, 0x01],
    [0x01, 0x02, 0x03, 0x01],
    [0x01, 0x01, 0x02, 0x03],
    [0x03, 0x01, 0x01, 0x02],
];

pub const INV_MIX_COLUMNS: [[u8; 4]; 4] = [
    [0x0e, 0x0b, 0x0d, 0x09],
    [0x09, 0x0e, 0x0b, 0x0d],
    [0x0d, 0x09, 0x0e, 0x0b],
    [0x0b, 0x0d, 0x09, 0x0e],
];

pub fn sub_bytes(b: &Block) -> Block {
    Block(b.0.map(|x| SBOX[x as usize]))
}

pub fn inv_sub_bytes(b: &Block) -> Block {
    Block(b.0.map(|x| INV_SBOX[x as usize]))
}

/// Byte `r + 4c` of the output is byte `r + 4((c + r) mod 4)` of the input.
pub fn shift_rows(b: &Block) -> Block {
    let mut out = [0u8; 16];
    for c in 0..4 {
        for r in 0..4 {
            out[r + 4 * c] = b.0[r + 4 * ((c + r) % 4)];
        }
    }
    Block(out)
}

pub fn inv_shift_rows(b: &Block) -> Block {
    let mut out = [0u8; 16];
    for c in 0..4 {
        for r in 0..4 {
            out[r + 4 * ((c + r) % 4)] = b.0[r + 4 * c];
        }
    }
    Block(out)
}

fn mix_with(b: &Block, matrix: &[[u8; 4]; 4]) -> Block {
    let mut out = [0u8; 16];
    for c in 0..4 {
        let col = &b.0[4 * c..4 * c + 4];
        for (r, row) in matrix.iter().enumerate() {
            out[4 * c + r] = row
                .iter()
                .zip(col)
                .fold(0, |acc, (&m, &x)| acc ^ gf_mul(m, x));
        }
    }
    Block(out)
}

pub fn mix_columns(b: &Block) -> Block {
    mix_with(b, &MIX_COLUMNS)
}

pub fn inv_mix_columns(b: &Block) -> Block {
    mix_with(b, &INV_MIX_COLUMNS)
}

pub fn add_round_key(b: &Block, key: &Block) -> Block {
    b.xor(key)
}

/// The eleven AES-128 round keys; round key 0 is the cipher key.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RoundKeySchedule {
    words: [[u8; 4]; 44],
}

impl RoundKeySchedule {
    pub const ROUNDS: usize = 10;

    pub fn new(key: &Block) -> Self {
        let mut words = [[0u8; 4]; 44];
        for (i, w) in words.iter_mut().take(4).enumerate() {
            w.copy_from_slice(&key.0[4 * i..4 * i + 4]);
        }
        for i in 4..44 {
            let mut temp = words[i - 1];
            if i % 4 == 0 {
                temp.rotate_left(1);
                temp = temp.map(|x| SBOX[x as usize]);
                temp[0] ^= RCON[i / 4 - 1];
            }
            for (t, p) in temp.iter_mut().zip(words[i - 4]) {
                *t ^= p;
            }
            words[i] = temp;
        }
        RoundKeySchedule { words }
    }

    /// Word `i` of the 44-word expansion.
    pub fn word(&self, i: usize) -> [u8; 4] {
        self.words[i]
    }

    pub fn round_key(&self, round: usize) -> Block {
        let mut out = [0u8; 16];
        for j in 0..4 {
            out[4 * j..4 * j + 4].copy_from_slice(&self.words[4 * round + j]);
        }
        Block(out)
    }

    pub fn round_keys(&self) -> [Block; 11] {
        std::array::from_fn(|r| self.round_key(r))
    }
}

pub fn reference_key_schedule(key: &Block) -> RoundKeySchedule {
    RoundKeySchedule::new(key)
}

pub fn reference_encrypt(block: &Block, key: &Block) -> Block {
    let keys = RoundKeySchedule::new(key);
    let mut s = add_round_key(block, &keys.round_key(0));
    for round in 1..10 {
        s = mix_columns(&shift_rows(&sub_bytes(&s)));
        s = add_round_key(&s, &keys.round_key(round));
    }
    s = shift_rows(&sub_bytes(&s));
    add_round_key(&s, &keys.round_key(10))
}

pub fn reference_decrypt(block: &Block, key: &Block) -> Block {
    let keys = RoundKeySchedule::new(key);
    let mut s = add_round_key(block, &keys.round_key(10));
    for round in (1..10).rev() {
        s = inv_sub_bytes(&inv_shift_rows(&s));
        s = add_round_key(&s, &keys.round_key(round));
        s = inv_mix_columns(&s);
    }
    s = inv_sub_bytes(&inv_shift_rows(&s));
    add_round_key(&s, &keys.round_key(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(s: &str) -> Block {
        s.parse().unwrap()
    }

    const PLAIN: &str = "00112233445566778899aabbccddeeff";
    const KEY: &str = "000102030405060708090a0b0c0d0e0f";
    const CIPHER: &str = "69c4e0d86a7b0430d8cdb78070b4c55a";

    #[test]
    fn fips_vector() {
        assert_eq!(reference_encrypt(&block(PLAIN), &block(KEY)), block(CIPHER));
        assert_eq!(reference_decrypt(&block(CIPHER), &block(KEY)), block(PLAIN));
    }

    #[test]
    fn key_schedule_last_round_key() {
        // FIPS 197 appendix A.1 key expands to 2b7e1516... with final key d014f9a8...
        let keys = RoundKeySchedule::new(&block("2b7e151628aed2a6abf7158809cf4f3c"));
        assert_eq!(
            keys.round_key(10),
            block("d014f9a8c9ee2589e13f0cc8b6630ca6")
        );
        assert_eq!(keys.word(4), [0xa0, 0xfa, 0xfe, 0x17]);
    }

    #[test]
    fn xtime_and_products() {
        assert_eq!(xtime(0x57), 0xae);
        assert_eq!(xtime(0xae), 0x47);
        assert_eq!(gf_mul(0x57, 0x13), 0xfe);
    }

    #[test]
    fn hex_parsing_is_strict() {
        assert!("00112233445566778899AABBCCDDEEFF".parse::<Block>().is_err());
        assert!("0011".parse::<Block>().is_err());
        assert!("zz112233445566778899aabbccddeeff".parse::<Block>().is_err());
        assert_eq!(block(PLAIN).to_string(), PLAIN);
    }

    #[test]
    fn bit_order_is_msb_first() {
        let b = block("80000000000000000000000000000001");
        assert!(b.bit(0) && b.bit(127));
        assert!(!b.bit(7));
        assert_eq!(Block::from_bits((0..128).map(|i| b.bit(i))), b);
    }

    #[test]
    fn single_step_inverses() {
        let b = block(PLAIN);
        assert_eq!(inv_shift_rows(&shift_rows(&b)), b);
        assert_eq!(inv_sub_bytes(&sub_bytes(&b)), b);
        assert_eq!(inv_mix_columns(&mix_columns(&b)), b);
    }
}
