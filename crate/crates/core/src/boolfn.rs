//! Truth tables and the Möbius transform.
//!
//! Row `k` of a table of arity `n` holds `f(x_1, ..., x_n)` for the input
//! whose big-endian binary encoding is `k`, so `x_1` is the most significant
//! position. In the ANF produced from a table, `x_1` is variable 0.

use std::fmt;
use std::str::FromStr;

use crate::anf::{Anf, Monomial, VarSpace};
use crate::bits::BitMask;
use crate::error::{Error, Result};

/// Largest arity a truth table may have (2^24 rows, 2 MiB of storage).
pub const MAX_ARITY: usize = 24;

// Bits whose row index has bit `s` clear, for the six in-word butterfly passes.
const LOW_HALVES: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// The outputs of an `n`-variable Boolean function, `1 <= n <= 24`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    // row k lives at bit k % 64 of word k / 64
    words: Vec<u64>,
}

impl TruthTable {
    fn check_arity(arity: usize) -> Result<()> {
        if arity == 0 {
            return Err(Error::TruthTableLength(1));
        }
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge {
                arity,
                max: MAX_ARITY,
            });
        }
        Ok(())
    }

    pub fn zeros(arity: usize) -> Result<Self> {
        Self::check_arity(arity)?;
        Ok(TruthTable {
            arity,
            words: vec![0; (1usize << arity).div_ceil(64)],
        })
    }

    pub fn from_fn(arity: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        let mut tt = Self::zeros(arity)?;
        for k in 0..tt.len() {
            if f(k) {
                tt.words[k / 64] |= 1 << (k % 64);
            }
        }
        Ok(tt)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let arity = arity_of_len(bits.len())?;
        Self::from_fn(arity, |k| bits[k])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of rows, `2^arity`.
    pub fn len(&self) -> usize {
        1 << self.arity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, row: usize) -> bool {
        assert!(row < self.len(), "row {row} out of range");
        self.words[row / 64] >> (row % 64) & 1 == 1
    }

    pub fn set(&mut self, row: usize, value: bool) {
        assert!(row < self.len(), "row {row} out of range");
        if value {
            self.words[row / 64] |= 1 << (row % 64);
        } else {
            self.words[row / 64] &= !(1 << (row % 64));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(|k| self.get(k))
    }

    /// The input tuple `(x_1, ..., x_n)` of row `row`.
    pub fn input_of_row(arity: usize, row: usize) -> Vec<bool> {
        (0..arity)
            .map(|i| row >> (arity - 1 - i) & 1 == 1)
            .collect()
    }

    /// Hamming weight: the number of rows with output 1.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Rows with output 1, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.get(k)).collect()
    }

    pub fn is_balanced(&self) -> bool {
        self.weight() == self.len() / 2
    }

    /// `out[u] = XOR of in[v] over all v whose set bits are a subset of u`.
    ///
    /// Computed with in-place butterfly passes, one per input bit, in
    /// O(n 2^n) bit operations. The transform is an involution.
    pub fn mobius_transform(&self) -> TruthTable {
        let mut words = self.words.clone();
        let rows = self.len();
        for (s, low) in LOW_HALVES.iter().enumerate().take(self.arity.min(6)) {
            let shift = 1 << s;
            for w in &mut words {
                *w ^= (*w & low) << shift;
            }
        }
        for s in 6..self.arity {
            let stride = 1 << (s - 6);
            for j in 0..words.len() {
                if j & stride != 0 {
                    words[j] ^= words[j ^ stride];
                }
            }
        }
        if rows < 64 {
            words[0] &= (1u64 << rows) - 1;
        }
        TruthTable {
            arity: self.arity,
            words,
        }
    }

    /// The ANF over a flat space of `arity` variables.
    pub fn to_anf(&self) -> Anf {
        let n = self.arity;
        let space = VarSpace::flat(n);
        let coefficients = self.mobius_transform();
        let monomials = coefficients.support().into_iter().map(|u| {
            Monomial::from_mask(BitMask::from_indices(
                n,
                (0..n).filter(|i| u >> (n - 1 - i) & 1 == 1),
            ))
        });
        Anf::from_monomials(&space, monomials).expect("monomials lie within the table's arity")
    }

    /// Tabulates `anf` over its first `arity` variables.
    pub fn from_anf(anf: &Anf, arity: usize) -> Result<TruthTable> {
        Self::check_arity(arity)?;
        let mut coefficients = Self::zeros(arity)?;
        for m in anf.terms() {
            let mut row = 0usize;
            for v in m.vars() {
                if v >= arity {
                    return Err(Error::VariableOutOfRange {
                        index: v,
                        width: arity,
                    });
                }
                row |= 1 << (arity - 1 - v);
            }
            coefficients.set(row, true);
        }
        Ok(coefficients.mobius_transform())
    }
}

fn arity_of_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::TruthTableLength(len));
    }
    let arity = len.trailing_zeros() as usize;
    if arity > MAX_ARITY {
        return Err(Error::ArityTooLarge {
            arity,
            max: MAX_ARITY,
        });
    }
    Ok(arity)
}

impl FromStr for TruthTable {
    type Err = Error;

    /// Parses a '0'/'1' string whose first character is row 0.
    fn from_str(s: &str) -> Result<Self> {
        let arity = arity_of_len(s.len())?;
        let mut tt = Self::zeros(arity)?;
        for (position, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => tt.set(position, true),
                _ => return Err(Error::TruthTableChar { ch, position }),
            }
        }
        Ok(tt)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({self})")
    }
}

pub fn mobius_transform(tt: &TruthTable) -> TruthTable {
    tt.mobius_transform()
}

pub fn anf_from_truth_table(tt: &TruthTable) -> Anf {
    tt.to_anf()
}

pub fn truth_table_from_anf(anf: &Anf, arity: usize) -> Result<TruthTable> {
    TruthTable::from_anf(anf, arity)
}

/// Largest monomial size, -1 for the zero function.
pub fn algebraic_degree(anf: &Anf) -> i32 {
    anf.degree()
}
