//! AES-128 in two forms: symbolic per-bit equation builders and a concrete
//! byte-level reference cipher.

mod equations;
mod reference;
mod tables;

pub use equations::{
    addroundkey_equations, inv_mixcolumns_equations, inv_sbox_coordinate_anfs,
    inv_shift_rows_permutation, inv_shiftrows_equations, inv_subbytes_equations,
    key_expansion_word_anf, key_space, mixcolumns_equations, multiplication_matrix,
    round_key_equations, sbox_coordinate_anfs, shift_rows_permutation, shiftrows_equations,
    subbytes_equations, BLOCK_BITS,
};
pub use reference::{
    add_round_key, gf_mul, inv_mix_columns, inv_shift_rows, inv_sub_bytes, mix_columns,
    reference_decrypt, reference_encrypt, reference_key_schedule, shift_rows, sub_bytes, xtime,
    Block, RoundKeySchedule, INV_MIX_COLUMNS, MIX_COLUMNS,
};
pub use tables::{INV_SBOX, RCON, SBOX, SHIFT_ROWS_BITS};
