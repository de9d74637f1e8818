mod common;

use std::sync::Arc;

use ::aes::cipher::generic_array::GenericArray;
use ::aes::cipher::{BlockDecrypt, BlockEncrypt, KeyInit};
use aes_anf::aes::*;
use aes_anf::system::{final_round_equations, inv_round_equations, round_equations};
use aes_anf::{Anf, Assignment, Block, Monomial, TruthTable, VarSpace};
use common::{fixture, fixture_anf, fixture_set, random_block, term_set};
use rand::Rng;

fn state_space() -> Arc<VarSpace> {
    Arc::new(VarSpace::new([("state", 128)]).unwrap())
}

fn apply(equations: &[Anf], input: &Block) -> Block {
    let a = input.to_assignment();
    Block::from_bits(equations.iter().map(|e| e.evaluate(&a).unwrap()))
}

/// Random states plus the all-zero and all-one blocks.
fn test_states(seed: u64, count: usize) -> Vec<Block> {
    let mut rng = common::rng(seed);
    let mut states = vec![Block::ZERO, Block([0xff; 16])];
    states.extend((0..count).map(|_| random_block(&mut rng)));
    states
}

fn check_against_oracle(name: &str, equations: &[Anf], oracle: fn(&Block) -> Block, seed: u64) {
    assert_eq!(equations.len(), 128, "{name}");
    for s in test_states(seed, 1000) {
        assert_eq!(apply(equations, &s), oracle(&s), "{name} on {s}");
    }
}

#[test]
fn sub_functions_match_byte_oracle() {
    let sp = state_space();
    check_against_oracle(
        "SubBytes",
        &subbytes_equations(&sp, "state").unwrap(),
        sub_bytes,
        20,
    );
    check_against_oracle(
        "InvSubBytes",
        &inv_subbytes_equations(&sp, "state").unwrap(),
        inv_sub_bytes,
        21,
    );
    check_against_oracle(
        "ShiftRows",
        &shiftrows_equations(&sp, "state").unwrap(),
        shift_rows,
        22,
    );
    check_against_oracle(
        "InvShiftRows",
        &inv_shiftrows_equations(&sp, "state").unwrap(),
        inv_shift_rows,
        23,
    );
    check_against_oracle(
        "MixColumns",
        &mixcolumns_equations(&sp, "state").unwrap(),
        mix_columns,
        24,
    );
    check_against_oracle(
        "InvMixColumns",
        &inv_mixcolumns_equations(&sp, "state").unwrap(),
        inv_mix_columns,
        25,
    );
}

#[test]
fn composed_rounds_match_byte_oracle() {
    check_against_oracle(
        "Round",
        &round_equations().unwrap(),
        |s| mix_columns(&shift_rows(&sub_bytes(s))),
        26,
    );
    check_against_oracle(
        "FinalRound",
        &final_round_equations().unwrap(),
        |s| shift_rows(&sub_bytes(s)),
        27,
    );
    check_against_oracle(
        "InvRound",
        &inv_round_equations().unwrap(),
        |s| inv_sub_bytes(&inv_shift_rows(s)),
        28,
    );
}

#[test]
fn add_round_key_matches_xor() {
    let sp = Arc::new(VarSpace::new([("state", 128), ("key", 128)]).unwrap());
    let eqs = addroundkey_equations(&sp, "state", "key").unwrap();
    let mut rng = common::rng(29);
    for _ in 0..1000 {
        let (s, k) = (random_block(&mut rng), random_block(&mut rng));
        let mut bytes = s.0.to_vec();
        bytes.extend_from_slice(&k.0);
        let a = Assignment::from_bytes(&bytes);
        let out = Block::from_bits(eqs.iter().map(|e| e.evaluate(&a).unwrap()));
        assert_eq!(out, add_round_key(&s, &k));
    }
    assert!(eqs.iter().all(|e| e.len() == 2 && e.degree() == 1));
}

#[test]
fn sbox_coordinates() {
    let coordinates = sbox_coordinate_anfs();
    let zero = Assignment::from_bits([false; 8]);
    let mut image = 0u8;
    for (p, c) in coordinates.iter().enumerate() {
        assert_eq!(c.degree(), 7, "coordinate {p}");
        let tt = TruthTable::from_anf(c, 8).unwrap();
        assert_eq!(tt.weight(), 128, "coordinate {p}");
        for (x, s) in SBOX.iter().enumerate() {
            assert_eq!(tt.get(x), s >> (7 - p) & 1 == 1);
        }
        if c.evaluate(&zero).unwrap() {
            image |= 0x80 >> p;
        }
    }
    assert_eq!(image, 0x63);
    for c in inv_sbox_coordinate_anfs() {
        assert_eq!(c.degree(), 7);
        assert_eq!(TruthTable::from_anf(&c, 8).unwrap().weight(), 128);
    }
}

#[test]
fn subbytes_bit_127_terms() {
    let eqs = subbytes_equations(&state_space(), "state").unwrap();
    assert_eq!(term_set(&eqs[127]), fixture_set("sbox_bit127.txt", 128));
    assert_eq!(eqs[127].len(), 132);
}

#[test]
fn inverse_round_bit_0_terms() {
    let sp = state_space();
    let isb = inv_subbytes_equations(&sp, "state").unwrap();
    assert_eq!(term_set(&isb[0]), fixture_set("inv_sbox_bit0.txt", 128));
    let isr = inv_shiftrows_equations(&sp, "state").unwrap();
    assert_eq!(
        term_set(&isr[0]),
        fixture_set("inv_shiftrows_bit0.txt", 128)
    );
    let imc = inv_mixcolumns_equations(&sp, "state").unwrap();
    assert_eq!(
        term_set(&imc[0]),
        fixture_set("inv_mixcolumns_bit0.txt", 128)
    );
}

#[test]
fn mixcolumns_last_column_terms() {
    let eqs = mixcolumns_equations(&state_space(), "state").unwrap();
    let text = fixture("mixcolumns_bit120_127.txt");
    let mut seen = 0;
    for line in text.lines() {
        let (bit, sum) = line.split_once(": ").unwrap();
        let bit: usize = bit.parse().unwrap();
        let expected: std::collections::BTreeSet<Monomial> = sum
            .split(" + ")
            .map(|m| Monomial::from_vars(128, common::monomial_vars(m)).unwrap())
            .collect();
        assert_eq!(term_set(&eqs[bit]), expected, "b{bit}");
        seen += 1;
    }
    assert_eq!(seen, 8);
}

#[test]
fn shiftrows_permutation_list() {
    let listed: Vec<usize> = fixture("shiftrows_bits.txt")
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(shift_rows_permutation().to_vec(), listed);
    // the same permutation from the byte rule out[r + 4c] = in[r + 4((c + r) mod 4)]
    let derived: Vec<usize> = (0..128)
        .map(|i| {
            let (byte, bit) = (i / 8, i % 8);
            let (r, c) = (byte % 4, byte / 4);
            8 * (r + 4 * ((c + r) % 4)) + bit
        })
        .collect();
    assert_eq!(listed, derived);
    let inv = inv_shift_rows_permutation();
    assert!((0..128).all(|i| inv[listed[i]] == i));
}

#[test]
fn round_bit_0_terms() {
    // the fixture lists the five S-box coordinate sums without cancelling
    // repeated monomials; reduced modulo 2 it is the round equation
    let round = round_equations().unwrap();
    let listed = fixture_anf("round_bit0.txt", &state_space());
    assert_eq!(common::fixture_terms("round_bit0.txt").len(), 554);
    assert_eq!(term_set(&round[0]), term_set(&listed));
    assert_eq!(round[0].len(), 448);
    assert!(!round[0].constant_term());
    assert!(round[0].contains_vars([4, 6, 7]));
    assert_eq!(round[0].degree(), 7);
}

#[test]
fn key_word_4_bit_0_terms() {
    let word = key_expansion_word_anf(4).unwrap();
    assert_eq!(word.len(), 32);
    assert_eq!(term_set(&word[0]), fixture_set("key_word4_bit0.txt", 128));
}

#[test]
fn symbolic_key_schedule_matches_concrete() {
    let mut rng = common::rng(30);
    let mut keys: Vec<Block> = (0..50).map(|_| random_block(&mut rng)).collect();
    keys.push("000102030405060708090a0b0c0d0e0f".parse().unwrap());
    keys.push("2b7e151628aed2a6abf7158809cf4f3c".parse().unwrap());
    let rounds: Vec<Vec<Anf>> = (1..=10).map(|r| round_key_equations(r).unwrap()).collect();
    for key in keys {
        let schedule = RoundKeySchedule::new(&key);
        for r in 1..=10 {
            let previous = schedule.round_key(r - 1);
            assert_eq!(
                apply(&rounds[r - 1], &previous),
                schedule.round_key(r),
                "round {r}"
            );
        }
    }
    for w in 0..4 {
        let word = key_expansion_word_anf(w).unwrap();
        assert!(word
            .iter()
            .enumerate()
            .all(|(t, e)| e.len() == 1 && e.contains_vars([32 * w + t])));
    }
    assert!(key_expansion_word_anf(44).is_err());
    assert!(round_key_equations(0).is_err());
    assert!(round_key_equations(11).is_err());
}

#[test]
fn reference_cipher_matches_aes_crate() {
    let mut rng = common::rng(31);
    for _ in 0..1000 {
        let (block, key) = (random_block(&mut rng), random_block(&mut rng));
        let cipher = ::aes::Aes128::new(GenericArray::from_slice(&key.0));
        let mut buf = GenericArray::clone_from_slice(&block.0);
        cipher.encrypt_block(&mut buf);
        let expected = Block(buf.into());
        assert_eq!(reference_encrypt(&block, &key), expected);
        let mut back = buf;
        cipher.decrypt_block(&mut back);
        assert_eq!(Block(back.into()), block);
        assert_eq!(reference_decrypt(&expected, &key), block);
    }
}

#[test]
fn encrypt_decrypt_inverse_random() {
    let mut rng = common::rng(32);
    for _ in 0..1000 {
        let (block, key) = (random_block(&mut rng), random_block(&mut rng));
        assert_eq!(
            reference_decrypt(&reference_encrypt(&block, &key), &key),
            block
        );
        assert_eq!(
            reference_encrypt(&reference_decrypt(&block, &key), &key),
            block
        );
    }
}

#[test]
fn multiplication_matrices_are_gf_products() {
    let mut rng = common::rng(33);
    for c in [0x01u8, 0x02, 0x03, 0x09, 0x0b, 0x0d, 0x0e] {
        let m = multiplication_matrix(c);
        for _ in 0..50 {
            let x: u8 = rng.random();
            let mut y = 0u8;
            for (p, row) in m.iter().enumerate() {
                let bit = row
                    .iter()
                    .enumerate()
                    .fold(false, |acc, (q, &set)| acc ^ (set && x >> (7 - q) & 1 == 1));
                if bit {
                    y |= 0x80 >> p;
                }
            }
            assert_eq!(y, gf_mul(c, x), "c={c:#x} x={x:#x}");
        }
    }
}
