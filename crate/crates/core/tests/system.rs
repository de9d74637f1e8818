mod common;

use std::sync::OnceLock;

use aes_anf::aes::{reference_decrypt, reference_encrypt};
use aes_anf::system::{
    build_decryption_system, build_encryption_system, reference_trace, stage_plan,
};
use aes_anf::{Block, Direction, EquationSystem, StageKind};
use common::random_block;

fn enc() -> &'static EquationSystem {
    static SYS: OnceLock<EquationSystem> = OnceLock::new();
    SYS.get_or_init(|| build_encryption_system().unwrap())
}

fn dec() -> &'static EquationSystem {
    static SYS: OnceLock<EquationSystem> = OnceLock::new();
    SYS.get_or_init(|| build_decryption_system().unwrap())
}

fn block(s: &str) -> Block {
    s.parse().unwrap()
}

const PLAIN: &str = "00112233445566778899aabbccddeeff";
const KEY: &str = "000102030405060708090a0b0c0d0e0f";
const CIPHER: &str = "69c4e0d86a7b0430d8cdb78070b4c55a";

#[test]
fn stage_layout() {
    assert_eq!(enc().stages().len(), 21);
    assert_eq!(dec().stages().len(), 30);
    let names: Vec<String> = enc().stages().iter().map(|s| s.name()).collect();
    assert_eq!(names[0], "AddRoundKey0");
    assert_eq!(names[1], "Round0");
    assert_eq!(names[19], "FinalRound9");
    assert_eq!(names[20], "AddRoundKey10");
    let names: Vec<String> = dec().stages().iter().map(|s| s.name()).collect();
    assert_eq!(
        &names[..4],
        [
            "AddRoundKey10",
            "InvRound9",
            "AddRoundKey9",
            "InvMixColumns9"
        ]
    );
    assert_eq!(&names[28..], ["InvRound0", "AddRoundKey0"]);
    for s in enc().stages().iter().chain(dec().stages()) {
        assert_eq!(s.equations().len(), 128);
        assert_eq!(
            s.width(),
            if s.kind() == StageKind::AddRoundKey {
                256
            } else {
                128
            }
        );
    }
}

#[test]
fn fips_vector_and_trace() {
    let out = enc().evaluate(&block(PLAIN), &block(KEY));
    assert_eq!(out.output, block(CIPHER));
    let labels: Vec<&str> = out.trace.iter().map(|t| t.label.as_str()).collect();
    assert_eq!(&labels[..3], ["addRoundKey0", "Round0", "addRoundKey1"]);
    assert_eq!(labels[19], "Round9");
    assert_eq!(
        out.trace[1].value,
        block("5f72641557f5bc92f7be3b291db9f91a")
    );
    let back = dec().evaluate(&block(CIPHER), &block(KEY));
    assert_eq!(back.output, block(PLAIN));
    assert_eq!(back.trace[3].label, "invMixColumns9");
    assert_eq!(
        back.trace[3].value,
        block("54d990a16ba09ab596bbf40ea111702f")
    );
}

#[test]
fn systems_match_reference_on_random_inputs() {
    let mut rng = common::rng(40);
    for _ in 0..1000 {
        let (b, k) = (random_block(&mut rng), random_block(&mut rng));
        let e = enc().evaluate(&b, &k);
        assert_eq!(e.output, reference_encrypt(&b, &k));
        assert_eq!(e.trace, reference_trace(Direction::Encrypt, &b, &k));
        let d = dec().evaluate(&e.output, &k);
        assert_eq!(d.output, b);
        assert_eq!(d.output, reference_decrypt(&e.output, &k));
    }
}

#[test]
fn decryption_trace_matches_reference_trace() {
    let mut rng = common::rng(41);
    for _ in 0..100 {
        let (b, k) = (random_block(&mut rng), random_block(&mut rng));
        assert_eq!(
            dec().evaluate(&b, &k).trace,
            reference_trace(Direction::Decrypt, &b, &k)
        );
    }
}

#[test]
fn variable_accounting() {
    for sys in [enc(), dec()] {
        let acc = sys.variable_accounting();
        assert_eq!(acc.rounds, 10);
        assert_eq!(acc.state_variables(), 1280);
        assert_eq!(acc.key_variables(), 1280);
        assert_eq!(acc.total(), 2560);
        assert_eq!(acc.structural_total(), 2816);
        assert_eq!(sys.layer_space().width(), 2816);
    }
}

#[test]
fn stage_statistics() {
    for s in enc().stages() {
        let st = s.stats();
        match s.kind() {
            StageKind::AddRoundKey => {
                assert_eq!((st.min_terms, st.max_terms, st.max_degree), (2, 2, 1));
            }
            StageKind::Round | StageKind::FinalRound => assert_eq!(st.max_degree, 7),
            _ => unreachable!(),
        }
    }
    for s in dec().stages() {
        if s.kind() == StageKind::InvMixColumns {
            assert_eq!(s.stats().max_degree, 1);
        }
    }
}

#[test]
fn plans_alternate_keys_and_rounds() {
    let plan = stage_plan(Direction::Encrypt);
    let keyed: Vec<usize> = plan
        .iter()
        .filter(|(k, _)| *k == StageKind::AddRoundKey)
        .map(|(_, r)| *r)
        .collect();
    assert_eq!(keyed, (0..=10).collect::<Vec<_>>());
    let plan = stage_plan(Direction::Decrypt);
    let keyed: Vec<usize> = plan
        .iter()
        .filter(|(k, _)| *k == StageKind::AddRoundKey)
        .map(|(_, r)| *r)
        .collect();
    assert_eq!(keyed, (0..=10).rev().collect::<Vec<_>>());
}
