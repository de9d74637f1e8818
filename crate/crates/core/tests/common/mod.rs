#![allow(dead_code)]

use std::sync::Arc;

use aes_anf::{Anf, Block, Monomial, VarSpace};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_block(rng: &mut StdRng) -> Block {
    let mut b = [0u8; 16];
    rng.fill(&mut b);
    Block(b)
}

/// Parses a monomial written as `1` or `x4x6x7`.
pub fn monomial_vars(text: &str) -> Vec<usize> {
    let text = text.trim();
    if text == "1" {
        return Vec::new();
    }
    text.split('x')
        .skip(1)
        .map(|v| {
            v.parse()
                .unwrap_or_else(|_| panic!("bad monomial {text:?}"))
        })
        .collect()
}

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// One monomial per line, duplicates kept.
pub fn fixture_terms(name: &str) -> Vec<Vec<usize>> {
    fixture(name).lines().map(monomial_vars).collect()
}

/// The fixture's monomials XOR-accumulated into an ANF over `space`.
pub fn fixture_anf(name: &str, space: &Arc<VarSpace>) -> Anf {
    Anf::from_var_sets(space, fixture_terms(name)).unwrap()
}

/// The fixture's monomials as a set; panics on duplicates.
pub fn fixture_set(name: &str, width: usize) -> std::collections::BTreeSet<Monomial> {
    let terms = fixture_terms(name);
    let set: std::collections::BTreeSet<Monomial> = terms
        .iter()
        .map(|vars| Monomial::from_vars(width, vars.iter().copied()).unwrap())
        .collect();
    assert_eq!(set.len(), terms.len(), "{name} lists a monomial twice");
    set
}

pub fn term_set(anf: &Anf) -> std::collections::BTreeSet<Monomial> {
    anf.terms().cloned().collect()
}

/// A random ANF over `space` with up to `max_terms` monomials of degree at
/// most `max_degree`.
pub fn random_anf(
    rng: &mut StdRng,
    space: &Arc<VarSpace>,
    max_terms: usize,
    max_degree: usize,
) -> Anf {
    let n = space.width();
    let count = rng.random_range(0..=max_terms);
    let sets: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let d = rng.random_range(0..=max_degree.min(n));
            (0..d).map(|_| rng.random_range(0..n)).collect()
        })
        .collect();
    Anf::from_var_sets(space, sets).unwrap()
}
