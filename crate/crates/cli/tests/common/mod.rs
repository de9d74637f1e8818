#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub const PLAIN: &str = "00112233445566778899aabbccddeeff";
pub const KEY: &str = "000102030405060708090a0b0c0d0e0f";
pub const CIPHER: &str = "69c4e0d86a7b0430d8cdb78070b4c55a";

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("aes-anf").chain(args.iter().copied());
    let code = aes_anf_cli::run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

pub fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn core_data(name: &str) -> String {
    let path = format!("{}/../core/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// The listing with its directory line pointed at `dir`.
pub fn expected_generate(listing: &str, dir: &Path) -> String {
    listing.replace(
        "## Create directory AES_files",
        &format!("## Create directory {}", dir.display()),
    )
}

pub fn generate(mode: &str, root: &Path) -> Output {
    run(&["generate", "--mode", mode, "--out", path_str(root)])
}

pub fn verify(mode: &str, block: &str, key: &str, files: &Path) -> Output {
    run(&[
        "verify",
        "--mode",
        mode,
        "--block",
        block,
        "--key",
        key,
        "--files",
        path_str(files),
    ])
}

pub fn system_dir(root: &Path, mode: &str) -> PathBuf {
    root.join(format!("AES_files_{mode}"))
}
