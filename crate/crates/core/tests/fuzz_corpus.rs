//! Replays the fuzz corpus, plus seeded mutations of it, through the parsers
//! and decoders so that the fuzz properties are exercised on stable too.

use std::path::PathBuf;

use rb_core::encode::{
    bits_per_var, decode_assignment, encode_assignment, parse_dimacs_str, write_dimacs_string,
};
use rb_core::harness::{from_csv_str, from_json_str, to_csv_string, to_json_string};
use rb_core::rng::{rng_stream, Purpose, RngStream};
use rb_core::{derive_params_with_domain, Density, Instance};

const MUTANTS_PER_SEED: u64 = 400;

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "empty corpus for {target}");
    files
        .into_iter()
        .map(|p| std::fs::read(p).unwrap())
        .collect()
}

const INTERESTING: &[&[u8]] = &[
    b"0",
    b"-1",
    b"9999999999",
    b"\n",
    b" ",
    b"{",
    b"}",
    b",",
    b"\"",
    b"NaN",
    b"-0",
    b"p cnf ",
];

fn mutate(seed: &[u8], rng: &mut RngStream) -> Vec<u8> {
    let mut out = seed.to_vec();
    for _ in 0..=rng.below(3) {
        let len = out.len();
        match rng.below(5) {
            0 if len > 0 => {
                let i = rng.below_usize(len);
                out[i] ^= 1 << rng.below(8);
            }
            1 if len > 0 => {
                let i = rng.below_usize(len);
                let j = (i + 1 + rng.below_usize(8)).min(len);
                out.drain(i..j);
            }
            2 => {
                let i = rng.below_usize(len + 1);
                let token = INTERESTING[rng.below_usize(INTERESTING.len())];
                out.splice(i..i, token.iter().copied());
            }
            3 if len > 0 => out.truncate(rng.below_usize(len)),
            _ if len > 1 => {
                let i = rng.below_usize(len);
                let j = rng.below_usize(len);
                out.swap(i, j);
            }
            _ => out.push(b'0'),
        }
    }
    out
}

fn run_target(target: &str, check: impl Fn(&[u8])) {
    for (s, seed) in corpus(target).iter().enumerate() {
        check(seed);
        let mut rng = rng_stream(s as u64, Purpose::Harness, 0xf022);
        for _ in 0..MUTANTS_PER_SEED {
            check(&mutate(seed, &mut rng));
        }
    }
}

#[test]
fn dimacs_corpus() {
    run_target("dimacs", |data| {
        let Ok(text) = std::str::from_utf8(data) else {
            return;
        };
        if let Ok(cnf) = parse_dimacs_str(text) {
            let again = parse_dimacs_str(&write_dimacs_string(&cnf)).unwrap();
            assert!(again.same_formula(&cnf));
        }
    });
}

#[test]
fn dimacs_seeds_parse() {
    let ok = corpus("dimacs")
        .iter()
        .filter(|d| parse_dimacs_str(std::str::from_utf8(d).unwrap()).is_ok())
        .count();
    // One seed is deliberately missing its terminator.
    assert_eq!(ok, corpus("dimacs").len() - 1);
}

#[test]
fn instance_json_corpus() {
    for seed in corpus("instance_json") {
        assert!(Instance::from_json(std::str::from_utf8(&seed).unwrap()).is_ok());
    }
    run_target("instance_json", |data| {
        let Ok(text) = std::str::from_utf8(data) else {
            return;
        };
        if let Ok(inst) = Instance::from_json(text) {
            assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
        }
    });
}

#[test]
fn records_csv_corpus() {
    for seed in corpus("records_csv") {
        assert!(from_csv_str(std::str::from_utf8(&seed).unwrap()).is_ok());
    }
    run_target("records_csv", |data| {
        let Ok(text) = std::str::from_utf8(data) else {
            return;
        };
        if let Ok(records) = from_csv_str(text) {
            let written = to_csv_string(&records).unwrap();
            assert_eq!(
                to_csv_string(&from_csv_str(&written).unwrap()).unwrap(),
                written
            );
        }
    });
}

#[test]
fn records_json_corpus() {
    for seed in corpus("records_json") {
        assert!(from_json_str(std::str::from_utf8(&seed).unwrap()).is_ok());
    }
    run_target("records_json", |data| {
        let Ok(text) = std::str::from_utf8(data) else {
            return;
        };
        if let Ok(records) = from_json_str(text) {
            from_json_str(&to_json_string(&records).unwrap()).unwrap();
        }
    });
}

#[test]
fn decode_model_corpus() {
    run_target("decode_model", |data| {
        let [d, n, bits @ ..] = data else { return };
        let d = u32::from(*d).max(2);
        let n = usize::from(*n % 32).max(2);
        let Ok(params) = derive_params_with_domain(n, d, 0.5, 2, 0, Density::Threshold) else {
            return;
        };
        let model: Vec<bool> = bits.iter().map(|b| b & 1 == 1).collect();
        if let Ok(values) = decode_assignment(&model, &params) {
            assert_eq!(model.len(), n * bits_per_var(d));
            assert!(values.iter().all(|&v| v < d));
            assert_eq!(encode_assignment(&values, d), model);
        }
    });
}
