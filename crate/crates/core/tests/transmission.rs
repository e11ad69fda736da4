use std::collections::HashMap;

use swarmlink::codec::{
    bound_check, build_fixed_code, build_variable_code, transmit, transmit_all, transmit_traced, Scheme, SymbolSource,
};
use swarmlink::engine::validate_trace;
use swarmlink::{alg1, alg2, index_to_bits, run, Configuration, Exec, GridGraph};

/// Receiver-side lookup table built by simulation, independent of the decoders.
fn terminal_table<F>(g: &GridGraph, words: &[Vec<u8>], start: F, alg: &dyn swarmlink::SwarmAlgorithm) -> HashMap<Configuration, Vec<u8>>
where
    F: Fn(&[u8]) -> Configuration,
{
    let m = g.columns().unwrap();
    let mut table = HashMap::new();
    for bits in words {
        let c0 = start(bits);
        let trace = run(g, alg, &c0, 4 * c0.len() * m).unwrap();
        let previous = table.insert(trace.terminal().unwrap().clone(), bits.clone());
        assert!(previous.is_none(), "two codewords share a terminal");
    }
    table
}

#[test]
fn alg2_terminals_match_table_oracle() {
    for (k, m) in [(4, 12), (7, 20)] {
        let g = GridGraph::strip(m).unwrap();
        let words: Vec<Vec<u8>> = (0..1u64 << (k / 2)).map(|i| index_to_bits(i, k / 2)).collect();
        let table = terminal_table(&g, &words, |b| alg2::encode(b, k, 0).unwrap(), &alg2::ShiftByOne);
        assert_eq!(table.len(), words.len());
        for (terminal, bits) in &table {
            assert_eq!(&alg2::decode_terminal(terminal, k).unwrap(), bits);
        }
    }
}

#[test]
fn alg2_zero_codeword_terminal() {
    let g = GridGraph::strip(12).unwrap();
    let trace = run(&g, &alg2::ShiftByOne, &alg2::encode(&[0, 0], 4, 0).unwrap(), 200).unwrap();
    assert_eq!(alg2::decode_terminal(trace.terminal().unwrap(), 4).unwrap(), vec![0, 0]);
}

#[test]
fn alg1_terminals_match_table_oracle() {
    for k in [15, 16, 17] {
        let g = GridGraph::strip(k + 9).unwrap();
        let words: Vec<Vec<u8>> = (0..1u64 << (k - 14)).map(|i| index_to_bits(i, k - 14)).collect();
        let table = terminal_table(&g, &words, |b| alg1::encode(b, 0).unwrap(), &alg1::ShiftByTwo);
        for (terminal, bits) in &table {
            assert_eq!(&alg1::decode_terminal(terminal, k).unwrap(), bits);
        }
    }
}

#[test]
fn fixed_codes_round_trip() {
    let g = GridGraph::strip(30).unwrap();
    for k in 4..=9 {
        let code = build_fixed_code(Scheme::Alg2, k, 1 << (k / 2)).unwrap();
        for t in transmit_all(&g, &code, Exec::Parallel).unwrap() {
            assert_eq!(t.sent, t.received);
        }
    }
    let code = build_fixed_code(Scheme::Alg1, 16, 4).unwrap();
    for t in transmit_all(&g, &code, Exec::Sequential).unwrap() {
        assert_eq!(t.sent, t.received);
    }
}

#[test]
fn variable_codes_round_trip_and_stay_legal() {
    for scheme in [Scheme::Alg1, Scheme::Alg2] {
        let src = SymbolSource::geometric(20).unwrap();
        let code = build_variable_code(scheme, &src).unwrap();
        let sizes: Vec<usize> = code.entries.iter().map(|e| e.k).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        let g = GridGraph::strip(3 * code.max_k()).unwrap();
        for symbol in 0..code.entries.len() {
            let (t, trace) = transmit_traced(&g, &code, symbol).unwrap();
            assert_eq!(t.received, symbol);
            assert!(validate_trace(&g, &trace).is_ok());
        }
    }
}

#[test]
fn initial_configurations_are_distinct() {
    let src = SymbolSource::uniform(64).unwrap();
    let code = build_variable_code(Scheme::Alg2, &src).unwrap();
    let mut seen = std::collections::HashSet::new();
    for e in &code.entries {
        assert!(seen.insert(e.initial.clone()));
    }
}

#[test]
fn sequential_and_parallel_sweeps_agree() {
    let src = SymbolSource::uniform(16).unwrap();
    let code = build_variable_code(Scheme::Alg2, &src).unwrap();
    let a = bound_check(&code, &src, 30, Exec::Sequential).unwrap();
    let b = bound_check(&code, &src, 30, Exec::Parallel).unwrap();
    assert_eq!(a, b);
    assert!(a.all_pass());
}

#[test]
fn alg1_variable_bound_example() {
    let src = SymbolSource::uniform(2).unwrap();
    let code = build_variable_code(Scheme::Alg1, &src).unwrap();
    let report = bound_check(&code, &src, 100, Exec::Parallel).unwrap();
    assert!(report.all_pass());
    assert!(report.average_delay <= 10.0 * 100.0 * report.average_size);
}

#[test]
fn source_file_is_normalized() {
    let dir = std::env::temp_dir().join(format!("swarmlink-src-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("src.json");
    std::fs::write(&path, r#"{"probs": [0.1, 0.2, 0.2, 0.5]}"#).unwrap();
    let src = SymbolSource::load(&path).unwrap();
    assert_eq!(src.probs(), &[0.5, 0.2, 0.2, 0.1]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn transmit_rejects_narrow_hosts() {
    let code = build_fixed_code(Scheme::Alg2, 6, 2).unwrap();
    assert!(transmit(&GridGraph::strip(6).unwrap(), &code, 0).is_err());
    assert!(transmit(&GridGraph::eight_grid(20, 3).unwrap(), &code, 0).is_err());
}
