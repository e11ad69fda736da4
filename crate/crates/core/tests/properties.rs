use std::collections::{BTreeSet, HashMap, VecDeque};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swarmlink::analysis::{enumerate_all, max_mu};
use swarmlink::engine::{apply, check_equivariance, run, validate_trace};
use swarmlink::{alg1, alg2, index_to_bits, Configuration, GridGraph, Vertex};

fn cut_graph() -> GridGraph {
    GridGraph::parse_explicit(include_str!("data/cut.graph")).unwrap()
}

proptest! {
    #[test]
    fn neighbor_relation_is_symmetric(m in 2usize..8, n in 1usize..6, x in 0i32..8, y in 0i32..6, four in any::<bool>()) {
        let g = if four { GridGraph::four_grid(m, n) } else { GridGraph::eight_grid(m, n) }.unwrap();
        let v = Vertex::new(x, y);
        prop_assume!(g.contains(v));
        let around = g.neighbors(v).unwrap();
        let max_degree = if four { 4 } else { 8 };
        prop_assert!(around.len() <= max_degree);
        for w in around {
            prop_assert!(g.neighbors(w).unwrap().contains(&v));
        }
    }

    #[test]
    fn distance_triangle_inequality(a in (0i32..7, 0i32..3), b in (0i32..7, 0i32..3), c in (0i32..7, 0i32..3)) {
        let g = GridGraph::eight_grid(7, 3).unwrap();
        let d = |p: (i32, i32), q: (i32, i32)| g.distance(Vertex::new(p.0, p.1), Vertex::new(q.0, q.1)).unwrap().unwrap();
        prop_assert!(d(a, c) <= d(a, b) + d(b, c));
        // king distance on an unobstructed window
        prop_assert_eq!(d(a, b) as i32, (a.0 - b.0).abs().max((a.1 - b.1).abs()));
    }

    #[test]
    fn alg2_round_trip(k in 4usize..=12, seed in any::<u64>(), offset in 0i32..5) {
        let bits = index_to_bits(seed % (1 << (k / 2)), k / 2);
        let c = alg2::encode(&bits, k, offset).unwrap();
        prop_assert_eq!(alg2::read(&c).unwrap(), bits);
    }

    #[test]
    fn alg1_round_trip(len in 1usize..=20, seed in any::<u64>(), offset in 0i32..5) {
        let bits = index_to_bits(seed % (1 << len), len);
        let c = alg1::encode(&bits, offset).unwrap();
        prop_assert_eq!(alg1::read(&c).unwrap(), bits);
    }

    #[test]
    fn alg1_cycles_keep_invariants(len in 1usize..=6, seed in any::<u64>()) {
        let bits = index_to_bits(seed % (1 << len), len);
        let k = len + 14;
        let g = GridGraph::strip(k + 12).unwrap();
        let mut c = alg1::encode(&bits, 0).unwrap();
        for cycle in 1..=3 {
            loop {
                c = apply(&g, &c, alg1::next(&c).unwrap()).unwrap();
                prop_assert!(alg1::phase_invariants_hold(&c));
                if alg1::classify(&c).unwrap() == alg1::Alg1Phase::Canonical {
                    break;
                }
            }
            prop_assert_eq!(&c, &alg1::encode(&bits, 2 * cycle).unwrap());
        }
    }

    #[test]
    fn simulation_is_deterministic(code in 0u64..8, m in 8usize..20) {
        let g = GridGraph::strip(m).unwrap();
        let c0 = alg2::encode(&index_to_bits(code, 3), 6, 0).unwrap();
        let first = run(&g, &alg2::ShiftByOne, &c0, 4 * 6 * m).unwrap();
        let second = run(&g, &alg2::ShiftByOne, &c0, 4 * 6 * m).unwrap();
        prop_assert!(validate_trace(&g, &first).is_ok());
        prop_assert_eq!(first, second);
    }
}

/// Plain BFS over the subset, written independently of the library.
fn bfs_connected(cells: &[Vertex], king: bool) -> bool {
    let Some(&start) = cells.first() else { return true };
    let set: BTreeSet<Vertex> = cells.iter().copied().collect();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for dx in -1..=1 {
            for dy in -1..=1 {
                if (dx, dy) == (0, 0) || (!king && dx != 0 && dy != 0) {
                    continue;
                }
                let w = Vertex::new(v.x + dx, v.y + dy);
                if set.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    seen.len() == set.len()
}

#[test]
fn connectivity_matches_bfs_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let eight = GridGraph::eight_grid(8, 4).unwrap();
    let four = GridGraph::four_grid(8, 4).unwrap();
    let all = eight.vertices();
    for _ in 0..1000 {
        let cells: Vec<Vertex> = all.iter().copied().filter(|_| rng.gen_bool(0.3)).collect();
        assert_eq!(eight.is_connected(&cells).unwrap(), bfs_connected(&cells, true));
        assert_eq!(four.is_connected(&cells).unwrap(), bfs_connected(&cells, false));
    }
}

#[test]
fn four_grids_carry_nothing() {
    // exhaustive over small windows: no transmission when dist >= k
    for k in 2..=3 {
        for m in (k + 1)..=6 {
            for n in 1..=3 {
                let g = GridGraph::four_grid(m, n).unwrap();
                assert_eq!(max_mu(&g, k).unwrap().mu, 0, "k={k} m={m} n={n}");
            }
        }
    }
}

#[test]
fn single_robot_walks_on_four_grids() {
    // k = 1 is the degenerate case the impossibility excludes
    let g = GridGraph::four_grid(5, 2).unwrap();
    assert_eq!(max_mu(&g, 1).unwrap().mu, 2);
}

#[test]
fn cut_vertex_blocks_transmission() {
    let g = cut_graph();
    assert!(g.sender_distance().unwrap() >= 3);
    for k in 2..=3 {
        assert_eq!(max_mu(&g, k).unwrap().mu, 0, "k={k}");
    }
    // a single robot walks through the cut vertex
    assert_eq!(max_mu(&g, 1).unwrap().mu, 1);
}

#[test]
fn enumeration_matches_subset_filter() {
    let g = GridGraph::eight_grid(4, 3).unwrap();
    let cells = g.vertices();
    for k in 1..=4 {
        let mut expected = 0;
        for mask in 0u32..(1 << cells.len()) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let subset: Vec<Vertex> = (0..cells.len()).filter(|i| mask >> i & 1 == 1).map(|i| cells[i]).collect();
            if bfs_connected(&subset, true) {
                expected += 1;
            }
        }
        assert_eq!(enumerate_all(&g, k).unwrap().len(), expected, "k={k}");
    }
}

#[test]
fn witness_paths_replay_through_the_engine() {
    struct Table(HashMap<Configuration, Configuration>);
    impl swarmlink::SwarmAlgorithm for Table {
        fn name(&self) -> &str {
            "table"
        }
        fn next(&self, c: &Configuration) -> swarmlink::Result<swarmlink::MoveAction> {
            let Some(to) = self.0.get(c) else { return Ok(swarmlink::MoveAction::Stay) };
            let from = c.cells().iter().find(|v| !to.contains(**v)).copied().unwrap();
            let dest = to.cells().iter().find(|v| !c.contains(**v)).copied().unwrap();
            Ok(swarmlink::MoveAction::Move { from, to: dest })
        }
    }
    let g = GridGraph::eight_grid(6, 2).unwrap();
    let flow = max_mu(&g, 2).unwrap();
    assert!(flow.mu >= 1);
    let mut table = HashMap::new();
    for path in &flow.paths {
        for pair in path.windows(2) {
            assert!(table.insert(pair[0].clone(), pair[1].clone()).is_none(), "paths share a configuration");
        }
    }
    let table = Table(table);
    let mut terminals = BTreeSet::new();
    for (path, &len) in flow.paths.iter().zip(&flow.path_lengths) {
        let trace = run(&g, &table, &path[0], 100).unwrap();
        assert_eq!(trace.delay, Some(len));
        assert!(validate_trace(&g, &trace).is_ok());
        terminals.insert(trace.terminal().unwrap().clone());
    }
    assert_eq!(terminals.len(), flow.mu);
}

#[test]
fn equivariance_on_random_offsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = GridGraph::strip(60).unwrap();
    for _ in 0..50 {
        let k = rng.gen_range(4..=9);
        let bits = index_to_bits(rng.gen_range(0..(1 << (k / 2))), k / 2);
        let mut c = alg2::encode(&bits, k, 1).unwrap();
        for _ in 0..rng.gen_range(0..k) {
            c = apply(&g, &c, alg2::next(&c).unwrap()).unwrap();
        }
        let dx = rng.gen_range(1..30);
        assert!(check_equivariance(&g, &alg2::ShiftByOne, &c, dx).unwrap());
    }
}
