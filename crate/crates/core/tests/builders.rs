use ncgap::codes::CodeSpec;
use ncgap::graph::Bfs;
use ncgap::instance::{
    build_sampling_instance, build_tree_instance, close_sink_pairs, measure_params, sink_separation, Distance, Role,
};
use ncgap::mvfamily::trivial_family;
use ncgap::rational::{self, ratio};

#[test]
fn tree_instance_shape_for_hadamard_k4() {
    let code = CodeSpec::hadamard(4, ratio(1, 4)).unwrap();
    let (inst, report) = build_tree_instance(&code, 7).unwrap();
    assert_eq!(inst.cut().len(), 16);
    let g = inst.residual();
    for (j, _) in inst.vertices().iter().enumerate().filter(|(_, v)| v.role == Role::B) {
        // A 4-leaf complete tree has 7 nodes.
        let group = inst.vertices()[j].group;
        let members = inst
            .vertices()
            .iter()
            .filter(|v| v.group == group && matches!(v.role, Role::B | Role::BTree | Role::BLeaf))
            .count();
        assert_eq!(members, 7);
        let mut labels: Vec<u32> = inst
            .vertices()
            .iter()
            .filter(|v| v.group == group && v.role == Role::BLeaf)
            .map(|v| v.label.unwrap())
            .collect();
        labels.sort_unstable();
        assert_eq!(labels, vec![0, 1, 2, 3]);
    }
    for v in 0..inst.vertex_count() as u32 {
        assert!(g.degree(v) <= 3);
    }
    for s in &inst.sessions {
        for &t in &s.sinks {
            assert_eq!(g.degree(t), 2);
            let leaves = inst
                .vertices()
                .iter()
                .filter(|v| v.role == Role::SinkLeaf && v.group == inst.vertices()[t as usize].group)
                .count();
            assert_eq!(leaves, 2);
        }
    }
    assert_eq!(report.pruned, 0);
    let (p, cond) = measure_params(&inst, Some(rational::int(1)));
    assert!(cond.all_hold(), "{cond:?}");
    assert!(p.b >= Distance::Finite(1));
}

#[test]
fn sampling_sessions_grow_u_until_radius() {
    // With k = 4 the keep probability is 1/2; every session draws three
    // disjoint pairs (|U| = 0, 2, 4 <= 4 then stops at 6).
    let code = CodeSpec::hadamard(4, ratio(1, 4)).unwrap();
    let (inst, report) = build_sampling_instance(&code, 3).unwrap();
    assert_eq!(inst.cut().len(), 16);
    assert!(report.sinks_before <= 12);
    for s in &inst.sessions {
        let mut seen = std::collections::HashSet::new();
        for &t in &s.sinks {
            let g = inst.adjacency();
            let nb: Vec<u32> = g.neighbors(t).to_vec();
            assert_eq!(nb.len(), 2);
            for w in nb {
                assert!(seen.insert(w));
            }
        }
    }
}

#[test]
fn zero_radius_gives_no_sinks() {
    let code = CodeSpec::hadamard(4, ratio(0, 1)).unwrap();
    let (inst, _) = build_sampling_instance(&code, 1).unwrap();
    assert_eq!(inst.sink_count(), 0);
    assert_eq!(inst.vertex_count(), 17);
    let (inst, _) = build_tree_instance(&code, 1).unwrap();
    assert_eq!(inst.sink_count(), 0);
}

#[test]
fn builders_are_deterministic() {
    let code = CodeSpec::mock_smooth(64, 512, 4, ratio(1, 8)).unwrap();
    let a = build_sampling_instance(&code, 99).unwrap().0.to_json();
    let b = build_sampling_instance(&code, 99).unwrap().0.to_json();
    assert_eq!(a, b);
    let c = build_sampling_instance(&code, 100).unwrap().0.to_json();
    assert_ne!(a, c);
    let a = build_tree_instance(&code, 5).unwrap().0.to_json();
    let b = build_tree_instance(&code, 5).unwrap().0.to_json();
    assert_eq!(a, b);
}

#[test]
fn single_query_sinks_are_leaves() {
    let code = CodeSpec::mock_smooth(4, 16, 1, ratio(1, 4)).unwrap();
    let (inst, _) = build_tree_instance(&code, 2).unwrap();
    let g = inst.residual();
    for s in &inst.sessions {
        for &t in &s.sinks {
            assert_eq!(g.degree(t), 1);
        }
    }
}

#[test]
fn mv_tree_instance_passes_conditions() {
    let code = CodeSpec::matching_vector(trivial_family(3, 3).unwrap(), ratio(1, 4)).unwrap();
    let (inst, _) = build_tree_instance(&code, 11).unwrap();
    let (_, cond) = measure_params(&inst, None);
    assert!(cond.all_hold(), "{cond:?}");
}

#[test]
fn postconditions_hold_for_mock_codes() {
    for (k, seed) in [(16, 1), (64, 2), (256, 3)] {
        let code = CodeSpec::mock_smooth(k, 1024, 4, ratio(1, 8)).unwrap();
        let (inst, report) = build_sampling_instance(&code, seed).unwrap();
        assert!(close_sink_pairs(&inst, report.prune_depth).is_empty());
        let (inst, report) = build_tree_instance(&code, seed).unwrap();
        assert!(close_sink_pairs(&inst, report.prune_depth).is_empty());
        assert!(sink_separation(&inst) > Distance::Finite(report.prune_depth as u64));
    }
}

#[test]
fn separation_agrees_with_pairwise_bfs() {
    let code = CodeSpec::mock_smooth(8, 64, 2, ratio(1, 4)).unwrap();
    let (inst, _) = build_sampling_instance(&code, 4).unwrap();
    let g = inst.residual();
    let mut bfs = Bfs::new(inst.vertex_count());
    let mut best: Option<u64> = None;
    for s in &inst.sessions {
        for (a, &u) in s.sinks.iter().enumerate() {
            let mut dist = vec![None; inst.vertex_count()];
            bfs.bounded(&g, u, u32::MAX, |v, d| dist[v as usize] = Some(d as u64));
            for &v in &s.sinks[a + 1..] {
                if let Some(d) = dist[v as usize] {
                    best = Some(best.map_or(d, |b| b.min(d)));
                }
            }
        }
    }
    assert_eq!(sink_separation(&inst), best.map_or(Distance::Infinite, Distance::Finite));
}
