mod common;

use graphlb::apps::{AppKind, LabelArray};
use graphlb::engine::{run, EngineConfig};
use graphlb::graph::Graph;
use graphlb::scheduler::{Distribution, SchedulerKind, Threshold};
use graphlb::simt::KernelConfig;
use graphlb::worklist::PrefixWork;
use proptest::prelude::*;

fn schedulers() -> impl Strategy<Value = SchedulerKind> {
    prop_oneof![
        Just(SchedulerKind::Vertex),
        Just(SchedulerKind::Edge),
        Just(SchedulerKind::Twc),
        Just(SchedulerKind::Lb { distribution: Distribution::Blocked }),
        Just(SchedulerKind::Lb { distribution: Distribution::Cyclic }),
        (1usize..40).prop_map(|t| SchedulerKind::alb(Distribution::Cyclic, Threshold::Fixed(t))),
        (1usize..40).prop_map(|t| SchedulerKind::alb(Distribution::Blocked, Threshold::Fixed(t))),
    ]
}

fn run_app(g: &Graph, app: AppKind, s: SchedulerKind, devices: usize) -> LabelArray {
    let mut app = app.build().unwrap();
    let cfg = EngineConfig::new(s, KernelConfig::new(2, 16, 8).unwrap()).with_devices(devices);
    run(g, app.as_mut(), &cfg).unwrap().labels
}

fn graphs() -> impl Strategy<Value = Graph> {
    (1usize..64, 0usize..300, any::<u64>()).prop_map(|(n, m, seed)| common::random_graph(n, m, 20, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sssp_matches_dijkstra(g in graphs(), s in schedulers(), d in 1usize..5, src in any::<u32>()) {
        let n = g.num_vertices();
        let src = src % n as u32;
        let expect = common::dijkstra(n, &common::edge_list(&g), src as usize);
        prop_assert_eq!(run_app(&g, AppKind::Sssp { source: src }, s, d), LabelArray::Distance(expect));
    }

    #[test]
    fn bfs_matches_queue_bfs(g in graphs(), s in schedulers(), src in any::<u32>()) {
        let n = g.num_vertices();
        let src = src % n as u32;
        let expect = common::bfs(n, &common::edge_list(&g), src as usize);
        prop_assert_eq!(run_app(&g, AppKind::Bfs { source: src }, s, 1), LabelArray::Distance(expect));
    }

    #[test]
    fn cc_matches_union_find(g in graphs(), s in schedulers(), d in 1usize..5) {
        let expect = common::union_find_components(g.num_vertices(), &common::edge_list(&g));
        prop_assert_eq!(run_app(&g, AppKind::Cc, s, d), LabelArray::Component(expect));
    }

    #[test]
    fn kcore_matches_peeling(g in graphs(), s in schedulers(), k in 1u64..6, d in 1usize..5) {
        let expect = common::peel(g.num_vertices(), &common::edge_list(&g), k as usize);
        prop_assert_eq!(run_app(&g, AppKind::Kcore { k }, s, d), LabelArray::Core(expect));
    }

    #[test]
    fn pagerank_matches_power_iteration(g in graphs(), s in schedulers()) {
        let expect = common::power_iteration(g.num_vertices(), &common::edge_list(&g), 0.85);
        let got = run_app(&g, AppKind::Pr { damping: 0.85, tolerance: 1e-10 }, s, 1);
        let diff = got.first_difference(&LabelArray::Rank(expect), 1e-6);
        prop_assert!(diff.is_none(), "{:?}", diff);
    }

    #[test]
    fn find_owner_matches_linear_scan(degrees in prop::collection::vec(0usize..20, 1..30), pick in any::<usize>()) {
        let total: usize = degrees.iter().sum();
        prop_assume!(total > 0);
        let edge = pick % total;
        let work = PrefixWork::from_degrees((0..degrees.len() as u32).collect(), &degrees);
        let owner = work.find_owner(edge, &mut Vec::new()).unwrap();
        prop_assert_eq!(Some((owner.position, owner.offset)), common::linear_owner(&degrees, edge));
    }
}

#[test]
fn transpose_matches_brute_force() {
    let g = common::random_graph(50, 400, 9, 7);
    let csc = g.csc();
    let mut from_csc = Vec::new();
    for v in 0..g.num_vertices() as u32 {
        for e in csc.edge_range(v) {
            from_csc.push((v as usize, csc.targets()[e] as usize, csc.weight(e) as u64));
        }
    }
    from_csc.sort_unstable();
    assert_eq!(from_csc, common::transpose_pairs(&common::edge_list(&g)));
}
