use super::*;
use crate::apps::{AppKind, UNREACHABLE};
use crate::scheduler::{Distribution, Threshold};
use crate::simt::KernelKind;

fn small() -> KernelConfig {
    KernelConfig::new(2, 8, 4).unwrap()
}

fn run_app(g: &Graph, app: AppKind, scheduler: SchedulerKind, devices: usize) -> RunResult {
    let mut app = app.build().unwrap();
    let cfg = EngineConfig::new(scheduler, small()).with_devices(devices);
    run(g, app.as_mut(), &cfg).unwrap()
}

fn all_schedulers() -> Vec<SchedulerKind> {
    vec![
        SchedulerKind::Vertex,
        SchedulerKind::Edge,
        SchedulerKind::Twc,
        SchedulerKind::Lb { distribution: Distribution::Blocked },
        SchedulerKind::Lb { distribution: Distribution::Cyclic },
        SchedulerKind::alb(Distribution::Cyclic, Threshold::Fixed(3)),
        SchedulerKind::alb(Distribution::Blocked, Threshold::Fixed(3)),
    ]
}

fn path(n: u32) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n as usize, &edges, None).unwrap()
}

fn star(leaves: u32) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edges(leaves as usize + 1, &edges, None).unwrap()
}

#[test]
fn bfs_on_path() {
    let r = run_app(&path(3), AppKind::Bfs { source: 0 }, SchedulerKind::Twc, 1);
    assert_eq!(r.labels, LabelArray::Distance(vec![0, 1, 2]));
    assert_eq!(r.rounds.len(), 3);
}

#[test]
fn sssp_weighted_triangle() {
    let g = Graph::from_edges(3, &[(0, 1), (0, 2), (2, 1)], Some(&[5, 1, 2])).unwrap();
    let r = run_app(&g, AppKind::Sssp { source: 0 }, SchedulerKind::ALB, 1);
    assert_eq!(r.labels, LabelArray::Distance(vec![0, 3, 1]));
}

#[test]
fn unreachable_vertex() {
    let g = Graph::from_edges(3, &[(0, 1)], None).unwrap();
    let r = run_app(&g, AppKind::Bfs { source: 0 }, SchedulerKind::LB, 1);
    assert_eq!(r.labels, LabelArray::Distance(vec![0, 1, UNREACHABLE]));
}

#[test]
fn bad_source_is_config_error() {
    let mut app = AppKind::Bfs { source: 9 }.build().unwrap();
    let cfg = EngineConfig::new(SchedulerKind::Twc, small());
    assert!(matches!(run(&path(3), app.as_mut(), &cfg), Err(EngineError::Config(_))));
}

#[test]
fn components() {
    let g = Graph::from_edges(4, &[(1, 0), (3, 2)], None).unwrap();
    let r = run_app(&g, AppKind::Cc, SchedulerKind::Edge, 1);
    assert_eq!(r.labels, LabelArray::Component(vec![0, 0, 2, 2]));
    let empty = Graph::from_edges(0, &[], None).unwrap();
    let r = run_app(&empty, AppKind::Cc, SchedulerKind::Edge, 1);
    assert!(r.labels.is_empty());
    assert!(r.rounds.is_empty());
}

#[test]
fn pagerank_small_cases() {
    let pr = AppKind::Pr { damping: 0.85, tolerance: 1e-9 };
    let single = Graph::from_edges(1, &[], None).unwrap();
    let r = run_app(&single, pr, SchedulerKind::Twc, 1);
    assert!((r.labels.as_ranks().unwrap()[0] - 0.15).abs() < 1e-9);

    let cycle = Graph::from_edges(2, &[(0, 1), (1, 0)], None).unwrap();
    let r = run_app(&cycle, pr, SchedulerKind::Twc, 1);
    for &x in r.labels.as_ranks().unwrap() {
        assert!((x - 1.0).abs() < 1e-6, "{x}");
    }

    let s = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)], None).unwrap();
    let r = run_app(&s, pr, SchedulerKind::Twc, 1);
    let ranks = r.labels.as_ranks().unwrap();
    assert!(ranks[0] > ranks[1]);
    assert!((ranks.iter().sum::<f64>() - 4.0).abs() < 1e-6);
}

#[test]
fn kcore_small_cases() {
    let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)], None).unwrap();
    let r = run_app(&tri, AppKind::Kcore { k: 2 }, SchedulerKind::Twc, 1);
    assert_eq!(r.labels, LabelArray::Core(vec![true; 3]));
    let r = run_app(&star(5), AppKind::Kcore { k: 2 }, SchedulerKind::Twc, 1);
    assert_eq!(r.labels, LabelArray::Core(vec![false; 6]));
}

#[test]
fn zero_devices_rejected() {
    let mut app = AppKind::Cc.build().unwrap();
    let cfg = EngineConfig::new(SchedulerKind::Twc, small()).with_devices(0);
    assert!(matches!(run(&path(2), app.as_mut(), &cfg), Err(EngineError::Config(_))));
}

#[test]
fn round_limit_reports_metrics() {
    let mut app = AppKind::Bfs { source: 0 }.build().unwrap();
    let cfg = EngineConfig::new(SchedulerKind::Twc, small()).with_max_rounds(2);
    match run(&path(10), app.as_mut(), &cfg) {
        Err(EngineError::NonConvergence { rounds, frontier, metrics_dump }) => {
            assert_eq!((rounds, frontier), (2, 1));
            assert!(metrics_dump.contains("total_edges"));
        }
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn alb_kernel_order_with_hub() {
    let r = run_app(
        &star(20),
        AppKind::Bfs { source: 0 },
        SchedulerKind::alb(Distribution::Cyclic, Threshold::Fixed(10)),
        1,
    );
    let first = &r.rounds[0].devices[0];
    assert_eq!(first.kernel_sequence(), vec![KernelKind::Inspect, KernelKind::Lb]);
    assert_eq!(first.total_edges(), 20);
}

#[test]
fn schedulers_and_devices_agree() {
    let mut edges = Vec::new();
    for v in 1..40u32 {
        edges.push((0, v));
        edges.push((v, (v * 7) % 40));
        edges.push((v, (v + 1) % 40));
    }
    let weights: Vec<u32> = (0..edges.len() as u32).map(|i| 1 + i % 5).collect();
    let g = Graph::from_edges(40, &edges, Some(&weights)).unwrap();
    let apps = [
        AppKind::Bfs { source: 3 },
        AppKind::Sssp { source: 0 },
        AppKind::Cc,
        AppKind::Pr { damping: 0.85, tolerance: 1e-6 },
        AppKind::Kcore { k: 3 },
    ];
    for app in apps {
        let reference = run_app(&g, app, SchedulerKind::Vertex, 1);
        for s in all_schedulers() {
            for d in [1, 2, 4] {
                let r = run_app(&g, app, s, d);
                assert_eq!(
                    r.labels.first_difference(&reference.labels, 0.0),
                    None,
                    "{} under {} on {d} devices",
                    app.name(),
                    s.label()
                );
                assert_eq!(r.rounds.len(), reference.rounds.len());
            }
        }
    }
}

#[test]
fn multi_device_reports_sync_traffic() {
    let r = run_app(&path(16), AppKind::Bfs { source: 0 }, SchedulerKind::Twc, 4);
    let msgs: u64 = r.rounds.iter().map(|x| x.sync.total()).sum();
    assert!(msgs > 0);
    assert!(r.rounds.iter().all(|x| x.devices.len() == 4));
}
