use symsys_core::search::{enumerate_vectors, unreduced_max_system};
use symsys_core::*;

fn p(m: u32) -> Power {
    Power::new(m).unwrap()
}

#[test]
fn symmetry_breaking_agrees_with_plain_clique_search() {
    let budget = SearchBudget::default();
    for (g, m) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)] {
        for primitive_only in [false, true] {
            let fast = max_system_search(g, p(m), primitive_only, SearchMode::Discover, budget).unwrap();
            let plain = unreduced_max_system(g, p(m), primitive_only, &budget).unwrap();
            assert!(fast.exhaustive);
            assert_eq!(fast.max_size, plain, "g={g} m={m} primitive={primitive_only}");
        }
    }
}

#[test]
fn witnesses_are_systems() {
    for (g, m) in [(1, 3), (2, 2), (2, 3), (3, 1)] {
        for primitive_only in [false, true] {
            let r = max_system_search(g, p(m), primitive_only, SearchMode::Discover, SearchBudget::default()).unwrap();
            let s = r.witness_system().unwrap();
            assert_eq!(s.len(), r.max_size);
            assert!(s.check().valid);
            if primitive_only {
                assert!(s.all_primitive());
            }
        }
    }
}

#[test]
fn primitive_never_exceeds_general() {
    for (g, m) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)] {
        let b = SearchBudget::default();
        let gen = max_system_search(g, p(m), false, SearchMode::Discover, b).unwrap();
        let prim = max_system_search(g, p(m), true, SearchMode::Discover, b).unwrap();
        assert!(prim.max_size <= gen.max_size);
        assert!(gen.max_size <= 2 * g + 1);
    }
}

#[test]
fn verify_mode_agrees_with_discover() {
    for (g, m) in [(1, 2), (2, 2), (2, 3)] {
        let b = SearchBudget::default();
        let v = max_system_search(g, p(m), false, SearchMode::Verify, b).unwrap();
        let d = max_system_search(g, p(m), false, SearchMode::Discover, b).unwrap();
        assert_eq!(v.max_size, d.max_size);
        assert_eq!(v.cutoff, Some(2 * g + 1));
        assert_eq!(d.cutoff, None);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let mut r = max_system_search(3, p(2), false, SearchMode::Discover, SearchBudget::default()).unwrap();
            r.wall_time_ms = 0;
            r
        })
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one.max_size, 7);
}

#[test]
fn node_budget_marks_inconclusive() {
    let budget = SearchBudget {
        max_nodes: Some(10),
        ..SearchBudget::default()
    };
    let r = max_system_search(3, p(2), false, SearchMode::Discover, budget).unwrap();
    assert!(!r.exhaustive);
    assert!(r.max_size <= 7);
    assert!(r.witness_system().unwrap().check().valid);
}

#[test]
fn oversized_spaces_are_refused() {
    let err = max_system_search(3, p(3), false, SearchMode::Verify, SearchBudget::default()).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded { required, .. } if required == (1 << 18) - 1));
    let small = SearchBudget {
        max_vectors: 10,
        max_nodes: None,
    };
    assert!(enumerate_vectors(2, p(1), false, &small).is_err());
}

#[test]
fn bounds_table_renders_every_row() {
    let t = verify_bounds(2, 2, SearchMode::Verify, SearchBudget::default()).unwrap();
    assert_eq!(t.rows.len(), 8);
    assert!(!t.has_mismatch());
    let statuses: Vec<_> = t.render().lines().skip(1).map(|l| l.split_whitespace().nth(6).unwrap().to_string()).collect();
    assert_eq!(statuses, vec!["match"; 8]);
}
