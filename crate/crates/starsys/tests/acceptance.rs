//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

mod common;

use std::panic::{catch_unwind, UnwindSafe};

use starsys::baranyai::{
    binomial, exact_cover_partition, partition_all_subsets, verify_partition,
};
use starsys::chromatic::{
    chromatic_number, find_colouring, is_uniquely_k_colourable, propagate_forced,
    ChromaticOutcome, PartialColouring, PropagationOutcome, SearchBudget, SearchOutcome,
    UniquenessOutcome,
};
use starsys::constructions::*;
use starsys::io::{parse_system, write_system};
use starsys::system::{StarSystem, Vertex};
use starsys::verify::{check_colouring, validate_decomposition};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn criterion<F: FnOnce() + UnwindSafe>(idx: u32, desc: &str, body: F) {
    match catch_unwind(body) {
        Ok(()) => println!("criterion {idx}: PASS - {desc}"),
        Err(payload) => {
            println!("criterion {idx}: FAIL - {desc}");
            std::panic::resume_unwind(payload);
        }
    }
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

fn blocks_of(sys: &StarSystem) -> Vec<(Vertex, Vec<Vertex>)> {
    sys.blocks()
        .map(|b| (b.center(), b.leaves().to_vec()))
        .collect()
}

#[test]
fn criterion_01_golden_reproduction() {
    criterion(1, "golden order-6 and order-8 systems reproduced block-for-block", || {
        let r3 = build_equitable_2chromatic_3star(6).unwrap();
        assert_eq!(
            blocks_of(&r3.system),
            vec![
                (1, vec![3, 5, 6]),
                (2, vec![1, 3, 6]),
                (4, vec![1, 2, 3]),
                (5, vec![2, 3, 4]),
                (6, vec![3, 4, 5]),
            ]
        );
        assert!(validate_decomposition(&r3.system).ok);
        let c3 = check_colouring(&r3.system, &r3.colouring);
        assert!(c3.proper && c3.strongly_equitable);
        assert_eq!(r3.colouring.class_members(1), vec![1, 3, 5]);
        assert_eq!(r3.colouring.class_members(2), vec![2, 4, 6]);

        let r4 = build_2chromatic_estar(4).unwrap();
        assert_eq!(
            blocks_of(&r4.system),
            vec![
                (1, vec![3, 5, 6, 8]),
                (2, vec![1, 3, 6, 8]),
                (4, vec![1, 2, 3, 8]),
                (5, vec![2, 3, 4, 7]),
                (6, vec![3, 4, 5, 7]),
                (7, vec![1, 2, 3, 4]),
                (8, vec![3, 5, 6, 7]),
            ]
        );
        assert!(validate_decomposition(&r4.system).ok);
        let c4 = check_colouring(&r4.system, &r4.colouring);
        assert!(c4.proper && c4.strongly_equitable);
    });
}

#[test]
fn criterion_02_equitable_3star_sweep() {
    criterion(2, "order sweep 6..=33 of equitable 2-chromatic 3-star systems", || {
        for n in 6..=33u32 {
            if n % 3 > 1 {
                continue;
            }
            let r = build_equitable_2chromatic_3star(n).unwrap();
            assert!(validate_decomposition(&r.system).ok, "n={n}");
            let c = check_colouring(&r.system, &r.colouring);
            assert!(c.proper && c.equitable, "n={n}");
            match chromatic_number(&r.system, budget()) {
                ChromaticOutcome::Determined(cert) => assert_eq!(cert.chi, 2, "n={n}"),
                other => panic!("n={n}: {other:?}"),
            }
        }
    });
}

#[test]
fn criterion_03_order_2e_sweep() {
    criterion(3, "order-2e strongly equitable systems for e = 3..=8", || {
        for e in 3..=8u32 {
            let r = build_2chromatic_estar(e).unwrap();
            assert_eq!(r.system.n(), 2 * e);
            assert!(validate_decomposition(&r.system).ok, "e={e}");
            let c = check_colouring(&r.system, &r.colouring);
            assert!(c.proper && c.strongly_equitable, "e={e}");
            match chromatic_number(&r.system, budget()) {
                ChromaticOutcome::Determined(cert) => assert_eq!(cert.chi, 2, "e={e}"),
                other => panic!("e={e}: {other:?}"),
            }
        }
    });
}

#[test]
fn criterion_04_extensions_preserve_chi() {
    criterion(4, "order extensions from the order-6 and order-8 bases keep chi = 2", || {
        let base3 = build_equitable_2chromatic_3star(6).unwrap();
        let base3_blocks = blocks_of(&base3.system);
        for target in [7u32, 9, 10, 12, 13, 15] {
            let ext = extend_kchromatic_3star(&base3, None, target).unwrap();
            assert!(validate_decomposition(&ext.system).ok, "target={target}");
            let got = blocks_of(&ext.system);
            for b in &base3_blocks {
                assert!(got.contains(b), "target={target} lost base block {b:?}");
            }
            match chromatic_number(&ext.system, budget()) {
                ChromaticOutcome::Determined(cert) => assert_eq!(cert.chi, 2, "target={target}"),
                other => panic!("target={target}: {other:?}"),
            }
        }
        let base4 = build_2chromatic_estar(4).unwrap();
        let base4_blocks = blocks_of(&base4.system);
        for target in [9u32, 16, 17, 24, 25, 32] {
            let ext = extend_kchromatic_estar(&base4, None, target).unwrap();
            assert!(validate_decomposition(&ext.system).ok, "target={target}");
            let got = blocks_of(&ext.system);
            for b in &base4_blocks {
                assert!(got.contains(b), "target={target} lost base block {b:?}");
            }
            match chromatic_number(&ext.system, budget()) {
                ChromaticOutcome::Determined(cert) => assert_eq!(cert.chi, 2, "target={target}"),
                other => panic!("target={target}: {other:?}"),
            }
        }
    });
}

#[test]
fn criterion_05_three_star_lift() {
    criterion(5, "lift to 3 colours at order 66 refutes 2-colourability", || {
        let base = build_equitable_2chromatic_3star(6).unwrap();
        let lifted = lift_3star_chromatic(&base, 1).unwrap();
        assert_eq!(lifted.system.n(), 66);
        assert_eq!(lifted.system.block_count(), 715);
        assert!(validate_decomposition(&lifted.system).ok);
        let c = check_colouring(&lifted.system, &lifted.colouring);
        assert!(c.proper);
        assert_eq!(lifted.colouring.nonempty_class_count(), 3);
        assert!(matches!(
            find_colouring(&lifted.system, 2, budget()),
            SearchOutcome::NotColourable(_)
        ));
    });
}

#[test]
fn criterion_06_unique_gadget() {
    criterion(6, "uniqueness gadget at e = 3: order 138, forced colouring, unique", || {
        let r = build_unique_2chromatic_estar(3).unwrap();
        assert_eq!(r.system.n(), 138);
        assert!(validate_decomposition(&r.system).ok);

        // Forcing from the two canonical anchor sets alone.
        let mut partial = PartialColouring::unconstrained(138, 2);
        for v in 1..=3 {
            partial.assign(v, 1);
        }
        for v in 4..=6 {
            partial.assign(v, 2);
        }
        match propagate_forced(&r.system, &partial) {
            PropagationOutcome::Extended(p) => {
                assert!(p.is_total(), "forcing left candidates open");
                let col = p.to_colouring().unwrap();
                assert!(check_colouring(&r.system, &col).proper);
            }
            PropagationOutcome::Conflict { block } => panic!("conflict at block {block}"),
        }

        match is_uniquely_k_colourable(&r.system, 2, budget()) {
            UniquenessOutcome::Unique(col) => {
                assert!(check_colouring(&r.system, &col).proper);
            }
            other => panic!("expected Unique, got {other:?}"),
        }
    });
}

#[test]
fn criterion_07_unique_extensions() {
    criterion(7, "orders 139 and 144 remain uniquely 2-chromatic", || {
        let base = build_unique_2chromatic_estar(3).unwrap();
        for target in [139u32, 144] {
            let ext = extend_unique_2chromatic(&base, target).unwrap();
            assert_eq!(ext.system.n(), target);
            assert!(validate_decomposition(&ext.system).ok, "target={target}");
            match is_uniquely_k_colourable(&ext.system, 2, budget()) {
                UniquenessOutcome::Unique(_) => {}
                other => panic!("target={target}: expected Unique, got {other:?}"),
            }
        }
    });
}

#[test]
fn criterion_08_strong_equitable_lift() {
    criterion(8, "copy lift to 3 colours at order 414 with classes of 138", || {
        let base = build_unique_2chromatic_estar(3).unwrap();
        let lifted = lift_unique_to_strong_equitable_k(&base).unwrap();
        assert_eq!(lifted.system.n(), 414);
        assert_eq!(lifted.colouring.class_sizes(), vec![138, 138, 138]);
        assert!(validate_decomposition(&lifted.system).ok);
        assert!(check_colouring(&lifted.system, &lifted.colouring).proper);
        // Non-2-colourability attempt under budget; exhaustion here is
        // acceptable given the order-66 refutation of criterion 5.
        match find_colouring(&lifted.system, 2, budget()) {
            SearchOutcome::NotColourable(record) => {
                println!("  order-414 refutation search: {} nodes", record.nodes);
            }
            SearchOutcome::BudgetExceeded(stats) => {
                println!(
                    "  order-414 refutation exceeded budget after {} nodes (acceptable)",
                    stats.nodes
                );
            }
            SearchOutcome::Colourable(_) => panic!("order-414 system 2-coloured"),
        }
    });
}

#[test]
fn criterion_09_k_unique_gadget_at_scale() {
    criterion(9, "k-colour uniqueness gadget completes and forces its colouring", || {
        let b7 = build_unique_2chromatic_estar(3).unwrap();
        let b9 = lift_unique_to_strong_equitable_k(&b7).unwrap();
        let b10 = make_unique_kchromatic(&b9, 1).unwrap();
        // True order reported through the result; with 41 packed classes it
        // matches the closed form 4e(k+1) + 41·414.
        assert_eq!(b10.system.n(), 17022);
        assert_eq!(
            b10.claims.provenance.params.get("copies").copied(),
            Some(41)
        );
        assert_eq!(b10.system.block_count() as u64, b10.system.expected_block_count());
        assert!(validate_decomposition(&b10.system).ok);
        assert!(check_colouring(&b10.system, &b10.colouring).proper);

        // Forcing from the three canonical anchor sets alone.
        let mut partial = PartialColouring::unconstrained(b10.system.n(), 3);
        for s in 0..3u32 {
            for v in (s * 3 + 1)..=(s * 3 + 3) {
                partial.assign(v, s + 1);
            }
        }
        match propagate_forced(&b10.system, &partial) {
            PropagationOutcome::Extended(p) => {
                assert!(p.is_total(), "forcing left candidates open");
                let col = p.to_colouring().unwrap();
                assert!(check_colouring(&b10.system, &col).proper);
                assert_eq!(col, b10.colouring);
            }
            PropagationOutcome::Conflict { block } => panic!("conflict at block {block}"),
        }

        // The +1 extension on top reports its order and passes the checker.
        let b11 = extend_unique_kchromatic(&b10, 17023).unwrap();
        assert_eq!(b11.system.n(), 17023);
        assert!(validate_decomposition(&b11.system).ok);
    });
}

fn feasible_sizes(m: u32, e: u32, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let cap = (m / e) as usize;
    let mut left = binomial(m as u64, e as u64) as usize;
    let mut sizes = Vec::new();
    while left > 0 {
        let s = rng.gen_range(1..=cap.min(left));
        sizes.push(s);
        left -= s;
    }
    sizes
}

#[test]
fn criterion_10_baranyai_engine() {
    criterion(10, "partition engine over 100 seeded size vectors per (m, e)", || {
        for e in 2..=4u32 {
            for m in e..=12u32 {
                for trial in 0..100u64 {
                    let mut rng =
                        ChaCha8Rng::seed_from_u64(trial * 1000 + m as u64 * 10 + e as u64);
                    let sizes = feasible_sizes(m, e, &mut rng);
                    let p = partition_all_subsets(m, e, &sizes, trial)
                        .unwrap_or_else(|err| panic!("m={m} e={e} trial={trial}: {err}"));
                    assert!(verify_partition(&p, &sizes), "m={m} e={e} trial={trial}");
                    if m <= 9 && trial < 10 {
                        let bt = exact_cover_partition(m, e, &sizes, 5_000_000, trial)
                            .unwrap_or_else(|err| panic!("fallback m={m} e={e} trial={trial}: {err}"));
                        assert!(verify_partition(&bt, &sizes), "fallback m={m} e={e} trial={trial}");
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_11_solver_against_brute_force() {
    criterion(11, "solver verdicts match the exhaustive oracle on 200 random systems", || {
        let shapes: Vec<(u32, u32)> = vec![
            (3, 6),
            (3, 7),
            (3, 9),
            (3, 10),
            (3, 12),
            (4, 8),
            (4, 9),
            (5, 10),
            (5, 11),
            (5, 12),
        ];
        let mut produced = 0u32;
        let mut seed = 0u64;
        while produced < 200 {
            let (e, n) = shapes[(seed % shapes.len() as u64) as usize];
            seed += 1;
            let Some(sys) = common::random_star_system(e, n, seed) else {
                continue;
            };
            produced += 1;
            for k in 1..=3u32 {
                let oracle = common::brute_force_has_colouring(&sys, k);
                match find_colouring(&sys, k, budget()) {
                    SearchOutcome::Colourable(col) => {
                        assert!(oracle, "e={e} n={n} seed={seed} k={k}: oracle says UNSAT");
                        assert!(check_colouring(&sys, &col).proper);
                    }
                    SearchOutcome::NotColourable(_) => {
                        assert!(!oracle, "e={e} n={n} seed={seed} k={k}: oracle says SAT");
                    }
                    SearchOutcome::BudgetExceeded(_) => {
                        panic!("budget exceeded on a toy instance")
                    }
                }
            }
            // Uniqueness verdict against the oracle's orbit count at k = 2.
            let orbits = common::brute_force_orbits_capped(&sys, 2, 2);
            match is_uniquely_k_colourable(&sys, 2, budget()) {
                UniquenessOutcome::Unique(_) => assert_eq!(orbits, 1, "seed={seed}"),
                UniquenessOutcome::Multiple(a, b) => {
                    assert!(orbits >= 2, "seed={seed}");
                    assert!(check_colouring(&sys, &a).proper);
                    assert!(check_colouring(&sys, &b).proper);
                }
                UniquenessOutcome::NotColourable(_) => assert_eq!(orbits, 0, "seed={seed}"),
                UniquenessOutcome::BudgetExceeded(_) => panic!("budget exceeded"),
            }
        }
    });
}

#[test]
fn criterion_12_roundtrip_and_determinism() {
    criterion(12, "serialisation round-trips and seeded reruns are byte-identical", || {
        let systems: Vec<ConstructionResult> = vec![
            build_equitable_2chromatic_3star(6).unwrap(),
            build_equitable_2chromatic_3star(7).unwrap(),
            build_equitable_2chromatic_3star(33).unwrap(),
            build_2chromatic_estar(5).unwrap(),
            extend_kchromatic_estar(&build_2chromatic_estar(4).unwrap(), None, 17).unwrap(),
            lift_3star_chromatic(&build_equitable_2chromatic_3star(6).unwrap(), 1).unwrap(),
            build_unique_2chromatic_estar(3).unwrap(),
            extend_unique_2chromatic(&build_unique_2chromatic_estar(3).unwrap(), 144).unwrap(),
            lift_unique_to_strong_equitable_k(&build_unique_2chromatic_estar(3).unwrap())
                .unwrap(),
        ];
        for r in &systems {
            let text = write_system(&r.system);
            let parsed = parse_system(&text).unwrap();
            assert_eq!(parsed, r.system, "{}", r.claims.provenance.theorem);
            assert_eq!(write_system(&parsed), text);
        }
        // Repeated seeded construction is byte-identical.
        let a = lift_3star_chromatic(&build_equitable_2chromatic_3star(6).unwrap(), 7).unwrap();
        let b = lift_3star_chromatic(&build_equitable_2chromatic_3star(6).unwrap(), 7).unwrap();
        assert_eq!(write_system(&a.system), write_system(&b.system));
        assert_eq!(a.colouring, b.colouring);
        let a = build_unique_2chromatic_estar(4).unwrap();
        let b = build_unique_2chromatic_estar(4).unwrap();
        assert_eq!(write_system(&a.system), write_system(&b.system));
    });
}
