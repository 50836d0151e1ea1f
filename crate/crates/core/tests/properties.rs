// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use hdbsm::{
    bell_basis, build_fig1_network, build_fig2_network, classify_setup, encode, encoding_unitary,
    evolve, make_bell_state, make_hyper_state, outcome_distribution, run_sdc, sample, tally, Arm,
    BellIndex, DetectorModel, GroupTable, Mode, ModeSpace, Policy, SdcConfig, Setup,
    TwoPhotonState, C64,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn fig1_image(idx: BellIndex) -> TwoPhotonState {
    evolve(
        &make_bell_state(4, idx).unwrap(),
        &build_fig1_network(4).unwrap(),
    )
    .unwrap()
}

fn fig2_image(idx: BellIndex) -> TwoPhotonState {
    evolve(&make_hyper_state(idx).unwrap(), &build_fig2_network()).unwrap()
}

#[test]
fn bell_states_are_orthonormal() {
    for dim in [2, 4] {
        let states: Vec<_> = BellIndex::all(dim)
            .into_iter()
            .map(|i| make_bell_state(dim, i).unwrap())
            .collect();
        assert_eq!(states.len(), dim * dim);
        for (i, s) in states.iter().enumerate() {
            for (k, t) in states.iter().enumerate() {
                let expect = if i == k { 1.0 } else { 0.0 };
                assert!((s.inner(t) - expect).norm() < 1e-12, "dim {dim}: <{i}|{k}>");
            }
        }
    }
}

#[test]
fn hyper_states_are_orthonormal() {
    let states: Vec<_> = BellIndex::all(4)
        .into_iter()
        .map(|i| make_hyper_state(i).unwrap())
        .collect();
    for (i, s) in states.iter().enumerate() {
        for (k, t) in states.iter().enumerate() {
            let expect = if i == k { 1.0 } else { 0.0 };
            assert!((s.inner(t) - expect).norm() < 1e-12);
        }
    }
}

#[test]
fn encoding_reaches_every_bell_state() {
    for dim in [2, 4] {
        let reference = make_bell_state(dim, BellIndex::new(0, 0, 0)).unwrap();
        for idx in BellIndex::all(dim) {
            let encoded = encode(&reference, idx, Arm::Second).unwrap();
            assert!(
                encoded.approx_eq_up_to_phase(&make_bell_state(dim, idx).unwrap(), 1e-9),
                "{idx}"
            );
        }
    }
    let reference = make_hyper_state(BellIndex::new(0, 0, 0)).unwrap();
    for idx in BellIndex::all(4) {
        let encoded = encode(&reference, idx, Arm::Second).unwrap();
        assert!(encoded.approx_eq_up_to_phase(&make_hyper_state(idx).unwrap(), 1e-9));
    }
}

#[test]
fn encoding_is_undone_by_matrix_inverse() {
    for start in BellIndex::all(4) {
        let s = make_bell_state(4, start).unwrap();
        for idx in BellIndex::all(4) {
            let u = encoding_unitary(4, idx).unwrap();
            let forward = encode(&s, idx, Arm::Second).unwrap();
            let inverse = u.adjoint().on_arm(s.space(), Arm::Second).unwrap();
            let back = evolve(&forward, &inverse).unwrap();
            assert!(back.approx_eq_up_to_phase(&s, 1e-9));
        }
    }
}

#[test]
fn all_operators_are_unitary() {
    for idx in BellIndex::all(4) {
        assert!(encoding_unitary(4, idx).unwrap().unitarity_error() <= 1e-10);
    }
    for dim in [2, 4] {
        assert!(build_fig1_network(dim).unwrap().unitarity_error() <= 1e-10);
    }
    assert!(build_fig2_network().unitarity_error() <= 1e-10);
}

#[test]
fn hong_ou_mandel_bunching() {
    let space = ModeSpace::new(4, false).unwrap();
    let u = build_fig1_network(4).unwrap();
    for x in 0..4 {
        let s = TwoPhotonState::symmetrized(
            space,
            [(
                Mode::path(Arm::First, x),
                Mode::path(Arm::Second, x),
                C64::from(1.0),
            )],
        )
        .unwrap();
        let out = evolve(&s, &u).unwrap();
        for (a, b, _) in out.pairs() {
            assert_eq!(a.arm, b.arm, "cross-arm amplitude for x={x}");
        }
    }
}

/// Every ket `|x⟩_A|y⟩_B` that appears in some Bell state.
fn bell_components() -> Vec<(usize, usize)> {
    let mut out = BTreeSet::new();
    for idx in BellIndex::all(4) {
        for x in 0..4 {
            out.insert((x, idx.partner(x)));
        }
    }
    out.into_iter().collect()
}

#[test]
fn exchange_symmetry_decides_output_arms() {
    let space = ModeSpace::new(4, false).unwrap();
    let u = build_fig1_network(4).unwrap();
    let comps = bell_components();
    for (i, &k1) in comps.iter().enumerate() {
        for &k2 in &comps[i + 1..] {
            for sign in [1.0, -1.0] {
                let mut f: BTreeMap<(usize, usize), f64> = BTreeMap::new();
                f.insert(k1, 1.0);
                *f.entry(k2).or_insert(0.0) += sign;
                let get = |x, y| f.get(&(x, y)).copied().unwrap_or(0.0);
                let symmetric = f.keys().all(|&(x, y)| get(x, y) == get(y, x));
                let antisymmetric = f.keys().all(|&(x, y)| get(x, y) == -get(y, x));

                let terms = f.iter().map(|(&(x, y), &c)| {
                    (
                        Mode::path(Arm::First, x),
                        Mode::path(Arm::Second, y),
                        C64::from(c),
                    )
                });
                let out = evolve(&TwoPhotonState::symmetrized(space, terms).unwrap(), &u).unwrap();
                let same_only = out.pairs().all(|(a, b, _)| a.arm == b.arm);
                let cross_only = out.pairs().all(|(a, b, _)| a.arm != b.arm);
                assert_eq!(same_only, symmetric, "{k1:?} {sign:+} {k2:?}");
                assert_eq!(cross_only, antisymmetric, "{k1:?} {sign:+} {k2:?}");
            }
        }
    }
}

#[test]
fn distributions_are_normalized() {
    for idx in BellIndex::all(4) {
        for model in [DetectorModel::Pnrd, DetectorModel::Threshold] {
            for image in [fig1_image(idx), fig2_image(idx)] {
                let d = outcome_distribution(&image, model).unwrap();
                assert!((d.total() - 1.0).abs() < 1e-9);
                assert!(d.probs.values().all(|&p| p > 0.0));
            }
        }
    }
}

#[test]
fn threshold_is_collapsed_pnrd() {
    for idx in BellIndex::all(4) {
        for image in [fig1_image(idx), fig2_image(idx)] {
            let pnrd = outcome_distribution(&image, DetectorModel::Pnrd).unwrap();
            let thr = outcome_distribution(&image, DetectorModel::Threshold).unwrap();
            let collapsed = pnrd.to_threshold();
            assert_eq!(collapsed.support(), thr.support());
            for (o, p) in &thr.probs {
                assert!((collapsed.probability(o) - p).abs() < 1e-12);
            }
            assert!((thr.total() - pnrd.total()).abs() < 1e-12);
        }
    }
}

#[test]
fn chi_square_rejections_are_rare() {
    let dist =
        outcome_distribution(&fig1_image(BellIndex::new(1, 0, 0)), DetectorModel::Pnrd).unwrap();
    assert_eq!(dist.len(), 4);
    let shots = 100_000usize;
    let dof = (dist.len() - 1) as f64;
    let critical = ChiSquared::new(dof).unwrap().inverse_cdf(0.999);
    let mut rejections = 0;
    for seed in 0..100u64 {
        let counts = tally(&sample(&dist, shots, seed));
        let stat: f64 = dist
            .probs
            .iter()
            .map(|(o, p)| {
                let expected = p * shots as f64;
                let observed = counts.get(o).copied().unwrap_or(0) as f64;
                (observed - expected).powi(2) / expected
            })
            .sum();
        if stat > critical {
            rejections += 1;
        }
    }
    // fewer than 1% of 100 seeds
    assert!(rejections < 1, "{rejections} rejections");
}

fn same_arm_all(table: &GroupTable, group: usize) -> bool {
    table.groups[group]
        .support
        .iter()
        .all(|o| o.clicks().iter().all(|d| d.arm == o.clicks()[0].arm))
}

#[test]
fn fig2_memberships() {
    let t = classify_setup(Setup::Fig2, 4, DetectorModel::Pnrd, Policy::Strict).unwrap();
    let got: Vec<Vec<&str>> = t
        .groups
        .iter()
        .map(|g| g.members.iter().map(String::as_str).collect())
        .collect();
    assert_eq!(
        got,
        vec![
            vec!["psi[0][0][0]", "psi[0][0][1]"],
            vec!["psi[0][1][0]", "psi[0][1][1]"],
            vec!["psi[1][0][0]", "psi[1][0][1]"],
            vec!["psi[1][1][0]", "psi[1][1][1]"],
            vec!["psi[2][0][0]"],
            vec!["psi[2][0][1]"],
            vec!["psi[2][1][0]"],
            vec!["psi[2][1][1]"],
            vec!["psi[3][0][0]"],
            vec!["psi[3][0][1]"],
            vec!["psi[3][1][0]"],
            vec!["psi[3][1][1]"],
        ]
    );
    assert!(same_arm_all(&t, 4));
    assert!(!same_arm_all(&t, 5));
}

#[test]
fn groups_partition_and_are_maximal() {
    for (setup, dim) in [(Setup::Fig1, 4), (Setup::Fig1, 2), (Setup::Fig2, 4)] {
        let t = classify_setup(setup, dim, DetectorModel::Pnrd, Policy::Strict).unwrap();
        t.validate().unwrap();
        let labels: BTreeSet<String> = bell_basis(setup, dim)
            .unwrap()
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        let covered: BTreeSet<String> = t.groups.iter().flat_map(|g| g.members.clone()).collect();
        assert_eq!(labels, covered);

        // recompute per-state supports and check each group is connected
        let network = hdbsm::NetworkSpec::for_setup(setup, dim).unwrap().unitary();
        let supports: BTreeMap<String, BTreeSet<_>> = bell_basis(setup, dim)
            .unwrap()
            .into_iter()
            .map(|(l, s)| {
                let d = outcome_distribution(&evolve(&s, &network).unwrap(), DetectorModel::Pnrd)
                    .unwrap();
                (l, d.support())
            })
            .collect();
        for g in &t.groups {
            let mut reached = BTreeSet::from([g.members[0].clone()]);
            let mut frontier = vec![g.members[0].clone()];
            while let Some(cur) = frontier.pop() {
                for m in &g.members {
                    if !reached.contains(m) && !supports[&cur].is_disjoint(&supports[m]) {
                        reached.insert(m.clone());
                        frontier.push(m.clone());
                    }
                }
            }
            assert_eq!(reached.len(), g.members.len());
            for m in &g.members {
                assert_eq!(supports[m], g.support);
            }
        }
    }
}

#[test]
fn only_first_group_needs_number_resolution() {
    for setup in [Setup::Fig1, Setup::Fig2] {
        let t = classify_setup(setup, 4, DetectorModel::Pnrd, Policy::Strict).unwrap();
        let needing: Vec<usize> = t
            .groups
            .iter()
            .filter(|g| g.needs_number_resolution())
            .map(|g| g.id)
            .collect();
        assert_eq!(needing, vec![1], "{setup}");
    }
}

#[test]
fn fig2_refines_fig1() {
    let coarse = classify_setup(Setup::Fig1, 4, DetectorModel::Pnrd, Policy::Strict).unwrap();
    let fine = classify_setup(Setup::Fig2, 4, DetectorModel::Pnrd, Policy::Strict).unwrap();
    assert!(fine.groups.len() >= coarse.groups.len());
    for g in &fine.groups {
        let parent = coarse.group_of(&g.members[0]).unwrap().id;
        for m in &g.members {
            assert_eq!(coarse.group_of(m).unwrap().id, parent);
        }
    }
}

#[test]
fn sdc_never_misdecodes() {
    for setup in [Setup::Fig1, Setup::Fig2] {
        for model in [DetectorModel::Pnrd, DetectorModel::Threshold] {
            for policy in [Policy::Strict, Policy::LossConservative] {
                for seed in [0, 1, 77] {
                    let cfg = SdcConfig {
                        setup,
                        model,
                        policy,
                        seed,
                        shots: 200,
                    };
                    let r = run_sdc(&cfg, &BellIndex::all(4)).unwrap();
                    assert_eq!(r.accuracy, 1.0);
                    assert!(r.messages.iter().all(|m| m.total() == 200));
                }
            }
        }
    }
}

#[test]
fn grouped_messages_look_alike() {
    for setup in [Setup::Fig1, Setup::Fig2] {
        let cfg = SdcConfig {
            setup,
            shots: 10_000,
            ..SdcConfig::default()
        };
        let r = run_sdc(&cfg, &BellIndex::all(4)).unwrap();
        let mut by_group: BTreeMap<usize, Vec<BTreeSet<_>>> = BTreeMap::new();
        for m in &r.messages {
            by_group
                .entry(m.expected_group)
                .or_default()
                .push(m.outcomes.keys().cloned().collect());
        }
        for supports in by_group.values() {
            assert!(supports.windows(2).all(|w| w[0] == w[1]));
        }
    }
}
