mod common;

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use spreadforge::classify::{characteristic_of_pairs, HyperbolicPointModel, SimilitudeGroup};
use spreadforge::ddg::{canonical_form, complement_within, partial_complement, VertexPartition};
use spreadforge::exactcover::{build_spread_instance, solve_all, ExactCoverInstance, SolveOptions, Solver};
use spreadforge::gf::FieldSpec;
use spreadforge::projgeom::{ProjectiveSpace, Subspace, SymplecticForm};
use spreadforge::spgraph::{graph6, Graph};
use spreadforge::spreads::{construct_special_spread, SymplecticQuadrangle};

#[test]
fn field_axioms_exhaustive_small_orders() {
    common::field_axioms().unwrap();
}

#[test]
fn polarity_is_an_involution() {
    common::polarity_involution().unwrap();
}

#[test]
fn quadric_point_counts() {
    common::quadric_counts().unwrap();
}

#[test]
fn klein_correspondence_is_bijective() {
    common::klein_bijectivity().unwrap();
}

#[test]
fn outside_vertices_see_one_point_per_paired_line() {
    common::paired_lines().unwrap();
}

#[test]
fn shared_line_counts_are_dichotomous() {
    common::line_set_dichotomy(&[3, 5]).unwrap();
}

#[test]
fn pair_kind_block_sizes() {
    common::block_sizes().unwrap();
}

#[test]
fn partial_complement_involution_fixed_seed() {
    common::partial_complement_involution().unwrap();
}

fn big_fields() -> &'static Vec<Arc<FieldSpec>> {
    static F: OnceLock<Vec<Arc<FieldSpec>>> = OnceLock::new();
    F.get_or_init(|| [25u32, 27, 49, 81, 121, 125, 128, 243].iter().map(|&q| Arc::new(FieldSpec::new(q).unwrap())).collect())
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut it = bits.into_iter();
            Graph::from_fn(n, |_, _| it.next().unwrap())
        })
    })
}

fn arb_graph_and_partition(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), proptest::collection::vec(0..n, n)).prop_map(|(g, raw)| {
            // renumber classes 0..m in order of first appearance
            let mut seen = Vec::new();
            let class_of = raw
                .iter()
                .map(|c| match seen.iter().position(|x| x == c) {
                    Some(i) => i,
                    None => {
                        seen.push(*c);
                        seen.len() - 1
                    }
                })
                .collect();
            (g, class_of)
        })
    })
}

fn q5() -> &'static (SymplecticQuadrangle, HyperbolicPointModel, SimilitudeGroup, Vec<usize>) {
    static S: OnceLock<(SymplecticQuadrangle, HyperbolicPointModel, SimilitudeGroup, Vec<usize>)> = OnceLock::new();
    S.get_or_init(|| {
        let w = SymplecticQuadrangle::new(5).unwrap();
        let m = HyperbolicPointModel::new(&w).unwrap();
        let g = SimilitudeGroup::new(&w).unwrap();
        let s = construct_special_spread(&w).unwrap().pair_indices(&w).unwrap();
        (w, m, g, s)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms_on_random_triples(fi in 0usize..8, a in any::<u16>(), b in any::<u16>(), c in any::<u16>()) {
        let f = &big_fields()[fi];
        let q = f.order();
        let (a, b, c) = (f.element(a as usize % q).unwrap(), f.element(b as usize % q).unwrap(), f.element(c as usize % q).unwrap());
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.element(1).unwrap());
            prop_assert_eq!(f.pow(a, q as u64 - 1), f.element(1).unwrap());
        }
    }

    #[test]
    fn perp_is_an_involution_on_random_subspaces(
        qi in 0usize..3,
        e in 2usize..4,
        seeds in proptest::collection::vec(any::<u32>(), 1..6),
    ) {
        let q = [3u32, 5, 7][qi];
        let space = ProjectiveSpace::new(2 * e - 1, Arc::new(FieldSpec::new(q).unwrap())).unwrap();
        let f = space.field();
        let form = SymplecticForm::standard(f, e);
        let vecs = seeds.iter().map(|&s| space.coords(s as usize % space.num_points()).to_vec()).collect();
        let s = Subspace::span(f, vecs);
        let p = s.perp(f, &form).unwrap();
        prop_assert_eq!(s.rank() + p.rank(), 2 * e);
        prop_assert_eq!(p.perp(f, &form).unwrap(), s);
    }

    #[test]
    fn partial_complement_is_an_involution((g, class_of) in arb_graph_and_partition(24)) {
        let p = VertexPartition::from_class_of(class_of).unwrap();
        prop_assert_eq!(partial_complement(&partial_complement(&g, &p), &p), g.clone());
        prop_assert_eq!(complement_within(&complement_within(&g, &p), &p), g.clone());
        // the two operations together complement the whole graph
        prop_assert_eq!(partial_complement(&complement_within(&g, &p), &p), g.complement());
    }

    #[test]
    fn graph6_round_trip(g in arb_graph(70)) {
        prop_assert_eq!(graph6::decode(&graph6::encode(&g)).unwrap().adjacency_matrix(), g.adjacency_matrix());
    }

    #[test]
    fn canonical_form_ignores_labels(g in arb_graph(30), perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed);
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rng);
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&g.permuted(&perm)).unwrap());
    }

    #[test]
    fn exact_covers_match_brute_force(
        n_cols in 1usize..7,
        raw in proptest::collection::vec(proptest::collection::vec(0usize..7, 1..4), 0..10),
    ) {
        let rows: Vec<Vec<usize>> = raw
            .into_iter()
            .map(|r| {
                let mut r: Vec<usize> = r.into_iter().map(|c| c % n_cols).collect();
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        let Ok(inst) = ExactCoverInstance::new(n_cols, rows.clone()) else {
            // some column is uncovered: nothing to compare
            return Ok(());
        };
        let mut got: Vec<Vec<usize>> = solve_all(&inst, &SolveOptions::default())
            .unwrap()
            .into_iter()
            .map(|mut s| { s.sort_unstable(); s })
            .collect();
        got.sort();
        let mut want = Vec::new();
        for mask in 0u32..1 << rows.len() {
            let chosen: Vec<usize> = (0..rows.len()).filter(|&i| mask >> i & 1 == 1).collect();
            let mut cover = vec![0; n_cols];
            for &i in &chosen {
                for &c in &rows[i] {
                    cover[c] += 1;
                }
            }
            if cover.iter().all(|&c| c == 1) {
                want.push(chosen);
            }
        }
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn characteristic_is_invariant_under_the_group(seed in any::<u64>()) {
        use rand::SeedableRng;
        let (_, m, g, s) = q5();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let perm = g.random_pair_perm(&mut rng, 15);
        let image: Vec<usize> = s.iter().map(|&u| perm.apply(u)).collect();
        prop_assert_eq!(characteristic_of_pairs(m, s), characteristic_of_pairs(m, &image));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn resuming_reproduces_the_solution_set(stop in 1usize..580) {
        let (w, ..) = q5();
        let inst = build_spread_instance(w).unwrap();
        let solver = Solver::new(&inst).unwrap();
        let mut all = Vec::new();
        solver.run(&[0], None, |r, _| { all.push(r.to_vec()); ControlFlow::Continue(()) });
        let mut head = Vec::new();
        let ck = solver.run(&[0], None, |r, _| {
            head.push(r.to_vec());
            if head.len() == stop { ControlFlow::Break(()) } else { ControlFlow::Continue(()) }
        });
        let text = serde_json::to_string(&ck).unwrap();
        let ck = serde_json::from_str(&text).unwrap();
        solver.run(&[0], Some(&ck), |r, _| { head.push(r.to_vec()); ControlFlow::Continue(()) });
        prop_assert_eq!(&head, &all);
        let distinct: HashSet<_> = head.iter().collect();
        prop_assert_eq!(distinct.len(), all.len());
    }
}
