use proptest::prelude::*;
use relclust::eval::{adjusted_rand, cut, nmi, v_measure};
use relclust::strategy::{cluster, cluster_observed, cluster_standard, MutualNnGraph};
use relclust::{Cluster, Criterion, Dataset, Dendrogram, FlatPartition, Linkage, Metric, StrategyConfig};

const SQ: Metric = Metric::SquaredEuclidean;

/// Points on a small integer grid (lots of ties) or continuous coordinates.
fn dataset(max_n: usize) -> impl Strategy<Value = Dataset> {
    (1..=3usize, 2..=max_n, any::<bool>()).prop_flat_map(|(d, n, grid)| {
        let coord = if grid {
            (0..6i32).prop_map(f64::from).boxed()
        } else {
            (-50.0..50.0f64).boxed()
        };
        proptest::collection::vec(coord, n * d).prop_map(move |v| Dataset::from_points(n, d, v).unwrap())
    })
}

fn criterion() -> impl Strategy<Value = Criterion> {
    prop::sample::select(Criterion::ALL.to_vec())
}

fn strategy() -> impl Strategy<Value = relclust::Strategy> {
    prop_oneof![
        Just(relclust::Strategy::Standard),
        Just(relclust::Strategy::Reliable),
        (0.05..=1.0f64).prop_map(relclust::Strategy::Alpha),
    ]
}

fn is_spanning_tree(n: usize, d: &Dendrogram) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    if d.records().len() + 1 != n {
        return false;
    }
    for r in d.records() {
        let (a, b) = (find(&mut parent, r.a), find(&mut parent, r.b));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

fn random_split(n: usize, seed: u64) -> Vec<Vec<usize>> {
    // Deterministic pseudo-random assignment to up to 5 groups.
    let mut groups = vec![Vec::new(); 5];
    let mut s = seed | 1;
    for i in 0..n {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        groups[(s % 5) as usize].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn level_matrix_matches_member_recomputation(data in dataset(40), c in criterion(), seed in any::<u64>()) {
        let l = Linkage::new(&data, c, SQ).unwrap();
        let groups = random_split(data.n(), seed);
        let m = l.level_distances(&groups);
        for p in 0..groups.len() {
            for q in 0..groups.len() {
                if p == q { continue; }
                let direct = l.dist_with_witness(&groups[p], &groups[q]);
                prop_assert_eq!(m.get(p, q).to_bits(), direct.value.to_bits());
                prop_assert_eq!(m.witness(p, q), direct.witness);
                prop_assert_eq!(l.dist(&groups[p], &groups[q]).to_bits(), l.dist(&groups[q], &groups[p]).to_bits());
                prop_assert!(direct.value >= 0.0);
            }
        }
    }

    #[test]
    fn single_average_complete_are_ordered(data in dataset(30), seed in any::<u64>()) {
        let groups = random_split(data.n(), seed);
        prop_assume!(groups.len() >= 2);
        let s = Linkage::new(&data, Criterion::Single, SQ).unwrap().dist(&groups[0], &groups[1]);
        let a = Linkage::new(&data, Criterion::Average, SQ).unwrap().dist(&groups[0], &groups[1]);
        let c = Linkage::new(&data, Criterion::Complete, SQ).unwrap().dist(&groups[0], &groups[1]);
        prop_assert!(s <= a * (1.0 + 1e-12) && a <= c * (1.0 + 1e-12));
    }

    #[test]
    fn ward_on_singletons_is_half_centroid(data in dataset(20)) {
        let w = Linkage::new(&data, Criterion::Ward, SQ).unwrap();
        let c = Linkage::new(&data, Criterion::Centroid, SQ).unwrap();
        for i in 0..data.n() {
            for j in (i + 1)..data.n() {
                let (wv, cv) = (w.dist(&[i], &[j]), c.dist(&[i], &[j]));
                prop_assert!((wv - 0.5 * cv).abs() <= 1e-12 * cv.max(1.0));
            }
        }
    }

    #[test]
    fn every_strategy_emits_a_spanning_tree(data in dataset(40), c in criterion(), s in strategy()) {
        let cfg = StrategyConfig::new(s, c);
        let d = cluster(&data, &cfg).unwrap();
        prop_assert!(is_spanning_tree(data.n(), &d));
        let total: usize = d.events().iter().map(|e| e.inputs.len() - 1).sum();
        prop_assert_eq!(total, data.n() - 1);
        for e in d.events() {
            prop_assert_eq!(e.linkages.len(), e.inputs.len() - 1);
            prop_assert!(e.linkages.iter().all(|l| l.level == e.level));
        }
        for (k, r) in d.records().iter().enumerate() {
            prop_assert_eq!(r.order, k);
            prop_assert!(r.distance >= 0.0 && r.a != r.b);
        }
        prop_assert_eq!(d.clusters_at_level(d.levels()).len(), 1);
        for (i, &jl) in d.join_levels().iter().enumerate() {
            prop_assert!(jl >= 1);
            let before = d.clusters_at_level(jl - 1);
            let after = d.clusters_at_level(jl);
            prop_assert!(before.iter().any(|c| c.members() == [i]));
            prop_assert!(after.iter().any(|c| c.len() > 1 && c.members().contains(&i)));
        }
        // Same input, same output.
        prop_assert_eq!(cluster(&data, &cfg).unwrap(), d);
    }

    #[test]
    fn standard_merges_global_minimum(data in dataset(24), c in criterion()) {
        let d = cluster_standard(&data, c, SQ).unwrap();
        let l = Linkage::new(&data, c, SQ).unwrap();
        let reps = d.event_input_reps();
        let mut clusters: Vec<Cluster> = (0..data.n()).map(Cluster::singleton).collect();
        for (event, rep) in d.events().iter().zip(&reps) {
            let m = l.level_distances(&clusters);
            let mut best = f64::INFINITY;
            for p in 0..clusters.len() {
                for q in (p + 1)..clusters.len() {
                    best = best.min(m.get(p, q));
                }
            }
            let (p, q) = (event.inputs[0], event.inputs[1]);
            prop_assert_eq!(clusters[p].rep(), rep[0]);
            let fresh = l.dist(clusters[p].members(), clusters[q].members());
            let recorded = event.linkages[0].distance;
            prop_assert!((fresh - recorded).abs() <= 1e-9 * fresh.abs().max(1e-300), "cached {} vs fresh {}", recorded, fresh);
            prop_assert_eq!(recorded, best);
            let mut merged = clusters[p].members().to_vec();
            merged.extend_from_slice(clusters[q].members());
            let merged = Cluster::new(merged).unwrap();
            clusters.remove(q);
            clusters[p] = merged;
        }
    }

    #[test]
    fn mutual_graph_invariants(data in dataset(40), c in criterion(), alpha in prop_oneof![Just(1.0), 0.05..1.0f64]) {
        let cfg = StrategyConfig::new(relclust::Strategy::Alpha(alpha), c);
        let mut violations = 0;
        cluster_observed(&data, &cfg, &mut |view| {
            let g: &MutualNnGraph = view.graph;
            let m = view.clusters.len();
            let mut global = (f64::INFINITY, 0, 0);
            for p in 0..m {
                for q in 0..m {
                    if p == q { continue; }
                    let v = view.distances.get(p, q);
                    if g.has_edge(p, q) != g.has_edge(q, p) { violations += 1; }
                    if g.has_edge(p, q) && (v != g.min_distance(p) || v != g.min_distance(q)) { violations += 1; }
                    if p < q && v < global.0 { global = (v, p, q); }
                }
                if g.has_edge(p, p) { violations += 1; }
            }
            if !g.has_edge(global.1, global.2) { violations += 1; }
            if view.kept.is_empty() { violations += 1; }
        }).unwrap();
        prop_assert_eq!(violations, 0);
    }

    #[test]
    fn degenerate_cuts_agree(data in dataset(30), c in criterion()) {
        let n = data.n();
        let s = cluster(&data, &StrategyConfig::new(relclust::Strategy::Standard, c)).unwrap();
        let r = cluster(&data, &StrategyConfig::new(relclust::Strategy::Reliable, c)).unwrap();
        prop_assert_eq!(cut(&s, 1).unwrap(), cut(&r, 1).unwrap());
        prop_assert_eq!(cut(&s, n).unwrap(), cut(&r, n).unwrap());
    }

    #[test]
    fn metrics_ignore_relabeling(truth in proptest::collection::vec(0..4usize, 2..30), shift in 1..5usize, seed in any::<u64>()) {
        let n = truth.len();
        let pred: Vec<usize> = random_split(n, seed).iter().enumerate()
            .fold(vec![0; n], |mut acc, (g, members)| { for &i in members { acc[i] = g; } acc });
        let t = FlatPartition::from_raw(&truth);
        let p = FlatPartition::from_raw(&pred);
        let p_relabeled = FlatPartition::from_raw(&pred.iter().map(|l| (l + shift) * 7 % 11).collect::<Vec<_>>());
        for f in [nmi, adjusted_rand, v_measure] {
            let base = f(&t, &p).unwrap();
            prop_assert!((base - f(&t, &p_relabeled).unwrap()).abs() < 1e-12);
            prop_assert!((base - f(&p, &t).unwrap()).abs() < 1e-12);
            prop_assert!((f(&t, &t).unwrap() - 1.0).abs() < 1e-12);
        }
        let v = nmi(&t, &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }
}

#[test]
fn dissimilarity_input_matches_points() {
    let data = Dataset::from_rows(&[[0.0, 0.0], [1.0, 0.5], [4.0, 4.0], [4.5, 3.0], [9.0, 0.0]]).unwrap();
    let d = relclust::pairwise_dissimilarities(&data, SQ);
    let dis = Dataset::from_dissimilarities(d.n(), d.as_slice().to_vec()).unwrap();
    for c in [Criterion::Single, Criterion::Complete, Criterion::Average] {
        for s in [relclust::Strategy::Standard, relclust::Strategy::Reliable] {
            let cfg = StrategyConfig::new(s, c);
            assert_eq!(cluster(&data, &cfg).unwrap(), cluster(&dis, &cfg).unwrap());
        }
    }
}
