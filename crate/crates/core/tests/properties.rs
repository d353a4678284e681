use proptest::prelude::*;
use randflag::certify::{garland_certify, vanishing_pipeline};
use randflag::complex::count_maximal_cliques;
use randflag::homology::{self, composes_to_zero, rank_bareiss, rank_exact, rank_modular, DEFAULT_PRIMES};
use randflag::spectral::{self, KERNEL_TOL};
use randflag::{BoundaryMatrix, Face, FlagSkeleton, Graph, RankMethod, Seed};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..=1.0f64, any::<u64>())
        .prop_map(|(n, p, s)| Graph::sample_gnp(n, p, Seed::new(s, 0)).unwrap())
}

/// All `size`-cliques in lexicographic order.
fn cliques_brute(g: &Graph, size: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>())
        .filter(|vs| vs.iter().all(|&u| vs.iter().all(|&v| u == v || g.has_edge(u, v))))
        .collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_graphs_are_simple_and_reproducible(n in 0usize..40, p in 0.0..=1.0f64, s in any::<u64>(), t in any::<u64>()) {
        let a = Graph::sample_gnp(n, p, Seed::new(s, t)).unwrap();
        prop_assert!(a.check_invariants());
        for (u, v) in a.edges() {
            prop_assert!(u < v && a.has_edge(v, u));
        }
        prop_assert_eq!(&a, &Graph::sample_gnp(n, p, Seed::new(s, t)).unwrap());
        prop_assert_eq!(a.edges().count(), a.edge_count());
    }

    #[test]
    fn edge_list_round_trip(g in graph(20)) {
        prop_assert_eq!(Graph::from_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn skeleton_faces_are_exactly_the_cliques(g in graph(9)) {
        let sk = FlagSkeleton::full(&g);
        prop_assert!(sk.check_downward_closed());
        for d in 0..=sk.cap() {
            let expected: Vec<u32> = cliques_brute(&g, d + 1).into_iter().flatten().map(|v| v as u32).collect();
            prop_assert_eq!(sk.faces(d), &expected[..]);
        }
        let bigger = cliques_brute(&g, sk.cap() + 2);
        prop_assert!(bigger.is_empty());
    }

    #[test]
    fn maximal_clique_count_matches_brute_force(g in graph(8), size in 1usize..5) {
        let all = cliques_brute(&g, size);
        let maximal = all
            .iter()
            .filter(|c| (0..g.n()).all(|w| c.contains(&w) || c.iter().any(|&u| !g.has_edge(u, w))))
            .count();
        prop_assert_eq!(count_maximal_cliques(&g, size).unwrap(), maximal);
    }

    #[test]
    fn links_contain_only_common_neighbours(g in graph(12)) {
        let sk = FlagSkeleton::build(&g, 2);
        for e in sk.faces(1).chunks(2) {
            let face = Face::new(e.iter().map(|&v| v as usize).collect()).unwrap();
            let (link, labels) = sk.link_graph(&face).unwrap();
            prop_assert_eq!(&labels, &g.common_neighbors(face.vertices()).unwrap());
            for (a, b) in link.edges() {
                prop_assert!(g.has_edge(labels[a], labels[b]));
            }
            prop_assert_eq!(link.edge_count(), sk.faces(1).chunks(2).filter(|f| {
                labels.contains(&(f[0] as usize)) && labels.contains(&(f[1] as usize))
            }).count());
        }
    }

    #[test]
    fn boundary_of_boundary_vanishes(g in graph(12)) {
        let sk = FlagSkeleton::full(&g);
        for d in 2..=sk.cap() {
            let lower = BoundaryMatrix::new(&sk, d - 1).unwrap();
            let upper = BoundaryMatrix::new(&sk, d).unwrap();
            prop_assert!(composes_to_zero(&lower, &upper));
        }
    }

    #[test]
    fn ranks_agree_across_methods(g in graph(11)) {
        let sk = FlagSkeleton::full(&g);
        for d in 1..=sk.cap() {
            let m = BoundaryMatrix::new(&sk, d).unwrap();
            let exact = rank_exact(&m);
            prop_assert_eq!(rank_modular(&m, &DEFAULT_PRIMES), exact);
            prop_assert_eq!(rank_bareiss(m.nrows(), m.ncols(), &m.to_dense()), exact);
            prop_assert_eq!(rank_bareiss(m.ncols(), m.nrows(), &m.transpose_dense()), exact);
        }
    }

    #[test]
    fn betti_identities(g in graph(13)) {
        let sk = FlagSkeleton::full(&g);
        let b = homology::betti(&sk, &RankMethod::default()).unwrap();
        let exact = homology::betti(&sk, &RankMethod::Exact).unwrap();
        prop_assert_eq!(&b.betti, &exact.betti);
        prop_assert!(b.euler_holds());
        prop_assert_eq!(b.get(0).unwrap(), g.component_count());
        let f = sk.f_vector();
        for k in 0..b.betti.len() {
            prop_assert!(b.betti[k] as i64 >= homology::morse_lower_bound(&f, k));
        }
    }

    #[test]
    fn laplacian_trace_and_spectrum_range(g in graph(25)) {
        prop_assume!(g.isolated_vertex().is_none());
        let l = spectral::laplacian(&g).unwrap();
        let s = l.spectrum().unwrap();
        let sum: f64 = s.eigenvalues.iter().sum();
        prop_assert!((sum - g.n() as f64).abs() < 1e-8);
        prop_assert!(s.eigenvalues.iter().all(|&x| (-1e-9..=2.0 + 1e-9).contains(&x)));
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(s.zero_multiplicity(KERNEL_TOL), g.component_count());
    }

    #[test]
    fn certificates_are_sound_and_deterministic(n in 4usize..16, p in 0.3..=1.0f64, s in any::<u64>(), k in 1usize..3) {
        let g = Graph::sample_gnp(n, p, Seed::new(s, 1)).unwrap();
        let out = vanishing_pipeline(&g, k, Some(&RankMethod::Exact)).unwrap();
        prop_assert!(out.consistent());
        let again = vanishing_pipeline(&g, k, Some(&RankMethod::Exact)).unwrap();
        prop_assert_eq!(out, again);
        let sk = FlagSkeleton::build(&g, k + 1);
        let direct = garland_certify(&sk, k + 1).unwrap();
        prop_assert_eq!(serde_json::to_string(&direct).unwrap(), serde_json::to_string(&vanishing_pipeline(&g, k, None).unwrap().certificate).unwrap());
    }
}

#[test]
fn complete_graph_f_vectors_are_binomial() {
    for n in 1..=9 {
        let f = FlagSkeleton::full(&Graph::complete(n)).f_vector();
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![1; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        assert_eq!(f, row[1..].to_vec(), "K_{n}");
    }
}

#[test]
fn edge_count_mean_matches_binomial() {
    // n = 30, p = 0.5: m ~ Bin(435, 1/2)
    let trials = 10_000;
    let counts: Vec<f64> = (0..trials)
        .map(|t| Graph::sample_gnp(30, 0.5, Seed::new(2024, t)).unwrap().edge_count() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / trials as f64;
    let se = (435.0 * 0.25 / trials as f64).sqrt();
    assert!((mean - 217.5).abs() < 4.0 * se, "mean {mean}");
}

#[test]
fn edge_link_density_matches_p() {
    // the link of an edge in G(n, p) is G(|link|, p) on its vertex set
    let p = 0.6;
    let (mut pairs, mut present) = (0usize, 0usize);
    for t in 0..300 {
        let g = Graph::sample_gnp(40, p, Seed::new(5, t)).unwrap();
        let sk = FlagSkeleton::build(&g, 1);
        let e = sk.faces(1);
        if e.is_empty() {
            continue;
        }
        let face = Face::new(vec![e[0] as usize, e[1] as usize]).unwrap();
        let (link, _) = sk.link_graph(&face).unwrap();
        pairs += link.n() * link.n().saturating_sub(1) / 2;
        present += link.edge_count();
    }
    let phat = present as f64 / pairs as f64;
    let se = (p * (1.0 - p) / pairs as f64).sqrt();
    assert!((phat - p).abs() < 4.0 * se, "{phat}");
}

#[test]
fn kernel_dimension_counts_components() {
    let mut checked = 0;
    let mut t = 0;
    while checked < 1000 {
        t += 1;
        let g = Graph::sample_gnp(14, 0.2, Seed::new(99, t)).unwrap();
        if g.isolated_vertex().is_some() {
            continue;
        }
        let s = spectral::spectrum(&g).unwrap();
        assert_eq!(s.zero_multiplicity(KERNEL_TOL), g.component_count());
        checked += 1;
    }
}
