use plap_core::combinatorics::{
    cvetkovic_bound, is_edge_cover, is_independent, max_independent_set, max_matching,
    min_edge_cover, CvetkovicMatrix,
};
use plap_core::cutoff::{self, BracketOptions};
use plap_core::graph::{EdgeSpec, GraphSpec, Sign, SignedGraph, SwitchingFunction};
use plap_core::linalg;
use plap_core::plap::{self, VertexFunction};
use plap_core::tensor;
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Sample {
    g: SignedGraph,
    f: Vec<f64>,
    tau: Vec<i8>,
}

fn graph_strategy(max_n: usize, weighted: bool) -> impl Strategy<Value = SignedGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        (
            prop::collection::vec(any::<bool>(), pairs),
            prop::collection::vec(any::<bool>(), pairs),
            prop::collection::vec(0.25f64..3.0, pairs),
            prop::collection::vec(0.25f64..3.0, n),
        )
            .prop_map(move |(present, neg, w, mu)| {
                let mut edges = Vec::new();
                let mut idx = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if present[idx] {
                            let mut e = EdgeSpec::signed(u, v, if neg[idx] { -1 } else { 1 });
                            if weighted {
                                e.w = Some(w[idx]);
                            }
                            edges.push(e);
                        }
                        idx += 1;
                    }
                }
                let mut spec = GraphSpec::new(n, edges);
                if weighted {
                    spec.mu = Some(mu);
                }
                spec.validate().unwrap()
            })
    })
}

fn sample_strategy(max_n: usize) -> impl Strategy<Value = Sample> {
    graph_strategy(max_n, true).prop_flat_map(|g| {
        let n = g.n();
        (
            Just(g),
            prop::collection::vec(-2.0f64..2.0, n),
            prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { 1i8 } else { -1 }), n),
        )
            .prop_map(|(g, mut f, tau)| {
                if f.iter().all(|x| *x == 0.0) {
                    f[0] = 1.0;
                }
                Sample { g, f, tau }
            })
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn switching_preserves_rayleigh(s in sample_strategy(7), p in 1.2f64..6.0) {
        let tau = SwitchingFunction::from_i8(&s.tau).unwrap();
        let h = s.g.switch(&tau).unwrap();
        let f = VertexFunction::new(s.f.clone());
        let tf = VertexFunction::new(tau.apply(&s.f));
        let a = plap::rayleigh(&s.g, p, &f).unwrap();
        let b = plap::rayleigh(&h, p, &tf).unwrap();
        prop_assert!(close(a, b, 1e-12));
        // Δ_p commutes with switching
        let la = plap::apply_plap(&s.g, p, &f).unwrap();
        let lb = plap::apply_plap(&h, p, &tf).unwrap();
        let back = tau.apply(lb.values());
        for (x, y) in la.values().iter().zip(&back) {
            prop_assert!(close(*x, *y, 1e-12));
        }
    }

    #[test]
    fn switching_and_negation_are_involutions(s in sample_strategy(7)) {
        let tau = SwitchingFunction::from_i8(&s.tau).unwrap();
        prop_assert_eq!(s.g.switch(&tau).unwrap().switch(&tau).unwrap(), s.g.clone());
        prop_assert_eq!(s.g.negate().negate(), s.g.clone());
    }

    #[test]
    fn switching_preserves_spectra(s in sample_strategy(7)) {
        let tau = SwitchingFunction::from_i8(&s.tau).unwrap();
        let h = s.g.switch(&tau).unwrap();
        let a = linalg::normalized_eigenvalues(&s.g);
        let b = linalg::normalized_eigenvalues(&h);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        let la = cutoff::exact_ln(&s.g).unwrap().upper;
        let lb = cutoff::exact_ln(&h).unwrap().upper;
        prop_assert!((la - lb).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_is_scale_invariant(s in sample_strategy(7), p in 1.2f64..8.0, c in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0]) {
        let f = VertexFunction::new(s.f.clone());
        let a = plap::rayleigh(&s.g, p, &f).unwrap();
        let b = plap::rayleigh(&s.g, p, &f.scaled(c)).unwrap();
        prop_assert!(close(a, b, 1e-11));
    }

    #[test]
    fn plap_is_homogeneous(s in sample_strategy(7), p in 1.2f64..6.0, c in prop_oneof![-3.0f64..-0.2, 0.2f64..3.0]) {
        let f = VertexFunction::new(s.f.clone());
        let a = plap::apply_plap(&s.g, p, &f).unwrap();
        let b = plap::apply_plap(&s.g, p, &f.scaled(c)).unwrap();
        let factor = c.abs().powf(p - 2.0) * c;
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!(close(factor * x, *y, 1e-10));
        }
    }

    #[test]
    fn gradient_matches_finite_differences(s in sample_strategy(6), p in 2.0f64..5.0) {
        let f = VertexFunction::new(s.f.clone());
        let grad = plap::rayleigh_gradient(&s.g, p, &f).unwrap();
        let h = 1e-6;
        for i in 0..s.g.n() {
            let mut up = s.f.clone();
            let mut dn = s.f.clone();
            up[i] += h;
            dn[i] -= h;
            let fd = (plap::rayleigh(&s.g, p, &VertexFunction::new(up)).unwrap()
                - plap::rayleigh(&s.g, p, &VertexFunction::new(dn)).unwrap())
                / (2.0 * h);
            prop_assert!((fd - grad[i]).abs() <= 1e-4 * grad[i].abs().max(1.0), "{} {}", fd, grad[i]);
        }
    }

    #[test]
    fn quadratic_cutoff_matches_negated_form(s in sample_strategy(7)) {
        // choose the signature so that every edge product −f(i)σf(j) is nonnegative
        let signs: Vec<Sign> = s.g.edges().iter().map(|e| {
            if s.f[e.u] * s.f[e.v] > 0.0 { Sign::Negative } else { Sign::Positive }
        }).collect();
        let g = s.g.with_signature(&signs).unwrap();
        let f = VertexFunction::new(s.f.clone());
        let r = cutoff::r_q_infty(&g, 2.0, &f).unwrap();
        let af = linalg::adjacency(&g).mul_vec(&s.f);
        let quad: f64 = -0.5 * af.iter().zip(&s.f).map(|(a, b)| a * b).sum::<f64>();
        let norm: f64 = s.f.iter().zip(g.measure()).map(|(x, m)| m * x * x).sum();
        prop_assert!(close(r, quad / norm, 1e-12));
    }

    #[test]
    fn exact_ln_properties(g in graph_strategy(8, true)) {
        let ln = cutoff::exact_ln(&g).unwrap().upper;
        let full = cutoff::lower_bound_full(&g, g.n()).unwrap();
        prop_assert!(ln >= full - 1e-12);
        if g.classify_balance().is_antibalanced() {
            prop_assert!((ln - full).abs() < 1e-9);
        }
        prop_assert_eq!(ln > 0.0, g.edge_count() > 0);
        if !g.has_isolated_vertex() && g.edge_count() > 0 {
            prop_assert!(ln >= 0.5 * g.min_weight().unwrap() / g.max_measure() - 1e-12);
        }
        // the exact value is attained by a sign vector in the subgraph pool
        let (sub, _) = cutoff::lower_bound_subgraphs(&g, g.n(), 1 << 12).unwrap();
        prop_assert!((sub - ln).abs() < 1e-9);
    }

    #[test]
    fn exact_ln_of_union_is_max(a in graph_strategy(5, true), b in graph_strategy(5, true)) {
        let u = a.disjoint_union(&b);
        let la = cutoff::exact_ln(&a).unwrap().upper;
        let lb = cutoff::exact_ln(&b).unwrap().upper;
        prop_assert!((cutoff::exact_ln(&u).unwrap().upper - la.max(lb)).abs() < 1e-12);
    }

    #[test]
    fn brackets_are_consistent(g in graph_strategy(7, true)) {
        let b = cutoff::brackets_all(&g, &BracketOptions::default()).unwrap();
        for x in &b {
            prop_assert!(x.lower >= 0.0 && x.lower <= x.upper);
        }
        for w in b.windows(2) {
            prop_assert!(w[0].lower <= w[1].lower && w[0].upper <= w[1].upper);
        }
        prop_assert!(b.last().unwrap().exact);
        let alpha = max_independent_set(&g).size;
        for k in 1..=alpha {
            prop_assert_eq!(cutoff::upper_bound_subsets(&g, k, 1 << 12).unwrap().0, 0.0);
        }
    }

    #[test]
    fn potential_does_not_change_cutoff(g in graph_strategy(6, true), kappa in prop::collection::vec(0.0f64..2.0, 6)) {
        let h = g.with_potential(kappa[..g.n()].to_vec()).unwrap();
        let a = cutoff::brackets_all(&g, &BracketOptions::default()).unwrap();
        let b = cutoff::brackets_all(&h, &BracketOptions::default()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn combinatorics_match_brute_force(g in graph_strategy(8, false)) {
        let n = g.n();
        let mis = max_independent_set(&g);
        prop_assert!(is_independent(&g, &mis.witness));
        let brute_alpha = (0u32..1 << n)
            .filter(|m| {
                let s: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
                is_independent(&g, &s)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap();
        prop_assert_eq!(mis.size, brute_alpha);

        let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        let m = max_matching(&g).unwrap();
        let brute_matching = (0u32..1 << edges.len())
            .filter(|mask| {
                let sel: Vec<(usize, usize)> = (0..edges.len()).filter(|e| mask >> e & 1 == 1).map(|e| edges[e]).collect();
                plap_core::combinatorics::is_matching(&g, &sel)
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap();
        prop_assert_eq!(m.size, brute_matching);

        if !g.has_isolated_vertex() {
            let cover = min_edge_cover(&g).unwrap();
            prop_assert!(is_edge_cover(&g, &cover.edges));
            let brute_beta = (0u32..1 << edges.len())
                .filter(|mask| {
                    let sel: Vec<(usize, usize)> = (0..edges.len()).filter(|e| mask >> e & 1 == 1).map(|e| edges[e]).collect();
                    is_edge_cover(&g, &sel)
                })
                .map(|mask| mask.count_ones() as usize)
                .min()
                .unwrap();
            prop_assert_eq!(cover.size, brute_beta);
            prop_assert_eq!(cover.size, n - m.size);
            prop_assert!(mis.size <= cover.size);
        }
        prop_assert!(mis.size <= cvetkovic_bound(&CvetkovicMatrix::adjacency(&g)));
    }

    #[test]
    fn tensor_matches_plap(s in sample_strategy(6), half in 1u32..=3) {
        let p = 2.0 * half as f64;
        let t = tensor::build_tensor(&s.g, p).unwrap();
        let fast = t.apply(&s.f).unwrap();
        let slow = t.apply_by_patterns(&s.f).unwrap();
        let lap = plap::apply_plap(&s.g, p, &VertexFunction::new(s.f.clone())).unwrap();
        let scale = s.f.iter().fold(0.0f64, |m, x| m.max(x.abs())).powf(p - 1.0).max(1e-300);
        for i in 0..s.g.n() {
            prop_assert!((fast[i] - lap.values()[i]).abs() <= 1e-10 * scale.max(1.0) * 16.0);
            prop_assert!((slow[i] - fast[i]).abs() <= 1e-10 * scale.max(1.0) * 64.0);
        }
    }

    #[test]
    fn quadratic_tensor_is_the_laplacian(s in sample_strategy(6)) {
        let g = s.g.with_potential(s.f.iter().map(|x| x.abs()).collect()).unwrap();
        let t = tensor::build_tensor(&g, 2.0).unwrap();
        let a = t.apply(&s.f).unwrap();
        let b = linalg::laplacian(&g).mul_vec(&s.f);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(close(*x, *y, 1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn perron_pairs_dominate_ln(seed in 0u64..1000, p in prop::sample::select(vec![2.0, 4.0, 8.0])) {
        let g = plap_core::generate::random(
            &plap_core::generate::RandomSpec::new(6, 0.5, seed)
                .signs(plap_core::generate::SignMode::Antibalanced)
                .connected(true),
        ).unwrap();
        let pair = plap::solve_largest(&g, p, &plap::SolverConfig::default()).unwrap();
        prop_assert_eq!(pair.certificate, plap::Certificate::PerronCertified);
        let ln = cutoff::exact_ln(&g).unwrap().upper;
        prop_assert!(2f64.powf(-p) * pair.lambda >= ln - 1e-8);
        // and the value is a genuine eigenvalue
        prop_assert!(pair.residual <= 1e-8 * pair.scale);
    }
}
