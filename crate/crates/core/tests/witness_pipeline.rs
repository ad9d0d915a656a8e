use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smoothclass::analysis::{
    build_coloring, build_component_graph, closed_embeddings, find_cycle, full_coloring_matrix, is_tree_pair_window,
    TreePairViolation,
};
use smoothclass::convex::{decide_convex_ramsey, witness_matrix};
use smoothclass::rational::{half, int};
use smoothclass::smooth::{closure, extend_window, member, ClassSpec};
use smoothclass::witness::{build_ordered_witness, build_witness, verify_claims, ClaimStatus, WitnessWindow};
use smoothclass::{delta, delta_of, enumerate_copies, free_amalgam, induced, Budget, Glue, Graph, VertexSet};

#[test]
fn full_witness_claims_all_pass() {
    let w = build_witness();
    let report = verify_claims(&w, &mut Budget::unlimited());
    for c in &report.checks {
        assert_eq!(c.status, ClaimStatus::Pass, "{}: {}", c.claim, c.detail);
    }
    assert_eq!(report.checks.len(), 11);
}

#[test]
fn tiny_budget_flags_instead_of_failing() {
    let w = build_witness();
    let report = verify_claims(&w, &mut Budget::new(3));
    assert!(report.checks.iter().any(|c| c.status == ClaimStatus::BudgetExhausted));
    assert!(report.checks.iter().all(|c| c.status != ClaimStatus::Fail));
}

#[test]
fn proper_subsets_with_two_triangles_close_to_b() {
    let w = build_witness();
    let all = w.b.all_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let mut picks: Vec<usize> = (0..6).collect();
        picks.shuffle(&mut rng);
        let k = rng.gen_range(2..=6);
        let mut set = picks[..k].iter().fold(VertexSet::new(), |acc, &i| acc.union(&w.triangles[i]));
        for blk in &w.blocks {
            for &v in blk.cycle.iter() {
                if rng.gen_bool(0.5) {
                    set = set.with(v);
                }
            }
        }
        if set == all {
            continue;
        }
        assert!(delta_of(&w.b, &set, &w.alpha) > int(3));
        assert_eq!(closure(&set, &w.b, &w.alpha).unwrap().closure, all);
    }
}

#[test]
fn c5_copies_match_brute_force() {
    let w = build_witness();
    let c5 = Graph::cycle(5);
    // Induced 5-cycles need a vertex set with exactly five edges forming a
    // cycle; brute force over connected 5-sets grown from each vertex.
    let copies = enumerate_copies(&c5, &w.b).unwrap();
    let mut found = std::collections::BTreeSet::new();
    let n = w.b.vertex_count();
    for v in 0..n {
        let mut stack = vec![vec![v]];
        while let Some(path) = stack.pop() {
            if path.len() == 5 {
                let last = *path.last().unwrap();
                if w.b.has_edge(last, v) {
                    let set = VertexSet::from_indices(path.iter().copied());
                    if w.b.edges_within(&set) == 5 {
                        found.insert(set);
                    }
                }
                continue;
            }
            for &u in w.b.neighbors(*path.last().unwrap()) {
                if u > v && !path.contains(&u) {
                    let mut next = path.clone();
                    next.push(u);
                    stack.push(next);
                }
            }
        }
    }
    let images: std::collections::BTreeSet<VertexSet> = copies.iter().map(|e| e.image.clone()).collect();
    assert_eq!(images, found);
}

#[test]
fn full_witness_windows_are_tree_pairs() {
    let w = build_witness();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let spec = ClassSpec::k_plus(w.alpha.clone());
    for k in 1..=4 {
        let mut win = WitnessWindow::single(&w);
        for step in 0..k {
            let host = rng.gen_range(0..win.copies.len());
            win = win
                .extend(&w, host, rng.gen_range(0..6), rng.gen_range(0..6), &format!("s{}:", step + 1))
                .unwrap();
            assert!(member(&win.graph, &spec, &mut Budget::unlimited()).unwrap().member);
        }
        let v = is_tree_pair_window(&w.a, &w.b, &win.graph, &w.alpha, &mut Budget::unlimited()).unwrap();
        assert!(v.tree_pair);
        assert_eq!(v.b_copies.len(), k + 1);
        assert_eq!(v.component_deltas, vec![int(3)]);
        assert_eq!(delta(&win.graph, &w.alpha), int(3));
        // Distances form a metric on the single component.
        let d = &v.graph.distance;
        let n = v.graph.node_count();
        for i in 0..n {
            assert_eq!(d[i][i], Some(0));
            for j in 0..n {
                assert_eq!(d[i][j], d[j][i]);
                for l in 0..n {
                    assert!(d[i][l].unwrap() <= d[i][j].unwrap() + d[j][l].unwrap());
                }
            }
        }
    }
}

#[test]
fn single_copy_window_is_a_tree_pair() {
    let w = build_witness();
    let v = is_tree_pair_window(&w.a, &w.b, &w.b, &w.alpha, &mut Budget::unlimited()).unwrap();
    assert!(v.tree_pair);
    assert_eq!(v.b_copies.len(), 1);
    assert_eq!(v.a_copies.len(), 6);
    assert_eq!(v.graph.component_count(), 1);
}

#[test]
fn two_copy_window_has_one_edge() {
    let w = build_witness();
    let win = WitnessWindow::single(&w).extend(&w, 0, 0, 0, "w1:").unwrap();
    let v = is_tree_pair_window(&w.a, &w.b, &win.graph, &w.alpha, &mut Budget::unlimited()).unwrap();
    assert_eq!(v.graph.edge_count(), 1);
    assert_eq!(v.graph.distance[0][1], Some(1));
    assert_eq!(v.a_copies.len(), 11);
}

#[test]
fn full_witness_pipeline_reproduces_y() {
    let w = build_witness();
    let plan = [(4, 0), (5, 1), (4, 2), (5, 3), (0, 5)];
    let mut win = WitnessWindow::single(&w);
    for (step, &(host_tri, new_tri)) in plan.iter().enumerate() {
        win = win.extend(&w, 0, host_tri, new_tri, &format!("r{}:", step + 1)).unwrap();
    }
    let v = is_tree_pair_window(&w.a, &w.b, &win.graph, &w.alpha, &mut Budget::unlimited()).unwrap();
    let mut copies = v.b_copies.clone();
    copies.sort_by_key(|e| e.image != win.copies[0].image);
    let images: Vec<VertexSet> = copies.iter().map(|e| e.image.clone()).collect();
    let a_images: Vec<VertexSet> = v.a_copies.iter().map(|e| e.image.clone()).collect();
    let cg = build_component_graph(&images, &a_images);
    let y = witness_matrix();
    let f = build_coloring(&y, &cg, &copies, &w.triangles, 0).unwrap();
    let full = full_coloring_matrix(&f, &copies, &w.triangles).unwrap();
    assert_eq!(full.sorted(), y.sorted());
    let verdict = decide_convex_ramsey(&full, &half()).unwrap();
    assert!(!verdict.feasible && verdict.replays(&full));

    // Relabelling the window leaves the matrix unchanged.
    let n = win.graph.vertex_count();
    let flip = |v: usize| n - 1 - v;
    let names: Vec<String> = (0..n).map(|i| format!("z:{}", win.graph.name(flip(i)))).collect();
    let edges: Vec<(usize, usize)> = win.graph.edges().map(|(a, b)| (flip(a), flip(b))).collect();
    let renamed = Graph::from_indexed(names, &edges).unwrap();
    let root2 = VertexSet::from_indices(win.copies[0].image.iter().map(|&v| flip(v)));
    let v2 = is_tree_pair_window(&w.a, &w.b, &renamed, &w.alpha, &mut Budget::unlimited()).unwrap();
    let mut copies2 = v2.b_copies.clone();
    copies2.sort_by_key(|e| e.image != root2);
    let images2: Vec<VertexSet> = copies2.iter().map(|e| e.image.clone()).collect();
    let a_images2: Vec<VertexSet> = v2.a_copies.iter().map(|e| e.image.clone()).collect();
    let cg2 = build_component_graph(&images2, &a_images2);
    let f2 = build_coloring(&y, &cg2, &copies2, &w.triangles, 0).unwrap();
    assert_eq!(full_coloring_matrix(&f2, &copies2, &w.triangles).unwrap().sorted(), full.sorted());
}

#[test]
fn neighbour_row_follows_least_index_rule() {
    let w = build_witness();
    // New copy's A_1 on the root's A_4, which the root row colours 1.
    let win = WitnessWindow::single(&w).extend(&w, 0, 3, 0, "n:").unwrap();
    let v = is_tree_pair_window(&w.a, &w.b, &win.graph, &w.alpha, &mut Budget::unlimited()).unwrap();
    let mut copies = v.b_copies.clone();
    copies.sort_by_key(|e| e.image != win.copies[0].image);
    let images: Vec<VertexSet> = copies.iter().map(|e| e.image.clone()).collect();
    let a_images: Vec<VertexSet> = v.a_copies.iter().map(|e| e.image.clone()).collect();
    let cg = build_component_graph(&images, &a_images);
    let y = witness_matrix();
    let f = build_coloring(&y, &cg, &copies, &w.triangles, 0).unwrap();
    let full = full_coloring_matrix(&f, &copies, &w.triangles).unwrap();
    // Row 1 has a 1 in the first position, so the neighbour reuses row 1.
    assert_eq!(full.rows(), &[vec![1, 1, 1, 1, 0, 0]]);
}

#[test]
fn constant_coloring_gives_constant_row() {
    let w = build_witness();
    let win = WitnessWindow::single(&w).extend(&w, 0, 1, 2, "k:").unwrap();
    let v = is_tree_pair_window(&w.a, &w.b, &win.graph, &w.alpha, &mut Budget::unlimited()).unwrap();
    let f = v.a_copies.iter().map(|e| (e.image.clone(), 1u8)).collect();
    let m = full_coloring_matrix(&f, &v.b_copies, &w.triangles).unwrap();
    assert_eq!(m.rows(), &[vec![1; 6]]);
}

#[test]
fn ordered_witness_keeps_reduct_and_counts() {
    let w = build_witness();
    let mut seq: Vec<String> = w.b.names().to_vec();
    seq.reverse();
    let ow = build_ordered_witness(&w, &seq).unwrap();
    assert_eq!(serde_json::to_string(&ow.b.reduct().to_json()).unwrap(), serde_json::to_string(&w.b.to_json()).unwrap());
    let plain = closed_embeddings(&w.a, &w.b, &w.alpha, &mut Budget::unlimited()).unwrap();
    let unordered_pattern = closed_embeddings(&w.a, &ow.b, &w.alpha, &mut Budget::unlimited()).unwrap();
    assert_eq!(plain.copies.len(), unordered_pattern.copies.len());
    let ordered = closed_embeddings(&ow.a, &ow.b, &w.alpha, &mut Budget::unlimited()).unwrap();
    assert_eq!(ordered.copies.len(), 6);
    assert!(build_ordered_witness(&w, &seq[1..]).is_err());
}

#[test]
fn engineered_double_share_is_a_two_cycle() {
    // B = two disjoint edges and an isolated vertex, A = one edge, α = 1.
    // Two copies glued along both edges share two closed edges.
    let alpha = int(1);
    let b = Graph::new(&["p", "q", "r", "s", "x"], &[("p", "q"), ("r", "s")]).unwrap();
    let a = Graph::new(&["u", "v"], &[("u", "v")]).unwrap();
    let glue = Glue::new([("p", "p"), ("q", "q"), ("r", "r"), ("s", "s")]);
    let window = free_amalgam(&b, &b, &glue, "y:").unwrap().graph;
    assert_eq!(window.vertex_count(), 6);
    let v = is_tree_pair_window(&a, &b, &window, &alpha, &mut Budget::unlimited()).unwrap();
    assert!(!v.tree_pair);
    match v.violation.unwrap() {
        TreePairViolation::SharedTwice { copies, shared } => {
            assert_eq!(copies, (0, 1));
            assert_eq!(shared.len(), 2);
            for s in &shared {
                assert!(v.graph.b_images[0].intersection(&v.graph.b_images[1]).is_subset(&v.graph.b_images[0]));
                assert!(s.is_subset(&v.graph.b_images[0]) && s.is_subset(&v.graph.b_images[1]));
            }
        }
        other => panic!("{other:?}"),
    }
    let cycle = find_cycle(&v.graph).unwrap();
    assert_eq!(cycle.len(), 2);
    assert!(cycle.replays(&v.graph));
    let y = witness_matrix();
    let row_enum = vec![VertexSet::from_indices([0, 1]); 6];
    assert!(build_coloring(&y, &v.graph, &v.b_copies, &row_enum, 0).is_err());
}

#[test]
fn edges_of_a_triangle_form_a_three_cycle() {
    // α = 2: each edge and each vertex of K3 is closed; the three edges pair
    // up through three distinct vertices.
    let alpha = int(2);
    let b = Graph::new(&["u", "v"], &[("u", "v")]).unwrap();
    let a = Graph::new(&["u"], &[]).unwrap();
    let v = is_tree_pair_window(&a, &b, &Graph::complete(3), &alpha, &mut Budget::unlimited()).unwrap();
    assert!(!v.tree_pair);
    match v.violation.unwrap() {
        TreePairViolation::Cycle(c) => {
            assert_eq!(c.len(), 3);
            assert!(c.replays(&v.graph));
        }
        other => panic!("{other:?}"),
    }
    let tree = is_tree_pair_window(&a, &b, &Graph::path(4), &alpha, &mut Budget::unlimited()).unwrap();
    assert!(tree.tree_pair);
    assert_eq!(tree.b_copies.len(), 3);
}

#[test]
fn precondition_needs_a_closed_copy() {
    let alpha = int(1);
    let a = Graph::new(&["u"], &[]).unwrap();
    let c4 = Graph::cycle(4);
    assert!(is_tree_pair_window(&a, &c4, &c4, &alpha, &mut Budget::unlimited()).is_err());
}

#[test]
fn extend_window_builds_claim_c_amalgam() {
    let w = build_witness();
    let glue = Glue::new((1..=3).map(|j| (format!("a1_{j}"), format!("a1_{j}"))));
    let ext = extend_window(&w.b, &w.triangles[0], &w.b, &glue, "m:", &w.alpha).unwrap();
    assert_eq!(ext.graph.vertex_count(), 2 * 738 - 3);
    assert_eq!(delta(&ext.graph, &w.alpha), int(3));
    let union = w.b.all_vertices();
    assert_eq!(induced(&ext.graph, &union).unwrap().edge_count(), w.b.edge_count());
}
