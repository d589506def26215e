use super::*;
use crate::graph::find_cycle;
use crate::rng;
use proptest::prelude::*;
use rand::Rng;

fn table(lists: Vec<Vec<(Vec<usize>, f64)>>) -> ScoreTable {
    ScoreTable::new(lists.into_iter().map(|l| l.into_iter().map(|(parents, score)| Candidate { parents, score }).collect()).collect())
        .unwrap()
}

fn mutual() -> ScoreTable {
    table(vec![vec![(vec![], -10.0), (vec![1], -5.0)], vec![(vec![], -10.0), (vec![0], -5.0)]])
}

/// Every choice vector, best value first, smallest vector on ties, subject to
/// `keep`.
fn brute_force(t: &ScoreTable, keep: impl Fn(&[usize]) -> bool) -> (f64, Vec<usize>) {
    let n = t.n();
    let mut idx = vec![0usize; n];
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        if keep(&idx) {
            let v = objective_of(t, &idx);
            if best.as_ref().is_none_or(|(bv, bc)| v > *bv || (v == *bv && idx < *bc)) {
                best = Some((v, idx.clone()));
            }
        }
        let Some(pos) = (0..n).rev().find(|&i| idx[i] + 1 < t.candidates(i).len()) else {
            break;
        };
        idx[pos] += 1;
        idx[pos + 1..].iter_mut().for_each(|x| *x = 0);
    }
    best.unwrap()
}

fn acyclic(t: &ScoreTable, choice: &[usize]) -> bool {
    let a = Assignment { choice: choice.to_vec(), objective: 0.0 };
    find_cycle(&Digraph::from_parents(&a.parents(t)).unwrap()).is_none()
}

fn random_table(seed: u64, n: usize, integer_scores: bool) -> ScoreTable {
    let mut r = rng::seeded(seed);
    let lists = (0..n)
        .map(|v| {
            let others: Vec<usize> = (0..n).filter(|&u| u != v).collect();
            let mut list = vec![(vec![], if integer_scores { -20.0 } else { -20.0 + r.random::<f64>() })];
            for mask in 1u32..(1 << others.len()) {
                if r.random_bool(0.45) {
                    let ps: Vec<usize> = (0..others.len()).filter(|b| mask >> b & 1 == 1).map(|b| others[b]).collect();
                    let s = if integer_scores { -(r.random_range(5..25) as f64) } else { -30.0 * r.random::<f64>() };
                    list.push((ps, s));
                }
            }
            list
        })
        .collect();
    table(lists)
}

#[test]
fn single_node_takes_empty_set() {
    let t = table(vec![vec![(vec![], -3.0)]]);
    let a = solve_ip(&t, &CutPool::new()).unwrap();
    assert_eq!(a.choice, vec![0]);
    assert_eq!(a.objective, -3.0);
}

#[test]
fn mutual_preference_needs_one_cut() {
    let t = mutual();
    let a = solve_ip(&t, &CutPool::new()).unwrap();
    assert_eq!(a.choice, vec![1, 1]);
    assert_eq!(a.objective, -10.0);
    let mut cuts = CutPool::new();
    cuts.add(&[1, 0]).unwrap();
    assert!(!cuts.add(&[0, 1]).unwrap());
    let a = solve_ip(&t, &cuts).unwrap();
    assert_eq!(a.objective, -15.0);
    assert_eq!(a.choice, vec![0, 1]);
    let s = solve_to_acyclic(&t).unwrap();
    assert_eq!(s.rounds, 2);
    assert_eq!(s.cuts.len(), 1);
    assert_eq!(s.assignment.objective, -15.0);
    assert!(s.dag.is_dag());
}

#[test]
fn table_validation() {
    assert!(ScoreTable::new(vec![vec![Candidate { parents: vec![1], score: 0.0 }], vec![]]).is_err());
    assert!(ScoreTable::new(vec![vec![Candidate { parents: vec![0], score: 0.0 }]]).is_err());
    let t = table(vec![vec![(vec![1], -1.0), (vec![], -2.0)], vec![(vec![], 0.0)]]);
    assert!(t.candidates(0)[0].parents.is_empty());
    assert!(CutPool::new().add(&[3]).is_err());
    assert!(t.dump(&CutPool::new(), None).contains("score 0 {1} -1.0000000000"));
}

#[test]
fn candidates_follow_neighbourhoods() {
    let ds = CategoricalDataset::from_rows(&[vec![0, 1, 0, 1], vec![1, 0, 1, 1], vec![0, 0, 1, 0]]).unwrap();
    let ug = PartiallyDirectedGraph::from_undirected(4, &[(0, 1), (0, 3)]).unwrap();
    let t = build_score_table(&ds, &ug, &TableOptions::default()).unwrap();
    let sets = |v: usize| t.candidates(v).iter().map(|c| c.parents.clone()).collect::<Vec<_>>();
    assert_eq!(sets(1), vec![vec![], vec![0]]);
    assert_eq!(sets(0), vec![vec![], vec![1], vec![3], vec![1, 3]]);
    assert_eq!(sets(2), vec![Vec::<usize>::new()]);
    let capped = build_score_table(&ds, &ug, &TableOptions { max_set_size: Some(1), budget: 1 }).unwrap();
    assert_eq!(capped.candidates(0).len(), 3);
    match build_score_table(&ds, &ug, &TableOptions { max_set_size: None, budget: 3 }) {
        Err(Error::Resource(msg)) => assert!(msg.contains("`X0`"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn subset_enumeration_order() {
    assert_eq!(subsets_by_size(&[2, 5, 7], 2), vec![vec![], vec![2], vec![5], vec![7], vec![2, 5], vec![2, 7], vec![5, 7]]);
    assert_eq!(subset_count(3, 2), 7);
    assert_eq!(subset_count(20, 20), 1 << 20);
}

#[test]
fn ip_matches_brute_force_with_ties() {
    for seed in 0..300 {
        let n = 2 + (seed as usize % 4);
        let t = random_table(seed, n, true);
        let mut r = rng::seeded(seed ^ 0xabc);
        let mut cuts = CutPool::new();
        for _ in 0..r.random_range(0..5) {
            let c: Vec<usize> = (0..n).filter(|_| r.random_bool(0.6)).collect();
            if c.len() >= 2 {
                cuts.add(&c).unwrap();
            }
        }
        let a = solve_ip(&t, &cuts).unwrap();
        let (v, choice) = brute_force(&t, |ch| {
            let a = Assignment { choice: ch.to_vec(), objective: 0.0 };
            cuts.iter().all(|c| a.satisfies(&t, c))
        });
        assert_eq!(a.objective, v, "seed {seed}");
        assert_eq!(a.choice, choice, "seed {seed}");
    }
}

#[test]
fn acyclic_solutions_are_optimal_and_cuts_sound() {
    for seed in 0..300 {
        let n = 2 + (seed as usize % 4);
        let t = random_table(1000 + seed, n, seed % 2 == 0);
        let s = solve_to_acyclic(&t).unwrap();
        assert!(s.dag.is_dag());
        let (v, choice) = brute_force(&t, |ch| acyclic(&t, ch));
        assert_eq!(s.assignment.objective, v, "seed {seed}");
        assert_eq!(s.assignment.choice, choice, "seed {seed}");
        let best = Assignment { choice, objective: v };
        assert!(s.cuts.iter().all(|c| best.satisfies(&t, c)));
        assert_eq!(solve_to_acyclic(&t).unwrap().assignment, s.assignment);
    }
}

#[test]
fn three_variable_datasets_match_all_dags() {
    use crate::graph::all_dags;
    use crate::stats::total_bic;
    let dags = all_dags(3);
    assert_eq!(dags.len(), 25);
    for seed in 0..20 {
        let mut r = rng::seeded(seed);
        let rows: Vec<Vec<u32>> = (0..300)
            .map(|_| {
                let a = r.random_range(0..2u32);
                let b = if r.random_bool(0.8) { a } else { r.random_range(0..2) };
                let c = if r.random_bool(0.7) { a ^ b } else { r.random_range(0..2) };
                vec![a, b, c]
            })
            .collect();
        let ds = CategoricalDataset::from_rows(&rows).unwrap();
        let t = build_score_table(&ds, &PartiallyDirectedGraph::complete(3), &TableOptions::default()).unwrap();
        let s = solve_to_acyclic(&t).unwrap();
        let oracle = dags.iter().map(|d| total_bic(&ds, d).unwrap()).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(s.assignment.objective, oracle, "seed {seed}");
        assert_eq!(total_bic(&ds, &s.dag).unwrap(), oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn objective_never_rises_with_more_cuts(seed in any::<u64>(), n in 2usize..6) {
        let t = random_table(seed, n, false);
        let mut r = rng::seeded(seed);
        let mut cuts = CutPool::new();
        let mut last = solve_ip(&t, &cuts).unwrap().objective;
        for _ in 0..6 {
            let c: Vec<usize> = (0..n).filter(|_| r.random_bool(0.5)).collect();
            if c.len() < 2 {
                continue;
            }
            cuts.add(&c).unwrap();
            let next = solve_ip(&t, &cuts).unwrap().objective;
            prop_assert!(next <= last + 1e-9);
            last = next;
        }
    }
}
