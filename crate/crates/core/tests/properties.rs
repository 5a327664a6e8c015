//! Randomized checks of the algebraic contracts behind the library: the
//! closed-form ΔJ equals the brute-force swap cost, assignment is
//! equivariant under center reordering, J is summation-order robust, and the
//! centroid is the per-cluster minimizer of J.

use proptest::prelude::*;

use qmts_core::dataset::{normalize, NormalizeMode};
use qmts_core::qmts::delta_j;
use qmts_core::{assign, centroids, icss, Assignment, CenterSet, Dataset};

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Total squared distance from the listed rows to one center.
fn cost_to_center(ds: &Dataset, members: &[usize], center: &[f64]) -> f64 {
    members.iter().map(|&r| sq_dist(ds.row(r), center)).sum()
}

fn arb_dataset(max_n: usize, max_d: usize) -> impl Strategy<Value = Dataset> {
    (2..=max_n, 1..=max_d).prop_flat_map(|(n, d)| {
        proptest::collection::vec(-100.0..100.0f64, n * d)
            .prop_map(move |v| Dataset::new("prop", n, d, v).unwrap())
    })
}

/// Dataset plus a member subset and two arbitrary d-vectors (current center,
/// swap candidate).
fn arb_swap_instance() -> impl Strategy<Value = (Dataset, Vec<usize>, Vec<f64>, Vec<f64>)> {
    arb_dataset(50, 5).prop_flat_map(|ds| {
        let (n, d) = (ds.len(), ds.dim());
        (
            Just(ds),
            proptest::collection::btree_set(0..n, 0..=n).prop_map(|s| s.into_iter().collect()),
            proptest::collection::vec(-100.0..100.0f64, d),
            proptest::collection::vec(-100.0..100.0f64, d),
        )
    })
}

proptest! {
    #[test]
    fn delta_j_equals_brute_force_swap_cost((ds, members, mu, cand) in arb_swap_instance()) {
        let got = delta_j(&ds, &members, &mu, &cand).unwrap();
        let want = cost_to_center(&ds, &members, &cand) - cost_to_center(&ds, &members, &mu);
        let tol = 1e-9 * got.abs().max(want.abs()).max(1.0);
        prop_assert!((got - want).abs() <= tol, "delta_j {got} vs oracle {want}");
    }

    #[test]
    fn reversing_centers_reverses_labels(
        ds in arb_dataset(30, 4),
        k in 2usize..5,
        center_values in proptest::collection::vec(-100.0..100.0f64, 20),
    ) {
        let d = ds.dim();
        prop_assume!(center_values.len() >= k * d);
        let values = center_values[..k * d].to_vec();
        let m = CenterSet::free(k, d, values.clone()).unwrap();
        let reversed: Vec<f64> = values.chunks(d).rev().flatten().copied().collect();
        let m_rev = CenterSet::free(k, d, reversed).unwrap();

        // ties between equidistant centers resolve by index and are not
        // equivariant, so only tie-free instances are checked
        for x in ds.rows() {
            let dists: Vec<f64> = (0..k).map(|c| sq_dist(x, m.center(c))).collect();
            let min = dists.iter().cloned().fold(f64::INFINITY, f64::min);
            prop_assume!(dists.iter().filter(|&&v| v == min).count() == 1);
        }

        let a = assign(&ds, &m).unwrap();
        let b = assign(&ds, &m_rev).unwrap();
        for (x, y) in a.labels().iter().zip(b.labels()) {
            prop_assert_eq!(*x, k - 1 - *y);
        }
    }

    #[test]
    fn icss_is_summation_order_robust(
        ds in arb_dataset(40, 4),
        k in 1usize..5,
        label_seed in proptest::collection::vec(0usize..1000, 40),
    ) {
        let labels: Vec<usize> = (0..ds.len()).map(|i| label_seed[i % label_seed.len()] % k).collect();
        let a = Assignment::new(labels, k).unwrap();
        let fallback = CenterSet::free(k, ds.dim(), vec![0.0; k * ds.dim()]).unwrap();
        let m = centroids(&ds, &a, &fallback);

        let point_order = icss(&ds, &m, &a).unwrap();
        let cluster_order: f64 = (0..k)
            .map(|c| {
                let members: Vec<usize> = a.members(c).collect();
                cost_to_center(&ds, &members, m.center(c))
            })
            .sum();
        let tol = 1e-9 * point_order.abs().max(1.0);
        prop_assert!((point_order - cluster_order).abs() <= tol);
    }

    #[test]
    fn centroids_minimize_j_for_fixed_assignment(
        ds in arb_dataset(30, 4),
        k in 1usize..5,
        label_seed in proptest::collection::vec(0usize..1000, 30),
        center_values in proptest::collection::vec(-100.0..100.0f64, 20),
    ) {
        let d = ds.dim();
        prop_assume!(center_values.len() >= k * d);
        let labels: Vec<usize> = (0..ds.len()).map(|i| label_seed[i % label_seed.len()] % k).collect();
        let a = Assignment::new(labels, k).unwrap();
        let m_random = CenterSet::free(k, d, center_values[..k * d].to_vec()).unwrap();
        let m_opt = centroids(&ds, &a, &m_random);

        let j_opt = icss(&ds, &m_opt, &a).unwrap();
        let j_random = icss(&ds, &m_random, &a).unwrap();
        prop_assert!(j_opt <= j_random + 1e-9 * j_random.abs().max(1.0));
    }

    #[test]
    fn normalization_is_idempotent(
        ds in arb_dataset(30, 4),
        mode in prop_oneof![Just(NormalizeMode::ZScore), Just(NormalizeMode::MinMax)],
    ) {
        let (once, _) = normalize(&ds, mode);
        let (twice, _) = normalize(&once, mode);
        for (a, b) in once.values().iter().zip(twice.values()) {
            prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn normalization_round_trips(ds in arb_dataset(30, 4), ) {
        let (out, spec) = normalize(&ds, NormalizeMode::ZScore);
        for i in 0..ds.len() {
            for j in 0..ds.dim() {
                let restored = out.row(i)[j] * spec.scales[j] + spec.offsets[j];
                let tol = 1e-9 * ds.row(i)[j].abs().max(1.0);
                prop_assert!((restored - ds.row(i)[j]).abs() <= tol);
            }
        }
    }
}
