use proptest::prelude::*;
use sigstream::sig::{
    chen_product, shuffle, signature, signature_oracle, signature_oracle_full, signed_area,
    term_count, MultiIndex, Path, TruncatedSignature,
};

fn arb_path(max_dim: usize, max_points: usize) -> impl Strategy<Value = Path> {
    (1..=max_dim, 2..=max_points).prop_flat_map(|(d, n)| {
        prop::collection::vec(-2.0f64..2.0, d * n)
            .prop_map(move |coords| Path::from_flat(d, coords).unwrap())
    })
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_oracle(path in arb_path(4, 20), depth in 1usize..=4) {
        let fast = signature(&path, depth).unwrap();
        let slow = signature_oracle_full(&path, depth).unwrap();
        prop_assert!(fast.max_abs_diff(&slow) <= 1e-9);
    }

    #[test]
    fn chen_at_every_split(path in arb_path(3, 12), depth in 1usize..=4) {
        let whole = signature(&path, depth).unwrap();
        for at in 1..path.len() - 1 {
            let (l, r) = path.split_at(at).unwrap();
            let joined = chen_product(&signature(&l, depth).unwrap(), &signature(&r, depth).unwrap()).unwrap();
            prop_assert!(whole.max_abs_diff(&joined) <= 1e-10);
        }
    }

    #[test]
    fn reparametrization(path in arb_path(3, 10), seg in 0usize..9, t in 0.0f64..1.0, depth in 1usize..=5) {
        let seg = seg % (path.len() - 1);
        let refined = path.subdivided(seg, t).unwrap();
        let a = signature(&path, depth).unwrap();
        let b = signature(&refined, depth).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-12, "diff {}", a.max_abs_diff(&b));
    }

    #[test]
    fn tree_like_cancels(path in arb_path(4, 10), depth in 1usize..=4) {
        let there_and_back = path.concat(&path.reversed()).unwrap();
        let s = signature(&there_and_back, depth).unwrap();
        let e = TruncatedSignature::identity(path.dimension(), depth).unwrap();
        prop_assert!(s.max_abs_diff(&e) <= 1e-10);
        let product = chen_product(&signature(&path, depth).unwrap(), &signature(&path.reversed(), depth).unwrap()).unwrap();
        prop_assert!(product.max_abs_diff(&e) <= 1e-10);
    }

    #[test]
    fn level_one_is_increment(path in arb_path(4, 15)) {
        let s = signature(&path, 1).unwrap();
        let first = path.point(0);
        let last = path.point(path.len() - 1);
        for (c, (a, b)) in s.level(1).iter().zip(first.iter().zip(last)) {
            // summing increments in order reproduces the fold's arithmetic
            prop_assert!((c - (b - a)).abs() <= 1e-12);
        }
    }

    #[test]
    fn scaling(path in arb_path(3, 8), lambda in -3.0f64..3.0, depth in 1usize..=4) {
        let s = signature(&path, depth).unwrap();
        let scaled = signature(&path.scaled(lambda).unwrap(), depth).unwrap();
        for k in 1..=depth {
            let f = lambda.powi(k as i32);
            for (a, b) in s.level(k).iter().zip(scaled.level(k)) {
                prop_assert!(rel_close(a * f, *b, 1e-10));
            }
        }
    }

    #[test]
    fn shuffle_identity(path in arb_path(3, 8)) {
        let depth = 4;
        let s = signature(&path, depth).unwrap();
        let d = path.dimension();
        for left in MultiIndex::graded(d, depth - 1) {
            for right in MultiIndex::graded(d, depth - left.len()) {
                let lhs = s.get(&left).unwrap() * s.get(&right).unwrap();
                let rhs: f64 = shuffle(&left, &right)
                    .terms()
                    .iter()
                    .map(|(w, m)| *m as f64 * s.get(w).unwrap())
                    .sum();
                prop_assert!(rel_close(lhs, rhs, 1e-9), "{left} ⧢ {right}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn coefficient_count(path in arb_path(4, 5), depth in 1usize..=5) {
        let s = signature(&path, depth).unwrap();
        prop_assert_eq!(s.features().len(), term_count(path.dimension(), depth));
        prop_assert_eq!(s.coefficients()[0], 1.0);
    }
}

#[test]
fn oracle_single_letter_is_increment() {
    let p = Path::new(vec![vec![1.0, 5.0, 0.0], vec![2.0, -1.0, 4.0], vec![0.0, 0.0, 1.0]]).unwrap();
    for k in 1..=3 {
        let v = signature_oracle(&p, &MultiIndex::new(vec![k]).unwrap()).unwrap();
        assert_eq!(v, p.point(2)[k - 1] - p.point(0)[k - 1]);
    }
}

#[test]
fn square_loop_area_is_one() {
    let p = Path::new(vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![1.0, 1.0],
        vec![0.0, 1.0],
        vec![0.0, 0.0],
    ])
    .unwrap();
    let s = signature(&p, 2).unwrap();
    assert_eq!(signed_area(&s, 1, 2).unwrap(), 1.0);
    let via_oracle = 0.5
        * (signature_oracle(&p, &MultiIndex::new(vec![1, 2]).unwrap()).unwrap()
            - signature_oracle(&p, &MultiIndex::new(vec![2, 1]).unwrap()).unwrap());
    assert_eq!(via_oracle, 1.0);
}
