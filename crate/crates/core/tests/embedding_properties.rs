use proptest::prelude::*;
use sigstream::embeddings::{
    axis_path, delay_path, lead_lag, linear_path, missing_lift, StreamRecord,
};
use sigstream::sig::{signature, signature_oracle, signed_area, MultiIndex, Path};

fn idx(l: &[usize]) -> MultiIndex {
    MultiIndex::new(l.to_vec()).unwrap()
}

const FIG_T: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];
const FIG_X: [f64; 5] = [1.0, 5.0, 3.0, -2.0, 7.0];

fn fig_pairs() -> Vec<(f64, f64)> {
    FIG_T.iter().copied().zip(FIG_X.iter().copied()).collect()
}

#[test]
fn axis_path_of_five_points() {
    let p = axis_path(&fig_pairs()).unwrap();
    assert_eq!(p.len(), 9);
    let s = signature(&p, 1).unwrap();
    assert_eq!(s.level(1), &[4.0, 6.0]);
}

#[test]
fn axis_constant_value_matches_segment() {
    let c = 2.5;
    let p = axis_path(&[(0.0, c), (1.0, c)]).unwrap();
    assert_eq!(p.to_points(), vec![vec![0.0, c], vec![1.0, c], vec![1.0, c]]);
    let chord = Path::new(vec![vec![0.0, c], vec![1.0, c]]).unwrap();
    assert_eq!(signature(&p, 4).unwrap(), signature(&chord, 4).unwrap());
}

#[test]
fn linear_and_axis_agree_only_on_increments() {
    let a = signature(&axis_path(&fig_pairs()).unwrap(), 2).unwrap();
    let l = signature(&linear_path(&fig_pairs()).unwrap(), 2).unwrap();
    assert_eq!(a.level(1), l.level(1));
    let area_a = signed_area(&a, 1, 2).unwrap();
    let area_l = signed_area(&l, 1, 2).unwrap();
    assert!((area_a - area_l).abs() > 1e-6);
}

#[test]
fn linear_collinear_points() {
    let three = linear_path(&[(0.0, 0.0), (0.5, 1.0), (1.0, 2.0)]).unwrap();
    let two = linear_path(&[(0.0, 0.0), (1.0, 2.0)]).unwrap();
    assert!(signature(&three, 5).unwrap().max_abs_diff(&signature(&two, 5).unwrap()) < 1e-12);
}

#[test]
fn lead_lag_area_example() {
    let p = lead_lag(&[1.0, 3.0, 2.0]).unwrap();
    let s = signature(&p, 2).unwrap();
    assert_eq!(signed_area(&s, 1, 2).unwrap(), 2.5);
}

#[test]
fn lead_lag_constant_stream() {
    let p = lead_lag(&[4.0, 4.0, 4.0]).unwrap();
    assert!(p.points().all(|pt| pt == [4.0, 4.0]));
    let s = signature(&p, 2).unwrap();
    assert_eq!(signed_area(&s, 1, 2).unwrap(), 0.0);
}

#[test]
fn delay_path_of_reference_sequence() {
    let p = delay_path(&[4.0, 2.0, 5.0, 0.0, 5.0, 0.0]).unwrap();
    assert_eq!(p.len(), 11);
    let s = signature(&p, 1).unwrap();
    assert_eq!(s.level(1), &[5.0, -4.0, -4.0]);
}

#[test]
fn delay_path_time_follows_lead() {
    let p = delay_path(&[1.0, 3.0, 2.0]).unwrap();
    let t: Vec<f64> = p.points().map(|pt| pt[0]).collect();
    assert_eq!(t, vec![1.0, 2.0, 2.0, 3.0, 3.0]);
}

#[test]
fn delay_path_constant() {
    let s = signature(&delay_path(&[3.0, 3.0]).unwrap(), 2).unwrap();
    assert_eq!(s.get(&idx(&[2])), Some(0.0));
    assert_eq!(s.get(&idx(&[3])), Some(0.0));
}

#[test]
fn missing_lift_golden() {
    let stream = [
        Some(1.0),
        Some(3.0),
        None,
        Some(5.0),
        Some(3.0),
        None,
        None,
        Some(9.0),
        Some(3.0),
        Some(5.0),
    ];
    let record = StreamRecord::with_gaps("golden", &stream, None);
    let expected = vec![
        vec![0.0, 1.0, 0.0],
        vec![1.0, 3.0, 0.0],
        vec![2.0, 3.0, 1.0],
        vec![3.0, 5.0, 0.0],
        vec![4.0, 3.0, 0.0],
        vec![5.0, 3.0, 1.0],
        vec![6.0, 3.0, 1.0],
        vec![7.0, 9.0, 0.0],
        vec![8.0, 3.0, 0.0],
        vec![9.0, 5.0, 0.0],
    ];
    assert_eq!(missing_lift(&record).unwrap().to_points(), expected);
}

proptest! {
    #[test]
    fn lead_lag_area_is_half_quadratic_variation(values in prop::collection::vec(-10.0f64..10.0, 2..40)) {
        let p = lead_lag(&values).unwrap();
        let qv: f64 = values.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
        let s = signature(&p, 2).unwrap();
        let area = signed_area(&s, 1, 2).unwrap();
        prop_assert!((area - 0.5 * qv).abs() <= 1e-10 * qv.max(1.0));
        let oracle = 0.5 * (signature_oracle(&p, &idx(&[1, 2])).unwrap() - signature_oracle(&p, &idx(&[2, 1])).unwrap());
        prop_assert!((oracle - 0.5 * qv).abs() <= 1e-10 * qv.max(1.0));
    }

    #[test]
    fn lead_lag_visits_stream(values in prop::collection::vec(-10.0f64..10.0, 2..20)) {
        let p = lead_lag(&values).unwrap();
        prop_assert_eq!(p.len(), 2 * values.len() - 1);
        for (n, x) in values.iter().enumerate() {
            prop_assert_eq!(p.point(2 * n), &[*x, *x][..]);
        }
        // counting points from 1, every even point's lag equals the lead two points back
        for q in (3..p.len()).step_by(2) {
            prop_assert_eq!(p.point(q)[1], p.point(q - 2)[0]);
        }
        let lags: Vec<f64> = p.points().step_by(2).map(|pt| pt[1]).collect();
        prop_assert_eq!(lags, values);
    }

    #[test]
    fn embeddings_preserve_endpoints(values in prop::collection::vec(-10.0f64..10.0, 2..20)) {
        let pairs: Vec<(f64, f64)> = values.iter().enumerate().map(|(i, v)| (i as f64, *v)).collect();
        for p in [axis_path(&pairs).unwrap(), linear_path(&pairs).unwrap()] {
            prop_assert_eq!(p.point(0), &[pairs[0].0, pairs[0].1][..]);
            let last = pairs[pairs.len() - 1];
            prop_assert_eq!(p.point(p.len() - 1), &[last.0, last.1][..]);
            let s = signature(&p, 1).unwrap();
            prop_assert!((s.level(1)[0] - last.0).abs() < 1e-12);
            prop_assert!((s.level(1)[1] - (last.1 - pairs[0].1)).abs() < 1e-12);
        }
    }

    #[test]
    fn complete_stream_lift_is_time_augmented(values in prop::collection::vec(-10.0f64..10.0, 2..20)) {
        let r = StreamRecord::complete("c", values.clone(), None);
        let p = missing_lift(&r).unwrap();
        for (i, (pt, v)) in p.points().zip(&values).enumerate() {
            prop_assert_eq!(pt, &[i as f64, *v, 0.0][..]);
        }
    }
}
