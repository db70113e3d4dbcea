mod common;

use pcmtree::{parse_matrix, PcMatrix};
use proptest::prelude::*;

fn with_holes(m: &PcMatrix, holes: &[bool]) -> PcMatrix {
    let n = m.n();
    let mut k = 0;
    PcMatrix::from_upper(n, |i, j| {
        let hole = holes[k % holes.len()];
        k += 1;
        if hole {
            None
        } else {
            m.get(i, j)
        }
    })
    .unwrap()
}

proptest! {
    #[test]
    fn writer_round_trips(m in common::complete(1..=7), holes in prop::collection::vec(any::<bool>(), 1..30)) {
        let m = with_holes(&m, &holes);
        let text = m.to_pcm_string();
        let back = parse_matrix(&text).unwrap();
        prop_assert_eq!(back.to_pcm_string(), text);
        for i in 0..m.n() {
            for j in 0..m.n() {
                match (m.get(i, j), back.get(i, j)) {
                    (Some(a), Some(b)) => prop_assert!((a / b - 1.0).abs() <= 5e-6),
                    (None, None) => {}
                    other => prop_assert!(false, "{other:?}"),
                }
            }
        }
    }

    #[test]
    fn parsed_entries_are_reciprocal(m in common::complete(2..=7)) {
        let back = parse_matrix(&m.to_pcm_string()).unwrap();
        for i in 0..m.n() {
            for j in 0..m.n() {
                let p = back.get(i, j).unwrap() * back.get(j, i).unwrap();
                prop_assert!((p - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn decimal_input_is_reciprocal_to_rounding(x in 0.01f64..100.0) {
        let text = format!("1 {x}\n{} 1", 1.0 / x);
        let m = parse_matrix(&text).unwrap();
        prop_assert!((m.get(0, 1).unwrap() * m.get(1, 0).unwrap() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn fractions_are_exact_reciprocals() {
    let m = parse_matrix(common::EX1).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let p = m.get(i, j).unwrap() * m.get(j, i).unwrap();
            assert!((p - 1.0).abs() <= f64::EPSILON);
        }
    }
}
