use super::Position;

/// Euclidean distance in meters.
pub fn distance(p1: Position, p2: Position) -> f64 {
    (p1.x - p2.x).hypot(p1.y - p2.y)
}

/// Sum of distances from `v` to every destination; zero for an empty set.
pub fn cumulative_distance(v: Position, dests: &[Position]) -> f64 {
    dests.iter().map(|&w| distance(v, w)).sum()
}

/// How much moving from `from` to `to` reduces the cumulative distance to
/// `dests`. Negative for hops that move away from the destinations.
pub fn cumulative_progress(from: Position, to: Position, dests: &[Position]) -> f64 {
    cumulative_distance(from, dests) - cumulative_distance(to, dests)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const fn p(x: f64, y: f64) -> Position {
        Position::new(x, y)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(p(0.0, 0.0), p(3.0, 4.0)), 5.0);
        assert_eq!(distance(p(1.0, 1.0), p(1.0, 1.0)), 0.0);
        assert!((distance(p(0.0, 0.0), p(1.0, 1.0)) - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn cumulative_distance_examples() {
        assert_eq!(cumulative_distance(p(0.0, 0.0), &[p(3.0, 4.0)]), 5.0);
        assert_eq!(cumulative_distance(p(0.0, 0.0), &[]), 0.0);
        assert_eq!(
            cumulative_distance(p(0.0, 0.0), &[p(3.0, 4.0), p(6.0, 8.0)]),
            15.0
        );
    }

    #[test]
    fn cumulative_progress_examples() {
        let d = [p(3.0, 4.0)];
        assert_eq!(cumulative_progress(p(0.0, 0.0), p(3.0, 4.0), &d), 5.0);
        assert_eq!(cumulative_progress(p(2.0, 2.0), p(2.0, 2.0), &d), 0.0);
        assert_eq!(cumulative_progress(p(3.0, 4.0), p(0.0, 0.0), &d), -5.0);
    }

    fn pos() -> impl Strategy<Value = Position> {
        (0.0..100.0f64, 0.0..100.0f64).prop_map(|(x, y)| p(x, y))
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(a in pos(), b in pos(), c in pos()) {
            prop_assert_eq!(distance(a, b), distance(b, a));
            prop_assert_eq!(distance(a, a), 0.0);
            prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
        }

        #[test]
        fn progress_is_antisymmetric_and_telescopes(
            a in pos(), b in pos(), c in pos(),
            dests in proptest::collection::vec(pos(), 0..6),
        ) {
            let ab = cumulative_progress(a, b, &dests);
            let ba = cumulative_progress(b, a, &dests);
            prop_assert!((ab + ba).abs() < 1e-9);
            let bc = cumulative_progress(b, c, &dests);
            let ac = cumulative_progress(a, c, &dests);
            prop_assert!((ab + bc - ac).abs() < 1e-9);
        }
    }
}
