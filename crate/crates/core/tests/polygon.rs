use proptest::prelude::*;
use segal_lab::polygon::*;
use segal_lab::Error;

#[test]
fn catalan_and_schroeder_counts() {
    let t: Vec<usize> = (2..=8)
        .map(|n| enumerate_triangulations(n).unwrap().len())
        .collect();
    assert_eq!(t, vec![1, 2, 5, 14, 42, 132, 429]);
    let s: Vec<usize> = (2..=6)
        .map(|n| enumerate_subdivisions(n).unwrap().len())
        .collect();
    assert_eq!(s, vec![1, 3, 11, 45, 197]);
}

#[test]
fn one_left_and_one_right_triangulation() {
    for n in 3..=7 {
        let ts = enumerate_triangulations(n).unwrap();
        let count = |c| ts.iter().filter(|t| t.classify() == c).count();
        assert_eq!(count(Classification::Left), 1, "n = {n}");
        assert_eq!(count(Classification::Right), 1, "n = {n}");
        assert_eq!(count(Classification::Both), 0);
    }
    let ts = enumerate_triangulations(4).unwrap();
    let labels: Vec<Classification> = ts.iter().map(|t| t.classify()).collect();
    assert_eq!(labels[0], Classification::Left);
    assert_eq!(labels[4], Classification::Right);
    assert_eq!(PolygonalSubdivision::fan(4, 0).unwrap(), ts[0]);
    assert_eq!(PolygonalSubdivision::fan(4, 4).unwrap(), ts[4]);
}

#[test]
fn malformed_input_is_rejected() {
    assert!(matches!(
        enumerate_triangulations(1),
        Err(Error::LevelTooSmall(1))
    ));
    assert!(PolygonalSubdivision::new(4, vec![vec![0, 1, 2], vec![0, 2, 3]]).is_err());
    assert!(PolygonalSubdivision::from_diagonals(4, &[(0, 2), (1, 3)]).is_err());
    assert!(PolygonalSubdivision::from_diagonals(4, &[(0, 1)]).is_err());
    let trivial = PolygonalSubdivision::trivial(4).unwrap();
    assert!(matches!(
        find_consecutive_triangle(&trivial),
        Err(Error::NotATriangulation(_))
    ));
    let t = &enumerate_triangulations(4).unwrap()[0];
    assert!(matches!(
        vertex_valency(t, 9),
        Err(Error::VertexOutOfRange { vertex: 9, n: 4 })
    ));
}

#[test]
fn ears_wrap_around() {
    assert_eq!(cyclic_ear(4, 0), vec![0, 1, 4]);
    assert_eq!(cyclic_ear(4, 4), vec![0, 3, 4]);
    assert_eq!(cyclic_ear(4, 2), vec![1, 2, 3]);
}

fn triangulation() -> impl Strategy<Value = PolygonalSubdivision> {
    (3usize..=8).prop_flat_map(|n| {
        let ts = enumerate_triangulations(n).unwrap();
        (0..ts.len()).prop_map(move |i| ts[i].clone())
    })
}

fn subdivision() -> impl Strategy<Value = PolygonalSubdivision> {
    (2usize..=6).prop_flat_map(|n| {
        let ss = enumerate_subdivisions(n).unwrap();
        (0..ss.len()).prop_map(move |i| ss[i].clone())
    })
}

proptest! {
    #[test]
    fn triangulation_shape(t in triangulation()) {
        let n = t.n();
        prop_assert!(t.is_triangulation());
        prop_assert_eq!(t.members().len(), n - 1);
        prop_assert_eq!(t.diagonals().len(), n - 2);
        prop_assert_eq!(t.adjacencies().len(), n - 2);
        let total: usize = (0..=n).map(|v| vertex_valency(&t, v).unwrap()).sum();
        prop_assert_eq!(total, 2 * (n + 1) + 2 * (n - 2));
        let j = find_consecutive_triangle(&t).unwrap();
        prop_assert!(t.members().contains(&vec![j - 1, j, j + 1]));
    }

    #[test]
    fn diagonals_round_trip(s in subdivision()) {
        let back = PolygonalSubdivision::from_diagonals(s.n(), &s.diagonals()).unwrap();
        prop_assert_eq!(&back, &s);
        let again = PolygonalSubdivision::new(s.n(), s.members().to_vec()).unwrap();
        prop_assert_eq!(&again, &s);
        for w in s.diagonals().windows(2) {
            prop_assert!(!chords_cross(w[0], w[1]));
        }
    }

    #[test]
    fn classification_matches_fans(t in triangulation()) {
        let n = t.n();
        let left = t == PolygonalSubdivision::fan(n, 0).unwrap();
        let right = t == PolygonalSubdivision::fan(n, n).unwrap();
        let c = classify_subdivision(&t);
        prop_assert_eq!(c == Classification::Left, left);
        prop_assert_eq!(c == Classification::Right, right);
    }
}
