use penergy::families::{
    divisor_eigencheck, double_star_cells, path_positive_energy, verify_equitable,
};
use penergy::spectra::positive_energy;
use penergy::{closed_spectrum, eigenvalues, gap_f, gap_threshold, make_family, Edge, FamilyKind};

fn positive_energy_of(kind: FamilyKind, n: usize, p: f64) -> f64 {
    let g = make_family(kind, &[n, n]).unwrap();
    positive_energy(&eigenvalues(&g).unwrap(), p).unwrap()
}

#[test]
fn closed_forms_match_eigensolves() {
    for n in 3..=60 {
        for kind in [FamilyKind::DoubleStarComplement, FamilyKind::DoubleStarComplementPlus] {
            let closed = closed_spectrum(kind, n).unwrap();
            let numeric = eigenvalues(&make_family(kind, &[n, n]).unwrap()).unwrap();
            assert_eq!(closed.order, 2 * n);
            for (a, b) in closed.numeric.iter().zip(numeric.values()) {
                assert!((a - b).abs() <= 1e-8, "{kind} n = {n}: {a} vs {b}");
            }
            assert_eq!(numeric.multiplicity(-1.0), 2 * n - 4, "{kind} n = {n}");
        }
    }
    for n in 1..=30 {
        for kind in [FamilyKind::Path, FamilyKind::Star, FamilyKind::Complete] {
            let closed = closed_spectrum(kind, n).unwrap();
            let numeric = eigenvalues(&make_family(kind, &[n]).unwrap()).unwrap();
            for (a, b) in closed.numeric.iter().zip(numeric.values()) {
                assert!((a - b).abs() <= 1e-9, "{kind} n = {n}");
            }
        }
    }
}

#[test]
fn divisor_matrices_of_double_star_complements() {
    for n in 3..=25 {
        let g = make_family(FamilyKind::DoubleStarComplement, &[n, n]).unwrap();
        let part = verify_equitable(&g, &double_star_cells(n, n)).unwrap();
        let m = n - 1;
        assert_eq!(
            part.b,
            vec![
                vec![0, 0, 0, m],
                vec![0, 0, m, 0],
                vec![0, 1, m - 1, m],
                vec![1, 0, m, m - 1]
            ]
        );
        assert!(divisor_eigencheck(&g, &part).unwrap());
    }
    let g = make_family(FamilyKind::DoubleStarComplement, &[5, 4]).unwrap();
    let part = verify_equitable(&g, &double_star_cells(5, 4)).unwrap();
    assert!(divisor_eigencheck(&g, &part).unwrap());
}

#[test]
fn gap_matches_eigensolves() {
    for n in 3..=60 {
        for p in [1.0, 1.5, 2.0, 2.5, 2.9] {
            let numeric = positive_energy_of(FamilyKind::DoubleStarComplement, n, p)
                - positive_energy_of(FamilyKind::DoubleStarComplementPlus, n, p);
            let r = gap_f(n, p).unwrap();
            let scale = (2.0 * n as f64).powf(p);
            assert!((r.f - numeric).abs() <= 1e-7 * scale, "n = {n}, p = {p}");
            assert!((r.f - r.naive_f()).abs() <= 1e-12 * scale, "n = {n}, p = {p}");
        }
    }
}

#[test]
fn gap_reference_values() {
    // 60-digit evaluations of the radical expressions
    let square = [
        (3, -0.486914436827),
        (4, -0.131767696849),
        (5, 0.156349306236),
        (6, 0.405288402566),
        (10, 1.19454794207),
        (100, 8.18605510713),
    ];
    for (n, want) in square {
        let got = gap_f(n, 2.0).unwrap().f;
        assert!((got - want).abs() <= 1e-10 * (1.0 + want.abs()), "n = {n}: {got}");
    }
    for (n, want) in [(3, 0.147339250436), (4, 0.112106095312), (5, 0.0926816869581)] {
        assert!((gap_f(n, 1.0).unwrap().f - want).abs() <= 1e-11);
    }
}

#[test]
fn thresholds_for_moderate_exponents() {
    assert_eq!(gap_threshold(2.0, 100).unwrap().n0, Some(5));
    assert_eq!(gap_threshold(1.0, 100).unwrap().n0, Some(3));
    assert_eq!(gap_threshold(1.5, 400).unwrap().n0, Some(3));
    let t = gap_threshold(2.5, 400).unwrap();
    assert_eq!(t.n0, Some(15));
    assert!(t.trace.iter().filter(|s| s.0 < 15).all(|s| s.1 < 0));
}

#[test]
fn edge_addition_lowers_positive_square_energy() {
    let g = make_family(FamilyKind::DoubleStarComplement, &[5, 5]).unwrap();
    let plus = g.add_edge(Edge::new(0, 1).unwrap()).unwrap();
    assert_eq!(plus, make_family(FamilyKind::DoubleStarComplementPlus, &[5, 5]).unwrap());
    let before = positive_energy(&eigenvalues(&g).unwrap(), 2.0).unwrap();
    let after = positive_energy(&eigenvalues(&plus).unwrap(), 2.0).unwrap();
    assert!(after < before);
    assert!((before - after - 0.156347).abs() < 1e-5);

    // odd order: complement of S_{5,4}
    let g = make_family(FamilyKind::DoubleStarComplement, &[5, 4]).unwrap();
    let plus = g.add_edge(Edge::new(0, 1).unwrap()).unwrap();
    let gap = positive_energy(&eigenvalues(&g).unwrap(), 2.0).unwrap()
        - positive_energy(&eigenvalues(&plus).unwrap(), 2.0).unwrap();
    assert!((gap - 0.005121355047755).abs() < 1e-10, "{gap}");
}

#[test]
fn path_energy_formula() {
    for n in 1..=40 {
        let s = eigenvalues(&make_family(FamilyKind::Path, &[n]).unwrap()).unwrap();
        for p in [1.0, 1.5, 2.0, 2.5, 3.0, 4.0] {
            let numeric = positive_energy(&s, p).unwrap();
            assert!((numeric - path_positive_energy(n, p).unwrap()).abs() <= 1e-9, "n = {n}, p = {p}");
        }
    }
}
