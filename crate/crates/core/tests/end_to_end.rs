use std::path::PathBuf;

use lieps::algebroid::{algebroid_betti, kunneth};
use lieps::cealg::ce_betti;
use lieps::io::{parse_complex, parse_cover, parse_lie_algebra};
use lieps::mv::mv_exactness_report;
use lieps::psforms::{integration_certificate, ps_betti};
use lieps::{MVSetup, TrivialAlgebroid, Q};

fn read(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn shipped_complexes() {
    let expected: [(&str, &[usize]); 6] = [
        ("point.json", &[1]),
        ("interval.json", &[1, 0]),
        ("triangle.json", &[1, 0, 0]),
        ("circle.json", &[1, 1]),
        ("sphere.json", &[1, 0, 1]),
        ("tetrahedron.json", &[1, 0, 0, 0]),
    ];
    for (file, betti) in expected {
        let k = parse_complex(&read(file)).unwrap();
        let pmax = k.dim().unwrap();
        let cert = integration_certificate::<Q>(&k, 1, pmax).unwrap();
        assert!(cert.holds(), "{file}");
        assert_eq!(cert.simplicial_betti.0, betti, "{file}");
        assert_eq!(ps_betti::<Q>(&k, 2, pmax).unwrap().0, betti, "{file}");
    }
}

#[test]
fn shipped_lie_algebras() {
    for (file, betti) in [
        ("sl2.json", vec![1, 0, 0, 1]),
        ("h3.json", vec![1, 2, 2, 1]),
        ("abelian2.json", vec![1, 2, 1]),
    ] {
        let g = parse_lie_algebra(&read(file)).unwrap();
        g.validate().unwrap();
        assert_eq!(ce_betti(&g).unwrap().0, betti, "{file}");
    }
    let bad = parse_lie_algebra(&read("not_lie.json")).unwrap();
    assert!(bad.validate().is_err());
}

#[test]
fn sphere_times_h3() {
    let k = parse_complex(&read("sphere.json")).unwrap();
    let g = parse_lie_algebra(&read("h3.json")).unwrap();
    let a = TrivialAlgebroid::new(k, g).unwrap();
    let report = kunneth(&a, 1, 5).unwrap();
    assert!(report.holds());
    assert_eq!(algebroid_betti(&a, 1, 5).unwrap().0, vec![1, 2, 3, 3, 2, 1]);
}

#[test]
fn shipped_covers() {
    let circle = parse_complex(&read("circle.json")).unwrap();
    let path = parse_complex(&read("path.json")).unwrap();
    for (k, file) in [
        (&circle, "circle_arcs.cover.json"),
        (&circle, "circle_whole.cover.json"),
        (&path, "path_split.cover.json"),
    ] {
        let (k1, k2) = parse_cover(&read(file), k).unwrap();
        let s = MVSetup::<Q>::new(k.clone(), k1, k2, 1, None).unwrap();
        let report = mv_exactness_report(&s, 1).unwrap();
        assert!(report.exact, "{file}");
    }
    let (k1, k2) = parse_cover(&read("circle_gap.cover.json"), &circle).unwrap();
    assert!(MVSetup::<Q>::new(circle, k1, k2, 1, None).is_err());
}
