//! Acceptance suite: one line per criterion, exact arithmetic throughout.
//!
//! Expected Betti numbers come from the oracles below, which share no code
//! with the library: boundary and CE matrices are built from scratch and
//! ranked modulo a large prime.

use std::process::{Command, ExitCode};

use lieps::algebroid::{algebroid_betti, TrivialAlgebroid};
use lieps::cealg::ce_betti;
use lieps::mv::{connecting_homomorphism, les_exactness_check, MVSetup};
use lieps::psforms::ps_betti;
use lieps::verify::{
    check_algebroid_axioms, check_ce, check_d_squared, check_koszul, check_kunneth,
    check_mayer_vietoris, check_ps_vs_simplicial, example_algebras, example_complexes, Check,
};
use lieps::{LieAlgebra, SimplicialComplex, Q};

mod oracle {
    const P: i64 = 1_000_003;

    fn inv(a: i64) -> i64 {
        let (mut base, mut e, mut r) = (a.rem_euclid(P), P - 2, 1i64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        r
    }

    pub fn rank(mut m: Vec<Vec<i64>>) -> usize {
        let cols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..m.len()).find(|&i| m[i][c].rem_euclid(P) != 0) else {
                continue;
            };
            m.swap(r, piv);
            let s = inv(m[r][c]);
            for x in m[r].iter_mut() {
                *x = (*x * s).rem_euclid(P);
            }
            for i in 0..m.len() {
                if i != r && m[i][c].rem_euclid(P) != 0 {
                    let f = m[i][c];
                    let pivot = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot) {
                        *x = (*x - f * y).rem_euclid(P);
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn faces(tops: &[Vec<usize>], k: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for t in tops {
            for mask in 0u32..(1 << t.len()) {
                if mask.count_ones() as usize == k + 1 {
                    let f: Vec<usize> = (0..t.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| t[i])
                        .collect();
                    if !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
        }
        out
    }

    /// Betti numbers in degrees `0..=dim` from boundary matrices.
    pub fn simplicial_betti(tops: &[Vec<usize>]) -> Vec<usize> {
        let dim = tops.iter().map(|t| t.len() - 1).max().unwrap_or(0);
        let cells: Vec<Vec<Vec<usize>>> = (0..=dim + 1).map(|k| faces(tops, k)).collect();
        let boundary_rank = |k: usize| -> usize {
            if k == 0 || cells[k].is_empty() || cells[k - 1].is_empty() {
                return 0;
            }
            let m: Vec<Vec<i64>> = cells[k]
                .iter()
                .map(|s| {
                    cells[k - 1]
                        .iter()
                        .map(|f| {
                            match (0..s.len()).find(|&i| {
                                let mut t = s.clone();
                                t.remove(i);
                                &t == f
                            }) {
                                Some(i) if i % 2 == 0 => 1,
                                Some(_) => -1,
                                None => 0,
                            }
                        })
                        .collect()
                })
                .collect();
            rank(m)
        };
        (0..=dim)
            .map(|k| cells[k].len() - boundary_rank(k) - boundary_rank(k + 1))
            .collect()
    }

    /// CE Betti numbers from structure constants `c[i][j][k]`.
    pub fn ce_betti(m: usize, c: &[Vec<Vec<i64>>]) -> Vec<usize> {
        let subsets = |q: usize| -> Vec<Vec<usize>> {
            (0u32..(1 << m))
                .filter(|s| s.count_ones() as usize == q)
                .map(|s| (0..m).filter(|i| s >> i & 1 == 1).collect())
                .collect()
        };
        // d on Λ^q, written as the dual of the Chevalley–Eilenberg boundary
        let d_rank = |q: usize| -> usize {
            let rows = subsets(q + 1);
            let cols = subsets(q);
            if rows.is_empty() || cols.is_empty() {
                return 0;
            }
            let mut mat = vec![vec![0i64; cols.len()]; rows.len()];
            for (r, s) in rows.iter().enumerate() {
                for a in 0..s.len() {
                    for b in a + 1..s.len() {
                        for (k, &ck) in c[s[a]][s[b]].iter().enumerate() {
                            if ck == 0 {
                                continue;
                            }
                            let mut rest: Vec<usize> = s
                                .iter()
                                .enumerate()
                                .filter(|&(t, _)| t != a && t != b)
                                .map(|(_, &v)| v)
                                .collect();
                            if rest.contains(&k) {
                                continue;
                            }
                            let pos = rest.iter().filter(|&&v| v < k).count();
                            rest.insert(pos, k);
                            let col = cols.iter().position(|x| *x == rest).unwrap();
                            let sign = if (a + b + pos) % 2 == 0 { 1 } else { -1 };
                            mat[r][col] += sign * ck;
                        }
                    }
                }
            }
            rank(mat)
        };
        (0..=m)
            .map(|q| subsets(q).len() - d_rank(q) - if q == 0 { 0 } else { d_rank(q - 1) })
            .collect()
    }

    pub fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }
}

fn structure_constants(name: &str) -> Vec<Vec<Vec<i64>>> {
    let mut c = vec![vec![vec![0i64; 3]; 3]; 3];
    let mut set = |i: usize, j: usize, k: usize, v: i64| {
        c[i][j][k] = v;
        c[j][i][k] = -v;
    };
    match name {
        "abelian2" => return vec![vec![vec![0; 2]; 2]; 2],
        "h3" => set(0, 1, 2, 1),
        "sl2" => {
            set(0, 1, 1, 2);
            set(0, 2, 2, -2);
            set(1, 2, 0, 1);
        }
        _ => unreachable!(),
    }
    c
}

fn tops(k: &SimplicialComplex) -> Vec<Vec<usize>> {
    k.top_simplices()
        .iter()
        .map(|s| s.vertices().to_vec())
        .collect()
}

fn cx(t: &[&[usize]]) -> SimplicialComplex {
    SimplicialComplex::from_top_simplices(t).unwrap()
}

struct Outcome {
    passed: bool,
    summary: String,
}

fn from_checks(checks: Vec<lieps::Result<Check>>, extra: Vec<(bool, String)>) -> Outcome {
    let mut passed = true;
    let mut notes = Vec::new();
    for c in checks {
        match c {
            Ok(c) if c.passed => {}
            Ok(c) => {
                passed = false;
                notes.extend(c.details.into_iter().filter(|d| d.starts_with("FAIL")));
            }
            Err(e) => {
                passed = false;
                notes.push(format!("error: {e}"));
            }
        }
    }
    for (ok, note) in extra {
        if !ok {
            passed = false;
            notes.push(note);
        }
    }
    Outcome {
        passed,
        summary: notes.join("; "),
    }
}

fn differential_soundness() -> Outcome {
    from_checks(vec![check_d_squared()], vec![])
}

fn piecewise_matches_simplicial() -> Outcome {
    let mut extra = Vec::new();
    for (name, k) in example_complexes() {
        let expected = oracle::simplicial_betti(&tops(&k));
        for cap in 1..=2 {
            let got = ps_betti::<Q>(&k, cap, k.dim().unwrap()).unwrap();
            extra.push((
                got.0 == expected,
                format!("{name} D={cap}: {got} vs oracle {expected:?}"),
            ));
        }
    }
    let fixed: [(&str, Vec<usize>); 3] = [
        ("∂Δ2", vec![1, 1]),
        ("∂Δ3", vec![1, 0, 1]),
        ("Δ3", vec![1, 0, 0, 0]),
    ];
    let all = example_complexes();
    for (name, b) in fixed {
        let k = &all.iter().find(|(n, _)| *n == name).unwrap().1;
        extra.push((
            oracle::simplicial_betti(&tops(k)) == b,
            format!("oracle for {name}"),
        ));
    }
    from_checks(vec![check_ps_vs_simplicial()], extra)
}

fn kunneth_holds() -> Outcome {
    let mut extra = Vec::new();
    for (kname, k) in example_complexes() {
        let base = oracle::simplicial_betti(&tops(&k));
        for (gname, g) in example_algebras() {
            let fiber = oracle::ce_betti(g.dim(), &structure_constants(gname));
            let expected = oracle::convolve(&base, &fiber);
            let a = TrivialAlgebroid::new(k.clone(), g).unwrap();
            let got = algebroid_betti(&a, 1, expected.len() - 1).unwrap();
            extra.push((
                got.0 == expected,
                format!("{kname} ⊗ {gname}: {got} vs {expected:?}"),
            ));
        }
    }
    extra.push((
        oracle::convolve(&[1, 1], &[1, 0, 0, 1]) == vec![1, 1, 0, 1, 1],
        "∂Δ2 ⊗ sl2 convolution".into(),
    ));
    from_checks(vec![check_kunneth()], extra)
}

fn algebroid_axioms() -> Outcome {
    from_checks(vec![check_algebroid_axioms(7, 200)], vec![])
}

fn koszul_consistency() -> Outcome {
    from_checks(vec![check_koszul(7, 50)], vec![])
}

fn mayer_vietoris() -> Outcome {
    let arcs = MVSetup::<Q>::new(
        cx(&[&[0, 1], &[1, 2], &[0, 2]]),
        cx(&[&[0, 1], &[1, 2]]),
        cx(&[&[0, 2]]),
        1,
        None,
    )
    .unwrap();
    let rank = connecting_homomorphism(&arcs, 0).map(|c| c.rank());
    let nodes = les_exactness_check(&arcs, 1).unwrap();
    from_checks(
        vec![check_mayer_vietoris()],
        vec![
            (rank == Ok(1), format!("connecting rank {rank:?}")),
            (
                nodes.len() == 6 && nodes.iter().all(|n| n.exact),
                format!("{nodes:?}"),
            ),
        ],
    )
}

fn ce_oracle() -> Outcome {
    let mut extra = Vec::new();
    for (name, g) in example_algebras() {
        let expected = oracle::ce_betti(g.dim(), &structure_constants(name));
        let got = ce_betti(&g).unwrap();
        extra.push((got.0 == expected, format!("{name}: {got} vs {expected:?}")));
    }
    extra.push((
        oracle::ce_betti(3, &structure_constants("sl2")) == vec![1, 0, 0, 1],
        "sl2 oracle".into(),
    ));
    extra.push((
        oracle::ce_betti(3, &structure_constants("h3")) == vec![1, 2, 2, 1],
        "h3 oracle".into(),
    ));
    for m in 0..=4 {
        let got = ce_betti(&LieAlgebra::<Q>::abelian(m)).unwrap();
        let row: Vec<usize> = (0..=m)
            .map(|q| (0..q).fold(1, |acc, i| acc * (m - i) / (i + 1)))
            .collect();
        extra.push((got.0 == row, format!("abelian{m}: {got}")));
    }
    from_checks(vec![check_ce(7)], extra)
}

fn deterministic_verify() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_lieps"))
            .args(["verify", "--seed", "7"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let ok =
        a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome {
        passed: ok,
        summary: if ok {
            String::new()
        } else {
            format!(
                "status {:?} / {:?}, outputs equal: {}",
                a.status,
                b.status,
                a.stdout == b.stdout
            )
        },
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "d∘d = 0 for every constructed complex",
            differential_soundness,
        ),
        (
            "piecewise cohomology equals simplicial cohomology",
            piecewise_matches_simplicial,
        ),
        ("Künneth for every base and fiber", kunneth_holds),
        ("Lie algebroid axioms on random sections", algebroid_axioms),
        (
            "intrinsic and tensor differentials agree",
            koszul_consistency,
        ),
        ("Mayer–Vietoris short and long exactness", mayer_vietoris),
        ("Chevalley–Eilenberg oracle and Jacobi rejection", ce_oracle),
        (
            "verify --seed 7 is byte-identical across runs",
            deterministic_verify,
        ),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = run();
        if outcome.passed {
            println!("PASS  {name}");
        } else {
            failed += 1;
            println!("FAIL  {name}: {}", outcome.summary);
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
