//! The end-to-end checks behind `lieps verify`.
//!
//! Every check runs on fixed example complexes and algebras; the random
//! ones draw from a ChaCha stream derived from the seed, so a report is a
//! pure function of the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebroid::{koszul_check, kunneth, Section, TensorComplex, TrivialAlgebroid};
use crate::cealg::{ce_betti, ce_complex, ce_complex_unchecked, LieAlgebra};
use crate::combinat::binomial;
use crate::error::{Error, Result};
use crate::exactla::BettiTable;
use crate::mv::{connecting_homomorphism, mv_exactness_report, simplicial_connecting, MVSetup};
use crate::psforms::{integration_certificate, PsComplex, Truncation};
use crate::simplicial::{simplicial_betti, Simplex, SimplicialComplex};
use crate::sullivan::{differential_matrix, monomial_basis, PolyForm};
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            passed: true,
            details: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: String) {
        if !ok {
            self.passed = false;
            self.details.push(format!("FAIL {detail}"));
        }
    }

    fn note(&mut self, detail: String) {
        self.details.push(detail);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn cx(tops: &[&[usize]]) -> SimplicialComplex {
    SimplicialComplex::from_top_simplices(tops).expect("valid example")
}

pub fn simplex(n: usize) -> SimplicialComplex {
    cx(&[&(0..=n).collect::<Vec<_>>()])
}

/// The boundary of the `n`-simplex.
pub fn sphere(n: usize) -> SimplicialComplex {
    let tops: Vec<Vec<usize>> = (0..=n)
        .map(|skip| (0..=n).filter(|&v| v != skip).collect())
        .collect();
    SimplicialComplex::from_top_simplices(&tops).expect("valid example")
}

pub fn path() -> SimplicialComplex {
    cx(&[&[0, 1], &[1, 2]])
}

pub fn example_complexes() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("Δ1", simplex(1)),
        ("Δ2", simplex(2)),
        ("Δ3", simplex(3)),
        ("∂Δ2", sphere(2)),
        ("∂Δ3", sphere(3)),
        ("path", path()),
    ]
}

pub fn example_algebras() -> Vec<(&'static str, LieAlgebra<Q>)> {
    vec![
        ("abelian2", LieAlgebra::abelian(2)),
        ("h3", LieAlgebra::heisenberg()),
        ("sl2", LieAlgebra::sl2()),
    ]
}

/// A ChaCha stream determined by `(seed, stream)`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    let p: i64 = rng.gen_range(-3..=3);
    let q: i64 = rng.gen_range(1..=2);
    Q::new(p.into(), q.into())
}

/// A function on the `n`-simplex with coefficient degree `≤ max_deg`.
pub fn random_function(rng: &mut ChaCha8Rng, n: usize, max_deg: usize) -> PolyForm<Q> {
    let basis = monomial_basis(n, 0, max_deg);
    let coords: Vec<Q> = (0..basis.len())
        .map(|_| {
            if rng.gen_bool(0.5) {
                random_q(rng)
            } else {
                Q::from_integer(0.into())
            }
        })
        .collect();
    basis.form(&coords)
}

pub fn random_section(rng: &mut ChaCha8Rng, n: usize, m: usize, max_deg: usize) -> Section<Q> {
    let vector = (0..n).map(|_| random_function(rng, n, max_deg)).collect();
    let fiber = (0..m).map(|_| random_function(rng, n, max_deg)).collect();
    Section::new(n, vector, fiber).expect("shapes agree")
}

/// `d∘d = 0` for the per-simplex, piecewise, CE and tensor differentials.
pub fn check_d_squared() -> Result<Check> {
    let mut c = Check::new("d_squared");
    let mut count = 0;
    for n in 0..=3usize {
        for cap in 0..=2 {
            for p in 0..n.saturating_sub(1) {
                let d0 = differential_matrix::<Q>(n, p, cap);
                let d1 = differential_matrix::<Q>(n, p + 1, cap);
                let ok = (&d1 * &d0).is_zero();
                c.record(ok, format!("polynomial forms on Δ{n}, degree {p}, D={cap}"));
                count += 1;
            }
        }
    }
    for (name, g) in example_algebras() {
        c.record(
            ce_complex(&g)?.d_squared_failure().is_none(),
            format!("CE complex of {name}"),
        );
        count += 1;
    }
    for (kname, k) in example_complexes() {
        let top = k.dim().unwrap_or(0);
        for cap in 0..=2 {
            for t in [Truncation::Full, Truncation::Trimmed] {
                let ps = PsComplex::<Q>::with_truncation(&k, cap, top, t)?;
                c.record(
                    ps.complex.d_squared_failure().is_none(),
                    format!("piecewise {t:?} complex on {kname}, D={cap}"),
                );
                count += 1;
            }
            for (gname, g) in example_algebras() {
                let tc = TensorComplex::new(&TrivialAlgebroid::new(k.clone(), g)?, cap)?;
                c.record(
                    tc.complex().d_squared_failure().is_none(),
                    format!("tensor complex {kname} ⊗ {gname}, D={cap}"),
                );
                count += 1;
            }
        }
    }
    c.note(format!("{count} complexes checked"));
    Ok(c)
}

/// Piecewise Betti numbers against simplicial ones, with the integration
/// certificate, at `D = 1, 2`.
pub fn check_ps_vs_simplicial() -> Result<Check> {
    let mut c = Check::new("piecewise_vs_simplicial");
    for (name, k) in example_complexes() {
        let expected = simplicial_betti::<Q>(&k);
        for cap in 1..=2 {
            let cert = integration_certificate::<Q>(&k, cap, k.dim().unwrap_or(0))?;
            c.record(cert.holds(), format!("{name}, D={cap}: {cert:?}"));
            c.record(
                cert.ps_betti == expected,
                format!("{name}, D={cap}: {} vs {expected}", cert.ps_betti),
            );
        }
        c.note(format!("{name}: {expected}"));
    }
    let fixed = [
        ("∂Δ2", sphere(2), vec![1, 1]),
        ("∂Δ3", sphere(3), vec![1, 0, 1]),
        ("Δ3", simplex(3), vec![1, 0, 0, 0]),
    ];
    for (name, k, b) in fixed {
        c.record(
            simplicial_betti::<Q>(&k) == BettiTable(b.clone()),
            format!("{name} should be {b:?}"),
        );
    }
    Ok(c)
}

/// Tensor Betti numbers against the convolution of the factors.
pub fn check_kunneth() -> Result<Check> {
    let mut c = Check::new("kunneth");
    for (kname, k) in example_complexes() {
        for (gname, g) in example_algebras() {
            let rmax = k.dim().unwrap_or(0) + g.dim();
            let a = TrivialAlgebroid::new(k.clone(), g)?;
            for cap in 1..=2 {
                let report = kunneth(&a, cap, rmax)?;
                c.record(
                    report.holds(),
                    format!(
                        "{kname} ⊗ {gname}, D={cap}: {} vs {}",
                        report.tensor, report.convolution
                    ),
                );
                if cap == 1 {
                    c.note(format!("{kname} ⊗ {gname}: {}", report.tensor));
                }
            }
        }
    }
    let a = TrivialAlgebroid::new(sphere(2), LieAlgebra::<Q>::sl2())?;
    let tensor = kunneth(&a, 1, 4)?.tensor;
    c.record(
        tensor == BettiTable(vec![1, 1, 0, 1, 1]),
        format!("∂Δ2 ⊗ sl2 gave {tensor}"),
    );
    Ok(c)
}

/// Antisymmetry, Jacobi, Leibniz and `γ∘ι = id` on random sections.
pub fn check_algebroid_axioms(seed: u64, trials: usize) -> Result<Check> {
    let mut c = Check::new("algebroid_axioms");
    let mut r = seeded_rng(seed, 4);
    let algebras = [LieAlgebra::heisenberg(), LieAlgebra::sl2()];
    for trial in 0..trials {
        let g = algebras[trial % 2].clone();
        let m = g.dim();
        let a = TrivialAlgebroid::new(simplex(2), g)?;
        let x = random_section(&mut r, 2, m, 2);
        let y = random_section(&mut r, 2, m, 2);
        let z = random_section(&mut r, 2, m, 2);
        let f = random_function(&mut r, 2, 2);
        let xy = a.bracket(&x, &y)?;
        c.record(
            xy == -&a.bracket(&y, &x)?,
            format!("antisymmetry, trial {trial}"),
        );
        let jacobi = &(&a.bracket(&x, &a.bracket(&y, &z)?)?
            + &a.bracket(&y, &a.bracket(&z, &x)?)?)
            + &a.bracket(&z, &xy)?;
        c.record(jacobi.is_zero(), format!("Jacobi, trial {trial}"));
        let lhs = a.bracket(&x, &y.scale(&f)?)?;
        let rhs = &y.scale(&x.derive(&f))? + &xy.scale(&f)?;
        c.record(lhs == rhs, format!("Leibniz, trial {trial}"));
        let lifted = Section::from_vector_field(x.anchor(), m)?;
        c.record(
            lifted.anchor() == x.anchor(),
            format!("anchor splitting, trial {trial}"),
        );
    }
    c.note(format!("{trials} random section triples on Δ2"));
    Ok(c)
}

/// The intrinsic differential against the tensor matrix on random forms of
/// degree `≤ 2` over `Δ2`.
pub fn check_koszul(seed: u64, trials: usize) -> Result<Check> {
    let mut c = Check::new("koszul");
    let mut r = seeded_rng(seed, 5);
    let top = Simplex::new(vec![0, 1, 2])?;
    for (gname, g) in [("h3", LieAlgebra::heisenberg()), ("sl2", LieAlgebra::sl2())] {
        let m = g.dim();
        let tc = TensorComplex::new(&TrivialAlgebroid::new(simplex(2), g)?, 2)?;
        for trial in 0..trials {
            let degree = trial % 3;
            let coords: Vec<Q> = (0..tc.dim(degree)).map(|_| random_q(&mut r)).collect();
            let omega = tc.form(degree, &coords)?;
            let sections: Vec<Section<Q>> = (0..=degree)
                .map(|_| random_section(&mut r, 2, m, 1))
                .collect();
            let check = koszul_check(&tc, &omega, &top, &sections)?;
            c.record(
                check.agrees(),
                format!("{gname}, degree {degree}, trial {trial}: {check:?}"),
            );
        }
        c.note(format!("{trials} random forms with {gname} coefficients"));
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulSample {
    pub degree: usize,
    pub agrees: bool,
}

/// Koszul checks for `per_degree` random forms in each degree `≤ 2` on the
/// first maximal simplex of the base; empty for an empty base.
pub fn koszul_samples(
    tc: &TensorComplex<Q>,
    seed: u64,
    per_degree: usize,
) -> Result<Vec<KoszulSample>> {
    let Some(top) = tc.algebroid().base().top_simplices().into_iter().next() else {
        return Ok(Vec::new());
    };
    let m = tc.algebroid().fiber().dim();
    let mut r = seeded_rng(seed, 6);
    let mut out = Vec::new();
    for degree in 0..tc.num_degrees().min(3) {
        for _ in 0..per_degree {
            let coords: Vec<Q> = (0..tc.dim(degree)).map(|_| random_q(&mut r)).collect();
            let omega = tc.form(degree, &coords)?;
            let sections: Vec<Section<Q>> = (0..=degree)
                .map(|_| random_section(&mut r, top.dim(), m, 1))
                .collect();
            let agrees = koszul_check(tc, &omega, &top, &sections)?.agrees();
            out.push(KoszulSample { degree, agrees });
        }
    }
    Ok(out)
}

/// Short and long exactness for the circle and path splits.
pub fn check_mayer_vietoris() -> Result<Check> {
    let mut c = Check::new("mayer_vietoris");
    let splits = [
        (
            "∂Δ2 arcs",
            sphere(2),
            cx(&[&[0, 1], &[1, 2]]),
            cx(&[&[0, 2]]),
        ),
        ("path at 1", path(), cx(&[&[0, 1]]), cx(&[&[1, 2]])),
    ];
    for (name, k, k1, k2) in splits {
        for fiber in [None, Some(LieAlgebra::<Q>::sl2())] {
            let pmax = k.dim().unwrap_or(0) + fiber.as_ref().map_or(0, LieAlgebra::dim);
            for cap in 1..=2 {
                let s = MVSetup::new(k.clone(), k1.clone(), k2.clone(), cap, fiber.clone())?;
                let report = mv_exactness_report(&s, pmax)?;
                let label = format!("{name}, {}, D={cap}", report.coefficients);
                c.record(report.exact, format!("{label}: {report:?}"));
                c.record(
                    report.truncation_obstruction.is_none(),
                    format!("{label}: obstruction"),
                );
                if cap == 1 {
                    c.note(format!(
                        "{label}: connecting ranks {:?}",
                        report.connecting_ranks
                    ));
                }
            }
        }
        let s = MVSetup::<Q>::new(k.clone(), k1.clone(), k2.clone(), 1, None)?;
        let natural = simplicial_connecting(&s, 0)? == simplicial_connecting(&s.with_cap(2), 0)?;
        c.record(
            natural,
            format!("{name}: connecting map changes between D=1 and D=2"),
        );
    }
    let arcs = MVSetup::<Q>::new(sphere(2), cx(&[&[0, 1], &[1, 2]]), cx(&[&[0, 2]]), 1, None)?;
    let rank = connecting_homomorphism(&arcs, 0)?.rank();
    c.record(rank == 1, format!("∂Δ2 arcs: connecting rank {rank}"));
    Ok(c)
}

/// A random three-dimensional algebra that violates the Jacobi identity.
pub fn random_jacobi_violator(seed: u64) -> LieAlgebra<Q> {
    let mut r = seeded_rng(seed, 7);
    loop {
        let mut g = LieAlgebra::abelian(3);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let coeffs = (0..3)
                .map(|_| Q::from_integer(r.gen_range(-2i64..=2).into()))
                .collect();
            g.set_bracket(i, j, coeffs).expect("in range");
        }
        if g.jacobi_violation().is_some() {
            return g;
        }
    }
}

/// Known CE Betti numbers, and rejection of a Jacobi-violating algebra.
pub fn check_ce(seed: u64) -> Result<Check> {
    let mut c = Check::new("chevalley_eilenberg");
    for m in 0..=4 {
        let b = ce_betti(&LieAlgebra::<Q>::abelian(m))?;
        let row: Vec<usize> = (0..=m).map(|q| binomial(m, q)).collect();
        c.record(b == BettiTable(row), format!("abelian{m}: {b}"));
    }
    for (name, g, expected) in [
        ("sl2", LieAlgebra::<Q>::sl2(), vec![1, 0, 0, 1]),
        ("h3", LieAlgebra::heisenberg(), vec![1, 2, 2, 1]),
    ] {
        let b = ce_betti(&g)?;
        c.record(b == BettiTable(expected), format!("{name}: {b}"));
        c.note(format!("{name}: {b}"));
    }
    let bad = random_jacobi_violator(seed);
    let rejected = matches!(bad.validate(), Err(Error::JacobiViolation(..)));
    c.record(rejected, "Jacobi violator accepted".into());
    let broken = ce_complex_unchecked(&bad).d_squared_failure().is_some();
    c.record(broken, "Jacobi violator still has d∘d = 0".into());
    if let Some((i, j, k)) = bad.jacobi_violation() {
        c.note(format!("seeded violator fails Jacobi on ({i},{j},{k})"));
    }
    Ok(c)
}

pub fn verify(seed: u64) -> Result<VerifyReport> {
    let checks = vec![
        check_d_squared()?,
        check_ps_vs_simplicial()?,
        check_kunneth()?,
        check_algebroid_axioms(seed, 200)?,
        check_koszul(seed, 50)?,
        check_mayer_vietoris()?,
        check_ce(seed)?,
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        seed,
        checks,
        passed,
    })
}
