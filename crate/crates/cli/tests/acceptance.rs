//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Run with
//! `cargo test -p buresgeo-cli --test acceptance`.

use std::f64::consts::FRAC_PI_2;
use std::process::Command;
use std::time::{Duration, Instant};

use buresgeo_core::closedform::{
    orthogonal_pure_geodesic, orthogonal_transport, qubit_fidelity, qubit_orbit, qubit_state,
};
use buresgeo_core::matcore::{max_abs, trace_re, unitarity_residual};
use buresgeo_core::random::{random_bloch_ball, random_density, random_pure, random_unitary};
use buresgeo_core::states::{ghz_state, w_state};
use buresgeo_core::sun::algebra_report;
use buresgeo_core::{
    bloch_from_density, canonical_purification, characteristic_invariants, generator_basis,
    geodesic_point, geometric_mean_operator, hlc_residual, horizontal_lift, hubner_metric,
    initial_tangent, root_fidelity, solve_tangent_g, transport_operator, uhlmann_unitary,
    unitary_tangent, werner, Complex64, ComplexMatrix, DensityMatrix, Error, Hermitian, WernerKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: buresgeo_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn werner_sweep() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_buresgeo"))
        .args(["werner-sweep", "--steps", "101", "--format", "csv"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || {
        format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    ensure(
        lines.next() == Some("p,root_fidelity,s_star_over_half_pi,root_fidelity_closed_form"),
        || "unexpected header".into(),
    )?;
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    ensure(rows.len() == 101, || format!("{} rows", rows.len()))?;
    let first = &rows[0];
    let last = &rows[100];
    let mid = &rows[50];
    ensure(
        first[0] == 0.0 && first[1] == 1.0 && first[2] == 0.0,
        || format!("p=0 row {first:?}"),
    )?;
    ensure(last[0] == 1.0 && last[1] == 0.0 && last[2] == 1.0, || {
        format!("p=1 row {last:?}")
    })?;
    ensure(mid[0] == 0.5 && (mid[1] - 0.75).abs() <= 1e-12, || {
        format!("p=0.5 row {mid:?}")
    })?;
    let worst = rows
        .iter()
        .filter(|r| r[0] < 1.0)
        .map(|r| (r[1] - r[3]).abs())
        .fold(0.0, f64::max);
    ensure(worst <= 1e-10, || {
        format!("spectral vs closed form {worst:e}")
    })?;
    ensure(elapsed < Duration::from_secs(5), || {
        format!("runtime {elapsed:?}")
    })?;
    Ok(format!(
        "sqrtF(0)=1, sqrtF(1)=0, |sqrtF(0.5)-0.75|={:.1e}, max column gap {worst:.1e}, {:.0} ms",
        (mid[1] - 0.75).abs(),
        elapsed.as_secs_f64() * 1e3
    ))
}

fn werner_spectrum() -> Outcome {
    let mut worst = 0.0f64;
    for kind in [WernerKind::Ghz, WernerKind::W] {
        for k in 1..=9 {
            let p = k as f64 / 10.0;
            let ev = core(core(werner(kind, p))?.eigen())?.eigenvalues;
            for &l in &ev[..7] {
                worst = worst.max((l - (1.0 - p) / 8.0).abs());
            }
            worst = worst.max((ev[7] - (1.0 + 7.0 * p) / 8.0).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("eigenvalue error {worst:e}"))?;
    Ok(format!("max eigenvalue error {worst:.1e}"))
}

fn maxmixed_to_pure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut ef, mut ee, mut em) = (0.0f64, 0.0f64, 0.0f64);
    for n in [2usize, 4, 8, 16] {
        let psi = random_pure(n, &mut rng);
        let proj = &psi * psi.adjoint();
        let mixed = DensityMatrix::maximally_mixed(n);
        let pure = core(DensityMatrix::pure(&psi))?;
        ef = ef.max((core(root_fidelity(&mixed, &pure))? - 1.0 / (n as f64).sqrt()).abs());
        let path = core(geometric_mean_operator(&mixed, &pure))?;
        let end = core(geodesic_point(&path, path.s_star()))?;
        ee = ee.max(max_abs(&(end.matrix() - &proj)));
        em = em.max(max_abs(
            &(path.m_star().as_matrix() - &proj * c((n as f64).sqrt())),
        ));
    }
    ensure(ef <= 1e-12 && ee <= 1e-10 && em <= 1e-12, || {
        format!("fidelity {ef:e}, endpoint {ee:e}, M* {em:e}")
    })?;
    Ok(format!(
        "N=2,4,8,16: fidelity {ef:.1e}, endpoint {ee:.1e}, M* {em:.1e}"
    ))
}

fn qubit_closed_form() -> Outcome {
    let start = Instant::now();
    let basis = core(generator_basis(2))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let x = random_bloch_ball(1.0, &mut rng);
        let y = random_bloch_ball(1.0, &mut rng);
        let path = core(geometric_mean_operator(
            &core(qubit_state(&x))?,
            &core(qubit_state(&y))?,
        ))?;
        for s in path.sample_parameters(11) {
            let generic = core(bloch_from_density(&core(geodesic_point(&path, s))?, &basis))?;
            // The two routes can disagree on s* in the last ulp.
            let s_closed = s.min(core(qubit_fidelity(&x, &y))?.acos());
            let r = core(qubit_orbit(&x, &y, s_closed))?;
            for (a, b) in r.iter().zip(generic.coords()) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(10), || {
        format!("runtime {elapsed:?}")
    })?;
    Ok(format!(
        "200 pairs x 11 points, max deviation {worst:.1e}, {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn geodesic_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut et, mut es, mut ee, mut min_eig) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for n in [2usize, 3, 4, 8] {
        for _ in 0..50 {
            let a = random_density(n, &mut rng);
            let b = random_density(n, &mut rng);
            let path = core(geometric_mean_operator(&a, &b))?;
            for s in path.sample_parameters(11) {
                let rho = core(geodesic_point(&path, s))?;
                et = et.max((rho.trace() - 1.0).abs());
                es = es.max((core(root_fidelity(&a, &rho))? - s.cos()).abs());
                ee = ee.max((core(root_fidelity(&rho, &b))? - (path.s_star() - s).cos()).abs());
                let m = core(transport_operator(&path, s))?;
                min_eig = min_eig.min(core(m.eigen())?.min_eigenvalue());
            }
        }
    }
    ensure(
        et <= 1e-12 && es <= 1e-9 && ee <= 1e-9 && min_eig >= -1e-10,
        || format!("trace {et:e}, start {es:e}, end {ee:e}, min eig {min_eig:e}"),
    )?;
    Ok(format!(
        "trace {et:.1e}, cos s {es:.1e}, cos(s*-s) {ee:.1e}, min eig of M(s) {min_eig:.2e}"
    ))
}

fn hlc_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut e0, mut eh, mut eu, mut eo) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in [2usize, 3, 4, 8] {
        for _ in 0..20 {
            let a = random_density(n, &mut rng);
            let b = random_density(n, &mut rng);
            let u = random_unitary(n, &mut rng);
            let path = core(geometric_mean_operator(&a, &b))?;
            let a0 = core(canonical_purification(&a, Some(&u)))?;
            let g0 = core(initial_tangent(&path))?;
            let adot = g0.as_matrix() * a0.matrix();
            e0 = e0.max(core(hlc_residual(a0.matrix(), &adot))?);
            eu = eu.max((trace_re(&(&adot * adot.adjoint())) - 1.0).abs());
            eo = eo.max((&adot * a0.matrix().adjoint()).trace().norm());
            for s in path.sample_parameters(11) {
                let lift = core(horizontal_lift(&a0, &path, s))?;
                let x = a0.matrix().adjoint() * lift.matrix();
                eh = eh.max(max_abs(&(&x - x.adjoint())));
            }
        }
    }
    ensure(
        e0 <= 1e-10 && eh <= 1e-10 && eu <= 1e-10 && eo <= 1e-10,
        || format!("hlc {e0:e}, A0^dag A(s) {eh:e}, unit speed {eu:e}, orthogonality {eo:e}"),
    )?;
    Ok(format!(
        "hlc(0) {e0:.1e}, A0^dag A(s) hermitian {eh:.1e}, |Adot|^2-1 {eu:.1e}, Tr[Adot A^dag] {eo:.1e}"
    ))
}

fn appendix_unitary() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut eu, mut et) = (0.0f64, 0.0f64);
    for n in [2usize, 3, 4] {
        for _ in 0..100 {
            let a = random_density(n, &mut rng);
            let b = random_density(n, &mut rng);
            let u = core(uhlmann_unitary(&a, &b))?;
            eu = eu.max(unitarity_residual(&u));
            let s1 = core(a.as_hermitian().sqrt())?;
            let s2 = core(b.as_hermitian().sqrt())?;
            let t = (&u * s2.as_matrix() * s1.as_matrix()).trace();
            let f = core(root_fidelity(&a, &b))?;
            et = et.max((t - c(f)).norm());
        }
    }
    ensure(eu <= 1e-9 && et <= 1e-9, || {
        format!("unitarity {eu:e}, trace identity {et:e}")
    })?;
    Ok(format!(
        "unitarity {eu:.1e}, Tr[U sqrt(rho2) sqrt(rho1)] - sqrtF {et:.1e}"
    ))
}

fn random_traceless(n: usize, rng: &mut ChaCha8Rng) -> Hermitian {
    let h = buresgeo_core::random::random_hermitian(n, rng);
    let shift = h.trace() / n as f64;
    Hermitian::new(h.as_matrix() - ComplexMatrix::identity(n, n) * c(shift)).unwrap()
}

fn hubner() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_fd = 0.0f64;
    for n in [2usize, 3] {
        for _ in 0..20 {
            let rho = random_density(n, &mut rng);
            // Scale d so that rho^{-1/2} d rho^{-1/2} has unit spectral radius: t is then
            // the relative size of the perturbation even when rho has small eigenvalues.
            let d = random_traceless(n, &mut rng);
            let is = core(rho.as_hermitian().inv_sqrt())?;
            let relative = core(Hermitian::new(
                is.as_matrix() * d.as_matrix() * is.as_matrix(),
            ))?;
            let d = d.scale(1.0 / core(relative.eigen())?.spectral_radius());
            let metric = core(hubner_metric(&rho, &d))?;
            let quotient = |t: f64| -> Result<f64, String> {
                let shifted = core(DensityMatrix::new(rho.matrix() + d.as_matrix() * c(t)))?;
                // 2 - 2 sqrt(F) loses about half the digits at this scale.
                let db = core(geometric_mean_operator(&rho, &shifted))?.bures_distance();
                Ok(db * db / (t * t))
            };
            let (t1, t2) = (1e-3, 5e-4);
            let extrapolated = 2.0 * quotient(t2)? - quotient(t1)?;
            worst_fd = worst_fd.max(((extrapolated - metric) / metric).abs());
        }
    }
    let basis = core(generator_basis(2))?;
    let mut worst_qubit = 0.0f64;
    for _ in 0..100 {
        let x = random_bloch_ball(0.99, &mut rng);
        let dx: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let rho = core(qubit_state(&x))?;
        let d = basis.combine(0.0, &dx).scale(0.5);
        let metric = core(hubner_metric(&rho, &d))?;
        let dx2: f64 = dx.iter().map(|v| v * v).sum();
        let xdx: f64 = x.iter().zip(&dx).map(|(a, b)| a * b).sum();
        let x2: f64 = x.iter().map(|v| v * v).sum();
        let closed = 0.25 * (dx2 + xdx * xdx / (1.0 - x2));
        worst_qubit = worst_qubit.max((metric - closed).abs());
    }
    ensure(worst_fd <= 1e-6 && worst_qubit <= 1e-10, || {
        format!("finite difference rel {worst_fd:e}, qubit closed form {worst_qubit:e}")
    })?;
    Ok(format!(
        "Richardson relative error {worst_fd:.1e}, qubit closed form {worst_qubit:.1e}"
    ))
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn sun_algebra() -> Outcome {
    let mut worst = 0.0f64;
    for n in [2usize, 3, 4] {
        worst = worst.max(algebra_report(&core(generator_basis(n))?).worst());
    }
    let b = core(generator_basis(2))?;
    let mut exact = true;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                exact &= b.f(i, j, k) == levi_civita(i, j, k) && b.d(i, j, k) == 0.0;
            }
        }
    }
    ensure(worst <= 1e-12 && exact, || {
        format!("identities {worst:e}, pauli exact {exact}")
    })?;
    Ok(format!(
        "N=2,3,4 worst identity defect {worst:.1e}; N=2 f=eps, d=0 exactly"
    ))
}

fn g_solver() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut er, mut eg0, mut exg) = (0.0f64, 0.0f64, 0.0f64);
    for n in [2usize, 3, 4] {
        let basis = core(generator_basis(n))?;
        for _ in 0..100 {
            let rho = random_density(n, &mut rng);
            let x = core(bloch_from_density(&rho, &basis))?;
            let xdot: Vec<f64> = (0..basis.len())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let sol = core(solve_tangent_g(&x, &xdot, &basis))?;
            er = er.max(sol.residual);
            let y: Vec<f64> = (0..basis.len())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let g = core(unitary_tangent(&y, &x, &basis))?;
            eg0 = eg0.max(g.g0.abs());
            let xg: f64 = x.coords().iter().zip(&g.g).map(|(a, b)| a * b).sum();
            exg = exg.max(xg.abs());
        }
    }
    ensure(er <= 1e-9 && eg0 == 0.0 && exg <= 1e-12, || {
        format!("residual {er:e}, g0 {eg0:e}, x.g {exg:e}")
    })?;
    Ok(format!(
        "reconstruction residual {er:.1e}, unitary g0 {eg0:.1e}, x.g {exg:.1e}"
    ))
}

fn invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut worst, mut s1) = (0.0f64, 0.0f64);
    for n in 2..=8 {
        for _ in 0..20 {
            let rho = random_density(n, &mut rng);
            let inv = characteristic_invariants(&rho);
            let eig = core(rho.eigen())?.eigenvalues;
            let mut e = vec![1.0];
            for &v in &eig {
                e.push(0.0);
                for k in (1..e.len()).rev() {
                    e[k] += v * e[k - 1];
                }
            }
            for k in 0..n {
                worst = worst.max((inv[k] - e[k + 1]).abs());
            }
            s1 = s1.max((inv[0] - 1.0).abs());
        }
    }
    ensure(worst <= 1e-10 && s1 <= 1e-12, || {
        format!("polynomials {worst:e}, S1 {s1:e}")
    })?;
    Ok(format!(
        "N=2..8: max deviation {worst:.1e}, |S1-1| {s1:.1e}"
    ))
}

fn ghz_w_limit() -> Outcome {
    let g = ghz_state();
    let w = w_state();
    let pg = &g * g.adjoint();
    let pw = &w * w.adjoint();
    let start = core(orthogonal_pure_geodesic(&g, &w, 0.0))?;
    let end = core(orthogonal_pure_geodesic(&g, &w, FRAC_PI_2))?;
    let e_end = max_abs(&(start.rho.matrix() - &pg)).max(max_abs(&(end.rho.matrix() - &pw)));
    // A(s) as an 8x1 matrix; A'(0) = |W>.
    let a0 = ComplexMatrix::from_column_slice(8, 1, g.as_slice());
    let adot = ComplexMatrix::from_column_slice(8, 1, w.as_slice());
    let hlc = core(hlc_residual(&a0, &adot))?;
    let overlap = g.dotc(&w).norm();
    let m = core(orthogonal_transport(&g, &w))?;
    let cross = max_abs(&(m.as_matrix() * &pg + &pg * m.as_matrix() - m.as_matrix()));

    // The generic pipeline picks the same geodesic for pure orthogonal endpoints.
    let path = core(geometric_mean_operator(
        &core(werner(WernerKind::Ghz, 1.0))?,
        &core(werner(WernerKind::W, 1.0))?,
    ))?;
    ensure(path.is_orthogonal() && path.s_star() == FRAC_PI_2, || {
        "pipeline did not flag orthogonal endpoints".into()
    })?;
    let mut e_pipe = 0.0f64;
    for k in 0..=10 {
        let s = FRAC_PI_2 * k as f64 / 10.0;
        let closed = core(orthogonal_pure_geodesic(&g, &w, s))?;
        e_pipe = e_pipe.max(max_abs(
            &(core(geodesic_point(&path, s))?.matrix() - closed.rho.matrix()),
        ));
    }

    // Mixed orthogonal endpoints have no unique geodesic.
    let mut ghz_minus = ComplexMatrix::zeros(8, 1);
    ghz_minus[(0, 0)] = c(std::f64::consts::FRAC_1_SQRT_2);
    ghz_minus[(7, 0)] = c(-std::f64::consts::FRAC_1_SQRT_2);
    let mixed1 = core(DensityMatrix::new(
        (&pg + &ghz_minus * ghz_minus.adjoint()) * c(0.5),
    ))?;
    let mut other = ComplexMatrix::zeros(8, 1);
    other[(3, 0)] = c(1.0);
    let mixed2 = core(DensityMatrix::new(
        (&pw + &other * other.adjoint()) * c(0.5),
    ))?;
    let refusal = geometric_mean_operator(&mixed1, &mixed2);
    let refused = matches!(&refusal, Err(Error::SingularTransport));
    let message = match &refusal {
        Err(e) => e.to_string(),
        Ok(_) => String::new(),
    };

    ensure(
        e_end <= 1e-12
            && hlc <= 1e-12
            && overlap <= 1e-15
            && cross <= 1e-12
            && e_pipe <= 1e-12
            && refused,
        || {
            format!("endpoints {e_end:e}, hlc {hlc:e}, cross {cross:e}, pipeline {e_pipe:e}, refusal {refusal:?}")
        },
    )?;
    Ok(format!(
        "endpoints {e_end:.1e}, hlc {hlc:.1e}, cross-term identity {cross:.1e}, pipeline agreement {e_pipe:.1e}; mixed refusal: \"{message}\""
    ))
}

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("werner sweep via CLI", werner_sweep),
        ("werner spectrum", werner_spectrum),
        ("maximally mixed to pure", maxmixed_to_pure),
        ("qubit closed-form orbit", qubit_closed_form),
        ("geodesic identities", geodesic_identities),
        ("horizontal lift", hlc_suite),
        ("fidelity-attaining unitary", appendix_unitary),
        ("Hubner metric", hubner),
        ("su(N) algebra", sun_algebra),
        ("tangent generator solver", g_solver),
        ("characteristic invariants", invariants),
        ("GHZ/W pure limit", ghz_w_limit),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
