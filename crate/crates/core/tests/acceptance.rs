//! Acceptance suite: one line per criterion, nonzero exit status if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bilv_core::dynamics::{integrate, IntegrateOptions, SystemSpec};
use bilv_core::exactalg::{ratio, Poly, Var};
use bilv_core::indexsets::{
    complement, enumerate_s, is_in_s, is_in_s_prime, phi1, phi2, sigma, tau, IndexTuple,
};
use bilv_core::integrals::{
    deformed_casimir, jacobian_rank, k_b_expansion, k_b_via_exp, recursion_report, DeformationC,
};
use bilv_core::lax::{
    char_poly_expected, char_poly_lax, det_lax, det_lax_expected, is_weight_homogeneous,
    k_b_from_char_poly, lax_residual,
};
use bilv_core::poisson::{
    a_entry, admissible_pairs, is_admissible_pair, jacobi_violations, numeric_structure, x_assignment,
    Bracket, BracketKind, ConstantStructure,
};
use bilv_core::sampler::{generic_point, rng, DEFAULT_SEED};
use bilv_core::veselov::{poisson_map_table, vs_equivalence, vs_vector_field_check};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            go(v + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, r, &mut Vec::new(), &mut out);
    out
}

/// Definitional membership: the principal submatrix of `A^{(k)}` on `m`
/// equals `A^{(ℓ)}`.
fn submatrix_member(k: usize, m: &[usize]) -> bool {
    let ell = (m.len() - 1) / 2;
    (0..m.len()).all(|i| (0..m.len()).all(|j| a_entry(k, m[i], m[j]) == a_entry(ell, i + 1, j + 1)))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for k in 1..=4 {
        let n = 2 * k + 1;
        for ell in 0..=k {
            let oracle: Vec<Vec<usize>> = combinations(n, 2 * ell + 1)
                .into_iter()
                .filter(|m| submatrix_member(k, m))
                .collect();
            let got: Vec<Vec<usize>> = enumerate_s(k, ell).iter().map(|m| m.entries().to_vec()).collect();
            ensure(got == oracle, || format!("k={k} ell={ell}: {got:?} != {oracle:?}"))?;
            total += got.len();
        }
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(10), || format!("took {el:?}"))?;
    Ok(format!("{total} tuples, {el:.2?}"))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for k in 1..=4 {
        let n = 2 * k + 1;
        let ts = |m: &IndexTuple| tau(k, &sigma(k, m));
        for ell in 0..=k {
            let s: BTreeSet<IndexTuple> = enumerate_s(k, ell).into_iter().collect();
            for m in &s {
                ensure(s.contains(&sigma(k, m)), || format!("sigma leaves S: {m}"))?;
                ensure(s.contains(&tau(k, m)), || format!("tau leaves S: {m}"))?;
                checked += 1;
            }
            for e in combinations(n, 2 * ell + 1) {
                let m = IndexTuple::new(k, e).unwrap();
                let member = is_in_s(k, ell, &m).unwrap().in_s;
                let dual = is_in_s_prime(k, ell, &complement(k, &m)).unwrap();
                ensure(member == dual, || format!("complement characterization fails at {m}"))?;
                ensure(member == s.contains(&m), || format!("membership disagrees at {m}"))?;
            }
            let plus = s.iter().filter(|m| m.contains(1)).count();
            let minus = s.iter().filter(|m| !m.contains(1)).count();
            ensure(plus + minus == s.len(), || "partition".into())?;
            if ell == 0 {
                continue;
            }
            let domain: Vec<IndexTuple> = enumerate_s(k, ell - 1).into_iter().filter(|m| !m.contains(1)).collect();
            let mut img1 = BTreeSet::new();
            let mut img2 = BTreeSet::new();
            for m in &domain {
                if m.m(ell) <= k + 1 {
                    let a = phi1(k, ell, m).map_err(|e| e.to_string())?;
                    let t = ts(m);
                    let b = phi2(k, ell, &t).map_err(|e| format!("phi2 on {t}: {e}"))?;
                    ensure(b == ts(&a), || format!("diagram fails at {m}"))?;
                    ensure(img1.insert(a), || format!("phi1 not injective at {m}"))?;
                } else {
                    let b = phi2(k, ell, m).map_err(|e| e.to_string())?;
                    ensure(img2.insert(b), || format!("phi2 not injective at {m}"))?;
                }
            }
            let want1: BTreeSet<IndexTuple> = s.iter().filter(|n| n.contains(1) && n.contains(k + 2)).cloned().collect();
            let want2: BTreeSet<IndexTuple> = s.iter().filter(|n| n.contains(1) && n.contains(k + 1)).cloned().collect();
            ensure(img1 == want1, || format!("phi1 image wrong for k={k} ell={ell}"))?;
            ensure(img2 == want2, || format!("phi2 image wrong for k={k} ell={ell}"))?;
        }
    }
    Ok(format!("{checked} closure checks"))
}

fn criterion_3() -> Outcome {
    let mut singles = 0;
    for k in 1..=3 {
        let n = 2 * k + 1;
        for i in 1..=n {
            for j in i + 1..=n {
                let b = ConstantStructure::from_entries(k, &[((i, j), Poly::var(Var::b(i, j)))]).unwrap();
                let jac_ok = Bracket::new(&BracketKind::Deformed(b.clone())).jacobi_residuals().is_empty();
                let adm = is_admissible_pair(k, i, j);
                ensure(jac_ok == adm, || format!("k={k} pair ({i},{j}): jacobi {jac_ok}, admissible {adm}"))?;
                ensure(jacobi_violations(&b).is_empty() == adm, || format!("classifier disagrees at ({i},{j})"))?;
                singles += 1;
            }
        }
        let b = ConstantStructure::symbolic(k);
        for kind in [
            BracketKind::Quadratic { k },
            BracketKind::Constant(b.clone()),
            BracketKind::Deformed(b.clone()),
            BracketKind::Pencil(b.clone()),
        ] {
            let r = Bracket::new(&kind).jacobi_residuals();
            ensure(r.is_empty(), || format!("k={k}: {} nonzero jacobiators for {kind:?}", r.len()))?;
        }
        // a second, independent symbolic structure
        let other: Vec<((usize, usize), Poly)> = admissible_pairs(k)
            .into_iter()
            .enumerate()
            .map(|(p, pair)| (pair, Poly::var(Var::f(p + 1))))
            .collect();
        let c = ConstantStructure::from_entries(k, &other).unwrap();
        let r = Bracket::new(&BracketKind::Deformed(b.plus(&c))).jacobi_residuals();
        ensure(r.is_empty(), || format!("k={k}: sum of two structures is not Poisson"))?;
    }
    Ok(format!("{singles} single-pair supports"))
}

fn criterion_4() -> Outcome {
    let mut at4 = Duration::ZERO;
    for k in 1..=4 {
        let start = Instant::now();
        let b = ConstantStructure::symbolic(k);
        let cas = deformed_casimir(&b);
        let br = Bracket::new(&BracketKind::Deformed(b));
        for i in 1..=2 * k + 1 {
            let r = br.apply(&Poly::x(i), &cas).map_err(|e| e.to_string())?;
            ensure(r.is_zero(), || format!("k={k}: {{x{i}, K}} = {r}"))?;
        }
        if k == 4 {
            at4 = start.elapsed();
        }
    }
    ensure(at4 < Duration::from_secs(300), || format!("k=4 took {at4:?}"))?;
    Ok(format!("k=4 in {at4:.2?}"))
}

fn criterion_5() -> Outcome {
    for k in 1..=3 {
        let b = ConstantStructure::symbolic(k);
        let expansion = k_b_expansion(&b);
        let via_exp: Vec<Poly> = (0..=k).map(|l| k_b_via_exp(&b, l)).collect();
        let from_chi = k_b_from_char_poly(k, &char_poly_lax(&b));
        ensure(expansion == via_exp, || format!("k={k}: expansion differs from exponential route"))?;
        ensure(expansion == from_chi, || format!("k={k}: expansion differs from characteristic polynomial"))?;
    }
    Ok("k = 1..3".into())
}

fn criterion_6() -> Outcome {
    for k in 1..=3 {
        let b = ConstantStructure::symbolic(k);
        let r = lax_residual(&b);
        ensure(r.is_zero(), || format!("k={k}: residual nonzero at {:?}", r.nonzero_entries()))?;
        ensure(det_lax(&b) == det_lax_expected(&b), || format!("k={k}: determinant formula fails"))?;
        let chi = char_poly_lax(&b);
        ensure(chi == char_poly_expected(&b), || format!("k={k}: characteristic polynomial formula fails"))?;
        ensure(is_weight_homogeneous(k, &chi), || format!("k={k}: not weight homogeneous"))?;
    }
    Ok("k = 1..3".into())
}

fn criterion_7() -> Outcome {
    for k in 1..=4 {
        let b = ConstantStructure::symbolic(k);
        let kb = k_b_expansion(&b);
        let deformed = Bracket::new(&BracketKind::Deformed(b.clone()));
        let unit = Bracket::new(&BracketKind::Constant(ConstantStructure::unit(k)));
        for l in 0..=k {
            for m in l + 1..=k {
                for (name, br) in [("deformed", &deformed), ("unit", &unit)] {
                    let r = br.apply(&kb[l], &kb[m]).map_err(|e| e.to_string())?;
                    ensure(r.is_zero(), || format!("k={k}: {{K{l}, K{m}}} under {name} bracket is nonzero"))?;
                }
            }
        }
        if k <= 3 {
            for l in 0..k {
                let lhs = deformed.hamiltonian_vector_field(&kb[l]).map_err(|e| e.to_string())?;
                let rhs = unit.hamiltonian_vector_field(&kb[l + 1]).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("k={k}: ladder fails at ell={l}"))?;
            }
        }
        let n = 2 * k + 1;
        let pt = generic_point(n, n, DEFAULT_SEED);
        let numeric = numeric_structure(k, &pt.b);
        let fs = k_b_expansion(&numeric);
        let rank = jacobian_rank(&fs, n, &x_assignment(&pt.x)).map_err(|e| e.to_string())?;
        ensure(rank == k + 1, || format!("k={k}: jacobian rank {rank}"))?;
    }
    Ok("involution k = 1..4, ladder k = 1..3, rank k+1".into())
}

fn criterion_8() -> Outcome {
    for k in 1..=4 {
        let r = recursion_report(&ConstantStructure::symbolic(k));
        ensure(r.ok(), || format!("k={k}: {r:?}"))?;
    }
    Ok("k = 1..4".into())
}

fn criterion_9() -> Outcome {
    for k in 1..=3 {
        let b = ConstantStructure::symbolic(k);
        let pm = poisson_map_table(&b);
        ensure(pm.ok(), || format!("k={k}: bracket table mismatches {:?}", pm.mismatches))?;
        ensure(vs_vector_field_check(&b), || format!("k={k}: chain equations fail"))?;
        let t = vs_equivalence(&b);
        ensure(t.ok(), || format!("k={k}: {t:?}"))?;
    }
    Ok("k = 1..3".into())
}

/// Seeded initial state and deformation constants for `k = 2`.
fn seeded_flow() -> (DeformationC, Vec<f64>) {
    let mut r = rng(DEFAULT_SEED);
    let mut c: Vec<_> = (0..4).map(|_| ratio(r.gen_range(-5..=5), 50)).collect();
    let last = -c.iter().sum::<bilv_core::Rational>();
    c.push(last);
    let x0 = (0..5).map(|_| r.gen_range(0.5..1.5)).collect();
    (DeformationC::new(2, c).unwrap(), x0)
}

fn criterion_10() -> Outcome {
    let (c, x0) = seeded_flow();
    let spec = SystemSpec::new(c).map_err(|e| e.to_string())?;
    let run = |tol: f64| integrate(&spec, &x0, 10.0, &IntegrateOptions::new(tol, tol).stride(0.01));
    let start = Instant::now();
    let base = run(1e-12).map_err(|e| e.to_string())?;
    let el = start.elapsed();
    ensure(el < Duration::from_secs(5), || format!("took {el:?}"))?;
    let worst = base.max_rel_drift.iter().cloned().fold(0.0, f64::max);
    ensure(base.max_rel_drift.iter().all(|&d| d < 1e-8), || format!("drift {:?}", base.max_rel_drift))?;
    let half = run(5e-13).map_err(|e| e.to_string())?;
    let worst_half = half.max_rel_drift.iter().cloned().fold(0.0, f64::max);
    ensure(worst_half < worst, || format!("halving tolerances: {worst:e} -> {worst_half:e}"))?;
    Ok(format!("max drift {worst:.2e} -> {worst_half:.2e} at half tolerance, {el:.2?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("index-set oracle", criterion_1),
        ("index-set maps", criterion_2),
        ("compatibility classification", criterion_3),
        ("deformed Casimir", criterion_4),
        ("three routes to the integrals", criterion_5),
        ("Lax identities", criterion_6),
        ("Liouville integrability", criterion_7),
        ("recursion identities", criterion_8),
        ("Veselov-Shabat equivalence", criterion_9),
        ("numerical conservation", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let el = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name:<32} PASS  ({detail}; {el:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name:<32} FAIL  {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
