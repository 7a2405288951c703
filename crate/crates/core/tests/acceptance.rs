//! Acceptance harness: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use drinfeld_ram::algebra::{make_field, parse_expr, q, qi, ExactRational, FieldDescriptor, Val};
use drinfeld_ram::cli::{sweep, RunConfig};
use drinfeld_ram::conductor::{conductor_from_filtration, global_conductor, j_height, local_conductor, szpiro_check};
use drinfeld_ram::drinfeld::DrinfeldModule;
use drinfeld_ram::herbrand::{compose, heuristic_e, psi_artin_schreier, psi_tame, psi_tower, tower_breaks, PiecewiseLinear};
use drinfeld_ram::newton::lower_hull;
use drinfeld_ram::oracle::{verify_profile, OracleConfig};
use drinfeld_ram::valtower::{classify, TowerCase, ValuationProfile};
use drinfeld_ram::wildgroup::{
    generator_matrix, group_elements, has_exponent_p, is_abelian, shift_matrix, BlockUnipotentMatrix, WildGenerator,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// 1. The family t X + t^i X^q + X^{q²}.
fn family() -> Outcome {
    let mut checked = 0;
    for (p, s) in [(2u32, 1u32), (3, 1), (2, 2)] {
        let f = make_field(p, s).unwrap();
        let qv = f.q() as i64;
        for i in 2..=10i64 {
            if i % p as i64 == 0 {
                continue;
            }
            let a1 = parse_expr(&f, &format!("t^{i}")).unwrap();
            let m = DrinfeldModule::new(a1, parse_expr(&f, "1").unwrap()).unwrap();
            let want_f = q(i * (qv + 1) - qv, qv - 1);
            let got_f = global_conductor(&m);
            let h = j_height(&m);
            let z = szpiro_check(&m);
            let ok = got_f.as_ref() == Ok(&want_f) && h == qi(i * (qv + 1)) && z.as_ref().is_ok_and(|z| z.equality);
            if !ok {
                return outcome(false, format!("q={qv} i={i}: f={got_f:?} (want {want_f}), h_J={h}"));
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} modules: f, h_J exact, Szpiro equality"))
}

fn profile_grid(p: u64) -> Vec<ValuationProfile> {
    let mut out = Vec::new();
    for v0 in [-2i64, -1, 0, 1, 2, 3, 4] {
        for v1 in std::iter::once(None).chain((-4i64..=3).map(Some)) {
            for v2 in -2i64..=4 {
                let v1 = v1.map_or(Val::PlusInfinity, Val::Finite);
                out.push(ValuationProfile::new(p, 1, v0, v1, v2));
            }
        }
    }
    out
}

/// Profiles sitting exactly on a case boundary, where the chain has ties.
fn boundary_profiles(p: u64) -> Vec<ValuationProfile> {
    let f = |v0, v1, v2| ValuationProfile::new(p, 1, v0, Val::Finite(v1), v2);
    match p {
        // vj = v0 q^m, vj = 0, vj = v0 / q^{m−1}
        2 => vec![f(-1, -1, -1), f(-1, -1, 1), f(1, 0, 0), f(0, 0, 0), f(2, 1, 2), f(4, 1, 2)],
        _ => vec![f(-1, -1, -1), f(-1, -2, 1), f(1, 0, 0), f(0, 0, 0), f(3, 1, 3), f(1, 1, 3)],
    }
}

// 2. Newton–Puiseux oracle against the closed forms.
fn oracle() -> Outcome {
    let cfg = OracleConfig::default();
    let mut per_case: BTreeMap<String, usize> = BTreeMap::new();
    let mut runs = 0;
    for p in [2u64, 3] {
        let mut chosen: Vec<ValuationProfile> = boundary_profiles(p);
        let mut count: std::collections::HashMap<TowerCase, usize> = std::collections::HashMap::new();
        for pr in &chosen {
            *count.entry(classify(pr)).or_default() += 1;
        }
        for pr in profile_grid(p) {
            let c = classify(&pr);
            let k = count.entry(c).or_default();
            if *k < 3 && !chosen.contains(&pr) {
                *k += 1;
                chosen.push(pr);
            }
        }
        for pr in &chosen {
            let c = classify(pr);
            for n in 1..=3 {
                runs += 1;
                match verify_profile(pr, n, &cfg) {
                    Ok(r) if r.pass() => {}
                    Ok(r) => return outcome(false, format!("{pr} n={n} {c}: {}", r.first_failure().unwrap())),
                    Err(e) => return outcome(false, format!("{pr} n={n} {c}: {e}")),
                }
            }
            *per_case.entry(format!("q={} {}", pr.q, c.name())).or_default() += 1;
        }
    }
    let thin: Vec<_> = per_case.iter().filter(|(_, &v)| v < 3).collect();
    if per_case.len() != 14 || !thin.is_empty() {
        return outcome(false, format!("case coverage too thin: {per_case:?}"));
    }
    outcome(true, format!("{runs} verifications, {} (q, case) groups with ≥ 3 profiles each", per_case.len()))
}

/// Random wild profiles satisfying the range hypotheses, with their E.
fn wild_profiles(count: usize, seed: u64) -> Vec<(ValuationProfile, TowerCase, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let (p, s) = [(2u64, 1u32), (3, 1), (2, 2)][rng.gen_range(0..3)];
        let v0 = if rng.gen_bool(0.3) { 0 } else { -rng.gen_range(1..=3) };
        let v1 = -rng.gen_range(1..=60);
        let v2 = rng.gen_range(-3..=5);
        let pr = ValuationProfile::new(p, s, v0, Val::Finite(v1), v2);
        let c = classify(&pr);
        if !c.is_wild() || tower_breaks(c, &pr, 1, 1).is_err() {
            continue;
        }
        if let Ok((e, _)) = heuristic_e(&pr, c) {
            out.push((pr, c, e));
        }
    }
    out
}

fn well_formed(psi: &PiecewiseLinear, e: u64, q: u64, n: u32) -> bool {
    psi.is_valid_psi() && psi.has_integer_slopes() && *psi.last_slope() == qi((e * q.pow(n)) as i64)
}

// 3. ψ step composition and the tame/AS/tame factorization.
fn psi_identities() -> Outcome {
    let sample = wild_profiles(30, 3);
    let mut steps = 0;
    let mut deepest = 0;
    for (pr, c, e) in &sample {
        let top = match c {
            TowerCase::InfWild { m } => (*m).min(6),
            _ => 6,
        };
        for n in 1..top {
            let lo = psi_tower(*c, pr, n, *e).unwrap();
            let hi = psi_tower(*c, pr, n + 1, *e).unwrap();
            let r = tower_breaks(*c, pr, n + 1, *e).unwrap().r[n as usize].clone();
            let step = compose(&psi_artin_schreier(pr.q, &r).unwrap(), &lo);
            if step != hi || !well_formed(&hi, *e, pr.q, n + 1) {
                return outcome(false, format!("{pr} {c} n={n}: {step} vs {hi}"));
            }
            steps += 1;
            deepest = deepest.max(n);
        }
    }
    if deepest < 5 {
        return outcome(false, format!("sample never reached n = 5 (max {deepest})"));
    }
    let mut factorizations = 0;
    for (pr, c, _) in sample.iter().filter(|x| matches!(x.1, TowerCase::InfWild { .. })) {
        let qq = pr.q as i64;
        let vj = *pr.vj.finite().unwrap();
        let v_omega = q(-vj + pr.v0 * qq, qq - 1);
        for big_e in (1..=12u64).filter(|x| x % pr.p != 0) {
            let want = psi_tower(*c, pr, 1, big_e).unwrap();
            for e0 in (1..=big_e).filter(|d| big_e % d == 0) {
                for ep in (1..=big_e / e0).filter(|d| (big_e / e0) % d == 0) {
                    let e1 = big_e / e0 / ep;
                    let inner = psi_tame(ep * e0, pr.p).unwrap();
                    let mid = psi_artin_schreier(pr.q, &(&v_omega * qi((ep * e0) as i64))).unwrap();
                    let got = compose(&psi_tame(e1, pr.p).unwrap(), &compose(&mid, &inner));
                    if got != want {
                        return outcome(false, format!("{pr} E={big_e}=({e0},{ep},{e1}): {got} vs {want}"));
                    }
                    factorizations += 1;
                }
            }
        }
    }
    outcome(
        true,
        format!("{} profiles, {steps} step compositions (n ≤ {deepest}), {factorizations} tame/AS/tame factorizations", sample.len()),
    )
}

// 4. The conductor integral does not see E.
fn conductor_consistency() -> Outcome {
    let sample = wild_profiles(60, 4);
    let mut checks = 0;
    for (pr, c, _) in &sample {
        let want = local_conductor(pr);
        let want = match want.value() {
            Some(v) => v.clone(),
            None => return outcome(false, format!("{pr}: closed form unsupported ({want})")),
        };
        for e in 1..=6u64 {
            let r1 = tower_breaks(*c, pr, 1, e).unwrap().r[0].clone();
            let got = conductor_from_filtration(&(r1 / qi(e as i64)));
            if got != want {
                return outcome(false, format!("{pr} E={e}: {got} vs {want}"));
            }
            checks += 1;
        }
    }
    outcome(true, format!("{} wild profiles × E ∈ 1..6: {checks} exact matches", sample.len()))
}

fn int_mul(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|k| (0..n).map(|j| a[i][j] * b[j][k]).sum()).collect()).collect()
}

fn sigma(levels: u32, l: u32, u: u32) -> BlockUnipotentMatrix {
    if u == 0 {
        return BlockUnipotentMatrix::identity(2 * levels as usize);
    }
    generator_matrix(levels, &WildGenerator { l, u }).unwrap()
}

// 5. The wild group as an F_p-vector space of block-unipotent matrices.
fn wild_group() -> Outcome {
    let mut groups = 0;
    for (p, s) in [(2u32, 1u32), (3, 1), (2, 2)] {
        let f: FieldDescriptor = make_field(p, s).unwrap();
        for levels in 1..=3u32 {
            let g = group_elements(TowerCase::FinWild, &f, levels).unwrap();
            let want = (p as usize).pow(s * levels);
            if g.order() != want || !is_abelian(&g, &f) || !has_exponent_p(&g, &f) {
                return outcome(false, format!("q={} levels={levels}: order {} (want {want})", f.q(), g.order()));
            }
            for l in 1..=levels {
                for u in f.elements().filter(|&u| u != 0) {
                    for v in f.elements().filter(|&v| v != 0) {
                        let lhs = sigma(levels, l, u).mul(&sigma(levels, l, v), &f);
                        if lhs != sigma(levels, l, f.add(u, v)) {
                            return outcome(false, format!("q={} σ_{{{l},{u}}}σ_{{{l},{v}}}", f.q()));
                        }
                    }
                }
                for l2 in 1..=levels {
                    let a = int_mul(&shift_matrix(levels as usize, l), &shift_matrix(levels as usize, l2));
                    if a != shift_matrix(levels as usize, l + l2 - 1) {
                        return outcome(false, format!("A_{{{levels},{l}}} A_{{{levels},{l2}}}"));
                    }
                }
            }
            groups += 1;
        }
    }
    outcome(true, format!("{groups} groups enumerated: order, abelian, exponent p, σ and shift laws"))
}

// 6. Random modules over F_2(t) and F_3(t).
fn szpiro_sweep() -> Outcome {
    let mut parts = Vec::new();
    for p in [2u32, 3] {
        let cfg = RunConfig { p, szpiro_samples: 200, seed: 2024, ..RunConfig::default() };
        let r = sweep(&cfg).unwrap();
        if r.rows.len() != 200 {
            return outcome(false, format!("p={p}: only {} admissible of {} drawn", r.rows.len(), r.drawn));
        }
        let bad = r.rows.iter().find(|x| !x.report.holds || !x.report.predicate_consistent() || (x.report.boundary && !x.report.equality));
        if let Some(x) = bad {
            let z = &x.report;
            return outcome(false, format!("p={p} a1={} a2={}: {} vs {}", x.module.a1(), x.module.a2(), z.lhs, z.rhs));
        }
        let eq = r.rows.iter().filter(|x| x.report.equality).count();
        let boundary = r.rows.iter().filter(|x| x.report.boundary).count();
        parts.push(format!("F_{p}: 200 hold, {eq} equal ({boundary} boundary)"));
    }
    outcome(true, parts.join("; "))
}

/// Quadratic brute force: a pair is a hull edge when every point is on or
/// above its line and no point outside the pair's span touches the line.
fn brute_hull(pts: &[(u64, Val<ExactRational>)]) -> Option<Vec<u64>> {
    let mut fin: Vec<(u64, ExactRational)> = Vec::new();
    for (x, y) in pts {
        if let Val::Finite(y) = y {
            match fin.iter_mut().find(|p| p.0 == *x) {
                Some(p) if *y < p.1 => p.1 = y.clone(),
                Some(_) => {}
                None => fin.push((*x, y.clone())),
            }
        }
    }
    if fin.len() < 2 {
        return None;
    }
    let line = |a: &(u64, ExactRational), b: &(u64, ExactRational), x: u64| {
        &a.1 + (&b.1 - &a.1) * qi(x as i64 - a.0 as i64) / qi(b.0 as i64 - a.0 as i64)
    };
    let mut verts = Vec::new();
    for a in &fin {
        for b in fin.iter().filter(|b| b.0 > a.0) {
            let edge = fin.iter().all(|c| {
                let l = line(a, b, c.0);
                c.1 > l || (c.1 == l && c.0 >= a.0 && c.0 <= b.0)
            });
            if edge {
                verts.push(a.0);
                verts.push(b.0);
            }
        }
    }
    verts.sort_unstable();
    verts.dedup();
    Some(verts)
}

// 7. lower_hull against brute force.
fn hull_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut degenerate = 0;
    for k in 0..1000 {
        let size = rng.gen_range(1..=8);
        let pts: Vec<(u64, Val<ExactRational>)> = (0..size)
            .map(|_| {
                let x = rng.gen_range(0..=10u64);
                let y = if rng.gen_bool(0.1) { Val::PlusInfinity } else { Val::Finite(q(rng.gen_range(-12..=12), rng.gen_range(1..=4))) };
                (x, y)
            })
            .collect();
        let fast = lower_hull(&pts).ok().map(|h| h.vertex_xs());
        let slow = brute_hull(&pts);
        if fast != slow {
            return outcome(false, format!("set {k}: {fast:?} vs {slow:?} for {pts:?}"));
        }
        degenerate += slow.is_none() as usize;
    }
    outcome(true, format!("1000 random sets agree ({degenerate} degenerate)"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, Duration); 7] = [
        ("family conductor and J-height", family, Duration::from_secs(1)),
        ("oracle equivalence", oracle, Duration::from_secs(300)),
        ("ψ-calculus identities", psi_identities, Duration::from_secs(60)),
        ("conductor E-independence", conductor_consistency, Duration::from_secs(60)),
        ("wild group laws", wild_group, Duration::from_secs(60)),
        ("Szpiro sweep", szpiro_sweep, Duration::from_secs(30)),
        ("Newton hull oracle", hull_oracle, Duration::from_secs(60)),
    ];
    let mut failed = Vec::new();
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let el = t.elapsed();
        let pass = o.pass && el <= *limit;
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{name}]: {verdict} ({}; {:.2?}, limit {:?})", k + 1, o.detail, el, limit);
        if !pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
