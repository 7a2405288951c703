//! Per-place analysis and the run report in text and CSV form.

use super::config::{ConfigError, OutputFormat, RunConfig};
use crate::algebra::{bad_places, ExactRational, FieldDescriptor, Place, Poly, Val};
use crate::conductor::{j_height, local_conductor, profile_with, szpiro_check, uniformizer_for, LocalConductorResult, SzpiroReport};
use crate::drinfeld::{j_invariant, DrinfeldModule};
use crate::herbrand::{heuristic_e, psi_tower, PiecewiseLinear};
use crate::oracle::{verify_module, OracleConfig};
use crate::valtower::{classify, ordering, step_polygon, xi_val, OrderEntry, PolygonShape, TowerCase, ValuationProfile};
use crate::wildgroup::{generator_matrix, group_elements, group_levels, BlockUnipotentMatrix, WildGenerator};
use std::fmt::Write;

/// "num/den", always with the denominator.
pub fn fmt_q(x: &ExactRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn fmt_val(v: &Val<i64>) -> String {
    match v {
        Val::Finite(x) => x.to_string(),
        Val::PlusInfinity => "inf".into(),
    }
}

#[derive(Clone, Debug)]
pub enum OracleOutcome {
    Off,
    Skipped(String),
    Pass { n: u32 },
    Fail { n: u32, reason: String },
    /// The oracle could not finish (cap or precision); not a mismatch.
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct WildGroupSummary {
    pub levels: u32,
    pub order: Result<usize, String>,
    pub generators: Vec<(WildGenerator, BlockUnipotentMatrix)>,
}

#[derive(Clone, Debug)]
pub struct PlaceReport {
    pub place: Place,
    pub degree: u32,
    pub pi: Poly,
    pub profile: ValuationProfile,
    pub case: TowerCase,
    pub xi: Result<Vec<(i64, ExactRational)>, String>,
    pub chain: Result<Vec<OrderEntry>, String>,
    pub shapes: Result<Vec<(i64, PolygonShape)>, String>,
    pub e: Result<(u64, bool), String>,
    pub psi: Result<PiecewiseLinear, String>,
    pub group: Option<WildGroupSummary>,
    pub local: LocalConductorResult,
    pub oracle: OracleOutcome,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub q: u32,
    pub n_max: u32,
    pub a1: String,
    pub a2: String,
    pub j: String,
    pub h_j: ExactRational,
    pub places: Vec<PlaceReport>,
    /// Szpiro data, or the unsupported place that blocks the global conductor.
    pub szpiro: Result<SzpiroReport, String>,
}

impl RunReport {
    pub fn oracle_failed(&self) -> bool {
        self.places.iter().any(|p| matches!(p.oracle, OracleOutcome::Fail { .. }))
    }

    pub fn szpiro_violated(&self) -> bool {
        matches!(&self.szpiro, Ok(s) if !s.holds)
    }
}

/// Largest n the oracle is run at for a given q.
pub fn oracle_depth(q: u32) -> u32 {
    match q {
        2 => 4,
        3 => 3,
        _ => 2,
    }
}

fn tower_tables(
    case: TowerCase,
    pr: &ValuationProfile,
    n: u32,
) -> (Result<Vec<(i64, ExactRational)>, String>, Result<Vec<(i64, PolygonShape)>, String>) {
    let mut xi = Vec::new();
    let mut shapes = Vec::new();
    for k in 1..=n as i64 {
        for i in [-k, k] {
            match xi_val(case, pr, i) {
                Ok(v) => xi.push((i, v)),
                Err(e) => return (Err(e.to_string()), Err(e.to_string())),
            }
            match step_polygon(case, pr, i) {
                Ok(s) => shapes.push((i, s)),
                Err(e) => return (Ok(xi), Err(e.to_string())),
            }
        }
    }
    (Ok(xi), Ok(shapes))
}

fn wild_summary(case: TowerCase, f: &FieldDescriptor, n: u32) -> Option<WildGroupSummary> {
    let levels = group_levels(case, n).ok()?;
    let order = group_elements(case, f, n).map(|g| g.order()).map_err(|e| e.to_string());
    // σ_{l,u} for u running over an F_p-basis of F_q
    let mut generators = Vec::new();
    for l in 1..=levels {
        for k in 0..f.s() {
            let g = WildGenerator { l, u: f.p().pow(k) };
            if let Ok(m) = generator_matrix(levels, &g) {
                generators.push((g, m));
            }
        }
    }
    Some(WildGroupSummary { levels, order, generators })
}

pub fn analyse_place(m: &DrinfeldModule, place: &Place, cfg: &RunConfig) -> PlaceReport {
    let pi = uniformizer_for(m, place);
    let profile = profile_with(m, place, &pi);
    let case = classify(&profile);
    let n = cfg.n_max;
    let (xi, shapes) = tower_tables(case, &profile, n);
    let chain = ordering(case, &profile, n).map_err(|e| e.to_string());
    let e = heuristic_e(&profile, case).map_err(|e| e.to_string());
    let psi = match (&e, case.is_wild()) {
        (Ok((ev, _)), true) => psi_tower(case, &profile, n, *ev).map_err(|x| x.to_string()),
        (Err(msg), true) => Err(msg.clone()),
        (_, false) => psi_tower(case, &profile, n, 1).map_err(|x| x.to_string()),
    };
    let group = if case.is_wild() { wild_summary(case, m.field(), n) } else { None };
    let local = local_conductor(&profile);
    let oracle = if !cfg.oracle {
        OracleOutcome::Off
    } else if place.degree() > 1 {
        OracleOutcome::Skipped(format!("place of degree {}", place.degree()))
    } else {
        let depth = n.min(oracle_depth(m.q()));
        let oc = OracleConfig { precision: cfg.oracle_precision.clone(), ext_cap: cfg.oracle_ext_cap, ..OracleConfig::default() };
        match verify_module(m, place, &pi, depth, &oc) {
            Ok(r) if r.pass() => OracleOutcome::Pass { n: depth },
            Ok(r) => OracleOutcome::Fail { n: depth, reason: r.first_failure().unwrap_or_default() },
            Err(e) => OracleOutcome::Inconclusive(e.to_string()),
        }
    };
    PlaceReport { place: place.clone(), degree: place.degree(), pi, profile, case, xi, chain, shapes, e, psi, group, local, oracle }
}

/// Places analysed: the explicit list, or the bad places of j plus infinity.
pub fn run_places(m: &DrinfeldModule, cfg: &RunConfig) -> Result<Vec<Place>, ConfigError> {
    if let Some(list) = cfg.explicit_places(m.field())? {
        return Ok(list);
    }
    let mut places = bad_places(&j_invariant(m));
    if !places.contains(&Place::Infinite) {
        places.push(Place::Infinite);
    }
    places.sort_by(|a, b| a.cmp_order(b));
    Ok(places)
}

pub fn run(cfg: &RunConfig) -> Result<RunReport, ConfigError> {
    let m = cfg.module()?;
    let places = run_places(&m, cfg)?;
    let reports = places.iter().map(|p| analyse_place(&m, p, cfg)).collect();
    Ok(RunReport {
        q: m.q(),
        n_max: cfg.n_max,
        a1: m.a1().to_string(),
        a2: m.a2().to_string(),
        j: j_invariant(&m).to_string(),
        h_j: j_height(&m),
        places: reports,
        szpiro: szpiro_check(&m).map_err(|e| e.to_string()),
    })
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

fn chain_text(chain: &[OrderEntry]) -> String {
    let mut s = String::new();
    for (k, e) in chain.iter().enumerate() {
        let _ = write!(s, "ξ_{}", e.index);
        if k + 1 < chain.len() {
            s.push_str(if e.tie_with_next { " = " } else { " > " });
        }
    }
    s
}

fn matrix_text(m: &BlockUnipotentMatrix, f: &FieldDescriptor, indent: &str) -> String {
    let mut s = String::new();
    for r in 0..m.size() {
        let row: Vec<String> = (0..m.size()).map(|c| f.format_elem(m.get(r, c))).collect();
        let _ = writeln!(s, "{indent}[{}]", row.join(" "));
    }
    s
}

fn oracle_text(o: &OracleOutcome) -> String {
    match o {
        OracleOutcome::Off => "off".into(),
        OracleOutcome::Skipped(r) => format!("skipped ({r})"),
        OracleOutcome::Pass { n } => format!("PASS (n={n})"),
        OracleOutcome::Fail { n, reason } => format!("FAIL (n={n}): {reason}"),
        OracleOutcome::Inconclusive(r) => format!("inconclusive: {r}"),
    }
}

pub fn render_text(r: &RunReport, f: &FieldDescriptor) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "module over F_{}(t): a1 = {}, a2 = {}", r.q, r.a1, r.a2);
    let _ = writeln!(s, "j = {}", r.j);
    for p in &r.places {
        let _ = writeln!(s, "\nplace {} (degree {}), π = {}", p.place, p.degree, p.pi);
        let pr = &p.profile;
        let _ = writeln!(s, "  profile: v0={} v1={} v2={} vj={}", pr.v0, fmt_val(&pr.v1), pr.v2, fmt_val(&pr.vj));
        let _ = writeln!(s, "  case: {}", p.case);
        match &p.xi {
            Ok(xi) => {
                let _ = writeln!(s, "  v(ξ_i): {}", join(xi, |(i, v)| format!("{i}: {v}")));
            }
            Err(e) => {
                let _ = writeln!(s, "  v(ξ_i): unavailable ({e})");
            }
        }
        match &p.chain {
            Ok(c) => {
                let _ = writeln!(s, "  ordering: {}", chain_text(c));
            }
            Err(e) => {
                let _ = writeln!(s, "  ordering: unavailable ({e})");
            }
        }
        match &p.shapes {
            Ok(sh) => {
                let _ = writeln!(s, "  step polygons: {}", join(sh, |(i, v)| format!("{i}: {v}")));
            }
            Err(e) => {
                let _ = writeln!(s, "  step polygons: unavailable ({e})");
            }
        }
        if p.case.is_wild() {
            match &p.e {
                Ok((e, exact)) => {
                    let _ = writeln!(s, "  E = {e} ({})", if *exact { "exact" } else { "heuristic lower bound" });
                }
                Err(e) => {
                    let _ = writeln!(s, "  E: unavailable ({e})");
                }
            }
        }
        match &p.psi {
            Ok(psi) => {
                let _ = writeln!(s, "  ψ: {psi}");
                let _ = writeln!(s, "  ψ breaks: {}", join(&psi.breaks(), |b| b.to_string()));
            }
            Err(e) => {
                let _ = writeln!(s, "  ψ: unavailable ({e})");
            }
        }
        if let Some(g) = &p.group {
            let order = match &g.order {
                Ok(o) => o.to_string(),
                Err(e) => format!("not enumerated ({e})"),
            };
            let _ = writeln!(s, "  wild group: {} levels, order {order}", g.levels);
            for (gen, m) in &g.generators {
                let _ = writeln!(s, "  σ_{{{},{}}}:", gen.l, f.format_elem(gen.u));
                s.push_str(&matrix_text(m, f, "    "));
            }
        }
        let _ = writeln!(s, "  local conductor: {}", p.local);
        let _ = writeln!(s, "  oracle: {}", oracle_text(&p.oracle));
    }
    let _ = writeln!(s, "\nh_J = {}", r.h_j);
    match &r.szpiro {
        Ok(z) => {
            let _ = writeln!(s, "global conductor f = {}", z.conductor);
            let rel = if z.equality { "=" } else if z.holds { "<" } else { ">" };
            let _ = writeln!(s, "Szpiro: h_J = {} {rel} f(q−1) + q = {}", z.lhs, z.rhs);
            let _ = writeln!(
                s,
                "  holds: {}, equality: {}, strict predicate: {}, boundary v(j) = v0 q: {}",
                z.holds, z.equality, z.strict_predicate, z.boundary
            );
        }
        Err(e) => {
            let _ = writeln!(s, "global conductor: unsupported ({e})");
        }
    }
    s
}

pub const RUN_CSV_HEADER: &str = "place,deg,v0,v1,v2,vj,case,m,E,E_exact,conductor";

pub fn render_csv(r: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{RUN_CSV_HEADER}");
    for p in &r.places {
        let pr = &p.profile;
        let (e, exact) = match (&p.e, p.case.is_wild()) {
            (Ok((e, x)), true) => (e.to_string(), x.to_string()),
            _ => (String::new(), String::new()),
        };
        let cond = match &p.local {
            LocalConductorResult::Value(v) => fmt_q(v),
            LocalConductorResult::Unsupported(_) => "unsupported".into(),
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{e},{exact},{cond}",
            p.place,
            p.degree,
            pr.v0,
            fmt_val(&pr.v1),
            pr.v2,
            fmt_val(&pr.vj),
            p.case.name(),
            p.case.m().map_or(String::new(), |m| m.to_string())
        );
    }
    // global rows: the quantity goes in `case`, its value in `conductor`
    let mut global = |name: &str, value: String| {
        let _ = writeln!(s, "global,,,,,,{name},,,,{value}");
    };
    global("h_J", fmt_q(&r.h_j));
    match &r.szpiro {
        Ok(z) => {
            global("f", fmt_q(&z.conductor));
            global("szpiro_lhs", fmt_q(&z.lhs));
            global("szpiro_rhs", fmt_q(&z.rhs));
            global("szpiro_holds", z.holds.to_string());
            global("szpiro_equality", z.equality.to_string());
            global("szpiro_boundary", z.boundary.to_string());
        }
        Err(_) => global("f", "unsupported".into()),
    }
    for p in &r.places {
        let v = match &p.oracle {
            OracleOutcome::Off => continue,
            OracleOutcome::Skipped(_) => "skipped".to_string(),
            OracleOutcome::Pass { .. } => "PASS".into(),
            OracleOutcome::Fail { .. } => "FAIL".into(),
            OracleOutcome::Inconclusive(_) => "inconclusive".into(),
        };
        global(&format!("oracle[{}]", p.place), v);
    }
    s
}

pub fn render(r: &RunReport, f: &FieldDescriptor, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => render_text(r, f),
        OutputFormat::Csv => render_csv(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    fn cfg(a1: &str, a2: &str) -> RunConfig {
        RunConfig { a1: a1.into(), a2: a2.into(), ..RunConfig::default() }
    }

    #[test]
    fn run_examples() {
        let r = run(&cfg("t^2", "1")).unwrap();
        let inf = r.places.iter().find(|p| p.place.is_infinite()).unwrap();
        assert_eq!(inf.case, TowerCase::InfWild { m: 1 });
        assert_eq!(inf.local, LocalConductorResult::Value(q(5, 2)));
        let z = r.szpiro.as_ref().unwrap();
        assert!(z.equality && z.lhs == qi(8));

        let r = run(&cfg("1/(t-1)", "1")).unwrap();
        let z = r.szpiro.as_ref().unwrap();
        assert_eq!((z.lhs.clone(), z.rhs.clone(), z.equality), (qi(4), qi(7), false));
        let p = r.places.iter().find(|p| p.place.to_string() == "t+2").unwrap();
        assert_eq!(p.local, LocalConductorResult::Value(qi(2)));

        let r = run(&cfg("t", "t")).unwrap();
        assert!(r.places.iter().all(|p| p.local == LocalConductorResult::Value(qi(0))));
        let z = r.szpiro.as_ref().unwrap();
        assert!(z.equality && z.boundary);
    }

    #[test]
    fn csv_shape_and_determinism() {
        let mut c = cfg("t^2", "1");
        c.oracle = true;
        let a = render_csv(&run(&c).unwrap());
        let b = render_csv(&run(&c).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(RUN_CSV_HEADER));
        assert!(a.contains("inf,1,-1,-2,0,-8,InfWild,1,2,false,5/2"));
        assert!(a.contains("global,,,,,,f,,,,5/2"));
        assert!(a.contains("global,,,,,,oracle[inf],,,,PASS"));
        let f = c.field().unwrap();
        let t = render_text(&run(&c).unwrap(), &f);
        assert!(t.contains("ψ: y on [-1,0]; 2y on [0,5/2]; 6y-10 on [5/2,inf]"));
    }
}
