use std::fmt::Write;

use alphasurf::alpha::{
    ratio_text, tian_verdict, Alpha1, AlphaError, AlphaOptions, AlphaReport, TianVerdict, WorstSingularity,
};
use alphasurf::germ::{classify_a, germ_multiplicity, lct_of_germ, AClass, CurveGerm, GermError};
use alphasurf::groebner::PrimeVerdict;
use alphasurf::surface::{
    classify_quartic_tangent_section, hessian_curve_smooth, hessian_rank_locus_empty, incidence_conditions, is_smooth,
    monomial_text, star_point_scan, tangent_section, worst_a_scan, CheckOptions, EmptinessReport, Grade,
    IncidenceLevel, ProjectiveSurface, RationalRun, SurfaceError, SurfacePoint, WorstA,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Context, Outcome};

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Timeout(String),
    Compute(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "bad input: {m}"),
            Failure::Timeout(m) => write!(f, "timeout: {m}"),
            Failure::Compute(m) => write!(f, "{m}"),
        }
    }
}

impl From<SurfaceError> for Failure {
    fn from(e: SurfaceError) -> Self {
        if e.is_timeout() {
            Failure::Timeout(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

impl From<AlphaError> for Failure {
    fn from(e: AlphaError) -> Self {
        if e.is_timeout() {
            Failure::Timeout(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

impl From<GermError> for Failure {
    fn from(e: GermError) -> Self {
        Failure::Compute(e.to_string())
    }
}

pub fn timeout_outcome(msg: &str) -> Outcome {
    Outcome {
        summary: format!("timeout: {msg}\n"),
        json: json!({ "status": "timeout", "message": msg }),
        proved: false,
    }
}

fn to_json<T: Serialize>(value: &T, ctx: &Context) -> Value {
    let mut v = serde_json::to_value(value).expect("reports serialize");
    if ctx.no_timings {
        zero_timings(&mut v);
    }
    v
}

/// Set every runtime in a report to 0.
fn zero_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                match k.as_str() {
                    "runtime_ms" | "rational_ms" => *x = json!(0),
                    // (m, verdict, milliseconds) triples
                    "steps" => {
                        for step in x.as_array_mut().into_iter().flatten() {
                            if let Some(ms) = step.as_array_mut().and_then(|s| s.get_mut(2)) {
                                *ms = json!(0);
                            }
                        }
                    }
                    _ => zero_timings(x),
                }
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(zero_timings),
        _ => {}
    }
}

fn checks(over_q: bool, ctx: &Context) -> CheckOptions {
    CheckOptions { primes: ctx.primes.clone(), over_q, budget: ctx.budget.clone() }
}

fn verdict_text(v: &PrimeVerdict) -> String {
    match v {
        PrimeVerdict::Solvable => "nonempty".into(),
        PrimeVerdict::Unsolvable => "empty".into(),
        PrimeVerdict::Timeout { basis_size } => format!("timeout (basis size {basis_size})"),
        PrimeVerdict::BadReduction { coefficient } => format!("bad reduction ({coefficient})"),
    }
}

fn ms(ctx: &Context, ms: u64) -> String {
    if ctx.no_timings {
        String::new()
    } else {
        format!(" ({ms} ms)")
    }
}

fn grade_text(g: Grade) -> &'static str {
    match g {
        Grade::Proof => "proof",
        Grade::Evidence => "evidence",
    }
}

/// Summary of an emptiness check; `yes` answers "is the locus empty?".
fn emptiness_summary(title: &str, yes: &str, no: &str, r: &EmptinessReport, ctx: &Context) -> String {
    let answer = match r.empty {
        Some(true) => yes,
        Some(false) => no,
        None => "undecided",
    };
    let mut out = format!("{title}: {answer} ({})\n", grade_text(r.grade));
    for p in &r.primes {
        let _ = writeln!(out, "  mod {}: {}{}", p.prime, verdict_text(&p.verdict), ms(ctx, p.runtime_ms));
    }
    let q = match r.rational {
        RationalRun::NotRun => None,
        RationalRun::Empty => Some("empty"),
        RationalRun::NonEmpty => Some("nonempty"),
        RationalRun::Timeout => Some("timeout"),
    };
    if let Some(q) = q {
        let _ = writeln!(out, "  over Q: {q}{}", ms(ctx, r.rational_ms));
    }
    out
}

fn emptiness_outcome(title: &str, yes: &str, no: &str, r: &EmptinessReport, ctx: &Context) -> Outcome {
    Outcome {
        summary: emptiness_summary(title, yes, no, r, ctx),
        json: to_json(r, ctx),
        proved: r.empty.is_some() && r.grade == Grade::Proof,
    }
}

pub fn smooth(s: &ProjectiveSurface, over_q: bool, ctx: &Context) -> Result<Outcome, Failure> {
    ctx.progress("singular locus");
    let r = is_smooth(s, &checks(over_q, ctx))?;
    Ok(emptiness_outcome("smooth", "yes", "no", &r, ctx))
}

pub fn hessian_curve(s: &ProjectiveSurface, over_q: bool, ctx: &Context) -> Result<Outcome, Failure> {
    ctx.progress("singular locus of the Hessian curve");
    let r = hessian_curve_smooth(s, &checks(over_q, ctx))?;
    let mut out = emptiness_outcome("Hessian curve smooth", "yes", "no", &r.singular_locus, ctx);
    out.summary = format!("Hessian degree {}\n{}", r.hessian_degree, out.summary);
    out.json = to_json(&r, ctx);
    Ok(out)
}

pub fn hessian_rank(s: &ProjectiveSurface, rank: u32, over_q: bool, ctx: &Context) -> Result<Outcome, Failure> {
    ctx.progress(&format!("Hessian rank <= {rank} locus"));
    let r = hessian_rank_locus_empty(s, rank, &checks(over_q, ctx))?;
    let title = format!("Hessian rank <= {rank} nowhere on the surface");
    Ok(emptiness_outcome(&title, "yes", "no", &r, ctx))
}

pub fn star_points(s: &ProjectiveSurface, ctx: &Context) -> Result<Outcome, Failure> {
    ctx.progress("star points");
    let scan = star_point_scan(s, &ctx.budget)?;
    let mut summary = format!("rational star points: {}\n", scan.points.len());
    for p in &scan.points {
        let _ = writeln!(summary, "  {p}");
    }
    if scan.irrational {
        summary.push_str("  further star points with irrational coordinates\n");
    }
    if scan.positive_dimensional {
        summary.push_str("  the star points form a curve\n");
    }
    Ok(Outcome { summary, json: to_json(&scan, ctx), proved: true })
}

fn worst_text(w: &WorstA) -> String {
    match w {
        WorstA::Found(m) => format!("A_{m}"),
        WorstA::None => "no A_m".into(),
        WorstA::Timeout(m) => format!("timeout at m = {m}"),
        WorstA::BadReduction => "bad reduction".into(),
    }
}

pub fn worst_a(s: &ProjectiveSurface, max_m: u32, ctx: &Context) -> Result<Outcome, Failure> {
    let progress = |line: &str| ctx.progress(line);
    let scan = worst_a_scan(s, &ctx.primes, max_m, &ctx.budget, &progress)?;
    let consensus = scan.consensus().cloned();
    let mut summary = format!(
        "worst A_m (m <= {max_m}): {}\n",
        consensus.as_ref().map_or_else(|| "primes disagree or did not finish".into(), worst_text)
    );
    if !scan.skipped_rotations.is_empty() {
        let _ = writeln!(summary, "  skipped rotations: {:?}", scan.skipped_rotations);
    }
    for r in &scan.records {
        let witnessed = r.witnessed.map_or_else(String::new, |m| format!(", witnessed A_{m}"));
        let _ = writeln!(summary, "  mod {}: {}{witnessed}{}", r.prime, worst_text(&r.worst), ms(ctx, r.runtime_ms));
    }
    // only "no A_m at all" is a certificate; a solvable system is an estimate
    let proved = consensus == Some(WorstA::None);
    Ok(Outcome { summary, json: to_json(&scan, ctx), proved })
}

pub enum View {
    Alpha1,
    Bounds,
    Full,
}

fn alpha1_text(a: &Alpha1) -> String {
    match a {
        Alpha1::Exact { value } => ratio_text::to_text(value),
        Alpha1::Interval { lower, lower_strict, upper, reason } => {
            let open = if *lower_strict { "(" } else { "[" };
            format!("{open}{}, {}] ({reason})", ratio_text::to_text(lower), ratio_text::to_text(upper))
        }
    }
}

fn worst_singularity_text(w: &WorstSingularity) -> String {
    match w {
        WorstSingularity::StarPoint { points } if points.is_empty() => "star point".into(),
        WorstSingularity::StarPoint { points } => format!("star point at {}", points.join(", ")),
        WorstSingularity::A { m } => format!("A_{m}"),
        WorstSingularity::AtLeastA { m } => format!("A_{m} or worse"),
        WorstSingularity::DoublePointsOnly => "double points only".into(),
        WorstSingularity::Unknown => "unknown".into(),
    }
}

fn report_summary(r: &AlphaReport, view: &View, ctx: &Context) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "degree {}", r.degree);
    if !matches!(view, View::Bounds) {
        let _ = writeln!(out, "alpha_1: {}", alpha1_text(&r.alpha1));
        let _ = writeln!(out, "worst singularity: {}", worst_singularity_text(&r.worst_singularity));
    }
    if !matches!(view, View::Alpha1) {
        out.push_str("upper bounds on alpha:\n");
        for b in &r.bounds {
            let _ = writeln!(out, "  {} {:?}: {}", ratio_text::to_text(&b.value), b.provenance, b.detail);
        }
    }
    if matches!(view, View::Full) {
        let verdict = match r.tian_verdict {
            TianVerdict::CounterexampleEvidence => "counterexample evidence",
            TianVerdict::Consistent => "consistent",
            TianVerdict::Unknown => "unknown",
        };
        let _ = writeln!(out, "verdict: {verdict}");
        for e in &r.evidence {
            let _ = writeln!(out, "  {} mod {}: {}{}", e.check, e.prime, e.verdict, ms(ctx, e.runtime_ms));
        }
        for n in &r.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
    let _ = writeln!(out, "grade: {}", grade_text(r.grade));
    out
}

pub fn report(
    s: &ProjectiveSurface,
    max_m: u32,
    sqrt_k: u64,
    over_q: bool,
    view: View,
    ctx: &Context,
) -> Result<Outcome, Failure> {
    let opts = AlphaOptions { primes: ctx.primes.clone(), m_max: max_m, budget: ctx.budget.clone(), over_q, sqrt_k };
    let progress = |line: &str| ctx.progress(line);
    let mut r = tian_verdict(s, &opts, &progress)?;
    if ctx.no_timings {
        r = r.without_timings();
    }
    let json = match view {
        View::Alpha1 => to_json(
            &json!({ "degree": r.degree, "alpha1": r.alpha1, "worst_singularity": r.worst_singularity, "grade": r.grade }),
            ctx,
        ),
        View::Bounds => to_json(&json!({ "degree": r.degree, "bounds": r.bounds, "grade": r.grade }), ctx),
        View::Full => to_json(&r, ctx),
    };
    Ok(Outcome { summary: report_summary(&r, &view, ctx), json, proved: r.grade == Grade::Proof })
}

pub fn classify_section(s: &ProjectiveSurface, point: &str, ctx: &Context) -> Result<Outcome, Failure> {
    let p = SurfacePoint::parse(point).map_err(|e| Failure::Input(e.to_string()))?;
    ctx.progress("tangent section");
    let c = classify_quartic_tangent_section(s, &p, &ctx.budget)?;
    let lct = lct_of_germ(&tangent_section(s, &p)?.germ)?;
    let mut summary = format!("case {}: {}\n", c.case, c.case.description());
    let _ = writeln!(summary, "section: {}", c.curve);
    let _ = writeln!(summary, "multiplicity {}, lct {}", c.inventory.multiplicity, ratio_text::to_text(&lct));
    let json = json!({ "point": p.to_string(), "classification": to_json(&c, ctx), "lct": ratio_text::to_text(&lct) });
    Ok(Outcome { summary, json, proved: true })
}

pub fn lct_germ(text: &str, max_m: u32) -> Result<Outcome, Failure> {
    let g = CurveGerm::parse(text).map_err(|e| Failure::Input(e.to_string()))?;
    let lct = lct_of_germ(&g)?;
    let class = if g.is_reduced_form() { classify_a(&g, max_m).ok() } else { None };
    let mut summary = format!("{}\n", ratio_text::to_text(&lct));
    match class {
        Some(AClass::A(m)) => {
            let _ = writeln!(summary, "type A_{m}");
        }
        Some(AClass::Above(m)) => {
            let _ = writeln!(summary, "type A_m with m > {m}");
        }
        Some(AClass::MultiplicityAtLeast3) => {
            let _ = writeln!(summary, "multiplicity {}", germ_multiplicity(&g));
        }
        Some(AClass::Smooth) => summary.push_str("smooth\n"),
        None => {}
    }
    let json = json!({
        "germ": text,
        "lct": ratio_text::to_text(&lct),
        "multiplicity": germ_multiplicity(&g),
        "class": class,
    });
    Ok(Outcome { summary, json, proved: true })
}

pub fn incidence(d: u32, level: IncidenceLevel) -> Result<Outcome, Failure> {
    let c = incidence_conditions(d, level)?;
    let linear: Vec<String> = c.linear.iter().map(monomial_text).collect();
    let quadratic: Vec<String> = c.quadratic.iter().map(|q| q.to_text()).collect();
    let mut summary = format!("vanishing coefficients: {}\n", linear.join(", "));
    for q in &quadratic {
        let _ = writeln!(summary, "quadratic condition: {q} = 0");
    }
    let _ = writeln!(summary, "linear rank {}, codimension {}", c.linear_rank, c.codimension);
    let json = json!({
        "degree": d,
        "level": level,
        "linear": linear,
        "quadratic": quadratic,
        "linear_rank": c.linear_rank,
        "codimension": c.codimension,
    });
    Ok(Outcome { summary, json, proved: true })
}

pub fn family(d: u32) -> Result<Outcome, Failure> {
    let s = alphasurf::alpha::family_surface(d).map_err(|e| Failure::Input(e.to_string()))?;
    let text = s.to_text();
    Ok(Outcome { summary: format!("{text}\n"), json: json!({ "degree": d, "surface": text }), proved: true })
}
