//! Named batches of checks run over a list of primes. Each check either
//! passes, fails with a payload that reproduces the failure, or records the
//! error it hit (for example a characteristic too small for the family).

use serde::Serialize;
use serde_json::{json, Value};

use crate::cremona::{apply, example_line_map, grid_transport_check, incidence, standard_quadratic};
use crate::curves::{common_component_rank_test, intersection_multiplicity, moura_max, Multiplicity, PlaneCurve};
use crate::error::{Error, Result};
use crate::fields::{norm, norm_poly, pi_s_inverse, Field, FieldElem, Scalar};
use crate::grid::{build_graph, find_grid, max_common_neighborhood, Chart, ScanOptions};
use crate::hypersurface::{construct, projective_points, Family, Hypersurface, OpenSet};
use crate::poly::{var_names, Group, MultiPoly};
use crate::s1::{corpus, s1_bruteforce_oracle, s1_classify, s1_reduce, GENERIC_CORPUS, NON_GENERIC_CORPUS};
use crate::sample::{planted_pair, random_bihom, random_point, rng_for};

pub const SUITES: &[&str] = &["default", "families", "norm", "s1", "curves", "cremona"];

/// Plane curve pairs over `y0, y1, y2` whose intersections are all rational.
pub const BEZOUT_PAIRS: &[(&str, &str)] = &[
    ("y0*y2 - y1^2", "y0"),
    ("y0", "y1"),
    ("y0*y2 - y1^2", "y2 - y0"),
    ("y0*y1*(y0 - y1)", "y2*(y0 + y1 + y2)"),
    ("y1^2*y2 - y0^2*(y0 + y2)", "y1"),
    ("y0*y2 - y1^2", "y0*y2 - 2*y1^2 + y0^2"),
    ("y1^2*y2 - y0^3", "y1"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeResult {
    pub p: u64,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub suite: String,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub results: Vec<PrimeResult>,
    pub all_pass: bool,
}

struct Ctx<'a> {
    p: u64,
    seed: u64,
    opts: &'a ScanOptions,
}

type Check = fn(&Ctx) -> Result<(bool, Value)>;

fn checks_for(suite: &str) -> Result<Vec<(&'static str, Check)>> {
    let families: Vec<(&'static str, Check)> = vec![
        ("1a.edges_and_grid", check_1a),
        ("1b.max_common", check_1b),
        ("1c.degrees_and_max_common", check_1c),
        ("1d.max_common", check_1d),
        ("sections.generic_degree", check_sections),
    ];
    let norm: Vec<(&'static str, Check)> = vec![("norm.pointwise", check_norm)];
    let s1: Vec<(&'static str, Check)> = vec![("s1.oracle_agreement", check_s1), ("s1.reduce", check_s1_reduce)];
    let curves: Vec<(&'static str, Check)> = vec![
        ("curves.bezout", check_bezout),
        ("curves.moura", check_moura),
        ("curves.rank_test", check_rank_test),
    ];
    let cremona: Vec<(&'static str, Check)> =
        vec![("cremona.transport", check_transport), ("cremona.line_degrees", check_line_degrees)];
    Ok(match suite {
        "families" => families,
        "norm" => norm,
        "s1" => s1,
        "curves" => curves,
        "cremona" => cremona,
        "default" => [families, norm, s1, curves, cremona].concat(),
        other => return Err(Error::UnknownSuite(other.to_string())),
    })
}

/// Run every check of `suite` at every prime. Deterministic given `seed`.
pub fn run_sweep(suite: &str, primes: &[u64], seed: u64, opts: &ScanOptions) -> Result<SweepReport> {
    let checks = checks_for(suite)?;
    for &p in primes {
        Field::prime(p)?;
    }
    let mut results = Vec::with_capacity(primes.len());
    for &p in primes {
        let ctx = Ctx { p, seed, opts };
        let checks = checks
            .iter()
            .map(|(name, run)| {
                let (status, detail) = match run(&ctx) {
                    Ok((true, d)) => (Status::Pass, d),
                    Ok((false, d)) => (Status::Fail, d),
                    Err(e) => (Status::Error, json!({ "error": e.to_string() })),
                };
                CheckResult { name: name.to_string(), status, detail }
            })
            .collect();
        results.push(PrimeResult { p, checks });
    }
    let all_pass = results.iter().all(|r| r.checks.iter().all(|c| c.status == Status::Pass));
    Ok(SweepReport { suite: suite.to_string(), primes: primes.to_vec(), seed, results, all_pass })
}

fn family_graph(ctx: &Ctx, family: Family, s: usize) -> Result<crate::grid::BipartiteGraph> {
    let c = construct(family, ctx.p, s)?;
    build_graph(
        &c.hypersurface,
        ctx.p,
        &OpenSet::full(s, Group::X),
        &OpenSet::full(s, Group::Y),
        Chart::Affine,
        ctx.opts,
    )
}

fn check_1a(ctx: &Ctx) -> Result<(bool, Value)> {
    let g = family_graph(ctx, Family::Hyperbola, 2)?;
    let expected = ctx.p.pow(3) - ctx.p;
    let grid = find_grid(&g, 2, 2, ctx.opts)?;
    let ok = g.edge_count() == expected && grid.is_none();
    Ok((ok, json!({ "edges": g.edge_count(), "expected_edges": expected, "grid": grid })))
}

fn max_common_check(ctx: &Ctx, family: Family, s: usize, bound: u32) -> Result<(bool, Value)> {
    let g = family_graph(ctx, family, s)?;
    let m = max_common_neighborhood(&g, s, ctx.opts)?;
    let labels: Vec<String> = m.left.iter().map(|&i| g.left_label(i)).collect();
    Ok((m.size <= bound, json!({ "s": s, "max": m.size, "bound": bound, "S": labels })))
}

fn check_1b(ctx: &Ctx) -> Result<(bool, Value)> {
    max_common_check(ctx, Family::Sphere, 3, 2)
}

fn check_1c(ctx: &Ctx) -> Result<(bool, Value)> {
    let g = family_graph(ctx, Family::Norm, 2)?;
    let want = (ctx.p + 1) as u32;
    let bad_left = (0..g.left_len()).find(|&i| g.degree(i) != want);
    let gt = g.transpose();
    let bad_right = (0..gt.left_len()).find(|&j| gt.degree(j) != want);
    let (ok, mut detail) = max_common_check(ctx, Family::Norm, 2, 2)?;
    detail["degree"] = json!(want);
    detail["bad_left"] = json!(bad_left.map(|i| g.left_label(i)));
    detail["bad_right"] = json!(bad_right.map(|j| g.right_label(j)));
    Ok((ok && bad_left.is_none() && bad_right.is_none(), detail))
}

fn check_1d(ctx: &Ctx) -> Result<(bool, Value)> {
    max_common_check(ctx, Family::ProjectiveNorm, 2, 1)
}

const SECTION_SAMPLES: usize = 50;

fn check_sections(ctx: &Ctx) -> Result<(bool, Value)> {
    let fp = Field::prime(ctx.p)?;
    let mut rng = rng_for(ctx.seed, ctx.p, "sections");
    let mut report = Vec::new();
    let mut ok = true;
    for (family, s) in [(Family::Hyperbola, 2), (Family::Sphere, 3), (Family::Norm, 2), (Family::ProjectiveNorm, 2)] {
        let h = construct(family, ctx.p, s)?.hypersurface;
        let dy = h.bidegree().1;
        let mut full = 0;
        let mut drops = Vec::new();
        for _ in 0..SECTION_SAMPLES {
            let u = random_point(&fp, s, &mut rng);
            let sec = h.section(&u)?;
            if !sec.is_zero() && sec.total_degree() == dy {
                full += 1;
            } else if drops.len() < 3 {
                drops.push(u.format(&fp));
            }
        }
        ok &= full * 10 >= SECTION_SAMPLES * 9;
        report.push(json!({ "family": family.tag(), "full_degree": full, "samples": SECTION_SAMPLES, "drops": drops }));
    }
    Ok((ok, Value::Array(report)))
}

fn check_norm(ctx: &Ctx) -> Result<(bool, Value)> {
    let mut report = Vec::new();
    let mut ok = true;
    for s in [2u32, 3] {
        let np = norm_poly(ctx.p, s)?;
        let ext = Field::extension(ctx.p, s)?;
        let mut mismatch = None;
        for a in ext.elements()? {
            let alpha = FieldElem::new(&ext, a)?;
            let coords: Vec<Scalar> = pi_s_inverse(&alpha)?.into_iter().map(FieldElem::into_value).collect();
            if np.evaluate(&coords)? != *norm(&alpha)?.value() {
                mismatch = Some(coords.iter().map(|c| np.field().format(c)).collect::<Vec<_>>());
                break;
            }
        }
        let degree_ok = np.total_degree() <= s;
        ok &= degree_ok && mismatch.is_none();
        report.push(json!({ "s": s, "degree": np.total_degree(), "mismatch": mismatch }));
    }
    Ok((ok, Value::Array(report)))
}

fn check_s1(ctx: &Ctx) -> Result<(bool, Value)> {
    let mut unsound = Vec::new();
    let mut disagreements = Vec::new();
    let mut skipped = Vec::new();
    for (set, exact) in [(GENERIC_CORPUS, true), (NON_GENERIC_CORPUS, false)] {
        for c in corpus(set) {
            let v = s1_classify(&c.form, &c.x, &c.y, 1)?;
            for t in 1..=5 {
                let o = match s1_bruteforce_oracle(&c.form, &c.x, &c.y, t, ctx.p, ctx.opts) {
                    Err(Error::BadReduction(_)) => {
                        skipped.push(c.name.clone());
                        break;
                    }
                    o => o?,
                };
                let classified = v.grid_free_for(t);
                if classified == o.grid_free {
                    continue;
                }
                let case = json!({ "form": c.name, "t": t, "M": v.total, "max_row": o.max_row, "at": o.max_row_at });
                if classified && !o.grid_free {
                    unsound.push(case);
                } else if exact {
                    disagreements.push(case);
                }
            }
        }
    }
    // exact agreement on the generic corpus is only claimed from p = 5 on
    let ok = unsound.is_empty() && (ctx.p < 5 || disagreements.is_empty());
    Ok((ok, json!({ "unsound": unsound, "generic_disagreements": disagreements, "no_reduction": skipped })))
}

fn check_s1_reduce(ctx: &Ctx) -> Result<(bool, Value)> {
    let fp = Field::prime(ctx.p)?;
    let pts = projective_points(&fp, 1)?;
    let mut bad = Vec::new();
    let mut skipped = Vec::new();
    for c in corpus(GENERIC_CORPUS) {
        let v = s1_classify(&c.form, &c.x, &c.y, 1)?;
        let r = s1_reduce(&c.form, &c.x, &c.y)?;
        let coerced = Hypersurface::new(c.form.clone()).coerce(&fp).and_then(|hf| Ok((hf, Hypersurface::new(r.clone()).coerce(&fp)?)));
        let (hf, hr) = match coerced {
            Err(Error::BadReduction(_)) => {
                skipped.push(c.name.clone());
                continue;
            }
            pair => pair?,
        };
        let (x, y) = (c.x.coerce(&fp)?, c.y.coerce(&fp)?);
        let mut same = r.bidegree().1 == v.total;
        for u in pts.iter().filter(|u| x.contains(u).unwrap_or(false)) {
            for w in pts.iter().filter(|w| y.contains(w).unwrap_or(false)) {
                same &= hf.contains(u, w)? == hr.contains(u, w)?;
            }
        }
        if !same {
            bad.push(json!({ "form": c.name, "reduced": r.poly().to_string(), "M": v.total }));
        }
    }
    Ok((bad.is_empty(), json!({ "mismatches": bad, "no_reduction": skipped })))
}

fn plane(field: &Field, expr: &str) -> Result<PlaneCurve> {
    PlaneCurve::new(&MultiPoly::parse(field, &var_names("y", 3), expr)?)
}

fn check_bezout(ctx: &Ctx) -> Result<(bool, Value)> {
    let fp = Field::prime(ctx.p)?;
    let pts = projective_points(&fp, 2)?;
    let mut report = Vec::new();
    let mut ok = true;
    for (a, b) in BEZOUT_PAIRS {
        let (f, g) = (plane(&fp, a)?, plane(&fp, b)?);
        let mut total = 0u64;
        let mut infinite = false;
        for v in &pts {
            let v = crate::hypersurface::ProjPoint::new(&fp, v.clone())?;
            match intersection_multiplicity(&f, &g, &v)? {
                Multiplicity::Finite(k) => total += k as u64,
                Multiplicity::Infinite => infinite = true,
            }
        }
        let want = (f.degree() * g.degree()) as u64;
        ok &= !infinite && total == want;
        report.push(json!({ "f": a, "g": b, "sum": total, "bezout": want }));
    }
    Ok((ok, Value::Array(report)))
}

fn check_moura(_ctx: &Ctx) -> Result<(bool, Value)> {
    let mut strict_fail = Vec::new();
    for d1 in 3..=10u64 {
        for d2 in 1..=10u64 {
            if moura_max(d1, d2) >= d1 * d2 {
                strict_fail.push([d1, d2]);
            }
        }
    }
    Ok((strict_fail.is_empty(), json!({ "not_below_product": strict_fail })))
}

const RANK_INSTANCES: usize = 10;

fn check_rank_test(ctx: &Ctx) -> Result<(bool, Value)> {
    let fp = Field::prime(ctx.p)?;
    let mut rng = rng_for(ctx.seed, ctx.p, "rank_test");
    let mut bad = Vec::new();
    for i in 0..2 * RANK_INSTANCES {
        let planted = i < RANK_INSTANCES;
        let d1 = 1 + (i % 3) as u32;
        let d2 = 1 + ((i / 3) % 3) as u32;
        let (h1, h2) = if planted {
            planted_pair(&fp, d1, d2, &mut rng)?
        } else {
            (random_bihom(&fp, 2, 2, 1, d1, &mut rng), random_bihom(&fp, 2, 2, 1, d2, &mut rng))
        };
        let (u, s1, s2) = loop {
            let u = random_point(&fp, 2, &mut rng);
            let s1 = Hypersurface::new(h1.clone()).section(&u)?;
            let s2 = Hypersurface::new(h2.clone()).section(&u)?;
            if !s1.is_zero() && !s2.is_zero() {
                break (u, s1, s2);
            }
        };
        let r = common_component_rank_test(&h1, &h2, &u)?;
        let shared = !s1.gcd(&s2).is_constant();
        if r.shares_component != shared || (planted && !shared) {
            bad.push(json!({ "h1": h1.poly().to_string(), "h2": h2.poly().to_string(), "u": u.format(&fp) }));
        }
    }
    Ok((bad.is_empty(), json!({ "instances": 2 * RANK_INSTANCES, "failures": bad })))
}

fn check_transport(ctx: &Ctx) -> Result<(bool, Value)> {
    let q = Field::rationals();
    let r = grid_transport_check(&incidence(&q, 2), &standard_quadratic(&q), ctx.p, 2, 2, ctx.opts)?;
    let ok = r.consistent && r.pullback_grid.is_none() && r.original_grid.is_none();
    Ok((ok, serde_json::to_value(r).expect("serializable")))
}

fn check_line_degrees(ctx: &Ctx) -> Result<(bool, Value)> {
    let fp = Field::prime(ctx.p)?;
    let h0 = incidence(&fp, 2);
    let mut degrees = Vec::new();
    for d in 2..=6u32 {
        let mut f = vec![fp.zero(); d as usize + 1];
        f[d as usize] = fp.one();
        let h1 = apply(None, Some(&example_line_map(&fp, d, &f)?), &h0)?;
        degrees.push(h1.bidegree().1);
    }
    Ok((degrees == [2, 3, 4, 5, 6], json!({ "y_degrees": degrees })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_and_empty() {
        let o = ScanOptions::default();
        assert!(matches!(run_sweep("nope", &[5], 0, &o), Err(Error::UnknownSuite(_))));
        let r = run_sweep("default", &[], 0, &o).unwrap();
        assert!(r.all_pass);
        assert!(r.results.is_empty());
        assert!(run_sweep("norm", &[4], 0, &o).is_err());
    }

    #[test]
    fn small_characteristic_is_recorded() {
        let r = run_sweep("families", &[2], 0, &ScanOptions::default()).unwrap();
        let c = r.results[0].checks.iter().find(|c| c.name == "1b.max_common").unwrap();
        assert_eq!(c.status, Status::Error);
        assert!(c.detail["error"].as_str().unwrap().contains("characteristic"));
        assert!(!r.all_pass);
    }

    #[test]
    fn quick_suites_pass_at_five() {
        for suite in ["norm", "s1", "curves", "cremona"] {
            let r = run_sweep(suite, &[5], 0, &ScanOptions::default()).unwrap();
            assert!(r.all_pass, "{}", serde_json::to_string(&r).unwrap());
        }
    }
}
