//! One function per subcommand. Each returns the JSON document, the text
//! rendering and whether the check it performs passed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gkp_core::degeneracy::{degeneracy_class, degenerate_value, DegClass};
use gkp_core::egf::{
    egf_closed_form, egf_from_triangle, egf_general, matching_cases, pde_residual, special_case_detect, EgfSeries,
    Field, SpecialCase,
};
use gkp_core::exact::{rows_to_strings, triangle as build_triangle};
use gkp_core::params::{apply_involution, derived_type_i};
use gkp_core::residue::{row_poly_residue, ResidueForm, ResidueJob};
use gkp_core::series::Prec;
use gkp_core::{InvolutionKind, ParamTuple, Poly};
use gkp_oeis::{fixture, fixture_ids, Fetcher, TriangleLayout, VerifyStatus};
use rug::{Float, Rational};
use serde_json::{json, Value};

use crate::FormArg;

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

fn poly_string(p: &Poly) -> String {
    let mut parts = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        if *c == 0 {
            continue;
        }
        parts.push(match i {
            0 => c.to_string(),
            1 => format!("{c} x"),
            _ => format!("{c} x^{i}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn classify(p: &ParamTuple) -> Result<Outcome, String> {
    let t = p.classify();
    let case = special_case_detect(p);
    let deg = degeneracy_class(p);
    let derived = derived_type_i(p).ok();
    let mut text = format!("{t}\n");
    if let Some(d) = &derived {
        writeln!(text, "r = {}, r' = {}, s = {}, s' = {}, sigma = {}", d.r, d.rp, d.s, d.sp, d.sigma).unwrap();
    }
    writeln!(text, "closed form: {case}").unwrap();
    writeln!(text, "degeneracy: {deg}").unwrap();
    let json = json!({
        "params": p,
        "type": t.to_string(),
        "derived": derived,
        "special_case": case,
        "matching_cases": matching_cases(p),
        "degeneracy": deg,
    });
    Ok(Outcome { json, text, ok: true })
}

pub fn triangle(p: &ParamTuple, rows: usize) -> Result<Outcome, String> {
    let t = build_triangle(p, rows);
    let strs = rows_to_strings(&t.rows);
    let text = strs.iter().enumerate().map(|(n, r)| format!("{n}: {}\n", r.join(" "))).collect();
    Ok(Outcome { json: json!({ "params": p, "rows": strs }), text, ok: true })
}

pub fn rowpoly(p: &ParamTuple, rows: usize, x: Option<&Rational>) -> Result<Outcome, String> {
    let t = build_triangle(p, rows);
    let mut text = String::new();
    let mut polys = Vec::new();
    let mut values = Vec::new();
    for n in 0..=rows {
        let poly = t.row_poly(n).map_err(|e| e.to_string())?;
        write!(text, "P_{n}(x) = {}", poly_string(&poly)).unwrap();
        if let Some(x) = x {
            let v = poly.eval(x);
            write!(text, "    P_{n}({x}) = {v}").unwrap();
            values.push(v.to_string());
        }
        text.push('\n');
        polys.push(poly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    }
    let mut json = json!({ "params": p, "polys": polys });
    if let Some(x) = x {
        json["x"] = json!(x.to_string());
        json["values"] = json!(values);
    }
    Ok(Outcome { json, text, ok: true })
}

pub fn egf_check(
    p: &ParamTuple,
    x: &Rational,
    order: usize,
    tol: f64,
    case: Option<&str>,
    precision: u32,
) -> Result<Outcome, String> {
    let field = Field::Auto(Prec::from_digits(precision));
    let (label, series) = match case {
        Some("general") => ("general".to_string(), egf_general(p, x, order, field)),
        Some(tag) => {
            let c: SpecialCase = tag.parse()?;
            (format!("case {c}"), egf_closed_form(p, c, x, order, field))
        }
        None => match special_case_detect(p) {
            SpecialCase::None => ("general".to_string(), egf_general(p, x, order, field)),
            c => (format!("case {c}"), egf_closed_form(p, c, x, order, field)),
        },
    };
    let series = series.map_err(|e| e.to_string())?;
    let reference = egf_from_triangle(p, x, order);
    let bits = Prec::from_digits(precision).0;
    let (ok, err) = match &series {
        EgfSeries::Exact(s) => (*s == reference, if *s == reference { 0.0 } else { f64::INFINITY }),
        EgfSeries::Float(_) => {
            let e = series.max_rel_error(&reference, bits).to_f64();
            (e < tol, e)
        }
    };
    let pde_zero = pde_residual(p, order).iter().all(|r| r.is_zero());
    let verdict = if ok { "MATCH" } else { "MISMATCH" };
    let field_name = if series.is_exact() { "exact" } else { "float" };
    let text = format!(
        "{verdict} ({label})\nfield: {field_name}, max relative error: {err:e}\npde residual zero: {pde_zero}\n"
    );
    let json = json!({
        "params": p,
        "x": x.to_string(),
        "order": order,
        "method": label,
        "field": field_name,
        "match": ok,
        "max_rel_error": err,
        "pde_residual_zero": pde_zero,
        "closed_form": series,
        "reference": reference.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    });
    Ok(Outcome { json, text, ok })
}

pub fn residue(
    p: &ParamTuple,
    n: usize,
    x: &Rational,
    precision: Option<u32>,
    form: FormArg,
    tol: f64,
) -> Result<Outcome, String> {
    let mut job = ResidueJob::new(p.clone(), n, x.clone());
    if let Some(d) = precision {
        if d < 50 {
            return Err(format!("--precision must be at least 50 digits, got {d}"));
        }
        job = job.with_precision(d);
    }
    if form == FormArg::Alternative {
        job = job.with_form(ResidueForm::Alternative);
    }
    let v = row_poly_residue(&job).map_err(|e| e.to_string())?;
    let exact = build_triangle(p, n).row_poly(n).map_err(|e| e.to_string())?.eval(x);
    let prec = v.value.prec();
    let ef = Float::with_val(prec, &exact);
    let diff = Float::with_val(prec, &v.value - &ef).abs();
    let rel = (diff / ef.abs().max(&Float::with_val(prec, 1))).to_f64();
    let ok = rel < tol;
    let shown = v.value.to_string_radix(10, Some(job.precision as usize));
    let text = format!(
        "P_{n}({x}) = {shown}\nexact: {exact}\nrelative error: {rel:e} ({})\n",
        if ok { "MATCH" } else { "MISMATCH" }
    );
    let json = json!({
        "params": p,
        "n": n,
        "x": x.to_string(),
        "form": if form == FormArg::Main { "main" } else { "alternative" },
        "digits": job.precision,
        "value": shown,
        "exact": exact.to_string(),
        "rel_error": rel,
        "est_rel_error": v.est_rel_error.to_f64(),
        "match": ok,
    });
    Ok(Outcome { json, text, ok })
}

pub fn degeneracy(p: &ParamTuple, rows: usize) -> Result<Outcome, String> {
    let c = degeneracy_class(p);
    let mut ok = true;
    if c != DegClass::NonDegenerate {
        let t = build_triangle(p, rows);
        'outer: for n in 0..=rows {
            for k in 0..=n {
                if degenerate_value(&c, n as u64, k as u64).map_err(|e| e.to_string())? != t.get(n as i64, k as i64) {
                    ok = false;
                    break 'outer;
                }
            }
        }
    }
    let text = format!("{c}\nclosed form agrees through row {rows}: {ok}\n");
    Ok(Outcome { json: json!({ "params": p, "class": c, "rows": rows, "closed_form_agrees": ok }), text, ok })
}

fn read_prefix(path: &Path) -> Result<Vec<Vec<Rational>>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let raw: Vec<Vec<Value>> = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    raw.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| match v {
                    Value::String(s) => gkp_core::parse_rational(&s),
                    Value::Number(n) => gkp_core::parse_rational(&n.to_string()),
                    other => Err(format!("not a rational: {other}")),
                })
                .collect()
        })
        .collect()
}

pub fn identify(params: Option<&ParamTuple>, prefix: Option<&Path>, rows: usize) -> Result<Outcome, String> {
    let data = match (params, prefix) {
        (Some(p), _) => build_triangle(p, rows).rows,
        (None, Some(path)) => read_prefix(path)?,
        (None, None) => return Err("give --params or --prefix".into()),
    };
    match gkp_oeis::identify(&data) {
        Ok(fam) => {
            let mut text = format!("particular: {}\ndim: {}\n", fam.particular, fam.dim);
            for b in &fam.nullspace_basis {
                let s: Vec<String> = b.iter().map(|q| q.to_string()).collect();
                writeln!(text, "basis: ({})", s.join(",")).unwrap();
            }
            Ok(Outcome { json: json!({ "rows": data.len() - 1, "family": fam }), text, ok: true })
        }
        Err(e) => Ok(Outcome {
            json: json!({ "rows": data.len().saturating_sub(1), "error": e.to_string() }),
            text: format!("{e}\n"),
            ok: false,
        }),
    }
}

pub struct OeisOpts {
    pub anums: Vec<String>,
    pub params: Option<ParamTuple>,
    pub rows: usize,
    pub offline: bool,
    pub cache_dir: PathBuf,
    pub base_url: Option<String>,
    pub layout: (Option<usize>, Option<usize>, Option<usize>),
}

pub fn oeis_verify(o: &OeisOpts) -> Result<Outcome, String> {
    let ids = if o.anums.is_empty() { fixture_ids() } else { o.anums.clone() };
    if o.params.is_some() && ids.len() != 1 {
        return Err("--params needs exactly one --anum".into());
    }
    let mut fetcher = Fetcher::new(&o.cache_dir, o.offline);
    if let Some(u) = &o.base_url {
        fetcher = fetcher.with_base_url(u);
    }
    let mut reports = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    for id in &ids {
        let info = fixture(id).map(|(i, _)| i);
        let p = match (&o.params, &info) {
            (Some(p), _) => p.clone(),
            (None, Some(i)) => i.params.clone(),
            (None, None) => return Err(format!("no parameters known for {id}; pass --params")),
        };
        let base = info.as_ref().map(|i| i.layout).unwrap_or_default();
        let layout = TriangleLayout::new(
            o.layout.0.unwrap_or(base.row_offset),
            o.layout.1.unwrap_or(base.k_offset),
            o.layout.2.unwrap_or(base.k_trim),
        );
        let entry = fetcher.fetch(id).map_err(|e| e.to_string())?;
        let r = gkp_oeis::verify_against(&p, &entry, &layout, o.rows);
        let line = match r.status {
            VerifyStatus::Match => format!("{id} {p}: match through row {}", o.rows),
            VerifyStatus::Mismatch => {
                let m = r.first_mismatch.as_ref().expect("mismatch detail");
                format!("{id} {p}: MISMATCH at ({}, {}): OEIS {} vs triangle {}", m.n, m.k, m.expected, m.got)
            }
            VerifyStatus::NonInteger => format!("{id} {p}: skipped, {}", r.note.as_deref().unwrap_or("")),
            VerifyStatus::TooShort => format!("{id} {p}: FAIL, {}", r.note.as_deref().unwrap_or("")),
        };
        ok &= matches!(r.status, VerifyStatus::Match | VerifyStatus::NonInteger);
        writeln!(text, "{line}").unwrap();
        reports.push(json!({ "params": p, "layout": layout, "source": entry.source, "report": r }));
    }
    Ok(Outcome { json: json!({ "rows": o.rows, "offline": o.offline, "results": reports, "all_match": ok }), text, ok })
}

pub fn involute(p: &ParamTuple, kind: &str, rows: usize) -> Result<Outcome, String> {
    let kind: InvolutionKind = kind.parse().map_err(|e: gkp_core::params::ParamError| e.to_string())?;
    let image = apply_involution(kind, p);
    let twice = apply_involution(kind, &image);
    let t = build_triangle(p, rows);
    let ti = build_triangle(&image, rows);
    let mut holds = true;
    for n in 0..=rows {
        for k in 0..=n {
            let (src, neg) = kind.entry_source(n, k);
            let v = t.get(n as i64, src as i64);
            let want = if neg { -v } else { v };
            holds &= ti.get(n as i64, k as i64) == want;
        }
    }
    let involutive = twice == *p;
    let text = format!(
        "{kind}: {p} -> {image}\ntriangle identity through row {rows}: {holds}\napplied twice: {twice} (identity: {involutive})\n"
    );
    let json = json!({
        "kind": kind.name(),
        "params": p,
        "image": image,
        "image_type": image.classify().to_string(),
        "triangle_identity_holds": holds,
        "applied_twice": twice,
        "applied_twice_is_identity": involutive,
        "rows": rows,
    });
    Ok(Outcome { json, text, ok: holds })
}
