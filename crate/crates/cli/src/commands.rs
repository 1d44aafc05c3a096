use std::fs;

use donaldson::catalog::{self, CatalogEntry};
use donaldson::geometry::{
    asymptotic_remainder, genus_lower_bound, j_norm, numerology_check, NumerologyViolation, NUMEROLOGY_LABEL,
};
use donaldson::io::{parse_oracle_csv, parse_oracle_rows, parse_ray, parse_ray_sequence_csv, write_oracle_csv};
use donaldson::lattice::{HClass, Lattice, LatticeViolation};
use donaldson::rational::{
    format_rational, parse_rational, serde_bigint, serde_rational, serde_rational_vec, Rational,
};
use donaldson::recovery::{plan_rays, recover_series_report, verify_series, RecoveryConfig, SeriesViolation};
use donaldson::recurrence::{
    minimal_recurrence, prony_recover_with_margin, validate_roots, PronyDecomposition, RootViolation,
};
use donaldson::series::{blow_up, c_on_ray, check_parity, q_from_c, DonaldsonSeries};
use donaldson::table::{MixedInvariantTable, SimpleTypeReport};
use donaldson::Error;
use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::args::{
    AsymptArgs, BlowupArgs, CheckArgs, ClassArgs, Cli, Command, DolgachevArgs, ExpandArgs, RecoverArgs, RecoveryOpts,
    ReduceTableArgs, SequenceArgs,
};
use crate::output::{self, sig12, sig12_value, Format};

pub enum Failure {
    Usage(String),
    Domain(Error),
    /// A complete report whose verdict is a domain error.
    Report(String, Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = Result<String, Failure>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BigIntJson(#[serde(with = "serde_bigint")] pub BigInt);

struct Ctx {
    format: Format,
    paper_backed: bool,
}

impl Ctx {
    /// Warns, or fails under `--paper-backed`, when `Q(S) ≤ 0`.
    fn require_positive(&self, s: &HClass, q: &BigInt) -> Result<(), Failure> {
        if q.is_positive() {
            return Ok(());
        }
        let msg = format!("Q(S) = {q} <= 0 for S = {s}; results are formal, not paper-backed");
        if self.paper_backed {
            return Err(Failure::Domain(Error::HypothesisViolated(msg)));
        }
        eprintln!("dw: warning: {msg}");
        Ok(())
    }
}

pub fn run(cli: &Cli) -> Out {
    let ctx = Ctx {
        format: cli.format,
        paper_backed: cli.paper_backed,
    };
    match &cli.command {
        Command::Catalog { name } => catalog_cmd(&ctx, name.as_deref()),
        Command::Expand(a) => expand(&ctx, a),
        Command::Sequence(a) => sequence(&ctx, a),
        Command::Recover(a) => recover(&ctx, a),
        Command::GenusBound(a) => genus_bound(&ctx, a),
        Command::Jnorm(a) => jnorm(&ctx, a),
        Command::Asympt(a) => asympt(&ctx, a),
        Command::Check(a) => check(&ctx, a),
        Command::Blowup(a) => blowup(&ctx, a),
        Command::Dolgachev(a) => dolgachev(&ctx, a),
        Command::ReduceTable(a) => reduce_table(&ctx, a),
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read `{path}`: {e}")))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Domain(Error::Format(format!("{what}: {e}"))))
}

struct SeriesInput {
    series: DonaldsonSeries,
    entry: Option<CatalogEntry>,
}

fn load_series(src: &str) -> Result<SeriesInput, Failure> {
    if let Some(name) = src.strip_prefix("builtin:") {
        let entry = catalog::get(name)?;
        return Ok(SeriesInput {
            series: entry.series.clone(),
            entry: Some(entry),
        });
    }
    let path = src.strip_prefix("file:").unwrap_or(src);
    let text = read_file(path)?;
    if let Ok(entry) = serde_json::from_str::<CatalogEntry>(&text) {
        return Ok(SeriesInput {
            series: entry.series.clone(),
            entry: Some(entry),
        });
    }
    Ok(SeriesInput {
        series: parse_json(&text, path)?,
        entry: None,
    })
}

fn load_lattice(src: &str) -> Result<Lattice, Failure> {
    if let Some(name) = src.strip_prefix("builtin:") {
        return Ok(catalog::get(name)?.series.lattice);
    }
    let path = src.strip_prefix("file:").unwrap_or(src);
    let text = read_file(path)?;
    if let Ok(l) = serde_json::from_str::<Lattice>(&text) {
        return Ok(l);
    }
    let s: DonaldsonSeries = parse_json(&text, path)?;
    Ok(s.lattice)
}

fn config(opts: &RecoveryOpts) -> Result<RecoveryConfig, Failure> {
    let (Some(bound), Some(max)) = (opts.bound, opts.max_classes) else {
        return Err(Failure::Usage("--bound and --max-classes are required".into()));
    };
    Ok(RecoveryConfig {
        coord_bound: bound,
        max_classes: max,
        degree_margin: opts.degree_margin,
        verify_rays: opts.verify_rays,
        seed: opts.seed,
    })
}

fn class_string(k: &HClass) -> String {
    k.to_string()
}

fn term_rows(series: &DonaldsonSeries) -> Vec<Vec<String>> {
    series
        .terms
        .iter()
        .map(|t| {
            let sq = series.lattice.square(&t.k).map(|x| x.to_string()).unwrap_or_default();
            vec![format_rational(&t.a), class_string(&t.k), sq]
        })
        .collect()
}

fn term_csv(series: &DonaldsonSeries) -> String {
    let mut headers = vec!["a".to_string()];
    headers.extend((1..=series.rank()).map(|i| format!("k{i}")));
    let rows: Vec<Vec<String>> = series
        .terms
        .iter()
        .map(|t| {
            let mut row = vec![format_rational(&t.a)];
            row.extend(t.k.0.iter().map(BigInt::to_string));
            row
        })
        .collect();
    let h: Vec<&str> = headers.iter().map(String::as_str).collect();
    output::csv(&h, &rows)
}

fn series_table(series: &DonaldsonSeries, extra: &[(&str, String)]) -> String {
    let sig = series.lattice.signature();
    let mut fields = extra.to_vec();
    fields.extend([
        ("rank", series.rank().to_string()),
        ("b+", sig.b_plus.to_string()),
        ("sigma", sig.sigma().to_string()),
        ("parity", format!("{:?}", series.parity).to_lowercase()),
        ("classes", series.terms.len().to_string()),
    ]);
    let mut out = output::fields(&fields);
    out.push('\n');
    out.push_str(&output::table(&["a", "K", "K.K"], &term_rows(series)));
    out
}

fn render_series(ctx: &Ctx, series: &DonaldsonSeries) -> String {
    match ctx.format {
        Format::Json => output::json(series),
        Format::Csv => term_csv(series),
        Format::Table => series_table(series, &[]),
    }
}

fn status(entry: &CatalogEntry) -> &'static str {
    if entry.conjectural {
        "conjectural"
    } else {
        "theorem"
    }
}

fn render_entry(ctx: &Ctx, entry: &CatalogEntry) -> String {
    match ctx.format {
        Format::Json => output::json(entry),
        Format::Csv => term_csv(&entry.series),
        Format::Table => series_table(
            &entry.series,
            &[
                ("name", entry.name.clone()),
                ("status", status(entry).into()),
                ("chi", entry.chi.to_string()),
                ("formula", entry.provenance.clone()),
            ],
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub name: String,
    pub rank: usize,
    pub b_plus: usize,
    pub sigma: i64,
    pub chi: i64,
    pub classes: usize,
    pub conjectural: bool,
}

fn catalog_cmd(ctx: &Ctx, name: Option<&str>) -> Out {
    if let Some(name) = name {
        return Ok(render_entry(ctx, &catalog::get(name)?));
    }
    let rows: Vec<CatalogRow> = catalog::list()
        .into_iter()
        .map(|n| {
            let e = catalog::get(n).expect("listed entries exist");
            CatalogRow {
                name: e.name.clone(),
                rank: e.series.rank(),
                b_plus: e.series.lattice.b_plus,
                sigma: e.sigma,
                chi: e.chi,
                classes: e.series.terms.len(),
                conjectural: e.conjectural,
            }
        })
        .collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.rank.to_string(),
                r.b_plus.to_string(),
                r.sigma.to_string(),
                r.chi.to_string(),
                r.classes.to_string(),
                if r.conjectural { "conjectural" } else { "theorem" }.into(),
            ]
        })
        .collect();
    let headers = ["name", "rank", "b_plus", "sigma", "chi", "classes", "status"];
    Ok(match ctx.format {
        Format::Json => output::json(&rows),
        Format::Csv => output::csv(&headers, &cells),
        Format::Table => output::table(&headers, &cells),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandReport {
    #[serde(rename = "S")]
    pub s: HClass,
    #[serde(rename = "qS", with = "serde_rational")]
    pub q_s: Rational,
    #[serde(with = "serde_rational_vec")]
    pub c: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub q: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRay {
    #[serde(rename = "S")]
    pub s: HClass,
    #[serde(rename = "qS", with = "serde_rational")]
    pub q_s: Rational,
    #[serde(with = "serde_rational_vec")]
    pub q: Vec<Rational>,
}

fn rays_from_file(text: &str, rank: usize) -> Result<Vec<(HClass, Option<usize>)>, Failure> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if first.starts_with("s1,") || first.starts_with("d,") {
        return Ok(parse_oracle_rows(text, rank)?
            .into_iter()
            .map(|(s, v)| (s, v.len().checked_sub(1)))
            .collect());
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Ok((parse_ray(l, rank)?, None)))
        .collect()
}

fn expand(ctx: &Ctx, a: &ExpandArgs) -> Out {
    let input = load_series(&a.series)?;
    let series = &input.series;
    let rank = series.rank();
    let rays: Vec<(HClass, usize)> = if let Some(expr) = &a.ray {
        let degree = a
            .degree
            .ok_or_else(|| Failure::Usage("--degree is required with --ray".into()))?;
        let s = parse_ray(expr, rank)?;
        let seq = c_on_ray(series, &s, degree)?;
        ctx.require_positive(&s, &seq.q_s.to_integer())?;
        let q = q_from_c(&seq);
        let report = ExpandReport {
            s: seq.s.clone(),
            q_s: seq.q_s.clone(),
            c: seq.values.clone(),
            q: q.clone(),
        };
        let rows: Vec<Vec<String>> = (0..=degree)
            .map(|d| vec![d.to_string(), format_rational(&seq.values[d]), format_rational(&q[d])])
            .collect();
        return Ok(match ctx.format {
            Format::Json => output::json(&report),
            Format::Csv => output::csv(&["d", "c_d", "q_d"], &rows),
            Format::Table => {
                let mut out = output::fields(&[("S", seq.s.to_string()), ("Q(S)", format_rational(&seq.q_s))]);
                out.push('\n');
                out.push_str(&output::table(&["d", "C_d(S)", "q_d(S)"], &rows));
                out
            }
        });
    } else if a.plan {
        let cfg = config(&a.recovery)?;
        let plan = plan_rays(&series.lattice, &cfg)?;
        let degree = a.degree.unwrap_or(plan.degree);
        plan.all_rays().into_iter().map(|s| (s, degree)).collect()
    } else if let Some(path) = &a.rays {
        rays_from_file(&read_file(path)?, rank)?
            .into_iter()
            .map(|(s, d)| {
                a.degree
                    .or(d)
                    .map(|d| (s, d))
                    .ok_or_else(|| Failure::Usage("--degree is required for a ray list".into()))
            })
            .collect::<Result<_, _>>()?
    } else {
        return Err(Failure::Usage("one of --ray, --plan or --rays is required".into()));
    };

    let mut table = Vec::new();
    for (s, degree) in rays {
        let seq = c_on_ray(series, &s, degree)?;
        ctx.require_positive(&s, &seq.q_s.to_integer())?;
        table.push(OracleRay {
            s,
            q_s: seq.q_s.clone(),
            q: q_from_c(&seq),
        });
    }
    Ok(match ctx.format {
        Format::Json => output::json(&table),
        Format::Csv | Format::Table => {
            let rows: Vec<(HClass, Vec<Rational>)> = table.into_iter().map(|r| (r.s, r.q)).collect();
            write_oracle_csv(rank, &rows)?
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub order: usize,
    /// Characteristic polynomial, constant term first.
    #[serde(with = "serde_rational_vec")]
    pub charpoly: Vec<Rational>,
    pub decomposition: PronyDecomposition,
    #[serde(rename = "qS")]
    pub q_s: Option<BigIntJson>,
    pub genus: Option<u64>,
    pub violations: Option<Vec<RootViolation>>,
}

fn sequence(ctx: &Ctx, a: &SequenceArgs) -> Out {
    let (values, implied_qs) = if let Some(path) = &a.input {
        (parse_ray_sequence_csv(&read_file(path)?)?, None)
    } else {
        let input = load_series(a.series.as_deref().expect("clap enforces --series"))?;
        let s = parse_ray(a.ray.as_deref().expect("clap enforces --ray"), input.series.rank())?;
        let seq = c_on_ray(&input.series, &s, a.degree.expect("clap enforces --degree"))?;
        (seq.values, Some(seq.q_s))
    };
    let q_s = match (&a.qs, implied_qs) {
        (Some(text), _) => Some(parse_rational(text)?),
        (None, q) => q,
    };
    let q_s = match q_s {
        Some(q) if !q.is_integer() => {
            return Err(Failure::Domain(Error::InvalidParameter(format!(
                "Q(S) = {} must be an integer",
                format_rational(&q)
            ))))
        }
        Some(q) => Some(q.to_integer()),
        None => None,
    };
    if let Some(q) = &q_s {
        if !q.is_positive() {
            let msg = format!("Q(S) = {q} <= 0; the parity and support constraints are formal");
            if ctx.paper_backed {
                return Err(Failure::Domain(Error::HypothesisViolated(msg)));
            }
            eprintln!("dw: warning: {msg}");
        }
    }
    let info = minimal_recurrence(&values)?;
    let dec = prony_recover_with_margin(&values, a.margin)?;
    let violations = q_s.as_ref().map(|q| validate_roots(&dec, q, a.genus));
    let report = SequenceReport {
        order: info.order,
        charpoly: info.charpoly,
        decomposition: dec,
        q_s: q_s.map(BigIntJson),
        genus: a.genus,
        violations,
    };
    let rows: Vec<Vec<String>> = report
        .decomposition
        .pairs
        .iter()
        .map(|p| vec![p.root.to_string(), format_rational(&p.alpha)])
        .collect();
    Ok(match ctx.format {
        Format::Json => output::json(&report),
        Format::Csv => output::csv(&["root", "alpha"], &rows),
        Format::Table => {
            let poly: Vec<String> = report.charpoly.iter().map(format_rational).collect();
            let mut fields = vec![
                ("order", report.order.to_string()),
                ("charpoly", format!("[{}] (constant first)", poly.join(", "))),
            ];
            if let Some(v) = &report.violations {
                let text = if v.is_empty() {
                    "none".to_string()
                } else {
                    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
                };
                fields.push(("violations", text));
            }
            let mut out = output::fields(&fields);
            out.push('\n');
            out.push_str(&output::table(&["root", "alpha"], &rows));
            out
        }
    })
}

fn recover(ctx: &Ctx, a: &RecoverArgs) -> Out {
    let cfg = config(&a.recovery)?;
    let report = if let Some(name) = a.oracle.strip_prefix("builtin:") {
        let entry = catalog::get(name)?;
        let lattice = match &a.lattice {
            Some(src) => load_lattice(src)?,
            None => entry.series.lattice.clone(),
        };
        recover_series_report(&entry.series, &lattice, &cfg)?
    } else {
        let path = a.oracle.strip_prefix("file:").unwrap_or(&a.oracle);
        let lattice = match &a.lattice {
            Some(src) => load_lattice(src)?,
            None => return Err(Failure::Usage("--lattice is required with a file oracle".into())),
        };
        let oracle = parse_oracle_csv(&read_file(path)?, &lattice)?;
        recover_series_report(&oracle, &lattice, &cfg)?
    };
    if !report.paper_backed() {
        let msg = "some queried rays have Q(S) <= 0; the reconstruction is algebraic, not paper-backed".to_string();
        if ctx.paper_backed {
            return Err(Failure::Domain(Error::HypothesisViolated(msg)));
        }
        eprintln!("dw: warning: {msg}");
    }
    if a.report {
        return Ok(match ctx.format {
            Format::Json => output::json(&report),
            _ => {
                let rays: Vec<Vec<String>> = report
                    .rays
                    .iter()
                    .map(|r| vec![r.role.clone(), r.q_s.to_string(), r.decomposition.to_string()])
                    .collect();
                let mut out = output::table(&["role", "Q(S)", "decomposition"], &rays);
                out.push('\n');
                out.push_str(&render_series(ctx, &report.series));
                out
            }
        });
    }
    Ok(render_series(ctx, &report.series))
}

fn genus_bound(ctx: &Ctx, a: &ClassArgs) -> Out {
    let input = load_series(&a.series)?;
    let sigma = parse_ray(&a.class, input.series.rank())?;
    let report = genus_lower_bound(&input.series, &sigma)?;
    let cells = vec![
        ("Sigma", report.sigma_class.to_string()),
        ("Sigma.Sigma", report.sigma_self.to_string()),
        ("J(Sigma)", report.j_value.to_string()),
        ("2g-2 >=", report.bound_2g_minus_2.to_string()),
        ("min_genus", report.min_genus.to_string()),
    ];
    Ok(match ctx.format {
        Format::Json => output::json(&report),
        Format::Csv => output::csv(
            &["sigma_self", "j_value", "bound_2g_minus_2", "min_genus"],
            &[cells[1..].iter().map(|(_, v)| v.clone()).collect()],
        ),
        Format::Table => output::fields(&cells),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JReport {
    pub h: HClass,
    #[serde(rename = "J")]
    pub j: BigIntJson,
}

fn jnorm(ctx: &Ctx, a: &ClassArgs) -> Out {
    let input = load_series(&a.series)?;
    let h = parse_ray(&a.class, input.series.rank())?;
    let j = j_norm(&input.series, &h)?;
    Ok(match ctx.format {
        Format::Json => output::json(&JReport { h, j: BigIntJson(j) }),
        Format::Csv => output::csv(&["J"], &[vec![j.to_string()]]),
        Format::Table => output::fields(&[("h", h.to_string()), ("J(h)", j.to_string())]),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptRow {
    pub t: serde_json::Value,
    pub remainder: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptReport {
    #[serde(rename = "S")]
    pub s: HClass,
    #[serde(rename = "qS")]
    pub q_s: BigIntJson,
    #[serde(rename = "J")]
    pub j: BigIntJson,
    pub rows: Vec<AsymptRow>,
}

fn asympt(ctx: &Ctx, a: &AsymptArgs) -> Out {
    let input = load_series(&a.series)?;
    let s = parse_ray(&a.ray, input.series.rank())?;
    let q = input.series.lattice.square(&s)?;
    ctx.require_positive(&s, &q)?;
    let j = j_norm(&input.series, &s)?;
    let values: Vec<(f64, f64)> =
        a.t.iter()
            .map(|&t| asymptotic_remainder(&input.series, &s, t).map(|r| (t, r)))
            .collect::<Result<_, _>>()?;
    let rows: Vec<Vec<String>> = values.iter().map(|(t, r)| vec![sig12(*t), sig12(*r)]).collect();
    Ok(match ctx.format {
        Format::Json => output::json(&AsymptReport {
            s,
            q_s: BigIntJson(q),
            j: BigIntJson(j),
            rows: values
                .iter()
                .map(|(t, r)| AsymptRow {
                    t: sig12_value(*t),
                    remainder: sig12_value(*r),
                })
                .collect(),
        }),
        Format::Csv => output::csv(&["t", "remainder"], &rows),
        Format::Table => {
            let mut out = output::fields(&[("S", s.to_string()), ("Q(S)", q.to_string()), ("J(S)", j.to_string())]);
            out.push('\n');
            out.push_str(&output::table(&["t", "log q(tS) - t^2 Q/2 - t J"], &rows));
            out
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumerologyReport {
    pub label: String,
    pub chi: i64,
    pub sigma: i64,
    pub violations: Vec<NumerologyViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub valid: bool,
    pub parity_ok: bool,
    pub conjectural: bool,
    pub lattice: Vec<LatticeViolation>,
    pub series: Vec<SeriesViolation>,
    pub numerology: Option<NumerologyReport>,
}

fn check(ctx: &Ctx, a: &CheckArgs) -> Out {
    let input = load_series(&a.series)?;
    let series = &input.series;
    let lattice = series.lattice.validate();
    let violations = verify_series(series);
    let chi = a.chi.or(input.entry.as_ref().map(|e| e.chi));
    let sigma = a.sigma.or(input.entry.as_ref().map(|e| e.sigma));
    let numerology = match (chi, sigma) {
        (Some(chi), Some(sigma)) => Some(NumerologyReport {
            label: NUMEROLOGY_LABEL.into(),
            chi,
            sigma,
            violations: numerology_check(series, chi, sigma)?,
        }),
        _ => None,
    };
    let report = CheckReport {
        valid: violations.is_empty() && lattice.iter().all(LatticeViolation::is_warning),
        parity_ok: check_parity(series),
        conjectural: input.entry.as_ref().is_some_and(|e| e.conjectural),
        lattice,
        series: violations,
        numerology,
    };
    let mut lines: Vec<Vec<String>> = Vec::new();
    for v in &report.lattice {
        lines.push(vec!["lattice".into(), v.to_string()]);
    }
    for v in &report.series {
        lines.push(vec!["series".into(), v.to_string()]);
    }
    if let Some(n) = &report.numerology {
        for v in &n.violations {
            lines.push(vec![
                "numerology (conjectural)".into(),
                format!("K = {} has K^2 = {}, expected {}", v.k, v.k_squared, v.expected),
            ]);
        }
    }
    let text = match ctx.format {
        Format::Json => output::json(&report),
        Format::Csv => output::csv(&["check", "finding"], &lines),
        Format::Table => {
            let mut fields = vec![
                ("valid", report.valid.to_string()),
                ("parity", report.parity_ok.to_string()),
            ];
            if report.conjectural {
                fields.push(("status", "conjectural".into()));
            }
            if let Some(n) = &report.numerology {
                fields.push(("numerology", format!("{} ({} violations)", n.label, n.violations.len())));
            }
            let mut out = output::fields(&fields);
            if !lines.is_empty() {
                out.push('\n');
                out.push_str(&output::table(&["check", "finding"], &lines));
            }
            out
        }
    };
    if report.valid {
        Ok(text)
    } else {
        let summary: Vec<String> = report
            .lattice
            .iter()
            .filter(|v| !v.is_warning())
            .map(ToString::to_string)
            .chain(report.series.iter().map(ToString::to_string))
            .collect();
        Err(Failure::Report(text, Error::VerificationFailed(summary.join("; "))))
    }
}

fn blowup(ctx: &Ctx, a: &BlowupArgs) -> Out {
    let input = load_series(&a.series)?;
    match input.entry {
        Some(mut entry) => {
            for _ in 0..a.times {
                entry = entry.blown_up();
            }
            Ok(render_entry(ctx, &entry))
        }
        None => {
            let mut s = input.series;
            for _ in 0..a.times {
                s = blow_up(&s);
            }
            Ok(render_series(ctx, &s))
        }
    }
}

fn dolgachev(ctx: &Ctx, a: &DolgachevArgs) -> Out {
    Ok(render_entry(ctx, &catalog::dolgachev_conjecture(a.pg, &a.mult)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceReport {
    #[serde(rename = "S")]
    pub s: HClass,
    pub simple_type: SimpleTypeReport,
    #[serde(with = "serde_rational_vec")]
    pub q: Vec<Rational>,
}

fn reduce_table(ctx: &Ctx, a: &ReduceTableArgs) -> Out {
    let table: MixedInvariantTable = parse_json(&read_file(&a.table)?, &a.table)?;
    let q = table.reduce()?;
    let report = ReduceReport {
        s: table.s.clone(),
        simple_type: table.simple_type_report(),
        q,
    };
    let rows: Vec<Vec<String>> = report
        .q
        .iter()
        .enumerate()
        .map(|(d, v)| vec![d.to_string(), format_rational(v)])
        .collect();
    Ok(match ctx.format {
        Format::Json => output::json(&report),
        Format::Csv => output::csv(&["d", "q_d"], &rows),
        Format::Table => {
            let mut out = output::fields(&[
                ("S", report.s.to_string()),
                ("simple type", report.simple_type.holds.to_string()),
                (
                    "unchecked entries",
                    report.simple_type.missing_counterparts.len().to_string(),
                ),
            ]);
            out.push('\n');
            out.push_str(&output::table(&["d", "q_d(S)"], &rows));
            out
        }
    })
}
