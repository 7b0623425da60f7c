mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logunit::bundle::{self, FieldBundle};
use logunit::elimination::{desquare, sign_orbit_product};
use logunit::field::log_embed;
use logunit::galois::{change_of_basis_certificate, gram_form, recover_galois_action, weak_minkowski_search, GramForm};
use logunit::group::{cyclic, direct_product, gassmann_equivalent, sym_g_space, GroupTable, PermGroupData};
use logunit::lab::{self, bundle_regulator, Verdict};
use logunit::lattice::{isometry::default_tol, isometry_test, shortest_vectors, similarity_test, GramMatrix};
use logunit::numeric::ball::{parse_decimal, BigReal};
use logunit::numeric::poly::parse_rational;
use logunit::Error;
use report::Report;
use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

const PROBE_PREC: u32 = 512;

#[derive(Parser)]
#[command(name = "logunit", version, about = "Log-unit lattices, regulators and group-ring forms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Working precision in bits (probes default to 512).
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Tolerance, as a decimal or `2^-k` (default `2^-(prec/2)`).
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Coefficient or denominator bound.
    #[arg(long, global = true)]
    bound: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Regulator of a bundle's unit system.
    Regulator {
        #[arg(long)]
        bundle: PathBuf,
    },
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Gassmann equivalence of two named subgroups of a closure group.
    Gassmann {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        h1: Option<String>,
        #[arg(long)]
        h2: Option<String>,
    },
    /// Basis of the symmetric invariant forms for a group (`C4`, `C2xC2`,
    /// `S3`, `D4`, or `perm:(1,2,3);(1,2)`).
    Symg {
        #[arg(long)]
        group: String,
    },
    /// Gram form of a weak Minkowski unit of a Galois bundle.
    Gramform {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, default_value_t = 2)]
        effort: i64,
    },
    /// Rational change of basis from the Gram form to the lattice Gram.
    CertChangeOfBasis {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, default_value_t = 2)]
        effort: i64,
    },
    /// Integer relation probe.
    Relations {
        /// Regulator of a bundle.
        #[arg(long)]
        regulator: Vec<PathBuf>,
        /// Zeta residue of a bundle.
        #[arg(long)]
        residue: Vec<PathBuf>,
        /// `log q` for a positive rational.
        #[arg(long)]
        log: Vec<String>,
        /// `label=decimal`, taken as exact.
        #[arg(long)]
        value: Vec<String>,
    },
    /// Polynomial relation probe on the Gram form of a Galois bundle.
    Genericity {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 2)]
        effort: i64,
    },
    /// Residue at s = 1 of the Dedekind zeta function.
    Residue {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Regulators, Gassmann data, minima, isometry and similarity.
    PairReport {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Sign-orbit product of a linear form and its desquaring.
    Elim {
        /// Comma-separated rationals `c_0,...,c_n`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<String>,
    },
    /// Schema and arithmetic checks on a bundle.
    ValidateBundle {
        path: PathBuf,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Gram matrix of the log-unit lattice.
    Gram {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Minimum and minimal vectors.
    Min {
        /// Bundle or Gram JSON.
        input: PathBuf,
        /// Scale to determinant 1 first.
        #[arg(long)]
        normalize: bool,
    },
    Isometry {
        a: PathBuf,
        b: PathBuf,
    },
    Similarity {
        a: PathBuf,
        b: PathBuf,
    },
}

/// Bad input (exit 2) or a failed computation (exit 1).
enum Failure {
    Usage(String),
    Cert(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Parse(_) | Error::Schema(_) => Failure::Usage(e.to_string()),
            e => Failure::Cert(e),
        }
    }
}

type Out = std::result::Result<Report, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            let s = match cli.global.format {
                Format::Json => r.to_json(),
                Format::Text => r.to_text(),
            };
            let written = match &cli.global.out {
                Some(p) => std::fs::write(p, s).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{s}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Cert(e)) => {
            eprintln!("certification failed: {e}");
            ExitCode::from(1)
        }
    }
}

impl Global {
    fn prec(&self) -> u32 {
        self.prec.unwrap_or(128)
    }

    fn probe_prec(&self) -> u32 {
        self.prec.unwrap_or(PROBE_PREC)
    }

    fn tol(&self, prec: u32) -> std::result::Result<Float, Failure> {
        let Some(t) = &self.tol else { return Ok(default_tol(prec)) };
        if let Some(k) = t.strip_prefix("2^") {
            let k: i32 = k.parse().map_err(|_| usage(format!("bad tolerance {t:?}")))?;
            return Ok(Float::with_val(64, Float::i_exp(1, k)));
        }
        let q = parse_decimal(t).map_err(|_| usage(format!("bad tolerance {t:?}")))?;
        if q <= 0 {
            return Err(usage("tolerance must be positive"));
        }
        Ok(Float::with_val(64, &q))
    }

    fn bound(&self, default: i64) -> std::result::Result<Integer, Failure> {
        match &self.bound {
            None => Ok(Integer::from(default)),
            Some(s) => {
                let q = parse_decimal(s).or_else(|_| parse_rational(s)).map_err(|_| usage(format!("bad bound {s:?}")))?;
                if *q.denom() != 1 || q < 1 {
                    return Err(usage(format!("bound must be a positive integer, got {s:?}")));
                }
                Ok(q.numer().clone())
            }
        }
    }
}

fn load(p: &Path) -> std::result::Result<FieldBundle, Failure> {
    FieldBundle::load(p).map_err(|e| usage(e.to_string()))
}

/// A bundle's lattice Gram, or a Gram matrix file (raw or inside a report).
fn load_gram(p: &Path, prec: u32) -> std::result::Result<(String, GramMatrix), Failure> {
    let s = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
    let v: Value = serde_json::from_str(&s).map_err(|e| usage(format!("{}: {e}", p.display())))?;
    if v.get("schema").and_then(Value::as_str) == Some(bundle::SCHEMA) {
        let b = FieldBundle::from_json(&s).map_err(|e| usage(e.to_string()))?;
        let (_, l, _) = bundle_regulator(&b, prec)?;
        return Ok((b.label, l.gram));
    }
    let raw = match v.get("schema").and_then(Value::as_str) {
        Some(report::REPORT_SCHEMA) => v.pointer("/result/gram_exact").cloned().ok_or_else(|| usage("report has no gram"))?,
        _ => v,
    };
    let g = GramMatrix::from_json(&raw.to_string()).map_err(|e| usage(format!("{}: {e}", p.display())))?;
    Ok((p.display().to_string(), g))
}

fn run(cli: &Cli) -> Out {
    let g = &cli.global;
    match &cli.command {
        Command::Regulator { bundle } => regulator(g, bundle),
        Command::Lattice(c) => lattice(g, c),
        Command::Gassmann { bundle, h1, h2 } => gassmann(bundle, h1.as_deref(), h2.as_deref()),
        Command::Symg { group } => symg(group),
        Command::Gramform { bundle, effort } => gramform(g, bundle, *effort),
        Command::CertChangeOfBasis { bundle, effort } => certificate(g, bundle, *effort),
        Command::Relations { regulator, residue, log, value } => relations(g, regulator, residue, log, value),
        Command::Genericity { bundle, degree, effort } => genericity(g, bundle, *degree, *effort),
        Command::Residue { bundle } => residue(g, bundle),
        Command::PairReport { a, b } => pair(g, a, b),
        Command::Elim { coeffs } => elim(coeffs),
        Command::ValidateBundle { path } => validate(g, path),
    }
}

fn regulator(g: &Global, path: &Path) -> Out {
    let b = load(path)?;
    let (k, l, reg) = bundle_regulator(&b, g.prec())?;
    let body = json!({
        "label": b.label,
        "signature": [k.signature().0, k.signature().1],
        "rank": l.rank(),
        "regulator": report::ball(&reg),
        "provenance": b.provenance.source,
    });
    Ok(Report::new("regulator", body, format!("reg({}) = {}", b.label, report::ball_str(&reg))))
}

fn lattice(g: &Global, c: &LatticeCmd) -> Out {
    let prec = g.prec();
    match c {
        LatticeCmd::Gram { bundle } => {
            let b = load(bundle)?;
            let (_, l, _) = bundle_regulator(&b, prec)?;
            let body = json!({
                "label": b.label,
                "rank": l.rank(),
                "gram": report::gram(&l.gram),
                "gram_exact": l.gram.to_json_value(),
            });
            Ok(Report::new("lattice gram", body, report::gram_text(&l.gram)))
        }
        LatticeCmd::Min { input, normalize } => {
            let (label, mut gm) = load_gram(input, prec)?;
            if *normalize {
                gm = lab::normalize_covolume(&gm)?;
            }
            let sv = shortest_vectors(&gm, 64)?;
            let body = json!({
                "label": label,
                "normalized": normalize,
                "minimum": report::ball(&sv.minimum),
                "vectors": sv.vectors.iter().map(|v| report::integers(v)).collect::<Vec<_>>(),
            });
            let text = format!("min = {} ({} vectors up to sign)", report::ball_str(&sv.minimum), sv.vectors.len());
            Ok(Report::new("lattice min", body, text))
        }
        LatticeCmd::Isometry { a, b } => {
            let (la, ga) = load_gram(a, prec)?;
            let (lb, gb) = load_gram(b, prec)?;
            let v = isometry_test(&ga, &gb, &g.tol(prec)?)?;
            let body = json!({"a": la, "b": lb, "verdict": report::isometry(&v)});
            let r = Report::new("lattice isometry", body, report::isometry_text(&v));
            Ok(if matches!(v, logunit::lattice::IsometryVerdict::Inconclusive { .. }) { r.failed() } else { r })
        }
        LatticeCmd::Similarity { a, b } => {
            let (la, ga) = load_gram(a, prec)?;
            let (lb, gb) = load_gram(b, prec)?;
            let s = similarity_test(&ga, &gb, &g.tol(prec)?)?;
            let body = json!({"a": la, "b": lb, "verdict": report::similarity(&s)});
            let text = format!("{} (lambda = {})", s.tag(), report::ball_str(&s.lambda));
            let r = Report::new("lattice similarity", body, text);
            Ok(if s.tag() == "Inconclusive" { r.failed() } else { r })
        }
    }
}

fn gassmann(path: &Path, h1: Option<&str>, h2: Option<&str>) -> Out {
    let b = load(path)?;
    let grp = b.group()?.ok_or_else(|| usage("bundle has no galois_closure block"))?;
    let names: Vec<String> = grp.subgroups.keys().cloned().collect();
    let (n1, n2) = match (h1, h2) {
        (Some(x), Some(y)) => (x.to_string(), y.to_string()),
        (None, None) if names.len() == 2 => (names[0].clone(), names[1].clone()),
        _ => return Err(usage("name two subgroups with --h1 and --h2")),
    };
    let r = gassmann_equivalent(&grp, &b.subgroup_generators(&n1)?, &b.subgroup_generators(&n2)?)?;
    let body = json!({
        "group_order": grp.order(),
        "h1": n1,
        "h2": n2,
        "equivalent": r.equivalent,
        "conjugate": r.conjugate,
        "class_counts": [r.counts.0, r.counts.1],
    });
    let text = format!(
        "|G| = {}; {n1} and {n2}: Gassmann equivalent = {}, conjugate = {}",
        grp.order(),
        r.equivalent,
        r.conjugate
    );
    Ok(Report::new("gassmann", body, text))
}

fn parse_group(desc: &str) -> std::result::Result<GroupTable, Failure> {
    let bad = || usage(format!("unknown group {desc:?}"));
    if let Some(gens) = desc.strip_prefix("perm:") {
        let gs: Vec<&str> = gens.split(';').map(str::trim).collect();
        let deg = gens
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .ok_or_else(bad)?;
        return Ok(PermGroupData::parse(deg, &gs)?.table(logunit::group::SYM_G_BUDGET)?);
    }
    let mut t: Option<GroupTable> = None;
    for part in desc.split(['x', 'X']) {
        let f = match part.trim() {
            "S3" => PermGroupData::parse(3, &["(1,2,3)", "(1,2)"])?.table(100)?,
            "D4" => PermGroupData::parse(4, &["(1,2,3,4)", "(1,3)"])?.table(100)?,
            "A4" => PermGroupData::parse(4, &["(1,2,3)", "(1,2)(3,4)"])?.table(100)?,
            "S4" => PermGroupData::parse(4, &["(1,2,3,4)", "(1,2)"])?.table(100)?,
            p => {
                let n: usize = p.strip_prefix('C').and_then(|n| n.parse().ok()).ok_or_else(bad)?;
                if n == 0 || n > logunit::group::SYM_G_BUDGET {
                    return Err(bad());
                }
                cyclic(n)
            }
        };
        t = Some(match t {
            None => f,
            Some(prev) => direct_product(&prev, &f),
        });
    }
    t.ok_or_else(bad)
}

fn symg(desc: &str) -> Out {
    let t = parse_group(desc)?;
    let s = sym_g_space(&t)?;
    let body = json!({
        "group": desc,
        "order": t.order(),
        "dim": s.dim(),
        "etas": s.etas.iter().map(|e| report::rationals(e)).collect::<Vec<_>>(),
        "forms": s.forms.iter().map(|f| report::rational_matrix(f)).collect::<Vec<_>>(),
    });
    let text = format!("{desc}: |G| = {}, dim Sym^G(R_Q) = {}", t.order(), s.dim());
    Ok(Report::new("symg", body, text))
}

struct FormData {
    label: String,
    unit: logunit::field::FieldElement,
    images: Vec<String>,
    form: GramForm,
    lattice: logunit::field::LogLattice,
}

fn form_data(b: &FieldBundle, prec: u32, bound: &Integer, effort: i64) -> std::result::Result<FormData, Failure> {
    let k = b.field(prec)?;
    let action = recover_galois_action(&k, prec, bound)?;
    let units = b.unit_system()?;
    units.validate(&k)?;
    let u = weak_minkowski_search(&k, &action, &units, effort, prec)?;
    let v = log_embed(&k, &u, prec)?;
    let form = gram_form(&action, &v, prec)?;
    let (_, lattice, _) = bundle_regulator(b, prec)?;
    Ok(FormData {
        label: b.label.clone(),
        unit: u,
        images: action.images.iter().map(|q| q.to_string()).collect(),
        form,
        lattice,
    })
}

fn gramform(g: &Global, path: &Path, effort: i64) -> Out {
    let b = load(path)?;
    let d = form_data(&b, g.prec(), &g.bound(1_000_000)?, effort)?;
    let body = json!({
        "label": d.label,
        "automorphisms": d.images,
        "unit": d.unit.to_strings(),
        "basis": d.form.basis,
        "gram": report::gram(&d.form.matrix),
        "gram_exact": d.form.matrix.to_json_value(),
    });
    let text = format!(
        "{}: weak Minkowski unit {}\nGram form over basis {:?}:\n{}",
        d.label,
        d.unit,
        d.form.basis,
        report::gram_text(&d.form.matrix)
    );
    Ok(Report::new("gramform", body, text))
}

fn certificate(g: &Global, path: &Path, effort: i64) -> Out {
    let b = load(path)?;
    let prec = g.prec();
    let bound = g.bound(1_000_000)?;
    let d = form_data(&b, prec, &bound, effort)?;
    let c = change_of_basis_certificate(&d.lattice, &d.form, &bound, prec)?;
    let body = json!({
        "label": d.label,
        "unit": d.unit.to_strings(),
        "a": report::rational_matrix(&c.a),
        "residual": c.residual.to_string_radix(10, Some(3)),
        "prec": prec,
    });
    let rows: Vec<String> =
        c.a.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("  ")).collect();
    let text = format!("A =\n{}\nresidual = {}", rows.join("\n"), c.residual.to_string_radix(10, Some(3)));
    Ok(Report::new("cert-change-of-basis", body, text))
}

enum Source {
    Reg(FieldBundle),
    Res(FieldBundle),
    Log(Rational),
    Exact(Rational),
}

fn eval_source(s: &Source, p: u32) -> logunit::Result<BigReal> {
    match s {
        Source::Reg(b) => Ok(bundle_regulator(b, p)?.2),
        Source::Res(b) => Ok(lab::residue_at_one(b, p)?.residue),
        Source::Log(q) => BigReal::from_rational(q, p + 32).ln(),
        Source::Exact(q) => Ok(BigReal::from_rational(q, p + 32)),
    }
}

fn probe_body(r: &lab::ProbeReport) -> Value {
    json!({
        "labels": r.labels,
        "coeff_bound": r.coeff_bound.to_string(),
        "prec": r.prec,
        "values": r.result.values.iter().map(report::ball).collect::<Vec<_>>(),
        "result": report::relation(&r.result),
        "cross_check": report::relation(&r.cross_check),
        "verdict": match r.verdict { Verdict::Found => "FOUND", Verdict::Spurious => "SPURIOUS", Verdict::NoneBelow => "NONE" },
        "text": r.text(),
    })
}

fn relations(g: &Global, regs: &[PathBuf], res: &[PathBuf], logs: &[String], values: &[String]) -> Out {
    let mut labels = Vec::new();
    let mut srcs = Vec::new();
    for p in regs {
        let b = load(p)?;
        labels.push(format!("reg[{}]", b.label));
        srcs.push(Source::Reg(b));
    }
    for p in res {
        let b = load(p)?;
        labels.push(format!("res[{}]", b.label));
        srcs.push(Source::Res(b));
    }
    for q in logs {
        let x = parse_rational(q).map_err(|e| usage(e.to_string()))?;
        if x <= 0 {
            return Err(usage(format!("log of non-positive {q}")));
        }
        labels.push(format!("log({q})"));
        srcs.push(Source::Log(x));
    }
    for v in values {
        let (l, d) = v.split_once('=').ok_or_else(|| usage(format!("expected label=decimal, got {v:?}")))?;
        let x = parse_decimal(d).or_else(|_| parse_rational(d)).map_err(|e| usage(e.to_string()))?;
        labels.push(l.to_string());
        srcs.push(Source::Exact(x));
    }
    if labels.len() < 2 {
        return Err(usage("a probe needs at least two values"));
    }
    let prec = g.probe_prec();
    let r = lab::probe_with(labels, |p| srcs.iter().map(|s| eval_source(s, p)).collect(), &g.bound(1_000_000)?, prec)?;
    let rep = Report::new("relations", probe_body(&r), r.text());
    Ok(if r.verdict == Verdict::Spurious { rep.failed() } else { rep })
}

fn genericity(g: &Global, path: &Path, d: u32, effort: i64) -> Out {
    let b = load(path)?;
    let prec = g.probe_prec();
    let bound = g.bound(1_000_000)?;
    let k = b.field(prec)?;
    let action = recover_galois_action(&k, prec, &Integer::from(1_000_000))?;
    let units = b.unit_system()?;
    let u = weak_minkowski_search(&k, &action, &units, effort, prec)?;
    let r = lab::genericity_probe(
        &action.table,
        |p| {
            let kp = k.at_prec(p)?;
            let v = log_embed(&kp, &u, p)?;
            Ok(gram_form(&action, &v, p)?.matrix)
        },
        d,
        &bound,
        prec,
    )?;
    let mut body = probe_body(&r);
    body["label"] = json!(b.label);
    body["degree"] = json!(d);
    body["unit"] = json!(u.to_strings());
    let text = format!("{}: degree {d}: {}", b.label, r.text());
    let rep = Report::new("genericity", body, text);
    Ok(if r.verdict == Verdict::Spurious { rep.failed() } else { rep })
}

fn residue(g: &Global, path: &Path) -> Out {
    let b = load(path)?;
    let r = lab::residue_at_one(&b, g.prec())?;
    let body = json!({
        "label": r.label,
        "r": r.r,
        "s": r.s,
        "class_number": r.class_number,
        "torsion": r.torsion,
        "disc_abs": r.disc_abs.to_string(),
        "regulator": report::ball(&r.regulator),
        "residue": report::ball(&r.residue),
        "residue_over_reg": format!("{} * pi^{} / sqrt({})", r.factor, r.s, r.disc_abs),
        "provenance": r.provenance,
    });
    let text = format!(
        "res_(s=1) zeta[{}] = {}\n  = {} * pi^{} * reg / sqrt({})",
        r.label,
        report::ball_str(&r.residue),
        r.factor,
        r.s,
        r.disc_abs
    );
    Ok(Report::new("residue", body, text))
}

fn pair(g: &Global, a: &Path, b: &Path) -> Out {
    let ba = load(a)?;
    let bb = load(b)?;
    let r = lab::pair_report(&ba, &bb, g.prec())?;
    let gas = r.gassmann.as_ref().map(|x| json!({"equivalent": x.equivalent, "conjugate": x.conjugate}));
    let imps: Vec<Value> = r
        .implications
        .iter()
        .map(|i| {
            json!({
                "implication": i.name,
                "antecedent": i.antecedent,
                "consequent": i.consequent,
                "status": i.status(),
                "conditional": i.conditional,
            })
        })
        .collect();
    let body = json!({
        "labels": [r.labels.0, r.labels.1],
        "provenance": [r.provenance.0, r.provenance.1],
        "regulators": [report::ball(&r.regulators.0), report::ball(&r.regulators.1)],
        "regulators_overlap": r.regulators_overlap,
        "equal_bits": r.equal_bits,
        "probe": r.probe.as_ref().map(probe_body),
        "class_numbers": [r.class_numbers.0, r.class_numbers.1],
        "gassmann": gas,
        "gassmann_basis": r.gassmann_note,
        "normalized_minima": [report::ball(&r.minima.0), report::ball(&r.minima.1)],
        "minima_separated": r.minima_separated,
        "isometry": report::isometry(&r.isometry),
        "similarity": report::similarity(&r.similarity),
        "implications": imps,
    });
    let mut t = Vec::new();
    t.push(format!("pair: {} / {}", r.labels.0, r.labels.1));
    t.push(format!("reg a = {}", report::ball_str(&r.regulators.0)));
    t.push(format!("reg b = {}", report::ball_str(&r.regulators.1)));
    match r.equal_bits {
        Some(n) => t.push(format!("regulators equal to {n} bits")),
        None => t.push("regulators separated".into()),
    }
    if let Some(p) = &r.probe {
        t.push(format!("relation probe: {}", p.text()));
    }
    match &r.gassmann {
        Some(x) => t.push(format!("Gassmann equivalent: {} (conjugate: {}; {})", x.equivalent, x.conjugate, r.gassmann_note)),
        None => t.push(format!("Gassmann: undecided ({})", r.gassmann_note)),
    }
    t.push(format!(
        "normalized minima: {} / {} ({})",
        report::ball_str(&r.minima.0),
        report::ball_str(&r.minima.1),
        if r.minima_separated { "distinct" } else { "not separated" }
    ));
    t.push(format!("isometry: {}", report::isometry_text(&r.isometry)));
    t.push(format!("similarity: {}", r.similarity.tag()));
    for i in &r.implications {
        let tag = if i.conditional { " [CONDITIONAL]" } else { "" };
        t.push(format!("  {}: {}{tag}", i.name, i.status()));
    }
    let violated = r.implications.iter().any(|i| i.status() == "VIOLATED");
    let rep = Report::new("pair-report", body, t.join("\n"));
    Ok(if violated { rep.failed() } else { rep })
}

fn elim(coeffs: &[String]) -> Out {
    let c: Vec<Rational> = coeffs.iter().map(|s| parse_rational(s.trim())).collect::<Result<_, _>>().map_err(|e| usage(e.to_string()))?;
    if c.len() < 2 {
        return Err(usage("need at least two coefficients"));
    }
    let h = sign_orbit_product(&c)?;
    let d = desquare(&h)?;
    let body = json!({
        "coeffs": report::rationals(&c),
        "product": h.to_string(),
        "desquared": d.to_string(),
        "terms": d.len(),
    });
    Ok(Report::new("elim", body, d.to_string()))
}

fn validate(g: &Global, path: &Path) -> Out {
    let s = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let b = match FieldBundle::from_json(&s) {
        Ok(b) => b,
        Err(e) => {
            let body = json!({"path": path.display().to_string(), "valid": false, "error": e.to_string()});
            return Ok(Report::new("validate-bundle", body, format!("INVALID: {e}")).failed());
        }
    };
    let v = bundle::validate(&b, g.prec());
    let body = json!({"label": v.label, "valid": v.ok(), "checks": v.checks});
    let mut t: Vec<String> = v
        .checks
        .iter()
        .map(|c| format!("{} {}: {}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail))
        .collect();
    t.push(format!("{}: {}", v.label, if v.ok() { "valid" } else { "INVALID" }));
    let rep = Report::new("validate-bundle", body, t.join("\n"));
    Ok(if v.ok() { rep } else { rep.failed() })
}
